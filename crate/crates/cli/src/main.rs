//! `flagdom`: enumeration, domination checks and the certificate pipeline.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flagdom::certificate::{verify, Certificate, Verdict};
use flagdom::constraints::{assemble, default_fraction, default_target, default_type_plan, BuildConfig, SdpProblem};
use flagdom::domination::{best_strong_domination, blowup, exhaustive_min_domination, kierstead};
use flagdom::enumerate::{color_orbits, enumerate_graphs};
use flagdom::flags::{enumerate_flags, pair_counts, Flag};
use flagdom::io::write_atomic;
use flagdom::rational::{format_rational, parse_rational, to_f64, Rational};
use flagdom::rounding::{round_solution, RoundingOptions};
use flagdom::sdp::{parse_solution, run_solver, write_interchange};
use flagdom::{ColoredGraph, Error};

#[derive(Parser, Debug)]
#[command(name = "flagdom", version, about = "Flag-algebra certificates for monochromatic domination")]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every coloured complete graph of one order up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Best monochromatic strong domination by a t-set.
    Oracle(OracleArgs),
    /// Print an extremal construction.
    Kierstead(KiersteadArgs),
    /// Random blow-up of a graph.
    Blowup(BlowupArgs),
    /// Exhaustive minimum of the best t-set domination over all graphs.
    Sweep(SweepArgs),
    /// Pair-density matrices of one flag basis over every host.
    Coeffs(CoeffsArgs),
    /// Assemble the constraint problem.
    Build(BuildArgs),
    /// Export a problem and run the external solver.
    Solve(SolveArgs),
    /// Round a solver solution to an exact certificate.
    Round(RoundArgs),
    /// Check a certificate from first principles.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 3)]
    r: u8,
    /// Keep one representative per colour-permutation orbit, with orbit sizes.
    #[arg(long)]
    orbits: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// A graph line `n:digits` or a file whose first line is one.
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 3)]
    t: usize,
    #[arg(long, default_value_t = 3)]
    r: u8,
}

#[derive(Args, Debug)]
struct KiersteadArgs {
    /// Class sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    classes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    r: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BlowupArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    r: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 3)]
    r: u8,
    #[arg(long, default_value_t = 3)]
    t: usize,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 3)]
    r: u8,
    /// The type as a flag line, e.g. `2|2:0`.
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long, default_value_t = 6)]
    l: usize,
    /// `X`, `rainbow5`, or a file of `weight graph` lines.
    #[arg(long, default_value = "default")]
    target: String,
    /// Type plan as `s:m` pairs, e.g. `0:3,2:4,4:5`.
    #[arg(long, value_delimiter = ',')]
    plan: Vec<String>,
    /// Largest good-pair flag order (defaults to l - 1; below 3 drops them).
    #[arg(long)]
    max_flag_order: Option<usize>,
    #[arg(long)]
    fraction: Option<String>,
    /// Keep one row per host instead of per colour orbit.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also write the sparse SDPA file.
    #[arg(long)]
    dat_s: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    workdir: PathBuf,
}

#[derive(Args, Debug)]
struct RoundArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 4294967296)]
    denominator: u64,
    /// Largest identity shift allowed when repairing blocks.
    #[arg(long, default_value = "1/1024")]
    budget: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    certificate: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Enumerate(a) => enumerate(a),
        Command::Oracle(a) => oracle(a),
        Command::Kierstead(a) => {
            let g = kierstead(&a.classes, a.r)?;
            emit_graph(&g, a.out.as_deref())?;
            Ok(0)
        }
        Command::Blowup(a) => {
            let g = blowup(&read_graph(&a.graph, a.r)?, a.n, a.seed)?;
            emit_graph(&g, a.out.as_deref())?;
            Ok(0)
        }
        Command::Sweep(a) => {
            let res = exhaustive_min_domination(a.l, a.r, a.t)?;
            println!(
                "minimum strong domination by a {}-set over {} graphs on {} vertices: {} ({} of the vertices)",
                a.t,
                res.graphs_checked,
                a.l,
                res.min_count,
                format_rational(&res.fraction)
            );
            println!("minimizer {} colour {} set {:?}", res.graph, res.best.color, res.best.witness);
            Ok(0)
        }
        Command::Coeffs(a) => coeffs(a),
        Command::Build(a) => build(a),
        Command::Solve(a) => {
            let p = SdpProblem::read(&a.problem)?;
            let (sol, path) = run_solver(&p, &a.workdir)?;
            println!(
                "solver {}: objective {} ({} rows); solution in {}",
                sol.status,
                sol.objective,
                p.rows.len(),
                path.display()
            );
            Ok(0)
        }
        Command::Round(a) => {
            let p = SdpProblem::read(&a.problem)?;
            let sol = parse_solution(&a.solution, &p)?;
            if a.denominator == 0 {
                return Err(Error::InvalidArgument("denominator must be positive".into()));
            }
            let options = RoundingOptions {
                denominator: a.denominator.into(),
                lambda_budget: parse_rational(&a.budget)?,
                ..RoundingOptions::default()
            };
            let rounded = round_solution(&sol, &p, &options)?;
            rounded.certificate.write(&a.out)?;
            println!(
                "certified bound {} (~{:.9}), solver objective {}, denominator {}",
                format_rational(&rounded.certificate.bound),
                to_f64(&rounded.certificate.bound),
                sol.objective,
                rounded.denominator
            );
            Ok(0)
        }
        Command::Verify(a) => {
            let cert = Certificate::read(&a.certificate)?;
            let report = verify(&cert)?;
            if let Some(path) = &a.report {
                write_atomic(path, report.to_text().as_bytes())?;
            }
            let verdict = match report.verdict {
                Verdict::Accept => "ACCEPT",
                Verdict::Reject => "REJECT",
            };
            println!(
                "{verdict}: bound {}, max slack {} over {} hosts",
                format_rational(&cert.bound),
                format_rational(&report.max_slack),
                report.slacks.len()
            );
            Ok(if report.verdict == Verdict::Accept { 0 } else { 2 })
        }
    }
}

fn enumerate(a: EnumerateArgs) -> Result<u8, Error> {
    let mut fam = enumerate_graphs(a.l, a.r)?;
    if a.orbits {
        fam = color_orbits(&fam);
    }
    match &a.out {
        Some(path) => {
            fam.write(path)?;
            println!("{} graphs on {} vertices written to {}", fam.len(), a.l, path.display());
        }
        None => {
            let mut text = String::new();
            for (i, g) in fam.members.iter().enumerate() {
                match &fam.orbit_sizes {
                    Some(sizes) => text.push_str(&format!("{g} {}\n", sizes[i])),
                    None => text.push_str(&format!("{g}\n")),
                }
            }
            print!("{text}");
        }
    }
    Ok(0)
}

fn oracle(a: OracleArgs) -> Result<u8, Error> {
    let g = read_graph(&a.graph, a.r)?;
    let best = best_strong_domination(&g, a.t)?;
    println!(
        "best {}-set strongly dominates {} of {} vertices in colour {}",
        a.t,
        best.dominated_count,
        g.order(),
        best.color
    );
    println!("witness {:?}", best.witness);
    Ok(0)
}

fn coeffs(a: CoeffsArgs) -> Result<u8, Error> {
    let sigma = Flag::parse(&a.sigma, a.r)?;
    if !sigma.is_type() {
        return Err(Error::TypeMismatch(format!("{sigma} is not a type")));
    }
    if a.m < sigma.order() || 2 * a.m - sigma.order() > a.l {
        return Err(Error::InvalidArgument(format!("need 2m - |σ| <= {}", a.l)));
    }
    let basis = enumerate_flags(&sigma, a.m)?;
    let fam = enumerate_graphs(a.l, a.r)?;
    let mut text = String::new();
    for (idx, h) in fam.members.iter().enumerate() {
        let counts = pair_counts(&basis, h)?;
        for &(i, j, c) in &counts.entries {
            let v = Rational::new(c.into(), counts.denominator.into());
            text.push_str(&format!("{idx} {i} {j} {}\n", format_rational(&v)));
        }
    }
    write_atomic(&a.out, text.as_bytes())?;
    println!(
        "basis of {} flags over {sigma}; {} hosts written to {}",
        basis.len(),
        fam.len(),
        a.out.display()
    );
    Ok(0)
}

fn build(a: BuildArgs) -> Result<u8, Error> {
    let target = match a.target.as_str() {
        "default" => default_target(a.l)?,
        "X" | "x" => default_target(6)?,
        "rainbow5" => default_target(5)?,
        path => read_target(Path::new(path))?,
    };
    let plan = if a.plan.is_empty() {
        default_type_plan(a.l)?
    } else {
        a.plan.iter().map(|s| parse_plan_entry(s)).collect::<Result<_, _>>()?
    };
    let config = BuildConfig {
        level: a.l,
        colors: 3,
        fraction: match &a.fraction {
            Some(f) => parse_rational(f)?,
            None => default_fraction(),
        },
        target,
        plan,
        max_flag_order: a.max_flag_order,
        symmetrize: !a.no_symmetry,
    };
    let p = assemble(&config)?;
    p.write(&a.out)?;
    if let Some(path) = &a.dat_s {
        write_interchange(&p, path)?;
    }
    let dims: Vec<String> = p.blocks.iter().map(|b| b.dim.to_string()).collect();
    println!(
        "level {}: {} rows, {} blocks (dimensions {}), {} good pairs, {} variables",
        p.level,
        p.rows.len(),
        p.blocks.len(),
        dims.join(","),
        p.good_pairs.len(),
        p.num_variables()
    );
    Ok(0)
}

fn parse_plan_entry(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::InvalidArgument(format!("plan entry `{s}` is not of the form s:m"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn read_target(path: &Path) -> Result<Vec<(ColoredGraph, Rational)>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (w, g) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected `weight graph`".into(),
            })?;
        out.push((ColoredGraph::parse(g.trim(), 3)?, parse_rational(w)?));
    }
    Ok(out)
}

fn read_graph(arg: &str, r: u8) -> Result<ColoredGraph, Error> {
    let path = Path::new(arg);
    if !arg.contains(':') || path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .ok_or_else(|| Error::InvalidGraph(format!("{arg} holds no graph")))?;
        let first = line.split_whitespace().next().unwrap_or(line);
        return ColoredGraph::parse(first, r);
    }
    ColoredGraph::parse(arg, r)
}

fn emit_graph(g: &ColoredGraph, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => {
            write_atomic(path, format!("{g}\n").as_bytes())?;
            println!("graph on {} vertices written to {}", g.order(), path.display());
        }
        None => println!("{g}"),
    }
    Ok(())
}

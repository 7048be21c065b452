//! End-to-end checks on the level-5 problem; these need the external solver.

use std::collections::HashMap;
use std::sync::OnceLock;

use flagdom::certificate::{verify, Certificate, Verdict};
use flagdom::constraints::{assemble, target_density, BuildConfig, SdpProblem};
use flagdom::domination::{blowup, kierstead};
use flagdom::enumerate::induced_class_counts;
use flagdom::rational::{rat, to_f64};
use flagdom::rounding::{round_solution, RoundingOptions};
use flagdom::sdp::{parse_solution, run_solver, SolverSolution, SparseSdp};
use flagdom::{ColoredGraph, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Solved {
    problem: SdpProblem,
    solution: SolverSolution,
    _dir: tempfile::TempDir,
    solution_path: std::path::PathBuf,
}

fn solved() -> &'static Solved {
    static CELL: OnceLock<Solved> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = BuildConfig {
            max_flag_order: Some(4),
            ..BuildConfig::default_for(5).unwrap()
        };
        let problem = assemble(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (solution, solution_path) = run_solver(&problem, dir.path()).unwrap();
        Solved {
            problem,
            solution,
            _dir: dir,
            solution_path,
        }
    })
}

fn rounded(options: &RoundingOptions) -> Certificate {
    let s = solved();
    round_solution(&s.solution, &s.problem, options).unwrap().certificate
}

#[test]
fn interchange_serialization_is_stable() {
    let p = &solved().problem;
    let text = SparseSdp::from_problem(p).to_text();
    let again = SparseSdp::parse(&text).unwrap().to_text();
    assert_eq!(text, again);
    let dump = {
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        buf
    };
    let reread = SdpProblem::read_from(&mut dump.as_slice()).unwrap();
    let mut buf = Vec::new();
    reread.write_to(&mut buf).unwrap();
    assert_eq!(dump, buf);
}

#[test]
fn recomputed_rows_match_the_objective() {
    let s = solved();
    let x = s.solution.variables(&s.problem);
    let worst = s
        .problem
        .rows
        .iter()
        .map(|r| s.problem.row_value_f64(r, &x))
        .fold(f64::NEG_INFINITY, f64::max);
    // The solver stops at relative gap 1e-8; allow 1e-6 on top.
    assert!((worst - s.solution.objective).abs() <= 1e-6, "{worst} vs {}", s.solution.objective);
    let reparsed = parse_solution(&s.solution_path, &s.problem).unwrap();
    assert_eq!(reparsed.blocks.len(), s.solution.blocks.len());
    assert!((reparsed.objective - s.solution.objective).abs() < 1e-12);
}

#[test]
fn rounding_closes_the_gap() {
    let s = solved();
    let options = RoundingOptions {
        denominator: (1u64 << 20).into(),
        ..RoundingOptions::default()
    };
    let cert = rounded(&options);
    let report = verify(&cert).unwrap();
    assert_eq!(report.verdict, Verdict::Accept);
    assert!(cert.bound < Rational::one());
    assert!(to_f64(&cert.bound) <= s.solution.objective + 1e-4);

    // Without the domination terms the bound can only get worse.
    let plain = rounded(&RoundingOptions {
        zero_multipliers: true,
        ..options
    });
    assert!(plain.bound >= cert.bound);
    assert!(plain.good_pairs.iter().all(|gp| gp.mu.is_zero()));
}

#[test]
fn certificate_round_trips_through_text() {
    let cert = rounded(&RoundingOptions::default());
    let reread = Certificate::parse(&cert.to_text()).unwrap();
    assert_eq!(reread.to_text(), cert.to_text());
    assert_eq!(reread.bound, cert.bound);
}

/// Host values `d + alpha + beta` keyed by packed canonical host.
fn host_values(cert: &Certificate) -> HashMap<u64, Rational> {
    let report = verify(cert).unwrap();
    report.slacks.iter().map(|(h, v)| (h.canonical().pack(), v + &cert.bound)).collect()
}

/// Host values averaged over the induced subgraphs of `g`.
fn mixed_value(values: &HashMap<u64, Rational>, level: usize, g: &ColoredGraph) -> Rational {
    let counts = induced_class_counts(g, level);
    let total: u64 = counts.values().sum();
    let mut mixed = Rational::zero();
    for (key, c) in &counts {
        mixed += &values[key] * rat(*c as i64, total as i64);
    }
    mixed
}

#[test]
fn square_terms_are_sound_on_random_blowups() {
    let mut cert = rounded(&RoundingOptions::default());
    for gp in &mut cert.good_pairs {
        gp.mu = Rational::zero();
    }
    let values = host_values(&cert);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let base = ColoredGraph::from_fn(5, 3, |_, _| rng.gen_range(0..3)).unwrap();
        let g = blowup(&base, 5, rng.gen()).unwrap();
        let mixed = to_f64(&mixed_value(&values, cert.level, &g));
        let direct = to_f64(&target_density(&cert.target, &g).unwrap());
        assert!(mixed >= direct - 0.05, "{mixed} < {direct}");
    }
}

#[test]
fn accepted_certificate_is_sound_on_extremal_blowups() {
    // Blow-ups of the three-class construction have no good set dominating much
    // more than two thirds, so the domination terms apply to them as well.
    let cert = rounded(&RoundingOptions::default());
    assert_eq!(verify(&cert).unwrap().verdict, Verdict::Accept);
    let values = host_values(&cert);
    for (classes, n) in [([1, 1, 1], 8), ([2, 2, 2], 4), ([3, 3, 3], 3), ([2, 1, 1], 6)] {
        for seed in 0..5 {
            let g = blowup(&kierstead(&classes, 3).unwrap(), n, seed).unwrap();
            let mixed = mixed_value(&values, cert.level, &g);
            let direct = to_f64(&target_density(&cert.target, &g).unwrap());
            assert!(mixed <= cert.bound);
            assert!(to_f64(&mixed) >= direct - 0.05, "{classes:?}: {} < {direct}", to_f64(&mixed));
        }
    }
}

//! Sparse SDPA interchange (`.dat-s`) and the external solver subprocess.
//!
//! The problem is written in primal form, maximise `tr(C X)` subject to
//! `tr(A_k X) = a_k` and `X >= 0`. `X` holds one block per type block, then a
//! diagonal block with `t+`, `t-`, the multipliers and one slack per row:
//!
//! `t+ - t- - sum coeff * Q - sum coeff * mu - s_H = d_target(H)`
//!
//! with objective `-(t+ - t-)`. Solutions use the CSDP layout: the dual vector
//! on the first line, then `1 b i j v` entries of `Z` and `2 b i j v` entries of
//! `X`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;

use crate::constraints::{upper_index, SdpProblem};
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::rational::to_f64;

/// Environment variable holding the solver command template.
pub const SOLVER_ENV: &str = "FLAGDOM_SOLVER";

/// A problem in sparse SDPA form. Block, row and column indices are 1-based as
/// in the file; matrix 0 is the objective.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSdp {
    pub block_sizes: Vec<i64>,
    pub rhs: Vec<f64>,
    /// `(matrix, block, i, j, value)` with `i <= j`.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

impl SparseSdp {
    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn from_problem(p: &SdpProblem) -> Self {
        let den = p.denominator as f64;
        let nq = p.blocks.len();
        let nmu = p.good_pairs.len();
        let mut block_sizes: Vec<i64> = p.blocks.iter().map(|b| b.dim as i64).collect();
        let diag = nq + 1;
        block_sizes.push(-((2 + nmu + p.rows.len()) as i64));
        let mut entries = vec![(0, diag, 1, 1, -1.0), (0, diag, 2, 2, 1.0)];
        let offsets = p.block_offsets();
        // Position of every variable inside the block matrices.
        let mut place: Vec<(usize, usize, usize)> = Vec::with_capacity(p.num_variables());
        for (b, block) in p.blocks.iter().enumerate() {
            for i in 0..block.dim {
                for j in i..block.dim {
                    debug_assert_eq!(place.len(), offsets[b] + upper_index(block.dim, i, j));
                    place.push((b + 1, i + 1, j + 1));
                }
            }
        }
        for k in 0..nmu {
            place.push((diag, 3 + k, 3 + k));
        }
        let mut rhs = Vec::with_capacity(p.rows.len());
        for (r, row) in p.rows.iter().enumerate() {
            let k = r + 1;
            rhs.push(to_f64(&row.constant));
            entries.push((k, diag, 1, 1, 1.0));
            entries.push((k, diag, 2, 2, -1.0));
            for &(v, c) in &row.coeffs {
                let (b, i, j) = place[v as usize];
                // Off-diagonal entries count twice in the trace product.
                let scale = if i == j { 1.0 } else { 0.5 };
                entries.push((k, b, i, j, -(c as f64) * scale / den));
            }
            entries.push((k, diag, 3 + nmu + r, 3 + nmu + r, -1.0));
        }
        SparseSdp {
            block_sizes,
            rhs,
            entries,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.rhs.len());
        let _ = writeln!(out, "{}", self.block_sizes.len());
        let sizes: Vec<String> = self.block_sizes.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "{}", sizes.join(" "));
        let rhs: Vec<String> = self.rhs.iter().map(|v| format_f64(*v)).collect();
        let _ = writeln!(out, "{}", rhs.join(" "));
        for &(k, b, i, j, v) in &self.entries {
            let _ = writeln!(out, "{k} {b} {i} {j} {}", format_f64(v));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('*') && !l.starts_with('"'));
        let mut header = |what: &str| lines.next().ok_or_else(|| Error::parse(0, format!("missing {what}")));
        let (ln, m) = header("constraint count")?;
        let m: usize = first_token(m).parse().map_err(|_| Error::parse(ln, "bad constraint count"))?;
        let (ln, nb) = header("block count")?;
        let nb: usize = first_token(nb).parse().map_err(|_| Error::parse(ln, "bad block count"))?;
        let (ln, sizes) = header("block sizes")?;
        let block_sizes = numbers(sizes)
            .map(|t| t.parse::<i64>().map_err(|_| Error::parse(ln, format!("bad block size `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if block_sizes.len() != nb || block_sizes.contains(&0) {
            return Err(Error::parse(ln, format!("expected {nb} non-zero block sizes")));
        }
        let rhs = if m == 0 {
            Vec::new()
        } else {
            let (ln, rhs) = header("objective vector")?;
            let rhs = numbers(rhs)
                .map(|t| t.parse::<f64>().map_err(|_| Error::parse(ln, format!("bad value `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            if rhs.len() != m {
                return Err(Error::parse(ln, format!("expected {m} objective values")));
            }
            rhs
        };
        let mut entries = Vec::new();
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 5 {
                return Err(Error::parse(ln, "expected `matrix block i j value`"));
            }
            let idx = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad index `{s}`")));
            let (k, b, i, j) = (idx(t[0])?, idx(t[1])?, idx(t[2])?, idx(t[3])?);
            let v: f64 = t[4].parse().map_err(|_| Error::parse(ln, format!("bad value `{}`", t[4])))?;
            if k > m || b == 0 || b > nb {
                return Err(Error::parse(ln, "matrix or block index out of range"));
            }
            let size = block_sizes[b - 1].unsigned_abs() as usize;
            if i == 0 || j == 0 || i > j || j > size || (block_sizes[b - 1] < 0 && i != j) {
                return Err(Error::parse(ln, "entry outside the upper triangle of its block"));
            }
            entries.push((k, b, i, j, v));
        }
        Ok(SparseSdp {
            block_sizes,
            rhs,
            entries,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

fn first_token(line: &str) -> &str {
    line.split_whitespace().next().unwrap_or("")
}

/// Tokens of a numeric header line; SDPA allows `{`, `}`, `(`, `)` and commas.
fn numbers(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || "{}(),".contains(c)).filter(|t| !t.is_empty())
}

/// Shortest decimal that reads back to the same `f64`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

pub fn write_interchange(p: &SdpProblem, path: &Path) -> Result<()> {
    SparseSdp::from_problem(p).write(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Optimal,
    NearOptimal,
    Failed,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::NearOptimal => "near-optimal",
            SolverStatus::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSolution {
    /// `t+ - t-` from the primal matrix.
    pub objective: f64,
    /// Dense symmetric primal blocks, row-major.
    pub blocks: Vec<Vec<f64>>,
    /// Multipliers as read; negative values are left for rounding to clamp.
    pub mu: Vec<f64>,
    pub slacks: Vec<f64>,
    pub dual: Vec<f64>,
    pub status: SolverStatus,
}

impl SolverSolution {
    /// Values in the problem's variable order.
    pub fn variables(&self, p: &SdpProblem) -> Vec<f64> {
        let mut x = Vec::with_capacity(p.num_variables());
        for (b, block) in p.blocks.iter().enumerate() {
            for i in 0..block.dim {
                for j in i..block.dim {
                    x.push(self.blocks[b][i * block.dim + j]);
                }
            }
        }
        x.extend_from_slice(&self.mu);
        x
    }

    pub fn has_negative_mu(&self) -> bool {
        self.mu.iter().any(|&m| m < 0.0)
    }

    /// Writes the primal part in the CSDP layout.
    pub fn to_text(&self, p: &SdpProblem) -> String {
        let mut out = String::new();
        let dual: Vec<String> = self.dual.iter().map(|v| format_f64(*v)).collect();
        let _ = writeln!(out, "{}", dual.join(" "));
        for (b, block) in p.blocks.iter().enumerate() {
            for i in 0..block.dim {
                for j in i..block.dim {
                    let v = self.blocks[b][i * block.dim + j];
                    if v != 0.0 {
                        let _ = writeln!(out, "2 {} {} {} {}", b + 1, i + 1, j + 1, format_f64(v));
                    }
                }
            }
        }
        let diag = p.blocks.len() + 1;
        let (tp, tm) = if self.objective >= 0.0 { (self.objective, 0.0) } else { (0.0, -self.objective) };
        let tail = [tp, tm].into_iter().chain(self.mu.iter().copied()).chain(self.slacks.iter().copied());
        for (k, v) in tail.enumerate() {
            if v != 0.0 {
                let _ = writeln!(out, "2 {diag} {} {} {}", k + 1, k + 1, format_f64(v));
            }
        }
        out
    }
}

/// Reads a CSDP-style solution for `p`. Off-diagonal block entries given on
/// both sides are averaged.
pub fn parse_solution(path: &Path, p: &SdpProblem) -> Result<SolverSolution> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_solution_text(&text, p, SolverStatus::Optimal)
}

pub fn parse_solution_text(text: &str, p: &SdpProblem, status: SolverStatus) -> Result<SolverSolution> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::parse(1, "empty solution file"))?;
    let dual = first
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| Error::parse(1, format!("bad dual value `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if dual.len() != p.rows.len() {
        return Err(Error::DimensionMismatch(format!(
            "solution has {} dual values, problem has {} rows",
            dual.len(),
            p.rows.len()
        )));
    }
    let nq = p.blocks.len();
    let diag_len = 2 + p.good_pairs.len() + p.rows.len();
    let mut sums: Vec<Vec<f64>> = p.blocks.iter().map(|b| vec![0.0; b.dim * b.dim]).collect();
    let mut diag = vec![0.0; diag_len];
    for (idx, line) in lines {
        let ln = idx + 1;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 5 {
            return Err(Error::parse(ln, "expected `matrix block i j value`"));
        }
        let idx = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad index `{s}`")));
        let (k, b, i, j) = (idx(t[0])?, idx(t[1])?, idx(t[2])?, idx(t[3])?);
        let v: f64 = t[4].parse().map_err(|_| Error::parse(ln, format!("bad value `{}`", t[4])))?;
        if k != 1 && k != 2 {
            return Err(Error::parse(ln, "matrix index must be 1 or 2"));
        }
        if b == 0 || b > nq + 1 {
            return Err(Error::DimensionMismatch(format!("line {ln}: block {b} does not exist")));
        }
        let size = if b <= nq { p.blocks[b - 1].dim } else { diag_len };
        if i == 0 || j == 0 || i > size || j > size {
            return Err(Error::DimensionMismatch(format!(
                "line {ln}: entry ({i}, {j}) outside block {b} of size {size}"
            )));
        }
        if k == 1 {
            continue;
        }
        if b <= nq {
            let dim = size;
            let (i, j) = (i - 1, j - 1);
            if i == j {
                sums[b - 1][i * dim + i] = v;
            } else {
                sums[b - 1][i * dim + j] = v;
                if sums[b - 1][j * dim + i] == 0.0 {
                    sums[b - 1][j * dim + i] = v;
                }
            }
        } else if i != j {
            return Err(Error::DimensionMismatch(format!("line {ln}: off-diagonal entry in the diagonal block")));
        } else {
            diag[i - 1] = v;
        }
    }
    let blocks = sums
        .into_iter()
        .zip(&p.blocks)
        .map(|(m, b)| {
            let d = b.dim;
            let mut s = m.clone();
            for i in 0..d {
                for j in 0..d {
                    s[i * d + j] = 0.5 * (m[i * d + j] + m[j * d + i]);
                }
            }
            s
        })
        .collect();
    let nmu = p.good_pairs.len();
    Ok(SolverSolution {
        objective: diag[0] - diag[1],
        blocks,
        mu: diag[2..2 + nmu].to_vec(),
        slacks: diag[2 + nmu..].to_vec(),
        dual,
        status,
    })
}

/// Python program used when no solver template is configured. It reads a
/// `.dat-s` file and writes the primal solution with cvxpy.
pub const DEFAULT_SOLVER_SCRIPT: &str = r#"import sys

import numpy as np
import scipy.sparse as sp
import cvxpy as cp


def read(path):
    rows = [l.strip() for l in open(path) if l.strip() and l.strip()[0] not in '*"']
    m = int(rows[0].split()[0])
    nb = int(rows[1].split()[0])
    sizes = [int(t) for t in rows[2].replace(',', ' ').replace('{', ' ').replace('}', ' ').split()]
    a = np.array([float(t) for t in rows[3].split()]) if m else np.zeros(0)
    entries = [l.split() for l in rows[4 if m else 3:]]
    return m, sizes, a, entries


def main(problem, solution):
    m, sizes, a, entries = read(problem)
    blocks = []
    for s in sizes:
        if s > 0:
            blocks.append(cp.Variable((s, s), symmetric=True))
        else:
            blocks.append(cp.Variable(-s, nonneg=True))
    coo = [([], [], []) for _ in sizes]
    objective = 0
    obj = [dict() for _ in sizes]
    for k, b, i, j, v in entries:
        k, b, i, j, v = int(k), int(b) - 1, int(i) - 1, int(j) - 1, float(v)
        s = sizes[b]
        if k == 0:
            obj[b][(i, j)] = v
            continue
        r, c, d = coo[b]
        if s > 0:
            r.append(k - 1); c.append(i * s + j); d.append(v)
            if i != j:
                r.append(k - 1); c.append(j * s + i); d.append(v)
        else:
            r.append(k - 1); c.append(i); d.append(v)
    lhs = 0
    for b, s in enumerate(sizes):
        n = s * s if s > 0 else -s
        r, c, d = coo[b]
        if r:
            mat = sp.csr_matrix((d, (r, c)), shape=(m, n))
            lhs = lhs + mat @ (cp.vec(blocks[b], order='C') if s > 0 else blocks[b])
        for (i, j), v in obj[b].items():
            x = blocks[b][i, j] if s > 0 else blocks[b][i]
            objective = objective + (v if i == j else 2 * v) * x
    constraints = [X >> 0 for X, s in zip(blocks, sizes) if s > 0]
    if m:
        constraints.append(lhs == a)
    prob = cp.Problem(cp.Maximize(objective), constraints)
    prob.solve(solver=cp.CLARABEL)
    status = prob.status
    if status not in ('optimal', 'optimal_inaccurate'):
        print('solver status:', status, file=sys.stderr)
        return 1
    with open(solution, 'w') as f:
        y = constraints[-1].dual_value if m else []
        f.write(' '.join(repr(float(v)) for v in np.atleast_1d(y)) + '\n')
        for b, s in enumerate(sizes):
            val = blocks[b].value
            if s > 0:
                val = (val + val.T) / 2
                for i in range(s):
                    for j in range(i, s):
                        if val[i, j] != 0:
                            f.write('2 %d %d %d %r\n' % (b + 1, i + 1, j + 1, float(val[i, j])))
            else:
                for i in range(-s):
                    if val[i] != 0:
                        f.write('2 %d %d %d %r\n' % (b + 1, i + 1, i + 1, float(val[i])))
    print('objective', prob.value)
    return 0 if status == 'optimal' else 3


if __name__ == '__main__':
    sys.exit(main(sys.argv[1], sys.argv[2]))
"#;

/// Runs the solver on `problem` and parses its output. The command template
/// comes from `FLAGDOM_SOLVER` (with `{problem}` and `{solution}` placeholders)
/// or falls back to the bundled cvxpy program. Exit code 0 means optimal, 3
/// near-optimal, anything else failure.
pub fn run_solver(p: &SdpProblem, workdir: &Path) -> Result<(SolverSolution, PathBuf)> {
    std::fs::create_dir_all(workdir).map_err(|e| Error::io(workdir, e))?;
    let problem = workdir.join("problem.dat-s");
    let solution = workdir.join("solution.sol");
    write_interchange(p, &problem)?;
    let _ = std::fs::remove_file(&solution);
    let template = match std::env::var(SOLVER_ENV) {
        Ok(t) if !t.trim().is_empty() => t,
        _ => {
            let script = workdir.join("flagdom_solver.py");
            write_atomic(&script, DEFAULT_SOLVER_SCRIPT.as_bytes())?;
            format!("python3 {} {{problem}} {{solution}}", shell_quote(&script.to_string_lossy()))
        }
    };
    let command = template
        .replace("{problem}", &shell_quote(&problem.to_string_lossy()))
        .replace("{solution}", &shell_quote(&solution.to_string_lossy()));
    log::info!("running solver: {command}");
    let output = Command::new("sh")
        .arg("-c")
        .arg(&command)
        .output()
        .map_err(|e| Error::Solver(format!("cannot start `{command}`: {e}")))?;
    let status = match output.status.code() {
        Some(0) => SolverStatus::Optimal,
        Some(3) => SolverStatus::NearOptimal,
        code => {
            return Err(Error::Solver(format!(
                "`{command}` exited with {code:?}: {}",
                String::from_utf8_lossy(&output.stderr).trim()
            )))
        }
    };
    let text = std::fs::read_to_string(&solution).map_err(|e| Error::io(&solution, e))?;
    Ok((parse_solution_text(&text, p, status)?, solution))
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{ConstraintRow, SdpProblem, TypeBlock};
    use crate::flags::Flag;
    use crate::graph::ColoredGraph;
    use crate::rational::{int, rat};

    fn tiny() -> SdpProblem {
        let sigma = Flag::parse("1|1:", 3).unwrap();
        SdpProblem {
            level: 3,
            colors: 3,
            fraction: rat(2, 3),
            target: vec![],
            blocks: vec![TypeBlock { sigma, m: 2, dim: 3 }],
            good_pairs: vec![],
            symmetrized: false,
            denominator: 6,
            rows: vec![
                ConstraintRow {
                    host: ColoredGraph::parse("3:000", 3).unwrap(),
                    orbit_size: 1,
                    constant: int(1),
                    coeffs: vec![(0, 6), (1, -4)],
                },
                ConstraintRow {
                    host: ColoredGraph::parse("3:001", 3).unwrap(),
                    orbit_size: 1,
                    constant: rat(1, 3),
                    coeffs: vec![(3, 3)],
                },
            ],
        }
    }

    #[test]
    fn interchange_layout() {
        let p = tiny();
        let s = SparseSdp::from_problem(&p);
        assert_eq!(s.block_sizes, vec![3, -(2 + 2)]);
        assert_eq!(s.num_constraints(), 2);
        let text = s.to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("2"));
        assert_eq!(lines.next(), Some("2"));
        assert_eq!(lines.next(), Some("3 -4"));
        assert_eq!(lines.next(), Some("1 0.3333333333333333"));
        assert!(text.contains("\n1 1 1 2 0.3333333333333333\n"));
        assert!(text.contains("\n1 1 1 1 -1\n"));
        for &(k, b, i, j, _) in &s.entries {
            assert!(i <= j && b >= 1 && b <= s.block_sizes.len() && k <= s.num_constraints());
        }
    }

    #[test]
    fn interchange_round_trip_is_byte_stable() {
        let text = SparseSdp::from_problem(&tiny()).to_text();
        let again = SparseSdp::parse(&text).unwrap();
        assert_eq!(again, SparseSdp::from_problem(&tiny()));
        assert_eq!(again.to_text(), text);
    }

    #[test]
    fn empty_problem_round_trips() {
        let p = SdpProblem {
            blocks: vec![],
            rows: vec![tiny().rows[0].clone()],
            ..tiny()
        };
        let p = SdpProblem {
            rows: vec![ConstraintRow { coeffs: vec![], ..p.rows[0].clone() }],
            ..p
        };
        let s = SparseSdp::from_problem(&p);
        assert_eq!(SparseSdp::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn interchange_rejects_bad_entries() {
        assert!(SparseSdp::parse("1\n1\n2\n0\n1 1 2 1 1.0\n").is_err());
        assert!(SparseSdp::parse("1\n1\n2\n0\n1 2 1 1 1.0\n").is_err());
        assert!(SparseSdp::parse("1\n1\n-2\n0\n1 1 1 2 1.0\n").is_err());
        assert!(SparseSdp::parse("1\n1\n{2}\n0\n1 1 1 2 1.0\n").is_ok());
    }

    #[test]
    fn solution_round_trip() {
        let p = tiny();
        let sol = SolverSolution {
            objective: 0.75,
            blocks: vec![vec![1.0, 0.25, 0.0, 0.25, 2.0, -0.5, 0.0, -0.5, 3.0]],
            mu: vec![],
            slacks: vec![0.125, 0.0],
            dual: vec![0.5, 0.5],
            status: SolverStatus::Optimal,
        };
        let parsed = parse_solution_text(&sol.to_text(&p), &p, SolverStatus::Optimal).unwrap();
        for (a, b) in parsed.blocks[0].iter().zip(&sol.blocks[0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((parsed.objective - 0.75).abs() < 1e-12);
        assert_eq!(parsed.slacks, sol.slacks);
        assert_eq!(parsed.variables(&p), vec![1.0, 0.25, 0.0, 2.0, -0.5, 3.0]);
    }

    #[test]
    fn solution_symmetrizes_and_keeps_negative_mu() {
        let p = tiny();
        let text = "0 0\n2 1 1 2 1.0\n2 1 2 1 0.5\n2 2 1 1 2\n";
        let sol = parse_solution_text(text, &p, SolverStatus::Optimal).unwrap();
        assert_eq!(sol.blocks[0][1], 0.75);
        assert_eq!(sol.blocks[0][3], 0.75);
        assert_eq!(sol.objective, 2.0);

        let mut with_mu = p.clone();
        with_mu.good_pairs = vec![crate::constraints::enumerate_good_pairs(4, 3).unwrap()[0].clone()];
        let sol = parse_solution_text("0 0\n2 2 3 3 -0.25\n", &with_mu, SolverStatus::Optimal).unwrap();
        assert!(sol.has_negative_mu());
    }

    #[test]
    fn solution_dimension_errors() {
        let p = tiny();
        assert!(matches!(
            parse_solution_text("0 0\n2 1 4 4 1\n", &p, SolverStatus::Optimal),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_solution_text("0\n", &p, SolverStatus::Optimal),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(parse_solution_text("0 0\n2 1 1\n", &p, SolverStatus::Optimal).is_err());
    }
}

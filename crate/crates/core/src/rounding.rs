//! Turning a floating solver solution into an exact certificate.
//!
//! Entries are rounded to a fixed denominator, multipliers are clamped at zero,
//! each block is pushed back into the positive semidefinite cone by adding a
//! small multiple of the identity, and the bound is recomputed exactly. The
//! solver's own objective is never trusted.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::certificate::{exact_bound, CertBlock, CertPair, Certificate};
use crate::constraints::{color_action, SdpProblem};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{nearest_with_denominator, Rational};
use crate::sdp::SolverSolution;

/// Nearest fractions with denominator `d`, entrywise, from the upper triangle
/// of a symmetric matrix given row-major.
pub fn rationalize(m: &[f64], dim: usize, d: &BigInt) -> RationalMatrix {
    assert_eq!(m.len(), dim * dim);
    let mut out = RationalMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            out.set(i, j, nearest_with_denominator(m[i * dim + j], d));
        }
    }
    out
}

/// Outcome of the exact semidefiniteness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdCheck {
    /// Pivot order and the positive pivots of the fraction-free elimination;
    /// the pivots are leading principal minors of the reordered matrix scaled
    /// to integers.
    Psd { order: Vec<usize>, pivots: Vec<BigInt> },
    /// `vector^T Q vector = value < 0`.
    NotPsd { vector: Vec<Rational>, value: Rational },
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCheck::Psd { .. })
    }
}

/// Decides `Q >= 0` exactly by fraction-free symmetric elimination, always
/// pivoting on the largest remaining diagonal entry.
pub fn exact_psd(q: &RationalMatrix) -> PsdCheck {
    use num_integer::Integer;
    let n = q.dim();
    let den = (0..n)
        .flat_map(|i| (0..=i).map(move |j| (i, j)))
        .fold(BigInt::one(), |acc, (i, j)| acc.lcm(q.get(i, j).denom()));
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| q.get(i, j).numer() * (&den / q.get(i, j).denom())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::one();
    let mut order = Vec::new();
    let mut pivots = Vec::new();
    // For each step, the pivot and the multipliers `a_ip / a_pp` of the
    // vertices still active at that step.
    let mut steps: Vec<(usize, Vec<(usize, Rational)>)> = Vec::new();
    loop {
        let Some(&p) = active.iter().max_by(|&&x, &&y| a[x][x].cmp(&a[y][y]).then(y.cmp(&x))) else {
            return PsdCheck::Psd { order, pivots };
        };
        if a[p][p].is_positive() {
            let app = a[p][p].clone();
            active.retain(|&v| v != p);
            let multipliers: Vec<(usize, Rational)> = active
                .iter()
                .filter(|&&i| !a[i][p].is_zero())
                .map(|&i| (i, Rational::new(a[i][p].clone(), app.clone())))
                .collect();
            for (x, &i) in active.iter().enumerate() {
                for &j in &active[x..] {
                    let v = (&app * &a[i][j] - &a[i][p] * &a[p][j]) / &prev;
                    a[j][i] = v.clone();
                    a[i][j] = v;
                }
            }
            steps.push((p, multipliers));
            order.push(p);
            pivots.push(app.clone());
            prev = app;
            continue;
        }
        // Remaining Schur complement is `a / prev` on the active set.
        let vector = if let Some(&i) = active.iter().find(|&&i| a[i][i].is_negative()) {
            transform(n, &steps, &[(i, Rational::one())])
        } else if let Some((i, j)) = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i != j && !a[i][j].is_zero())
        {
            // With zero diagonal, (alpha e_i + e_j) gives 2 alpha s_ij = -1.
            let alpha = -Rational::new(prev.clone(), BigInt::from(2) * &a[i][j]);
            transform(n, &steps, &[(i, alpha), (j, Rational::one())])
        } else {
            return PsdCheck::Psd { order, pivots };
        };
        let value = q.quadratic_form(&vector);
        debug_assert!(value.is_negative());
        return PsdCheck::NotPsd { vector, value };
    }
}

/// Maps a combination of Schur-complement coordinates back to a vector in the
/// original coordinates.
fn transform(n: usize, steps: &[(usize, Vec<(usize, Rational)>)], combo: &[(usize, Rational)]) -> Vec<Rational> {
    // T_i = e_i - sum over steps k (while i was active) of mult_ik T_{p_k}.
    let mut t_pivot: Vec<Vec<Rational>> = Vec::with_capacity(steps.len());
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    };
    let build = |i: usize, upto: usize, t_pivot: &[Vec<Rational>]| {
        let mut v = unit(i);
        for (k, (_, mults)) in steps[..upto].iter().enumerate() {
            if let Some((_, m)) = mults.iter().find(|(x, _)| *x == i) {
                for (e, t) in v.iter_mut().zip(&t_pivot[k]) {
                    if !t.is_zero() {
                        *e -= m * t;
                    }
                }
            }
        }
        v
    };
    for k in 0..steps.len() {
        let v = build(steps[k].0, k, &t_pivot);
        t_pivot.push(v);
    }
    let mut out = vec![Rational::zero(); n];
    for (i, c) in combo {
        let v = build(*i, steps.len(), &t_pivot);
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Replaces `Q` by `P Q P` where `P` projects onto the orthogonal complement of
/// the given vectors, so that `Q v = 0` for each of them.
pub fn project_kernel(q: &RationalMatrix, kernel: &[Vec<Rational>]) -> RationalMatrix {
    let n = q.dim();
    // Orthogonal basis of the span by exact Gram-Schmidt.
    let mut basis: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for v in kernel {
        assert_eq!(v.len(), n);
        let mut w = v.clone();
        for (b, norm) in &basis {
            let c: Rational = w.iter().zip(b).map(|(x, y)| x * y).sum::<Rational>() / norm;
            for (x, y) in w.iter_mut().zip(b) {
                *x -= &c * y;
            }
        }
        let norm: Rational = w.iter().map(|x| x * x).sum();
        if !norm.is_zero() {
            basis.push((w, norm));
        }
    }
    let mut p = RationalMatrix::identity(n);
    for (b, norm) in &basis {
        for i in 0..n {
            for j in i..n {
                let v = p.get(i, j) - &b[i] * &b[j] / norm;
                p.set(i, j, v);
            }
        }
    }
    let mut pq = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if p.get(i, k).is_zero() {
                continue;
            }
            for j in 0..n {
                if !q.get(k, j).is_zero() {
                    pq[i][j] += p.get(i, k) * q.get(k, j);
                }
            }
        }
    }
    let mut out = RationalMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v: Rational = (0..n)
                .filter(|&k| !pq[i][k].is_zero())
                .map(|k| &pq[i][k] * p.get(k, j))
                .sum();
            out.set(i, j, v);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct RoundingOptions {
    pub denominator: BigInt,
    /// Largest identity shift allowed during repair.
    pub lambda_budget: Rational,
    /// Halvings of the shift after the first power of two that works.
    pub bisection_steps: usize,
    /// Times the denominator is doubled when repair exceeds the budget.
    pub retries: usize,
    /// `(block, vector)` pairs forced into the kernel before repair.
    pub kernels: Vec<(usize, Vec<Rational>)>,
    /// Drop all multipliers; used to compare bounds with and without them.
    pub zero_multipliers: bool,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        RoundingOptions {
            denominator: BigInt::from(1u64 << 32),
            lambda_budget: Rational::new(BigInt::one(), BigInt::from(1024)),
            bisection_steps: 8,
            retries: 2,
            kernels: Vec::new(),
            zero_multipliers: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Rounded {
    pub certificate: Certificate,
    /// Identity shift added to each block.
    pub shifts: Vec<Rational>,
    pub denominator: BigInt,
}

/// Smallest shift among `0`, `2^k / d` (up to the budget), refined by
/// bisection, that makes `q + shift * I` positive semidefinite.
pub fn repair_psd(q: &RationalMatrix, d: &BigInt, budget: &Rational, bisection_steps: usize) -> Option<Rational> {
    let shifted = |lambda: &Rational| {
        let mut m = q.clone();
        m.add_diagonal(lambda);
        exact_psd(&m).is_psd()
    };
    if exact_psd(q).is_psd() {
        return Some(Rational::zero());
    }
    let mut hi = Rational::new(BigInt::one(), d.clone());
    while !shifted(&hi) {
        hi *= Rational::from_integer(BigInt::from(2));
        if hi > *budget {
            return None;
        }
    }
    let mut lo = &hi / Rational::from_integer(BigInt::from(2));
    if lo < Rational::new(BigInt::one(), d.clone()) {
        lo = Rational::zero();
    }
    for _ in 0..bisection_steps {
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        if shifted(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Rounds a solver solution to an exact certificate whose bound is the exact
/// maximum over every host.
pub fn round_solution(sol: &SolverSolution, p: &SdpProblem, options: &RoundingOptions) -> Result<Rounded> {
    if sol.blocks.len() != p.blocks.len() || sol.mu.len() != p.good_pairs.len() {
        return Err(Error::DimensionMismatch("solution does not match the problem layout".into()));
    }
    for (b, block) in p.blocks.iter().enumerate() {
        if sol.blocks[b].len() != block.dim * block.dim {
            return Err(Error::DimensionMismatch(format!("block {b} has the wrong size")));
        }
    }
    if let Some((b, _)) = options.kernels.iter().find(|(b, v)| *b >= p.blocks.len() || v.len() != p.blocks[*b].dim) {
        return Err(Error::DimensionMismatch(format!("kernel vector for block {b} does not fit")));
    }
    let mut d = options.denominator.clone();
    if !d.is_positive() {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    let action = if p.symmetrized { Some(color_action(p)?) } else { None };
    let mut last_failure = String::new();
    for _ in 0..=options.retries {
        match round_at(sol, p, options, &d, action.as_ref()) {
            Ok(r) => return Ok(r),
            Err(Error::RoundingFailed(msg)) => {
                log::warn!("rounding at denominator {d} failed: {msg}");
                last_failure = msg;
                d *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::RoundingFailed(last_failure))
}

fn round_at(
    sol: &SolverSolution,
    p: &SdpProblem,
    options: &RoundingOptions,
    d: &BigInt,
    action: Option<&crate::constraints::ColorAction>,
) -> Result<Rounded> {
    // Rationalize in variable order, then average over the colour group so the
    // rounded point is invariant like the symmetrized rows assume.
    let floats = sol.variables(p);
    let mut x: Vec<Rational> = floats.iter().map(|&v| nearest_with_denominator(v, d)).collect();
    let mu_base = p.entry_variables();
    for v in &mut x[mu_base..] {
        if v.is_negative() || options.zero_multipliers {
            *v = Rational::zero();
        }
    }
    if let Some(action) = action {
        x = action.average(&x);
    }
    let offsets = p.block_offsets();
    let mut matrices: Vec<RationalMatrix> = p
        .blocks
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let mut m = RationalMatrix::zeros(block.dim);
            let mut k = offsets[b];
            for i in 0..block.dim {
                for j in i..block.dim {
                    m.set(i, j, x[k].clone());
                    k += 1;
                }
            }
            m
        })
        .collect();
    for (b, v) in &options.kernels {
        matrices[*b] = project_kernel(&matrices[*b], std::slice::from_ref(v));
    }
    let repaired: Vec<Option<Rational>> = matrices
        .par_iter()
        .map(|m| repair_psd(m, d, &options.lambda_budget, options.bisection_steps))
        .collect();
    let mut shifts = Vec::with_capacity(repaired.len());
    for (b, shift) in repaired.into_iter().enumerate() {
        let shift = shift.ok_or_else(|| {
            Error::RoundingFailed(format!("block {b} needs a shift above the budget"))
        })?;
        matrices[b].add_diagonal(&shift);
        shifts.push(shift);
    }
    let blocks = p
        .blocks
        .iter()
        .zip(matrices)
        .map(|(b, q)| CertBlock {
            sigma: b.sigma.clone(),
            m: b.m,
            q,
        })
        .collect();
    let good_pairs = p
        .good_pairs
        .iter()
        .zip(&x[mu_base..])
        .map(|(gp, mu)| CertPair {
            color: gp.color,
            sigma: gp.sigma.clone(),
            flag: gp.flag.clone(),
            mu: mu.clone(),
        })
        .collect();
    let mut certificate = Certificate {
        level: p.level,
        colors: p.colors,
        fraction: p.fraction.clone(),
        target: p.target.clone(),
        blocks,
        good_pairs,
        bound: Rational::zero(),
    };
    certificate.bound = exact_bound(&certificate)?;
    Ok(Rounded {
        certificate,
        shifts,
        denominator: d.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use rand::{Rng, SeedableRng};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    /// All principal minors non-negative.
    fn psd_by_minors(q: &RationalMatrix) -> bool {
        let n = q.dim();
        (1u32..1 << n).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            det(&idx.iter().map(|&i| idx.iter().map(|&j| q.get(i, j).clone()).collect()).collect::<Vec<Vec<_>>>())
                >= Rational::zero()
        })
    }

    fn det(a: &[Vec<Rational>]) -> Rational {
        if a.is_empty() {
            return int(1);
        }
        let n = a.len();
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<Rational>> =
                    a[1..].iter().map(|row| (0..n).filter(|&j| j != c).map(|j| row[j].clone()).collect()).collect();
                let sign = if c % 2 == 0 { int(1) } else { int(-1) };
                sign * &a[0][c] * det(&minor)
            })
            .sum()
    }

    #[test]
    fn small_examples() {
        assert!(exact_psd(&RationalMatrix::identity(4)).is_psd());
        assert!(exact_psd(&m(&[&[2, 1], &[1, 2]])).is_psd());
        match exact_psd(&m(&[&[1, 2], &[2, 1]])) {
            PsdCheck::NotPsd { vector, value } => {
                assert!(value.is_negative());
                assert_eq!(m(&[&[1, 2], &[2, 1]]).quadratic_form(&vector), value);
            }
            other => panic!("{other:?}"),
        }
        let v = vec![int(1), int(-1)];
        assert_eq!(m(&[&[1, 2], &[2, 1]]).quadratic_form(&v), int(-2));
        assert!(exact_psd(&RationalMatrix::zeros(3)).is_psd());
        assert!(!exact_psd(&m(&[&[0, 1], &[1, 0]])).is_psd());
    }

    #[test]
    fn agrees_with_minors_on_all_small_sign_matrices() {
        for n in 1..=4usize {
            let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
            let total = 3usize.pow(slots.len() as u32);
            for code in 0..total {
                let mut q = RationalMatrix::zeros(n);
                let mut c = code;
                for &(i, j) in &slots {
                    q.set(i, j, int((c % 3) as i64 - 1));
                    c /= 3;
                }
                let check = exact_psd(&q);
                assert_eq!(check.is_psd(), psd_by_minors(&q), "{q:?}");
                if let PsdCheck::NotPsd { vector, value } = check {
                    assert!(value.is_negative());
                    assert_eq!(q.quadratic_form(&vector), value);
                }
            }
        }
    }

    #[test]
    fn gram_matrices_pass_and_spot_check() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..7);
            let k = rng.gen_range(1..=n);
            let g: Vec<Vec<Rational>> =
                (0..k).map(|_| (0..n).map(|_| rat(rng.gen_range(-9..10), rng.gen_range(1..5))).collect()).collect();
            let mut q = RationalMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    q.set(i, j, (0..k).map(|r| &g[r][i] * &g[r][j]).sum());
                }
            }
            assert!(exact_psd(&q).is_psd());
            for _ in 0..100 {
                let v: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-20..21), rng.gen_range(1..9))).collect();
                assert!(q.quadratic_form(&v) >= Rational::zero());
            }
        }
    }

    #[test]
    fn rationalize_rounds_to_nearest() {
        let d = BigInt::from(3);
        let q = rationalize(&[0.333333, 0.0, 0.0, 1.0], 2, &d);
        assert_eq!(q.get(0, 0), &rat(1, 3));
        assert_eq!(rationalize(&[0.0; 9], 3, &d), RationalMatrix::zeros(3));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let d = BigInt::from(1000);
        for _ in 0..100 {
            let n = rng.gen_range(1..5);
            let mut f = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let v: f64 = rng.gen_range(-3.0..3.0);
                    f[i * n + j] = v;
                    f[j * n + i] = v;
                }
            }
            let q = rationalize(&f, n, &d);
            assert!(q.is_symmetric());
            for i in 0..n {
                for j in 0..n {
                    let err = (crate::rational::to_f64(q.get(i, j)) - f[i * n + j]).abs();
                    assert!(err <= 0.5 / 1000.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn repair_adds_small_shift() {
        let q = RationalMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(1), rat(999_999, 1_000_000)]]).unwrap();
        assert!(!exact_psd(&q).is_psd());
        let d = BigInt::from(1u64 << 20);
        let shift = repair_psd(&q, &d, &rat(1, 10), 8).unwrap();
        assert!(shift.is_positive() && shift < rat(1, 100_000));
        let mut fixed = q.clone();
        fixed.add_diagonal(&shift);
        assert!(exact_psd(&fixed).is_psd());
        assert!(repair_psd(&m(&[&[1, 5], &[5, 1]]), &d, &rat(1, 10), 8).is_none());
    }

    #[test]
    fn kernel_projection_kills_vector() {
        let q = m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        let v = vec![int(1), int(-1), int(1)];
        let p = project_kernel(&q, std::slice::from_ref(&v));
        for i in 0..3 {
            let row: Rational = (0..3).map(|j| p.get(i, j) * &v[j]).sum();
            assert!(row.is_zero());
        }
        assert!(exact_psd(&p).is_psd());
    }
}

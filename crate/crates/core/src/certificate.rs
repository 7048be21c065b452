//! Certificates and their verifier.
//!
//! The verifier trusts only the graph, flag and domination code: it
//! re-enumerates every host of the level, recomputes all densities, checks each
//! block for positive semidefiniteness and every multiplier for sign, and
//! compares `d_target(H) + alpha_H + beta_H` with the claimed bound for every
//! host, never just for colour-orbit representatives.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, falling_factorial, for_each_combination, for_each_injection};
use crate::domination::is_good_set;
use crate::enumerate::{enumerate_graphs, induced_class_counts};
use crate::error::{Error, Result};
use crate::flags::{enumerate_flags, labeled_key, pair_counts, Flag, FlagBasis};
use crate::graph::{Color, ColoredGraph};
use crate::io::write_atomic;
use crate::matrix::RationalMatrix;
use crate::rational::{format_rational, parse_rational, Rational, ScaledVector};
use crate::rounding::{exact_psd, PsdCheck};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertBlock {
    pub sigma: Flag,
    pub m: usize,
    pub q: RationalMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertPair {
    pub color: Color,
    pub sigma: Flag,
    pub flag: Flag,
    pub mu: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub level: usize,
    pub colors: u8,
    pub fraction: Rational,
    pub target: Vec<(ColoredGraph, Rational)>,
    pub blocks: Vec<CertBlock>,
    pub good_pairs: Vec<CertPair>,
    pub bound: Rational,
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "FLAGCERT 1");
        let _ = writeln!(out, "L {}", self.level);
        let _ = writeln!(out, "R {}", self.colors);
        let _ = writeln!(out, "FRACTION {}", format_rational(&self.fraction));
        for (g, w) in &self.target {
            let _ = writeln!(out, "TARGET {} {}", format_rational(w), g);
        }
        for b in &self.blocks {
            let _ = writeln!(out, "BLOCK {} {} {}", b.sigma, b.m, b.q.dim());
            for row in b.q.lower_rows() {
                let row: Vec<String> = row.iter().map(format_rational).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        for p in &self.good_pairs {
            let _ = writeln!(out, "GOODPAIR {} {} {} {}", p.color, p.sigma, p.flag, format_rational(&p.mu));
        }
        let _ = writeln!(out, "BOUND {}", format_rational(&self.bound));
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "empty certificate"))?;
        if first.split_whitespace().collect::<Vec<_>>() != ["FLAGCERT", "1"] {
            return Err(Error::parse(ln, "expected `FLAGCERT 1`"));
        }
        let mut level = None;
        let mut colors: Option<u8> = None;
        let mut fraction = None;
        let mut target = Vec::new();
        let mut blocks = Vec::new();
        let mut good_pairs = Vec::new();
        let mut bound = None;
        let rational = |ln: usize, t: &str| parse_rational(t).map_err(|e| Error::parse(ln, e.to_string()));
        while let Some((ln, line)) = lines.next() {
            let tok: Vec<&str> = line.split_whitespace().collect();
            let arity = |n: usize| {
                if tok.len() == n + 1 {
                    Ok(())
                } else {
                    Err(Error::parse(ln, format!("`{}` takes {n} fields", tok[0])))
                }
            };
            let uint = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad integer `{t}`")));
            if bound.is_some() {
                return Err(Error::parse(ln, "content after BOUND"));
            }
            let need_colors = || colors.ok_or_else(|| Error::parse(ln, "R must precede graphs"));
            match tok[0] {
                "L" => {
                    arity(1)?;
                    level = Some(uint(tok[1])?);
                }
                "R" => {
                    arity(1)?;
                    let r = uint(tok[1])?;
                    if !(1..=4).contains(&r) {
                        return Err(Error::parse(ln, "colour count must be between 1 and 4"));
                    }
                    colors = Some(r as u8);
                }
                "FRACTION" => {
                    arity(1)?;
                    fraction = Some(rational(ln, tok[1])?);
                }
                "TARGET" => {
                    arity(2)?;
                    let w = rational(ln, tok[1])?;
                    let g = ColoredGraph::parse(tok[2], need_colors()?).map_err(|e| Error::parse(ln, e.to_string()))?;
                    target.push((g, w));
                }
                "BLOCK" => {
                    arity(3)?;
                    let sigma = Flag::parse(tok[1], need_colors()?).map_err(|e| Error::parse(ln, e.to_string()))?;
                    let m = uint(tok[2])?;
                    let dim = uint(tok[3])?;
                    let mut rows = Vec::with_capacity(dim);
                    for i in 0..dim {
                        let (rl, row) = lines
                            .next()
                            .ok_or_else(|| Error::parse(ln, format!("block ends after {i} of {dim} rows")))?;
                        let row = row
                            .split_whitespace()
                            .map(|t| rational(rl, t))
                            .collect::<Result<Vec<_>>>()?;
                        if row.len() != i + 1 {
                            return Err(Error::parse(rl, format!("row {} needs {} entries", i + 1, i + 1)));
                        }
                        rows.push(row);
                    }
                    let q = RationalMatrix::from_lower(rows)?;
                    blocks.push(CertBlock { sigma, m, q });
                }
                "GOODPAIR" => {
                    arity(4)?;
                    let r = need_colors()?;
                    let c = uint(tok[1])?;
                    if c >= r as usize {
                        return Err(Error::parse(ln, format!("colour {c} out of range")));
                    }
                    let sigma = Flag::parse(tok[2], r).map_err(|e| Error::parse(ln, e.to_string()))?;
                    let flag = Flag::parse(tok[3], r).map_err(|e| Error::parse(ln, e.to_string()))?;
                    let mu = rational(ln, tok[4])?;
                    good_pairs.push(CertPair {
                        color: c as Color,
                        sigma,
                        flag,
                        mu,
                    });
                }
                "BOUND" => {
                    arity(1)?;
                    bound = Some(rational(ln, tok[1])?);
                }
                other => return Err(Error::parse(ln, format!("unknown section `{other}`"))),
            }
        }
        let missing = |what: &str| Error::parse(0, format!("missing {what}"));
        Ok(Certificate {
            level: level.ok_or_else(|| missing("L"))?,
            colors: colors.ok_or_else(|| missing("R"))?,
            fraction: fraction.ok_or_else(|| missing("FRACTION"))?,
            target,
            blocks,
            good_pairs,
            bound: bound.ok_or_else(|| missing("BOUND"))?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// `d_target(H) + alpha_H + beta_H - bound` for every host, in enumeration order.
    pub slacks: Vec<(ColoredGraph, Rational)>,
    pub max_slack: Rational,
    pub worst_host: Option<ColoredGraph>,
    pub psd: Vec<bool>,
    pub negative_mu: Vec<usize>,
    /// Good pairs whose flag is not good for its colour, or too large.
    pub invalid_pairs: Vec<usize>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Accept => "ACCEPT",
            Verdict::Reject => "REJECT",
        };
        let _ = writeln!(out, "VERDICT {verdict}");
        let _ = writeln!(out, "MAXSLACK {}", format_rational(&self.max_slack));
        if let Some(h) = &self.worst_host {
            let _ = writeln!(out, "WORST {h}");
        }
        for (i, ok) in self.psd.iter().enumerate() {
            let _ = writeln!(out, "PSD {i} {}", if *ok { "yes" } else { "no" });
        }
        for i in &self.negative_mu {
            let _ = writeln!(out, "NEGATIVE_MU {i}");
        }
        for i in &self.invalid_pairs {
            let _ = writeln!(out, "INVALID_PAIR {i}");
        }
        for (h, s) in &self.slacks {
            let _ = writeln!(out, "SLACK {h} {}", format_rational(s));
        }
        out
    }
}

struct PreparedBlock {
    basis: FlagBasis,
    q: ScaledVector,
    /// `#theta * C(n - s, m - s) * C(n - m, m - s)`.
    den: BigInt,
}

struct PreparedPairs {
    sigma: Flag,
    /// Number of unlabeled vertices of the flags in this group.
    k: usize,
    /// Canonical flag key to `(colour, pair position)`.
    by_flag: HashMap<u64, Vec<(Color, usize)>>,
    den: BigInt,
}

/// Everything needed to evaluate `d_target(H) + alpha_H + beta_H` for a host.
pub(crate) struct Evaluator {
    level: usize,
    colors: u8,
    fraction: (i64, i64),
    target: HashMap<usize, Vec<(u64, Rational)>>,
    blocks: Vec<PreparedBlock>,
    pairs: Vec<PreparedPairs>,
    mu: ScaledVector,
}

impl Evaluator {
    pub(crate) fn new(cert: &Certificate) -> Result<Self> {
        let n = cert.level;
        let r = cert.colors;
        if cert.fraction.is_negative() {
            return Err(Error::InvalidArgument("domination fraction must be non-negative".into()));
        }
        let fraction = (
            cert.fraction.numer().to_i64().ok_or_else(|| Error::ResourceBound("fraction too large".into()))?,
            cert.fraction.denom().to_i64().ok_or_else(|| Error::ResourceBound("fraction too large".into()))?,
        );
        let mut target: HashMap<usize, Vec<(u64, Rational)>> = HashMap::new();
        for (g, w) in &cert.target {
            if g.order() > n || g.color_count() != r {
                return Err(Error::SizeMismatch(format!("target {g} does not fit level {n}")));
            }
            target.entry(g.order()).or_default().push((g.canonical().pack(), w.clone()));
        }
        let mut blocks = Vec::with_capacity(cert.blocks.len());
        for b in &cert.blocks {
            let s = b.sigma.order();
            if !b.sigma.is_type() {
                return Err(Error::TypeMismatch(format!("{} is not a type", b.sigma)));
            }
            if b.m < s || 2 * b.m - s > n {
                return Err(Error::SizeMismatch(format!(
                    "block ({s}, {}) violates 2m - |σ| <= {n}",
                    b.m
                )));
            }
            let basis = enumerate_flags(&b.sigma, b.m)?;
            if basis.len() != b.q.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "block over {} has dimension {}, expected {}",
                    b.sigma,
                    b.q.dim(),
                    basis.len()
                )));
            }
            let entries: Vec<Rational> = (0..b.q.dim())
                .flat_map(|i| (0..b.q.dim()).map(move |j| (i, j)))
                .map(|(i, j)| b.q.get(i, j).clone())
                .collect();
            let den = falling_factorial(n, s) * binomial(n - s, b.m - s) * binomial(n - b.m, b.m - s);
            blocks.push(PreparedBlock {
                basis,
                q: ScaledVector::new(&entries),
                den: BigInt::from(den),
            });
        }
        let mut groups: HashMap<(Flag, usize), usize> = HashMap::new();
        let mut pairs: Vec<PreparedPairs> = Vec::new();
        for (idx, p) in cert.good_pairs.iter().enumerate() {
            if p.flag.sigma() != p.sigma || p.sigma.order() != 3 {
                return Err(Error::TypeMismatch(format!("good pair {idx} does not extend an order-3 type")));
            }
            if p.flag.order() + 1 > n {
                // Reported as an invalid pair by the verifier.
                continue;
            }
            let k = p.flag.order() - 3;
            let g = *groups.entry((p.sigma.clone(), k)).or_insert_with(|| {
                let den = fraction.1 as u64 * (n - 3 - k) as u64 * falling_factorial(n, 3) * binomial(n - 3, k);
                pairs.push(PreparedPairs {
                    sigma: p.sigma.clone(),
                    k,
                    by_flag: HashMap::new(),
                    den: BigInt::from(den),
                });
                pairs.len() - 1
            });
            pairs[g]
                .by_flag
                .entry(p.flag.canonical_pack())
                .or_default()
                .push((p.color, idx));
        }
        let mu: Vec<Rational> = cert.good_pairs.iter().map(|p| p.mu.clone()).collect();
        Ok(Evaluator {
            level: n,
            colors: r,
            fraction,
            target,
            blocks,
            pairs,
            mu: ScaledVector::new(&mu),
        })
    }

    pub(crate) fn value(&self, h: &ColoredGraph) -> Result<Rational> {
        let n = h.order();
        debug_assert_eq!(n, self.level);
        let mut total = Rational::zero();
        for (&k, entries) in &self.target {
            let counts = induced_class_counts(h, k);
            let all = BigInt::from(binomial(n, k));
            for (key, w) in entries {
                if let Some(&c) = counts.get(key) {
                    total += w * Rational::new(BigInt::from(c), all.clone());
                }
            }
        }
        for b in &self.blocks {
            let counts = pair_counts(&b.basis, h)?;
            let dim = b.basis.len();
            debug_assert_eq!(BigInt::from(counts.denominator), b.den);
            let terms = counts.entries.iter().flat_map(|&(i, j, c)| {
                let (i, j) = (i as usize, j as usize);
                let first = (i * dim + j, c as i64);
                let second = (i != j).then_some((j * dim + i, c as i64));
                std::iter::once(first).chain(second)
            });
            total += b.q.weighted_sum(terms, &b.den);
        }
        let (fp, fq) = self.fraction;
        for g in &self.pairs {
            let mut numerators: HashMap<usize, i64> = HashMap::new();
            let sigma = g.sigma.graph();
            for_each_injection(n, 3, |theta| {
                if (0..3).any(|i| (i + 1..3).any(|j| h.color(theta[i], theta[j]) != sigma.color(i, j))) {
                    return;
                }
                let rest: Vec<usize> = (0..n).filter(|v| !theta.contains(v)).collect();
                for_each_combination(&rest, g.k, |a| {
                    let Some(found) = g.by_flag.get(&labeled_key(h, theta, a)) else { return };
                    for &(c, idx) in found {
                        let dominated = rest
                            .iter()
                            .filter(|v| !a.contains(v) && theta.iter().any(|&u| h.color(u, **v) == c))
                            .count() as i64;
                        *numerators.entry(idx).or_insert(0) += fp * (n - 3 - g.k) as i64 - fq * dominated;
                    }
                });
            });
            let mut terms: Vec<(usize, i64)> = numerators.into_iter().collect();
            terms.sort_unstable();
            total += self.mu.weighted_sum(terms.into_iter(), &g.den);
        }
        Ok(total)
    }

    /// Values for every host of the level, in enumeration order.
    pub(crate) fn all_values(&self) -> Result<Vec<(ColoredGraph, Rational)>> {
        let family = enumerate_graphs(self.level, self.colors)?;
        family
            .members
            .into_par_iter()
            .map(|h| {
                let v = self.value(&h)?;
                Ok((h, v))
            })
            .collect()
    }
}

/// Checks a certificate from scratch.
pub fn verify(cert: &Certificate) -> Result<VerificationReport> {
    let evaluator = Evaluator::new(cert)?;
    let psd: Vec<bool> = cert
        .blocks
        .par_iter()
        .map(|b| matches!(exact_psd(&b.q), PsdCheck::Psd { .. }))
        .collect();
    let negative_mu: Vec<usize> = cert
        .good_pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.mu.is_negative())
        .map(|(i, _)| i)
        .collect();
    let mut invalid_pairs = Vec::new();
    for (i, p) in cert.good_pairs.iter().enumerate() {
        let fits = p.flag.order() < cert.level;
        let good = cert.colors == 3 && is_good_set(p.flag.graph(), &[0, 1, 2], p.color)?;
        if !fits || !good {
            invalid_pairs.push(i);
        }
    }
    let values = evaluator.all_values()?;
    let mut max_slack: Option<Rational> = None;
    let mut worst_host = None;
    let slacks: Vec<(ColoredGraph, Rational)> = values
        .into_iter()
        .map(|(h, v)| {
            let s = v - &cert.bound;
            if max_slack.as_ref().is_none_or(|m| s > *m) {
                max_slack = Some(s.clone());
                worst_host = Some(h.clone());
            }
            (h, s)
        })
        .collect();
    let max_slack = max_slack.unwrap_or_else(|| -cert.bound.clone());
    let accept = !max_slack.is_positive()
        && psd.iter().all(|&ok| ok)
        && negative_mu.is_empty()
        && invalid_pairs.is_empty();
    Ok(VerificationReport {
        slacks,
        max_slack,
        worst_host,
        psd,
        negative_mu,
        invalid_pairs,
        verdict: if accept { Verdict::Accept } else { Verdict::Reject },
    })
}

/// `max_H (d_target(H) + alpha_H + beta_H)` over every host of the level.
pub fn exact_bound(cert: &Certificate) -> Result<Rational> {
    let values = Evaluator::new(cert)?.all_values()?;
    values
        .into_iter()
        .map(|(_, v)| v)
        .max()
        .ok_or_else(|| Error::InvalidArgument("empty host family".into()))
}

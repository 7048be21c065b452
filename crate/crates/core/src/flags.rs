//! Types, flags and exact expected flag densities.
//!
//! A flag is a coloured complete graph whose first `s` vertices are labeled
//! `1..s` in order; when every vertex is labeled the flag is a type. Flags are
//! identified up to isomorphisms that fix every labeled vertex, using the
//! canonical form with the labeled prefix held in place.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::combinatorics::{binomial, falling_factorial, for_each_combination, for_each_injection};
use crate::enumerate::enumerate_graphs;
use crate::error::{Error, Result};
use crate::graph::{canonical_labeling, edge_count, pack_digits, pair_index, Color, ColoredGraph, MAX_CANONICAL_ORDER};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

/// Largest type order supported.
pub const MAX_TYPE_ORDER: usize = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    graph: ColoredGraph,
    labeled: usize,
}

impl Flag {
    pub fn new(graph: ColoredGraph, labeled: usize) -> Result<Self> {
        if labeled > graph.order() {
            return Err(Error::InvalidArgument(format!(
                "{labeled} labels on a graph of order {}",
                graph.order()
            )));
        }
        Ok(Flag { graph, labeled })
    }

    /// A type: every vertex labeled.
    pub fn fully_labeled(graph: ColoredGraph) -> Self {
        let labeled = graph.order();
        Flag { graph, labeled }
    }

    pub fn empty_type(colors: u8) -> Self {
        Flag::fully_labeled(ColoredGraph::empty(colors))
    }

    #[inline]
    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    #[inline]
    pub fn labeled(&self) -> usize {
        self.labeled
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn is_type(&self) -> bool {
        self.labeled == self.graph.order()
    }

    /// The labeled part as a type.
    pub fn sigma(&self) -> Flag {
        let labels: Vec<usize> = (0..self.labeled).collect();
        Flag::fully_labeled(self.graph.induced(&labels))
    }

    /// Canonical representative under label-preserving isomorphism.
    pub fn canonical(&self) -> Flag {
        let (_, edges) = canonical_labeling(&self.graph, self.labeled);
        Flag {
            graph: ColoredGraph::from_parts_unchecked(self.order(), self.graph.color_count(), edges),
            labeled: self.labeled,
        }
    }

    /// Packed canonical form (see [`ColoredGraph::pack`]).
    pub fn canonical_pack(&self) -> u64 {
        self.canonical().graph.pack()
    }

    pub fn recolored(&self, perm: &[Color]) -> Flag {
        Flag {
            graph: self.graph.recolored(perm),
            labeled: self.labeled,
        }
    }

    /// Relabels: new vertex `i` is old vertex `perm[i]`. `perm` must map the
    /// labeled prefix onto itself.
    pub fn permuted(&self, perm: &[usize]) -> Flag {
        debug_assert!(perm[..self.labeled].iter().all(|&v| v < self.labeled));
        Flag {
            graph: self.graph.permuted(perm),
            labeled: self.labeled,
        }
    }

    /// `<s>|<n>:<digits>`.
    pub fn parse(text: &str, colors: u8) -> Result<Self> {
        let text = text.trim();
        let (s, g) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidGraph(format!("`{text}` is not of the form <s>|<n>:<digits>")))?;
        let labeled = s
            .parse()
            .map_err(|_| Error::InvalidGraph(format!("bad label count in `{text}`")))?;
        Flag::new(ColoredGraph::parse(g, colors)?, labeled)
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.labeled, self.graph)
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag({self})")
    }
}

/// One type per isomorphism class of `s`-vertex graphs, each in its canonical
/// labeling.
pub fn enumerate_types(s: usize, r: u8) -> Result<Vec<Flag>> {
    if s > MAX_TYPE_ORDER {
        return Err(Error::ResourceBound(format!("types of order {s} > {MAX_TYPE_ORDER}")));
    }
    if s == 0 {
        return Ok(vec![Flag::empty_type(r)]);
    }
    Ok(enumerate_graphs(s, r)?.members.into_iter().map(Flag::fully_labeled).collect())
}

/// All σ-flags of one order, up to label-preserving isomorphism.
#[derive(Clone, Debug)]
pub struct FlagBasis {
    sigma: Flag,
    order: usize,
    flags: Vec<Flag>,
    index: HashMap<u64, usize>,
}

impl FlagBasis {
    pub fn sigma(&self) -> &Flag {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    /// Position of a flag of this basis, in any labeling of its unlabeled part.
    pub fn index_of(&self, f: &Flag) -> Option<usize> {
        if f.labeled != self.sigma.labeled || f.order() != self.order || f.sigma() != self.sigma {
            return None;
        }
        self.index.get(&f.canonical_pack()).copied()
    }

    /// Position of the flag induced in `h` by `labels` followed by `extra`.
    #[inline]
    pub(crate) fn identify(&self, h: &ColoredGraph, labels: &[usize], extra: &[usize]) -> usize {
        let key = labeled_key(h, labels, extra);
        *self
            .index
            .get(&key)
            .expect("labeled part matches the type, so the flag is in the basis")
    }
}

/// Enumerates the σ-flags of order `m` by attaching `m - |σ|` vertices in every
/// possible way and keeping one canonical representative per class.
pub fn enumerate_flags(sigma: &Flag, m: usize) -> Result<FlagBasis> {
    if !sigma.is_type() {
        return Err(Error::TypeMismatch(format!("{sigma} is not a type")));
    }
    let s = sigma.order();
    if m < s {
        return Err(Error::SizeMismatch(format!("flag order {m} below type order {s}")));
    }
    if m > MAX_CANONICAL_ORDER {
        return Err(Error::ResourceBound(format!("flag order {m} > {MAX_CANONICAL_ORDER}")));
    }
    let r = sigma.graph.color_count();
    let free_edges = edge_count(m) - edge_count(s);
    if (r as f64).powi(free_edges as i32) > 2e7 {
        return Err(Error::ResourceBound(format!("too many flags of order {m} over a type of order {s}")));
    }
    let total = (r as u64).pow(free_edges as u32);
    let mut seen: HashMap<u64, Flag> = HashMap::new();
    let mut edges = vec![0u8; edge_count(m)];
    for code in 0..total {
        let mut c = code;
        for i in 0..m {
            for j in i + 1..m {
                let idx = pair_index(m, i, j);
                edges[idx] = if j < s {
                    sigma.graph.color(i, j)
                } else {
                    let d = (c % r as u64) as u8;
                    c /= r as u64;
                    d
                };
            }
        }
        let f = Flag {
            graph: ColoredGraph::from_parts_unchecked(m, r, edges.clone()),
            labeled: s,
        }
        .canonical();
        seen.entry(f.graph.pack()).or_insert(f);
    }
    let mut flags: Vec<Flag> = seen.into_values().collect();
    flags.sort_unstable();
    let index = flags.iter().enumerate().map(|(i, f)| (f.graph.pack(), i)).collect();
    Ok(FlagBasis {
        sigma: sigma.clone(),
        order: m,
        flags,
        index,
    })
}

/// Packed canonical form of the flag induced by `labels` (in order) and the
/// unordered vertex set `extra`.
pub(crate) fn labeled_key(h: &ColoredGraph, labels: &[usize], extra: &[usize]) -> u64 {
    let s = labels.len();
    let n = s + extra.len();
    match extra.len() {
        0 | 1 => {
            let at = |i: usize| if i < s { labels[i] } else { extra[i - s] };
            pack_digits(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| h.color(at(i), at(j))))
        }
        2 => {
            let mut a = [0u8; 28];
            let mut b = [0u8; 28];
            let mut k = 0;
            let (x, y) = (extra[0], extra[1]);
            let at_a = |i: usize| if i < s { labels[i] } else if i == s { x } else { y };
            let at_b = |i: usize| if i < s { labels[i] } else if i == s { y } else { x };
            for i in 0..n {
                for j in i + 1..n {
                    a[k] = h.color(at_a(i), at_a(j));
                    b[k] = h.color(at_b(i), at_b(j));
                    k += 1;
                }
            }
            let best = if b[..k] < a[..k] { &b[..k] } else { &a[..k] };
            pack_digits(n, best.iter().copied())
        }
        _ => {
            let verts: Vec<usize> = labels.iter().chain(extra).copied().collect();
            let g = h.induced(&verts);
            let (_, edges) = canonical_labeling(&g, s);
            pack_digits(n, edges.into_iter())
        }
    }
}

/// Whether the injection `theta` induces `sigma` exactly (labels in order).
#[inline]
pub(crate) fn induces_type(h: &ColoredGraph, sigma: &ColoredGraph, theta: &[usize]) -> bool {
    let s = theta.len();
    (0..s).all(|i| (i + 1..s).all(|j| h.color(theta[i], theta[j]) == sigma.color(i, j)))
}

fn check_host(order: usize, h: &ColoredGraph, needed: usize) -> Result<()> {
    if needed > h.order() {
        return Err(Error::SizeMismatch(format!(
            "configuration of order {needed} does not fit in a host of order {}",
            h.order()
        )));
    }
    let _ = order;
    Ok(())
}

fn complement(n: usize, used: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; n];
    for &u in used {
        mark[u] = true;
    }
    (0..n).filter(|&v| !mark[v]).collect()
}

/// Expected value over injective `theta` of the probability that a random
/// `|F|`-set containing `im(theta)` induces `F`.
pub fn avg_single_density(f: &Flag, h: &ColoredGraph) -> Result<Rational> {
    check_host(f.order(), h, f.order())?;
    let s = f.labeled;
    let sigma = f.sigma();
    let target = f.canonical_pack();
    let n = h.order();
    let mut hits = 0u64;
    for_each_injection(n, s, |theta| {
        if !induces_type(h, &sigma.graph, theta) {
            return;
        }
        let rest = complement(n, theta);
        for_each_combination(&rest, f.order() - s, |a| {
            if labeled_key(h, theta, a) == target {
                hits += 1;
            }
        });
    });
    let denom = falling_factorial(n, s) * binomial(n - s, f.order() - s);
    Ok(Rational::new(BigInt::from(hits), BigInt::from(denom)))
}

/// Expected value over injective `theta` of the probability that independent
/// random sets `V1 ⊇ im(theta)`, `V2 ⊇ im(theta)` of sizes `|F1|`, `|F2|` with
/// `V1 ∩ V2 = im(theta)` induce `F1` and `F2` respectively.
pub fn avg_pair_density(f1: &Flag, f2: &Flag, h: &ColoredGraph) -> Result<Rational> {
    if f1.labeled != f2.labeled || f1.sigma() != f2.sigma() {
        return Err(Error::TypeMismatch(format!("{f1} and {f2} have different types")));
    }
    let s = f1.labeled;
    let (m1, m2) = (f1.order(), f2.order());
    check_host(m1, h, m1 + m2 - s)?;
    let sigma = f1.sigma();
    let (k1, k2) = (f1.canonical_pack(), f2.canonical_pack());
    let n = h.order();
    let mut hits = 0u64;
    for_each_injection(n, s, |theta| {
        if !induces_type(h, &sigma.graph, theta) {
            return;
        }
        let rest = complement(n, theta);
        for_each_combination(&rest, m1 - s, |a| {
            if labeled_key(h, theta, a) != k1 {
                return;
            }
            let others: Vec<usize> = rest.iter().copied().filter(|v| !a.contains(v)).collect();
            for_each_combination(&others, m2 - s, |b| {
                if labeled_key(h, theta, b) == k2 {
                    hits += 1;
                }
            });
        });
    });
    let denom = falling_factorial(n, s) * binomial(n - s, m1 - s) * binomial(n - m1, m2 - s);
    Ok(Rational::new(BigInt::from(hits), BigInt::from(denom)))
}

/// Integer counts over a common denominator for one basis and one host.
/// `entries` holds `(a, b, count)` with `a <= b`; the count for `(b, a)` is the
/// same.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCounts {
    pub dim: usize,
    pub denominator: u64,
    pub entries: Vec<(u32, u32, u64)>,
}

impl PairCounts {
    pub fn to_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim);
        let d = BigInt::from(self.denominator);
        for &(a, b, c) in &self.entries {
            m.set(a as usize, b as usize, Rational::new(BigInt::from(c), d.clone()));
        }
        m
    }

    fn from_map(dim: usize, denominator: u64, map: HashMap<(u32, u32), u64>) -> Self {
        let mut entries: Vec<(u32, u32, u64)> =
            map.into_iter().filter(|&((a, b), _)| a <= b).map(|((a, b), c)| (a, b, c)).collect();
        entries.sort_unstable();
        PairCounts {
            dim,
            denominator,
            entries,
        }
    }
}

/// Counts of `p(F, theta; h)` numerators summed over `theta`, one per basis flag,
/// with denominator `#theta * C(n - s, m - s)`.
pub fn single_counts(basis: &FlagBasis, h: &ColoredGraph) -> Result<(u64, Vec<u64>)> {
    let s = basis.sigma.order();
    let m = basis.order;
    check_host(m, h, m)?;
    let n = h.order();
    let mut counts = vec![0u64; basis.len()];
    for_each_injection(n, s, |theta| {
        if !induces_type(h, &basis.sigma.graph, theta) {
            return;
        }
        let rest = complement(n, theta);
        for_each_combination(&rest, m - s, |a| counts[basis.identify(h, theta, a)] += 1);
    });
    Ok((falling_factorial(n, s) * binomial(n - s, m - s), counts))
}

/// Pair-density counts by enumerating every `V1` and then every disjoint `V2`.
pub fn pair_counts_superset(basis: &FlagBasis, h: &ColoredGraph) -> Result<PairCounts> {
    let s = basis.sigma.order();
    let m = basis.order;
    check_host(m, h, 2 * m - s)?;
    let n = h.order();
    let mut map: HashMap<(u32, u32), u64> = HashMap::new();
    for_each_injection(n, s, |theta| {
        if !induces_type(h, &basis.sigma.graph, theta) {
            return;
        }
        let rest = complement(n, theta);
        for_each_combination(&rest, m - s, |a| {
            let ia = basis.identify(h, theta, a) as u32;
            let others: Vec<usize> = rest.iter().copied().filter(|v| !a.contains(v)).collect();
            for_each_combination(&others, m - s, |b| {
                let ib = basis.identify(h, theta, b) as u32;
                *map.entry((ia, ib)).or_insert(0) += 1;
            });
        });
    });
    let denom = falling_factorial(n, s) * binomial(n - s, m - s) * binomial(n - m, m - s);
    Ok(PairCounts::from_map(basis.len(), denom, map))
}

/// Pair-density counts for hosts of order exactly `2m - |σ|`, where `V2` is the
/// complement of `V1`.
pub fn pair_counts_partition(basis: &FlagBasis, h: &ColoredGraph) -> Result<PairCounts> {
    let s = basis.sigma.order();
    let m = basis.order;
    let n = h.order();
    if n != 2 * m - s {
        return Err(Error::SizeMismatch(format!(
            "partition enumeration needs a host of order {}, got {n}",
            2 * m - s
        )));
    }
    let mut map: HashMap<(u32, u32), u64> = HashMap::new();
    for_each_injection(n, s, |theta| {
        if !induces_type(h, &basis.sigma.graph, theta) {
            return;
        }
        let rest = complement(n, theta);
        for_each_combination(&rest, m - s, |a| {
            let b: Vec<usize> = rest.iter().copied().filter(|v| !a.contains(v)).collect();
            let ia = basis.identify(h, theta, a) as u32;
            let ib = basis.identify(h, theta, &b) as u32;
            *map.entry((ia, ib)).or_insert(0) += 1;
        });
    });
    let denom = falling_factorial(n, s) * binomial(n - s, m - s);
    Ok(PairCounts::from_map(basis.len(), denom, map))
}

/// Pair-density counts, using partition enumeration when the host has order
/// exactly `2m - |σ|`.
pub fn pair_counts(basis: &FlagBasis, h: &ColoredGraph) -> Result<PairCounts> {
    if h.order() == 2 * basis.order - basis.sigma.order() {
        pair_counts_partition(basis, h)
    } else {
        pair_counts_superset(basis, h)
    }
}

/// Matrix of `E_theta[p(F_a, F_b, theta; h)]` over the basis.
pub fn coefficient_matrix(basis: &FlagBasis, h: &ColoredGraph) -> Result<RationalMatrix> {
    Ok(pair_counts(basis, h)?.to_matrix())
}

type CacheKey = (u64, usize, usize, u64);

/// Memo table for pair counts keyed by type, flag order and canonical host.
#[derive(Default)]
pub struct PairCountCache {
    table: Mutex<HashMap<CacheKey, Arc<PairCounts>>>,
}

impl PairCountCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts for a canonical host; computed once per key.
    pub fn get(&self, basis: &FlagBasis, canonical_host: &ColoredGraph) -> Result<Arc<PairCounts>> {
        let key = (
            basis.sigma.graph.pack(),
            basis.sigma.order(),
            basis.order,
            canonical_host.pack(),
        );
        if let Some(hit) = self.table.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let counts = Arc::new(pair_counts(basis, canonical_host)?);
        self.table.lock().expect("cache lock").insert(key, counts.clone());
        Ok(counts)
    }

    pub fn len(&self) -> usize {
        self.table.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num_traits::Zero;

    fn vertex_type() -> Flag {
        Flag::parse("1|1:", 3).unwrap()
    }

    fn edge_flag(c: u8) -> Flag {
        Flag::new(ColoredGraph::new(2, 3, vec![c]).unwrap(), 1).unwrap()
    }

    #[test]
    fn type_counts() {
        assert_eq!(enumerate_types(0, 3).unwrap().len(), 1);
        assert_eq!(enumerate_types(1, 3).unwrap().len(), 1);
        assert_eq!(enumerate_types(2, 3).unwrap().len(), 3);
        assert_eq!(enumerate_types(3, 3).unwrap().len(), 10);
        assert_eq!(enumerate_types(4, 3).unwrap().len(), 66);
        assert!(enumerate_types(5, 3).is_err());
    }

    #[test]
    fn flag_basis_sizes() {
        assert_eq!(enumerate_flags(&vertex_type(), 2).unwrap().len(), 3);
        assert_eq!(enumerate_flags(&Flag::empty_type(3), 3).unwrap().len(), 10);
        for sigma in enumerate_types(3, 3).unwrap() {
            let b = enumerate_flags(&sigma, 4).unwrap();
            assert_eq!(b.len(), 27);
            assert!(b.flags().iter().all(|f| f.sigma() == sigma));
        }
        assert!(enumerate_flags(&edge_flag(0), 3).is_err());
        assert!(enumerate_flags(&vertex_type(), 0).is_err());
    }

    #[test]
    fn flag_text_round_trip() {
        let f = Flag::parse("2|4:012210", 3).unwrap();
        assert_eq!(f.to_string(), "2|4:012210");
        assert_eq!(Flag::parse("0|0:", 3).unwrap(), Flag::empty_type(3));
        assert!(Flag::parse("5|4:012210", 3).is_err());
        assert!(Flag::parse("2-4:012210", 3).is_err());
    }

    #[test]
    fn single_density_examples() {
        let tri = ColoredGraph::parse("3:001", 3).unwrap();
        assert_eq!(avg_single_density(&edge_flag(0), &tri).unwrap(), rat(2, 3));
        // A type's own density is the chance that theta induces it.
        let sigma = Flag::fully_labeled(ColoredGraph::new(2, 3, vec![1]).unwrap());
        assert_eq!(avg_single_density(&sigma, &tri).unwrap(), rat(1, 3));
        assert!(avg_single_density(&Flag::fully_labeled(ColoredGraph::monochromatic(4, 3, 0).unwrap()), &tri).is_err());
    }

    #[test]
    fn pair_density_examples() {
        let tri = ColoredGraph::parse("3:001", 3).unwrap();
        let f = edge_flag(0);
        assert_eq!(avg_pair_density(&f, &f, &tri).unwrap(), rat(1, 3));
        let g = edge_flag(1);
        assert_eq!(
            avg_pair_density(&f, &g, &tri).unwrap(),
            avg_pair_density(&g, &f, &tri).unwrap()
        );
        let other_type = Flag::new(ColoredGraph::new(3, 3, vec![0, 0, 0]).unwrap(), 2).unwrap();
        assert!(matches!(avg_pair_density(&f, &other_type, &tri), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn monochromatic_host_matrix() {
        let h = ColoredGraph::monochromatic(6, 3, 0).unwrap();
        let basis = enumerate_flags(&vertex_type(), 2).unwrap();
        let m = coefficient_matrix(&basis, &h).unwrap();
        let zero_flag = basis.index_of(&edge_flag(0)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == zero_flag && b == zero_flag { int(1) } else { Rational::zero() };
                assert_eq!(m.get(a, b), &expected);
            }
        }
    }

    #[test]
    fn partition_and_superset_paths_agree() {
        let fam = enumerate_graphs(5, 3).unwrap();
        let plans = [(1usize, 3usize), (3, 4)];
        for (s, m) in plans {
            for sigma in enumerate_types(s, 3).unwrap().into_iter().take(4) {
                let basis = enumerate_flags(&sigma, m).unwrap();
                for h in fam.iter().step_by(37) {
                    let a = pair_counts_partition(&basis, h).unwrap().to_matrix();
                    let b = pair_counts_superset(&basis, h).unwrap().to_matrix();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn matrices_are_probability_tables() {
        let fam = enumerate_graphs(6, 3).unwrap();
        let sigma = enumerate_types(2, 3).unwrap().remove(1);
        let basis = enumerate_flags(&sigma, 4).unwrap();
        for h in fam.iter().step_by(997) {
            let m = coefficient_matrix(&basis, h).unwrap();
            assert!(m.is_symmetric());
            for a in 0..m.dim() {
                let row: Rational = (0..m.dim()).map(|b| m.get(a, b).clone()).sum();
                assert!(row <= int(1));
                assert!((0..m.dim()).all(|b| *m.get(a, b) >= Rational::zero()));
            }
            assert!(m.trace() >= Rational::zero());
        }
    }

    #[test]
    fn per_theta_normalization() {
        // Summing over a basis recovers the probability that theta induces sigma.
        let fam = enumerate_graphs(5, 3).unwrap();
        for sigma in enumerate_types(3, 3).unwrap() {
            let basis = enumerate_flags(&sigma, 4).unwrap();
            for h in fam.iter().step_by(53) {
                let (den, counts) = single_counts(&basis, h).unwrap();
                let total: u64 = counts.iter().sum();
                let induced = avg_single_density(&sigma, h).unwrap();
                assert_eq!(Rational::new(total.into(), den.into()), induced);
                let pairs = pair_counts(&basis, h).unwrap();
                let ordered: u64 = pairs
                    .entries
                    .iter()
                    .map(|&(a, b, c)| if a == b { c } else { 2 * c })
                    .sum();
                assert_eq!(Rational::new(ordered.into(), pairs.denominator.into()), induced);
            }
        }
    }

    #[test]
    fn cache_reuses_entries() {
        let cache = PairCountCache::new();
        let basis = enumerate_flags(&vertex_type(), 3).unwrap();
        let h = ColoredGraph::parse("5:0120120120", 3).unwrap().canonical();
        let a = cache.get(&basis, &h).unwrap();
        let b = cache.get(&basis, &h).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }
}

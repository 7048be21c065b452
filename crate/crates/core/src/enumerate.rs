//! Families of pairwise non-isomorphic coloured complete graphs, colour-orbit
//! reduction and induced-subgraph densities.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::combinatorics::{binomial, for_each_combination};
use crate::error::{Error, Result};
use crate::graph::{color_permutations, ColoredGraph, MAX_CANONICAL_ORDER};
use crate::rational::Rational;

/// All coloured complete graphs of one order, up to isomorphism.
#[derive(Clone, Debug)]
pub struct GraphFamily {
    pub level: usize,
    pub colors: u8,
    /// Canonical representatives sorted by their canonical key.
    pub members: Vec<ColoredGraph>,
    /// Orbit sizes under colour permutations, when the family holds orbit
    /// representatives.
    pub orbit_sizes: Option<Vec<usize>>,
    index: HashMap<u64, usize>,
}

impl GraphFamily {
    pub fn new(level: usize, colors: u8, mut members: Vec<ColoredGraph>) -> Self {
        members.sort_unstable();
        members.dedup();
        let index = members.iter().enumerate().map(|(i, g)| (g.pack(), i)).collect();
        GraphFamily {
            level,
            colors,
            members,
            orbit_sizes: None,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Position of the class of `g` in the family.
    pub fn index_of(&self, g: &ColoredGraph) -> Option<usize> {
        self.index_of_canonical(&g.canonical())
    }

    /// Position of an already canonical graph.
    pub fn index_of_canonical(&self, canonical: &ColoredGraph) -> Option<usize> {
        if canonical.order() != self.level {
            return None;
        }
        self.index.get(&canonical.pack()).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ColoredGraph> {
        self.members.iter()
    }

    /// One line per member, `<graph>` or `<graph> <orbit size>`.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        for (i, g) in self.members.iter().enumerate() {
            match &self.orbit_sizes {
                Some(sizes) => writeln!(out, "{g} {}", sizes[i]),
                None => writeln!(out, "{g}"),
            }
            .expect("write to memory");
        }
        crate::io::write_atomic(path, &out)
    }

    pub fn read(path: &Path, colors: u8) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut members = Vec::new();
        let mut sizes = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let g = ColoredGraph::parse(parts.next().unwrap_or(""), colors)
                .map_err(|e| Error::parse(ln + 1, e.to_string()))?;
            if let Some(size) = parts.next() {
                sizes.push(size.parse::<usize>().map_err(|_| Error::parse(ln + 1, "bad orbit size"))?);
            }
            members.push(g.canonical());
        }
        let level = members.first().map_or(0, |g| g.order());
        if members.iter().any(|g| g.order() != level) {
            return Err(Error::parse(0, "family mixes graph orders"));
        }
        let mut fam = GraphFamily::new(level, colors, members);
        if !sizes.is_empty() {
            if sizes.len() != fam.len() {
                return Err(Error::parse(0, "orbit sizes given for only some members"));
            }
            fam.orbit_sizes = Some(sizes);
        }
        Ok(fam)
    }
}

fn check_enumeration_bounds(l: usize, r: u8) -> Result<()> {
    let max_level = match r {
        2 | 3 => 7,
        4 => 6,
        _ => 0,
    };
    if l == 0 || l > max_level {
        return Err(Error::ResourceBound(format!(
            "enumeration supports 1 <= l <= 7 with r in {{2, 3}} and l <= 6 with r = 4; got l = {l}, r = {r}"
        )));
    }
    Ok(())
}

/// One canonical representative per isomorphism class of `r`-coloured complete
/// graphs on `l` vertices, built by extending level `l - 1` one vertex at a time.
pub fn enumerate_graphs(l: usize, r: u8) -> Result<GraphFamily> {
    check_enumeration_bounds(l, r)?;
    let mut level: Vec<ColoredGraph> = vec![ColoredGraph::new(1, r, Vec::new())?];
    for k in 2..=l {
        level = extend_level(&level, k - 1, r);
        log::debug!("level {k}: {} classes", level.len());
    }
    Ok(GraphFamily::new(l, r, level))
}

fn extend_level(prev: &[ColoredGraph], prev_order: usize, r: u8) -> Vec<ColoredGraph> {
    let attachments = (r as u64).pow(prev_order as u32);
    let mut next: Vec<ColoredGraph> = prev
        .par_iter()
        .flat_map_iter(|g| {
            let mut attach = vec![0u8; prev_order];
            let mut out: Vec<ColoredGraph> = Vec::with_capacity(attachments as usize);
            for code in 0..attachments {
                let mut c = code;
                for slot in attach.iter_mut() {
                    *slot = (c % r as u64) as u8;
                    c /= r as u64;
                }
                out.push(g.extended(&attach).canonical());
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    next.par_sort_unstable();
    next.dedup();
    next
}

/// Collapses a family to one representative per orbit of colour permutations
/// combined with isomorphism. The representative is the least canonical form
/// over all recolourings.
pub fn color_orbits(fam: &GraphFamily) -> GraphFamily {
    let reps: Vec<ColoredGraph> = fam.members.par_iter().map(|g| g.color_canonical()).collect();
    let mut counts: HashMap<&ColoredGraph, usize> = HashMap::new();
    for rep in &reps {
        *counts.entry(rep).or_default() += 1;
    }
    let mut out = GraphFamily::new(fam.level, fam.colors, counts.keys().map(|&g| g.clone()).collect());
    let sizes = out.members.iter().map(|g| counts[g]).collect();
    out.orbit_sizes = Some(sizes);
    out
}

/// Members of the colour orbit of `g` as canonical graphs, one per colour
/// permutation (with repetition).
pub fn color_images(g: &ColoredGraph) -> Vec<ColoredGraph> {
    color_permutations(g.color_count())
        .iter()
        .map(|p| g.recolored(p).canonical())
        .collect()
}

/// Number of `order(f)`-subsets of `g` inducing a copy of `f`, over `C(n, k)`.
pub fn density(f: &ColoredGraph, g: &ColoredGraph) -> Result<Rational> {
    if f.order() > g.order() {
        return Err(Error::SizeMismatch(format!(
            "cannot take density of an order-{} graph in an order-{} graph",
            f.order(),
            g.order()
        )));
    }
    if f.color_count() != g.color_count() {
        return Err(Error::SizeMismatch("graphs use different colour counts".into()));
    }
    if f.order() > MAX_CANONICAL_ORDER {
        return Err(Error::ResourceBound("density pattern too large".into()));
    }
    let key = f.canonical();
    let vertices: Vec<usize> = (0..g.order()).collect();
    let mut hits = 0u64;
    for_each_combination(&vertices, f.order(), |s| {
        if g.induced(s).canonical() == key {
            hits += 1;
        }
    });
    Ok(Rational::new(
        BigInt::from(hits),
        BigInt::from(binomial(g.order(), f.order())),
    ))
}

/// Counts of each induced `k`-vertex class of `g`, keyed by packed canonical form.
pub fn induced_class_counts(g: &ColoredGraph, k: usize) -> HashMap<u64, u64> {
    let vertices: Vec<usize> = (0..g.order()).collect();
    let mut counts = HashMap::new();
    for_each_combination(&vertices, k, |s| {
        *counts.entry(g.induced(s).canonical().pack()).or_insert(0) += 1;
    });
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Burnside count of `r`-colourings of the edges of `K_l` up to vertex
    /// permutations: average number of colourings fixed by each permutation,
    /// where a permutation fixes `r^(#edge cycles)` colourings.
    fn burnside(l: usize, r: u64) -> u64 {
        let mut perm: Vec<usize> = (0..l).collect();
        let mut total = 0u64;
        let mut count = 0u64;
        loop {
            let mut seen = vec![vec![false; l]; l];
            let mut cycles = 0u32;
            for i in 0..l {
                for j in i + 1..l {
                    if seen[i][j] {
                        continue;
                    }
                    cycles += 1;
                    let (mut a, mut b) = (i, j);
                    while !seen[a.min(b)][a.max(b)] {
                        seen[a.min(b)][a.max(b)] = true;
                        a = perm[a];
                        b = perm[b];
                    }
                }
            }
            total += r.pow(cycles);
            count += 1;
            if !crate::graph::next_permutation(&mut perm) {
                break;
            }
        }
        total / count
    }

    #[test]
    fn burnside_oracle_values() {
        assert_eq!(burnside(3, 3), (27 + 3 * 9 + 2 * 3) / 6);
        assert_eq!(burnside(3, 3), 10);
        assert_eq!(burnside(4, 3), 66);
        assert_eq!(burnside(5, 3), 792);
    }

    #[test]
    fn small_counts_match_burnside() {
        for r in [2u8, 3, 4] {
            for l in 1..=5 {
                if r == 4 && l == 5 {
                    continue;
                }
                let fam = enumerate_graphs(l, r).unwrap();
                assert_eq!(fam.len() as u64, burnside(l, r as u64), "l={l} r={r}");
            }
        }
    }

    #[test]
    fn l3_matches_brute_force_over_all_colorings() {
        let mut keys = std::collections::BTreeSet::new();
        for code in 0..27u32 {
            let e = vec![(code % 3) as u8, (code / 3 % 3) as u8, (code / 9) as u8];
            keys.insert(ColoredGraph::new(3, 3, e).unwrap().canonical_key());
        }
        assert_eq!(keys.len(), 10);
        assert_eq!(enumerate_graphs(3, 3).unwrap().len(), 10);
    }

    #[test]
    fn canonical_key_separates_classes_found_by_pairwise_testing() {
        // Exhaustive pairwise isomorphism at l = 4 against explicit permutations.
        let fam = enumerate_graphs(4, 3).unwrap();
        let perms: Vec<Vec<usize>> = {
            let mut p: Vec<usize> = (0..4).collect();
            let mut out = vec![p.clone()];
            while crate::graph::next_permutation(&mut p) {
                out.push(p.clone());
            }
            out
        };
        for (i, a) in fam.iter().enumerate() {
            for b in fam.iter().skip(i + 1) {
                assert!(perms.iter().all(|p| a.permuted(p) != *b));
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_sorted() {
        let a = enumerate_graphs(4, 3).unwrap();
        let b = enumerate_graphs(4, 3).unwrap();
        assert_eq!(a.members, b.members);
        assert!(a.members.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_graphs(2, 3).unwrap().len(), 3);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(enumerate_graphs(8, 3), Err(Error::ResourceBound(_))));
        assert!(matches!(enumerate_graphs(7, 4), Err(Error::ResourceBound(_))));
        assert!(matches!(enumerate_graphs(0, 3), Err(Error::ResourceBound(_))));
        assert!(matches!(enumerate_graphs(3, 5), Err(Error::ResourceBound(_))));
    }

    #[test]
    fn color_orbits_small_levels() {
        let fam = enumerate_graphs(2, 3).unwrap();
        let orbits = color_orbits(&fam);
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits.orbit_sizes, Some(vec![3]));

        let fam3 = enumerate_graphs(3, 3).unwrap();
        let orbits3 = color_orbits(&fam3);
        let sizes = orbits3.orbit_sizes.clone().unwrap();
        assert_eq!(sizes.iter().sum::<usize>(), 10);
        let rainbow = ColoredGraph::parse("3:012", 3).unwrap();
        let idx = orbits3.index_of(&rainbow.color_canonical()).unwrap();
        assert_eq!(sizes[idx], 1);
    }

    #[test]
    fn density_examples() {
        let tri = enumerate_graphs(3, 3).unwrap();
        let g = ColoredGraph::from_fn(6, 3, |i, j| ((i * 7 + j * 3) % 3) as u8).unwrap();
        let total: Rational = tri.iter().map(|t| density(t, &g).unwrap()).sum();
        assert_eq!(total, rat(1, 1));
        assert_eq!(density(&g, &g).unwrap(), rat(1, 1));
        assert!(density(&g, &tri.members[0]).is_err());
    }
}

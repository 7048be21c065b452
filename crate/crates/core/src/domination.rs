//! Ground-truth domination semantics: palettes, strong domination, good sets,
//! the extremal constructions, random blow-ups and exhaustive sweeps.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::for_each_combination;
use crate::enumerate::enumerate_graphs;
use crate::error::{Error, Result};
use crate::graph::{pair_index, Color, ColoredGraph};
use crate::rational::Rational;

/// Largest graph [`blowup`] will build.
pub const MAX_BLOWUP_ORDER: usize = 4096;

/// A set of colours as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ColorSet(u8);

impl ColorSet {
    pub fn from_mask(mask: u8) -> Self {
        ColorSet(mask)
    }

    pub fn from_colors(colors: &[Color]) -> Self {
        ColorSet(colors.iter().fold(0, |m, &c| m | (1 << c)))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & (1 << c) != 0
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1 << c;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        (0..8u8).filter(move |&c| self.0 & (1 << c) != 0)
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Outcome of a strong-domination query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationResult {
    pub color: Color,
    pub witness: Vec<usize>,
    pub dominated_count: usize,
    pub dominated: Vec<usize>,
}

/// Per-colour neighbourhoods as bitsets.
struct ColorAdjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ColorAdjacency {
    fn new(g: &ColoredGraph) -> Self {
        let n = g.order();
        let words = n.div_ceil(64);
        let r = g.color_count() as usize;
        let mut bits = vec![0u64; r * n * words];
        for i in 0..n {
            for j in i + 1..n {
                let c = g.color(i, j) as usize;
                bits[(c * n + i) * words + j / 64] |= 1 << (j % 64);
                bits[(c * n + j) * words + i / 64] |= 1 << (i % 64);
            }
        }
        ColorAdjacency { n, words, bits }
    }

    fn row(&self, c: Color, v: usize) -> &[u64] {
        let start = (c as usize * self.n + v) * self.words;
        &self.bits[start..start + self.words]
    }

    fn dominated_mask(&self, set: &[usize], c: Color) -> Vec<u64> {
        let mut acc = vec![0u64; self.words];
        for &v in set {
            for (a, &b) in acc.iter_mut().zip(self.row(c, v)) {
                *a |= b;
            }
        }
        acc
    }

    fn dominated_count(&self, set: &[usize], c: Color) -> usize {
        if self.words == 1 {
            let mut acc = 0u64;
            for &v in set {
                acc |= self.bits[c as usize * self.n + v];
            }
            return acc.count_ones() as usize;
        }
        self.dominated_mask(set, c).iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn mask_members(mask: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in mask.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            out.push(w * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    out
}

/// Colours of the edges at `v`.
pub fn palette(g: &ColoredGraph, v: usize) -> Result<ColorSet> {
    if v >= g.order() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: g.order(),
        });
    }
    if g.order() < 2 {
        return Err(Error::InvalidGraph("palette needs at least two vertices".into()));
    }
    Ok(ColorSet(g.palette_mask(v)))
}

/// Vertices with a `c`-coloured edge to some member of `set`. A member of `set`
/// is included only through an edge to another member.
pub fn strong_dom_set(g: &ColoredGraph, set: &[usize], c: Color) -> Result<DominationResult> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("dominating set must be nonempty".into()));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= g.order()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: g.order(),
        });
    }
    let adj = ColorAdjacency::new(g);
    let dominated = mask_members(&adj.dominated_mask(set, c));
    Ok(DominationResult {
        color: c,
        witness: set.to_vec(),
        dominated_count: dominated.len(),
        dominated,
    })
}

/// The colour and `t`-set strongly dominating the most vertices. Ties go to the
/// smallest colour, then the lexicographically smallest set.
pub fn best_strong_domination(g: &ColoredGraph, t: usize) -> Result<DominationResult> {
    if t == 0 || t > g.order() {
        return Err(Error::InvalidArgument(format!(
            "set size {t} must be between 1 and {}",
            g.order()
        )));
    }
    let adj = ColorAdjacency::new(g);
    let vertices: Vec<usize> = (0..g.order()).collect();
    let mut best: Option<(usize, Color, Vec<usize>)> = None;
    for c in 0..g.color_count() {
        for_each_combination(&vertices, t, |s| {
            let count = adj.dominated_count(s, c);
            if best.as_ref().is_none_or(|b| count > b.0) {
                best = Some((count, c, s.to_vec()));
            }
        });
    }
    let (_, color, witness) = best.expect("t <= order guarantees a candidate");
    let dominated = mask_members(&adj.dominated_mask(&witness, color));
    Ok(DominationResult {
        color,
        dominated_count: dominated.len(),
        dominated,
        witness,
    })
}

/// Good set for `c`: at least two of the three edges are coloured `c`, or exactly
/// one is and the opposite vertex sees every colour other than `c` in `g`.
pub fn is_good_set(g: &ColoredGraph, set: &[usize], c: Color) -> Result<bool> {
    if set.len() != 3 {
        return Err(Error::InvalidArgument("good sets have exactly three vertices".into()));
    }
    if g.color_count() != 3 {
        return Err(Error::InvalidArgument("good sets are defined for three colours".into()));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= g.order()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: g.order(),
        });
    }
    let [x, y, z] = [set[0], set[1], set[2]];
    let opposite = [(g.color(y, z), x), (g.color(x, z), y), (g.color(x, y), z)];
    let c_edges: Vec<usize> = opposite.iter().filter(|e| e.0 == c).map(|e| e.1).collect();
    Ok(match c_edges.len() {
        0 => false,
        1 => {
            let mut seen = ColorSet(g.palette_mask(c_edges[0]));
            seen.insert(c);
            seen.len() == 3
        }
        _ => true,
    })
}

fn class_of(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect()
}

/// Colour of an edge between classes `i` and `j` in the three-class
/// construction: `i` when `i == j` or `i = j + 1 (mod 3)`.
fn kierstead_color(i: usize, j: usize) -> Color {
    if i == j || i == (j + 1) % 3 {
        i as Color
    } else {
        j as Color
    }
}

/// Splits `n` into three near-equal parts, larger parts first.
fn even_split3(n: usize) -> [usize; 3] {
    [n / 3 + usize::from(!n.is_multiple_of(3)), n / 3 + usize::from(n % 3 > 1), n / 3]
}

/// The extremal constructions. With `r = 3` and class sizes `(a, b, c)` an edge
/// between classes `i` and `j` gets colour `i` when `i == j` or `i = j + 1 (mod 3)`.
/// With `r = 4` the first class plays the part of the vertices seeing colours
/// `{0, 1, 2}` and class `k >= 1` sees `{k - 1, 3}`; see [`kierstead4_with`].
pub fn kierstead(class_sizes: &[usize], r: u8) -> Result<ColoredGraph> {
    match (r, class_sizes.len()) {
        (3, 3) => {
            let class = class_of(class_sizes);
            if class.is_empty() {
                return Err(Error::InvalidArgument("construction needs at least one vertex".into()));
            }
            ColoredGraph::from_fn(class.len(), 3, |a, b| kierstead_color(class[a], class[b]))
        }
        (4, 4) => kierstead4_with(class_sizes, even_split3(class_sizes[0]), &|k, _, _| (k - 1) as Color),
        _ => Err(Error::InvalidArgument(format!(
            "construction takes 3 classes with r = 3 or 4 classes with r = 4, got {} classes with r = {r}",
            class_sizes.len()
        ))),
    }
}

/// Four-colour construction with explicit choices for the parts left open:
/// `split` divides the first class into three parts coloured by the three-colour
/// rule, and `internal(k, a, b)` colours the edge between the `a`-th and `b`-th
/// vertex of class `k >= 1` (it must return `k - 1` or `3`). Edges between the
/// first class and class `k` get colour `k - 1`; edges between classes `k, k' >= 1`
/// get colour `3`.
pub fn kierstead4_with(
    class_sizes: &[usize],
    split: [usize; 3],
    internal: &dyn Fn(usize, usize, usize) -> Color,
) -> Result<ColoredGraph> {
    if class_sizes.len() != 4 {
        return Err(Error::InvalidArgument("four-colour construction takes 4 classes".into()));
    }
    if split.iter().sum::<usize>() != class_sizes[0] {
        return Err(Error::InvalidArgument("split must partition the first class".into()));
    }
    let class = class_of(class_sizes);
    let offsets: Vec<usize> = class_sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    let part = class_of(&split);
    let mut bad = None;
    let g = ColoredGraph::from_fn(class.len(), 4, |a, b| {
        let (ka, kb) = (class[a], class[b]);
        match (ka, kb) {
            (0, 0) => kierstead_color(part[a], part[b]),
            (0, k) | (k, 0) => (k - 1) as Color,
            (k, l) if k == l => {
                let c = internal(k, a - offsets[k], b - offsets[k]);
                if c != (k - 1) as Color && c != 3 {
                    bad = Some(c);
                }
                c
            }
            _ => 3,
        }
    })?;
    if let Some(c) = bad {
        return Err(Error::InvalidArgument(format!(
            "internal colour {c} is outside the class palette"
        )));
    }
    Ok(g)
}

/// Replaces every vertex `u` of `g` by `n` vertices. Edges between classes copy
/// `g`; edges inside the class of `u` are coloured uniformly from the palette of
/// `u`. Class `u` occupies vertices `u * n .. (u + 1) * n`.
///
/// The colour of the `k`-th internal edge of class `u` is drawn from a ChaCha8
/// stream keyed by `(seed, u)` at word position `2k`, so the output does not
/// depend on evaluation order.
pub fn blowup(g: &ColoredGraph, n: usize, seed: u64) -> Result<ColoredGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("class size must be at least 1".into()));
    }
    let total = g.order() * n;
    if total > MAX_BLOWUP_ORDER {
        return Err(Error::ResourceBound(format!(
            "blow-up of order {total} exceeds {MAX_BLOWUP_ORDER}"
        )));
    }
    if g.order() == 1 && n > 1 {
        return Err(Error::InvalidArgument("vertex with an empty palette cannot be blown up".into()));
    }
    let palettes: Vec<Vec<Color>> = (0..g.order())
        .map(|u| ColorSet(g.palette_mask(u)).iter().collect())
        .collect();
    let mut internal: Vec<Vec<Color>> = Vec::with_capacity(g.order());
    for (u, pal) in palettes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u as u64);
        let edges = crate::graph::edge_count(n);
        let mut colors = Vec::with_capacity(edges);
        for k in 0..edges {
            rng.set_word_pos(2 * k as u128);
            let x = rng.next_u64();
            colors.push(pal[((x as u128 * pal.len() as u128) >> 64) as usize]);
        }
        internal.push(colors);
    }
    ColoredGraph::from_fn(total, g.color_count(), |a, b| {
        let (ua, ub) = (a / n, b / n);
        if ua == ub {
            internal[ua][pair_index(n, a % n, b % n)]
        } else {
            g.color(ua, ub)
        }
    })
}

/// Outcome of [`exhaustive_min_domination`].
#[derive(Clone, Debug)]
pub struct SweepResult {
    /// Minimum over all graphs of the best strong-domination count.
    pub min_count: usize,
    /// `min_count / l`.
    pub fraction: Rational,
    pub graph: ColoredGraph,
    pub best: DominationResult,
    pub graphs_checked: usize,
}

/// Minimum over every `r`-coloured complete graph on `l` vertices of the largest
/// number of vertices strongly dominated by a monochromatic `t`-set.
pub fn exhaustive_min_domination(l: usize, r: u8, t: usize) -> Result<SweepResult> {
    if r == 3 && l > 6 {
        return Err(Error::ResourceBound(format!("sweep supports l <= 6 for r = 3, got {l}")));
    }
    if t == 0 || t > l {
        return Err(Error::InvalidArgument(format!("set size {t} must be between 1 and {l}")));
    }
    let fam = enumerate_graphs(l, r)?;
    let (count, idx) = fam
        .members
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let adj = ColorAdjacency::new(g);
            let vertices: Vec<usize> = (0..g.order()).collect();
            let mut best = 0;
            for c in 0..r {
                for_each_combination(&vertices, t, |s| best = best.max(adj.dominated_count(s, c)));
            }
            (best, i)
        })
        .min()
        .expect("families are nonempty");
    let graph = fam.members[idx].clone();
    let best = best_strong_domination(&graph, t)?;
    debug_assert_eq!(best.dominated_count, count);
    Ok(SweepResult {
        min_count: count,
        fraction: Rational::new(BigInt::from(count), BigInt::from(l)),
        graph,
        best,
        graphs_checked: fam.len(),
    })
}

/// Draws `count` distinct-vertex 3-sets uniformly at random among those that are
/// good for `c` (rejection sampling, seeded).
pub fn sample_good_sets(g: &ColoredGraph, c: Color, count: usize, seed: u64) -> Result<Vec<[usize; 3]>> {
    if g.order() < 3 {
        return Err(Error::InvalidArgument("need at least three vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count as u64 + 1) * 1000 {
            return Err(Error::InvalidArgument(format!("no good sets for colour {c} found")));
        }
        let x = rng.gen_range(0..g.order());
        let y = rng.gen_range(0..g.order());
        let z = rng.gen_range(0..g.order());
        if x == y || y == z || x == z {
            continue;
        }
        if is_good_set(g, &[x, y, z], c)? {
            out.push([x, y, z]);
        }
    }
    Ok(out)
}

//! Edge-coloured complete graphs and their canonical forms.
//!
//! Edges are stored in row-major pair order `(0,1), (0,2), ..., (0,n-1), (1,2), ...`
//! and every text format in the crate uses the same order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest order accepted by the canonical labeling routines.
pub const MAX_CANONICAL_ORDER: usize = 8;

pub type Color = u8;

/// An `r`-edge-coloured complete graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredGraph {
    order: usize,
    colors: u8,
    edges: Vec<Color>,
}

/// Index of the pair `{i, j}` (`i != j`) in row-major order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[inline]
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl ColoredGraph {
    pub fn new(order: usize, colors: u8, edges: Vec<Color>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGraph("order must be at least 1".into()));
        }
        if colors == 0 {
            return Err(Error::InvalidGraph("colour count must be at least 1".into()));
        }
        if edges.len() != edge_count(order) {
            return Err(Error::InvalidGraph(format!(
                "expected {} edge colours for order {order}, got {}",
                edge_count(order),
                edges.len()
            )));
        }
        if let Some(&bad) = edges.iter().find(|&&c| c >= colors) {
            return Err(Error::InvalidGraph(format!(
                "colour {bad} out of range for {colors} colours"
            )));
        }
        Ok(ColoredGraph {
            order,
            colors,
            edges,
        })
    }

    /// Every edge gets `color`.
    pub fn monochromatic(order: usize, colors: u8, color: Color) -> Result<Self> {
        Self::new(order, colors, vec![color; edge_count(order)])
    }

    /// Builds a graph from a colouring function on unordered pairs `i < j`.
    pub fn from_fn(order: usize, colors: u8, mut f: impl FnMut(usize, usize) -> Color) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_count(order));
        for i in 0..order {
            for j in i + 1..order {
                edges.push(f(i, j));
            }
        }
        Self::new(order, colors, edges)
    }

    /// The graph with no vertices; only used as the empty type.
    pub fn empty(colors: u8) -> Self {
        ColoredGraph {
            order: 0,
            colors,
            edges: Vec::new(),
        }
    }

    pub(crate) fn from_parts_unchecked(order: usize, colors: u8, edges: Vec<Color>) -> Self {
        debug_assert_eq!(edges.len(), edge_count(order));
        ColoredGraph {
            order,
            colors,
            edges,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn color_count(&self) -> u8 {
        self.colors
    }

    #[inline]
    pub fn edges(&self) -> &[Color] {
        &self.edges
    }

    #[inline]
    pub fn color(&self, i: usize, j: usize) -> Color {
        self.edges[pair_index(self.order, i, j)]
    }

    /// The induced subgraph on `vertices`, relabeled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> ColoredGraph {
        let k = vertices.len();
        let mut edges = Vec::with_capacity(edge_count(k));
        for a in 0..k {
            for b in a + 1..k {
                edges.push(self.color(vertices[a], vertices[b]));
            }
        }
        ColoredGraph::from_parts_unchecked(k, self.colors, edges)
    }

    /// Relabels so that new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ColoredGraph {
        debug_assert_eq!(perm.len(), self.order);
        self.induced(perm)
    }

    /// Applies a permutation of the colour names: colour `c` becomes `perm[c]`.
    pub fn recolored(&self, perm: &[Color]) -> ColoredGraph {
        let edges = self.edges.iter().map(|&c| perm[c as usize]).collect();
        ColoredGraph::from_parts_unchecked(self.order, self.colors, edges)
    }

    /// Appends a vertex whose edges to the existing vertices have the given colours.
    pub fn extended(&self, attach: &[Color]) -> ColoredGraph {
        debug_assert_eq!(attach.len(), self.order);
        let n = self.order + 1;
        let mut edges = Vec::with_capacity(edge_count(n));
        for i in 0..n {
            for j in i + 1..n {
                if j == n - 1 {
                    edges.push(attach[i]);
                } else {
                    edges.push(self.color(i, j));
                }
            }
        }
        ColoredGraph::from_parts_unchecked(n, self.colors, edges)
    }

    /// Packs order and edge colours into a `u64` (2 bits per edge). Injective for
    /// graphs of order at most [`MAX_CANONICAL_ORDER`] with at most 4 colours.
    pub fn pack(&self) -> u64 {
        debug_assert!(self.order <= MAX_CANONICAL_ORDER && self.colors <= 4);
        pack_digits(self.order, self.edges.iter().copied())
    }

    /// `<n>:<digits>`.
    pub fn to_line(&self) -> String {
        self.to_string()
    }

    /// Parses `<n>:<digits>` for a graph with `colors` colours.
    pub fn parse(line: &str, colors: u8) -> Result<Self> {
        let line = line.trim();
        if line == "0:" {
            return Ok(ColoredGraph::empty(colors));
        }
        let (n, digits) = line
            .split_once(':')
            .ok_or_else(|| Error::InvalidGraph(format!("`{line}` is not of the form <n>:<digits>")))?;
        let order: usize = n
            .parse()
            .map_err(|_| Error::InvalidGraph(format!("bad order in `{line}`")))?;
        let edges = digits
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .map(|d| d as Color)
                    .ok_or_else(|| Error::InvalidGraph(format!("bad colour digit `{ch}` in `{line}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        ColoredGraph::new(order, colors, edges)
    }

    /// Colours present on edges at `v`, as a bitmask.
    pub fn palette_mask(&self, v: usize) -> u8 {
        (0..self.order)
            .filter(|&u| u != v)
            .fold(0u8, |m, u| m | (1 << self.color(u, v)))
    }

    /// Canonical key: the lexicographically least edge sequence over all relabelings.
    pub fn canonical_key(&self) -> CanonicalKey {
        let (_, edges) = canonical_labeling(self, 0);
        CanonicalKey {
            order: self.order,
            colors: self.colors,
            digits: edges,
        }
    }

    /// The graph relabeled into its canonical form.
    pub fn canonical(&self) -> ColoredGraph {
        let (_, edges) = canonical_labeling(self, 0);
        ColoredGraph::from_parts_unchecked(self.order, self.colors, edges)
    }

    /// Minimum canonical key over all colour permutations.
    pub fn color_canonical(&self) -> ColoredGraph {
        color_permutations(self.colors)
            .iter()
            .map(|p| self.recolored(p).canonical())
            .min()
            .expect("at least one colour permutation")
    }

    pub fn is_isomorphic(&self, other: &ColoredGraph) -> bool {
        self.order == other.order
            && self.colors == other.colors
            && self.canonical_key() == other.canonical_key()
    }
}

impl fmt::Display for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.order)?;
        for &c in &self.edges {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColoredGraph({self}, r={})", self.colors)
    }
}

#[inline]
pub(crate) fn pack_digits(order: usize, digits: impl Iterator<Item = Color>) -> u64 {
    let mut key = order as u64;
    for (k, c) in digits.enumerate() {
        key |= (c as u64) << (4 + 2 * k);
    }
    key
}

/// The lexicographically least representative of an isomorphism class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey {
    pub order: usize,
    pub colors: u8,
    pub digits: Vec<Color>,
}

impl CanonicalKey {
    pub fn to_graph(&self) -> ColoredGraph {
        ColoredGraph::from_parts_unchecked(self.order, self.colors, self.digits.clone())
    }
}

/// All permutations of `0..r` in lexicographic order.
pub fn color_permutations(r: u8) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut current: Vec<Color> = (0..r).collect();
    loop {
        out.push(current.clone());
        if !next_permutation(&mut current) {
            return out;
        }
    }
}

pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Computes the lexicographically least edge sequence over all vertex orderings
/// that keep vertices `0..fixed` in place, together with an ordering attaining it
/// (`perm[position] = original vertex`).
///
/// The search places vertices one position at a time. Row `k` of the output only
/// depends on the vertex at position `k` and the ordered partition of the
/// remaining vertices, so each row is final once its vertex is chosen and
/// branches whose row exceeds the incumbent are cut.
pub fn canonical_labeling(g: &ColoredGraph, fixed: usize) -> (Vec<usize>, Vec<Color>) {
    let n = g.order();
    assert!(
        n <= MAX_CANONICAL_ORDER,
        "canonical labeling supports order <= {MAX_CANONICAL_ORDER}"
    );
    assert!(fixed <= n);
    if n <= 1 {
        return ((0..n).collect(), Vec::new());
    }
    let mut cells: Vec<Vec<u8>> = (0..fixed).map(|v| vec![v as u8]).collect();
    if fixed < n {
        cells.push((fixed as u8..n as u8).collect());
    }
    let mut search = Search {
        g,
        n,
        best: Vec::new(),
        best_perm: Vec::new(),
        current: Vec::with_capacity(edge_count(n)),
        placed: Vec::with_capacity(n),
    };
    search.descend(cells, false);
    let perm = search.best_perm.iter().map(|&v| v as usize).collect();
    (perm, search.best)
}

struct Search<'a> {
    g: &'a ColoredGraph,
    n: usize,
    best: Vec<Color>,
    best_perm: Vec<u8>,
    current: Vec<Color>,
    placed: Vec<u8>,
}

impl Search<'_> {
    /// `cells` is the ordered partition of unplaced vertices; `ahead` is true when
    /// the current prefix is already strictly smaller than the incumbent. Returns
    /// true if the incumbent was replaced somewhere below this node.
    fn descend(&mut self, cells: Vec<Vec<u8>>, mut ahead: bool) -> bool {
        if cells.is_empty() {
            if ahead || self.best.is_empty() {
                self.best.clone_from(&self.current);
                self.best_perm.clone_from(&self.placed);
                return true;
            }
            return false;
        }
        let mut updated = false;
        for &v in &cells[0] {
            // Refine the remaining cells by colour to v; the row is the colours
            // in refined order.
            let row_start = self.current.len();
            let mut next: Vec<Vec<u8>> = Vec::with_capacity(cells.len() + 2);
            for (ci, cell) in cells.iter().enumerate() {
                let mut members: Vec<(Color, u8)> = cell
                    .iter()
                    .filter(|&&u| !(ci == 0 && u == v))
                    .map(|&u| (self.g.color(v as usize, u as usize), u))
                    .collect();
                if members.is_empty() {
                    continue;
                }
                members.sort_unstable();
                let mut start = 0;
                while start < members.len() {
                    let color = members[start].0;
                    let end = start + members[start..].iter().take_while(|m| m.0 == color).count();
                    self.current.extend(std::iter::repeat_n(color, end - start));
                    next.push(members[start..end].iter().map(|&(_, u)| u).collect());
                    start = end;
                }
            }
            let mut child_ahead = ahead;
            if !ahead && !self.best.is_empty() {
                let row_end = self.current.len();
                match self.current[row_start..row_end].cmp(&self.best[row_start..row_end]) {
                    Ordering::Greater => {
                        self.current.truncate(row_start);
                        continue;
                    }
                    Ordering::Less => child_ahead = true,
                    Ordering::Equal => {}
                }
            }
            self.placed.push(v);
            if self.descend(next, child_ahead) {
                // This node's prefix now equals the incumbent's.
                updated = true;
                ahead = false;
            }
            self.placed.pop();
            self.current.truncate(row_start);
        }
        debug_assert!(self.n > 0);
        updated
    }
}

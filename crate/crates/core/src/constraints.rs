//! Constraint rows for the density bound: square terms from type blocks,
//! domination terms from good pairs, and target densities.
//!
//! Every row is kept as integer numerators over one problem-wide denominator.
//! A row for host `H` reads `t >= d_target(H) + sum_v coeff_v * x_v / denominator`
//! where `x` lists the upper-triangular entries of every block followed by the
//! good-pair multipliers. Off-diagonal entries of a block appear twice in the
//! Frobenius product, so their coefficient is doubled.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write as _};
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, falling_factorial, for_each_combination, for_each_injection};
use crate::domination::is_good_set;
use crate::enumerate::{color_images, color_orbits, density, enumerate_graphs, induced_class_counts};
use crate::error::{Error, Result};
use crate::flags::{
    avg_pair_density, avg_single_density, enumerate_flags, enumerate_types, labeled_key, pair_counts, Flag,
    FlagBasis, MAX_TYPE_ORDER,
};
use crate::graph::{canonical_labeling, color_permutations, Color, ColoredGraph};
use crate::io::write_atomic;
use crate::rational::{format_rational, parse_rational, rat, Rational};

pub fn default_fraction() -> Rational {
    rat(2, 3)
}

/// A colour together with a flag over an order-3 type that is good for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoodPair {
    pub color: Color,
    pub sigma: Flag,
    pub flag: Flag,
}

impl GoodPair {
    pub fn new(color: Color, flag: Flag) -> Result<Self> {
        if flag.labeled() != 3 {
            return Err(Error::TypeMismatch(format!("{flag} is not over an order-3 type")));
        }
        if !is_c_good(&flag, color)? {
            return Err(Error::InvalidArgument(format!("{flag} is not good for colour {color}")));
        }
        Ok(GoodPair {
            color,
            sigma: flag.sigma(),
            flag,
        })
    }
}

/// Whether the labeled triple of `f` is a good set for `c` inside `f`.
pub fn is_c_good(f: &Flag, c: Color) -> Result<bool> {
    if f.labeled() != 3 {
        return Err(Error::TypeMismatch(format!("{f} is not over an order-3 type")));
    }
    is_good_set(f.graph(), &[0, 1, 2], c)
}

/// Flags on one extra vertex whose unlabeled vertex has a `c` edge to the type.
pub fn dominated_extensions(sigma: &Flag, c: Color) -> Result<Vec<Flag>> {
    if !sigma.is_type() || sigma.order() != 3 {
        return Err(Error::TypeMismatch(format!("{sigma} is not an order-3 type")));
    }
    let basis = enumerate_flags(sigma, 4)?;
    Ok(basis
        .flags()
        .iter()
        .filter(|f| (0..3).any(|i| f.graph().color(i, 3) == c))
        .cloned()
        .collect())
}

/// Every `(c, F)` with `F` a `c`-good flag over an order-3 type and
/// `|F| + 1 <= l`, ordered by type, flag order, basis position and colour.
pub fn enumerate_good_pairs(l: usize, r: u8) -> Result<Vec<GoodPair>> {
    if r != 3 {
        return Err(Error::InvalidArgument("good pairs are defined for three colours".into()));
    }
    if l < 4 {
        return Err(Error::SizeMismatch(format!("level {l} leaves no room for a good pair")));
    }
    let mut out = Vec::new();
    for sigma in enumerate_types(3, r)? {
        for m in 3..l {
            let basis = enumerate_flags(&sigma, m)?;
            for f in basis.flags() {
                for c in 0..r {
                    if is_c_good(f, c)? {
                        out.push(GoodPair {
                            color: c,
                            sigma: sigma.clone(),
                            flag: f.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `fraction * E[p(F)] - sum over dominated extensions F' of E[p(F, F')]`,
/// straight from the flag densities.
pub fn domination_coefficient(gp: &GoodPair, h: &ColoredGraph, fraction: &Rational) -> Result<Rational> {
    if gp.flag.order() + 1 > h.order() {
        return Err(Error::SizeMismatch(format!(
            "flag of order {} needs a host of order at least {}",
            gp.flag.order(),
            gp.flag.order() + 1
        )));
    }
    let mut b = fraction * avg_single_density(&gp.flag, h)?;
    for ext in dominated_extensions(&gp.sigma, gp.color)? {
        b -= avg_pair_density(&gp.flag, &ext, h)?;
    }
    Ok(b)
}

/// `(|σ|, m)` pairs with `2m - |σ| = l`.
pub fn default_type_plan(l: usize) -> Result<Vec<(usize, usize)>> {
    match l {
        6 => Ok(vec![(0, 3), (2, 4), (4, 5)]),
        5 => Ok(vec![(1, 3), (3, 4)]),
        _ => Err(Error::InvalidArgument(format!("no default type plan for level {l}"))),
    }
}

/// The six-vertex target graph.
pub fn graph_x() -> ColoredGraph {
    const CLASSES: [[(usize, usize); 5]; 3] = [
        [(1, 4), (2, 3), (3, 5), (5, 6), (6, 2)],
        [(2, 5), (3, 4), (4, 6), (6, 1), (1, 3)],
        [(3, 6), (4, 5), (5, 1), (1, 2), (2, 4)],
    ];
    ColoredGraph::from_fn(6, 3, |i, j| {
        let (a, b) = (i + 1, j + 1);
        CLASSES
            .iter()
            .position(|class| class.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)))
            .expect("every pair of X is coloured") as Color
    })
    .expect("X is a valid graph")
}

/// All five-vertex graphs with a vertex seeing every colour, weight 1 each.
pub fn rainbow_vertex_family() -> Result<Vec<(ColoredGraph, Rational)>> {
    Ok(enumerate_graphs(5, 3)?
        .members
        .into_iter()
        .filter(|g| (0..5).any(|v| g.palette_mask(v) == 0b111))
        .map(|g| (g, Rational::from_integer(1.into())))
        .collect())
}

pub fn default_target(l: usize) -> Result<Vec<(ColoredGraph, Rational)>> {
    match l {
        6 => Ok(vec![(graph_x(), Rational::from_integer(1.into()))]),
        5 => rainbow_vertex_family(),
        _ => Err(Error::InvalidArgument(format!("no default target for level {l}"))),
    }
}

/// Checks that recolouring maps the weighted target onto itself.
pub fn check_orbit_closed(target: &[(ColoredGraph, Rational)]) -> Result<()> {
    let Some(first) = target.first() else { return Ok(()) };
    let r = first.0.color_count();
    let mut weights: HashMap<ColoredGraph, Rational> = HashMap::new();
    for (g, w) in target {
        *weights.entry(g.canonical()).or_insert_with(Rational::zero) += w;
    }
    for perm in color_permutations(r) {
        for (g, w) in &weights {
            let image = g.recolored(&perm).canonical();
            if weights.get(&image) != Some(w) {
                return Err(Error::TargetNotOrbitClosed(format!(
                    "{g} maps to {image}, which carries a different weight"
                )));
            }
        }
    }
    Ok(())
}

/// `sum_i w_i * density(T_i, H)`.
pub fn target_density(target: &[(ColoredGraph, Rational)], h: &ColoredGraph) -> Result<Rational> {
    let mut d = Rational::zero();
    let mut by_order: HashMap<usize, Vec<(u64, &Rational)>> = HashMap::new();
    for (g, w) in target {
        if g.order() > h.order() || g.color_count() != h.color_count() {
            // Same errors as a direct density call.
            density(g, h)?;
        }
        if !w.is_zero() {
            by_order.entry(g.order()).or_default().push((g.canonical().pack(), w));
        }
    }
    for (k, entries) in by_order {
        let counts = induced_class_counts(h, k);
        let total = Rational::from_integer(BigInt::from(binomial(h.order(), k)));
        for (key, w) in entries {
            if let Some(&c) = counts.get(&key) {
                d += w * Rational::from_integer(BigInt::from(c)) / &total;
            }
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeBlock {
    pub sigma: Flag,
    pub m: usize,
    pub dim: usize,
}

impl TypeBlock {
    pub fn variables(&self) -> usize {
        self.dim * (self.dim + 1) / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    Entry { block: usize, i: usize, j: usize },
    Multiplier(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    pub host: ColoredGraph,
    pub orbit_size: usize,
    pub constant: Rational,
    /// Sorted by variable, no zeros.
    pub coeffs: Vec<(u32, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdpProblem {
    pub level: usize,
    pub colors: u8,
    pub fraction: Rational,
    pub target: Vec<(ColoredGraph, Rational)>,
    pub blocks: Vec<TypeBlock>,
    pub good_pairs: Vec<GoodPair>,
    pub symmetrized: bool,
    pub denominator: u64,
    pub rows: Vec<ConstraintRow>,
}

impl SdpProblem {
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len() + 1);
        let mut acc = 0;
        for b in &self.blocks {
            out.push(acc);
            acc += b.variables();
        }
        out.push(acc);
        out
    }

    pub fn entry_variables(&self) -> usize {
        self.blocks.iter().map(TypeBlock::variables).sum()
    }

    pub fn num_variables(&self) -> usize {
        self.entry_variables() + self.good_pairs.len()
    }

    pub fn variable(&self, v: usize) -> Variable {
        let offsets = self.block_offsets();
        variable_at(&self.blocks, &offsets, v)
    }

    /// `d_target(H) + alpha_H + beta_H` for the given variable values.
    pub fn row_value(&self, row: &ConstraintRow, x: &[Rational]) -> Rational {
        row_value(row, self.denominator, x)
    }

    pub fn row_value_f64(&self, row: &ConstraintRow, x: &[f64]) -> f64 {
        let dot: f64 = row.coeffs.iter().map(|&(v, c)| c as f64 * x[v as usize]).sum();
        crate::rational::to_f64(&row.constant) + dot / self.denominator as f64
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).map_err(|e| Error::io(path, e))?;
        write_atomic(path, &buf)
    }

    pub fn write_to(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        let mut w = BufWriter::new(w);
        writeln!(w, "FLAGPROBLEM 1")?;
        writeln!(w, "L {}", self.level)?;
        writeln!(w, "R {}", self.colors)?;
        writeln!(w, "FRACTION {}", format_rational(&self.fraction))?;
        writeln!(w, "SYMMETRIZED {}", u8::from(self.symmetrized))?;
        for (g, wt) in &self.target {
            writeln!(w, "TARGET {} {}", format_rational(wt), g)?;
        }
        for b in &self.blocks {
            writeln!(w, "BLOCK {} {} {}", b.sigma, b.m, b.dim)?;
        }
        for gp in &self.good_pairs {
            writeln!(w, "GOODPAIR {} {} {}", gp.color, gp.sigma, gp.flag)?;
        }
        writeln!(w, "DENOMINATOR {}", self.denominator)?;
        for row in &self.rows {
            write!(w, "ROW {} {} {}", row.host, row.orbit_size, format_rational(&row.constant))?;
            for &(v, c) in &row.coeffs {
                write!(w, " {v}:{c}")?;
            }
            writeln!(w)?;
        }
        writeln!(w, "END")?;
        w.flush()
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file))
    }

    pub fn read_from(reader: impl BufRead) -> Result<Self> {
        let mut p = SdpProblem {
            level: 0,
            colors: 0,
            fraction: default_fraction(),
            target: Vec::new(),
            blocks: Vec::new(),
            good_pairs: Vec::new(),
            symmetrized: false,
            denominator: 0,
            rows: Vec::new(),
        };
        let mut ended = false;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let mut tok = line.split_whitespace();
            let Some(key) = tok.next() else { continue };
            let bad = |msg: &str| Error::parse(lineno, msg.to_string());
            if ended {
                return Err(bad("content after END"));
            }
            if idx == 0 {
                if key != "FLAGPROBLEM" || tok.next() != Some("1") || tok.next().is_some() {
                    return Err(bad("expected `FLAGPROBLEM 1`"));
                }
                continue;
            }
            let mut next = |what: &str| tok.next().ok_or_else(|| bad(&format!("missing {what}")));
            let int = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("bad integer `{s}`")));
            match key {
                "L" => p.level = int(next("level")?)?,
                "R" => {
                    p.colors = int(next("colour count")?)?
                        .try_into()
                        .map_err(|_| bad("colour count too large"))?
                }
                "FRACTION" => p.fraction = parse_rational(next("fraction")?).map_err(|e| bad(&e.to_string()))?,
                "SYMMETRIZED" => p.symmetrized = int(next("flag")?)? != 0,
                "TARGET" => {
                    let w = parse_rational(next("weight")?).map_err(|e| bad(&e.to_string()))?;
                    let g = ColoredGraph::parse(next("graph")?, p.colors).map_err(|e| bad(&e.to_string()))?;
                    p.target.push((g, w));
                }
                "BLOCK" => {
                    let sigma = Flag::parse(next("type")?, p.colors).map_err(|e| bad(&e.to_string()))?;
                    let m = int(next("flag order")?)?;
                    let dim = int(next("dimension")?)?;
                    p.blocks.push(TypeBlock { sigma, m, dim });
                }
                "GOODPAIR" => {
                    let c = int(next("colour")?)? as Color;
                    let sigma = Flag::parse(next("type")?, p.colors).map_err(|e| bad(&e.to_string()))?;
                    let flag = Flag::parse(next("flag")?, p.colors).map_err(|e| bad(&e.to_string()))?;
                    if flag.sigma() != sigma {
                        return Err(bad("flag does not extend its type"));
                    }
                    p.good_pairs.push(GoodPair { color: c, sigma, flag });
                }
                "DENOMINATOR" => {
                    p.denominator = next("denominator")?.parse().map_err(|_| bad("bad denominator"))?;
                    if p.denominator == 0 {
                        return Err(bad("zero denominator"));
                    }
                }
                "ROW" => {
                    let host = ColoredGraph::parse(next("host")?, p.colors).map_err(|e| bad(&e.to_string()))?;
                    let orbit_size = int(next("orbit size")?)?;
                    let constant = parse_rational(next("constant")?).map_err(|e| bad(&e.to_string()))?;
                    let mut coeffs = Vec::new();
                    for t in tok {
                        let (v, c) = t.split_once(':').ok_or_else(|| bad(&format!("bad entry `{t}`")))?;
                        let v: u32 = v.parse().map_err(|_| bad(&format!("bad variable `{v}`")))?;
                        let c: i64 = c.parse().map_err(|_| bad(&format!("bad coefficient `{c}`")))?;
                        coeffs.push((v, c));
                    }
                    p.rows.push(ConstraintRow {
                        host,
                        orbit_size,
                        constant,
                        coeffs,
                    });
                }
                "END" => ended = true,
                other => return Err(bad(&format!("unknown keyword `{other}`"))),
            }
        }
        if !ended {
            return Err(Error::parse(0, "missing END"));
        }
        if p.denominator == 0 {
            return Err(Error::parse(0, "missing DENOMINATOR"));
        }
        let n = p.num_variables();
        if p.rows.iter().flat_map(|r| &r.coeffs).any(|&(v, _)| v as usize >= n) {
            return Err(Error::DimensionMismatch("row references a variable out of range".into()));
        }
        Ok(p)
    }
}

fn variable_at(blocks: &[TypeBlock], offsets: &[usize], v: usize) -> Variable {
    let b = offsets.partition_point(|&o| o <= v) - 1;
    if b >= blocks.len() {
        return Variable::Multiplier(v - offsets[blocks.len()]);
    }
    let mut k = v - offsets[b];
    let dim = blocks[b].dim;
    let mut i = 0;
    while k >= dim - i {
        k -= dim - i;
        i += 1;
    }
    Variable::Entry { block: b, i, j: i + k }
}

/// Index of the upper entry `(i, j)`, `i <= j`, within a block of dimension `dim`.
#[inline]
pub fn upper_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < dim);
    i * (2 * dim - i + 1) / 2 + (j - i)
}

pub fn row_value(row: &ConstraintRow, denominator: u64, x: &[Rational]) -> Rational {
    let mut dot = Rational::zero();
    for &(v, c) in &row.coeffs {
        let xv = &x[v as usize];
        if !xv.is_zero() {
            dot += xv * Rational::from_integer(BigInt::from(c));
        }
    }
    &row.constant + dot / Rational::from_integer(BigInt::from(denominator))
}

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub level: usize,
    pub colors: u8,
    pub fraction: Rational,
    pub target: Vec<(ColoredGraph, Rational)>,
    pub plan: Vec<(usize, usize)>,
    /// Largest good-pair flag order; `None` uses `level - 1`.
    pub max_flag_order: Option<usize>,
    pub symmetrize: bool,
}

impl BuildConfig {
    pub fn default_for(level: usize) -> Result<Self> {
        Ok(BuildConfig {
            level,
            colors: 3,
            fraction: default_fraction(),
            target: default_target(level)?,
            plan: default_type_plan(level)?,
            max_flag_order: None,
            symmetrize: true,
        })
    }
}

struct DominationTable {
    /// Type pack to type index.
    types: HashMap<u64, usize>,
    /// `bases[t][k]` is the basis of order `3 + k` over type `t`.
    bases: Vec<Vec<FlagBasis>>,
    /// `pairs[t][k][flag * r + c]` is the good-pair index, if any.
    pairs: Vec<Vec<Vec<Option<u32>>>>,
}

/// Computes constraint rows for arbitrary hosts of the problem's level.
pub struct RowBuilder {
    level: usize,
    colors: u8,
    fraction: (i64, i64),
    target: Vec<(ColoredGraph, Rational)>,
    bases: Vec<FlagBasis>,
    offsets: Vec<usize>,
    block_scale: Vec<i64>,
    dom: DominationTable,
    dom_scale: Vec<i64>,
    denominator: u64,
}

impl RowBuilder {
    /// Prepares bases and denominators for a problem layout.
    pub fn new(
        level: usize,
        colors: u8,
        fraction: &Rational,
        target: &[(ColoredGraph, Rational)],
        blocks: &[TypeBlock],
        good_pairs: &[GoodPair],
    ) -> Result<Self> {
        let n = level;
        let (fp, fq) = (
            fraction.numer().to_i64().ok_or_else(|| Error::InvalidArgument("fraction too large".into()))?,
            fraction.denom().to_i64().ok_or_else(|| Error::InvalidArgument("fraction too large".into()))?,
        );
        if fp < 0 {
            return Err(Error::InvalidArgument("fraction must be non-negative".into()));
        }
        let mut bases = Vec::with_capacity(blocks.len());
        let mut block_den = Vec::with_capacity(blocks.len());
        for b in blocks {
            let (s, m) = (b.sigma.order(), b.m);
            if 2 * m < s || 2 * m - s > n {
                return Err(Error::InvalidArgument(format!("block ({s}, {m}) violates 2m - |σ| <= {n}")));
            }
            let basis = enumerate_flags(&b.sigma, m)?;
            if basis.len() != b.dim {
                return Err(Error::DimensionMismatch(format!(
                    "block over {} has dimension {}, basis has {}",
                    b.sigma,
                    b.dim,
                    basis.len()
                )));
            }
            bases.push(basis);
            let den = falling_factorial(n, s) * binomial(n - s, m - s) * binomial(n - m, m - s);
            block_den.push(den);
        }
        let max_k = good_pairs.iter().map(|g| g.flag.order() - 3).max();
        let mut dom = DominationTable {
            types: HashMap::new(),
            bases: Vec::new(),
            pairs: Vec::new(),
        };
        let mut dom_den = Vec::new();
        if let Some(max_k) = max_k {
            if max_k + 4 > n {
                return Err(Error::InvalidArgument(format!("good pair flag too large for level {n}")));
            }
            for k in 0..=max_k {
                dom_den.push(fq as u64 * (n - 3 - k) as u64 * falling_factorial(n, 3) * binomial(n - 3, k));
            }
            let mut type_of: HashMap<Flag, usize> = HashMap::new();
            for gp in good_pairs {
                if gp.flag.sigma() != gp.sigma || !gp.sigma.is_type() || gp.sigma.order() != 3 {
                    return Err(Error::TypeMismatch(format!("good pair {} is malformed", gp.flag)));
                }
                if gp.sigma.graph().canonical() != *gp.sigma.graph() {
                    return Err(Error::TypeMismatch(format!("type {} is not canonical", gp.sigma)));
                }
                let t = match type_of.get(&gp.sigma) {
                    Some(&t) => t,
                    None => {
                        let t = dom.bases.len();
                        type_of.insert(gp.sigma.clone(), t);
                        dom.types.insert(gp.sigma.graph().pack(), t);
                        let mut per_k = Vec::new();
                        let mut slots = Vec::new();
                        for k in 0..=max_k {
                            let basis = enumerate_flags(&gp.sigma, 3 + k)?;
                            slots.push(vec![None; basis.len() * colors as usize]);
                            per_k.push(basis);
                        }
                        dom.bases.push(per_k);
                        dom.pairs.push(slots);
                        t
                    }
                };
                let k = gp.flag.order() - 3;
                let fi = dom.bases[t][k]
                    .index_of(&gp.flag)
                    .ok_or_else(|| Error::TypeMismatch(format!("{} is not a flag over its type", gp.flag)))?;
                dom.pairs[t][k][fi * colors as usize + gp.color as usize] = Some(0);
            }
            for (idx, gp) in good_pairs.iter().enumerate() {
                let t = type_of[&gp.sigma];
                let k = gp.flag.order() - 3;
                let fi = dom.bases[t][k].index_of(&gp.flag).expect("checked above");
                dom.pairs[t][k][fi * colors as usize + gp.color as usize] = Some(idx as u32);
            }
        }
        let denominator = block_den.iter().chain(&dom_den).fold(1u64, |acc, &d| acc.lcm(&d));
        let offsets = {
            let mut out = Vec::with_capacity(blocks.len() + 1);
            let mut acc = 0;
            for b in blocks {
                out.push(acc);
                acc += b.variables();
            }
            out.push(acc);
            out
        };
        Ok(RowBuilder {
            level,
            colors,
            fraction: (fp, fq),
            target: target.to_vec(),
            bases,
            offsets,
            block_scale: block_den.iter().map(|&d| (denominator / d) as i64).collect(),
            dom,
            dom_scale: dom_den.iter().map(|&d| (denominator / d) as i64).collect(),
            denominator,
        })
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Integer numerators of `alpha_H + beta_H` over [`Self::denominator`].
    pub fn coefficients(&self, h: &ColoredGraph) -> Result<HashMap<u32, i64>> {
        if h.order() != self.level || h.color_count() != self.colors {
            return Err(Error::SizeMismatch(format!(
                "host {h} does not belong to level {} with {} colours",
                self.level, self.colors
            )));
        }
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for (b, basis) in self.bases.iter().enumerate() {
            let counts = pair_counts(basis, h)?;
            let dim = basis.len();
            for &(i, j, c) in &counts.entries {
                let (i, j) = (i as usize, j as usize);
                let mult = if i == j { 1 } else { 2 };
                let v = (self.offsets[b] + upper_index(dim, i, j)) as u32;
                *acc.entry(v).or_insert(0) += mult * c as i64 * self.block_scale[b];
            }
        }
        if !self.dom.bases.is_empty() {
            self.domination_terms(h, &mut acc);
        }
        acc.retain(|_, c| *c != 0);
        Ok(acc)
    }

    fn domination_terms(&self, h: &ColoredGraph, acc: &mut HashMap<u32, i64>) {
        let n = h.order();
        let r = self.colors as usize;
        let mu_base = *self.offsets.last().expect("offsets end with the total") as u32;
        let (fp, fq) = self.fraction;
        for_each_injection(n, 3, |theta| {
            let Some(&t) = self.dom.types.get(&labeled_key(h, theta, &[])) else { return };
            let rest: Vec<usize> = (0..n).filter(|v| !theta.contains(v)).collect();
            // Colour mask of the edges from each outside vertex into the type.
            let seen: Vec<u8> = rest
                .iter()
                .map(|&v| theta.iter().fold(0u8, |m, &u| m | 1 << h.color(u, v)))
                .collect();
            for (k, basis) in self.dom.bases[t].iter().enumerate() {
                let slots = &self.dom.pairs[t][k];
                let outside = (n - 3 - k) as i64;
                let positions: Vec<usize> = (0..rest.len()).collect();
                for_each_combination(&positions, k, |pick| {
                    let a: Vec<usize> = pick.iter().map(|&p| rest[p]).collect();
                    let fi = basis.identify(h, theta, &a);
                    for c in 0..r {
                        let Some(gp) = slots[fi * r + c] else { continue };
                        let dominated = (0..rest.len())
                            .filter(|p| !pick.contains(p) && seen[*p] & (1 << c) != 0)
                            .count() as i64;
                        let term = fp * outside - fq * dominated;
                        *acc.entry(mu_base + gp).or_insert(0) += term * self.dom_scale[k];
                    }
                });
            }
        });
    }

    pub fn row(&self, h: &ColoredGraph) -> Result<ConstraintRow> {
        let mut coeffs: Vec<(u32, i64)> = self.coefficients(h)?.into_iter().collect();
        coeffs.sort_unstable();
        Ok(ConstraintRow {
            host: h.clone(),
            orbit_size: 1,
            constant: target_density(&self.target, h)?,
            coeffs,
        })
    }

    /// Sum of the rows of every recolouring of `h` (one per colour permutation),
    /// as numerators over `colour-permutation count * denominator`.
    pub fn averaged_row(&self, h: &ColoredGraph) -> Result<ConstraintRow> {
        let images = color_images(h);
        let mut distinct: HashMap<&ColoredGraph, i64> = HashMap::new();
        for g in &images {
            *distinct.entry(g).or_insert(0) += 1;
        }
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for (g, mult) in distinct.iter() {
            for (v, c) in self.coefficients(g)? {
                *acc.entry(v).or_insert(0) += mult * c;
            }
        }
        let mut coeffs: Vec<(u32, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        coeffs.sort_unstable();
        Ok(ConstraintRow {
            host: h.clone(),
            orbit_size: distinct.len(),
            constant: target_density(&self.target, h)?,
            coeffs,
        })
    }
}

fn validate_plan(level: usize, plan: &[(usize, usize)]) -> Result<()> {
    for &(s, m) in plan {
        if s > MAX_TYPE_ORDER || m < s || 2 * m - s > level {
            return Err(Error::InvalidArgument(format!(
                "type plan entry (|σ| = {s}, m = {m}) violates 2m - |σ| <= {level}"
            )));
        }
    }
    Ok(())
}

/// Assembles the full problem; with `symmetrize` set, only colour-orbit
/// representatives get rows and each row is the sum over colour permutations.
pub fn assemble(config: &BuildConfig) -> Result<SdpProblem> {
    let l = config.level;
    validate_plan(l, &config.plan)?;
    if config.target.iter().any(|(g, _)| g.order() > l || g.color_count() != config.colors) {
        return Err(Error::SizeMismatch(format!("target graphs must have order at most {l}")));
    }
    if config.symmetrize {
        check_orbit_closed(&config.target)?;
    }
    let mut blocks = Vec::new();
    for &(s, m) in &config.plan {
        for sigma in enumerate_types(s, config.colors)? {
            let dim = enumerate_flags(&sigma, m)?.len();
            blocks.push(TypeBlock { sigma, m, dim });
        }
    }
    let max_flag = config.max_flag_order.unwrap_or(l - 1);
    if max_flag + 1 > l {
        return Err(Error::InvalidArgument(format!("good-pair flags of order {max_flag} need |F| + 1 <= {l}")));
    }
    let good_pairs: Vec<GoodPair> = if max_flag >= 3 {
        enumerate_good_pairs(l, config.colors)?
            .into_iter()
            .filter(|gp| gp.flag.order() <= max_flag)
            .collect()
    } else {
        Vec::new()
    };
    let builder = RowBuilder::new(l, config.colors, &config.fraction, &config.target, &blocks, &good_pairs)?;
    let family = enumerate_graphs(l, config.colors)?;
    log::info!(
        "level {l}: {} hosts, {} blocks, {} good pairs",
        family.len(),
        blocks.len(),
        good_pairs.len()
    );
    let (rows, denominator) = if config.symmetrize {
        let reps = color_orbits(&family);
        let perms = color_permutations(config.colors).len() as u64;
        let rows = reps
            .members
            .par_iter()
            .map(|h| builder.averaged_row(h))
            .collect::<Result<Vec<_>>>()?;
        (rows, builder.denominator() * perms)
    } else {
        let rows = family.members.par_iter().map(|h| builder.row(h)).collect::<Result<Vec<_>>>()?;
        (rows, builder.denominator())
    };
    Ok(SdpProblem {
        level: l,
        colors: config.colors,
        fraction: config.fraction.clone(),
        target: config.target.clone(),
        blocks,
        good_pairs,
        symmetrized: config.symmetrize,
        denominator,
        rows,
    })
}

/// Collapses an unsymmetrized problem to colour-orbit representatives, each row
/// being the sum of the rows of its recolourings.
pub fn symmetrize(p: &SdpProblem) -> Result<SdpProblem> {
    if p.symmetrized {
        return Ok(p.clone());
    }
    check_orbit_closed(&p.target)?;
    let index: HashMap<&ColoredGraph, usize> = p.rows.iter().enumerate().map(|(i, r)| (&r.host, i)).collect();
    let mut reps: Vec<ColoredGraph> = p.rows.iter().map(|r| r.host.color_canonical()).collect();
    reps.sort_unstable();
    reps.dedup();
    let perms = color_permutations(p.colors);
    let mut rows = Vec::with_capacity(reps.len());
    for rep in reps {
        let mut acc: HashMap<u32, i64> = HashMap::new();
        let mut distinct = Vec::new();
        for perm in &perms {
            let image = rep.recolored(perm).canonical();
            let &i = index
                .get(&image)
                .ok_or_else(|| Error::InvalidArgument(format!("no row for host {image}")))?;
            if !distinct.contains(&i) {
                distinct.push(i);
            }
            for &(v, c) in &p.rows[i].coeffs {
                *acc.entry(v).or_insert(0) += c;
            }
        }
        let mut coeffs: Vec<(u32, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        coeffs.sort_unstable();
        let own = &p.rows[index[&rep]];
        rows.push(ConstraintRow {
            host: rep,
            orbit_size: distinct.len(),
            constant: own.constant.clone(),
            coeffs,
        });
    }
    Ok(SdpProblem {
        symmetrized: true,
        denominator: p.denominator * perms.len() as u64,
        rows,
        ..p.clone()
    })
}

/// How each colour permutation moves the problem's variables: a recoloured
/// type is relabeled to its canonical form, and flags follow that relabeling.
#[derive(Clone, Debug)]
pub struct ColorAction {
    /// `maps[p][v]` is the image of variable `v` under permutation `p`.
    pub maps: Vec<Vec<u32>>,
}

pub fn color_action(p: &SdpProblem) -> Result<ColorAction> {
    let offsets = p.block_offsets();
    let bases: Vec<FlagBasis> = p
        .blocks
        .iter()
        .map(|b| enumerate_flags(&b.sigma, b.m))
        .collect::<Result<_>>()?;
    let block_of: HashMap<(ColoredGraph, usize), usize> = p
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| ((b.sigma.graph().clone(), b.m), i))
        .collect();
    let pair_of: HashMap<(Color, u64, u64), usize> = p
        .good_pairs
        .iter()
        .enumerate()
        .map(|(i, gp)| ((gp.color, gp.sigma.graph().pack(), gp.flag.canonical_pack()), i))
        .collect();
    let relabel = |sigma: &Flag, perm: &[Color]| -> (ColoredGraph, Vec<usize>) {
        let image = sigma.graph().recolored(perm);
        let (rho, edges) = canonical_labeling(&image, 0);
        (ColoredGraph::from_parts_unchecked(sigma.order(), sigma.graph().color_count(), edges), rho)
    };
    let move_flag = |f: &Flag, perm: &[Color], rho: &[usize]| -> Flag {
        let full: Vec<usize> = rho.iter().copied().chain(rho.len()..f.order()).collect();
        f.recolored(perm).permuted(&full)
    };
    let mut maps = Vec::new();
    for perm in color_permutations(p.colors) {
        let mut map = vec![0u32; p.num_variables()];
        for (b, block) in p.blocks.iter().enumerate() {
            let (image, rho) = relabel(&block.sigma, &perm);
            let &target = block_of.get(&(image, block.m)).ok_or_else(|| {
                Error::InvalidArgument(format!("recoloured type of {} has no block", block.sigma))
            })?;
            let flag_map: Vec<usize> = bases[b]
                .flags()
                .iter()
                .map(|f| {
                    bases[target]
                        .index_of(&move_flag(f, &perm, &rho))
                        .ok_or_else(|| Error::InvalidArgument(format!("recoloured flag of {f} missing")))
                })
                .collect::<Result<_>>()?;
            for i in 0..block.dim {
                for j in i..block.dim {
                    let (a, c) = (flag_map[i].min(flag_map[j]), flag_map[i].max(flag_map[j]));
                    map[offsets[b] + upper_index(block.dim, i, j)] =
                        (offsets[target] + upper_index(block.dim, a, c)) as u32;
                }
            }
        }
        let mu_base = offsets[p.blocks.len()];
        for (k, gp) in p.good_pairs.iter().enumerate() {
            let (image, rho) = relabel(&gp.sigma, &perm);
            let moved = move_flag(&gp.flag, &perm, &rho);
            let key = (perm[gp.color as usize], image.pack(), moved.canonical_pack());
            let &target = pair_of
                .get(&key)
                .ok_or_else(|| Error::InvalidArgument(format!("recoloured good pair of {} missing", gp.flag)))?;
            map[mu_base + k] = (mu_base + target) as u32;
        }
        maps.push(map);
    }
    Ok(ColorAction { maps })
}

impl ColorAction {
    /// Average of `x` over the group.
    pub fn average(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); x.len()];
        for map in &self.maps {
            for (v, xv) in x.iter().enumerate() {
                out[map[v] as usize] += xv;
            }
        }
        let k = Rational::from_integer(BigInt::from(self.maps.len()));
        out.into_iter().map(|v| v / &k).collect()
    }

    pub fn average_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for map in &self.maps {
            for (v, xv) in x.iter().enumerate() {
                out[map[v] as usize] += xv;
            }
        }
        out.iter().map(|v| v / self.maps.len() as f64).collect()
    }
}

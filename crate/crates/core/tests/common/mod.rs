//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! library's canonical labeling or density code.

#![allow(dead_code)]

use flagdom::graph::pair_index;
use flagdom::{Color, ColoredGraph, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, r: u8) -> ColoredGraph {
    ColoredGraph::from_fn(n, r, |_, _| rng.gen_range(0..r)).unwrap()
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(k, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Colours of the graph induced on `verts` (in that order), row-major pairs.
pub fn edges_on(g: &ColoredGraph, verts: &[usize]) -> Vec<Color> {
    let mut out = Vec::new();
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            out.push(g.color(verts[a], verts[b]));
        }
    }
    out
}

/// Lexicographically least edge vector over all orderings of the vertices after
/// the first `labeled`, which stay fixed.
pub fn min_form(g: &ColoredGraph, verts: &[usize], labeled: usize) -> Vec<Color> {
    let free = verts.len() - labeled;
    let mut best: Option<Vec<Color>> = None;
    for p in permutations(free) {
        let mut order: Vec<usize> = verts[..labeled].to_vec();
        order.extend(p.iter().map(|&i| verts[labeled + i]));
        let e = edges_on(g, &order);
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    }
    best.unwrap()
}

pub fn all_vertices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Number of r-colourings of K_n up to vertex permutation, by Burnside.
pub fn burnside_vertex(n: usize, r: u64) -> u64 {
    let perms = permutations(n);
    let total: u64 = perms.iter().map(|p| r.pow(pair_cycles(n, p).len() as u32)).sum();
    total / perms.len() as u64
}

/// Number of r-colourings of K_n up to vertex and colour permutation, by Burnside
/// over the product group.
pub fn burnside_vertex_color(n: usize, r: usize) -> u64 {
    let vperms = permutations(n);
    let cperms = permutations(r);
    let mut total = 0u64;
    for p in &vperms {
        let cycles = pair_cycles(n, p);
        for t in &cperms {
            let mut prod = 1u64;
            for &len in &cycles {
                let fixed = (0..r)
                    .filter(|&c| {
                        let mut x = c;
                        for _ in 0..len {
                            x = t[x];
                        }
                        x == c
                    })
                    .count() as u64;
                prod *= fixed;
            }
            total += prod;
        }
    }
    total / (vperms.len() * cperms.len()) as u64
}

/// Cycle lengths of the action of `p` on unordered pairs.
fn pair_cycles(n: usize, p: &[usize]) -> Vec<usize> {
    let m = n * (n.saturating_sub(1)) / 2;
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if seen[pair_index(n, i, j)] {
                continue;
            }
            let (mut a, mut b, mut len) = (i, j, 0);
            loop {
                let k = pair_index(n, a.min(b), a.max(b));
                if seen[k] {
                    break;
                }
                seen[k] = true;
                len += 1;
                let (x, y) = (p[a], p[b]);
                a = x;
                b = y;
            }
            out.push(len);
        }
    }
    out
}

/// Induced density of `f` in `g` by checking every vertex subset against every
/// ordering of it.
pub fn brute_density(f: &ColoredGraph, g: &ColoredGraph) -> Rational {
    let k = f.order();
    let n = g.order();
    let target = min_form(f, &all_vertices(k), 0);
    let mut hits = 0u64;
    let mut total = 0u64;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        total += 1;
        let verts: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        if min_form(g, &verts, 0) == target {
            hits += 1;
        }
    }
    Rational::new(BigInt::from(hits), BigInt::from(total))
}

/// Strong c-domination count of `set` in `g` straight from the definition.
pub fn brute_dominated(g: &ColoredGraph, set: &[usize], c: Color) -> usize {
    (0..g.order())
        .filter(|&b| set.iter().any(|&a| a != b && g.color(a, b) == c))
        .count()
}

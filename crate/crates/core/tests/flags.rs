mod common;

use common::*;
use flagdom::constraints::{default_fraction, domination_coefficient, enumerate_good_pairs};
use flagdom::domination::blowup;
use flagdom::flags::{avg_pair_density, coefficient_matrix, enumerate_flags, enumerate_types, Flag};
use flagdom::rational::{rat, to_f64};
use flagdom::{ColoredGraph, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Draws `(theta, V1 \ theta, V2 \ theta)` uniformly and reports whether both
/// sides induce the given flags.
fn sample_pair(rng: &mut rand_chacha::ChaCha8Rng, h: &ColoredGraph, f1: &Flag, f2: &Flag) -> bool {
    let s = f1.labeled();
    let n = h.order();
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let theta = &verts[..s];
    let k1 = f1.order() - s;
    let k2 = f2.order() - s;
    let mut v1 = theta.to_vec();
    v1.extend(&verts[s..s + k1]);
    let mut v2 = theta.to_vec();
    v2.extend(&verts[s + k1..s + k1 + k2]);
    min_form(h, &v1, s) == min_form(f1.graph(), &all_vertices(f1.order()), s)
        && min_form(h, &v2, s) == min_form(f2.graph(), &all_vertices(f2.order()), s)
}

#[test]
fn pair_density_matches_sampling() {
    let mut rng = rng(21);
    let samples = 4000;
    let mut outside = Vec::new();
    for instance in 0..50 {
        let s = rng.gen_range(0..=2);
        let m = rng.gen_range(s + 1..=3);
        let sigma = enumerate_types(s, 3).unwrap().choose(&mut rng).unwrap().clone();
        let basis = enumerate_flags(&sigma, m).unwrap();
        let n = rng.gen_range(2 * m - s..=8);
        let base = random_graph(&mut rng, n, 3);
        // Plant a copy of the first flag so the densities are not all zero.
        let f1 = basis.flags().choose(&mut rng).unwrap().clone();
        let f2 = basis.flags().choose(&mut rng).unwrap().clone();
        let h = ColoredGraph::from_fn(n, 3, |i, j| if j < m { f1.graph().color(i, j) } else { base.color(i, j) })
            .unwrap();
        let exact = to_f64(&avg_pair_density(&f1, &f2, &h).unwrap());
        let hits = (0..samples).filter(|_| sample_pair(&mut rng, &h, &f1, &f2)).count();
        let estimate = hits as f64 / samples as f64;
        let sd = (exact * (1.0 - exact) / samples as f64).sqrt();
        if (estimate - exact).abs() > 3.0 * sd + 1e-12 {
            outside.push((instance, exact, estimate));
        }
    }
    assert!(outside.is_empty(), "outside 3 sd: {outside:?}");
}

/// `p(F, theta; h)` for a flag with a single unlabeled vertex.
fn single_density_at(h: &ColoredGraph, f: &Flag, theta: &[usize]) -> f64 {
    let s = theta.len();
    let target = min_form(f.graph(), &all_vertices(f.order()), s);
    let rest: Vec<usize> = (0..h.order()).filter(|v| !theta.contains(v)).collect();
    let hits = rest
        .iter()
        .filter(|&&v| {
            let mut vs = theta.to_vec();
            vs.push(v);
            min_form(h, &vs, s) == target
        })
        .count();
    hits as f64 / rest.len() as f64
}

fn injections(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..s {
        let mut next = Vec::new();
        for t in &out {
            for v in (0..n).filter(|v| !t.contains(v)) {
                let mut u = t.clone();
                u.push(v);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

#[test]
fn with_and_without_replacement_agree_on_large_blowups() {
    let mut rng = rng(22);
    let base = random_graph(&mut rng, 4, 3);
    let g = blowup(&base, 10, 3).unwrap();
    assert_eq!(g.order(), 40);
    for s in 1..=2 {
        let sigma = enumerate_types(s, 3).unwrap().choose(&mut rng).unwrap().clone();
        let basis = enumerate_flags(&sigma, s + 1).unwrap();
        let thetas = injections(g.order(), s);
        for f1 in basis.flags() {
            for f2 in basis.flags() {
                let exact = to_f64(&avg_pair_density(f1, f2, &g).unwrap());
                let product: f64 = thetas
                    .iter()
                    .filter(|t| min_form(&g, t, s) == min_form(sigma.graph(), &all_vertices(s), s))
                    .map(|t| single_density_at(&g, f1, t) * single_density_at(&g, f2, t))
                    .sum::<f64>()
                    / thetas.len() as f64;
                assert!((exact - product).abs() <= 0.02, "{f1} {f2}: {exact} vs {product}");
            }
        }
    }
}

fn arb_graph(n: usize) -> impl Strategy<Value = ColoredGraph> {
    prop::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |e| ColoredGraph::new(n, 3, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coefficient_matrices_are_probability_tables(h in arb_graph(6), s in 0usize..=4, pick in 0usize..1000) {
        let m = (6 + s) / 2;
        prop_assume!(m > s);
        let types = enumerate_types(s, 3).unwrap();
        let sigma = &types[pick % types.len()];
        let basis = enumerate_flags(sigma, m).unwrap();
        let q = coefficient_matrix(&basis, &h).unwrap();
        prop_assert!(q.is_symmetric());
        let mut total = Rational::zero();
        for a in 0..q.dim() {
            let mut row = Rational::zero();
            for b in 0..q.dim() {
                prop_assert!(*q.get(a, b) >= Rational::zero());
                row += q.get(a, b);
            }
            prop_assert!(row <= Rational::one());
            total += row;
        }
        // At order 2m - s every theta that induces the type splits the rest
        // completely, so the total is the probability of inducing the type.
        if 2 * m - s == 6 {
            let thetas = injections(6, s);
            let hits = thetas
                .iter()
                .filter(|t| min_form(&h, t, s) == min_form(sigma.graph(), &all_vertices(s), s))
                .count();
            prop_assert_eq!(total, rat(hits as i64, thetas.len() as i64));
        }
    }

    #[test]
    fn domination_coefficients_are_bounded(h in arb_graph(6), pick in 0usize..100_000) {
        let pairs = enumerate_good_pairs(6, 3).unwrap();
        let gp = &pairs[pick % pairs.len()];
        let b = domination_coefficient(gp, &h, &default_fraction()).unwrap();
        prop_assert!(b >= rat(-1, 1) && b <= rat(2, 3));
    }

    #[test]
    fn pair_density_is_symmetric(h in arb_graph(5), pick in 0usize..1000) {
        let sigma = &enumerate_types(1, 3).unwrap()[0];
        let basis = enumerate_flags(sigma, 3).unwrap();
        let f1 = &basis.flags()[pick % basis.len()];
        let f2 = &basis.flags()[(pick / basis.len()) % basis.len()];
        prop_assert_eq!(avg_pair_density(f1, f2, &h).unwrap(), avg_pair_density(f2, f1, &h).unwrap());
    }
}

//! Seeded random elements and CDGAs for the law checks.

#![allow(dead_code)]

use std::sync::Arc;

use cdga_core::cdga::{Cdga, Derivation};
use cdga_core::gca::{degree_basis, Element, GeneratorSet, Monomial};
use cdga_core::scalar::{frac, int, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let n = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
    if rng.gen_bool(0.2) {
        frac(n, rng.gen_range(2..5))
    } else {
        int(n)
    }
}

/// Random element of degree `k` in the generators accepted by `usable`.
pub fn random_element(
    rng: &mut ChaCha8Rng,
    gens: &Arc<GeneratorSet>,
    k: usize,
    usable: impl Fn(usize) -> bool,
) -> Element {
    let monos: Vec<Monomial> = degree_basis(gens, k)
        .into_iter()
        .filter(|m| m.exponents().iter().enumerate().all(|(i, &e)| e == 0 || usable(i)))
        .collect();
    let mut e = Element::zero(gens);
    if monos.is_empty() {
        return e;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let m = monos.choose(rng).unwrap().clone();
        e.add_term(m, random_scalar(rng));
    }
    e
}

/// Iterated Hirsch extension of a free algebra on closed generators, each
/// new differential a random product of closed generators plus a random
/// coboundary.
pub fn random_cdga(rng: &mut ChaCha8Rng) -> Cdga {
    let mut spec: Vec<(String, usize)> = (0..rng.gen_range(2..=4)).map(|i| (format!("x{i}"), 1)).collect();
    if rng.gen_bool(0.5) {
        spec.push(("w".into(), 2));
    }
    if rng.gen_bool(0.3) {
        spec.push(("v".into(), 3));
    }
    let closed = spec.len();
    for i in 0..rng.gen_range(1..=3) {
        spec.push((format!("t{i}"), *[1, 1, 2, 3].choose(rng).unwrap()));
    }
    let gens = GeneratorSet::new(spec).unwrap();
    let mut values = vec![Element::zero(&gens); gens.len()];
    for i in closed..gens.len() {
        let n = gens.degree(i);
        let partial = Derivation::new(&gens, 1, values.clone()).unwrap();
        let product = random_element(rng, &gens, n + 1, |j| j < closed);
        let coboundary = partial.apply(&random_element(rng, &gens, n, |j| j < i));
        values[i] = product + coboundary;
    }
    Cdga::new(&gens, values).unwrap()
}

pub fn random_homogeneous(rng: &mut ChaCha8Rng, gens: &Arc<GeneratorSet>) -> (usize, Element) {
    let k = rng.gen_range(0..=3);
    (k, random_element(rng, gens, k, |_| true))
}

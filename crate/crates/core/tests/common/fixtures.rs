//! Seeded Lie algebra fixtures: Heisenberg sums under random unimodular
//! basis changes, and nilpotent algebras whose derived algebra has
//! dimension at least 2.

#![allow(dead_code)]

use cdga_core::lie::{heisenberg_sum, LieAlgebra};
use cdga_core::linalg::identity;
use cdga_core::scalar::{int, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_c0de;

/// Product of `steps` integer transvections followed by a column shuffle.
pub fn random_unimodular(rng: &mut ChaCha8Rng, m: usize, steps: usize) -> Vec<Vec<Scalar>> {
    let mut p = identity(m);
    if m < 2 {
        return p;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let c = int(*[-2, -1, 1, 2].choose(rng).unwrap());
        let row_j = p[j].clone();
        for (x, y) in p[i].iter_mut().zip(&row_j) {
            *x += &c * y;
        }
    }
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    p.iter()
        .map(|row| perm.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

/// Transvection count for fixture basis changes. Denser products make the
/// rational elimination in the CE complex of the larger fixtures explode.
pub fn transvections(m: usize) -> usize {
    m / 2 + 1
}

/// `(l, r, spec)` for 100 basis-changed `𝔥(1,l) ⊕ 𝔞_r`, `l, r ≤ 4`.
pub fn positive_fixtures(rng: &mut ChaCha8Rng) -> Vec<(usize, usize, LieAlgebra)> {
    (0..100)
        .map(|n| {
            let (l, r) = ((n / 5) % 5, n % 5);
            let h = heisenberg_sum(l, r);
            let p = random_unimodular(rng, h.dim(), transvections(h.dim()));
            (l, r, h.change_basis(&p).unwrap())
        })
        .collect()
}

pub fn lie(m: usize, brackets: &[(usize, usize, usize, i64)]) -> LieAlgebra {
    LieAlgebra::from_brackets(m, brackets.iter().map(|&(i, j, k, c)| (i, j, k, int(c))), None).unwrap()
}

/// `[e1, e_i] = e_{i+1}` for `2 ≤ i < n`.
pub fn filiform(n: usize, extra: usize) -> LieAlgebra {
    let br: Vec<_> = (1..n - 1).map(|i| (0, i, i + 1, 1)).collect();
    lie(n + extra, &br)
}

/// `𝔥(1,a) ⊕ 𝔥(1,b) ⊕ 𝔞_r`.
pub fn double_heisenberg(a: usize, b: usize, r: usize) -> LieAlgebra {
    let mut br: Vec<_> = (0..a).map(|i| (i, a + i, 2 * a, 1)).collect();
    let o = 2 * a + 1;
    br.extend((0..b).map(|i| (o + i, o + b + i, o + 2 * b, 1)));
    lie(o + 2 * b + 1 + r, &br)
}

/// Free 2-step nilpotent algebra on three generators, plus `r` central.
pub fn free_two_step(r: usize) -> LieAlgebra {
    lie(6 + r, &[(0, 1, 5, 1), (0, 2, 4, 1), (1, 2, 3, 1)])
}

/// Three-step algebra `[e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e5`.
pub fn three_step(r: usize) -> LieAlgebra {
    lie(5 + r, &[(0, 1, 2, 1), (0, 2, 3, 1), (1, 2, 4, 1)])
}

/// 50 nilpotent algebras with `dim [𝔤,𝔤] ≥ 2`, basis-changed.
pub fn negative_fixtures(rng: &mut ChaCha8Rng) -> Vec<LieAlgebra> {
    let mut base = Vec::new();
    for n in 4..=7 {
        for extra in 0..=1 {
            base.push(filiform(n, extra));
        }
    }
    for (a, b, r) in [(1, 1, 0), (1, 1, 1), (1, 1, 2), (1, 2, 0), (1, 2, 1), (2, 2, 0)] {
        base.push(double_heisenberg(a, b, r));
    }
    for r in 0..=2 {
        base.push(free_two_step(r));
        base.push(three_step(r));
    }
    (0..50)
        .map(|n| {
            let g = &base[n % base.len()];
            let p = random_unimodular(rng, g.dim(), transvections(g.dim()));
            g.change_basis(&p).unwrap()
        })
        .collect()
}

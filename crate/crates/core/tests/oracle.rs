//! Library cohomology against the brute-force bitmask oracle.

mod common;

use cdga_core::homology::cohomology;
use cdga_core::lie::LieAlgebra;
use common::fixtures::{double_heisenberg, filiform, free_two_step, three_step};
use common::oracle::{ce_betti, Brackets};
use num_traits::ToPrimitive;

fn brackets(g: &LieAlgebra) -> Brackets {
    g.brackets()
        .into_iter()
        .flat_map(|(i, j, terms)| {
            terms
                .into_iter()
                .map(move |(k, c)| (i, j, k, c.to_integer().to_i64().unwrap()))
        })
        .collect()
}

fn library_betti(g: &LieAlgebra) -> Vec<usize> {
    cohomology(g.chevalley_eilenberg().unwrap(), None)
        .unwrap()
        .betti_numbers()
}

#[test]
fn filiform_four() {
    let g = filiform(4, 0);
    assert_eq!(ce_betti(4, &brackets(&g)), vec![1, 2, 2, 2, 1]);
    assert_eq!(library_betti(&g), vec![1, 2, 2, 2, 1]);
}

#[test]
fn non_heisenberg_families() {
    let mut algebras: Vec<LieAlgebra> = (4..=7).flat_map(|n| [filiform(n, 0), filiform(n, 1)]).collect();
    algebras.extend([
        double_heisenberg(1, 1, 0),
        double_heisenberg(1, 2, 1),
        double_heisenberg(2, 2, 0),
    ]);
    algebras.extend((0..=2).flat_map(|r| [free_two_step(r), three_step(r)]));
    for g in algebras {
        assert_eq!(library_betti(&g), ce_betti(g.dim(), &brackets(&g)), "{g}");
    }
}

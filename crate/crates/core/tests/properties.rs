mod common;

use std::sync::Arc;

use cdga_core::cdga::{kernel_subcdga, Algebra, Cdga, Complex, Derivation, SubCdga};
use cdga_core::gca::{degree_basis, Element, GeneratorSet};
use cdga_core::homology::{boundary_matrix, cohomology};
use cdga_core::lie::{heisenberg_sum, LieAlgebra};
use cdga_core::models::{
    almost_formal_index, ce_almost_formal_presentation, check_quasi_iso, hirsch_extend, invariant_subcomplex,
    rank_of_form, AutomorphismSpec, HirschData, MorphismSpec,
};
use cdga_core::scalar::{int, Scalar};
use common::fixtures::{double_heisenberg, filiform, free_two_step, negative_fixtures, random_unimodular, three_step};
use common::oracle::binomial;
use common::random::{random_cdga, random_element, random_homogeneous, random_scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sign(odd: bool) -> Scalar {
    if odd {
        int(-1)
    } else {
        int(1)
    }
}

fn random_derivation(rng: &mut ChaCha8Rng, gens: &Arc<GeneratorSet>, degree: i64) -> Derivation {
    let values = (0..gens.len())
        .map(|i| {
            let k = gens.degree(i) as i64 + degree;
            if k < 0 {
                Element::zero(gens)
            } else {
                random_element(rng, gens, k as usize, |_| true)
            }
        })
        .collect();
    Derivation::new(gens, degree, values).unwrap()
}

fn nilpotent_in_adapted_basis() -> Vec<LieAlgebra> {
    let mut out: Vec<LieAlgebra> = (0..=3)
        .flat_map(|l| (0..=2).map(move |r| heisenberg_sum(l, r)))
        .collect();
    out.extend((4..=6).map(|n| filiform(n, 1)));
    out.push(double_heisenberg(1, 1, 1));
    out.push(free_two_step(1));
    out.push(three_step(0));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_laws_and_canonical_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_cdga(&mut rng).generators().clone();
        let (p, x) = random_homogeneous(&mut rng, &gens);
        let (q, y) = random_homogeneous(&mut rng, &gens);
        let (_, z) = random_homogeneous(&mut rng, &gens);
        prop_assert_eq!(&x * &y, (&y * &x).scaled(&sign(p * q % 2 == 1)));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&Element::one(&gens) * &x, x.clone());
        let sum = &(&x * &y) + &z;
        prop_assert_eq!(Element::parse(&gens, &sum.to_string()).unwrap(), sum);
    }

    #[test]
    fn exterior_basis_sizes(g in 1usize..9, k in 0usize..10) {
        let gens = GeneratorSet::exterior((0..g).map(|i| format!("x{i}"))).unwrap();
        prop_assert_eq!(degree_basis(&gens, k).len(), binomial(g, k));
    }

    #[test]
    fn commutator_matches_pointwise(seed in any::<u64>(), l in 0i64..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_cdga(&mut rng);
        let gens = a.generators().clone();
        let d1 = random_derivation(&mut rng, &gens, -1);
        let d2 = if l == 1 { a.differential().clone() } else { random_derivation(&mut rng, &gens, 0) };
        let c = d1.graded_commutator(&d2).unwrap();
        let (_, x) = random_homogeneous(&mut rng, &gens);
        let pointwise = d1.apply(&d2.apply(&x)) - d2.apply(&d1.apply(&x)).scaled(&sign(l % 2 == 1));
        prop_assert_eq!(c.apply(&x), pointwise);
    }

    #[test]
    fn kernel_subcdga_revalidates(l in 1usize..=2, r in 0usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ce = Arc::new(heisenberg_sum(l, r).chevalley_eilenberg().unwrap());
        let gens = ce.generators().clone();
        // h and the central u's are the directions whose contractions commute with d
        let mut pairing: Vec<(usize, Scalar)> = Vec::new();
        for i in 2 * l..gens.len() {
            if rng.gen_bool(0.5) {
                pairing.push((i, random_scalar(&mut rng)));
            }
        }
        let i = Derivation::contraction(&gens, &pairing).unwrap();
        let sub = kernel_subcdga(&Algebra::Free(ce.clone()), &[i], None).unwrap();
        let again = SubCdga::new(ce, sub.bases().to_vec(), sub.top_degree());
        prop_assert!(again.is_ok());
    }

    #[test]
    fn cup_laws_and_class_round_trip(l in 1usize..=2, r in 0usize..=1, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ce = heisenberg_sum(l, r).chevalley_eilenberg().unwrap();
        let h = cohomology(ce.clone(), None).unwrap();
        let m = ce.generators().len();
        let class = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(0..=m);
            let mut z = ce.apply_differential(&random_element(rng, ce.generators(), k.saturating_sub(1), |_| true));
            if k == 0 {
                z = Element::zero(ce.generators());
            }
            for rep in h.representatives(k) {
                z += &rep.scaled(&random_scalar(rng));
            }
            let c = h.class_in(k, &z).unwrap();
            (k, c)
        };
        let (p, a) = class(&mut rng);
        let (q, b) = class(&mut rng);
        let (_, c) = class(&mut rng);
        let ab = h.cup(&a, &b).unwrap();
        let ba = h.cup(&b, &a).unwrap();
        let ba_signed: Vec<Scalar> = ba.coordinates().iter().map(|x| x * sign(p * q % 2 == 1)).collect();
        prop_assert_eq!(ab.coordinates(), &ba_signed[..]);
        prop_assert_eq!(h.cup(&ab, &c).unwrap(), h.cup(&a, &h.cup(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(h.class_in(p, &h.representative(&a)).unwrap(), a);
    }

    #[test]
    fn d_squared_iff_jacobi(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(3..=4);
        let mut entries = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in 0..m {
                    if rng.gen_bool(0.3) {
                        entries.push((i, j, k, int(rng.gen_range(-2..=2))));
                    }
                }
            }
        }
        let g = LieAlgebra::from_brackets(m, entries, None).unwrap();
        let jacobi = g.check_jacobi().is_ok();
        prop_assert_eq!(g.chevalley_eilenberg().unwrap().check_d_squared().is_ok(), jacobi);
    }

    #[test]
    fn classifier_is_basis_invariant(l in 0usize..=3, r in 0usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = heisenberg_sum(l, r);
        let p = random_unimodular(&mut rng, h.dim(), 3 * h.dim());
        let g = h.change_basis(&p).unwrap();
        prop_assert_eq!(g.classify_heisenberg_type().unwrap(), Some(l));
        let f = filiform(5, r);
        let p = random_unimodular(&mut rng, f.dim(), 3 * f.dim());
        prop_assert_eq!(f.change_basis(&p).unwrap().classify_heisenberg_type().unwrap(), None);
    }
}

#[test]
fn first_betti_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut algebras = nilpotent_in_adapted_basis();
    algebras.extend(negative_fixtures(&mut rng).into_iter().take(12));
    for g in algebras {
        let m = g.dim();
        let derived = g.derived_and_center().0.dim();
        let h = cohomology(g.chevalley_eilenberg().unwrap(), Some(1)).unwrap();
        assert_eq!(h.betti(1), m - derived, "{g}");
        if let Some(l) = g.classify_heisenberg_type().unwrap() {
            assert_eq!(h.betti(1), if l >= 1 { m - 1 } else { m });
        }
    }
}

#[test]
fn top_differential_vanishes_for_nilpotent() {
    for g in nilpotent_in_adapted_basis() {
        let m = g.dim();
        let ce: Algebra = g.chevalley_eilenberg().unwrap().into();
        assert!(boundary_matrix(&ce, m - 1).unwrap().is_zero(), "{g}");
        assert_eq!(cohomology(ce, None).unwrap().betti(m), 1);
    }
}

#[test]
fn presentation_exists_iff_heisenberg_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in negative_fixtures(&mut rng) {
        assert!(ce_almost_formal_presentation(&g).unwrap().is_none());
    }
    for g in nilpotent_in_adapted_basis() {
        let class = g.classify_heisenberg_type().unwrap();
        let p = ce_almost_formal_presentation(&g).unwrap();
        assert_eq!(p.is_some(), class.is_some(), "{g}");
        if let Some(p) = p {
            assert_eq!(Some(almost_formal_index(&p).unwrap()), class);
        }
    }
}

#[test]
fn closed_hirsch_generator_adds_circle_factor() {
    for (l, r) in [(0, 1), (1, 0), (1, 1), (2, 0), (2, 1)] {
        let ce = Arc::new(heisenberg_sum(l, r).chevalley_eilenberg().unwrap());
        let before = cohomology(ce.clone(), None).unwrap().betti_numbers();
        let zero = Element::zero(ce.generators());
        let ext = hirsch_extend(&HirschData::new(ce, vec![("s".into(), 1, zero)]).unwrap()).unwrap();
        let after = cohomology(ext, None).unwrap().betti_numbers();
        let expected: Vec<usize> = (0..=before.len())
            .map(|k| before.get(k).copied().unwrap_or(0) + if k > 0 { before[k - 1] } else { 0 })
            .collect();
        assert_eq!(after, expected);
    }
}

#[test]
fn form_rank_equals_index() {
    for l in 0..=3 {
        for r in 0..=2 {
            let g = heisenberg_sum(l, r);
            let ce = g.chevalley_eilenberg().unwrap();
            let rank = rank_of_form(&ce, &ce.element("h").unwrap(), g.dim()).unwrap();
            let p = ce_almost_formal_presentation(&g).unwrap().unwrap();
            assert_eq!(rank.p, almost_formal_index(&p).unwrap());
        }
    }
}

#[test]
fn quasi_iso_verdicts() {
    let g = GeneratorSet::exterior(["a1", "a2", "a3"]).unwrap();
    let a = Arc::new(Cdga::from_named(&g, &[("a3", "-a1*a2")]).unwrap());
    let f = MorphismSpec::from_named(a.clone(), a.clone(), &[("a1", "a2"), ("a2", "-a1"), ("a3", "a3")]).unwrap();
    let phi = AutomorphismSpec::new(f.clone(), 4).unwrap();
    let id = MorphismSpec::identity(a.clone());
    assert!(check_quasi_iso(&id, None).unwrap().is_quasi_iso());
    assert!(check_quasi_iso(&id.then(&f).unwrap(), None).unwrap().is_quasi_iso());
    let inc = MorphismSpec::inclusion(Arc::new(invariant_subcomplex(&phi, None).unwrap()));
    assert!(!check_quasi_iso(&inc, None).unwrap().is_quasi_iso());
    assert!(!check_quasi_iso(&inc.then(&f).unwrap(), None).unwrap().is_quasi_iso());
    for l in 0..=2 {
        let ce = heisenberg_sum(l, 1).chevalley_eilenberg().unwrap();
        assert!(check_quasi_iso(&MorphismSpec::identity(ce), None)
            .unwrap()
            .is_quasi_iso());
    }
}

#[test]
fn basis_of_sub_algebra_is_its_complex_basis() {
    let ce = Arc::new(heisenberg_sum(1, 0).chevalley_eilenberg().unwrap());
    let i = Derivation::dual_contraction(ce.generators(), "h").unwrap();
    let sub = kernel_subcdga(&Algebra::Free(ce), &[i], None).unwrap();
    for k in 0..=sub.top_degree() {
        assert_eq!(Complex::basis(&sub, k), sub.bases()[k]);
    }
}

//! Model constructions: Hirsch extensions, almost formal presentations,
//! Chevalley decompositions along a degree −1 derivation, mapping-torus
//! models, quasi-isomorphism checks and the rank of a degree-1 form.
//!
//! A Hirsch extension of a sub-CDGA `B ⊂ ΛV` is realized inside the free
//! extension `ΛV ⊗ Λ⟨y, …⟩` as the span of `b·y_S` for `b` in the basis of
//! `B` and `S` a set of new generators; `B` must be closed under products.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cdga::{kernel_subcdga, Algebra, Cdga, Complex, Derivation, SubCdga};
use crate::error::{Error, Result};
use crate::gca::{Element, GeneratorSet};
use crate::homology::cohomology;
use crate::lie::LieAlgebra;
use crate::linalg::{dense_rank, inverse, Matrix};
use crate::scalar::Scalar;

/// New odd generators with closed targets in a base algebra.
#[derive(Debug, Clone)]
pub struct HirschData {
    base: Algebra,
    generators: Vec<(String, usize)>,
    targets: Vec<Element>,
}

impl HirschData {
    /// Targets are elements of the base ambient algebra; each must lie in
    /// the base, be closed and have degree one more than its generator.
    pub fn new(base: impl Into<Algebra>, new: Vec<(String, usize, Element)>) -> Result<Self> {
        let base = base.into();
        let gens = base.generators().clone();
        let mut generators = Vec::with_capacity(new.len());
        let mut targets = Vec::with_capacity(new.len());
        for (name, degree, target) in new {
            if degree % 2 == 0 {
                return Err(Error::Precondition(format!(
                    "Hirsch generator {name} must have odd degree, got {degree}"
                )));
            }
            if gens.index_of(&name).is_some() || generators.iter().any(|(n, _)| *n == name) {
                return Err(Error::NameCollision(name));
            }
            if !GeneratorSet::same(target.generators(), &gens) {
                return Err(Error::MismatchedGenerators);
            }
            if !target.is_homogeneous_of(degree + 1) {
                return Err(Error::NotHomogeneous {
                    element: target.to_string(),
                    expected: degree as i64 + 1,
                });
            }
            if !base.contains(&target) {
                return Err(Error::NotInComplex(target.to_string()));
            }
            let residue = base.cdga().try_apply_differential(&target)?;
            if !residue.is_zero() {
                return Err(Error::NotCocycle {
                    element: target.to_string(),
                    residue: residue.to_string(),
                });
            }
            generators.push((name, degree));
            targets.push(target);
        }
        if let Algebra::Sub(s) = &base {
            s.check_product_closed()?;
        }
        Ok(Self {
            base,
            generators,
            targets,
        })
    }

    pub fn base(&self) -> &Algebra {
        &self.base
    }
}

/// `(B ⊗ ΛV, d_f)`: a free CDGA when `B` is free, otherwise the span of
/// `B·ΛV` inside the free extension of `B`'s ambient.
pub fn hirsch_extend(h: &HirschData) -> Result<Algebra> {
    let ambient = h.base.ambient();
    let targets = &h.targets;
    let ext = Arc::new(ambient.extend(&h.generators, |g| targets.iter().map(|t| t.embed(g)).collect())?);
    let sub = match &h.base {
        Algebra::Free(_) => return Ok(Algebra::Free(ext)),
        Algebra::Sub(s) => s,
    };
    let gens = ext.generators().clone();
    let n0 = ambient.generators().len();
    let n = h.generators.len();
    // products y_S in generator order, with their degrees
    let subsets: Vec<(usize, Element)> = (0..1usize << n)
        .map(|mask| {
            let mut e = Element::one(&gens);
            let mut deg = 0;
            for j in (0..n).filter(|j| mask >> j & 1 == 1) {
                e = &e * &Element::generator(&gens, n0 + j);
                deg += h.generators[j].1;
            }
            (deg, e)
        })
        .collect();
    let top = sub.top_degree() + h.generators.iter().map(|g| g.1).sum::<usize>();
    let mut bases = vec![Vec::new(); top + 1];
    for (k, basis) in bases.iter_mut().enumerate() {
        for (deg, ys) in &subsets {
            if *deg > k {
                continue;
            }
            for b in sub.basis(k - deg) {
                basis.push(&b.embed(&gens)? * ys);
            }
        }
    }
    Ok(Algebra::Sub(Arc::new(SubCdga::new(ext, bases, top)?)))
}

/// A degree-preserving algebra map given on the generators of the source's
/// ambient algebra.
#[derive(Debug, Clone)]
pub struct MorphismSpec {
    source: Algebra,
    target: Algebra,
    images: Vec<Element>,
}

impl MorphismSpec {
    pub fn new(source: impl Into<Algebra>, target: impl Into<Algebra>, images: Vec<Element>) -> Result<Self> {
        let source = source.into();
        let target = target.into();
        let sg = source.generators();
        if images.len() != sg.len() {
            return Err(Error::Precondition(format!(
                "{} images for {} generators",
                images.len(),
                sg.len()
            )));
        }
        for (i, im) in images.iter().enumerate() {
            if !GeneratorSet::same(im.generators(), target.generators()) {
                return Err(Error::MismatchedGenerators);
            }
            if !im.is_homogeneous_of(sg.degree(i)) {
                return Err(Error::NotHomogeneous {
                    element: im.to_string(),
                    expected: sg.degree(i) as i64,
                });
            }
        }
        let psi = Self { source, target, images };
        match &psi.source {
            Algebra::Free(_) => {
                if let Some(im) = psi.images.iter().find(|im| !psi.target.contains(im)) {
                    return Err(Error::NotInComplex(im.to_string()));
                }
            }
            Algebra::Sub(s) => {
                for b in s.bases().iter().flatten() {
                    let im = psi.apply(b);
                    if !psi.target.contains(&im) {
                        return Err(Error::NotInComplex(im.to_string()));
                    }
                }
            }
        }
        Ok(psi)
    }

    /// Images by generator name; every generator must be listed once.
    pub fn from_named(source: impl Into<Algebra>, target: impl Into<Algebra>, map: &[(&str, &str)]) -> Result<Self> {
        let source = source.into();
        let target = target.into();
        let sg = source.generators().clone();
        let mut images: Vec<Option<Element>> = vec![None; sg.len()];
        for (name, expr) in map {
            let i = sg
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            if images[i].is_some() {
                return Err(Error::Precondition(format!("generator {name} mapped twice")));
            }
            images[i] = Some(Element::parse(target.generators(), expr)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, im)| im.ok_or_else(|| Error::Precondition(format!("no image for generator {}", sg.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(a: impl Into<Algebra>) -> Self {
        let a = a.into();
        let gens = a.generators().clone();
        let images = (0..gens.len()).map(|i| Element::generator(&gens, i)).collect();
        Self {
            source: a.clone(),
            target: a,
            images,
        }
    }

    /// The inclusion of a sub-CDGA into its ambient algebra.
    pub fn inclusion(sub: Arc<SubCdga>) -> Self {
        let ambient = sub.ambient().clone();
        let gens = ambient.generators().clone();
        let images = (0..gens.len()).map(|i| Element::generator(&gens, i)).collect();
        Self {
            source: Algebra::Sub(sub),
            target: Algebra::Free(ambient),
            images,
        }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn try_apply(&self, e: &Element) -> Result<Element> {
        if !GeneratorSet::same(e.generators(), self.source.generators()) {
            return Err(Error::MismatchedGenerators);
        }
        let tg = self.target.generators();
        let mut out = Element::zero(tg);
        for (m, c) in e.terms() {
            let mut acc = Element::scalar(tg, c.clone());
            'mono: for (i, &x) in m.exponents().iter().enumerate() {
                for _ in 0..x {
                    acc = &acc * &self.images[i];
                    if acc.is_zero() {
                        break 'mono;
                    }
                }
            }
            out += &acc;
        }
        Ok(out)
    }

    pub fn apply(&self, e: &Element) -> Element {
        self.try_apply(e).expect("element of the source algebra")
    }

    /// `d ∘ ψ = ψ ∘ d` on generators (free source) or on the source basis.
    pub fn check_chain_map(&self) -> Result<()> {
        let sd = self.source.cdga();
        let td = self.target.cdga();
        let residue = |x: &Element| td.apply_differential(&self.apply(x)) - self.apply(&sd.apply_differential(x));
        match &self.source {
            Algebra::Free(c) => {
                for i in 0..c.generators().len() {
                    let r = residue(&Element::generator(c.generators(), i));
                    if !r.is_zero() {
                        return Err(Error::NotChainMap {
                            generator: c.generators().name(i).to_string(),
                            residue: r.to_string(),
                        });
                    }
                }
            }
            Algebra::Sub(s) => {
                for b in s.bases().iter().flatten() {
                    let r = residue(b);
                    if !r.is_zero() {
                        return Err(Error::NotChainMap {
                            generator: b.to_string(),
                            residue: r.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MorphismSpec) -> Result<MorphismSpec> {
        if !GeneratorSet::same(self.target.generators(), next.source.generators()) {
            return Err(Error::MismatchedGenerators);
        }
        Ok(MorphismSpec {
            source: self.source.clone(),
            target: next.target.clone(),
            images: self.images.iter().map(|im| next.apply(im)).collect(),
        })
    }

    /// True when every generator is sent to itself.
    pub fn is_identity_on_generators(&self) -> bool {
        GeneratorSet::same(self.source.generators(), self.target.generators())
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, im)| *im == Element::generator(self.target.generators(), i))
    }
}

impl fmt::Display for MorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, im) in self.images.iter().enumerate() {
            writeln!(f, "map {} -> {}", self.source.generators().name(i), im)?;
        }
        Ok(())
    }
}

/// An endomorphism of a free CDGA of declared finite order.
#[derive(Debug, Clone)]
pub struct AutomorphismSpec {
    morphism: MorphismSpec,
    order: usize,
}

impl AutomorphismSpec {
    /// Checks the chain-map condition and that `order` is the least `k`
    /// with `φ^k = id` on generators.
    pub fn new(morphism: MorphismSpec, order: usize) -> Result<Self> {
        let same = match (&morphism.source, &morphism.target) {
            (Algebra::Free(a), Algebra::Free(b)) => a == b,
            _ => false,
        };
        if !same {
            return Err(Error::Precondition(
                "an automorphism must map a free CDGA to itself".into(),
            ));
        }
        if order == 0 {
            return Err(Error::OrderMismatch("order must be at least 1".into()));
        }
        morphism.check_chain_map()?;
        let mut power = morphism.clone();
        for j in 1..=order {
            if power.is_identity_on_generators() {
                if j == order {
                    return Ok(Self { morphism, order });
                }
                return Err(Error::OrderMismatch(format!(
                    "declared order {order}, but the {j}-th power is the identity"
                )));
            }
            power = power.then(&morphism)?;
        }
        Err(Error::OrderMismatch(format!(
            "the {order}-th power is not the identity"
        )))
    }

    pub fn morphism(&self) -> &MorphismSpec {
        &self.morphism
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cdga(&self) -> Arc<Cdga> {
        self.morphism.source.ambient()
    }
}

/// Per degree, the kernel of `φ − id` on the monomial basis.
pub fn invariant_subcomplex(phi: &AutomorphismSpec, top: Option<usize>) -> Result<SubCdga> {
    let a = phi.cdga();
    let top = Algebra::Free(a.clone()).require_top(top)?;
    let mut bases = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let basis = a.basis(k);
        let cols = basis
            .iter()
            .map(|b| {
                (phi.morphism.apply(b) - b.clone())
                    .coordinates(k)
                    .expect("degree preserved")
            })
            .collect();
        let m = Matrix {
            rows: basis.len(),
            cols,
        };
        bases.push(m.kernel().iter().map(|v| Complex::element(a.as_ref(), k, v)).collect());
    }
    SubCdga::new(a, bases, top)
}

/// `(B ⊗ Λ⟨y⟩, dy = 0)`.
pub fn mapping_torus_model(binv: impl Into<Algebra>, y: &str) -> Result<Algebra> {
    let binv = binv.into();
    let zero = Element::zero(binv.generators());
    hirsch_extend(&HirschData::new(binv, vec![(y.to_string(), 1, zero)])?)
}

/// `(A, z, y)` with `A` connected and `d = 0` on `A`; its model is
/// `(A ⊗ Λ⟨y⟩, dy = z)`.
#[derive(Debug, Clone)]
pub struct AlmostFormalPresentation {
    a: Algebra,
    z: Element,
    y: String,
    identification: Option<MorphismSpec>,
}

impl AlmostFormalPresentation {
    pub fn new(a: impl Into<Algebra>, z: Element, y: &str) -> Result<Self> {
        let a = a.into();
        if !a.has_zero_differential() {
            return Err(Error::Precondition("the differential of A does not vanish".into()));
        }
        if a.dim(0) != 1 {
            return Err(Error::Precondition("A is not connected".into()));
        }
        if !GeneratorSet::same(z.generators(), a.generators()) {
            return Err(Error::MismatchedGenerators);
        }
        if !z.is_homogeneous_of(2) {
            return Err(Error::NotHomogeneous {
                element: z.to_string(),
                expected: 2,
            });
        }
        if !a.contains(&z) {
            return Err(Error::NotInComplex(z.to_string()));
        }
        if a.generators().index_of(y).is_some() {
            return Err(Error::NameCollision(y.to_string()));
        }
        Ok(Self {
            a,
            z,
            y: y.to_string(),
            identification: None,
        })
    }

    pub fn a(&self) -> &Algebra {
        &self.a
    }

    pub fn z(&self) -> &Element {
        &self.z
    }

    pub fn y(&self) -> &str {
        &self.y
    }

    /// For presentations built from a Lie algebra: the generator-level
    /// isomorphism from the model to the CE algebra.
    pub fn identification(&self) -> Option<&MorphismSpec> {
        self.identification.as_ref()
    }

    pub fn model(&self) -> Result<Algebra> {
        hirsch_extend(&HirschData::new(
            self.a.clone(),
            vec![(self.y.clone(), 1, self.z.clone())],
        )?)
    }
}

/// Largest `l` with `z^l ≠ 0`.
pub fn almost_formal_index(p: &AlmostFormalPresentation) -> Result<usize> {
    if p.z.is_zero() {
        return Ok(0);
    }
    let top = p.a.require_top(None)?;
    let mut power = p.z.clone();
    let mut l = 1;
    while 2 * (l + 1) <= top {
        power = &power * &p.z;
        if power.is_zero() {
            break;
        }
        l += 1;
    }
    Ok(l)
}

type Pair = (Vec<Scalar>, Vec<Scalar>);

/// Skew-normal form: returns pairs `(e, f)` with `Z(e, f) = −1` and the
/// remaining vectors, all mutually `Z`-orthogonal.
fn symplectic_basis(z: &[Vec<Scalar>]) -> (Vec<Pair>, Vec<Vec<Scalar>>) {
    let n = z.len();
    let form = |u: &[Scalar], v: &[Scalar]| -> Scalar {
        let mut s = Scalar::zero();
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                if !z[i][j].is_zero() {
                    s += ui * vj * &z[i][j];
                }
            }
        }
        s
    };
    let mut rest: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        })
        .collect();
    let mut pairs = Vec::new();
    loop {
        let pivot = (0..rest.len())
            .flat_map(|a| (a + 1..rest.len()).map(move |b| (a, b)))
            .find(|&(a, b)| !form(&rest[a], &rest[b]).is_zero());
        let Some((a, b)) = pivot else { break };
        let e = rest[a].clone();
        let s = -Scalar::one() / form(&e, &rest[b]);
        let f: Vec<Scalar> = rest[b].iter().map(|x| x * &s).collect();
        rest.remove(b);
        rest.remove(a);
        for v in rest.iter_mut() {
            let zf = form(v, &f);
            let ze = form(v, &e);
            for i in 0..n {
                v[i] = &v[i] + &zf * &e[i] - &ze * &f[i];
            }
        }
        pairs.push((e, f));
    }
    (pairs, rest)
}

/// The presentation `A = Λ⟨p_j, q_j, u_i⟩`, `z = −Σ p_j q_j`, `y` = the
/// non-closed CE generator, for Lie algebras of Heisenberg type; `None`
/// otherwise.
pub fn ce_almost_formal_presentation(lie: &LieAlgebra) -> Result<Option<AlmostFormalPresentation>> {
    let Some(l) = lie.classify_heisenberg_type()? else {
        return Ok(None);
    };
    let m = lie.dim();
    if m == 0 {
        return Err(Error::Precondition("zero-dimensional Lie algebra".into()));
    }
    let ce = Arc::new(lie.chevalley_eilenberg()?);
    ce.check_d_squared()?;
    let cg = ce.generators().clone();
    let t = (0..m).find(|&i| !ce.d(i).is_zero()).unwrap_or(m - 1);
    let z_ce = ce.d(t).clone();
    let others: Vec<usize> = (0..m).filter(|&i| i != t).collect();
    let n = others.len();
    let pos = |i: usize| others.iter().position(|&o| o == i);

    // dα^k = μ_k dα^t, so β_k = α^k − μ_k α^t is closed
    let mu: Vec<Scalar> = match z_ce.terms().next() {
        None => vec![Scalar::zero(); n],
        Some((mono, c0)) => others
            .iter()
            .map(|&k| {
                let mu = ce.d(k).coefficient(mono) / c0;
                if *ce.d(k) != z_ce.scaled(&mu) {
                    return Err(Error::Internal("differentials are not proportional".into()));
                }
                Ok(mu)
            })
            .collect::<Result<_>>()?,
    };

    // z restricted to pairs of closed generators
    let mut zmat = vec![vec![Scalar::zero(); n]; n];
    for (mono, c) in z_ce.terms() {
        let idx: Vec<usize> = (0..m).filter(|&i| mono.exponent(i) == 1).collect();
        if let (Some(a), Some(b)) = (pos(idx[0]), pos(idx[1])) {
            zmat[a][b] = c.clone();
            zmat[b][a] = -c.clone();
        }
    }
    let (pairs, rest) = symplectic_basis(&zmat);
    if pairs.len() != l {
        return Err(Error::Internal(format!(
            "symplectic rank {} disagrees with classifier l = {l}",
            pairs.len()
        )));
    }
    let mut names: Vec<String> = (1..=l).map(|j| format!("p{j}")).collect();
    names.extend((1..=l).map(|j| format!("q{j}")));
    names.extend((1..=rest.len()).map(|j| format!("u{j}")));
    let mut columns: Vec<&Vec<Scalar>> = pairs.iter().map(|(e, _)| e).collect();
    columns.extend(pairs.iter().map(|(_, f)| f));
    columns.extend(rest.iter());
    let s: Vec<Vec<Scalar>> = (0..n).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let sinv = inverse(&s)?;

    let ag = GeneratorSet::exterior(names.iter().cloned())?;
    let a = Arc::new(Cdga::with_zero_differential(&ag));
    let mut z = Element::zero(&ag);
    for j in 0..l {
        z = z - &Element::generator(&ag, j) * &Element::generator(&ag, l + j);
    }
    let mut y = cg.name(t).to_string();
    while ag.index_of(&y).is_some() {
        y.push('\'');
    }
    let mut presentation = AlmostFormalPresentation::new(a, z, &y)?;

    let model = presentation.model()?;
    let beta = |a: usize| {
        let k = others[a];
        Element::generator(&cg, k) - Element::generator(&cg, t).scaled(&mu[a])
    };
    let mut images: Vec<Element> = (0..n)
        .map(|c| {
            let mut e = Element::zero(&cg);
            for (a, x) in sinv[c].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                e += &beta(a).scaled(x);
            }
            e
        })
        .collect();
    images.push(Element::generator(&cg, t));
    let psi = MorphismSpec::new(model, ce, images)?;
    psi.check_chain_map()?;
    presentation.identification = Some(psi);
    Ok(Some(presentation))
}

/// Outcome of a Chevalley decomposition: `B ≅ (B_D ⊗ Λ⟨y⟩, dy = dη)`.
#[derive(Debug, Clone)]
pub struct ChevalleyDecomposition {
    pub kernel: Arc<SubCdga>,
    pub model: Algebra,
    /// Model → B: `a + b·y ↦ a + b·η`.
    pub iso: MorphismSpec,
    /// B → model: on generators `g ↦ D(ηg) + D(g)·y`.
    pub inverse: MorphismSpec,
    /// Number of degrees on which both composites were checked.
    pub degrees_checked: usize,
}

/// Splits `B` along a degree −1 derivation `D` with `D² = 0`, `[D, d] = 0`
/// and `D(η) = 1`, and verifies the two maps are mutually inverse chain
/// maps degree by degree.
pub fn chevalley_decompose(
    b: impl Into<Algebra>,
    der: &Derivation,
    eta: &Element,
    y: &str,
    top: Option<usize>,
) -> Result<ChevalleyDecomposition> {
    let source = b.into();
    let ambient = source.ambient();
    let gens = ambient.generators().clone();
    if der.degree() != -1 {
        return Err(Error::Precondition(format!(
            "D must have degree -1, got {}",
            der.degree()
        )));
    }
    if !GeneratorSet::same(der.generators(), &gens) || !GeneratorSet::same(eta.generators(), &gens) {
        return Err(Error::MismatchedGenerators);
    }
    let sq = der.graded_commutator(der)?;
    if let Some(i) = sq.first_nonzero() {
        return Err(Error::Precondition(format!(
            "D^2 does not vanish on {}: residue {}",
            gens.name(i),
            sq.value(i).scaled(&crate::scalar::frac(1, 2))
        )));
    }
    if !eta.is_homogeneous_of(1) {
        return Err(Error::NotHomogeneous {
            element: eta.to_string(),
            expected: 1,
        });
    }
    if !source.contains(eta) {
        return Err(Error::NotInComplex(eta.to_string()));
    }
    let residue = der.apply(eta) - Element::one(&gens);
    if !residue.is_zero() {
        return Err(Error::Precondition(format!("D(eta) - 1 = {residue}")));
    }
    let top = source.require_top(top)?;
    let kernel = Arc::new(kernel_subcdga(&source, std::slice::from_ref(der), Some(top))?);
    let deta = ambient.apply_differential(eta);
    let model = hirsch_extend(&HirschData::new(kernel.clone(), vec![(y.to_string(), 1, deta)])?)?;
    let mg = model.generators().clone();
    let yel = Element::var(&mg, y)?;

    let n = gens.len();
    let iso_images = (0..mg.len())
        .map(|i| {
            if i < n {
                Element::generator(&gens, i)
            } else {
                eta.clone()
            }
        })
        .collect();
    let iso = MorphismSpec::new(model.clone(), source.clone(), iso_images)?;

    let formula = |e: &Element, k: usize| -> Result<Element> {
        let first = der.apply(&(eta * e)).embed(&mg)?;
        let second = &der.apply(e).embed(&mg)? * &yel;
        Ok(if k % 2 == 1 { first + second } else { first - second })
    };
    let inv_images = (0..n)
        .map(|i| formula(&Element::generator(&gens, i), gens.degree(i)))
        .collect::<Result<Vec<_>>>()?;
    let inverse = MorphismSpec::new(source.clone(), model.clone(), inv_images)?;
    iso.check_chain_map()?;
    inverse.check_chain_map()?;

    let mismatch = |what: &str, e: &Element| Error::Internal(format!("{what} fails on {e}"));
    for k in 0..=top {
        for e in source.basis(k) {
            let f = formula(&e, k)?;
            if f != inverse.apply(&e) {
                return Err(mismatch("the degree-wise inverse formula", &e));
            }
            if iso.apply(&f) != e {
                return Err(mismatch("iso after inverse", &e));
            }
        }
    }
    for k in 0..=top + 1 {
        for e in model.basis(k) {
            let back = if k <= top {
                formula(&iso.apply(&e), k)?
            } else {
                Element::zero(&mg)
            };
            if back != e {
                return Err(mismatch("inverse after iso", &e));
            }
        }
    }
    Ok(ChevalleyDecomposition {
        kernel,
        model,
        iso,
        inverse,
        degrees_checked: top + 1,
    })
}

/// The map induced on `H^k` in representative bases.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub degree: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    /// `target_betti × source_betti`.
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
}

impl InducedMap {
    pub fn is_bijective(&self) -> bool {
        self.source_betti == self.target_betti && self.rank == self.source_betti
    }
}

#[derive(Debug, Clone)]
pub struct QuasiIsoReport {
    pub degrees: Vec<InducedMap>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.iter().all(InducedMap::is_bijective)
    }
}

impl fmt::Display for QuasiIsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.degrees {
            writeln!(
                f,
                "H^{}: {} -> {}, rank {}",
                d.degree, d.source_betti, d.target_betti, d.rank
            )?;
        }
        writeln!(f, "QISO: {}", if self.is_quasi_iso() { "yes" } else { "no" })
    }
}

/// Induced maps on cohomology up to `top` (default: the smaller of the two
/// top degrees).
pub fn check_quasi_iso(psi: &MorphismSpec, top: Option<usize>) -> Result<QuasiIsoReport> {
    psi.check_chain_map()?;
    let top = match (top, psi.source.top(), psi.target.top()) {
        (Some(t), _, _) => t,
        (None, Some(a), Some(b)) => a.min(b),
        (None, Some(a), None) | (None, None, Some(a)) => a,
        (None, None, None) => return Err(Error::TopRequired),
    };
    let hs = cohomology(psi.source.clone(), Some(top))?;
    let ht = cohomology(psi.target.clone(), Some(top))?;
    let mut degrees = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let (sb, tb) = (hs.betti(k), ht.betti(k));
        let mut matrix = vec![vec![Scalar::zero(); sb]; tb];
        for (j, rep) in hs.representatives(k).iter().enumerate() {
            let class = ht.class_in(k, &psi.apply(rep))?;
            for (i, c) in class.coordinates().iter().enumerate() {
                matrix[i][j] = c.clone();
            }
        }
        let rank = dense_rank(&matrix);
        degrees.push(InducedMap {
            degree: k,
            source_betti: sb,
            target_betti: tb,
            matrix,
            rank,
        });
    }
    Ok(QuasiIsoReport { degrees })
}

/// `p` = largest `p ≤ max` with `(dη)^p ≠ 0`; the rank is `2p + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormRank {
    pub p: usize,
    /// Whether `η ∧ (dη)^p ≠ 0`.
    pub eta_wedge_nonzero: bool,
}

impl FormRank {
    pub fn rank(&self) -> usize {
        2 * self.p + 1
    }
}

pub fn rank_of_form(a: &Cdga, eta: &Element, max: usize) -> Result<FormRank> {
    if !GeneratorSet::same(eta.generators(), a.generators()) {
        return Err(Error::MismatchedGenerators);
    }
    if !eta.is_homogeneous_of(1) {
        return Err(Error::NotHomogeneous {
            element: eta.to_string(),
            expected: 1,
        });
    }
    let deta = a.apply_differential(eta);
    let mut power = Element::one(a.generators());
    let mut p = 0;
    while p < max {
        let next = &power * &deta;
        if next.is_zero() {
            break;
        }
        power = next;
        p += 1;
    }
    Ok(FormRank {
        p,
        eta_wedge_nonzero: !(eta * &power).is_zero(),
    })
}

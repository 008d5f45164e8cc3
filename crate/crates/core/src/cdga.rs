//! Differentials, derivations and sub-CDGAs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gca::{Element, GeneratorSet, Monomial};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::{int, Scalar};

/// A derivation of ΛV of a fixed degree, determined by its values on the
/// generators and extended by the graded Leibniz rule
/// `D(ab) = D(a) b + (-1)^{|D||a|} a D(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    gens: Arc<GeneratorSet>,
    degree: i64,
    values: Vec<Element>,
}

impl Derivation {
    pub fn new(gens: &Arc<GeneratorSet>, degree: i64, values: Vec<Element>) -> Result<Self> {
        if values.len() != gens.len() {
            return Err(Error::MismatchedGenerators);
        }
        for (i, v) in values.iter().enumerate() {
            if !GeneratorSet::same(v.generators(), gens) {
                return Err(Error::MismatchedGenerators);
            }
            let target = gens.degree(i) as i64 + degree;
            let ok = if target < 0 {
                v.is_zero()
            } else {
                v.is_homogeneous_of(target as usize)
            };
            if !ok {
                return Err(Error::NotHomogeneous {
                    element: v.to_string(),
                    expected: target,
                });
            }
        }
        Ok(Self {
            gens: gens.clone(),
            degree,
            values,
        })
    }

    pub fn zero(gens: &Arc<GeneratorSet>, degree: i64) -> Self {
        Self {
            gens: gens.clone(),
            degree,
            values: vec![Element::zero(gens); gens.len()],
        }
    }

    /// Values given as `(generator name, element text)`; unnamed generators
    /// map to zero.
    pub fn from_named(gens: &Arc<GeneratorSet>, degree: i64, values: &[(&str, &str)]) -> Result<Self> {
        let mut vals = vec![Element::zero(gens); gens.len()];
        for (name, expr) in values {
            let i = gens
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            vals[i] = Element::parse(gens, expr)?;
        }
        Self::new(gens, degree, vals)
    }

    /// The degree −1 derivation pairing degree-1 generators with the given
    /// scalars and vanishing on every generator of higher degree.
    pub fn contraction(gens: &Arc<GeneratorSet>, pairing: &[(usize, Scalar)]) -> Result<Self> {
        let mut vals = vec![Element::zero(gens); gens.len()];
        for (i, c) in pairing {
            if gens.degree(*i) != 1 {
                return Err(Error::Precondition(format!(
                    "contraction pairs only degree-1 generators, `{}` has degree {}",
                    gens.name(*i),
                    gens.degree(*i)
                )));
            }
            vals[*i] = Element::scalar(gens, c.clone());
        }
        Self::new(gens, -1, vals)
    }

    /// Contraction dual to the degree-1 generator `name`.
    pub fn dual_contraction(gens: &Arc<GeneratorSet>, name: &str) -> Result<Self> {
        let i = gens
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Self::contraction(gens, &[(i, int(1))])
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn value(&self, i: usize) -> &Element {
        &self.values[i]
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Element::is_zero)
    }

    /// First generator with a nonzero value, if any.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_zero())
    }

    fn apply_monomial(&self, m: &Monomial) -> Element {
        let gens = &self.gens;
        let mut out = Element::zero(gens);
        for i in 0..gens.len() {
            let e = m.exponent(i);
            if e == 0 || self.values[i].is_zero() {
                continue;
            }
            let (left, right) = m.split_at(gens, i);
            // D(g^e) = e g^{e-1} D(g); only even generators have e > 1
            let rest = m.without_one(gens, i);
            let power = Monomial::from_exponents(
                gens,
                (0..gens.len())
                    .map(|j| if j == i { rest.exponent(i) } else { 0 })
                    .collect(),
            )
            .expect("sub-monomial is valid");
            let mut middle = &Element::from_monomial(gens, power, int(e as i64)) * &self.values[i];
            if (self.degree * left.degree() as i64) % 2 != 0 {
                middle = -middle;
            }
            let lhs = Element::from_monomial(gens, left, int(1));
            let rhs = Element::from_monomial(gens, right, int(1));
            out += &(&(&lhs * &middle) * &rhs);
        }
        out
    }

    pub fn try_apply(&self, e: &Element) -> Result<Element> {
        if !GeneratorSet::same(e.generators(), &self.gens) {
            return Err(Error::MismatchedGenerators);
        }
        let mut out = Element::zero(&self.gens);
        for (m, c) in e.terms() {
            out += &self.apply_monomial(m).scaled(c);
        }
        Ok(out)
    }

    /// Panics on a generator-set mismatch; see [`Derivation::try_apply`].
    pub fn apply(&self, e: &Element) -> Element {
        self.try_apply(e)
            .expect("applying a derivation to an element of another algebra")
    }

    /// `[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1`, a derivation of degree
    /// `|D1| + |D2|`.
    pub fn graded_commutator(&self, other: &Derivation) -> Result<Derivation> {
        if !GeneratorSet::same(&self.gens, &other.gens) {
            return Err(Error::MismatchedGenerators);
        }
        let odd = (self.degree * other.degree) % 2 != 0;
        let values = (0..self.gens.len())
            .map(|i| {
                let g = Element::generator(&self.gens, i);
                let ab = self.apply(&other.apply(&g));
                let ba = other.apply(&self.apply(&g));
                if odd {
                    &ab + &ba
                } else {
                    &ab - &ba
                }
            })
            .collect();
        Derivation::new(&self.gens, self.degree + other.degree, values)
    }
}

/// Proof that d² vanishes on every generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DSquaredCertificate {
    pub generators_checked: usize,
}

/// A free CDGA (ΛV, d) with d given on generators.
#[derive(Debug, Clone)]
pub struct Cdga {
    differential: Derivation,
    d_squared: std::result::Result<DSquaredCertificate, Error>,
}

impl PartialEq for Cdga {
    fn eq(&self, other: &Self) -> bool {
        self.differential == other.differential
    }
}

impl Cdga {
    /// Validates degrees eagerly; a d² violation is recorded and reported
    /// by [`Cdga::check_d_squared`].
    pub fn new(gens: &Arc<GeneratorSet>, differentials: Vec<Element>) -> Result<Self> {
        let differential = Derivation::new(gens, 1, differentials)?;
        let d_squared = (0..gens.len())
            .find_map(|i| {
                let dd = differential.apply(differential.value(i));
                (!dd.is_zero()).then(|| Error::DSquared {
                    generator: gens.name(i).to_string(),
                    residue: dd.to_string(),
                })
            })
            .map_or(
                Ok(DSquaredCertificate {
                    generators_checked: gens.len(),
                }),
                Err,
            );
        Ok(Self {
            differential,
            d_squared,
        })
    }

    pub fn from_named(gens: &Arc<GeneratorSet>, differentials: &[(&str, &str)]) -> Result<Self> {
        let d = Derivation::from_named(gens, 1, differentials)?;
        Self::new(gens, d.values)
    }

    pub fn with_zero_differential(gens: &Arc<GeneratorSet>) -> Self {
        Self::new(gens, vec![Element::zero(gens); gens.len()]).expect("zero differential is valid")
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.differential.gens
    }

    pub fn differential(&self) -> &Derivation {
        &self.differential
    }

    pub fn d(&self, i: usize) -> &Element {
        self.differential.value(i)
    }

    pub fn check_d_squared(&self) -> Result<DSquaredCertificate> {
        self.d_squared.clone()
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.is_zero()
    }

    pub fn try_apply_differential(&self, e: &Element) -> Result<Element> {
        self.differential.try_apply(e)
    }

    pub fn apply_differential(&self, e: &Element) -> Element {
        self.differential.apply(e)
    }

    pub fn element(&self, s: &str) -> Result<Element> {
        Element::parse(self.generators(), s)
    }

    /// Adjoins new generators with the given differentials (elements of the
    /// enlarged algebra).
    pub fn extend(
        &self,
        new: &[(String, usize)],
        images: impl Fn(&Arc<GeneratorSet>) -> Result<Vec<Element>>,
    ) -> Result<Cdga> {
        let gens = self.generators().extended(new.iter().map(|(n, d)| (n.clone(), *d)))?;
        let mut diffs = self
            .differential
            .values
            .iter()
            .map(|v| v.embed(&gens))
            .collect::<Result<Vec<_>>>()?;
        diffs.extend(images(&gens)?);
        Cdga::new(&gens, diffs)
    }
}

impl fmt::Display for Cdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators")?;
        for g in self.generators().generators() {
            writeln!(f, "  {} : {}", g.name, g.degree)?;
        }
        writeln!(f, "d")?;
        for (i, v) in self.differential.values.iter().enumerate() {
            if !v.is_zero() {
                writeln!(f, "  {} -> {}", self.generators().name(i), v)?;
            }
        }
        Ok(())
    }
}

/// Graded pieces with explicit per-degree bases inside a free CDGA.
pub trait Complex {
    /// The free CDGA everything lives in.
    fn cdga(&self) -> &Cdga;
    /// Highest degree considered; `None` when unbounded.
    fn top(&self) -> Option<usize>;
    fn dim(&self, k: usize) -> usize;
    fn basis(&self, k: usize) -> Vec<Element>;
    /// Coordinates of a degree-`k` element in `basis(k)`, or `None` if it is
    /// outside the span.
    fn coordinates(&self, k: usize, e: &Element) -> Option<SparseVec>;
    fn element(&self, k: usize, v: &SparseVec) -> Element;
}

impl Complex for Cdga {
    fn cdga(&self) -> &Cdga {
        self
    }

    fn top(&self) -> Option<usize> {
        self.generators().top_degree()
    }

    fn dim(&self, k: usize) -> usize {
        self.generators().basis(k).len()
    }

    fn basis(&self, k: usize) -> Vec<Element> {
        let gens = self.generators();
        gens.basis(k)
            .monomials
            .iter()
            .map(|m| Element::from_monomial(gens, m.clone(), int(1)))
            .collect()
    }

    fn coordinates(&self, k: usize, e: &Element) -> Option<SparseVec> {
        if !GeneratorSet::same(e.generators(), self.generators()) {
            return None;
        }
        e.coordinates(k)
    }

    fn element(&self, k: usize, v: &SparseVec) -> Element {
        Element::from_coordinates(self.generators(), k, v)
    }
}

/// A d-stable graded subspace of a free CDGA given by per-degree bases,
/// taken to vanish above `top`.
#[derive(Debug, Clone)]
pub struct SubCdga {
    ambient: Arc<Cdga>,
    top: usize,
    bases: Vec<Vec<Element>>,
    solvers: Vec<Echelon>,
}

impl SubCdga {
    /// Validates homogeneity, independence, the unit in degree 0 and
    /// d-stability. When the ambient continues past `top`, the images of
    /// degree-`top` elements are not checked.
    pub fn new(ambient: Arc<Cdga>, mut bases: Vec<Vec<Element>>, top: usize) -> Result<Self> {
        if bases.len() > top + 1 {
            if bases[top + 1..].iter().any(|b| !b.is_empty()) {
                return Err(Error::Precondition(format!(
                    "basis elements listed above the top degree {top}"
                )));
            }
            bases.truncate(top + 1);
        }
        bases.resize(top + 1, Vec::new());
        let gens = ambient.generators().clone();
        let mut solvers = Vec::with_capacity(top + 1);
        for (k, basis) in bases.iter().enumerate() {
            let mut ech = Echelon::new(true);
            for (j, b) in basis.iter().enumerate() {
                if !GeneratorSet::same(b.generators(), &gens) {
                    return Err(Error::MismatchedGenerators);
                }
                if b.is_zero() || !b.is_homogeneous_of(k) {
                    return Err(Error::NotHomogeneous {
                        element: b.to_string(),
                        expected: k as i64,
                    });
                }
                let v = b.coordinates(k).expect("homogeneous");
                if ech.insert_tagged(v, j).is_some() {
                    return Err(Error::DependentBasis(k));
                }
            }
            solvers.push(ech);
        }
        if !solvers[0].contains(&SparseVec::unit(0)) {
            return Err(Error::Precondition("degree-0 basis must contain the unit".into()));
        }
        let sub = Self {
            ambient,
            top,
            bases,
            solvers,
        };
        sub.check_d_stable()?;
        Ok(sub)
    }

    fn check_d_stable(&self) -> Result<()> {
        // at `top` itself the image is only visible when the ambient ends there
        let truncated = self.ambient.top().is_none_or(|t| t > self.top);
        let checked_top = if truncated {
            self.top.saturating_sub(1)
        } else {
            self.top
        };
        for k in 0..=checked_top.min(self.top) {
            for b in &self.bases[k] {
                let db = self.ambient.apply_differential(b);
                let inside = if db.is_zero() {
                    true
                } else if k + 1 > self.top {
                    false
                } else {
                    self.coordinates(k + 1, &db).is_some()
                };
                if !inside {
                    return Err(Error::NotDStable {
                        element: b.to_string(),
                        image: db.to_string(),
                        degree: k + 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses `basis[k] = [e1, e2, ...]` lines over `ambient`.
    pub fn parse(ambient: Arc<Cdga>, text: &str, top: Option<usize>) -> Result<Self> {
        let gens = ambient.generators().clone();
        let mut bases: Vec<Vec<Element>> = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `basis[k] = [...]`, got `{line}`")))?;
            let k: usize = lhs
                .trim()
                .strip_prefix("basis[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad basis header `{}`", lhs.trim())))?;
            let list = rhs
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected a bracketed list in `{line}`")))?;
            if bases.len() <= k {
                bases.resize(k + 1, Vec::new());
            }
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                bases[k].push(Element::parse(&gens, item)?);
            }
        }
        let top = match top.or(ambient.top()) {
            Some(t) => t,
            None => bases.len().saturating_sub(1),
        };
        Self::new(ambient, bases, top)
    }

    pub fn ambient(&self) -> &Arc<Cdga> {
        &self.ambient
    }

    pub fn top_degree(&self) -> usize {
        self.top
    }

    pub fn bases(&self) -> &[Vec<Element>] {
        &self.bases
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, e: &Element) -> bool {
        (0..=self.top).all(|k| {
            let part = e.homogeneous_part(k);
            part.is_zero() || self.coordinates(k, &part).is_some()
        }) && e.terms().all(|(m, _)| m.degree() <= self.top)
    }

    /// Checks that all pairwise products of basis elements stay inside.
    pub fn check_product_closed(&self) -> Result<()> {
        for i in 0..=self.top {
            for j in i..=self.top - i {
                for a in &self.bases[i] {
                    for b in &self.bases[j] {
                        let p = a * b;
                        if !p.is_zero() && self.coordinates(i + j, &p).is_none() {
                            return Err(Error::NotProductClosed {
                                left: a.to_string(),
                                right: b.to_string(),
                                product: p.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl Complex for SubCdga {
    fn cdga(&self) -> &Cdga {
        &self.ambient
    }

    fn top(&self) -> Option<usize> {
        Some(self.top)
    }

    fn dim(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    fn basis(&self, k: usize) -> Vec<Element> {
        self.bases.get(k).cloned().unwrap_or_default()
    }

    fn coordinates(&self, k: usize, e: &Element) -> Option<SparseVec> {
        if e.is_zero() {
            return Some(SparseVec::new());
        }
        let solver = self.solvers.get(k)?;
        let v = self.ambient.coordinates(k, e)?;
        solver.express(&v)
    }

    fn element(&self, k: usize, v: &SparseVec) -> Element {
        let mut out = Element::zero(self.ambient.generators());
        for (j, c) in v.entries() {
            out += &self.bases[k][*j].scaled(c);
        }
        out
    }
}

impl fmt::Display for SubCdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.bases.iter().enumerate() {
            let items: Vec<String> = b.iter().map(Element::to_string).collect();
            writeln!(f, "basis[{k}] = [{}]", items.join(", "))?;
        }
        Ok(())
    }
}

/// Either a free CDGA or a sub-CDGA of one.
#[derive(Debug, Clone)]
pub enum Algebra {
    Free(Arc<Cdga>),
    Sub(Arc<SubCdga>),
}

impl From<Cdga> for Algebra {
    fn from(c: Cdga) -> Self {
        Algebra::Free(Arc::new(c))
    }
}

impl From<Arc<Cdga>> for Algebra {
    fn from(c: Arc<Cdga>) -> Self {
        Algebra::Free(c)
    }
}

impl From<SubCdga> for Algebra {
    fn from(s: SubCdga) -> Self {
        Algebra::Sub(Arc::new(s))
    }
}

impl From<Arc<SubCdga>> for Algebra {
    fn from(s: Arc<SubCdga>) -> Self {
        Algebra::Sub(s)
    }
}

impl Algebra {
    fn inner(&self) -> &dyn Complex {
        match self {
            Algebra::Free(c) => c.as_ref(),
            Algebra::Sub(s) => s.as_ref(),
        }
    }

    pub fn ambient(&self) -> Arc<Cdga> {
        match self {
            Algebra::Free(c) => c.clone(),
            Algebra::Sub(s) => s.ambient.clone(),
        }
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        self.cdga().generators()
    }

    /// Top degree, or `Error::TopRequired` when unbounded.
    pub fn require_top(&self, top: Option<usize>) -> Result<usize> {
        top.or(self.top()).ok_or(Error::TopRequired)
    }

    pub fn contains(&self, e: &Element) -> bool {
        match self {
            Algebra::Free(c) => GeneratorSet::same(e.generators(), c.generators()),
            Algebra::Sub(s) => s.contains(e),
        }
    }

    pub fn has_zero_differential(&self) -> bool {
        let d = self.cdga();
        match self {
            Algebra::Free(c) => c.has_zero_differential(),
            Algebra::Sub(s) => s.bases.iter().flatten().all(|b| d.apply_differential(b).is_zero()),
        }
    }
}

impl Complex for Algebra {
    fn cdga(&self) -> &Cdga {
        self.inner().cdga()
    }
    fn top(&self) -> Option<usize> {
        self.inner().top()
    }
    fn dim(&self, k: usize) -> usize {
        self.inner().dim(k)
    }
    fn basis(&self, k: usize) -> Vec<Element> {
        self.inner().basis(k)
    }
    fn coordinates(&self, k: usize, e: &Element) -> Option<SparseVec> {
        self.inner().coordinates(k, e)
    }
    fn element(&self, k: usize, v: &SparseVec) -> Element {
        self.inner().element(k, v)
    }
}

/// Joint kernel of derivations inside `source`, degree by degree up to
/// `top`. Each derivation must commute with d.
pub fn kernel_subcdga(source: &Algebra, ds: &[Derivation], top: Option<usize>) -> Result<SubCdga> {
    let ambient = source.ambient();
    let top = source.require_top(top)?;
    let d = ambient.differential();
    for (n, der) in ds.iter().enumerate() {
        let c = der.graded_commutator(d)?;
        if let Some(i) = c.first_nonzero() {
            return Err(Error::NotCommutingWithD {
                name: format!("D{}", n + 1),
                generator: ambient.generators().name(i).to_string(),
                residue: c.value(i).to_string(),
            });
        }
    }
    let mut bases = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let basis = source.basis(k);
        let mut cols = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut col = Vec::new();
            let mut offset = 0;
            for der in ds {
                let target = k as i64 + der.degree();
                let dim = if target < 0 { 0 } else { ambient.dim(target as usize) };
                if target >= 0 {
                    let img = der.apply(b);
                    let v = img
                        .coordinates(target as usize)
                        .ok_or_else(|| Error::Internal("derivation changed degree".into()))?;
                    col.extend(v.entries().iter().map(|(i, x)| (i + offset, x.clone())));
                }
                offset += dim;
            }
            cols.push(SparseVec::from_entries(col));
        }
        let m = crate::linalg::Matrix { rows: 0, cols };
        bases.push(m.kernel().iter().map(|v| source.element(k, v)).collect::<Vec<_>>());
    }
    SubCdga::new(ambient, bases, top)
}

/// An abelian operation: degree −1 derivations i_1..i_n with
/// `[i_a, i_b] = 0` for all `a, b` (including `i_a² = 0`).
#[derive(Debug, Clone)]
pub struct ContractionFamily {
    cdga: Arc<Cdga>,
    contractions: Vec<Derivation>,
}

impl ContractionFamily {
    pub fn new(cdga: Arc<Cdga>, contractions: Vec<Derivation>) -> Result<Self> {
        for (a, ia) in contractions.iter().enumerate() {
            if ia.degree() != -1 || !GeneratorSet::same(ia.generators(), cdga.generators()) {
                return Err(Error::Precondition(format!(
                    "contraction {} must be a degree -1 derivation of the algebra",
                    a + 1
                )));
            }
            for ib in &contractions[a..] {
                let c = ia.graded_commutator(ib)?;
                if let Some(i) = c.first_nonzero() {
                    return Err(Error::Precondition(format!(
                        "contractions do not anticommute on `{}`: {}",
                        cdga.generators().name(i),
                        c.value(i)
                    )));
                }
            }
        }
        Ok(Self { cdga, contractions })
    }

    pub fn len(&self) -> usize {
        self.contractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contractions.is_empty()
    }

    pub fn contraction(&self, j: usize) -> &Derivation {
        &self.contractions[j]
    }

    pub fn contractions(&self) -> &[Derivation] {
        &self.contractions
    }

    /// `L_j = [i_j, d]`.
    pub fn lie_derivative(&self, j: usize) -> Derivation {
        self.contractions[j]
            .graded_commutator(self.cdga.differential())
            .expect("same generator set")
    }

    /// Whether every Lie derivative vanishes on the generators.
    pub fn is_invariant(&self) -> bool {
        (0..self.len()).all(|j| self.lie_derivative(j).is_zero())
    }

    /// A_L: the joint kernel of all Lie derivatives.
    pub fn invariant_subcdga(&self, top: Option<usize>) -> Result<SubCdga> {
        let ls: Vec<Derivation> = (0..self.len()).map(|j| self.lie_derivative(j)).collect();
        kernel_subcdga(&Algebra::Free(self.cdga.clone()), &ls, top)
    }

    /// A_{i,L}: the joint kernel of all contractions and Lie derivatives.
    pub fn basic_subcdga(&self, top: Option<usize>) -> Result<SubCdga> {
        let invariant = self.invariant_subcdga(top)?;
        let top = invariant.top_degree();
        kernel_subcdga(&Algebra::Sub(Arc::new(invariant)), &self.contractions, Some(top))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> Arc<Cdga> {
        let g = GeneratorSet::exterior(["p", "q", "h"]).unwrap();
        Arc::new(Cdga::from_named(&g, &[("h", "-p*q")]).unwrap())
    }

    #[test]
    fn differential_examples() {
        let a = heis();
        assert_eq!(a.apply_differential(&a.element("h").unwrap()).to_string(), "-p*q");
        assert!(a.apply_differential(&a.element("p*h").unwrap()).is_zero());
        assert!(a.apply_differential(&a.element("1").unwrap()).is_zero());
        assert!(a.check_d_squared().is_ok());
    }

    #[test]
    fn d_squared_violation_names_generator() {
        let g = GeneratorSet::exterior(["x", "y", "w"]).unwrap();
        let bad = Cdga::from_named(&g, &[("w", "x*y"), ("x", "x*w")]).unwrap();
        match bad.check_d_squared() {
            Err(Error::DSquared { generator, .. }) => assert_eq!(generator, "w"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ill_typed_differential_rejected() {
        let g = GeneratorSet::exterior(["x", "y"]).unwrap();
        assert!(matches!(
            Cdga::from_named(&g, &[("x", "y"), ("y", "x")]),
            Err(Error::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn contraction_examples() {
        let a = heis();
        let ih = Derivation::dual_contraction(a.generators(), "h").unwrap();
        assert_eq!(ih.apply(&a.element("h").unwrap()).to_string(), "1");
        assert_eq!(ih.apply(&a.element("p*h").unwrap()).to_string(), "-p");
        assert!(ih.apply(&a.element("p*q").unwrap()).is_zero());
    }

    #[test]
    fn commutator_examples() {
        let a = heis();
        let ih = Derivation::dual_contraction(a.generators(), "h").unwrap();
        let lh = ih.graded_commutator(a.differential()).unwrap();
        assert_eq!(lh.degree(), 0);
        assert!(lh.is_zero());
        assert!(ih.graded_commutator(&ih).unwrap().is_zero());
        let d = a.differential();
        assert!(d.graded_commutator(d).unwrap().is_zero());
        // i_p does not commute with d: [i_p, d](h) = i_p(-p q) = -q
        let ip = Derivation::dual_contraction(a.generators(), "p").unwrap();
        let lp = ip.graded_commutator(d).unwrap();
        assert_eq!(lp.value(2).to_string(), "-q");
    }

    #[test]
    fn make_subcdga_examples() {
        let a = heis();
        let ok = SubCdga::parse(a.clone(), "basis[0] = [1]\nbasis[1] = [p]", None).unwrap();
        assert_eq!(ok.dims(), vec![1, 1, 0, 0]);
        let bad = SubCdga::parse(a.clone(), "basis[0] = [1]\nbasis[1] = [h]", None);
        assert!(matches!(bad, Err(Error::NotDStable { .. })));
        let no_unit = SubCdga::parse(a.clone(), "basis[1] = [p]", None);
        assert!(no_unit.is_err());
        let dependent = SubCdga::parse(a, "basis[0] = [1]\nbasis[1] = [p, 2*p]", None);
        assert_eq!(dependent.unwrap_err(), Error::DependentBasis(1));
    }

    #[test]
    fn kernel_of_central_contraction() {
        let a = heis();
        let ih = Derivation::dual_contraction(a.generators(), "h").unwrap();
        let k = kernel_subcdga(&Algebra::Free(a.clone()), &[ih], None).unwrap();
        assert_eq!(
            k.to_string(),
            "basis[0] = [1]\nbasis[1] = [p, q]\nbasis[2] = [p*q]\nbasis[3] = []\n"
        );
        let full = kernel_subcdga(&Algebra::Free(a.clone()), &[], None).unwrap();
        assert_eq!(full.dims(), vec![1, 3, 3, 1]);
        let ip = Derivation::dual_contraction(a.generators(), "p").unwrap();
        assert!(matches!(
            kernel_subcdga(&Algebra::Free(a), &[ip], None),
            Err(Error::NotCommutingWithD { .. })
        ));
    }

    #[test]
    fn abelian_kernel() {
        let g = GeneratorSet::exterior(["e1", "e2"]).unwrap();
        let a = Arc::new(Cdga::with_zero_differential(&g));
        let i1 = Derivation::dual_contraction(&g, "e1").unwrap();
        let k = kernel_subcdga(&Algebra::Free(a), &[i1], None).unwrap();
        assert_eq!(k.to_string(), "basis[0] = [1]\nbasis[1] = [e2]\nbasis[2] = []\n");
    }

    #[test]
    fn contraction_family_on_heisenberg_plus_line() {
        let g = GeneratorSet::exterior(["p", "q", "h", "u"]).unwrap();
        let a = Arc::new(Cdga::from_named(&g, &[("h", "-p*q")]).unwrap());
        let fam = ContractionFamily::new(
            a.clone(),
            vec![
                Derivation::dual_contraction(&g, "h").unwrap(),
                Derivation::dual_contraction(&g, "u").unwrap(),
            ],
        )
        .unwrap();
        assert!(fam.is_invariant());
        assert_eq!(fam.invariant_subcdga(None).unwrap().dims(), vec![1, 4, 6, 4, 1]);
        assert_eq!(fam.basic_subcdga(None).unwrap().dims(), vec![1, 2, 1, 0, 0]);
    }

    #[test]
    fn even_generator_leibniz() {
        let g = GeneratorSet::new([("x", 1), ("z", 2), ("w", 3)]).unwrap();
        let a = Cdga::from_named(&g, &[("w", "z^2")]).unwrap();
        assert!(a.check_d_squared().is_ok());
        let z3w = a.element("z^3*w").unwrap();
        assert_eq!(a.apply_differential(&z3w).to_string(), "z^5");
    }
}

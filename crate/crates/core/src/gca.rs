//! Free graded-commutative algebras ΛV over ℚ.
//!
//! An [`Element`] is a finite ℚ-combination of [`Monomial`]s; a monomial is an
//! exponent vector over a [`GeneratorSet`], with exponents of odd generators
//! restricted to 0 or 1. Monomials are always written with generators in
//! ascending index order, and every sign produced by reordering factors is
//! folded into the coefficient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, parse_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Ordered generators of ΛV. The position in the list is the identity.
#[derive(Debug)]
pub struct GeneratorSet {
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
    bases: Mutex<HashMap<usize, Arc<DegreeBasis>>>,
}

impl PartialEq for GeneratorSet {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for GeneratorSet {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl GeneratorSet {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, usize)>) -> Result<Arc<Self>> {
        let generators: Vec<Generator> = gens
            .into_iter()
            .map(|(name, degree)| Generator {
                name: name.into(),
                degree,
            })
            .collect();
        let mut by_name = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::InvalidGenerators(format!("generator `{}` has degree 0", g.name)));
            }
            if !valid_name(&g.name) {
                return Err(Error::InvalidGenerators(format!(
                    "`{}` is not a valid generator name",
                    g.name
                )));
            }
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidGenerators(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(Arc::new(Self {
            generators,
            by_name,
            bases: Mutex::new(HashMap::new()),
        }))
    }

    /// `n` odd generators of degree 1.
    pub fn exterior<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        Self::new(names.into_iter().map(|n| (n, 1)))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn degree(&self, i: usize) -> usize {
        self.generators[i].degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn all_odd(&self) -> bool {
        self.generators.iter().all(Generator::is_odd)
    }

    /// Highest degree with a nonzero monomial, finite only when every
    /// generator is odd.
    pub fn top_degree(&self) -> Option<usize> {
        self.all_odd().then(|| self.generators.iter().map(|g| g.degree).sum())
    }

    /// Appends generators, keeping the existing ones as a prefix.
    pub fn extended<S: Into<String>>(&self, extra: impl IntoIterator<Item = (S, usize)>) -> Result<Arc<Self>> {
        let mut all: Vec<(String, usize)> = self.generators.iter().map(|g| (g.name.clone(), g.degree)).collect();
        for (name, degree) in extra {
            let name = name.into();
            if self.by_name.contains_key(&name) {
                return Err(Error::NameCollision(name));
            }
            all.push((name, degree));
        }
        Self::new(all)
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// Monomials of degree exactly `k`, cached.
    pub fn basis(&self, k: usize) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.lock().unwrap().get(&k) {
            return b.clone();
        }
        let monomials = degree_basis(self, k);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let b = Arc::new(DegreeBasis { monomials, index });
        self.bases.lock().unwrap().insert(k, b.clone());
        b
    }
}

/// Monomials of one degree with a reverse index.
#[derive(Debug)]
pub struct DegreeBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Exponent vector with its cached total degree.
///
/// Ordered by degree, then by exponent vector descending, so that within a
/// degree `x*y` precedes `x*z` precedes `y*z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: usize,
    exps: Vec<u32>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn unit(gens: &GeneratorSet) -> Self {
        Self {
            degree: 0,
            exps: vec![0; gens.len()],
        }
    }

    pub fn generator(gens: &GeneratorSet, i: usize) -> Self {
        let mut exps = vec![0; gens.len()];
        exps[i] = 1;
        Self {
            degree: gens.degree(i),
            exps,
        }
    }

    pub fn from_exponents(gens: &GeneratorSet, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != gens.len() {
            return Err(Error::MismatchedGenerators);
        }
        let mut degree = 0;
        for (i, &e) in exps.iter().enumerate() {
            if e > 1 && gens.get(i).is_odd() {
                return Err(Error::InvalidGenerators(format!(
                    "odd generator `{}` with exponent {e}",
                    gens.name(i)
                )));
            }
            degree += e as usize * gens.degree(i);
        }
        Ok(Self { degree, exps })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_unit(&self) -> bool {
        self.degree == 0
    }

    /// The same monomial with generator `i`'s exponent lowered by one.
    pub(crate) fn without_one(&self, gens: &GeneratorSet, i: usize) -> Self {
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Self {
            degree: self.degree - gens.degree(i),
            exps,
        }
    }

    /// Splits into the factors before generator `i` and those after it.
    pub(crate) fn split_at(&self, gens: &GeneratorSet, i: usize) -> (Self, Self) {
        let mut left = vec![0; self.exps.len()];
        let mut right = vec![0; self.exps.len()];
        left[..i].copy_from_slice(&self.exps[..i]);
        right[i + 1..].copy_from_slice(&self.exps[i + 1..]);
        let deg = |e: &[u32]| e.iter().enumerate().map(|(j, &x)| x as usize * gens.degree(j)).sum();
        (
            Self {
                degree: deg(&left),
                exps: left,
            },
            Self {
                degree: deg(&right),
                exps: right,
            },
        )
    }

    fn write(&self, gens: &GeneratorSet, f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", gens.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        let mut s = String::new();
        self.write(gens, &mut s).unwrap();
        s
    }
}

/// Koszul product of two canonical monomials: `None` when an odd generator
/// occurs in both, otherwise `(negative, m1·m2)`.
///
/// The sign is the parity of the number of pairs (odd generator `j` of `m2`,
/// odd generator `i` of `m1`) with `i > j`: each factor of `m2` travels left
/// past exactly those factors of `m1`.
pub fn koszul_product(gens: &GeneratorSet, m1: &Monomial, m2: &Monomial) -> Option<(bool, Monomial)> {
    debug_assert_eq!(m1.exps.len(), gens.len());
    debug_assert_eq!(m2.exps.len(), gens.len());
    let mut m1_odd_remaining: usize = gens
        .generators
        .iter()
        .zip(&m1.exps)
        .filter(|(g, &e)| g.is_odd() && e == 1)
        .count();
    let mut parity = 0usize;
    let mut exps = Vec::with_capacity(m1.exps.len());
    for (i, g) in gens.generators.iter().enumerate() {
        let (a, b) = (m1.exps[i], m2.exps[i]);
        if g.is_odd() {
            if a == 1 && b == 1 {
                return None;
            }
            if a == 1 {
                m1_odd_remaining -= 1;
            }
            if b == 1 {
                parity += m1_odd_remaining;
            }
        }
        exps.push(a + b);
    }
    Some((
        parity % 2 == 1,
        Monomial {
            degree: m1.degree + m2.degree,
            exps,
        },
    ))
}

/// All monomials of degree `k` in canonical order.
pub fn degree_basis(gens: &GeneratorSet, k: usize) -> Vec<Monomial> {
    fn rec(gens: &GeneratorSet, i: usize, left: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>, k: usize) {
        if i == gens.len() {
            if left == 0 {
                out.push(Monomial {
                    degree: k,
                    exps: exps.clone(),
                });
            }
            return;
        }
        let d = gens.degree(i);
        let max = if gens.get(i).is_odd() {
            usize::from(left >= d)
        } else {
            left / d
        };
        for e in (0..=max).rev() {
            exps.push(e as u32);
            rec(gens, i + 1, left - e * d, exps, out, k);
            exps.pop();
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, k, &mut Vec::with_capacity(gens.len()), &mut out, k);
    out
}

/// An element of ΛV in canonical form: no zero coefficients are stored.
#[derive(Clone)]
pub struct Element {
    gens: Arc<GeneratorSet>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        GeneratorSet::same(&self.gens, &other.gens) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl Element {
    pub fn zero(gens: &Arc<GeneratorSet>) -> Self {
        Self {
            gens: gens.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(gens: &Arc<GeneratorSet>) -> Self {
        Self::from_monomial(gens, Monomial::unit(gens), Scalar::one())
    }

    pub fn scalar(gens: &Arc<GeneratorSet>, c: Scalar) -> Self {
        Self::from_monomial(gens, Monomial::unit(gens), c)
    }

    pub fn generator(gens: &Arc<GeneratorSet>, i: usize) -> Self {
        Self::from_monomial(gens, Monomial::generator(gens, i), Scalar::one())
    }

    /// Generator by name.
    pub fn var(gens: &Arc<GeneratorSet>, name: &str) -> Result<Self> {
        let i = gens
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Self::generator(gens, i))
    }

    pub fn from_monomial(gens: &Arc<GeneratorSet>, m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self {
            gens: gens.clone(),
            terms,
        }
    }

    pub fn from_terms(gens: &Arc<GeneratorSet>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut e = Self::zero(gens);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn generators(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// `Some(k)` if every term has degree `k`; the zero element is
    /// homogeneous of every degree and reports `None` here.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Self {
            gens: self.gens.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.gens);
        }
        Self {
            gens: self.gens.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        if !GeneratorSet::same(&self.gens, &other.gens) {
            return Err(Error::MismatchedGenerators);
        }
        let mut out = Element::zero(&self.gens);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = koszul_product(&self.gens, m1, m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        if !GeneratorSet::same(&self.gens, &other.gens) {
            return Err(Error::MismatchedGenerators);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Element {
        let mut acc = Element::one(&self.gens);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Re-expresses this element over another generator set containing
    /// generators of the same names and degrees.
    pub fn embed(&self, target: &Arc<GeneratorSet>) -> Result<Element> {
        if GeneratorSet::same(&self.gens, target) {
            return Ok(Element {
                gens: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let map: Vec<usize> = self
            .gens
            .generators()
            .iter()
            .map(|g| match target.index_of(&g.name) {
                Some(j) if target.degree(j) == g.degree => Ok(j),
                _ => Err(Error::UnknownGenerator(g.name.clone())),
            })
            .collect::<Result<_>>()?;
        // ascending source order need not stay ascending in the target, so
        // rebuild every monomial through the Koszul product
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Some((false, Monomial::unit(target)));
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.and_then(|(neg, a)| {
                        koszul_product(target, &a, &Monomial::generator(target, map[i])).map(|(n2, b)| (neg ^ n2, b))
                    });
                }
            }
            if let Some((neg, mm)) = acc {
                out.add_term(mm, if neg { -c.clone() } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// Coordinates in the monomial basis of degree `k`; `None` if some term
    /// has another degree.
    pub fn coordinates(&self, k: usize) -> Option<crate::linalg::SparseVec> {
        let basis = self.gens.basis(k);
        let mut entries = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            entries.push((basis.position(m)?, c.clone()));
        }
        Some(crate::linalg::SparseVec::from_entries(entries))
    }

    pub fn from_coordinates(gens: &Arc<GeneratorSet>, k: usize, v: &crate::linalg::SparseVec) -> Self {
        let basis = gens.basis(k);
        Self::from_terms(
            gens,
            v.entries()
                .iter()
                .map(|(i, c)| (basis.monomials[*i].clone(), c.clone())),
        )
    }

    /// Parses the textual syntax `c*g1^e1*g2^e2 + ...`. Factors may appear in
    /// any order; the Koszul sign of sorting them is applied.
    pub fn parse(gens: &Arc<GeneratorSet>, s: &str) -> Result<Element> {
        parse_element(gens, s)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = crate::scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_unit() {
                write!(f, "{}", format_scalar(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_scalar(&abs))?;
                }
                m.write(&self.gens, f)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &'a Element) -> Element {
        self.try_add(rhs)
            .expect("adding elements over different generator sets")
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert!(
            GeneratorSet::same(&self.gens, &rhs.gens),
            "adding elements over different generator sets"
        );
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &'a Element) -> Element {
        self + &(-rhs)
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            gens: self.gens.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &'a Element) -> Element {
        self.try_mul(rhs)
            .expect("multiplying elements over different generator sets")
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

// ---------------------------------------------------------------------------
// parsing

fn parse_element(gens: &Arc<GeneratorSet>, s: &str) -> Result<Element> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let mut out = Element::zero(gens);
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let negative = match rest.as_bytes()[0] {
            b'+' => {
                rest = &rest[1..];
                false
            }
            b'-' => {
                rest = &rest[1..];
                true
            }
            _ if first => false,
            _ => return Err(Error::Parse(format!("expected `+` or `-` in `{s}`"))),
        };
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in `{s}`")));
        }
        let mut t = parse_term(gens, term)?;
        if negative {
            t = -t;
        }
        out += &t;
        rest = &rest[end..];
    }
    Ok(out)
}

fn parse_term(gens: &Arc<GeneratorSet>, term: &str) -> Result<Element> {
    let mut acc = Element::one(gens);
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if factor.starts_with(|c: char| c.is_ascii_digit()) {
            acc = acc.scaled(&parse_scalar(factor)?);
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        let g = Element::var(gens, name)?;
        acc = &acc * &g.pow(exp as usize);
    }
    Ok(acc)
}

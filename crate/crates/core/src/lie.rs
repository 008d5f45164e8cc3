//! Finite-dimensional Lie algebras over ℚ by structure constants, their
//! nilpotency data and Chevalley–Eilenberg CDGAs.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::cdga::Cdga;
use crate::error::{Error, Result};
use crate::gca::{Element, GeneratorSet, Monomial};
use crate::linalg::{dense_rank, inverse, Matrix, SparseVec};
use crate::scalar::{format_scalar, Scalar};

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`, stored densely as `m³` constants.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    constants: Vec<Scalar>,
    labels: Vec<String>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.constants == other.constants
    }
}

impl Eq for LieAlgebra {}

fn default_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    /// Builds from `(i, j, k, c)` entries meaning `c·e_k` is a term of
    /// `[e_i, e_j]` (0-based). Entries are antisymmetrized; a bracket given
    /// twice must agree up to sign.
    pub fn from_brackets(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let labels = labels.unwrap_or_else(|| default_labels(dim));
        if labels.len() != dim {
            return Err(Error::InvalidLieAlgebra(format!(
                "{} labels for dimension {dim}",
                labels.len()
            )));
        }
        let mut seen: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut given: BTreeMap<(usize, usize, bool), BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidLieAlgebra(format!(
                    "index out of range in [e{}, e{}] -> e{}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if c.is_zero() {
                continue;
            }
            if i == j {
                return Err(Error::InvalidLieAlgebra(format!("[e{0}, e{0}] must vanish", i + 1)));
            }
            let entry = given.entry((i.min(j), i.max(j), i > j)).or_default();
            *entry.entry(k).or_insert_with(Scalar::zero) += c;
        }
        for ((a, b, flipped), terms) in given {
            let oriented: BTreeMap<usize, Scalar> = terms
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, if flipped { -c } else { c }))
                .collect();
            match seen.get(&(a, b)) {
                Some(prev) if *prev != oriented => {
                    return Err(Error::InvalidLieAlgebra(format!(
                        "inconsistent brackets for [e{}, e{}]",
                        a + 1,
                        b + 1
                    )));
                }
                _ => {
                    seen.insert((a, b), oriented);
                }
            }
        }
        let mut constants = vec![Scalar::zero(); dim * dim * dim];
        for ((a, b), terms) in seen {
            for (k, c) in terms {
                constants[(a * dim + b) * dim + k] = c.clone();
                constants[(b * dim + a) * dim + k] = -c;
            }
        }
        Ok(Self { dim, constants, labels })
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            constants: vec![Scalar::zero(); dim * dim * dim],
            labels: default_labels(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::InvalidLieAlgebra(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(Zero::is_zero)
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let m = self.dim;
        let mut out = vec![Scalar::zero(); m];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let base = (i * m + j) * m;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.constants[base + k];
                    if !c.is_zero() {
                        *o += xi * yj * c;
                    }
                }
            }
        }
        out
    }

    fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        let base = (i * self.dim + j) * self.dim;
        &self.constants[base..base + self.dim]
    }

    /// Exact Jacobi check over all triples `a < b < c`.
    pub fn check_jacobi(&self) -> Result<()> {
        let m = self.dim;
        let unit = |i: usize| {
            let mut v = vec![Scalar::zero(); m];
            v[i] = Scalar::one();
            v
        };
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let t1 = self.bracket(&unit(a), self.basis_bracket(b, c));
                    let t2 = self.bracket(&unit(b), self.basis_bracket(c, a));
                    let t3 = self.bracket(&unit(c), self.basis_bracket(a, b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Err(Error::Jacobi(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Span of `[x, y]` for `x` in `a` and `y` in `b`.
    fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in &a.basis {
            for y in &b.basis {
                vecs.push(self.bracket(x, y));
            }
        }
        Subspace::span(self.dim, vecs)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::span(
            self.dim,
            (0..self.dim).map(|i| {
                let mut v = vec![Scalar::zero(); self.dim];
                v[i] = Scalar::one();
                v
            }),
        )
    }

    /// `𝔤 ⊇ [𝔤,𝔤] ⊇ [𝔤,[𝔤,𝔤]] ⊇ …`, stopping at the first repeated
    /// dimension or at 0.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let last = series.last().unwrap();
            if last.dim() == 0 {
                break;
            }
            let next = self.bracket_span(&g, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_none_or(|s| s.dim() == 0)
    }

    /// `([𝔤,𝔤], Z(𝔤))`.
    pub fn derived_and_center(&self) -> (Subspace, Subspace) {
        let g = self.whole();
        let derived = self.bracket_span(&g, &g);
        let m = self.dim;
        // column i stacks ad(e_i)(e_j) for all j
        let cols = (0..m)
            .map(|i| {
                SparseVec::from_entries(
                    (0..m)
                        .flat_map(|j| (0..m).map(move |k| (j, k)))
                        .map(|(j, k)| (j * m + k, self.constant(i, j, k).clone()))
                        .collect(),
                )
            })
            .collect();
        let ad = Matrix { rows: m * m, cols };
        let center = Subspace::span(m, ad.kernel().iter().map(|v| v.to_dense(m)));
        (derived, center)
    }

    /// `Some(l)` iff nilpotent with `dim [𝔤,𝔤] ≤ 1`; `l` is half the rank of
    /// the bracket form on the derived line.
    pub fn classify_heisenberg_type(&self) -> Result<Option<usize>> {
        self.check_jacobi()?;
        if !self.is_nilpotent() {
            return Ok(None);
        }
        let (derived, _) = self.derived_and_center();
        match derived.dim() {
            0 => Ok(Some(0)),
            1 => {
                let w = &derived.basis[0];
                let t = w.iter().position(|x| !x.is_zero()).expect("nonzero");
                let m = self.dim;
                let form: Vec<Vec<Scalar>> = (0..m)
                    .map(|i| (0..m).map(|j| self.constant(i, j, t) / &w[t]).collect())
                    .collect();
                let rank = dense_rank(&form);
                if rank % 2 == 1 {
                    return Err(Error::Internal(format!("skew form of odd rank {rank}")));
                }
                Ok(Some(rank / 2))
            }
            _ => Ok(None),
        }
    }

    /// `Λ𝔤*` with `dα^k = −Σ_{i<j} c[i][j][k] α^i α^j`; generators carry the
    /// basis labels. A Jacobi failure shows up as a stored d² failure.
    pub fn chevalley_eilenberg(&self) -> Result<Cdga> {
        let gens = GeneratorSet::exterior(self.labels.iter().cloned())?;
        let m = self.dim;
        let mut diffs = vec![Element::zero(&gens); m];
        for i in 0..m {
            for j in i + 1..m {
                let mut exps = vec![0u32; m];
                exps[i] = 1;
                exps[j] = 1;
                let mono = Monomial::from_exponents(&gens, exps)?;
                for (k, d) in diffs.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        d.add_term(mono.clone(), -c.clone());
                    }
                }
            }
        }
        Cdga::new(&gens, diffs)
    }

    /// Transports the constants to the basis given by the columns of `p`
    /// (`f_a = Σ_i p[i][a] e_i`). Labels are kept.
    pub fn change_basis(&self, p: &[Vec<Scalar>]) -> Result<Self> {
        let m = self.dim;
        if p.len() != m || p.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidLieAlgebra("basis change of the wrong size".into()));
        }
        let pinv = inverse(p)?;
        // tmp[a][b] = [f_a, f_b] in e-coordinates
        let mut tmp = vec![Scalar::zero(); m * m * m];
        for i in 0..m {
            for j in 0..m {
                let cij = self.basis_bracket(i, j);
                if cij.iter().all(Zero::is_zero) {
                    continue;
                }
                for a in (0..m).filter(|&a| !p[i][a].is_zero()) {
                    for b in (a + 1..m).filter(|&b| !p[j][b].is_zero()) {
                        let f = &p[i][a] * &p[j][b];
                        let base = (a * m + b) * m;
                        for (k, c) in cij.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            tmp[base + k] += &f * c;
                        }
                    }
                }
            }
        }
        let mut constants = vec![Scalar::zero(); m * m * m];
        for a in 0..m {
            for b in a + 1..m {
                let base = (a * m + b) * m;
                let v = &tmp[base..base + m];
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                for c in 0..m {
                    let x: Scalar = (0..m)
                        .filter(|&k| !v[k].is_zero() && !pinv[c][k].is_zero())
                        .map(|k| &pinv[c][k] * &v[k])
                        .sum();
                    constants[(b * m + a) * m + c] = -x.clone();
                    constants[base + c] = x;
                }
            }
        }
        Ok(Self {
            dim: m,
            constants,
            labels: self.labels.clone(),
        })
    }

    /// Nonzero brackets `[e_i, e_j]`, `i < j`, as `(i, j, [(k, c)])`.
    pub fn brackets(&self) -> Vec<Bracket> {
        let m = self.dim;
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let terms: Vec<(usize, Scalar)> = self
                    .basis_bracket(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                if !terms.is_empty() {
                    out.push((i, j, terms));
                }
            }
        }
        out
    }
}

/// `[e_i, e_j]` for `i < j` as its nonzero `(k, c_ij^k)` terms.
pub type Bracket = (usize, usize, Vec<(usize, Scalar)>);

/// `𝔥(1,l) ⊕ 𝔞_r` on `p1..pl, q1..ql, h, u1..ur` with `[p_i, q_i] = h`.
pub fn heisenberg_sum(l: usize, r: usize) -> LieAlgebra {
    let mut labels: Vec<String> = (1..=l).map(|i| format!("p{i}")).collect();
    labels.extend((1..=l).map(|i| format!("q{i}")));
    labels.push("h".into());
    labels.extend((1..=r).map(|i| format!("u{i}")));
    let entries = (0..l).map(|i| (i, l + i, 2 * l, Scalar::one()));
    LieAlgebra::from_brackets(2 * l + 1 + r, entries, Some(labels)).expect("valid preset")
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for (i, j, terms) in self.brackets() {
            let rhs: Vec<String> = terms
                .iter()
                .map(|(k, c)| format!("{}*e{}", format_scalar(c), k + 1))
                .collect();
            writeln!(f, "[{},{}] = {}", i + 1, j + 1, rhs.join(" + "))?;
        }
        Ok(())
    }
}

/// A subspace of ℚ^m with an ordered independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    /// Keeps the vectors that are independent of the earlier ones.
    pub fn span(ambient: usize, vecs: impl IntoIterator<Item = Vec<Scalar>>) -> Self {
        let mut ech = crate::linalg::Echelon::new(false);
        let mut basis = Vec::new();
        for v in vecs {
            if ech.insert(SparseVec::from_dense(&v)) {
                basis.push(v);
            }
        }
        Self { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut ech = crate::linalg::Echelon::new(false);
        for b in &self.basis {
            ech.insert(SparseVec::from_dense(b));
        }
        ech.contains(&SparseVec::from_dense(v))
    }
}

//! Per-degree cohomology over ℚ.
//!
//! For each degree `k` the image of `d_{k-1}` is put into an [`Echelon`]
//! first, then kernel vectors of `d_k` are offered in order; the ones that
//! raise the rank become the representatives. Any cocycle is then solved
//! against that echelon and its coordinates on the representatives are its
//! class.

use std::fmt;

use num_traits::{One, Zero};

use crate::cdga::{Algebra, Complex};
use crate::error::{Error, Result};
use crate::gca::Element;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::scalar::Scalar;

/// Matrix of `d` from degree `k` to degree `k + 1`, columns in `basis(k)`
/// order. Rows are coordinates in the source's degree-`k+1` basis, or in
/// the ambient monomial basis when `k + 1` lies above a sub-CDGA's top.
pub fn boundary_matrix(source: &Algebra, k: usize) -> Result<Matrix> {
    let cdga = source.cdga();
    let in_source = source.top().is_none_or(|t| k < t);
    let rows = if in_source { source.dim(k + 1) } else { cdga.dim(k + 1) };
    let cols = source
        .basis(k)
        .iter()
        .map(|b| {
            let db = cdga.apply_differential(b);
            let v = if in_source {
                source.coordinates(k + 1, &db)
            } else {
                cdga.coordinates(k + 1, &db)
            };
            v.ok_or_else(|| Error::NotDStable {
                element: b.to_string(),
                image: db.to_string(),
                degree: k + 1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix { rows, cols })
}

#[derive(Debug, Clone)]
struct DegreeData {
    betti: usize,
    kernel_dim: usize,
    image_rank: usize,
    representatives: Vec<Element>,
    solver: Echelon,
    rep_offset: usize,
}

/// Cohomology of a CDGA or sub-CDGA in degrees `0..=top`.
#[derive(Debug, Clone)]
pub struct CohomologyData {
    source: Algebra,
    degrees: Vec<DegreeData>,
}

/// A class given by coordinates on the representatives of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    degree: usize,
    coords: Vec<Scalar>,
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coordinates(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Computes H^k for `k ≤ top` (default: the source's top degree).
pub fn cohomology(source: impl Into<Algebra>, top: Option<usize>) -> Result<CohomologyData> {
    let source = source.into();
    source.cdga().check_d_squared()?;
    let top = source.require_top(top)?;

    // one elimination per d_k: dependent columns give ker d_k, and the
    // echelon itself is the image inside degree k + 1
    let eliminations = (0..=top)
        .map(|k| -> Result<(Echelon, Vec<SparseVec>)> {
            let d_k = boundary_matrix(&source, k)?;
            let mut ech = Echelon::new(true);
            let mut kernel = Vec::new();
            for (j, c) in d_k.cols.into_iter().enumerate() {
                if let Some(combo) = ech.insert_tagged(c, j) {
                    let mut z = SparseVec::unit(j);
                    z.axpy(&-Scalar::one(), &combo);
                    kernel.push(z);
                }
            }
            Ok((ech, kernel))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut degrees = Vec::with_capacity(top + 1);
    let mut image: Option<(Echelon, usize)> = None;
    for (k, (ech, kernel)) in eliminations.into_iter().enumerate() {
        let (mut solver, rep_offset) = image.take().unwrap_or_else(|| (Echelon::new(true), 0));
        let image_rank = solver.rank();
        let mut representatives = Vec::new();
        for z in &kernel {
            if solver
                .insert_tagged(z.clone(), rep_offset + representatives.len())
                .is_none()
            {
                representatives.push(source.element(k, z));
            }
        }
        image = Some((ech, source.dim(k)));
        degrees.push(DegreeData {
            betti: representatives.len(),
            kernel_dim: kernel.len(),
            image_rank,
            representatives,
            solver,
            rep_offset,
        });
    }
    Ok(CohomologyData { source, degrees })
}

impl CohomologyData {
    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn top(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn betti(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.betti)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn kernel_dim(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.kernel_dim)
    }

    pub fn image_rank(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.image_rank)
    }

    pub fn representatives(&self, k: usize) -> &[Element] {
        self.degrees.get(k).map_or(&[], |d| &d.representatives)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(k, d)| if k % 2 == 0 { d.betti as i64 } else { -(d.betti as i64) })
            .sum()
    }

    pub fn zero_class(&self, k: usize) -> CohomologyClass {
        CohomologyClass {
            degree: k,
            coords: vec![Scalar::zero(); self.betti(k)],
        }
    }

    /// Class of the `j`-th representative of degree `k`.
    pub fn basis_class(&self, k: usize, j: usize) -> CohomologyClass {
        let mut c = self.zero_class(k);
        c.coords[j] = Scalar::from_integer(1.into());
        c
    }

    /// The class of a cocycle; the zero element gives the zero class of
    /// degree 0.
    pub fn class_of(&self, z: &Element) -> Result<CohomologyClass> {
        let k = if z.is_zero() {
            0
        } else {
            z.degree().ok_or_else(|| Error::NotHomogeneous {
                element: z.to_string(),
                expected: -1,
            })?
        };
        self.class_in(k, z)
    }

    /// The class of a degree-`k` cocycle.
    pub fn class_in(&self, k: usize, z: &Element) -> Result<CohomologyClass> {
        if !z.is_homogeneous_of(k) {
            return Err(Error::NotHomogeneous {
                element: z.to_string(),
                expected: k as i64,
            });
        }
        let dz = self.source.cdga().try_apply_differential(z)?;
        if !dz.is_zero() {
            return Err(Error::NotCocycle {
                element: z.to_string(),
                residue: dz.to_string(),
            });
        }
        let Some(data) = self.degrees.get(k) else {
            // nothing is stored above top
            return Ok(CohomologyClass {
                degree: k,
                coords: Vec::new(),
            });
        };
        let v = self
            .source
            .coordinates(k, z)
            .ok_or_else(|| Error::NotInComplex(z.to_string()))?;
        let combo = data
            .solver
            .express(&v)
            .ok_or_else(|| Error::Internal(format!("cocycle {z} outside kernel span")))?;
        let mut coords = vec![Scalar::zero(); data.betti];
        for (tag, c) in combo.entries() {
            if *tag >= data.rep_offset {
                coords[tag - data.rep_offset] = c.clone();
            }
        }
        Ok(CohomologyClass { degree: k, coords })
    }

    pub fn representative(&self, c: &CohomologyClass) -> Element {
        let mut out = Element::zero(self.source.generators());
        for (rep, x) in self.representatives(c.degree).iter().zip(&c.coords) {
            out += &rep.scaled(x);
        }
        out
    }

    /// Product of classes, computed on representatives.
    pub fn cup(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
        let p = &self.representative(a) * &self.representative(b);
        self.class_in(a.degree + b.degree, &p)
    }

    /// Largest `l ≤ max` with `c^l ≠ 0`; 0 for the zero class.
    pub fn class_power_index(&self, c: &CohomologyClass, max: usize) -> Result<usize> {
        if c.degree % 2 == 1 {
            return Err(Error::OddDegree);
        }
        if c.is_zero() {
            return Ok(0);
        }
        if c.degree == 0 {
            return Ok(max);
        }
        let cap = max.min(self.top() / c.degree);
        let mut power = c.clone();
        for l in 1..=cap {
            if l > 1 {
                power = self.cup(&power, c)?;
            }
            if power.is_zero() {
                return Ok(l - 1);
            }
        }
        Ok(cap)
    }
}

impl fmt::Display for CohomologyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.degrees.iter().enumerate() {
            let reps: Vec<String> = d.representatives.iter().map(Element::to_string).collect();
            writeln!(f, "H^{k}: dim={}, reps=[{}]", d.betti, reps.join(", "))?;
        }
        Ok(())
    }
}

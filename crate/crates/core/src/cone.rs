//! Simplicial cones spanned by rays of a shared ray table.
//!
//! A cone `pos(λ_i | i ∈ I)` is stored by its index set `I`. When the
//! generators are linearly independent they extend to a basis `B` of `Q^n`;
//! the rows of `(B⁻¹)ᵀ` then give coordinates on the cone: the first `|I|`
//! rows are the generator coefficients (the facet normals within the span)
//! and the remaining rows cut out the span.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{self, clear_denominators, dot, LatticeMatrix, LatticeVector};
use crate::polyhedral;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("ray {index} is out of range for a table of {len} rays")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("ray index {0} listed twice")]
    RepeatedIndex(usize),
    #[error("generators {0:?} are linearly dependent")]
    DependentGenerators(Vec<usize>),
    #[error("cone {indices:?} is not unimodular (generator lattice index {index})")]
    NotUnimodular { indices: Vec<usize>, index: BigInt },
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("ray {index} has dimension {got}, expected {expected}")]
    RayDimension { index: usize, expected: usize, got: usize },
}

/// Ordered list of distinct primitive ray generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayTable {
    dim: usize,
    rays: Vec<LatticeVector>,
}

impl RayTable {
    pub fn new(dim: usize, rays: Vec<LatticeVector>) -> Result<Self, ConeError> {
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(ConeError::RayDimension { index: i, expected: dim, got: r.dim() });
            }
            if r.is_zero() {
                return Err(ConeError::ZeroRay(i));
            }
            if !lattice::is_primitive(r) {
                return Err(ConeError::NonPrimitiveRay(i));
            }
            if let Some(j) = rays[..i].iter().position(|s| s == r) {
                return Err(ConeError::DuplicateRay(j, i));
            }
        }
        Ok(Self { dim, rays })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn index_of(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// The `m×n` matrix whose rows are the rays.
    pub fn matrix(&self) -> LatticeMatrix {
        LatticeMatrix::from_vectors(&self.rays, self.dim)
    }

    pub(crate) fn push(&mut self, v: LatticeVector) -> usize {
        self.rays.push(v);
        self.rays.len() - 1
    }
}

/// A simplicial cone `pos(λ_i | i ∈ indices)`.
#[derive(Clone, Debug)]
pub struct Cone {
    indices: Vec<usize>,
    generators: Vec<LatticeVector>,
    ambient_dim: usize,
    // rows 0..k: generator coefficients (scaled by positive integers);
    // rows k..n: equations of the linear span
    functionals: Vec<Vec<BigInt>>,
    // unscaled generator coefficient rows
    coefficient_rows: Vec<Vec<BigRational>>,
    unimodular: bool,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.indices == other.indices && self.generators == other.generators
    }
}

impl Eq for Cone {}

/// Builds the unimodular cone on `indices`.
pub fn make_cone(table: &RayTable, indices: &[usize]) -> Result<Cone, ConeError> {
    let c = Cone::simplicial(table, indices)?;
    if !c.unimodular {
        let index = lattice::invariant_factors(&c.generator_matrix())
            .into_iter()
            .fold(BigInt::from(1), |acc, d| acc * d);
        return Err(ConeError::NotUnimodular { indices: c.indices, index });
    }
    Ok(c)
}

impl Cone {
    /// Builds a cone with linearly independent generators, unimodular or not.
    pub fn simplicial(table: &RayTable, indices: &[usize]) -> Result<Cone, ConeError> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        for w in idx.windows(2) {
            if w[0] == w[1] {
                return Err(ConeError::RepeatedIndex(w[0]));
            }
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= table.len()) {
            return Err(ConeError::IndexOutOfRange { index: bad, len: table.len() });
        }
        let n = table.dim();
        let generators: Vec<LatticeVector> = idx.iter().map(|&i| table.ray(i).clone()).collect();
        let g = LatticeMatrix::from_vectors(&generators, n);
        let basis = lattice::extend_to_full_rank(&g)
            .ok_or_else(|| ConeError::DependentGenerators(idx.clone()))?;
        let unimodular = basis.is_unimodular();
        let rational: Vec<Vec<BigRational>> =
            basis.transpose().rows().iter().map(|r| to_rational(r)).collect();
        // (Bᵀ)⁻¹ has rows c_i with ⟨c_i, b_j⟩ = δ_ij
        let dual = lattice::rational_inverse(&rational).expect("extended basis is invertible");
        let functionals = dual.iter().map(|r| clear_denominators(r)).collect();
        let coefficient_rows = dual[..idx.len()].to_vec();
        Ok(Cone {
            indices: idx,
            generators,
            ambient_dim: n,
            functionals,
            coefficient_rows,
            unimodular,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn generator_matrix(&self) -> LatticeMatrix {
        LatticeMatrix::from_vectors(&self.generators, self.ambient_dim)
    }

    /// Inward facet normals `⟨f, x⟩ ≥ 0`, one per generator, within the span.
    pub fn facet_normals(&self) -> &[Vec<BigInt>] {
        &self.functionals[..self.dim()]
    }

    /// Equations `⟨e, x⟩ = 0` cutting out the linear span.
    pub fn span_equations(&self) -> &[Vec<BigInt>] {
        &self.functionals[self.dim()..]
    }

    /// All faces. For a simplicial cone these are the generator subsets.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let k = self.dim();
        let mut out: Vec<Vec<usize>> = (0u64..1 << k)
            .map(|mask| {
                (0..k).filter(|b| mask >> b & 1 == 1).map(|b| self.indices[b]).collect()
            })
            .collect();
        out.sort();
        out
    }

    /// Coefficients of `v` on the generators, or `None` if `v` is outside the span.
    pub fn coefficients(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let w = clear_denominators(v);
        if self.span_equations().iter().any(|e| !dot(e, &w).is_zero()) {
            return None;
        }
        Some(
            self.coefficient_rows
                .iter()
                .map(|r| r.iter().zip(v).map(|(a, b)| a * b).fold(BigRational::zero(), |s, t| s + t))
                .collect(),
        )
    }

    /// Signs of the generator coefficients of an integer vector, `None` outside the span.
    fn coefficient_signs(&self, w: &[BigInt]) -> Option<Vec<Ordering>> {
        if self.span_equations().iter().any(|e| !dot(e, w).is_zero()) {
            return None;
        }
        Some(self.facet_normals().iter().map(|f| dot(f, w).sign_ordering()).collect())
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.contains_integral(&clear_denominators(v))
    }

    pub fn contains_lattice(&self, v: &LatticeVector) -> bool {
        self.contains_integral(v.entries())
    }

    pub(crate) fn contains_integral(&self, w: &[BigInt]) -> bool {
        self.coefficient_signs(w)
            .is_some_and(|s| s.iter().all(|&o| o != Ordering::Less))
    }

    pub fn relative_interior_contains(&self, v: &[BigRational]) -> bool {
        self.relative_interior_contains_integral(&clear_denominators(v))
    }

    pub(crate) fn relative_interior_contains_integral(&self, w: &[BigInt]) -> bool {
        self.coefficient_signs(w)
            .is_some_and(|s| s.iter().all(|&o| o == Ordering::Greater))
    }

    /// The face whose relative interior contains `w`, if `w` lies in the cone.
    pub(crate) fn carrier_face(&self, w: &[BigInt]) -> Option<Vec<usize>> {
        let signs = self.coefficient_signs(w)?;
        if signs.contains(&Ordering::Less) {
            return None;
        }
        Some(
            self.indices
                .iter()
                .zip(signs)
                .filter(|(_, s)| *s == Ordering::Greater)
                .map(|(&i, _)| i)
                .collect(),
        )
    }

    /// Extreme rays of `self ∩ other`, computed from the combined facet descriptions.
    pub fn intersect(&self, other: &Cone) -> Vec<LatticeVector> {
        assert_eq!(self.ambient_dim, other.ambient_dim, "cones live in different spaces");
        let ineqs: Vec<Vec<BigInt>> =
            self.facet_normals().iter().chain(other.facet_normals()).cloned().collect();
        let eqs: Vec<Vec<BigInt>> =
            self.span_equations().iter().chain(other.span_equations()).cloned().collect();
        polyhedral::extreme_rays(self.ambient_dim, &ineqs, &eqs)
            .expect("intersection of pointed cones is pointed")
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

pub(crate) fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// Convenience: rational vector from small integers.
pub fn rational_vector(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

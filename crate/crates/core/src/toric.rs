//! Toric manifold data attached to a fan.
//!
//! Fixed points correspond to the full-dimensional cones. At a fixed point the
//! isotropy weights are the basis dual to the cone's generators, and the chart
//! coordinates there are the characters `z_j = t^{α_j}`, normalized to equal 1
//! at a common base point of the open orbit. Chart transitions are therefore
//! monomial maps whose exponent matrices are changes of dual basis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::fan::{ConeIndices, Fan, FanError, SimplicialComplex, ValidationReport};
use crate::lattice::{self, Covector, LatticeMatrix, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("cone {0:?} is not a full-dimensional maximal cone")]
    NotMaximal(Vec<usize>),
    #[error("fan is not pure: maximal cone {0:?} is not full-dimensional")]
    NotPure(Vec<usize>),
    #[error("weights of fixed point `{id}` are not a Z-basis (determinant {det})")]
    NotUnimodular { id: String, det: BigInt },
    #[error("weight data has no fixed points")]
    Empty,
    #[error("fixed point `{id}` has {got} weights of dimension {dim}, expected {expected}")]
    Shape { id: String, expected: usize, got: usize, dim: usize },
    #[error("inconsistent weight data: {0}")]
    InconsistentData(String),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Isotropy weights at one fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBasis {
    pub id: String,
    weights: LatticeMatrix,
}

impl WeightBasis {
    pub fn new(id: impl Into<String>, weights: LatticeMatrix) -> Result<Self, ToricError> {
        let id = id.into();
        let n = weights.ncols();
        if weights.nrows() != n || n == 0 {
            return Err(ToricError::Shape { id, expected: n, got: weights.nrows(), dim: n });
        }
        let det = weights.det().expect("square");
        if det != BigInt::one() && det != -BigInt::one() {
            return Err(ToricError::NotUnimodular { id, det });
        }
        Ok(Self { id, weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.ncols()
    }

    /// Weights as rows.
    pub fn matrix(&self) -> &LatticeMatrix {
        &self.weights
    }

    pub fn weight(&self, j: usize) -> Covector {
        self.weights.row_covector(j)
    }

    pub fn weights(&self) -> Vec<Covector> {
        self.weights.to_covectors()
    }
}

/// Isotropy weight bases of all fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    dim: usize,
    bases: Vec<WeightBasis>,
}

impl WeightData {
    pub fn new(dim: usize, bases: Vec<WeightBasis>) -> Result<Self, ToricError> {
        if bases.is_empty() {
            return Err(ToricError::Empty);
        }
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(ToricError::Shape { id: b.id.clone(), expected: dim, got: b.dim(), dim: b.dim() });
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[WeightBasis] {
        &self.bases
    }
}

/// The monomial map `w_j = ∏_i z_i^{M_ji}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    exponents: LatticeMatrix,
}

impl MonomialMap {
    pub fn new(exponents: LatticeMatrix) -> Self {
        assert!(exponents.is_square(), "monomial maps are square");
        Self { exponents }
    }

    pub fn identity(n: usize) -> Self {
        Self { exponents: LatticeMatrix::identity(n) }
    }

    pub fn exponents(&self) -> &LatticeMatrix {
        &self.exponents
    }

    pub fn is_invertible(&self) -> bool {
        self.exponents.is_unimodular()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &MonomialMap) -> MonomialMap {
        MonomialMap { exponents: self.exponents.mul(&first.exponents) }
    }

    pub fn inverse(&self) -> Option<MonomialMap> {
        lattice::unimodular_inverse(&self.exponents).ok().map(|e| MonomialMap { exponents: e })
    }

    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        monomials(&self.exponents, z)
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, row) in self.exponents.rows().iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "w{} =", j + 1)?;
            let mut any = false;
            for (i, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                any = true;
                if e.is_one() {
                    write!(f, " z{}", i + 1)?;
                } else {
                    write!(f, " z{}^{}", i + 1, e)?;
                }
            }
            if !any {
                write!(f, " 1")?;
            }
        }
        Ok(())
    }
}

/// Full-dimensional maximal cones, lexicographic by index set.
pub fn fixed_points(f: &Fan) -> Vec<ConeIndices> {
    f.maximal_cones().iter().filter(|c| c.len() == f.dim()).cloned().collect()
}

/// Weights at the fixed point of `sigma`: the basis dual to its generators,
/// ordered like `sigma`'s sorted ray indices.
pub fn isotropy_weights(f: &Fan, sigma: &[usize]) -> Result<WeightBasis, ToricError> {
    let mut s = sigma.to_vec();
    s.sort_unstable();
    if s.len() != f.dim() || !f.is_maximal(&s) {
        return Err(ToricError::NotMaximal(s));
    }
    let g = LatticeMatrix::from_vectors(
        &s.iter().map(|&i| f.rays()[i].clone()).collect::<Vec<_>>(),
        f.dim(),
    );
    let id = chart_label(&s);
    let dual = lattice::dual_basis(&g).map_err(|e| match e {
        lattice::LatticeError::NotUnimodular(det) => ToricError::NotUnimodular { id: id.clone(), det },
        other => ToricError::InconsistentData(other.to_string()),
    })?;
    WeightBasis::new(id, dual)
}

/// Exponent matrix `A_τ·A_σ⁻¹` taking chart-`σ` coordinates to chart-`τ` coordinates.
pub fn transition(f: &Fan, sigma: &[usize], tau: &[usize]) -> Result<MonomialMap, ToricError> {
    let a_sigma = isotropy_weights(f, sigma)?;
    let a_tau = isotropy_weights(f, tau)?;
    Ok(transition_between(&a_sigma, &a_tau))
}

pub fn transition_between(from: &WeightBasis, to: &WeightBasis) -> MonomialMap {
    let inv = lattice::unimodular_inverse(from.matrix()).expect("weight bases are unimodular");
    MonomialMap::new(to.matrix().mul(&inv))
}

/// Label used for a chart, e.g. `0-2` for the cone on rays 0 and 2.
pub fn chart_label(cone: &[usize]) -> String {
    cone.iter().map(ToString::to_string).collect::<Vec<_>>().join("-")
}

/// Charts of all fixed points together with their weights.
#[derive(Debug, Clone)]
pub struct Atlas {
    charts: BTreeMap<ConeIndices, WeightBasis>,
}

impl Atlas {
    pub fn new(f: &Fan) -> Result<Self, ToricError> {
        let charts = fixed_points(f)
            .into_iter()
            .map(|c| isotropy_weights(f, &c).map(|w| (c, w)))
            .collect::<Result<_, _>>()?;
        Ok(Self { charts })
    }

    pub fn charts(&self) -> impl Iterator<Item = &ConeIndices> {
        self.charts.keys()
    }

    pub fn weights(&self, chart: &[usize]) -> Option<&WeightBasis> {
        self.charts.get(chart)
    }

    pub fn transition(&self, from: &[usize], to: &[usize]) -> Result<MonomialMap, ToricError> {
        let a = self.charts.get(from).ok_or_else(|| ToricError::NotMaximal(from.to_vec()))?;
        let b = self.charts.get(to).ok_or_else(|| ToricError::NotMaximal(to.to_vec()))?;
        Ok(transition_between(a, b))
    }

    /// Checks inverse and cocycle identities over all pairs and triples of charts.
    pub fn check_cocycle(&self) -> CocycleReport {
        let keys: Vec<&ConeIndices> = self.charts.keys().collect();
        let mut report = CocycleReport::default();
        for &a in &keys {
            for &b in &keys {
                let ab = self.transition(a, b).expect("charts exist");
                let ba = self.transition(b, a).expect("charts exist");
                report.pairs_checked += 1;
                if ba.after(&ab) != MonomialMap::identity(ab.exponents().nrows()) {
                    report.failures.push(vec![a.clone(), b.clone()]);
                }
                for &c in &keys {
                    let bc = self.transition(b, c).expect("charts exist");
                    let ac = self.transition(a, c).expect("charts exist");
                    report.triples_checked += 1;
                    if bc.after(&ab) != ac {
                        report.failures.push(vec![a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CocycleReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub failures: Vec<Vec<ConeIndices>>,
}

impl CocycleReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Structural description of `M_Δ = U_Δ / K_Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPresentation {
    pub m: usize,
    /// Rays as rows (`m×n`).
    pub ray_matrix: LatticeMatrix,
    /// Basis of `{k ∈ Z^m : kᵀΛ = 0}`, one vector per row, in Hermite normal form.
    pub kernel_basis: LatticeMatrix,
    /// Invariant factors greater than one of the image lattice `ΛᵀZ^m ⊂ Z^n`.
    pub component_group: Vec<BigInt>,
    /// Index sets `I` such that `{z_i = 0, i ∈ I}` is allowed in `U_Δ`.
    pub allowed_zero_sets: SimplicialComplex,
}

impl QuotientPresentation {
    pub fn kernel_rank(&self) -> usize {
        self.kernel_basis.nrows()
    }

    /// Whether `z ∈ C^m` lies in `U_Δ`.
    pub fn contains(&self, z: &[Complex64]) -> bool {
        let zeros: Vec<usize> = (0..z.len()).filter(|&i| z[i] == Complex64::zero()).collect();
        self.allowed_zero_sets.contains(&zeros)
    }

    /// The homomorphism `π(a) = ∏_j a_j^{λ_j}` on `(C^*)^m`.
    pub fn project(&self, a: &[Complex64]) -> Vec<Complex64> {
        monomials(&self.ray_matrix.transpose(), a)
    }
}

/// Evaluates `∏_i z_i^{E_ji}` for each row `j` of `E`.
fn monomials(exponents: &LatticeMatrix, z: &[Complex64]) -> Vec<Complex64> {
    exponents
        .rows()
        .iter()
        .map(|row| {
            row.iter().zip(z).fold(Complex64::one(), |acc, (e, zi)| {
                let e = e.to_i32().expect("exponent fits in i32");
                if e == 0 { acc } else { acc * zi.powi(e) }
            })
        })
        .collect()
}

pub fn quotient_presentation(f: &Fan) -> QuotientPresentation {
    let lambda = f.table().matrix();
    let kernel = lattice::left_kernel(&lambda);
    let (kernel_basis, _) = lattice::hnf(&kernel);
    let component_group = lattice::invariant_factors(&lambda)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    QuotientPresentation {
        m: lambda.nrows(),
        ray_matrix: lambda,
        kernel_basis,
        component_group,
        allowed_zero_sets: f.sigma(),
    }
}

/// One weight basis per maximal cone.
pub fn weight_data_from_fan(f: &Fan) -> Result<WeightData, ToricError> {
    if let Some(c) = f.maximal_cones().iter().find(|c| c.len() != f.dim()) {
        return Err(ToricError::NotPure(c.clone()));
    }
    let bases = fixed_points(f)
        .iter()
        .map(|c| isotropy_weights(f, c))
        .collect::<Result<Vec<_>, _>>()?;
    WeightData::new(f.dim(), bases)
}

/// Reassembles the fan whose maximal cones are spanned by the bases dual to
/// each fixed point's weights.
pub fn fan_from_weight_data(w: &WeightData) -> Result<Fan, ToricError> {
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut cones: Vec<(String, Vec<usize>)> = Vec::new();
    for b in w.bases() {
        let dual = lattice::dual_basis(b.matrix()).map_err(|_| ToricError::NotUnimodular {
            id: b.id.clone(),
            det: b.matrix().det().unwrap_or_default(),
        })?;
        let mut cone = Vec::with_capacity(w.dim());
        for v in dual.to_vectors() {
            let idx = match rays.iter().position(|r| *r == v) {
                Some(i) => i,
                None => {
                    rays.push(v);
                    rays.len() - 1
                }
            };
            cone.push(idx);
        }
        cone.sort_unstable();
        if let Some((other, _)) = cones.iter().find(|(_, c)| *c == cone) {
            return Err(ToricError::InconsistentData(format!(
                "fixed points `{other}` and `{}` determine the same cone",
                b.id
            )));
        }
        cones.push((b.id.clone(), cone));
    }
    let fan = Fan::new(w.dim(), rays, cones.into_iter().map(|(_, c)| c).collect())?;
    let report: ValidationReport = fan.validate();
    if !report.ok() {
        let msg = report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Err(ToricError::InconsistentData(msg));
    }
    Ok(fan)
}

//! Fans of unimodular cones.
//!
//! A [`Fan`] is a ray table plus the index sets of its maximal cones; the
//! full face closure is materialized when the fan is built. Construction
//! only checks that the input is well formed. Whether the three fan axioms
//! hold is reported by [`Fan::validate`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cone::{make_cone, Cone, ConeError, RayTable};
use crate::lattice::{self, clear_denominators, LatticeVector};

/// Entries of ray-casting sample directions are drawn uniformly from `[-B, B]`.
pub const RAYCAST_BOUND: i64 = 97;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("malformed fan: {0}")]
    Malformed(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("cone {0:?} is not a maximal cone of the fan")]
    NotMaximal(Vec<usize>),
    #[error("star subdivision of the {0}-dimensional cone would not add a new ray")]
    DegenerateSubdivision(usize),
}

/// Index set of a cone, sorted ascending.
pub type ConeIndices = Vec<usize>;

#[derive(Clone, Debug)]
pub struct Fan {
    table: RayTable,
    maximal: Vec<ConeIndices>,
    closure: BTreeSet<ConeIndices>,
    // simplicial data for each maximal cone, `None` when generators are dependent
    maximal_cones: Vec<Option<Cone>>,
}

impl Fan {
    /// Builds a fan from primitive rays and maximal cone index sets.
    ///
    /// Listed cones that are faces of other listed cones are dropped. Axiom
    /// violations are not errors here; see [`Fan::validate`].
    pub fn new(
        dim: usize,
        rays: Vec<LatticeVector>,
        maximal_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        if dim == 0 {
            return Err(FanError::Malformed("ambient dimension must be at least 1".into()));
        }
        let table = RayTable::new(dim, rays)?;
        Self::from_table(table, maximal_cones)
    }

    pub fn from_table(table: RayTable, maximal_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        let mut listed: BTreeSet<ConeIndices> = BTreeSet::new();
        for cone in maximal_cones {
            let mut c = cone;
            c.sort_unstable();
            if let Some(w) = c.windows(2).find(|w| w[0] == w[1]) {
                return Err(ConeError::RepeatedIndex(w[0]).into());
            }
            if let Some(&i) = c.iter().find(|&&i| i >= table.len()) {
                return Err(ConeError::IndexOutOfRange { index: i, len: table.len() }.into());
            }
            listed.insert(c);
        }
        let maximal: Vec<ConeIndices> = listed
            .iter()
            .filter(|c| !listed.iter().any(|d| d.len() > c.len() && is_subset(c, d)))
            .cloned()
            .collect();
        let mut closure = BTreeSet::new();
        closure.insert(Vec::new());
        for c in &maximal {
            closure.extend(subsets(c));
        }
        let maximal_cones = maximal.iter().map(|c| Cone::simplicial(&table, c).ok()).collect();
        Ok(Fan { table, maximal, closure, maximal_cones })
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn table(&self) -> &RayTable {
        &self.table
    }

    pub fn rays(&self) -> &[LatticeVector] {
        self.table.rays()
    }

    /// Maximal cones in lexicographic order of their index sets.
    pub fn maximal_cones(&self) -> &[ConeIndices] {
        &self.maximal
    }

    /// Every cone of the fan, including the zero cone.
    pub fn cones(&self) -> &BTreeSet<ConeIndices> {
        &self.closure
    }

    pub fn is_maximal(&self, cone: &[usize]) -> bool {
        self.maximal.binary_search(&cone.to_vec()).is_ok()
    }

    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        self.closure.contains(cone)
    }

    /// Unimodular cone on the given index set.
    pub fn cone(&self, indices: &[usize]) -> Result<Cone, ConeError> {
        make_cone(&self.table, indices)
    }

    /// Checks face closure, intersections and unimodularity.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let used: BTreeSet<usize> = self.maximal.iter().flatten().copied().collect();
        for i in (0..self.table.len()).filter(|i| !used.contains(i)) {
            violations.push(Violation::FaceClosure { ray: i });
        }
        for (c, data) in self.maximal.iter().zip(&self.maximal_cones) {
            match data {
                None => violations.push(Violation::Unimodular {
                    cone: c.clone(),
                    reason: "generators are linearly dependent".into(),
                }),
                Some(cone) if !cone.is_unimodular() => {
                    let index: BigInt = lattice::invariant_factors(&cone.generator_matrix())
                        .into_iter()
                        .product();
                    violations.push(Violation::Unimodular {
                        cone: c.clone(),
                        reason: format!("generators span a sublattice of index {index}"),
                    });
                }
                Some(_) => {}
            }
        }
        // For simplicial cones, C_I ∩ C_J = C_{I∩J} on maximal pairs implies
        // the same for all pairs of faces.
        for a in 0..self.maximal.len() {
            for b in a + 1..self.maximal.len() {
                let (Some(ca), Some(cb)) = (&self.maximal_cones[a], &self.maximal_cones[b]) else {
                    continue;
                };
                let actual = ca.intersect(cb);
                let shared = intersection(&self.maximal[a], &self.maximal[b]);
                let mut expected: Vec<LatticeVector> =
                    shared.iter().map(|&i| self.table.ray(i).clone()).collect();
                expected.sort();
                if actual != expected {
                    violations.push(Violation::Intersection {
                        first: self.maximal[a].clone(),
                        second: self.maximal[b].clone(),
                        intersection: actual,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// The simplicial complex of index sets spanning cones of the fan.
    pub fn sigma(&self) -> SimplicialComplex {
        SimplicialComplex { vertex_count: self.table.len(), faces: self.closure.clone() }
    }

    /// The unique cone whose relative interior contains `v`, if `v` is in the support.
    pub fn support_contains(&self, v: &[BigRational]) -> Option<ConeIndices> {
        self.support_contains_integral(&clear_denominators(v))
    }

    pub fn support_contains_lattice(&self, v: &LatticeVector) -> Option<ConeIndices> {
        self.support_contains_integral(v.entries())
    }

    fn support_contains_integral(&self, w: &[BigInt]) -> Option<ConeIndices> {
        if w.iter().all(|x| x == &BigInt::from(0)) {
            return Some(Vec::new());
        }
        self.maximal_cones.iter().flatten().find_map(|c| c.carrier_face(w))
    }

    /// Completeness via facet pairing: pure of full dimension, at least one
    /// maximal cone, and every codimension-one cone lies in exactly two maximal cones.
    pub fn is_complete_facet(&self) -> FacetReport {
        let n = self.dim();
        let underdimensional: Vec<ConeIndices> =
            self.maximal.iter().filter(|c| c.len() != n).cloned().collect();
        let facets: Vec<(ConeIndices, usize)> = self
            .closure
            .iter()
            .filter(|c| c.len() + 1 == n)
            .map(|f| {
                let count = self
                    .maximal
                    .iter()
                    .filter(|m| m.len() == n && is_subset(f, m))
                    .count();
                (f.clone(), count)
            })
            .collect();
        let complete = underdimensional.is_empty()
            && !self.maximal.is_empty()
            && facets.iter().all(|(_, k)| *k == 2);
        FacetReport { complete, facets, underdimensional }
    }

    /// Completeness by sampling integer directions and testing membership exactly.
    pub fn is_complete_raycast(&self, samples: usize, seed: u64) -> RaycastReport {
        let directions = raycast_directions(self.dim(), samples, seed);
        let miss = directions
            .par_iter()
            .position_first(|d| self.support_contains_lattice(d).is_none());
        RaycastReport {
            complete: miss.is_none(),
            samples,
            witness: miss.map(|i| directions[i].clone()),
        }
    }

    /// Star subdivision of a maximal cone at the sum of its generators.
    pub fn star_subdivide(&self, sigma: &[usize]) -> Result<Fan, FanError> {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        if !self.is_maximal(&s) {
            return Err(FanError::NotMaximal(s));
        }
        if s.len() < 2 {
            return Err(FanError::DegenerateSubdivision(s.len()));
        }
        let sum = s
            .iter()
            .fold(LatticeVector::zero(self.dim()), |acc, &i| acc.add(self.table.ray(i)));
        let ray = lattice::primitive(&sum).map_err(|_| FanError::DegenerateSubdivision(s.len()))?;
        if self.table.index_of(&ray).is_some() {
            return Err(FanError::Malformed(format!("ray {ray} is already present")));
        }
        let mut table = self.table.clone();
        let new = table.push(ray);
        let mut cones: Vec<Vec<usize>> =
            self.maximal.iter().filter(|c| **c != s).cloned().collect();
        for &drop in &s {
            let mut c: Vec<usize> = s.iter().copied().filter(|&i| i != drop).collect();
            c.push(new);
            cones.push(c);
        }
        Fan::from_table(table, cones)
    }

    /// Maximal cones as sets of ray vectors, independent of ray labels.
    fn geometric_cones(&self) -> BTreeSet<BTreeSet<LatticeVector>> {
        self.maximal
            .iter()
            .map(|c| c.iter().map(|&i| self.table.ray(i).clone()).collect())
            .collect()
    }
}

/// Equality up to relabeling of rays.
impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        let rays = |f: &Fan| f.rays().iter().cloned().collect::<BTreeSet<_>>();
        self.dim() == other.dim()
            && rays(self) == rays(other)
            && self.geometric_cones() == other.geometric_cones()
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan(dim {}, rays [", self.dim())?;
        for (i, r) in self.rays().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "], maximal {:?})", self.maximal)
    }
}

/// Which fan axiom a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    FaceClosure,
    Intersection,
    Unimodular,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::FaceClosure => "face-closure",
            Axiom::Intersection => "intersection",
            Axiom::Unimodular => "unimodular",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A ray that is not a face of any listed cone.
    FaceClosure { ray: usize },
    /// Two maximal cones whose intersection is not the cone on their shared rays.
    Intersection { first: ConeIndices, second: ConeIndices, intersection: Vec<LatticeVector> },
    Unimodular { cone: ConeIndices, reason: String },
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::FaceClosure { .. } => Axiom::FaceClosure,
            Violation::Intersection { .. } => Axiom::Intersection,
            Violation::Unimodular { .. } => Axiom::Unimodular,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceClosure { ray } => {
                write!(f, "face-closure: ray {ray} is not a face of any listed cone")
            }
            Violation::Intersection { first, second, intersection } => {
                write!(f, "intersection: cones {first:?} and {second:?} meet in pos(")?;
                for (i, r) in intersection.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, "), not a common face")
            }
            Violation::Unimodular { cone, reason } => write!(f, "unimodular: cone {cone:?}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn axioms(&self) -> BTreeSet<Axiom> {
        self.violations.iter().map(Violation::axiom).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetReport {
    pub complete: bool,
    /// Each codimension-one cone with the number of maximal cones containing it.
    pub facets: Vec<(ConeIndices, usize)>,
    /// Maximal cones of dimension less than the ambient dimension.
    pub underdimensional: Vec<ConeIndices>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaycastReport {
    pub complete: bool,
    pub samples: usize,
    /// First sampled direction outside the support.
    pub witness: Option<LatticeVector>,
}

/// The deterministic sample directions used by [`Fan::is_complete_raycast`].
pub fn raycast_directions(dim: usize, samples: usize, seed: u64) -> Vec<LatticeVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-RAYCAST_BOUND..=RAYCAST_BOUND)).collect();
        if v.iter().any(|&x| x != 0) {
            out.push(LatticeVector::from_i64(&v));
        }
    }
    out
}

/// Abstract simplicial complex on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertex_count: usize,
    pub faces: BTreeSet<ConeIndices>,
}

impl SimplicialComplex {
    pub fn contains(&self, face: &[usize]) -> bool {
        self.faces.contains(face)
    }

    pub fn is_subset_closed(&self) -> bool {
        self.faces.iter().all(|f| subsets(f).iter().all(|s| self.faces.contains(s)))
    }

    pub fn maximal_faces(&self) -> Vec<ConeIndices> {
        self.faces
            .iter()
            .filter(|f| !self.faces.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect()
    }

    /// Number of faces of each dimension, starting with the empty face.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for f in &self.faces {
            *counts.entry(f.len()).or_default() += 1;
        }
        let top = counts.keys().max().copied().unwrap_or(0);
        (0..=top).map(|k| counts.get(&k).copied().unwrap_or(0)).collect()
    }
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub(crate) fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn subsets(c: &[usize]) -> Vec<Vec<usize>> {
    (0u64..1 << c.len())
        .map(|mask| (0..c.len()).filter(|b| mask >> b & 1 == 1).map(|b| c[b]).collect())
        .collect()
}

//! Unimodular fans, the toric manifold data they determine, and numerical
//! verification of torus-flow limits.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: exact integer linear algebra (primitive vectors, HNF, SNF, dual bases)
//! * [`cone`] and [`polyhedral`]: simplicial cones and exact double description
//! * [`fan`]: fan axioms, the simplicial complex of cones, completeness, star subdivision
//! * [`toric`]: fixed points, isotropy weights, chart transitions, quotient presentation
//! * [`flow`]: the curves `exp(-rJξ)·q` in chart coordinates and their limits
//! * [`io`] and [`cli`]: file formats and the command-line front end

pub mod builtin;
pub mod cone;
pub mod cli;
pub mod fan;
pub mod flow;
pub mod io;
pub mod lattice;
pub mod polyhedral;
pub mod toric;

pub use cone::{make_cone, Cone, ConeError, RayTable};
pub use fan::{Fan, FanError, SimplicialComplex, ValidationReport};
pub use lattice::{Covector, LatticeMatrix, LatticeVector};

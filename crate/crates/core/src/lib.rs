//! Parameter-free screened pseudopotentials for many-electron atoms.
//!
//! The crate assembles the one-electron radial Hamiltonian in a clamped
//! B-spline basis, diagonalizes the resulting band pencil, scales the
//! eigenvalues by the occupancy ratio `m/n` and compares the resulting
//! ionization potentials and excited levels with reference data.

pub mod banded;
pub mod bspline;
pub mod catalog;
pub mod error;
pub mod pseudopotential;
pub mod quadrature;
pub mod radial;
pub mod report;
pub mod units;

pub use banded::{cholesky_banded, eigs_lowest, GeneralizedEigenSolution, SymmetricBandMatrix};
pub use bspline::{BSplineBasis, GridLaw, KnotSequence};
pub use catalog::{builtin_elements, ElementRecord, IonizationResult};
pub use error::{Error, Result};
pub use pseudopotential::{ModelKind, Orientation, PotentialModel, ZetaTruncation};
pub use quadrature::QuadratureRule;
pub use radial::{BoundState, RadialSolver, SolverConfig, Spectrum};
pub use report::{DeviationReport, ReferenceTable};

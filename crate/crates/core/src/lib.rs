//! Lie algebras and their representations applied to classical and quantum
//! mechanics: structure constants and Killing forms, the SU(2) → SO(3) cover,
//! Poisson dynamics, bosonic and fermionic Fock spaces, su(2) irreps, Gibbs
//! states and spectral line analysis.

pub mod boson;
pub mod error;
pub mod fermion;
pub mod lie;
pub mod matrix;
pub mod poisson;
pub mod rotations;
pub mod spectra;
pub mod su2;
pub mod thermal;

pub use boson::{BosonFock, CoherentState, HWData, HighestWeightRep, Verdict};
pub use error::{Error, Result};
pub use fermion::{FermionFock, SignedSubset};
pub use lie::{BuiltinAlgebra, LieAlgebraBasis, MatrixRealization, ProductConvention};
pub use matrix::{ComplexMatrix, HermitianEigen, Tolerance, C64};
pub use poisson::{PolyJ, PolyPQ, RigidBodyState};
pub use rotations::{EulerAngles, Rotation, Su2Element, Vec3};
pub use spectra::{AssignmentSolution, EnergyLevels, LinePair, SpectralLine, SpectrumDataset, StopReason};
pub use su2::{IrrepDj, Spin};
pub use thermal::{GibbsState, PhysicalConstants};

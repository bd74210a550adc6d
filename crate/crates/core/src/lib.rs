//! Slice-quaternionic calculus in two variables and numerical verification
//! of quaternionic Hopf surface properties: group actions generated by
//! `f(z, w) = (z·α + w^p·λ, w·β)`, dimensions of their automorphism groups,
//! and deformation families.

pub mod aut;
pub mod deform;
pub mod error;
pub mod hopf;
pub mod quat;
pub mod report;
pub mod sampling;
pub mod series;
pub mod stem;
pub mod suite;
pub mod tol;

pub use aut::{AutConfig, AutMethod, AutReport, FixedSet, FreeParams};
pub use deform::{DimensionScan, FamilyParams, ScanRow};
pub use error::{Error, Result};
pub use hopf::{Hopf, HopfCase, HopfParams};
pub use quat::{Quaternion, SliceDecomposition};
pub use series::{compose_eval, OrderedSeries, SeriesMap, Term};
pub use stem::{represent_extend, CliffordQuat, SlicePoint, StemDomain, StemOracle};
pub use tol::Tolerance;

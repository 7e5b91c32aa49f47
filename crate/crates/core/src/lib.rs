//! Computable core of Sobolev embedding, Hausdorff–Young, rapid-decay and
//! ultracontractivity analysis on compact matrix quantum groups of Kac type.
//!
//! Modules, bottom-up:
//! * [`repdata`]: irreducible labels, dimensions, fusion rules, growth.
//! * [`fourier`]: Fourier coefficients, noncommutative `ℓ^p` norms, weights.
//! * [`classical_lp`]: `L^p` norms of central elements by Weyl quadrature.
//! * [`freegroup`]: operator norms on duals of free groups.
//! * [`semigroup`]: semigroup multipliers, ultracontractivity series, scans.
//! * [`verify`]: inequality checkers and sharpness scans.

pub mod classical_lp;
pub mod error;
pub mod fourier;
pub mod freegroup;
pub mod quadrature;
pub mod repdata;
pub mod report;
pub mod semigroup;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use fourier::{Block, CentralElement, FourierCoefficients, RadialWeight, WeightSpec};
pub use repdata::{FusionRing, GroupDescriptor, GroupKind, IrrLabel, Letter, Word};
pub use semigroup::{LengthFunction, ScanReport};
pub use report::Verdict;
pub use verify::VerifyReport;

pub use num_complex::Complex64;

/// Crate version, echoed in report headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

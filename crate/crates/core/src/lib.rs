//! Exact and numerical tools for Lotka-Volterra systems `LV(n, k)` with
//! skew-symmetric Toeplitz quadratic Poisson structures.

pub mod dynamics;
pub mod error;
pub mod exactalg;
pub mod integrals;
pub mod lax;
pub mod linalg;
pub mod poisson;
pub mod report;
pub mod sigma;
pub mod verify;

pub use dynamics::TrajectoryRecord;
pub use error::{Error, Result};
pub use exactalg::{ExponentVector, LaurentPolynomial, Rational, TermRecord};
pub use integrals::{IndexTuple, IntegralFamily};
pub use poisson::{PoissonStructure, SystemSpec};
pub use report::{Check, CheckStatus, VerificationReport};
pub use sigma::{SigmaMethod, SigmaTable};
pub use verify::Suite;

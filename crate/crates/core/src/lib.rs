//! Numerical evidence for oscillation of `φ'' + q(t) φ = 0`.
//!
//! The crate evaluates integral oscillation criteria on a coefficient
//! profile, computes the Riccati objects behind them, and cross-checks every
//! verdict against zero counts obtained from the Prüfer angle.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod coeff;
pub mod criteria;
pub mod error;
pub mod mathieu;
pub mod ode;
pub mod prufer;
pub mod quad;
pub mod riccati;
mod serde_ext;

pub use error::{Error, Result};

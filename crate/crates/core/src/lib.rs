//! Spectral simulator and property checks for the third-order-in-time
//! equation
//!
//! ```text
//! ∂ₜ³u + α∂ₜ²u + βA∂ₜu + γAu + δA∂ₜ²u = f₁(u) + f₂(∂ₜu) + f₃(∂ₜ²u)
//! ```
//!
//! with `A` a positive self-adjoint operator given by its eigenvalues.
//!
//! * [`spectral`]: the diagonal model of `A`, fractional power norms, sine
//!   collocation.
//! * [`block`]: the first-order block operator, its inverse, spectrum,
//!   resolvent, the `Y` / `Y₋₁` / `Y^α₋₁` norms and fractional powers.
//! * [`semigroup`]: per-mode propagators, decay-rate fits, sectoriality probes.
//! * [`nonlinearity`]: the structured nonlinearity, growth diagnostics and its
//!   collocation lifting.
//! * [`solver`]: Picard iteration on the variation-of-constants formula, an
//!   adaptive reference integrator, continuation and the time-regularity
//!   system.
//! * [`diagnostics`]: the one-shot property suite.
//! * [`config`] and [`commands`]: run configuration and the CLI back end.

pub mod block;
pub mod commands;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod expm;
pub mod nonlinearity;
pub mod poly;
pub mod semigroup;
pub mod solver;
pub mod spectral;

mod par;

pub use block::{BlockOperator, MgtParams, StateTriple};
pub use error::{MgtError, Result};
pub use spectral::{CoeffVector, SpectralOperator};

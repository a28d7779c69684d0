//! Distinguished Riemann–Hamilton geometry on the dual 1-jet space `J¹*(ℝ, M⁴)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`expr`] parses, prints, evaluates and symbolically differentiates scalar
//!   fields over the phase-space variables `t, x1..x4, p1..p4`;
//! * [`jet`] evaluates fields as truncated multivariate Taylor polynomials and
//!   carries an independent finite-difference oracle;
//! * [`geometry`] is the generic pipeline: from any Hamiltonian `H*(t,x,p)` and
//!   time metric `h11(t)` it builds the metric d-tensor, nonlinear and Cartan
//!   connections, torsions, curvatures, Ricci tensors, the Einstein-like blocks
//!   and the electromagnetic 2-form at a phase point;
//! * [`bm4`] evaluates the explicit closed forms for the conformally deformed
//!   quartic Berwald–Moór Hamiltonian, used to cross-check the generic pipeline.
//!
//! Indices are stored 0-based; everything printed for humans is 1-based.

pub mod bm4;
pub mod expr;
pub mod geometry;
pub mod jet;
pub mod objects;
mod point;
pub mod scalar;

pub use expr::{Expression, ExprError};
pub use jet::{Jet, JetTable, MultiIndex, Truncation};
pub use point::{PhasePoint, PointError, Var};
pub use scalar::Scalar;

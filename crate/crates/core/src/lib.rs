//! Numerical contact and para-Sasakian geometry of the thermodynamic phase
//! space.
//!
//! The phase space of a system with `n` degrees of freedom carries Darboux
//! coordinates `(w, p_a, q^a)`, the contact form `η = dw + Σ p_a dq^a`, its
//! Reeb field `ξ = ∂_w`, the Mrugała metric `G` and the almost para-contact
//! map `Φ`. This crate evaluates all of them pointwise, applies conformal
//! gauge transformations `η ↦ Ωη`, pulls `G` back to Legendre submanifolds
//! (Weinhold and Ruppeiner metrics), and measures Riemannian curvature of
//! the resulting metrics.
//!
//! Derivatives are exact: every scalar field evaluates over nested
//! [`real::Dual`] numbers. The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod chart;
pub mod contact;
pub mod error;
pub mod expr;
pub mod field;
pub mod gauge;
pub mod linalg;
pub mod real;
pub mod structure;
pub mod thermo;

pub use chart::{CotangentVector, DarbouxPoint, TangentVector};
pub use error::{Error, Result};
pub use expr::{Expr, ExprError, VarTable};
pub use field::{EvalError, Field};
pub use gauge::{GaugeFactor, GaugedStructure};
pub use real::{Dual, Real};
pub use structure::{EndoAtPoint, MetricAtPoint};

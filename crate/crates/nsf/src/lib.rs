//! Toolkit for 1D heat-conducting compressible flow with a provable lower
//! bound on temperature.
//!
//! The crate has three layers:
//!
//! * constitutive theory — structural pressure laws P(Z), the gas equation of
//!   state built on them, transport coefficients, and scans that verify the
//!   structural hypotheses the temperature bound needs
//!   ([`constitutive`], [`mollifier`]);
//! * the bound itself — the conductivity primitive K, the decaying level
//!   Y(t) and the pointwise field check ([`minprinciple`]);
//! * a regularized finite-volume solver with balance diagnostics and a CLI
//!   ([`solver1d`], [`diagnostics`], [`oracle`], [`cli`]).
//!
//! The `book/` directory at the repository root walks through each layer;
//! its code snippets compile and run as doc-tests of this crate.

pub mod book;
pub mod cli;
pub mod config;
pub mod constitutive;
pub mod diagnostics;
mod error;
pub mod expr;
pub mod minprinciple;
pub mod mollifier;
pub mod numerics;
pub mod oracle;
pub mod plot;
pub mod solver1d;

pub use error::Error;

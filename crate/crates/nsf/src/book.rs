//! The user guide from `book/`, embedded chapter by chapter so that every
//! code block in it compiles and runs under `cargo test` as a doc-test.
//! Edit the chapters in `book/src/`; this module only mirrors them.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/state-laws.md")]
pub mod state_laws {}

#[doc = include_str!("../../../book/src/transport.md")]
pub mod transport {}

#[doc = include_str!("../../../book/src/smoothing.md")]
pub mod smoothing {}

#[doc = include_str!("../../../book/src/temperature-floor.md")]
pub mod temperature_floor {}

#[doc = include_str!("../../../book/src/integrator.md")]
pub mod integrator {}

#[doc = include_str!("../../../book/src/balances.md")]
pub mod balances {}

#[doc = include_str!("../../../book/src/configuration.md")]
pub mod configuration {}

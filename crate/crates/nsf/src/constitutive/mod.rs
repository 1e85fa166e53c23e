//! Constitutive layer: structural pressure laws, the gas+radiation equation
//! of state built on them, temperature-dependent transport coefficients, and
//! grid scans that turn the structural hypotheses into checkable predicates.

pub mod eos;
pub mod hypotheses;
pub mod structural;
pub mod transport;

pub use eos::{EnergyPartials, EntropyPartials, GasEOS};
pub use hypotheses::{check_structural, HypothesisReport, ScanGrid, StructuralConstants};
pub use structural::{IdealGasLaw, LawHandle, PiecewiseLaw, StructuralLaw};
pub use transport::{PowerSum, TransportLaws};

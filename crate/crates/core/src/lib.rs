//! Numerical laboratory for resolvent estimates of non-self-adjoint magnetic
//! Schrödinger operators `P = (hD - A)^2 + V` with complex potentials.

pub mod class_audit;
pub mod error;
pub mod jet;
pub mod model_registry;
pub mod phase;
pub mod quadrature;
pub mod quantizer;
pub mod resolvent_lab;
pub mod symbol_kit;

pub use error::{LabError, Result};
pub use phase::{MultiIndex, PhasePoint};

//! Boundary-layer approximation of plane-parallel channel flow with variable
//! density, and the numerical machinery to measure how fast it converges as
//! the viscosity vanishes.
//!
//! The pipeline for one viscosity `eps`:
//!
//! 1. [`euler`] solves the inviscid outer problem once.
//! 2. [`prandtl`] solves the wall-layer correctors once (they do not involve `eps`).
//! 3. [`viscous`] solves the full reduced problem on a layer-resolving mesh.
//! 4. [`composer`] glues outer solution and correctors into the composite
//!    approximation and evaluates its remainder terms.
//! 5. [`analysis`] measures the error norms and fits rates across a sweep.

pub mod error;
pub mod fields;
pub mod linalg;
pub mod report;
pub mod scenario;
pub mod spectral;
pub(crate) mod stepping;
pub mod euler;
pub mod viscous;
pub mod prandtl;
pub mod composer;
pub mod analysis;
pub mod config;
pub mod cli;

pub use error::{Error, Result};

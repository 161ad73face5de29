//! Potential theory and Bergman geometry for the slit-disc family D^{r,t}.
//!
//! The modules build on each other: [`domain`] describes the domains and
//! their removed arcs, [`capacity`] computes logarithmic capacities,
//! [`wiener`] evaluates the Wiener-type integral γ and classifies D^{r,t},
//! [`bergman`] computes kernels on validation domains and [`qc`] transports
//! parameters along the radial stretch φ_α.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod capacity;
pub mod cli;
pub mod domain;
pub mod error;
pub mod exact;
pub mod qc;
pub mod wiener;

pub use domain::{build_domain, DomainSpec, ParamRT};
pub use error::{Error, Result};
pub use exact::Scalar;

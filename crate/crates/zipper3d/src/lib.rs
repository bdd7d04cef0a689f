//! Self-similar zippers in R^3 and a one-parameter family of Jordan arcs
//! whose defining systems fail the weak separation property.
//!
//! * [`geom`]: similarities, bicones, small metric estimates.
//! * [`zipper`]: zippers, addresses, linear parametrization, Hoelder exponent,
//!   similarity dimension, collage bounds.
//! * [`cstar`]: two-generator subgroups of C*: density tests and
//!   approximation sequences.
//! * [`family`]: the family `S_xi` over the parameter box `D`, its bicones,
//!   the pair sequence `Sigma`, displacement estimates and the check suite.
//! * [`certify`]: branch-and-bound separation of subarcs, Jordan checks and
//!   grid scans.

pub mod certify;
pub mod cstar;
pub mod error;
pub mod family;
pub mod geom;
pub mod report;
pub mod zipper;

pub use error::{Error, Result};

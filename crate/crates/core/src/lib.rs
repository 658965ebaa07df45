//! Numerical toolkit for truncated Hermite series convergence experiments.
//!
//! The crate provides, bottom up:
//!
//! - [`gridfn`]: sampled functions, quadrature, `L^p` norms, decreasing
//!   rearrangement and dilation;
//! - [`hermite`]: orthonormal Hermite functions, expansion coefficients,
//!   partial sums by coefficient summation and by the Christoffel-Darboux
//!   kernel, and the slowly growing truncation schedule;
//! - [`sansone`]: the asymptotic decomposition of the partial-sum kernel
//!   into seven trigonometric/remainder terms, the Dirichlet operator, and
//!   the comb-function lower-bound construction;
//! - [`operators`]: Hilbert and Stieltjes transforms and the Hardy
//!   averaging operators with their comparison inequalities;
//! - [`orlicz`]: Young-function calculus (conjugates, modulars, Luxemburg
//!   norms, doubling conditions) and admissibility checks for pairs;
//! - [`experiments`]: reproducible convergence experiment drivers emitting
//!   structured reports.

pub mod error;
pub mod experiments;
pub mod gridfn;
pub mod hermite;
pub mod operators;
pub mod orlicz;
pub mod report;
pub mod sansone;

pub use error::{Error, Result};
pub use gridfn::{DomainKind, GridFunction, Interp, QuadratureSpec, Scheme};

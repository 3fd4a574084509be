//! Kähler geometry of the Siegel disk `D₁` and the Siegel-Jacobi disk
//! `D^J_1 = ℂ × D₁`: reproducing kernels and their bases, the balanced
//! metric and its curvature, the Jacobi group action, Bergman
//! representative coordinates, and Monte Carlo quadrature against the
//! invariant measure.

pub mod cli;
pub mod domain;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod group;
pub mod kernels;
pub mod quad;
pub mod repcoords;
pub mod sampling;
pub mod suites;

pub use domain::{c64, DiskPoint, HermitianMatrix2, Mat2, ModelParams, SJPoint, Tolerance, C64};
pub use error::{Error, Result};

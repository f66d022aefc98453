//! Exact arithmetic for infinitesimal subgroups of compact matrix groups.
//!
//! The crate models a convexly valued real closed field by truncated Puiseux
//! series over an exact scalar tower, and on top of it builds matrix groups
//! with their standard-part homomorphism and infinitesimal subgroups, the
//! rotation calculus of SO(3) and its quaternion double cover, exact root
//! space decompositions of the compact classical Lie algebras, and a chart
//! of the infinitesimal subgroup built from conjugates of a centraliser arc.
//! Every identity these constructions satisfy is checked by executable
//! suites with exact (zero-tolerance) residuals.

pub mod error;
pub mod group;
pub mod chart;
pub mod lie;
pub mod sample;
pub mod matrix;
pub mod parse;
pub mod quaternion;
pub mod rotations;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use group::GroupSpec;
pub use matrix::SeriesMatrix;
pub use quaternion::Quaternion;
pub use rotations::{AngleParam, Axis, Vec3};
pub use scalar::{ExactScalar, Rational};
pub use series::{Classification, SeriesCtx, SeriesOrd, ValSeries, Valuation};

//! Empirical cone distribution functions and set-valued cone quantiles for
//! bivariate data, with classical Tukey (halfspace) depth as the degenerate
//! cone case.
//!
//! Given data points `x_1..x_N` and a pointed convex cone `C` spanned by two
//! linearly independent generators, the lower cone distribution function of a
//! point `z` is the smallest fraction of data lying in `z - H(w)` over all
//! closed halfspaces `H(w)` whose inner normal `w` supports `C`. Level sets of
//! this function are convex polyhedra with recession cone `C`; this crate
//! computes them exactly (up to a configurable tolerance) by sweeping the
//! normal direction across the dual cone's base segment.
//!
//! All types are generic over the scalar via [`Scalar`] and default to `f64`,
//! so `Vec2`, `DataSet`, `Cone`, ... are concrete double-precision types
//! unless a parameter is spelled out.

pub mod depth;
mod error;
pub mod geometry;
pub mod oracle;
pub mod quantile;
mod scalar;
pub mod sweep;

pub use error::Error;
pub use scalar::Scalar;

pub use geometry::{
    Cone, DualBase, Halfspace, LinearMap, Mat2, Polyhedron, Tolerance, Vec2,
};
pub use sweep::{BoundaryPartition, DataSet, Permutation, RotationOutcome};

pub use depth::{
    cdf_field, cone_cdf, cone_depth, tukey_depth, tukey_region, DepthResult, TukeyRegion,
};
pub use quantile::{
    cone_quantile, quantile_rank, QuantileFacet, QuantileResult, SweepStep, SweepTrace,
};

//! Reconstruction of single-variable functions from zero-dimensional
//! directional sublevel-set persistence diagrams.
//!
//! - [`persistence`]: diagrams of function graphs along a direction.
//! - [`reconstruct_pl`]: exact recovery of piecewise-linear critical points
//!   from three directions (naive and rolling-ball searches).
//! - [`reconstruct_smooth`]: the five-line estimator for smooth functions.
//! - [`landscape`]: exact persistence landscapes and decoding a subset of
//!   landscape levels back to critical points.
//! - [`generators`]: seeded test functions with ground truth.
//! - [`bench`]: naive vs rolling-ball timing and operation counts.

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod landscape;
pub mod persistence;
pub mod reconstruct_pl;
pub mod reconstruct_smooth;
pub mod sampling;

pub use error::{Error, Result};
pub use geometry::{intersect, slope_of, Angle, Line, Point2};
pub use persistence::{
    critical_heights, critical_points, directional_diagram, is_admissible, min_abs_slope, sublevel_diagram,
    CriticalKind, CriticalPoint, Death, Diagram, PLFunction, PersistencePoint,
};
pub use reconstruct_pl::{naive_reconstruct, rolling_ball_reconstruct, Reconstruction, TripleConfig};
pub use reconstruct_smooth::{compute_x, five_line_reconstruct, SmoothConfig, SmoothReconstruction};
pub use sampling::SampledFunction;

//! Reconstruction of an unknown manifold from a finite point sample.
//!
//! The estimator is the `t`-convex hull: the union of convex hulls of all
//! subsets of the sample whose smallest enclosing ball has radius at most `t`.
//! The scale `t` is chosen from the data alone by locating the first scale at
//! which the convexity defect function `h(t) = d_H(Conv(t, X), X)` drops below
//! `λ·t`, with `λ` itself picked by a jump heuristic on the curve
//! `λ ↦ 1/t_λ`.
//!
//! Module map:
//! - [`geom`]: enclosing balls, hull distances, Hausdorff distances, subspace angles
//! - [`spatial`]: neighbor queries (k-NN, radius, bounded edge enumeration)
//! - [`defect`]: convexity defect profiles and the scale `t_λ`
//! - [`select`]: the jump heuristic and the adaptive K-doubling horizon
//! - [`manifolds`]: reference manifolds with analytic oracles and samplers
//! - [`estimate`]: complex reconstruction, risk evaluation, tangent estimation
//! - [`io`]: CSV/JSON round-trip helpers

pub mod defect;
pub mod error;
pub mod estimate;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod manifolds;
pub mod select;
pub mod spatial;
pub mod tol;

pub use error::Error;
pub use geom::{Ball, Point, PointCloud, Simplex, Subspace};
pub use tol::Tolerances;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

//! Central record of numeric tolerances.
//!
//! Every threshold the geometric kernels depend on lives here so that tests
//! and callers agree on a single set of defaults.

/// Numeric tolerances used by the geometric kernels.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative tolerance on the smallest enclosing ball radius.
    pub meb_rel: f64,
    /// Convergence threshold on barycentric coordinate change for the
    /// nearest-point-in-hull iteration.
    pub hull_coord: f64,
    /// Iteration cap for the nearest-point-in-hull iteration.
    pub hull_max_iters: usize,
    /// Absolute accuracy of the certified hull supremum used by the full
    /// defect profile.
    pub full_profile_sup: f64,
    /// Orthonormality tolerance for subspace bases.
    pub subspace_ortho: f64,
    /// Residual below which a point counts as lying on a manifold.
    pub on_manifold: f64,
    /// Convergence tolerance of one-dimensional projections (swiss roll
    /// parameter search, bumped-sphere chart iteration).
    pub projection: f64,
    /// Relative tolerance of the coverage-scale bisection.
    pub tstar_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            meb_rel: 1e-9,
            hull_coord: 1e-10,
            hull_max_iters: 10_000,
            full_profile_sup: 1e-4,
            subspace_ortho: 1e-12,
            on_manifold: 1e-8,
            projection: 1e-10,
            tstar_rel: 1e-3,
        }
    }
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        meb_rel: 1e-9,
        hull_coord: 1e-10,
        hull_max_iters: 10_000,
        full_profile_sup: 1e-4,
        subspace_ortho: 1e-12,
        on_manifold: 1e-8,
        projection: 1e-10,
        tstar_rel: 1e-3,
    };
}

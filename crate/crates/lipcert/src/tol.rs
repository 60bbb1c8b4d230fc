//! Central tolerances. Every comparison threshold used by the analytic
//! modules is defined here; tests reuse the same constants.

/// Feasibility slack for halfspace membership, `<c,x> <= d + TOL_FEAS * scale`.
pub const TOL_FEAS: f64 = 1e-9;

/// Optimality tolerance for projections, min-norm points and criterion
/// comparisons against a modulus.
pub const TOL_OPT: f64 = 1e-9;

/// Pairwise tolerance for dropping duplicate generators during
/// canonicalization.
pub const TOL_DEDUP: f64 = 1e-12;

/// Relative tolerance for deciding which affine pieces attain the maximum.
/// Ties enlarge the active set, which enlarges the subdifferential hull and
/// never shrinks it.
pub const TOL_ACTIVE: f64 = 1e-9;

/// Value tolerance for extension comparisons. Looser than the geometry
/// tolerances because iterative subproblems accumulate error.
pub const TOL_EXT: f64 = 1e-6;

/// Optimality residual tolerance for proximal points.
pub const TOL_ENV_RESIDUAL: f64 = 1e-7;

/// Value tolerance for envelope comparisons against the grid oracle.
pub const TOL_ENV_VALUE: f64 = 1e-5;

/// Ambient dimension cap for vertex enumeration of problem data.
pub const DIM_CAP: usize = 4;

/// Dimension cap for internal enumerations in multiplier space (e.g. when
/// intersecting a subdifferential with a dual ball).
pub const INTERNAL_DIM_CAP: usize = 8;

/// Default cap on the number of cells produced by the cell enumeration.
pub const CELL_CAP: usize = 100_000;

/// Hard iteration cap for active-set loops before falling back to projected
/// gradient.
pub const ACTIVE_SET_MAX_ITERS: usize = 10_000;

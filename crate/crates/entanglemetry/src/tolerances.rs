//! Numerical tolerances used throughout the crate, in one place.
//!
//! Three regimes are kept apart deliberately:
//!
//! * machine-precision checks (`1e-12`) validate identities that only
//!   accumulate a handful of rounding steps,
//! * inequality margins (`-1e-9`) tolerate the noise of 16-dimensional
//!   partial traces without masking genuine violations,
//! * the zero-concurrence threshold (`1e-7`) sits five orders of magnitude
//!   above partial-trace noise, so separability classification never
//!   flickers on double-precision dust.

/// Input vectors may deviate from unit norm by this much and still be
/// accepted by the strict constructor (decimal-literal round-off from
/// parsed expressions lands well inside this band).
pub const NORM_INPUT: f64 = 1e-6;

/// Post-normalization residual allowed on a constructed state.
pub const NORM_POST: f64 = 1e-12;

/// Elementwise Hermiticity and unit-trace residual on reduced densities.
pub const DENSITY_RESIDUAL: f64 = 1e-12;

/// Reduced-density eigenvalues may dip this far below zero before a
/// density matrix is considered invalid.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Absolute slack on triangle/polygon inequality margins.
pub const INEQUALITY_MARGIN: f64 = -1e-9;

/// Strict inequalities must clear this bar when their nonzero
/// preconditions hold.
pub const STRICT_MARGIN: f64 = 1e-12;

/// A concurrence below this value classifies its cut as separable.
pub const ZERO_CONCURRENCE: f64 = 1e-7;

/// Heron radicands in `[-RADICAND_CLAMP, 0)` are treated as exactly zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

/// Degenerate-geometry identities (equal sides, equal diagonals when a
/// diagonal vanishes) are asserted to this bound.
pub const COLLINEARITY: f64 = 1e-6;

/// Agreement required between a reduced three-qubit fill triangle and the
/// matching quadrilateral half.
pub const FILL_REDUCTION: f64 = 1e-9;

/// Exported planar vertices must reproduce the declared side lengths to
/// this bound.
pub const VERTEX_RECONSTRUCTION: f64 = 1e-9;

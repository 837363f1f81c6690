//! Central numeric tolerances.
//!
//! Two verification regimes are used everywhere:
//!
//! * **pointwise-algebra identities** — consequences of matrix algebra and
//!   quadrature bookkeeping that hold to roundoff and are asserted at
//!   [`EXACT`] / [`ALGEBRA_DEFECT`];
//! * **integration-by-parts identities** — claims that involve a discrete
//!   Stokes step and therefore only hold in the limit; these are asserted as
//!   convergence orders ≥ [`ORDER_MIN`] under mesh refinement.

/// Anti-Hermitian/traceless defect allowed at `AlgElement` construction,
/// relative to (1 + ‖x‖).
pub const ALGEBRA_DEFECT: f64 = 1e-12;

/// Unitarity and determinant defect allowed at `GroupElement` construction.
pub const GROUP_DEFECT: f64 = 1e-10;

/// Drift beyond which exponentials and group products are polar-corrected.
pub const REPROJECT_DRIFT: f64 = 1e-12;

/// Largest su(n) projection drift tolerated after stencil operations.
pub const PROJECTION_DRIFT_MAX: f64 = 1e-10;

/// Default tolerance for exact-class identities.
pub const EXACT: f64 = 1e-10;

/// Tight tolerance for identities that are pure matrix algebra.
pub const EXACT_TIGHT: f64 = 1e-12;

/// Default relative residual for iterative solvers.
pub const SOLVER_TOL: f64 = 1e-10;

/// Minimum acceptable estimated convergence order for O(h²) claims.
pub const ORDER_MIN: f64 = 1.9;

/// Residuals below this are considered saturated at roundoff and no
/// convergence order is estimated from them.
pub const SATURATION: f64 = 1e-13;

/// Flatness threshold factor: a connection counts as flat when
/// ‖F_A‖ ≤ FLATNESS_FACTOR · h² · (1 + ‖A‖), and a direction a when
/// ‖d_A a‖ ≤ FLATNESS_FACTOR · h² · ‖a‖.
pub const FLATNESS_FACTOR: f64 = 10.0;

/// Agreement required between the CG solver and the dense direct oracle.
pub const DENSE_ORACLE: f64 = 1e-8;

/// Default step for central finite differences in connection directions;
/// one Richardson level on top of this reaches the roundoff floor for the
/// polynomial functionals this crate differentiates.
pub const FD_STEP: f64 = 1e-3;

//! Sweeps, figure presets, slope fitting, error-floor detection and
//! analytic-versus-simulation validation.
//!
//! Grid points are independent: analytic values are evaluated in parallel,
//! Monte Carlo points reuse the simulator's chunked parallelism, and the
//! resulting rows are assembled in grid order.

mod fit;
mod presets;
mod sweep;
mod validate;

pub use fit::{detect_error_floor, fit_diversity_order, DiversityReport, FitError, FLOOR_TOLERANCE};
pub use presets::{figure, Figure, Series, DEFAULT_TRIALS, FIGURES};
pub use sweep::{
    linear_grid, run_sweep, Axis, CopPoint, Provenance, Quantity, SweepError, SweepResult, SweepSpec,
};
pub use validate::{
    validate, validate_against, ValidationError, ValidationPoint, ValidationReport, MIN_TRIALS,
    REPORT_FLOOR,
};

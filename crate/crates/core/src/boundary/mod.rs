//! Horofunction boundary: Busemann functions, Gromov products, detour cost
//! and the cone metrics on parts.

mod characterize;
mod cone;
mod detour;
mod gromov;
mod horofunction;

pub use characterize::{
    classify_pair, flat_membership_test, peirce_zero_test, translation_action_check,
    FlatMembership, PairClass, PeirceZero,
};
pub use cone::{cone_m, hilbert, thompson, ConePoint};
pub use detour::{
    detour_cost, detour_cost_numeric, detour_metric, part_cross_section, part_of,
    DEFAULT_DETOUR_SCHEDULE,
};
pub use gromov::{
    gromov_decomposition, gromov_numeric, gromov_singletons, gromov_singletons_with,
    DEFAULT_GROMOV_EXPONENTS,
};
pub use horofunction::{
    horofunction_eval, singleton_eval, xi_norm_lower_bound, HorofunctionSpec,
    DEFAULT_HORO_SCHEDULE,
};

/// Numeric limits above this value are reported as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 8.0;
/// Closed-form norms below this are treated as zero, giving `+inf`.
pub const INFINITY_THRESHOLD: f64 = 1e-10;
/// Successive schedule values closer than this count as converged.
pub const LIMIT_TOL: f64 = 1e-6;

/// One evaluation along a limit schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub value: f64,
}

/// Result of a limit evaluated along a schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub value: f64,
    pub converged: bool,
    pub divergent: bool,
    pub trace: Vec<TracePoint>,
}

impl LimitReport {
    pub(crate) fn from_trace(trace: Vec<TracePoint>, value: f64, tol: f64) -> Self {
        let last_gap = trace
            .windows(2)
            .last()
            .map(|w| (w[1].value - w[0].value).abs())
            .unwrap_or(f64::INFINITY);
        let increasing = trace.windows(2).all(|w| w[1].value >= w[0].value);
        let divergent = value > DIVERGENCE_THRESHOLD && increasing && last_gap > tol;
        Self {
            value,
            converged: last_gap <= tol,
            divergent,
            trace,
        }
    }

    /// Successive differences of the trace values.
    pub fn differences(&self) -> Vec<f64> {
        self.trace
            .windows(2)
            .map(|w| w[1].value - w[0].value)
            .collect()
    }
}

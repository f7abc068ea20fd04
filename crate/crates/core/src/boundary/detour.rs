use super::cone::{cone_m, ConePoint};
use super::horofunction::{horofunction_eval_point, HorofunctionSpec};
use super::{LimitReport, TracePoint, LIMIT_TOL};
use crate::error::Result;
use crate::geometry::{caratheodory_distance_points, BallPoint};
use crate::tripotent::{self, Tripotent};

/// Outer schedule for the numeric detour cost; the inner horofunction limit
/// runs at `t + 10`, `t + 15`, `t + 20`.
pub const DEFAULT_DETOUR_SCHEDULE: [f64; 3] = [6.0, 8.0, 10.0];

/// The part of a horofunction, keyed by its tripotent `e`.
pub fn part_of(xi: &HorofunctionSpec) -> Tripotent {
    xi.tripotent()
}

/// `b = sum_i mu_i^2 c_i` as a point of the cone of `A(c)`.
pub fn part_cross_section(eta: &HorofunctionSpec) -> ConePoint {
    ConePoint::new(eta.tripotent(), &eta.weighted(), 1e-8).expect("weights lie in A(c)")
}

/// `H(xi, eta)`: `+inf` unless `c <= e`, otherwise `1/2 log M(b/a)` in `A(e)`.
pub fn detour_cost(xi: &HorofunctionSpec, eta: &HorofunctionSpec, tol: f64) -> Result<f64> {
    xi.space().ensure_same(eta.space())?;
    let e = xi.tripotent();
    let c = eta.tripotent();
    if !tripotent::order_leq(&c, &e, tol)? {
        return Ok(f64::INFINITY);
    }
    let a = ConePoint::new(e.clone(), &xi.weighted(), tol)?;
    let b = ConePoint::new(e, &eta.weighted(), tol)?;
    Ok(0.5 * cone_m(&b, &a)?.ln())
}

/// `delta(xi, eta) = H(xi, eta) + H(eta, xi)`.
pub fn detour_metric(xi: &HorofunctionSpec, eta: &HorofunctionSpec, tol: f64) -> Result<f64> {
    Ok(detour_cost(xi, eta, tol)? + detour_cost(eta, xi, tol)?)
}

/// `d(0, gamma_xi(t)) + eta(gamma_xi(t))` along the schedule.
pub fn detour_cost_numeric(
    xi: &HorofunctionSpec,
    eta: &HorofunctionSpec,
    schedule: &[f64],
) -> Result<LimitReport> {
    xi.space().ensure_same(eta.space())?;
    let ray = xi.ray();
    let origin = BallPoint::origin(xi.space());
    let mut trace = Vec::with_capacity(schedule.len());
    for &t in schedule {
        let g = ray.at(t)?;
        let inner = horofunction_eval_point(eta, &g, &[t + 10.0, t + 15.0, t + 20.0])?;
        let value = caratheodory_distance_points(&origin, &g)? + inner.value;
        trace.push(TracePoint { t, value });
    }
    let value = trace
        .last()
        .map(|p| p.value)
        .ok_or_else(|| crate::Error::Invalid("empty schedule".into()))?;
    Ok(LimitReport::from_trace(trace, value, LIMIT_TOL))
}

use super::{LimitReport, TracePoint, INFINITY_THRESHOLD, LIMIT_TOL};
use crate::error::{Error, Result};
use crate::geometry::{caratheodory_distance_points, BallPoint};
use crate::space::Element;
use crate::triple;
use crate::tripotent::{self, Tripotent};

/// Exponents `k` of the schedule `t = s = 1 - 10^{-k}`.
pub const DEFAULT_GROMOV_EXPONENTS: [u32; 6] = [3, 4, 5, 6, 7, 8];

fn ensure_minimal_pair(u: &Tripotent, v: &Tripotent) -> Result<()> {
    u.space().ensure_same(v.space())?;
    if !tripotent::is_minimal(u)? || !tripotent::is_minimal(v)? {
        return Err(Error::NotMinimal);
    }
    Ok(())
}

/// `<Xi_u | Xi_v>_0 = 1/2 log(4 / |P_2(u) B(u,v) v|)`, or `+inf`.
pub fn gromov_singletons(u: &Tripotent, v: &Tripotent) -> Result<f64> {
    gromov_singletons_with(u, v, |x| x)
}

/// [`gromov_singletons`] with a perturbation applied to the Bergman image;
/// used to exercise the verification harness.
pub fn gromov_singletons_with(
    u: &Tripotent,
    v: &Tripotent,
    perturb: impl Fn(Element) -> Element,
) -> Result<f64> {
    ensure_minimal_pair(u, v)?;
    let bv = perturb(triple::bergman_apply(u.element(), v.element(), v.element())?);
    let p2 = triple::quadratic_op(u.element(), &triple::quadratic_op(u.element(), &bv)?)?;
    let norm = p2.spectral_norm();
    if norm < INFINITY_THRESHOLD {
        return Ok(f64::INFINITY);
    }
    Ok(0.5 * (4.0 / norm).ln())
}

/// The same product from the Peirce decomposition of `v` relative to `u`:
/// `1/2 log(2 / |Re mu - |mu|^2 - lambda|)` with `P_2(u) v = mu u` and
/// `{b, b, u} = lambda u` for `b = P_1(u) v`.
pub fn gromov_decomposition(u: &Tripotent, v: &Tripotent) -> Result<f64> {
    ensure_minimal_pair(u, v)?;
    let (a, b, _) = tripotent::peirce_components(u, v.element())?;
    let mu = tripotent::coefficient_along(u, &a);
    let bbu = triple::triple_product(&b, &b, u.element())?;
    let lambda = tripotent::coefficient_along(u, &bbu);
    let denom = (mu.re - mu.norm_sqr() - lambda).norm();
    if 2.0 * denom < INFINITY_THRESHOLD {
        return Ok(f64::INFINITY);
    }
    Ok(0.5 * (2.0 / denom).ln())
}

/// `tanh^{-1}(1 - eps)` without forming `1 - eps`.
fn atanh_one_minus(eps: f64) -> f64 {
    0.5 * ((2.0 - eps) / eps).ln()
}

/// `(t u | s v)_0 = d(tu, 0) + d(0, sv) - d(tu, sv)` along `t = s = 1 - 10^{-k}`,
/// with a Richardson step on the last two values when they stay finite.
pub fn gromov_numeric(u: &Tripotent, v: &Tripotent, exponents: &[u32]) -> Result<LimitReport> {
    ensure_minimal_pair(u, v)?;
    if exponents.is_empty() {
        return Err(Error::Invalid("empty schedule".into()));
    }
    let space = u.space();
    let mut trace = Vec::with_capacity(exponents.len());
    for &k in exponents {
        let eps = 10f64.powi(-(k as i32));
        let r = atanh_one_minus(eps);
        let tu = BallPoint::from_rapidities_unchecked(space, std::slice::from_ref(u), &[r])?;
        let sv = BallPoint::from_rapidities_unchecked(space, std::slice::from_ref(v), &[r])?;
        let value = 2.0 * r - caratheodory_distance_points(&tu, &sv)?;
        trace.push(TracePoint {
            t: 1.0 - eps,
            value,
        });
    }
    let n = trace.len();
    let last = trace[n - 1].value;
    let mut report = LimitReport::from_trace(trace, last, LIMIT_TOL);
    if !report.divergent && n >= 2 {
        // errors shrink by a factor of 10 per step
        let prev = report.trace[n - 2].value;
        report.value = last + (last - prev) / 9.0;
    }
    Ok(report)
}

use rand::Rng;

use super::{LimitReport, TracePoint, LIMIT_TOL};
use crate::error::{Error, Result};
use crate::geometry::{caratheodory_distance_points, BallPoint, GeodesicRay};
use crate::random;
use crate::space::{Element, TripleSpace, C64};
use crate::triple;
use crate::tripotent::{self, Tripotent};

pub const DEFAULT_HORO_SCHEDULE: [f64; 3] = [10.0, 15.0, 20.0];

/// Data `(e_i, lambda_i)` of a horofunction: mutually orthogonal minimal
/// tripotents with weights in `(0, 1]` whose maximum is 1.
#[derive(Clone, Debug)]
pub struct HorofunctionSpec {
    tripotents: Vec<Tripotent>,
    lambdas: Vec<f64>,
}

impl HorofunctionSpec {
    pub fn new(tripotents: Vec<Tripotent>, lambdas: Vec<f64>, tol: f64) -> Result<Self> {
        if tripotents.is_empty() || tripotents.len() != lambdas.len() {
            return Err(Error::shape(
                "one lambda per tripotent, at least one",
                format!("{} tripotents, {} lambdas", tripotents.len(), lambdas.len()),
            ));
        }
        let space = tripotents[0].space().clone();
        if tripotents.len() > space.rank() {
            return Err(Error::Invalid(format!(
                "{} tripotents exceed the rank {}",
                tripotents.len(),
                space.rank()
            )));
        }
        for (i, a) in tripotents.iter().enumerate() {
            space.ensure_same(a.space())?;
            if !tripotent::is_minimal(a)? {
                return Err(Error::NotMinimal);
            }
            for b in &tripotents[i + 1..] {
                if !tripotent::is_orthogonal(a.element(), b.element(), tol)? {
                    return Err(Error::NotOrthogonal);
                }
            }
        }
        if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
            return Err(Error::Invalid(format!("lambda {l} is not in (0, 1]")));
        }
        let max = lambdas.iter().copied().fold(0.0, f64::max);
        if (max - 1.0).abs() > tol {
            return Err(Error::Invalid(format!("largest lambda is {max}, not 1")));
        }
        Ok(Self {
            tripotents,
            lambdas,
        })
    }

    pub fn singleton(e: Tripotent) -> Result<Self> {
        Self::new(vec![e], vec![1.0], crate::DEFAULT_TOL)
    }

    pub fn tripotents(&self) -> &[Tripotent] {
        &self.tripotents
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn space(&self) -> &TripleSpace {
        self.tripotents[0].space()
    }

    pub fn len(&self) -> usize {
        self.tripotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tripotents.is_empty()
    }

    /// The boundary tripotent `e = sum_i e_i`.
    pub fn tripotent(&self) -> Tripotent {
        let sum = self
            .tripotents
            .iter()
            .fold(Element::zeros(self.space()), |acc, t| acc + t.element().clone());
        Tripotent::new(sum, 1e-6).expect("orthogonal sum of tripotents")
    }

    /// `sum_i lambda_i^2 e_i`.
    pub fn weighted(&self) -> Element {
        self.tripotents
            .iter()
            .zip(&self.lambdas)
            .fold(Element::zeros(self.space()), |acc, (t, l)| {
                acc + t.element() * (l * l)
            })
    }

    pub fn ray(&self) -> GeodesicRay {
        GeodesicRay::new(self.tripotents.clone(), &self.lambdas).expect("validated spec")
    }

    /// Pairs sorted by weight descending, then by the entries of the tripotent.
    pub fn canonical(&self) -> Vec<(f64, Vec<f64>)> {
        let mut pairs: Vec<(f64, Vec<f64>)> = self
            .lambdas
            .iter()
            .zip(&self.tripotents)
            .map(|(l, t)| {
                let key = t
                    .element()
                    .to_vector()
                    .iter()
                    .flat_map(|z| [z.re, z.im])
                    .collect();
                (*l, key)
            })
            .collect();
        pairs.sort_by(|a, b| {
            b.0.total_cmp(&a.0).then_with(|| {
                a.1.iter()
                    .zip(&b.1)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        pairs
    }

    /// Equality up to reordering of the pairs, within `tol`.
    pub fn equivalent(&self, other: &Self, tol: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.len() == b.len()
            && a.iter().zip(&b).all(|(x, y)| {
                (x.0 - y.0).abs() <= tol
                    && x.1.iter().zip(&y.1).all(|(p, q)| (p - q).abs() <= tol)
            })
    }
}

/// `Xi_e(z) = 1/2 log |B(z,z)^{-1/2} B(z,e) e|` for a minimal tripotent `e`.
pub fn singleton_eval(e: &Tripotent, z: &Element) -> Result<f64> {
    e.space().ensure_same(z.space())?;
    z.ensure_in_ball()?;
    if !tripotent::is_minimal(e)? {
        return Err(Error::NotMinimal);
    }
    Ok(singleton_eval_unchecked(e.element(), z))
}

pub(crate) fn singleton_eval_unchecked(e: &Element, z: &Element) -> f64 {
    let be = triple::bergman_apply(z, e, e).expect("same space");
    let v = triple::bergman_inv_sqrt_sandwich(z)
        .expect("z inside the ball")
        .apply(&be)
        .expect("same space");
    0.5 * v.spectral_norm().ln()
}

/// `lim_t [d(z, gamma(t)) - d(0, gamma(t))]` along the geodesic ray of `spec`.
pub fn horofunction_eval(
    spec: &HorofunctionSpec,
    z: &Element,
    schedule: &[f64],
) -> Result<LimitReport> {
    spec.space().ensure_same(z.space())?;
    horofunction_eval_point(spec, &BallPoint::new(z)?, schedule)
}

pub(crate) fn horofunction_eval_point(
    spec: &HorofunctionSpec,
    z: &BallPoint,
    schedule: &[f64],
) -> Result<LimitReport> {
    if schedule.is_empty() {
        return Err(Error::Invalid("empty schedule".into()));
    }
    let ray = spec.ray();
    let origin = BallPoint::origin(spec.space());
    let mut trace = Vec::with_capacity(schedule.len());
    for &t in schedule {
        let g = ray.at(t)?;
        let value = caratheodory_distance_points(z, &g)? - caratheodory_distance_points(&origin, &g)?;
        trace.push(TracePoint { t, value });
    }
    let value = trace.last().expect("non-empty").value;
    Ok(LimitReport::from_trace(trace, value, LIMIT_TOL))
}

/// Lower bound for the operator norm
/// `| sum_{i<=j} lambda_i lambda_j B(z,z)^{-1/2} B(z,e) P_ij |` on
/// `(V, spectral norm)`, from random extreme points refined by projected
/// ascent. A diagnostic only: the geodesic limit is the reference value.
pub fn xi_norm_lower_bound(
    spec: &HorofunctionSpec,
    z: &Element,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let space = spec.space().clone();
    space.ensure_same(z.space())?;
    z.ensure_in_ball()?;
    let e = spec.tripotent();
    let es = spec.tripotents();
    let p = es.len();
    let mut op = triple::ComplexLinearOperator::zero(&space, &space);
    for i in 1..=p {
        for j in i..=p {
            let w = spec.lambdas[i - 1] * spec.lambdas[j - 1];
            let pij = tripotent::joint_peirce_unchecked(&space, es, i, j);
            op = op.add(&pij.scale(C64::new(w, 0.0)))?;
        }
    }
    let front = triple::bergman_inv_sqrt(z)?.compose(&triple::bergman_operator(z, e.element())?)?;
    let op = front.compose(&op)?;
    let ratio = |x: &Element| -> f64 {
        let n = x.spectral_norm();
        if n == 0.0 {
            0.0
        } else {
            op.apply(x).expect("same space").spectral_norm() / n
        }
    };
    let mut rng = random::rng(seed);
    let mut best_x = e.element().clone();
    let mut best = ratio(&best_x);
    for _ in 0..samples {
        let candidate = if rng.random::<bool>() {
            random::tripotent(&mut rng, &space).into_element()
        } else {
            random::element(&mut rng, &space)
        };
        let r = ratio(&candidate);
        if r > best {
            best = r;
            best_x = candidate;
        }
    }
    let mut step = 0.5;
    for _ in 0..samples {
        let dir = random::element(&mut rng, &space);
        let scale = step / dir.spectral_norm().max(1e-300);
        let trial = &best_x + &(dir * scale);
        let trial = &trial * (1.0 / trial.spectral_norm());
        let r = ratio(&trial);
        if r > best {
            best = r;
            best_x = trial;
        } else {
            step *= 0.97;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FlatChart;
    use crate::tripotent::Frame;
    use crate::DEFAULT_TOL;

    fn disc(z: f64) -> Element {
        Element::from_scalars(&[C64::new(z, 0.0)])
    }

    fn m22_frame() -> Frame {
        Frame::standard(&TripleSpace::matrices(2, 2))
    }

    #[test]
    fn singleton_on_disc() {
        let e = Frame::standard(&TripleSpace::disc()).members()[0].clone();
        for z in [0.0, 0.3, -0.7, 0.99] {
            let v = singleton_eval(&e, &disc(z)).unwrap();
            assert!((v + f64::atanh(z)).abs() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn singleton_on_flat_and_v0() {
        let f = m22_frame();
        let x = f.combination(&[0.4, -0.6]);
        assert!((singleton_eval(&f.members()[0], &x).unwrap() + 0.4f64.atanh()).abs() < 1e-13);
        assert!((singleton_eval(&f.members()[1], &x).unwrap() - 0.6f64.atanh()).abs() < 1e-13);
        let v0 = f.combination(&[0.0, 0.8]);
        assert!(singleton_eval(&f.members()[0], &v0).unwrap().abs() < 1e-14);
        let not_minimal = Tripotent::new(f.combination(&[1.0, 1.0]), DEFAULT_TOL).unwrap();
        assert!(matches!(singleton_eval(&not_minimal, &v0), Err(Error::NotMinimal)));
    }

    #[test]
    fn limit_matches_singleton() {
        let f = m22_frame();
        let spec = HorofunctionSpec::singleton(f.members()[0].clone()).unwrap();
        let z = Element::matrix_unit(f.space(), 0, 0, 1) * C64::new(0.3, 0.2) + f.combination(&[0.1, -0.5]);
        let report = horofunction_eval(&spec, &z, &DEFAULT_HORO_SCHEDULE).unwrap();
        assert!(report.converged);
        let closed = singleton_eval(&f.members()[0], &z).unwrap();
        assert!((report.value - closed).abs() < 1e-6);
        let at0 = horofunction_eval(&spec, &Element::zeros(f.space()), &DEFAULT_HORO_SCHEDULE).unwrap();
        assert!(at0.value.abs() < 1e-9);
    }

    #[test]
    fn rank_two_limit_on_flat() {
        let f = m22_frame();
        let spec = HorofunctionSpec::new(f.members().to_vec(), vec![1.0, 1.0], DEFAULT_TOL).unwrap();
        // the maximum over both coordinates is attained by the untouched one
        let z = f.combination(&[0.5, 0.0]);
        let r = horofunction_eval(&spec, &z, &DEFAULT_HORO_SCHEDULE).unwrap();
        assert!(r.value.abs() < 1e-9);
        let z = f.combination(&[0.5, 0.5]);
        let r = horofunction_eval(&spec, &z, &DEFAULT_HORO_SCHEDULE).unwrap();
        assert!((r.value + 0.5f64.atanh()).abs() < 1e-9);

        let spec = HorofunctionSpec::new(f.members().to_vec(), vec![1.0, 0.25], DEFAULT_TOL).unwrap();
        let chart = FlatChart::new(f.clone());
        let p = [0.3, -0.8];
        let z = chart.exp0(&p).unwrap();
        let expected = (0.0 - p[0]).max(0.25f64.ln() - p[1]);
        let r = horofunction_eval(&spec, &z, &DEFAULT_HORO_SCHEDULE).unwrap();
        assert!((r.value - expected).abs() < 1e-9);
    }

    #[test]
    fn operator_norm_diagnostic_is_a_lower_bound() {
        let f = m22_frame();
        let spec = HorofunctionSpec::singleton(f.members()[0].clone()).unwrap();
        let z = f.combination(&[0.3, 0.1]) + Element::matrix_unit(f.space(), 0, 1, 0) * 0.2;
        let est = xi_norm_lower_bound(&spec, &z, 50, 1).unwrap();
        let exact = singleton_eval(&f.members()[0], &z).unwrap();
        assert!((0.5 * est.ln() - exact).abs() < 1e-12);
    }

    #[test]
    fn spec_validation_and_equivalence() {
        let f = m22_frame();
        let m = f.members().to_vec();
        assert!(HorofunctionSpec::new(m.clone(), vec![0.5, 0.5], DEFAULT_TOL).is_err());
        assert!(HorofunctionSpec::new(m.clone(), vec![1.0, 0.0], DEFAULT_TOL).is_err());
        let a = HorofunctionSpec::new(m.clone(), vec![1.0, 0.5], DEFAULT_TOL).unwrap();
        let b = HorofunctionSpec::new(vec![m[1].clone(), m[0].clone()], vec![0.5, 1.0], DEFAULT_TOL).unwrap();
        assert!(a.equivalent(&b, 1e-12));
        let bad = vec![m[0].clone(), m[0].clone()];
        assert!(matches!(
            HorofunctionSpec::new(bad, vec![1.0, 1.0], DEFAULT_TOL),
            Err(Error::NotOrthogonal)
        ));
    }
}

//! Möbius transformations, invariant distances, flats and geodesics on the
//! open unit ball `D`.
//!
//! Distances are computed from the defect operator
//! `(1 - w w^*)^{-1} = L_y (1 - y x^*) (1 - x x^*)^{-1} (1 - x y^*) L_y`
//! of `w = g_{-y}(x)`, with `L_y = (1 - y y^*)^{-1/2}`. Carrying `L_y`
//! explicitly in a [`BallPoint`] keeps points with `1 - |y|` far below
//! machine precision usable.

use crate::error::{Error, Result};
use crate::linalg;
use crate::space::{CMatrix, Element, TripleSpace, C64};
use crate::triple::{self, ComplexLinearOperator};
use crate::tripotent::{self, Frame, Tripotent};

/// Residual bound for the linear solve inside [`mobius`].
pub const MOBIUS_SOLVE_RESIDUAL: f64 = 1e-12;

/// Below this eigenvalue of the defect operator, singular values are read off
/// the Möbius image directly.
const DIRECT_ROUTE_LIMIT: f64 = 1.5;

/// `g_a(x) = a + B(a,a)^{1/2} (id + x box a)^{-1} x`.
pub fn mobius(a: &Element, x: &Element) -> Result<Element> {
    a.space().ensure_same(x.space())?;
    a.ensure_in_ball()?;
    x.ensure_in_ball()?;
    let space = a.space();
    let op = triple::box_operator(x, a)?;
    let n = space.dim();
    let m = CMatrix::identity(n, n) + op.matrix();
    let v = linalg::solve(&m, &x.to_vector(), MOBIUS_SOLVE_RESIDUAL)?;
    let w = Element::from_vector(space, &v)?;
    let shifted = triple::bergman_sqrt(a)?.apply(&w)?;
    Ok(a + &shifted)
}

/// Matrix form of `g_a(x)` for type-I factors,
/// `(1 - a a^*)^{-1/2} (x + a) (1 + a^* x)^{-1} (1 - a^* a)^{1/2}`.
pub fn mobius_closed_form(a: &Element, x: &Element) -> Result<Element> {
    a.space().ensure_same(x.space())?;
    a.ensure_in_ball()?;
    x.ensure_in_ball()?;
    let mut blocks = Vec::with_capacity(a.blocks().len());
    for (ab, xb) in a.blocks().iter().zip(x.blocks()) {
        let (p, q) = ab.shape();
        let left = linalg::pd_inv_sqrt(&(CMatrix::identity(p, p) - ab * ab.adjoint()))?;
        let right = linalg::psd_sqrt(&(CMatrix::identity(q, q) - ab.adjoint() * ab))?;
        let inner = CMatrix::identity(q, q) + ab.adjoint() * xb;
        let inv = inner.try_inverse().ok_or(Error::LinearSolve {
            residual: f64::INFINITY,
            condition: f64::INFINITY,
        })?;
        blocks.push(left * (xb + ab) * inv * right);
    }
    Element::new(a.space().clone(), blocks)
}

/// Derivative `g_a'(b) = B(a,a)^{1/2} B(b,-a)^{-1}`.
pub fn mobius_derivative(a: &Element, b: &Element) -> Result<ComplexLinearOperator> {
    a.ensure_in_ball()?;
    b.ensure_in_ball()?;
    let sqrt = triple::bergman_sqrt(a)?.to_operator();
    let inv = triple::bergman_operator(b, &-a)?.inverse()?;
    sqrt.compose(&inv)
}

/// Geodesic symmetry `S_x = g_x o (-id) o g_{-x}` about `x`.
pub fn geodesic_symmetry(x: &Element, y: &Element) -> Result<Element> {
    let inner = mobius(&-x, y)?;
    mobius(x, &-inner)
}

/// A point of `D` with the left defect factor `(1 - y y^*)^{-1/2}` of every
/// block stored alongside it.
#[derive(Clone, Debug)]
pub struct BallPoint {
    element: Element,
    left_inv_sqrt: Vec<CMatrix>,
}

impl BallPoint {
    pub fn origin(space: &TripleSpace) -> Self {
        let left_inv_sqrt = space
            .factors()
            .iter()
            .map(|f| CMatrix::identity(f.rows, f.rows))
            .collect();
        Self {
            element: Element::zeros(space),
            left_inv_sqrt,
        }
    }

    pub fn new(x: &Element) -> Result<Self> {
        x.ensure_in_ball()?;
        let left_inv_sqrt = x
            .blocks()
            .iter()
            .map(|b| {
                let p = b.nrows();
                let (u, s, _) = linalg::thin_svd(b);
                let mut l = CMatrix::identity(p, p);
                for (k, sigma) in s.iter().enumerate() {
                    let c = 1.0 / ((1.0 - sigma) * (1.0 + sigma)).sqrt() - 1.0;
                    let col = u.column(k).into_owned();
                    l += linalg::outer(&col, &col) * C64::new(c, 0.0);
                }
                l
            })
            .collect();
        Ok(Self {
            element: x.clone(),
            left_inv_sqrt,
        })
    }

    /// `sum_i tanh(r_i) e_i` for mutually orthogonal minimal tripotents.
    pub fn from_rapidities(tripotents: &[Tripotent], rapidities: &[f64], tol: f64) -> Result<Self> {
        if tripotents.len() != rapidities.len() {
            return Err(Error::shape(tripotents.len(), rapidities.len()));
        }
        let space = tripotents
            .first()
            .map(|t| t.space().clone())
            .ok_or_else(|| Error::Invalid("no tripotents".into()))?;
        for (i, a) in tripotents.iter().enumerate() {
            if !tripotent::is_minimal(a)? {
                return Err(Error::NotMinimal);
            }
            for b in &tripotents[i + 1..] {
                if !tripotent::is_orthogonal(a.element(), b.element(), tol)? {
                    return Err(Error::NotOrthogonal);
                }
            }
        }
        Self::from_rapidities_unchecked(&space, tripotents, rapidities)
    }

    pub(crate) fn from_rapidities_unchecked(
        space: &TripleSpace,
        tripotents: &[Tripotent],
        rapidities: &[f64],
    ) -> Result<Self> {
        let mut point = Self::origin(space);
        let mut element = Element::zeros(space);
        for (t, &r) in tripotents.iter().zip(rapidities) {
            if !r.is_finite() {
                return Err(Error::Invalid(format!("rapidity {r} is not finite")));
            }
            let (k, u, _) = t.rank_one_parts()?;
            element = element + t.element() * r.tanh();
            point.left_inv_sqrt[k] += linalg::outer(&u, &u) * C64::new(r.cosh() - 1.0, 0.0);
        }
        point.element = element;
        Ok(point)
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn space(&self) -> &TripleSpace {
        self.element.space()
    }

    /// True when the stored element is numerically inside the unit ball.
    fn representable(&self) -> bool {
        self.element.is_in_ball()
    }
}

/// `tanh^{-1}` of the singular values of `g_{-y}(x)` over all blocks, sorted
/// descending. These are the coordinates of `g_{-y}(x)` in its own flat.
pub fn rapidity_spectrum(x: &BallPoint, y: &BallPoint) -> Result<Vec<f64>> {
    x.space().ensure_same(y.space())?;
    if x.element == y.element {
        return Ok(vec![0.0; x.space().rank()]);
    }
    let mut direct: Option<Vec<Vec<f64>>> = None;
    let mut out = Vec::new();
    for k in 0..x.space().num_factors() {
        let xb = x.element.block(k);
        let yb = y.element.block(k);
        let (p, q) = xb.shape();
        let lx = &x.left_inv_sqrt[k];
        let ly = &y.left_inv_sqrt[k];
        let a = CMatrix::identity(p, p) - yb * xb.adjoint();
        let lxa = lx * a.adjoint() * ly;
        let defect = lxa.adjoint() * &lxa;
        let (mut mu, _) = linalg::hermitian_eigen(&defect);
        mu.reverse();
        for (i, &m) in mu.iter().take(p.min(q)).enumerate() {
            if m < DIRECT_ROUTE_LIMIT && x.representable() && y.representable() {
                if direct.is_none() {
                    let w = mobius(&-y.element(), x.element())?;
                    direct = Some(
                        w.blocks()
                            .iter()
                            .map(|b| linalg::thin_svd(b).1)
                            .collect(),
                    );
                }
                let sigma = direct.as_ref().expect("just computed")[k][i].min(1.0);
                out.push(sigma.atanh());
            } else {
                out.push(rapidity_from_defect(m));
            }
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// `tanh^{-1}(s)` with `1 - s^2 = 1/mu`.
fn rapidity_from_defect(mu: f64) -> f64 {
    if mu <= 1.0 {
        return 0.0;
    }
    let s = (1.0 - 1.0 / mu).sqrt();
    (1.0 + s).ln() + 0.5 * mu.ln()
}

pub fn caratheodory_distance_points(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    Ok(rapidity_spectrum(x, y)?.first().copied().unwrap_or(0.0))
}

/// `d(x, y) = tanh^{-1} |g_{-y}(x)|`.
pub fn caratheodory_distance(x: &Element, y: &Element) -> Result<f64> {
    caratheodory_distance_points(&BallPoint::new(x)?, &BallPoint::new(y)?)
}

pub fn bergman_distance_points(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    Ok(rapidity_spectrum(x, y)?
        .iter()
        .map(|r| r * r)
        .sum::<f64>()
        .sqrt())
}

/// `d_B(x, y) = (sum_i (tanh^{-1} s_i)^2)^{1/2}` over the singular values of
/// `g_{-x}(y)`.
pub fn bergman_distance(x: &Element, y: &Element) -> Result<f64> {
    bergman_distance_points(&BallPoint::new(x)?, &BallPoint::new(y)?)
}

/// Coordinates on the flat spanned by a frame.
#[derive(Clone, Debug)]
pub struct FlatChart {
    frame: Frame,
}

impl FlatChart {
    pub fn new(frame: Frame) -> Self {
        Self { frame }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// `sum_i lambda_i e_i`, requiring `|lambda_i| < 1`.
    pub fn point(&self, lambdas: &[f64]) -> Result<Element> {
        self.check_len(lambdas)?;
        if let Some(l) = lambdas.iter().find(|l| l.abs() >= 1.0) {
            return Err(Error::OutsideDomain { norm: l.abs() });
        }
        Ok(self.frame.combination(lambdas))
    }

    /// `exp_0(p) = sum_i tanh(p_i) e_i`.
    pub fn exp0(&self, p: &[f64]) -> Result<Element> {
        self.check_len(p)?;
        let t: Vec<f64> = p.iter().map(|x| x.tanh()).collect();
        Ok(self.frame.combination(&t))
    }

    pub fn exp0_point(&self, p: &[f64]) -> Result<BallPoint> {
        self.check_len(p)?;
        BallPoint::from_rapidities_unchecked(self.frame.space(), self.frame.members(), p)
    }

    /// Real coordinates `Re <e_i, x>` and the distance from `x` to their
    /// recombination.
    pub fn coordinates(&self, x: &Element) -> Result<(Vec<f64>, f64)> {
        self.frame.space().ensure_same(x.space())?;
        let coords: Vec<f64> = self
            .frame
            .members()
            .iter()
            .map(|e| tripotent::coefficient_along(e, x).re)
            .collect();
        let residual = (x - &self.frame.combination(&coords)).spectral_norm();
        Ok((coords, residual))
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() == self.frame.len() {
            Ok(())
        } else {
            Err(Error::shape(self.frame.len(), v.len()))
        }
    }
}

/// Largest `|g_a(g_b(x)) - g_c(x)|` over `samples`, where `a`, `b`, `c` lie
/// in the flat with rapidities `alpha`, `beta`, `alpha + beta`.
pub fn flat_compose_mobius(
    frame: &Frame,
    alpha: &[f64],
    beta: &[f64],
    samples: &[Element],
) -> Result<f64> {
    let chart = FlatChart::new(frame.clone());
    let a = chart.exp0(alpha)?;
    let b = chart.exp0(beta)?;
    let gamma: Vec<f64> = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
    let c = chart.exp0(&gamma)?;
    let mut worst: f64 = 0.0;
    for x in samples {
        let lhs = mobius(&a, &mobius(&b, x)?)?;
        let rhs = mobius(&c, x)?;
        worst = worst.max((lhs - rhs).spectral_norm());
    }
    Ok(worst)
}

/// `sum_{i<=j} (1 - a_i b_i)(1 - a_j b_j) P_ij`, with index 0 carrying the
/// factor 1.
pub fn bergman_on_flat(frame: &Frame, a: &[f64], b: &[f64]) -> Result<ComplexLinearOperator> {
    bergman_on_flat_with(frame, a, b, |x| x)
}

pub(crate) fn bergman_on_flat_with(
    frame: &Frame,
    a: &[f64],
    b: &[f64],
    perturb: impl Fn(f64) -> f64,
) -> Result<ComplexLinearOperator> {
    if a.len() != frame.len() || b.len() != frame.len() {
        return Err(Error::shape(frame.len(), a.len().min(b.len())));
    }
    let factor = |i: usize| {
        if i == 0 {
            1.0
        } else {
            perturb(1.0 - a[i - 1] * b[i - 1])
        }
    };
    let space = frame.space();
    let mut acc = ComplexLinearOperator::zero(space, space);
    let n = frame.len();
    for i in 0..=n {
        for j in i..=n {
            let p = tripotent::joint_peirce_unchecked(space, frame.members(), i, j);
            acc = acc.add(&p.scale(C64::new(factor(i) * factor(j), 0.0)))?;
        }
    }
    Ok(acc)
}

/// The geodesic `t -> sum_i tanh(t - alpha_i) e_i` with `alpha_i = -log lambda_i`.
#[derive(Clone, Debug)]
pub struct GeodesicRay {
    tripotents: Vec<Tripotent>,
    offsets: Vec<f64>,
}

impl GeodesicRay {
    pub fn new(tripotents: Vec<Tripotent>, lambdas: &[f64]) -> Result<Self> {
        if tripotents.len() != lambdas.len() || tripotents.is_empty() {
            return Err(Error::shape(tripotents.len(), lambdas.len()));
        }
        if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
            return Err(Error::Invalid(format!("lambda {l} is not in (0, 1]")));
        }
        let offsets = lambdas.iter().map(|l| -l.ln()).collect();
        Ok(Self { tripotents, offsets })
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn tripotents(&self) -> &[Tripotent] {
        &self.tripotents
    }

    pub fn at(&self, t: f64) -> Result<BallPoint> {
        let r: Vec<f64> = self.offsets.iter().map(|a| t - a).collect();
        BallPoint::from_rapidities_unchecked(self.tripotents[0].space(), &self.tripotents, &r)
    }
}

fn distance_table(points: &[Element]) -> Result<Vec<Vec<f64>>> {
    let pts: Vec<BallPoint> = points.iter().map(BallPoint::new).collect::<Result<_>>()?;
    let n = pts.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = caratheodory_distance_points(&pts[i], &pts[j])?;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    Ok(d)
}

/// `d(z_0, z_j) >= d(z_0, z_i) + d(z_i, z_j) - eps` for all `window <= i <= j`.
pub fn is_almost_geodesic(points: &[Element], eps: f64, window: usize) -> Result<bool> {
    if points.len() < 3 {
        return Err(Error::Invalid("at least three points are required".into()));
    }
    let d = distance_table(points)?;
    let n = points.len();
    for i in window..n {
        for j in i..n {
            if d[0][j] < d[0][i] + d[i][j] - eps {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `psi_n(z) = d(z, z_n) - d(z_0, z_n)` is almost non-increasing in
/// `n >= window`, tested at the sequence points and at `probes`.
pub fn is_almost_non_increasing(
    points: &[Element],
    probes: &[Element],
    eps: f64,
    window: usize,
) -> Result<bool> {
    if points.len() < 3 {
        return Err(Error::Invalid("at least three points are required".into()));
    }
    let seq: Vec<BallPoint> = points.iter().map(BallPoint::new).collect::<Result<_>>()?;
    let mut all: Vec<BallPoint> = seq.clone();
    for p in probes {
        all.push(BallPoint::new(p)?);
    }
    let base: Vec<f64> = seq
        .iter()
        .map(|z| caratheodory_distance_points(&seq[0], z))
        .collect::<Result<_>>()?;
    for z in &all {
        let psi: Vec<f64> = seq
            .iter()
            .zip(&base)
            .map(|(zn, b)| Ok(caratheodory_distance_points(z, zn)? - b))
            .collect::<Result<_>>()?;
        for i in window..psi.len() {
            for j in i..psi.len() {
                if psi[j] > psi[i] + eps {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

//! Linear maps between triples and sampled tests for distance-preserving maps.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{bergman_distance, caratheodory_distance, geodesic_symmetry, mobius};
use crate::random;
use crate::space::{CMatrix, Element, TripleSpace, C64};
use crate::triple::{space_invariants, tp, ComplexLinearOperator};
use crate::tripotent::{self, Tripotent};

pub const DEFAULT_SAMPLES: usize = 200;
pub const HOMOMORPHISM_TOL: f64 = 1e-10;
pub const ISOMETRY_TOL: f64 = 1e-9;
pub const ORIGIN_TOL: f64 = 1e-12;
pub const INDUCED_TOL: f64 = 1e-8;

/// Largest sample norm used when drawing points of `D`.
const SAMPLE_RADIUS: f64 = 0.9;

/// A map defined on the unit ball, consumed as a black box.
pub trait BallMap {
    fn domain(&self) -> &TripleSpace;
    fn codomain(&self) -> &TripleSpace;
    fn apply(&self, x: &Element) -> Result<Element>;
}

/// `x -> M x` or, when conjugate-linear, `x -> M conj(x)` on vectorised spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearTripleMap {
    domain: TripleSpace,
    codomain: TripleSpace,
    matrix: CMatrix,
    conjugate: bool,
}

impl LinearTripleMap {
    pub fn new(
        domain: TripleSpace,
        codomain: TripleSpace,
        matrix: CMatrix,
        conjugate: bool,
    ) -> Result<Self> {
        if matrix.shape() != (codomain.dim(), domain.dim()) {
            return Err(Error::shape(
                format!("{}x{}", codomain.dim(), domain.dim()),
                format!("{}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        Ok(Self {
            domain,
            codomain,
            matrix,
            conjugate,
        })
    }

    pub fn from_operator(op: &ComplexLinearOperator, conjugate: bool) -> Self {
        Self {
            domain: op.domain().clone(),
            codomain: op.codomain().clone(),
            matrix: op.matrix().clone(),
            conjugate,
        }
    }

    pub fn identity(space: &TripleSpace) -> Self {
        Self::from_operator(&ComplexLinearOperator::identity(space), false)
    }

    /// Entrywise complex conjugation.
    pub fn conjugation(space: &TripleSpace) -> Self {
        Self::from_operator(&ComplexLinearOperator::identity(space), true)
    }

    pub fn scaling(space: &TripleSpace, c: C64) -> Self {
        Self::from_operator(&ComplexLinearOperator::identity(space).scale(c), false)
    }

    /// Factorwise `x -> [x 0; 0 0]` into larger matrices.
    pub fn block_embedding(domain: &TripleSpace, codomain: &TripleSpace) -> Result<Self> {
        if domain.num_factors() != codomain.num_factors()
            || domain
                .factors()
                .iter()
                .zip(codomain.factors())
                .any(|(a, b)| a.rows > b.rows || a.cols > b.cols)
        {
            return Err(Error::shape(domain, codomain));
        }
        let op = ComplexLinearOperator::from_linear_fn(domain, codomain, |x| {
            let blocks = x
                .blocks()
                .iter()
                .zip(codomain.factors())
                .map(|(b, f)| {
                    let mut m = CMatrix::zeros(f.rows, f.cols);
                    m.view_mut((0, 0), b.shape()).copy_from(b);
                    m
                })
                .collect();
            Element::new(codomain.clone(), blocks).expect("shapes follow the codomain")
        });
        Ok(Self::from_operator(&op, false))
    }

    /// Factorwise `x -> U_k x W_k^*` for unitaries `U_k`, `W_k`.
    pub fn unitary_conjugation(
        space: &TripleSpace,
        left: &[CMatrix],
        right: &[CMatrix],
    ) -> Result<Self> {
        if left.len() != space.num_factors() || right.len() != space.num_factors() {
            return Err(Error::shape(space.num_factors(), left.len().min(right.len())));
        }
        for ((u, w), f) in left.iter().zip(right).zip(space.factors()) {
            if u.shape() != (f.rows, f.rows) || w.shape() != (f.cols, f.cols) {
                return Err(Error::shape(f, format!("{:?}, {:?}", u.shape(), w.shape())));
            }
        }
        let op = ComplexLinearOperator::from_linear_fn(space, space, |x| {
            x.map_blocks(|k, b| &left[k] * b * right[k].adjoint())
        });
        Ok(Self::from_operator(&op, false))
    }

    /// `z -> (z, ratio z)` from the disc into the bidisc. Norm-preserving for
    /// `|ratio| <= 1`, a triple homomorphism only for `|ratio| = 1` or `0`.
    pub fn disc_to_bidisc(ratio: C64) -> Self {
        let matrix = CMatrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), ratio]);
        Self {
            domain: TripleSpace::disc(),
            codomain: TripleSpace::bidisc(),
            matrix,
            conjugate: false,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_conjugate_linear(&self) -> bool {
        self.conjugate
    }

    fn map(&self, x: &Element) -> Element {
        let v = if self.conjugate {
            x.conj().to_vector()
        } else {
            x.to_vector()
        };
        Element::from_vector(&self.codomain, &(&self.matrix * v)).expect("shape checked")
    }
}

impl BallMap for LinearTripleMap {
    fn domain(&self) -> &TripleSpace {
        &self.domain
    }

    fn codomain(&self) -> &TripleSpace {
        &self.codomain
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        self.domain.ensure_same(x.space())?;
        Ok(self.map(x))
    }
}

/// `g_{post_n} o ... o g_{post_1} o L o g_{pre_n} o ... o g_{pre_1}`.
#[derive(Clone, Debug)]
pub struct MobiusComposite {
    pub pre: Vec<Element>,
    pub linear: LinearTripleMap,
    pub post: Vec<Element>,
}

impl MobiusComposite {
    pub fn new(pre: Vec<Element>, linear: LinearTripleMap, post: Vec<Element>) -> Result<Self> {
        for a in &pre {
            linear.domain.ensure_same(a.space())?;
            a.ensure_in_ball()?;
        }
        for a in &post {
            linear.codomain.ensure_same(a.space())?;
            a.ensure_in_ball()?;
        }
        Ok(Self { pre, linear, post })
    }
}

impl BallMap for MobiusComposite {
    fn domain(&self) -> &TripleSpace {
        &self.linear.domain
    }

    fn codomain(&self) -> &TripleSpace {
        &self.linear.codomain
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        let mut y = x.clone();
        for a in &self.pre {
            y = mobius(a, &y)?;
        }
        y = self.linear.apply(&y)?;
        for a in &self.post {
            y = mobius(a, &y)?;
        }
        Ok(y)
    }
}

/// A map given by a closure.
pub struct FnMap<F> {
    domain: TripleSpace,
    codomain: TripleSpace,
    f: F,
}

impl<F: Fn(&Element) -> Result<Element>> FnMap<F> {
    pub fn new(domain: TripleSpace, codomain: TripleSpace, f: F) -> Self {
        Self {
            domain,
            codomain,
            f,
        }
    }
}

impl<F: Fn(&Element) -> Result<Element>> BallMap for FnMap<F> {
    fn domain(&self) -> &TripleSpace {
        &self.domain
    }

    fn codomain(&self) -> &TripleSpace {
        &self.codomain
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        (self.f)(x)
    }
}

/// Conjugates the factors flagged `true` and leaves the others unchanged.
pub fn factorwise_conjugation(
    space: &TripleSpace,
    flags: Vec<bool>,
) -> FnMap<impl Fn(&Element) -> Result<Element>> {
    let s = space.clone();
    FnMap::new(space.clone(), space.clone(), move |x: &Element| {
        s.ensure_same(x.space())?;
        Ok(x.map_blocks(|k, b| if flags[k] { b.map(|z| z.conj()) } else { b.clone() }))
    })
}

/// `g_{-phi(0)} o phi`, which fixes the origin.
pub struct Normalized<'a> {
    inner: &'a dyn BallMap,
    shift: Element,
}

impl BallMap for Normalized<'_> {
    fn domain(&self) -> &TripleSpace {
        self.inner.domain()
    }

    fn codomain(&self) -> &TripleSpace {
        self.inner.codomain()
    }

    fn apply(&self, x: &Element) -> Result<Element> {
        mobius(&self.shift, &self.inner.apply(x)?)
    }
}

pub fn normalize_origin(phi: &dyn BallMap) -> Result<Normalized<'_>> {
    let at0 = phi.apply(&Element::zeros(phi.domain()))?;
    at0.ensure_in_ball()?;
    Ok(Normalized {
        inner: phi,
        shift: -at0,
    })
}

/// One residual-based test inside a [`MapReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub n_cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, n_cases: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            n_cases,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

/// Residuals, sample counts, seed and verdict of a map test.
#[derive(Clone, Debug, PartialEq)]
pub struct MapReport {
    pub subject: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    /// Named numeric values reported alongside the checks.
    pub values: Vec<(String, f64)>,
    pub verdict: String,
}

impl MapReport {
    fn from_checks(subject: &str, seed: Option<u64>, checks: Vec<Check>) -> Self {
        let verdict = if checks.iter().all(|c| c.passed) {
            "pass"
        } else {
            "fail"
        };
        Self {
            subject: subject.to_string(),
            seed,
            checks,
            values: Vec::new(),
            verdict: verdict.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn triple_residual(phi: &LinearTripleMap, a: &Element, b: &Element, c: &Element) -> f64 {
    let lhs = phi.map(&tp(a, b, c));
    let rhs = tp(&phi.map(a), &phi.map(b), &phi.map(c));
    let scale = (a.spectral_norm() * b.spectral_norm() * c.spectral_norm()).max(1.0);
    (lhs - rhs).spectral_norm() / scale
}

/// `phi {a,b,c} = {phi a, phi b, phi c}` on seeded random triples and on every
/// triple of basis matrix units.
pub fn is_triple_homomorphism(phi: &LinearTripleMap, samples: usize, seed: u64) -> Result<MapReport> {
    let mut rng = random::rng(seed);
    let mut sampled: f64 = 0.0;
    for _ in 0..samples {
        let a = random::element(&mut rng, &phi.domain);
        let b = random::element(&mut rng, &phi.domain);
        let c = random::element(&mut rng, &phi.domain);
        sampled = sampled.max(triple_residual(phi, &a, &b, &c));
    }
    let basis = Element::basis(&phi.domain);
    let mut exact: f64 = 0.0;
    for a in &basis {
        for b in &basis {
            for c in &basis {
                exact = exact.max(triple_residual(phi, a, b, c));
            }
        }
    }
    let n = basis.len();
    Ok(MapReport::from_checks(
        "triple homomorphism",
        Some(seed),
        vec![
            Check::new("sampled triples", samples, sampled, HOMOMORPHISM_TOL),
            Check::new("basis triples", n * n * n, exact, HOMOMORPHISM_TOL),
        ],
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Caratheodory,
    Bergman,
}

impl Metric {
    pub fn distance(self, x: &Element, y: &Element) -> Result<f64> {
        match self {
            Metric::Caratheodory => caratheodory_distance(x, y),
            Metric::Bergman => bergman_distance(x, y),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Caratheodory => "caratheodory",
            Metric::Bergman => "bergman",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "caratheodory" => Ok(Metric::Caratheodory),
            "bergman" => Ok(Metric::Bergman),
            other => Err(Error::Invalid(format!("unknown metric {other:?}"))),
        }
    }
}

/// `max |d'(phi x, phi y) - d(x, y)|` over seeded pairs in `D`.
pub fn is_isometry_sampled(
    phi: &dyn BallMap,
    metric: Metric,
    samples: usize,
    seed: u64,
) -> Result<MapReport> {
    let mut rng = random::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = random::ball_element(&mut rng, phi.domain(), SAMPLE_RADIUS);
        let y = random::ball_element(&mut rng, phi.domain(), SAMPLE_RADIUS);
        let fx = phi.apply(&x)?;
        let fy = phi.apply(&y)?;
        phi.codomain().ensure_same(fx.space())?;
        fx.ensure_in_ball()?;
        fy.ensure_in_ball()?;
        let d = metric.distance(&x, &y)?;
        let d_image = metric.distance(&fx, &fy)?;
        worst = worst.max((d_image - d).abs());
    }
    Ok(MapReport::from_checks(
        &format!("{metric} isometry"),
        Some(seed),
        vec![Check::new("sampled pairs", samples, worst, ISOMETRY_TOL)],
    ))
}

/// `phi(t e) / t` at `t = 1/2`, confirmed at `t = 1/4`.
pub fn induced_tripotent_map(phi: &dyn BallMap, e: &Tripotent, tol: f64) -> Result<Tripotent> {
    phi.domain().ensure_same(e.space())?;
    if !tripotent::is_minimal(e)? {
        return Err(Error::NotMinimal);
    }
    let at0 = phi.apply(&Element::zeros(phi.domain()))?;
    if at0.spectral_norm() > ORIGIN_TOL {
        return Err(Error::Invalid(format!(
            "map moves the origin by {:e}",
            at0.spectral_norm()
        )));
    }
    let half = phi.apply(&(e.element() * 0.5))? * 2.0;
    let quarter = phi.apply(&(e.element() * 0.25))? * 4.0;
    let gap = (&half - &quarter).spectral_norm();
    if gap > INDUCED_TOL {
        return Err(Error::Inconsistent(format!(
            "images at t = 1/2 and t = 1/4 differ by {gap:e}"
        )));
    }
    let image = Tripotent::new(half, tol)?;
    if image.is_zero() || !tripotent::is_minimal(&image)? {
        return Err(Error::NotMinimal);
    }
    Ok(image)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Holomorphy {
    Holomorphic,
    Antiholomorphic,
    MixedUnknown,
}

impl fmt::Display for Holomorphy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Holomorphy::Holomorphic => "holomorphic",
            Holomorphy::Antiholomorphic => "antiholomorphic",
            Holomorphy::MixedUnknown => "mixed/unknown",
        })
    }
}

/// Compares the induced image of `i e` with `+i` and `-i` times the image of
/// `e` for each sampled minimal tripotent.
pub fn holomorphy_classifier(
    phi: &dyn BallMap,
    samples: &[Tripotent],
    tol: f64,
) -> Result<(Holomorphy, MapReport)> {
    if samples.is_empty() {
        return Err(Error::Invalid("no sample tripotents".into()));
    }
    let i = crate::space::I;
    let (mut plus, mut minus) = (0usize, 0usize);
    let mut worst: f64 = 0.0;
    for e in samples {
        let img = induced_tripotent_map(phi, e, tol)?;
        let img_i = induced_tripotent_map(phi, &e.rotate(i), tol)?;
        let r_plus = (img_i.element() - &(img.element() * i)).spectral_norm();
        let r_minus = (img_i.element() + &(img.element() * i)).spectral_norm();
        let best = r_plus.min(r_minus);
        if best > INDUCED_TOL {
            return Err(Error::Inconsistent(format!(
                "image of ie matches neither +i nor -i times the image of e (residual {best:e})"
            )));
        }
        worst = worst.max(best);
        if r_plus <= r_minus {
            plus += 1;
        } else {
            minus += 1;
        }
    }
    let class = match (plus, minus) {
        (_, 0) => Holomorphy::Holomorphic,
        (0, _) => Holomorphy::Antiholomorphic,
        _ => Holomorphy::MixedUnknown,
    };
    let mut report = MapReport::from_checks(
        "holomorphy",
        None,
        vec![Check::new("sign match", samples.len(), worst, INDUCED_TOL)],
    );
    report.values = vec![("plus_i".into(), plus as f64), ("minus_i".into(), minus as f64)];
    report.verdict = class.to_string();
    Ok((class, report))
}

/// Whether an isometric embedding is ruled out by `r <= r'` and
/// `rp - dim <= r'p' - dim'`.
pub fn rank_genus_report(domain: &TripleSpace, codomain: &TripleSpace) -> MapReport {
    let a = space_invariants(domain);
    let b = space_invariants(codomain);
    let rank_ok = a.rank <= b.rank;
    let genus_ok = a.rp_minus_dim_total <= b.rp_minus_dim_total;
    MapReport {
        subject: format!("{domain} -> {codomain}"),
        seed: None,
        checks: Vec::new(),
        values: vec![
            ("r".into(), a.rank as f64),
            ("r_prime".into(), b.rank as f64),
            ("rp_minus_dim".into(), a.rp_minus_dim_total as f64),
            ("rp_minus_dim_prime".into(), b.rp_minus_dim_total as f64),
        ],
        verdict: if rank_ok && genus_ok {
            "not excluded".into()
        } else {
            "excluded".into()
        },
    }
}

/// Partition of sampled minimal tripotents by chains of non-orthogonal pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Components {
    /// Sample indices of each component, ordered by smallest index.
    pub groups: Vec<Vec<usize>>,
    /// The factor containing each component, when it lies in one factor.
    pub factors: Vec<Option<usize>>,
    /// One component per factor, each inside its factor.
    pub matches_factors: bool,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

pub fn irreducible_components(
    space: &TripleSpace,
    samples: &[Tripotent],
    tol: f64,
) -> Result<Components> {
    let mut home = Vec::with_capacity(samples.len());
    for s in samples {
        space.ensure_same(s.space())?;
        let (k, _, _) = s.rank_one_parts()?;
        home.push(k);
    }
    if let Some(k) = (0..space.num_factors()).find(|k| !home.contains(k)) {
        return Err(Error::InsufficientCoverage(k));
    }
    let n = samples.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !tripotent::is_orthogonal(samples[i].element(), samples[j].element(), tol)? {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of_group: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of_group.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(i),
            None => {
                root_of_group.push(r);
                groups.push(vec![i]);
            }
        }
    }
    let factors: Vec<Option<usize>> = groups
        .iter()
        .map(|g| {
            let k = home[g[0]];
            g.iter().all(|&i| home[i] == k).then_some(k)
        })
        .collect();
    let mut covered: Vec<usize> = factors.iter().flatten().copied().collect();
    covered.sort_unstable();
    let matches_factors = groups.len() == space.num_factors()
        && factors.iter().all(Option::is_some)
        && covered == (0..space.num_factors()).collect::<Vec<_>>();
    Ok(Components {
        groups,
        factors,
        matches_factors,
    })
}

/// Minimal tripotents for [`irreducible_components`]: one aligned sample per
/// factor followed by random ones.
pub fn component_samples(space: &TripleSpace, n: usize, seed: u64) -> Vec<Tripotent> {
    let mut rng = random::rng(seed);
    let mut out: Vec<Tripotent> = (0..space.num_factors())
        .map(|k| random::minimal_in_factor(&mut rng, space, k))
        .collect();
    while out.len() < n {
        out.push(random::minimal_tripotent(&mut rng, space));
    }
    out
}

/// Reflection identity `phi(S_x(y)) = S_{phi x}(phi y)` and the factorisation
/// `g_z = S_w o S_0` with `z = S_w(0)`, against the triple-homomorphism
/// verdict.
pub fn mobius_invariance_check(phi: &LinearTripleMap, samples: usize, seed: u64) -> Result<MapReport> {
    let mut rng = random::rng(seed);
    let mut norm_defect: f64 = 0.0;
    let mut reflection: f64 = 0.0;
    let mut factorisation: f64 = 0.0;
    for _ in 0..samples {
        let x = random::ball_element(&mut rng, &phi.domain, SAMPLE_RADIUS);
        let y = random::ball_element(&mut rng, &phi.domain, SAMPLE_RADIUS);
        let (fx, fy) = (phi.map(&x), phi.map(&y));
        norm_defect = norm_defect
            .max((fx.spectral_norm() - x.spectral_norm()).abs())
            .max((fy.spectral_norm() - y.spectral_norm()).abs());
        let lhs = phi.map(&geodesic_symmetry(&x, &y)?);
        let rhs = geodesic_symmetry(&fx, &fy)?;
        reflection = reflection.max((lhs - rhs).spectral_norm());
        // z = S_w(0) with w = phi(x) halfway, so g_z = S_w o S_0
        let w = fx.clone() * 0.5;
        let z = geodesic_symmetry(&w, &Element::zeros(&phi.codomain))?;
        let lhs = mobius(&z, &fy)?;
        let rhs = geodesic_symmetry(&w, &-&fy)?;
        factorisation = factorisation.max((lhs - rhs).spectral_norm());
    }
    let homomorphism = is_triple_homomorphism(phi, samples.min(50), seed)?;
    let invariance_pass = reflection <= ISOMETRY_TOL && factorisation <= ISOMETRY_TOL;
    let mut checks = vec![
        Check::new("norm preservation", samples, norm_defect, ISOMETRY_TOL),
        Check::new("reflection identity", samples, reflection, ISOMETRY_TOL),
        Check::new("g_z = S_w o S_0", samples, factorisation, ISOMETRY_TOL),
    ];
    checks.extend(homomorphism.checks.iter().cloned());
    let agree = invariance_pass == homomorphism.passed();
    Ok(MapReport {
        subject: "moebius invariance".into(),
        seed: Some(seed),
        checks,
        values: vec![
            ("invariance_pass".into(), f64::from(u8::from(invariance_pass))),
            ("homomorphism_pass".into(), f64::from(u8::from(homomorphism.passed()))),
        ],
        verdict: if agree { "consistent" } else { "inconsistent" }.into(),
    })
}

/// Draws minimal tripotents spread over every factor.
pub fn sample_minimal(space: &TripleSpace, n: usize, rng: &mut impl Rng) -> Vec<Tripotent> {
    (0..n)
        .map(|i| random::minimal_in_factor(rng, space, i % space.num_factors()))
        .collect()
}

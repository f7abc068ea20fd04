//! Seeded identity checks behind `symdom verify`.
//!
//! Every entry draws its cases from a seed derived from the master seed and
//! the entry id, so a report is a pure function of `(seed, suite, fault)`.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::boundary::{
    self, classify_pair, detour_cost, detour_cost_numeric, detour_metric, flat_membership_test,
    gromov_decomposition, gromov_numeric, gromov_singletons, gromov_singletons_with, hilbert,
    horofunction_eval, part_cross_section, peirce_zero_test, singleton_eval,
    translation_action_check, HorofunctionSpec, PairClass, DEFAULT_DETOUR_SCHEDULE,
    DEFAULT_GROMOV_EXPONENTS, DEFAULT_HORO_SCHEDULE,
};
use crate::error::{Error, Result};
use crate::geometry::{
    bergman_distance, bergman_on_flat_with, caratheodory_distance, flat_compose_mobius, mobius,
    mobius_closed_form, FlatChart,
};
use crate::json::number;
use crate::maps::{
    self, factorwise_conjugation, holomorphy_classifier, induced_tripotent_map,
    irreducible_components, is_isometry_sampled, is_triple_homomorphism, mobius_invariance_check,
    rank_genus_report, BallMap, Holomorphy, LinearTripleMap, Metric,
};
use crate::random::{self, SeededRng};
use crate::space::{CVector, Element, TripleSpace, C64, I};
use crate::triple::{self, tp};
use crate::tripotent::{self, Frame, Tripotent};
use crate::DEFAULT_TOL;

pub const TYPE_I_NOTE: &str = "checked on type I only";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Core,
    Boundary,
    Maps,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Core => "core",
            Suite::Boundary => "boundary",
            Suite::Maps => "maps",
        })
    }
}

/// Deliberate perturbations used to check that the harness notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Scales the flat factors `1 - a_i b_i` of the Bergman operator on a flat.
    BergmanFlat,
    /// Scales the Bergman image inside the closed-form Gromov product.
    GromovClosedForm,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bergman-flat" => Ok(Fault::BergmanFlat),
            "gromov-closed-form" => Ok(Fault::GromovClosedForm),
            other => Err(Error::Invalid(format!("unknown fault {other:?}"))),
        }
    }
}

const FAULT_SCALE: f64 = 1.0 + 1e-6;

/// State handed to each lemma check.
pub struct Ctx {
    pub rng: SeededRng,
    pub cases: usize,
    fault: Option<Fault>,
}

impl Ctx {
    fn faulty(&self, f: Fault) -> bool {
        self.fault == Some(f)
    }
}

/// A registered lemma check returning its largest residual.
pub struct Lemma {
    pub id: &'static str,
    pub suite: Suite,
    pub anchor: &'static str,
    pub cases: usize,
    pub tolerance: f64,
    pub run: fn(&mut Ctx) -> Result<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub lemma_id: String,
    pub suite: Suite,
    pub anchor: String,
    pub n_cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
    pub note: String,
    pub error: Option<String>,
}

impl Entry {
    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }

    fn to_value(&self) -> Value {
        json!({
            "lemma_id": self.lemma_id,
            "suite": self.suite.to_string(),
            "anchor": self.anchor,
            "n_cases": self.n_cases,
            "max_residual": number(self.max_residual),
            "tolerance": number(self.tolerance),
            "verdict": self.verdict(),
            "seed": self.seed,
            "note": self.note,
            "error": self.error,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub suite: Option<Suite>,
    pub entries: Vec<Entry>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> Vec<&Entry> {
        self.entries.iter().filter(|e| !e.passed).collect()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "seed": self.seed,
            "suite": self.suite.map_or("all".to_string(), |s| s.to_string()),
            "passed": self.passed(),
            "n_entries": self.entries.len(),
            "entries": self.entries.iter().map(Entry::to_value).collect::<Vec<_>>(),
        })
    }
}

pub fn run_lemma(lemma: &Lemma, master_seed: u64, fault: Option<Fault>) -> Entry {
    let seed = random::derive_seed(master_seed, lemma.id);
    let mut ctx = Ctx {
        rng: random::rng(seed),
        cases: lemma.cases,
        fault,
    };
    let (max_residual, error) = match (lemma.run)(&mut ctx) {
        Ok(r) => (r, None),
        Err(e) => (f64::INFINITY, Some(e.to_string())),
    };
    Entry {
        lemma_id: lemma.id.to_string(),
        suite: lemma.suite,
        anchor: lemma.anchor.to_string(),
        n_cases: lemma.cases,
        max_residual,
        tolerance: lemma.tolerance,
        passed: max_residual <= lemma.tolerance,
        seed,
        note: TYPE_I_NOTE.to_string(),
        error,
    }
}

/// Runs every registered lemma of `suite` (all when `None`) in registry order.
pub fn run(seed: u64, suite: Option<Suite>, fault: Option<Fault>) -> VerificationReport {
    let entries = REGISTRY
        .iter()
        .filter(|l| suite.is_none_or(|s| s == l.suite))
        .map(|l| run_lemma(l, seed, fault))
        .collect();
    VerificationReport {
        seed,
        suite,
        entries,
    }
}

pub fn lemma(id: &str) -> Option<&'static Lemma> {
    REGISTRY.iter().find(|l| l.id == id)
}

macro_rules! lemma {
    ($id:literal, $suite:ident, $anchor:literal, $cases:literal, $tol:expr, $run:path) => {
        Lemma {
            id: $id,
            suite: Suite::$suite,
            anchor: $anchor,
            cases: $cases,
            tolerance: $tol,
            run: $run,
        }
    };
}

pub static REGISTRY: &[Lemma] = &[
    lemma!("core.jordan_identity", Core, "Jordan identity of the triple product", 300, 1e-10, jordan_identity),
    lemma!("core.box_norm", Core, "norm of a box a[]a equals the squared norm of a", 300, 1e-10, box_norm),
    lemma!("core.bergman_closed_form", Core, "Bergman operator as (1 - ab*) x (1 - b*a)", 300, 1e-12, bergman_closed_form),
    lemma!("core.peirce_projections", Core, "Peirce projections are complementary idempotents", 100, 1e-10, peirce_projections),
    lemma!("core.peirce_rules", Core, "Peirce multiplication rules", 100, 1e-10, peirce_rules),
    lemma!("core.orthogonal_norm", Core, "norm of a sum of orthogonal elements is the maximum", 300, 1e-14, orthogonal_norm),
    lemma!("core.spectral_decomposition", Core, "spectral decomposition over orthogonal minimal tripotents", 300, 1e-12, spectral_decomposition),
    lemma!("core.mobius_closed_form", Core, "Möbius map agrees with its closed matrix form", 300, 1e-12, mobius_closed),
    lemma!("core.mobius_involution", Core, "g_{-a} inverts g_a", 300, 1e-10, mobius_involution),
    lemma!("core.distance_invariance", Core, "Möbius maps are isometries of both distances", 200, 1e-9, distance_invariance),
    lemma!("core.metric_axioms", Core, "symmetry and triangle inequality of both distances", 200, 1e-9, metric_axioms),
    lemma!("core.radial_distance", Core, "distance from 0 to tu is artanh t", 300, 1e-12, radial_distance),
    lemma!("core.flat_isometry", Core, "flats are l-infinity isometric in rapidities", 300, 1e-10, flat_isometry),
    lemma!("boundary.flat_bergman", Boundary, "Bergman operator on a flat via joint Peirce projections", 100, 1e-12, flat_bergman),
    lemma!("boundary.flat_mobius_composition", Boundary, "Möbius maps along a flat compose additively in rapidities", 100, 1e-9, flat_mobius_composition),
    lemma!("boundary.singleton_on_flat", Boundary, "singleton horofunction on a flat is minus artanh of the coordinate", 200, 1e-10, singleton_on_flat),
    lemma!("boundary.translation_action", Boundary, "flat translations shift singleton horofunctions", 200, 1e-8, translation_action),
    lemma!("boundary.horofunction_limit", Boundary, "geodesic limit equals the flat formula and vanishes at 0", 40, 1e-8, horofunction_limit),
    lemma!("boundary.gromov_decomposition", Boundary, "Gromov product from Peirce data of one tripotent relative to the other", 200, 1e-10, gromov_decomposition_check),
    lemma!("boundary.gromov_symmetry", Boundary, "Gromov product of singletons is symmetric", 200, 1e-10, gromov_symmetry),
    lemma!("boundary.gromov_numeric", Boundary, "closed-form Gromov product is the double limit", 60, 1e-3, gromov_numeric_check),
    lemma!("boundary.gromov_characterisations", Boundary, "opposite, orthogonal and i-rotated pairs via Gromov products", 60, 1e-8, gromov_characterisations),
    lemma!("boundary.pair_classification", Boundary, "classification of minimal pairs from Gromov products", 40, 0.0, pair_classification),
    lemma!("boundary.detour_numeric", Boundary, "detour cost equals half log M(b/a) on a part", 12, 1e-4, detour_numeric),
    lemma!("boundary.detour_finiteness", Boundary, "detour cost is finite exactly when c <= e", 100, 0.0, detour_finiteness),
    lemma!("boundary.detour_hilbert", Boundary, "detour metric is the Hilbert metric of cross-sections", 100, 1e-10, detour_hilbert),
    lemma!("boundary.isometry_invariance", Boundary, "Gromov product and detour cost are invariant under unitary conjugation", 50, 1e-10, isometry_invariance),
    lemma!("boundary.flat_membership", Boundary, "flat membership from opposite singleton pairs", 100, 0.0, flat_membership),
    lemma!("boundary.peirce_zero", Boundary, "singletons at e and -e vanish exactly on V_0(e)", 100, 0.0, peirce_zero),
    lemma!("maps.block_embedding", Maps, "block embedding is a triple homomorphism", 1, 1e-12, block_embedding),
    lemma!("maps.stock_isometries", Maps, "stock triple maps preserve both distances", 40, 1e-9, stock_isometries),
    lemma!("maps.orthogonality_transport", Maps, "induced tripotent maps preserve orthogonality", 30, 0.0, orthogonality_transport),
    lemma!("maps.frame_images", Maps, "induced tripotent maps send frames to frames", 20, 0.0, frame_images),
    lemma!("maps.holomorphy", Maps, "holomorphy classification of stock maps", 6, 0.0, holomorphy),
    lemma!("maps.rank_genus", Maps, "rank and genus obstruction to isometric embeddings", 4, 0.0, rank_genus),
    lemma!("maps.components", Maps, "irreducible components from non-orthogonality chains", 30, 0.0, components),
    lemma!("maps.mobius_invariance", Maps, "reflection identity agrees with the homomorphism test", 20, 0.0, mobius_invariance),
];

// ---- sampling helpers

fn space_for(i: usize) -> TripleSpace {
    match i % 3 {
        0 => TripleSpace::matrices(2, 3),
        1 => TripleSpace::new([(2, 2), (1, 1)]).expect("valid"),
        _ => TripleSpace::matrices(3, 2),
    }
}

fn unit_element(rng: &mut SeededRng, space: &TripleSpace) -> Element {
    let x = random::element(rng, space);
    let n = x.spectral_norm();
    x * (1.0 / n)
}

fn count(flags: impl IntoIterator<Item = bool>) -> f64 {
    flags.into_iter().filter(|ok| !ok).count() as f64
}

/// Another frame of the same tripotent `sum_i u_i v_i^*` inside one factor:
/// `(U W)(V W)^*` columnwise for a random unitary `W`.
fn reframe(rng: &mut SeededRng, members: &[Tripotent]) -> Result<Vec<Tripotent>> {
    let parts = members
        .iter()
        .map(Tripotent::rank_one_parts)
        .collect::<Result<Vec<_>>>()?;
    let k = parts[0].0;
    if parts.iter().any(|p| p.0 != k) {
        return Err(Error::Invalid("reframing needs a single factor".into()));
    }
    let n = parts.len();
    let w = random::unitary(rng, n);
    let space = members[0].space();
    (0..n)
        .map(|c| {
            let mut u = CVector::zeros(parts[0].1.len());
            let mut v = CVector::zeros(parts[0].2.len());
            for (i, p) in parts.iter().enumerate() {
                u += &p.1 * w[(i, c)];
                v += &p.2 * w[(i, c)];
            }
            Tripotent::rank_one(space, k, &u, &v)
        })
        .collect()
}

fn lambdas(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    let mut l: Vec<f64> = random::uniform_vec(rng, n, 1.0)
        .into_iter()
        .map(|x| 0.25 + 0.75 * x.abs())
        .collect();
    l[0] = 1.0;
    l
}

fn frame_prefix(rng: &mut SeededRng, space: &TripleSpace, n: usize) -> Vec<Tripotent> {
    random::frame(rng, space).members()[..n].to_vec()
}

// ---- core

fn jordan_identity(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let [a, b, x, y, z] = std::array::from_fn(|_| unit_element(&mut ctx.rng, &s));
        let lhs = tp(&a, &b, &tp(&x, &y, &z));
        let rhs = tp(&tp(&a, &b, &x), &y, &z) - tp(&x, &tp(&b, &a, &y), &z) + tp(&x, &y, &tp(&a, &b, &z));
        worst = worst.max((lhs - rhs).spectral_norm());
    }
    Ok(worst)
}

fn box_norm(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let a = random::element(&mut ctx.rng, &space_for(i));
        let n2 = a.spectral_norm().powi(2);
        let op = triple::box_operator(&a, &a)?.op_norm();
        worst = worst.max((op - n2).abs() / n2.max(1.0));
    }
    Ok(worst)
}

fn bergman_closed_form(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let a = random::ball_element(&mut ctx.rng, &s, 1.5);
        let b = random::ball_element(&mut ctx.rng, &s, 1.5);
        let x = unit_element(&mut ctx.rng, &s);
        let closed = triple::bergman_apply(&a, &b, &x)?;
        let expanded = triple::bergman_apply_expanded(&a, &b, &x)?;
        worst = worst.max((closed - expanded).spectral_norm());
    }
    Ok(worst)
}

fn peirce_projections(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let e = random::tripotent(&mut ctx.rng, &s);
        let p: Vec<_> = (0..3u8)
            .map(|k| tripotent::peirce_projection(e.element(), k, DEFAULT_TOL))
            .collect::<Result<_>>()?;
        let sum = p[0].add(&p[1])?.add(&p[2])?;
        worst = worst.max(sum.distance(&triple::ComplexLinearOperator::identity(&s)));
        for j in 0..3 {
            for k in 0..3 {
                let prod = p[j].compose(&p[k])?;
                let target = if j == k {
                    p[j].clone()
                } else {
                    triple::ComplexLinearOperator::zero(&s, &s)
                };
                worst = worst.max(prod.distance(&target));
            }
        }
    }
    Ok(worst)
}

fn peirce_rules(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let parts = |e: &Tripotent, x: &Element| -> Result<[Element; 3]> {
        let (p2, p1, p0) = tripotent::peirce_components(e, x)?;
        Ok([p0, p1, p2])
    };
    for i in 0..ctx.cases {
        let s = space_for(i);
        let e = random::tripotent(&mut ctx.rng, &s);
        let [x, y, z] = std::array::from_fn(|_| unit_element(&mut ctx.rng, &s));
        let (px, py, pz) = (parts(&e, &x)?, parts(&e, &y)?, parts(&e, &z)?);
        for (a, xa) in px.iter().enumerate() {
            for (b, yb) in py.iter().enumerate() {
                for (c, zc) in pz.iter().enumerate() {
                    let t = tp(xa, yb, zc);
                    let target = a as i32 - b as i32 + c as i32;
                    let r = if (0..3).contains(&target) {
                        let pt = parts(&e, &t)?;
                        (&t - &pt[target as usize]).spectral_norm()
                    } else {
                        t.spectral_norm()
                    };
                    worst = worst.max(r);
                }
            }
        }
    }
    Ok(worst)
}

fn orthogonal_norm(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let split = 1 + i % (f.len() - 1).max(1);
        let mut x = Element::zeros(&s);
        let mut y = Element::zeros(&s);
        for (k, e) in f.members().iter().enumerate() {
            let c = random::unimodular(&mut ctx.rng) * random::uniform_vec(&mut ctx.rng, 1, 2.0)[0];
            if k < split {
                x = x + e.element() * c;
            } else {
                y = y + e.element() * c;
            }
        }
        let lhs = (&x + &y).spectral_norm();
        let rhs = x.spectral_norm().max(y.spectral_norm());
        worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    Ok(worst)
}

fn spectral_decomposition(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let x = unit_element(&mut ctx.rng, &s);
        let d = tripotent::spectral_decompose(&x);
        worst = worst.max((d.reconstruct(&s) - x).spectral_norm());
        for (k, a) in d.tripotents.iter().enumerate() {
            for b in &d.tripotents[k + 1..] {
                worst = worst.max(triple::triple_product(a.element(), a.element(), b.element())?.spectral_norm());
            }
        }
    }
    Ok(worst)
}

fn mobius_closed(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let a = random::ball_element(&mut ctx.rng, &s, 0.9);
        let x = random::ball_element(&mut ctx.rng, &s, 0.9);
        worst = worst.max((mobius(&a, &x)? - mobius_closed_form(&a, &x)?).spectral_norm());
    }
    Ok(worst)
}

fn mobius_involution(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let a = random::ball_element(&mut ctx.rng, &s, 0.8);
        let x = random::ball_element(&mut ctx.rng, &s, 0.8);
        let back = mobius(&-&a, &mobius(&a, &x)?)?;
        worst = worst.max((back - x).spectral_norm());
        worst = worst.max((mobius(&a, &Element::zeros(&s))? - a.clone()).spectral_norm());
    }
    Ok(worst)
}

fn distance_invariance(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let [a, x, y] = std::array::from_fn(|_| random::ball_element(&mut ctx.rng, &s, 0.7));
        let (gx, gy) = (mobius(&a, &x)?, mobius(&a, &y)?);
        worst = worst.max((caratheodory_distance(&gx, &gy)? - caratheodory_distance(&x, &y)?).abs());
        worst = worst.max((bergman_distance(&gx, &gy)? - bergman_distance(&x, &y)?).abs());
    }
    Ok(worst)
}

fn metric_axioms(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let [x, y, z] = std::array::from_fn(|_| random::ball_element(&mut ctx.rng, &s, 0.95));
        for d in [caratheodory_distance, bergman_distance] {
            let (xy, yx, yz, xz) = (d(&x, &y)?, d(&y, &x)?, d(&y, &z)?, d(&x, &z)?);
            worst = worst.max((xy - yx).abs()).max(xz - xy - yz).max(d(&x, &x)?);
        }
    }
    Ok(worst)
}

fn radial_distance(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let origin = |s: &TripleSpace| Element::zeros(s);
    for i in 0..ctx.cases {
        let s = space_for(i);
        // near the boundary only exactly representable tripotents keep `|tu| = t`
        let (u, t) = if i % 10 == 0 {
            (Frame::standard(&s).members()[0].clone(), 1.0 - 1e-6)
        } else {
            let t = random::uniform_vec(&mut ctx.rng, 1, 1.0)[0].abs().min(0.999);
            (random::tripotent(&mut ctx.rng, &s), t)
        };
        let d = caratheodory_distance(&origin(&s), &(u.element() * t))?;
        worst = worst.max((d - t.atanh()).abs() / t.atanh().max(1.0));
    }
    Ok(worst)
}

fn flat_isometry(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let a = random::uniform_vec(&mut ctx.rng, f.len(), 0.95);
        let b = random::uniform_vec(&mut ctx.rng, f.len(), 0.95);
        let d = caratheodory_distance(&f.combination(&a), &f.combination(&b))?;
        let expected = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x.atanh() - y.atanh()).abs())
            .fold(0.0, f64::max);
        worst = worst.max((d - expected).abs());
    }
    Ok(worst)
}

// ---- boundary

fn flat_bergman(ctx: &mut Ctx) -> Result<f64> {
    let scale = if ctx.faulty(Fault::BergmanFlat) {
        FAULT_SCALE
    } else {
        1.0
    };
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let a = random::uniform_vec(&mut ctx.rng, f.len(), 0.9);
        let b = random::uniform_vec(&mut ctx.rng, f.len(), 0.9);
        let on_flat = bergman_on_flat_with(&f, &a, &b, |x| x * scale)?;
        let direct = triple::bergman_operator(&f.combination(&a), &f.combination(&b))?;
        worst = worst.max(on_flat.distance(&direct));
    }
    Ok(worst)
}

fn flat_mobius_composition(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let alpha = random::uniform_vec(&mut ctx.rng, f.len(), 1.5);
        let beta = random::uniform_vec(&mut ctx.rng, f.len(), 1.5);
        let samples: Vec<Element> = (0..3)
            .map(|_| random::ball_element(&mut ctx.rng, &s, 0.7))
            .collect();
        worst = worst.max(flat_compose_mobius(&f, &alpha, &beta, &samples)?);
    }
    Ok(worst)
}

fn singleton_on_flat(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let l = random::uniform_vec(&mut ctx.rng, f.len(), 0.95);
        let x = f.combination(&l);
        for (e, li) in f.members().iter().zip(&l) {
            worst = worst.max((singleton_eval(e, &x)? + li.atanh()).abs());
        }
    }
    Ok(worst)
}

fn translation_action(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let l = random::uniform_vec(&mut ctx.rng, f.len(), 0.9);
        let y = random::ball_element(&mut ctx.rng, &s, 0.7);
        worst = worst.max(translation_action_check(&f, &l, &y)?);
    }
    Ok(worst)
}

fn horofunction_limit(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let n = 1 + i % f.len();
        let l = lambdas(&mut ctx.rng, n);
        let spec = HorofunctionSpec::new(f.members()[..n].to_vec(), l.clone(), DEFAULT_TOL)?;
        let at0 = horofunction_eval(&spec, &Element::zeros(&s), &DEFAULT_HORO_SCHEDULE)?;
        worst = worst.max(at0.value.abs());
        let p = random::uniform_vec(&mut ctx.rng, f.len(), 2.0);
        let z = FlatChart::new(f.clone()).exp0(&p)?;
        let expected = l
            .iter()
            .zip(&p)
            .map(|(li, pi)| li.ln() - pi)
            .fold(f64::NEG_INFINITY, f64::max);
        let r = horofunction_eval(&spec, &z, &DEFAULT_HORO_SCHEDULE)?;
        worst = worst.max((r.value - expected).abs());
    }
    Ok(worst)
}

fn minimal_pair(rng: &mut SeededRng, i: usize) -> (Tripotent, Tripotent) {
    let s = if i.is_multiple_of(2) {
        TripleSpace::matrices(2, 3)
    } else {
        TripleSpace::matrices(3, 3)
    };
    (random::minimal_tripotent(rng, &s), random::minimal_tripotent(rng, &s))
}

fn both_match(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a - b).abs(),
        (false, false) => 0.0,
        _ => f64::INFINITY,
    }
}

fn gromov_decomposition_check(ctx: &mut Ctx) -> Result<f64> {
    let scale = if ctx.faulty(Fault::GromovClosedForm) {
        FAULT_SCALE
    } else {
        1.0
    };
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (u, v) = minimal_pair(&mut ctx.rng, i);
        let closed = gromov_singletons_with(&u, &v, |x| x * scale)?;
        worst = worst.max(both_match(closed, gromov_decomposition(&u, &v)?));
    }
    Ok(worst)
}

fn gromov_symmetry(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (u, v) = minimal_pair(&mut ctx.rng, i);
        worst = worst.max(both_match(gromov_singletons(&u, &v)?, gromov_singletons(&v, &u)?));
    }
    Ok(worst)
}

fn gromov_numeric_check(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (u, v) = if i % 5 == 4 {
            let f = random::frame(&mut ctx.rng, &TripleSpace::matrices(2, 3));
            (f.members()[0].clone(), f.members()[1].clone())
        } else {
            minimal_pair(&mut ctx.rng, i)
        };
        let closed = gromov_singletons(&u, &v)?;
        let numeric = gromov_numeric(&u, &v, &DEFAULT_GROMOV_EXPONENTS)?;
        let r = if closed.is_finite() {
            (numeric.value - closed).abs()
        } else if numeric.value > boundary::DIVERGENCE_THRESHOLD {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

fn orthogonal_partner(u: &Tripotent) -> Result<Tripotent> {
    let f = tripotent::frame_completion(u.space(), std::slice::from_ref(u), DEFAULT_TOL)?;
    Ok(f.members()[1].clone())
}

fn gromov_characterisations(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (u, _) = minimal_pair(&mut ctx.rng, i);
        worst = worst.max(gromov_singletons(&u, &u.neg())?.abs());
        let v = orthogonal_partner(&u)?;
        if gromov_singletons(&u, &v)?.is_finite() || gromov_singletons(&u, &v.neg())?.is_finite() {
            worst = f64::INFINITY;
        }
        for c in [I, -I] {
            let w = u.rotate(c);
            let sum = gromov_singletons(&u, &w)? + gromov_singletons(&u, &w.neg())?;
            worst = worst.max((sum - LN_2).abs());
        }
    }
    Ok(worst)
}

fn pair_classification(ctx: &mut Ctx) -> Result<f64> {
    let mut results = Vec::new();
    for i in 0..ctx.cases {
        let (u, _) = minimal_pair(&mut ctx.rng, i);
        let theta = 0.2 + 1.1 * random::uniform_vec(&mut ctx.rng, 1, 1.0)[0].abs();
        let cases = [
            (u.neg(), PairClass::Opposite),
            (orthogonal_partner(&u)?, PairClass::Orthogonal),
            (u.rotate(I), PairClass::IMultiple),
            (u.rotate(-I), PairClass::MinusIMultiple),
            (u.rotate(C64::from_polar(1.0, theta)), PairClass::Generic),
        ];
        for (v, expected) in cases {
            results.push(classify_pair(&u, &v, DEFAULT_TOL)? == expected);
        }
    }
    Ok(count(results))
}

/// A pair of horofunction specs on the same part, the second on a rotated frame.
fn same_part_pair(rng: &mut SeededRng, i: usize) -> Result<(HorofunctionSpec, HorofunctionSpec)> {
    let s = if i.is_multiple_of(2) {
        TripleSpace::matrices(2, 3)
    } else {
        TripleSpace::matrices(3, 3)
    };
    let n = 1 + i % s.rank();
    let members = frame_prefix(rng, &s, n);
    let other = if i.is_multiple_of(3) {
        members.clone()
    } else {
        reframe(rng, &members)?
    };
    let xi = HorofunctionSpec::new(members, lambdas(rng, n), DEFAULT_TOL)?;
    let eta = HorofunctionSpec::new(other, lambdas(rng, n), DEFAULT_TOL)?;
    Ok((xi, eta))
}

fn detour_numeric(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (xi, eta) = same_part_pair(&mut ctx.rng, i)?;
        let closed = detour_cost(&xi, &eta, DEFAULT_TOL)?;
        let numeric = detour_cost_numeric(&xi, &eta, &DEFAULT_DETOUR_SCHEDULE)?;
        worst = worst
            .max((closed - numeric.value).abs())
            .max(detour_cost(&xi, &xi, DEFAULT_TOL)?.abs());
    }
    Ok(worst)
}

fn detour_finiteness(ctx: &mut Ctx) -> Result<f64> {
    let s = TripleSpace::new([(3, 3), (1, 1)]).expect("valid");
    let mut results = Vec::new();
    for _ in 0..ctx.cases {
        let f = random::frame(&mut ctx.rng, &s);
        let pick = |rng: &mut SeededRng| loop {
            let mask: Vec<bool> = (0..f.len()).map(|_| random::uniform_vec(rng, 1, 1.0)[0] > 0.0).collect();
            if mask.iter().any(|&b| b) {
                return mask;
            }
        };
        let (ms, mt) = (pick(&mut ctx.rng), pick(&mut ctx.rng));
        let spec = |mask: &[bool], rng: &mut SeededRng| {
            let members: Vec<Tripotent> = f
                .members()
                .iter()
                .zip(mask)
                .filter(|(_, &b)| b)
                .map(|(e, _)| e.clone())
                .collect();
            let n = members.len();
            HorofunctionSpec::new(members, lambdas(rng, n), DEFAULT_TOL)
        };
        let xi = spec(&ms, &mut ctx.rng)?;
        let eta = spec(&mt, &mut ctx.rng)?;
        let truth = mt.iter().zip(&ms).all(|(t, s)| !t || *s);
        let finite = detour_cost(&xi, &eta, DEFAULT_TOL)?.is_finite();
        let leq = tripotent::order_leq(&eta.tripotent(), &xi.tripotent(), DEFAULT_TOL)?;
        results.push(finite == truth && leq == truth);
    }
    Ok(count(results))
}

fn detour_hilbert(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (xi, eta) = same_part_pair(&mut ctx.rng, i)?;
        let delta = detour_metric(&xi, &eta, DEFAULT_TOL)?;
        let dh = hilbert(&part_cross_section(&xi), &part_cross_section(&eta))?;
        worst = worst.max((delta - dh).abs());
    }
    Ok(worst)
}

fn random_unitary_map(rng: &mut SeededRng, s: &TripleSpace) -> Result<LinearTripleMap> {
    let left: Vec<_> = s.factors().iter().map(|f| random::unitary(rng, f.rows)).collect();
    let right: Vec<_> = s.factors().iter().map(|f| random::unitary(rng, f.cols)).collect();
    LinearTripleMap::unitary_conjugation(s, &left, &right)
}

fn transport(phi: &LinearTripleMap, e: &Tripotent) -> Result<Tripotent> {
    Tripotent::new(phi.apply(e.element())?, DEFAULT_TOL)
}

fn transport_spec(phi: &LinearTripleMap, spec: &HorofunctionSpec) -> Result<HorofunctionSpec> {
    let members = spec
        .tripotents()
        .iter()
        .map(|e| transport(phi, e))
        .collect::<Result<Vec<_>>>()?;
    HorofunctionSpec::new(members, spec.lambdas().to_vec(), DEFAULT_TOL)
}

fn isometry_invariance(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..ctx.cases {
        let (u, v) = minimal_pair(&mut ctx.rng, i);
        let phi = random_unitary_map(&mut ctx.rng, u.space())?;
        let before = gromov_singletons(&u, &v)?;
        let after = gromov_singletons(&transport(&phi, &u)?, &transport(&phi, &v)?)?;
        worst = worst.max(both_match(before, after));
        let (xi, eta) = same_part_pair(&mut ctx.rng, i)?;
        let phi = random_unitary_map(&mut ctx.rng, xi.space())?;
        let before = detour_cost(&xi, &eta, DEFAULT_TOL)?;
        let after = detour_cost(&transport_spec(&phi, &xi)?, &transport_spec(&phi, &eta)?, DEFAULT_TOL)?;
        worst = worst.max(both_match(before, after));
    }
    Ok(worst)
}

fn flat_membership(ctx: &mut Ctx) -> Result<f64> {
    let mut results = Vec::new();
    for i in 0..ctx.cases {
        let s = space_for(i);
        let f = random::frame(&mut ctx.rng, &s);
        let l = random::uniform_vec(&mut ctx.rng, f.len(), 0.9);
        let on = f.combination(&l);
        let off = &on + &(unit_element(&mut ctx.rng, &s) * 0.05);
        for (x, truth) in [(on, true), (off, false)] {
            let r = flat_membership_test(&f, &x, DEFAULT_TOL)?;
            results.push(r.in_flat == truth && r.coordinates_agree);
        }
    }
    Ok(count(results))
}

fn peirce_zero(ctx: &mut Ctx) -> Result<f64> {
    let mut results = Vec::new();
    for i in 0..ctx.cases {
        let s = space_for(i);
        let e = random::minimal_tripotent(&mut ctx.rng, &s);
        let (_, _, p0) = tripotent::peirce_components(&e, &unit_element(&mut ctx.rng, &s))?;
        let inside = if p0.spectral_norm() > 0.0 {
            &p0 * (0.8 / p0.spectral_norm())
        } else {
            p0
        };
        let outside = &inside + &(unit_element(&mut ctx.rng, &s) * 0.05);
        for (x, truth) in [(inside, true), (outside, false)] {
            let r = peirce_zero_test(&e, &x, DEFAULT_TOL)?;
            results.push(r.in_v0 == truth && r.agree);
        }
    }
    Ok(count(results))
}

// ---- maps

fn m22() -> TripleSpace {
    TripleSpace::matrices(2, 2)
}

fn m23() -> TripleSpace {
    TripleSpace::matrices(2, 3)
}

fn check_residual(report: &maps::MapReport, name: &str) -> f64 {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .map_or(f64::INFINITY, |c| c.max_residual)
}

fn block_embedding(ctx: &mut Ctx) -> Result<f64> {
    let seed = ctx.rng.next_seed();
    let emb = LinearTripleMap::block_embedding(&m22(), &m23())?;
    let r = is_triple_homomorphism(&emb, 20, seed)?;
    Ok(check_residual(&r, "basis triples").max(check_residual(&r, "sampled triples")))
}

fn stock_maps(rng: &mut SeededRng) -> Result<Vec<Box<dyn BallMap>>> {
    let product = TripleSpace::new([(2, 2), (1, 1)]).expect("valid");
    Ok(vec![
        Box::new(LinearTripleMap::block_embedding(&m22(), &m23())?),
        Box::new(LinearTripleMap::conjugation(&m22())),
        Box::new(random_unitary_map(rng, &m23())?),
        Box::new(random_unitary_map(rng, &product)?),
        Box::new(factorwise_conjugation(&product, vec![false, true])),
    ])
}

fn stock_isometries(ctx: &mut Ctx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for phi in stock_maps(&mut ctx.rng)? {
        for metric in [Metric::Caratheodory, Metric::Bergman] {
            let seed = ctx.rng.next_seed();
            let r = is_isometry_sampled(phi.as_ref(), metric, ctx.cases, seed)?;
            worst = worst.max(check_residual(&r, "sampled pairs"));
        }
    }
    Ok(worst)
}

fn orthogonality_transport(ctx: &mut Ctx) -> Result<f64> {
    let mut results = Vec::new();
    for phi in stock_maps(&mut ctx.rng)? {
        let s = phi.domain().clone();
        for _ in 0..ctx.cases {
            let f = random::frame(&mut ctx.rng, &s);
            let u = f.members()[0].clone();
            let v = if random::uniform_vec(&mut ctx.rng, 1, 1.0)[0] > 0.0 && f.len() > 1 {
                f.members()[1].clone()
            } else {
                random::minimal_tripotent(&mut ctx.rng, &s)
            };
            let before = tripotent::is_orthogonal(u.element(), v.element(), DEFAULT_TOL)?;
            let fu = induced_tripotent_map(phi.as_ref(), &u, DEFAULT_TOL)?;
            let fv = induced_tripotent_map(phi.as_ref(), &v, DEFAULT_TOL)?;
            let after = tripotent::is_orthogonal(fu.element(), fv.element(), DEFAULT_TOL)?;
            results.push(before == after);
        }
    }
    Ok(count(results))
}

fn frame_images(ctx: &mut Ctx) -> Result<f64> {
    let mut results = Vec::new();
    for phi in stock_maps(&mut ctx.rng)? {
        for _ in 0..ctx.cases {
            let f = random::frame(&mut ctx.rng, phi.domain());
            let images = f
                .members()
                .iter()
                .map(|e| induced_tripotent_map(phi.as_ref(), e, DEFAULT_TOL))
                .collect::<Result<Vec<_>>>()?;
            let n = images.len();
            results.push(Frame::new(images, DEFAULT_TOL).is_ok() && n == phi.domain().rank());
        }
    }
    Ok(count(results))
}

fn holomorphy(ctx: &mut Ctx) -> Result<f64> {
    let product = TripleSpace::new([(2, 2), (1, 1)]).expect("valid");
    let mut samples = |s: &TripleSpace| maps::sample_minimal(s, ctx.cases, &mut ctx.rng);
    let cases: Vec<(Box<dyn BallMap>, Vec<Tripotent>, Holomorphy)> = vec![
        (Box::new(LinearTripleMap::block_embedding(&m22(), &m23())?), samples(&m22()), Holomorphy::Holomorphic),
        (Box::new(LinearTripleMap::conjugation(&m22())), samples(&m22()), Holomorphy::Antiholomorphic),
        (Box::new(factorwise_conjugation(&product, vec![false, true])), samples(&product), Holomorphy::MixedUnknown),
        (Box::new(factorwise_conjugation(&product, vec![true, true])), samples(&product), Holomorphy::Antiholomorphic),
    ];
    let mut results = Vec::new();
    for (phi, s, expected) in cases {
        results.push(holomorphy_classifier(phi.as_ref(), &s, DEFAULT_TOL)?.0 == expected);
    }
    Ok(count(results))
}

fn rank_genus(_ctx: &mut Ctx) -> Result<f64> {
    let cases = [
        (m22(), TripleSpace::matrices(1, 5), "excluded"),
        (m22(), m23(), "not excluded"),
        (TripleSpace::disc(), TripleSpace::disc(), "not excluded"),
        (TripleSpace::bidisc(), TripleSpace::disc(), "excluded"),
    ];
    Ok(count(cases.iter().map(|(a, b, v)| rank_genus_report(a, b).verdict == *v)))
}

fn components(ctx: &mut Ctx) -> Result<f64> {
    let product = TripleSpace::new([(2, 2), (1, 1)]).expect("valid");
    let cases = [
        (TripleSpace::bidisc(), 2usize),
        (m22(), 1),
        (product, 2),
        (TripleSpace::new([(1, 2), (2, 1), (1, 1)]).expect("valid"), 3),
    ];
    let mut results = Vec::new();
    for (s, expected) in cases {
        let seed = ctx.rng.next_seed();
        let samples = maps::component_samples(&s, ctx.cases, seed);
        let c = irreducible_components(&s, &samples, DEFAULT_TOL)?;
        results.push(c.groups.len() == expected && c.matches_factors);
    }
    Ok(count(results))
}

fn mobius_invariance(ctx: &mut Ctx) -> Result<f64> {
    let cases = [
        (LinearTripleMap::block_embedding(&m22(), &m23())?, true),
        (LinearTripleMap::identity(&m23()), true),
        (LinearTripleMap::disc_to_bidisc(C64::new(1.0, 0.0)), true),
        (LinearTripleMap::disc_to_bidisc(C64::new(0.5, 0.0)), false),
    ];
    let mut results = Vec::new();
    for (phi, expected) in cases {
        let seed = ctx.rng.next_seed();
        let r = mobius_invariance_check(&phi, ctx.cases, seed)?;
        results.push(r.verdict == "consistent" && r.passed() == expected && r.checks[0].passed);
    }
    Ok(count(results))
}

trait NextSeed {
    fn next_seed(&mut self) -> u64;
}

impl NextSeed for SeededRng {
    fn next_seed(&mut self) -> u64 {
        rand::Rng::random(self)
    }
}

//! Seeded samplers for elements, tripotents, frames and unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::space::{CMatrix, CVector, Element, TripleSpace, C64};
use crate::tripotent::{Frame, Tripotent};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic sub-seed for a labelled task (64-bit FNV-1a over the label,
/// mixed with the master seed).
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ master.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn unit_vector(rng: &mut impl Rng, n: usize) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| gaussian(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Haar-distributed unitary via QR with phase correction.
pub fn unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (q, r) = qr.unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Gaussian element of `space` (not normalised).
pub fn element(rng: &mut impl Rng, space: &TripleSpace) -> Element {
    let blocks = space
        .factors()
        .iter()
        .map(|f| gaussian_matrix(rng, f.rows, f.cols))
        .collect();
    Element::new(space.clone(), blocks).expect("shapes follow the space")
}

/// Element of `D` whose norm is uniform on `[0, max_norm)`.
pub fn ball_element(rng: &mut impl Rng, space: &TripleSpace, max_norm: f64) -> Element {
    let x = element(rng, space);
    let target = rng.random::<f64>() * max_norm;
    let norm = x.spectral_norm();
    if norm == 0.0 {
        return x;
    }
    x * (target / norm)
}

/// Element with spectral norm exactly `norm` (up to rounding).
pub fn element_with_norm(rng: &mut impl Rng, space: &TripleSpace, norm: f64) -> Element {
    let x = element(rng, space);
    let n = x.spectral_norm();
    x * (norm / n)
}

pub fn minimal_in_factor(rng: &mut impl Rng, space: &TripleSpace, factor: usize) -> Tripotent {
    let f = space.factors()[factor];
    let u = unit_vector(rng, f.rows);
    let v = unit_vector(rng, f.cols);
    Tripotent::rank_one(space, factor, &u, &v).expect("unit vectors are non-zero")
}

/// Minimal tripotent in a factor chosen with probability proportional to its rank.
pub fn minimal_tripotent(rng: &mut impl Rng, space: &TripleSpace) -> Tripotent {
    let mut pick = rng.random_range(0..space.rank());
    for (k, f) in space.factors().iter().enumerate() {
        if pick < f.rank() {
            return minimal_in_factor(rng, space, k);
        }
        pick -= f.rank();
    }
    unreachable!("pick is below the rank")
}

/// Random frame: `U_i V_i^*` from Haar unitaries in each factor.
pub fn frame(rng: &mut impl Rng, space: &TripleSpace) -> Frame {
    let mut members = Vec::with_capacity(space.rank());
    for (k, f) in space.factors().iter().enumerate() {
        let u = unitary(rng, f.rows);
        let v = unitary(rng, f.cols);
        for i in 0..f.rank() {
            members.push(
                Tripotent::rank_one(
                    space,
                    k,
                    &u.column(i).into_owned(),
                    &v.column(i).into_owned(),
                )
                .expect("unit columns"),
            );
        }
    }
    Frame::from_members_unchecked(members)
}

/// Non-zero tripotent: a non-empty random subset of a random frame.
pub fn tripotent(rng: &mut impl Rng, space: &TripleSpace) -> Tripotent {
    let f = frame(rng, space);
    let mut chosen: Vec<&Tripotent> = f
        .members()
        .iter()
        .filter(|_| rng.random::<bool>())
        .collect();
    if chosen.is_empty() {
        chosen.push(&f.members()[rng.random_range(0..f.len())]);
    }
    let sum = chosen
        .iter()
        .fold(Element::zeros(space), |acc, t| acc + t.element().clone());
    Tripotent::new(sum, 1e-8).expect("sum of orthogonal tripotents")
}

/// Reals uniform on `(-bound, bound)`.
pub fn uniform_vec(rng: &mut impl Rng, n: usize, bound: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-bound..bound)).collect()
}

pub fn unimodular(rng: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

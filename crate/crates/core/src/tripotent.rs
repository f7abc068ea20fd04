//! Tripotents, frames, spectral decompositions and Peirce projections.
//!
//! In a type-I factor a tripotent is a partial isometry; a minimal tripotent
//! is a rank-one partial isometry `u v^*` with unit vectors `u`, `v`.

use crate::error::{Error, Result};
use crate::linalg;
use crate::space::{CVector, Element, TripleSpace, C64};
use crate::triple::{self, tp, ComplexLinearOperator};

/// A tripotent `e` with `{e,e,e} = e`, together with its rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Tripotent {
    element: Element,
    rank: usize,
}

fn tripotent_residual(x: &Element) -> f64 {
    (&tp(x, x, x) - x).spectral_norm()
}

/// True iff `|{x,x,x} - x| <= tol * max(1, |x|)`.
pub fn is_tripotent(x: &Element, tol: f64) -> bool {
    tripotent_residual(x) <= tol * x.spectral_norm().max(1.0)
}

impl Tripotent {
    pub fn new(element: Element, tol: f64) -> Result<Self> {
        let residual = tripotent_residual(&element);
        if residual > tol * element.spectral_norm().max(1.0) {
            return Err(Error::NotTripotent { residual });
        }
        // partial isometries have singular values in {0, 1}
        let rank = element
            .blocks()
            .iter()
            .map(|b| linalg::rank(b, 0.5))
            .sum();
        Ok(Self { element, rank })
    }

    /// The minimal tripotent `u v^*` in factor `factor`; `u` and `v` are normalised.
    pub fn rank_one(space: &TripleSpace, factor: usize, u: &CVector, v: &CVector) -> Result<Self> {
        let nu = u.norm();
        let nv = v.norm();
        if nu == 0.0 || nv == 0.0 {
            return Err(Error::ZeroTripotent);
        }
        let block = linalg::outer(&(u / C64::new(nu, 0.0)), &(v / C64::new(nv, 0.0)));
        let element = Element::in_factor(space, factor, block)?;
        Ok(Self { element, rank: 1 })
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn space(&self) -> &TripleSpace {
        self.element.space()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn neg(&self) -> Self {
        Self {
            element: -&self.element,
            rank: self.rank,
        }
    }

    /// `c e` for a unimodular scalar `c`.
    pub fn rotate(&self, c: C64) -> Self {
        let c = c / c.norm();
        Self {
            element: self.element.scale(c),
            rank: self.rank,
        }
    }

    /// Left and right unit vectors of a rank-one tripotent and its factor.
    pub fn rank_one_parts(&self) -> Result<(usize, CVector, CVector)> {
        if self.rank != 1 {
            return Err(Error::NotMinimal);
        }
        let (k, block) = self
            .element
            .blocks()
            .iter()
            .enumerate()
            .find(|(_, b)| b.norm() > 0.5)
            .ok_or(Error::ZeroTripotent)?;
        let (u, _, v) = linalg::thin_svd(block);
        Ok((k, u.column(0).into_owned(), v.column(0).into_owned()))
    }

    /// Decomposition into mutually orthogonal minimal tripotents.
    pub fn minimal_parts(&self) -> Vec<Tripotent> {
        let space = self.space();
        let mut parts = Vec::new();
        for (k, block) in self.element.blocks().iter().enumerate() {
            let (u, s, v) = linalg::thin_svd(block);
            for (idx, sigma) in s.iter().enumerate() {
                if *sigma > 0.5 {
                    parts.push(
                        Tripotent::rank_one(
                            space,
                            k,
                            &u.column(idx).into_owned(),
                            &v.column(idx).into_owned(),
                        )
                        .expect("unit singular vectors"),
                    );
                }
            }
        }
        parts
    }
}

/// Dimension of the Peirce 2-space, from the trace of `P_2(e)`.
pub fn peirce2_dim(e: &Tripotent) -> usize {
    let p2 = peirce_projection_unchecked(e, 2);
    let trace: f64 = (0..p2.matrix().nrows()).map(|k| p2.matrix()[(k, k)].re).sum();
    trace.round() as usize
}

/// Minimality: rank one and `V_2(e) = C e`. Both criteria are evaluated and
/// must agree.
pub fn is_minimal(e: &Tripotent) -> Result<bool> {
    if e.is_zero() {
        return Err(Error::ZeroTripotent);
    }
    let by_rank = e.rank == 1;
    let by_peirce = peirce2_dim(e) == 1;
    if by_rank != by_peirce {
        return Err(Error::Inconsistent(format!(
            "rank {} but dim V_2(e) = {}",
            e.rank,
            peirce2_dim(e)
        )));
    }
    Ok(by_rank)
}

/// Orthogonality `a box b = 0`, confirmed against `{a,a,b} = 0`.
pub fn is_orthogonal(a: &Element, b: &Element, tol: f64) -> Result<bool> {
    a.space().ensure_same(b.space())?;
    let scale = (a.spectral_norm() * b.spectral_norm()).max(1.0) * tol;
    let by_box = triple::box_operator(a, b)?.op_norm() <= scale;
    let by_product = tp(a, a, b).spectral_norm() <= scale * a.spectral_norm().max(1.0);
    if by_box != by_product {
        return Err(Error::Inconsistent(
            "box-operator and triple-product orthogonality tests disagree".into(),
        ));
    }
    Ok(by_box)
}

/// `c <= e`: `e - c` is a tripotent orthogonal to `c`.
pub fn order_leq(c: &Tripotent, e: &Tripotent, tol: f64) -> Result<bool> {
    c.space().ensure_same(e.space())?;
    let diff = e.element() - c.element();
    if !is_tripotent(&diff, tol) {
        return Ok(false);
    }
    is_orthogonal(&diff, c.element(), tol)
}

fn peirce_projection_unchecked(e: &Tripotent, k: u8) -> ComplexLinearOperator {
    let x = e.element();
    match k {
        2 => triple::quadratic_pair_operator(x, x).expect("same space"),
        1 => {
            let q2 = triple::quadratic_pair_operator(x, x).expect("same space");
            let bx = triple::box_operator(x, x).expect("same space");
            bx.sub(&q2).expect("same space").scale(C64::new(2.0, 0.0))
        }
        0 => triple::bergman_operator(x, x).expect("same space"),
        _ => unreachable!("Peirce index is 0, 1 or 2"),
    }
}

/// Peirce projection `P_k(e)` onto the eigenspace of `e box e` for `k/2`.
pub fn peirce_projection(e: &Element, k: u8, tol: f64) -> Result<ComplexLinearOperator> {
    if k > 2 {
        return Err(Error::Invalid(format!("Peirce index {k} is not 0, 1 or 2")));
    }
    let t = Tripotent::new(e.clone(), tol)?;
    Ok(peirce_projection_unchecked(&t, k))
}

fn ensure_mutually_orthogonal(es: &[Tripotent], tol: f64) -> Result<()> {
    for (i, a) in es.iter().enumerate() {
        for b in &es[i + 1..] {
            if !is_orthogonal(a.element(), b.element(), tol)? {
                return Err(Error::NotOrthogonal);
            }
        }
    }
    Ok(())
}

/// Joint Peirce projection `P_ij(e_1, ..., e_n)`, indices in `0..=n` with `0`
/// the annihilator slot. Swapped indices are normalised.
pub fn joint_peirce_projection(
    es: &[Tripotent],
    i: usize,
    j: usize,
    tol: f64,
) -> Result<ComplexLinearOperator> {
    let space = es
        .first()
        .map(|e| e.space().clone())
        .ok_or_else(|| Error::Invalid("empty tripotent family".into()))?;
    let n = es.len();
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if j > n {
        return Err(Error::Invalid(format!("joint Peirce index {j} exceeds {n}")));
    }
    ensure_mutually_orthogonal(es, tol)?;
    Ok(joint_peirce_unchecked(&space, es, i, j))
}

pub(crate) fn joint_peirce_unchecked(
    space: &TripleSpace,
    es: &[Tripotent],
    i: usize,
    j: usize,
) -> ComplexLinearOperator {
    let mut acc = ComplexLinearOperator::identity(space);
    for (idx, e) in es.iter().enumerate() {
        let k = idx + 1;
        let level = u8::from(i == k) + u8::from(j == k);
        acc = peirce_projection_unchecked(e, level)
            .compose(&acc)
            .expect("same space");
    }
    acc
}

/// All joint Peirce projections `P_ij` with `0 <= i <= j <= n`.
pub fn joint_peirce_family(
    es: &[Tripotent],
    tol: f64,
) -> Result<Vec<((usize, usize), ComplexLinearOperator)>> {
    let space = es
        .first()
        .map(|e| e.space().clone())
        .ok_or_else(|| Error::Invalid("empty tripotent family".into()))?;
    ensure_mutually_orthogonal(es, tol)?;
    let n = es.len();
    let mut out = Vec::new();
    for i in 0..=n {
        for j in i..=n {
            out.push(((i, j), joint_peirce_unchecked(&space, es, i, j)));
        }
    }
    Ok(out)
}

/// A maximal orthogonal family of minimal tripotents.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    members: Vec<Tripotent>,
}

impl Frame {
    pub fn new(members: Vec<Tripotent>, tol: f64) -> Result<Self> {
        let space = members
            .first()
            .map(|m| m.space().clone())
            .ok_or_else(|| Error::Invalid("empty frame".into()))?;
        if members.len() != space.rank() {
            return Err(Error::Invalid(format!(
                "frame has {} members but the rank is {}",
                members.len(),
                space.rank()
            )));
        }
        for m in &members {
            if !is_minimal(m)? {
                return Err(Error::NotMinimal);
            }
        }
        ensure_mutually_orthogonal(&members, tol)?;
        Ok(Self { members })
    }

    /// The frame of diagonal matrix units `E_{ii}`, factor by factor.
    pub fn standard(space: &TripleSpace) -> Self {
        let mut members = Vec::new();
        for (k, f) in space.factors().iter().enumerate() {
            for i in 0..f.rank() {
                members.push(Tripotent {
                    element: Element::matrix_unit(space, k, i, i),
                    rank: 1,
                });
            }
        }
        Self { members }
    }

    pub fn members(&self) -> &[Tripotent] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn space(&self) -> &TripleSpace {
        self.members[0].space()
    }

    /// `sum_i c_i e_i` for real coordinates.
    pub fn combination(&self, coords: &[f64]) -> Element {
        assert_eq!(coords.len(), self.members.len(), "one coordinate per frame member");
        self.members
            .iter()
            .zip(coords)
            .fold(Element::zeros(self.space()), |acc, (e, c)| {
                acc + e.element() * *c
            })
    }

    pub(crate) fn from_members_unchecked(members: Vec<Tripotent>) -> Self {
        Self { members }
    }
}

/// Extends mutually orthogonal minimal tripotents to a frame. The input
/// members come first, in order.
pub fn frame_completion(space: &TripleSpace, partial: &[Tripotent], tol: f64) -> Result<Frame> {
    for p in partial {
        space.ensure_same(p.space())?;
        if !is_minimal(p)? {
            return Err(Error::NotMinimal);
        }
    }
    ensure_mutually_orthogonal(partial, tol)?;
    let mut lefts: Vec<Vec<CVector>> = vec![Vec::new(); space.num_factors()];
    let mut rights: Vec<Vec<CVector>> = vec![Vec::new(); space.num_factors()];
    for p in partial {
        let (k, u, v) = p.rank_one_parts()?;
        lefts[k].push(u);
        rights[k].push(v);
    }
    let mut members = partial.to_vec();
    for (k, f) in space.factors().iter().enumerate() {
        let missing = f.rank() - lefts[k].len();
        if missing == 0 {
            continue;
        }
        let new_left = linalg::complete_orthonormal(&lefts[k], f.rows);
        let new_right = linalg::complete_orthonormal(&rights[k], f.cols);
        assert!(
            new_left.len() >= missing && new_right.len() >= missing,
            "orthonormal completion failed"
        );
        for (u, v) in new_left.iter().zip(&new_right).take(missing) {
            members.push(Tripotent::rank_one(space, k, u, v)?);
        }
    }
    let frame = Frame::new(members, tol)?;
    Ok(frame)
}

/// An ascending chain `e_1 < ... < e_r` with `e` at position `rank(e)`.
pub fn maximal_chain_through(e: &Tripotent, tol: f64) -> Result<Vec<Tripotent>> {
    if e.is_zero() {
        return Err(Error::ZeroTripotent);
    }
    let parts = e.minimal_parts();
    let frame = frame_completion(e.space(), &parts, tol)?;
    let mut acc = Element::zeros(e.space());
    let mut chain = Vec::with_capacity(frame.len());
    for (idx, m) in frame.members().iter().enumerate() {
        acc = acc + m.element().clone();
        chain.push(Tripotent {
            element: acc.clone(),
            rank: idx + 1,
        });
    }
    // the chain passes through e exactly (not only up to rounding)
    chain[parts.len() - 1] = e.clone();
    Ok(chain)
}

/// `x = sum_i sigma_i e_i` with non-increasing `sigma_i > 0` and mutually
/// orthogonal minimal tripotents `e_i`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub sigmas: Vec<f64>,
    pub tripotents: Vec<Tripotent>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self, space: &TripleSpace) -> Element {
        self.sigmas
            .iter()
            .zip(&self.tripotents)
            .fold(Element::zeros(space), |acc, (s, e)| acc + e.element() * *s)
    }
}

/// Singular values below this are dropped from spectral decompositions.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

pub fn spectral_decompose(x: &Element) -> SpectralDecomposition {
    let space = x.space();
    let mut terms: Vec<(f64, Tripotent)> = Vec::new();
    for (k, block) in x.blocks().iter().enumerate() {
        let (u, s, v) = linalg::thin_svd(block);
        for (idx, sigma) in s.iter().enumerate() {
            if *sigma > SPECTRAL_CUTOFF {
                let t = Tripotent::rank_one(
                    space,
                    k,
                    &u.column(idx).into_owned(),
                    &v.column(idx).into_owned(),
                )
                .expect("unit singular vectors");
                terms.push((*sigma, t));
            }
        }
    }
    // stable sort keeps factor order among ties
    terms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (sigmas, tripotents) = terms.into_iter().unzip();
    SpectralDecomposition { sigmas, tripotents }
}

/// Peirce components `(P_2 x, P_1 x, P_0 x)` of `x` relative to `e`.
pub fn peirce_components(e: &Tripotent, x: &Element) -> Result<(Element, Element, Element)> {
    e.space().ensure_same(x.space())?;
    let p2 = peirce_projection_unchecked(e, 2).apply(x)?;
    let p1 = peirce_projection_unchecked(e, 1).apply(x)?;
    let p0 = peirce_projection_unchecked(e, 0).apply(x)?;
    Ok((p2, p1, p0))
}

/// Coefficient `mu` with `x = mu e` for `x` in `V_2(e)`, `e` minimal.
pub fn coefficient_along(e: &Tripotent, x: &Element) -> C64 {
    // <x, e> / <e, e> in the Frobenius pairing; <e, e> = 1 for minimal e
    let ev = e.element().to_vector();
    ev.dotc(&x.to_vector()) / C64::new(ev.norm_squared(), 0.0)
}

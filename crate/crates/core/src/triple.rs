//! Triple product, box, quadratic and Bergman operators on type-I factors.
//!
//! On a factor of `p x q` matrices the triple product is
//! `{a,b,c} = (a b^* c + c b^* a) / 2`; on a product it acts blockwise.

use crate::error::{Error, Result};
use crate::linalg;
use crate::space::{CMatrix, CVector, Element, TripleSpace, C64};

/// A complex-linear map between vectorised triple spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLinearOperator {
    domain: TripleSpace,
    codomain: TripleSpace,
    matrix: CMatrix,
}

impl ComplexLinearOperator {
    pub fn new(domain: TripleSpace, codomain: TripleSpace, matrix: CMatrix) -> Result<Self> {
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
        })
    }

    /// Matrix of a complex-linear map, obtained by applying it to the basis of
    /// matrix units.
    pub fn from_linear_fn(
        domain: &TripleSpace,
        codomain: &TripleSpace,
        f: impl Fn(&Element) -> Element,
    ) -> Self {
        let basis = Element::basis(domain);
        let mut matrix = CMatrix::zeros(codomain.dim(), domain.dim());
        for (j, e) in basis.iter().enumerate() {
            let image = f(e);
            assert_eq!(image.space(), codomain, "map landed in the wrong space");
            matrix.set_column(j, &image.to_vector());
        }
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
        }
    }

    pub fn identity(space: &TripleSpace) -> Self {
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            matrix: CMatrix::identity(space.dim(), space.dim()),
        }
    }

    pub fn zero(domain: &TripleSpace, codomain: &TripleSpace) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: CMatrix::zeros(codomain.dim(), domain.dim()),
        }
    }

    pub fn domain(&self) -> &TripleSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &TripleSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.domain.ensure_same(x.space())?;
        Element::from_vector(&self.codomain, &(&self.matrix * x.to_vector()))
    }

    pub fn apply_vector(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &ComplexLinearOperator) -> Result<Self> {
        other.codomain.ensure_same(&self.domain)?;
        Ok(Self {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn add(&self, other: &ComplexLinearOperator) -> Result<Self> {
        self.domain.ensure_same(&other.domain)?;
        self.codomain.ensure_same(&other.codomain)?;
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &ComplexLinearOperator) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: &self.matrix * c,
        }
    }

    /// Operator norm with respect to the Euclidean (Frobenius) structure of the
    /// vectorised space.
    pub fn op_norm(&self) -> f64 {
        linalg::op_norm(&self.matrix)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).0
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn distance(&self, other: &ComplexLinearOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn inverse(&self) -> Result<Self> {
        let condition = linalg::condition_estimate(&self.matrix);
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::LinearSolve {
                residual: f64::INFINITY,
                condition,
            })?;
        Ok(Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: inv,
        })
    }
}

fn tp_block(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    let bs = b.adjoint();
    (a * &bs * c + c * &bs * a) * C64::new(0.5, 0.0)
}

/// `{a,b,c}` without the shape check; panics on mismatched spaces.
pub(crate) fn tp(a: &Element, b: &Element, c: &Element) -> Element {
    assert_eq!(a.space(), b.space(), "element spaces differ");
    let blocks = a
        .blocks()
        .iter()
        .zip(b.blocks())
        .zip(c.blocks())
        .map(|((a, b), c)| tp_block(a, b, c))
        .collect();
    Element::new(a.space().clone(), blocks).expect("triple product preserves shapes")
}

/// The triple product `{a,b,c}`: complex-linear in `a` and `c`, conjugate-linear in `b`.
pub fn triple_product(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    a.space().ensure_same(b.space())?;
    a.space().ensure_same(c.space())?;
    Ok(tp(a, b, c))
}

/// Matrix of `x -> {a,b,x}`.
pub fn box_operator(a: &Element, b: &Element) -> Result<ComplexLinearOperator> {
    a.space().ensure_same(b.space())?;
    Ok(ComplexLinearOperator::from_linear_fn(
        a.space(),
        a.space(),
        |x| tp(a, b, x),
    ))
}

/// `Q_a(x) = {a,x,a} = a x^* a` (conjugate-linear in `x`).
pub fn quadratic_op(a: &Element, x: &Element) -> Result<Element> {
    a.space().ensure_same(x.space())?;
    Ok(a.zip_blocks(x, |a, x| a * x.adjoint() * a))
}

/// Matrix of the complex-linear map `Q_a Q_b`.
pub fn quadratic_pair_operator(a: &Element, b: &Element) -> Result<ComplexLinearOperator> {
    a.space().ensure_same(b.space())?;
    Ok(ComplexLinearOperator::from_linear_fn(
        a.space(),
        a.space(),
        |x| {
            let qb = b.zip_blocks(x, |b, x| b * x.adjoint() * b);
            a.zip_blocks(&qb, |a, y| a * y.adjoint() * a)
        },
    ))
}

fn identity_like(m: &CMatrix, rows: bool) -> CMatrix {
    let n = if rows { m.nrows() } else { m.ncols() };
    CMatrix::identity(n, n)
}

/// `B(a,b) x` via the type-I closed form `(1 - a b^*) x (1 - b^* a)`.
pub fn bergman_apply(a: &Element, b: &Element, x: &Element) -> Result<Element> {
    a.space().ensure_same(b.space())?;
    a.space().ensure_same(x.space())?;
    let blocks = a
        .blocks()
        .iter()
        .zip(b.blocks())
        .zip(x.blocks())
        .map(|((a, b), x)| {
            let left = identity_like(a, true) - a * b.adjoint();
            let right = identity_like(a, false) - b.adjoint() * a;
            left * x * right
        })
        .collect();
    Element::new(a.space().clone(), blocks)
}

/// `B(a,b) x = x - 2{a,b,x} + {a,{b,x,b},a}` evaluated term by term from the
/// triple product.
pub fn bergman_apply_expanded(a: &Element, b: &Element, x: &Element) -> Result<Element> {
    a.space().ensure_same(b.space())?;
    a.space().ensure_same(x.space())?;
    let inner = tp(b, x, b);
    Ok(x - &(tp(a, b, x) * 2.0) + tp(a, &inner, a))
}

/// Matrix of the Bergman operator `B(a,b)`.
pub fn bergman_operator(a: &Element, b: &Element) -> Result<ComplexLinearOperator> {
    a.space().ensure_same(b.space())?;
    Ok(ComplexLinearOperator::from_linear_fn(
        a.space(),
        a.space(),
        |x| bergman_apply(a, b, x).expect("shapes checked"),
    ))
}

/// Per-factor left/right multipliers `L_k`, `R_k` of an operator `x -> L x R`.
#[derive(Clone, Debug)]
pub struct Sandwich {
    space: TripleSpace,
    left: Vec<CMatrix>,
    right: Vec<CMatrix>,
}

impl Sandwich {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.space.ensure_same(x.space())?;
        Ok(x.map_blocks(|k, b| &self.left[k] * b * &self.right[k]))
    }

    pub fn to_operator(&self) -> ComplexLinearOperator {
        ComplexLinearOperator::from_linear_fn(&self.space, &self.space, |x| {
            self.apply(x).expect("same space")
        })
    }

    pub fn left(&self) -> &[CMatrix] {
        &self.left
    }

    pub fn right(&self) -> &[CMatrix] {
        &self.right
    }
}

fn bergman_power(a: &Element, inverse: bool) -> Result<Sandwich> {
    a.ensure_in_ball()?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for b in a.blocks() {
        let l = identity_like(b, true) - b * b.adjoint();
        let r = identity_like(b, false) - b.adjoint() * b;
        if inverse {
            left.push(linalg::pd_inv_sqrt(&l)?);
            right.push(linalg::pd_inv_sqrt(&r)?);
        } else {
            left.push(linalg::psd_sqrt(&l)?);
            right.push(linalg::psd_sqrt(&r)?);
        }
    }
    Ok(Sandwich {
        space: a.space().clone(),
        left,
        right,
    })
}

/// `B(a,a)^{1/2}` as the sandwich `(1 - a a^*)^{1/2} x (1 - a^* a)^{1/2}`.
pub fn bergman_sqrt(a: &Element) -> Result<Sandwich> {
    bergman_power(a, false)
}

/// `B(a,a)^{-1/2}` as the sandwich `(1 - a a^*)^{-1/2} x (1 - a^* a)^{-1/2}`.
pub fn bergman_inv_sqrt_sandwich(a: &Element) -> Result<Sandwich> {
    bergman_power(a, true)
}

/// Matrix of `B(a,a)^{-1/2}`; requires `|a| < 1`.
pub fn bergman_inv_sqrt(a: &Element) -> Result<ComplexLinearOperator> {
    Ok(bergman_power(a, true)?.to_operator())
}

pub fn spectral_norm(x: &Element) -> f64 {
    x.spectral_norm()
}

/// Rank, dimension and genus data of a space.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SpaceInvariants {
    pub rank: usize,
    pub dim: usize,
    pub genus: Vec<usize>,
    /// `r p - dim` for each irreducible factor, equal to `min(p,q)^2`.
    pub rp_minus_dim: Vec<usize>,
    pub rp_minus_dim_total: usize,
}

pub fn space_invariants(space: &TripleSpace) -> SpaceInvariants {
    let rp_minus_dim: Vec<usize> = space
        .factors()
        .iter()
        .map(|f| f.rank() * f.genus() - f.dim())
        .collect();
    SpaceInvariants {
        rank: space.rank(),
        dim: space.dim(),
        genus: space.factors().iter().map(|f| f.genus()).collect(),
        rp_minus_dim_total: rp_minus_dim.iter().sum(),
        rp_minus_dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::ONE;

    fn disc(z: C64) -> Element {
        Element::from_scalars(&[z])
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn disc_triple_products() {
        let one = disc(ONE);
        assert_eq!(triple_product(&one, &one, &one).unwrap(), one);
        let v = triple_product(&disc(re(2.0)), &one, &disc(re(3.0))).unwrap();
        assert!((v.block(0)[(0, 0)] - re(6.0)).norm() < 1e-15);
    }

    #[test]
    fn orthogonal_matrix_units_annihilate() {
        let s = TripleSpace::matrices(2, 2);
        let e11 = Element::matrix_unit(&s, 0, 0, 0);
        let e22 = Element::matrix_unit(&s, 0, 1, 1);
        assert_eq!(triple_product(&e11, &e11, &e22).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn box_of_matrix_unit_has_peirce_spectrum() {
        let s = TripleSpace::matrices(2, 2);
        let e11 = Element::matrix_unit(&s, 0, 0, 0);
        let op = box_operator(&e11, &e11).unwrap();
        // vectorisation order: E11, E12, E21, E22
        let diag: Vec<f64> = (0..4).map(|k| op.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 0.5, 0.5, 0.0]);
        assert!(op.hermitian_defect() < 1e-15);
        assert_eq!(box_operator(&Element::zeros(&s), &Element::zeros(&s)).unwrap().op_norm(), 0.0);
    }

    #[test]
    fn quadratic_operator_examples() {
        let q = quadratic_op(&disc(re(0.5)), &disc(C64::new(0.0, 1.0))).unwrap();
        assert!((q.block(0)[(0, 0)] - C64::new(0.0, -0.25)).norm() < 1e-15);
        let s = TripleSpace::matrices(2, 3);
        let e = Element::matrix_unit(&s, 0, 1, 2);
        assert_eq!(quadratic_op(&e, &e).unwrap(), e);
    }

    #[test]
    fn bergman_disc_value() {
        let a = disc(re(0.5));
        let op = bergman_operator(&a, &a).unwrap();
        assert!((op.matrix()[(0, 0)] - re(9.0 / 16.0)).norm() < 1e-15);
        let zero = Element::zeros(a.space());
        assert_eq!(bergman_operator(&zero, &a).unwrap(), ComplexLinearOperator::identity(a.space()));
    }

    #[test]
    fn bergman_inverse_square_root_disc() {
        let op = bergman_inv_sqrt(&disc(re(0.5))).unwrap();
        assert!((op.matrix()[(0, 0)] - re(4.0 / 3.0)).norm() < 1e-14);
        assert!(bergman_inv_sqrt(&disc(re(1.0))).is_err());
        let id = bergman_inv_sqrt(&disc(re(0.0))).unwrap();
        assert_eq!(id, ComplexLinearOperator::identity(&TripleSpace::disc()));
    }

    #[test]
    fn invariants_of_small_spaces() {
        let inv = space_invariants(&TripleSpace::matrices(2, 3));
        assert_eq!((inv.rank, inv.dim, inv.genus[0], inv.rp_minus_dim_total), (2, 6, 5, 4));
        let inv = space_invariants(&TripleSpace::disc());
        assert_eq!((inv.rank, inv.dim, inv.genus[0], inv.rp_minus_dim_total), (1, 1, 2, 1));
        let inv = space_invariants(&TripleSpace::bidisc());
        assert_eq!((inv.rank, inv.dim), (2, 2));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Element::zeros(&TripleSpace::matrices(2, 2));
        let b = Element::zeros(&TripleSpace::matrices(2, 3));
        assert!(matches!(triple_product(&a, &a, &b), Err(Error::ShapeMismatch { .. })));
        assert!(box_operator(&a, &b).is_err());
    }
}

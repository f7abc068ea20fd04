use crate::error::{Error, Result};
use crate::linalg;
use crate::space::{CMatrix, Element};
use crate::tripotent::Tripotent;

/// Relative eigenvalue floor below which a cone point counts as singular.
const SINGULAR_FLOOR: f64 = 1e-12;

/// An element of the JB-algebra `A(e)`, the self-adjoint part of `V_2(e)`.
///
/// Stored per factor as the Hermitian matrix `x e^*`, which does not depend
/// on a choice of singular vectors for `e`.
#[derive(Clone, Debug)]
pub struct ConePoint {
    reference: Tripotent,
    blocks: Vec<CMatrix>,
}

impl ConePoint {
    /// Embeds `x` from `V_2(e)`; fails unless `x` is self-adjoint there.
    pub fn new(reference: Tripotent, x: &Element, tol: f64) -> Result<Self> {
        reference.space().ensure_same(x.space())?;
        let blocks: Vec<CMatrix> = x
            .blocks()
            .iter()
            .zip(reference.element().blocks())
            .map(|(xb, eb)| xb * eb.adjoint())
            .collect();
        for (b, (xb, eb)) in blocks.iter().zip(x.blocks().iter().zip(reference.element().blocks())) {
            let defect = (b - b.adjoint()).norm();
            // x must also lie in V_2(e): x = e e^* x e^* e
            let projected = eb * eb.adjoint() * xb * eb.adjoint() * eb;
            let outside = (xb - projected).norm();
            if defect > tol * xb.norm().max(1.0) || outside > tol * xb.norm().max(1.0) {
                return Err(Error::Invalid(format!(
                    "element is not in A(e): Hermitian defect {defect:e}, off-Peirce {outside:e}"
                )));
            }
        }
        Ok(Self { reference, blocks })
    }

    /// The unit `e` of `A(e)`.
    pub fn unit(reference: Tripotent) -> Self {
        let x = reference.element().clone();
        Self::new(reference, &x, 1e-8).expect("e lies in A(e)")
    }

    pub fn reference(&self) -> &Tripotent {
        &self.reference
    }

    /// `s x s` Hermitian coordinates `U_s^* x V_s` for each factor with `s > 0`,
    /// where `e = U_s V_s^*`.
    pub fn coordinates(&self) -> Vec<CMatrix> {
        let bases = self.bases();
        self.blocks
            .iter()
            .zip(&bases)
            .filter(|(_, u)| u.ncols() > 0)
            .map(|(b, u)| u.adjoint() * b * u)
            .collect()
    }

    /// Strictly positive definite in every factor.
    pub fn is_interior(&self) -> bool {
        self.coordinates().iter().all(|c| {
            let (vals, _) = linalg::hermitian_eigen(c);
            let top = vals.last().copied().unwrap_or(0.0).abs().max(1.0);
            vals.first().is_some_and(|&v| v > SINGULAR_FLOOR * top)
        })
    }

    fn bases(&self) -> Vec<CMatrix> {
        self.reference
            .element()
            .blocks()
            .iter()
            .map(|eb| {
                let (u, s, _) = linalg::thin_svd(eb);
                let k = s.iter().filter(|&&x| x > 0.5).count();
                u.columns(0, k).into_owned()
            })
            .collect()
    }

    fn paired(&self, other: &ConePoint) -> Result<Vec<(CMatrix, CMatrix)>> {
        let gap = (self.reference.element() - other.reference.element()).spectral_norm();
        if gap > 1e-8 {
            return Err(Error::Invalid(
                "cone points belong to different tripotents".into(),
            ));
        }
        let bases = self.bases();
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(&bases)
            .filter(|(_, u)| u.ncols() > 0)
            .map(|((a, b), u)| {
                (
                    linalg::hermitian_part(&(u.adjoint() * a * u)),
                    linalg::hermitian_part(&(u.adjoint() * b * u)),
                )
            })
            .collect())
    }
}

/// `M(x/y) = inf {l > 0 : x <= l y}`, the largest eigenvalue of
/// `y^{-1/2} x y^{-1/2}`, maximised over factors.
pub fn cone_m(x: &ConePoint, y: &ConePoint) -> Result<f64> {
    let mut best: f64 = 0.0;
    for (xb, yb) in x.paired(y)? {
        let (vals, _) = linalg::hermitian_eigen(&yb);
        let top = vals.last().copied().unwrap_or(0.0).abs().max(1.0);
        if vals.first().is_none_or(|&v| v <= SINGULAR_FLOOR * top) {
            return Err(Error::SingularCone);
        }
        let r = linalg::pd_inv_sqrt(&yb)?;
        best = best.max(linalg::lambda_max(&(&r * xb * &r)));
    }
    Ok(best)
}

/// Thompson metric `max(log M(x/y), log M(y/x))`.
pub fn thompson(x: &ConePoint, y: &ConePoint) -> Result<f64> {
    Ok(cone_m(x, y)?.ln().max(cone_m(y, x)?.ln()))
}

/// Hilbert metric `1/2 log(M(x/y) M(y/x))`.
pub fn hilbert(x: &ConePoint, y: &ConePoint) -> Result<f64> {
    Ok(0.5 * (cone_m(x, y)? * cone_m(y, x)?).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{TripleSpace, C64};
    use crate::tripotent::Frame;

    fn setup() -> (Tripotent, Frame) {
        let s = TripleSpace::matrices(2, 2);
        let f = Frame::standard(&s);
        let e = Tripotent::new(f.combination(&[1.0, 1.0]), 1e-8).unwrap();
        (e, f)
    }

    #[test]
    fn identity_and_diagonal() {
        let (e, f) = setup();
        let one = ConePoint::unit(e.clone());
        assert!((cone_m(&one, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!(thompson(&one, &one).unwrap().abs() < 1e-15);
        let d = ConePoint::new(e.clone(), &f.combination(&[1.0, 0.25]), 1e-8).unwrap();
        assert!((hilbert(&d, &one).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((thompson(&d, &one).unwrap() - 4f64.ln()).abs() < 1e-14);
        let scaled = ConePoint::new(e.clone(), &f.combination(&[3.0, 0.75]), 1e-8).unwrap();
        let half = ConePoint::new(e, &f.combination(&[0.5, 0.5]), 1e-8).unwrap();
        assert!((hilbert(&scaled, &half).unwrap() - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn singular_and_foreign_points() {
        let (e, f) = setup();
        let one = ConePoint::unit(e.clone());
        let singular = ConePoint::new(e.clone(), &f.combination(&[1.0, 0.0]), 1e-8).unwrap();
        assert!(!singular.is_interior());
        assert!(matches!(cone_m(&one, &singular), Err(Error::SingularCone)));
        assert!((cone_m(&singular, &one).unwrap() - 1.0).abs() < 1e-15);
        let off = Element::matrix_unit(f.space(), 0, 0, 1) * C64::new(0.0, 1.0);
        assert!(ConePoint::new(e, &(f.combination(&[1.0, 1.0]) + off), 1e-8).is_err());
    }
}

use std::fmt;

use super::gromov::gromov_singletons;
use super::horofunction::{singleton_eval, singleton_eval_unchecked};
use crate::error::{Error, Result};
use crate::geometry::{mobius, FlatChart};
use crate::space::Element;
use crate::tripotent::{self, Frame, Tripotent};

/// Algebraic relation between two minimal tripotents, read off Gromov products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Opposite,
    Orthogonal,
    IMultiple,
    MinusIMultiple,
    Generic,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairClass::Opposite => "opposite",
            PairClass::Orthogonal => "orthogonal",
            PairClass::IMultiple => "i-multiple",
            PairClass::MinusIMultiple => "minus-i-multiple",
            PairClass::Generic => "generic",
        })
    }
}

/// Decision tree: a zero product means `v = -u`; two infinite products mean
/// orthogonality; the frame condition together with a product sum of `log 2`
/// means `v = +-iu`.
pub fn classify_pair(u: &Tripotent, v: &Tripotent, tol: f64) -> Result<PairClass> {
    let g = gromov_singletons(u, v)?;
    if g.abs() <= tol {
        return Ok(PairClass::Opposite);
    }
    let g_neg = gromov_singletons(u, &v.neg())?;
    if g.is_infinite() && g_neg.is_infinite() {
        return Ok(PairClass::Orthogonal);
    }
    let frame = tripotent::frame_completion(u.space(), std::slice::from_ref(u), tol)?;
    let mut frame_condition = true;
    for other in &frame.members()[1..] {
        if !tripotent::is_orthogonal(v.element(), other.element(), tol)? {
            frame_condition = false;
            break;
        }
    }
    if frame_condition && (g + g_neg - std::f64::consts::LN_2).abs() <= tol {
        let iu = u.element() * crate::space::I;
        if (v.element() - &iu).spectral_norm() <= tol {
            return Ok(PairClass::IMultiple);
        }
        if (v.element() + &iu).spectral_norm() <= tol {
            return Ok(PairClass::MinusIMultiple);
        }
    }
    Ok(PairClass::Generic)
}

/// Outcome of the flat-membership test with its coordinate cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatMembership {
    /// `Xi_{e_i}(x) + Xi_{-e_i}(x) = 0` for every frame member.
    pub in_flat: bool,
    pub max_sum: f64,
    /// Distance from `x` to its real frame coordinates recombined.
    pub coordinate_residual: f64,
    pub coordinates_agree: bool,
}

pub fn flat_membership_test(frame: &Frame, x: &Element, tol: f64) -> Result<FlatMembership> {
    frame.space().ensure_same(x.space())?;
    x.ensure_in_ball()?;
    let mut max_sum: f64 = 0.0;
    for e in frame.members() {
        let plus = singleton_eval_unchecked(e.element(), x);
        let minus = singleton_eval_unchecked(&-e.element(), x);
        max_sum = max_sum.max((plus + minus).abs());
    }
    let (_, coordinate_residual) = FlatChart::new(frame.clone()).coordinates(x)?;
    let in_flat = max_sum <= tol;
    Ok(FlatMembership {
        in_flat,
        max_sum,
        coordinate_residual,
        coordinates_agree: in_flat == (coordinate_residual <= tol),
    })
}

/// Outcome of the test `Xi_e(x) = Xi_{-e}(x) = 0`, cross-checked against the
/// Peirce components of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeirceZero {
    pub in_v0: bool,
    pub xi_plus: f64,
    pub xi_minus: f64,
    /// `|P_2(e) x| + |P_1(e) x|`.
    pub peirce_residual: f64,
    pub agree: bool,
}

pub fn peirce_zero_test(e: &Tripotent, x: &Element, tol: f64) -> Result<PeirceZero> {
    let xi_plus = singleton_eval(e, x)?;
    let xi_minus = singleton_eval(&e.neg(), x)?;
    let (p2, p1, _) = tripotent::peirce_components(e, x)?;
    let peirce_residual = p2.spectral_norm() + p1.spectral_norm();
    let in_v0 = xi_plus.abs() <= tol && xi_minus.abs() <= tol;
    Ok(PeirceZero {
        in_v0,
        xi_plus,
        xi_minus,
        peirce_residual,
        agree: in_v0 == (peirce_residual <= tol),
    })
}

/// `max_i |Xi_{e_i}(g_x(y)) - Xi_{e_i}(y) + tanh^{-1} lambda_i|` for
/// `x = sum_i lambda_i e_i`.
pub fn translation_action_check(frame: &Frame, lambdas: &[f64], y: &Element) -> Result<f64> {
    let x = FlatChart::new(frame.clone()).point(lambdas)?;
    if !y.is_in_ball() {
        return Err(Error::OutsideDomain {
            norm: y.spectral_norm(),
        });
    }
    let gy = mobius(&x, y)?;
    let mut worst: f64 = 0.0;
    for (e, l) in frame.members().iter().zip(lambdas) {
        let moved = singleton_eval_unchecked(e.element(), &gy);
        let base = singleton_eval_unchecked(e.element(), y);
        worst = worst.max((moved - base + l.atanh()).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{TripleSpace, C64};
    use crate::DEFAULT_TOL;

    fn frame() -> Frame {
        Frame::standard(&TripleSpace::matrices(2, 2))
    }

    #[test]
    fn classification_examples() {
        let f = frame();
        let u = &f.members()[0];
        let c = |v: &Tripotent| classify_pair(u, v, DEFAULT_TOL).unwrap();
        assert_eq!(c(&u.neg()), PairClass::Opposite);
        assert_eq!(c(&f.members()[1]), PairClass::Orthogonal);
        assert_eq!(c(&u.rotate(C64::new(0.0, 1.0))), PairClass::IMultiple);
        assert_eq!(c(&u.rotate(C64::new(0.0, -1.0))), PairClass::MinusIMultiple);
        assert_eq!(c(&u.rotate(C64::new(1.0, 1.0))), PairClass::Generic);
        assert_eq!(c(u), PairClass::Generic);
    }

    #[test]
    fn flat_membership_examples() {
        let f = frame();
        let on = f.combination(&[0.3, -0.6]);
        let r = flat_membership_test(&f, &on, DEFAULT_TOL).unwrap();
        assert!(r.in_flat && r.coordinates_agree);
        let off = &on + &(Element::matrix_unit(f.space(), 0, 0, 1) * 0.1);
        let r = flat_membership_test(&f, &off, DEFAULT_TOL).unwrap();
        assert!(!r.in_flat && r.coordinates_agree);
        let r = flat_membership_test(&f, &Element::zeros(f.space()), DEFAULT_TOL).unwrap();
        assert!(r.in_flat);
    }

    #[test]
    fn peirce_zero_examples() {
        let f = frame();
        let e = &f.members()[0];
        let inside = f.combination(&[0.0, 0.7]);
        let r = peirce_zero_test(e, &inside, DEFAULT_TOL).unwrap();
        assert!(r.in_v0 && r.agree);
        let r = peirce_zero_test(e, &f.combination(&[0.2, 0.7]), DEFAULT_TOL).unwrap();
        assert!(!r.in_v0 && r.agree);
    }

    #[test]
    fn translation_examples() {
        let f = frame();
        let zero = Element::zeros(f.space());
        assert!(translation_action_check(&f, &[0.0, 0.0], &zero).unwrap() < 1e-15);
        assert!(translation_action_check(&f, &[0.4, -0.7], &zero).unwrap() < 1e-12);
        let y = f.combination(&[0.1, 0.2]) + Element::matrix_unit(f.space(), 0, 1, 0) * C64::new(0.3, 0.1);
        assert!(translation_action_check(&f, &[0.5, 0.6], &y).unwrap() < 1e-10);
    }
}

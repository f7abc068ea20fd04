//! Browser bindings for three small views of the disc and bidisc: a
//! horofunction heatmap, the image of a polar grid under a Möbius map, and
//! Gromov products of boundary directions.
//!
//! Every exported function has a plain Rust twin so the numerics can be
//! tested natively.

use symdom::boundary::{gromov_numeric, gromov_singletons, singleton_eval, DEFAULT_GROMOV_EXPONENTS};
use symdom::geometry::mobius;
use symdom::{Element, TripleSpace, Tripotent, C64, DEFAULT_TOL};
use wasm_bindgen::prelude::*;

fn unimodular(space: &TripleSpace, factor: usize, angle: f64) -> Option<Tripotent> {
    let mut coords = vec![C64::new(0.0, 0.0); space.num_factors()];
    *coords.get_mut(factor)? = C64::from_polar(1.0, angle);
    Tripotent::new(Element::from_scalars(&coords), DEFAULT_TOL).ok()
}

/// Row-major `size x size` samples of the singleton horofunction at `e^{i angle}`
/// over `[-1, 1]^2`; `NaN` outside the open disc.
pub fn horofunction_grid(angle: f64, size: usize) -> Vec<f64> {
    let disc = TripleSpace::disc();
    let e = unimodular(&disc, 0, angle).expect("disc has one factor");
    let step = 2.0 / size.max(2) as f64;
    let mut out = Vec::with_capacity(size * size);
    for row in 0..size {
        let y = 1.0 - (row as f64 + 0.5) * step;
        for col in 0..size {
            let x = -1.0 + (col as f64 + 0.5) * step;
            let z = Element::from_scalars(&[C64::new(x, y)]);
            out.push(if x * x + y * y < 1.0 {
                singleton_eval(&e, &z).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            });
        }
    }
    out
}

/// Image under `g_a` of `circles` concentric circles and `rays` radii,
/// each sampled at `samples` points. Polylines are flattened as `x, y` pairs
/// separated by a `NaN, NaN` pair.
pub fn mobius_polylines(a_re: f64, a_im: f64, circles: usize, rays: usize, samples: usize) -> Vec<f64> {
    let a = Element::from_scalars(&[C64::new(a_re, a_im)]);
    if !a.is_in_ball() {
        return Vec::new();
    }
    let samples = samples.max(2);
    let mut out = Vec::new();
    let mut push_line = |points: &mut dyn Iterator<Item = C64>| {
        for p in points {
            let image = mobius(&a, &Element::from_scalars(&[p]))
                .map(|w| w.block(0)[(0, 0)])
                .unwrap_or(C64::new(f64::NAN, f64::NAN));
            out.extend([image.re, image.im]);
        }
        out.extend([f64::NAN, f64::NAN]);
    };
    for k in 1..=circles {
        let r = 0.98 * k as f64 / circles as f64;
        let s = samples;
        push_line(&mut (0..=s).map(|i| C64::from_polar(r, std::f64::consts::TAU * i as f64 / s as f64)));
    }
    for k in 0..rays {
        let theta = std::f64::consts::TAU * k as f64 / rays.max(1) as f64;
        let s = samples;
        push_line(&mut (0..=s).map(|i| C64::from_polar(0.995 * i as f64 / s as f64, theta)));
    }
    out
}

/// Gromov product of the bidisc directions `e^{i theta_u}` in factor
/// `factor_u` and `e^{i theta_v}` in factor `factor_v`, as
/// `[closed form, numeric limit, divergent]` with infinities encoded as `inf`.
pub fn gromov_bidisc(theta_u: f64, factor_u: usize, theta_v: f64, factor_v: usize) -> Vec<f64> {
    let bidisc = TripleSpace::bidisc();
    let (Some(u), Some(v)) = (unimodular(&bidisc, factor_u, theta_u), unimodular(&bidisc, factor_v, theta_v)) else {
        return vec![f64::NAN; 3];
    };
    let closed = gromov_singletons(&u, &v).unwrap_or(f64::NAN);
    match gromov_numeric(&u, &v, &DEFAULT_GROMOV_EXPONENTS) {
        Ok(r) => vec![closed, r.value, if r.divergent { 1.0 } else { 0.0 }],
        Err(_) => vec![closed, f64::NAN, 0.0],
    }
}

#[wasm_bindgen]
pub fn horofunction_heatmap(angle: f64, size: u32) -> Vec<f64> {
    horofunction_grid(angle, size as usize)
}

#[wasm_bindgen]
pub fn mobius_grid(a_re: f64, a_im: f64, circles: u32, rays: u32, samples: u32) -> Vec<f64> {
    mobius_polylines(a_re, a_im, circles as usize, rays as usize, samples as usize)
}

#[wasm_bindgen]
pub fn gromov_product(theta_u: f64, factor_u: u32, theta_v: f64, factor_v: u32) -> Vec<f64> {
    gromov_bidisc(theta_u, factor_u as usize, theta_v, factor_v as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    #[test]
    fn heatmap_vanishes_at_centre_and_masks_outside() {
        let g = horofunction_grid(0.3, 5);
        assert!(g[0].is_nan());
        assert!(g[12].abs() < 1e-14);
        assert_eq!(g.iter().filter(|v| v.is_finite()).count(), 21);
    }

    #[test]
    fn heatmap_matches_poisson_kernel() {
        // -log((1 - |z|^2) / |e - z|^2) / 2 on the disc
        let size = 7;
        let angle = 1.1;
        let g = horofunction_grid(angle, size);
        let e = C64::from_polar(1.0, angle);
        let step = 2.0 / size as f64;
        for (i, v) in g.iter().enumerate().filter(|(_, v)| v.is_finite()) {
            let z = C64::new(-1.0 + ((i % size) as f64 + 0.5) * step, 1.0 - ((i / size) as f64 + 0.5) * step);
            let expected = -0.5 * ((1.0 - z.norm_sqr()) / (e - z).norm_sqr()).ln();
            assert!((v - expected).abs() < 1e-12, "{v} vs {expected}");
        }
    }

    #[test]
    fn mobius_grid_stays_in_disc() {
        let lines = mobius_polylines(0.4, -0.2, 3, 4, 16);
        assert_eq!(lines.len(), 2 * 7 * 18);
        let points: Vec<_> = lines.chunks(2).filter(|p| p[0].is_finite()).collect();
        assert!(points.iter().all(|p| p[0] * p[0] + p[1] * p[1] < 1.0));
        assert!(mobius_polylines(1.0, 0.0, 1, 1, 4).is_empty());
    }

    #[test]
    fn mobius_sends_origin_to_a() {
        let lines = mobius_polylines(0.4, -0.2, 0, 1, 4);
        assert!((lines[0] - 0.4).abs() < 1e-15 && (lines[1] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn gromov_in_one_factor() {
        let opposite = gromov_bidisc(0.0, 0, PI, 0);
        assert!(opposite[0].abs() < 1e-12 && opposite[1].abs() < 1e-6);
        let quarter = gromov_bidisc(0.0, 0, FRAC_PI_2, 0);
        assert!((quarter[0] - 0.5 * LN_2).abs() < 1e-12);
        assert!((quarter[0] - quarter[1]).abs() < 1e-6);
    }

    #[test]
    fn gromov_across_factors_diverges() {
        let r = gromov_bidisc(0.2, 0, 0.2, 1);
        assert!(r[0].is_infinite() && r[1] > 8.0 && r[2] == 1.0);
        assert!(gromov_bidisc(0.0, 2, 0.0, 0)[0].is_nan());
    }
}

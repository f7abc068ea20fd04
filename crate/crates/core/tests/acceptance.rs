//! Acceptance criteria, one line of output per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the summary lines are always
//! printed; exits non-zero when any criterion fails.

use std::f64::consts::LN_2;
use std::process::{Command, ExitCode};
use std::time::Instant;

use symdom::boundary::{
    detour_cost, detour_cost_numeric, detour_metric, flat_membership_test, gromov_numeric,
    gromov_singletons, hilbert, part_cross_section, peirce_zero_test, singleton_eval,
    translation_action_check, HorofunctionSpec, DEFAULT_DETOUR_SCHEDULE, DEFAULT_GROMOV_EXPONENTS,
    DIVERGENCE_THRESHOLD, INFINITY_THRESHOLD,
};
use symdom::geometry::{
    bergman_distance, bergman_on_flat, caratheodory_distance, flat_compose_mobius, mobius,
};
use symdom::maps::{
    factorwise_conjugation, holomorphy_classifier, is_isometry_sampled, is_triple_homomorphism,
    rank_genus_report, sample_minimal, BallMap, Holomorphy, LinearTripleMap, Metric,
};
use symdom::random::{self, SeededRng};
use symdom::triple::{
    bergman_apply, bergman_apply_expanded, bergman_operator, box_operator, quadratic_op,
    triple_product,
};
use symdom::tripotent::{self, peirce_components, Frame, Tripotent};
use symdom::verify::{self, Fault};
use symdom::space::CVector;
use symdom::{Element, TripleSpace, C64, DEFAULT_TOL};

type Outcome = (bool, String);

/// Spaces up to `M_{3,4}` and products of at most three factors.
fn space(i: usize) -> TripleSpace {
    match i % 5 {
        0 => TripleSpace::matrices(3, 4),
        1 => TripleSpace::matrices(2, 3),
        2 => TripleSpace::new([(2, 2), (1, 1)]).unwrap(),
        3 => TripleSpace::new([(1, 2), (2, 2), (1, 1)]).unwrap(),
        _ => TripleSpace::bidisc(),
    }
}

fn unit(rng: &mut SeededRng, s: &TripleSpace) -> Element {
    let x = random::element(rng, s);
    let n = x.spectral_norm();
    x * (1.0 / n)
}

fn tp(a: &Element, b: &Element, c: &Element) -> Element {
    triple_product(a, b, c).unwrap()
}

struct Max(f64);

impl Max {
    fn new() -> Self {
        Max(0.0)
    }

    fn push(&mut self, r: f64) {
        if r.is_nan() || r > self.0 {
            self.0 = if r.is_nan() { f64::INFINITY } else { r };
        }
    }
}

// 1. algebra

fn criterion_algebra() -> Outcome {
    const N: usize = 500;
    let mut rng = random::rng(1);
    let (mut jordan, mut axiom, mut bergman, mut peirce) = (Max::new(), Max::new(), Max::new(), Max::new());
    for i in 0..N {
        let s = space(i);
        let [a, b, x, y, z] = std::array::from_fn(|_| unit(&mut rng, &s));
        let lhs = tp(&a, &b, &tp(&x, &y, &z));
        let rhs = tp(&tp(&a, &b, &x), &y, &z) - tp(&x, &tp(&b, &a, &y), &z) + tp(&x, &y, &tp(&a, &b, &z));
        jordan.push((lhs - rhs).spectral_norm());

        let g = random::element(&mut rng, &s);
        let n2 = g.spectral_norm().powi(2);
        axiom.push((box_operator(&g, &g).unwrap().op_norm() - n2).abs() / n2.max(1.0));

        let p = random::ball_element(&mut rng, &s, 1.5);
        let q = random::ball_element(&mut rng, &s, 1.5);
        let d = bergman_apply(&p, &q, &x).unwrap() - bergman_apply_expanded(&p, &q, &x).unwrap();
        bergman.push(d.spectral_norm());

        // Peirce calculus: complementary idempotent projections, multiplication
        // rules and P_2 = Q_e^2.
        let e = random::tripotent(&mut rng, &s);
        let parts = |w: &Element| {
            let (p2, p1, p0) = peirce_components(&e, w).unwrap();
            [p0, p1, p2]
        };
        let [px, py, pz] = [parts(&x), parts(&y), parts(&z)];
        let total = &(&px[0] + &px[1]) + &px[2];
        peirce.push((total - x.clone()).spectral_norm());
        for (k, c) in px.iter().enumerate() {
            let again = parts(c);
            for (j, cj) in again.iter().enumerate() {
                let r = if j == k { (cj - c).spectral_norm() } else { cj.spectral_norm() };
                peirce.push(r);
            }
        }
        let q2 = quadratic_op(e.element(), &quadratic_op(e.element(), &x).unwrap()).unwrap();
        peirce.push((q2 - px[2].clone()).spectral_norm());
        for (ia, xa) in px.iter().enumerate() {
            for (ib, yb) in py.iter().enumerate() {
                for (ic, zc) in pz.iter().enumerate() {
                    let t = tp(xa, yb, zc);
                    let m = ia as i32 - ib as i32 + ic as i32;
                    let r = if (0..3).contains(&m) {
                        (&t - &parts(&t)[m as usize]).spectral_norm()
                    } else {
                        t.spectral_norm()
                    };
                    peirce.push(r);
                }
            }
        }
    }
    let pass = jordan.0 <= 1e-10 && axiom.0 <= 1e-10 && bergman.0 <= 1e-12 && peirce.0 <= 1e-10;
    (
        pass,
        format!(
            "{N} cases each: jordan {:.1e} (1e-10), box norm {:.1e} (1e-10), bergman closed form {:.1e} (1e-12), peirce calculus {:.1e} (1e-10)",
            jordan.0, axiom.0, bergman.0, peirce.0
        ),
    )
}

// 2. distances

fn criterion_distances() -> Outcome {
    const N: usize = 500;
    let mut rng = random::rng(2);
    let (mut inv, mut sym, mut flat, mut radial) = (Max::new(), Max::new(), Max::new(), Max::new());
    let mut worst_slack = f64::INFINITY;
    for i in 0..N {
        let s = space(i);
        let [a, x, y, z] = std::array::from_fn(|_| random::ball_element(&mut rng, &s, 0.75));
        for d in [caratheodory_distance, bergman_distance] {
            let dxy = d(&x, &y).unwrap();
            let moved = d(&mobius(&a, &x).unwrap(), &mobius(&a, &y).unwrap()).unwrap();
            inv.push((moved - dxy).abs());
            sym.push((dxy - d(&y, &x).unwrap()).abs());
            worst_slack = worst_slack.min(dxy + d(&y, &z).unwrap() - d(&x, &z).unwrap());
        }

        let f = random::frame(&mut rng, &s);
        let l = random::uniform_vec(&mut rng, f.len(), 0.95);
        let m = random::uniform_vec(&mut rng, f.len(), 0.95);
        let expected = l.iter().zip(&m).map(|(p, q)| (p.atanh() - q.atanh()).abs()).fold(0.0, f64::max);
        let d = caratheodory_distance(&f.combination(&l), &f.combination(&m)).unwrap();
        flat.push((d - expected).abs());

        // midpoint in rapidity coordinates: equality in the triangle inequality
        let mid: Vec<f64> = l.iter().zip(&m).map(|(p, q)| (0.5 * (p.atanh() + q.atanh())).tanh()).collect();
        let (fl, fm, fmid) = (f.combination(&l), f.combination(&m), f.combination(&mid));
        for d in [caratheodory_distance, bergman_distance] {
            worst_slack = worst_slack.min(d(&fl, &fmid).unwrap() + d(&fmid, &fm).unwrap() - d(&fl, &fm).unwrap());
        }

        // radii up to 1 - 1e-6 on tripotents with exactly representable entries,
        // up to 0.999 on random ones
        let zero = Element::zeros(&s);
        let k = i % s.rank();
        let standard = Frame::standard(&s);
        let exact = &standard.members()[k];
        for t in [0.5, 0.9, 0.999, 0.999999, 1.0 - 1e-6] {
            let d = caratheodory_distance(&zero, &(exact.element() * t)).unwrap();
            radial.push((d - t.atanh()).abs());
        }
        let u = random::tripotent(&mut rng, &s);
        let t = 0.999 * random::uniform_vec(&mut rng, 1, 1.0)[0].abs();
        let d = caratheodory_distance(&zero, &(u.element() * t)).unwrap();
        radial.push((d - t.atanh()).abs());
    }
    let pass = inv.0 <= 1e-9 && sym.0 <= 1e-12 && worst_slack >= -1e-9 && flat.0 <= 1e-10 && radial.0 <= 1e-12;
    (
        pass,
        format!(
            "{N} cases: moebius invariance {:.1e} (1e-9), symmetry {:.1e}, min triangle slack {:.1e} (>= -1e-9), flat l-inf {:.1e} (1e-10), d(0,tu) {:.1e} (1e-12)",
            inv.0, sym.0, worst_slack, flat.0, radial.0
        ),
    )
}

// 3. flat lemmas

fn criterion_flats() -> Outcome {
    const N: usize = 200;
    let mut rng = random::rng(3);
    let (mut bo, mut comp, mut xi, mut tr) = (Max::new(), Max::new(), Max::new(), Max::new());
    for i in 0..N {
        let s = space(i);
        let f = random::frame(&mut rng, &s);
        let a = random::uniform_vec(&mut rng, f.len(), 0.9);
        let b = random::uniform_vec(&mut rng, f.len(), 0.9);
        let on = bergman_on_flat(&f, &a, &b).unwrap();
        let direct = bergman_operator(&f.combination(&a), &f.combination(&b)).unwrap();
        bo.push(on.distance(&direct));

        let alpha = random::uniform_vec(&mut rng, f.len(), 1.5);
        let beta = random::uniform_vec(&mut rng, f.len(), 1.5);
        let samples: Vec<Element> = (0..2).map(|_| random::ball_element(&mut rng, &s, 0.7)).collect();
        comp.push(flat_compose_mobius(&f, &alpha, &beta, &samples).unwrap());

        let x = f.combination(&a);
        for (e, ai) in f.members().iter().zip(&a) {
            xi.push((singleton_eval(e, &x).unwrap() + ai.atanh()).abs());
        }

        let y = random::ball_element(&mut rng, &s, 0.7);
        tr.push(translation_action_check(&f, &b, &y).unwrap());
    }
    let pass = bo.0 <= 1e-12 && comp.0 <= 1e-9 && xi.0 <= 1e-10 && tr.0 <= 1e-8;
    (
        pass,
        format!(
            "{N} cases each: bergman on flat {:.1e} (1e-12), moebius composition {:.1e} (1e-9), singleton on flat {:.1e} (1e-10), translation {:.1e} (1e-8)",
            bo.0, comp.0, xi.0, tr.0
        ),
    )
}

// 4. Gromov products

fn bergman_image_norm(u: &Tripotent, v: &Tripotent) -> f64 {
    let bv = bergman_apply(u.element(), v.element(), v.element()).unwrap();
    quadratic_op(u.element(), &quadratic_op(u.element(), &bv).unwrap()).unwrap().spectral_norm()
}

fn criterion_gromov() -> Outcome {
    let mut rng = random::rng(4);
    let mut finite = Max::new();
    let mut n_finite = 0;
    let mut attempts = 0;
    while n_finite < 100 {
        attempts += 1;
        let s = space(attempts);
        let u = random::minimal_tripotent(&mut rng, &s);
        let v = random::minimal_tripotent(&mut rng, &s);
        let closed = gromov_singletons(&u, &v).unwrap();
        if closed.is_finite() {
            let numeric = gromov_numeric(&u, &v, &DEFAULT_GROMOV_EXPONENTS).unwrap();
            finite.push((numeric.value - closed).abs());
            n_finite += 1;
        }
    }

    // vanishing Bergman image: orthogonal pairs, equal pairs, pairs in different factors
    let mut missed_divergence = 0;
    let mut n_infinite = 0;
    for i in 0..60 {
        let s = space(i);
        let u = random::minimal_tripotent(&mut rng, &s);
        let v = match i % 3 {
            0 => u.clone(),
            1 if s.rank() > 1 => tripotent::frame_completion(&s, std::slice::from_ref(&u), DEFAULT_TOL)
                .unwrap()
                .members()[1]
                .clone(),
            _ => u.rotate(C64::from_polar(1.0, 0.3)),
        };
        if bergman_image_norm(&u, &v) < INFINITY_THRESHOLD {
            n_infinite += 1;
            let numeric = gromov_numeric(&u, &v, &DEFAULT_GROMOV_EXPONENTS).unwrap();
            if !(numeric.value > DIVERGENCE_THRESHOLD && gromov_singletons(&u, &v).unwrap().is_infinite()) {
                missed_divergence += 1;
            }
        }
    }

    let (mut opposite, mut rotated) = (Max::new(), Max::new());
    let mut orthogonal_failures = 0;
    const FAMILY: usize = 50;
    for i in 0..FAMILY {
        let s = if i % 2 == 0 { TripleSpace::matrices(3, 4) } else { TripleSpace::new([(2, 3), (1, 1)]).unwrap() };
        let u = random::minimal_in_factor(&mut rng, &s, 0);
        opposite.push(gromov_singletons(&u, &u.neg()).unwrap().abs());
        let w = tripotent::frame_completion(&s, std::slice::from_ref(&u), DEFAULT_TOL).unwrap().members()[1].clone();
        if gromov_singletons(&u, &w).unwrap().is_finite() || gromov_singletons(&u, &w.neg()).unwrap().is_finite() {
            orthogonal_failures += 1;
        }
        for c in [C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
            let v = u.rotate(c);
            let sum = gromov_singletons(&u, &v).unwrap() + gromov_singletons(&u, &v.neg()).unwrap();
            rotated.push((sum - LN_2).abs());
        }
    }
    let pass = finite.0 <= 1e-3
        && missed_divergence == 0
        && n_infinite >= 20
        && opposite.0 <= 1e-8
        && orthogonal_failures == 0
        && rotated.0 <= 1e-8;
    (
        pass,
        format!(
            "closed vs numeric {:.1e} on {n_finite} finite pairs (1e-3); divergence missed {missed_divergence}/{n_infinite}; families of {FAMILY}: opposite {:.1e}, orthogonal failures {orthogonal_failures}, +-i sum {:.1e} (1e-8)",
            finite.0, opposite.0, rotated.0
        ),
    )
}

// 5. detour cost

fn reframe(rng: &mut SeededRng, members: &[Tripotent]) -> Vec<Tripotent> {
    let parts: Vec<_> = members.iter().map(|m| m.rank_one_parts().unwrap()).collect();
    let k = parts[0].0;
    let w = random::unitary(rng, parts.len());
    (0..parts.len())
        .map(|c| {
            let mut u = CVector::zeros(parts[0].1.len());
            let mut v = CVector::zeros(parts[0].2.len());
            for (i, p) in parts.iter().enumerate() {
                u += &p.1 * w[(i, c)];
                v += &p.2 * w[(i, c)];
            }
            Tripotent::rank_one(members[0].space(), k, &u, &v).unwrap()
        })
        .collect()
}

fn weights(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    let mut l: Vec<f64> = random::uniform_vec(rng, n, 1.0).iter().map(|x| 0.2 + 0.8 * x.abs()).collect();
    l[0] = 1.0;
    l
}

fn same_part(rng: &mut SeededRng, i: usize) -> (HorofunctionSpec, HorofunctionSpec) {
    let s = if i.is_multiple_of(2) { TripleSpace::matrices(3, 4) } else { TripleSpace::matrices(2, 3) };
    let n = 1 + i % s.rank();
    let members = random::frame(rng, &s).members()[..n].to_vec();
    let other = if i.is_multiple_of(3) { members.clone() } else { reframe(rng, &members) };
    let xi = HorofunctionSpec::new(members, weights(rng, n), DEFAULT_TOL).unwrap();
    let eta = HorofunctionSpec::new(other, weights(rng, n), DEFAULT_TOL).unwrap();
    (xi, eta)
}

fn criterion_detour() -> Outcome {
    let mut rng = random::rng(5);
    let (mut numeric, mut self_cost, mut hilb) = (Max::new(), Max::new(), Max::new());
    for i in 0..50 {
        let (xi, eta) = same_part(&mut rng, i);
        let closed = detour_cost(&xi, &eta, DEFAULT_TOL).unwrap();
        let n = detour_cost_numeric(&xi, &eta, &DEFAULT_DETOUR_SCHEDULE).unwrap();
        numeric.push((closed - n.value).abs());
        self_cost.push(detour_cost(&xi, &xi, DEFAULT_TOL).unwrap().abs());
        self_cost.push(detour_cost_numeric(&xi, &xi, &DEFAULT_DETOUR_SCHEDULE).unwrap().value.abs());
    }
    for i in 0..100 {
        let (xi, eta) = same_part(&mut rng, i);
        let delta = detour_metric(&xi, &eta, DEFAULT_TOL).unwrap();
        hilb.push((delta - hilbert(&part_cross_section(&xi), &part_cross_section(&eta)).unwrap()).abs());
    }

    let s = TripleSpace::new([(3, 3), (1, 1)]).unwrap();
    let mut mismatches = 0;
    let mut n_finite = 0;
    for _ in 0..100 {
        let f = random::frame(&mut rng, &s);
        let mut mask = || loop {
            let m: Vec<bool> = random::uniform_vec(&mut rng, f.len(), 1.0).iter().map(|x| *x > 0.0).collect();
            if m.iter().any(|&b| b) {
                return m;
            }
        };
        let (ms, mt) = (mask(), mask());
        let pick = |m: &[bool]| -> Vec<Tripotent> {
            f.members().iter().zip(m).filter(|(_, b)| **b).map(|(e, _)| e.clone()).collect()
        };
        let (se, sc) = (pick(&ms), pick(&mt));
        let (ne, nc) = (se.len(), sc.len());
        let xi = HorofunctionSpec::new(se, weights(&mut rng, ne), DEFAULT_TOL).unwrap();
        let eta = HorofunctionSpec::new(sc, weights(&mut rng, nc), DEFAULT_TOL).unwrap();
        let finite = detour_cost(&xi, &eta, DEFAULT_TOL).unwrap().is_finite();
        let leq = tripotent::order_leq(&eta.tripotent(), &xi.tripotent(), DEFAULT_TOL).unwrap();
        n_finite += usize::from(finite);
        if finite != leq {
            mismatches += 1;
        }
    }
    let pass = numeric.0 <= 1e-4 && self_cost.0 <= 1e-6 && mismatches == 0 && hilb.0 <= 1e-10;
    (
        pass,
        format!(
            "closed vs numeric {:.1e} on 50 same-part pairs (1e-4); H(xi,xi) {:.1e} (1e-6); finiteness vs order mismatches {mismatches}/100 ({n_finite} finite); delta vs d_H {:.1e} on 100 pairs (1e-10)",
            numeric.0, self_cost.0, hilb.0
        ),
    )
}

// 6. boundary characterisation

fn criterion_characterisation() -> Outcome {
    const N: usize = 200;
    let mut rng = random::rng(6);
    let (mut flat_wrong, mut v0_wrong) = (0, 0);
    for i in 0..N {
        let s = space(i);
        let f = random::frame(&mut rng, &s);
        let on = f.combination(&random::uniform_vec(&mut rng, f.len(), 0.9));
        let truth = i % 2 == 0;
        let x = if truth { on } else { &on + &(unit(&mut rng, &s) * 0.02) };
        if flat_membership_test(&f, &x, DEFAULT_TOL).unwrap().in_flat != truth {
            flat_wrong += 1;
        }

        let e = random::minimal_tripotent(&mut rng, &s);
        let (_, _, p0) = peirce_components(&e, &unit(&mut rng, &s)).unwrap();
        let inside = if p0.spectral_norm() > 1e-12 { &p0 * (0.9 / p0.spectral_norm()) } else { p0 };
        let x = if truth { inside } else { &inside + &(unit(&mut rng, &s) * 0.02) };
        if peirce_zero_test(&e, &x, DEFAULT_TOL).unwrap().in_v0 != truth {
            v0_wrong += 1;
        }
    }
    (
        flat_wrong == 0 && v0_wrong == 0,
        format!("{N} cases each at 1e-8: flat membership misclassified {flat_wrong}, V_0 test misclassified {v0_wrong}"),
    )
}

// 7. maps

fn criterion_maps() -> Outcome {
    let m22 = TripleSpace::matrices(2, 2);
    let m23 = TripleSpace::matrices(2, 3);
    let emb = LinearTripleMap::block_embedding(&m22, &m23).unwrap();
    let hom = is_triple_homomorphism(&emb, 100, 7).unwrap();
    let basis = hom.checks.iter().find(|c| c.name == "basis triples").unwrap().max_residual;
    let car = is_isometry_sampled(&emb, Metric::Caratheodory, 200, 7).unwrap();
    let berg = is_isometry_sampled(&emb, Metric::Bergman, 200, 7).unwrap();
    let iso = car.checks[0].max_residual.max(berg.checks[0].max_residual);

    let mut rng = random::rng(7);
    let classify = |phi: &dyn BallMap, rng: &mut SeededRng| {
        let samples = sample_minimal(phi.domain(), 12, rng);
        holomorphy_classifier(phi, &samples, DEFAULT_TOL).unwrap().0
    };
    let h_emb = classify(&emb, &mut rng);
    let h_conj = classify(&LinearTripleMap::conjugation(&m22), &mut rng);
    let product = TripleSpace::new([(2, 2), (1, 1)]).unwrap();
    let h_mixed = classify(&factorwise_conjugation(&product, vec![false, true]), &mut rng);

    let excluded = rank_genus_report(&m22, &TripleSpace::matrices(1, 5));
    let admitted = rank_genus_report(&m22, &m23);
    let value = |r: &symdom::maps::MapReport, k: &str| r.values.iter().find(|(n, _)| n == k).unwrap().1;

    let pass = basis <= 1e-12
        && hom.passed()
        && iso <= 1e-9
        && h_emb == Holomorphy::Holomorphic
        && h_conj == Holomorphy::Antiholomorphic
        && h_mixed == Holomorphy::MixedUnknown
        && excluded.verdict == "excluded"
        && admitted.verdict == "not excluded"
        && value(&admitted, "r") == 2.0
        && value(&admitted, "rp_minus_dim") == 4.0
        && value(&admitted, "rp_minus_dim_prime") == 4.0;
    (
        pass,
        format!(
            "block embedding: basis {basis:.1e} (1e-12), isometry {iso:.1e} on 200 pairs (1e-9), {h_emb}; conjugation {h_conj}; (id, conj) {h_mixed}; M22->M15 {} (r' = {}), M22->M23 {} (r = {}, rp-dim {} vs {})",
            excluded.verdict,
            value(&excluded, "r_prime"),
            admitted.verdict,
            value(&admitted, "r"),
            value(&admitted, "rp_minus_dim"),
            value(&admitted, "rp_minus_dim_prime"),
        ),
    )
}

// 8. harness integrity

fn verify_cli(args: &[&str], out: &std::path::Path) -> (Option<i32>, String) {
    let status = Command::new(env!("CARGO_BIN_EXE_symdom"))
        .arg("verify")
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SYMDOM_TOL")
        .stderr(std::process::Stdio::null())
        .status()
        .expect("symdom binary runs");
    (status.code(), std::fs::read_to_string(out).unwrap_or_default())
}

fn criterion_harness() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (clean_code, first) = verify_cli(&["--seed", "42"], &dir.path().join("a.json"));
    let (_, second) = verify_cli(&["--seed", "42"], &dir.path().join("b.json"));
    let (fault_code, faulty) = verify_cli(&["--seed", "42", "--inject-fault", "bergman-flat"], &dir.path().join("c.json"));
    let failing: Vec<String> = serde_json::from_str::<serde_json::Value>(&faulty)
        .ok()
        .and_then(|v| v["entries"].as_array().cloned())
        .unwrap_or_default()
        .iter()
        .filter(|e| e["verdict"] == "fail")
        .map(|e| e["lemma_id"].as_str().unwrap_or("").to_string())
        .collect();
    let lib = verify::run(42, None, Some(Fault::GromovClosedForm));
    let lib_failing: Vec<&str> = lib.failures().iter().map(|e| e.lemma_id.as_str()).collect();
    let n_entries = serde_json::from_str::<serde_json::Value>(&first)
        .map(|v| v["entries"].as_array().map_or(0, Vec::len))
        .unwrap_or(0);
    let pass = clean_code == Some(0)
        && first == second
        && !first.is_empty()
        && n_entries >= 20
        && fault_code == Some(1)
        && failing == ["boundary.flat_bergman"]
        && lib_failing == ["boundary.gromov_decomposition"];
    (
        pass,
        format!(
            "clean run exit {clean_code:?} with {n_entries} entries; byte-identical rerun {}; bergman fault exit {fault_code:?} failing {failing:?}; gromov fault failing {lib_failing:?}",
            first == second
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("algebra", criterion_algebra),
        ("distances", criterion_distances),
        ("flat lemmas", criterion_flats),
        ("gromov products", criterion_gromov),
        ("detour cost", criterion_detour),
        ("boundary characterisation", criterion_characterisation),
        ("maps", criterion_maps),
        ("harness integrity", criterion_harness),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match std::panic::catch_unwind(run) {
            Ok(o) => o,
            Err(_) => (false, "panicked".to_string()),
        };
        all &= pass;
        println!(
            "acceptance {} {:<26} {} [{:.1}s] {detail}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

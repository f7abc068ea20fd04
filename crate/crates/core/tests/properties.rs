use proptest::prelude::*;

use symdom::boundary::{
    detour_metric, gromov_decomposition, gromov_singletons, hilbert, horofunction_eval,
    part_cross_section, singleton_eval, HorofunctionSpec, DEFAULT_HORO_SCHEDULE,
};
use symdom::geometry::{bergman_distance, caratheodory_distance, mobius, FlatChart};
use symdom::json;
use symdom::random;
use symdom::triple::{bergman_apply, bergman_apply_expanded, box_operator, triple_product};
use symdom::tripotent::{self, Frame};
use symdom::{Element, TripleSpace, C64, DEFAULT_TOL};

fn space_strategy() -> impl Strategy<Value = TripleSpace> {
    prop_oneof![
        Just(TripleSpace::disc()),
        Just(TripleSpace::bidisc()),
        Just(TripleSpace::matrices(2, 2)),
        Just(TripleSpace::matrices(2, 3)),
        Just(TripleSpace::new([(2, 2), (1, 1)]).unwrap()),
        Just(TripleSpace::new([(1, 2), (2, 1), (1, 1)]).unwrap()),
    ]
}

fn unit(x: Element) -> Element {
    let n = x.spectral_norm();
    x * (1.0 / n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jordan_identity(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let [a, b, x, y, z] = std::array::from_fn(|_| unit(random::element(&mut rng, &space)));
        let t = |p: &Element, q: &Element, r: &Element| triple_product(p, q, r).unwrap();
        let lhs = t(&a, &b, &t(&x, &y, &z));
        let rhs = t(&t(&a, &b, &x), &y, &z) - t(&x, &t(&b, &a, &y), &z) + t(&x, &y, &t(&a, &b, &z));
        prop_assert!((lhs - rhs).spectral_norm() <= 1e-10);
    }

    #[test]
    fn box_norm_is_squared_norm(space in space_strategy(), seed: u64) {
        let a = random::element(&mut random::rng(seed), &space);
        let n2 = a.spectral_norm().powi(2);
        let op = box_operator(&a, &a).unwrap().op_norm();
        prop_assert!((op - n2).abs() <= 1e-10 * n2.max(1.0));
    }

    #[test]
    fn bergman_closed_form_matches_expansion(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let a = random::ball_element(&mut rng, &space, 1.5);
        let b = random::ball_element(&mut rng, &space, 1.5);
        let x = unit(random::element(&mut rng, &space));
        let d = bergman_apply(&a, &b, &x).unwrap() - bergman_apply_expanded(&a, &b, &x).unwrap();
        prop_assert!(d.spectral_norm() <= 1e-12);
    }

    #[test]
    fn orthogonality_criteria_agree(space in space_strategy(), seed: u64, split in 1usize..3) {
        let mut rng = random::rng(seed);
        let f = random::frame(&mut rng, &space);
        let k = split.min(f.len());
        let x = f.combination(&(0..f.len()).map(|i| if i < k { 0.7 } else { 0.0 }).collect::<Vec<_>>());
        let y = f.combination(&(0..f.len()).map(|i| if i < k { 0.0 } else { -0.4 }).collect::<Vec<_>>());
        let xy = box_operator(&x, &y).unwrap().op_norm();
        let yx = box_operator(&y, &x).unwrap().op_norm();
        let xxy = triple_product(&x, &x, &y).unwrap().spectral_norm();
        prop_assert!(xy < 1e-14 && yx < 1e-14 && xxy < 1e-14);
        let sum = (&x + &y).spectral_norm();
        prop_assert!((sum - x.spectral_norm().max(y.spectral_norm())).abs() <= 1e-14);
        let z = random::element(&mut rng, &space);
        let a = box_operator(&x, &z).unwrap().op_norm() < 1e-12;
        let b = box_operator(&z, &x).unwrap().op_norm() < 1e-12;
        let c = triple_product(&x, &x, &z).unwrap().spectral_norm() < 1e-12;
        prop_assert!(a == b && b == c);
    }

    #[test]
    fn distances_are_symmetric_and_mobius_invariant(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let [a, x, y] = std::array::from_fn(|_| random::ball_element(&mut rng, &space, 0.7));
        for d in [caratheodory_distance, bergman_distance] {
            let dxy = d(&x, &y).unwrap();
            prop_assert!((dxy - d(&y, &x).unwrap()).abs() <= 1e-10);
            let moved = d(&mobius(&a, &x).unwrap(), &mobius(&a, &y).unwrap()).unwrap();
            prop_assert!((moved - dxy).abs() <= 1e-9);
            prop_assert_eq!(d(&x, &x).unwrap(), 0.0);
        }
    }

    #[test]
    fn triangle_inequality(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let [x, y, z] = std::array::from_fn(|_| random::ball_element(&mut rng, &space, 0.97));
        for d in [caratheodory_distance, bergman_distance] {
            let slack = d(&x, &y).unwrap() + d(&y, &z).unwrap() - d(&x, &z).unwrap();
            prop_assert!(slack >= -1e-9);
        }
    }

    #[test]
    fn bergman_dominates_caratheodory(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let [x, y] = std::array::from_fn(|_| random::ball_element(&mut rng, &space, 0.9));
        let c = caratheodory_distance(&x, &y).unwrap();
        let b = bergman_distance(&x, &y).unwrap();
        let r = space.rank() as f64;
        prop_assert!(c <= b + 1e-12 && b <= r.sqrt() * c + 1e-12);
    }

    #[test]
    fn horofunctions_vanish_at_origin(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let f = random::frame(&mut rng, &space);
        let spec = HorofunctionSpec::new(f.members().to_vec(), vec![1.0; f.len()], DEFAULT_TOL).unwrap();
        let zero = Element::zeros(&space);
        let r = horofunction_eval(&spec, &zero, &DEFAULT_HORO_SCHEDULE).unwrap();
        prop_assert!(r.value.abs() <= 1e-9);
        prop_assert!(singleton_eval(&f.members()[0], &zero).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn singleton_horofunction_on_flats(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let f = random::frame(&mut rng, &space);
        let p = random::uniform_vec(&mut rng, f.len(), 3.0);
        let z = FlatChart::new(f.clone()).exp0(&p).unwrap();
        for (e, pi) in f.members().iter().zip(&p) {
            prop_assert!((singleton_eval(e, &z).unwrap() + pi).abs() <= 1e-10);
        }
    }

    #[test]
    fn gromov_closed_forms(seed: u64, square in any::<bool>()) {
        let space = if square { TripleSpace::matrices(3, 3) } else { TripleSpace::matrices(2, 4) };
        let mut rng = random::rng(seed);
        let u = random::minimal_tripotent(&mut rng, &space);
        let v = random::minimal_tripotent(&mut rng, &space);
        let uv = gromov_singletons(&u, &v).unwrap();
        let vu = gromov_singletons(&v, &u).unwrap();
        let dec = gromov_decomposition(&u, &v).unwrap();
        prop_assert!((uv - vu).abs() <= 1e-10);
        prop_assert!((uv - dec).abs() <= 1e-10);
        prop_assert!(uv >= -1e-12);
    }

    #[test]
    fn detour_metric_is_hilbert(seed: u64, l1 in 0.1f64..1.0, l2 in 0.1f64..1.0) {
        let space = TripleSpace::matrices(2, 3);
        let f: Frame = random::frame(&mut random::rng(seed), &space);
        let xi = HorofunctionSpec::new(f.members().to_vec(), vec![1.0, l1], DEFAULT_TOL).unwrap();
        let eta = HorofunctionSpec::new(f.members().to_vec(), vec![l2, 1.0], DEFAULT_TOL).unwrap();
        let delta = detour_metric(&xi, &eta, DEFAULT_TOL).unwrap();
        let dh = hilbert(&part_cross_section(&xi), &part_cross_section(&eta)).unwrap();
        prop_assert!((delta - dh).abs() <= 1e-10);
        let expected = 0.5 * (1.0 / (l1 * l1 * l2 * l2)).ln();
        prop_assert!((delta - expected).abs() <= 1e-10);
    }

    #[test]
    fn order_is_reflexive_and_respects_frames(space in space_strategy(), seed: u64) {
        let mut rng = random::rng(seed);
        let f = random::frame(&mut rng, &space);
        let e = f.members().iter().skip(1).fold(f.members()[0].element().clone(), |acc, m| &acc + m.element());
        let e = symdom::Tripotent::new(e, DEFAULT_TOL).unwrap();
        for m in f.members() {
            prop_assert!(tripotent::order_leq(m, &e, DEFAULT_TOL).unwrap());
            prop_assert!(tripotent::order_leq(m, m, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn element_json_round_trip(space in space_strategy(), seed: u64) {
        let x = random::element(&mut random::rng(seed), &space) * C64::new(0.3, -1.7);
        let back = json::parse_element(&json::element_to_string(&x)).unwrap();
        prop_assert_eq!(back, x);
    }
}

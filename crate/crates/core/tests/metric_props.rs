mod common;

use common::*;
use num_rational::Rational64;
use proptest::prelude::*;

use schottky::proj::{delta, FixedPoint, FixedPoints};
use schottky::{ElementClass, ExtExp, Homography, ProjPoint};

fn pts(n: usize) -> impl Strategy<Value = (u64, Vec<ProjPoint>)> {
    prime().prop_flat_map(move |p| (Just(p), prop::collection::vec(point(p), n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn delta_is_an_ultrametric((p, xs) in pts(3)) {
        let c = ctx(p);
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(delta(x, y, &c), delta(y, x, &c));
        prop_assert_eq!(delta(x, x, &c), ExtExp::NegInf);
        prop_assert!(delta(x, y, &c) <= ExtExp::ZERO);
        prop_assert_eq!(delta(x, y, &c) == ExtExp::NegInf, x == y);
        prop_assert!(delta(x, z, &c) <= delta(x, y, &c).max(delta(y, z, &c)));
    }

    #[test]
    fn integral_unit_matrices_are_isometries((p, g, xs) in prime().prop_flat_map(|p| (Just(p), integral_unit(p), prop::collection::vec(point(p), 2)))) {
        let c = ctx(p);
        prop_assert_eq!(g.lipschitz_exponent(&c), 0);
        prop_assert_eq!(delta(&g.apply(&xs[0]), &g.apply(&xs[1]), &c), delta(&xs[0], &xs[1], &c));
    }

    #[test]
    fn homographies_are_lipschitz((p, xs) in pts(2), g in homography()) {
        let c = ctx(p);
        let k = ExtExp::from_int(g.lipschitz_exponent(&c));
        let before = delta(&xs[0], &xs[1], &c);
        let after = delta(&g.apply(&xs[0]), &g.apply(&xs[1]), &c);
        if before != ExtExp::NegInf {
            prop_assert!(after <= before + k, "{} > {} + {}", after, before, k);
        } else {
            prop_assert_eq!(after, ExtExp::NegInf);
        }
    }

    #[test]
    fn action_is_a_group_action((_, xs) in pts(1), g in homography(), h in homography()) {
        let x = &xs[0];
        prop_assert_eq!(g.compose(&h).apply(x), g.apply(&h.apply(x)));
        prop_assert_eq!(g.inverse().apply(&g.apply(x)), x.clone());
        prop_assert!(g.compose(&g.inverse()).is_identity());
    }

    #[test]
    fn scaling_does_not_change_the_class(g in homography(), k in 1i64..30) {
        let [a, b, c, d] = g.entries().clone();
        let scaled = Homography::new(a * k, b * k, c * k, d * k).unwrap();
        prop_assert_eq!(&scaled, &g);
        let negated = Homography::new(-g.entries()[0].clone(), -g.entries()[1].clone(), -g.entries()[2].clone(), -g.entries()[3].clone()).unwrap();
        prop_assert_eq!(negated, g);
    }

    #[test]
    fn fixed_points_are_fixed(p in prime(), g in homography()) {
        let c = ctx(p);
        if g.is_identity() {
            return Ok(());
        }
        if let Ok(fps) = g.fixed_points(&c) {
            for fp in fps.points() {
                if let FixedPoint::Exact(x) = fp {
                    prop_assert_eq!(&g.apply(x), x);
                }
            }
            if let FixedPoints::Hyperbolic { attracting: FixedPoint::Exact(a), repelling: FixedPoint::Exact(r) } = &fps {
                prop_assert_eq!(g.classify(&c), ElementClass::Hyperbolic);
                // points away from the repelling one move towards the attracting one
                let y = if r != &ProjPoint::integer(0) && a != &ProjPoint::integer(0) { ProjPoint::integer(0) } else { ProjPoint::ratio(1, 7) };
                if &y != r && &y != a {
                    let far = g.pow(40).apply(&y);
                    prop_assert!(delta(&far, a, &c) < delta(&y, a, &c) || delta(&y, a, &c) == ExtExp::NegInf);
                }
            }
        }
    }
}

#[test]
fn documented_distances() {
    let c = ctx(5);
    assert_eq!(delta(&ProjPoint::integer(0), &ProjPoint::integer(5), &c), ExtExp::from_int(-1));
    assert_eq!(delta(&ProjPoint::integer(0), &ProjPoint::Infinity, &c), ExtExp::ZERO);
    assert_eq!(delta(&ProjPoint::ratio(1, 5), &ProjPoint::Infinity, &c), ExtExp::from_int(-1));
    assert_eq!(
        delta(&ProjPoint::integer(1), &ProjPoint::integer(26), &c),
        ExtExp::Finite(Rational64::from_integer(-2))
    );
}

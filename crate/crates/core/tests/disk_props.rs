mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use proptest::prelude::*;

use schottky::disks::{poly_distance_exponent, poly_eval};
use schottky::padic::valuation;
use schottky::proj::delta;
use schottky::{Disk, DiskKind, Error, ExtExp, Homography, ProjPoint};

/// Membership straight from the definition, without the disk code.
fn contains_by_definition(d: &Disk, x: &ProjPoint, p: u64) -> bool {
    let inside_bounded = match x {
        ProjPoint::Infinity => false,
        ProjPoint::Finite(z) => {
            let e = match valuation(&(z - d.center()), p) {
                None => return d.kind() == DiskKind::Bounded,
                Some(v) => Rational64::from_integer(-v),
            };
            let bounded_open = (d.kind() == DiskKind::Bounded) == d.is_open();
            if bounded_open {
                e < d.radius_exponent()
            } else {
                e <= d.radius_exponent()
            }
        }
    };
    match d.kind() {
        DiskKind::Bounded => inside_bounded,
        DiskKind::Unbounded => !inside_bounded,
    }
}

fn disk_and_point() -> impl Strategy<Value = (u64, Disk, ProjPoint)> {
    prime().prop_flat_map(|p| {
        disk(p).prop_flat_map(move |d| {
            let c = d.center().clone();
            (Just(p), Just(d), point_near(p, c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn membership_matches_definition((p, d, x) in disk_and_point()) {
        prop_assert_eq!(d.contains(&x, &ctx(p)), contains_by_definition(&d, &x, p));
    }

    #[test]
    fn image_sampling_oracle((p, d, x) in disk_and_point(), g in homography()) {
        let c = ctx(p);
        let image = d.image(&g, &c);
        prop_assert_eq!(d.contains(&x, &c), image.contains(&g.apply(&x), &c));
    }

    #[test]
    fn image_round_trip((p, d) in prime().prop_flat_map(|p| (Just(p), disk(p))), g in homography()) {
        let c = ctx(p);
        prop_assert_eq!(d.image(&g.inverse(), &c).image(&g, &c), d.clone());
        prop_assert_eq!(d.image(&g, &c).image(&g.inverse(), &c), d);
    }

    #[test]
    fn image_preserves_openness_and_strict_inclusion((p, d) in prime().prop_flat_map(|p| (Just(p), disk(p))), g in homography()) {
        let c = ctx(p);
        let image = d.image(&g, &c);
        prop_assert_eq!(image.is_open(), d.is_open());
        let closure = d.closure(&c);
        if closure != d {
            let ic = closure.image(&g, &c);
            prop_assert!(ic.contains_disk(&image, &c));
            prop_assert!(!image.contains_disk(&ic, &c));
            if d.is_bounded() && ic.is_bounded() {
                prop_assert_eq!(ic, image.closure(&c));
            }
        }
    }

    #[test]
    fn complement_partitions((p, d, x) in disk_and_point()) {
        let c = ctx(p);
        prop_assert_ne!(d.contains(&x, &c), d.complement().contains(&x, &c));
        prop_assert_eq!(d.complement().complement(), d);
    }

    #[test]
    fn point_delta_brackets_samples((p, d, x) in disk_and_point(), k in -6i32..8, n in -500i64..500) {
        // inf and sup of δ(x, ·) over the disk, checked against one of its points
        let c = ctx(p);
        if d.kind() != DiskKind::Bounded {
            return Ok(());
        }
        let (lo, hi) = match (d.point_delta(&x, &c), d.point_delta_sup(&x, &c)) {
            (Ok(lo), Ok(hi)) => (lo, hi),
            (Err(Error::PointInsideDisk), _) | (_, Err(Error::PointInsideDisk)) => {
                prop_assert!(d.contains(&x, &c) || d.closure(&c).contains(&x, &c));
                return Ok(());
            }
            (a, b) => return Err(TestCaseError::fail(format!("{a:?} {b:?}"))),
        };
        let step = BigRational::from_integer(BigInt::from(p)).pow(k) * q(n, 1);
        let y = ProjPoint::Finite(d.center() + step);
        if d.contains(&y, &c) {
            let dist = delta(&x, &y, &c);
            prop_assert!(lo <= dist && dist <= hi, "{} <= {} <= {}", lo, dist, hi);
        }
    }

    #[test]
    fn polynomial_distance_inequality(
        p in prime(),
        coeffs in prop::collection::vec((-30i64..30, 1i64..20), 2..6),
        samples in prop::collection::vec((0u32..6, 1i64..1_000, 1i64..100), 1..10),
    ) {
        // f(0) = 0 and |coefficients| ≤ 1; 0 is a root so δ(x; f⁻¹(0)) ≤ |x|,
        // which makes the asserted bound at least as strong as the lemma's
        let c = ctx(p);
        let mut f = vec![q(0, 1)];
        for (n, d) in coeffs {
            let d = if d % p as i64 == 0 { d + 1 } else { d };
            f.push(q(n, d));
        }
        let pd = match poly_distance_exponent(&f, &c) {
            Ok(pd) => pd,
            Err(Error::ConstantPolynomial) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let cm = &f[pd.order];
        let vcm = valuation(cm, p).unwrap();
        let pr = BigRational::from_integer(BigInt::from(p));
        for (extra, n, d) in samples {
            // near 0 means |x| < |c_m|
            let n = if n % p as i64 == 0 { n + 1 } else { n };
            let d = if d % p as i64 == 0 { d + 1 } else { d };
            let x = pr.pow((vcm + 1) as i32 + extra as i32) * q(n, d);
            let fx = poly_eval(&f, &x);
            prop_assert!(!fx.is_zero());
            let lhs = delta(&ProjPoint::Finite(fx), &ProjPoint::integer(0), &c);
            let dx = delta(&ProjPoint::Finite(x), &ProjPoint::integer(0), &c);
            let rhs = pd.c_exponent + scale(dx, pd.order);
            prop_assert!(lhs >= rhs, "{} < {}", lhs, rhs);
        }
    }
}

fn scale(e: ExtExp, m: usize) -> ExtExp {
    match e {
        ExtExp::Finite(r) => ExtExp::Finite(r * Rational64::from_integer(m as i64)),
        other => other,
    }
}

#[test]
fn documented_images_and_distances() {
    let c = ctx(5);
    let g1 = Homography::from_i64(1, 0, -24, 25).unwrap();
    // g1 maps the complement of B(0, 1/5) onto E(1, 1/25)
    let b1 = Disk::open_int(&c, 0, -1);
    assert_eq!(b1.complement().image(&g1, &c), Disk::closed_int(&c, 1, -1));
    assert_eq!(
        Disk::closed_int(&c, 0, -1).point_delta(&ProjPoint::integer(1), &c),
        Ok(ExtExp::ZERO)
    );
    assert_eq!(
        Disk::closed_int(&c, 0, -1).point_delta(&ProjPoint::integer(25), &c),
        Err(Error::PointInsideDisk)
    );
}

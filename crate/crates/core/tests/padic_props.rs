mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use schottky::padic::{hensel_sqrt, valuation};
use schottky::{Error, ExtExp, PadicApprox, PadicScalar, PrimeContext};

/// `u · p^v` as an exact rational.
fn value(x: &PadicApprox) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(x.context().p()));
    BigRational::from_integer(x.unit().clone()) * p.pow(x.valuation() as i32)
}

fn is_square_mod(n: &BigInt, p: u64) -> bool {
    let p_big = BigInt::from(p);
    let r = ((n % &p_big) + &p_big) % &p_big;
    (0..p).any(|k| BigInt::from(k * k % p) == r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn valuation_is_additive((p, x, y) in prime().prop_flat_map(|p| (Just(p), nonzero_rational(p), nonzero_rational(p)))) {
        let vx = valuation(&x, p).unwrap();
        let vy = valuation(&y, p).unwrap();
        prop_assert_eq!(valuation(&(&x * &y), p), Some(vx + vy));
        match valuation(&(&x + &y), p) {
            None => prop_assert_eq!(&x, &-&y),
            Some(vs) => {
                prop_assert!(vs >= vx.min(vy));
                if vx != vy {
                    prop_assert_eq!(vs, vx.min(vy));
                }
            }
        }
    }

    #[test]
    fn abs_exponent_is_negated_valuation(p in prime(), x in (-10_000i64..10_000, 1i64..5_000)) {
        let ctx = ctx(p);
        let s = PadicScalar::new(q(x.0, x.1), ctx);
        match s.valuation() {
            None => prop_assert_eq!(s.abs_exponent(), ExtExp::NegInf),
            Some(v) => prop_assert_eq!(s.abs_exponent(), ExtExp::from_int(-v)),
        }
    }

    #[test]
    fn hensel_roots_square_back(p in prime(), n in 1i64..100_000, d in 1i64..1_000, k in -3i32..4, precision in 4u32..40) {
        let ctx = PrimeContext::new(p, precision).unwrap();
        let pk = BigRational::from_integer(BigInt::from(p)).pow(k);
        let a = q(n, d) * pk;
        let v = valuation(&a, p).unwrap();
        match hensel_sqrt(&a, &ctx) {
            Ok(r) => {
                prop_assert_eq!(2 * r.valuation(), v);
                let x = value(&r);
                let err = &x * &x - &a;
                if !err.is_zero() {
                    prop_assert!(valuation(&err, p).unwrap() >= v + precision as i64);
                }
            }
            Err(Error::OddValuation(w)) => prop_assert!(w == v && v % 2 != 0),
            Err(Error::NotASquare { p: q_, .. }) => {
                prop_assert_eq!(q_, p);
                prop_assert!(v % 2 == 0);
                let unit = &a / BigRational::from_integer(BigInt::from(p)).pow(v as i32);
                // a unit residue u/w is a square iff u·w is
                prop_assert!(!is_square_mod(&(unit.numer() * unit.denom()), p));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn hensel_refines_consistently(p in prime(), b in 1i64..5_000, extra in 1u32..10) {
        // b² is a square, so both precisions succeed; roots agree up to sign
        let a = q(b * b, 1);
        let low = hensel_sqrt(&a, &PrimeContext::new(p, 8).unwrap()).unwrap();
        let high = hensel_sqrt(&a, &PrimeContext::new(p, 8 + extra).unwrap()).unwrap();
        let t = high.truncate(8);
        prop_assert!(t == low || t == low.neg());
    }

    #[test]
    fn approximations_reproduce_rationals(p in prime(), x in (1i64..100_000, 1i64..3_000), k in -3i32..4) {
        let ctx = ctx(p);
        let a = q(x.0, x.1) * BigRational::from_integer(BigInt::from(p)).pow(k);
        let approx = PadicApprox::from_rational(&a, ctx);
        let err = value(&approx) - &a;
        if !err.is_zero() {
            prop_assert!(valuation(&err, p).unwrap() >= approx.absolute_precision());
        }
        let sq = approx.mul(&approx);
        prop_assert!(sq.congruent(&PadicApprox::from_rational(&(&a * &a), ctx)));
        let one = approx.div(&approx);
        prop_assert!(one.congruent(&PadicApprox::from_rational(&BigRational::one(), ctx)));
    }
}

#[test]
fn spec_values() {
    let c5 = ctx(5);
    assert_eq!(PadicScalar::from_integer(25, c5).valuation(), Some(2));
    assert_eq!(PadicScalar::new(q(1, 25), c5).valuation(), Some(-2));
    assert_eq!(PadicScalar::from_integer(0, c5).valuation(), None);
    assert_eq!(PadicScalar::new(q(1, 5), c5).abs_exponent(), ExtExp::from_int(1));
    assert_eq!(
        hensel_sqrt(&q(-1, 1), &PrimeContext::new(2, 8).unwrap()),
        Err(Error::UnsupportedPrime)
    );
    // -1 is a square mod 5 but not mod 7
    assert!(hensel_sqrt(&q(-1, 1), &c5).is_ok());
    assert!(matches!(hensel_sqrt(&q(-1, 1), &ctx(7)), Err(Error::NotASquare { .. })));
}

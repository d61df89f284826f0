//! Strategies shared by the property tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use schottky::{Disk, DiskKind, Homography, Letter, PrimeContext, ProjPoint, Word};

pub const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

pub fn ctx(p: u64) -> PrimeContext {
    PrimeContext::with_default_precision(p).unwrap()
}

pub fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rationals spread over many p-adic scales: `p^k · n / d`.
pub fn rational(p: u64) -> impl Strategy<Value = BigRational> {
    (-4i32..6, -10_000i64..10_000, 1i64..2_000).prop_map(move |(k, n, d)| {
        let pk = BigRational::from_integer(BigInt::from(p)).pow(k);
        pk * q(n, d)
    })
}

pub fn nonzero_rational(p: u64) -> impl Strategy<Value = BigRational> {
    rational(p).prop_filter("nonzero", |x| *x != q(0, 1))
}

pub fn point(p: u64) -> impl Strategy<Value = ProjPoint> {
    prop_oneof![
        1 => Just(ProjPoint::Infinity),
        12 => rational(p).prop_map(ProjPoint::Finite),
    ]
}

pub fn homography() -> impl Strategy<Value = Homography> {
    [-60i64..60, -60i64..60, -60i64..60, -60i64..60]
        .prop_filter_map("singular", |[a, b, c, d]| Homography::from_i64(a, b, c, d).ok())
}

/// Integral matrices whose determinant is a p-adic unit.
pub fn integral_unit(p: u64) -> impl Strategy<Value = Homography> {
    [-60i64..60, -60i64..60, -60i64..60, -60i64..60]
        .prop_filter("determinant is a unit", move |[a, b, c, d]| (a * d - b * c).rem_euclid(p as i64) != 0)
        .prop_map(|[a, b, c, d]| Homography::from_i64(a, b, c, d).unwrap())
}

pub fn radius() -> impl Strategy<Value = Rational64> {
    prop_oneof![
        4 => (-4i64..4).prop_map(Rational64::from_integer),
        1 => (-7i64..7).prop_map(|n| Rational64::new(n, 2)),
    ]
}

pub fn disk(p: u64) -> impl Strategy<Value = Disk> {
    (any::<bool>(), any::<bool>(), rational(p), radius()).prop_map(move |(bounded, open, center, r)| {
        let kind = if bounded { DiskKind::Bounded } else { DiskKind::Unbounded };
        Disk::new(&ctx(p), kind, open, center, r)
    })
}

/// Points of the form `center + p^k · n/d`, landing on both sides of any
/// boundary near the center.
pub fn point_near(p: u64, center: BigRational) -> impl Strategy<Value = ProjPoint> {
    prop_oneof![
        6 => (-6i32..8, -500i64..500, 1i64..200).prop_map(move |(k, n, d)| {
            let pk = BigRational::from_integer(BigInt::from(p)).pow(k);
            ProjPoint::Finite(center.clone() + pk * q(n, d))
        }),
        1 => point(p),
    ]
}

/// A reduced word, built by multiplying letters in the free group.
pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len).prop_map(|ls| {
        ls.into_iter()
            .fold(Word::identity(), |w, k| w.mul(&Word::letter(Letter::from_index(k))))
    })
}

/// A reduced word of exactly the given length `len ≥ 1`: a first letter,
/// then at each step one of the letters other than the last one's inverse.
pub fn exact_word(rank: usize, len: usize) -> impl Strategy<Value = Word> {
    (0..2 * rank, prop::collection::vec(0..2 * rank - 1, len - 1)).prop_map(|(first, steps)| {
        let mut w = Word::letter(Letter::from_index(first));
        for c in steps {
            let forbidden = w.last().expect("nonempty").inverted().index();
            let k = if c >= forbidden { c + 1 } else { c };
            w = w.append(Letter::from_index(k)).expect("letter differs from the inverse");
        }
        w
    })
}

//! p-adic readings of exact rationals.
//!
//! Every absolute value in this crate is carried as an exact base-p
//! exponent: `Finite(e)` stands for `p^e`, `NegInf` for `|0|`.
//! Approximate p-adic numbers (`PadicApprox`) only appear where a
//! quadratic irrationality is unavoidable, i.e. fixed points of
//! homographies whose discriminant is not a rational square.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 64;

/// A prime together with the number of digits kept in approximate mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    precision: u32,
}

impl PrimeContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(PrimeContext { p, precision })
    }

    pub fn with_default_precision(p: u64) -> Result<Self> {
        Self::new(p, DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.p, precision)
    }

    pub fn prime(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^n` as an exact rational; `n` may be negative.
    pub fn power(&self, n: i64) -> BigRational {
        let base = self.prime().pow(n.unsigned_abs() as u32);
        if n >= 0 {
            BigRational::from_integer(base)
        } else {
            BigRational::new(BigInt::one(), base)
        }
    }

    pub fn valuation(&self, x: &BigRational) -> Option<i64> {
        valuation(x, self.p)
    }

    pub fn abs_exponent(&self, x: &BigRational) -> ExtExp {
        match self.valuation(x) {
            None => ExtExp::NegInf,
            Some(v) => ExtExp::from_int(-v),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An extended rational exponent: `Finite(e)` means `p^e`.
///
/// The derived order puts `NegInf` below every finite value and `PosInf`
/// above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtExp {
    NegInf,
    Finite(Rational64),
    PosInf,
}

impl ExtExp {
    pub const ZERO: ExtExp = ExtExp::Finite(Rational64::new_raw(0, 1));

    pub fn from_int(e: i64) -> Self {
        ExtExp::Finite(Rational64::from_integer(e))
    }

    pub fn finite(self) -> Option<Rational64> {
        match self {
            ExtExp::Finite(e) => Some(e),
            _ => None,
        }
    }

    /// Value as `f64` base-p logarithm; infinities map to `±inf`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtExp::NegInf => f64::NEG_INFINITY,
            ExtExp::PosInf => f64::INFINITY,
            ExtExp::Finite(e) => *e.numer() as f64 / *e.denom() as f64,
        }
    }
}

impl Add for ExtExp {
    type Output = ExtExp;

    fn add(self, rhs: ExtExp) -> ExtExp {
        match (self, rhs) {
            (ExtExp::Finite(a), ExtExp::Finite(b)) => ExtExp::Finite(a + b),
            (ExtExp::NegInf, ExtExp::PosInf) | (ExtExp::PosInf, ExtExp::NegInf) => {
                panic!("indeterminate exponent sum")
            }
            (ExtExp::NegInf, _) | (_, ExtExp::NegInf) => ExtExp::NegInf,
            _ => ExtExp::PosInf,
        }
    }
}

impl Neg for ExtExp {
    type Output = ExtExp;

    fn neg(self) -> ExtExp {
        match self {
            ExtExp::NegInf => ExtExp::PosInf,
            ExtExp::PosInf => ExtExp::NegInf,
            ExtExp::Finite(e) => ExtExp::Finite(-e),
        }
    }
}

impl Sub for ExtExp {
    type Output = ExtExp;

    fn sub(self, rhs: ExtExp) -> ExtExp {
        self + (-rhs)
    }
}

impl fmt::Display for ExtExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtExp::NegInf => write!(f, "-inf"),
            ExtExp::PosInf => write!(f, "inf"),
            ExtExp::Finite(e) => write!(f, "{e}"),
        }
    }
}

/// `v_p(n)` for an integer; `None` stands for `+∞`.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let prime = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&prime);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(x)` for a rational; `None` stands for `+∞`.
pub fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    let num = int_valuation(x.numer(), p)?;
    let den = int_valuation(x.denom(), p).unwrap_or(0);
    Some(num - den)
}

/// An exact rational read p-adically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    value: BigRational,
    ctx: PrimeContext,
}

impl PadicScalar {
    pub fn new(value: BigRational, ctx: PrimeContext) -> Self {
        PadicScalar { value, ctx }
    }

    pub fn from_integer(n: i64, ctx: PrimeContext) -> Self {
        PadicScalar::new(BigRational::from_integer(n.into()), ctx)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn valuation(&self) -> Option<i64> {
        self.ctx.valuation(&self.value)
    }

    /// `-v_p(x)`, the base-p logarithm of `|x|`.
    pub fn abs_exponent(&self) -> ExtExp {
        self.ctx.abs_exponent(&self.value)
    }

    pub fn hensel_sqrt(&self) -> Result<PadicApprox> {
        hensel_sqrt(&self.value, &self.ctx)
    }
}

/// Reduce a p-integral rational modulo `modulus` (a power of p).
fn residue_mod(x: &BigRational, modulus: &BigInt) -> BigInt {
    let den_inv = x
        .denom()
        .modinv(modulus)
        .expect("denominator is a p-adic unit");
    (x.numer() * den_inv).mod_floor(modulus)
}

/// `u·p^v` known modulo `p^(v+N)`, or zero known modulo `p^v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    valuation: i64,
    unit: BigInt,
    zero: bool,
    ctx: PrimeContext,
}


impl PadicApprox {
    pub fn from_rational(x: &BigRational, ctx: PrimeContext) -> Self {
        match ctx.valuation(x) {
            None => PadicApprox {
                valuation: i64::MAX,
                unit: BigInt::zero(),
                zero: true,
                ctx,
            },
            Some(v) => {
                let unit_part = x / ctx.power(v);
                let modulus = ctx.prime().pow(ctx.precision);
                PadicApprox {
                    valuation: v,
                    unit: residue_mod(&unit_part, &modulus),
                    zero: false,
                    ctx,
                }
            }
        }
    }

    fn zero_mod(abs_precision: i64, ctx: PrimeContext) -> Self {
        PadicApprox {
            valuation: abs_precision,
            unit: BigInt::zero(),
            zero: true,
            ctx,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Valuation of a nonzero value; for a zero this is the absolute precision.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    /// Exponent `k` such that the value is known modulo `p^k`.
    pub fn absolute_precision(&self) -> i64 {
        if self.zero {
            self.valuation
        } else {
            self.valuation + self.ctx.precision as i64
        }
    }

    pub fn abs_exponent(&self) -> ExtExp {
        if self.zero {
            ExtExp::NegInf
        } else {
            ExtExp::from_int(-self.valuation)
        }
    }

    /// Truncate to fewer digits.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision <= self.ctx.precision);
        let ctx = self.ctx.with_precision(precision).expect("precision >= 1");
        if self.zero {
            return PadicApprox { ctx, ..self.clone() };
        }
        let modulus = ctx.prime().pow(precision);
        PadicApprox {
            valuation: self.valuation,
            unit: self.unit.mod_floor(&modulus),
            zero: false,
            ctx,
        }
    }

    /// Integer representative of `value · p^shift` modulo `p^abs_prec`, for
    /// a shift making the value integral.
    fn scaled_residue(&self, shift: i64, abs_prec: i64) -> BigInt {
        let modulus = self.ctx.prime().pow((abs_prec + shift).max(0) as u32);
        if self.zero || modulus.is_one() {
            return BigInt::zero();
        }
        let e = self.valuation + shift;
        debug_assert!(e >= 0);
        (&self.unit * self.ctx.prime().pow(e as u32)).mod_floor(&modulus)
    }

    fn from_residue(r: BigInt, shift: i64, abs_prec: i64, ctx: PrimeContext) -> Self {
        match int_valuation(&r, ctx.p) {
            None => PadicApprox::zero_mod(abs_prec, ctx),
            Some(w) if w - shift >= abs_prec => PadicApprox::zero_mod(abs_prec, ctx),
            Some(w) => {
                let v = w - shift;
                let rel = (abs_prec - v).min(ctx.precision as i64) as u32;
                let ctx = ctx.with_precision(rel).expect("relative precision >= 1");
                let modulus = ctx.prime().pow(rel);
                let unit = (r / ctx.prime().pow(w as u32)).mod_floor(&modulus);
                PadicApprox {
                    valuation: v,
                    unit,
                    zero: false,
                    ctx,
                }
            }
        }
    }

    pub fn add(&self, other: &PadicApprox) -> PadicApprox {
        assert_eq!(self.ctx.p, other.ctx.p);
        let abs_prec = self.absolute_precision().min(other.absolute_precision());
        let low = [self, other]
            .iter()
            .filter(|x| !x.zero)
            .map(|x| x.valuation)
            .min()
            .unwrap_or(abs_prec)
            .min(abs_prec);
        let shift = -low;
        let r = self.scaled_residue(shift, abs_prec) + other.scaled_residue(shift, abs_prec);
        let modulus = self.ctx.prime().pow((abs_prec + shift).max(0) as u32);
        let ctx = if self.ctx.precision >= other.ctx.precision {
            self.ctx
        } else {
            other.ctx
        };
        PadicApprox::from_residue(r.mod_floor(&modulus), shift, abs_prec, ctx)
    }

    pub fn neg(&self) -> PadicApprox {
        if self.zero {
            return self.clone();
        }
        let modulus = self.ctx.prime().pow(self.ctx.precision);
        PadicApprox {
            unit: (-&self.unit).mod_floor(&modulus),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &PadicApprox) -> PadicApprox {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicApprox) -> PadicApprox {
        if self.zero || other.zero {
            let prec = match (self.zero, other.zero) {
                (true, true) => self.valuation.saturating_add(other.valuation),
                (true, false) => self.valuation.saturating_add(other.valuation),
                (false, true) => other.valuation.saturating_add(self.valuation),
                (false, false) => unreachable!(),
            };
            return PadicApprox::zero_mod(prec, self.ctx);
        }
        let rel = self.ctx.precision.min(other.ctx.precision);
        let ctx = self.ctx.with_precision(rel).expect("precision >= 1");
        let modulus = ctx.prime().pow(rel);
        PadicApprox {
            valuation: self.valuation + other.valuation,
            unit: (&self.unit * &other.unit).mod_floor(&modulus),
            zero: false,
            ctx,
        }
    }

    /// Division by a nonzero value.
    pub fn div(&self, other: &PadicApprox) -> PadicApprox {
        assert!(!other.zero, "division by an approximate zero");
        if self.zero {
            return PadicApprox::zero_mod(self.valuation.saturating_sub(other.valuation), self.ctx);
        }
        let rel = self.ctx.precision.min(other.ctx.precision);
        let ctx = self.ctx.with_precision(rel).expect("precision >= 1");
        let modulus = ctx.prime().pow(rel);
        let inv = other.unit.modinv(&modulus).expect("unit is invertible");
        PadicApprox {
            valuation: self.valuation - other.valuation,
            unit: (&self.unit * inv).mod_floor(&modulus),
            zero: false,
            ctx,
        }
    }

    /// Whether `self` and `other` agree at the common absolute precision.
    pub fn congruent(&self, other: &PadicApprox) -> bool {
        self.sub(other).zero
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "valuation": self.valuation,
            "unit": self.unit.to_string(),
            "precision": self.ctx.precision,
        })
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "O({}^{})", self.ctx.p, self.valuation)
        } else {
            write!(
                f,
                "{}*{}^{} + O({}^{})",
                self.unit,
                self.ctx.p,
                self.valuation,
                self.ctx.p,
                self.absolute_precision()
            )
        }
    }
}

fn mod_pow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli–Shanks).
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if mod_pow_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while mod_pow_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow_u64(z, q, p);
    let mut t = mod_pow_u64(a, q, p);
    let mut r = mod_pow_u64(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = mod_pow_u64(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// Square root in `Q_p` to `ctx.precision()` digits.
///
/// The returned root is the one whose leading digit lies in `1..=(p-1)/2`.
pub fn hensel_sqrt(a: &BigRational, ctx: &PrimeContext) -> Result<PadicApprox> {
    let p = ctx.p();
    if p == 2 {
        return Err(Error::UnsupportedPrime);
    }
    let v = ctx.valuation(a).ok_or(Error::ZeroSquareRoot)?;
    if v % 2 != 0 {
        return Err(Error::OddValuation(v));
    }
    let unit_part = a / ctx.power(v);
    let prime = ctx.prime();
    let residue = residue_mod(&unit_part, &prime)
        .to_u64()
        .expect("residue below p");
    let mut root = sqrt_mod_prime(residue, p).ok_or(Error::NotASquare { residue, p })?;
    if root > (p - 1) / 2 {
        root = p - root;
    }
    let mut x = BigInt::from(root);
    let mut digits = 1u32;
    while digits < ctx.precision() {
        digits = (digits * 2).min(ctx.precision());
        let modulus = prime.pow(digits);
        let target = residue_mod(&unit_part, &modulus);
        let inv = (BigInt::from(2) * &x)
            .modinv(&modulus)
            .expect("2x is a unit for odd p");
        x = (&x - (&x * &x - target) * inv).mod_floor(&modulus);
    }
    Ok(PadicApprox {
        valuation: v / 2,
        unit: x,
        zero: false,
        ctx: *ctx,
    })
}

/// Parse `"a"`, `"a/b"` or `"-a/b"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::parse("rational", format!("cannot parse {s:?}"));
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::parse("rational", "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_exponent(e: &Rational64) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

pub fn parse_exponent(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::parse("radius_exp", format!("cannot parse {s:?}"));
    match s.split_once('/') {
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
    }
}

/// Compare `|x|` with `p^e`.
pub fn compare_abs(ctx: &PrimeContext, x: &BigRational, e: Rational64) -> Ordering {
    ctx.abs_exponent(x).cmp(&ExtExp::Finite(e))
}

//! Points of P¹(Q), homographies with integer matrices, and the
//! chordal metric.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{format_rational, hensel_sqrt, parse_rational, ExtExp, PadicApprox, PrimeContext};

/// A point of P¹(Q). `Finite(x)` is `(x : 1)`, `Infinity` is `(1 : 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(BigRational),
    Infinity,
}

impl ProjPoint {
    pub fn integer(n: i64) -> Self {
        ProjPoint::Finite(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ProjPoint::Finite(BigRational::new(n.into(), d.into()))
    }

    /// Normalize homogeneous coordinates `(x : y)`.
    pub fn from_homogeneous(x: BigRational, y: BigRational) -> Self {
        assert!(!(x.is_zero() && y.is_zero()), "(0 : 0) is not a point");
        if y.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(x / y)
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            Ok(ProjPoint::Infinity)
        } else {
            parse_rational(t).map(ProjPoint::Finite)
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => f.write_str(&format_rational(x)),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// A class in PGL(2, Q), stored as a content-1 integer matrix whose first
/// nonzero entry (row-major) is positive. Two homographies are equal as
/// group elements iff their representations are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homography {
    entries: [BigInt; 4],
    det: BigInt,
}

impl Homography {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self::canonical([a, b, c, d]))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Clears denominators of a rational matrix.
    pub fn from_rationals(m: [BigRational; 4]) -> Result<Self> {
        let lcm = m.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let [a, b, c, d] = m.map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer());
        Self::new(a, b, c, d)
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).expect("identity is invertible")
    }

    pub fn diagonal(a: i64, d: i64) -> Result<Self> {
        Self::from_i64(a, 0, 0, d)
    }

    fn canonical(mut m: [BigInt; 4]) -> Self {
        let g = m.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        debug_assert!(!g.is_zero());
        let lead_negative = m.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in m.iter_mut() {
            *x = &*x / &g;
            if lead_negative {
                *x = -&*x;
            }
        }
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        Homography { entries: m, det }
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.entries
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn trace(&self) -> BigInt {
        &self.entries[0] + &self.entries[3]
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = &self.entries;
        b.is_zero() && c.is_zero() && a == d
    }

    /// The product `self · other`, i.e. `z ↦ self(other(z))`, before
    /// content reduction.
    pub fn raw_product(&self, other: &Homography) -> [BigInt; 4] {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]
    }

    pub fn compose(&self, other: &Homography) -> Homography {
        Self::canonical(self.raw_product(other))
    }

    /// The adjugate `(d, -b; -c, a)` before content reduction.
    pub fn adjugate(&self) -> [BigInt; 4] {
        let [a, b, c, d] = &self.entries;
        [d.clone(), -b, -c, a.clone()]
    }

    pub fn inverse(&self) -> Homography {
        Self::canonical(self.adjugate())
    }

    pub fn pow(&self, n: i64) -> Homography {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Homography::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Homography) -> Homography {
        self.compose(other).compose(&self.inverse())
    }

    pub fn apply(&self, x: &ProjPoint) -> ProjPoint {
        let [a, b, c, d] = &self.entries;
        match x {
            ProjPoint::Infinity => {
                if c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(BigRational::new(a.clone(), c.clone()))
                }
            }
            ProjPoint::Finite(z) => {
                let num = z.numer() * a + z.denom() * b;
                let den = z.numer() * c + z.denom() * d;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(BigRational::new(num, den))
                }
            }
        }
    }

    /// Largest entry valuation lower bound: `min_i v(entry_i)`.
    fn min_entry_valuation(&self, ctx: &PrimeContext) -> i64 {
        self.entries
            .iter()
            .filter_map(|x| crate::padic::int_valuation(x, ctx.p()))
            .min()
            .expect("some entry is nonzero")
    }

    /// Exponent `k` such that `δ(gx, gy) ≤ p^k · δ(x, y)` for all x, y.
    ///
    /// Scaling g so that its entries are p-integral with a unit among them,
    /// `|det|·|x ∧ y| / (‖gx‖‖gy‖)` and `|det|·‖x‖ ≤ ‖gx‖ ≤ ‖x‖` give
    /// `k = v(det) − 2·min v(entry)`.
    pub fn lipschitz_exponent(&self, ctx: &PrimeContext) -> i64 {
        let vdet = crate::padic::int_valuation(&self.det, ctx.p()).expect("det != 0");
        (vdet - 2 * self.min_entry_valuation(ctx)).max(0)
    }

    pub fn classify(&self, ctx: &PrimeContext) -> ElementClass {
        classify(self, ctx)
    }

    pub fn fixed_points(&self, ctx: &PrimeContext) -> Result<FixedPoints> {
        fixed_points(self, ctx)
    }

    pub fn to_strings(&self) -> [[String; 2]; 2] {
        let [a, b, c, d] = &self.entries;
        [[a.to_string(), b.to_string()], [c.to_string(), d.to_string()]]
    }
}

impl fmt::Display for Homography {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "({a},{b};{c},{d})")
    }
}

/// The chordal distance `δ(x, y)` as a base-p exponent.
pub fn delta(x: &ProjPoint, y: &ProjPoint, ctx: &PrimeContext) -> ExtExp {
    fn chart(e: ExtExp) -> ExtExp {
        e.max(ExtExp::ZERO)
    }
    match (x, y) {
        (ProjPoint::Infinity, ProjPoint::Infinity) => ExtExp::NegInf,
        (ProjPoint::Finite(x), ProjPoint::Infinity) | (ProjPoint::Infinity, ProjPoint::Finite(x)) => {
            -chart(ctx.abs_exponent(x))
        }
        (ProjPoint::Finite(x), ProjPoint::Finite(y)) => {
            if x == y {
                return ExtExp::NegInf;
            }
            ctx.abs_exponent(&(x - y)) - chart(ctx.abs_exponent(x)) - chart(ctx.abs_exponent(y))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NonHyperbolic {
    Identity,
    Parabolic,
    EllipticOrOther,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementClass {
    Hyperbolic,
    NonHyperbolic(NonHyperbolic),
}

/// Hyperbolic iff the eigenvalues have distinct absolute values, i.e.
/// `v(tr²) < v(det)`.
pub fn classify(g: &Homography, ctx: &PrimeContext) -> ElementClass {
    if g.is_identity() {
        return ElementClass::NonHyperbolic(NonHyperbolic::Identity);
    }
    let tr = g.trace();
    let tr2 = &tr * &tr;
    let p = ctx.p();
    if let Some(vt) = crate::padic::int_valuation(&tr2, p) {
        let vd = crate::padic::int_valuation(g.det(), p).expect("det != 0");
        if vt < vd {
            return ElementClass::Hyperbolic;
        }
    }
    let disc = tr2 - BigInt::from(4) * g.det();
    if disc.is_zero() {
        ElementClass::NonHyperbolic(NonHyperbolic::Parabolic)
    } else {
        ElementClass::NonHyperbolic(NonHyperbolic::EllipticOrOther)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    Exact(ProjPoint),
    /// A finite fixed point in `Q_p ∖ Q`.
    Approx(PadicApprox),
}

impl FixedPoint {
    pub fn exact(&self) -> Option<&ProjPoint> {
        match self {
            FixedPoint::Exact(x) => Some(x),
            FixedPoint::Approx(_) => None,
        }
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPoint::Exact(x) => write!(f, "{x}"),
            FixedPoint::Approx(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    Hyperbolic {
        attracting: FixedPoint,
        repelling: FixedPoint,
    },
    /// Non-hyperbolic elements; a parabolic element reports its single
    /// fixed point twice.
    Untagged {
        class: NonHyperbolic,
        points: [FixedPoint; 2],
    },
}

impl FixedPoints {
    pub fn points(&self) -> [&FixedPoint; 2] {
        match self {
            FixedPoints::Hyperbolic { attracting, repelling } => [attracting, repelling],
            FixedPoints::Untagged { points, .. } => [&points[0], &points[1]],
        }
    }
}

enum Root {
    Exact(BigInt),
    Approx(PadicApprox),
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Solutions of `c z² + (d − a) z − b = 0` on P¹.
pub fn fixed_points(g: &Homography, ctx: &PrimeContext) -> Result<FixedPoints> {
    let class = classify(g, ctx);
    let [a, b, c, d] = g.entries();
    let untagged = |class, x: FixedPoint, y: FixedPoint| FixedPoints::Untagged { class, points: [x, y] };
    let tag = |class: ElementClass, big: FixedPoint, small: FixedPoint| match class {
        ElementClass::Hyperbolic => FixedPoints::Hyperbolic {
            attracting: big,
            repelling: small,
        },
        ElementClass::NonHyperbolic(k) => untagged(k, big, small),
    };
    match class {
        ElementClass::NonHyperbolic(NonHyperbolic::Identity) => return Err(Error::IdentityHasNoFixedPoints),
        ElementClass::NonHyperbolic(NonHyperbolic::Parabolic) => {
            let x = if c.is_zero() {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(BigRational::new(a - d, BigInt::from(2) * c))
            };
            return Ok(untagged(
                NonHyperbolic::Parabolic,
                FixedPoint::Exact(x.clone()),
                FixedPoint::Exact(x),
            ));
        }
        _ => {}
    }
    if c.is_zero() {
        // ∞ has eigenvalue a, the finite point b/(d−a) has eigenvalue d.
        let inf = FixedPoint::Exact(ProjPoint::Infinity);
        let other = FixedPoint::Exact(ProjPoint::Finite(BigRational::new(b.clone(), d - a)));
        let va = crate::padic::int_valuation(a, ctx.p());
        let vd = crate::padic::int_valuation(d, ctx.p());
        // larger absolute value = smaller valuation; None is +∞
        let inf_bigger = match (va, vd) {
            (Some(x), Some(y)) => x < y,
            (Some(_), None) => true,
            _ => false,
        };
        return Ok(if inf_bigger {
            tag(class, inf, other)
        } else {
            tag(class, other, inf)
        });
    }
    let tr = g.trace();
    let disc = &tr * &tr - BigInt::from(4) * g.det();
    let root = match exact_sqrt(&disc) {
        Some(r) => Root::Exact(r),
        None => match hensel_sqrt(&BigRational::from_integer(disc), ctx) {
            Ok(r) => Root::Approx(r),
            Err(Error::UnsupportedPrime) => return Err(Error::UnsupportedPrime),
            Err(_) => return Err(Error::NotASquareInQp),
        },
    };
    let two_c = BigInt::from(2) * c;
    match root {
        Root::Exact(s) => {
            let plus = BigRational::new(a - d + &s, two_c.clone());
            let minus = BigRational::new(a - d - &s, two_c);
            let mu_plus = ctx.abs_exponent(&BigRational::from_integer(&tr + &s));
            let mu_minus = ctx.abs_exponent(&BigRational::from_integer(&tr - &s));
            let (p, m) = (
                FixedPoint::Exact(ProjPoint::Finite(plus)),
                FixedPoint::Exact(ProjPoint::Finite(minus)),
            );
            Ok(if mu_plus >= mu_minus { tag(class, p, m) } else { tag(class, m, p) })
        }
        Root::Approx(s) => {
            let lift = |x: &BigInt| PadicApprox::from_rational(&BigRational::from_integer(x.clone()), *ctx);
            let amd = lift(&(a - d));
            let den = lift(&two_c);
            let plus = amd.add(&s).div(&den);
            let minus = amd.sub(&s).div(&den);
            let trp = lift(&tr);
            let mu_plus = trp.add(&s).abs_exponent();
            let mu_minus = trp.sub(&s).abs_exponent();
            let (p, m) = (FixedPoint::Approx(plus), FixedPoint::Approx(minus));
            Ok(if mu_plus >= mu_minus { tag(class, p, m) } else { tag(class, m, p) })
        }
    }
}

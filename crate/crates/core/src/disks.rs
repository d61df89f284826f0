//! Ultrametric disks on P¹.
//!
//! A disk is either bounded, `B(a, p^e) = {|z − a| < p^e}` or
//! `E(a, p^e) = {|z − a| ≤ p^e}`, or unbounded, the complement in P¹ of a
//! bounded disk of the opposite openness: `P¹ ∖ E(a, r)` is open and
//! `P¹ ∖ B(a, r)` is closed. The stored center is always the one of the
//! bounded disk involved, and radii are exact exponents.
//!
//! Set-theoretic predicates are taken over `C_p` (equivalently, for the
//! rigid points of the analytic line): an open disk `B(a, p^e)` and the
//! closed disk `E(a, p^(e-1))` are different even though they contain the
//! same rational points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{format_exponent, format_rational, ExtExp, PrimeContext};
use crate::proj::{Homography, ProjPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiskKind {
    Bounded,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disk {
    kind: DiskKind,
    open: bool,
    center: BigRational,
    radius: Rational64,
}

/// Least `n` such that `{x : v(x − a) ≥ n}` are the rational points of the
/// bounded disk with radius exponent `e`.
fn valuation_threshold(radius: Rational64, open: bool) -> i64 {
    let neg = -radius;
    if open {
        neg.floor().to_integer() + 1
    } else {
        neg.ceil().to_integer()
    }
}

/// The representative `t / p^s` with `0 ≤ t < p^(n+s)` of the class of `a`
/// modulo `p^n`.
fn canonical_center(ctx: &PrimeContext, a: &BigRational, n: i64) -> BigRational {
    let va = match ctx.valuation(a) {
        None => return BigRational::zero(),
        Some(v) if v >= n => return BigRational::zero(),
        Some(v) => v,
    };
    let s = (-va).max(0);
    let scale = ctx.prime().pow(s as u32);
    let modulus = ctx.prime().pow((n + s) as u32);
    let scaled = a * BigRational::from_integer(scale.clone());
    let inv = scaled
        .denom()
        .modinv(&modulus)
        .expect("scaled center is p-integral");
    let t = (scaled.numer() * inv).mod_floor(&modulus);
    BigRational::new(t, scale)
}

fn chart(e: ExtExp) -> ExtExp {
    e.max(ExtExp::ZERO)
}

impl Disk {
    fn build(ctx: &PrimeContext, kind: DiskKind, open: bool, center: BigRational, radius: Rational64) -> Self {
        // the bounded disk whose data we store has openness `open` when
        // bounded and the opposite one when we are its complement
        let bounded_open = match kind {
            DiskKind::Bounded => open,
            DiskKind::Unbounded => !open,
        };
        let n = valuation_threshold(radius, bounded_open);
        Disk {
            kind,
            open,
            center: canonical_center(ctx, &center, n),
            radius,
        }
    }

    /// `B(center, p^radius)`.
    pub fn open(ctx: &PrimeContext, center: BigRational, radius: Rational64) -> Self {
        Self::build(ctx, DiskKind::Bounded, true, center, radius)
    }

    /// `E(center, p^radius)`.
    pub fn closed(ctx: &PrimeContext, center: BigRational, radius: Rational64) -> Self {
        Self::build(ctx, DiskKind::Bounded, false, center, radius)
    }

    pub fn open_int(ctx: &PrimeContext, center: i64, radius: i64) -> Self {
        Self::open(ctx, BigRational::from_integer(center.into()), radius.into())
    }

    pub fn closed_int(ctx: &PrimeContext, center: i64, radius: i64) -> Self {
        Self::closed(ctx, BigRational::from_integer(center.into()), radius.into())
    }

    pub fn new(ctx: &PrimeContext, kind: DiskKind, open: bool, center: BigRational, radius: Rational64) -> Self {
        Self::build(ctx, kind, open, center, radius)
    }

    pub fn kind(&self) -> DiskKind {
        self.kind
    }

    pub fn is_bounded(&self) -> bool {
        self.kind == DiskKind::Bounded
    }

    pub fn is_open(&self) -> bool {
        self.open
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius_exponent(&self) -> Rational64 {
        self.radius
    }

    /// Complement in P¹.
    pub fn complement(&self) -> Disk {
        Disk {
            kind: match self.kind {
                DiskKind::Bounded => DiskKind::Unbounded,
                DiskKind::Unbounded => DiskKind::Bounded,
            },
            open: !self.open,
            center: self.center.clone(),
            radius: self.radius,
        }
    }

    /// The closed disk with the same center and radius (`D⁺`). For a
    /// bounded open disk this is the unique smallest closed disk containing
    /// it; for an unbounded one the choice depends on the stored center.
    pub fn closure(&self, ctx: &PrimeContext) -> Disk {
        Disk::build(ctx, self.kind, false, self.center.clone(), self.radius)
    }

    pub fn interior(&self, ctx: &PrimeContext) -> Disk {
        Disk::build(ctx, self.kind, true, self.center.clone(), self.radius)
    }

    fn bounded_contains(&self, ctx: &PrimeContext, x: &BigRational) -> bool {
        debug_assert!(self.is_bounded());
        let d = ctx.abs_exponent(&(x - &self.center));
        let r = ExtExp::Finite(self.radius);
        if self.open {
            d < r
        } else {
            d <= r
        }
    }

    pub fn contains(&self, x: &ProjPoint, ctx: &PrimeContext) -> bool {
        match (self.kind, x) {
            (DiskKind::Bounded, ProjPoint::Infinity) => false,
            (DiskKind::Unbounded, ProjPoint::Infinity) => true,
            (DiskKind::Bounded, ProjPoint::Finite(z)) => self.bounded_contains(ctx, z),
            (DiskKind::Unbounded, ProjPoint::Finite(z)) => !self.complement().bounded_contains(ctx, z),
        }
    }

    /// `other ⊆ self`.
    pub fn contains_disk(&self, other: &Disk, ctx: &PrimeContext) -> bool {
        match (self.kind, other.kind) {
            (DiskKind::Bounded, DiskKind::Bounded) => {
                if other.radius > self.radius || !self.bounded_contains(ctx, &other.center) {
                    return false;
                }
                other.radius < self.radius || !self.open || other.open
            }
            (DiskKind::Bounded, DiskKind::Unbounded) => false,
            (DiskKind::Unbounded, DiskKind::Bounded) => self.complement().disjoint(other, ctx),
            (DiskKind::Unbounded, DiskKind::Unbounded) => other.complement().contains_disk(&self.complement(), ctx),
        }
    }

    pub fn disjoint(&self, other: &Disk, ctx: &PrimeContext) -> bool {
        match (self.kind, other.kind) {
            (DiskKind::Bounded, DiskKind::Bounded) => {
                !self.bounded_contains(ctx, &other.center) && !other.bounded_contains(ctx, &self.center)
            }
            (DiskKind::Unbounded, DiskKind::Bounded) => self.complement().contains_disk(other, ctx),
            (DiskKind::Bounded, DiskKind::Unbounded) => other.complement().contains_disk(self, ctx),
            (DiskKind::Unbounded, DiskKind::Unbounded) => false,
        }
    }

    fn affine_image(&self, ctx: &PrimeContext, scale: &BigRational, shift: &BigRational) -> Disk {
        let grow = ctx.abs_exponent(scale).finite().expect("nonzero scale");
        Disk::build(ctx, self.kind, self.open, &self.center * scale + shift, self.radius + grow)
    }

    fn inversion_image(&self, ctx: &PrimeContext) -> Disk {
        match self.kind {
            DiskKind::Unbounded => self.complement().inversion_image(ctx).complement(),
            DiskKind::Bounded => {
                if self.bounded_contains(ctx, &BigRational::zero()) {
                    // B(0, r) ↦ P¹ ∖ E(0, 1/r), E(0, r) ↦ P¹ ∖ B(0, 1/r)
                    Disk::build(ctx, DiskKind::Unbounded, self.open, BigRational::zero(), -self.radius)
                } else {
                    let a = &self.center;
                    let abs_a = ctx.abs_exponent(a).finite().expect("center is nonzero");
                    Disk::build(
                        ctx,
                        DiskKind::Bounded,
                        self.open,
                        a.recip(),
                        self.radius - abs_a * 2,
                    )
                }
            }
        }
    }

    /// The image `g(D)`, again a disk of the same openness.
    pub fn image(&self, g: &Homography, ctx: &PrimeContext) -> Disk {
        let [a, b, c, d] = g.entries().clone().map(BigRational::from_integer);
        if c.is_zero() {
            return self.affine_image(ctx, &(&a / &d), &(&b / &d));
        }
        // g(z) = a/c − (det/c²) · 1/(z + d/c)
        let det = BigRational::from_integer(g.det().clone());
        let one = BigRational::one();
        self.affine_image(ctx, &one, &(&d / &c))
            .inversion_image(ctx)
            .affine_image(ctx, &(-det / (&c * &c)), &BigRational::zero())
            .affine_image(ctx, &one, &(&a / &c))
    }

    /// The infimum of `δ(x, y)` over `y ∈ D`, as an exponent.
    pub fn point_delta(&self, x: &ProjPoint, ctx: &PrimeContext) -> Result<ExtExp> {
        if self.contains(x, ctx) {
            return Err(Error::PointInsideDisk);
        }
        let r = ExtExp::Finite(self.radius);
        let abs_a = ctx.abs_exponent(&self.center);
        Ok(match (self.kind, x) {
            (DiskKind::Bounded, ProjPoint::Infinity) => -chart(abs_a.max(r)),
            (DiskKind::Bounded, ProjPoint::Finite(z)) => {
                // |z − y| = |z − a| on the whole disk; maximise |y|
                ctx.abs_exponent(&(z - &self.center)) - chart(ctx.abs_exponent(z)) - chart(abs_a.max(r))
            }
            (DiskKind::Unbounded, ProjPoint::Finite(z)) => {
                // |z − y| = |y − a| ≥ r, and t / max(1, t, |a|) increases with t
                r - chart(r.max(abs_a)) - chart(ctx.abs_exponent(z))
            }
            (DiskKind::Unbounded, ProjPoint::Infinity) => unreachable!("unbounded disks contain ∞"),
        })
    }

    /// The supremum of `δ(x, y)` over `y ∈ D` for a bounded `D ∌ x`.
    pub fn point_delta_sup(&self, x: &ProjPoint, ctx: &PrimeContext) -> Result<ExtExp> {
        if self.contains(x, ctx) {
            return Err(Error::PointInsideDisk);
        }
        assert!(self.is_bounded(), "supremum is only used for bounded cover disks");
        let abs_a = ctx.abs_exponent(&self.center);
        // min of max(1, |y|) over D: 1 when 0 ∈ D, otherwise |y| = |a| throughout
        let smallest = if self.bounded_contains(ctx, &BigRational::zero()) {
            ExtExp::ZERO
        } else {
            chart(abs_a)
        };
        Ok(match x {
            ProjPoint::Infinity => -smallest,
            ProjPoint::Finite(z) => ctx.abs_exponent(&(z - &self.center)) - chart(ctx.abs_exponent(z)) - smallest,
        })
    }

    pub fn to_display(&self, ctx: &PrimeContext) -> String {
        format!("{} (p = {})", self, ctx.p())
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = |open: bool| if open { "B" } else { "E" };
        let c = format_rational(&self.center);
        let r = format_exponent(&self.radius);
        match self.kind {
            DiskKind::Bounded => write!(f, "{}({c}, p^{r})", letter(self.open)),
            DiskKind::Unbounded => write!(f, "P1\\{}({c}, p^{r})", letter(!self.open)),
        }
    }
}

/// Data for the distance inequality of a polynomial at the origin: the
/// order `m` of `f − f(0)` at 0 and the exponent of `c = |m · c_m|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyDistance {
    pub order: usize,
    pub c_exponent: ExtExp,
}

/// `coefficients[i]` is the coefficient of `z^i`.
pub fn poly_distance_exponent(coefficients: &[BigRational], ctx: &PrimeContext) -> Result<PolyDistance> {
    if let Some(i) = coefficients
        .iter()
        .position(|c| ctx.abs_exponent(c) > ExtExp::ZERO)
    {
        return Err(Error::CoefficientTooLarge(i));
    }
    let order = coefficients
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .ok_or(Error::ConstantPolynomial)?;
    let lead = &coefficients[order] * BigRational::from_integer(BigInt::from(order));
    Ok(PolyDistance {
        order,
        c_exponent: ctx.abs_exponent(&lead),
    })
}

/// Horner evaluation, used by callers checking the inequality.
pub fn poly_eval(coefficients: &[BigRational], x: &BigRational) -> BigRational {
    coefficients
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

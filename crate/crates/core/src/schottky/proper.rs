use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{words_up_to, Letter, SchottkyGroup, Word};
use crate::disks::Disk;
use crate::error::Result;
use crate::exec::Execution;
use crate::padic::ExtExp;
use crate::proj::ProjPoint;

/// One orbit sample `x = γ · x₀`: the word length and a certified upper
/// bound for `log_p δ_Γ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperSample {
    pub word: Word,
    pub base_point: ProjPoint,
    pub upper_exponent: Rational64,
}

/// Empirical constants with `ℓ(γ) ≤ a − b · log_p δ_Γ(γ · x₀)` on every
/// sample. These are fitted, not the universal constants of the
/// properness statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperConstants {
    pub depth: usize,
    pub a: BigRational,
    pub b: BigRational,
    pub samples: Vec<ProperSample>,
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn len(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ProperConstants {
    /// Exact check of the inequality on `samples`. Because `b ≥ 0` and the
    /// sample exponents are upper bounds, this implies it for `δ_Γ` itself.
    pub fn holds_on(&self, samples: &[ProperSample]) -> bool {
        !self.b.is_negative()
            && samples
                .iter()
                .all(|s| len(s.word.len()) <= &self.a - &self.b * big(s.upper_exponent))
    }

    pub fn holds(&self) -> bool {
        self.holds_on(&self.samples)
    }

    pub fn a_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
    }

    pub fn b_f64(&self) -> f64 {
        self.b.to_f64().unwrap_or(f64::NAN)
    }

    /// `(a' − a, b' − b)` against a refit.
    pub fn shift_to(&self, other: &ProperConstants) -> (f64, f64) {
        (other.a_f64() - self.a_f64(), other.b_f64() - self.b_f64())
    }
}

impl SchottkyGroup {
    /// `∞` followed by up to `extra` small rationals of `𝔉°`.
    pub fn interior_base_points(&self, extra: usize) -> Vec<ProjPoint> {
        let p = self.ctx.p() as i64;
        let candidates = (1..=4 * p).flat_map(|k| [ProjPoint::integer(k), ProjPoint::ratio(1, k * p)]);
        std::iter::once(ProjPoint::Infinity)
            .chain(candidates.filter(|x| self.in_fundamental_interior(x)).take(extra))
            .collect()
    }

    /// Orbit samples `γ · x₀` for all words up to `depth`. The upper bound
    /// for `δ_Γ(γ · x₀)` comes from the depth `ℓ + 1` disks below `γ`, which
    /// contain limit points and miss `γ · 𝔉°`.
    pub fn proper_samples(&self, depth: usize, base_points: &[ProjPoint], exec: Execution) -> Result<Vec<ProperSample>> {
        self.require_verified()?;
        let mut disks: HashMap<Word, Disk> = HashMap::new();
        for n in 1..=depth + 1 {
            disks.extend(self.level_disks(n, exec)?.into_iter().map(|(w, d)| (w, d.closure(&self.ctx))));
        }
        let letters: Vec<Letter> = (0..2 * self.rank()).map(Letter::from_index).collect();
        let words = words_up_to(self.rank(), depth);
        let samples = exec.flat_map(&words, |w| {
            let g = self.element(w);
            let children: Vec<&Disk> = letters.iter().filter_map(|&l| w.append(l)).map(|c| &disks[&c]).collect();
            base_points
                .iter()
                .map(|x0| {
                    let x = g.apply(x0);
                    let upper = children
                        .iter()
                        .map(|d| d.point_delta_sup(&x, &self.ctx).expect("orbit point outside child disks"))
                        .min()
                        .and_then(ExtExp::finite)
                        .expect("finite distance to a disk missing x");
                    ProperSample {
                        word: w.clone(),
                        base_point: x0.clone(),
                        upper_exponent: upper,
                    }
                })
                .collect()
        });
        Ok(samples)
    }

    /// Least-squares slope `b` of `ℓ` against `−log_p δ`, then the smallest
    /// `a` making the inequality hold on every sample.
    pub fn fit_proper_constants(&self, depth: usize, exec: Execution) -> Result<ProperConstants> {
        let base = self.interior_base_points(3);
        let samples = self.proper_samples(depth, &base, exec)?;
        let n = len(samples.len());
        let ts: Vec<BigRational> = samples.iter().map(|s| -big(s.upper_exponent)).collect();
        let ls: Vec<BigRational> = samples.iter().map(|s| len(s.word.len())).collect();
        let t_mean = ts.iter().fold(BigRational::zero(), |acc, t| acc + t) / &n;
        let l_mean = ls.iter().fold(BigRational::zero(), |acc, l| acc + l) / &n;
        let mut cov = BigRational::zero();
        let mut var = BigRational::zero();
        for (t, l) in ts.iter().zip(&ls) {
            let dt = t - &t_mean;
            cov += &dt * (l - &l_mean);
            var += &dt * &dt;
        }
        let mut b = if var.is_zero() { BigRational::zero() } else { cov / var };
        if !b.is_positive() {
            b = len(1);
        }
        let a = samples
            .iter()
            .map(|s| len(s.word.len()) + &b * big(s.upper_exponent))
            .max()
            .expect("at least the identity sample");
        Ok(ProperConstants { depth, a, b, samples })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disks::Disk;
    use crate::proj::Homography;

    #[test]
    fn base_points_are_interior() {
        let g = SchottkyGroup::worked_example();
        let pts = g.interior_base_points(3);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|x| g.in_fundamental_interior(x)));
    }

    #[test]
    fn fitted_constants_hold_and_restrict() {
        let g = SchottkyGroup::worked_example();
        let fit = g.fit_proper_constants(4, Execution::default()).unwrap();
        assert!(fit.holds());
        assert!(fit.b.is_positive());
        let shallow: Vec<ProperSample> = fit.samples.iter().filter(|s| s.word.len() <= 2).cloned().collect();
        assert!(fit.holds_on(&shallow));
    }

    #[test]
    fn rank_one_orbit_is_linear() {
        let g5 = SchottkyGroup::worked_example();
        let ctx = *g5.context();
        let mut g = SchottkyGroup::new(
            ctx,
            vec![Homography::from_i64(1, 0, -24, 25).unwrap()],
            vec![Disk::open_int(&ctx, 0, -1)],
            vec![Disk::open_int(&ctx, 1, -1)],
        )
        .unwrap();
        g.verify().unwrap();
        let samples = g.proper_samples(6, &[ProjPoint::Infinity], Execution::Sequential).unwrap();
        // the orbit of ∞ approaches the fixed points by a factor 25 per letter
        for s in &samples {
            assert_eq!(
                s.upper_exponent,
                Rational64::from_integer(-2 * s.word.len() as i64),
                "{}",
                s.word
            );
        }
    }
}

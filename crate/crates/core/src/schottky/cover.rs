use num_rational::Rational64;

use super::{Letter, SchottkyGroup, Word};
use crate::disks::Disk;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::padic::ExtExp;
use crate::proj::ProjPoint;

/// The closed disks `B(γ)⁺` for all reduced words of one length, sorted by
/// word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCover {
    pub depth: usize,
    pub disks: Vec<(Word, Disk)>,
    pub max_radius_exponent: Rational64,
}

impl LimitCover {
    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }
}

/// A certified interval for the exponent of `δ_Γ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGammaBound {
    pub lower_exponent: Rational64,
    pub upper_exponent: Rational64,
    pub depth: usize,
}

/// Geometric decay of the maximal cover radius, `p^(e_n) ≤ b · c^(−n)`,
/// with `log_p b` and `log_p c` read off depths 1 and 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusDecay {
    pub log_b: Rational64,
    pub log_c: Rational64,
    /// `(n, e_n, bound holds)` for every scanned depth.
    pub rows: Vec<(usize, Rational64, bool)>,
}

impl RadiusDecay {
    pub fn passed(&self) -> bool {
        self.log_c > Rational64::from_integer(0) && self.rows.iter().all(|r| r.2)
    }
}

impl SchottkyGroup {
    fn base_disk(&self, l: Letter) -> Disk {
        if l.inverse {
            self.b[l.generator].clone()
        } else {
            self.c[l.generator].clone()
        }
    }

    /// The open disk `B(γ)`, via `B(ℓ·w) = ℓ·B(w)`, `B(γ_i) = C_i` and
    /// `B(γ_i⁻¹) = B_i`.
    pub fn b_disk(&self, w: &Word) -> Result<Disk> {
        self.require_verified()?;
        self.check_word(w)?;
        if w.is_empty() {
            return Err(Error::parse("word", "B(γ) needs a nonempty word"));
        }
        Ok(self.b_disk_unchecked(w))
    }

    pub(crate) fn b_disk_unchecked(&self, w: &Word) -> Disk {
        if w.len() == 1 {
            return self.base_disk(w.letters()[0]);
        }
        if let Some(d) = self.cached(w) {
            return d;
        }
        let first = w.letters()[0];
        let d = self.b_disk_unchecked(&w.tail()).image(self.letter_matrix(first), &self.ctx);
        self.store(w.clone(), d.clone());
        d
    }

    /// Open disks `B(γ)` for every reduced word of length `n ≥ 1`, sorted
    /// by word. Built level by level by prepending letters.
    pub fn level_disks(&self, n: usize, exec: Execution) -> Result<Vec<(Word, Disk)>> {
        self.require_verified()?;
        if n == 0 {
            return Err(Error::parse("depth", "must be at least 1"));
        }
        let letters: Vec<Letter> = (0..2 * self.rank()).map(Letter::from_index).collect();
        let mut level: Vec<(Word, Disk)> = letters.iter().map(|&l| (Word::letter(l), self.base_disk(l))).collect();
        for _ in 1..n {
            level = exec.flat_map(&level, |(w, d)| {
                letters
                    .iter()
                    .filter_map(|&l| {
                        let lw = w.prepend(l)?;
                        Some((lw, d.image(self.letter_matrix(l), &self.ctx)))
                    })
                    .collect()
            });
        }
        level.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(level)
    }

    pub fn limit_cover(&self, n: usize, exec: Execution) -> Result<LimitCover> {
        let disks: Vec<(Word, Disk)> = self
            .level_disks(n, exec)?
            .into_iter()
            .map(|(w, d)| (w, d.closure(&self.ctx)))
            .collect();
        let max_radius_exponent = disks.iter().map(|(_, d)| d.radius_exponent()).max().expect("rank >= 1");
        Ok(LimitCover {
            depth: n,
            disks,
            max_radius_exponent,
        })
    }

    /// Bounds for `δ_Γ(x)`: the limit set lies in the depth-`n` cover and
    /// meets every cover disk, so the minimum over disks of the infimum
    /// (resp. supremum) of `δ(x, ·)` is a lower (resp. upper) bound.
    pub fn delta_to_limit(&self, x: &ProjPoint, n: usize, exec: Execution) -> Result<DeltaGammaBound> {
        let cover = self.limit_cover(n, exec)?;
        self.delta_against(x, &cover, exec)
    }

    pub fn delta_against(&self, x: &ProjPoint, cover: &LimitCover, exec: Execution) -> Result<DeltaGammaBound> {
        let pairs = exec.map(&cover.disks, |(_, d)| -> Result<(ExtExp, ExtExp)> {
            Ok((d.point_delta(x, &self.ctx)?, d.point_delta_sup(x, &self.ctx)?))
        });
        let mut lower = ExtExp::PosInf;
        let mut upper = ExtExp::PosInf;
        for r in pairs {
            let (lo, up) = r.map_err(|_| Error::PointNearLimitSet(cover.depth))?;
            lower = lower.min(lo);
            upper = upper.min(up);
        }
        let finite = |e: ExtExp| e.finite().ok_or(Error::PointNearLimitSet(cover.depth));
        Ok(DeltaGammaBound {
            lower_exponent: finite(lower)?,
            upper_exponent: finite(upper)?,
            depth: cover.depth,
        })
    }

    /// Fit `log_p c = e_1 − e_2`, `log_p b = e_1 + log_p c` and check
    /// `e_n ≤ log_p b − n · log_p c` for `n = 1..=max_depth`.
    pub fn radius_decay(&self, max_depth: usize, exec: Execution) -> Result<RadiusDecay> {
        if max_depth < 2 {
            return Err(Error::parse("depth", "radius decay needs depth >= 2"));
        }
        let radii = (1..=max_depth)
            .map(|n| Ok(self.limit_cover(n, exec)?.max_radius_exponent))
            .collect::<Result<Vec<_>>>()?;
        let log_c = radii[0] - radii[1];
        let log_b = radii[0] + log_c;
        let rows = radii
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let n = i + 1;
                (n, e, e <= log_b - log_c * Rational64::from_integer(n as i64))
            })
            .collect();
        Ok(RadiusDecay { log_b, log_c, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn g5() -> SchottkyGroup {
        SchottkyGroup::worked_example()
    }

    #[test]
    fn base_disks() {
        let g = g5();
        let ctx = *g.context();
        assert_eq!(g.b_disk(&"g1".parse().unwrap()).unwrap(), Disk::open_int(&ctx, 1, -1));
        assert_eq!(g.b_disk(&"g1^-1".parse().unwrap()).unwrap(), Disk::open_int(&ctx, 0, -1));
        let outer = g.b_disk(&"g1".parse().unwrap()).unwrap();
        let inner = g.b_disk(&"g1*g2".parse().unwrap()).unwrap();
        assert!(outer.contains_disk(&inner, &ctx));
        assert!(!inner.contains_disk(&outer, &ctx));
    }

    #[test]
    fn b_disk_contains_orbit_point() {
        let g = g5();
        let ctx = *g.context();
        for w in super::super::words_up_to(2, 4).into_iter().skip(1) {
            let d = g.b_disk(&w).unwrap();
            assert!(d.contains(&g.element(&w).apply(&ProjPoint::Infinity), &ctx), "{w}");
        }
    }

    #[test]
    fn cached_and_levelled_disks_agree() {
        let g = g5();
        for (w, d) in g.level_disks(4, Execution::Sequential).unwrap() {
            assert_eq!(g.b_disk(&w).unwrap(), d);
        }
    }

    #[test]
    fn depth_one_cover() {
        let g = g5();
        let ctx = *g.context();
        let cover = g.limit_cover(1, Execution::default()).unwrap();
        let mut disks: Vec<Disk> = cover.disks.iter().map(|(_, d)| d.clone()).collect();
        disks.sort();
        let mut expected: Vec<Disk> = (0..4).map(|a| Disk::closed_int(&ctx, a, -1)).collect();
        expected.sort();
        assert_eq!(disks, expected);
        assert_eq!(g.limit_cover(3, Execution::default()).unwrap().len(), 36);
    }

    #[test]
    fn delta_at_infinity() {
        let g = g5();
        let b = g.delta_to_limit(&ProjPoint::Infinity, 1, Execution::default()).unwrap();
        assert_eq!(b.lower_exponent, Rational64::from_integer(0));
        assert_eq!(b.upper_exponent, Rational64::from_integer(0));
        assert_eq!(
            g.delta_to_limit(&ProjPoint::integer(1), 2, Execution::default()),
            Err(Error::PointNearLimitSet(2))
        );
    }

    #[test]
    fn delta_intervals_refine() {
        let g = g5();
        let x = ProjPoint::ratio(4, 1);
        let mut prev: Option<DeltaGammaBound> = None;
        for n in 1..6 {
            let b = g.delta_to_limit(&x, n, Execution::default()).unwrap();
            assert!(b.lower_exponent <= b.upper_exponent);
            if let Some(p) = prev {
                assert!(b.lower_exponent >= p.lower_exponent);
                assert!(b.upper_exponent <= p.upper_exponent);
            }
            prev = Some(b);
        }
    }

    #[test]
    fn radius_decay_worked_example() {
        let decay = g5().radius_decay(6, Execution::default()).unwrap();
        assert!(decay.passed());
        assert_eq!(decay.log_c, Rational64::from_integer(2));
    }

    #[test]
    fn unverified_group_is_rejected() {
        let ctx = PrimeContext::with_default_precision(5).unwrap();
        let g = g5();
        let raw = SchottkyGroup::new(ctx, g.generators().to_vec(), g.b_disks().to_vec(), g.c_disks().to_vec()).unwrap();
        assert_eq!(raw.b_disk(&"g1".parse().unwrap()), Err(Error::NotVerified));
    }
}

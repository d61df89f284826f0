use std::collections::VecDeque;

use super::{Letter, SchottkyGroup, Word};
use crate::disks::Disk;
use crate::error::{Error, Result};
use crate::proj::{Homography, ProjPoint};

pub const DEFAULT_MAX_STEPS: usize = 256;

/// Outcome of the membership test. `word` is the candidate produced by
/// reducing `g · ∞`; it is a certificate exactly when `member` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub gamma: Word,
    pub disk: Disk,
    /// `γ γ_i γ⁻¹` for every generator.
    pub conjugates: Vec<Homography>,
}

impl SchottkyGroup {
    /// Whether `x` lies in `𝔉`, the complement of the open disks.
    pub fn in_fundamental_domain(&self, x: &ProjPoint) -> bool {
        self.b.iter().chain(&self.c).all(|d| !d.contains(x, &self.ctx))
    }

    /// Whether `x` lies in the interior `𝔉°`, the complement of the closed disks.
    pub fn in_fundamental_interior(&self, x: &ProjPoint) -> bool {
        self.b
            .iter()
            .chain(&self.c)
            .all(|d| !d.closure(&self.ctx).contains(x, &self.ctx))
    }

    /// Ping-pong reduction: returns `(γ, y)` with `x = γ · y` and `y ∈ 𝔉`.
    /// Boundary points of the disks belong to `𝔉` and stop the walk.
    pub fn reduce_point(&self, x: &ProjPoint, max_steps: usize) -> Result<(Word, ProjPoint)> {
        self.require_verified()?;
        let mut y = x.clone();
        let mut letters = Vec::new();
        'walk: loop {
            for i in 0..self.rank() {
                let step = if self.c[i].contains(&y, &self.ctx) {
                    Some(Letter::gen(i))
                } else if self.b[i].contains(&y, &self.ctx) {
                    Some(Letter::inv(i))
                } else {
                    None
                };
                if let Some(l) = step {
                    if letters.len() == max_steps {
                        return Err(Error::MaxStepsExceeded(max_steps));
                    }
                    letters.push(l);
                    y = self.letter_matrix(l.inverted()).apply(&y);
                    continue 'walk;
                }
            }
            break;
        }
        Ok((Word::new(letters).expect("ping-pong words are reduced"), y))
    }

    /// Exact membership: reduce `g · ∞` to a candidate word `w` and compare
    /// the product of `w` with `g`.
    pub fn is_member(&self, g: &Homography) -> Result<Membership> {
        self.is_member_with_budget(g, DEFAULT_MAX_STEPS)
    }

    pub fn is_member_with_budget(&self, g: &Homography, max_steps: usize) -> Result<Membership> {
        let (word, _) = self.reduce_point(&g.apply(&ProjPoint::Infinity), max_steps)?;
        let member = &self.element(&word) == g;
        Ok(Membership { member, word })
    }

    /// Extend `prefix` until `B(γ)⁺ ⊆ u`, breadth first and in word order,
    /// discarding branches whose disk misses `u`. Then `γ · 𝔉 ⊆ u`.
    pub fn localize_fundamental(&self, prefix: &Word, u: &Disk, max_depth: usize) -> Result<Localization> {
        self.require_verified()?;
        self.check_word(prefix)?;
        let ctx = &self.ctx;
        let letters: Vec<Letter> = (0..2 * self.rank()).map(Letter::from_index).collect();
        let mut queue: VecDeque<Word> = VecDeque::new();
        if prefix.is_empty() {
            queue.extend(letters.iter().map(|&l| Word::letter(l)));
        } else {
            if self.b_disk_unchecked(prefix).disjoint(u, ctx) {
                return Err(Error::TargetMissesPrefix);
            }
            queue.push_back(prefix.clone());
        }
        while let Some(w) = queue.pop_front() {
            let disk = self.b_disk_unchecked(&w);
            if disk.disjoint(u, ctx) {
                continue;
            }
            let closed = disk.closure(ctx);
            if u.contains_disk(&closed, ctx) {
                let g = self.element(&w);
                let conjugates = self.generators.iter().map(|h| g.conjugate(h)).collect();
                return Ok(Localization {
                    gamma: w,
                    disk: closed,
                    conjugates,
                });
            }
            if w.len() < max_depth {
                queue.extend(letters.iter().filter_map(|&l| w.append(l)));
            }
        }
        Err(Error::DepthExceeded(max_depth))
    }
}

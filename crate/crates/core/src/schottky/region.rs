use super::{words_up_to, SchottkyGroup, Word};
use crate::disks::{Disk, DiskKind};
use crate::error::Result;
use crate::exec::Execution;
use crate::padic::PrimeContext;
use crate::proj::{Homography, ProjPoint};

/// `⋂ constraints ∖ ⋃ holes`, a finite boolean combination of disks. With
/// no constraints the outer set is all of P¹.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub constraints: Vec<Disk>,
    pub holes: Vec<Disk>,
}

impl Region {
    pub fn new(constraints: Vec<Disk>, holes: Vec<Disk>) -> Self {
        Region { constraints, holes }
    }

    /// A closed disk minus open disks.
    pub fn affinoid(outer: Disk, holes: Vec<Disk>) -> Self {
        Region::new(vec![outer], holes)
    }

    pub fn contains(&self, x: &ProjPoint, ctx: &PrimeContext) -> bool {
        self.constraints.iter().all(|d| d.contains(x, ctx)) && !self.holes.iter().any(|d| d.contains(x, ctx))
    }

    pub fn image(&self, g: &Homography, ctx: &PrimeContext) -> Region {
        Region {
            constraints: self.constraints.iter().map(|d| d.image(g, ctx)).collect(),
            holes: self.holes.iter().map(|d| d.image(g, ctx)).collect(),
        }
    }

    pub fn intersect(&self, other: &Region) -> Region {
        Region {
            constraints: self.constraints.iter().chain(&other.constraints).cloned().collect(),
            holes: self.holes.iter().chain(&other.holes).cloned().collect(),
        }
    }

    /// Emptiness over `C_p`. After moving unbounded pieces to the other
    /// side as complements, the bounded constraints are nested or disjoint
    /// and meet in a smallest disk `K`. A finite union of disks covers `K`
    /// only if one of them contains `K`, because the residue field of
    /// `C_p` is infinite and its value group is dense.
    pub fn is_empty(&self, ctx: &PrimeContext) -> bool {
        let mut constraints = Vec::new();
        let mut holes = Vec::new();
        for d in &self.constraints {
            match d.kind() {
                DiskKind::Bounded => constraints.push(d.clone()),
                DiskKind::Unbounded => holes.push(d.complement()),
            }
        }
        for d in &self.holes {
            match d.kind() {
                DiskKind::Bounded => holes.push(d.clone()),
                DiskKind::Unbounded => constraints.push(d.complement()),
            }
        }
        let Some(mut k) = constraints.first().cloned() else {
            return false;
        };
        for d in &constraints[1..] {
            if k.contains_disk(d, ctx) {
                k = d.clone();
            } else if !d.contains_disk(&k, ctx) {
                return true;
            }
        }
        holes.iter().any(|h| h.contains_disk(&k, ctx))
    }

    pub fn meets(&self, other: &Region, ctx: &PrimeContext) -> bool {
        !self.intersect(other).is_empty(ctx)
    }
}

/// Words `γ` with `ℓ(γ) ≤ depth` and `γ · A ∩ A′ ≠ ∅`.
///
/// Completeness: if `A` misses every depth-`m` open disk `B(γ)` then
/// `A ⊆ ⋃_{ℓ(γ)<m} γ · 𝔉`, and likewise `A′` with `m′`. Translates of `𝔉`
/// meet only for neighbours, so any `γ` with `γ · A ∩ A′ ≠ ∅` has
/// `ℓ(γ) ≤ m + m′ − 1`; the scan is certified when `depth` reaches that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslateReport {
    pub depth: usize,
    pub words: Vec<Word>,
    pub clearance: Option<(usize, usize)>,
    pub length_bound: Option<usize>,
    pub certified: bool,
}

impl SchottkyGroup {
    /// `𝔉 = P¹ ∖ (⋃ B_i ∪ ⋃ C_i)`.
    pub fn fundamental_region(&self) -> Region {
        Region::new(vec![], self.b.iter().chain(&self.c).cloned().collect())
    }

    /// Least `m ≤ max_depth` such that `a` misses every open `B(γ)` with
    /// `ℓ(γ) = m`.
    pub fn clearance_depth(&self, a: &Region, max_depth: usize, exec: Execution) -> Result<Option<usize>> {
        for m in 1..=max_depth {
            let level = self.level_disks(m, exec)?;
            let clear = exec.all(&level, |(_, d)| !a.meets(&Region::new(vec![d.clone()], vec![]), &self.ctx));
            if clear {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn intersecting_translates(&self, a: &Region, a2: &Region, depth: usize, exec: Execution) -> Result<TranslateReport> {
        self.require_verified()?;
        let words = words_up_to(self.rank(), depth);
        let hits = exec.flat_map(&words, |w| {
            let g = self.element(w);
            if a.image(&g, &self.ctx).meets(a2, &self.ctx) {
                vec![w.clone()]
            } else {
                vec![]
            }
        });
        let m = self.clearance_depth(a, depth.max(1), exec)?;
        let m2 = self.clearance_depth(a2, depth.max(1), exec)?;
        let clearance = m.zip(m2);
        let length_bound = clearance.map(|(m, m2)| m + m2 - 1);
        Ok(TranslateReport {
            depth,
            words: hits,
            clearance,
            length_bound,
            certified: length_bound.is_some_and(|b| b <= depth),
        })
    }
}

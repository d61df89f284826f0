//! Flat subvarieties of products of Schottky domains, stabilizers of point
//! pairs, and the bounded double-coset probe for commensurability.

use std::collections::HashSet;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::proj::{Homography, ProjPoint};
use crate::schottky::{words_up_to, SchottkyGroup, Word, DEFAULT_MAX_STEPS};

/// The equation satisfied by one coordinate of a flat subvariety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Free,
    Fixed(ProjPoint),
    /// `z_self = map · z_source`.
    Linked { source: usize, map: Homography },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatSpec {
    pub coordinates: Vec<Coordinate>,
    /// One group per coordinate; may be empty when only the equations matter.
    pub groups: Vec<SchottkyGroup>,
}

/// A flat whose links all point directly at free coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFlat {
    pub free: Vec<usize>,
    pub spec: FlatSpec,
}

impl NormalFlat {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// The point of the flat with the given values at the free coordinates.
    pub fn point(&self, free_values: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
        if free_values.len() != self.free.len() {
            return Err(Error::InvalidFlat(format!(
                "expected {} free values, got {}",
                self.free.len(),
                free_values.len()
            )));
        }
        let mut out = vec![ProjPoint::Infinity; self.spec.coordinates.len()];
        for (&i, v) in self.free.iter().zip(free_values) {
            out[i] = v.clone();
        }
        for (i, c) in self.spec.coordinates.iter().enumerate() {
            match c {
                Coordinate::Free => {}
                Coordinate::Fixed(x) => out[i] = x.clone(),
                Coordinate::Linked { source, map } => out[i] = map.apply(&free_values[self.free_position(*source)]),
            }
        }
        Ok(out)
    }

    fn free_position(&self, i: usize) -> usize {
        self.free.iter().position(|&j| j == i).expect("links point at free coordinates")
    }
}

impl FlatSpec {
    pub fn new(coordinates: Vec<Coordinate>) -> Self {
        FlatSpec {
            coordinates,
            groups: Vec::new(),
        }
    }

    pub fn with_groups(mut self, groups: Vec<SchottkyGroup>) -> Self {
        self.groups = groups;
        self
    }

    /// Whether `z` satisfies every equation.
    pub fn satisfies(&self, z: &[ProjPoint]) -> bool {
        z.len() == self.coordinates.len()
            && self.coordinates.iter().enumerate().all(|(i, c)| match c {
                Coordinate::Free => true,
                Coordinate::Fixed(x) => &z[i] == x,
                Coordinate::Linked { source, map } => z[i] == map.apply(&z[*source]),
            })
    }

    /// Resolve every chain of links down to a free root (composing the
    /// maps) or to a fixed value.
    pub fn normalize(&self) -> Result<NormalFlat> {
        let n = self.coordinates.len();
        let mut resolved = Vec::with_capacity(n);
        for start in 0..n {
            let mut map = Homography::identity();
            let mut seen = vec![false; n];
            let mut i = start;
            let coordinate = loop {
                if seen[i] {
                    return Err(Error::CyclicLinks(start));
                }
                seen[i] = true;
                match &self.coordinates[i] {
                    Coordinate::Free if i == start => break Coordinate::Free,
                    Coordinate::Free => break Coordinate::Linked { source: i, map },
                    Coordinate::Fixed(x) => break Coordinate::Fixed(map.apply(x)),
                    Coordinate::Linked { source, map: g } => {
                        if *source >= n {
                            return Err(Error::InvalidFlat(format!("coordinate {i} links to missing {source}")));
                        }
                        map = map.compose(g);
                        i = *source;
                    }
                }
            };
            resolved.push(coordinate);
        }
        let free = (0..n).filter(|&i| resolved[i] == Coordinate::Free).collect();
        Ok(NormalFlat {
            free,
            spec: FlatSpec {
                coordinates: resolved,
                groups: self.groups.clone(),
            },
        })
    }
}

/// A generator of the stabilizer of `{x, y}` found among short words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    pub word: Word,
    pub element: Homography,
    /// `λ` with `m⁻¹ h m = (z ↦ λ z)` where `m(0) = x`, `m(∞) = y`.
    pub multiplier: BigRational,
    pub multiplier_abs_exponent: Rational64,
    /// Every nontrivial word up to the depth fixing both points.
    pub stabilizing_words: Vec<Word>,
}

fn homogeneous(x: &ProjPoint) -> (BigRational, BigRational) {
    match x {
        ProjPoint::Infinity => (BigRational::one(), BigRational::zero()),
        ProjPoint::Finite(z) => (z.clone(), BigRational::one()),
    }
}

/// The homography sending `0 ↦ x` and `∞ ↦ y`.
pub fn pair_chart(x: &ProjPoint, y: &ProjPoint) -> Result<Homography> {
    let (x1, x2) = homogeneous(x);
    let (y1, y2) = homogeneous(y);
    Homography::from_rationals([y1, x1, y2, x2])
}

pub fn pair_stabilizer(
    group: &SchottkyGroup,
    x: &ProjPoint,
    y: &ProjPoint,
    depth: usize,
    exec: Execution,
) -> Result<Option<Stabilizer>> {
    group.require_verified()?;
    let m = pair_chart(x, y).map_err(|_| Error::InvalidFlat("the pair needs two distinct points".into()))?;
    let m_inv = m.inverse();
    let words: Vec<Word> = words_up_to(group.rank(), depth).into_iter().skip(1).collect();
    let found = exec.flat_map(&words, |w| {
        let h = group.element(w);
        let fixes = &h.apply(x) == x && &h.apply(y) == y;
        if fixes {
            vec![(w.clone(), m_inv.compose(&h).compose(&m))]
        } else {
            vec![]
        }
    });
    let ctx = group.context();
    let mut best: Option<Stabilizer> = None;
    for (w, diag) in &found {
        let [a, b, c, d] = diag.entries();
        debug_assert!(b.is_zero() && c.is_zero());
        let mut lambda = BigRational::new(a.clone(), d.clone());
        let mut word = w.clone();
        let abs = ctx.abs_exponent(&lambda).finite().expect("nonzero multiplier");
        if abs == Rational64::zero() {
            // a nonhyperbolic stabilizer would contradict the Schottky property
            continue;
        }
        if abs < Rational64::zero() {
            lambda = lambda.recip();
            word = word.inverse();
        }
        let abs = abs.abs();
        let better = match &best {
            None => true,
            Some(s) => (abs, word.len(), &word) < (s.multiplier_abs_exponent, s.word.len(), &s.word),
        };
        if better {
            best = Some(Stabilizer {
                element: group.element(&word),
                word,
                multiplier: lambda,
                multiplier_abs_exponent: abs,
                stabilizing_words: Vec::new(),
            });
        }
    }
    Ok(best.map(|mut s| {
        s.stabilizing_words = found.into_iter().map(|(w, _)| w).collect();
        s
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stabilized,
    /// Counts still grow inside the window. This is not evidence against
    /// commensurability, only the absence of evidence for it.
    GrowingNoEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommensurabilityReport {
    pub depth: usize,
    pub window: usize,
    /// Distinct cosets `Γ₂ · g γ₁` over words `γ₁` of length `≤ d`, for `d = 0..=depth`.
    pub forward: Vec<usize>,
    /// The same for `Γ₁ · g⁻¹ γ₂`.
    pub backward: Vec<usize>,
    pub verdict: Verdict,
}

/// Default stabilization window `⌈L / 3⌉`.
pub fn default_window(depth: usize) -> usize {
    depth.div_ceil(3).max(1)
}

/// Canonical representative of the right coset `Γ · x`. Reduce `x · x₀`
/// to `η · y` with `y ∈ 𝔉`. The elements `η'` with `η'⁻¹ x x₀ ∈ 𝔉` are
/// `η` itself and, when `y` sits on the boundary sphere of a closed disk,
/// `η` times the letter pairing that sphere with its partner. This set only
/// depends on the coset, so the least of the elements `η'⁻¹ x` does too.
fn canonical_rep(group: &SchottkyGroup, x: &Homography, base: &[ProjPoint]) -> Option<Homography> {
    let ctx = group.context();
    base.iter().find_map(|x0| {
        let (eta, y) = group.reduce_point(&x.apply(x0), DEFAULT_MAX_STEPS).ok()?;
        let rep = group.element(&eta).inverse().compose(x);
        let mut best = rep.clone();
        for (i, gen) in group.generators().iter().enumerate() {
            let other = if group.c_disks()[i].closure(ctx).contains(&y, ctx) {
                gen.inverse().compose(&rep)
            } else if group.b_disks()[i].closure(ctx).contains(&y, ctx) {
                gen.compose(&rep)
            } else {
                continue;
            };
            best = best.min(other);
        }
        Some(best)
    })
}

fn coset_counts(
    source: &SchottkyGroup,
    g: &Homography,
    target: &SchottkyGroup,
    depth: usize,
    exec: Execution,
) -> Result<Vec<usize>> {
    let base = target.interior_base_points(3);
    let mut reps: HashSet<Homography> = HashSet::new();
    let mut loose: Vec<Homography> = Vec::new();
    let mut counts = Vec::with_capacity(depth + 1);
    for d in 0..=depth {
        let words: Vec<Word> = source.enumerate_words(d).collect();
        let found = exec.map(&words, |w| {
            let x = g.compose(&source.element(w));
            (canonical_rep(target, &x, &base), x)
        });
        for (rep, x) in found {
            match rep {
                Some(r) => {
                    reps.insert(r);
                }
                None => {
                    let mut known = false;
                    for r in reps.iter().chain(&loose) {
                        if target.is_member(&x.compose(&r.inverse()))?.member {
                            known = true;
                            break;
                        }
                    }
                    if !known {
                        loose.push(x);
                    }
                }
            }
        }
        counts.push(reps.len() + loose.len());
    }
    Ok(counts)
}

fn stable(counts: &[usize], window: usize) -> bool {
    let n = counts.len();
    let start = n.saturating_sub(window + 1);
    counts[start..].windows(2).all(|w| w[0] == w[1])
}

/// Bounded probe of `Γ₂ ∖ Γ₂ g Γ₁` and `Γ₁ ∖ Γ₁ g⁻¹ Γ₂`.
pub fn double_coset_scan(
    gamma1: &SchottkyGroup,
    g: &Homography,
    gamma2: &SchottkyGroup,
    depth: usize,
    window: usize,
    exec: Execution,
) -> Result<CommensurabilityReport> {
    gamma1.require_verified()?;
    gamma2.require_verified()?;
    let forward = coset_counts(gamma1, g, gamma2, depth, exec)?;
    let backward = coset_counts(gamma2, &g.inverse(), gamma1, depth, exec)?;
    let verdict = if depth > 0 && stable(&forward, window) && stable(&backward, window) {
        Verdict::Stabilized
    } else {
        Verdict::GrowingNoEvidence
    };
    Ok(CommensurabilityReport {
        depth,
        window,
        forward,
        backward,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub source: usize,
    pub target: usize,
    pub map: Homography,
    pub report: CommensurabilityReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicReport {
    pub depth: usize,
    pub pairs: Vec<PairReport>,
    /// Every linked pair stabilized at this depth.
    pub consistent: bool,
}

pub fn geodesic_report(flat: &NormalFlat, depth: usize, exec: Execution) -> Result<GeodesicReport> {
    let spec = &flat.spec;
    if spec.groups.len() != spec.coordinates.len() {
        return Err(Error::InvalidFlat(format!(
            "{} coordinates but {} groups",
            spec.coordinates.len(),
            spec.groups.len()
        )));
    }
    let mut pairs = Vec::new();
    for (j, c) in spec.coordinates.iter().enumerate() {
        if let Coordinate::Linked { source, map } = c {
            let report = double_coset_scan(&spec.groups[*source], map, &spec.groups[j], depth, default_window(depth), exec)?;
            pairs.push(PairReport {
                source: *source,
                target: j,
                map: map.clone(),
                report,
            });
        }
    }
    let consistent = pairs.iter().all(|p| p.report.verdict == Verdict::Stabilized);
    Ok(GeodesicReport { depth, pairs, consistent })
}

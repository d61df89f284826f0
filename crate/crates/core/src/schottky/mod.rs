//! Schottky groups given by generators and a candidate good fundamental
//! domain `𝔉 = P¹ ∖ (⋃ B_i ∪ ⋃ C_i)`.
//!
//! The domain is verified, never searched for: the caller supplies the
//! disks and [`SchottkyGroup::verify_good_domain`] checks
//!
//! 1. every `B_i`, `C_i` is a bounded open disk (so `∞ ∈ 𝔉`);
//! 2. the closed disks `B_i⁺`, `C_i⁺` are pairwise disjoint;
//! 3. `γ_i(P¹ ∖ B_i) = C_i⁺` and `γ_i(P¹ ∖ B_i⁺) = C_i`.
//!
//! Everything downstream (covers, reduction, membership) requires a
//! verified group.

mod cover;
mod proper;
mod reduce;
mod region;
mod word;

use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::{BigRational, Rational64};

use crate::disks::Disk;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::padic::PrimeContext;
use crate::proj::{ElementClass, Homography};

pub use cover::{DeltaGammaBound, LimitCover, RadiusDecay};
pub use proper::{ProperConstants, ProperSample};
pub use reduce::{Localization, Membership, DEFAULT_MAX_STEPS};
pub use region::{Region, TranslateReport};
pub use word::{positive_words, reduced_word_count, words_up_to, Letter, ReducedWords, Word};

const CACHE_CAPACITY: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: u8,
    pub description: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

#[derive(Debug)]
pub struct SchottkyGroup {
    ctx: PrimeContext,
    generators: Vec<Homography>,
    inverses: Vec<Homography>,
    b: Vec<Disk>,
    c: Vec<Disk>,
    verified: bool,
    cache: Mutex<HashMap<Word, Disk>>,
}

impl Clone for SchottkyGroup {
    fn clone(&self) -> Self {
        SchottkyGroup {
            ctx: self.ctx,
            generators: self.generators.clone(),
            inverses: self.inverses.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            verified: self.verified,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for SchottkyGroup {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.generators == other.generators && self.b == other.b && self.c == other.c
    }
}

impl SchottkyGroup {
    /// An unverified group. The three lists must have equal length.
    pub fn new(ctx: PrimeContext, generators: Vec<Homography>, b: Vec<Disk>, c: Vec<Disk>) -> Result<Self> {
        if generators.len() != b.len() || generators.len() != c.len() {
            return Err(Error::parse(
                "group",
                format!(
                    "{} generators but {} B-disks and {} C-disks",
                    generators.len(),
                    b.len(),
                    c.len()
                ),
            ));
        }
        let inverses = generators.iter().map(Homography::inverse).collect();
        Ok(SchottkyGroup {
            ctx,
            generators,
            inverses,
            b,
            c,
            verified: false,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Conjugates `m_i · diag(1, p^e) · m_i⁻¹` with `m_i = (a_i, b_i; 1, 1)`,
    /// `a_i = b_i + 1`, so that `γ_i` repels from `b_i` and attracts to
    /// `a_i`; `B_i = B(b_i, p^(-e/2))`, `C_i = B(a_i, p^(-e/2))`. The integers
    /// `b_i` are chosen greedily so that all closed disks are disjoint.
    ///
    /// `sample(5, 2, 2)` is the worked example with generators
    /// `(1,0;−24,25)` and `(−47,144;−24,73)`.
    pub fn sample(p: u64, rank: usize, multiplier_exponent: u32) -> Result<Self> {
        let ctx = PrimeContext::with_default_precision(p)?;
        if multiplier_exponent < 2 || multiplier_exponent % 2 != 0 {
            return Err(Error::parse(
                "multiplier_exponent",
                "must be an even integer >= 2",
            ));
        }
        let k = (multiplier_exponent / 2) as i64;
        let far = |x: i64, y: i64| {
            ctx.valuation(&BigRational::from_integer((x - y).into()))
                .is_some_and(|v| v < k)
        };
        let mut points: Vec<i64> = Vec::new();
        let mut pairs = Vec::new();
        let mut base = 0i64;
        while pairs.len() < rank {
            let (rep, att) = (base, base + 1);
            if points.iter().all(|&q| far(q, rep) && far(q, att)) {
                points.extend([rep, att]);
                pairs.push((rep, att));
            }
            base += 1;
            if base > 10_000 {
                return Err(Error::parse("rank", "could not place disjoint disks"));
            }
        }
        let diag = Homography::diagonal(1, (p as i64).pow(multiplier_exponent))?;
        let radius = Rational64::from_integer(-k);
        let mut gens = Vec::new();
        let (mut bs, mut cs) = (Vec::new(), Vec::new());
        for (rep, att) in pairs {
            let m = Homography::from_i64(att, rep, 1, 1)?;
            gens.push(m.conjugate(&diag));
            bs.push(Disk::open(&ctx, BigRational::from_integer(rep.into()), radius));
            cs.push(Disk::open(&ctx, BigRational::from_integer(att.into()), radius));
        }
        let mut g = SchottkyGroup::new(ctx, gens, bs, cs)?;
        g.verify()?;
        Ok(g)
    }

    /// The p = 5, rank 2 example group.
    pub fn worked_example() -> Self {
        Self::sample(5, 2, 2).expect("worked example verifies")
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Homography] {
        &self.generators
    }

    pub fn b_disks(&self) -> &[Disk] {
        &self.b
    }

    pub fn c_disks(&self) -> &[Disk] {
        &self.c
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::NotVerified)
        }
    }

    /// All `2g` boundary disks in the order `B_1, C_1, B_2, C_2, …`.
    fn named_disks(&self) -> Vec<(String, &Disk)> {
        (0..self.rank())
            .flat_map(|i| [(format!("B{}", i + 1), &self.b[i]), (format!("C{}", i + 1), &self.c[i])])
            .collect()
    }

    pub fn verify_good_domain(&mut self) -> AxiomReport {
        let ctx = self.ctx;
        let mut checks = Vec::new();
        for (name, d) in self.named_disks() {
            let ok = d.is_bounded() && d.is_open();
            checks.push(AxiomCheck {
                axiom: 1,
                description: format!("{name} is a bounded open disk"),
                passed: ok,
                witness: (!ok).then(|| format!("{name} = {d}")),
            });
        }
        let named = self.named_disks();
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                let (ni, di) = &named[i];
                let (nj, dj) = &named[j];
                let ok = di.closure(&ctx).disjoint(&dj.closure(&ctx), &ctx);
                checks.push(AxiomCheck {
                    axiom: 2,
                    description: format!("{ni}+ and {nj}+ are disjoint"),
                    passed: ok,
                    witness: (!ok).then(|| format!("{ni} = {di}, {nj} = {dj}")),
                });
            }
        }
        for i in 0..self.rank() {
            let g = &self.generators[i];
            let (b, c) = (&self.b[i], &self.c[i]);
            let outer_open = b.complement().image(g, &ctx);
            let ok = outer_open == c.closure(&ctx);
            checks.push(AxiomCheck {
                axiom: 3,
                description: format!("g{0}(P1 \\ B{0}) = C{0}+", i + 1),
                passed: ok,
                witness: (!ok).then(|| format!("image is {outer_open}")),
            });
            let outer_closed = b.closure(&ctx).complement().image(g, &ctx);
            let ok = &outer_closed == c;
            checks.push(AxiomCheck {
                axiom: 3,
                description: format!("g{0}(P1 \\ B{0}+) = C{0}", i + 1),
                passed: ok,
                witness: (!ok).then(|| format!("image is {outer_closed}")),
            });
        }
        let report = AxiomReport { checks };
        self.verified = report.passed();
        self.cache.lock().expect("cache lock").clear();
        report
    }

    /// Verify and turn the first failing axiom into an error.
    pub fn verify(&mut self) -> Result<AxiomReport> {
        let report = self.verify_good_domain();
        match report.first_failure() {
            None => Ok(report),
            Some(c) => Err(Error::AxiomViolation {
                axiom: c.axiom,
                detail: format!("{}: {}", c.description, c.witness.clone().unwrap_or_default()),
            }),
        }
    }

    pub(crate) fn letter_matrix(&self, l: Letter) -> &Homography {
        if l.inverse {
            &self.inverses[l.generator]
        } else {
            &self.generators[l.generator]
        }
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.rank() => Err(Error::UnknownGenerator(g, self.rank())),
            _ => Ok(()),
        }
    }

    /// The product of the letters' matrices, in canonical form.
    pub fn word_to_homography(&self, w: &Word) -> Result<Homography> {
        self.check_word(w)?;
        Ok(self.element(w))
    }

    pub(crate) fn element(&self, w: &Word) -> Homography {
        w.letters()
            .iter()
            .fold(Homography::identity(), |acc, &l| acc.compose(self.letter_matrix(l)))
    }

    /// Reduced words of length exactly `n`, in lexicographic order.
    pub fn enumerate_words(&self, n: usize) -> ReducedWords {
        ReducedWords::new(self.rank(), n)
    }

    /// Nontrivial words of length `<= max_len` that do not classify as
    /// hyperbolic. Empty for a Schottky group.
    pub fn non_hyperbolic_words(&self, max_len: usize, exec: Execution) -> Vec<(Word, ElementClass)> {
        let words: Vec<Word> = words_up_to(self.rank(), max_len).into_iter().skip(1).collect();
        exec.flat_map(&words, |w| {
            let class = self.element(w).classify(&self.ctx);
            if class == ElementClass::Hyperbolic {
                vec![]
            } else {
                vec![(w.clone(), class)]
            }
        })
    }

    fn cached(&self, w: &Word) -> Option<Disk> {
        self.cache.lock().expect("cache lock").get(w).cloned()
    }

    fn store(&self, w: Word, d: Disk) {
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() >= CACHE_CAPACITY {
            cache.clear();
        }
        cache.insert(w, d);
    }
}

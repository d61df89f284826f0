//! Heights of rationals and of PGL(2, Q) classes, the growth bound along
//! words, and the counting scan over positive words.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::exec::Execution;
use crate::proj::Homography;
use crate::schottky::{positive_words, words_up_to, SchottkyGroup, Word};
use crate::error::Result;

/// `max(|a|, |b|)` for `x = a/b` in lowest terms.
pub fn height_rational(x: &BigRational) -> BigInt {
    x.numer().abs().max(x.denom().abs())
}

/// Componentwise maximum; the empty tuple has height 1.
pub fn height_tuple(xs: &[BigRational]) -> BigInt {
    xs.iter().map(height_rational).max().unwrap_or_else(BigInt::one)
}

/// Largest absolute entry of an integer matrix, without canonicalizing.
pub fn height_entries(m: &[BigInt; 4]) -> BigInt {
    m.iter().map(|x| x.abs()).max().expect("four entries")
}

/// Height of the content-1 integer representative.
pub fn height_matrix(g: &Homography) -> BigInt {
    height_entries(g.entries())
}

/// `2 · max H(γ_i)`, the constant of the growth bound `H(γ) ≤ c^(ℓ(γ)+1)`.
pub fn growth_constant(group: &SchottkyGroup) -> BigInt {
    let h = group.generators().iter().map(height_matrix).max().unwrap_or_else(BigInt::one);
    h * 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCheck {
    pub c: BigInt,
    pub checked: usize,
    pub violations: Vec<Word>,
}

/// Check `H(γ) ≤ c^(ℓ+1)` on every reduced word of length `≤ max_len`.
pub fn check_growth(group: &SchottkyGroup, max_len: usize, exec: Execution) -> Result<GrowthCheck> {
    let c = growth_constant(group);
    let words = words_up_to(group.rank(), max_len);
    let violations = exec.flat_map(&words, |w| {
        let g = group.element(w);
        if height_matrix(&g) <= c.pow(w.len() as u32 + 1) {
            vec![]
        } else {
            vec![w.clone()]
        }
    });
    Ok(GrowthCheck {
        c,
        checked: words.len(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightRow {
    pub length: usize,
    pub word: Word,
    pub height: BigInt,
    /// Least `ℓ` with `H ≤ c^ℓ`.
    pub threshold_bin: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub exponent: u32,
    pub threshold: BigInt,
    pub count: usize,
}

/// Counts of nontrivial positive words with `H ≤ T` at `T = c^ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingScan {
    pub max_length: usize,
    pub generators: usize,
    /// Integer per-letter growth: the largest `c` with `c^L ≤ H(γ)` for all
    /// positive words of the maximal length `L`.
    pub c: BigInt,
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of `log Card` against `log T`.
    pub slope: f64,
    /// Smallest `log Card / log T` over rows with `ℓ ≥ 2`.
    pub min_ratio: f64,
    /// `log q / log c`.
    pub reference_slope: f64,
    pub heights: Vec<HeightRow>,
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}

pub fn upsilon_scan(group: &SchottkyGroup, max_length: usize, exec: Execution) -> Result<CountingScan> {
    group.require_verified()?;
    let max_length = max_length.max(1);
    let words: Vec<Word> = (1..=max_length).flat_map(|l| positive_words(group.rank(), l)).collect();
    let heights: Vec<BigInt> = exec.map(&words, |w| height_matrix(&group.element(w)));
    let min_top = words
        .iter()
        .zip(&heights)
        .filter(|(w, _)| w.len() == max_length)
        .map(|(_, h)| h.clone())
        .min()
        .expect("rank >= 1");
    let c = min_top.nth_root(max_length as u32).max(BigInt::from(2));
    let bin = |h: &BigInt| {
        let mut l = 0u32;
        let mut t = BigInt::one();
        while &t < h {
            t *= &c;
            l += 1;
        }
        l
    };
    let mut rows_out: Vec<HeightRow> = words
        .iter()
        .zip(&heights)
        .map(|(w, h)| HeightRow {
            length: w.len(),
            word: w.clone(),
            height: h.clone(),
            threshold_bin: bin(h),
        })
        .collect();
    rows_out.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
    let rows: Vec<ScanRow> = (1..=max_length as u32)
        .map(|l| {
            let threshold = c.pow(l);
            let count = heights.iter().filter(|h| **h <= threshold).count();
            ScanRow {
                exponent: l,
                threshold,
                count,
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.count > 0)
        .map(|r| (ln_big(&r.threshold), (r.count as f64).ln()))
        .collect();
    let slope = least_squares_slope(&points);
    let min_ratio = rows
        .iter()
        .filter(|r| r.exponent >= 2)
        .map(|r| (r.count.max(1) as f64).ln() / ln_big(&r.threshold))
        .fold(f64::INFINITY, f64::min);
    Ok(CountingScan {
        max_length,
        generators: group.rank(),
        reference_slope: (group.rank() as f64).ln() / ln_big(&c),
        c,
        rows,
        slope,
        min_ratio,
        heights: rows_out,
    })
}

//! Twist index family, index of coincidence, and Friedman key-length estimate.
//!
//! All indices work on coset letter frequencies. For a text of length N split
//! into m cosets, each coset's 26 relative frequencies sorted ascending form
//! its sample signature; the twist of a signature is the mass of its top half
//! minus the mass of its bottom half. The twist index T(M,m) is 100 times the
//! average twist over the m cosets, so 0 <= T <= 100, and T is large when the
//! cosets look monoalphabetic. T+ and T++ sharpen T's argmax: T+(m) subtracts
//! the mean of T(1..m-1), T++(m) subtracts the mean of the two neighbors.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::text::{coset_letter_counts, NormalizedText};

/// Expected index of coincidence of English plaintext.
pub const ENGLISH_IC: f64 = 0.065;
/// Index of coincidence of uniform random letters over a 26-letter alphabet.
pub const RANDOM_IC: f64 = 1.0 / 26.0;

/// The 26 relative letter frequencies of one coset, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSignature {
    freqs: [f64; 26],
}

impl SampleSignature {
    /// Ascending relative frequencies; zeros pad letters absent from the coset.
    pub fn freqs(&self) -> &[f64; 26] {
        &self.freqs
    }
}

/// Signature of a coset given as letter codes 0..=25.
pub fn sample_signature(coset: &[u8]) -> Result<SampleSignature> {
    if coset.is_empty() {
        return Err(Error::EmptyCoset);
    }
    let mut counts = [0u32; 26];
    for &l in coset {
        if l > 25 {
            return Err(Error::LetterOutOfRange(l));
        }
        counts[l as usize] += 1;
    }
    counts.sort_unstable();
    let len = coset.len() as f64;
    let mut freqs = [0.0; 26];
    for (f, &c) in freqs.iter_mut().zip(&counts) {
        *f = f64::from(c) / len;
    }
    Ok(SampleSignature { freqs })
}

/// Top-13 mass minus bottom-13 mass of a signature; in [0, 1]. Equals 1
/// exactly when the coset uses at most 13 distinct letters, 0 for a uniform
/// signature.
pub fn twist_of_signature(sig: &SampleSignature) -> f64 {
    let top: f64 = sig.freqs[13..].iter().sum();
    let bottom: f64 = sig.freqs[..13].iter().sum();
    top - bottom
}

/// Twist of one coset straight from integer letter counts. Keeping the
/// subtraction in integers makes the "all mass in the top half" case come out
/// as exactly 1.0, which in turn makes T(M,m) exactly 100 whenever every
/// coset has at most 13 distinct letters.
fn coset_twist(counts: &[u32; 26]) -> f64 {
    let mut sorted = *counts;
    sorted.sort_unstable();
    let top: u64 = sorted[13..].iter().map(|&c| u64::from(c)).sum();
    let bottom: u64 = sorted[..13].iter().map(|&c| u64::from(c)).sum();
    (top as f64 - bottom as f64) / (top + bottom) as f64
}

/// T(M,m): 100 times the mean coset twist. Needs 1 <= m <= N.
pub fn twist_index(text: &NormalizedText, m: usize) -> Result<f64> {
    let counts = coset_letter_counts(text, m)?;
    let sum: f64 = counts.iter().map(coset_twist).sum();
    Ok((100.0 * sum) / m as f64)
}

/// T(M,m) for m = 1..=m_max.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistSeries {
    values: Vec<f64>,
}

impl TwistSeries {
    pub fn m_max(&self) -> usize {
        self.values.len()
    }

    /// T(M,m) by 1-based m.
    pub fn value(&self, m: usize) -> f64 {
        self.values[m - 1]
    }

    /// `values()[i]` = T(M, i+1).
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The series T(M,1)..T(M,m_max). Needs 1 <= m_max <= N.
pub fn twist_series(text: &NormalizedText, m_max: usize) -> Result<TwistSeries> {
    if m_max < 1 || m_max > text.len() {
        return Err(Error::ModulusOutOfRange {
            m: m_max,
            n: text.len(),
        });
    }
    let values = (1..=m_max)
        .map(|m| twist_index(text, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwistSeries { values })
}

/// Like [`twist_series`] but with one extra value at m_max+1, which the T++
/// central difference needs at its top end. Past m = N the coset partition
/// degenerates, but every m > q = N/12 has T = 100 (cosets of at most 12
/// letters cannot use more than 13 distinct ones), so the extension is the
/// constant 100 there.
pub fn twist_series_extended(text: &NormalizedText, m_max: usize) -> Result<TwistSeries> {
    let mut series = twist_series(text, m_max)?;
    let next = m_max + 1;
    if next <= text.len() {
        series.values.push(twist_index(text, next)?);
    } else {
        series.values.push(100.0);
    }
    Ok(series)
}

/// T+(M,m) = T(M,m) - mean of T(M,1)..T(M,m-1), for m = 2..=m_max;
/// `out[i]` sits at m = i+2. Undefined at m = 1.
pub fn twist_plus_series(series: &TwistSeries) -> Result<Vec<f64>> {
    let m_max = series.m_max();
    if m_max < 2 {
        return Err(Error::SeriesTooShort {
            have: m_max,
            need: 2,
        });
    }
    let mut out = Vec::with_capacity(m_max - 1);
    let mut acc = 0.0;
    for m in 2..=m_max {
        acc += series.values[m - 2];
        out.push(series.values[m - 1] - acc / (m - 1) as f64);
    }
    Ok(out)
}

/// T++(M,m) = T(M,m) - (T(M,m-1) + T(M,m+1)) / 2 for m = 2..=m_max, taking a
/// series already extended through m_max+1 (see [`twist_series_extended`]);
/// `out[i]` sits at m = i+2.
pub fn twist_plus_plus_series(extended: &TwistSeries) -> Result<Vec<f64>> {
    let top = extended.m_max();
    if top < 3 {
        return Err(Error::SeriesTooShort { have: top, need: 3 });
    }
    let v = &extended.values;
    Ok((2..top)
        .map(|m| v[m - 1] - 0.5 * (v[m - 2] + v[m]))
        .collect())
}

/// Contiguous inclusive range of candidate key lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MDomain {
    pub lo: usize,
    pub hi: usize,
}

impl MDomain {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || lo > hi {
            return Err(Error::EmptyDomain { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, m: usize) -> bool {
        self.lo <= m && m <= self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for MDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.lo, self.hi)
    }
}

/// Smallest m in `domain` maximizing `values`, where `values[i]` sits at
/// m = first_m + i; ties break toward the smaller m. Returns (m, value).
pub fn argmax_over_domain(first_m: usize, values: &[f64], domain: MDomain) -> Result<(usize, f64)> {
    if domain.lo < first_m {
        return Err(Error::InvalidDomain {
            lo: domain.lo,
            hi: domain.hi,
            min_lo: first_m,
            max_hi: first_m + values.len().saturating_sub(1),
        });
    }
    if domain.hi - first_m + 1 > values.len() {
        return Err(Error::SeriesTooShort {
            have: first_m + values.len() - 1,
            need: domain.hi,
        });
    }
    let mut best_m = domain.lo;
    let mut best = values[domain.lo - first_m];
    for m in domain.lo + 1..=domain.hi {
        let v = values[m - first_m];
        if v > best {
            best = v;
            best_m = m;
        }
    }
    Ok((best_m, best))
}

/// Probability that two distinct positions of the text hold the same letter:
/// sum of f(f-1) over per-letter counts f, divided by N(N-1). Needs N >= 2.
pub fn index_of_coincidence(text: &NormalizedText) -> Result<f64> {
    let n = text.len();
    if n < 2 {
        return Err(Error::TextTooShort(n));
    }
    let mut counts = [0u64; 26];
    for &l in text.letters() {
        counts[l as usize] += 1;
    }
    let coincidences: u64 = counts.iter().map(|&f| f * f.saturating_sub(1)).sum();
    Ok(coincidences as f64 / (n as f64 * (n - 1) as f64))
}

/// Friedman key-length estimate
///   k = (kp - kr) * N / ((kp - IC) + N * (IC - kr))
/// with kp = [`ENGLISH_IC`] and kr = [`RANDOM_IC`] = 1/26. The anchors are
/// exact: IC = kp gives 1 (one English-like alphabet), IC = kr gives N (as
/// scrambled as N independent alphabets). Errors when the denominator is not
/// positive, i.e. the text is too close to uniform for the model.
pub fn friedman_estimate(text: &NormalizedText) -> Result<f64> {
    let ic = index_of_coincidence(text)?;
    let n = text.len() as f64;
    let denom = (ENGLISH_IC - ic) + n * (ic - RANDOM_IC);
    if denom <= 0.0 {
        return Err(Error::FriedmanUndefined { ic });
    }
    Ok((ENGLISH_IC - RANDOM_IC) * n / denom)
}

/// Estimation method named in reports, configs, and CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    IcFriedman,
    Kasiski,
    Twist,
    TwistPlus,
    TwistPlusPlus,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::IcFriedman => "ic_friedman",
            Method::Kasiski => "kasiski",
            Method::Twist => "twist",
            Method::TwistPlus => "twist_plus",
            Method::TwistPlusPlus => "twist_plus_plus",
        }
    }

    /// Smallest admissible lower domain bound: T+ and T++ are undefined at
    /// m = 1, plain twist is not.
    pub fn min_domain_lo(self) -> usize {
        match self {
            Method::Twist => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ic_friedman" => Ok(Method::IcFriedman),
            "kasiski" => Ok(Method::Kasiski),
            "twist" => Ok(Method::Twist),
            "twist_plus" => Ok(Method::TwistPlus),
            "twist_plus_plus" => Ok(Method::TwistPlusPlus),
            other => Err(format!(
                "unknown method '{other}' (expected ic_friedman, kasiski, twist, twist_plus, or twist_plus_plus)"
            )),
        }
    }
}

/// A key-length estimate: argmax methods land on an integer m, the Friedman
/// estimator yields a fractional length.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimate {
    KeyLength(usize),
    Fractional(f64),
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimate::KeyLength(m) => write!(f, "{m}"),
            Estimate::Fractional(x) => write!(f, "{x:.4}"),
        }
    }
}

/// What an estimate was computed from.
#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    /// (m, index value) pairs over the searched domain.
    IndexSeries(Vec<(usize, f64)>),
    /// Index of coincidence feeding the Friedman formula.
    Coincidence { ic: f64 },
}

/// One method's verdict on one text.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyLengthReport {
    pub method: Method,
    pub estimate: Estimate,
    pub domain: Option<MDomain>,
    pub evidence: Evidence,
}

fn check_domain(text: &NormalizedText, domain: MDomain, method: Method) -> Result<()> {
    let min_lo = method.min_domain_lo();
    if domain.lo < min_lo || domain.hi > text.len() {
        return Err(Error::InvalidDomain {
            lo: domain.lo,
            hi: domain.hi,
            min_lo,
            max_hi: text.len(),
        });
    }
    Ok(())
}

fn series_report(
    method: Method,
    domain: MDomain,
    first_m: usize,
    values: &[f64],
) -> Result<KeyLengthReport> {
    let (m, _) = argmax_over_domain(first_m, values, domain)?;
    let evidence = (domain.lo..=domain.hi)
        .map(|mm| (mm, values[mm - first_m]))
        .collect();
    Ok(KeyLengthReport {
        method,
        estimate: Estimate::KeyLength(m),
        domain: Some(domain),
        evidence: Evidence::IndexSeries(evidence),
    })
}

/// Argmax of T over the domain.
pub fn estimate_twist(text: &NormalizedText, domain: MDomain) -> Result<KeyLengthReport> {
    check_domain(text, domain, Method::Twist)?;
    let series = twist_series(text, domain.hi)?;
    series_report(Method::Twist, domain, 1, series.values())
}

/// Argmax of T+ over the domain (domain.lo must be >= 2).
pub fn estimate_twist_plus(text: &NormalizedText, domain: MDomain) -> Result<KeyLengthReport> {
    check_domain(text, domain, Method::TwistPlus)?;
    let series = twist_series(text, domain.hi)?;
    let plus = twist_plus_series(&series)?;
    series_report(Method::TwistPlus, domain, 2, &plus)
}

/// Argmax of T++ over the domain (domain.lo must be >= 2).
pub fn estimate_twist_plus_plus(text: &NormalizedText, domain: MDomain) -> Result<KeyLengthReport> {
    check_domain(text, domain, Method::TwistPlusPlus)?;
    let extended = twist_series_extended(text, domain.hi)?;
    let plus_plus = twist_plus_plus_series(&extended)?;
    series_report(Method::TwistPlusPlus, domain, 2, &plus_plus)
}

/// Friedman estimate wrapped as a report; no domain applies.
pub fn estimate_ic_friedman(text: &NormalizedText) -> Result<KeyLengthReport> {
    let ic = index_of_coincidence(text)?;
    let estimate = friedman_estimate(text)?;
    Ok(KeyLengthReport {
        method: Method::IcFriedman,
        estimate: Estimate::Fractional(estimate),
        domain: None,
        evidence: Evidence::Coincidence { ic },
    })
}

/// One row of the tabulated index family; T+ and T++ are undefined at m = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexRow {
    pub m: usize,
    pub t: f64,
    pub t_plus: Option<f64>,
    pub t_plus_plus: Option<f64>,
}

/// Rows m = 1..=m_max with the whole index family. The T++ column at m_max
/// uses the extended series, so it is defined on every row past the first.
pub fn index_table(text: &NormalizedText, m_max: usize) -> Result<Vec<IndexRow>> {
    let extended = twist_series_extended(text, m_max)?;
    let plus = twist_plus_series(&extended)?;
    let plus_plus = twist_plus_plus_series(&extended)?;
    Ok((1..=m_max)
        .map(|m| IndexRow {
            m,
            t: extended.value(m),
            t_plus: (m >= 2).then(|| plus[m - 2]),
            t_plus_plus: (m >= 2).then(|| plus_plus[m - 2]),
        })
        .collect())
}

//! Monte-Carlo accuracy grids, failure breakdowns, and statistical
//! verification of the coset-refinement monotonicity inequality.
//!
//! Determinism contract: every result is a pure function of the config and
//! its master seed. Each (text, key) trial draws from its own derived stream
//! (see [`rng`]), so the parallel and sequential runners produce bit-identical
//! results and cells may execute in any order. Methods share trials: for a
//! given trial every method sees the same plaintext, key, and ciphertext,
//! which makes the per-method success rates directly comparable.

pub mod corpus;
pub mod rng;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{
    argmax_over_domain, friedman_estimate, twist_index, twist_plus_plus_series, twist_plus_series,
    twist_series_extended, MDomain, Method,
};
use crate::text::{vigenere_encrypt, NormalizedText, VigenereKey};

pub use corpus::{load_corpora, sample_corpus_segment, synthetic_english};
use rng::rng_for;

// stream-purpose tags keep text, key, and lemma-case draws independent
const TEXT_TAG: u64 = 1;
const KEY_TAG: u64 = 2;
const LEMMA_TAG: u64 = 3;

/// Grid description; serializes to/from the JSON config format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub text_lengths: Vec<usize>,
    pub key_lengths: Vec<usize>,
    pub m_domain: MDomain,
    pub texts_per_cell: usize,
    pub keys_per_text: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub corpus_paths: Vec<PathBuf>,
}

impl ExperimentConfig {
    /// Checks the cross-field rules that the type system cannot.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.text_lengths.is_empty() {
            return fail("text_lengths must be nonempty".into());
        }
        if self.key_lengths.is_empty() {
            return fail("key_lengths must be nonempty".into());
        }
        if self.methods.is_empty() {
            return fail("methods must be nonempty".into());
        }
        if self.texts_per_cell < 1 || self.keys_per_text < 1 {
            return fail("texts_per_cell and keys_per_text must be at least 1".into());
        }
        if self.methods.contains(&Method::Kasiski) {
            return fail("kasiski emits distance evidence, not a single estimate; it cannot join an accuracy grid".into());
        }
        let max_k = *self.key_lengths.iter().max().expect("nonempty");
        if self.m_domain.hi < max_k {
            return fail(format!(
                "m_domain {} cannot contain the largest tested key length {max_k}",
                self.m_domain
            ));
        }
        let min_lo = self
            .methods
            .iter()
            .map(|m| m.min_domain_lo())
            .max()
            .expect("nonempty");
        if self.m_domain.lo < min_lo {
            return fail(format!(
                "m_domain {} starts below {min_lo}, the smallest m where every configured method is defined",
                self.m_domain
            ));
        }
        if let Some(&n) = self.text_lengths.iter().find(|&&n| n <= self.m_domain.hi) {
            return fail(format!(
                "text length {n} is too short for m_domain {}; need N > m_hi",
                self.m_domain
            ));
        }
        if let Some(&k) = self.key_lengths.iter().find(|&&k| k < 1) {
            return fail(format!("key length {k} is below 1"));
        }
        Ok(())
    }
}

/// Success tally for one (N, k, method) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub domain: MDomain,
    pub trials: u64,
    pub successes: u64,
    /// predicted m -> count; key 0 counts trials where the method produced
    /// no estimate (Friedman on a too-uniform text).
    pub histogram: BTreeMap<usize, u64>,
    /// Keys drawn with replacement that repeated an earlier key of the same
    /// text; identical across the methods of one (N, k) cell.
    pub duplicate_keys: u64,
}

impl CellResult {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// All cells of a grid run, ordered by (N, k, config method order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentGridResult {
    pub domain: MDomain,
    pub cells: Vec<CellResult>,
}

impl ExperimentGridResult {
    pub fn cell(&self, n: usize, k: usize, method: Method) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.k == k && c.method == method)
    }
}

/// Largest d with 1 < d < k dividing k; `None` for primes. Needs k >= 2.
pub fn largest_nontrivial_divisor(k: usize) -> Result<Option<usize>> {
    if k < 2 {
        return Err(Error::KeyLengthTooSmall(k));
    }
    let smallest_prime_factor = (2..=k).find(|&p| k.is_multiple_of(p)).expect("k >= 2");
    Ok(if smallest_prime_factor == k {
        None
    } else {
        Some(k / smallest_prime_factor)
    })
}

/// Uniform random key of length k, resampled until its minimal period is
/// exactly k, so a "length-4" key can never behave like a length-2 one.
pub fn generate_key(k: usize, rng: &mut impl Rng) -> Result<VigenereKey> {
    if k < 1 {
        return Err(Error::EmptyKey);
    }
    loop {
        let shifts: Vec<u8> = (0..k).map(|_| rng.random_range(0..26u8)).collect();
        let key = VigenereKey::from_shifts(shifts).expect("shifts in range");
        if key.minimal_period() == k {
            return Ok(key);
        }
    }
}

/// The integer prediction one method makes for one ciphertext; 0 when the
/// method cannot produce an estimate. Friedman's fractional estimate is
/// rounded to the nearest integer (floored at 1) so it can be scored against
/// the true key length like the argmax methods.
pub fn predict(cipher: &NormalizedText, method: Method, domain: MDomain) -> Result<usize> {
    let prediction = match method {
        Method::Twist => Some(crate::metrics::estimate_twist(cipher, domain)?),
        Method::TwistPlus => Some(crate::metrics::estimate_twist_plus(cipher, domain)?),
        Method::TwistPlusPlus => Some(crate::metrics::estimate_twist_plus_plus(cipher, domain)?),
        Method::IcFriedman => {
            return Ok(match friedman_estimate(cipher) {
                Ok(est) => (est.round() as usize).max(1),
                Err(Error::FriedmanUndefined { .. }) => 0,
                Err(e) => return Err(e),
            });
        }
        Method::Kasiski => {
            return Err(Error::InvalidConfig(
                "kasiski does not produce a single prediction".into(),
            ))
        }
    };
    let report = prediction.expect("argmax methods covered above");
    match report.estimate {
        crate::metrics::Estimate::KeyLength(m) => Ok(m),
        crate::metrics::Estimate::Fractional(_) => unreachable!("argmax methods are integral"),
    }
}

/// One encrypt-and-estimate trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub method: Method,
    pub domain: MDomain,
    pub key: VigenereKey,
    pub predicted: usize,
    pub success: bool,
}

/// Draws a fresh minimal-period-k key from `rng`, encrypts `plain`, and runs
/// one method's estimator over `domain`. Success means the predicted m equals
/// k exactly; a prediction of a divisor or multiple of k still counts as a
/// failure.
pub fn run_trial(
    plain: &NormalizedText,
    k: usize,
    method: Method,
    domain: MDomain,
    rng: &mut impl Rng,
) -> Result<TrialRecord> {
    let key = generate_key(k, rng)?;
    let cipher = vigenere_encrypt(plain, &key);
    let predicted = predict(&cipher, method, domain)?;
    Ok(TrialRecord {
        method,
        domain,
        key,
        predicted,
        success: predicted == k,
    })
}

/// Per-method predictions for one ciphertext, computing the twist series only
/// once. Vector order matches `methods`.
fn predict_all(cipher: &NormalizedText, methods: &[Method], domain: MDomain) -> Result<Vec<usize>> {
    let wants_twist_family = methods
        .iter()
        .any(|m| matches!(m, Method::Twist | Method::TwistPlus | Method::TwistPlusPlus));
    let (t_vals, tp_vals, tpp_vals) = if wants_twist_family {
        let extended = twist_series_extended(cipher, domain.hi)?;
        let tp = twist_plus_series(&extended)?;
        let tpp = twist_plus_plus_series(&extended)?;
        (extended.values().to_vec(), tp, tpp)
    } else {
        (Vec::new(), Vec::new(), Vec::new())
    };

    methods
        .iter()
        .map(|&method| match method {
            Method::Twist => Ok(argmax_over_domain(1, &t_vals, domain)?.0),
            Method::TwistPlus => Ok(argmax_over_domain(2, &tp_vals, domain)?.0),
            Method::TwistPlusPlus => Ok(argmax_over_domain(2, &tpp_vals, domain)?.0),
            Method::IcFriedman => predict(cipher, Method::IcFriedman, domain),
            Method::Kasiski => Err(Error::InvalidConfig(
                "kasiski does not produce a single prediction".into(),
            )),
        })
        .collect()
}

/// Runs every trial of one (N, k) cell and tallies per-method results.
fn run_cell(
    config: &ExperimentConfig,
    corpus: &NormalizedText,
    n: usize,
    k: usize,
) -> Result<Vec<CellResult>> {
    let methods = &config.methods;
    let mut successes = vec![0u64; methods.len()];
    let mut histograms = vec![BTreeMap::<usize, u64>::new(); methods.len()];
    let mut trials = 0u64;
    let mut duplicate_keys = 0u64;

    for text_idx in 0..config.texts_per_cell {
        let mut text_rng = rng_for(
            config.master_seed,
            &[TEXT_TAG, n as u64, k as u64, text_idx as u64],
        );
        let plain = sample_corpus_segment(corpus, n, &mut text_rng)?;
        let mut seen_keys: Vec<Vec<u8>> = Vec::with_capacity(config.keys_per_text);

        for key_idx in 0..config.keys_per_text {
            let mut key_rng = rng_for(
                config.master_seed,
                &[KEY_TAG, n as u64, k as u64, text_idx as u64, key_idx as u64],
            );
            let key = generate_key(k, &mut key_rng)?;
            if seen_keys.iter().any(|s| s == key.shifts()) {
                duplicate_keys += 1;
            } else {
                seen_keys.push(key.shifts().to_vec());
            }

            let cipher = vigenere_encrypt(&plain, &key);
            let predictions = predict_all(&cipher, methods, config.m_domain)?;
            trials += 1;
            for (i, &p) in predictions.iter().enumerate() {
                *histograms[i].entry(p).or_insert(0) += 1;
                if p == k {
                    successes[i] += 1;
                }
            }
        }
    }

    Ok(methods
        .iter()
        .enumerate()
        .map(|(i, &method)| CellResult {
            n,
            k,
            method,
            domain: config.m_domain,
            trials,
            successes: successes[i],
            histogram: std::mem::take(&mut histograms[i]),
            duplicate_keys,
        })
        .collect())
}

fn grid_cells(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    let mut cells = Vec::with_capacity(config.text_lengths.len() * config.key_lengths.len());
    for &n in &config.text_lengths {
        for &k in &config.key_lengths {
            cells.push((n, k));
        }
    }
    cells
}

/// Grid run against an in-memory corpus; parallel over (N, k) cells when the
/// `parallel` feature is on, sequential otherwise. Results are identical
/// either way.
pub fn run_grid_on(
    config: &ExperimentConfig,
    corpus: &NormalizedText,
) -> Result<ExperimentGridResult> {
    config.validate()?;
    let coords = grid_cells(config);

    #[cfg(feature = "parallel")]
    let per_cell: Result<Vec<Vec<CellResult>>> = coords
        .par_iter()
        .map(|&(n, k)| run_cell(config, corpus, n, k))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per_cell: Result<Vec<Vec<CellResult>>> = coords
        .iter()
        .map(|&(n, k)| run_cell(config, corpus, n, k))
        .collect();

    Ok(ExperimentGridResult {
        domain: config.m_domain,
        cells: per_cell?.into_iter().flatten().collect(),
    })
}

/// Always-sequential twin of [`run_grid_on`]; the benchmark baseline.
pub fn run_grid_on_sequential(
    config: &ExperimentConfig,
    corpus: &NormalizedText,
) -> Result<ExperimentGridResult> {
    config.validate()?;
    let per_cell: Result<Vec<Vec<CellResult>>> = grid_cells(config)
        .iter()
        .map(|&(n, k)| run_cell(config, corpus, n, k))
        .collect();
    Ok(ExperimentGridResult {
        domain: config.m_domain,
        cells: per_cell?.into_iter().flatten().collect(),
    })
}

/// Loads the corpora named by the config, then runs the grid.
pub fn run_grid(config: &ExperimentConfig) -> Result<ExperimentGridResult> {
    config.validate()?;
    let corpus = load_corpora(&config.corpus_paths)
        .map_err(|e| Error::InvalidConfig(format!("corpus unreadable: {e}")))?;
    run_grid_on(config, &corpus)
}

/// How one method's failures distribute over the characteristic wrong answer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureBreakdown {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub trials: u64,
    pub incorrect: u64,
    /// Largest nontrivial divisor of k; `None` when k is prime.
    pub divisor: Option<usize>,
    /// Failures that predicted exactly that divisor.
    pub divisor_predictions: u64,
    /// divisor_predictions as a percentage of incorrect; `None` when there
    /// were no failures.
    pub percentage: Option<f64>,
}

/// Failure profile of one grid cell: how many trials missed k, and how many
/// of those landed on the largest nontrivial divisor of k.
pub fn failure_breakdown(
    grid: &ExperimentGridResult,
    method: Method,
    n: usize,
    k: usize,
) -> Result<FailureBreakdown> {
    let cell = grid.cell(n, k, method).ok_or(Error::MissingCell {
        n,
        k,
        method: method.name().to_string(),
    })?;
    let incorrect = cell.trials - cell.successes;
    let divisor = largest_nontrivial_divisor(k)?;
    let divisor_predictions = divisor
        .and_then(|d| cell.histogram.get(&d).copied())
        .unwrap_or(0);
    let percentage = (incorrect > 0).then(|| 100.0 * divisor_predictions as f64 / incorrect as f64);
    Ok(FailureBreakdown {
        n,
        k,
        method,
        trials: cell.trials,
        incorrect,
        divisor,
        divisor_predictions,
        percentage,
    })
}

/// Outcome of one monotonicity case: whether refining an m-partition into a
/// (lambda*m)-partition kept the twist index from decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityVerdict {
    pub m: usize,
    pub lambda: usize,
    pub t_m: f64,
    pub t_lambda_m: f64,
    /// Whether lambda divides the size of every m-coset (the hypothesis under
    /// which the inequality is guaranteed).
    pub hypothesis_holds: bool,
    /// T(M,m) <= T(M,lambda*m), decided in exact integer arithmetic.
    pub inequality_holds: bool,
}

/// Exact twist numerator: T(M,m) = 100 * P / (m * n * (n+1)) with n = N/m
/// (floor) and P an integer, because every coset size divides n*(n+1).
fn twist_numerator(text: &NormalizedText, m: usize) -> (i128, i128) {
    let counts = crate::text::coset_letter_counts(text, m).expect("caller checked 1 <= m <= N");
    let n = (text.len() / m) as i128;
    let scale = n * (n + 1);
    let mut p: i128 = 0;
    for row in &counts {
        let mut sorted = *row;
        sorted.sort_unstable();
        let top: i128 = sorted[13..].iter().map(|&c| i128::from(c)).sum();
        let bottom: i128 = sorted[..13].iter().map(|&c| i128::from(c)).sum();
        let size = top + bottom; // n or n+1
        p += (top - bottom) * (scale / size);
    }
    (p, scale)
}

/// Compares T(M,m) against T(M,lambda*m) exactly. Needs m, lambda >= 1 and
/// lambda*m <= N.
pub fn verify_monotonicity_case(
    text: &NormalizedText,
    m: usize,
    lambda: usize,
) -> Result<MonotonicityVerdict> {
    let n_text = text.len();
    if m < 1 || lambda < 1 || m.checked_mul(lambda).is_none_or(|lm| lm > n_text) {
        return Err(Error::MonotonicityCaseOutOfRange {
            m,
            lambda,
            n: n_text,
        });
    }

    // lambda divides every m-coset size iff lambda = 1, or m | N and
    // lambda | N/m (unequal coset sizes n and n+1 admit no common divisor > 1)
    let hypothesis_holds =
        lambda == 1 || (n_text.is_multiple_of(m) && (n_text / m).is_multiple_of(lambda));

    // T(m) <= T(lambda m)
    //   <=>  P_m / (m n (n+1)) <= P_lm / (lambda m n' (n'+1))
    //   <=>  P_m * lambda * n'(n'+1) <= P_lm * n(n+1)
    let (p_m, scale_m) = twist_numerator(text, m);
    let (p_lm, scale_lm) = twist_numerator(text, lambda * m);
    let inequality_holds = p_m * (lambda as i128) * scale_lm <= p_lm * scale_m;

    Ok(MonotonicityVerdict {
        m,
        lambda,
        t_m: twist_index(text, m)?,
        t_lambda_m: twist_index(text, lambda * m)?,
        hypothesis_holds,
        inequality_holds,
    })
}

/// A violating case, kept verbatim so it can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityCounterexample {
    pub case_index: u64,
    pub text: String,
    pub verdict: MonotonicityVerdict,
}

/// Tally of a randomized monotonicity run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicitySummary {
    pub cases: u64,
    pub hypothesis_true_cases: u64,
    pub equalities: u64,
    pub violations: Vec<MonotonicityCounterexample>,
}

/// Case i of the mass run: a uniform random text of 60..=600 letters and a
/// random (m, lambda) with lambda * m <= q = N/12, biased toward lambda >= 2
/// because lambda = 1 compares a partition with itself.
fn monotonicity_case(master_seed: u64, i: u64) -> (NormalizedText, usize, usize) {
    let mut rng = rng_for(master_seed, &[LEMMA_TAG, i]);
    let n: usize = rng.random_range(60..=600);
    let letters: Vec<u8> = (0..n).map(|_| rng.random_range(0..26u8)).collect();
    let text = NormalizedText::from_letters(letters).expect("codes in range");
    let q = n / 12;
    let m = rng.random_range(1..=(q / 2).max(1));
    let lambda_max = q / m;
    let lambda = if lambda_max >= 2 {
        rng.random_range(2..=lambda_max)
    } else {
        1
    };
    (text, m, lambda)
}

fn summarize_cases(
    results: impl Iterator<Item = (u64, NormalizedText, MonotonicityVerdict)>,
) -> MonotonicitySummary {
    let mut summary = MonotonicitySummary {
        cases: 0,
        hypothesis_true_cases: 0,
        equalities: 0,
        violations: Vec::new(),
    };
    for (i, text, verdict) in results {
        summary.cases += 1;
        if verdict.hypothesis_holds {
            summary.hypothesis_true_cases += 1;
        }
        if verdict.t_m == verdict.t_lambda_m {
            summary.equalities += 1;
        }
        if !verdict.inequality_holds {
            summary.violations.push(MonotonicityCounterexample {
                case_index: i,
                text: text.to_string(),
                verdict,
            });
        }
    }
    summary
}

fn run_monotonicity_case(master_seed: u64, i: u64) -> (u64, NormalizedText, MonotonicityVerdict) {
    let (text, m, lambda) = monotonicity_case(master_seed, i);
    let verdict = verify_monotonicity_case(&text, m, lambda).expect("case construction in range");
    (i, text, verdict)
}

/// Runs `cases` random monotonicity checks; parallel when the `parallel`
/// feature is on. Violations (expected: none) are returned verbatim.
pub fn verify_monotonicity_mass(cases: u64, master_seed: u64) -> MonotonicitySummary {
    #[cfg(feature = "parallel")]
    {
        let results: Vec<_> = (0..cases)
            .into_par_iter()
            .map(|i| run_monotonicity_case(master_seed, i))
            .collect();
        summarize_cases(results.into_iter())
    }
    #[cfg(not(feature = "parallel"))]
    verify_monotonicity_mass_sequential(cases, master_seed)
}

/// Always-sequential twin of [`verify_monotonicity_mass`].
pub fn verify_monotonicity_mass_sequential(cases: u64, master_seed: u64) -> MonotonicitySummary {
    summarize_cases((0..cases).map(|i| run_monotonicity_case(master_seed, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Estimate;

    #[test]
    fn nontrivial_divisors() {
        assert_eq!(largest_nontrivial_divisor(8).unwrap(), Some(4));
        assert_eq!(largest_nontrivial_divisor(7).unwrap(), None);
        assert_eq!(largest_nontrivial_divisor(10).unwrap(), Some(5));
        assert_eq!(largest_nontrivial_divisor(2).unwrap(), None);
        assert_eq!(largest_nontrivial_divisor(12).unwrap(), Some(6));
        assert!(largest_nontrivial_divisor(1).is_err());
    }

    #[test]
    fn generated_keys_have_full_period() {
        let mut rng = rng_for(99, &[KEY_TAG]);
        for k in 1..=12 {
            for _ in 0..50 {
                let key = generate_key(k, &mut rng).unwrap();
                assert_eq!(key.len(), k);
                assert_eq!(key.minimal_period(), k);
            }
        }
    }

    #[test]
    fn trivial_grid_counts_one_trial() {
        let corpus = corpus::synthetic_english(2_000, 5);
        let config = ExperimentConfig {
            text_lengths: vec![150],
            key_lengths: vec![3],
            m_domain: MDomain::new(2, 10).unwrap(),
            texts_per_cell: 1,
            keys_per_text: 1,
            methods: vec![Method::TwistPlusPlus],
            master_seed: 7,
            corpus_paths: vec![],
        };
        let grid = run_grid_on(&config, &corpus).unwrap();
        assert_eq!(grid.cells.len(), 1);
        let cell = &grid.cells[0];
        assert_eq!(cell.trials, 1);
        assert_eq!(cell.histogram.values().sum::<u64>(), 1);
    }

    #[test]
    fn grid_is_deterministic_and_parallel_agnostic() {
        let corpus = corpus::synthetic_english(5_000, 5);
        let config = ExperimentConfig {
            text_lengths: vec![120, 200],
            key_lengths: vec![2, 5],
            m_domain: MDomain::new(2, 12).unwrap(),
            texts_per_cell: 3,
            keys_per_text: 2,
            methods: vec![
                Method::Twist,
                Method::TwistPlus,
                Method::TwistPlusPlus,
                Method::IcFriedman,
            ],
            master_seed: 42,
            corpus_paths: vec![],
        };
        let a = run_grid_on(&config, &corpus).unwrap();
        let b = run_grid_on(&config, &corpus).unwrap();
        let c = run_grid_on_sequential(&config, &corpus).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        for cell in &a.cells {
            assert_eq!(cell.histogram.values().sum::<u64>(), cell.trials);
            assert!(cell.successes <= cell.trials);
        }
    }

    #[test]
    fn config_validation_rejects_bad_shapes() {
        let base = ExperimentConfig {
            text_lengths: vec![200],
            key_lengths: vec![4],
            m_domain: MDomain::new(2, 15).unwrap(),
            texts_per_cell: 1,
            keys_per_text: 1,
            methods: vec![Method::Twist],
            master_seed: 0,
            corpus_paths: vec![],
        };
        assert!(base.validate().is_ok());
        let mut bad = base.clone();
        bad.m_domain = MDomain::new(2, 3).unwrap(); // cannot contain k = 4
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.methods = vec![Method::Kasiski];
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.methods = vec![];
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.text_lengths = vec![10]; // shorter than m_hi
        assert!(bad.validate().is_err());
    }

    #[test]
    fn failure_breakdown_math() {
        // synthesize a grid result with the canonical histogram shape
        let mut histogram = BTreeMap::new();
        histogram.insert(4, 661u64);
        histogram.insert(8, 3279);
        histogram.insert(3, 30);
        histogram.insert(12, 30);
        let grid = ExperimentGridResult {
            domain: MDomain::new(2, 20).unwrap(),
            cells: vec![CellResult {
                n: 200,
                k: 8,
                method: Method::TwistPlusPlus,
                domain: MDomain::new(2, 20).unwrap(),
                trials: 4000,
                successes: 3279,
                histogram,
                duplicate_keys: 0,
            }],
        };
        let b = failure_breakdown(&grid, Method::TwistPlusPlus, 200, 8).unwrap();
        assert_eq!(b.incorrect, 721);
        assert_eq!(b.divisor, Some(4));
        assert_eq!(b.divisor_predictions, 661);
        let pct = b.percentage.unwrap();
        assert!((pct - 91.68).abs() < 0.005, "got {pct}");
        assert!(failure_breakdown(&grid, Method::Twist, 200, 8).is_err());
    }

    #[test]
    fn breakdown_of_allcorrect_cell_has_no_percentage() {
        let mut histogram = BTreeMap::new();
        histogram.insert(6, 10u64);
        let grid = ExperimentGridResult {
            domain: MDomain::new(2, 20).unwrap(),
            cells: vec![CellResult {
                n: 300,
                k: 6,
                method: Method::TwistPlus,
                domain: MDomain::new(2, 20).unwrap(),
                trials: 10,
                successes: 10,
                histogram,
                duplicate_keys: 0,
            }],
        };
        let b = failure_breakdown(&grid, Method::TwistPlus, 300, 6).unwrap();
        assert_eq!(b.incorrect, 0);
        assert_eq!(b.percentage, None);
    }

    #[test]
    fn monotonicity_trivial_cases() {
        let text = corpus::synthetic_english(240, 3);
        // lambda = 1 compares a partition with itself
        let v = verify_monotonicity_case(&text, 5, 1).unwrap();
        assert!(v.hypothesis_holds && v.inequality_holds);
        assert_eq!(v.t_m, v.t_lambda_m);
        // N = 24, m = 2: cosets of 12 letters, size divisible by lambda = 3
        let t24 = text.slice(0, 24);
        let v = verify_monotonicity_case(&t24, 2, 3).unwrap();
        assert!(v.hypothesis_holds);
        assert!(v.inequality_holds);
        assert!(verify_monotonicity_case(&t24, 5, 5).is_err());
    }

    #[test]
    fn monotonicity_mass_small_run_is_clean_and_deterministic() {
        let a = verify_monotonicity_mass(500, 1234);
        let b = verify_monotonicity_mass_sequential(500, 1234);
        assert_eq!(a, b);
        assert_eq!(a.cases, 500);
        assert!(a.violations.is_empty(), "violations: {:?}", a.violations);
        assert!(a.hypothesis_true_cases > 0);
    }

    #[test]
    fn run_trial_scores_exact_match_only() {
        let corpus = corpus::synthetic_english(1_000, 9);
        let plain = corpus.slice(0, 300);
        let mut rng = rng_for(31, &[7]);
        let rec = run_trial(
            &plain,
            4,
            Method::TwistPlusPlus,
            MDomain::new(2, 15).unwrap(),
            &mut rng,
        )
        .unwrap();
        assert_eq!(rec.key.len(), 4);
        assert_eq!(rec.success, rec.predicted == 4);
    }

    #[test]
    fn predict_rounds_friedman_to_integer() {
        let corpus = corpus::synthetic_english(1_000, 9);
        let plain = corpus.slice(100, 250);
        let p = predict(&plain, Method::IcFriedman, MDomain::new(2, 15).unwrap()).unwrap();
        // plaintext should look like roughly one alphabet
        assert!(p >= 1, "integerized estimate is floored at 1, got {p}");
        let rep = crate::metrics::estimate_ic_friedman(&plain).unwrap();
        match rep.estimate {
            Estimate::Fractional(f) => assert_eq!(p, (f.round() as usize).max(1)),
            _ => panic!("friedman estimate should be fractional"),
        }
    }
}

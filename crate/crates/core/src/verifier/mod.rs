//! The command-level checks behind the CLI: the finite sweep for `[3n, 4n]`,
//! the corollary sweep, the count comparison, analytic threshold samples,
//! decomposition inspection and the observation suite.

mod decompose;
mod report_io;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observations::{sweep_observations, ObservationReport};
use crate::parallel::map_range;
use crate::prime_engine::PrimeSieve;
use crate::stirling_bounds::{
    count_lower_bound, ln_m, ln_t3_lower, m_correction_note, LogEstimate, Precision,
    T3_BOUND_MIN_N,
};

pub use decompose::{cmd_decompose, DecomposeReport, InequalityCheck, Status};
pub use report_io::{ReportFormat, WriteReport};

/// `⌈e^12⌉`; `e^12 ≈ 162754.79`.
pub const E12_CEIL: u64 = 162_755;

/// Observation failures at or above this `n` break the contract.
pub const OBSERVATION_CONTRACT_N: u64 = 250;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_min: u64,
    pub n_max: u64,
    /// `n` with no admissible prime
    pub failures: Vec<u64>,
    /// smallest admissible prime per `n`, when requested
    pub witness: Option<BTreeMap<u64, u64>>,
    pub runtime_ms: u64,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_witnesses(n_min: u64, n_max: u64, found: Vec<Option<u64>>, keep: bool, t: Instant) -> Self {
        let mut failures = Vec::new();
        let mut witness = keep.then(BTreeMap::new);
        for (k, w) in found.into_iter().enumerate() {
            let n = n_min + k as u64;
            match w {
                Some(p) => {
                    if let Some(m) = witness.as_mut() {
                        m.insert(n, p);
                    }
                }
                None => failures.push(n),
            }
        }
        SweepReport {
            n_min,
            n_max,
            failures,
            witness,
            runtime_ms: t.elapsed().as_millis() as u64,
        }
    }
}

/// For each `n` in `[1, n_max]`, the smallest prime in `[3n, 4n]`.
pub fn cmd_verify_direct(n_max: u64, witnesses: bool, threads: usize) -> Result<SweepReport> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be ≥ 1".into()));
    }
    let t = Instant::now();
    let top = n_max
        .checked_mul(4)
        .ok_or_else(|| Error::Precondition("n_max too large".into()))?;
    let sieve = PrimeSieve::new(top)?;
    let found = map_range(1, n_max, threads, |n| {
        sieve.next_prime_from(3 * n).filter(|&p| p <= 4 * n)
    })?;
    Ok(SweepReport::from_witnesses(1, n_max, found, witnesses, t))
}

/// For each `n` in `[3, n_max]`, the smallest prime `p > n` with `3p < 4(n + 2)`.
pub fn cmd_verify_corollary(n_max: u64, witnesses: bool, threads: usize) -> Result<SweepReport> {
    if n_max < 3 {
        return Err(Error::Precondition(format!("n_max must be ≥ 3, got {n_max}")));
    }
    let t = Instant::now();
    let top = n_max
        .checked_mul(2)
        .ok_or_else(|| Error::Precondition("n_max too large".into()))?;
    let sieve = PrimeSieve::new(top)?;
    let found = map_range(3, n_max, threads, |n| {
        sieve.next_prime_from(n + 1).filter(|&p| 3 * p < 4 * (n + 2))
    })?;
    Ok(SweepReport::from_witnesses(3, n_max, found, witnesses, t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundLine {
    pub n: u64,
    pub bound: f64,
    pub bound_err: f64,
    /// primes in the open interval `(3n, 4n)`
    pub actual: u64,
    pub satisfied: bool,
}

/// Primes `p` with `3n < p < 4n`.
pub fn open_interval_count(n: u64, sieve: &PrimeSieve) -> Result<u64> {
    Ok(sieve.pi(4 * n - 1)? - sieve.pi(3 * n)?)
}

pub fn lower_bound_line(n: u64, sieve: &PrimeSieve, prec: Precision) -> Result<LowerBoundLine> {
    if n < T3_BOUND_MIN_N {
        return Err(Error::Precondition(format!(
            "the count bound needs n ≥ {T3_BOUND_MIN_N}, got {n}"
        )));
    }
    let b = LogEstimate::from_tracked(&count_lower_bound(n, prec.bits)?);
    let actual = open_interval_count(n, sieve)?;
    Ok(LowerBoundLine {
        n,
        bound: b.value,
        bound_err: b.err,
        actual,
        // the bound has to clear its own error band to count as satisfied
        satisfied: b.value + b.err <= actual as f64,
    })
}

pub fn cmd_lower_bound(n: u64) -> Result<LowerBoundLine> {
    if n < T3_BOUND_MIN_N {
        return Err(Error::Precondition(format!(
            "the count bound needs n ≥ {T3_BOUND_MIN_N}, got {n}"
        )));
    }
    let sieve = PrimeSieve::new(4 * n)?;
    lower_bound_line(n, &sieve, Precision::default())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSample {
    pub n: u64,
    pub ln_t3_lower: f64,
    pub err: f64,
    pub positive: bool,
    /// change from the previous sample, absent for the first
    pub diff: Option<f64>,
    pub diff_positive: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub samples: Vec<AnalyticSample>,
    pub all_positive: bool,
    pub differences_positive: bool,
    pub ln_m: f64,
    pub m_correction: String,
    /// smallest `n ≥ 222` with a positive bound, found by bisection on
    /// `[222, ⌈e^12⌉]` assuming a single sign change
    pub empirical_first_positive_n: u64,
    pub method: String,
}

impl AnalyticReport {
    pub fn ok(&self) -> bool {
        self.all_positive && self.differences_positive
    }
}

pub fn default_analytic_samples() -> Vec<u64> {
    (0..=14).map(|k| E12_CEIL << k).collect()
}

/// Bisection for the sign change of the `T3` lower bound on `[lo, hi]`.
pub fn first_positive_t3(lo: u64, hi: u64, prec: Precision) -> Result<u64> {
    let positive = |n: u64| -> Result<bool> { Ok(ln_t3_lower(n, prec.bits)?.ln_f64() > 0.0) };
    if positive(lo)? {
        return Ok(lo);
    }
    if !positive(hi)? {
        return Err(Error::Domain(format!("T3 lower bound is not positive at {hi}")));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > 1 {
        let m = a + (b - a) / 2;
        if positive(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(b)
}

pub fn cmd_verify_analytic(samples: &[u64]) -> Result<AnalyticReport> {
    if samples.is_empty() {
        return Err(Error::Precondition("at least one sample is needed".into()));
    }
    if let Some(&bad) = samples.iter().find(|&&n| n <= E12_CEIL - 1) {
        return Err(Error::Precondition(format!(
            "samples must exceed e^12 (≥ {E12_CEIL}), got {bad}"
        )));
    }
    let prec = Precision::default();
    let mut out: Vec<AnalyticSample> = Vec::with_capacity(samples.len());
    for &n in samples {
        let v = ln_t3_lower(n, prec.bits)?.estimate();
        let (diff, diff_positive) = match out.last() {
            Some(prev) => {
                let d = v.value - prev.ln_t3_lower;
                (Some(d), Some(d - v.err - prev.err > 0.0))
            }
            None => (None, None),
        };
        out.push(AnalyticSample {
            n,
            ln_t3_lower: v.value,
            err: v.err,
            positive: v.value - v.err > 0.0,
            diff,
            diff_positive,
        });
    }
    Ok(AnalyticReport {
        all_positive: out.iter().all(|s| s.positive),
        differences_positive: out.iter().all(|s| s.diff_positive != Some(false)),
        samples: out,
        ln_m: ln_m(prec.bits)?.to_f64(),
        m_correction: m_correction_note(),
        empirical_first_positive_n: first_positive_t3(T3_BOUND_MIN_N, E12_CEIL, prec)?,
        method: "sampled positivity and first differences; a check, not a proof for all n".into(),
    })
}

/// Runs the observation suite over `[n_min, n_max]`.
pub fn cmd_observations(n_min: u64, n_max: u64, threads: usize) -> Result<ObservationReport> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Precondition(format!(
            "need 1 ≤ nmin ≤ nmax, got [{n_min}, {n_max}]"
        )));
    }
    let sieve = PrimeSieve::new(4 * n_max)?;
    sweep_observations(n_min, n_max, &sieve, threads)
}

/// Whether an observation report meets the contract: no failures from
/// `n = 250` on, tiling intact, and every threshold at most 250 when the
/// sweep reaches that far.
pub fn observations_contract_ok(r: &ObservationReport) -> bool {
    let covers = r.n_min <= OBSERVATION_CONTRACT_N && r.n_max >= OBSERVATION_CONTRACT_N;
    r.tiling_ok
        && r.failures_from(OBSERVATION_CONTRACT_N).next().is_none()
        && (!covers
            || r.claims.iter().all(|c| {
                c.minimal_valid_n.is_some_and(|m| m <= OBSERVATION_CONTRACT_N)
                    && c.chain_minimal_valid_n.is_some_and(|m| m <= OBSERVATION_CONTRACT_N)
            }))
}

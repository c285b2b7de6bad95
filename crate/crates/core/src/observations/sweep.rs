//! Sweeps of all claims over a range of `n`, merged in `(claim, n)` order.

use serde::{Deserialize, Serialize};

use super::{check_chain, check_claim, check_tiling, claim_table, Claim};
use crate::error::{Error, Result};
use crate::parallel::try_map_range;
use crate::prime_engine::PrimeSieve;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim_id: u8,
    /// smallest `n` from which the consequence holds up to `n_max`
    pub minimal_valid_n: Option<u64>,
    /// same for the displayed chain; `n_min` when the claim has no chain
    pub chain_minimal_valid_n: Option<u64>,
    pub failing_n: u64,
    pub chain_failing_n: u64,
    pub primes_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationFailure {
    pub claim_id: u8,
    pub n: u64,
    /// offending prime, 0 for chain failures
    pub p: u64,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationReport {
    pub n_min: u64,
    pub n_max: u64,
    pub tiling_ok: bool,
    pub tiling_nonempty_from: u64,
    pub claims: Vec<ClaimSummary>,
    pub failures: Vec<ObservationFailure>,
}

impl ObservationReport {
    /// Failures at or above `n`.
    pub fn failures_from(&self, n: u64) -> impl Iterator<Item = &ObservationFailure> {
        self.failures.iter().filter(move |f| f.n >= n)
    }
}

struct PerN {
    primes: Vec<u64>,
    failures: Vec<ObservationFailure>,
}

fn check_all_at(table: &[Claim], n: u64, sieve: &PrimeSieve) -> Result<PerN> {
    let mut out = PerN {
        primes: Vec::with_capacity(table.len()),
        failures: Vec::new(),
    };
    for c in table {
        let r = check_claim(c, n, sieve)?;
        out.primes.push(r.primes_checked);
        for (p, detail) in r.failures {
            out.failures.push(ObservationFailure {
                claim_id: c.id,
                n,
                p,
                kind: "consequence".into(),
                detail,
            });
        }
        for lf in check_chain(c, n)? {
            out.failures.push(ObservationFailure {
                claim_id: c.id,
                n,
                p: 0,
                kind: "chain".into(),
                detail: lf.detail,
            });
        }
    }
    Ok(out)
}

fn minimal_from(n_min: u64, n_max: u64, last_fail: Option<u64>) -> Option<u64> {
    match last_fail {
        None => Some(n_min),
        Some(m) if m == n_max => None,
        Some(m) => Some(m + 1),
    }
}

/// Runs every claim's consequence and chain check for each `n` in `[n_min, n_max]`.
pub fn sweep_observations(
    n_min: u64,
    n_max: u64,
    sieve: &PrimeSieve,
    threads: usize,
) -> Result<ObservationReport> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Precondition(format!(
            "need 1 ≤ n_min ≤ n_max, got [{n_min}, {n_max}]"
        )));
    }
    sieve.cover(4 * n_max)?;
    let table = claim_table();
    let tiling = check_tiling(&table);
    let per_n = try_map_range(n_min, n_max, threads, |n| check_all_at(&table, n, sieve))?;

    let mut claims: Vec<ClaimSummary> = table
        .iter()
        .map(|c| ClaimSummary {
            claim_id: c.id,
            minimal_valid_n: None,
            chain_minimal_valid_n: None,
            failing_n: 0,
            chain_failing_n: 0,
            primes_checked: 0,
        })
        .collect();
    let mut last_fail = vec![None; table.len()];
    let mut last_chain_fail = vec![None; table.len()];
    let mut failures = Vec::new();
    for (k, r) in per_n.into_iter().enumerate() {
        let n = n_min + k as u64;
        let mut seen = vec![false; table.len()];
        let mut seen_chain = vec![false; table.len()];
        for (i, p) in r.primes.iter().enumerate() {
            claims[i].primes_checked += p;
        }
        for f in &r.failures {
            let i = f.claim_id as usize - 1;
            if f.kind == "chain" {
                seen_chain[i] = true;
            } else {
                seen[i] = true;
            }
        }
        for i in 0..table.len() {
            if seen[i] {
                claims[i].failing_n += 1;
                last_fail[i] = Some(n);
            }
            if seen_chain[i] {
                claims[i].chain_failing_n += 1;
                last_chain_fail[i] = Some(n);
            }
        }
        failures.extend(r.failures);
    }
    for (i, c) in claims.iter_mut().enumerate() {
        c.minimal_valid_n = minimal_from(n_min, n_max, last_fail[i]);
        c.chain_minimal_valid_n = minimal_from(n_min, n_max, last_chain_fail[i]);
    }
    failures.sort_by_key(|f| (f.claim_id, f.n, f.p));
    Ok(ObservationReport {
        n_min,
        n_max,
        tiling_ok: tiling.ok,
        tiling_nonempty_from: tiling.nonempty_from,
        claims,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observations::{claim, minimal_valid_n};
    use crate::prime_engine::build_sieve;

    #[test]
    fn sweep_matches_pointwise_minimum() {
        let s = build_sieve(2400).unwrap();
        let r = sweep_observations(1, 600, &s, 2).unwrap();
        assert!(r.tiling_ok);
        for c in &r.claims {
            let direct = minimal_valid_n(&claim(c.claim_id).unwrap(), 600, &s).unwrap();
            assert_eq!(c.minimal_valid_n, direct, "claim {}", c.claim_id);
        }
        assert_eq!(r.claims[6].minimal_valid_n, Some(74));
    }

    #[test]
    fn serial_equals_parallel() {
        let s = build_sieve(1200).unwrap();
        assert_eq!(
            sweep_observations(1, 300, &s, 1).unwrap(),
            sweep_observations(1, 300, &s, 4).unwrap()
        );
    }

    #[test]
    fn bad_ranges() {
        let s = build_sieve(100).unwrap();
        assert!(matches!(sweep_observations(0, 10, &s, 1), Err(Error::Precondition(_))));
        assert!(matches!(sweep_observations(1, 30, &s, 1), Err(Error::Coverage { .. })));
    }
}

//! Prime table, prime counting, and the two classical prime lemmas.
//!
//! [`PrimeSieve`] is a plain Eratosthenes bit table over `[0, limit]` with a
//! per-word cumulative count, so `π(x)` is one table lookup plus a popcount.
//! The table is immutable once built and can be shared freely across threads.

use num_bigint::BigUint;

use crate::bigmath;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default upper bound on the sieve limit.
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 31;

/// Relative error allowance per summed logarithm in the log-domain product
/// comparisons.
const LOG_TERM_EPS: f64 = 1.0 / (1u64 << 50) as f64;

#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    bits: Vec<u64>,
    /// `counts[w]` = number of primes below `64 * w`.
    counts: Vec<u32>,
}

/// Build a sieve covering `[0, limit]` with the default capacity.
pub fn build_sieve(limit: u64) -> Result<PrimeSieve> {
    PrimeSieve::with_cap(limit, DEFAULT_SIEVE_CAP)
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        build_sieve(limit)
    }

    pub fn with_cap(limit: u64, cap: u64) -> Result<Self> {
        if !(2..=cap).contains(&limit) {
            return Err(Error::Capacity {
                requested: limit,
                cap,
            });
        }
        let words = (limit / 64 + 1) as usize;
        let mut bits = vec![u64::MAX; words];
        clear(&mut bits, 0);
        clear(&mut bits, 1);
        let mut i = 2u64;
        while i * i <= limit {
            if test(&bits, i) {
                let mut j = i * i;
                while j <= limit {
                    clear(&mut bits, j);
                    j += i;
                }
            }
            i += 1;
        }
        // drop everything past `limit` in the last word
        let tail = (limit % 64) + 1;
        if tail < 64 {
            bits[words - 1] &= (1u64 << tail) - 1;
        }
        let mut counts = Vec::with_capacity(words);
        let mut acc = 0u32;
        for w in &bits {
            counts.push(acc);
            acc += w.count_ones();
        }
        Ok(PrimeSieve {
            limit,
            bits,
            counts,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub(crate) fn cover(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::Coverage {
                requested: x,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, k: u64) -> Result<bool> {
        self.cover(k)?;
        Ok(test(&self.bits, k))
    }

    /// Unchecked lookup for hot loops; `k` must not exceed the limit.
    #[inline]
    pub(crate) fn bit(&self, k: u64) -> bool {
        test(&self.bits, k)
    }

    /// Number of primes `≤ x`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.cover(x)?;
        Ok(self.pi_unchecked(x))
    }

    #[inline]
    fn pi_unchecked(&self, x: u64) -> u64 {
        let w = (x / 64) as usize;
        let b = x % 64;
        let mask = if b == 63 { u64::MAX } else { (1u64 << (b + 1)) - 1 };
        self.counts[w] as u64 + (self.bits[w] & mask).count_ones() as u64
    }

    /// Primes `p` with `lo < p ≤ hi` (integer bounds), ascending.
    pub fn primes_between(&self, lo_exclusive: u64, hi_inclusive: u64) -> Result<Vec<u64>> {
        self.cover(hi_inclusive)?;
        Ok(self.iter_range(lo_exclusive.saturating_add(1), hi_inclusive).collect())
    }

    /// Iterate primes in `start..=end`. `end` must be within the limit.
    pub(crate) fn iter_range(&self, start: u64, end: u64) -> impl Iterator<Item = u64> + '_ {
        let end = end.min(self.limit);
        let mut k = start;
        std::iter::from_fn(move || {
            while k <= end {
                let w = (k / 64) as usize;
                let word = self.bits[w] >> (k % 64);
                if word == 0 {
                    k = (w as u64 + 1) * 64;
                    continue;
                }
                let p = k + word.trailing_zeros() as u64;
                if p > end {
                    k = end + 1;
                    return None;
                }
                k = p + 1;
                return Some(p);
            }
            None
        })
    }

    /// Smallest prime `≥ x`, if one exists within the table.
    pub fn next_prime_from(&self, x: u64) -> Option<u64> {
        self.iter_range(x, self.limit).next()
    }

    /// Primes `p` with `lo < p ≤ hi` for exact rational endpoints.
    pub fn primes_in(&self, lo_exclusive: Rational, hi_inclusive: Rational) -> Result<Vec<u64>> {
        if lo_exclusive.num() < 0 || lo_exclusive >= hi_inclusive {
            return Err(Error::Domain(format!(
                "need 0 ≤ lo < hi, got lo = {lo_exclusive}, hi = {hi_inclusive}"
            )));
        }
        // p > lo  ⟺  p ≥ ⌊lo⌋ + 1 ;  p ≤ hi  ⟺  p ≤ ⌊hi⌋
        let start = (lo_exclusive.floor_of() + 1) as u64;
        let end = hi_inclusive.floor_of() as u64;
        self.cover(end)?;
        Ok(self.iter_range(start, end).collect())
    }
}

#[inline]
fn test(bits: &[u64], k: u64) -> bool {
    bits[(k / 64) as usize] >> (k % 64) & 1 == 1
}

#[inline]
fn clear(bits: &mut [u64], k: u64) {
    bits[(k / 64) as usize] &= !(1u64 << (k % 64));
}

/// Deterministic trial-division primality test, for isolated values that may
/// lie outside any sieve.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `π(n) ≤ n/2`, decided exactly as `2π(n) ≤ n`. Requires `n ≥ 8`.
pub fn check_pi_bound(sieve: &PrimeSieve, n: u64) -> Result<bool> {
    if n < 8 {
        return Err(Error::Precondition(format!(
            "the π(n) ≤ n/2 bound needs n ≥ 8, got {n}"
        )));
    }
    Ok(2 * sieve.pi(n)? <= n)
}

/// `∏_{p ≤ x} p ≤ 4^x` for positive rational `x`.
pub fn check_primorial_bound(sieve: &PrimeSieve, x: Rational) -> Result<bool> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("primorial bound needs x > 0, got {x}")));
    }
    let top = x.floor_of() as u64;
    sieve.cover(top)?;
    let primes: Vec<u64> = sieve.iter_range(2, top).collect();
    Ok(product_le_pow4(&primes, x))
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct LogSum {
    sum: f64,
    comp: f64,
    terms: u64,
}

impl LogSum {
    pub(crate) fn push(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Error bound for comparing this sum against a value of magnitude `other`.
    fn band(&self, other: f64) -> f64 {
        (self.terms as f64 + 2.0) * LOG_TERM_EPS * self.value().abs().max(other.abs()).max(1.0)
    }
}

/// Three-way outcome of a log-domain comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Band {
    Below,
    Above,
    Within,
}

pub(crate) fn classify(sum: &LogSum, rhs: f64) -> Band {
    let v = sum.value();
    let band = sum.band(rhs);
    if v + band < rhs {
        Band::Below
    } else if v - band > rhs {
        Band::Above
    } else {
        Band::Within
    }
}

/// `∏ primes ≤ 4^x`: log-domain first, exact `P^den ≤ 2^(2·num)` inside the band.
pub(crate) fn product_le_pow4(primes: &[u64], x: Rational) -> bool {
    let mut s = LogSum::default();
    for &p in primes {
        s.push((p as f64).ln());
    }
    match classify(&s, x.to_f64() * 4f64.ln()) {
        Band::Below => true,
        Band::Above => false,
        Band::Within => exact_product_le_pow4(primes, x),
    }
}

pub(crate) fn exact_product_le_pow4(primes: &[u64], x: Rational) -> bool {
    let lhs = bigmath::product(primes.iter().copied()).pow(x.den() as u32);
    let rhs = BigUint::from(1u32) << (2 * x.num() as u64);
    lhs <= rhs
}

/// Scan `∏_{p ≤ x} p ≤ 4^x` for every integer `x` in `[1, x_max]` with one
/// running sum. Returns the first violating `x`, if any.
pub fn first_primorial_violation(sieve: &PrimeSieve, x_max: u64) -> Result<Option<u64>> {
    sieve.cover(x_max)?;
    let mut s = LogSum::default();
    let ln4 = 4f64.ln();
    for x in 1..=x_max {
        if sieve.bit(x) {
            s.push((x as f64).ln());
        }
        let ok = match classify(&s, x as f64 * ln4) {
            Band::Below => true,
            Band::Above => false,
            Band::Within => {
                let primes: Vec<u64> = sieve.iter_range(2, x).collect();
                exact_product_le_pow4(&primes, Rational::integer(x as i128))
            }
        };
        if !ok {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_primes(limit: u64) -> Vec<u64> {
        (0..=limit).filter(|&k| is_prime_u64(k)).collect()
    }

    fn q(a: i128, b: i128) -> Rational {
        Rational::new(a, b).unwrap()
    }

    #[test]
    fn small_sieves() {
        let s = build_sieve(10).unwrap();
        let marked: Vec<u64> = (0..=10).filter(|&k| s.is_prime(k).unwrap()).collect();
        assert_eq!(marked, vec![2, 3, 5, 7]);
        let s = build_sieve(2).unwrap();
        assert_eq!(s.pi(2).unwrap(), 1);
        assert!(!s.is_prime(1).unwrap());
    }

    #[test]
    fn capacity_and_coverage_errors() {
        assert!(matches!(build_sieve(1), Err(Error::Capacity { .. })));
        assert!(matches!(PrimeSieve::with_cap(1000, 999), Err(Error::Capacity { .. })));
        let s = build_sieve(100).unwrap();
        assert!(matches!(s.pi(101), Err(Error::Coverage { .. })));
        assert!(matches!(s.primes_in(q(90, 1), q(101, 1)), Err(Error::Coverage { .. })));
    }

    #[test]
    fn sieve_matches_trial_division() {
        for limit in [2u64, 3, 63, 64, 65, 127, 128, 1000] {
            let s = build_sieve(limit).unwrap();
            let from_sieve: Vec<u64> = s.iter_range(0, limit).collect();
            assert_eq!(from_sieve, trial_primes(limit), "limit {limit}");
        }
    }

    #[test]
    fn pi_values() {
        let s = build_sieve(1000).unwrap();
        assert_eq!(s.pi(8).unwrap(), 4);
        assert_eq!(s.pi(1).unwrap(), 0);
        assert_eq!(s.pi(0).unwrap(), 0);
        assert_eq!(s.pi(100).unwrap(), 25);
        assert_eq!(s.pi(1000).unwrap(), 168);
    }

    #[test]
    fn rational_ranges() {
        let s = build_sieve(100).unwrap();
        assert_eq!(s.primes_in(q(6, 1), q(8, 1)).unwrap(), vec![7]);
        assert_eq!(s.primes_in(q(2, 1), q(3, 1)).unwrap(), vec![3]);
        assert_eq!(s.primes_in(q(30, 1), q(40, 1)).unwrap(), vec![31, 37]);
        // exact boundaries: 3·13/13 = 3 is excluded at the open end
        assert_eq!(s.primes_in(q(39, 13), q(11, 2)).unwrap(), vec![5]);
        assert!(s.primes_in(q(5, 1), q(5, 1)).is_err());
    }

    #[test]
    fn next_prime() {
        let s = build_sieve(200).unwrap();
        assert_eq!(s.next_prime_from(3), Some(3));
        assert_eq!(s.next_prime_from(6), Some(7));
        assert_eq!(s.next_prime_from(198), Some(199));
        assert_eq!(s.next_prime_from(200), None);
    }

    #[test]
    fn pi_bound_examples() {
        let s = build_sieve(1000).unwrap();
        assert!(check_pi_bound(&s, 8).unwrap());
        assert!(check_pi_bound(&s, 9).unwrap());
        assert!(check_pi_bound(&s, 1000).unwrap());
        assert!(matches!(check_pi_bound(&s, 7), Err(Error::Precondition(_))));
    }

    #[test]
    fn primorial_examples() {
        let s = build_sieve(100_000).unwrap();
        assert!(check_primorial_bound(&s, q(10, 1)).unwrap());
        assert!(check_primorial_bound(&s, q(3, 2)).unwrap());
        assert!(check_primorial_bound(&s, q(100_000, 1)).unwrap());
        assert!(check_primorial_bound(&s, q(0, 1)).is_err());
    }

    #[test]
    fn exact_escalation_agrees_with_log_route() {
        // 2·3·5·7 = 210 against 4^x at both sides of log4(210) ≈ 3.86
        let primes = [2u64, 3, 5, 7];
        assert!(exact_product_le_pow4(&primes, q(386, 100)) == product_le_pow4(&primes, q(386, 100)));
        assert!(!exact_product_le_pow4(&primes, q(385, 100)));
        assert!(exact_product_le_pow4(&primes, q(387, 100)));
        // 4^(1/2) = 2 equality case is decided exactly
        assert!(exact_product_le_pow4(&[2], q(1, 2)));
        assert!(product_le_pow4(&[2], q(1, 2)));
    }

    #[test]
    fn neumaier_sum() {
        let mut s = LogSum::default();
        s.push(1e16);
        s.push(1.0);
        s.push(-1e16);
        assert_eq!(s.value(), 1.0);
    }
}

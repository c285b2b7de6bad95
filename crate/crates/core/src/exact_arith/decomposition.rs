//! `C(4n, 3n) = T1·T2·T3` split by prime size, and the exact bounds on T1, T2.

use num_bigint::BigUint;
use num_integer::Roots;
use serde::{Deserialize, Serialize};

use super::gen_binomial::{absorber, Absorber};
use super::valuation::{beta_unchecked, ValuationMap};
use crate::error::{Error, Result};
use crate::prime_engine::{classify, Band, LogSum, PrimeSieve};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: u64,
    /// primes with `p² ≤ 4n`
    pub t1: ValuationMap,
    /// primes with `p² > 4n` and `p ≤ 3n`
    pub t2: ValuationMap,
    /// primes in `(3n, 4n]`
    pub t3: ValuationMap,
}

impl Decomposition {
    pub fn product(&self) -> BigUint {
        self.t1.to_biguint() * self.t2.to_biguint() * self.t3.to_biguint()
    }
}

fn require_coverage(n: u64, sieve: &PrimeSieve) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be ≥ 1".into()));
    }
    if sieve.limit() < 4 * n {
        return Err(Error::Coverage {
            requested: 4 * n,
            limit: sieve.limit(),
        });
    }
    Ok(())
}

pub fn decompose(n: u64, sieve: &PrimeSieve) -> Result<Decomposition> {
    require_coverage(n, sieve)?;
    let mut d = Decomposition {
        n,
        t1: ValuationMap::new(),
        t2: ValuationMap::new(),
        t3: ValuationMap::new(),
    };
    for p in sieve.iter_range(2, 4 * n) {
        let b = beta_unchecked(n, p) as u32;
        if p * p <= 4 * n {
            d.t1.insert(p, b);
        } else if p <= 3 * n {
            d.t2.insert(p, b);
        } else {
            d.t3.insert(p, b);
        }
    }
    Ok(d)
}

/// Every prime with `p² > 4n` and `p ≤ 3n` has `β(p) ≤ 1`.
pub fn beta_at_most_one(n: u64, sieve: &PrimeSieve) -> Result<bool> {
    require_coverage(n, sieve)?;
    let start = (4 * n).sqrt() + 1;
    Ok(sieve
        .iter_range(start, 3 * n)
        .all(|p| p * p <= 4 * n || beta_unchecked(n, p) <= 1))
}

/// `T2 ≤ 4^(n/6)·ABCD`, decided as `T2^6 ≤ 4^n·(ABCD)^6` over the integers.
#[allow(non_snake_case)]
pub fn check_T2_divisibility_bound(n: u64, sieve: &PrimeSieve) -> Result<bool> {
    let d = decompose(n, sieve)?;
    let t2 = d.t2.to_biguint();
    let mut abcd = BigUint::from(1u32);
    for a in Absorber::ALL {
        abcd *= absorber(a, n)?;
    }
    let lhs = t2.pow(6);
    let rhs = (abcd.pow(6)) << (2 * n);
    Ok(lhs <= rhs)
}

/// Smallest `n0 ≥ n_from` such that the T2 bound holds for every `n` in
/// `[n0, n_max]`; `None` if it fails at `n_max`.
pub fn t2_bound_minimal_n(n_from: u64, n_max: u64, sieve: &PrimeSieve) -> Result<Option<u64>> {
    let mut n = n_max;
    loop {
        if !check_T2_divisibility_bound(n, sieve)? {
            return Ok(if n == n_max { None } else { Some(n + 1) });
        }
        if n == n_from {
            return Ok(Some(n_from));
        }
        n -= 1;
    }
}

/// `T1 < (4n)^π(√(4n)) ≤ (4n)^√n`. Requires `n ≥ 16`.
#[allow(non_snake_case)]
pub fn check_T1_bound(n: u64, sieve: &PrimeSieve) -> Result<bool> {
    if n < 16 {
        return Err(Error::Precondition(format!(
            "the T1 bound needs n ≥ 16 so that √(4n) ≥ 8, got {n}"
        )));
    }
    let d = decompose(n, sieve)?;
    let k = sieve.pi((4 * n).sqrt())?;
    // second link: π(√(4n))·ln(4n) ≤ √n·ln(4n)  ⟺  π² ≤ n
    let second = k * k <= n;
    Ok(t1_below_power(&d.t1, 4 * n, k) && second)
}

/// `∏ p^e < base^k`, in log domain with exact escalation.
fn t1_below_power(t1: &ValuationMap, base: u64, k: u64) -> bool {
    let mut s = LogSum::default();
    for (p, e) in t1.iter() {
        s.push(e as f64 * (p as f64).ln());
    }
    match classify(&s, k as f64 * (base as f64).ln()) {
        Band::Below => true,
        Band::Above => false,
        Band::Within => t1.to_biguint() < BigUint::from(base).pow(k as u32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::binomial;
    use crate::prime_engine::build_sieve;

    #[test]
    fn decompose_n2() {
        let s = build_sieve(100).unwrap();
        let d = decompose(2, &s).unwrap();
        assert_eq!(d.t1.render(), "2^2");
        assert!(d.t2.is_empty());
        assert_eq!(d.t3.render(), "7");
        assert_eq!(d.product(), BigUint::from(28u32));
    }

    #[test]
    fn decompose_n1_boundary() {
        // √4 = 2 so p = 2 lands in T1; β(3) = 0 leaves T2 empty
        let s = build_sieve(10).unwrap();
        let d = decompose(1, &s).unwrap();
        assert_eq!(d.t1.render(), "2^2");
        assert!(d.t2.is_empty());
        assert!(d.t3.is_empty());
        assert_eq!(d.product(), BigUint::from(4u32));
    }

    #[test]
    fn decompose_n50_matches_binomial() {
        let s = build_sieve(200).unwrap();
        assert_eq!(decompose(50, &s).unwrap().product(), binomial(200, 150));
    }

    #[test]
    fn coverage_error() {
        let s = build_sieve(100).unwrap();
        assert!(matches!(decompose(26, &s), Err(Error::Coverage { .. })));
        assert!(decompose(0, &s).is_err());
    }

    #[test]
    fn beta_at_most_one_examples() {
        let s = build_sieve(400).unwrap();
        assert!(beta_at_most_one(1, &s).unwrap());
        assert!(beta_at_most_one(2, &s).unwrap());
        assert!(beta_at_most_one(100, &s).unwrap());
    }

    #[test]
    fn t2_bound_examples() {
        let s = build_sieve(4000).unwrap();
        assert!(check_T2_divisibility_bound(222, &s).unwrap());
        assert!(check_T2_divisibility_bound(300, &s).unwrap());
        assert!(check_T2_divisibility_bound(1000, &s).unwrap());
    }

    #[test]
    fn t1_bound_examples() {
        let s = build_sieve(40_000).unwrap();
        assert!(check_T1_bound(16, &s).unwrap());
        assert!(check_T1_bound(100, &s).unwrap());
        assert!(check_T1_bound(10_000, &s).unwrap());
        assert!(matches!(check_T1_bound(15, &s), Err(Error::Precondition(_))));
    }
}

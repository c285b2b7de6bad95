//! Generalized binomial `{s\r}` for rational `s > r ≥ 1`, and the four
//! absorbers A, B, C, D built from it.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::valuation::ValuationMap;
use crate::bigmath;
use crate::error::{Error, Result};
use crate::prime_engine::PrimeSieve;
use crate::rational::Rational;

/// Index pair `(s, r)` with `s > r ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenBinomIndex {
    s: Rational,
    r: Rational,
}

impl GenBinomIndex {
    pub fn new(s: Rational, r: Rational) -> Result<Self> {
        if !(s > r && r >= Rational::integer(1)) {
            return Err(Error::Domain(format!(
                "generalized binomial needs s > r ≥ 1, got s = {s}, r = {r}"
            )));
        }
        Ok(GenBinomIndex { s, r })
    }

    pub fn s(&self) -> Rational {
        self.s
    }

    pub fn r(&self) -> Rational {
        self.r
    }

    /// Integers in `(s - r, s]`, as the inclusive range `lo..=hi`.
    pub fn numerator_range(&self) -> (u64, u64) {
        let lo = (self.s - self.r).floor_of() + 1;
        (lo as u64, self.s.floor_of() as u64)
    }

    /// Number of integers in `(s - r, s]`, i.e. `[s] - [s - r]`.
    pub fn numerator_len(&self) -> u64 {
        (self.s.floor_of() - (self.s - self.r).floor_of()) as u64
    }
}

/// `δ(r, s)`: 1 when `{s} ≥ {r}`, otherwise `[s - r] + 1`. Always `≤ s`.
pub fn delta(idx: &GenBinomIndex) -> Result<u64> {
    let d = if idx.s.frac_of() >= idx.r.frac_of() {
        1
    } else {
        (idx.s - idx.r).floor_of() + 1
    };
    if Rational::integer(d) > idx.s {
        return Err(Error::Internal(format!(
            "δ = {d} exceeds s = {} for r = {}",
            idx.s, idx.r
        )));
    }
    Ok(d as u64)
}

/// Exact `{s\r}`, computed as a quotient of integer products and as
/// `δ(r, s)·C([s], [r])`; the two routes must agree.
pub fn gen_binomial(idx: &GenBinomIndex) -> Result<BigUint> {
    let (lo, hi) = idx.numerator_range();
    let r_floor = idx.r.floor_of() as u64;
    let num = bigmath::range_product(lo, hi);
    let den = bigmath::range_product(1, r_floor);
    let (quot, rem) = num.div_rem(&den);
    if rem != BigUint::from(0u32) {
        return Err(Error::Internal(format!(
            "product over ({}, {}] is not divisible by [{}]!",
            idx.s - idx.r,
            idx.s,
            idx.r
        )));
    }
    let via_delta = BigUint::from(delta(idx)?) * bigmath::binomial(hi, r_floor);
    if quot != via_delta {
        return Err(Error::Internal(format!(
            "{{{}\\{}}}: quotient route and δ·C route disagree",
            idx.s, idx.r
        )));
    }
    Ok(quot)
}

/// Exponent of prime `p` in `{s\r}`, from floor counts of multiples of `p^i`.
pub fn gen_binomial_valuation(idx: &GenBinomIndex, p: u64) -> u64 {
    let s = idx.s;
    let t = idx.s - idx.r;
    let r = idx.r;
    let mut total: i128 = 0;
    let mut q: i128 = p as i128;
    while Rational::integer(q) <= s {
        let qq = Rational::integer(q);
        total += (s / qq).floor_of() - (t / qq).floor_of() - (r / qq).floor_of();
        q *= p as i128;
    }
    total as u64
}

/// Full prime factorization of `{s\r}`.
pub fn gen_binomial_valuations(idx: &GenBinomIndex, sieve: &PrimeSieve) -> Result<ValuationMap> {
    let top = idx.s.floor_of() as u64;
    sieve.pi(top)?;
    let mut map = ValuationMap::new();
    for p in sieve.iter_range(2, top) {
        map.insert(p, gen_binomial_valuation(idx, p) as u32);
    }
    Ok(map)
}

/// The four generalized binomials used to absorb the middle primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Absorber {
    A,
    B,
    C,
    D,
}

impl Absorber {
    pub const ALL: [Absorber; 4] = [Absorber::A, Absorber::B, Absorber::C, Absorber::D];

    /// `(s, r)` coefficients of `n`.
    pub fn coefficients(self) -> (Rational, Rational) {
        let q = Rational::from_parts_unchecked;
        match self {
            Absorber::A => (q(4, 3), q(1, 1)),
            Absorber::B => (q(2, 1), q(3, 2)),
            Absorber::C => (q(4, 17), q(3, 13)),
            Absorber::D => (q(2, 7), q(4, 15)),
        }
    }

    pub fn index(self, n: u64) -> Result<GenBinomIndex> {
        let (s, r) = self.coefficients();
        GenBinomIndex::new(s.scale(n), r.scale(n))
            .map_err(|e| Error::Domain(format!("absorber {self} at n = {n}: {e}")))
    }
}

impl fmt::Display for Absorber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Absorber::A => 'A',
            Absorber::B => 'B',
            Absorber::C => 'C',
            Absorber::D => 'D',
        };
        write!(f, "{c}")
    }
}

/// Exact value of the named absorber at `n`.
pub fn absorber(which: Absorber, n: u64) -> Result<BigUint> {
    gen_binomial(&which.index(n)?)
}

pub fn absorber_valuations(which: Absorber, n: u64, sieve: &PrimeSieve) -> Result<ValuationMap> {
    gen_binomial_valuations(&which.index(n)?, sieve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime_engine::build_sieve;

    fn q(a: i128, b: i128) -> Rational {
        Rational::new(a, b).unwrap()
    }

    fn idx(s: Rational, r: Rational) -> GenBinomIndex {
        GenBinomIndex::new(s, r).unwrap()
    }

    #[test]
    fn index_invariants() {
        assert!(GenBinomIndex::new(q(3, 1), q(3, 1)).is_err());
        assert!(GenBinomIndex::new(q(3, 1), q(1, 2)).is_err());
        assert!(GenBinomIndex::new(q(3, 1), q(1, 1)).is_ok());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&idx(q(4, 1), q(3, 1))).unwrap(), 1);
        assert_eq!(delta(&idx(q(2, 1), q(3, 2))).unwrap(), 1);
        assert_eq!(delta(&idx(q(8, 3), q(2, 1))).unwrap(), 1);
        // {s} = 1/10 < {r} = 9/10: δ = [s - r] + 1 = [5.2] + 1 = 6
        assert_eq!(delta(&idx(q(101, 10), q(49, 10))).unwrap(), 6);
    }

    #[test]
    fn gen_binomial_examples() {
        assert_eq!(gen_binomial(&idx(q(4, 1), q(3, 1))).unwrap(), BigUint::from(4u32));
        assert_eq!(gen_binomial(&idx(q(52, 1), q(51, 1))).unwrap(), BigUint::from(52u32));
        assert_eq!(gen_binomial(&idx(q(8, 3), q(2, 1))).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn absorber_examples() {
        assert_eq!(absorber(Absorber::A, 3).unwrap(), BigUint::from(4u32));
        assert_eq!(absorber(Absorber::B, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(absorber(Absorber::D, 105).unwrap(), BigUint::from(435u32));
        // n = 221: C has indices (52, 51)
        assert_eq!(absorber(Absorber::C, 221).unwrap(), BigUint::from(52u32));
    }

    #[test]
    fn absorber_domain_is_checked_at_runtime() {
        // 3n/13 ≥ 1 needs n ≥ 5; 4n/15 ≥ 1 needs n ≥ 4
        assert!(matches!(absorber(Absorber::C, 4), Err(Error::Domain(_))));
        assert!(absorber(Absorber::C, 5).is_ok());
        assert!(matches!(absorber(Absorber::D, 3), Err(Error::Domain(_))));
        assert!(absorber(Absorber::D, 4).is_ok());
        assert!(matches!(absorber(Absorber::A, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn valuations_reconstruct_value() {
        let sieve = build_sieve(4000).unwrap();
        for n in [5u64, 17, 100, 221, 300] {
            for a in Absorber::ALL {
                let exact = absorber(a, n).unwrap();
                let map = absorber_valuations(a, n, &sieve).unwrap();
                assert_eq!(map.to_biguint(), exact, "{a} at n = {n}");
            }
        }
    }
}

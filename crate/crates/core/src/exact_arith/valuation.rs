use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bigmath;
use crate::error::{Error, Result};
use crate::prime_engine::is_prime_u64;

/// Exponent of `p` in `n!`: `Σ_{i≥1} ⌊n / p^i⌋`.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(legendre_unchecked(n, p))
}

#[inline]
pub(crate) fn legendre_unchecked(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        total += m;
    }
    total
}

/// Exponent of `p` in `C(4n, 3n)`.
pub fn beta(n: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("β(p) is defined for n ≥ 1".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(beta_unchecked(n, p))
}

#[inline]
pub(crate) fn beta_unchecked(n: u64, p: u64) -> u64 {
    legendre_unchecked(4 * n, p) - legendre_unchecked(3 * n, p) - legendre_unchecked(n, p)
}

/// Factored positive integer: prime → exponent, exponents ≥ 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationMap {
    entries: BTreeMap<u64, u32>,
}

impl ValuationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record `p^e`; zero exponents are dropped.
    pub(crate) fn insert(&mut self, p: u64, e: u32) {
        if e > 0 {
            *self.entries.entry(p).or_insert(0) += e;
        }
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.entries.get(&p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.entries.iter().map(|(&p, &e)| (p, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_exponent(&self) -> u32 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// `∏ p^e` as an exact integer.
    pub fn to_biguint(&self) -> BigUint {
        bigmath::expand(self.entries.iter())
    }

    /// `Σ e·ln p` in f64.
    pub fn ln_f64(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&p, &e)| e as f64 * (p as f64).ln())
            .sum()
    }

    /// Product of two factored integers.
    pub fn merged(&self, other: &ValuationMap) -> ValuationMap {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.insert(p, e);
        }
        out
    }

    /// Human form like `2^2·7`; `1` for the empty product.
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "1".into();
        }
        self.entries
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join("·")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_valuation(10, 2).unwrap(), 8);
        assert_eq!(legendre_valuation(3, 5).unwrap(), 0);
        assert_eq!(legendre_valuation(100, 5).unwrap(), 24);
        assert!(legendre_valuation(10, 4).is_err());
    }

    #[test]
    fn beta_examples() {
        // C(4,3) = 4, C(8,6) = 28 = 2²·7
        assert_eq!(beta(1, 2).unwrap(), 2);
        assert_eq!(beta(2, 7).unwrap(), 1);
        assert_eq!(beta(2, 3).unwrap(), 0);
        assert!(beta(0, 2).is_err());
        assert!(beta(2, 9).is_err());
    }

    #[test]
    fn map_roundtrip() {
        let mut m = ValuationMap::new();
        m.insert(2, 2);
        m.insert(7, 1);
        m.insert(5, 0);
        assert_eq!(m.to_biguint(), BigUint::from(28u32));
        assert_eq!(m.exponent(5), 0);
        assert_eq!(m.render(), "2^2·7");
        assert_eq!(ValuationMap::new().render(), "1");
    }
}

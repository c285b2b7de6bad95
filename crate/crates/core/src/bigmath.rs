//! Small big-integer helpers shared by the exact modules.

use num_bigint::BigUint;
use num_traits::One;

/// Product of the given factors, multiplied as a balanced tree so that the
/// operands of each multiplication stay of similar size.
pub fn product<I: IntoIterator<Item = u64>>(factors: I) -> BigUint {
    let mut level: Vec<BigUint> = factors.into_iter().map(BigUint::from).collect();
    if level.is_empty() {
        return BigUint::one();
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap()
}

/// Product of the integers in `lo..=hi`; the empty range gives 1.
pub fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    product(lo..=hi)
}

/// `C(n, k)` as a ratio of two range products.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    range_product(n - k + 1, n) / range_product(1, k)
}

/// Expand a factored integer `∏ p^e`.
pub fn expand<'a, I: IntoIterator<Item = (&'a u64, &'a u32)>>(factors: I) -> BigUint {
    let mut terms: Vec<BigUint> = factors
        .into_iter()
        .map(|(&p, &e)| BigUint::from(p).pow(e))
        .collect();
    if terms.is_empty() {
        return BigUint::one();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// Natural log of a positive big integer in f64, from its top 64 bits.
///
/// Relative truncation error is below 2^-63, so the absolute error is
/// dominated by the final f64 rounding of the result.
pub fn ln_biguint_f64(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v = x.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let v = top.iter_u64_digits().next().unwrap_or(0);
    (v as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(8, 6), BigUint::from(28u32));
        assert_eq!(binomial(4, 3), BigUint::from(4u32));
        assert_eq!(binomial(30, 28), BigUint::from(435u32));
        assert_eq!(binomial(3, 5), BigUint::from(0u32));
    }

    #[test]
    fn product_matches_fold() {
        let direct = (1..=40u64).fold(BigUint::one(), |acc, k| acc * k);
        assert_eq!(product(1..=40), direct);
        assert_eq!(product(std::iter::empty()), BigUint::one());
    }

    #[test]
    fn ln_of_big_values() {
        let x = BigUint::from(2u32).pow(300) * 3u32;
        let expect = 300.0 * std::f64::consts::LN_2 + 3f64.ln();
        assert!((ln_biguint_f64(&x) - expect).abs() < 1e-12);
        assert!((ln_biguint_f64(&BigUint::from(1000u32)) - 1000f64.ln()).abs() < 1e-15);
    }
}

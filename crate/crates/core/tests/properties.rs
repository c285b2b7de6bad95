use std::sync::LazyLock;

use proptest::prelude::*;

use interval34_core::bigmath::binomial;
use interval34_core::exact_arith::{
    beta, delta, gen_binomial, gen_binomial_valuations, legendre_valuation, GenBinomIndex,
    Rational,
};
use interval34_core::prime_engine::{is_prime_u64, PrimeSieve};

static SIEVE: LazyLock<PrimeSieve> = LazyLock::new(|| PrimeSieve::new(100_000).unwrap());

fn rational(max_num: i128) -> impl Strategy<Value = Rational> {
    (1i128..=20).prop_flat_map(move |d| (d..=max_num * d).prop_map(move |num| Rational::new(num, d).unwrap()))
}

/// `(s, r)` with `s > r ≥ 1`, `s ≤ 500`, denominators in `1..=20`.
fn index() -> impl Strategy<Value = GenBinomIndex> {
    (rational(500), rational(500))
        .prop_filter("s > r", |(s, r)| s > r)
        .prop_map(|(s, r)| GenBinomIndex::new(s, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn generalized_binomial_routes_agree(idx in index()) {
        // both internal routes must agree, and δ·C([s],[r]) is the value
        let v = gen_binomial(&idx).unwrap();
        let d = delta(&idx).unwrap();
        prop_assert!(Rational::integer(d as i128) <= idx.s());
        let r = idx.r().floor_of() as u64;
        let s = idx.s().floor_of() as u64;
        prop_assert_eq!(v, binomial(s, r) * num_bigint::BigUint::from(d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn valuation_formula_reconstructs_value(idx in index()) {
        let map = gen_binomial_valuations(&idx, &SIEVE).unwrap();
        prop_assert_eq!(map.to_biguint(), gen_binomial(&idx).unwrap());
    }

    #[test]
    fn pi_matches_trial_division(x in 0u64..5000) {
        let direct = (2..=x).filter(|&k| is_prime_u64(k)).count() as u64;
        prop_assert_eq!(SIEVE.pi(x).unwrap(), direct);
    }

    #[test]
    fn primes_in_splits_at_any_midpoint(
        a in 0i128..20_000, b in 1i128..20_000, c in 1i128..20_000, d in 1i128..=30
    ) {
        let mut v = [a, a + b, a + b + c];
        v.sort();
        let q = |x: i128| Rational::new(x, d).unwrap();
        let (lo, mid, hi) = (q(v[0]), q(v[1]), q(v[2]));
        let whole = SIEVE.primes_in(lo, hi).unwrap();
        let mut parts = SIEVE.primes_in(lo, mid).unwrap();
        parts.extend(SIEVE.primes_in(mid, hi).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn beta_is_difference_of_legendre(n in 1u64..20_000, k in 0usize..200) {
        let p = SIEVE.primes_between(0, 4 * n).unwrap();
        let p = p[k % p.len()];
        let b = beta(n, p).unwrap();
        let l = |m| legendre_valuation(m, p).unwrap();
        prop_assert_eq!(b, l(4 * n) - l(3 * n) - l(n));
        // Kummer: β counts carries when adding n and 3n in base p
        let (mut x, mut y, mut carry, mut carries) = (n, 3 * n, 0, 0);
        while x > 0 || y > 0 || carry > 0 {
            let s = x % p + y % p + carry;
            carry = u64::from(s >= p);
            carries += carry;
            x /= p;
            y /= p;
        }
        prop_assert_eq!(b, carries);
    }
}

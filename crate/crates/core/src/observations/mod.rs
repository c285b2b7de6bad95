//! The 22 interval observations: every prime `p` with `√(4n) < p ≤ 3n`
//! either divides one of the absorbers, has `β(p) = 0`, or lies in the
//! initial range covered by the primorial bound.

mod chain;
mod sweep;

use std::fmt;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{beta_unchecked, gen_binomial_valuation, Absorber};
use crate::prime_engine::{product_le_pow4, PrimeSieve};
use crate::rational::Rational;

pub use chain::{check_chain_on, Chain, LinkFailure, Rel, Term};
pub use sweep::{sweep_observations, ClaimSummary, ObservationFailure, ObservationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerEdge {
    /// `p > √(4n)`
    Sqrt4n,
    /// `p > c·n`
    Coeff(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Consequence {
    #[serde(rename = "DIVIDES_A")]
    DividesA,
    #[serde(rename = "DIVIDES_B")]
    DividesB,
    #[serde(rename = "DIVIDES_C")]
    DividesC,
    #[serde(rename = "DIVIDES_D")]
    DividesD,
    #[serde(rename = "BETA_ZERO")]
    BetaZero,
    #[serde(rename = "PRIMORIAL_16TH")]
    Primorial16th,
}

impl Consequence {
    pub fn absorber(self) -> Option<Absorber> {
        match self {
            Consequence::DividesA => Some(Absorber::A),
            Consequence::DividesB => Some(Absorber::B),
            Consequence::DividesC => Some(Absorber::C),
            Consequence::DividesD => Some(Absorber::D),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Consequence::DividesA => "DIVIDES_A",
            Consequence::DividesB => "DIVIDES_B",
            Consequence::DividesC => "DIVIDES_C",
            Consequence::DividesD => "DIVIDES_D",
            Consequence::BetaZero => "BETA_ZERO",
            Consequence::Primorial16th => "PRIMORIAL_16TH",
        }
    }
}

impl fmt::Display for Consequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: u8,
    pub lo: LowerEdge,
    pub hi_coeff: Rational,
    pub consequence: Consequence,
    pub chain: Option<Chain>,
}

impl Claim {
    pub fn lo_coeff(&self) -> Option<Rational> {
        match self.lo {
            LowerEdge::Sqrt4n => None,
            LowerEdge::Coeff(c) => Some(c),
        }
    }

    /// Primes of the claim's range at `n`, lower end exclusive.
    pub fn primes(&self, n: u64, sieve: &PrimeSieve) -> Result<Vec<u64>> {
        let hi = self.hi_coeff.scale(n);
        match self.lo {
            LowerEdge::Sqrt4n => {
                let start = (4 * n).sqrt() + 1;
                let end = hi.floor_of() as u64;
                sieve.cover(end)?;
                Ok(sieve.iter_range(start, end).collect())
            }
            LowerEdge::Coeff(c) => sieve.primes_in(c.scale(n), hi),
        }
    }
}

/// `c·n` written as `n`, `3n`, `n/6`, `2n/11`.
fn render_n(c: Rational) -> String {
    let k = if c.num() == 1 { String::new() } else { c.num().to_string() };
    if c.den() == 1 {
        format!("{k}n")
    } else {
        format!("{k}n/{}", c.den())
    }
}

const CHAINS: [(u8, &str); 17] = [
    (2, "2p < n/2 < 3p < 8p < 3n/2 < 9p < 11p <= 2n"),
    (3, "p < n/3 < 2p < 5p < n < 6p < 7p <= 4n/3"),
    (4, "5p <= n < 6p < 15p <= 3n < 16p < 20p <= 4n < 21p"),
    (5, "p < n/3 < 2p < 4p < n < 5p < 6p <= 4n/3"),
    (6, "4p < n < 5p < 13p < 3n < 14p < 17p < 4n < 18p"),
    (8, "4p <= n < 5p < 12p <= 3n < 13p < 16p <= 4n < 17p"),
    (9, "p < n/3 < 2p < 3p < n < 4p < 5p <= 4n/3"),
    (11, "3p < n < 4p < 10p <= 3n < 11p < 13p < 4n < 14p"),
    (12, "p < n/2 < 2p < 4p < 3n/2 < 5p < 6p <= 2n"),
    (13, "n/3 < p < 2p < n < 3p <= 4n/3"),
    (14, "2p <= n < 3p < 6p <= 3n < 7p < 8p <= 4n < 9p"),
    (15, "n/2 < p < 2p < 3n/2 < 3p <= 2n"),
    (16, "p < n < 2p < 4p <= 3n < 5p < 4n < 6p"),
    (17, "n/2 < p < 3n/2 < 2p <= 2n"),
    (18, "p <= n < 2p < 3p <= 3n < 4p <= 4n < 5p"),
    (20, "n < p < 2p <= 3n < 4n < 3p"),
    (22, "n < p <= 3n < 4n < 2p"),
];

/// The 22 claims in order. Claims 1, 7, 10, 19 and 21 state their
/// consequence without an inequality chain.
pub fn claim_table() -> Vec<Claim> {
    use Consequence::*;
    let q = Rational::from_parts_unchecked;
    let his = [
        q(1, 6),
        q(2, 11),
        q(4, 21),
        q(1, 5),
        q(2, 9),
        q(3, 13),
        q(4, 17),
        q(1, 4),
        q(4, 15),
        q(2, 7),
        q(3, 10),
        q(1, 3),
        q(4, 9),
        q(1, 2),
        q(2, 3),
        q(3, 4),
        q(4, 5),
        q(1, 1),
        q(4, 3),
        q(3, 2),
        q(2, 1),
        q(3, 1),
    ];
    let cons = [
        Primorial16th, DividesB, DividesA, BetaZero, DividesA, BetaZero, DividesC, BetaZero,
        DividesA, DividesD, BetaZero, DividesB, DividesA, BetaZero, DividesB, BetaZero, DividesB,
        BetaZero, DividesA, BetaZero, DividesB, BetaZero,
    ];
    (0..22)
        .map(|i| {
            let id = i as u8 + 1;
            let chain = CHAINS
                .iter()
                .find(|(k, _)| *k == id)
                .map(|(_, s)| s.parse().expect("chain table parses"));
            Claim {
                id,
                lo: if i == 0 { LowerEdge::Sqrt4n } else { LowerEdge::Coeff(his[i - 1]) },
                hi_coeff: his[i],
                consequence: cons[i],
                chain,
            }
        })
        .collect()
}

pub fn claim(id: u8) -> Result<Claim> {
    claim_table()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::Domain(format!("no claim with id {id}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRow {
    pub id: u8,
    pub lo: String,
    pub hi: String,
    pub consequence: Consequence,
    pub chain: String,
}

pub fn claim_table_rows() -> Vec<ClaimRow> {
    claim_table()
        .into_iter()
        .map(|c| ClaimRow {
            id: c.id,
            lo: match c.lo {
                LowerEdge::Sqrt4n => "sqrt(4n)".into(),
                LowerEdge::Coeff(x) => render_n(x),
            },
            hi: render_n(c.hi_coeff),
            consequence: c.consequence,
            chain: c.chain.as_ref().map(|ch| ch.source().to_owned()).unwrap_or_default(),
        })
        .collect()
}

pub fn claim_table_json() -> Result<String> {
    Ok(serde_json::to_string_pretty(&claim_table_rows())?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim_id: u8,
    pub n: u64,
    pub primes_checked: u64,
    pub failures: Vec<(u64, String)>,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the claim's consequence for every prime of its range at `n`.
pub fn check_claim(claim: &Claim, n: u64, sieve: &PrimeSieve) -> Result<ClaimResult> {
    if n == 0 {
        return Err(Error::Precondition("n must be ≥ 1".into()));
    }
    sieve.cover(4 * n)?;
    let primes = if matches!(claim.lo, LowerEdge::Coeff(c) if c >= claim.hi_coeff) {
        Vec::new()
    } else {
        claim.primes(n, sieve)?
    };
    let mut failures = Vec::new();
    match claim.consequence {
        Consequence::BetaZero => {
            for &p in &primes {
                let b = beta_unchecked(n, p);
                if b != 0 {
                    failures.push((p, format!("β({p}) = {b}")));
                }
            }
        }
        Consequence::Primorial16th => {
            if !primes.is_empty() && !product_le_pow4(&primes, claim.hi_coeff.scale(n)) {
                let top = *primes.last().expect("nonempty");
                failures.push((top, format!("product over the range exceeds 4^({n}/6)")));
            }
        }
        c => {
            let which = c.absorber().expect("divides-type consequence");
            let idx = which.index(n);
            for &p in &primes {
                let b = beta_unchecked(n, p);
                if b == 0 {
                    continue;
                }
                match &idx {
                    Ok(idx) => {
                        let v = gen_binomial_valuation(idx, p);
                        if v < b {
                            failures.push((p, format!("v_p({which}) = {v} < β({p}) = {b}")));
                        }
                    }
                    Err(_) => failures.push((p, format!("β({p}) = {b} but {which} is undefined at n = {n}"))),
                }
            }
        }
    }
    Ok(ClaimResult {
        claim_id: claim.id,
        n,
        primes_checked: primes.len() as u64,
        failures,
    })
}

/// Checks the claim's displayed chain over its range at `n`. Claims without a
/// chain pass vacuously.
pub fn check_chain(claim: &Claim, n: u64) -> Result<Vec<LinkFailure>> {
    let Some(chain) = &claim.chain else {
        return Ok(Vec::new());
    };
    let LowerEdge::Coeff(lo) = claim.lo else {
        return Err(Error::Internal("chains are only attached to rational ranges".into()));
    };
    let hi = claim.hi_coeff.scale(n);
    let hi_is_prime = hi.is_integer() && crate::prime_engine::is_prime_u64(hi.num() as u64);
    Ok(check_chain_on(chain, n, lo.scale(n), hi, hi_is_prime))
}

/// Smallest `n` such that the claim passes for every `n'` in `[n, n_max]`.
pub fn minimal_valid_n(claim: &Claim, n_max: u64, sieve: &PrimeSieve) -> Result<Option<u64>> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be ≥ 1".into()));
    }
    let mut n = n_max;
    loop {
        if !check_claim(claim, n, sieve)?.passed() {
            return Ok(if n == n_max { None } else { Some(n + 1) });
        }
        if n == 1 {
            return Ok(Some(1));
        }
        n -= 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingReport {
    pub ok: bool,
    /// from this `n` on, `√(4n) ≤` the upper end of the first claim
    pub nonempty_from: u64,
    pub problems: Vec<String>,
}

/// Checks on the coefficients alone that the ranges run from `√(4n)` to `3n`
/// in order, each starting where the previous one ends.
pub fn check_tiling(table: &[Claim]) -> TilingReport {
    let mut problems = Vec::new();
    if table.len() != 22 {
        problems.push(format!("expected 22 claims, got {}", table.len()));
    }
    let Some(first) = table.first() else {
        return TilingReport { ok: false, nonempty_from: 0, problems };
    };
    if first.lo != LowerEdge::Sqrt4n {
        problems.push("claim 1 must start at √(4n)".into());
    }
    for w in table.windows(2) {
        match w[1].lo {
            LowerEdge::Coeff(c) if c == w[0].hi_coeff => {}
            _ => problems.push(format!("claim {} does not start where claim {} ends", w[1].id, w[0].id)),
        }
        if w[1].hi_coeff <= w[0].hi_coeff {
            problems.push(format!("claim {} is empty or reversed", w[1].id));
        }
    }
    if table.last().map(|c| c.hi_coeff) != Some(Rational::integer(3)) {
        problems.push("last claim must end at 3n".into());
    }
    // √(4n) ≤ (a/b)n  ⟺  n ≥ 4b²/a²
    let (a, b) = (first.hi_coeff.num() as u64, first.hi_coeff.den() as u64);
    let nonempty_from = (4 * b * b).div_ceil(a * a);
    TilingReport {
        ok: problems.is_empty(),
        nonempty_from,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime_engine::build_sieve;

    #[test]
    fn table_shape() {
        let t = claim_table();
        assert_eq!(t.len(), 22);
        assert_eq!(t[3].lo_coeff(), Some(Rational::new(4, 21).unwrap()));
        assert_eq!(t[3].hi_coeff, Rational::new(1, 5).unwrap());
        assert_eq!(t[3].consequence, Consequence::BetaZero);
        assert_eq!(t[18].lo_coeff(), Some(Rational::integer(1)));
        assert_eq!(t[18].hi_coeff, Rational::new(4, 3).unwrap());
        assert_eq!(t[18].consequence, Consequence::DividesA);
        assert_eq!(t[21].consequence, Consequence::BetaZero);
        assert_eq!(t[21].hi_coeff, Rational::integer(3));
        for id in [1, 7, 10, 19, 21] {
            assert!(t[id - 1].chain.is_none(), "claim {id}");
        }
        assert_eq!(t.iter().filter(|c| c.chain.is_some()).count(), 17);
    }

    #[test]
    fn tiling() {
        let r = check_tiling(&claim_table());
        assert!(r.ok, "{:?}", r.problems);
        assert_eq!(r.nonempty_from, 144);
        let mut broken = claim_table();
        broken.swap(4, 5);
        assert!(!check_tiling(&broken).ok);
    }

    #[test]
    fn rows_render() {
        let rows = claim_table_rows();
        assert_eq!(rows[0].lo, "sqrt(4n)");
        assert_eq!(rows[0].hi, "n/6");
        assert_eq!(rows[1].hi, "2n/11");
        assert_eq!(rows[17].hi, "n");
        assert_eq!(rows[21].hi, "3n");
        assert!(claim_table_json().unwrap().contains("PRIMORIAL_16TH"));
    }

    #[test]
    fn claim_examples() {
        let s = build_sieve(4000).unwrap();
        let r = check_claim(&claim(22).unwrap(), 100, &s).unwrap();
        assert!(r.passed());
        assert_eq!(r.primes_checked, s.primes_between(200, 300).unwrap().len() as u64);
        let r = check_claim(&claim(19).unwrap(), 100, &s).unwrap();
        assert!(r.passed());
        assert_eq!(r.primes_checked, 7); // 101 … 131
        let r = check_claim(&claim(2).unwrap(), 66, &s).unwrap();
        assert!(r.passed());
        assert_eq!(r.primes_checked, 0);
    }

    #[test]
    fn small_n_failure_is_reported() {
        let s = build_sieve(4000).unwrap();
        // the sweep puts claim 2's threshold at 138
        let r = check_claim(&claim(2).unwrap(), 137, &s).unwrap();
        assert!(!r.passed());
        assert_eq!(minimal_valid_n(&claim(2).unwrap(), 600, &s).unwrap(), Some(138));
    }

    #[test]
    fn chain_examples() {
        for id in [2, 14, 20] {
            assert!(check_chain(&claim(id).unwrap(), 1000).unwrap().is_empty(), "claim {id}");
        }
        assert!(check_chain(&claim(20).unwrap(), 12).unwrap().is_empty());
        // 3n/13 = 3 is prime at n = 13, where 13p < 3n breaks
        assert!(!check_chain(&claim(6).unwrap(), 13).unwrap().is_empty());
        assert!(check_chain(&claim(7).unwrap(), 13).unwrap().is_empty());
    }

    #[test]
    fn coverage_is_enforced() {
        let s = build_sieve(100).unwrap();
        assert!(matches!(
            check_claim(&claim(3).unwrap(), 30, &s),
            Err(Error::Coverage { .. })
        ));
    }
}

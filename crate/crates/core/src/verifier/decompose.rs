use std::fmt;

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bigmath::{binomial, ln_biguint_f64};
use crate::error::{Error, Result};
use crate::exact_arith::{
    absorber, beta_at_most_one, check_T1_bound, check_T2_divisibility_bound, decompose, Absorber,
};
use crate::prime_engine::PrimeSieve;
use crate::stirling_bounds::{
    decide, ln_absorber_upper, ln_binom_lower, t3_lower_bound, BoundReport, LogEstimate, LogReal, T3LowerBound,
    Precision, Tracked,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// inside the numerical error band
    Indeterminate,
    /// the reason, starting with `not applicable` or `pole: not applicable`
    NotApplicable(String),
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// `exact < bound`, where `exact` is an f64 log of an exact integer.
    pub fn log_below(exact: f64, bound: LogEstimate) -> Self {
        let band = bound.err + 1e-12 * exact.abs().max(bound.value.abs()).max(1.0);
        if exact < bound.value - band {
            Status::Pass
        } else if exact > bound.value + band {
            Status::Fail
        } else {
            Status::Indeterminate
        }
    }

    /// `bound ≤ exact`.
    pub fn log_above(exact: f64, bound: LogEstimate) -> Self {
        let band = bound.err + 1e-12 * exact.abs().max(bound.value.abs()).max(1.0);
        if bound.value + band <= exact {
            Status::Pass
        } else if bound.value - band > exact {
            Status::Fail
        } else {
            Status::Indeterminate
        }
    }

    /// Orders `ln x` against a log bound recomputed at rising precision;
    /// `Pass` when the order is `want`.
    pub fn exact_vs_bound(
        x: &BigUint,
        want: Ordering,
        prec: Precision,
        bound: impl Fn(usize) -> Result<LogReal>,
    ) -> Result<Self> {
        let r = decide(prec, || "exact log against a bound".into(), |bits| {
            let lx = Tracked::ln_biguint(x, bits)?;
            Ok(lx.cmp_band(bound(bits)?.ln_value()))
        });
        match r {
            Ok(o) => Ok(Status::from_bool(o == want)),
            Err(Error::Indeterminate { .. }) => Ok(Status::Indeterminate),
            Err(e) => Err(e),
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Status::Fail | Status::Indeterminate)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("pass"),
            Status::Fail => f.write_str("FAIL"),
            Status::Indeterminate => f.write_str("indeterminate"),
            Status::NotApplicable(why) => f.write_str(why),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub n: u64,
    pub t1: String,
    pub t2: String,
    pub t3: String,
    pub ln_t1: f64,
    pub ln_t2: f64,
    pub ln_t3: f64,
    pub ln_binomial: f64,
    /// primes in `[3n, 4n]`
    pub closed_interval_count: u64,
    /// primes in `(3n, 4n)`
    pub open_interval_count: u64,
    pub bounds: BoundReport,
    pub checks: Vec<InequalityCheck>,
}

impl DecomposeReport {
    pub fn ok(&self) -> bool {
        !self.checks.iter().any(|c| c.status.is_failure())
    }

    pub fn check(&self, name: &str) -> Option<&Status> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.status)
    }
}

fn not_applicable(why: impl Into<String>) -> Status {
    Status::NotApplicable(why.into())
}

/// Factors `C(4n, 3n)` and runs every inequality that applies at `n`.
pub fn cmd_decompose(n: u64) -> Result<DecomposeReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be ≥ 1".into()));
    }
    let sieve = PrimeSieve::new(4 * n)?;
    decompose_with(n, &sieve, Precision::default())
}

pub fn decompose_with(n: u64, sieve: &PrimeSieve, prec: Precision) -> Result<DecomposeReport> {
    let d = decompose(n, sieve)?;
    let exact = binomial(4 * n, 3 * n);
    let ln_binomial = ln_biguint_f64(&exact);
    let bounds = BoundReport::compute(n, prec.bits)?;
    let (ln_t1, ln_t2, ln_t3) = (d.t1.ln_f64(), d.t2.ln_f64(), d.t3.ln_f64());
    let open = sieve.pi(4 * n - 1)? - sieve.pi(3 * n)?;
    let closed = sieve.pi(4 * n)? - sieve.pi(3 * n - 1)?;

    let mut checks = Vec::new();
    let mut push = |name: &str, status: Status| {
        checks.push(InequalityCheck {
            name: name.into(),
            status,
        })
    };
    push("C(4n,3n) = T1·T2·T3", Status::from_bool(d.product() == exact));
    push("β(p) ≤ 1 for √(4n) < p ≤ 3n", Status::from_bool(beta_at_most_one(n, sieve)?));
    push(
        "T2 ≤ 4^(n/6)·ABCD",
        match check_T2_divisibility_bound(n, sieve) {
            Ok(b) => Status::from_bool(b),
            Err(Error::Domain(e)) => not_applicable(format!("not applicable: {e}")),
            Err(e) => return Err(e),
        },
    );
    push(
        "T1 < (4n)^√n",
        match check_T1_bound(n, sieve) {
            Ok(b) => Status::from_bool(b),
            Err(Error::Precondition(e)) => not_applicable(format!("not applicable: {e}")),
            Err(e) => return Err(e),
        },
    );
    push(
        "binomial lower bound < C(4n,3n)",
        Status::exact_vs_bound(&exact, Ordering::Greater, prec, |b| ln_binom_lower(n, b))?,
    );
    let uppers = [
        (Absorber::A, Some(bounds.ln_A_upper)),
        (Absorber::B, Some(bounds.ln_B_upper)),
        (Absorber::C, bounds.ln_C_upper),
        (Absorber::D, bounds.ln_D_upper),
    ];
    for (x, bound) in uppers {
        let name = format!("{x} < {x} upper bound");
        let status = match (bound, absorber(x, n)) {
            (Some(_), Ok(v)) => {
                Status::exact_vs_bound(&v, Ordering::Less, prec, |b| ln_absorber_upper(x, n, b))?
            }
            (None, _) => not_applicable("pole: not applicable"),
            (_, Err(e)) => not_applicable(format!("not applicable: {e}")),
        };
        push(&name, status);
    }
    match (bounds.ln_T3_intermediate, bounds.ln_T3_lower, bounds.count_lower_bound) {
        (Some(_), Some(t3), Some(count)) => {
            let t3_exact = d.t3.to_biguint();
            let above = |route: fn(&T3LowerBound) -> LogReal| {
                Status::exact_vs_bound(&t3_exact, Ordering::Greater, prec, |b| {
                    Ok(route(&t3_lower_bound(n, b)?))
                })
            };
            push("T3 intermediate lower bound ≤ T3", above(|t| t.intermediate.clone())?);
            push(
                "T3 lower bound ≤ T3",
                if bounds.simplification_holds == Some(true) || t3.value < 0.0 {
                    above(|t| t.simplified.clone())?
                } else {
                    not_applicable("not applicable: the prefactor simplification needs n ≥ 307")
                },
            );
            push(
                "count lower bound ≤ #primes in (3n, 4n)",
                Status::from_bool(count.value + count.err <= open as f64),
            );
        }
        _ => {
            for name in [
                "T3 intermediate lower bound ≤ T3",
                "T3 lower bound ≤ T3",
                "count lower bound ≤ #primes in (3n, 4n)",
            ] {
                push(name, not_applicable("pole: not applicable (needs n ≥ 222)"));
            }
        }
    }
    push("report chain consistency", Status::from_bool(bounds.check_consistency()));

    Ok(DecomposeReport {
        n,
        t1: d.t1.render(),
        t2: d.t2.render(),
        t3: d.t3.render(),
        ln_t1,
        ln_t2,
        ln_t3,
        ln_binomial,
        closed_interval_count: closed,
        open_interval_count: open,
        bounds,
        checks,
    })
}

//! The Stirling-type envelopes `f`, `g` and the checks built directly on them.
//!
//! `ln f(x) = ½ln(2π) + (x + ½)ln x − x + 1/(12x)` and `ln g` is the same with
//! `1/(12x + 1)`. `ln n!` is computed independently as a wide-precision sum of
//! correctly rounded `ln k`, never through `f` or `g`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::real::{decide, LogReal, Precision, Tracked};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn half_ln_two_pi(prec: usize) -> Result<Tracked> {
    let two_pi = Tracked::pi(prec).mul_u64(2);
    let half = Tracked::from_rational(Rational::from_parts_unchecked(1, 2), prec);
    Ok(two_pi.ln()?.mul(&half))
}

fn stirling_core(x: &Tracked, correction_den: Tracked) -> Result<Tracked> {
    let prec = x.precision();
    if x.sign_band() != Some(Ordering::Greater) {
        return Err(Error::Domain("f and g are defined for x > 0".into()));
    }
    let half = Tracked::from_rational(Rational::from_parts_unchecked(1, 2), prec);
    let main = x.add(&half).mul(&x.ln()?).sub(x);
    Ok(half_ln_two_pi(prec)?.add(&main).add(&correction_den.recip()?))
}

/// `ln f(x)`.
pub fn ln_f(x: &Tracked) -> Result<LogReal> {
    let den = x.mul_u64(12);
    stirling_core(x, den).map(LogReal::from_ln)
}

/// `ln g(x)`.
pub fn ln_g(x: &Tracked) -> Result<LogReal> {
    let den = x.mul_u64(12).add(&Tracked::from_u64(1, x.precision()));
    stirling_core(x, den).map(LogReal::from_ln)
}

/// `ln n!` as a wide-precision sum of rounded `ln k`; the error bound is the sum of
/// the per-term rounding bounds.
pub fn ln_factorial(n: u64, prec: usize) -> Result<LogReal> {
    let mut acc = Tracked::zero(prec);
    for k in 2..=n {
        acc = acc.add_wide(&Tracked::from_u64(k, prec).ln()?);
    }
    Ok(LogReal::from_ln(acc))
}

fn sandwich_at(n: u64, ln_fact: &LogReal, prec: usize) -> Result<Option<bool>> {
    let x = Tracked::from_u64(n, prec);
    let lo = ln_g(&x)?.lt(ln_fact);
    let hi = ln_fact.lt(&ln_f(&x)?);
    Ok(match (lo, hi) {
        (Some(a), Some(b)) => Some(a && b),
        (Some(false), _) | (_, Some(false)) => Some(false),
        _ => None,
    })
}

/// `g(n) < n! < f(n)`, each strict inequality clearing the error band.
pub fn check_factorial_sandwich(n: u64, prec: Precision) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("the factorial sandwich needs n ≥ 1".into()));
    }
    decide(prec, || format!("g({n}) < {n}! < f({n})"), |bits| {
        let fact = ln_factorial(n, bits)?;
        sandwich_at(n, &fact, bits)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichScan {
    pub n_max: u64,
    pub failures: Vec<u64>,
    /// `n` that needed more than the working precision.
    pub escalated: Vec<u64>,
}

/// Check the sandwich for every `n` in `[1, n_max]` with one running sum of
/// `ln k`. Indeterminate points are re-decided individually at higher precision.
pub fn scan_factorial_sandwich(n_max: u64, prec: Precision) -> Result<SandwichScan> {
    let bits = prec.bits;
    let mut scan = SandwichScan {
        n_max,
        failures: Vec::new(),
        escalated: Vec::new(),
    };
    let mut acc = Tracked::zero(bits);
    for n in 1..=n_max {
        if n >= 2 {
            acc = acc.add_wide(&Tracked::from_u64(n, bits).ln()?);
        }
        let ok = match sandwich_at(n, &LogReal::from_ln(acc.clone()), bits)? {
            Some(ok) => ok,
            None => {
                scan.escalated.push(n);
                check_factorial_sandwich(n, prec)?
            }
        };
        if !ok {
            scan.failures.push(n);
        }
    }
    Ok(scan)
}

/// Exact rational value of a finite f64.
pub(crate) fn f64_to_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite grid point {x}")));
    }
    if x == 0.0 {
        return Ok(Rational::integer(0));
    }
    let bits = x.to_bits();
    let sign: i128 = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = if exp == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    let e = exp - 1075;
    let m = mantissa as i128 * sign;
    if e >= 0 {
        if e > 60 {
            return Err(Error::Domain(format!("grid point {x} too large")));
        }
        Ok(Rational::integer(m << e))
    } else if -e <= 120 {
        Rational::new(m, 1i128 << (-e))
    } else {
        Err(Error::Domain(format!("grid point {x} too small")))
    }
}

fn ensure_ascending(grid: &[f64], lo: Rational, hi: Option<Rational>) -> Result<Vec<Rational>> {
    let pts: Vec<Rational> = grid.iter().map(|&x| f64_to_rational(x)).collect::<Result<_>>()?;
    for w in pts.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Precondition("grid must be strictly ascending".into()));
        }
    }
    for &x in &pts {
        if x < lo || hi.is_some_and(|h| x > h) {
            return Err(Error::Precondition(format!(
                "grid point {} outside [{lo}, {}]",
                x.to_f64(),
                hi.map(|h| h.to_string()).unwrap_or_else(|| "∞".into())
            )));
        }
    }
    Ok(pts)
}

/// `ln h1(x) = ln f(x + c) − ln g(c) − ln g(x)`.
pub fn ln_h1(c: Rational, x: &Tracked) -> Result<Tracked> {
    let prec = x.precision();
    let c = Tracked::from_rational(c, prec);
    Ok(ln_f(&x.add(&c))?
        .ln_value()
        .sub(ln_g(&c)?.ln_value())
        .sub(ln_g(x)?.ln_value()))
}

/// `ln h2(x) = ln f(c) − ln g(x) − ln g(c − x)`.
pub fn ln_h2(c: Rational, x: &Tracked) -> Result<Tracked> {
    let prec = x.precision();
    let c = Tracked::from_rational(c, prec);
    Ok(ln_f(&c)?
        .ln_value()
        .sub(ln_g(x)?.ln_value())
        .sub(ln_g(&c.sub(x))?.ln_value()))
}

/// `h1` strictly increasing along the grid, for fixed `c ≥ 1/12` and grid
/// points `≥ 1/2`.
pub fn scan_h1_monotone(c: Rational, grid: &[f64], prec: Precision) -> Result<bool> {
    if c < Rational::from_parts_unchecked(1, 12) {
        return Err(Error::Domain(format!("h1 needs c ≥ 1/12, got {c}")));
    }
    ensure_ascending(grid, Rational::from_parts_unchecked(1, 2), None)?;
    decide(prec, || format!("h1 monotonicity at c = {c}"), |bits| {
        let vals: Vec<Tracked> = grid
            .iter()
            .map(|&x| ln_h1(c, &Tracked::from_f64(x, bits)))
            .collect::<Result<_>>()?;
        let mut unsure = false;
        for w in vals.windows(2) {
            match w[1].cmp_band(&w[0]) {
                Some(Ordering::Greater) => {}
                Some(_) => return Ok(Some(false)),
                None => unsure = true,
            }
        }
        Ok(if unsure { None } else { Some(true) })
    })
}

/// `h2` strictly increasing on grid points `≤ c/2`, strictly decreasing on
/// points `≥ c/2`, and `h2(x) = h2(c − x)` to within the error band.
pub fn scan_h2_unimodal(c: Rational, grid: &[f64], prec: Precision) -> Result<bool> {
    if c < Rational::integer(1) {
        return Err(Error::Domain(format!("h2 scan needs c ≥ 1, got {c}")));
    }
    let half = Rational::from_parts_unchecked(1, 2);
    let pts = ensure_ascending(grid, half, Some(c - half))?;
    let mid = c * half;
    decide(prec, || format!("h2 unimodality at c = {c}"), |bits| {
        let xs: Vec<Tracked> = grid.iter().map(|&x| Tracked::from_f64(x, bits)).collect();
        let vals: Vec<Tracked> = xs.iter().map(|x| ln_h2(c, x)).collect::<Result<_>>()?;
        let mut unsure = false;
        for i in 1..pts.len() {
            let want = if pts[i] <= mid {
                Ordering::Greater
            } else if pts[i - 1] >= mid {
                Ordering::Less
            } else {
                continue;
            };
            match vals[i].cmp_band(&vals[i - 1]) {
                Some(o) if o == want => {}
                Some(_) => return Ok(Some(false)),
                None => unsure = true,
            }
        }
        let cc = Tracked::from_rational(c, bits);
        for (x, v) in xs.iter().zip(&vals) {
            let mirrored = ln_h2(c, &cc.sub(x))?;
            if !v.indistinguishable(&mirrored) {
                return Ok(Some(false));
            }
        }
        Ok(if unsure { None } else { Some(true) })
    })
}

/// `count` points from `lo` to `hi` with a constant ratio; endpoints exact.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    let mut g: Vec<f64> = (0..count).map(|k| lo * (ratio * k as f64).exp()).collect();
    g[0] = lo;
    g[count - 1] = hi;
    g
}

/// `count` evenly spaced points from `lo` to `hi`; endpoints exact.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    let mut g: Vec<f64> = (0..count).map(|k| lo + step * k as f64).collect();
    g[count - 1] = hi;
    g
}

//! High-precision reals with a tracked absolute error bound.
//!
//! A [`Tracked`] value is a correctly rounded [`BigFloat`] together with an
//! upper bound on its distance from the true quantity. Every operation adds
//! the propagated input error and its own rounding error (at most
//! `2^(exponent - precision)`), so the bound only grows. Comparisons are
//! three-way: they answer only when the difference clears the joint band.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Inflation applied to f64 error arithmetic so that the bounds stay upper bounds.
const UP: f64 = 1.0 + 8.0 * f64::EPSILON;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision and the escalation ceiling, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub bits: usize,
    pub max_bits: usize,
}

impl Precision {
    pub const DEFAULT_BITS: usize = 128;
    pub const DEFAULT_MAX_BITS: usize = 2048;

    pub fn new(bits: usize) -> Self {
        Precision {
            bits,
            max_bits: bits.max(Self::DEFAULT_MAX_BITS),
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            bits: Self::DEFAULT_BITS,
            max_bits: Self::DEFAULT_MAX_BITS,
        }
    }
}

/// Run `f` at the working precision, doubling on an indeterminate answer
/// until `max_bits`.
pub fn decide<T>(
    prec: Precision,
    what: impl Fn() -> String,
    mut f: impl FnMut(usize) -> Result<Option<T>>,
) -> Result<T> {
    let mut bits = prec.bits;
    loop {
        if let Some(v) = f(bits)? {
            return Ok(v);
        }
        if bits >= prec.max_bits {
            return Err(Error::Indeterminate {
                what: what(),
                max_bits: prec.max_bits,
            });
        }
        bits = (bits * 2).min(prec.max_bits);
    }
}

#[derive(Clone)]
pub struct Tracked {
    value: BigFloat,
    err: f64,
    prec: usize,
}

/// Upper bound on the rounding error of a result `v` at `p` bits.
fn rounding(v: &BigFloat, p: usize) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let e = v.exponent().unwrap_or(0) as i64 - p as i64;
    if e < -1020 {
        f64::MIN_POSITIVE
    } else {
        2f64.powi(e as i32)
    }
}

/// f64 approximation, via a 64-bit rounding of the leading word.
fn to_f64(v: &BigFloat) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let mut v = v.clone();
    if v.set_precision(64, RoundingMode::ToEven).is_err() {
        return f64::NAN;
    }
    let (Some(words), Some(e)) = (v.mantissa_digits(), v.exponent()) else {
        return f64::NAN;
    };
    let top = *words.last().unwrap_or(&0) as f64;
    let mag = top * 2f64.powi(e - 64);
    if v.is_negative() {
        -mag
    } else {
        mag
    }
}

fn check_nan(v: BigFloat, what: &str) -> Result<BigFloat> {
    if v.is_nan() || v.is_inf() {
        Err(Error::Internal(format!("non-finite result in {what}")))
    } else {
        Ok(v)
    }
}

impl Tracked {
    fn from_value(value: BigFloat, err: f64, prec: usize) -> Self {
        Tracked { value, err, prec }
    }

    /// Build from an already-rounded value, charging its rounding error.
    fn rounded(value: BigFloat, err_in: f64, prec: usize) -> Self {
        let err = (err_in + rounding(&value, prec)) * UP;
        Tracked { value, err, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Tracked::from_value(BigFloat::from_u64(0, prec), 0.0, prec)
    }

    pub fn from_u64(k: u64, prec: usize) -> Self {
        // exact: a u64 fits in any precision ≥ 64 bits
        Tracked::from_value(BigFloat::from_u64(k, prec.max(64)), 0.0, prec)
    }

    pub fn from_i64(k: i64, prec: usize) -> Self {
        Tracked::from_value(BigFloat::from_i64(k, prec.max(64)), 0.0, prec)
    }

    /// Exact binary value of an f64.
    pub fn from_f64(x: f64, prec: usize) -> Self {
        Tracked::from_value(BigFloat::from_f64(x, prec.max(64)), 0.0, prec)
    }

    pub fn from_rational(q: Rational, prec: usize) -> Self {
        let num = BigFloat::from_i128(q.num(), prec.max(128));
        let den = BigFloat::from_i128(q.den(), prec.max(128));
        if q.den() == 1 {
            return Tracked::from_value(num, 0.0, prec);
        }
        Tracked::rounded(num.div(&den, prec, RM), 0.0, prec)
    }

    pub fn pi(prec: usize) -> Self {
        let v = with_consts(|cc| cc.pi(prec, RM));
        Tracked::rounded(v, 0.0, prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.value)
    }

    fn abs_upper(&self) -> f64 {
        to_f64(&self.value).abs() * UP * (1.0 + 2f64.powi(-60))
    }

    fn abs_lower(&self) -> f64 {
        to_f64(&self.value).abs() * (1.0 - 2f64.powi(-50))
    }

    pub fn add(&self, o: &Tracked) -> Tracked {
        let v = self.value.add(&o.value, self.prec, RM);
        Tracked::rounded(v, self.err + o.err, self.prec)
    }

    pub fn sub(&self, o: &Tracked) -> Tracked {
        let v = self.value.sub(&o.value, self.prec, RM);
        Tracked::rounded(v, self.err + o.err, self.prec)
    }

    /// Sum carried 64 bits wider than the working precision, for long
    /// accumulations where the per-step rounding should stay negligible.
    pub fn add_wide(&self, o: &Tracked) -> Tracked {
        let wide = self.prec + 64;
        let v = self.value.add(&o.value, wide, RM);
        let err = (self.err + o.err + rounding(&v, wide)) * UP;
        Tracked::from_value(v, err, self.prec)
    }

    pub fn neg(&self) -> Tracked {
        Tracked::from_value(self.value.neg(), self.err, self.prec)
    }

    pub fn mul(&self, o: &Tracked) -> Tracked {
        let v = self.value.mul(&o.value, self.prec, RM);
        let e = self.abs_upper() * o.err + o.abs_upper() * self.err + self.err * o.err;
        Tracked::rounded(v, e, self.prec)
    }

    pub fn mul_u64(&self, k: u64) -> Tracked {
        self.mul(&Tracked::from_u64(k, self.prec))
    }

    pub fn div(&self, o: &Tracked) -> Result<Tracked> {
        let b_lo = o.abs_lower() - o.err;
        if b_lo <= 0.0 {
            return Err(Error::Domain("division by a value not bounded away from 0".into()));
        }
        let v = check_nan(self.value.div(&o.value, self.prec, RM), "div")?;
        let q = to_f64(&v).abs() * UP + rounding(&v, self.prec);
        let e = (self.err + q * o.err) / b_lo;
        Ok(Tracked::rounded(v, e, self.prec))
    }

    pub fn recip(&self) -> Result<Tracked> {
        Tracked::from_u64(1, self.prec).div(self)
    }

    pub fn ln(&self) -> Result<Tracked> {
        let lo = self.abs_lower() - self.err;
        if !self.value.is_positive() || lo <= 0.0 {
            return Err(Error::Domain("logarithm of a value not bounded above 0".into()));
        }
        let v = check_nan(with_consts(|cc| self.value.ln(self.prec, RM, cc)), "ln")?;
        Ok(Tracked::rounded(v, self.err / lo, self.prec))
    }

    /// Natural log of a positive big integer at `prec` bits.
    ///
    /// Only the top `prec + 64` bits are converted (exactly); the dropped
    /// tail moves the log by less than `2^-(prec + 63)`, which is charged.
    pub fn ln_biguint(x: &BigUint, prec: usize) -> Result<Tracked> {
        if x.bits() == 0 {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let keep = prec as u64 + 64;
        let shift = x.bits().saturating_sub(keep);
        let top: BigUint = x >> shift;
        let wide = keep as usize + 128;
        let radix = BigFloat::from_f64(18446744073709551616.0, 128);
        let mut acc = BigFloat::from_u64(0, wide);
        for d in top.iter_u64_digits().rev() {
            acc = acc.mul(&radix, wide, RM).add(&BigFloat::from_u64(d, 64), wide, RM);
        }
        let mut ln = Tracked::from_value(acc, 0.0, prec).ln()?;
        if shift > 0 {
            let ln2 = Tracked::from_u64(2, prec).ln()?.mul_u64(shift);
            ln = ln.add(&ln2);
            ln.err = (ln.err + 2f64.powi(-(keep as i32 - 1))) * UP;
        }
        Ok(ln)
    }

    pub fn sqrt(&self) -> Result<Tracked> {
        let lo = self.abs_lower() - self.err;
        if !self.value.is_positive() || lo <= 0.0 {
            return Err(Error::Domain("square root of a value not bounded above 0".into()));
        }
        let v = check_nan(self.value.sqrt(self.prec, RM), "sqrt")?;
        Ok(Tracked::rounded(v, self.err / lo.sqrt(), self.prec))
    }

    /// Three-way comparison that answers only outside the joint error band.
    pub fn cmp_band(&self, o: &Tracked) -> Option<Ordering> {
        let d = self.sub(o);
        d.sign_band()
    }

    /// Sign of the value when it clears its own error band.
    pub fn sign_band(&self) -> Option<Ordering> {
        let band = BigFloat::from_f64(self.err, 64);
        if self.value.sign() == Some(Sign::Pos) && self.value.cmp(&band) == Some(1) {
            Some(Ordering::Greater)
        } else if self.value.is_negative() && self.value.neg().cmp(&band) == Some(1) {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// `true` when `|self - o|` is no larger than the joint band, i.e. the two
    /// cannot be told apart.
    pub fn indistinguishable(&self, o: &Tracked) -> bool {
        self.cmp_band(o).is_none()
    }
}

impl fmt::Debug for Tracked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.value, self.err)
    }
}

/// A strictly positive quantity carried by its natural logarithm.
#[derive(Clone, Debug)]
pub struct LogReal(Tracked);

impl LogReal {
    pub fn from_ln(ln: Tracked) -> Self {
        LogReal(ln)
    }

    pub fn ln_value(&self) -> &Tracked {
        &self.0
    }

    pub fn err(&self) -> f64 {
        self.0.err
    }

    pub fn ln_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn mul(&self, o: &LogReal) -> LogReal {
        LogReal(self.0.add(&o.0))
    }

    pub fn div(&self, o: &LogReal) -> LogReal {
        LogReal(self.0.sub(&o.0))
    }

    /// `Some(true)` if definitely below `o`, `Some(false)` if definitely above,
    /// `None` inside the band.
    pub fn lt(&self, o: &LogReal) -> Option<bool> {
        match self.0.cmp_band(&o.0) {
            Some(Ordering::Less) => Some(true),
            Some(_) => Some(false),
            None => None,
        }
    }

    pub fn estimate(&self) -> LogEstimate {
        LogEstimate::from_tracked(&self.0)
    }
}

/// f64 summary of a tracked value for reports: `value ± err`, where `err`
/// also covers the conversion to f64.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEstimate {
    pub value: f64,
    pub err: f64,
}

impl LogEstimate {
    pub fn from_tracked(t: &Tracked) -> Self {
        let value = t.to_f64();
        LogEstimate {
            value,
            err: (t.err + value.abs() * f64::EPSILON) * UP,
        }
    }
}

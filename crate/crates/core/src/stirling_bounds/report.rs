//! Per-`n` summary of the analytic bound chain, with JSON and CSV forms.

use std::io;

use serde::{Deserialize, Serialize};

use super::chain::{
    count_lower_bound, e_term, ln_absorber_upper, ln_binom_lower, ln_m, ln_m_as_printed,
    ln_t1_upper, simplified_count_bound, t3_lower_bound, M_FIRST_FACTOR_PRINTED,
    M_FIRST_FACTOR_USED, T3_BOUND_MIN_N,
};
use super::real::{LogEstimate, Tracked};
use crate::error::{Error, Result};
use crate::exact_arith::Absorber;

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub ln_binom_lower: LogEstimate,
    pub ln_A_upper: LogEstimate,
    pub ln_B_upper: LogEstimate,
    /// `None` at or below the pole at 221
    pub ln_C_upper: Option<LogEstimate>,
    /// `None` at or below the pole at 52
    pub ln_D_upper: Option<LogEstimate>,
    pub ln_T1_upper: LogEstimate,
    pub e_term: LogEstimate,
    pub ln_T3_lower: Option<LogEstimate>,
    pub count_lower_bound: Option<LogEstimate>,
    pub ln_T3_intermediate: Option<LogEstimate>,
    pub simplified_count_bound: Option<LogEstimate>,
    pub simplification_holds: Option<bool>,
    pub ln_m: LogEstimate,
    /// `ln M` with the printed first factor, which is not used anywhere
    pub ln_m_as_printed: LogEstimate,
    pub m_correction: String,
}

fn est(t: &Tracked) -> LogEstimate {
    LogEstimate::from_tracked(t)
}

impl BoundReport {
    pub fn compute(n: u64, prec: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be ≥ 1".into()));
        }
        let upper = |x: Absorber| -> Result<Option<LogEstimate>> {
            match ln_absorber_upper(x, n, prec) {
                Ok(v) => Ok(Some(v.estimate())),
                Err(Error::Domain(_)) => Ok(None),
                Err(e) => Err(e),
            }
        };
        let (t3, count, inter, simp, holds) = if n >= T3_BOUND_MIN_N {
            let b = t3_lower_bound(n, prec)?;
            (
                Some(b.simplified.estimate()),
                Some(est(&count_lower_bound(n, prec)?)),
                Some(b.intermediate.estimate()),
                Some(est(&simplified_count_bound(n, prec)?)),
                Some(b.simplification_holds),
            )
        } else {
            (None, None, None, None, None)
        };
        Ok(BoundReport {
            n,
            ln_binom_lower: ln_binom_lower(n, prec)?.estimate(),
            ln_A_upper: ln_absorber_upper(Absorber::A, n, prec)?.estimate(),
            ln_B_upper: ln_absorber_upper(Absorber::B, n, prec)?.estimate(),
            ln_C_upper: upper(Absorber::C)?,
            ln_D_upper: upper(Absorber::D)?,
            ln_T1_upper: ln_t1_upper(n, prec)?.estimate(),
            e_term: est(&e_term(n, prec)?),
            ln_T3_lower: t3,
            count_lower_bound: count,
            ln_T3_intermediate: inter,
            simplified_count_bound: simp,
            simplification_holds: holds,
            ln_m: est(&ln_m(prec)?),
            ln_m_as_printed: est(&ln_m_as_printed(prec)?),
            m_correction: m_correction_note(),
        })
    }

    /// Recomputes the intermediate `T3` bound from the component fields and
    /// checks it against the stored value; where the simplification holds the
    /// final bound must not exceed it.
    pub fn check_consistency(&self) -> bool {
        let (Some(c), Some(d), Some(inter), Some(t3)) = (
            self.ln_C_upper,
            self.ln_D_upper,
            self.ln_T3_intermediate,
            self.ln_T3_lower,
        ) else {
            return self.ln_T3_lower.is_none();
        };
        let sixth = self.n as f64 / 6.0 * 4f64.ln();
        let parts = [
            self.ln_binom_lower,
            self.ln_T1_upper,
            self.ln_A_upper,
            self.ln_B_upper,
            c,
            d,
        ];
        let recomputed = self.ln_binom_lower.value
            - self.ln_T1_upper.value
            - sixth
            - self.ln_A_upper.value
            - self.ln_B_upper.value
            - c.value
            - d.value;
        let mag: f64 = parts.iter().map(|p| p.value.abs()).sum::<f64>() + sixth;
        let band: f64 =
            parts.iter().map(|p| p.err).sum::<f64>() + inter.err + 16.0 * f64::EPSILON * mag;
        let chain_ok = (recomputed - inter.value).abs() <= band;
        let final_ok = match self.simplification_holds {
            Some(true) => t3.value <= inter.value + t3.err + inter.err,
            _ => true,
        };
        chain_ok && final_ok
    }

    pub const CSV_HEADER: [&'static str; 30] = [
        "n",
        "ln_binom_lower",
        "ln_binom_lower_err",
        "ln_A_upper",
        "ln_A_upper_err",
        "ln_B_upper",
        "ln_B_upper_err",
        "ln_C_upper",
        "ln_C_upper_err",
        "ln_D_upper",
        "ln_D_upper_err",
        "ln_T1_upper",
        "ln_T1_upper_err",
        "e_term",
        "e_term_err",
        "ln_T3_lower",
        "ln_T3_lower_err",
        "count_lower_bound",
        "count_lower_bound_err",
        "ln_T3_intermediate",
        "ln_T3_intermediate_err",
        "simplified_count_bound",
        "simplified_count_bound_err",
        "simplification_holds",
        "ln_m",
        "ln_m_err",
        "ln_m_as_printed",
        "ln_m_as_printed_err",
        "m_used_num",
        "m_used_den",
    ];

    /// Flat numeric row in `CSV_HEADER` order; absent values are empty cells.
    pub fn csv_row(&self) -> Vec<String> {
        let mut row = vec![self.n.to_string()];
        let mut push = |e: Option<LogEstimate>| match e {
            Some(e) => {
                row.push(e.value.to_string());
                row.push(e.err.to_string());
            }
            None => {
                row.push(String::new());
                row.push(String::new());
            }
        };
        push(Some(self.ln_binom_lower));
        push(Some(self.ln_A_upper));
        push(Some(self.ln_B_upper));
        push(self.ln_C_upper);
        push(self.ln_D_upper);
        push(Some(self.ln_T1_upper));
        push(Some(self.e_term));
        push(self.ln_T3_lower);
        push(self.count_lower_bound);
        push(self.ln_T3_intermediate);
        push(self.simplified_count_bound);
        row.push(match self.simplification_holds {
            Some(true) => "1".into(),
            Some(false) => "0".into(),
            None => String::new(),
        });
        let mut push = |e: LogEstimate| {
            row.push(e.value.to_string());
            row.push(e.err.to_string());
        };
        push(self.ln_m);
        push(self.ln_m_as_printed);
        row.push(M_FIRST_FACTOR_USED.0.to_string());
        row.push(M_FIRST_FACTOR_USED.1.to_string());
        row
    }

    pub fn from_csv_row(row: &[String]) -> Result<Self> {
        if row.len() != Self::CSV_HEADER.len() {
            return Err(Error::Report(format!(
                "expected {} columns, got {}",
                Self::CSV_HEADER.len(),
                row.len()
            )));
        }
        let bad = |i: usize| Error::Report(format!("bad value in column {}", Self::CSV_HEADER[i]));
        let num = |i: usize| row[i].parse::<f64>().map_err(|_| bad(i));
        let opt = |i: usize| -> Result<Option<LogEstimate>> {
            if row[i].is_empty() && row[i + 1].is_empty() {
                Ok(None)
            } else {
                Ok(Some(LogEstimate {
                    value: num(i)?,
                    err: num(i + 1)?,
                }))
            }
        };
        let req = |i: usize| opt(i)?.ok_or_else(|| bad(i));
        Ok(BoundReport {
            n: row[0].parse().map_err(|_| bad(0))?,
            ln_binom_lower: req(1)?,
            ln_A_upper: req(3)?,
            ln_B_upper: req(5)?,
            ln_C_upper: opt(7)?,
            ln_D_upper: opt(9)?,
            ln_T1_upper: req(11)?,
            e_term: req(13)?,
            ln_T3_lower: opt(15)?,
            count_lower_bound: opt(17)?,
            ln_T3_intermediate: opt(19)?,
            simplified_count_bound: opt(21)?,
            simplification_holds: match row[23].as_str() {
                "" => None,
                "1" => Some(true),
                "0" => Some(false),
                _ => return Err(bad(23)),
            },
            ln_m: req(24)?,
            ln_m_as_printed: req(26)?,
            m_correction: m_correction_note(),
        })
    }

    pub fn write_csv<W: io::Write>(reports: &[BoundReport], w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(Self::CSV_HEADER)?;
        for r in reports {
            out.write_record(r.csv_row())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: io::Read>(r: R) -> Result<Vec<BoundReport>> {
        let mut rd = csv::Reader::from_reader(r);
        let mut out = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let row: Vec<String> = rec.iter().map(str::to_owned).collect();
            out.push(Self::from_csv_row(&row)?);
        }
        Ok(out)
    }
}

pub fn m_correction_note() -> String {
    format!(
        "first factor of M taken as {}/{} (printed as {}/{})",
        M_FIRST_FACTOR_USED.0, M_FIRST_FACTOR_USED.1, M_FIRST_FACTOR_PRINTED.0, M_FIRST_FACTOR_PRINTED.1
    )
}

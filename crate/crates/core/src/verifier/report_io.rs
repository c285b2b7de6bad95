//! Text, CSV and JSON renderings of the command reports, and CSV parsers for
//! the sweep-style reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::decompose::DecomposeReport;
use super::{AnalyticReport, LowerBoundLine, SweepReport, OBSERVATION_CONTRACT_N};
use crate::error::{Error, Result};
use crate::observations::{ClaimSummary, ObservationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Precondition(format!("unknown format `{s}`"))),
        }
    }
}

pub trait WriteReport: Serialize {
    fn text(&self) -> String;

    fn csv(&self) -> Result<String>;

    fn json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Text => Ok(self.text()),
            ReportFormat::Csv => self.csv(),
            ReportFormat::Json => self.json(),
        }
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Report(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

fn csv_records(text: &str, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let got: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(Error::Report(format!("unexpected csv header {got:?}")));
    }
    rd.records()
        .map(|r| Ok(r?.iter().map(str::to_owned).collect()))
        .collect()
}

fn parse<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Report(format!("bad {what} `{s}` in csv")))
}

fn opt_cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn bool_cell(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

const SWEEP_HEADER: [&str; 7] = ["n_min", "n_max", "failures", "witnesses", "runtime_ms", "n", "witness"];

impl SweepReport {
    /// Columns of the leading summary row are filled only there; each later
    /// row carries one `n` (every `n` with witnesses on, failures otherwise),
    /// with an empty witness cell for a failure.
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_records(text, &SWEEP_HEADER)?;
        let (head, rest) = rows
            .split_first()
            .ok_or_else(|| Error::Report("missing summary row".into()))?;
        let n_min = parse(&head[0], "n_min")?;
        let n_max = parse(&head[1], "n_max")?;
        let n_fail: usize = parse(&head[2], "failures")?;
        let keep = parse::<u8>(&head[3], "witnesses")? == 1;
        let runtime_ms = parse(&head[4], "runtime_ms")?;
        let mut failures = Vec::new();
        let mut witness = keep.then(BTreeMap::new);
        for r in rest {
            let n: u64 = parse(&r[5], "n")?;
            if r[6].is_empty() {
                failures.push(n);
            } else if let Some(m) = witness.as_mut() {
                m.insert(n, parse(&r[6], "witness")?);
            }
        }
        if failures.len() != n_fail {
            return Err(Error::Report("failure count does not match rows".into()));
        }
        Ok(SweepReport {
            n_min,
            n_max,
            failures,
            witness,
            runtime_ms,
        })
    }
}

impl WriteReport for SweepReport {
    fn text(&self) -> String {
        let mut s = format!(
            "range [{}, {}]: {} failure(s), {} ms\n",
            self.n_min,
            self.n_max,
            self.failures.len(),
            self.runtime_ms
        );
        for n in &self.failures {
            let _ = writeln!(s, "  no admissible prime at n = {n}");
        }
        s
    }

    fn csv(&self) -> Result<String> {
        let summary = vec![
            self.n_min.to_string(),
            self.n_max.to_string(),
            self.failures.len().to_string(),
            bool_cell(self.witness.is_some()),
            self.runtime_ms.to_string(),
            String::new(),
            String::new(),
        ];
        let mut rows: Vec<(u64, String)> = self.failures.iter().map(|&n| (n, String::new())).collect();
        if let Some(w) = &self.witness {
            rows.extend(w.iter().map(|(&n, &p)| (n, p.to_string())));
        }
        rows.sort_by_key(|r| r.0);
        let body = rows.into_iter().map(|(n, p)| {
            let mut r = vec![String::new(); 5];
            r.push(n.to_string());
            r.push(p);
            r
        });
        csv_string(&SWEEP_HEADER, std::iter::once(summary).chain(body))
    }
}

const LOWER_HEADER: [&str; 5] = ["n", "bound", "bound_err", "actual", "satisfied"];

impl LowerBoundLine {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_records(text, &LOWER_HEADER)?;
        let r = rows.first().ok_or_else(|| Error::Report("missing row".into()))?;
        Ok(LowerBoundLine {
            n: parse(&r[0], "n")?,
            bound: parse(&r[1], "bound")?,
            bound_err: parse(&r[2], "bound_err")?,
            actual: parse(&r[3], "actual")?,
            satisfied: parse::<u8>(&r[4], "satisfied")? == 1,
        })
    }
}

impl WriteReport for LowerBoundLine {
    fn text(&self) -> String {
        format!(
            "n = {}: bound {:.6} (± {:.1e}), primes in (3n, 4n) = {}, {}\n",
            self.n,
            self.bound,
            self.bound_err,
            self.actual,
            if self.satisfied { "satisfied" } else { "VIOLATED" }
        )
    }

    fn csv(&self) -> Result<String> {
        csv_string(
            &LOWER_HEADER,
            [vec![
                self.n.to_string(),
                self.bound.to_string(),
                self.bound_err.to_string(),
                self.actual.to_string(),
                bool_cell(self.satisfied),
            ]],
        )
    }
}

const ANALYTIC_HEADER: [&str; 6] = ["n", "ln_t3_lower", "err", "positive", "diff", "diff_positive"];

impl WriteReport for AnalyticReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ln M = {:.15}; {}", self.ln_m, self.m_correction);
        for x in &self.samples {
            let _ = writeln!(
                s,
                "  n = {:>12}: ln T3 lower = {:>16.6} {}{}",
                x.n,
                x.ln_t3_lower,
                if x.positive { "> 0" } else { "NOT > 0" },
                match (x.diff, x.diff_positive) {
                    (Some(d), Some(true)) => format!(", Δ = {d:.6}"),
                    (Some(d), _) => format!(", Δ = {d:.6} NOT > 0"),
                    _ => String::new(),
                }
            );
        }
        let _ = writeln!(
            s,
            "first n ≥ 222 with a positive bound: {} (bisection)\nmethod: {}\n{}",
            self.empirical_first_positive_n,
            self.method,
            if self.ok() { "all samples positive and increasing" } else { "CHECK FAILED" }
        );
        s
    }

    fn csv(&self) -> Result<String> {
        csv_string(
            &ANALYTIC_HEADER,
            self.samples.iter().map(|x| {
                vec![
                    x.n.to_string(),
                    x.ln_t3_lower.to_string(),
                    x.err.to_string(),
                    bool_cell(x.positive),
                    opt_cell(x.diff),
                    opt_cell(x.diff_positive.map(bool_cell)),
                ]
            }),
        )
    }
}

const CLAIM_HEADER: [&str; 6] = [
    "claim_id",
    "minimal_valid_n",
    "chain_minimal_valid_n",
    "failing_n",
    "chain_failing_n",
    "primes_checked",
];

impl ObservationReport {
    /// The CSV form carries the per-claim summary; failure details are in the
    /// JSON and text forms.
    pub fn claims_from_csv(text: &str) -> Result<Vec<ClaimSummary>> {
        let opt = |s: &str| -> Result<Option<u64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                parse(s, "n").map(Some)
            }
        };
        csv_records(text, &CLAIM_HEADER)?
            .iter()
            .map(|r| {
                Ok(ClaimSummary {
                    claim_id: parse(&r[0], "claim_id")?,
                    minimal_valid_n: opt(&r[1])?,
                    chain_minimal_valid_n: opt(&r[2])?,
                    failing_n: parse(&r[3], "failing_n")?,
                    chain_failing_n: parse(&r[4], "chain_failing_n")?,
                    primes_checked: parse(&r[5], "primes_checked")?,
                })
            })
            .collect()
    }
}

impl WriteReport for ObservationReport {
    fn text(&self) -> String {
        let mut s = format!(
            "observations over [{}, {}]; tiling {} (first claim nonempty from n = {})\n",
            self.n_min,
            self.n_max,
            if self.tiling_ok { "ok" } else { "BROKEN" },
            self.tiling_nonempty_from
        );
        for c in &self.claims {
            let _ = writeln!(
                s,
                "  claim {:>2}: minimal valid n = {:>6}, chain from {:>6}, failing n: {}",
                c.claim_id,
                opt_cell(c.minimal_valid_n),
                opt_cell(c.chain_minimal_valid_n),
                c.failing_n
            );
        }
        let contract = self.failures_from(OBSERVATION_CONTRACT_N).count();
        let _ = writeln!(
            s,
            "{} failure(s) in total, {} at n ≥ {}",
            self.failures.len(),
            contract,
            OBSERVATION_CONTRACT_N
        );
        for f in self.failures_from(OBSERVATION_CONTRACT_N).take(20) {
            let _ = writeln!(s, "  claim {} at n = {}: {}", f.claim_id, f.n, f.detail);
        }
        s
    }

    fn csv(&self) -> Result<String> {
        csv_string(
            &CLAIM_HEADER,
            self.claims.iter().map(|c| {
                vec![
                    c.claim_id.to_string(),
                    opt_cell(c.minimal_valid_n),
                    opt_cell(c.chain_minimal_valid_n),
                    c.failing_n.to_string(),
                    c.chain_failing_n.to_string(),
                    c.primes_checked.to_string(),
                ]
            }),
        )
    }
}

impl WriteReport for DecomposeReport {
    fn text(&self) -> String {
        let mut s = format!("n = {}\n", self.n);
        let _ = writeln!(s, "  T1 = {}  (ln {:.6})", self.t1, self.ln_t1);
        let _ = writeln!(s, "  T2 = {}  (ln {:.6})", self.t2, self.ln_t2);
        let _ = writeln!(s, "  T3 = {}  (ln {:.6})", self.t3, self.ln_t3);
        let _ = writeln!(s, "  ln C(4n,3n) = {:.6}", self.ln_binomial);
        let _ = writeln!(
            s,
            "  primes in [3n, 4n]: {}, in (3n, 4n): {}",
            self.closed_interval_count, self.open_interval_count
        );
        let b = &self.bounds;
        let show = |e: Option<crate::stirling_bounds::LogEstimate>| match e {
            Some(e) => format!("{:.6}", e.value),
            None => "pole: not applicable".into(),
        };
        let _ = writeln!(s, "  ln binomial lower bound = {:.6}", b.ln_binom_lower.value);
        let _ = writeln!(s, "  ln A upper = {}", show(Some(b.ln_A_upper)));
        let _ = writeln!(s, "  ln B upper = {}", show(Some(b.ln_B_upper)));
        let _ = writeln!(s, "  ln C upper = {}", show(b.ln_C_upper));
        let _ = writeln!(s, "  ln D upper = {}", show(b.ln_D_upper));
        let _ = writeln!(s, "  ln T1 upper = {:.6}", b.ln_T1_upper.value);
        let _ = writeln!(s, "  E = {:.6e}", b.e_term.value);
        let _ = writeln!(s, "  ln T3 lower = {}", show(b.ln_T3_lower));
        let _ = writeln!(s, "  count lower bound = {}", show(b.count_lower_bound));
        for c in &self.checks {
            let _ = writeln!(s, "  [{}] {}", c.status, c.name);
        }
        s
    }

    /// The analytic bounds as one flat row.
    fn csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        crate::stirling_bounds::BoundReport::write_csv(std::slice::from_ref(&self.bounds), &mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Report(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{cmd_lower_bound, cmd_verify_direct};

    #[test]
    fn sweep_csv_round_trip() {
        for w in [true, false] {
            let r = cmd_verify_direct(500, w, 1).unwrap();
            let back = SweepReport::from_csv(&r.csv().unwrap()).unwrap();
            assert_eq!(back, r);
            let json: SweepReport = serde_json::from_str(&r.json().unwrap()).unwrap();
            assert_eq!(json, r);
        }
        let with_fail = SweepReport {
            n_min: 1,
            n_max: 4,
            failures: vec![2, 4],
            witness: Some([(1, 3), (3, 11)].into_iter().collect()),
            runtime_ms: 9,
        };
        let csv = with_fail.csv().unwrap();
        assert!(csv.starts_with("n_min,n_max,failures,witnesses,runtime_ms,n,witness\n1,4,2,1,9,,\n"));
        assert_eq!(SweepReport::from_csv(&csv).unwrap(), with_fail);
    }

    #[test]
    fn lower_bound_csv_round_trip() {
        let l = cmd_lower_bound(1000).unwrap();
        assert_eq!(LowerBoundLine::from_csv(&l.csv().unwrap()).unwrap(), l);
    }

    #[test]
    fn formats_parse() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}

//! Inequality chains such as `2p < n/2 < 3p ≤ 2n`, with every term linear in
//! `p` or in `n`, parsed from their text form and checked over an interval of `p`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `p_coeff·p + n_coeff·n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub p_coeff: Rational,
    pub n_coeff: Rational,
}

impl Term {
    fn eval(&self, p: Rational, n: Rational) -> Rational {
        self.p_coeff * p + self.n_coeff * n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    source: String,
    terms: Vec<Term>,
    rels: Vec<Rel>,
}

impl Chain {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn rels(&self) -> &[Rel] {
        &self.rels
    }

    /// Links `(left, rel, right)` in display order.
    pub fn links(&self) -> impl Iterator<Item = (Term, Rel, Term)> + '_ {
        self.rels
            .iter()
            .enumerate()
            .map(|(i, &r)| (self.terms[i], r, self.terms[i + 1]))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// `[k]p`, `[k]n`, `[k]p/d`, `[k]n/d`
fn parse_term(tok: &str) -> Result<Term> {
    let bad = || Error::Domain(format!("bad chain term `{tok}`"));
    let (body, den) = match tok.split_once('/') {
        Some((b, d)) => (b, d.parse::<i128>().map_err(|_| bad())?),
        None => (tok, 1),
    };
    let var = body.chars().last().ok_or_else(bad)?;
    let k = &body[..body.len() - var.len_utf8()];
    let k: i128 = if k.is_empty() { 1 } else { k.parse().map_err(|_| bad())? };
    let c = Rational::new(k, den).map_err(|_| bad())?;
    let zero = Rational::integer(0);
    match var {
        'p' => Ok(Term { p_coeff: c, n_coeff: zero }),
        'n' => Ok(Term { p_coeff: zero, n_coeff: c }),
        _ => Err(bad()),
    }
}

impl FromStr for Chain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() < 3 || toks.len() % 2 == 0 {
            return Err(Error::Domain(format!("bad chain `{s}`")));
        }
        let mut terms = Vec::new();
        let mut rels = Vec::new();
        for (i, t) in toks.iter().enumerate() {
            if i % 2 == 0 {
                terms.push(parse_term(t)?);
            } else {
                rels.push(match *t {
                    "<" => Rel::Lt,
                    "<=" => Rel::Le,
                    _ => return Err(Error::Domain(format!("bad relation `{t}` in `{s}`"))),
                });
            }
        }
        Ok(Chain {
            source: s.to_owned(),
            terms,
            rels,
        })
    }
}

/// Result of checking one link over `lo < p ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkFailure {
    pub link: usize,
    pub detail: String,
}

/// Checks every link for all real `p` with `lo < p ≤ hi`, except that a strict
/// link may become an equality at `p = hi` when `hi` is not a prime integer,
/// since only primes are ever substituted for `p`.
///
/// Each side is linear in `p`, so it is enough to look at the endpoints: the
/// difference must be `≥ 0` at the open end, and at the closed end `≥ 0` for
/// `≤` or `> 0` for `<`. A strict link that vanishes at both ends is
/// identically equal and fails.
pub fn check_chain_on(
    chain: &Chain,
    n: u64,
    lo: Rational,
    hi: Rational,
    hi_is_prime: bool,
) -> Vec<LinkFailure> {
    let n = Rational::from(n);
    let zero = Rational::integer(0);
    let mut out = Vec::new();
    for (i, (l, rel, r)) in chain.links().enumerate() {
        let d_lo = r.eval(lo, n) - l.eval(lo, n);
        let d_hi = r.eval(hi, n) - l.eval(hi, n);
        let ok = d_lo >= zero
            && match rel {
                Rel::Le => d_hi >= zero,
                Rel::Lt if hi_is_prime => d_hi > zero,
                Rel::Lt => d_hi >= zero && !(d_lo.is_zero() && d_hi.is_zero()),
            };
        if !ok {
            out.push(LinkFailure {
                link: i,
                detail: format!(
                    "link {} ({rel}): right − left is {d_lo} as p → {lo}⁺ and {d_hi} at p = {hi}",
                    i + 1
                ),
            });
        }
    }
    out
}

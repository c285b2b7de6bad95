//! Exact integer and rational arithmetic: prime valuations of factorials and
//! binomials, the factored split of `C(4n, 3n)`, and the generalized binomial.

mod decomposition;
mod gen_binomial;
mod valuation;

pub use decomposition::{
    beta_at_most_one, check_T1_bound, check_T2_divisibility_bound, decompose, t2_bound_minimal_n,
    Decomposition,
};
pub use gen_binomial::{
    absorber, absorber_valuations, delta, gen_binomial, gen_binomial_valuation,
    gen_binomial_valuations, Absorber, GenBinomIndex,
};
pub use valuation::{beta, legendre_valuation, ValuationMap};

pub(crate) use valuation::beta_unchecked;

pub use crate::rational::{floor_of, frac_of, Rational};

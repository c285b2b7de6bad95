//! Log-domain analytic machinery: the Stirling envelopes, the closed-form
//! bounds on the binomial and the absorbers, and the lower bound on `T3`.

mod chain;
mod real;
mod report;
mod stirling;

pub use chain::{
    absorber_pole, absorber_rate, count_lower_bound, e_term, extracted_growth_rate,
    ln_absorber_upper, ln_binom_lower, ln_m, ln_m_as_printed, ln_t1_upper, ln_t3_lower,
    simplification_holds, simplification_minimal_n, simplified_count_bound, t3_lower_bound,
    T3LowerBound, M_FIRST_FACTOR_PRINTED, M_FIRST_FACTOR_USED, T3_BOUND_MIN_N,
};
pub use real::{decide, LogEstimate, LogReal, Precision, Tracked};
pub use report::{m_correction_note, BoundReport};
pub use stirling::{
    check_factorial_sandwich, geometric_grid, linear_grid, ln_f, ln_factorial, ln_g, ln_h1, ln_h2,
    scan_factorial_sandwich, scan_h1_monotone, scan_h2_unimodal, SandwichScan,
};

use std::cmp::Ordering;

use interval34_core::bigmath::{binomial, ln_biguint_f64};
use interval34_core::exact_arith::{absorber, check_T2_divisibility_bound, decompose, Absorber};
use interval34_core::observations::{check_claim, claim_table};
use interval34_core::prime_engine::PrimeSieve;
use interval34_core::rational::Rational;
use interval34_core::stirling_bounds::{
    ln_absorber_upper, ln_binom_lower, ln_t1_upper, ln_t3_lower, scan_h1_monotone,
    scan_h2_unimodal, t3_lower_bound, BoundReport, Precision,
};
use interval34_core::verifier::{cmd_decompose, cmd_verify_direct, SweepReport, Status, WriteReport};

#[test]
fn binomial_lower_bound_is_below_exact() {
    for n in 1..=2000 {
        let exact = binomial(4 * n, 3 * n);
        let s = Status::exact_vs_bound(&exact, Ordering::Greater, Precision::default(), |b| {
            ln_binom_lower(n, b)
        });
        assert_eq!(s.unwrap(), Status::Pass, "n = {n}");
    }
}

#[test]
fn analytic_route_never_exceeds_exact_t3() {
    let sieve = PrimeSieve::new(8000).unwrap();
    for n in (222..=2000).step_by(7) {
        let d = decompose(n, &sieve).unwrap();
        let ln_c = ln_biguint_f64(&binomial(4 * n, 3 * n));
        let abcd: f64 = Absorber::ALL
            .iter()
            .map(|&x| ln_biguint_f64(&absorber(x, n).unwrap()))
            .sum();
        let route = ln_c - ln_t1_upper(n, 128).unwrap().ln_f64() - n as f64 / 6.0 * 4f64.ln() - abcd;
        let exact = d.t3.ln_f64();
        assert!(route <= exact + 1e-9 * exact.abs().max(1.0), "n = {n}: {route} > {exact}");
        // and through the closed forms
        let inter = t3_lower_bound(n, 128).unwrap().intermediate.ln_f64();
        assert!(inter <= route + 1e-9 * route.abs().max(1.0), "n = {n}");
    }
}

#[test]
fn closed_form_bounds_dominate_on_a_sample() {
    for n in [222u64, 223, 500, 999, 2000] {
        for x in Absorber::ALL {
            let exact = absorber(x, n).unwrap();
            let s = Status::exact_vs_bound(&exact, Ordering::Less, Precision::default(), |b| {
                ln_absorber_upper(x, n, b)
            });
            assert_eq!(s.unwrap(), Status::Pass, "{x} at {n}");
        }
    }
}

#[test]
fn claims_imply_t2_bound() {
    let sieve = PrimeSieve::new(3200).unwrap();
    let table = claim_table();
    let mut checked = 0;
    for n in 5..=800 {
        let all = table
            .iter()
            .all(|c| check_claim(c, n, &sieve).unwrap().passed());
        if all {
            checked += 1;
            assert!(check_T2_divisibility_bound(n, &sieve).unwrap(), "n = {n}");
        }
    }
    assert!(checked > 600);
}

#[test]
fn t3_lower_bound_examples() {
    let at = |n| ln_t3_lower(n, 128).unwrap().ln_f64();
    assert!(at(162_755) > 0.0);
    assert!(at(1_000_000) > at(162_755));
    assert!(at(300) < 0.0);
}

#[test]
fn h1_h2_lemma_examples() {
    let p = Precision::default();
    let q = |a, b| Rational::new(a, b).unwrap();
    let mut grid = vec![0.5];
    grid.extend((0..=20).map(|k| 2f64.powi(k)));
    assert!(scan_h1_monotone(q(1, 12), &grid, p).unwrap());
    assert!(scan_h1_monotone(q(1, 3), &grid, p).unwrap());
    assert!(scan_h1_monotone(q(10, 1), &[0.5, 0.6], p).unwrap());
    assert!(scan_h2_unimodal(q(4, 1), &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5], p).unwrap());
    assert!(scan_h2_unimodal(q(1, 1), &[0.5], p).unwrap());
}

#[test]
fn decompose_examples() {
    let r = cmd_decompose(300).unwrap();
    assert!(r.ok(), "{:?}", r.checks);
    let r = cmd_decompose(221).unwrap();
    assert_eq!(
        r.check("C < C upper bound"),
        Some(&Status::NotApplicable("pole: not applicable".into()))
    );
}

#[test]
fn bound_reports_round_trip_and_are_consistent() {
    let reports: Vec<_> = (220..=230).map(|n| BoundReport::compute(n, 128).unwrap()).collect();
    for r in &reports {
        assert!(r.check_consistency(), "n = {}", r.n);
    }
    let mut buf = Vec::new();
    BoundReport::write_csv(&reports, &mut buf).unwrap();
    assert_eq!(BoundReport::read_csv(buf.as_slice()).unwrap(), reports);
}

#[test]
fn sweep_report_json_and_csv_round_trip() {
    let r = cmd_verify_direct(20_000, true, 3).unwrap();
    assert_eq!(SweepReport::from_csv(&r.csv().unwrap()).unwrap(), r);
    let back: SweepReport = serde_json::from_str(&r.json().unwrap()).unwrap();
    assert_eq!(back, r);
}

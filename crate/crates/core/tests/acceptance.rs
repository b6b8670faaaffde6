//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).
//! These are the same suites `puiseux-atoms selftest` runs; here every
//! criterion is additionally pinned to its runtime bound and its expected
//! witness shape.

use puiseux_atoms::algebra::FieldSpec;
use puiseux_atoms::monoid::{PuiseuxMonoid, SearchBudget};
use puiseux_atoms::report::{Report, Status};
use puiseux_atoms::suites;
use std::time::{Duration, Instant};

fn monoid() -> PuiseuxMonoid {
    PuiseuxMonoid::prime_pair()
}

fn check(name: &str, report: &Report, elapsed: Duration, bound: Option<Duration>) {
    let within = bound.map_or(true, |b| elapsed <= b);
    let pass = report.status == Status::Verified && within;
    println!(
        "acceptance {name}: {} (status {}, {:.3}s{})",
        if pass { "PASS" } else { "FAIL" },
        report.status,
        elapsed.as_secs_f64(),
        bound.map_or(String::new(), |b| format!(" / bound {}s", b.as_secs())),
    );
    assert!(
        pass,
        "criterion {name} failed: status {}, elapsed {elapsed:?}, witnesses {}",
        report.status, report.witnesses
    );
}

#[test]
fn criterion_1_atom_suite() {
    let m = monoid();
    let start = Instant::now();
    let report = suites::atoms_report(&m, 200, &SearchBudget::new(200)).unwrap();
    let elapsed = start.elapsed();
    check("1 atoms 1..=200", &report, elapsed, Some(Duration::from_secs(5)));
    let traces = report.witnesses["traces"].as_array().unwrap();
    assert_eq!(traces.len(), 200);
    // spot-check the shape of a trace: the argument needs both primes and
    // the count of dominated earlier generators
    assert_eq!(traces[0]["base_prime"], 2);
    assert_eq!(traces[0]["partner_prime"], 5);
    assert_eq!(traces[199]["smaller_generators_checked"], 199);
}

#[test]
fn criterion_2_chain_suite() {
    let m = monoid();
    let start = Instant::now();
    let report = suites::chain_suite_report(&m, 200).unwrap();
    let elapsed = start.elapsed();
    check("2 chain 1..=200", &report, elapsed, Some(Duration::from_secs(5)));
    let chain = &report.witnesses["chain"];
    assert_eq!(chain["length"], 200);
    assert_eq!(chain["all_strict"], true);
    assert_eq!(chain["links"].as_array().unwrap().len(), 200);
    assert_eq!(
        report.witnesses["divides_failures"].as_array().unwrap().len(),
        0
    );
}

#[test]
fn criterion_3_oracle_agreement() {
    let m = monoid();
    let start = Instant::now();
    let report = suites::oracle_agreement_report(&m).unwrap();
    let elapsed = start.elapsed();
    check("3 oracle agreement", &report, elapsed, Some(Duration::from_secs(60)));
    assert_eq!(report.witnesses["denominator"], 30030);
    assert_eq!(report.witnesses["values_checked"], 30031);
    assert_eq!(report.witnesses["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn criterion_4_non_unique_factorization() {
    let m = monoid();
    let report = suites::factorization_golden_report(&m).unwrap();
    check("4 length sets", &report, Duration::ZERO, None);
    assert_eq!(
        report.witnesses["one_fifth"]["certificates"],
        serde_json::json!([{ "3": 11 }, { "1": 2 }])
    );
    assert_eq!(report.witnesses["one_fifth_lengths"], serde_json::json!([2, 11]));
    assert_eq!(
        report.witnesses["three_tenths_lengths"],
        serde_json::json!([3, 12])
    );
}

#[test]
fn criterion_5_valuation_rejections() {
    let m = monoid();
    let report = suites::valuation_rejection_report(&m).unwrap();
    check("5 valuation rejections", &report, Duration::ZERO, None);
    let cases = report.witnesses["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 3);
    for case in cases {
        assert_eq!(case["outcome"]["outcome"], "not_member");
        assert_eq!(case["outcome"]["obstruction"]["kind"], "valuation");
        assert_eq!(case["oracle_rejections"], 8);
    }
}

#[test]
fn criterion_6_algebra_roundtrip() {
    let m = monoid();
    let report =
        suites::roundtrip_report(&m, &FieldSpec::Rationals, 1000, &SearchBudget::default())
            .unwrap();
    check("6 roundtrip 1000 pairs", &report, Duration::ZERO, None);
    assert_eq!(report.witnesses["pairs"], 1000);
    assert_eq!(report.witnesses["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report.witnesses["undetermined"], 0);
}

#[test]
fn criterion_7_lifted_chain() {
    let m = monoid();
    let report =
        suites::chain_report(&m, &FieldSpec::Rationals, 50, &SearchBudget::default()).unwrap();
    check("7 lifted chain 50", &report, Duration::ZERO, None);
    assert_eq!(report.status.exit_code(), 0);
    let algebra = &report.witnesses["algebra_chain"];
    assert_eq!(algebra["all_strict"], true);
    let links = algebra["links"].as_array().unwrap();
    assert_eq!(links.len(), 50);
    for link in links {
        assert_eq!(link["strict"], true);
        assert_eq!(link["degree_consistent"], true);
        for support in link["support"].as_array().unwrap() {
            assert_eq!(support["outcome"]["outcome"], "member");
        }
    }
}

#[test]
fn criterion_8_monomial_atom_correspondence() {
    let m = monoid();
    let report = suites::monomial_atom_report(&m, &FieldSpec::Rationals, 6).unwrap();
    check("8 monomial atoms", &report, Duration::ZERO, None);
    assert_eq!(report.witnesses["splits"].as_array().unwrap().len(), 0);
    assert_eq!(report.witnesses["searched"].as_array().unwrap().len(), 6);
    assert_eq!(report.witnesses["atom_traces_cross_checked"], 6);
}

#[test]
fn criterion_9_field_independence() {
    let m = monoid();
    let report = suites::field_independence_report(&m, &SearchBudget::default()).unwrap();
    check("9 field independence (F_5)", &report, Duration::ZERO, None);
    for key in ["roundtrip", "lifted_chain", "monomial_atoms"] {
        assert_eq!(
            report.witnesses[key]["status"], "VERIFIED",
            "sub-suite {key} not verified over F_5"
        );
    }
}

#[test]
fn selftest_aggregates_all_criteria() {
    let m = monoid();
    let reports = suites::selftest_reports(&m, &SearchBudget::default()).unwrap();
    assert_eq!(reports.len(), 9);
    let overall = suites::overall_status(&reports);
    println!("acceptance selftest: overall {overall}");
    assert_eq!(overall, Status::Verified);
    assert_eq!(overall.exit_code(), 0);
}

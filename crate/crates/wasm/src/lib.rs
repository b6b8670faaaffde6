//! Browser demo bindings: thin JSON wrappers over the verification
//! suites, compiled to WebAssembly for the static page in `www/`.
//!
//! Every function returns a JSON string (a report, or `{"error": ...}`
//! for unparsable input) so the page stays a dumb renderer.

use puiseux_atoms::algebra::FieldSpec;
use puiseux_atoms::monoid::{PuiseuxMonoid, SearchBudget};
use puiseux_atoms::suites;
use wasm_bindgen::prelude::*;

fn monoid() -> PuiseuxMonoid {
    PuiseuxMonoid::prime_pair()
}

fn error_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

/// Decide membership of a rational (e.g. "5/6") in the monoid, returning
/// the report with a certificate, an obstruction, or Unknown.
#[wasm_bindgen]
pub fn member_report(q: &str, max_index: u32) -> String {
    let q = match q.parse() {
        Ok(q) => q,
        Err(e) => return error_json(e),
    };
    let budget = SearchBudget::new((max_index as usize).max(1));
    suites::member_report(&monoid(), &q, &budget).to_json()
}

/// Verify `n` links of the ascending principal-ideal chain in the monoid
/// and its monomial lift in the algebra (coefficients in Q).
#[wasm_bindgen]
pub fn chain_report(n: u32) -> String {
    let n = (n as usize).clamp(1, 300);
    let budget = SearchBudget::new(n);
    match suites::chain_report(&monoid(), &FieldSpec::Rationals, n, &budget) {
        Ok(report) => report.to_json(),
        Err(e) => error_json(e),
    }
}

/// Enumerate factorizations of a rational over the first `n` generators
/// and report the length set.
#[wasm_bindgen]
pub fn factor_report(q: &str, n: u32, cap: u32) -> String {
    let q = match q.parse() {
        Ok(q) => q,
        Err(e) => return error_json(e),
    };
    let n = (n as usize).clamp(1, 8);
    match suites::factor_report(&monoid(), &q, n, (cap as usize).max(1)) {
        Ok(report) => report.to_json(),
        Err(e) => error_json(e),
    }
}

//! Inputs shared by the benchmarks.

use advknow_core::problem::builtin;
use advknow_core::{BitString, OracleProblem};

/// A built-in problem and its middle setting.
pub fn fixture(selector: &str) -> (OracleProblem, BitString) {
    let p = builtin(selector).expect("built-in selector");
    let b = p.settings()[p.len() / 2];
    (p, b)
}

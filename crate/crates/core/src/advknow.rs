//! The advanced knowledge rule.
//!
//! Bob's setting `b_c` is read by two partial measurements of register B, one
//! on `cells_i` and one on `cells_j`. A pair is accepted when the two cell sets
//! are an exact bipartition (so together they select `b_c` once) and the two
//! induced subsets of σ leave the same, nonzero, solution entropy. Each side
//! of an accepted pair is an instance of the knowledge Alice may hold in
//! advance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::bits::BitString;
use crate::problem::{Family, OracleProblem};
use crate::state::{shannon_bits, CellSelection};

/// Entropy comparisons use this tolerance.
pub const ENTROPY_TOL: f64 = 1e-9;

/// Cell counts above this are refused (bipartitions grow as `2^(cells−1)`).
pub const MAX_CELLS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdvKnowError {
    #[error("setting {0} is not in the problem's setting set")]
    NotInSigma(BitString),
    #[error("{0} cells is too many to enumerate bipartitions (limit {MAX_CELLS})")]
    TooManyCells(usize),
    #[error("register B has a single cell, nothing to split")]
    SingleCell,
}

/// Why a bipartition was not accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rejection {
    /// The two sides do not select `b_c` exactly once.
    Redundant,
    /// The sides leave different solution entropy.
    Uneven { h_i: f64, h_j: f64 },
    /// A side already fixes the solution, leaving nothing for the other.
    SelfSufficient,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Redundant => f.write_str("redundant"),
            Rejection::Uneven { h_i, h_j } => write!(f, "uneven {h_i:.6}/{h_j:.6}"),
            Rejection::SelfSufficient => f.write_str("self-sufficient"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub cell_count: usize,
    pub cells_i: Vec<usize>,
    pub cells_j: Vec<usize>,
    pub sigma_i: Vec<BitString>,
    pub sigma_j: Vec<BitString>,
    pub h_i: f64,
    pub h_j: f64,
    /// Whether each side also leaves exactly half of the total solution entropy.
    pub half_total: bool,
    pub verdict: Result<(), Rejection>,
}

impl SplitCandidate {
    pub fn accepted(&self) -> bool {
        self.verdict.is_ok()
    }

    /// Cell set rendered as one character per cell, cell 0 first.
    pub fn mask(&self, cells: &[usize]) -> String {
        (0..self.cell_count)
            .map(|c| if cells.contains(&c) { '1' } else { '0' })
            .collect()
    }

    /// Re-evaluates the logged verdict from the stored sides.
    pub fn recheck(&self, problem: &OracleProblem, b_c: &BitString) -> Result<(), Rejection> {
        judge(problem, b_c, &self.sigma_i, &self.sigma_j)
    }
}

impl fmt::Display for SplitCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "split cells_i={} cells_j={} |σi|={} |σj|={} h={:.6}",
            self.mask(&self.cells_i),
            self.mask(&self.cells_j),
            self.sigma_i.len(),
            self.sigma_j.len(),
            self.h_i,
        )?;
        if self.h_i != self.h_j {
            write!(f, "/{:.6}", self.h_j)?;
        }
        match &self.verdict {
            Ok(()) => f.write_str(" accepted"),
            // The two entropies are already on the line.
            Err(Rejection::Uneven { .. }) => f.write_str(" rejected(uneven)"),
            Err(r) => write!(f, " rejected({r})"),
        }
    }
}

/// A subset of σ Alice may know in advance.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvancedKnowledgeInstance {
    pub subset: Vec<BitString>,
    /// Index of the split (in enumeration order) and side that first produced it.
    pub split: usize,
    pub side: Side,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    I,
    J,
}

/// Shannon entropy of `s(b)` for `b` uniform over `subset`.
pub fn solution_entropy(problem: &OracleProblem, subset: &[BitString]) -> f64 {
    let mut counts: BTreeMap<BitString, usize> = BTreeMap::new();
    for b in subset {
        if let Some(s) = problem.solution_of(b) {
            *counts.entry(s).or_default() += 1;
        }
    }
    let total = subset.len() as f64;
    shannon_bits(counts.values().map(|&c| c as f64 / total))
}

/// Settings of σ that agree with `b_c` on `cells`.
pub fn agreeing(problem: &OracleProblem, b_c: &BitString, cells: &[usize]) -> Vec<BitString> {
    let cw = problem.cells().cell_width;
    let sel = CellSelection::agreeing_with(b_c, cells, cw);
    problem
        .settings()
        .iter()
        .filter(|b| sel.matches(b, cw))
        .copied()
        .collect()
}

fn judge(
    problem: &OracleProblem,
    b_c: &BitString,
    sigma_i: &[BitString],
    sigma_j: &[BitString],
) -> Result<(), Rejection> {
    let common: Vec<_> = sigma_i.iter().filter(|b| sigma_j.contains(b)).collect();
    if common != [b_c] {
        return Err(Rejection::Redundant);
    }
    let (h_i, h_j) = (
        solution_entropy(problem, sigma_i),
        solution_entropy(problem, sigma_j),
    );
    if (h_i - h_j).abs() >= ENTROPY_TOL {
        return Err(Rejection::Uneven { h_i, h_j });
    }
    if h_i <= ENTROPY_TOL {
        return Err(Rejection::SelfSufficient);
    }
    Ok(())
}

fn check_inputs(problem: &OracleProblem, b_c: &BitString) -> Result<usize, AdvKnowError> {
    if !problem.contains(b_c) {
        return Err(AdvKnowError::NotInSigma(*b_c));
    }
    let count = problem.cells().cell_count;
    if count > MAX_CELLS {
        return Err(AdvKnowError::TooManyCells(count));
    }
    if count < 2 {
        return Err(AdvKnowError::SingleCell);
    }
    Ok(count)
}

/// Every bipartition of B's cells, accepted or not, ordered by the mask of
/// the side holding cell 0.
pub fn enumerate_splits(
    problem: &OracleProblem,
    b_c: &BitString,
) -> Result<Vec<SplitCandidate>, AdvKnowError> {
    let count = check_inputs(problem, b_c)?;
    let total = solution_entropy(problem, problem.settings());
    let top = 1u64 << (count - 1);
    let all = (1u64 << count) - 1;
    let in_mask = |mask: u64| -> Vec<usize> {
        (0..count)
            .filter(|&c| mask >> (count - 1 - c) & 1 == 1)
            .collect()
    };
    Ok((top..all)
        .map(|mask| {
            let cells_i = in_mask(mask);
            let cells_j = in_mask(all ^ mask);
            let sigma_i = agreeing(problem, b_c, &cells_i);
            let sigma_j = agreeing(problem, b_c, &cells_j);
            let h_i = solution_entropy(problem, &sigma_i);
            let h_j = solution_entropy(problem, &sigma_j);
            let half = total / 2.0;
            SplitCandidate {
                cell_count: count,
                verdict: judge(problem, b_c, &sigma_i, &sigma_j),
                half_total: (h_i - half).abs() < ENTROPY_TOL && (h_j - half).abs() < ENTROPY_TOL,
                cells_i,
                cells_j,
                sigma_i,
                sigma_j,
                h_i,
                h_j,
            }
        })
        .collect())
}

/// Both sides of every accepted split, deduplicated by subset.
pub fn advanced_knowledge_instances(
    problem: &OracleProblem,
    b_c: &BitString,
) -> Result<Vec<AdvancedKnowledgeInstance>, AdvKnowError> {
    Ok(instances_from(&enumerate_splits(problem, b_c)?))
}

/// Deduplicated instances of already enumerated splits.
pub fn instances_from(splits: &[SplitCandidate]) -> Vec<AdvancedKnowledgeInstance> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (k, split) in splits.iter().enumerate().filter(|(_, s)| s.accepted()) {
        for (side, subset, cells) in [
            (Side::I, &split.sigma_i, &split.cells_i),
            (Side::J, &split.sigma_j, &split.cells_j),
        ] {
            if seen.insert(subset.clone()) {
                out.push(AdvancedKnowledgeInstance {
                    subset: subset.clone(),
                    split: k,
                    side,
                    cells: cells.clone(),
                });
            }
        }
    }
    out
}

/// Periods `q ≠ 0` that no two rows of a distinct-valued half table rule out.
fn consistent_periods(rows: &[usize], arg_count: usize) -> usize {
    (1..arg_count)
        .filter(|&q| {
            rows.iter()
                .tuple_combinations()
                .all(|(&a, &c)| a ^ c != q)
        })
        .count()
}

/// Half tables of `f_{b_c}` from which the solution cannot yet be read.
///
/// Deutsch&Jozsa: all values equal. Simon: all values distinct and at least
/// two periods still possible (at `n = 2` distinctness alone implies this).
/// Returns `None` for other families.
pub fn good_half_tables(
    problem: &OracleProblem,
    b_c: &BitString,
) -> Result<Option<Vec<Vec<usize>>>, AdvKnowError> {
    let count = check_inputs(problem, b_c)?;
    let family = problem.family();
    if !matches!(family, Family::DeutschJozsa | Family::Simon) || count % 2 != 0 {
        return Ok(None);
    }
    let cw = problem.cells().cell_width;
    let values: Vec<u64> = b_c.cells(cw).collect();
    let good = (0..count)
        .combinations(count / 2)
        .filter(|rows| {
            let vals: Vec<u64> = rows.iter().map(|&r| values[r]).collect();
            match family {
                Family::DeutschJozsa => vals.iter().all_equal(),
                _ => vals.iter().all_unique() && consistent_periods(rows, count) >= 2,
            }
        })
        .collect();
    Ok(Some(good))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub b_c: BitString,
    /// False for families without a half-table shortcut.
    pub applicable: bool,
    pub from_tables: BTreeSet<Vec<BitString>>,
    pub from_rule: BTreeSet<Vec<BitString>>,
}

impl CrosscheckReport {
    pub fn matches(&self) -> bool {
        !self.applicable || self.from_tables == self.from_rule
    }

    pub fn only_in_tables(&self) -> Vec<&Vec<BitString>> {
        self.from_tables.difference(&self.from_rule).collect()
    }

    pub fn only_in_rule(&self) -> Vec<&Vec<BitString>> {
        self.from_rule.difference(&self.from_tables).collect()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.applicable {
            return write!(f, "crosscheck b_c={} not applicable to this family", self.b_c);
        }
        write!(
            f,
            "crosscheck b_c={} tables={} rule={} {}",
            self.b_c,
            self.from_tables.len(),
            self.from_rule.len(),
            if self.matches() { "match" } else { "MISMATCH" }
        )
    }
}

/// Compares the subsets induced by good half tables with the half-size sides
/// of the rule's accepted splits.
pub fn crosscheck_shortcut(
    problem: &OracleProblem,
    b_c: &BitString,
) -> Result<CrosscheckReport, AdvKnowError> {
    let Some(tables) = good_half_tables(problem, b_c)? else {
        return Ok(CrosscheckReport {
            b_c: *b_c,
            applicable: false,
            from_tables: BTreeSet::new(),
            from_rule: BTreeSet::new(),
        });
    };
    let half = problem.cells().cell_count / 2;
    let from_tables = tables.iter().map(|rows| agreeing(problem, b_c, rows)).collect();
    let mut from_rule = BTreeSet::new();
    for split in enumerate_splits(problem, b_c)?.into_iter().filter(|s| s.accepted()) {
        if split.cells_i.len() == half {
            from_rule.insert(split.sigma_i);
            from_rule.insert(split.sigma_j);
        }
    }
    Ok(CrosscheckReport {
        b_c: *b_c,
        applicable: true,
        from_tables,
        from_rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::problem::{make_deutsch_jozsa, make_grover, make_simon};

    fn set(words: &[&str]) -> Vec<BitString> {
        let mut v: Vec<_> = words.iter().map(|w| bits(w)).collect();
        v.sort();
        v
    }

    #[test]
    fn grover_two_bits() {
        let p = make_grover(2).unwrap();
        let splits = enumerate_splits(&p, &bits("01")).unwrap();
        assert_eq!(splits.len(), 1);
        let s = &splits[0];
        assert!(s.accepted());
        assert_eq!(s.sigma_i, set(&["00", "01"]));
        assert_eq!(s.sigma_j, set(&["01", "11"]));
        assert_eq!((s.h_i, s.h_j), (1.0, 1.0));
        assert!(s.half_total);
        assert_eq!(
            s.to_string(),
            "split cells_i=10 cells_j=01 |σi|=2 |σj|=2 h=1.000000 accepted"
        );
    }

    #[test]
    fn deutsch_jozsa_balanced_has_one_split() {
        let p = make_deutsch_jozsa(2).unwrap();
        let accepted: Vec<_> = enumerate_splits(&p, &bits("0011"))
            .unwrap()
            .into_iter()
            .filter(|s| s.accepted())
            .collect();
        assert_eq!(accepted.len(), 1);
        assert_eq!(accepted[0].cells_i, vec![0, 1]);
        assert_eq!(accepted[0].sigma_i, set(&["0000", "0011"]));
        assert_eq!(accepted[0].sigma_j, set(&["0011", "1111"]));
    }

    #[test]
    fn simon_rejects_period_revealing_rows() {
        let p = make_simon(2).unwrap();
        let splits = enumerate_splits(&p, &bits("0011")).unwrap();
        let by_rows = |rows: &[usize]| splits.iter().find(|s| s.cells_i == rows).unwrap();
        let good = by_rows(&[0, 2]);
        assert!(good.accepted());
        assert_eq!(good.sigma_i, set(&["0011", "0110"]));
        assert_eq!(good.sigma_j, set(&["0011", "1001"]));
        let bad = by_rows(&[0, 1]);
        assert_eq!(bad.verdict, Err(Rejection::SelfSufficient));
        assert_eq!(bad.recheck(&p, &bits("0011")), bad.verdict);
    }

    #[test]
    fn good_half_tables_examples() {
        let p = make_deutsch_jozsa(2).unwrap();
        let good = good_half_tables(&p, &bits("0011")).unwrap().unwrap();
        assert!(good.contains(&vec![0, 1]));
        assert!(!good.contains(&vec![0, 2]));
        assert_eq!(good_half_tables(&p, &bits("0000")).unwrap().unwrap().len(), 6);

        let s = make_simon(2).unwrap();
        let good = good_half_tables(&s, &bits("0011")).unwrap().unwrap();
        assert!(good.contains(&vec![0, 2]));
        assert!(!good.contains(&vec![0, 1]));

        let g = make_grover(2).unwrap();
        assert_eq!(good_half_tables(&g, &bits("00")).unwrap(), None);
        assert!(!crosscheck_shortcut(&g, &bits("00")).unwrap().applicable);
    }

    #[test]
    fn errors() {
        let p = make_grover(2).unwrap();
        assert_eq!(
            enumerate_splits(&p, &bits("111")),
            Err(AdvKnowError::NotInSigma(bits("111")))
        );
        let one = make_grover(1).unwrap();
        assert_eq!(enumerate_splits(&one, &bits("1")), Err(AdvKnowError::SingleCell));
    }
}

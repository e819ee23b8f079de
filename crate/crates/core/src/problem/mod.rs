//! Oracle problems: the setting set σ, the tables `f_b`, the solution map
//! `s(b)` and the cell structure of register B.
//!
//! Built-in families are Grover search, Deutsch&Jozsa and Simon. For the two
//! table families the setting string *is* the function table, values listed
//! for increasing argument, so one table row is one cell of B.

mod format;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::bits::{BitError, BitString};

pub use format::{load_problem, parse_problem, write_problem};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("{family} needs {min} <= n <= {max}, got {n}")]
    OutOfRange {
        family: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("problem violates {} invariant(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).join("; "))]
    Invalid(Vec<Violation>),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Atomic measurable units of register B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellSpec {
    pub cell_count: usize,
    pub cell_width: usize,
}

impl CellSpec {
    pub fn new(cell_count: usize, cell_width: usize) -> Self {
        Self {
            cell_count,
            cell_width,
        }
    }

    pub fn setting_width(&self) -> usize {
        self.cell_count * self.cell_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Grover,
    DeutschJozsa,
    Simon,
    Custom,
}

impl Family {
    /// Family implied by a problem name such as `grover:2` or `dj:3`.
    pub fn from_name(name: &str) -> Self {
        match name.split(':').next().unwrap_or("") {
            "grover" => Family::Grover,
            "dj" => Family::DeutschJozsa,
            "simon" => Family::Simon,
            _ => Family::Custom,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Grover => "grover",
            Family::DeutschJozsa => "dj",
            Family::Simon => "simon",
            Family::Custom => "custom",
        })
    }
}

/// A broken invariant found by [`OracleProblem::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleProblem {
    name: String,
    family: Family,
    arg_width: usize,
    value_width: usize,
    cells: CellSpec,
    settings: Vec<BitString>,
    /// `table[i][a]` is `f_{settings[i]}(a)`.
    table: Vec<Vec<u64>>,
    solutions: Vec<BitString>,
    index: HashMap<BitString, usize>,
}

impl OracleProblem {
    /// Assembles a problem, enforcing the structural invariants (distinct
    /// settings, total table and solution map, consistent widths).
    /// Family-specific constraints are checked by [`validate`](Self::validate).
    pub fn new(
        name: impl Into<String>,
        arg_width: usize,
        value_width: usize,
        cells: CellSpec,
        settings: Vec<BitString>,
        table: Vec<Vec<u64>>,
        solutions: Vec<BitString>,
    ) -> Result<Self, ProblemError> {
        let name = name.into();
        let structure = |m: String| Err(ProblemError::Structure(m));
        if arg_width == 0 || arg_width > 16 {
            return structure(format!("argument width {arg_width} outside 1..=16"));
        }
        if value_width == 0 || value_width > 63 {
            return structure(format!("value width {value_width} outside 1..=63"));
        }
        if cells.cell_count == 0 || cells.cell_width == 0 {
            return structure("empty cell structure".into());
        }
        if settings.is_empty() {
            return structure("no settings".into());
        }
        if table.len() != settings.len() || solutions.len() != settings.len() {
            return structure("table and solution map must cover every setting".into());
        }
        let mut index = HashMap::with_capacity(settings.len());
        let sol_width = solutions[0].width();
        for (i, s) in settings.iter().enumerate() {
            if s.width() != cells.setting_width() {
                return structure(format!(
                    "setting {s} has width {}, cells need {}",
                    s.width(),
                    cells.setting_width()
                ));
            }
            if index.insert(*s, i).is_some() {
                return structure(format!("duplicate setting {s}"));
            }
            if table[i].len() != 1 << arg_width {
                return structure(format!("table for {s} is not total"));
            }
            if let Some(v) = table[i].iter().find(|&&v| v >> value_width != 0) {
                return structure(format!("value {v} of {s} exceeds {value_width} bits"));
            }
            if solutions[i].width() != sol_width {
                return structure(format!("solution of {s} has inconsistent width"));
            }
        }
        Ok(Self {
            family: Family::from_name(&name),
            name,
            arg_width,
            value_width,
            cells,
            settings,
            table,
            solutions,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn arg_width(&self) -> usize {
        self.arg_width
    }

    pub fn arg_count(&self) -> usize {
        1 << self.arg_width
    }

    pub fn value_width(&self) -> usize {
        self.value_width
    }

    pub fn solution_width(&self) -> usize {
        self.solutions[0].width()
    }

    pub fn cells(&self) -> CellSpec {
        self.cells
    }

    pub fn settings(&self) -> &[BitString] {
        &self.settings
    }

    /// Cardinality cσ of the setting set.
    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn index_of(&self, setting: &BitString) -> Option<usize> {
        self.index.get(setting).copied()
    }

    pub fn contains(&self, setting: &BitString) -> bool {
        self.index.contains_key(setting)
    }

    /// `f_b(a)` for the setting at `index`.
    pub fn value(&self, index: usize, a: u64) -> u64 {
        self.table[index][a as usize]
    }

    pub fn table_row(&self, index: usize) -> &[u64] {
        &self.table[index]
    }

    pub fn solution(&self, index: usize) -> BitString {
        self.solutions[index]
    }

    pub fn solution_of(&self, setting: &BitString) -> Option<BitString> {
        self.index_of(setting).map(|i| self.solutions[i])
    }

    pub fn solutions(&self) -> &[BitString] {
        &self.solutions
    }

    /// Distinct solution values, sorted.
    pub fn solution_values(&self) -> BTreeSet<BitString> {
        self.solutions.iter().copied().collect()
    }

    /// Checks every type invariant and the family-specific constraints.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |rule, detail: String| out.push(Violation { rule, detail });
        let rows = self.arg_count();
        match self.family {
            Family::Grover => {
                if self.cells.setting_width() != self.arg_width {
                    push("grover-width", "settings must be as wide as the argument".into());
                }
                for (i, s) in self.settings.iter().enumerate() {
                    for a in 0..rows as u64 {
                        let want = u64::from(a == s.value());
                        if self.table[i][a as usize] != want {
                            push("grover-kronecker", format!("f_{s}({a}) != delta"));
                        }
                    }
                    if self.solutions[i] != *s {
                        push("grover-solution", format!("s({s}) must be {s}"));
                    }
                }
            }
            Family::DeutschJozsa | Family::Simon => {
                let simon = self.family == Family::Simon;
                let expected_width = if simon { self.arg_width - 1 } else { 1 };
                if simon && self.arg_width < 2 {
                    push("simon-width", "simon needs at least 2 argument bits".into());
                    return out;
                }
                if self.value_width != expected_width
                    || self.cells.cell_width != expected_width
                    || self.cells.cell_count != rows
                {
                    push(
                        "table-cells",
                        "cells must be table rows of the value width".into(),
                    );
                    return out;
                }
                for (i, s) in self.settings.iter().enumerate() {
                    let from_string: Vec<u64> = s.cells(self.cells.cell_width).collect();
                    if from_string != self.table[i] {
                        push("table-suffix", format!("setting {s} is not its own table"));
                        continue;
                    }
                    if simon {
                        match simon_period(&self.table[i], self.arg_width) {
                            Some(p) if self.solutions[i] == p => {}
                            Some(p) => push("simon-solution", format!("s({s}) must be {p}")),
                            None => push("simon-periodic", format!("{s} has no valid period")),
                        }
                    } else {
                        match dj_verdict(&self.table[i]) {
                            Some(v) if self.solutions[i].value() == v as u64
                                && self.solutions[i].width() == 1 => {}
                            Some(v) => push(
                                "dj-solution",
                                format!("s({s}) must be {}", u8::from(v)),
                            ),
                            None => {
                                push("dj-balanced", format!("{s} is neither constant nor balanced"))
                            }
                        }
                    }
                }
            }
            Family::Custom => {}
        }
        out
    }
}

/// `Some(false)` for a constant table, `Some(true)` for a balanced one.
pub fn dj_verdict(table: &[u64]) -> Option<bool> {
    let ones = table.iter().filter(|&&v| v == 1).count();
    if table.iter().any(|&v| v > 1) {
        None
    } else if ones == 0 || ones == table.len() {
        Some(false)
    } else if 2 * ones == table.len() {
        Some(true)
    } else {
        None
    }
}

/// The period `p ≠ 0` with `f(a) = f(c) ⇔ a⊕c ∈ {0, p}`, if the table has one.
pub fn simon_period(table: &[u64], arg_width: usize) -> Option<BitString> {
    let rows = table.len() as u64;
    (1..rows).find_map(|p| {
        let ok = (0..rows).all(|a| {
            (0..rows).all(|c| (table[a as usize] == table[c as usize]) == (a == c || a ^ c == p))
        });
        ok.then(|| BitString::new(p, arg_width).ok()).flatten()
    })
}

/// Grover search over `2^n` drawers: `f_b(a) = δ(b, a)`, `s(b) = b`.
pub fn make_grover(n: usize) -> Result<OracleProblem, ProblemError> {
    if !(1..=10).contains(&n) {
        return Err(ProblemError::OutOfRange {
            family: "grover",
            n,
            min: 1,
            max: 10,
        });
    }
    let settings: Vec<BitString> = BitString::all(n)?.collect();
    let table = settings
        .iter()
        .map(|b| (0..1u64 << n).map(|a| u64::from(a == b.value())).collect())
        .collect();
    OracleProblem::new(
        format!("grover:{n}"),
        n,
        1,
        CellSpec::new(n, 1),
        settings.clone(),
        table,
        settings,
    )
}

/// All constant and balanced functions `{0,1}^n → {0,1}`.
///
/// The solution is the one-bit verdict: 0 for constant, 1 for balanced.
pub fn make_deutsch_jozsa(n: usize) -> Result<OracleProblem, ProblemError> {
    if !(1..=3).contains(&n) {
        return Err(ProblemError::OutOfRange {
            family: "dj",
            n,
            min: 1,
            max: 3,
        });
    }
    let rows = 1usize << n;
    let mut settings = Vec::new();
    let mut solutions = Vec::new();
    let mut table = Vec::new();
    for word in BitString::all(rows)? {
        let values: Vec<u64> = word.cells(1).collect();
        if let Some(balanced) = dj_verdict(&values) {
            settings.push(word);
            solutions.push(BitString::new(u64::from(balanced), 1)?);
            table.push(values);
        }
    }
    OracleProblem::new(
        format!("dj:{n}"),
        n,
        1,
        CellSpec::new(rows, 1),
        settings,
        table,
        solutions,
    )
}

/// All two-to-one functions `{0,1}^n → {0,1}^(n−1)` with a hidden period.
pub fn make_simon(n: usize) -> Result<OracleProblem, ProblemError> {
    if !(2..=3).contains(&n) {
        return Err(ProblemError::OutOfRange {
            family: "simon",
            n,
            min: 2,
            max: 3,
        });
    }
    let rows = 1u64 << n;
    let value_width = n - 1;
    let mut entries: Vec<(BitString, BitString, Vec<u64>)> = Vec::new();
    for p in 1..rows {
        let reps: Vec<u64> = (0..rows).filter(|&a| a < a ^ p).collect();
        for values in (0..reps.len() as u64).permutations(reps.len()) {
            let mut t = vec![0u64; rows as usize];
            for (&r, &v) in reps.iter().zip(&values) {
                t[r as usize] = v;
                t[(r ^ p) as usize] = v;
            }
            let word = BitString::from_cells(&t, value_width)?;
            entries.push((word, BitString::new(p, n)?, t));
        }
    }
    entries.sort_by_key(|e| e.0);
    let (settings, rest): (Vec<_>, Vec<_>) = entries.into_iter().map(|(w, p, t)| (w, (p, t))).unzip();
    let (solutions, table): (Vec<_>, Vec<_>) = rest.into_iter().unzip();
    OracleProblem::new(
        format!("simon:{n}"),
        n,
        value_width,
        CellSpec::new(rows as usize, value_width),
        settings,
        table,
        solutions,
    )
}

/// Builds a built-in problem from a `family:n` selector.
pub fn builtin(selector: &str) -> Result<OracleProblem, ProblemError> {
    let (family, n) = selector
        .split_once(':')
        .ok_or_else(|| ProblemError::Structure(format!("selector {selector:?} is not family:n")))?;
    let n: usize = n
        .parse()
        .map_err(|_| ProblemError::Structure(format!("bad size in {selector:?}")))?;
    match family {
        "grover" => make_grover(n),
        "dj" => make_deutsch_jozsa(n),
        "simon" => make_simon(n),
        other => Err(ProblemError::Structure(format!("unknown family {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn grover_two_bits() {
        let p = make_grover(2).unwrap();
        assert_eq!(p.len(), 4);
        let i = p.index_of(&bits("01")).unwrap();
        assert_eq!(p.value(i, 0b01), 1);
        assert_eq!(p.value(i, 0b11), 0);
        assert_eq!(p.solution(i), bits("01"));
        assert!(p.validate().is_empty());
    }

    #[test]
    fn grover_one_and_three_bits() {
        let p = make_grover(1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.value(p.index_of(&bits("0")).unwrap(), 0), 1);
        let p = make_grover(3).unwrap();
        assert_eq!(p.len(), 8);
        for i in 0..p.len() {
            assert_eq!(p.table_row(i).iter().sum::<u64>(), 1);
        }
        assert!(make_grover(0).is_err());
        assert!(make_grover(11).is_err());
    }

    #[test]
    fn deutsch_jozsa_counts() {
        let p = make_deutsch_jozsa(1).unwrap();
        assert_eq!(
            p.settings().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            ["00", "01", "10", "11"]
        );
        assert_eq!(make_deutsch_jozsa(2).unwrap().len(), 8);
        let p3 = make_deutsch_jozsa(3).unwrap();
        assert_eq!(p3.len(), 72);
        for i in 0..p3.len() {
            let ones = p3.table_row(i).iter().sum::<u64>();
            if p3.solution(i).value() == 1 {
                assert_eq!(ones, 4);
            } else {
                assert!(ones == 0 || ones == 8);
            }
        }
        assert!(p3.validate().is_empty());
    }

    #[test]
    fn deutsch_jozsa_complements_share_solution() {
        let p = make_deutsch_jozsa(2).unwrap();
        assert_eq!(p.solution_of(&bits("0011")), p.solution_of(&bits("1100")));
        assert_eq!(p.solution_of(&bits("0000")), Some(bits("0")));
        assert_eq!(p.solution_of(&bits("0011")), Some(bits("1")));
    }

    #[test]
    fn simon_counts_and_periods() {
        let p = make_simon(2).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.solution_of(&bits("0011")), Some(bits("01")));
        for i in 0..p.len() {
            let row = p.table_row(i);
            for v in 0..2 {
                assert_eq!(row.iter().filter(|&&x| x == v).count(), 2);
            }
        }
        let p3 = make_simon(3).unwrap();
        assert_eq!(p3.len(), 168);
        for i in 0..p3.len() {
            let period = p3.solution(i).value();
            let row = p3.table_row(i);
            for a in 0..8u64 {
                for c in 0..8u64 {
                    assert_eq!(row[a as usize] == row[c as usize], a == c || a ^ c == period);
                }
            }
        }
        assert!(p3.validate().is_empty());
    }

    #[test]
    fn validate_flags_family_breaks() {
        let good = make_grover(2).unwrap();
        let mut table: Vec<Vec<u64>> = (0..4).map(|i| good.table_row(i).to_vec()).collect();
        table[1][0] = 1;
        let bad = OracleProblem::new(
            "grover:2",
            2,
            1,
            good.cells(),
            good.settings().to_vec(),
            table,
            good.solutions().to_vec(),
        )
        .unwrap();
        let v = bad.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "grover-kronecker");
    }

    #[test]
    fn structure_errors() {
        let s = vec![bits("00"), bits("00")];
        let err = OracleProblem::new(
            "x",
            1,
            1,
            CellSpec::new(2, 1),
            s.clone(),
            vec![vec![0, 0]; 2],
            s,
        );
        assert!(matches!(err, Err(ProblemError::Structure(m)) if m.contains("duplicate")));
    }

    #[test]
    fn builtin_selectors() {
        assert_eq!(builtin("simon:2").unwrap().family(), Family::Simon);
        assert!(builtin("shor:2").is_err());
        assert!(builtin("dj").is_err());
    }
}

//! Line-oriented problem files.
//!
//! ```text
//! problem <name>
//! argwidth <int>  valwidth <int>  cellwidth <int>
//! setting <b-bits> solution <s-bits>
//! row <b-bits> <a-bits> <value-bits>
//! ```
//!
//! `#` starts a comment. Unknown keywords are rejected.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::bits::BitString;

use super::{CellSpec, OracleProblem, ProblemError};

fn parse_err(line: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Parse {
        line,
        message: message.into(),
    }
}

fn bits_at(line: usize, token: Option<&str>, what: &str) -> Result<BitString, ProblemError> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|e| parse_err(line, format!("bad {what} {token:?}: {e}")))
}

fn int_at(line: usize, token: Option<&str>, key: &str) -> Result<usize, ProblemError> {
    let token = token.ok_or_else(|| parse_err(line, format!("{key} needs a value")))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("{key} value {token:?} is not an integer")))
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<OracleProblem, ProblemError> {
    parse_problem(&std::fs::read_to_string(path)?)
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<OracleProblem, ProblemError> {
    let mut name: Option<String> = None;
    let mut widths: HashMap<&'static str, (usize, usize)> = HashMap::new();
    // setting -> (declaration line, solution)
    let mut settings: Vec<(BitString, usize, BitString)> = Vec::new();
    let mut setting_index: HashMap<BitString, usize> = HashMap::new();
    let mut rows: HashMap<(BitString, u64), (usize, BitString)> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(keyword) = tokens.next() else {
            continue;
        };
        match keyword {
            "problem" => {
                if name.is_some() {
                    return Err(parse_err(line, "problem declared twice"));
                }
                let n = tokens.next().ok_or_else(|| parse_err(line, "problem needs a name"))?;
                name = Some(n.to_string());
            }
            "argwidth" | "valwidth" | "cellwidth" => {
                let mut key = keyword;
                loop {
                    let static_key = match key {
                        "argwidth" => "argwidth",
                        "valwidth" => "valwidth",
                        "cellwidth" => "cellwidth",
                        other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
                    };
                    let v = int_at(line, tokens.next(), key)?;
                    if widths.insert(static_key, (v, line)).is_some() {
                        return Err(parse_err(line, format!("{key} given twice")));
                    }
                    match tokens.next() {
                        Some(next) => key = next,
                        None => break,
                    }
                }
            }
            "setting" => {
                let b = bits_at(line, tokens.next(), "setting")?;
                match tokens.next() {
                    Some("solution") => {}
                    Some(other) => {
                        return Err(parse_err(line, format!("expected `solution`, found {other:?}")))
                    }
                    None => return Err(parse_err(line, format!("solution missing for setting {b}"))),
                }
                let s = bits_at(line, tokens.next(), "solution")?;
                if let Some(&prev) = setting_index.get(&b) {
                    return Err(parse_err(
                        line,
                        format!("duplicate setting {b} (first on line {})", settings[prev].1),
                    ));
                }
                setting_index.insert(b, settings.len());
                settings.push((b, line, s));
            }
            "row" => {
                let b = bits_at(line, tokens.next(), "row setting")?;
                let a = bits_at(line, tokens.next(), "row argument")?;
                let v = bits_at(line, tokens.next(), "row value")?;
                if rows.insert((b, a.value()), (line, v)).is_some() {
                    return Err(parse_err(line, format!("duplicate row for ({b}, {a})")));
                }
                check_width(line, "argument", &a, widths.get("argwidth"))?;
                check_width(line, "value", &v, widths.get("valwidth"))?;
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        }
        if let Some(extra) = tokens.next() {
            return Err(parse_err(line, format!("unexpected token {extra:?}")));
        }
    }

    let last = text.lines().count().max(1);
    let name = name.ok_or_else(|| parse_err(1, "missing `problem` line"))?;
    let width = |key: &str| {
        widths
            .get(key)
            .map(|w| w.0)
            .ok_or_else(|| parse_err(last, format!("missing {key}")))
    };
    let (arg_width, value_width, cell_width) =
        (width("argwidth")?, width("valwidth")?, width("cellwidth")?);
    if settings.is_empty() {
        return Err(parse_err(last, "no settings declared"));
    }
    let setting_width = settings[0].0.width();
    if cell_width == 0 || !setting_width.is_multiple_of(cell_width) {
        return Err(parse_err(
            widths["cellwidth"].1,
            format!("cellwidth {cell_width} does not divide setting width {setting_width}"),
        ));
    }
    let sol_width = settings[0].2.width();
    for (b, line, s) in &settings {
        if b.width() != setting_width {
            return Err(parse_err(*line, format!("setting {b} width mismatch")));
        }
        if s.width() != sol_width {
            return Err(parse_err(*line, format!("solution {s} width mismatch")));
        }
    }
    for ((b, a), (line, v)) in &rows {
        if !setting_index.contains_key(b) {
            return Err(parse_err(*line, format!("row for undeclared setting {b}")));
        }
        if *a >> arg_width != 0 {
            return Err(parse_err(*line, format!("argument {a} exceeds argwidth")));
        }
        if v.width() != value_width {
            return Err(parse_err(*line, format!("value {v} width mismatch")));
        }
    }

    let arg_count = 1u64 << arg_width;
    let mut table = Vec::with_capacity(settings.len());
    for (b, line, _) in &settings {
        let mut row = Vec::with_capacity(arg_count as usize);
        for a in 0..arg_count {
            let (_, v) = rows.get(&(*b, a)).ok_or_else(|| {
                parse_err(
                    *line,
                    format!("table of setting {b} has no row for argument {a}"),
                )
            })?;
            row.push(v.value());
        }
        table.push(row);
    }

    let problem = OracleProblem::new(
        name,
        arg_width,
        value_width,
        CellSpec::new(setting_width / cell_width, cell_width),
        settings.iter().map(|s| s.0).collect(),
        table,
        settings.iter().map(|s| s.2).collect(),
    )?;
    let violations = problem.validate();
    if violations.is_empty() {
        Ok(problem)
    } else {
        Err(ProblemError::Invalid(violations))
    }
}

fn check_width(
    line: usize,
    what: &str,
    word: &BitString,
    declared: Option<&(usize, usize)>,
) -> Result<(), ProblemError> {
    match declared {
        Some(&(w, _)) if w != word.width() => Err(parse_err(
            line,
            format!("{what} {word} has width {}, declared {w}", word.width()),
        )),
        _ => Ok(()),
    }
}

/// Serializes a problem; [`parse_problem`] reads it back unchanged.
pub fn write_problem(problem: &OracleProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem {}", problem.name());
    let _ = writeln!(
        out,
        "argwidth {}  valwidth {}  cellwidth {}",
        problem.arg_width(),
        problem.value_width(),
        problem.cells().cell_width
    );
    for (i, b) in problem.settings().iter().enumerate() {
        let _ = writeln!(out, "setting {b} solution {}", problem.solution(i));
    }
    for (i, b) in problem.settings().iter().enumerate() {
        for a in 0..problem.arg_count() as u64 {
            let arg = BitString::new(a, problem.arg_width()).expect("argument fits");
            let v = BitString::new(problem.value(i, a), problem.value_width()).expect("value fits");
            let _ = writeln!(out, "row {b} {arg} {v}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{make_deutsch_jozsa, make_grover, make_simon};
    use proptest::prelude::*;

    const SMALL: &str = "\
# two drawers
problem grover:1
argwidth 1  valwidth 1  cellwidth 1
setting 0 solution 0
setting 1 solution 1
row 0 0 1
row 0 1 0   # miss
row 1 0 0
row 1 1 1
";

    #[test]
    fn parses_small_file() {
        let p = parse_problem(SMALL).unwrap();
        assert_eq!(p, make_grover(1).unwrap());
    }

    fn line_of(err: ProblemError) -> usize {
        match err {
            ProblemError::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn reports_line_numbers() {
        let dup = SMALL.replace("setting 1 solution 1", "setting 0 solution 0");
        assert_eq!(line_of(parse_problem(&dup).unwrap_err()), 5);

        let missing_row = SMALL.replace("row 1 1 1\n", "");
        assert_eq!(line_of(parse_problem(&missing_row).unwrap_err()), 5);

        let no_solution = SMALL.replace("setting 1 solution 1", "setting 1");
        assert_eq!(line_of(parse_problem(&no_solution).unwrap_err()), 5);

        let wide = SMALL.replace("row 1 0 0", "row 1 00 0");
        assert_eq!(line_of(parse_problem(&wide).unwrap_err()), 8);

        let unknown = SMALL.replace("row 0 0 1", "cell 0 0 1");
        assert_eq!(line_of(parse_problem(&unknown).unwrap_err()), 6);

        let stray = SMALL.replace("cellwidth 1", "cellwidth 1 colour 3");
        assert_eq!(line_of(parse_problem(&stray).unwrap_err()), 3);
    }

    #[test]
    fn rejects_family_violations() {
        let wrong = SMALL.replace("row 1 1 1", "row 1 1 0");
        assert!(matches!(parse_problem(&wrong), Err(ProblemError::Invalid(_))));
    }

    #[test]
    fn builtins_round_trip() {
        for p in [
            make_grover(3).unwrap(),
            make_deutsch_jozsa(2).unwrap(),
            make_simon(3).unwrap(),
        ] {
            assert_eq!(parse_problem(&write_problem(&p)).unwrap(), p);
        }
    }

    proptest! {
        #[test]
        fn custom_problems_round_trip(
            arg_width in 1usize..=3,
            value_width in 1usize..=3,
            seed_rows in proptest::collection::vec(any::<u64>(), 1..6),
        ) {
            let rows = 1usize << arg_width;
            let mut settings = Vec::new();
            let mut table = Vec::new();
            let mut solutions = Vec::new();
            for (k, seed) in seed_rows.iter().enumerate() {
                let setting = BitString::new(k as u64, 4).unwrap();
                let row: Vec<u64> = (0..rows)
                    .map(|a| (seed >> (a * value_width)) & ((1 << value_width) - 1))
                    .collect();
                settings.push(setting);
                solutions.push(BitString::new(seed & 1, 1).unwrap());
                table.push(row);
            }
            let p = OracleProblem::new(
                "custom",
                arg_width,
                value_width,
                CellSpec::new(2, 2),
                settings,
                table,
                solutions,
            )
            .unwrap();
            prop_assert_eq!(parse_problem(&write_problem(&p)).unwrap(), p);
        }
    }
}

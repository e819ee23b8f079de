//! Commands behind the `advknow` binary.
//!
//! Every command returns an [`Outcome`]: the rendered text, the tables it
//! produced and the list of failed checks. The exit code is 0 exactly when
//! that list is empty.

pub mod table;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use advknow_core::advknow::{
    advanced_knowledge_instances, crosscheck_shortcut, enumerate_splits, Rejection,
};
use advknow_core::circuits::{run_alice, run_bob, Algorithm};
use advknow_core::complexity::{build_report, ReportConfig, SearchBudget};
use advknow_core::engine::verify::{verify_grover_states, Fault, VerifyConfig};
use advknow_core::histories::{
    annotate_advanced_knowledge, enumerate_histories, summarize, DEFAULT_PATH_BUDGET,
};
use advknow_core::problem::{builtin, load_problem};
use advknow_core::seed::{derive_seed, tag};
use advknow_core::{BitString, Family, OracleProblem};

pub use table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Verify,
    Advknow,
    Complexity,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Advknow => "advknow",
            Command::Complexity => "complexity",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Delim,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemSource {
    /// `grover:2`, `dj:3`, `simon:2`.
    Builtin(String),
    File(PathBuf),
}

impl ProblemSource {
    /// Reads `--problem` and `--n`: a family name needs `n`, a `family:n`
    /// selector or a file path does not.
    pub fn parse(problem: &str, n: Option<usize>) -> Result<Self> {
        const FAMILIES: [&str; 3] = ["grover", "dj", "simon"];
        if FAMILIES.contains(&problem) {
            let n = n.ok_or_else(|| anyhow!("--problem {problem} needs --n"))?;
            return Ok(Self::Builtin(format!("{problem}:{n}")));
        }
        if let Some((family, _)) = problem.split_once(':') {
            if FAMILIES.contains(&family) {
                if n.is_some() {
                    bail!("--n given twice: in --problem {problem} and as a flag");
                }
                return Ok(Self::Builtin(problem.to_string()));
            }
        }
        Ok(Self::File(PathBuf::from(problem)))
    }

    pub fn load(&self) -> Result<OracleProblem> {
        match self {
            Self::Builtin(sel) => builtin(sel).with_context(|| format!("building {sel}")),
            Self::File(path) => {
                load_problem(path).with_context(|| format!("loading {}", path.display()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub problem: Option<ProblemSource>,
    pub b_c: Option<BitString>,
    pub seed: u64,
    pub format: Format,
    pub budget: SearchBudget,
    /// Monte-Carlo trials per setting for the random-search averages.
    pub trials: usize,
    pub out: Option<PathBuf>,
    /// Grover iteration override for `simulate`.
    pub iterations: Option<usize>,
    /// Measurement shots for `simulate`.
    pub shots: usize,
    /// Append the history dump to `simulate`.
    pub histories: bool,
    /// Split with the right cell of B and the left bit of A in `verify`.
    pub mirrored: bool,
    pub fault: Option<Fault>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            problem: None,
            b_c: None,
            seed: 0,
            format: Format::Text,
            budget: SearchBudget::default(),
            trials: ReportConfig::default().trials,
            out: None,
            iterations: None,
            shots: 1000,
            histories: false,
            mirrored: false,
            fault: None,
        }
    }

    pub fn with_problem(mut self, selector: &str) -> Self {
        self.problem = Some(ProblemSource::Builtin(selector.to_string()));
        self
    }

    fn validate(&self) -> Result<()> {
        if self.budget.max_nodes == 0 || self.budget.max_cost == 0 {
            bail!("search budgets must be positive");
        }
        if self.trials == 0 {
            bail!("--trials must be positive");
        }
        Ok(())
    }

    fn load(&self) -> Result<OracleProblem> {
        self.problem
            .as_ref()
            .ok_or_else(|| anyhow!("{} needs --problem", self.command.name()))?
            .load()
    }

    /// The requested setting, or every setting of the problem.
    fn settings(&self, problem: &OracleProblem) -> Result<Vec<BitString>> {
        match self.b_c {
            Some(b) if problem.contains(&b) => Ok(vec![b]),
            Some(b) => bail!("--bc {b} is not a setting of {}", problem.name()),
            None => Ok(problem.settings().to_vec()),
        }
    }

    fn seed_for(&self, path: &[u64]) -> u64 {
        let mut full = vec![tag(self.command.name())];
        full.extend_from_slice(path);
        derive_seed(self.seed, &full)
    }
}

/// Largest built-in sizes the full pipeline is meant for.
pub fn desk_cap(family: Family) -> Option<usize> {
    match family {
        Family::Grover => Some(4),
        Family::DeutschJozsa | Family::Simon => Some(3),
        Family::Custom => None,
    }
}

fn check_cap(problem: &OracleProblem) -> Result<()> {
    if let Some(cap) = desk_cap(problem.family()) {
        if problem.arg_width() > cap {
            bail!(
                "{} is beyond the supported size (n ≤ {cap} for this family)",
                problem.name()
            );
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub tables: Vec<Table>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// What goes to standard output: the text report, or the first table in
    /// delimited form.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Delim => self.tables.first().map(Table::to_delimited).unwrap_or_default(),
        }
    }

    /// Writes every table to `<dir>/<name>.tsv` and returns the paths.
    pub fn write_tables(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        self.tables
            .iter()
            .map(|t| {
                let path = dir.join(format!("{}.tsv", t.name.replace(':', "")));
                let file = fs::File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                t.write_delimited(std::io::BufWriter::new(file))?;
                Ok(path)
            })
            .collect()
    }

    fn absorb(&mut self, other: Outcome) {
        self.text.push_str(&other.text);
        self.tables.extend(other.tables);
        self.failures.extend(other.failures);
    }
}

/// Runs the configured command and writes its tables to `--out` if given.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let mut out = match config.command {
        Command::Simulate => cmd_simulate(config),
        Command::Verify => cmd_verify(config),
        Command::Advknow => cmd_advknow(config),
        Command::Complexity => cmd_complexity(config),
        Command::Report => cmd_report(config),
    }?;
    if let Some(dir) = &config.out {
        for path in out.write_tables(dir)? {
            let _ = writeln!(out.text, "wrote {}", path.display());
        }
    }
    Ok(out)
}

/// Whether reading `a` from A answers the problem for `solution`.
fn reads_solution(problem: &OracleProblem, solution: &BitString, a: usize) -> Option<bool> {
    match problem.family() {
        Family::Grover => Some(a as u64 == solution.value()),
        Family::DeutschJozsa => Some((a == 0) == solution.is_zero()),
        Family::Simon => {
            let y = BitString::new(a as u64, problem.arg_width()).expect("fits");
            Some(!y.dot(solution))
        }
        Family::Custom => None,
    }
}

/// Probability that reading A yields an answer consistent with the solution.
fn success_probability(problem: &OracleProblem, solution: &BitString, dist: &[f64]) -> Option<f64> {
    let mut total = 0.0;
    for (a, p) in dist.iter().enumerate() {
        if reads_solution(problem, solution, a)? {
            total += p;
        }
    }
    Some(total)
}

fn algorithm_for(config: &RunConfig, problem: &OracleProblem) -> Result<Algorithm> {
    let alg = Algorithm::for_problem(problem)
        .ok_or_else(|| anyhow!("no built-in algorithm for {}", problem.name()))?;
    Ok(match (alg, config.iterations) {
        (Algorithm::Grover { .. }, Some(k)) => Algorithm::Grover { iterations: k },
        (_, Some(_)) => bail!("--iterations applies to Grover problems only"),
        (alg, None) => alg,
    })
}

/// Runs the family's algorithm for each setting and samples A.
pub fn cmd_simulate(config: &RunConfig) -> Result<Outcome> {
    let problem = config.load()?;
    let alg = algorithm_for(config, &problem)?;
    let width = problem.arg_width();
    let mut out = Outcome::default();
    let mut table = Table::new(
        format!("simulate_{}", problem.name()),
        config.seed,
        &["problem", "b_c", "solution", "steps", "p_success", "dominant_a", "p_dominant", "shots", "hits"],
    );
    let _ = writeln!(out.text, "simulate {} ({alg:?}) seed={}", problem.name(), config.seed);
    for (k, b_c) in config.settings(&problem)?.iter().enumerate() {
        let run = run_bob(&problem, alg, b_c)?;
        let output = run.output();
        let solution = problem.solution_of(b_c).expect("setting in σ");
        let dist = output.a_distribution();
        let p = success_probability(&problem, &solution, &dist);
        let (dominant, p_dom) = output.branches()[0].dominant_a(output.layout());
        let dominant = BitString::new(dominant, width)?;

        let mut rng_seed = config.seed_for(&[k as u64]);
        let mut hits = 0usize;
        for _ in 0..config.shots {
            let (a, _) = output.measure_a(rng_seed)?;
            rng_seed = derive_seed(rng_seed, &[1]);
            if reads_solution(&problem, &solution, a.value() as usize) == Some(true) {
                hits += 1;
            }
        }

        let _ = writeln!(
            out.text,
            "b_c={b_c} solution={solution} p_success={} A={dominant} (p={p_dom:.6}) hits={hits}/{}",
            p.map_or("-".to_string(), |p| format!("{p:.6}")),
            config.shots
        );
        let cells: Vec<String> = dist
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 1e-12)
            .map(|(a, p)| format!("{}:{p:.6}", BitString::new(a as u64, width).expect("fits")))
            .collect();
        let _ = writeln!(out.text, "  A distribution {}", cells.join(" "));
        if let Some(p) = p {
            if (problem.family() == Family::DeutschJozsa || problem.family() == Family::Simon)
                && (p - 1.0).abs() > 1e-9
            {
                out.failures.push(format!("{} b_c={b_c}: p_success={p}", problem.name()));
            }
        }
        if config.histories {
            let labels: Vec<String> = run.steps.iter().map(|s| s.label.clone()).collect();
            let instances = advanced_knowledge_instances(&problem, b_c).unwrap_or_default();
            let hs = enumerate_histories(&run, b_c, DEFAULT_PATH_BUDGET)?;
            for h in &hs {
                let h = annotate_advanced_knowledge(&problem, h, &instances);
                let _ = writeln!(out.text, "  {}", h.render(output.layout(), &labels));
            }
        }
        table.push(vec![
            problem.name().to_string(),
            b_c.to_string(),
            solution.to_string(),
            run.steps.len().to_string(),
            table::opt_num(p),
            dominant.to_string(),
            table::num(p_dom),
            config.shots.to_string(),
            hits.to_string(),
        ]);
    }
    out.tables.push(table);
    Ok(out)
}

fn list(v: &[BitString]) -> String {
    format!("{{{}}}", v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
}

/// Rebuilds the nine labelled states of the two-drawer Grover run.
pub fn cmd_verify(config: &RunConfig) -> Result<Outcome> {
    let mut vc = if config.mirrored {
        VerifyConfig::mirrored()
    } else {
        VerifyConfig::default()
    };
    if let Some(b) = config.b_c {
        if b.width() != 2 {
            bail!("verify runs on two-bit Grover settings; got --bc {b}");
        }
        vc.b_c = b;
    }
    vc.fault = config.fault;
    let report = verify_grover_states(&vc)?;
    let mut out = Outcome::default();
    let _ = writeln!(
        out.text,
        "verify grover:2 outcome={} b_c={} B cells {:?} at t0, A bits {:?} at t2{}",
        vc.outcome,
        vc.b_c,
        vc.b_cells,
        vc.a_bits,
        vc.fault.map_or(String::new(), |f| format!(" fault={f:?}"))
    );
    let mut table = Table::new(
        "verify",
        config.seed,
        &["state", "time", "fidelity", "expected", "found", "pass"],
    );
    for check in &report.checks {
        let _ = writeln!(out.text, "{check}");
        table.push(vec![
            check.name.to_string(),
            check.time.to_string(),
            table::num(check.fidelity),
            list(&check.expected),
            list(&check.found),
            check.passed().to_string(),
        ]);
        if !check.passed() {
            out.failures
                .push(format!("({}) fidelity={:.12} found={}", check.name, check.fidelity, list(&check.found)));
        }
    }
    let _ = writeln!(
        out.text,
        "{}/{} states reproduced",
        report.checks.len() - out.failures.len(),
        report.checks.len()
    );
    out.tables.push(table);
    Ok(out)
}

fn reason(verdict: &Result<(), Rejection>) -> String {
    match verdict {
        Ok(()) => "accepted".into(),
        Err(Rejection::Redundant) => "redundant".into(),
        Err(Rejection::Uneven { .. }) => "uneven".into(),
        Err(Rejection::SelfSufficient) => "self-sufficient".into(),
    }
}

/// Enumerates splits, instances and the half-table cross-check.
pub fn cmd_advknow(config: &RunConfig) -> Result<Outcome> {
    let problem = config.load()?;
    check_cap(&problem)?;
    let mut out = Outcome::default();
    let mut splits_t = Table::new(
        format!("advknow_{}", problem.name()),
        config.seed,
        &["problem", "b_c", "cells_i", "cells_j", "size_i", "size_j", "h_i", "h_j", "half_total", "verdict"],
    );
    let mut cross_t = Table::new(
        format!("crosscheck_{}", problem.name()),
        config.seed,
        &["problem", "b_c", "applicable", "from_tables", "from_rule", "match"],
    );
    for b_c in config.settings(&problem)? {
        let splits = enumerate_splits(&problem, &b_c)?;
        let accepted = splits.iter().filter(|s| s.accepted()).count();
        let _ = writeln!(out.text, "{} b_c={b_c} splits={} accepted={accepted}", problem.name(), splits.len());
        for s in &splits {
            let _ = writeln!(out.text, "  {s}");
            splits_t.push(vec![
                problem.name().to_string(),
                b_c.to_string(),
                s.mask(&s.cells_i),
                s.mask(&s.cells_j),
                s.sigma_i.len().to_string(),
                s.sigma_j.len().to_string(),
                table::num(s.h_i),
                table::num(s.h_j),
                s.half_total.to_string(),
                reason(&s.verdict),
            ]);
        }
        for inst in advanced_knowledge_instances(&problem, &b_c)? {
            let _ = writeln!(out.text, "  instance {}", list(&inst.subset));
        }
        let cross = crosscheck_shortcut(&problem, &b_c)?;
        let _ = writeln!(out.text, "  {cross}");
        if !cross.matches() {
            out.failures.push(format!(
                "{} b_c={b_c}: half tables and rule disagree (tables only {}, rule only {})",
                problem.name(),
                cross.only_in_tables().len(),
                cross.only_in_rule().len()
            ));
        }
        cross_t.push(vec![
            problem.name().to_string(),
            b_c.to_string(),
            cross.applicable.to_string(),
            cross.from_tables.len().to_string(),
            cross.from_rule.len().to_string(),
            cross.matches().to_string(),
        ]);
    }
    out.tables.push(splits_t);
    out.tables.push(cross_t);
    Ok(out)
}

/// Predicted query counts against `k(n)` and the classical baseline.
pub fn cmd_complexity(config: &RunConfig) -> Result<Outcome> {
    let problem = config.load()?;
    check_cap(&problem)?;
    let rc = ReportConfig {
        budget: config.budget,
        trials: config.trials,
        seed: config.seed_for(&[tag(problem.name())]),
    };
    let report = build_report(&problem, &rc)?;
    let wanted = config.settings(&problem)?;
    let mut table = Table::new(
        format!("complexity_{}", problem.name()),
        config.seed,
        &[
            "name", "b_c", "instances", "N_max", "N_min", "k_n", "baseline", "avg_ii", "avg_iii",
            "seed", "avg_ii_se", "avg_iii_se",
        ],
    );
    let mut out = Outcome::default();
    for r in report.records.iter().filter(|r| wanted.contains(&r.b_c)) {
        let (max, min) = (r.prediction.max(), r.prediction.min());
        if let Some(m) = max {
            if m > report.baseline {
                out.failures.push(format!(
                    "{} b_c={}: N={m} exceeds the baseline {}",
                    report.name, r.b_c, report.baseline
                ));
            }
        }
        table.push(vec![
            report.name.clone(),
            r.b_c.to_string(),
            r.instances().to_string(),
            max.map_or(String::new(), |m| m.to_string()),
            min.map_or(String::new(), |m| m.to_string()),
            table::opt_num(report.k_n),
            report.baseline.to_string(),
            table::opt_num(r.avg_ii.map(|e| e.mean)),
            table::opt_num(r.avg_iii.map(|e| e.mean)),
            config.seed.to_string(),
            table::opt_num(r.avg_ii.map(|e| e.stderr)),
            table::opt_num(r.avg_iii.map(|e| e.stderr)),
        ]);
    }
    let _ = writeln!(
        out.text,
        "complexity {} baseline={} k(n)={} trials={} seed={}",
        report.name,
        report.baseline,
        report.k_n.map_or("-".to_string(), |k| format!("{k:.6}")),
        config.trials,
        config.seed
    );
    out.text.push_str(&text_table(&table));
    out.tables.push(table);
    Ok(out)
}

/// Rounds long decimals for the human-readable view.
fn text_table(t: &Table) -> String {
    let mut shown = t.clone();
    for row in &mut shown.rows {
        for cell in row.iter_mut() {
            if cell.contains('.') {
                if let Ok(x) = cell.parse::<f64>() {
                    *cell = format!("{x:.4}");
                }
            }
        }
    }
    shown.to_text()
}

pub const REPORT_PROBLEMS: [&str; 6] = ["grover:2", "grover:4", "dj:2", "dj:3", "simon:2", "simon:3"];

/// Problems small enough to enumerate every history.
const HISTORY_PROBLEMS: [&str; 5] = ["grover:2", "dj:2", "dj:3", "simon:2", "simon:3"];

fn history_table(seed: u64) -> Result<Table> {
    let mut t = Table::new(
        "histories",
        seed,
        &["problem", "b_c", "paths", "annotated", "direct", "single_query_unexplained", "multi_query"],
    );
    for sel in HISTORY_PROBLEMS {
        let problem = builtin(sel)?;
        let alg = Algorithm::for_problem(&problem).expect("built-in family");
        let run = run_alice(&problem, alg)?;
        for b_c in problem.settings() {
            let instances = advanced_knowledge_instances(&problem, b_c)?;
            let hs: Vec<_> = enumerate_histories(&run, b_c, DEFAULT_PATH_BUDGET)?
                .iter()
                .map(|h| annotate_advanced_knowledge(&problem, h, &instances))
                .collect();
            let s = summarize(&hs);
            t.push(vec![
                sel.to_string(),
                b_c.to_string(),
                s.paths.to_string(),
                s.annotated.to_string(),
                s.direct.to_string(),
                s.unannotated_single_query.to_string(),
                s.multi_query.to_string(),
            ]);
        }
    }
    Ok(t)
}

/// Full pipeline over the built-in problems.
pub fn cmd_report(config: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut verify = RunConfig { command: Command::Verify, ..config.clone() };
    verify.b_c = None;
    out.absorb(cmd_verify(&verify)?);
    for sel in REPORT_PROBLEMS {
        let sub = RunConfig {
            problem: Some(ProblemSource::Builtin(sel.to_string())),
            b_c: None,
            iterations: None,
            ..config.clone()
        };
        out.absorb(cmd_simulate(&RunConfig { command: Command::Simulate, ..sub.clone() })?);
        out.absorb(cmd_advknow(&RunConfig { command: Command::Advknow, ..sub.clone() })?);
        out.absorb(cmd_complexity(&RunConfig { command: Command::Complexity, ..sub })?);
    }
    let histories = history_table(config.seed)?;
    out.text.push_str("histories\n");
    out.text.push_str(&histories.to_text());
    out.tables.push(histories);
    Ok(out)
}

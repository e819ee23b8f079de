//! Sum over classical histories.
//!
//! A history follows one basis component `|b⟩_B|a⟩_A|v⟩_V` of a branch through
//! the steps of a run, picking at every step one output component reached with
//! nonzero amplitude. The amplitudes multiply along the path, and summing the
//! products of all paths that end on a component gives back that component of
//! the output. Amplitudes are those of the branch's normalized A⊗V vector;
//! the branch weight and random phase are common factors and left out.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::advknow::AdvancedKnowledgeInstance;
use crate::bits::BitString;
use crate::circuits::{AlgorithmRun, StepAction, TimeLabel};
use crate::complexity::is_determined;
use crate::problem::OracleProblem;
use crate::state::{CVector, Layout, C64};

/// Paths allowed per enumeration before giving up.
pub const DEFAULT_PATH_BUDGET: usize = 1 << 20;

/// Transition amplitudes at or below this are treated as absent.
const ZERO_AMPLITUDE: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HistoryError {
    #[error("setting {0} has no branch in this run")]
    NoBranch(BitString),
    #[error("step {0} relabels B; histories keep the setting fixed")]
    Relabelling(String),
    #[error("more than {0} paths")]
    Budget(usize),
}

/// One point of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub time: TimeLabel,
    /// Index in the A⊗V basis.
    pub component: usize,
    /// Product of the amplitudes up to here.
    pub amplitude: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determination {
    /// The one query fixes the solution even without advanced knowledge.
    Direct,
    /// The query fixes the solution only within the advanced-knowledge instance.
    WithinInstance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalHistory {
    pub setting: BitString,
    pub path: Vec<PathPoint>,
    /// A value entering each function evaluation, in order.
    pub queried: Vec<u64>,
    pub ak_instance: Option<Vec<BitString>>,
    pub determination: Option<Determination>,
}

impl ClassicalHistory {
    pub fn amplitude(&self) -> C64 {
        self.path.last().map_or(C64::new(1.0, 0.0), |p| p.amplitude)
    }

    pub fn final_component(&self) -> usize {
        self.path.last().map_or(0, |p| p.component)
    }

    /// The single queried argument, when there is exactly one query.
    pub fn queried_argument(&self) -> Option<u64> {
        match self.queried[..] {
            [a] => Some(a),
            _ => None,
        }
    }

    /// The path in ket notation, one arrow per step.
    pub fn render(&self, layout: &Layout, labels: &[String]) -> String {
        let ket = |c: usize| {
            let (a, v) = (c / layout.v_dim(), c % layout.v_dim());
            let a = BitString::new(a as u64, layout.a_width).map_or(a.to_string(), |w| w.to_string());
            let v = if layout.v_width == 0 {
                String::new()
            } else {
                BitString::new(v as u64, layout.v_width).map_or(v.to_string(), |w| format!("|{w}⟩V"))
            };
            format!("|{}⟩B|{a}⟩A{v}", self.setting)
        };
        let mut out = String::new();
        for (k, point) in self.path.iter().enumerate() {
            if k > 0 {
                let label = labels.get(k - 1).map_or("?", String::as_str);
                let _ = write!(out, " -{label}-> ");
            }
            out.push_str(&ket(point.component));
        }
        let amp = self.amplitude();
        // Round before printing so tiny negatives do not show as -0.000000.
        let tidy = |x: f64| (x * 1e6).round() / 1e6 + 0.0;
        let _ = write!(out, "  amp={:+.6}{:+.6}i", tidy(amp.re), tidy(amp.im));
        match (&self.ak_instance, self.determination) {
            (Some(inst), Some(d)) => {
                let list: Vec<String> = inst.iter().map(|b| b.to_string()).collect();
                let tag = match d {
                    Determination::Direct => " direct",
                    Determination::WithinInstance => "",
                };
                let _ = write!(out, "  ak={{{}}}{tag}", list.join(","));
            }
            _ => out.push_str("  ak=-"),
        }
        out
    }
}

/// All paths of the branch `setting` of `run` with a nonzero amplitude product.
pub fn enumerate_histories(
    run: &AlgorithmRun,
    setting: &BitString,
    budget: usize,
) -> Result<Vec<ClassicalHistory>, HistoryError> {
    let branch = run
        .input()
        .branch(setting)
        .ok_or(HistoryError::NoBranch(*setting))?;
    let mut matrices = Vec::with_capacity(run.steps.len());
    for step in &run.steps {
        let m = match &step.action {
            StepAction::Uniform(m) => m,
            StepAction::PerSetting(map) => map.get(setting).ok_or(HistoryError::NoBranch(*setting))?,
            StepAction::Relabel(_) => return Err(HistoryError::Relabelling(step.label.clone())),
        };
        matrices.push((m, step.label == "U_f"));
    }
    let v_dim = run.input().layout().v_dim();
    let times: Vec<TimeLabel> = run.trace.iter().map(|(t, _)| *t).collect();

    let mut out = Vec::new();
    let mut stack: Vec<(Vec<PathPoint>, Vec<u64>)> = branch
        .av
        .iter()
        .enumerate()
        .filter(|(_, amp)| amp.norm() > ZERO_AMPLITUDE)
        .map(|(c, amp)| {
            (
                vec![PathPoint {
                    time: times[0],
                    component: c,
                    amplitude: *amp,
                }],
                Vec::new(),
            )
        })
        .collect();
    stack.reverse();
    while let Some((path, queried)) = stack.pop() {
        let depth = path.len() - 1;
        let here = *path.last().expect("paths start nonempty");
        if depth == matrices.len() {
            if out.len() == budget {
                return Err(HistoryError::Budget(budget));
            }
            out.push(ClassicalHistory {
                setting: *setting,
                path,
                queried,
                ak_instance: None,
                determination: None,
            });
            continue;
        }
        let (m, is_query) = matrices[depth];
        let mut queried = queried;
        if is_query {
            queried.push((here.component / v_dim) as u64);
        }
        for next in (0..m.nrows()).rev() {
            let t = m[(next, here.component)];
            if t.norm() > ZERO_AMPLITUDE {
                let mut p = path.clone();
                p.push(PathPoint {
                    time: times[depth + 1],
                    component: next,
                    amplitude: here.amplitude * t,
                });
                stack.push((p, queried.clone()));
            }
        }
    }
    Ok(out)
}

/// Sum of the amplitude products of all paths, per final component.
pub fn recombine(histories: &[ClassicalHistory], av_dim: usize) -> CVector {
    let mut v = CVector::zeros(av_dim);
    for h in histories {
        v[h.final_component()] += h.amplitude();
    }
    v
}

/// Assigns the advanced-knowledge instance that explains a one-query history.
///
/// The instance is the first of `instances` containing the setting in which
/// the observed value `f_b(a)` fixes the solution. Histories with no query or
/// several queries, and those no instance explains, stay unannotated.
pub fn annotate_advanced_knowledge(
    problem: &OracleProblem,
    history: &ClassicalHistory,
    instances: &[AdvancedKnowledgeInstance],
) -> ClassicalHistory {
    let mut out = history.clone();
    out.ak_instance = None;
    out.determination = None;
    let (Some(a), Some(index)) = (history.queried_argument(), problem.index_of(&history.setting)) else {
        return out;
    };
    let seen = problem.value(index, a);
    let consistent = |scope: &[BitString]| -> Vec<BitString> {
        scope
            .iter()
            .filter(|b| {
                problem
                    .index_of(b)
                    .is_some_and(|i| problem.value(i, a) == seen)
            })
            .copied()
            .collect()
    };
    let found = instances.iter().find(|inst| {
        inst.subset.contains(&history.setting) && is_determined(problem, &consistent(&inst.subset))
    });
    if let Some(inst) = found {
        out.ak_instance = Some(inst.subset.clone());
        out.determination = Some(if is_determined(problem, &consistent(problem.settings())) {
            Determination::Direct
        } else {
            Determination::WithinInstance
        });
    }
    out
}

/// Aggregate of an annotated enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HistorySummary {
    pub paths: usize,
    pub annotated: usize,
    pub direct: usize,
    pub unannotated_single_query: usize,
    pub multi_query: usize,
}

impl fmt::Display for HistorySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "paths={} annotated={} direct={} single-query-unexplained={} multi-query={}",
            self.paths, self.annotated, self.direct, self.unannotated_single_query, self.multi_query
        )
    }
}

pub fn summarize(histories: &[ClassicalHistory]) -> HistorySummary {
    let mut s = HistorySummary {
        paths: histories.len(),
        ..HistorySummary::default()
    };
    for h in histories {
        match (h.queried.len(), &h.determination) {
            (_, Some(d)) => {
                s.annotated += 1;
                if *d == Determination::Direct {
                    s.direct += 1;
                }
            }
            (1, None) => s.unannotated_single_query += 1,
            (n, None) if n > 1 => s.multi_query += 1,
            _ => {}
        }
    }
    s
}

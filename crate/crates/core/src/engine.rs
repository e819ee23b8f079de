//! The two relational representations of a run and the projection calculus.
//!
//! To Bob (and any outside observer) the initial measurement of B collapses
//! the state at `t0`. To Alice that projection is postponed to the end of her
//! unitary action, so her input is the whole dephased ensemble. A projection
//! is moved to an earlier time by pulling both of its end states back through
//! the inverse steps.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::BitString;
use crate::circuits::{permutation_sending, u_b, Algorithm, CircuitError, TimeLabel, UnitaryStep};
use crate::problem::OracleProblem;
use crate::state::{CellSelection, DephasedEnsemble, StateError};

pub mod verify;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("setting {0} is not in the problem's setting set")]
    NotInSigma(BitString),
    #[error("no algorithm is defined for problem {0}")]
    NoAlgorithm(String),
    #[error("time {0} is not on this trace")]
    UnknownTime(TimeLabel),
    #[error("cannot move a projection {steps} steps back from {from}")]
    TooFarBack { from: TimeLabel, steps: usize },
    #[error("U_B does not send {from} to {to}")]
    PermutationMismatch { from: BitString, to: BitString },
}

pub type Result<T> = std::result::Result<T, EngineError>;

/// Which register a projection reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// Cells of B.
    BCells(CellSelection),
    /// Bits of A, counted from the left.
    ABits(CellSelection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub target: Target,
    /// Where the projection currently sits.
    pub time: TimeLabel,
}

impl Projection {
    pub fn b_cells(cells: &[usize], source: &BitString, cell_width: usize, time: TimeLabel) -> Self {
        Self {
            target: Target::BCells(CellSelection::agreeing_with(source, cells, cell_width)),
            time,
        }
    }

    pub fn a_bits(bits: &[usize], source: &BitString, time: TimeLabel) -> Self {
        Self {
            target: Target::ABits(CellSelection::agreeing_with(source, bits, 1)),
            time,
        }
    }

    /// Born probability and post-measurement state.
    pub fn apply(&self, state: &DephasedEnsemble) -> Result<(f64, DephasedEnsemble)> {
        Ok(match &self.target {
            Target::BCells(sel) => state.measure_b_cells(sel)?,
            Target::ABits(sel) => state.measure_a_bits(sel)?,
        })
    }
}

/// The two end states of a projection, at the time it has been moved to.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub time: TimeLabel,
    pub probability: f64,
    pub before: DephasedEnsemble,
    pub after: DephasedEnsemble,
}

/// A sequence of states with the unitary steps between them.
#[derive(Debug, Clone)]
pub struct Trace {
    /// `t0`, `t0+`, `t1`, the inner points, `t2`, `t2+`.
    pub states: Vec<(TimeLabel, DephasedEnsemble)>,
}

impl Trace {
    pub fn index_of(&self, time: TimeLabel) -> Result<usize> {
        self.states
            .iter()
            .position(|(t, _)| *t == time)
            .ok_or(EngineError::UnknownTime(time))
    }

    pub fn at(&self, time: TimeLabel) -> Result<&DephasedEnsemble> {
        Ok(&self.states[self.index_of(time)?].1)
    }

    /// One line per time: `label  setting:weight:A ...` with A the dominant value.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (t, state) in &self.states {
            let _ = write!(out, "{t:<5}");
            let layout = state.layout();
            for b in state.branches() {
                let (a, _) = b.dominant_a(layout);
                let a = BitString::new(a, layout.a_width).map_or_else(|_| a.to_string(), |a| a.to_string());
                let _ = write!(out, " {}:{:.6}:{}", b.setting, b.weight, a);
            }
            out.push('\n');
        }
        out
    }
}

/// Moves a projection sitting at `proj.time` back by `steps_back` unitary steps.
///
/// `steps[k]` must map `states[first + k]` to `states[first + k + 1]` where
/// `first` is the index of `t0+` (the first state the steps act on).
pub fn advance_projection(
    trace: &Trace,
    steps: &[UnitaryStep],
    proj: &Projection,
    steps_back: usize,
) -> Result<ProjectionPair> {
    let first = trace.index_of(TimeLabel::T0Plus)?;
    let at = trace.index_of(proj.time)?;
    let last = first + steps.len();
    if at < first || at > last || steps_back > at - first {
        return Err(EngineError::TooFarBack {
            from: proj.time,
            steps: steps_back,
        });
    }
    let mut before = trace.states[at].1.clone();
    let (probability, mut after) = proj.apply(&before)?;
    for k in (at - steps_back..at).rev() {
        let inv = steps[k - first].inverse();
        before = inv.apply(&before)?;
        after = inv.apply(&after)?;
    }
    Ok(ProjectionPair {
        time: trace.states[at - steps_back].0,
        probability,
        before,
        after,
    })
}

/// Moves a projection pair forward by `steps_forward` steps.
pub fn retard_projection(
    trace: &Trace,
    steps: &[UnitaryStep],
    pair: &ProjectionPair,
    steps_forward: usize,
) -> Result<ProjectionPair> {
    let first = trace.index_of(TimeLabel::T0Plus)?;
    let at = trace.index_of(pair.time)?;
    if at < first || at + steps_forward > first + steps.len() {
        return Err(EngineError::TooFarBack {
            from: pair.time,
            steps: steps_forward,
        });
    }
    let mut before = pair.before.clone();
    let mut after = pair.after.clone();
    for step in &steps[at - first..at - first + steps_forward] {
        before = step.apply(&before)?;
        after = step.apply(&after)?;
    }
    Ok(ProjectionPair {
        time: trace.states[at + steps_forward].0,
        probability: pair.probability,
        before,
        after,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rep {
    Bob,
    Alice,
}

#[derive(Debug, Clone)]
pub struct TwoRepRun {
    pub problem: OracleProblem,
    pub b_c: BitString,
    pub outcome: BitString,
    /// Cells of B Bob measures at `t0` (all of them for the usual run).
    pub measured_cells: Vec<usize>,
    /// `U_B` followed by Alice's unitary part.
    pub steps: Vec<UnitaryStep>,
    pub bob: Trace,
    pub alice: Trace,
    /// Outcome of Alice's final measurement of A.
    pub final_a: BitString,
}

impl TwoRepRun {
    pub fn trace(&self, rep: Rep) -> &Trace {
        match rep {
            Rep::Bob => &self.bob,
            Rep::Alice => &self.alice,
        }
    }

    pub fn advance(&self, rep: Rep, proj: &Projection, steps_back: usize) -> Result<ProjectionPair> {
        advance_projection(self.trace(rep), &self.steps, proj, steps_back)
    }

    /// Number of steps in Alice's unitary part (everything after `U_B`).
    pub fn alice_steps(&self) -> usize {
        self.steps.len() - 1
    }

    /// Fidelity between the two representations after the final measurement.
    pub fn final_agreement(&self) -> Result<f64> {
        Ok(self
            .bob
            .at(TimeLabel::T2Plus)?
            .fidelity(self.alice.at(TimeLabel::T2Plus)?))
    }

    /// Fidelity of the two outputs once both are projected on `b_c`.
    ///
    /// For a full initial measurement this is the postponement identity:
    /// collapsing first and projecting last give the same state.
    pub fn postponement_fidelity(&self) -> Result<f64> {
        let all: Vec<usize> = (0..self.problem.cells().cell_count).collect();
        let proj = Projection::b_cells(&all, &self.b_c, self.problem.cells().cell_width, TimeLabel::T2);
        let (_, alice) = proj.apply(self.alice.at(TimeLabel::T2)?)?;
        let (_, bob) = proj.apply(self.bob.at(TimeLabel::T2)?)?;
        Ok(bob.fidelity(&alice))
    }
}

/// Both representations, with the initial measurement reading every cell of B.
pub fn build_two_reps(
    problem: &OracleProblem,
    algorithm: Algorithm,
    b_c: &BitString,
    outcome: &BitString,
) -> Result<TwoRepRun> {
    let all: Vec<usize> = (0..problem.cells().cell_count).collect();
    build_two_reps_partial(problem, algorithm, b_c, outcome, &all)
}

/// Both representations, with Bob's initial measurement reading only `cells`.
pub fn build_two_reps_partial(
    problem: &OracleProblem,
    algorithm: Algorithm,
    b_c: &BitString,
    outcome: &BitString,
    cells: &[usize],
) -> Result<TwoRepRun> {
    build_with_steps(problem, algorithm.steps(problem)?, algorithm, b_c, outcome, cells)
}

pub(crate) fn build_with_steps(
    problem: &OracleProblem,
    alice_steps: Vec<UnitaryStep>,
    algorithm: Algorithm,
    b_c: &BitString,
    outcome: &BitString,
    cells: &[usize],
) -> Result<TwoRepRun> {
    for s in [b_c, outcome] {
        if !problem.contains(s) {
            return Err(EngineError::NotInSigma(*s));
        }
    }
    let perm = permutation_sending(problem, outcome, b_c)?;
    if perm.get(outcome) != Some(b_c) {
        return Err(EngineError::PermutationMismatch {
            from: *outcome,
            to: *b_c,
        });
    }
    let mut steps = vec![u_b(problem, perm)?];
    steps.extend(alice_steps);

    let layout = Algorithm::layout(problem);
    let initial = DephasedEnsemble::uniform(layout, problem.settings(), &algorithm.initial_av(&layout))?;
    let cw = problem.cells().cell_width;
    let (_, collapsed) =
        Projection::b_cells(cells, outcome, cw, TimeLabel::T0).apply(&initial)?;

    let evolve = |start: DephasedEnsemble, t0: DephasedEnsemble| -> Result<Vec<(TimeLabel, DephasedEnsemble)>> {
        let mut states = vec![(TimeLabel::T0, t0), (TimeLabel::T0Plus, start)];
        for (k, step) in steps.iter().enumerate() {
            let next = step.apply(&states.last().expect("nonempty").1)?;
            let label = match k {
                0 => TimeLabel::T1,
                _ if k + 1 == steps.len() => TimeLabel::T2,
                _ => TimeLabel::Inner(k),
            };
            states.push((label, next));
        }
        Ok(states)
    };
    let mut bob = evolve(collapsed, initial.clone())?;
    let mut alice = evolve(initial.clone(), initial)?;

    // The final A outcome is the one Bob's branch for b_c yields most often.
    let bob_out = &bob.last().expect("nonempty").1;
    let (best, _) = bob_out
        .branch(b_c)
        .ok_or(EngineError::NotInSigma(*b_c))?
        .dominant_a(bob_out.layout());
    let final_a = BitString::new(best, problem.arg_width()).map_err(CircuitError::from)?;
    let (_, bob_final) = bob_out.project_a(&final_a)?;
    // Alice: the final measurement, then the postponed initial projection.
    let all: Vec<usize> = (0..problem.cells().cell_count).collect();
    let (_, alice_final) = alice.last().expect("nonempty").1.project_a(&final_a)?;
    let (_, alice_final) = Projection::b_cells(&all, b_c, cw, TimeLabel::T2Plus).apply(&alice_final)?;
    bob.push((TimeLabel::T2Plus, bob_final));
    alice.push((TimeLabel::T2Plus, alice_final));

    Ok(TwoRepRun {
        problem: problem.clone(),
        b_c: *b_c,
        outcome: *outcome,
        measured_cells: cells.to_vec(),
        steps,
        bob: Trace { states: bob },
        alice: Trace { states: alice },
        final_a,
    })
}

/// The states of the synthetic method for one pair of partial measurements.
#[derive(Debug, Clone)]
pub struct PartialPair {
    pub b_cells: Vec<usize>,
    pub a_bits: Vec<usize>,
    /// Bob: `t0+` after measuring only `b_cells` of the initial outcome.
    pub bob_partial_input: DephasedEnsemble,
    /// Bob: that state at `t2`.
    pub bob_partial_output: DephasedEnsemble,
    /// Bob: after the measurement of `a_bits` at `t2`.
    pub bob_final: DephasedEnsemble,
    /// Bob: the A projection moved back to `t0+`.
    pub bob_advanced: ProjectionPair,
    /// Alice: her output projected by the measurement of `a_bits`.
    pub alice_selected: DephasedEnsemble,
    /// Alice: that projection moved back to `t1`.
    pub alice_advanced: ProjectionPair,
    /// Alice: the advanced state with `b_cells` read from `b_c` at `t1`, evolved to `t2`.
    pub alice_final: DephasedEnsemble,
    /// Fidelity of `bob_final` with the unsplit run's final state.
    pub bob_fidelity: f64,
    /// Fidelity of `alice_final` with the unsplit run's final state.
    pub alice_fidelity: f64,
}

/// Runs the synthetic method: `b_cells` of B at `t0`, `a_bits` of A at `t2`.
pub fn partial_measurement_pair(
    problem: &OracleProblem,
    algorithm: Algorithm,
    b_c: &BitString,
    outcome: &BitString,
    b_cells: &[usize],
    a_bits: &[usize],
) -> Result<PartialPair> {
    let full = build_two_reps(problem, algorithm, b_c, outcome)?;
    let split = build_two_reps_partial(problem, algorithm, b_c, outcome, b_cells)?;
    pair_from_runs(&full, &split, b_cells, a_bits)
}

pub(crate) fn pair_from_runs(
    full: &TwoRepRun,
    split: &TwoRepRun,
    b_cells: &[usize],
    a_bits: &[usize],
) -> Result<PartialPair> {
    let reference = full.bob.at(TimeLabel::T2)?;
    let cw = full.problem.cells().cell_width;

    let a_proj = Projection::a_bits(a_bits, &full.final_a, TimeLabel::T2);
    let bob_partial_output = split.bob.at(TimeLabel::T2)?.clone();
    let (_, bob_final) = a_proj.apply(&bob_partial_output)?;
    let bob_advanced = split.advance(Rep::Bob, &a_proj, split.steps.len())?;

    let (_, alice_selected) = a_proj.apply(full.alice.at(TimeLabel::T2)?)?;
    let alice_advanced = full.advance(Rep::Alice, &a_proj, full.alice_steps())?;
    let b_proj = Projection::b_cells(b_cells, &full.b_c, cw, TimeLabel::T1);
    let (_, mut alice_final) = b_proj.apply(&alice_advanced.after)?;
    for step in &full.steps[1..] {
        alice_final = step.apply(&alice_final)?;
    }

    Ok(PartialPair {
        b_cells: b_cells.to_vec(),
        a_bits: a_bits.to_vec(),
        bob_partial_input: split.bob.at(TimeLabel::T0Plus)?.clone(),
        bob_fidelity: bob_final.fidelity(reference),
        alice_fidelity: alice_final.fidelity(reference),
        bob_partial_output,
        bob_final,
        bob_advanced,
        alice_selected,
        alice_advanced,
        alice_final,
    })
}

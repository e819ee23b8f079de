//! Checks the nine labelled states of the four-drawer Grover example.
//!
//! Expected states are assembled directly from σ, the solution map and the
//! `U_B` permutation, never from the circuits, so a wrong step shows up as a
//! fidelity below one on the states it touches.

use std::collections::BTreeMap;
use std::fmt;

use crate::bits::BitString;
use crate::circuits::{
    hadamard_a, inversion_about_mean, permutation_sending, u_f, Algorithm, StepAction, TimeLabel,
    UnitaryStep,
};
use crate::problem::{make_grover, OracleProblem};
use crate::state::{Branch, CMatrix, CVector, CellSelection, DephasedEnsemble, C64};

use super::{build_with_steps, pair_from_runs, Result};

/// Fidelity a state must reach to pass.
pub const FIDELITY_TOL: f64 = 1e-9;

/// A deliberately broken circuit, for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `Im_A` replaced by the identity.
    IdentityDiffusion,
    /// The Hadamard on A left out.
    MissingHadamard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Outcome of Bob's initial measurement.
    pub outcome: BitString,
    pub b_c: BitString,
    /// Cells of B measured at `t0` in the synthetic method.
    pub b_cells: Vec<usize>,
    /// Bits of A measured at `t2` in the synthetic method.
    pub a_bits: Vec<usize>,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    /// Outcome 10, setting 01, left cell of B at `t0`, right bit of A at `t2`.
    fn default() -> Self {
        Self {
            outcome: BitString::new(0b10, 2).expect("fits"),
            b_c: BitString::new(0b01, 2).expect("fits"),
            b_cells: vec![0],
            a_bits: vec![1],
            fault: None,
        }
    }
}

impl VerifyConfig {
    /// Right cell of B at `t0`, left bit of A at `t2`.
    pub fn mirrored() -> Self {
        Self {
            b_cells: vec![1],
            a_bits: vec![0],
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateCheck {
    pub name: &'static str,
    pub time: TimeLabel,
    pub fidelity: f64,
    pub expected: Vec<BitString>,
    pub found: Vec<BitString>,
}

impl StateCheck {
    pub fn passed(&self) -> bool {
        self.fidelity >= 1.0 - FIDELITY_TOL
    }
}

impl fmt::Display for StateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[BitString]| v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{:<7} {:<4} fidelity={:.12} settings={{{}}} {}",
            format!("({})", self.name),
            self.time.to_string(),
            self.fidelity,
            list(&self.found),
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        if !self.passed() {
            write!(f, " expected={{{}}}", list(&self.expected))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<StateCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(StateCheck::passed)
    }

    pub fn failures(&self) -> Vec<&StateCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&StateCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Label, time, expected (setting, A value) pairs, and the state built by the engine.
type Case = (&'static str, TimeLabel, Vec<(BitString, u64)>, DephasedEnsemble);

/// Equal-weight ensemble pairing each setting with the A value `a_of(b)` and V in `|−⟩`.
fn expected(
    problem: &OracleProblem,
    pairs: impl IntoIterator<Item = (BitString, u64)>,
) -> Result<DephasedEnsemble> {
    let layout = Algorithm::layout(problem);
    let pairs: Vec<_> = pairs.into_iter().collect();
    let w = 1.0 / pairs.len() as f64;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let branches = pairs
        .into_iter()
        .map(|(b, a)| {
            let mut av = CVector::zeros(layout.av_dim());
            av[layout.av_index(a, 0)] = C64::new(h, 0.0);
            av[layout.av_index(a, 1)] = C64::new(-h, 0.0);
            Branch::new(b, av, w)
        })
        .collect();
    Ok(DephasedEnsemble::new(layout, branches)?)
}

fn faulty_steps(problem: &OracleProblem, fault: Option<Fault>) -> Result<Vec<UnitaryStep>> {
    let (aw, vw) = (problem.arg_width(), problem.value_width());
    let identity = || {
        let d = problem.arg_count() << vw;
        StepAction::Uniform(CMatrix::identity(d, d))
    };
    let mut h = hadamard_a(aw, vw)?;
    let mut im = inversion_about_mean(aw, vw)?;
    match fault {
        Some(Fault::IdentityDiffusion) => im.action = identity(),
        Some(Fault::MissingHadamard) => h.action = identity(),
        None => {}
    }
    Ok(vec![h, u_f(problem, Algorithm::Grover { iterations: 1 }.mode())?, im])
}

/// Rebuilds (ini), (am), (se), (fi), (out), (inbs), (outb), (altro) and (adv).
pub fn verify_grover_states(config: &VerifyConfig) -> Result<VerifyReport> {
    let problem = make_grover(2).map_err(crate::circuits::CircuitError::from)?;
    let algorithm = Algorithm::Grover { iterations: 1 };
    let steps = faulty_steps(&problem, config.fault)?;
    let all: Vec<usize> = (0..problem.cells().cell_count).collect();
    let full = build_with_steps(&problem, steps.clone(), algorithm, &config.b_c, &config.outcome, &all)?;
    let split = build_with_steps(
        &problem,
        steps,
        algorithm,
        &config.b_c,
        &config.outcome,
        &config.b_cells,
    )?;
    let pair = pair_from_runs(&full, &split, &config.b_cells, &config.a_bits)?;

    let perm: BTreeMap<BitString, BitString> =
        permutation_sending(&problem, &config.outcome, &config.b_c)?;
    let sol = |b: &BitString| problem.solution_of(b).expect("setting in σ").value();
    let sigma = problem.settings().to_vec();
    let cw = problem.cells().cell_width;
    let b_sel = CellSelection::agreeing_with(&config.outcome, &config.b_cells, cw);
    let a_word = BitString::new(sol(&config.b_c), problem.arg_width())
        .map_err(crate::circuits::CircuitError::from)?;
    let a_sel = CellSelection::agreeing_with(&a_word, &config.a_bits, 1);
    let inbs: Vec<BitString> = sigma.iter().filter(|b| b_sel.matches(b, cw)).copied().collect();
    let selected: Vec<BitString> = sigma
        .iter()
        .filter(|b| {
            let s = BitString::new(sol(b), problem.arg_width()).expect("fits");
            a_sel.matches(&s, 1)
        })
        .copied()
        .collect();

    let zero = |set: &[BitString]| set.iter().map(|b| (*b, 0)).collect::<Vec<_>>();
    let solved = |set: &[BitString]| set.iter().map(|b| (*b, sol(b))).collect::<Vec<_>>();
    let outb: Vec<BitString> = inbs.iter().map(|b| perm[b]).collect();

    let cases: Vec<Case> = vec![
        ("ini", TimeLabel::T0, zero(&sigma), full.bob.at(TimeLabel::T0)?.clone()),
        ("am", TimeLabel::T0Plus, zero(&[config.outcome]), full.bob.at(TimeLabel::T0Plus)?.clone()),
        ("se", TimeLabel::T1, zero(&[config.b_c]), full.bob.at(TimeLabel::T1)?.clone()),
        ("fi", TimeLabel::T2, solved(&[config.b_c]), full.bob.at(TimeLabel::T2)?.clone()),
        ("out", TimeLabel::T2, solved(&sigma), full.alice.at(TimeLabel::T2)?.clone()),
        ("inbs", TimeLabel::T0Plus, zero(&inbs), pair.bob_partial_input.clone()),
        ("outb", TimeLabel::T2, solved(&outb), pair.bob_partial_output.clone()),
        ("altro", TimeLabel::T2, solved(&selected), pair.alice_selected.clone()),
        ("adv", TimeLabel::T1, zero(&selected), pair.alice_advanced.after.clone()),
    ];

    let mut checks = Vec::with_capacity(cases.len());
    for (name, time, want, got) in cases {
        let mut expected_settings: Vec<BitString> = want.iter().map(|p| p.0).collect();
        expected_settings.sort();
        let want = expected(&problem, want)?;
        checks.push(StateCheck {
            name,
            time,
            fidelity: want.fidelity(&got),
            expected: expected_settings,
            found: got.settings(),
        });
    }
    // The synthetic method must land on the unsplit final state in both
    // pictures, and the A projection moved back to t0+ must give (am) to Bob.
    let am_back = expected(&problem, zero(&[config.outcome]))?.fidelity(&pair.bob_advanced.after);
    for (name, extra) in [
        ("am", am_back),
        ("fi", pair.bob_fidelity.min(pair.alice_fidelity)),
    ] {
        if let Some(c) = checks.iter_mut().find(|c| c.name == name) {
            c.fidelity = c.fidelity.min(extra);
        }
    }
    Ok(VerifyReport {
        config: config.clone(),
        checks,
    })
}

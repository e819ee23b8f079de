//! Unitary parts of Grover, Deutsch&Jozsa and Simon as branch-wise steps.
//!
//! Every step either acts on A⊗V under the control of B or permutes the
//! settings of B (Bob's `U_B`). Runs are recorded as a trace of ensembles so
//! the time-symmetric engine and the path-sum module can revisit them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::{BitError, BitString};
use crate::complexity::grover_k;
use crate::problem::{make_deutsch_jozsa, make_grover, make_simon, OracleProblem, ProblemError};
use crate::state::{
    unitarity_deviation, BranchOperator, CMatrix, CVector, DephasedEnsemble, Layout, StateError,
    C64,
};

/// Largest A⊗V dimension simulated with dense matrices.
pub const MAX_AV_DIM: usize = 256;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error("setting {0} is not in the problem's setting set")]
    NotInSigma(BitString),
    #[error("not a permutation of the setting set: {0}")]
    BadPermutation(String),
    #[error("phase kickback needs one-bit function values, problem has {0}")]
    PhaseKickbackWidth(usize),
    #[error("A⊗V dimension {dim} exceeds the dense limit {MAX_AV_DIM}")]
    TooLarge { dim: usize },
}

pub type Result<T> = std::result::Result<T, CircuitError>;

#[derive(Debug, Clone, PartialEq)]
pub enum StepAction {
    /// Same unitary on A⊗V for every setting.
    Uniform(CMatrix),
    /// Unitary on A⊗V chosen by the content of B.
    PerSetting(BTreeMap<BitString, CMatrix>),
    /// Permutation of the settings of B.
    Relabel(BTreeMap<BitString, BitString>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryStep {
    pub label: String,
    pub action: StepAction,
}

impl BranchOperator for UnitaryStep {
    fn matrix_for(&self, setting: &BitString) -> Option<&CMatrix> {
        match &self.action {
            StepAction::Uniform(m) => Some(m),
            StepAction::PerSetting(map) => map.get(setting),
            StepAction::Relabel(_) => None,
        }
    }
}

impl UnitaryStep {
    pub fn new(label: impl Into<String>, action: StepAction) -> Self {
        Self {
            label: label.into(),
            action,
        }
    }

    pub fn apply(&self, state: &DephasedEnsemble) -> Result<DephasedEnsemble> {
        Ok(match &self.action {
            StepAction::Relabel(perm) => state.relabel(perm)?,
            _ => state.apply_branch_unitary(self)?,
        })
    }

    pub fn inverse(&self) -> Self {
        let action = match &self.action {
            StepAction::Uniform(m) => StepAction::Uniform(m.adjoint()),
            StepAction::PerSetting(map) => {
                StepAction::PerSetting(map.iter().map(|(k, m)| (*k, m.adjoint())).collect())
            }
            StepAction::Relabel(perm) => {
                StepAction::Relabel(perm.iter().map(|(a, b)| (*b, *a)).collect())
            }
        };
        Self::new(format!("{}†", self.label), action)
    }

    /// Largest `|U†U − I|` entry over all matrices held by the step.
    pub fn unitarity_deviation(&self) -> f64 {
        match &self.action {
            StepAction::Uniform(m) => unitarity_deviation(m),
            StepAction::PerSetting(map) => map
                .values()
                .map(unitarity_deviation)
                .fold(0.0, f64::max),
            StepAction::Relabel(_) => 0.0,
        }
    }

    /// The permutation on B, if this is a relabelling step.
    pub fn relabelling(&self) -> Option<&BTreeMap<BitString, BitString>> {
        match &self.action {
            StepAction::Relabel(p) => Some(p),
            _ => None,
        }
    }
}

/// How `U_f` writes the function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// `|a⟩ ↦ (−1)^{f(a)}|a⟩` with V held in `(|0⟩−|1⟩)/√2`.
    PhaseKickback,
    /// `|a⟩|v⟩ ↦ |a⟩|v ⊕ f(a)⟩`.
    XorAccumulate,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_AV_DIM {
        Err(CircuitError::TooLarge { dim })
    } else {
        Ok(())
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Kronecker product with the identity on V.
fn with_identity_v(a_op: &CMatrix, v_width: usize) -> CMatrix {
    a_op.kronecker(&CMatrix::identity(1 << v_width, 1 << v_width))
}

/// n-bit Hadamard transform on A, identity on V.
pub fn hadamard_a(a_width: usize, v_width: usize) -> Result<UnitaryStep> {
    let ad = 1usize << a_width;
    check_dim(ad << v_width)?;
    let scale = (ad as f64).sqrt().recip();
    let h = DMatrix::from_fn(ad, ad, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        real(sign * scale)
    });
    Ok(UnitaryStep::new(
        "H_A",
        StepAction::Uniform(with_identity_v(&h, v_width)),
    ))
}

/// Grover diffusion `2|u⟩⟨u| − I` on A, identity on V.
pub fn inversion_about_mean(a_width: usize, v_width: usize) -> Result<UnitaryStep> {
    let ad = 1usize << a_width;
    check_dim(ad << v_width)?;
    let off = 2.0 / ad as f64;
    let m = DMatrix::from_fn(ad, ad, |i, j| real(if i == j { off - 1.0 } else { off }));
    Ok(UnitaryStep::new(
        "Im_A",
        StepAction::Uniform(with_identity_v(&m, v_width)),
    ))
}

fn oracle_matrix(problem: &OracleProblem, index: usize, mode: OracleMode) -> CMatrix {
    let ad = problem.arg_count();
    let vw = problem.value_width();
    let vd = 1usize << vw;
    let dim = ad * vd;
    let mut m = CMatrix::zeros(dim, dim);
    for a in 0..ad {
        let f = problem.value(index, a as u64);
        match mode {
            OracleMode::PhaseKickback => {
                let sign = if f == 1 { -1.0 } else { 1.0 };
                for v in 0..vd {
                    m[(a * vd + v, a * vd + v)] = real(sign);
                }
            }
            OracleMode::XorAccumulate => {
                for v in 0..vd {
                    let out = v ^ f as usize;
                    m[(a * vd + out, a * vd + v)] = real(1.0);
                }
            }
        }
    }
    m
}

/// Function evaluation for every setting of `problem`.
pub fn u_f(problem: &OracleProblem, mode: OracleMode) -> Result<UnitaryStep> {
    u_f_for(problem, mode, problem.settings())
}

/// Function evaluation restricted to `settings` (all must be in σ).
pub fn u_f_for(
    problem: &OracleProblem,
    mode: OracleMode,
    settings: &[BitString],
) -> Result<UnitaryStep> {
    if mode == OracleMode::PhaseKickback && problem.value_width() != 1 {
        return Err(CircuitError::PhaseKickbackWidth(problem.value_width()));
    }
    check_dim(problem.arg_count() << problem.value_width())?;
    let mut map = BTreeMap::new();
    for s in settings {
        let i = problem.index_of(s).ok_or(CircuitError::NotInSigma(*s))?;
        map.insert(*s, oracle_matrix(problem, i, mode));
    }
    Ok(UnitaryStep::new("U_f", StepAction::PerSetting(map)))
}

/// Bob's relabelling of B; must be a permutation of σ.
pub fn u_b(problem: &OracleProblem, perm: BTreeMap<BitString, BitString>) -> Result<UnitaryStep> {
    if perm.len() != problem.len() {
        return Err(CircuitError::BadPermutation(format!(
            "{} entries for {} settings",
            perm.len(),
            problem.len()
        )));
    }
    let mut image = HashSet::new();
    for (from, to) in &perm {
        for s in [from, to] {
            if !problem.contains(s) {
                return Err(CircuitError::NotInSigma(*s));
            }
        }
        if !image.insert(*to) {
            return Err(CircuitError::BadPermutation(format!("{to} hit twice")));
        }
    }
    Ok(UnitaryStep::new("U_B", StepAction::Relabel(perm)))
}

/// A permutation of σ sending `from` to `to`.
///
/// Uses the translation `b ↦ b ⊕ from ⊕ to` when σ is closed under it (for
/// Grover this is the bit flip of the worked example), else the
/// transposition of the two settings.
pub fn permutation_sending(
    problem: &OracleProblem,
    from: &BitString,
    to: &BitString,
) -> Result<BTreeMap<BitString, BitString>> {
    for s in [from, to] {
        if !problem.contains(s) {
            return Err(CircuitError::NotInSigma(*s));
        }
    }
    let shift = from.xor(to);
    if problem.settings().iter().all(|b| problem.contains(&b.xor(&shift))) {
        return Ok(problem.settings().iter().map(|b| (*b, b.xor(&shift))).collect());
    }
    Ok(problem
        .settings()
        .iter()
        .map(|b| {
            let image = if b == from {
                *to
            } else if b == to {
                *from
            } else {
                *b
            };
            (*b, image)
        })
        .collect())
}

/// Built-in algorithm shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// `H_A` followed by `iterations` rounds of `(U_f, Im_A)`.
    Grover { iterations: usize },
    /// `H_A, U_f, H_A` with phase kickback.
    DeutschJozsa,
    /// `H_A, U_f, H_A` with the value accumulated in V.
    SimonQuantum,
}

impl Algorithm {
    /// Grover with `round(k(n))` iterations.
    pub fn grover_default(n: usize) -> Self {
        Algorithm::Grover {
            iterations: grover_k(n).round().max(0.0) as usize,
        }
    }

    /// The algorithm that matches a problem family, if any.
    pub fn for_problem(problem: &OracleProblem) -> Option<Self> {
        use crate::problem::Family;
        match problem.family() {
            Family::Grover => Some(Self::grover_default(problem.arg_width())),
            Family::DeutschJozsa => Some(Algorithm::DeutschJozsa),
            Family::Simon => Some(Algorithm::SimonQuantum),
            Family::Custom => None,
        }
    }

    pub fn mode(&self) -> OracleMode {
        match self {
            Algorithm::SimonQuantum => OracleMode::XorAccumulate,
            _ => OracleMode::PhaseKickback,
        }
    }

    pub fn layout(problem: &OracleProblem) -> Layout {
        Layout::new(problem.cells(), problem.arg_width(), problem.value_width())
    }

    /// `|0…0⟩_A` with V in `(|0⟩−|1⟩)/√2` for phase kickback, `|0…0⟩_V` otherwise.
    pub fn initial_av(&self, layout: &Layout) -> CVector {
        let mut av = CVector::zeros(layout.av_dim());
        match self.mode() {
            OracleMode::PhaseKickback => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                av[layout.av_index(0, 0)] = real(h);
                av[layout.av_index(0, 1)] = real(-h);
            }
            OracleMode::XorAccumulate => av[0] = real(1.0),
        }
        av
    }

    /// The unitary part of Alice's action, with `U_f` built for `settings`.
    pub fn steps_for(
        &self,
        problem: &OracleProblem,
        settings: &[BitString],
    ) -> Result<Vec<UnitaryStep>> {
        let (aw, vw) = (problem.arg_width(), problem.value_width());
        let h = hadamard_a(aw, vw)?;
        let uf = u_f_for(problem, self.mode(), settings)?;
        Ok(match self {
            Algorithm::Grover { iterations } => {
                let im = inversion_about_mean(aw, vw)?;
                let mut steps = vec![h];
                for _ in 0..*iterations {
                    steps.push(uf.clone());
                    steps.push(im.clone());
                }
                steps
            }
            Algorithm::DeutschJozsa | Algorithm::SimonQuantum => vec![h.clone(), uf, h],
        })
    }

    pub fn steps(&self, problem: &OracleProblem) -> Result<Vec<UnitaryStep>> {
        self.steps_for(problem, problem.settings())
    }
}

/// Discrete time points of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeLabel {
    T0,
    T0Plus,
    T1,
    T1Plus,
    /// After the k-th step (1-based) of Alice's unitary part, before it ends.
    Inner(usize),
    T2,
    T2Plus,
}

impl fmt::Display for TimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeLabel::T0 => f.write_str("t0"),
            TimeLabel::T0Plus => f.write_str("t0+"),
            TimeLabel::T1 => f.write_str("t1"),
            TimeLabel::T1Plus => f.write_str("t1+"),
            TimeLabel::Inner(k) => write!(f, "t1.{k}"),
            TimeLabel::T2 => f.write_str("t2"),
            TimeLabel::T2Plus => f.write_str("t2+"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgorithmRun {
    pub problem: OracleProblem,
    pub steps: Vec<UnitaryStep>,
    /// Input at `t1`, one entry after each step, the last one labelled `t2`.
    pub trace: Vec<(TimeLabel, DephasedEnsemble)>,
}

impl AlgorithmRun {
    /// Evolves `input` through `steps`, recording every intermediate state.
    pub fn evolve(
        problem: OracleProblem,
        steps: Vec<UnitaryStep>,
        input: DephasedEnsemble,
    ) -> Result<Self> {
        let mut trace = vec![(TimeLabel::T1, input)];
        for (k, step) in steps.iter().enumerate() {
            let next = step.apply(&trace.last().expect("trace is never empty").1)?;
            let label = if k + 1 == steps.len() {
                TimeLabel::T2
            } else {
                TimeLabel::Inner(k + 1)
            };
            trace.push((label, next));
        }
        if steps.is_empty() {
            trace[0].0 = TimeLabel::T2;
        }
        Ok(Self {
            problem,
            steps,
            trace,
        })
    }

    pub fn input(&self) -> &DephasedEnsemble {
        &self.trace[0].1
    }

    pub fn output(&self) -> &DephasedEnsemble {
        &self.trace.last().expect("trace is never empty").1
    }
}

/// Alice's representation: the unitary part applied to the full dephased ensemble.
pub fn run_alice(problem: &OracleProblem, algorithm: Algorithm) -> Result<AlgorithmRun> {
    let layout = Algorithm::layout(problem);
    let input = DephasedEnsemble::uniform(layout, problem.settings(), &algorithm.initial_av(&layout))?;
    let steps = algorithm.steps(problem)?;
    AlgorithmRun::evolve(problem.clone(), steps, input)
}

/// Bob's representation: the unitary part applied to the collapsed setting `b_c`.
pub fn run_bob(problem: &OracleProblem, algorithm: Algorithm, b_c: &BitString) -> Result<AlgorithmRun> {
    if !problem.contains(b_c) {
        return Err(CircuitError::NotInSigma(*b_c));
    }
    let layout = Algorithm::layout(problem);
    let input = DephasedEnsemble::uniform(layout, &[*b_c], &algorithm.initial_av(&layout))?;
    let steps = algorithm.steps_for(problem, &[*b_c])?;
    AlgorithmRun::evolve(problem.clone(), steps, input)
}

#[derive(Debug, Clone)]
pub struct GroverRun {
    pub run: AlgorithmRun,
    pub iterations: usize,
    pub success_probability: f64,
}

/// Grover search for the ball in drawer `b_c` with `iterations` rounds
/// (`round(k(n))` when `None`).
pub fn run_grover(n: usize, iterations: Option<usize>, b_c: &BitString) -> Result<GroverRun> {
    let problem = make_grover(n)?;
    let algorithm = match iterations {
        Some(k) => Algorithm::Grover { iterations: k },
        None => Algorithm::grover_default(n),
    };
    let Algorithm::Grover { iterations } = algorithm else {
        unreachable!()
    };
    let run = run_bob(&problem, algorithm, b_c)?;
    let success_probability = run.output().a_distribution()[b_c.value() as usize];
    Ok(GroverRun {
        run,
        iterations,
        success_probability,
    })
}

#[derive(Debug, Clone)]
pub struct DeutschJozsaRun {
    pub run: AlgorithmRun,
    /// Born distribution of A, indexed by A value.
    pub distribution: Vec<f64>,
    /// Verdict read from A: `false` when A is all zeros with certainty.
    pub balanced: bool,
    /// The A string when it is read with certainty.
    pub pre_solution: Option<BitString>,
}

pub fn run_deutsch_jozsa(n: usize, b_c: &BitString) -> Result<DeutschJozsaRun> {
    let problem = make_deutsch_jozsa(n)?;
    let run = run_bob(&problem, Algorithm::DeutschJozsa, b_c)?;
    let distribution = run.output().a_distribution();
    let balanced = distribution[0] < 0.5;
    let pre_solution = distribution
        .iter()
        .position(|&p| p > 1.0 - 1e-9)
        .map(|a| BitString::new(a as u64, n))
        .transpose()?;
    Ok(DeutschJozsaRun {
        run,
        distribution,
        balanced,
        pre_solution,
    })
}

/// The quantum part of Simon's algorithm, measured `shots` times.
pub fn run_simon_quantum_part(
    n: usize,
    b_c: &BitString,
    shots: usize,
    seed: u64,
) -> Result<Vec<BitString>> {
    let problem = make_simon(n)?;
    let run = run_bob(&problem, Algorithm::SimonQuantum, b_c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| Ok(run.output().measure_a_with(&mut rng)?.0))
        .collect()
}

//! State algebra for the three-register system B⊗A⊗V.
//!
//! Register B (the problem setting) is never put in coherent superposition by
//! any step: every operation either acts on A⊗V controlled by the content of
//! B, or relabels B. A state with independent random phases on each setting
//! is therefore the B-diagonal mixture held by [`DephasedEnsemble`]. A single
//! draw of those phases is a [`PureState`]; averaging draws recovers the
//! mixture, which [`DephasedEnsemble::monte_carlo_density`] checks.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::{BitError, BitString};
use crate::problem::CellSpec;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance on weight sums and vector norms.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on amplitude equality.
pub const AMPLITUDE_TOL: f64 = 1e-10;
/// Largest deviation of `U†U` from the identity accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-9;
/// Largest joint dimension for which full density operators are built.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("operator for setting {setting} is not unitary (deviation {deviation:.3e})")]
    NonUnitary { setting: BitString, deviation: f64 },
    #[error("no operator supplied for setting {0}")]
    MissingOperator(BitString),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("projection has zero probability")]
    ZeroProbability,
    #[error("duplicate setting {0} in ensemble")]
    DuplicateSetting(BitString),
    #[error("setting {0} has the wrong width for this layout")]
    SettingWidth(BitString),
    #[error("branch weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("negative weight {weight} on setting {setting}")]
    NegativeWeight { setting: BitString, weight: f64 },
    #[error("branch {setting} has norm {norm}, expected 1")]
    NotNormalized { setting: BitString, norm: f64 },
    #[error("invalid cell selection: {0}")]
    BadSelection(String),
    #[error("setting {0} is not in the basis")]
    UnknownSetting(BitString),
    #[error("joint dimension {dim} exceeds the dense limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("not a density operator: {0}")]
    InvalidDensity(String),
    #[error("relabelling is not a bijection on the ensemble settings")]
    BadPermutation,
    #[error(transparent)]
    Bits(#[from] BitError),
}

pub type Result<T> = std::result::Result<T, StateError>;

/// Register sizes of B⊗A⊗V. `v_width` may be zero (no value register).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Layout {
    pub cells: CellSpec,
    pub a_width: usize,
    pub v_width: usize,
}

impl Layout {
    pub fn new(cells: CellSpec, a_width: usize, v_width: usize) -> Self {
        Self {
            cells,
            a_width,
            v_width,
        }
    }

    pub fn a_dim(&self) -> usize {
        1 << self.a_width
    }

    pub fn v_dim(&self) -> usize {
        1 << self.v_width
    }

    pub fn av_dim(&self) -> usize {
        self.a_dim() * self.v_dim()
    }

    /// Index of `|a⟩_A|v⟩_V` in the A⊗V basis.
    pub fn av_index(&self, a: u64, v: u64) -> usize {
        a as usize * self.v_dim() + v as usize
    }
}

/// Selects cells of a word and the values they must hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSelection {
    pub cells: Vec<usize>,
    pub values: Vec<u64>,
}

impl CellSelection {
    pub fn new(cells: Vec<usize>, values: Vec<u64>) -> Self {
        Self { cells, values }
    }

    /// The selection that reads `cells` of `word` and keeps whatever it finds.
    pub fn agreeing_with(word: &BitString, cells: &[usize], cell_width: usize) -> Self {
        Self {
            cells: cells.to_vec(),
            values: cells.iter().map(|&c| word.cell(c, cell_width)).collect(),
        }
    }

    pub fn matches(&self, word: &BitString, cell_width: usize) -> bool {
        self.cells
            .iter()
            .zip(&self.values)
            .all(|(&c, &v)| word.cell(c, cell_width) == v)
    }

    fn check(&self, cell_count: usize, cell_width: usize) -> Result<()> {
        if self.cells.is_empty() {
            return Err(StateError::BadSelection("no cells selected".into()));
        }
        if self.cells.len() != self.values.len() {
            return Err(StateError::BadSelection(format!(
                "{} cells but {} values",
                self.cells.len(),
                self.values.len()
            )));
        }
        let mut seen = HashSet::new();
        for (&c, &v) in self.cells.iter().zip(&self.values) {
            if c >= cell_count {
                return Err(StateError::BadSelection(format!("cell {c} out of range")));
            }
            if !seen.insert(c) {
                return Err(StateError::BadSelection(format!("cell {c} selected twice")));
            }
            if cell_width < 64 && v >> cell_width != 0 {
                return Err(StateError::BadSelection(format!(
                    "value {v} does not fit a {cell_width}-bit cell"
                )));
            }
        }
        Ok(())
    }
}

/// Something that supplies a unitary on A⊗V for each setting of B.
pub trait BranchOperator {
    fn matrix_for(&self, setting: &BitString) -> Option<&CMatrix>;
}

impl BranchOperator for CMatrix {
    fn matrix_for(&self, _setting: &BitString) -> Option<&CMatrix> {
        Some(self)
    }
}

impl BranchOperator for BTreeMap<BitString, CMatrix> {
    fn matrix_for(&self, setting: &BitString) -> Option<&CMatrix> {
        self.get(setting)
    }
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// One term `e^{iφ_b}|b⟩_B⊗|ψ_b⟩_{AV}` of the dephased superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub setting: BitString,
    pub av: CVector,
    pub weight: f64,
}

impl Branch {
    pub fn new(setting: BitString, av: CVector, weight: f64) -> Self {
        Self { setting, av, weight }
    }

    /// Probability of each A value in this branch, V traced out.
    pub fn a_probabilities(&self, layout: &Layout) -> Vec<f64> {
        let vd = layout.v_dim();
        (0..layout.a_dim())
            .map(|a| (0..vd).map(|v| self.av[a * vd + v].norm_sqr()).sum())
            .collect()
    }

    /// The A value carrying the largest probability, with that probability.
    pub fn dominant_a(&self, layout: &Layout) -> (u64, f64) {
        self.a_probabilities(layout)
            .into_iter()
            .enumerate()
            .fold((0, -1.0), |best, (a, p)| {
                if p > best.1 + AMPLITUDE_TOL {
                    (a as u64, p)
                } else {
                    best
                }
            })
    }
}

/// B-diagonal mixture of branches with pairwise-distinct settings.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasedEnsemble {
    layout: Layout,
    branches: Vec<Branch>,
}

impl DephasedEnsemble {
    pub fn new(layout: Layout, branches: Vec<Branch>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut total = 0.0;
        for b in &branches {
            if b.setting.width() != layout.cells.setting_width() {
                return Err(StateError::SettingWidth(b.setting));
            }
            if !seen.insert(b.setting) {
                return Err(StateError::DuplicateSetting(b.setting));
            }
            if b.av.len() != layout.av_dim() {
                return Err(StateError::DimensionMismatch {
                    expected: layout.av_dim(),
                    got: b.av.len(),
                });
            }
            if b.weight < 0.0 {
                return Err(StateError::NegativeWeight {
                    setting: b.setting,
                    weight: b.weight,
                });
            }
            if b.weight > 0.0 {
                let norm = b.av.norm();
                if (norm - 1.0).abs() > AMPLITUDE_TOL {
                    return Err(StateError::NotNormalized {
                        setting: b.setting,
                        norm,
                    });
                }
            }
            total += b.weight;
        }
        if (total - 1.0).abs() > NORM_TOL * (branches.len().max(1) as f64) {
            return Err(StateError::WeightSum(total));
        }
        Ok(Self { layout, branches })
    }

    /// Equal-weight mixture of `settings`, each paired with the same A⊗V state.
    pub fn uniform(layout: Layout, settings: &[BitString], av: &CVector) -> Result<Self> {
        let w = 1.0 / settings.len() as f64;
        let branches = settings
            .iter()
            .map(|s| Branch::new(*s, av.clone(), w))
            .collect();
        Self::new(layout, branches)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Settings of the branches, in ascending order.
    pub fn settings(&self) -> Vec<BitString> {
        let mut out: Vec<_> = self.branches.iter().map(|b| b.setting).collect();
        out.sort();
        out
    }

    pub fn branch(&self, setting: &BitString) -> Option<&Branch> {
        self.branches.iter().find(|b| b.setting == *setting)
    }

    /// Applies `u(b)` to the A⊗V part of every branch; B is the control.
    pub fn apply_branch_unitary(&self, u: &dyn BranchOperator) -> Result<Self> {
        let dim = self.layout.av_dim();
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let m = u
                    .matrix_for(&b.setting)
                    .ok_or(StateError::MissingOperator(b.setting))?;
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(StateError::DimensionMismatch {
                        expected: dim,
                        got: m.nrows(),
                    });
                }
                let deviation = unitarity_deviation(m);
                if deviation > UNITARY_TOL {
                    return Err(StateError::NonUnitary {
                        setting: b.setting,
                        deviation,
                    });
                }
                Ok(Branch::new(b.setting, m * &b.av, b.weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layout: self.layout,
            branches,
        })
    }

    /// Relabels settings through a bijection; A⊗V parts travel with their setting.
    pub fn relabel(&self, perm: &BTreeMap<BitString, BitString>) -> Result<Self> {
        let mut branches = Vec::with_capacity(self.len());
        let mut seen = HashSet::new();
        for b in &self.branches {
            let to = *perm.get(&b.setting).ok_or(StateError::BadPermutation)?;
            if !seen.insert(to) {
                return Err(StateError::BadPermutation);
            }
            branches.push(Branch::new(to, b.av.clone(), b.weight));
        }
        Self::new(self.layout, branches)
    }

    fn renormalized(&self, branches: Vec<Branch>) -> Result<(f64, Self)> {
        let total: f64 = branches.iter().map(|b| b.weight).sum();
        if total <= NORM_TOL {
            return Err(StateError::ZeroProbability);
        }
        let branches = branches
            .into_iter()
            .map(|mut b| {
                b.weight /= total;
                b
            })
            .collect();
        Ok((total, Self::new(self.layout, branches)?))
    }

    /// Projects on the B cells in `sel` holding their selected values.
    ///
    /// Returns the Born probability and the renormalized sub-ensemble.
    pub fn measure_b_cells(&self, sel: &CellSelection) -> Result<(f64, Self)> {
        let spec = self.layout.cells;
        sel.check(spec.cell_count, spec.cell_width)?;
        let kept = self
            .branches
            .iter()
            .filter(|b| sel.matches(&b.setting, spec.cell_width))
            .cloned()
            .collect();
        self.renormalized(kept)
    }

    /// Projects on the listed bits of A (counted from the left) holding `values`.
    pub fn measure_a_bits(&self, sel: &CellSelection) -> Result<(f64, Self)> {
        let aw = self.layout.a_width;
        sel.check(aw, 1)?;
        let vd = self.layout.v_dim();
        let mut kept = Vec::new();
        for b in &self.branches {
            let mut av = b.av.clone();
            for a in 0..self.layout.a_dim() {
                let word = BitString::new(a as u64, aw)?;
                if !sel.matches(&word, 1) {
                    for v in 0..vd {
                        av[a * vd + v] = C64::new(0.0, 0.0);
                    }
                }
            }
            let p = av.norm_squared();
            if p > NORM_TOL {
                let scale = 1.0 / p.sqrt();
                kept.push(Branch::new(b.setting, av * C64::new(scale, 0.0), b.weight * p));
            }
        }
        self.renormalized(kept)
    }

    /// Projects on A holding exactly `outcome`.
    pub fn project_a(&self, outcome: &BitString) -> Result<(f64, Self)> {
        let aw = self.layout.a_width;
        if outcome.width() != aw {
            return Err(StateError::DimensionMismatch {
                expected: aw,
                got: outcome.width(),
            });
        }
        let sel = CellSelection::agreeing_with(outcome, &(0..aw).collect::<Vec<_>>(), 1);
        self.measure_a_bits(&sel)
    }

    /// Born distribution of A over the mixture, indexed by A value.
    pub fn a_distribution(&self) -> Vec<f64> {
        let mut dist = vec![0.0; self.layout.a_dim()];
        for b in &self.branches {
            for (a, p) in b.a_probabilities(&self.layout).into_iter().enumerate() {
                dist[a] += b.weight * p;
            }
        }
        dist
    }

    /// Samples an A outcome by the Born rule and collapses on it.
    pub fn measure_a(&self, seed: u64) -> Result<(BitString, Self)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.measure_a_with(&mut rng)
    }

    pub fn measure_a_with<R: Rng>(&self, rng: &mut R) -> Result<(BitString, Self)> {
        let dist = self.a_distribution();
        let index = WeightedIndex::new(&dist).map_err(|_| StateError::ZeroProbability)?;
        let a = BitString::new(index.sample(rng) as u64, self.layout.a_width)?;
        let (_, post) = self.project_a(&a)?;
        Ok((a, post))
    }

    /// Trace over B and V of the ensemble's density operator.
    pub fn reduced_density_a(&self) -> DensityOperator {
        let ad = self.layout.a_dim();
        let vd = self.layout.v_dim();
        let mut rho = CMatrix::zeros(ad, ad);
        for b in &self.branches {
            for i in 0..ad {
                for j in 0..ad {
                    let mut acc = C64::new(0.0, 0.0);
                    for v in 0..vd {
                        acc += b.av[i * vd + v] * b.av[j * vd + v].conj();
                    }
                    rho[(i, j)] += acc * b.weight;
                }
            }
        }
        DensityOperator::from_matrix_unchecked(rho)
    }

    /// Reduced density operator of B written in the setting basis `basis`.
    pub fn reduced_density_b(&self, basis: &[BitString]) -> Result<DensityOperator> {
        let mut rho = CMatrix::zeros(basis.len(), basis.len());
        for b in &self.branches {
            let i = basis
                .iter()
                .position(|s| *s == b.setting)
                .ok_or(StateError::UnknownSetting(b.setting))?;
            rho[(i, i)] += C64::new(b.weight, 0.0);
        }
        Ok(DensityOperator::from_matrix_unchecked(rho))
    }

    /// Full density operator over (settings of this ensemble, in order) ⊗ A ⊗ V.
    pub fn density(&self) -> Result<DensityOperator> {
        let avd = self.layout.av_dim();
        let dim = self.len() * avd;
        if dim > MAX_DENSE_DIM {
            return Err(StateError::TooLarge {
                dim,
                limit: MAX_DENSE_DIM,
            });
        }
        let mut rho = CMatrix::zeros(dim, dim);
        for (k, b) in self.branches.iter().enumerate() {
            let block = &b.av * b.av.adjoint() * C64::new(b.weight, 0.0);
            rho.view_mut((k * avd, k * avd), (avd, avd)).copy_from(&block);
        }
        Ok(DensityOperator::from_matrix_unchecked(rho))
    }

    /// Shannon entropy of the branch weights, in bits.
    pub fn entropy(&self) -> f64 {
        shannon_bits(self.branches.iter().map(|b| b.weight))
    }

    /// Draws one independent uniform phase per setting.
    pub fn sample_pure(&self, seed: u64) -> PureState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_pure_with(&mut rng)
    }

    pub fn sample_pure_with<R: Rng>(&self, rng: &mut R) -> PureState {
        let avd = self.layout.av_dim();
        let mut amplitudes = CVector::zeros(self.len() * avd);
        let mut phases = Vec::with_capacity(self.len());
        for (k, b) in self.branches.iter().enumerate() {
            let phi = rng.gen::<f64>() * TAU;
            let factor = C64::from_polar(b.weight.sqrt(), phi);
            for i in 0..avd {
                amplitudes[k * avd + i] = b.av[i] * factor;
            }
            phases.push((b.setting, phi));
        }
        PureState {
            basis: self.settings(),
            av_dim: avd,
            amplitudes,
            phases,
        }
    }

    /// Mean of `|ψ⟩⟨ψ|` over `samples` phase draws.
    pub fn monte_carlo_density(&self, samples: usize, seed: u64) -> Result<DensityOperator> {
        let dim = self.len() * self.layout.av_dim();
        if dim > MAX_DENSE_DIM {
            return Err(StateError::TooLarge {
                dim,
                limit: MAX_DENSE_DIM,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = CMatrix::zeros(dim, dim);
        for _ in 0..samples {
            let psi = self.sample_pure_with(&mut rng);
            acc += &psi.amplitudes * psi.amplitudes.adjoint();
        }
        Ok(DensityOperator::from_matrix_unchecked(
            acc / C64::new(samples.max(1) as f64, 0.0),
        ))
    }

    /// Mean of the B marginal `Tr_{AV}|ψ⟩⟨ψ|` over `samples` phase draws.
    pub fn monte_carlo_reduced_b(&self, samples: usize, seed: u64) -> DensityOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let mut acc = CMatrix::zeros(n, n);
        for _ in 0..samples {
            acc += self.sample_pure_with(&mut rng).reduced_b().matrix;
        }
        DensityOperator::from_matrix_unchecked(acc / C64::new(samples.max(1) as f64, 0.0))
    }

    /// Uhlmann fidelity between two B-diagonal mixtures of pure branches.
    ///
    /// Blocks for distinct settings are orthogonal, so the fidelity reduces to
    /// `(Σ_b √(p_b q_b)·|⟨ψ_b|φ_b⟩|)²`. Per-branch global phases drop out.
    pub fn fidelity(&self, other: &Self) -> f64 {
        if self.layout.av_dim() != other.layout.av_dim() {
            return 0.0;
        }
        let mut root = 0.0;
        for b in &self.branches {
            if let Some(o) = other.branch(&b.setting) {
                root += (b.weight * o.weight).sqrt() * b.av.dotc(&o.av).norm();
            }
        }
        root * root
    }
}

/// Shannon entropy in bits of a (normalized) weight sequence.
pub fn shannon_bits(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.log2())
        .sum::<f64>()
        // Turns the -0.0 of a certain outcome into 0.0.
        + 0.0
}

/// One phase sample of a dephased ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    /// Settings indexing the B factor, in ensemble order.
    pub basis: Vec<BitString>,
    pub av_dim: usize,
    pub amplitudes: CVector,
    /// Phase drawn for each setting, in `[0, 2π)`.
    pub phases: Vec<(BitString, f64)>,
}

impl PureState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_matrix_unchecked(&self.amplitudes * self.amplitudes.adjoint())
    }

    /// `Tr_{AV}|ψ⟩⟨ψ|` in the setting basis.
    pub fn reduced_b(&self) -> DensityOperator {
        let n = self.basis.len();
        let d = self.av_dim;
        let mut rho = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.amplitudes[i * d + k] * self.amplitudes[j * d + k].conj();
                }
                rho[(i, j)] = acc;
            }
        }
        DensityOperator::from_matrix_unchecked(rho)
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const PSD_TOL: f64 = 1e-9;

    /// Validates and wraps `matrix`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(matrix);
        rho.check()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn check(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() {
            return Err(StateError::InvalidDensity("not square".into()));
        }
        let herm = (m - m.adjoint()).iter().fold(0.0f64, |w, z| w.max(z.norm()));
        if herm > Self::HERMITIAN_TOL {
            return Err(StateError::InvalidDensity(format!(
                "Hermiticity violated by {herm:.3e}"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > Self::TRACE_TOL || tr.im.abs() > Self::TRACE_TOL {
            return Err(StateError::InvalidDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -Self::PSD_TOL {
            return Err(StateError::InvalidDensity(format!(
                "minimum eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in ascending order (the matrix is treated as Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        shannon_bits(self.eigenvalues().into_iter().filter(|&l| l > 1e-14))
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let diff = &self.matrix - &other.matrix;
        let ev = diff.symmetric_eigen().eigenvalues;
        0.5 * ev.iter().map(|l| l.abs()).sum::<f64>()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.matrix.shape() != other.matrix.shape() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix)
            .iter()
            .fold(0.0f64, |w, z| w.max(z.norm()))
    }

    /// Maximally mixed state of dimension `dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0),
        }
    }
}

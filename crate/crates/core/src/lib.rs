//! Time-symmetric simulation of oracle quantum algorithms.
//!
//! The three-register system B⊗A⊗V (problem setting, argument and solution,
//! function value) is held as a B-diagonal mixture of branches, which is what
//! a superposition with independent random phases averages to. On top of that
//! state algebra the crate provides:
//!
//! * generators and a file format for oracle problems ([`problem`]),
//! * Grover, Deutsch&Jozsa and Simon as branch-wise unitaries ([`circuits`]),
//! * the two relational representations of a run and the calculus for moving
//!   measurement projections back in time ([`engine`]),
//! * the advanced knowledge rule, which splits the reading of the setting into
//!   two partial measurements ([`advknow`]),
//! * exact and random classical query counts to compare it with ([`complexity`]),
//! * the sum over classical histories ([`histories`]).

pub mod advknow;
pub mod bits;
pub mod circuits;
pub mod complexity;
pub mod engine;
pub mod histories;
pub mod problem;
pub mod seed;
pub mod state;

pub use advknow::{AdvancedKnowledgeInstance, SplitCandidate};
pub use bits::BitString;
pub use circuits::{Algorithm, AlgorithmRun, TimeLabel, UnitaryStep};
pub use complexity::{ComplexityReport, DecisionTreeResult, SearchBudget};
pub use engine::{Projection, TwoRepRun};
pub use histories::ClassicalHistory;
pub use problem::{CellSpec, Family, OracleProblem};
pub use state::{Branch, DensityOperator, DephasedEnsemble, PureState};

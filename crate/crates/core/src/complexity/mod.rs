//! Classical query counting: exact decision trees, random searches, the
//! Grover iteration count, and the rule's predicted number of queries.

mod grover_k;
mod random;
mod search;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::advknow::{advanced_knowledge_instances, AdvKnowError};
use crate::bits::BitString;
use crate::problem::{Family, OracleProblem};
use crate::seed::{derive_seed, tag};

pub use grover_k::grover_k;
pub use random::{
    avg_queries_over_scopes, avg_queries_random_order, Estimate, SearchOrder, MAX_RANDOM_QUERIES,
};
pub use search::{
    is_determined, min_queries, min_queries_with_strategy, DecisionTreeResult, SearchBudget,
    Strategy,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("empty scope")]
    EmptyScope,
    #[error("setting {0} is not in the problem's setting set")]
    NotInSigma(BitString),
    #[error("search budget of {limit} nodes exhausted")]
    Budget { limit: usize },
    #[error("scope cost {cost} (settings × arguments) exceeds the limit {limit}")]
    ScopeTooLarge { cost: usize, limit: usize },
    #[error("no sequence of queries separates the solutions of {settings:?}")]
    Unsolvable { settings: Vec<BitString> },
    #[error(transparent)]
    AdvKnow(#[from] AdvKnowError),
}

/// Decision-tree depth of every advanced-knowledge instance of one setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub b_c: BitString,
    pub depths: Vec<(Vec<BitString>, usize)>,
}

impl Prediction {
    /// Headline count: the worst instance.
    pub fn max(&self) -> Option<usize> {
        self.depths.iter().map(|d| d.1).max()
    }

    pub fn min(&self) -> Option<usize> {
        self.depths.iter().map(|d| d.1).min()
    }

    /// Most frequent depth, the smaller one on ties.
    pub fn mode(&self) -> Option<usize> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, d) in &self.depths {
            *counts.entry(*d).or_default() += 1;
        }
        counts
            .into_iter()
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
            .map(|(d, _)| d)
    }
}

/// Runs the decision-tree search over each advanced-knowledge instance of `b_c`.
pub fn predicted_n(
    problem: &OracleProblem,
    b_c: &BitString,
    budget: SearchBudget,
) -> Result<Prediction, QueryError> {
    let depths = advanced_knowledge_instances(problem, b_c)?
        .into_iter()
        .map(|inst| {
            let d = min_queries(problem, &inst.subset, budget)?.depth;
            Ok((inst.subset, d))
        })
        .collect::<Result<_, QueryError>>()?;
    Ok(Prediction { b_c: *b_c, depths })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportConfig {
    pub budget: SearchBudget,
    /// Monte-Carlo trials per setting for each random-search average.
    pub trials: usize,
    pub seed: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            budget: SearchBudget::default(),
            trials: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SettingRecord {
    pub b_c: BitString,
    pub prediction: Prediction,
    /// Randomly ordered exhaustive search from an instance of `b_c`.
    pub avg_ii: Option<Estimate>,
    /// Completely random search from an instance of `b_c`.
    pub avg_iii: Option<Estimate>,
}

impl SettingRecord {
    pub fn instances(&self) -> usize {
        self.prediction.depths.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub name: String,
    /// `k(n)` for Grover problems.
    pub k_n: Option<f64>,
    /// Decision-tree depth over the whole setting set.
    pub baseline: usize,
    pub seed: u64,
    pub records: Vec<SettingRecord>,
}

/// Predicted versus classical query counts for every setting of `problem`.
pub fn build_report(
    problem: &OracleProblem,
    config: &ReportConfig,
) -> Result<ComplexityReport, QueryError> {
    let baseline = min_queries(problem, problem.settings(), config.budget)?.depth;
    let k_n = (problem.family() == Family::Grover).then(|| grover_k(problem.arg_width()));
    let records = problem
        .settings()
        .par_iter()
        .enumerate()
        .map(|(k, b_c)| {
            let prediction = predicted_n(problem, b_c, config.budget)?;
            let scopes: Vec<Vec<BitString>> =
                prediction.depths.iter().map(|d| d.0.clone()).collect();
            let average = |order: SearchOrder, label: &str| -> Result<Option<Estimate>, QueryError> {
                if scopes.is_empty() {
                    return Ok(None);
                }
                let seed = derive_seed(config.seed, &[tag("complexity"), k as u64, tag(label)]);
                avg_queries_over_scopes(problem, &scopes, config.trials, seed, order).map(Some)
            };
            Ok(SettingRecord {
                b_c: *b_c,
                avg_ii: average(SearchOrder::RandomExhaustive, "ii")?,
                avg_iii: average(SearchOrder::Uniform, "iii")?,
                prediction,
            })
        })
        .collect::<Result<Vec<_>, QueryError>>()?;
    Ok(ComplexityReport {
        name: problem.name().to_string(),
        k_n,
        baseline,
        seed: config.seed,
        records,
    })
}

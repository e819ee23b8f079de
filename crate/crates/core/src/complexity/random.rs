//! Monte-Carlo averages for randomly ordered and completely random searches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::problem::OracleProblem;
use crate::seed::derive_seed;

use super::search::scope_indices;
use super::QueryError;

/// Queries allowed in one completely random trial before giving up.
pub const MAX_RANDOM_QUERIES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchOrder {
    /// Arguments in a uniformly random order, none repeated. Arguments that
    /// cannot split what is still possible are passed over without a query.
    RandomExhaustive,
    /// Arguments drawn independently and uniformly; every draw is a query.
    Uniform,
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                trials: 0,
            };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            trials: n,
        }
    }
}

fn determined(problem: &OracleProblem, scope: &[u32]) -> bool {
    let first = problem.solution(scope[0] as usize);
    scope.iter().all(|&i| problem.solution(i as usize) == first)
}

fn splits(problem: &OracleProblem, scope: &[u32], a: u64) -> bool {
    let first = problem.value(scope[0] as usize, a);
    scope.iter().any(|&i| problem.value(i as usize, a) != first)
}

/// Queries one trial spends on `hidden` starting from `scope`.
fn trial<R: Rng>(
    problem: &OracleProblem,
    scope: &[u32],
    hidden: u32,
    order: SearchOrder,
    rng: &mut R,
) -> Result<usize, QueryError> {
    let mut alive = scope.to_vec();
    let mut queries = 0;
    let args = problem.arg_count() as u64;
    let observe = |alive: &mut Vec<u32>, a: u64| {
        let v = problem.value(hidden as usize, a);
        alive.retain(|&i| problem.value(i as usize, a) == v);
    };
    match order {
        SearchOrder::RandomExhaustive => {
            let mut sequence: Vec<u64> = (0..args).collect();
            sequence.shuffle(rng);
            for a in sequence {
                if determined(problem, &alive) {
                    break;
                }
                if splits(problem, &alive, a) {
                    queries += 1;
                    observe(&mut alive, a);
                }
            }
        }
        SearchOrder::Uniform => {
            while !determined(problem, &alive) {
                if queries == MAX_RANDOM_QUERIES {
                    return Err(QueryError::Budget {
                        limit: MAX_RANDOM_QUERIES,
                    });
                }
                queries += 1;
                observe(&mut alive, rng.gen_range(0..args));
            }
        }
    }
    if determined(problem, &alive) {
        Ok(queries)
    } else {
        Err(unsolvable(problem, &alive))
    }
}

fn unsolvable(problem: &OracleProblem, scope: &[u32]) -> QueryError {
    QueryError::Unsolvable {
        settings: scope
            .iter()
            .map(|&i| problem.settings()[i as usize])
            .collect(),
    }
}

fn check_solvable(problem: &OracleProblem, scope: &[u32]) -> Result<(), QueryError> {
    // Classes of settings no argument tells apart must share a solution.
    let args = problem.arg_count() as u64;
    for (k, &i) in scope.iter().enumerate() {
        for &j in &scope[k + 1..] {
            let same_table = (0..args).all(|a| problem.value(i as usize, a) == problem.value(j as usize, a));
            if same_table && problem.solution(i as usize) != problem.solution(j as usize) {
                return Err(unsolvable(problem, &[i, j]));
            }
        }
    }
    Ok(())
}

/// Average number of queries with the hidden setting uniform over `scope`.
pub fn avg_queries_random_order(
    problem: &OracleProblem,
    scope: &[BitString],
    trials: usize,
    seed: u64,
    order: SearchOrder,
) -> Result<Estimate, QueryError> {
    avg_queries_over_scopes(problem, &[scope.to_vec()], trials, seed, order)
}

/// Average number of queries when the starting scope is drawn uniformly from
/// `scopes` and the hidden setting uniformly from that scope.
pub fn avg_queries_over_scopes(
    problem: &OracleProblem,
    scopes: &[Vec<BitString>],
    trials: usize,
    seed: u64,
    order: SearchOrder,
) -> Result<Estimate, QueryError> {
    if scopes.is_empty() {
        return Err(QueryError::EmptyScope);
    }
    let scopes = scopes
        .iter()
        .map(|s| scope_indices(problem, s))
        .collect::<Result<Vec<_>, _>>()?;
    for s in &scopes {
        check_solvable(problem, s)?;
    }
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[t]));
            let scope = &scopes[rng.gen_range(0..scopes.len())];
            let hidden = scope[rng.gen_range(0..scope.len())];
            trial(problem, scope, hidden, order, &mut rng).map(|q| q as f64)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Estimate::from_samples(&samples))
}

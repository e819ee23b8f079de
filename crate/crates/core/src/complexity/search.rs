//! Exact adaptive decision-tree minimax.
//!
//! `depth(S) = 0` when every setting in `S` has the same solution, otherwise
//! `min_a max_v 1 + depth(S ∩ {f_b(a) = v})`. A query whose value is the same
//! on all of `S` cannot help (it leaves `S` unchanged and only removes an
//! option), so only splitting queries are expanded. This also covers the
//! no-repeat rule: an argument already queried never splits the scope again.

use std::collections::{BTreeMap, HashMap};

use crate::bits::BitString;
use crate::problem::OracleProblem;

use super::QueryError;

/// Limits on a single minimax search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Distinct scopes expanded before giving up.
    pub max_nodes: usize,
    /// Upper bound on `|scope| · 2^arg_width` accepted at the root.
    pub max_cost: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: 2_000_000,
            max_cost: 1 << 16,
        }
    }
}

/// An optimal adaptive query strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Leaf { solution: BitString },
    Query {
        argument: BitString,
        /// Sub-strategy for each observed value.
        branches: Vec<(u64, Strategy)>,
    },
}

impl Strategy {
    pub fn depth(&self) -> usize {
        match self {
            Strategy::Leaf { .. } => 0,
            Strategy::Query { branches, .. } => {
                1 + branches.iter().map(|(_, s)| s.depth()).max().unwrap_or(0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTreeResult {
    /// Minimal worst-case number of queries.
    pub depth: usize,
    /// An optimal first query, `None` when the scope is already determined.
    pub first_query: Option<BitString>,
    pub strategy: Option<Strategy>,
    /// Scopes expanded (memo misses).
    pub explored: usize,
}

struct Searcher<'a> {
    problem: &'a OracleProblem,
    memo: HashMap<Vec<u32>, (usize, Option<u64>)>,
    explored: usize,
    budget: SearchBudget,
}

impl Searcher<'_> {
    fn determined(&self, scope: &[u32]) -> bool {
        let first = self.problem.solution(scope[0] as usize);
        scope
            .iter()
            .all(|&i| self.problem.solution(i as usize) == first)
    }

    fn split(&self, scope: &[u32], a: u64) -> BTreeMap<u64, Vec<u32>> {
        let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &i in scope {
            parts
                .entry(self.problem.value(i as usize, a))
                .or_default()
                .push(i);
        }
        parts
    }

    fn depth(&mut self, scope: &[u32]) -> Result<usize, QueryError> {
        if let Some(&(d, _)) = self.memo.get(scope) {
            return Ok(d);
        }
        if self.determined(scope) {
            self.memo.insert(scope.to_vec(), (0, None));
            return Ok(0);
        }
        self.explored += 1;
        if self.explored > self.budget.max_nodes {
            return Err(QueryError::Budget {
                limit: self.budget.max_nodes,
            });
        }
        let mut best: Option<(usize, u64)> = None;
        for a in 0..self.problem.arg_count() as u64 {
            let parts = self.split(scope, a);
            if parts.len() < 2 {
                continue;
            }
            let mut worst = 0;
            let mut pruned = false;
            for part in parts.values() {
                worst = worst.max(1 + self.depth(part)?);
                if best.is_some_and(|(b, _)| worst >= b) {
                    pruned = true;
                    break;
                }
            }
            if !pruned {
                best = Some((worst, a));
                if worst == 1 {
                    break;
                }
            }
        }
        let (d, a) = best.ok_or_else(|| QueryError::Unsolvable {
            settings: scope
                .iter()
                .map(|&i| self.problem.settings()[i as usize])
                .collect(),
        })?;
        self.memo.insert(scope.to_vec(), (d, Some(a)));
        Ok(d)
    }

    fn strategy(&self, scope: &[u32]) -> Strategy {
        match self.memo.get(scope) {
            Some(&(_, Some(a))) => Strategy::Query {
                argument: BitString::new(a, self.problem.arg_width()).expect("argument fits"),
                branches: self
                    .split(scope, a)
                    .into_iter()
                    .map(|(v, part)| (v, self.strategy(&part)))
                    .collect(),
            },
            _ => Strategy::Leaf {
                solution: self.problem.solution(scope[0] as usize),
            },
        }
    }
}

pub(crate) fn scope_indices(
    problem: &OracleProblem,
    scope: &[BitString],
) -> Result<Vec<u32>, QueryError> {
    if scope.is_empty() {
        return Err(QueryError::EmptyScope);
    }
    let mut idx = scope
        .iter()
        .map(|s| {
            problem
                .index_of(s)
                .map(|i| i as u32)
                .ok_or(QueryError::NotInSigma(*s))
        })
        .collect::<Result<Vec<_>, _>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// Minimal worst-case number of queries that determines the solution for
/// every setting in `scope`.
pub fn min_queries(
    problem: &OracleProblem,
    scope: &[BitString],
    budget: SearchBudget,
) -> Result<DecisionTreeResult, QueryError> {
    search(problem, scope, budget, false)
}

/// [`min_queries`] keeping the optimal strategy tree.
pub fn min_queries_with_strategy(
    problem: &OracleProblem,
    scope: &[BitString],
    budget: SearchBudget,
) -> Result<DecisionTreeResult, QueryError> {
    search(problem, scope, budget, true)
}

fn search(
    problem: &OracleProblem,
    scope: &[BitString],
    budget: SearchBudget,
    keep_strategy: bool,
) -> Result<DecisionTreeResult, QueryError> {
    let idx = scope_indices(problem, scope)?;
    let cost = idx.len().saturating_mul(problem.arg_count());
    if cost > budget.max_cost {
        return Err(QueryError::ScopeTooLarge {
            cost,
            limit: budget.max_cost,
        });
    }
    let mut searcher = Searcher {
        problem,
        memo: HashMap::new(),
        explored: 0,
        budget,
    };
    let depth = searcher.depth(&idx)?;
    let first_query = searcher.memo.get(&idx).and_then(|&(_, a)| a).map(|a| {
        BitString::new(a, problem.arg_width()).expect("argument fits")
    });
    let strategy = keep_strategy.then(|| searcher.strategy(&idx));
    Ok(DecisionTreeResult {
        depth,
        first_query,
        strategy,
        explored: searcher.explored,
    })
}

/// True when every setting in `scope` shares one solution value.
pub fn is_determined(problem: &OracleProblem, scope: &[BitString]) -> bool {
    let mut sols = scope.iter().filter_map(|s| problem.solution_of(s));
    match sols.next() {
        Some(first) => sols.all(|s| s == first),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::problem::{make_deutsch_jozsa, make_grover, make_simon};

    fn depth(p: &OracleProblem, scope: &[&str]) -> usize {
        let scope: Vec<_> = scope.iter().map(|s| bits(s)).collect();
        min_queries(p, &scope, SearchBudget::default()).unwrap().depth
    }

    #[test]
    fn grover_two_bits() {
        let p = make_grover(2).unwrap();
        assert_eq!(depth(&p, &["00", "01", "10", "11"]), 3);
        assert_eq!(depth(&p, &["01", "11"]), 1);
        assert_eq!(depth(&p, &["10"]), 0);
    }

    #[test]
    fn dj_half_table_scope() {
        let p = make_deutsch_jozsa(2).unwrap();
        let r = min_queries_with_strategy(&p, &[bits("0011"), bits("0000")], SearchBudget::default())
            .unwrap();
        assert_eq!(r.depth, 1);
        // Any argument outside rows 00, 01 separates the two tables.
        let first = r.first_query.unwrap().value();
        assert!(first == 0b10 || first == 0b11);
        assert_eq!(r.strategy.unwrap().depth(), 1);
    }

    #[test]
    fn simon_two_period_scope() {
        let p = make_simon(2).unwrap();
        assert_eq!(depth(&p, &["0011", "0110"]), 1);
    }

    #[test]
    fn errors() {
        let p = make_grover(2).unwrap();
        assert!(matches!(
            min_queries(&p, &[], SearchBudget::default()),
            Err(QueryError::EmptyScope)
        ));
        assert!(matches!(
            min_queries(&p, &[bits("111")], SearchBudget::default()),
            Err(QueryError::NotInSigma(_))
        ));
        let tight = SearchBudget {
            max_nodes: 2,
            ..SearchBudget::default()
        };
        assert!(matches!(
            min_queries(&p, p.settings(), tight),
            Err(QueryError::Budget { limit: 2 })
        ));
        let small = SearchBudget {
            max_cost: 8,
            ..SearchBudget::default()
        };
        assert!(matches!(
            min_queries(&p, p.settings(), small),
            Err(QueryError::ScopeTooLarge { cost: 16, limit: 8 })
        ));
    }
}

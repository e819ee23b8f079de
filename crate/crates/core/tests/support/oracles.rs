//! Independent reference implementations used to check the library.
//!
//! Nothing here calls the code under test beyond reading problem tables, and
//! every routine takes the slow, obvious route.

#![allow(dead_code)]

use std::collections::BTreeMap;

use advknow_core::{BitString, OracleProblem};

/// Whether some adaptive strategy of depth at most `d` names the solution of
/// every setting in `scope`. Tries every argument at every node, repeats and
/// useless queries included, with no memo.
pub fn strategy_exists(problem: &OracleProblem, scope: &[usize], d: usize) -> bool {
    let first = problem.solution(scope[0]);
    if scope.iter().all(|&i| problem.solution(i) == first) {
        return true;
    }
    if d == 0 {
        return false;
    }
    (0..problem.arg_count() as u64).any(|a| {
        let mut parts: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for &i in scope {
            parts.entry(problem.value(i, a)).or_default().push(i);
        }
        parts.values().all(|part| strategy_exists(problem, part, d - 1))
    })
}

/// Smallest depth with a strategy, by iterative deepening.
pub fn brute_force_depth(problem: &OracleProblem, scope: &[usize]) -> usize {
    (0..=problem.arg_count())
        .find(|&d| strategy_exists(problem, scope, d))
        .expect("querying every argument identifies the table")
}

fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Exact mean of the randomly ordered exhaustive search: every argument
/// order, every hidden setting of `scope`, arguments that cannot split the
/// remaining settings skipped without a query.
pub fn exact_random_order_mean(problem: &OracleProblem, scope: &[usize]) -> f64 {
    let args: Vec<u64> = (0..problem.arg_count() as u64).collect();
    let orders = permutations(&args);
    let mut total = 0.0;
    for &hidden in scope {
        for order in &orders {
            let mut alive = scope.to_vec();
            let mut queries = 0;
            for &a in order {
                let sols: Vec<_> = alive.iter().map(|&i| problem.solution(i)).collect();
                if sols.iter().all(|s| *s == sols[0]) {
                    break;
                }
                let vals: Vec<_> = alive.iter().map(|&i| problem.value(i, a)).collect();
                if vals.iter().all(|v| *v == vals[0]) {
                    continue;
                }
                queries += 1;
                let seen = problem.value(hidden, a);
                alive.retain(|&i| problem.value(i, a) == seen);
            }
            total += queries as f64;
        }
    }
    total / (scope.len() * orders.len()) as f64
}

/// Grover success probability from the rotation picture.
pub fn grover_closed_form(n: usize, k: usize) -> f64 {
    let theta = (2f64.powf(-(n as f64) / 2.0)).asin();
    (((2 * k + 1) as f64) * theta).sin().powi(2)
}

/// Grover search on a bare real amplitude vector: flip the marked sign,
/// reflect about the mean.
pub fn grover_vector(n: usize, k: usize, marked: usize) -> Vec<f64> {
    let dim = 1usize << n;
    let mut psi = vec![1.0 / (dim as f64).sqrt(); dim];
    for _ in 0..k {
        psi[marked] = -psi[marked];
        let mean = psi.iter().sum::<f64>() / dim as f64;
        for x in &mut psi {
            *x = 2.0 * mean - *x;
        }
    }
    psi
}

/// Settings whose rendered string matches `b_c` at the character positions
/// of `cells` (each cell `cell_width` characters).
pub fn filter_by_text(problem: &OracleProblem, b_c: &BitString, cells: &[usize]) -> Vec<BitString> {
    let cw = problem.cells().cell_width;
    let target = b_c.to_string();
    problem
        .settings()
        .iter()
        .filter(|b| {
            let text = b.to_string();
            cells
                .iter()
                .all(|&c| text[c * cw..(c + 1) * cw] == target[c * cw..(c + 1) * cw])
        })
        .copied()
        .collect()
}

/// Entropy in bits of the solution over `subset`, by counting.
pub fn entropy_by_counting(problem: &OracleProblem, subset: &[BitString]) -> f64 {
    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
    for b in subset {
        *counts
            .entry(problem.solution_of(b).unwrap().to_string())
            .or_default() += 1.0;
    }
    let n = subset.len() as f64;
    counts.values().map(|c| -(c / n) * (c / n).log2()).sum()
}

/// Half-row subsets whose induced setting subset still leaves the solution
/// open, judged from the settings themselves: DJ needs equal values on the
/// half, Simon distinct values and at least two periods among the agreeing
/// settings.
pub fn good_halves_by_search(problem: &OracleProblem, b_c: &BitString, dj: bool) -> Vec<Vec<usize>> {
    let count = problem.cells().cell_count;
    let cw = problem.cells().cell_width;
    let mut out = Vec::new();
    for mask in 0u32..(1 << count) {
        if mask.count_ones() as usize != count / 2 {
            continue;
        }
        let rows: Vec<usize> = (0..count).filter(|r| mask >> r & 1 == 1).collect();
        let vals: Vec<u64> = rows.iter().map(|&r| b_c.cell(r, cw)).collect();
        let good = if dj {
            vals.iter().all(|v| *v == vals[0])
        } else {
            let mut sorted = vals.clone();
            sorted.sort();
            sorted.dedup();
            let agreeing = filter_by_text(problem, b_c, &rows);
            let mut periods: Vec<_> = agreeing.iter().map(|b| problem.solution_of(b).unwrap()).collect();
            periods.sort();
            periods.dedup();
            sorted.len() == vals.len() && periods.len() >= 2
        };
        if good {
            out.push(rows);
        }
    }
    out
}

/// Index set of a list of settings.
pub fn indices(problem: &OracleProblem, scope: &[BitString]) -> Vec<usize> {
    scope.iter().map(|b| problem.index_of(b).unwrap()).collect()
}

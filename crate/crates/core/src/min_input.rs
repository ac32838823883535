//! Exhaustive search for an input pattern `B` with the fewest columns making
//! `(A, B)` strongly structurally controllable. The problem is NP-hard; this
//! is meant for a handful of states.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::error::PatternError;
use crate::pattern::CcsPattern;
use crate::verifier::is_ssc;

/// Candidates evaluated per parallel batch. Fixed so that the reported
/// counts do not depend on the worker count.
const BATCH: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinInputError {
    #[error("state matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("search over {n} states is not supported (at most 63)")]
    TooManyStates { n: usize },
    #[error("max_r must be at least 1")]
    ZeroColumnBound,
    #[error("candidate budget of {budget} exceeded at {columns} columns; searched up to {searched} columns without success")]
    BudgetExceeded {
        budget: u64,
        columns: usize,
        searched: usize,
    },
    #[error("no input pattern with at most {0} columns")]
    NoSolutionWithin(usize),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Debug, Clone)]
pub struct MinBQuery {
    /// State pattern `A`, `n x n`.
    pub a: CcsPattern,
    pub max_r: usize,
    /// Only consider columns with at most this many `*`-entries.
    pub max_stars_per_column: Option<usize>,
    pub workers: usize,
    /// Maximum number of candidates to test overall.
    pub budget: u64,
}

impl MinBQuery {
    pub fn new(a: CcsPattern) -> Self {
        Self {
            a,
            max_r: 3,
            max_stars_per_column: None,
            workers: 1,
            budget: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinBResult {
    pub r_min: usize,
    /// `n x r_min` input pattern.
    pub b: CcsPattern,
    pub candidates_tested: u64,
    pub elapsed: Duration,
}

/// Nonempty column supports ordered by their bitmask value (row 1 is bit 0).
fn column_family(n: usize, max_stars: Option<usize>) -> Vec<u64> {
    let cap = max_stars.unwrap_or(n) as u32;
    (1u64..1 << n).filter(|m| m.count_ones() <= cap).collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Next `r`-combination of `0..len` in lexicographic order.
fn advance(combo: &mut [usize], len: usize) -> bool {
    let r = combo.len();
    for pos in (0..r).rev() {
        if combo[pos] < len - r + pos {
            combo[pos] += 1;
            for later in pos + 1..r {
                combo[later] = combo[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn input_pattern(n: usize, family: &[u64], combo: &[usize]) -> CcsPattern {
    let entries: Vec<(usize, usize)> = combo
        .iter()
        .enumerate()
        .flat_map(|(col, &c)| {
            let mask = family[c];
            (0..n)
                .filter(move |i| mask & (1 << i) != 0)
                .map(move |i| (i + 1, col + 1))
        })
        .collect();
    CcsPattern::from_entries(n, combo.len(), entries).expect("distinct bits")
}

fn controllable(a: &CcsPattern, b: &CcsPattern) -> bool {
    let x = a.hstack(b).expect("row counts agree");
    is_ssc(&x).expect("square state block").ssc
}

/// Tests `r = 1, 2, ..., max_r` in turn over sets of distinct candidate
/// columns, returning the first `r` with a controllable pair. Among the
/// successes at that `r`, the lexicographically smallest witness is reported.
pub fn min_columns(q: &MinBQuery) -> Result<MinBResult, MinInputError> {
    let start = Instant::now();
    let n = q.a.nrows();
    if q.a.ncols() != n {
        return Err(MinInputError::NotSquare {
            nrows: n,
            ncols: q.a.ncols(),
        });
    }
    if n >= 64 {
        return Err(MinInputError::TooManyStates { n });
    }
    if q.max_r == 0 {
        return Err(MinInputError::ZeroColumnBound);
    }
    let family = column_family(n, q.max_stars_per_column);
    let workers = q.workers.max(1);
    let mut tested = 0u64;

    for r in 1..=q.max_r {
        if r > family.len() {
            break;
        }
        let needed = binomial(family.len() as u64, r as u64);
        if tested.saturating_add(needed) > q.budget {
            return Err(MinInputError::BudgetExceeded {
                budget: q.budget,
                columns: r,
                searched: r - 1,
            });
        }
        let mut combo: Vec<usize> = (0..r).collect();
        let mut more = true;
        while more {
            let mut batch = Vec::with_capacity(BATCH);
            while more && batch.len() < BATCH {
                batch.push(combo.clone());
                more = advance(&mut combo, family.len());
            }
            tested += batch.len() as u64;
            let hit = first_success(&q.a, &family, &batch, workers);
            if let Some(idx) = hit {
                let b = input_pattern(n, &family, &batch[idx]);
                return Ok(MinBResult {
                    r_min: r,
                    b,
                    candidates_tested: tested,
                    elapsed: start.elapsed(),
                });
            }
        }
    }
    Err(MinInputError::NoSolutionWithin(q.max_r))
}

/// Smallest batch index whose candidate is controllable.
fn first_success(
    a: &CcsPattern,
    family: &[u64],
    batch: &[Vec<usize>],
    workers: usize,
) -> Option<usize> {
    let n = a.nrows();
    let test = |combo: &Vec<usize>| controllable(a, &input_pattern(n, family, combo));
    if workers == 1 || batch.len() < 2 * workers {
        return batch.iter().position(test);
    }
    let chunk = batch.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = batch
            .chunks(chunk)
            .enumerate()
            .map(|(w, part)| scope.spawn(move || part.iter().position(test).map(|i| w * chunk + i)))
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("worker panicked"))
            .min()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_state_a() -> CcsPattern {
        CcsPattern::from_entries(6, 6, [(3, 1), (5, 1), (2, 2), (1, 4), (6, 4), (4, 6)]).unwrap()
    }

    #[test]
    fn combinations_in_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while advance(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(binomial(63, 2), 1953);
        assert_eq!(binomial(5, 7), 0);
    }

    #[test]
    fn family_sizes() {
        assert_eq!(column_family(6, None).len(), 63);
        assert_eq!(column_family(6, Some(1)).len(), 6);
        assert_eq!(column_family(6, Some(2)).len(), 21);
    }

    #[test]
    fn six_state_needs_two_columns() {
        let res = min_columns(&MinBQuery::new(six_state_a())).unwrap();
        assert_eq!(res.r_min, 2);
        assert!(controllable(&six_state_a(), &res.b));
        assert!(res.candidates_tested > 63);
    }

    #[test]
    fn six_state_dedicated_inputs_need_three() {
        let q = MinBQuery {
            max_stars_per_column: Some(1),
            ..MinBQuery::new(six_state_a())
        };
        let res = min_columns(&q).unwrap();
        assert_eq!(res.r_min, 3);
        assert!(res.b.col_ptr().windows(2).all(|w| w[1] - w[0] == 1));
    }

    #[test]
    fn one_column_is_not_enough() {
        let q = MinBQuery {
            max_r: 1,
            ..MinBQuery::new(six_state_a())
        };
        assert_eq!(
            min_columns(&q).unwrap_err(),
            MinInputError::NoSolutionWithin(1)
        );
    }

    #[test]
    fn single_zero_state() {
        let a = CcsPattern::from_entries(1, 1, []).unwrap();
        let res = min_columns(&MinBQuery::new(a)).unwrap();
        assert_eq!(res.r_min, 1);
        assert_eq!(res.b.positions().collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn budget_guard() {
        let q = MinBQuery {
            budget: 100,
            ..MinBQuery::new(six_state_a())
        };
        assert_eq!(
            min_columns(&q).unwrap_err(),
            MinInputError::BudgetExceeded {
                budget: 100,
                columns: 2,
                searched: 1
            }
        );
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let base = min_columns(&MinBQuery::new(six_state_a())).unwrap();
        for workers in [2, 3, 8] {
            let q = MinBQuery {
                workers,
                ..MinBQuery::new(six_state_a())
            };
            let res = min_columns(&q).unwrap();
            assert_eq!(res.b, base.b);
            assert_eq!(res.candidates_tested, base.candidates_tested);
        }
    }

    #[test]
    fn rejects_non_square() {
        let a = CcsPattern::from_entries(2, 3, []).unwrap();
        assert!(matches!(
            min_columns(&MinBQuery::new(a)),
            Err(MinInputError::NotSquare { .. })
        ));
    }
}

//! Slow reference implementations used to cross-check the verifier.
//!
//! Nothing here shares code with [`crate::verifier`] or the linked pattern
//! arrays: sets are recomputed from a dense grid every time.

use nalgebra::{DMatrix, Schur};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pattern::CcsPattern;
use crate::verifier::Mode;

/// Largest state count accepted by the subset enumerations by default.
pub const DEFAULT_EXHAUSTION_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subset enumeration over {n} states exceeds the bound of {bound}")]
    ExhaustionBoundExceeded { n: usize, bound: usize },
}

/// Dense `n x (n + r)` boolean grid, `true` marking a `*`-entry. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePattern {
    n: usize,
    r: usize,
    grid: Vec<bool>,
}

impl DensePattern {
    pub fn new(n: usize, r: usize) -> Self {
        Self {
            n,
            r,
            grid: vec![false; n * (n + r)],
        }
    }

    /// # Panics
    ///
    /// Panics if `x` has fewer columns than rows.
    pub fn from_ccs(x: &CcsPattern) -> Self {
        assert!(x.ncols() >= x.nrows());
        let mut d = Self::new(x.nrows(), x.ncols() - x.nrows());
        for (i, j) in x.positions() {
            d.set(i, j, true);
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ncols(&self) -> usize {
        self.n + self.r
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.grid[(i - 1) * self.ncols() + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, star: bool) {
        let m = self.ncols();
        self.grid[(i - 1) * m + (j - 1)] = star;
    }

    /// 1-based positions in row-major order.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let m = self.ncols();
        (1..=self.n)
            .flat_map(|i| (1..=m).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j))
            .collect()
    }

    pub fn to_ccs(&self) -> CcsPattern {
        CcsPattern::from_entries(self.n, self.ncols(), self.positions())
            .expect("dense grid has no duplicates")
    }
}

/// Rows with a `*` in column `j`.
pub fn nzr(d: &DensePattern, j: usize) -> Vec<usize> {
    (1..=d.n).filter(|&i| d.get(i, j)).collect()
}

/// Columns with a `*` in some row of `rows`.
pub fn nzc(d: &DensePattern, rows: &[usize]) -> Vec<usize> {
    (1..=d.ncols())
        .filter(|&j| rows.iter().any(|&i| d.get(i, j)))
        .collect()
}

/// Column supports as row bitmasks (bit `i - 1` for row `i`).
fn column_masks(d: &DensePattern) -> Vec<u64> {
    (1..=d.ncols())
        .map(|j| {
            nzr(d, j)
                .into_iter()
                .fold(0u64, |mask, i| mask | (1 << (i - 1)))
        })
        .collect()
}

fn check_bound(n: usize, bound: usize) -> Result<(), OracleError> {
    if n > bound || n >= 64 {
        Err(OracleError::ExhaustionBoundExceeded { n, bound })
    } else {
        Ok(())
    }
}

/// Every non-empty row subset `V` meets some column in exactly one row.
pub fn check_g0(d: &DensePattern) -> Result<bool, OracleError> {
    check_g0_bounded(d, DEFAULT_EXHAUSTION_BOUND)
}

pub fn check_g0_bounded(d: &DensePattern, bound: usize) -> Result<bool, OracleError> {
    check_bound(d.n, bound)?;
    let cols = column_masks(d);
    Ok((1u64..1 << d.n).all(|set| cols.iter().any(|&c| (set & c).count_ones() == 1)))
}

/// Every non-empty row subset `V` with `V ⊆ NZC(V)` meets some column outside
/// `V` in exactly one row.
pub fn check_g1(d: &DensePattern) -> Result<bool, OracleError> {
    check_g1_bounded(d, DEFAULT_EXHAUSTION_BOUND)
}

pub fn check_g1_bounded(d: &DensePattern, bound: usize) -> Result<bool, OracleError> {
    check_bound(d.n, bound)?;
    let n = d.n;
    let cols = column_masks(d);
    Ok((1u64..1 << n).all(|set| {
        // V ⊆ NZC(V): each state index in V labels a column touching V.
        let closed = (0..n).all(|i| set & (1 << i) == 0 || set & cols[i] != 0);
        !closed
            || cols
                .iter()
                .enumerate()
                .any(|(v, &c)| (v >= n || set & (1 << v) == 0) && (set & c).count_ones() == 1)
    }))
}

/// Direct transcription of the peeling method: `T` and `NZC(V)` recomputed
/// from scratch each iteration, ties broken by smallest index. Returns the
/// final `V`, 1-based.
pub fn naive_fig1(d: &DensePattern, mode: Mode) -> Vec<usize> {
    let n = d.n;
    let mut v: Vec<usize> = (1..=n).collect();
    while !v.is_empty() {
        let singles: Vec<usize> = (1..=d.ncols())
            .filter(|&j| mode == Mode::Zero || !v.contains(&j))
            .filter(|&j| v.iter().filter(|&&i| d.get(i, j)).count() == 1)
            .collect();
        let touched = nzc(d, &v);
        let closed = v.iter().all(|i| touched.contains(i));
        let w = if mode == Mode::Zero || closed {
            let Some(&col) = singles.first() else {
                break;
            };
            *v.iter()
                .find(|&&i| d.get(i, col))
                .expect("singleton column")
        } else {
            *v.iter().find(|i| !touched.contains(i)).expect("not closed")
        };
        v.retain(|&i| i != w);
    }
    v
}

/// A real realization of a pattern: nonzero exactly on the `*`-entries.
#[derive(Debug, Clone)]
pub struct NumericInstance {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

impl NumericInstance {
    /// Entries drawn uniformly from `[-2, -0.1] ∪ [0.1, 2]`.
    pub fn sample<R: Rng>(d: &DensePattern, rng: &mut R) -> Self {
        let n = d.n;
        let mut a = DMatrix::zeros(n, n);
        let mut b = DMatrix::zeros(n, d.r);
        for (i, j) in d.positions() {
            let magnitude = rng.random_range(0.1..=2.0);
            let value = if rng.random_bool(0.5) {
                magnitude
            } else {
                -magnitude
            };
            if j <= n {
                a[(i - 1, j - 1)] = value;
            } else {
                b[(i - 1, j - 1 - n)] = value;
            }
        }
        Self { a, b }
    }

    /// `(λ·id − A, B)` has full row rank, via singular values with a
    /// `1e-8` relative tolerance.
    pub fn full_rank_at(&self, lambda: f64) -> bool {
        let n = self.a.nrows();
        if n == 0 {
            return true;
        }
        let mut m = DMatrix::zeros(n, n + self.b.ncols());
        m.view_mut((0, 0), (n, n))
            .copy_from(&(DMatrix::identity(n, n) * lambda - &self.a));
        m.view_mut((0, n), (n, self.b.ncols())).copy_from(&self.b);
        let sv = m.singular_values();
        let largest = sv.max();
        if largest == 0.0 {
            return false;
        }
        sv.iter().filter(|&&s| s > 1e-8 * largest).count() == n
    }

    /// `λ = 0` plus every (numerically) real eigenvalue of `A`. `None` when
    /// the Schur iteration does not converge.
    pub fn test_points(&self) -> Option<Vec<f64>> {
        let mut points = vec![0.0];
        let n = self.a.nrows();
        if n > 0 {
            let schur = Schur::try_new(self.a.clone(), f64::EPSILON, SCHUR_MAX_ITER * n)?;
            for ev in schur.complex_eigenvalues().iter() {
                if ev.im.abs() <= 1e-9 * (1.0 + ev.re.abs()) {
                    points.push(ev.re);
                }
            }
        }
        Some(points)
    }
}

const SCHUR_MAX_ITER: usize = 200;

/// Samples `trials` realizations and checks the rank condition at `λ = 0` and
/// at the real eigenvalues of each `A`. Realizations whose eigenvalues cannot
/// be computed are redrawn.
///
/// One-sided: a controllable pattern must always pass, but passing proves nothing.
pub fn hautus_spotcheck(d: &DensePattern, trials: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < trials {
        let inst = NumericInstance::sample(d, &mut rng);
        let Some(points) = inst.test_points() else {
            continue;
        };
        if !points.into_iter().all(|lambda| inst.full_rank_at(lambda)) {
            return false;
        }
        done += 1;
    }
    true
}

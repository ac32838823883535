//! Linear-time test of strong structural controllability.
//!
//! One run peels rows off the active set `V` (initially every state):
//! while some column meets `V` in exactly one row, that row is removed. In
//! [`Mode::NonZero`] only columns outside `V` count, and rows with no `*`
//! anywhere in the active rows are removed first. The pair is strongly
//! structurally controllable iff both modes end with `V` empty.
//!
//! The singleton columns `T` and the isolated rows `T0` are maintained
//! incrementally through [`LinkedPattern`]'s active counts, so a full run
//! costs `O(n + r + nnz)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::PatternError;
use crate::index_sets::{MembershipFlags, SparseIndexSet};
use crate::pattern::{validate_links_with, CcsPattern, LinkedPattern, Violation};

/// Environment variable enabling per-step link validation in [`run`].
pub const DEBUG_VALIDATE_ENV: &str = "SSC_DEBUG_VALIDATE";

/// Which eigenvalue range a run certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `λ = 0`.
    Zero,
    /// Every `λ ≠ 0`.
    NonZero,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Zero, Mode::NonZero];

    /// `0` for [`Mode::Zero`], `1` for [`Mode::NonZero`].
    pub fn level(self) -> u8 {
        match self {
            Mode::Zero => 0,
            Mode::NonZero => 1,
        }
    }

    pub fn from_level(level: u8) -> Option<Self> {
        match level {
            0 => Some(Mode::Zero),
            1 => Some(Mode::NonZero),
            _ => None,
        }
    }
}

/// How a member of `T` or `T0` is chosen when several qualify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PickRule {
    /// Most recently inserted member. Initial members are inserted in
    /// decreasing index order, so the first pick is the smallest index.
    #[default]
    Lifo,
    /// Uniformly random member, seeded.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub pick: PickRule,
    /// Check every link invariant after each single removal. `O(nnz)` per step.
    pub validate: bool,
}

impl RunConfig {
    /// Default config, with validation switched on by `SSC_DEBUG_VALIDATE=1`.
    pub fn from_env() -> Self {
        let validate = std::env::var(DEBUG_VALIDATE_ENV).is_ok_and(|v| v == "1");
        Self {
            validate,
            ..Self::default()
        }
    }
}

/// Result of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOutcome {
    /// Rows left in `V` when the run stopped, 1-based and increasing.
    pub witness: Vec<usize>,
    /// Basic steps executed, including building the linked pattern.
    pub ops: u64,
    /// Number of rows removed from `V`.
    pub removals: usize,
}

impl VerifyOutcome {
    pub fn is_empty_witness(&self) -> bool {
        self.witness.is_empty()
    }
}

/// One iteration of the main loop, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    /// Singleton column that forced the removal, if the row came from `T`.
    pub column: Option<usize>,
    /// Removed row.
    pub row: usize,
}

/// Link violations observed right after one removal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepViolation {
    pub removal: usize,
    pub row: usize,
    pub column: usize,
    pub violations: Vec<Violation>,
}

enum Picker {
    Lifo,
    Random(Box<ChaCha8Rng>),
}

impl Picker {
    fn pick(&mut self, set: &SparseIndexSet) -> Option<usize> {
        match self {
            Picker::Lifo => set.pick(),
            Picker::Random(rng) if !set.is_empty() => {
                Some(set.as_slice()[rng.random_range(0..set.len())])
            }
            Picker::Random(_) => None,
        }
    }
}

/// A run in progress. Owns its pattern, whose arrays are permuted in place.
pub struct Verifier {
    p: LinkedPattern,
    mode: Mode,
    active: MembershipFlags,
    singles: SparseIndexSet,
    isolated: SparseIndexSet,
    picker: Picker,
    validate: bool,
    violations: Vec<StepViolation>,
    ops: u64,
    removals: usize,
    stopped: bool,
}

impl Verifier {
    pub fn new(p: LinkedPattern, mode: Mode) -> Self {
        Self::with_config(p, mode, RunConfig::default())
    }

    /// Sets up `V`, `T` and `T0` from a freshly built pattern.
    pub fn with_config(p: LinkedPattern, mode: Mode, config: RunConfig) -> Self {
        let n = p.n();
        let m = p.ncols();
        let count = p.active_count();
        let mut singles = SparseIndexSet::new(m);
        let mut isolated = SparseIndexSet::new(n);
        match mode {
            Mode::Zero => {
                for v in (0..m).rev().filter(|&v| count[v] == 1) {
                    singles.insert(v);
                }
            }
            Mode::NonZero => {
                for v in (n..m).rev().filter(|&v| count[v] == 1) {
                    singles.insert(v);
                }
                for v in (0..n).rev().filter(|&v| count[v] == 0) {
                    isolated.insert(v);
                }
            }
        }
        let picker = match config.pick {
            PickRule::Lifo => Picker::Lifo,
            PickRule::Random { seed } => Picker::Random(Box::new(ChaCha8Rng::seed_from_u64(seed))),
        };
        Self {
            ops: p.build_ops() + m as u64,
            active: MembershipFlags::full(m, n),
            p,
            mode,
            singles,
            isolated,
            picker,
            validate: config.validate,
            violations: Vec::new(),
            removals: 0,
            stopped: false,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn pattern(&self) -> &LinkedPattern {
        &self.p
    }

    /// Active rows, 1-based and increasing.
    pub fn active_rows(&self) -> Vec<usize> {
        self.active.iter().map(|i| i + 1).collect()
    }

    /// Current singleton-column set `T`, 1-based and increasing.
    pub fn singleton_columns(&self) -> Vec<usize> {
        sorted_one_based(&self.singles)
    }

    /// Current isolated-row set `T0`, 1-based and increasing.
    pub fn isolated_rows(&self) -> Vec<usize> {
        sorted_one_based(&self.isolated)
    }

    pub fn violations(&self) -> &[StepViolation] {
        &self.violations
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn removals(&self) -> usize {
        self.removals
    }

    /// Performs one iteration. Returns `None` once `V` is empty or no row
    /// can be removed.
    pub fn step(&mut self) -> Option<Step> {
        if self.stopped || self.active.count() == 0 {
            self.stopped = true;
            return None;
        }
        let (column, w) = if self.mode == Mode::Zero || self.isolated.is_empty() {
            let Some(v) = self.picker.pick(&self.singles) else {
                self.stopped = true;
                return None;
            };
            // The single active row of v sits in the first slot of its column.
            (Some(v), self.p.row_idx()[self.p.col_ptr()[v]])
        } else {
            let w = self
                .picker
                .pick(&self.isolated)
                .expect("isolated set checked non-empty");
            (None, w)
        };
        self.ops += 1;

        let row = self.p.row_ptr()[w]..self.p.row_ptr()[w + 1];
        for l in row.clone() {
            self.ops += 1;
            let j = self.p.col_idx()[l];
            self.p.remove_active_at(j, l);
            if self.validate {
                self.check_links(w, j, row.start, l);
            }
            match self.p.active_count()[j] {
                0 => {
                    self.singles.remove(j);
                    if self.mode == Mode::NonZero && self.active.contains(j) {
                        self.isolated.insert(j);
                    }
                }
                1 if self.mode == Mode::Zero || !self.active.contains(j) => {
                    self.singles.insert(j);
                }
                _ => {}
            }
        }
        if self.mode == Mode::NonZero {
            // w leaves V, so its own column now qualifies for T.
            match self.p.active_count()[w] {
                1 => {
                    self.singles.insert(w);
                }
                0 => {
                    self.isolated.remove(w);
                }
                _ => {}
            }
        }
        self.active.remove(w);
        self.removals += 1;
        Some(Step {
            column: column.map(|v| v + 1),
            row: w + 1,
        })
    }

    /// Runs to completion.
    pub fn finish(mut self) -> VerifyOutcome {
        while self.step().is_some() {}
        VerifyOutcome {
            witness: self.active_rows(),
            ops: self.ops,
            removals: self.removals,
        }
    }

    fn check_links(&mut self, w: usize, j: usize, row_start: usize, l: usize) {
        let done = &self.p.col_idx()[row_start..=l];
        let active = &self.active;
        let found = validate_links_with(&self.p, |i, col| {
            active.contains(i) && !(i == w && done.contains(&col))
        });
        if !found.is_empty() {
            self.violations.push(StepViolation {
                removal: self.removals + 1,
                row: w + 1,
                column: j + 1,
                violations: found,
            });
        }
    }
}

fn sorted_one_based(set: &SparseIndexSet) -> Vec<usize> {
    let mut v: Vec<usize> = set.as_slice().iter().map(|&e| e + 1).collect();
    v.sort_unstable();
    v
}

/// Runs `mode` to completion on `p`.
///
/// # Panics
///
/// With `SSC_DEBUG_VALIDATE=1`, panics if any link invariant breaks.
pub fn run(p: LinkedPattern, mode: Mode) -> VerifyOutcome {
    let config = RunConfig::from_env();
    let mut v = Verifier::with_config(p, mode, config);
    while v.step().is_some() {}
    if let Some(bad) = v.violations().first() {
        panic!("link invariant broken: {bad:?}");
    }
    v.finish()
}

/// Runs `mode` under an explicit configuration. Violations found with
/// `config.validate` are returned next to the outcome.
pub fn run_with(
    p: LinkedPattern,
    mode: Mode,
    config: RunConfig,
) -> (VerifyOutcome, Vec<StepViolation>) {
    let mut v = Verifier::with_config(p, mode, config);
    while v.step().is_some() {}
    let violations = std::mem::take(&mut v.violations);
    (v.finish(), violations)
}

/// Verdicts of both runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SscReport {
    pub ssc: bool,
    pub ssc_lambda0: bool,
    pub ssc_nonzero: bool,
    pub zero: VerifyOutcome,
    pub nonzero: VerifyOutcome,
}

/// Decides strong structural controllability of the `n x (n + r)` pattern `x`
/// (first `n` columns `A`, the rest `B`) by two independent runs.
pub fn is_ssc(x: &CcsPattern) -> Result<SscReport, PatternError> {
    is_ssc_with(x, RunConfig::from_env())
}

pub fn is_ssc_with(x: &CcsPattern, config: RunConfig) -> Result<SscReport, PatternError> {
    let run_mode = |mode| -> Result<VerifyOutcome, PatternError> {
        let (outcome, violations) = run_with(LinkedPattern::build(x)?, mode, config);
        if let Some(bad) = violations.first() {
            panic!("link invariant broken: {bad:?}");
        }
        Ok(outcome)
    };
    let zero = run_mode(Mode::Zero)?;
    let nonzero = run_mode(Mode::NonZero)?;
    Ok(SscReport {
        ssc: zero.is_empty_witness() && nonzero.is_empty_witness(),
        ssc_lambda0: zero.is_empty_witness(),
        ssc_nonzero: nonzero.is_empty_witness(),
        zero,
        nonzero,
    })
}

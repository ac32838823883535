//! Runtime scaling harness: generate controllable-for-`λ = 0` patterns over a
//! parameter grid, time both runs, and emit CSV rows.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::generate::{generate, GenError, GenSpec, Requirement, Sampler};
use crate::pattern::{build_ccs, CcsPattern, LinkedPattern};
use crate::verifier::{run, Mode, VerifyOutcome};

pub const CSV_HEADER: &str = "n,r,nu,seed,L,time_ns,ops,removals,verdict";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The run ended with an empty witness.
    SscPart,
    Witness,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SscPart => "ssc-part",
            Verdict::Witness => "witness",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ssc-part" => Ok(Verdict::SscPart),
            "witness" => Ok(Verdict::Witness),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub n: usize,
    pub r: usize,
    pub nu: usize,
    pub seed: u64,
    pub mode: Mode,
    /// Median over the timed repeats.
    pub time_ns: u64,
    pub ops: u64,
    pub removals: usize,
    pub verdict: Verdict,
}

impl BenchRecord {
    pub fn size(&self) -> usize {
        self.n + self.r + self.nu
    }
}

#[derive(Debug, Clone)]
pub struct BenchGrid {
    pub ns: Vec<usize>,
    pub rs: Vec<usize>,
    pub nus: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Timed repeats per cell and mode, after one discarded warm-up run.
    pub repeats: usize,
    pub sampler: Sampler,
    pub max_attempts: usize,
}

impl BenchGrid {
    pub fn new(ns: Vec<usize>, rs: Vec<usize>, nus: Vec<usize>, seeds: Vec<u64>) -> Self {
        Self {
            ns,
            rs,
            nus,
            seeds,
            repeats: 5,
            sampler: Sampler::Planted,
            max_attempts: 100,
        }
    }
}

#[derive(Debug, Error)]
#[error("cell n={n} r={r} nu={nu} seed={seed}: {source}")]
pub struct BenchError {
    pub n: usize,
    pub r: usize,
    pub nu: usize,
    pub seed: u64,
    #[source]
    pub source: GenError,
}

/// Times one run on a freshly built linked pattern. The build itself is not
/// timed but its work is part of the reported ops.
fn time_once(x: &CcsPattern, mode: Mode) -> (u64, VerifyOutcome) {
    let p = LinkedPattern::build(x).expect("square state block");
    let start = Instant::now();
    let out = run(p, mode);
    (start.elapsed().as_nanos() as u64, out)
}

/// Builds the linked pattern and runs `mode` `repeats` times after a warm-up.
/// Returns the median wall time and the outcome of the last run.
pub fn time_mode(x: &CcsPattern, mode: Mode, repeats: usize) -> (u64, VerifyOutcome) {
    let (_, mut last) = time_once(x, mode);
    let mut times = Vec::with_capacity(repeats.max(1));
    for _ in 0..repeats.max(1) {
        let (t, out) = time_once(x, mode);
        times.push(t);
        last = out;
    }
    (median_u64(&mut times), last)
}

/// Runs every `(n, r, nu, seed)` cell of the grid, emitting a row for `L = 0`
/// then `L = 1` per cell in that nesting order.
///
/// All cells are generated first. Each timed round then visits every cell
/// once, so slow drift in machine speed spreads over the whole grid instead
/// of landing on a few cells.
pub fn run_bench(grid: &BenchGrid) -> Result<Vec<BenchRecord>, BenchError> {
    let mut cells = Vec::new();
    for &n in &grid.ns {
        for &r in &grid.rs {
            for &nu in &grid.nus {
                for &seed in &grid.seeds {
                    let spec = GenSpec {
                        require: Requirement::SscLambda0,
                        max_attempts: grid.max_attempts,
                        sampler: grid.sampler,
                        ..GenSpec::new(n, r, nu, seed)
                    };
                    let generated = generate(&spec).map_err(|source| BenchError {
                        n,
                        r,
                        nu,
                        seed,
                        source,
                    })?;
                    let x = build_ccs(&generated.triplets).expect("generator output is valid");
                    cells.push(((n, r, nu, seed), x));
                }
            }
        }
    }

    let runs: Vec<(usize, Mode)> = (0..cells.len())
        .flat_map(|k| Mode::BOTH.map(|mode| (k, mode)))
        .collect();
    let mut outcomes: Vec<VerifyOutcome> = runs
        .iter()
        .map(|&(k, mode)| time_once(&cells[k].1, mode).1)
        .collect();
    let mut times = vec![Vec::with_capacity(grid.repeats.max(1)); runs.len()];
    for _ in 0..grid.repeats.max(1) {
        for (slot, &(k, mode)) in runs.iter().enumerate() {
            let (t, out) = time_once(&cells[k].1, mode);
            times[slot].push(t);
            outcomes[slot] = out;
        }
    }

    Ok(runs
        .iter()
        .zip(outcomes)
        .zip(&mut times)
        .map(|((&(k, mode), out), t)| {
            let (n, r, nu, seed) = cells[k].0;
            BenchRecord {
                n,
                r,
                nu,
                seed,
                mode,
                time_ns: median_u64(t),
                ops: out.ops,
                removals: out.removals,
                verdict: if out.is_empty_witness() {
                    Verdict::SscPart
                } else {
                    Verdict::Witness
                },
            }
        })
        .collect())
}

pub fn write_csv<W: Write>(mut out: W, rows: &[BenchRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.n,
            row.r,
            row.nu,
            row.seed,
            row.mode.level(),
            row.time_ns,
            row.ops,
            row.removals,
            row.verdict
        )?;
    }
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(format!("expected 9 fields in {line:?}"));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|e| format!("{s:?}: {e}"));
            let level = num(f[4])? as u8;
            Ok(BenchRecord {
                n: num(f[0])? as usize,
                r: num(f[1])? as usize,
                nu: num(f[2])? as usize,
                seed: num(f[3])?,
                mode: Mode::from_level(level).ok_or_else(|| format!("bad L {level}"))?,
                time_ns: num(f[5])?,
                ops: num(f[6])?,
                removals: num(f[7])? as usize,
                verdict: f[8].parse()?,
            })
        })
        .collect()
}

/// Ordinary least-squares line with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// # Panics
///
/// Panics if fewer than two points are given or the lengths differ.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points");
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}

pub fn median_u64(v: &mut [u64]) -> u64 {
    assert!(!v.is_empty());
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2
    }
}

pub fn median_f64(v: &mut [f64]) -> f64 {
    assert!(!v.is_empty());
    v.sort_unstable_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fits_perfectly() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        let fit = fit_linear(&xs, &ys);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_fit_r_squared() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 0.0, 3.0, 2.0];
        let fit = fit_linear(&xs, &ys);
        // sxx = 5, sxy = 3, slope = 0.6, intercept = 0.6,
        // residuals 0.4, -1.2, 1.2, -0.4 -> sse = 3.2, syy = 5, r2 = 0.36.
        assert!((fit.slope - 0.6).abs() < 1e-12);
        assert!((fit.intercept - 0.6).abs() < 1e-12);
        assert!((fit.r_squared - 0.36).abs() < 1e-12);
    }

    #[test]
    fn medians() {
        assert_eq!(median_u64(&mut [5, 1, 3]), 3);
        assert_eq!(median_u64(&mut [4, 1, 3, 2]), 2);
        assert_eq!(median_f64(&mut [2.0, 1.0]), 1.5);
    }

    #[test]
    fn single_cell_gives_two_rows() {
        let grid = BenchGrid {
            repeats: 1,
            ..BenchGrid::new(vec![20], vec![5], vec![60], vec![1])
        };
        let rows = run_bench(&grid).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].mode, Mode::Zero);
        assert_eq!(rows[0].verdict, Verdict::SscPart);
        assert_eq!(rows[0].removals, 20);
        assert_eq!(rows[1].mode, Mode::NonZero);
    }

    #[test]
    fn csv_round_trip() {
        let grid = BenchGrid {
            repeats: 1,
            ..BenchGrid::new(vec![10, 12], vec![2], vec![30], vec![1, 2])
        };
        let rows = run_bench(&grid).unwrap();
        assert_eq!(rows.len(), 8);
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(parse_csv(&text).unwrap(), rows);
    }

    #[test]
    fn failed_generation_names_the_cell() {
        let grid = BenchGrid {
            sampler: Sampler::Uniform,
            max_attempts: 2,
            ..BenchGrid::new(vec![3], vec![0], vec![0], vec![7])
        };
        let err = run_bench(&grid).unwrap_err();
        assert_eq!((err.n, err.nu, err.seed), (3, 0, 7));
    }
}

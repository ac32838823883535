//! Matrix Market `coordinate pattern general` reading and writing.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::error::PatternError;
use crate::pattern::CcsPattern;

pub const HEADER: &str = "%%MatrixMarket matrix coordinate pattern general";

#[derive(Debug, Error)]
pub enum MtxError {
    #[error("cannot access {path}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("read error: {0}")]
    Read(#[from] io::Error),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported Matrix Market variant: {0}")]
    Unsupported(String),
    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("header announces {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("state matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("input matrix has {b_rows} rows but the state matrix has {a_rows}")]
    RowMismatch { a_rows: usize, b_rows: usize },
    #[error("state dimension {state_dim} does not fit a {nrows}x{ncols} pattern")]
    BadStateDim {
        state_dim: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// Raw contents of a pattern file, 1-based, entries in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtxPattern {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(usize, usize)>,
}

impl MtxPattern {
    pub fn from_ccs(x: &CcsPattern) -> Self {
        Self {
            nrows: x.nrows(),
            ncols: x.ncols(),
            entries: x.positions().collect(),
        }
    }

    pub fn to_ccs(&self) -> Result<CcsPattern, PatternError> {
        CcsPattern::from_entries(self.nrows, self.ncols, self.entries.iter().copied())
    }
}

/// A pair `(A, B)` ready for verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedPattern {
    /// `n x (n + r)` pattern, `A` columns first.
    pub pattern: CcsPattern,
    pub n: usize,
    pub r: usize,
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, MtxError> {
    let tok = tok.ok_or_else(|| MtxError::MalformedLine {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| MtxError::MalformedLine {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

pub fn read_pattern<R: BufRead>(reader: R) -> Result<MtxPattern, MtxError> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(MtxError::MalformedHeader("empty input".into())),
    };
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(MtxError::MalformedHeader(header));
    }
    if tokens.len() != 5 {
        return Err(MtxError::MalformedHeader(header));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(MtxError::Unsupported(format!(
            "{} {}",
            tokens[1], tokens[2]
        )));
    }
    if tokens[3] != "pattern" {
        return Err(MtxError::Unsupported(format!("field {}", tokens[3])));
    }
    if tokens[4] != "general" {
        return Err(MtxError::Unsupported(format!("symmetry {}", tokens[4])));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let mut tok = text.split_whitespace();
        match size {
            None => {
                let nrows = parse_usize(tok.next(), lineno, "row count")?;
                let ncols = parse_usize(tok.next(), lineno, "column count")?;
                let nnz = parse_usize(tok.next(), lineno, "entry count")?;
                if tok.next().is_some() {
                    return Err(MtxError::MalformedLine {
                        line: lineno,
                        msg: "trailing data on size line".into(),
                    });
                }
                entries.reserve(nnz);
                size = Some((nrows, ncols, nnz));
            }
            Some(_) => {
                let i = parse_usize(tok.next(), lineno, "row index")?;
                let j = parse_usize(tok.next(), lineno, "column index")?;
                if tok.next().is_some() {
                    return Err(MtxError::MalformedLine {
                        line: lineno,
                        msg: "pattern entries carry no value".into(),
                    });
                }
                entries.push((i, j));
            }
        }
    }
    let (nrows, ncols, nnz) =
        size.ok_or_else(|| MtxError::MalformedHeader("missing size line".into()))?;
    if entries.len() != nnz {
        return Err(MtxError::EntryCount {
            expected: nnz,
            found: entries.len(),
        });
    }
    Ok(MtxPattern {
        nrows,
        ncols,
        entries,
    })
}

pub fn read_pattern_file(path: &Path) -> Result<MtxPattern, MtxError> {
    let file = File::open(path).map_err(|source| MtxError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_pattern(BufReader::new(file))
}

pub fn write_pattern<W: Write>(
    mut out: W,
    nrows: usize,
    ncols: usize,
    entries: &[(usize, usize)],
) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    writeln!(out, "{nrows} {ncols} {}", entries.len())?;
    for (i, j) in entries {
        writeln!(out, "{i} {j}")?;
    }
    Ok(())
}

pub fn write_pattern_file(path: &Path, m: &MtxPattern) -> Result<(), MtxError> {
    let wrap = |source| MtxError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = io::BufWriter::new(File::create(path).map_err(wrap)?);
    write_pattern(&mut out, m.nrows, m.ncols, &m.entries).map_err(wrap)?;
    out.flush().map_err(wrap)
}

/// Joins an `n x n` state pattern and an optional `n x r` input pattern.
/// Triplet order is `A`'s file order followed by `B`'s.
pub fn combine(a: &MtxPattern, b: Option<&MtxPattern>) -> Result<LoadedPattern, MtxError> {
    if a.nrows != a.ncols {
        return Err(MtxError::NotSquare {
            nrows: a.nrows,
            ncols: a.ncols,
        });
    }
    let n = a.nrows;
    let (r, b_entries) = match b {
        Some(b) if b.nrows != n => {
            return Err(MtxError::RowMismatch {
                a_rows: n,
                b_rows: b.nrows,
            })
        }
        Some(b) => (b.ncols, b.entries.as_slice()),
        None => (0, &[][..]),
    };
    // Range-check B before shifting its columns so errors name B's own indices.
    if let Some(&(i, j)) = b_entries
        .iter()
        .find(|&&(i, j)| i == 0 || i > n || j == 0 || j > r)
    {
        return Err(PatternError::IndexOutOfRange {
            row: i,
            col: j,
            nrows: n,
            ncols: r,
        }
        .into());
    }
    let entries = a
        .entries
        .iter()
        .copied()
        .chain(b_entries.iter().map(|&(i, j)| (i, j + n)));
    let pattern = CcsPattern::from_entries(n, n + r, entries)?;
    Ok(LoadedPattern { pattern, n, r })
}

/// Splits a combined `n x (n + r)` pattern at `state_dim`.
pub fn split_combined(m: &MtxPattern, state_dim: usize) -> Result<LoadedPattern, MtxError> {
    if m.nrows != state_dim || m.ncols < state_dim {
        return Err(MtxError::BadStateDim {
            state_dim,
            nrows: m.nrows,
            ncols: m.ncols,
        });
    }
    let pattern = m.to_ccs()?;
    Ok(LoadedPattern {
        pattern,
        n: state_dim,
        r: m.ncols - state_dim,
    })
}

/// Reads `A` and, if given, `B` from separate files.
pub fn load_pair(a: &Path, b: Option<&Path>) -> Result<LoadedPattern, MtxError> {
    let a = read_pattern_file(a)?;
    let b = b.map(read_pattern_file).transpose()?;
    combine(&a, b.as_ref())
}

/// Reads a combined `n x (n + r)` file.
pub fn load_combined(path: &Path, state_dim: usize) -> Result<LoadedPattern, MtxError> {
    split_combined(&read_pattern_file(path)?, state_dim)
}

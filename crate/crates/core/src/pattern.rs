//! Compressed sparse representations of a structural matrix `X = (A, B)`.
//!
//! A structural matrix only records which entries are nonzero (`*`). The
//! verifier needs three views of the same pattern:
//!
//! * the column-major compressed form (`row_idx`, `col_ptr`),
//! * the row-major compressed form, i.e. the compressed columns of the
//!   transpose (`col_idx`, `row_ptr`),
//! * two link arrays mapping each stored entry between the two orders
//!   (`col_to_row`, `row_to_col`), plus per-column active counts.
//!
//! Storage is 0-based. Every constructor taking coordinates and every
//! snapshot or report meant for people uses 1-based indices, matching the
//! Matrix Market convention.

use std::fmt;

use crate::error::PatternError;
use crate::index_sets::MembershipFlags;

/// Coordinate list of the `*`-entries of `(A, B)`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTriplets {
    /// Number of states (rows of `A` and `B`, columns of `A`).
    pub n: usize,
    /// Number of input columns (columns of `B`).
    pub r: usize,
    /// `(row, column)` pairs, row in `1..=n`, column in `1..=n + r`.
    pub entries: Vec<(usize, usize)>,
}

impl PatternTriplets {
    pub fn new(n: usize, r: usize) -> Self {
        Self {
            n,
            r,
            entries: Vec::new(),
        }
    }

    pub fn with_entries(n: usize, r: usize, entries: Vec<(usize, usize)>) -> Self {
        Self { n, r, entries }
    }

    pub fn push(&mut self, row: usize, col: usize) {
        self.entries.push((row, col));
    }

    pub fn ncols(&self) -> usize {
        self.n + self.r
    }

    /// Number of `*`-entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

/// Compressed column storage of a structural `nrows x ncols` pattern.
///
/// Column `j` holds the rows `row_idx[col_ptr[j]..col_ptr[j + 1]]`, all
/// distinct. The order inside a column is not canonical; constructors keep
/// the order in which entries were supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcsPattern {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
}

impl CcsPattern {
    /// Builds the column-compressed form from 1-based coordinates.
    ///
    /// Entries are bucketed by column with a stable counting sort, so the
    /// order of rows within a column is the order of appearance in `entries`.
    pub fn from_entries<I>(nrows: usize, ncols: usize, entries: I) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = (usize, usize)>,
        I::IntoIter: Clone,
    {
        let entries = entries.into_iter();
        let mut col_ptr = vec![0usize; ncols + 1];
        for (i, j) in entries.clone() {
            if i == 0 || i > nrows || j == 0 || j > ncols {
                return Err(PatternError::IndexOutOfRange {
                    row: i,
                    col: j,
                    nrows,
                    ncols,
                });
            }
            col_ptr[j] += 1;
        }
        for j in 0..ncols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let nnz = col_ptr[ncols];
        let mut next = col_ptr[..ncols].to_vec();
        let mut row_idx = vec![0usize; nnz];
        for (i, j) in entries {
            let slot = &mut next[j - 1];
            row_idx[*slot] = i - 1;
            *slot += 1;
        }

        // One stamp array detects duplicates in a single pass over the columns.
        let mut seen = vec![usize::MAX; nrows];
        for j in 0..ncols {
            for &i in &row_idx[col_ptr[j]..col_ptr[j + 1]] {
                if seen[i] == j {
                    return Err(PatternError::DuplicateEntry(i + 1, j + 1));
                }
                seen[i] = j;
            }
        }

        Ok(Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
        })
    }

    /// Builds the `n x (n + r)` pattern of `(A, B)` from its triplets.
    pub fn from_triplets(t: &PatternTriplets) -> Result<Self, PatternError> {
        Self::from_entries(t.n, t.ncols(), t.entries.iter().copied())
    }

    /// Wraps 0-based compressed arrays after checking every invariant.
    pub fn from_parts(
        nrows: usize,
        ncols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
    ) -> Result<Self, PatternError> {
        let bad = |msg: String| Err(PatternError::Malformed(msg));
        if col_ptr.len() != ncols + 1 {
            return bad(format!(
                "column pointer has length {}, expected {}",
                col_ptr.len(),
                ncols + 1
            ));
        }
        if col_ptr[0] != 0 || col_ptr[ncols] != row_idx.len() {
            return bad("column pointer does not span the row index array".into());
        }
        if col_ptr.windows(2).any(|w| w[0] > w[1]) {
            return bad("column pointer is decreasing".into());
        }
        let mut seen = vec![usize::MAX; nrows];
        for j in 0..ncols {
            for &i in &row_idx[col_ptr[j]..col_ptr[j + 1]] {
                if i >= nrows {
                    return Err(PatternError::IndexOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        nrows,
                        ncols,
                    });
                }
                if seen[i] == j {
                    return Err(PatternError::DuplicateEntry(i + 1, j + 1));
                }
                seen[i] = j;
            }
        }
        Ok(Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// 0-based column offsets, length `ncols + 1`.
    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    /// 0-based row indices in column-major order.
    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    /// 0-based rows of the 0-based column `j`.
    pub fn column(&self, j: usize) -> &[usize] {
        &self.row_idx[self.col_ptr[j]..self.col_ptr[j + 1]]
    }

    /// Row indices as 1-based values.
    pub fn row_idx_one_based(&self) -> Vec<usize> {
        self.row_idx.iter().map(|&i| i + 1).collect()
    }

    /// Column offsets as 1-based positions.
    pub fn col_ptr_one_based(&self) -> Vec<usize> {
        self.col_ptr.iter().map(|&p| p + 1).collect()
    }

    /// 1-based `(row, column)` positions in storage order.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ncols).flat_map(move |j| self.column(j).iter().map(move |&i| (i + 1, j + 1)))
    }

    /// Transpose by a single column-major scan.
    ///
    /// Within each column of the result (row of `self`) the indices come out
    /// in increasing order. Runs in `O(nrows + ncols + nnz)`.
    pub fn transpose(&self) -> CcsPattern {
        let t = transpose_scan(self.nrows, self.ncols, &self.col_ptr, &self.row_idx);
        CcsPattern {
            nrows: self.ncols,
            ncols: self.nrows,
            col_ptr: t.ptr,
            row_idx: t.idx,
        }
    }

    /// Concatenates the columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &CcsPattern) -> Result<CcsPattern, PatternError> {
        if self.nrows != other.nrows {
            return Err(PatternError::Malformed(format!(
                "row counts differ: {} vs {}",
                self.nrows, other.nrows
            )));
        }
        let offset = self.nnz();
        let mut col_ptr = self.col_ptr.clone();
        col_ptr.extend(other.col_ptr[1..].iter().map(|&p| p + offset));
        let mut row_idx = self.row_idx.clone();
        row_idx.extend_from_slice(&other.row_idx);
        Ok(CcsPattern {
            nrows: self.nrows,
            ncols: self.ncols + other.ncols,
            col_ptr,
            row_idx,
        })
    }
}

/// Builds the column-compressed pattern of `(A, B)`.
pub fn build_ccs(t: &PatternTriplets) -> Result<CcsPattern, PatternError> {
    CcsPattern::from_triplets(t)
}

struct Transposed {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    /// `map[k]` is the position in `idx` of the entry stored at `k` in the source.
    map: Vec<usize>,
    ops: u64,
}

fn transpose_scan(nrows: usize, ncols: usize, col_ptr: &[usize], row_idx: &[usize]) -> Transposed {
    let nnz = row_idx.len();
    let mut ptr = vec![0usize; nrows + 1];
    for &i in row_idx {
        ptr[i + 1] += 1;
    }
    for i in 0..nrows {
        ptr[i + 1] += ptr[i];
    }
    let mut next = ptr[..nrows].to_vec();
    let mut idx = vec![0usize; nnz];
    let mut map = vec![0usize; nnz];
    for j in 0..ncols {
        for k in col_ptr[j]..col_ptr[j + 1] {
            let i = row_idx[k];
            let l = next[i];
            next[i] += 1;
            idx[l] = j;
            map[k] = l;
        }
    }
    Transposed {
        ptr,
        idx,
        map,
        ops: (2 * nnz + 2 * nrows + ncols) as u64,
    }
}

/// Column-major and row-major views of `(A, B)` tied together by link arrays,
/// plus the per-column active counts maintained by the verifier.
///
/// Invariants, for the active row set `V` held by the caller:
///
/// * `col_to_row[k]` is a position in the row segment of `row_idx[k]`, and
///   `col_idx[col_to_row[k]]` is the column containing position `k`;
/// * symmetrically for `row_to_col`;
/// * `row_to_col[col_to_row[k]] == k` and `col_to_row[row_to_col[k]] == k`;
/// * the first `active_count[v]` slots of column `v` hold exactly `V ∩ rows(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkedPattern {
    n: usize,
    r: usize,
    row_idx: Vec<usize>,
    col_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    row_ptr: Vec<usize>,
    col_to_row: Vec<usize>,
    row_to_col: Vec<usize>,
    active_count: Vec<usize>,
    build_ops: u64,
}

impl LinkedPattern {
    /// Transposes `x`, links both views and sets every active count to the
    /// full column size (all rows active). `O(n + r + nnz)`.
    ///
    /// `x` must have at least as many columns as rows; the first `nrows`
    /// columns are `A`, the rest `B`.
    pub fn build(x: &CcsPattern) -> Result<Self, PatternError> {
        let n = x.nrows();
        if x.ncols() < n {
            return Err(PatternError::TooFewColumns {
                nrows: n,
                ncols: x.ncols(),
            });
        }
        let m = x.ncols();
        let t = transpose_scan(n, m, &x.col_ptr, &x.row_idx);
        // Inverting the scan map is the symmetric scan of the transpose; it
        // stays correct when rows inside a column are not sorted.
        let mut row_to_col = vec![0usize; x.nnz()];
        for (k, &l) in t.map.iter().enumerate() {
            row_to_col[l] = k;
        }
        let active_count: Vec<usize> = x.col_ptr.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            n,
            r: m - n,
            row_idx: x.row_idx.clone(),
            col_ptr: x.col_ptr.clone(),
            col_idx: t.idx,
            row_ptr: t.ptr,
            col_to_row: t.map,
            row_to_col,
            build_ops: t.ops + (x.nnz() + m) as u64,
            active_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn ncols(&self) -> usize {
        self.n + self.r
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_to_row(&self) -> &[usize] {
        &self.col_to_row
    }

    pub fn row_to_col(&self) -> &[usize] {
        &self.row_to_col
    }

    pub fn active_count(&self) -> &[usize] {
        &self.active_count
    }

    /// Basic steps spent in [`LinkedPattern::build`].
    pub fn build_ops(&self) -> u64 {
        self.build_ops
    }

    /// 1-based copy of every array, for printing and exact comparisons.
    pub fn snapshot(&self) -> LinkedSnapshot {
        let plus1 = |v: &[usize]| v.iter().map(|&x| x + 1).collect::<Vec<_>>();
        LinkedSnapshot {
            row_idx: plus1(&self.row_idx),
            col_ptr: plus1(&self.col_ptr),
            col_idx: plus1(&self.col_idx),
            row_ptr: plus1(&self.row_ptr),
            col_to_row: plus1(&self.col_to_row),
            row_to_col: plus1(&self.row_to_col),
            active_count: self.active_count.clone(),
        }
    }

    /// Removes row `w` from the active prefix of column `j`, where `l` is the
    /// row-major position of entry `(w, j)`. All three are 1-based.
    ///
    /// # Panics
    ///
    /// Panics if `l` is not a row-major position of row `w` holding column `j`.
    pub fn remove_active(&mut self, w: usize, j: usize, l: usize) {
        assert!((1..=self.n).contains(&w), "row {w} out of range");
        assert!(
            (self.row_ptr[w - 1] + 1..=self.row_ptr[w]).contains(&l),
            "position {l} is not in row {w}"
        );
        assert_eq!(
            self.col_idx[l - 1],
            j - 1,
            "position {l} does not hold column {j}"
        );
        self.remove_active_at(j - 1, l - 1);
    }

    /// Swap-to-end removal on 0-based indices. `O(1)`.
    #[inline]
    pub(crate) fn remove_active_at(&mut self, j: usize, l: usize) {
        let count = self.active_count[j];
        let pos = self.row_to_col[l];
        debug_assert_eq!(self.col_idx[l], j);
        debug_assert!(
            pos >= self.col_ptr[j] && pos < self.col_ptr[j] + count,
            "entry is not active in column {}",
            j + 1
        );
        if count == 0 {
            return;
        }
        let last = self.col_ptr[j] + count - 1;
        let k = self.col_to_row[last];
        if count > 1 {
            self.row_idx.swap(pos, last);
            self.col_to_row.swap(pos, last);
            self.row_to_col[l] = last;
            self.row_to_col[k] = pos;
        }
        self.active_count[j] = count - 1;
    }
}

/// 1-based dump of a [`LinkedPattern`]. Counts are plain numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkedSnapshot {
    pub row_idx: Vec<usize>,
    pub col_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub row_ptr: Vec<usize>,
    pub col_to_row: Vec<usize>,
    pub row_to_col: Vec<usize>,
    pub active_count: Vec<usize>,
}

/// A broken invariant found by [`validate_links`]. Positions and columns are
/// 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Array lengths or offsets are inconsistent; nothing else was checked.
    Structure(String),
    /// `col_to_row[k]` does not point into the row segment of `row_idx[k]`.
    ColToRowOutsideRow { position: usize },
    /// `col_idx[col_to_row[k]]` is not the column containing `k`.
    ColToRowWrongColumn { position: usize },
    /// `row_to_col[l]` does not point into the column segment of `col_idx[l]`.
    RowToColOutsideColumn { position: usize },
    /// `row_idx[row_to_col[l]]` is not the row containing `l`.
    RowToColWrongRow { position: usize },
    /// `row_to_col[col_to_row[k]] != k`.
    ColToRowNotInverse { position: usize },
    /// `col_to_row[row_to_col[l]] != l`.
    RowToColNotInverse { position: usize },
    /// `active_count[v]` exceeds the column size.
    ActiveCountOutOfRange { column: usize },
    /// The first `active_count[v]` slots of column `v` are not exactly its active rows.
    ActivePrefixMismatch { column: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Structure(msg) => write!(f, "structure: {msg}"),
            Violation::ColToRowOutsideRow { position } => {
                write!(f, "column-to-row link at {position} leaves its row")
            }
            Violation::ColToRowWrongColumn { position } => {
                write!(
                    f,
                    "column-to-row link at {position} lands on the wrong column"
                )
            }
            Violation::RowToColOutsideColumn { position } => {
                write!(f, "row-to-column link at {position} leaves its column")
            }
            Violation::RowToColWrongRow { position } => {
                write!(f, "row-to-column link at {position} lands on the wrong row")
            }
            Violation::ColToRowNotInverse { position } => {
                write!(
                    f,
                    "links are not inverse at column-major position {position}"
                )
            }
            Violation::RowToColNotInverse { position } => {
                write!(f, "links are not inverse at row-major position {position}")
            }
            Violation::ActiveCountOutOfRange { column } => {
                write!(f, "active count of column {column} exceeds its size")
            }
            Violation::ActivePrefixMismatch { column } => {
                write!(
                    f,
                    "active prefix of column {column} does not match the active rows"
                )
            }
        }
    }
}

/// Checks every link and active-count invariant of `p` against the active
/// rows flagged in `active` (indices `0..n`). Returns all violations found;
/// an empty list means the state is consistent.
pub fn validate_links(p: &LinkedPattern, active: &MembershipFlags) -> Vec<Violation> {
    validate_links_with(p, |row, _col| active.contains(row))
}

/// Same as [`validate_links`], with activity decided per `(row, column)`
/// (0-based). Needed while a row is only partly removed.
pub(crate) fn validate_links_with<F>(p: &LinkedPattern, is_active: F) -> Vec<Violation>
where
    F: Fn(usize, usize) -> bool,
{
    let mut out = Vec::new();
    let n = p.n;
    let m = p.ncols();
    let nnz = p.nnz();

    let ptr_ok = |ptr: &[usize], len: usize| {
        ptr.len() == len + 1
            && ptr[0] == 0
            && ptr[len] == nnz
            && ptr.windows(2).all(|w| w[0] <= w[1])
    };
    if !ptr_ok(&p.col_ptr, m)
        || !ptr_ok(&p.row_ptr, n)
        || p.col_idx.len() != nnz
        || p.col_to_row.len() != nnz
        || p.row_to_col.len() != nnz
        || p.active_count.len() != m
    {
        out.push(Violation::Structure("array lengths or offsets".into()));
        return out;
    }
    if p.row_idx.iter().any(|&i| i >= n) || p.col_idx.iter().any(|&j| j >= m) {
        out.push(Violation::Structure("index value out of range".into()));
        return out;
    }

    for j in 0..m {
        for k in p.col_ptr[j]..p.col_ptr[j + 1] {
            let l = p.col_to_row[k];
            let i = p.row_idx[k];
            if l >= nnz || l < p.row_ptr[i] || l >= p.row_ptr[i + 1] {
                out.push(Violation::ColToRowOutsideRow { position: k + 1 });
                continue;
            }
            if p.col_idx[l] != j {
                out.push(Violation::ColToRowWrongColumn { position: k + 1 });
            }
            if p.row_to_col.get(l) != Some(&k) {
                out.push(Violation::ColToRowNotInverse { position: k + 1 });
            }
        }
    }
    for i in 0..n {
        for l in p.row_ptr[i]..p.row_ptr[i + 1] {
            let k = p.row_to_col[l];
            let j = p.col_idx[l];
            if k >= nnz || k < p.col_ptr[j] || k >= p.col_ptr[j + 1] {
                out.push(Violation::RowToColOutsideColumn { position: l + 1 });
                continue;
            }
            if p.row_idx[k] != i {
                out.push(Violation::RowToColWrongRow { position: l + 1 });
            }
            if p.col_to_row.get(k) != Some(&l) {
                out.push(Violation::RowToColNotInverse { position: l + 1 });
            }
        }
    }

    for v in 0..m {
        let start = p.col_ptr[v];
        let end = p.col_ptr[v + 1];
        let count = p.active_count[v];
        if count > end - start {
            out.push(Violation::ActiveCountOutOfRange { column: v + 1 });
            continue;
        }
        // Rows in a column are distinct, so an all-active prefix followed by
        // an all-inactive suffix is exactly the active row set.
        let prefix_ok = p.row_idx[start..start + count]
            .iter()
            .all(|&i| is_active(i, v));
        let suffix_ok = p.row_idx[start + count..end]
            .iter()
            .all(|&i| !is_active(i, v));
        if !prefix_ok || !suffix_ok {
            out.push(Violation::ActivePrefixMismatch { column: v + 1 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Six-state example with two inputs; entries listed column by column so
    /// the stored row order is (3,5,2,1,6,4,2,3,6).
    fn six_state() -> PatternTriplets {
        PatternTriplets::with_entries(
            6,
            2,
            vec![
                (3, 1),
                (5, 1),
                (2, 2),
                (1, 4),
                (6, 4),
                (4, 6),
                (2, 7),
                (3, 7),
                (6, 8),
            ],
        )
    }

    #[test]
    fn ccs_of_six_state_example() {
        let x = build_ccs(&six_state()).unwrap();
        assert_eq!(x.row_idx_one_based(), vec![3, 5, 2, 1, 6, 4, 2, 3, 6]);
        assert_eq!(x.col_ptr_one_based(), vec![1, 3, 4, 4, 6, 6, 7, 9, 10]);
    }

    #[test]
    fn ccs_keeps_order_of_appearance() {
        let mut t = six_state();
        t.entries.swap(0, 1);
        let x = build_ccs(&t).unwrap();
        assert_eq!(&x.row_idx_one_based()[..2], &[5, 3]);
    }

    #[test]
    fn ccs_of_empty_pattern() {
        let x = build_ccs(&PatternTriplets::new(1, 0)).unwrap();
        assert!(x.row_idx().is_empty());
        assert_eq!(x.col_ptr_one_based(), vec![1, 1]);
    }

    #[test]
    fn ccs_rejects_duplicates_and_out_of_range() {
        let t = PatternTriplets::with_entries(2, 1, vec![(1, 1), (2, 3), (1, 1)]);
        assert_eq!(build_ccs(&t), Err(PatternError::DuplicateEntry(1, 1)));
        let t = PatternTriplets::with_entries(2, 1, vec![(3, 1)]);
        assert!(matches!(
            build_ccs(&t),
            Err(PatternError::IndexOutOfRange { .. })
        ));
        let t = PatternTriplets::with_entries(2, 1, vec![(1, 4)]);
        assert!(matches!(
            build_ccs(&t),
            Err(PatternError::IndexOutOfRange { .. })
        ));
        let t = PatternTriplets::with_entries(2, 1, vec![(0, 1)]);
        assert!(matches!(
            build_ccs(&t),
            Err(PatternError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn transpose_of_six_state_example() {
        let x = build_ccs(&six_state()).unwrap();
        let t = x.transpose();
        assert_eq!(t.row_idx_one_based(), vec![4, 2, 7, 1, 7, 6, 1, 4, 8]);
        assert_eq!(t.col_ptr_one_based(), vec![1, 2, 4, 6, 7, 8, 10]);
        assert_eq!(t.nrows(), 8);
        assert_eq!(t.ncols(), 6);
    }

    #[test]
    fn transpose_singleton_is_itself() {
        let x = CcsPattern::from_entries(1, 1, [(1, 1)]).unwrap();
        assert_eq!(x.transpose(), x);
    }

    #[test]
    fn linked_six_state_example() {
        let x = build_ccs(&six_state()).unwrap();
        let p = LinkedPattern::build(&x).unwrap();
        let snap = p.snapshot();
        assert_eq!(snap.col_to_row, vec![4, 7, 2, 1, 8, 6, 3, 5, 9]);
        assert_eq!(snap.row_to_col, vec![4, 3, 7, 1, 8, 6, 2, 5, 9]);
        assert_eq!(snap.active_count, vec![2, 1, 0, 2, 0, 1, 2, 1]);
        assert_eq!(snap.col_idx, vec![4, 2, 7, 1, 7, 6, 1, 4, 8]);
        assert_eq!(snap.row_ptr, vec![1, 2, 4, 6, 7, 8, 10]);
        let all = MembershipFlags::full(8, 6);
        assert!(validate_links(&p, &all).is_empty());
    }

    #[test]
    fn linked_empty_pattern() {
        let x = build_ccs(&PatternTriplets::new(1, 0)).unwrap();
        let p = LinkedPattern::build(&x).unwrap();
        assert!(p.col_to_row().is_empty());
        assert!(p.row_to_col().is_empty());
        assert_eq!(p.active_count(), &[0]);
        assert!(validate_links(&p, &MembershipFlags::full(1, 1)).is_empty());
    }

    #[test]
    fn linked_rejects_too_few_columns() {
        let x = CcsPattern::from_entries(2, 1, [(1, 1)]).unwrap();
        assert!(matches!(
            LinkedPattern::build(&x),
            Err(PatternError::TooFewColumns { .. })
        ));
    }

    #[test]
    fn linking_handles_unsorted_columns() {
        let t = PatternTriplets::with_entries(3, 0, vec![(3, 1), (1, 1), (2, 1), (2, 2), (1, 3)]);
        let p = LinkedPattern::build(&build_ccs(&t).unwrap()).unwrap();
        assert!(validate_links(&p, &MembershipFlags::full(3, 3)).is_empty());
    }

    #[test]
    fn corrupted_link_is_reported() {
        let x = build_ccs(&six_state()).unwrap();
        let mut p = LinkedPattern::build(&x).unwrap();
        // Entry 3 is (2, 2); point it at the other slot of row 2.
        p.col_to_row[2] = 2;
        let v = validate_links(&p, &MembershipFlags::full(8, 6));
        assert!(
            v.contains(&Violation::ColToRowNotInverse { position: 3 }),
            "{v:?}"
        );
        assert!(
            v.contains(&Violation::RowToColNotInverse { position: 2 }),
            "{v:?}"
        );

        let mut p = LinkedPattern::build(&x).unwrap();
        p.col_to_row[3] = 1;
        let v = validate_links(&p, &MembershipFlags::full(8, 6));
        assert!(!v.is_empty());
    }

    #[test]
    fn remove_active_matches_worked_example() {
        let x = build_ccs(&six_state()).unwrap();
        let mut p = LinkedPattern::build(&x).unwrap();
        // Row 2 from column 7 via its row-major position 3.
        p.remove_active(2, 7, 3);
        let snap = p.snapshot();
        assert_eq!(snap.row_idx, vec![3, 5, 2, 1, 6, 4, 3, 2, 6]);
        assert_eq!(snap.col_to_row, vec![4, 7, 2, 1, 8, 6, 5, 3, 9]);
        assert_eq!(snap.row_to_col, vec![4, 3, 8, 1, 7, 6, 2, 5, 9]);
        assert_eq!(snap.active_count[6], 1);

        // Column 2 holds one active row: no swap, count drops to zero.
        p.remove_active(2, 2, 2);
        let after = p.snapshot();
        assert_eq!(after.row_idx, snap.row_idx);
        assert_eq!(after.active_count, vec![2, 0, 0, 2, 0, 1, 1, 1]);

        let mut active = MembershipFlags::full(8, 6);
        active.remove(1);
        assert!(validate_links(&p, &active).is_empty());
    }

    #[test]
    fn remove_active_self_swap() {
        let x = build_ccs(&six_state()).unwrap();
        let mut p = LinkedPattern::build(&x).unwrap();
        // Row 5 sits in the last active slot of column 1 (position 2).
        let before = p.snapshot();
        p.remove_active(5, 1, 7);
        let after = p.snapshot();
        assert_eq!(after.row_idx, before.row_idx);
        assert_eq!(after.col_to_row, before.col_to_row);
        assert_eq!(after.row_to_col, before.row_to_col);
        assert_eq!(after.active_count[0], 1);
    }

    #[test]
    #[should_panic]
    fn remove_active_rejects_wrong_position() {
        let x = build_ccs(&six_state()).unwrap();
        let mut p = LinkedPattern::build(&x).unwrap();
        p.remove_active(2, 7, 2);
    }

    #[test]
    fn build_ops_are_linear() {
        let x = build_ccs(&six_state()).unwrap();
        let p = LinkedPattern::build(&x).unwrap();
        let size = (p.n() + p.ncols() + p.nnz()) as u64;
        assert!(p.build_ops() <= 4 * size);
    }

    #[test]
    fn hstack_appends_columns() {
        let a = CcsPattern::from_entries(2, 2, [(1, 2), (2, 1)]).unwrap();
        let b = CcsPattern::from_entries(2, 1, [(2, 1)]).unwrap();
        let x = a.hstack(&b).unwrap();
        assert_eq!(
            x.positions().collect::<Vec<_>>(),
            vec![(2, 1), (1, 2), (2, 3)]
        );
    }

    #[test]
    fn from_parts_checks_invariants() {
        assert!(CcsPattern::from_parts(2, 1, vec![0, 2], vec![0, 1]).is_ok());
        assert!(CcsPattern::from_parts(2, 1, vec![0, 2], vec![0, 0]).is_err());
        assert!(CcsPattern::from_parts(2, 1, vec![0, 1], vec![0, 1]).is_err());
        assert!(CcsPattern::from_parts(2, 1, vec![0, 2], vec![0, 2]).is_err());
    }
}

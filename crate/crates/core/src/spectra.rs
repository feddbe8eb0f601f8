//! Exact linear algebra over characteristic vectors.
//!
//! All arithmetic is over `BigRational`; there is no tolerance anywhere.
//! The row classification depends on recognising entries that are exactly
//! `0`, `1` or `-1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{CrossPair, Family, SubsetMask};

/// Dense matrix of exact rationals. `BigRational` keeps every entry in
/// lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = RationalMatrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Rows must all have length `cols`; `cols` is explicit so that a
    /// matrix with no rows still knows its width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Structural(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        let n_rows = rows.len();
        Ok(RationalMatrix {
            rows: n_rows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        RationalMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[BigRational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, i: usize, by: &BigRational) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x *= by;
        }
    }

    /// `row[dst] -= factor * row[src]`.
    fn sub_row(&mut self, dst: usize, src: usize, factor: &BigRational) {
        for j in 0..self.cols {
            let x = self.get(src, j);
            if !x.is_zero() {
                let v = x * factor;
                self.data[dst * self.cols + j] -= v;
            }
        }
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::Structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other.get(k, j);
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        Ok(out)
    }

    /// Columns rearranged so that new column `p` is old column `order[p]`.
    pub fn select_columns(&self, order: &[usize]) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.rows, order.len());
        for i in 0..self.rows {
            for (p, &c) in order.iter().enumerate() {
                out.set(i, p, self.get(i, c).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        let order: Vec<usize> = (0..self.cols).collect();
        eliminate(self, &order, false).rank
    }

    /// Matrix entries as strings such as `"1"`, `"-1/2"`.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Reduced row echelon form with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonForm {
    /// `rank x cols`, columns in the input order. Zero rows are dropped.
    pub matrix: RationalMatrix,
    /// Pivot column of each row, in row order.
    pub pivot_cols: Vec<usize>,
    /// Column order placing the pivots first: position `p` holds original
    /// column `col_perm[p]`. The identity when no permutation was asked for.
    pub col_perm: Vec<usize>,
    pub rank: usize,
    /// Invertible `m x m` matrix of the row operations: `transform * input`
    /// is `matrix` stacked over `m - rank` zero rows.
    pub transform: RationalMatrix,
}

impl EchelonForm {
    /// `matrix` with its columns rearranged by `col_perm`.
    pub fn permuted(&self) -> RationalMatrix {
        self.matrix.select_columns(&self.col_perm)
    }

    /// `matrix` padded back to the input's row count.
    pub fn padded(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.transform.rows(), self.matrix.cols());
        for i in 0..self.rank {
            for j in 0..self.matrix.cols() {
                out.set(i, j, self.matrix.get(i, j).clone());
            }
        }
        out
    }
}

/// Gauss–Jordan elimination choosing pivots in the column order `order`.
///
/// `order` must be a permutation of the column indices. Pivots are the
/// first nonzero entry found scanning rows top-down. The returned
/// `col_perm` lists the pivot columns (row order) followed by the remaining
/// columns in `order` order.
pub fn rref_in_order(m: &RationalMatrix, order: &[usize]) -> Result<EchelonForm> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m.cols()).collect::<Vec<_>>() {
        return Err(Error::Precondition(
            "column order must be a permutation of the columns".into(),
        ));
    }
    Ok(eliminate(m, order, true))
}

/// Gauss–Jordan proper. Without `track` the transform is left empty.
fn eliminate(m: &RationalMatrix, order: &[usize], track: bool) -> EchelonForm {
    let mut work = m.clone();
    let mut ops = RationalMatrix::identity(if track { m.rows() } else { 0 });
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == work.rows() {
            break;
        }
        let Some(p) = (r..work.rows()).find(|&i| !work.get(i, c).is_zero()) else {
            continue;
        };
        work.swap_rows(r, p);
        let inv = work.get(r, c).recip();
        work.scale_row(r, &inv);
        if track {
            ops.swap_rows(r, p);
            ops.scale_row(r, &inv);
        }
        for i in 0..work.rows() {
            if i != r && !work.get(i, c).is_zero() {
                let f = work.get(i, c).clone();
                work.sub_row(i, r, &f);
                if track {
                    ops.sub_row(i, r, &f);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = r;
    let mut col_perm = pivots.clone();
    col_perm.extend(order.iter().copied().filter(|c| !pivots.contains(c)));
    let matrix = RationalMatrix {
        rows: rank,
        cols: work.cols,
        data: work.data[..rank * work.cols].to_vec(),
    };
    EchelonForm {
        matrix,
        pivot_cols: pivots,
        col_perm,
        rank,
        transform: ops,
    }
}

/// Exact Gauss–Jordan with leftmost pivots. With `allow_col_perm` the
/// recorded `col_perm` moves the pivots to a leading identity block;
/// otherwise it is the identity. The matrix itself is never permuted.
pub fn rref(m: &RationalMatrix, allow_col_perm: bool) -> EchelonForm {
    let order: Vec<usize> = (0..m.cols()).collect();
    let mut e = rref_in_order(m, &order).expect("natural order is a permutation");
    if !allow_col_perm {
        e.col_perm = order;
    }
    e
}

/// Echelon forms of `ma` and `mb` over one shared column order: `ma` is
/// reduced with leftmost pivots, `mb` with pivots drawn from the non-pivot
/// columns of `ma` first. Both results carry the shared order
/// `pivots(ma) ++ pivots(mb) ++ rest` as `col_perm`, so `ma` reads as
/// `(I_k | *)` and `mb` has its identity block right after it.
pub fn shared_echelon(ma: &RationalMatrix, mb: &RationalMatrix) -> Result<(EchelonForm, EchelonForm)> {
    if ma.cols() != mb.cols() {
        return Err(Error::Structural(format!(
            "column counts differ: {} vs {}",
            ma.cols(),
            mb.cols()
        )));
    }
    let mut ea = rref(ma, true);
    let mut order: Vec<usize> = (0..ma.cols()).filter(|c| !ea.pivot_cols.contains(c)).collect();
    order.extend(ea.pivot_cols.iter().copied());
    let mut eb = rref_in_order(mb, &order)?;
    let mut shared = ea.pivot_cols.clone();
    shared.extend(eb.pivot_cols.iter().copied());
    shared.extend((0..ma.cols()).filter(|c| !shared.contains(c)).collect::<Vec<_>>());
    ea.col_perm = shared.clone();
    eb.col_perm = shared;
    Ok((ea, eb))
}

/// Characteristic vectors of the members, one row each, in family order.
pub fn char_matrix(f: &Family) -> Result<RationalMatrix> {
    if f.is_empty() {
        return Err(Error::Precondition("char_matrix of an empty family".into()));
    }
    Ok(mask_rows(f.n(), f.iter()))
}

fn mask_rows(n: usize, masks: impl Iterator<Item = SubsetMask>) -> RationalMatrix {
    let rows: Vec<Vec<BigRational>> = masks
        .map(|m| {
            (1..=n)
                .map(|e| if m.contains(e) { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(n, rows).expect("rows have length n")
}

/// Rows `χ_B - χ_{B1}` for every `B ≠ B1` in `b`.
pub fn difference_matrix(b: &Family, b1: SubsetMask) -> RationalMatrix {
    let n = b.n();
    let base: Vec<BigRational> = (1..=n)
        .map(|e| if b1.contains(e) { BigRational::one() } else { BigRational::zero() })
        .collect();
    let rows: Vec<Vec<BigRational>> = b
        .iter()
        .filter(|&m| m != b1)
        .map(|m| {
            (1..=n)
                .map(|e| {
                    let v = if m.contains(e) { BigRational::one() } else { BigRational::zero() };
                    v - &base[e - 1]
                })
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(n, rows).expect("rows have length n")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanDims {
    /// Dimension of the span of the `A`-side characteristic vectors.
    pub k: usize,
    /// Dimension of the span of the `B`-side differences from `B1`.
    pub h: usize,
}

/// `k = rank(χ_A)`, `h = rank(χ_B - χ_{B1})` with `B1` the member of `B`
/// at `b1_index` in canonical order.
pub fn span_dims(p: &CrossPair, b1_index: usize) -> Result<SpanDims> {
    let b1 = *p.b().members().get(b1_index).ok_or_else(|| {
        Error::Precondition(format!(
            "B1 index {b1_index} out of range for |B| = {}",
            p.b().len()
        ))
    })?;
    let ma = char_matrix(p.a())?;
    Ok(SpanDims {
        k: ma.rank(),
        h: difference_matrix(p.b(), b1).rank(),
    })
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Every row of `ma` is orthogonal to every row of `mb`. A matrix without
/// rows is orthogonal to anything.
pub fn orthogonal(ma: &RationalMatrix, mb: &RationalMatrix) -> Result<bool> {
    if ma.rows() == 0 || mb.rows() == 0 {
        return Ok(true);
    }
    if ma.cols() != mb.cols() {
        return Err(Error::Structural(format!(
            "column counts differ: {} vs {}",
            ma.cols(),
            mb.cols()
        )));
    }
    Ok(ma
        .row_iter()
        .all(|x| mb.row_iter().all(|y| dot(x, y).is_zero())))
}

/// With `ma ~ (I_k | *)` and `mb ~ (* | I_h)` over one column order and
/// `k + h = n`: checks `ma[i][pivot_b(j)] = -mb[j][pivot_a(i)]` for all
/// `i, j`.
pub fn duality_check(ma: &EchelonForm, mb: &EchelonForm) -> Result<bool> {
    let n = ma.matrix.cols();
    if mb.matrix.cols() != n {
        return Err(Error::Precondition("echelon forms differ in width".into()));
    }
    if ma.rank + mb.rank != n {
        return Err(Error::Precondition(format!(
            "duality needs k + h = n, got {} + {} vs {n}",
            ma.rank, mb.rank
        )));
    }
    if ma.pivot_cols.iter().any(|c| mb.pivot_cols.contains(c)) {
        return Err(Error::Precondition(
            "pivot columns overlap; forms do not share a column order".into(),
        ));
    }
    for (i, &pa) in ma.pivot_cols.iter().enumerate() {
        for (j, &pb) in mb.pivot_cols.iter().enumerate() {
            if *ma.matrix.get(i, pb) != -mb.matrix.get(j, pa) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnStrategy {
    /// A column with the most nonzero entries, lowest index on ties.
    MaxColumn,
    /// The lowest-index column with at least two nonzero entries.
    FirstColumn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub column: usize,
    pub rows: Vec<usize>,
}

/// Partition of the rows into heavy-column rows `r`, leftover rows `s` that
/// are not `{0,±1}` vectors with a `-1`, and the structured rest `c`.
/// Indices are 0-based row and column numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowClassification {
    pub r: Vec<usize>,
    pub s: Vec<usize>,
    pub c: Vec<usize>,
    pub selection_log: Vec<Selection>,
}

fn nonzero_active(m: &RationalMatrix, col: usize, active: &[bool]) -> Vec<usize> {
    (0..m.rows())
        .filter(|&i| active[i] && !m.get(i, col).is_zero())
        .collect()
}

/// Entries all in `{0, 1, -1}` with at least one `-1`.
fn is_signed_unit_row(row: &[BigRational]) -> bool {
    let one = BigRational::one();
    let minus = -BigRational::one();
    row.iter().all(|x| x.is_zero() || *x == one || *x == minus) && row.contains(&minus)
}

fn finish(m: &RationalMatrix, active: Vec<bool>, log: Vec<Selection>) -> RowClassification {
    let mut r: Vec<usize> = log.iter().flat_map(|s| s.rows.iter().copied()).collect();
    r.sort_unstable();
    let (mut s, mut c) = (Vec::new(), Vec::new());
    for i in (0..m.rows()).filter(|&i| active[i]) {
        if is_signed_unit_row(m.row(i)) {
            c.push(i);
        } else {
            s.push(i);
        }
    }
    RowClassification {
        r,
        s,
        c,
        selection_log: log,
    }
}

/// Repeatedly pick a column with at least two nonzero entries among the
/// remaining rows and move those rows to `R`; then split the rest into
/// `S` and `C`.
pub fn classify_rows(m: &RationalMatrix, strategy: ColumnStrategy) -> RowClassification {
    let mut active = vec![true; m.rows()];
    let mut log = Vec::new();
    loop {
        let mut pick: Option<(usize, Vec<usize>)> = None;
        for col in 0..m.cols() {
            let rows = nonzero_active(m, col, &active);
            if rows.len() < 2 {
                continue;
            }
            let better = match &pick {
                None => true,
                Some((_, best)) => strategy == ColumnStrategy::MaxColumn && rows.len() > best.len(),
            };
            if better {
                pick = Some((col, rows));
                if strategy == ColumnStrategy::FirstColumn {
                    break;
                }
            }
        }
        let Some((column, rows)) = pick else { break };
        for &i in &rows {
            active[i] = false;
        }
        log.push(Selection { column, rows });
    }
    finish(m, active, log)
}

/// Re-run the selection process with a prescribed column sequence, as
/// recorded in a `selection_log`. Fails if a listed column has fewer than
/// two nonzero entries at its turn or heavy columns remain afterwards.
pub fn replay_selection(m: &RationalMatrix, columns: &[usize]) -> Result<RowClassification> {
    let mut active = vec![true; m.rows()];
    let mut log = Vec::new();
    for &column in columns {
        if column >= m.cols() {
            return Err(Error::Precondition(format!("column {column} out of range")));
        }
        let rows = nonzero_active(m, column, &active);
        if rows.len() < 2 {
            return Err(Error::Precondition(format!(
                "column {column} has {} nonzero entries at its turn",
                rows.len()
            )));
        }
        for &i in &rows {
            active[i] = false;
        }
        log.push(Selection { column, rows });
    }
    if (0..m.cols()).any(|c| nonzero_active(m, c, &active).len() >= 2) {
        return Err(Error::Precondition(
            "selection stopped while a heavy column remains".into(),
        ));
    }
    Ok(finish(m, active, log))
}

/// `2^rank(m)`: the number of `{0,1}` points a span of that dimension can
/// hold at most.
pub fn coefficient_bound(m: &RationalMatrix) -> BigUint {
    BigUint::one() << m.rank()
}

/// Everything the `analyze` report needs for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub ell: usize,
    pub k: usize,
    pub h: usize,
    pub k_plus_h: usize,
    /// `B1`, 1-based elements.
    pub b1: Vec<usize>,
    pub b1_index: usize,
    /// Pivot columns of `M_A`, 1-based.
    pub pivot_cols: Vec<usize>,
    pub r: usize,
    pub s: usize,
    pub c: usize,
    /// Column selections on `M_A`, 1-based columns and rows.
    pub selection_log: Vec<Selection>,
    /// `None` when `k + h != n` or the forms cannot share a column order.
    pub duality: Option<bool>,
    pub orthogonal: bool,
}

/// Span dimensions, echelon structure, row classification (max-column
/// strategy) and duality for a pair. `B1` defaults to the smallest member
/// of `B`.
pub fn analyze(p: &CrossPair, b1_index: Option<usize>) -> Result<Analysis> {
    let b1_index = b1_index.unwrap_or(0);
    let dims = span_dims(p, b1_index)?;
    let b1 = p.b().members()[b1_index];
    let ma = char_matrix(p.a())?;
    let mb = difference_matrix(p.b(), b1);
    let (ea, eb) = shared_echelon(&ma, &mb)?;
    let rows = classify_rows(&ea.matrix, ColumnStrategy::MaxColumn);
    let duality = if dims.k + dims.h == p.n() {
        duality_check(&ea, &eb).ok()
    } else {
        None
    };
    let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    Ok(Analysis {
        n: p.n(),
        ell: p.ell(),
        k: dims.k,
        h: dims.h,
        k_plus_h: dims.k + dims.h,
        b1: b1.elements().collect(),
        b1_index,
        pivot_cols: one_based(&ea.pivot_cols),
        r: rows.r.len(),
        s: rows.s.len(),
        c: rows.c.len(),
        selection_log: rows
            .selection_log
            .iter()
            .map(|s| Selection {
                column: s.column + 1,
                rows: one_based(&s.rows),
            })
            .collect(),
        duality,
        orthogonal: orthogonal(&ea.matrix, &mb)?,
    })
}

/// `{0,1}` points of `w + rowspace(m)` for a full-row-rank `m`.
///
/// Each row of the echelon form has an identity pivot, so a `{0,1}` point
/// fixes that row's coefficient to one of two values. All `2^rank`
/// coefficient choices are tried.
pub fn lattice_points(m: &RationalMatrix, w: SubsetMask) -> Result<Vec<SubsetMask>> {
    let e = rref(m, false);
    if e.rank != m.rows() {
        return Err(Error::Parameter(format!(
            "matrix of {} rows has rank {}",
            m.rows(),
            e.rank
        )));
    }
    let n = m.cols();
    if e.rank > 30 {
        return Err(Error::Parameter("rank too large to enumerate".into()));
    }
    let base: Vec<BigRational> = (1..=n)
        .map(|c| if w.contains(c) { BigRational::one() } else { BigRational::zero() })
        .collect();
    let one = BigRational::one();
    let mut out = Vec::new();
    'choice: for choice in 0u64..(1u64 << e.rank) {
        let mut v = base.clone();
        for i in 0..e.rank {
            // The pivot entry must land on the chosen bit.
            let bit = choice >> i & 1 == 1;
            let target = if bit { one.clone() } else { BigRational::zero() };
            let coef = target - &base[e.pivot_cols[i]];
            if coef.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                let a = e.matrix.get(i, j);
                if !a.is_zero() {
                    *x += a * &coef;
                }
            }
        }
        let mut bits = 0u32;
        for (j, x) in v.iter().enumerate() {
            if x.is_one() {
                bits |= 1 << j;
            } else if !x.is_zero() {
                continue 'choice;
            }
        }
        out.push(SubsetMask::raw(bits));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `true` if every entry is an integer.
pub fn is_integral(m: &RationalMatrix) -> bool {
    m.data.iter().all(|x| x.is_integer())
}

/// Largest absolute entry, used only for diagnostics.
pub fn max_abs(m: &RationalMatrix) -> BigRational {
    m.data
        .iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

//! Dense exact matrices with rank, reduced echelon form and null spaces.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("composite of consecutive differentials is nonzero")]
    CompositionNonzero,
}

/// Row-major matrix over a single field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<_> = self.row(r).iter().map(|x| alloc::format!("{x}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, field, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_entries(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch("entry count differs from rows*cols"));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(LinalgError::ShapeMismatch("entry from a different field"));
        }
        Ok(DenseMatrix { rows, cols, field, entries })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::ShapeMismatch("ragged rows"));
        }
        Self::from_entries(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix, convenient in tests and catalogs.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, data).expect("well-shaped integer matrix")
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        self.entries[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch("inner dimensions differ"));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * other.cols + c].add_product(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    acc.add_product(a, b);
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<DenseMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch("elementwise operands differ in shape"));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, field: self.field, entries })
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> DenseMatrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, field: self.field, entries }
    }

    pub fn neg(&self) -> DenseMatrix {
        let entries = self.entries.iter().map(|a| -a).collect();
        DenseMatrix { rows: self.rows, cols: self.cols, field: self.field, entries }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch("hstack row counts differ"));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        Ok(out)
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch("vstack column counts differ"));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DenseMatrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, entries })
    }

    /// Assemble from a grid of blocks; `None` blocks are zero. Row heights and
    /// column widths are given explicitly so empty blocks are unambiguous.
    pub fn from_blocks(field: Field, heights: &[usize], widths: &[usize], blocks: &[Vec<Option<&DenseMatrix>>]) -> Result<DenseMatrix, LinalgError> {
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut r0 = 0;
        for (bi, h) in heights.iter().enumerate() {
            let mut c0 = 0;
            for (bj, w) in widths.iter().enumerate() {
                if let Some(b) = blocks[bi][bj] {
                    if b.rows != *h || b.cols != *w {
                        return Err(LinalgError::ShapeMismatch("block does not fit its slot"));
                    }
                    for r in 0..*h {
                        for c in 0..*w {
                            out.set(r0 + r, c0 + c, b.get(r, c).clone());
                        }
                    }
                }
                c0 += w;
            }
            r0 += h;
        }
        Ok(out)
    }

    fn to_row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut rows = self.to_row_vecs();
        let pivots = eliminate(&mut rows, self.cols, true);
        let entries = rows.into_iter().flatten().collect();
        (DenseMatrix { rows: self.rows, cols: self.cols, field: self.field, entries }, pivots)
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            let mut rows = self.transpose().to_row_vecs();
            eliminate(&mut rows, self.rows, false).len()
        } else {
            let mut rows = self.to_row_vecs();
            eliminate(&mut rows, self.cols, false).len()
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right null space in canonical form: one vector per
    /// non-pivot column `f`, with a 1 in position `f`, zeros in the other free
    /// positions, and the negated echelon entries in pivot positions.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f);
            }
            basis.push(v);
        }
        basis
    }

    /// Canonical solution of `self * x = b` (free variables set to zero).
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut rows = self.to_row_vecs();
        for (row, x) in rows.iter_mut().zip(b) {
            row.push(x.clone());
        }
        let pivots = eliminate(&mut rows, self.cols + 1, true);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = rows[i][self.cols].clone();
        }
        Some(x)
    }
}

/// In-place Gauss-Jordan elimination over the first `width` columns. Returns
/// pivot columns; when `reduce` is set the result is in reduced echelon form,
/// otherwise only the pivot count is meaningful.
fn eliminate(rows: &mut [Vec<Scalar>], width: usize, reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..width {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next][col].inv().expect("nonzero pivot");
        if reduce {
            for x in rows[next][col..].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let support: Vec<usize> = (col..rows[next].len()).filter(|&c| !rows[next][c].is_zero()).collect();
        let pivot_row = rows[next].clone();
        let start = if reduce { 0 } else { next + 1 };
        for r in start..rows.len() {
            if r == next || rows[r][col].is_zero() {
                continue;
            }
            let factor = if reduce { rows[r][col].clone() } else { &rows[r][col] * &inv };
            for &c in &support {
                let delta = &factor * &pivot_row[c];
                rows[r][c] -= &delta;
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// `dim ker(d_out) - rank(d_in)`, after checking `d_out * d_in = 0`.
pub fn cohomology_dim(d_in: &DenseMatrix, d_out: &DenseMatrix) -> Result<usize, LinalgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinalgError::ShapeMismatch("differentials are not composable"));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(LinalgError::CompositionNonzero);
    }
    Ok(d_out.nullity() - d_in.rank())
}

/// Dimension of the span of the given vectors.
pub fn span_rank(field: Field, len: usize, vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    DenseMatrix::from_columns(field, len, vectors).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(DenseMatrix::identity(Q, 2).rank(), 2);
        assert_eq!(DenseMatrix::zeros(Q, 3, 4).rank(), 0);
        assert_eq!(DenseMatrix::from_i64(Q, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(DenseMatrix::identity(Q, 3).kernel_basis().is_empty());
        let z = DenseMatrix::zeros(Q, 2, 2).kernel_basis();
        assert_eq!(z, vec![v(&[1, 0]), v(&[0, 1])]);
        // x + y = 0: free column 1 gives (-1, 1).
        assert_eq!(DenseMatrix::from_i64(Q, &[&[1, 1]]).kernel_basis(), vec![v(&[-1, 1])]);
    }

    #[test]
    fn cohomology_examples() {
        let z_in = DenseMatrix::zeros(Q, 3, 2);
        let z_out = DenseMatrix::zeros(Q, 1, 3);
        assert_eq!(cohomology_dim(&z_in, &z_out), Ok(3));
        let id = DenseMatrix::identity(Q, 2);
        assert_eq!(cohomology_dim(&id, &DenseMatrix::zeros(Q, 1, 2)), Ok(0));
        let d_in = DenseMatrix::zeros(Q, 2, 0);
        let d_out = DenseMatrix::from_i64(Q, &[&[1, 1]]);
        assert_eq!(cohomology_dim(&d_in, &d_out), Ok(1));
        let bad = DenseMatrix::from_i64(Q, &[&[1], &[0]]);
        assert_eq!(cohomology_dim(&bad, &d_out), Err(LinalgError::CompositionNonzero));
    }

    #[test]
    fn rref_and_solve() {
        let m = DenseMatrix::from_i64(Q, &[&[2, 4, 2], &[1, 3, 0]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, DenseMatrix::from_i64(Q, &[&[1, 0, 3], &[0, 1, -1]]));
        let x = m.solve(&v(&[2, 1])).unwrap();
        assert_eq!(x, v(&[1, 0, 0]));
        assert_eq!(m.mul_vec(&x), v(&[2, 1]));
        let sing = DenseMatrix::from_i64(Q, &[&[1, 1], &[1, 1]]);
        assert!(sing.solve(&v(&[1, 2])).is_none());
    }

    #[test]
    fn blocks() {
        let a = DenseMatrix::identity(Q, 1);
        let b = DenseMatrix::from_i64(Q, &[&[5, 6]]);
        let m = DenseMatrix::from_blocks(Q, &[1, 1], &[1, 2], &[vec![Some(&a), None], vec![None, Some(&b)]]).unwrap();
        assert_eq!(m, DenseMatrix::from_i64(Q, &[&[1, 0, 0], &[0, 5, 6]]));
    }
}

use super::field::Field;
use super::sparse::{Accumulator, SparseVec};
use crate::error::{Error, Result};

/// An exact matrix stored column by column; column `j` is the image of the
/// `j`-th standard basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec<E>>,
}

impl<E: Clone> Matrix<E> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, ncols, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Matrix { nrows: n, ncols: n, cols: (0..n).map(|i| SparseVec::unit(f, i)).collect() }
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec<E>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|m| m < nrows)));
        Matrix { nrows, ncols: cols.len(), cols }
    }

    /// Row-major dense input.
    pub fn from_rows<F: Field<Elem = E>>(f: &F, rows: &[Vec<E>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !f.is_zero(v) {
                    cols[j].push((i, v.clone()));
                }
            }
        }
        Ok(Matrix { nrows, ncols, cols: cols.into_iter().map(SparseVec::from_sorted_unchecked).collect() })
    }

    pub fn from_i64_rows<F: Field<Elem = E>>(f: &F, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<E>> = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        Self::from_rows(f, &rows).expect("rectangular literal")
    }

    pub fn to_rows<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let mut rows = vec![vec![f.zero(); self.ncols]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                rows[*i][j] = v.clone();
            }
        }
        rows
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn col(&self, j: usize) -> &SparseVec<E> {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<E>] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec<E>> {
        self.cols
    }

    pub fn get<F: Field<Elem = E>>(&self, f: &F, i: usize, j: usize) -> E {
        self.cols[j].get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                rows[*i].push((j, v.clone()));
            }
        }
        Matrix {
            nrows: self.ncols,
            ncols: self.nrows,
            cols: rows.into_iter().map(SparseVec::from_sorted_unchecked).collect(),
        }
    }

    /// Rows of the matrix as sparse vectors.
    pub fn rows(&self) -> Vec<SparseVec<E>> {
        self.transpose().cols
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &SparseVec<E>) -> SparseVec<E> {
        let mut acc = Accumulator::new(f, self.nrows);
        self.mul_vec_with(f, v, &mut acc)
    }

    pub(crate) fn mul_vec_with<F: Field<Elem = E>>(
        &self,
        f: &F,
        v: &SparseVec<E>,
        acc: &mut Accumulator<E>,
    ) -> SparseVec<E> {
        for (j, a) in v.iter() {
            for (i, b) in self.cols[*j].iter() {
                acc.add_mul(f, *i, a, b);
            }
        }
        acc.drain(f)
    }

    pub fn mul_dense_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let sv = SparseVec::from_dense(f, v);
        self.mul_vec(f, &sv).to_dense(f, self.nrows)
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = Accumulator::new(f, self.nrows);
        let cols = other.cols.iter().map(|c| self.mul_vec_with(f, c, &mut acc)).collect();
        Ok(Matrix { nrows: self.nrows, ncols: other.ncols, cols })
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.add_scaled(f, &f.one(), other)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.add_scaled(f, &f.neg(&f.one()), other)
    }

    /// `self + a * other`
    pub fn add_scaled<F: Field<Elem = E>>(&self, f: &F, a: &E, other: &Self) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let cols = self.cols.iter().zip(&other.cols).map(|(x, y)| x.add_scaled(f, a, y)).collect();
        Ok(Matrix { nrows: self.nrows, ncols: self.ncols, cols })
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, a: &E) -> Self {
        Matrix { nrows: self.nrows, ncols: self.ncols, cols: self.cols.iter().map(|c| c.scale(f, a)).collect() }
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[&Matrix<E>]) -> Self {
        let nrows = blocks.iter().map(|b| b.nrows).sum();
        let mut cols = Vec::with_capacity(blocks.iter().map(|b| b.ncols).sum());
        let mut off = 0;
        for b in blocks {
            cols.extend(b.cols.iter().map(|c| c.shifted(off)));
            off += b.nrows;
        }
        Matrix { nrows, ncols: cols.len(), cols }
    }

    /// `n` copies of `self` on the diagonal.
    pub fn repeat_diag(&self, n: usize) -> Self {
        let mut cols = Vec::with_capacity(self.ncols * n);
        for k in 0..n {
            cols.extend(self.cols.iter().map(|c| c.shifted(k * self.nrows)));
        }
        Matrix { nrows: self.nrows * n, ncols: self.ncols * n, cols }
    }

    pub fn hstack(parts: &[&Matrix<E>]) -> Result<Self> {
        let nrows = parts.first().map_or(0, |p| p.nrows);
        if parts.iter().any(|p| p.nrows != nrows) {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let cols: Vec<_> = parts.iter().flat_map(|p| p.cols.iter().cloned()).collect();
        Ok(Matrix { nrows, ncols: cols.len(), cols })
    }

    pub fn vstack(parts: &[&Matrix<E>]) -> Result<Self> {
        let ncols = parts.first().map_or(0, |p| p.ncols);
        if parts.iter().any(|p| p.ncols != ncols) {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        let nrows = parts.iter().map(|p| p.nrows).sum();
        let mut cols: Vec<Vec<(usize, E)>> = vec![Vec::new(); ncols];
        let mut off = 0;
        for p in parts {
            for (j, c) in p.cols.iter().enumerate() {
                cols[j].extend(c.iter().map(|(i, v)| (i + off, v.clone())));
            }
            off += p.nrows;
        }
        Ok(Matrix { nrows, ncols, cols: cols.into_iter().map(SparseVec::from_sorted_unchecked).collect() })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix { nrows: self.nrows, ncols: idx.len(), cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    /// Rows `[start, start+len)` and columns `[cstart, cstart+clen)`.
    pub fn block(&self, start: usize, len: usize, cstart: usize, clen: usize) -> Self {
        Matrix {
            nrows: len,
            ncols: clen,
            cols: self.cols[cstart..cstart + clen].iter().map(|c| c.window(start, len)).collect(),
        }
    }

    /// Flattens row-major: entry `(i, j)` goes to index `i * ncols + j`.
    pub fn vectorize(&self) -> SparseVec<E> {
        let mut pairs = Vec::with_capacity(self.nnz());
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.iter() {
                pairs.push((i * self.ncols + j, v.clone()));
            }
        }
        pairs.sort_by_key(|(k, _)| *k);
        SparseVec::from_sorted_unchecked(pairs)
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn unvectorize(v: &SparseVec<E>, nrows: usize, ncols: usize) -> Self {
        let mut cols: Vec<Vec<(usize, E)>> = vec![Vec::new(); ncols];
        for (k, x) in v.iter() {
            cols[k % ncols].push((k / ncols, x.clone()));
        }
        Matrix { nrows, ncols, cols: cols.into_iter().map(SparseVec::from_sorted_unchecked).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::PrimeField;

    #[test]
    fn multiply_and_transpose() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_i64_rows(&f, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64_rows(&f, &[&[0, 1], &[1, 0]]);
        let ab = a.mul(&f, &b).unwrap();
        assert_eq!(ab, Matrix::from_i64_rows(&f, &[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose(), Matrix::from_i64_rows(&f, &[&[1, 3], &[2, 4]]));
    }

    #[test]
    fn shape_errors() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::<u32>::zeros(2, 3);
        assert!(a.mul(&f, &a).is_err());
        assert!(a.add(&f, &Matrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn vectorize_round_trip() {
        let f = PrimeField::new(11).unwrap();
        let a = Matrix::from_i64_rows(&f, &[&[1, 0, 2], &[0, 3, 0]]);
        let v = a.vectorize();
        assert_eq!(v.entries(), &[(0, 1), (2, 2), (4, 3)]);
        assert_eq!(Matrix::unvectorize(&v, 2, 3), a);
    }

    #[test]
    fn block_diag_and_stacks() {
        let f = PrimeField::new(5).unwrap();
        let a = Matrix::from_i64_rows(&f, &[&[1]]);
        let b = Matrix::from_i64_rows(&f, &[&[2, 3]]);
        let d = Matrix::block_diag(&[&a, &b]);
        assert_eq!(d, Matrix::from_i64_rows(&f, &[&[1, 0, 0], &[0, 2, 3]]));
        let v = Matrix::vstack(&[&b, &b]).unwrap();
        assert_eq!(v.to_rows(&f), vec![vec![2, 3], vec![2, 3]]);
        assert_eq!(d.block(1, 1, 1, 2), b);
    }
}

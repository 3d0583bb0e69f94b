//! Incremental sparse Gaussian elimination and subspaces in normal form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::field::Field;
use super::matrix::Matrix;
use super::sparse::{Accumulator, SparseVec};

const NONE: u32 = u32::MAX;

/// Builds a row echelon basis one vector at a time.
///
/// Every stored row has leading coefficient 1 and vanishes at the pivots of
/// all rows stored before it. [`EchelonBuilder::finish`] back-substitutes to
/// the reduced form, which is unique for a given span.
///
/// Pivots are only allowed below `pivot_limit`; coordinates at or above it
/// ride along untouched, which is how [`Solver`] tracks column combinations.
pub struct EchelonBuilder<'f, F: Field> {
    f: &'f F,
    len: usize,
    pivot_limit: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<u32>,
    acc: Accumulator<F::Elem>,
    heap: BinaryHeap<Reverse<usize>>,
}

impl<'f, F: Field> EchelonBuilder<'f, F> {
    pub fn new(f: &'f F, len: usize) -> Self {
        Self::with_pivot_limit(f, len, len)
    }

    pub fn with_pivot_limit(f: &'f F, len: usize, pivot_limit: usize) -> Self {
        EchelonBuilder {
            f,
            len,
            pivot_limit,
            rows: Vec::new(),
            pivot_row: vec![NONE; pivot_limit],
            acc: Accumulator::new(f, len),
            heap: BinaryHeap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        i < self.pivot_limit && self.pivot_row[i] != NONE
    }

    fn push_if_pivot(&mut self, i: usize) {
        if i < self.pivot_limit && self.pivot_row[i] != NONE {
            self.heap.push(Reverse(i));
        }
    }

    /// Subtracts multiples of stored rows until `v` vanishes at every pivot.
    pub fn reduce(&mut self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = self.f;
        for (i, x) in v.iter() {
            if self.acc.add(f, *i, x) {
                self.push_if_pivot(*i);
            }
        }
        while let Some(Reverse(i)) = self.heap.pop() {
            let c = self.acc.get(i).clone();
            if f.is_zero(&c) {
                continue;
            }
            let negc = f.neg(&c);
            let r = self.pivot_row[i] as usize;
            // Rows are stored behind an index so the borrow of `self.rows`
            // does not overlap the accumulator.
            let row = std::mem::take(&mut self.rows[r]);
            for (j, y) in row.iter() {
                if self.acc.add_mul(f, *j, &negc, y) {
                    self.push_if_pivot(*j);
                }
            }
            self.acc.set_zero(f, i);
            self.rows[r] = row;
        }
        self.acc.drain(f)
    }

    /// Reduces `v` and stores it if it is new. Returns the new pivot, or
    /// `None` when `v` was dependent (or only nonzero beyond the pivot limit).
    pub fn insert(&mut self, v: &SparseVec<F::Elem>) -> Option<usize> {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    /// Like [`EchelonBuilder::insert`] but also returns the reduced vector
    /// when it was rejected.
    pub fn insert_or_remainder(&mut self, v: &SparseVec<F::Elem>) -> Result<usize, SparseVec<F::Elem>> {
        let r = self.reduce(v);
        match r.leading() {
            Some((p, _)) if *p < self.pivot_limit => Ok(self.insert_reduced(r).expect("leading below limit")),
            _ => Err(r),
        }
    }

    fn insert_reduced(&mut self, r: SparseVec<F::Elem>) -> Option<usize> {
        let (p, lead) = r.leading()?.clone();
        if p >= self.pivot_limit {
            return None;
        }
        let inv = self.f.inv(&lead).expect("nonzero leading entry");
        let r = if self.f.is_one(&lead) { r } else { r.scale(self.f, &inv) };
        self.pivot_row[p] = self.rows.len() as u32;
        self.rows.push(r);
        Some(p)
    }

    /// The rows in insertion order (not back-substituted).
    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Back-substitutes to the reduced row echelon form, rows sorted by pivot.
    pub fn finish(self) -> Rref<F::Elem> {
        let f = self.f;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| Reverse(self.rows[r].leading().unwrap().0));
        let mut rows = self.rows;
        let pivot_row = self.pivot_row;
        let mut acc = self.acc;
        // Descending pivot order: each row only needs clearing at larger
        // pivots, whose rows are already fully reduced.
        for &r in &order {
            let row = &rows[r];
            let needs = row.iter().skip(1).any(|(j, _)| *j < pivot_row.len() && pivot_row[*j] != NONE);
            if !needs {
                continue;
            }
            let row = std::mem::take(&mut rows[r]);
            for (j, x) in row.iter() {
                acc.add(f, *j, x);
            }
            for (j, x) in row.iter().skip(1) {
                if *j < pivot_row.len() && pivot_row[*j] != NONE {
                    let negx = f.neg(x);
                    for (k, y) in rows[pivot_row[*j] as usize].iter() {
                        acc.add_mul(f, *k, &negx, y);
                    }
                }
            }
            rows[r] = acc.drain(f);
        }
        order.reverse();
        let pivots = order.iter().map(|&r| rows[r].leading().unwrap().0).collect();
        let mut slots: Vec<Option<SparseVec<F::Elem>>> = rows.into_iter().map(Some).collect();
        let rows = order.iter().map(|&r| slots[r].take().unwrap()).collect();
        Rref { len: self.len, rows, pivots }
    }
}

/// Reduced row echelon form: `rows[k]` has a 1 at `pivots[k]` and zeros at
/// every other pivot; pivots strictly increase.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<E> {
    pub len: usize,
    pub rows: Vec<SparseVec<E>>,
    pub pivots: Vec<usize>,
}

impl<E: Clone> Rref<E> {
    pub fn of_vectors<'a, F: Field<Elem = E>>(
        f: &F,
        len: usize,
        vecs: impl IntoIterator<Item = &'a SparseVec<E>>,
    ) -> Self
    where
        E: 'a,
    {
        let mut b = EchelonBuilder::new(f, len);
        for v in vecs {
            b.insert(v);
        }
        b.finish()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Columns that carry no pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.len];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.len).filter(|&j| !is_pivot[j]).collect()
    }
}

/// A subspace of `k^ambient` with a basis in identity-position form:
/// `basis[j]` has a 1 at `positions[j]` and a 0 at every other position.
///
/// Both reduced row echelon bases (positions = pivots) and the standard
/// kernel basis (positions = free columns) have this shape, and it makes
/// membership, coordinates and a complement all local reads.
#[derive(Clone, Debug)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Vec<SparseVec<E>>,
    positions: Vec<usize>,
    slot: Vec<u32>,
}

impl<E: Clone> Subspace<E> {
    /// Caller guarantees the identity-position property.
    pub fn from_normal_form(ambient: usize, basis: Vec<SparseVec<E>>, positions: Vec<usize>) -> Self {
        let mut slot = vec![NONE; ambient];
        for (j, &p) in positions.iter().enumerate() {
            slot[p] = j as u32;
        }
        Subspace { ambient, basis, positions, slot }
    }

    pub fn from_rref(r: Rref<E>) -> Self {
        Self::from_normal_form(r.len, r.rows, r.pivots)
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_normal_form(ambient, Vec::new(), Vec::new())
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        Self::from_normal_form(ambient, (0..ambient).map(|i| SparseVec::unit(f, i)).collect(), (0..ambient).collect())
    }

    pub fn span<'a, F: Field<Elem = E>>(f: &F, ambient: usize, vecs: impl IntoIterator<Item = &'a SparseVec<E>>) -> Self
    where
        E: 'a,
    {
        Self::from_rref(Rref::of_vectors(f, ambient, vecs))
    }

    pub fn column_span<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        Self::span(f, m.nrows(), m.columns())
    }

    /// Null space of `m`, with positions at the free columns of its RREF.
    pub fn kernel<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        let rows = m.rows();
        Self::kernel_of_rows(f, m.ncols(), &rows)
    }

    /// Vectors orthogonal (under the plain dot product) to every given row.
    pub fn kernel_of_rows<F: Field<Elem = E>>(f: &F, len: usize, rows: &[SparseVec<E>]) -> Self {
        let r = Rref::of_vectors(f, len, rows);
        let free = r.free_columns();
        let mut free_slot = vec![NONE; len];
        for (k, &c) in free.iter().enumerate() {
            free_slot[c] = k as u32;
        }
        // basis vector for free column c: e_c - sum_rows row[c] e_pivot
        let mut cols: Vec<Vec<(usize, E)>> = free.iter().map(|_| Vec::new()).collect();
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            for (c, x) in row.iter().skip(1) {
                let k = free_slot[*c];
                debug_assert!(k != NONE);
                cols[k as usize].push((p, f.neg(x)));
            }
        }
        let basis = cols
            .into_iter()
            .zip(&free)
            .map(|(mut entries, &c)| {
                entries.push((c, f.one()));
                entries.sort_by_key(|(i, _)| *i);
                SparseVec::from_sorted_unchecked(entries)
            })
            .collect();
        Self::from_normal_form(len, basis, free)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<E>] {
        &self.basis
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn basis_matrix(&self) -> Matrix<E> {
        Matrix::from_columns(self.ambient, self.basis.clone())
    }

    /// `v - sum_j v[pos_j] basis_j`; zero exactly when `v` lies in the span.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &SparseVec<E>) -> SparseVec<E> {
        let mut acc = Accumulator::new(f, self.ambient);
        self.reduce_with(f, v, &mut acc)
    }

    pub(crate) fn reduce_with<F: Field<Elem = E>>(
        &self,
        f: &F,
        v: &SparseVec<E>,
        acc: &mut Accumulator<E>,
    ) -> SparseVec<E> {
        for (i, x) in v.iter() {
            acc.add(f, *i, x);
        }
        for (i, x) in v.iter() {
            let s = self.slot[*i];
            if s != NONE {
                let negx = f.neg(x);
                for (k, y) in self.basis[s as usize].iter() {
                    acc.add_mul(f, *k, &negx, y);
                }
            }
        }
        acc.drain(f)
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &SparseVec<E>) -> bool {
        self.reduce(f, v).is_zero()
    }

    /// Coordinates of a vector known to lie in the span.
    pub fn coords(&self, v: &SparseVec<E>) -> SparseVec<E> {
        let mut pairs: Vec<(usize, E)> = v
            .iter()
            .filter_map(|(i, x)| {
                let s = self.slot[*i];
                (s != NONE).then(|| (s as usize, x.clone()))
            })
            .collect();
        pairs.sort_by_key(|(k, _)| *k);
        SparseVec::from_sorted_unchecked(pairs)
    }

    /// Coordinates if `v` lies in the span, else `None`.
    pub fn coords_checked<F: Field<Elem = E>>(&self, f: &F, v: &SparseVec<E>) -> Option<SparseVec<E>> {
        self.contains(f, v).then(|| self.coords(v))
    }

    /// Turns coordinates back into an ambient vector.
    pub fn embed<F: Field<Elem = E>>(&self, f: &F, coords: &SparseVec<E>) -> SparseVec<E> {
        let mut acc = Accumulator::new(f, self.ambient);
        for (j, c) in coords.iter() {
            for (k, y) in self.basis[*j].iter() {
                acc.add_mul(f, *k, c, y);
            }
        }
        acc.drain(f)
    }

    /// The non-position indices; their unit vectors span a complement.
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.ambient).filter(|&i| self.slot[i] == NONE).collect()
    }

    /// Index map from ambient position to quotient coordinate.
    pub fn complement_slots(&self) -> Vec<u32> {
        let mut out = vec![NONE; self.ambient];
        let mut k = 0u32;
        for (i, o) in out.iter_mut().enumerate() {
            if self.slot[i] == NONE {
                *o = k;
                k += 1;
            }
        }
        out
    }

    /// Image of `v` in `ambient / self`, in complement coordinates.
    pub fn quotient_coords<F: Field<Elem = E>>(&self, f: &F, v: &SparseVec<E>, slots: &[u32]) -> SparseVec<E> {
        let r = self.reduce(f, v);
        SparseVec::from_sorted_unchecked(r.iter().map(|(i, x)| (slots[*i] as usize, x.clone())).collect())
    }
}

/// Solves `m x = b` for many right-hand sides against one matrix.
pub struct Solver<'f, F: Field> {
    f: &'f F,
    nrows: usize,
    ncols: usize,
    builder: EchelonBuilder<'f, F>,
}

impl<'f, F: Field> Solver<'f, F> {
    pub fn new(f: &'f F, m: &Matrix<F::Elem>) -> Self {
        let nrows = m.nrows();
        let ncols = m.ncols();
        let mut builder = EchelonBuilder::with_pivot_limit(f, nrows + ncols, nrows);
        for (j, c) in m.columns().iter().enumerate() {
            let mut entries = c.entries().to_vec();
            entries.push((nrows + j, f.one()));
            builder.insert(&SparseVec::from_sorted_unchecked(entries));
        }
        Solver { f, nrows, ncols, builder }
    }

    pub fn rank(&self) -> usize {
        self.builder.rank()
    }

    /// Some `x` with `m x = b`, or `None` when `b` is outside the column space.
    pub fn solve(&mut self, b: &SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        debug_assert!(b.max_index().is_none_or(|i| i < self.nrows));
        let r = self.builder.reduce(b);
        if r.leading().is_some_and(|(i, _)| *i < self.nrows) {
            return None;
        }
        Some(r.window(self.nrows, self.ncols).neg(self.f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};

    #[test]
    fn rref_over_f5() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64_rows(&f, &[&[2, 4], &[1, 2]]);
        let r = Rref::of_vectors(&f, 2, &m.rows());
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rows[0].to_dense(&f, 2), vec![1, 2]);
    }

    #[test]
    fn back_substitution_clears_above() {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_i64_rows(&f, &[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]]);
        let r = Rref::of_vectors(&f, 3, &m.rows());
        assert_eq!(r.pivots, vec![0, 1, 2]);
        for (k, row) in r.rows.iter().enumerate() {
            assert_eq!(row, &SparseVec::unit(&f, k));
        }
    }

    #[test]
    fn kernel_of_sum_functional() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(&q, &[&[1, 1]]);
        let k = Subspace::kernel(&q, &m);
        assert_eq!(k.dim(), 1);
        assert!(m.mul_vec(&q, &k.basis()[0]).is_zero());
        assert_eq!(k.positions(), &[1]);
    }

    #[test]
    fn subspace_coordinates_and_quotient() {
        let f = PrimeField::new(3).unwrap();
        let v1 = SparseVec::from_pairs(&f, vec![(0, 1), (2, 1)]);
        let v2 = SparseVec::from_pairs(&f, vec![(1, 1), (2, 2)]);
        let s = Subspace::span(&f, 3, [&v1, &v2]);
        let w = v1.add_scaled(&f, &2, &v2);
        assert!(s.contains(&f, &w));
        assert_eq!(s.embed(&f, &s.coords(&w)), w);
        let e2 = SparseVec::unit(&f, 2);
        assert!(!s.contains(&f, &e2));
        let slots = s.complement_slots();
        assert_eq!(s.quotient_coords(&f, &e2, &slots).nnz(), 1);
        assert!(s.quotient_coords(&f, &w, &slots).is_zero());
    }

    #[test]
    fn solver_tracks_combinations() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(&q, &[&[1, 2], &[2, 4]]);
        let mut s = Solver::new(&q, &m);
        let b = SparseVec::from_dense(&q, &[q.from_i64(1), q.from_i64(2)]);
        let x = s.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&q, &x), b);
        assert!(s.solve(&SparseVec::unit(&q, 0)).is_none());
    }
}

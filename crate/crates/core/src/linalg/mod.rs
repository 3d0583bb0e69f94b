//! Exact linear algebra over `F_p` and `Q`.
//!
//! Matrices are stored as sparse columns. The free functions here are thin
//! wrappers over [`echelon`] for callers that think in whole matrices.

pub mod echelon;
pub mod field;
pub mod matrix;
pub mod sparse;

pub use echelon::{EchelonBuilder, Rref, Solver, Subspace};
pub use field::{Field, FieldKind, PrimeField, Rationals};
pub use matrix::Matrix;
pub use sparse::SparseVec;

use crate::error::{Error, Result};

/// Reduced row echelon form and its pivot columns.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let r = Rref::of_vectors(f, m.ncols(), &m.rows());
    let mut rows = r.rows;
    rows.resize(m.nrows(), SparseVec::new());
    (Matrix::from_columns(m.ncols(), rows).transpose(), r.pivots)
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut b = EchelonBuilder::new(f, m.nrows());
    for c in m.columns() {
        b.insert(c);
    }
    b.rank()
}

/// Columns spanning the null space.
pub fn kernel_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    Subspace::kernel(f, m).basis_matrix()
}

/// Some `x` with `m x = b`.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if m.nrows() != b.nrows() {
        return Err(Error::ShapeMismatch(format!("solve: {} rows vs {} rows", m.nrows(), b.nrows())));
    }
    let mut s = Solver::new(f, m);
    let cols = b
        .columns()
        .iter()
        .enumerate()
        .map(|(j, c)| s.solve(c).ok_or_else(|| Error::Inconsistent(format!("column {j} of the right-hand side"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(m.ncols(), cols))
}

/// Independent columns spanning the column space (in reduced form).
pub fn image_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    Subspace::column_span(f, m).basis_matrix()
}

/// Basis of the intersection of the column spans of `a` and `b`.
pub fn intersect_columns<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    if a.nrows() != b.nrows() {
        return Err(Error::ShapeMismatch(format!("intersect: {} rows vs {} rows", a.nrows(), b.nrows())));
    }
    let stacked = Matrix::hstack(&[a, &b.scale(f, &f.neg(&f.one()))])?;
    let ker = Subspace::kernel(f, &stacked);
    let vecs: Vec<_> = ker.basis().iter().map(|v| a.mul_vec(f, &v.window(0, a.ncols()))).collect();
    Ok(Subspace::span(f, a.nrows(), &vecs).basis_matrix())
}

/// For the quotient `k^ambient / span(sub)`: the projection matrix onto
/// quotient coordinates and coset representatives (as columns) with
/// `projection * representatives = id`.
pub fn quotient_basis<F: Field>(
    f: &F,
    ambient: usize,
    sub: &Matrix<F::Elem>,
) -> Result<(Matrix<F::Elem>, Matrix<F::Elem>)> {
    if sub.nrows() != ambient {
        return Err(Error::ShapeMismatch(format!("quotient: subspace lives in k^{}", sub.nrows())));
    }
    let s = Subspace::column_span(f, sub);
    let slots = s.complement_slots();
    let q = s.codim();
    let proj = (0..ambient).map(|i| s.quotient_coords(f, &SparseVec::unit(f, i), &slots)).collect();
    let reps = s.complement_positions().into_iter().map(|i| SparseVec::unit(f, i)).collect();
    Ok((Matrix::from_columns(q, proj), Matrix::from_columns(ambient, reps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero_rref() {
        let f = PrimeField::new(5).unwrap();
        let id = Matrix::identity(&f, 3);
        assert_eq!(rref(&f, &id), (id.clone(), vec![0, 1, 2]));
        let z = Matrix::<u32>::zeros(2, 5);
        assert_eq!(rref(&f, &z), (z.clone(), vec![]));
        assert_eq!(kernel_basis(&f, &z).ncols(), 5);
        assert_eq!(kernel_basis(&f, &id).ncols(), 0);
    }

    #[test]
    fn rref_example_over_f5() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64_rows(&f, &[&[2, 4], &[1, 2]]);
        let (r, piv) = rref(&f, &m);
        assert_eq!(r, Matrix::from_i64_rows(&f, &[&[1, 2], &[0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn solve_reports_inconsistency() {
        let f = PrimeField::new(5).unwrap();
        let z = Matrix::<u32>::zeros(2, 2);
        let b = Matrix::from_i64_rows(&f, &[&[1], &[0]]);
        assert!(matches!(solve(&f, &z, &b), Err(Error::Inconsistent(_))));
        let id = Matrix::identity(&f, 2);
        assert_eq!(solve(&f, &id, &b).unwrap(), b);
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let q = Rationals;
        let a = Matrix::from_i64_rows(&q, &[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Matrix::from_i64_rows(&q, &[&[0, 0], &[1, 0], &[0, 1]]);
        let i = intersect_columns(&q, &a, &b).unwrap();
        assert_eq!(i, Matrix::from_i64_rows(&q, &[&[0], &[1], &[0]]));
    }

    #[test]
    fn quotient_by_first_axis() {
        let f = PrimeField::new(7).unwrap();
        let e1 = Matrix::from_i64_rows(&f, &[&[1], &[0], &[0]]);
        let (proj, reps) = quotient_basis(&f, 3, &e1).unwrap();
        assert_eq!(proj.nrows(), 2);
        assert!(proj.mul(&f, &e1).unwrap().is_zero());
        assert_eq!(proj.mul(&f, &reps).unwrap(), Matrix::identity(&f, 2));
        assert_eq!(rank(&f, &Matrix::identity(&f, 4)), 4);
    }
}

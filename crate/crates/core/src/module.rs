//! Finitely generated modules as finite-dimensional representations.
//!
//! Basis conventions used throughout the crate:
//! - the free module `R^n` has basis index `g * dim R + l` (generator-major);
//! - `M (x)_k N` has basis index `a * dim N + b`;
//! - a k-linear map `M -> N` vectorizes row-major, `i * dim M + j` for the
//!   entry in target row `i` and source column `j`.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::FiniteLocalAlgebra;
use crate::error::{Error, Result};
use crate::linalg::sparse::Accumulator;
use crate::linalg::{rank, Field, Matrix, SparseVec, Subspace};

pub type Ring<F> = Arc<FiniteLocalAlgebra<F>>;
pub type Module<F> = Arc<FDModule<F>>;

/// A module given by one action matrix per basis element of the ring.
#[derive(Clone)]
pub struct FDModule<F: Field> {
    ring: Ring<F>,
    dim: usize,
    actions: Vec<Matrix<F::Elem>>,
    /// Actions of the ideal generators of the maximal ideal; these together
    /// with 1 generate the ring as an algebra, so they decide linearity.
    gen_actions: Vec<Matrix<F::Elem>>,
}

impl<F: Field> fmt::Debug for FDModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FDModule").field("ring", &self.ring.name()).field("dim", &self.dim).finish()
    }
}

fn combination<F: Field>(f: &F, mats: &[Matrix<F::Elem>], a: &SparseVec<F::Elem>, n: usize) -> Matrix<F::Elem> {
    let mut out = Matrix::zeros(n, n);
    for (i, c) in a.iter() {
        out = out.add_scaled(f, c, &mats[*i]).expect("square matrices of one size");
    }
    out
}

pub(crate) fn same_ring<F: Field>(a: &Ring<F>, b: &Ring<F>) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}

impl<F: Field> FDModule<F> {
    /// Checked constructor: validates shapes and the module axioms.
    pub fn new(ring: Ring<F>, dim: usize, actions: Vec<Matrix<F::Elem>>) -> Result<Self> {
        if actions.len() != ring.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for a ring of dimension {}",
                actions.len(),
                ring.dim()
            )));
        }
        if let Some((i, a)) = actions.iter().enumerate().find(|(_, a)| a.nrows() != dim || a.ncols() != dim) {
            return Err(Error::InvalidModule(format!(
                "action {i} is {}x{}, expected {dim}x{dim}",
                a.nrows(),
                a.ncols()
            )));
        }
        let m = Self::from_actions_unchecked(ring, dim, actions);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_actions_unchecked(ring: Ring<F>, dim: usize, actions: Vec<Matrix<F::Elem>>) -> Self {
        let f = ring.field();
        let gen_actions = ring.generators().iter().map(|g| combination(f, &actions, g, dim)).collect();
        FDModule { ring, dim, actions, gen_actions }
    }

    /// Checks `action(1) = id`, pairwise commutation and the structure
    /// constants `A_i A_j = sum_l c_ijl A_l`.
    pub fn validate(&self) -> Result<()> {
        let r = &self.ring;
        let f = r.field();
        if self.actions[r.unit_index()] != Matrix::identity(f, self.dim) {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        let n = r.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.actions[i].mul(f, &self.actions[j])?;
                let rhs = combination(f, &self.actions, r.product(i, j), self.dim);
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "actions of b{i} and b{j} violate the structure constants"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self, i: usize) -> &Matrix<F::Elem> {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[Matrix<F::Elem>] {
        &self.actions
    }

    pub fn generator_actions(&self) -> &[Matrix<F::Elem>] {
        &self.gen_actions
    }

    /// Action of an arbitrary ring element.
    pub fn action_of(&self, r: &SparseVec<F::Elem>) -> Matrix<F::Elem> {
        combination(self.field(), &self.actions, r, self.dim)
    }

    pub fn zero(ring: &Ring<F>) -> Self {
        let n = ring.dim();
        Self::from_actions_unchecked(ring.clone(), 0, vec![Matrix::zeros(0, 0); n])
    }

    /// `R^n` with the block regular representation.
    pub fn free(ring: &Ring<F>, n: usize) -> Self {
        let actions = (0..ring.dim()).map(|i| ring.basis_action(i).repeat_diag(n)).collect();
        Self::from_actions_unchecked(ring.clone(), n * ring.dim(), actions)
    }

    /// `k = R/m`.
    pub fn residue_field(ring: &Ring<F>) -> Self {
        let f = ring.field();
        let actions = ring
            .residue_of_basis()
            .iter()
            .map(|l| Matrix::from_columns(1, vec![SparseVec::from_dense(f, std::slice::from_ref(l))]))
            .collect();
        Self::from_actions_unchecked(ring.clone(), 1, actions)
    }

    /// The maximal ideal as a submodule of `R`.
    pub fn maximal_ideal(ring: &Ring<F>) -> Self {
        let r = Arc::new(Self::free(ring, 1));
        submodule(&r, ring.max_ideal()).expect("ideals are submodules").0.as_ref().clone()
    }

    /// `M^n`.
    pub fn power(&self, n: usize) -> Self {
        let actions = self.actions.iter().map(|a| a.repeat_diag(n)).collect();
        Self::from_actions_unchecked(self.ring.clone(), self.dim * n, actions)
    }

    /// The `k`-linear dual with transposed actions.
    pub fn matlis_dual(&self) -> Self {
        let actions = self.actions.iter().map(Matrix::transpose).collect();
        Self::from_actions_unchecked(self.ring.clone(), self.dim, actions)
    }

    /// `m M` as a subspace.
    pub fn radical_subspace(&self) -> Subspace<F::Elem> {
        let f = self.field();
        let vecs: Vec<_> = self.gen_actions.iter().flat_map(|a| a.columns().iter().cloned()).collect();
        Subspace::span(f, self.dim, &vecs)
    }

    /// Minimal number of generators `dim M/mM`.
    pub fn beta0(&self) -> usize {
        self.dim - self.radical_subspace().dim()
    }

    /// Lifts of a basis of `M/mM` (Nakayama).
    pub fn minimal_generators(&self) -> MinimalGenerators<F::Elem> {
        let f = self.field();
        let rad = self.radical_subspace();
        let generators = rad.complement_positions().into_iter().map(|i| SparseVec::unit(f, i)).collect::<Vec<_>>();
        MinimalGenerators { count: generators.len(), generators, radical: rad }
    }

    /// `{ r : r M = 0 }` as a subspace of `R`.
    pub fn annihilator(&self) -> Subspace<F::Elem> {
        let f = self.field();
        let m = Matrix::from_columns(self.dim * self.dim, self.actions.iter().map(Matrix::vectorize).collect());
        Subspace::kernel(f, &m)
    }

    /// Dimensions of `m^j M` for `j = 0, 1, ...` until zero.
    pub fn loewy_series(&self) -> Vec<usize> {
        let f = self.field();
        let mut cur = Subspace::full(f, self.dim);
        let mut out = vec![self.dim];
        while cur.dim() > 0 {
            let vecs: Vec<_> = self
                .gen_actions
                .iter()
                .flat_map(|a| cur.basis().iter().map(move |v| a.mul_vec(f, v)))
                .collect();
            let next = Subspace::span(f, self.dim, &vecs);
            if next.dim() == cur.dim() {
                break;
            }
            out.push(next.dim());
            cur = next;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        let actions: Vec<Value> = self
            .actions
            .iter()
            .map(|a| Value::Array(a.to_rows(f).iter().map(|r| Value::Array(r.iter().map(|c| f.to_json(c)).collect())).collect()))
            .collect();
        json!({ "ring": self.ring.name(), "dim": self.dim, "actions": actions })
    }

    /// Parses the module file format. A `"ring"` entry, if present, must
    /// name (or inline) the same ring as `ring`.
    pub fn from_json(ring: &Ring<F>, v: &Value) -> Result<Self> {
        let f = ring.field();
        let obj = v.as_object().ok_or_else(|| Error::InputParse("module must be a JSON object".into()))?;
        match obj.get("ring") {
            None => {}
            Some(Value::String(s)) if s == ring.name() => {}
            Some(Value::String(s)) => {
                return Err(Error::InputParse(format!("module is over {s:?}, expected {:?}", ring.name())))
            }
            Some(inline @ Value::Object(_)) => {
                let other = FiniteLocalAlgebra::from_json_with_field(f.clone(), inline)?;
                if !other.same_as(ring) {
                    return Err(Error::RingMismatch);
                }
            }
            Some(_) => return Err(Error::InputParse("\"ring\" must be a name or an object".into())),
        }
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InputParse("missing integer \"dim\"".into()))? as usize;
        let acts = obj
            .get("actions")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InputParse("missing array \"actions\"".into()))?;
        let actions = acts.iter().map(|a| parse_matrix(f, a, dim, dim)).collect::<Result<Vec<_>>>()?;
        Self::new(ring.clone(), dim, actions)
    }
}

/// Parses a row-major JSON matrix of the given shape.
pub fn parse_matrix<F: Field>(f: &F, v: &Value, nrows: usize, ncols: usize) -> Result<Matrix<F::Elem>> {
    let rows = v.as_array().ok_or_else(|| Error::InputParse("matrix must be an array of rows".into()))?;
    if rows.len() != nrows {
        return Err(Error::ShapeMismatch(format!("matrix has {} rows, expected {nrows}", rows.len())));
    }
    let mut dense = Vec::with_capacity(nrows);
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::InputParse("matrix row must be an array".into()))?;
        if row.len() != ncols {
            return Err(Error::ShapeMismatch(format!("matrix row has {} entries, expected {ncols}", row.len())));
        }
        dense.push(row.iter().map(|c| f.parse_json(c)).collect::<Result<Vec<_>>>()?);
    }
    if nrows == 0 {
        return Ok(Matrix::zeros(0, ncols));
    }
    Matrix::from_rows(f, &dense)
}

pub fn matrix_to_json<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Value {
    Value::Array(m.to_rows(f).iter().map(|r| Value::Array(r.iter().map(|c| f.to_json(c)).collect())).collect())
}

#[derive(Clone, Debug)]
pub struct MinimalGenerators<E> {
    pub count: usize,
    pub generators: Vec<SparseVec<E>>,
    /// `m M`
    pub radical: Subspace<E>,
}

/// An `R`-linear map, stored as its `k`-matrix.
#[derive(Clone)]
pub struct ModuleHom<F: Field> {
    source: Module<F>,
    target: Module<F>,
    matrix: Matrix<F::Elem>,
}

impl<F: Field> fmt::Debug for ModuleHom<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleHom({} -> {})", self.source.dim, self.target.dim)
    }
}

impl<F: Field> ModuleHom<F> {
    /// Checked constructor: the matrix must commute with every action.
    pub fn new(source: Module<F>, target: Module<F>, matrix: Matrix<F::Elem>) -> Result<Self> {
        if !same_ring(&source.ring, &target.ring) {
            return Err(Error::RingMismatch);
        }
        if matrix.nrows() != target.dim || matrix.ncols() != source.dim {
            return Err(Error::ShapeMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.dim,
                source.dim
            )));
        }
        let h = ModuleHom { source, target, matrix };
        if let Some(g) = h.linearity_failure() {
            return Err(Error::NotRLinear(g));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: Module<F>, target: Module<F>, matrix: Matrix<F::Elem>) -> Self {
        debug_assert_eq!(matrix.nrows(), target.dim);
        debug_assert_eq!(matrix.ncols(), source.dim);
        ModuleHom { source, target, matrix }
    }

    /// Index of a maximal-ideal generator the map fails to commute with.
    pub fn linearity_failure(&self) -> Option<usize> {
        let f = self.source.field();
        (0..self.source.gen_actions.len()).find(|&g| {
            let lhs = self.matrix.mul(f, &self.source.gen_actions[g]).unwrap();
            let rhs = self.target.gen_actions[g].mul(f, &self.matrix).unwrap();
            lhs != rhs
        })
    }

    pub fn identity(m: &Module<F>) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.field(), m.dim))
    }

    pub fn zero(source: &Module<F>, target: &Module<F>) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), Matrix::zeros(target.dim, source.dim))
    }

    pub fn source(&self) -> &Module<F> {
        &self.source
    }

    pub fn target(&self) -> &Module<F> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<F::Elem> {
        &self.matrix
    }

    pub fn field(&self) -> &F {
        self.source.field()
    }

    pub fn apply(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.matrix.mul_vec(self.field(), v)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &ModuleHom<F>) -> Result<Self> {
        if other.target.dim != self.source.dim {
            return Err(Error::ShapeMismatch("composing maps with mismatched middle module".into()));
        }
        Ok(Self::new_unchecked(other.source.clone(), self.target.clone(), self.matrix.mul(self.field(), &other.matrix)?))
    }

    pub fn add(&self, other: &ModuleHom<F>) -> Result<Self> {
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(self.field(), &other.matrix)?))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(self.field(), c))
    }

    pub fn rank(&self) -> usize {
        rank(self.field(), &self.matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim == self.target.dim && self.is_injective()
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> (Module<F>, ModuleHom<F>) {
        let ker = Subspace::kernel(self.field(), &self.matrix);
        submodule(&self.source, &ker).expect("kernels are submodules")
    }

    /// Image as a submodule of the target, with its inclusion.
    pub fn image(&self) -> (Module<F>, ModuleHom<F>) {
        let im = Subspace::column_span(self.field(), &self.matrix);
        submodule(&self.target, &im).expect("images are submodules")
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> (Module<F>, ModuleHom<F>) {
        let im = Subspace::column_span(self.field(), &self.matrix);
        quotient(&self.target, &im).expect("images are submodules")
    }

    pub fn to_json(&self) -> Value {
        json!({ "matrix": matrix_to_json(self.field(), &self.matrix) })
    }
}

/// The submodule carried by an invariant subspace, with its inclusion.
pub fn submodule<F: Field>(m: &Module<F>, sub: &Subspace<F::Elem>) -> Result<(Module<F>, ModuleHom<F>)> {
    let f = m.field();
    let d = sub.dim();
    let mut acc = Accumulator::new(f, m.dim);
    let mut actions = Vec::with_capacity(m.actions.len());
    for a in &m.actions {
        let mut cols = Vec::with_capacity(d);
        for v in sub.basis() {
            let w = a.mul_vec(f, v);
            if !sub.reduce_with(f, &w, &mut acc).is_zero() {
                return Err(Error::InvalidModule("subspace is not closed under the ring action".into()));
            }
            cols.push(sub.coords(&w));
        }
        actions.push(Matrix::from_columns(d, cols));
    }
    let s = Arc::new(FDModule::from_actions_unchecked(m.ring.clone(), d, actions));
    let inc = ModuleHom::new_unchecked(s.clone(), m.clone(), sub.basis_matrix());
    Ok((s, inc))
}

/// `M / sub` for an invariant subspace, with its projection. The quotient
/// basis is the image of the unit vectors off the subspace positions.
pub fn quotient<F: Field>(m: &Module<F>, sub: &Subspace<F::Elem>) -> Result<(Module<F>, ModuleHom<F>)> {
    let f = m.field();
    let mut acc = Accumulator::new(f, m.dim);
    for a in &m.gen_actions {
        for v in sub.basis() {
            if !sub.reduce_with(f, &a.mul_vec(f, v), &mut acc).is_zero() {
                return Err(Error::InvalidModule("subspace is not closed under the ring action".into()));
            }
        }
    }
    let slots = sub.complement_slots();
    let reps = sub.complement_positions();
    let q = reps.len();
    let proj_cols: Vec<_> = (0..m.dim).map(|i| sub.quotient_coords(f, &SparseVec::unit(f, i), &slots)).collect();
    let actions = m
        .actions
        .iter()
        .map(|a| Matrix::from_columns(q, reps.iter().map(|&r| sub.quotient_coords(f, a.col(r), &slots)).collect()))
        .collect();
    let qm = Arc::new(FDModule::from_actions_unchecked(m.ring.clone(), q, actions));
    let proj = ModuleHom::new_unchecked(m.clone(), qm.clone(), Matrix::from_columns(q, proj_cols));
    Ok((qm, proj))
}

/// `M (+) N` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub module: Module<F>,
    pub injections: [ModuleHom<F>; 2],
    pub projections: [ModuleHom<F>; 2],
}

pub fn direct_sum<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<DirectSum<F>> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch);
    }
    let f = m.field();
    let actions = m.actions.iter().zip(&n.actions).map(|(a, b)| Matrix::block_diag(&[a, b])).collect();
    let s = Arc::new(FDModule::from_actions_unchecked(m.ring.clone(), m.dim + n.dim, actions));
    let (dm, dn) = (m.dim, n.dim);
    let inj = |off: usize, d: usize| Matrix::from_columns(dm + dn, (0..d).map(|i| SparseVec::unit(f, off + i)).collect());
    let proj = |off: usize, d: usize| inj(off, d).transpose();
    Ok(DirectSum {
        injections: [
            ModuleHom::new_unchecked(m.clone(), s.clone(), inj(0, dm)),
            ModuleHom::new_unchecked(n.clone(), s.clone(), inj(dm, dn)),
        ],
        projections: [
            ModuleHom::new_unchecked(s.clone(), m.clone(), proj(0, dm)),
            ModuleHom::new_unchecked(s.clone(), n.clone(), proj(dm, dn)),
        ],
        module: s,
    })
}

/// Direct sum of a list of modules, without structure maps.
pub fn direct_sum_all<F: Field>(ring: &Ring<F>, parts: &[Module<F>]) -> FDModule<F> {
    let dim = parts.iter().map(|p| p.dim).sum();
    let actions = (0..ring.dim())
        .map(|i| Matrix::block_diag(&parts.iter().map(|p| &p.actions[i]).collect::<Vec<_>>()))
        .collect();
    FDModule::from_actions_unchecked(ring.clone(), dim, actions)
}

/// `Hom_R(M, N)` together with a basis of homomorphisms.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    pub source: Module<F>,
    pub target: Module<F>,
    pub module: Module<F>,
    /// The solution space inside vectorized `Hom_k(M, N)`.
    space: Subspace<F::Elem>,
}

/// Solves the commuting-ladder system `X_N phi = phi X_M`.
pub fn hom_module<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<HomSpace<F>> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch);
    }
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let mut rows = Vec::with_capacity(m.gen_actions.len() * dm * dn);
    for (xm, xn) in m.gen_actions.iter().zip(&n.gen_actions) {
        let xn_rows = xn.rows();
        for (i, xn_row) in xn_rows.iter().enumerate() {
            for j in 0..dm {
                let mut pairs: Vec<(usize, F::Elem)> = xn_row.iter().map(|(k, x)| (k * dm + j, x.clone())).collect();
                pairs.extend(xm.col(j).iter().map(|(k, y)| (i * dm + k, f.neg(y))));
                let row = SparseVec::from_pairs(f, pairs);
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
    }
    let space = Subspace::kernel_of_rows(f, dm * dn, &rows);
    // (r . phi) = A_N(r) phi
    let actions = n
        .actions
        .iter()
        .map(|a| {
            let cols = space
                .basis()
                .iter()
                .map(|v| {
                    let phi = Matrix::unvectorize(v, dn, dm);
                    space.coords(&a.mul(f, &phi).unwrap().vectorize())
                })
                .collect();
            Matrix::from_columns(space.dim(), cols)
        })
        .collect();
    let module = Arc::new(FDModule::from_actions_unchecked(m.ring.clone(), space.dim(), actions));
    Ok(HomSpace { source: m.clone(), target: n.clone(), module, space })
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The homomorphism with the given coordinates.
    pub fn element_matrix(&self, coords: &SparseVec<F::Elem>) -> Matrix<F::Elem> {
        let f = self.module.field();
        Matrix::unvectorize(&self.space.embed(f, coords), self.target.dim, self.source.dim)
    }

    pub fn element(&self, coords: &SparseVec<F::Elem>) -> ModuleHom<F> {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.element_matrix(coords))
    }

    pub fn basis_matrix(&self, j: usize) -> Matrix<F::Elem> {
        Matrix::unvectorize(&self.space.basis()[j], self.target.dim, self.source.dim)
    }

    pub fn basis_hom(&self, j: usize) -> ModuleHom<F> {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.basis_matrix(j))
    }

    /// Coordinates of an `R`-linear `k`-matrix, `None` if it is not one.
    pub fn coords_of(&self, phi: &Matrix<F::Elem>) -> Option<SparseVec<F::Elem>> {
        self.space.coords_checked(self.module.field(), &phi.vectorize())
    }

    /// `Hom(L, g): Hom(L, N) -> Hom(L, N')` for `self = Hom(L, N)`.
    pub fn covariant(&self, g: &ModuleHom<F>, into: &HomSpace<F>) -> Result<ModuleHom<F>> {
        let f = self.module.field();
        let cols = (0..self.dim())
            .map(|j| {
                let phi = g.matrix().mul(f, &self.basis_matrix(j))?;
                into.coords_of(&phi).ok_or_else(|| Error::ShapeMismatch("image outside the Hom space".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleHom::new_unchecked(self.module.clone(), into.module.clone(), Matrix::from_columns(into.dim(), cols)))
    }

    /// `Hom(h, N): Hom(M, N) -> Hom(M', N)` for `self = Hom(M, N)` and
    /// `h: M' -> M`.
    pub fn contravariant(&self, h: &ModuleHom<F>, into: &HomSpace<F>) -> Result<ModuleHom<F>> {
        let f = self.module.field();
        let cols = (0..self.dim())
            .map(|j| {
                let phi = self.basis_matrix(j).mul(f, h.matrix())?;
                into.coords_of(&phi).ok_or_else(|| Error::ShapeMismatch("image outside the Hom space".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleHom::new_unchecked(self.module.clone(), into.module.clone(), Matrix::from_columns(into.dim(), cols)))
    }
}

/// `M (x)_R N` as a quotient of `M (x)_k N`.
#[derive(Clone, Debug)]
pub struct TensorProduct<F: Field> {
    pub left: Module<F>,
    pub right: Module<F>,
    pub module: Module<F>,
    relations: Subspace<F::Elem>,
    slots: Vec<u32>,
}

/// Quotient of `M (x)_k N` by `x m (x) n - m (x) x n` for the maximal-ideal
/// generators `x`; these generate the same subspace as all of `R`.
pub fn tensor_module<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<TensorProduct<F>> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch);
    }
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let mut rels = Vec::new();
    for (xm, xn) in m.gen_actions.iter().zip(&n.gen_actions) {
        for a in 0..dm {
            for b in 0..dn {
                let mut pairs: Vec<(usize, F::Elem)> = xm.col(a).iter().map(|(i, x)| (i * dn + b, x.clone())).collect();
                pairs.extend(xn.col(b).iter().map(|(j, y)| (a * dn + j, f.neg(y))));
                let v = SparseVec::from_pairs(f, pairs);
                if !v.is_zero() {
                    rels.push(v);
                }
            }
        }
    }
    let relations = Subspace::span(f, dm * dn, &rels);
    let slots = relations.complement_slots();
    let reps = relations.complement_positions();
    let q = reps.len();
    let actions = m
        .actions
        .iter()
        .map(|a| {
            let cols = reps
                .iter()
                .map(|&r| {
                    let (i, j) = (r / dn, r % dn);
                    let v = SparseVec::from_sorted_unchecked(a.col(i).iter().map(|(k, x)| (k * dn + j, x.clone())).collect());
                    relations.quotient_coords(f, &v, &slots)
                })
                .collect();
            Matrix::from_columns(q, cols)
        })
        .collect();
    let module = Arc::new(FDModule::from_actions_unchecked(m.ring.clone(), q, actions));
    Ok(TensorProduct { left: m.clone(), right: n.clone(), module, relations, slots })
}

/// `u (x) v` as a vector of `M (x)_k N`.
pub fn kron<F: Field>(f: &F, u: &SparseVec<F::Elem>, v: &SparseVec<F::Elem>, dn: usize) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(u.nnz() * v.nnz());
    for (i, x) in u.iter() {
        for (j, y) in v.iter() {
            out.push((i * dn + j, f.mul(x, y)));
        }
    }
    SparseVec::from_sorted_unchecked(out)
}

impl<F: Field> TensorProduct<F> {
    pub fn dim(&self) -> usize {
        self.module.dim
    }

    /// Class of a vector of `M (x)_k N`.
    pub fn project(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.relations.quotient_coords(self.module.field(), v, &self.slots)
    }

    /// Class of `m_a (x) n_b`.
    pub fn class_of(&self, a: usize, b: usize) -> SparseVec<F::Elem> {
        let f = self.module.field();
        self.project(&SparseVec::unit(f, a * self.right.dim + b))
    }

    /// Basis element `q` of the quotient as a pair `(a, b)`.
    pub fn representative(&self, q: usize) -> (usize, usize) {
        let r = self.relations.complement_positions()[q];
        (r / self.right.dim, r % self.right.dim)
    }

    fn representatives(&self) -> Vec<(usize, usize)> {
        let dn = self.right.dim;
        self.relations.complement_positions().into_iter().map(|r| (r / dn, r % dn)).collect()
    }

    /// `g (x) h` from `self` to `into`.
    pub fn map(&self, g: &ModuleHom<F>, h: &ModuleHom<F>, into: &TensorProduct<F>) -> ModuleHom<F> {
        let f = self.module.field();
        let dn2 = into.right.dim;
        let cols = self
            .representatives()
            .into_iter()
            .map(|(a, b)| into.project(&kron(f, g.matrix().col(a), h.matrix().col(b), dn2)))
            .collect();
        ModuleHom::new_unchecked(self.module.clone(), into.module.clone(), Matrix::from_columns(into.dim(), cols))
    }

    /// The swap `M (x) N -> N (x) M`.
    pub fn swap(&self, into: &TensorProduct<F>) -> ModuleHom<F> {
        let cols = self.representatives().into_iter().map(|(a, b)| into.class_of(b, a)).collect();
        ModuleHom::new_unchecked(self.module.clone(), into.module.clone(), Matrix::from_columns(into.dim(), cols))
    }
}

/// `xi: C (x) Hom(C, M) -> M`, `c (x) phi -> phi(c)`.
pub fn evaluation_map<F: Field>(c: &Module<F>, m: &Module<F>) -> Result<ModuleHom<F>> {
    let h = hom_module(c, m)?;
    let t = tensor_module(c, &h.module)?;
    let basis: Vec<_> = (0..h.dim()).map(|j| h.basis_matrix(j)).collect();
    let cols = t.representatives().into_iter().map(|(a, b)| basis[b].col(a).clone()).collect();
    Ok(ModuleHom::new_unchecked(t.module.clone(), m.clone(), Matrix::from_columns(m.dim, cols)))
}

/// `gamma: M -> Hom(C, C (x) M)`, `m -> (c -> c (x) m)`.
pub fn biduality_map<F: Field>(c: &Module<F>, m: &Module<F>) -> Result<ModuleHom<F>> {
    let t = tensor_module(c, m)?;
    let h = hom_module(c, &t.module)?;
    let cols = (0..m.dim)
        .map(|j| {
            let psi = Matrix::from_columns(t.dim(), (0..c.dim).map(|a| t.class_of(a, j)).collect());
            h.coords_of(&psi).ok_or_else(|| Error::InvalidModule("c -> c (x) m failed to be linear".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleHom::new_unchecked(m.clone(), h.module.clone(), Matrix::from_columns(h.dim(), cols)))
}

/// `chi: R -> Hom(C, C)`, `r -> multiplication by r`.
pub fn homothety_map<F: Field>(c: &Module<F>) -> Result<ModuleHom<F>> {
    let h = hom_module(c, c)?;
    let r = Arc::new(FDModule::free(c.ring(), 1));
    let cols = c
        .actions
        .iter()
        .map(|a| h.coords_of(a).ok_or_else(|| Error::InvalidModule("an action is not R-linear".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleHom::new_unchecked(r, h.module.clone(), Matrix::from_columns(h.dim(), cols)))
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoVerdict<F: Field> {
    /// An invertible homomorphism `M -> N`.
    Yes(ModuleHom<F>),
    /// Certified: an invariant differs, or the whole Hom space was searched.
    No(String),
    /// Invariants agree but the randomized search found nothing.
    NoUncertified,
}

impl<F: Field> IsoVerdict<F> {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsoVerdict::Yes(_) => "YES",
            IsoVerdict::No(_) => "NO",
            IsoVerdict::NoUncertified => "NO-UNCERTIFIED",
        }
    }
}

const EXHAUST_LIMIT: u64 = 1 << 20;
const RANDOM_DRAWS_FP: usize = 64;
const RANDOM_DRAWS_Q: usize = 8;

pub fn is_isomorphic<F: Field>(m: &Module<F>, n: &Module<F>) -> Result<IsoVerdict<F>> {
    is_isomorphic_seeded(m, n, 0)
}

/// Searches `Hom(M, N)` for an invertible element: random draws first,
/// then (over small prime fields) every element.
pub fn is_isomorphic_seeded<F: Field>(m: &Module<F>, n: &Module<F>, seed: u64) -> Result<IsoVerdict<F>> {
    if !same_ring(&m.ring, &n.ring) {
        return Err(Error::RingMismatch);
    }
    if m.dim != n.dim {
        return Ok(IsoVerdict::No(format!("dimensions differ: {} vs {}", m.dim, n.dim)));
    }
    let (b0m, b0n) = (m.beta0(), n.beta0());
    if b0m != b0n {
        return Ok(IsoVerdict::No(format!("minimal generator counts differ: {b0m} vs {b0n}")));
    }
    if m.dim == 0 {
        return Ok(IsoVerdict::Yes(ModuleHom::zero(m, n)));
    }
    let f = m.field();
    let h = hom_module(m, n)?;
    let d = h.dim();
    if d == 0 {
        return Ok(IsoVerdict::No("Hom(M, N) = 0".into()));
    }
    let try_coords = |coords: SparseVec<F::Elem>| -> Option<ModuleHom<F>> {
        let mat = h.element_matrix(&coords);
        (rank(f, &mat) == m.dim).then(|| ModuleHom::new_unchecked(m.clone(), n.clone(), mat))
    };
    // Basis elements are a cheap first guess.
    for j in 0..d {
        if let Some(w) = try_coords(SparseVec::unit(f, j)) {
            return Ok(IsoVerdict::Yes(w));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = if f.order().is_some() { RANDOM_DRAWS_FP } else { RANDOM_DRAWS_Q };
    for _ in 0..draws {
        let coords: Vec<_> = (0..d).map(|_| f.random(&mut rng)).collect();
        if let Some(w) = try_coords(SparseVec::from_dense(f, &coords)) {
            return Ok(IsoVerdict::Yes(w));
        }
    }
    if let Some(q) = f.order() {
        if let Some(total) = q.checked_pow(d as u32).filter(|&t| t <= EXHAUST_LIMIT) {
            for idx in 1..total {
                let mut x = idx;
                let coords: Vec<_> = (0..d)
                    .map(|_| {
                        let e = f.nth_element(x % q);
                        x /= q;
                        e
                    })
                    .collect();
                if let Some(w) = try_coords(SparseVec::from_dense(f, &coords)) {
                    return Ok(IsoVerdict::Yes(w));
                }
            }
            return Ok(IsoVerdict::No(format!("no invertible element among all {total} homomorphisms")));
        }
    }
    Ok(IsoVerdict::NoUncertified)
}

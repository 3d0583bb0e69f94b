//! Minimal free resolutions, chain complexes, homology, absolute Tor/Ext
//! and long exact sequences.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::linalg::sparse::Accumulator;
use crate::linalg::{Field, Matrix, Solver, SparseVec, Subspace};
use crate::module::{same_ring, FDModule, Module, ModuleHom, Ring};

/// An `R`-linear map `R^source -> R^target`, stored by the images of the
/// free generators (as vectors of `R^target`, index `h * dim R + l`).
#[derive(Clone, Debug, PartialEq)]
pub struct FreeMap<E> {
    pub source_rank: usize,
    pub target_rank: usize,
    pub cols: Vec<SparseVec<E>>,
}

impl<E: Clone> FreeMap<E> {
    pub fn zero(source_rank: usize, target_rank: usize) -> Self {
        FreeMap { source_rank, target_rank, cols: vec![SparseVec::new(); source_rank] }
    }

    /// The ring element in row `h`, column `g`.
    pub fn entry(&self, h: usize, g: usize, ring_dim: usize) -> SparseVec<E> {
        self.cols[g].window(h * ring_dim, ring_dim)
    }

    /// The underlying `k`-linear map.
    pub fn to_k_matrix<F: Field<Elem = E>>(&self, ring: &Ring<F>) -> Matrix<E> {
        let f = ring.field();
        let d = ring.dim();
        let mut acc = Accumulator::new(f, self.target_rank * d);
        let mut cols = Vec::with_capacity(self.source_rank * d);
        for col in &self.cols {
            for l in 0..d {
                for (idx, c) in col.iter() {
                    let (h, m) = (idx / d, idx % d);
                    for (k, y) in ring.product(m, l).iter() {
                        acc.add_mul(f, h * d + k, c, y);
                    }
                }
                cols.push(acc.drain(f));
            }
        }
        Matrix::from_columns(self.target_rank * d, cols)
    }

    /// `self (x) Y` under `R^n (x) Y = Y^n`: block `(h, g)` is the action
    /// of entry `(h, g)` on `Y`.
    pub fn on_module<F: Field<Elem = E>>(&self, y: &FDModule<F>) -> Matrix<E> {
        let f = y.field();
        let d = y.ring().dim();
        let dy = y.dim();
        let mut acc = Accumulator::new(f, self.target_rank * dy);
        let mut cols = Vec::with_capacity(self.source_rank * dy);
        for col in &self.cols {
            for b in 0..dy {
                for (idx, c) in col.iter() {
                    let (h, m) = (idx / d, idx % d);
                    for (k, v) in y.action(m).col(b).iter() {
                        acc.add_mul(f, h * dy + k, c, v);
                    }
                }
                cols.push(acc.drain(f));
            }
        }
        Matrix::from_columns(self.target_rank * dy, cols)
    }

    /// `Hom(self, Y): Y^target -> Y^source`, `phi -> phi o self`; block
    /// `(g, h)` is the action of entry `(h, g)`.
    pub fn hom_into<F: Field<Elem = E>>(&self, y: &FDModule<F>) -> Matrix<E> {
        let f = y.field();
        let d = y.ring().dim();
        let dy = y.dim();
        let mut pairs: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.target_rank * dy];
        for (g, col) in self.cols.iter().enumerate() {
            for (idx, c) in col.iter() {
                let (h, m) = (idx / d, idx % d);
                for b in 0..dy {
                    for (k, v) in y.action(m).col(b).iter() {
                        pairs[h * dy + b].push((g * dy + k, f.mul(c, v)));
                    }
                }
            }
        }
        let cols = pairs.into_iter().map(|p| SparseVec::from_pairs(f, p)).collect();
        Matrix::from_columns(self.source_rank * dy, cols)
    }

    /// `self` after `other`.
    pub fn compose<F: Field<Elem = E>>(&self, ring: &Ring<F>, other: &FreeMap<E>) -> FreeMap<E> {
        let m = self.to_k_matrix(ring);
        FreeMap {
            source_rank: other.source_rank,
            target_rank: self.target_rank,
            cols: other.cols.iter().map(|c| m.mul_vec(ring.field(), c)).collect(),
        }
    }
}

/// The `R`-linear map `R^n -> Y` sending generator `g` to `images[g]`.
pub fn free_to_module<F: Field>(y: &FDModule<F>, images: &[SparseVec<F::Elem>]) -> Matrix<F::Elem> {
    let d = y.ring().dim();
    let f = y.field();
    let mut cols = Vec::with_capacity(images.len() * d);
    for v in images {
        for l in 0..d {
            cols.push(y.action(l).mul_vec(f, v));
        }
    }
    Matrix::from_columns(y.dim(), cols)
}

/// A bounded complex of free modules `F_n -> ... -> F_0` in degrees `0..=n`.
#[derive(Clone, Debug)]
pub struct FreeComplex<F: Field> {
    pub ring: Ring<F>,
    pub ranks: Vec<usize>,
    /// `diffs[i - 1] = d_i : F_i -> F_{i-1}`
    pub diffs: Vec<FreeMap<F::Elem>>,
}

impl<F: Field> FreeComplex<F> {
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `F (x) Y` with `F_i (x) Y = Y^{rank_i}`.
    pub fn tensor(&self, y: &Module<F>) -> ChainComplex<F> {
        let modules = self.ranks.iter().map(|&b| Arc::new(y.power(b))).collect::<Vec<_>>();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| ModuleHom::new_unchecked(modules[k + 1].clone(), modules[k].clone(), d.on_module(y)))
            .collect();
        ChainComplex::from_parts(0, modules, diffs)
    }

    /// `Hom(F, Y)` placed in degrees `0, -1, ..., -n`.
    pub fn hom(&self, y: &Module<F>) -> ChainComplex<F> {
        let n = self.length();
        // index -i holds Hom(F_i, Y); the differential from -i to -i-1 is Hom(d_{i+1}, Y)
        let modules: Vec<Module<F>> = (0..=n).rev().map(|i| Arc::new(y.power(self.ranks[i]))).collect();
        let diffs = (0..n)
            .rev()
            .map(|i| {
                let src = modules[n - i].clone();
                let tgt = modules[n - i - 1].clone();
                ModuleHom::new_unchecked(src, tgt, self.diffs[i].hom_into(y))
            })
            .collect();
        ChainComplex::from_parts(-(n as isize), modules, diffs)
    }

    /// The free modules and `k`-matrices as a complex of modules.
    pub fn as_complex(&self) -> ChainComplex<F> {
        let modules = self.ranks.iter().map(|&b| Arc::new(FDModule::free(&self.ring, b))).collect::<Vec<_>>();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| ModuleHom::new_unchecked(modules[k + 1].clone(), modules[k].clone(), d.to_k_matrix(&self.ring)))
            .collect();
        ChainComplex::from_parts(0, modules, diffs)
    }
}

/// A minimal free resolution `F -> M` computed to some length.
#[derive(Clone, Debug)]
pub struct FreeResolution<F: Field> {
    target: Module<F>,
    complex: FreeComplex<F>,
    /// `F_0 -> M`
    augmentation: ModuleHom<F>,
    /// Kernel of the last differential (the next syzygy), inside `F_n`.
    top_kernel: Subspace<F::Elem>,
}

impl<F: Field> FreeResolution<F> {
    /// Resolves `M` through degree `n`.
    pub fn new(m: &Module<F>, n: usize) -> Self {
        let ring = m.ring().clone();
        let f = ring.field();
        let gens = m.minimal_generators().generators;
        let b0 = gens.len();
        let aug = free_to_module(m, &gens);
        let top_kernel = Subspace::kernel(f, &aug);
        let f0 = Arc::new(FDModule::free(&ring, b0));
        let augmentation = ModuleHom::new_unchecked(f0, m.clone(), aug);
        let mut res = FreeResolution {
            target: m.clone(),
            complex: FreeComplex { ring, ranks: vec![b0], diffs: Vec::new() },
            augmentation,
            top_kernel,
        };
        res.extend_to(n);
        res
    }

    /// Adds degrees until the resolution reaches length `n`.
    pub fn extend_to(&mut self, n: usize) {
        while self.length() < n {
            self.step();
        }
    }

    fn step(&mut self) {
        let ring = self.complex.ring.clone();
        let f = ring.field();
        let d = ring.dim();
        let top_rank = *self.complex.ranks.last().unwrap();
        let k = &self.top_kernel;
        // m K inside K, in K-coordinates
        let mut mk = Vec::new();
        let mut acc = Accumulator::new(f, top_rank * d);
        for g in ring.generator_matrices() {
            let big = g.repeat_diag(top_rank);
            for v in k.basis() {
                let w = big.mul_vec(f, v);
                debug_assert!(k.reduce_with(f, &w, &mut acc).is_zero());
                mk.push(k.coords(&w));
            }
        }
        let mk = Subspace::span(f, k.dim(), &mk);
        let cols: Vec<_> = mk.complement_positions().into_iter().map(|q| k.basis()[q].clone()).collect();
        let dmap = FreeMap { source_rank: cols.len(), target_rank: top_rank, cols };
        let kmat = dmap.to_k_matrix(&ring);
        self.top_kernel = Subspace::kernel(f, &kmat);
        self.complex.ranks.push(dmap.source_rank);
        self.complex.diffs.push(dmap);
    }

    pub fn length(&self) -> usize {
        self.complex.length()
    }

    pub fn target(&self) -> &Module<F> {
        &self.target
    }

    pub fn ring(&self) -> &Ring<F> {
        &self.complex.ring
    }

    pub fn betti(&self) -> &[usize] {
        &self.complex.ranks
    }

    /// `d_i : F_i -> F_{i-1}` for `1 <= i <= length`.
    pub fn differential(&self, i: usize) -> &FreeMap<F::Elem> {
        &self.complex.diffs[i - 1]
    }

    pub fn augmentation(&self) -> &ModuleHom<F> {
        &self.augmentation
    }

    pub fn complex(&self) -> &FreeComplex<F> {
        &self.complex
    }

    /// `F_n -> ... -> F_0 -> M -> 0`, with `M` in degree -1 and an explicit
    /// zero in degree -2.
    pub fn augmented_complex(&self) -> ChainComplex<F> {
        let base = self.complex.as_complex();
        let zero = Arc::new(FDModule::zero(self.ring()));
        let mut modules = vec![zero.clone(), self.target.clone()];
        modules.extend(base.modules.iter().cloned());
        let mut diffs = vec![ModuleHom::zero(&self.target, &zero)];
        let aug = ModuleHom::new_unchecked(modules[2].clone(), self.target.clone(), self.augmentation.matrix().clone());
        diffs.push(aug);
        diffs.extend(base.diffs.iter().cloned());
        ChainComplex::from_parts(-2, modules, diffs)
    }

    /// Every differential has entries in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        let ring = self.ring();
        let d = ring.dim();
        self.complex.diffs.iter().all(|dm| {
            dm.cols.iter().all(|c| {
                (0..dm.target_rank).all(|h| ring.field().is_zero(&ring.residue(&c.window(h * d, d))))
            })
        })
    }
}

/// Shares resolutions between queries on the same module value. Keyed by
/// pointer identity; purely an optimization.
#[derive(Debug)]
pub struct ResolutionCache<F: Field> {
    inner: Mutex<HashMap<usize, (Module<F>, Arc<FreeResolution<F>>)>>,
}

impl<F: Field> Default for ResolutionCache<F> {
    fn default() -> Self {
        ResolutionCache { inner: Mutex::new(HashMap::new()) }
    }
}

impl<F: Field> ResolutionCache<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn resolve(&self, m: &Module<F>, n: usize) -> Arc<FreeResolution<F>> {
        let key = Arc::as_ptr(m) as usize;
        if let Some((_, r)) = self.inner.lock().unwrap().get(&key) {
            if r.length() >= n {
                return r.clone();
            }
        }
        let existing = self.inner.lock().unwrap().get(&key).map(|(_, r)| r.as_ref().clone());
        let res = match existing {
            Some(mut r) => {
                r.extend_to(n);
                r
            }
            None => FreeResolution::new(m, n),
        };
        let res = Arc::new(res);
        self.inner.lock().unwrap().insert(key, (m.clone(), res.clone()));
        res
    }
}

pub fn minimal_free_resolution<F: Field>(m: &Module<F>, n: usize) -> FreeResolution<F> {
    FreeResolution::new(m, n)
}

pub fn betti_numbers<F: Field>(m: &Module<F>, n: usize) -> Vec<usize> {
    FreeResolution::new(m, n).betti().to_vec()
}

/// Outcome of an exactness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    FailsAt { index: isize, homology_dim: usize },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

/// A bounded chain complex `X_hi -> ... -> X_lo` with `d_i : X_i -> X_{i-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Field> {
    lo: isize,
    modules: Vec<Module<F>>,
    /// `diffs[k] = d_{lo + k + 1}`
    diffs: Vec<ModuleHom<F>>,
}

impl<F: Field> ChainComplex<F> {
    /// Checks shapes, rings and `d o d = 0`.
    pub fn new(lo: isize, modules: Vec<Module<F>>, diffs: Vec<ModuleHom<F>>) -> Result<Self> {
        if modules.is_empty() || diffs.len() + 1 != modules.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, dk) in diffs.iter().enumerate() {
            if dk.source().dim() != modules[k + 1].dim() || dk.target().dim() != modules[k].dim() {
                return Err(Error::ShapeMismatch(format!("differential into degree {} has the wrong shape", lo + k as isize)));
            }
            if !same_ring(dk.source().ring(), modules[0].ring()) {
                return Err(Error::RingMismatch);
            }
        }
        let c = Self::from_parts(lo, modules, diffs);
        if let Some(i) = c.composite_failure() {
            return Err(Error::ShapeMismatch(format!("d_{} o d_{} != 0", i - 1, i)));
        }
        Ok(c)
    }

    pub(crate) fn from_parts(lo: isize, modules: Vec<Module<F>>, diffs: Vec<ModuleHom<F>>) -> Self {
        debug_assert_eq!(diffs.len() + 1, modules.len());
        ChainComplex { lo, modules, diffs }
    }

    /// First `i` with `d_{i-1} d_i != 0`.
    pub fn composite_failure(&self) -> Option<isize> {
        (1..self.diffs.len()).find_map(|k| {
            let prod = self.diffs[k - 1].matrix().mul(self.field(), self.diffs[k].matrix()).unwrap();
            (!prod.is_zero()).then_some(self.lo + k as isize + 1)
        })
    }

    /// Every differential is `R`-linear and composites vanish.
    pub fn validate(&self) -> Result<()> {
        for d in &self.diffs {
            if let Some(g) = d.linearity_failure() {
                return Err(Error::NotRLinear(g));
            }
        }
        if let Some(i) = self.composite_failure() {
            return Err(Error::ShapeMismatch(format!("d_{} o d_{} != 0", i - 1, i)));
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        self.modules[0].field()
    }

    pub fn lo(&self) -> isize {
        self.lo
    }

    pub fn hi(&self) -> isize {
        self.lo + self.modules.len() as isize - 1
    }

    fn check(&self, i: isize) -> Result<usize> {
        if i < self.lo || i > self.hi() {
            return Err(Error::IndexOutOfRange { index: i, lo: self.lo, hi: self.hi() });
        }
        Ok((i - self.lo) as usize)
    }

    pub fn module(&self, i: isize) -> Result<&Module<F>> {
        Ok(&self.modules[self.check(i)?])
    }

    pub fn modules(&self) -> &[Module<F>] {
        &self.modules
    }

    /// `d_i : X_i -> X_{i-1}` for `lo < i <= hi`.
    pub fn differential(&self, i: isize) -> Result<&ModuleHom<F>> {
        let k = self.check(i)?;
        if k == 0 {
            return Err(Error::IndexOutOfRange { index: i, lo: self.lo + 1, hi: self.hi() });
        }
        Ok(&self.diffs[k - 1])
    }

    pub fn differentials(&self) -> &[ModuleHom<F>] {
        &self.diffs
    }

    /// `d_i`'s matrix, or a zero matrix at the ends.
    fn d_rank(&self, i: isize) -> usize {
        if i <= self.lo || i > self.hi() {
            0
        } else {
            self.diffs[(i - self.lo - 1) as usize].rank()
        }
    }

    /// `dim H_i` from ranks alone.
    pub fn homology_dim(&self, i: isize) -> Result<usize> {
        let k = self.check(i)?;
        Ok(self.modules[k].dim() - self.d_rank(i) - self.d_rank(i + 1))
    }

    /// All homology dimensions, lowest degree first.
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (self.lo..=self.hi() + 1).map(|i| self.d_rank(i)).collect();
        self.modules.iter().enumerate().map(|(k, m)| m.dim() - ranks[k] - ranks[k + 1]).collect()
    }

    /// Homology as a subquotient module.
    pub fn homology(&self, i: isize) -> Result<Homology<F>> {
        let k = self.check(i)?;
        let f = self.field();
        let x = &self.modules[k];
        let cycles = if k == 0 {
            Subspace::full(f, x.dim())
        } else {
            Subspace::kernel(f, self.diffs[k - 1].matrix())
        };
        let bounds: Vec<_> = if k + 1 < self.modules.len() {
            self.diffs[k].matrix().columns().iter().map(|c| cycles.coords(c)).collect()
        } else {
            Vec::new()
        };
        let bounds = Subspace::span(f, cycles.dim(), &bounds);
        let slots = bounds.complement_slots();
        let reps = bounds.complement_positions();
        let q = reps.len();
        let actions = x
            .actions()
            .iter()
            .map(|a| {
                let cols = reps
                    .iter()
                    .map(|&r| bounds.quotient_coords(f, &cycles.coords(&a.mul_vec(f, &cycles.basis()[r])), &slots))
                    .collect();
                Matrix::from_columns(q, cols)
            })
            .collect();
        let module = Arc::new(FDModule::from_actions_unchecked(x.ring().clone(), q, actions));
        Ok(Homology { degree: i, module, cycles, bounds, slots, reps })
    }

    /// Exactness at every index strictly between `lo` and `hi`.
    pub fn is_exact(&self) -> Exactness {
        let dims = self.homology_dims();
        for (k, &h) in dims.iter().enumerate().take(dims.len().saturating_sub(1)).skip(1) {
            if h != 0 {
                return Exactness::FailsAt { index: self.lo + k as isize, homology_dim: h };
            }
        }
        Exactness::Exact
    }

    /// Exactness at every index, ends included.
    pub fn is_exact_everywhere(&self) -> Exactness {
        for (k, &h) in self.homology_dims().iter().enumerate() {
            if h != 0 {
                return Exactness::FailsAt { index: self.lo + k as isize, homology_dim: h };
            }
        }
        Exactness::Exact
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.modules
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let s = if (self.lo + k as isize).rem_euclid(2) == 0 { 1 } else { -1 };
                s * m.dim() as i64
            })
            .sum()
    }
}

/// `H_i = Z_i / B_i` with the data needed to move classes around.
#[derive(Clone, Debug)]
pub struct Homology<F: Field> {
    pub degree: isize,
    pub module: Module<F>,
    cycles: Subspace<F::Elem>,
    /// Boundaries in cycle coordinates.
    bounds: Subspace<F::Elem>,
    slots: Vec<u32>,
    reps: Vec<usize>,
}

impl<F: Field> Homology<F> {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// A cycle representing basis class `q`.
    pub fn representative(&self, q: usize) -> &SparseVec<F::Elem> {
        &self.cycles.basis()[self.reps[q]]
    }

    /// The class of a cycle.
    pub fn class_of(&self, z: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = self.module.field();
        debug_assert!(self.cycles.contains(f, z), "not a cycle");
        self.bounds.quotient_coords(f, &self.cycles.coords(z), &self.slots)
    }

    pub fn is_cycle(&self, z: &SparseVec<F::Elem>) -> bool {
        self.cycles.contains(self.module.field(), z)
    }

    /// `H(f)` for a degreewise map `f : X_i -> Y_i` of a chain map.
    pub fn induced(&self, map: &ModuleHom<F>, into: &Homology<F>) -> ModuleHom<F> {
        let cols = (0..self.dim()).map(|q| into.class_of(&map.apply(self.representative(q)))).collect();
        ModuleHom::new_unchecked(self.module.clone(), into.module.clone(), Matrix::from_columns(into.dim(), cols))
    }
}

/// `0 -> X' -> X -> X'' -> 0`, degreewise exact, complexes sharing `lo`
/// and `hi`. `inc[k]`, `proj[k]` live in degree `lo + k`.
#[derive(Clone, Debug)]
pub struct ComplexSes<F: Field> {
    pub sub: ChainComplex<F>,
    pub mid: ChainComplex<F>,
    pub quot: ChainComplex<F>,
    pub inc: Vec<ModuleHom<F>>,
    pub proj: Vec<ModuleHom<F>>,
}

/// A long exact sequence packaged as a complex, with a label per index.
#[derive(Clone, Debug)]
pub struct LongExactSequence<F: Field> {
    pub complex: ChainComplex<F>,
    pub labels: Vec<String>,
    /// Lowest homological degree appearing.
    pub lo: isize,
}

impl<F: Field> LongExactSequence<F> {
    /// Dimensions of the terms, top first, with their labels.
    pub fn table(&self) -> Vec<(String, usize)> {
        let dims = self.complex.modules.iter().map(|m| m.dim());
        self.labels.iter().cloned().zip(dims).rev().collect()
    }

    /// Renames the three columns (sub, middle, quotient).
    pub fn relabel(&mut self, names: [&str; 3]) {
        for (p, label) in self.labels.iter_mut().enumerate().skip(1) {
            let (k, r) = ((p - 1) / 3, (p - 1) % 3);
            *label = format!("{}_{}", names[2 - r], self.lo + k as isize);
        }
    }

    /// The connecting maps (`H_i(X'') -> H_{i-1}(X')`), top first.
    pub fn connecting_maps(&self) -> Vec<&ModuleHom<F>> {
        let c = &self.complex;
        (1..=c.hi())
            .rev()
            .filter(|i| i % 3 == 0)
            .map(|i| c.differential(i).expect("in range"))
            .collect()
    }
}

/// The homology sequence of a short exact sequence of complexes, through
/// `H_top(X'')`. Index `3(i - lo)` holds `H_i(X'')`, `+1` holds `H_i(X)`,
/// `+2` holds `H_i(X')`; index -1 is an explicit zero. Requires
/// `hi > top` so that every term is honest homology.
pub fn homology_les<F: Field>(ses: &ComplexSes<F>, top: isize, names: [&str; 3]) -> Result<LongExactSequence<F>> {
    let lo = ses.mid.lo();
    if ses.sub.lo() != lo || ses.quot.lo() != lo || top < lo || ses.mid.hi() <= top || ses.sub.hi() <= top || ses.quot.hi() <= top {
        return Err(Error::ShapeMismatch("complexes must share lo and extend past the top degree".into()));
    }
    let f = ses.mid.field().clone();
    let ring = ses.mid.modules[0].ring().clone();
    let nd = (top - lo) as usize;
    let hs = |c: &ChainComplex<F>, upto: usize| (0..=upto).map(|k| c.homology(lo + k as isize)).collect::<Result<Vec<_>>>();
    let h_sub = hs(&ses.sub, nd)?;
    let h_mid = hs(&ses.mid, nd)?;
    let h_quot = hs(&ses.quot, nd)?;
    let mut modules: Vec<Module<F>> = vec![Arc::new(FDModule::zero(&ring))];
    let mut labels = vec!["0".to_string()];
    let mut diffs: Vec<ModuleHom<F>> = Vec::new();
    for k in 0..=nd {
        let i = lo + k as isize;
        // index 3k: H_i(X'')
        let prev = modules.last().unwrap().clone();
        if k == 0 {
            diffs.push(ModuleHom::zero(&h_quot[0].module, &prev));
        } else {
            diffs.push(connecting(&f, ses, k, &h_quot[k], &h_sub[k - 1])?);
        }
        modules.push(h_quot[k].module.clone());
        labels.push(format!("{}_{i}", names[2]));
        if k == nd {
            break;
        }
        // index 3k+1: H_i(X) -> H_i(X'')
        diffs.push(h_mid[k].induced(&ses.proj[k], &h_quot[k]));
        modules.push(h_mid[k].module.clone());
        labels.push(format!("{}_{i}", names[1]));
        // index 3k+2: H_i(X') -> H_i(X)
        diffs.push(h_sub[k].induced(&ses.inc[k], &h_mid[k]));
        modules.push(h_sub[k].module.clone());
        labels.push(format!("{}_{i}", names[0]));
    }
    let complex = ChainComplex::new(-1, modules, diffs)?;
    Ok(LongExactSequence { complex, labels, lo })
}

/// `delta : H_i(X'') -> H_{i-1}(X')`: lift through `pi`, apply `d`, pull
/// back through `iota`.
fn connecting<F: Field>(
    f: &F,
    ses: &ComplexSes<F>,
    k: usize,
    from: &Homology<F>,
    into: &Homology<F>,
) -> Result<ModuleHom<F>> {
    let mut lift = Solver::new(f, ses.proj[k].matrix());
    let mut pull = Solver::new(f, ses.inc[k - 1].matrix());
    let d = ses.mid.diffs[k - 1].matrix();
    let cols = (0..from.dim())
        .map(|q| {
            let z = lift.solve(from.representative(q)).ok_or(Error::NotExact(ses.mid.lo() + k as isize))?;
            let w = d.mul_vec(f, &z);
            let y = pull.solve(&w).ok_or(Error::NotExact(ses.mid.lo() + k as isize - 1))?;
            Ok(into.class_of(&y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleHom::new_unchecked(from.module.clone(), into.module.clone(), Matrix::from_columns(into.dim(), cols)))
}

/// `H_i(F (x) N)` for a resolution `F` of `M`.
pub fn tor<F: Field>(m: &Module<F>, n: &Module<F>, i: usize) -> Result<Module<F>> {
    if !same_ring(m.ring(), n.ring()) {
        return Err(Error::RingMismatch);
    }
    let res = FreeResolution::new(m, i + 1);
    Ok(res.complex().tensor(n).homology(i as isize)?.module)
}

/// `dim Tor_i(M, N)` for `0 <= i <= max`.
pub fn tor_dims<F: Field>(m: &Module<F>, n: &Module<F>, max: usize) -> Result<Vec<usize>> {
    if !same_ring(m.ring(), n.ring()) {
        return Err(Error::RingMismatch);
    }
    tor_dims_from(&FreeResolution::new(m, max + 1), n, max)
}

pub fn tor_dims_from<F: Field>(res: &FreeResolution<F>, n: &Module<F>, max: usize) -> Result<Vec<usize>> {
    if res.length() < max + 1 {
        return Err(Error::IndexOutOfRange { index: max as isize + 1, lo: 0, hi: res.length() as isize });
    }
    let mut dims = res.complex().tensor(n).homology_dims();
    dims.truncate(max + 1);
    Ok(dims)
}

/// `H^i(Hom(F, N))` for a resolution `F` of `M`.
pub fn ext<F: Field>(m: &Module<F>, n: &Module<F>, i: usize) -> Result<Module<F>> {
    if !same_ring(m.ring(), n.ring()) {
        return Err(Error::RingMismatch);
    }
    let res = FreeResolution::new(m, i + 1);
    Ok(res.complex().hom(n).homology(-(i as isize))?.module)
}

/// `dim Ext^i(M, N)` for `0 <= i <= max`.
pub fn ext_dims<F: Field>(m: &Module<F>, n: &Module<F>, max: usize) -> Result<Vec<usize>> {
    if !same_ring(m.ring(), n.ring()) {
        return Err(Error::RingMismatch);
    }
    ext_dims_from(&FreeResolution::new(m, max + 1), n, max)
}

pub fn ext_dims_from<F: Field>(res: &FreeResolution<F>, n: &Module<F>, max: usize) -> Result<Vec<usize>> {
    if res.length() < max + 1 {
        return Err(Error::IndexOutOfRange { index: max as isize + 1, lo: 0, hi: res.length() as isize });
    }
    let mut dims = res.complex().hom(n).homology_dims();
    dims.reverse();
    dims.truncate(max + 1);
    Ok(dims)
}

/// `0 -> M' -> M -> M'' -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence<F: Field> {
    pub inc: ModuleHom<F>,
    pub proj: ModuleHom<F>,
}

impl<F: Field> ShortExactSequence<F> {
    pub fn new(inc: ModuleHom<F>, proj: ModuleHom<F>) -> Result<Self> {
        if inc.target().dim() != proj.source().dim() || !same_ring(inc.target().ring(), proj.source().ring()) {
            return Err(Error::ShapeMismatch("maps do not compose".into()));
        }
        let s = ShortExactSequence { inc, proj };
        s.check()?;
        Ok(s)
    }

    /// Positions: 0 at `M'`, 1 at `M`, 2 at `M''`.
    pub fn check(&self) -> Result<()> {
        if !self.inc.is_injective() {
            return Err(Error::NotExact(0));
        }
        let f = self.inc.field();
        if !self.proj.matrix().mul(f, self.inc.matrix())?.is_zero()
            || self.inc.rank() + self.proj.rank() != self.inc.target().dim()
        {
            return Err(Error::NotExact(1));
        }
        if !self.proj.is_surjective() {
            return Err(Error::NotExact(2));
        }
        Ok(())
    }

    pub fn sub(&self) -> &Module<F> {
        self.inc.source()
    }

    pub fn mid(&self) -> &Module<F> {
        self.inc.target()
    }

    pub fn quot(&self) -> &Module<F> {
        self.proj.target()
    }

    /// `0 -> N -> N (+) P -> P -> 0`.
    pub fn split(n: &Module<F>, p: &Module<F>) -> Result<Self> {
        let s = crate::module::direct_sum(n, p)?;
        let [i0, _] = s.injections;
        let [_, p1] = s.projections;
        Self::new(i0, p1)
    }

    /// The sequence as a complex `0 -> M' -> M -> M'' -> 0` in degrees
    /// `3, 2, 1` with zeros at 4 and 0.
    pub fn as_complex(&self) -> ChainComplex<F> {
        let ring = self.sub().ring();
        let z = Arc::new(FDModule::zero(ring));
        let modules = vec![z.clone(), self.quot().clone(), self.mid().clone(), self.sub().clone(), z.clone()];
        let diffs = vec![
            ModuleHom::zero(self.quot(), &z),
            self.proj.clone(),
            self.inc.clone(),
            ModuleHom::zero(&z, self.sub()),
        ];
        ChainComplex::from_parts(0, modules, diffs)
    }
}

/// A free resolution of the middle term assembled from resolutions of the
/// ends: `P_i = P'_i (+) P''_i` with `d = [[d', theta], [0, d'']]`.
#[derive(Clone, Debug)]
pub struct Horseshoe<F: Field> {
    pub sub: FreeResolution<F>,
    pub quot: FreeResolution<F>,
    pub mid: FreeComplex<F>,
    /// `P_0 -> M`
    pub augmentation: Matrix<F::Elem>,
}

pub fn horseshoe<F: Field>(ses: &ShortExactSequence<F>, n: usize) -> Result<Horseshoe<F>> {
    ses.check()?;
    let ring = ses.mid().ring().clone();
    let f = ring.field();
    let d = ring.dim();
    let u = ring.unit_index();
    let sub = FreeResolution::new(ses.sub(), n);
    let quot = FreeResolution::new(ses.quot(), n);
    let m = ses.mid();
    let fail = |i: isize| Error::NotExact(i);

    // lambda: P''_0 -> M lifting the augmentation of M'' through pi
    let mut through_pi = Solver::new(f, ses.proj.matrix());
    let b0q = quot.betti()[0];
    let lambda_gens = (0..b0q)
        .map(|g| through_pi.solve(quot.augmentation().matrix().col(g * d + u)).ok_or_else(|| fail(2)))
        .collect::<Result<Vec<_>>>()?;
    let lambda = free_to_module(m, &lambda_gens);
    let aug_sub = sub.augmentation().matrix().clone();
    let ia = ses.inc.matrix().mul(f, &aug_sub)?;
    let augmentation = Matrix::hstack(&[&ia, &lambda])?;

    let mut thetas: Vec<FreeMap<F::Elem>> = Vec::new();
    let mut through_iota = Solver::new(f, ses.inc.matrix());
    for i in 1..=n {
        let dq = quot.differential(i);
        let b_sub_prev = sub.betti()[i - 1];
        let mut cols = Vec::with_capacity(dq.source_rank);
        if i == 1 {
            let mut through_eps = Solver::new(f, &aug_sub);
            for g in 0..dq.source_rank {
                let u_m = lambda.mul_vec(f, &dq.cols[g]);
                let y = through_iota.solve(&u_m.neg(f)).ok_or_else(|| fail(1))?;
                cols.push(through_eps.solve(&y).ok_or_else(|| fail(0))?);
            }
        } else {
            let prev = thetas[i - 2].to_k_matrix(&ring);
            let mut through_d = Solver::new(f, &sub.differential(i - 1).to_k_matrix(&ring));
            for g in 0..dq.source_rank {
                let t = prev.mul_vec(f, &dq.cols[g]);
                cols.push(through_d.solve(&t.neg(f)).ok_or_else(|| fail(i as isize - 1))?);
            }
        }
        thetas.push(FreeMap { source_rank: dq.source_rank, target_rank: b_sub_prev, cols });
    }

    let ranks: Vec<usize> = (0..=n).map(|i| sub.betti()[i] + quot.betti()[i]).collect();
    let diffs = (1..=n)
        .map(|i| {
            let ds = sub.differential(i);
            let dq = quot.differential(i);
            let off = sub.betti()[i - 1] * d;
            let mut cols: Vec<SparseVec<F::Elem>> = ds.cols.clone();
            for g in 0..dq.source_rank {
                cols.push(thetas[i - 1].cols[g].add(f, &dq.cols[g].shifted(off)));
            }
            FreeMap { source_rank: ranks[i], target_rank: ranks[i - 1], cols }
        })
        .collect();
    let mid = FreeComplex { ring, ranks, diffs };
    Ok(Horseshoe { sub, quot, mid, augmentation })
}

/// The Tor long exact sequence of `ses` against `N`, through degree `n`
/// (plus the top term `Tor_{n+1}(M'', N)`), from a horseshoe resolution.
pub fn horseshoe_les<F: Field>(ses: &ShortExactSequence<F>, n_mod: &Module<F>, n: usize) -> Result<LongExactSequence<F>> {
    let h = horseshoe(ses, n + 2)?;
    let sub = h.sub.complex().tensor(n_mod);
    let quot = h.quot.complex().tensor(n_mod);
    let mid = h.mid.tensor(n_mod);
    let f = n_mod.field();
    let dn = n_mod.dim();
    let mut inc = Vec::new();
    let mut proj = Vec::new();
    for i in 0..=n + 2 {
        let (bs, bq) = (h.sub.betti()[i], h.quot.betti()[i]);
        let total = (bs + bq) * dn;
        let i_cols = (0..bs * dn).map(|j| SparseVec::unit(f, j)).collect();
        inc.push(ModuleHom::new_unchecked(
            sub.modules[i].clone(),
            mid.modules[i].clone(),
            Matrix::from_columns(total, i_cols),
        ));
        let p_cols = (0..total)
            .map(|j| if j < bs * dn { SparseVec::new() } else { SparseVec::unit(f, j - bs * dn) })
            .collect();
        proj.push(ModuleHom::new_unchecked(mid.modules[i].clone(), quot.modules[i].clone(), Matrix::from_columns(bq * dn, p_cols)));
    }
    let ses_c = ComplexSes { sub, mid, quot, inc, proj };
    homology_les(&ses_c, n as isize + 1, ["Tor(M',N)", "Tor(M,N)", "Tor(M'',N)"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{square_zero_2vars, truncated_poly};
    use crate::linalg::PrimeField;
    use crate::module::tensor_module;

    fn ring() -> Ring<PrimeField> {
        Arc::new(square_zero_2vars(PrimeField::new(5).unwrap()))
    }

    #[test]
    fn betti_numbers_over_square_zero() {
        let r = ring();
        let k = Arc::new(FDModule::residue_field(&r));
        assert_eq!(betti_numbers(&k, 5), vec![1, 2, 4, 8, 16, 32]);
        let w = Arc::new(FDModule::free(&r, 1).matlis_dual());
        assert_eq!(betti_numbers(&w, 4), vec![2, 3, 6, 12, 24]);
        let free = Arc::new(FDModule::free(&r, 2));
        assert_eq!(betti_numbers(&free, 3), vec![2, 0, 0, 0]);
    }

    #[test]
    fn resolution_is_minimal_and_exact() {
        let r = ring();
        let w = Arc::new(FDModule::free(&r, 1).matlis_dual());
        let res = FreeResolution::new(&w, 4);
        assert!(res.is_minimal());
        let aug = res.augmented_complex();
        aug.validate().unwrap();
        assert_eq!(aug.is_exact(), Exactness::Exact);
        assert_eq!(aug.euler_characteristic() % 1, 0);
    }

    #[test]
    fn tor_matches_tensor_and_betti() {
        let r = ring();
        let k = Arc::new(FDModule::residue_field(&r));
        let w = Arc::new(FDModule::free(&r, 1).matlis_dual());
        assert_eq!(tor(&w, &k, 0).unwrap().dim(), tensor_module(&w, &k).unwrap().dim());
        assert_eq!(tor_dims(&w, &k, 3).unwrap(), vec![2, 3, 6, 12]);
        assert_eq!(tor_dims(&k, &w, 3).unwrap(), vec![2, 3, 6, 12]);
        let ww = tensor_module(&w, &w).unwrap().module;
        assert_eq!(tor_dims(&k, &ww, 4).unwrap(), vec![4, 8, 16, 32, 64]);
    }

    #[test]
    fn ext_of_free_vanishes() {
        let r = ring();
        let k = Arc::new(FDModule::residue_field(&r));
        let free = Arc::new(FDModule::free(&r, 1));
        assert_eq!(ext_dims(&free, &k, 3).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(ext(&free, &k, 0).unwrap().dim(), 1);
        let w = Arc::new(free.matlis_dual());
        assert_eq!(ext_dims(&w, &w, 4).unwrap(), vec![3, 0, 0, 0, 0]);
    }

    #[test]
    fn homology_edge_cases() {
        let r = ring();
        let k = Arc::new(FDModule::residue_field(&r));
        let c = ChainComplex::new(0, vec![k.clone(), k.clone()], vec![ModuleHom::identity(&k)]).unwrap();
        assert_eq!(c.homology_dims(), vec![0, 0]);
        let z = ChainComplex::new(0, vec![k.clone(), k.clone()], vec![ModuleHom::zero(&k, &k)]).unwrap();
        assert_eq!(z.homology_dims(), vec![1, 1]);
        assert_eq!(z.homology(1).unwrap().dim(), 1);
        assert!(matches!(z.homology(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn horseshoe_les_for_maximal_ideal() {
        let r = ring();
        let free = Arc::new(FDModule::free(&r, 1));
        let k = Arc::new(FDModule::residue_field(&r));
        let eps = ModuleHom::new(free.clone(), k.clone(), Matrix::from_i64_rows(r.field(), &[&[1, 0, 0]])).unwrap();
        let (_, inc) = eps.kernel();
        let ses = ShortExactSequence::new(inc, eps).unwrap();
        let h = horseshoe(&ses, 4).unwrap();
        let pc = h.mid.as_complex();
        pc.validate().unwrap();
        let les = horseshoe_les(&ses, &k, 3).unwrap();
        assert_eq!(les.complex.is_exact(), Exactness::Exact);
        les.complex.validate().unwrap();
    }

    #[test]
    fn split_sequence_has_zero_connecting_maps() {
        let r = Arc::new(truncated_poly(PrimeField::new(3).unwrap(), 3));
        let k = Arc::new(FDModule::residue_field(&r));
        let free = Arc::new(FDModule::free(&r, 1));
        let ses = ShortExactSequence::split(&k, &free).unwrap();
        let les = horseshoe_les(&ses, &k, 3).unwrap();
        assert!(les.complex.is_exact().is_exact());
        assert!(les.connecting_maps().iter().all(|d| d.is_zero()));
    }
}

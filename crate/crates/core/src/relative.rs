//! Proper C-projective resolutions, relative Tor and Ext, and the
//! C-projective dimensions.
//!
//! Over an artinian local ring flat, projective and free coincide for
//! finitely generated modules, so the C-flat and C-projective flavors are
//! served by one construction and differ only in name.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homalg::{
    ext_dims, horseshoe_les, tor, tor_dims, ChainComplex, Exactness, FreeResolution, LongExactSequence,
    ShortExactSequence,
};
use crate::linalg::{Field, Matrix};
use crate::module::{hom_module, tensor_module, FDModule, HomSpace, Module, ModuleHom, TensorProduct};

/// Which slot is resolved, and by which class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    PcM,
    FcM,
    MPc,
    MFc,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::PcM, Flavor::FcM, Flavor::MPc, Flavor::MFc];

    pub fn label(self) -> &'static str {
        match self {
            Flavor::PcM => "pc-m",
            Flavor::FcM => "fc-m",
            Flavor::MPc => "m-pc",
            Flavor::MFc => "m-fc",
        }
    }

    /// Whether the first argument is the resolved one.
    pub fn resolves_first(self) -> bool {
        matches!(self, Flavor::PcM | Flavor::FcM)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InputParse(format!("unknown flavor {s:?} (expected pc-m, fc-m, m-pc, m-fc)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Homology of (proper resolution) tensored with the other argument.
    Direct,
    /// Absolute Tor of `Hom(C, -)` against `C (x) -`.
    Formula,
    /// Both, failing on any dimension mismatch.
    CrossCheck,
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Strategy::Direct),
            "formula" => Ok(Strategy::Formula),
            "cross-check" | "crosscheck" => Ok(Strategy::CrossCheck),
            _ => Err(Error::InputParse(format!("unknown strategy {s:?}"))),
        }
    }
}

/// `C (x) F -> M` for `F` a minimal free resolution of `Hom(C, M)`.
#[derive(Clone, Debug)]
pub struct ProperResolution<F: Field> {
    pub target: Module<F>,
    pub semidualizing: Module<F>,
    hom: HomSpace<F>,
    free: FreeResolution<F>,
    complex: ChainComplex<F>,
    augmentation: ModuleHom<F>,
}

pub fn proper_pc_resolution<F: Field>(c: &Module<F>, m: &Module<F>, n: usize) -> Result<ProperResolution<F>> {
    let hom = hom_module(c, m)?;
    let free = FreeResolution::new(&hom.module, n);
    let complex = free.complex().tensor(c);
    let d = c.ring().dim();
    let u = c.ring().unit_index();
    let tau = free.augmentation().matrix();
    // generator g goes to phi_g in Hom(C, M); c (x) phi_g -> phi_g(c)
    let mut cols = Vec::with_capacity(free.betti()[0] * c.dim());
    for g in 0..free.betti()[0] {
        let phi = hom.element_matrix(tau.col(g * d + u));
        cols.extend(phi.into_columns());
    }
    let augmentation = ModuleHom::new(complex.modules()[0].clone(), m.clone(), Matrix::from_columns(m.dim(), cols))?;
    Ok(ProperResolution { target: m.clone(), semidualizing: c.clone(), hom, free, complex, augmentation })
}

impl<F: Field> ProperResolution<F> {
    pub fn length(&self) -> usize {
        self.free.length()
    }

    /// `Q_i = C^{b_i}`; these are the Betti numbers of `Hom(C, M)`.
    pub fn ranks(&self) -> &[usize] {
        self.free.betti()
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }

    pub fn augmentation(&self) -> &ModuleHom<F> {
        &self.augmentation
    }

    pub fn free_resolution(&self) -> &FreeResolution<F> {
        &self.free
    }

    pub fn hom_space(&self) -> &HomSpace<F> {
        &self.hom
    }

    /// `Q_n -> ... -> Q_0 -> M -> 0` with `M` in degree -1.
    pub fn augmented_complex(&self) -> ChainComplex<F> {
        let ring = self.target.ring();
        let zero = Arc::new(FDModule::zero(ring));
        let mut modules = vec![zero.clone(), self.target.clone()];
        modules.extend(self.complex.modules().iter().cloned());
        let mut diffs = vec![ModuleHom::zero(&self.target, &zero), self.augmentation.clone()];
        diffs.extend(self.complex.differentials().iter().cloned());
        ChainComplex::new(-2, modules, diffs).expect("augmented resolution is a complex")
    }
}

/// `Hom(C, X)`: exact in the open range iff the augmented complex `X` is
/// `Hom(P_C, -)`-exact.
pub fn is_proper<F: Field>(c: &Module<F>, augmented: &ChainComplex<F>) -> Result<Exactness> {
    Ok(hom_complex(c, augmented)?.is_exact())
}

/// `Hom(C, X)` as a complex.
pub fn hom_complex<F: Field>(c: &Module<F>, x: &ChainComplex<F>) -> Result<ChainComplex<F>> {
    let spaces = x.modules().iter().map(|m| hom_module(c, m)).collect::<Result<Vec<_>>>()?;
    let diffs = x
        .differentials()
        .iter()
        .enumerate()
        .map(|(k, d)| spaces[k + 1].covariant(d, &spaces[k]))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(x.lo(), spaces.into_iter().map(|s| s.module).collect(), diffs)
}

/// The terms `Q_i (x) N` (or `N (x) Q_i`) and the complex they form.
fn tensored_terms<F: Field>(
    p: &ProperResolution<F>,
    other: &Module<F>,
    resolved_left: bool,
) -> Result<(Vec<TensorProduct<F>>, ChainComplex<F>)> {
    let q = p.complex();
    let id = ModuleHom::identity(other);
    let terms = q
        .modules()
        .iter()
        .map(|qi| if resolved_left { tensor_module(qi, other) } else { tensor_module(other, qi) })
        .collect::<Result<Vec<_>>>()?;
    let diffs = q
        .differentials()
        .iter()
        .enumerate()
        .map(|(k, d)| {
            if resolved_left {
                terms[k + 1].map(d, &id, &terms[k])
            } else {
                terms[k + 1].map(&id, d, &terms[k])
            }
        })
        .collect();
    let complex = ChainComplex::from_parts(0, terms.iter().map(|t| t.module.clone()).collect(), diffs);
    Ok((terms, complex))
}

/// `Q (x) N` (or `N (x) Q`) from generic tensor products of the terms.
fn direct_tor_complex<F: Field>(p: &ProperResolution<F>, other: &Module<F>, resolved_left: bool) -> Result<ChainComplex<F>> {
    Ok(tensored_terms(p, other, resolved_left)?.1)
}

/// Checks that `Tor^{PC-M}_i(M, -)`, computed directly, is a functor on
/// `g: N -> N'` and `h: N' -> N''`: `H(id) = id` and `H(h g) = H(h) H(g)`
/// for `0 <= i <= max`.
pub fn functoriality_check<F: Field>(c: &Module<F>, m: &Module<F>, g: &ModuleHom<F>, h: &ModuleHom<F>, max: usize) -> Result<bool> {
    if g.target().dim() != h.source().dim() {
        return Err(Error::ShapeMismatch("maps do not compose".into()));
    }
    let p = proper_pc_resolution(c, m, max + 1)?;
    let hg = h.compose(g)?;
    let (t0, x0) = tensored_terms(&p, g.source(), true)?;
    let (t1, x1) = tensored_terms(&p, g.target(), true)?;
    let (t2, x2) = tensored_terms(&p, h.target(), true)?;
    let f = c.field();
    for i in 0..=max {
        let qi = &p.complex().modules()[i];
        let id_q = ModuleHom::identity(qi);
        let (h0, h1, h2) = (x0.homology(i as isize)?, x1.homology(i as isize)?, x2.homology(i as isize)?);
        let lift = |a: &TensorProduct<F>, b: &TensorProduct<F>, map: &ModuleHom<F>| a.map(&id_q, map, b);
        let id0 = h0.induced(&lift(&t0[i], &t0[i], &ModuleHom::identity(g.source())), &h0);
        if id0.matrix() != &Matrix::identity(f, h0.dim()) {
            return Ok(false);
        }
        let a = h0.induced(&lift(&t0[i], &t1[i], g), &h1);
        let b = h1.induced(&lift(&t1[i], &t2[i], h), &h2);
        let ab = h0.induced(&lift(&t0[i], &t2[i], &hg), &h2);
        if &b.matrix().mul(f, a.matrix())? != ab.matrix() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn slots<'a, F: Field>(flavor: Flavor, m: &'a Module<F>, n: &'a Module<F>) -> (&'a Module<F>, &'a Module<F>) {
    if flavor.resolves_first() {
        (m, n)
    } else {
        (n, m)
    }
}

fn compare(direct: &[usize], formula: &[usize]) -> Result<()> {
    match direct.iter().zip(formula).enumerate().find(|(_, (a, b))| a != b) {
        Some((degree, (&direct, &formula))) => Err(Error::CrossCheckMismatch { degree, direct, formula }),
        None => Ok(()),
    }
}

/// `dim Tor^{flavor}_i(M, N)` for `0 <= i <= max`.
pub fn rel_tor_dims<F: Field>(
    c: &Module<F>,
    flavor: Flavor,
    m: &Module<F>,
    n: &Module<F>,
    max: usize,
    strategy: Strategy,
) -> Result<Vec<usize>> {
    let (resolved, other) = slots(flavor, m, n);
    let direct = || -> Result<Vec<usize>> {
        let p = proper_pc_resolution(c, resolved, max + 1)?;
        let mut dims = direct_tor_complex(&p, other, flavor.resolves_first())?.homology_dims();
        dims.truncate(max + 1);
        Ok(dims)
    };
    let formula = || -> Result<Vec<usize>> {
        let h = hom_module(c, resolved)?.module;
        let t = tensor_module(c, other)?.module;
        tor_dims(&h, &t, max)
    };
    match strategy {
        Strategy::Direct => direct(),
        Strategy::Formula => formula(),
        Strategy::CrossCheck => {
            let (d, f) = (direct()?, formula()?);
            compare(&d, &f)?;
            Ok(d)
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelTorQuery<F: Field> {
    pub flavor: Flavor,
    pub c: Module<F>,
    pub m: Module<F>,
    pub n: Module<F>,
    pub degree: usize,
}

/// `Tor^{flavor}_i(M, N)` as a module.
pub fn rel_tor<F: Field>(q: &RelTorQuery<F>, strategy: Strategy) -> Result<Module<F>> {
    let (resolved, other) = slots(q.flavor, &q.m, &q.n);
    let i = q.degree;
    let direct = || -> Result<Module<F>> {
        let p = proper_pc_resolution(&q.c, resolved, i + 1)?;
        Ok(direct_tor_complex(&p, other, q.flavor.resolves_first())?.homology(i as isize)?.module)
    };
    let formula = || -> Result<Module<F>> {
        let h = hom_module(&q.c, resolved)?.module;
        let t = tensor_module(&q.c, other)?.module;
        tor(&h, &t, i)
    };
    match strategy {
        Strategy::Direct => direct(),
        Strategy::Formula => formula(),
        Strategy::CrossCheck => {
            let (d, f) = (direct()?, formula()?);
            if d.dim() != f.dim() {
                return Err(Error::CrossCheckMismatch { degree: i, direct: d.dim(), formula: f.dim() });
            }
            Ok(d)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtFlavor {
    /// `H_{-i} Hom(Q, N)` for a proper C-projective resolution `Q` of `M`.
    PcM,
    /// `H^i Hom(M, I)` for a proper C-injective coresolution `I` of `N`.
    MIc,
}

impl FromStr for ExtFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pc-m" => Ok(ExtFlavor::PcM),
            "m-ic" => Ok(ExtFlavor::MIc),
            _ => Err(Error::InputParse(format!("unknown Ext flavor {s:?} (expected pc-m, m-ic)"))),
        }
    }
}

/// `Hom(Q, N)` with `Hom(Q_i, N)` in degree `-i`.
fn direct_ext_complex<F: Field>(p: &ProperResolution<F>, n: &Module<F>) -> Result<ChainComplex<F>> {
    let q = p.complex();
    let spaces = q.modules().iter().map(|qi| hom_module(qi, n)).collect::<Result<Vec<_>>>()?;
    let len = spaces.len() - 1;
    // index -i holds Hom(Q_i, N); the differential out of it is Hom(d_{i+1}, N)
    let diffs = (0..len)
        .rev()
        .map(|i| spaces[i].contravariant(&q.differentials()[i], &spaces[i + 1]))
        .collect::<Result<Vec<_>>>()?;
    let modules = spaces.into_iter().rev().map(|s| s.module).collect();
    Ok(ChainComplex::from_parts(-(len as isize), modules, diffs))
}

/// `dim Ext^i` of the given flavor for `0 <= i <= max`.
///
/// `PcM`: direct is `Hom(Q, N)`; transformed is `Ext(Hom(C,M), Hom(C,N))`
/// (adjunction). `MIc`: direct is the `PcM` direct route on Matlis duals
/// `(N^v, M^v)`; transformed is `Ext(C (x) M, C (x) N)`.
pub fn rel_ext_dims<F: Field>(
    flavor: ExtFlavor,
    c: &Module<F>,
    m: &Module<F>,
    n: &Module<F>,
    max: usize,
    strategy: Strategy,
) -> Result<Vec<usize>> {
    let (m_dir, n_dir) = match flavor {
        ExtFlavor::PcM => (m.clone(), n.clone()),
        ExtFlavor::MIc => (Arc::new(n.matlis_dual()), Arc::new(m.matlis_dual())),
    };
    let direct = || -> Result<Vec<usize>> {
        let p = proper_pc_resolution(c, &m_dir, max + 1)?;
        let mut dims = direct_ext_complex(&p, &n_dir)?.homology_dims();
        dims.reverse();
        dims.truncate(max + 1);
        Ok(dims)
    };
    let formula = || -> Result<Vec<usize>> {
        match flavor {
            ExtFlavor::PcM => ext_dims(&hom_module(c, m)?.module, &hom_module(c, n)?.module, max),
            ExtFlavor::MIc => ext_dims(&tensor_module(c, m)?.module, &tensor_module(c, n)?.module, max),
        }
    };
    match strategy {
        Strategy::Direct => direct(),
        Strategy::Formula => formula(),
        Strategy::CrossCheck => {
            let (d, f) = (direct()?, formula()?);
            compare(&d, &f)?;
            Ok(d)
        }
    }
}

/// `Ext^i` of the given flavor as a module (direct route, cross-checked
/// in dimension when asked).
pub fn rel_ext<F: Field>(
    flavor: ExtFlavor,
    c: &Module<F>,
    m: &Module<F>,
    n: &Module<F>,
    i: usize,
    strategy: Strategy,
) -> Result<Module<F>> {
    if strategy == Strategy::CrossCheck {
        rel_ext_dims(flavor, c, m, n, i, Strategy::CrossCheck)?;
    }
    match (flavor, strategy) {
        (ExtFlavor::PcM, Strategy::Formula) => {
            crate::homalg::ext(&hom_module(c, m)?.module, &hom_module(c, n)?.module, i)
        }
        (ExtFlavor::MIc, Strategy::Formula) => {
            crate::homalg::ext(&tensor_module(c, m)?.module, &tensor_module(c, n)?.module, i)
        }
        (ExtFlavor::PcM, _) => {
            let p = proper_pc_resolution(c, m, i + 1)?;
            Ok(direct_ext_complex(&p, n)?.homology(-(i as isize))?.module)
        }
        (ExtFlavor::MIc, _) => {
            let p = proper_pc_resolution(c, &Arc::new(n.matlis_dual()), i + 1)?;
            let h = direct_ext_complex(&p, &Arc::new(m.matlis_dual()))?.homology(-(i as isize))?.module;
            // the transport reverses variance; dualize back so the action is on the right object
            Ok(Arc::new(h.matlis_dual()))
        }
    }
}

/// A homological dimension computed to a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomDim {
    NegInf,
    Finite(isize),
    /// Strictly greater than the recorded bound; not proved infinite.
    AboveBound(usize),
}

impl HomDim {
    fn rank(&self) -> (u8, isize) {
        match *self {
            HomDim::NegInf => (0, 0),
            HomDim::Finite(n) => (1, n),
            HomDim::AboveBound(b) => (2, b as isize),
        }
    }

    /// `self - 1`; above-bound stays above-bound (it dominates every finite
    /// value the computation could have produced).
    pub fn minus_one(self) -> HomDim {
        match self {
            HomDim::Finite(n) => HomDim::Finite(n - 1),
            other => other,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, HomDim::Finite(_))
    }

    pub fn at_most(&self, n: isize) -> bool {
        match *self {
            HomDim::NegInf => true,
            HomDim::Finite(m) => m <= n,
            HomDim::AboveBound(_) => false,
        }
    }
}

impl PartialOrd for HomDim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `-inf < 0 < 1 < ... < ABOVE-BOUND`; above-bound values compare equal
/// among themselves.
impl Ord for HomDim {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.rank(), other.rank());
        match (a.0, b.0) {
            (2, 2) => Ordering::Equal,
            _ => a.cmp(&b),
        }
    }
}

impl fmt::Display for HomDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDim::NegInf => write!(f, "-inf"),
            HomDim::Finite(n) => write!(f, "{n}"),
            HomDim::AboveBound(b) => write!(f, "ABOVE-BOUND({b})"),
        }
    }
}

/// A dimension value with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdReport {
    pub value: HomDim,
    /// `dim Tor_i(Hom(C,M), k)` (for fc_pd) or `dim Ext^i(Hom(C,M), k)`
    /// (for pc_pd), `0 <= i <= bound + 1`.
    pub sequence: Vec<usize>,
    /// Whether `C (x) Hom(C, M) -> M` is bijective, i.e. `M = C^{b_0}` when
    /// the value is 0.
    pub evaluation_bijective: bool,
}

fn pd_from(sequence: &[usize], bound: usize) -> HomDim {
    if sequence[bound + 1] != 0 {
        HomDim::AboveBound(bound)
    } else {
        let last = sequence.iter().rposition(|&d| d != 0).expect("nonzero module has a generator");
        HomDim::Finite(last as isize)
    }
}

fn pd_report<F: Field>(
    c: &Module<F>,
    m: &Module<F>,
    bound: usize,
    seq: impl Fn(&Module<F>) -> Result<Vec<usize>>,
) -> Result<PdReport> {
    if m.is_zero() {
        return Ok(PdReport { value: HomDim::NegInf, sequence: vec![0; bound + 2], evaluation_bijective: true });
    }
    let h = hom_module(c, m)?.module;
    let sequence = seq(&h)?;
    let value = pd_from(&sequence, bound);
    let evaluation_bijective = crate::module::evaluation_map(c, m)?.is_isomorphism();
    Ok(PdReport { value, sequence, evaluation_bijective })
}

/// `F_C-pd(M) = fd(Hom(C, M))`, read off the Betti numbers of `Hom(C, M)`.
pub fn fc_pd_report<F: Field>(c: &Module<F>, m: &Module<F>, bound: usize) -> Result<PdReport> {
    pd_report(c, m, bound, |h| {
        let k = Arc::new(FDModule::residue_field(h.ring()));
        tor_dims(h, &k, bound + 1)
    })
}

/// `P_C-pd(M) = pd(Hom(C, M))`, read off `Ext^i(Hom(C, M), k)`.
pub fn pc_pd_report<F: Field>(c: &Module<F>, m: &Module<F>, bound: usize) -> Result<PdReport> {
    pd_report(c, m, bound, |h| {
        let k = Arc::new(FDModule::residue_field(h.ring()));
        ext_dims(h, &k, bound + 1)
    })
}

pub fn fc_pd<F: Field>(c: &Module<F>, m: &Module<F>, bound: usize) -> Result<HomDim> {
    Ok(fc_pd_report(c, m, bound)?.value)
}

pub fn pc_pd<F: Field>(c: &Module<F>, m: &Module<F>, bound: usize) -> Result<HomDim> {
    Ok(pc_pd_report(c, m, bound)?.value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub n: usize,
    pub bound: usize,
    /// `Tor^{FC-M}_i(M, k) = 0` for `n < i <= bound`.
    pub tor_vanishes: bool,
    /// First `(i, dim)` with `Tor^{FC-M}_i(M, k) != 0`, `i > n`.
    pub witness: Option<(usize, usize)>,
    pub fc_pd: HomDim,
    pub pc_pd: HomDim,
    pub fc_pd_at_most_n: bool,
    pub pc_pd_at_most_n: bool,
}

impl VanishingReport {
    pub fn agree(&self) -> bool {
        self.tor_vanishes == self.fc_pd_at_most_n && self.fc_pd_at_most_n == self.pc_pd_at_most_n
    }
}

/// The three equivalent conditions for `F_C-pd(M) <= n`, evaluated
/// independently.
pub fn vanishing_characterization<F: Field>(c: &Module<F>, m: &Module<F>, n: usize, bound: usize) -> Result<VanishingReport> {
    if n >= bound {
        return Err(Error::IndexOutOfRange { index: n as isize, lo: 0, hi: bound as isize - 1 });
    }
    let k = Arc::new(FDModule::residue_field(m.ring()));
    let dims = rel_tor_dims(c, Flavor::FcM, m, &k, bound, Strategy::CrossCheck)?;
    let witness = dims.iter().enumerate().skip(n + 1).find(|(_, &d)| d != 0).map(|(i, &d)| (i, d));
    let fc = fc_pd(c, m, bound)?;
    let pc = pc_pd(c, m, bound)?;
    Ok(VanishingReport {
        n,
        bound,
        tor_vanishes: witness.is_none(),
        witness,
        fc_pd: fc,
        pc_pd: pc,
        fc_pd_at_most_n: fc.at_most(n as isize),
        pc_pd_at_most_n: pc.at_most(n as isize),
    })
}

/// Which argument the short exact sequence sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesVariable {
    /// `0 -> M' -> M -> M'' -> 0` against fixed `N`; needs `Hom(C, -)`
    /// of the sequence exact.
    First,
    /// `0 -> N' -> N -> N'' -> 0` against fixed `M`; needs `C (x) -` of
    /// the sequence exact.
    Second,
}

/// The long exact sequence of `Tor^{PC-M}` through degree `n`, obtained by
/// moving the sequence across `Hom(C, -)` or `C (x) -` and taking the
/// absolute horseshoe sequence.
pub fn rel_tor_les<F: Field>(
    c: &Module<F>,
    ses: &ShortExactSequence<F>,
    other: &Module<F>,
    n: usize,
    variable: LesVariable,
) -> Result<LongExactSequence<F>> {
    ses.check()?;
    match variable {
        LesVariable::First => {
            let spaces = [ses.sub(), ses.mid(), ses.quot()].map(|x| hom_module(c, x));
            let [hs, hm, hq] = spaces;
            let (hs, hm, hq) = (hs?, hm?, hq?);
            let inc = hs.covariant(&ses.inc, &hm)?;
            let proj = hm.covariant(&ses.proj, &hq)?;
            let moved = ShortExactSequence::new(inc, proj).map_err(|e| match e {
                Error::NotExact(p) => Error::NotHomCExact(p),
                e => e,
            })?;
            let t = tensor_module(c, other)?.module;
            let mut les = horseshoe_les(&moved, &t, n)?;
            les.relabel(["TorPC(M',N)", "TorPC(M,N)", "TorPC(M'',N)"]);
            Ok(les)
        }
        LesVariable::Second => {
            let ts = [ses.sub(), ses.mid(), ses.quot()].map(|x| tensor_module(c, x));
            let [ts, tm, tq] = ts;
            let (ts, tm, tq) = (ts?, tm?, tq?);
            let id = ModuleHom::identity(c);
            let moved = ShortExactSequence::new(ts.map(&id, &ses.inc, &tm), tm.map(&id, &ses.proj, &tq)).map_err(|e| match e {
                Error::NotExact(p) => Error::NotTensorCExact(p),
                e => e,
            })?;
            let h = hom_module(c, other)?.module;
            let mut les = horseshoe_les(&moved, &h, n)?;
            les.relabel(["TorPC(M,N')", "TorPC(M,N)", "TorPC(M,N'')"]);
            Ok(les)
        }
    }
}

pub const BALANCE_COLUMNS: [&str; 5] = ["FB-M(M,N)", "M-FC(M,N)", "FC-M(M,N)", "M-FC(N,M)", "Tor(M,N)"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceTable {
    /// One row per degree, columns as in [`BALANCE_COLUMNS`].
    pub rows: Vec<[usize; 5]>,
    /// `(degree, column a, column b)` for every disagreeing pair.
    pub flags: Vec<(usize, usize, usize)>,
}

impl BalanceTable {
    pub fn flagged_at(&self, degree: usize) -> bool {
        self.flags.iter().any(|&(i, _, _)| i == degree)
    }
}

/// Compares relative Tor flavors against each other and absolute Tor.
pub fn balance_defect<F: Field>(c: &Module<F>, b: &Module<F>, m: &Module<F>, n: &Module<F>, max: usize) -> Result<BalanceTable> {
    let s = Strategy::CrossCheck;
    let cols = [
        rel_tor_dims(b, Flavor::FcM, m, n, max, s)?,
        rel_tor_dims(c, Flavor::MFc, m, n, max, s)?,
        rel_tor_dims(c, Flavor::FcM, m, n, max, s)?,
        rel_tor_dims(c, Flavor::MFc, n, m, max, s)?,
        tor_dims(m, n, max)?,
    ];
    let rows: Vec<[usize; 5]> = (0..=max).map(|i| std::array::from_fn(|j| cols[j][i])).collect();
    let mut flags = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for a in 0..5 {
            for bb in a + 1..5 {
                if row[a] != row[bb] {
                    flags.push((i, a, bb));
                }
            }
        }
    }
    Ok(BalanceTable { rows, flags })
}

/// `ann M + ann N` annihilates `Tor^{flavor}_i(M, N)`.
pub fn annihilator_containment<F: Field>(c: &Module<F>, flavor: Flavor, m: &Module<F>, n: &Module<F>, i: usize) -> Result<bool> {
    let t = rel_tor(&RelTorQuery { flavor, c: c.clone(), m: m.clone(), n: n.clone(), degree: i }, Strategy::Direct)?;
    let f = t.field();
    let ann_t = t.annihilator();
    let inside = |x: &FDModule<F>| x.annihilator().basis().iter().all(|v| ann_t.contains(f, v));
    Ok(inside(m) && inside(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{square_zero_2vars, truncated_poly};
    use crate::linalg::PrimeField;
    use crate::module::{direct_sum, Ring};
    use crate::semidualizing::canonical_module;

    type M = Module<PrimeField>;

    fn setup() -> (Ring<PrimeField>, M, M, M) {
        let r = Arc::new(square_zero_2vars(PrimeField::new(5).unwrap()));
        let w = canonical_module(&r);
        let k = Arc::new(FDModule::residue_field(&r));
        let free = Arc::new(FDModule::free(&r, 1));
        (r, w, k, free)
    }

    #[test]
    fn proper_resolutions() {
        let (_, w, k, free) = setup();
        let p = proper_pc_resolution(&w, &w, 3).unwrap();
        assert_eq!(p.ranks(), &[1, 0, 0, 0]);
        let p = proper_pc_resolution(&w, &k, 3).unwrap();
        assert_eq!(p.ranks(), &[2, 4, 8, 16]);
        assert_eq!(is_proper(&w, &p.augmented_complex()).unwrap(), Exactness::Exact);
        let p = proper_pc_resolution(&w, &free, 3).unwrap();
        assert!(is_proper(&w, &p.augmented_complex()).unwrap().is_exact());
    }

    #[test]
    fn improper_complex_is_detected() {
        let (r, w, _, _) = setup();
        let ww = Arc::new(w.power(2));
        let z = Arc::new(FDModule::zero(&r));
        let x = ChainComplex::new(
            -1,
            vec![z.clone(), ww.clone(), w.clone(), z.clone()],
            vec![ModuleHom::zero(&ww, &z), ModuleHom::zero(&w, &ww), ModuleHom::zero(&z, &w)],
        )
        .unwrap();
        assert!(matches!(is_proper(&w, &x).unwrap(), Exactness::FailsAt { index: 0, .. }));
    }

    #[test]
    fn relative_tor_values() {
        let (_, w, k, _) = setup();
        let s = Strategy::CrossCheck;
        assert_eq!(rel_tor_dims(&w, Flavor::FcM, &k, &w, 3, s).unwrap(), vec![8, 16, 32, 64]);
        assert_eq!(rel_tor_dims(&w, Flavor::MFc, &k, &w, 3, s).unwrap(), vec![2, 0, 0, 0]);
        assert_eq!(rel_tor_dims(&w, Flavor::FcM, &w, &k, 3, s).unwrap(), vec![2, 0, 0, 0]);
        assert_eq!(rel_tor_dims(&w, Flavor::PcM, &k, &k, 3, s).unwrap(), vec![4, 8, 16, 32]);
        let q = RelTorQuery { flavor: Flavor::FcM, c: w.clone(), m: k.clone(), n: w.clone(), degree: 1 };
        assert_eq!(rel_tor(&q, s).unwrap().dim(), 16);
    }

    #[test]
    fn relative_ext_values() {
        let (_, w, k, free) = setup();
        let s = Strategy::CrossCheck;
        assert_eq!(rel_ext_dims(ExtFlavor::PcM, &w, &w, &w, 3, s).unwrap(), vec![3, 0, 0, 0]);
        let kd = Arc::new(k.matlis_dual());
        let e = rel_ext_dims(ExtFlavor::PcM, &w, &k, &kd, 3, s).unwrap();
        assert_eq!(e, rel_tor_dims(&w, Flavor::PcM, &k, &k, 3, s).unwrap());
        let mic = rel_ext_dims(ExtFlavor::MIc, &w, &k, &free, 2, s).unwrap();
        assert_eq!(mic.len(), 3);
        assert_eq!(rel_ext(ExtFlavor::MIc, &w, &k, &free, 1, s).unwrap().dim(), mic[1]);
    }

    #[test]
    fn dimensions() {
        let (r, w, k, _) = setup();
        let z = Arc::new(FDModule::zero(&r));
        assert_eq!(fc_pd(&w, &z, 4).unwrap(), HomDim::NegInf);
        assert_eq!(fc_pd(&w, &Arc::new(w.power(3)), 4).unwrap(), HomDim::Finite(0));
        assert_eq!(fc_pd(&w, &k, 4).unwrap(), HomDim::AboveBound(4));
        assert_eq!(pc_pd(&w, &k, 4).unwrap(), HomDim::AboveBound(4));
        assert!(HomDim::NegInf < HomDim::Finite(-1));
        assert!(HomDim::Finite(6) < HomDim::AboveBound(6));
        assert_eq!(HomDim::AboveBound(3).minus_one(), HomDim::AboveBound(3));
        let rep = vanishing_characterization(&w, &k, 0, 4).unwrap();
        assert!(rep.agree() && !rep.tor_vanishes);
        let rep = vanishing_characterization(&w, &w, 0, 4).unwrap();
        assert!(rep.agree() && rep.tor_vanishes);
    }

    #[test]
    fn les_forms() {
        let (_, w, k, free) = setup();
        let ses = ShortExactSequence::split(&w, &k).unwrap();
        let les = rel_tor_les(&w, &ses, &k, 3, LesVariable::First).unwrap();
        assert!(les.complex.is_exact().is_exact());
        assert!(les.connecting_maps().iter().all(|d| d.is_zero()));
        let eps = ModuleHom::new(free.clone(), k.clone(), Matrix::from_i64_rows(free.field(), &[&[1, 0, 0]])).unwrap();
        let (_, inc) = eps.kernel();
        let ses = ShortExactSequence::new(inc, eps).unwrap();
        match rel_tor_les(&w, &ses, &k, 2, LesVariable::Second) {
            Ok(les) => assert!(les.complex.is_exact().is_exact()),
            Err(e) => assert!(matches!(e, Error::NotTensorCExact(_))),
        }
    }

    #[test]
    fn balance_over_gorenstein_and_square_zero() {
        let (_, w, k, _) = setup();
        let t = balance_defect(&w, &w, &k, &w, 1).unwrap();
        assert_eq!(t.rows[0][1], 2);
        assert_eq!(t.rows[0][2], 8);
        assert!(t.flagged_at(0));
        let r = Arc::new(truncated_poly(PrimeField::new(5).unwrap(), 3));
        let c = canonical_module(&r);
        let k = Arc::new(FDModule::residue_field(&r));
        let m = Arc::new(FDModule::maximal_ideal(&r));
        assert!(balance_defect(&c, &c, &k, &m, 3).unwrap().flags.is_empty());
    }

    #[test]
    fn functoriality() {
        let (r, w, k, free) = setup();
        let kd = Arc::new(k.power(2));
        let g = ModuleHom::new(free.clone(), k.clone(), Matrix::from_i64_rows(r.field(), &[&[2, 0, 0]])).unwrap();
        let h = ModuleHom::new(k.clone(), kd.clone(), Matrix::from_i64_rows(r.field(), &[&[1], &[3]])).unwrap();
        assert!(functoriality_check(&w, &k, &g, &h, 3).unwrap());
    }

    #[test]
    fn annihilators_and_additivity() {
        let (_, w, k, free) = setup();
        assert!(annihilator_containment(&w, Flavor::FcM, &k, &w, 1).unwrap());
        let s = direct_sum(&k, &free).unwrap().module;
        let sum = rel_tor_dims(&w, Flavor::FcM, &s, &w, 2, Strategy::Formula).unwrap();
        let a = rel_tor_dims(&w, Flavor::FcM, &k, &w, 2, Strategy::Formula).unwrap();
        let b = rel_tor_dims(&w, Flavor::FcM, &free, &w, 2, Strategy::Formula).unwrap();
        assert!(sum.iter().zip(a.iter().zip(&b)).all(|(s, (x, y))| *s == x + y));
    }
}

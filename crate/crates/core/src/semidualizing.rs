//! Semidualizing modules, the canonical module, and Auslander/Bass class
//! membership tested to a degree bound.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homalg::ext_dims;
use crate::homalg::tor_dims;
use crate::linalg::Field;
use crate::module::{
    biduality_map, evaluation_map, hom_module, homothety_map, tensor_module, FDModule, Module, ModuleHom, Ring,
};

/// `Hom_k(R, k)`; dualizing for `R`.
pub fn canonical_module<F: Field>(ring: &Ring<F>) -> Module<F> {
    Arc::new(FDModule::free(ring, 1).matlis_dual())
}

/// `M` is free, i.e. `dim M = beta_0(M) dim R`.
pub fn is_free<F: Field>(m: &FDModule<F>) -> bool {
    m.dim() == m.beta0() * m.ring().dim()
}

/// `M` is injective, i.e. its Matlis dual is free.
pub fn is_injective<F: Field>(m: &FDModule<F>) -> bool {
    is_free(&m.matlis_dual())
}

#[derive(Clone, Debug)]
pub struct SemidualizingCertificate<F: Field> {
    pub module: Module<F>,
    pub bound: usize,
    pub homothety_ok: bool,
    pub ext_vanishing_checked_to: usize,
    pub homothety: ModuleHom<F>,
}

/// Why a candidate is not semidualizing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refusal {
    /// `dim Hom(C, C) != dim R`, so the homothety cannot be bijective.
    HomDimension { hom_dim: usize, ring_dim: usize },
    /// The homothety has the right shape but is not bijective.
    HomothetyNotBijective { rank: usize },
    ExtNonvanishing { degree: usize, dim: usize },
    ZeroModule,
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refusal::HomDimension { hom_dim, ring_dim } => {
                write!(f, "homothety fails: dim Hom(C,C) = {hom_dim} != {ring_dim} = dim R")
            }
            Refusal::HomothetyNotBijective { rank } => write!(f, "homothety R -> Hom(C,C) has rank {rank}"),
            Refusal::ExtNonvanishing { degree, dim } => write!(f, "Ext^{degree}(C,C) has dimension {dim}"),
            Refusal::ZeroModule => write!(f, "the zero module is not semidualizing"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SemidualizingVerdict<F: Field> {
    Certified(SemidualizingCertificate<F>),
    Refused(Refusal),
}

impl<F: Field> SemidualizingVerdict<F> {
    pub fn certificate(&self) -> Option<&SemidualizingCertificate<F>> {
        match self {
            SemidualizingVerdict::Certified(c) => Some(c),
            SemidualizingVerdict::Refused(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            SemidualizingVerdict::Certified(_) => None,
            SemidualizingVerdict::Refused(r) => Some(r),
        }
    }
}

fn check_bound(bound: usize) -> Result<()> {
    if bound == 0 {
        return Err(Error::IndexOutOfRange { index: 0, lo: 1, hi: isize::MAX });
    }
    Ok(())
}

/// Homothety bijective and `Ext^i(C, C) = 0` for `1 <= i <= bound`.
pub fn is_semidualizing<F: Field>(c: &Module<F>, bound: usize) -> Result<SemidualizingVerdict<F>> {
    check_bound(bound)?;
    if c.is_zero() {
        return Ok(SemidualizingVerdict::Refused(Refusal::ZeroModule));
    }
    let ring_dim = c.ring().dim();
    let hom_dim = hom_module(c, c)?.dim();
    if hom_dim != ring_dim {
        return Ok(SemidualizingVerdict::Refused(Refusal::HomDimension { hom_dim, ring_dim }));
    }
    let chi = homothety_map(c)?;
    if !chi.is_isomorphism() {
        return Ok(SemidualizingVerdict::Refused(Refusal::HomothetyNotBijective { rank: chi.rank() }));
    }
    let dims = ext_dims(c, c, bound)?;
    if let Some((degree, &dim)) = dims.iter().enumerate().skip(1).find(|(_, &d)| d != 0) {
        return Ok(SemidualizingVerdict::Refused(Refusal::ExtNonvanishing { degree, dim }));
    }
    Ok(SemidualizingVerdict::Certified(SemidualizingCertificate {
        module: c.clone(),
        bound,
        homothety_ok: true,
        ext_vanishing_checked_to: bound,
        homothety: chi,
    }))
}

/// Three-valued class membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassVerdict {
    /// Every condition holds, with the vanishing conditions proved in all
    /// degrees (a free or injective argument).
    In,
    /// A condition fails; names the first failing check.
    Out { check: String },
    /// Maps are bijective and vanishing holds through the bound, but
    /// vanishing beyond it is not proved.
    UnknownAtBound { bound: usize },
}

impl ClassVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ClassVerdict::In => "IN",
            ClassVerdict::Out { .. } => "OUT",
            ClassVerdict::UnknownAtBound { .. } => "UNKNOWN-AT-BOUND",
        }
    }

    /// `In` or `UnknownAtBound`: nothing failed up to the bound.
    pub fn passes_to_bound(&self) -> bool {
        !matches!(self, ClassVerdict::Out { .. })
    }
}

impl fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassVerdict::In => write!(f, "IN"),
            ClassVerdict::Out { check } => write!(f, "OUT ({check})"),
            ClassVerdict::UnknownAtBound { bound } => write!(f, "UNKNOWN-AT-BOUND ({bound})"),
        }
    }
}

/// Checks one vanishing family; `Ok(proved_for_all_degrees)` or the failure.
fn vanishing(name: &str, dims: &[usize], proved: bool) -> std::result::Result<bool, String> {
    match dims.iter().enumerate().skip(1).find(|(_, &d)| d != 0) {
        Some((i, d)) => Err(format!("{name}_{i} has dimension {d}")),
        None => Ok(proved),
    }
}

fn verdict(steps: Vec<std::result::Result<bool, String>>, bound: usize) -> ClassVerdict {
    let mut all = true;
    for s in steps {
        match s {
            Err(check) => return ClassVerdict::Out { check },
            Ok(p) => all &= p,
        }
    }
    if all {
        ClassVerdict::In
    } else {
        ClassVerdict::UnknownAtBound { bound }
    }
}

/// `Tor_i(C, M) = 0 = Ext^i(C, C (x) M)` for `1 <= i <= bound` and the
/// biduality map `M -> Hom(C, C (x) M)` bijective.
pub fn in_auslander_class<F: Field>(c: &Module<F>, m: &Module<F>, bound: usize) -> Result<ClassVerdict> {
    check_bound(bound)?;
    let cm = tensor_module(c, m)?.module;
    let tor_ok = vanishing("Tor(C,M)", &tor_dims(c, m, bound)?, is_free(c) || is_free(m));
    if tor_ok.is_err() {
        return Ok(verdict(vec![tor_ok], bound));
    }
    let ext_ok = vanishing("Ext(C,C(x)M)", &ext_dims(c, &cm, bound)?, is_free(c) || is_injective(&cm));
    if ext_ok.is_err() {
        return Ok(verdict(vec![tor_ok, ext_ok], bound));
    }
    let gamma = biduality_map(c, m)?;
    let map_ok = if gamma.is_isomorphism() { Ok(true) } else { Err(format!("biduality map has rank {} on dim {}", gamma.rank(), m.dim())) };
    Ok(verdict(vec![tor_ok, ext_ok, map_ok], bound))
}

/// `Ext^i(C, M) = 0 = Tor_i(C, Hom(C, M))` for `1 <= i <= bound` and the
/// evaluation map `C (x) Hom(C, M) -> M` bijective.
pub fn in_bass_class<F: Field>(c: &Module<F>, m: &Module<F>, bound: usize) -> Result<ClassVerdict> {
    check_bound(bound)?;
    let hcm = hom_module(c, m)?.module;
    let ext_ok = vanishing("Ext(C,M)", &ext_dims(c, m, bound)?, is_free(c) || is_injective(m));
    if ext_ok.is_err() {
        return Ok(verdict(vec![ext_ok], bound));
    }
    let tor_ok = vanishing("Tor(C,Hom(C,M))", &tor_dims(c, &hcm, bound)?, is_free(c) || is_free(&hcm));
    if tor_ok.is_err() {
        return Ok(verdict(vec![ext_ok, tor_ok], bound));
    }
    let xi = evaluation_map(c, m)?;
    let map_ok = if xi.is_isomorphism() { Ok(true) } else { Err(format!("evaluation map has rank {} onto dim {}", xi.rank(), m.dim())) };
    Ok(verdict(vec![ext_ok, tor_ok, map_ok], bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `M -> Hom(C, M)`
    Down,
    /// `M -> C (x) M`
    Up,
}

pub fn foxby_transport<F: Field>(c: &Module<F>, m: &Module<F>, direction: Direction) -> Result<Module<F>> {
    Ok(match direction {
        Direction::Down => hom_module(c, m)?.module,
        Direction::Up => tensor_module(c, m)?.module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{field_algebra, square_zero_2vars, truncated_poly};
    use crate::linalg::PrimeField;
    use crate::module::is_isomorphic;

    fn ring() -> Ring<PrimeField> {
        Arc::new(square_zero_2vars(PrimeField::new(5).unwrap()))
    }

    #[test]
    fn canonical_modules() {
        let f = PrimeField::new(5).unwrap();
        let kk = Arc::new(field_algebra(f.clone()));
        assert_eq!(canonical_module(&kk).dim(), 1);
        let w = canonical_module(&ring());
        assert_eq!((w.dim(), w.beta0()), (3, 2));
        let t = Arc::new(truncated_poly(f, 3));
        let r = Arc::new(FDModule::free(&t, 1));
        assert!(is_isomorphic(&canonical_module(&t), &r).unwrap().is_yes());
    }

    #[test]
    fn certificates_and_refusals() {
        let r = ring();
        let w = canonical_module(&r);
        let cert = is_semidualizing(&w, 6).unwrap();
        assert_eq!(cert.certificate().unwrap().ext_vanishing_checked_to, 6);
        let free = Arc::new(FDModule::free(&r, 1));
        assert!(is_semidualizing(&free, 3).unwrap().certificate().is_some());
        let k = Arc::new(FDModule::residue_field(&r));
        assert_eq!(
            is_semidualizing(&k, 2).unwrap().refusal(),
            Some(&Refusal::HomDimension { hom_dim: 1, ring_dim: 3 })
        );
        assert!(is_semidualizing(&w, 0).is_err());
    }

    #[test]
    fn class_membership() {
        let r = ring();
        let w = canonical_module(&r);
        let free = Arc::new(FDModule::free(&r, 2));
        let k = Arc::new(FDModule::residue_field(&r));
        assert_eq!(in_auslander_class(&w, &free, 3).unwrap(), ClassVerdict::In);
        assert_eq!(in_bass_class(&w, &w, 3).unwrap(), ClassVerdict::In);
        match in_auslander_class(&w, &k, 1).unwrap() {
            ClassVerdict::Out { check } => assert!(check.contains("Tor(C,M)_1 has dimension 3"), "{check}"),
            v => panic!("{v:?}"),
        }
        assert!(!in_bass_class(&w, &k, 2).unwrap().passes_to_bound());
        assert!(injective_and_free_detection(&w, &free));
    }

    fn injective_and_free_detection(w: &Module<PrimeField>, free: &Module<PrimeField>) -> bool {
        is_injective(w) && !is_free(w) && is_free(free) && !is_injective(free)
    }

    #[test]
    fn transports() {
        let r = ring();
        let w = canonical_module(&r);
        let free = Arc::new(FDModule::free(&r, 1));
        let down = foxby_transport(&w, &w, Direction::Down).unwrap();
        assert!(is_isomorphic(&down, &free).unwrap().is_yes());
        let up = foxby_transport(&w, &down, Direction::Up).unwrap();
        assert!(is_isomorphic(&up, &w).unwrap().is_yes());
        assert!(is_isomorphic(&foxby_transport(&w, &free, Direction::Up).unwrap(), &w).unwrap().is_yes());
    }
}

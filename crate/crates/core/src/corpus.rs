//! Named presets, their standard modules, and the JSON formats for short
//! exact sequences and inclusions.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::preset;
use crate::error::{Error, Result};
use crate::homalg::ShortExactSequence;
use crate::linalg::{Field, Matrix, SparseVec, Subspace};
use crate::module::{matrix_to_json, parse_matrix, quotient, tensor_module, FDModule, Module, ModuleHom, Ring};
use crate::semidualizing::canonical_module;

pub const MODULE_NAMES: [&str; 5] = ["R", "k", "m", "omega", "omega_tensor_omega"];

/// The presets that make up the standard corpus.
pub const CORPUS_PRESETS: [&str; 5] =
    ["square_zero_2vars", "truncated_poly(2)", "truncated_poly(3)", "truncated_poly(4)", "field"];

/// A ring with its named modules.
#[derive(Clone, Debug)]
pub struct Corpus<F: Field> {
    pub ring: Ring<F>,
    pub modules: Vec<(String, Module<F>)>,
}

impl<F: Field> Corpus<F> {
    pub fn new(ring: Ring<F>) -> Self {
        let omega = canonical_module(&ring);
        let ww = tensor_module(&omega, &omega).expect("same ring").module;
        let modules = vec![
            ("R".to_string(), Arc::new(FDModule::free(&ring, 1))),
            ("k".to_string(), Arc::new(FDModule::residue_field(&ring))),
            ("m".to_string(), Arc::new(FDModule::maximal_ideal(&ring))),
            ("omega".to_string(), omega),
            ("omega_tensor_omega".to_string(), ww),
        ];
        Corpus { ring, modules }
    }

    pub fn preset(f: F, name: &str) -> Result<Self> {
        Ok(Self::new(Arc::new(preset(f, name)?)))
    }

    pub fn get(&self, name: &str) -> Result<Module<F>> {
        let name = name.strip_prefix("preset:").unwrap_or(name);
        self.modules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::InputParse(format!("unknown module {name:?} (expected one of {})", MODULE_NAMES.join(", "))))
    }

    pub fn omega(&self) -> Module<F> {
        self.get("omega").expect("always present")
    }
}

/// Resolves a module reference: `preset:NAME` from the corpus, or an inline
/// module object.
pub fn module_ref<F: Field>(corpus: &Corpus<F>, v: &Value) -> Result<Module<F>> {
    match v {
        Value::String(s) => corpus.get(s),
        Value::Object(_) => Ok(Arc::new(FDModule::from_json(&corpus.ring, v)?)),
        _ => Err(Error::InputParse("module must be \"preset:NAME\" or an object".into())),
    }
}

/// `{"sub": M', "mid": M, "quot": M'', "inc": [[..]], "proj": [[..]]}`.
pub fn ses_from_json<F: Field>(corpus: &Corpus<F>, v: &Value) -> Result<ShortExactSequence<F>> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::InputParse(format!("missing {k:?}")));
    let sub = module_ref(corpus, get("sub")?)?;
    let mid = module_ref(corpus, get("mid")?)?;
    let quot = module_ref(corpus, get("quot")?)?;
    let f = corpus.ring.field();
    let inc = ModuleHom::new(sub.clone(), mid.clone(), parse_matrix(f, get("inc")?, mid.dim(), sub.dim())?)?;
    let proj = ModuleHom::new(mid.clone(), quot.clone(), parse_matrix(f, get("proj")?, quot.dim(), mid.dim())?)?;
    ShortExactSequence::new(inc, proj)
}

pub fn ses_to_json<F: Field>(ses: &ShortExactSequence<F>) -> Value {
    let f = ses.mid().field();
    json!({
        "ring": ses.mid().ring().name(),
        "sub": ses.sub().to_json(),
        "mid": ses.mid().to_json(),
        "quot": ses.quot().to_json(),
        "inc": matrix_to_json(f, ses.inc.matrix()),
        "proj": matrix_to_json(f, ses.proj.matrix()),
    })
}

/// `{"sub": M', "ambient": M, "map": [[..]]}`.
pub fn inclusion_from_json<F: Field>(corpus: &Corpus<F>, v: &Value) -> Result<ModuleHom<F>> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::InputParse(format!("missing {k:?}")));
    let sub = module_ref(corpus, get("sub")?)?;
    let amb = module_ref(corpus, get("ambient")?)?;
    let m = parse_matrix(corpus.ring.field(), get("map")?, amb.dim(), sub.dim())?;
    ModuleHom::new(sub, amb, m)
}

/// `0 -> m -> R -> k -> 0`.
pub fn residue_sequence<F: Field>(ring: &Ring<F>) -> ShortExactSequence<F> {
    let free = Arc::new(FDModule::free(ring, 1));
    let k = Arc::new(FDModule::residue_field(ring));
    let eps = Matrix::from_columns(1, ring.residue_of_basis().iter().map(|c| SparseVec::from_dense(ring.field(), std::slice::from_ref(c))).collect());
    let eps = ModuleHom::new(free, k, eps).expect("the residue map is linear");
    let (_, inc) = eps.kernel();
    ShortExactSequence::new(inc, eps).expect("exact")
}

/// `0 -> R/xR -> omega -> k -> 0` over `k[X,Y]/(X,Y)^2`, embedding
/// `1 -> y*`, `y -> 1*`.
pub fn omega_sequence<F: Field>(ring: &Ring<F>) -> Result<ShortExactSequence<F>> {
    let names = ring.basis_names();
    let idx = |s: &str| names.iter().position(|n| n == s);
    let (one, x, y) = match (idx("1"), idx("x"), idx("y")) {
        (Some(a), Some(b), Some(c)) if ring.dim() == 3 => (a, b, c),
        _ => return Err(Error::UnknownPreset(format!("{} has no basis {{1, x, y}}", ring.name()))),
    };
    let f = ring.field();
    let free = Arc::new(FDModule::free(ring, 1));
    // x R = span{x} here
    let xr = Subspace::span(f, 3, &[ring.product(x, one).clone(), ring.product(x, x).clone(), ring.product(x, y).clone()]);
    let (rx, _) = quotient(&free, &xr)?;
    let reps = xr.complement_positions();
    let omega = canonical_module(ring);
    let image = |r: usize| -> Result<usize> {
        match r {
            r if r == one => Ok(y),
            r if r == y => Ok(one),
            _ => Err(Error::InvalidModule("unexpected coset representative".into())),
        }
    };
    let cols = reps.iter().map(|&r| Ok(SparseVec::unit(f, image(r)?))).collect::<Result<Vec<_>>>()?;
    let inc = ModuleHom::new(rx, omega, Matrix::from_columns(3, cols))?;
    let (_, proj) = inc.cokernel();
    ShortExactSequence::new(inc, proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;
    use crate::module::is_isomorphic;

    #[test]
    fn corpus_modules() {
        let c = Corpus::preset(PrimeField::new(5).unwrap(), "square_zero_2vars").unwrap();
        let dims: Vec<usize> = c.modules.iter().map(|(_, m)| m.dim()).collect();
        assert_eq!(dims, vec![3, 1, 2, 3, 4]);
        assert!(c.get("preset:nope").is_err());
        let t = Corpus::preset(PrimeField::new(5).unwrap(), "truncated_poly(2)").unwrap();
        assert!(is_isomorphic(&t.omega(), &t.get("R").unwrap()).unwrap().is_yes());
    }

    #[test]
    fn sequences() {
        let c = Corpus::preset(PrimeField::new(3).unwrap(), "square_zero_2vars").unwrap();
        let s = omega_sequence(&c.ring).unwrap();
        assert_eq!((s.sub().dim(), s.mid().dim(), s.quot().dim()), (2, 3, 1));
        let s2 = ses_from_json(&c, &ses_to_json(&s)).unwrap();
        assert_eq!(s2.inc.matrix(), s.inc.matrix());
        let r = residue_sequence(&c.ring);
        assert_eq!(r.sub().dim(), 2);
        let t = Corpus::preset(PrimeField::new(3).unwrap(), "truncated_poly(3)").unwrap();
        assert!(omega_sequence(&t.ring).is_err());
    }
}

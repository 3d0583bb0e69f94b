//! Finite-dimensional commutative local algebras given by structure constants.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Field, FieldKind, Matrix, PrimeField, Rationals, Solver, SparseVec, Subspace};

/// A commutative local `k`-algebra `(R, m, k)` with `R/m = k`.
///
/// Construction validates every axiom, so holding a value means the ring is
/// commutative, associative, unital and local.
#[derive(Clone, Debug)]
pub struct FiniteLocalAlgebra<F: Field> {
    field: F,
    name: String,
    basis_names: Vec<String>,
    unit: usize,
    /// `mult[i][j]` is `b_i * b_j` in the basis.
    mult: Vec<Vec<SparseVec<F::Elem>>>,
    /// Multiplication by `b_i`.
    left: Vec<Matrix<F::Elem>>,
    /// The residue map `R -> k` on basis elements.
    residue: Vec<F::Elem>,
    max_ideal: Subspace<F::Elem>,
    /// Lifts of a basis of `m/m^2`; they generate `m` as an ideal.
    generators: Vec<SparseVec<F::Elem>>,
    generator_mats: Vec<Matrix<F::Elem>>,
    /// Smallest `n` with `m^n = 0`.
    loewy_length: usize,
}

impl<F: Field> FiniteLocalAlgebra<F> {
    /// Validates the structure constants and computes the maximal ideal.
    ///
    /// Errors name the failing axiom together with a witness.
    pub fn from_structure_constants(
        field: F,
        name: impl Into<String>,
        basis_names: Vec<String>,
        mult: Vec<Vec<SparseVec<F::Elem>>>,
        unit: usize,
    ) -> Result<Self> {
        let f = &field;
        let dim = mult.len();
        if dim == 0 {
            return Err(Error::NoUnit("the zero ring has no unit distinct from zero".into()));
        }
        if basis_names.len() != dim {
            return Err(Error::ShapeMismatch(format!("{} basis names for dimension {dim}", basis_names.len())));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::ShapeMismatch(format!("mult[{i}] has {} entries, expected {dim}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.max_index().is_some_and(|m| m >= dim) {
                    return Err(Error::ShapeMismatch(format!("mult[{i}][{j}] has a coordinate beyond {dim}")));
                }
            }
        }
        if unit >= dim {
            return Err(Error::NoUnit(format!("unit index {unit} out of range")));
        }
        for i in 0..dim {
            if mult[unit][i] != SparseVec::unit(f, i) {
                return Err(Error::NoUnit(format!("b{unit}*b{i} != b{i}")));
            }
        }
        for i in 0..dim {
            for j in i + 1..dim {
                if mult[i][j] != mult[j][i] {
                    return Err(Error::NotCommutative { i, j });
                }
            }
        }
        let left: Vec<Matrix<F::Elem>> =
            (0..dim).map(|i| Matrix::from_columns(dim, mult[i].clone())).collect();
        for i in 0..dim {
            for j in 0..dim {
                let ij = &mult[i][j];
                for l in 0..dim {
                    // (b_i b_j) b_l = sum_k ij_k b_k b_l ; b_i (b_j b_l) = L_i (b_j b_l)
                    let lhs = left[l].mul_vec(f, ij);
                    let rhs = left[i].mul_vec(f, &mult[j][l]);
                    if lhs != rhs {
                        return Err(Error::NotAssociative { i, j, l });
                    }
                }
            }
        }

        let mut residue = Vec::with_capacity(dim);
        for i in 0..dim {
            residue.push(residue_of_basis_element(f, &left[i], unit, i)?);
        }
        // The residue map is a ring map exactly when R/ker is k.
        for i in 0..dim {
            for j in 0..dim {
                let image: F::Elem = mult[i][j]
                    .iter()
                    .fold(f.zero(), |acc, (k, c)| f.add(&acc, &f.mul(c, &residue[*k])));
                if image != f.mul(&residue[i], &residue[j]) {
                    return Err(Error::NotLocal(format!("residue map is not multiplicative on b{i}*b{j}")));
                }
            }
        }
        let max_ideal = Subspace::kernel_of_rows(f, dim, &[SparseVec::from_dense(f, &residue)]);

        // Power chain m, m^2, ... must reach zero.
        let mut powers = vec![max_ideal.clone()];
        while powers.last().unwrap().dim() > 0 {
            if powers.len() > dim {
                return Err(Error::NotLocal("maximal ideal candidate is not nilpotent".into()));
            }
            let prev = powers.last().unwrap();
            let mut prods = Vec::new();
            for a in max_ideal.basis() {
                let la = combination(f, &left, a, dim);
                for b in prev.basis() {
                    prods.push(la.mul_vec(f, b));
                }
            }
            let next = Subspace::span(f, dim, &prods);
            if next.dim() == prev.dim() {
                return Err(Error::NotLocal("maximal ideal candidate is not nilpotent".into()));
            }
            powers.push(next);
        }
        let loewy_length = powers.len();
        let generators: Vec<SparseVec<F::Elem>> = if powers.len() >= 2 {
            let m2 = &powers[1];
            let mut chosen = m2.clone();
            let mut gens = Vec::new();
            for b in max_ideal.basis() {
                if !chosen.contains(f, b) {
                    gens.push(b.clone());
                    let mut all = chosen.basis().to_vec();
                    all.push(b.clone());
                    chosen = Subspace::span(f, dim, &all);
                }
            }
            gens
        } else {
            Vec::new()
        };
        let generator_mats = generators.iter().map(|g| combination(f, &left, g, dim)).collect();

        Ok(FiniteLocalAlgebra {
            field,
            name: name.into(),
            basis_names,
            unit,
            mult,
            left,
            residue,
            max_ideal,
            generators,
            generator_mats,
            loewy_length,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.mult.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn one(&self) -> SparseVec<F::Elem> {
        SparseVec::unit(&self.field, self.unit)
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec<F::Elem> {
        &self.mult[i][j]
    }

    pub fn mul(&self, a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.multiplication_matrix(a).mul_vec(&self.field, b)
    }

    /// Matrix of multiplication by the basis element `b_i`.
    pub fn basis_action(&self, i: usize) -> &Matrix<F::Elem> {
        &self.left[i]
    }

    /// Matrix of multiplication by an arbitrary element.
    pub fn multiplication_matrix(&self, a: &SparseVec<F::Elem>) -> Matrix<F::Elem> {
        combination(&self.field, &self.left, a, self.dim())
    }

    /// Image of an element in `R/m = k`.
    pub fn residue(&self, a: &SparseVec<F::Elem>) -> F::Elem {
        let f = &self.field;
        a.iter().fold(f.zero(), |acc, (i, c)| f.add(&acc, &f.mul(c, &self.residue[*i])))
    }

    pub fn residue_of_basis(&self) -> &[F::Elem] {
        &self.residue
    }

    pub fn is_unit(&self, a: &SparseVec<F::Elem>) -> bool {
        !self.field.is_zero(&self.residue(a))
    }

    pub fn max_ideal(&self) -> &Subspace<F::Elem> {
        &self.max_ideal
    }

    /// Columns spanning the maximal ideal.
    pub fn maximal_ideal_basis(&self) -> Matrix<F::Elem> {
        self.max_ideal.basis_matrix()
    }

    /// Ideal generators of `m`: lifts of a basis of `m/m^2`.
    pub fn generators(&self) -> &[SparseVec<F::Elem>] {
        &self.generators
    }

    pub fn generator_matrices(&self) -> &[Matrix<F::Elem>] {
        &self.generator_mats
    }

    /// Embedding dimension `dim m/m^2`.
    pub fn embedding_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn loewy_length(&self) -> usize {
        self.loewy_length
    }

    /// Same ring up to field and structure constants (names are ignored).
    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field && self.unit == other.unit && self.mult == other.mult)
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let dim = self.dim();
        let mult: Vec<Value> = self
            .mult
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|v| Value::Array(v.to_dense(f, dim).iter().map(|c| f.to_json(c)).collect()))
                        .collect(),
                )
            })
            .collect();
        let mut out = json!({
            "name": self.name,
            "dim": dim,
            "basis_names": self.basis_names,
            "mult": mult,
            "unit": self.unit,
        });
        match f.kind() {
            FieldKind::Prime(p) => {
                out["field"] = json!("Fp");
                out["p"] = json!(p);
            }
            FieldKind::Rational => out["field"] = json!("Q"),
        }
        out
    }

    /// Parses the ring file format over an already chosen field.
    pub fn from_json_with_field(field: F, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::InputParse("ring must be a JSON object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InputParse("missing integer \"dim\"".into()))? as usize;
        let unit = obj
            .get("unit")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InputParse("missing integer \"unit\"".into()))? as usize;
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("custom").to_string();
        let basis_names = match obj.get("basis_names") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| Error::InputParse("basis names must be strings".into())))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::InputParse("\"basis_names\" must be an array".into())),
            None => (0..dim).map(|i| format!("b{i}")).collect(),
        };
        let rows = obj
            .get("mult")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InputParse("missing array \"mult\"".into()))?;
        if rows.len() != dim {
            return Err(Error::ShapeMismatch(format!("\"mult\" has {} rows, expected {dim}", rows.len())));
        }
        let mut mult = Vec::with_capacity(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::InputParse(format!("mult[{i}] must be an array")))?;
            let mut out_row = Vec::with_capacity(row.len());
            for (j, prod) in row.iter().enumerate() {
                let coeffs = prod
                    .as_array()
                    .ok_or_else(|| Error::InputParse(format!("mult[{i}][{j}] must be an array")))?;
                if coeffs.len() != dim {
                    return Err(Error::ShapeMismatch(format!(
                        "mult[{i}][{j}] has {} coefficients, expected {dim}",
                        coeffs.len()
                    )));
                }
                let dense = coeffs.iter().map(|c| field.parse_json(c)).collect::<Result<Vec<_>>>()?;
                out_row.push(SparseVec::from_dense(&field, &dense));
            }
            mult.push(out_row);
        }
        Self::from_structure_constants(field, name, basis_names, mult, unit)
    }
}

/// `sum_i a_i M_i`
fn combination<E: Clone, F: Field<Elem = E>>(f: &F, mats: &[Matrix<E>], a: &SparseVec<E>, dim: usize) -> Matrix<E> {
    let mut out = Matrix::zeros(dim, dim);
    for (i, c) in a.iter() {
        out = out.add_scaled(f, c, &mats[*i]).expect("square matrices of one size");
    }
    out
}

/// The scalar `lambda` with `b_i - lambda` nilpotent, read off the minimal
/// polynomial of `b_i`. Fails unless that polynomial is `(t - lambda)^k`.
fn residue_of_basis_element<F: Field>(f: &F, left_i: &Matrix<F::Elem>, unit: usize, i: usize) -> Result<F::Elem> {
    let dim = left_i.nrows();
    // Krylov sequence 1, b, b^2, ... until dependent.
    let mut powers = vec![SparseVec::unit(f, unit)];
    let coeffs = loop {
        let next = left_i.mul_vec(f, powers.last().unwrap());
        let m = Matrix::from_columns(dim, powers.clone());
        if let Some(x) = Solver::new(f, &m).solve(&next) {
            break x.to_dense(f, powers.len());
        }
        powers.push(next);
    };
    // minimal polynomial t^k - sum_j coeffs[j] t^j
    let k = coeffs.len();
    let mut mu = coeffs.iter().map(|c| f.neg(c)).collect::<Vec<_>>();
    mu.push(f.one());
    let p = f.characteristic();
    let (mut q, mut m) = (1usize, k);
    if p > 0 {
        while m % p as usize == 0 {
            m /= p as usize;
            q *= p as usize;
        }
    }
    // (t - l)^k = (t^q - l)^m in characteristic p, so the coefficient of
    // t^(k-q) is -m l.
    let lambda = f.div(&f.neg(&mu[k - q]), &f.from_i64(m as i64)).expect("m is prime to p");
    if mu != binomial_power(f, &lambda, k) {
        return Err(Error::NotLocal(format!(
            "basis element b{i} has minimal polynomial of degree {k} without a single root in the ground field"
        )));
    }
    Ok(lambda)
}

/// Coefficients of `(t - l)^k`, lowest degree first.
fn binomial_power<F: Field>(f: &F, l: &F::Elem, k: usize) -> Vec<F::Elem> {
    let mut poly = vec![f.one()];
    let negl = f.neg(l);
    for _ in 0..k {
        let mut next = vec![f.zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = f.add(&next[d + 1], c);
            next[d] = f.add(&next[d], &f.mul(c, &negl));
        }
        poly = next;
    }
    poly
}

/// `k[X,Y]/(X,Y)^2` with basis `{1, x, y}`.
pub fn square_zero_2vars<F: Field>(f: F) -> FiniteLocalAlgebra<F> {
    let mut mult = vec![vec![SparseVec::new(); 3]; 3];
    for i in 0..3 {
        mult[0][i] = SparseVec::unit(&f, i);
        mult[i][0] = SparseVec::unit(&f, i);
    }
    FiniteLocalAlgebra::from_structure_constants(f, "square_zero_2vars", names(&["1", "x", "y"]), mult, 0)
        .expect("preset is valid")
}

/// `k[x]/(x^n)` with basis `{1, x, ..., x^(n-1)}`.
pub fn truncated_poly<F: Field>(f: F, n: usize) -> FiniteLocalAlgebra<F> {
    assert!(n >= 1, "k[x]/(x^0) is the zero ring");
    let mult = (0..n)
        .map(|i| (0..n).map(|j| if i + j < n { SparseVec::unit(&f, i + j) } else { SparseVec::new() }).collect())
        .collect();
    let basis = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    FiniteLocalAlgebra::from_structure_constants(f, format!("truncated_poly({n})"), basis, mult, 0)
        .expect("preset is valid")
}

/// The ground field as a one-dimensional algebra.
pub fn field_algebra<F: Field>(f: F) -> FiniteLocalAlgebra<F> {
    let one = SparseVec::unit(&f, 0);
    FiniteLocalAlgebra::from_structure_constants(f, "field", names(&["1"]), vec![vec![one]], 0).expect("preset is valid")
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: &[&str] =
    &["square_zero_2vars", "truncated_poly(2)", "truncated_poly(3)", "truncated_poly(4)", "field"];

/// Looks a preset up by name. `truncated_poly_3` is accepted for
/// `truncated_poly(3)`, and any `n >= 1` works.
pub fn preset<F: Field>(f: F, name: &str) -> Result<FiniteLocalAlgebra<F>> {
    let name = name.trim();
    match name {
        "square_zero_2vars" => return Ok(square_zero_2vars(f)),
        "field" => return Ok(field_algebra(f)),
        _ => {}
    }
    let n = name
        .strip_prefix("truncated_poly(")
        .and_then(|s| s.strip_suffix(')'))
        .or_else(|| name.strip_prefix("truncated_poly_"))
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    match n {
        Some(n) => Ok(truncated_poly(f, n)),
        None => Err(Error::UnknownPreset(name.to_string())),
    }
}

/// A ring file parsed over whichever field it declares.
pub enum AnyAlgebra {
    Prime(FiniteLocalAlgebra<PrimeField>),
    Rational(FiniteLocalAlgebra<Rationals>),
}

impl AnyAlgebra {
    pub fn from_json(v: &Value) -> Result<Self> {
        match v.get("field").and_then(Value::as_str) {
            Some("Fp") | Some("fp") | Some("F_p") => {
                let p = v
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::InputParse("field Fp needs an integer \"p\"".into()))?;
                let p = u32::try_from(p).map_err(|_| Error::InvalidField(format!("{p} does not fit")))?;
                Ok(AnyAlgebra::Prime(FiniteLocalAlgebra::from_json_with_field(PrimeField::new(p)?, v)?))
            }
            Some("Q") | Some("q") => Ok(AnyAlgebra::Rational(FiniteLocalAlgebra::from_json_with_field(Rationals, v)?)),
            Some(other) => Err(Error::InvalidField(format!("unknown field {other:?}"))),
            None => Err(Error::InputParse("missing \"field\"".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn square_zero_preset() {
        let r = square_zero_2vars(f5());
        assert_eq!(r.dim(), 3);
        assert_eq!(r.max_ideal().dim(), 2);
        assert_eq!(r.embedding_dim(), 2);
        assert_eq!(r.loewy_length(), 2);
        let x = SparseVec::unit(r.field(), 1);
        assert_eq!(crate::linalg::rank(r.field(), &r.multiplication_matrix(&x)), 1);
        assert_eq!(r.multiplication_matrix(&r.one()), Matrix::identity(r.field(), 3));
    }

    #[test]
    fn truncated_poly_is_local() {
        let r = truncated_poly(f5(), 3);
        assert_eq!(r.max_ideal().dim(), 2);
        assert_eq!(r.embedding_dim(), 1);
        assert_eq!(r.loewy_length(), 3);
        assert_eq!(crate::linalg::rank(r.field(), r.basis_action(1)), 2);
    }

    #[test]
    fn field_preset_has_zero_maximal_ideal() {
        let r = field_algebra(Rationals);
        assert_eq!(r.max_ideal().dim(), 0);
        assert_eq!(r.loewy_length(), 1);
    }

    #[test]
    fn shifted_basis_still_local() {
        // basis {1, 1+x} of k[x]/(x^2): (1+x)^2 = 1 + 2x = 2(1+x) - 1
        let f = f5();
        let e = |i| SparseVec::unit(&f, i);
        let mult = vec![vec![e(0), e(1)], vec![e(1), SparseVec::from_pairs(&f, vec![(0, 4), (1, 2)])]];
        let r = FiniteLocalAlgebra::from_structure_constants(f, "shifted", names(&["1", "u"]), mult, 0).unwrap();
        assert_eq!(r.residue_of_basis(), &[1, 1]);
    }

    #[test]
    fn product_of_fields_is_not_local() {
        // k x k with idempotents e0 + e1 = 1: basis {1, e} with e^2 = e
        let f = f5();
        let e = |i| SparseVec::unit(&f, i);
        let mult = vec![vec![e(0), e(1)], vec![e(1), e(1)]];
        let err = FiniteLocalAlgebra::from_structure_constants(f, "kxk", names(&["1", "e"]), mult, 0).unwrap_err();
        assert!(matches!(err, Error::NotLocal(_)), "{err}");
    }

    #[test]
    fn characteristic_p_root_extraction() {
        // k[x]/(x^2) over F_2 with basis {1, 1+x}: min poly of u=1+x is (t-1)^2 = t^2 + 1
        let f = PrimeField::new(2).unwrap();
        let e = |i| SparseVec::unit(&f, i);
        let mult = vec![vec![e(0), e(1)], vec![e(1), e(0)]];
        let r = FiniteLocalAlgebra::from_structure_constants(f, "f2", names(&["1", "u"]), mult, 0).unwrap();
        assert_eq!(r.residue_of_basis(), &[1, 1]);
        assert_eq!(r.max_ideal().dim(), 1);
    }

    #[test]
    fn field_extension_is_rejected() {
        // F_5[t]/(t^2 - 2): 2 is not a square mod 5
        let f = f5();
        let e = |i| SparseVec::unit(&f, i);
        let mult = vec![vec![e(0), e(1)], vec![e(1), SparseVec::from_pairs(&f, vec![(0, 2)])]];
        let err = FiniteLocalAlgebra::from_structure_constants(f, "ext", names(&["1", "t"]), mult, 0).unwrap_err();
        assert!(matches!(err, Error::NotLocal(_)));
    }

    #[test]
    fn axiom_errors_name_witnesses() {
        let f = f5();
        let r = square_zero_2vars(f);
        let mut mult = r.mult.clone();
        mult[1][2] = SparseVec::unit(&f, 1);
        let err = FiniteLocalAlgebra::from_structure_constants(f, "bad", names(&["1", "x", "y"]), mult, 0).unwrap_err();
        assert_eq!(err, Error::NotCommutative { i: 1, j: 2 });

        let mut mult = r.mult.clone();
        mult[1][1] = SparseVec::unit(&f, 2); // x^2 = y, but then x*y = 0 and (xx)x = yx = 0 ok; make y^2 = x
        mult[2][2] = SparseVec::unit(&f, 1);
        let err = FiniteLocalAlgebra::from_structure_constants(f, "bad", names(&["1", "x", "y"]), mult, 0).unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }), "{err}");

        let err = FiniteLocalAlgebra::from_structure_constants(f, "bad", names(&["1", "x", "y"]), r.mult.clone(), 1)
            .unwrap_err();
        assert!(matches!(err, Error::NoUnit(_)));
    }

    #[test]
    fn json_round_trip() {
        for name in PRESET_NAMES {
            let r = preset(f5(), name).unwrap();
            let back = FiniteLocalAlgebra::from_json_with_field(f5(), &r.to_json()).unwrap();
            assert!(back.same_as(&r));
            assert_eq!(back.basis_names(), r.basis_names());
        }
        let q = preset(Rationals, "truncated_poly(3)").unwrap();
        match AnyAlgebra::from_json(&q.to_json()).unwrap() {
            AnyAlgebra::Rational(back) => assert!(back.same_as(&q)),
            AnyAlgebra::Prime(_) => panic!("field kind lost"),
        }
        assert!(matches!(preset(f5(), "nope"), Err(Error::UnknownPreset(_))));
        assert_eq!(preset(f5(), "truncated_poly_4").unwrap().dim(), 4);
    }
}

//! The verification harness: recomputes the headline values over the
//! presets and reports each as a check.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{omega_sequence, residue_sequence, Corpus};
use crate::error::{Error, Result};
use crate::homalg::{betti_numbers, horseshoe_les, tor_dims, Exactness, LongExactSequence, ShortExactSequence};
use crate::linalg::{Field, SparseVec};
use crate::module::{direct_sum, hom_module, is_isomorphic, IsoVerdict, tensor_module, FDModule, Module, ModuleHom};
use crate::purity::{hom_purity_transport, is_pure_submodule, pure_fc_pd_check};
use crate::relative::{
    annihilator_containment, balance_defect, fc_pd, functoriality_check, pc_pd, rel_ext_dims, rel_tor_dims,
    rel_tor_les, vanishing_characterization, ExtFlavor, Flavor, HomDim, LesVariable, Strategy,
};
use crate::semidualizing::{is_semidualizing, Refusal};

pub const GORENSTEIN_CONTROLS: [&str; 3] = ["truncated_poly(2)", "truncated_poly(3)", "truncated_poly(4)"];

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerificationReport {
    pub ring: String,
    pub field: String,
    pub bound: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// The report with timings zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.checks.iter_mut().for_each(|c| c.runtime_ms = 0);
        r
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One line per check.
    pub fn table(&self) -> String {
        let mut out = format!("ring {} over {}, bound {}, seed {}\n", self.ring, self.field, self.bound, self.seed);
        for c in &self.checks {
            out.push_str(&format!(
                "{:4} {:<38} {:>6} ms  computed {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.runtime_ms,
                c.computed
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

fn run(id: &str, description: &str, expected: Value, body: impl FnOnce() -> Result<(Value, bool)>) -> Check {
    let start = Instant::now();
    let (computed, pass) = match body() {
        Ok(v) => v,
        Err(e) => (json!(format!("error: {e}")), false),
    };
    Check {
        id: id.to_string(),
        description: description.to_string(),
        expected,
        computed,
        pass,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

fn equal_check(id: &str, description: &str, expected: Value, body: impl FnOnce() -> Result<Value>) -> Check {
    let e = expected.clone();
    run(id, description, expected, move || {
        let v = body()?;
        let pass = v == e;
        Ok((v, pass))
    })
}

fn field_label<F: Field>(f: &F) -> String {
    match f.characteristic() {
        0 => "Q".to_string(),
        p => format!("F_{p}"),
    }
}

/// Runs every check for the given preset. The Gorenstein presets are
/// always included as controls.
pub fn verify_paper<F: Field>(f: F, preset: &str, bound: usize, seed: u64) -> Result<VerificationReport> {
    if bound == 0 {
        return Err(Error::IndexOutOfRange { index: 0, lo: 1, hi: isize::MAX });
    }
    let main = Corpus::preset(f.clone(), preset)?;
    let controls =
        GORENSTEIN_CONTROLS.iter().map(|p| Corpus::preset(f.clone(), p)).collect::<Result<Vec<_>>>()?;
    let mut all = vec![main.clone()];
    all.extend(controls.iter().filter(|c| c.ring.name() != main.ring.name()).cloned());
    let square_zero = main.ring.name() == "square_zero_2vars";

    let mut checks = Vec::new();
    if square_zero {
        checks.extend(square_zero_values(&main, bound));
    }
    checks.push(cross_check_corpus(&all, bound));
    checks.push(functorial_sanity(&all, seed, 20));
    checks.extend(triviality(&main, &controls, bound, square_zero));
    checks.push(vanishing(&main, bound, square_zero));
    checks.push(les_exactness(&main, bound));
    checks.push(annihilators_and_additivity(&all, seed, 20));
    checks.push(duality(&main, bound.min(4)));
    checks.extend(purity(&main, bound, square_zero));
    checks.extend(semidualizing(&main, &controls, bound, square_zero));
    Ok(VerificationReport { ring: main.ring.name().to_string(), field: field_label(&f), bound, seed, checks })
}

fn pow2(i: usize) -> usize {
    1 << i
}

fn square_zero_values<F: Field>(c: &Corpus<F>, bound: usize) -> Vec<Check> {
    let k = c.get("k").unwrap();
    let w = c.omega();
    let ww = c.get("omega_tensor_omega").unwrap();
    let s = Strategy::CrossCheck;
    let mut out = Vec::new();
    let betti_w: Vec<usize> = (0..=bound).map(|i| if i == 0 { 2 } else { 3 * pow2(i - 1) }).collect();
    out.push(equal_check("betti.k", "Betti numbers of k are 2^i", json!((0..=bound).map(pow2).collect::<Vec<_>>()), || {
        Ok(json!(betti_numbers(&k, bound)))
    }));
    out.push(equal_check("betti.omega", "Betti numbers of omega are 2, then 3*2^(i-1)", json!(betti_w), || {
        Ok(json!(betti_numbers(&w, bound)))
    }));
    out.push(equal_check(
        "betti.omega_tensor_omega",
        "Betti numbers of omega (x) omega are 2^(i+2)",
        json!((0..=bound).map(|i| pow2(i + 2)).collect::<Vec<_>>()),
        || Ok(json!(betti_numbers(&ww, bound))),
    ));
    out.push(run("tensor.omega_omega_iso_k4", "omega (x) omega is isomorphic to k^4 by an explicit map", json!({"dim": 4, "iso": true}), || {
        let k4 = Arc::new(k.power(4));
        let witnessed = match is_isomorphic(&ww, &k4)? {
            IsoVerdict::Yes(map) => map.is_isomorphism(),
            _ => false,
        };
        Ok((json!({"dim": ww.dim(), "iso": witnessed}), witnessed && ww.dim() == 4))
    }));
    let n = bound;
    out.push(equal_check("reltor.fc-m.k.C", "Tor^{FC-M}_i(k,C): 8, then 2^(i+3)", json!((0..=n).map(|i| pow2(i + 3)).collect::<Vec<_>>()), || {
        Ok(json!(rel_tor_dims(&w, Flavor::FcM, &k, &w, n, s)?))
    }));
    out.push(equal_check(
        "reltor.m-fc.k.C",
        "Tor^{M-FC}_i(k,C): 2, then 0",
        json!((0..=n).map(|i| if i == 0 { 2 } else { 0 }).collect::<Vec<_>>()),
        || Ok(json!(rel_tor_dims(&w, Flavor::MFc, &k, &w, n, s)?)),
    ));
    out.push(run("reltor.fc-m.C.k", "Tor^{FC-M}_i(C,k) = 0 for i >= 1", json!("0 for i >= 1"), || {
        let d = rel_tor_dims(&w, Flavor::FcM, &w, &k, n, s)?;
        let ok = d.iter().skip(1).all(|&x| x == 0);
        Ok((json!(d), ok))
    }));
    out.push(equal_check("reltor.fc-m.k.k", "Tor^{FC-M}_i(k,k) = 4*2^i", json!((0..=n).map(|i| 4 * pow2(i)).collect::<Vec<_>>()), || {
        Ok(json!(rel_tor_dims(&w, Flavor::FcM, &k, &k, n, s)?))
    }));
    out.push(equal_check("tor.k.C", "Tor_i(k,C) has dimension beta_i(omega)", json!(betti_w), || Ok(json!(tor_dims(&k, &w, n)?))));
    out.push(run("strictness", "beta * beta_i(C (x) C) > beta_i(C) for 1 <= i <= bound", json!(true), || {
        let beta = w.beta0();
        let bw = betti_numbers(&w, n);
        let bww = betti_numbers(&ww, n);
        let rows: Vec<Value> = (1..=n).map(|i| json!([beta * bww[i], bw[i]])).collect();
        let ok = (1..=n).all(|i| beta * bww[i] > bw[i]);
        Ok((json!(rows), ok))
    }));
    out
}

fn cross_check_corpus<F: Field>(all: &[Corpus<F>], bound: usize) -> Check {
    run("crosscheck.direct_vs_formula", "direct and formula relative Tor agree for every flavor, corpus pair and degree", json!({"mismatches": 0}), || {
        let mut compared = 0usize;
        let mut mismatches = Vec::new();
        for c in all {
            let w = c.omega();
            for (a, m) in &c.modules {
                for (b, n) in &c.modules {
                    for flavor in Flavor::ALL {
                        match rel_tor_dims(&w, flavor, m, n, bound, Strategy::CrossCheck) {
                            Ok(d) => compared += d.len(),
                            Err(Error::CrossCheckMismatch { degree, direct, formula }) => {
                                mismatches.push(json!([c.ring.name(), flavor.label(), a, b, degree, direct, formula]))
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        let ok = mismatches.is_empty();
        Ok((json!({"mismatches": mismatches.len(), "values_compared": compared, "details": mismatches}), ok))
    })
}

fn random_hom<F: Field, R: Rng>(m: &Module<F>, n: &Module<F>, rng: &mut R) -> Result<ModuleHom<F>> {
    let h = hom_module(m, n)?;
    let f = m.field();
    let coords = SparseVec::from_dense(f, &(0..h.dim()).map(|_| f.random(rng)).collect::<Vec<_>>());
    Ok(h.element(&coords))
}

fn functorial_sanity<F: Field>(all: &[Corpus<F>], seed: u64, pairs: usize) -> Check {
    run("crosscheck.functoriality", "H(id) = id and H(h g) = H(h) H(g) on seeded random map pairs", json!({"pairs": pairs, "failures": 0}), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = Vec::new();
        for t in 0..pairs {
            let c = &all[t % all.len()];
            let pick = |rng: &mut ChaCha8Rng| c.modules[rng.gen_range(0..c.modules.len())].clone();
            let (m, (a, n0), (b, n1), (d, n2)) = (pick(&mut rng).1, pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let g = random_hom(&n0, &n1, &mut rng)?;
            let h = random_hom(&n1, &n2, &mut rng)?;
            if !functoriality_check(&c.omega(), &m, &g, &h, 3)? {
                failures.push(json!([c.ring.name(), a, b, d]));
            }
        }
        let ok = failures.is_empty();
        Ok((json!({"pairs": pairs, "failures": failures.len(), "details": failures}), ok))
    })
}

fn triviality<F: Field>(main: &Corpus<F>, controls: &[Corpus<F>], bound: usize, square_zero: bool) -> Vec<Check> {
    let mut out = vec![run("triviality.gorenstein", "over k[x]/(x^n) all four flavors equal absolute Tor", json!({"disagreements": 0}), || {
        let mut bad = Vec::new();
        for c in controls {
            let w = c.omega();
            if !is_isomorphic(&w, &c.get("R")?)?.is_yes() {
                bad.push(json!([c.ring.name(), "omega not isomorphic to R"]));
                continue;
            }
            for (a, m) in &c.modules {
                for (b, n) in &c.modules {
                    let abs = tor_dims(m, n, bound)?;
                    for flavor in Flavor::ALL {
                        if rel_tor_dims(&w, flavor, m, n, bound, Strategy::Formula)? != abs {
                            bad.push(json!([c.ring.name(), flavor.label(), a, b]));
                        }
                    }
                }
            }
        }
        let ok = bad.is_empty();
        Ok((json!({"disagreements": bad.len(), "details": bad}), ok))
    })];
    if square_zero {
        out.push(run("triviality.balance_defect", "over the square-zero ring the balance table flags degree 0 for (k, C)", json!({"flagged_at_0": true, "m-fc": 2, "fc-m": 8}), || {
            let w = main.omega();
            let t = balance_defect(&w, &w, &main.get("k")?, &w, 1)?;
            let v = json!({"flagged_at_0": t.flagged_at(0), "m-fc": t.rows[0][1], "fc-m": t.rows[0][2]});
            let ok = t.flagged_at(0) && t.rows[0][1] == 2 && t.rows[0][2] == 8;
            Ok((v, ok))
        }));
    }
    out
}

/// The modules `C, C (x) R^2, C (+) C, k, m, R (+) k` with their names.
fn vanishing_inputs<F: Field>(c: &Corpus<F>) -> Result<Vec<(&'static str, Module<F>)>> {
    let w = c.omega();
    let free2 = Arc::new(FDModule::free(&c.ring, 2));
    let k = c.get("k")?;
    Ok(vec![
        ("C", w.clone()),
        ("C^2", tensor_module(&w, &free2)?.module),
        ("C+C", direct_sum(&w, &w)?.module),
        ("k", k.clone()),
        ("m", c.get("m")?),
        ("R+k", direct_sum(&c.get("R")?, &k)?.module),
    ])
}

fn vanishing<F: Field>(c: &Corpus<F>, bound: usize, square_zero: bool) -> Check {
    let expected = if square_zero {
        json!({"C": true, "C^2": true, "C+C": true, "k": false, "m": false, "R+k": false})
    } else {
        json!("all three conditions agree; fc_pd = pc_pd")
    };
    run("vanishing.characterization", "Tor vanishing, fc_pd <= 0 and pc_pd <= 0 agree at n = 0", expected.clone(), || {
        let w = c.omega();
        let mut map = serde_json::Map::new();
        let mut ok = true;
        for (name, m) in vanishing_inputs(c)? {
            let rep = vanishing_characterization(&w, &m, 0, bound)?;
            ok &= rep.agree() && rep.fc_pd == rep.pc_pd;
            map.insert(name.to_string(), json!(rep.fc_pd_at_most_n));
        }
        let v = Value::Object(map);
        if square_zero {
            ok &= v == expected;
        }
        Ok((v, ok))
    })
}

fn les_record<F: Field>(name: &str, les: Result<LongExactSequence<F>>, emitted: &mut Vec<Value>, skipped: &mut Vec<Value>) -> bool {
    match les {
        Ok(l) => {
            let exact = l.complex.is_exact();
            emitted.push(json!([name, exact == Exactness::Exact]));
            exact.is_exact()
        }
        Err(e @ (Error::NotHomCExact(_) | Error::NotTensorCExact(_))) => {
            skipped.push(json!([name, e.to_string()]));
            true
        }
        Err(e) => {
            emitted.push(json!([name, e.to_string()]));
            false
        }
    }
}

fn les_exactness<F: Field>(c: &Corpus<F>, bound: usize) -> Check {
    run("les.exactness", "every emitted horseshoe and relative long exact sequence is exact", json!({"non_exact": 0}), || {
        let w = c.omega();
        let k = c.get("k")?;
        let res = residue_sequence(&c.ring);
        let mut emitted = Vec::new();
        let mut skipped = Vec::new();
        let mut ok = true;
        for (name, n) in &c.modules {
            let les = horseshoe_les(&res, n, bound);
            // terms must match absolute Tor
            if let Ok(l) = &les {
                let want = [tor_dims(res.quot(), n, bound + 1)?, tor_dims(res.mid(), n, bound)?, tor_dims(res.sub(), n, bound)?];
                for (p, m) in l.complex.modules().iter().enumerate().skip(1) {
                    let (deg, col) = ((p - 1) / 3, (p - 1) % 3);
                    ok &= want[col][deg] == m.dim();
                }
            }
            ok &= les_record(&format!("horseshoe m->R->k vs {name}"), les, &mut emitted, &mut skipped);
        }
        let split = ShortExactSequence::split(&w, &k)?;
        for (name, n) in &c.modules {
            ok &= les_record(&format!("relative split C->C+k->k vs {name}"), rel_tor_les(&w, &split, n, bound, LesVariable::First), &mut emitted, &mut skipped);
        }
        ok &= les_record("relative m->R->k (second variable) vs k", rel_tor_les(&w, &res, &k, bound, LesVariable::Second), &mut emitted, &mut skipped);
        ok &= les_record("relative m->R->k (first variable) vs k", rel_tor_les(&w, &res, &k, bound, LesVariable::First), &mut emitted, &mut skipped);
        if let Ok(seq) = omega_sequence(&c.ring) {
            for (name, n) in [("k", &k), ("C", &w)] {
                ok &= les_record(&format!("relative R/xR->C->k (first variable) vs {name}"), rel_tor_les(&w, &seq, n, bound, LesVariable::First), &mut emitted, &mut skipped);
                ok &= les_record(&format!("relative R/xR->C->k (second variable) vs {name}"), rel_tor_les(&w, &seq, n, bound, LesVariable::Second), &mut emitted, &mut skipped);
                ok &= les_record(&format!("horseshoe R/xR->C->k vs {name}"), horseshoe_les(&seq, n, bound), &mut emitted, &mut skipped);
            }
        }
        let non_exact = emitted.iter().filter(|e| e[1] != json!(true)).count();
        Ok((json!({"non_exact": non_exact, "emitted": emitted, "skipped": skipped}), ok && non_exact == 0))
    })
}

fn annihilators_and_additivity<F: Field>(all: &[Corpus<F>], seed: u64, per_preset: usize) -> Check {
    run("annihilator_and_additivity", "ann M + ann N kills relative Tor; relative Tor is additive over direct sums", json!({"failures": 0}), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
        let mut failures = Vec::new();
        let mut tried = 0;
        for c in all {
            let w = c.omega();
            for _ in 0..per_preset {
                let pick = |rng: &mut ChaCha8Rng| c.modules[rng.gen_range(0..c.modules.len())].clone();
                let ((a, m), (a2, m2), (b, n)) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                let flavor = Flavor::ALL[rng.gen_range(0..4)];
                let i = rng.gen_range(0..3);
                tried += 1;
                if !annihilator_containment(&w, flavor, &m, &n, i)? {
                    failures.push(json!(["annihilator", c.ring.name(), flavor.label(), a, b, i]));
                }
                let sum = direct_sum(&m, &m2)?.module;
                let s = rel_tor_dims(&w, flavor, &sum, &n, i, Strategy::Direct)?;
                let x = rel_tor_dims(&w, flavor, &m, &n, i, Strategy::Direct)?;
                let y = rel_tor_dims(&w, flavor, &m2, &n, i, Strategy::Direct)?;
                if s[i] != x[i] + y[i] {
                    failures.push(json!(["additivity", c.ring.name(), flavor.label(), a, a2, b, i]));
                }
            }
        }
        let ok = failures.is_empty();
        Ok((json!({"pairs": tried, "failures": failures.len(), "details": failures}), ok))
    })
}

fn duality<F: Field>(c: &Corpus<F>, max: usize) -> Check {
    run("duality.ext_tor", "Ext_PC(M, N^v) ~ Tor^{PC-M}(M, N), Ext_MIC(M, N^v) ~ Tor^{M-PC}(M, N), and the evaluation forms", json!({"failures": 0}), || {
        let w = c.omega();
        let s = Strategy::CrossCheck;
        let mut failures = Vec::new();
        for (a, m) in &c.modules {
            for (b, n) in &c.modules {
                let nd: Module<F> = Arc::new(n.matlis_dual());
                let pairs = [
                    (rel_ext_dims(ExtFlavor::PcM, &w, m, &nd, max, s)?, rel_tor_dims(&w, Flavor::PcM, m, n, max, s)?),
                    (rel_ext_dims(ExtFlavor::MIc, &w, m, &nd, max, s)?, rel_tor_dims(&w, Flavor::MPc, m, n, max, s)?),
                    (rel_tor_dims(&w, Flavor::PcM, m, &nd, max, s)?, rel_ext_dims(ExtFlavor::PcM, &w, m, n, max, s)?),
                    (rel_tor_dims(&w, Flavor::MPc, m, &nd, max, s)?, rel_ext_dims(ExtFlavor::MIc, &w, m, n, max, s)?),
                ];
                for (j, (x, y)) in pairs.iter().enumerate() {
                    if x != y {
                        failures.push(json!([j, a, b, x, y]));
                    }
                }
            }
        }
        let ok = failures.is_empty();
        Ok((json!({"failures": failures.len(), "details": failures}), ok))
    })
}

fn purity<F: Field>(c: &Corpus<F>, bound: usize, square_zero: bool) -> Vec<Check> {
    let mut out = vec![run("purity.split_pairs", "split certificates verify, transport along Hom(L,-), and satisfy the fc_pd inequality", json!({"failures": 0}), || {
        let w = c.omega();
        let mut failures = Vec::new();
        let mut pairs = 0;
        for (a, x) in &c.modules {
            for (b, y) in &c.modules {
                let s = direct_sum(x, y)?;
                pairs += 1;
                let cert = match is_pure_submodule(&s.injections[0])? {
                    crate::purity::Purity::Pure(cert) => cert,
                    crate::purity::Purity::NotPure => {
                        failures.push(json!(["no certificate", a, b]));
                        continue;
                    }
                };
                if !cert.verify() {
                    failures.push(json!(["certificate", a, b]));
                }
                for (l, lm) in &c.modules {
                    if hom_purity_transport(lm, &cert).map(|t| t.verify()) != Ok(true) {
                        failures.push(json!(["transport", a, b, l]));
                    }
                }
                if !pure_fc_pd_check(&w, &cert, bound)?.inequality_holds {
                    failures.push(json!(["inequality", a, b]));
                }
            }
        }
        let m_in_r = residue_sequence(&c.ring).inc;
        let non_split_found = c.ring.dim() > 1 && is_pure_submodule(&m_in_r)?.certificate().is_none();
        let ok = failures.is_empty() && (c.ring.dim() == 1 || non_split_found);
        Ok((json!({"pairs": pairs, "failures": failures.len(), "details": failures, "m_in_R_not_pure": non_split_found}), ok))
    })];
    if square_zero {
        out.push(run("purity.strict_case", "C inside C (+) k: fc_pd(C (+) k) is above the bound, fc_pd(C) = 0", json!({"fc_pd_M": format!("{}", HomDim::AboveBound(bound)), "fc_pd_sub": "0"}), || {
            let w = c.omega();
            let s = direct_sum(&w, &c.get("k")?)?;
            let cert = is_pure_submodule(&s.injections[0])?
                .certificate()
                .cloned()
                .ok_or_else(|| Error::InvalidModule("summand did not split".into()))?;
            let rep = pure_fc_pd_check(&w, &cert, bound)?;
            let ok = rep.fc_pd_ambient == HomDim::AboveBound(bound)
                && rep.fc_pd_sub == HomDim::Finite(0)
                && rep.inequality_holds
                && rep.strict_over_sub
                && fc_pd(&w, &s.module, bound)? == pc_pd(&w, &s.module, bound)?;
            Ok((json!({"fc_pd_M": rep.fc_pd_ambient.to_string(), "fc_pd_sub": rep.fc_pd_sub.to_string()}), ok))
        }));
    }
    out
}

fn semidualizing<F: Field>(main: &Corpus<F>, controls: &[Corpus<F>], bound: usize, square_zero: bool) -> Vec<Check> {
    let mut out = Vec::new();
    if square_zero {
        out.push(run("semidualizing.omega", "omega is semidualizing through the bound", json!({"certified_to": bound}), || {
            let v = is_semidualizing(&main.omega(), bound)?;
            let to = v.certificate().map(|c| c.ext_vanishing_checked_to);
            Ok((json!({"certified_to": to}), to == Some(bound)))
        }));
        out.push(run("semidualizing.k_refused", "k is refused: dim Hom(k,k) = 1 != 3 = dim R", json!({"hom_dim": 1, "ring_dim": 3}), || {
            let v = is_semidualizing(&main.get("k")?, bound)?;
            match v.refusal() {
                Some(Refusal::HomDimension { hom_dim, ring_dim }) => {
                    Ok((json!({"hom_dim": hom_dim, "ring_dim": ring_dim}), (*hom_dim, *ring_dim) == (1, 3)))
                }
                other => Ok((json!(format!("{other:?}")), false)),
            }
        }));
    }
    out.push(run("semidualizing.R_everywhere", "R is semidualizing over every preset", json!(true), || {
        let mut rings = vec![main.clone()];
        rings.extend(controls.iter().filter(|c| c.ring.name() != main.ring.name()).cloned());
        if main.ring.name() != "field" {
            rings.push(Corpus::preset(main.ring.field().clone(), "field")?);
        }
        let mut res = serde_json::Map::new();
        for c in &rings {
            let ok = is_semidualizing(&c.get("R")?, bound)?.certificate().is_some();
            res.insert(c.ring.name().to_string(), json!(ok));
        }
        let ok = res.values().all(|v| v == &json!(true));
        Ok((Value::Object(res), ok))
    }));
    out.push(run("semidualizing.gorenstein_omega_is_R", "over k[x]/(x^n) an explicit isomorphism omega -> R exists", json!(true), || {
        let mut res = serde_json::Map::new();
        for c in controls {
            res.insert(c.ring.name().to_string(), json!(is_isomorphic(&c.omega(), &c.get("R")?)?.is_yes()));
        }
        let ok = res.values().all(|v| v == &json!(true));
        Ok((Value::Object(res), ok))
    }));
    out
}

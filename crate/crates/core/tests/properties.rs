//! Property tests over random finite-length modules: quotients of corpus
//! modules by random submodules, and their direct sums.

use std::sync::Arc;

use proptest::prelude::*;
use reltor::algebra::{preset, FiniteLocalAlgebra};
use reltor::corpus::Corpus;
use reltor::homalg::{betti_numbers, ext_dims, horseshoe_les, tor_dims, Exactness, ShortExactSequence};
use reltor::linalg::{Field, PrimeField, SparseVec, Subspace};
use reltor::module::{direct_sum, hom_module, quotient, tensor_module, FDModule, Module};
use reltor::purity::is_pure_submodule;
use reltor::relative::{fc_pd, pc_pd, rel_tor_dims, Flavor, HomDim, Strategy as Route};

const PRESETS: [&str; 3] = ["square_zero_2vars", "truncated_poly(3)", "truncated_poly(2)"];

fn corpus(preset: usize) -> Corpus<PrimeField> {
    Corpus::preset(PrimeField::new(5).unwrap(), PRESETS[preset]).unwrap()
}

/// The submodule generated by `vecs`.
fn generated(m: &Module<PrimeField>, vecs: Vec<SparseVec<u32>>) -> Subspace<u32> {
    let f = m.field();
    let mut span = Subspace::span(f, m.dim(), &vecs);
    loop {
        let images: Vec<_> =
            span.basis().iter().flat_map(|v| m.actions().iter().map(move |a| a.mul_vec(f, v))).chain(span.basis().to_vec()).collect();
        let next = Subspace::span(f, m.dim(), &images);
        if next.dim() == span.dim() {
            return span;
        }
        span = next;
    }
}

/// `(corpus module, coefficients of the killed vectors)`.
fn module_gen() -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (0..5usize, prop::collection::vec(prop::collection::vec(0u32..5, 4), 0..2))
}

fn build(c: &Corpus<PrimeField>, which: usize, kill: &[Vec<u32>]) -> Module<PrimeField> {
    let m = c.modules[which].1.clone();
    let f = m.field();
    let vecs = kill.iter().map(|v| SparseVec::from_dense(f, &(0..m.dim()).map(|i| v[i % v.len()]).collect::<Vec<_>>())).collect();
    let sub = generated(&m, vecs);
    quotient(&m, &sub).unwrap().0
}

fn pair() -> impl Strategy<Value = (Corpus<PrimeField>, Module<PrimeField>, Module<PrimeField>)> {
    (0..PRESETS.len(), module_gen(), module_gen())
        .prop_map(|(p, (a, ka), (b, kb))| {
            let c = corpus(p);
            let m = build(&c, a, &ka);
            let n = build(&c, b, &kb);
            (c, m, n)
        })
}

fn flavor() -> impl Strategy<Value = Flavor> {
    prop::sample::select(Flavor::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn strategies_agree((c, m, n) in pair(), fl in flavor()) {
        let d = rel_tor_dims(&c.omega(), fl, &m, &n, 3, Route::Direct).unwrap();
        let f = rel_tor_dims(&c.omega(), fl, &m, &n, 3, Route::Formula).unwrap();
        prop_assert_eq!(d, f);
    }

    #[test]
    fn relative_tor_is_additive((c, m, n) in pair(), fl in flavor(), (a, ka) in module_gen()) {
        let other = build(&c, a, &ka);
        let sum = direct_sum(&m, &other).unwrap().module;
        let w = c.omega();
        let s = rel_tor_dims(&w, fl, &sum, &n, 2, Route::CrossCheck).unwrap();
        let x = rel_tor_dims(&w, fl, &m, &n, 2, Route::CrossCheck).unwrap();
        let y = rel_tor_dims(&w, fl, &other, &n, 2, Route::CrossCheck).unwrap();
        prop_assert_eq!(s, x.iter().zip(&y).map(|(a, b)| a + b).collect::<Vec<_>>());
    }

    #[test]
    fn tor_zero_is_tensor_and_ext_zero_is_hom((_c, m, n) in pair()) {
        prop_assert_eq!(tor_dims(&m, &n, 0).unwrap()[0], tensor_module(&m, &n).unwrap().dim());
        prop_assert_eq!(ext_dims(&m, &n, 0).unwrap()[0], hom_module(&m, &n).unwrap().dim());
        prop_assert_eq!(betti_numbers(&m, 0)[0], m.beta0());
    }

    #[test]
    fn tor_is_symmetric_and_dual_to_ext((_c, m, n) in pair()) {
        let t = tor_dims(&m, &n, 3).unwrap();
        prop_assert_eq!(&t, &tor_dims(&n, &m, 3).unwrap());
        let nd: Module<PrimeField> = Arc::new(n.matlis_dual());
        prop_assert_eq!(t, ext_dims(&m, &nd, 3).unwrap());
    }

    #[test]
    fn split_sequences_give_exact_les((c, m, n) in pair(), (b, kb) in module_gen()) {
        let other = build(&c, b, &kb);
        let ses = ShortExactSequence::split(&m, &n).unwrap();
        let les = horseshoe_les(&ses, &other, 3).unwrap();
        prop_assert_eq!(les.complex.is_exact(), Exactness::Exact);
    }

    #[test]
    fn summands_are_pure((_c, m, n) in pair()) {
        let s = direct_sum(&m, &n).unwrap();
        let purity = is_pure_submodule(&s.injections[0]).unwrap();
        let cert = purity.certificate().expect("summands split");
        prop_assert!(cert.verify());
    }

    #[test]
    fn the_two_dimensions_coincide((c, m, _n) in pair()) {
        let w = c.omega();
        let fc = fc_pd(&w, &m, 4).unwrap();
        prop_assert_eq!(fc, pc_pd(&w, &m, 4).unwrap());
        // C-projective modules have dimension at most 0
        let t = tensor_module(&w, &Arc::new(FDModule::free(&c.ring, 2))).unwrap().module;
        prop_assert!(fc_pd(&w, &t, 4).unwrap().at_most(0));
    }

    #[test]
    fn module_json_round_trips((c, m, _n) in pair()) {
        let back = FDModule::from_json(&c.ring, &m.to_json()).unwrap();
        prop_assert_eq!(back.dim(), m.dim());
        prop_assert!(back.actions().iter().zip(m.actions()).all(|(a, b)| a == b));
        let dd = m.matlis_dual().matlis_dual();
        prop_assert!(dd.actions().iter().zip(m.actions()).all(|(a, b)| a == b));
    }

    #[test]
    fn homdim_order_is_monotone_under_minus_one(a in -1isize..8, b in -1isize..8, bound in 0usize..8) {
        let lift = |x: isize| match x {
            -1 => HomDim::NegInf,
            x if x as usize > bound => HomDim::AboveBound(bound),
            x => HomDim::Finite(x),
        };
        let (x, y) = (lift(a), lift(b));
        if x <= y {
            prop_assert!(x.minus_one() <= y.minus_one());
        }
        prop_assert!(x.minus_one() <= x);
    }
}

#[test]
fn presets_round_trip_through_ring_files() {
    let f = PrimeField::new(7).unwrap();
    for name in ["square_zero_2vars", "truncated_poly(2)", "truncated_poly(3)", "truncated_poly(4)", "field"] {
        let r = preset(f, name).unwrap();
        let back = FiniteLocalAlgebra::from_json_with_field(f, &r.to_json()).unwrap();
        assert!(back.same_as(&r), "{name}");
        assert_eq!(back.basis_names(), r.basis_names());
        assert_eq!(back.to_json(), r.to_json());
    }
}

#[test]
fn random_elements_stay_in_the_field() {
    let f = PrimeField::new(5).unwrap();
    let mut rng = rand::thread_rng();
    assert!((0..50).all(|_| f.random(&mut rng) < 5));
}

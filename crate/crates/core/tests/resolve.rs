use std::sync::Arc;

use hochkit::algebra::{Algebra, FreeBasisCert};
use hochkit::exactla::{Budget, Fp, Matrix};
use hochkit::modcx::{Bimodule, ChainComplex, Module};
use hochkit::resolve::{bar_resolution, free_resolution, hom_from_free, resolve_complex, tensor_free};

fn f5() -> Fp {
    Fp::new(5).unwrap()
}

fn budget() -> Budget {
    Budget::unlimited()
}

#[test]
fn free_module_has_length_zero_resolution() {
    let s = Arc::new(Algebra::truncated_poly(f5(), 3).unwrap());
    let r = free_resolution(&Module::free(s, 2), 4, &budget()).unwrap();
    assert!(r.complete);
    assert_eq!(r.homological_ranks(), vec![2, 0]);
    r.verify(&budget()).unwrap();
}

#[test]
fn regular_triangular_module_is_generated_once() {
    let t = Arc::new(Algebra::triangular2(f5()));
    let r = free_resolution(&Module::regular(t), 3, &budget()).unwrap();
    assert!(r.complete);
    assert_eq!(r.homological_ranks()[0], 1);
    r.verify(&budget()).unwrap();
}

#[test]
fn residue_of_dual_numbers_is_periodic() {
    let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
    let k = Module::residue(s).unwrap();
    let r = free_resolution(&k, 5, &budget()).unwrap();
    assert_eq!(r.homological_ranks(), vec![1; 6]);
    r.verify(&budget()).unwrap();
    // exact in homological degrees 1..4, H_0 = k
    let h = r.homology(-4, 0, &budget()).unwrap();
    assert_eq!(h.dims, vec![0, 0, 0, 0, 1]);
}

#[test]
fn enveloping_resolution_of_s() {
    let f = f5();
    let s = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let env = hochkit::algebra::enveloping_algebra(FreeBasisCert::over_ground(s.clone()).unwrap()).unwrap();
    let sm = Module::regular(s).restrict_along(&env.mult).unwrap();
    assert_eq!(sm.validate(), Ok(()));
    let r = free_resolution(&sm, 4, &budget()).unwrap();
    r.verify(&budget()).unwrap();
    let h = r.homology(-3, 0, &budget()).unwrap();
    assert_eq!(h.dims, vec![0, 0, 0, 2]);
    assert_eq!(r.homological_ranks(), vec![1, 1, 1, 1, 1]);
}

#[test]
fn bar_ranks_and_homology() {
    let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
    let k = Module::residue(s.clone()).unwrap();
    let cert = FreeBasisCert::over_ground(s).unwrap();
    let r = bar_resolution(&cert, &k, 5, &budget()).unwrap();
    let p = r.free.to_complex(&budget()).unwrap();
    for n in 0..=5 {
        assert_eq!(p.dim(-n), 1 << (n + 1));
    }
    r.verify(&budget()).unwrap();
    assert_eq!(p.homology_dims(-4, 0).dims, vec![0, 0, 0, 0, 1]);
}

#[test]
fn bar_respects_budget() {
    let s = Arc::new(Algebra::truncated_poly(f5(), 3).unwrap());
    let k = Module::residue(s.clone()).unwrap();
    let cert = FreeBasisCert::over_ground(s).unwrap();
    let err = bar_resolution(&cert, &k, 12, &Budget::new(10_000)).unwrap_err();
    assert!(err.is_budget());
}

#[test]
fn bar_and_kernel_cover_give_same_ext_and_tor() {
    let f = f5();
    for alg in [Algebra::truncated_poly(f, 2).unwrap(), Algebra::truncated_poly(f, 3).unwrap(), Algebra::split(f, 2).unwrap()] {
        let a = Arc::new(alg);
        let k = Module::residue(a.clone()).unwrap();
        let cert = FreeBasisCert::over_ground(a.clone()).unwrap();
        let bar = bar_resolution(&cert, &k, 4, &budget()).unwrap();
        let cov = free_resolution(&k, 4, &budget()).unwrap();
        let n = ChainComplex::concentrated(Bimodule::from_left(&k), 0);
        let e1 = hom_from_free(&bar.free, &n, &budget()).unwrap().homology_dims(0, 3);
        let e2 = hom_from_free(&cov.free, &n, &budget()).unwrap().homology_dims(0, 3);
        assert_eq!(e1, e2);
        let t1 = tensor_free(&bar.free, &n, &budget()).unwrap().homology_dims(-3, 0);
        let t2 = tensor_free(&cov.free, &n, &budget()).unwrap().homology_dims(-3, 0);
        assert_eq!(t1, t2);
    }
}

#[test]
fn exact_complex_resolves_to_acyclic() {
    let f = f5();
    let s = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let m = Module::regular(s);
    let c = ChainComplex::new(0, vec![m.clone(), m], vec![Matrix::identity(f, 2)]).unwrap();
    let r = resolve_complex(&c, 3, &budget()).unwrap();
    r.verify(&budget()).unwrap();
    assert_eq!(r.homology(-2, 1, &budget()).unwrap().total(), 0);
}

#[test]
fn two_term_complex_quasi_iso() {
    let f = f5();
    let s = Arc::new(Algebra::truncated_poly(f, 3).unwrap());
    // S --x--> S in degrees -1, 0: homology k in both degrees
    let m = Module::regular(s.clone());
    let rx = s.right_mult(&s.basis_vector(1));
    let c = ChainComplex::new(-1, vec![m.clone(), m], vec![rx]).unwrap();
    assert_eq!(c.homology().dims, vec![1, 1]);
    let r = resolve_complex(&c, 4, &budget()).unwrap();
    r.verify(&budget()).unwrap();
    let h = r.homology(-3, 0, &budget()).unwrap();
    assert_eq!(h.dims[2..], [1, 1]);
}

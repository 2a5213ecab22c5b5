use std::sync::Arc;

use hochkit::algebra::{Algebra, AlgebraMap, FreeBasisCert};
use hochkit::derived::*;
use hochkit::exactla::{Budget, Fp};
use hochkit::modcx::{Module, Term};

fn f5() -> Fp {
    Fp::new(5).unwrap()
}

fn opts() -> DerivedOpts {
    DerivedOpts::default().with_budget(Budget::unlimited())
}

fn setups() -> Vec<(&'static str, SetupSigma)> {
    let f = f5();
    let tp2 = Algebra::truncated_poly(f, 2).unwrap();
    vec![
        ("split2", SetupSigma::over_ground(Arc::new(Algebra::split(f, 2).unwrap())).unwrap()),
        ("tp2", SetupSigma::over_ground(Arc::new(tp2.clone())).unwrap()),
        ("tp3", SetupSigma::over_ground(Arc::new(Algebra::truncated_poly(f, 3).unwrap())).unwrap()),
        ("tp2xtp2", SetupSigma::over_ground(Arc::new(tp2.tensor(&tp2).unwrap())).unwrap()),
    ]
}

fn non_field_setup() -> SetupSigma {
    let f = f5();
    let r = Arc::new(Algebra::truncated_poly_named(f, 2, "y").unwrap());
    let s = Arc::new(Algebra::truncated_poly(f, 4).unwrap());
    let map = AlgebraMap::from_images(r, s.clone(), &[s.unit().to_vec(), s.basis_vector(2)]).unwrap();
    let cert = FreeBasisCert::new(map, vec![s.unit().to_vec(), s.basis_vector(1)]).unwrap();
    SetupSigma::new(cert).unwrap()
}

#[test]
fn reduction_grid_over_ground() {
    for (name, setup) in setups() {
        for (mn, nn) in [("S", "S"), ("k", "k"), ("S", "k")] {
            let m = named_module(&setup, mn).unwrap();
            let n = named_module(&setup, nn).unwrap();
            for mode in [Mode::Co, Mode::Ho] {
                let r = reduction_check(mode, &setup, &m, &n, &opts()).unwrap();
                assert!(r.equal, "{name} ({mn},{nn}) {mode}: {} vs {}", r.lhs, r.rhs);
            }
        }
    }
}

#[test]
fn reduction_non_field_base() {
    let setup = non_field_setup();
    assert_eq!(setup.env_algebra().dim(), 8);
    let s = named_module(&setup, "S").unwrap();
    let o = DerivedOpts::window(-3, 3).with_budget(Budget::unlimited());
    for mode in [Mode::Co, Mode::Ho] {
        let r = reduction_check(mode, &setup, &s, &s, &o).unwrap();
        assert!(r.equal, "{mode}: {} vs {}", r.lhs, r.rhs);
    }
    let k = named_module(&setup, "k").unwrap();
    let err = reduction_check(Mode::Co, &setup, &k, &k, &o).unwrap_err();
    assert!(matches!(err, hochkit::Error::PreconditionUnverified(_)));
}

#[test]
fn dualizing_oracle_and_iso() {
    for (name, setup) in setups() {
        let d = dualizing_complex(&setup, &opts()).unwrap();
        assert!(d.oracle_agrees(), "{name}: {}", d.oracle);
        assert!(d.iso.is_some(), "{name}");
    }
    let d = dualizing_complex(&non_field_setup(), &DerivedOpts::window(-3, 3).with_budget(Budget::unlimited())).unwrap();
    assert!(d.oracle_agrees(), "{}", d.oracle);
}

#[test]
fn hochschild_examples() {
    let f = f5();
    let s = Arc::new(Algebra::split(f, 2).unwrap());
    let setup = SetupSigma::over_ground(s.clone()).unwrap();
    let se = env_regular(&setup);
    let hh = hochschild_cohomology(&setup, &se, &DerivedOpts::window(0, 4).with_budget(Budget::unlimited())).unwrap();
    assert_eq!(hh.dims.dims, vec![2, 0, 0, 0, 0]);
    let hh = hochschild_homology(&setup, &se, &DerivedOpts::window(-4, 0).with_budget(Budget::unlimited())).unwrap();
    assert!(hh.dims.is_concentrated_in(0));
    // identity sigma: S^e = S
    let t = Arc::new(Algebra::truncated_poly(f, 3).unwrap());
    let id = SetupSigma::new(FreeBasisCert::identity(t.clone()).unwrap()).unwrap();
    assert_eq!(id.env_algebra().dim(), 3);
    let x = env_regular(&id);
    let c = hochschild_cohomology(&id, &x, &opts()).unwrap();
    assert_eq!(c.dims.window(0, 4).dims, vec![3, 0, 0, 0, 0]);
    let h = hochschild_homology(&id, &x, &opts()).unwrap();
    assert_eq!(h.dims.window(-4, 0).dims, vec![0, 0, 0, 0, 3]);
    // HH_0(S/k; S) = S
    let tp = SetupSigma::over_ground(t.clone()).unwrap();
    let h = hochschild_homology(&tp, &tp.s_module, &opts()).unwrap();
    assert_eq!(h.dims.get(0), 3);
}

#[test]
fn ext_tor_examples() {
    let f = f5();
    let s = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let k = Module::residue(s.clone()).unwrap();
    let o = DerivedOpts::window(0, 4).with_budget(Budget::unlimited());
    assert_eq!(rhom(&k, &k, &o).unwrap().dims.dims, vec![1; 5]);
    let bar = rhom(&k, &k, &o.with_engine(Engine::Bar)).unwrap();
    assert_eq!(bar.dims.dims, vec![1; 5]);
    let t = ltensor(&k, &k, &DerivedOpts::window(-4, 0).with_budget(Budget::unlimited())).unwrap();
    assert_eq!(t.dims.dims, vec![1; 5]);
    let free = Module::free(s.clone(), 2);
    let e = rhom(&free, &k, &o).unwrap();
    assert_eq!(e.dims.dims, vec![2, 0, 0, 0, 0]);
    let g = Arc::new(Algebra::ground(f));
    let a = Module::free(g.clone(), 2);
    let b = Module::free(g, 3);
    assert_eq!(rhom(&a, &b, &o).unwrap().dims.dims, vec![6, 0, 0, 0, 0]);
    let _ = k.dim();
}

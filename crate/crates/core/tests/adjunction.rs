use std::sync::Arc;

use hochkit::algebra::{Algebra, AlgebraRef};
use hochkit::derived::*;
use hochkit::exactla::{Budget, Fp};
use hochkit::modcx::{Bimodule, GradedDims, Module, Term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f3() -> Fp {
    Fp::new(3).unwrap()
}

fn algs(f: Fp) -> Vec<AlgebraRef> {
    let tp2 = Algebra::truncated_poly(f, 2).unwrap();
    vec![
        Arc::new(Algebra::ground(f)),
        Arc::new(tp2.clone()),
        Arc::new(Algebra::truncated_poly(f, 3).unwrap()),
        Arc::new(Algebra::split(f, 2).unwrap()),
        Arc::new(Algebra::triangular2(f)),
        Arc::new(tp2.tensor(&tp2).unwrap()),
    ]
}

#[test]
fn classical_adjunction_random_grid() {
    let f = f3();
    let algs = algs(f);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = Budget::unlimited();
    for i in 0..12 {
        let pick = |r: &mut ChaCha8Rng| algs[rand::Rng::gen_range(r, 0..algs.len())].clone();
        let (a, bb, c, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let x = random_bimodule(&a, &bb, 5, &mut rng);
        let y = random_bimodule(&bb, &c, 5, &mut rng);
        let z = random_bimodule(&d, &c, 5, &mut rng);
        let rep = adjoint_assoc_classical(&x, &y, &z, &mut rng, &b).unwrap();
        assert!(rep.passed(), "triple {i}: {rep:?}");
        assert_eq!(rep.lhs_dim, rep.rhs_dim);
        let w = random_bimodule(&d, &a, 4, &mut rng);
        let (_, arep) = tensor_associator(&w, &x, &y, &b).unwrap();
        assert!(arep.passed(), "triple {i}: {arep:?}");
    }
}

#[test]
fn adjunction_with_regular_middle() {
    // Hom_B(x ⊗_B B, z) = Hom_B(x, z)
    let f = f3();
    let b = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let k: AlgebraRef = Arc::new(Algebra::ground(f));
    let x = Bimodule::free(k.clone(), b.clone(), 1);
    let z = Bimodule::free(k.clone(), b.clone(), 1);
    let reg = Bimodule::regular(b.clone());
    let sides = AdjointSides::new(&x, &reg, &z, &Budget::unlimited()).unwrap();
    assert_eq!(sides.lhs.dim(), 2);
    assert!(sides.bijective() && sides.bilinear());
}

#[test]
fn associator_matches_dimensions() {
    let f = f3();
    let tp2: AlgebraRef = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let reg = Bimodule::regular(tp2.clone());
    let (phi, rep) = tensor_associator(&reg, &reg, &reg, &Budget::unlimited()).unwrap();
    assert!(rep.passed());
    assert_eq!((phi.rows(), phi.cols()), (2, 2));
}

#[test]
fn ext_adjunction_plain_over_ground() {
    let f = f3();
    let k: AlgebraRef = Arc::new(Algebra::ground(f));
    let tp2: AlgebraRef = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let x = Bimodule::from_left(&Module::residue(tp2.clone()).unwrap());
    let y = Bimodule::regular(k.clone());
    let z = Bimodule::from_left(&Module::residue(tp2.clone()).unwrap());
    let opts = DerivedOpts::window(0, 3);
    let p = ext_adjoint_assoc_check(&x, &y, &z, &opts).unwrap();
    assert!(p.equal, "{p:?}");
    assert_eq!(p.lhs, GradedDims::new(0, vec![1, 1, 1, 1]));
}

#[test]
fn ext_adjunction_nontrivial_middle() {
    let f = f3();
    let all = algs(f);
    let mids = [all[0].clone(), all[1].clone(), all[3].clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = DerivedOpts::window(0, 3);
    for bm in &mids {
        for cm in &mids {
            let x = random_bimodule(&all[1], bm, 3, &mut rng);
            let y = random_bimodule(bm, cm, 3, &mut rng);
            let z = random_bimodule(&all[1], cm, 3, &mut rng);
            let p = ext_adjoint_assoc_check(&x, &y, &z, &opts).unwrap();
            assert!(p.equal, "{p:?}");
            let y = Bimodule::regular(bm.clone());
            let z = random_bimodule(&all[1], bm, 3, &mut rng);
            let p = ext_adjoint_assoc_check(&x, &y, &z, &opts).unwrap();
            assert!(p.equal, "{p:?}");
        }
    }
}

#[test]
fn perturbed_adjunction_is_caught() {
    let f = f3();
    let tp2: AlgebraRef = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
    let k: AlgebraRef = Arc::new(Algebra::ground(f));
    let x = Bimodule::free(k.clone(), tp2.clone(), 1);
    let y = Bimodule::regular(tp2.clone());
    let z = Bimodule::free(tp2.clone(), tp2.clone(), 1);
    let mut sides = AdjointSides::new(&x, &y, &z, &Budget::unlimited()).unwrap();
    assert!(sides.bilinear());
    let n = sides.a.rows();
    let mut hit = false;
    for r in 0..n {
        for c in 0..sides.a.cols() {
            let old = sides.a.get(r, c);
            sides.a.set(r, c, (old + 1) % 3);
            hit |= !sides.bilinear();
            sides.a.set(r, c, old);
        }
    }
    assert!(hit);
}

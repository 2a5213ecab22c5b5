use std::sync::Arc;

use proptest::prelude::*;

use hochkit::algebra::{build_algebra, Algebra, AlgebraRef};
use hochkit::derived::{ltensor, rhom, DerivedOpts};
use hochkit::exactla::{Budget, Fp, Matrix, Quotient, Subspace};
use hochkit::modcx::{chain_homotopic, hom_space, tensor_bimodules, Bimodule, ChainComplex, ChainMap, GradedDims, Module, Term};
use hochkit::par::Strategy as Exec;
use hochkit::simpset::{enumerate_horns, horn, nerve, opposite, standard, FinCategory};

const PRIMES: [u32; 3] = [2, 5, 7];
const PRESETS: [&str; 6] = ["k", "truncated_poly:2", "truncated_poly:3", "split:2", "triangular2", "split:3"];

fn matrix(p: u32, r: usize, c: usize, data: Vec<u32>) -> Matrix {
    let f = Fp::new(p).unwrap();
    Matrix::from_data(f, r, c, data.into_iter().map(|x| x % p).collect()).unwrap()
}

fn arb_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (prop::sample::select(PRIMES.to_vec()), 1..=max, 1..=max)
        .prop_flat_map(|(p, r, c)| prop::collection::vec(0..p, r * c).prop_map(move |d| matrix(p, r, c, d)))
}

fn arb_pair(max: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
    (prop::sample::select(PRIMES.to_vec()), 1..=max, 1..=max, 1..=max).prop_flat_map(|(p, a, b, c)| {
        (prop::collection::vec(0..p, a * b), prop::collection::vec(0..p, b * c))
            .prop_map(move |(x, y)| (matrix(p, a, b, x), matrix(p, b, c, y)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in arb_matrix(7)) {
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), m.cols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn solve_hits_reachable_targets((m, x) in arb_matrix(6).prop_flat_map(|m| {
        let p = m.field().p();
        let c = m.cols();
        (Just(m), prop::collection::vec(0..p, c))
    })) {
        let b = m.mul_vec(&x).unwrap();
        let y = m.solve(&b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn inverse_when_full_rank(m in arb_matrix(5)) {
        if m.is_square() {
            match m.inverse() {
                Some(inv) => prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(m.field(), m.rows())),
                None => prop_assert!(m.rank() < m.rows()),
            }
        }
    }

    #[test]
    fn strategies_agree((a, b) in arb_pair(8)) {
        prop_assert_eq!(a.mul_with(&b, Exec::Sequential).unwrap(), a.mul_with(&b, Exec::Parallel).unwrap());
        let s = a.rref_with(Exec::Sequential);
        let q = a.rref_with(Exec::Parallel);
        prop_assert_eq!(s.matrix, q.matrix);
        prop_assert_eq!(s.pivots, q.pivots);
    }

    #[test]
    fn product_transpose((a, b) in arb_pair(6)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.transpose(), b.transpose().mul(&a.transpose()).unwrap());
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn subspace_reduce_is_projection(m in arb_matrix(6), v in prop::collection::vec(0u32..7, 6)) {
        let sub = Subspace::column_span(&m);
        prop_assert_eq!(sub.dim(), m.rank());
        let p = m.field().p();
        let v: Vec<u32> = v.into_iter().take(m.rows()).map(|x| x % p).chain(std::iter::repeat(0)).take(m.rows()).collect();
        let r = sub.reduce(&v);
        prop_assert_eq!(sub.reduce(&r), r.clone());
        let diff: Vec<u32> = v.iter().zip(&r).map(|(a, b)| (a + p - b) % p).collect();
        prop_assert!(sub.contains(&diff));
    }
}

fn arb_algebra() -> impl Strategy<Value = (u32, Vec<&'static str>)> {
    (prop::sample::select(vec![3u32, 5]), prop::collection::vec(prop::sample::select(PRESETS.to_vec()), 1..=2))
}

fn build(p: u32, parts: &[&str]) -> AlgebraRef {
    Arc::new(build_algebra(Fp::new(p).unwrap(), &parts.join("*")).unwrap())
}

/// B^r modulo the submodule generated by `gens`.
fn cyclic_quotient(b: &AlgebraRef, rank: usize, gens: &[Vec<u32>]) -> Module {
    let free = Module::free(b.clone(), rank);
    let mut sub = Subspace::zero(b.field(), free.dim());
    for g in gens {
        for a in free.action() {
            sub.insert(&a.mul_vec(g).unwrap());
        }
    }
    let q = Quotient::new(sub);
    let act = free.action().iter().map(|a| q.induced(a)).collect();
    Module::new(b.clone(), q.dim(), act).unwrap()
}

fn arb_module() -> impl Strategy<Value = Module> {
    (arb_algebra(), 1..=2usize, 0..=2usize).prop_flat_map(|((p, parts), rank, ngens)| {
        let b = build(p, &parts);
        let n = b.dim() * rank;
        prop::collection::vec(prop::collection::vec(0..p, n), ngens).prop_map(move |gens| cyclic_quotient(&b, rank, &gens))
    })
}

fn arb_module_pair() -> impl Strategy<Value = (Module, Module)> {
    (arb_algebra(), prop::collection::vec(0u32..5, 18), prop::collection::vec(0u32..5, 18)).prop_map(|((p, parts), g1, g2)| {
        let b = build(p, &parts);
        let n = b.dim();
        let take = |g: &[u32]| vec![g.iter().take(n).map(|x| x % p).collect::<Vec<_>>()];
        (cyclic_quotient(&b, 1, &take(&g1)), cyclic_quotient(&b, 2, &[g2.iter().cycle().take(2 * n).map(|x| x % p).collect()]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn algebras_validate(a in arb_algebra()) {
        let b = build(a.0, &a.1);
        prop_assert_eq!(b.validate(), Ok(()));
        let op = b.opposite();
        prop_assert_eq!(op.validate(), Ok(()));
        prop_assert!(op.opposite().same_tables(&b));
        prop_assert!(op.is_opposite_of(&b));
        let k = Algebra::ground(b.field());
        let bk = b.tensor(&k).unwrap();
        prop_assert_eq!(bk.dim(), b.dim());
        prop_assert_eq!(bk.validate(), Ok(()));
    }

    #[test]
    fn quotients_are_modules(m in arb_module()) {
        prop_assert_eq!(m.validate(), Ok(()));
    }

    #[test]
    fn tensor_with_regular_is_identity(m in arb_module()) {
        let b = m.algebra().clone();
        let (t, _) = tensor_bimodules(&Bimodule::regular(b), &Bimodule::from_left(&m), &Budget::unlimited()).unwrap();
        prop_assert_eq!(t.dim(), m.dim());
        // Tor_0 of the regular right module is the module itself, higher Tor vanish
        let b_op = Module::regular(Arc::new(m.algebra().opposite()));
        let tor = ltensor(&b_op, &m, &DerivedOpts::window(-2, 0).with_budget(Budget::unlimited())).unwrap();
        prop_assert_eq!(tor.dims, GradedDims::new(-2, vec![0, 0, m.dim()]));
    }

    #[test]
    fn ext_zero_is_hom((m, n) in arb_module_pair()) {
        let opts = DerivedOpts::window(0, 1).with_budget(Budget::unlimited());
        let ext = rhom(&m, &n, &opts).unwrap();
        prop_assert_eq!(ext.dims.get(0), hom_space(&m, &n, &Budget::unlimited()).unwrap().dim());
        // Ext is stable under lengthening the resolution
        let longer = rhom(&m, &n, &opts.with_length(4)).unwrap();
        prop_assert_eq!(ext.dims, longer.dims);
    }

    #[test]
    fn ext_of_free_vanishes(m in arb_module(), rank in 1..=2usize) {
        let free = Module::free(m.algebra().clone(), rank);
        let ext = rhom(&free, &m, &DerivedOpts::window(0, 2).with_budget(Budget::unlimited())).unwrap();
        prop_assert_eq!(ext.dims, GradedDims::new(0, vec![rank * m.dim(), 0, 0]));
    }
}

fn k_module(f: Fp, d: usize) -> Module {
    Module::free(Arc::new(Algebra::ground(f)), d)
}

/// A two-term complex V0 --d--> V1 over k and a random degree -1 map h.
fn arb_null_homotopy() -> impl Strategy<Value = (ChainComplex<Module>, Matrix, Matrix, Matrix)> {
    (prop::sample::select(vec![2u32, 3, 5]), 1..=3usize, 1..=3usize).prop_flat_map(|(p, a, b)| {
        (
            prop::collection::vec(0..p, a * b),
            prop::collection::vec(0..p, a * b),
            prop::collection::vec(0..p, a * a),
            prop::collection::vec(0..p, b * b),
        )
            .prop_map(move |(d, h, f0, f1)| {
                let f = Fp::new(p).unwrap();
                let d = matrix(p, b, a, d);
                let c = ChainComplex::new(0, vec![k_module(f, a), k_module(f, b)], vec![d]).unwrap();
                (c, matrix(p, a, b, h), matrix(p, a, a, f0), matrix(p, b, b, f1))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn homotopy_is_an_equivalence((c, h, _, _) in arb_null_homotopy()) {
        let d = c.diff(0);
        // N = dh + hd with h: C^1 -> C^0
        let n0 = h.mul(&d).unwrap();
        let n1 = d.mul(&h).unwrap();
        let id = ChainMap::identity(&c);
        let zero = ChainMap::zero(&c, &c);
        let null = ChainMap::new(c.clone(), c.clone(), vec![n0, n1]).unwrap();
        let pert = id.add(&null).unwrap();
        prop_assert!(chain_homotopic(&id, &id).unwrap().is_some());
        prop_assert!(chain_homotopic(&null, &zero).unwrap().is_some());
        prop_assert!(chain_homotopic(&pert, &id).unwrap().is_some());
        prop_assert!(chain_homotopic(&id, &pert).unwrap().is_some());
        // id ~ 0 exactly when the complex is acyclic
        let acyclic = c.homology().total() == 0;
        prop_assert_eq!(chain_homotopic(&id, &zero).unwrap().is_some(), acyclic);
        prop_assert_eq!(chain_homotopic(&pert, &zero).unwrap().is_some(), acyclic);
    }

    #[test]
    fn witness_homotopy_satisfies_equation((c, _, f0, f1) in arb_null_homotopy()) {
        let d = c.diff(0);
        let Ok(f) = ChainMap::new(c.clone(), c.clone(), vec![f0, f1]) else { return Ok(()); };
        let zero = ChainMap::zero(&c, &c);
        if let Some(h) = chain_homotopic(&f, &zero).unwrap() {
            let h1 = h.at(1).cloned().unwrap();
            prop_assert_eq!(h1.mul(&d).unwrap(), f.at(0));
            prop_assert_eq!(d.mul(&h1).unwrap(), f.at(1));
        }
    }

    #[test]
    fn simplicial_opposite_involution(n in 0..=3usize, i in 0..=3usize) {
        let k = standard(n, 3);
        prop_assert_eq!(opposite(&opposite(&k)), k);
        if n >= 1 && i <= n {
            let h = horn(n, i, 3).unwrap();
            prop_assert_eq!(opposite(&opposite(&h)), h);
        }
    }

    #[test]
    fn horn_scan_strategies_agree(len in 2..=4usize, n in 2..=3usize) {
        let k = nerve(&FinCategory::chain(len), 3).unwrap();
        for i in 1..n {
            let s = enumerate_horns(&k, n, i, Exec::Sequential);
            let p = enumerate_horns(&k, n, i, Exec::Parallel);
            prop_assert_eq!(format!("{s:?}"), format!("{p:?}"));
        }
    }

    #[test]
    fn graded_window_round_trip(lo in -4i32..4, dims in prop::collection::vec(0usize..5, 1..6)) {
        let g = GradedDims::new(lo, dims);
        prop_assert_eq!(g.window(g.lo, g.hi()), g.clone());
        prop_assert_eq!(g.negated().negated(), g.clone());
        prop_assert_eq!(g.negated().total(), g.total());
    }
}

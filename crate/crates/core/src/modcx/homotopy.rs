use super::complex::ChainMap;
use super::hom::hom_complex_with;
use super::module::Module;
use crate::error::{Error, Result};
use crate::exactla::{Budget, Matrix};

/// A degree -1 family h^i: X^i -> Y^{i-1} with f - g = d h + h d.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub lo: i32,
    pub comps: Vec<Matrix>,
}

impl Homotopy {
    pub fn at(&self, deg: i32) -> Option<&Matrix> {
        if deg < self.lo {
            return None;
        }
        self.comps.get((deg - self.lo) as usize)
    }
}

/// Decide whether f and g are chain homotopic; on success return a
/// witness homotopy, found by a single linear solve in the Hom complex.
pub fn chain_homotopic(f: &ChainMap<Module>, g: &ChainMap<Module>) -> Result<Option<Homotopy>> {
    chain_homotopic_with(f, g, &Budget::from_env())
}

pub fn chain_homotopic_with(f: &ChainMap<Module>, g: &ChainMap<Module>, budget: &Budget) -> Result<Option<Homotopy>> {
    let same = |a: &crate::modcx::ChainComplex<Module>, b: &crate::modcx::ChainComplex<Module>| {
        a.lo() == b.lo() && a.dims() == b.dims() && a.diffs() == b.diffs()
    };
    if !same(&f.source, &g.source) || !same(&f.target, &g.target) {
        return Err(Error::InvalidInput("chain maps between different complexes".into()));
    }
    let x = &f.source;
    let y = &f.target;
    let h = hom_complex_with(x, y, budget)?;
    let diff = f.sub(g)?;
    let target = h.chain_map_coords(&diff)?;
    let d = h.complex.diff(-1);
    let field = x.field();
    let sol = match d.solve(&target)? {
        Some(s) => s,
        None => return Ok(None),
    };
    let maps = h.maps_at(-1, &sol);
    let comps = (x.lo()..=x.hi())
        .map(|i| maps.iter().find(|(s, _)| *s == i).map(|(_, m)| m.clone()).unwrap_or_else(|| Matrix::zeros(field, y.dim(i - 1), x.dim(i))))
        .collect();
    Ok(Some(Homotopy { lo: x.lo(), comps }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Algebra;
    use crate::exactla::Fp;
    use crate::modcx::ChainComplex;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn kmod() -> Module {
        let f = f5();
        Module::new(Arc::new(Algebra::ground(f)), 1, vec![Matrix::identity(f, 1)]).unwrap()
    }

    fn check(f: &ChainMap<Module>, g: &ChainMap<Module>, h: &Homotopy) {
        let x = &f.source;
        let y = &f.target;
        let fld = x.field();
        for i in x.lo()..=x.hi() {
            let zero_in = Matrix::zeros(fld, y.dim(i - 1), x.dim(i));
            let h_i = h.at(i).cloned().unwrap_or(zero_in);
            let zero_next = Matrix::zeros(fld, y.dim(i), x.dim(i + 1));
            let h_next = h.at(i + 1).cloned().unwrap_or(zero_next);
            let lhs = f.at(i).sub(&g.at(i)).unwrap();
            let rhs = y.diff(i - 1).mul(&h_i).unwrap().add(&h_next.mul(&x.diff(i)).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn equal_maps_are_homotopic() {
        let c = ChainComplex::concentrated(kmod(), 0);
        let id = ChainMap::identity(&c);
        let h = chain_homotopic(&id, &id).unwrap().unwrap();
        assert!(h.comps.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn id_not_homotopic_to_zero_on_k() {
        let c = ChainComplex::concentrated(kmod(), 0);
        let id = ChainMap::identity(&c);
        let z = ChainMap::zero(&c, &c);
        assert!(chain_homotopic(&id, &z).unwrap().is_none());
    }

    #[test]
    fn contractible_complex() {
        let f = f5();
        let c = ChainComplex::new(0, vec![kmod(), kmod()], vec![Matrix::identity(f, 1)]).unwrap();
        let id = ChainMap::identity(&c);
        let z = ChainMap::zero(&c, &c);
        let h = chain_homotopic(&id, &z).unwrap().unwrap();
        check(&id, &z, &h);
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::{Budget, Matrix};
use crate::modcx::{hom_complex_with, ChainComplex, ChainMap, HomComplex, Module};

use super::sset::FinSimplicialSet;

/// A simplex of the dg-nerve: objects x_0..x_n and, for each subset
/// I = {i_0 < .. < i_m} with m >= 1, an element of Hom^{1-m}(x_{i_0}, x_{i_m})
/// in Hom-complex coordinates. `parts` follows [`subsets`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DgSimplex {
    pub objs: Vec<usize>,
    pub parts: Vec<Vec<u32>>,
}

/// Subsets of {0..n} with at least two elements, by size then lexicographic.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 2..=n + 1 {
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for v in start..=n {
                cur.push(v);
                rec(v + 1, n, size, cur, out);
                cur.pop();
            }
        }
        rec(0, n, size, &mut cur, &mut out);
    }
    out
}

/// Truncated dg-nerve of a list of complexes. Conventions: complexes are
/// cohomological, Hom has D f = d f - (-1)^n f d, a 2-simplex carries h with
/// D h = f02 - f12 f01, and a 3-simplex carries g with
/// D g = h023 - h013 + f23 h012 - h123 f01.
#[derive(Debug, Clone)]
pub struct DgNerve {
    pub objects: Vec<ChainComplex<Module>>,
    pub homs: Vec<Vec<HomComplex>>,
    pub sset: FinSimplicialSet,
    pub simplices: Vec<Vec<DgSimplex>>,
}

struct Ctx<'a> {
    objects: &'a [ChainComplex<Module>],
    homs: &'a [Vec<HomComplex>],
    p: u32,
    budget: &'a Budget,
}

impl Ctx<'_> {
    fn hdim(&self, a: usize, b: usize, deg: i32) -> usize {
        self.homs[a][b].complex.dim(deg)
    }

    fn block(&self, a: usize, b: usize, deg: i32, coords: &[u32], src: i32) -> Matrix {
        let h = &self.homs[a][b];
        h.maps_at(deg, coords)
            .into_iter()
            .find(|(s, _)| *s == src)
            .map(|(_, m)| m)
            .unwrap_or_else(|| Matrix::zeros(h.complex.field(), self.objects[b].dim(src + deg), self.objects[a].dim(src)))
    }

    /// g ∘ f for f in Hom^df(a, b), g in Hom^dg(b, c).
    fn compose(&self, (a, b, c): (usize, usize, usize), (dg, g): (i32, &[u32]), (df, f): (i32, &[u32])) -> Vec<u32> {
        self.homs[a][c]
            .data
            .coords_of(df + dg, |i| self.block(b, c, dg, g, i + df).mul(&self.block(a, b, df, f, i)).expect("shape"))
            .expect("composite lies in Hom")
    }

    fn identity(&self, a: usize) -> Vec<u32> {
        let x = &self.objects[a];
        self.homs[a][a].data.coords_of(0, |i| Matrix::identity(x.field(), x.dim(i))).expect("identity")
    }

    fn sub(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        u.iter().zip(v).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }

    fn add(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        u.iter().zip(v).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    /// Every x with D x = rhs, x in Hom^deg(a, b).
    fn solutions(&self, a: usize, b: usize, deg: i32, rhs: &[u32]) -> Result<Vec<Vec<u32>>> {
        let d = self.homs[a][b].complex.diff(deg);
        let Some(x0) = d.solve(rhs)? else { return Ok(Vec::new()) };
        let ker = d.kernel_basis();
        let total = (self.p as usize).checked_pow(ker.len() as u32).unwrap_or(usize::MAX);
        self.budget.check_count(total)?;
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut r = idx;
            let mut x = x0.clone();
            for k in &ker {
                let c = (r % self.p as usize) as u32;
                r /= self.p as usize;
                if c != 0 {
                    for (xi, &ki) in x.iter_mut().zip(k) {
                        *xi = (*xi + c * ki) % self.p;
                    }
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    fn cycles(&self, a: usize, b: usize) -> Result<Vec<Vec<u32>>> {
        self.solutions(a, b, 0, &vec![0; self.hdim(a, b, 1)])
    }
}

pub fn dg_nerve_trunc(objects: &[ChainComplex<Module>], top: usize, budget: &Budget) -> Result<DgNerve> {
    if top == 0 || top > 3 {
        return Err(Error::Unsupported("dg-nerve is implemented in dimensions 1 to 3".into()));
    }
    let first = objects.first().ok_or_else(|| Error::InvalidInput("dg-nerve needs at least one object".into()))?;
    let field = first.field();
    let homs = objects
        .iter()
        .map(|x| objects.iter().map(|y| hom_complex_with(x, y, budget)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let ctx = Ctx { objects, homs: &homs, p: field.p(), budget };
    let no = objects.len();
    let z: Vec<Vec<Vec<Vec<u32>>>> =
        (0..no).map(|a| (0..no).map(|b| ctx.cycles(a, b)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;

    let mut levels: Vec<Vec<DgSimplex>> = vec![(0..no).map(|a| DgSimplex { objs: vec![a], parts: vec![] }).collect()];
    let mut l1 = Vec::new();
    for a in 0..no {
        for b in 0..no {
            for f in &z[a][b] {
                l1.push(DgSimplex { objs: vec![a, b], parts: vec![f.clone()] });
            }
        }
    }
    levels.push(l1);
    if top >= 2 {
        // (a, b, c, f01, f12, f02) -> all h
        type TriKey = (usize, usize, usize, Vec<u32>, Vec<u32>, Vec<u32>);
        let mut tri: HashMap<TriKey, Vec<Vec<u32>>> = HashMap::new();
        let mut l2 = Vec::new();
        for a in 0..no {
            for b in 0..no {
                for c in 0..no {
                    for f01 in &z[a][b] {
                        for f12 in &z[b][c] {
                            let comp = ctx.compose((a, b, c), (0, f12), (0, f01));
                            for f02 in &z[a][c] {
                                let hs = ctx.solutions(a, c, -1, &ctx.sub(f02, &comp))?;
                                for h in &hs {
                                    l2.push(DgSimplex {
                                        objs: vec![a, b, c],
                                        parts: vec![f01.clone(), f02.clone(), f12.clone(), h.clone()],
                                    });
                                }
                                tri.insert((a, b, c, f01.clone(), f12.clone(), f02.clone()), hs);
                            }
                        }
                    }
                }
            }
            budget.check_count(l2.len())?;
        }
        if top >= 3 {
            let mut l3 = Vec::new();
            for s in &l2 {
                let (a, b, c) = (s.objs[0], s.objs[1], s.objs[2]);
                let (f01, f02, f12, h012) = (&s.parts[0], &s.parts[1], &s.parts[2], &s.parts[3]);
                for d in 0..no {
                    for f23 in &z[c][d] {
                        let f23h012 = ctx.compose((a, c, d), (0, f23), (-1, h012));
                        for f13 in &z[b][d] {
                            let Some(h123s) = tri.get(&(b, c, d, f12.clone(), f23.clone(), f13.clone())) else { continue };
                            for f03 in &z[a][d] {
                                let Some(h013s) = tri.get(&(a, b, d, f01.clone(), f13.clone(), f03.clone())) else { continue };
                                let Some(h023s) = tri.get(&(a, c, d, f02.clone(), f23.clone(), f03.clone())) else { continue };
                                for h123 in h123s {
                                    let h123f01 = ctx.compose((a, b, d), (-1, h123), (0, f01));
                                    for h013 in h013s {
                                        for h023 in h023s {
                                            let rhs = ctx.sub(&ctx.add(&ctx.sub(h023, h013), &f23h012), &h123f01);
                                            for g in ctx.solutions(a, d, -2, &rhs)? {
                                                l3.push(DgSimplex {
                                                    objs: vec![a, b, c, d],
                                                    parts: vec![
                                                        f01.clone(),
                                                        f02.clone(),
                                                        f03.clone(),
                                                        f12.clone(),
                                                        f13.clone(),
                                                        f23.clone(),
                                                        h012.clone(),
                                                        h013.clone(),
                                                        h023.clone(),
                                                        h123.clone(),
                                                        g,
                                                    ],
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                budget.check_count(l3.len())?;
            }
            levels.push(l2);
            levels.push(l3);
        } else {
            levels.push(l2);
        }
    }
    let subs: Vec<Vec<Vec<usize>>> = (0..=top + 1).map(subsets).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> =
        subs.iter().map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    let face = |n: usize, k: usize, s: &DgSimplex| {
        let mut objs = s.objs.clone();
        objs.remove(k);
        let parts = subs[n - 1]
            .iter()
            .map(|j| {
                let lifted: Vec<usize> = j.iter().map(|&v| if v >= k { v + 1 } else { v }).collect();
                s.parts[index[n][&lifted]].clone()
            })
            .collect();
        DgSimplex { objs, parts }
    };
    let degen = |n: usize, j: usize, s: &DgSimplex| {
        let mut objs = s.objs.clone();
        objs.insert(j, s.objs[j]);
        let parts = subs[n + 1]
            .iter()
            .map(|i| {
                if i.contains(&j) && i.contains(&(j + 1)) {
                    if i.len() == 2 {
                        ctx.identity(objs[j])
                    } else {
                        vec![0; ctx.hdim(objs[i[0]], objs[*i.last().expect("nonempty")], 2 - i.len() as i32)]
                    }
                } else {
                    let down: Vec<usize> = i.iter().map(|&v| if v > j { v - 1 } else { v }).collect();
                    s.parts[index[n][&down]].clone()
                }
            })
            .collect();
        DgSimplex { objs, parts }
    };
    let sset = FinSimplicialSet::from_keys(top, &levels, face, degen)?;
    Ok(DgNerve { objects: objects.to_vec(), homs, sset, simplices: levels })
}

impl DgNerve {
    /// The chain map carried by a 1-simplex.
    pub fn chain_map(&self, e: usize) -> Result<ChainMap<Module>> {
        let s = &self.simplices[1][e];
        let (a, b) = (s.objs[0], s.objs[1]);
        let (x, y) = (&self.objects[a], &self.objects[b]);
        let maps = self.homs[a][b].maps_at(0, &s.parts[0]);
        let comps = (x.lo()..=x.hi())
            .map(|i| {
                maps.iter().find(|(d, _)| *d == i).map(|(_, m)| m.clone()).unwrap_or_else(|| Matrix::zeros(x.field(), y.dim(i), x.dim(i)))
            })
            .collect();
        ChainMap::new(x.clone(), y.clone(), comps)
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let s = &self.simplices[1][e];
        (s.objs[0], s.objs[1])
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactla::Budget;

use super::category::FinCategory;
use super::sset::FinSimplicialSet;

/// Default dimension bound.
pub const DEFAULT_TOP: usize = 4;

fn monotone(len: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().copied().unwrap_or(0);
        for v in start..=n {
            cur.push(v);
            rec(len, n, cur, out);
            cur.pop();
        }
    }
    rec(len, n, &mut cur, &mut out);
    out
}

fn drop_at(v: &[usize], i: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w.remove(i);
    w
}

fn dup_at(v: &[usize], j: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w.insert(j, v[j]);
    w
}

/// Simplicial subset of Δ^n on the monotone sequences satisfying `keep`.
fn sub_standard(n: usize, top: usize, keep: impl Fn(&[usize]) -> bool) -> Result<FinSimplicialSet> {
    let levels: Vec<Vec<Vec<usize>>> = (0..=top).map(|m| monotone(m + 1, n).into_iter().filter(|s| keep(s)).collect()).collect();
    FinSimplicialSet::from_keys(top, &levels, |_, i, s| drop_at(s, i), |_, j, s| dup_at(s, j))
}

fn misses(s: &[usize], j: usize) -> bool {
    !s.contains(&j)
}

/// Δ^n: m-simplices are the monotone maps [0,m] -> [0,n].
pub fn standard(n: usize, top: usize) -> FinSimplicialSet {
    sub_standard(n, top, |_| true).expect("closed")
}

/// Horn Λ^n_i: the union of the faces d_j Δ^n, j != i.
pub fn horn(n: usize, i: usize, top: usize) -> Result<FinSimplicialSet> {
    if n == 0 || i > n {
        return Err(Error::InvalidInput(format!("horn({n},{i}) needs 0 <= i <= n, n >= 1")));
    }
    sub_standard(n, top, |s| (0..=n).any(|j| j != i && misses(s, j)))
}

/// Boundary ∂Δ^n.
pub fn boundary(n: usize, top: usize) -> Result<FinSimplicialSet> {
    if n == 0 {
        return Err(Error::InvalidInput("boundary(0) is empty; use FinSimplicialSet::empty".into()));
    }
    sub_standard(n, top, |s| (0..=n).any(|j| misses(s, j)))
}

/// A nerve simplex: its first object and a composable chain.
pub type Chain = (usize, Vec<usize>);

/// Nerve of a finite category with the chain attached to each simplex.
/// 1-simplex k is morphism k.
#[derive(Debug, Clone)]
pub struct Nerve {
    pub category: FinCategory,
    pub sset: FinSimplicialSet,
    pub chains: Vec<Vec<Chain>>,
    index: Vec<HashMap<Chain, usize>>,
}

impl Nerve {
    pub fn new(c: &FinCategory, top: usize, budget: &Budget) -> Result<Self> {
        let mut levels: Vec<Vec<Chain>> = vec![(0..c.num_objects()).map(|o| (o, vec![])).collect()];
        if top >= 1 {
            levels.push((0..c.num_morphisms()).map(|f| (c.src(f), vec![f])).collect());
        }
        for m in 2..=top {
            let mut next = Vec::new();
            for (o, fs) in &levels[m - 1] {
                let end = c.tgt(*fs.last().expect("nonempty"));
                for g in 0..c.num_morphisms() {
                    if c.src(g) == end {
                        let mut ch = fs.clone();
                        ch.push(g);
                        next.push((*o, ch));
                    }
                }
                budget.check_count(next.len())?;
            }
            levels.push(next);
        }
        let face = |m: usize, i: usize, (o, fs): &Chain| -> Chain {
            if m == 1 {
                return if i == 0 { (c.tgt(fs[0]), vec![]) } else { (*o, vec![]) };
            }
            if i == 0 {
                (c.tgt(fs[0]), fs[1..].to_vec())
            } else if i == m {
                (*o, fs[..m - 1].to_vec())
            } else {
                let mut w = fs.clone();
                let h = c.compose(fs[i], fs[i - 1]).expect("composable");
                w.splice(i - 1..=i, [h]);
                (*o, w)
            }
        };
        let degen = |_m: usize, j: usize, (o, fs): &Chain| -> Chain {
            let at = if j == 0 { *o } else { c.tgt(fs[j - 1]) };
            let mut w = fs.clone();
            w.insert(j, c.identities[at]);
            (*o, w)
        };
        let sset = FinSimplicialSet::from_keys(top, &levels, face, degen)?;
        let index = levels.iter().map(|l| l.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        Ok(Nerve { category: c.clone(), sset, chains: levels, index })
    }

    pub fn lookup(&self, start: usize, chain: &[usize]) -> Option<usize> {
        self.index.get(chain.len())?.get(&(start, chain.to_vec())).copied()
    }
}

pub fn nerve(c: &FinCategory, top: usize) -> Result<FinSimplicialSet> {
    Ok(Nerve::new(c, top, &Budget::from_env())?.sset)
}

/// A simplex of the right cone in a fixed dimension n: either a simplex of
/// K of dimension m <= n joined with n - m copies of the cone point, or the
/// cone point itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeSimplex {
    Base(usize, usize),
    Point,
}

/// Right cone K^▷; the cone point is the last vertex.
pub fn cone(k: &FinSimplicialSet) -> FinSimplicialSet {
    cone_with_keys(k).0
}

pub fn cone_with_keys(k: &FinSimplicialSet) -> (FinSimplicialSet, Vec<Vec<ConeSimplex>>) {
    let top = k.top();
    let levels: Vec<Vec<ConeSimplex>> = (0..=top)
        .map(|n| {
            let mut l: Vec<ConeSimplex> = (0..=n).rev().flat_map(|m| (0..k.count(m)).map(move |x| ConeSimplex::Base(m, x))).collect();
            l.push(ConeSimplex::Point);
            l
        })
        .collect();
    let face = |_n: usize, j: usize, s: &ConeSimplex| match *s {
        ConeSimplex::Point => ConeSimplex::Point,
        ConeSimplex::Base(m, x) if j <= m => {
            if m == 0 {
                ConeSimplex::Point
            } else {
                ConeSimplex::Base(m - 1, k.face(m, j, x))
            }
        }
        ConeSimplex::Base(m, x) => ConeSimplex::Base(m, x),
    };
    let degen = |_n: usize, j: usize, s: &ConeSimplex| match *s {
        ConeSimplex::Point => ConeSimplex::Point,
        ConeSimplex::Base(m, x) if j <= m => ConeSimplex::Base(m + 1, k.degen(m, j, x)),
        ConeSimplex::Base(m, x) => ConeSimplex::Base(m, x),
    };
    let s = FinSimplicialSet::from_keys(top, &levels, face, degen).expect("cone is closed");
    (s, levels)
}

/// Same simplices, d_i -> d_{n-i} and s_i -> s_{n-i}.
pub fn opposite(k: &FinSimplicialSet) -> FinSimplicialSet {
    let top = k.top();
    let faces = (0..=top)
        .map(|m| if m == 0 { vec![] } else { (0..=m).map(|i| (0..k.count(m)).map(|x| k.face(m, m - i, x)).collect()).collect() })
        .collect();
    let degens = (0..top).map(|m| (0..=m).map(|j| (0..k.count(m)).map(|x| k.degen(m, m - j, x)).collect()).collect()).collect();
    FinSimplicialSet::from_tables(top, k.counts().to_vec(), faces, degens).expect("shape")
}

/// K ⊔ L; simplices of L are numbered after those of K.
pub fn disjoint_union(k: &FinSimplicialSet, l: &FinSimplicialSet) -> Result<FinSimplicialSet> {
    let top = k.top().min(l.top());
    let key_levels: Vec<Vec<(bool, usize)>> =
        (0..=top).map(|m| (0..k.count(m)).map(|x| (false, x)).chain((0..l.count(m)).map(|x| (true, x))).collect()).collect();
    let pick = |right: bool| if right { l } else { k };
    FinSimplicialSet::from_keys(top, &key_levels, |m, i, &(r, x)| (r, pick(r).face(m, i, x)), |m, j, &(r, x)| (r, pick(r).degen(m, j, x)))
}

/// Named constructions.
#[derive(Debug, Clone)]
pub enum Construct {
    Standard(usize),
    Horn(usize, usize),
    Boundary(usize),
    Nerve(FinCategory),
    Cone(FinSimplicialSet),
    Opposite(FinSimplicialSet),
}

pub fn construct_simplicial(kind: &Construct, top: usize) -> Result<FinSimplicialSet> {
    match kind {
        Construct::Standard(n) => Ok(standard(*n, top)),
        Construct::Horn(n, i) => horn(*n, *i, top),
        Construct::Boundary(n) => boundary(*n, top),
        Construct::Nerve(c) => nerve(c, top),
        Construct::Cone(k) => Ok(cone(&k.truncate(top))),
        Construct::Opposite(k) => Ok(opposite(&k.truncate(top))),
    }
}

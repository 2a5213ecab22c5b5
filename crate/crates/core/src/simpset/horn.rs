use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Strategy};

use super::sset::FinSimplicialSet;

/// A map Λ^n_i -> K, given by the (n-1)-simplices y_j, j != i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HornMap {
    pub n: usize,
    pub i: usize,
    /// y_j for j = 0..=n skipping i, in order
    pub faces: Vec<usize>,
}

impl HornMap {
    pub fn new(n: usize, i: usize, faces: Vec<usize>) -> Result<Self> {
        if n == 0 || i > n || faces.len() != n {
            return Err(Error::InvalidInput(format!("horn ({n},{i}) takes {n} faces")));
        }
        Ok(HornMap { n, i, faces })
    }

    pub fn y(&self, j: usize) -> usize {
        assert_ne!(j, self.i);
        self.faces[if j < self.i { j } else { j - 1 }]
    }

    pub fn is_inner(&self) -> bool {
        self.i > 0 && self.i < self.n
    }

    /// d_j y_k = d_{k-1} y_j for j < k, both != i.
    pub fn validate(&self, k: &FinSimplicialSet) -> Result<()> {
        let n = self.n;
        if n > k.top() || self.faces.iter().any(|&y| y >= k.count(n - 1)) {
            return Err(Error::InvalidInput("horn faces out of range".into()));
        }
        if n == 1 {
            return Ok(());
        }
        for kk in 0..=n {
            for j in 0..kk {
                if j == self.i || kk == self.i {
                    continue;
                }
                if k.face(n - 1, j, self.y(kk)) != k.face(n - 1, kk - 1, self.y(j)) {
                    return Err(Error::InvalidInput(format!("faces y_{j}, y_{kk} are incompatible")));
                }
            }
        }
        Ok(())
    }
}

/// All n-simplices x of K with d_j x = y_j for j != i.
pub fn horn_extensions(k: &FinSimplicialSet, h: &HornMap) -> Result<Vec<usize>> {
    h.validate(k)?;
    let n = h.n;
    Ok((0..k.count(n)).filter(|&x| (0..=n).filter(|&j| j != h.i).all(|j| k.face(n, j, x) == h.y(j))).collect())
}

/// Every horn (n, i) in K, found by backtracking over compatible faces.
pub fn enumerate_horns(k: &FinSimplicialSet, n: usize, i: usize, strategy: Strategy) -> Vec<HornMap> {
    if n == 0 || n > k.top() || i > n {
        return Vec::new();
    }
    let cells = k.count(n - 1);
    let order: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
    if n == 1 {
        return (0..cells).map(|y| HornMap { n, i, faces: vec![y] }).collect();
    }
    // by_face[j][v] = simplices y with d_j y = v
    let by_face: Vec<HashMap<usize, Vec<usize>>> = (0..n)
        .map(|j| {
            let mut m: HashMap<usize, Vec<usize>> = HashMap::new();
            for y in 0..cells {
                m.entry(k.face(n - 1, j, y)).or_default().push(y);
            }
            m
        })
        .collect();
    let firsts: Vec<usize> = (0..cells).collect();
    let chunks = par::map(strategy, cells * cells, &firsts, |&y0| {
        let mut out = Vec::new();
        let mut chosen = vec![y0];
        extend(k, n, &order, &by_face, &mut chosen, &mut out);
        out.into_iter().map(|faces| HornMap { n, i, faces }).collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().collect()
}

fn extend(
    k: &FinSimplicialSet,
    n: usize,
    order: &[usize],
    by_face: &[HashMap<usize, Vec<usize>>],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let pos = chosen.len();
    if pos == order.len() {
        out.push(chosen.clone());
        return;
    }
    let kk = order[pos];
    // constraint from the first chosen face: d_{j0} y_k = d_{k-1} y_{j0}
    let j0 = order[0];
    let Some(cands) = by_face[j0].get(&k.face(n - 1, kk - 1, chosen[0])) else { return };
    for &y in cands {
        let ok = (1..pos).all(|p| {
            let j = order[p];
            k.face(n - 1, j, y) == k.face(n - 1, kk - 1, chosen[p])
        });
        if ok {
            chosen.push(y);
            extend(k, n, order, by_face, chosen, out);
            chosen.pop();
        }
    }
}

/// Filler counts of every horn (n, i), keyed by the horn.
pub fn filler_counts(k: &FinSimplicialSet, n: usize, i: usize, strategy: Strategy) -> Vec<(HornMap, usize)> {
    let mut fill: HashMap<Vec<usize>, usize> = HashMap::new();
    for x in 0..k.count(n) {
        let key: Vec<usize> = (0..=n).filter(|&j| j != i).map(|j| k.face(n, j, x)).collect();
        *fill.entry(key).or_default() += 1;
    }
    enumerate_horns(k, n, i, strategy)
        .into_iter()
        .map(|h| {
            let c = fill.get(&h.faces).copied().unwrap_or(0);
            (h, c)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KanReport {
    pub up_to: usize,
    pub is_quasicategory: bool,
    /// every inner horn has exactly one filler
    pub unique: bool,
    pub horns_checked: usize,
    /// inner horns without a filler (at most 8 kept)
    pub counterexamples: Vec<HornMap>,
    /// inner horns with several fillers and their counts (at most 8 kept)
    pub non_unique: Vec<(HornMap, usize)>,
}

pub fn inner_kan_check(k: &FinSimplicialSet, up_to: usize) -> Result<KanReport> {
    inner_kan_check_with(k, up_to, Strategy::Auto)
}

pub fn inner_kan_check_with(k: &FinSimplicialSet, up_to: usize, strategy: Strategy) -> Result<KanReport> {
    if up_to > k.top() {
        return Err(Error::InvalidInput(format!("up_to {up_to} exceeds the dimension bound {}", k.top())));
    }
    let mut rep = KanReport { up_to, is_quasicategory: true, unique: true, horns_checked: 0, counterexamples: vec![], non_unique: vec![] };
    for n in 2..=up_to {
        for i in 1..n {
            for (h, c) in filler_counts(k, n, i, strategy) {
                rep.horns_checked += 1;
                if c == 0 {
                    rep.is_quasicategory = false;
                    rep.unique = false;
                    if rep.counterexamples.len() < 8 {
                        rep.counterexamples.push(h);
                    }
                } else if c > 1 {
                    rep.unique = false;
                    if rep.non_unique.len() < 8 {
                        rep.non_unique.push((h, c));
                    }
                }
            }
        }
    }
    Ok(rep)
}

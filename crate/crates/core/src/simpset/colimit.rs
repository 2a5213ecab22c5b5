use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::Budget;

use super::construct::{cone_with_keys, ConeSimplex, Nerve};
use super::sset::{FinSimplicialSet, SimplicialMap};

/// An extension of p to the cone: apex object and one leg per vertex of K.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocone {
    pub apex: usize,
    pub legs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum ColimitResult {
    Colimit { cocone: Cocone, extension: SimplicialMap, cocones: usize },
    NoColimit { cocones: usize },
}

impl ColimitResult {
    pub fn apex(&self) -> Option<usize> {
        match self {
            ColimitResult::Colimit { cocone, .. } => Some(cocone.apex),
            ColimitResult::NoColimit { .. } => None,
        }
    }
}

/// Try to extend p: K -> N(C) to the cone with the given apex and legs.
pub fn extend_to_cone(p: &SimplicialMap, nerve: &Nerve, cocone: &Cocone) -> Result<SimplicialMap> {
    let k = &p.source;
    let c = &nerve.category;
    let top = k.top().min(nerve.sset.top());
    let (cn, keys) = cone_with_keys(&k.truncate(top));
    let id = c.identities[cocone.apex];
    let mut maps = Vec::with_capacity(top + 1);
    for (n, level) in keys.iter().enumerate() {
        let row = level
            .iter()
            .map(|s| {
                let (start, chain) = match *s {
                    ConeSimplex::Point => (cocone.apex, vec![id; n]),
                    ConeSimplex::Base(m, x) => {
                        let (start, mut chain) = nerve.chains[m][p.maps[m][x]].clone();
                        if n > m {
                            let last = k.vertices(m, x)[m];
                            chain.push(cocone.legs[last]);
                            chain.extend(std::iter::repeat_n(id, n - m - 1));
                        }
                        (start, chain)
                    }
                };
                nerve.lookup(start, &chain).ok_or_else(|| Error::Violation("legs are not composable".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(row);
    }
    SimplicialMap::new(Arc::new(cn), Arc::new(nerve.sset.truncate(top)), maps)
}

/// Colimit of p: K -> N(C) as the initial object among cone extensions,
/// with cocone maps u: apex -> apex' satisfying u ∘ leg = leg'.
pub fn colimit_in_nerve(p: &SimplicialMap, nerve: &Nerve, budget: &Budget) -> Result<ColimitResult> {
    if p.target.as_ref() != &nerve.sset.truncate(p.target.top()) {
        return Err(Error::InvalidInput("diagram target is not the given nerve".into()));
    }
    let c = &nerve.category;
    let k = &p.source;
    let verts: Vec<usize> = (0..k.count(0)).map(|v| p.maps[0][v]).collect();
    let mut cocones = Vec::new();
    for apex in 0..c.num_objects() {
        let choices: Vec<Vec<usize>> = verts.iter().map(|&o| c.hom(o, apex)).collect();
        let total: usize = choices.iter().map(|v| v.len()).product();
        budget.check_count(total)?;
        for idx in 0..total {
            let mut r = idx;
            let legs: Vec<usize> = choices
                .iter()
                .map(|ch| {
                    let l = ch[r % ch.len()];
                    r /= ch.len();
                    l
                })
                .collect();
            let cc = Cocone { apex, legs };
            if extend_to_cone(p, nerve, &cc).is_ok() {
                cocones.push(cc);
            }
        }
    }
    let maps_between = |a: &Cocone, b: &Cocone| {
        c.hom(a.apex, b.apex).into_iter().filter(|&u| a.legs.iter().zip(&b.legs).all(|(&la, &lb)| c.compose(u, la) == Some(lb))).count()
    };
    let n = cocones.len();
    for a in &cocones {
        if cocones.iter().all(|b| maps_between(a, b) == 1) {
            let extension = extend_to_cone(p, nerve, a)?;
            return Ok(ColimitResult::Colimit { cocone: a.clone(), extension, cocones: n });
        }
    }
    Ok(ColimitResult::NoColimit { cocones: n })
}

/// Diagram K -> N(P) for a poset P given by a vertex map.
pub fn poset_diagram(k: &FinSimplicialSet, nerve: &Nerve, vmap: &[usize]) -> Result<SimplicialMap> {
    SimplicialMap::by_vertices(Arc::new(k.clone()), Arc::new(nerve.sset.clone()), vmap)
}

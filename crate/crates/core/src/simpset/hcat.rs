use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Strategy;

use super::category::{FinCategory, Morphism};
use super::horn::inner_kan_check_with;
use super::sset::FinSimplicialSet;

/// h(K) together with the class of every 1-simplex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomotopyCategory {
    pub category: FinCategory,
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    /// pairs (f, g) witnessed by a 2-simplex with d_0 an identity
    pub witnessed_pairs: usize,
    /// 2-simplices checked against the composition table
    pub triangles_checked: usize,
}

/// Pairs (f, g) with a 2-simplex σ: d_2σ = f, d_1σ = g, d_0σ = id.
pub fn homotopy_pairs(k: &FinSimplicialSet) -> HashSet<(usize, usize)> {
    (0..k.count(2))
        .filter(|&s| {
            let d0 = k.face(2, 0, s);
            d0 == k.identity_edge(k.face(1, 0, d0))
        })
        .map(|s| (k.face(2, 2, s), k.face(2, 1, s)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

pub fn check_relation(k: &FinSimplicialSet, rel: &HashSet<(usize, usize)>) -> RelationCheck {
    let reflexive = (0..k.count(1)).all(|f| rel.contains(&(f, f)));
    let symmetric = rel.iter().all(|&(f, g)| rel.contains(&(g, f)));
    let mut after: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(f, g) in rel {
        after.entry(f).or_default().push(g);
    }
    let transitive = rel.iter().all(|&(f, g)| after.get(&g).is_none_or(|hs| hs.iter().all(|&h| rel.contains(&(f, h)))));
    RelationCheck { reflexive, symmetric, transitive }
}

/// The homotopy category of a quasi-category. Fails unless inner horns up
/// to dimension 3 fill, the relation is an equivalence, and composition is
/// independent of the chosen fillers.
pub fn homotopy_category(k: &FinSimplicialSet) -> Result<HomotopyCategory> {
    homotopy_category_with(k, Strategy::Auto)
}

pub fn homotopy_category_with(k: &FinSimplicialSet, strategy: Strategy) -> Result<HomotopyCategory> {
    if k.top() < 3 {
        return Err(Error::PreconditionUnverified("need simplices up to dimension 3".into()));
    }
    let kan = inner_kan_check_with(k, 3, strategy)?;
    if !kan.is_quasicategory {
        return Err(Error::PreconditionUnverified(format!("not a quasi-category: unfilled horn {:?}", kan.counterexamples[0])));
    }
    let rel = homotopy_pairs(k);
    let rc = check_relation(k, &rel);
    if !rc.holds() {
        return Err(Error::Violation(format!("homotopy relation is not an equivalence: {rc:?}")));
    }
    let e1 = k.count(1);
    let mut class_of = vec![usize::MAX; e1];
    let mut representatives = Vec::new();
    let mut related: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(f, g) in &rel {
        related.entry(f).or_default().push(g);
    }
    for f in 0..e1 {
        if class_of[f] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(f);
        for &g in &related[&f] {
            class_of[g] = c;
        }
    }
    let ncl = representatives.len();
    let mut comp: Vec<Vec<Option<usize>>> = vec![vec![None; ncl]; ncl];
    for s in 0..k.count(2) {
        let (f1, f2, h) = (k.face(2, 2, s), k.face(2, 0, s), k.face(2, 1, s));
        let slot = &mut comp[class_of[f2]][class_of[f1]];
        match *slot {
            None => *slot = Some(class_of[h]),
            Some(c) if c == class_of[h] => {}
            Some(_) => return Err(Error::Violation(format!("composition depends on the filler (2-simplex {s})"))),
        }
    }
    let objects = (0..k.count(0)).map(|v| format!("x{v}")).collect();
    let morphisms: Vec<Morphism> =
        representatives.iter().map(|&f| Morphism { name: format!("[{f}]"), src: k.face(1, 1, f), tgt: k.face(1, 0, f) }).collect();
    let identities = (0..k.count(0)).map(|v| class_of[k.identity_edge(v)]).collect();
    let category = FinCategory::new(objects, morphisms, comp, identities)
        .map_err(|e| Error::Violation(format!("homotopy category fails the category laws: {e}")))?;
    Ok(HomotopyCategory { category, class_of, representatives, witnessed_pairs: rel.len(), triangles_checked: k.count(2) })
}

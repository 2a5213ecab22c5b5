use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// Finite category; `comp[g][f]` is g ∘ f when tgt f = src g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub comp: Vec<Vec<Option<usize>>>,
    pub identities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    Shape(String),
    Composable { g: usize, f: usize },
    Identity { object: usize, f: usize },
    Associativity { h: usize, g: usize, f: usize },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::Shape(s) => write!(fm, "malformed category: {s}"),
            CategoryViolation::Composable { g, f } => write!(fm, "composite of {g} after {f} is wrongly (un)defined"),
            CategoryViolation::Identity { object, f } => write!(fm, "identity of object {object} fails on {f}"),
            CategoryViolation::Associativity { h, g, f } => write!(fm, "({h} {g}) {f} != {h} ({g} {f})"),
        }
    }
}

impl FinCategory {
    pub fn new(objects: Vec<String>, morphisms: Vec<Morphism>, comp: Vec<Vec<Option<usize>>>, identities: Vec<usize>) -> Result<Self> {
        let c = FinCategory { objects, morphisms, comp, identities };
        c.validate().map_err(|v| Error::InvalidInput(v.to_string()))?;
        Ok(c)
    }

    /// Build the composition table from a function on composable pairs.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = morphisms.len();
        let comp = (0..n).map(|g| (0..n).map(|f| (morphisms[f].tgt == morphisms[g].src).then(|| compose(g, f))).collect()).collect();
        Self::new(objects, morphisms, comp, identities)
    }

    pub fn validate(&self) -> std::result::Result<(), CategoryViolation> {
        let (no, nm) = (self.objects.len(), self.morphisms.len());
        if self.identities.len() != no || self.comp.len() != nm || self.comp.iter().any(|r| r.len() != nm) {
            return Err(CategoryViolation::Shape("table sizes".into()));
        }
        if self.morphisms.iter().any(|m| m.src >= no || m.tgt >= no) || self.identities.iter().any(|&i| i >= nm) {
            return Err(CategoryViolation::Shape("index out of range".into()));
        }
        for g in 0..nm {
            for f in 0..nm {
                let composable = self.morphisms[f].tgt == self.morphisms[g].src;
                match self.comp[g][f] {
                    Some(h) if composable && h < nm => {
                        let m = &self.morphisms[h];
                        if m.src != self.morphisms[f].src || m.tgt != self.morphisms[g].tgt {
                            return Err(CategoryViolation::Composable { g, f });
                        }
                    }
                    None if !composable => {}
                    _ => return Err(CategoryViolation::Composable { g, f }),
                }
            }
        }
        for (o, &id) in self.identities.iter().enumerate() {
            if self.morphisms[id].src != o || self.morphisms[id].tgt != o {
                return Err(CategoryViolation::Identity { object: o, f: id });
            }
            for f in 0..nm {
                if self.morphisms[f].tgt == o && self.comp[id][f] != Some(f) {
                    return Err(CategoryViolation::Identity { object: o, f });
                }
                if self.morphisms[f].src == o && self.comp[f][id] != Some(f) {
                    return Err(CategoryViolation::Identity { object: o, f });
                }
            }
        }
        for h in 0..nm {
            for g in 0..nm {
                let Some(hg) = self.comp[h][g] else { continue };
                for f in 0..nm {
                    let Some(gf) = self.comp[g][f] else { continue };
                    if self.comp[hg][f] != self.comp[h][gf] {
                        return Err(CategoryViolation::Associativity { h, g, f });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }
    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }
    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].src == a && self.morphisms[f].tgt == b).collect()
    }

    /// True when the given object and morphism maps are bijections that
    /// carry sources, targets, identities, and the composition table across.
    pub fn iso_via(&self, other: &FinCategory, obj: &[usize], mor: &[usize]) -> bool {
        let bij = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        };
        if !bij(obj, other.objects.len()) || !bij(mor, other.morphisms.len()) {
            return false;
        }
        let n = self.morphisms.len();
        (0..self.objects.len()).all(|o| mor[self.identities[o]] == other.identities[obj[o]])
            && (0..n).all(|f| obj[self.src(f)] == other.src(mor[f]) && obj[self.tgt(f)] == other.tgt(mor[f]))
            && (0..n).all(|g| (0..n).all(|f| self.comp[g][f].map(|h| mor[h]) == other.comp[mor[g]][mor[f]]))
    }

    /// Objects with exactly one morphism to every object.
    pub fn initial_objects(&self) -> Vec<usize> {
        (0..self.objects.len()).filter(|&a| (0..self.objects.len()).all(|b| self.hom(a, b).len() == 1)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: FinCategory = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        c.validate().map_err(|v| Error::InvalidInput(v.to_string()))?;
        Ok(c)
    }

    // ---- constructors -------------------------------------------------

    /// Poset on 0..n; `leq(i, j)` must be a partial order.
    pub fn poset(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut at = vec![vec![usize::MAX; n]; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    at[i][j] = morphisms.len();
                    let name = if i == j { format!("id_{}", names[i]) } else { format!("{}<={}", names[i], names[j]) };
                    morphisms.push(Morphism { name, src: i, tgt: j });
                }
            }
        }
        if (0..n).any(|i| at[i][i] == usize::MAX) {
            return Err(Error::InvalidInput("poset relation is not reflexive".into()));
        }
        let identities = (0..n).map(|i| at[i][i]).collect();
        let mut comp = vec![vec![None; morphisms.len()]; morphisms.len()];
        for (g, mg) in morphisms.iter().enumerate() {
            for (f, mf) in morphisms.iter().enumerate() {
                if mf.tgt == mg.src {
                    let h = at[mf.src][mg.tgt];
                    if h == usize::MAX {
                        return Err(Error::InvalidInput("poset relation is not transitive".into()));
                    }
                    comp[g][f] = Some(h);
                }
            }
        }
        Self::new(names, morphisms, comp, identities)
    }

    /// Linear order 0 < 1 < .. < n-1.
    pub fn chain(n: usize) -> Self {
        Self::poset((0..n).map(|i| i.to_string()).collect(), |i, j| i <= j).expect("order")
    }

    /// Subsets of {1..k} under inclusion, objects in bitmask order.
    pub fn subsets(k: usize) -> Self {
        let names = (0..1usize << k)
            .map(|m| {
                let items: Vec<String> = (0..k).filter(|b| m >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        Self::poset(names, |i, j| i & j == i).expect("lattice")
    }

    pub fn discrete(n: usize) -> Self {
        Self::poset((0..n).map(|i| i.to_string()).collect(), |i, j| i == j).expect("order")
    }

    /// One-object category from a monoid table, element 0 the unit;
    /// `table[g][f]` is g ∘ f.
    pub fn monoid(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let morphisms = names.iter().map(|n| Morphism { name: n.clone(), src: 0, tgt: 0 }).collect();
        let comp = table.into_iter().map(|r| r.into_iter().map(Some).collect()).collect();
        Self::new(vec!["*".into()], morphisms, comp, vec![0])
    }

    pub fn cyclic_group(n: usize) -> Self {
        let names = (0..n).map(|i| format!("g{i}")).collect();
        Self::monoid(names, (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).expect("group")
    }

    pub fn klein_group() -> Self {
        let names = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
        Self::monoid(names, (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()).expect("group")
    }

    /// Permutations of 3 letters, g ∘ f applied right to left.
    pub fn symmetric3() -> Self {
        let mut perms: Vec<[usize; 3]> = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        perms.push([a, b, c]);
                    }
                }
            }
        }
        let names = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        let table = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|f| {
                        let h = [g[f[0]], g[f[1]], g[f[2]]];
                        perms.iter().position(|p| *p == h).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::monoid(names, table).expect("group")
    }

    /// {1, e} with e e = e.
    pub fn idempotent_monoid() -> Self {
        Self::monoid(vec!["1".into(), "e".into()], vec![vec![0, 1], vec![1, 1]]).expect("monoid")
    }

    /// {1, a, 0} with a a = 0.
    pub fn nilpotent_monoid() -> Self {
        Self::monoid(vec!["1".into(), "a".into(), "0".into()], vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]).expect("monoid")
    }

    /// Two objects and two parallel arrows u, v: 0 -> 1.
    pub fn parallel_pair() -> Self {
        let ms = vec![
            Morphism { name: "id_0".into(), src: 0, tgt: 0 },
            Morphism { name: "id_1".into(), src: 1, tgt: 1 },
            Morphism { name: "u".into(), src: 0, tgt: 1 },
            Morphism { name: "v".into(), src: 0, tgt: 1 },
        ];
        Self::from_fn(vec!["0".into(), "1".into()], ms.clone(), vec![0, 1], |g, f| if ms[g].src == ms[g].tgt { f } else { g })
            .expect("category")
    }

    /// Two objects and an isomorphism between them.
    pub fn iso_pair() -> Self {
        let ms = vec![
            Morphism { name: "id_0".into(), src: 0, tgt: 0 },
            Morphism { name: "id_1".into(), src: 1, tgt: 1 },
            Morphism { name: "u".into(), src: 0, tgt: 1 },
            Morphism { name: "u^-1".into(), src: 1, tgt: 0 },
        ];
        Self::from_fn(vec!["0".into(), "1".into()], ms.clone(), vec![0, 1], |g, f| {
            if g < 2 {
                f
            } else if f < 2 {
                g
            } else {
                ms[f].src
            }
        })
        .expect("category")
    }
}

/// Test zoo: small posets, groups, and monoids (at most 3 objects and 8 morphisms).
pub fn category_zoo() -> Vec<(&'static str, FinCategory)> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        ("point", FinCategory::chain(1)),
        ("discrete2", FinCategory::discrete(2)),
        ("arrow", FinCategory::chain(2)),
        ("chain3", FinCategory::chain(3)),
        ("span", FinCategory::poset(names(&["a", "b", "c"]), |i, j| i == j || i == 0).expect("poset")),
        ("cospan", FinCategory::poset(names(&["a", "b", "c"]), |i, j| i == j || j == 2).expect("poset")),
        ("parallel_pair", FinCategory::parallel_pair()),
        ("iso_pair", FinCategory::iso_pair()),
        ("Z2", FinCategory::cyclic_group(2)),
        ("Z3", FinCategory::cyclic_group(3)),
        ("Z2xZ2", FinCategory::klein_group()),
        ("S3", FinCategory::symmetric3()),
        ("idempotent", FinCategory::idempotent_monoid()),
        ("nilpotent", FinCategory::nilpotent_monoid()),
    ]
}

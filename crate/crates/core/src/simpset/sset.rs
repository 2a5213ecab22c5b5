use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simplicial set truncated at dimension `top`, simplices numbered
/// 0..count(m) in each dimension, degenerate ones stored explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSimplicialSet {
    top: usize,
    counts: Vec<usize>,
    // faces[m][i][x] = d_i x for x of dimension m (faces[0] is empty)
    faces: Vec<Vec<Vec<usize>>>,
    // degens[m][j][x] = s_j x for m < top
    degens: Vec<Vec<Vec<usize>>>,
    degenerate: Vec<Vec<bool>>,
}

/// First simplicial identity found to fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicialViolation {
    Shape(String),
    /// d_i d_j != d_{j-1} d_i on x (i < j)
    FaceFace {
        dim: usize,
        i: usize,
        j: usize,
        x: usize,
    },
    /// d_i s_j against the three degeneracy cases
    FaceDegen {
        dim: usize,
        i: usize,
        j: usize,
        x: usize,
    },
    /// s_i s_j != s_{j+1} s_i on x (i <= j)
    DegenDegen {
        dim: usize,
        i: usize,
        j: usize,
        x: usize,
    },
}

impl fmt::Display for SimplicialViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplicialViolation::Shape(s) => write!(f, "malformed tables: {s}"),
            SimplicialViolation::FaceFace { dim, i, j, x } => {
                write!(f, "d_{i} d_{j} != d_{} d_{i} on simplex {x} of dimension {dim}", j - 1)
            }
            SimplicialViolation::FaceDegen { dim, i, j, x } => {
                write!(f, "d_{i} s_{j} identity fails on simplex {x} of dimension {dim}")
            }
            SimplicialViolation::DegenDegen { dim, i, j, x } => {
                write!(f, "s_{i} s_{j} != s_{} s_{i} on simplex {x} of dimension {dim}", j + 1)
            }
        }
    }
}

impl FinSimplicialSet {
    /// Tables as given; shapes are checked, identities are not.
    pub fn from_tables(top: usize, counts: Vec<usize>, faces: Vec<Vec<Vec<usize>>>, degens: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let bad = |s: String| Err(Error::InvalidInput(s));
        if counts.len() != top + 1 || faces.len() != top + 1 || degens.len() != top {
            return bad(format!("expected {} dimensions of counts/faces and {top} of degeneracies", top + 1));
        }
        for m in 0..=top {
            let want = if m == 0 { 0 } else { m + 1 };
            if faces[m].len() != want {
                return bad(format!("dimension {m} needs {want} face maps"));
            }
            for (i, t) in faces[m].iter().enumerate() {
                if t.len() != counts[m] || t.iter().any(|&y| y >= counts[m - 1]) {
                    return bad(format!("face d_{i} on dimension {m} is out of range"));
                }
            }
            if m < top {
                if degens[m].len() != m + 1 {
                    return bad(format!("dimension {m} needs {} degeneracies", m + 1));
                }
                for (j, t) in degens[m].iter().enumerate() {
                    if t.len() != counts[m] || t.iter().any(|&y| y >= counts[m + 1]) {
                        return bad(format!("degeneracy s_{j} on dimension {m} is out of range"));
                    }
                }
            }
        }
        let mut degenerate: Vec<Vec<bool>> = counts.iter().map(|&c| vec![false; c]).collect();
        for m in 0..top {
            for t in &degens[m] {
                for &y in t {
                    degenerate[m + 1][y] = true;
                }
            }
        }
        Ok(FinSimplicialSet { top, counts, faces, degens, degenerate })
    }

    /// Build from explicit simplex keys; every face and degeneracy of a key
    /// must itself be a key one dimension down (up).
    pub fn from_keys<K, F, S>(top: usize, levels: &[Vec<K>], face: F, degen: S) -> Result<Self>
    where
        K: Eq + Hash + Clone + fmt::Debug,
        F: Fn(usize, usize, &K) -> K,
        S: Fn(usize, usize, &K) -> K,
    {
        if levels.len() != top + 1 {
            return Err(Error::InvalidInput("one level per dimension".into()));
        }
        let index: Vec<HashMap<&K, usize>> = levels.iter().map(|l| l.iter().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        for (m, ix) in index.iter().enumerate() {
            if ix.len() != levels[m].len() {
                return Err(Error::InvalidInput(format!("duplicate simplex in dimension {m}")));
            }
        }
        let look =
            |m: usize, k: &K| index[m].get(k).copied().ok_or_else(|| Error::InvalidInput(format!("{k:?} missing from dimension {m}")));
        let mut faces = vec![Vec::new()];
        for m in 1..=top {
            let mut fm = Vec::with_capacity(m + 1);
            for i in 0..=m {
                fm.push(levels[m].iter().map(|k| look(m - 1, &face(m, i, k))).collect::<Result<Vec<_>>>()?);
            }
            faces.push(fm);
        }
        let mut degens = Vec::new();
        for m in 0..top {
            let mut sm = Vec::with_capacity(m + 1);
            for j in 0..=m {
                sm.push(levels[m].iter().map(|k| look(m + 1, &degen(m, j, k))).collect::<Result<Vec<_>>>()?);
            }
            degens.push(sm);
        }
        Self::from_tables(top, levels.iter().map(|l| l.len()).collect(), faces, degens)
    }

    pub fn empty(top: usize) -> Self {
        let faces = (0..=top).map(|m| if m == 0 { vec![] } else { vec![vec![]; m + 1] }).collect();
        let degens = (0..top).map(|m| vec![vec![]; m + 1]).collect();
        Self::from_tables(top, vec![0; top + 1], faces, degens).expect("shape")
    }

    pub fn top(&self) -> usize {
        self.top
    }
    pub fn count(&self, m: usize) -> usize {
        self.counts.get(m).copied().unwrap_or(0)
    }
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
    pub fn face(&self, m: usize, i: usize, x: usize) -> usize {
        self.faces[m][i][x]
    }
    pub fn degen(&self, m: usize, j: usize, x: usize) -> usize {
        self.degens[m][j][x]
    }
    pub fn is_degenerate(&self, m: usize, x: usize) -> bool {
        self.degenerate[m][x]
    }
    pub fn nondegenerate(&self, m: usize) -> Vec<usize> {
        (0..self.count(m)).filter(|&x| !self.degenerate[m][x]).collect()
    }
    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.top).map(|m| self.nondegenerate(m).len()).collect()
    }

    /// All faces of x, d_0 x .. d_m x.
    pub fn faces_of(&self, m: usize, x: usize) -> Vec<usize> {
        (0..=m).map(|i| self.faces[m][i][x]).collect()
    }

    /// Vertex sequence of x.
    pub fn vertices(&self, m: usize, x: usize) -> Vec<usize> {
        (0..=m)
            .map(|k| {
                let (mut d, mut y) = (m, x);
                while d > k {
                    y = self.faces[d][d][y];
                    d -= 1;
                }
                while d > 0 {
                    y = self.faces[d][0][y];
                    d -= 1;
                }
                y
            })
            .collect()
    }

    /// Identity 1-simplex s_0 v.
    pub fn identity_edge(&self, v: usize) -> usize {
        self.degens[0][0][v]
    }

    pub fn validate(&self) -> std::result::Result<(), SimplicialViolation> {
        let t = self.top;
        for m in 2..=t {
            for x in 0..self.counts[m] {
                for j in 1..=m {
                    for i in 0..j {
                        let a = self.faces[m - 1][i][self.faces[m][j][x]];
                        let b = self.faces[m - 1][j - 1][self.faces[m][i][x]];
                        if a != b {
                            return Err(SimplicialViolation::FaceFace { dim: m, i, j, x });
                        }
                    }
                }
            }
        }
        for m in 0..t {
            for x in 0..self.counts[m] {
                for j in 0..=m {
                    let sx = self.degens[m][j][x];
                    for i in 0..=m + 1 {
                        let lhs = self.faces[m + 1][i][sx];
                        let ok = if i < j {
                            lhs == self.degens[m - 1][j - 1][self.faces[m][i][x]]
                        } else if i == j || i == j + 1 {
                            lhs == x
                        } else {
                            lhs == self.degens[m - 1][j][self.faces[m][i - 1][x]]
                        };
                        if !ok {
                            return Err(SimplicialViolation::FaceDegen { dim: m, i, j, x });
                        }
                    }
                }
                if m + 2 <= t {
                    for j in 0..=m {
                        for i in 0..=j {
                            let a = self.degens[m + 1][i][self.degens[m][j][x]];
                            let b = self.degens[m + 1][j + 1][self.degens[m][i][x]];
                            if a != b {
                                return Err(SimplicialViolation::DegenDegen { dim: m, i, j, x });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Overwrite one face entry; for building corrupted fixtures.
    pub fn with_face(mut self, m: usize, i: usize, x: usize, y: usize) -> Result<Self> {
        if m == 0 || m > self.top || i > m || x >= self.counts[m] || y >= self.counts[m - 1] {
            return Err(Error::InvalidInput("face entry out of range".into()));
        }
        self.faces[m][i][x] = y;
        Ok(self)
    }

    /// Lower the dimension bound.
    pub fn truncate(&self, top: usize) -> Self {
        if top >= self.top {
            return self.clone();
        }
        let mut s = self.clone();
        s.top = top;
        s.counts.truncate(top + 1);
        s.faces.truncate(top + 1);
        s.degens.truncate(top);
        s.degenerate.truncate(top + 1);
        s
    }

    pub fn to_json(&self) -> SimplicialJson {
        SimplicialJson {
            n: self.top,
            simplices: self.counts.iter().map(|&c| (0..c).collect()).collect(),
            d: self.faces.clone(),
            s: self.degens.clone(),
        }
    }

    pub fn from_json(j: &SimplicialJson) -> Result<Self> {
        for (m, ids) in j.simplices.iter().enumerate() {
            if ids.iter().enumerate().any(|(k, &id)| k != id) {
                return Err(Error::InvalidInput(format!("simplex ids in dimension {m} must be 0..count")));
            }
        }
        Self::from_tables(j.n, j.simplices.iter().map(|l| l.len()).collect(), j.d.clone(), j.s.clone())
    }
}

pub fn validate_simplicial(k: &FinSimplicialSet) -> std::result::Result<(), SimplicialViolation> {
    k.validate()
}

/// `{"N": .., "simplices": [[ids]..], "d": [dim][i][id], "s": [dim][j][id]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub simplices: Vec<Vec<usize>>,
    pub d: Vec<Vec<Vec<usize>>>,
    pub s: Vec<Vec<Vec<usize>>>,
}

/// Map of truncated simplicial sets, defined up to the smaller bound.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    pub source: Arc<FinSimplicialSet>,
    pub target: Arc<FinSimplicialSet>,
    pub maps: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(source: Arc<FinSimplicialSet>, target: Arc<FinSimplicialSet>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let m = SimplicialMap { source, target, maps };
        m.validate()?;
        Ok(m)
    }

    pub fn top(&self) -> usize {
        self.source.top().min(self.target.top())
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        let top = self.top();
        if self.maps.len() != top + 1 {
            return Err(Error::InvalidInput(format!("map needs {} levels", top + 1)));
        }
        for m in 0..=top {
            if self.maps[m].len() != s.count(m) || self.maps[m].iter().any(|&y| y >= t.count(m)) {
                return Err(Error::InvalidInput(format!("level {m} is out of range")));
            }
        }
        for m in 0..=top {
            for x in 0..s.count(m) {
                let fx = self.maps[m][x];
                if m > 0 {
                    for i in 0..=m {
                        if self.maps[m - 1][s.face(m, i, x)] != t.face(m, i, fx) {
                            return Err(Error::Violation(format!("map does not commute with d_{i} in dimension {m}")));
                        }
                    }
                }
                if m < top {
                    for j in 0..=m {
                        if self.maps[m + 1][s.degen(m, j, x)] != t.degen(m, j, fx) {
                            return Err(Error::Violation(format!("map does not commute with s_{j} in dimension {m}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        (0..=self.top()).all(|m| {
            let mut seen = vec![false; self.target.count(m)];
            self.maps[m].len() == self.target.count(m) && self.maps[m].iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// The map determined by a vertex map, for targets whose simplices are
    /// determined by their vertices (standard simplices, poset nerves).
    pub fn by_vertices(source: Arc<FinSimplicialSet>, target: Arc<FinSimplicialSet>, vmap: &[usize]) -> Result<Self> {
        let top = source.top().min(target.top());
        let mut maps = Vec::with_capacity(top + 1);
        for m in 0..=top {
            let mut ix: HashMap<Vec<usize>, Option<usize>> = HashMap::new();
            for y in 0..target.count(m) {
                ix.entry(target.vertices(m, y)).and_modify(|e| *e = None).or_insert(Some(y));
            }
            let level = (0..source.count(m))
                .map(|x| {
                    let vs: Vec<usize> = source.vertices(m, x).iter().map(|&v| vmap[v]).collect();
                    match ix.get(&vs) {
                        Some(Some(y)) => Ok(*y),
                        Some(None) => Err(Error::InvalidInput(format!("target simplex over {vs:?} is not unique"))),
                        None => Err(Error::InvalidInput(format!("no target simplex over {vs:?}"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            maps.push(level);
        }
        Self::new(source, target, maps)
    }
}

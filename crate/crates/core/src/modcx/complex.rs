use std::fmt;

use serde::{Deserialize, Serialize};

use super::module::{matrix_from_rows, matrix_rows, Module, ModuleJson, Term};
use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix, Quotient, Subspace};

/// Dimension per degree on a window starting at `lo`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub lo: i32,
    pub dims: Vec<usize>,
}

impl GradedDims {
    pub fn new(lo: i32, dims: Vec<usize>) -> Self {
        GradedDims { lo, dims }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn get(&self, deg: i32) -> usize {
        if deg < self.lo {
            return 0;
        }
        self.dims.get((deg - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.dims.iter().enumerate().map(move |(i, &d)| (self.lo + i as i32, d))
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Same values read on another window.
    pub fn window(&self, lo: i32, hi: i32) -> GradedDims {
        GradedDims { lo, dims: (lo..=hi).map(|d| self.get(d)).collect() }
    }

    /// Degree-reversed copy, for reading cohomological as homological.
    pub fn negated(&self) -> GradedDims {
        let mut dims = self.dims.clone();
        dims.reverse();
        GradedDims { lo: -self.hi(), dims }
    }

    pub fn is_concentrated_in(&self, deg: i32) -> bool {
        self.iter().all(|(d, v)| d == deg || v == 0)
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]:", self.lo, self.hi())?;
        for d in &self.dims {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

/// Bounded cochain complex; `diffs[k]` goes from degree lo+k to lo+k+1.
/// Terms outside `[lo, hi]` are zero.
#[derive(Clone)]
pub struct ChainComplex<T: Term> {
    field: Fp,
    lo: i32,
    terms: Vec<T>,
    diffs: Vec<Matrix>,
}

impl<T: Term> fmt::Debug for ChainComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<usize> = self.terms.iter().map(|t| t.dim()).collect();
        write!(f, "ChainComplex(lo {}, dims {:?})", self.lo, dims)
    }
}

impl<T: Term> ChainComplex<T> {
    /// Checked constructor: shapes, d∘d = 0, and linearity of every d.
    pub fn new(lo: i32, terms: Vec<T>, diffs: Vec<Matrix>) -> Result<Self> {
        let c = Self::new_unchecked(lo, terms, diffs)?;
        c.validate()?;
        Ok(c)
    }

    /// Shape-checked only. `diffs` may have `terms.len() - 1` entries; the
    /// last differential (into zero) is appended.
    pub fn new_unchecked(lo: i32, terms: Vec<T>, mut diffs: Vec<Matrix>) -> Result<Self> {
        let field = terms
            .first()
            .map(|t| t.field())
            .ok_or_else(|| Error::InvalidInput("complex needs at least one term (use ChainComplex::zero)".into()))?;
        if diffs.len() + 1 == terms.len() {
            diffs.push(Matrix::zeros(field, 0, terms.last().expect("nonempty").dim()));
        }
        if diffs.len() != terms.len() {
            return Err(Error::DimensionMismatch("one differential per term expected".into()));
        }
        for k in 0..terms.len() {
            let next = terms.get(k + 1).map(|t| t.dim()).unwrap_or(0);
            if diffs[k].rows() != next || diffs[k].cols() != terms[k].dim() {
                return Err(Error::DimensionMismatch(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    lo + k as i32,
                    diffs[k].rows(),
                    diffs[k].cols(),
                    next,
                    terms[k].dim()
                )));
            }
        }
        Ok(ChainComplex { field, lo, terms, diffs })
    }

    /// The complex with a single term `t` in degree `deg`.
    pub fn concentrated(t: T, deg: i32) -> Self {
        let f = t.field();
        let d = Matrix::zeros(f, 0, t.dim());
        ChainComplex { field: f, lo: deg, terms: vec![t], diffs: vec![d] }
    }

    /// Zero complex in degree `deg`, modelled on `t`'s algebras.
    pub fn zero(t: &T, deg: i32) -> Self {
        Self::concentrated(t.zero_like(), deg)
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..self.terms.len() {
            let deg = self.lo + k as i32;
            if k + 1 < self.terms.len() {
                if !self.terms[k].compatible(&self.terms[k + 1]) {
                    return Err(Error::InvalidInput(format!("terms in degrees {deg}, {} over different algebras", deg + 1)));
                }
                if !self.terms[k].is_linear_map(&self.terms[k + 1], &self.diffs[k]) {
                    return Err(Error::Violation(format!("differential d^{deg} is not linear")));
                }
                let dd = self.diffs[k + 1].mul(&self.diffs[k])?;
                if !dd.is_zero() {
                    return Err(Error::Violation(format!("d^{} d^{deg} != 0", deg + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn lo(&self) -> i32 {
        self.lo
    }
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }
    pub fn terms(&self) -> &[T] {
        &self.terms
    }
    pub fn diffs(&self) -> &[Matrix] {
        &self.diffs
    }

    pub fn term(&self, deg: i32) -> Option<&T> {
        if deg < self.lo {
            return None;
        }
        self.terms.get((deg - self.lo) as usize)
    }

    pub fn dim(&self, deg: i32) -> usize {
        self.term(deg).map(|t| t.dim()).unwrap_or(0)
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims::new(self.lo, self.terms.iter().map(|t| t.dim()).collect())
    }

    /// d^deg as a dim(deg+1) x dim(deg) matrix (zero outside the range).
    pub fn diff(&self, deg: i32) -> Matrix {
        if deg >= self.lo && deg <= self.hi() {
            return self.diffs[(deg - self.lo) as usize].clone();
        }
        Matrix::zeros(self.field, self.dim(deg + 1), self.dim(deg))
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(|t| t.dim()).sum()
    }

    /// dim H^i for i in [lo, hi].
    pub fn homology_dims(&self, lo: i32, hi: i32) -> GradedDims {
        let ranks: Vec<usize> = ((lo - 1)..=hi).map(|d| self.diff(d).rank()).collect();
        let dims = (lo..=hi)
            .map(|d| {
                let i = (d - lo) as usize;
                self.dim(d) - ranks[i + 1] - ranks[i]
            })
            .collect();
        GradedDims::new(lo, dims)
    }

    pub fn homology(&self) -> GradedDims {
        self.homology_dims(self.lo, self.hi())
    }

    /// Good truncation τ≤t: degrees > t dropped, degree t replaced by its cycles.
    pub fn trunc_le(&self, t: i32) -> Result<Self> {
        if t >= self.hi() {
            return Ok(self.clone());
        }
        if t < self.lo {
            return Ok(Self::zero(&self.terms[0], t));
        }
        let k = (t - self.lo) as usize;
        let cycles = Subspace::span(self.field, self.terms[k].dim(), self.diffs[k].kernel_basis().iter().map(|v| v.as_slice()));
        let top = self.terms[k].restrict_to(&cycles).ok_or_else(|| Error::Violation("cycles are not a submodule".into()))?;
        let mut terms = self.terms[..k].to_vec();
        let mut diffs = self.diffs[..k].to_vec();
        if k > 0 {
            // re-express d^{t-1} in the echelon coordinates of the cycles
            let d = &diffs[k - 1];
            let cols: Vec<Vec<u32>> = d.columns().iter().map(|c| cycles.coords_unchecked(c)).collect();
            diffs[k - 1] = Matrix::from_columns(self.field, cycles.dim(), &cols);
        }
        diffs.push(Matrix::zeros(self.field, 0, top.dim()));
        terms.push(top);
        Ok(ChainComplex { field: self.field, lo: self.lo, terms, diffs })
    }

    /// Good truncation τ≥t: degrees < t dropped, degree t replaced by the
    /// cokernel of the incoming differential.
    pub fn trunc_ge(&self, t: i32) -> Result<Self> {
        if t <= self.lo {
            return Ok(self.clone());
        }
        if t > self.hi() {
            return Ok(Self::zero(&self.terms[0], t));
        }
        let k = (t - self.lo) as usize;
        let im = Subspace::column_span(&self.diffs[k - 1]);
        let q = Quotient::new(im);
        let bottom = self.terms[k].quotient_by(&q);
        let mut terms = vec![bottom];
        terms.extend_from_slice(&self.terms[k + 1..]);
        let mut diffs = self.diffs[k..].to_vec();
        diffs[0] = diffs[0].mul(&q.section())?;
        Ok(ChainComplex { field: self.field, lo: t, terms, diffs })
    }

    /// Apply a structure-changing map to every term, keeping differentials.
    pub fn map_terms<U: Term>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<ChainComplex<U>> {
        let terms = self.terms.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(ChainComplex { field: self.field, lo: self.lo, terms, diffs: self.diffs.clone() })
    }

    /// Zero-padded copy on [lo, hi] (must contain the current range).
    pub fn padded(&self, lo: i32, hi: i32) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let z = self.terms[0].zero_like();
        let terms: Vec<T> = (lo..=hi).map(|d| self.term(d).cloned().unwrap_or_else(|| z.clone())).collect();
        let diffs = (lo..=hi).map(|d| self.diff(d)).collect();
        ChainComplex { field: self.field, lo, terms, diffs }
    }

    /// Shift: (C[n])^i = C^{i+n}, d -> (-1)^n d.
    pub fn shift(&self, n: i32) -> Self {
        let s = self.field.sign(n as i64);
        ChainComplex {
            field: self.field,
            lo: self.lo - n,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(s)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let a = self.padded(lo, hi);
        let b = other.padded(lo, hi);
        let terms = a.terms.iter().zip(&b.terms).map(|(x, y)| T::direct_sum(&[x.clone(), y.clone()])).collect();
        let diffs = a.diffs.iter().zip(&b.diffs).map(|(x, y)| Matrix::block_diag(self.field, &[x.clone(), y.clone()])).collect();
        Ok(ChainComplex { field: self.field, lo, terms, diffs })
    }
}

impl ChainComplex<Module> {
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            lo: self.lo,
            hi: self.hi(),
            terms: self.terms.iter().map(|t| t.to_json()).collect(),
            diffs: self.diffs[..self.diffs.len() - 1].iter().map(matrix_rows).collect(),
        }
    }
}

/// `{ "lo", "hi", "terms": [modules], "diffs": [d^lo .. d^{hi-1}] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub lo: i32,
    pub hi: i32,
    pub terms: Vec<ModuleJson>,
    #[serde(default)]
    pub diffs: Vec<Vec<Vec<u32>>>,
}

impl ComplexJson {
    pub fn build(&self, field: Fp) -> Result<ChainComplex<Module>> {
        if self.hi < self.lo || self.terms.len() != (self.hi - self.lo + 1) as usize {
            return Err(Error::DimensionMismatch("complex needs one term per degree in [lo, hi]".into()));
        }
        let terms = self.terms.iter().map(|t| t.build(field)).collect::<Result<Vec<_>>>()?;
        // share one algebra instance when the tables agree
        let alg = terms[0].algebra().clone();
        let terms = terms.into_iter().map(|t| t.over(alg.clone())).collect::<Result<Vec<_>>>()?;
        if self.diffs.len() + 1 != terms.len() {
            return Err(Error::DimensionMismatch("complex needs hi - lo differentials".into()));
        }
        let diffs =
            self.diffs.iter().enumerate().map(|(k, rows)| matrix_from_rows(field, rows, terms[k].dim())).collect::<Result<Vec<_>>>()?;
        ChainComplex::new(self.lo, terms, diffs)
    }
}

/// Degree-0 map between complexes; `comps[k]` acts on source degree
/// source.lo + k.
#[derive(Debug, Clone)]
pub struct ChainMap<T: Term> {
    pub source: ChainComplex<T>,
    pub target: ChainComplex<T>,
    pub comps: Vec<Matrix>,
}

impl<T: Term> ChainMap<T> {
    pub fn new(source: ChainComplex<T>, target: ChainComplex<T>, comps: Vec<Matrix>) -> Result<Self> {
        let m = ChainMap { source, target, comps };
        m.validate()?;
        Ok(m)
    }

    pub fn at(&self, deg: i32) -> Matrix {
        if deg >= self.source.lo() && deg <= self.source.hi() {
            return self.comps[(deg - self.source.lo()) as usize].clone();
        }
        Matrix::zeros(self.source.field(), self.target.dim(deg), self.source.dim(deg))
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.source;
        if self.comps.len() != s.terms().len() {
            return Err(Error::DimensionMismatch("one component per source degree".into()));
        }
        for d in s.lo()..=s.hi() {
            let c = self.at(d);
            if c.rows() != self.target.dim(d) || c.cols() != s.dim(d) {
                return Err(Error::DimensionMismatch(format!("component in degree {d}")));
            }
            if let Some(tt) = self.target.term(d) {
                if !s.term(d).expect("in range").is_linear_map(tt, &c) {
                    return Err(Error::Violation(format!("component in degree {d} is not linear")));
                }
            }
        }
        let lo = s.lo().min(self.target.lo()) - 1;
        let hi = s.hi().max(self.target.hi());
        for d in lo..=hi {
            let lhs = self.target.diff(d).mul(&self.at(d))?;
            let rhs = self.at(d + 1).mul(&s.diff(d))?;
            if lhs != rhs {
                return Err(Error::Violation(format!("map does not commute with d in degree {d}")));
            }
        }
        Ok(())
    }

    pub fn identity(c: &ChainComplex<T>) -> Self {
        let comps = c.terms().iter().map(|t| Matrix::identity(c.field(), t.dim())).collect();
        ChainMap { source: c.clone(), target: c.clone(), comps }
    }

    pub fn zero(source: &ChainComplex<T>, target: &ChainComplex<T>) -> Self {
        let f = source.field();
        let comps = (source.lo()..=source.hi()).map(|d| Matrix::zeros(f, target.dim(d), source.dim(d))).collect();
        ChainMap { source: source.clone(), target: target.clone(), comps }
    }

    pub fn scaled(&self, s: u32) -> Self {
        ChainMap { comps: self.comps.iter().map(|c| c.scale(s)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect::<Result<Vec<_>>>()?;
        Ok(ChainMap { comps, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
        Ok(ChainMap { comps, ..self.clone() })
    }
}

/// Homology dimensions on a window; terms outside the complex count as zero.
pub fn homology_dims<T: Term>(c: &ChainComplex<T>, lo: i32, hi: i32) -> GradedDims {
    c.homology_dims(lo, hi)
}

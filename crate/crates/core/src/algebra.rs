//! Finite-dimensional associative unital algebras given by structure constants.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Fp, Matrix, Subspace};

/// e_i * e_j = sum_k c[i][j][k] e_k.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    field: Fp,
    dim: usize,
    c: Vec<u32>,
    unit: Vec<u32>,
    commutative: bool,
    names: Vec<String>,
    /// An algebra character (value on each basis vector), when one is known.
    augmentation: Option<Vec<u32>>,
}

pub type AlgebraRef = Arc<Algebra>;

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim {}, {}, basis {:?})", self.dim, self.field, self.names)
    }
}

/// First failing law found by [`Algebra::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    Shape(String),
    /// unit * e_i != e_i (`left == true`) or e_i * unit != e_i.
    Unit {
        basis: usize,
        left: bool,
    },
    Associativity {
        i: usize,
        j: usize,
        l: usize,
    },
    Commutativity {
        i: usize,
        j: usize,
    },
    Augmentation {
        i: usize,
        j: usize,
    },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Shape(s) => write!(f, "malformed table: {s}"),
            AlgebraViolation::Unit { basis, left: true } => write!(f, "unit * e_{basis} != e_{basis}"),
            AlgebraViolation::Unit { basis, left: false } => write!(f, "e_{basis} * unit != e_{basis}"),
            AlgebraViolation::Associativity { i, j, l } => {
                write!(f, "(e_{i} e_{j}) e_{l} != e_{i} (e_{j} e_{l})")
            }
            AlgebraViolation::Commutativity { i, j } => {
                write!(f, "flagged commutative but e_{i} e_{j} != e_{j} e_{i}")
            }
            AlgebraViolation::Augmentation { i, j } => {
                write!(f, "augmentation not multiplicative on (e_{i}, e_{j})")
            }
        }
    }
}

impl From<AlgebraViolation> for Error {
    fn from(v: AlgebraViolation) -> Error {
        Error::Violation(v.to_string())
    }
}

/// Serialized form: `{ "dim", "p", "unit", "c", "commutative", "names" }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub p: u32,
    pub unit: Vec<u32>,
    pub c: Vec<Vec<Vec<u32>>>,
    pub commutative: bool,
    #[serde(default)]
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<Vec<u32>>,
}

impl Algebra {
    /// Build from raw tables without checking the algebra laws.
    pub fn from_tables(field: Fp, dim: usize, c: Vec<u32>, unit: Vec<u32>, commutative: bool, names: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("algebra of dimension 0".into()));
        }
        if c.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::DimensionMismatch("structure constant table shape".into()));
        }
        let names = if names.len() == dim { names } else { (0..dim).map(|i| format!("e{i}")).collect() };
        let p = field.p();
        Ok(Algebra {
            field,
            dim,
            c: c.into_iter().map(|v| v % p).collect(),
            unit: unit.into_iter().map(|v| v % p).collect(),
            commutative,
            names,
            augmentation: None,
        })
    }

    pub fn with_augmentation(mut self, aug: Vec<u32>) -> Self {
        self.augmentation = Some(aug);
        self
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn is_commutative(&self) -> bool {
        self.commutative
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn augmentation(&self) -> Option<&[u32]> {
        self.augmentation.as_deref()
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> u32 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        let s = (i * self.dim + j) * self.dim;
        &self.c[s..s + self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1 % self.field.p();
        v
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.dim]
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let s = f.mul(ai, bj);
                for (k, o) in out.iter_mut().enumerate() {
                    let ck = self.c(i, j, k);
                    if ck != 0 {
                        *o = f.mul_add(*o, s, ck);
                    }
                }
            }
        }
        out
    }

    /// Matrix of x |-> a x.
    pub fn left_mult(&self, a: &[u32]) -> Matrix {
        let cols: Vec<Vec<u32>> = (0..self.dim).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Matrix of x |-> x a.
    pub fn right_mult(&self, a: &[u32]) -> Matrix {
        let cols: Vec<Vec<u32>> = (0..self.dim).map(|j| self.mul(&self.basis_vector(j), a)).collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Left multiplication matrices of all basis vectors.
    pub fn left_regular(&self) -> Vec<Matrix> {
        (0..self.dim).map(|i| self.left_mult(&self.basis_vector(i))).collect()
    }

    pub fn right_regular(&self) -> Vec<Matrix> {
        (0..self.dim).map(|i| self.right_mult(&self.basis_vector(i))).collect()
    }

    /// Whether basis vector e_i is nilpotent.
    pub fn is_nilpotent_basis(&self, i: usize) -> bool {
        let mut x = self.basis_vector(i);
        for _ in 0..self.dim {
            x = self.mul(&x, &self.basis_vector(i));
            if x.iter().all(|&v| v == 0) {
                return true;
            }
        }
        x.iter().all(|&v| v == 0)
    }

    pub fn nilpotent_basis(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.is_nilpotent_basis(i)).collect()
    }

    /// Check unit, associativity, commutativity flag and augmentation.
    pub fn validate(&self) -> std::result::Result<(), AlgebraViolation> {
        let n = self.dim;
        if self.c.len() != n * n * n || self.unit.len() != n || self.names.len() != n {
            return Err(AlgebraViolation::Shape("table sizes disagree with dim".into()));
        }
        for i in 0..n {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e {
                return Err(AlgebraViolation::Unit { basis: i, left: true });
            }
            if self.mul(&e, &self.unit) != e {
                return Err(AlgebraViolation::Unit { basis: i, left: false });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let eij = self.basis_product(i, j).to_vec();
                for l in 0..n {
                    let lhs = self.mul(&eij, &self.basis_vector(l));
                    let rhs = self.mul(&self.basis_vector(i), self.basis_product(j, l));
                    if lhs != rhs {
                        return Err(AlgebraViolation::Associativity { i, j, l });
                    }
                }
            }
        }
        if self.commutative {
            for i in 0..n {
                for j in (i + 1)..n {
                    if self.basis_product(i, j) != self.basis_product(j, i) {
                        return Err(AlgebraViolation::Commutativity { i, j });
                    }
                }
            }
        }
        if let Some(aug) = &self.augmentation {
            if aug.len() != n {
                return Err(AlgebraViolation::Shape("augmentation length".into()));
            }
            let f = self.field;
            let eval = |v: &[u32]| v.iter().zip(aug).fold(0, |s, (&a, &b)| f.mul_add(s, a, b));
            if eval(&self.unit) != 1 % f.p() {
                return Err(AlgebraViolation::Augmentation { i: n, j: n });
            }
            for i in 0..n {
                for j in 0..n {
                    if eval(self.basis_product(i, j)) != f.mul(aug[i], aug[j]) {
                        return Err(AlgebraViolation::Augmentation { i, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// First pair of basis vectors that do not commute.
    pub fn noncommuting_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Fp) -> Self {
        Algebra {
            field,
            dim: 1,
            c: vec![1 % field.p()],
            unit: vec![1 % field.p()],
            commutative: true,
            names: vec!["1".into()],
            augmentation: Some(vec![1 % field.p()]),
        }
    }

    /// k[x]/(x^n) with basis 1, x, ..., x^{n-1}.
    pub fn truncated_poly(field: Fp, n: usize) -> Result<Self> {
        Self::truncated_poly_named(field, n, "x")
    }

    pub fn truncated_poly_named(field: Fp, n: usize, var: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("truncated_poly(0)".into()));
        }
        let mut c = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    c[(i * n + j) * n + i + j] = 1;
                }
            }
        }
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        let mut unit = vec![0; n];
        unit[0] = 1;
        let mut aug = vec![0; n];
        aug[0] = 1;
        Ok(Self::from_tables(field, n, c, unit, true, names)?.with_augmentation(aug))
    }

    /// k^n with orthogonal idempotent basis e_1..e_n.
    pub fn split(field: Fp, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("split(0)".into()));
        }
        let mut c = vec![0; n * n * n];
        for i in 0..n {
            c[(i * n + i) * n + i] = 1;
        }
        let names = (1..=n).map(|i| format!("e{i}")).collect();
        let mut aug = vec![0; n];
        aug[0] = 1;
        Ok(Self::from_tables(field, n, c, vec![1; n], true, names)?.with_augmentation(aug))
    }

    /// Upper-triangular 2x2 matrices, basis e11, e12, e22.
    pub fn triangular2(field: Fp) -> Self {
        let n = 3;
        let mut c = vec![0; 27];
        let mut set = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k] = 1;
        set(0, 0, 0); // e11 e11 = e11
        set(0, 1, 1); // e11 e12 = e12
        set(1, 2, 1); // e12 e22 = e12
        set(2, 2, 2); // e22 e22 = e22
        let names = vec!["e11".into(), "e12".into(), "e22".into()];
        Self::from_tables(field, 3, c, vec![1, 0, 1], false, names).expect("static table").with_augmentation(vec![1, 0, 0])
    }

    /// A ⊗ B with basis (i, j) -> i * dim B + j.
    pub fn tensor(&self, other: &Algebra) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::InvalidInput("tensor of algebras over different fields".into()));
        }
        let f = self.field;
        let (n, m) = (self.dim, other.dim);
        let d = n * m;
        let mut c = vec![0; d * d * d];
        for i in 0..n {
            for k in 0..n {
                for a in 0..n {
                    let x = self.c(i, k, a);
                    if x == 0 {
                        continue;
                    }
                    for j in 0..m {
                        for l in 0..m {
                            for b in 0..m {
                                let y = other.c(j, l, b);
                                if y != 0 {
                                    let (r, s, t) = (i * m + j, k * m + l, a * m + b);
                                    c[(r * d + s) * d + t] = f.mul(x, y);
                                }
                            }
                        }
                    }
                }
            }
        }
        let unit = kron_vec(f, &self.unit, &other.unit);
        let names = self.names.iter().flat_map(|a| other.names.iter().map(move |b| format!("{a}⊗{b}"))).collect();
        let mut out = Self::from_tables(f, d, c, unit, self.commutative && other.commutative, names)?;
        if let (Some(a), Some(b)) = (&self.augmentation, &other.augmentation) {
            out.augmentation = Some(kron_vec(f, a, b));
        }
        Ok(out)
    }

    /// c_op[i][j][k] = c[j][i][k].
    pub fn opposite(&self) -> Self {
        let n = self.dim;
        let mut c = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = self.c(j, i, k);
                }
            }
        }
        Algebra { c, ..self.clone() }
    }

    /// Same structure constants (names and augmentation ignored).
    pub fn same_tables(&self, other: &Algebra) -> bool {
        self.field == other.field && self.dim == other.dim && self.c == other.c && self.unit == other.unit
    }

    /// Whether the tables of `other` equal those of the opposite of `self`.
    pub fn is_opposite_of(&self, other: &Algebra) -> bool {
        if self.field != other.field || self.dim != other.dim || self.unit != other.unit {
            return false;
        }
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == other.basis_product(j, i)))
    }

    /// Quotient by a two-sided ideal, using the images of `reps` as basis.
    /// Returns the quotient algebra and the projection matrix.
    pub fn quotient(&self, ideal: &Subspace, reps: &[Vec<u32>], names: Vec<String>) -> Result<(Algebra, Matrix)> {
        let f = self.field;
        let n = self.dim;
        let q = reps.len();
        if ideal.dim() + q != n {
            return Err(Error::InvalidInput(format!("{} representatives for a quotient of dimension {}", q, n - ideal.dim())));
        }
        // [reps | ideal basis] must be invertible
        let mut cols: Vec<Vec<u32>> = reps.to_vec();
        cols.extend(ideal.basis().iter().cloned());
        let m = Matrix::from_columns(f, n, &cols);
        let inv = m.inverse().ok_or_else(|| Error::InvalidInput("representatives do not span a complement of the ideal".into()))?;
        let proj = inv.block(0, 0, q, n);
        let mut c = vec![0; q * q * q];
        for a in 0..q {
            for b in 0..q {
                let prod = self.mul(&reps[a], &reps[b]);
                let coords = proj.mul_vec(&prod)?;
                for (k, &x) in coords.iter().enumerate() {
                    c[(a * q + b) * q + k] = x;
                }
            }
        }
        let unit = proj.mul_vec(&self.unit)?;
        let alg = Algebra::from_tables(f, q, c, unit, self.commutative, names)?;
        Ok((alg, proj))
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim;
        AlgebraJson {
            dim: n,
            p: self.field.p(),
            unit: self.unit.clone(),
            c: (0..n).map(|i| (0..n).map(|j| self.basis_product(i, j).to_vec()).collect()).collect(),
            commutative: self.commutative,
            names: self.names.clone(),
            augmentation: self.augmentation.clone(),
        }
    }

    /// Parse the JSON form and validate the algebra laws.
    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let field = Fp::new(j.p)?;
        let n = j.dim;
        if j.c.len() != n || j.c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch("structure constants must be dim x dim x dim".into()));
        }
        let c = j.c.iter().flatten().flatten().copied().collect();
        let mut a = Algebra::from_tables(field, n, c, j.unit.clone(), j.commutative, j.names.clone())?;
        a.augmentation = j.augmentation.clone();
        a.validate()?;
        Ok(a)
    }
}

impl Serialize for Algebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Algebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AlgebraJson::deserialize(d)?;
        Algebra::from_json(&j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn kron_vec(f: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| f.mul(x, y))).collect()
}

/// Named algebra presets addressable from manifests and the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    Ground,
    TruncatedPoly(usize),
    Split(usize),
    Triangular2,
    Tensor(Vec<Preset>),
}

impl Preset {
    /// Parse `k`, `truncated_poly:N`, `split:N`, `triangular2`, or a `*`-separated
    /// tensor product of these.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('*') {
            let parts = s.split('*').map(Preset::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Preset::Tensor(parts));
        }
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::InvalidInput(format!("preset {name} needs a size")))?
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad preset size in {s}")))
        };
        match name {
            "k" | "ground" => Ok(Preset::Ground),
            "truncated_poly" => Ok(Preset::TruncatedPoly(num(arg)?)),
            "split" => Ok(Preset::Split(num(arg)?)),
            "triangular2" => Ok(Preset::Triangular2),
            _ => Err(Error::InvalidInput(format!("unknown algebra preset {s}"))),
        }
    }

    pub fn build(&self, field: Fp) -> Result<Algebra> {
        match self {
            Preset::Ground => Ok(Algebra::ground(field)),
            Preset::TruncatedPoly(n) => Algebra::truncated_poly(field, *n),
            Preset::Split(n) => Algebra::split(field, *n),
            Preset::Triangular2 => Ok(Algebra::triangular2(field)),
            Preset::Tensor(parts) => {
                let mut it = parts.iter();
                let mut acc = it.next().ok_or_else(|| Error::InvalidInput("empty tensor preset".into()))?.build(field)?;
                for p in it {
                    acc = acc.tensor(&p.build(field)?)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["k", "truncated_poly:N", "split:N", "triangular2", "A*B (tensor product)"]
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Ground => write!(f, "k"),
            Preset::TruncatedPoly(n) => write!(f, "truncated_poly:{n}"),
            Preset::Split(n) => write!(f, "split:{n}"),
            Preset::Triangular2 => write!(f, "triangular2"),
            Preset::Tensor(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join("*"))
            }
        }
    }
}

/// Build a preset algebra by name.
pub fn build_algebra(field: Fp, preset: &str) -> Result<Algebra> {
    Preset::parse(preset)?.build(field)
}

pub fn tensor_algebras(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    a.tensor(b)
}

pub fn opposite_algebra(a: &Algebra) -> Algebra {
    a.opposite()
}

pub fn validate_algebra(a: &Algebra) -> std::result::Result<(), AlgebraViolation> {
    a.validate()
}

/// A k-linear map between algebras, `matrix` is target.dim x source.dim.
#[derive(Debug, Clone)]
pub struct AlgebraMap {
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    pub matrix: Matrix,
}

impl AlgebraMap {
    pub fn new(source: AlgebraRef, target: AlgebraRef, matrix: Matrix) -> Result<Self> {
        let m = AlgebraMap { source, target, matrix };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(a: AlgebraRef) -> Self {
        let matrix = Matrix::identity(a.field(), a.dim());
        AlgebraMap { source: a.clone(), target: a, matrix }
    }

    /// Map determined by images of the basis vectors.
    pub fn from_images(source: AlgebraRef, target: AlgebraRef, images: &[Vec<u32>]) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::DimensionMismatch("one image per source basis vector".into()));
        }
        let matrix = Matrix::from_columns(source.field(), target.dim(), images);
        Self::new(source, target, matrix)
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.matrix.mul_vec(v).expect("algebra map shape")
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.matrix.rows() != t.dim() || self.matrix.cols() != s.dim() {
            return Err(Error::DimensionMismatch("algebra map matrix shape".into()));
        }
        if self.apply(s.unit()) != t.unit() {
            return Err(Error::Violation("algebra map does not preserve the unit".into()));
        }
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = self.apply(s.basis_product(i, j));
                let rhs = t.mul(&self.apply(&s.basis_vector(i)), &self.apply(&s.basis_vector(j)));
                if lhs != rhs {
                    return Err(Error::Violation(format!("algebra map not multiplicative on (e_{i}, e_{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &AlgebraMap) -> Result<AlgebraMap> {
        Ok(AlgebraMap { source: first.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&first.matrix)? })
    }
}

/// Witness that S is a free R-module (via sigma) on an explicit basis.
#[derive(Debug, Clone)]
pub struct FreeBasisCert {
    pub map: AlgebraMap,
    pub basis: Vec<Vec<u32>>,
}

impl FreeBasisCert {
    pub fn new(map: AlgebraMap, basis: Vec<Vec<u32>>) -> Result<Self> {
        let cert = FreeBasisCert { map, basis };
        cert.verify()?;
        Ok(cert)
    }

    /// sigma = id_k -> S, basis = the k-basis of S.
    pub fn over_ground(s: AlgebraRef) -> Result<Self> {
        let f = s.field();
        let k = Arc::new(Algebra::ground(f));
        let map = AlgebraMap::from_images(k, s.clone(), &[s.unit().to_vec()])?;
        let basis = (0..s.dim()).map(|i| s.basis_vector(i)).collect();
        Self::new(map, basis)
    }

    /// sigma = id_S, basis {1}.
    pub fn identity(s: AlgebraRef) -> Result<Self> {
        let basis = vec![s.unit().to_vec()];
        Self::new(AlgebraMap::identity(s), basis)
    }

    pub fn base(&self) -> &AlgebraRef {
        &self.map.source
    }
    pub fn algebra(&self) -> &AlgebraRef {
        &self.map.target
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn base_is_ground(&self) -> bool {
        self.base().dim() == 1
    }

    /// The R-linear evaluation map R^n -> S, (r_i) |-> sum sigma(r_i) b_i, as
    /// a k-matrix with column index i * dim R + a.
    pub fn evaluation_matrix(&self) -> Matrix {
        let r = self.base();
        let s = self.algebra();
        let mut cols = Vec::new();
        for b in &self.basis {
            for a in 0..r.dim() {
                let sr = self.map.apply(&r.basis_vector(a));
                cols.push(s.mul(&sr, b));
            }
        }
        Matrix::from_columns(s.field(), s.dim(), &cols)
    }

    pub fn verify(&self) -> Result<()> {
        self.map.validate()?;
        let s = self.algebra();
        if self.basis.iter().any(|b| b.len() != s.dim()) {
            return Err(Error::DimensionMismatch("basis element length".into()));
        }
        let ev = self.evaluation_matrix();
        if !ev.is_square() || ev.rank() != ev.rows() {
            return Err(Error::Violation(format!(
                "S is not free over R on the given basis ({} x {} evaluation matrix of rank {})",
                ev.rows(),
                ev.cols(),
                ev.rank()
            )));
        }
        Ok(())
    }
}

/// S^e = S ⊗_R S for a certified free, commutative sigma: R -> S.
#[derive(Debug, Clone)]
pub struct Enveloping {
    pub cert: FreeBasisCert,
    pub env: AlgebraRef,
    /// S ⊗_k S, the algebra S^e is a quotient of
    pub big: AlgebraRef,
    /// projection S ⊗_k S -> S^e
    pub proj: Matrix,
    /// representatives in S ⊗_k S of the basis of S^e (columns)
    pub reps: Matrix,
    pub incl_left: AlgebraMap,
    pub incl_right: AlgebraMap,
    pub mult: AlgebraMap,
}

impl Enveloping {
    pub fn new(cert: FreeBasisCert) -> Result<Self> {
        cert.verify()?;
        let s = cert.algebra().clone();
        let r = cert.base().clone();
        if !s.is_commutative() || !r.is_commutative() {
            return Err(Error::InvalidInput("enveloping algebra requires commutative R and S".into()));
        }
        let f = s.field();
        let n = s.dim();
        let big = Arc::new(s.tensor(&s)?);
        // generators sigma(r) ⊗ 1 - 1 ⊗ sigma(r) of the balancing ideal
        let mut ideal = Subspace::zero(f, n * n);
        let gens: Vec<Vec<u32>> = (0..r.dim())
            .map(|a| {
                let sr = cert.map.apply(&r.basis_vector(a));
                let left = kron_vec(f, &sr, s.unit());
                let right = kron_vec(f, s.unit(), &sr);
                left.iter().zip(&right).map(|(&x, &y)| f.sub(x, y)).collect()
            })
            .collect();
        for g in &gens {
            for b in 0..big.dim() {
                ideal.insert(&big.mul(&big.basis_vector(b), g));
            }
        }
        // basis of S^e: b_i ⊗ sigma(r_a) b_j for the R-basis b of S and a k-basis of R
        let mut reps = Vec::new();
        let mut names = Vec::new();
        for (i, bi) in cert.basis.iter().enumerate() {
            for (j, bj) in cert.basis.iter().enumerate() {
                for a in 0..r.dim() {
                    let right = s.mul(&cert.map.apply(&r.basis_vector(a)), bj);
                    reps.push(kron_vec(f, bi, &right));
                    names.push(format!("b{i}⊗{}·b{j}", r.names()[a]));
                }
            }
        }
        let (env, proj) = big.quotient(&ideal, &reps, names)?;
        let env = Arc::new(env);
        let reps_m = Matrix::from_columns(f, n * n, &reps);
        let incl = |left: bool| -> Result<AlgebraMap> {
            let images: Vec<Vec<u32>> = (0..n)
                .map(|i| {
                    let e = s.basis_vector(i);
                    let v = if left { kron_vec(f, &e, s.unit()) } else { kron_vec(f, s.unit(), &e) };
                    proj.mul_vec(&v).expect("shape")
                })
                .collect();
            AlgebraMap::from_images(s.clone(), env.clone(), &images)
        };
        let incl_left = incl(true)?;
        let incl_right = incl(false)?;
        let mult_images: Vec<Vec<u32>> = reps
            .iter()
            .map(|rep| {
                let mut out = vec![0; n];
                for i in 0..n {
                    for j in 0..n {
                        let c = rep[i * n + j];
                        if c != 0 {
                            for (o, &x) in out.iter_mut().zip(s.basis_product(i, j)) {
                                *o = f.mul_add(*o, c, x);
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let mult = AlgebraMap::from_images(env.clone(), s.clone(), &mult_images)?;
        Ok(Enveloping { cert, env, big, proj, reps: reps_m, incl_left, incl_right, mult })
    }

    pub fn algebra(&self) -> &AlgebraRef {
        self.cert.algebra()
    }
    pub fn base(&self) -> &AlgebraRef {
        self.cert.base()
    }
}

/// S^e together with its inclusions and multiplication map.
pub fn enveloping_algebra(cert: FreeBasisCert) -> Result<Enveloping> {
    Enveloping::new(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn presets_validate() {
        let f = f5();
        for s in ["k", "truncated_poly:1", "truncated_poly:3", "split:3", "triangular2", "truncated_poly:2*split:2"] {
            let a = build_algebra(f, s).unwrap();
            assert_eq!(a.validate(), Ok(()), "{s}");
        }
        assert!(build_algebra(f, "truncated_poly:0").is_err());
        assert!(build_algebra(f, "split:0").is_err());
        assert!(build_algebra(f, "bogus").is_err());
    }

    #[test]
    fn truncated_poly_products() {
        let a = Algebra::truncated_poly(f5(), 3).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.basis_product(1, 1), &[0, 0, 1]);
        assert_eq!(a.basis_product(2, 1), &[0, 0, 0]);
    }

    #[test]
    fn split_products() {
        let a = Algebra::split(f5(), 2).unwrap();
        assert_eq!(a.basis_product(0, 0), &[1, 0]);
        assert_eq!(a.basis_product(0, 1), &[0, 0]);
        assert_eq!(a.unit(), &[1, 1]);
    }

    #[test]
    fn triangular_is_noncommutative() {
        let t = Algebra::triangular2(f5());
        assert_eq!(t.dim(), 3);
        // exhaustive scan of basis pairs
        let mut witnesses = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if t.basis_product(i, j) != t.basis_product(j, i) {
                    witnesses.push((i, j));
                }
            }
        }
        assert!(witnesses.contains(&(0, 1)));
        assert_eq!(t.noncommuting_pair(), Some((0, 1)));
    }

    #[test]
    fn broken_unit_is_reported() {
        let a = Algebra::truncated_poly(f5(), 2).unwrap();
        let mut c: Vec<u32> = a.to_json().c.into_iter().flatten().flatten().collect();
        c[0] = 2; // c[0][0][0]
        let bad = Algebra::from_tables(f5(), 2, c, vec![1, 0], true, vec![]).unwrap();
        assert_eq!(bad.validate(), Err(AlgebraViolation::Unit { basis: 0, left: true }));
    }

    #[test]
    fn tensor_dims_and_unit_law() {
        let f = f5();
        let a = Algebra::truncated_poly(f, 2).unwrap();
        assert_eq!(a.tensor(&a).unwrap().dim(), 4);
        let k = Algebra::ground(f);
        assert!(a.tensor(&k).unwrap().same_tables(&a));
        assert!(k.tensor(&a).unwrap().same_tables(&a));
    }

    #[test]
    fn split_tensor_split_is_split4() {
        let f = f5();
        let s2 = Algebra::split(f, 2).unwrap();
        let t = s2.tensor(&s2).unwrap();
        // e_i ⊗ e_j are orthogonal idempotents summing to the unit
        for a in 0..4 {
            for b in 0..4 {
                let expect: Vec<u32> = (0..4).map(|c| u32::from(a == b && b == c)).collect();
                assert_eq!(t.basis_product(a, b), &expect[..]);
            }
        }
        assert!(t.same_tables(&Algebra::split(f, 4).unwrap()));
    }

    #[test]
    fn opposite_involution() {
        let t = Algebra::triangular2(f5());
        let op = t.opposite();
        assert!(!op.same_tables(&t));
        assert!(t.is_opposite_of(&op));
        assert!(op.opposite().same_tables(&t));
        let a = Algebra::truncated_poly(f5(), 3).unwrap();
        assert!(a.opposite().same_tables(&a));
        assert_eq!(op.validate(), Ok(()));
    }

    #[test]
    fn enveloping_over_ground() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
        let e = Enveloping::new(FreeBasisCert::over_ground(s).unwrap()).unwrap();
        assert_eq!(e.env.dim(), 4);
        assert_eq!(e.env.validate(), Ok(()));
    }

    #[test]
    fn enveloping_identity_sigma() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 3).unwrap());
        let e = Enveloping::new(FreeBasisCert::identity(s.clone()).unwrap()).unwrap();
        assert_eq!(e.env.dim(), 3);
        let comp = e.mult.compose(&e.incl_left).unwrap();
        assert_eq!(comp.matrix, Matrix::identity(s.field(), 3));
    }

    #[test]
    fn enveloping_non_field_base() {
        let f = f5();
        let r = Arc::new(Algebra::truncated_poly_named(f, 2, "y").unwrap());
        let s = Arc::new(Algebra::truncated_poly(f, 4).unwrap());
        let sigma = AlgebraMap::from_images(r, s.clone(), &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let cert = FreeBasisCert::new(sigma, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let e = Enveloping::new(cert).unwrap();
        // x^i ⊗ x^j with i < 2, over R of dimension 2
        assert_eq!(e.env.dim(), 8);
        assert_eq!(e.env.validate(), Ok(()));
        for incl in [&e.incl_left, &e.incl_right] {
            let comp = e.mult.compose(incl).unwrap();
            assert_eq!(comp.matrix, Matrix::identity(f, 4));
        }
    }

    #[test]
    fn bad_basis_rejected() {
        let f = f5();
        let r = Arc::new(Algebra::truncated_poly_named(f, 2, "y").unwrap());
        let s = Arc::new(Algebra::truncated_poly(f, 4).unwrap());
        let sigma = AlgebraMap::from_images(r, s, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert!(FreeBasisCert::new(sigma, vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let t = Algebra::triangular2(f5());
        let s = serde_json::to_string(&t).unwrap();
        let back: Algebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraJson, AlgebraRef, Preset};
use crate::error::{Error, Result};
use crate::exactla::{restrict_operator, Fp, Matrix, Quotient, Subspace};

/// Anything that can sit in a chain complex: a vector space with a list of
/// structure operators that differentials must commute with.
pub trait Term: Clone + Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn field(&self) -> Fp;
    fn operators(&self) -> Vec<&Matrix>;
    /// Same acting algebras, new dimension and operators (same order as
    /// [`Term::operators`]).
    fn rebuild(&self, dim: usize, ops: Vec<Matrix>) -> Self;
    /// Whether two terms are structured over the same algebras.
    fn compatible(&self, other: &Self) -> bool;

    fn zero_like(&self) -> Self {
        let f = self.field();
        let n = self.operators().len();
        self.rebuild(0, vec![Matrix::zeros(f, 0, 0); n])
    }

    /// Sub-object on an invariant subspace (echelon basis).
    fn restrict_to(&self, sub: &Subspace) -> Option<Self> {
        let ops = self.operators().into_iter().map(|op| restrict_operator(sub, op)).collect::<Option<Vec<_>>>()?;
        Some(self.rebuild(sub.dim(), ops))
    }

    /// Quotient by an invariant subspace.
    fn quotient_by(&self, q: &Quotient) -> Self {
        let ops = self.operators().into_iter().map(|op| q.induced(op)).collect();
        self.rebuild(q.dim(), ops)
    }

    fn direct_sum(parts: &[Self]) -> Self {
        let first = &parts[0];
        let f = first.field();
        let n = first.operators().len();
        let dim = parts.iter().map(|p| p.dim()).sum();
        let ops = (0..n)
            .map(|k| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.operators()[k].clone()).collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        first.rebuild(dim, ops)
    }

    /// Whether `m` (from self to other) intertwines all structure operators.
    fn is_linear_map(&self, other: &Self, m: &Matrix) -> bool {
        self.operators().iter().zip(other.operators()).all(|(a, b)| b.mul(m).ok() == m.mul(a).ok())
    }
}

/// Failed module law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleViolation {
    Shape(String),
    UnitNotIdentity,
    /// rho(e_i) rho(e_j) != rho(e_i e_j)
    Product {
        i: usize,
        j: usize,
    },
    /// left action of a_i does not commute with right action of b_j
    NotCommuting {
        left: usize,
        right: usize,
    },
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::Shape(s) => write!(f, "malformed action: {s}"),
            ModuleViolation::UnitNotIdentity => write!(f, "unit does not act as the identity"),
            ModuleViolation::Product { i, j } => write!(f, "action not multiplicative on (e_{i}, e_{j})"),
            ModuleViolation::NotCommuting { left, right } => {
                write!(f, "left action of a_{left} does not commute with right action of b_{right}")
            }
        }
    }
}

impl From<ModuleViolation> for Error {
    fn from(v: ModuleViolation) -> Error {
        Error::Violation(v.to_string())
    }
}

/// Left module over a finite-dimensional algebra: one action matrix per
/// basis vector of the algebra.
#[derive(Clone)]
pub struct Module {
    alg: AlgebraRef,
    dim: usize,
    act: Vec<Matrix>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dim {} over {:?})", self.dim, self.alg.names())
    }
}

pub fn element_action(alg: &Algebra, act: &[Matrix], dim: usize, coords: &[u32]) -> Matrix {
    let mut m = Matrix::zeros(alg.field(), dim, dim);
    for (a, &c) in act.iter().zip(coords) {
        m.add_scaled(a, c);
    }
    m
}

fn check_action(alg: &Algebra, dim: usize, act: &[Matrix]) -> std::result::Result<(), ModuleViolation> {
    if act.len() != alg.dim() {
        return Err(ModuleViolation::Shape(format!("{} action matrices for an algebra of dimension {}", act.len(), alg.dim())));
    }
    if act.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        return Err(ModuleViolation::Shape("action matrices must be dim x dim".into()));
    }
    let f = alg.field();
    if element_action(alg, act, dim, alg.unit()) != Matrix::identity(f, dim) {
        return Err(ModuleViolation::UnitNotIdentity);
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = act[i].mul(&act[j]).expect("square");
            let rhs = element_action(alg, act, dim, alg.basis_product(i, j));
            if lhs != rhs {
                return Err(ModuleViolation::Product { i, j });
            }
        }
    }
    Ok(())
}

impl Module {
    pub fn new(alg: AlgebraRef, dim: usize, act: Vec<Matrix>) -> std::result::Result<Self, ModuleViolation> {
        check_action(&alg, dim, &act)?;
        Ok(Module { alg, dim, act })
    }

    pub fn new_unchecked(alg: AlgebraRef, dim: usize, act: Vec<Matrix>) -> Self {
        Module { alg, dim, act }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.alg
    }
    pub fn action(&self) -> &[Matrix] {
        &self.act
    }

    pub fn validate(&self) -> std::result::Result<(), ModuleViolation> {
        check_action(&self.alg, self.dim, &self.act)
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(alg: AlgebraRef) -> Self {
        let act = alg.left_regular();
        Module { dim: alg.dim(), alg, act }
    }

    pub fn free(alg: AlgebraRef, rank: usize) -> Self {
        let f = alg.field();
        let act = alg.left_regular().into_iter().map(|m| Matrix::block_diag(f, &vec![m; rank])).collect();
        Module { dim: alg.dim() * rank, alg, act }
    }

    /// One-dimensional module through the algebra's augmentation character.
    pub fn residue(alg: AlgebraRef) -> Result<Self> {
        let aug = alg.augmentation().ok_or_else(|| Error::InvalidInput("algebra has no augmentation".into()))?.to_vec();
        let f = alg.field();
        let act = aug.iter().map(|&v| Matrix::from_data(f, 1, 1, vec![v]).expect("1x1")).collect();
        Ok(Module::new(alg, 1, act)?)
    }

    pub fn zero(alg: AlgebraRef) -> Self {
        let f = alg.field();
        let act = vec![Matrix::zeros(f, 0, 0); alg.dim()];
        Module { alg, dim: 0, act }
    }

    pub fn act_elem(&self, coords: &[u32]) -> Matrix {
        element_action(&self.alg, &self.act, self.dim, coords)
    }

    /// Restriction of scalars along an algebra map into this module's algebra.
    pub fn restrict_along(&self, map: &crate::algebra::AlgebraMap) -> Result<Module> {
        if !map.target.same_tables(&self.alg) {
            return Err(Error::InvalidInput("restriction along a map with the wrong target".into()));
        }
        let act = (0..map.source.dim()).map(|i| self.act_elem(&map.apply(&map.source.basis_vector(i)))).collect();
        Ok(Module { alg: map.source.clone(), dim: self.dim, act })
    }

    /// Same action matrices, now over an algebra with identical tables.
    pub fn over(&self, alg: AlgebraRef) -> Result<Module> {
        if !alg.same_tables(&self.alg) {
            return Err(Error::InvalidInput("re-basing a module onto a different algebra".into()));
        }
        Ok(Module { alg, dim: self.dim, act: self.act.clone() })
    }

    /// View a module over A^op (a right A-module) as a module over the
    /// opposite of its algebra, keeping matrices.
    pub fn over_opposite(&self) -> Module {
        Module { alg: Arc::new(self.alg.opposite()), dim: self.dim, act: self.act.clone() }
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson { algebra: AlgebraSpec::Inline(self.alg.to_json()), dim: self.dim, action: self.act.iter().map(matrix_rows).collect() }
    }
}

impl Term for Module {
    fn dim(&self) -> usize {
        self.dim
    }
    fn field(&self) -> Fp {
        self.alg.field()
    }
    fn operators(&self) -> Vec<&Matrix> {
        self.act.iter().collect()
    }
    fn rebuild(&self, dim: usize, ops: Vec<Matrix>) -> Self {
        Module { alg: self.alg.clone(), dim, act: ops }
    }
    fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) || self.alg.same_tables(&other.alg)
    }
}

/// A-B bimodule: commuting left A- and right B-actions.
///
/// `ract[j]` is the operator x |-> x b_j, so `ract[j] * ract[i]` is the
/// action of b_i b_j.
#[derive(Clone)]
pub struct Bimodule {
    left: AlgebraRef,
    right: AlgebraRef,
    dim: usize,
    lact: Vec<Matrix>,
    ract: Vec<Matrix>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bimodule(dim {}, {} - {})", self.dim, self.left.dim(), self.right.dim())
    }
}

impl Bimodule {
    /// Checked constructor; reports the first failing law.
    pub fn new(
        left: AlgebraRef,
        right: AlgebraRef,
        dim: usize,
        lact: Vec<Matrix>,
        ract: Vec<Matrix>,
    ) -> std::result::Result<Self, ModuleViolation> {
        let b = Bimodule { left, right, dim, lact, ract };
        b.validate()?;
        Ok(b)
    }

    pub fn new_unchecked(left: AlgebraRef, right: AlgebraRef, dim: usize, lact: Vec<Matrix>, ract: Vec<Matrix>) -> Self {
        Bimodule { left, right, dim, lact, ract }
    }

    pub fn validate(&self) -> std::result::Result<(), ModuleViolation> {
        check_action(&self.left, self.dim, &self.lact)?;
        // right action: a module over the opposite algebra
        let op = self.right.opposite();
        check_action(&op, self.dim, &self.ract)?;
        for (i, l) in self.lact.iter().enumerate() {
            for (j, r) in self.ract.iter().enumerate() {
                if l.mul(r).expect("square") != r.mul(l).expect("square") {
                    return Err(ModuleViolation::NotCommuting { left: i, right: j });
                }
            }
        }
        Ok(())
    }

    pub fn left(&self) -> &AlgebraRef {
        &self.left
    }
    pub fn right(&self) -> &AlgebraRef {
        &self.right
    }
    pub fn lact(&self) -> &[Matrix] {
        &self.lact
    }
    pub fn ract(&self) -> &[Matrix] {
        &self.ract
    }

    pub fn left_elem(&self, coords: &[u32]) -> Matrix {
        element_action(&self.left, &self.lact, self.dim, coords)
    }

    pub fn right_elem(&self, coords: &[u32]) -> Matrix {
        // the right action is multiplicative for the opposite algebra, and
        // element_action only uses linearity
        element_action(&self.right, &self.ract, self.dim, coords)
    }

    /// A as an A-A bimodule.
    pub fn regular(alg: AlgebraRef) -> Self {
        let lact = alg.left_regular();
        let ract = alg.right_regular();
        Bimodule { left: alg.clone(), right: alg.clone(), dim: alg.dim(), lact, ract }
    }

    /// (A ⊗ B)^rank, free over A ⊗ B^op; copy g, basis (i, j) at
    /// g * dim A * dim B + i * dim B + j.
    pub fn free(left: AlgebraRef, right: AlgebraRef, rank: usize) -> Self {
        let f = left.field();
        let (na, nb) = (left.dim(), right.dim());
        let ia = Matrix::identity(f, na);
        let ib = Matrix::identity(f, nb);
        let lact = left.left_regular().iter().map(|m| Matrix::block_diag(f, &vec![m.kron(&ib); rank])).collect();
        let ract = right.right_regular().iter().map(|m| Matrix::block_diag(f, &vec![ia.kron(m); rank])).collect();
        Bimodule { left, right, dim: na * nb * rank, lact, ract }
    }

    /// Left A-module as an A-k bimodule.
    pub fn from_left(m: &Module) -> Self {
        let f = m.field();
        let k = Arc::new(Algebra::ground(f));
        Bimodule { left: m.algebra().clone(), right: k, dim: m.dim(), lact: m.action().to_vec(), ract: vec![Matrix::identity(f, m.dim())] }
    }

    /// Right B-module, given as a left module over B^op, as a k-B bimodule.
    pub fn from_right(m_op: &Module, right: AlgebraRef) -> Result<Self> {
        if !m_op.algebra().is_opposite_of(&right) {
            return Err(Error::InvalidInput("right module must be given over the opposite algebra".into()));
        }
        let f = m_op.field();
        let k = Arc::new(Algebra::ground(f));
        Ok(Bimodule { left: k, right, dim: m_op.dim(), lact: vec![Matrix::identity(f, m_op.dim())], ract: m_op.action().to_vec() })
    }

    /// A module over a commutative algebra as a symmetric bimodule.
    pub fn symmetric(m: &Module) -> Result<Self> {
        if !m.algebra().is_commutative() {
            return Err(Error::InvalidInput("symmetric bimodule needs a commutative algebra".into()));
        }
        Ok(Bimodule {
            left: m.algebra().clone(),
            right: m.algebra().clone(),
            dim: m.dim(),
            lact: m.action().to_vec(),
            ract: m.action().to_vec(),
        })
    }

    /// Forget the right action.
    pub fn left_module(&self) -> Module {
        Module { alg: self.left.clone(), dim: self.dim, act: self.lact.clone() }
    }

    /// The right action as a module over B^op.
    pub fn right_module_op(&self) -> Module {
        Module { alg: Arc::new(self.right.opposite()), dim: self.dim, act: self.ract.clone() }
    }

    /// For commutative B, the right action read as a left B-module.
    pub fn right_as_left(&self) -> Result<Module> {
        if !self.right.is_commutative() {
            return Err(Error::InvalidInput("right action is not a left action over a noncommutative algebra".into()));
        }
        Ok(Module { alg: self.right.clone(), dim: self.dim, act: self.ract.clone() })
    }

    /// The algebra A ⊗ B^op this bimodule is a left module over.
    pub fn enveloping(&self) -> Result<Algebra> {
        self.left.tensor(&self.right.opposite())
    }

    /// Underlying left module over A ⊗ B^op: e_i ⊗ e_j acts by L_i R_j.
    pub fn to_module(&self, env: AlgebraRef) -> Result<Module> {
        let expect = self.enveloping()?;
        if !env.same_tables(&expect) {
            return Err(Error::InvalidInput("algebra is not A ⊗ B^op".into()));
        }
        let mut act = Vec::with_capacity(env.dim());
        for l in &self.lact {
            for r in &self.ract {
                act.push(l.mul(r)?);
            }
        }
        Ok(Module { alg: env, dim: self.dim, act })
    }

    /// Inverse of [`Bimodule::to_module`].
    pub fn from_module(left: AlgebraRef, right: AlgebraRef, m: &Module) -> Result<Self> {
        let expect = left.tensor(&right.opposite())?;
        if !m.algebra().same_tables(&expect) {
            return Err(Error::InvalidInput("module is not over A ⊗ B^op".into()));
        }
        let f = left.field();
        let lact = (0..left.dim()).map(|i| m.act_elem(&crate::algebra::kron_vec(f, &left.basis_vector(i), right.unit()))).collect();
        let ract = (0..right.dim()).map(|j| m.act_elem(&crate::algebra::kron_vec(f, left.unit(), &right.basis_vector(j)))).collect();
        Ok(Bimodule { left, right, dim: m.dim(), lact, ract })
    }

    /// Swap sides: an A-B bimodule is a B^op-A^op bimodule.
    pub fn swap_sides(&self) -> Bimodule {
        Bimodule {
            left: Arc::new(self.right.opposite()),
            right: Arc::new(self.left.opposite()),
            dim: self.dim,
            lact: self.ract.clone(),
            ract: self.lact.clone(),
        }
    }
}

impl Term for Bimodule {
    fn dim(&self) -> usize {
        self.dim
    }
    fn field(&self) -> Fp {
        self.left.field()
    }
    fn operators(&self) -> Vec<&Matrix> {
        self.lact.iter().chain(self.ract.iter()).collect()
    }
    fn rebuild(&self, dim: usize, mut ops: Vec<Matrix>) -> Self {
        let ract = ops.split_off(self.lact.len());
        Bimodule { left: self.left.clone(), right: self.right.clone(), dim, lact: ops, ract }
    }
    fn compatible(&self, other: &Self) -> bool {
        self.left.same_tables(&other.left) && self.right.same_tables(&other.right)
    }
}

/// Assemble an A-B bimodule from commuting actions and return it with its
/// underlying module over A ⊗ B^op.
pub fn as_bimodule_module(
    left: AlgebraRef,
    right: AlgebraRef,
    dim: usize,
    lact: Vec<Matrix>,
    ract: Vec<Matrix>,
) -> Result<(Bimodule, Module)> {
    let b = Bimodule::new(left, right, dim, lact, ract)?;
    let env = Arc::new(b.enveloping()?);
    let m = b.to_module(env)?;
    Ok((b, m))
}

pub fn validate_module(m: &Module) -> std::result::Result<(), ModuleViolation> {
    m.validate()
}

pub(crate) fn matrix_rows(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

pub(crate) fn matrix_from_rows(f: Fp, rows: &[Vec<u32>], expect_cols: usize) -> Result<Matrix> {
    if rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::DimensionMismatch("matrix row length".into()));
    }
    Matrix::from_data(f, rows.len(), expect_cols, rows.iter().flatten().copied().collect())
}

/// An algebra given either by preset name or inline tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Preset(String),
    Inline(AlgebraJson),
}

impl AlgebraSpec {
    pub fn resolve(&self, field: Fp) -> Result<Algebra> {
        match self {
            AlgebraSpec::Preset(s) => Preset::parse(s)?.build(field),
            AlgebraSpec::Inline(j) => {
                if j.p != field.p() {
                    return Err(Error::InvalidInput(format!("algebra over p = {} in a session with p = {}", j.p, field.p())));
                }
                Algebra::from_json(j)
            }
        }
    }
}

/// `{ "algebra": ref, "dim": m, "action": [m x m matrices per basis vector] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra: AlgebraSpec,
    pub dim: usize,
    pub action: Vec<Vec<Vec<u32>>>,
}

impl ModuleJson {
    pub fn build(&self, field: Fp) -> Result<Module> {
        let alg = Arc::new(self.algebra.resolve(field)?);
        let act = self
            .action
            .iter()
            .map(|rows| {
                if rows.len() != self.dim {
                    return Err(Error::DimensionMismatch("action matrix row count".into()));
                }
                matrix_from_rows(field, rows, self.dim)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Module::new(alg, self.dim, act)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn regular_and_residue_are_modules() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
        assert_eq!(Module::regular(s.clone()).validate(), Ok(()));
        let k = Module::residue(s.clone()).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.action()[1].is_zero());
        let t = Arc::new(Algebra::triangular2(f5()));
        assert_eq!(Module::regular(t.clone()).validate(), Ok(()));
        assert_eq!(Module::free(t, 2).validate(), Ok(()));
    }

    #[test]
    fn unit_must_act_as_identity() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
        let f = f5();
        let act = vec![Matrix::from_data(f, 1, 1, vec![2]).unwrap(), Matrix::zeros(f, 1, 1)];
        assert_eq!(Module::new(s, 1, act).unwrap_err(), ModuleViolation::UnitNotIdentity);
    }

    #[test]
    fn bimodule_roundtrip_through_enveloping() {
        let f = f5();
        let t = Arc::new(Algebra::triangular2(f));
        let b = Bimodule::regular(t.clone());
        assert_eq!(b.validate(), Ok(()));
        let env = Arc::new(b.enveloping().unwrap());
        let m = b.to_module(env).unwrap();
        assert_eq!(m.validate(), Ok(()));
        assert_eq!(m.dim(), 3);
        let back = Bimodule::from_module(t.clone(), t, &m).unwrap();
        assert_eq!(back.lact(), b.lact());
        assert_eq!(back.ract(), b.ract());
    }

    #[test]
    fn ground_bimodule_is_itself() {
        let f = f5();
        let k = Arc::new(Algebra::ground(f));
        let ops = vec![Matrix::identity(f, 3)];
        let (b, m) = as_bimodule_module(k.clone(), k, 3, ops.clone(), ops).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(m.dim(), 3);
        assert_eq!(m.action()[0], Matrix::identity(f, 3));
    }

    #[test]
    fn noncommuting_actions_rejected() {
        let f = f5();
        let s = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
        // left: x acts by [[0,0],[1,0]], right: x acts by [[0,1],[0,0]]
        let id = Matrix::identity(f, 2);
        let lx = Matrix::from_rows(f, &[vec![0, 0], vec![1, 0]]).unwrap();
        let rx = Matrix::from_rows(f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let err = Bimodule::new(s.clone(), s, 2, vec![id.clone(), lx], vec![id, rx]).unwrap_err();
        assert_eq!(err, ModuleViolation::NotCommuting { left: 1, right: 1 });
    }

    #[test]
    fn free_bimodule_valid() {
        let f = f5();
        let a = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
        let t = Arc::new(Algebra::triangular2(f));
        let b = Bimodule::free(a, t, 2);
        assert_eq!(b.dim(), 12);
        assert_eq!(b.validate(), Ok(()));
    }

    #[test]
    fn module_json_roundtrip() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 3).unwrap());
        let m = Module::regular(s);
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back: ModuleJson = serde_json::from_str(&j).unwrap();
        let m2 = back.build(f5()).unwrap();
        assert_eq!(m2.action(), m.action());
        let preset = r#"{"algebra":"truncated_poly:2","dim":1,"action":[[[1]],[[0]]]}"#;
        let k: ModuleJson = serde_json::from_str(preset).unwrap();
        assert_eq!(k.build(f5()).unwrap().dim(), 1);
    }
}

use super::field::Fp;
use super::matrix::Matrix;

/// A subspace of F_p^n kept as a reduced echelon basis.
///
/// Rows are sorted by pivot column and every pivot column is zero in all
/// other rows, so the coordinates of a member vector are just its entries at
/// the pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        let mut s = Self::zero(field, ambient);
        for i in 0..ambient {
            let mut v = vec![0; ambient];
            v[i] = 1 % field.p();
            s.rows.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn span<'a, I: IntoIterator<Item = &'a [u32]>>(field: Fp, ambient: usize, vecs: I) -> Self {
        let mut s = Self::zero(field, ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    /// Column space of `m`.
    pub fn column_span(m: &Matrix) -> Self {
        let t = m.transpose();
        Self::row_span(&t)
    }

    pub fn row_span(m: &Matrix) -> Self {
        let rr = m.rref();
        let rows = (0..rr.rank()).map(|i| rr.matrix.row(i).to_vec()).collect();
        Subspace { field: m.field(), ambient: m.cols(), rows, pivots: rr.pivots }
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.rows)
    }

    /// Reduce `v` against the basis; the result is zero iff v is a member.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &r) in w.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.mul_add(*x, neg, r);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &r) in row.iter_mut().zip(&w) {
                if r != 0 {
                    *x = f.mul_add(*x, neg, r);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of a member vector in the echelon basis.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    /// Coordinates without the membership check.
    pub fn coords_unchecked(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    /// Vector with the given coordinates.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = vec![0; self.ambient];
        for (row, &c) in self.rows.iter().zip(coords) {
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.mul_add(*x, c, r);
            }
        }
        v
    }

    /// Columns not used as pivots; their unit vectors span a complement.
    pub fn complement_columns(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient).filter(|&c| !used[c]).collect()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }
}

/// The quotient V / U with a fixed complement basis.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub sub: Subspace,
    /// complement columns of V indexing the quotient basis
    pub cols: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let cols = sub.complement_columns();
        Quotient { sub, cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient()
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let r = self.sub.reduce(v);
        self.cols.iter().map(|&c| r[c]).collect()
    }

    pub fn lift(&self, q: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.ambient()];
        for (&c, &x) in self.cols.iter().zip(q) {
            v[c] = x;
        }
        v
    }

    /// Projection V -> V/U as a matrix.
    pub fn projection(&self) -> Matrix {
        let f = self.sub.field();
        let n = self.ambient();
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1 % f.p();
                self.project(&e)
            })
            .collect();
        Matrix::from_columns(f, self.dim(), &cols)
    }

    /// Section V/U -> V as a matrix.
    pub fn section(&self) -> Matrix {
        let f = self.sub.field();
        let mut m = Matrix::zeros(f, self.ambient(), self.dim());
        for (j, &c) in self.cols.iter().enumerate() {
            m.set(c, j, 1);
        }
        m
    }

    /// Matrix of the operator induced on V/U by an operator on V that
    /// preserves U.
    pub fn induced(&self, op: &Matrix) -> Matrix {
        let f = self.sub.field();
        let cols: Vec<Vec<u32>> = self
            .cols
            .iter()
            .map(|&c| {
                let v = op.column(c);
                self.project(&v)
            })
            .collect();
        Matrix::from_columns(f, self.dim(), &cols)
    }
}

/// Matrix of an operator restricted to an invariant subspace, in the echelon
/// basis of that subspace. Returns `None` if the subspace is not invariant.
pub fn restrict_operator(sub: &Subspace, op: &Matrix) -> Option<Matrix> {
    let f = sub.field();
    let mut cols = Vec::with_capacity(sub.dim());
    for b in sub.basis() {
        let img = op.mul_vec(b).ok()?;
        cols.push(sub.coords(&img)?);
    }
    Some(Matrix::from_columns(f, sub.dim(), &cols))
}

/// Linear map between two subspaces induced by `op` (ambient to ambient), in
/// echelon coordinates. `None` if the image leaves the target.
pub fn induced_between(src: &Subspace, tgt: &Subspace, op: &Matrix) -> Option<Matrix> {
    let f = src.field();
    let mut cols = Vec::with_capacity(src.dim());
    for b in src.basis() {
        let img = op.mul_vec(b).ok()?;
        cols.push(tgt.coords(&img)?);
    }
    Some(Matrix::from_columns(f, tgt.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_coords() {
        let f = Fp::new(5).unwrap();
        let mut s = Subspace::zero(f, 3);
        assert!(s.insert(&[0, 1, 2]));
        assert!(s.insert(&[1, 1, 0]));
        assert!(!s.insert(&[1, 2, 2]));
        assert_eq!(s.dim(), 2);
        let v = vec![2, 4, 4];
        let c = s.coords(&v).unwrap();
        assert_eq!(s.combine(&c), v);
        assert!(s.coords(&[0, 0, 1]).is_none());
    }

    #[test]
    fn quotient_projection_kills_sub() {
        let f = Fp::new(3).unwrap();
        let s = Subspace::span(f, 3, [&[1u32, 1, 0][..]]);
        let q = Quotient::new(s);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&[1, 1, 0]), vec![0, 0]);
        let pm = q.projection();
        let sec = q.section();
        assert_eq!(pm.mul(&sec).unwrap(), Matrix::identity(f, 2));
    }
}

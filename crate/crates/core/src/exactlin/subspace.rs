use super::elim::{primitive, Echelon};
use super::sparse::{axpy, entry};
use super::{Scalar, SparseMat, SparseVec};

/// A linear subspace of `ℚ^ambient_dim`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    pivots: Vec<usize>,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, pivots: Vec::new(), basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            pivots: (0..ambient_dim).collect(),
            basis: (0..ambient_dim).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    /// The span of `vectors`.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let rows: Vec<_> = vectors
            .into_iter()
            .map(|v| {
                assert!(v.iter().all(|(i, _)| *i < ambient_dim), "vector index out of range");
                primitive(&v)
            })
            .filter(|r| !r.is_empty())
            .collect();
        let mut e = Echelon::new();
        e.extend_sparse_first(rows);
        Self::from_echelon(ambient_dim, e)
    }

    pub(crate) fn from_echelon(ambient_dim: usize, e: Echelon) -> Self {
        let (pivots, basis) = e.into_rref();
        Subspace { ambient_dim, pivots, basis }
    }

    /// The column space of `m`.
    pub fn column_space(m: &SparseMat) -> Self {
        Self::span(m.nrows(), m.columns().iter().cloned())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors in reduced echelon form, sorted by pivot.
    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Coordinates not used as pivots, increasing.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_p[p] = true;
        }
        (0..self.ambient_dim).filter(|&i| !is_p[i]).collect()
    }

    /// `v` minus its component along the echelon basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut out: SparseVec = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = entry(&out, p);
            if !c.is_zero() {
                out = axpy(&out, &(-c), &self.basis[k]);
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| entry(v, p)).collect();
        let mut rest: SparseVec = v.to_vec();
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                rest = axpy(&rest, &(-c), &self.basis[k]);
            }
        }
        rest.is_empty().then_some(coords)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimension mismatch");
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimension mismatch");
        Subspace::span(self.ambient_dim, self.basis.iter().chain(other.basis.iter()).cloned())
    }

    /// Matrix whose columns are the basis vectors.
    pub fn inclusion(&self) -> SparseMat {
        SparseMat::from_columns(self.ambient_dim, self.basis.clone())
    }
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank(m: &SparseMat) -> usize {
    if m.nrows() < m.ncols() {
        rank_of_vectors(&m.rows_as_vecs())
    } else {
        rank_of_vectors(m.columns())
    }
}

pub fn rank_of_vectors(vs: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    e.extend_sparse_first(vs.iter().map(|v| primitive(v)).filter(|r| !r.is_empty()).collect());
    e.rank()
}

/// Basis of `{x : m·x = 0}`.
pub fn kernel_basis(m: &SparseMat) -> Subspace {
    let n = m.ncols();
    let row_space = Subspace::span(n, m.rows_as_vecs());
    let mut vecs = Vec::new();
    let nonpiv = row_space.non_pivots();
    // Column f of the row space restricted to pivot rows, read off the RREF.
    let mut by_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
    for (k, row) in row_space.basis.iter().enumerate() {
        for (j, x) in row.iter().skip(1) {
            by_col[*j].push((k, x.clone()));
        }
    }
    for f in nonpiv {
        let mut v: SparseVec = by_col[f].iter().map(|(k, x)| (row_space.pivots[*k], -x)).collect();
        v.push((f, Scalar::one()));
        v.sort_by_key(|e| e.0);
        vecs.push(v);
    }
    Subspace::span(n, vecs)
}

/// Surjection `ℚ^ambient_dim → ℚ^ambient_dim / relations` in the coordinates
/// given by the non-pivot positions of the relation basis.
pub fn quotient_map(ambient_dim: usize, relations: &Subspace) -> SparseMat {
    assert_eq!(relations.ambient_dim, ambient_dim, "ambient dimension mismatch");
    let nonpiv = relations.non_pivots();
    let mut qpos = vec![usize::MAX; ambient_dim];
    for (q, &j) in nonpiv.iter().enumerate() {
        qpos[j] = q;
    }
    let mut cols: Vec<SparseVec> = vec![Vec::new(); ambient_dim];
    for &j in &nonpiv {
        cols[j] = vec![(qpos[j], Scalar::one())];
    }
    for (k, &p) in relations.pivots.iter().enumerate() {
        cols[p] = relations.basis[k].iter().skip(1).map(|(j, x)| (qpos[*j], -x)).collect();
    }
    SparseMat::from_columns(nonpiv.len(), cols)
}

/// A section of [`quotient_map`]: quotient basis vector `k` lifts to the `k`-th non-pivot unit vector.
pub fn quotient_lifts(relations: &Subspace) -> Vec<usize> {
    relations.non_pivots()
}

pub fn subspaces_equal(a: &Subspace, b: &Subspace) -> bool {
    assert_eq!(a.ambient_dim, b.ambient_dim, "ambient dimension mismatch");
    a.dim() == b.dim() && a.is_subspace_of(b)
}

/// Solves `a·x = b` for one particular solution, if any.
pub fn solve(a: &SparseMat, b: &[(usize, Scalar)]) -> Option<SparseVec> {
    let n = a.ncols();
    // Augmented rows [a | b]; a solution exists iff no pivot lands in the last column.
    let mut rows = a.rows_as_vecs();
    for (i, x) in b {
        rows[*i].push((n, x.clone()));
    }
    let s = Subspace::span(n + 1, rows);
    if s.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = Vec::new();
    for (k, &p) in s.pivots.iter().enumerate() {
        let c = entry(&s.basis[k], n);
        if !c.is_zero() {
            x.push((p, c));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SparseMat {
        SparseMat::from_dense_i64(rows)
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&SparseMat::zeros(0, 0)), 0);
        assert_eq!(rank(&SparseMat::identity(5)), 5);
        assert_eq!(rank(&m(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank(&m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])), 2);
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&SparseMat::identity(3)).dim(), 0);
        assert_eq!(kernel_basis(&SparseMat::zeros(3, 3)).dim(), 3);
        let k = kernel_basis(&m(&[vec![1, 1]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[(0, Scalar::one()), (1, Scalar::from_i64(-1))]));
    }

    #[test]
    fn quotients() {
        let q = quotient_map(3, &Subspace::zero(3));
        assert_eq!(q, SparseMat::identity(3));
        let q = quotient_map(3, &Subspace::full(3));
        assert_eq!(q.shape(), (0, 3));
        let r = Subspace::span(2, vec![vec![(0, Scalar::one()), (1, Scalar::from_i64(-1))]]);
        let q = quotient_map(2, &r);
        assert_eq!(q.shape(), (1, 2));
        assert!(q.mul(&r.inclusion()).is_zero());
    }

    #[test]
    fn equality_of_spans() {
        let e1 = vec![(0, Scalar::one())];
        let e2 = vec![(1, Scalar::one())];
        let a = Subspace::span(2, vec![e1.clone()]);
        assert!(subspaces_equal(&a, &Subspace::span(2, vec![vec![(0, Scalar::from_i64(2))]])));
        assert!(!subspaces_equal(&a, &Subspace::span(2, vec![e2.clone()])));
        let p = vec![(0, Scalar::one()), (1, Scalar::one())];
        let q = vec![(0, Scalar::one()), (1, Scalar::from_i64(-1))];
        assert!(subspaces_equal(&Subspace::span(2, vec![e1, e2]), &Subspace::span(2, vec![p, q])));
    }

    #[test]
    fn solving() {
        let a = m(&[vec![1, 1], vec![0, 2]]);
        let x = solve(&a, &[(0, Scalar::from_i64(3)), (1, Scalar::from_i64(2))]).unwrap();
        assert_eq!(a.apply(&x), vec![(0, Scalar::from_i64(3)), (1, Scalar::from_i64(2))]);
        let z = m(&[vec![1, 1], vec![1, 1]]);
        assert!(solve(&z, &[(0, Scalar::one())]).is_none());
    }
}

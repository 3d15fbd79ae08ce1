use std::collections::HashMap;
use std::fmt;

use super::Scalar;

/// A sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Accumulates a linear combination in arbitrary order.
#[derive(Clone, Debug, Default)]
pub struct Accum {
    map: HashMap<usize, Scalar>,
}

impl Accum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&i) {
            Some(v) => *v += c,
            None => {
                self.map.insert(i, c.clone());
            }
        }
    }

    pub fn add_vec(&mut self, v: &[(usize, Scalar)], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, &(x * c));
        }
    }

    pub fn into_sparse(self) -> SparseVec {
        let mut out: SparseVec = self.map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

/// Returns `a + c·b`.
pub fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &[(usize, Scalar)], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn unit(i: usize) -> SparseVec {
    vec![(i, Scalar::one())]
}

pub fn dot(a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Scalar {
    let (mut i, mut j) = (0, 0);
    let mut s = Scalar::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &a[i].1 * &b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

pub fn entry(v: &[(usize, Scalar)], i: usize) -> Scalar {
    match v.binary_search_by_key(&i, |e| e.0) {
        Ok(k) => v[k].1.clone(),
        Err(_) => Scalar::zero(),
    }
}

/// A sparse matrix stored by columns; it acts on column vectors, so
/// `a.mul(&b)` is the composite "apply `b`, then `a`".
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { rows: n, cols: (0..n).map(unit).collect() }
    }

    /// Builds a matrix from its columns; zeros are dropped and entries sorted.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.retain(|(_, v)| !v.is_zero());
                c.sort_by_key(|e| e.0);
                debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0), "duplicate row index");
                assert!(c.iter().all(|(i, _)| *i < rows), "row index out of range");
                c
            })
            .collect();
        SparseMat { rows, cols }
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(rows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut acc: Vec<Accum> = vec![Accum::new(); ncols];
        for (r, c, v) in entries {
            assert!(r < rows && c < ncols, "triplet index out of range");
            acc[c].add(r, &v);
        }
        SparseMat { rows, cols: acc.into_iter().map(Accum::into_sparse).collect() }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut cols = vec![Vec::new(); nc];
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), nc, "ragged dense matrix");
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    cols[j].push((i, x.clone()));
                }
            }
        }
        SparseMat { rows: nr, cols }
    }

    pub fn from_dense_i64(rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Scalar::from_i64(x)).collect()).collect();
        if rows.is_empty() {
            return SparseMat::zeros(0, 0);
        }
        Self::from_dense(&conv)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols.len())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        entry(&self.cols[c], r)
    }

    /// Iterates over stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (j, x) in v {
            acc.add_vec(&self.cols[*j], x);
        }
        acc.into_sparse()
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols(), rhs.nrows(), "shape mismatch in product");
        SparseMat { rows: self.rows, cols: rhs.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseMat { rows: self.cols.len(), cols }
    }

    /// Rows as sparse vectors indexed by column.
    pub fn rows_as_vecs(&self) -> Vec<SparseVec> {
        self.transpose().cols
    }

    pub fn add(&self, rhs: &SparseMat) -> SparseMat {
        self.add_scaled(&Scalar::one(), rhs)
    }

    pub fn sub(&self, rhs: &SparseMat) -> SparseMat {
        self.add_scaled(&Scalar::from_i64(-1), rhs)
    }

    /// `self + c·rhs`.
    pub fn add_scaled(&self, c: &Scalar, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        SparseMat { rows: self.rows, cols: self.cols.iter().zip(&rhs.cols).map(|(a, b)| axpy(a, c, b)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMat {
        SparseMat { rows: self.rows, cols: self.cols.iter().map(|v| scale(v, c)).collect() }
    }

    pub fn neg(&self) -> SparseMat {
        self.scale(&Scalar::from_i64(-1))
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.ncols(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product; the basis of the result is ordered `(i, j) ↦ i·dim₂ + j`.
    pub fn kron(&self, rhs: &SparseMat) -> SparseMat {
        let mut cols = Vec::with_capacity(self.ncols() * rhs.ncols());
        for a in &self.cols {
            for b in &rhs.cols {
                let mut c = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (k, y) in b {
                        c.push((i * rhs.rows + k, x * y));
                    }
                }
                cols.push(c);
            }
        }
        SparseMat { rows: self.rows * rhs.rows, cols }
    }

    pub fn block_diag(blocks: &[SparseMat]) -> SparseMat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut cols = Vec::new();
        let mut off = 0;
        for b in blocks {
            for c in &b.cols {
                cols.push(c.iter().map(|(i, v)| (i + off, v.clone())).collect());
            }
            off += b.rows;
        }
        SparseMat { rows, cols }
    }

    pub fn hstack(blocks: &[SparseMat]) -> SparseMat {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "row mismatch in hstack");
        SparseMat { rows, cols: blocks.iter().flat_map(|b| b.cols.iter().cloned()).collect() }
    }

    pub fn vstack(blocks: &[SparseMat]) -> SparseMat {
        let ncols = blocks.first().map_or(0, |b| b.ncols());
        assert!(blocks.iter().all(|b| b.ncols() == ncols), "column mismatch in vstack");
        let mut cols = vec![Vec::new(); ncols];
        let mut off = 0;
        for b in blocks {
            for (j, c) in b.cols.iter().enumerate() {
                cols[j].extend(c.iter().map(|(i, v)| (i + off, v.clone())));
            }
            off += b.rows;
        }
        SparseMat { rows: off, cols }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMat {
        SparseMat { rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.ncols()]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{}", self.rows, self.ncols())?;
        if self.rows <= 12 && self.ncols() <= 12 {
            for r in self.to_dense() {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SparseMat {
        SparseMat::from_dense_i64(rows)
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[vec![1, 2], vec![0, 1]]);
        let b = m(&[vec![3, 0], vec![1, -1]]);
        assert_eq!(a.mul(&b), m(&[vec![5, -2], vec![1, -1]]));
        assert_eq!(a.transpose(), m(&[vec![1, 0], vec![2, 1]]));
        assert_eq!(a.mul(&SparseMat::identity(2)), a);
    }

    #[test]
    fn kron_and_stacks() {
        let a = m(&[vec![0, 1], vec![1, 0]]);
        let k = a.kron(&SparseMat::identity(2));
        assert_eq!(k.get(2, 0), Scalar::one());
        assert_eq!(k.get(0, 2), Scalar::one());
        assert_eq!(k.trace(), Scalar::zero());
        let s = SparseMat::vstack(&[a.clone(), a.clone()]);
        assert_eq!(s.shape(), (4, 2));
        let d = SparseMat::block_diag(&[a.clone(), SparseMat::identity(1)]);
        assert_eq!(d.trace(), Scalar::one());
    }

    #[test]
    fn sums_cancel() {
        let a = m(&[vec![1, -1]]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&a).nnz(), 2);
    }
}

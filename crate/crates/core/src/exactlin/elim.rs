//! Fraction-free row reduction over the integers.
//!
//! Rows are kept primitive (content 1, positive leading entry) and combined by
//! cross multiplication, so no rational arithmetic happens until a reduced form
//! is requested.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Scalar, SparseVec};

pub(crate) type ZRow = Vec<(usize, BigInt)>;

/// Clears denominators and divides out the content; the leading entry ends up positive.
pub(crate) fn primitive(v: &[(usize, Scalar)]) -> ZRow {
    if v.is_empty() {
        return Vec::new();
    }
    let mut l = BigInt::one();
    for (_, x) in v {
        l = l.lcm(x.denom());
    }
    let mut row: ZRow = v.iter().map(|(i, x)| (*i, x.numer() * (&l / x.denom()))).collect();
    normalize(&mut row);
    row
}

fn normalize(row: &mut ZRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    let flip = row[0].1.is_negative();
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `p·a − q·b` for the pivot column shared by `a` and `b`, normalized.
fn eliminate(a: &ZRow, b: &ZRow) -> ZRow {
    let ap = &a[0].1;
    let bp = &b[0].1;
    let g = ap.gcd(bp);
    // bp·a − ap·b kills the shared leading column.
    let ka = bp / &g;
    let kb = ap / &g;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (1, 1);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, &a[i].1 * &ka));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(&b[j].1 * &kb)));
            j += 1;
        } else {
            let v = &a[i].1 * &ka - &b[j].1 * &kb;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize(&mut out);
    out
}

/// Incremental row echelon form: every stored row has a distinct leading column
/// and no entries to the left of it.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    pub(crate) rows: Vec<ZRow>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the stored rows and keeps it if independent.
    /// Returns true when the rank grew.
    pub(crate) fn insert(&mut self, mut row: ZRow) -> bool {
        while let Some(&(c, _)) = row.first() {
            match self.pivot_of.get(&c) {
                Some(&k) => row = eliminate(&row, &self.rows[k]),
                None => {
                    self.pivot_of.insert(c, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }

    /// Inserts many rows, sparsest first, so that pivot rows stay short.
    pub(crate) fn extend_sparse_first(&mut self, mut rows: Vec<ZRow>) {
        rows.sort_by_key(Vec::len);
        for r in rows {
            self.insert(r);
        }
    }

    /// Reduced row echelon form over the rationals, rows sorted by pivot.
    pub(crate) fn into_rref(self) -> (Vec<usize>, Vec<SparseVec>) {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        let pos: HashMap<usize, usize> = pivots.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut reduced: Vec<Option<SparseVec>> = vec![None; rows.len()];
        for k in (0..rows.len()).rev() {
            let lead = Scalar::from_bigint(rows[k][0].1.clone());
            let mut acc: SparseVec = rows[k].iter().map(|(i, x)| (*i, &Scalar::from_bigint(x.clone()) / &lead)).collect();
            // Clear later pivot columns using the already reduced rows below.
            let targets: Vec<(usize, Scalar)> =
                acc.iter().skip(1).filter_map(|(i, x)| pos.get(i).map(|&q| (q, x.clone()))).collect();
            for (q, x) in targets {
                let other = reduced[q].as_ref().expect("lower rows reduced first");
                acc = super::sparse::axpy(&acc, &(-x), other);
            }
            reduced[k] = Some(acc);
        }
        (pivots, reduced.into_iter().map(Option::unwrap).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(usize, i64)]) -> ZRow {
        v.iter().map(|&(i, x)| (i, BigInt::from(x))).collect()
    }

    #[test]
    fn content_is_removed() {
        let r = primitive(&[(0, Scalar::frac(-2, 3)), (2, Scalar::frac(4, 3))]);
        assert_eq!(r, row(&[(0, 1), (2, -2)]));
    }

    #[test]
    fn dependent_rows_are_rejected() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 2)])));
        assert!(!e.insert(row(&[(0, 2), (1, 4)])));
        assert!(e.insert(row(&[(1, 3)])));
        assert_eq!(e.rank(), 2);
        let (piv, rref) = e.into_rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rref[0], vec![(0, Scalar::one())]);
    }
}

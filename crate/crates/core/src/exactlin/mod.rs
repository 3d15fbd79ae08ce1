//! Exact rational scalars, sparse vectors and matrices, and subspace algebra.

mod elim;
mod scalar;
mod sparse;
mod subspace;

pub use scalar::{ParseScalarError, Scalar};
pub use sparse::{axpy, dot, entry, from_dense, scale, to_dense, unit, Accum, SparseMat, SparseVec};
pub use subspace::{kernel_basis, quotient_lifts, quotient_map, rank, rank_of_vectors, solve, subspaces_equal, Subspace};

use crate::par;

/// A finite chain complex `C_0 → C_1 → … → C_k` with cohomological indexing:
/// `maps[i]` goes from `C_i` to `C_{i+1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub maps: Vec<SparseMat>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<SparseMat>) -> Self {
        assert_eq!(maps.len() + 1, dims.len().max(1), "one map between consecutive terms");
        for (i, m) in maps.iter().enumerate() {
            assert_eq!(m.shape(), (dims[i + 1], dims[i]), "map {i} has the wrong shape");
        }
        ChainComplex { dims, maps }
    }

    /// True iff every composite of consecutive maps vanishes.
    pub fn squares_to_zero(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Dimension of the cohomology at each term.
    pub fn homology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = par::map(&self.maps, rank);
        (0..self.dims.len())
            .map(|i| {
                let out = if i < ranks.len() { ranks[i] } else { 0 };
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                self.dims[i] - out - inc
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

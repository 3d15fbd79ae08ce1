//! Polynomial-functor calculus for contravariant functors on free groups:
//! cross-effects `tr̃_d` at `(F₁, …, F₁)` with their `𝔖_d`-characters, the
//! subfunctors `p_d`, the layer sequence, and polynomial degree.

use std::collections::BTreeMap;

use crate::combinat::{class_size, factorial, partitions, perm_of_cycle_type};
use crate::exactlin::{kernel_basis, quotient_lifts, quotient_map, Scalar, SparseMat, Subspace};
use crate::gract::{value_matrix, FreeGroupHom};
use crate::operads::OperadId;
use crate::propcat::hom_space;

/// A functor `gr^op → Vect` given by finite data.
pub trait GrFunctor: Sync {
    fn name(&self) -> String;
    /// `dim F(F_t)`.
    fn dim(&self, t: usize) -> usize;
    /// `F(φ) : F(F_t) → F(F_s)` for `φ : F_s → F_t`.
    fn map(&self, phi: &FreeGroupHom) -> SparseMat;
    /// A degree the functor is known not to exceed; bounds the searches below.
    fn degree_bound(&self) -> usize;
}

/// `Cat Ass^u(d, −)` with the free-group action.
#[derive(Clone, Copy, Debug)]
pub struct AssuFunctor {
    pub d: usize,
}

impl GrFunctor for AssuFunctor {
    fn name(&self) -> String {
        format!("Cat AssU({}, -)", self.d)
    }

    fn dim(&self, t: usize) -> usize {
        hom_space(OperadId::AssU, self.d, t).dim()
    }

    fn map(&self, phi: &FreeGroupHom) -> SparseMat {
        value_matrix(self.d, phi)
    }

    fn degree_bound(&self) -> usize {
        self.d
    }
}

/// `(𝔞♯)^{⊗d}`: `F(F_t) = (𝕜^t)^{⊗d}`, maps the tensor powers of the exponent-sum matrices.
#[derive(Clone, Copy, Debug)]
pub struct AbelianPower {
    pub d: usize,
}

impl GrFunctor for AbelianPower {
    fn name(&self) -> String {
        format!("a#^{}", self.d)
    }

    fn dim(&self, t: usize) -> usize {
        t.pow(self.d as u32)
    }

    fn map(&self, phi: &FreeGroupHom) -> SparseMat {
        let a = phi.abelianization();
        (0..self.d).fold(SparseMat::identity(1), |acc, _| acc.kron(&a))
    }

    fn degree_bound(&self) -> usize {
        self.d
    }
}

/// The constant functor with value `𝕜^dim`.
#[derive(Clone, Copy, Debug)]
pub struct Constant {
    pub dim: usize,
}

impl GrFunctor for Constant {
    fn name(&self) -> String {
        format!("const({})", self.dim)
    }

    fn dim(&self, _t: usize) -> usize {
        self.dim
    }

    fn map(&self, _phi: &FreeGroupHom) -> SparseMat {
        SparseMat::identity(self.dim)
    }

    fn degree_bound(&self) -> usize {
        0
    }
}

/// Characters are stored per conjugacy class, keyed by decreasing cycle type.
pub type Character = BTreeMap<Vec<usize>, Scalar>;

/// Character of the regular representation of `𝔖_d`.
pub fn regular_character(d: usize) -> Character {
    partitions(d)
        .into_iter()
        .map(|p| {
            let v = if p.iter().all(|&x| x == 1) { factorial(d) as i64 } else { 0 };
            (p, Scalar::from_i64(v))
        })
        .collect()
}

/// `⟨χ, ψ⟩ = (1/d!) Σ_σ χ(σ) ψ(σ)`.
pub fn character_inner(a: &Character, b: &Character, d: usize) -> Scalar {
    let mut s = Scalar::zero();
    for (ct, x) in a {
        let y = b.get(ct).cloned().unwrap_or_else(Scalar::zero);
        s += Scalar::from_i64(class_size(ct) as i64) * x * y;
    }
    s * Scalar::frac(1, factorial(d) as i64)
}

/// Character of `W ↦ ((𝕜^t)^{⊗d} ⊗ W)^{𝔖_d}` evaluated as a dimension.
pub fn invariant_dim_with_tensor_power(chi: &Character, d: usize, t: usize) -> Scalar {
    let place: Character = partitions(d).into_iter().map(|p| (p.clone(), Scalar::from_i64((t as i64).pow(p.len() as u32)))).collect();
    character_inner(&place, chi, d)
}

/// `tr̃_d F(F₁, …, F₁)` with its `𝔖_d`-action.
#[derive(Clone, Debug)]
pub struct CrossEffect {
    pub d: usize,
    pub dim: usize,
    pub character: Character,
    /// `F(F_d) → tr̃_d F` in the quotient basis.
    pub quotient: SparseMat,
    /// Columns of `F(F_d)` lifting the quotient basis.
    pub lifts: Vec<usize>,
}

fn image_of_kills(f: &dyn GrFunctor, d: usize) -> Subspace {
    let n = f.dim(d);
    let mut vecs = Vec::new();
    for k in 0..d {
        let m = f.map(&FreeGroupHom::kill(d, k));
        vecs.extend(m.columns().iter().cloned());
    }
    Subspace::span(n, vecs)
}

/// Trace of `q·A·lift` for `A` preserving the kernel of `q`.
fn induced_trace(q: &SparseMat, a: &SparseMat, lifts: &[usize]) -> Scalar {
    lifts
        .iter()
        .enumerate()
        .map(|(k, &j)| crate::exactlin::entry(&q.apply(a.column(j)), k))
        .sum()
}

/// Cokernel of `⊕_k F(p_k) : ⊕ F(F_{d−1}) → F(F_d)`, `p_k` killing generator `k`.
pub fn tre_value(f: &dyn GrFunctor, d: usize) -> CrossEffect {
    let n = f.dim(d);
    let img = image_of_kills(f, d);
    let q = quotient_map(n, &img);
    let lifts = quotient_lifts(&img);
    let character = partitions(d)
        .into_iter()
        .map(|ct| {
            let sigma = perm_of_cycle_type(&ct);
            let a = f.map(&FreeGroupHom::permutation(&sigma));
            let tr = induced_trace(&q, &a, &lifts);
            (ct, tr)
        })
        .collect();
    CrossEffect { d, dim: q.nrows(), character, quotient: q, lifts }
}

/// `γ_d F`: the top cross-effect with its `𝔖_d`-character.
pub fn cross_effect(f: &dyn GrFunctor, d: usize) -> CrossEffect {
    tre_value(f, d)
}

/// `p_d F(F_t) = ker[F(F_t) → tr̃_{d+1} F(F_t, …, F_t)]`, the map induced by the fold.
pub fn p_d_value(f: &dyn GrFunctor, d: usize, t: usize) -> Subspace {
    let k = d + 1;
    let big = k * t;
    let n = f.dim(big);
    let mut vecs = Vec::new();
    for block in 0..k {
        let killed: Vec<usize> = (block * t..(block + 1) * t).collect();
        let m = f.map(&FreeGroupHom::kill_many(big, &killed));
        vecs.extend(m.columns().iter().cloned());
    }
    let img = Subspace::span(n, vecs);
    let q = quotient_map(n, &img);
    let fold = f.map(&FreeGroupHom::iterated_fold(t, k));
    kernel_basis(&q.mul(&fold))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerCheck {
    pub total: usize,
    pub lower: usize,
    pub layer: Scalar,
}

impl LayerCheck {
    pub fn holds(&self) -> bool {
        Scalar::from_i64(self.total as i64) == Scalar::from_i64(self.lower as i64) + &self.layer
    }
}

/// `dim F(F_t) = dim p_{d−1}F(F_t) + dim((𝕜^t)^{⊗d} ⊗ tr̄_d F)^{𝔖_d}` for `F` of degree `d`.
pub fn layer_ses_check(f: &dyn GrFunctor, d: usize, t: usize) -> LayerCheck {
    let lower = if d == 0 { 0 } else { p_d_value(f, d - 1, t).dim() };
    let ce = tre_value(f, d);
    LayerCheck { total: f.dim(t), lower, layer: invariant_dim_with_tensor_power(&ce.character, d, t) }
}

/// Largest `k ≤ bound` with `tr̃_k F(F₁, …, F₁) ≠ 0`, or `None` if `tr̃_{bound+1}` is nonzero.
pub fn poly_degree(f: &dyn GrFunctor, bound: usize) -> Option<usize> {
    let dims: Vec<usize> = (0..=bound + 1).map(|k| tre_value(f, k).dim).collect();
    if dims[bound + 1] != 0 {
        return None;
    }
    Some((0..=bound).rev().find(|&k| dims[k] != 0).unwrap_or(0))
}

/// Character of `𝔖_d` on `F(F_d)` restricted to an invariant subspace.
pub fn subspace_character(f: &dyn GrFunctor, d: usize, sub: &Subspace) -> Character {
    partitions(d)
        .into_iter()
        .map(|ct| {
            let a = f.map(&FreeGroupHom::permutation(&perm_of_cycle_type(&ct)));
            let tr = sub
                .basis()
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let img = a.apply(v);
                    sub.coordinates(&img).expect("subspace is invariant")[k].clone()
                })
                .sum();
            (ct, tr)
        })
        .collect()
}

/// Checks `F(φ∘ψ) = F(ψ)·F(φ)` on the given pairs.
pub fn check_contravariance(f: &dyn GrFunctor, pairs: &[(FreeGroupHom, FreeGroupHom)]) -> bool {
    pairs.iter().all(|(phi, psi)| f.map(&phi.compose(psi)) == f.map(psi).mul(&f.map(phi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_functor() {
        let c = Constant { dim: 2 };
        assert_eq!(tre_value(&c, 0).dim, 2);
        assert_eq!(tre_value(&c, 1).dim, 0);
        assert_eq!(poly_degree(&c, 2), Some(0));
    }

    #[test]
    fn abelianization_dual() {
        let a = AbelianPower { d: 1 };
        assert_eq!(tre_value(&a, 1).dim, 1);
        assert_eq!(tre_value(&a, 2).dim, 0);
        assert_eq!(poly_degree(&a, 3), Some(1));
        assert!(layer_ses_check(&a, 1, 3).holds());
        let a2 = AbelianPower { d: 2 };
        let ce = tre_value(&a2, 2);
        assert_eq!(ce.character, regular_character(2));
        assert_eq!(p_d_value(&a2, 1, 2).dim(), 0);
    }

    #[test]
    fn assu_cross_effects() {
        let f = AssuFunctor { d: 2 };
        let ce = tre_value(&f, 2);
        assert_eq!(ce.dim, 2);
        assert_eq!(ce.character, regular_character(2));
        assert_eq!(p_d_value(&f, 1, 1).dim(), 1);
        for t in 1..=3 {
            assert!(layer_ses_check(&f, 2, t).holds(), "t = {t}");
        }
        assert_eq!(poly_degree(&f, 3), Some(2));
        assert_eq!(poly_degree(&f, 1), None);
    }

    #[test]
    fn filtration_is_increasing() {
        let f = AssuFunctor { d: 2 };
        for t in 1..=2 {
            let p0 = p_d_value(&f, 0, t);
            let p1 = p_d_value(&f, 1, t);
            let p2 = p_d_value(&f, 2, t);
            assert!(p0.is_subspace_of(&p1) && p1.is_subspace_of(&p2));
            assert_eq!(p2.dim(), f.dim(t));
        }
    }
}

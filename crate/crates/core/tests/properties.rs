use proptest::prelude::*;

use opcat::combinat::{perm_sign, Perm};
use opcat::exactlin::{kernel_basis, rank, Scalar, SparseMat};
use opcat::funcalc::{check_contravariance, AssuFunctor};
use opcat::gract::generating_homs;
use opcat::koszul::{resolution_grop, resolution_lie};
use opcat::liemod::{lie_algebra_module, regular_module, representable_module, sl2, validate};
use opcat::operads::{expand_left_normed, lie_basis_words, lie_coordinates, OpElem, OperadId};
use opcat::propcat::{hom_space, AssBasisElem};

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
}

fn small_matrix() -> impl Strategy<Value = SparseMat> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, c), r).prop_map(|rows| SparseMat::from_dense_i64(&rows))
    })
}

/// A basis morphism of `Cat Ass^u(m, n)` by index.
fn assu(m: usize, n: usize, k: usize) -> AssBasisElem {
    let h = hom_space(OperadId::AssU, m, n);
    h.elem(k % h.dim()).clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_is_multiplicative((a, b) in (1usize..7).prop_flat_map(|n| (perm(n), perm(n)))) {
        prop_assert_eq!(perm_sign(&a.compose(&b)), perm_sign(&a) * perm_sign(&b));
        prop_assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn rank_nullity(m in small_matrix()) {
        let r = rank(&m);
        prop_assert_eq!(r + kernel_basis(&m).dim(), m.ncols());
        prop_assert_eq!(r, rank(&m.transpose()));
        for v in kernel_basis(&m).basis() {
            prop_assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn assu_composition_is_associative(m in 0usize..4, n in 1usize..4, p in 1usize..4, q in 1usize..4, i in 0usize..10_000, j in 0usize..10_000, k in 0usize..10_000) {
        let (f, g, h) = (assu(m, n, i), assu(n, p, j), assu(p, q, k));
        prop_assert_eq!(h.compose(&g.compose(&f)), h.compose(&g).compose(&f));
        prop_assert_eq!(AssBasisElem::identity(n).compose(&f), f);
    }

    #[test]
    fn composite_functions_compose(m in 0usize..4, n in 1usize..4, p in 1usize..4, i in 0usize..10_000, j in 0usize..10_000) {
        let (f, g) = (assu(m, n, i), assu(n, p, j));
        prop_assert_eq!(g.compose(&f).function(), g.function().compose(&f.function()));
    }

    #[test]
    fn left_normed_words_have_coordinates(n in 1usize..6, k in 0usize..1_000) {
        let words = lie_basis_words(n);
        let w = &words[k % words.len()];
        let mut e = OpElem::zero(OperadId::Lie, n);
        for (u, c) in expand_left_normed(w) {
            e.add_term(u, c);
        }
        let coords = lie_coordinates(&e).expect("left-normed brackets are Lie");
        for (i, c) in coords.iter().enumerate() {
            prop_assert_eq!(c.clone(), if i == k % words.len() { Scalar::one() } else { Scalar::zero() });
        }
    }

    #[test]
    fn assu_functor_is_contravariant(i in 0usize..10_000, j in 0usize..10_000) {
        let homs = generating_homs(3);
        let phi = &homs[i % homs.len()].hom;
        let composable: Vec<_> = homs.iter().filter(|h| h.hom.target == phi.source).collect();
        prop_assume!(!composable.is_empty());
        let psi = &composable[j % composable.len()].hom;
        for d in 0..=2 {
            let f = AssuFunctor { d };
            prop_assert!(check_contravariance(&f, &[(phi.clone(), psi.clone())]));
        }
    }

    #[test]
    fn koszul_differentials_square_to_zero(d in 1usize..5, t in 0usize..4) {
        let c = resolution_grop(d, t);
        prop_assert!(c.squares_to_zero());
        prop_assert_eq!(c.euler_characteristic(), (t as i64).pow(d as u32));
        let l = resolution_lie(d, t.min(d));
        prop_assert!(l.squares_to_zero());
    }
}

#[test]
fn built_in_modules_validate() {
    for m in [regular_module(2), representable_module(2, 3), lie_algebra_module(&sl2(), 3).unwrap()] {
        assert!(validate(&m).is_empty());
    }
}

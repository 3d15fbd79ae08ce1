//! The contravariant action of free-group homomorphisms on `Cat Ass^u(d, −)`.
//!
//! A basis element of `Cat Ass^u(d, t)` is read as a `t`-tuple of words
//! (fibre `j` in its order). For `φ : F_s → F_t` the word of slot `j` is
//! distributed over the occurrences of `x_j` in the words `φ(x₁), …, φ(x_s)`;
//! an occurrence of `x_j⁻¹` reverses its piece and contributes `(−1)^len`; a
//! slot without occurrences kills any nonempty word. The pieces are then
//! concatenated along each `φ(x_i)` to give fibre `i` of the result.

use std::fmt;
use std::str::FromStr;

use crate::combinat::Perm;
use crate::error::{Error, Result};
use crate::exactlin::{Accum, Scalar, SparseMat, SparseVec};
use crate::operads::OperadId;
use crate::par;
use crate::propcat::{comb_add, hom_space, AssBasisElem, AssComb};

/// A letter `x_gen` or `x_gen⁻¹` (0-based generator index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

/// A word in the free group; not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(pub Vec<Letter>);

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        GroupWord(vec![Letter { gen: i, inv: false }])
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| Letter { gen: l.gen, inv: !l.inv }).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    /// Free reduction.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(p) if p.gen == l.gen && p.inv != l.inv => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        GroupWord(out)
    }

    /// Exponent sum of generator `j`.
    pub fn exponent_sum(&self, j: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == j).map(|l| if l.inv { -1 } else { 1 }).sum()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|l| if l.inv { format!("-{}", l.gen + 1) } else { (l.gen + 1).to_string() }).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A homomorphism `F_s → F_t` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeGroupHom {
    pub source: usize,
    pub target: usize,
    pub words: Vec<GroupWord>,
}

impl FreeGroupHom {
    pub fn new(source: usize, target: usize, words: Vec<GroupWord>) -> Result<Self> {
        if words.len() != source {
            return Err(Error::Input(format!("{} words for a source of rank {source}", words.len())));
        }
        if let Some(l) = words.iter().flat_map(|w| w.0.iter()).find(|l| l.gen >= target) {
            return Err(Error::Input(format!("letter {} outside F_{target}", l.gen + 1)));
        }
        Ok(FreeGroupHom { source, target, words })
    }

    pub fn identity(t: usize) -> Self {
        FreeGroupHom { source: t, target: t, words: (0..t).map(GroupWord::gen).collect() }
    }

    /// `x_i ↦ x_{σ(i)}`.
    pub fn permutation(sigma: &Perm) -> Self {
        let t = sigma.len();
        FreeGroupHom { source: t, target: t, words: (0..t).map(|i| GroupWord::gen(sigma.apply(i))).collect() }
    }

    /// `F_t → F_{t−1}` sending `x_i` to `e` and renumbering the rest.
    pub fn kill(t: usize, i: usize) -> Self {
        let words = (0..t).map(|k| if k == i { GroupWord::empty() } else { GroupWord::gen(if k < i { k } else { k - 1 }) }).collect();
        FreeGroupHom { source: t, target: t - 1, words }
    }

    /// `F_{t−1} → F_t` missing the generator `x_i`.
    pub fn insert(t: usize, i: usize) -> Self {
        let words = (0..t - 1).map(|k| GroupWord::gen(if k < i { k } else { k + 1 })).collect();
        FreeGroupHom { source: t - 1, target: t, words }
    }

    /// `x_i ↦ x_i⁻¹` on `F_t`.
    pub fn inversion(t: usize, i: usize) -> Self {
        let mut h = Self::identity(t);
        h.words[i] = GroupWord::gen(i).inverse();
        h
    }

    /// `F_t → F_{t+1}`, `x₁ ↦ x₁x₂`, `x_i ↦ x_{i+1}` for `i ≥ 2`.
    pub fn multiplication(t: usize) -> Self {
        let mut words = vec![GroupWord::gen(0).concat(&GroupWord::gen(1))];
        words.extend((1..t).map(|k| GroupWord::gen(k + 1)));
        FreeGroupHom { source: t, target: t + 1, words }
    }

    /// `F_{t+1} → F_t`, `x₁, x₂ ↦ x₁`, `x_i ↦ x_{i−1}` for `i ≥ 3`.
    pub fn fold(t: usize) -> Self {
        let mut words = vec![GroupWord::gen(0), GroupWord::gen(0)];
        words.extend((2..t + 1).map(|k| GroupWord::gen(k - 1)));
        FreeGroupHom { source: t + 1, target: t, words }
    }

    /// `F_{kt} → F_t` sending the `j`-th generator of each block of `t` to `x_j`.
    pub fn iterated_fold(t: usize, k: usize) -> Self {
        FreeGroupHom { source: k * t, target: t, words: (0..k * t).map(|i| GroupWord::gen(i % t)).collect() }
    }

    /// `F_t → F_{t−k}` sending the listed generators to `e` and renumbering the rest.
    pub fn kill_many(t: usize, killed: &[usize]) -> Self {
        let mut next = 0;
        let words = (0..t)
            .map(|i| {
                if killed.contains(&i) {
                    GroupWord::empty()
                } else {
                    next += 1;
                    GroupWord::gen(next - 1)
                }
            })
            .collect();
        FreeGroupHom { source: t, target: t - killed.len(), words }
    }

    /// `x₁ ↦ x₁x₂` on `F_t`.
    pub fn transvection(t: usize) -> Self {
        let mut h = Self::identity(t);
        h.words[0] = GroupWord::gen(0).concat(&GroupWord::gen(1));
        h
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeGroupHom) -> FreeGroupHom {
        assert_eq!(other.target, self.source, "homomorphisms are not composable");
        let words = other
            .words
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                for l in &w.0 {
                    let img = &self.words[l.gen];
                    if l.inv {
                        out.extend(img.inverse().0);
                    } else {
                        out.extend(img.0.iter().copied());
                    }
                }
                GroupWord(out)
            })
            .collect();
        FreeGroupHom { source: other.source, target: self.target, words }
    }

    /// Exponent-sum matrix, `s × t`: the map `𝕜^t → 𝕜^s` induced on `Hom(−, 𝕜)`.
    pub fn abelianization(&self) -> SparseMat {
        let trip = (0..self.source)
            .flat_map(|i| (0..self.target).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let e = self.words[i].exponent_sum(j);
                (e != 0).then(|| (i, j, Scalar::from_i64(e)))
            });
        SparseMat::from_triplets(self.source, self.target, trip)
    }
}

impl fmt::Display for FreeGroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.source, self.target)?;
        for w in &self.words {
            write!(f, " ; {w}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeGroupHom {
    type Err = Error;

    /// `s t ; w_1 ; … ; w_s` with words such as `1 -2 1`; `e` or nothing is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(';');
        let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
        let [src, tgt] = head[..] else {
            return Err(Error::Input(format!("expected `s t` before the first `;` in {s:?}")));
        };
        let parse_n = |x: &str| x.parse::<usize>().map_err(|_| Error::Input(format!("bad rank {x:?}")));
        let (source, target) = (parse_n(src)?, parse_n(tgt)?);
        let mut words = Vec::new();
        for w in parts {
            let mut letters = Vec::new();
            for tok in w.split_whitespace() {
                if tok == "e" {
                    continue;
                }
                let v: i64 = tok.parse().map_err(|_| Error::Input(format!("bad letter {tok:?}")))?;
                if v == 0 {
                    return Err(Error::Input("letters are 1-based".into()));
                }
                letters.push(Letter { gen: v.unsigned_abs() as usize - 1, inv: v < 0 });
            }
            words.push(GroupWord(letters));
        }
        if source == 0 && words.len() == 1 && words[0].0.is_empty() {
            words.clear();
        }
        FreeGroupHom::new(source, target, words)
    }
}

/// All ways to hand the letters of `word` to `k` ordered recipients, each getting a subsequence.
fn distribute<T: Clone>(word: &[T], k: usize) -> Vec<Vec<Vec<T>>> {
    let mut out = vec![vec![Vec::new(); k]];
    for a in word {
        let mut next = Vec::with_capacity(out.len() * k);
        for d in &out {
            for r in 0..k {
                let mut e = d.clone();
                e[r].push(a.clone());
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// The word calculus behind `φ^*`: `slots[j]` is the word attached to `x_j`.
/// Its letters are handed out to the occurrences of `x_j` in the words of `φ`;
/// an inverse occurrence reverses its piece and contributes `(−1)^{len}`.
/// A nonempty slot whose generator does not occur kills the term. Returns one
/// word per source generator, with coefficients (terms are not collected).
pub fn act_words<T: Clone>(phi: &FreeGroupHom, slots: &[Vec<T>]) -> Vec<(Vec<Vec<T>>, Scalar)> {
    assert_eq!(slots.len(), phi.target, "one slot per target generator");
    let t = phi.target;
    // Occurrences of each generator: (word index, position, inverse).
    let mut occ: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); t];
    for (i, w) in phi.words.iter().enumerate() {
        for (p, l) in w.0.iter().enumerate() {
            occ[l.gen].push((i, p, l.inv));
        }
    }
    let empty: Vec<Vec<Vec<T>>> = phi.words.iter().map(|w| vec![Vec::new(); w.0.len()]).collect();
    let mut partial: Vec<(Vec<Vec<Vec<T>>>, Scalar)> = vec![(empty, Scalar::one())];
    for j in 0..t {
        let word = &slots[j];
        if occ[j].is_empty() {
            if word.is_empty() {
                continue;
            }
            return Vec::new();
        }
        let ways = distribute(word, occ[j].len());
        let mut next = Vec::with_capacity(partial.len() * ways.len());
        for (pieces, c) in &partial {
            for way in &ways {
                let mut np = pieces.clone();
                let mut sign = false;
                for (r, &(i, p, inv)) in occ[j].iter().enumerate() {
                    let mut piece = way[r].clone();
                    if inv {
                        piece.reverse();
                        sign ^= piece.len() % 2 == 1;
                    }
                    np[i][p] = piece;
                }
                next.push((np, if sign { -c } else { c.clone() }));
            }
        }
        partial = next;
    }
    partial.into_iter().map(|(pieces, c)| (pieces.into_iter().map(|ps| ps.into_iter().flatten().collect()).collect(), c)).collect()
}

/// `φ^*(x)` for `φ : F_s → F_t` and `x ∈ Cat Ass^u(d, t)`, as a combination in `Cat Ass^u(d, s)`.
pub fn act(phi: &FreeGroupHom, x: &AssBasisElem) -> AssComb {
    assert_eq!(x.codomain(), phi.target, "element is not in Cat Ass^u(d, t)");
    let mut out = AssComb::new();
    for (fibres, c) in act_words(phi, &x.fibres()) {
        let b = AssBasisElem::from_fibres(&fibres).expect("pieces partition the letters");
        comb_add(&mut out, b, c);
    }
    out
}

/// Matrix of `φ^* : Cat Ass^u(d, t) → Cat Ass^u(d, s)`.
pub fn value_matrix(d: usize, phi: &FreeGroupHom) -> SparseMat {
    let src = hom_space(OperadId::AssU, d, phi.target);
    let dst = hom_space(OperadId::AssU, d, phi.source);
    let cols = par::map(src.basis(), |b| dst.coords(&act(phi, b)).expect("result lies in Cat Ass^u"));
    SparseMat::from_columns(dst.dim(), cols)
}

/// Applies `φ^*` to a vector of `Cat Ass^u(d, t)`.
pub fn act_vec(d: usize, phi: &FreeGroupHom, v: &[(usize, Scalar)]) -> SparseVec {
    let src = hom_space(OperadId::AssU, d, phi.target);
    let dst = hom_space(OperadId::AssU, d, phi.source);
    let mut acc = Accum::new();
    for (i, x) in v {
        let img = dst.coords(&act(phi, src.elem(*i))).expect("result lies in Cat Ass^u");
        acc.add_vec(&img, x);
    }
    acc.into_sparse()
}

/// A named generating homomorphism.
#[derive(Clone, Debug)]
pub struct NamedHom {
    pub name: String,
    pub hom: FreeGroupHom,
}

/// Generating homomorphisms with source and target ranks at most `bound`:
/// adjacent transpositions, inversions, generator kills and insertions,
/// multiplication, fold and the transvection `x₁ ↦ x₁x₂`.
pub fn generating_homs(bound: usize) -> Vec<NamedHom> {
    let mut out = Vec::new();
    let mut push = |name: String, hom: FreeGroupHom| out.push(NamedHom { name, hom });
    for t in 0..=bound {
        for i in 0..t.saturating_sub(1) {
            push(format!("swap{}@{t}", i + 1), FreeGroupHom::permutation(&Perm::adjacent(t, i)));
        }
        for i in 0..t {
            push(format!("inv{}@{t}", i + 1), FreeGroupHom::inversion(t, i));
        }
        if t >= 1 {
            for i in 0..t {
                push(format!("kill{}@{t}", i + 1), FreeGroupHom::kill(t, i));
                push(format!("insert{}@{t}", i + 1), FreeGroupHom::insert(t, i));
            }
        }
        if t >= 1 && t < bound {
            push(format!("mult@{t}"), FreeGroupHom::multiplication(t));
            push(format!("fold@{t}"), FreeGroupHom::fold(t));
        }
        if t >= 2 {
            push(format!("transvection@{t}"), FreeGroupHom::transvection(t));
        }
    }
    out
}

/// Checks `φ^*(x ∘ λ) = φ^*(x) ∘ λ` for every `Cat Lie(d, e)` basis morphism `λ`,
/// every `x ∈ Cat Ass^u(e, t)` and every generating `φ` with target `F_t`.
pub fn right_lie_compatibility_check(d: usize, e: usize, t: usize) -> bool {
    let lie = hom_space(OperadId::Lie, d, e);
    let ass = hom_space(OperadId::AssU, e, t);
    let homs: Vec<FreeGroupHom> = generating_homs(t + 1).into_iter().map(|h| h.hom).filter(|h| h.target == t).collect();
    let lams: Vec<AssComb> = (0..lie.dim()).map(|i| lie.expand(i)).collect();
    let cases: Vec<(usize, usize)> = (0..homs.len()).flat_map(|h| (0..ass.dim()).map(move |x| (h, x))).collect();
    par::all(&cases, |&(h, x)| {
        let phi = &homs[h];
        let xb = ass.elem(x);
        let ax = act(phi, xb);
        lams.iter().all(|lam| {
            let mut lhs = AssComb::new();
            for (b, c) in lam {
                for (r, y) in act(phi, &xb.compose(b)) {
                    comb_add(&mut lhs, r, y * c);
                }
            }
            let mut rhs = AssComb::new();
            for (a, c) in &ax {
                for (b, y) in lam {
                    comb_add(&mut rhs, a.compose(b), c * y);
                }
            }
            lhs == rhs
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> FreeGroupHom {
        s.parse().unwrap()
    }

    fn e(fibres: &[&[usize]]) -> AssBasisElem {
        AssBasisElem::from_fibres(&fibres.iter().map(|f| f.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn parsing_round_trips() {
        let phi = h("2 3 ; 1 -2 1 ; e");
        assert_eq!(phi.words[0].0.len(), 3);
        assert!(phi.words[1].0.is_empty());
        assert_eq!(phi.to_string().parse::<FreeGroupHom>().unwrap(), phi);
        assert!("2 1 ; 1 ; 2".parse::<FreeGroupHom>().is_err());
        assert!("1 1 ; 0".parse::<FreeGroupHom>().is_err());
        assert_eq!(h("0 2").source, 0);
    }

    #[test]
    fn appendix_generators() {
        // Killing a generator annihilates elements with a nonempty fibre there.
        let x = e(&[&[0], &[1]]);
        assert!(act(&FreeGroupHom::insert(2, 0), &x).is_empty());
        let c = act(&FreeGroupHom::inversion(2, 1), &e(&[&[], &[0, 2, 1]]));
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![(e(&[&[], &[1, 2, 0]]), Scalar::from_i64(-1))]);
        let m = act(&FreeGroupHom::multiplication(1), &e(&[&[2, 0], &[1]]));
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(e(&[&[2, 0, 1]]), Scalar::one())]);
        let f = act(&FreeGroupHom::fold(1), &e(&[&[1, 0]]));
        assert_eq!(f.len(), 4);
        assert_eq!(f.get(&e(&[&[1], &[0]])), Some(&Scalar::one()));
        assert_eq!(f.get(&e(&[&[], &[1, 0]])), Some(&Scalar::one()));
    }

    #[test]
    fn contravariance() {
        let phi = h("2 3 ; 1 -2 ; 3 1");
        let psi = h("3 2 ; 2 ; 1 -2 ; e");
        for d in 0..4 {
            let lhs = value_matrix(d, &phi.compose(&psi));
            let rhs = value_matrix(d, &psi).mul(&value_matrix(d, &phi));
            assert_eq!(lhs, rhs, "d = {d}");
        }
        assert_eq!(value_matrix(3, &FreeGroupHom::identity(2)), SparseMat::identity(24));
    }

    #[test]
    fn reduction_invariance() {
        let phi = h("2 2 ; 1 2 -2 ; -1 1 2");
        let red = FreeGroupHom { words: phi.words.iter().map(GroupWord::reduced).collect(), ..phi.clone() };
        for d in 0..4 {
            assert_eq!(value_matrix(d, &phi), value_matrix(d, &red));
        }
    }

    #[test]
    fn degree_one_is_abelianization() {
        let phi = h("3 2 ; 1 -2 1 ; e ; -2 -2 1");
        assert_eq!(value_matrix(1, &phi), phi.abelianization());
    }

    #[test]
    fn lie_compatibility() {
        assert!(right_lie_compatibility_check(2, 2, 2));
        assert!(right_lie_compatibility_check(2, 1, 2));
        assert!(right_lie_compatibility_check(3, 2, 2));
    }
}

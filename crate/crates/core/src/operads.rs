//! Arity spaces and composition for the operads `I`, `Lie`, `Com`, `Com^u` and
//! `Ass^u`. Lie elements live inside the multilinear associative span.

use std::collections::BTreeMap;
use std::fmt;

use crate::combinat::{all_perms, Perm};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperadId {
    Unit,
    Lie,
    Com,
    ComU,
    AssU,
}

impl OperadId {
    pub fn is_reduced(self) -> bool {
        matches!(self, OperadId::Unit | OperadId::Lie | OperadId::Com)
    }

    /// `dim 𝒪(n)`.
    pub fn arity_dim(self, n: usize) -> u64 {
        match self {
            OperadId::Unit => (n == 1) as u64,
            OperadId::Lie => {
                if n == 0 {
                    0
                } else {
                    crate::combinat::factorial(n - 1)
                }
            }
            OperadId::Com => (n >= 1) as u64,
            OperadId::ComU => 1,
            OperadId::AssU => crate::combinat::factorial(n),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unit" | "i" => Some(OperadId::Unit),
            "lie" => Some(OperadId::Lie),
            "com" => Some(OperadId::Com),
            "comu" => Some(OperadId::ComU),
            "assu" | "ass" => Some(OperadId::AssU),
            _ => None,
        }
    }
}

impl fmt::Display for OperadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OperadId::Unit => "I",
            OperadId::Lie => "Lie",
            OperadId::Com => "Com",
            OperadId::ComU => "ComU",
            OperadId::AssU => "AssU",
        };
        f.write_str(s)
    }
}

/// A multilinear word `x_{w₀} x_{w₁} ⋯` in the letters `0..n`.
pub type AssWord = Vec<usize>;

/// A linear combination of multilinear words of a fixed arity.
///
/// For `Com`, `Com^u` and `I` the only basis key is the increasing word.
#[derive(Clone, PartialEq, Eq)]
pub struct OpElem {
    pub operad: OperadId,
    pub arity: usize,
    pub terms: BTreeMap<AssWord, Scalar>,
}

impl OpElem {
    pub fn zero(operad: OperadId, arity: usize) -> Self {
        OpElem { operad, arity, terms: BTreeMap::new() }
    }

    /// The single basis element of a one-dimensional arity space, or the word itself for `Ass^u`.
    pub fn word(operad: OperadId, word: AssWord) -> Self {
        let arity = word.len();
        let mut terms = BTreeMap::new();
        terms.insert(word, Scalar::one());
        OpElem { operad, arity, terms }
    }

    /// The unit in arity 1.
    pub fn unit(operad: OperadId) -> Self {
        Self::word(operad, vec![0])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: AssWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = OpElem::zero(self.operad, self.arity);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn plus(&self, other: &OpElem) -> Self {
        let mut out = self.clone();
        for (w, x) in &other.terms {
            out.add_term(w.clone(), x.clone());
        }
        out
    }

    /// Right action of `σ` by relabelling letters: letter `a` becomes `σ(a)`.
    pub fn relabel(&self, sigma: &Perm) -> Self {
        let mut out = OpElem::zero(self.operad, self.arity);
        for (w, x) in &self.terms {
            let nw: Vec<usize> = w.iter().map(|&a| sigma.apply(a)).collect();
            out.add_term(self.canonical_key(nw), x.clone());
        }
        out
    }

    fn canonical_key(&self, mut w: AssWord) -> AssWord {
        if !matches!(self.operad, OperadId::AssU | OperadId::Lie) {
            w.sort_unstable();
        }
        w
    }
}

impl fmt::Debug for OpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: String = w.iter().map(|a| format!("x{}", a + 1)).collect();
                format!("{c}·{word}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Expansion of the left-normed bracket `[[x_{w₀}, x_{w₁}], …, x_{w_k}]` as signed words.
pub fn expand_left_normed(word: &[usize]) -> Vec<(Vec<usize>, Scalar)> {
    let Some((&first, rest)) = word.split_first() else {
        return Vec::new();
    };
    let mut cur: Vec<(Vec<usize>, Scalar)> = vec![(vec![first], Scalar::one())];
    for &a in rest {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for (u, c) in cur {
            let mut left = u.clone();
            left.push(a);
            let mut right = Vec::with_capacity(u.len() + 1);
            right.push(a);
            right.extend_from_slice(&u);
            next.push((left, c.clone()));
            next.push((right, -c));
        }
        cur = next;
    }
    cur
}

/// Left-normed Lie basis of arity `n`: `[x₁, x_{σ(2)}, …, x_{σ(n)}]` for σ permuting `2..n`.
pub fn lie_basis(n: usize) -> Vec<OpElem> {
    lie_basis_words(n)
        .into_iter()
        .map(|w| {
            let mut e = OpElem::zero(OperadId::Lie, n);
            for (u, c) in expand_left_normed(&w) {
                e.add_term(u, c);
            }
            e
        })
        .collect()
}

/// Leading words of [`lie_basis`]: words on `0..n` starting with `0`.
pub fn lie_basis_words(n: usize) -> Vec<AssWord> {
    if n == 0 {
        return Vec::new();
    }
    all_perms(n - 1)
        .into_iter()
        .map(|p| {
            let mut w = vec![0];
            w.extend(p.images().iter().map(|x| x + 1));
            w
        })
        .collect()
}

/// Coordinates of a Lie element in [`lie_basis`], or `None` if it is not a Lie element.
///
/// In the expansion of `[x₀, a₁, …, a_k]` the only word starting with `x₀` is
/// `x₀a₁⋯a_k`, so the coordinates are the coefficients of words starting with `x₀`.
pub fn lie_coordinates(e: &OpElem) -> Option<Vec<Scalar>> {
    let n = e.arity;
    let words = lie_basis_words(n);
    let coords: Vec<Scalar> = words.iter().map(|w| e.terms.get(w).cloned().unwrap_or_else(Scalar::zero)).collect();
    let mut rebuilt = OpElem::zero(OperadId::Lie, n);
    for (w, c) in words.iter().zip(&coords) {
        if c.is_zero() {
            continue;
        }
        for (u, s) in expand_left_normed(w) {
            rebuilt.add_term(u, s * c);
        }
    }
    (rebuilt.terms == e.terms).then_some(coords)
}

/// A binary bracket expression on distinct letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracket {
    Leaf(usize),
    Node(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn leaf(a: usize) -> Self {
        Bracket::Leaf(a)
    }

    pub fn node(l: Bracket, r: Bracket) -> Self {
        Bracket::Node(Box::new(l), Box::new(r))
    }

    fn letters(&self, out: &mut Vec<usize>) {
        match self {
            Bracket::Leaf(a) => out.push(*a),
            Bracket::Node(l, r) => {
                l.letters(out);
                r.letters(out);
            }
        }
    }

    fn expand(&self) -> Vec<(Vec<usize>, Scalar)> {
        match self {
            Bracket::Leaf(a) => vec![(vec![*a], Scalar::one())],
            Bracket::Node(l, r) => {
                let (el, er) = (l.expand(), r.expand());
                let mut out = Vec::with_capacity(2 * el.len() * er.len());
                for (u, a) in &el {
                    for (v, b) in &er {
                        let c = a * b;
                        let mut uv = u.clone();
                        uv.extend_from_slice(v);
                        let mut vu = v.clone();
                        vu.extend_from_slice(u);
                        out.push((uv, c.clone()));
                        out.push((vu, -c));
                    }
                }
                out
            }
        }
    }
}

/// Full commutator expansion of a bracket whose letters are exactly `0..n`.
pub fn expand_bracket(tree: &Bracket) -> Result<OpElem> {
    let mut ls = Vec::new();
    tree.letters(&mut ls);
    let n = ls.len();
    let mut seen = vec![false; n];
    for &a in &ls {
        if a >= n || seen[a] {
            return Err(Error::Input(format!("bracket letters {ls:?} are not a multilinear set 0..{n}")));
        }
        seen[a] = true;
    }
    let mut e = OpElem::zero(OperadId::Lie, n);
    for (w, c) in tree.expand() {
        e.add_term(w, c);
    }
    Ok(e)
}

/// Operadic composition `outer ∘ (inners₀, …, inners_{n−1})`.
///
/// `Ass^u` outer with `Lie` inners is allowed and yields an `Ass^u` element.
pub fn operad_compose(outer: &OpElem, inners: &[OpElem]) -> Result<OpElem> {
    if inners.len() != outer.arity {
        return Err(Error::Arity(format!("outer arity {} with {} inputs", outer.arity, inners.len())));
    }
    let mixed = outer.operad == OperadId::AssU && inners.iter().all(|i| matches!(i.operad, OperadId::Lie | OperadId::AssU));
    if !mixed && inners.iter().any(|i| i.operad != outer.operad) {
        return Err(Error::Arity("operads of the composed elements differ".into()));
    }
    let ks: Vec<usize> = inners.iter().map(|i| i.arity).collect();
    let mut offs = vec![0; ks.len() + 1];
    for i in 0..ks.len() {
        offs[i + 1] = offs[i] + ks[i];
    }
    let total = offs[ks.len()];
    let mut out = OpElem::zero(outer.operad, total);
    for (w, c) in &outer.terms {
        // Distribute over the terms of each inner element.
        let mut partial: Vec<(Vec<Vec<usize>>, Scalar)> = vec![(vec![Vec::new(); ks.len()], c.clone())];
        for (j, inner) in inners.iter().enumerate() {
            let mut next = Vec::new();
            for (slots, x) in &partial {
                for (u, y) in &inner.terms {
                    let mut s = slots.clone();
                    s[j] = u.iter().map(|a| a + offs[j]).collect();
                    next.push((s, x * y));
                }
            }
            partial = next;
        }
        for (slots, x) in partial {
            let word: Vec<usize> = w.iter().flat_map(|&j| slots[j].iter().copied()).collect();
            let word = out.canonical_key(word);
            out.add_term(word, x);
        }
    }
    if out.operad == OperadId::Lie && lie_coordinates(&out).is_none() {
        return Err(Error::Invariant("Lie composite left the Lie subspace".into()));
    }
    Ok(out)
}

/// Product over fibres of the sign of the permutation `p` induces on that fibre.
///
/// The fibres are consecutive blocks of positions of sizes `fibre_sizes`; `p`
/// must preserve each block.
pub fn suspension_sign_action(p: &Perm, fibre_sizes: &[usize]) -> Result<Scalar> {
    let mut start = 0;
    let mut sign = Scalar::one();
    for &k in fibre_sizes {
        let block: Vec<usize> = (start..start + k).map(|i| p.apply(i)).collect();
        if block.iter().any(|&x| x < start || x >= start + k) {
            return Err(Error::Input("permutation mixes fibres".into()));
        }
        sign = sign * crate::combinat::sequence_sign(&block);
        start += k;
    }
    if start != p.len() {
        return Err(Error::Arity("fibre sizes do not add up to the degree".into()));
    }
    Ok(sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(e: &OpElem) -> Vec<(Vec<usize>, i64)> {
        e.terms.iter().map(|(w, c)| (w.clone(), c.to_i64().unwrap())).collect()
    }

    #[test]
    fn small_lie_bases() {
        assert!(lie_basis(0).is_empty());
        assert_eq!(w(&lie_basis(1)[0]), vec![(vec![0], 1)]);
        assert_eq!(w(&lie_basis(2)[0]), vec![(vec![0, 1], 1), (vec![1, 0], -1)]);
        assert_eq!(lie_basis(3).len(), 2);
    }

    #[test]
    fn brackets() {
        let b = |a, c| Bracket::node(Bracket::leaf(a), Bracket::leaf(c));
        assert_eq!(w(&expand_bracket(&b(0, 1)).unwrap()), vec![(vec![0, 1], 1), (vec![1, 0], -1)]);
        assert_eq!(expand_bracket(&b(1, 0)).unwrap(), expand_bracket(&b(0, 1)).unwrap().scaled(&Scalar::from_i64(-1)));
        let j1 = expand_bracket(&Bracket::node(b(0, 1), Bracket::leaf(2))).unwrap();
        let j2 = expand_bracket(&Bracket::node(b(1, 2), Bracket::leaf(0))).unwrap();
        let j3 = expand_bracket(&Bracket::node(b(2, 0), Bracket::leaf(1))).unwrap();
        assert!(j1.plus(&j2).plus(&j3).is_zero());
        assert!(expand_bracket(&b(0, 0)).is_err());
    }

    #[test]
    fn compositions() {
        let x12 = OpElem::word(OperadId::AssU, vec![0, 1]);
        let x1 = OpElem::unit(OperadId::AssU);
        let r = operad_compose(&x12, &[x1, x12.clone()]).unwrap();
        assert_eq!(r, OpElem::word(OperadId::AssU, vec![0, 1, 2]));
        let br = lie_basis(2)[0].clone();
        let u = OpElem::unit(OperadId::Lie);
        assert_eq!(operad_compose(&br, &[u.clone(), u.clone()]).unwrap(), br);
        let r = operad_compose(&br, &[br.clone(), u]).unwrap();
        assert_eq!(r, lie_basis(3)[0]);
        assert!(operad_compose(&br, &[br.clone()]).is_err());
    }

    #[test]
    fn suspension_signs() {
        assert_eq!(suspension_sign_action(&Perm::identity(3), &[3]).unwrap(), Scalar::one());
        assert_eq!(suspension_sign_action(&Perm::adjacent(2, 0), &[2]).unwrap(), Scalar::from_i64(-1));
        let c = Perm::new(vec![1, 2, 0]).unwrap();
        assert_eq!(suspension_sign_action(&c, &[3]).unwrap(), Scalar::one());
        assert!(suspension_sign_action(&Perm::adjacent(2, 0), &[1, 1]).is_err());
    }
}

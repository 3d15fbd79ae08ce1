//! Permutations, finite maps, surjections, fibre orders, shuffles and set
//! partitions, with their signs. Everything is 0-based internally; text output
//! is 1-based.

use std::fmt;

use crate::exactlin::Scalar;
use crate::error::{Error, Result};

/// A bijection of `{0, …, n−1}`, `i ↦ images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Input(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    /// The transposition exchanging `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Perm { images }
    }

    /// The adjacent transposition `s_i = (i, i+1)`.
    pub fn adjacent(n: usize, i: usize) -> Self {
        Self::transposition(n, i, i + 1)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "permutations of different degree");
        Perm { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn sign(&self) -> i32 {
        if inversions(&self.images).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn num_cycles(&self) -> usize {
        self.cycle_type().len()
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Indices `[k₁, …, k_l]` with `self = s_{k₁} ∘ ⋯ ∘ s_{k_l}`, `l` the number of inversions.
    pub fn reduced_word(&self) -> Vec<usize> {
        // Bubble sort the image list; each swap of positions (j, j+1) is a right factor.
        let mut w = self.images.clone();
        let mut right = Vec::new();
        let n = w.len();
        for i in 0..n {
            for j in 0..n.saturating_sub(i + 1) {
                if w[j] > w[j + 1] {
                    w.swap(j, j + 1);
                    right.push(j);
                }
            }
        }
        // self ∘ s_{r1} ∘ … ∘ s_{rl} = id, so self = s_{rl} ∘ … ∘ s_{r1}.
        right.reverse();
        right
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", v.join(" "))
    }
}

/// Number of inversions of a sequence of distinct keys.
pub fn inversions<T: Ord>(seq: &[T]) -> usize {
    let mut c = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                c += 1;
            }
        }
    }
    c
}

/// Sign of the permutation sorting a sequence of distinct keys.
pub fn sequence_sign<T: Ord>(seq: &[T]) -> Scalar {
    Scalar::sign_of_parity(inversions(seq))
}

pub fn perm_sign(p: &Perm) -> Scalar {
    Scalar::from_i64(p.sign() as i64)
}

/// Koszul sign of listing graded objects in the order `order` (a rearrangement of
/// `0..degrees.len()`), relative to the order `0, 1, …`.
pub fn koszul_sign(degrees: &[usize], order: &[usize]) -> Scalar {
    let mut odd_swaps = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] && degrees[order[i]] % 2 == 1 && degrees[order[j]] % 2 == 1 {
                odd_swaps += 1;
            }
        }
    }
    Scalar::sign_of_parity(odd_swaps)
}

/// All permutations of `{0..n}` in lexicographic order of image lists.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm { images: cur.clone() });
        if !next_permutation(&mut cur) {
            break;
        }
    }
    out
}

/// Advances `v` to the next permutation in lexicographic order.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All orderings of `items` in lexicographic order.
pub fn orderings(items: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// A function `{0..m} → {0..n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteMap {
    codomain: usize,
    images: Vec<usize>,
}

impl FiniteMap {
    pub fn new(codomain: usize, images: Vec<usize>) -> Result<Self> {
        if let Some(&x) = images.iter().find(|&&x| x >= codomain) {
            return Err(Error::Input(format!("image {x} outside codomain of size {codomain}")));
        }
        Ok(FiniteMap { codomain, images })
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain];
        for &x in &self.images {
            hit[x] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// The fibres `f⁻¹(i)`, each listed increasingly.
    pub fn fibres(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.codomain];
        for (a, &x) in self.images.iter().enumerate() {
            out[x].push(a);
        }
        out
    }

    pub fn fibre_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.codomain];
        for &x in &self.images {
            out[x] += 1;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteMap) -> FiniteMap {
        assert_eq!(other.codomain, self.domain(), "maps are not composable");
        FiniteMap { codomain: self.codomain, images: other.images.iter().map(|&x| self.images[x]).collect() }
    }
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "({})→{}", v.join(" "), self.codomain)
    }
}

/// A total order on each fibre of a finite map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FibreOrder {
    pub fibres: Vec<Vec<usize>>,
}

impl FibreOrder {
    /// Checks that the fibres partition `{0..m}`.
    pub fn is_valid(&self, m: usize) -> bool {
        let mut seen = vec![false; m];
        for f in &self.fibres {
            for &a in f {
                if a >= m || seen[a] {
                    return false;
                }
                seen[a] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// All `nᵐ` functions `m → n`, lexicographic in the image list.
pub fn enumerate_functions(m: usize, n: usize) -> Vec<FiniteMap> {
    if n == 0 {
        return if m == 0 { vec![FiniteMap { codomain: 0, images: Vec::new() }] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    loop {
        out.push(FiniteMap { codomain: n, images: cur.clone() });
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < n {
                break;
            }
            cur[k] = 0;
        }
    }
}

pub fn enumerate_surjections(m: usize, n: usize) -> Vec<FiniteMap> {
    if m < n {
        return Vec::new();
    }
    enumerate_functions(m, n).into_iter().filter(FiniteMap::is_surjective).collect()
}

/// All `(p, q)`-shuffles: permutations increasing on `0..p` and on `p..p+q`.
pub fn shuffles(p: usize, q: usize) -> Vec<Perm> {
    subsets_of_size(p + q, p)
        .into_iter()
        .map(|s| {
            let mut images = s.clone();
            images.extend((0..p + q).filter(|x| !s.contains(x)));
            Perm { images }
        })
        .collect()
}

/// All `k`-element subsets of `{0..n}`, each increasing, in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A split of an ordered fibre into two nonempty subsequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Sign of the unshuffle taking the fibre to `a` followed by `b`.
    pub sign: Scalar,
}

/// All unordered splits `{A, B}` of `fibre`, with `A` holding the first element.
pub fn fibre_splits(fibre: &[usize]) -> Vec<Split> {
    ordered_splits(fibre).into_iter().filter(|s| s.a.first() == fibre.first()).collect()
}

/// All ordered splits `(A, B)` of `fibre` into nonempty subsequences.
pub fn ordered_splits(fibre: &[usize]) -> Vec<Split> {
    let k = fibre.len();
    if k < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 1..(1u64 << k) - 1 {
        let (mut a, mut b, mut pa, mut pb) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, &x) in fibre.iter().enumerate() {
            if mask & (1 << i) != 0 {
                a.push(x);
                pa.push(i);
            } else {
                b.push(x);
                pb.push(i);
            }
        }
        pa.extend(pb);
        out.push(Split { a, b, sign: sequence_sign(&pa) });
    }
    out
}

/// All set partitions of `{0..n}`: blocks increasing and ordered by their minima.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    fn rec(x: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if x == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..cur.len() {
            cur[i].push(x);
            rec(x + 1, n, cur, out);
            cur[i].pop();
        }
        cur.push(vec![x]);
        rec(x + 1, n, cur, out);
        cur.pop();
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// All ordered set partitions of `items` into nonempty increasing blocks.
pub fn ordered_set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let relabel = |p: &Vec<Vec<usize>>| -> Vec<Vec<usize>> { p.iter().map(|b| b.iter().map(|&i| sorted[i]).collect()).collect() };
    for p in set_partitions(sorted.len()) {
        for order in orderings(&(0..p.len()).collect::<Vec<_>>()) {
            let q: Vec<Vec<usize>> = order.iter().map(|&i| p[i].clone()).collect();
            out.push(relabel(&q));
        }
    }
    out
}

/// All weak compositions of `total` into `parts` nonnegative parts, lexicographically decreasing.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == parts {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=left).rev() {
            cur.push(x);
            rec(left - x, parts, cur, out);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut cur, &mut out);
    out
}

/// Integer partitions of `n` as decreasing part lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// A permutation with the given cycle type, cycles on consecutive points.
pub fn perm_of_cycle_type(cycle_type: &[usize]) -> Perm {
    let n: usize = cycle_type.iter().sum();
    let mut images: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for &l in cycle_type {
        for i in 0..l {
            images[start + i] = start + (i + 1) % l;
        }
        start += l;
    }
    Perm { images }
}

/// Size of the conjugacy class with the given cycle type.
pub fn class_size(cycle_type: &[usize]) -> u64 {
    let n: usize = cycle_type.iter().sum();
    let mut denom: u64 = 1;
    let mut i = 0;
    while i < cycle_type.len() {
        let l = cycle_type[i];
        let mut mult = 0;
        while i < cycle_type.len() && cycle_type[i] == l {
            mult += 1;
            i += 1;
        }
        denom *= (l as u64).pow(mult as u32) * factorial(mult);
    }
    factorial(n) / denom
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

/// `n(n+1)⋯(n+m−1)`.
pub fn rising_factorial(n: usize, m: usize) -> u64 {
    (0..m).map(|i| (n + i) as u64).product()
}

/// Stirling numbers of the second kind, `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

/// Unsigned Stirling numbers of the first kind, `c(n, k)`.
pub fn stirling1(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            t[i][j] = (i as u64 - 1) * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_counts() {
        assert_eq!(enumerate_functions(0, 3).len(), 1);
        assert_eq!(enumerate_functions(2, 1).len(), 1);
        assert_eq!(enumerate_functions(2, 2).len(), 4);
        assert_eq!(enumerate_functions(2, 0).len(), 0);
        assert_eq!(enumerate_functions(0, 0).len(), 1);
        let f = enumerate_functions(2, 2);
        assert_eq!(f[1].images(), &[0, 1]);
    }

    #[test]
    fn surjection_counts() {
        assert!(enumerate_surjections(2, 3).is_empty());
        assert_eq!(enumerate_surjections(3, 3).len(), 6);
        assert_eq!(enumerate_surjections(3, 2).len(), 6);
        assert_eq!(enumerate_surjections(0, 0).len(), 1);
    }

    #[test]
    fn signs() {
        assert_eq!(Perm::identity(3).sign(), 1);
        assert_eq!(Perm::adjacent(2, 0).sign(), -1);
        assert_eq!(Perm::new(vec![1, 2, 0]).unwrap().sign(), 1);
        assert!(Perm::new(vec![0, 0]).is_err());
    }

    #[test]
    fn reduced_words_recompose() {
        for p in all_perms(4) {
            let w = p.reduced_word();
            let mut acc = Perm::identity(4);
            for &k in &w {
                acc = acc.compose(&Perm::adjacent(4, k));
            }
            assert_eq!(acc, p);
            assert_eq!(w.len(), inversions(p.images()));
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(0, 3), vec![Perm::identity(3)]);
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 2).len(), 6);
    }

    #[test]
    fn splits() {
        assert!(fibre_splits(&[7]).is_empty());
        let s = fibre_splits(&[3, 5]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sign, Scalar::one());
        assert_eq!(fibre_splits(&[0, 1, 2]).len(), 3);
        assert_eq!(ordered_splits(&[0, 1, 2]).len(), 6);
        let s = ordered_splits(&[0, 1]);
        let ba = s.iter().find(|x| x.a == vec![1]).unwrap();
        assert_eq!(ba.sign, Scalar::from_i64(-1));
    }

    #[test]
    fn counting_functions() {
        assert_eq!(stirling2(5, 2), 15);
        assert_eq!(stirling1(4, 2), 11);
        assert_eq!(rising_factorial(2, 3), 24);
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(ordered_set_partitions(&[0, 1, 2]).len(), 13);
        assert_eq!(weak_compositions(2, 3).len(), 6);
        assert_eq!(weak_compositions(1, 3)[0], vec![1, 0, 0]);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(class_size(&[2, 1, 1]), 6);
        assert_eq!(perm_of_cycle_type(&[3, 1]).cycle_type(), vec![3, 1]);
    }

    #[test]
    fn koszul_signs() {
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]), Scalar::from_i64(-1));
        assert_eq!(koszul_sign(&[1, 2], &[1, 0]), Scalar::one());
    }
}

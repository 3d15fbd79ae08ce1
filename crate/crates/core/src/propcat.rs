//! Hom-spaces `Cat 𝒪(m, n)` with enumerated bases, composition, the
//! Σ-bimodule tensor `⊗_Σ`, and the embedding `Cat Lie ⊆ Cat Ass^u`.
//!
//! Every basis element is stored as an [`AssBasisElem`]: a map `m → n` with a
//! total order on each fibre. For `Com`, `Com^u` and `I` the fibres are kept
//! increasing; for `Lie` the fibres hold the leading word of a left-normed
//! bracket `[x_min, …]`, and the element it stands for is the full expansion.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::combinat::{all_perms, enumerate_functions, enumerate_surjections, orderings, weak_compositions, FibreOrder, FiniteMap, Perm};
use crate::error::{Error, Result};
use crate::exactlin::{quotient_lifts, quotient_map, rank_of_vectors, Accum, Scalar, SparseMat, SparseVec, Subspace};
use crate::operads::{expand_left_normed, OperadId};
use crate::par;

/// A map `m → n` together with a total order on each fibre.
///
/// `letters` is the concatenation of the ordered fibres, `ends[i]` the end
/// offset of fibre `i` inside it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssBasisElem {
    letters: Vec<u8>,
    ends: Vec<u8>,
}

impl AssBasisElem {
    /// Builds the element from its ordered fibres; the letters must be exactly `0..m`.
    pub fn from_fibres(fibres: &[Vec<usize>]) -> Result<Self> {
        let m: usize = fibres.iter().map(Vec::len).sum();
        if !(FibreOrder { fibres: fibres.to_vec() }).is_valid(m) {
            return Err(Error::Input(format!("fibres {fibres:?} do not partition 0..{m}")));
        }
        Ok(Self::from_fibres_unchecked(fibres))
    }

    fn from_fibres_unchecked(fibres: &[Vec<usize>]) -> Self {
        let mut letters = Vec::new();
        let mut ends = Vec::with_capacity(fibres.len());
        for f in fibres {
            letters.extend(f.iter().map(|&a| a as u8));
            ends.push(letters.len() as u8);
        }
        AssBasisElem { letters, ends }
    }

    pub fn identity(n: usize) -> Self {
        AssBasisElem { letters: (0..n as u8).collect(), ends: (1..=n as u8).collect() }
    }

    /// The bijection `a ↦ σ(a)`; fibre `i` is `[σ⁻¹(i)]`.
    pub fn from_perm(sigma: &Perm) -> Self {
        let inv = sigma.inverse();
        AssBasisElem { letters: inv.images().iter().map(|&a| a as u8).collect(), ends: (1..=sigma.len() as u8).collect() }
    }

    pub fn domain(&self) -> usize {
        self.letters.len()
    }

    pub fn codomain(&self) -> usize {
        self.ends.len()
    }

    fn start(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.ends[i - 1] as usize
        }
    }

    pub fn fibre(&self, i: usize) -> &[u8] {
        &self.letters[self.start(i)..self.ends[i] as usize]
    }

    pub fn fibre_len(&self, i: usize) -> usize {
        self.ends[i] as usize - self.start(i)
    }

    pub fn fibres(&self) -> Vec<Vec<usize>> {
        (0..self.codomain()).map(|i| self.fibre(i).iter().map(|&a| a as usize).collect()).collect()
    }

    /// The fibre words read one after another.
    pub fn reading_word(&self) -> &[u8] {
        &self.letters
    }

    pub fn function(&self) -> FiniteMap {
        FiniteMap::new(self.codomain(), self.images()).expect("images in range")
    }

    /// `f(a)` for every letter `a`.
    pub fn images(&self) -> Vec<usize> {
        let mut img = vec![0; self.domain()];
        for i in 0..self.codomain() {
            for &a in self.fibre(i) {
                img[a as usize] = i;
            }
        }
        img
    }

    pub fn fibre_order(&self) -> FibreOrder {
        FibreOrder { fibres: self.fibres() }
    }

    /// `self ∘ f`: fibre `k` is the concatenation, over the middle points of
    /// fibre `k` of `self` in their order, of the fibres of `f`.
    pub fn compose(&self, f: &AssBasisElem) -> AssBasisElem {
        assert_eq!(f.codomain(), self.domain(), "morphisms are not composable");
        let mut letters = Vec::with_capacity(f.domain());
        let mut ends = Vec::with_capacity(self.codomain());
        for k in 0..self.codomain() {
            for &j in self.fibre(k) {
                letters.extend_from_slice(f.fibre(j as usize));
            }
            ends.push(letters.len() as u8);
        }
        AssBasisElem { letters, ends }
    }

    /// `self ∘ σ`: letter `a` becomes `σ⁻¹(a)`.
    pub fn precompose_perm(&self, sigma: &Perm) -> AssBasisElem {
        let inv = sigma.inverse();
        AssBasisElem { letters: self.letters.iter().map(|&a| inv.apply(a as usize) as u8).collect(), ends: self.ends.clone() }
    }

    /// `σ ∘ self`: fibre `i` moves to slot `σ(i)`.
    pub fn postcompose_perm(&self, sigma: &Perm) -> AssBasisElem {
        let inv = sigma.inverse();
        let fibres: Vec<Vec<usize>> = (0..self.codomain()).map(|k| self.fibre(inv.apply(k)).iter().map(|&a| a as usize).collect()).collect();
        Self::from_fibres_unchecked(&fibres)
    }

    /// The same map with every fibre sorted increasingly.
    pub fn sorted_fibres(&self) -> AssBasisElem {
        let mut out = self.clone();
        for i in 0..self.codomain() {
            let (s, e) = (self.start(i), self.ends[i] as usize);
            out.letters[s..e].sort_unstable();
        }
        out
    }

    /// True iff every fibre is nonempty and starts with its least letter.
    pub fn is_leading(&self) -> bool {
        (0..self.codomain()).all(|i| {
            let f = self.fibre(i);
            !f.is_empty() && f.iter().all(|&a| a >= f[0])
        })
    }

    /// Product over the fibres of the left-normed expansions `[x_{w₀}, x_{w₁}, …]`.
    pub fn lie_expansion(&self) -> Vec<(AssBasisElem, Scalar)> {
        let mut acc: Vec<(Vec<Vec<usize>>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for i in 0..self.codomain() {
            let w: Vec<usize> = self.fibre(i).iter().map(|&a| a as usize).collect();
            let terms = expand_left_normed(&w);
            let mut next = Vec::with_capacity(acc.len() * terms.len());
            for (fs, c) in &acc {
                for (u, s) in &terms {
                    let mut nf = fs.clone();
                    nf.push(u.clone());
                    next.push((nf, c * s));
                }
            }
            acc = next;
        }
        acc.into_iter().map(|(fs, c)| (Self::from_fibres_unchecked(&fs), c)).collect()
    }
}

impl fmt::Debug for AssBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AssBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            (0..self.codomain()).map(|i| self.fibre(i).iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", parts.join(" | "))
    }
}

/// A linear combination of basis elements of `Cat Ass^u`.
pub type AssComb = BTreeMap<AssBasisElem, Scalar>;

pub fn comb_add(c: &mut AssComb, b: AssBasisElem, x: Scalar) {
    if x.is_zero() {
        return;
    }
    match c.get_mut(&b) {
        Some(v) => {
            *v += x;
            if v.is_zero() {
                c.remove(&b);
            }
        }
        None => {
            c.insert(b, x);
        }
    }
}

pub fn comb_from_terms(terms: impl IntoIterator<Item = (AssBasisElem, Scalar)>) -> AssComb {
    let mut c = AssComb::new();
    for (b, x) in terms {
        comb_add(&mut c, b, x);
    }
    c
}

/// Bilinear extension of [`AssBasisElem::compose`]: `g ∘ f`.
pub fn compose_comb(g: &AssComb, f: &AssComb) -> AssComb {
    let mut out = AssComb::new();
    for (gb, gx) in g {
        for (fb, fx) in f {
            comb_add(&mut out, gb.compose(fb), gx * fx);
        }
    }
    out
}

/// The hom-space `Cat 𝒪(m, n)` with its basis.
pub struct HomSpace {
    pub operad: OperadId,
    pub m: usize,
    pub n: usize,
    basis: Vec<AssBasisElem>,
    index: HashMap<AssBasisElem, usize>,
}

impl fmt::Debug for HomSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cat {}({}, {}) [dim {}]", self.operad, self.m, self.n, self.dim())
    }
}

type HomCache = Mutex<HashMap<(OperadId, usize, usize), Arc<HomSpace>>>;

fn cache() -> &'static HomCache {
    static CACHE: OnceLock<HomCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cached hom-space `Cat 𝒪(m, n)`.
pub fn hom_space(operad: OperadId, m: usize, n: usize) -> Arc<HomSpace> {
    if let Some(h) = cache().lock().expect("hom cache").get(&(operad, m, n)) {
        return h.clone();
    }
    let built = Arc::new(HomSpace::build(operad, m, n));
    cache().lock().expect("hom cache").entry((operad, m, n)).or_insert(built).clone()
}

fn leading_words(fibre: &[usize]) -> Vec<Vec<usize>> {
    let Some((&first, rest)) = fibre.split_first() else {
        return Vec::new();
    };
    orderings(rest)
        .into_iter()
        .map(|o| {
            let mut w = vec![first];
            w.extend(o);
            w
        })
        .collect()
}

impl HomSpace {
    fn build(operad: OperadId, m: usize, n: usize) -> Self {
        assert!(m < 256 && n < 256, "arity too large");
        let basis: Vec<AssBasisElem> = match operad {
            OperadId::AssU => {
                let perms = all_perms(m);
                let mut out = Vec::new();
                for comp in weak_compositions(m, n) {
                    let mut ends = Vec::with_capacity(n);
                    let mut s = 0;
                    for c in &comp {
                        s += c;
                        ends.push(s as u8);
                    }
                    for p in &perms {
                        out.push(AssBasisElem { letters: p.images().iter().map(|&a| a as u8).collect(), ends: ends.clone() });
                    }
                }
                out
            }
            OperadId::ComU => enumerate_functions(m, n).iter().map(|f| AssBasisElem::from_fibres_unchecked(&f.fibres())).collect(),
            OperadId::Com => enumerate_surjections(m, n).iter().map(|f| AssBasisElem::from_fibres_unchecked(&f.fibres())).collect(),
            OperadId::Unit => {
                if m == n {
                    all_perms(n).iter().map(AssBasisElem::from_perm).collect()
                } else {
                    Vec::new()
                }
            }
            OperadId::Lie => {
                let mut out = Vec::new();
                for f in enumerate_surjections(m, n) {
                    let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
                    for fib in f.fibres() {
                        let ws = leading_words(&fib);
                        acc = acc
                            .into_iter()
                            .flat_map(|p| {
                                ws.iter().map(move |w| {
                                    let mut q = p.clone();
                                    q.push(w.clone());
                                    q
                                })
                            })
                            .collect();
                    }
                    out.extend(acc.iter().map(|fs| AssBasisElem::from_fibres_unchecked(fs)));
                }
                out
            }
        };
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        HomSpace { operad, m, n, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AssBasisElem] {
        &self.basis
    }

    pub fn elem(&self, i: usize) -> &AssBasisElem {
        &self.basis[i]
    }

    pub fn index_of(&self, b: &AssBasisElem) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Basis element `i` written in `Cat Ass^u` coordinates.
    ///
    /// For the commutative operads this is the increasing-fibre representative.
    pub fn expand(&self, i: usize) -> AssComb {
        match self.operad {
            OperadId::Lie => comb_from_terms(self.basis[i].lie_expansion()),
            _ => comb_from_terms([(self.basis[i].clone(), Scalar::one())]),
        }
    }

    pub fn expand_vec(&self, v: &[(usize, Scalar)]) -> AssComb {
        let mut out = AssComb::new();
        for (i, x) in v {
            for (b, y) in self.expand(*i) {
                comb_add(&mut out, b, y * x);
            }
        }
        out
    }

    /// Coordinates of a combination in this basis.
    ///
    /// For `Ass^u` every term must be a basis element. For the commutative
    /// operads fibre orders are forgotten. For `Lie` the coefficients on
    /// leading words are read off and the expansion is checked; `None` means
    /// the combination is not in the subspace.
    pub fn coords(&self, c: &AssComb) -> Option<SparseVec> {
        let mut acc = Accum::new();
        match self.operad {
            OperadId::AssU => {
                for (b, x) in c {
                    acc.add(self.index_of(b)?, x);
                }
            }
            OperadId::Com | OperadId::ComU | OperadId::Unit => {
                for (b, x) in c {
                    acc.add(self.index_of(&b.sorted_fibres())?, x);
                }
            }
            OperadId::Lie => {
                for (b, x) in c {
                    if let Some(i) = self.index_of(b) {
                        acc.add(i, x);
                    }
                }
                let v = acc.into_sparse();
                return (self.expand_vec(&v) == *c).then_some(v);
            }
        }
        Some(acc.into_sparse())
    }

    pub fn index_of_perm(&self, sigma: &Perm) -> Option<usize> {
        self.index_of(&AssBasisElem::from_perm(sigma))
    }
}

/// `g ∘ f` for vectors in `Cat 𝒪(n, p)` and `Cat 𝒪(m, n)`, in `Cat 𝒪(m, p)` coordinates.
pub fn compose(operad: OperadId, m: usize, n: usize, p: usize, g: &[(usize, Scalar)], f: &[(usize, Scalar)]) -> Result<SparseVec> {
    let (hg, hf, hr) = (hom_space(operad, n, p), hom_space(operad, m, n), hom_space(operad, m, p));
    if g.iter().any(|(i, _)| *i >= hg.dim()) || f.iter().any(|(i, _)| *i >= hf.dim()) {
        return Err(Error::Arity(format!("vectors do not lie in Cat {operad}({n},{p}) and Cat {operad}({m},{n})")));
    }
    let out = compose_comb(&hg.expand_vec(g), &hf.expand_vec(f));
    hr.coords(&out).ok_or_else(|| Error::Invariant(format!("composite left Cat {operad}({m},{p})")))
}

/// Inclusion `Cat Lie(m, n) → Cat Ass^u(m, n)` as a matrix.
pub fn catlie_subspace(m: usize, n: usize) -> SparseMat {
    let lie = hom_space(OperadId::Lie, m, n);
    let ass = hom_space(OperadId::AssU, m, n);
    let cols = par::map_range(lie.dim(), |i| ass.coords(&lie.expand(i)).expect("expansion lies in Ass^u"));
    SparseMat::from_columns(ass.dim(), cols)
}

/// A family `B(m, n)` of spaces with commuting actions of `𝔖_m` (on the right,
/// by precomposition) and `𝔖_n` (on the left, by postcomposition).
pub trait BimoduleFamily: Sync {
    fn dim(&self, m: usize, n: usize) -> usize;
    /// `b_i ∘ σ` for `σ ∈ 𝔖_m`.
    fn act_right(&self, m: usize, n: usize, i: usize, sigma: &Perm) -> SparseVec;
    /// `σ ∘ b_i` for `σ ∈ 𝔖_n`.
    fn act_left(&self, m: usize, n: usize, sigma: &Perm, i: usize) -> SparseVec;
}

/// The hom-spaces of one operad as a bimodule family.
#[derive(Clone, Copy, Debug)]
pub struct HomFamily(pub OperadId);

impl BimoduleFamily for HomFamily {
    fn dim(&self, m: usize, n: usize) -> usize {
        hom_space(self.0, m, n).dim()
    }

    fn act_right(&self, m: usize, n: usize, i: usize, sigma: &Perm) -> SparseVec {
        let h = hom_space(self.0, m, n);
        let mut c = AssComb::new();
        for (b, x) in h.expand(i) {
            comb_add(&mut c, b.precompose_perm(sigma), x);
        }
        h.coords(&c).expect("precomposition by a permutation stays in the space")
    }

    fn act_left(&self, m: usize, n: usize, sigma: &Perm, i: usize) -> SparseVec {
        let h = hom_space(self.0, m, n);
        let mut c = AssComb::new();
        for (b, x) in h.expand(i) {
            comb_add(&mut c, b.postcompose_perm(sigma), x);
        }
        h.coords(&c).expect("postcomposition by a permutation stays in the space")
    }
}

/// A basis of `⊕_t B₁(t, n) ⊗_{𝔖_t} B₂(m, t)` with the projection from the free sum.
///
/// Free coordinates are ordered by `t`, then `i₁`, then `i₂`.
#[derive(Clone, Debug)]
pub struct BimoduleTensorSlice {
    pub m: usize,
    pub n: usize,
    /// `(t, offset, dim B₁(t, n), dim B₂(m, t))` per middle arity.
    pub blocks: Vec<(usize, usize, usize, usize)>,
    pub free_dim: usize,
    /// Representatives `(t, i₁, i₂)` of the quotient basis.
    pub basis: Vec<(usize, usize, usize)>,
    pub projection: SparseMat,
}

impl BimoduleTensorSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn free_index(&self, t: usize, i1: usize, i2: usize) -> usize {
        let &(_, off, _, d2) = self.blocks.iter().find(|b| b.0 == t).expect("middle arity in range");
        off + i1 * d2 + i2
    }
}

fn monomial(v: &[(usize, Scalar)]) -> Option<(usize, i8)> {
    match v {
        [(i, x)] if x.is_one() => Some((*i, 1)),
        [(i, x)] if (-x).is_one() => Some((*i, -1)),
        _ => None,
    }
}

/// Coinvariants `⊕_{t ≤ m} B₁(t, n) ⊗_{𝔖_t} B₂(m, t)`; `B₂(m, t)` is assumed to
/// vanish for `t > m`. With `sign_twist` the relation reads
/// `(b₁·σ) ⊗ b₂ = sgn(σ) b₁ ⊗ (σ·b₂)`, and orbits whose stabilizer acts by `−1` vanish.
pub fn bimodule_tensor(b1: &dyn BimoduleFamily, b2: &dyn BimoduleFamily, m: usize, n: usize, sign_twist: bool) -> BimoduleTensorSlice {
    let mut blocks = Vec::new();
    let mut off = 0;
    for t in 0..=m {
        let (d1, d2) = (b1.dim(t, n), b2.dim(m, t));
        blocks.push((t, off, d1, d2));
        off += d1 * d2;
    }
    let free_dim = off;
    // Each middle arity is an independent block of the free sum.
    let per_t: Vec<(Vec<(usize, usize, usize)>, Vec<(usize, usize, Scalar)>)> =
        par::map(&blocks, |&(t, off, d1, d2)| coinvariant_block(b1, b2, m, n, t, d1, d2, off, sign_twist));
    let mut basis = Vec::new();
    let mut triplets = Vec::new();
    for (reps, trip) in per_t {
        let base = basis.len();
        basis.extend(reps);
        triplets.extend(trip.into_iter().map(|(r, c, x)| (base + r, c, x)));
    }
    let projection = SparseMat::from_triplets(basis.len(), free_dim, triplets);
    BimoduleTensorSlice { m, n, blocks, free_dim, basis, projection }
}

#[allow(clippy::too_many_arguments)]
fn coinvariant_block(
    b1: &dyn BimoduleFamily,
    b2: &dyn BimoduleFamily,
    m: usize,
    n: usize,
    t: usize,
    d1: usize,
    d2: usize,
    off: usize,
    twist: bool,
) -> (Vec<(usize, usize, usize)>, Vec<(usize, usize, Scalar)>) {
    let size = d1 * d2;
    if size == 0 {
        return (Vec::new(), Vec::new());
    }
    let gens: Vec<Perm> = (0..t.saturating_sub(1)).map(|i| Perm::adjacent(t, i)).collect();
    let right: Vec<Vec<Option<(usize, i8)>>> = gens.iter().map(|s| (0..d1).map(|i| monomial(&b1.act_right(t, n, i, s))).collect()).collect();
    let left: Vec<Vec<Option<(usize, i8)>>> = gens.iter().map(|s| (0..d2).map(|i| monomial(&b2.act_left(m, t, s, i))).collect()).collect();
    let signed = right.iter().all(|r| r.iter().all(Option::is_some)) && left.iter().all(|l| l.iter().all(Option::is_some));
    if !signed {
        return generic_block(b1, b2, m, n, t, d1, d2, off, twist, &gens);
    }
    let tw: i8 = if twist { -1 } else { 1 };
    // sign[x] = ±1 relative to the orbit representative, 0 while unvisited.
    let mut sign = vec![0i8; size];
    let mut orbit = vec![usize::MAX; size];
    let mut reps = Vec::new();
    let mut dead = Vec::new();
    for start in 0..size {
        if sign[start] != 0 {
            continue;
        }
        let id = reps.len();
        reps.push((t, start / d2, start % d2));
        let mut zero = false;
        sign[start] = 1;
        orbit[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let (i1, i2) = (x / d2, x % d2);
            for g in 0..gens.len() {
                let (j1, e1) = right[g][i1].unwrap();
                let (j2, e2) = left[g][i2].unwrap();
                let y = j1 * d2 + j2;
                let s = sign[x] * e1 * e2 * tw;
                if sign[y] == 0 {
                    sign[y] = s;
                    orbit[y] = id;
                    queue.push_back(y);
                } else if sign[y] != s {
                    zero = true;
                }
            }
        }
        dead.push(zero);
    }
    let mut new_id = vec![usize::MAX; reps.len()];
    let mut kept = Vec::new();
    for (k, r) in reps.into_iter().enumerate() {
        if !dead[k] {
            new_id[k] = kept.len();
            kept.push(r);
        }
    }
    let mut trip = Vec::new();
    for x in 0..size {
        let k = new_id[orbit[x]];
        if k != usize::MAX {
            trip.push((k, off + x, Scalar::from_i64(sign[x] as i64)));
        }
    }
    (kept, trip)
}

#[allow(clippy::too_many_arguments)]
fn generic_block(
    b1: &dyn BimoduleFamily,
    b2: &dyn BimoduleFamily,
    m: usize,
    n: usize,
    t: usize,
    d1: usize,
    d2: usize,
    off: usize,
    twist: bool,
    gens: &[Perm],
) -> (Vec<(usize, usize, usize)>, Vec<(usize, usize, Scalar)>) {
    let size = d1 * d2;
    let tw = if twist { Scalar::from_i64(-1) } else { Scalar::one() };
    let mut rels = Vec::new();
    for s in gens {
        let r: Vec<SparseVec> = (0..d1).map(|i| b1.act_right(t, n, i, s)).collect();
        let l: Vec<SparseVec> = (0..d2).map(|i| b2.act_left(m, t, s, i)).collect();
        for i1 in 0..d1 {
            for i2 in 0..d2 {
                let mut acc = Accum::new();
                for (j1, x) in &r[i1] {
                    acc.add(j1 * d2 + i2, x);
                }
                for (j2, x) in &l[i2] {
                    acc.add(i1 * d2 + j2, &(-(x * &tw)));
                }
                rels.push(acc.into_sparse());
            }
        }
    }
    let sub = Subspace::span(size, rels);
    let q = quotient_map(size, &sub);
    let reps = quotient_lifts(&sub).into_iter().map(|x| (t, x / d2, x % d2)).collect();
    let trip = q.entries().map(|(r, c, x)| (r, off + c, x.clone())).collect();
    (reps, trip)
}

/// Normalized symmetrizer `ι`: each fibre of a `Com^u` basis element becomes
/// `(1/k!) Σ` over its orderings.
pub fn symmetrize(c: &AssBasisElem) -> AssComb {
    let mut acc: Vec<(Vec<Vec<usize>>, Scalar)> = vec![(Vec::new(), Scalar::one())];
    for f in c.fibres() {
        let ords = orderings(&f);
        let w = Scalar::frac(1, ords.len() as i64);
        let mut next = Vec::with_capacity(acc.len() * ords.len());
        for (fs, x) in &acc {
            for o in &ords {
                let mut nf = fs.clone();
                nf.push(o.clone());
                next.push((nf, x * &w));
            }
        }
        acc = next;
    }
    comb_from_terms(acc.into_iter().map(|(fs, x)| (AssBasisElem::from_fibres_unchecked(&fs), x)))
}

/// Outcome of the category-level PBW comparison on one slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwSlice {
    pub m: usize,
    pub n: usize,
    pub tensor_dim: usize,
    pub assu_dim: usize,
    pub rank: usize,
}

impl PbwSlice {
    pub fn is_iso(&self) -> bool {
        self.tensor_dim == self.assu_dim && self.rank == self.assu_dim
    }
}

/// Rank of `Cat Com^u ⊗_Σ Cat Lie → Cat Ass^u`, `c ⊗ λ ↦ ι(c) ∘ λ`, on the slice `(m, n)`.
pub fn pbw_check(m: usize, n: usize) -> PbwSlice {
    let slice = bimodule_tensor(&HomFamily(OperadId::ComU), &HomFamily(OperadId::Lie), m, n, false);
    let ass = hom_space(OperadId::AssU, m, n);
    // Images are grouped by the composite function, which labels disjoint coordinate blocks.
    let mut groups: BTreeMap<Vec<usize>, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for &(t, i1, i2) in &slice.basis {
        let c = hom_space(OperadId::ComU, t, n);
        let l = hom_space(OperadId::Lie, m, t);
        let g = c.elem(i1).function().compose(&l.elem(i2).function());
        groups.entry(g.images().to_vec()).or_default().push((t, i1, i2));
    }
    let groups: Vec<Vec<(usize, usize, usize)>> = groups.into_values().collect();
    let ranks = par::map(&groups, |grp| {
        let vecs: Vec<SparseVec> = grp
            .iter()
            .map(|&(t, i1, i2)| {
                let c = hom_space(OperadId::ComU, t, n);
                let l = hom_space(OperadId::Lie, m, t);
                let img = compose_comb(&symmetrize(c.elem(i1)), &l.expand(i2));
                ass.coords(&img).expect("image lies in Ass^u")
            })
            .collect();
        rank_of_vectors(&vecs)
    });
    PbwSlice { m, n, tensor_dim: slice.dim(), assu_dim: ass.dim(), rank: ranks.into_iter().sum() }
}

/// A generating morphism of `Cat Lie`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Perm(Perm),
    /// `α_k ∈ Cat Lie(k+1, k)`: brackets inputs 0 and 1 into output 0, input `i ≥ 2` goes to `i − 1`.
    Alpha(usize),
}

impl Generator {
    pub fn source(&self) -> usize {
        match self {
            Generator::Perm(p) => p.len(),
            Generator::Alpha(k) => k + 1,
        }
    }

    pub fn target(&self) -> usize {
        match self {
            Generator::Perm(p) => p.len(),
            Generator::Alpha(k) => *k,
        }
    }

    /// The basis element of `Cat Lie` (leading-word form) this generator is.
    pub fn as_lie_elem(&self) -> AssBasisElem {
        match self {
            Generator::Perm(p) => AssBasisElem::from_perm(p),
            Generator::Alpha(k) => alpha_elem(*k),
        }
    }

    pub fn as_assu(&self) -> AssComb {
        match self {
            Generator::Perm(p) => comb_from_terms([(AssBasisElem::from_perm(p), Scalar::one())]),
            Generator::Alpha(k) => comb_from_terms(alpha_elem(*k).lie_expansion()),
        }
    }
}

/// Leading-word form of `α_k`: fibre 0 is `[0, 1]`, fibre `i ≥ 1` is `[i + 1]`.
pub fn alpha_elem(k: usize) -> AssBasisElem {
    assert!(k >= 1, "α_k needs k ≥ 1");
    let mut fibres = vec![vec![0, 1]];
    fibres.extend((1..k).map(|i| vec![i + 1]));
    AssBasisElem::from_fibres_unchecked(&fibres)
}

/// The composite of generators listed in application order, in `Cat Ass^u` coordinates.
pub fn compose_generators(gens: &[Generator], m: usize) -> AssComb {
    let mut cur = comb_from_terms([(AssBasisElem::identity(m), Scalar::one())]);
    for g in gens {
        cur = compose_comb(&g.as_assu(), &cur);
    }
    cur
}

fn rotation(k: usize) -> Perm {
    let images = (0..k).map(|i| if i == 0 { k - 1 } else { i - 1 }).collect();
    Perm::new(images).expect("rotation")
}

/// Writes a `Cat Lie` basis morphism (leading-word form) as generators in
/// application order: first a permutation of the inputs, then for each output
/// a run of `α`'s building its left-normed bracket followed by a rotation
/// moving the finished bracket to the back.
pub fn factorize_catlie_basis(b: &AssBasisElem) -> Result<Vec<Generator>> {
    if !b.is_leading() {
        return Err(Error::Input(format!("{b} is not a Lie basis morphism")));
    }
    let m = b.domain();
    let mut pi = vec![0; m];
    for (k, &a) in b.reading_word().iter().enumerate() {
        pi[a as usize] = k;
    }
    let mut raw = vec![Generator::Perm(Perm::new(pi)?)];
    let mut items = m;
    for i in 0..b.codomain() {
        for _ in 1..b.fibre_len(i) {
            raw.push(Generator::Alpha(items - 1));
            items -= 1;
        }
        raw.push(Generator::Perm(rotation(items)));
    }
    let mut out: Vec<Generator> = Vec::new();
    for g in raw {
        match (out.last_mut(), g) {
            (Some(Generator::Perm(p)), Generator::Perm(q)) => *p = q.compose(p),
            (_, g) => out.push(g),
        }
    }
    out.retain(|g| !matches!(g, Generator::Perm(p) if p.is_identity()));
    let check = compose_generators(&out, m);
    if check != comb_from_terms(b.lie_expansion()) {
        return Err(Error::Invariant(format!("factorization of {b} does not recompose")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::rising_factorial;

    fn e(fibres: &[&[usize]]) -> AssBasisElem {
        AssBasisElem::from_fibres(&fibres.iter().map(|f| f.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn small_dims() {
        assert_eq!(hom_space(OperadId::AssU, 2, 2).dim(), 6);
        assert_eq!(hom_space(OperadId::Lie, 3, 2).dim(), 6);
        assert_eq!(hom_space(OperadId::Lie, 2, 3).dim(), 0);
        assert_eq!(hom_space(OperadId::Com, 3, 2).dim(), 6);
        assert_eq!(hom_space(OperadId::ComU, 2, 3).dim(), 9);
        assert_eq!(hom_space(OperadId::Unit, 3, 3).dim(), 6);
        assert_eq!(hom_space(OperadId::AssU, 0, 0).dim(), 1);
        assert_eq!(hom_space(OperadId::AssU, 1, 0).dim(), 0);
        for m in 0..5 {
            for n in 0..5 {
                assert_eq!(hom_space(OperadId::AssU, m, n).dim() as u64, rising_factorial(n, m));
            }
        }
    }

    #[test]
    fn order_transport() {
        let g = e(&[&[0, 1]]);
        let swap = AssBasisElem::from_perm(&Perm::transposition(2, 0, 1));
        assert_eq!(g.compose(&swap), e(&[&[1, 0]]));
        assert_eq!(g.compose(&AssBasisElem::identity(2)), g);
        assert_eq!(AssBasisElem::identity(1).compose(&g), g);
    }

    #[test]
    fn perm_actions_agree_with_composition() {
        let b = e(&[&[2, 0], &[], &[1, 3]]);
        let s = Perm::new(vec![1, 3, 0, 2]).unwrap();
        assert_eq!(b.precompose_perm(&s), b.compose(&AssBasisElem::from_perm(&s)));
        let t = Perm::new(vec![2, 0, 1]).unwrap();
        assert_eq!(b.postcompose_perm(&t), AssBasisElem::from_perm(&t).compose(&b));
    }

    #[test]
    fn lie_inclusions() {
        assert_eq!(catlie_subspace(1, 1), SparseMat::identity(1));
        let m = catlie_subspace(2, 1);
        assert_eq!(m.shape(), (2, 1));
        assert_eq!(m.nnz(), 2);
        let m = catlie_subspace(3, 1);
        assert_eq!(m.shape(), (6, 2));
        assert_eq!(crate::exactlin::rank(&m), 2);
    }

    #[test]
    fn lie_endomorphisms_are_the_group_algebra() {
        let h = hom_space(OperadId::Lie, 3, 3);
        assert_eq!(h.dim(), 6);
        for p in all_perms(3) {
            for q in all_perms(3) {
                let (i, j) = (h.index_of_perm(&p).unwrap(), h.index_of_perm(&q).unwrap());
                let r = compose(OperadId::Lie, 3, 3, 3, &[(i, Scalar::one())], &[(j, Scalar::one())]).unwrap();
                assert_eq!(r, vec![(h.index_of_perm(&p.compose(&q)).unwrap(), Scalar::one())]);
            }
        }
    }

    #[test]
    fn com_tensor_lie_matches_assu() {
        let s = bimodule_tensor(&HomFamily(OperadId::ComU), &HomFamily(OperadId::Lie), 2, 1, false);
        assert_eq!(s.dim(), 2);
        let id = bimodule_tensor(&HomFamily(OperadId::Unit), &HomFamily(OperadId::Unit), 3, 3, false);
        assert_eq!(id.dim(), 6);
        for (m, n) in [(2, 2), (3, 2), (3, 1), (0, 2)] {
            assert!(pbw_check(m, n).is_iso(), "({m},{n})");
        }
    }

    #[test]
    fn negative_stabilizer_drops_orbit() {
        // One basis vector in every arity, fixed by every permutation.
        struct Fixed;
        impl BimoduleFamily for Fixed {
            fn dim(&self, _m: usize, _n: usize) -> usize {
                1
            }
            fn act_right(&self, _m: usize, _n: usize, _i: usize, _s: &Perm) -> SparseVec {
                vec![(0, Scalar::one())]
            }
            fn act_left(&self, _m: usize, _n: usize, _s: &Perm, _i: usize) -> SparseVec {
                vec![(0, Scalar::one())]
            }
        }
        let untwisted = bimodule_tensor(&Fixed, &Fixed, 2, 1, false);
        let twisted = bimodule_tensor(&Fixed, &Fixed, 2, 1, true);
        assert_eq!(untwisted.dim(), 3);
        assert_eq!(twisted.dim(), 2);
    }

    #[test]
    fn factorizations() {
        assert!(factorize_catlie_basis(&AssBasisElem::identity(3)).unwrap().is_empty());
        assert_eq!(factorize_catlie_basis(&alpha_elem(1)).unwrap(), vec![Generator::Alpha(1)]);
        assert_eq!(factorize_catlie_basis(&e(&[&[0, 1, 2]])).unwrap(), vec![Generator::Alpha(2), Generator::Alpha(1)]);
        for (m, n) in [(4, 2), (4, 1), (3, 3), (5, 2)] {
            let h = hom_space(OperadId::Lie, m, n);
            for b in h.basis() {
                factorize_catlie_basis(b).unwrap();
            }
        }
    }
}

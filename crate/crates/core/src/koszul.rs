//! Koszul complexes for the pair `(Com, Lie)`: the minimal projective
//! resolutions of `(𝔞♯)^{⊗d}` on `gr^op` and of `𝕜[𝔖_d]` as a `Cat Lie`-module,
//! the `𝕜Ω`-side resolution of `𝕜[𝔖_m]`, and the Ext pattern they give.
//!
//! Stage `n` of the `d`-th resolution is `P_n ⊗_{𝔖_n} 𝒫¡(d, n)` where `𝒫¡(d, n)`
//! has the surjections `d ↠ n` as basis with sign-twisted actions. As `𝔖_n` acts
//! freely on surjections, a basis of stage `n` evaluated at `t` is given by pairs
//! `(p, x)`: a set partition `p` of `d` into `n` blocks numbered by their minima,
//! and a basis morphism `x : n → t`.

use std::collections::HashMap;

use serde::Serialize;

use crate::combinat::{all_perms, enumerate_surjections, fibre_splits, koszul_sign, orderings, sequence_sign, set_partitions, FiniteMap, Perm, Split};
use crate::exactlin::{rank, Accum, ChainComplex, Scalar, SparseMat, SparseVec};
use crate::liemod::LieModule;
use crate::operads::{expand_left_normed, lie_basis_words, lie_coordinates, OpElem, OperadId};
use crate::par;
use crate::propcat::{hom_space, AssBasisElem, AssComb, comb_add};

/// Which complex a [`KoszulComplex`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// Resolution of `(𝔞♯)^{⊗d}` by `ΔCat Ass^u(n, −) ⊗_{𝔖_n} 𝒫¡(d, n)`, at rank `t`.
    GrOpResolution,
    /// Resolution of `𝕜[𝔖_d]` by `Cat Lie(n, −) ⊗_{𝔖_n} 𝒫¡(d, n)`, at arity `t`.
    LieResolvesSym,
    /// Resolution of `𝕜[𝔖_m]` by `𝕜Ω(i, −) ⊗_{𝔖_i} 𝕃_m(i)`, at arity `t`.
    ComResolvesSym,
}

/// Sign of the term `(A, B)` splitting block `j` of `p` in the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignConvention {
    /// Unshuffle sign times `(−1)^j`.
    BlockPosition,
    /// Koszul signs for blocks of degree `|B| − 1`: `(−1)^{Σ_{q<j}(|B_q|−1)}`, the
    /// unshuffle sign, `(−1)^{|A|−1}`, and the sign of moving `B` past the blocks
    /// between `p_j` and its sorted position.
    BlockDegree,
}

impl SignConvention {
    fn sign(self, p: &[Vec<usize>], j: usize, split: &Split) -> Scalar {
        match self {
            SignConvention::BlockPosition => &split.sign * &Scalar::sign_of_parity(j),
            SignConvention::BlockDegree => {
                let before: usize = p[..j].iter().map(|b| b.len() - 1).sum();
                let passed: usize = p[j + 1..].iter().take_while(|b| b[0] < split.b[0]).map(|b| b.len() - 1).sum();
                &split.sign * &Scalar::sign_of_parity(before + split.a.len() - 1 + passed * (split.b.len() - 1))
            }
        }
    }
}

/// The convention used throughout.
pub const SIGNS: SignConvention = SignConvention::BlockDegree;

/// Set partitions of `0..d` into `n` blocks, blocks numbered by their minima.
fn partitions_into(d: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions(d).into_iter().filter(|p| p.len() == n).collect()
}

/// Index of a function `0..m → 0..t`, point 0 most significant.
pub fn function_index(images: &[usize], t: usize) -> usize {
    images.iter().fold(0, |acc, &x| acc * t + x)
}

/// One stage: pairs `(p, x)` laid out partition-major.
#[derive(Clone, Debug)]
struct Stage {
    n: usize,
    parts: Vec<Vec<Vec<usize>>>,
    part_index: HashMap<Vec<Vec<usize>>, usize>,
    hom_dim: usize,
}

impl Stage {
    fn new(op: OperadId, d: usize, n: usize, t: usize) -> Self {
        let parts = partitions_into(d, n);
        let part_index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Stage { n, parts, part_index, hom_dim: hom_space(op, n, t).dim() }
    }

    fn dim(&self) -> usize {
        self.parts.len() * self.hom_dim
    }
}

/// A block `p_j` split as `(A, B)`: the new partition and the morphism `β : n+1 → n`
/// bracketing the two new blocks into slot `j` (leading form `[A, B]`).
fn split_block(p: &[Vec<usize>], j: usize, split: &Split) -> (Vec<Vec<usize>>, AssBasisElem) {
    let mut q: Vec<Vec<usize>> = p.to_vec();
    q[j] = split.a.clone();
    q.push(split.b.clone());
    q.sort_by_key(|b| b[0]);
    let new_of = |block: &Vec<usize>| q.iter().position(|c| c[0] == block[0]).expect("block present");
    let fibres: Vec<Vec<usize>> = (0..p.len())
        .map(|i| if i == j { vec![new_of(&split.a), new_of(&split.b)] } else { vec![new_of(&p[i])] })
        .collect();
    (q.clone(), AssBasisElem::from_fibres(&fibres).expect("β is a bijection onto its fibres"))
}

/// Label of a basis pair: the composite function `d → t`.
fn pair_label(p: &[Vec<usize>], x: &AssBasisElem, d: usize, t: usize) -> usize {
    let fx = x.images();
    let mut h = vec![0; d];
    for (i, b) in p.iter().enumerate() {
        for &a in b {
            h[a] = fx[i];
        }
    }
    function_index(&h, t.max(1))
}

/// Matrix of the differential from stage `n` to stage `n + 1`.
fn differential(op: OperadId, t: usize, src: &Stage, dst: &Stage, signs: SignConvention) -> SparseMat {
    let hs = hom_space(op, src.n, t);
    let hd = hom_space(op, dst.n, t);
    let cols: Vec<usize> = (0..src.dim()).collect();
    let cols = par::map(&cols, |&c| {
        let (pi, xi) = (c / src.hom_dim, c % src.hom_dim);
        let p = &src.parts[pi];
        let x_terms: Vec<(AssBasisElem, Scalar)> = match op {
            OperadId::AssU => vec![(hs.elem(xi).clone(), Scalar::one())],
            _ => hs.elem(xi).lie_expansion(),
        };
        let mut acc = Accum::new();
        for j in 0..p.len() {
            for split in fibre_splits(&p[j]) {
                let eps = signs.sign(p, j, &split);
                let (q, beta) = split_block(p, j, &split);
                let mut comb = AssComb::new();
                for (x, cx) in &x_terms {
                    for (b, cb) in beta.lie_expansion() {
                        comb_add(&mut comb, x.compose(&b), cx * &cb);
                    }
                }
                let coords = hd.coords(&comb).expect("composite lies in the hom-space");
                let off = dst.part_index[&q] * dst.hom_dim;
                for (i, y) in coords {
                    acc.add(off + i, &(&y * &eps));
                }
            }
        }
        acc.into_sparse()
    });
    SparseMat::from_columns(dst.dim(), cols)
}

/// An evaluated Koszul complex with its augmentation and head projections.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub side: Side,
    /// Resolved arity.
    pub d: usize,
    /// Evaluation rank or arity.
    pub t: usize,
    /// Stage label of each term.
    pub stages: Vec<usize>,
    /// `maps[i]` goes from term `i` to term `i + 1`.
    pub complex: ChainComplex,
    /// Last term onto the resolved object.
    pub augmentation: SparseMat,
    /// Each term onto its head (generators modulo the radical).
    pub heads: Vec<SparseMat>,
    /// Block label of every basis vector; all maps preserve labels.
    pub labels: Vec<Vec<usize>>,
    pub augmentation_labels: Vec<usize>,
}

impl KoszulComplex {
    pub fn dims(&self) -> &[usize] {
        &self.complex.dims
    }

    pub fn target_dim(&self) -> usize {
        self.augmentation.nrows()
    }

    /// The complex with the augmentation appended as a last map.
    pub fn augmented(&self) -> ChainComplex {
        let mut dims = self.complex.dims.clone();
        let mut maps = self.complex.maps.clone();
        if !dims.is_empty() {
            dims.push(self.target_dim());
            maps.push(self.augmentation.clone());
        }
        ChainComplex::new(dims, maps)
    }

    pub fn squares_to_zero(&self) -> bool {
        self.augmented().squares_to_zero()
    }

    /// Homology of the augmented complex, computed block by block.
    pub fn augmented_homology(&self) -> Vec<usize> {
        let mut labels = self.labels.clone();
        if !labels.is_empty() {
            labels.push(self.augmentation_labels.clone());
        }
        blocked_homology(&self.augmented(), &labels)
    }

    /// Homology of the unaugmented complex.
    pub fn homology(&self) -> Vec<usize> {
        blocked_homology(&self.complex, &self.labels)
    }

    /// `Σ (−1)^{d−n} dim(stage n)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.stages.iter().zip(&self.complex.dims).map(|(&n, &dim)| if (self.d - n).is_multiple_of(2) { dim as i64 } else { -(dim as i64) }).sum()
    }

    /// Differentials composed with the head projections of their targets vanish.
    pub fn minimality_check(&self) -> bool {
        self.complex.maps.iter().enumerate().all(|(i, m)| self.heads[i + 1].mul(m).is_zero())
    }
}

/// Homology of a complex whose maps preserve the given labelling of basis vectors.
pub fn blocked_homology(c: &ChainComplex, labels: &[Vec<usize>]) -> Vec<usize> {
    // Local index of every basis vector inside its label class.
    let locals: Vec<(HashMap<usize, usize>, Vec<usize>)> = labels
        .iter()
        .map(|ls| {
            let mut count: HashMap<usize, usize> = HashMap::new();
            let local = ls
                .iter()
                .map(|l| {
                    let e = count.entry(*l).or_insert(0);
                    *e += 1;
                    *e - 1
                })
                .collect();
            (count, local)
        })
        .collect();
    let ranks: Vec<usize> = par::map_range(c.maps.len(), |i| {
        let m = &c.maps[i];
        let (src_l, dst_l) = (&labels[i], &labels[i + 1]);
        let mut blocks: HashMap<usize, Vec<SparseVec>> = HashMap::new();
        for (j, col) in m.columns().iter().enumerate() {
            let l = src_l[j];
            let v: SparseVec = col
                .iter()
                .map(|(r, x)| {
                    assert_eq!(dst_l[*r], l, "map does not preserve labels");
                    (locals[i + 1].1[*r], x.clone())
                })
                .collect();
            blocks.entry(l).or_default().push(v);
        }
        let blocks: Vec<(usize, Vec<SparseVec>)> = blocks.into_iter().collect();
        par::map(&blocks, |(l, cols)| {
            let rows = locals[i + 1].0.get(l).copied().unwrap_or(0);
            rank(&SparseMat::from_columns(rows, cols.clone()))
        })
        .into_iter()
        .sum()
    });
    (0..c.dims.len())
        .map(|i| {
            let out = if i < ranks.len() { ranks[i] } else { 0 };
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            c.dims[i].saturating_sub(out + inc)
        })
        .collect()
}

fn build(op: OperadId, side: Side, d: usize, t: usize, signs: SignConvention) -> KoszulComplex {
    assert!(d >= 1, "resolutions start at d = 1");
    let stages: Vec<Stage> = (1..=d).map(|n| Stage::new(op, d, n, t)).collect();
    let maps: Vec<SparseMat> = (0..d - 1).map(|i| differential(op, t, &stages[i], &stages[i + 1], signs)).collect();
    let labels: Vec<Vec<usize>> = stages
        .iter()
        .map(|s| {
            let h = hom_space(op, s.n, t);
            (0..s.dim()).map(|c| pair_label(&s.parts[c / s.hom_dim], h.elem(c % s.hom_dim), d, t)).collect()
        })
        .collect();
    let top = hom_space(op, d, t);
    let (augmentation, augmentation_labels) = match side {
        Side::GrOpResolution => {
            let cols = top.basis().iter().map(|x| vec![(function_index(&x.images(), t), Scalar::one())]).collect();
            (SparseMat::from_columns(t.pow(d as u32), cols), (0..t.pow(d as u32)).collect())
        }
        _ => {
            if t == d {
                let perms = all_perms(d);
                let idx: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
                let cols = top.basis().iter().map(|x| vec![(idx[&Perm::new(x.images()).expect("bijection")], Scalar::one())]).collect();
                let labs = perms.iter().map(|p| function_index(p.images(), t)).collect();
                (SparseMat::from_columns(perms.len(), cols), labs)
            } else {
                (SparseMat::zeros(0, top.dim()), Vec::new())
            }
        }
    };
    let heads = stages
        .iter()
        .map(|s| {
            let h = hom_space(op, s.n, t);
            match side {
                Side::GrOpResolution => {
                    let w = t.pow(s.n as u32);
                    let cols = (0..s.dim()).map(|c| vec![((c / s.hom_dim) * w + function_index(&h.elem(c % s.hom_dim).images(), t), Scalar::one())]).collect();
                    SparseMat::from_columns(s.parts.len() * w, cols)
                }
                _ => {
                    if t == s.n {
                        SparseMat::identity(s.dim())
                    } else {
                        SparseMat::zeros(0, s.dim())
                    }
                }
            }
        })
        .collect();
    KoszulComplex {
        side,
        d,
        t,
        stages: (1..=d).collect(),
        complex: ChainComplex::new(stages.iter().map(Stage::dim).collect(), maps),
        augmentation,
        heads,
        labels,
        augmentation_labels,
    }
}

/// The resolution of `(𝔞♯)^{⊗d}` evaluated at `F_t`.
pub fn resolution_grop(d: usize, t: usize) -> KoszulComplex {
    build(OperadId::AssU, Side::GrOpResolution, d, t, SIGNS)
}

/// The same complex with an explicit sign convention.
pub fn resolution_grop_with(d: usize, t: usize, signs: SignConvention) -> KoszulComplex {
    build(OperadId::AssU, Side::GrOpResolution, d, t, signs)
}

/// The resolution of `𝕜[𝔖_d]` by projective `Cat Lie`-modules, evaluated at arity `z`.
pub fn resolution_lie(d: usize, z: usize) -> KoszulComplex {
    build(OperadId::Lie, Side::LieResolvesSym, d, z, SIGNS)
}

/// The two-term complex `stage d → stage d` by the identity: not minimal.
pub fn mock_identity_complex(d: usize, t: usize) -> KoszulComplex {
    let c = resolution_grop(d, t);
    let top = c.complex.dims[d - 1];
    let head = c.heads[d - 1].clone();
    let labels = c.labels[d - 1].clone();
    KoszulComplex {
        side: Side::GrOpResolution,
        d,
        t,
        stages: vec![d, d],
        complex: ChainComplex::new(vec![top, top], vec![SparseMat::identity(top)]),
        augmentation: SparseMat::zeros(0, top),
        heads: vec![head.clone(), head],
        labels: vec![labels.clone(), labels],
        augmentation_labels: Vec::new(),
    }
}

/// `𝒫¡(d, t)` for `𝒫 = Lie`: surjections `d ↠ t`, block `B` in degree `|B| − 1`.
#[derive(Clone, Debug)]
pub struct DualSpace {
    pub d: usize,
    pub t: usize,
    pub basis: Vec<FiniteMap>,
    index: HashMap<Vec<usize>, usize>,
}

impl DualSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, g: &FiniteMap) -> Option<usize> {
        self.index.get(g.images()).copied()
    }

    /// `σ · g = σ ∘ g` with the Koszul sign of moving the blocks.
    pub fn act_left(&self, sigma: &Perm, i: usize) -> (usize, Scalar) {
        let g = &self.basis[i];
        let degrees: Vec<usize> = g.fibre_sizes().iter().map(|k| k - 1).collect();
        let inv = sigma.inverse();
        let order: Vec<usize> = (0..self.t).map(|k| inv.apply(k)).collect();
        let images: Vec<usize> = g.images().iter().map(|&k| sigma.apply(k)).collect();
        (self.index[&images], koszul_sign(&degrees, &order))
    }

    /// `g · τ = g ∘ τ`, each block contributing the sign of its relabelling.
    pub fn act_right(&self, i: usize, tau: &Perm) -> (usize, Scalar) {
        let g = &self.basis[i];
        let inv = tau.inverse();
        let mut sign = Scalar::one();
        for f in g.fibres() {
            let moved: Vec<usize> = f.iter().map(|&a| inv.apply(a)).collect();
            sign *= sequence_sign(&moved);
        }
        let images: Vec<usize> = (0..self.d).map(|a| g.apply(tau.apply(a))).collect();
        (self.index[&images], sign)
    }
}

/// Basis and actions of the sign-twisted dual `𝒫¡(d, t)`.
pub fn sign_twisted_dual_space(d: usize, t: usize) -> DualSpace {
    let basis = enumerate_surjections(d, t);
    let index = basis.iter().enumerate().map(|(i, g)| (g.images().to_vec(), i)).collect();
    DualSpace { d, t, basis, index }
}

/// `Hom(resolution of 𝕜[𝔖_d], M)`: the term in degree `k` is `Hom(stage d − k, M) = M(d − k)^{S(d, d − k)}`.
#[derive(Clone, Debug)]
pub struct ExtComplex {
    pub d: usize,
    pub module: String,
    pub complex: ChainComplex,
}

impl ExtComplex {
    /// `dim Ext^k` for `k = 0..d−1`.
    pub fn ext_dims(&self) -> Vec<usize> {
        self.complex.homology()
    }

    /// `Σ_k (−1)^k dim Ext^k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ext_dims().iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
    }
}

/// `ψ ↦ ψ ∘ ∂`: on the generator `p` of stage `i`, `(∂^*ψ)(p) = Σ ε M(β) ψ(p')`
/// over the splits `p → p'` with bracketing morphism `β`.
pub fn ext_complex(d: usize, m: &LieModule) -> ExtComplex {
    assert!(d >= 1, "resolutions start at d = 1");
    let parts: Vec<Vec<Vec<Vec<usize>>>> = (0..=d).map(|n| partitions_into(d, n)).collect();
    let index: Vec<HashMap<Vec<Vec<usize>>, usize>> = parts.iter().map(|ps| ps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()).collect();
    // Degree k holds stage d − k.
    let dims: Vec<usize> = (0..d).map(|k| parts[d - k].len() * m.dim(d - k)).collect();
    let maps = (0..d - 1)
        .map(|k| {
            let (i, src_n) = (d - k - 1, d - k);
            let (ds, dt) = (m.dim(src_n), m.dim(i));
            let mut trip = Vec::new();
            for (pi, p) in parts[i].iter().enumerate() {
                for j in 0..p.len() {
                    for split in fibre_splits(&p[j]) {
                        let eps = SIGNS.sign(p, j, &split);
                        let (q, beta) = split_block(p, j, &split);
                        let qi = index[src_n][&q];
                        let mb = m.basis_morphism(&beta);
                        for (c, r, x) in mb.entries() {
                            trip.push((pi * dt + c, qi * ds + r, x * &eps));
                        }
                    }
                }
            }
            SparseMat::from_triplets(parts[i].len() * dt, parts[src_n].len() * ds, trip)
        })
        .collect();
    ExtComplex { d, module: m.name().to_string(), complex: ChainComplex::new(dims, maps) }
}

/// Leading words of a block: its minimum followed by any ordering of the rest.
fn block_words(block: &[usize]) -> Vec<Vec<usize>> {
    let (first, rest) = block.split_first().expect("nonempty block");
    orderings(rest)
        .into_iter()
        .map(|o| {
            let mut w = vec![*first];
            w.extend(o);
            w
        })
        .collect()
}

/// `[y_a, y_b]` in the leading-word basis of the merged block.
fn bracket_words(wa: &[usize], wb: &[usize]) -> Vec<(Vec<usize>, Scalar)> {
    let mut letters: Vec<usize> = wa.iter().chain(wb).copied().collect();
    letters.sort_unstable();
    let local = |a: usize| letters.binary_search(&a).expect("letter present");
    let mut e = OpElem::zero(OperadId::Lie, letters.len());
    for (u, x) in expand_left_normed(wa) {
        for (v, y) in expand_left_normed(wb) {
            let uv: Vec<usize> = u.iter().chain(&v).map(|&a| local(a)).collect();
            let vu: Vec<usize> = v.iter().chain(&u).map(|&a| local(a)).collect();
            e.add_term(uv, &x * &y);
            e.add_term(vu, -(&x * &y));
        }
    }
    let coords = lie_coordinates(&e).expect("a bracket of Lie elements is Lie");
    lie_basis_words(letters.len())
        .into_iter()
        .zip(coords)
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (w.into_iter().map(|i| letters[i]).collect(), c))
        .collect()
}

/// Leading words of the blocks and the surjection blocks `↠ n`.
type ComBasisElem = (Vec<Vec<usize>>, Vec<usize>);

/// Basis of stage `i` of the `𝕜Ω`-side complex at arity `n`: blocks of `0..m`
/// ordered by minima, each with a leading word, and a surjection blocks `↠ n`.
fn com_basis(m: usize, i: usize, n: usize) -> Vec<ComBasisElem> {
    let surj = enumerate_surjections(i, n);
    let mut out = Vec::new();
    for p in partitions_into(m, i) {
        let mut words: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for b in &p {
            let ws = block_words(b);
            words = words
                .into_iter()
                .flat_map(|acc| {
                    ws.iter().map(move |w| {
                        let mut a = acc.clone();
                        a.push(w.clone());
                        a
                    })
                })
                .collect();
        }
        for w in words {
            for g in &surj {
                out.push((w.clone(), g.images().to_vec()));
            }
        }
    }
    out
}

fn com_label(words: &[Vec<usize>], g: &[usize], m: usize, n: usize) -> usize {
    let mut h = vec![0; m];
    for (w, &k) in words.iter().zip(g) {
        for &a in w {
            h[a] = k;
        }
    }
    function_index(&h, n.max(1))
}

/// The `𝕜Ω`-side resolution of `𝕜[𝔖_m]` evaluated at arity `n`.
///
/// The differential from stage `i − 1` to stage `i` is the transpose of the
/// Chevalley–Eilenberg differential `y₁ ∧ ⋯ ∧ y_i ↦ Σ_{a<b} (−1)^{a+b} [y_a, y_b] ∧ ⋯`
/// of the free Lie algebra, restricted to pairs of blocks with the same output.
pub fn resolution_com(m: usize, n: usize) -> KoszulComplex {
    assert!(m >= 1, "resolutions start at m = 1");
    let bases: Vec<Vec<ComBasisElem>> = (1..=m).map(|i| com_basis(m, i, n)).collect();
    let index: Vec<HashMap<ComBasisElem, usize>> = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect()).collect();
    // ce[i−2] : stage i → stage i − 1.
    let ce: Vec<SparseMat> = (2..=m)
        .map(|i| {
            let (src, dst) = (&bases[i - 1], &index[i - 2]);
            let cols = par::map(src, |(words, g)| {
                let mut acc = Accum::new();
                for a in 0..i {
                    for b in a + 1..i {
                        if g[a] != g[b] {
                            continue;
                        }
                        let sign_ab = Scalar::sign_of_parity(a + b);
                        for (w, c) in bracket_words(&words[a], &words[b]) {
                            // [y_a, y_b] ∧ (rest in order), then sorted by minima.
                            let mut seq: Vec<(Vec<usize>, usize)> = vec![(w, g[a])];
                            seq.extend((0..i).filter(|&k| k != a && k != b).map(|k| (words[k].clone(), g[k])));
                            let mins: Vec<usize> = seq.iter().map(|(w, _)| w[0]).collect();
                            let sign = sequence_sign(&mins);
                            seq.sort_by_key(|(w, _)| w[0]);
                            let (nw, ng): (Vec<Vec<usize>>, Vec<usize>) = seq.into_iter().unzip();
                            let k = dst[&(nw, ng)];
                            acc.add(k, &(&(&c * &sign) * &sign_ab));
                        }
                    }
                }
                acc.into_sparse()
            });
            SparseMat::from_columns(dst.len(), cols)
        })
        .collect();
    let maps: Vec<SparseMat> = ce.iter().map(SparseMat::transpose).collect();
    let labels: Vec<Vec<usize>> = bases.iter().map(|b| b.iter().map(|(w, g)| com_label(w, g, m, n)).collect()).collect();
    let top = bases[m - 1].len();
    let (augmentation, augmentation_labels) = if n == m { (SparseMat::identity(top), labels[m - 1].clone()) } else { (SparseMat::zeros(0, top), Vec::new()) };
    let heads = (1..=m).map(|i| if i == n { SparseMat::identity(bases[i - 1].len()) } else { SparseMat::zeros(0, bases[i - 1].len()) }).collect();
    KoszulComplex {
        side: Side::ComResolvesSym,
        d: m,
        t: n,
        stages: (1..=m).collect(),
        complex: ChainComplex::new(bases.iter().map(Vec::len).collect(), maps),
        augmentation,
        heads,
        labels,
        augmentation_labels,
    }
}

/// Output format for [`export`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
    Latex,
}

impl std::str::FromStr for ExportFormat {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            "latex" | "tex" => Ok(ExportFormat::Latex),
            _ => Err(crate::Error::Input(format!("unknown format {s:?}; expected json, csv or latex"))),
        }
    }
}

fn triplets(m: &SparseMat) -> Vec<(usize, usize, String)> {
    m.entries().map(|(r, c, x)| (r, c, x.to_string())).collect()
}

#[derive(Serialize)]
struct MatrixExport {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

impl MatrixExport {
    fn of(m: &SparseMat) -> Self {
        MatrixExport { rows: m.nrows(), cols: m.ncols(), entries: triplets(m) }
    }
}

#[derive(Serialize)]
struct TermExport {
    stage: usize,
    homological_degree: usize,
    dim: usize,
    homology: usize,
}

#[derive(Serialize)]
struct ComplexExport {
    side: Side,
    d: usize,
    t: usize,
    terms: Vec<TermExport>,
    target_dim: usize,
    differentials: Vec<MatrixExport>,
    augmentation: MatrixExport,
    squares_to_zero: bool,
    exact: bool,
    minimal: bool,
}

/// Renders a complex as JSON (terms, dims, triplet matrices), CSV (dimension and
/// homology table) or LaTeX (the resolution with its dimensions).
pub fn export(c: &KoszulComplex, format: ExportFormat) -> String {
    let hom = c.augmented_homology();
    let terms: Vec<TermExport> = c
        .stages
        .iter()
        .zip(c.dims())
        .zip(&hom)
        .map(|((&n, &dim), &h)| TermExport { stage: n, homological_degree: c.d - n, dim, homology: h })
        .collect();
    match format {
        ExportFormat::Json => {
            let e = ComplexExport {
                side: c.side,
                d: c.d,
                t: c.t,
                terms,
                target_dim: c.target_dim(),
                differentials: c.complex.maps.iter().map(MatrixExport::of).collect(),
                augmentation: MatrixExport::of(&c.augmentation),
                squares_to_zero: c.squares_to_zero(),
                exact: hom.iter().all(|&h| h == 0),
                minimal: c.minimality_check(),
            };
            serde_json::to_string_pretty(&e).expect("serializable")
        }
        ExportFormat::Csv => {
            let mut out = String::from("stage,homological_degree,dim,homology\n");
            for t in &terms {
                out.push_str(&format!("{},{},{},{}\n", t.stage, t.homological_degree, t.dim, t.homology));
            }
            out.push_str(&format!("target,,{},{}\n", c.target_dim(), hom.last().copied().unwrap_or(0)));
            out
        }
        ExportFormat::Latex => latex(c, &terms),
    }
}

fn latex(c: &KoszulComplex, terms: &[TermExport]) -> String {
    let (proj, target) = match c.side {
        Side::GrOpResolution => (r"\Delta\mathrm{Cat}\,\mathfrak{Ass}^u", format!(r"(\mathfrak{{a}}^\sharp)^{{\otimes {}}}", c.d)),
        Side::LieResolvesSym => (r"\mathrm{Cat}\,\mathfrak{Lie}", format!(r"\Bbbk[\mathfrak{{S}}_{{{}}}]", c.d)),
        Side::ComResolvesSym => (r"\Bbbk\Omega", format!(r"\Bbbk[\mathfrak{{S}}_{{{}}}]", c.d)),
    };
    let mut chain = vec!["0".to_string()];
    for t in terms {
        chain.push(format!(r"{proj}({},-)\otimes_{{\mathfrak{{S}}_{{{}}}}}\mathcal{{P}}^{{!}}({},{})", t.stage, t.stage, c.d, t.stage));
    }
    chain.push(target);
    chain.push("0".into());
    let mut out = String::new();
    out.push_str("\\[\n");
    out.push_str(&chain.join(" \\to "));
    out.push_str("\n\\]\n");
    out.push_str(&format!("\\begin{{tabular}}{{l{}}}\n", "r".repeat(terms.len() + 1)));
    let head: Vec<String> = terms.iter().map(|t| format!("${}$", t.stage)).collect();
    out.push_str(&format!("stage & {} & target \\\\\n\\hline\n", head.join(" & ")));
    let dims: Vec<String> = terms.iter().map(|t| t.dim.to_string()).collect();
    out.push_str(&format!("dim at ${}$ & {} & {} \\\\\n", c.t, dims.join(" & "), c.target_dim()));
    let hom: Vec<String> = terms.iter().map(|t| t.homology.to_string()).collect();
    out.push_str(&format!("homology & {} & \\\\\n", hom.join(" & ")));
    out.push_str("\\end{tabular}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{factorial, rising_factorial, stirling2};
    use crate::liemod::regular_module;

    #[test]
    fn gr_resolutions_are_exact() {
        for d in 1..=4 {
            for t in 0..=3 {
                let c = resolution_grop(d, t);
                assert!(c.squares_to_zero(), "d = {d}, t = {t}");
                assert!(c.augmented_homology().iter().all(|&h| h == 0), "d = {d}, t = {t}");
                assert!(c.minimality_check());
                assert_eq!(c.euler_characteristic(), (t as i64).pow(d as u32));
                for (n, &dim) in c.stages.iter().zip(c.dims()) {
                    assert_eq!(dim as u64, stirling2(d, *n) * rising_factorial(t, *n));
                }
            }
        }
    }

    #[test]
    fn position_parity_signs_fail() {
        assert!(!resolution_grop_with(4, 1, SignConvention::BlockPosition).squares_to_zero());
        // First arity where moving a split-off block past a block of positive degree matters.
        let c = resolution_grop(5, 1);
        assert!(c.squares_to_zero() && c.augmented_homology().iter().all(|&h| h == 0));
    }

    #[test]
    fn arity_two_differential_is_the_bracket() {
        let c = resolution_grop(2, 1);
        // [x₀ ⊗ {01}] ↦ ±(f_{0<1} − f_{1<0}).
        let m = &c.complex.maps[0];
        assert_eq!(m.shape(), (2, 1));
        let col = m.column(0);
        assert_eq!(col.len(), 2);
        assert_eq!(&col[0].1, &(-&col[1].1));
    }

    #[test]
    fn mock_complex_is_not_minimal() {
        assert!(!mock_identity_complex(2, 2).minimality_check());
    }

    #[test]
    fn lie_resolutions_are_exact() {
        for d in 1..=4 {
            for z in 0..=d {
                let c = resolution_lie(d, z);
                assert!(c.squares_to_zero());
                assert!(c.augmented_homology().iter().all(|&h| h == 0), "d = {d}, z = {z}");
            }
        }
    }

    #[test]
    fn com_side_top_homology() {
        for m in 1..=3 {
            for n in 0..=3 {
                let c = resolution_com(m, n);
                assert!(c.complex.squares_to_zero());
                let h = c.homology();
                let expected_top = if n == m { factorial(m) as usize } else { 0 };
                assert_eq!(h[m - 1], expected_top, "m = {m}, n = {n}");
                assert!(h[..m - 1].iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn ext_pattern() {
        for d in 1..=4 {
            for n in 1..=4 {
                let e = ext_complex(d, &regular_module(n));
                let dims = e.ext_dims();
                for (k, &x) in dims.iter().enumerate() {
                    let expected = if n <= d && k == d - n { factorial(n) * stirling2(d, n) } else { 0 };
                    assert_eq!(x as u64, expected, "d = {d}, n = {n}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn dual_space() {
        assert_eq!(sign_twisted_dual_space(3, 2).dim(), 6);
        assert_eq!(sign_twisted_dual_space(2, 3).dim(), 0);
        let s = sign_twisted_dual_space(2, 2);
        let (j, sign) = s.act_left(&Perm::transposition(2, 0, 1), 0);
        assert_eq!((j, sign), (1, Scalar::one()));
        let s = sign_twisted_dual_space(2, 1);
        assert_eq!(s.act_right(0, &Perm::transposition(2, 0, 1)), (0, Scalar::from_i64(-1)));
    }

    #[test]
    fn exports() {
        let c = resolution_grop(2, 2);
        let j: serde_json::Value = serde_json::from_str(&export(&c, ExportFormat::Json)).unwrap();
        assert_eq!(j["terms"][1]["dim"], 6);
        assert!(export(&c, ExportFormat::Csv).starts_with("stage,"));
        assert!(export(&c, ExportFormat::Latex).contains("\\to"));
    }
}

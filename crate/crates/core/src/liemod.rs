//! Left `Cat Lie`-modules presented by symmetric-group representations and the
//! maps `M(α_n) : M(n+1) → M(n)`, truncated to arities `≤ N`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::combinat::{all_perms, Perm};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rank, Accum, Scalar, SparseMat, SparseVec};
use crate::operads::OperadId;
use crate::par;
use crate::propcat::{alpha_elem, comb_from_terms, compose_comb, factorize_catlie_basis, hom_space, AssComb, Generator};

/// A left `Cat Lie`-module truncated to arities `0..=N`.
#[derive(Clone)]
pub struct LieModule {
    name: String,
    truncation: usize,
    dims: Vec<usize>,
    /// `transpositions[n][i] = M(s_i)` on `M(n)`.
    transpositions: Vec<Vec<SparseMat>>,
    /// `alphas[n − 1] = M(α_n) : M(n+1) → M(n)` for `1 ≤ n < N`.
    alphas: Vec<SparseMat>,
    perm_cache: Arc<Mutex<HashMap<Perm, Arc<SparseMat>>>>,
}

impl fmt::Debug for LieModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieModule({}, N = {}, dims {:?})", self.name, self.truncation, self.dims)
    }
}

impl LieModule {
    /// Assembles a module from its matrices, checking only their shapes.
    pub fn from_parts(name: impl Into<String>, dims: Vec<usize>, transpositions: Vec<Vec<SparseMat>>, alphas: Vec<SparseMat>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Input("a module needs at least arity 0".into()));
        }
        let n_max = dims.len() - 1;
        if transpositions.len() != dims.len() {
            return Err(Error::Input(format!("expected transposition lists for arities 0..={n_max}")));
        }
        for (n, ts) in transpositions.iter().enumerate() {
            if ts.len() != n.saturating_sub(1) {
                return Err(Error::Input(format!("arity {n} needs {} transpositions, got {}", n.saturating_sub(1), ts.len())));
            }
            if let Some(t) = ts.iter().find(|t| t.shape() != (dims[n], dims[n])) {
                return Err(Error::Input(format!("transposition at arity {n} has shape {:?}, expected {:?}", t.shape(), (dims[n], dims[n]))));
            }
        }
        if alphas.len() != n_max.saturating_sub(1) {
            return Err(Error::Input(format!("expected {} alpha maps, got {}", n_max.saturating_sub(1), alphas.len())));
        }
        for (k, a) in alphas.iter().enumerate() {
            let n = k + 1;
            if a.shape() != (dims[n], dims[n + 1]) {
                return Err(Error::Input(format!("M(α_{n}) has shape {:?}, expected {:?}", a.shape(), (dims[n], dims[n + 1]))));
            }
        }
        Ok(LieModule { name: name.into(), truncation: n_max, dims, transpositions, alphas, perm_cache: Default::default() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `dim M(n)`, zero beyond the truncation.
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn transposition(&self, n: usize, i: usize) -> &SparseMat {
        &self.transpositions[n][i]
    }

    /// `M(α_n) : M(n+1) → M(n)`, or a zero map when `n+1` exceeds the truncation.
    pub fn alpha(&self, n: usize) -> SparseMat {
        assert!(n >= 1, "α_n needs n ≥ 1");
        match self.alphas.get(n - 1) {
            Some(a) => a.clone(),
            None => SparseMat::zeros(self.dim(n), self.dim(n + 1)),
        }
    }

    /// `M(σ)` for `σ ∈ 𝔖_n`, from a reduced word; memoized.
    pub fn perm(&self, sigma: &Perm) -> Arc<SparseMat> {
        let n = sigma.len();
        if let Some(m) = self.perm_cache.lock().expect("perm cache").get(sigma) {
            return m.clone();
        }
        let mut m = SparseMat::identity(self.dim(n));
        if self.dim(n) > 0 {
            for &k in &sigma.reduced_word() {
                m = m.mul(&self.transpositions[n][k]);
            }
        }
        let m = Arc::new(m);
        self.perm_cache.lock().expect("perm cache").insert(sigma.clone(), m.clone());
        m
    }

    /// `M(g)` for a generator.
    pub fn generator(&self, g: &Generator) -> SparseMat {
        match g {
            Generator::Perm(p) => (*self.perm(p)).clone(),
            Generator::Alpha(k) => self.alpha(*k),
        }
    }

    /// `M(b)` for a `Cat Lie(m, n)` basis morphism, read along its factorization.
    pub fn basis_morphism(&self, b: &crate::propcat::AssBasisElem) -> SparseMat {
        let gens = factorize_catlie_basis(b).expect("Lie basis morphism");
        let mut m = SparseMat::identity(self.dim(b.domain()));
        for g in &gens {
            m = self.generator(g).mul(&m);
        }
        m
    }

    /// `M(λ)` for `λ` given in `Cat Lie(m, n)` coordinates.
    pub fn lie_morphism(&self, m: usize, n: usize, v: &[(usize, Scalar)]) -> SparseMat {
        let h = hom_space(OperadId::Lie, m, n);
        let mut out = SparseMat::zeros(self.dim(n), self.dim(m));
        for (i, x) in v {
            out = out.add_scaled(x, &self.basis_morphism(h.elem(*i)));
        }
        out
    }

    /// Serializable form with dense matrices.
    pub fn to_file(&self) -> ModuleFile {
        ModuleFile {
            name: self.name.clone(),
            truncation: self.truncation,
            dims: self.dims.clone(),
            transpositions: self.transpositions.iter().map(|ts| ts.iter().map(SparseMat::to_dense).collect()).collect(),
            alphas: self.alphas.iter().map(SparseMat::to_dense).collect(),
        }
    }

    pub fn from_file(f: &ModuleFile) -> Result<Self> {
        if f.dims.len() != f.truncation + 1 {
            return Err(Error::Input(format!("dims has {} entries for truncation {}", f.dims.len(), f.truncation)));
        }
        let mat = |rows: &Vec<Vec<Scalar>>, r: usize, c: usize, what: &str| -> Result<SparseMat> {
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(Error::Input(format!("{what} is not a {r}×{c} matrix")));
            }
            Ok(if r == 0 { SparseMat::zeros(0, c) } else { SparseMat::from_dense(rows) })
        };
        let mut ts = Vec::new();
        for (n, list) in f.transpositions.iter().enumerate() {
            let d = *f.dims.get(n).ok_or_else(|| Error::Input("too many transposition lists".into()))?;
            ts.push(list.iter().enumerate().map(|(i, m)| mat(m, d, d, &format!("s_{} at arity {n}", i + 1))).collect::<Result<Vec<_>>>()?);
        }
        let mut al = Vec::new();
        for (k, m) in f.alphas.iter().enumerate() {
            let n = k + 1;
            let (r, c) = (*f.dims.get(n).unwrap_or(&0), *f.dims.get(n + 1).unwrap_or(&0));
            al.push(mat(m, r, c, &format!("M(α_{n})"))?);
        }
        LieModule::from_parts(f.name.clone(), f.dims.clone(), ts, al)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("module serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ModuleFile = serde_json::from_str(s).map_err(|e| Error::Input(format!("module file: {e}")))?;
        Self::from_file(&f)
    }
}

/// JSON layout of a module: dense row-major matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    pub name: String,
    pub truncation: usize,
    pub dims: Vec<usize>,
    /// `transpositions[n][i]` is the matrix of `s_{i+1}` on `M(n)`.
    pub transpositions: Vec<Vec<Vec<Vec<Scalar>>>>,
    /// `alphas[n − 1]` is the matrix of `M(α_n)`, `dims[n]` rows by `dims[n+1]` columns.
    pub alphas: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RelationKind {
    SymmetricGroup,
    Antisymmetry,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: RelationKind,
    pub description: String,
}

fn symmetric_group_violations(n: usize, ts: &[SparseMat]) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = ts.first().map_or(0, SparseMat::nrows);
    let id = SparseMat::identity(d);
    let bad = |desc: String| Violation { kind: RelationKind::SymmetricGroup, description: desc };
    for i in 0..ts.len() {
        if ts[i].mul(&ts[i]) != id {
            out.push(bad(format!("s_{}² ≠ 1 at arity {n}", i + 1)));
        }
        for j in i + 1..ts.len() {
            let p = ts[i].mul(&ts[j]);
            let lhs = if j == i + 1 { p.mul(&p).mul(&p) } else { p.mul(&p) };
            if lhs != id {
                let e = if j == i + 1 { 3 } else { 2 };
                out.push(bad(format!("(s_{} s_{})^{e} ≠ 1 at arity {n}", i + 1, j + 1)));
            }
        }
    }
    out
}

/// Lists the defining relations that fail.
///
/// The symmetric-group relations are checked directly, then antisymmetry of
/// every `M(α_n)`. For the remaining relations, `M̃(b)` is defined on each
/// `Cat Lie(m, n)` basis morphism as the product along its normal-form
/// factorization, and `M(g)·M̃(b) = M̃(g ∘ b)` is checked for every generator `g`.
/// Together these say that `M̃` is a functor.
pub fn validate(m: &LieModule) -> Vec<Violation> {
    let n_max = m.truncation();
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.extend(symmetric_group_violations(n, &m.transpositions[n]));
    }
    for n in 1..n_max {
        let a = m.alpha(n);
        if a.mul(m.transposition(n + 1, 0)) != a.neg() {
            out.push(Violation { kind: RelationKind::Antisymmetry, description: format!("M(α_{n})·M(s_1) ≠ −M(α_{n})") });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let cases: Vec<(usize, usize)> = (0..=n_max).flat_map(|a| (1..=a).map(move |b| (a, b))).collect();
    let found: Vec<Vec<Violation>> = par::map(&cases, |&(src, tgt)| {
        let h = hom_space(OperadId::Lie, src, tgt);
        let mut gens: Vec<Generator> = (0..tgt.saturating_sub(1)).map(|i| Generator::Perm(Perm::adjacent(tgt, i))).collect();
        if tgt >= 2 {
            gens.push(Generator::Alpha(tgt - 1));
        }
        let mut bad = Vec::new();
        for b in h.basis() {
            let mb = m.basis_morphism(b);
            let bexp = comb_from_terms(b.lie_expansion());
            for g in &gens {
                let lhs = m.generator(g).mul(&mb);
                let target = g.target();
                let comp = compose_comb(&g.as_assu(), &bexp);
                let coords = hom_space(OperadId::Lie, src, target).coords(&comp).expect("Lie composite");
                let rhs = m.lie_morphism(src, target, &coords);
                if lhs != rhs {
                    let kind = if matches!(g, Generator::Perm(_)) { RelationKind::SymmetricGroup } else { RelationKind::Quadratic };
                    bad.push(Violation { kind, description: format!("M({g:?})·M({b}) ≠ M({g:?} ∘ {b})") });
                }
            }
        }
        bad
    });
    found.into_iter().flatten().collect()
}

/// Matrices of the adjacent transpositions on the regular representation `𝕜[𝔖_d]`,
/// basis in the order of [`all_perms`], acting by `σ ↦ s_i ∘ σ`.
pub fn regular_rep(d: usize) -> Vec<SparseMat> {
    let perms = all_perms(d);
    let idx: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    (0..d.saturating_sub(1))
        .map(|i| {
            let s = Perm::adjacent(d, i);
            let cols = perms.iter().map(|p| vec![(idx[&s.compose(p)], Scalar::one())]).collect();
            SparseMat::from_columns(perms.len(), cols)
        })
        .collect()
}

pub fn sign_rep(d: usize) -> Vec<SparseMat> {
    (0..d.saturating_sub(1)).map(|_| SparseMat::identity(1).neg()).collect()
}

pub fn trivial_rep(d: usize) -> Vec<SparseMat> {
    (0..d.saturating_sub(1)).map(|_| SparseMat::identity(1)).collect()
}

/// The module concentrated in arity `d` with the given `𝔖_d`-representation.
pub fn symmetric_group_module(d: usize, rep: Vec<SparseMat>) -> Result<LieModule> {
    if rep.len() != d.saturating_sub(1) {
        return Err(Error::Input(format!("𝔖_{d} needs {} generator matrices", d.saturating_sub(1))));
    }
    let dim = if d < 2 { 1 } else { rep[0].nrows() };
    if rep.iter().any(|r| r.shape() != (dim, dim)) {
        return Err(Error::Input("generator matrices must be square of one size".into()));
    }
    if let Some(v) = symmetric_group_violations(d, &rep).into_iter().next() {
        return Err(Error::Input(format!("not a representation: {}", v.description)));
    }
    let mut dims = vec![0; d + 1];
    dims[d] = dim;
    let ts = (0..=d).map(|n| if n == d { rep.clone() } else { (0..n.saturating_sub(1)).map(|_| SparseMat::zeros(0, 0)).collect() }).collect();
    let alphas = (1..d).map(|n| SparseMat::zeros(dims[n], dims[n + 1])).collect();
    LieModule::from_parts(format!("S{d}-module"), dims, ts, alphas)
}

/// `𝕜[𝔖_d]`.
pub fn regular_module(d: usize) -> LieModule {
    symmetric_group_module(d, regular_rep(d)).expect("regular representation").with_name(format!("k[S{d}]"))
}

/// `𝕜_sgn(d)`.
pub fn sign_module(d: usize) -> LieModule {
    symmetric_group_module(d, sign_rep(d)).expect("sign representation").with_name(format!("k_sgn({d})"))
}

/// `𝕜_triv(d)`.
pub fn trivial_module(d: usize) -> LieModule {
    symmetric_group_module(d, trivial_rep(d)).expect("trivial representation").with_name(format!("k_triv({d})"))
}

/// Structure constants `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
pub type StructureConstants = Vec<Vec<Vec<Scalar>>>;

/// Checks antisymmetry and the Jacobi identity.
pub fn check_lie_algebra(c: &StructureConstants) -> Result<()> {
    let r = c.len();
    if c.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
        return Err(Error::Input("structure constants must be r×r×r".into()));
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if c[i][j][k] != -&c[j][i][k] {
                    return Err(Error::Input(format!("[e{}, e{}] is not antisymmetric", i + 1, j + 1)));
                }
            }
        }
    }
    let br = |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); r];
        for i in 0..r {
            for j in 0..r {
                let x = &u[i] * &v[j];
                if x.is_zero() {
                    continue;
                }
                for k in 0..r {
                    out[k] += &x * &c[i][j][k];
                }
            }
        }
        out
    };
    let e = |i: usize| -> Vec<Scalar> { (0..r).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect() };
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let a = br(&br(&e(i), &e(j)), &e(k));
                let b = br(&br(&e(j), &e(k)), &e(i));
                let d = br(&br(&e(k), &e(i)), &e(j));
                if (0..r).any(|x| !(&(&a[x] + &b[x]) + &d[x]).is_zero()) {
                    return Err(Error::Input(format!("Jacobi fails on e{}, e{}, e{}", i + 1, j + 1, k + 1)));
                }
            }
        }
    }
    Ok(())
}

/// Abelian Lie algebra of dimension `r`.
pub fn abelian_lie_algebra(r: usize) -> StructureConstants {
    vec![vec![vec![Scalar::zero(); r]; r]; r]
}

/// `sl₂` in the basis `e, h, f`: `[h, e] = 2e`, `[h, f] = −2f`, `[e, f] = h`.
pub fn sl2() -> StructureConstants {
    let mut c = abelian_lie_algebra(3);
    let (e, h, f) = (0, 1, 2);
    c[h][e][e] = Scalar::from_i64(2);
    c[e][h][e] = Scalar::from_i64(-2);
    c[h][f][f] = Scalar::from_i64(-2);
    c[f][h][f] = Scalar::from_i64(2);
    c[e][f][h] = Scalar::one();
    c[f][e][h] = Scalar::from_i64(-1);
    c
}

/// Heisenberg algebra `x, y, z` with `[x, y] = z` central.
pub fn heisenberg() -> StructureConstants {
    let mut c = abelian_lie_algebra(3);
    c[0][1][2] = Scalar::one();
    c[1][0][2] = Scalar::from_i64(-1);
    c
}

/// Index of a tensor `e_{i₀} ⊗ ⋯ ⊗ e_{i_{n−1}}`, slot 0 most significant.
fn tensor_index(digits: &[usize], r: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * r + d)
}

fn tensor_digits(mut idx: usize, r: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = idx % r;
        idx /= r;
    }
    d
}

/// `g̲`: `M(n) = g^{⊗n}` with place permutations; `M(α_n)` brackets tensor slots 0 and 1.
pub fn lie_algebra_module(c: &StructureConstants, truncation: usize) -> Result<LieModule> {
    check_lie_algebra(c)?;
    let r = c.len();
    let dims: Vec<usize> = (0..=truncation).map(|n| r.pow(n as u32)).collect();
    let ts = (0..=truncation)
        .map(|n| {
            (0..n.saturating_sub(1))
                .map(|i| {
                    let cols = (0..dims[n])
                        .map(|x| {
                            let mut d = tensor_digits(x, r, n);
                            d.swap(i, i + 1);
                            vec![(tensor_index(&d, r), Scalar::one())]
                        })
                        .collect();
                    SparseMat::from_columns(dims[n], cols)
                })
                .collect()
        })
        .collect();
    let alphas = (1..truncation)
        .map(|n| {
            let cols = (0..dims[n + 1])
                .map(|x| {
                    let d = tensor_digits(x, r, n + 1);
                    let mut acc = Accum::new();
                    for k in 0..r {
                        let mut nd = vec![k];
                        nd.extend_from_slice(&d[2..]);
                        acc.add(tensor_index(&nd, r), &c[d[0]][d[1]][k]);
                    }
                    acc.into_sparse()
                })
                .collect();
            SparseMat::from_columns(dims[n], cols)
        })
        .collect();
    LieModule::from_parts(format!("g(dim {r})"), dims, ts, alphas)
}

/// `P_n = Cat Lie(n, −)` with post-composition, truncated at `N`.
pub fn representable_module(n: usize, truncation: usize) -> LieModule {
    let dims: Vec<usize> = (0..=truncation).map(|t| hom_space(OperadId::Lie, n, t).dim()).collect();
    let post = |t_out: usize, t_in: usize, g: &AssComb| -> SparseMat {
        let src = hom_space(OperadId::Lie, n, t_in);
        let dst = hom_space(OperadId::Lie, n, t_out);
        let cols = (0..src.dim()).map(|i| dst.coords(&compose_comb(g, &src.expand(i))).expect("Lie composite")).collect();
        SparseMat::from_columns(dst.dim(), cols)
    };
    let ts = (0..=truncation)
        .map(|t| (0..t.saturating_sub(1)).map(|i| post(t, t, &Generator::Perm(Perm::adjacent(t, i)).as_assu())).collect())
        .collect();
    let alphas = (1..truncation).map(|t| post(t, t + 1, &comb_from_terms(alpha_elem(t).lie_expansion()))).collect();
    LieModule::from_parts(format!("P{n}"), dims, ts, alphas).expect("representable module shapes")
}

/// `ℰ`: `𝕜` in arity 1, `𝕜_sgn` in arity 2, `M(α₁)` the identity.
pub fn e_module() -> LieModule {
    let dims = vec![0, 1, 1];
    let ts = vec![vec![], vec![], vec![SparseMat::identity(1).neg()]];
    LieModule::from_parts("E", dims, ts, vec![SparseMat::identity(1)]).expect("E shapes")
}

/// Direct sum, truncated at the larger truncation.
pub fn direct_sum(a: &LieModule, b: &LieModule) -> LieModule {
    let n_max = a.truncation().max(b.truncation());
    let dims: Vec<usize> = (0..=n_max).map(|n| a.dim(n) + b.dim(n)).collect();
    let ts = (0..=n_max)
        .map(|n| {
            (0..n.saturating_sub(1))
                .map(|i| {
                    let pa = if n <= a.truncation() { a.transposition(n, i).clone() } else { SparseMat::zeros(0, 0) };
                    let pb = if n <= b.truncation() { b.transposition(n, i).clone() } else { SparseMat::zeros(0, 0) };
                    SparseMat::block_diag(&[pa, pb])
                })
                .collect()
        })
        .collect();
    let alphas = (1..n_max).map(|n| SparseMat::block_diag(&[a.alpha(n), b.alpha(n)])).collect();
    LieModule::from_parts(format!("{} + {}", a.name(), b.name()), dims, ts, alphas).expect("direct sum shapes")
}

/// Order-preserving identification of a subset (bitmask) of `0..n` with `0..|X|`.
fn subset_elems(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// Basis of `(F ⊙ G)(n)`: blocks `(X, offset)` with `X ⊆ n`, then `F(|X|) ⊗ G(n − |X|)` row-major.
#[derive(Clone, Debug)]
pub struct ConvolutionLayout {
    pub n: usize,
    pub blocks: Vec<(u64, usize, usize, usize)>,
    pub dim: usize,
}

pub fn convolution_layout(f: &LieModule, g: &LieModule, n: usize) -> ConvolutionLayout {
    let mut blocks = Vec::new();
    let mut off = 0;
    for mask in 0..(1u64 << n) {
        let a = mask.count_ones() as usize;
        let (da, db) = (f.dim(a), g.dim(n - a));
        if da * db > 0 {
            blocks.push((mask, off, da, db));
            off += da * db;
        }
    }
    ConvolutionLayout { n, blocks, dim: off }
}

impl ConvolutionLayout {
    pub fn offset(&self, mask: u64) -> Option<(usize, usize, usize)> {
        self.blocks.iter().find(|b| b.0 == mask).map(|b| (b.1, b.2, b.3))
    }
}

/// The permutation of `0..|X|` induced by `σ` on `X → σ(X)`.
fn induced_perm(sigma: &Perm, elems: &[usize]) -> (u64, Perm) {
    let mut img: Vec<usize> = elems.iter().map(|&x| sigma.apply(x)).collect();
    let mask = img.iter().fold(0u64, |m, &x| m | (1 << x));
    let mut sorted = img.clone();
    sorted.sort_unstable();
    for v in img.iter_mut() {
        *v = sorted.binary_search(v).expect("image present");
    }
    (mask, Perm::new(img).expect("induced permutation"))
}

/// `F ⊙ G`: `(F ⊙ G)(Z) = ⊕_{X ⊔ Y = Z} F(X) ⊗ G(Y)`, truncated at `N_F + N_G`.
///
/// `α` acts through `F` when it brackets two points of `X`, through `G` when it
/// brackets two points of `Y`, and by zero otherwise. Arity `n` is computed
/// from `F(a) ⊗ G(n − a)` with `a ≤ N_F` and `n − a ≤ N_G`, so it is complete
/// when both inputs vanish beyond their truncations.
pub fn convolution(f: &LieModule, g: &LieModule) -> LieModule {
    let n_max = f.truncation() + g.truncation();
    let layouts: Vec<ConvolutionLayout> = (0..=n_max).map(|n| convolution_layout(f, g, n)).collect();
    let dims: Vec<usize> = layouts.iter().map(|l| l.dim).collect();
    let perm_matrix = |n: usize, sigma: &Perm| -> SparseMat {
        let lay = &layouts[n];
        let mut cols = vec![Vec::new(); lay.dim];
        for &(mask, off, _, _) in &lay.blocks {
            let xs = subset_elems(mask, n);
            let ys = subset_elems(!mask & ((1u64 << n) - 1), n);
            let (mx, px) = induced_perm(sigma, &xs);
            let (_, py) = induced_perm(sigma, &ys);
            let (noff, _, ndb) = lay.offset(mx).expect("image block");
            let k = f.perm(&px).kron(&g.perm(&py));
            for (c, col) in k.columns().iter().enumerate() {
                cols[off + c] = col.iter().map(|(r, x)| (noff + (r / ndb) * ndb + r % ndb, x.clone())).collect();
            }
        }
        SparseMat::from_columns(lay.dim, cols)
    };
    let ts = (0..=n_max).map(|n| (0..n.saturating_sub(1)).map(|i| perm_matrix(n, &Perm::adjacent(n, i))).collect()).collect();
    let alphas = (1..n_max)
        .map(|n| {
            let (src, dst) = (&layouts[n + 1], &layouts[n]);
            let mut cols = vec![Vec::new(); src.dim];
            for &(mask, off, da, db) in &src.blocks {
                let both_x = mask & 3 == 3;
                let both_y = mask & 3 == 0;
                if !(both_x || both_y) {
                    continue;
                }
                // Points i ≥ 2 move to i − 1 and the bracket lands on 0.
                let shifted = mask >> 1;
                let new_mask = if both_x { shifted | 1 } else { shifted & !1 };
                let Some((noff, nda, ndb)) = dst.offset(new_mask) else { continue };
                let a = mask.count_ones() as usize;
                let block = if both_x { f.alpha(a - 1).kron(&SparseMat::identity(db)) } else { SparseMat::identity(da).kron(&g.alpha(n - a)) };
                debug_assert_eq!(block.shape(), (nda * ndb, da * db));
                for (c, col) in block.columns().iter().enumerate() {
                    cols[off + c] = col.iter().map(|(r, x)| (noff + r, x.clone())).collect();
                }
            }
            SparseMat::from_columns(dst.dim, cols)
        })
        .collect();
    LieModule::from_parts(format!("{} ⊙ {}", f.name(), g.name()), dims, ts, alphas).expect("convolution shapes")
}

/// A family of linear maps `M(n) → M'(n)` for `n ≤ N`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub components: Vec<SparseMat>,
}

impl ModuleMap {
    /// True iff the components commute with every transposition and every `α_n`.
    pub fn is_module_map(&self, src: &LieModule, dst: &LieModule) -> bool {
        let n_max = self.components.len().saturating_sub(1);
        for n in 0..=n_max {
            for i in 0..n.saturating_sub(1) {
                let a = if n <= src.truncation() { src.transposition(n, i).clone() } else { SparseMat::zeros(0, 0) };
                let b = if n <= dst.truncation() { dst.transposition(n, i).clone() } else { SparseMat::zeros(0, 0) };
                if self.components[n].mul(&a) != b.mul(&self.components[n]) {
                    return false;
                }
            }
        }
        (1..n_max).all(|n| self.components[n].mul(&src.alpha(n)) == dst.alpha(n).mul(&self.components[n + 1]))
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|c| rank(c) == c.nrows())
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| rank(c) == c.ncols())
    }
}

/// The surjection `P_{m+n} → P_m ⊙ P_n`: a basis morphism whose function keeps
/// the images of the first `m` and last `n` inputs apart splits into its two
/// restrictions; the others go to zero.
pub fn convolution_projective_quotient(m: usize, n: usize, truncation: usize) -> (LieModule, LieModule, ModuleMap) {
    let (pm, pn) = (representable_module(m, truncation), representable_module(n, truncation));
    let conv = convolution(&pm, &pn);
    let big = representable_module(m + n, truncation);
    let comps = (0..=truncation)
        .map(|t| {
            let src = hom_space(OperadId::Lie, m + n, t);
            let lay = convolution_layout(&pm, &pn, t);
            let cols = src
                .basis()
                .iter()
                .map(|b| {
                    let fib = b.fibres();
                    let mut mask = 0u64;
                    let mut mixed = false;
                    for (i, f) in fib.iter().enumerate() {
                        let lo = f.iter().all(|&a| a < m);
                        let hi = f.iter().all(|&a| a >= m);
                        mixed |= !(lo || hi);
                        if lo {
                            mask |= 1 << i;
                        }
                    }
                    if mixed {
                        return Vec::new();
                    }
                    let xf: Vec<Vec<usize>> = fib.iter().filter(|f| f[0] < m).cloned().collect();
                    let yf: Vec<Vec<usize>> = fib.iter().filter(|f| f[0] >= m).map(|f| f.iter().map(|a| a - m).collect()).collect();
                    let bx = crate::propcat::AssBasisElem::from_fibres(&xf).expect("restriction");
                    let by = crate::propcat::AssBasisElem::from_fibres(&yf).expect("restriction");
                    let ix = hom_space(OperadId::Lie, m, xf.len()).index_of(&bx).expect("Lie basis");
                    let iy = hom_space(OperadId::Lie, n, yf.len()).index_of(&by).expect("Lie basis");
                    let (off, _, db) = lay.offset(mask).expect("block present");
                    vec![(off + ix * db + iy, Scalar::one())]
                })
                .collect();
            SparseMat::from_columns(lay.dim, cols)
        })
        .collect();
    let conv = truncate(&conv, truncation);
    (big, conv, ModuleMap { components: comps })
}

/// The same module forgetting arities above `n`.
pub fn truncate(m: &LieModule, n: usize) -> LieModule {
    let n = n.min(m.truncation());
    let dims = m.dims[..=n].to_vec();
    let ts = m.transpositions[..=n].to_vec();
    let alphas = m.alphas[..n.saturating_sub(1)].to_vec();
    LieModule::from_parts(m.name.clone(), dims, ts, alphas).expect("truncation shapes")
}

/// Basis of `Hom(A, B)` in the category of truncated modules, by solving the
/// commutation equations with all generators.
pub fn module_homs(a: &LieModule, b: &LieModule) -> Vec<ModuleMap> {
    let n_max = a.truncation().min(b.truncation());
    let mut offs = vec![0; n_max + 2];
    for n in 0..=n_max {
        offs[n + 1] = offs[n] + a.dim(n) * b.dim(n);
    }
    let unknowns = offs[n_max + 1];
    // Unknown (n, r, c) is entry (r, c) of f_n : A(n) → B(n).
    let var = |n: usize, r: usize, c: usize| offs[n] + r * a.dim(n) + c;
    let mut rows: Vec<SparseVec> = Vec::new();
    // B(g)·f_src − f_dst·A(g) = 0 for g : src → dst.
    let mut equate = |src: usize, dst: usize, ga: &SparseMat, gb: &SparseMat| {
        let gbt = gb.transpose();
        let (ra, ca) = (b.dim(dst), a.dim(src));
        for r in 0..ra {
            for c in 0..ca {
                let mut acc = Accum::new();
                for (k, x) in gbt.column(r) {
                    acc.add(var(src, *k, c), x);
                }
                for (k, x) in ga.column(c) {
                    acc.add(var(dst, r, *k), &(-x));
                }
                let v = acc.into_sparse();
                if !v.is_empty() {
                    rows.push(v);
                }
            }
        }
    };
    for n in 2..=n_max {
        for i in 0..n - 1 {
            equate(n, n, a.transposition(n, i), b.transposition(n, i));
        }
    }
    for n in 1..n_max {
        equate(n + 1, n, &a.alpha(n), &b.alpha(n));
    }
    let sys = SparseMat::from_columns(unknowns, rows).transpose();
    kernel_basis(&sys)
        .basis()
        .iter()
        .map(|v| {
            let comps = (0..=n_max)
                .map(|n| {
                    let trip = v.iter().filter(|(i, _)| *i >= offs[n] && *i < offs[n + 1]).map(|(i, x)| {
                        let k = i - offs[n];
                        (k / a.dim(n), k % a.dim(n), x.clone())
                    });
                    SparseMat::from_triplets(b.dim(n), a.dim(n), trip)
                })
                .collect();
            ModuleMap { components: comps }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_modules_validate() {
        for m in [regular_module(0), regular_module(1), regular_module(3), sign_module(2), e_module(), representable_module(2, 3), representable_module(3, 3)] {
            assert!(validate(&m).is_empty(), "{m:?}: {:?}", validate(&m));
        }
        let g = lie_algebra_module(&sl2(), 3).unwrap();
        assert!(validate(&g).is_empty());
        let h = lie_algebra_module(&heisenberg(), 3).unwrap();
        assert!(validate(&h).is_empty());
    }

    #[test]
    fn broken_modules_are_reported() {
        let mut f = e_module().to_file();
        f.transpositions[2][0] = vec![vec![Scalar::one()]];
        let bad = LieModule::from_file(&f).unwrap();
        assert_eq!(validate(&bad)[0].kind, RelationKind::Antisymmetry);
        let mut c = sl2();
        c[0][2][1] = Scalar::from_i64(2);
        assert!(lie_algebra_module(&c, 2).is_err());
    }

    #[test]
    fn representable_dims() {
        let p1 = representable_module(1, 3);
        assert_eq!(p1.dims(), &[0, 1, 0, 0]);
        let p2 = representable_module(2, 2);
        assert_eq!(p2.dims(), &[0, 1, 2]);
        // α₁ kills the symmetric vector and is injective on the sign line.
        let a = p2.alpha(1);
        let sym = p2.perm(&Perm::identity(2)).add(p2.transposition(2, 0));
        assert!(a.mul(&sym).is_zero());
        assert_eq!(rank(&a), 1);
        let p3 = representable_module(3, 3);
        assert_eq!(p3.dims(), &[0, 2, 6, 6]);
    }

    #[test]
    fn sl2_bracket_is_surjective() {
        let g = lie_algebra_module(&sl2(), 2).unwrap();
        assert_eq!(g.dims(), &[1, 3, 9]);
        assert_eq!(rank(&g.alpha(1)), 3);
        let a = lie_algebra_module(&abelian_lie_algebra(1), 3).unwrap();
        assert_eq!(a.dims(), &[1, 1, 1, 1]);
        assert!(a.alpha(1).is_zero() && a.alpha(2).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let m = representable_module(2, 3);
        let back = LieModule::from_json(&m.to_json()).unwrap();
        assert_eq!(back.dims(), m.dims());
        assert_eq!(back.alpha(1), m.alpha(1));
        assert!(LieModule::from_json("{\"name\":\"x\"}").is_err());
    }

    #[test]
    fn convolutions() {
        let unit = regular_module(0);
        let p2 = representable_module(2, 2);
        let c = convolution(&p2, &unit);
        assert_eq!(&c.dims()[..3], p2.dims());
        assert!(validate(&c).is_empty());
        let s = convolution(&regular_module(1), &regular_module(2));
        assert_eq!(s.dim(3), 6);
        assert!(validate(&s).is_empty());
        let p11 = convolution(&representable_module(1, 1), &representable_module(1, 1));
        assert_eq!(&p11.dims()[..3], &[0, 0, 2]);
        assert!(validate(&p11).is_empty());
    }

    #[test]
    fn projective_quotients() {
        let (big, conv, q) = convolution_projective_quotient(1, 1, 2);
        assert!(q.is_module_map(&big, &conv));
        assert!(q.is_surjective());
        assert_eq!(rank(&q.components[2]), 2);
        assert!(q.components[1].is_zero());
        let (big, conv, q) = convolution_projective_quotient(2, 1, 3);
        assert!(q.is_module_map(&big, &conv));
        assert!(q.is_surjective());
    }

    #[test]
    fn flie_extension() {
        assert_eq!(module_homs(&sign_module(2), &e_module()).len(), 0);
        assert_eq!(module_homs(&e_module(), &sign_module(2)).len(), 1);
        assert_eq!(module_homs(&e_module(), &e_module()).len(), 1);
    }
}

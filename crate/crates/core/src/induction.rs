//! Induction from `Cat Lie`-modules to functors on `gr^op`:
//! `M ↦ ΔCat Ass^u ⊗_{Cat Lie} M`, evaluated rank by rank.
//!
//! The value at `F_t` is built in two steps. The symmetric-group relations are
//! solved exactly: `Cat Ass^u(z, t)` is a free right `𝔖_z`-set with one
//! canonical element `b_c` per weak composition `c` of `z` into `t` parts
//! (consecutive letters), so `b ⊗ v = b_c ∘ π ⊗ v ↦ b_c ⊗ M(π)v` identifies the
//! coinvariants with `⊕_{z, c} M(z)`. The `α`-relations are then quotiented out.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::combinat::{factorial, partitions, perm_of_cycle_type, all_perms, class_size, weak_compositions, Perm};
use crate::exactlin::{kernel_basis, quotient_lifts, quotient_map, rank, Accum, Scalar, SparseMat, SparseVec, Subspace};
use crate::funcalc::{subspace_character, Character, GrFunctor};
use crate::gract::{act, act_words, generating_homs, FreeGroupHom, GroupWord, Letter};
use crate::liemod::{convolution, convolution_layout, lie_algebra_module, validate, LieModule, StructureConstants};
use crate::operads::OperadId;
use crate::par;
use crate::propcat::{alpha_elem, hom_space, AssBasisElem};
use crate::{Error, Result};

pub use crate::funcalc::{cross_effect, poly_degree};

/// The canonical element with fibre sizes `comp` and consecutive letters.
pub fn canonical_elem(comp: &[usize]) -> AssBasisElem {
    let mut fibres = Vec::with_capacity(comp.len());
    let mut next = 0;
    for &c in comp {
        fibres.push((next..next + c).collect());
        next += c;
    }
    AssBasisElem::from_fibres(&fibres).expect("consecutive fibres")
}

/// `π` with `b = b_c ∘ π`: `π(L[k]) = k` for the reading word `L`.
pub fn reading_perm(b: &AssBasisElem) -> Perm {
    let mut images = vec![0; b.domain()];
    for (k, &a) in b.reading_word().iter().enumerate() {
        images[a as usize] = k;
    }
    Perm::new(images).expect("reading word is a permutation")
}

fn fibre_sizes(b: &AssBasisElem) -> Vec<usize> {
    (0..b.codomain()).map(|i| b.fibre_len(i)).collect()
}

#[derive(Clone, Debug)]
struct Block {
    z: usize,
    comp: Vec<usize>,
    offset: usize,
    dim: usize,
}

/// `(ΔCat Ass^u ⊗_{Cat Lie} M)(F_t)` with its presentation.
#[derive(Clone, Debug)]
pub struct InducedValue {
    pub module_name: String,
    pub t: usize,
    /// `Σ_{z ≤ N} dim Cat Ass^u(z, t) · dim M(z)`.
    pub free_dim: usize,
    /// Dimension of the `𝔖`-coinvariants `⊕_{z, c} M(z)`.
    pub coinvariant_dim: usize,
    /// The `α`-relations inside the coinvariants.
    pub relations: Subspace,
    /// Coinvariants onto the quotient basis.
    pub projection: SparseMat,
    /// Coinvariant coordinates lifting the quotient basis.
    pub lifts: Vec<usize>,
    blocks: Vec<Block>,
    block_of: HashMap<Vec<usize>, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedReport {
    pub module: String,
    pub t: usize,
    pub free_dim: usize,
    pub coinvariant_dim: usize,
    pub relation_rank: usize,
    pub dim: usize,
    pub pbw_dim: usize,
}

impl InducedValue {
    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }

    /// Adds `x · (b ⊗ v)` in coinvariant coordinates.
    pub fn embed_into(&self, m: &LieModule, b: &AssBasisElem, v: &[(usize, Scalar)], x: &Scalar, acc: &mut Accum) {
        let Some(&k) = self.block_of.get(&fibre_sizes(b)) else { return };
        let block = &self.blocks[k];
        let pv = m.perm(&reading_perm(b)).apply(v);
        for (i, y) in pv {
            acc.add(block.offset + i, &(&y * x));
        }
    }

    pub fn embed(&self, m: &LieModule, b: &AssBasisElem, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        self.embed_into(m, b, v, &Scalar::one(), &mut acc);
        acc.into_sparse()
    }

    /// `(z, composition, basis index)` of a coinvariant coordinate.
    pub fn decode(&self, coord: usize) -> (usize, &[usize], usize) {
        let k = self.blocks.partition_point(|b| b.offset + b.dim <= coord);
        let b = &self.blocks[k];
        (b.z, &b.comp, coord - b.offset)
    }

    /// Every coinvariant coordinate as `(z, composition, basis index)`.
    pub fn coordinates(&self) -> impl Iterator<Item = (usize, &[usize], usize)> + '_ {
        self.blocks.iter().flat_map(|b| (0..b.dim).map(move |i| (b.z, b.comp.as_slice(), i)))
    }

    /// Offset of the block for `comp`, if `M(|comp|) ≠ 0`.
    pub fn block_offset(&self, comp: &[usize]) -> Option<usize> {
        self.block_of.get(comp).map(|&k| self.blocks[k].offset)
    }

    /// Descends a map defined on the coinvariants, if it kills the relations.
    pub fn descend(&self, q: &SparseMat) -> Option<SparseMat> {
        if self.relations.basis().iter().any(|r| !q.apply(r).is_empty()) {
            return None;
        }
        Some(q.select_columns(&self.lifts))
    }

    pub fn report(&self, pbw_dim: usize) -> InducedReport {
        InducedReport {
            module: self.module_name.clone(),
            t: self.t,
            free_dim: self.free_dim,
            coinvariant_dim: self.coinvariant_dim,
            relation_rank: self.relations.dim(),
            dim: self.dim(),
            pbw_dim,
        }
    }
}

/// `M(λ)`-character of `𝔖_m` on `M(m)`.
pub fn module_character(m: &LieModule, n: usize) -> Character {
    partitions(n).into_iter().map(|ct| (ct.clone(), m.perm(&perm_of_cycle_type(&ct)).trace())).collect()
}

/// `Σ_m dim(𝕜Fin(m, t) ⊗_{𝔖_m} M(m)) = Σ_m (1/m!) Σ_σ t^{cyc σ} χ_M(σ)`.
pub fn pbw_dimension(m: &LieModule, t: usize) -> usize {
    let mut total = Scalar::zero();
    for z in 0..=m.truncation() {
        if m.dim(z) == 0 {
            continue;
        }
        let mut s = Scalar::zero();
        for (ct, chi) in module_character(m, z) {
            let fix = Scalar::from_i64((t as i64).pow(ct.len() as u32));
            s += Scalar::from_i64(class_size(&ct) as i64) * fix * chi;
        }
        total += s * Scalar::frac(1, factorial(z) as i64);
    }
    total.to_i64().and_then(|x| usize::try_from(x).ok()).expect("PBW dimension is a natural number")
}

fn layout(m: &LieModule, t: usize) -> (Vec<Block>, HashMap<Vec<usize>, usize>, usize) {
    let mut blocks = Vec::new();
    let mut block_of = HashMap::new();
    let mut offset = 0;
    for z in 0..=m.truncation() {
        let dim = m.dim(z);
        if dim == 0 {
            continue;
        }
        for comp in weak_compositions(z, t) {
            block_of.insert(comp.clone(), blocks.len());
            blocks.push(Block { z, comp, offset, dim });
            offset += dim;
        }
    }
    (blocks, block_of, offset)
}

/// Builds the value at `F_t` from the `𝔖`-coinvariants and the `α`-relations
/// `(b ∘ α_z) ⊗ v − b ⊗ M(α_z)v`, and checks its dimension against the PBW count.
pub fn induce_value(m: &LieModule, t: usize) -> Result<InducedValue> {
    let (blocks, block_of, coinvariant_dim) = layout(m, t);
    let free_dim = (0..=m.truncation()).map(|z| hom_space(OperadId::AssU, z, t).dim() * m.dim(z)).sum();
    let mut val = InducedValue {
        module_name: m.name().to_string(),
        t,
        free_dim,
        coinvariant_dim,
        relations: Subspace::zero(coinvariant_dim),
        projection: SparseMat::identity(coinvariant_dim),
        lifts: (0..coinvariant_dim).collect(),
        blocks,
        block_of,
    };
    let mut rels = Vec::new();
    for z in 1..m.truncation() {
        if m.dim(z + 1) == 0 {
            continue;
        }
        let alpha = alpha_elem(z).lie_expansion();
        let ma = m.alpha(z);
        let ass = hom_space(OperadId::AssU, z, t);
        let found: Vec<Vec<SparseVec>> = par::map(ass.basis(), |b| {
            let composed: Vec<(AssBasisElem, Scalar)> = alpha.iter().map(|(e, x)| (b.compose(e), x.clone())).collect();
            (0..m.dim(z + 1))
                .filter_map(|j| {
                    let v = vec![(j, Scalar::one())];
                    let mut acc = Accum::new();
                    for (bb, x) in &composed {
                        val.embed_into(m, bb, &v, x, &mut acc);
                    }
                    val.embed_into(m, b, ma.column(j), &Scalar::from_i64(-1), &mut acc);
                    let r = acc.into_sparse();
                    (!r.is_empty()).then_some(r)
                })
                .collect()
        });
        rels.extend(found.into_iter().flatten());
    }
    val.relations = Subspace::span(coinvariant_dim, rels);
    val.projection = quotient_map(coinvariant_dim, &val.relations);
    val.lifts = quotient_lifts(&val.relations);
    let expected = pbw_dimension(m, t);
    if val.dim() != expected {
        return Err(Error::Invariant(format!("induced value of {} at F_{t} has dim {} but the PBW count is {expected}", m.name(), val.dim())));
    }
    Ok(val)
}

/// Relations from every `Cat Lie(z', z)` basis morphism rather than the generators only.
pub fn full_relation_subspace(m: &LieModule, val: &InducedValue) -> Subspace {
    let t = val.t;
    let mut rels = Vec::new();
    for zp in 0..=m.truncation() {
        for z in 0..=zp {
            let lie = hom_space(OperadId::Lie, zp, z);
            let ass = hom_space(OperadId::AssU, z, t);
            if m.dim(zp) == 0 || lie.dim() == 0 || ass.dim() == 0 {
                continue;
            }
            for lam in lie.basis() {
                let ml = m.basis_morphism(lam);
                let exp = lam.lie_expansion();
                for b in ass.basis() {
                    for j in 0..m.dim(zp) {
                        let v = vec![(j, Scalar::one())];
                        let mut acc = Accum::new();
                        for (e, x) in &exp {
                            val.embed_into(m, &b.compose(e), &v, x, &mut acc);
                        }
                        val.embed_into(m, b, ml.column(j), &Scalar::from_i64(-1), &mut acc);
                        rels.push(acc.into_sparse());
                    }
                }
            }
        }
    }
    Subspace::span(val.coinvariant_dim, rels)
}

/// `F(φ)` between induced values, for `φ : F_s → F_t`.
#[derive(Clone, Debug)]
pub struct AnalyticValueMap {
    pub source_rank: usize,
    pub target_rank: usize,
    pub matrix: SparseMat,
}

/// `φ^* ⊗ id` on coinvariant coordinates, `val_t` to `val_s`.
pub fn lifted_map(m: &LieModule, phi: &FreeGroupHom, val_t: &InducedValue, val_s: &InducedValue) -> SparseMat {
    let coords: Vec<(usize, Vec<usize>, usize)> = val_t.coordinates().map(|(z, c, i)| (z, c.to_vec(), i)).collect();
    let cols = par::map(&coords, |(_, comp, i)| {
        let b = canonical_elem(comp);
        let v = vec![(*i, Scalar::one())];
        let mut acc = Accum::new();
        for (bb, x) in act(phi, &b) {
            val_s.embed_into(m, &bb, &v, &x, &mut acc);
        }
        acc.into_sparse()
    });
    SparseMat::from_columns(val_s.coinvariant_dim, cols)
}

/// The matrix of `F(φ)` on quotient bases; errors if the lifted map does not
/// carry relations into relations.
pub fn induce_map(m: &LieModule, phi: &FreeGroupHom, val_t: &InducedValue, val_s: &InducedValue) -> Result<AnalyticValueMap> {
    if val_t.t != phi.target || val_s.t != phi.source {
        return Err(Error::Input(format!("values at F_{} and F_{} do not match φ : F_{} → F_{}", val_t.t, val_s.t, phi.source, phi.target)));
    }
    let lifted = lifted_map(m, phi, val_t, val_s);
    let down = val_s.projection.mul(&lifted);
    if val_t.relations.basis().iter().any(|r| !down.apply(r).is_empty()) {
        return Err(Error::Invariant(format!("φ = {phi} does not preserve the relations of {}", m.name())));
    }
    Ok(AnalyticValueMap { source_rank: phi.target, target_rank: phi.source, matrix: down.select_columns(&val_t.lifts) })
}

/// Checks that `φ^* ⊗ id`, applied to every generating relation of the free
/// presentation (`𝔖`-relations for adjacent transpositions and `α`-relations),
/// lands in the relations at `F_s`.
pub fn well_definedness_check(m: &LieModule, phi: &FreeGroupHom, val_t: &InducedValue, val_s: &InducedValue) -> bool {
    let t = val_t.t;
    let image_vanishes = |terms: &[(AssBasisElem, SparseVec, Scalar)]| {
        let mut acc = Accum::new();
        for (b, v, x) in terms {
            for (bb, y) in act(phi, b) {
                val_s.embed_into(m, &bb, v, &(&y * x), &mut acc);
            }
        }
        val_s.projection.apply(&acc.into_sparse()).is_empty()
    };
    (0..=m.truncation()).all(|z| {
        let ass = hom_space(OperadId::AssU, z, t);
        let alpha = (z >= 1 && z < m.truncation() && m.dim(z + 1) > 0).then(|| (alpha_elem(z).lie_expansion(), m.alpha(z)));
        par::all(ass.basis(), |b| {
            for i in 0..z.saturating_sub(1) {
                let s = Perm::adjacent(z, i);
                let bs = b.compose(&AssBasisElem::from_perm(&s));
                let ms = m.transposition(z, i);
                for j in 0..m.dim(z) {
                    let terms = vec![(bs.clone(), vec![(j, Scalar::one())], Scalar::one()), (b.clone(), ms.column(j).to_vec(), Scalar::from_i64(-1))];
                    if !image_vanishes(&terms) {
                        return false;
                    }
                }
            }
            if let Some((exp, ma)) = &alpha {
                for j in 0..m.dim(z + 1) {
                    let mut terms: Vec<(AssBasisElem, SparseVec, Scalar)> = exp.iter().map(|(e, x)| (b.compose(e), vec![(j, Scalar::one())], x.clone())).collect();
                    terms.push((b.clone(), ma.column(j).to_vec(), Scalar::from_i64(-1)));
                    if !image_vanishes(&terms) {
                        return false;
                    }
                }
            }
            true
        })
    })
}

/// The induced functor, evaluated lazily and memoized per rank.
pub struct InducedFunctor {
    module: LieModule,
    values: Mutex<HashMap<usize, Arc<InducedValue>>>,
}

impl InducedFunctor {
    pub fn new(module: LieModule) -> Self {
        InducedFunctor { module, values: Mutex::new(HashMap::new()) }
    }

    pub fn module(&self) -> &LieModule {
        &self.module
    }

    pub fn value(&self, t: usize) -> Arc<InducedValue> {
        if let Some(v) = self.values.lock().expect("value cache").get(&t) {
            return v.clone();
        }
        let v = Arc::new(induce_value(&self.module, t).expect("induced value matches the PBW count"));
        self.values.lock().expect("value cache").entry(t).or_insert(v).clone()
    }

    pub fn try_map(&self, phi: &FreeGroupHom) -> Result<SparseMat> {
        Ok(induce_map(&self.module, phi, &self.value(phi.target), &self.value(phi.source))?.matrix)
    }
}

impl GrFunctor for InducedFunctor {
    fn name(&self) -> String {
        format!("induce({})", self.module.name())
    }

    fn dim(&self, t: usize) -> usize {
        self.value(t).dim()
    }

    fn map(&self, phi: &FreeGroupHom) -> SparseMat {
        self.try_map(phi).expect("well-defined induced map")
    }

    fn degree_bound(&self) -> usize {
        self.module.truncation()
    }
}

/// Checks that `iso(t) : F(F_t) → G(F_t)` is invertible for `t ≤ bound` and
/// natural for every generating homomorphism with ranks `≤ bound`.
pub fn natural_iso_check(f: &dyn GrFunctor, g: &dyn GrFunctor, iso: &dyn Fn(usize) -> Option<SparseMat>, bound: usize) -> bool {
    let mut isos = Vec::new();
    for t in 0..=bound {
        let Some(i) = iso(t) else { return false };
        if i.shape() != (g.dim(t), f.dim(t)) || i.nrows() != i.ncols() || rank(&i) != i.nrows() {
            return false;
        }
        isos.push(i);
    }
    let homs = generating_homs(bound);
    par::all(&homs, |h| {
        let phi = &h.hom;
        g.map(phi).mul(&isos[phi.target]) == isos[phi.source].mul(&f.map(phi))
    })
}

/// Index of the function `a ↦ f(a)` in `(𝕜^t)^{⊗d}`, letter 0 most significant.
fn function_index(images: &[usize], t: usize) -> usize {
    images.iter().fold(0, |acc, &x| acc * t + x)
}

/// `Q : b_c ⊗ e_π ↦ e_{f(b_c ∘ π)}` from `induce(𝕜[𝔖_d])` to `(𝕜^t)^{⊗d}`, descended.
pub fn abelian_identification(f: &InducedFunctor, d: usize, t: usize) -> Option<SparseMat> {
    let val = f.value(t);
    let perms = all_perms(d);
    let cols = val
        .coordinates()
        .map(|(z, comp, i)| {
            assert_eq!(z, d, "module concentrated in arity d");
            let b = canonical_elem(comp).compose(&AssBasisElem::from_perm(&perms[i]));
            vec![(function_index(&b.images(), t), Scalar::one())]
        })
        .collect();
    val.descend(&SparseMat::from_columns(t.pow(d as u32), cols))
}

/// `Y : b ⊗ λ ↦ b ∘ λ` from `induce(P_n)` to `Cat Ass^u(n, t)`, descended.
pub fn yoneda_identification(f: &InducedFunctor, n: usize, t: usize) -> Option<SparseMat> {
    let val = f.value(t);
    let target = hom_space(OperadId::AssU, n, t);
    let cols = val
        .coordinates()
        .map(|(z, comp, i)| {
            let b = canonical_elem(comp);
            let lam = hom_space(OperadId::Lie, n, z);
            let mut c = BTreeMap::new();
            for (e, x) in lam.elem(i).lie_expansion() {
                crate::propcat::comb_add(&mut c, b.compose(&e), x);
            }
            target.coords(&c).expect("composite lies in Cat Ass^u")
        })
        .collect();
    val.descend(&SparseMat::from_columns(target.dim(), cols))
}

/// `Hom(ΔCat Ass^u(n, −), F)` as a subspace of `F(F_n)`.
#[derive(Clone, Debug)]
pub struct ProjectiveHom {
    pub n: usize,
    pub solutions: Subspace,
    pub character: Character,
}

/// `x_j ↦ x_j²`, the rest fixed.
pub fn square_hom(n: usize, j: usize) -> FreeGroupHom {
    let words = (0..n)
        .map(|i| {
            let l = Letter { gen: i, inv: false };
            GroupWord(if i == j { vec![l, l] } else { vec![l] })
        })
        .collect();
    FreeGroupHom::new(n, n, words).expect("square homomorphism")
}

/// `F_s → F_n`, `x_i ↦` the product of the letters of fibre `i` of `y ∈ Cat Ass^u(n, s)`.
pub fn fibre_product_hom(y: &AssBasisElem) -> FreeGroupHom {
    let words = (0..y.codomain()).map(|i| GroupWord(y.fibre(i).iter().map(|&a| Letter { gen: a as usize, inv: false }).collect())).collect();
    FreeGroupHom::new(y.codomain(), y.domain(), words).expect("fibre product homomorphism")
}

/// Natural transformations out of `ΔCat Ass^u(n, −)` are determined by the
/// image `v ∈ F(F_n)` of the identity, which must satisfy the equations the
/// identity satisfies: `F(ι_j)v = 0` for the insertions missing `x_j`, and
/// `F(x_j ↦ x_j²)v = 2v`.
pub fn hom_from_projectives(f: &dyn GrFunctor, n: usize) -> ProjectiveHom {
    let dim = f.dim(n);
    let mut eqs = Vec::new();
    for j in 0..n {
        eqs.push(f.map(&FreeGroupHom::insert(n, j)));
        eqs.push(f.map(&square_hom(n, j)).sub(&SparseMat::identity(dim).scale(&Scalar::from_i64(2))));
    }
    let solutions = if eqs.is_empty() { Subspace::full(dim) } else { kernel_basis(&SparseMat::vstack(&eqs)) };
    let character = subspace_character(f, n, &solutions);
    ProjectiveHom { n, solutions, character }
}

/// Checks that `η(y) = F(φ_y)v` is natural in `y ∈ Cat Ass^u(n, −)` for every
/// solution `v` and every generating homomorphism with ranks `≤ bound`.
pub fn verify_naturality(f: &dyn GrFunctor, hom: &ProjectiveHom, bound: usize) -> bool {
    let n = hom.n;
    let homs = generating_homs(bound);
    hom.solutions.basis().iter().all(|v| {
        let eta = |y: &AssBasisElem| f.map(&fibre_product_hom(y)).apply(v);
        par::all(&homs, |h| {
            let psi = &h.hom;
            let fpsi = f.map(psi);
            hom_space(OperadId::AssU, n, psi.target).basis().iter().all(|x| {
                let mut lhs = Accum::new();
                for (y, c) in act(psi, x) {
                    lhs.add_vec(&eta(&y), &c);
                }
                lhs.into_sparse() == fpsi.apply(&eta(x))
            })
        })
    })
}

/// `Θ(b₁ ⊗ u, b₂ ⊗ w) = (b₁ ⊔ b₂) ⊗ (u ⊗ w)`, fibre `k` of `b₁ ⊔ b₂` being
/// fibre `k` of `b₁` followed by fibre `k` of `b₂` shifted past `b₁`'s letters.
fn juxtapose(b1: &AssBasisElem, b2: &AssBasisElem) -> AssBasisElem {
    let shift = b1.domain();
    let fibres: Vec<Vec<usize>> = b1
        .fibres()
        .into_iter()
        .zip(b2.fibres())
        .map(|(mut f, g)| {
            f.extend(g.into_iter().map(|a| a + shift));
            f
        })
        .collect();
    AssBasisElem::from_fibres(&fibres).expect("juxtaposed fibres")
}

struct TensorSetup<'a> {
    f: &'a LieModule,
    g: &'a LieModule,
    conv: LieModule,
}

impl TensorSetup<'_> {
    /// `Θ` on free generators, in the coinvariant coordinates of `F ⊙ G`.
    fn theta_free(&self, vc: &InducedValue, b1: &AssBasisElem, u: &[(usize, Scalar)], b2: &AssBasisElem, w: &[(usize, Scalar)], x: &Scalar, acc: &mut Accum) {
        let (z1, z2) = (b1.domain(), b2.domain());
        let lay = convolution_layout(self.f, self.g, z1 + z2);
        let Some((off, _, db)) = lay.offset((1u64 << z1) - 1) else { return };
        let mut v = Accum::new();
        for (i, a) in u {
            for (j, c) in w {
                v.add(off + i * db + j, &(a * c));
            }
        }
        vc.embed_into(&self.conv, &juxtapose(b1, b2), &v.into_sparse(), x, acc);
    }

    fn theta(&self, vf: &InducedValue, vg: &InducedValue, vc: &InducedValue) -> SparseMat {
        let pairs: Vec<(usize, usize)> = vf.lifts.iter().flat_map(|&a| vg.lifts.iter().map(move |&b| (a, b))).collect();
        let cols = par::map(&pairs, |&(a, b)| {
            let (_, c1, i) = vf.decode(a);
            let (_, c2, j) = vg.decode(b);
            let mut acc = Accum::new();
            self.theta_free(vc, &canonical_elem(c1), &[(i, Scalar::one())], &canonical_elem(c2), &[(j, Scalar::one())], &Scalar::one(), &mut acc);
            vc.projection.apply(&acc.into_sparse())
        });
        SparseMat::from_columns(vc.dim(), cols)
    }

    /// `Θ` kills the generating relations in either tensor factor.
    fn well_defined(&self, vf: &InducedValue, vg: &InducedValue, vc: &InducedValue) -> bool {
        let t = vf.t;
        let side = |m: &LieModule, other: &InducedValue, left: bool| -> bool {
            let others: Vec<(AssBasisElem, usize)> = other.coordinates().map(|(_, c, i)| (canonical_elem(c), i)).collect();
            (0..=m.truncation()).all(|z| {
                let ass = hom_space(OperadId::AssU, z, t);
                let mut rels: Vec<Vec<(AssBasisElem, SparseVec, Scalar)>> = Vec::new();
                for b in ass.basis() {
                    for i in 0..z.saturating_sub(1) {
                        let bs = b.compose(&AssBasisElem::from_perm(&Perm::adjacent(z, i)));
                        for j in 0..m.dim(z) {
                            rels.push(vec![(bs.clone(), vec![(j, Scalar::one())], Scalar::one()), (b.clone(), m.transposition(z, i).column(j).to_vec(), Scalar::from_i64(-1))]);
                        }
                    }
                    if z >= 1 && z < m.truncation() {
                        let exp = alpha_elem(z).lie_expansion();
                        let ma = m.alpha(z);
                        for j in 0..m.dim(z + 1) {
                            let mut r: Vec<(AssBasisElem, SparseVec, Scalar)> = exp.iter().map(|(e, x)| (b.compose(e), vec![(j, Scalar::one())], x.clone())).collect();
                            r.push((b.clone(), ma.column(j).to_vec(), Scalar::from_i64(-1)));
                            rels.push(r);
                        }
                    }
                }
                par::all(&rels, |r| {
                    others.iter().all(|(bo, io)| {
                        let wo = vec![(*io, Scalar::one())];
                        let mut acc = Accum::new();
                        for (b, v, x) in r {
                            if left {
                                self.theta_free(vc, b, v, bo, &wo, x, &mut acc);
                            } else {
                                self.theta_free(vc, bo, &wo, b, v, x, &mut acc);
                            }
                        }
                        vc.projection.apply(&acc.into_sparse()).is_empty()
                    })
                })
            })
        };
        side(self.f, vg, true) && side(self.g, vf, false)
    }
}

/// Outcome of the tensor compatibility check, one flag per property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorCheck {
    pub well_defined: bool,
    pub isomorphism: bool,
    pub natural: bool,
}

impl TensorCheck {
    pub fn passed(&self) -> bool {
        self.well_defined && self.isomorphism && self.natural
    }
}

/// `induce(F)(F_r) ⊗ induce(G)(F_r) → induce(F ⊙ G)(F_r)` for every `r ≤ t`:
/// well-defined, invertible, and natural for the generating homomorphisms.
pub fn tensor_compatibility_check(f: &LieModule, g: &LieModule, t: usize) -> TensorCheck {
    let setup = TensorSetup { f, g, conv: convolution(f, g) };
    let (iff, ig, ic) = (InducedFunctor::new(f.clone()), InducedFunctor::new(g.clone()), InducedFunctor::new(setup.conv.clone()));
    let mut out = TensorCheck { well_defined: true, isomorphism: true, natural: true };
    let mut thetas = Vec::new();
    for r in 0..=t {
        let (vf, vg, vc) = (iff.value(r), ig.value(r), ic.value(r));
        out.well_defined &= setup.well_defined(&vf, &vg, &vc);
        let th = setup.theta(&vf, &vg, &vc);
        out.isomorphism &= th.nrows() == th.ncols() && rank(&th) == th.nrows();
        thetas.push(th);
    }
    out.natural = generating_homs(t).iter().all(|h| {
        let phi = &h.hom;
        let lhs = thetas[phi.source].mul(&iff.map(phi).kron(&ig.map(phi)));
        let rhs = ic.map(phi).mul(&thetas[phi.target]);
        lhs == rhs
    });
    out
}

/// `Ug` in the ordered-monomial basis of a Lie algebra with structure constants `c`.
pub struct Ug {
    c: StructureConstants,
    memo: Mutex<HashMap<Vec<usize>, Vec<(Vec<usize>, Scalar)>>>,
}

impl Ug {
    pub fn new(c: StructureConstants) -> Self {
        Ug { c, memo: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    /// Rewrites a product `e_{w₀} ⋯ e_{w_k}` in ordered monomials, using
    /// `e_b e_a = e_a e_b + [e_b, e_a]` at the first descent.
    pub fn straighten(&self, w: &[usize]) -> Vec<(Vec<usize>, Scalar)> {
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) else {
            return vec![(w.to_vec(), Scalar::one())];
        };
        if let Some(r) = self.memo.lock().expect("straightening memo").get(w) {
            return r.clone();
        }
        let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        let mut swapped = w.to_vec();
        swapped.swap(i, i + 1);
        for (u, x) in self.straighten(&swapped) {
            *acc.entry(u).or_insert_with(Scalar::zero) += x;
        }
        for (k, ck) in self.c[w[i]][w[i + 1]].iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let mut shorter = w[..i].to_vec();
            shorter.push(k);
            shorter.extend_from_slice(&w[i + 2..]);
            for (u, x) in self.straighten(&shorter) {
                *acc.entry(u).or_insert_with(Scalar::zero) += x * ck;
            }
        }
        let r: Vec<(Vec<usize>, Scalar)> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        self.memo.lock().expect("straightening memo").insert(w.to_vec(), r.clone());
        r
    }

    /// Straightens every slot of a tensor of words.
    pub fn straighten_tensor(&self, slots: &[Vec<usize>]) -> Vec<(Vec<Vec<usize>>, Scalar)> {
        let mut acc: Vec<(Vec<Vec<usize>>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for s in slots {
            let terms = self.straighten(s);
            let mut next = Vec::with_capacity(acc.len() * terms.len());
            for (ws, c) in &acc {
                for (u, x) in &terms {
                    let mut nw = ws.clone();
                    nw.push(u.clone());
                    next.push((nw, c * x));
                }
            }
            acc = next;
        }
        acc
    }
}

/// Ordered monomials of length `≤ n` in `r` letters.
fn monomials(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            let lo = w.last().copied().unwrap_or(0);
            for a in lo..r {
                let mut u: Vec<usize> = w.clone();
                u.push(a);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Basis of the filtration-`≤ N` part of `(Ug)^{⊗t}`: tuples of ordered monomials.
pub struct UgTensorBasis {
    pub t: usize,
    pub basis: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<Vec<usize>>, usize>,
}

impl UgTensorBasis {
    pub fn new(r: usize, truncation: usize, t: usize) -> Self {
        let monos = monomials(r, truncation);
        let mut basis: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for _ in 0..t {
            let mut next = Vec::new();
            for tup in &basis {
                let used: usize = tup.iter().map(Vec::len).sum();
                for m in monos.iter().filter(|m| used + m.len() <= truncation) {
                    let mut nt = tup.clone();
                    nt.push(m.clone());
                    next.push(nt);
                }
            }
            basis = next;
        }
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        UgTensorBasis { t, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn add_straightened(&self, ug: &Ug, slots: &[Vec<usize>], x: &Scalar, acc: &mut Accum) {
        for (tup, y) in ug.straighten_tensor(slots) {
            let i = self.index[&tup];
            acc.add(i, &(&y * x));
        }
    }
}

/// `Φ(Ug)(φ) : (Ug)^{⊗t} → (Ug)^{⊗s}`: coproducts along repeated letters,
/// antipodes along inverse letters, products along words.
pub fn phi_ug_map(ug: &Ug, phi: &FreeGroupHom, src: &UgTensorBasis, dst: &UgTensorBasis) -> SparseMat {
    let cols = par::map(&src.basis, |tup| {
        let mut acc = Accum::new();
        for (words, c) in act_words(phi, tup) {
            dst.add_straightened(ug, &words, &c, &mut acc);
        }
        acc.into_sparse()
    });
    SparseMat::from_columns(dst.dim(), cols)
}

/// `Ψ(b_c ⊗ e_{i₀} ⊗ ⋯ ⊗ e_{i_{z−1}})`: each fibre multiplies its tensor factors in `Ug`.
pub fn ug_comparison_map(ug: &Ug, val: &InducedValue, dst: &UgTensorBasis) -> SparseMat {
    let r = ug.rank();
    let cols = val
        .coordinates()
        .map(|(z, comp, idx)| {
            let mut digits = vec![0; z];
            let mut x = idx;
            for k in (0..z).rev() {
                digits[k] = x % r;
                x /= r;
            }
            let mut slots = Vec::with_capacity(comp.len());
            let mut pos = 0;
            for &c in comp {
                slots.push(digits[pos..pos + c].to_vec());
                pos += c;
            }
            let mut acc = Accum::new();
            dst.add_straightened(ug, &slots, &Scalar::one(), &mut acc);
            acc.into_sparse()
        })
        .collect();
    SparseMat::from_columns(dst.dim(), cols)
}

/// Outcome of the `Φ(Ug)` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UgCheck {
    pub dims: Vec<(usize, usize)>,
    pub descends: bool,
    pub isomorphism: bool,
    pub natural: bool,
}

impl UgCheck {
    pub fn passed(&self) -> bool {
        self.descends && self.isomorphism && self.natural && self.dims.iter().all(|(a, b)| a == b)
    }
}

/// Compares `induce(g̲)` truncated at `N` with the filtration-`≤ N` part of
/// `Φ(Ug)` at every rank `≤ t`, through the explicit map `Ψ`.
pub fn phi_ug_compare(c: &StructureConstants, truncation: usize, t: usize) -> Result<UgCheck> {
    let m = lie_algebra_module(c, truncation)?;
    if let Some(v) = validate(&m).into_iter().next() {
        return Err(Error::Input(format!("g̲ fails validation: {}", v.description)));
    }
    let ug = Ug::new(c.clone());
    let f = InducedFunctor::new(m);
    let bases: Vec<UgTensorBasis> = (0..=t).map(|r| UgTensorBasis::new(c.len(), truncation, r)).collect();
    let mut out = UgCheck { dims: Vec::new(), descends: true, isomorphism: true, natural: true };
    let mut psis = Vec::new();
    for r in 0..=t {
        let val = f.value(r);
        out.dims.push((val.dim(), bases[r].dim()));
        match val.descend(&ug_comparison_map(&ug, &val, &bases[r])) {
            Some(p) => {
                out.isomorphism &= p.nrows() == p.ncols() && rank(&p) == p.nrows();
                psis.push(p);
            }
            None => {
                out.descends = false;
                return Ok(out);
            }
        }
    }
    out.natural = generating_homs(t).iter().all(|h| {
        let phi = &h.hom;
        let lhs = psis[phi.source].mul(&f.map(phi));
        let rhs = phi_ug_map(&ug, phi, &bases[phi.target], &bases[phi.source]).mul(&psis[phi.target]);
        lhs == rhs
    });
    Ok(out)
}

/// `induce(M)` at `F_t` as a `GrFunctor` value, for callers that only need dimensions.
pub fn induced_dims(m: &LieModule, t_max: usize) -> Result<Vec<usize>> {
    (0..=t_max).map(|t| induce_value(m, t).map(|v| v.dim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial;
    use crate::funcalc::{regular_character, tre_value, AbelianPower, AssuFunctor};
    use crate::liemod::{abelian_lie_algebra, regular_module, representable_module, sign_module, sl2, trivial_module, direct_sum};

    #[test]
    fn regular_modules_give_tensor_powers() {
        for d in 0..=3 {
            let m = regular_module(d);
            for t in 0..=3 {
                assert_eq!(induce_value(&m, t).unwrap().dim(), t.pow(d as u32), "d = {d}, t = {t}");
            }
        }
    }

    #[test]
    fn abelian_lie_algebra_counts_monomials() {
        let m = lie_algebra_module(&abelian_lie_algebra(1), 3).unwrap();
        for t in 0..=3 {
            let expected: u64 = (0..=3).map(|k| if t == 0 { u64::from(k == 0) } else { binomial(t + k - 1, k) }).sum();
            assert_eq!(induce_value(&m, t).unwrap().dim() as u64, expected);
        }
    }

    #[test]
    fn basic_maps() {
        let f = InducedFunctor::new(regular_module(1));
        assert_eq!(f.map(&FreeGroupHom::identity(2)), SparseMat::identity(2));
        assert_eq!(f.map(&FreeGroupHom::inversion(1, 0)), SparseMat::identity(1).neg());
        let fold = f.map(&FreeGroupHom::fold(1));
        assert_eq!(fold.shape(), (2, 1));
        assert_eq!(fold.nnz(), 2);
    }

    #[test]
    fn generator_relations_suffice() {
        for m in [regular_module(2), representable_module(2, 2), lie_algebra_module(&sl2(), 2).unwrap()] {
            for t in 0..=2 {
                let val = induce_value(&m, t).unwrap();
                assert!(full_relation_subspace(&m, &val).is_subspace_of(&val.relations));
                assert!(val.relations.is_subspace_of(&full_relation_subspace(&m, &val)));
            }
        }
    }

    #[test]
    fn well_defined_on_small_modules() {
        let m = representable_module(2, 2);
        let f = InducedFunctor::new(m.clone());
        for h in generating_homs(3) {
            let (vt, vs) = (f.value(h.hom.target), f.value(h.hom.source));
            assert!(well_definedness_check(&m, &h.hom, &vt, &vs), "{}", h.name);
        }
    }

    #[test]
    fn identifications() {
        let f = InducedFunctor::new(regular_module(2));
        let g = AbelianPower { d: 2 };
        assert!(natural_iso_check(&f, &g, &|t| abelian_identification(&f, 2, t), 3));
        let p = InducedFunctor::new(representable_module(2, 2));
        let a = AssuFunctor { d: 2 };
        assert!(natural_iso_check(&p, &a, &|t| yoneda_identification(&p, 2, t), 3));
    }

    #[test]
    fn cross_effects_recover_the_module() {
        let f = InducedFunctor::new(regular_module(2));
        assert_eq!(tre_value(&f, 2).character, regular_character(2));
        assert_eq!(poly_degree(&f, 3), Some(2));
        let s = InducedFunctor::new(sign_module(2));
        assert_eq!(tre_value(&s, 2).character, module_character(&sign_module(2), 2));
    }

    #[test]
    fn projective_homs() {
        let a = AssuFunctor { d: 2 };
        let h = hom_from_projectives(&a, 2);
        assert_eq!(h.character, regular_character(2));
        assert!(verify_naturality(&a, &h, 2));
        assert_eq!(hom_from_projectives(&a, 1).solutions.dim(), 1);
        let p = InducedFunctor::new(representable_module(2, 2));
        assert_eq!(hom_from_projectives(&p, 1).solutions.dim(), 1);
        let r = InducedFunctor::new(regular_module(2));
        assert_eq!(hom_from_projectives(&r, 1).solutions.dim(), 0);
    }

    #[test]
    fn exact_on_direct_sums() {
        let (a, b) = (trivial_module(2), regular_module(1));
        let s = direct_sum(&a, &b);
        for t in 0..=3 {
            assert_eq!(induce_value(&s, t).unwrap().dim(), induce_value(&a, t).unwrap().dim() + induce_value(&b, t).unwrap().dim());
        }
    }

    #[test]
    fn tensor_of_abelian_duals() {
        let a = regular_module(1);
        assert!(tensor_compatibility_check(&a, &a, 2).passed());
        assert!(tensor_compatibility_check(&regular_module(0), &representable_module(1, 1), 2).passed());
    }

    #[test]
    fn ug_small() {
        assert!(phi_ug_compare(&abelian_lie_algebra(1), 2, 2).unwrap().passed());
        assert!(phi_ug_compare(&sl2(), 2, 2).unwrap().passed());
        assert!(phi_ug_compare(&sl2(), 0, 2).unwrap().passed());
    }

    #[test]
    fn straightening_in_sl2() {
        let ug = Ug::new(sl2());
        // f e = e f − h
        let r = ug.straighten(&[2, 0]);
        assert_eq!(r, vec![(vec![0, 2], Scalar::one()), (vec![1], Scalar::from_i64(-1))]);
    }
}

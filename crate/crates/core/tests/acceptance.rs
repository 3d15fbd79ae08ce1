//! The acceptance suite. Runs every criterion at its stated bounds and prints
//! one `PASS` or `FAIL` line per criterion; exits nonzero if any fails.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opcat::combinat::factorial;
use opcat::exactlin::{Scalar, SparseVec};
use opcat::funcalc::{poly_degree, regular_character, tre_value, AbelianPower, AssuFunctor};
use opcat::gract::generating_homs;
use opcat::induction::{
    abelian_identification, hom_from_projectives, natural_iso_check, phi_ug_compare, tensor_compatibility_check, well_definedness_check,
    yoneda_identification, InducedFunctor,
};
use opcat::koszul::{ext_complex, resolution_com, resolution_grop};
use opcat::liemod::{
    abelian_lie_algebra, convolution, direct_sum, e_module, heisenberg, lie_algebra_module, module_homs, regular_module, representable_module,
    sign_module, sl2, trivial_module, truncate, LieModule, ModuleMap,
};
use opcat::operads::OperadId;
use opcat::propcat::{compose, hom_space, pbw_check, AssBasisElem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All functions `m → n` by counting in base `n`.
fn brute_functions(m: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if m == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let total = n.pow(m as u32);
    (0..total)
        .map(|mut k| {
            let mut f = vec![0; m];
            for slot in f.iter_mut().rev() {
                *slot = k % n;
                k /= n;
            }
            f
        })
        .collect()
}

fn fibre_sizes(f: &[usize], n: usize) -> Vec<usize> {
    let mut s = vec![0; n];
    for &x in f {
        s[x] += 1;
    }
    s
}

fn ac1() -> Outcome {
    for m in 0..=6 {
        for n in 0..=6 {
            let funcs = brute_functions(m, n);
            let pairs: u64 = funcs.iter().map(|f| fibre_sizes(f, n).iter().map(|&k| factorial(k)).product::<u64>()).sum();
            let rising: u64 = (0..m).map(|i| (n + i) as u64).product();
            let ass = hom_space(OperadId::AssU, m, n).dim() as u64;
            ensure(ass == pairs && pairs == rising, || format!("Ass^u({m},{n}): {ass} vs pairs {pairs} vs rising {rising}"))?;
            let lie_count: u64 = funcs
                .iter()
                .map(|f| fibre_sizes(f, n))
                .filter(|s| s.iter().all(|&k| k > 0))
                .map(|s| s.iter().map(|&k| factorial(k - 1)).product::<u64>())
                .sum();
            let lie = hom_space(OperadId::Lie, m, n).dim() as u64;
            ensure(lie == lie_count, || format!("Lie({m},{n}): {lie} vs {lie_count}"))?;
            if m < n {
                ensure(lie == 0, || format!("Lie({m},{n}) nonzero above the diagonal"))?;
            }
        }
    }
    Ok("m, n <= 6".into())
}

fn random_assu(rng: &mut ChaCha8Rng, m: usize, n: usize) -> AssBasisElem {
    let h = hom_space(OperadId::AssU, m, n);
    h.elem(rng.gen_range(0..h.dim())).clone()
}

fn random_lie(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SparseVec {
    let h = hom_space(OperadId::Lie, m, n);
    let mut v = SparseVec::new();
    for i in 0..h.dim() {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 && rng.gen_bool(0.5) {
            v.push((i, Scalar::from_i64(c)));
        }
    }
    if v.is_empty() && h.dim() > 0 {
        v.push((rng.gen_range(0..h.dim()), Scalar::one()));
    }
    v
}

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let triples = 600;
    for _ in 0..triples {
        let (m, n, p, q) = (rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(0..=4));
        // Hom-sets into 0 are empty unless the source is 0.
        if (n > 0 || m == 0) && (p > 0 || n == 0) && (q > 0 || p == 0) {
            let (f, g, h) = (random_assu(&mut rng, m, n), random_assu(&mut rng, n, p), random_assu(&mut rng, p, q));
            ensure(h.compose(&g.compose(&f)) == h.compose(&g).compose(&f), || format!("Ass^u associativity at {f} {g} {h}"))?;
            ensure(AssBasisElem::identity(n).compose(&f) == f && f.compose(&AssBasisElem::identity(m)) == f, || format!("Ass^u units at {f}"))?;
        }
        // Lie composites need m ≥ n ≥ p ≥ q.
        let mut a = [m, n, p, q];
        a.sort_unstable_by(|x, y| y.cmp(x));
        let [m, n, p, q] = a;
        let (f, g, h) = (random_lie(&mut rng, m, n), random_lie(&mut rng, n, p), random_lie(&mut rng, p, q));
        let lie = |a: usize, b: usize, c: usize, x: &SparseVec, y: &SparseVec| compose(OperadId::Lie, a, b, c, x, y).map_err(|e| e.to_string());
        let left = lie(m, p, q, &h, &lie(m, n, p, &g, &f)?)?;
        let right = lie(m, n, q, &lie(n, p, q, &h, &g)?, &f)?;
        ensure(left == right, || format!("Lie associativity at arities {m} {n} {p} {q}"))?;
        let idn: SparseVec = vec![(hom_space(OperadId::Lie, n, n).index_of(&AssBasisElem::identity(n)).expect("identity"), Scalar::one())];
        let idm: SparseVec = vec![(hom_space(OperadId::Lie, m, m).index_of(&AssBasisElem::identity(m)).expect("identity"), Scalar::one())];
        ensure(lie(m, n, n, &idn, &f)? == f && lie(m, m, n, &f, &idm)? == f, || format!("Lie units at arities {m} {n}"))?;
    }
    Ok(format!("{triples} random triples"))
}

fn ac3() -> Outcome {
    for m in 0..=5 {
        for n in 0..=5 {
            let s = pbw_check(m, n);
            ensure(s.is_iso(), || format!("slice ({m},{n}): {s:?}"))?;
        }
    }
    Ok("m, n <= 5".into())
}

fn ac4() -> Outcome {
    for d in 1..=5 {
        for t in 0..=5 {
            let c = resolution_grop(d, t);
            ensure(c.squares_to_zero(), || format!("d^2 != 0 at d = {d}, t = {t}"))?;
            let h = c.augmented_homology();
            ensure(h.iter().all(|&x| x == 0), || format!("homology {h:?} at d = {d}, t = {t}"))?;
            ensure(c.target_dim() == t.pow(d as u32), || format!("augmentation target {} at d = {d}, t = {t}", c.target_dim()))?;
            ensure(c.minimality_check(), || format!("not minimal at d = {d}, t = {t}"))?;
        }
    }
    Ok("d <= 5, t <= 5".into())
}

fn ac5() -> Outcome {
    for m in 1..=4 {
        for n in 0..=4 {
            let c = resolution_com(m, n);
            ensure(c.complex.squares_to_zero(), || format!("d^2 != 0 at m = {m}, n = {n}"))?;
            let h = c.homology();
            let top = if n == m { factorial(m) as usize } else { 0 };
            let expected: Vec<usize> = (1..=m).map(|i| if i == m { top } else { 0 }).collect();
            ensure(h == expected, || format!("homology {h:?} at m = {m}, n = {n}, expected {expected:?}"))?;
        }
    }
    Ok("m, n <= 4".into())
}

fn ac6() -> Outcome {
    for d in 0..=4 {
        let f = InducedFunctor::new(regular_module(d));
        for t in 0..=4 {
            let dim = f.value(t).dim();
            ensure(dim == t.pow(d as u32), || format!("dim {dim} at d = {d}, t = {t}"))?;
        }
        let g = AbelianPower { d };
        ensure(natural_iso_check(&f, &g, &|t| abelian_identification(&f, d, t), 4), || format!("generator actions differ at d = {d}"))?;
    }
    Ok("d <= 4, t <= 4".into())
}

fn ac7() -> Outcome {
    for n in 0..=4 {
        let p = InducedFunctor::new(representable_module(n, n.max(1)));
        let a = AssuFunctor { d: n };
        ensure(natural_iso_check(&p, &a, &|t| yoneda_identification(&p, n, t), 4), || format!("Yoneda identification fails at n = {n}"))?;
        let h = hom_from_projectives(&a, n);
        ensure(h.character == regular_character(n), || format!("character {:?} at n = {n}", h.character))?;
    }
    Ok("n <= 4, t <= 4".into())
}

fn suite_modules() -> Result<Vec<LieModule>, String> {
    let e = |r: opcat::Result<LieModule>| r.map_err(|e| e.to_string());
    let p1 = representable_module(1, 1);
    Ok(vec![
        regular_module(0),
        regular_module(1),
        regular_module(2),
        regular_module(3),
        sign_module(2),
        representable_module(1, 1),
        representable_module(2, 2),
        representable_module(3, 3),
        e_module(),
        e(lie_algebra_module(&sl2(), 2))?,
        e(lie_algebra_module(&abelian_lie_algebra(1), 3))?,
        e(lie_algebra_module(&heisenberg(), 2))?,
        truncate(&convolution(&p1, &p1), 2),
    ])
}

fn ac8() -> Outcome {
    let homs = generating_homs(4);
    let mods = suite_modules()?;
    for m in &mods {
        let f = InducedFunctor::new(m.clone());
        for h in &homs {
            let (vt, vs) = (f.value(h.hom.target), f.value(h.hom.source));
            ensure(well_definedness_check(m, &h.hom, &vt, &vs), || format!("{} under {}", m.name(), h.name))?;
        }
    }
    Ok(format!("{} modules x {} generating homomorphisms", mods.len(), homs.len()))
}

fn ac9() -> Outcome {
    for d in 0..=4 {
        let f = AssuFunctor { d };
        ensure(poly_degree(&f, d) == Some(d), || format!("degree at d = {d}"))?;
        let ce = tre_value(&f, d);
        ensure(ce.character == regular_character(d), || format!("gamma_{d} character {:?}", ce.character))?;
    }
    Ok("d <= 4".into())
}

/// A generic combination of a hom basis; invertible if any combination is.
fn generic_combination(basis: &[ModuleMap]) -> Option<ModuleMap> {
    let first = basis.first()?;
    let mut comps = first.components.clone();
    for (k, b) in basis.iter().enumerate().skip(1) {
        let c = Scalar::from_i64(7 * k as i64 + 3);
        for (a, x) in comps.iter_mut().zip(&b.components) {
            *a = a.add(&x.scale(&c));
        }
    }
    Some(ModuleMap { components: comps })
}

fn ac10() -> Outcome {
    let p2 = representable_module(2, 2);
    let target = direct_sum(&e_module(), &trivial_module(2));
    let iso = generic_combination(&module_homs(&p2, &target)).ok_or("no maps P2 -> E + triv(2)")?;
    ensure(iso.is_module_map(&p2, &target) && iso.is_injective() && iso.is_surjective(), || "P2 is not isomorphic to E + triv(2)".into())?;
    let up = module_homs(&sign_module(2), &e_module()).len();
    ensure(up == 0, || format!("dim Hom(sgn(2), E) = {up}"))?;
    let sub = module_homs(&regular_module(1), &e_module());
    ensure(sub.len() == 1 && sub[0].is_injective(), || "E has no trivial(1) submodule".into())?;
    let quo = module_homs(&e_module(), &sign_module(2));
    ensure(quo.len() == 1 && quo[0].components[2].nnz() == 1, || "E does not surject onto sgn(2)".into())?;
    Ok("P2 = E + triv(2); 0 -> triv(1) -> E -> sgn(2) -> 0 non-split".into())
}

fn ac11() -> Outcome {
    let mods = [regular_module(0), regular_module(1), regular_module(2), representable_module(1, 1), representable_module(2, 2)];
    for a in &mods {
        for b in &mods {
            for t in 0..=3 {
                let c = tensor_compatibility_check(a, b, t);
                ensure(c.passed(), || format!("{} x {} at t = {t}: {c:?}", a.name(), b.name()))?;
            }
        }
    }
    Ok("25 pairs, t <= 3".into())
}

fn ac12() -> Outcome {
    let algebras = [("abelian(1)", abelian_lie_algebra(1)), ("abelian(2)", abelian_lie_algebra(2)), ("sl2", sl2()), ("heisenberg", heisenberg())];
    for (name, c) in &algebras {
        for n in 0..=3 {
            for t in 0..=3 {
                let r = phi_ug_compare(c, n, t).map_err(|e| e.to_string())?;
                ensure(r.passed(), || format!("{name} at N = {n}, t = {t}: {r:?}"))?;
            }
        }
    }
    Ok("4 algebras, N <= 3, t <= 3".into())
}

fn ac13() -> Outcome {
    for d in 1..=4 {
        for n in 1..=4 {
            let e = ext_complex(d, &regular_module(n));
            let dims = e.ext_dims();
            let omega = brute_functions(d, n).iter().filter(|f| fibre_sizes(f, n).iter().all(|&k| k > 0)).count() as i64;
            for (k, &x) in dims.iter().enumerate() {
                let expected = if n <= d && k == d - n { omega as usize } else { 0 };
                ensure(x == expected, || format!("Ext^{k} = {x} at d = {d}, n = {n}, expected {expected}"))?;
            }
            let chi = if n <= d { if (d - n) % 2 == 0 { omega } else { -omega } } else { 0 };
            ensure(e.euler_characteristic() == chi, || format!("Euler characteristic {} at d = {d}, n = {n}", e.euler_characteristic()))?;
        }
    }
    Ok("d <= 4, n <= 4".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("dimension tables", ac1),
        ("category laws", ac2),
        ("PBW isomorphism", ac3),
        ("Koszul resolutions on gr^op", ac4),
        ("Com-side resolutions", ac5),
        ("Morita, object level", ac6),
        ("Yoneda consistency", ac7),
        ("well-defined gr^op action", ac8),
        ("polynomiality", ac9),
        ("non-split extension", ac10),
        ("tensor/convolution compatibility", ac11),
        ("Lie-algebra case", ac12),
        ("Ext vanishing pattern", ac13),
    ];
    let filter = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("AC{}", i + 1);
        if filter.as_ref().is_some_and(|f| *f != id) {
            continue;
        }
        let start = Instant::now();
        let r = run();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(note) => writeln!(out, "{id:<5} PASS  {name} ({note}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                writeln!(out, "{id:<5} FAIL  {name}: {why} [{secs:.1}s]")
            }
        }
        .expect("stdout");
        out.flush().expect("stdout");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

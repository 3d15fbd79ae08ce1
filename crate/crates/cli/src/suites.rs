//! Verification suites. Each report names the statement its checks instantiate.

use clap::ValueEnum;
use serde::Serialize;

use opcat::combinat::rising_factorial;
use opcat::funcalc::{regular_character, AbelianPower, AssuFunctor};
use opcat::induction::{abelian_identification, hom_from_projectives, natural_iso_check, phi_ug_compare, tensor_compatibility_check, yoneda_identification, InducedFunctor};
use opcat::koszul::resolution_grop;
use opcat::liemod::{abelian_lie_algebra, direct_sum, e_module, heisenberg, module_homs, regular_module, representable_module, sign_module, sl2, trivial_module, ModuleMap};
use opcat::par;
use opcat::propcat::pbw_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Pbw,
    Koszul,
    Morita,
    Tensor,
    LieCase,
    Flie,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bounds {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub t: usize,
}

impl Bounds {
    pub fn for_suite(suite: Suite, m: Option<usize>, n: Option<usize>, d: Option<usize>, t: Option<usize>) -> Self {
        let (dm, dn, dd, dt) = match suite {
            Suite::Pbw => (4, 4, 0, 0),
            Suite::Koszul => (0, 0, 3, 4),
            Suite::Morita => (0, 0, 3, 3),
            Suite::Tensor => (0, 0, 0, 3),
            Suite::LieCase => (0, 3, 0, 3),
            Suite::Flie => (0, 0, 0, 0),
        };
        Bounds { m: m.unwrap_or(dm), n: n.unwrap_or(dn), d: d.unwrap_or(dd), t: t.unwrap_or(dt) }
    }

    pub fn warn_if_large(&self, suite: Suite) {
        let large = match suite {
            Suite::Pbw => self.m > 6 || self.n > 6,
            Suite::Koszul => self.d > 6 || self.t > 6,
            Suite::Morita => self.d > 4 || self.t > 4,
            Suite::Tensor | Suite::LieCase => self.t > 4 || self.n > 4,
            Suite::Flie => false,
        };
        if large {
            eprintln!("warning: bounds {self:?} exceed the tested range for {suite:?}; expect long running times and high memory use");
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub statement: &'static str,
    pub bounds: Bounds,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub table: Vec<String>,
}

impl Report {
    fn new(suite: Suite, statement: &'static str, bounds: Bounds, checks: Vec<Check>, table: Vec<String>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report { suite, statement, bounds, passed, checks, table }
    }

    pub fn render(&self) -> String {
        let mut s = format!("{:?}: {}\n", self.suite, self.statement);
        for line in &self.table {
            s.push_str(&format!("  {line}\n"));
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            s.push_str(&format!("  FAIL {}: {}\n", c.label, c.detail));
        }
        let npass = self.checks.iter().filter(|c| c.passed).count();
        s.push_str(&format!("{} ({npass}/{} checks)\n", if self.passed { "PASS" } else { "FAIL" }, self.checks.len()));
        s
    }
}

fn check(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { label: label.into(), passed, detail: detail.into() }
}

pub fn run(suite: Suite, b: &Bounds) -> opcat::Result<Report> {
    Ok(match suite {
        Suite::Pbw => pbw(b),
        Suite::Koszul => koszul(b),
        Suite::Morita => morita(b),
        Suite::Tensor => tensor(b),
        Suite::LieCase => lie_case(b)?,
        Suite::Flie => flie(b),
    })
}

fn pbw(b: &Bounds) -> Report {
    let slices: Vec<(usize, usize)> = (0..=b.m).flat_map(|m| (0..=b.n).map(move |n| (m, n))).collect();
    let results = par::map(&slices, |&(m, n)| pbw_check(m, n));
    let mut table = vec!["m n  Com^u(x)Lie  Ass^u  rank  rising".to_string()];
    let checks = results
        .iter()
        .map(|s| {
            let rising = rising_factorial(s.n, s.m) as usize;
            table.push(format!("{} {}  {:>11}  {:>5}  {:>4}  {:>6}", s.m, s.n, s.tensor_dim, s.assu_dim, s.rank, rising));
            check(format!("slice ({}, {})", s.m, s.n), s.is_iso() && s.assu_dim == rising, format!("{s:?}"))
        })
        .collect();
    Report::new(Suite::Pbw, "PBW at category level: Cat Com^u (x)_S Cat Lie -> Cat Ass^u is an isomorphism", *b, checks, table)
}

fn koszul(b: &Bounds) -> Report {
    let cases: Vec<(usize, usize)> = (1..=b.d.max(1)).flat_map(|d| (0..=b.t).map(move |t| (d, t))).collect();
    let mut table = vec!["d t  term dims (stage 1..d)  target  homology".to_string()];
    let mut checks = Vec::new();
    for &(d, t) in &cases {
        let c = resolution_grop(d, t);
        let h = c.augmented_homology();
        let exact = h.iter().all(|&x| x == 0);
        table.push(format!("{d} {t}  {:?}  {}  {:?}", c.dims(), c.target_dim(), h));
        checks.push(check(format!("d^2 = 0 at d = {d}, t = {t}"), c.squares_to_zero(), ""));
        checks.push(check(format!("exact at d = {d}, t = {t}"), exact, format!("{h:?}")));
        checks.push(check(format!("augments onto t^d at d = {d}, t = {t}"), c.target_dim() == t.pow(d as u32), c.target_dim().to_string()));
        checks.push(check(format!("minimal at d = {d}, t = {t}"), c.minimality_check(), ""));
    }
    Report::new(Suite::Koszul, "Koszul resolution of (a#)^{(x)d} by projectives Delta Cat Ass^u(n, -) is exact and minimal", *b, checks, table)
}

fn morita(b: &Bounds) -> Report {
    let mut checks = Vec::new();
    let mut table = Vec::new();
    for d in 0..=b.d {
        let f = InducedFunctor::new(regular_module(d));
        let dims: Vec<usize> = (0..=b.t).map(|t| f.value(t).dim()).collect();
        let ok = dims.iter().enumerate().all(|(t, &x)| x == t.pow(d as u32));
        table.push(format!("induce(k[S_{d}]) dims {dims:?}"));
        checks.push(check(format!("induce(k[S_{d}]) has dims t^{d}"), ok, format!("{dims:?}")));
        let g = AbelianPower { d };
        checks.push(check(format!("induce(k[S_{d}]) = (a#)^(x){d} naturally"), natural_iso_check(&f, &g, &|t| abelian_identification(&f, d, t), b.t), ""));
        let p = InducedFunctor::new(representable_module(d, d.max(1)));
        let a = AssuFunctor { d };
        checks.push(check(format!("induce(P_{d}) = Delta Cat Ass^u({d}, -) naturally"), natural_iso_check(&p, &a, &|t| yoneda_identification(&p, d, t), b.t), ""));
        let h = hom_from_projectives(&a, d);
        checks.push(check(format!("gamma_{d} has the regular character"), h.character == regular_character(d), format!("{:?}", h.character)));
    }
    Report::new(Suite::Morita, "Morita equivalence: induction along Delta Cat Ass^u identifies Cat Lie-modules with analytic functors on gr^op", *b, checks, table)
}

fn tensor(b: &Bounds) -> Report {
    let mods = [regular_module(0), regular_module(1), regular_module(2), representable_module(1, 1), representable_module(2, 2)];
    let mut cases = Vec::new();
    for i in 0..mods.len() {
        for j in 0..mods.len() {
            for t in 0..=b.t {
                cases.push((i, j, t));
            }
        }
    }
    let results = par::map(&cases, |&(i, j, t)| tensor_compatibility_check(&mods[i], &mods[j], t));
    let checks = cases
        .iter()
        .zip(&results)
        .map(|(&(i, j, t), r)| check(format!("{} (.) {} at t = {t}", mods[i].name(), mods[j].name()), r.passed(), format!("{r:?}")))
        .collect();
    Report::new(Suite::Tensor, "Induction sends the convolution product of Cat Lie-modules to the tensor product on gr^op", *b, checks, Vec::new())
}

fn lie_case(b: &Bounds) -> opcat::Result<Report> {
    let algebras = [("abelian(1)", abelian_lie_algebra(1)), ("abelian(2)", abelian_lie_algebra(2)), ("sl2", sl2()), ("heisenberg", heisenberg())];
    let mut checks = Vec::new();
    let mut table = Vec::new();
    for (name, c) in &algebras {
        for n in 0..=b.n {
            for t in 0..=b.t {
                let r = phi_ug_compare(c, n, t)?;
                table.push(format!("{name} N = {n} t = {t}: {:?}", r.dims));
                checks.push(check(format!("{name} at N = {n}, t = {t}"), r.passed(), format!("{r:?}")));
            }
        }
    }
    Ok(Report::new(Suite::LieCase, "For a Lie algebra g, induction of the module g^(x)n is Hom(-, U g) truncated, naturally in gr^op", *b, checks, table))
}

fn generic_combination(basis: &[ModuleMap]) -> Option<ModuleMap> {
    let mut comps = basis.first()?.components.clone();
    for (k, m) in basis.iter().enumerate().skip(1) {
        let c = opcat::exactlin::Scalar::from_i64(7 * k as i64 + 3);
        for (a, x) in comps.iter_mut().zip(&m.components) {
            *a = a.add(&x.scale(&c));
        }
    }
    Some(ModuleMap { components: comps })
}

fn flie(b: &Bounds) -> Report {
    let e = e_module();
    let p2 = representable_module(2, 2);
    let sum = direct_sum(&e, &trivial_module(2));
    let up = module_homs(&sign_module(2), &e).len();
    let down = module_homs(&e, &sign_module(2)).len();
    let sub = module_homs(&regular_module(1), &e);
    let split = generic_combination(&module_homs(&p2, &sum)).is_some_and(|f| f.is_module_map(&p2, &sum) && f.is_injective() && f.is_surjective());
    let table = vec![
        format!("dim Hom(k_sgn(2), E) = {up}"),
        format!("dim Hom(E, k_sgn(2)) = {down}"),
        format!("dim Hom(k_triv(1), E) = {}", sub.len()),
        format!("P_2 = E + k_triv(2): {split}"),
    ];
    let checks = vec![
        check("Hom(k_sgn(2), E) = 0", up == 0, up.to_string()),
        check("E -> k_sgn(2) onto the top factor", down == 1, down.to_string()),
        check("k_triv(1) is the socle of E", sub.len() == 1 && sub[0].is_injective(), sub.len().to_string()),
        check("P_2 = E + k_triv(2)", split, ""),
    ];
    Report::new(Suite::Flie, "E is a non-split extension of k_sgn(2) by k_triv(1) and a summand of P_2", *b, checks, table)
}

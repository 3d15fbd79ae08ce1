//! `opcat`: dimension tables, verification suites, resolution export and module induction.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input errors.

mod cache;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use opcat::exactlin::SparseMat;
use opcat::gract::generating_homs;
use opcat::induction::{induce_map, induce_value, pbw_dimension};
use opcat::koszul::{export, resolution_com, resolution_grop, resolution_lie, ExportFormat};
use opcat::liemod::{abelian_lie_algebra, heisenberg, lie_algebra_module, regular_module, representable_module, sign_module, sl2, trivial_module, validate, LieModule};
use opcat::operads::OperadId;
use opcat::propcat::hom_space;

use suites::{Bounds, Suite};

#[derive(Parser, Debug)]
#[command(name = "opcat", version, about = "Exact computations with Cat Lie-modules, analytic functors on gr^op and their Koszul resolutions")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the grid of dim Cat O(m, n).
    Dims {
        /// assu, lie, com, comu or unit.
        operad: String,
        m_max: usize,
        n_max: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Export a resolution.
    Resolve {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, value_enum, default_value_t = SideArg::Gr)]
        side: SideArg,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a module file, validate it and print its induced functor.
    Induce {
        file: PathBuf,
        #[arg(long)]
        t: usize,
        /// Also print the matrices of the generating homomorphisms.
        #[arg(long)]
        matrices: bool,
    },
    /// Write a built-in module as JSON.
    Module {
        #[arg(value_enum)]
        kind: ModuleKind,
        /// Arity for regular, sign, trivial and representable modules.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Truncation for representable and Lie-algebra modules.
        #[arg(long, default_value_t = 2)]
        truncation: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    /// Resolution of (a#)^{⊗d} over gr^op, evaluated at F_t.
    Gr,
    /// Resolution of k[S_d] by Cat Lie-projectives, at arity t.
    Lie,
    /// Resolution of k[S_d] on the kΩ side, at arity t.
    Com,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModuleKind {
    Regular,
    Sign,
    Trivial,
    Representable,
    Sl2,
    Heisenberg,
    Abelian1,
    Abelian2,
}

enum Failure {
    Check,
    Input(String),
}

impl From<opcat::Error> for Failure {
    fn from(e: opcat::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.sequential {
        opcat::par::set_enabled(false);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Dims { operad, m_max, n_max } => dims(operad, *m_max, *n_max, cli.json),
        Command::Verify { suite, m, n, d, t } => {
            let b = Bounds::for_suite(*suite, *m, *n, *d, *t);
            b.warn_if_large(*suite);
            let report = suites::run(*suite, &b)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.render());
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Resolve { d, t, format, side, out } => resolve(*d, *t, format, *side, out.as_ref()),
        Command::Induce { file, t, matrices } => induce(file, *t, *matrices, cli.json),
        Command::Module { kind, arity, truncation, out } => {
            let m = builtin(*kind, *arity, *truncation)?;
            write_out(out.as_ref(), &(m.to_json() + "\n"))
        }
    }
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dims(operad: &str, m_max: usize, n_max: usize, as_json: bool) -> Result<(), Failure> {
    let op = OperadId::parse(operad).ok_or_else(|| Failure::Input(format!("unknown operad {operad:?}; expected assu, lie, com, comu or unit")))?;
    let key = format!("dims-{op}-{m_max}-{n_max}-{as_json}");
    let text = cache::get_or_compute(&key, || {
        let grid: Vec<Vec<usize>> = (0..=m_max).map(|m| (0..=n_max).map(|n| hom_space(op, m, n).dim()).collect()).collect();
        if as_json {
            let v = json!({ "operad": op.to_string(), "rows": "m", "columns": "n", "dims": grid });
            return serde_json::to_string_pretty(&v).expect("json") + "\n";
        }
        let width = grid.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1).max(2);
        let mut s = format!("dim Cat {op}(m, n)\n{:>4} |", "m\\n");
        for n in 0..=n_max {
            s.push_str(&format!(" {n:>width$}"));
        }
        s.push('\n');
        s.push_str(&"-".repeat(6 + (n_max + 1) * (width + 1)));
        s.push('\n');
        for (m, row) in grid.iter().enumerate() {
            s.push_str(&format!("{m:>4} |"));
            for x in row {
                s.push_str(&format!(" {x:>width$}"));
            }
            s.push('\n');
        }
        s
    });
    print!("{text}");
    Ok(())
}

fn resolve(d: usize, t: usize, format: &str, side: SideArg, out: Option<&PathBuf>) -> Result<(), Failure> {
    let fmt: ExportFormat = format.parse()?;
    if d == 0 {
        return Err(Failure::Input("resolutions start at d = 1".into()));
    }
    if d > 6 || t > 6 {
        eprintln!("warning: d = {d}, t = {t} is beyond the tested range; this may take a long time");
    }
    let key = format!("resolve-{side:?}-{d}-{t}-{format}").to_ascii_lowercase();
    let text = cache::get_or_compute(&key, || {
        let c = match side {
            SideArg::Gr => resolution_grop(d, t),
            SideArg::Lie => resolution_lie(d, t),
            SideArg::Com => resolution_com(d, t),
        };
        let mut s = export(&c, fmt);
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    });
    write_out(out, &text)
}

fn builtin(kind: ModuleKind, arity: usize, truncation: usize) -> Result<LieModule, Failure> {
    Ok(match kind {
        ModuleKind::Regular => regular_module(arity),
        ModuleKind::Sign => sign_module(arity),
        ModuleKind::Trivial => trivial_module(arity),
        ModuleKind::Representable => representable_module(arity, truncation.max(arity)),
        ModuleKind::Sl2 => lie_algebra_module(&sl2(), truncation)?,
        ModuleKind::Heisenberg => lie_algebra_module(&heisenberg(), truncation)?,
        ModuleKind::Abelian1 => lie_algebra_module(&abelian_lie_algebra(1), truncation)?,
        ModuleKind::Abelian2 => lie_algebra_module(&abelian_lie_algebra(2), truncation)?,
    })
}

fn dense(m: &SparseMat) -> Vec<Vec<String>> {
    m.to_dense().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

fn induce(file: &PathBuf, t_max: usize, matrices: bool, as_json: bool) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let m = LieModule::from_json(&text)?;
    let violations = validate(&m);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| format!("{:?}: {}", v.kind, v.description)).collect();
        return Err(Failure::Input(format!("{} is not a Cat Lie-module:\n  {}", m.name(), list.join("\n  "))));
    }
    let values = (0..=t_max).map(|t| induce_value(&m, t)).collect::<opcat::Result<Vec<_>>>()?;
    let reports: Vec<_> = values.iter().map(|v| v.report(pbw_dimension(&m, v.t))).collect();
    let mut gens = Vec::new();
    if matrices {
        for h in generating_homs(t_max) {
            let map = induce_map(&m, &h.hom, &values[h.hom.target], &values[h.hom.source])?;
            gens.push((h.name, map.matrix));
        }
    }
    if as_json {
        let g: Vec<_> = gens.iter().map(|(name, mat)| json!({ "hom": name, "rows": mat.nrows(), "cols": mat.ncols(), "matrix": dense(mat) })).collect();
        let v = json!({ "module": m.name(), "dims": m.dims(), "induced": reports, "generators": g });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        return Ok(());
    }
    println!("module {} (arity dims {:?})", m.name(), m.dims());
    println!("{:>3} {:>10} {:>12} {:>10} {:>8}", "t", "free", "coinvariant", "relations", "dim");
    for r in &reports {
        println!("{:>3} {:>10} {:>12} {:>10} {:>8}", r.t, r.free_dim, r.coinvariant_dim, r.relation_rank, r.dim);
    }
    for (name, mat) in &gens {
        println!("{name}: {}x{}", mat.nrows(), mat.ncols());
        for row in dense(mat) {
            println!("  [{}]", row.join(", "));
        }
    }
    Ok(())
}

mod report;
mod tables;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{verdict, Params, Status, Stream};
use spinbranch::kernelcalc::{
    check_identity, check_projection_support, make_family_form, DisplayForm, FamilyId, FamilyParams, IdentityId, ParamKind, KMAX,
};
use spinbranch::monogenics::{gegenbauer_identity_report, lambda_sweep, verify_branching, MAX_VARS};
use spinbranch::paramfield::{parse_q, GaussianRational};
use spinbranch::sbolattice::{build_system, solve_dimension, total_dimension, Sign};

const MAX_GEGENBAUER_DEG: usize = 20;
const MAX_LAMBDA_DEG: usize = 5;
const MAX_KERNEL_INDEX: u32 = 12;
const MAX_LATTICE_N: usize = 12;
const MAX_DEPTH: usize = 40;
const MAX_TABLE_INDEX: usize = 10;

#[derive(Parser)]
#[command(name = "spinbranch", version, about = "Exact verification suites and multiplicity tables")]
struct Cli {
    /// Report 0 for every runtime so that output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and stream one JSON report per check.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Dimension of the intertwiner space at one parameter point.
    Multiplicity(MultiplicityArgs),
    /// Emit a multiplicity table.
    Table {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Print the normal form of a kernel family.
    Kernel(KernelArgs),
}

#[derive(Subcommand)]
enum Suite {
    /// Gegenbauer identities and the differential equation with formal λ.
    Gegenbauer {
        #[arg(long, default_value_t = 10)]
        max_deg: usize,
    },
    /// Monogenic branching maps: Dirac annihilation and Pin equivariance.
    Branching {
        /// Only this dimension (default: 2, 3 and 4).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        imax: usize,
    },
    /// λ-constants: closed form against brute force.
    Lambda {
        /// Only this dimension (default: 3 to 6).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        imax: usize,
    },
    /// The kernel identity catalogue (a)–(f).
    Kernels {
        /// Only this dimension (default: 2 to 6).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
    },
    /// Support of projected spinor kernels (even n only).
    Projection {
        /// Only this dimension (default: 2, 4 and 6).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SectorArg {
    Plus,
    Minus,
    Both,
}

#[derive(Args)]
struct MultiplicityArgs {
    #[arg(long)]
    n: usize,
    /// λ0 as a fraction string such as -5/2.
    #[arg(long = "lambda", allow_hyphen_values = true)]
    lambda: String,
    /// ν0 as a fraction string.
    #[arg(long = "nu", allow_hyphen_values = true)]
    nu: String,
    #[arg(long, default_value_t = 12)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = SectorArg::Both)]
    sector: SectorArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub imin: usize,
    #[arg(long, default_value_t = 4)]
    pub imax: usize,
    #[arg(long, default_value_t = 0)]
    pub jmin: usize,
    #[arg(long, default_value_t = 4)]
    pub jmax: usize,
    /// Truncation depth (default 12, raised to imax + jmax + 3 for composition tables).
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Subcommand)]
enum TableKind {
    /// Multiplicities between composition factors, one block per (i, j, parity).
    Composition(TableArgs),
    /// Sector dimensions over (−ρ−½−a, −ρ_H−½−b) for a ∈ [imin−1, imax+1], b ∈ [jmin−1, jmax+1].
    Lattice(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelFormat {
    Text,
    Json,
}

#[derive(Args)]
struct KernelArgs {
    /// Family tag, e.g. A+, B-, SC+, SAA-.
    #[arg(long, allow_hyphen_values = true)]
    family: String,
    #[arg(long)]
    n: usize,
    /// Index k (B-families) or ℓ (C-families).
    #[arg(long)]
    index: Option<u32>,
    /// Lattice point `i,j` for the AA-families.
    #[arg(long)]
    point: Option<String>,
    /// Show the B-families in their expanded form.
    #[arg(long)]
    expanded: bool,
    #[arg(long, value_enum, default_value_t = KernelFormat::Text)]
    format: KernelFormat,
}

/// Failure classes mapped onto exit codes.
pub(crate) enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub(crate) fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        runtime(e)
    }
}

fn dims(given: Option<usize>, default: &[usize], ok: impl Fn(usize) -> bool, what: &str) -> Result<Vec<usize>, Failure> {
    match given {
        Some(n) if ok(n) => Ok(vec![n]),
        Some(n) => Err(usage(format!("n = {n} is outside the supported range for {what}"))),
        None => Ok(default.to_vec()),
    }
}

fn run_suite(suite: Suite, timing: bool) -> Result<bool, Failure> {
    let stdout = io::stdout();
    let mut s = Stream::new(stdout.lock(), timing);
    match suite {
        Suite::Gegenbauer { max_deg } => {
            if max_deg > MAX_GEGENBAUER_DEG {
                return Err(usage(format!("--max-deg must be at most {MAX_GEGENBAUER_DEG}")));
            }
            for c in gegenbauer_identity_report(max_deg).checks {
                let params = Params::new().with("identity", &c.identity).with("degree", c.degree);
                s.run("gegenbauer", params, || verdict(c.pass, || json!({ "residual": c.residual })))?;
            }
        }
        Suite::Branching { n, imax } => {
            for n in dims(n, &[2, 3, 4], |n| (1..MAX_VARS).contains(&n), "branching")? {
                if imax > 6 {
                    return Err(usage("--imax must be at most 6"));
                }
                s.run("branching", Params::new().with("n", n).with("imax", imax), || match verify_branching(n, imax) {
                    Ok(r) => verdict(r.passed(), || json!({ "failure": r.failure })),
                    Err(e) => (Status::Fail, Some(json!({ "error": e.to_string() }))),
                })?;
            }
        }
        Suite::Lambda { n, imax } => {
            if imax > MAX_LAMBDA_DEG {
                return Err(usage(format!("--imax must be at most {MAX_LAMBDA_DEG}")));
            }
            for n in dims(n, &[3, 4, 5, 6], |n| (3..MAX_VARS).contains(&n), "lambda")? {
                let rows = lambda_sweep(n, imax).map_err(runtime)?;
                for r in rows {
                    let params = Params::new()
                        .with("n", n)
                        .with("alpha", r.alpha.to_string())
                        .with("alpha_p", r.alpha_p.to_string())
                        .with("beta", r.beta.to_string())
                        .with("beta_p", r.beta_p.to_string());
                    s.run("lambda", params, || {
                        let st = if r.agrees() {
                            Status::Pass
                        } else if r.bruteforce.is_none() {
                            Status::Indeterminate
                        } else {
                            Status::Fail
                        };
                        let w = (st != Status::Pass).then(|| {
                            json!({
                                "closed_form": r.closed_form.to_string(),
                                "bruteforce": r.bruteforce.as_ref().map(|b| b.to_string()),
                                "error": r.error,
                            })
                        });
                        (st, w)
                    })?;
                }
            }
        }
        Suite::Kernels { n, kmax } => {
            if kmax > MAX_KERNEL_INDEX {
                return Err(usage(format!("--kmax must be at most {MAX_KERNEL_INDEX}")));
            }
            for n in dims(n, &[2, 3, 4, 5, 6], |n| (2..=KMAX).contains(&n), "kernels")? {
                for id in IdentityId::ALL {
                    for index in 0..=kmax {
                        let params = Params::new().with("identity", id.letter().to_string()).with("n", n).with("index", index);
                        s.run("kernels", params, || match check_identity(id, n, index) {
                            Ok(rep) => {
                                let bad: Vec<_> = rep.checks.iter().filter(|c| !c.passed).collect();
                                verdict(bad.is_empty(), || json!({ "failed": bad }))
                            }
                            Err(e) => (Status::Fail, Some(json!({ "error": e.to_string() }))),
                        })?;
                    }
                }
            }
        }
        Suite::Projection { n, kmax } => {
            if kmax > MAX_KERNEL_INDEX {
                return Err(usage(format!("--kmax must be at most {MAX_KERNEL_INDEX}")));
            }
            for n in dims(n, &[2, 4, 6], |n| n % 2 == 0 && (2..=KMAX).contains(&n), "projection (even n)")? {
                for index in 0..=kmax {
                    let checks = check_projection_support(n, index).map_err(runtime)?;
                    for c in checks {
                        let params = Params::new().with("n", n).with("index", index).with("family", &c.name);
                        s.run("projection", params, || verdict(c.passed, || json!({ "detail": c.detail })))?;
                    }
                }
            }
        }
    }
    if let Some(f) = s.first_failure() {
        eprintln!("{}", serde_json::to_string(f).expect("report serializes"));
    }
    Ok(s.all_pass())
}

fn parse_point(s: &str) -> Result<(u32, u32), Failure> {
    let (a, b) = s.split_once(',').ok_or_else(|| usage("--point expects i,j"))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|_| usage(format!("bad point coordinate {x:?}")));
    Ok((p(a)?, p(b)?))
}

fn run_kernel(a: KernelArgs) -> Result<(), Failure> {
    let id: FamilyId = a.family.parse().map_err(|e: spinbranch::kernelcalc::KernelError| usage(e.to_string()))?;
    let params = match id.param_kind() {
        ParamKind::Generic => FamilyParams::Generic,
        ParamKind::Index => FamilyParams::Index(a.index.ok_or_else(|| usage(format!("{id} needs --index")))?),
        ParamKind::Point => {
            let (i, j) = parse_point(a.point.as_deref().ok_or_else(|| usage(format!("{id} needs --point i,j")))?)?;
            FamilyParams::Point { i, j }
        }
    };
    let form = if a.expanded { DisplayForm::Expanded } else { DisplayForm::Compact };
    let k = make_family_form(id, a.n, params, form).map_err(|e| usage(e.to_string()))?;
    let mut out = io::stdout().lock();
    match a.format {
        KernelFormat::Text => writeln!(out, "{k}")?,
        KernelFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &k).map_err(runtime)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn run_multiplicity(a: MultiplicityArgs) -> Result<(), Failure> {
    if !(3..=MAX_LATTICE_N).contains(&a.n) {
        return Err(usage(format!("n must lie in 3..={MAX_LATTICE_N}")));
    }
    if !(2..=MAX_DEPTH).contains(&a.depth) {
        return Err(usage(format!("--depth must lie in 2..={MAX_DEPTH}")));
    }
    let lam0 = GaussianRational::real(parse_q(&a.lambda).map_err(|e| usage(e.to_string()))?);
    let nu0 = GaussianRational::real(parse_q(&a.nu).map_err(|e| usage(e.to_string()))?);
    let value = match a.sector {
        SectorArg::Both => {
            let t = total_dimension(a.n, lam0, nu0, a.depth).map_err(runtime)?;
            json!({
                "n": t.n, "lambda0": t.lam0.to_string(), "nu0": t.nu0.to_string(), "depth": t.depth,
                "dim_plus": t.dim_plus, "dim_minus": t.dim_minus, "total": t.total,
                "stabilized": t.stabilized, "on_lattice": t.on_lattice,
            })
        }
        one => {
            let sign = if one == SectorArg::Plus { Sign::Plus } else { Sign::Minus };
            let on = spinbranch::sbolattice::lattice_point(a.n, &lam0, &nu0).is_some();
            let sys = build_system(a.n, lam0.clone(), nu0.clone(), sign, a.depth).map_err(runtime)?;
            let sol = solve_dimension(&sys).map_err(runtime)?;
            let (p, m) = if sign == Sign::Plus { (Some(sol.dim), None) } else { (None, Some(sol.dim)) };
            json!({
                "n": a.n, "lambda0": lam0.to_string(), "nu0": nu0.to_string(), "depth": a.depth,
                "dim_plus": p, "dim_minus": m, "total": null,
                "stabilized": sol.stabilized, "on_lattice": on,
            })
        }
    };
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, &value).map_err(runtime)?;
    writeln!(out)?;
    Ok(())
}

fn check_table(t: &TableArgs) -> Result<(), Failure> {
    if !(3..=MAX_LATTICE_N).contains(&t.n) {
        return Err(usage(format!("n must lie in 3..={MAX_LATTICE_N}")));
    }
    if t.imax > MAX_TABLE_INDEX || t.jmax > MAX_TABLE_INDEX {
        return Err(usage(format!("--imax and --jmax must be at most {MAX_TABLE_INDEX}")));
    }
    if let Some(d) = t.depth {
        if !(2..=MAX_DEPTH).contains(&d) {
            return Err(usage(format!("--depth must lie in 2..={MAX_DEPTH}")));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timing = !cli.no_timing;
    let result = match cli.cmd {
        Command::Verify { suite } => run_suite(suite, timing),
        Command::Multiplicity(a) => run_multiplicity(a).map(|_| true),
        Command::Table { kind } => match kind {
            TableKind::Composition(t) => check_table(&t).and_then(|_| tables::composition(&t)).map(|_| true),
            TableKind::Lattice(t) => check_table(&t).and_then(|_| tables::lattice(&t)).map(|_| true),
        },
        Command::Kernel(a) => run_kernel(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nvsc::hirzebruch::{self, systems, DiscClass, Side};
use nvsc::novikov::{Monomial, NovikovSeries, ValuationMap, Q};
use nvsc::scattering::{self, Diagram, Sign};
use nvsc::superpotential::{self as sp, Chamber, Surface, SurfaceSpec};
use nvsc::verify;
use nvsc::wallcross;

#[derive(Parser)]
#[command(name = "nvsc", version, about = "Mirror superpotentials, wall crossing and scattering for F3 and F4")]
struct Cli {
    /// Valuation of the area symbol A.
    #[arg(long = "nuA", env = "NVSC_NU_A", global = true, value_parser = positive_q, allow_hyphen_values = true)]
    nu_a: Option<Q>,
    /// Valuation of the area symbol B.
    #[arg(long = "nuB", env = "NVSC_NU_B", global = true, value_parser = positive_q, allow_hyphen_values = true)]
    nu_b: Option<Q>,
    /// Truncation order; defaults to 20·ν_B.
    #[arg(long, env = "NVSC_CUTOFF", global = true, value_parser = positive_q, allow_hyphen_values = true)]
    cutoff: Option<Q>,
    /// Output file; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a superpotential as a series.
    Superpotential {
        #[arg(long, value_parser = parse_surface)]
        surface: Surface,
        #[arg(long, value_parser = parse_chamber)]
        chamber: Option<Chamber>,
        /// Accepted for symmetry with the other commands; JSON is the default.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Wall-crossing computations.
    Wallcross {
        #[command(subcommand)]
        action: WallcrossCmd,
    },
    /// Complete the scattering diagram and report it.
    Scatter(ScatterArgs),
    /// Enumerate disc classes cut out by a constraint system.
    EnumerateClasses {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4), value_name = "f3|f4")]
        surface: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        index: u8,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
    },
    /// Numerical critical values at a fixed T.
    CriticalValues {
        #[arg(long, value_parser = parse_surface)]
        surface: Surface,
        #[arg(long, value_parser = parse_chamber)]
        chamber: Option<Chamber>,
        #[arg(long = "T", value_parser = unit_interval)]
        t: f64,
        #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
        tol: f64,
    },
    /// Degrees of the obstruction bundles.
    Obstruction,
    /// Run every cross-check and print a table.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum WallcrossCmd {
    /// Solve for the wall function taking `src` to `dst`.
    Solve {
        #[arg(long, value_parser = parse_spec)]
        src: SurfaceSpec,
        #[arg(long, value_parser = parse_spec)]
        dst: SurfaceSpec,
        #[arg(long, value_parser = parse_monomial)]
        monomial: Monomial,
        #[arg(long, allow_hyphen_values = true)]
        expx: i64,
        #[arg(long, allow_hyphen_values = true)]
        expy: i64,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Check the F3 chart gluing.
    Gluing,
}

#[derive(Args)]
struct ScatterArgs {
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    #[command(subcommand)]
    action: Option<ScatterCmd>,
}

#[derive(Subcommand)]
enum ScatterCmd {
    /// The chamber-k superpotential.
    ChamberW {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        json: bool,
    },
    /// The superpotential beyond every wall on one side.
    Limit {
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    On,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

fn positive_q(s: &str) -> Result<Q, String> {
    let v: Q = s.trim().parse().map_err(|_| format!("`{s}` is not a rational number"))?;
    if v <= Q::from_integer(0) {
        return Err(format!("`{s}` must be positive"));
    }
    Ok(v)
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must lie in (0, 1)"))
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` must be a positive number")),
    }
}

fn parse_surface(s: &str) -> Result<Surface, String> {
    s.parse()
}

fn parse_chamber(s: &str) -> Result<Chamber, String> {
    s.parse()
}

fn parse_monomial(s: &str) -> Result<Monomial, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// `f3_right`, `f4_series`, `f4_chamber_2`, `f0`, ...
fn parse_spec(s: &str) -> Result<SurfaceSpec, String> {
    let (surface, chamber) = s.split_once('_').unwrap_or((s, "default"));
    SurfaceSpec::new(surface.parse()?, chamber.parse()?).map_err(|e| e.to_string())
}

fn default_chamber(surface: Surface) -> Chamber {
    match surface {
        Surface::F3 => Chamber::F3Right,
        _ => Chamber::Default,
    }
}

/// A failed computation or check; exits with status 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

struct Ctx {
    nu: ValuationMap,
    cutoff: Q,
}

fn series_json(s: &NovikovSeries) -> Value {
    serde_json::to_value(s).expect("series serialize")
}

fn class_json(c: &DiscClass) -> Value {
    json!({"coords": c.coords, "label": c.to_string()})
}

fn basis_name(b: hirzebruch::BasisTag) -> &'static str {
    match b {
        hirzebruch::BasisTag::F3 => "f3",
        hirzebruch::BasisTag::F4 => "f4",
        hirzebruch::BasisTag::F0Chart => "f0_chart",
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Returns the document and whether every check in it passed.
fn run(cmd: Command, ctx: &Ctx) -> Result<(String, bool), Failure> {
    let (nu, cutoff) = (ctx.nu, ctx.cutoff);
    Ok(match cmd {
        Command::Superpotential { surface, chamber, json, format } => {
            let spec = SurfaceSpec::new(surface, chamber.unwrap_or_else(|| default_chamber(surface)))?;
            let w = sp::build(spec, nu, cutoff)?;
            if format == Format::Text && !json {
                (format!("{w}\n"), true)
            } else {
                (pretty(&series_json(&w)), true)
            }
        }
        Command::Wallcross { action: WallcrossCmd::Solve { src, dst, monomial, expx, expy, order } } => {
            let ws = sp::build(src, nu, cutoff)?;
            let wd = sp::build(dst, nu, cutoff)?;
            let coeffs = wallcross::solve_wall_function(&ws, &wd, &monomial, expx, expy, order)?;
            let t = wallcross::WallTransform::new(monomial, coeffs.clone(), expx, expy)?;
            let doc = json!({
                "src": format!("{}_{}", src.surface, src.chamber).to_lowercase(),
                "dst": format!("{}_{}", dst.surface, dst.chamber).to_lowercase(),
                "monomial": monomial.to_string(),
                "exp": [expx, expy],
                "coeffs": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "fn": series_json(&t.function(nu, cutoff)),
            });
            (pretty(&doc), true)
        }
        Command::Wallcross { action: WallcrossCmd::Gluing } => {
            let ok = wallcross::verify_gluing(nu, cutoff);
            (pretty(&json!({"cutoff": cutoff.to_string(), "glued": ok})), ok)
        }
        Command::Scatter(args) => {
            let d = scattering::complete(&Diagram::initial(nu, cutoff), cutoff)?;
            match args.action {
                None => match args.emit {
                    Emit::Json => (pretty(&scattering::diagram_json(&d)), true),
                    Emit::Svg => (scattering::diagram_svg(&d), true),
                },
                Some(ScatterCmd::ChamberW { k, .. }) => {
                    let w = scattering::chamber_superpotential(&d, k, cutoff)?;
                    (pretty(&json!({"k": k, "w": series_json(&w)})), true)
                }
                Some(ScatterCmd::Limit { sign, .. }) => {
                    let s = match sign {
                        SignArg::Plus => Sign::Plus,
                        SignArg::Minus => Sign::Minus,
                    };
                    let w = scattering::limit_superpotential(&d, s, cutoff)?;
                    let ok = w == scattering::limit_closed_form(nu, s, cutoff)?;
                    let name = if matches!(sign, SignArg::Plus) { "plus" } else { "minus" };
                    (pretty(&json!({"sign": name, "matches_closed_form": ok, "w": series_json(&w)})), ok)
                }
            }
        }
        Command::EnumerateClasses { surface, index, side, bound } => {
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
                SideArg::On => Side::On,
            };
            let sys = systems::lookup(surface, index, side)
                .ok_or_else(|| Failure(format!("no constraint system for F{surface}, index {index} on this side")))?;
            let e = hirzebruch::enumerate_classes(&sys, bound);
            let doc = json!({
                "system": sys.name,
                "basis_tag": basis_name(e.basis),
                "bound": bound,
                "classes": e.classes.iter().map(class_json).collect::<Vec<_>>(),
                "excluded": e.excluded.iter().map(class_json).collect::<Vec<_>>(),
                "flagged": e.flagged(),
            });
            (pretty(&doc), true)
        }
        Command::CriticalValues { surface, chamber, t, tol } => {
            let spec = SurfaceSpec::new(surface, chamber.unwrap_or_else(|| default_chamber(surface)))?;
            let r = sp::critical_values_numeric(spec, t, nu.nu_a(), nu.nu_b(), tol)?;
            let doc = json!({
                "T": t,
                "nu": {"A": nu.nu_a().to_string(), "B": nu.nu_b().to_string()},
                "values": r.values,
                "points": r.points.iter().map(|p| json!({
                    "x": p.x, "y": p.y, "value": p.value, "residual": p.residual, "cutoff": p.cutoff.to_string(),
                })).collect::<Vec<_>>(),
                "rejected": r.rejected,
                "flagged": r.flagged,
            });
            (pretty(&doc), !r.flagged)
        }
        Command::Obstruction => {
            let f3 = hirzebruch::obstruction_degree(1, 1)?;
            let f4 = hirzebruch::obstruction_degree(2, 2)?;
            let tr = hirzebruch::obstruction_degree_by_transition()?;
            let doc = json!({
                "f3": {"n": 1, "marked": 1, "degree": f3},
                "f4": {"n": 2, "marked": 2, "bidegree": f4},
                "transition_degree": tr,
                "h1_minus2": hirzebruch::h_dim(-2, 1),
            });
            (pretty(&doc), true)
        }
        Command::VerifyAll { format } => {
            let checks = verify::run_all(nu, cutoff);
            let ok = checks.iter().all(|c| c.passed);
            let doc = match format {
                Format::Json => pretty(&Value::Array(
                    checks
                        .iter()
                        .map(|c| {
                            json!({
                                "id": c.id,
                                "formula": c.formula,
                                "cutoff": c.cutoff.map(|q| q.to_string()),
                                "pass": c.passed,
                                "detail": c.detail,
                            })
                        })
                        .collect(),
                )),
                Format::Text => table(&checks),
            };
            (doc, ok)
        }
    })
}

fn table(checks: &[verify::Check]) -> String {
    let idw = checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    let fw = checks.iter().map(|c| c.formula.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let pad = fw - c.formula.chars().count();
        let cut = c.cutoff.map(|q| q.to_string()).unwrap_or_else(|| "-".into());
        s += &format!(
            "{:<idw$}  {}{}  {:>4}  {}  {}\n",
            c.id,
            c.formula,
            " ".repeat(pad),
            cut,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    s += &format!("{passed}/{} checks passed\n", checks.len());
    s
}

fn write_out(path: &PathBuf, doc: &str) -> std::io::Result<()> {
    if path.as_os_str() == "-" {
        std::io::stdout().write_all(doc.as_bytes())
    } else {
        std::fs::write(path, doc)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let nu_a = cli.nu_a.unwrap_or(Q::from_integer(2));
    let nu_b = cli.nu_b.unwrap_or(Q::from_integer(1));
    let nu = match ValuationMap::new(nu_a, nu_b) {
        Ok(nu) => nu,
        Err(e) => {
            eprintln!("error: invalid value for '--nuA'/'--nuB': {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx { nu, cutoff: cli.cutoff.unwrap_or_else(|| nu.default_cutoff()) };
    match run(cli.command, &ctx) {
        Ok((doc, ok)) => {
            if let Err(e) = write_out(&cli.out, &doc) {
                eprintln!("error: cannot write {}: {e}", cli.out.display());
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

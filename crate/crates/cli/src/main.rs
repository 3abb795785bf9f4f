//! `tropabel`: JSON front end to the library.
//!
//! Exit codes: 0 on success or a true verdict, 1 on a false verdict, 2 on
//! any error (with `{"error": code, "detail": message}` on stdout).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use tropabel::curve::{curve_gcd, degree, degree_by_crossing, mikhalkin_multiplicity, ParamCurve};
use tropabel::enumerate::{enumerate, enumerate_certified, SearchBounds};
use tropabel::json::{
    cmat_doc, cmat_from, rmat_doc, rmat_from, CurveDoc, EnumerationDoc, FamilyDoc, MultiCoverDoc, MultiplicityDoc,
    PeriodDoc, SkewFormDoc, TorusDoc, SCHEMA,
};
use tropabel::multicover::{verify_multiple_cover_with, Status};
use tropabel::mumford::{build_Z, check_family_polarization, sigma, MumfordFamily};
use tropabel::polarization::{poincare_dual, polarization_type, riemann_report, PeriodData};
use tropabel::svg::render_curve;
use tropabel::torus::{check_tropical_polarization, sample_config, special_relations, TropicalTorus};
use tropabel::{comatrix, CMat2, Error, IMat2, Mat2, Result};

#[derive(Parser)]
#[command(
    name = "tropabel",
    version,
    about = "Polarized abelian surfaces and tropical curve counts"
)]
struct Cli {
    /// Worker threads for enumeration; defaults to the available parallelism.
    #[arg(long, global = true, env = "TROPABEL_JOBS")]
    jobs: Option<usize>,
    /// Refuse tori lying in the special symmetric families.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TorusArg {
    /// Torus document `{S: [[..],[..]]}`, inline or a file path.
    #[arg(long)]
    torus: String,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    torus: TorusArg,
    /// Degree `[[a,b],[c,d]]`.
    #[arg(long)]
    degree: String,
    #[arg(long)]
    genus: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    slope_bound: Option<i64>,
    #[arg(long)]
    winding_bound: Option<i64>,
    /// Also write the document here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Riemann relations for a period matrix and a block skew form.
    CheckPolarization {
        #[arg(long = "Z")]
        z: String,
        #[arg(long = "Q")]
        q: String,
    },
    /// `Pf(Q)·Q⁻¹` in block form.
    PoincareDual {
        #[arg(long = "Q")]
        q: String,
    },
    /// The type `(d₁, d₂)` of a skew form.
    Type {
        #[arg(long = "Q")]
        q: String,
    },
    /// Whether `SᵀC` is symmetric positive definite.
    CheckTropical {
        #[command(flatten)]
        torus: TorusArg,
        #[arg(long = "C")]
        c: String,
    },
    /// The twisted family of degree `B` and twist `τ` over an integral torus.
    MumfordBuild {
        #[command(flatten)]
        torus: TorusArg,
        #[arg(long = "B")]
        b: String,
        #[arg(long, default_value_t = 0)]
        tau: i64,
    },
    /// Check a family document against the three polarization conditions.
    MumfordCheck {
        #[arg(long)]
        family: String,
    },
    /// The exponent of `σ(Z, B, δ)`.
    Sigma {
        #[arg(long = "Z")]
        z: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        delta: i64,
    },
    /// Curve invariants and degree computed both ways.
    ValidateCurve {
        #[command(flatten)]
        torus: TorusArg,
        #[arg(long)]
        curve: String,
    },
    Multiplicity {
        #[command(flatten)]
        torus: TorusArg,
        #[arg(long)]
        curve: String,
    },
    /// Curves of a degree and genus through a seeded configuration.
    Enumerate {
        #[command(flatten)]
        search: SearchArgs,
        /// Single pass, without the bounds-stability check.
        #[arg(long)]
        uncertified: bool,
    },
    /// `N^trop_{g,B,k}` from an enumeration document.
    Invariant {
        #[arg(long)]
        result: String,
        #[arg(long, default_value_t = 1)]
        k: i64,
    },
    /// Both sides of the multiple cover formula.
    Multicover {
        #[command(flatten)]
        search: SearchArgs,
        /// Draw every counted curve into this directory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw a curve in the fundamental parallelogram.
    Svg {
        #[command(flatten)]
        torus: TorusArg,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Output {
    Doc(Value, bool),
    Text(String),
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("{}: {e}", path.display()))
}

/// Inline JSON5 when the argument starts like a value, else a file path.
fn load<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        let p = Path::new(arg);
        fs::read_to_string(p).map_err(|e| io_err(p, e))?
    };
    serde_json::from_str(&text).or_else(|e| json5::from_str(&text).map_err(|e5| Error::Parse(format!("{e}; {e5}"))))
}

fn matrix(arg: &str) -> Result<IMat2> {
    Ok(Mat2(load(arg)?))
}

/// A period document, or the `Z` of a family document.
fn period(arg: &str) -> Result<CMat2> {
    match load::<PeriodDoc>(arg) {
        Ok(doc) => doc.to_value(),
        Err(first) => load::<FamilyDoc>(arg).map(|f| cmat_from(&f.z)).map_err(|_| first),
    }
}

fn torus(arg: &TorusArg, strict: bool) -> Result<Arc<TropicalTorus>> {
    let t = load::<TorusDoc>(&arg.torus)?.to_value()?;
    let special = special_relations(&t);
    if strict && !special.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "torus is special ({}); drop --strict to accept it",
            special.join(", ")
        )));
    }
    Ok(Arc::new(t))
}

fn curve(t: Arc<TropicalTorus>, arg: &str) -> Result<ParamCurve> {
    load::<CurveDoc>(arg)?.to_value(t)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| io_err(p, e))?;
    }
    Ok(())
}

fn start_bounds(s: &SearchArgs, b: &IMat2) -> Result<Option<SearchBounds>> {
    if s.slope_bound.is_none() && s.winding_bound.is_none() {
        return Ok(None);
    }
    let d = SearchBounds::default_for(b);
    SearchBounds::new(
        s.slope_bound.unwrap_or(d.slope_bound),
        s.winding_bound.unwrap_or(d.winding_bound),
    )
    .map(Some)
}

/// The exact text printed for `doc`, also used for `--out` files.
fn pretty(doc: &Value) -> String {
    serde_json::to_string_pretty(doc).expect("serializable") + "\n"
}

fn mat(m: &IMat2) -> Value {
    json!(m.0)
}

fn run(cli: &Cli) -> Result<Output> {
    let strict = cli.strict;
    Ok(match &cli.command {
        Command::CheckPolarization { z, q } => {
            let p = PeriodData::new(period(z)?)?;
            let q = load::<SkewFormDoc>(q)?.to_value()?;
            let r = riemann_report(&p, &q)?;
            let doc = json!({"schema": SCHEMA, "first": r.first, "second": r.second, "holds": r.holds()});
            Output::Doc(doc, r.holds())
        }
        Command::PoincareDual { q } => {
            let d = poincare_dual(&load::<SkewFormDoc>(q)?.to_value()?)?;
            let doc = json!({"schema": SCHEMA, "T": mat(&d.t), "B": mat(&d.b), "matrix": d.assemble().to_rows()});
            Output::Doc(doc, true)
        }
        Command::Type { q } => {
            let (d1, d2) = polarization_type(&load::<SkewFormDoc>(q)?.to_value()?)?;
            Output::Doc(json!({"schema": SCHEMA, "d1": d1, "d2": d2}), true)
        }
        Command::CheckTropical { torus: ta, c } => {
            let t = torus(ta, strict)?;
            let c = matrix(c)?;
            let holds = check_tropical_polarization(&t, &c);
            let b = comatrix(&c).ok();
            Output::Doc(json!({"schema": SCHEMA, "holds": holds, "B": b.map(|b| b.0)}), holds)
        }
        Command::MumfordBuild { torus: ta, b, tau } => {
            let t = torus(ta, strict)?;
            let s = t.integral().ok_or(Error::NonIntegralTorus)?;
            let b = matrix(b)?;
            let fam = MumfordFamily::twisted(&b, *tau, &s)?;
            debug_assert_eq!(fam.z(), &build_Z(&b, *tau, t.s())?);
            let mut q = SkewFormDoc::from_value(fam.q());
            q.schema = None;
            let doc = FamilyDoc {
                schema: Some(SCHEMA.into()),
                z: cmat_doc(fam.z()),
                s: rmat_doc(t.s()),
                tau: fam.tau(),
                q,
            };
            Output::Doc(serde_json::to_value(doc).expect("serializable"), true)
        }
        Command::MumfordCheck { family } => {
            let doc: FamilyDoc = load(family)?;
            let q = doc.q.to_value()?;
            if q.tau != doc.tau {
                return Err(Error::InvalidArgument(format!(
                    "tau {} differs from Q.tau {}",
                    doc.tau, q.tau
                )));
            }
            let z = cmat_from(&doc.z);
            let r = check_family_polarization(&z, &rmat_from(&doc.s), &q)?;
            let out = json!({
                "schema": SCHEMA,
                "block_form": r.block_form,
                "degree_positive": r.degree_positive,
                "riemann_equation": r.riemann_equation,
                "riemann_positive": r.riemann_positive,
                "diagnostics": r.diagnostics,
                "holds": r.holds(),
            });
            Output::Doc(out, r.holds())
        }
        Command::Sigma { z, b, delta } => {
            let w = sigma(&period(z)?, &matrix(b)?, *delta)?;
            let doc = json!({
                "schema": SCHEMA,
                "exponent": {"re": w.value.re.to_string(), "im": w.value.im.to_string()},
                "is_one": w.is_one(),
            });
            Output::Doc(doc, true)
        }
        Command::ValidateCurve { torus: ta, curve: ca } => {
            let pc = curve(torus(ta, strict)?, ca)?;
            let diags: Vec<String> = pc.validate().iter().map(ToString::to_string).collect();
            let valid = diags.is_empty();
            let mut doc = json!({"schema": SCHEMA, "valid": valid, "diagnostics": diags});
            if valid {
                doc["genus"] = json!(pc.genus());
                doc["gcd"] = json!(curve_gcd(&pc));
                doc["degree"] = degree(&pc).map(|b| mat(&b)).unwrap_or(Value::Null);
                doc["degree_by_crossing"] = degree_by_crossing(&pc).map(|b| mat(&b)).unwrap_or(Value::Null);
            }
            Output::Doc(doc, valid)
        }
        Command::Multiplicity { torus: ta, curve: ca } => {
            let pc = curve(torus(ta, strict)?, ca)?;
            let diags = pc.validate();
            if !diags.is_empty() {
                return Err(Error::InvalidCurve(
                    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                ));
            }
            let m = MultiplicityDoc::from(&mikhalkin_multiplicity(&pc)?);
            let mut doc = serde_json::to_value(m).expect("serializable");
            doc["schema"] = json!(SCHEMA);
            Output::Doc(doc, true)
        }
        Command::Enumerate { search, uncertified } => {
            let t = torus(&search.torus, strict)?;
            let b = matrix(&search.degree)?;
            let cfg = sample_config(&t, search.genus, search.seed)?;
            let bounds = start_bounds(search, &b)?.unwrap_or_else(|| SearchBounds::default_for(&b));
            let res = if *uncertified {
                enumerate(&t, &b, search.genus, &cfg, bounds)?
            } else {
                enumerate_certified(&t, &b, search.genus, &cfg, bounds)?
            };
            let doc = serde_json::to_value(EnumerationDoc::from_value(&res)).expect("serializable");
            write_out(&search.out, &pretty(&doc))?;
            Output::Doc(doc, true)
        }
        Command::Invariant { result, k } => {
            let doc: EnumerationDoc = load(result)?;
            doc.check()?;
            let out = json!({
                "schema": SCHEMA,
                "k": k,
                "value": doc.invariant(*k),
                "bounds_stable": doc.bounds_stable,
            });
            Output::Doc(out, true)
        }
        Command::Multicover { search, svg } => {
            let t = torus(&search.torus, strict)?;
            let b = matrix(&search.degree)?;
            let report = verify_multiple_cover_with(&t, &b, search.genus, search.seed, start_bounds(search, &b)?)?;
            if let Some(dir) = svg {
                draw_counted(&t, &b, search, dir)?;
            }
            let doc = serde_json::to_value(MultiCoverDoc::from_value(&report)).expect("serializable");
            write_out(&search.out, &pretty(&doc))?;
            let ok = report.verdict && report.status == Status::Certified;
            Output::Doc(doc, ok)
        }
        Command::Svg {
            torus: ta,
            curve: ca,
            out,
        } => {
            let text = render_curve(&curve(torus(ta, strict)?, ca)?)?;
            write_out(out, &text)?;
            Output::Text(text)
        }
    })
}

/// One drawing per curve of degree `B` (all of which the untwisted family
/// counts), named by position in key order.
fn draw_counted(t: &Arc<TropicalTorus>, b: &IMat2, search: &SearchArgs, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let cfg = sample_config(t, search.genus, search.seed)?;
    let bounds = start_bounds(search, b)?.unwrap_or_else(|| SearchBounds::default_for(b));
    let res = enumerate_certified(t, b, search.genus, &cfg, bounds)?;
    for (i, c) in res.curves.iter().enumerate() {
        let p = dir.join(format!("curve_{i:03}_gcd{}.svg", c.gcd()));
        fs::write(&p, render_curve(&c.curve)?).map_err(|e| io_err(&p, e))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("{}", json!({"error": "Usage", "detail": e.to_string().trim()}));
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            println!("{}", json!({"error": "Internal", "detail": e.to_string()}));
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Output::Doc(doc, ok)) => {
            print!("{}", pretty(&doc));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", json!({"error": e.code(), "detail": e.to_string()}));
            ExitCode::from(2)
        }
    }
}

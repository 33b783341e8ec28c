//! `plancherel`: command-line driver for the oracle, curve solver, recursion
//! engine and observables.
//!
//! Exit codes: 0 ok, 1 acceptance failures (verify), 2 bad flags,
//! 3 numeric failure, 4 out of regime, 5 truncation insufficient.

use clap::{Args, Parser, Subcommand, ValueEnum};
use plancherel::curve::{loop_first_omitted, loop_residual, solve_plancherel, solve_xp, Curve, SpectralCurve};
use plancherel::numerics::{parse_real, to_decimal, DEFAULT_PREC};
use plancherel::observables::{gw_invariants, limit_shape, mirror_curve};
use plancherel::oracle::{z_plancherel, z_qdeformed_series, PlancherelSumSpec};
use plancherel::toprec::{f1, RecursionEngine};
use plancherel::verify::{self, Profile, Status};
use plancherel::Error;
use rug::Float;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "plancherel", version, about = "Plancherel partition sums and their topological-recursion asymptotics")]
struct Cli {
    /// Working precision in bits (default: PLANCHEREL_PRECISION, else 256).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Cap on worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output file; written atomically. Standard output if omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add wall time to the output (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Plancherel,
    Xp,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact truncated partition sums.
    Oracle(OracleArgs),
    /// Solve a spectral curve.
    Curve(CurveArgs),
    /// Free energies f1, F_2..F_gmax.
    Fg(FgArgs),
    /// Limit shape of the Plancherel family.
    Shape(ShapeArgs),
    /// Gromov-Witten invariants of X_p.
    Gw(GwArgs),
    /// Loop-equation residuals and mirror-curve vanishing.
    Diag(DiagArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct Couplings {
    #[arg(long)]
    t2: Option<String>,
    #[arg(long)]
    t3: Option<String>,
    #[arg(long)]
    t4: Option<String>,
    #[arg(long)]
    t5: Option<String>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    q: Option<String>,
    #[command(flatten)]
    t: Couplings,
    /// Bound on the partition length.
    #[arg(long = "N")]
    n_max: Option<usize>,
    #[arg(long)]
    max_weight: Option<u64>,
    /// q-deformed Plancherel sum for X_p instead.
    #[arg(long)]
    qdeformed: bool,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<i64>,
    #[arg(long)]
    dmax: Option<usize>,
    #[arg(long)]
    gmax: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct CurveSel {
    #[arg(long, value_enum, default_value_t = Family::Plancherel)]
    family: Family,
    #[command(flatten)]
    c: Couplings,
    /// X_p degree.
    #[arg(long, allow_negative_numbers = true)]
    p: Option<i64>,
    /// X_p Kähler parameter.
    #[arg(long = "t")]
    kahler: Option<String>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    sel: CurveSel,
}

#[derive(Args, Debug)]
struct FgArgs {
    #[command(flatten)]
    sel: CurveSel,
    #[arg(long, default_value_t = 2)]
    gmax: u32,
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[command(flatten)]
    t: Couplings,
    #[arg(long)]
    q: String,
    #[arg(long, default_value_t = 100)]
    points: usize,
}

#[derive(Args, Debug)]
struct GwArgs {
    #[arg(long, allow_negative_numbers = true)]
    p: i64,
    #[arg(long, default_value_t = 2)]
    gmax: u32,
    #[arg(long, default_value_t = 3)]
    dmax: usize,
}

#[derive(Args, Debug)]
struct DiagArgs {
    #[command(flatten)]
    sel: CurveSel,
    /// q for the Plancherel family, g_s for X_p.
    #[arg(long)]
    scale: String,
    /// Bernoulli terms kept on each side.
    #[arg(long, default_value_t = 5)]
    trunc: usize,
    /// Interior cut points.
    #[arg(long, default_value_t = 10)]
    samples: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    #[arg(long)]
    full: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

/// Everything that determines an output, embedded in it.
#[derive(Debug, Serialize)]
struct RunConfig {
    command: String,
    precision: u32,
    threads: usize,
    format: Format,
    output: Option<String>,
    params: BTreeMap<String, Value>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfRegime(_) | Error::NonConvergence { .. } | Error::SingularJacobian => 4,
            Error::TruncationInsufficient { .. } => 5,
            _ => 3,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn decimal(prec: u32, name: &str, s: &str) -> CliResult<Float> {
    let v = parse_real(prec, s.trim()).ok_or_else(|| usage(format!("--{name}: not a decimal number: {s:?}")))?;
    if !v.is_finite() {
        return Err(usage(format!("--{name}: must be finite")));
    }
    Ok(v)
}

fn couplings(prec: u32, c: &Couplings, params: &mut BTreeMap<String, Value>) -> CliResult<Vec<Float>> {
    let raw = [("t2", &c.t2), ("t3", &c.t3), ("t4", &c.t4), ("t5", &c.t5)];
    let last = raw.iter().rposition(|(_, v)| v.is_some());
    let mut out = Vec::new();
    if let Some(last) = last {
        for (name, v) in &raw[..=last] {
            let x = match v {
                Some(s) => decimal(prec, name, s)?,
                None => Float::new(prec),
            };
            params.insert(name.to_string(), json!(to_decimal(&x)));
            out.push(x);
        }
    }
    Ok(out)
}

fn precision(flag: Option<u32>) -> CliResult<u32> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var("PLANCHEREL_PRECISION") {
            Ok(s) => s.trim().parse().map_err(|_| usage(format!("PLANCHEREL_PRECISION: not an integer: {s:?}")))?,
            Err(_) => DEFAULT_PREC,
        },
    };
    if !(64..=4096).contains(&p) {
        return Err(usage(format!("precision {p} outside 64..=4096 bits")));
    }
    Ok(p)
}

fn solve_curve(prec: u32, sel: &CurveSel, params: &mut BTreeMap<String, Value>) -> CliResult<Curve> {
    match sel.family {
        Family::Plancherel => {
            params.insert("family".into(), json!("plancherel"));
            if sel.p.is_some() || sel.kahler.is_some() {
                return Err(usage("--p/--t belong to --family xp"));
            }
            let t = couplings(prec, &sel.c, params)?;
            Ok(Curve::Plancherel(solve_plancherel(&t, prec)?))
        }
        Family::Xp => {
            params.insert("family".into(), json!("xp"));
            let p = sel.p.ok_or_else(|| usage("--family xp needs --p"))?;
            let t = decimal(prec, "t", sel.kahler.as_deref().ok_or_else(|| usage("--family xp needs --t"))?)?;
            if sel.c.t2.is_some() || sel.c.t3.is_some() || sel.c.t4.is_some() || sel.c.t5.is_some() {
                return Err(usage("--t2.. belong to --family plancherel"));
            }
            params.insert("p".into(), json!(p));
            params.insert("t".into(), json!(to_decimal(&t)));
            Ok(Curve::Xp(solve_xp(p, &t)?))
        }
    }
}

fn engine(curve: &Curve, g_max: u32) -> CliResult<RecursionEngine> {
    let arc: Arc<dyn SpectralCurve + Send + Sync> = match curve {
        Curve::Plancherel(c) => Arc::new(c.clone()),
        Curve::Xp(c) => Arc::new(c.clone()),
    };
    Ok(RecursionEngine::new(arc, g_max)?)
}

/// A validated command, ready to run.
struct Job {
    config: RunConfig,
    run: Box<dyn FnOnce() -> CliResult<Output>>,
}

enum Output {
    Json(Value),
    /// CSV body plus the JSON fallback for --format json.
    Table { csv: String, json: Value },
    Report { text: String, json: Value, failed: bool },
}

fn prepare(cli: Cli) -> CliResult<Job> {
    let prec = precision(cli.precision)?;
    if cli.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    let mut params = BTreeMap::new();
    let (name, run): (&str, Box<dyn FnOnce() -> CliResult<Output>>) = match cli.command {
        Command::Oracle(a) => ("oracle", prepare_oracle(prec, a, &mut params)?),
        Command::Curve(a) => {
            let sel = a.sel.clone();
            validate_sel(prec, &sel, &mut params)?;
            (
                "curve",
                Box::new(move || {
                    let mut scratch = BTreeMap::new();
                    let c = solve_curve(prec, &sel, &mut scratch)?;
                    let mut j = serde_json::to_value(c.to_json()).expect("curve json");
                    if let Curve::Xp(x) = &c {
                        j["invariant_residuals"] = json!(x.invariant_residuals().iter().map(|r| format!("{r:e}")).collect::<Vec<_>>());
                    }
                    Ok(Output::Json(j))
                }),
            )
        }
        Command::Fg(a) => {
            validate_sel(prec, &a.sel, &mut params)?;
            if !(1..=4).contains(&a.gmax) {
                return Err(usage("--gmax must lie in 1..=4"));
            }
            params.insert("gmax".into(), json!(a.gmax));
            let (sel, gmax) = (a.sel.clone(), a.gmax);
            ("fg", Box::new(move || run_fg(prec, &sel, gmax)))
        }
        Command::Shape(a) => {
            let t = couplings(prec, &a.t, &mut params)?;
            let q = decimal(prec, "q", &a.q)?;
            if q <= 0 {
                return Err(usage("--q must be positive"));
            }
            if a.points == 0 || a.points > 100_000 {
                return Err(usage("--points must lie in 1..=100000"));
            }
            params.insert("q".into(), json!(to_decimal(&q)));
            params.insert("points".into(), json!(a.points));
            let points = a.points;
            ("shape", Box::new(move || run_shape(prec, &t, &q, points)))
        }
        Command::Gw(a) => {
            if a.gmax > 4 || a.dmax == 0 || a.dmax > 8 {
                return Err(usage("need --gmax <= 4 and 1 <= --dmax <= 8"));
            }
            params.insert("p".into(), json!(a.p));
            params.insert("gmax".into(), json!(a.gmax));
            params.insert("dmax".into(), json!(a.dmax));
            (
                "gw",
                Box::new(move || {
                    let tab = gw_invariants(a.p, a.gmax, a.dmax, prec)?;
                    Ok(Output::Json(serde_json::to_value(tab.to_json()).expect("gw json")))
                }),
            )
        }
        Command::Diag(a) => {
            validate_sel(prec, &a.sel, &mut params)?;
            let scale = decimal(prec, "scale", &a.scale)?;
            if scale <= 0 {
                return Err(usage("--scale must be positive"));
            }
            if a.trunc == 0 || a.trunc > 40 || a.samples == 0 || a.samples > 10_000 {
                return Err(usage("need 1 <= --trunc <= 40 and 1 <= --samples <= 10000"));
            }
            params.insert("scale".into(), json!(to_decimal(&scale)));
            params.insert("trunc".into(), json!(a.trunc));
            params.insert("samples".into(), json!(a.samples));
            let sel = a.sel.clone();
            ("diag", Box::new(move || run_diag(prec, &sel, &scale, a.trunc, a.samples)))
        }
        Command::Verify(a) => {
            let profile = if a.quick { Profile::Quick } else { Profile::Full };
            if let Some(bad) = a.only.iter().find(|&&id| !(1..=12).contains(&id)) {
                return Err(usage(format!("--only: no criterion {bad}")));
            }
            params.insert("profile".into(), json!(if a.quick { "quick" } else { "full" }));
            if !a.only.is_empty() {
                params.insert("only".into(), json!(a.only));
            }
            let only = a.only.clone();
            ("verify", Box::new(move || run_verify(profile, &only)))
        }
    };
    let config = RunConfig {
        command: name.into(),
        precision: prec,
        threads: cli.threads,
        format: cli.format,
        output: cli.output.as_ref().map(|p| p.display().to_string()),
        params,
    };
    Ok(Job { config, run })
}

/// Checks curve flags without solving; the solve happens in the job.
fn validate_sel(prec: u32, sel: &CurveSel, params: &mut BTreeMap<String, Value>) -> CliResult<()> {
    match sel.family {
        Family::Plancherel => {
            if sel.p.is_some() || sel.kahler.is_some() {
                return Err(usage("--p/--t belong to --family xp"));
            }
            params.insert("family".into(), json!("plancherel"));
            couplings(prec, &sel.c, params)?;
        }
        Family::Xp => {
            let p = sel.p.ok_or_else(|| usage("--family xp needs --p"))?;
            let t = decimal(prec, "t", sel.kahler.as_deref().ok_or_else(|| usage("--family xp needs --t"))?)?;
            if sel.c.t2.is_some() || sel.c.t3.is_some() || sel.c.t4.is_some() || sel.c.t5.is_some() {
                return Err(usage("--t2.. belong to --family plancherel"));
            }
            params.insert("family".into(), json!("xp"));
            params.insert("p".into(), json!(p));
            params.insert("t".into(), json!(to_decimal(&t)));
        }
    }
    Ok(())
}

fn prepare_oracle(prec: u32, a: OracleArgs, params: &mut BTreeMap<String, Value>) -> CliResult<Box<dyn FnOnce() -> CliResult<Output>>> {
    if a.qdeformed {
        if a.q.is_some() || a.max_weight.is_some() || a.n_max.is_some() {
            return Err(usage("--qdeformed takes --p, --dmax, --gmax only"));
        }
        let p = a.p.ok_or_else(|| usage("--qdeformed needs --p"))?;
        let dmax = a.dmax.ok_or_else(|| usage("--qdeformed needs --dmax"))?;
        let gmax = a.gmax.unwrap_or(2);
        if dmax == 0 || dmax > 8 || gmax > 6 {
            return Err(usage("need 1 <= --dmax <= 8 and --gmax <= 6"));
        }
        params.insert("qdeformed".into(), json!(true));
        params.insert("p".into(), json!(p));
        params.insert("dmax".into(), json!(dmax));
        params.insert("gmax".into(), json!(gmax));
        return Ok(Box::new(move || {
            let s = z_qdeformed_series(p, dmax, gmax)?;
            let mut rows = Vec::new();
            for g in 0..=gmax {
                for d in 1..=dmax {
                    rows.push(json!({"g": g, "d": d, "value": s.invariant(g, d)?.to_string()}));
                }
            }
            Ok(Output::Json(json!({"p": p, "invariants": rows})))
        }));
    }
    if a.p.is_some() || a.dmax.is_some() || a.gmax.is_some() {
        return Err(usage("--p/--dmax/--gmax need --qdeformed"));
    }
    let q = decimal(prec, "q", a.q.as_deref().ok_or_else(|| usage("oracle needs --q"))?)?;
    if q < 0 {
        return Err(usage("--q must be nonnegative"));
    }
    let max_weight = a.max_weight.ok_or_else(|| usage("oracle needs --max-weight"))?;
    if max_weight > 120 {
        return Err(usage("--max-weight above 120 is out of reach"));
    }
    let t = couplings(prec, &a.t, params)?;
    params.insert("q".into(), json!(to_decimal(&q)));
    params.insert("max_weight".into(), json!(max_weight));
    if let Some(n) = a.n_max {
        params.insert("N".into(), json!(n));
    }
    let spec = PlancherelSumSpec { q, t, n_max: a.n_max, max_weight };
    Ok(Box::new(move || {
        let v = z_plancherel(&spec)?;
        let rel = if v.value.is_zero() { Float::new(prec) } else { Float::with_val(prec, &v.last_shell / &v.value).abs() };
        Ok(Output::Json(json!({
            "value": to_decimal(&v.value),
            "ln_value": if v.value > 0 { json!(to_decimal(&Float::with_val(prec, v.value.ln_ref()))) } else { Value::Null },
            "last_shell": to_decimal(&v.last_shell),
            "last_shell_relative": to_decimal(&rel),
        })))
    }))
}

fn run_fg(prec: u32, sel: &CurveSel, gmax: u32) -> CliResult<Output> {
    let mut scratch = BTreeMap::new();
    let curve = solve_curve(prec, sel, &mut scratch)?;
    let f1v = f1(curve.as_dyn())?;
    let mut eng = engine(&curve, gmax)?;
    let mut fg = Vec::new();
    for g in 2..=gmax {
        fg.push(json!({"g": g, "value": to_decimal(&eng.free_energy(g)?)}));
    }
    Ok(Output::Json(json!({
        "curve": serde_json::to_value(curve.to_json()).expect("curve json"),
        "f1": to_decimal(&f1v),
        "F": fg,
        "convention": "f1 = (1/24) ln|gamma^2 y'(1) y'(-1)|; F_g = (1/(2-2g)) sum Res Phi omega_{g,1}; ln Z ~ sum q^(1-g) F_g with genus-one term -f1",
    })))
}

fn run_shape(prec: u32, t: &[Float], q: &Float, points: usize) -> CliResult<Output> {
    let curve = solve_plancherel(t, prec)?;
    let shape = limit_shape(&curve, q, points)?;
    let pts: Vec<Value> = shape
        .points
        .iter()
        .map(|pt| {
            let (a, b) = pt.rotated();
            json!({"phi": to_decimal(&pt.phi), "lambda_minus_i": to_decimal(&a), "lambda_plus_i": to_decimal(&b)})
        })
        .collect();
    let json = json!({
        "q": to_decimal(&shape.q),
        "n_bar": to_decimal(&shape.n_bar),
        "gamma": to_decimal(&shape.gamma),
        "points": pts,
    });
    Ok(Output::Table { csv: shape.to_csv(), json })
}

fn run_diag(prec: u32, sel: &CurveSel, scale: &Float, trunc: usize, samples: usize) -> CliResult<Output> {
    let mut scratch = BTreeMap::new();
    let curve = solve_curve(prec, sel, &mut scratch)?;
    let (lo, hi) = match &curve {
        Curve::Plancherel(c) => (Float::new(prec), Float::with_val(prec, &c.gamma * 4u32)),
        Curve::Xp(c) => (Float::with_val(prec, 1 - Float::with_val(prec, &c.gamma * 4u32)), Float::with_val(prec, 1)),
    };
    let width = Float::with_val(prec, &hi - &lo);
    let xs: Vec<Float> = (1..=samples)
        .map(|i| Float::with_val(prec, &lo + Float::with_val(prec, &width * i as u32) / (samples as u32 + 1)))
        .collect();
    let res = loop_residual(&curve, &xs, scale, trunc)?;
    let bound = loop_first_omitted(&curve, &xs, scale, trunc)?;
    let mut rows = Vec::new();
    let mut all_below = true;
    for ((x, r), b) in xs.iter().zip(&res).zip(&bound) {
        all_below &= r < b;
        rows.push(json!({"x": to_decimal(x), "residual": to_decimal(r), "first_omitted": to_decimal(b)}));
    }
    let mut out = json!({"curve": serde_json::to_value(curve.to_json()).expect("curve json"), "loop_equation": rows, "below_first_omitted": all_below});
    if let Curve::Xp(c) = &curve {
        if let Ok(m) = mirror_curve(c.p, &c.t) {
            let pts = verify::circle_points(20);
            let worst = pts.iter().map(|z| m.vanishing_defect(&m.general, z)).fold(0.0, f64::max);
            out["mirror"] = serde_json::to_value(m.to_json()).expect("mirror json");
            out["mirror_vanishing_defect"] = json!(format!("{worst:e}"));
        }
    }
    if !all_below {
        return Err(Failure { code: 3, msg: format!("loop residual not below the first omitted term: {out}") });
    }
    Ok(Output::Json(out))
}

fn run_verify(profile: Profile, only: &[u32]) -> CliResult<Output> {
    let ids: Vec<u32> = if only.is_empty() { verify::CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    let mut text = String::new();
    let mut results = Vec::new();
    let mut failed = false;
    for id in ids {
        let r = verify::run(id, profile);
        eprintln!("criterion {id}: {:.1} s", r.seconds);
        text.push_str(&format!("criterion {:>2} {}: {} {}\n", r.id, r.status.label(), r.title, r.detail));
        failed |= r.status == Status::Fail;
        results.push(r);
    }
    Ok(Output::Report { text, json: json!({"criteria": results}), failed })
}

fn render(cfg: &RunConfig, out: Output, elapsed: Option<f64>) -> (String, bool) {
    let wrap = |body: Value| -> String {
        let mut doc = json!({"schema": SCHEMA, "config": cfg, "result": body});
        if let Some(s) = elapsed {
            doc["timing_seconds"] = json!(s);
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    };
    match (out, cfg.format) {
        (Output::Json(v), _) => (wrap(v), false),
        (Output::Table { csv, .. }, Format::Csv) => (csv, false),
        (Output::Table { json, .. }, Format::Json) => (wrap(json), false),
        (Output::Report { text, failed, .. }, Format::Csv) => (text, failed),
        (Output::Report { json, failed, .. }, Format::Json) => (wrap(json), failed),
    }
}

fn write_atomic(path: &PathBuf, body: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let timing = cli.timing;
    let output = cli.output.clone();
    let job = match prepare(cli) {
        Ok(j) => j,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            return ExitCode::from(f.code);
        }
    };
    let start = Instant::now();
    let result = match (job.run)() {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            return ExitCode::from(f.code);
        }
    };
    let secs = start.elapsed().as_secs_f64();
    let (body, failed) = render(&job.config, result, timing.then_some(secs));
    if timing {
        eprintln!("elapsed: {secs:.3} s");
    }
    match &output {
        Some(path) => {
            if let Err(e) = write_atomic(path, &body) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{body}"),
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

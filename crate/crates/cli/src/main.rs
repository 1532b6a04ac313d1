use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

use fueter::cf::is_monogenic;
use fueter::cp1::{
    annulus_sample, cohomology_coefficients, decay_check, h1_dimension, harmonic_representative, validate_form,
    BumpFixture, DecayTarget, Form01,
};
use fueter::domain::DomainSpec;
use fueter::fd::FdConfig;
use fueter::field::{BuiltinComplexField, BuiltinField, ComplexField, QuaternionicField};
use fueter::hull::{hull_contains, hull_distance, hull_witness, ImUnitSphereSampler};
use fueter::penrose::{
    calibration, diagram_check, penrose_transform, penrose_transform_complex, sharp, sharp_closed, sharp_fibre,
    PenroseConfig,
};
use fueter::quadrature::QuadratureConfig;
use fueter::sampling::{sample_shell, seeded};
use fueter::twistor::{hopf_grid, hull_contains_via_lines, line_embed, sweep_point_via_line, FiberGrid};
use fueter::verify::{run_criterion, verify_all, C6_TOL, C7_TOL, C8_TOL};
use fueter::{BiquaternionPoint, CMatrix, QuatVec};

#[derive(Parser)]
#[command(name = "fueter", version, about = "Cauchy-Fueter operator, monogenic hulls and the Penrose transform")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Number of quaternionic variables.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FUETER_THREADS")]
    threads: Option<usize>,
    /// Also write the report to this file.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Tabular output where a command has one (`twistor sweep`); JSON elsewhere.
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Cauchy-Fueter checks.
    Cf {
        #[command(subcommand)]
        cmd: CfCmd,
    },
    /// Monogenic hull queries.
    Hull {
        #[command(subcommand)]
        cmd: HullCmd,
    },
    /// Twistor lines and the hull test via lines.
    Twistor {
        #[command(subcommand)]
        cmd: TwistorCmd,
    },
    /// Line bundles on CP^1.
    Cp1 {
        #[command(subcommand)]
        cmd: Cp1Cmd,
    },
    /// The Penrose transform.
    Penrose {
        #[command(subcommand)]
        cmd: PenroseCmd,
    },
    /// The acceptance suite.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum CfCmd {
    /// Finite-difference monogenicity test of a registered field.
    Check {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Sample shell `r_min < |q_1| < r_max`.
        #[arg(long, default_value_t = 0.2)]
        r_min: f64,
        #[arg(long, default_value_t = 5.0)]
        r_max: f64,
        /// Finite-difference step; default scales with the point.
        #[arg(long)]
        step: Option<f64>,
    },
}

#[derive(Args)]
struct HullArgs {
    /// JSON domain or shorthand (`H*:n=1`, `ball:r=1,n=2`, ...).
    #[arg(long)]
    domain: String,
    /// `{"x": [...], "y": [...]}` or a `2n x 2` matrix of `[re, im]` entries.
    #[arg(long)]
    sigma: String,
    #[arg(long, default_value_t = 512)]
    sphere_nodes: usize,
}

#[derive(Subcommand)]
enum HullCmd {
    Contains(HullArgs),
    Distance(HullArgs),
    Witness(HullArgs),
}

#[derive(Subcommand)]
enum TwistorCmd {
    /// Points of `L_Sigma` over a Hopf grid and their base points.
    Sweep {
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 4)]
        n_theta: usize,
        #[arg(long, default_value_t = 8)]
        n_phi: usize,
    },
    /// Hull membership by sweeping the twistor line.
    HullLines {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 16)]
        n_theta: usize,
        #[arg(long, default_value_t = 32)]
        n_phi: usize,
    },
}

#[derive(Subcommand)]
enum Cp1Cmd {
    /// Cohomology coefficients of the harmonic form for `(a0, a1)` plus an optional exact bump part.
    Coeffs {
        #[arg(long, default_value = "[1,0]")]
        a0: String,
        #[arg(long, default_value = "[0,0]")]
        a1: String,
        /// `{"centre": [re, im], "radius": r, "c0": [re, im], "c1": [re, im]}`.
        #[arg(long)]
        bump: Option<String>,
        /// Quadrature configuration as JSON.
        #[arg(long)]
        quad: Option<String>,
    },
    /// Validates the harmonic representative: clutching and decay.
    Harmonic {
        #[arg(long, default_value = "[1,0]")]
        a0: String,
        #[arg(long, default_value = "[0,0]")]
        a1: String,
    },
    /// `dim H^1(CP^1, Q_k)`.
    Dim {
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
    },
}

#[derive(Subcommand)]
enum PenroseCmd {
    /// `P(sharp psi) = psi` on random base points.
    Roundtrip {
        #[arg(long, default_value = "E")]
        field: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// `sharp psi` on the fibres over random base points: clutching and decay.
    Forward {
        #[arg(long, default_value = "E")]
        field: String,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// The complexified transform at `sigma`, compared with the known extension.
    Complex {
        #[arg(long, default_value = "E")]
        field: String,
        #[arg(long)]
        sigma: String,
    },
    /// The calibrated commutative diagram.
    Diagram {
        #[arg(long, default_value = "nonmonogenic_mixed")]
        field: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// All eight criteria.
    All,
    /// One criterion.
    One {
        #[arg(long)]
        id: u8,
    },
}

/// Configuration problems exit with 2.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!(ConfigError(e.to_string()))
}

/// Library errors that describe bad input rather than a failed computation.
fn lib(e: fueter::Error) -> anyhow::Error {
    use fueter::Error::*;
    match e {
        DimensionMismatch { .. } | SamplerTooSmall(_) | EmptySample | InvalidExponent { .. } | UnknownField(_)
        | Config(_) | TrivialCohomology { .. } | ZeroHomogeneous => config(e),
        other => anyhow!(other),
    }
}

struct Report {
    command: String,
    passed: bool,
    failures: Vec<String>,
    result: Value,
    /// Plain text for stdout instead of the JSON report.
    plain: Option<String>,
}

impl Report {
    fn query(command: &str, result: Value) -> Self {
        Self {
            command: command.into(),
            passed: true,
            failures: vec![],
            result,
            plain: None,
        }
    }

    fn check(command: &str, failures: Vec<String>, result: Value) -> Self {
        Self {
            command: command.into(),
            passed: failures.is_empty(),
            failures,
            result,
            plain: None,
        }
    }
}

fn parse_complex(s: &str) -> anyhow::Result<C64> {
    let v: Value = serde_json::from_str(s).map_err(|e| config(format!("complex number '{s}': {e}")))?;
    complex_of(&v)
}

fn complex_of(v: &Value) -> anyhow::Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| config("complex entries must be numbers"))?;
            let im = a[1].as_f64().ok_or_else(|| config("complex entries must be numbers"))?;
            Ok(C64::new(re, im))
        }
        _ => Err(config(format!("expected a number or [re, im], got {v}"))),
    }
}

fn coords(v: &Value, what: &str) -> anyhow::Result<QuatVec> {
    let c: Vec<f64> = serde_json::from_value(v.clone()).map_err(|e| config(format!("{what}: {e}")))?;
    QuatVec::from_coords(&c).map_err(lib)
}

fn parse_sigma(s: &str, n: usize) -> anyhow::Result<BiquaternionPoint> {
    let v: Value = serde_json::from_str(s).map_err(|e| config(format!("sigma JSON: {e}")))?;
    let sigma = match &v {
        Value::Object(o) => {
            let x = coords(o.get("x").ok_or_else(|| config("sigma needs 'x'"))?, "sigma.x")?;
            let y = match o.get("y") {
                Some(y) => coords(y, "sigma.y")?,
                None => QuatVec::zeros(x.n()),
            };
            BiquaternionPoint::new(x, y).map_err(lib)?
        }
        Value::Array(rows) => {
            let mut m = Vec::with_capacity(rows.len());
            for r in rows {
                match r {
                    Value::Array(e) if e.len() == 2 => m.push([complex_of(&e[0])?, complex_of(&e[1])?]),
                    _ => return Err(config("matrix rows must have two entries")),
                }
            }
            BiquaternionPoint::from_matrix(&CMatrix { rows: m }).map_err(lib)?
        }
        _ => return Err(config("sigma must be an object or a matrix")),
    };
    if sigma.n() != n {
        return Err(config(format!("sigma has n = {}, but --n is {n}", sigma.n())));
    }
    Ok(sigma)
}

fn parse_domain(s: &str, n: usize) -> anyhow::Result<DomainSpec> {
    let d: DomainSpec = s.parse().map_err(lib)?;
    use fueter::domain::Domain;
    if d.dim() != n {
        return Err(config(format!("domain has n = {}, but --n is {n}", d.dim())));
    }
    Ok(d)
}

fn base_points(n: usize, count: usize, seed: u64) -> Vec<QuatVec> {
    let mut rng = seeded(seed);
    let shell = sample_shell(1, 0.5, 2.0, count, &mut rng);
    shell
        .into_iter()
        .map(|q| {
            let mut v = fueter::sampling::random_quat_vec(n, 1.0, &mut rng);
            v.0[0] = q.0[0];
            v
        })
        .collect()
}

fn extension_of(field: &str) -> Option<&'static str> {
    match field {
        "E" => Some("E_ext"),
        "linear_monogenic" => Some("linear_monogenic_ext"),
        "identity_q" => Some("identity_ext"),
        _ => None,
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let g = &cli.global;
    if g.n == 0 {
        return Err(config("--n must be positive"));
    }
    match &cli.command {
        Command::Cf {
            cmd:
                CfCmd::Check {
                    field,
                    samples,
                    tol,
                    r_min,
                    r_max,
                    step,
                },
        } => {
            let psi = BuiltinField::by_name(field, g.n).map_err(lib)?;
            if !(0.0 <= *r_min && r_min < r_max) {
                return Err(config("need 0 <= r_min < r_max"));
            }
            let mut rng = seeded(g.seed);
            let pts: Vec<QuatVec> = sample_shell(1, *r_min, *r_max, *samples, &mut rng)
                .into_iter()
                .map(|q| {
                    let mut v = fueter::sampling::random_quat_vec(g.n, 1.0, &mut rng);
                    v.0[0] = q.0[0];
                    v
                })
                .collect();
            let fd = FdConfig {
                step: *step,
                ..Default::default()
            };
            let rep = is_monogenic(&psi, &pts, *tol, &fd).map_err(lib)?;
            let failures = if rep.verdict {
                vec![]
            } else {
                vec![format!("monogenicity of {field}: residual {:e} exceeds {tol:e}", rep.max_residual)]
            };
            Ok(Report::check("cf check", failures, serde_json::to_value(rep)?))
        }
        Command::Hull { cmd } => {
            let (name, a) = match cmd {
                HullCmd::Contains(a) => ("hull contains", a),
                HullCmd::Distance(a) => ("hull distance", a),
                HullCmd::Witness(a) => ("hull witness", a),
            };
            let u = parse_domain(&a.domain, g.n)?;
            let sigma = parse_sigma(&a.sigma, g.n)?;
            let sampler = ImUnitSphereSampler::new(a.sphere_nodes).map_err(lib)?;
            let result = match cmd {
                HullCmd::Contains(_) => {
                    let q = hull_contains(&sigma, &u, &sampler).map_err(lib)?;
                    json!({
                        "verdict": q.verdict,
                        "membership": q.membership,
                        "inf_value": q.inf_value,
                        "margin": q.margin,
                        "band": q.band,
                        "argmin_q": q.argmin_q,
                    })
                }
                HullCmd::Distance(_) => json!({ "distance": hull_distance(&sigma, &u, &sampler).map_err(lib)? }),
                HullCmd::Witness(_) => serde_json::to_value(hull_witness(&sigma, &u, &sampler).map_err(lib)?)?,
            };
            Ok(Report::query(name, result))
        }
        Command::Twistor { cmd } => match cmd {
            TwistorCmd::Sweep { sigma, n_theta, n_phi } => {
                let sigma = parse_sigma(sigma, g.n)?;
                let m = sigma.to_matrix();
                let mut rows = Vec::new();
                let mut csv = String::from("pi0_re,pi0_im,pi1_re,pi1_im");
                for i in 0..4 * g.n {
                    csv.push_str(&format!(",x{i}"));
                }
                csv.push('\n');
                for pi in hopf_grid(*n_theta, *n_phi) {
                    let base = sweep_point_via_line(&m, pi).map_err(lib)?;
                    let tp = line_embed(&m, pi).map_err(lib)?;
                    csv.push_str(&format!("{},{},{},{}", pi.0.re, pi.0.im, pi.1.re, pi.1.im));
                    for c in base.coords() {
                        csv.push_str(&format!(",{c}"));
                    }
                    csv.push('\n');
                    rows.push(json!({ "pi": [pi.0, pi.1], "twistor": tp.coords, "base": base.coords() }));
                }
                let mut r = Report::query("twistor sweep", json!({ "points": rows }));
                if g.format == Format::Csv {
                    r.plain = Some(csv);
                }
                Ok(r)
            }
            TwistorCmd::HullLines {
                domain,
                sigma,
                n_theta,
                n_phi,
            } => {
                let u = parse_domain(domain, g.n)?;
                let sigma = parse_sigma(sigma, g.n)?;
                let grid = FiberGrid::hopf(*n_theta, *n_phi).map_err(lib)?;
                let q = hull_contains_via_lines(&sigma, &u, &grid).map_err(lib)?;
                Ok(Report::query("twistor hull-lines", serde_json::to_value(q)?))
            }
        },
        Command::Cp1 { cmd } => match cmd {
            Cp1Cmd::Dim { k } => {
                let d = h1_dimension(*k);
                let mut r = Report::query("cp1 dim", json!({ "k": k, "dimension": d }));
                r.plain = Some(format!("{d}\n"));
                Ok(r)
            }
            Cp1Cmd::Coeffs { a0, a1, bump, quad } => {
                let (a0, a1) = (parse_complex(a0)?, parse_complex(a1)?);
                let cfg: QuadratureConfig = match quad {
                    Some(q) => serde_json::from_str(q).map_err(|e| config(format!("quadrature JSON: {e}")))?,
                    None => QuadratureConfig::default(),
                };
                let mut w = harmonic_representative(a0, a1);
                if let Some(b) = bump {
                    let b: BumpFixture = serde_json::from_str(b).map_err(|e| config(format!("bump JSON: {e}")))?;
                    w = w.combine(C64::new(1.0, 0.0), &b.exact_form(-3), C64::new(1.0, 0.0)).map_err(lib)?;
                }
                let c = cohomology_coefficients(&w, &cfg).map_err(lib)?;
                let err = (c[0] - a0).norm().max((c[1] - a1).norm());
                let failures = if err < 1e-6 {
                    vec![]
                } else {
                    vec![format!("coefficients differ from (a0, a1) by {err:e}")]
                };
                Ok(Report::check(
                    "cp1 coeffs",
                    failures,
                    json!({ "coefficients": c, "expected": [a0, a1], "max_error": err }),
                ))
            }
            Cp1Cmd::Harmonic { a0, a1 } => {
                let w = harmonic_representative(parse_complex(a0)?, parse_complex(a1)?);
                form_checks("cp1 harmonic", &w, json!({}))
            }
        },
        Command::Penrose { cmd } => penrose(cmd, g),
        Command::Verify { cmd } => {
            let report = match cmd {
                VerifyCmd::All => verify_all(g.n, g.seed),
                VerifyCmd::One { id } => {
                    if !(1..=8).contains(id) {
                        return Err(config(format!("criteria are numbered 1 to 8, got {id}")));
                    }
                    let c = run_criterion(*id, g.n, g.seed);
                    fueter::verify::VerifyReport {
                        n: g.n,
                        seed: g.seed,
                        passed: c.passed,
                        criteria: vec![c],
                    }
                }
            };
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            let failures = report
                .criteria
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("criterion {}: {}", c.id, c.name))
                .collect();
            Ok(Report::check("verify", failures, serde_json::to_value(report)?))
        }
    }
}

fn form_checks(command: &str, w: &Form01, extra: Value) -> anyhow::Result<Report> {
    let clutch = validate_form(w, &annulus_sample());
    let mut failures = Vec::new();
    if !clutch.passes(1e-12) {
        failures.push(format!("clutching violated by {:e}", clutch.max_violation));
    }
    let mut decay = Vec::new();
    for l in 0..=(-w.k + 1) {
        let m = -w.k + 1 - l;
        let d = decay_check(DecayTarget::Form(w), l, m).map_err(lib)?;
        if !d.passed {
            failures.push(format!("decay of z^{l} zbar^{m} h0"));
        }
        decay.push(json!({ "l": l, "m": m, "report": d }));
    }
    let mut result = json!({ "k": w.k, "clutching": clutch, "decay": decay });
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Ok(Report::check(command, failures, result))
}

fn penrose(cmd: &PenroseCmd, g: &Global) -> anyhow::Result<Report> {
    let cfg = PenroseConfig::default();
    let tolerances = json!({
        "roundtrip": C6_TOL,
        "diagram": C7_TOL,
        "complex": C8_TOL,
        "closedness": cfg.closed_tol,
        "quadrature": cfg.quad.tol,
    });
    match cmd {
        PenroseCmd::Roundtrip { field, points } => {
            let psi = BuiltinField::by_name(field, g.n).map_err(lib)?;
            let mut per_point = Vec::new();
            let mut worst: f64 = 0.0;
            let mut failures = Vec::new();
            for x in base_points(g.n, *points, g.seed) {
                match penrose_transform(&sharp(&psi), &x, &cfg) {
                    Ok(v) => {
                        let err = v.psi.max_abs_diff(psi.pair(&x));
                        worst = worst.max(err);
                        per_point.push(json!({ "x": x.coords(), "transform": v.psi, "error": err, "closedness": v.closedness }));
                    }
                    Err(e) => {
                        failures.push(format!("at {:?}: {e}", x.coords()));
                        per_point.push(json!({ "x": x.coords(), "error": e.to_string() }));
                    }
                }
            }
            if worst >= C6_TOL {
                failures.insert(0, format!("round trip error {worst:e} exceeds {C6_TOL:e}"));
            }
            Ok(Report::check(
                "penrose roundtrip",
                failures,
                json!({ "mode": "roundtrip", "n": g.n, "field": field, "tolerances": tolerances, "max_error": worst, "per_point": per_point }),
            ))
        }
        PenroseCmd::Forward { field, points } => {
            let psi = BuiltinField::by_name(field, g.n).map_err(lib)?;
            let mut per_point = Vec::new();
            let mut failures = Vec::new();
            let mut worst: f64 = 0.0;
            for x in base_points(g.n, *points, g.seed) {
                let r = form_checks("", &sharp_fibre(&psi, &x), json!({}))?;
                worst = worst.max(r.result["clutching"]["max_violation"].as_f64().unwrap_or(f64::INFINITY));
                failures.extend(r.failures.iter().map(|f| format!("at {:?}: {f}", x.coords())));
                per_point.push(json!({ "x": x.coords(), "checks": r.result }));
            }
            Ok(Report::check(
                "penrose forward",
                failures,
                json!({ "mode": "forward", "n": g.n, "field": field, "tolerances": tolerances, "max_error": worst, "per_point": per_point }),
            ))
        }
        PenroseCmd::Complex { field, sigma } => {
            let psi = BuiltinField::by_name(field, g.n).map_err(lib)?;
            let sigma = parse_sigma(sigma, g.n)?;
            let form = sharp_closed(&psi, cfg.jet_fd);
            let value = penrose_transform_complex(&form, &sigma, &ImUnitSphereSampler::default(), &cfg).map_err(lib)?;
            let mut failures = Vec::new();
            let (expected, err) = match extension_of(field) {
                Some(ext) => {
                    let e = BuiltinComplexField::by_name(ext, g.n).map_err(lib)?.eval(&sigma.to_matrix());
                    let err = value.max_abs_diff(e);
                    if err >= C8_TOL {
                        failures.push(format!("differs from {ext} by {err:e}"));
                    }
                    (Some(e), Some(err))
                }
                None => (None, None),
            };
            Ok(Report::check(
                "penrose complex",
                failures,
                json!({
                    "mode": "complex", "n": g.n, "field": field, "tolerances": tolerances,
                    "max_error": err,
                    "per_point": [{ "sigma": sigma, "transform": value, "expected": expected }],
                }),
            ))
        }
        PenroseCmd::Diagram { field, points } => {
            let psi = BuiltinField::by_name(field, g.n).map_err(lib)?;
            let cal = calibration().map_err(lib)?;
            let rep = diagram_check(&psi, &base_points(g.n, *points, g.seed), &cal, &cfg).map_err(lib)?;
            let failures = if rep.max_residual < C7_TOL {
                vec![]
            } else {
                vec![format!("diagram residual {:e} exceeds {C7_TOL:e}", rep.max_residual)]
            };
            Ok(Report::check(
                "penrose diagram",
                failures,
                json!({
                    "mode": "diagram", "n": g.n, "field": field, "tolerances": tolerances,
                    "max_error": rep.max_residual, "calibration": cal, "per_point": rep.per_point,
                }),
            ))
        }
    }
}

fn emit(cli: &Cli, r: &Report) -> anyhow::Result<()> {
    let g = &cli.global;
    let doc = json!({
        "command": r.command,
        "n": g.n,
        "seed": g.seed,
        "passed": r.passed,
        "failures": r.failures,
        "result": r.result,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match &r.plain {
        Some(p) => print!("{p}"),
        None => println!("{text}"),
    }
    if let Some(path) = &g.output {
        let body = match (&r.plain, g.format) {
            (Some(p), Format::Csv) => p.clone(),
            _ => text + "\n",
        };
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = run(&cli).and_then(|r| {
        emit(&cli, &r)?;
        if r.passed {
            Ok(())
        } else {
            bail!("check failed: {}", r.failures[0])
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

//! The `elliptica` command-line front end.
//!
//! [`run`] takes the argument vector and returns the rendered output with the
//! process exit code, so the whole interface is testable in-process.
//!
//! Exit codes: `0` every check passed, `1` a check failed (including a
//! denominator hitting the guard), `2` invalid input or an inapplicable
//! operation.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::arith::{
    classify_variety, fraction_data, sigma_group_generators, standard_divisor, VarietyKind,
};
use crate::error::{Error, Result};
use crate::relations::{
    build_relations, calibrate_characteristics, expected_relation_rank, graph_vanishing_residual,
    orbit_relation_residual, point_module_orbit, relation_rank, ybe_residual, DEFAULT_RANK_REL_TOL,
};
use crate::rings::{hilbert_B, hilbert_Q, kernel_profile};
use crate::slope::{
    evaluation_kernel_class, exact_sequence_bounds, h0_h1, pushforward_class, ratio_string,
    surjectivity_criterion, tensor, SheafClass,
};
use crate::theta::{
    heisenberg_residuals, quasiperiodicity_residuals, Characteristic, ThetaBasis, TorusParams,
    TorusPoint, DEFAULT_DENOM_GUARD, DEFAULT_TRUNC_TOL,
};

pub const SCHEMA: &str = "elliptica/1";
pub const DEFAULT_CONFIG: &str = "elliptica.cfg";
pub const DEFAULT_TAU: Complex64 = Complex64::new(0.1234, 0.0567);

const YBE_TOL: f64 = 1e-9;
const GRAPH_TOL: f64 = 1e-8;
const THETA_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "elliptica",
    version,
    about = "Checks and tables for the elliptic algebras Q_{n,k}(E, tau)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Lattice parameter, e.g. `0+1i`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Point of E defining the algebra, e.g. `0.1234+0.0567i`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Theta characteristic: `canonical` or `a,b`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub chars: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long = "tol-rank", global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long = "tol-denom", global = true)]
    pub tol_denom: Option<f64>,
    /// key=value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction data and the characteristic variety of n/k.
    Decompose { n: i64, k: i64 },
    /// Run a numerical check on Q_{n,k}.
    Verify(VerifyArgs),
    /// Hilbert functions of Q, B and the kernel of Q -> B.
    Hilbert { n: i64, k: i64, maxdeg: u64 },
    /// Slope calculus for the pushforward of n/k or for explicit classes.
    Slopes {
        n: Option<i64>,
        k: Option<i64>,
        /// A class given as `RANK DEG`; repeatable.
        #[arg(long = "class", num_args = 2, value_names = ["RANK", "DEG"], allow_hyphen_values = true)]
        class: Vec<i64>,
    },
    /// Evaluate the theta basis and its functional-equation residuals.
    Theta {
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Search for the theta characteristic and store it in the config file.
    Calibrate { n: usize },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub n: usize,
    pub k: usize,
    pub which: Check,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    /// Include the relation matrix and singular values (relations check).
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Relations,
    Ybe,
    Graph,
    Orbit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharsSetting {
    Canonical,
    Fixed(Characteristic),
}

impl CharsSetting {
    fn resolve(self, n: usize) -> Characteristic {
        match self {
            CharsSetting::Canonical => Characteristic::canonical(n.max(1)),
            CharsSetting::Fixed(c) => c,
        }
    }

    fn describe(self) -> String {
        match self {
            CharsSetting::Canonical => "canonical".to_string(),
            CharsSetting::Fixed(c) => format!("{},{}", c.a, c.b),
        }
    }
}

/// Effective settings after merging defaults, the config file and flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub eta: Complex64,
    pub tau: Complex64,
    pub chars: CharsSetting,
    pub trunc_tol: f64,
    pub denom_guard: f64,
    pub rank_rel_tol: f64,
    pub seed: u64,
    pub json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            eta: Complex64::new(0.0, 1.0),
            tau: DEFAULT_TAU,
            chars: CharsSetting::Canonical,
            trunc_tol: DEFAULT_TRUNC_TOL,
            denom_guard: DEFAULT_DENOM_GUARD,
            rank_rel_tol: DEFAULT_RANK_REL_TOL,
            seed: 0,
            json: false,
        }
    }
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let float = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::invalid(format!("{key}: cannot parse '{v}' as a number")))
        };
        match key {
            "eta" => self.eta = parse_complex(value)?,
            "tau" => self.tau = parse_complex(value)?,
            "chars" => self.chars = parse_chars(value)?,
            "trunc_tol" => self.trunc_tol = float(value)?,
            "denom_guard" => self.denom_guard = float(value)?,
            "rank_rel_tol" => self.rank_rel_tol = float(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::invalid(format!("seed: cannot parse '{value}'")))?
            }
            "output" => {
                self.json = match value {
                    "json" => true,
                    "human" => false,
                    other => {
                        return Err(Error::invalid(format!(
                            "output must be json or human, got '{other}'"
                        )))
                    }
                }
            }
            other => return Err(Error::invalid(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if !(self.rank_rel_tol > 0.0 && self.rank_rel_tol.is_finite()) {
            return Err(Error::invalid("rank_rel_tol must be positive"));
        }
        self.params().map(|_| ())
    }

    pub fn params(&self) -> Result<TorusParams> {
        TorusParams::with_tolerances(self.eta, self.trunc_tol, self.denom_guard)
    }

    fn basis(&self, n: usize) -> Result<ThetaBasis> {
        ThetaBasis::new(n, self.chars.resolve(n), self.params()?)
    }
}

/// Parse `a+bi`, `a-bi`, `bi`, `i`, `-i` or a plain real.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::invalid(format!("cannot parse '{s}' as a complex number a+bi"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_chars(s: &str) -> Result<CharsSetting> {
    let t = s.trim();
    if t == "canonical" {
        return Ok(CharsSetting::Canonical);
    }
    let bad = || Error::invalid(format!("chars must be 'canonical' or 'a,b', got '{s}'"));
    let (a, b) = t.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok(CharsSetting::Fixed(Characteristic::new(a, b)))
}

/// Read `key=value` lines; `#` starts a comment.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::invalid(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Replace or append `key=value` in the config file, keeping other lines.
pub fn write_config_key(path: &Path, key: &str, value: &str) -> Result<()> {
    let existing = fs::read_to_string(path).unwrap_or_default();
    let mut lines: Vec<String> = Vec::new();
    let mut replaced = false;
    for line in existing.lines() {
        let is_key = line.split_once('=').is_some_and(|(k, _)| k.trim() == key);
        if is_key {
            if !replaced {
                lines.push(format!("{key}={value}"));
                replaced = true;
            }
        } else {
            lines.push(line.to_string());
        }
    }
    if !replaced {
        lines.push(format!("{key}={value}"));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| Error::invalid(format!("cannot write config {}: {e}", path.display())))
}

fn config_path(global: &GlobalArgs) -> (PathBuf, bool) {
    match &global.config {
        Some(p) => (p.clone(), true),
        None => (PathBuf::from(DEFAULT_CONFIG), false),
    }
}

/// Defaults, then the config file, then command-line flags.
pub fn resolve_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let (path, explicit) = config_path(global);
    if explicit || path.exists() {
        for (k, v) in read_config(&path)? {
            cfg.set(&k, &v)?;
        }
    }
    if let Some(s) = &global.eta {
        cfg.eta = parse_complex(s)?;
    }
    if let Some(s) = &global.tau {
        cfg.tau = parse_complex(s)?;
    }
    if let Some(s) = &global.chars {
        cfg.chars = parse_chars(s)?;
    }
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    if let Some(t) = global.tol_rank {
        cfg.rank_rel_tol = t;
    }
    if let Some(t) = global.tol_denom {
        cfg.denom_guard = t;
    }
    cfg.json |= global.json;
    cfg.validate()?;
    Ok(cfg)
}

/// A finished command: ordered fields plus whether its checks passed.
struct Report {
    command: &'static str,
    fields: Vec<(String, Value)>,
    pass: bool,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            fields: Vec::new(),
            pass: true,
        }
    }

    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_string(), value.into()));
    }

    fn render(&self, json_out: bool) -> String {
        if json_out {
            let mut map = Map::new();
            map.insert("schema".into(), SCHEMA.into());
            map.insert("command".into(), self.command.into());
            for (k, v) in &self.fields {
                map.insert(k.clone(), v.clone());
            }
            map.insert("pass".into(), self.pass.into());
            let mut s =
                serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for (k, v) in &self.fields {
                s.push_str(&format!("{k}: {}\n", human(v)));
            }
            s.push_str(&format!("pass: {}\n", self.pass));
            s
        }
    }
}

fn human(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(human).collect::<Vec<_>>().join(", ")
        ),
        Value::Object(map) => {
            let parts: Vec<String> = map
                .iter()
                .map(|(k, v)| format!("{k}={}", human(v)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParams(_)
        | Error::NotApplicable(_)
        | Error::IndexOutOfRange { .. }
        | Error::DegreeZero => 2,
        Error::NonConvergent { .. }
        | Error::DenominatorNearZero { .. }
        | Error::RankAmbiguous { .. }
        | Error::CalibrationFailed { .. }
        | Error::Internal(_) => 1,
    }
}

fn render_error(err: &Error, json_out: bool) -> String {
    if json_out {
        let mut map = Map::new();
        map.insert("schema".into(), SCHEMA.into());
        map.insert("error".into(), err.to_string().into());
        if let Error::DenominatorNearZero { index, .. } = err {
            map.insert("index".into(), (*index).into());
        }
        map.insert("pass".into(), false.into());
        let mut s =
            serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
        s.push('\n');
        s
    } else {
        format!("error: {err}\n")
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn class_json(c: &SheafClass) -> Value {
    json!({ "rank": c.rank().to_string(), "deg": c.deg().to_string(), "slope": ratio_string(&c.slope()) })
}

fn usize_of(x: i64, name: &str) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::invalid(format!("{name} must be non-negative")))
}

fn cmd_decompose(n: i64, k: i64) -> Result<Report> {
    let fd = fraction_data(n, k)?;
    let kind = classify_variety(n, k)?;
    let mut r = Report::new("decompose");
    r.put("n", n);
    r.put("k", k);
    r.put("cf", fd.cf.clone());
    r.put("g", fd.g);
    r.put("kseq", fd.kseq.clone());
    r.put("lseq", fd.lseq.clone());
    r.put("kprime", fd.kprime);
    r.put("sigma_coeffs", fd.sigma_coeffs.clone());
    r.put("variety", kind.label());
    r.put("sigma_generators", sigma_group_generators(n, k)?);
    r.put("divisor_degrees", standard_divisor(n, k)?.point_degrees);
    Ok(r)
}

fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<Report> {
    let VerifyArgs {
        n,
        k,
        which,
        samples,
        steps,
        matrix,
        ..
    } = *args;
    let basis = cfg.basis(n)?;
    let mut r = Report::new("verify");
    r.put("n", n);
    r.put("k", k);
    r.put("check", format!("{which:?}").to_lowercase());
    r.put("tau", format_complex(cfg.tau));
    r.put("chars", cfg.chars.describe());
    match which {
        Check::Relations => {
            let sys = build_relations(n, k, &basis, cfg.tau)?;
            let report = relation_rank(&sys, cfg.rank_rel_tol)?;
            let expected = expected_relation_rank(n);
            r.put("rank", report.rank);
            r.put("expected_rank", expected);
            r.put(
                "gap",
                if report.gap.is_finite() {
                    json!(report.gap)
                } else {
                    json!("inf")
                },
            );
            r.put("tolerance", cfg.rank_rel_tol);
            if matrix {
                r.put("matrix", sys.to_json());
            }
            r.pass = report.rank == expected;
        }
        Check::Ybe => {
            let u = parse_complex(args.u.as_deref().unwrap_or("0.11+0.07i"))?;
            let v = parse_complex(args.v.as_deref().unwrap_or("0.05+0.13i"))?;
            let residual = ybe_residual(n, k, &basis, cfg.tau, u, v)?;
            r.put("u", format_complex(u));
            r.put("v", format_complex(v));
            r.put("residual", residual);
            if k == 1 {
                r.put("tolerance", YBE_TOL);
                r.pass = residual < YBE_TOL;
            } else {
                r.put("note", "no assertion for k>=2");
            }
        }
        Check::Graph => {
            let residual = graph_vanishing_residual(n, k, &basis, cfg.tau, samples, cfg.seed)?;
            r.put("samples", samples);
            r.put("seed", cfg.seed);
            r.put("residual", residual);
            r.put("tolerance", GRAPH_TOL);
            r.pass = residual < GRAPH_TOL;
        }
        Check::Orbit => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let p = TorusPoint::new(rng.random(), rng.random());
            let orbit = point_module_orbit(n, k, &basis, cfg.tau, p, steps)?;
            let residual = orbit_relation_residual(n, &basis, cfg.tau, &orbit)?;
            let points: Vec<Value> = orbit
                .iter()
                .map(|o| json!([o.point.u(), o.point.v()]))
                .collect();
            r.put("points", points);
            r.put("residual", residual);
            r.put("tolerance", GRAPH_TOL);
            r.pass = residual < GRAPH_TOL && orbit.iter().all(|o| o.norm() > 0.0);
        }
    }
    Ok(r)
}

fn cmd_hilbert(n: i64, k: i64, maxdeg: u64) -> Result<Report> {
    let kind = classify_variety(n, k)?;
    let nu = usize_of(n, "n")? as u64;
    let q: Vec<u64> = (0..=maxdeg)
        .map(|j| hilbert_Q(nu, j))
        .collect::<Result<_>>()?;
    let b: Value = match kind {
        VarietyKind::ProjectiveSpace { .. } => Value::Null,
        _ => json!((0..=maxdeg)
            .map(|j| hilbert_B(n, k, j))
            .collect::<Result<Vec<_>>>()?),
    };
    let mut r = Report::new("hilbert");
    r.put("n", n);
    r.put("k", k);
    r.put("variety", kind.label());
    r.put("degrees", (0..=maxdeg).collect::<Vec<_>>());
    r.put("q", q);
    r.put("b", b);
    r.put("kernel_degrees", (1..=maxdeg).collect::<Vec<_>>());
    r.put("kernel", kernel_profile(n, k, maxdeg)?);
    Ok(r)
}

fn cmd_slopes(n: Option<i64>, k: Option<i64>, raw: &[i64]) -> Result<Report> {
    let mut r = Report::new("slopes");
    match (n, k) {
        (Some(n), Some(k)) => {
            let push = pushforward_class(n, k)?;
            r.put("n", n);
            r.put("k", k);
            r.put("pushforward", class_json(&push));
            let (h0, h1) = h0_h1(&push)?;
            r.put("pushforward_h0_h1", json!([h0.to_string(), h1.to_string()]));
            r.put("kernel", class_json(&evaluation_kernel_class(&push)?));
            r.put("criterion_self", surjectivity_criterion(&push, &push)?);
        }
        (None, None) => {}
        _ => return Err(Error::invalid("slopes takes both N and K or neither")),
    }
    let classes: Vec<SheafClass> = raw
        .chunks(2)
        .map(|c| SheafClass::new(c[0], c[1]))
        .collect::<Result<_>>()?;
    if n.is_none() && classes.is_empty() {
        return Err(Error::invalid("slopes needs N K or at least one --class"));
    }
    if !classes.is_empty() {
        r.put(
            "classes",
            classes.iter().map(class_json).collect::<Vec<_>>(),
        );
    }
    if let [a, b] = classes.as_slice() {
        r.put("tensor", class_json(&tensor(a, b)));
        r.put("criterion", surjectivity_criterion(a, b)?);
        let (v, lo, hi) = exact_sequence_bounds(a, b)?;
        r.put("extension", class_json(&v));
        r.put("bounds", json!([ratio_string(&lo), ratio_string(&hi)]));
    } else if let [a] = classes.as_slice() {
        if let Ok((h0, h1)) = h0_h1(a) {
            r.put("h0_h1", json!([h0.to_string(), h1.to_string()]));
        }
        if let Ok(kc) = evaluation_kernel_class(a) {
            r.put("kernel", class_json(&kc));
        }
    }
    Ok(r)
}

fn cmd_theta(cfg: &RunConfig, n: usize, z: Option<&str>) -> Result<Report> {
    let basis = cfg.basis(n)?;
    let z = match z {
        Some(s) => parse_complex(s)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            TorusPoint::new(rng.random(), rng.random()).to_complex(basis.params())
        }
    };
    let values = basis.eval_all(z)?;
    let mut worst = 0.0f64;
    for alpha in 0..n as i64 {
        worst = worst
            .max(quasiperiodicity_residuals(&basis, alpha, z)?.max_relative())
            .max(heisenberg_residuals(&basis, alpha, z)?.max_relative());
    }
    let mut r = Report::new("theta");
    r.put("n", n);
    r.put("z", format_complex(z));
    r.put("eta", format_complex(cfg.eta));
    r.put("chars", cfg.chars.describe());
    r.put(
        "values",
        values.into_iter().map(complex_json).collect::<Vec<_>>(),
    );
    r.put("max_relative_residual", worst);
    r.put("tolerance", THETA_TOL);
    r.pass = worst < THETA_TOL;
    Ok(r)
}

fn cmd_calibrate(cfg: &RunConfig, global: &GlobalArgs, n: usize) -> Result<Report> {
    let params = cfg.params()?;
    let cal = calibrate_characteristics(n, &params, cfg.tau)?;
    let value = format!("{},{}", cal.chars.a, cal.chars.b);
    let (path, _) = config_path(global);
    write_config_key(&path, "chars", &value)?;
    let mut r = Report::new("calibrate");
    r.put("n", n);
    r.put("tau", format_complex(cfg.tau));
    r.put("chars", value);
    r.put("residual", cal.residual);
    let table: Vec<Value> = cal
        .table
        .iter()
        .map(|(c, res)| json!({ "a": c.a, "b": c.b, "residual": res.map_or(Value::Null, Value::from) }))
        .collect();
    r.put("candidates", table);
    r.put("config", path.display().to_string());
    Ok(r)
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Report> {
    match &cli.command {
        Command::Decompose { n, k } => cmd_decompose(*n, *k),
        Command::Verify(args) => cmd_verify(cfg, args),
        Command::Hilbert { n, k, maxdeg } => cmd_hilbert(*n, *k, *maxdeg),
        Command::Slopes { n, k, class } => cmd_slopes(*n, *k, class),
        Command::Theta { n, z } => cmd_theta(cfg, *n, z.as_deref()),
        Command::Calibrate { n } => cmd_calibrate(cfg, &cli.global, *n),
    }
}

/// Run with a full argument vector (including the program name).
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    let cfg = match resolve_config(&cli.global) {
        Ok(cfg) => cfg,
        Err(e) => return (render_error(&e, cli.global.json), exit_code(&e)),
    };
    match dispatch(&cli, &cfg) {
        Ok(report) => (report.render(cfg.json), if report.pass { 0 } else { 1 }),
        Err(e) => (render_error(&e, cfg.json), exit_code(&e)),
    }
}

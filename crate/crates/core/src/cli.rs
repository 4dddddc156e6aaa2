//! Command-line front end: config loading, flag merging, subcommand dispatch,
//! and machine-readable report/CSV emission.
//!
//! Exit codes: 0 for certified-convex / related-true / successful runs, 1 for
//! a witnessed violation, 2 for inconclusive or non-converged outcomes, 64
//! for configuration errors. The env var `GAUGE_CERTIFY_LOG` (quiet, info,
//! debug) controls stderr logging; reports go to stdout unless `--out` is
//! given. Identical config and seed produce byte-identical output.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::barrier::{Barrier, BarrierWithLinear};
use crate::bodies::{ConvexBody, PNorm};
use crate::certify::{self, CertifyOptions, Verdict};
use crate::error::{Error, Result};
use crate::expr;
use crate::grid::{DomainBox, Grid};
use crate::registry::{self, RegistryParams};
use crate::subdiff::{self, SampleOptions};
use crate::variational::{self, TraceConfig};
use crate::vecmath::{norm2, scale as vscale};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CONFIG: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(
    name = "gauge-certify",
    version,
    about = "Gauge/barrier numerics and a monotonicity-based convexity certifier"
)]
pub struct Cli {
    /// JSON config file; command-line flags override its values.
    #[arg(short, long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify convexity from the sampled subdifferential graph.
    Certify(CommonArgs),
    /// Test a probe pair (x0, x0star) for monotone relation to the graph.
    Minty(CommonArgs),
    /// Sweep the barrier along a ray and emit (x, mu, k) rows as CSV.
    Barrier(CommonArgs),
    /// Run the constructive Ekeland principle from a start point.
    Ekeland(CommonArgs),
    /// Run the instrumented minimization trace.
    Trace(CommonArgs),
    /// Dump the sampled subdifferential graph as CSV.
    Graph(CommonArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Registry function name (see docs/functions.md).
    #[arg(long)]
    pub function: Option<String>,
    /// Custom expression, e.g. "x^2 - abs(x)".
    #[arg(long)]
    pub expr: Option<String>,
    /// Space dimension (1-3 for grid pipelines).
    #[arg(long)]
    pub dimension: Option<usize>,
    /// Domain box "lo,hi" or "lo1,hi1;lo2,hi2;..." per axis.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Grid points per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Proximal λ schedule, comma separated; first entry doubles as λ for
    /// `ekeland`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Tilt directions per axis.
    #[arg(long)]
    pub tilts: Option<usize>,
    /// Main tolerance (envelope gap for certify, relation slack for minty).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Monotonicity tolerance override.
    #[arg(long)]
    pub mono_tol: Option<f64>,
    /// Body spec: JSON object or shorthand "ball:R[:P]",
    /// "tube:P:Q:DELTA", "polytope:a11,a12;a21,a22".
    #[arg(long)]
    pub body: Option<String>,
    /// Probe/start/anchor point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Probe covector / linear tilt, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0star: Option<String>,
    /// Ray direction for the barrier sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub ray: Option<String>,
    /// Number of ray steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Barrier scale a > 0.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Ekeland ε.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Trace step count.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Draw this many random test points (seeded) instead of the grid.
    #[arg(long = "test-points")]
    pub test_points: Option<usize>,
    /// Write the main report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Side CSV path (trace).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// RNG seed for randomized probes/test points.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Flat JSON config schema; flags override file values field by field.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub function: Option<String>,
    pub expr: Option<String>,
    pub dimension: Option<usize>,
    /// Per-axis [lo, hi] pairs.
    pub domain: Option<Vec<[f64; 2]>>,
    pub resolution: Option<usize>,
    pub lambda: Option<Vec<f64>>,
    pub tilts: Option<usize>,
    pub tol: Option<f64>,
    pub mono_tol: Option<f64>,
    /// Body spec: object ({"type": ...}) or shorthand string.
    pub body: Option<serde_json::Value>,
    pub x0: Option<Vec<f64>>,
    pub x0star: Option<Vec<f64>>,
    pub ray: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub scale: Option<f64>,
    pub eps: Option<f64>,
    pub nmax: Option<usize>,
    pub test_points: Option<usize>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub seed: Option<u64>,
    pub max_affine_pieces: Option<Vec<(Vec<f64>, f64)>>,
    pub indicator_lo: Option<Vec<f64>>,
    pub indicator_hi: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &PathBuf) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad config {}: {e}", path.display())))
    }

    fn merge_args(&mut self, a: &CommonArgs) -> Result<()> {
        if let Some(v) = &a.function {
            self.function = Some(v.clone());
        }
        if let Some(v) = &a.expr {
            self.expr = Some(v.clone());
        }
        if let Some(v) = a.dimension {
            self.dimension = Some(v);
        }
        if let Some(v) = &a.domain {
            self.domain = Some(parse_domain(v)?);
        }
        if let Some(v) = a.resolution {
            self.resolution = Some(v);
        }
        if let Some(v) = &a.lambda {
            self.lambda = Some(parse_floats(v, "lambda")?);
        }
        if let Some(v) = a.tilts {
            self.tilts = Some(v);
        }
        if let Some(v) = a.tol {
            self.tol = Some(v);
        }
        if let Some(v) = a.mono_tol {
            self.mono_tol = Some(v);
        }
        if let Some(v) = &a.body {
            self.body = Some(serde_json::Value::String(v.clone()));
        }
        if let Some(v) = &a.x0 {
            self.x0 = Some(parse_floats(v, "x0")?);
        }
        if let Some(v) = &a.x0star {
            self.x0star = Some(parse_floats(v, "x0star")?);
        }
        if let Some(v) = &a.ray {
            self.ray = Some(parse_floats(v, "ray")?);
        }
        if let Some(v) = a.steps {
            self.steps = Some(v);
        }
        if let Some(v) = a.scale {
            self.scale = Some(v);
        }
        if let Some(v) = a.eps {
            self.eps = Some(v);
        }
        if let Some(v) = a.nmax {
            self.nmax = Some(v);
        }
        if let Some(v) = a.test_points {
            self.test_points = Some(v);
        }
        if let Some(v) = &a.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = &a.csv {
            self.csv = Some(v.clone());
        }
        if let Some(v) = a.seed {
            self.seed = Some(v);
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if let Some(d) = self.dimension {
            if !(1..=3).contains(&d) {
                return Err(Error::InvalidInput(format!(
                    "dimension must be 1, 2, or 3 for grid modes, got {d}"
                )));
            }
        }
        if let Some(r) = self.resolution {
            if r < 2 {
                return Err(Error::InvalidInput("resolution must be >= 2 per axis".into()));
            }
        }
        for (name, v) in [("tol", self.tol), ("mono_tol", self.mono_tol), ("eps", self.eps)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let Some(s) = self.scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidInput(format!("scale must be positive, got {s}")));
            }
        }
        Ok(())
    }

    fn dimension(&self) -> usize {
        self.dimension
            .or_else(|| self.domain.as_ref().map(|d| d.len()))
            .or_else(|| self.ray.as_ref().map(|r| r.len()))
            .or_else(|| self.x0.as_ref().map(|x| x.len()))
            .unwrap_or(1)
    }

    fn domain_box(&self) -> Result<DomainBox> {
        let dim = self.dimension();
        match &self.domain {
            Some(axes) => {
                let axes = if axes.len() == 1 && dim > 1 {
                    vec![axes[0]; dim]
                } else {
                    axes.clone()
                };
                if axes.len() != dim {
                    return Err(Error::InvalidInput(format!(
                        "domain has {} axes but dimension is {dim}",
                        axes.len()
                    )));
                }
                DomainBox::new(
                    axes.iter().map(|a| a[0]).collect(),
                    axes.iter().map(|a| a[1]).collect(),
                )
            }
            None => DomainBox::new(vec![-1.0; dim], vec![1.0; dim]),
        }
    }

    fn oracle(&self) -> Result<subdiff::FunctionOracle> {
        let domain = self.domain_box()?;
        match (&self.expr, &self.function) {
            (Some(e), _) => expr::expr_oracle(e, domain),
            (None, Some(name)) => {
                let params = RegistryParams {
                    max_affine_pieces: self.max_affine_pieces.clone(),
                    indicator_lo: self.indicator_lo.clone(),
                    indicator_hi: self.indicator_hi.clone(),
                };
                registry::by_name_with(name, domain, &params)
            }
            (None, None) => Err(Error::InvalidInput(
                "no function given: pass --function NAME or --expr EXPR".into(),
            )),
        }
    }

    fn body(&self) -> Result<Option<ConvexBody>> {
        let Some(value) = &self.body else { return Ok(None) };
        let dim = self.dimension();
        let body = match value {
            serde_json::Value::String(s) => parse_body_shorthand(s, dim)?,
            obj @ serde_json::Value::Object(_) => {
                let spec: BodySpec = serde_json::from_value(obj.clone())
                    .map_err(|e| Error::InvalidInput(format!("bad body spec: {e}")))?;
                spec.build(dim)?
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "body must be an object or shorthand string, got {other}"
                )))
            }
        };
        Ok(Some(body))
    }

    fn sample_options(&self) -> SampleOptions {
        let mut o = SampleOptions::default();
        if let Some(l) = &self.lambda {
            o.lambdas = l.clone();
        }
        if let Some(t) = self.tilts {
            o.tilt_count = t;
        }
        o
    }

    fn grid(&self) -> Result<Grid> {
        Grid::new(self.domain_box()?, self.resolution.unwrap_or(201))
    }
}

/// JSON body spec, tagged by "type".
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type")]
pub enum BodySpec {
    #[serde(rename = "polytope")]
    Polytope { normals: Vec<Vec<f64>> },
    #[serde(rename = "ball")]
    Ball {
        r: f64,
        #[serde(default)]
        p: Option<serde_json::Value>,
    },
    #[serde(rename = "tube")]
    Tube { p: Vec<f64>, q: Vec<f64>, delta: f64 },
}

impl BodySpec {
    pub fn build(&self, dim: usize) -> Result<ConvexBody> {
        match self {
            BodySpec::Polytope { normals } => ConvexBody::polytope(normals.clone()),
            BodySpec::Ball { r, p } => {
                let p = match p {
                    None => PNorm::Two,
                    Some(v) => parse_pnorm_value(v)?,
                };
                ConvexBody::ball(dim, *r, p)
            }
            BodySpec::Tube { p, q, delta } => ConvexBody::tube(p, q, *delta),
        }
    }
}

fn parse_pnorm_value(v: &serde_json::Value) -> Result<PNorm> {
    match v {
        serde_json::Value::Number(n) => {
            let x = n.as_f64();
            if x == Some(1.0) {
                Ok(PNorm::One)
            } else if x == Some(2.0) {
                Ok(PNorm::Two)
            } else {
                Err(Error::InvalidInput(format!("ball p must be 1, 2, or \"inf\", got {n}")))
            }
        }
        serde_json::Value::String(s) => parse_pnorm_str(s),
        other => Err(Error::InvalidInput(format!("bad ball p: {other}"))),
    }
}

fn parse_pnorm_str(s: &str) -> Result<PNorm> {
    match s {
        "1" => Ok(PNorm::One),
        "2" => Ok(PNorm::Two),
        "inf" | "infinity" => Ok(PNorm::Inf),
        other => Err(Error::InvalidInput(format!(
            "ball p must be 1, 2, or \"inf\", got \"{other}\""
        ))),
    }
}

/// Shorthand bodies: "ball:R[:P]", "tube:P:Q:DELTA" with comma-separated
/// points, "polytope:a11,a12;a21,a22;...".
pub fn parse_body_shorthand(s: &str, dim: usize) -> Result<ConvexBody> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["ball", r] => ConvexBody::ball(dim, parse_float(r, "ball radius")?, PNorm::Two),
        ["ball", r, p] => {
            ConvexBody::ball(dim, parse_float(r, "ball radius")?, parse_pnorm_str(p)?)
        }
        ["tube", p, q, delta] => ConvexBody::tube(
            &parse_floats(p, "tube p")?,
            &parse_floats(q, "tube q")?,
            parse_float(delta, "tube delta")?,
        ),
        ["polytope", rows] => {
            let normals = rows
                .split(';')
                .map(|row| parse_floats(row, "polytope normal"))
                .collect::<Result<Vec<_>>>()?;
            ConvexBody::polytope(normals)
        }
        _ => Err(Error::InvalidInput(format!(
            "bad body shorthand '{s}'; expected ball:R[:P], tube:P:Q:DELTA, or polytope:..."
        ))),
    }
}

fn parse_float(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad {what}: '{s}'")))
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| parse_float(tok, what))
        .collect()
}

fn parse_domain(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(';')
        .map(|axis| {
            let v = parse_floats(axis, "domain")?;
            if v.len() != 2 {
                return Err(Error::InvalidInput(format!(
                    "domain axis needs exactly lo,hi; got '{axis}'"
                )));
            }
            Ok([v[0], v[1]])
        })
        .collect()
}

/// Maps crate errors onto the CLI exit-code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::OutOfDomain(_) | Error::Precondition { .. } => EXIT_CONFIG,
        Error::EmptyGraph(_) => EXIT_INCONCLUSIVE,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

/// Initializes stderr logging from `GAUGE_CERTIFY_LOG` (quiet, info, debug).
pub fn init_logging() {
    let level = match std::env::var("GAUGE_CERTIFY_LOG").as_deref() {
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Off,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

pub fn run(cli: Cli) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let args = match &cli.command {
        Command::Certify(a)
        | Command::Minty(a)
        | Command::Barrier(a)
        | Command::Ekeland(a)
        | Command::Trace(a)
        | Command::Graph(a) => a,
    };
    cfg.merge_args(args)?;
    cfg.validate()?;
    let name = match &cli.command {
        Command::Certify(_) => "certify",
        Command::Minty(_) => "minty",
        Command::Barrier(_) => "barrier",
        Command::Ekeland(_) => "ekeland",
        Command::Trace(_) => "trace",
        Command::Graph(_) => "graph",
    };
    log::info!("dispatching {name}");
    match &cli.command {
        Command::Certify(_) => cmd_certify(&cfg),
        Command::Minty(_) => cmd_minty(&cfg),
        Command::Barrier(_) => cmd_barrier(&cfg),
        Command::Ekeland(_) => cmd_ekeland(&cfg),
        Command::Trace(_) => cmd_trace(&cfg),
        Command::Graph(_) => cmd_graph(&cfg),
    }
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| {
            Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Error::Internal(format!("stdout write failed: {e}")))
        }
    }
}

fn emit_json(cfg: &RunConfig, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string(value)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit(cfg, text.as_bytes())
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        serde_json::Value::Null
    }
}

fn sample_json(s: &subdiff::GraphSample) -> serde_json::Value {
    json!({"x": s.x, "xstar": s.xstar, "fx": s.fx})
}

/// The pinned machine-readable shape of a certification report (see
/// docs/report.schema.json); shared by the CLI and the C ABI.
pub fn certification_report_json(rep: &certify::CertificationReport) -> serde_json::Value {
    let verdict = match rep.verdict {
        Verdict::CertifiedConvex => "certified-convex",
        Verdict::NonconvexWitnessed => "nonconvex-witnessed",
        Verdict::Inconclusive => "inconclusive",
    };
    let worst_pair = rep.monotonicity.worst_pair.as_ref().map(|(a, b)| {
        json!({
            "x1": a.x, "x1star": a.xstar, "fx1": a.fx,
            "x2": b.x, "x2star": b.xstar, "fx2": b.fx,
            "value": finite_or_null(rep.monotonicity.worst_value),
        })
    });
    json!({
        "verdict": verdict,
        "graph_size": rep.graph_size,
        "worst_pair": worst_pair,
        "envelope_gap": rep.envelope_gap.map(finite_or_null),
        "gap_witness": rep.gap_witness,
    })
}

fn cmd_certify(cfg: &RunConfig) -> Result<i32> {
    let f = cfg.oracle()?;
    let test_points = cfg.test_points.map(|n| {
        let seed = cfg.seed.unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = f.domain().clone();
        (0..n)
            .map(|_| {
                domain
                    .lo
                    .iter()
                    .zip(&domain.hi)
                    .map(|(l, h)| rng.gen_range(*l..*h))
                    .collect()
            })
            .collect::<Vec<Vec<f64>>>()
    });
    let opts = CertifyOptions {
        resolution: cfg.resolution.unwrap_or(201),
        sample: cfg.sample_options(),
        test_points,
        envelope_tol: cfg.tol,
        mono_tol: cfg.mono_tol,
    };
    let rep = certify::certify_convexity(&f, &opts)?;
    let out = certification_report_json(&rep);
    emit_json(cfg, &out)?;
    Ok(match rep.verdict {
        Verdict::CertifiedConvex => EXIT_OK,
        Verdict::NonconvexWitnessed => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_minty(cfg: &RunConfig) -> Result<i32> {
    let f = cfg.oracle()?;
    let x0 = cfg
        .x0
        .clone()
        .ok_or_else(|| Error::InvalidInput("minty needs --x0".into()))?;
    let x0star = cfg
        .x0star
        .clone()
        .ok_or_else(|| Error::InvalidInput("minty needs --x0star".into()))?;
    let grid = cfg.grid()?;
    let graph = subdiff::sample_graph(&f, &grid, &cfg.sample_options())?;
    let tol = cfg.tol.unwrap_or(1e-6);
    let rep = certify::minty_test(&graph, &x0, &x0star, tol)?;
    // Sampled graphs cannot decide x0 ∈ dom f when f(x0) = +∞ off-grid; the
    // flag reports what the oracle says at the probe itself.
    let in_domain = f.eval_checked(&x0)?.is_finite();
    let out = json!({
        "related": rep.related,
        "worst_value": finite_or_null(rep.worst_value),
        "witness": rep.witness.as_ref().map(sample_json),
        "x0_in_domain": in_domain,
    });
    emit_json(cfg, &out)?;
    Ok(if rep.related { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_barrier(cfg: &RunConfig) -> Result<i32> {
    let body = cfg
        .body()?
        .ok_or_else(|| Error::InvalidInput("barrier needs --body".into()))?;
    let dim = body.dim();
    let ray = cfg.ray.clone().unwrap_or_else(|| {
        let mut r = vec![0.0; dim];
        r[0] = 1.0;
        r
    });
    if ray.len() != dim || norm2(&ray) == 0.0 {
        return Err(Error::InvalidInput("ray must be a nonzero vector of body dimension".into()));
    }
    let steps = cfg.steps.unwrap_or(50);
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be >= 1".into()));
    }
    let bar = Barrier::new(body.clone(), cfg.scale.unwrap_or(1.0))?;
    let mu_ray = body.gauge(&ray)?.value;
    if mu_ray <= 0.0 {
        return Err(Error::Internal("ray direction has zero gauge".into()));
    }

    // Sample gauge values t = i/(steps+1), staying strictly inside the body.
    let mut csv = String::new();
    for a in 0..dim {
        csv.push_str(&format!("x{a},"));
    }
    csv.push_str("mu,k\n");
    for i in 0..=steps {
        let t = (i as f64) / ((steps + 1) as f64);
        let x = vscale(&ray, t / mu_ray);
        let mu = body.gauge(&x)?.value;
        let k = bar.eval(&x)?;
        for v in &x {
            csv.push_str(&format!("{v},"));
        }
        csv.push_str(&format!("{mu},{k}\n"));
    }
    emit(cfg, csv.as_bytes())?;
    Ok(EXIT_OK)
}

fn default_covering_body(domain: &DomainBox) -> Result<ConvexBody> {
    let extent = domain
        .lo
        .iter()
        .chain(domain.hi.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    ConvexBody::ball(domain.dim(), extent * 1.001, PNorm::Inf)
}

fn cmd_ekeland(cfg: &RunConfig) -> Result<i32> {
    let f = cfg.oracle()?;
    let grid = cfg.grid()?;
    let body = match cfg.body()? {
        Some(b) => b,
        None => default_covering_body(f.domain())?,
    };
    let start = cfg
        .x0
        .clone()
        .ok_or_else(|| Error::InvalidInput("ekeland needs --x0".into()))?;
    let eps = cfg.eps.unwrap_or(0.25);
    let lambda = cfg
        .lambda
        .as_ref()
        .and_then(|l| l.first().copied())
        .unwrap_or(1.0);
    let res = variational::ekeland(&f, &body, &grid, &start, eps, lambda)?;
    let out = serde_json::to_value(&res)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    emit_json(cfg, &out)?;
    Ok(EXIT_OK)
}

fn cmd_trace(cfg: &RunConfig) -> Result<i32> {
    let f = cfg.oracle()?;
    let body = cfg
        .body()?
        .ok_or_else(|| Error::InvalidInput("trace needs --body".into()))?;
    let anchor = cfg.x0.clone().unwrap_or_else(|| vec![0.0; f.dim()]);
    let linear = cfg.x0star.clone().unwrap_or_else(|| vec![0.0; f.dim()]);
    let bar = Barrier::new(body.clone(), cfg.scale.unwrap_or(1.0))?;
    let g = BarrierWithLinear::new(bar, linear)?;
    let tcfg = TraceConfig {
        n_max: cfg.nmax.unwrap_or(12),
        base_resolution: cfg.resolution.unwrap_or(101),
        ..Default::default()
    };
    let rec = variational::minimization_trace(&f, &body, &g, &anchor, &tcfg)?;

    if let Some(path) = &cfg.csv {
        let mut csv = String::new();
        let dim = f.dim();
        csv.push_str("n,eps,");
        for label in ["x", "xstar", "y", "ystar"] {
            for a in 0..dim {
                csv.push_str(&format!("{label}{a},"));
            }
        }
        csv.push_str("gap_xy,value,pairing,grid_inf,grid_points,slack,value_ok,pairing_ok\n");
        for s in &rec.steps {
            csv.push_str(&format!("{},{},", s.n, s.eps));
            for vecs in [&s.x, &s.xstar, &s.y, &s.ystar] {
                for v in vecs.iter() {
                    csv.push_str(&format!("{v},"));
                }
            }
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                s.gap_xy,
                s.value,
                s.pairing,
                s.grid_inf,
                s.grid_points,
                s.slack,
                s.value_ok,
                s.pairing_ok
            ));
        }
        std::fs::write(path, csv.as_bytes()).map_err(|e| {
            Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
        })?;
    }

    let out = serde_json::to_value(&rec)
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    emit_json(cfg, &out)?;
    Ok(if rec.converged { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

fn cmd_graph(cfg: &RunConfig) -> Result<i32> {
    let f = cfg.oracle()?;
    let grid = cfg.grid()?;
    let graph = subdiff::sample_graph(&f, &grid, &cfg.sample_options())?;
    let dim = f.dim();
    let mut csv = String::new();
    for a in 0..dim {
        csv.push_str(&format!("x{a},"));
    }
    for a in 0..dim {
        csv.push_str(&format!("xstar{a},"));
    }
    csv.push_str("fx\n");
    for s in graph.samples() {
        for v in &s.x {
            csv.push_str(&format!("{v},"));
        }
        for v in &s.xstar {
            csv.push_str(&format!("{v},"));
        }
        csv.push_str(&format!("{}\n", s.fx));
    }
    emit(cfg, csv.as_bytes())?;
    Ok(EXIT_OK)
}

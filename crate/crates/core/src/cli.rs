//! Command-line front end: `eval`, `check` and `grid`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value as Json};

use crate::domain::{c64, HermitianMatrix2, ModelParams, SJPoint, C64};
use crate::error::{Error, Result};
use crate::geometry::{balanced_metric, inverse_metric, kahler_potential, ricci_form, scalar_curvature, volume_density};
use crate::kernels::{berezin_kernel, cayley_angle, diastasis, normalized_kernel, sj_kernel};
use crate::repcoords::{rc_forward, rc_inverse, rc_jacobian_det, xy_chart, RCFrame, RCPoint};
use crate::suites::{self, CheckReport, Suite, SuiteConfig};

const POINT_HELP: &str = "\
Points are written \"z;w\" or \"z,w\".
With ';' each side is a complex literal: \"1.5\", \"-2i\", \"0.3-0.1i\" or \"re,im\".
With ',' each side is a real number or a literal such as \"1+2i\".
Examples: --p \"0,0.5\" is z = 0, w = 0.5; --p \"1,2;0.1,-0.3\" is z = 1+2i, w = 0.1−0.3i.";

#[derive(Debug, Parser)]
#[command(name = "sjdisk", version, about = "Geometry of the Siegel-Jacobi disk: evaluate, verify, tabulate")]
#[command(after_help = POINT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Weight k of the Siegel disk factor (k > 3/4)
    #[arg(long, global = true, default_value_t = 1.0)]
    pub k: f64,
    /// Weight μ of the Heisenberg factor (μ > 0)
    #[arg(long, global = true, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Monte Carlo samples (and round trips in rc-roundtrip)
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: u64,
    /// Worker threads; results do not depend on this
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Override absolute tolerances
    #[arg(long, global = true)]
    pub tol_abs: Option<f64>,
    /// Override relative tolerances
    #[arg(long, global = true)]
    pub tol_rel: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one quantity
    Eval {
        #[arg(value_enum)]
        quantity: Quantity,
        /// Point of evaluation (for rc-inverse: "w1;w2")
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Second point of two-point quantities
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// Base point of representative coordinates
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Run a verification suite; exit code 0 iff every check passes
    Check {
        /// metric-fd, invariance, curvature, rc-roundtrip, rc-oracle,
        /// chart-geometry, kernel-series, orthonormality, reproducing, all
        suite: String,
    },
    /// Tabulate a quantity on a rectangular grid
    Grid {
        #[arg(value_enum)]
        quantity: Quantity,
        /// Coordinate swept by the grid
        #[arg(long, value_enum, default_value_t = Axis::W)]
        over: Axis,
        /// Nodes per axis
        #[arg(long, default_value_t = 41)]
        n: usize,
        /// Half-width of the grid (default 1 for w, 3 for z)
        #[arg(long)]
        extent: Option<f64>,
        /// Point supplying the coordinate that is not swept
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    W,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Kernel,
    Kappa,
    Berezin,
    Diastasis,
    Cayley,
    Potential,
    Metric,
    InverseMetric,
    Density,
    Ricci,
    ScalarCurvature,
    Rc,
    RcInverse,
    Xy,
    DetJ,
}

impl Quantity {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }

    fn needs_q(self) -> bool {
        matches!(self, Quantity::Kernel | Quantity::Kappa | Quantity::Berezin | Quantity::Diastasis | Quantity::Cayley)
    }

    fn needs_base(self) -> bool {
        matches!(self, Quantity::Rc | Quantity::RcInverse | Quantity::Xy | Quantity::DetJ)
    }
}

/// Parse a complex literal: `1.5`, `-2i`, `i`, `0.3-1e-2i`, or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Usage(format!("malformed complex literal '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((re, im)) = t.split_once(',') {
        return Ok(c64(parse_real(re).ok_or_else(bad)?, parse_real(im).ok_or_else(bad)?));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(c64(parse_real(&t).ok_or_else(bad)?, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i]).ok_or_else(bad)?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_real(x).ok_or_else(bad)?,
    };
    Ok(c64(re, im))
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parse `"z;w"` or `"z,w"` into a raw coordinate pair.
pub fn parse_pair(s: &str) -> Result<[C64; 2]> {
    let (a, b) = s
        .split_once(';')
        .or_else(|| s.split_once(','))
        .ok_or_else(|| Error::Usage(format!("point '{s}' needs two coordinates, as \"z;w\" or \"z,w\"")))?;
    Ok([parse_complex(a)?, parse_complex(b)?])
}

pub fn parse_point(s: &str) -> Result<SJPoint> {
    let [z, w] = parse_pair(s)?;
    SJPoint::new(z, w)
}

/// Result of evaluating a quantity.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(C64),
    Pair([&'static str; 2], [C64; 2]),
    Hermitian(HermitianMatrix2),
}

impl Value {
    /// Flattened real columns, named after `stem`.
    pub fn columns(&self, stem: &str) -> Vec<(String, f64)> {
        match self {
            Value::Real(x) => vec![(stem.to_string(), *x)],
            Value::Complex(c) => vec![(format!("{stem}_re"), c.re), (format!("{stem}_im"), c.im)],
            Value::Pair(names, v) => names
                .iter()
                .zip(v)
                .flat_map(|(n, c)| [(format!("{n}_re"), c.re), (format!("{n}_im"), c.im)])
                .collect(),
            Value::Hermitian(h) => vec![
                (format!("{stem}_zz"), h.zz),
                (format!("{stem}_zw_re"), h.zw.re),
                (format!("{stem}_zw_im"), h.zw.im),
                (format!("{stem}_ww"), h.ww),
            ],
        }
    }

    fn to_text(&self) -> String {
        match self {
            Value::Real(x) => format!("{x}"),
            Value::Complex(c) => fmt_c(*c),
            Value::Pair(names, v) => format!("{} = {}, {} = {}", names[0], fmt_c(v[0]), names[1], fmt_c(v[1])),
            Value::Hermitian(h) => format!(
                "[[{}, {}], [{}, {}]]",
                h.zz,
                fmt_c(h.zw),
                fmt_c(h.zw.conj()),
                h.ww
            ),
        }
    }
}

fn fmt_c(c: C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

/// Column stem of a quantity in CSV and JSON output.
fn stem(q: Quantity) -> &'static str {
    match q {
        Quantity::Kernel => "k",
        Quantity::Kappa => "kappa",
        Quantity::Berezin => "b",
        Quantity::Diastasis => "d",
        Quantity::Cayley => "theta",
        Quantity::Potential => "f",
        Quantity::Metric => "h",
        Quantity::InverseMetric => "hinv",
        Quantity::Density => "g",
        Quantity::Ricci => "ric",
        Quantity::ScalarCurvature => "s",
        Quantity::Rc | Quantity::RcInverse | Quantity::Xy => "",
        Quantity::DetJ => "det_j",
    }
}

struct EvalContext {
    params: ModelParams,
    q: Option<SJPoint>,
    frame: Option<RCFrame>,
}

impl EvalContext {
    fn q(&self) -> Result<&SJPoint> {
        self.q.as_ref().ok_or_else(|| Error::Usage("this quantity needs --q".into()))
    }

    fn frame(&self) -> Result<&RCFrame> {
        self.frame.as_ref().ok_or_else(|| Error::Usage("this quantity needs --base".into()))
    }
}

fn evaluate(quantity: Quantity, raw: [C64; 2], ctx: &EvalContext) -> Result<Value> {
    use Quantity::*;
    let params = ctx.params;
    if quantity == ScalarCurvature {
        return Ok(Value::Real(scalar_curvature(params)));
    }
    if quantity == RcInverse {
        let p = rc_inverse(ctx.frame()?, &RCPoint { w1: raw[0], w2: raw[1] })?;
        return Ok(Value::Pair(["z", "w"], [p.z, p.w()]));
    }
    let p = SJPoint::new(raw[0], raw[1])?;
    Ok(match quantity {
        Kernel => Value::Complex(sj_kernel(&p, ctx.q()?, params)),
        Kappa => Value::Complex(normalized_kernel(&p, ctx.q()?, params)),
        Berezin => Value::Real(berezin_kernel(&p, ctx.q()?, params)),
        Diastasis => Value::Real(diastasis(&p, ctx.q()?, params)),
        Cayley => Value::Real(cayley_angle(&p, ctx.q()?, params)),
        Potential => Value::Real(kahler_potential(&p, params)),
        Metric => Value::Hermitian(balanced_metric(&p, params)),
        InverseMetric => Value::Hermitian(inverse_metric(&p, params)),
        Density => Value::Real(volume_density(&p, params)),
        Ricci => Value::Hermitian(ricci_form(&p)),
        Rc => {
            let r = rc_forward(ctx.frame()?, &p);
            Value::Pair(["w1", "w2"], [r.w1, r.w2])
        }
        Xy => {
            let xy = xy_chart(ctx.frame()?, &p);
            Value::Pair(["x", "y"], [xy.x, xy.y.value()])
        }
        DetJ => Value::Complex(rc_jacobian_det(ctx.frame()?, &p)),
        ScalarCurvature | RcInverse => unreachable!("handled above"),
    })
}

fn context(quantity: Quantity, params: ModelParams, q: Option<&str>, base: Option<&str>) -> Result<EvalContext> {
    let q = match q {
        Some(s) => Some(parse_point(s)?),
        None if quantity.needs_q() => return Err(Error::Usage(format!("{} needs --q", quantity.name()))),
        None => None,
    };
    let frame = match base {
        Some(s) => Some(RCFrame::new(parse_point(s)?, params)),
        None if quantity.needs_base() => return Err(Error::Usage(format!("{} needs --base", quantity.name()))),
        None => None,
    };
    Ok(EvalContext { params, q, frame })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
        }
    }
    Ok(())
}

fn cmd_eval(g: &GlobalOpts, params: ModelParams, quantity: Quantity, p: Option<&str>, q: Option<&str>, base: Option<&str>) -> Result<()> {
    let ctx = context(quantity, params, q, base)?;
    let raw = match (p, quantity) {
        (Some(s), _) => parse_pair(s)?,
        (None, Quantity::ScalarCurvature) => [c64(0.0, 0.0); 2],
        (None, _) => return Err(Error::Usage(format!("{} needs --p", quantity.name()))),
    };
    let value = evaluate(quantity, raw, &ctx)?;
    let cols = value.columns(stem(quantity));
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Text => format!("{} = {}\n", quantity.name(), value.to_text()),
        Format::Csv => {
            let names: Vec<&str> = cols.iter().map(|(n, _)| n.as_str()).collect();
            let vals: Vec<String> = cols.iter().map(|(_, v)| v.to_string()).collect();
            format!("{}\n{}\n", names.join(","), vals.join(","))
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("quantity".into(), json!(quantity.name()));
            m.insert("params".into(), json!({"k": params.k(), "mu": params.mu()}));
            for (n, v) in cols {
                m.insert(n, json!(v));
            }
            serde_json::to_string_pretty(&Json::Object(m))? + "\n"
        }
    };
    emit(&g.out, &text)
}

fn report_text(r: &CheckReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{} {:<48} residual {:<12.4e} tolerance {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
    }
    let passed = r.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(
        s,
        "{}: {} ({}/{} checks, k = {}, mu = {}, seed = {}, {:.2} s)",
        r.suite,
        if r.pass { "PASS" } else { "FAIL" },
        passed,
        r.checks.len(),
        r.params.k,
        r.params.mu,
        r.seed,
        r.wall_time_s
    );
    s
}

fn report_csv(r: &CheckReport) -> String {
    let mut s = String::from("name,residual,tolerance,pass\n");
    for c in &r.checks {
        let _ = writeln!(s, "\"{}\",{},{},{}", c.name.replace('"', "\"\""), c.residual, c.tolerance, c.pass);
    }
    s
}

fn cmd_check(g: &GlobalOpts, params: ModelParams, suite: &str) -> Result<bool> {
    let suite = Suite::parse(suite)?;
    let cfg = SuiteConfig {
        params,
        seed: g.seed,
        samples: g.samples,
        workers: workers(g),
        tol_abs: g.tol_abs,
        tol_rel: g.tol_rel,
    };
    let report = suites::run(suite, &cfg)?;
    match (g.format, &g.out) {
        // a report file always gets the structured form, the terminal a summary
        (None | Some(Format::Text), Some(_)) => {
            emit(&g.out, &(report.to_json()? + "\n"))?;
            emit(&None, &report_text(&report))?;
        }
        (None | Some(Format::Text), None) => emit(&None, &report_text(&report))?,
        (Some(Format::Json), _) => emit(&g.out, &(report.to_json()? + "\n"))?,
        (Some(Format::Csv), _) => emit(&g.out, &report_csv(&report))?,
    }
    Ok(report.pass)
}

#[allow(clippy::too_many_arguments)]
fn cmd_grid(
    g: &GlobalOpts,
    params: ModelParams,
    quantity: Quantity,
    over: Axis,
    n: usize,
    extent: Option<f64>,
    at: Option<&str>,
    q: Option<&str>,
    base: Option<&str>,
) -> Result<()> {
    if n < 2 {
        return Err(Error::Usage("grid needs at least 2 nodes per axis".into()));
    }
    let extent = extent.unwrap_or(match over {
        Axis::W => 1.0,
        Axis::Z => 3.0,
    });
    if !(extent.is_finite() && extent > 0.0) {
        return Err(Error::Usage(format!("grid extent must be positive, got {extent}")));
    }
    let ctx = context(quantity, params, q, base)?;
    let fixed = match at {
        Some(s) => parse_pair(s)?,
        None => [c64(0.0, 0.0); 2],
    };
    let stem = stem(quantity);
    let mut header: Vec<String> = ["z_re", "z_im", "w_re", "w_im"].map(String::from).to_vec();
    let mut rows: Vec<([C64; 2], Option<Vec<f64>>)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a = -extent + 2.0 * extent * j as f64 / (n - 1) as f64;
            let b = -extent + 2.0 * extent * i as f64 / (n - 1) as f64;
            let mut node = fixed;
            node[if over == Axis::W { 1 } else { 0 }] = c64(a, b);
            let value = match evaluate(quantity, node, &ctx) {
                Ok(v) => Some(v),
                Err(Error::Domain(_)) => None,
                Err(e) => return Err(e),
            };
            if let Some(v) = &value {
                if header.len() == 4 {
                    header.extend(v.columns(stem).into_iter().map(|(n, _)| n));
                }
            }
            rows.push((node, value.map(|v| v.columns(stem).into_iter().map(|(_, x)| x).collect())));
        }
    }
    if header.len() == 4 {
        return Err(Error::Domain("every grid node lies outside the domain".into()));
    }
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => {
            let mut s = header.join(",") + "\n";
            let width = header.len() - 4;
            for (node, vals) in &rows {
                let coords = [node[0].re, node[0].im, node[1].re, node[1].im].map(|x| x.to_string());
                let vals: Vec<String> = match vals {
                    Some(v) => v.iter().map(|x| x.to_string()).collect(),
                    None => vec![String::new(); width],
                };
                s += &coords.iter().chain(&vals).cloned().collect::<Vec<_>>().join(",");
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let nodes: Vec<Json> = rows
                .iter()
                .map(|(node, vals)| {
                    let coords = [node[0].re, node[0].im, node[1].re, node[1].im];
                    let mut m = Map::new();
                    for (k, v) in header.iter().zip(coords) {
                        m.insert(k.clone(), json!(v));
                    }
                    for (idx, k) in header.iter().skip(4).enumerate() {
                        m.insert(k.clone(), vals.as_ref().map_or(Json::Null, |v| json!(v[idx])));
                    }
                    Json::Object(m)
                })
                .collect();
            let doc = json!({
                "quantity": quantity.name(),
                "params": {"k": params.k(), "mu": params.mu()},
                "columns": header,
                "nodes": nodes,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    emit(&g.out, &text)
}

fn workers(g: &GlobalOpts) -> usize {
    g.workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1)
}

/// Exit codes: 0 success, 1 failed checks, 2 usage errors, 3 domain and
/// numerical errors, 4 I/O errors.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Config(_) => 2,
        Error::Domain(_) | Error::Step(_) => 3,
        Error::Io(_) | Error::Json(_) => 4,
    }
}

pub fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    if g.workers == Some(0) {
        return Err(Error::Usage("--workers must be positive".into()));
    }
    let params = ModelParams::new(g.k, g.mu).map_err(|e| Error::Usage(e.to_string()))?;
    match &cli.command {
        Command::Eval { quantity, p, q, base } => {
            cmd_eval(g, params, *quantity, p.as_deref(), q.as_deref(), base.as_deref()).map(|_| true)
        }
        Command::Check { suite } => cmd_check(g, params, suite),
        Command::Grid {
            quantity,
            over,
            n,
            extent,
            at,
            q,
            base,
        } => cmd_grid(g, params, *quantity, *over, *n, *extent, at.as_deref(), q.as_deref(), base.as_deref()).map(|_| true),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5").unwrap(), c64(1.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), c64(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), c64(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("0.3-0.1i").unwrap(), c64(0.3, -0.1));
        assert_eq!(parse_complex("1e-3+2E-2i").unwrap(), c64(1e-3, 2e-2));
        assert_eq!(parse_complex("-1 + 2 i").unwrap(), c64(-1.0, 2.0));
        assert_eq!(parse_complex("1,2").unwrap(), c64(1.0, 2.0));
        for bad in ["", "abc", "1+", "1+2k", "nan", "1,,2"] {
            assert!(matches!(parse_complex(bad), Err(Error::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn points() {
        assert_eq!(parse_pair("0,0.5").unwrap(), [c64(0.0, 0.0), c64(0.5, 0.0)]);
        assert_eq!(parse_pair("1,2;0.1,-0.3").unwrap(), [c64(1.0, 2.0), c64(0.1, -0.3)]);
        assert_eq!(parse_pair("1+2i;0.5i").unwrap(), [c64(1.0, 2.0), c64(0.0, 0.5)]);
        assert_eq!(parse_pair("1+2i,0.5i").unwrap(), [c64(1.0, 2.0), c64(0.0, 0.5)]);
        assert!(matches!(parse_pair("1"), Err(Error::Usage(_))));
        assert!(matches!(parse_point("0,1.5"), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluate_examples() {
        let params = ModelParams::default();
        let ctx = context(Quantity::DetJ, params, None, Some("0,0.5")).unwrap();
        let v = evaluate(Quantity::DetJ, parse_pair("1,0").unwrap(), &ctx).unwrap();
        assert_eq!(v, Value::Complex(c64(0.421875, 0.0)));
        let ctx = context(Quantity::Kernel, params, Some("0,0"), None).unwrap();
        assert_eq!(evaluate(Quantity::Kernel, [c64(0.0, 0.0); 2], &ctx).unwrap(), Value::Complex(c64(1.0, 0.0)));
        assert!(matches!(context(Quantity::Kernel, params, None, None), Err(Error::Usage(_))));
        assert_eq!(Quantity::InverseMetric.name(), "inverse-metric");
    }
}

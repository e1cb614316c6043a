//! Command-line front end.
//!
//! Exit codes: 0 when the verdict is true, 1 when it is false (invalid fan,
//! incomplete fan, failed verification), 2 for malformed input or usage.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::builtin::{self, Builtin};
use crate::fan::{ConeIndices, Fan};
use crate::flow::{self, ChartPoint, Direction, Tracker};
use crate::io;
use crate::toric::{self, chart_label, Atlas};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "toricfan", version, about = "Unimodular fans, toric charts and torus-flow limits")]
pub struct Cli {
    /// Output style: human-readable text or `key=value` lines.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Facet,
    Raycast,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fan axioms.
    Validate { fan: PathBuf },
    /// Decide whether the fan covers the whole space.
    Complete {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Oracle::Facet)]
        oracle: Oracle,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the isotropy weights at every fixed point as a weight data file.
    Weights { fan: PathBuf },
    /// Rebuild the fan from a weight data file.
    Reconstruct { weights: PathBuf },
    /// Describe the quotient presentation `U / K`.
    Quotient { fan: PathBuf },
    /// Track the curve `exp(-rJξ)·q` and check its limit stratum.
    Limit {
        fan: PathBuf,
        /// Direction, comma separated rationals such as `1,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Angular part of the direction.
        #[arg(long, allow_hyphen_values = true)]
        angular: Option<String>,
        /// Start coordinates, comma separated complex numbers such as `2,1+0.5i`; default all ones.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        /// Chart of the start point as comma separated ray indices; default the first fixed point.
        #[arg(long)]
        chart: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = flow::LIMIT_TIME)]
        r: f64,
        #[arg(long, default_value_t = flow::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = flow::DEFAULT_STEP)]
        step: f64,
        /// Write the trajectory as `r,chart,re,im,…` lines to this file.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Keep every n-th integration sample in the export.
        #[arg(long, default_value_t = 10)]
        every: usize,
    },
    /// Print charts, weights and transition maps, and check the cocycle identities.
    Atlas { fan: PathBuf },
    /// Print a builtin fan: cp1, cpn K, hirzebruch A.
    Lib {
        name: String,
        param: Option<String>,
        /// Star subdivide a maximal cone (comma separated ray indices); repeatable.
        #[arg(long)]
        subdivide: Vec<String>,
    },
}

/// Outcome of a subcommand before rendering.
struct Outcome {
    code: i32,
    fields: Vec<(String, String)>,
    document: Option<String>,
}

impl Outcome {
    fn new(code: i32) -> Self {
        Self { code, fields: Vec::new(), document: None }
    }

    fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_stdout = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if to_stdout { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if to_stdout { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(&cli.command, err) {
        Ok(o) => {
            render(&o, cli.format, out);
            o.code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn render(o: &Outcome, format: Format, out: &mut dyn Write) {
    if let Some(doc) = &o.document {
        let _ = write!(out, "{doc}");
        return;
    }
    for (k, v) in &o.fields {
        let _ = match format {
            Format::Text => writeln!(out, "{k}: {v}"),
            Format::Machine => writeln!(out, "{k}={v}"),
        };
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load_fan(path: &Path, err: &mut dyn Write) -> Result<Fan, Failure> {
    let (fan, warnings) = io::parse_fan(&read_input(path)?)?;
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(fan)
}

fn indices(s: &str) -> Result<ConeIndices, Failure> {
    let mut v = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| usize::from_str(t.trim()).map_err(|_| Failure(format!("bad index `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    Ok(v)
}

fn rationals(s: &str) -> Result<Vec<BigRational>, Failure> {
    s.split(',')
        .map(|t| BigRational::from_str(t.trim()).map_err(|_| Failure(format!("bad rational `{t}`"))))
        .collect()
}

fn complexes(s: &str) -> Result<Vec<Complex64>, Failure> {
    s.split(',')
        .map(|t| Complex64::from_str(t.trim()).map_err(|_| Failure(format!("bad complex number `{t}`"))))
        .collect()
}

fn cones_text(cones: &[ConeIndices]) -> String {
    let parts: Vec<String> = cones.iter().map(|c| format!("{{{}}}", join(c))).collect();
    parts.join(" ")
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn complex_text(z: &[Complex64]) -> String {
    z.iter().map(|c| format!("{}{:+}i", c.re, c.im)).collect::<Vec<_>>().join(",")
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn execute(cmd: &Command, err: &mut dyn Write) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { fan } => {
            let f = load_fan(fan, err)?;
            let report = f.validate();
            let mut o = Outcome::new(verdict(report.ok()))
                .field("status", if report.ok() { "ok" } else { "invalid" })
                .field("rays", f.rays().len())
                .field("maximal_cones", f.maximal_cones().len());
            for v in &report.violations {
                o = o.field("violation", v);
            }
            Ok(o)
        }
        Command::Complete { fan, oracle, samples, seed } => {
            let f = load_fan(fan, err)?;
            match oracle {
                Oracle::Facet => {
                    let r = f.is_complete_facet();
                    let mut o = Outcome::new(verdict(r.complete))
                        .field("complete", r.complete)
                        .field("oracle", "facet");
                    for (facet, count) in r.facets.iter().filter(|(_, c)| *c != 2) {
                        o = o.field("facet", format!("{{{}}} in {count} maximal cones", join(facet)));
                    }
                    if !r.underdimensional.is_empty() {
                        o = o.field("underdimensional", cones_text(&r.underdimensional));
                    }
                    Ok(o)
                }
                Oracle::Raycast => {
                    let r = f.is_complete_raycast(*samples, *seed);
                    let mut o = Outcome::new(verdict(r.complete))
                        .field("complete", r.complete)
                        .field("oracle", "raycast")
                        .field("samples", r.samples)
                        .field("seed", seed);
                    if let Some(w) = &r.witness {
                        o = o.field("witness", w);
                    }
                    Ok(o)
                }
            }
        }
        Command::Weights { fan } => {
            let f = load_fan(fan, err)?;
            if !f.validate().ok() {
                return Ok(Outcome::new(EXIT_FALSE).field("status", "invalid fan"));
            }
            match toric::weight_data_from_fan(&f) {
                Ok(w) => {
                    let mut o = Outcome::new(EXIT_OK);
                    o.document = Some(io::weight_data_to_string(&w)?);
                    Ok(o)
                }
                Err(e) => Ok(Outcome::new(EXIT_FALSE).field("status", e)),
            }
        }
        Command::Reconstruct { weights } => {
            let w = io::parse_weight_data(&read_input(weights)?)?;
            match toric::fan_from_weight_data(&w) {
                Ok(f) => {
                    let mut o = Outcome::new(EXIT_OK);
                    o.document = Some(io::fan_to_string(&f)?);
                    Ok(o)
                }
                Err(e) => Ok(Outcome::new(EXIT_FALSE).field("status", e)),
            }
        }
        Command::Quotient { fan } => {
            let f = load_fan(fan, err)?;
            if !f.validate().ok() {
                return Ok(Outcome::new(EXIT_FALSE).field("status", "invalid fan"));
            }
            let q = toric::quotient_presentation(&f);
            let mut o = Outcome::new(EXIT_OK)
                .field("m", q.m)
                .field("n", f.dim())
                .field("kernel_rank", q.kernel_rank());
            for k in q.kernel_basis.rows() {
                o = o.field("kernel", format!("({})", join(k)));
            }
            let group = if q.component_group.is_empty() {
                "trivial".to_string()
            } else {
                q.component_group.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
            };
            let zero_sets = q.allowed_zero_sets.maximal_faces();
            Ok(o.field("component_group", group).field("maximal_zero_sets", cones_text(&zero_sets)))
        }
        Command::Limit { fan, xi, angular, start, chart, r, tol, step, export, every } => {
            let f = load_fan(fan, err)?;
            let n = f.dim();
            let xi = rationals(xi)?;
            if xi.len() != n {
                return Err(Failure(format!("--xi has {} entries, expected {n}", xi.len())));
            }
            let d = match angular {
                Some(a) => {
                    let a = rationals(a)?;
                    if a.len() != n {
                        return Err(Failure(format!("--angular has {} entries, expected {n}", a.len())));
                    }
                    Direction::with_angular(xi, a)
                }
                None => Direction::new(xi),
            };
            if !f.validate().ok() {
                return Ok(Outcome::new(EXIT_FALSE).field("status", "invalid fan"));
            }
            let chart = match chart {
                Some(c) => indices(c)?,
                None => match toric::fixed_points(&f).into_iter().next() {
                    Some(c) => c,
                    None => return Ok(Outcome::new(EXIT_FALSE).field("status", "fan has no fixed point")),
                },
            };
            let coords = match start {
                Some(s) => complexes(s)?,
                None => vec![Complex64::new(1.0, 0.0); n],
            };
            let mut tracker = match Tracker::new(&f) {
                Ok(t) => t,
                Err(e) => return Ok(Outcome::new(EXIT_FALSE).field("status", e)),
            };
            tracker.step = *step;
            let traj = match tracker.track(&ChartPoint::new(chart, coords), &d, *r) {
                Ok(t) => t,
                Err(e @ flow::FlowError::NonFiniteState(_)) => {
                    return Ok(Outcome::new(EXIT_FALSE).field("status", e))
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(path) = export {
                std::fs::write(path, traj.to_records(*every))
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            }
            let rep = flow::limit_report(&traj, *tol);
            let predicted = rep.predicted_stratum.as_ref().map_or("none".to_string(), |p| format!("{{{}}}", join(p)));
            Ok(Outcome::new(verdict(rep.converged))
                .field("stratum", predicted)
                .field("observed", format!("{{{}}}", join(&rep.observed_stratum)))
                .field("converged", rep.converged)
                .field("residual", format!("{:e}", rep.residual))
                .field("chart", chart_label(&rep.numeric_limit.chart))
                .field("limit", complex_text(&rep.numeric_limit.coords))
                .field("chart_switches", rep.chart_switches)
                .field("r", r))
        }
        Command::Atlas { fan } => {
            let f = load_fan(fan, err)?;
            if !f.validate().ok() {
                return Ok(Outcome::new(EXIT_FALSE).field("status", "invalid fan"));
            }
            let atlas = Atlas::new(&f)?;
            let charts: Vec<ConeIndices> = atlas.charts().cloned().collect();
            let mut o = Outcome::new(EXIT_OK).field("charts", charts.len());
            for c in &charts {
                let w = atlas.weights(c).expect("chart exists");
                let ws: Vec<String> = w.weights().iter().map(ToString::to_string).collect();
                o = o.field(&format!("weights[{}]", chart_label(c)), ws.join(" "));
            }
            for a in &charts {
                for b in &charts {
                    if a != b {
                        let m = atlas.transition(a, b)?;
                        o = o.field(&format!("transition[{}->{}]", chart_label(a), chart_label(b)), m);
                    }
                }
            }
            let report = atlas.check_cocycle();
            o.code = verdict(report.ok());
            Ok(o.field("pairs_checked", report.pairs_checked)
                .field("triples_checked", report.triples_checked)
                .field("cocycle", if report.ok() { "ok" } else { "failed" }))
        }
        Command::Lib { name, param, subdivide } => {
            let b = Builtin::parse(name, param.as_deref())?;
            let cones = subdivide.iter().map(|s| indices(s)).collect::<Result<Vec<_>, _>>()?;
            let f = builtin::subdivided(b, &cones)?;
            let mut o = Outcome::new(EXIT_OK);
            o.document = Some(io::fan_to_string(&f)?);
            Ok(o)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("toricfan").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_helpers() {
        assert_eq!(indices("2, 0,1").ok().unwrap(), vec![0, 1, 2]);
        assert_eq!(rationals("1,-1/2").ok().unwrap()[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(complexes("2,1+0.5i").ok().unwrap()[1], Complex64::new(1.0, 0.5));
        assert!(rationals("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&[]).0, EXIT_INPUT);
        assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(call(&["validate", "/nonexistent/file.fan"]).0, EXIT_INPUT);
        assert_eq!(call(&["lib", "grassmannian"]).0, EXIT_INPUT);
        assert_eq!(call(&["lib", "cpn", "0"]).0, EXIT_INPUT);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("validate"));
    }

    #[test]
    fn lib_cp1() {
        let (code, out, _) = call(&["lib", "cp1"]);
        assert_eq!(code, EXIT_OK);
        let (f, _) = io::parse_fan(&out).unwrap();
        assert_eq!(f, builtin::cp1());
    }
}

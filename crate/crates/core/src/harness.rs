//! Experiment runner behind the `wwlab` binary.
//!
//! Each subcommand has a fixed parameter schema. Values come from defaults,
//! then an optional TOML file, then command-line flags. Tables are written
//! as CSV with a leading `#` provenance line; reports as a single JSON object.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Arg, ArgAction, Command};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::circle_method::{
    enumerate_a_n, minor_arc_decay, multiplier_residual, subdivision_check, Enumeration, MultiplierAtom,
};
use crate::diophantine::{
    bad_approx_constant, box_dimension, bracket_report, cantor_net, cf_expand, dirichlet_approx,
    hurwitz_tail_constant, n_theta_approximate, BoxSet, EpsRange,
};
use crate::dynamics::{e12_quadratic_net, ww_sup_experiment, SystemSpec, TrigPoly};
use crate::hardy::{class_check_l, class_check_m, hardy_average, ClassFamily, ClassWitness, HardyExpr};
use crate::numerics::{expi, GOLDEN};
use crate::phase_sums::{reachable_abs_error, sup_scan, twisted_average, vdc_lhs, vdc_rhs_all, euler_decay_bound, IntPoly, TwistSign};
use crate::uniformity::{gowers_norm_cyclic, ghk_estimate, lp_bound_check, u2_fourier, CyclicSignal, GhkParams};
use crate::variation::{variation_growth, LatticeSignal};
use crate::{selftest, Complex, Error};

/// Environment variable giving the default worker count.
pub const JOBS_ENV: &str = "WWLAB_JOBS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PROPERTY: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// A real: plain decimal, `a/b`, `2^k`, `golden`, `sqrt2-1`, `pi`.
    Real,
    /// A nonnegative integer, also written `2^k` or `1e6`.
    Int,
    /// Integers as `a,b,c` or `lo..hi[:ratio]`.
    Ints,
    /// A real, or `auto`.
    RealOrAuto,
    Text,
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub struct Subcommand {
    pub name: &'static str,
    pub about: &'static str,
    pub format: Format,
    pub params: &'static [ParamSpec],
}

const fn p(key: &'static str, kind: Kind, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec {
        key,
        kind,
        default,
        help,
    }
}

use Kind::*;

pub const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand {
        name: "weyl-scan",
        about: "certified sup over α of |(1/N) Σ e(P(n)α + nθ)| at N = n-min, 2n-min, …",
        format: Format::Csv,
        params: &[
            p("theta", Real, "golden", "twist θ"),
            p("poly", Text, "n^2", "integer polynomial P"),
            p("n-min", Int, "64", "first N"),
            p("n-max", Int, "4096", "last N"),
            p("abs-err", RealOrAuto, "auto", "target certified gap; auto is max(1e-3, reachable)"),
        ],
    },
    Subcommand {
        name: "twisted-avg",
        about: "(1/N) Σ e(P(n)α ± nθ)",
        format: Format::Csv,
        params: &[
            p("theta", Real, "0", "twist θ"),
            p("alpha", Real, "golden", "frequency α"),
            p("poly", Text, "n^2", "integer polynomial P"),
            p("n", Ints, "2^4..2^16", "values of N"),
            p("sign", Text, "minus", "plus or minus"),
        ],
    },
    Subcommand {
        name: "vdc-check",
        about: "van der Corput inequality on random unit sequences, all H ≤ N",
        format: Format::Csv,
        params: &[
            p("n", Int, "256", "largest sequence length"),
            p("trials", Int, "200", "number of random sequences"),
        ],
    },
    Subcommand {
        name: "hardy-decay",
        about: "|(1/N) Σ e(p(n))| against the Euler-summation majorant",
        format: Format::Csv,
        params: &[
            p("expr", Text, "s^0.5", "Hardy expression p(s)"),
            p("n", Ints, "1e2..1e6", "values of N"),
            p("delta", RealOrAuto, "auto", "class parameter δ"),
            p("m-const", RealOrAuto, "auto", "class constant M"),
            p("eps", RealOrAuto, "auto", "class parameter ε"),
        ],
    },
    Subcommand {
        name: "hardy-class",
        about: "membership certificate for M- or L-class bounds",
        format: Format::Json,
        params: &[
            p("expr", Text, "s^0.5", "Hardy expression p(s)"),
            p("family", Text, "M", "M or L"),
            p("delta", Real, "0.3", "δ"),
            p("m-const", Real, "2", "M"),
            p("m", Int, "0", "derivative order m"),
            p("k", Int, "0", "integer part of the type"),
            p("alpha", Real, "0.5", "fractional part of the type (M only)"),
            p("eps", Real, "0.01", "ε (M only)"),
            p("s-max", Real, "1e6", "end of the verification grid"),
            p("grid", Int, "256", "grid points"),
        ],
    },
    Subcommand {
        name: "gowers",
        about: "Gowers norms U^1..U^m of a signal on Z_N",
        format: Format::Csv,
        params: &[
            p("n", Int, "64", "group size N"),
            p("m", Int, "3", "largest order"),
            p("signal", Text, "random", "random, signs, constant, character:k or quadratic:a"),
        ],
    },
    Subcommand {
        name: "ghk",
        about: "truncated Gowers-Host-Kra seminorm of a trigonometric polynomial",
        format: Format::Csv,
        params: &[
            p("system", Text, "rotation:golden", "rotation:β, doubling or skew:β"),
            p("f", Text, "e(x)", "trigonometric polynomial"),
            p("n", Int, "1e4", "outer averaging length"),
            p("h", Int, "100", "inner averaging length"),
            p("depth", Int, "2", "order m"),
        ],
    },
    Subcommand {
        name: "dirichlet",
        about: "Dirichlet approximations p/q with q ≤ Q",
        format: Format::Csv,
        params: &[
            p("alpha", Real, "golden", "target α"),
            p("q", Ints, "10..1e6", "values of Q"),
        ],
    },
    Subcommand {
        name: "badc",
        about: "badly-approximable constant and digit bracket",
        format: Format::Json,
        params: &[p("theta", Real, "golden", "θ"), p("q-max", Int, "1e6", "largest denominator")],
    },
    Subcommand {
        name: "cantor-dim",
        about: "box-counting dimension of a continued-fraction Cantor net",
        format: Format::Csv,
        params: &[
            p("digits", Text, "1,2", "allowed partial quotients"),
            p("depth", Int, "12", "net depth"),
            p("eps-min", Real, "1e-4", "smallest scale"),
            p("eps-max", Real, "1e-2", "largest scale"),
            p("count", Int, "12", "number of scales"),
        ],
    },
    Subcommand {
        name: "ntheta",
        about: "N-θ rational approximates",
        format: Format::Csv,
        params: &[
            p("theta", Real, "golden", "θ"),
            p("n", Ints, "2^4..2^30", "values of N"),
            p("delta", Real, "0.05", "δ"),
            p("md", Int, "1", "leading coefficient m_d"),
        ],
    },
    Subcommand {
        name: "atoms",
        about: "major-box atoms S_N^j(a/b) at one N",
        format: Format::Csv,
        params: &[
            p("theta", Real, "0", "θ"),
            p("poly", Text, "n^2", "integer polynomial P, degree ≥ 2"),
            p("n", Int, "1024", "N"),
            p("delta", Real, "0.2", "δ"),
        ],
    },
    Subcommand {
        name: "multiplier-residual",
        about: "max |K̂_N − major-arc model| over window samples",
        format: Format::Csv,
        params: &[
            p("theta", Real, "0", "θ"),
            p("poly", Text, "n^2", "integer polynomial P, degree ≥ 2"),
            p("n", Ints, "2^8..2^14", "values of N"),
            p("delta", Real, "0.05", "δ"),
            p("samples", Int, "41", "samples per window"),
        ],
    },
    Subcommand {
        name: "minor-arc",
        about: "max |K̂_N| off the major windows",
        format: Format::Csv,
        params: &[
            p("theta", Real, "0", "θ"),
            p("poly", Text, "n^2", "integer polynomial P, degree ≥ 2"),
            p("n", Ints, "2^8..2^14", "values of N"),
            p("delta", Real, "0.05", "δ"),
            p("samples", Int, "1e4", "golden-sequence samples per N"),
        ],
    },
    Subcommand {
        name: "subdivision",
        about: "one-scale-per-t check along a lacunary sequence",
        format: Format::Csv,
        params: &[
            p("theta", Real, "golden", "θ"),
            p("poly", Text, "n^2", "integer polynomial P, degree ≥ 2"),
            p("delta", Real, "0.1", "δ"),
            p("rho", Real, "2", "lacunarity ρ"),
            p("nmax", Int, "2^20", "largest N"),
        ],
    },
    Subcommand {
        name: "variation",
        about: "l²-norm of the r-variation of K_N^θ * f along I_ρ",
        format: Format::Csv,
        params: &[
            p("theta", Real, "golden", "θ"),
            p("poly", Text, "n^2", "integer polynomial P"),
            p("r", Real, "2.5", "variation exponent, > 2"),
            p("rho", Real, "2", "lacunarity ρ"),
            p("nmax", Int, "2^14", "largest N"),
            p("f", Text, "delta", "delta, delta:x or box:L"),
        ],
    },
    Subcommand {
        name: "ww-sup",
        about: "sup over a θ-net of |(1/N) Σ e(nθ) f(T^{P(n)} x)|",
        format: Format::Csv,
        params: &[
            p("system", Text, "rotation:golden", "rotation:β, doubling or skew:β"),
            p("f", Text, "e(x)", "trigonometric polynomial"),
            p("net", Text, "e12", "e12 or a comma-separated list of θ"),
            p("poly", Text, "n^2", "integer polynomial P"),
            p("n", Ints, "2^8..2^16", "values of N"),
        ],
    },
    Subcommand {
        name: "selftest",
        about: "property suites with independent oracles",
        format: Format::Csv,
        params: &[],
    },
];

pub fn subcommand(name: &str) -> Option<&'static Subcommand> {
    SUBCOMMANDS.iter().find(|s| s.name == name)
}

/// Failure of a run, mapped to an exit status.
#[derive(Debug)]
pub enum HarnessError {
    /// Unknown key, unparsable value or rejected input.
    Config { key: Option<String>, message: String },
    Budget(String),
    /// The run finished but an asserted property failed.
    Property(String),
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config { .. } | HarnessError::Io(_) => EXIT_CONFIG,
            HarnessError::Budget(_) => EXIT_BUDGET,
            HarnessError::Property(_) => EXIT_PROPERTY,
        }
    }

    fn key(key: &str, message: impl Into<String>) -> HarnessError {
        HarnessError::Config {
            key: Some(key.to_string()),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for HarnessError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HarnessError::Config { key: Some(k), message } => write!(f, "config error in `{k}`: {message}"),
            HarnessError::Config { key: None, message } => write!(f, "config error: {message}"),
            HarnessError::Budget(m) => write!(f, "budget error: {m}"),
            HarnessError::Property(m) => write!(f, "property failure: {m}"),
            HarnessError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } | Error::Quadrature { .. } => HarnessError::Budget(e.to_string()),
            _ => HarnessError::Config {
                key: None,
                message: e.to_string(),
            },
        }
    }
}

type HResult<T> = std::result::Result<T, HarnessError>;

/// A validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub subcommand: String,
    /// Raw values, every schema key present.
    pub params: BTreeMap<String, String>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults for `subcommand`.
    pub fn new(subcommand: &str) -> HResult<ExperimentConfig> {
        let sc = subcommand_or_err(subcommand)?;
        Ok(ExperimentConfig {
            subcommand: sc.name.to_string(),
            params: sc.params.iter().map(|p| (p.key.to_string(), p.default.to_string())).collect(),
            output: None,
            seed: 0,
            jobs: None,
        })
    }

    /// Sets one parameter, checking the key and the value's type.
    pub fn set(&mut self, key: &str, value: &str) -> HResult<()> {
        let sc = subcommand_or_err(&self.subcommand)?;
        let spec = sc
            .params
            .iter()
            .find(|p| p.key == key)
            .ok_or_else(|| HarnessError::key(key, format!("unknown key for `{}`", sc.name)))?;
        check_kind(spec, value)?;
        self.params.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies a TOML document. Top-level `seed`, `output` and `jobs` are
    /// run settings; parameters go in a table named after the subcommand
    /// (or `params`). Any other key is rejected.
    pub fn apply_toml(&mut self, text: &str) -> HResult<()> {
        let doc: toml::Table = text.parse().map_err(|e: toml::de::Error| HarnessError::Config {
            key: None,
            message: format!("config file: {}", e.message()),
        })?;
        for (k, v) in &doc {
            match k.as_str() {
                "seed" => self.seed = toml_int(k, v)?,
                "jobs" => self.jobs = Some(toml_int(k, v)? as usize),
                "output" => self.output = Some(PathBuf::from(toml_scalar(k, v)?)),
                "subcommand" => {
                    if toml_scalar(k, v)? != self.subcommand {
                        return Err(HarnessError::key(k, "does not match the requested subcommand"));
                    }
                }
                name if name == self.subcommand || name == "params" => {
                    let table = v
                        .as_table()
                        .ok_or_else(|| HarnessError::key(name, "expected a table"))?;
                    for (pk, pv) in table {
                        let s = toml_scalar(pk, pv)?;
                        self.set(pk, &s)?;
                    }
                }
                other => return Err(HarnessError::key(other, "unknown key")),
            }
        }
        Ok(())
    }

    /// `wwlab <subcommand> key=value … seed=…`, recorded in every artifact.
    pub fn provenance(&self) -> String {
        let mut s = format!("wwlab {}", self.subcommand);
        for (k, v) in &self.params {
            let _ = write!(s, " {k}={v}");
        }
        let _ = write!(s, " seed={}", self.seed);
        s
    }

    fn real(&self, key: &str) -> HResult<f64> {
        parse_real(&self.params[key]).map_err(|m| HarnessError::key(key, m))
    }

    fn real_or_auto(&self, key: &str) -> HResult<Option<f64>> {
        let v = &self.params[key];
        if v == "auto" {
            Ok(None)
        } else {
            parse_real(v).map(Some).map_err(|m| HarnessError::key(key, m))
        }
    }

    fn int(&self, key: &str) -> HResult<u64> {
        parse_int(&self.params[key]).map_err(|m| HarnessError::key(key, m))
    }

    fn ints(&self, key: &str) -> HResult<Vec<u64>> {
        parse_ints(&self.params[key]).map_err(|m| HarnessError::key(key, m))
    }

    fn text(&self, key: &str) -> &str {
        &self.params[key]
    }

    fn poly(&self, key: &str) -> HResult<IntPoly> {
        IntPoly::parse(self.text(key)).map_err(|e| HarnessError::key(key, e.to_string()))
    }
}

fn subcommand_or_err(name: &str) -> HResult<&'static Subcommand> {
    subcommand(name).ok_or_else(|| HarnessError::Config {
        key: None,
        message: format!("unknown subcommand `{name}`"),
    })
}

fn toml_scalar(key: &str, v: &toml::Value) -> HResult<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        _ => Err(HarnessError::key(key, "expected a scalar")),
    }
}

fn toml_int(key: &str, v: &toml::Value) -> HResult<u64> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(HarnessError::key(key, "expected a nonnegative integer")),
    }
}

fn check_kind(spec: &ParamSpec, value: &str) -> HResult<()> {
    let r = match spec.kind {
        Real => parse_real(value).map(drop),
        RealOrAuto if value == "auto" => Ok(()),
        RealOrAuto => parse_real(value).map(drop),
        Int => parse_int(value).map(drop),
        Ints => parse_ints(value).map(drop),
        Text if value.trim().is_empty() => Err("empty value".to_string()),
        Text => Ok(()),
    };
    r.map_err(|m| HarnessError::key(spec.key, m))
}

/// Reals: decimals, `a/b`, `b^e`, and the names `golden`, `sqrt2-1`, `pi`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let v = match t {
        "golden" => GOLDEN,
        "sqrt2-1" => std::f64::consts::SQRT_2 - 1.0,
        "pi" => std::f64::consts::PI,
        _ => {
            if let Some(rest) = t.strip_prefix('-') {
                return parse_real(rest).map(|x| -x);
            }
            if let Some((a, b)) = t.split_once('/') {
                let (a, b) = (parse_real(a)?, parse_real(b)?);
                if b == 0.0 {
                    return Err(format!("zero denominator in `{s}`"));
                }
                a / b
            } else if let Some((b, e)) = t.split_once('^') {
                parse_real(b)?.powf(parse_real(e)?)
            } else {
                t.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))?
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_int(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim();
    if let Some((b, e)) = t.split_once('^') {
        if b.trim() == "2" {
            let e: u32 = e.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
            return if e < 64 { Ok(1 << e) } else { Err(format!("`{s}` overflows")) };
        }
    }
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let x = parse_real(t)?;
    if x >= 0.0 && x.fract() == 0.0 && x < 9.2e18 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a nonnegative integer"))
    }
}

/// `a,b,c` or `lo..hi[:ratio]`. Without a ratio, the progression doubles when
/// both ends are powers of two and grows tenfold otherwise.
pub fn parse_ints(s: &str) -> std::result::Result<Vec<u64>, String> {
    let t = s.trim();
    if let Some((lo, rest)) = t.split_once("..") {
        let (hi, ratio) = match rest.split_once(':') {
            Some((h, r)) => (h, Some(parse_real(r)?)),
            None => (rest, None),
        };
        let (lo, hi) = (parse_int(lo)?, parse_int(hi)?);
        if lo == 0 || lo > hi {
            return Err(format!("empty or invalid range `{s}`"));
        }
        let ratio = ratio.unwrap_or(if lo.is_power_of_two() && hi.is_power_of_two() { 2.0 } else { 10.0 });
        if !(ratio > 1.0) {
            return Err(format!("ratio in `{s}` must exceed 1"));
        }
        let mut out = Vec::new();
        let mut k = 0;
        loop {
            let v = (lo as f64 * ratio.powi(k)).round();
            if v > hi as f64 * (1.0 + 1e-12) {
                break;
            }
            let v = v as u64;
            if out.last() != Some(&v) {
                out.push(v);
            }
            k += 1;
        }
        Ok(out)
    } else {
        t.split(',').map(parse_int).collect()
    }
}

/// A finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub text: String,
    /// Set when an asserted property failed; the text is still complete.
    pub failure: Option<String>,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
    failure: Option<String>,
}

impl Table {
    fn new(header: &[&'static str]) -> Table {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
            failure: None,
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    fn fail(&mut self, msg: String) {
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }
}

enum Output {
    Table(Table),
    Report(serde_json::Value, Option<String>),
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Runs `config` on a worker pool sized by `config.jobs`, else `WWLAB_JOBS`,
/// else the number of CPUs.
pub fn run(config: &ExperimentConfig) -> HResult<Artifact> {
    let jobs = config
        .jobs
        .or_else(|| std::env::var(JOBS_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Io(e.to_string()))?;
    let out = pool.install(|| dispatch(config))?;
    let prov = config.provenance();
    Ok(match out {
        Output::Table(t) => {
            let mut text = format!("# {prov}\n{}\n", t.header.join(","));
            for r in &t.rows {
                text.push_str(&r.join(","));
                text.push('\n');
            }
            for n in &t.notes {
                let _ = writeln!(text, "# {n}");
            }
            Artifact {
                text,
                failure: t.failure,
            }
        }
        Output::Report(v, failure) => {
            let obj = json!({ "config": prov, "result": v });
            Artifact {
                text: serde_json::to_string_pretty(&obj).expect("serializable") + "\n",
                failure,
            }
        }
    })
}

fn dispatch(c: &ExperimentConfig) -> HResult<Output> {
    match c.subcommand.as_str() {
        "weyl-scan" => weyl_scan(c),
        "twisted-avg" => twisted_avg(c),
        "vdc-check" => vdc_check(c),
        "hardy-decay" => hardy_decay(c),
        "hardy-class" => hardy_class(c),
        "gowers" => gowers(c),
        "ghk" => ghk(c),
        "dirichlet" => dirichlet(c),
        "badc" => badc(c),
        "cantor-dim" => cantor_dim(c),
        "ntheta" => ntheta(c),
        "atoms" => atoms(c),
        "multiplier-residual" => residual(c),
        "minor-arc" => minor_arc(c),
        "subdivision" => subdivision(c),
        "variation" => variation(c),
        "ww-sup" => ww_sup(c),
        "selftest" => run_selftest(c),
        other => Err(HarnessError::Config {
            key: None,
            message: format!("unknown subcommand `{other}`"),
        }),
    }
}

fn weyl_scan(c: &ExperimentConfig) -> HResult<Output> {
    let (theta, poly, target) = (c.real("theta")?, c.poly("poly")?, c.real_or_auto("abs-err")?);
    let (lo, hi) = (c.int("n-min")?, c.int("n-max")?);
    if lo == 0 || lo > hi {
        return Err(HarnessError::key("n-min", "need 1 ≤ n-min ≤ n-max"));
    }
    let mut t = Table::new(&["N", "sup_value", "rigorous_upper", "argmax_alpha", "abs_err"]);
    let mut n = lo;
    while n <= hi {
        let eps = match target {
            Some(e) => e,
            None => reachable_abs_error(theta, &poly, n)?.max(1e-3),
        };
        let s = sup_scan(theta, &poly, n, eps)?;
        t.row(vec![
            n.to_string(),
            num(s.sup_value),
            num(s.rigorous_upper),
            num(s.argmax_alpha),
            num(eps),
        ]);
        n = n.saturating_mul(2);
    }
    Ok(Output::Table(t))
}

fn twisted_avg(c: &ExperimentConfig) -> HResult<Output> {
    let sign = match c.text("sign") {
        "minus" | "-" => TwistSign::Minus,
        "plus" | "+" => TwistSign::Plus,
        _ => return Err(HarnessError::key("sign", "expected plus or minus")),
    };
    let (theta, alpha, poly) = (c.real("theta")?, c.real("alpha")?, c.poly("poly")?);
    let mut t = Table::new(&["N", "re", "im", "abs", "error_bound"]);
    for n in c.ints("n")? {
        let s = twisted_average(theta, alpha, &poly, n, sign)?;
        t.row(vec![
            n.to_string(),
            num(s.value.re),
            num(s.value.im),
            num(s.abs()),
            num(s.accumulated_error_bound),
        ]);
    }
    Ok(Output::Table(t))
}

fn vdc_check(c: &ExperimentConfig) -> HResult<Output> {
    let (n_max, trials) = (c.int("n")?, c.int("trials")?);
    if n_max == 0 || n_max > 4096 {
        return Err(HarnessError::key("n", "need 1 ≤ N ≤ 4096"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut t = Table::new(&["trial", "N", "lhs", "min_margin", "argmin_H"]);
    for trial in 0..trials {
        let n = rng.gen_range(1..=n_max as usize);
        let u: Vec<Complex> = (0..n).map(|_| expi(rng.gen::<f64>())).collect();
        let lhs = vdc_lhs(&u);
        let rhs = vdc_rhs_all(&u)?;
        let (h, margin) = rhs
            .iter()
            .enumerate()
            .map(|(i, r)| (i + 1, r - lhs))
            .fold((0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
        if margin < -1e-12 {
            t.fail(format!("trial {trial}: lhs exceeds rhs by {:e} at H = {h}", -margin));
        }
        t.row(vec![trial.to_string(), n.to_string(), num(lhs), num(margin), h.to_string()]);
    }
    Ok(Output::Table(t))
}

/// An `M`-class witness with `k = 0` for a Hardy expression of type in
/// `(0, 1)`, certified on `[1, s_max]`: `α` is the type, `δ` and `ε` sit
/// well inside their admissible ranges and `M` is the smallest value from a
/// doubling ladder that certifies.
pub fn fit_m_witness(
    p: &HardyExpr,
    s_max: f64,
    delta: Option<f64>,
    m_const: Option<f64>,
    eps: Option<f64>,
) -> crate::Result<ClassWitness> {
    let alpha = p.type_of()?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("type {alpha} is not in (0, 1)")));
    }
    let delta = delta.unwrap_or(0.5 * alpha.min(1.0 - alpha));
    let eps = eps.unwrap_or(0.25 * ((alpha - delta) / 3.0).min(1.0 - alpha - delta).max(0.0));
    let ladder: Vec<f64> = match m_const {
        Some(m) => vec![m],
        None => (0..40).map(|i| 2f64.powf(i as f64 / 4.0)).collect(),
    };
    let mut last = None;
    for m in ladder {
        let w = ClassWitness::m_class(delta, m, 0, 0, alpha, eps).with_s_max(s_max);
        match class_check_m(p, &w, 256) {
            Ok(v) if v.is_certified() => return Ok(w),
            Ok(v) => last = Some(format!("{v:?}")),
            Err(e) => return Err(e),
        }
    }
    Err(Error::invalid(format!(
        "no M-class witness found: {}",
        last.unwrap_or_default()
    )))
}

fn hardy_decay(c: &ExperimentConfig) -> HResult<Output> {
    let expr = HardyExpr::parse(c.text("expr")).map_err(|e| HarnessError::key("expr", e.to_string()))?;
    let ns = c.ints("n")?;
    let n_top = *ns.iter().max().expect("nonempty");
    if n_top > 1 << 28 {
        return Err(HarnessError::Budget("N ≤ 2^28 for Hardy averages".into()));
    }
    let w = fit_m_witness(
        &expr,
        (n_top as f64).max(2.0),
        c.real_or_auto("delta")?,
        c.real_or_auto("m-const")?,
        c.real_or_auto("eps")?,
    )?;
    let mut t = Table::new(&["N", "abs_avg", "euler_bound"]);
    for n in ns {
        let avg = hardy_average(&expr, n as usize)?.abs();
        let bound = euler_decay_bound(&expr, &w, n)?;
        if avg > bound {
            t.fail(format!("N = {n}: |avg| = {avg:e} exceeds {bound:e}"));
        }
        t.row(vec![n.to_string(), num(avg), num(bound)]);
    }
    t.notes.push(format!(
        "witness delta={} M={} alpha={} eps={}",
        w.delta, w.m_const, w.alpha, w.epsilon
    ));
    Ok(Output::Table(t))
}

fn hardy_class(c: &ExperimentConfig) -> HResult<Output> {
    let expr = HardyExpr::parse(c.text("expr")).map_err(|e| HarnessError::key("expr", e.to_string()))?;
    let grid = c.int("grid")? as usize;
    let (delta, m_const, m, k) = (c.real("delta")?, c.real("m-const")?, c.int("m")? as u32, c.int("k")? as u32);
    let (w, verdict) = match c.text("family") {
        "M" | "m" => {
            let w = ClassWitness::m_class(delta, m_const, m, k, c.real("alpha")?, c.real("eps")?)
                .with_s_max(c.real("s-max")?);
            (w, class_check_m(&expr, &w, grid)?)
        }
        "L" | "l" => {
            let w = ClassWitness::l_class(delta, m_const, m, k).with_s_max(c.real("s-max")?);
            (w, class_check_l(&expr, &w, grid)?)
        }
        _ => return Err(HarnessError::key("family", "expected M or L")),
    };
    let family = match w.family {
        ClassFamily::M => "M",
        ClassFamily::L => "L",
    };
    Ok(Output::Report(
        json!({
            "expr": expr.to_string(),
            "family": family,
            "witness": w,
            "certified": verdict.is_certified(),
            "verdict": verdict,
        }),
        None,
    ))
}

fn signal(spec: &str, n: usize, rng: &mut ChaCha8Rng) -> HResult<CyclicSignal> {
    let values: Vec<Complex> = match spec.split_once(':') {
        None if spec == "random" => (0..n).map(|_| expi(rng.gen::<f64>())).collect(),
        None if spec == "signs" => (0..n)
            .map(|_| Complex::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
            .collect(),
        None if spec == "constant" => vec![Complex::new(1.0, 0.0); n],
        Some(("character", k)) => {
            let k = parse_int(k).map_err(|m| HarnessError::key("signal", m))?;
            (0..n).map(|x| expi(((k as u128 * x as u128) % n as u128) as f64 / n as f64)).collect()
        }
        Some(("quadratic", a)) => {
            let a = parse_int(a).map_err(|m| HarnessError::key("signal", m))?;
            (0..n)
                .map(|x| expi(((a as u128 * (x * x) as u128) % n as u128) as f64 / n as f64))
                .collect()
        }
        _ => return Err(HarnessError::key("signal", format!("unknown signal `{spec}`"))),
    };
    Ok(CyclicSignal::new(values)?)
}

fn gowers(c: &ExperimentConfig) -> HResult<Output> {
    let (n, m) = (c.int("n")? as usize, c.int("m")? as u32);
    if n == 0 || !(1..=3).contains(&m) {
        return Err(HarnessError::key("m", "need N ≥ 1 and m ∈ {1, 2, 3}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let f = signal(c.text("signal"), n, &mut rng)?;
    let mut t = Table::new(&["m", "gowers_norm", "lp_norm", "p"]);
    for k in 1..=m {
        let u = gowers_norm_cyclic(&f, k)?;
        let (lp, p) = if k >= 2 {
            let chk = lp_bound_check(&f, k)?;
            if !chk.ok {
                t.fail(format!("U^{k} = {:e} exceeds L^p = {:e}", chk.u_norm, chk.lp_norm));
            }
            (num(chk.lp_norm), num(chk.p))
        } else {
            (String::new(), String::new())
        };
        t.row(vec![k.to_string(), num(u), lp, p]);
    }
    t.notes.push(format!("u2_fourier={}", num(u2_fourier(&f))));
    Ok(Output::Table(t))
}

fn system_and_f(c: &ExperimentConfig) -> HResult<(SystemSpec, TrigPoly)> {
    let spec = match c.text("system").split_once(':') {
        Some((kind, beta)) => {
            let beta = parse_real(beta).map_err(|m| HarnessError::key("system", m))?;
            format!("{kind}:{beta}")
        }
        None => c.text("system").to_string(),
    };
    let sys = SystemSpec::parse(&spec).map_err(|e| HarnessError::key("system", e.to_string()))?;
    let f = TrigPoly::parse(c.text("f"), sys.dimension()).map_err(|e| HarnessError::key("f", e.to_string()))?;
    if f.dim() != sys.dimension() {
        return Err(HarnessError::key("f", "dimension does not match the system"));
    }
    Ok((sys, f))
}

fn ghk(c: &ExperimentConfig) -> HResult<Output> {
    let (sys, f) = system_and_f(c)?;
    let params = GhkParams {
        n_per_level: c.int("n")?,
        h_per_level: c.int("h")?,
        depth: c.int("depth")? as u32,
    };
    if params.n_per_level.saturating_mul(params.h_per_level.saturating_pow(params.depth.saturating_sub(2))) > 1e8 as u64 {
        return Err(HarnessError::Budget("n·h^(depth−2) ≤ 1e8 GHK terms".into()));
    }
    let v = ghk_estimate(&sys, &f, params)?;
    let mut t = Table::new(&["depth", "n", "h", "estimate"]);
    t.row(vec![
        params.depth.to_string(),
        params.n_per_level.to_string(),
        params.h_per_level.to_string(),
        num(v),
    ]);
    Ok(Output::Table(t))
}

fn dirichlet(c: &ExperimentConfig) -> HResult<Output> {
    let alpha = c.real("alpha")?;
    let mut t = Table::new(&["Q", "p", "q", "abs_error", "bound"]);
    for q_max in c.ints("q")? {
        let r = dirichlet_approx(alpha, q_max)?;
        let (p, q) = (r.num().to_string(), r.den().to_string());
        let qf = r.to_i64_pair().map(|(_, q)| q as f64).unwrap_or(f64::INFINITY);
        let err = r.distance_to(alpha);
        let bound = 1.0 / (qf * q_max as f64);
        if err > bound * (1.0 + 1e-9) {
            t.fail(format!("Q = {q_max}: |α − p/q| = {err:e} exceeds 1/(qQ)"));
        }
        t.row(vec![q_max.to_string(), p, q, num(err), num(bound)]);
    }
    Ok(Output::Table(t))
}

fn badc(c: &ExperimentConfig) -> HResult<Output> {
    let (theta, q_max) = (c.real("theta")?, c.int("q-max")?);
    let cf = cf_expand(theta, 64)?;
    Ok(Output::Report(
        json!({
            "theta": theta,
            "digits": cf.digits,
            "stop": format!("{:?}", cf.stop),
            "bad_approx_constant": bad_approx_constant(theta, q_max)?,
            "hurwitz_tail_constant": hurwitz_tail_constant(theta, q_max)?,
            "bracket": bracket_report(theta, q_max)?,
        }),
        None,
    ))
}

fn cantor_dim(c: &ExperimentConfig) -> HResult<Output> {
    let digits: Vec<u64> = c
        .text("digits")
        .split(',')
        .map(parse_int)
        .collect::<std::result::Result<_, _>>()
        .map_err(|m| HarnessError::key("digits", m))?;
    let net = cantor_net(&digits, c.int("depth")? as usize)?;
    let iv: Vec<(f64, f64)> = net.iter().map(|i| (i.lo_f64(), i.hi_f64())).collect();
    let (lo, hi, count) = (c.real("eps-min")?, c.real("eps-max")?, c.int("count")? as usize);
    if !(lo > 0.0 && lo < hi) || count < 2 {
        return Err(HarnessError::key("eps-min", "need 0 < eps-min < eps-max and count ≥ 2"));
    }
    let d = box_dimension(BoxSet::Intervals(&iv), EpsRange::new(lo, hi, count))?;
    let mut t = Table::new(&["eps", "count"]);
    for (e, k) in &d.counts {
        t.row(vec![num(*e), k.to_string()]);
    }
    t.notes.push(format!("dimension={} fit_residual={}", num(d.slope), num(d.fit_residual)));
    t.notes.push(format!("intervals={}", iv.len()));
    Ok(Output::Table(t))
}

fn ntheta(c: &ExperimentConfig) -> HResult<Output> {
    let (theta, delta, md) = (c.real("theta")?, c.real("delta")?, c.int("md")?);
    let mut t = Table::new(&["N", "x", "y", "gamma", "candidates", "uniqueness_regime"]);
    for n in c.ints("n")? {
        match n_theta_approximate(theta, n, delta, md)? {
            Some(a) => t.row(vec![
                n.to_string(),
                a.x_over_y.num().to_string(),
                a.x_over_y.den().to_string(),
                num(a.gamma),
                a.candidates.to_string(),
                a.uniqueness_regime.to_string(),
            ]),
            None => t.row(vec![n.to_string(), String::new(), String::new(), String::new(), "0".into(), String::new()]),
        }
    }
    Ok(Output::Table(t))
}

fn atoms(c: &ExperimentConfig) -> HResult<Output> {
    let poly = c.poly("poly")?;
    let e = enumerate_a_n(c.real("theta")?, &poly, c.int("n")?, c.real("delta")?)?;
    let header: Vec<&'static str> = MultiplierAtom::csv_header().split(',').collect();
    let mut t = Table::new(&header);
    for a in e.all_atoms() {
        t.row(a.csv_row().split(',').map(str::to_string).collect());
    }
    let bound = Enumeration::density_constant(&poly);
    if e.max_density > bound {
        t.fail(format!("|A_N,t|/4^t = {} exceeds {bound}", e.max_density));
    }
    t.notes.push(match &e.approximate {
        Some(a) => format!("approximate={} gamma={}", a.x_over_y, num(a.gamma)),
        None => "approximate=none".into(),
    });
    t.notes.push(format!(
        "max_density={} density_bound={} overlaps={}",
        num(e.max_density),
        num(bound),
        e.overlaps.len()
    ));
    Ok(Output::Table(t))
}

fn residual(c: &ExperimentConfig) -> HResult<Output> {
    let delta = c.real("delta")?;
    let r = multiplier_residual(
        c.real("theta")?,
        &c.poly("poly")?,
        &c.ints("n")?,
        delta,
        c.int("samples")? as usize,
    )?;
    let mut t = Table::new(&["N", "samples", "max_residual"]);
    for row in &r.rows {
        t.row(vec![row.n.to_string(), row.samples.to_string(), num(row.max_residual)]);
    }
    t.notes.push(format!("exponent={} predicted={}", opt_num(r.exponent), num(1.0 - 2.0 * delta)));
    Ok(Output::Table(t))
}

fn minor_arc(c: &ExperimentConfig) -> HResult<Output> {
    let r = minor_arc_decay(
        c.real("theta")?,
        &c.poly("poly")?,
        &c.ints("n")?,
        c.real("delta")?,
        c.int("samples")? as usize,
    )?;
    let mut t = Table::new(&["N", "samples", "max_minor", "max_major"]);
    for row in &r.rows {
        t.row(vec![row.n.to_string(), row.samples.to_string(), num(row.max_minor), num(row.max_major)]);
    }
    t.notes.push(format!("kappa={} degenerate={}", opt_num(r.kappa), r.degenerate));
    Ok(Output::Table(t))
}

fn subdivision(c: &ExperimentConfig) -> HResult<Output> {
    let poly = c.poly("poly")?;
    let r = subdivision_check(c.real("theta")?, &poly, c.real("delta")?, c.real("rho")?, c.int("nmax")?)?;
    let mut t = Table::new(&["N", "x", "y", "nonempty_t"]);
    for row in &r.rows {
        let (x, y) = match &row.approximate {
            Some(a) => (a.num().to_string(), a.den().to_string()),
            None => (String::new(), String::new()),
        };
        let ts: Vec<String> = row.nonempty_t.iter().map(u32::to_string).collect();
        t.row(vec![row.n.to_string(), x, y, ts.join(";")]);
    }
    let bound = Enumeration::density_constant(&poly);
    if !r.passed {
        t.fail(format!("{} scale violations", r.violations.len()));
    }
    if r.max_density > bound {
        t.fail(format!("|A_N,t|/4^t = {} exceeds {bound}", r.max_density));
    }
    t.notes.push(format!(
        "passed={} violations={} max_density={} density_bound={}",
        r.passed,
        r.violations.len(),
        num(r.max_density),
        num(bound)
    ));
    Ok(Output::Table(t))
}

fn lattice_signal(spec: &str) -> HResult<LatticeSignal> {
    let bad = |m: String| HarnessError::key("f", m);
    match spec.split_once(':') {
        None if spec == "delta" => Ok(LatticeSignal::delta(0)),
        Some(("delta", x)) => {
            let x: i64 = x.trim().parse().map_err(|_| bad(format!("bad point `{x}`")))?;
            Ok(LatticeSignal::delta(x))
        }
        Some(("box", l)) => {
            let l = parse_int(l).map_err(bad)?;
            if l == 0 || l > 1 << 16 {
                return Err(bad("box length must lie in [1, 2^16]".into()));
            }
            Ok(LatticeSignal::from_interval(0, &vec![Complex::new(1.0, 0.0); l as usize])?)
        }
        _ => Err(bad(format!("unknown signal `{spec}`"))),
    }
}

fn variation(c: &ExperimentConfig) -> HResult<Output> {
    let f = lattice_signal(c.text("f"))?;
    let rows = variation_growth(
        &f,
        c.real("theta")?,
        &c.poly("poly")?,
        c.real("rho")?,
        c.real("r")?,
        c.int("nmax")?,
    )?;
    let mut t = Table::new(&["N_max", "ratio"]);
    for r in &rows {
        t.row(vec![r.n_max.to_string(), num(r.ratio)]);
    }
    Ok(Output::Table(t))
}

fn ww_sup(c: &ExperimentConfig) -> HResult<Output> {
    let (sys, f) = system_and_f(c)?;
    let poly = c.poly("poly")?;
    let net: Vec<f64> = match c.text("net") {
        "e12" => e12_quadratic_net(),
        list => list
            .split(',')
            .map(parse_real)
            .collect::<std::result::Result<_, _>>()
            .map_err(|m| HarnessError::key("net", m))?,
    };
    let ns = c.ints("n")?;
    let top = *ns.iter().max().expect("nonempty");
    let max_iter = poly
        .eval_i128(top as i128)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| HarnessError::Budget("P(N) must fit in u64".into()))?;
    let x0 = sys.default_point(max_iter)?;
    let rows = ww_sup_experiment(&sys, &f, &x0, &net, &poly, &ns)?;
    let mut t = Table::new(&["N", "sup", "argmax_theta", "lipschitz"]);
    for r in &rows {
        t.row(vec![r.n.to_string(), num(r.sup), num(r.argmax_theta), num(r.lipschitz)]);
    }
    Ok(Output::Table(t))
}

fn run_selftest(c: &ExperimentConfig) -> HResult<Output> {
    let report = selftest::run(c.seed);
    let mut t = Table::new(&["suite", "cases", "failures", "detail"]);
    for s in &report {
        if s.failures > 0 {
            t.fail(format!("suite {} failed: {}", s.name, s.detail));
        }
        t.row(vec![
            s.name.to_string(),
            s.cases.to_string(),
            s.failures.to_string(),
            s.detail.replace(',', ";"),
        ]);
    }
    Ok(Output::Table(t))
}

fn build_cli() -> Command {
    let mut cmd = Command::new("wwlab")
        .about("Exponential sums, Diophantine approximation and twisted ergodic averages")
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("TOML config file"))
        .arg(Arg::new("output").long("output").short('o').global(true).value_name("FILE").help("write here instead of stdout"))
        .arg(Arg::new("seed").long("seed").global(true).value_name("SEED").help("seed for randomized suites"))
        .arg(Arg::new("jobs").long("jobs").short('j').global(true).value_name("N").help(format!("worker threads (default ${JOBS_ENV} or all CPUs)")));
    for sc in SUBCOMMANDS {
        let mut sub = Command::new(sc.name).about(sc.about);
        for p in sc.params {
            sub = sub.arg(
                Arg::new(p.key)
                    .long(p.key)
                    .value_name("VALUE")
                    .action(ArgAction::Set)
                    .allow_hyphen_values(true)
                    .help(format!("{} [default: {}]", p.help, p.default)),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn config_from_args(args: Vec<OsString>) -> HResult<Option<ExperimentConfig>> {
    let matches = match build_cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return Ok(None);
            }
            return Err(HarnessError::Config {
                key: None,
                message: e.render().to_string().trim().to_string(),
            });
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let mut cfg = ExperimentConfig::new(name)?;
    if let Some(path) = sub.get_one::<String>("config") {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Config {
            key: Some("config".into()),
            message: format!("{path}: {e}"),
        })?;
        cfg.apply_toml(&text)?;
    }
    for p in subcommand(name).expect("known").params {
        if let Some(v) = sub.get_one::<String>(p.key) {
            cfg.set(p.key, v)?;
        }
    }
    if let Some(s) = sub.get_one::<String>("seed") {
        cfg.seed = s.parse().map_err(|_| HarnessError::key("seed", "expected an unsigned integer"))?;
    }
    if let Some(j) = sub.get_one::<String>("jobs") {
        cfg.jobs = Some(j.parse().map_err(|_| HarnessError::key("jobs", "expected an unsigned integer"))?);
    }
    if let Some(o) = sub.get_one::<String>("output") {
        cfg.output = Some(PathBuf::from(o));
    }
    Ok(Some(cfg))
}

/// Parses `args` (program name first), runs, writes the artifact and
/// returns the exit status.
pub fn main_with_args(args: impl IntoIterator<Item = impl Into<OsString>>) -> i32 {
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let result = config_from_args(args).and_then(|cfg| {
        let Some(cfg) = cfg else { return Ok(()) };
        let art = run(&cfg)?;
        match &cfg.output {
            Some(path) => std::fs::write(path, &art.text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?,
            None => print!("{}", art.text),
        }
        match art.failure {
            Some(f) => Err(HarnessError::Property(f)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("wwlab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_parsers() {
        assert_eq!(parse_real("1/4").unwrap(), 0.25);
        assert_eq!(parse_real("2^-1").unwrap(), 0.5);
        assert_eq!(parse_real("-0.5").unwrap(), -0.5);
        assert_eq!(parse_real("golden").unwrap(), GOLDEN);
        assert!(parse_real("x").is_err());
        assert_eq!(parse_int("2^14").unwrap(), 16384);
        assert_eq!(parse_int("1e6").unwrap(), 1_000_000);
        assert!(parse_int("1.5").is_err());
        assert_eq!(parse_ints("1e2..1e6").unwrap(), vec![100, 1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(parse_ints("2^8..2^10").unwrap(), vec![256, 512, 1024]);
        assert_eq!(parse_ints("3,5,7").unwrap(), vec![3, 5, 7]);
        assert_eq!(parse_ints("10..100:3").unwrap(), vec![10, 30, 90]);
        assert!(parse_ints("5..1").is_err());
    }

    #[test]
    fn schema_is_enforced() {
        let mut c = ExperimentConfig::new("weyl-scan").unwrap();
        assert!(matches!(c.set("bogus", "1"), Err(HarnessError::Config { key: Some(k), .. }) if k == "bogus"));
        assert!(c.set("n-max", "abc").is_err());
        c.set("n-max", "128").unwrap();
        assert!(ExperimentConfig::new("nope").is_err());
        let toml = "seed = 7\n[weyl-scan]\ntheta = \"1/3\"\nn-min = 32\n";
        c.apply_toml(toml).unwrap();
        assert_eq!((c.seed, c.params["n-min"].as_str()), (7, "32"));
        assert!(c.apply_toml("[weyl-scan]\nwhat = 1\n").is_err());
        assert!(c.apply_toml("nonsense = 1\n").is_err());
    }

    #[test]
    fn csv_has_provenance_and_header() {
        let mut c = ExperimentConfig::new("twisted-avg").unwrap();
        c.set("n", "4,8").unwrap();
        let art = run(&c).unwrap();
        let lines: Vec<&str> = art.text.lines().collect();
        assert!(lines[0].starts_with("# wwlab twisted-avg "));
        assert_eq!(lines[1], "N,re,im,abs,error_bound");
        assert_eq!(lines.len(), 4);
        assert_eq!(art, run(&c).unwrap());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["wwlab", "weyl-scan", "--bogus", "1"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["wwlab", "atoms", "--delta", "0.2", "--n", "2^200"]), EXIT_CONFIG);
        assert_eq!(
            main_with_args(["wwlab", "gowers", "--n", "1000", "--m", "3", "-o", "/dev/null"]),
            EXIT_BUDGET
        );
        assert_eq!(main_with_args(["wwlab", "variation", "--r", "2", "-o", "/dev/null"]), EXIT_CONFIG);
        assert_eq!(
            main_with_args(["wwlab", "dirichlet", "--q", "10,100", "-o", "/dev/null"]),
            EXIT_OK
        );
    }

    #[test]
    fn witness_search() {
        for c in [0.3, 0.5, 0.7] {
            let p = HardyExpr::power(1.0, c);
            let w = fit_m_witness(&p, 1e6, None, None, None).unwrap();
            assert!(euler_decay_bound(&p, &w, 1000).is_ok());
        }
        assert!(fit_m_witness(&HardyExpr::power(1.0, 2.0), 1e6, None, None, None).is_err());
    }
}

//! The `hypertri` command line.
//!
//! Exit status: 0 on success, 1 when a verification or sandwich check fails,
//! 2 on usage errors.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds;
use crate::constructions::{self, SamplingPlan};
use crate::cube::{Mode, Params};
use crate::error::Error;
use crate::oracle::{self, SandwichReport, SearchLimits};
use crate::textfmt::{parse_vertex_set, write_vertex_set};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default seed for `construct --kind alteration`.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Parser)]
#[command(name = "hypertri", version, about = "Triangle-free subsets of hypercube distance graphs")]
pub struct RunConfig {
    /// Accept any 1 <= r <= n instead of even r <= 2n/3.
    #[arg(long, global = true)]
    pub exploratory: bool,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Antipodal,
    Alteration,
    FixedBit,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Antipodal => "antipodal",
            Kind::Alteration => "alteration",
            Kind::FixedBit => "fixed-bit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    TriangleFree,
    Independent,
}

#[derive(Debug, Clone, Args)]
pub struct Instance {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a vertex set and write it with a JSON sidecar.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        instance: Instance,
        /// Block length for `antipodal`; chosen automatically when omitted.
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        /// Sampling probability for `alteration`; optimal when omitted.
        #[arg(long)]
        probability: Option<f64>,
        /// Vertex-set output file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Sidecar path; defaults to `<output>.json` when `--output` is set.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Check a vertex-set file for triangle-freeness or independence.
    Verify {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        /// Input file; stdin when omitted.
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Property::TriangleFree)]
        property: Property,
    },
    /// Count triangles of the whole graph (formula and brute force) or of a set.
    Count {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, short)]
        input: Option<PathBuf>,
    },
    /// Print every bound for one instance.
    Bounds {
        #[command(flatten)]
        instance: Instance,
    },
    /// Exact maximum triangle-free subset by branch and bound.
    Oracle {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = SearchLimits::default().max_nodes)]
        max_nodes: u64,
        #[arg(long)]
        time_budget_secs: Option<f64>,
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Constructions, lower bound, oracle and upper bounds side by side.
    Report {
        #[arg(long, conflicts_with = "n_range")]
        n: Option<u32>,
        #[arg(long, conflicts_with = "r_range")]
        r: Option<u32>,
        /// Inclusive range `a..b`.
        #[arg(long, value_parser = parse_range)]
        n_range: Option<RangeInclusive<u32>>,
        /// Inclusive range `c..d`.
        #[arg(long, value_parser = parse_range)]
        r_range: Option<RangeInclusive<u32>>,
        #[arg(long, default_value_t = 5_000_000)]
        max_nodes: u64,
        /// Run the oracle only up to this dimension.
        #[arg(long, default_value_t = 5)]
        oracle_max_n: u32,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u32 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// A failure that maps to an exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

impl RunConfig {
    fn mode(&self) -> Mode {
        if self.exploratory {
            Mode::Exploratory
        } else {
            Mode::Strict
        }
    }

    fn params(&self, n: u32, r: u32) -> Result<Params, Failure> {
        Ok(Params::with_mode(n, r, self.mode())?)
    }
}

/// Runs one command. `stdin` feeds `verify`/`count` when no input file is
/// given; errors are reported on `stderr`.
pub fn run(config: &RunConfig, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(config, stdin, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    match &config.command {
        Command::Construct {
            kind,
            instance,
            p,
            seed,
            trials,
            probability,
            output,
            sidecar,
        } => {
            let params = config.params(instance.n, instance.r)?;
            let plan = SamplingPlan {
                probability: *probability,
                seed: *seed,
                trials: *trials,
            };
            construct(&params, *kind, *p, &plan, output.as_deref(), sidecar.as_deref(), out)
        }
        Command::Verify {
            n,
            r,
            input,
            property,
        } => {
            let text = read_input(input.as_deref(), stdin)?;
            verify_cmd(config, &text, *n, *r, *property, out)
        }
        Command::Count { instance, input } => {
            let params = config.params(instance.n, instance.r)?;
            let text = match input {
                Some(path) => Some(read_input(Some(path), stdin)?),
                None => None,
            };
            count_cmd(config.format, &params, text.as_deref(), out)
        }
        Command::Bounds { instance } => {
            let params = config.params(instance.n, instance.r)?;
            let rep = bounds::bound_report(&params);
            match config.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rep.to_json()).unwrap())?,
                Format::Text => write!(out, "{}", rep.to_table())?,
            }
            Ok(EXIT_OK)
        }
        Command::Oracle {
            instance,
            max_nodes,
            time_budget_secs,
            no_symmetry,
        } => {
            let params = config.params(instance.n, instance.r)?;
            let time_budget = match time_budget_secs {
                Some(s) if s.is_finite() && *s > 0.0 => Some(Duration::from_secs_f64(*s)),
                Some(s) => return Err(Failure::Usage(format!("time budget must be positive, got {s}"))),
                None => None,
            };
            if *max_nodes == 0 {
                return Err(Failure::Usage("--max-nodes must be positive".into()));
            }
            let limits = SearchLimits {
                max_nodes: *max_nodes,
                time_budget,
                allow_symmetry: !no_symmetry,
            };
            let res = oracle::max_triangle_free_exact(&params, &limits)?;
            let mut doc = res.to_json();
            doc["n"] = json!(params.n);
            doc["r"] = json!(params.r);
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
            if config.format == Format::Text {
                write!(out, "{}", write_vertex_set(&res.witness, Some(params.r)))?;
            }
            Ok(EXIT_OK)
        }
        Command::Report {
            n,
            r,
            n_range,
            r_range,
            max_nodes,
            oracle_max_n,
        } => {
            let ns = match (n, n_range) {
                (Some(n), _) => *n..=*n,
                (None, Some(range)) => range.clone(),
                (None, None) => return Err(Failure::Usage("report needs --n or --n-range".into())),
            };
            let rs = match (r, r_range) {
                (Some(r), _) => Some(*r..=*r),
                (None, Some(range)) => Some(range.clone()),
                (None, None) => None,
            };
            let limits = SearchLimits {
                max_nodes: *max_nodes,
                ..SearchLimits::default()
            };
            report_cmd(config, ns, rs, &limits, *oracle_max_n, out)
        }
    }
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn construct(
    params: &Params,
    kind: Kind,
    p: Option<u32>,
    plan: &SamplingPlan,
    output: Option<&Path>,
    sidecar: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let mut meta = json!({
        "construction": kind.name(),
        "n": params.n,
        "r": params.r,
        "mode": params.mode,
    });
    let set = match kind {
        Kind::Antipodal => {
            let p = match p.or_else(|| constructions::select_antipodal_prime(params.n, params.r)) {
                Some(p) => p,
                None => {
                    return Err(Failure::Usage(format!(
                        "no prime p with p | {n}, p ∤ {r} and {n}/p > {r}; pass --p to see why a given p fails",
                        n = params.n,
                        r = params.r
                    )))
                }
            };
            meta["p"] = json!(p);
            constructions::antipodal_construction(params.n, p, params.r)?
        }
        Kind::Alteration => {
            let (set, trace) = constructions::alteration_construction(params, plan)?;
            meta["trace"] = serde_json::to_value(&trace).unwrap();
            set
        }
        Kind::FixedBit => constructions::fixed_bit_construction(params)?,
    };
    meta["size"] = json!(set.len());
    let body = write_vertex_set(&set, Some(params.r));
    let sidecar_path = sidecar
        .map(Path::to_path_buf)
        .or_else(|| output.map(|o| PathBuf::from(format!("{}.json", o.display()))));
    match output {
        Some(path) => fs::write(path, &body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(body.as_bytes())?,
    }
    if let Some(path) = sidecar_path {
        let text = serde_json::to_string_pretty(&meta).unwrap() + "\n";
        fs::write(&path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(EXIT_OK)
}

fn verify_cmd(
    config: &RunConfig,
    text: &str,
    n: Option<u32>,
    r: Option<u32>,
    property: Property,
    out: &mut dyn Write,
) -> Outcome {
    let parsed = parse_vertex_set(text, n)?;
    let r = match r.or(parsed.header.and_then(|h| h.r)) {
        Some(r) => r,
        None => return Err(Failure::Usage("distance unknown: pass --r or add `# n=<n> r=<r>`".into())),
    };
    let params = config.params(parsed.set.dim(), r)?;
    let verdict = match property {
        Property::TriangleFree => verify::check_triangle_free(&parsed.set, &params)?,
        Property::Independent => verify::check_independent(&parsed.set, &params)?,
    };
    let prop = match property {
        Property::TriangleFree => "triangle-free",
        Property::Independent => "independent",
    };
    match config.format {
        Format::Json => {
            let doc = json!({
                "n": params.n,
                "r": params.r,
                "property": prop,
                "size": parsed.set.len(),
                "ok": verdict.is_ok(),
                "violation": verdict.violation().map(|v| json!({
                    "kind": v.kind,
                    "witnesses": v.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                })),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
        }
        Format::Text => match verdict.violation() {
            None => writeln!(out, "ok: {} vertices, {prop} for n={} r={}", parsed.set.len(), params.n, params.r)?,
            Some(v) => {
                writeln!(out, "violation: not {prop}")?;
                for w in &v.witnesses {
                    writeln!(out, "{w}")?;
                }
            }
        },
    }
    Ok(if verdict.is_ok() { EXIT_OK } else { EXIT_VIOLATION })
}

fn count_cmd(format: Format, params: &Params, input: Option<&str>, out: &mut dyn Write) -> Outcome {
    if let Some(text) = input {
        let parsed = parse_vertex_set(text, Some(params.n))?;
        let count = verify::count_triangles_in_set(&parsed.set, params)?;
        match format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({"n": params.n, "r": params.r, "size": parsed.set.len(), "triangles_in_set": count.to_string()})
            )?,
            Format::Text => writeln!(out, "triangles_in_set  {count}")?,
        }
        return Ok(EXIT_OK);
    }
    let formula = bounds::triangle_count_formula(params).ok();
    let brute = verify::count_triangles_graph(params).ok();
    let agree = match (&formula, brute) {
        (Some(f), Some(b)) => Some(f.to_string() == b.to_string()),
        _ => None,
    };
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "n": params.n,
                "r": params.r,
                "formula": formula.as_ref().map(|f| f.to_string()),
                "brute_force": brute.map(|b| b.to_string()),
                "agree": agree,
            })
        )?,
        Format::Text => {
            let dash = |s: Option<String>| s.unwrap_or_else(|| "-".into());
            writeln!(out, "formula      {}", dash(formula.as_ref().map(|f| f.to_string())))?;
            writeln!(out, "brute_force  {}", dash(brute.map(|b| b.to_string())))?;
        }
    }
    Ok(if agree == Some(false) { EXIT_VIOLATION } else { EXIT_OK })
}

fn report_cmd(
    config: &RunConfig,
    ns: RangeInclusive<u32>,
    rs: Option<RangeInclusive<u32>>,
    limits: &SearchLimits,
    oracle_max_n: u32,
    out: &mut dyn Write,
) -> Outcome {
    let single = ns.start() == ns.end() && rs.as_ref().is_some_and(|x| x.start() == x.end());
    let mut instances = Vec::new();
    for n in ns {
        let candidates: Vec<u32> = match &rs {
            Some(range) => range.clone().collect(),
            None => (1..=n).collect(),
        };
        for r in candidates {
            match Params::with_mode(n, r, config.mode()) {
                Ok(p) => instances.push(p),
                Err(e) if single => return Err(e.into()),
                // grids keep only the valid pairs
                Err(_) => {}
            }
        }
    }
    if instances.is_empty() {
        return Err(Failure::Usage("no valid (n, r) pairs in the requested range".into()));
    }
    let reports: Vec<SandwichReport> = instances
        .iter()
        .map(|p| oracle::sandwich_report(p, limits, oracle_max_n))
        .collect();
    match config.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports).unwrap())?,
        Format::Text => {
            writeln!(out, "{}", SandwichReport::table_header())?;
            for rep in &reports {
                writeln!(out, "{}", rep.to_table_row())?;
            }
            for rep in reports.iter().filter(|r| !r.holds()) {
                for c in rep.checks.iter().filter(|c| !c.holds) {
                    writeln!(out, "n={} r={}: failed {}", rep.n, rep.r, c.claim)?;
                }
            }
        }
    }
    Ok(if reports.iter().all(SandwichReport::holds) {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

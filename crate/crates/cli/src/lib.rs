//! Command-line front end: argument definitions, algorithm dispatch and
//! JSON/CSV rendering. `main.rs` only parses arguments and maps errors to
//! exit codes.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eccentric::cliquesum::{
    ecc_cliquesum, parse_td, validate_td, write_td, CliquesumParams, CliquesumStats, StarParams, TreeDecomposition,
};
use eccentric::division::{build_r_division_in, default_r, load_division, validate_division, RDivision};
use eccentric::engine::{ecc_from_division, ecc_genus_apex, EngineStats, GenusParams, DEFAULT_RHO};
use eccentric::graph::{naive_ecc, parse_graph, write_graph, Dist, Graph};
use eccentric::oracle::{gen_instance, InstanceKind, APSP_CAP};
use eccentric::profiles::{boundary_distances, gen_profile_gadget, group_by_profile, group_over_set};
use eccentric::{Error, ErrorCategory};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "eccentric", version, about = "Exact eccentricities and diameter of structured graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute all eccentricities and the diameter as JSON.
    Ecc(EccArgs),
    /// Run a fast algorithm and the naive one and compare.
    Verify(EccArgs),
    /// Count distance profiles per region, or on the lower-bound gadget.
    Profiles(ProfileArgs),
    /// Time algorithms over a size sweep and write CSV.
    Bench(BenchArgs),
    /// Write a generated instance to .gr/.td/.apices files.
    Gen(GenArgs),
    /// Check a tree decomposition and/or a division file.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    #[default]
    Auto,
    Naive,
    Division,
    Apex,
    Cliquesum,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Auto => "auto",
            Algo::Naive => "naive",
            Algo::Division => "division",
            Algo::Apex => "apex",
            Algo::Cliquesum => "cliquesum",
        })
    }
}

#[derive(Clone, Debug, Default, Args)]
pub struct EccArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Tree decomposition with apex sets (.td).
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Apex vertices, 1-based ids separated by whitespace.
    #[arg(long)]
    pub apices: Option<PathBuf>,
    /// Division file: one region per line.
    #[arg(long)]
    pub division: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Region size exponent.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Region size; overrides --rho.
    #[arg(long)]
    pub r: Option<usize>,
    /// Heavy-edge exponent for clique-sums.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Clique-sum pieces with fewer vertices than this use the naive method.
    #[arg(long)]
    pub threshold: Option<usize>,
    /// Bound on adhesion and apex set sizes in the decomposition.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave build_ms and query_ms out of the stats.
    #[arg(long)]
    pub omit_timings: bool,
}

#[derive(Clone, Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, required_unless_present = "gadget")]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub apices: Option<PathBuf>,
    #[arg(long)]
    pub division: Option<PathBuf>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Build the gadget with this many anchors instead of reading a graph.
    #[arg(long, requires = "ell")]
    pub gadget: Option<usize>,
    /// Path length of the gadget.
    #[arg(long)]
    pub ell: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    /// Instance kind, e.g. `grid` or `grid_plus_apices:2`.
    #[arg(long, default_value = "grid")]
    pub kind: String,
    /// Generator sizes to sweep (side length for grid kinds).
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "division,naive")]
    pub algo: Vec<Algo>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Path prefix; extensions are appended.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Clone, Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub td: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long)]
    pub division: Option<PathBuf>,
    #[arg(long)]
    pub apices: Option<PathBuf>,
    /// Region size cap to check against.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, io::Error),
    Mismatch(String),
    Failed(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Mismatch(msg) => write!(f, "mismatch: {msg}"),
            CliError::Failed(msg) => write!(f, "validation failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 parse, 3 validation, 4 precondition, 5 internal or mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.category() {
                ErrorCategory::Parse => 2,
                ErrorCategory::Validation => 3,
                ErrorCategory::Precondition => 4,
                ErrorCategory::Internal => 5,
            },
            CliError::Io(..) => 2,
            CliError::Failed(_) => 3,
            CliError::Mismatch(_) => 5,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

/// Parses an apex list: 1-based ids separated by whitespace, `c` comment lines.
pub fn parse_apices(text: &str, n: usize) -> eccentric::Result<Vec<usize>> {
    let mut apices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim_start().starts_with('c') {
            continue;
        }
        for t in raw.split_whitespace() {
            let id: i64 = t
                .parse()
                .map_err(|_| Error::Parse { line, msg: format!("bad vertex id `{t}`") })?;
            if id < 1 || id as u64 > n as u64 {
                return Err(Error::VertexOutOfRange { line, vertex: id, n });
            }
            apices.push(id as usize - 1);
        }
    }
    apices.sort_unstable();
    apices.dedup();
    Ok(apices)
}

pub fn write_apices(apices: &[usize]) -> String {
    let ids: Vec<String> = apices.iter().map(|a| (a + 1).to_string()).collect();
    format!("{}\n", ids.join(" "))
}

/// Loaded inputs of an `ecc`/`verify` run.
pub struct Inputs {
    pub graph: Graph,
    pub td: Option<TreeDecomposition>,
    pub apices: Vec<usize>,
    pub division: Option<RDivision>,
}

pub fn load_inputs(args: &EccArgs) -> CliResult<Inputs> {
    let graph = parse_graph(&read(&args.graph)?)?;
    let td = match &args.td {
        Some(path) => Some(parse_td(&read(path)?)?),
        None => None,
    };
    let apices = match &args.apices {
        Some(path) => parse_apices(&read(path)?, graph.n())?,
        None => Vec::new(),
    };
    let division = match &args.division {
        Some(path) => Some(load_division(&read(path)?, &graph, &apices)?),
        None => None,
    };
    Ok(Inputs { graph, td, apices, division })
}

/// `auto` becomes cliquesum with a decomposition, apex with apices, else
/// division.
pub fn resolve_algo(algo: Algo, inputs: &Inputs) -> Algo {
    match algo {
        Algo::Auto if inputs.td.is_some() => Algo::Cliquesum,
        Algo::Auto if !inputs.apices.is_empty() => Algo::Apex,
        Algo::Auto => Algo::Division,
        other => other,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub regions: usize,
    pub boundary_sum: usize,
    pub profile_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub build_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heavy_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subtrees: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub naive_subtrees: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_subtrees: Option<usize>,
}

impl From<EngineStats> for Stats {
    fn from(s: EngineStats) -> Self {
        Stats {
            regions: s.regions,
            boundary_sum: s.boundary_sum,
            profile_counts: s.profile_counts,
            build_ms: Some(s.build_ms),
            query_ms: Some(s.query_ms),
            ..Stats::default()
        }
    }
}

impl From<CliquesumStats> for Stats {
    fn from(s: CliquesumStats) -> Self {
        Stats {
            regions: s.regions,
            boundary_sum: s.boundary_sum,
            profile_counts: Vec::new(),
            build_ms: Some(s.build_ms),
            query_ms: Some(s.query_ms),
            heavy_edges: Some(s.heavy_edges),
            subtrees: Some(s.subtrees),
            naive_subtrees: Some(s.naive_subtrees),
            star_subtrees: Some(s.star_subtrees),
        }
    }
}

/// The `ecc` JSON document; field order is fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EccReport {
    pub diameter: Dist,
    pub ecc: Vec<Dist>,
    pub algo: String,
    pub stats: Stats,
}

impl EccReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string(self).expect("report serializes");
        text.push('\n');
        text
    }
}

fn pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    builder
        .build()
        .map_err(|e| CliError::Core(Error::Precondition(format!("thread pool: {e}"))))
}

/// Runs the selected algorithm on loaded inputs.
pub fn compute(args: &EccArgs, inputs: &Inputs, algo: Algo) -> CliResult<EccReport> {
    let g = &inputs.graph;
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    let rho = args.rho.unwrap_or(DEFAULT_RHO);
    let (ecc, stats) = match algo {
        Algo::Naive => {
            let start = Instant::now();
            let ecc = naive_ecc(g, &all)?;
            let ms = start.elapsed().as_millis() as u64;
            (ecc, Stats { build_ms: Some(0), query_ms: Some(ms), ..Stats::default() })
        }
        Algo::Division | Algo::Apex => {
            let apices: &[usize] = if algo == Algo::Apex { &inputs.apices } else { &[] };
            match &inputs.division {
                Some(div) => {
                    let r = args.r;
                    let report = validate_division(g, div, r);
                    if !report.passed() {
                        return Err(CliError::Failed(report.failures.join("; ")));
                    }
                    let out = ecc_from_division(g, &inputs.apices, &all, div, &Default::default())?;
                    (out.ecc, out.stats.into())
                }
                None => {
                    let params = GenusParams { rho, r: args.r, ..GenusParams::default() };
                    let out = ecc_genus_apex(g, apices, None, &params)?;
                    (out.ecc, out.stats.into())
                }
            }
        }
        Algo::Cliquesum => {
            let td = inputs
                .td
                .as_ref()
                .ok_or_else(|| Error::Precondition("the cliquesum algorithm needs --td".into()))?;
            let mut params = CliquesumParams { k: args.k, ..CliquesumParams::default() };
            if let Some(delta) = args.delta {
                params.delta = delta;
                params.star = StarParams { delta, ..params.star };
            }
            if let Some(t) = args.threshold {
                params.naive_threshold = Some(t);
            }
            params.star.r = args.r;
            let out = ecc_cliquesum(g, td, &params)?;
            (out.ecc, out.stats.into())
        }
        Algo::Auto => unreachable!("auto is resolved before dispatch"),
    };
    let mut stats: Stats = stats;
    if args.omit_timings {
        stats.build_ms = None;
        stats.query_ms = None;
    }
    Ok(EccReport { diameter: ecc.iter().copied().max().unwrap_or(0), ecc, algo: algo.to_string(), stats })
}

pub fn cmd_ecc(args: &EccArgs, out: &mut dyn Write) -> CliResult<EccReport> {
    let inputs = load_inputs(args)?;
    let algo = resolve_algo(args.algo, &inputs);
    let report = pool(args.threads)?.install(|| compute(args, &inputs, algo))?;
    emit(args.output.as_deref(), &report.to_json(), out)?;
    Ok(report)
}

/// Runs the fast path and the naive oracle; the first differing vertex is
/// reported as a mismatch.
pub fn cmd_verify(args: &EccArgs, out: &mut dyn Write) -> CliResult<()> {
    let inputs = load_inputs(args)?;
    let n = inputs.graph.n();
    if n > APSP_CAP {
        return Err(Error::CapExceeded { n, cap: APSP_CAP }.into());
    }
    let mut algo = resolve_algo(args.algo, &inputs);
    if algo == Algo::Naive {
        algo = Algo::Division;
    }
    let (fast, naive) = pool(args.threads)?.install(|| -> CliResult<_> {
        Ok((compute(args, &inputs, algo)?, compute(args, &inputs, Algo::Naive)?))
    })?;
    if let Some(v) = (0..n).find(|&v| fast.ecc[v] != naive.ecc[v]) {
        return Err(CliError::Mismatch(format!(
            "vertex {}: {algo} gives {}, naive gives {}",
            v + 1,
            fast.ecc[v],
            naive.ecc[v]
        )));
    }
    let text = format!("MATCH algo={algo} n={n} diameter={}\n", naive.diameter);
    emit(args.output.as_deref(), &text, out)
}

#[derive(Serialize)]
struct RegionProfiles {
    size: usize,
    boundary: usize,
    profiles: usize,
    unreachable: usize,
    histogram: Vec<(usize, usize)>,
}

pub fn cmd_profiles(args: &ProfileArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = pool(args.threads)?.install(|| -> CliResult<String> {
        if let (Some(k), Some(ell)) = (args.gadget, args.ell) {
            let gadget = gen_profile_gadget(k, ell)?;
            let table = group_over_set(&gadget.graph, &gadget.path, gadget.anchors[0], &gadget.gadget)?;
            let doc = serde_json::json!({
                "k": k,
                "ell": ell,
                "p": gadget.spacing,
                "vertices": gadget.graph.n(),
                "profiles": table.count(),
            });
            return Ok(format!("{doc}\n"));
        }
        let path = args.graph.as_ref().expect("clap requires --graph without --gadget");
        let g = parse_graph(&read(path)?)?;
        let apices = match &args.apices {
            Some(p) => parse_apices(&read(p)?, g.n())?,
            None => Vec::new(),
        };
        let div = match &args.division {
            Some(p) => load_division(&read(p)?, &g, &apices)?,
            None => {
                let mut domain = vec![true; g.n()];
                for &a in &apices {
                    domain[a] = false;
                }
                let r = args.r.unwrap_or_else(|| default_r(g.n(), args.rho.unwrap_or(DEFAULT_RHO)));
                build_r_division_in(&g, domain, r)?
            }
        };
        let regions: Vec<RegionProfiles> = boundary_distances(&g, &div)
            .iter()
            .map(|bd| {
                let table = group_by_profile(&div.regions[bd.region], bd);
                RegionProfiles {
                    size: div.regions[bd.region].len(),
                    boundary: bd.boundary.len(),
                    profiles: table.count(),
                    unreachable: table.unreachable.len(),
                    histogram: table.histogram(),
                }
            })
            .collect();
        let max = regions.iter().map(|r| r.profiles).max().unwrap_or(0);
        let doc = serde_json::json!({ "regions": regions, "max_profiles": max });
        Ok(format!("{doc}\n"))
    })?;
    emit(args.output.as_deref(), &text, out)
}

/// One CSV row of a benchmark sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub algo: Algo,
    pub wall_ms: u128,
    pub regions: usize,
    pub boundary_sum: usize,
}

pub const BENCH_HEADER: &str = "n,algo,wall_ms,regions,boundary_sum";

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.n, self.algo, self.wall_ms, self.regions, self.boundary_sum)
    }
}

/// Times every algorithm on every size. The naive method is skipped above
/// the oracle cap.
pub fn bench_rows(args: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    let kind = InstanceKind::from_str(&args.kind)?;
    let mut rows = Vec::new();
    for &size in &args.sizes {
        let inst = gen_instance(kind, args.seed, size)?;
        let inputs = Inputs { graph: inst.graph, td: inst.td, apices: inst.apices, division: None };
        let n = inputs.graph.n();
        for &requested in &args.algo {
            let algo = resolve_algo(requested, &inputs);
            if algo == Algo::Naive && n > APSP_CAP {
                continue;
            }
            let ecc_args = EccArgs { rho: args.rho, r: args.r, k: 8, ..EccArgs::default() };
            let start = Instant::now();
            let report = compute(&ecc_args, &inputs, algo)?;
            let wall_ms = start.elapsed().as_millis();
            rows.push(BenchRow {
                n,
                algo,
                wall_ms,
                regions: report.stats.regions,
                boundary_sum: report.stats.boundary_sum,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = pool(args.threads)?.install(|| bench_rows(args))?;
    let mut text = String::from(BENCH_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row.to_string());
        text.push('\n');
    }
    emit(args.output.as_deref(), &text, out)
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let kind = InstanceKind::from_str(&args.kind)?;
    let inst = gen_instance(kind, args.seed, args.size)?;
    let with_ext = |ext: &str| {
        let mut p = args.output.clone().into_os_string();
        p.push(ext);
        PathBuf::from(p)
    };
    let mut files = vec![(with_ext(".gr"), write_graph(&inst.graph))];
    if let Some(td) = &inst.td {
        files.push((with_ext(".td"), write_td(td)));
    }
    if !inst.apices.is_empty() {
        files.push((with_ext(".apices"), write_apices(&inst.apices)));
    }
    for (path, text) in &files {
        fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?;
        writeln!(out, "{}", path.display()).map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))?;
    }
    Ok(())
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> CliResult<()> {
    let g = parse_graph(&read(&args.graph)?)?;
    let mut doc = serde_json::Map::new();
    let mut failures = Vec::new();
    if let Some(path) = &args.td {
        let td = parse_td(&read(path)?)?;
        let report = validate_td(&g, &td, args.k);
        failures.extend(report.failures.iter().cloned());
        doc.insert(
            "td".into(),
            serde_json::json!({
                "passed": report.passed(),
                "bags": td.len(),
                "max_adhesion": report.max_adhesion,
                "comparable_pairs": report.comparable_pairs,
                "torso_genus": report.torso_genus,
                "failures": report.failures,
            }),
        );
    }
    if let Some(path) = &args.division {
        let apices = match &args.apices {
            Some(p) => parse_apices(&read(p)?, g.n())?,
            None => Vec::new(),
        };
        let div = load_division(&read(path)?, &g, &apices)?;
        let report = validate_division(&g, &div, args.r);
        failures.extend(report.failures.iter().cloned());
        doc.insert(
            "division".into(),
            serde_json::json!({
                "passed": report.passed(),
                "regions": div.len(),
                "boundary_sum": report.boundary_sum,
                "max_region": report.max_region,
                "failures": report.failures,
            }),
        );
    }
    doc.insert("passed".into(), serde_json::Value::Bool(failures.is_empty()));
    emit(args.output.as_deref(), &format!("{}\n", serde_json::Value::Object(doc)), out)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failures.join("; ")))
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Ecc(args) => cmd_ecc(args, out).map(|_| ()),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Profiles(args) => cmd_profiles(args, out),
        Command::Bench(args) => cmd_bench(args, out),
        Command::Gen(args) => cmd_gen(args, out),
        Command::Validate(args) => cmd_validate(args, out),
    }
}

//! Batch experiment harness: typed configs, one runner per command, and
//! deterministic JSON/CSV artifacts.
//!
//! A config is a JSON object `{command, params, seed, output}`. `seed`
//! defaults to 0 and `output` to JSON on stdout.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::adversary::{
    choice_lower_bound, color_budget, default_epsilon, monte_carlo_choosability, proof_quantities,
    theorem_regime_applies, AdversaryParams, MAX_MONTE_CARLO_VERTICES,
};
use crate::arith::{binomial_u128, RationalPair};
use crate::choosability::{choice_number, exact_ch_report};
use crate::coloring::{chromatic_number, greedy_min_element_coloring, is_proper};
use crate::cover::{
    covering_number, pad_descriptor, random_intersecting_family, structural_cover, verify_cover,
};
use crate::error::{Error, Result};
use crate::random_map::{
    choice_upper_bound, run_trials, trial_list_size, trial_rng, DEFAULT_MAX_ITERS,
};
use crate::setfam::{
    build_kneser, build_schrijver_vertices, GroundParams, Hypergraph, KSet, SetFamily,
};
use crate::turan::{kns_bound_report, min_edges_for_alpha, turan_count_bound};

/// Overrides the directory of every output file.
pub const OUT_DIR_ENV: &str = "KNESER_OUT_DIR";

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// `None` writes to stdout unless the directory override is set.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_s() -> u32 {
    3
}

fn default_true() -> bool {
    true
}

fn default_trials() -> u64 {
    100
}

fn default_max_iters() -> u64 {
    DEFAULT_MAX_ITERS
}

fn default_one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildParams {
    pub n: u32,
    pub k: u32,
    #[serde(default)]
    pub schrijver: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsParams {
    pub n_min: u32,
    pub n_max: u32,
    /// Fixed k; all `1 ≤ k ≤ n/2` when absent.
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default = "default_true")]
    pub exact_ch: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreedyParams {
    pub n: u32,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorRandomParams {
    pub n: u32,
    pub k: u32,
    /// Defaults to `⌈sharp bound⌉ + 1`.
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
    #[serde(default)]
    pub pool_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverParams {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    /// Explicit family (1-based); random families are drawn when absent.
    #[serde(default)]
    pub family: Option<Vec<Vec<u32>>>,
    #[serde(default = "default_one")]
    pub families: usize,
    #[serde(default)]
    pub max_family_size: Option<usize>,
    #[serde(default)]
    pub pad: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuranParams {
    pub n: u32,
    pub s: u32,
    #[serde(default)]
    pub q: Option<u32>,
    /// Explicit hypergraph; switches to the independence report.
    #[serde(default)]
    pub edges: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversaryConfig {
    pub n: u128,
    pub k: u64,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub u_override: Option<u128>,
    /// Monte Carlo trials on the graph itself; needs a tiny graph.
    #[serde(default)]
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactChParams {
    pub n: u32,
    pub k: u32,
    /// Defaults to `⌈paper bound⌉`.
    #[serde(default)]
    pub m_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    Build(BuildParams),
    Bounds(BoundsParams),
    ColorGreedy(GreedyParams),
    ColorRandom(ColorRandomParams),
    Cover(CoverParams),
    TuranCheck(TuranParams),
    Adversary(AdversaryConfig),
    ExactCh(ExactChParams),
}

pub const COMMAND_NAMES: [&str; 8] = [
    "build",
    "bounds",
    "color-greedy",
    "color-random",
    "cover",
    "turan-check",
    "adversary",
    "exact-ch",
];

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::Bounds(_) => "bounds",
            Command::ColorGreedy(_) => "color-greedy",
            Command::ColorRandom(_) => "color-random",
            Command::Cover(_) => "cover",
            Command::TuranCheck(_) => "turan-check",
            Command::Adversary(_) => "adversary",
            Command::ExactCh(_) => "exact-ch",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            seed: 0,
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::param(format!("config is not valid JSON: {e}")))?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let Value::Object(mut obj) = value else {
            return Err(Error::param("config must be a JSON object"));
        };
        if let Some(extra) = obj
            .keys()
            .find(|key| !matches!(key.as_str(), "command" | "params" | "seed" | "output"))
        {
            return Err(Error::param(format!("unknown config field `{extra}`")));
        }
        let name = match obj.get("command") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::param("`command` must be a string")),
            None => return Err(Error::param("missing field `command`")),
        };
        if !COMMAND_NAMES.contains(&name.as_str()) {
            return Err(Error::param(format!(
                "unknown command `{name}` (expected one of {})",
                COMMAND_NAMES.join(", ")
            )));
        }
        let seed = match obj.remove("seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::param("`seed` must be a non-negative integer"))?,
        };
        let output = match obj.remove("output") {
            None => OutputSpec::default(),
            Some(v) => {
                serde_json::from_value(v).map_err(|e| Error::param(format!("output: {e}")))?
            }
        };
        obj.entry("params")
            .or_insert_with(|| Value::Object(Map::new()));
        let command: Command = serde_json::from_value(Value::Object(obj))
            .map_err(|e| Error::param(format!("{name} params: {e}")))?;
        Ok(ExperimentConfig {
            command,
            seed,
            output,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(&self.command).expect("config serializes");
        v["seed"] = json!(self.seed);
        v["output"] = serde_json::to_value(&self.output).expect("output serializes");
        v
    }
}

/// Rendered output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub command: &'static str,
    pub json: Value,
    pub csv: Vec<u8>,
}

impl Artifact {
    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json).expect("json renders");
                out.push(b'\n');
                out
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

/// Exit status for a failed run: 2 for bad input, 3 for a broken
/// invariant, 1 for I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Param(_) | Error::Validation(_) => 2,
        Error::Invariant(_) => 3,
        Error::Io(_) => 1,
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, command: &str) -> Result<Vec<u8>> {
        let mut out = format!("# kneser-{command} v{FORMAT_VERSION}\n").into_bytes();
        let mut w = csv::Writer::from_writer(&mut out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))?;
        drop(w);
        Ok(out)
    }
}

fn cell<T: Serialize>(v: &T) -> String {
    json_cell(&serde_json::to_value(v).expect("cell serializes"))
}

fn json_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(json_cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// `quantity,value` rows for a single nested record. Arrays of records are
/// left to the JSON output.
fn flatten_record(value: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, table: &mut Table) {
        match v {
            Value::Object(map) => {
                if let (Some(num), Some(den), 2) = (map.get("num"), map.get("den"), map.len()) {
                    table.push(vec![
                        prefix.to_string(),
                        format!("{}/{}", json_cell(num), json_cell(den)),
                    ]);
                    return;
                }
                for (key, child) in map {
                    let path = if prefix.is_empty() {
                        key.clone()
                    } else {
                        format!("{prefix}.{key}")
                    };
                    walk(&path, child, table);
                }
            }
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {}
            other => table.push(vec![prefix.to_string(), json_cell(other)]),
        }
    }
    let mut table = Table::new(vec!["quantity", "value"]);
    walk("", value, &mut table);
    table
}

fn envelope(command: &str, seed: u64, result: Value) -> Value {
    json!({
        "command": command,
        "version": FORMAT_VERSION,
        "seed": seed,
        "result": result,
    })
}

/// Runs one experiment and renders both output formats.
pub fn run(config: &ExperimentConfig) -> Result<Artifact> {
    let seed = config.seed;
    let (result, table) = match &config.command {
        Command::Build(p) => run_build(p)?,
        Command::Bounds(p) => {
            let rows = bounds_table(p.n_min, p.n_max, p.k, p.s, p.exact_ch)?;
            let table = bounds_csv(&rows);
            (serde_json::to_value(&rows).expect("rows serialize"), table)
        }
        Command::ColorGreedy(p) => run_greedy(p)?,
        Command::ColorRandom(p) => run_color_random(p, seed)?,
        Command::Cover(p) => run_cover(p, seed)?,
        Command::TuranCheck(p) => run_turan(p)?,
        Command::Adversary(p) => run_adversary(p, seed)?,
        Command::ExactCh(p) => run_exact_ch(p)?,
    };
    let command = config.command.name();
    Ok(Artifact {
        command,
        csv: table.render(command)?,
        json: envelope(command, seed, result),
    })
}

/// Output file for a run: the configured path, moved into the override
/// directory when that is set. `None` means stdout.
pub fn output_path(config: &ExperimentConfig) -> Option<PathBuf> {
    let default_name = || {
        PathBuf::from(format!(
            "{}.{}",
            config.command.name(),
            config.output.format.extension()
        ))
    };
    match (env::var_os(OUT_DIR_ENV), &config.output.path) {
        (Some(dir), Some(p)) => Some(
            Path::new(&dir).join(
                p.file_name()
                    .map(PathBuf::from)
                    .unwrap_or_else(default_name),
            ),
        ),
        (Some(dir), None) => Some(Path::new(&dir).join(default_name())),
        (None, p) => p.clone(),
    }
}

/// Writes the artifact to its output file, if any, and returns the path.
pub fn write_artifact(artifact: &Artifact, config: &ExperimentConfig) -> Result<Option<PathBuf>> {
    let Some(path) = output_path(config) else {
        return Ok(None);
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    fs::write(&path, artifact.render(config.output.format))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(Some(path))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: u32,
    pub k: u32,
    pub chi: u32,
    pub upper_paper: f64,
    pub upper_sharp: f64,
    pub lower_thm2: f64,
    pub lower_thm2_applicable: bool,
    /// Exact choice number; only for at most 15 vertices and when the
    /// exhaustive search stays within its cap.
    pub ch: Option<usize>,
}

/// One row per `(n, k)` with `n_min ≤ n ≤ n_max` and `k` fixed or ranging
/// over `1..=n/2`.
pub fn bounds_table(
    n_min: u32,
    n_max: u32,
    k: Option<u32>,
    s: u32,
    exact_ch: bool,
) -> Result<Vec<BoundsRow>> {
    if n_min > n_max {
        return Err(Error::param(format!(
            "n_min = {n_min} exceeds n_max = {n_max}"
        )));
    }
    if s < 3 {
        return Err(Error::param(format!("lower bound needs s >= 3, got {s}")));
    }
    let mut pairs = Vec::new();
    for n in n_min..=n_max {
        match k {
            Some(k) => {
                GroundParams::new(n, k).check_kneser()?;
                pairs.push((n, k));
            }
            None => pairs.extend((1..=n / 2).map(|k| (n, k))),
        }
    }
    pairs
        .into_par_iter()
        .map(|(n, k)| -> Result<BoundsRow> {
            let params = GroundParams::new(n, k);
            let upper = choice_upper_bound(n, k)?;
            let small = params.vertex_count() <= MAX_MONTE_CARLO_VERTICES;
            let ch = if exact_ch && small {
                let graph = build_kneser(params)?;
                match choice_number(&graph, upper.paper_bound.ceil() as usize) {
                    Ok(found) => found.ch,
                    Err(Error::Param(_)) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            Ok(BoundsRow {
                n,
                k,
                chi: chromatic_number(params)?,
                upper_paper: upper.paper_bound,
                upper_sharp: upper.sharp_bound,
                lower_thm2: choice_lower_bound(n as f64, s),
                lower_thm2_applicable: theorem_regime_applies(n as f64, k as f64, s),
                ch,
            })
        })
        .collect()
}

fn bounds_csv(rows: &[BoundsRow]) -> Table {
    let mut t = Table::new(vec![
        "n",
        "k",
        "chi",
        "upper_paper",
        "upper_sharp",
        "lower_thm2",
        "lower_thm2_applicable",
        "ch",
    ]);
    for r in rows {
        t.push(vec![
            cell(&r.n),
            cell(&r.k),
            cell(&r.chi),
            cell(&r.upper_paper),
            cell(&r.upper_sharp),
            cell(&r.lower_thm2),
            cell(&r.lower_thm2_applicable),
            cell(&r.ch),
        ]);
    }
    t
}

fn run_build(p: &BuildParams) -> Result<(Value, Table)> {
    let params = GroundParams::new(p.n, p.k);
    let graph = build_kneser(params)?;
    let (vertices, edges): (Vec<KSet>, Vec<(usize, usize)>) = if p.schrijver {
        let stable = build_schrijver_vertices(params)?;
        let vs = stable.members().to_vec();
        let mut es = Vec::new();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if vs[i].is_disjoint(&vs[j]) {
                    es.push((i, j));
                }
            }
        }
        (vs, es)
    } else {
        (graph.vertices.clone(), graph.edges.clone())
    };
    let mut t = Table::new(vec!["kind", "a", "b"]);
    for (i, v) in vertices.iter().enumerate() {
        t.push(vec!["vertex".into(), i.to_string(), cell(v)]);
    }
    for (a, b) in &edges {
        t.push(vec!["edge".into(), a.to_string(), b.to_string()]);
    }
    let result = json!({
        "n": p.n,
        "k": p.k,
        "schrijver": p.schrijver,
        "vertex_count": vertices.len(),
        "edge_count": edges.len(),
        "vertices": vertices,
        "edges": edges,
    });
    Ok((result, t))
}

fn run_greedy(p: &GreedyParams) -> Result<(Value, Table)> {
    let params = GroundParams::new(p.n, p.k);
    let graph = build_kneser(params)?;
    let coloring = greedy_min_element_coloring(params)?;
    let proper = is_proper(&graph, &coloring)?;
    let mut t = Table::new(vec!["vertex", "set", "color"]);
    for (i, (v, c)) in graph.vertices.iter().zip(&coloring.assignment).enumerate() {
        t.push(vec![i.to_string(), cell(v), cell(c)]);
    }
    let result = json!({
        "n": p.n,
        "k": p.k,
        "chi": chromatic_number(params)?,
        "colors_used": coloring.distinct_colors(),
        "proper": proper,
        "vertices": graph.vertices,
        "coloring": coloring,
    });
    Ok((result, t))
}

fn run_color_random(p: &ColorRandomParams, seed: u64) -> Result<(Value, Table)> {
    let params = GroundParams::new(p.n, p.k);
    params.check_kneser()?;
    let m = match p.m {
        Some(m) => m,
        None => trial_list_size(p.n, p.k)?,
    };
    let report = run_trials(params, m, p.trials, p.max_iters, seed, p.pool_size)?;
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["max_iters"] = json!(p.max_iters);
    value["single_draw_failure_rate"] = json!(report.single_draw_failure_rate());
    let table = flatten_record(&value);
    Ok((value, table))
}

fn run_cover(p: &CoverParams, seed: u64) -> Result<(Value, Table)> {
    let families: Vec<SetFamily> = match &p.family {
        Some(lists) => vec![SetFamily::from_lists(p.n, lists, Some(p.k))?],
        None => {
            GroundParams::new(p.n, p.k).check_subsets()?;
            let cap = p.max_family_size.unwrap_or(usize::MAX);
            (0..p.families as u64)
                .map(|i| random_intersecting_family(p.n, p.k, cap, &mut trial_rng(seed, i)))
                .collect::<Result<_>>()?
        }
    };
    let mut t = Table::new(vec![
        "family",
        "size",
        "tau",
        "type",
        "cover_size",
        "verified",
    ]);
    let mut records = Vec::new();
    for (i, family) in families.iter().enumerate() {
        let tau = covering_number(family);
        let mut d = structural_cover(family, p.s)?;
        if p.pad {
            d = pad_descriptor(&d, p.n, p.k)?;
        }
        let verified = verify_cover(family, &d);
        let cover_size = match (d.blocking_set(), d.s_sets()) {
            (Some(i), _) => i.len() as usize,
            (_, Some(g)) => g.len(),
            _ => unreachable!("descriptor is type I or II"),
        };
        let kind = if d.is_type_i() { "I" } else { "II" };
        t.push(vec![
            i.to_string(),
            family.len().to_string(),
            tau.size.to_string(),
            kind.into(),
            cover_size.to_string(),
            verified.to_string(),
        ]);
        records.push(json!({
            "family": family,
            "tau": tau.size,
            "tau_witness": tau.witness,
            "descriptor": d,
            "verified": verified,
        }));
    }
    let result = json!({"n": p.n, "k": p.k, "s": p.s, "families": records});
    Ok((result, t))
}

fn run_turan(p: &TuranParams) -> Result<(Value, Table)> {
    if let Some(edges) = &p.edges {
        let family = SetFamily::from_lists(p.n, edges, Some(p.s))?;
        let h = Hypergraph::on_full_ground(p.n, p.s, family)?;
        let report = kns_bound_report(&h);
        let value = serde_json::to_value(&report).expect("report serializes");
        let table = flatten_record(&value);
        return Ok((value, table));
    }
    let qs: Vec<u32> = match p.q {
        Some(q) => vec![q],
        None => (p.s..p.n).collect(),
    };
    let mut t = Table::new(vec![
        "n",
        "s",
        "q",
        "min_edges",
        "bound",
        "bound_value",
        "meets_bound",
    ]);
    let mut rows = Vec::new();
    for q in qs {
        let min = min_edges_for_alpha(p.n, p.s, q)?;
        let bound = turan_count_bound(p.n, p.s, q);
        let pair = bound.as_ref().map(RationalPair::from);
        let value = bound.as_ref().and_then(ToPrimitive::to_f64);
        let meets = bound
            .as_ref()
            .map(|b| BigRational::from_integer(min.into()) >= *b);
        t.push(vec![
            cell(&p.n),
            cell(&p.s),
            cell(&q),
            cell(&min),
            pair.as_ref()
                .map(|r| format!("{}/{}", r.num, r.den))
                .unwrap_or_default(),
            cell(&value),
            cell(&meets),
        ]);
        rows.push(json!({
            "n": p.n,
            "s": p.s,
            "q": q,
            "min_edges": min,
            "bound": pair,
            "bound_value": value,
            "meets_bound": meets,
        }));
    }
    Ok((Value::Array(rows), t))
}

fn run_adversary(p: &AdversaryConfig, seed: u64) -> Result<(Value, Table)> {
    let u = match p.u_override {
        Some(u) => u,
        None => color_budget(p.n, p.k, p.s)?,
    };
    let params = AdversaryParams::with(
        p.n,
        p.k,
        p.s,
        p.epsilon.unwrap_or_else(|| default_epsilon(p.s)),
        u,
    )?;
    let quantities = proof_quantities(&params)?;
    let mut value = json!({ "quantities": quantities });
    if p.trials > 0 {
        let vertices = binomial_u128(p.n.min(u64::MAX as u128) as u64, p.k);
        if vertices > MAX_MONTE_CARLO_VERTICES || u > u64::MAX as u128 {
            return Err(Error::param(format!(
                "Monte Carlo needs at most {MAX_MONTE_CARLO_VERTICES} vertices, KG({}, {}) has {vertices}",
                p.n, p.k
            )));
        }
        let mc = monte_carlo_choosability(p.n as u32, p.k as u32, u as u64, p.trials, seed)?;
        value["monte_carlo"] = serde_json::to_value(&mc).expect("report serializes");
    }
    let table = flatten_record(&value);
    Ok((value, table))
}

fn run_exact_ch(p: &ExactChParams) -> Result<(Value, Table)> {
    let params = GroundParams::new(p.n, p.k);
    params.check_kneser()?;
    let m_max = match p.m_max {
        Some(m) => m,
        None => choice_upper_bound(p.n, p.k)?.paper_bound.ceil() as usize,
    };
    let graph = build_kneser(params)?;
    let report = exact_ch_report(&graph, m_max)?;
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["m_max"] = json!(m_max);
    let table = flatten_record(&value);
    Ok((value, table))
}

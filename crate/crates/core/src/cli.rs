//! Command-line driver: dataset validation, per-specialization reports in
//! JSON or text, and the golden regression corpus.
//!
//! Exit codes: 0 success, 1 a computation or check failed, 2 the command
//! could not start (no datasets, missing golden file, bad q spec).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::basicsets::{self, BasicSetDiag, BasicSetsError, Conj2Block};
use crate::blocks::{self, Block, BlockError, LambdaPart};
use crate::decomp::{self, DecompError, DecompositionMatrix, WordBasis};
use crate::exactnum::{Cyclotomic, RootOfUnity};
use crate::heckedata::{load_dataset, validate_dataset, DataError, Dataset};
use crate::speceng::{critical_orders, spec_report, Specialization};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("no datasets found in {dir}")]
    NoDatasets { dir: String },
    #[error("missing golden file {path}")]
    MissingGolden { path: String },
    #[error("unknown group {name}")]
    UnknownGroup { name: String },
    #[error("unparseable q specification {spec:?} (expected zetaN, zetaN^k, E(N)^k, 1, or -1)")]
    BadQSpec { spec: String },
    #[error("golden file {path}: {source}")]
    GoldenParse {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Blocks(#[from] BlockError),
    #[error(transparent)]
    BasicSets(#[from] BasicSetsError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoDatasets { .. }
            | CliError::MissingGolden { .. }
            | CliError::BadQSpec { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "heckedec",
    version,
    about = "Exact decomposition matrices, blocks, and basic sets for rank-2 cyclotomic Hecke algebras at roots of unity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args)]
pub struct CaseOpts {
    /// Directory holding the dataset JSON files
    #[arg(long, default_value = "data")]
    pub data_dir: PathBuf,
    /// Group name, e.g. G4 or G12
    #[arg(long)]
    pub group: String,
    /// Specialization point: zetaN, zetaN^k, E(N)^k, 1, or -1
    #[arg(long)]
    pub q: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cap on the word-basis length search
    #[arg(long, default_value_t = 12)]
    pub words_maxlen: u32,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run the structural validator on every dataset
    Validate {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the critical specialization orders of each dataset
    Orders {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        /// Restrict to one group
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Full report for one specialization: matrix, blocks, basic sets,
    /// certificates, conjecture audits
    Decompose {
        #[command(flatten)]
        opts: CaseOpts,
        /// Include wall-clock timings in the report (off by default so
        /// output is byte-reproducible)
        #[arg(long)]
        timings: bool,
    },
    /// Block partition of one specialization
    Blocks {
        #[command(flatten)]
        opts: CaseOpts,
    },
    /// Canonical and optimal basic sets of one specialization
    BasicSets {
        #[command(flatten)]
        opts: CaseOpts,
    },
    /// Conjecture audits of one specialization
    Conjectures {
        #[command(flatten)]
        opts: CaseOpts,
    },
    /// Recompute every record of the golden corpus and compare
    Golden {
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        /// Restrict to one group
        #[arg(long)]
        group: Option<String>,
        /// Check records on worker threads; output order is unchanged
        #[arg(long)]
        parallel: bool,
        /// Cap on the word-basis length search
        #[arg(long, default_value_t = 12)]
        words_maxlen: u32,
    },
}

pub fn parse_q_spec(s: &str) -> Result<RootOfUnity, CliError> {
    let bad = || CliError::BadQSpec { spec: s.to_string() };
    let t = s.trim();
    match t {
        "1" => return Ok(RootOfUnity::new(1, 0)),
        "-1" => return Ok(RootOfUnity::new(2, 1)),
        _ => {}
    }
    let (base, exp) = match t.split_once('^') {
        Some((b, e)) => (b, Some(e)),
        None => (t, None),
    };
    let order: u32 = if let Some(r) = base.strip_prefix("zeta") {
        r.parse().map_err(|_| bad())?
    } else if let Some(r) = base.strip_prefix("E(").and_then(|r| r.strip_suffix(')')) {
        r.parse().map_err(|_| bad())?
    } else {
        return Err(bad());
    };
    if order == 0 {
        return Err(bad());
    }
    let k: i64 = match exp {
        Some(e) => e.parse().map_err(|_| bad())?,
        None => 1,
    };
    Ok(RootOfUnity::new(order, k))
}

// ---------- reports ----------

#[derive(Serialize)]
pub struct Timings {
    pub word_basis_ms: u64,
    pub matrix_ms: u64,
    pub total_ms: u64,
}

#[derive(Serialize)]
pub struct BasicSetReport {
    pub canonical: Option<BTreeMap<String, String>>,
    pub canonical_diag: Option<BasicSetDiag>,
    pub optimal: Option<BTreeMap<String, String>>,
    pub optimal_diag: Option<BasicSetDiag>,
}

#[derive(Serialize)]
pub struct ConjectureReport {
    /// Per column; absent for semisimple specializations.
    pub lemma_gr: Option<BTreeMap<String, bool>>,
    pub conj1: BTreeMap<String, bool>,
    pub conj2: Vec<Conj2Block>,
}

#[derive(Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub group: String,
    pub q: String,
    pub spec: Specialization,
    pub schur_values: BTreeMap<String, Cyclotomic>,
    pub defect_zero: Vec<String>,
    pub semisimple: bool,
    pub matrix: DecompositionMatrix,
    pub blocks: Vec<Block>,
    pub basic_sets: BasicSetReport,
    pub conjectures: ConjectureReport,
    pub lambda_partition: Option<Vec<LambdaPart>>,
    pub timings: Option<Timings>,
}

fn ms(d: std::time::Duration) -> u64 {
    u64::try_from(d.as_millis()).unwrap_or(u64::MAX)
}

/// Compute everything the reporting commands need for one specialization.
pub fn run_case(
    ds: &Dataset,
    xi: RootOfUnity,
    words_cap: u32,
    with_timings: bool,
) -> Result<RunReport, CliError> {
    let t_start = Instant::now();
    let t0 = Instant::now();
    let wb = decomp::word_basis(ds, words_cap)?;
    let word_basis_ms = ms(t0.elapsed());
    run_case_with_basis(ds, xi, &wb, with_timings.then_some((t_start, word_basis_ms)))
}

/// Same as [`run_case`] but reuses a precomputed word basis, so several
/// specializations of one algebra can share the expensive part.
pub fn run_case_with_basis(
    ds: &Dataset,
    xi: RootOfUnity,
    wb: &decomp::WordBasis,
    timing: Option<(Instant, u64)>,
) -> Result<RunReport, CliError> {
    let spec = Specialization::from_q_root(xi, ds.group.mu_order);
    let rep = spec_report(ds, &spec);

    let t0 = Instant::now();
    let dm = decomp::decomposition_matrix(ds, &spec, wb)?;
    let matrix_ms = ms(t0.elapsed());

    let bl = blocks::block_partition(&dm);
    let (canonical, canonical_diag) = basicsets::canonical_basic_set(ds, &dm)?;
    let (optimal, optimal_diag) = basicsets::optimal_basic_set(ds, &dm)?;

    let (p, _) = basicsets::lcm_poincare(ds)?;
    let degs = basicsets::generic_degrees(ds, &p)?;
    let lemma_gr = if dm.semisimple {
        None
    } else {
        let degs_at: BTreeMap<String, Cyclotomic> = degs
            .iter()
            .map(|(l, d)| (l.clone(), d.eval_root(&spec.xi)))
            .collect();
        Some(basicsets::lemma_gr_columns(
            &degs_at, &dm.rows, &dm.cols, &dm.entries,
        ))
    };
    let conj1 = basicsets::conj1(&dm, &degs, &p)?;
    let conj2 = basicsets::conj2(ds, &bl, &spec.xi)?;

    let central = blocks::good_central(ds)?;
    let dz_set: BTreeSet<String> = dm.defect_zero.iter().cloned().collect();
    let lambda_partition = central
        .as_ref()
        .map(|tab| blocks::lambda_partition(ds, tab, &spec.xi, &dz_set));
    if let Some(tab) = &central {
        for b in &bl {
            let vals: Vec<Cyclotomic> = b
                .rows
                .iter()
                .filter(|l| !dz_set.contains(*l))
                .map(|l| tab.values[l.as_str()].eval_root(&spec.xi))
                .collect();
            assert!(
                vals.windows(2).all(|w| (&w[0] - &w[1]).is_zero()),
                "central character linkage within a block"
            );
        }
    }

    Ok(RunReport {
        format_version: FORMAT_VERSION,
        group: ds.group.name.clone(),
        q: spec.xi.to_string(),
        spec,
        schur_values: rep.schur_values,
        defect_zero: dm.defect_zero.clone(),
        semisimple: dm.semisimple,
        matrix: dm,
        blocks: bl,
        basic_sets: BasicSetReport {
            canonical,
            canonical_diag,
            optimal,
            optimal_diag,
        },
        conjectures: ConjectureReport {
            lemma_gr,
            conj1,
            conj2,
        },
        lambda_partition,
        timings: timing.map(|(t_start, word_basis_ms)| Timings {
            word_basis_ms,
            matrix_ms,
            total_ms: ms(t_start.elapsed()),
        }),
    })
}

// ---------- golden corpus ----------

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenBlock {
    pub members: Vec<String>,
    pub shape: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRecord {
    pub group: String,
    pub q_order: u32,
    #[serde(default)]
    pub q_value_hint: Option<String>,
    pub blocks: Vec<GoldenBlock>,
    pub optimal_set_note: String,
}

/// Mismatch descriptions for one golden record; empty means the record
/// reproduces.
pub fn check_golden_record(
    ds: &Dataset,
    wb: &WordBasis,
    rec: &GoldenRecord,
) -> Result<Vec<String>, CliError> {
    let xi = RootOfUnity::new(rec.q_order, 1);
    let spec = Specialization::from_q_root(xi, ds.group.mu_order);
    let dm = decomp::decomposition_matrix(ds, &spec, wb)?;
    let bl = blocks::block_partition(&dm);
    let mut bad = Vec::new();
    for gb in &rec.blocks {
        let want: BTreeSet<&String> = gb.members.iter().collect();
        let Some(b) = bl
            .iter()
            .find(|b| b.cols.iter().collect::<BTreeSet<_>>() == want)
        else {
            bad.push(format!(
                "block [{}]: no block with these columns",
                gb.members.join(" ")
            ));
            continue;
        };
        if b.cols != gb.members {
            bad.push(format!(
                "block [{}]: column order is [{}]",
                gb.members.join(" "),
                b.cols.join(" ")
            ));
        }
        if gb.shape != "paren" && gb.shape != "doubleparen-other" && b.shape.name() != gb.shape {
            bad.push(format!(
                "block [{}]: shape mismatch: want {} got {}",
                gb.members.join(" "),
                gb.shape,
                b.shape.name()
            ));
        }
    }
    let (opt, _) = basicsets::optimal_basic_set(ds, &dm)?;
    match opt {
        None => bad.push("no optimal basic set".to_string()),
        Some(opt) => {
            let want: BTreeSet<String> = rec
                .blocks
                .iter()
                .flat_map(|b| b.members.iter().cloned())
                .chain(dm.defect_zero.iter().cloned())
                .collect();
            let got: BTreeSet<String> = opt.values().cloned().collect();
            if want != got {
                bad.push(format!(
                    "optimal set mismatch: want {{{}}} got {{{}}}",
                    want.iter().cloned().collect::<Vec<_>>().join(" "),
                    got.iter().cloned().collect::<Vec<_>>().join(" ")
                ));
            }
        }
    }
    Ok(bad)
}

// ---------- dataset discovery ----------

fn list_dataset_paths(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let no_data = || CliError::NoDatasets {
        dir: dir.display().to_string(),
    };
    let rd = std::fs::read_dir(dir).map_err(|_| no_data())?;
    let mut paths: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().map(|x| x == "json").unwrap_or(false)
                && !p
                    .file_name()
                    .and_then(|n| n.to_str())
                    .map(|n| n.ends_with(".golden.json"))
                    .unwrap_or(false)
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(no_data());
    }
    Ok(paths)
}

fn load_all(dir: &Path) -> Result<Vec<(PathBuf, Dataset)>, CliError> {
    list_dataset_paths(dir)?
        .into_iter()
        .map(|p| load_dataset(&p).map(|ds| (p, ds)).map_err(CliError::from))
        .collect()
}

fn find_group(dir: &Path, name: &str) -> Result<(PathBuf, Dataset), CliError> {
    load_all(dir)?
        .into_iter()
        .find(|(_, ds)| ds.group.name == name)
        .ok_or(CliError::UnknownGroup {
            name: name.to_string(),
        })
}

// ---------- text rendering ----------

fn witness_text(witness: &BTreeMap<String, u32>) -> String {
    let terms: Vec<String> = witness
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(l, &n)| if n == 1 { l.clone() } else { format!("{n}*{l}") })
        .collect();
    terms.join(" + ")
}

fn matrix_text(dm: &DecompositionMatrix, bl: &[Block]) -> String {
    // columns in block order; blocks separated by a bar
    let col_groups: Vec<Vec<usize>> = bl
        .iter()
        .map(|b| {
            b.cols
                .iter()
                .map(|c| dm.cols.iter().position(|x| x == c).expect("known column"))
                .collect()
        })
        .collect();
    let label_w = dm.rows.iter().map(|l| l.len()).max().unwrap_or(0);
    let col_w: Vec<usize> = dm.cols.iter().map(|c| c.len()).collect();
    let mut out = String::new();
    let mut header = format!("{:label_w$}", "");
    for (gi, g) in col_groups.iter().enumerate() {
        header.push_str(if gi == 0 { "  " } else { " | " });
        let names: Vec<String> = g.iter().map(|&j| dm.cols[j].clone()).collect();
        header.push_str(&names.join(" "));
    }
    out.push_str(header.trim_end());
    out.push('\n');
    for (i, l) in dm.rows.iter().enumerate() {
        let mut line = format!("{l:label_w$}");
        for (gi, g) in col_groups.iter().enumerate() {
            line.push_str(if gi == 0 { "  " } else { " | " });
            let cells: Vec<String> = g
                .iter()
                .map(|&j| {
                    let e = dm.entries[i][j];
                    let s = if e == 0 { ".".to_string() } else { e.to_string() };
                    format!("{s:>w$}", w = col_w[j])
                })
                .collect();
            line.push_str(&cells.join(" "));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn case_header(r: &RunReport) -> String {
    let mut out = format!("{} at q = {}\n", r.group, r.q);
    out.push_str(&format!("semisimple: {}\n", r.semisimple));
    out.push_str(&format!(
        "defect zero: {}\n",
        if r.defect_zero.is_empty() {
            "none".to_string()
        } else {
            r.defect_zero.join(" ")
        }
    ));
    out
}

fn blocks_text(bl: &[Block]) -> String {
    let mut out = String::from("blocks:\n");
    for (i, b) in bl.iter().enumerate() {
        out.push_str(&format!(
            "  {}: rows [{}] cols [{}] shape {}\n",
            i + 1,
            b.rows.join(" "),
            b.cols.join(" "),
            b.shape.name()
        ));
    }
    out
}

fn basic_sets_text(bs: &BasicSetReport) -> String {
    let mut out = String::new();
    match &bs.canonical {
        Some(m) => {
            let parts: Vec<String> = m.iter().map(|(c, l)| format!("{c} -> {l}")).collect();
            out.push_str(&format!("canonical basic set: {}\n", parts.join(", ")));
        }
        None => out.push_str(&format!(
            "canonical basic set: none ({})\n",
            bs.canonical_diag
                .as_ref()
                .map(|d| d.reason.clone())
                .unwrap_or_default()
        )),
    }
    match &bs.optimal {
        Some(m) => {
            let parts: Vec<String> = m.iter().map(|(c, l)| format!("{c} -> {l}")).collect();
            out.push_str(&format!("optimal basic set: {}\n", parts.join(", ")));
        }
        None => out.push_str(&format!(
            "optimal basic set: none ({})\n",
            bs.optimal_diag
                .as_ref()
                .map(|d| d.reason.clone())
                .unwrap_or_default()
        )),
    }
    out
}

fn conjectures_text(c: &ConjectureReport) -> String {
    let mut out = String::new();
    match &c.lemma_gr {
        None => out.push_str("lemma GR: skipped (semisimple)\n"),
        Some(m) => {
            let failing: Vec<&String> =
                m.iter().filter(|(_, &ok)| !ok).map(|(c, _)| c).collect();
            if failing.is_empty() {
                out.push_str("lemma GR: holds for every column\n");
            } else {
                out.push_str(&format!(
                    "lemma GR: FAILS at {}\n",
                    failing.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")
                ));
            }
        }
    }
    let c1_bad: Vec<&String> = c.conj1.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k).collect();
    if c1_bad.is_empty() {
        out.push_str("vanishing-order sharpness: holds for every column\n");
    } else {
        out.push_str(&format!(
            "vanishing-order sharpness: FAILS at {}\n",
            c1_bad.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")
        ));
    }
    for b in &c.conj2 {
        out.push_str(&format!(
            "block ratios at [{}]: {} B+ [{}] B- [{}]\n",
            b.members.join(" "),
            if b.holds { "real and nonzero" } else { "FAIL" },
            b.b_plus.join(" "),
            b.b_minus.join(" ")
        ));
    }
    out
}

fn certificates_text(dm: &DecompositionMatrix) -> String {
    let mut out = String::from("certificates:\n");
    for l in &dm.rows {
        let line = match &dm.certificates[l] {
            crate::decomp::Certificate::Irreducible { reason } => format!(
                "irreducible ({})",
                serde_json::to_value(reason)
                    .expect("enum serializes")
                    .as_str()
                    .expect("string tag")
            ),
            crate::decomp::Certificate::Reducible { witness } => {
                format!("reducible = {}", witness_text(witness))
            }
            crate::decomp::Certificate::Undetermined => "undetermined".to_string(),
        };
        out.push_str(&format!("  {l}: {line}\n"));
    }
    out
}

fn lambda_text(parts: &Option<Vec<LambdaPart>>) -> String {
    match parts {
        None => String::from("central scalar partition: no verified central element\n"),
        Some(ps) => {
            let mut out = String::from("central scalar partition:\n");
            for p in ps {
                out.push_str(&format!("  {} : [{}]\n", p.value, p.labels.join(" ")));
            }
            out
        }
    }
}

fn report_text(r: &RunReport) -> String {
    let mut out = case_header(r);
    out.push_str(&format!(
        "word basis: {} words up to length {}\n",
        r.matrix.word_basis.len(),
        r.matrix.word_basis_len
    ));
    out.push('\n');
    out.push_str(&matrix_text(&r.matrix, &r.blocks));
    out.push('\n');
    out.push_str(&blocks_text(&r.blocks));
    out.push_str(&certificates_text(&r.matrix));
    out.push_str(&basic_sets_text(&r.basic_sets));
    out.push_str(&conjectures_text(&r.conjectures));
    out.push_str(&lambda_text(&r.lambda_partition));
    if !r.matrix.ties.is_empty() {
        out.push_str(&format!(
            "naming ties: {}\n",
            serde_json::to_string(&r.matrix.ties).expect("serializes")
        ));
    }
    if let Some(cand) = &r.matrix.search_candidates {
        out.push_str(&format!(
            "search candidates: {}\n",
            serde_json::to_string(cand).expect("serializes")
        ));
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

// ---------- subcommand bodies ----------

fn cmd_validate(data_dir: &Path, format: Format) -> Result<(i32, String), CliError> {
    let all = load_all(data_dir)?;
    let mut out = String::new();
    let mut pass = true;
    let mut json = serde_json::Map::new();
    for (path, ds) in &all {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or("<dataset>")
            .to_string();
        let report = validate_dataset(ds);
        pass &= report.all_pass();
        match format {
            Format::Text => {
                out.push_str(&format!("{} ({}):\n", name, ds.group.name));
                for c in &report.checks {
                    out.push_str(&format!(
                        "  {}: {}{}\n",
                        c.name,
                        if c.pass { "ok" } else { "FAIL" },
                        if c.pass || c.detail.is_empty() {
                            String::new()
                        } else {
                            format!(" ({})", c.detail)
                        }
                    ));
                }
            }
            Format::Json => {
                json.insert(
                    name,
                    serde_json::json!({
                        "group": ds.group.name,
                        "checks": report.checks,
                    }),
                );
            }
        }
    }
    if format == Format::Json {
        out = to_json(&serde_json::json!({
            "format_version": FORMAT_VERSION,
            "datasets": serde_json::Value::Object(json),
            "all_pass": pass,
        }));
    }
    Ok((i32::from(!pass), out))
}

fn cmd_orders(
    data_dir: &Path,
    group: Option<&str>,
    format: Format,
) -> Result<(i32, String), CliError> {
    let mut all = load_all(data_dir)?;
    if let Some(g) = group {
        all.retain(|(_, ds)| ds.group.name == g);
        if all.is_empty() {
            return Err(CliError::UnknownGroup {
                name: g.to_string(),
            });
        }
    }
    let orders: BTreeMap<String, Vec<u32>> = all
        .iter()
        .map(|(_, ds)| {
            (
                ds.group.name.clone(),
                critical_orders(ds).into_iter().collect(),
            )
        })
        .collect();
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            for (g, os) in &orders {
                s.push_str(&format!(
                    "{g}: {}\n",
                    os.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                ));
            }
            s
        }
        Format::Json => to_json(&serde_json::json!({
            "format_version": FORMAT_VERSION,
            "critical_orders": orders,
        })),
    };
    Ok((0, out))
}

fn case_report(opts: &CaseOpts, timings: bool) -> Result<RunReport, CliError> {
    let (_, ds) = find_group(&opts.data_dir, &opts.group)?;
    let xi = parse_q_spec(&opts.q)?;
    run_case(&ds, xi, opts.words_maxlen, timings)
}

fn cmd_decompose(opts: &CaseOpts, timings: bool) -> Result<(i32, String), CliError> {
    let r = case_report(opts, timings)?;
    let out = match opts.format {
        Format::Json => to_json(&r),
        Format::Text => report_text(&r),
    };
    Ok((0, out))
}

fn cmd_blocks(opts: &CaseOpts) -> Result<(i32, String), CliError> {
    let r = case_report(opts, false)?;
    let out = match opts.format {
        Format::Json => to_json(&serde_json::json!({
            "format_version": FORMAT_VERSION,
            "group": r.group,
            "q": r.q,
            "blocks": r.blocks,
            "lambda_partition": r.lambda_partition,
        })),
        Format::Text => {
            let mut s = case_header(&r);
            s.push_str(&blocks_text(&r.blocks));
            s.push_str(&lambda_text(&r.lambda_partition));
            s
        }
    };
    Ok((0, out))
}

fn cmd_basic_sets(opts: &CaseOpts) -> Result<(i32, String), CliError> {
    let r = case_report(opts, false)?;
    let out = match opts.format {
        Format::Json => to_json(&serde_json::json!({
            "format_version": FORMAT_VERSION,
            "group": r.group,
            "q": r.q,
            "canonical": r.basic_sets.canonical,
            "canonical_diag": r.basic_sets.canonical_diag,
            "optimal": r.basic_sets.optimal,
            "optimal_diag": r.basic_sets.optimal_diag,
        })),
        Format::Text => {
            let mut s = case_header(&r);
            s.push_str(&basic_sets_text(&r.basic_sets));
            s
        }
    };
    Ok((0, out))
}

fn cmd_conjectures(opts: &CaseOpts) -> Result<(i32, String), CliError> {
    let r = case_report(opts, false)?;
    let out = match opts.format {
        Format::Json => to_json(&serde_json::json!({
            "format_version": FORMAT_VERSION,
            "group": r.group,
            "q": r.q,
            "lemma_gr": r.conjectures.lemma_gr,
            "conj1": r.conjectures.conj1,
            "conj2": r.conjectures.conj2,
        })),
        Format::Text => {
            let mut s = case_header(&r);
            s.push_str(&conjectures_text(&r.conjectures));
            s
        }
    };
    Ok((0, out))
}

fn cmd_golden(
    data_dir: &Path,
    group: Option<&str>,
    parallel: bool,
    words_cap: u32,
) -> Result<(i32, String), CliError> {
    let mut all = load_all(data_dir)?;
    if let Some(g) = group {
        all.retain(|(_, ds)| ds.group.name == g);
        if all.is_empty() {
            return Err(CliError::UnknownGroup {
                name: g.to_string(),
            });
        }
    }
    // one (dataset, word basis, records) bundle per dataset file
    let mut work: Vec<(&Dataset, WordBasis, Vec<GoldenRecord>)> = Vec::new();
    for (path, ds) in &all {
        let gpath = path.with_extension("golden.json");
        let text = std::fs::read_to_string(&gpath).map_err(|_| CliError::MissingGolden {
            path: gpath.display().to_string(),
        })?;
        let records: Vec<GoldenRecord> =
            serde_json::from_str(&text).map_err(|e| CliError::GoldenParse {
                path: gpath.display().to_string(),
                source: e,
            })?;
        let wb = decomp::word_basis(ds, words_cap)?;
        work.push((ds, wb, records));
    }
    let mut flat: Vec<(&Dataset, &WordBasis, &GoldenRecord)> = Vec::new();
    for (ds, wb, records) in &work {
        for rec in records {
            flat.push((ds, wb, rec));
        }
    }
    let results: Vec<Result<Vec<String>, CliError>> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = flat
                .iter()
                .map(|&(ds, wb, rec)| s.spawn(move || check_golden_record(ds, wb, rec)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("golden worker panicked"))
                .collect()
        })
    } else {
        flat.iter()
            .map(|&(ds, wb, rec)| check_golden_record(ds, wb, rec))
            .collect()
    };
    let mut out = String::new();
    let mut ok_count = 0usize;
    let mut all_ok = true;
    for ((ds, _, rec), res) in flat.iter().zip(results) {
        let mism = res?;
        let q = RootOfUnity::new(rec.q_order, 1);
        if mism.is_empty() {
            ok_count += 1;
            out.push_str(&format!("{} q = {}: ok\n", ds.group.name, q));
        } else {
            all_ok = false;
            for m in &mism {
                out.push_str(&format!("{} q = {}: MISMATCH {}\n", ds.group.name, q, m));
            }
        }
    }
    out.push_str(&format!("golden: {}/{} records ok\n", ok_count, flat.len()));
    Ok((i32::from(!all_ok), out))
}

/// Parse argv, run the command, print its report, and return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Validate { data_dir, format } => cmd_validate(data_dir, *format),
        Command::Orders {
            data_dir,
            group,
            format,
        } => cmd_orders(data_dir, group.as_deref(), *format),
        Command::Decompose { opts, timings } => cmd_decompose(opts, *timings),
        Command::Blocks { opts } => cmd_blocks(opts),
        Command::BasicSets { opts } => cmd_basic_sets(opts),
        Command::Conjectures { opts } => cmd_conjectures(opts),
        Command::Golden {
            data_dir,
            group,
            parallel,
            words_maxlen,
        } => cmd_golden(data_dir, group.as_deref(), *parallel, *words_maxlen),
    };
    match res {
        Ok((code, out)) => {
            print!("{out}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_spec_grammar() {
        assert_eq!(parse_q_spec("zeta8").unwrap(), RootOfUnity::new(8, 1));
        assert_eq!(parse_q_spec("zeta8^3").unwrap(), RootOfUnity::new(8, 3));
        assert_eq!(parse_q_spec("E(8)^3").unwrap(), RootOfUnity::new(8, 3));
        assert_eq!(parse_q_spec("E(12)").unwrap(), RootOfUnity::new(12, 1));
        assert_eq!(parse_q_spec("1").unwrap(), RootOfUnity::new(1, 0));
        assert_eq!(parse_q_spec("-1").unwrap(), RootOfUnity::new(2, 1));
        // non-primitive powers reduce to their true order
        assert_eq!(parse_q_spec("zeta8^2").unwrap(), RootOfUnity::new(4, 1));
        assert_eq!(parse_q_spec("zeta8^-1").unwrap(), RootOfUnity::new(8, 7));
        for bad in ["", "zeta", "zeta0", "E(8", "q", "zeta8^", "2"] {
            assert!(parse_q_spec(bad).is_err(), "{bad}");
        }
    }
}

//! The `ripple` command line: batch front end over the library.
//!
//! Every subcommand takes input paths, directories or glob patterns and
//! writes into `--out`. Files are processed independently on a pool of
//! `--jobs` threads and results are reported in input order, so output is
//! identical for any job count. Exit status: 0 success, 1 when any input
//! failed, 2 for usage errors.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use log::{error, info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{evaluate, filter_mesh, write_summary, ChamferMode, EvalConfig, FilterConfig, SummaryRow};
use crate::attention::{export, face_embeddings, nsca_plan, nsca_reference, window_masks, Gate, NscaParams};
use crate::decode::{write_trace, AttachMode, Decoder, Limits, ReplayProposer};
use crate::error::Error;
use crate::mesh::{io as mesh_io, prepare, HalfEdgeStructure, PrepareReport};
use crate::tokenizer::format::{read_jsonl, read_ripl, to_ripl_bytes, write_jsonl};
use crate::tokenizer::{compression_stats, detokenize, retokenize, tokenize, ControlVocab, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TokenFormat {
    Ripl,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(name = "ripple", version, about = "Topology-aligned mesh tokenization toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Quantization bins per axis.
    #[arg(long, global = true, default_value_t = 256)]
    pub bins: u32,
    /// Faces per training window.
    #[arg(long, global = true, default_value_t = 1000)]
    pub window: usize,
    /// Vocabulary file (JSON: bins, separators).
    #[arg(long, global = true)]
    pub vocab: Option<PathBuf>,
    /// Filter thresholds (JSON, missing keys keep defaults).
    #[arg(long, global = true)]
    pub filters: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Token file format written by `tokenize`.
    #[arg(long, global = true, value_enum, default_value_t = TokenFormat::Ripl)]
    pub format: TokenFormat,
    /// Output directory.
    #[arg(long, short, global = true, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare and tokenize meshes; writes token files and stats.csv.
    Tokenize { inputs: Vec<String> },
    /// Rebuild OBJ meshes from token files.
    Detokenize { inputs: Vec<String> },
    /// Check that detokenize -> sort -> tokenize reproduces each file.
    Roundtrip { inputs: Vec<String> },
    /// Frontier masks and NSCA plans per window.
    Masks {
        inputs: Vec<String>,
        #[arg(long, default_value_t = 64)]
        block_size: usize,
        #[arg(long, default_value_t = 16)]
        top_k: usize,
        #[arg(long, default_value_t = 32)]
        local_kernel: usize,
        #[arg(long, default_value_t = 16)]
        local_stride: usize,
        /// Embedding width used to score blocks for selection.
        #[arg(long, default_value_t = 32)]
        dim: usize,
    },
    /// Curation filter; writes one JSON report per mesh and summary.csv.
    Filter { inputs: Vec<String> },
    /// CD/HD/NC between a prediction and a reference mesh.
    Eval {
        pred: PathBuf,
        gt: PathBuf,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Chamfer::Squared)]
        chamfer: Chamfer,
    },
    /// Replay token streams through the decoding state machine.
    Replay {
        inputs: Vec<String>,
        /// Accept attachment through any edge, not only the first.
        #[arg(long)]
        any_edge: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Chamfer {
    Squared,
    Euclidean,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub out_dir: PathBuf,
    pub bins: u32,
    pub window: usize,
    pub vocab: ControlVocab,
    pub filters: FilterConfig,
    pub jobs: usize,
    pub seed: u64,
    pub format: TokenFormat,
}

impl JobConfig {
    pub fn from_cli(cli: &Cli) -> crate::Result<Self> {
        if cli.jobs == 0 {
            return Err(Error::InvalidConfig("--jobs must be at least 1".into()));
        }
        if cli.window == 0 {
            return Err(Error::InvalidConfig("--window must be at least 1".into()));
        }
        let vocab = match &cli.vocab {
            Some(p) => {
                let v = ControlVocab::load(p)?;
                if v.bins() != cli.bins {
                    return Err(Error::InvalidConfig(format!(
                        "vocabulary has {} bins but --bins is {}",
                        v.bins(),
                        cli.bins
                    )));
                }
                v
            }
            None => ControlVocab::new(cli.bins)?,
        };
        let mut filters = match &cli.filters {
            Some(p) => FilterConfig::load(p)?,
            None => FilterConfig::default(),
        };
        filters.bins = cli.bins;
        filters.validate()?;
        Ok(JobConfig {
            out_dir: cli.out.clone(),
            bins: cli.bins,
            window: cli.window,
            vocab,
            filters,
            jobs: cli.jobs,
            seed: cli.seed,
            format: cli.format,
        })
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> ExitCode {
    let cfg = match JobConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli.command, &cfg) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("{failed} input(s) failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e
                .downcast_ref::<Error>()
                .is_some_and(|e| matches!(e, Error::InvalidConfig(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

/// Returns the number of failed inputs.
fn dispatch(cmd: &Command, cfg: &JobConfig) -> anyhow::Result<usize> {
    fs::create_dir_all(&cfg.out_dir).with_context(|| format!("creating {}", cfg.out_dir.display()))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build()?;
    pool.install(|| match cmd {
        Command::Tokenize { inputs } => cmd_tokenize(&expand(inputs, MESH_EXT)?, cfg),
        Command::Detokenize { inputs } => cmd_detokenize(&expand(inputs, TOKEN_EXT)?, cfg),
        Command::Roundtrip { inputs } => cmd_roundtrip(&expand(inputs, ANY_EXT)?, cfg),
        Command::Masks {
            inputs,
            block_size,
            top_k,
            local_kernel,
            local_stride,
            dim,
        } => {
            let params = NscaParams {
                block_size: *block_size,
                top_k: *top_k,
                local_kernel: *local_kernel,
                local_stride: *local_stride,
            };
            params.validate()?;
            if *dim == 0 {
                return Err(Error::InvalidConfig("--dim must be positive".into()).into());
            }
            cmd_masks(&expand(inputs, ANY_EXT)?, cfg, params, *dim)
        }
        Command::Filter { inputs } => cmd_filter(&expand(inputs, MESH_EXT)?, cfg),
        Command::Eval {
            pred,
            gt,
            samples,
            chamfer,
        } => cmd_eval(pred, gt, *samples, *chamfer, cfg),
        Command::Replay { inputs, any_edge } => cmd_replay(&expand(inputs, ANY_EXT)?, cfg, *any_edge),
    })
}

const MESH_EXT: &[&str] = &["obj", "ply"];
const TOKEN_EXT: &[&str] = &["ripl", "jsonl"];
const ANY_EXT: &[&str] = &["obj", "ply", "ripl", "jsonl"];

fn has_ext(p: &Path, exts: &[&str]) -> bool {
    p.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| exts.iter().any(|x| e.eq_ignore_ascii_case(x)))
}

/// Expands globs and directories (non-recursive, filtered by extension).
/// Plain file arguments are kept as given.
pub fn expand(inputs: &[String], exts: &[&str]) -> anyhow::Result<Vec<PathBuf>> {
    if inputs.is_empty() {
        return Err(Error::InvalidConfig("no inputs given".into()).into());
    }
    let mut out = Vec::new();
    for arg in inputs {
        if arg.contains(['*', '?', '[']) {
            let mut hits: Vec<PathBuf> = glob::glob(arg)
                .map_err(|e| Error::InvalidConfig(format!("bad pattern {arg}: {e}")))?
                .filter_map(|r| r.ok())
                .filter(|p| p.is_file())
                .collect();
            hits.sort();
            if hits.is_empty() {
                warn!("pattern {arg} matched nothing");
            }
            out.extend(hits);
        } else {
            let p = PathBuf::from(arg);
            if p.is_dir() {
                let mut hits: Vec<PathBuf> = fs::read_dir(&p)?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.is_file() && has_ext(p, exts))
                    .collect();
                hits.sort();
                out.extend(hits);
            } else {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map_or_else(|| "mesh".into(), |s| s.to_string_lossy().into_owned())
}

/// Runs `f` on every input in parallel; returns results in input order and
/// logs failures.
fn for_each<T: Send>(inputs: &[PathBuf], f: impl Fn(&Path) -> anyhow::Result<T> + Sync) -> Vec<Option<T>> {
    inputs
        .par_iter()
        .map(|p| match f(p) {
            Ok(v) => {
                info!("{}: ok", p.display());
                Some(v)
            }
            Err(e) => {
                error!("{}: {e:#}", p.display());
                None
            }
        })
        .collect()
}

fn failures<T>(results: &[Option<T>]) -> usize {
    results.iter().filter(|r| r.is_none()).count()
}

fn prepare_and_tokenize(path: &Path, vocab: &ControlVocab) -> crate::Result<(TokenSequence, PrepareReport)> {
    let raw = mesh_io::load(path)?;
    let (mesh, report) = prepare(&raw, vocab.bins())?;
    Ok((tokenize(&HalfEdgeStructure::build(&mesh), vocab), report))
}

/// Loads a token file, or tokenizes a mesh file.
fn load_sequence(path: &Path, vocab: &ControlVocab) -> crate::Result<TokenSequence> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "ripl" => read_ripl(BufReader::new(File::open(path)?)),
        "jsonl" => read_jsonl(BufReader::new(File::open(path)?)),
        _ => prepare_and_tokenize(path, vocab).map(|(s, _)| s),
    }
}

#[derive(Debug, Serialize)]
struct TokenizeRow {
    mesh: String,
    faces: usize,
    tokens: usize,
    control_tokens: usize,
    tokens_per_face: f64,
    components: usize,
    max_delta: u32,
    max_root_distance: u32,
    merged_vertices: usize,
    dropped_faces: usize,
    flipped_faces: usize,
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_tokenize(inputs: &[PathBuf], cfg: &JobConfig) -> anyhow::Result<usize> {
    let results = for_each(inputs, |p| {
        let (seq, report) = prepare_and_tokenize(p, &cfg.vocab)?;
        let name = stem(p);
        let (ext, bytes) = match cfg.format {
            TokenFormat::Ripl => ("ripl", to_ripl_bytes(&seq)),
            TokenFormat::Jsonl => {
                let mut b = Vec::new();
                write_jsonl(&seq, &mut b)?;
                ("jsonl", b)
            }
        };
        fs::write(cfg.out_dir.join(format!("{name}.{ext}")), bytes)?;
        let s = compression_stats(&seq);
        Ok(TokenizeRow {
            mesh: name,
            faces: s.faces,
            tokens: s.tokens,
            control_tokens: s.control_tokens,
            tokens_per_face: s.tokens_per_face,
            components: s.components,
            max_delta: s.max_delta,
            max_root_distance: s.max_root_distance,
            merged_vertices: report.sanitize.merged_vertices(),
            dropped_faces: report.sanitize.dropped_faces(),
            flipped_faces: report.orient.flipped_faces,
        })
    });
    write_csv(&cfg.out_dir.join("stats.csv"), results.iter().flatten())?;
    Ok(failures(&results))
}

fn cmd_detokenize(inputs: &[PathBuf], cfg: &JobConfig) -> anyhow::Result<usize> {
    let results = for_each(inputs, |p| {
        let seq = load_sequence(p, &cfg.vocab)?;
        let d = detokenize(seq.tokens(), seq.vocab())?;
        mesh_io::save_obj(&d.mesh.to_raw(), cfg.out_dir.join(format!("{}.obj", stem(p))))?;
        Ok(())
    });
    Ok(failures(&results))
}

fn cmd_roundtrip(inputs: &[PathBuf], cfg: &JobConfig) -> anyhow::Result<usize> {
    let results = for_each(inputs, |p| {
        let seq = load_sequence(p, &cfg.vocab)?;
        let again = retokenize(&seq)?;
        if to_ripl_bytes(&again) != to_ripl_bytes(&seq) {
            bail!("round trip changed the token file");
        }
        Ok(())
    });
    Ok(failures(&results))
}

fn cmd_masks(inputs: &[PathBuf], cfg: &JobConfig, params: NscaParams, dim: usize) -> anyhow::Result<usize> {
    let results = for_each(inputs, |p| {
        let seq = load_sequence(p, &cfg.vocab)?;
        let name = stem(p);
        let n = seq.face_count();
        let layout = nsca_plan(n, params)?;
        let emb = face_embeddings(&seq, dim, cfg.seed);
        let mut clipped = 0;
        for (k, mask) in window_masks(&seq, cfg.window).iter().enumerate() {
            let file = |ext: &str| cfg.out_dir.join(format!("{name}.w{k:03}.{ext}"));
            fs::write(file("mask"), export::dense_bytes(mask))?;
            fs::write(file("rows"), export::supports_bytes(mask))?;
            let w = mask.window();
            let queries = emb.select_rows(w.clone());
            let out = nsca_reference(&emb, &emb, &queries, w, &layout, Gate::default())?;
            fs::write(file("nsca"), export::plan_bytes(n, params, &out.steps))?;
            clipped += mask.clipped_entries();
        }
        if clipped > 0 {
            info!("{name}: {clipped} frontier entries clipped by windowing");
        }
        Ok(())
    });
    Ok(failures(&results))
}

fn cmd_filter(inputs: &[PathBuf], cfg: &JobConfig) -> anyhow::Result<usize> {
    let results = for_each(inputs, |p| {
        let raw = mesh_io::load(p)?;
        let report = filter_mesh(&raw, &cfg.filters)?;
        let name = stem(p);
        let mut f = BufWriter::new(File::create(cfg.out_dir.join(format!("{name}.filter.json")))?);
        serde_json::to_writer_pretty(&mut f, &report)?;
        writeln!(f)?;
        Ok(SummaryRow::new(name, &report))
    });
    let rows: Vec<SummaryRow> = results.iter().flatten().cloned().collect();
    write_summary(&rows, File::create(cfg.out_dir.join("summary.csv"))?)?;
    let kept = rows.iter().filter(|r| r.passed).count();
    info!("{kept} of {} meshes passed", rows.len());
    Ok(failures(&results))
}

fn cmd_eval(pred: &Path, gt: &Path, samples: usize, chamfer: Chamfer, cfg: &JobConfig) -> anyhow::Result<usize> {
    let ecfg = EvalConfig {
        samples,
        seed: cfg.seed,
        chamfer: match chamfer {
            Chamfer::Squared => ChamferMode::Squared,
            Chamfer::Euclidean => ChamferMode::Euclidean,
        },
    };
    let m = evaluate(&mesh_io::load(pred)?, &mesh_io::load(gt)?, &ecfg)?;
    let json = serde_json::to_string_pretty(&m)?;
    println!("{json}");
    fs::write(cfg.out_dir.join(format!("{}.eval.json", stem(pred))), json + "\n")?;
    Ok(0)
}

fn cmd_replay(inputs: &[PathBuf], cfg: &JobConfig, any_edge: bool) -> anyhow::Result<usize> {
    let attach = if any_edge {
        AttachMode::AnyEdge
    } else {
        AttachMode::FirstEdge
    };
    let results = for_each(inputs, |p| {
        let seq = load_sequence(p, &cfg.vocab)?;
        let limits = Limits {
            max_faces: usize::MAX,
            ..Limits::default()
        };
        let mut d = Decoder::new(seq.vocab().clone(), attach, limits);
        let outcome = d.run(&mut ReplayProposer::new(&seq));
        let trace = BufWriter::new(File::create(cfg.out_dir.join(format!("{}.trace.jsonl", stem(p))))?);
        write_trace(d.trace(), trace)?;
        outcome?;
        let run = d.finish()?;
        if run.sequence != seq {
            bail!("replayed stream differs from the input");
        }
        Ok(())
    });
    Ok(failures(&results))
}

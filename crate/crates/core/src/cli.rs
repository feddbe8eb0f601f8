//! Command-line front end. Exit codes: 0 success or true, 1 property
//! false, 2 usage, parse, parameter or I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::bounds::{conjectured_max, frankl_rodl_bound, sperner_bound};
use crate::constructions::{acz_pair, canonical_pair, matrix_pair, CanonicalParams, MatrixVariant};
use crate::error::{Error, Result};
use crate::fam::{decode_pair, encode_pair};
use crate::family::{is_cross_intersecting, CrossPair};
use crate::search::{
    classify_extremal, enumerate_optima, hard_cap_from_env, max_product, ClassificationResult, SearchConfig,
};
use crate::spectra::analyze;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "crossint", version, about = "Exact search and verification for l-cross-intersecting pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an explicit pair and write it as `.fam`.
    Construct(ConstructArgs),
    /// Check that a `.fam` pair is cross-intersecting.
    Verify(FileArgs),
    /// Compute P_ell(n) exactly.
    Search(SearchArgs),
    /// Print the bound table for (n, ell).
    Bounds(BoundsArgs),
    /// Span dimensions, echelon structure and row classes of a pair.
    Analyze(AnalyzeArgs),
    /// Match a pair against the canonical family, or classify all optima.
    Classify(ClassifyArgs),
    /// Seeded randomized self-checks.
    #[command(hide = true)]
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Acz,
    Canonical,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Prune {
    Product,
    Dimension,
    None,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Omega,
    O1,
    O2,
}

impl From<Variant> for MatrixVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Omega => MatrixVariant::Omega,
            Variant::O1 => MatrixVariant::O1,
            Variant::O2 => MatrixVariant::O2,
        }
    }
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    /// Defaults to n.
    #[arg(long)]
    nprime: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    /// Block size k of a matrix family; defaults to the largest legal k.
    #[arg(long)]
    k: Option<usize>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct FileArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    /// Repeatable. Without it, product pruning is on and dimension pruning
    /// is on from n = 7.
    #[arg(long, value_enum)]
    prune: Vec<Prune>,
    #[arg(long)]
    all_optima: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    json: bool,
    /// Write the least witness as `.fam`.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Index of B1 in the canonical order of B; defaults to 0.
    #[arg(long)]
    b1_index: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Pair to classify. Omit and give --n and --ell to classify all optima.
    file: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
}

/// Parse `args` (including the program name) and run.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "crossint: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Construct(a) => construct(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Search(a) => search(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Analyze(a) => analyze_cmd(a, out),
        Command::Classify(a) => classify(a, out),
        Command::Selftest(a) => crate::selftest::run(a.seed, a.cases, out),
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn read_pair(path: &Path) -> Result<CrossPair> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    decode_pair(&text)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn big(x: BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn require<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("--kind {kind} needs --{flag}")))
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let (pair, extra) = match a.kind {
        Kind::Acz => (acz_pair(a.n, a.ell)?, json!({})),
        Kind::Canonical => {
            let p = CanonicalParams::new(
                a.n,
                a.ell,
                require(a.kappa, "kappa", "canonical")?,
                require(a.tau, "tau", "canonical")?,
                a.nprime.unwrap_or(a.n),
            )?;
            (canonical_pair(&p)?, json!({ "params": p }))
        }
        Kind::Matrix => {
            let v = require(a.variant, "variant", "matrix")?;
            let (m, p) = matrix_pair(v.into(), a.ell, a.n, a.k)?;
            (
                p,
                json!({
                    "variant": MatrixVariant::from(v).name(),
                    "k": m.spec.k,
                    "h": m.spec.h,
                    "b1": m.spec.b1.elements().collect::<Vec<_>>(),
                    "m_a": m.ma.to_strings(),
                    "m_b": m.mb.to_strings(),
                }),
            )
        }
    };
    let text = encode_pair(&pair);
    if let Some(path) = &a.output {
        write_file(path, &text)?;
    }
    if a.json {
        let mut v = json!({
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "n": pair.n(),
            "ell": pair.ell(),
            "size_a": pair.a().len(),
            "size_b": pair.b().len(),
            "product": pair.product() as u64,
            "cross_intersecting": pair.is_verified(),
            "pair": text,
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        emit(out, &v)?;
    } else if a.output.is_some() {
        writeln!(
            out,
            "wrote |A| = {}, |B| = {}, product {}",
            pair.a().len(),
            pair.b().len(),
            pair.product()
        )?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(EXIT_OK)
}

fn verify(a: FileArgs, out: &mut dyn Write) -> Result<i32> {
    let p = read_pair(&a.file)?;
    let ok = is_cross_intersecting(&p);
    if a.json {
        emit(
            out,
            &json!({
                "n": p.n(),
                "ell": p.ell(),
                "size_a": p.a().len(),
                "size_b": p.b().len(),
                "product": p.product() as u64,
                "cross_intersecting": ok,
                "antichain_a": p.a().is_antichain(),
                "antichain_b": p.b().is_antichain(),
            }),
        )?;
    } else {
        writeln!(out, "cross-intersecting: {ok}")?;
        writeln!(
            out,
            "n = {}, ell = {}, |A| = {}, |B| = {}, product = {}",
            p.n(),
            p.ell(),
            p.a().len(),
            p.b().len(),
            p.product()
        )?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_FALSE })
}

fn search_config(n: usize, prune: &[Prune], workers: usize) -> Result<SearchConfig> {
    let mut cfg = SearchConfig::for_n(n)
        .with_workers(workers)
        .with_hard_cap(hard_cap_from_env()?);
    if !prune.is_empty() {
        if prune.contains(&Prune::None) && prune.len() > 1 {
            return Err(Error::Parameter("--prune none cannot be combined".into()));
        }
        cfg.prune_product = prune.contains(&Prune::Product);
        cfg.prune_dimension = prune.contains(&Prune::Dimension);
    }
    Ok(cfg)
}

fn search(a: SearchArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = search_config(a.n, &a.prune, a.workers)?.with_all_optima(a.all_optima);
    let r = max_product(a.n, a.ell, &cfg)?;
    if let Some(path) = &a.output {
        write_file(path, &encode_pair(&r.witnesses[0]))?;
    }
    let conj = conjectured_max(a.n, a.ell).ok();
    let fr = frankl_rodl_bound(a.n, a.ell)?;
    if a.json {
        emit(
            out,
            &json!({
                "n": r.n,
                "ell": r.ell,
                "value": r.value,
                "conjectured_max": conj.map(big),
                "frankl_rodl": big(fr),
                "witnesses": r.witnesses.iter().map(encode_pair).collect::<Vec<_>>(),
                "optima_found": r.optima_found,
                "nodes_visited": r.nodes_visited,
                "nodes_pruned": r.nodes_pruned,
                "elapsed_ms": r.elapsed.as_secs_f64() * 1000.0,
                "prune_product": cfg.prune_product,
                "prune_dimension": cfg.prune_dimension,
                "workers": cfg.worker_count,
            }),
        )?;
    } else {
        writeln!(out, "P_{}({}) = {}", r.ell, r.n, r.value)?;
        match conj {
            Some(c) => writeln!(out, "conjectured max = {c}, frankl-rodl bound = {fr}")?,
            None => writeln!(out, "n < 2*ell: no conjectured value; upper bound = {fr}")?,
        }
        writeln!(
            out,
            "optima found = {}, nodes = {}, pruned = {}, {:.1} ms",
            r.optima_found,
            r.nodes_visited,
            r.nodes_pruned,
            r.elapsed.as_secs_f64() * 1000.0
        )?;
        for w in &r.witnesses {
            writeln!(out, "witness:")?;
            write!(out, "{}", encode_pair(w))?;
        }
    }
    Ok(EXIT_OK)
}

/// Bound values are plain JSON integers up to this `n`.
const BOUNDS_MAX_N: usize = 60;

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    if a.n == 0 || a.n > BOUNDS_MAX_N {
        return Err(Error::Parameter(format!("n = {} outside 1..={BOUNDS_MAX_N}", a.n)));
    }
    if a.ell > a.n {
        return Err(Error::Parameter(format!("ell = {} exceeds n = {}", a.ell, a.n)));
    }
    let sp = sperner_bound(a.n);
    let fr = frankl_rodl_bound(a.n, a.ell)?;
    let conj = conjectured_max(a.n, a.ell).ok();
    if a.json {
        emit(
            out,
            &json!({
                "n": a.n,
                "ell": a.ell,
                "sperner": big(sp),
                "frankl_rodl": big(fr),
                "conjectured_max": conj.clone().map(big),
                "construction_lower_bound": conj.map(big),
            }),
        )?;
    } else {
        let na = || "n/a".to_string();
        writeln!(out, "n = {}, ell = {}", a.n, a.ell)?;
        writeln!(out, "{:<26}{}", "sperner", sp)?;
        writeln!(out, "{:<26}{}", "frankl_rodl", fr)?;
        writeln!(
            out,
            "{:<26}{}",
            "conjectured_max",
            conj.as_ref().map_or_else(na, |c| c.to_string())
        )?;
        writeln!(
            out,
            "{:<26}{}",
            "construction_lower_bound",
            conj.as_ref().map_or_else(na, |c| c.to_string())
        )?;
    }
    Ok(EXIT_OK)
}

fn analyze_cmd(a: AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let p = read_pair(&a.file)?;
    let r = analyze(&p, a.b1_index)?;
    let duality = match r.duality {
        Some(d) => json!(d),
        None => json!("n/a"),
    };
    if a.json {
        emit(
            out,
            &json!({
                "n": r.n,
                "ell": r.ell,
                "k": r.k,
                "h": r.h,
                "k_plus_h": r.k_plus_h,
                "pivot_cols": r.pivot_cols,
                "r": r.r,
                "s": r.s,
                "c": r.c,
                "selection_log": r.selection_log,
                "duality": duality,
                "orthogonal": r.orthogonal,
                "b1": r.b1,
                "b1_index": r.b1_index,
            }),
        )?;
    } else {
        writeln!(out, "k = {}, h = {}, k + h = {} (n = {})", r.k, r.h, r.k_plus_h, r.n)?;
        writeln!(out, "B1 = {:?} (index {})", r.b1, r.b1_index)?;
        writeln!(out, "pivot columns = {:?}", r.pivot_cols)?;
        writeln!(out, "rows: r = {}, s = {}, c = {}", r.r, r.s, r.c)?;
        for s in &r.selection_log {
            writeln!(out, "  column {} removed rows {:?}", s.column, s.rows)?;
        }
        writeln!(out, "orthogonal = {}", r.orthogonal)?;
        writeln!(out, "duality = {}", duality.as_str().map_or_else(|| duality.to_string(), String::from))?;
    }
    Ok(EXIT_OK)
}

fn classification_json(c: &ClassificationResult) -> Value {
    json!({
        "matched": c.matched,
        "params": c.params,
        "swapped": c.swapped,
        "relabeling": c.relabeling,
        "relabeling_base": 0,
        "extension": c.extension,
    })
}

fn write_classification(out: &mut dyn Write, c: &ClassificationResult) -> Result<()> {
    match &c.params {
        Some(p) => {
            writeln!(out, "matched: true")?;
            writeln!(out, "params: {p}")?;
            writeln!(out, "swapped: {}", c.swapped)?;
            writeln!(
                out,
                "relabeling (1-based): {:?}",
                c.relabeling.iter().map(|x| x + 1).collect::<Vec<_>>()
            )?;
            if c.extension {
                writeln!(out, "note: ell = 0 match with kappa = 0 (extension)")?;
            }
        }
        None => writeln!(out, "matched: false")?,
    }
    Ok(())
}

fn classify(a: ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    match (&a.file, a.n, a.ell) {
        (Some(path), None, None) => {
            let p = read_pair(path)?;
            let c = classify_extremal(&p)?;
            if a.json {
                emit(out, &classification_json(&c))?;
            } else {
                write_classification(out, &c)?;
            }
            Ok(if c.matched { EXIT_OK } else { EXIT_FALSE })
        }
        (None, Some(n), Some(ell)) => {
            let cfg = search_config(n, &[], a.workers)?;
            let r = enumerate_optima(n, ell, &cfg)?;
            let unmatched = r.unmatched().count();
            if a.json {
                emit(
                    out,
                    &json!({
                        "n": r.n,
                        "ell": r.ell,
                        "value": r.value,
                        "optima_found": r.optima_found,
                        "unmatched": unmatched,
                        "classes": r.classes.iter().map(|c| json!({
                            "representative": encode_pair(&c.representative),
                            "members": c.members,
                            "classification": classification_json(&c.classification),
                        })).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                writeln!(
                    out,
                    "P_{}({}) = {}: {} optima in {} classes, {} unmatched",
                    r.ell,
                    r.n,
                    r.value,
                    r.optima_found,
                    r.classes.len(),
                    unmatched
                )?;
                for c in &r.classes {
                    let label = c
                        .classification
                        .params
                        .map_or_else(|| "unmatched".to_string(), |p| p.to_string());
                    writeln!(
                        out,
                        "  {label} swapped={} members={}",
                        c.classification.swapped, c.members
                    )?;
                }
            }
            Ok(if unmatched == 0 { EXIT_OK } else { EXIT_FALSE })
        }
        _ => Err(Error::Parameter(
            "classify takes either a pair file or both --n and --ell".into(),
        )),
    }
}

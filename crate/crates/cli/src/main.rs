use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use stideal::conjecture::{check_membership, fuzz, tilting_census, CandidateSink, Family};
use stideal::decomp::indecomposable_decomposition;
use stideal::homological::strip_projectives;
use stideal::serial::{decomp_to_json, read_module, support_to_json, write_module};
use stideal::sl2::{lambda_auto, Lambda, TiltingTable};
use stideal::suites::{run_suite, SuiteOptions, SUITES};
use stideal::varieties::support_points;
use stideal::{Error, Field};

const SINK_ENV: &str = "STIDEAL_SINK";

#[derive(Parser)]
#[command(
    name = "stideal",
    version,
    about = "SL2 tilting modules restricted to elementary abelian p-groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Degree of F_q over F_p; defaults to r.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// `auto`, or `;`-separated entries, each a `,`-separated ascending
    /// coefficient list over F_p, e.g. `1,0;0,1`.
    #[arg(long, default_value = "auto")]
    lambda: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build the tilting table, print its dims, optionally export it.
    Table {
        #[command(flatten)]
        cfg: FieldArgs,
        /// Directory for the manifest and module JSON files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[command(flatten)]
        cfg: FieldArgs,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sink: Option<PathBuf>,
    },
    /// Random membership checks; exit 3 when candidates are persisted.
    Fuzz {
        #[command(flatten)]
        cfg: FieldArgs,
        #[arg(long, default_value = "random")]
        family: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// File for the full report.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "candidates")]
        sink: PathBuf,
    },
    /// Decompose T_i (x) T_j into tilting modules.
    Fusion {
        i: usize,
        j: usize,
        #[command(flatten)]
        cfg: FieldArgs,
    },
    /// Invariants, decomposition and membership verdict of a module file.
    Inspect {
        file: PathBuf,
        #[command(flatten)]
        cfg: FieldArgs,
        /// Extension degree for the support.
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
}

enum Fail {
    Config(String),
    Suite,
    Candidates,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Config(e.to_string())
    }
}

fn parse_lambda(f: &Field, r: usize, s: &str) -> Result<Lambda, Fail> {
    if s == "auto" {
        return Ok(lambda_auto(f, r)?);
    }
    let mut entries = Vec::new();
    for part in s.split(';') {
        let coeffs: Vec<u32> = part
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|e| Fail::Config(format!("bad lambda entry '{part}': {e}")))?;
        entries.push(f.from_coeffs(&coeffs)?);
    }
    if entries.len() != r {
        return Err(Fail::Config(format!("lambda has {} entries, r = {r}", entries.len())));
    }
    Ok(Lambda::new(f, entries)?)
}

fn table_for(cfg: &FieldArgs) -> Result<TiltingTable, Fail> {
    let k = cfg.k.unwrap_or(cfg.r as u32);
    if cfg.r == 0 {
        return Err(Fail::Config("r must be positive".into()));
    }
    let f = Field::new(cfg.p, k)?;
    let lam = parse_lambda(&f, cfg.r, &cfg.lambda)?;
    Ok(TiltingTable::build(&lam)?)
}

fn lambda_json(t: &TiltingTable) -> Value {
    let f = t.field();
    json!(t.lambda.entries.iter().map(|&x| f.coeffs(x)).collect::<Vec<_>>())
}

fn emit(v: &Value) {
    println!("{v}");
}

fn cmd_table(cfg: &FieldArgs, out: Option<&Path>) -> Result<(), Fail> {
    let t = table_for(cfg)?;
    let f = t.field();
    let mut line = json!({
        "command": "table",
        "p": f.p(), "k": f.k(), "r": t.r(),
        "lambda": lambda_json(&t),
        "dims": t.dims(),
    });
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(Error::from)?;
        let mut files = Vec::new();
        for i in 0..t.len() {
            let name = format!("T_{i}.json");
            write_module(&dir.join(&name), t.t(i))?;
            files.push(name);
        }
        let manifest = json!({
            "p": f.p(), "k": f.k(), "r": t.r(),
            "modulus": f.modulus(),
            "lambda": lambda_json(&t),
            "dims": t.dims(),
            "files": files,
        });
        fs::write(
            dir.join("manifest.json"),
            serde_json::to_string_pretty(&manifest).expect("json"),
        )
        .map_err(Error::from)?;
        line["out"] = json!(dir.display().to_string());
    }
    emit(&line);
    Ok(())
}

fn parse_family(s: &str) -> Result<Family, Fail> {
    Ok(Family::parse(s)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: &str,
    cfg: &FieldArgs,
    count: Option<usize>,
    family: Option<&str>,
    max_dim: Option<usize>,
    jobs: usize,
    out: Option<&Path>,
    sink: Option<PathBuf>,
) -> Result<(), Fail> {
    if !SUITES.contains(&suite) {
        return Err(Fail::Config(format!(
            "unknown suite '{suite}'; known: {}",
            SUITES.join(", ")
        )));
    }
    let t = table_for(cfg)?;
    let opts = SuiteOptions {
        seed: cfg.seed,
        count,
        max_dim,
        jobs,
        family: family.map(parse_family).transpose()?,
        sink: std::env::var_os(SINK_ENV).map(PathBuf::from).or(sink),
    };
    let rep = run_suite(suite, &t, &opts)?;
    let v = serde_json::to_value(&rep).expect("json");
    for c in &rep.checks {
        emit(&json!({ "suite": suite, "check": c.name, "pass": c.pass, "detail": c.detail }));
    }
    emit(
        &json!({ "suite": suite, "pass": rep.passed(), "checks": rep.checks.len(),
        "failures": rep.failures().len(), "elapsed_ms": rep.elapsed_ms as u64 }),
    );
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&v).expect("json")).map_err(Error::from)?;
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(Fail::Suite)
    }
}

fn cmd_fuzz(
    cfg: &FieldArgs,
    family: &str,
    count: usize,
    max_dim: Option<usize>,
    jobs: usize,
    out: Option<&Path>,
    sink: &Path,
) -> Result<(), Fail> {
    let family = parse_family(family)?;
    let t = table_for(cfg)?;
    let sink_dir = std::env::var_os(SINK_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| sink.to_path_buf());
    let sink = CandidateSink::new(&sink_dir)?;
    let max_dim = max_dim.unwrap_or(stideal::conjecture::default_max_dim(t.r()));
    let rep = fuzz(&t, family, cfg.seed, count, max_dim, jobs, Some(&sink))?;
    for v in &rep.verdicts {
        emit(&serde_json::to_value(v).expect("json"));
    }
    let mut head = serde_json::to_value(&rep).expect("json");
    head.as_object_mut().expect("object").remove("verdicts");
    head["command"] = json!("fuzz");
    emit(&head);
    if let Some(path) = out {
        fs::write(path, serde_json::to_string(&rep).expect("json")).map_err(Error::from)?;
    }
    if rep.candidates > 0 {
        Err(Fail::Candidates)
    } else {
        Ok(())
    }
}

fn cmd_fusion(i: usize, j: usize, cfg: &FieldArgs) -> Result<(), Fail> {
    let t = table_for(cfg)?;
    if i >= t.len() || j >= t.len() {
        return Err(Fail::Config(format!("indices must be below {}", t.len())));
    }
    let prod = t.t(i).tensor(t.t(j));
    let (counts, free, rem) = tilting_census(&prod, &t)?;
    emit(&json!({
        "command": "fusion", "i": i, "j": j, "dim": prod.dim,
        "summands": counts, "free_rank": free, "remainder_dim": rem.dim,
    }));
    Ok(())
}

fn cmd_inspect(file: &Path, cfg: &FieldArgs, e: u32) -> Result<(), Fail> {
    let m = read_module(file)?;
    let f = m.field.clone();
    let st = strip_projectives(&m);
    let dec = indecomposable_decomposition(&m, cfg.seed)?;
    let supp = support_points(&m, e)?;
    let mut line = json!({
        "command": "inspect",
        "p": f.p(), "k": f.k(), "r": m.r, "dim": m.dim,
        "loewy_layers": m.loewy_layers(),
        "top_dim": m.top_dim(), "socle_dim": m.socle_dim(),
        "free_rank": st.free_rank, "core_dim": st.core.dim,
        "support": support_to_json(&supp),
        "decomposition": decomp_to_json(&dec),
    });
    let tcfg = FieldArgs {
        p: f.p(),
        k: Some(f.k()),
        r: m.r,
        ..cfg.clone()
    };
    match table_for(&tcfg) {
        Ok(t) => {
            let v = check_membership(&m, &t, &file.display().to_string())?;
            line["verdict"] = serde_json::to_value(v.summary()).expect("json");
        }
        Err(Fail::Config(msg)) => line["verdict"] = json!({ "skipped": msg }),
        Err(other) => return Err(other),
    }
    emit(&line);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Table { cfg, out } => cmd_table(cfg, out.as_deref()),
        Command::Verify {
            suite,
            cfg,
            count,
            family,
            max_dim,
            jobs,
            out,
            sink,
        } => cmd_verify(
            suite,
            cfg,
            *count,
            family.as_deref(),
            *max_dim,
            *jobs,
            out.as_deref(),
            sink.clone(),
        ),
        Command::Fuzz {
            cfg,
            family,
            count,
            max_dim,
            jobs,
            out,
            sink,
        } => cmd_fuzz(cfg, family, *count, *max_dim, *jobs, out.as_deref(), sink),
        Command::Fusion { i, j, cfg } => cmd_fusion(*i, *j, cfg),
        Command::Inspect { file, cfg, e } => cmd_inspect(file, cfg, *e),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Suite) => ExitCode::from(1),
        Err(Fail::Config(msg)) => {
            eprintln!("error: {msg}");
            emit(&json!({ "error": msg }));
            ExitCode::from(2)
        }
        Err(Fail::Candidates) => ExitCode::from(3),
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hochkit::simpset::category_zoo;
use hochkit_cli::manifest::{CaseSpec, InputError, Manifest};
use hochkit_cli::run::{run_manifest, RunOpts};
use hochkit_cli::suite;

#[derive(Parser)]
#[command(name = "hochkit", version, about = "Exact checks for relative Hochschild theory and quasi-categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a manifest file or the built-in `paper-suite`.
    Run(RunArgs),
    /// Built-in presets.
    Preset {
        #[command(subcommand)]
        what: PresetCmd,
    },
    /// Run a single check from flags.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
}

#[derive(Args)]
struct RunArgs {
    manifest: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Treat SKIPPED(budget) as failure.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    no_timestamp: bool,
    /// Write the JSON report here and the TSV report next to it.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PresetCmd {
    /// Algebra presets, zoo categories and built-in manifests.
    List,
    /// Print the built-in paper-suite manifest.
    Suite,
}

#[derive(Subcommand)]
enum CheckCmd {
    Reduction(ReductionArgs),
}

#[derive(Args)]
struct ReductionArgs {
    #[arg(long = "S")]
    s: String,
    #[arg(long = "R")]
    r: Option<String>,
    /// JSON list of images of the R basis in S.
    #[arg(long)]
    map: Option<String>,
    /// JSON list of S vectors forming an R basis.
    #[arg(long)]
    basis: Option<String>,
    /// `S`, `k`, or a module JSON file.
    #[arg(long = "M", default_value = "S")]
    m: String,
    #[arg(long = "N", default_value = "S")]
    n: String,
    #[arg(long, default_value = "co")]
    mode: String,
    /// Window as LO,HI.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, default_value_t = 5)]
    p: u32,
    #[arg(long = "L")]
    length: Option<usize>,
    #[arg(long)]
    no_timestamp: bool,
}

fn input_value(arg: &str) -> Result<Value, InputError> {
    if arg == "S" || arg == "k" {
        return Ok(json!(arg));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| InputError(format!("{arg}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{arg}: {e}")))
}

fn algebra_value(arg: &str) -> Result<Value, InputError> {
    if std::path::Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| InputError(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| InputError(format!("{arg}: {e}")));
    }
    Ok(json!(arg))
}

fn json_arg(name: &str, arg: &str) -> Result<Value, InputError> {
    serde_json::from_str(arg).map_err(|e| InputError(format!("--{name}: {e}")))
}

fn parse_window(w: &str) -> Result<(i32, i32), InputError> {
    let bad = || InputError(format!("--window expects LO,HI, got '{w}'"));
    let (a, b) = w.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn reduction_manifest(a: &ReductionArgs) -> Result<Manifest, InputError> {
    let check = match a.mode.as_str() {
        "co" => "reduction_co",
        "ho" => "reduction_ho",
        other => return Err(InputError(format!("unknown mode '{other}' (co or ho)"))),
    };
    let mut inputs = json!({"S": algebra_value(&a.s)?, "M": input_value(&a.m)?, "N": input_value(&a.n)?});
    if let Some(r) = &a.r {
        inputs["R"] = algebra_value(r)?;
        let map = a.map.as_deref().ok_or_else(|| InputError("--R needs --map".into()))?;
        let basis = a.basis.as_deref().ok_or_else(|| InputError("--R needs --basis".into()))?;
        inputs["map"] = json_arg("map", map)?;
        inputs["basis"] = json_arg("basis", basis)?;
    }
    let window = a.window.as_deref().map(parse_window).transpose()?.unwrap_or((-4, 4));
    let case = CaseSpec {
        name: format!("{check}/{}", a.s),
        check: serde_json::from_value(json!(check)).expect("known check"),
        inputs,
        window: Some(window),
        length: a.length,
        budget: None,
        p: Some(a.p),
    };
    Manifest::from_value(json!({"p": a.p, "cases": [case]}))
}

fn execute(m: &Manifest, opts: RunOpts, output: Option<&PathBuf>) -> Result<i32, InputError> {
    let report = run_manifest(m, opts)?;
    match output {
        Some(path) => {
            std::fs::write(path, report.to_json()).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let tsv = path.with_extension("tsv");
            std::fs::write(&tsv, report.to_tsv()).map_err(|e| InputError(format!("{}: {e}", tsv.display())))?;
            let s = &report.summary;
            eprintln!("{} pass, {} fail, {} skipped, {} error", s.pass, s.fail, s.skipped, s.error);
        }
        None => print!("{}", report.to_tsv()),
    }
    Ok(report.exit_code(opts.strict))
}

fn preset_list() {
    println!("algebras:");
    for p in ["k", "truncated_poly:N", "split:N", "triangular2", "A*B (tensor product of presets)"] {
        println!("  {p}");
    }
    println!("categories:");
    for (name, c) in category_zoo() {
        println!("  {name}\t{} objects\t{} morphisms", c.num_objects(), c.num_morphisms());
    }
    println!("manifests:");
    for (name, n) in suite::builtin_manifests() {
        println!("  {name}\t{n} cases");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Run(a) => suite::load(&a.manifest).and_then(|m| {
            let opts = RunOpts { jobs: a.jobs, strict: a.strict, timestamp: !a.no_timestamp };
            execute(&m, opts, a.output.as_ref())
        }),
        Cmd::Preset { what: PresetCmd::List } => {
            preset_list();
            Ok(0)
        }
        Cmd::Preset { what: PresetCmd::Suite } => {
            println!("{}", serde_json::to_string_pretty(&suite::builtin_suite_value()).expect("json"));
            Ok(0)
        }
        Cmd::Check { what: CheckCmd::Reduction(a) } => reduction_manifest(&a).and_then(|m| {
            let opts = RunOpts { jobs: 1, strict: false, timestamp: !a.no_timestamp };
            execute(&m, opts, None)
        }),
    };
    match res {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qrf_cli::{
    cmd_run, cmd_verify_algebra, load_config, preset, preset_text, presets, run_invariants, CliError,
    RunOptions, ScenarioConfig, EXIT_CHECK_FAILED, EXIT_OK,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "qrfsim", version, about = "Relational quantum clocks: symbolic checks and numeric scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Scenario document (TOML).
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled preset name (see `qrfsim presets`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Args, Clone)]
struct Overrides {
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Memory cap in MB.
    #[arg(long, value_name = "MB")]
    max_mem: Option<f64>,
    /// Override of the event regularization width.
    #[arg(long, value_name = "OVERRIDE")]
    sigma_t: Option<f64>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

impl Overrides {
    fn options(&self) -> RunOptions {
        RunOptions {
            out: self.out.clone(),
            max_mem_mb: self.max_mem,
            sigma_t: self.sigma_t,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// First-class constraint checks and conjugation tables; prints a JSON report.
    VerifyAlgebra {
        #[command(flatten)]
        source: Source,
    },
    /// Runs one scenario and writes data files, a JSON sidecar and a manifest.
    Run {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Lists the bundled presets, or prints one as TOML.
    Presets {
        #[arg(long, value_name = "NAME")]
        dump: Option<String>,
    },
    /// Runs several scenarios in parallel, each into its own subdirectory of --out.
    Batch {
        #[arg(long = "config", value_name = "PATH")]
        configs: Vec<PathBuf>,
        #[arg(long = "preset", value_name = "NAME")]
        presets: Vec<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Randomized invariant sweep over two-particle configurations.
    Invariants {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(source: &Source) -> Result<ScenarioConfig, CliError> {
    match (&source.config, &source.preset) {
        (Some(path), None) => load_config(path),
        (None, Some(name)) => preset(name),
        _ => Err(CliError::Config("give exactly one of --config or --preset".into())),
    }
}

fn report(outcome: Result<i32, CliError>) -> ExitCode {
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn status(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run_one(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<i32, CliError> {
    let outcome = cmd_run(cfg, opts)?;
    for c in &outcome.manifest.checks {
        println!("{:<28} {:<4} {}", c.name, if c.pass { "ok" } else { "FAIL" }, c.detail);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(status(outcome.pass()))
}

fn batch(configs: &[PathBuf], names: &[String], overrides: &Overrides) -> Result<i32, CliError> {
    let mut docs = Vec::new();
    for p in configs {
        docs.push(load_config(p)?);
    }
    for n in names {
        docs.push(preset(n)?);
    }
    if docs.is_empty() {
        return Err(CliError::Config("batch needs at least one --config or --preset".into()));
    }
    let root = overrides.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let codes: Vec<(String, i32)> = docs
        .par_iter()
        .map(|cfg| {
            let opts = RunOptions {
                out: Some(root.join(cfg.stem())),
                ..overrides.options()
            };
            let code = match cmd_run(cfg, &opts) {
                Ok(o) => status(o.pass()),
                Err(e) => {
                    eprintln!("{}: error: {e}", cfg.name);
                    e.exit_code()
                }
            };
            (cfg.name.clone(), code)
        })
        .collect();
    for (name, code) in &codes {
        println!("{name:<28} exit {code}");
    }
    Ok(codes.iter().map(|(_, c)| *c).max().unwrap_or(EXIT_OK))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap exits 2 on usage errors and 0 for --help/--version.
            e.exit();
        }
    };
    report(match cli.command {
        Command::VerifyAlgebra { source } => load(&source).and_then(|cfg| {
            let r = cmd_verify_algebra(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            Ok(status(r.pass))
        }),
        Command::Run { source, overrides } => load(&source).and_then(|cfg| run_one(&cfg, &overrides.options())),
        Command::Presets { dump } => match dump {
            Some(name) => preset_text(&name).map(|t| {
                print!("{t}");
                EXIT_OK
            }),
            None => {
                for line in presets::listing() {
                    println!("{line}");
                }
                Ok(EXIT_OK)
            }
        },
        Command::Batch {
            configs,
            presets,
            overrides,
        } => batch(&configs, &presets, &overrides),
        Command::Invariants { cases, seed } => run_invariants(cases, seed).map(|reports| {
            let failed: Vec<_> = reports.iter().filter(|r| !r.pass()).collect();
            for r in &failed {
                println!("FAIL {:?}: {}", r.case, r.failures.join("; "));
            }
            println!("{} of {} configurations pass (seed {seed})", reports.len() - failed.len(), reports.len());
            status(failed.is_empty())
        }),
    })
}

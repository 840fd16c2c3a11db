use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jamcord::harness::{
    firecheck_file, load_catalog, plot_files, run_scenario, run_sweep, validate_file, write_diagnostic, write_run, write_sweep,
    HarnessError, Scenario, SweepSpec,
};

/// Bead-chain jamming gripper simulator.
#[derive(Parser)]
#[command(name = "jamcord", version)]
struct Cli {
    /// Output directory (default: the scenario's `output`, else `.`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Noise seed, used only by scenarios that ask for noise.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a bead spec or gripper config against the geometric constraints.
    Validate { spec: PathBuf },
    /// Run press, jam and lift for one scenario.
    Simulate { scenario: PathBuf },
    /// Run every cell of a parameter sweep.
    Sweep {
        sweep: PathBuf,
        /// Worker threads; overrides the sweep file.
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Overlay trace CSVs in one SVG.
    Plot {
        traces: Vec<PathBuf>,
        /// SVG file name inside the output directory.
        #[arg(long, default_value = "plot.svg")]
        name: String,
    },
    /// Screen a bill of materials for fire exposure.
    Firecheck {
        bom: PathBuf,
        /// Environment temperature, °C.
        #[arg(long, allow_hyphen_values = true)]
        temp: f64,
        /// Material catalog (default: bundled).
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

fn parent(p: &Path) -> Option<&Path> {
    p.parent().filter(|d| !d.as_os_str().is_empty())
}

fn diagnose(out: &Path, err: HarnessError) -> HarnessError {
    if let Some(path) = write_diagnostic(out, &err) {
        eprintln!("diagnostic: {}", path.display());
    }
    err
}

fn run(cli: Cli) -> Result<u8, HarnessError> {
    let say = |line: String| {
        if !cli.quiet {
            println!("{line}");
        }
    };
    match &cli.command {
        Command::Validate { spec } => {
            let check = validate_file(spec)?;
            for v in &check.bead.violations {
                println!("{v}");
            }
            for e in &check.gripper_errors {
                println!("GRIPPER: {e}");
            }
            for w in check.bead.warnings.iter().chain(&check.gripper_warnings) {
                say(format!("warning: {w}"));
            }
            if check.valid() {
                say(format!("{}: valid", spec.display()));
                Ok(0)
            } else {
                Ok(1)
            }
        }
        Command::Simulate { scenario } => {
            let s = Scenario::load(scenario)?;
            let out = cli
                .out
                .clone()
                .or_else(|| s.output.as_ref().map(|o| parent(scenario).map_or_else(|| o.into(), |d| d.join(o))))
                .unwrap_or_else(|| PathBuf::from("."));
            let run = run_scenario(&s, parent(scenario), cli.seed).map_err(|e| diagnose(&out, e))?;
            for p in write_run(&out, &run)? {
                say(format!("wrote {}", p.display()));
            }
            say(format!(
                "{}: max holding force {} N{}",
                s.id,
                jamcord::trace::fmt_g6(run.summary.max_holding_force),
                if run.summary.escaped { " (escaped)" } else { "" }
            ));
            Ok(0)
        }
        Command::Sweep { sweep, parallelism } => {
            let spec = SweepSpec::load(sweep)?;
            let threads = parallelism.unwrap_or(spec.parallelism);
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let result = run_sweep(&spec, parent(sweep), cli.seed, threads).map_err(|e| diagnose(&out, e))?;
            let agg = write_sweep(&out, &result)?;
            say(format!("{} cells, wrote {}", result.cells.len(), agg.display()));
            Ok(0)
        }
        Command::Plot { traces, name } => {
            let svg = plot_files(traces)?;
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out).map_err(|e| HarnessError::Write {
                path: out.clone(),
                reason: e.to_string(),
            })?;
            let path = out.join(name);
            std::fs::write(&path, svg).map_err(|e| HarnessError::Write {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            say(format!("wrote {}", path.display()));
            Ok(0)
        }
        Command::Firecheck { bom, temp, catalog } => {
            let catalog = load_catalog(catalog.as_deref())?;
            let failures = firecheck_file(bom, *temp, &catalog)?;
            for f in &failures {
                println!(
                    "FAIL {} ({}, limit {} °C, exceeded by {} °C)",
                    f.component, f.material, f.max_service_temp, f.deficit
                );
            }
            if failures.is_empty() {
                say(format!("{}: no exposed component fails at {temp} °C", bom.display()));
                Ok(0)
            } else {
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

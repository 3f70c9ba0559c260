use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use edca_core::experiment::{run_experiment, sweep, SweepAxis};
use edca_core::oracle::{optimal_cw_bruteforce, throughput_grid};
use edca_core::output::{emit_outputs, sweep_row, write_oracle_grid, write_summary, write_sweep};
use edca_core::scenario::{self, PRESETS};
use edca_core::{Error, PhyProfile, Scenario};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "edca", version, about = "802.11 EDCA contention-window experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or built-in preset.
    Run {
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replications: Option<u32>,
        /// Override the simulated duration.
        #[arg(long)]
        duration_s: Option<f64>,
    },
    /// Run one scenario per value of a parameter.
    Sweep {
        /// n_stations, capture_threshold, lambda (mean silence, s) or controller.
        #[arg(long)]
        axis: String,
        #[arg(long, num_args = 1.., required = true)]
        values: Vec<String>,
        #[arg(long, default_value = "fig11_sweep_n")]
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replications: Option<u32>,
        #[arg(long)]
        duration_s: Option<f64>,
    },
    /// Saturation fixed-point throughput over the CW grid.
    Oracle {
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1500)]
        payload_bytes: u32,
    },
    /// List or print the built-in scenarios.
    Presets {
        #[arg(long)]
        list: bool,
        /// Print the resolved scenario file of a preset.
        #[arg(long)]
        show: Option<String>,
    },
}

fn overrides(s: &mut Scenario, seed: Option<u64>, reps: Option<u32>, duration_s: Option<f64>) -> Result<(), Error> {
    if let Some(seed) = seed {
        s.seed = seed;
    }
    if let Some(r) = reps {
        s.replications = r;
    }
    if let Some(d) = duration_s {
        s.duration_s = d;
    }
    s.validate()
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { scenario, out, seed, replications, duration_s } => {
            let mut s = scenario::load(&scenario)?;
            overrides(&mut s, seed, replications, duration_s)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(&s.name));
            log::info!("running {} ({} x {} s)", s.name, s.replications, s.duration_s);
            let m = run_experiment(&s)?;
            let paths = emit_outputs(&s, &m, &dir)?;
            let total = m.total_mbps();
            let jfi = m.jfi();
            println!(
                "{}: total {:.3} ± {:.3} Mbps, JFI {:.4} ± {:.4} over {} replications",
                s.name,
                total.mean,
                total.stddev,
                jfi.mean,
                jfi.stddev,
                m.runs.len()
            );
            println!("wrote {}", paths.summary.parent().unwrap_or(&dir).display());
        }
        Command::Sweep { axis, values, scenario, out, seed, replications, duration_s } => {
            let axis = SweepAxis::parse(&axis)?;
            let mut base = scenario::load(&scenario)?;
            overrides(&mut base, seed, replications, duration_s)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(format!("{}_sweep_{}", base.name, axis.keyword())));
            let results = sweep(&base, axis, &values)?;
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let rows = results
                .iter()
                .zip(&values)
                .map(|((s, m), v)| sweep_row(axis.keyword(), v, s, m))
                .collect::<Vec<_>>();
            for r in &rows {
                println!("{}={}: total {} Mbps, JFI {}", r[0], r[1], r[4], r[6]);
            }
            write_sweep(&dir.join("sweep.csv"), rows)?;
            write_summary(&dir.join("summary.csv"), results.iter().map(|(_, m)| m))?;
            println!("wrote {}", dir.display());
        }
        Command::Oracle { n, payload_bytes } => {
            let profile = PhyProfile::default();
            let mut grid = Vec::new();
            for &k in &n {
                grid.extend(throughput_grid::<f64>(k, &profile, payload_bytes)?);
                if k >= 2 {
                    eprintln!("n={k}: best CW_min {}", optimal_cw_bruteforce(k, &profile, payload_bytes)?);
                }
            }
            write_oracle_grid(io::stdout().lock(), &grid).map_err(|e| Error::io("<stdout>", e))?;
        }
        Command::Presets { list, show } => {
            if let Some(name) = show {
                let s = scenario::preset(&name)
                    .ok_or_else(|| Error::config("preset", format!("unknown preset `{name}`")))?;
                print!("{}", s.emit());
            } else if list {
                for (name, desc) in PRESETS {
                    println!("{name:<30} {desc}");
                }
            } else {
                for name in scenario::preset_names() {
                    println!("{name}");
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let bad_input = e.is_config() || matches!(e, Error::InvalidInput(_));
            ExitCode::from(if bad_input { EXIT_CONFIG } else { EXIT_RUNTIME })
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use irs_mimo::channel::PathLossParams;
use irs_mimo::transceiver::{gbar_i, gbar_i_db, min_power_epa, optimal_subsurface_count, ArraySizes, ShadowingMeanMode};
use irs_mimo::{dbm_to_watts, linear_to_db, watts_to_dbm};
use irs_mimo_sim::report::load_summary;
use irs_mimo_sim::{derive_geometry, emit_report, figure_command, load_config, run_monte_carlo, FigureName};

#[derive(Parser)]
#[command(name = "irs-sim", version, about = "IRS-assisted mmWave MIMO link simulator")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment from a TOML scenario.
    Simulate {
        /// Scenario file (TOML), or a summary.json to replay.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Reproduce a figure's data set as CSV.
    Figure {
        /// fig2, fig4, fig5, fig6, fig7, fig8 or fig9.
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Scenario override, `key=value` (repeatable), e.g. `trials=50`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Average transmit power for a target rate with K subsurfaces.
    Power {
        /// Target rate, bits/s/Hz.
        #[arg(long)]
        rate: f64,
        #[arg(long = "K")]
        k: usize,
        /// Elements per subsurface.
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 100)]
        nt: usize,
        #[arg(long, default_value_t = 100)]
        nr: usize,
        /// Horizontal transmitter–surface offset `D_1`, m.
        #[arg(long = "d-1", default_value_t = 25.0)]
        d_1: f64,
        /// Transmitter–receiver distance, m.
        #[arg(long = "d-tr", default_value_t = 51.0)]
        d_tr: f64,
        /// Offset of the surface line from the link axis, m.
        #[arg(long = "d-v", default_value_t = 2.0)]
        d_v: f64,
        #[arg(long, default_value_t = -85.0)]
        noise_dbm: f64,
        /// `lognormal-exact` or `paper`.
        #[arg(long, default_value = "lognormal-exact")]
        shadowing_mode: ShadowingMeanMode,
    },
    /// Subsurface count minimizing transmit power for a target rate.
    OptimalK {
        #[arg(long)]
        rate: f64,
        /// Total number of surface elements.
        #[arg(long = "M")]
        m: usize,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            trials,
            out,
        } => {
            let mut cfg = if config.extension().is_some_and(|e| e == "json") {
                load_summary(&config)?.config
            } else {
                load_config(&config)?
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            cfg.validate()?;
            let report = run_monte_carlo(&cfg)?;
            emit_report(&report, &out)?;
            if let Some(a) = &report.aggregates {
                println!(
                    "{} trials: rate {:.4} ± {:.4} bits/s/Hz (asymptotic {:.4})",
                    a.rate.count, a.rate.mean, a.rate.stderr, a.rate_asymptotic.mean
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Figure { name, out, overrides } => {
            let fig: FigureName = name.parse()?;
            let data = figure_command(fig, &overrides)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let path = out.join(format!("{fig}.csv"));
            std::fs::write(&path, data.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            let cfg_path = out.join(format!("{fig}.toml"));
            std::fs::write(&cfg_path, data.config.to_toml_string())
                .with_context(|| format!("writing {}", cfg_path.display()))?;
            println!("wrote {} ({} rows)", path.display(), data.rows.len());
        }
        Command::Power {
            rate,
            k,
            n,
            nt,
            nr,
            d_1,
            d_tr,
            d_v,
            noise_dbm,
            shadowing_mode,
        } => {
            let (d1, d2) = derive_geometry(d_tr, d_v, d_1)?;
            let to_irs = PathLossParams::new(61.4, 20.0, d1, 5.8)?;
            let from_irs = PathLossParams::new(61.4, 20.0, d2, 5.8)?;
            let gbar = gbar_i(&to_irs, &from_irs, shadowing_mode)?;
            let arrays = ArraySizes { tx: nt, rx: nr, elements: n };
            let p = min_power_epa(rate, k, arrays, dbm_to_watts(noise_dbm), gbar)?;
            println!("mean cascaded loss: {:.3} dB", gbar_i_db(&to_irs, &from_irs, shadowing_mode)?);
            println!("average power: {p:.6e} W ({:.3} dBm, {:.3} dBW)", watts_to_dbm(p), linear_to_db(p));
        }
        Command::OptimalK { rate, m } => {
            let s = optimal_subsurface_count(rate, m)?;
            println!("K* = {:.6}", s.real);
            println!("recommended K = {} (N = {:.1} elements each)", s.recommended, s.elements);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

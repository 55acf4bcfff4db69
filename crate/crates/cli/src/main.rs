use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use multiphoton_cli::config::RunConfig;
use multiphoton_cli::demo::swap_demo;
use multiphoton_cli::presets::{preset, PRESET_NAMES};
use multiphoton_cli::sweep::{run_sweep_with, verify_bounds, SweepSpec, VerifyOptions};
use multiphoton_cli::{csv, SweepError};
use multiphoton_core::lattice::NetworkConfig;

#[derive(Parser)]
#[command(name = "multiphoton", version, about = "Multiphoton transport through a resonator chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep described by a config file and write CSV.
    Sweep(Common),
    /// Check exact infidelities against the analytic bounds over a sweep.
    Verify {
        /// Use a figure preset instead of (or under) the config file.
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print fidelities and effective-model amplitudes at the swap time.
    SwapDemo {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 7)]
        chain_len: usize,
        #[arg(long, default_value_t = 3)]
        tap_site: usize,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.01)]
        g0: f64,
        #[arg(long, default_value_t = 0.1)]
        j0: f64,
    },
    /// Regenerate the data behind a published figure.
    Reproduce {
        /// One of fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, figA1a, figA1b, figA2a, figA2b, figA3a, figA3b.
        preset: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Default)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fock photon numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Superposition dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    /// Monte Carlo samples per averaged input.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    parallel: Option<usize>,
}

impl Common {
    fn load_config(&self) -> Result<Option<RunConfig>, SweepError> {
        self.config.as_deref().map(RunConfig::load).transpose()
    }

    fn apply(&self, spec: &mut SweepSpec) {
        if let Some(n) = &self.n {
            spec.fock = n.clone();
        }
        if let Some(d) = &self.d {
            spec.dims = d.clone();
        }
        if let Some(s) = self.samples {
            spec.mc_samples = s;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
    }

    fn output(&self) -> Result<Box<dyn Write>, SweepError> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn write_sweep(spec: &SweepSpec, common: &Common) -> Result<(), SweepError> {
    let table = run_sweep_with(spec, common.parallel)?;
    let mut out = common.output()?;
    csv::write_table(&table, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), SweepError> {
    match cli.command {
        Command::Sweep(common) => {
            let cfg = common
                .load_config()?
                .ok_or_else(|| SweepError::Validation("sweep needs --config <path>".into()))?;
            let mut spec = cfg.sweep_spec()?;
            common.apply(&mut spec);
            write_sweep(&spec, &common)
        }
        Command::Reproduce { preset: name, common } => {
            let mut spec = preset(&name)?;
            common.apply(&mut spec);
            write_sweep(&spec, &common)
        }
        Command::Verify { preset: name, common } => {
            let mut spec = match (&name, common.load_config()?) {
                (Some(name), _) => preset(name)?,
                (None, Some(cfg)) => cfg.sweep_spec()?,
                (None, None) => {
                    return Err(SweepError::Validation(format!(
                        "verify needs --config <path> or --preset <{}>",
                        PRESET_NAMES.join("|")
                    )))
                }
            };
            common.apply(&mut spec);
            let report = verify_bounds(
                &spec,
                VerifyOptions {
                    workers: common.parallel,
                    ..VerifyOptions::default()
                },
            )?;
            let mut out = common.output()?;
            writeln!(
                out,
                "ok: {} checks, worst infidelity/bound = {:.6} at {} = {}",
                report.checks,
                report.worst_ratio,
                spec.vary.name(),
                report.worst_at
            )?;
            out.flush()?;
            Ok(())
        }
        Command::SwapDemo {
            common,
            chain_len,
            tap_site,
            kappa,
            g0,
            j0,
        } => {
            let network = match common.load_config()? {
                Some(cfg) => cfg.network()?,
                None => NetworkConfig::new(chain_len, tap_site, kappa, g0, j0)
                    .map_err(|e| SweepError::Validation(e.to_string()))?,
            };
            let n = match common.n.as_deref() {
                None => 1,
                Some([n]) => *n,
                Some(_) => return Err(SweepError::Validation("swap-demo takes a single --n".into())),
            };
            let demo = swap_demo(&network, n)?;
            let mut out = common.output()?;
            writeln!(out, "{demo}")?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(SweepError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

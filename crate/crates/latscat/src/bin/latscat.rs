use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latscat::output::{ensure_dir, write_bytes};
use latscat::{Artifact, Config, Pool, Scenario, SweepSpec};

/// Exciton and cavity-polariton scattering off single-site lattice defects.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Worker threads (0 = all cores). Output does not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` parameter file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Overrides the `scenario` key.
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,

    /// Include the logarithmic term in polariton denominators.
    #[arg(long)]
    exact_denominator: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Polariton branches, Hopfield weights and detuning over k.
    Dispersion {
        #[command(flatten)]
        common: Common,
        /// k sweep, `k=start:stop:points[:log]`.
        #[arg(long)]
        sweep: Option<SweepSpec>,
    },
    /// Scattering amplitude over a parameter sweep.
    Scatter {
        #[command(flatten)]
        common: Common,
        /// `var=start:stop:points[:log]` with var in k, detuning, theta,
        /// theta_deg, J_bar. Defaults to a sweep suited to the scenario.
        #[arg(long)]
        sweep: Option<SweepSpec>,
    },
    /// Closed forms against quadrature and finite-lattice solves.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// `N_side=start:stop:points[:log]` for the finite-lattice check.
        #[arg(long)]
        sweep: Option<SweepSpec>,
    },
    /// Scattered wavefunction on the lattice and its momentum-space ring.
    Wavefield {
        #[command(flatten)]
        common: Common,
        /// Use f = 0, leaving the bare incident wave.
        #[arg(long)]
        f_zero: bool,
    },
}

fn load(c: &Common) -> latscat::Result<Config> {
    let mut cfg = match &c.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = c.scenario {
        cfg.scenario = s;
    }
    cfg.exact_denominator |= c.exact_denominator;
    Ok(cfg)
}

fn default_sweep(cfg: &Config) -> SweepSpec {
    let spec = match cfg.scenario {
        Scenario::ExcitonVacancy => "k=1e-7:1e-4:200:log".to_string(),
        Scenario::PolaritonVacancy | Scenario::TwoAtom => format!("detuning={}:{}:101", -10.0 * cfg.g, 10.0 * cfg.g),
        Scenario::Asymmetric => "theta_deg=0:90:901".to_string(),
    };
    spec.parse().expect("built-in sweep is valid")
}

fn write_all(dir: &Path, files: &[Artifact]) -> latscat::Result<()> {
    let dir = ensure_dir(dir)?;
    for f in files {
        let path = dir.join(&f.name);
        write_bytes(&path, &f.bytes)?;
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> latscat::Result<()> {
    let pool = Pool::new(cli.workers)?;
    match cli.command {
        Command::Dispersion { common, sweep } => {
            let cfg = load(&common)?;
            write_all(&common.out, &latscat::dispersion(&cfg, sweep.as_ref(), &pool)?)
        }
        Command::Scatter { common, sweep } => {
            let cfg = load(&common)?;
            let sweep = sweep.unwrap_or_else(|| default_sweep(&cfg));
            write_all(&common.out, &latscat::scatter(&cfg, &sweep, &pool)?)
        }
        Command::Oracle { common, sweep } => {
            let cfg = load(&common)?;
            let report = latscat::oracle(&cfg, sweep.as_ref(), &pool)?;
            write_all(&common.out, &report.artifacts)?;
            for c in &report.checks {
                println!(
                    "{} {} value={:e} tol={:e} ({})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tolerance,
                    c.detail
                );
            }
            report.verdict()
        }
        Command::Wavefield { common, f_zero } => {
            let cfg = load(&common)?;
            write_all(&common.out, &latscat::wavefield(&cfg, f_zero, &pool)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors; bad arguments are
            // configuration errors.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}


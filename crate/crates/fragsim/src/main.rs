use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fragsim::config::{ConfigFile, Engine, ModelSection, OutputSection, RunSection};
use fragsim::plotdata::{write_plotdata, PlotKind};
use fragsim::verify::{all_pass, DEFAULT_VERIFY_SEED};
use fragsim::{budget_from_env, run_simulation, run_tails, HarnessError, Suite, Verifier};

/// Simulations and checks for k-regular self-similar fragmentation.
#[derive(Parser)]
#[command(name = "fragsim", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("FRAGSIM_GIT_DESCRIBE"), ")"))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an engine and write CSV rows plus a JSON sidecar.
    Simulate(SimulateArgs),
    /// Tabulate P(K_n > t) over a grid.
    Tails {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        n: u32,
        /// LO:HI:STEP
        #[arg(long)]
        t_grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named acceptance suite; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_VERIFY_SEED)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Derive a plotting table from a record.
    Plotdata {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    engine: Option<Engine>,
    /// TOML experiment file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, conflicts_with = "t_end")]
    n_max: Option<u32>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    replicas: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    floor: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write `<stem>.points.csv` with every J value above the floor.
    #[arg(long)]
    points: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

impl SimulateArgs {
    fn flags(&self) -> ConfigFile {
        ConfigFile {
            model: ModelSection { k: self.k, alpha: self.alpha },
            run: RunSection {
                engine: self.engine,
                n_max: self.n_max,
                t_end: self.t_end,
                replicas: self.replicas,
                seed: self.seed,
                floor: self.floor,
            },
            output: OutputSection { path: self.out.clone(), points: self.points.then_some(true) },
        }
    }
}

fn with_jobs<T>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError>
where
    T: Send,
{
    match jobs {
        None => Ok(f()),
        Some(0) => Err(HarnessError::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| HarnessError::Usage(format!("thread pool: {e}"))),
    }
}

/// `Ok(true)` when every check passed.
fn execute(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Simulate(args) => {
            let mut cfg = match &args.config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
                    ConfigFile::from_toml_str(&text)?
                }
                None => ConfigFile::default(),
            };
            cfg.override_with(&args.flags());
            let spec = cfg.into_spec()?;
            let budget = budget_from_env()?;
            let summary = with_jobs(args.jobs, || run_simulation(&spec, budget))??;
            println!("{summary}");
            Ok(true)
        }
        Command::Tails { q, n, t_grid, out } => {
            println!("{}", run_tails(q, n, &t_grid, &out)?);
            Ok(true)
        }
        Command::Verify { suite, seed, jobs } => {
            let verifier = Verifier::new(seed, budget_from_env()?);
            let checks = with_jobs(jobs, || verifier.run_suite(suite))??;
            for c in &checks {
                println!("{c}");
            }
            let ok = all_pass(&checks);
            let failed = checks.iter().filter(|c| !c.pass).count();
            println!("{suite:?}: {} checks, {failed} failed", checks.len());
            Ok(ok)
        }
        Command::Plotdata { input, kind, out } => {
            let rows = write_plotdata(&input, kind, &out)?;
            println!("{kind:?}: {rows} rows -> {}", out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

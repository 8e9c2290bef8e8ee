use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sea_core::config::parse_k_list;
use sea_core::experiments::{
    block_size_study, fitness_clouds, gnto_render, run_batch, sweep_grid, write_batch_csv,
    write_blocksize_csv, write_clouds_csv, write_sweep_csv, write_trace_csv,
};
use sea_core::{Algorithm, Error, ExperimentReport, Overrides, Preset, ProblemKind, RunConfig};

/// Experiments with the state-based evolutionary algorithm over block-based bit codings.
#[derive(Parser)]
#[command(name = "sea", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the simple GA and the 2-state SEA on one problem and print SR / GNTO.
    Compare(Common),
    /// Run a batch of one algorithm and write its per-run CSV.
    Run {
        #[command(flatten)]
        common: Common,
        /// Also write the per-generation trace of the first run to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// SEA success rate over the p-mut-state x p-mut-per-bit grid.
    Sweep(Common),
    /// SEA performance as a function of the block size (`--k` takes a list).
    Blocksize(Common),
    /// ONEMAX fitness-cloud samples before and after conversion and mutation.
    Clouds(Common),
    /// Print the resolved configuration in the config-file format.
    Config(Common),
}

#[derive(Args, Clone, Debug, Default)]
struct Common {
    #[arg(long)]
    problem: Option<ProblemKind>,
    /// paper-P1 .. paper-P4 or smoke.
    #[arg(long)]
    preset: Option<Preset>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV output; CSVs go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    step: Option<f64>,
    /// Block size, or a comma-separated list for `blocksize`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    pflip: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    /// Number of blocks.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    max_gen: Option<u32>,
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long)]
    t_size: Option<usize>,
    #[arg(long)]
    p_cross: Option<f64>,
    #[arg(long)]
    p_mut: Option<f64>,
    #[arg(long)]
    p_mut_per_bit: Option<f64>,
    #[arg(long)]
    p_mut_state: Option<f64>,
    #[arg(long)]
    elitism: Option<bool>,
}

impl Common {
    fn overrides(&self, k_is_list: bool) -> Result<Overrides, Error> {
        let (k, k_values) = match &self.k {
            None => (None, None),
            Some(text) if k_is_list => (None, Some(parse_k_list(text)?)),
            Some(text) => {
                let k = text
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter {
                        name: "k".into(),
                        reason: format!("cannot parse {text:?}"),
                    })?;
                (Some(k), None)
            }
        };
        Ok(Overrides {
            preset: self.preset,
            problem: self.problem,
            algorithm: self.algorithm,
            max_gen: self.max_gen,
            pop_size: self.pop_size,
            n: self.n,
            k,
            t_size: self.t_size,
            p_cross: self.p_cross,
            p_mut: self.p_mut,
            p_mut_per_bit: self.p_mut_per_bit,
            p_mut_state: self.p_mut_state,
            elitism: self.elitism,
            runs: self.runs,
            seed: self.seed,
            step: self.step,
            k_values,
            count: self.count,
            pflip: self.pflip,
        })
    }

    fn resolve(&self, k_is_list: bool) -> Result<RunConfig, Error> {
        let file = match &self.config {
            Some(path) => Some(Overrides::parse(&fs::read_to_string(path)?)?),
            None => None,
        };
        Ok(RunConfig::resolve(
            file.as_ref(),
            &self.overrides(k_is_list)?,
        ))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    let common = match &command {
        Command::Compare(c)
        | Command::Sweep(c)
        | Command::Blocksize(c)
        | Command::Clouds(c)
        | Command::Config(c) => c,
        Command::Run { common, .. } => common,
    };
    let jobs = common.jobs.unwrap_or(0);
    if common.jobs == Some(0) {
        return Err(Error::InvalidParameter {
            name: "jobs".into(),
            reason: "must be at least 1".into(),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    pool.install(|| dispatch(&command))
}

fn dispatch(command: &Command) -> Result<(), Error> {
    match command {
        Command::Compare(c) => compare(c),
        Command::Run { common, trace } => batch(common, trace.as_deref()),
        Command::Sweep(c) => {
            let cfg = c.resolve(false)?;
            let problem = cfg.validate()?;
            let cells = sweep_grid(&problem, &cfg.sea_config(), cfg.step, cfg.runs, cfg.seed)?;
            emit(c.out.as_deref(), "sweep.csv", |w| {
                write_sweep_csv(&cells, w)
            })
        }
        Command::Blocksize(c) => {
            let cfg = c.resolve(true)?;
            let problem = cfg.validate()?;
            let rows = block_size_study(
                &problem,
                &cfg.sea_config(),
                &cfg.k_values,
                cfg.runs,
                cfg.seed,
            )?;
            emit(c.out.as_deref(), "blocksize.csv", |w| {
                write_blocksize_csv(&rows, w)
            })
        }
        Command::Clouds(c) => {
            let cfg = c.resolve(false)?;
            let rows = fitness_clouds(cfg.count, cfg.n, cfg.k, cfg.pflip, cfg.seed)?;
            emit(c.out.as_deref(), "clouds.csv", |w| {
                write_clouds_csv(&rows, w)
            })
        }
        Command::Config(c) => {
            let cfg = c.resolve(false)?;
            cfg.validate()?;
            emit(c.out.as_deref(), "config.txt", |w| {
                w.write_all(cfg.to_kv().as_bytes())?;
                Ok(())
            })
        }
    }
}

fn compare(c: &Common) -> Result<(), Error> {
    let cfg = c.resolve(false)?;
    let problem = cfg.validate()?;
    let sea = cfg.sea_config();
    let sga = run_batch(Algorithm::Sga, &sea, &problem, cfg.runs, cfg.seed)?;
    let two = run_batch(Algorithm::Sea, &sea, &problem, cfg.runs, cfg.seed)?;

    println!(
        "{} n={} k={} runs={} seed={} max-gen={}",
        cfg.problem, cfg.n, cfg.k, cfg.runs, cfg.seed, cfg.max_gen
    );
    println!("{:<10}{:>8}{:>10}", "algorithm", "SR%", "GNTO");
    for (name, r) in [("SGA", &sga), ("2-SEA", &two)] {
        println!("{:<10}{:>8.1}{:>10}", name, r.sr_percent, gnto_render(r));
    }
    if let Some(dir) = &c.out {
        write_file(dir, "compare_sga.csv", |w| write_batch_csv(&sga, w))?;
        write_file(dir, "compare_sea.csv", |w| write_batch_csv(&two, w))?;
    }
    Ok(())
}

fn batch(c: &Common, trace: Option<&Path>) -> Result<(), Error> {
    let cfg = c.resolve(false)?;
    let problem = cfg.validate()?;
    let report: ExperimentReport = run_batch(
        cfg.algorithm,
        &cfg.sea_config(),
        &problem,
        cfg.runs,
        cfg.seed,
    )?;
    let name = format!("run_{}.csv", cfg.algorithm);
    emit(c.out.as_deref(), &name, |w| write_batch_csv(&report, w))?;
    eprintln!(
        "{}: SR {:.1}% GNTO {}",
        cfg.algorithm,
        report.sr_percent,
        gnto_render(&report)
    );
    if let Some(path) = trace {
        let mut w = BufWriter::new(File::create(path)?);
        write_trace_csv(&report.per_run[0], &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn emit(
    dir: Option<&Path>,
    name: &str,
    body: impl FnOnce(&mut dyn Write) -> Result<(), Error>,
) -> Result<(), Error> {
    match dir {
        Some(dir) => write_file(dir, name, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn write_file(
    dir: &Path,
    name: &str,
    body: impl FnOnce(&mut dyn Write) -> Result<(), Error>,
) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

//! Batches of independent runs and the studies built on them, with their
//! CSV outputs.
//!
//! Every run seed is a pure function of the master seed and the run's
//! coordinates (see [`run_seed`]), and results are collected in coordinate
//! order, so reports are identical whatever the degree of parallelism.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bbc::{BlockGenome, CodingState};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::ga::{best_index, run_sga, Individual};
use crate::objectives::{one_max, Fitness, Problem};
use crate::rng::{mix_seed, FlipRate, RandomSource};
use crate::sea::{run_sea, SeaConfig};

/// Trace of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub seed: u64,
    pub max_gen: u32,
    pub success: bool,
    /// Generation at which the optimum first appeared (0 = initial population).
    pub gen_to_opt: Option<u32>,
    /// Best fitness of the population after each generation, starting at generation 0.
    pub best_curve: Vec<Fitness>,
    /// Members per state after each generation; empty for the simple GA.
    pub state_counts: Vec<[u32; 2]>,
}

impl RunRecord {
    /// Generations to optimum, with failures counted at the budget.
    pub fn generations(&self) -> u32 {
        self.gen_to_opt.unwrap_or(self.max_gen)
    }

    pub fn final_best(&self) -> Fitness {
        *self
            .best_curve
            .last()
            .expect("a run observes at least generation 0")
    }

    pub fn curve(&self) -> impl Iterator<Item = (u32, Fitness)> + '_ {
        self.best_curve
            .iter()
            .enumerate()
            .map(|(g, &f)| (g as u32, f))
    }
}

/// Accumulates a [`RunRecord`] generation by generation.
pub(crate) struct RunTracker {
    problem: Problem,
    record: RunRecord,
}

impl RunTracker {
    pub(crate) fn new(seed: u64, max_gen: u32, problem: Problem) -> Self {
        Self {
            problem,
            record: RunRecord {
                seed,
                max_gen,
                success: false,
                gen_to_opt: None,
                best_curve: Vec::new(),
                state_counts: Vec::new(),
            },
        }
    }

    pub(crate) fn observe(&mut self, pop: &[Individual]) {
        let best = pop[best_index(pop, &self.problem).expect("empty population")].fitness();
        if let Some(&prev) = self.record.best_curve.last() {
            debug_assert!(!self.problem.better(prev, best), "best fitness worsened");
        }
        let gen = self.record.best_curve.len() as u32;
        self.record.best_curve.push(best);
        if !self.record.success && self.problem.is_optimal(best) {
            self.record.success = true;
            self.record.gen_to_opt = Some(gen);
        }
    }

    pub(crate) fn observe_with_states(&mut self, pop: &[Individual], counts: [u32; 2]) {
        self.observe(pop);
        self.record.state_counts.push(counts);
    }

    pub(crate) fn solved(&self) -> bool {
        self.record.success
    }

    pub(crate) fn finish(self) -> RunRecord {
        self.record
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Sga,
    Sea,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sga => "sga",
            Algorithm::Sea => "sea",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sga" => Ok(Algorithm::Sga),
            "sea" | "2-sea" => Ok(Algorithm::Sea),
            other => Err(Error::param(
                "algorithm",
                format!("unknown algorithm {other:?}"),
            )),
        }
    }
}

/// Aggregate success rate and generations-to-optimum over a batch.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub runs: usize,
    pub max_gen: u32,
    pub sr_percent: f64,
    /// Mean generations with failed runs counted at `max_gen`.
    pub gnto_all: f64,
    /// Mean generations over successful runs only.
    pub gnto_success: Option<f64>,
    pub per_run: Vec<RunRecord>,
}

impl ExperimentReport {
    pub fn from_records(per_run: Vec<RunRecord>, max_gen: u32) -> Self {
        let runs = per_run.len();
        let successes: Vec<u64> = per_run
            .iter()
            .filter_map(|r| r.gen_to_opt.map(u64::from))
            .collect();
        let total: u64 = per_run.iter().map(|r| u64::from(r.generations())).sum();
        let gnto_all = if runs == 0 {
            0.0
        } else {
            total as f64 / runs as f64
        };
        let gnto_success = (!successes.is_empty())
            .then(|| successes.iter().sum::<u64>() as f64 / successes.len() as f64);
        let sr_percent = if runs == 0 {
            0.0
        } else {
            100.0 * successes.len() as f64 / runs as f64
        };
        Self {
            runs,
            max_gen,
            sr_percent,
            gnto_all,
            gnto_success,
            per_run,
        }
    }

    pub fn successes(&self) -> usize {
        self.per_run.iter().filter(|r| r.success).count()
    }
}

/// Seed of run `index` under `master`.
pub fn run_seed(master: u64, index: u64) -> u64 {
    mix_seed(master, index)
}

/// Master seed of sweep cell `(row, col)`.
pub fn cell_seed(master: u64, row: u64, col: u64) -> u64 {
    mix_seed(mix_seed(master, row), col ^ 0xC3C3_0000_0000_0000)
}

/// Master seed of the block-size study entry for `k`.
pub fn block_seed(master: u64, k: usize) -> u64 {
    mix_seed(master, (k as u64) ^ 0xB10C_0000_0000_0000)
}

fn run_one(
    algorithm: Algorithm,
    cfg: &SeaConfig,
    problem: &Problem,
    seed: u64,
) -> Result<RunRecord> {
    match algorithm {
        Algorithm::Sga => run_sga(&cfg.ga, problem, seed),
        Algorithm::Sea => run_sea(cfg, problem, seed),
    }
}

/// `runs` independent runs of `algorithm`. The simple GA uses `cfg.ga` only.
pub fn run_batch(
    algorithm: Algorithm,
    cfg: &SeaConfig,
    problem: &Problem,
    runs: usize,
    master_seed: u64,
) -> Result<ExperimentReport> {
    if runs == 0 {
        return Err(Error::param("runs", "must be at least 1"));
    }
    match algorithm {
        Algorithm::Sga => cfg.ga.validate(problem)?,
        Algorithm::Sea => cfg.validate(problem)?,
    }
    let records = (0..runs as u64)
        .into_par_iter()
        .map(|i| run_one(algorithm, cfg, problem, run_seed(master_seed, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport::from_records(records, cfg.ga.max_gen))
}

/// GNTO as printed in comparison tables: the mean when most runs succeed,
/// `"<max_gen>+"` when failures dominate.
pub fn gnto_render(report: &ExperimentReport) -> String {
    let max_gen = report.max_gen as f64;
    if report.sr_percent < 50.0 || report.gnto_all >= max_gen {
        format!("{}+", report.max_gen)
    } else {
        format!("{}", report.gnto_all.round() as u64)
    }
}

/// Evenly spaced probabilities `0, step, 2 step, ...` up to 1.
pub fn grid_points(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::param("step", format!("{step} is not in (0, 1]")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((i as f64 * step * 1e6).round() / 1e6).min(1.0))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub p_mut_state: f64,
    pub p_mut_per_bit: f64,
    pub report: ExperimentReport,
}

/// SEA success rate over the `p_mut_state x p_mut_per_bit` grid, rows by
/// `p_mut_state`.
pub fn sweep_grid(
    problem: &Problem,
    base: &SeaConfig,
    step: f64,
    runs: usize,
    master_seed: u64,
) -> Result<Vec<SweepCell>> {
    let points = grid_points(step)?;
    base.validate(problem)?;
    let coords: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..points.len()).map(move |j| (i, j)))
        .collect();
    coords
        .into_par_iter()
        .map(|(i, j)| {
            let mut cfg = base.clone();
            cfg.p_mut_state = points[i];
            cfg.ga.p_mut_per_bit = points[j];
            let seed = cell_seed(master_seed, i as u64, j as u64);
            Ok(SweepCell {
                p_mut_state: points[i],
                p_mut_per_bit: points[j],
                report: run_batch(Algorithm::Sea, &cfg, problem, runs, seed)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockSizeRow {
    pub k: usize,
    pub report: ExperimentReport,
}

/// The SEA at each block size in `k_values`, the number of blocks fixed by `base`.
pub fn block_size_study(
    problem: &Problem,
    base: &SeaConfig,
    k_values: &[usize],
    runs: usize,
    master_seed: u64,
) -> Result<Vec<BlockSizeRow>> {
    if let Some(&k) = k_values.iter().find(|&&k| k % 2 == 0) {
        return Err(Error::InvalidBlockSize(k));
    }
    k_values
        .par_iter()
        .map(|&k| {
            let mut cfg = base.clone();
            cfg.ga.block_k = k;
            Ok(BlockSizeRow {
                k,
                report: run_batch(
                    Algorithm::Sea,
                    &cfg,
                    problem,
                    runs,
                    block_seed(master_seed, k),
                )?,
            })
        })
        .collect()
}

/// Default block sizes for the block-size study: odd values 1 to 19.
pub fn default_block_sizes() -> Vec<usize> {
    (1..=19).step_by(2).collect()
}

/// ONEMAX fitness of one random genome before and after conversion and
/// mutation sequences. Compositions read right to left, so `m_conv1_m_conv0`
/// is `m(conv_1(m(conv_0(x))))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CloudRow {
    pub idx: usize,
    pub f: u32,
    pub m: u32,
    pub m_conv1: u32,
    pub m_conv0: u32,
    pub m_conv1_m_conv0: u32,
    pub m_conv0_m_conv1: u32,
}

/// Fitness-cloud samples on ONEMAX: `count` uniform genomes of `n` blocks of
/// `k` bits, each mutation a fresh bit-flip pass at `p_bit_flip`.
pub fn fitness_clouds(
    count: usize,
    n: usize,
    k: usize,
    p_bit_flip: f64,
    seed: u64,
) -> Result<Vec<CloudRow>> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidBlockSize(k));
    }
    if n == 0 {
        return Err(Error::EmptyGenome);
    }
    crate::ga::check_probability("pflip", p_bit_flip)?;
    let rate = FlipRate::new(p_bit_flip);
    let rows = (0..count)
        .into_par_iter()
        .map(|idx| {
            let mut rng = RandomSource::new(run_seed(seed, idx as u64));
            let x = BlockGenome::from_parts_unchecked(BitString::random(n * k, &mut rng), k);
            let fit = |w: &BlockGenome| one_max(&w.decode()).0;
            let mut m = |w: &BlockGenome| {
                let mut bits = w.bits().clone();
                bits.mutate(rate, &mut rng);
                BlockGenome::from_parts_unchecked(bits, k)
            };
            let f = fit(&x);
            let conv1 = x.convert(CodingState::One);
            let conv0 = x.convert(CodingState::Zero);
            assert_eq!(fit(&conv1), f, "conversion changed fitness");
            assert_eq!(fit(&conv0), f, "conversion changed fitness");

            let m_x = m(&x);
            let m_c1 = m(&conv1);
            let m_c0 = m(&conv0);
            let inner0 = m(&conv0);
            let tour_1_last = m(&inner0.convert(CodingState::One));
            let inner1 = m(&conv1);
            let tour_0_last = m(&inner1.convert(CodingState::Zero));
            CloudRow {
                idx,
                f,
                m: fit(&m_x),
                m_conv1: fit(&m_c1),
                m_conv0: fit(&m_c0),
                m_conv1_m_conv0: fit(&tour_1_last),
                m_conv0_m_conv1: fit(&tour_0_last),
            }
        })
        .collect();
    Ok(rows)
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

#[derive(Serialize)]
struct BatchRow {
    run: usize,
    seed: u64,
    success: bool,
    gen_to_opt: String,
    best_fitness: Fitness,
}

/// `run,seed,success,gen_to_opt,best_fitness`; unsolved runs read `exceeded`.
pub fn write_batch_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    for (run, r) in report.per_run.iter().enumerate() {
        w.serialize(BatchRow {
            run,
            seed: r.seed,
            success: r.success,
            gen_to_opt: r
                .gen_to_opt
                .map_or_else(|| "exceeded".to_string(), |g| g.to_string()),
            best_fitness: r.final_best(),
        })?;
    }
    if report.per_run.is_empty() {
        w.write_record(["run", "seed", "success", "gen_to_opt", "best_fitness"])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    p_mut_state: f64,
    p_mut_per_bit: f64,
    sr_percent: f64,
    gnto_all: f64,
}

/// `p_mut_state,p_mut_per_bit,sr_percent,gnto_all`.
pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    if cells.is_empty() {
        w.write_record(["p_mut_state", "p_mut_per_bit", "sr_percent", "gnto_all"])?;
    }
    for c in cells {
        w.serialize(SweepRow {
            p_mut_state: c.p_mut_state,
            p_mut_per_bit: c.p_mut_per_bit,
            sr_percent: c.report.sr_percent,
            gnto_all: c.report.gnto_all,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BlockRow {
    k: usize,
    sr_percent: f64,
    gnto_all: f64,
    gnto_success: String,
}

/// `k,sr_percent,gnto_all,gnto_success`; `n/a` when no run succeeded.
pub fn write_blocksize_csv<W: Write>(rows: &[BlockSizeRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    if rows.is_empty() {
        w.write_record(["k", "sr_percent", "gnto_all", "gnto_success"])?;
    }
    for r in rows {
        w.serialize(BlockRow {
            k: r.k,
            sr_percent: r.report.sr_percent,
            gnto_all: r.report.gnto_all,
            gnto_success: r
                .report
                .gnto_success
                .map_or_else(|| "n/a".to_string(), |g| format!("{g:?}")),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// `idx,f,m,m_conv1,m_conv0,m_conv1_m_conv0,m_conv0_m_conv1`.
pub fn write_clouds_csv<W: Write>(rows: &[CloudRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    if rows.is_empty() {
        w.write_record([
            "idx",
            "f",
            "m",
            "m_conv1",
            "m_conv0",
            "m_conv1_m_conv0",
            "m_conv0_m_conv1",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-generation trace of one run: `generation,best_fitness,state_0,state_1`.
pub fn write_trace_csv<W: Write>(record: &RunRecord, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["generation", "best_fitness", "state_0", "state_1"])?;
    for (g, f) in record.curve() {
        let [s0, s1] = record
            .state_counts
            .get(g as usize)
            .copied()
            .unwrap_or_default();
        w.write_record([g.to_string(), f.to_string(), s0.to_string(), s1.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

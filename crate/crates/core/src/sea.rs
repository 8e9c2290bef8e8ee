//! The states-based evolutionary algorithm.
//!
//! Each generation the whole population is split by coding state, every
//! state group runs one generation of its own simple GA, the groups are
//! merged, members switch state (and are re-encoded) with probability
//! `p_mut_state`, and a tournament over the merged pool with global elitism
//! forms the next whole population.

use crate::bbc::CodingState;
use crate::error::{Error, Result};
use crate::experiments::{RunRecord, RunTracker};
use crate::ga::{self, best_index, sga_generation, tournament_index, GaConfig, Individual};
use crate::objectives::Problem;
use crate::rng::{mix_seed, RandomSource};

#[derive(Clone, Debug, PartialEq)]
pub struct SeaConfig {
    /// Shared by every state; `pop_size` counts the whole population.
    pub ga: GaConfig,
    /// Distinct states in play.
    pub states: Vec<CodingState>,
    pub p_mut_state: f64,
}

impl SeaConfig {
    pub fn two_state(ga: GaConfig, p_mut_state: f64) -> Self {
        Self {
            ga,
            states: CodingState::ALL.to_vec(),
            p_mut_state,
        }
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn validate(&self, problem: &Problem) -> Result<()> {
        self.ga.validate(problem)?;
        ga::check_probability("p-mut-state", self.p_mut_state)?;
        if self.states.is_empty() {
            return Err(Error::param("states", "at least one state is required"));
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(Error::param("states", format!("state {s} listed twice")));
            }
        }
        Ok(())
    }
}

/// Partitions `pop` by state, in the order of `states`, keeping relative order.
pub fn split(pop: Vec<Individual>, states: &[CodingState]) -> Vec<(CodingState, Vec<Individual>)> {
    let mut groups: Vec<(CodingState, Vec<Individual>)> =
        states.iter().map(|&s| (s, Vec::new())).collect();
    for ind in pop {
        let slot = groups
            .iter_mut()
            .find(|(s, _)| *s == ind.state())
            .expect("member tagged with a state that is not in play");
        slot.1.push(ind);
    }
    groups
}

/// Concatenates the groups, tags untouched.
pub fn merge(groups: Vec<(CodingState, Vec<Individual>)>) -> Vec<Individual> {
    groups.into_iter().flat_map(|(_, g)| g).collect()
}

/// One GA generation inside a single state group. Groups with fewer than
/// two members have nothing to recombine and pass through unchanged.
pub fn state_generation(
    group: Vec<Individual>,
    cfg: &SeaConfig,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Vec<Individual> {
    if group.len() < 2 {
        return group;
    }
    sga_generation(&group, &cfg.ga, problem, rng)
}

/// Each member moves to a different state with probability `p_mut_state`,
/// its genome converted to the new state's coding. Fitness is untouched.
pub fn mutate_states(
    mut pop: Vec<Individual>,
    cfg: &SeaConfig,
    rng: &mut RandomSource,
) -> Vec<Individual> {
    for ind in pop.iter_mut() {
        if !rng.chance(cfg.p_mut_state) {
            continue;
        }
        let current = ind.state();
        let others: Vec<CodingState> = cfg
            .states
            .iter()
            .copied()
            .filter(|&s| s != current)
            .collect();
        let target = match others.len() {
            0 => continue,
            1 => others[0],
            n => others[rng.below(n)],
        };
        ind.convert_to(target);
        debug_assert_eq!(ind.genome().convert(target), *ind.genome());
    }
    pop
}

/// Tournament selection of `pop_size` members from the merged pool, then
/// elitism: if no selected member matches the pool's best fitness, the best
/// member (with its state) replaces a random selected one.
pub fn replacement_and_elitism(
    pop: &[Individual],
    cfg: &SeaConfig,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Vec<Individual> {
    let Some(best) = best_index(pop, problem) else {
        return Vec::new();
    };
    let n = cfg.ga.pop_size;
    let mut next: Vec<Individual> = (0..n)
        .map(|_| pop[tournament_index(pop, cfg.ga.t_size, problem, rng)].clone())
        .collect();
    let best_fit = pop[best].fitness();
    if !next.iter().any(|x| x.fitness() == best_fit) {
        let slot = rng.below(n);
        next[slot] = pop[best].clone();
    }
    next
}

fn state_counts(pop: &[Individual]) -> [u32; 2] {
    let mut c = [0; 2];
    for ind in pop {
        c[ind.state().index()] += 1;
    }
    c
}

fn initial_population(
    cfg: &SeaConfig,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Vec<Individual> {
    (0..cfg.ga.pop_size)
        .map(|_| {
            let state = cfg.states[rng.below(cfg.n_states())];
            let mut ind = ga::random_individual(&cfg.ga, problem, rng, state);
            ind.convert_to(state);
            ind
        })
        .collect()
}

/// One full SEA generation from `pop`. The per-state generations draw from
/// streams derived from a single key taken from `rng`, so they could run in
/// any order (or concurrently) with the same result.
pub fn sea_generation(
    pop: Vec<Individual>,
    cfg: &SeaConfig,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Vec<Individual> {
    let key = rng.next_u64();
    let groups = split(pop, &cfg.states)
        .into_iter()
        .map(|(state, group)| {
            let mut sub = RandomSource::new(mix_seed(key, state.index() as u64));
            (state, state_generation(group, cfg, problem, &mut sub))
        })
        .collect();
    let merged = merge(groups);

    #[cfg(debug_assertions)]
    let before = sorted_fitness(&merged);
    let merged = mutate_states(merged, cfg, rng);
    #[cfg(debug_assertions)]
    debug_assert_eq!(
        before,
        sorted_fitness(&merged),
        "state mutation changed fitness"
    );

    replacement_and_elitism(&merged, cfg, problem, rng)
}

#[cfg(debug_assertions)]
fn sorted_fitness(pop: &[Individual]) -> Vec<crate::objectives::Fitness> {
    let mut f: Vec<_> = pop.iter().map(|x| x.fitness()).collect();
    f.sort_unstable();
    f
}

/// Runs the SEA from `initial` until the optimum appears or the budget is spent.
pub fn run_sea_from(
    initial: Vec<Individual>,
    cfg: &SeaConfig,
    problem: &Problem,
    seed: u64,
    rng: &mut RandomSource,
) -> RunRecord {
    let mut pop = initial;
    let mut tracker = RunTracker::new(seed, cfg.ga.max_gen, *problem);
    tracker.observe_with_states(&pop, state_counts(&pop));
    for _ in 0..cfg.ga.max_gen {
        if tracker.solved() {
            break;
        }
        pop = sea_generation(pop, cfg, problem, rng);
        tracker.observe_with_states(&pop, state_counts(&pop));
    }
    tracker.finish()
}

/// Runs the SEA from a uniform random population whose members get uniform
/// random states and are encoded in their state's coding.
pub fn run_sea(cfg: &SeaConfig, problem: &Problem, seed: u64) -> Result<RunRecord> {
    cfg.validate(problem)?;
    let mut rng = RandomSource::new(seed);
    let pop = initial_population(cfg, problem, &mut rng);
    Ok(run_sea_from(pop, cfg, problem, seed, &mut rng))
}

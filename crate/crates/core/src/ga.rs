//! Genetic operators and the simple generational GA with elitism.

use std::cmp::Ordering;

use crate::bbc::{BlockGenome, CodingState};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::experiments::{RunRecord, RunTracker};
use crate::objectives::{Fitness, Problem};
use crate::rng::{FlipRate, RandomSource};

/// A genome with its cached fitness and coding-state tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    genome: BlockGenome,
    fitness: Fitness,
    state: CodingState,
}

impl Individual {
    pub fn new(genome: BlockGenome, state: CodingState, problem: &Problem) -> Result<Self> {
        let fitness = problem.evaluate_bbc(&genome)?;
        Ok(Self {
            genome,
            fitness,
            state,
        })
    }

    pub(crate) fn evaluated(genome: BlockGenome, state: CodingState, problem: &Problem) -> Self {
        let fitness = problem.fitness_of(&genome);
        Self {
            genome,
            fitness,
            state,
        }
    }

    pub fn genome(&self) -> &BlockGenome {
        &self.genome
    }

    pub fn fitness(&self) -> Fitness {
        self.fitness
    }

    pub fn state(&self) -> CodingState {
        self.state
    }

    /// Re-encodes the genome for `state`. The phenotype, and so the cached
    /// fitness, is unchanged.
    pub fn convert_to(&mut self, state: CodingState) {
        self.genome.convert_in_place(state);
        self.state = state;
    }

    fn refresh(&mut self, problem: &Problem) {
        self.fitness = problem.fitness_of(&self.genome);
    }
}

/// Parameters of one simple GA.
#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub max_gen: u32,
    pub pop_size: usize,
    /// Number of blocks (phenotype length).
    pub blocks_n: usize,
    pub block_k: usize,
    pub t_size: usize,
    pub p_cross: f64,
    /// Probability that an offspring goes through bit-flip mutation at all.
    pub p_mut: f64,
    /// Per-bit flip probability once mutation fires.
    pub p_mut_per_bit: f64,
    pub elitism: bool,
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(
            name,
            format!("{p} is not a probability in [0, 1]"),
        ))
    }
}

impl GaConfig {
    pub fn vec_size(&self) -> usize {
        self.blocks_n * self.block_k
    }

    pub fn validate(&self, problem: &Problem) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::param("pop-size", "must be at least 2"));
        }
        if self.t_size < 1 {
            return Err(Error::param("t-size", "must be at least 1"));
        }
        if self.block_k.is_multiple_of(2) {
            return Err(Error::InvalidBlockSize(self.block_k));
        }
        if self.blocks_n != problem.length() {
            return Err(Error::LengthMismatch {
                expected: problem.length(),
                actual: self.blocks_n,
            });
        }
        check_probability("p-cross", self.p_cross)?;
        check_probability("p-mut", self.p_mut)?;
        check_probability("p-mut-per-bit", self.p_mut_per_bit)
    }
}

/// Uniform random genome of `vec_size` bits, evaluated and tagged with `state`.
pub fn random_individual(
    cfg: &GaConfig,
    problem: &Problem,
    rng: &mut RandomSource,
    state: CodingState,
) -> Individual {
    let bits = BitString::random(cfg.vec_size(), rng);
    Individual::evaluated(
        BlockGenome::from_parts_unchecked(bits, cfg.block_k),
        state,
        problem,
    )
}

/// Index of the winner of a `t_size` tournament drawn with replacement.
/// Ties are broken uniformly among the tied contestants.
pub fn tournament_index(
    pop: &[Individual],
    t_size: usize,
    problem: &Problem,
    rng: &mut RandomSource,
) -> usize {
    assert!(!pop.is_empty(), "tournament over an empty population");
    let mut best = rng.below(pop.len());
    let mut ties = 1;
    for _ in 1..t_size {
        let c = rng.below(pop.len());
        match problem.compare(pop[c].fitness, pop[best].fitness) {
            Ordering::Greater => {
                best = c;
                ties = 1;
            }
            Ordering::Equal => {
                ties += 1;
                if rng.below(ties) == 0 {
                    best = c;
                }
            }
            Ordering::Less => {}
        }
    }
    best
}

pub fn tournament_select<'a>(
    pop: &'a [Individual],
    t_size: usize,
    problem: &Problem,
    rng: &mut RandomSource,
) -> &'a Individual {
    &pop[tournament_index(pop, t_size, problem, rng)]
}

/// Exchanges tails at a fixed `cut`, without re-evaluating.
fn exchange(a: &Individual, b: &Individual, cut: usize) -> (Individual, Individual) {
    let (l, r) = BitString::exchange(a.genome.bits(), b.genome.bits(), cut);
    let k = a.genome.block_k();
    (
        Individual {
            genome: BlockGenome::from_parts_unchecked(l, k),
            fitness: a.fitness,
            state: a.state,
        },
        Individual {
            genome: BlockGenome::from_parts_unchecked(r, k),
            fitness: b.fitness,
            state: b.state,
        },
    )
}

/// One-point crossover at a caller-chosen cut in `[1, L - 1]`.
pub fn crossover_at(
    a: &Individual,
    b: &Individual,
    cut: usize,
    problem: &Problem,
) -> Result<(Individual, Individual)> {
    let len = a.genome.len();
    if b.genome.len() != len || b.genome.block_k() != a.genome.block_k() {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: b.genome.len(),
        });
    }
    if len < 2 {
        return Err(Error::GenomeTooShort(len));
    }
    if !(1..len).contains(&cut) {
        return Err(Error::param(
            "cut",
            format!("{cut} outside [1, {}]", len - 1),
        ));
    }
    let (mut x, mut y) = exchange(a, b, cut);
    x.refresh(problem);
    y.refresh(problem);
    Ok((x, y))
}

/// One-point crossover with the cut drawn uniformly from `[1, L - 1]`.
pub fn one_point_crossover(
    a: &Individual,
    b: &Individual,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Result<(Individual, Individual)> {
    let len = a.genome.len();
    if len < 2 {
        return Err(Error::GenomeTooShort(len));
    }
    let cut = rng.between(1, len - 1);
    crossover_at(a, b, cut, problem)
}

/// Flips each bit independently with probability `p_mut_per_bit`.
pub fn bit_flip_mutation(
    ind: &Individual,
    p_mut_per_bit: f64,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Individual {
    let mut out = ind.clone();
    out.genome
        .bits_mut()
        .mutate(FlipRate::new(p_mut_per_bit), rng);
    out.refresh(problem);
    out
}

/// Index of the best member; the first one wins ties.
pub(crate) fn best_index(pop: &[Individual], problem: &Problem) -> Option<usize> {
    let mut it = pop.iter().enumerate();
    let (mut best, first) = it.next()?;
    let mut best_fit = first.fitness;
    for (i, ind) in it {
        if problem.better(ind.fitness, best_fit) {
            best = i;
            best_fit = ind.fitness;
        }
    }
    Some(best)
}

/// One generation: tournament parents, crossover, mutation, generational
/// replacement, then elitism (the previous best replaces a random offspring
/// if the offspring are strictly worse).
pub fn sga_generation(
    pop: &[Individual],
    cfg: &GaConfig,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Vec<Individual> {
    let n = pop.len();
    let Some(prev_best) = best_index(pop, problem) else {
        return Vec::new();
    };
    let rate = FlipRate::new(cfg.p_mut_per_bit);
    let mut offspring = Vec::with_capacity(n);

    while offspring.len() < n {
        let a = &pop[tournament_index(pop, cfg.t_size, problem, rng)];
        let b = &pop[tournament_index(pop, cfg.t_size, problem, rng)];
        let len = a.genome.len();
        let (x, y) = if rng.chance(cfg.p_cross) && len >= 2 {
            exchange(a, b, rng.between(1, len - 1))
        } else {
            (a.clone(), b.clone())
        };
        for mut child in [x, y] {
            if offspring.len() == n {
                break;
            }
            if rng.chance(cfg.p_mut) {
                child.genome.bits_mut().mutate(rate, rng);
            }
            child.refresh(problem);
            offspring.push(child);
        }
    }

    if cfg.elitism {
        let new_best = best_index(&offspring, problem).expect("offspring is nonempty");
        if problem.better(pop[prev_best].fitness, offspring[new_best].fitness) {
            let slot = rng.below(n);
            offspring[slot] = pop[prev_best].clone();
        }
    }
    offspring
}

/// Runs the simple GA from a uniform random population until the optimum
/// appears or `max_gen` generations have passed.
pub fn run_sga(cfg: &GaConfig, problem: &Problem, seed: u64) -> Result<RunRecord> {
    cfg.validate(problem)?;
    let mut rng = RandomSource::new(seed);
    let mut pop: Vec<Individual> = (0..cfg.pop_size)
        .map(|_| random_individual(cfg, problem, &mut rng, CodingState::One))
        .collect();
    let mut tracker = RunTracker::new(seed, cfg.max_gen, *problem);
    tracker.observe(&pop);
    for _ in 0..cfg.max_gen {
        if tracker.solved() {
            break;
        }
        pop = sga_generation(&pop, cfg, problem, &mut rng);
        tracker.observe(&pop);
    }
    Ok(tracker.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::ProblemKind;

    fn problem(kind: ProblemKind, n: usize) -> Problem {
        Problem::new(kind, n).unwrap()
    }

    fn cfg(n: usize, k: usize) -> GaConfig {
        GaConfig {
            max_gen: 200,
            pop_size: 20,
            blocks_n: n,
            block_k: k,
            t_size: 2,
            p_cross: 0.6,
            p_mut: 1.0,
            p_mut_per_bit: 0.05,
            elitism: true,
        }
    }

    fn ind(bits: &str, k: usize, p: &Problem) -> Individual {
        Individual::new(BlockGenome::parse(bits, k).unwrap(), CodingState::One, p).unwrap()
    }

    #[test]
    fn random_individual_shape_and_determinism() {
        let p = problem(ProblemKind::OneMax, 10);
        let c = cfg(10, 3);
        let a = random_individual(&c, &p, &mut RandomSource::new(1), CodingState::Zero);
        let b = random_individual(&c, &p, &mut RandomSource::new(1), CodingState::Zero);
        assert_eq!(a, b);
        assert_eq!(a.genome().len(), 30);
        assert_eq!(a.state(), CodingState::Zero);
        assert_eq!(a.fitness(), p.evaluate_bbc(a.genome()).unwrap());
    }

    #[test]
    fn random_individual_density() {
        let p = problem(ProblemKind::OneMax, 100);
        let c = cfg(100, 1);
        let mut rng = RandomSource::new(77);
        let ones: usize = (0..100)
            .map(|_| {
                random_individual(&c, &p, &mut rng, CodingState::One)
                    .genome()
                    .bits()
                    .count_ones()
            })
            .sum();
        let density = ones as f64 / 10_000.0;
        assert!((0.49..=0.51).contains(&density), "density {density}");
    }

    #[test]
    fn tournament_picks_better_under_direction() {
        let max = problem(ProblemKind::OneMax, 4);
        let pop = [ind("1111", 1, &max), ind("1100", 1, &max)];
        let mut rng = RandomSource::new(0);
        // With t_size large enough both are sampled almost surely.
        for _ in 0..50 {
            assert_eq!(
                tournament_select(&pop, 16, &max, &mut rng).fitness(),
                Fitness(4)
            );
        }
        let min = problem(ProblemKind::OnOff, 4);
        let pop = [ind("1010", 1, &min), ind("0101", 1, &min)];
        for _ in 0..50 {
            assert_eq!(
                tournament_select(&pop, 16, &min, &mut rng).fitness(),
                Fitness(0)
            );
        }
    }

    #[test]
    fn unit_tournament_is_uniform() {
        let p = problem(ProblemKind::OneMax, 2);
        let pop = [ind("11", 1, &p), ind("00", 1, &p), ind("10", 1, &p)];
        let mut rng = RandomSource::new(4);
        let mut hits = [0; 3];
        for _ in 0..3000 {
            hits[tournament_index(&pop, 1, &p, &mut rng)] += 1;
        }
        assert!(hits.iter().all(|&h| (900..1100).contains(&h)), "{hits:?}");
    }

    #[test]
    fn tied_tournament_breaks_ties_randomly() {
        let p = problem(ProblemKind::Needle, 4);
        let pop = [ind("0000", 1, &p), ind("0100", 1, &p)];
        let mut rng = RandomSource::new(8);
        let first = (0..2000)
            .filter(|_| tournament_index(&pop, 2, &p, &mut rng) == 0)
            .count();
        assert!((900..1100).contains(&first), "{first}");
    }

    #[test]
    fn crossover_examples() {
        let p = problem(ProblemKind::OneMax, 4);
        let (x, y) = crossover_at(&ind("0000", 1, &p), &ind("1111", 1, &p), 2, &p).unwrap();
        assert_eq!(x.genome().to_string(), "0011");
        assert_eq!(y.genome().to_string(), "1100");
        assert_eq!((x.fitness(), y.fitness()), (Fitness(2), Fitness(2)));

        let a = ind("0110", 1, &p);
        let mut rng = RandomSource::new(2);
        let (x, y) = one_point_crossover(&a, &a, &p, &mut rng).unwrap();
        assert_eq!((&x, &y), (&a, &a));

        let one = problem(ProblemKind::OneMax, 1);
        let tiny = ind("1", 1, &one);
        assert!(matches!(
            one_point_crossover(&tiny, &tiny, &one, &mut rng),
            Err(Error::GenomeTooShort(1))
        ));
        assert!(crossover_at(&a, &a, 0, &p).is_err());
        assert!(crossover_at(&a, &a, 4, &p).is_err());
    }

    #[test]
    fn mutation_extremes_and_rate() {
        let p = problem(ProblemKind::OneMax, 100);
        let c = cfg(100, 1);
        let mut rng = RandomSource::new(6);
        let a = random_individual(&c, &p, &mut rng, CodingState::One);
        assert_eq!(bit_flip_mutation(&a, 0.0, &p, &mut rng), a);
        let flipped = bit_flip_mutation(&a, 1.0, &p, &mut rng);
        assert_eq!(flipped.genome().bits(), &a.genome().bits().complement());
        assert_eq!(flipped.fitness(), Fitness(100 - a.fitness().0));

        let mut changed = 0;
        for _ in 0..100 {
            let m = bit_flip_mutation(&a, 0.5, &p, &mut rng);
            changed += m.genome().bits().hamming(a.genome().bits());
        }
        let frac = changed as f64 / 10_000.0;
        assert!((0.48..=0.52).contains(&frac), "{frac}");
    }

    #[test]
    fn generation_without_variation_reuses_parents() {
        let p = problem(ProblemKind::OneMax, 12);
        let mut c = cfg(12, 3);
        c.p_cross = 0.0;
        c.p_mut = 0.0;
        let mut rng = RandomSource::new(10);
        let pop: Vec<_> = (0..c.pop_size)
            .map(|_| random_individual(&c, &p, &mut rng, CodingState::One))
            .collect();
        let next = sga_generation(&pop, &c, &p, &mut rng);
        assert_eq!(next.len(), pop.len());
        assert!(next.iter().all(|x| pop.contains(x)));
    }

    #[test]
    fn odd_population_is_filled_exactly() {
        let p = problem(ProblemKind::OneMax, 8);
        let mut c = cfg(8, 1);
        c.pop_size = 7;
        let mut rng = RandomSource::new(12);
        let mut pop: Vec<_> = (0..7)
            .map(|_| random_individual(&c, &p, &mut rng, CodingState::One))
            .collect();
        for _ in 0..20 {
            pop = sga_generation(&pop, &c, &p, &mut rng);
            assert_eq!(pop.len(), 7);
        }
    }

    #[test]
    fn elitism_keeps_best_from_worsening() {
        for kind in ProblemKind::ALL {
            let p = problem(kind, 16);
            let mut c = cfg(16, 3);
            c.p_mut_per_bit = 0.4;
            let mut rng = RandomSource::new(13);
            let mut pop: Vec<_> = (0..c.pop_size)
                .map(|_| random_individual(&c, &p, &mut rng, CodingState::One))
                .collect();
            let mut best = pop[best_index(&pop, &p).unwrap()].fitness();
            for _ in 0..50 {
                pop = sga_generation(&pop, &c, &p, &mut rng);
                let now = pop[best_index(&pop, &p).unwrap()].fitness();
                assert!(!p.better(best, now), "{kind}: {best} -> {now}");
                assert!(pop.iter().all(|x| x.genome().len() == c.vec_size()));
                assert!(pop
                    .iter()
                    .all(|x| x.fitness() == p.evaluate_bbc(x.genome()).unwrap()));
                best = now;
            }
        }
    }

    #[test]
    fn run_sga_solves_small_onemax_and_is_deterministic() {
        let p = problem(ProblemKind::OneMax, 20);
        let mut c = cfg(20, 1);
        c.max_gen = 2000;
        let r = run_sga(&c, &p, 5).unwrap();
        assert!(r.success, "{r:?}");
        assert_eq!(run_sga(&c, &p, 5).unwrap(), r);
    }

    #[test]
    fn zero_budget_checks_initial_population_only() {
        let p = problem(ProblemKind::OneMax, 2);
        let mut c = cfg(2, 1);
        c.max_gen = 0;
        c.pop_size = 2;
        for seed in 0..20 {
            let r = run_sga(&c, &p, seed).unwrap();
            let mut rng = RandomSource::new(seed);
            let init: Vec<_> = (0..2)
                .map(|_| random_individual(&c, &p, &mut rng, CodingState::One))
                .collect();
            assert_eq!(r.success, init.iter().any(|x| p.is_optimal(x.fitness())));
            assert_eq!(r.best_curve.len(), 1);
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let p = problem(ProblemKind::OneMax, 10);
        let mut c = cfg(10, 3);
        c.p_cross = 1.5;
        assert!(run_sga(&c, &p, 0).is_err());
        let mut c = cfg(10, 4);
        c.block_k = 4;
        assert!(matches!(
            run_sga(&c, &p, 0),
            Err(Error::InvalidBlockSize(4))
        ));
        assert!(run_sga(&cfg(9, 3), &p, 0).is_err());
    }
}

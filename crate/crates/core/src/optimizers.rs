//! Search strategies over the nesting problem.
//!
//! Greedy builds one plan directly. The Monte Carlo and genetic searches work
//! on cluster-ID chromosomes scored by [`Evaluator`]; both are deterministic
//! for a given seed.

use alloc::format;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::encoding::{random_chromosome, Chromosome, Evaluator, FitnessValue};
use crate::error::{Error, Result};
use crate::geometry::RectDim;
use crate::nesting::{greedy_nest, NestingPlan, Piece, PlacementStrategy, TransformPolicy};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct McConfig {
    pub iterations: usize,
    /// Bit positions drawn per iteration; `None` means every bit.
    pub max_flips: Option<usize>,
    pub flip_probability: f64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            iterations: 10_000,
            max_flips: None,
            flip_probability: 0.2,
            seed: 0,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_flips == Some(0) {
            return Err(Error::Configuration("max_flips must be at least 1".into()));
        }
        check_probability("flip_probability", self.flip_probability)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub mutation_probability: f64,
    pub seed: u64,
    /// Carry the two best individuals into the next generation unchanged.
    pub elitism: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            generations: 100,
            crossover_probability: 0.6,
            mutation_probability: 0.1,
            seed: 0,
            elitism: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 || !self.population.is_multiple_of(2) {
            return Err(Error::Configuration(format!(
                "population must be even and at least 2, got {}",
                self.population
            )));
        }
        check_probability("crossover_probability", self.crossover_probability)?;
        check_probability("mutation_probability", self.mutation_probability)
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Configuration(format!("{name} must lie in [0, 1], got {p}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OptimizationResult {
    pub best_plan: NestingPlan,
    pub best_fitness: FitnessValue,
    /// `None` for greedy, which does not search chromosomes.
    pub best_chromosome: Option<Chromosome>,
    /// `(evaluation index, best fitness so far)`, one entry per improvement.
    pub trace: Vec<(usize, FitnessValue)>,
    pub evaluations: usize,
}

pub fn solve_greedy(
    pieces: &[Piece],
    panel: RectDim,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
) -> Result<OptimizationResult> {
    let plan = greedy_nest(pieces, panel, policy, strategy)?;
    let total: f64 = pieces.iter().map(Piece::area).sum();
    let fitness = FitnessValue(plan.panel_count() as f64 * panel.area() - total);
    Ok(OptimizationResult {
        best_plan: plan,
        best_fitness: fitness,
        best_chromosome: None,
        trace: alloc::vec![(0, fitness)],
        evaluations: 1,
    })
}

/// Best-so-far bookkeeping shared by both chromosome searches.
struct Tracker {
    best: Chromosome,
    fitness: FitnessValue,
    trace: Vec<(usize, FitnessValue)>,
    evaluations: usize,
}

impl Tracker {
    fn new(first: Chromosome, fitness: FitnessValue) -> Self {
        Tracker {
            best: first,
            fitness,
            trace: alloc::vec![(0, fitness)],
            evaluations: 1,
        }
    }

    fn offer(&mut self, c: &Chromosome, f: FitnessValue) -> bool {
        let index = self.evaluations;
        self.evaluations += 1;
        if f.is_better_than(self.fitness) {
            self.best = c.clone();
            self.fitness = f;
            self.trace.push((index, f));
            true
        } else {
            false
        }
    }

    fn finish(self, ev: &Evaluator) -> Result<OptimizationResult> {
        let (fitness, plan) = ev.evaluate(&self.best)?;
        debug_assert_eq!(fitness, self.fitness);
        Ok(OptimizationResult {
            best_plan: plan,
            best_fitness: self.fitness,
            best_chromosome: Some(self.best),
            trace: self.trace,
            evaluations: self.evaluations,
        })
    }
}

/// Random bit-flip search that always restarts from the best chromosome.
/// Iterations that happen to flip nothing are not evaluated.
pub fn solve_mc(
    pieces: &[Piece],
    panel: RectDim,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
    cfg: &McConfig,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if pieces.is_empty() {
        return solve_greedy(pieces, panel, policy, strategy);
    }
    let ev = Evaluator::new(pieces, panel, policy, strategy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let first = random_chromosome(pieces.len(), &mut rng)?;
    let f0 = ev.fitness(&first)?;
    let mut tracker = Tracker::new(first, f0);
    let len = tracker.best.len();
    let draws = cfg.max_flips.map_or(len, |m| m.min(len));

    for _ in 0..cfg.iterations {
        let mut working = tracker.best.clone();
        let mut flipped = false;
        let mut flip = |bit: usize, rng: &mut ChaCha8Rng| {
            if rng.random_bool(cfg.flip_probability) {
                working.flip(bit);
                flipped = true;
            }
        };
        if draws == len {
            for bit in 0..len {
                flip(bit, &mut rng);
            }
        } else {
            for bit in index::sample(&mut rng, len, draws).into_vec() {
                flip(bit, &mut rng);
            }
        }
        if flipped {
            let f = ev.fitness(&working)?;
            tracker.offer(&working, f);
        }
    }
    tracker.finish(&ev)
}

pub fn solve_ga(
    pieces: &[Piece],
    panel: RectDim,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
    cfg: &GaConfig,
) -> Result<OptimizationResult> {
    solve_ga_observed(pieces, panel, policy, strategy, cfg, |_, _| {})
}

/// As [`solve_ga`], calling `observer(generation, population)` on every
/// population right after it has been evaluated and sorted.
pub fn solve_ga_observed<F>(
    pieces: &[Piece],
    panel: RectDim,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
    cfg: &GaConfig,
    mut observer: F,
) -> Result<OptimizationResult>
where
    F: FnMut(usize, &[Chromosome]),
{
    cfg.validate()?;
    if pieces.is_empty() {
        return solve_greedy(pieces, panel, policy, strategy);
    }
    let ev = Evaluator::new(pieces, panel, policy, strategy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = pieces.len();
    let p = cfg.population;

    let mut population: Vec<Chromosome> = (0..p)
        .map(|_| random_chromosome(n, &mut rng))
        .collect::<Result<_>>()?;
    let mut tracker: Option<Tracker> = None;
    let weights = WeightedIndex::new((0..p).map(|r| (p - r) as u64))
        .map_err(|e| Error::Configuration(format!("rank weights: {e}")))?;

    for generation in 0..=cfg.generations {
        let mut scored: Vec<(FitnessValue, Chromosome)> = Vec::with_capacity(p);
        for c in population.drain(..) {
            let f = ev.fitness(&c)?;
            match tracker.as_mut() {
                None => tracker = Some(Tracker::new(c.clone(), f)),
                Some(t) => {
                    t.offer(&c, f);
                }
            }
            scored.push((f, c));
        }
        scored.sort_by(|a, b| a.0.value().total_cmp(&b.0.value()));
        let sorted: Vec<Chromosome> = scored.into_iter().map(|(_, c)| c).collect();
        observer(generation, &sorted);
        if generation == cfg.generations {
            break;
        }
        population = breed(&sorted, &weights, cfg, &mut rng);
    }
    tracker.expect("population is never empty").finish(&ev)
}

fn breed(sorted: &[Chromosome], weights: &WeightedIndex<u64>, cfg: &GaConfig, rng: &mut ChaCha8Rng) -> Vec<Chromosome> {
    let p = sorted.len();
    let mut next = Vec::with_capacity(p);
    if cfg.elitism {
        next.extend_from_slice(&sorted[..2]);
    }
    while next.len() < p {
        let mut a = sorted[weights.sample(rng)].clone();
        let mut b = sorted[weights.sample(rng)].clone();
        let len = a.len();
        if len >= 2 && rng.random_bool(cfg.crossover_probability) {
            let cut = rng.random_range(1..len);
            a.bits_mut()[cut..].swap_with_slice(&mut b.bits_mut()[cut..]);
        }
        for c in [&mut a, &mut b] {
            for bit in 0..len {
                if rng.random_bool(cfg.mutation_probability) {
                    c.flip(bit);
                }
            }
        }
        next.push(a);
        next.push(b);
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn rect_piece(id: usize, w: f64, h: f64) -> Piece {
        Piece::new(id, Rect::new(0., 0., w, h).to_ring()).unwrap()
    }

    fn halves() -> Vec<Piece> {
        vec![rect_piece(0, 50., 50.), rect_piece(1, 50., 50.), rect_piece(2, 50., 50.), rect_piece(3, 50., 50.)]
    }

    fn panel() -> RectDim {
        RectDim::new(50., 100.).unwrap()
    }

    fn plain() -> TransformPolicy {
        TransformPolicy::default()
    }

    const FF: PlacementStrategy = PlacementStrategy::FirstFit;

    fn assert_monotone(r: &OptimizationResult) {
        assert!(r.trace.windows(2).all(|w| w[1].1.value() <= w[0].1.value() && w[1].0 > w[0].0));
        assert_eq!(r.trace.last().unwrap().1, r.best_fitness);
    }

    #[test]
    fn greedy_results() {
        let r = solve_greedy(&halves()[..2], panel(), plain(), FF).unwrap();
        assert_eq!(r.best_plan.metrics.efficiency, 1.0);
        assert_eq!(r.evaluations, 1);
        assert_eq!(r.trace.len(), 1);

        let one = solve_greedy(&[rect_piece(0, 10., 10.)], panel(), plain(), FF).unwrap();
        assert_eq!(one.best_plan.panel_count(), 1);

        let big: Vec<Piece> = (0..3).map(|i| rect_piece(i, 60., 60.)).collect();
        let r = solve_greedy(&big, RectDim::new(100., 100.).unwrap(), plain(), FF).unwrap();
        assert_eq!(r.best_fitness.value(), 19200.0);
    }

    #[test]
    fn mc_without_iterations_is_the_initial_chromosome() {
        let cfg = McConfig { iterations: 0, seed: 4, ..McConfig::default() };
        let r = solve_mc(&halves(), panel(), plain(), FF, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_chromosome(4, &mut rng).unwrap();
        let (f, plan) = crate::encoding::evaluate(&c, &halves(), panel(), plain(), FF).unwrap();
        assert_eq!(r.best_chromosome, Some(c));
        assert_eq!(r.best_fitness, f);
        assert_eq!(r.best_plan, plan);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn mc_is_deterministic_and_finds_optimum() {
        let cfg = McConfig { seed: 11, ..McConfig::default() };
        let a = solve_mc(&halves(), panel(), plain(), FF, &cfg).unwrap();
        let b = solve_mc(&halves(), panel(), plain(), FF, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.best_fitness.value(), 0.0);
        assert_eq!(a.best_plan.panel_count(), 2);
        assert_monotone(&a);
    }

    #[test]
    fn mc_with_limited_flips() {
        let cfg = McConfig { iterations: 500, max_flips: Some(1), flip_probability: 1.0, seed: 3 };
        let r = solve_mc(&halves(), panel(), plain(), FF, &cfg).unwrap();
        assert_eq!(r.evaluations, 501);
        assert_monotone(&r);
        assert_eq!(r.best_fitness.value(), 0.0);
    }

    #[test]
    fn ga_without_generations_is_best_initial() {
        let cfg = GaConfig { generations: 0, population: 10, seed: 2, ..GaConfig::default() };
        let r = solve_ga(&halves(), panel(), plain(), FF, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let best = (0..10)
            .map(|_| {
                let c = random_chromosome(4, &mut rng).unwrap();
                crate::encoding::evaluate(&c, &halves(), panel(), plain(), FF).unwrap().0.value()
            })
            .fold(f64::INFINITY, f64::min);
        assert_eq!(r.best_fitness.value(), best);
        assert_eq!(r.evaluations, 10);
    }

    #[test]
    fn ga_is_deterministic_and_finds_optimum() {
        let cfg = GaConfig { seed: 5, ..GaConfig::default() };
        let a = solve_ga(&halves(), panel(), plain(), FF, &cfg).unwrap();
        let b = solve_ga(&halves(), panel(), plain(), FF, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.best_fitness.value(), 0.0);
        assert_eq!(a.evaluations, 100 * 101);
        assert_monotone(&a);
    }

    #[test]
    fn ga_clones_only_without_variation() {
        let cfg = GaConfig {
            population: 12,
            generations: 15,
            crossover_probability: 0.0,
            mutation_probability: 0.0,
            seed: 8,
            elitism: false,
        };
        let mut initial: Option<BTreeSet<Chromosome>> = None;
        let mut ok = true;
        solve_ga_observed(&halves(), panel(), plain(), FF, &cfg, |g, pop| {
            let set: BTreeSet<Chromosome> = pop.iter().cloned().collect();
            match &initial {
                None => {
                    assert_eq!(g, 0);
                    initial = Some(set);
                }
                Some(init) => ok &= set.is_subset(init),
            }
        })
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn ga_elitism_keeps_the_best() {
        let cfg = GaConfig { population: 8, generations: 10, elitism: true, seed: 1, ..GaConfig::default() };
        let mut bests = Vec::new();
        let ev = Evaluator::new(&halves(), panel(), plain(), FF).unwrap();
        solve_ga_observed(&halves(), panel(), plain(), FF, &cfg, |_, pop| {
            bests.push(ev.fitness(&pop[0]).unwrap().value());
        })
        .unwrap();
        assert!(bests.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn single_piece_pool() {
        let pool = [rect_piece(0, 10., 10.)];
        let mc = solve_mc(&pool, panel(), plain(), FF, &McConfig { iterations: 50, ..McConfig::default() }).unwrap();
        let ga = solve_ga(&pool, panel(), plain(), FF, &GaConfig { population: 4, generations: 3, ..GaConfig::default() }).unwrap();
        assert_eq!(mc.best_plan.panel_count(), 1);
        assert_eq!(ga.best_plan.panel_count(), 1);
    }

    #[test]
    fn empty_pool_uses_no_panels() {
        let mc = solve_mc(&[], panel(), plain(), FF, &McConfig::default()).unwrap();
        assert_eq!(mc.best_plan.panel_count(), 0);
        assert_eq!(mc.best_fitness.value(), 0.0);
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            GaConfig { population: 3, ..GaConfig::default() },
            GaConfig { population: 0, ..GaConfig::default() },
            GaConfig { mutation_probability: 1.5, ..GaConfig::default() },
        ];
        for cfg in bad {
            assert!(matches!(solve_ga(&halves(), panel(), plain(), FF, &cfg), Err(Error::Configuration(_))));
        }
        let cfg = McConfig { max_flips: Some(0), ..McConfig::default() };
        assert!(matches!(solve_mc(&halves(), panel(), plain(), FF, &cfg), Err(Error::Configuration(_))));
        let cfg = McConfig { flip_probability: -0.1, ..McConfig::default() };
        assert!(cfg.validate().is_err());
    }
}

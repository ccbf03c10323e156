use mcpo_core::encoding::{Chromosome, Evaluator};
use mcpo_core::geometry::{Rect, RectDim};
use mcpo_core::nesting::{Piece, PlacementStrategy, TransformPolicy};
use mcpo_core::optimizers::{solve_ga, solve_greedy, solve_mc, GaConfig, McConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every set partition of `0..n` as a restricted growth string.
fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn grow(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=max + 1 {
            prefix.push(k);
            grow(prefix, max.max(k), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        grow(&mut vec![0], 0, n, &mut out);
    }
    out
}

fn pool(rng: &mut ChaCha8Rng, panel: RectDim) -> Vec<Piece> {
    let n = rng.random_range(2..=6);
    (0..n)
        .map(|i| {
            let w = panel.width / rng.random_range(1..=4) as f64;
            let h = panel.height / rng.random_range(1..=4) as f64;
            Piece::new(i, Rect::new(0.0, 0.0, w, h).to_ring()).unwrap()
        })
        .collect()
}

#[test]
fn bell_numbers() {
    let sizes: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
    assert_eq!(sizes, [1, 2, 5, 15, 52, 203]);
}

#[test]
fn solvers_never_beat_the_partition_optimum() {
    let panel = RectDim::new(120.0, 80.0).unwrap();
    let policy = TransformPolicy::default();
    let strategy = PlacementStrategy::FirstFit;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..8 {
        let pieces = pool(&mut rng, panel);
        let ev = Evaluator::new(&pieces, panel, policy, strategy).unwrap();
        let total: f64 = pieces.iter().map(Piece::area).sum();
        let mut best = f64::INFINITY;
        for ids in partitions(pieces.len()) {
            let c = Chromosome::from_cluster_ids(&ids).unwrap();
            let (f, plan) = ev.evaluate(&c).unwrap();
            assert_eq!(f.value(), plan.panel_count() as f64 * panel.area() - total);
            best = best.min(f.value());
        }
        let mc = solve_mc(&pieces, panel, policy, strategy, &McConfig { iterations: 2000, seed: trial, ..McConfig::default() });
        let ga = solve_ga(&pieces, panel, policy, strategy, &GaConfig { population: 20, generations: 20, seed: trial, ..GaConfig::default() });
        assert!(mc.unwrap().best_fitness.value() >= best);
        assert!(ga.unwrap().best_fitness.value() >= best);
        // Greedy is not restricted to one cluster per panel, so it is only
        // bounded below by the area count.
        let g = solve_greedy(&pieces, panel, policy, strategy).unwrap();
        assert!(g.best_plan.panel_count() as f64 >= (total / panel.area()).ceil() - 1e-9);
    }
}

//! Cluster-ID chromosome shared by the Monte Carlo and genetic searches.
//!
//! Each piece owns a fixed-width block of bits holding the ID of the cluster
//! it belongs to; every cluster is meant to fill one stock panel. The
//! chromosome says nothing about positions or orientations: those are worked
//! out by sequential placement while the fitness is evaluated.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, RngCore};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RectDim;
use crate::nesting::{LiveContainer, Nester, NestingPlan, Piece, PlacementStrategy, TransformPolicy};

/// Bits per block for `n` pieces: enough for IDs `0..n`, minimum one.
pub fn block_width_for(n: usize) -> Result<usize> {
    match n {
        0 => Err(Error::Configuration("a chromosome needs at least one piece".into())),
        1 => Ok(1),
        n => Ok((usize::BITS - (n - 1).leading_zeros()) as usize),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Chromosome {
    bits: Vec<bool>,
    piece_count: usize,
    block_width: usize,
}

impl Chromosome {
    pub fn from_bits(bits: Vec<bool>, piece_count: usize) -> Result<Self> {
        let block_width = block_width_for(piece_count)?;
        if bits.len() != piece_count * block_width {
            return Err(Error::Configuration(format!(
                "chromosome for {piece_count} pieces needs {} bits, got {}",
                piece_count * block_width,
                bits.len()
            )));
        }
        Ok(Chromosome {
            bits,
            piece_count,
            block_width,
        })
    }

    /// Chromosome that puts piece `i` into cluster `ids[i]`.
    pub fn from_cluster_ids(ids: &[u32]) -> Result<Self> {
        let n = ids.len();
        let width = block_width_for(n)?;
        let mut bits = Vec::with_capacity(n * width);
        for (i, &id) in ids.iter().enumerate() {
            if width < 32 && id >> width != 0 {
                return Err(Error::Configuration(format!(
                    "cluster id {id} of piece {i} does not fit in {width} bits"
                )));
            }
            bits.extend((0..width).rev().map(|b| (id >> b) & 1 == 1));
        }
        Chromosome::from_bits(bits, n)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn piece_count(&self) -> usize {
        self.piece_count
    }

    pub fn block_width(&self) -> usize {
        self.block_width
    }

    /// Cluster ID of `piece`, read big-endian from its block.
    pub fn cluster_of(&self, piece: usize) -> u32 {
        let start = piece * self.block_width;
        self.bits[start..start + self.block_width]
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | b as u32)
    }

    pub fn flip(&mut self, bit: usize) {
        self.bits[bit] = !self.bits[bit];
    }

    pub fn to_bit_string(&self) -> alloc::string::String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Cluster ID to member piece ids (ascending). Empty clusters are absent.
pub type ClusterMap = BTreeMap<u32, Vec<usize>>;

pub fn decode(c: &Chromosome) -> ClusterMap {
    let mut map = ClusterMap::new();
    for piece in 0..c.piece_count {
        map.entry(c.cluster_of(piece)).or_default().push(piece);
    }
    map
}

/// Total vacant area over every panel used; lower is better.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FitnessValue(pub f64);

impl FitnessValue {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_better_than(self, other: FitnessValue) -> bool {
        self.0 < other.0
    }
}

pub fn random_chromosome<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<Chromosome> {
    let width = block_width_for(n)?;
    let bits = (0..n * width).map(|_| rng.random_bool(0.5)).collect();
    Chromosome::from_bits(bits, n)
}

/// Fitness function bound to one piece pool and panel.
///
/// Clusters are visited in ascending ID order; each is nested into one fresh
/// panel with its members in area-descending order. Members that cannot be
/// placed there are collected across all clusters and nested afterwards by the
/// greedy loop into extra panels.
#[derive(Debug, Clone)]
pub struct Evaluator {
    nester: Nester,
}

impl Evaluator {
    pub fn new(pieces: &[Piece], panel: RectDim, policy: TransformPolicy, strategy: PlacementStrategy) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Configuration("cannot evaluate an empty piece pool".into()));
        }
        Ok(Evaluator {
            nester: Nester::new(pieces, panel, policy, strategy)?,
        })
    }

    pub fn piece_count(&self) -> usize {
        self.nester.len()
    }

    pub fn nester(&self) -> &Nester {
        &self.nester
    }

    fn check(&self, c: &Chromosome) -> Result<()> {
        if c.piece_count() != self.nester.len() {
            return Err(Error::Configuration(format!(
                "chromosome encodes {} pieces, pool has {}",
                c.piece_count(),
                self.nester.len()
            )));
        }
        Ok(())
    }

    fn nest(&self, c: &Chromosome) -> Result<Vec<LiveContainer>> {
        self.check(c)?;
        let mut containers = Vec::new();
        let mut overflow = Vec::new();
        for (_, mut members) in decode(c) {
            self.nester.by_area_desc(&mut members);
            let (container, rejected) = self.nester.fill_one(&members);
            if container.len() > 0 {
                containers.push(container);
            }
            overflow.extend(rejected);
        }
        if !overflow.is_empty() {
            containers.extend(self.nester.greedy_live(&overflow)?);
        }
        Ok(containers)
    }

    /// `panel_count * panel_area - total piece area`.
    pub fn fitness_for(&self, panel_count: usize) -> FitnessValue {
        FitnessValue(panel_count as f64 * self.nester.panel().area() - self.nester.total_area())
    }

    pub fn fitness(&self, c: &Chromosome) -> Result<FitnessValue> {
        Ok(self.fitness_for(self.nest(c)?.len()))
    }

    pub fn evaluate(&self, c: &Chromosome) -> Result<(FitnessValue, NestingPlan)> {
        let containers = self.nest(c)?;
        Ok((self.fitness_for(containers.len()), self.nester.to_plan(&containers)))
    }
}

/// One-shot evaluation; prefer [`Evaluator`] when scoring many chromosomes.
pub fn evaluate(
    c: &Chromosome,
    pieces: &[Piece],
    panel: RectDim,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
) -> Result<(FitnessValue, NestingPlan)> {
    Evaluator::new(pieces, panel, policy, strategy)?.evaluate(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().filter(|c| *c == '0' || *c == '1').map(|c| c == '1').collect()
    }

    fn squares(n: usize, side: f64) -> Vec<Piece> {
        (0..n).map(|i| Piece::new(i, Rect::new(0., 0., side, side).to_ring()).unwrap()).collect()
    }

    fn plain() -> TransformPolicy {
        TransformPolicy::default()
    }

    #[test]
    fn block_widths() {
        assert_eq!(block_width_for(17).unwrap(), 5);
        assert_eq!(block_width_for(16).unwrap(), 4);
        assert_eq!(block_width_for(1).unwrap(), 1);
        assert_eq!(block_width_for(2).unwrap(), 1);
        assert_eq!(block_width_for(3).unwrap(), 2);
        assert!(matches!(block_width_for(0), Err(Error::Configuration(_))));
    }

    #[test]
    fn direct_decode() {
        let c = Chromosome::from_bits(bits("00 01 00 11"), 4).unwrap();
        let m = decode(&c);
        assert_eq!(m.len(), 3);
        assert_eq!(m[&0], vec![0, 2]);
        assert_eq!(m[&1], vec![1]);
        assert_eq!(m[&3], vec![3]);
    }

    #[test]
    fn all_zero_is_one_cluster() {
        let c = Chromosome::from_bits(vec![false; 15], 5).unwrap();
        let m = decode(&c);
        assert_eq!(m.len(), 1);
        assert_eq!(m[&0], vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn worked_seventeen_piece_decode() {
        let mut b = bits("00010 01000");
        b.resize(85, false);
        let c = Chromosome::from_bits(b, 17).unwrap();
        assert_eq!(c.cluster_of(0), 2);
        assert_eq!(c.cluster_of(1), 8);
        let m = decode(&c);
        assert!(m[&2].contains(&0));
        assert!(m[&8].contains(&1));
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(Chromosome::from_bits(vec![false; 7], 4).is_err());
    }

    #[test]
    fn cluster_ids_round_trip() {
        let c = Chromosome::from_cluster_ids(&[2, 0, 3, 3]).unwrap();
        assert_eq!(c.to_bit_string(), "10001111");
        assert!(Chromosome::from_cluster_ids(&[4, 0, 0, 0]).is_err());
    }

    #[test]
    fn random_chromosomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_chromosome(1, &mut rng).unwrap().len(), 1);
        let a = random_chromosome(17, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_chromosome(17, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let c = random_chromosome(17, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        assert_eq!(a.len(), 85);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn exact_stacking_has_zero_fitness() {
        let panel = RectDim::new(50., 100.).unwrap();
        let c = Chromosome::from_cluster_ids(&[1, 1]).unwrap();
        let (f, plan) = evaluate(&c, &squares(2, 50.), panel, plain(), PlacementStrategy::FirstFit).unwrap();
        assert_eq!(f.value(), 0.0);
        assert_eq!(plan.panel_count(), 1);
    }

    #[test]
    fn invalid_cluster_overflows() {
        let panel = RectDim::new(100., 100.).unwrap();
        let c = Chromosome::from_cluster_ids(&[0, 0, 0]).unwrap();
        let (f, plan) = evaluate(&c, &squares(3, 60.), panel, plain(), PlacementStrategy::FirstFit).unwrap();
        assert_eq!(plan.panel_count(), 3);
        assert_eq!(f.value(), 19200.0);
    }

    #[test]
    fn singleton_clusters_use_one_panel_each() {
        let panel = RectDim::new(50., 100.).unwrap();
        let c = Chromosome::from_cluster_ids(&[0, 1, 2, 3]).unwrap();
        let (_, plan) = evaluate(&c, &squares(4, 10.), panel, plain(), PlacementStrategy::FirstFit).unwrap();
        assert_eq!(plan.panel_count(), 4);
    }

    #[test]
    fn mismatched_pool_is_rejected() {
        let panel = RectDim::new(50., 100.).unwrap();
        let ev = Evaluator::new(&squares(3, 10.), panel, plain(), PlacementStrategy::FirstFit).unwrap();
        let c = Chromosome::from_cluster_ids(&[0, 1]).unwrap();
        assert!(ev.fitness(&c).is_err());
    }

    #[test]
    fn infeasible_piece_is_reported() {
        let panel = RectDim::new(50., 50.).unwrap();
        let mut pool = squares(2, 10.);
        pool.push(Piece::new(2, Rect::new(0., 0., 60., 10.).to_ring()).unwrap());
        let err = Evaluator::new(&pool, panel, plain(), PlacementStrategy::FirstFit).unwrap_err();
        assert_eq!(err, Error::InfeasiblePiece { id: 2 });
    }
}

//! Sequential placement of off-cut pieces into stock panels.
//!
//! Candidate positions are a discrete anchor set: the panel's bottom-left
//! corner plus every vertex of the pieces already placed, ordered by `(y, x)`.
//! A candidate aligns the bottom-left corner of the transformed piece's
//! bounding box with an anchor and is legal when it stays inside the panel
//! and does not overlap anything placed before it.

use alloc::format;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    apply_transform, overlap_area, shared_edge_length_with, triangles_overlap_area, triangulate, Point, Rect,
    RectDim, Ring, Rotation, Tolerance, Transform, Triangle,
};

/// One irregular off-cut. The shape is stored with its bounding box's
/// bottom-left corner at the origin; `source` records where that corner sat
/// in the region it was cut from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Piece {
    pub id: usize,
    shape: Ring,
    area: f64,
    source: Point,
}

impl Piece {
    pub fn new(id: usize, shape: Ring) -> Result<Self> {
        let shape = shape.to_ccw();
        let area = shape.area();
        if area.is_nan() || area <= 0.0 {
            return Err(Error::DegenerateGeometry(format!("piece {id} has no area")));
        }
        let source = shape.bbox().min;
        Ok(Piece {
            id,
            shape: shape.translate(-source),
            area,
            source,
        })
    }

    pub fn shape(&self) -> &Ring {
        &self.shape
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn source(&self) -> Point {
        self.source
    }

    /// The piece at its original position.
    pub fn source_shape(&self) -> Ring {
        self.shape.translate(self.source)
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RotationPolicy {
    #[default]
    None,
    #[cfg_attr(feature = "serde", serde(rename = "r180"))]
    R180Only,
    #[cfg_attr(feature = "serde", serde(rename = "r90"))]
    R90Steps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TransformPolicy {
    pub rotation: RotationPolicy,
    pub allow_flip: bool,
}

impl TransformPolicy {
    pub fn new(rotation: RotationPolicy, allow_flip: bool) -> Self {
        TransformPolicy { rotation, allow_flip }
    }

    /// Allowed rotations in enumeration order.
    pub fn rotations(&self) -> &'static [Rotation] {
        match self.rotation {
            RotationPolicy::None => &[Rotation::R0],
            RotationPolicy::R180Only => &[Rotation::R0, Rotation::R180],
            RotationPolicy::R90Steps => &Rotation::ALL,
        }
    }

    /// Allowed flip states, unflipped first.
    pub fn flips(&self) -> &'static [bool] {
        if self.allow_flip {
            &[false, true]
        } else {
            &[false]
        }
    }

    pub fn allows(&self, t: &Transform) -> bool {
        self.rotations().contains(&t.rotation) && (self.allow_flip || !t.flipped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PlacementStrategy {
    #[default]
    FirstFit,
    BestFit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Placement {
    pub piece: usize,
    pub transform: Transform,
}

/// One stock panel used as a nesting container.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ContainerState {
    pub panel: RectDim,
    /// In placement order.
    pub placements: Vec<Placement>,
    pub vacant_area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PlanMetrics {
    pub efficiency: f64,
    pub shared_edge_total: f64,
    pub panel_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct NestingPlan {
    pub panel: RectDim,
    pub containers: Vec<ContainerState>,
    pub metrics: PlanMetrics,
}

impl NestingPlan {
    pub fn panel_count(&self) -> usize {
        self.containers.len()
    }

    /// Placed outline of every piece, container by container.
    pub fn placed_shapes<'a>(&'a self, pieces: &'a [Piece]) -> impl Iterator<Item = (usize, Ring)> + 'a {
        self.containers.iter().enumerate().flat_map(move |(ci, c)| {
            c.placements
                .iter()
                .map(move |pl| (ci, apply_transform(pieces[pl.piece].shape(), &pl.transform)))
        })
    }
}

/// One orientation of a piece, normalised so its bounding box starts at the origin.
#[derive(Debug, Clone)]
struct Variant {
    rotation: Rotation,
    flipped: bool,
    shape: Ring,
    /// Bounding-box minimum of the transformed shape before normalisation.
    raw_min: Point,
    dims: Point,
    triangles: Vec<Triangle>,
    is_rect: bool,
}

#[derive(Debug, Clone)]
struct PreparedPiece {
    area: f64,
    variants: Vec<Variant>,
}

#[derive(Debug, Clone)]
struct Placed {
    piece: usize,
    variant: usize,
    at: Point,
    bbox: Rect,
    ring: Ring,
    /// Triangles already translated to the placement position.
    triangles: Vec<Triangle>,
    is_rect: bool,
}

/// A container being filled.
#[derive(Debug, Clone, Default)]
pub(crate) struct LiveContainer {
    placed: Vec<Placed>,
    anchors: Vec<Point>,
    used_area: f64,
}

impl LiveContainer {
    fn push(&mut self, p: Placed, area: f64, eps: f64) {
        if self.anchors.is_empty() {
            self.anchors.push(Point::ORIGIN);
        }
        self.anchors.extend_from_slice(p.ring.vertices());
        sort_anchors(&mut self.anchors, eps);
        self.used_area += area;
        self.placed.push(p);
    }

    pub(crate) fn len(&self) -> usize {
        self.placed.len()
    }
}

/// Piece pool prepared for repeated nesting into one panel size: every
/// allowed orientation is precomputed and triangulated once.
#[derive(Debug, Clone)]
pub struct Nester {
    pieces: Vec<PreparedPiece>,
    panel: RectDim,
    strategy: PlacementStrategy,
    tol: Tolerance,
    total_area: f64,
}

impl Nester {
    /// `pieces[i].id` must equal `i`. Fails with [`Error::InfeasiblePiece`]
    /// if some piece cannot enter an empty panel in any allowed orientation.
    pub fn new(pieces: &[Piece], panel: RectDim, policy: TransformPolicy, strategy: PlacementStrategy) -> Result<Self> {
        Nester::prepare(pieces, panel, policy, strategy, true)
    }

    fn prepare(
        pieces: &[Piece],
        panel: RectDim,
        policy: TransformPolicy,
        strategy: PlacementStrategy,
        require_fit: bool,
    ) -> Result<Self> {
        let tol = Tolerance::relative(panel.width.max(panel.height), panel.area());
        let mut prepared = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.iter().enumerate() {
            if p.id != i {
                return Err(Error::Configuration(format!(
                    "piece ids must be dense and ordered; position {i} holds piece {}",
                    p.id
                )));
            }
            let mut variants: Vec<Variant> = Vec::new();
            for &rotation in policy.rotations() {
                for &flipped in policy.flips() {
                    let raw = apply_transform(p.shape(), &Transform::new(rotation, flipped, Point::ORIGIN));
                    let b = raw.bbox();
                    let shape = raw.translate(-b.min);
                    if variants.iter().any(|v| same_outline(&v.shape, &shape, tol.coord)) {
                        continue;
                    }
                    let dims = Point::new(b.width(), b.height());
                    let is_rect = (shape.area() - dims.x * dims.y).abs() <= tol.area;
                    variants.push(Variant {
                        rotation,
                        flipped,
                        triangles: triangulate(&shape),
                        shape,
                        raw_min: b.min,
                        dims,
                        is_rect,
                    });
                }
            }
            let fits = variants
                .iter()
                .any(|v| v.dims.x <= panel.width + tol.coord && v.dims.y <= panel.height + tol.coord);
            if require_fit && !fits {
                return Err(Error::InfeasiblePiece { id: p.id });
            }
            prepared.push(PreparedPiece { area: p.area(), variants });
        }
        let total_area = pieces.iter().map(Piece::area).sum();
        Ok(Nester {
            pieces: prepared,
            panel,
            strategy,
            tol,
            total_area,
        })
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn panel(&self) -> RectDim {
        self.panel
    }

    /// Sum of piece areas in id order.
    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub(crate) fn area(&self, piece: usize) -> f64 {
        self.pieces[piece].area
    }

    /// Indices sorted by area descending, ties by id ascending.
    pub(crate) fn by_area_desc(&self, ids: &mut [usize]) {
        ids.sort_by(|&a, &b| self.pieces[b].area.total_cmp(&self.pieces[a].area).then(a.cmp(&b)));
    }

    fn overlaps(&self, v: &Variant, at: Point, bbox: &Rect, other: &Placed) -> bool {
        if !bbox.interiors_overlap(&other.bbox, self.tol.coord) {
            return false;
        }
        if v.is_rect && other.is_rect {
            let dx = bbox.max.x.min(other.bbox.max.x) - bbox.min.x.max(other.bbox.min.x);
            let dy = bbox.max.y.min(other.bbox.max.y) - bbox.min.y.max(other.bbox.min.y);
            return dx * dy > self.tol.area;
        }
        triangles_overlap_area(&v.triangles, at, &other.triangles, Point::ORIGIN) > self.tol.area
    }

    /// Candidate search for `piece` in `c`. Returns the variant index, anchor
    /// and shared-edge score of the chosen candidate.
    pub(crate) fn try_place_live(&self, c: &LiveContainer, piece: usize) -> Option<(usize, Point, f64)> {
        let panel_rect = self.panel.at_origin();
        let eps = self.tol.coord;
        let anchors: &[Point] = if c.placed.is_empty() { &[Point::ORIGIN] } else { &c.anchors };
        let mut best: Option<(usize, Point, f64)> = None;
        for &anchor in anchors {
            for (vi, v) in self.pieces[piece].variants.iter().enumerate() {
                let bbox = Rect::at(anchor, RectDim { width: v.dims.x, height: v.dims.y });
                if !panel_rect.contains_rect(&bbox, eps) {
                    continue;
                }
                if c.placed.iter().any(|o| self.overlaps(v, anchor, &bbox, o)) {
                    continue;
                }
                match self.strategy {
                    PlacementStrategy::FirstFit => {
                        let score = self.score(c, v, anchor);
                        return Some((vi, anchor, score));
                    }
                    PlacementStrategy::BestFit => {
                        let score = self.score(c, v, anchor);
                        if best.is_none_or(|(_, _, s)| score > s + eps) {
                            best = Some((vi, anchor, score));
                        }
                    }
                }
            }
        }
        best
    }

    fn score(&self, c: &LiveContainer, v: &Variant, at: Point) -> f64 {
        let ring = v.shape.translate(at);
        shared_edge_length_with(&ring, c.placed.iter().map(|p| &p.ring), Some(self.panel.at_origin()), self.tol.coord)
    }

    pub(crate) fn place(&self, c: &mut LiveContainer, piece: usize, variant: usize, at: Point) {
        let v = &self.pieces[piece].variants[variant];
        let bbox = Rect::at(at, RectDim { width: v.dims.x, height: v.dims.y });
        let ring = v.shape.translate(at);
        let triangles = v.triangles.iter().map(|t| [t[0] + at, t[1] + at, t[2] + at]).collect();
        c.push(
            Placed {
                piece,
                variant,
                at,
                bbox,
                ring,
                triangles,
                is_rect: v.is_rect,
            },
            self.pieces[piece].area,
            self.tol.coord,
        );
    }

    pub(crate) fn vacancy(&self, c: &LiveContainer) -> f64 {
        self.panel.area() - c.used_area
    }

    /// Places `ids` one after another into a single container; returns the
    /// container and the ids that did not fit.
    pub(crate) fn fill_one(&self, ids: &[usize]) -> (LiveContainer, Vec<usize>) {
        let mut c = LiveContainer::default();
        let mut rejected = Vec::new();
        for &p in ids {
            if self.area(p) > self.vacancy(&c) + self.tol.area {
                rejected.push(p);
                continue;
            }
            match self.try_place_live(&c, p) {
                Some((v, at, _)) => self.place(&mut c, p, v, at),
                None => rejected.push(p),
            }
        }
        (c, rejected)
    }

    /// The greedy loop: keep filling the current panel with the largest pool
    /// piece that passes the vacancy filter and has a legal placement, then
    /// open a fresh panel.
    pub(crate) fn greedy_live(&self, ids: &[usize]) -> Result<Vec<LiveContainer>> {
        let mut pool: Vec<usize> = ids.to_vec();
        self.by_area_desc(&mut pool);
        let mut out = Vec::new();
        while !pool.is_empty() {
            let mut c = LiveContainer::default();
            loop {
                let vacancy = self.vacancy(&c);
                let hit = pool.iter().enumerate().find_map(|(k, &p)| {
                    if self.area(p) > vacancy + self.tol.area {
                        return None;
                    }
                    self.try_place_live(&c, p).map(|r| (k, p, r))
                });
                match hit {
                    Some((k, p, (v, at, _))) => {
                        self.place(&mut c, p, v, at);
                        pool.remove(k);
                    }
                    None => break,
                }
            }
            if c.placed.is_empty() {
                return Err(Error::InfeasiblePiece { id: pool[0] });
            }
            out.push(c);
        }
        Ok(out)
    }

    pub(crate) fn to_container_state(&self, c: &LiveContainer) -> ContainerState {
        let placements = c
            .placed
            .iter()
            .map(|p| {
                let v = &self.pieces[p.piece].variants[p.variant];
                Placement {
                    piece: p.piece,
                    transform: Transform::new(v.rotation, v.flipped, p.at - v.raw_min),
                }
            })
            .collect();
        ContainerState {
            panel: self.panel,
            placements,
            vacant_area: self.vacancy(c),
        }
    }

    pub(crate) fn to_plan(&self, containers: &[LiveContainer]) -> NestingPlan {
        let states: Vec<ContainerState> = containers.iter().map(|c| self.to_container_state(c)).collect();
        let mut shared = 0.0;
        for c in containers {
            for (i, p) in c.placed.iter().enumerate() {
                let earlier = c.placed[..i].iter().map(|q| &q.ring);
                shared += shared_edge_length_with(&p.ring, earlier, Some(self.panel.at_origin()), self.tol.coord);
            }
        }
        let count = states.len();
        NestingPlan {
            panel: self.panel,
            containers: states,
            metrics: PlanMetrics {
                efficiency: efficiency(self.total_area, count, self.panel),
                shared_edge_total: shared,
                panel_count: count,
            },
        }
    }

    /// Nests every piece with the greedy loop.
    pub fn greedy(&self) -> Result<NestingPlan> {
        let ids: Vec<usize> = (0..self.len()).collect();
        Ok(self.to_plan(&self.greedy_live(&ids)?))
    }
}

fn efficiency(total_area: f64, count: usize, panel: RectDim) -> f64 {
    if count == 0 {
        1.0
    } else {
        total_area / (count as f64 * panel.area())
    }
}

fn sort_anchors(v: &mut Vec<Point>, eps: f64) {
    v.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
    v.dedup_by(|a, b| (a.x - b.x).abs() <= eps && (a.y - b.y).abs() <= eps);
}

fn same_outline(a: &Ring, b: &Ring, eps: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut av: Vec<Point> = a.vertices().to_vec();
    let mut bv: Vec<Point> = b.vertices().to_vec();
    let key = |p: &Point, q: &Point| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y));
    av.sort_by(key);
    bv.sort_by(key);
    av.iter().zip(&bv).all(|(p, q)| p.distance(*q) <= eps)
        && (overlap_area(a, b) - a.area()).abs() <= eps * (a.perimeter() + 1.0)
}

/// Candidate positions in `container`: the panel origin and every vertex of
/// the placed pieces, sorted by `(y, x)` without duplicates.
pub fn candidate_anchors(container: &ContainerState, pieces: &[Piece]) -> Vec<Point> {
    let eps = Tolerance::relative(container.panel.width.max(container.panel.height), container.panel.area()).coord;
    let mut v = alloc::vec![Point::ORIGIN];
    for pl in &container.placements {
        v.extend_from_slice(apply_transform(pieces[pl.piece].shape(), &pl.transform).vertices());
    }
    sort_anchors(&mut v, eps);
    v
}

/// Tries to put `pieces[piece]` into `container`. `pieces` is the whole pool
/// (ids dense from 0) so that existing placements can be resolved. Returns
/// the chosen transform and its shared-edge length, or `None` when no
/// candidate is legal.
pub fn try_place(
    container: &ContainerState,
    pieces: &[Piece],
    piece: usize,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
) -> Result<Option<(Transform, f64)>> {
    let nester = Nester::prepare(pieces, container.panel, policy, strategy, false)?;
    let mut live = LiveContainer::default();
    for pl in &container.placements {
        let ring = apply_transform(pieces[pl.piece].shape(), &pl.transform);
        let bbox = ring.bbox();
        let triangles = triangulate(&ring);
        let is_rect = (ring.area() - bbox.area()).abs() <= nester.tol.area;
        live.push(
            Placed {
                piece: pl.piece,
                variant: usize::MAX,
                at: bbox.min,
                bbox,
                ring,
                triangles,
                is_rect,
            },
            pieces[pl.piece].area(),
            nester.tol.coord,
        );
    }
    Ok(nester.try_place_live(&live, piece).map(|(vi, at, score)| {
        let v = &nester.pieces[piece].variants[vi];
        (Transform::new(v.rotation, v.flipped, at - v.raw_min), score)
    }))
}

/// Greedy nesting of the whole pool.
pub fn greedy_nest(
    pieces: &[Piece],
    panel: RectDim,
    policy: TransformPolicy,
    strategy: PlacementStrategy,
) -> Result<NestingPlan> {
    Nester::new(pieces, panel, policy, strategy)?.greedy()
}

/// Efficiency and shared-edge total recomputed from the plan's placements.
pub fn plan_metrics(plan: &NestingPlan, pieces: &[Piece]) -> PlanMetrics {
    let panel = plan.panel;
    let eps = Tolerance::relative(panel.width.max(panel.height), panel.area()).coord;
    let mut shared = 0.0;
    let mut area = 0.0;
    for c in &plan.containers {
        let rings: Vec<Ring> = c
            .placements
            .iter()
            .map(|pl| apply_transform(pieces[pl.piece].shape(), &pl.transform))
            .collect();
        for (i, r) in rings.iter().enumerate() {
            shared += shared_edge_length_with(r, rings[..i].iter(), Some(panel.at_origin()), eps);
        }
        area += c.placements.iter().map(|pl| pieces[pl.piece].area()).sum::<f64>();
    }
    PlanMetrics {
        efficiency: efficiency(area, plan.containers.len(), panel),
        shared_edge_total: shared,
        panel_count: plan.containers.len(),
    }
}

/// A broken plan invariant found by [`verify_plan`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Missing { piece: usize },
    Duplicated { piece: usize },
    UnknownPiece { piece: usize },
    OutOfPanel { container: usize, piece: usize },
    Overlap { container: usize, a: usize, b: usize, area: f64 },
    IllegalTransform { container: usize, piece: usize },
}

/// Post-hoc legality check of a plan against its pool, recomputing every
/// placed outline from the stored transforms.
pub fn verify_plan(plan: &NestingPlan, pieces: &[Piece], policy: TransformPolicy) -> Vec<Violation> {
    let panel = plan.panel;
    let tol = Tolerance::relative(panel.width.max(panel.height), panel.area());
    let mut seen = alloc::vec![0usize; pieces.len()];
    let mut out = Vec::new();
    for (ci, c) in plan.containers.iter().enumerate() {
        let mut rings: Vec<(usize, Ring)> = Vec::new();
        for pl in &c.placements {
            let Some(piece) = pieces.get(pl.piece) else {
                out.push(Violation::UnknownPiece { piece: pl.piece });
                continue;
            };
            seen[pl.piece] += 1;
            if !policy.allows(&pl.transform) {
                out.push(Violation::IllegalTransform { container: ci, piece: pl.piece });
            }
            let ring = apply_transform(piece.shape(), &pl.transform);
            let inside = ring.vertices().iter().all(|p| {
                p.x >= -tol.coord && p.y >= -tol.coord && p.x <= panel.width + tol.coord && p.y <= panel.height + tol.coord
            });
            if !inside {
                out.push(Violation::OutOfPanel { container: ci, piece: pl.piece });
            }
            rings.push((pl.piece, ring));
        }
        for i in 0..rings.len() {
            for j in (i + 1)..rings.len() {
                let a = overlap_area(&rings[i].1, &rings[j].1);
                if a > tol.area {
                    out.push(Violation::Overlap {
                        container: ci,
                        a: rings[i].0,
                        b: rings[j].0,
                        area: a,
                    });
                }
            }
        }
    }
    for (piece, &n) in seen.iter().enumerate() {
        match n {
            0 => out.push(Violation::Missing { piece }),
            1 => {}
            _ => out.push(Violation::Duplicated { piece }),
        }
    }
    out
}

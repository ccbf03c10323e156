//! Phase 1: cover a region with whole panels on a grid anchored at the point
//! of origin and collect the off-cuts.
//!
//! Cell boundaries sit at `origin + k * panel` for every integer `k`, so the
//! grid is defined even when the origin lies outside the region. Cells that
//! lie entirely inside the region become whole panels; every other cell is
//! clipped and each non-empty part becomes a [`Piece`]. Parts are never merged
//! across cells, which keeps every piece inside one panel outline.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{clip_rect, region_area, Point, PolygonRegion, Rect, RectDim};
use crate::nesting::Piece;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StockPanel {
    pub id: String,
    pub dims: RectDim,
}

impl StockPanel {
    pub fn new(id: impl Into<String>, width: f64, height: f64) -> Result<Self> {
        Ok(StockPanel {
            id: id.into(),
            dims: RectDim::new(width, height)?,
        })
    }

    pub fn oriented(&self, orientation: Orientation) -> RectDim {
        match orientation {
            Orientation::AsIs => self.dims,
            Orientation::Rotated90 => self.dims.rotated(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Orientation {
    #[default]
    AsIs,
    Rotated90,
}

/// Where the bottom-left corner of one grid cell is pinned.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct OriginPoint(pub Point);

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WholePanelPlacement {
    /// Bottom-left corner.
    pub position: Point,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OverlayPlan {
    pub region: PolygonRegion,
    pub panel: StockPanel,
    pub orientation: Orientation,
    pub origin: OriginPoint,
    pub whole: Vec<WholePanelPlacement>,
    /// Off-cuts in emission order (grid rows bottom to top, cells left to
    /// right); ids are dense from 0 within this plan.
    pub pieces: Vec<Piece>,
}

impl OverlayPlan {
    /// Panel dimensions as laid on the grid.
    pub fn cell(&self) -> RectDim {
        self.panel.oriented(self.orientation)
    }

    pub fn whole_area(&self) -> f64 {
        self.whole.len() as f64 * self.panel.dims.area()
    }

    pub fn piece_area(&self) -> f64 {
        self.pieces.iter().map(Piece::area).sum()
    }

    pub fn whole_rects(&self) -> impl Iterator<Item = Rect> + '_ {
        let cell = self.cell();
        self.whole.iter().map(move |w| Rect::at(w.position, cell))
    }
}

fn grid_range(lo: f64, hi: f64, origin: f64, step: f64) -> (i64, i64) {
    let first = libm::floor((lo - origin) / step) as i64;
    let last = libm::ceil((hi - origin) / step) as i64;
    (first, last.max(first + 1))
}

pub fn compute_overlay(
    region: &PolygonRegion,
    panel: &StockPanel,
    orientation: Orientation,
    origin: OriginPoint,
) -> Result<OverlayPlan> {
    region_area(region)?;
    if !origin.0.is_finite() {
        return Err(Error::Configuration(format!("point of origin {:?} is not finite", origin.0)));
    }
    let cell = panel.oriented(orientation);
    let tol = region.tolerance();
    let bbox = region.bbox();
    let (i0, i1) = grid_range(bbox.min.x, bbox.max.x, origin.0.x, cell.width);
    let (j0, j1) = grid_range(bbox.min.y, bbox.max.y, origin.0.y, cell.height);

    let mut whole = Vec::new();
    let mut pieces = Vec::new();
    for j in j0..j1 {
        for i in i0..i1 {
            let at = Point::new(origin.0.x + i as f64 * cell.width, origin.0.y + j as f64 * cell.height);
            let rect = Rect::at(at, cell);
            let parts = clip_rect(region, &rect)?;
            if parts.len() == 1 && (parts[0].area() - rect.area()).abs() <= tol.area {
                whole.push(WholePanelPlacement { position: at, orientation });
                continue;
            }
            for part in parts {
                let id = pieces.len();
                pieces.push(Piece::new(id, part.outer().clone())?);
            }
        }
    }
    Ok(OverlayPlan {
        region: region.clone(),
        panel: panel.clone(),
        orientation,
        origin,
        whole,
        pieces,
    })
}

/// One candidate panel in one orientation, applied to every region.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelChoice {
    pub candidate: usize,
    pub orientation: Orientation,
    pub plans: Vec<OverlayPlan>,
}

impl PanelChoice {
    pub fn whole_area(&self) -> f64 {
        self.plans.iter().map(OverlayPlan::whole_area).sum()
    }

    pub fn piece_count(&self) -> usize {
        self.plans.iter().map(|p| p.pieces.len()).sum()
    }

    pub fn panel(&self) -> &StockPanel {
        &self.plans[0].panel
    }
}

fn rank(a: &PanelChoice, b: &PanelChoice) -> Ordering {
    b.whole_area()
        .total_cmp(&a.whole_area())
        .then(a.piece_count().cmp(&b.piece_count()))
        .then(a.panel().dims.area().total_cmp(&b.panel().dims.area()))
        .then(a.candidate.cmp(&b.candidate))
        .then(a.orientation.cmp(&b.orientation))
}

/// Evaluates every candidate (and its quarter turn when `allow_rotation`)
/// over all `regions` jointly and ranks the results: most whole-panel area
/// first, then fewest pieces, then smallest panel, then candidate order.
pub fn rank_stock_panels(
    regions: &[PolygonRegion],
    candidates: &[StockPanel],
    origin: OriginPoint,
    allow_rotation: bool,
) -> Result<Vec<PanelChoice>> {
    if candidates.is_empty() {
        return Err(Error::Configuration("no candidate stock panels".into()));
    }
    if regions.is_empty() {
        return Err(Error::Configuration("no regions to cover".into()));
    }
    let orientations: &[Orientation] = if allow_rotation {
        &[Orientation::AsIs, Orientation::Rotated90]
    } else {
        &[Orientation::AsIs]
    };
    let mut out = Vec::with_capacity(candidates.len() * orientations.len());
    for (ci, panel) in candidates.iter().enumerate() {
        for &orientation in orientations {
            let plans = regions
                .iter()
                .map(|r| compute_overlay(r, panel, orientation, origin))
                .collect::<Result<Vec<_>>>()?;
            out.push(PanelChoice {
                candidate: ci,
                orientation,
                plans,
            });
        }
    }
    out.sort_by(rank);
    Ok(out)
}

/// Single-region ranking: one plan per candidate and orientation.
pub fn select_stock_panel(
    region: &PolygonRegion,
    candidates: &[StockPanel],
    origin: OriginPoint,
    allow_rotation: bool,
) -> Result<Vec<OverlayPlan>> {
    Ok(rank_stock_panels(core::slice::from_ref(region), candidates, origin, allow_rotation)?
        .into_iter()
        .map(|mut c| c.plans.remove(0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn simple_rectangle() -> PolygonRegion {
        PolygonRegion::new(
            Rect::new(0., 0., 300., 300.).to_ring(),
            vec![Rect::new(50., 50., 100., 150.).to_ring()],
        )
        .unwrap()
    }

    fn origin() -> OriginPoint {
        OriginPoint(Point::ORIGIN)
    }

    #[test]
    fn simple_rectangle_grid() {
        let panel = StockPanel::new("P", 50., 100.).unwrap();
        let plan = compute_overlay(&simple_rectangle(), &panel, Orientation::AsIs, origin()).unwrap();
        assert_eq!(plan.whole.len(), 16);
        assert_eq!(plan.pieces.len(), 2);
        for p in &plan.pieces {
            assert_eq!(p.area(), 2500.0);
        }
        assert_eq!(plan.pieces[0].source(), Point::new(50., 0.));
        assert_eq!(plan.pieces[1].source(), Point::new(50., 150.));
        assert_eq!(plan.whole_area() + plan.piece_area(), 85000.0);
    }

    #[test]
    fn exact_cell_region_is_one_whole_panel() {
        let panel = StockPanel::new("P", 50., 100.).unwrap();
        let region = PolygonRegion::rect(&Rect::new(0., 0., 50., 100.));
        let plan = compute_overlay(&region, &panel, Orientation::AsIs, origin()).unwrap();
        assert_eq!(plan.whole.len(), 1);
        assert!(plan.pieces.is_empty());
    }

    #[test]
    fn small_region_is_one_piece() {
        let panel = StockPanel::new("P", 50., 100.).unwrap();
        let region = PolygonRegion::rect(&Rect::new(10., 10., 30., 40.));
        let plan = compute_overlay(&region, &panel, Orientation::AsIs, origin()).unwrap();
        assert!(plan.whole.is_empty());
        assert_eq!(plan.pieces.len(), 1);
        assert_eq!(plan.pieces[0].source_shape().bbox(), Rect::new(10., 10., 30., 40.));
        assert_eq!(plan.pieces[0].area(), 600.0);
    }

    #[test]
    fn rotated_orientation_swaps_cells() {
        let panel = StockPanel::new("P", 100., 50.).unwrap();
        let plan = compute_overlay(&simple_rectangle(), &panel, Orientation::Rotated90, origin()).unwrap();
        assert_eq!(plan.cell(), RectDim::new(50., 100.).unwrap());
        assert_eq!(plan.whole.len(), 16);
    }

    #[test]
    fn origin_outside_region_still_anchors_grid() {
        let panel = StockPanel::new("P", 50., 100.).unwrap();
        let plan = compute_overlay(&simple_rectangle(), &panel, Orientation::AsIs, OriginPoint(Point::new(-25., -1000.))).unwrap();
        for w in &plan.whole {
            assert_eq!((w.position.x + 25.) % 50., 0.0);
            assert_eq!(w.position.y % 100., 0.0);
        }
        assert!((plan.whole_area() + plan.piece_area() - 85000.0).abs() < 1e-6);
    }

    #[test]
    fn single_candidate_gives_one_plan() {
        let panel = StockPanel::new("P", 50., 100.).unwrap();
        let ranked = select_stock_panel(&simple_rectangle(), &[panel], origin(), false).unwrap();
        assert_eq!(ranked.len(), 1);
    }

    #[test]
    fn better_aligned_panel_ranks_first() {
        let a = StockPanel::new("70", 70., 70.).unwrap();
        let b = StockPanel::new("50x100", 50., 100.).unwrap();
        let ranked = select_stock_panel(&simple_rectangle(), &[a, b], origin(), false).unwrap();
        assert_eq!(ranked[0].panel.id, "50x100");
        assert_eq!(ranked[0].whole_area(), 80000.0);
        assert_eq!(ranked[1].whole_area(), 49000.0);
    }

    #[test]
    fn ties_prefer_smaller_panel() {
        // Both tile a 100x100 square exactly: equal coverage, no pieces.
        let region = PolygonRegion::rect(&Rect::new(0., 0., 100., 100.));
        let big = StockPanel::new("big", 100., 100.).unwrap();
        let small = StockPanel::new("small", 50., 50.).unwrap();
        let ranked = select_stock_panel(&region, &[big, small], origin(), false).unwrap();
        assert_eq!(ranked[0].panel.id, "small");
    }

    #[test]
    fn rotation_doubles_candidates() {
        let panel = StockPanel::new("P", 100., 50.).unwrap();
        let ranked = select_stock_panel(&simple_rectangle(), &[panel], origin(), true).unwrap();
        assert_eq!(ranked.len(), 2);
        // Both orientations cover 80000 with two pieces; the tie keeps AsIs first.
        assert_eq!(ranked[0].whole_area(), ranked[1].whole_area());
        assert_eq!(ranked[0].orientation, Orientation::AsIs);
    }

    #[test]
    fn empty_candidates_is_configuration_error() {
        assert!(matches!(
            select_stock_panel(&simple_rectangle(), &[], origin(), false),
            Err(Error::Configuration(_))
        ));
    }
}

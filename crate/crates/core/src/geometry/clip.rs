//! Rectangle-against-region clipping by vertical slab decomposition.
//!
//! The rectangle's x-range is cut at every region vertex and at every point
//! where a region edge crosses the rectangle's top or bottom line. Inside one
//! slab no edge ends or crosses another, so the region is a stack of
//! trapezoids bounded by pairs of edges (even-odd rule). Clamping those to the
//! rectangle's y-range is exact. Trapezoids touching across a slab boundary
//! are merged into connected pieces whose outlines are then traced. A piece
//! that encloses a hole is cut vertically through the hole and decomposed
//! again, so every output piece is hole-free.

use alloc::vec::Vec;

use super::{simplify_ring, PolygonRegion, Point, Rect, Ring, Tolerance};
use crate::error::{Error, Result};

/// Intersection of `rect` with `region`, as disjoint hole-free pieces.
/// Pieces whose area is at or below the region's area tolerance are dropped.
pub fn clip_rect(region: &PolygonRegion, rect: &Rect) -> Result<Vec<PolygonRegion>> {
    if !(rect.width() > 0.0 && rect.height() > 0.0) {
        return Err(Error::DegenerateGeometry(alloc::format!(
            "clip rectangle must have positive size, got {}x{}",
            rect.width(),
            rect.height()
        )));
    }
    let tol = region.tolerance();
    Ok(clip_rings(region, rect, tol)?
        .into_iter()
        .map(|r| PolygonRegion::from_ring(Ring::from_raw(r)))
        .collect())
}

/// True when every point of `rect` lies inside `region`, up to the region's
/// area tolerance.
pub fn rect_fully_inside(region: &PolygonRegion, rect: &Rect) -> bool {
    let tol = region.tolerance();
    match clip_rings(region, rect, tol) {
        Ok(pieces) => pieces.len() == 1 && (super::shoelace(&pieces[0]) - rect.area()).abs() <= tol.area,
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    a: Point,
    b: Point,
}

impl Edge {
    fn y_at(&self, x: f64) -> f64 {
        if x == self.a.x {
            self.a.y
        } else if x == self.b.x {
            self.b.y
        } else {
            self.a.y + (x - self.a.x) * (self.b.y - self.a.y) / (self.b.x - self.a.x)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Trapezoid {
    slab: usize,
    xa: f64,
    xb: f64,
    lo_a: f64,
    lo_b: f64,
    hi_a: f64,
    hi_b: f64,
}

pub(crate) fn clip_rings(region: &PolygonRegion, rect: &Rect, tol: Tolerance) -> Result<Vec<Vec<Point>>> {
    let rb = region.bbox();
    if !rb.interiors_overlap(rect, 0.0) {
        return Ok(Vec::new());
    }
    let (x0, x1) = (rect.min.x, rect.max.x);
    let edges: Vec<Edge> = region
        .rings()
        .flat_map(|r| r.edges())
        .filter(|(p, q)| p.x != q.x && p.x.max(q.x) > x0 && p.x.min(q.x) < x1)
        .map(|(p, q)| if p.x < q.x { Edge { a: p, b: q } } else { Edge { a: q, b: p } })
        .collect();

    let mut cuts: Vec<f64> = Vec::new();
    // Each round either finishes or adds a cut through a distinct hole.
    for _ in 0..=64 {
        let pieces = decompose(region, rect, &edges, &cuts, tol)?;
        let mut new_cut = None;
        let mut out = Vec::with_capacity(pieces.len());
        for rings in pieces {
            if let Some(hole) = rings.iter().find(|r| super::shoelace(r) < 0.0) {
                let hb = super::bbox_of(hole);
                new_cut = Some(0.5 * (hb.min.x + hb.max.x));
                break;
            }
            for r in rings {
                if super::shoelace(&r) > tol.area {
                    out.push(r);
                }
            }
        }
        match new_cut {
            Some(c) if !cuts.contains(&c) => cuts.push(c),
            Some(_) => return Err(Error::DegenerateGeometry("hole splitting did not converge".into())),
            None => return Ok(out),
        }
    }
    Err(Error::DegenerateGeometry("too many holes inside one clip rectangle".into()))
}

/// Returns, per connected component, the traced boundary rings (outer rings
/// counter-clockwise, enclosed holes clockwise).
fn decompose(
    region: &PolygonRegion,
    rect: &Rect,
    edges: &[Edge],
    cuts: &[f64],
    tol: Tolerance,
) -> Result<Vec<Vec<Vec<Point>>>> {
    let (x0, x1, y0, y1) = (rect.min.x, rect.max.x, rect.min.y, rect.max.y);
    let eps = tol.coord;

    let mut xs: Vec<f64> = Vec::with_capacity(2 * edges.len() + 2 + cuts.len());
    xs.push(x0);
    xs.push(x1);
    for ring in region.rings() {
        xs.extend(ring.vertices().iter().map(|p| p.x).filter(|&x| x > x0 && x < x1));
    }
    for e in edges {
        for y in [y0, y1] {
            if (e.a.y - y) * (e.b.y - y) < 0.0 {
                let x = e.a.x + (y - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y);
                if x > x0 && x < x1 {
                    xs.push(x);
                }
            }
        }
    }
    xs.extend(cuts.iter().copied().filter(|&x| x > x0 && x < x1));
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut traps: Vec<Trapezoid> = Vec::new();
    let mut slab_start: Vec<usize> = Vec::with_capacity(xs.len());
    let mut crossing: Vec<(f64, f64, f64)> = Vec::new();
    for (k, w) in xs.windows(2).enumerate() {
        slab_start.push(traps.len());
        let (xa, xb) = (w[0], w[1]);
        let xm = 0.5 * (xa + xb);
        crossing.clear();
        for e in edges {
            if e.a.x < xm && e.b.x > xm {
                crossing.push((e.y_at(xm), e.y_at(xa), e.y_at(xb)));
            }
        }
        if !crossing.len().is_multiple_of(2) {
            return Err(Error::DegenerateGeometry("odd edge parity while clipping".into()));
        }
        crossing.sort_by(|p, q| p.0.total_cmp(&q.0));
        for pair in crossing.chunks(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let t = Trapezoid {
                slab: k,
                xa,
                xb,
                lo_a: lo.1.clamp(y0, y1),
                lo_b: lo.2.clamp(y0, y1),
                hi_a: hi.1.clamp(y0, y1),
                hi_b: hi.2.clamp(y0, y1),
            };
            if t.hi_a - t.lo_a > eps || t.hi_b - t.lo_b > eps {
                traps.push(t);
            }
        }
    }
    slab_start.push(traps.len());

    // Union-find over trapezoids sharing a positive-length vertical boundary.
    let mut parent: Vec<usize> = (0..traps.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for k in 0..xs.len().saturating_sub(2) {
        if cuts.contains(&xs[k + 1]) {
            continue;
        }
        for i in slab_start[k]..slab_start[k + 1] {
            for j in slab_start[k + 1]..slab_start[k + 2] {
                let (l, r) = (&traps[i], &traps[j]);
                if l.hi_b.min(r.hi_a) - l.lo_b.max(r.lo_a) > eps {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }

    let mut comps: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..traps.len() {
        let root = find(&mut parent, i);
        match comps.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(i),
            None => comps.push((root, alloc::vec![i])),
        }
    }

    let mut out = Vec::with_capacity(comps.len());
    for (_, members) in comps {
        let segs = boundary_segments(&traps, &members, &xs, eps);
        let rings = chain(segs, eps)?;
        let rings: Vec<Vec<Point>> = rings
            .into_iter()
            .map(|r| simplify_ring(r, eps))
            .filter(|r| r.len() >= 3)
            .collect();
        out.push(rings);
    }
    Ok(out)
}

fn boundary_segments(traps: &[Trapezoid], members: &[usize], xs: &[f64], eps: f64) -> Vec<(Point, Point)> {
    let mut segs = Vec::new();
    for &i in members {
        let t = &traps[i];
        segs.push((Point::new(t.xa, t.lo_a), Point::new(t.xb, t.lo_b)));
        segs.push((Point::new(t.xb, t.hi_b), Point::new(t.xa, t.hi_a)));
    }
    // Vertical boundaries: on each slab line, the right sides of trapezoids
    // to the left run upwards and the left sides of those to the right run
    // downwards; the parts covered from both sides are interior.
    for (line, &x) in xs.iter().enumerate() {
        let mut left: Vec<(f64, f64)> = Vec::new();
        let mut right: Vec<(f64, f64)> = Vec::new();
        for &i in members {
            let t = &traps[i];
            if line > 0 && t.slab == line - 1 {
                left.push((t.lo_b, t.hi_b));
            }
            if t.slab == line {
                right.push((t.lo_a, t.hi_a));
            }
        }
        if left.is_empty() && right.is_empty() {
            continue;
        }
        for (lo, hi) in interval_difference(&left, &right, eps) {
            segs.push((Point::new(x, lo), Point::new(x, hi)));
        }
        for (lo, hi) in interval_difference(&right, &left, eps) {
            segs.push((Point::new(x, hi), Point::new(x, lo)));
        }
    }
    segs.retain(|(a, b)| a.distance(*b) > eps);
    segs
}

/// Parts of the union of `a` not covered by `b`, dropping slivers below `eps`.
fn interval_difference(a: &[(f64, f64)], b: &[(f64, f64)], eps: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut b: Vec<(f64, f64)> = b.to_vec();
    b.sort_by(|p, q| p.0.total_cmp(&q.0));
    for &(lo, hi) in a {
        let mut cur = lo;
        for &(blo, bhi) in &b {
            if bhi <= cur || blo >= hi {
                continue;
            }
            if blo > cur && blo - cur > eps {
                out.push((cur, blo));
            }
            cur = cur.max(bhi);
            if cur >= hi {
                break;
            }
        }
        if hi - cur > eps {
            out.push((cur, hi));
        }
    }
    out
}

fn chain(mut segs: Vec<(Point, Point)>, eps: f64) -> Result<Vec<Vec<Point>>> {
    let mut rings = Vec::new();
    let near = |p: Point, q: Point| (p.x - q.x).abs() <= eps && (p.y - q.y).abs() <= eps;
    while let Some((start, mut end)) = segs.pop() {
        let mut ring = alloc::vec![start];
        let mut guard = 0usize;
        while !near(end, start) {
            let pos = segs.iter().position(|(a, _)| near(*a, end)).ok_or_else(|| {
                Error::DegenerateGeometry("open boundary while tracing clip result".into())
            })?;
            let (a, b) = segs.swap_remove(pos);
            ring.push(a);
            end = b;
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::DegenerateGeometry("runaway boundary trace".into()));
            }
        }
        rings.push(ring);
    }
    Ok(rings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::region_area;
    use alloc::vec;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn simple_rectangle() -> PolygonRegion {
        PolygonRegion::new(
            Rect::new(0., 0., 300., 300.).to_ring(),
            vec![Rect::new(50., 50., 100., 150.).to_ring()],
        )
        .unwrap()
    }

    fn total_area(v: &[PolygonRegion]) -> f64 {
        v.iter().map(|r| region_area(r).unwrap()).sum()
    }

    #[test]
    fn identity_clip() {
        let unit = PolygonRegion::rect(&Rect::new(0., 0., 1., 1.));
        let got = clip_rect(&unit, &Rect::new(0., 0., 1., 1.)).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].outer().bbox(), Rect::new(0., 0., 1., 1.));
        assert_eq!(got[0].outer().len(), 4);
        assert_eq!(region_area(&got[0]).unwrap(), 1.0);
    }

    #[test]
    fn obstacle_truncates_cell() {
        let got = clip_rect(&simple_rectangle(), &Rect::new(50., 0., 100., 100.)).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].outer().bbox(), Rect::new(50., 0., 100., 50.));
        assert_eq!(region_area(&got[0]).unwrap(), 2500.0);
    }

    #[test]
    fn rect_inside_hole_is_empty() {
        let got = clip_rect(&simple_rectangle(), &Rect::new(60., 60., 90., 140.)).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn disjoint_rect_is_empty() {
        let got = clip_rect(&simple_rectangle(), &Rect::new(400., 0., 500., 100.)).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn degenerate_rect_is_rejected() {
        assert!(clip_rect(&simple_rectangle(), &Rect::new(0., 0., 0., 10.)).is_err());
    }

    #[test]
    fn fully_inside_checks() {
        let r = simple_rectangle();
        assert!(rect_fully_inside(&r, &Rect::new(0., 0., 50., 100.)));
        assert!(!rect_fully_inside(&r, &Rect::new(50., 0., 100., 100.)));
        let plain = PolygonRegion::rect(&Rect::new(0., 0., 50., 100.));
        assert!(rect_fully_inside(&plain, &Rect::new(0., 0., 50., 100.)));
        assert!(!rect_fully_inside(&plain, &Rect::new(0., 0., 50., 101.)));
    }

    #[test]
    fn concave_region_splits_into_two_pieces() {
        // U-shape: a rectangle across the opening's arms yields two pieces.
        let u = PolygonRegion::from_ring(
            Ring::new(pts(&[(0., 0.), (30., 0.), (30., 30.), (20., 30.), (20., 10.), (10., 10.), (10., 30.), (0., 30.)])).unwrap(),
        );
        let got = clip_rect(&u, &Rect::new(0., 15., 30., 25.)).unwrap();
        assert_eq!(got.len(), 2);
        assert!((total_area(&got) - 200.0).abs() < 1e-9);
    }

    #[test]
    fn hole_strictly_inside_cell_is_cut_open() {
        let r = PolygonRegion::new(
            Rect::new(0., 0., 10., 10.).to_ring(),
            vec![Rect::new(4., 4., 6., 6.).to_ring()],
        )
        .unwrap();
        let got = clip_rect(&r, &Rect::new(0., 0., 10., 10.)).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|p| p.holes().is_empty()));
        assert!((total_area(&got) - 96.0).abs() < 1e-9);
        for p in &got {
            let b = p.outer().bbox();
            assert!(b.max.x <= 5.0 + 1e-12 || b.min.x >= 5.0 - 1e-12);
        }
    }

    #[test]
    fn slanted_edges_clip_to_trapezoids() {
        let tri = PolygonRegion::from_ring(Ring::new(pts(&[(0., 0.), (100., 0.), (0., 100.)])).unwrap());
        let got = clip_rect(&tri, &Rect::new(0., 0., 60., 60.)).unwrap();
        assert_eq!(got.len(), 1);
        // Square minus the corner triangle above x + y = 100.
        assert!((total_area(&got) - (3600.0 - 0.5 * 20.0 * 20.0)).abs() < 1e-9);
        assert_eq!(got[0].outer().len(), 5);
    }
}

use alloc::vec::Vec;

use super::{Point, Ring, Tolerance};

pub type Triangle = [Point; 3];

/// Ear-clipping triangulation of a simple ring. Triangles come out
/// counter-clockwise regardless of the ring's orientation.
pub fn triangulate(ring: &Ring) -> Vec<Triangle> {
    let ccw = ring.to_ccw();
    let pts = ccw.vertices();
    let eps = Tolerance::for_bbox(&ring.bbox()).coord;
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len().saturating_sub(2));

    while idx.len() > 3 {
        let n = idx.len();
        let mut clipped = false;
        for i in 0..n {
            let a = pts[idx[(i + n - 1) % n]];
            let b = pts[idx[i]];
            let c = pts[idx[(i + 1) % n]];
            let turn = (b - a).cross(c - b);
            if turn.abs() <= eps * (c - a).norm() {
                // Collinear vertex: drop it without emitting a sliver.
                idx.remove(i);
                clipped = true;
                break;
            }
            if turn < 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&k| {
                let p = pts[k];
                p != a && p != b && p != c && in_triangle(p, a, b, c)
            });
            if !blocked {
                out.push([a, b, c]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            // Numerically stuck; fan out what is left rather than loop forever.
            let o = pts[idx[0]];
            for w in idx[1..].windows(2) {
                out.push([o, pts[w[0]], pts[w[1]]]);
            }
            return out;
        }
    }
    if idx.len() == 3 {
        let t = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
        if (t[1] - t[0]).cross(t[2] - t[0]) > 0.0 {
            out.push(t);
        }
    }
    out
}

fn in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    (b - a).cross(p - a) >= 0.0 && (c - b).cross(p - b) >= 0.0 && (a - c).cross(p - c) >= 0.0
}

/// Area of the intersection of two counter-clockwise convex polygons
/// (Sutherland-Hodgman, exact for convex operands).
fn convex_intersection_area(subject: &[Point], clip: &[Point]) -> f64 {
    let mut poly: Vec<Point> = subject.to_vec();
    let mut next: Vec<Point> = Vec::with_capacity(subject.len() + clip.len());
    let m = clip.len();
    for i in 0..m {
        if poly.is_empty() {
            return 0.0;
        }
        let (ca, cb) = (clip[i], clip[(i + 1) % m]);
        let edge = cb - ca;
        next.clear();
        let n = poly.len();
        for j in 0..n {
            let p = poly[j];
            let q = poly[(j + 1) % n];
            let sp = edge.cross(p - ca);
            let sq = edge.cross(q - ca);
            if sp >= 0.0 {
                next.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                next.push(p + (q - p) * t);
            }
        }
        core::mem::swap(&mut poly, &mut next);
    }
    super::shoelace(&poly).max(0.0)
}

/// Overlap area of two triangle sets, each shifted by its own offset.
pub(crate) fn triangles_overlap_area(a: &[Triangle], da: Point, b: &[Triangle], db: Point) -> f64 {
    let mut total = 0.0;
    for ta in a {
        let ta = [ta[0] + da, ta[1] + da, ta[2] + da];
        let ba = super::bbox_of(&ta);
        for tb in b {
            let tb = [tb[0] + db, tb[1] + db, tb[2] + db];
            let bb = super::bbox_of(&tb);
            if ba.interiors_overlap(&bb, 0.0) {
                total += convex_intersection_area(&ta, &tb);
            }
        }
    }
    total
}

/// Area of the interior intersection of two simple polygons.
pub fn overlap_area(a: &Ring, b: &Ring) -> f64 {
    if !a.bbox().interiors_overlap(&b.bbox(), 0.0) {
        return 0.0;
    }
    triangles_overlap_area(&triangulate(a), Point::ORIGIN, &triangulate(b), Point::ORIGIN)
}

/// True when the interiors intersect by more than the area tolerance of the
/// pair's combined bounding box. Touching along edges or at vertices is not overlap.
pub fn pieces_overlap(a: &Ring, b: &Ring) -> bool {
    let tol = Tolerance::for_bbox(&a.bbox().union(&b.bbox()));
    if !a.bbox().interiors_overlap(&b.bbox(), tol.coord) {
        return false;
    }
    overlap_area(a, b) > tol.area
}

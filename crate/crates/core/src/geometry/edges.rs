use alloc::vec::Vec;

use super::{Point, Rect, RectDim, Ring, Tolerance};

/// Length of `target`'s boundary that coincides with the container boundary
/// (the panel rectangle at the origin) or with any neighbour's boundary.
/// Overlapping contacts along one edge are counted once.
pub fn shared_edge_length(target: &Ring, neighbors: &[Ring], container: RectDim) -> f64 {
    let eps = Tolerance::relative(container.width.max(container.height), container.area()).coord;
    shared_edge_length_with(target, neighbors.iter(), Some(container.at_origin()), eps)
}

pub(crate) fn shared_edge_length_with<'a>(
    target: &Ring,
    neighbors: impl Iterator<Item = &'a Ring>,
    container: Option<Rect>,
    eps: f64,
) -> f64 {
    let tb = target.bbox();
    let mut segments: Vec<(Point, Point)> = Vec::new();
    if let Some(c) = container {
        let k = c.corners();
        for i in 0..4 {
            segments.push((k[i], k[(i + 1) % 4]));
        }
    }
    for n in neighbors {
        let nb = n.bbox();
        let touching = nb.min.x <= tb.max.x + eps
            && tb.min.x <= nb.max.x + eps
            && nb.min.y <= tb.max.y + eps
            && tb.min.y <= nb.max.y + eps;
        if touching {
            segments.extend(n.edges());
        }
    }

    let mut total = 0.0;
    let mut spans: Vec<(f64, f64)> = Vec::new();
    for (a, b) in target.edges() {
        let len = a.distance(b);
        if len <= eps {
            continue;
        }
        let u = (b - a) * (1.0 / len);
        spans.clear();
        for &(c, d) in &segments {
            let off_c = u.cross(c - a).abs();
            let off_d = u.cross(d - a).abs();
            if off_c > eps || off_d > eps {
                continue;
            }
            let tc = (c - a).dot(u);
            let td = (d - a).dot(u);
            let lo = tc.min(td).max(0.0);
            let hi = tc.max(td).min(len);
            if hi - lo > eps {
                spans.push((lo, hi));
            }
        }
        total += union_length(&mut spans);
    }
    total
}

fn union_length(spans: &mut [(f64, f64)]) -> f64 {
    spans.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for &(lo, hi) in spans.iter() {
        match cur {
            Some((clo, chi)) if lo <= chi => cur = Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                cur = Some((lo, hi));
            }
            None => cur = Some((lo, hi)),
        }
    }
    if let Some((lo, hi)) = cur {
        total += hi - lo;
    }
    total
}

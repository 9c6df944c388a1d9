//! Convex polygons in the plane.

use super::vector::{cross2, dot2, sub2, V2};
use crate::error::{Error, Result};

/// A convex polygon with strictly counterclockwise vertices and no repeated
/// or collinear consecutive vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<V2>,
}

fn scale_of(points: &[V2]) -> f64 {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt().max(1e-300)
}

/// Andrew's monotone chain. Returns hull vertices counterclockwise with
/// collinear points dropped.
pub fn convex_hull_2d(points: &[V2]) -> Vec<V2> {
    let mut pts: Vec<V2> = points
        .iter()
        .copied()
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let tol = 1e-14 * scale_of(&pts).powi(2);
    let mut hull: Vec<V2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &V2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if cross2(sub2(b, a), sub2(p, a)) <= tol {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

impl Polygon {
    /// Validates and normalizes a vertex loop: merges duplicates within
    /// 1e-12 (relative to the polygon's size), drops collinear middle
    /// vertices, reverses a clockwise loop, and rejects reflex or
    /// self-overlapping loops.
    pub fn new(vertices: Vec<V2>) -> Result<Self> {
        if vertices.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidBody("non-finite polygon vertex".into()));
        }
        if vertices.len() < 3 {
            return Err(Error::DegenerateBody("polygon needs at least 3 vertices".into()));
        }
        let scale = scale_of(&vertices);
        let merge = 1e-12 * scale;
        let mut pts: Vec<V2> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if let Some(last) = pts.last() {
                if (p[0] - last[0]).hypot(p[1] - last[1]) <= merge {
                    continue;
                }
            }
            pts.push(p);
        }
        while pts.len() > 1 {
            let (f, l) = (pts[0], pts[pts.len() - 1]);
            if (f[0] - l[0]).hypot(f[1] - l[1]) <= merge {
                pts.pop();
            } else {
                break;
            }
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let tol = 1e-12 * scale * scale;
        let mut changed = true;
        while changed && pts.len() >= 3 {
            changed = false;
            let n = pts.len();
            for i in 0..n {
                let a = pts[(i + n - 1) % n];
                let b = pts[i];
                let c = pts[(i + 1) % n];
                let cr = cross2(sub2(b, a), sub2(c, b));
                if cr.abs() <= tol {
                    pts.remove(i);
                    changed = true;
                    break;
                }
                if cr < 0.0 {
                    return Err(Error::InvalidBody("polygon is not convex".into()));
                }
            }
        }
        if pts.len() < 3 {
            return Err(Error::DegenerateBody("polygon has zero area".into()));
        }
        // Total turning must be one full revolution (rules out star loops).
        let n = pts.len();
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = sub2(pts[(i + 1) % n], pts[i]);
                let e1 = sub2(pts[(i + 2) % n], pts[(i + 1) % n]);
                cross2(e0, e1).atan2(dot2(e0, e1))
            })
            .sum();
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::InvalidBody("polygon loop winds more than once".into()));
        }
        if signed_area(&pts) <= 1e-14 * scale * scale {
            return Err(Error::DegenerateBody("polygon has zero area".into()));
        }
        Ok(Polygon { vertices: pts })
    }

    /// Convex hull of an arbitrary point set.
    pub fn hull(points: &[V2]) -> Result<Self> {
        let hull = convex_hull_2d(points);
        if hull.len() < 3 {
            return Err(Error::DegenerateBody("points are collinear".into()));
        }
        Polygon::new(hull)
    }

    pub fn vertices(&self) -> &[V2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> V2 {
        let v = &self.vertices;
        let o = v[0];
        let mut acc = [0.0; 2];
        let mut total = 0.0;
        for i in 1..v.len() - 1 {
            let a = sub2(v[i], o);
            let b = sub2(v[i + 1], o);
            let w = 0.5 * cross2(a, b);
            total += w;
            acc[0] += w * (a[0] + b[0]) / 3.0;
            acc[1] += w * (a[1] + b[1]) / 3.0;
        }
        [o[0] + acc[0] / total, o[1] + acc[1] / total]
    }

    pub fn diameter_scale(&self) -> f64 {
        scale_of(&self.vertices)
    }

    /// (min, max) of ⟨x, u⟩ over the polygon.
    pub fn support_interval(&self, u: V2) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                let s = dot2(p, u);
                (lo.min(s), hi.max(s))
            })
    }

    /// The segment cut by the line ⟨x, u⟩ = t, as its endpoints in terms of
    /// the coordinate along `w` (a unit vector orthogonal to `u`). `None`
    /// when the line misses the polygon.
    pub fn chord(&self, u: V2, w: V2, t: f64) -> Option<(f64, f64)> {
        let eps = 1e-12 * self.diameter_scale();
        let n = self.vertices.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let sa = dot2(a, u) - t;
            let sb = dot2(b, u) - t;
            if sa.abs() <= eps {
                let c = dot2(a, w);
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if (sa < -eps && sb > eps) || (sa > eps && sb < -eps) {
                let lam = sa / (sa - sb);
                let p = [a[0] + lam * (b[0] - a[0]), a[1] + lam * (b[1] - a[1])];
                let c = dot2(p, w);
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        if lo.is_finite() {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Length of the chord cut by ⟨x, u⟩ = t (0 outside the support interval).
    pub fn chord_length(&self, u: V2, t: f64) -> f64 {
        let w = [-u[1], u[0]];
        self.chord(u, w, t).map_or(0.0, |(lo, hi)| hi - lo)
    }

    /// Signed slack of the worst edge constraint: positive inside.
    pub fn inside_margin(&self, p: V2) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let e = sub2(b, a);
                cross2(e, sub2(p, a)) / e[0].hypot(e[1])
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: V2, tol: f64) -> bool {
        self.inside_margin(p) >= -tol
    }

    /// Intersection with the half-plane {x : ⟨a, x⟩ ≤ b}. `None` when the
    /// result has (numerically) zero area.
    pub fn clip_halfplane(&self, a: V2, b: f64) -> Option<Polygon> {
        let out = clip_loop(&self.vertices, a, b);
        if out.len() < 3 {
            return None;
        }
        let scale = self.diameter_scale();
        if signed_area(&out) <= 1e-13 * scale * scale {
            return None;
        }
        Polygon::hull(&out).ok()
    }

    /// Fan triangles (v0, vi, vi+1).
    pub fn triangles(&self) -> impl Iterator<Item = [V2; 3]> + '_ {
        let v = &self.vertices;
        (1..v.len() - 1).map(move |i| [v[0], v[i], v[i + 1]])
    }

    pub fn transformed<F: Fn(V2) -> V2>(&self, map: F) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|&p| map(p)).collect())
    }
}

/// Sutherland–Hodgman step against {x : ⟨a, x⟩ ≤ b}.
pub(crate) fn clip_loop(poly: &[V2], a: V2, b: f64) -> Vec<V2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let sp = dot2(a, p) - b;
        let sq = dot2(a, q) - b;
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let lam = sp / (sp - sq);
            out.push([p[0] + lam * (q[0] - p[0]), p[1] + lam * (q[1] - p[1])]);
        }
    }
    out
}

pub(crate) fn signed_area(v: &[V2]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let o = v[0];
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += cross2(sub2(v[i], o), sub2(v[i + 1], o));
    }
    0.5 * s
}

//! Convex polytopes in 3-space, stored as vertex lists plus outward
//! counterclockwise face loops.

use std::collections::HashSet;

use super::polygon::{convex_hull_2d, signed_area};
use super::vector::{add3, cross3, det3, dot3, norm3, scale3, sub3, V2, V3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<V3>,
    /// Outward-oriented (counterclockwise seen from outside) vertex loops.
    faces: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    scale: f64,
}

fn bbox_diagonal(points: &[V3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    norm3(sub3(hi, lo)).max(1e-300)
}

/// Two unit vectors spanning the plane orthogonal to unit `n`, with
/// `a × b = n`.
pub fn plane_basis(n: V3) -> (V3, V3) {
    let helper = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
        [1.0, 0.0, 0.0]
    } else if n[1].abs() <= n[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let a = cross3(helper, n);
    let a = scale3(a, 1.0 / norm3(a));
    let b = cross3(n, a);
    (a, b)
}

fn dedupe_points(points: &[V3], tol: f64) -> Vec<V3> {
    let mut out: Vec<V3> = Vec::with_capacity(points.len());
    for &p in points {
        if !out.iter().any(|q| norm3(sub3(*q, p)) <= tol) {
            out.push(p);
        }
    }
    out
}

impl Polytope {
    /// Convex hull of a point set by supporting-plane enumeration over
    /// point triples. Points within 1e-12 (relative) are merged; only
    /// extreme points survive as vertices.
    pub fn hull(points: &[V3]) -> Result<Self> {
        if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidBody("non-finite polytope vertex".into()));
        }
        if points.len() < 4 {
            return Err(Error::DegenerateBody("polytope needs at least 4 points".into()));
        }
        let scale = bbox_diagonal(points);
        let pts = dedupe_points(points, 1e-12 * scale);
        let n = pts.len();
        if n < 4 {
            return Err(Error::DegenerateBody("polytope needs 4 distinct points".into()));
        }
        let eps = 1e-10 * scale;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut raw_faces: Vec<(V3, Vec<usize>)> = Vec::new();
        let mut signed = vec![0.0; n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let nrm = cross3(sub3(pts[j], pts[i]), sub3(pts[k], pts[i]));
                    let len = norm3(nrm);
                    if len <= 1e-9 * scale * scale {
                        continue;
                    }
                    let mut nrm = scale3(nrm, 1.0 / len);
                    let d = dot3(nrm, pts[i]);
                    let (mut lo, mut hi) = (0.0f64, 0.0f64);
                    for (l, p) in pts.iter().enumerate() {
                        let s = dot3(nrm, *p) - d;
                        signed[l] = s;
                        lo = lo.min(s);
                        hi = hi.max(s);
                    }
                    if hi <= eps {
                        // already outward
                    } else if lo >= -eps {
                        nrm = scale3(nrm, -1.0);
                    } else {
                        continue;
                    }
                    let on: Vec<usize> = (0..n).filter(|&l| signed[l].abs() <= eps).collect();
                    if seen.insert(on.clone()) {
                        raw_faces.push((nrm, on));
                    }
                }
            }
        }
        if raw_faces.len() < 4 {
            return Err(Error::DegenerateBody("points are coplanar".into()));
        }
        let mut faces = Vec::with_capacity(raw_faces.len());
        for (nrm, on) in raw_faces {
            let (a, b) = plane_basis(nrm);
            let flat: Vec<V2> = on.iter().map(|&l| [dot3(pts[l], a), dot3(pts[l], b)]).collect();
            let ring = convex_hull_2d(&flat);
            if ring.len() < 3 {
                continue;
            }
            let loop_idx: Vec<usize> = ring
                .iter()
                .map(|q| on[flat.iter().position(|f| f == q).expect("hull point from input")])
                .collect();
            faces.push(loop_idx);
        }
        Self::from_loops(&pts, faces, scale)
    }

    /// Rebuilds compact vertex indexing from face loops over `pts`.
    fn from_loops(pts: &[V3], faces: Vec<Vec<usize>>, scale: f64) -> Result<Self> {
        let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let mut remap = vec![usize::MAX; pts.len()];
        for (new, &old) in used.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<V3> = used.iter().map(|&i| pts[i]).collect();
        let faces: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|f| f.into_iter().map(|i| remap[i]).collect())
            .collect();
        let mut edges: Vec<(usize, usize)> = faces
            .iter()
            .flat_map(|f| {
                (0..f.len()).map(move |i| {
                    let (a, b) = (f[i], f[(i + 1) % f.len()]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let poly = Polytope {
            vertices,
            faces,
            edges,
            scale,
        };
        if poly.volume() <= 1e-12 * scale.powi(3) {
            return Err(Error::DegenerateBody("polytope has zero volume".into()));
        }
        Ok(poly)
    }

    /// Builds a polytope from face loops given as coordinates (used after
    /// clipping). Coincident points are merged.
    fn from_coordinate_loops(loops: Vec<Vec<V3>>, scale: f64) -> Result<Self> {
        let tol = 1e-11 * scale;
        let mut pts: Vec<V3> = Vec::new();
        let mut faces = Vec::with_capacity(loops.len());
        for lp in loops {
            let mut idx: Vec<usize> = Vec::with_capacity(lp.len());
            for p in lp {
                let id = match pts.iter().position(|q| norm3(sub3(*q, p)) <= tol) {
                    Some(id) => id,
                    None => {
                        pts.push(p);
                        pts.len() - 1
                    }
                };
                if idx.last() != Some(&id) && (idx.is_empty() || idx[0] != id) {
                    idx.push(id);
                }
            }
            if idx.len() >= 3 {
                faces.push(idx);
            }
        }
        if faces.len() < 4 {
            return Err(Error::DegenerateBody("clipped polytope is flat".into()));
        }
        Self::from_loops(&pts, faces, scale)
    }

    pub fn vertices(&self) -> &[V3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn reference_point(&self) -> V3 {
        let s = self.vertices.iter().fold([0.0; 3], |acc, &p| add3(acc, p));
        scale3(s, 1.0 / self.vertices.len() as f64)
    }

    /// Tetrahedra (o, a, b, c) fanning every face from the vertex mean.
    pub fn tetrahedra(&self) -> Vec<[V3; 4]> {
        let o = self.reference_point();
        let mut out = Vec::new();
        for f in &self.faces {
            let a = self.vertices[f[0]];
            for i in 1..f.len() - 1 {
                out.push([o, a, self.vertices[f[i]], self.vertices[f[i + 1]]]);
            }
        }
        out
    }

    pub fn volume(&self) -> f64 {
        self.tetrahedra()
            .iter()
            .map(|t| det3(sub3(t[1], t[0]), sub3(t[2], t[0]), sub3(t[3], t[0])) / 6.0)
            .sum()
    }

    pub fn centroid(&self) -> V3 {
        let mut acc = [0.0; 3];
        let mut total = 0.0;
        for t in self.tetrahedra() {
            let w = det3(sub3(t[1], t[0]), sub3(t[2], t[0]), sub3(t[3], t[0])) / 6.0;
            total += w;
            let c = scale3(add3(add3(t[0], t[1]), add3(t[2], t[3])), 0.25);
            acc = add3(acc, scale3(c, w));
        }
        scale3(acc, 1.0 / total)
    }

    /// Outward unit normal and offset of each face: ⟨n, x⟩ ≤ d on the body.
    pub fn face_planes(&self) -> Vec<(V3, f64)> {
        self.faces
            .iter()
            .map(|f| {
                // Newell's method
                let mut n = [0.0; 3];
                for i in 0..f.len() {
                    let p = self.vertices[f[i]];
                    let q = self.vertices[f[(i + 1) % f.len()]];
                    n[0] += (p[1] - q[1]) * (p[2] + q[2]);
                    n[1] += (p[2] - q[2]) * (p[0] + q[0]);
                    n[2] += (p[0] - q[0]) * (p[1] + q[1]);
                }
                let n = scale3(n, 1.0 / norm3(n));
                let d = f.iter().map(|&i| dot3(n, self.vertices[i])).sum::<f64>() / f.len() as f64;
                (n, d)
            })
            .collect()
    }

    pub fn support_interval(&self, u: V3) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                let s = dot3(p, u);
                (lo.min(s), hi.max(s))
            })
    }

    /// Cross-section with the plane ⟨x, u⟩ = t, expressed in the in-plane
    /// coordinates (⟨x, a⟩, ⟨x, b⟩). Possibly fewer than 3 points when the
    /// plane only touches the body.
    pub fn section_points(&self, u: V3, a: V3, b: V3, t: f64) -> Vec<V2> {
        let eps = 1e-12 * self.scale;
        let s: Vec<f64> = self.vertices.iter().map(|&p| dot3(p, u) - t).collect();
        let mut out = Vec::new();
        for (i, p) in self.vertices.iter().enumerate() {
            if s[i].abs() <= eps {
                out.push([dot3(*p, a), dot3(*p, b)]);
            }
        }
        for &(i, j) in &self.edges {
            let (si, sj) = (s[i], s[j]);
            if (si < -eps && sj > eps) || (si > eps && sj < -eps) {
                let lam = si / (si - sj);
                let p = add3(self.vertices[i], scale3(sub3(self.vertices[j], self.vertices[i]), lam));
                out.push([dot3(p, a), dot3(p, b)]);
            }
        }
        convex_hull_2d(&out)
    }

    pub fn section_area(&self, u: V3, t: f64) -> f64 {
        let (a, b) = plane_basis(u);
        let ring = self.section_points(u, a, b, t);
        signed_area(&ring).max(0.0)
    }

    /// Smallest slack over the face constraints (positive inside).
    pub fn inside_margin(&self, p: V3) -> f64 {
        self.face_planes()
            .iter()
            .map(|(n, d)| d - dot3(*n, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: V3, tol: f64) -> bool {
        self.inside_margin(p) >= -tol
    }

    /// Intersection with {x : ⟨n, x⟩ ≤ d}; `None` when (numerically) empty
    /// or flat.
    pub fn clip_halfspace(&self, n: V3, d: f64) -> Option<Polytope> {
        let eps = 1e-12 * self.scale;
        let s: Vec<f64> = self.vertices.iter().map(|&p| dot3(n, p) - d).collect();
        if s.iter().all(|&x| x <= eps) {
            return Some(self.clone());
        }
        if s.iter().all(|&x| x >= -eps) {
            return None;
        }
        let mut loops: Vec<Vec<V3>> = Vec::new();
        let mut cap: Vec<V3> = Vec::new();
        for f in &self.faces {
            let mut out: Vec<V3> = Vec::with_capacity(f.len() + 2);
            for k in 0..f.len() {
                let (i, j) = (f[k], f[(k + 1) % f.len()]);
                let (si, sj) = (s[i], s[j]);
                if si <= eps {
                    out.push(self.vertices[i]);
                    if si.abs() <= eps {
                        cap.push(self.vertices[i]);
                    }
                }
                if (si < -eps && sj > eps) || (si > eps && sj < -eps) {
                    let lam = si / (si - sj);
                    let p = add3(self.vertices[i], scale3(sub3(self.vertices[j], self.vertices[i]), lam));
                    out.push(p);
                    cap.push(p);
                }
            }
            if out.len() >= 3 {
                loops.push(out);
            }
        }
        let nn = norm3(n);
        let unit = scale3(n, 1.0 / nn);
        let (a, b) = plane_basis(unit);
        let flat: Vec<V2> = cap.iter().map(|p| [dot3(*p, a), dot3(*p, b)]).collect();
        let ring = convex_hull_2d(&flat);
        if ring.len() >= 3 {
            let cap_loop: Vec<V3> = ring
                .iter()
                .map(|q| cap[flat.iter().position(|f| f == q).expect("hull point from input")])
                .collect();
            loops.push(cap_loop);
        }
        let poly = Polytope::from_coordinate_loops(loops, self.scale).ok()?;
        if poly.volume() <= 1e-11 * self.scale.powi(3) {
            return None;
        }
        Some(poly)
    }

    pub fn transformed<F: Fn(V3) -> V3>(&self, map: F) -> Result<Polytope> {
        let pts: Vec<V3> = self.vertices.iter().map(|&p| map(p)).collect();
        Polytope::hull(&pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cube() -> Polytope {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        pts.push([0.5, 0.5, 0.5]);
        pts.push([0.5, 0.5, 1.0]);
        Polytope::hull(&pts).unwrap()
    }

    #[test]
    fn cube_structure() {
        let c = cube();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.faces().len(), 6);
        assert_eq!(c.edges().len(), 12);
        assert!((c.volume() - 1.0).abs() < 1e-14);
        let g = c.centroid();
        for x in g {
            assert!((x - 0.5).abs() < 1e-14);
        }
        for (n, d) in c.face_planes() {
            let centre_slack = d - dot3(n, [0.5, 0.5, 0.5]);
            assert!((centre_slack - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn cube_sections() {
        let c = cube();
        assert!((c.section_area([1.0, 0.0, 0.0], 0.5) - 1.0).abs() < 1e-14);
        assert!((c.section_area([1.0, 0.0, 0.0], 0.0) - 1.0).abs() < 1e-14);
        assert_eq!(c.section_area([1.0, 0.0, 0.0], 1.2), 0.0);
        let u = scale3([1.0, 1.0, 1.0], 1.0 / 3f64.sqrt());
        // the central hexagon has area 3√3/4
        let mid = c.section_area(u, 3f64.sqrt() / 2.0);
        assert!((mid - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-13);
    }

    #[test]
    fn clipping_halves_the_cube() {
        let c = cube();
        let half = c.clip_halfspace([1.0, 1.0, 0.0], 1.0).unwrap();
        assert!((half.volume() - 0.5).abs() < 1e-14);
        assert_eq!(half.faces().len(), 5);
        assert!(c.clip_halfspace([1.0, 0.0, 0.0], -0.1).is_none());
        let same = c.clip_halfspace([1.0, 0.0, 0.0], 2.0).unwrap();
        assert!((same.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coplanar_points_are_degenerate() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(matches!(Polytope::hull(&pts), Err(Error::DegenerateBody(_))));
    }
}

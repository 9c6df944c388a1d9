//! Concave functions given as minima of affine pieces, their supporting
//! affine majorants, and the center point built from the equal-split cone.

use serde::{Deserialize, Serialize};

use crate::conesolver::{equal_split_cone, TruncatedCone};
use crate::error::{Error, Result};
use crate::geometry::vector::{cross2, dot, dot3, norm, sub2, V2, V3};
use crate::geometry::{convex_hull_2d, ConvexBody, Direction, Point, Polygon, ProfileBody};
use crate::symmetrize::{schwarz_profile, DEFAULT_KNOTS};

/// Activity tolerance when picking the supporting piece.
pub const ACTIVE_TOL: f64 = 1e-12;

/// x ↦ ⟨gradient, x⟩ + offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub gradient: Vec<f64>,
    pub offset: f64,
}

impl AffinePiece {
    pub fn new(gradient: Vec<f64>, offset: f64) -> Self {
        AffinePiece { gradient, offset }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.gradient, x) + self.offset
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }
}

/// A nonnegative concave function: one affine piece or the pointwise
/// minimum of several.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ConcaveFunction {
    #[serde(rename = "affine")]
    Affine { gradient: Vec<f64>, offset: f64 },
    #[serde(rename = "min-affine")]
    MinAffine { pieces: Vec<AffinePiece> },
}

impl ConcaveFunction {
    pub fn affine(gradient: Vec<f64>, offset: f64) -> Self {
        ConcaveFunction::Affine { gradient, offset }
    }

    pub fn min_affine(pieces: Vec<AffinePiece>) -> Self {
        ConcaveFunction::MinAffine { pieces }
    }

    /// The affine pieces (a single one for `Affine`).
    pub fn pieces(&self) -> Vec<AffinePiece> {
        match self {
            ConcaveFunction::Affine { gradient, offset } => vec![AffinePiece::new(gradient.clone(), *offset)],
            ConcaveFunction::MinAffine { pieces } => pieces.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConcaveFunction::Affine { gradient, .. } => gradient.len(),
            ConcaveFunction::MinAffine { pieces } => pieces.first().map_or(0, AffinePiece::dim),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ConcaveFunction::Affine { gradient, offset } => dot(gradient, x) + offset,
            ConcaveFunction::MinAffine { pieces } => pieces.iter().map(|p| p.eval(x)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Structural checks plus f ≥ 0 on the body (tested at the points where
    /// a minimum of affine functions attains its minimum).
    pub fn validate_on(&self, body: &ConvexBody) -> Result<()> {
        let pieces = self.pieces();
        if pieces.is_empty() {
            return Err(Error::InvalidFunction("min-affine needs at least one piece".into()));
        }
        let n = body.dim();
        for p in &pieces {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
            if p.gradient.iter().any(|g| !g.is_finite()) || !p.offset.is_finite() {
                return Err(Error::InvalidFunction("non-finite coefficient".into()));
            }
            if matches!(body, ConvexBody::Profile(_)) && p.gradient[1..].iter().any(|&g| g != 0.0) {
                return Err(Error::Unsupported(
                    "functions on profile bodies must depend on the axis coordinate only".into(),
                ));
            }
        }
        let fmin = body
            .extreme_points()
            .iter()
            .map(|x| self.eval(x))
            .fold(f64::INFINITY, f64::min);
        let scale = self.magnitude_on(body);
        if fmin < -1e-12 * scale.max(1.0) {
            return Err(Error::NegativeFunction(fmin));
        }
        Ok(())
    }

    /// Size of the terms |b| + Σ|g_i x_i| summed when evaluating on the body,
    /// which sets the roundoff level of `eval`.
    pub fn magnitude_on(&self, body: &ConvexBody) -> f64 {
        let pieces = self.pieces();
        body.extreme_points()
            .iter()
            .flat_map(|x| {
                pieces
                    .iter()
                    .map(move |p| p.offset.abs() + p.gradient.iter().zip(x).map(|(g, xi)| (g * xi).abs()).sum::<f64>())
            })
            .fold(0.0f64, f64::max)
    }
}

/// An affine majorant of `f` touching it at `basepoint`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportingAffine {
    pub gradient: Vec<f64>,
    pub offset: f64,
    pub basepoint: Point,
    /// Index of the piece used.
    pub piece: usize,
}

impl SupportingAffine {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.gradient, x) + self.offset
    }
}

/// The active piece at `x0` with the smallest index among those within
/// 1e-12 of `f(x0)`; each piece dominates the minimum, so this is a
/// supporting affine function.
pub fn supporting_affine(body: &ConvexBody, f: &ConcaveFunction, x0: &Point) -> Result<SupportingAffine> {
    if x0.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: x0.dim(),
        });
    }
    if !body.contains(x0, 1e-12 * body.scale())? {
        return Err(Error::OutsideBody);
    }
    let pieces = f.pieces();
    if pieces.is_empty() {
        return Err(Error::InvalidFunction("min-affine needs at least one piece".into()));
    }
    let values: Vec<f64> = pieces.iter().map(|p| p.eval(x0)).collect();
    let fmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = ACTIVE_TOL * fmin.abs().max(1.0);
    let idx = values
        .iter()
        .position(|&v| v <= fmin + tol)
        .expect("minimum is attained");
    Ok(SupportingAffine {
        gradient: pieces[idx].gradient.clone(),
        offset: pieces[idx].offset,
        basepoint: x0.clone(),
        piece: idx,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterDiagnostics {
    /// The maximizer over the slice was not unique and the centroid of the
    /// maximizing face was taken.
    pub tie_broken: bool,
    pub start_point: Point,
    /// Index of the supporting piece at the start point.
    pub supporting_piece: usize,
    /// The supporting gradient vanished and the first axis was used.
    pub direction_defaulted: bool,
    /// The slope-balancing function changed sign more than once.
    pub multiple_balanced_slopes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterResult {
    pub point: Point,
    pub direction: Direction,
    pub t_value: f64,
    pub cone: TruncatedCone,
    pub f_at_center: f64,
    pub diagnostics: CenterDiagnostics,
}

/// Center with the default start point (the centroid) and profile size.
pub fn find_center(body: &ConvexBody, f: &ConcaveFunction, x0: Option<&Point>) -> Result<CenterResult> {
    find_center_with(body, f, x0, DEFAULT_KNOTS)
}

pub fn find_center_with(
    body: &ConvexBody,
    f: &ConcaveFunction,
    x0: Option<&Point>,
    knot_count: usize,
) -> Result<CenterResult> {
    f.validate_on(body)?;
    let start = match x0 {
        Some(p) => p.clone(),
        None => body.centroid()?,
    };
    let g = supporting_affine(body, f, &start)?;
    let gnorm = norm(&g.gradient);
    let gscale = f.pieces().iter().map(|p| norm(&p.gradient)).fold(0.0f64, f64::max);
    let defaulted = gnorm <= 1e-14 * gscale.max(1.0);
    let direction = if defaulted {
        Direction::axis(body.dim(), 0)
    } else {
        Direction::normalize(&g.gradient)?
    };
    let profile = schwarz_profile(body, &direction, knot_count)?;
    let cone = equal_split_cone(&profile)?;
    let t_r = cone.t_r;
    let u = direction.as_slice();

    let (point, tie_broken) = match body {
        ConvexBody::Polygon(poly) => maximize_on_chord(poly, f, [u[0], u[1]], t_r)?,
        ConvexBody::Polytope(poly) => {
            let (a, b) = crate::geometry::plane_basis([u[0], u[1], u[2]]);
            let ring = poly.section_points([u[0], u[1], u[2]], a, b, t_r);
            maximize_on_section(&ring, f, [u[0], u[1], u[2]], a, b, t_r)?
        }
        ConvexBody::Profile(_) => {
            let sign = ProfileBody::axis_sign(&direction).unwrap_or(1.0);
            let mut x = vec![0.0; body.dim()];
            x[0] = sign * t_r;
            (x, profile.eval(t_r) > 0.0)
        }
    };
    let f0 = f.eval(&point);
    let multiple = cone.multiple_balanced_slopes;
    Ok(CenterResult {
        t_value: dot(&point, u),
        point: Point(point),
        direction,
        cone,
        f_at_center: f0,
        diagnostics: CenterDiagnostics {
            tie_broken,
            start_point: start,
            supporting_piece: g.piece,
            direction_defaulted: defaulted,
            multiple_balanced_slopes: multiple,
        },
    })
}

/// Maximum of s ↦ min_i (α_i s + β_i) on [lo, hi]. Returns the argmax
/// interval and the maximum.
pub(crate) fn maximize_min_affine_1d(lines: &[(f64, f64)], lo: f64, hi: f64) -> (f64, f64, f64) {
    let h = |s: f64| lines.iter().map(|(a, b)| a * s + b).fold(f64::INFINITY, f64::min);
    if hi <= lo {
        return (lo, lo, h(lo));
    }
    let scale = lines
        .iter()
        .map(|(a, b)| a.abs() * lo.abs().max(hi.abs()) + b.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let active_tol = 1e-13 * scale;
    // right derivative: smallest slope among active pieces
    let right_slope = |s: f64| {
        let v = h(s);
        lines
            .iter()
            .filter(|(a, b)| a * s + b <= v + active_tol)
            .map(|(a, _)| *a)
            .fold(f64::INFINITY, f64::min)
    };
    let peak = if right_slope(lo) <= 0.0 {
        lo
    } else if right_slope(hi) > 0.0 || lines.iter().all(|(a, _)| *a > 0.0) {
        hi
    } else {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if right_slope(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        // the kink between the rising piece active at `a` and the
        // falling piece active at `b`
        let pick = |s: f64, rising: bool| {
            let v = h(s);
            lines
                .iter()
                .filter(|(al, be)| al * s + be <= v + active_tol && ((*al > 0.0) == rising))
                .copied()
                .next()
        };
        match (pick(a, true), pick(b, false)) {
            (Some((a1, b1)), Some((a2, b2))) if a1 != a2 => {
                let s = (b2 - b1) / (a1 - a2);
                if s >= lo && s <= hi {
                    s
                } else {
                    0.5 * (a + b)
                }
            }
            _ => 0.5 * (a + b),
        }
    };
    let fmax = h(peak);
    // slopes whose total change over the interval is at roundoff level
    let flat_slope = active_tol / (hi - lo);
    let flat = lines
        .iter()
        .any(|(a, b)| a * peak + b <= fmax + active_tol && a.abs() <= flat_slope);
    if !flat {
        return (peak, peak, fmax);
    }
    // every sloped piece stays above the plateau level on [left, right]
    let mut left = lo;
    let mut right = hi;
    for &(a, b) in lines {
        if a > flat_slope {
            left = left.max((fmax - b) / a);
        } else if a < -flat_slope {
            right = right.min((fmax - b) / a);
        }
    }
    (left.min(peak), right.max(peak), fmax)
}

fn maximize_on_chord(poly: &Polygon, f: &ConcaveFunction, u: V2, t: f64) -> Result<(Vec<f64>, bool)> {
    let w = [-u[1], u[0]];
    let (lo, hi) = poly
        .chord(u, w, t)
        .ok_or_else(|| Error::DegenerateBody("median slice misses the body".into()))?;
    let lines: Vec<(f64, f64)> = f
        .pieces()
        .iter()
        .map(|p| {
            let g = [p.gradient[0], p.gradient[1]];
            (g[0] * w[0] + g[1] * w[1], p.offset + t * (g[0] * u[0] + g[1] * u[1]))
        })
        .collect();
    let (a, b, _) = maximize_min_affine_1d(&lines, lo, hi);
    let s = 0.5 * (a + b);
    let tie = b - a > 1e-12 * poly.diameter_scale();
    Ok((vec![t * u[0] + s * w[0], t * u[1] + s * w[1]], tie))
}

/// Maximizes `f` over the planar section (given in frame coordinates
/// (a, b) at height `t` along `u`) by enumerating the vertices of the
/// piece arrangement clipped to the section.
fn maximize_on_section(ring: &[V2], f: &ConcaveFunction, u: V3, a: V3, b: V3, t: f64) -> Result<(Vec<f64>, bool)> {
    if ring.is_empty() {
        return Err(Error::DegenerateBody("median slice misses the body".into()));
    }
    let lift = |y: V2| -> Vec<f64> { (0..3).map(|k| t * u[k] + y[0] * a[k] + y[1] * b[k]).collect() };
    // planar pieces: (α, β, γ) ↦ α y0 + β y1 + γ
    let planes: Vec<(f64, f64, f64)> = f
        .pieces()
        .iter()
        .map(|p| {
            let g = [p.gradient[0], p.gradient[1], p.gradient[2]];
            (dot3(g, a), dot3(g, b), p.offset + t * dot3(g, u))
        })
        .collect();
    let h = |y: V2| {
        planes
            .iter()
            .map(|(p, q, r)| p * y[0] + q * y[1] + r)
            .fold(f64::INFINITY, f64::min)
    };

    if ring.len() < 3 {
        // The slice is a segment or a point.
        let p0 = ring[0];
        let p1 = *ring.last().expect("nonempty");
        let d = sub2(p1, p0);
        let lines: Vec<(f64, f64)> = planes
            .iter()
            .map(|(p, q, r)| (p * d[0] + q * d[1], p * p0[0] + q * p0[1] + r))
            .collect();
        let (s0, s1, _) = maximize_min_affine_1d(&lines, 0.0, 1.0);
        let s = 0.5 * (s0 + s1);
        let tie = ring.len() == 2 && s1 - s0 > 1e-12;
        return Ok((lift([p0[0] + s * d[0], p0[1] + s * d[1]]), tie));
    }

    let inside = |y: V2| {
        let n = ring.len();
        (0..n).all(|i| {
            let e = sub2(ring[(i + 1) % n], ring[i]);
            cross2(e, sub2(y, ring[i])) >= -1e-12 * (e[0].hypot(e[1])).max(1e-300)
        })
    };
    let mut candidates: Vec<V2> = ring.to_vec();
    let k = planes.len();
    for i in 0..k {
        for j in i + 1..k {
            // difference line: δα y0 + δβ y1 + δγ = 0
            let (da, db, dc) = (
                planes[i].0 - planes[j].0,
                planes[i].1 - planes[j].1,
                planes[i].2 - planes[j].2,
            );
            if da == 0.0 && db == 0.0 {
                continue;
            }
            let n = ring.len();
            for e in 0..n {
                let (p, q) = (ring[e], ring[(e + 1) % n]);
                let sp = da * p[0] + db * p[1] + dc;
                let sq = da * q[0] + db * q[1] + dc;
                if (sp <= 0.0 && sq >= 0.0) || (sp >= 0.0 && sq <= 0.0) {
                    if sp == sq {
                        continue;
                    }
                    let lam = sp / (sp - sq);
                    candidates.push([p[0] + lam * (q[0] - p[0]), p[1] + lam * (q[1] - p[1])]);
                }
            }
            for l in j + 1..k {
                let (ea, eb, ec) = (
                    planes[i].0 - planes[l].0,
                    planes[i].1 - planes[l].1,
                    planes[i].2 - planes[l].2,
                );
                let det = da * eb - db * ea;
                if det.abs() <= 1e-14 * (da.abs() + db.abs()) * (ea.abs() + eb.abs()) {
                    continue;
                }
                let y = [(-dc * eb + db * ec) / det, (-da * ec + dc * ea) / det];
                if inside(y) {
                    candidates.push(y);
                }
            }
        }
    }
    let values: Vec<f64> = candidates.iter().map(|&y| h(y)).collect();
    let fmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12 * fmax.abs().max(1.0);
    let best: Vec<V2> = candidates
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v >= fmax - tol)
        .map(|(y, _)| *y)
        .collect();
    let face = convex_hull_2d(&best);
    let extent = ring
        .iter()
        .flat_map(|p| ring.iter().map(move |q| (p[0] - q[0]).hypot(p[1] - q[1])))
        .fold(0.0f64, f64::max);
    let (y, tie) = match face.len() {
        0 => (best[0], false),
        1 => (face[0], false),
        2 => {
            let tie = (face[0][0] - face[1][0]).hypot(face[0][1] - face[1][1]) > 1e-12 * extent;
            ([0.5 * (face[0][0] + face[1][0]), 0.5 * (face[0][1] + face[1][1])], tie)
        }
        _ => match Polygon::new(face.clone()) {
            Ok(poly) => (poly.centroid(), true),
            Err(_) => {
                // numerically flat face: use the longest diagonal's midpoint
                let mut far = (face[0], face[0], -1.0);
                for p in &face {
                    for q in &face {
                        let d = (p[0] - q[0]).hypot(p[1] - q[1]);
                        if d > far.2 {
                            far = (*p, *q, d);
                        }
                    }
                }
                (
                    [0.5 * (far.0[0] + far.1[0]), 0.5 * (far.0[1] + far.1[1])],
                    far.2 > 1e-12 * extent,
                )
            }
        },
    };
    Ok((lift(y), tie))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_pm1() -> ConvexBody {
        ConvexBody::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn supporting_affine_of_affine_is_itself() {
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let f = ConcaveFunction::affine(vec![1.0, 0.0], 0.0);
        let g = supporting_affine(&sq, &f, &Point(vec![0.3, 0.1])).unwrap();
        assert_eq!(g.gradient, vec![1.0, 0.0]);
        assert_eq!(g.offset, 0.0);
    }

    #[test]
    fn supporting_affine_active_piece_and_tie_break() {
        let f = ConcaveFunction::min_affine(vec![
            AffinePiece::new(vec![-1.0, 0.0], 1.0),
            AffinePiece::new(vec![1.0, 0.0], 1.0),
        ]);
        let g = supporting_affine(&square_pm1(), &f, &Point(vec![0.5, 0.0])).unwrap();
        assert_eq!((g.gradient.clone(), g.offset, g.piece), (vec![-1.0, 0.0], 1.0, 0));
        let g = supporting_affine(&square_pm1(), &f, &Point(vec![-0.5, 0.0])).unwrap();
        assert_eq!(g.piece, 1);
        let g = supporting_affine(&square_pm1(), &f, &Point(vec![0.0, 0.0])).unwrap();
        assert_eq!(g.piece, 0);
        assert!(matches!(
            supporting_affine(&square_pm1(), &f, &Point(vec![2.0, 0.0])),
            Err(Error::OutsideBody)
        ));
    }

    #[test]
    fn center_of_equality_triangle() {
        let tri = ConvexBody::polygon(vec![[0.0, -0.5], [0.0, 0.5], [1.0, 0.0]]).unwrap();
        let f = ConcaveFunction::affine(vec![1.0, 0.0], 0.0);
        let c = find_center(&tri, &f, None).unwrap();
        let t = 1.0 - 1.0 / 2f64.sqrt();
        assert!((c.point[0] - t).abs() < 1e-12);
        assert!(c.point[1].abs() < 1e-12);
        assert!((c.f_at_center - t).abs() < 1e-12);
        assert!(c.diagnostics.tie_broken);
    }

    #[test]
    fn center_of_square() {
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let f = ConcaveFunction::affine(vec![1.0, 0.0], 0.0);
        let c = find_center(&sq, &f, None).unwrap();
        assert!((c.point[0] - 0.5).abs() < 1e-12 && (c.point[1] - 0.5).abs() < 1e-12);
        assert!((c.f_at_center - 0.5).abs() < 1e-12);
    }

    #[test]
    fn negative_function_rejected() {
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let f = ConcaveFunction::affine(vec![1.0, 0.0], -0.5);
        assert!(matches!(find_center(&sq, &f, None), Err(Error::NegativeFunction(_))));
    }

    #[test]
    fn one_dimensional_maximizer() {
        // tent with apex at 0.25
        let (a, b, v) = maximize_min_affine_1d(&[(1.0, 0.75), (-1.0, 1.25)], 0.0, 1.0);
        assert!((a - 0.25).abs() < 1e-12 && (b - 0.25).abs() < 1e-12 && (v - 1.0).abs() < 1e-15);
        // plateau on [0.2, 0.6]
        let (a, b, v) = maximize_min_affine_1d(&[(1.0, 0.8), (0.0, 1.0), (-1.0, 1.6)], 0.0, 1.0);
        assert!((a - 0.2).abs() < 1e-12 && (b - 0.6).abs() < 1e-12 && (v - 1.0).abs() < 1e-15);
        // increasing: max at the right end
        let (a, b, _) = maximize_min_affine_1d(&[(2.0, 0.0)], 0.0, 1.0);
        assert_eq!((a, b), (1.0, 1.0));
        // a slope at roundoff level is a plateau, not a rising line
        let (a, b, _) = maximize_min_affine_1d(&[(1e-17, 0.3)], -0.5, 0.5);
        assert_eq!((a, b), (-0.5, 0.5));
    }

    #[test]
    fn section_maximum_beats_grid() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([
                2.0 * (i & 1) as f64 - 1.0,
                2.0 * ((i >> 1) & 1) as f64 - 1.0,
                2.0 * ((i >> 2) & 1) as f64 - 1.0,
            ]);
        }
        let cube = ConvexBody::polytope(&pts).unwrap();
        // f depends on y, z as a pyramid plus a tilt in x
        let f = ConcaveFunction::min_affine(vec![
            AffinePiece::new(vec![0.1, -1.0, 0.0], 2.0),
            AffinePiece::new(vec![0.1, 1.0, 0.0], 2.0),
            AffinePiece::new(vec![0.1, 0.0, -1.0], 2.0),
            AffinePiece::new(vec![0.1, 0.0, 1.0], 2.0),
        ]);
        let c = find_center(&cube, &f, None).unwrap();
        assert!(cube.contains(&c.point, 1e-12).unwrap());
        let u = c.direction.as_slice();
        let u = [u[0], u[1], u[2]];
        assert!((dot3(u, [c.point[0], c.point[1], c.point[2]]) - c.cone.t_r).abs() < 1e-12);
        // grid search over the same slice
        let (a, b) = crate::geometry::plane_basis(u);
        let mut best = f64::NEG_INFINITY;
        for i in -200..=200 {
            for j in -200..=200 {
                let (y0, y1) = (i as f64 / 100.0, j as f64 / 100.0);
                let x: Vec<f64> = (0..3).map(|k| c.cone.t_r * u[k] + y0 * a[k] + y1 * b[k]).collect();
                if cube.contains(&x, 0.0).unwrap() {
                    best = best.max(f.eval(&x));
                }
            }
        }
        assert!(c.f_at_center >= best - 1e-12, "{} < {}", c.f_at_center, best);
    }
}

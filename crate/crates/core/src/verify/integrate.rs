//! ∫_C φ(f) by splitting C into the cells where one affine piece of f is
//! active and integrating each cell with a simplex rule.

use std::cell::Cell;

use crate::bounds::ConvexGauge;
use crate::center::{AffinePiece, ConcaveFunction};
use crate::error::{Error, Result};
use crate::geometry::vector::{V2, V3};
use crate::geometry::{ConvexBody, Polygon, Polytope, ProfileBody};
use crate::quadrature::{gauss_legendre, TetRule, TriangleRule};
use crate::symmetrize::kappa;

const NEGATIVE_TOL: f64 = 1e-12;
const SIMPLEX_REL_TOL: f64 = 1e-13;
const MAX_DEPTH: usize = 5;

/// Pieces with exact duplicates removed (the first copy is kept).
fn distinct_pieces(f: &ConcaveFunction) -> Vec<AffinePiece> {
    let mut out: Vec<AffinePiece> = Vec::new();
    for p in f.pieces() {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Degree of φ when it is a polynomial.
fn polynomial_degree(phi: &ConvexGauge) -> Option<usize> {
    match phi {
        ConvexGauge::Power { alpha } if alpha.fract() == 0.0 && *alpha <= 64.0 => Some(*alpha as usize),
        ConvexGauge::PiecewiseLinearConvex { .. } => Some(1),
        _ => None,
    }
}

struct Integrand<'a> {
    phi: &'a ConvexGauge,
    piece: &'a AffinePiece,
    /// Most negative f seen at a node.
    lowest: Cell<f64>,
}

impl Integrand<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        let v = self.piece.eval(x);
        if v < self.lowest.get() {
            self.lowest.set(v);
        }
        self.phi.eval(v)
    }
}

fn mid2(a: V2, b: V2) -> V2 {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn mid3(a: V3, b: V3) -> V3 {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])]
}

fn triangle(g: &Integrand, t: [V2; 3], adaptive: bool) -> f64 {
    let rule = TriangleRule::degree20();
    let whole = rule.integrate(t[0], t[1], t[2], |p| g.eval(&p));
    if adaptive {
        triangle_refine(g, rule, t, whole, MAX_DEPTH)
    } else {
        whole
    }
}

fn triangle_refine(g: &Integrand, rule: &TriangleRule, t: [V2; 3], whole: f64, depth: usize) -> f64 {
    let [a, b, c] = t;
    let (ab, bc, ca) = (mid2(a, b), mid2(b, c), mid2(c, a));
    let kids = [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]];
    let parts: Vec<f64> = kids
        .iter()
        .map(|k| rule.integrate(k[0], k[1], k[2], |p| g.eval(&p)))
        .collect();
    let sum: f64 = parts.iter().sum();
    if depth == 0 || (sum - whole).abs() <= SIMPLEX_REL_TOL * sum.abs().max(f64::MIN_POSITIVE) {
        return sum;
    }
    kids.iter()
        .zip(parts)
        .map(|(k, w)| triangle_refine(g, rule, *k, w, depth - 1))
        .sum()
}

fn tetra(g: &Integrand, t: [V3; 4], adaptive: bool) -> f64 {
    let rule = TetRule::degree10();
    let whole = rule.integrate(t[0], t[1], t[2], t[3], |p| g.eval(&p));
    if adaptive {
        tetra_refine(g, rule, t, whole, MAX_DEPTH - 2)
    } else {
        whole
    }
}

fn tetra_refine(g: &Integrand, rule: &TetRule, t: [V3; 4], whole: f64, depth: usize) -> f64 {
    let [a, b, c, d] = t;
    let (ab, ac, ad, bc, bd, cd) = (mid3(a, b), mid3(a, c), mid3(a, d), mid3(b, c), mid3(b, d), mid3(c, d));
    let kids = [
        [a, ab, ac, ad],
        [b, ab, bc, bd],
        [c, ac, bc, cd],
        [d, ad, bd, cd],
        [ac, bd, ab, bc],
        [ac, bd, bc, cd],
        [ac, bd, cd, ad],
        [ac, bd, ad, ab],
    ];
    let parts: Vec<f64> = kids
        .iter()
        .map(|k| rule.integrate(k[0], k[1], k[2], k[3], |p| g.eval(&p)))
        .collect();
    let sum: f64 = parts.iter().sum();
    if depth == 0 || (sum - whole).abs() <= SIMPLEX_REL_TOL * sum.abs().max(f64::MIN_POSITIVE) {
        return sum;
    }
    kids.iter()
        .zip(parts)
        .map(|(k, w)| tetra_refine(g, rule, *k, w, depth - 1))
        .sum()
}

/// Halfspace {x : ⟨a, x⟩ ≤ b} on which piece `i` is no larger than piece `j`;
/// `None` means no constraint, `Some(None)` means empty.
fn dominance(pi: &AffinePiece, pj: &AffinePiece) -> Option<Option<(Vec<f64>, f64)>> {
    let a: Vec<f64> = pi.gradient.iter().zip(&pj.gradient).map(|(x, y)| x - y).collect();
    let b = pj.offset - pi.offset;
    if a.iter().all(|&x| x == 0.0) {
        return if b >= 0.0 { None } else { Some(None) };
    }
    Some(Some((a, b)))
}

/// Level cuts where φ has kinks: for each kink k the cell splits at f = k.
fn level_bands(phi: &ConvexGauge) -> Vec<f64> {
    phi.kinks()
}

fn polygon_cells(poly: &Polygon, pieces: &[AffinePiece], i: usize) -> Option<Polygon> {
    let mut cell = poly.clone();
    for (j, pj) in pieces.iter().enumerate() {
        if j == i {
            continue;
        }
        match dominance(&pieces[i], pj) {
            None => {}
            Some(None) => return None,
            Some(Some((a, b))) => cell = cell.clip_halfplane([a[0], a[1]], b)?,
        }
    }
    Some(cell)
}

fn polytope_cells(poly: &Polytope, pieces: &[AffinePiece], i: usize) -> Option<Polytope> {
    let mut cell = poly.clone();
    for (j, pj) in pieces.iter().enumerate() {
        if j == i {
            continue;
        }
        match dominance(&pieces[i], pj) {
            None => {}
            Some(None) => return None,
            Some(Some((a, b))) => cell = cell.clip_halfspace([a[0], a[1], a[2]], b)?,
        }
    }
    Some(cell)
}

/// Splits a polygon along the levels of an affine function.
fn split_polygon(cell: Polygon, piece: &AffinePiece, levels: &[f64]) -> Vec<Polygon> {
    let g = [piece.gradient[0], piece.gradient[1]];
    if levels.is_empty() || g == [0.0, 0.0] {
        return vec![cell];
    }
    let mut out = Vec::new();
    let mut rest = Some(cell);
    for &k in levels {
        let Some(r) = rest.take() else { break };
        // {g·x + o ≤ k} and its complement
        if let Some(low) = r.clip_halfplane(g, k - piece.offset) {
            out.push(low);
        }
        rest = r.clip_halfplane([-g[0], -g[1]], piece.offset - k);
    }
    out.extend(rest);
    out
}

fn split_polytope(cell: Polytope, piece: &AffinePiece, levels: &[f64]) -> Vec<Polytope> {
    let g = [piece.gradient[0], piece.gradient[1], piece.gradient[2]];
    if levels.is_empty() || g == [0.0, 0.0, 0.0] {
        return vec![cell];
    }
    let mut out = Vec::new();
    let mut rest = Some(cell);
    for &k in levels {
        let Some(r) = rest.take() else { break };
        if let Some(low) = r.clip_halfspace(g, k - piece.offset) {
            out.push(low);
        }
        rest = r.clip_halfspace([-g[0], -g[1], -g[2]], piece.offset - k);
    }
    out.extend(rest);
    out
}

fn check_lowest(lowest: f64, scale: f64) -> Result<()> {
    if lowest < -NEGATIVE_TOL * scale.max(1.0) {
        return Err(Error::NegativeFunction(lowest));
    }
    Ok(())
}

fn integrate_polygon(poly: &Polygon, f: &ConcaveFunction, phi: &ConvexGauge, scale: f64) -> Result<f64> {
    let pieces = distinct_pieces(f);
    let adaptive = polynomial_degree(phi).is_none_or(|d| d > 20);
    let levels = level_bands(phi);
    let mut total = 0.0;
    for i in 0..pieces.len() {
        let Some(cell) = polygon_cells(poly, &pieces, i) else {
            continue;
        };
        let g = Integrand {
            phi,
            piece: &pieces[i],
            lowest: Cell::new(f64::INFINITY),
        };
        for part in split_polygon(cell, &pieces[i], &levels) {
            let c = part.centroid();
            let v = part.vertices();
            for k in 0..v.len() {
                total += triangle(&g, [c, v[k], v[(k + 1) % v.len()]], adaptive);
            }
        }
        check_lowest(g.lowest.get(), scale)?;
    }
    Ok(total)
}

fn integrate_polytope(poly: &Polytope, f: &ConcaveFunction, phi: &ConvexGauge, scale: f64) -> Result<f64> {
    let pieces = distinct_pieces(f);
    let adaptive = polynomial_degree(phi).is_none_or(|d| d > 11);
    let levels = level_bands(phi);
    let mut total = 0.0;
    for i in 0..pieces.len() {
        let Some(cell) = polytope_cells(poly, &pieces, i) else {
            continue;
        };
        let g = Integrand {
            phi,
            piece: &pieces[i],
            lowest: Cell::new(f64::INFINITY),
        };
        for part in split_polytope(cell, &pieces[i], &levels) {
            for t in part.tetrahedra() {
                total += tetra(&g, t, adaptive);
            }
        }
        check_lowest(g.lowest.get(), scale)?;
    }
    Ok(total)
}

fn integrate_profile(body: &ProfileBody, f: &ConcaveFunction, phi: &ConvexGauge, scale: f64) -> Result<f64> {
    let p = body.profile();
    let pieces = distinct_pieces(f);
    // restriction to the axis: s ↦ min_i (a_i s + b_i)
    let lines: Vec<(f64, f64)> = pieces.iter().map(|q| (q.gradient[0], q.offset)).collect();
    let h = |s: f64| lines.iter().map(|(a, b)| a * s + b).fold(f64::INFINITY, f64::min);
    let (t0, t1) = (p.t0(), p.t1());
    let mut breaks: Vec<f64> = p.knots().iter().map(|k| k.0).collect();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let da = lines[i].0 - lines[j].0;
            if da != 0.0 {
                let s = (lines[j].1 - lines[i].1) / da;
                if s > t0 && s < t1 {
                    breaks.push(s);
                }
            }
        }
    }
    for k in phi.kinks() {
        for &(a, b) in &lines {
            if a != 0.0 {
                let s = (k - b) / a;
                if s > t0 && s < t1 {
                    breaks.push(s);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (t1 - t0));
    let weight = kappa(p.dim() - 1);
    let e = (p.dim() - 1) as i32;
    let lowest = Cell::new(f64::INFINITY);
    let total = gauss_legendre(32).integrate_composite(&breaks, |s| {
        let v = h(s);
        if v < lowest.get() {
            lowest.set(v);
        }
        phi.eval(v) * weight * p.eval(s).powi(e)
    });
    check_lowest(lowest.get(), scale)?;
    Ok(total)
}

/// ∫_C φ(f(x)) dx.
pub fn integrate_phi_f(body: &ConvexBody, f: &ConcaveFunction, phi: &ConvexGauge) -> Result<f64> {
    phi.validate()?;
    let pieces = f.pieces();
    if pieces.is_empty() {
        return Err(Error::InvalidFunction("min-affine needs at least one piece".into()));
    }
    if let Some(p) = pieces.iter().find(|p| p.dim() != body.dim()) {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: p.dim(),
        });
    }
    let scale = f.magnitude_on(body);
    match body {
        ConvexBody::Polygon(p) => integrate_polygon(p, f, phi, scale),
        ConvexBody::Polytope(p) => integrate_polytope(p, f, phi, scale),
        ConvexBody::Profile(p) => {
            if pieces.iter().any(|q| q.gradient[1..].iter().any(|&g| g != 0.0)) {
                return Err(Error::Unsupported(
                    "functions on profile bodies must depend on the axis coordinate only".into(),
                ));
            }
            integrate_profile(p, f, phi, scale)
        }
    }
}

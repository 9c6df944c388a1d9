//! Volume of a 3-polytope against its shadow on a coordinate plane and the
//! fiber length at the center of the shadow.

use serde::{Deserialize, Serialize};

use crate::bounds::{power_bound_2d, ConvexGauge};
use crate::center::{find_center, AffinePiece, ConcaveFunction};
use crate::error::{Error, Result};
use crate::geometry::{project_shadow, ConvexBody, CoordinatePlane, Point, Polytope};

use super::{classify, integrate_phi_f, Status};

/// Facets whose normal has a smaller component along the fiber are
/// treated as vertical.
const VERTICAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionRecord {
    pub plane: CoordinatePlane,
    pub volume: f64,
    pub shadow_area: f64,
    /// ∫ over the shadow of the fiber length; equals `volume` up to quadrature.
    pub fiber_integral: f64,
    /// Center of the shadow in the plane's coordinates.
    pub center: Point,
    pub fiber_at_center: f64,
    pub bound: f64,
    pub slack: f64,
    pub status: Status,
}

/// Length of the fiber of `body` over a point of the plane, as an exact
/// minimum of affine functions (upper facet minus lower facet for every
/// pair).
pub fn fiber_function(body: &Polytope, plane: CoordinatePlane) -> Result<ConcaveFunction> {
    let (a, b, z) = plane.axes();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (nrm, d) in body.face_planes() {
        // ⟨n, x⟩ ≤ d solved for the fiber coordinate
        let piece = |s: f64| AffinePiece::new(vec![-nrm[a] / nrm[z] * s, -nrm[b] / nrm[z] * s], d / nrm[z] * s);
        if nrm[z] > VERTICAL_TOL {
            upper.push(piece(1.0));
        } else if nrm[z] < -VERTICAL_TOL {
            lower.push(piece(-1.0));
        }
    }
    if upper.is_empty() || lower.is_empty() {
        return Err(Error::DegenerateBody("polytope has no top or bottom facets".into()));
    }
    // upper_i − lower_j with lower_j stored negated
    let mut pieces = Vec::with_capacity(upper.len() * lower.len());
    for u in &upper {
        for l in &lower {
            pieces.push(AffinePiece::new(
                vec![u.gradient[0] + l.gradient[0], u.gradient[1] + l.gradient[1]],
                u.offset + l.offset,
            ));
        }
    }
    Ok(ConcaveFunction::min_affine(pieces))
}

/// Checks |K| ≤ ((2+√2)/3)·|P|·ℓ(x_P) where P is the shadow of K on `plane`
/// and ℓ(x_P) the fiber length at the center of P for the fiber function.
pub fn section_bound_check(body: &Polytope, plane: CoordinatePlane) -> Result<SectionRecord> {
    let shadow = project_shadow(body, plane)?;
    let fiber = fiber_function(body, plane)?;
    let domain = ConvexBody::Polygon(shadow);
    let area = domain.volume()?;
    let center = find_center(&domain, &fiber, None)?;
    let f0 = center.f_at_center;
    let volume = body.volume();
    let bound = power_bound_2d(1.0, area, f0)?;
    let fiber_integral = integrate_phi_f(&domain, &fiber, &ConvexGauge::Power { alpha: 1.0 })?;
    let slack = bound - volume;
    Ok(SectionRecord {
        plane,
        volume,
        shadow_area: area,
        fiber_integral,
        center: center.point,
        fiber_at_center: f0,
        bound,
        slack,
        status: classify(slack, bound),
    })
}

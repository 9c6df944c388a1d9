//! Convex bodies and their exact elementary measurements.

mod polygon;
mod polytope;
pub mod vector;

use serde::{Deserialize, Serialize};

pub use polygon::{convex_hull_2d, Polygon};
pub use polytope::{plane_basis, Polytope};

use crate::error::{Error, Result};
use crate::symmetrize::{kappa, profile_volume, Profile};
use vector::{dot, norm, V2, V3};

/// A point of the ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBody("non-finite point coordinate".into()));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Accepts vectors whose norm is 1 within 1e-9.
    pub fn new(u: Vec<f64>) -> Result<Self> {
        let len = norm(&u);
        if !len.is_finite() || (len - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitDirection(len));
        }
        Ok(Direction(u))
    }

    /// Normalizes a nonzero vector.
    pub fn normalize(u: &[f64]) -> Result<Self> {
        let len = norm(u);
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::NonUnitDirection(len));
        }
        Ok(Direction(u.iter().map(|x| x / len).collect()))
    }

    pub fn axis(dim: usize, k: usize) -> Self {
        let mut u = vec![0.0; dim];
        u[k] = 1.0;
        Direction(u)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    fn v2(&self) -> V2 {
        [self.0[0], self.0[1]]
    }

    fn v3(&self) -> V3 {
        [self.0[0], self.0[1], self.0[2]]
    }
}

impl TryFrom<Vec<f64>> for Direction {
    type Error = Error;

    fn try_from(u: Vec<f64>) -> Result<Self> {
        Direction::new(u)
    }
}

impl From<Direction> for Vec<f64> {
    fn from(d: Direction) -> Self {
        d.0
    }
}

/// A rotationally symmetric body about the first coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileBody {
    profile: Profile,
}

impl ProfileBody {
    pub fn new(profile: Profile) -> Self {
        ProfileBody { profile }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn dim(&self) -> usize {
        self.profile.dim()
    }

    /// Returns +1 / −1 when `u` is ±e1, `None` otherwise.
    pub fn axis_sign(u: &Direction) -> Option<f64> {
        let s = u.as_slice();
        let off: f64 = s[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if off > 1e-12 {
            None
        } else {
            Some(s[0].signum())
        }
    }

    /// The profile seen along ±e1.
    pub fn profile_along(&self, u: &Direction) -> Result<Profile> {
        match Self::axis_sign(u) {
            Some(s) if s > 0.0 => Ok(self.profile.clone()),
            Some(_) => Ok(self.profile.reflected()),
            None => Err(Error::Unsupported(
                "profile bodies are sliced along their axis only".into(),
            )),
        }
    }
}

/// Coordinate 2-planes of 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinatePlane {
    Xy,
    Xz,
    Yz,
}

impl CoordinatePlane {
    pub const ALL: [CoordinatePlane; 3] = [CoordinatePlane::Xy, CoordinatePlane::Xz, CoordinatePlane::Yz];

    /// (first in-plane axis, second in-plane axis, normal axis).
    pub fn axes(self) -> (usize, usize, usize) {
        match self {
            CoordinatePlane::Xy => (0, 1, 2),
            CoordinatePlane::Xz => (0, 2, 1),
            CoordinatePlane::Yz => (1, 2, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoordinatePlane::Xy => "xy",
            CoordinatePlane::Xz => "xz",
            CoordinatePlane::Yz => "yz",
        }
    }
}

impl std::str::FromStr for CoordinatePlane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(CoordinatePlane::Xy),
            "xz" => Ok(CoordinatePlane::Xz),
            "yz" => Ok(CoordinatePlane::Yz),
            other => Err(Error::OutOfRange(format!("unknown coordinate plane '{other}'"))),
        }
    }
}

/// The domain of integration.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Polygon(Polygon),
    Polytope(Polytope),
    Profile(ProfileBody),
}

impl ConvexBody {
    pub fn polygon(vertices: Vec<V2>) -> Result<Self> {
        Polygon::new(vertices).map(ConvexBody::Polygon)
    }

    pub fn polytope(vertices: &[V3]) -> Result<Self> {
        Polytope::hull(vertices).map(ConvexBody::Polytope)
    }

    pub fn profile(profile: Profile) -> Self {
        ConvexBody::Profile(ProfileBody::new(profile))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polygon(_) => 2,
            ConvexBody::Polytope(_) => 3,
            ConvexBody::Profile(p) => p.dim(),
        }
    }

    /// Characteristic length (bounding-box diagonal or profile extent).
    pub fn scale(&self) -> f64 {
        match self {
            ConvexBody::Polygon(p) => p.diameter_scale(),
            ConvexBody::Polytope(p) => p.scale(),
            ConvexBody::Profile(p) => p.profile.length().max(2.0 * p.profile.max_radius()),
        }
    }

    fn check_dir(&self, u: &Direction) -> Result<()> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.dim(),
            });
        }
        Ok(())
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        Ok(())
    }

    pub fn volume(&self) -> Result<f64> {
        let v = match self {
            ConvexBody::Polygon(p) => p.area(),
            ConvexBody::Polytope(p) => p.volume(),
            ConvexBody::Profile(p) => profile_volume(&p.profile),
        };
        if !(v > 0.0) {
            return Err(Error::DegenerateBody("zero volume".into()));
        }
        Ok(v)
    }

    pub fn centroid(&self) -> Result<Point> {
        self.volume()?;
        Ok(match self {
            ConvexBody::Polygon(p) => Point(p.centroid().to_vec()),
            ConvexBody::Polytope(p) => Point(p.centroid().to_vec()),
            ConvexBody::Profile(p) => {
                let mut c = vec![0.0; p.dim()];
                c[0] = p.profile.first_moment() / profile_volume(&p.profile);
                Point(c)
            }
        })
    }

    /// (n−1)-volume of the section {⟨x, u⟩ = t}; zero outside the support
    /// interval.
    pub fn section_measure(&self, u: &Direction, t: f64) -> Result<f64> {
        self.check_dir(u)?;
        Ok(match self {
            ConvexBody::Polygon(p) => p.chord_length(u.v2(), t),
            ConvexBody::Polytope(p) => p.section_area(u.v3(), t),
            ConvexBody::Profile(p) => {
                let prof = p.profile_along(u)?;
                prof.section(t)
            }
        })
    }

    /// (−h(−u), h(u)).
    pub fn support_interval(&self, u: &Direction) -> Result<(f64, f64)> {
        self.check_dir(u)?;
        Ok(match self {
            ConvexBody::Polygon(p) => p.support_interval(u.v2()),
            ConvexBody::Polytope(p) => p.support_interval(u.v3()),
            ConvexBody::Profile(p) => {
                let s = u.as_slice();
                let axial = s[0];
                let radial = s[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                p.profile
                    .knots()
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(t, v)| {
                        (lo.min(t * axial - v * radial), hi.max(t * axial + v * radial))
                    })
            }
        })
    }

    /// ⟨v, u⟩ for every vertex (the knot abscissae for profile bodies).
    pub fn vertex_heights(&self, u: &Direction) -> Vec<f64> {
        match self {
            ConvexBody::Polygon(p) => p.vertices().iter().map(|v| dot(v, u.as_slice())).collect(),
            ConvexBody::Polytope(p) => p.vertices().iter().map(|v| dot(v, u.as_slice())).collect(),
            ConvexBody::Profile(p) => p.profile.knots().iter().map(|k| k.0 * u.as_slice()[0]).collect(),
        }
    }

    /// Points at which a concave function attains its minimum over the body
    /// when it is a minimum of affine functions: the vertices for polytopes;
    /// for profile bodies the two ends of the axis plus the rim extremes
    /// along each coordinate axis at every knot.
    pub fn extreme_points(&self) -> Vec<Vec<f64>> {
        match self {
            ConvexBody::Polygon(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            ConvexBody::Polytope(p) => p.vertices().iter().map(|v| v.to_vec()).collect(),
            ConvexBody::Profile(p) => {
                let n = p.dim();
                let mut out = Vec::new();
                for &(t, v) in p.profile.knots() {
                    let mut c = vec![0.0; n];
                    c[0] = t;
                    out.push(c.clone());
                    for k in 1..n {
                        for s in [-1.0, 1.0] {
                            let mut q = c.clone();
                            q[k] = s * v;
                            out.push(q);
                        }
                    }
                }
                out
            }
        }
    }

    /// Smallest signed distance to the boundary constraints (positive inside).
    pub fn inside_margin(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(match self {
            ConvexBody::Polygon(p) => p.inside_margin([x[0], x[1]]),
            ConvexBody::Polytope(p) => p.inside_margin([x[0], x[1], x[2]]),
            ConvexBody::Profile(p) => {
                let prof = &p.profile;
                let r = x[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
                (x[0] - prof.t0()).min(prof.t1() - x[0]).min(prof.eval(x[0]) - r)
            }
        })
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.inside_margin(x)? >= -tol)
    }
}

/// Orthogonal projection of a 3-polytope onto a coordinate 2-plane,
/// returned as a counterclockwise polygon in that plane's coordinates.
pub fn project_shadow(body: &Polytope, plane: CoordinatePlane) -> Result<Polygon> {
    let (a, b, _) = plane.axes();
    let pts: Vec<V2> = body.vertices().iter().map(|v| [v[a], v[b]]).collect();
    Polygon::hull(&pts).map_err(|_| Error::DegenerateBody("projection is collinear".into()))
}

/// (n−1)-volume of a unit (n−1)-ball, re-exported for callers that work
/// with profile radii.
pub fn unit_ball_volume(d: usize) -> f64 {
    kappa(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> ConvexBody {
        ConvexBody::polytope(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap()
    }

    fn unit_cube() -> ConvexBody {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        ConvexBody::polytope(&pts).unwrap()
    }

    fn disc() -> ConvexBody {
        ConvexBody::profile(Profile::from_fn(2, -1.0, 1.0, 4097, |t| (1.0 - t * t).max(0.0).sqrt()).unwrap())
    }

    #[test]
    fn volumes() {
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(sq.volume().unwrap(), 1.0);
        let tri = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(tri.volume().unwrap(), 0.5);
        assert!((tetra().volume().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn centroids() {
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(sq.centroid().unwrap().0, vec![0.5, 0.5]);
        let tri = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let c = tri.centroid().unwrap();
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-15 && (c[1] - 1.0 / 3.0).abs() < 1e-15);
        let c = tetra().centroid().unwrap();
        for k in 0..3 {
            assert!((c[k] - 0.25).abs() < 1e-15);
        }
        let d = disc().centroid().unwrap();
        assert!(d[0].abs() < 1e-12 && d[1] == 0.0);
    }

    #[test]
    fn sections() {
        let e1 = Direction::axis(2, 0);
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(sq.section_measure(&e1, 0.3).unwrap(), 1.0);
        let tri = ConvexBody::polygon(vec![[0.0, -0.5], [0.0, 0.5], [1.0, 0.0]]).unwrap();
        for t in [0.0, 0.25, 0.5, 0.9, 1.0] {
            assert!((tri.section_measure(&e1, t).unwrap() - (1.0 - t)).abs() < 1e-15);
        }
        assert_eq!(tri.section_measure(&e1, 1.5).unwrap(), 0.0);
        let cube = unit_cube();
        assert!((cube.section_measure(&Direction::axis(3, 0), 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            Direction::new(vec![1.0, 1.0]),
            Err(Error::NonUnitDirection(_))
        ));
    }

    #[test]
    fn support_intervals() {
        let e1 = Direction::axis(2, 0);
        let sq = ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(sq.support_interval(&e1).unwrap(), (0.0, 1.0));
        assert_eq!(disc().support_interval(&e1).unwrap(), (-1.0, 1.0));
        let tri = ConvexBody::polygon(vec![[0.0, -0.5], [0.0, 0.5], [1.0, 0.0]]).unwrap();
        assert_eq!(tri.support_interval(&e1).unwrap(), (0.0, 1.0));
        let (lo, hi) = disc().support_interval(&Direction::axis(2, 1)).unwrap();
        assert!((lo + 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shadows() {
        let ConvexBody::Polytope(cube) = unit_cube() else {
            unreachable!()
        };
        let s = project_shadow(&cube, CoordinatePlane::Xy).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert!((s.area() - 1.0).abs() < 1e-15);
        let ConvexBody::Polytope(t) = tetra() else {
            unreachable!()
        };
        let s = project_shadow(&t, CoordinatePlane::Xy).unwrap();
        assert!((s.area() - 0.5).abs() < 1e-15);
        let prism = Polytope::hull(&[[0.0, 0.5, 0.0], [0.0, -0.5, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, 1.0]]).unwrap();
        let s = project_shadow(&prism, CoordinatePlane::Xy).unwrap();
        assert_eq!(s.vertices().len(), 3);
        let mut v: Vec<V2> = s.vertices().to_vec();
        v.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        assert_eq!(v, vec![[0.0, -0.5], [0.0, 0.5], [1.0, 0.0]]);
    }

    #[test]
    fn containment() {
        let c = tetra().centroid().unwrap();
        assert!(tetra().contains(&c, 0.0).unwrap());
        assert!(!tetra().contains(&[1.0, 1.0, 1.0], 1e-9).unwrap());
        assert!(disc().contains(&[0.0, 0.99], 1e-9).unwrap());
        assert!(!disc().contains(&[0.9, 0.9], 1e-9).unwrap());
    }
}

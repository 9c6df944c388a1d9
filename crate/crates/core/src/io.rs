//! JSON shapes for bodies; functions and gauges serialize directly.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::ConvexBody;
use crate::symmetrize::Profile;

/// Body as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum BodySpec {
    #[serde(rename = "polygon2")]
    Polygon2 { vertices: Vec<[f64; 2]> },
    #[serde(rename = "polytope3")]
    Polytope3 { vertices: Vec<[f64; 3]> },
    #[serde(rename = "profile")]
    Profile(Profile),
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodySpec::Polygon2 { vertices } => ConvexBody::polygon(vertices.clone()),
            BodySpec::Polytope3 { vertices } => ConvexBody::polytope(vertices),
            BodySpec::Profile(p) => Ok(ConvexBody::profile(p.clone())),
        }
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(body: &ConvexBody) -> Self {
        match body {
            ConvexBody::Polygon(p) => BodySpec::Polygon2 {
                vertices: p.vertices().to_vec(),
            },
            ConvexBody::Polytope(p) => BodySpec::Polytope3 {
                vertices: p.vertices().to_vec(),
            },
            ConvexBody::Profile(p) => BodySpec::Profile(p.profile().clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::ConvexGauge;
    use crate::center::{AffinePiece, ConcaveFunction};

    #[test]
    fn polygon_round_trip() {
        let spec: BodySpec = serde_json::from_str(r#"{"type":"polygon2","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
        let body = spec.build().unwrap();
        assert!((body.volume().unwrap() - 0.5).abs() < 1e-15);
        let back = serde_json::to_string(&BodySpec::from(&body)).unwrap();
        let again: BodySpec = serde_json::from_str(&back).unwrap();
        assert_eq!(again.build().unwrap(), body);
    }

    #[test]
    fn profile_body_json() {
        let text = r#"{"type":"profile","dim":3,"t0":0,"t1":1,"knots":[[0,1],[1,1]]}"#;
        let spec: BodySpec = serde_json::from_str(text).unwrap();
        let body = spec.build().unwrap();
        assert_eq!(body.dim(), 3);
        assert!((body.volume().unwrap() - std::f64::consts::PI).abs() < 1e-12);
        let bad = r#"{"type":"profile","dim":3,"t0":0,"t1":2,"knots":[[0,1],[1,1]]}"#;
        assert!(serde_json::from_str::<BodySpec>(bad).is_err());
    }

    #[test]
    fn polytope_json() {
        let text = r#"{"type":"polytope3","vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#;
        let body = serde_json::from_str::<BodySpec>(text).unwrap().build().unwrap();
        assert!((body.volume().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn function_and_gauge_json() {
        let f: ConcaveFunction = serde_json::from_str(
            r#"{"type":"min-affine","pieces":[{"gradient":[1,0],"offset":0},{"gradient":[-1,0],"offset":1}]}"#,
        )
        .unwrap();
        assert_eq!(
            f,
            ConcaveFunction::min_affine(vec![
                AffinePiece::new(vec![1.0, 0.0], 0.0),
                AffinePiece::new(vec![-1.0, 0.0], 1.0)
            ])
        );
        let g: ConcaveFunction = serde_json::from_str(r#"{"type":"affine","gradient":[1,2],"offset":3}"#).unwrap();
        assert_eq!(g, ConcaveFunction::affine(vec![1.0, 2.0], 3.0));
        assert!(serde_json::from_str::<ConvexGauge>(r#"{"type":"cubic"}"#).is_err());
    }
}

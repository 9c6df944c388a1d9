//! Seeded random (body, function) instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::center::{AffinePiece, ConcaveFunction};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub min_points: usize,
    pub max_points: usize,
    pub min_pieces: usize,
    pub max_pieces: usize,
    /// Half-width of the sampling box.
    pub half_width: f64,
    /// Hulls with smaller volume relative to the box are resampled.
    pub min_volume_fraction: f64,
    pub max_retries: usize,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            min_points: 8,
            max_points: 24,
            min_pieces: 1,
            max_pieces: 6,
            half_width: 1.0,
            min_volume_fraction: 1e-3,
            max_retries: 100,
        }
    }
}

/// The generator used for `(seed, n)`.
pub fn instance_rng(seed: u64, n: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ n as u64)
}

/// Hull of random points in a box, rejecting near-flat samples.
pub fn random_body<R: Rng>(rng: &mut R, n: usize, params: &InstanceParams) -> Result<ConvexBody> {
    let h = params.half_width;
    let box_volume = (2.0 * h).powi(n as i32);
    for _ in 0..params.max_retries {
        let count = rng.gen_range(params.min_points..=params.max_points);
        let body = match n {
            2 => {
                let pts: Vec<[f64; 2]> = (0..count)
                    .map(|_| [rng.gen_range(-h..h), rng.gen_range(-h..h)])
                    .collect();
                crate::geometry::Polygon::hull(&pts).map(ConvexBody::Polygon)
            }
            3 => {
                let pts: Vec<[f64; 3]> = (0..count)
                    .map(|_| [rng.gen_range(-h..h), rng.gen_range(-h..h), rng.gen_range(-h..h)])
                    .collect();
                ConvexBody::polytope(&pts)
            }
            _ => return Err(Error::Unsupported(format!("random bodies in dimension {n}"))),
        };
        match body {
            Ok(b) if b.volume().is_ok_and(|v| v >= params.min_volume_fraction * box_volume) => return Ok(b),
            _ => continue,
        }
    }
    Err(Error::RetryExhausted(params.max_retries))
}

/// A min of random affine pieces, shifted so that its minimum over the
/// body is `floor`.
pub fn random_function<R: Rng>(rng: &mut R, body: &ConvexBody, params: &InstanceParams, floor: f64) -> ConcaveFunction {
    let n = body.dim();
    let k = rng.gen_range(params.min_pieces..=params.max_pieces);
    let mut pieces: Vec<AffinePiece> = (0..k)
        .map(|_| {
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            AffinePiece::new(g, rng.gen_range(-1.0..1.0))
        })
        .collect();
    let probe = ConcaveFunction::min_affine(pieces.clone());
    let fmin = body
        .extreme_points()
        .iter()
        .map(|x| probe.eval(x))
        .fold(f64::INFINITY, f64::min);
    for p in &mut pieces {
        p.offset += floor - fmin;
    }
    if pieces.len() == 1 {
        let p = pieces.pop().expect("one piece");
        ConcaveFunction::affine(p.gradient, p.offset)
    } else {
        ConcaveFunction::min_affine(pieces)
    }
}

/// Deterministic instance for `(seed, n)`. Even seeds touch zero on the
/// body; odd seeds are lifted by a random positive amount.
pub fn random_instance(seed: u64, n: usize, params: &InstanceParams) -> Result<(ConvexBody, ConcaveFunction)> {
    let mut rng = instance_rng(seed, n);
    let body = random_body(&mut rng, n, params)?;
    let floor = if seed.is_multiple_of(2) {
        0.0
    } else {
        rng.gen_range(0.05..1.0)
    };
    let f = random_function(&mut rng, &body, params, floor);
    Ok((body, f))
}

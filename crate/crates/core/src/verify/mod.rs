//! Direct integration, inequality checks on given and random instances, the
//! shadow/fiber bound and the constants table.

mod integrate;
mod random;
mod repro;
mod section;

use serde::{Deserialize, Serialize};

pub use integrate::integrate_phi_f;
pub use random::{instance_rng, random_body, random_function, random_instance, InstanceParams};
pub use repro::{format_repro_table, repro_table, ReproRow, AGREEMENT_TOL};
pub use section::{fiber_function, section_bound_check, SectionRecord};

use crate::bounds::{reduced_bound, ConvexGauge};
use crate::center::{find_center, CenterResult, ConcaveFunction};
use crate::error::Result;
use crate::geometry::ConvexBody;
use crate::io::BodySpec;

/// Slack tolerance relative to max(1, bound).
pub const SLACK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Violation,
    EqualityWithinTol,
}

/// Status of `bound − integral = slack`.
pub fn classify(slack: f64, bound: f64) -> Status {
    let tol = SLACK_TOL * bound.abs().max(1.0);
    if slack.abs() <= tol {
        Status::EqualityWithinTol
    } else if slack >= -tol {
        Status::Ok
    } else {
        Status::Violation
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub id: String,
    /// Seed of a generated instance.
    pub seed: Option<u64>,
    pub n: usize,
    pub body: BodySpec,
    pub function: ConcaveFunction,
    pub gauge: ConvexGauge,
    pub volume: f64,
    pub f0: f64,
    pub integral: f64,
    pub bound: f64,
    pub slack: f64,
    pub center: CenterResult,
    pub status: Status,
}

/// Compares ∫_C φ(f) with the cone bound at the center of (C, f).
pub fn check_inequality(body: &ConvexBody, f: &ConcaveFunction, phi: &ConvexGauge) -> Result<VerificationRecord> {
    phi.validate()?;
    let center = find_center(body, f, None)?;
    check_at_center(body, f, center, phi)
}

/// As `check_inequality` with the center already computed, so several
/// gauges can share one center.
pub fn check_at_center(
    body: &ConvexBody,
    f: &ConcaveFunction,
    center: CenterResult,
    phi: &ConvexGauge,
) -> Result<VerificationRecord> {
    let c = body.volume()?;
    let f0 = center.f_at_center;
    let bound = reduced_bound(body.dim(), c, f0, phi)?.bound;
    let integral = integrate_phi_f(body, f, phi)?;
    let slack = bound - integral;
    Ok(VerificationRecord {
        id: "instance".into(),
        seed: None,
        n: body.dim(),
        body: BodySpec::from(body),
        function: f.clone(),
        gauge: phi.clone(),
        volume: c,
        f0,
        integral,
        bound,
        slack,
        center,
        status: classify(slack, bound),
    })
}

/// `check_inequality` on the random instance for `(seed, n)`.
pub fn check_seed(seed: u64, n: usize, phi: &ConvexGauge, params: &InstanceParams) -> Result<VerificationRecord> {
    let (body, f) = random_instance(seed, n, params)?;
    let mut rec = check_inequality(&body, &f, phi)?;
    rec.id = format!("seed-{seed}-n{n}");
    rec.seed = Some(seed);
    Ok(rec)
}

//! Truncated cones of revolution with prescribed volume and support
//! interval, and the equal-split cone of a profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::brent_root;
use crate::symmetrize::{kappa, profile_volume, Profile};

/// Bisection iteration cap for the balancing slope.
pub const BALANCE_MAX_ITER: usize = 200;
/// Target width of the final slope bracket.
pub const BALANCE_SLOPE_TOL: f64 = 1e-12;
/// Maximal deviation from the chord under which a profile is taken to be a
/// truncated cone already.
pub const CONE_DETECT_TOL: f64 = 1e-10;

/// Body of revolution on `[t0, t1]` with radius `r + m (t − t0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedCone {
    pub n: usize,
    pub t0: f64,
    pub t1: f64,
    pub r: f64,
    pub m: f64,
    /// Axis coordinate halving the volume.
    #[serde(rename = "t_R")]
    pub t_r: f64,
    /// Inner crossing points with the source profile, when built by
    /// [`equal_split_cone`].
    #[serde(skip)]
    pub crossings: Option<(f64, f64)>,
    /// Excess volumes (A0, A1) of the two end lobes over the source profile.
    #[serde(skip)]
    pub lobes: Option<(f64, f64)>,
    /// The balancing function changed sign more than once on the coarse grid.
    #[serde(skip)]
    pub multiple_balanced_slopes: bool,
}

impl TruncatedCone {
    /// Builds a cone from its parameters and computes the median.
    pub fn new(n: usize, t0: f64, t1: f64, r: f64, m: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("dimension {n} < 2")));
        }
        let len = t1 - t0;
        if !(len > 0.0) {
            return Err(Error::OutOfRange("empty cone interval".into()));
        }
        let end = r + m * len;
        let scale = r.abs().max(end.abs()).max(f64::MIN_POSITIVE);
        if r < -1e-12 * scale || end < -1e-12 * scale {
            return Err(Error::OutOfRange("negative cone radius".into()));
        }
        let r = r.max(0.0);
        let t_r = t0 + len * median_t(n, r, m * len)?;
        Ok(TruncatedCone {
            n,
            t0,
            t1,
            r,
            m,
            t_r,
            crossings: None,
            lobes: None,
            multiple_balanced_slopes: false,
        })
    }

    pub fn radius(&self, t: f64) -> f64 {
        (self.r + self.m * (t - self.t0)).max(0.0)
    }

    pub fn volume(&self) -> f64 {
        let len = self.t1 - self.t0;
        len * unit_cone_volume(self.n, self.r, self.m * len)
    }

    /// κ_{n−1} ∫_{t0}^{t} radius^{n−1}.
    pub fn partial_volume(&self, t: f64) -> f64 {
        let t = t.clamp(self.t0, self.t1);
        segment_power_integral(self.n - 1, self.t0, t, self.r, self.radius(t)) * kappa(self.n - 1)
    }
}

/// κ_{n−1} ∫_0^1 (r + m s)^{n−1} ds, written without division by `m`.
pub fn unit_cone_volume(n: usize, r: f64, m: f64) -> f64 {
    let e = n - 1;
    let a = r + m;
    let sum: f64 = (0..=e).map(|k| a.powi(k as i32) * r.powi((e - k) as i32)).sum();
    kappa(e) * sum / n as f64
}

/// ∫_{s0}^{s1} of the `e`-th power of the linear function with end values
/// `va`, `vb`.
fn segment_power_integral(e: usize, s0: f64, s1: f64, va: f64, vb: f64) -> f64 {
    let sum: f64 = (0..=e).map(|k| va.powi(k as i32) * vb.powi((e - k) as i32)).sum();
    (s1 - s0) * sum / (e as f64 + 1.0)
}

/// Largest admissible slope: the cone with a vertex at one end of an
/// interval of length `len` and volume `c`.
pub fn max_slope(n: usize, c: f64, len: f64) -> f64 {
    (c * n as f64 / (kappa(n - 1) * len.powi(n as i32))).powf(1.0 / (n as f64 - 1.0))
}

/// Radius at the start of the interval for which the truncated cone of
/// slope `m` over an interval of length `len` has volume `c`.
pub fn solve_r(n: usize, c: f64, m: f64, len: f64) -> Result<f64> {
    if n < 2 || !(c > 0.0) || !(len > 0.0) {
        return Err(Error::OutOfRange(format!(
            "solve_r needs n ≥ 2, c > 0, len > 0 (got n={n}, c={c}, len={len})"
        )));
    }
    let m0 = max_slope(n, c, len);
    if m.abs() > m0 * (1.0 + 1e-12) || !m.is_finite() {
        return Err(Error::SlopeOutOfRange { m, m0 });
    }
    // Normalize to the unit interval: volume c/len, slope m·len.
    let cu = c / len;
    let big_m0 = m0 * len;
    let mu = (m * len).clamp(-big_m0, big_m0);
    let r = match n {
        2 => 0.5 * (cu - mu),
        3 => {
            let disc = 4.0 * cu / std::f64::consts::PI - mu * mu / 3.0;
            0.5 * (-mu + disc.max(0.0).sqrt())
        }
        _ => {
            let k = kappa(n - 1);
            let lo = (-mu).max(0.0);
            let hi = 1.01 * (lo + (cu / k).powf(1.0 / (n as f64 - 1.0)));
            if unit_cone_volume(n, lo, mu) >= cu {
                // vertex cone at the extreme slope
                lo
            } else {
                brent_root(|r| unit_cone_volume(n, r, mu) - cu, lo, hi, 1e-15, 500)?
            }
        }
    };
    Ok(r.max((-mu).max(0.0)))
}

/// Median of the unit-interval cone with radius `r + m s`: the `s` with
/// equal volume on both sides.
pub fn median_t(n: usize, r: f64, m: f64) -> Result<f64> {
    if r == 0.0 && m == 0.0 {
        return Err(Error::DegenerateCone);
    }
    if r < 0.0 || r + m < -1e-14 * r.abs().max(m.abs()) {
        return Err(Error::OutOfRange("negative cone radius".into()));
    }
    let e = (n - 1) as i32;
    let end = (r + m).max(0.0);
    let nf = n as f64;
    // A = ((r^n + (r+m)^n)/2)^{1/n};  t = (A − r)/m rewritten as a ratio of
    // geometric sums so that m → 0 is harmless.
    let a = ((r.powi(n as i32) + end.powi(n as i32)) / 2.0).powf(1.0 / nf);
    let num: f64 = (0..=e).map(|k| end.powi(k) * r.powi(e - k)).sum::<f64>() / 2.0;
    let den: f64 = (0..=e).map(|k| a.powi(k) * r.powi(e - k)).sum();
    Ok((num / den).clamp(0.0, 1.0))
}

struct Balance {
    r: f64,
    a: f64,
    b: f64,
    lobe0: f64,
    lobe1: f64,
}

/// Excess lobes of the cone of slope `m` over the profile.
fn balance(p: &Profile, c: f64, m: f64) -> Result<Balance> {
    let n = p.dim();
    let e = n - 1;
    let t0 = p.t0();
    let len = p.length();
    let r = solve_r(n, c, m, len)?;
    let k = p.knots();
    let vr = |t: f64| (r + m * (t - t0)).max(0.0);
    let d: Vec<f64> = k.iter().map(|&(t, v)| vr(t) - v).collect();
    let last = k.len() - 1;

    let a = match d.iter().position(|&x| x <= 0.0) {
        Some(0) => t0,
        Some(i) => {
            let lam = d[i - 1] / (d[i - 1] - d[i]);
            k[i - 1].0 + lam * (k[i].0 - k[i - 1].0)
        }
        None => {
            // No crossing at all (only possible through rounding): split at
            // the closest approach.
            let i = (0..=last).min_by(|&x, &y| d[x].total_cmp(&d[y])).unwrap_or(0);
            k[i].0
        }
    };
    let b = match d.iter().rposition(|&x| x <= 0.0) {
        Some(i) if i == last => p.t1(),
        Some(i) => {
            let lam = d[i] / (d[i] - d[i + 1]);
            k[i].0 + lam * (k[i + 1].0 - k[i].0)
        }
        None => a,
    };
    let b = b.max(a);

    let excess = |s0: f64, s1: f64| -> f64 {
        if s1 <= s0 {
            return 0.0;
        }
        let seg = |x: (f64, f64), y: (f64, f64)| {
            segment_power_integral(e, x.0, y.0, vr(x.0), vr(y.0)) - segment_power_integral(e, x.0, y.0, x.1, y.1)
        };
        let i0 = k.partition_point(|kn| kn.0 <= s0);
        let mut prev = (s0, p.eval(s0));
        let mut sum = 0.0;
        for &kn in &k[i0..] {
            if kn.0 >= s1 {
                break;
            }
            sum += seg(prev, kn);
            prev = kn;
        }
        (sum + seg(prev, (s1, p.eval(s1)))) * kappa(e)
    };
    Ok(Balance {
        r,
        a,
        b,
        lobe0: excess(t0, a).max(0.0),
        lobe1: excess(b, p.t1()).max(0.0),
    })
}

/// The truncated cone with the profile's volume and support interval whose
/// two end lobes outside the profile carry equal volume, found by bisection
/// on the slope.
pub fn equal_split_cone(p: &Profile) -> Result<TruncatedCone> {
    let n = p.dim();
    let c = profile_volume(p);
    if !(c > 0.0) {
        return Err(Error::DegenerateBody("profile has zero volume".into()));
    }
    let t0 = p.t0();
    let len = p.length();
    let k = p.knots();
    let (v_first, v_last) = (k[0].1, k[k.len() - 1].1);
    let chord_m = (v_last - v_first) / len;
    let deviation = k
        .iter()
        .map(|&(t, v)| (v - (v_first + chord_m * (t - t0))).abs())
        .fold(0.0f64, f64::max);
    if deviation <= CONE_DETECT_TOL * p.max_radius() {
        let mut cone = TruncatedCone::new(n, t0, p.t1(), v_first, chord_m)?;
        cone.crossings = Some((t0, p.t1()));
        cone.lobes = Some((0.0, 0.0));
        return Ok(cone);
    }

    let m0 = max_slope(n, c, len);
    let gap = |m: f64| -> Result<(f64, Balance)> {
        let bal = balance(p, c, m)?;
        Ok((bal.lobe0 - bal.lobe1, bal))
    };

    // Coarse scan for the multiple-root diagnostic.
    let coarse = 32;
    let mut sign_changes = 0;
    let mut prev: Option<f64> = None;
    for i in 0..=coarse {
        let m = -m0 + 2.0 * m0 * i as f64 / coarse as f64;
        let (g, _) = gap(m)?;
        let s = if g.abs() <= 1e-14 * c { 0.0 } else { g.signum() };
        if s != 0.0 {
            if let Some(ps) = prev {
                if ps != s {
                    sign_changes += 1;
                }
            }
            prev = Some(s);
        }
    }

    let (mut lo, mut hi) = (-m0, m0);
    let (mut g_lo, mut best) = gap(lo)?;
    let (g_hi, bal_hi) = gap(hi)?;
    let mut best_m = lo;
    let mut best_gap = g_lo;
    if g_hi.abs() < best_gap.abs() {
        best = bal_hi;
        best_m = hi;
        best_gap = g_hi;
    }
    for _ in 0..BALANCE_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (g, bal) = gap(mid)?;
        let spread = bal.lobe0 + bal.lobe1;
        if g.abs() < best_gap.abs() {
            best_gap = g;
            best_m = mid;
            best = bal;
        }
        if g == 0.0 {
            break;
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
        if hi - lo <= BALANCE_SLOPE_TOL * m0.max(1.0) && best_gap.abs() <= 1e-10 * spread {
            break;
        }
    }
    let mut cone = TruncatedCone::new(n, t0, p.t1(), best.r, best_m)?;
    cone.crossings = Some((best.a, best.b));
    cone.lobes = Some((best.lobe0, best.lobe1));
    cone.multiple_balanced_slopes = sign_changes > 1;
    Ok(cone)
}

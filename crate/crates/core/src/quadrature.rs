//! Gauss–Legendre rules: fixed-order, composite, adaptive, and collapsed
//! product rules on the reference triangle and tetrahedron.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term recurrence, seeded with the
    /// Tricomi approximation of the roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Applies the rule on each consecutive pair of `breaks`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks.windows(2).map(|w| self.integrate(w[0], w[1], &mut f)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Shared, lazily built rule of the given order.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(n))))
}

/// Adaptive bisection driven by the difference between a 15-point rule on an
/// interval and the same rule on its two halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, max_depth: usize) -> f64 {
    let rule = gauss_legendre(15);
    let whole = rule.integrate(a, b, &f);
    adaptive_step(&f, rule, a, b, whole, rel_tol, max_depth)
}

fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    rel_tol: f64,
    depth: usize,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= rel_tol * refined.abs().max(f64::MIN_POSITIVE) {
        return refined;
    }
    adaptive_step(f, rule, a, mid, left, rel_tol, depth - 1) + adaptive_step(f, rule, mid, b, right, rel_tol, depth - 1)
}

/// Collapsed Gauss product rule on the reference triangle (0,0),(1,0),(0,1).
/// With `n` points per axis it integrates polynomials of total degree
/// `2n - 2` exactly.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    /// (ξ, η, weight); weights sum to 1/2.
    pub points: Vec<(f64, f64, f64)>,
}

impl TriangleRule {
    pub fn new(n: usize) -> Self {
        let gl = GaussLegendre::new(n);
        let unit: Vec<(f64, f64)> = gl
            .nodes()
            .iter()
            .zip(gl.weights())
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let mut points = Vec::with_capacity(n * n);
        for &(u, wu) in &unit {
            for &(v, wv) in &unit {
                points.push((u, v * (1.0 - u), wu * wv * (1.0 - u)));
            }
        }
        TriangleRule { points }
    }

    /// Rule exact through total degree 20.
    pub fn degree20() -> &'static TriangleRule {
        static RULE: OnceLock<TriangleRule> = OnceLock::new();
        RULE.get_or_init(|| TriangleRule::new(11))
    }

    /// Integrates `f` over the triangle with the given vertices.
    pub fn integrate<F: FnMut([f64; 2]) -> f64>(&self, a: [f64; 2], b: [f64; 2], c: [f64; 2], mut f: F) -> f64 {
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - a[0], c[1] - a[1]];
        let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
        let mut sum = 0.0;
        for &(u, v, w) in &self.points {
            let p = [a[0] + u * e1[0] + v * e2[0], a[1] + u * e1[1] + v * e2[1]];
            sum += w * f(p);
        }
        sum * jac
    }
}

/// Collapsed Gauss product rule on the reference tetrahedron; with `n`
/// points per axis it is exact through total degree `2n - 3`.
#[derive(Debug, Clone)]
pub struct TetRule {
    /// (ξ, η, ζ, weight); weights sum to 1/6.
    pub points: Vec<(f64, f64, f64, f64)>,
}

impl TetRule {
    pub fn new(n: usize) -> Self {
        let gl = GaussLegendre::new(n);
        let unit: Vec<(f64, f64)> = gl
            .nodes()
            .iter()
            .zip(gl.weights())
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let mut points = Vec::with_capacity(n * n * n);
        for &(u, wu) in &unit {
            for &(v, wv) in &unit {
                for &(s, ws) in &unit {
                    let y = v * (1.0 - u);
                    let z = s * (1.0 - u) * (1.0 - v);
                    let w = wu * wv * ws * (1.0 - u) * (1.0 - u) * (1.0 - v);
                    points.push((u, y, z, w));
                }
            }
        }
        TetRule { points }
    }

    /// Rule exact through total degree 11 (covers the order-10 requirement).
    pub fn degree10() -> &'static TetRule {
        static RULE: OnceLock<TetRule> = OnceLock::new();
        RULE.get_or_init(|| TetRule::new(7))
    }

    pub fn integrate<F: FnMut([f64; 3]) -> f64>(
        &self,
        a: [f64; 3],
        b: [f64; 3],
        c: [f64; 3],
        d: [f64; 3],
        mut f: F,
    ) -> f64 {
        let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let e3 = [d[0] - a[0], d[1] - a[1], d[2] - a[2]];
        let jac = (e1[0] * (e2[1] * e3[2] - e2[2] * e3[1]) - e1[1] * (e2[0] * e3[2] - e2[2] * e3[0])
            + e1[2] * (e2[0] * e3[1] - e2[1] * e3[0]))
            .abs();
        let mut sum = 0.0;
        for &(u, v, s, w) in &self.points {
            let p = [
                a[0] + u * e1[0] + v * e2[0] + s * e3[0],
                a[1] + u * e1[1] + v * e2[1] + s * e3[1],
                a[2] + u * e1[2] + v * e2[2] + s * e3[2],
            ];
            sum += w * f(p);
        }
        sum * jac
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 11, 64] {
            let rule = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert_relative_eq!(got, 1.0 / (deg as f64 + 1.0), max_relative = 1e-13);
            let total: f64 = rule.weights().iter().sum();
            assert_relative_eq!(total, 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn adaptive_handles_steep_integrands() {
        let got = adaptive(|x| x.exp(), 0.0, 30.0, 1e-13, 40);
        assert_relative_eq!(got, 30f64.exp() - 1.0, max_relative = 1e-12);
    }

    #[test]
    fn triangle_rule_exact_to_degree_20() {
        let rule = TriangleRule::degree20();
        // ∫ x^a y^b over the reference triangle = a! b! / (a + b + 2)!
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        for (a, b) in [(0u32, 0u32), (20, 0), (7, 13), (10, 10), (0, 20)] {
            let exact = fact(a) * fact(b) / fact(a + b + 2);
            let got = rule.integrate([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], |p| {
                p[0].powi(a as i32) * p[1].powi(b as i32)
            });
            assert_relative_eq!(got, exact, max_relative = 1e-11);
        }
    }

    #[test]
    fn tet_rule_exact_to_degree_10() {
        let rule = TetRule::degree10();
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        for (a, b, c) in [(0u32, 0u32, 0u32), (10, 0, 0), (3, 3, 4), (0, 5, 5), (1, 0, 9)] {
            let exact = fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
            let got = rule.integrate(
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                |p| p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32),
            );
            assert_relative_eq!(got, exact, max_relative = 1e-11);
        }
    }
}

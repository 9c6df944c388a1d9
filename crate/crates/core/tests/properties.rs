//! Invariants of the center construction, the cone bound and the
//! verification harness, checked on generated instances.

use proptest::prelude::*;

use hhc_core::bounds::{conjecture_bound, reduced_bound, ConvexGauge};
use hhc_core::center::{find_center, find_center_with, supporting_affine, AffinePiece, ConcaveFunction};
use hhc_core::conesolver::equal_split_cone;
use hhc_core::geometry::{ConvexBody, Direction, Point};
use hhc_core::symmetrize::{profile_volume, schwarz_profile, DEFAULT_KNOTS};
use hhc_core::verify::{
    check_inequality, check_seed, instance_rng, random_body, random_instance, InstanceParams, Status,
};

fn params() -> InstanceParams {
    InstanceParams::default()
}

fn body(seed: u64, n: usize) -> ConvexBody {
    random_body(&mut instance_rng(seed, n), n, &params()).unwrap()
}

fn unit(angles: &[f64], n: usize) -> Direction {
    let u = if n == 2 {
        vec![angles[0].cos(), angles[0].sin()]
    } else {
        vec![
            angles[0].cos() * angles[1].sin(),
            angles[0].sin() * angles[1].sin(),
            angles[1].cos(),
        ]
    };
    Direction::normalize(&u).unwrap()
}

fn points_in(body: &ConvexBody, weights: &[f64]) -> Vec<Vec<f64>> {
    let ext = body.extreme_points();
    let n = body.dim();
    (0..weights.len() / 2)
        .map(|k| {
            // convex combination of three extreme points
            let (a, b) = (weights[2 * k], weights[2 * k + 1]);
            let (wa, wb) = (a * b, (1.0 - a) * b);
            let wc = 1.0 - wa - wb;
            let (i, j, l) = (k % ext.len(), (3 * k + 1) % ext.len(), (7 * k + 2) % ext.len());
            (0..n)
                .map(|d| wa * ext[i][d] + wb * ext[j][d] + wc * ext[l][d])
                .collect()
        })
        .collect()
}

fn rotate2(p: [f64; 2], th: f64, shift: [f64; 2]) -> [f64; 2] {
    let (s, c) = th.sin_cos();
    [c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn profile_preserves_volume_2d(seed in 0u64..1_000_000, th in 0.0..std::f64::consts::TAU) {
        let b = body(seed, 2);
        let p = schwarz_profile(&b, &unit(&[th], 2), 1025).unwrap();
        let v = b.volume().unwrap();
        prop_assert!(((profile_volume(&p) - v) / v).abs() < 1e-12);
    }

    #[test]
    fn profile_preserves_volume_3d(seed in 0u64..1_000_000, a in 0.0..std::f64::consts::TAU, z in 0.1..3.0f64) {
        let b = body(seed, 3);
        let p = schwarz_profile(&b, &unit(&[a, z], 3), DEFAULT_KNOTS).unwrap();
        let v = b.volume().unwrap();
        prop_assert!(((profile_volume(&p) - v) / v).abs() < 1e-6);
    }

    #[test]
    fn profile_radius_is_concave(seed in 0u64..1_000_000, n in 2usize..=3, a in 0.0..std::f64::consts::TAU) {
        let b = body(seed, n);
        let p = schwarz_profile(&b, &unit(&[a, 1.0], n), 1025).unwrap();
        let k = p.knots();
        let tol = 1e-9 * p.max_radius();
        for w in k.windows(3) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            let (t2, v2) = w[2];
            let chord = v0 + (v2 - v0) * (t1 - t0) / (t2 - t0);
            prop_assert!(v1 >= chord - tol, "v({t1}) = {v1} below chord {chord}");
        }
    }

    #[test]
    fn equal_split_cone_properties(seed in 0u64..1_000_000, n in 2usize..=3, a in 0.0..std::f64::consts::TAU) {
        let b = body(seed, n);
        let p = schwarz_profile(&b, &unit(&[a, 0.7], n), DEFAULT_KNOTS).unwrap();
        let c = profile_volume(&p);
        let cone = equal_split_cone(&p).unwrap();
        prop_assert!(((cone.volume() - c) / c).abs() < 1e-10);
        let (a0, a1) = cone.lobes.unwrap();
        prop_assert!((a0 - a1).abs() <= 1e-8 * c);
        prop_assert!((cone.partial_volume(cone.t_r) / cone.volume() - 0.5).abs() < 1e-10);
        prop_assert!(cone.t_r > cone.t0 && cone.t_r < cone.t1);
        prop_assert!(cone.t0 == p.t0() && cone.t1 == p.t1());
        // the cone sticks out only beyond the crossings
        let (c0, c1) = cone.crossings.unwrap();
        let tol = 1e-9 * p.max_radius();
        for i in 0..=400 {
            let t = p.t0() + (p.t1() - p.t0()) * i as f64 / 400.0;
            let d = cone.radius(t) - p.eval(t);
            if t < c0 || t > c1 {
                prop_assert!(d >= -tol, "cone inside profile at {t}: {d}");
            } else {
                prop_assert!(d <= tol, "cone outside profile at {t}: {d}");
            }
        }
    }

    #[test]
    fn supporting_affine_dominates(seed in 0u64..1_000_000, n in 2usize..=3, w in prop::collection::vec(0.0..1.0f64, 20_000)) {
        let (b, f) = random_instance(seed, n, &params()).unwrap();
        let x0 = b.centroid().unwrap();
        let g = supporting_affine(&b, &f, &x0).unwrap();
        prop_assert!((g.eval(x0.coords()) - f.eval(x0.coords())).abs() < 1e-12 * f.magnitude_on(&b).max(1.0));
        for x in points_in(&b, &w).iter().chain(b.extreme_points().iter()) {
            prop_assert!(g.eval(x) >= f.eval(x) - 1e-9);
        }
    }

    #[test]
    fn center_lies_in_body_and_maximizes_slice(seed in 0u64..1_000_000, n in 2usize..=3) {
        let (b, f) = random_instance(seed, n, &params()).unwrap();
        let c = find_center(&b, &f, None).unwrap();
        prop_assert!(b.contains(c.point.coords(), 1e-12 * b.scale()).unwrap());
        let t = c.point.coords().iter().zip(c.direction.as_slice()).map(|(x, u)| x * u).sum::<f64>();
        prop_assert!((t - c.t_value).abs() < 1e-9 * b.scale());
        prop_assert!((f.eval(c.point.coords()) - c.f_at_center).abs() < 1e-12 * f.magnitude_on(&b).max(1.0));
    }

    #[test]
    fn start_point_irrelevant_for_affine(seed in 0u64..1_000_000, w in prop::collection::vec(0.0..1.0f64, 2), gx in -2.0..2.0f64, gy in -2.0..2.0f64) {
        let b = body(seed, 2);
        let grad = vec![gx, gy];
        let off = b.extreme_points().iter().map(|x| -(gx * x[0] + gy * x[1])).fold(f64::MIN, f64::max) + 0.1;
        let f = ConcaveFunction::affine(grad, off);
        let x0 = Point::new(points_in(&b, &w).remove(0)).unwrap();
        let a = find_center(&b, &f, None).unwrap();
        let c = find_center(&b, &f, Some(&x0)).unwrap();
        for (p, q) in a.point.coords().iter().zip(c.point.coords()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn rigid_motion_equivariance(seed in 0u64..1_000_000, th in 0.0..std::f64::consts::TAU, sx in -3.0..3.0f64, sy in -3.0..3.0f64) {
        let (b, f) = random_instance(seed, 2, &params()).unwrap();
        let ConvexBody::Polygon(poly) = &b else { unreachable!() };
        let moved = ConvexBody::polygon(poly.vertices().iter().map(|&v| rotate2(v, th, [sx, sy])).collect()).unwrap();
        // f∘M⁻¹ for M(x) = Rx + s
        let (s, c) = th.sin_cos();
        let pieces = f.pieces().iter().map(|p| {
            let g = [c * p.gradient[0] - s * p.gradient[1], s * p.gradient[0] + c * p.gradient[1]];
            AffinePiece::new(g.to_vec(), p.offset - g[0] * sx - g[1] * sy)
        }).collect();
        let fm = ConcaveFunction::min_affine(pieces);
        let x0 = b.centroid().unwrap();
        let y0 = rotate2([x0.coords()[0], x0.coords()[1]], th, [sx, sy]);
        let c0 = find_center(&b, &f, Some(&x0)).unwrap();
        let c1 = find_center(&moved, &fm, Some(&Point::new(y0.to_vec()).unwrap())).unwrap();
        prop_assume!(c0.diagnostics.supporting_piece == c1.diagnostics.supporting_piece);
        let expect = rotate2([c0.point.coords()[0], c0.point.coords()[1]], th, [sx, sy]);
        let scale = 1.0 + sx.abs() + sy.abs();
        prop_assert!((expect[0] - c1.point.coords()[0]).abs() < 1e-7 * scale);
        prop_assert!((expect[1] - c1.point.coords()[1]).abs() < 1e-7 * scale);
        prop_assert!((c0.f_at_center - c1.f_at_center).abs() < 1e-7 * scale);
    }

    #[test]
    fn affine_rigid_motion_equivariance(seed in 0u64..1_000_000, th in 0.0..std::f64::consts::TAU, sx in -3.0..3.0f64, sy in -3.0..3.0f64, gx in -2.0..2.0f64, gy in -2.0..2.0f64) {
        prop_assume!(gx.hypot(gy) > 1e-3);
        let b = body(seed, 2);
        let ConvexBody::Polygon(poly) = &b else { unreachable!() };
        let off = b.extreme_points().iter().map(|x| -(gx * x[0] + gy * x[1])).fold(f64::MIN, f64::max) + 0.1;
        let f = ConcaveFunction::affine(vec![gx, gy], off);
        let moved = ConvexBody::polygon(poly.vertices().iter().map(|&v| rotate2(v, th, [sx, sy])).collect()).unwrap();
        let g = rotate2([gx, gy], th, [0.0, 0.0]);
        let fm = ConcaveFunction::affine(g.to_vec(), off - g[0] * sx - g[1] * sy);
        let c0 = find_center(&b, &f, None).unwrap();
        let c1 = find_center(&moved, &fm, None).unwrap();
        let expect = rotate2([c0.point.coords()[0], c0.point.coords()[1]], th, [sx, sy]);
        let scale = 1.0 + sx.abs() + sy.abs();
        prop_assert!((expect[0] - c1.point.coords()[0]).abs() < 1e-8 * scale);
        prop_assert!((expect[1] - c1.point.coords()[1]).abs() < 1e-8 * scale);
    }

    #[test]
    fn refinement_stable_in_the_plane(seed in 0u64..1_000_000) {
        let (b, f) = random_instance(seed, 2, &params()).unwrap();
        let a = find_center_with(&b, &f, None, 1025).unwrap();
        let c = find_center_with(&b, &f, None, 4097).unwrap();
        for (p, q) in a.point.coords().iter().zip(c.point.coords()) {
            prop_assert!((p - q).abs() < 1e-8);
        }
    }

    #[test]
    fn no_violations(seed in 0u64..1_000_000, n in 2usize..=3, which in 0usize..4) {
        let phi = [
            ConvexGauge::Power { alpha: 1.0 },
            ConvexGauge::Power { alpha: 3.0 },
            ConvexGauge::ExpMinusOne,
            ConvexGauge::PiecewiseLinearConvex { knots: vec![(0.0, 0.0), (0.5, 0.1), (2.0, 3.0)] },
        ][which].clone();
        let rec = check_seed(seed, n, &phi, &params()).unwrap();
        prop_assert_ne!(rec.status, Status::Violation, "slack {}", rec.slack);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Piecewise-linear profiles in space converge like N⁻², so the 1e-8
    /// doubling tolerance needs about 16k knots.
    #[test]
    fn profile_volume_refinement_stable(seed in 0u64..1_000_000, n in 2usize..=3, a in 0.0..std::f64::consts::TAU) {
        let b = body(seed, n);
        let u = unit(&[a, 1.1], n);
        let knots = if n == 2 { 1025 } else { 16385 };
        let coarse = profile_volume(&schwarz_profile(&b, &u, knots).unwrap());
        let fine = profile_volume(&schwarz_profile(&b, &u, 2 * knots - 1).unwrap());
        prop_assert!(((fine - coarse) / fine).abs() < 1e-8, "{coarse} vs {fine}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_scaling_law(n in 2usize..=4, c in 0.1..10.0f64, f0 in 0.1..5.0f64, alpha in 1.0..4.0f64) {
        let phi = ConvexGauge::Power { alpha };
        let unit = reduced_bound(n, 1.0, 1.0, &phi).unwrap().bound;
        let scaled = reduced_bound(n, c, f0, &phi).unwrap().bound;
        let expect = c * f0.powf(alpha) * unit;
        prop_assert!(((scaled - expect) / expect).abs() < 1e-9);
    }

    #[test]
    fn bound_is_monotone_in_f0(n in 2usize..=3, f0 in 0.05..2.0f64, df in 0.01..1.0f64, which in 0usize..3) {
        let phi = [ConvexGauge::Power { alpha: 1.5 }, ConvexGauge::ExpMinusOne, ConvexGauge::ExpSquareMinusOne][which].clone();
        let lo = reduced_bound(n, 1.0, f0, &phi).unwrap().bound;
        let hi = reduced_bound(n, 1.0, f0 + df, &phi).unwrap().bound;
        prop_assert!(hi >= lo * (1.0 - 1e-12));
    }

    #[test]
    fn extremal_cone_has_vertex_at_start(f0 in 0.1..2.0f64, alpha in 1.0..5.0f64, which in 0usize..4) {
        let (n, phi) = [
            (2, ConvexGauge::Power { alpha }),
            (2, ConvexGauge::ExpMinusOne),
            (2, ConvexGauge::ExpSquareMinusOne),
            (3, ConvexGauge::Power { alpha: 1.0 }),
        ][which].clone();
        let r = reduced_bound(n, 1.0, f0, &phi).unwrap();
        prop_assert!((r.argmax_m + r.m0).abs() <= 1e-6 * r.m0, "argmax {} m0 {}", r.argmax_m, r.m0);
    }

    #[test]
    fn vertex_cone_matches_optimum(n in 2usize..=3, f0 in 0.1..1.5f64, alpha in 1.0..3.0f64) {
        let phi = ConvexGauge::Power { alpha };
        let opt = reduced_bound(n, 1.0, f0, &phi).unwrap().bound;
        let vertex = conjecture_bound(n, f0, &phi).unwrap();
        prop_assert!(((opt - vertex) / vertex).abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Affine f vanishing on one edge of a triangle and peaking at the
    /// opposite vertex makes the power-one bound tight.
    #[test]
    fn triangles_with_edge_vanishing_affine_are_tight(
        p in prop::array::uniform6(-2.0..2.0f64),
        h in 0.1..5.0f64,
    ) {
        let (a, b, apex) = ([p[0], p[1]], [p[2], p[3]], [p[4], p[5]]);
        let area2 = (b[0] - a[0]) * (apex[1] - a[1]) - (b[1] - a[1]) * (apex[0] - a[0]);
        prop_assume!(area2.abs() > 0.2);
        let tri = ConvexBody::polygon(vec![a, b, apex]).unwrap();
        // affine with f(a) = f(b) = 0, f(apex) = h
        let nrm = [-(b[1] - a[1]), b[0] - a[0]];
        let s = h / (nrm[0] * (apex[0] - a[0]) + nrm[1] * (apex[1] - a[1]));
        let grad = vec![s * nrm[0], s * nrm[1]];
        let f = ConcaveFunction::affine(grad.clone(), -(grad[0] * a[0] + grad[1] * a[1]));
        let rec = check_inequality(&tri, &f, &ConvexGauge::Power { alpha: 1.0 }).unwrap();
        prop_assert_eq!(rec.status, Status::EqualityWithinTol, "slack {} bound {}", rec.slack, rec.bound);
        prop_assert!((rec.integral - tri.volume().unwrap() * h / 3.0).abs() < 1e-10 * h);
    }
}

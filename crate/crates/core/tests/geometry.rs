//! Geometric invariants of generated polygons and polytopes.

use proptest::prelude::*;

use hhc_core::geometry::{ConvexBody, Direction};
use hhc_core::quadrature::gauss_legendre;
use hhc_core::verify::{instance_rng, random_body, InstanceParams};

fn body(seed: u64, n: usize) -> ConvexBody {
    random_body(&mut instance_rng(seed, n), n, &InstanceParams::default()).unwrap()
}

fn direction(a: f64, z: f64, n: usize) -> Direction {
    let u = if n == 2 {
        vec![a.cos(), a.sin()]
    } else {
        vec![a.cos() * z.sin(), a.sin() * z.sin(), z.cos()]
    };
    Direction::normalize(&u).unwrap()
}

fn rotation3(a: f64, b: f64) -> [[f64; 3]; 3] {
    // rotation about z by a, then about x by b
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    [[ca, -sa, 0.0], [cb * sa, cb * ca, -sb], [sb * sa, sb * ca, cb]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sections_integrate_to_volume(seed in 0u64..1_000_000, n in 2usize..=3, a in 0.0..6.3f64, z in 0.1..3.0f64) {
        let b = body(seed, n);
        let u = direction(a, z, n);
        let mut breaks = b.vertex_heights(&u);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        // sections are polynomial of degree n−1 between vertex heights
        let total = gauss_legendre(4).integrate_composite(&breaks, |t| b.section_measure(&u, t).unwrap());
        let v = b.volume().unwrap();
        prop_assert!(((total - v) / v).abs() < 1e-7, "{total} vs {v}");
    }

    #[test]
    fn sections_are_brunn_concave(seed in 0u64..1_000_000, n in 2usize..=3, a in 0.0..6.3f64, s in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 20)) {
        let b = body(seed, n);
        let u = direction(a, 1.0, n);
        let (t0, t1) = b.support_interval(&u).unwrap();
        let root = |t: f64| b.section_measure(&u, t).unwrap().powf(1.0 / (n - 1) as f64);
        let scale = root(0.5 * (t0 + t1)).max(1e-3);
        for (x, y) in s {
            let (p, q) = (t0 + x * (t1 - t0), t0 + y * (t1 - t0));
            let mid = root(0.5 * (p + q));
            prop_assert!(mid >= 0.5 * (root(p) + root(q)) - 1e-9 * scale);
        }
    }

    #[test]
    fn centroid_is_inside(seed in 0u64..1_000_000, n in 2usize..=3) {
        let b = body(seed, n);
        let c = b.centroid().unwrap();
        prop_assert!(b.inside_margin(c.coords()).unwrap() > 0.0);
    }

    #[test]
    fn volume_is_rigid_invariant(seed in 0u64..1_000_000, a in 0.0..6.3f64, c in 0.0..6.3f64, shift in prop::array::uniform3(-5.0..5.0f64)) {
        let b = body(seed, 3);
        let ConvexBody::Polytope(k) = &b else { unreachable!() };
        let r = rotation3(a, c);
        let moved: Vec<[f64; 3]> = k
            .vertices()
            .iter()
            .map(|v| {
                let mut w = shift;
                for i in 0..3 {
                    for j in 0..3 {
                        w[i] += r[i][j] * v[j];
                    }
                }
                w
            })
            .collect();
        let m = ConvexBody::polytope(&moved).unwrap();
        let (v0, v1) = (b.volume().unwrap(), m.volume().unwrap());
        prop_assert!(((v0 - v1) / v0).abs() < 1e-10);

        let p = body(seed, 2);
        let ConvexBody::Polygon(poly) = &p else { unreachable!() };
        let (s, co) = a.sin_cos();
        let moved2 = ConvexBody::polygon(
            poly.vertices().iter().map(|v| [co * v[0] - s * v[1] + shift[0], s * v[0] + co * v[1] + shift[1]]).collect(),
        )
        .unwrap();
        let (a0, a1) = (p.volume().unwrap(), moved2.volume().unwrap());
        prop_assert!(((a0 - a1) / a0).abs() < 1e-10);
    }
}

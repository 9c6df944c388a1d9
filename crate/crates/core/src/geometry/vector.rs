//! Small fixed-size vector helpers.

pub type V2 = [f64; 2];
pub type V3 = [f64; 3];

#[inline]
pub fn sub2(a: V2, b: V2) -> V2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn cross2(a: V2, b: V2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn dot2(a: V2, b: V2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn sub3(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add3(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale3(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot3(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm3(a: V3) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn det3(a: V3, b: V3, c: V3) -> f64 {
    dot3(a, cross3(b, c))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal frame whose first vector is `u` (assumed unit), completed by
/// Gram–Schmidt against the coordinate axes.
pub fn orthonormal_frame(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut frame: Vec<Vec<f64>> = vec![u.to_vec()];
    // Axes least aligned with u first, for a well-conditioned completion.
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()).then(i.cmp(&j)));
    for axis in axes {
        if frame.len() == n {
            break;
        }
        let mut w = vec![0.0; n];
        w[axis] = 1.0;
        for _ in 0..2 {
            for f in &frame {
                let p = dot(&w, f);
                for (wi, fi) in w.iter_mut().zip(f) {
                    *wi -= p * fi;
                }
            }
        }
        let len = norm(&w);
        if len > 1e-8 {
            frame.push(w.iter().map(|x| x / len).collect());
        }
    }
    frame
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal() {
        let u = [0.6, 0.0, 0.8];
        let f = orthonormal_frame(&u);
        assert_eq!(f.len(), 3);
        assert_eq!(f[0], u.to_vec());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&f[i], &f[j]) - expect).abs() < 1e-14);
            }
        }
    }
}

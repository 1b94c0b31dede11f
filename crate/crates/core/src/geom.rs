//! Small 3D vector/matrix helpers shared across the crate.
//!
//! Points and vectors are plain `[f64; 3]`; everything here is free
//! functions so call sites stay explicit about what they compute.

pub type Vec3 = [f64; 3];

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_sq(a: Vec3) -> f64 {
    dot(a, a)
}

pub fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Unit vector in the direction of `a`; `None` if `a` is (numerically) zero.
pub fn normalize(a: Vec3) -> Option<Vec3> {
    let n = norm(a);
    if n <= 1e-300 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

pub fn triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    0.5 * norm(cross(sub(b, a), sub(c, a)))
}

pub fn centroid(points: &[Vec3]) -> Vec3 {
    let mut c = [0.0; 3];
    for p in points {
        c = add(c, *p);
    }
    scale(c, 1.0 / points.len().max(1) as f64)
}

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues ascending and
/// `eigenvectors[i]` the unit eigenvector for `eigenvalues[i]`. Deterministic
/// for identical inputs.
pub fn symmetric_eigen3(m: [[f64; 3]; 3]) -> ([f64; 3], [Vec3; 3]) {
    let mut a = m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    for _sweep in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-300 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            let rotate = |m: &mut [[f64; 3]; 3], i: usize, j: usize, k: usize, l: usize| {
                let g = m[i][j];
                let h = m[k][l];
                m[i][j] = c * g - s * h;
                m[k][l] = s * g + c * h;
            };

            let app = a[p][p];
            let aqq = a[q][q];
            let apq = a[p][q];
            a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
            a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            let r = 3 - p - q; // the remaining index
            rotate(&mut a, p, r, q, r);
            a[r][p] = a[p][r];
            a[r][q] = a[q][r];
            for row in 0..3 {
                let g = v[row][p];
                let h = v[row][q];
                v[row][p] = c * g - s * h;
                v[row][q] = s * g + c * h;
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let vals = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let mut vecs = [[0.0; 3]; 3];
    for (slot, &col) in order.iter().enumerate() {
        vecs[slot] = [v[0][col], v[1][col], v[2][col]];
    }
    (vals, vecs)
}

/// Axis-aligned bounding box of a point set. Panics on empty input.
pub fn bounding_box(points: &[Vec3]) -> (Vec3, Vec3) {
    assert!(!points.is_empty());
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_recovers_diagonal() {
        let (vals, _) = symmetric_eigen3([[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_vectors_satisfy_definition() {
        let m = [[2.0, 1.0, 0.3], [1.0, 4.0, -0.5], [0.3, -0.5, 1.5]];
        let (vals, vecs) = symmetric_eigen3(m);
        for i in 0..3 {
            let x = vecs[i];
            let mx = [
                m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
                m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
                m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
            ];
            let r = sub(mx, scale(x, vals[i]));
            assert!(norm(r) < 1e-9, "residual {} for eigenpair {}", norm(r), i);
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn cross_is_right_handed() {
        let z = cross([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        assert_eq!(z, [0.0, 0.0, 1.0]);
    }
}

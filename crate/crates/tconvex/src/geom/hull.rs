//! Distance from a point to the convex hull of a small vertex set.

use crate::error::Error;
use crate::linalg;
use crate::tol::Tolerances;
use crate::Result;

/// Euclidean distance from `p` to `Conv(vertices)`.
///
/// Exact for one or two vertices; for larger sets the nearest point is found
/// by projected gradient on the barycentric coordinates (coordinate-change
/// threshold `1e-10`, at most 10 000 iterations), giving the distance within
/// `1e-8` absolute on well-scaled inputs.
pub fn dist_point_to_hull(p: &[f64], vertices: &[&[f64]]) -> Result<f64> {
    if vertices.is_empty() {
        return Err(Error::EmptyInput("dist_point_to_hull"));
    }
    for v in vertices {
        if v.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                got: v.len(),
            });
        }
    }
    Ok(match vertices {
        [a] => linalg::dist(p, a),
        [a, b] => dist_point_to_segment(p, a, b),
        _ => dist_by_projected_gradient(p, vertices),
    })
}

/// Exact point-to-segment distance.
pub fn dist_point_to_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = linalg::sub(b, a);
    let len2 = linalg::dot(&ab, &ab);
    if len2 == 0.0 {
        return linalg::dist(p, a);
    }
    let ap = linalg::sub(p, a);
    let t = (linalg::dot(&ap, &ab) / len2).clamp(0.0, 1.0);
    let mut foot = a.to_vec();
    linalg::axpy(&mut foot, t, &ab);
    linalg::dist(p, &foot)
}

fn dist_by_projected_gradient(p: &[f64], vertices: &[&[f64]]) -> f64 {
    let tol = Tolerances::DEFAULT;
    let k = vertices.len();
    // Gram data relative to p: f(l) = l^T G l - 2 b^T l + |p|^2-ish constant.
    let mut gram = vec![0.0; k * k];
    let mut lin = vec![0.0; k];
    for i in 0..k {
        let vi = linalg::sub(vertices[i], p);
        lin[i] = linalg::dot(&vi, &vi);
        for j in i..k {
            let vj = linalg::sub(vertices[j], p);
            let g = linalg::dot(&vi, &vj);
            gram[i * k + j] = g;
            gram[j * k + i] = g;
        }
    }
    // f(l) = sum_ij l_i l_j <v_i-p, v_j-p>, gradient 2 G l.
    let f = |l: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..k {
            let mut row = 0.0;
            for j in 0..k {
                row += gram[i * k + j] * l[j];
            }
            acc += l[i] * row;
        }
        acc
    };
    let grad = |l: &[f64], g: &mut [f64]| {
        for i in 0..k {
            let mut row = 0.0;
            for j in 0..k {
                row += gram[i * k + j] * l[j];
            }
            g[i] = 2.0 * row;
        }
    };
    // Lipschitz bound on the gradient via the infinity norm of 2G.
    let lip = (0..k)
        .map(|i| (0..k).map(|j| gram[i * k + j].abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
        * 2.0;
    let mut lambda = vec![1.0 / k as f64; k];
    if lip <= 0.0 {
        // All vertices coincide with p.
        return 0.0;
    }
    let mut step = 1.0 / lip;
    let mut fval = f(&lambda);
    let mut g = vec![0.0; k];
    let mut trial = vec![0.0; k];
    for _ in 0..tol.hull_max_iters {
        grad(&lambda, &mut g);
        // Monotone step control: shrink on increase, grow gently on success.
        let moved;
        loop {
            for i in 0..k {
                trial[i] = lambda[i] - step * g[i];
            }
            project_onto_simplex(&mut trial);
            let ftrial = f(&trial);
            if ftrial <= fval + 1e-18 || step < 1e-18 / lip.max(1.0) {
                moved = lambda
                    .iter()
                    .zip(&trial)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                lambda.copy_from_slice(&trial);
                fval = ftrial;
                step *= 1.3;
                break;
            }
            step *= 0.5;
        }
        if moved < tol.hull_coord {
            break;
        }
    }
    fval.max(0.0).sqrt()
}

/// Euclidean projection onto the probability simplex, in place.
fn project_onto_simplex(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        css += uj;
        let candidate = (css - 1.0) / (j + 1) as f64;
        if uj - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perpendicular_foot_on_segment() {
        let d = dist_point_to_hull(&[0.0, 1.0], &[&[-1.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beyond_endpoint() {
        let d = dist_point_to_hull(&[3.0, 0.0], &[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_distance_to_containing_triangle() {
        // Unit triangle in the z = 0 plane containing the origin.
        let a = [0.5, 0.5, 0.0];
        let b = [-1.0, 0.3, 0.0];
        let c = [0.2, -0.9, 0.0];
        let d = dist_point_to_hull(&[0.0, 0.0, 1.0], &[&a, &b, &c]).unwrap();
        assert!((d - 1.0).abs() < 1e-8, "d={d}");
    }

    #[test]
    fn point_inside_hull_has_zero_distance() {
        let d = dist_point_to_hull(
            &[0.25, 0.25],
            &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]],
        )
        .unwrap();
        assert!(d < 1e-8, "d={d}");
    }

    #[test]
    fn nearest_point_on_edge_of_triangle() {
        let d = dist_point_to_hull(
            &[2.0, 0.5, 0.0],
            &[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 0.0]],
        )
        .unwrap();
        assert!((d - 1.0).abs() < 1e-8, "d={d}");
    }

    #[test]
    fn degenerate_duplicate_vertices() {
        let d = dist_point_to_hull(&[1.0, 1.0], &[&[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(dist_point_to_hull(&[0.0, 0.0], &[&[0.0]]).is_err());
    }

    #[test]
    fn simplex_projection_basics() {
        let mut v = vec![0.4, 0.4, 0.4];
        project_onto_simplex(&mut v);
        let s: f64 = v.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(v.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-12));

        let mut w = vec![2.0, 0.0];
        project_onto_simplex(&mut w);
        assert!((w[0] - 1.0).abs() < 1e-12 && w[1].abs() < 1e-12);
    }
}

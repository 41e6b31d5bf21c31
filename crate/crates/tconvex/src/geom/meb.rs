//! Smallest enclosing balls in arbitrary ambient dimension.
//!
//! Recursive support-set algorithm with move-to-front reordering and a fixed,
//! caller-given input order, so results are reproducible bit for bit.

use super::{Ball, Point};
use crate::error::Error;
use crate::linalg;
use crate::Result;

/// Smallest ball enclosing `points`. Radius is minimal within a relative
/// tolerance of `1e-9`; deterministic for a fixed input order.
pub fn min_enclosing_ball(points: &[Point]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptyInput("min_enclosing_ball"));
    }
    let dim = points[0].dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    let slices: Vec<&[f64]> = points.iter().map(|p| p.coords()).collect();
    meb_of_slices(&slices)
}

/// Slice-based entry point used throughout the crate.
pub fn meb_of_slices(pts: &[&[f64]]) -> Result<Ball> {
    match pts.len() {
        0 => Err(Error::EmptyInput("min_enclosing_ball")),
        1 => Ball::new(Point::new(pts[0].to_vec())?, 0.0),
        2 => Ok(diameter_ball(pts[0], pts[1])),
        3 => Ok(meb3(pts[0], pts[1], pts[2])),
        _ => {
            let dim = pts[0].len();
            let mut order: Vec<usize> = (0..pts.len()).collect();
            let mut boundary: Vec<usize> = Vec::with_capacity(dim + 1);
            let n = pts.len();
            let ball = welzl(pts, n, &mut order, &mut boundary, dim);
            Ok(finalize(ball, pts))
        }
    }
}

/// Ball with segment `[a, b]` as a diameter.
pub fn diameter_ball(a: &[f64], b: &[f64]) -> Ball {
    let center: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
    let r = linalg::dist(&center, a).max(linalg::dist(&center, b));
    Ball {
        center: Point { coords: center },
        radius: r,
    }
}

/// Smallest enclosing ball of three points; allocation-light because clique
/// filtering calls this in bulk.
pub fn meb3(a: &[f64], b: &[f64], c: &[f64]) -> Ball {
    // Smallest diameter ball that covers the third point wins.
    let mut best: Option<Ball> = None;
    for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
        let ball = diameter_ball(u, v);
        if ball.contains(w, contain_eps(ball.radius)) {
            best = match best {
                Some(cur) if cur.radius <= ball.radius => Some(cur),
                _ => Some(ball),
            };
        }
    }
    if let Some(ball) = best {
        return ball;
    }
    // Acute triangle: circumball. Gram system in the plane of the triangle.
    let a1 = linalg::sub(b, a);
    let a2 = linalg::sub(c, a);
    let g11 = linalg::dot(&a1, &a1);
    let g12 = linalg::dot(&a1, &a2);
    let g22 = linalg::dot(&a2, &a2);
    let det = g11 * g22 - g12 * g12;
    if det.abs() <= 1e-14 * (g11 * g22).max(1e-300) {
        // Nearly collinear yet no diameter ball covered: pick the widest pair.
        let mut ball = diameter_ball(a, b);
        for (u, v) in [(a, c), (b, c)] {
            let cand = diameter_ball(u, v);
            if cand.radius > ball.radius {
                ball = cand;
            }
        }
        return finalize(Some(ball), &[a, b, c]);
    }
    let r1 = 0.5 * g11;
    let r2 = 0.5 * g22;
    let l1 = (r1 * g22 - r2 * g12) / det;
    let l2 = (g11 * r2 - g12 * r1) / det;
    let mut center = a.to_vec();
    linalg::axpy(&mut center, l1, &a1);
    linalg::axpy(&mut center, l2, &a2);
    let radius = linalg::dist(&center, a)
        .max(linalg::dist(&center, b))
        .max(linalg::dist(&center, c));
    Ball {
        center: Point { coords: center },
        radius,
    }
}

#[inline]
fn contain_eps(radius: f64) -> f64 {
    (1.0 + radius) * 1e-12
}

fn welzl(
    pts: &[&[f64]],
    n_active: usize,
    order: &mut Vec<usize>,
    boundary: &mut Vec<usize>,
    dim: usize,
) -> Option<Ball> {
    let mut ball = ball_from_support(pts, boundary);
    if boundary.len() == dim + 1 {
        return ball;
    }
    let mut i = 0;
    while i < n_active {
        let pi = order[i];
        let outside = match &ball {
            None => true,
            Some(b) => !b.contains(pts[pi], contain_eps(b.radius)),
        };
        if outside {
            boundary.push(pi);
            let sub = welzl(pts, i, order, boundary, dim);
            boundary.pop();
            if sub.is_some() {
                ball = sub;
            }
            order[0..=i].rotate_right(1);
        }
        i += 1;
    }
    ball
}

/// Smallest ball with every support point on its boundary: the circumball of
/// the support set inside its affine hull. `None` for an empty support or a
/// numerically degenerate configuration.
fn ball_from_support(pts: &[&[f64]], boundary: &[usize]) -> Option<Ball> {
    match boundary.len() {
        0 => None,
        1 => Some(Ball {
            center: Point {
                coords: pts[boundary[0]].to_vec(),
            },
            radius: 0.0,
        }),
        2 => Some(diameter_ball(pts[boundary[0]], pts[boundary[1]])),
        k => {
            let base = pts[boundary[0]];
            let dirs: Vec<Vec<f64>> = boundary[1..]
                .iter()
                .map(|&i| linalg::sub(pts[i], base))
                .collect();
            let m = k - 1;
            let mut gram = vec![vec![0.0; m]; m];
            let mut rhs = vec![0.0; m];
            for i in 0..m {
                for j in 0..m {
                    gram[i][j] = linalg::dot(&dirs[i], &dirs[j]);
                }
                rhs[i] = 0.5 * gram[i][i];
            }
            let lambda = linalg::solve(gram, rhs, 1e-12)?;
            let mut center = base.to_vec();
            for (l, d) in lambda.iter().zip(&dirs) {
                linalg::axpy(&mut center, *l, d);
            }
            let radius = boundary
                .iter()
                .map(|&i| linalg::dist(&center, pts[i]))
                .fold(0.0f64, f64::max);
            Some(Ball {
                center: Point { coords: center },
                radius,
            })
        }
    }
}

/// Expands the radius if needed so every input point is covered; guards the
/// containment contract against floating-point slack in the recursion.
fn finalize(ball: Option<Ball>, pts: &[&[f64]]) -> Ball {
    let mut ball = ball.unwrap_or_else(|| Ball {
        center: Point {
            coords: pts[0].to_vec(),
        },
        radius: 0.0,
    });
    let needed = pts
        .iter()
        .map(|p| linalg::dist(ball.center.coords(), p))
        .fold(0.0f64, f64::max);
    if needed > ball.radius {
        ball.radius = needed;
    }
    ball
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meb(rows: &[Vec<f64>]) -> Ball {
        let slices: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        meb_of_slices(&slices).unwrap()
    }

    #[test]
    fn singleton_is_zero_radius() {
        let b = meb(&[vec![0.0, 0.0]]);
        assert_eq!(b.radius, 0.0);
        assert_eq!(b.center.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn pair_is_midpoint_ball() {
        let b = meb(&[vec![0.0, 0.0], vec![2.0, 0.0]]);
        assert_eq!(b.center.coords(), &[1.0, 0.0]);
        assert!((b.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_equilateral_triangle_circumradius() {
        let h = 3f64.sqrt() / 2.0;
        let b = meb(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]);
        assert!((b.radius - 1.0 / 3f64.sqrt()).abs() < 1e-9, "r={}", b.radius);
    }

    #[test]
    fn obtuse_triangle_uses_diameter_ball() {
        let b = meb(&[vec![0.0, 0.0], vec![4.0, 0.0], vec![2.0, 0.1]]);
        assert!((b.radius - 2.0).abs() < 1e-9);
        assert!((b.center.coords()[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_points_fall_back_to_extremes() {
        let b = meb(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![3.0, 0.0]]);
        assert!((b.radius - 1.5).abs() < 1e-9);
    }

    #[test]
    fn square_in_three_dimensions() {
        let b = meb(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert!((b.radius - 0.5f64 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn regular_simplex_in_four_dimensions() {
        // Standard basis vectors: circumcenter at the barycenter.
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let b = meb(&rows);
        let expected = (3.0f64 / 4.0).sqrt(); // |e_i - barycenter|
        assert!((b.radius - expected).abs() < 1e-9, "r={}", b.radius);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let pts = [
            Point::new(vec![0.0, 0.0]).unwrap(),
            Point::new(vec![0.0]).unwrap(),
        ];
        assert!(min_enclosing_ball(&pts).is_err());
        assert!(min_enclosing_ball(&[]).is_err());
    }

    #[test]
    fn interior_points_do_not_change_the_ball() {
        let b = meb(&[
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![1.0, 0.3],
            vec![0.9, -0.2],
            vec![1.1, 0.0],
        ]);
        assert!((b.radius - 1.0).abs() < 1e-9);
        assert!((b.center.coords()[0] - 1.0).abs() < 1e-9);
    }
}

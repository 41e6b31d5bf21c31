//! Angle between linear subspaces as an operator norm of projector
//! differences.

use super::Subspace;
use crate::error::Error;
use crate::Result;
use nalgebra::DMatrix;

/// `‖π_U − π_V‖_op`, the largest singular value of the difference of the
/// orthogonal projectors. Lies in `[0, 1]`; equals `sin θ` for two lines at
/// angle `θ`.
pub fn subspace_angle(u: &Subspace, v: &Subspace) -> Result<f64> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: u.ambient_dim(),
            got: v.ambient_dim(),
        });
    }
    if u.dim() != v.dim() {
        return Err(Error::invalid(format!(
            "intrinsic dimensions differ: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    let d = u.ambient_dim();
    let mut diff = DMatrix::<f64>::zeros(d, d);
    for b in u.basis() {
        for i in 0..d {
            for j in 0..d {
                diff[(i, j)] += b[i] * b[j];
            }
        }
    }
    for b in v.basis() {
        for i in 0..d {
            for j in 0..d {
                diff[(i, j)] -= b[i] * b[j];
            }
        }
    }
    // The projector difference is symmetric, so the operator norm is the
    // largest absolute eigenvalue.
    let eig = diff.symmetric_eigen();
    let spectral = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    Ok(spectral.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn line(dir: [f64; 2]) -> Subspace {
        let n = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
        Subspace::new(
            Point::new(vec![0.0, 0.0]).unwrap(),
            vec![vec![dir[0] / n, dir[1] / n]],
        )
        .unwrap()
    }

    #[test]
    fn identical_subspaces_have_zero_angle() {
        let u = line([1.0, 0.0]);
        assert!(subspace_angle(&u, &u).unwrap() < 1e-12);
    }

    #[test]
    fn orthogonal_lines_have_angle_one() {
        let u = line([1.0, 0.0]);
        let v = line([0.0, 1.0]);
        assert!((subspace_angle(&u, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lines_at_thirty_degrees() {
        let theta = std::f64::consts::PI / 6.0;
        let u = line([1.0, 0.0]);
        let v = line([theta.cos(), theta.sin()]);
        assert!((subspace_angle(&u, &v).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mismatched_dims_rejected() {
        let u = line([1.0, 0.0]);
        let w = Subspace::new(
            Point::new(vec![0.0, 0.0, 0.0]).unwrap(),
            vec![vec![1.0, 0.0, 0.0]],
        )
        .unwrap();
        assert!(subspace_angle(&u, &w).is_err());
        let plane = Subspace::new(
            Point::new(vec![0.0, 0.0]).unwrap(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert!(subspace_angle(&u, &plane).is_err());
    }
}

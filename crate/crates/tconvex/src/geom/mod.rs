//! Metric primitives: points, clouds, enclosing balls, hull distances,
//! Hausdorff distances and subspace angles.

mod hull;
pub mod meb;
mod subspace;

pub use hull::{dist_point_to_hull, dist_point_to_segment};
pub use meb::{meb_of_slices, min_enclosing_ball};
pub use subspace::subspace_angle;

use crate::error::Error;
use crate::linalg;
use crate::Result;

/// A point of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("point coordinates"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// A finite sample in a common ambient dimension, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    dim: usize,
}

impl PointCloud {
    /// Builds a cloud from row-major coordinates; `data.len()` must be a
    /// positive multiple of `dim`.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("ambient dimension must be at least 1"));
        }
        if data.is_empty() || data.len() % dim != 0 {
            return Err(Error::invalid(format!(
                "flat data of length {} is not a positive multiple of dim {}",
                data.len(),
                dim
            )));
        }
        if data.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PointCloud { data, dim })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput("point cloud"))?;
        let dim = first.dim();
        let mut data = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            data.extend_from_slice(p.coords());
        }
        PointCloud::from_flat(data, dim)
    }

    /// Convenience constructor from per-point rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput("point cloud"))?;
        let dim = first.len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        PointCloud::from_flat(data, dim)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn flat(&self) -> &[f64] {
        &self.data
    }

    /// Cloud with every coordinate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> PointCloud {
        PointCloud {
            data: self.data.iter().map(|x| x * s).collect(),
            dim: self.dim,
        }
    }
}

/// A closed ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::invalid(format!("negative ball radius {radius}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains(&self, p: &[f64], slack: f64) -> bool {
        linalg::dist(self.center.coords(), p) <= self.radius + slack
    }
}

/// A simplex of a cloud: sorted distinct vertex indices together with the
/// smallest enclosing ball of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertex_indices: Vec<usize>,
    meb: Ball,
}

impl Simplex {
    /// Assembles a simplex from parts already known to be valid: `indices`
    /// sorted and distinct, `meb` their enclosing ball.
    pub(crate) fn from_parts(vertex_indices: Vec<usize>, meb: Ball) -> Self {
        debug_assert!(vertex_indices.windows(2).all(|w| w[0] < w[1]));
        Simplex {
            vertex_indices,
            meb,
        }
    }

    /// Builds the simplex on `indices` in `cloud`, computing its enclosing
    /// ball. Indices are sorted and must be distinct.
    pub fn from_cloud(cloud: &PointCloud, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput("simplex vertex set"));
        }
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::invalid("simplex vertices must be distinct"));
        }
        if *sorted.last().unwrap() >= cloud.len() {
            return Err(Error::invalid("simplex vertex index out of range"));
        }
        let pts: Vec<&[f64]> = sorted.iter().map(|&i| cloud.point(i)).collect();
        let meb = meb::meb_of_slices(&pts)?;
        Ok(Simplex {
            vertex_indices: sorted,
            meb,
        })
    }

    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }

    pub fn meb(&self) -> &Ball {
        &self.meb
    }

    /// Number of vertices minus one.
    pub fn dim(&self) -> usize {
        self.vertex_indices.len() - 1
    }
}

/// Direction of a Hausdorff distance computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HausdorffMode {
    /// `d_H(A|B) = sup { d(a, B) : a in A }`.
    Asymmetric,
    /// `max(d_H(A|B), d_H(B|A))`.
    Symmetric,
}

/// Hausdorff distance between finite clouds; exact.
pub fn hausdorff(a: &PointCloud, b: &PointCloud, mode: HausdorffMode) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let one_way = |from: &PointCloud, to: &PointCloud| -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| linalg::dist2(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
            .sqrt()
    };
    Ok(match mode {
        HausdorffMode::Asymmetric => one_way(a, b),
        HausdorffMode::Symmetric => one_way(a, b).max(one_way(b, a)),
    })
}

/// A `d`-dimensional affine subspace given by an orthonormal basis and an
/// origin point.
#[derive(Debug, Clone)]
pub struct Subspace {
    origin: Point,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    pub fn new(origin: Point, basis: Vec<Vec<f64>>) -> Result<Self> {
        let ambient = origin.dim();
        if basis.is_empty() {
            return Err(Error::EmptyInput("subspace basis"));
        }
        let tol = crate::tol::Tolerances::DEFAULT.subspace_ortho;
        for (i, u) in basis.iter().enumerate() {
            if u.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: u.len(),
                });
            }
            if (linalg::norm(u) - 1.0).abs() > tol {
                return Err(Error::invalid(format!(
                    "basis vector {i} is not unit norm"
                )));
            }
            for v in basis.iter().skip(i + 1) {
                if linalg::dot(u, v).abs() > tol {
                    return Err(Error::invalid("basis vectors are not orthogonal"));
                }
            }
        }
        Ok(Subspace { origin, basis })
    }

    pub fn origin(&self) -> &Point {
        &self.origin
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection of `v` (a direction vector) onto the subspace.
    pub fn project_direction(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for u in &self.basis {
            linalg::axpy(&mut out, linalg::dot(u, v), u);
        }
        out
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual_norm(&self, v: &[f64]) -> f64 {
        let proj = self.project_direction(v);
        linalg::dist(v, &proj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_rejects_empty_and_mixed_dims() {
        assert!(PointCloud::from_rows(&[]).is_err());
        assert!(PointCloud::from_rows(&[vec![0.0, 1.0], vec![1.0]]).is_err());
        assert!(PointCloud::from_rows(&[vec![0.0, f64::NAN]]).is_err());
    }

    #[test]
    fn hausdorff_identical_sets_is_zero() {
        let a = PointCloud::from_rows(&[vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(hausdorff(&a, &a, HausdorffMode::Symmetric).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_single_points() {
        let a = PointCloud::from_rows(&[vec![0.0]]).unwrap();
        let b = PointCloud::from_rows(&[vec![1.0]]).unwrap();
        assert_eq!(hausdorff(&a, &b, HausdorffMode::Asymmetric).unwrap(), 1.0);
        assert_eq!(hausdorff(&a, &b, HausdorffMode::Symmetric).unwrap(), 1.0);
    }

    #[test]
    fn hausdorff_asymmetric_directions_differ() {
        let a = PointCloud::from_rows(&[vec![0.0], vec![10.0]]).unwrap();
        let b = PointCloud::from_rows(&[vec![0.0]]).unwrap();
        assert_eq!(hausdorff(&a, &b, HausdorffMode::Asymmetric).unwrap(), 10.0);
        assert_eq!(hausdorff(&b, &a, HausdorffMode::Asymmetric).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_dimension_mismatch() {
        let a = PointCloud::from_rows(&[vec![0.0]]).unwrap();
        let b = PointCloud::from_rows(&[vec![0.0, 0.0]]).unwrap();
        assert!(hausdorff(&a, &b, HausdorffMode::Symmetric).is_err());
    }

    #[test]
    fn simplex_sorts_and_validates_indices() {
        let cloud = PointCloud::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let s = Simplex::from_cloud(&cloud, &[1, 0]).unwrap();
        assert_eq!(s.vertex_indices(), &[0, 1]);
        assert!((s.meb().radius - 1.0).abs() < 1e-12);
        assert!(Simplex::from_cloud(&cloud, &[0, 0]).is_err());
        assert!(Simplex::from_cloud(&cloud, &[7]).is_err());
    }

    #[test]
    fn subspace_requires_orthonormal_basis() {
        let o = Point::new(vec![0.0, 0.0]).unwrap();
        assert!(Subspace::new(o.clone(), vec![vec![1.0, 0.0], vec![1.0, 0.0]]).is_err());
        assert!(Subspace::new(o.clone(), vec![vec![2.0, 0.0]]).is_err());
        assert!(Subspace::new(o, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_ok());
    }
}

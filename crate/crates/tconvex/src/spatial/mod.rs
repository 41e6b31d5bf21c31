//! Neighbor queries over an immutable point cloud.
//!
//! Results are contractually identical to a brute-force scan, including
//! tie-breaks: neighbors are ordered by `(distance, index)`. The acceleration
//! structure is a uniform grid for ambient dimension at most 3 and a
//! vantage-point tree otherwise; both are swappable behind [`NeighborIndex`].

mod grid;
mod vptree;

use crate::error::Error;
use crate::geom::PointCloud;
use crate::linalg;
use crate::Result;

/// An undirected edge of the cloud, `i < j`, with half the segment length.
///
/// Duplicate points produce `half_length == 0`; such edges are retained and
/// reported as degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub half_length: f64,
}

impl Edge {
    pub fn is_degenerate(&self) -> bool {
        self.half_length == 0.0
    }
}

enum Accel {
    Grid(grid::Grid),
    Vp(vptree::VpTree),
}

/// Immutable neighbor-query index over a borrowed cloud.
pub struct NeighborIndex<'a> {
    cloud: &'a PointCloud,
    accel: Accel,
}

impl<'a> NeighborIndex<'a> {
    pub fn new(cloud: &'a PointCloud) -> Self {
        let accel = if cloud.dim() <= 3 {
            Accel::Grid(grid::Grid::build(cloud))
        } else {
            Accel::Vp(vptree::VpTree::build(cloud))
        };
        NeighborIndex { cloud, accel }
    }

    pub fn cloud(&self) -> &PointCloud {
        self.cloud
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.len() == 0
    }

    /// The `k` nearest neighbors of point `i` (excluding `i` itself),
    /// ascending by distance with ties broken by smaller index.
    pub fn knn(&self, i: usize, k: usize) -> Result<Vec<usize>> {
        Ok(self.knn_with_dists(i, k)?.into_iter().map(|(j, _)| j).collect())
    }

    /// As [`NeighborIndex::knn`] but paired with the distances.
    pub fn knn_with_dists(&self, i: usize, k: usize) -> Result<Vec<(usize, f64)>> {
        let n = self.cloud.len();
        if i >= n {
            return Err(Error::invalid(format!("point index {i} out of range")));
        }
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        if k >= n {
            return Err(Error::invalid(format!(
                "k = {k} must be smaller than the cloud size {n}"
            )));
        }
        let q = self.cloud.point(i);
        let mut best = match &self.accel {
            Accel::Grid(g) => g.knn(self.cloud, q, k, Some(i)),
            Accel::Vp(t) => t.knn(self.cloud, q, k, Some(i)),
        };
        best.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        Ok(best.into_iter().map(|(j, d2)| (j, d2.sqrt())).collect())
    }

    /// Nearest point to an arbitrary query location, with its distance.
    pub fn nearest(&self, q: &[f64]) -> Result<(usize, f64)> {
        if q.len() != self.cloud.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cloud.dim(),
                got: q.len(),
            });
        }
        let best = match &self.accel {
            Accel::Grid(g) => g.knn(self.cloud, q, 1, None),
            Accel::Vp(t) => t.knn(self.cloud, q, 1, None),
        };
        let (i, d2) = best
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("cloud is nonempty");
        Ok((i, d2.sqrt()))
    }

    /// Indices of all points within (closed) distance `r` of `q`, ascending.
    pub fn radius(&self, q: &[f64], r: f64) -> Result<Vec<usize>> {
        if q.len() != self.cloud.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cloud.dim(),
                got: q.len(),
            });
        }
        if !(r >= 0.0) {
            return Err(Error::invalid("radius must be nonnegative"));
        }
        let mut out = match &self.accel {
            Accel::Grid(g) => g.radius(self.cloud, q, r),
            Accel::Vp(t) => t.radius(self.cloud, q, r),
        };
        out.sort_unstable();
        Ok(out)
    }

    /// All unordered pairs with half-length at most `max_half_length`, sorted
    /// ascending by `(half_length, i, j)`.
    pub fn edges_within(&self, max_half_length: f64) -> Result<Vec<Edge>> {
        if !(max_half_length >= 0.0) {
            return Err(Error::invalid("max_half_length must be nonnegative"));
        }
        let full = 2.0 * max_half_length;
        let mut edges = Vec::new();
        for i in 0..self.cloud.len() {
            let near = match &self.accel {
                Accel::Grid(g) => g.radius(self.cloud, self.cloud.point(i), full),
                Accel::Vp(t) => t.radius(self.cloud, self.cloud.point(i), full),
            };
            for j in near {
                if j > i {
                    let hl = 0.5 * linalg::dist(self.cloud.point(i), self.cloud.point(j));
                    if hl <= max_half_length {
                        edges.push(Edge {
                            i,
                            j,
                            half_length: hl,
                        });
                    }
                }
            }
        }
        edges.sort_unstable_by(|a, b| {
            a.half_length
                .total_cmp(&b.half_length)
                .then(a.i.cmp(&b.i))
                .then(a.j.cmp(&b.j))
        });
        Ok(edges)
    }

    /// `ℓ_K`: half the maximum distance between a point and its `k`-th
    /// nearest neighbor.
    pub fn horizon_ell_k(&self, k: usize) -> Result<f64> {
        let n = self.cloud.len();
        if k == 0 || k >= n {
            return Err(Error::invalid(format!(
                "k = {k} must satisfy 1 <= k <= n-1 = {}",
                n.saturating_sub(1)
            )));
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            let nn = self.knn_with_dists(i, k)?;
            worst = worst.max(nn[k - 1].1);
        }
        Ok(0.5 * worst)
    }
}

/// Brute-force k-nearest-neighbor reference used by the validation suite.
pub fn knn_brute_force(cloud: &PointCloud, i: usize, k: usize) -> Vec<usize> {
    let q = cloud.point(i);
    let mut all: Vec<(usize, f64)> = (0..cloud.len())
        .filter(|&j| j != i)
        .map(|j| (j, linalg::dist2(q, cloud.point(j))))
        .collect();
    all.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all.into_iter().map(|(j, _)| j).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PointCloud;

    fn line_cloud() -> PointCloud {
        PointCloud::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap()
    }

    #[test]
    fn knn_on_collinear_points() {
        let cloud = line_cloud();
        let idx = NeighborIndex::new(&cloud);
        assert_eq!(idx.knn(0, 1).unwrap(), vec![1]);
        assert_eq!(idx.knn(0, 2).unwrap(), vec![1, 2]);
        assert!(idx.knn(0, 3).is_err());
    }

    #[test]
    fn knn_tie_break_by_smaller_index() {
        let cloud =
            PointCloud::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let idx = NeighborIndex::new(&cloud);
        assert_eq!(idx.knn(0, 2).unwrap(), vec![1, 2]);
    }

    #[test]
    fn edges_within_bounds() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![2.0]]).unwrap();
        let idx = NeighborIndex::new(&cloud);
        assert!(idx.edges_within(0.9).unwrap().is_empty());
        let e = idx.edges_within(1.0).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].i, e[0].j), (0, 1));
        assert!((e[0].half_length - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unit_square_sides_only() {
        let cloud = PointCloud::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let idx = NeighborIndex::new(&cloud);
        let edges = idx.edges_within(0.6).unwrap();
        assert_eq!(edges.len(), 4);
        assert!(edges.iter().all(|e| (e.half_length - 0.5).abs() < 1e-15));
    }

    #[test]
    fn horizon_on_equally_spaced_line() {
        let cloud =
            PointCloud::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let idx = NeighborIndex::new(&cloud);
        assert!((idx.horizon_ell_k(1).unwrap() - 0.5).abs() < 1e-15);
        assert!((idx.horizon_ell_k(2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn horizon_two_points() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![6.0]]).unwrap();
        let idx = NeighborIndex::new(&cloud);
        assert!((idx.horizon_ell_k(1).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn duplicates_are_reported_as_degenerate_edges() {
        let cloud = PointCloud::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        let idx = NeighborIndex::new(&cloud);
        let edges = idx.edges_within(1.0).unwrap();
        assert_eq!(edges.len(), 1);
        assert!(edges[0].is_degenerate());
    }

    #[test]
    fn radius_includes_boundary() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0], vec![2.5]]).unwrap();
        let idx = NeighborIndex::new(&cloud);
        assert_eq!(idx.radius(&[0.0], 1.0).unwrap(), vec![0, 1]);
    }

    #[test]
    fn high_dimensional_path_works() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| (0..10).map(|j| ((i * 31 + j * 17) % 13) as f64).collect())
            .collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let idx = NeighborIndex::new(&cloud);
        for i in 0..cloud.len() {
            assert_eq!(idx.knn(i, 5).unwrap(), knn_brute_force(&cloud, i, 5));
        }
    }
}

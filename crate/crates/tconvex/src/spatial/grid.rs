//! Uniform grid hashing for ambient dimension at most 3.

use crate::geom::PointCloud;
use crate::linalg;
use std::collections::HashMap;

pub struct Grid {
    cell: f64,
    min: [f64; 3],
    // Occupied-cell bounding box in cell coordinates.
    lo: [i64; 3],
    hi: [i64; 3],
    dim: usize,
    cells: HashMap<[i64; 3], Vec<u32>>,
}

impl Grid {
    pub fn build(cloud: &PointCloud) -> Self {
        let dim = cloud.dim();
        debug_assert!(dim <= 3);
        let mut min = [0.0f64; 3];
        let mut max = [0.0f64; 3];
        for a in 0..dim {
            min[a] = f64::INFINITY;
            max[a] = f64::NEG_INFINITY;
        }
        for p in cloud.iter() {
            for a in 0..dim {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
        let extent = (0..dim).map(|a| max[a] - min[a]).fold(0.0f64, f64::max);
        let per_axis = (cloud.len() as f64).powf(1.0 / dim as f64).ceil().max(1.0);
        let cell = if extent > 0.0 { extent / per_axis } else { 1.0 };
        let mut cells: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (i, p) in cloud.iter().enumerate() {
            let key = Self::key_of(p, &min, cell, dim);
            for a in 0..3 {
                lo[a] = lo[a].min(key[a]);
                hi[a] = hi[a].max(key[a]);
            }
            cells.entry(key).or_default().push(i as u32);
        }
        Grid {
            cell,
            min,
            lo,
            hi,
            dim,
            cells,
        }
    }

    fn key_of(p: &[f64], min: &[f64; 3], cell: f64, dim: usize) -> [i64; 3] {
        let mut key = [0i64; 3];
        for a in 0..dim {
            key[a] = ((p[a] - min[a]) / cell).floor() as i64;
        }
        key
    }

    pub fn radius(&self, cloud: &PointCloud, q: &[f64], r: f64) -> Vec<usize> {
        let r2 = r * r;
        let mut out = Vec::new();
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        for a in 0..self.dim {
            lo[a] = (((q[a] - r) - self.min[a]) / self.cell).floor() as i64;
            hi[a] = (((q[a] + r) - self.min[a]) / self.cell).floor() as i64;
            lo[a] = lo[a].max(self.lo[a]);
            hi[a] = hi[a].min(self.hi[a]);
            if lo[a] > hi[a] {
                return out;
            }
        }
        let mut key = [0i64; 3];
        self.visit_box(&lo, &hi, 0, &mut key, &mut |cell_pts| {
            for &i in cell_pts {
                if linalg::dist2(q, cloud.point(i as usize)) <= r2 {
                    out.push(i as usize);
                }
            }
        });
        out
    }

    fn visit_box(
        &self,
        lo: &[i64; 3],
        hi: &[i64; 3],
        axis: usize,
        key: &mut [i64; 3],
        f: &mut impl FnMut(&[u32]),
    ) {
        if axis == self.dim {
            if let Some(pts) = self.cells.get(key) {
                f(pts);
            }
            return;
        }
        for c in lo[axis]..=hi[axis] {
            key[axis] = c;
            self.visit_box(lo, hi, axis + 1, key, f);
        }
    }

    /// k nearest to `q`, optionally excluding one index; returns `(index, d²)`
    /// pairs, unsorted.
    pub fn knn(
        &self,
        cloud: &PointCloud,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
    ) -> Vec<(usize, f64)> {
        let center = Self::key_of(q, &self.min, self.cell, self.dim);
        let mut heap = super::vptree::BoundedHeap::new(k);
        let max_ring = (0..self.dim)
            .map(|a| (center[a] - self.lo[a]).abs().max((self.hi[a] - center[a]).abs()))
            .max()
            .unwrap_or(0);
        for ring in 0..=max_ring {
            if heap.is_full() {
                let min_possible = (ring - 1).max(0) as f64 * self.cell;
                if min_possible * min_possible > heap.worst() {
                    break;
                }
            }
            self.visit_ring(&center, ring, &mut |cell_pts| {
                for &iu in cell_pts {
                    let i = iu as usize;
                    if Some(i) == exclude {
                        continue;
                    }
                    heap.offer(i, linalg::dist2(q, cloud.point(i)));
                }
            });
        }
        heap.into_vec()
    }

    fn visit_ring(&self, center: &[i64; 3], ring: i64, f: &mut impl FnMut(&[u32])) {
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        for a in 0..self.dim {
            lo[a] = (center[a] - ring).max(self.lo[a]);
            hi[a] = (center[a] + ring).min(self.hi[a]);
            if lo[a] > hi[a] {
                return;
            }
        }
        let mut key = [0i64; 3];
        self.visit_ring_rec(center, ring, &lo, &hi, 0, false, &mut key, f);
    }

    #[allow(clippy::too_many_arguments)]
    fn visit_ring_rec(
        &self,
        center: &[i64; 3],
        ring: i64,
        lo: &[i64; 3],
        hi: &[i64; 3],
        axis: usize,
        on_shell: bool,
        key: &mut [i64; 3],
        f: &mut impl FnMut(&[u32]),
    ) {
        if axis == self.dim {
            // Only cells with Chebyshev distance exactly `ring`.
            if on_shell || ring == 0 {
                if let Some(pts) = self.cells.get(key) {
                    f(pts);
                }
            }
            return;
        }
        for c in lo[axis]..=hi[axis] {
            key[axis] = c;
            let shell_here = (c - center[axis]).abs() == ring;
            self.visit_ring_rec(center, ring, lo, hi, axis + 1, on_shell || shell_here, key, f);
        }
    }
}

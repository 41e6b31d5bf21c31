//! Certified supremum of a 1-Lipschitz distance function over a simplex hull.
//!
//! Hierarchical barycentric refinement: a cell (sub-simplex) is scored at its
//! centroid, and `d(centroid) + max_i |centroid - v_i|` upper-bounds the
//! supremum over the cell because `x ↦ d(x, X)` is 1-Lipschitz. Cells are
//! split along their longest edge until the certificate interval is narrower
//! than the requested tolerance.

use crate::linalg;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Outcome of an early-abandoning supremum computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupOutcome {
    /// Certified value (absolute accuracy = the tolerance passed in).
    Value(f64),
    /// The supremum is certified not to exceed the abandon threshold.
    Dominated,
}

struct Cell {
    ub: f64,
    vertices: Vec<Vec<f64>>,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.ub == other.ub
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub.total_cmp(&other.ub)
    }
}

fn min_dist_to(point: &[f64], cloud: &[&[f64]]) -> f64 {
    cloud
        .iter()
        .map(|z| linalg::dist2(point, z))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

fn make_cell_f(vertices: Vec<Vec<f64>>, f: &impl Fn(&[f64]) -> f64, best: &mut f64) -> Cell {
    let dim = vertices[0].len();
    let mut centroid = vec![0.0; dim];
    for v in &vertices {
        linalg::axpy(&mut centroid, 1.0 / vertices.len() as f64, v);
    }
    let val = f(&centroid);
    let radius = vertices
        .iter()
        .map(|v| linalg::dist(&centroid, v))
        .fold(0.0f64, f64::max);
    if val > *best {
        *best = val;
    }
    Cell {
        ub: val + radius,
        vertices,
    }
}

/// Supremum of `x ↦ d(x, cloud)` over `Conv(vertices)`, certified to
/// absolute accuracy `tol`. Returns [`SupOutcome::Dominated`] as soon as the
/// supremum is certified to be at most `abandon_below`.
pub fn sup_dist_over_hull(
    vertices: &[&[f64]],
    cloud: &[&[f64]],
    tol: f64,
    abandon_below: f64,
) -> SupOutcome {
    sup_lipschitz_over_hull(vertices, |p| min_dist_to(p, cloud), tol, abandon_below)
}

/// Supremum over `Conv(vertices)` of an arbitrary 1-Lipschitz function.
pub fn sup_lipschitz_over_hull(
    vertices: &[&[f64]],
    f: impl Fn(&[f64]) -> f64,
    tol: f64,
    abandon_below: f64,
) -> SupOutcome {
    let cloud = f;
    let mut best = 0.0f64;
    // Vertex evaluations seed the lower bound.
    for v in vertices {
        best = best.max(cloud(v));
    }
    let root: Vec<Vec<f64>> = vertices.iter().map(|v| v.to_vec()).collect();
    let mut heap = BinaryHeap::new();
    heap.push(make_cell_f(root, &cloud, &mut best));
    // The split loop halves cell diameters geometrically; the cap only
    // guards against pathological inputs.
    let mut splits_left = 20_000_000usize;
    while let Some(cell) = heap.pop() {
        if cell.ub <= abandon_below && best <= abandon_below {
            return SupOutcome::Dominated;
        }
        if cell.ub <= best + tol {
            // No remaining cell can exceed best + tol.
            return SupOutcome::Value(best);
        }
        if splits_left == 0 {
            return SupOutcome::Value(best);
        }
        splits_left -= 1;
        // Longest-edge bisection.
        let k = cell.vertices.len();
        let (mut bi, mut bj, mut longest) = (0, 1, -1.0f64);
        for i in 0..k {
            for j in i + 1..k {
                let d = linalg::dist2(&cell.vertices[i], &cell.vertices[j]);
                if d > longest {
                    longest = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if longest <= tol * tol * 0.01 {
            // Degenerate cell; its centroid value is already in `best`.
            continue;
        }
        let mid: Vec<f64> = cell.vertices[bi]
            .iter()
            .zip(&cell.vertices[bj])
            .map(|(x, y)| 0.5 * (x + y))
            .collect();
        for replace in [bi, bj] {
            let mut child = cell.vertices.clone();
            child[replace] = mid.clone();
            heap.push(make_cell_f(child, &cloud, &mut best));
        }
    }
    SupOutcome::Value(best)
}

/// Certified supremum of a 1-Lipschitz function along the segment `[a, b]`,
/// specialized to scalar interval bisection with no per-cell allocation.
pub fn sup_lipschitz_on_segment(
    a: &[f64],
    b: &[f64],
    f: impl Fn(&[f64]) -> f64,
    tol: f64,
    abandon_below: f64,
) -> SupOutcome {
    #[derive(PartialEq)]
    struct Seg {
        ub: f64,
        lo: f64,
        hi: f64,
    }
    impl Eq for Seg {}
    impl PartialOrd for Seg {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Seg {
        fn cmp(&self, other: &Self) -> Ordering {
            self.ub
                .total_cmp(&other.ub)
                .then(self.lo.total_cmp(&other.lo))
        }
    }
    let len = linalg::dist(a, b);
    let mut y = vec![0.0; a.len()];
    let eval_at = |s: f64, y: &mut Vec<f64>| -> f64 {
        for ((yi, &ai), &bi) in y.iter_mut().zip(a).zip(b) {
            *yi = ai + s * (bi - ai);
        }
        f(y)
    };
    let mut best = eval_at(0.0, &mut y).max(eval_at(1.0, &mut y));
    let mid_val = eval_at(0.5, &mut y);
    best = best.max(mid_val);
    let mut heap = BinaryHeap::new();
    heap.push(Seg {
        ub: mid_val + 0.5 * len,
        lo: 0.0,
        hi: 1.0,
    });
    while let Some(seg) = heap.pop() {
        if seg.ub <= abandon_below && best <= abandon_below {
            return SupOutcome::Dominated;
        }
        if seg.ub <= best + tol {
            return SupOutcome::Value(best);
        }
        let mid = 0.5 * (seg.lo + seg.hi);
        for (lo, hi) in [(seg.lo, mid), (mid, seg.hi)] {
            let center = 0.5 * (lo + hi);
            let v = eval_at(center, &mut y);
            best = best.max(v);
            heap.push(Seg {
                // Radius of the child interval around its center.
                ub: v + 0.5 * (hi - lo) * len,
                lo,
                hi,
            });
        }
    }
    SupOutcome::Value(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_far_from_single_point() {
        // Cloud is one vertex of the triangle: supremum is the farthest hull
        // point, i.e. the farthest vertex.
        let a = [0.0, 0.0];
        let b = [1.0, 0.0];
        let c = [0.0, 1.0];
        let out = sup_dist_over_hull(&[&a, &b, &c], &[&a], 1e-6, 0.0);
        match out {
            SupOutcome::Value(v) => assert!((v - 1.0).abs() < 1e-5, "v={v}"),
            _ => panic!("expected value"),
        }
    }

    #[test]
    fn triangle_with_cloud_at_vertices() {
        // Equilateral triangle, cloud = vertices: supremum attained at the
        // circumcenter, distance = circumradius.
        let h = 3f64.sqrt() / 2.0;
        let a = [0.0, 0.0];
        let b = [1.0, 0.0];
        let c = [0.5, h];
        let out = sup_dist_over_hull(&[&a, &b, &c], &[&a, &b, &c], 1e-6, 0.0);
        match out {
            SupOutcome::Value(v) => {
                assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-5, "v={v}")
            }
            _ => panic!("expected value"),
        }
    }

    #[test]
    fn segment_supremum_matches_generic_cells() {
        let a = [0.0, 0.0];
        let b = [1.0, 0.0];
        // Distance to a point below the segment: peak at the far end.
        let z = [0.25, -0.5];
        let f = |p: &[f64]| crate::linalg::dist(p, &z);
        let seg = match sup_lipschitz_on_segment(&a, &b, f, 1e-8, 0.0) {
            SupOutcome::Value(v) => v,
            _ => panic!(),
        };
        let gen = match sup_lipschitz_over_hull(&[&a, &b], f, 1e-8, 0.0) {
            SupOutcome::Value(v) => v,
            _ => panic!(),
        };
        let exact = ((1.0f64 - 0.25).powi(2) + 0.25).sqrt();
        assert!((seg - exact).abs() < 1e-6, "seg {seg} vs exact {exact}");
        assert!((seg - gen).abs() < 1e-6);
    }

    #[test]
    fn abandon_threshold_short_circuits() {
        let a = [0.0, 0.0];
        let b = [1.0, 0.0];
        let c = [0.0, 1.0];
        let out = sup_dist_over_hull(&[&a, &b, &c], &[&a, &b, &c], 1e-6, 10.0);
        assert_eq!(out, SupOutcome::Dominated);
    }
}

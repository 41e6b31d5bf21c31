//! User-facing estimators: the reconstructed complex `Conv_d(t, X)`, its
//! Hausdorff risk against a reference manifold, and local tangent spaces.

mod balltree;

use crate::defect::{sup_lipschitz_over_hull, SupOutcome};
use crate::error::Error;
use crate::geom::{meb::diameter_ball, meb::meb_of_slices, Point, PointCloud, Simplex, Subspace};
use crate::linalg;
use crate::manifolds::ManifoldModel;
use crate::spatial::NeighborIndex;
use crate::Result;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// The dimension-capped Čech-style complex: all simplices on the cloud with
/// at most `d_cap + 1` vertices and enclosing-ball radius at most `t`.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    t: f64,
    d_cap: usize,
    n_vertices: usize,
    /// `groups[d]` holds the d-simplices in lexicographic vertex order.
    groups: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn d_cap(&self) -> usize {
        self.d_cap
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn group(&self, dim: usize) -> &[Simplex] {
        &self.groups[dim]
    }

    /// All simplices of all dimensions, vertices first.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.groups.iter().flatten()
    }

    pub fn count(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }

    /// Structural check: radius bound and closure under faces.
    pub fn validate(&self) -> Result<()> {
        use std::collections::HashSet;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for s in self.simplices() {
            if s.meb().radius > self.t * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::invalid(format!(
                    "simplex radius {} exceeds the scale {}",
                    s.meb().radius,
                    self.t
                )));
            }
            seen.insert(s.vertex_indices().to_vec());
        }
        if self.groups[0].len() != self.n_vertices {
            return Err(Error::invalid("vertex set must equal the whole cloud"));
        }
        for s in self.simplices() {
            let verts = s.vertex_indices();
            if verts.len() < 2 {
                continue;
            }
            for drop in 0..verts.len() {
                let mut face: Vec<usize> = verts.to_vec();
                face.remove(drop);
                if !seen.contains(&face) {
                    return Err(Error::invalid("complex is not closed under faces"));
                }
            }
        }
        Ok(())
    }

    /// JSON document: `{"t", "d_cap", "simplices": {"0": [[i]...], ...}}`
    /// with vertex indices in input row order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut groups = BTreeMap::new();
        for (d, g) in self.groups.iter().enumerate() {
            let list: Vec<Vec<usize>> =
                g.iter().map(|s| s.vertex_indices().to_vec()).collect();
            groups.insert(d.to_string(), list);
        }
        serde_json::json!({
            "t": self.t,
            "d_cap": self.d_cap,
            "simplices": groups,
        })
    }
}

/// Builds `Conv_d(t, cloud)`: cliques of the `2t`-neighborhood graph with up
/// to `d_cap + 1` vertices, kept when their enclosing-ball radius is at most
/// `t`. Enumeration runs per seed vertex (the smallest vertex of each
/// clique), so the merge order is deterministic; the radius filter prunes
/// whole branches because the enclosing radius only grows with the clique.
pub fn reconstruct(cloud: &PointCloud, t: f64, d_cap: usize) -> Result<SimplicialComplex> {
    if !(t >= 0.0) {
        return Err(Error::invalid("scale t must be nonnegative"));
    }
    let dim = cloud.dim();
    if d_cap == 0 || d_cap > dim {
        return Err(Error::invalid(format!(
            "d_cap = {d_cap} must satisfy 1 <= d_cap <= ambient dim {dim}"
        )));
    }
    let n = cloud.len();
    let index = NeighborIndex::new(cloud);
    let edges = index.edges_within(t)?;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in &edges {
        adj[e.i].push(e.j as u32);
        adj[e.j].push(e.i as u32);
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
    }

    let mut groups: Vec<Vec<Simplex>> = vec![Vec::new(); d_cap + 1];
    for i in 0..n {
        groups[0].push(Simplex::from_cloud(cloud, &[i])?);
    }
    if d_cap >= 1 {
        let per_seed: Vec<Vec<Vec<Simplex>>> = (0..n)
            .into_par_iter()
            .map(|seed| {
                let mut local: Vec<Vec<Simplex>> = vec![Vec::new(); d_cap + 1];
                let later: Vec<u32> = adj[seed]
                    .iter()
                    .copied()
                    .filter(|&j| j as usize > seed)
                    .collect();
                for &j in &later {
                    let ball = diameter_ball(cloud.point(seed), cloud.point(j as usize));
                    if ball.radius <= t {
                        let mut clique = vec![seed, j as usize];
                        local[1].push(Simplex::from_parts(clique.clone(), ball));
                        if d_cap >= 2 {
                            let ext: Vec<u32> = intersect_gt(&later, &adj[j as usize], j);
                            extend_cliques(cloud, t, d_cap, &adj, &mut clique, ext, &mut local);
                        }
                    }
                }
                local
            })
            .collect();
        for local in per_seed {
            for (d, g) in local.into_iter().enumerate() {
                groups[d].extend(g);
            }
        }
    }
    for g in groups.iter_mut() {
        g.sort_unstable_by(|a, b| a.vertex_indices().cmp(b.vertex_indices()));
    }
    Ok(SimplicialComplex {
        t,
        d_cap,
        n_vertices: n,
        groups,
    })
}

/// Sorted intersection of `a` with the members of `b` greater than `cut`.
fn intersect_gt(a: &[u32], b: &[u32], cut: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                if a[x] > cut {
                    out.push(a[x]);
                }
                x += 1;
                y += 1;
            }
        }
    }
    out
}

fn extend_cliques(
    cloud: &PointCloud,
    t: f64,
    d_cap: usize,
    adj: &[Vec<u32>],
    clique: &mut Vec<usize>,
    candidates: Vec<u32>,
    out: &mut [Vec<Simplex>],
) {
    for (pos, &v) in candidates.iter().enumerate() {
        clique.push(v as usize);
        let pts: Vec<&[f64]> = clique.iter().map(|&i| cloud.point(i)).collect();
        let ball = if pts.len() == 3 {
            crate::geom::meb::meb3(pts[0], pts[1], pts[2])
        } else {
            meb_of_slices(&pts).expect("nonempty clique")
        };
        if ball.radius <= t {
            out[clique.len() - 1].push(Simplex::from_parts(clique.clone(), ball));
            if clique.len() <= d_cap {
                let ext = intersect_gt(&candidates[pos + 1..], &adj[v as usize], v);
                extend_cliques(cloud, t, d_cap, adj, clique, ext, out);
            }
        }
        clique.pop();
    }
}

/// Hausdorff distance between the complex and a reference manifold, within
/// about `resolution` on both sides.
///
/// Complex-to-manifold: certified Lipschitz refinement per simplex with a
/// shared running maximum. Manifold-to-complex: a reference net queried
/// against a ball tree over the simplex enclosing balls, with early exit for
/// net points that cannot raise the maximum.
pub fn reconstruction_risk(
    complex: &SimplicialComplex,
    cloud: &PointCloud,
    model: &ManifoldModel,
    resolution: f64,
) -> Result<f64> {
    if !(resolution > 0.0) {
        return Err(Error::invalid("resolution must be positive"));
    }

    // Direction 1: farthest hull point from M. Simplices share a running
    // maximum through an atomic: a simplex abandoned against a stale (lower)
    // threshold is certified below that threshold, hence below the final
    // maximum, so the result does not depend on scheduling.
    let vertex_dist: Vec<f64> = (0..cloud.len())
        .into_par_iter()
        .map(|i| model.distance_to(cloud.point(i)))
        .collect();
    let seed_max = vertex_dist.iter().fold(0.0f64, |a, &b| a.max(b));
    let running = AtomicMax::new(seed_max);
    let mut order: Vec<&Simplex> = complex.simplices().filter(|s| s.dim() >= 1).collect();
    order.sort_unstable_by(|a, b| b.meb().radius.total_cmp(&a.meb().radius));
    order.par_iter().for_each(|s| {
        let local = running.load();
        let worst_vertex = s
            .vertex_indices()
            .iter()
            .map(|&i| vertex_dist[i])
            .fold(0.0f64, f64::max);
        if s.meb().radius + worst_vertex <= local {
            return;
        }
        let verts: Vec<&[f64]> = s
            .vertex_indices()
            .iter()
            .map(|&i| cloud.point(i))
            .collect();
        let sup = if verts.len() == 2 {
            crate::defect::sup_lipschitz_on_segment(
                verts[0],
                verts[1],
                |p| model.distance_to(p),
                resolution,
                local,
            )
        } else {
            sup_lipschitz_over_hull(&verts, |p| model.distance_to(p), resolution, local)
        };
        if let SupOutcome::Value(v) = sup {
            running.fetch_max(v);
        }
    });
    let to_manifold = running.load();

    // Direction 2: farthest manifold point from the complex. Skipped or
    // truncated evaluations are bounded by the running maximum and cannot
    // change it, so the atomic sharing stays deterministic here too.
    let net = model.reference_net(resolution)?;
    let vertex_index = NeighborIndex::new(cloud);
    let tree = balltree::SimplexBallTree::build(complex, cloud);
    let mut net_gaps: Vec<(f64, usize)> = (0..net.len())
        .into_par_iter()
        .map(|m| {
            let (_, d) = vertex_index.nearest(net.point(m)).expect("net point");
            (d, m)
        })
        .collect();
    net_gaps.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));
    let from = AtomicMax::new(0.0);
    net_gaps.par_iter().for_each(|&(gap, m)| {
        let current = from.load();
        if gap <= current {
            return; // within `gap` of a vertex, cannot raise the maximum
        }
        let d = tree.min_hull_distance(net.point(m), cloud, gap, current);
        from.fetch_max(d.min(gap));
    });
    let from_manifold = from.load();

    Ok(to_manifold.max(from_manifold))
}

/// Maximum accumulator over nonnegative floats; positive IEEE doubles order
/// like their bit patterns, so `fetch_max` on the bits is exact.
struct AtomicMax(std::sync::atomic::AtomicU64);

impl AtomicMax {
    fn new(v: f64) -> Self {
        AtomicMax(std::sync::atomic::AtomicU64::new(v.max(0.0).to_bits()))
    }

    fn load(&self) -> f64 {
        f64::from_bits(self.0.load(std::sync::atomic::Ordering::Relaxed))
    }

    fn fetch_max(&self, v: f64) {
        if v > 0.0 {
            self.0
                .fetch_max(v.to_bits(), std::sync::atomic::Ordering::Relaxed);
        }
    }
}

/// Tangent-space estimate at `X_i` from neighbors within distance `t`.
///
/// Default estimator: top-`d` principal directions of the displacement
/// matrix centered at `X_i`. The optional refinement pass reweights toward
/// the worst residuals to shrink the sup-norm fit and is kept only when it
/// strictly improves.
pub fn tangent_estimate(
    cloud: &PointCloud,
    index: &NeighborIndex,
    i: usize,
    t: f64,
    d: usize,
    refine: bool,
) -> Result<Subspace> {
    let ambient = cloud.dim();
    if d == 0 || d > ambient {
        return Err(Error::invalid(format!(
            "intrinsic dimension {d} out of range for ambient {ambient}"
        )));
    }
    let origin = Point::new(cloud.point(i).to_vec())?;
    if d == ambient {
        let basis: Vec<Vec<f64>> = (0..d)
            .map(|k| {
                let mut v = vec![0.0; ambient];
                v[k] = 1.0;
                v
            })
            .collect();
        return Subspace::new(origin, basis);
    }
    let mut neighbors = index.radius(cloud.point(i), t)?;
    neighbors.retain(|&j| j != i);
    if neighbors.len() < d + 1 {
        return Err(Error::InsufficientNeighbors {
            needed: d + 1,
            found: neighbors.len(),
        });
    }
    let rows: Vec<Vec<f64>> = neighbors
        .iter()
        .map(|&j| linalg::sub(cloud.point(j), cloud.point(i)))
        .collect();
    let basis = principal_directions(&rows, None, d);
    let mut best_basis = basis;
    if refine {
        let sup_residual = |basis: &[Vec<f64>]| -> f64 {
            rows.iter()
                .map(|r| residual_norm(r, basis))
                .fold(0.0f64, f64::max)
        };
        let mut best = sup_residual(&best_basis);
        let mut current = best_basis.clone();
        for _ in 0..20 {
            let residuals: Vec<f64> = rows.iter().map(|r| residual_norm(r, &current)).collect();
            let max_r = residuals.iter().fold(0.0f64, |a, &b| a.max(b));
            if max_r == 0.0 {
                break;
            }
            let weights: Vec<f64> = residuals
                .iter()
                .map(|r| (r / max_r).max(0.05))
                .collect();
            current = principal_directions(&rows, Some(&weights), d);
            let s = sup_residual(&current);
            if s < best {
                best = s;
                best_basis = current.clone();
            }
        }
    }
    Subspace::new(origin, best_basis)
}

fn residual_norm(row: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut proj = vec![0.0; row.len()];
    for b in basis {
        linalg::axpy(&mut proj, linalg::dot(b, row), b);
    }
    linalg::dist(row, &proj)
}

/// Top-`d` right singular directions of the (optionally row-weighted)
/// displacement matrix, re-orthonormalized.
fn principal_directions(rows: &[Vec<f64>], weights: Option<&[f64]>, d: usize) -> Vec<Vec<f64>> {
    let ambient = rows[0].len();
    let mat = DMatrix::from_fn(rows.len(), ambient, |r, c| {
        rows[r][c] * weights.map(|w| w[r]).unwrap_or(1.0)
    });
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut ranked: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, k))
        .collect();
    ranked.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for &(_, k) in ranked.iter().take(d) {
        let mut v: Vec<f64> = vt.row(k).iter().copied().collect();
        for b in &basis {
            let c = linalg::dot(&v, b);
            linalg::axpy(&mut v, -c, b);
        }
        let n = linalg::norm(&v);
        basis.push(v.into_iter().map(|x| x / n).collect());
    }
    basis
}

/// Oracle scale of the fixed-`t` estimator:
/// `t_n = (7/4) (3 ln n / (α_d f_min n))^{1/d}` with `α_d` the unit-ball
/// volume.
pub fn oracle_scale(n: usize, d: usize, f_min: f64) -> Result<f64> {
    if n < 2 || d == 0 || !(f_min > 0.0) {
        return Err(Error::invalid("oracle scale needs n >= 2, d >= 1, f_min > 0"));
    }
    let alpha_d = unit_ball_volume(d);
    Ok(1.75 * (3.0 * (n as f64).ln() / (alpha_d * f_min * n as f64)).powf(1.0 / d as f64))
}

/// Volume of the unit ball in dimension `d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // α_d = π^{d/2} / Γ(d/2 + 1), via the recurrence α_d = α_{d-2} · 2π/d.
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * std::f64::consts::TAU / d as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PointCloud {
        PointCloud::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn far_points_give_vertices_only() {
        let cloud = PointCloud::from_rows(&[vec![0.0, 0.0], vec![10.0, 0.0]]).unwrap();
        let c = reconstruct(&cloud, 1.0, 2).unwrap();
        assert_eq!(c.group(0).len(), 2);
        assert_eq!(c.group(1).len(), 0);
        c.validate().unwrap();
    }

    #[test]
    fn square_at_half_scale_has_sides_only() {
        let c = reconstruct(&square(), 0.5, 2).unwrap();
        assert_eq!(c.group(0).len(), 4);
        assert_eq!(c.group(1).len(), 4);
        assert_eq!(c.group(2).len(), 0);
        c.validate().unwrap();
    }

    #[test]
    fn near_equilateral_triple_fills_at_circumradius() {
        let side: f64 = 1.0;
        let h = side * 3f64.sqrt() / 2.0;
        let cloud =
            PointCloud::from_rows(&[vec![0.0, 0.0], vec![side, 0.0], vec![side / 2.0, h]])
                .unwrap();
        let circum = side / 3f64.sqrt();
        let c = reconstruct(&cloud, circum * 1.001, 2).unwrap();
        assert_eq!(c.group(2).len(), 1);
        let c2 = reconstruct(&cloud, circum * 0.999, 2).unwrap();
        assert_eq!(c2.group(2).len(), 0);
        assert_eq!(c2.group(1).len(), 3);
    }

    #[test]
    fn monotone_in_t() {
        let cloud = square();
        let small = reconstruct(&cloud, 0.5, 2).unwrap();
        let large = reconstruct(&cloud, 0.8, 2).unwrap();
        for d in 0..=2 {
            let keys: std::collections::HashSet<Vec<usize>> = large
                .group(d)
                .iter()
                .map(|s| s.vertex_indices().to_vec())
                .collect();
            for s in small.group(d) {
                assert!(keys.contains(s.vertex_indices()));
            }
        }
    }

    #[test]
    fn zero_scale_keeps_vertices_only() {
        let c = reconstruct(&square(), 0.0, 2).unwrap();
        assert_eq!(c.count(), 4);
    }

    #[test]
    fn json_shape() {
        let c = reconstruct(&square(), 0.5, 2).unwrap();
        let v = c.to_json();
        assert_eq!(v["t"], 0.5);
        assert_eq!(v["d_cap"], 2);
        assert_eq!(v["simplices"]["0"].as_array().unwrap().len(), 4);
        assert_eq!(v["simplices"]["1"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn tangent_of_collinear_data_is_the_line() {
        let rows: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![i as f64 * 0.1, 2.0 * i as f64 * 0.1])
            .collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let index = NeighborIndex::new(&cloud);
        let sub = tangent_estimate(&cloud, &index, 0, 2.0, 1, false).unwrap();
        let dir = &sub.basis()[0];
        let expected = [1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt()];
        let aligned = (dir[0] * expected[0] + dir[1] * expected[1]).abs();
        assert!((aligned - 1.0).abs() < 1e-10);
        for row in rows.iter() {
            let disp = linalg::sub(row, cloud.point(0));
            assert!(sub.residual_norm(&disp) < 1e-10);
        }
    }

    #[test]
    fn tangent_full_dimension_is_identity() {
        let cloud = square();
        let index = NeighborIndex::new(&cloud);
        let sub = tangent_estimate(&cloud, &index, 0, 2.0, 2, false).unwrap();
        assert_eq!(sub.basis().len(), 2);
        assert!(sub.residual_norm(&[0.3, -0.7]) < 1e-12);
    }

    #[test]
    fn tangent_needs_enough_neighbors() {
        let cloud = square();
        let index = NeighborIndex::new(&cloud);
        assert!(matches!(
            tangent_estimate(&cloud, &index, 0, 0.1, 1, false),
            Err(Error::InsufficientNeighbors { .. })
        ));
    }

    #[test]
    fn oracle_scale_matches_formula_for_d_one() {
        let t = oracle_scale(500, 1, 1.0 / std::f64::consts::TAU).unwrap();
        let manual = 1.75 * 3.0 * std::f64::consts::PI * (500f64).ln() / 500.0;
        assert!((t - manual).abs() < 1e-12);
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    }
}

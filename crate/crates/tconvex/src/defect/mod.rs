//! Convexity defect profiles and the selected scale `t_λ`.
//!
//! The defect of a finite set at scale `t` is the Hausdorff distance between
//! its `t`-convex hull and the set itself. It is piecewise constant in `t`,
//! changing value only at radii of subsets, so a profile is stored as sorted
//! breakpoints with the running-maximum defect value at each.

mod envelope;
mod supremum;

pub use envelope::segment_defect_sup;
pub use supremum::{
    sup_dist_over_hull, sup_lipschitz_on_segment, sup_lipschitz_over_hull, SupOutcome,
};

use crate::error::Error;
use crate::geom::{meb::meb_of_slices, PointCloud};
use crate::spatial::NeighborIndex;
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Full (all simplices) or graph (edges only) profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Full,
    Graph,
}

/// Piecewise-constant convexity defect function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefectProfile {
    pub kind: ProfileKind,
    /// Largest scale the profile covers: `ℓ_K` for graph profiles, `null`
    /// (unbounded) for full profiles.
    #[serde(
        serialize_with = "ser_horizon",
        deserialize_with = "de_horizon"
    )]
    pub horizon: f64,
    /// Strictly increasing positive radii at which the value may change.
    pub breakpoints: Vec<f64>,
    /// Nondecreasing defect values, one per breakpoint; `values[m] <= breakpoints[m]`.
    pub values: Vec<f64>,
}

fn ser_horizon<S: serde::Serializer>(h: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if h.is_finite() {
        s.serialize_some(h)
    } else {
        s.serialize_none()
    }
}

fn de_horizon<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let v: Option<f64> = Option::deserialize(d)?;
    Ok(v.unwrap_or(f64::INFINITY))
}

/// Result of a `t_λ` evaluation. `saturated` means no breakpoint within the
/// horizon qualified, in which case `t` is the horizon itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TLambda {
    pub t: f64,
    pub saturated: bool,
}

impl DefectProfile {
    /// Assembles a profile from `(radius, defect)` events: sorts by radius,
    /// merges equal radii, and applies the running maximum.
    fn from_events(
        kind: ProfileKind,
        horizon: f64,
        mut events: Vec<(f64, f64)>,
    ) -> Result<DefectProfile> {
        events.retain(|&(r, _)| r > 0.0);
        events.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut breakpoints = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut running = 0.0f64;
        for (r, d) in events {
            running = running.max(d);
            if breakpoints.last() == Some(&r) {
                let last = values.last_mut().unwrap();
                *last = running.max(*last);
            } else {
                breakpoints.push(r);
                values.push(running);
            }
        }
        let mut profile = DefectProfile {
            kind,
            horizon,
            breakpoints,
            values,
        };
        profile.clamp_and_validate()?;
        Ok(profile)
    }

    /// Enforces `0 <= h(t) <= t` and monotonicity, tolerating only
    /// floating-point slack.
    fn clamp_and_validate(&mut self) -> Result<()> {
        let mut prev = 0.0f64;
        for (b, v) in self.breakpoints.iter().zip(self.values.iter_mut()) {
            if !(*v >= 0.0) {
                return Err(Error::invalid("negative defect value"));
            }
            if *v > *b {
                if *v > *b * (1.0 + 1e-9) + 1e-12 {
                    return Err(Error::invalid(format!(
                        "defect {v} exceeds its scale {b}"
                    )));
                }
                *v = *b;
            }
            if *v < prev {
                return Err(Error::invalid("defect values must be nondecreasing"));
            }
            prev = *v;
            if *b > self.horizon * (1.0 + 1e-12) {
                return Err(Error::invalid("breakpoint beyond the horizon"));
            }
        }
        Ok(())
    }

    /// Value of the step function at `t`: the value at the largest breakpoint
    /// `<= t`, zero below the first breakpoint.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("scale t = {t} must be nonnegative")));
        }
        if t > self.horizon {
            return Err(Error::BeyondHorizon {
                t,
                horizon: self.horizon,
            });
        }
        let pos = self.breakpoints.partition_point(|&b| b <= t);
        Ok(if pos == 0 { 0.0 } else { self.values[pos - 1] })
    }

    /// First breakpoint `t` with `h(t) <= λ t`; the horizon with a saturation
    /// flag when none qualifies.
    pub fn t_lambda(&self, lambda: f64) -> Result<TLambda> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::invalid(format!(
                "lambda = {lambda} must lie in (0, 1]"
            )));
        }
        if self.breakpoints.is_empty() {
            return Err(Error::EmptyInput("defect profile has no breakpoints"));
        }
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            if *v <= lambda * *b {
                return Ok(TLambda {
                    t: *b,
                    saturated: false,
                });
            }
        }
        Ok(TLambda {
            t: self.horizon,
            saturated: true,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// `(t, h)` rows for plot output.
    pub fn steps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&b, &v)| (b, v))
    }
}

/// Edge-based convexity defect profile computed up to the horizon `ℓ_K`.
///
/// For each edge `(i, j)` with half-length `r <= ℓ_K`, the supremum over the
/// segment of the distance to the cloud is computed over the candidate set
/// `knn(i) ∪ knn(j) ∪ {i, j}`. Any minimizer for a segment point lies within
/// `3r` of `X_i`, so when the k-NN ball of `X_i` does not cover that radius
/// the candidates fall back to a radius query around the edge midpoint,
/// keeping the computation exact rather than heuristic.
pub fn graph_defect_profile(
    cloud: &PointCloud,
    index: &NeighborIndex,
    k: usize,
) -> Result<DefectProfile> {
    let n = cloud.len();
    if k == 0 || k >= n {
        return Err(Error::invalid(format!(
            "k = {k} must satisfy 1 <= k <= n-1 = {}",
            n.saturating_sub(1)
        )));
    }
    let knn: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| index.knn_with_dists(i, k))
        .collect::<Result<_>>()?;
    let ell = knn
        .iter()
        .map(|nn| nn[k - 1].1)
        .fold(0.0f64, f64::max)
        * 0.5;
    let edges = index.edges_within(ell)?;

    let events: Vec<(f64, f64)> = edges
        .par_iter()
        .map(|e| {
            let r = e.half_length;
            if r == 0.0 {
                return Ok((0.0, 0.0));
            }
            let a = cloud.point(e.i);
            let b = cloud.point(e.j);
            let mut cand: Vec<usize>;
            if knn[e.i][k - 1].1 > 3.0 * r {
                cand = knn[e.i].iter().map(|&(j, _)| j).collect();
                cand.extend(knn[e.j].iter().map(|&(j, _)| j));
            } else {
                let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
                cand = index.radius(&mid, 3.0 * r)?;
            }
            cand.push(e.i);
            cand.push(e.j);
            cand.sort_unstable();
            cand.dedup();
            let coords: Vec<&[f64]> = cand.iter().map(|&j| cloud.point(j)).collect();
            Ok((r, segment_defect_sup(a, b, &coords)))
        })
        .collect::<Result<_>>()?;

    DefectProfile::from_events(ProfileKind::Graph, ell, events)
}

/// Exhaustive convexity defect profile for small clouds (`n <= 15`).
///
/// Breakpoints are the radii of every subset of size at least two. Values
/// only need subsets of at most `D + 1` vertices: any hull point lies in the
/// hull of an affinely independent subset of that size with no larger radius
/// (Carathéodory), so larger subsets contribute breakpoints but no new
/// suprema.
pub fn full_defect_profile(cloud: &PointCloud) -> Result<DefectProfile> {
    let n = cloud.len();
    if n > 15 {
        return Err(Error::TooLarge(format!(
            "full profile enumerates all subsets; n = {n} exceeds 15"
        )));
    }
    let dim = cloud.dim();
    let tol = crate::tol::Tolerances::DEFAULT.full_profile_sup;
    let pts: Vec<&[f64]> = (0..n).map(|i| cloud.point(i)).collect();

    // Radii of all subsets, remembering which are small enough to carry
    // supremum values.
    let mut radius_events: Vec<(f64, Option<Vec<usize>>)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let chosen: Vec<&[f64]> = members.iter().map(|&i| pts[i]).collect();
        let ball = meb_of_slices(&chosen)?;
        let carrier = if size <= dim + 1 { Some(members) } else { None };
        radius_events.push((ball.radius, carrier));
    }
    radius_events.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut events: Vec<(f64, f64)> = Vec::with_capacity(radius_events.len());
    let mut running = 0.0f64;
    for (r, carrier) in radius_events {
        let mut value = 0.0;
        if let Some(members) = carrier {
            // A subset of radius r contributes at most r (its hull stays
            // within r of its own vertices), so skip once dominated.
            if r > running {
                let chosen: Vec<&[f64]> = members.iter().map(|&i| pts[i]).collect();
                value = match chosen.len() {
                    2 => segment_defect_sup(chosen[0], chosen[1], &pts),
                    _ => match sup_dist_over_hull(&chosen, &pts, tol, running) {
                        SupOutcome::Value(v) => v,
                        SupOutcome::Dominated => 0.0,
                    },
                };
                running = running.max(value);
            }
        }
        events.push((r, value));
    }
    DefectProfile::from_events(ProfileKind::Full, f64::INFINITY, events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::NeighborIndex;

    fn profile_of(rows: &[Vec<f64>], k: usize) -> DefectProfile {
        let cloud = PointCloud::from_rows(rows).unwrap();
        let index = NeighborIndex::new(&cloud);
        graph_defect_profile(&cloud, &index, k).unwrap()
    }

    #[test]
    fn pair_has_single_breakpoint_with_value_equal_to_scale() {
        let p = profile_of(&[vec![0.0], vec![2.0]], 1);
        assert_eq!(p.breakpoints, vec![1.0]);
        assert!((p.values[0] - 1.0).abs() < 1e-12);
        assert_eq!(p.horizon, 1.0);
    }

    #[test]
    fn collinear_three_points() {
        let p = profile_of(&[vec![0.0], vec![1.0], vec![2.0]], 2);
        assert_eq!(p.breakpoints, vec![0.5, 1.0]);
        assert!((p.values[0] - 0.5).abs() < 1e-12);
        // The long edge's hull passes through the middle sample point.
        assert!((p.values[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eval_is_a_right_continuous_step_function() {
        let p = profile_of(&[vec![0.0], vec![1.0], vec![2.0]], 2);
        assert_eq!(p.eval(0.3).unwrap(), 0.0);
        assert_eq!(p.eval(0.5).unwrap(), 0.5);
        assert_eq!(p.eval(0.7).unwrap(), 0.5);
        assert_eq!(p.eval(1.0).unwrap(), 0.5);
        assert!(p.eval(1.5).is_err());
        assert!(p.eval(-0.1).is_err());
    }

    #[test]
    fn t_lambda_on_collinear_points() {
        let p = profile_of(&[vec![0.0], vec![1.0], vec![2.0]], 2);
        // h(0.5) = 0.5 > 0.6*0.5, h(1) = 0.5 <= 0.6.
        let r = p.t_lambda(0.6).unwrap();
        assert_eq!(r.t, 1.0);
        assert!(!r.saturated);
    }

    #[test]
    fn t_lambda_one_gives_first_breakpoint() {
        let p = profile_of(&[vec![0.0], vec![1.0], vec![2.0]], 2);
        let r = p.t_lambda(1.0).unwrap();
        assert_eq!(r.t, 0.5);
        assert!(!r.saturated);
    }

    #[test]
    fn pair_saturates_below_lambda_one() {
        let p = profile_of(&[vec![0.0], vec![2.0]], 1);
        let r = p.t_lambda(0.5).unwrap();
        assert!(r.saturated);
        assert_eq!(r.t, p.horizon);
    }

    #[test]
    fn t_lambda_rejects_bad_lambda() {
        let p = profile_of(&[vec![0.0], vec![2.0]], 1);
        assert!(p.t_lambda(0.0).is_err());
        assert!(p.t_lambda(1.5).is_err());
    }

    #[test]
    fn full_profile_pair() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![2.0]]).unwrap();
        let p = full_defect_profile(&cloud).unwrap();
        assert_eq!(p.breakpoints, vec![1.0]);
        assert!((p.eval(1.0).unwrap() - 1.0).abs() < 1e-9);
        assert!(p.horizon.is_infinite());
    }

    #[test]
    fn full_profile_singleton_is_identically_zero() {
        let cloud = PointCloud::from_rows(&[vec![3.0, 1.0]]).unwrap();
        let p = full_defect_profile(&cloud).unwrap();
        assert!(p.breakpoints.is_empty());
        assert_eq!(p.eval(123.0).unwrap(), 0.0);
    }

    #[test]
    fn full_profile_refuses_large_clouds() {
        let rows: Vec<Vec<f64>> = (0..16).map(|i| vec![i as f64]).collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        assert!(full_defect_profile(&cloud).is_err());
    }

    #[test]
    fn graph_rejects_bad_k() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let index = NeighborIndex::new(&cloud);
        assert!(graph_defect_profile(&cloud, &index, 2).is_err());
        assert!(graph_defect_profile(&cloud, &index, 0).is_err());
    }

    #[test]
    fn profile_serializes_round_trip() {
        let p = profile_of(&[vec![0.0], vec![1.0], vec![2.0]], 2);
        let s = serde_json::to_string(&p).unwrap();
        let q: DefectProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(p.breakpoints, q.breakpoints);
        assert_eq!(p.values, q.values);
        assert_eq!(p.horizon, q.horizon);

        let cloud = PointCloud::from_rows(&[vec![0.0], vec![2.0]]).unwrap();
        let full = full_defect_profile(&cloud).unwrap();
        let s = serde_json::to_string(&full).unwrap();
        assert!(s.contains("\"horizon\":null"));
        let q: DefectProfile = serde_json::from_str(&s).unwrap();
        assert!(q.horizon.is_infinite());
    }
}

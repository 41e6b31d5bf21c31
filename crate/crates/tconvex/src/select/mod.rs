//! Data-driven scale selection: the jump heuristic on `λ ↦ 1/t_λ` and the
//! adaptive K-doubling horizon.
//!
//! The defect profile is only computed up to the horizon `ℓ_K`. If the
//! selected scale hits the horizon (or no jump is visible), the computation
//! did not look far enough and `K` is doubled.

use crate::defect::{graph_defect_profile, DefectProfile, TLambda};
use crate::error::Error;
use crate::geom::PointCloud;
use crate::spatial::NeighborIndex;
use crate::Result;
use serde::Serialize;

/// Tuning knobs for [`select_scale`]; the defaults reproduce the published
/// procedure.
#[derive(Debug, Clone, Copy)]
pub struct SelectConfig {
    /// Initial neighbor count.
    pub k0: usize,
    /// Spacing of the λ grid on `[0, 1]`.
    pub grid_step: f64,
    /// Cap on the escalated `K`; clamped to `n - 1`.
    pub max_k: Option<usize>,
    /// Jump threshold factor on `g` increments.
    pub jump_factor: f64,
    /// `λ_choice = choice_factor · λ_jump`.
    pub choice_factor: f64,
    /// λ used when no jump is ever detected.
    pub fallback_lambda: f64,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            k0: 16,
            grid_step: 0.01,
            max_k: None,
            jump_factor: 0.5,
            choice_factor: 0.8,
            fallback_lambda: 0.5,
        }
    }
}

/// One escalation step of the K-doubling loop.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KTraceEntry {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "ellK")]
    pub ell_k: f64,
    pub saturated: bool,
}

/// Outcome of the selection procedure.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionResult {
    pub lambda_grid: Vec<f64>,
    pub g_values: Vec<f64>,
    pub jump_index: Option<usize>,
    pub lambda_choice: f64,
    pub t_sel: f64,
    pub converged: bool,
    #[serde(rename = "K_trace")]
    pub k_trace: Vec<KTraceEntry>,
    /// Profile from the final K; emitted separately, not in the JSON record.
    #[serde(skip_serializing)]
    pub profile: DefectProfile,
}

/// `g(λ) = 1 / t_λ` over an ascending grid in `[0, 1]`.
///
/// `λ = 0` is allowed and uses the saturation convention `t_0 = horizon`,
/// which also applies whenever no breakpoint qualifies.
pub fn g_curve(profile: &DefectProfile, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyInput("lambda grid"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] < 0.0 || *grid.last().unwrap() > 1.0 {
        return Err(Error::invalid(
            "lambda grid must be strictly ascending within [0, 1]",
        ));
    }
    grid.iter()
        .map(|&l| {
            let t = if l == 0.0 {
                profile.horizon
            } else {
                profile.t_lambda(l)?.t
            };
            Ok(1.0 / t)
        })
        .collect()
}

/// Smallest index `l` with `g(λ_{l+1}) - g(λ_l) > jump_factor · g(λ_1)`,
/// where `λ_1` is the grid minimum (standing in for `g(0)`).
pub fn detect_jump(g_values: &[f64], grid: &[f64], jump_factor: f64) -> Option<usize> {
    if g_values.len() != grid.len() || g_values.len() < 2 {
        return None;
    }
    let threshold = jump_factor * g_values[0];
    g_values
        .windows(2)
        .position(|w| w[1] - w[0] > threshold)
}

fn lambda_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::invalid("grid_step must lie in (0, 1]"));
    }
    let m = (1.0 / step).round() as usize;
    let mut grid: Vec<f64> = (0..=m).map(|i| i as f64 * step).collect();
    *grid.last_mut().unwrap() = 1.0;
    Ok(grid)
}

/// Runs the full selection procedure: compute the graph defect profile at
/// `K`, pick `λ` by the jump rule, and double `K` while the selected scale
/// hits the horizon.
pub fn select_scale(cloud: &PointCloud, config: &SelectConfig) -> Result<SelectionResult> {
    select_impl(cloud, config, None)
}

/// Selection with a fixed `λ` (no jump detection); still escalates `K` until
/// the scale detaches from the horizon.
pub fn select_scale_fixed_lambda(
    cloud: &PointCloud,
    lambda: f64,
    config: &SelectConfig,
) -> Result<SelectionResult> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::invalid("lambda must lie in (0, 1]"));
    }
    select_impl(cloud, config, Some(lambda))
}

fn select_impl(
    cloud: &PointCloud,
    config: &SelectConfig,
    fixed_lambda: Option<f64>,
) -> Result<SelectionResult> {
    let n = cloud.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "selection needs at least 3 points, got {n}"
        )));
    }
    let grid = lambda_grid(config.grid_step)?;
    let cap = config.max_k.unwrap_or(n - 1).min(n - 1).max(1);
    let mut k = config.k0.clamp(1, cap);
    let index = NeighborIndex::new(cloud);
    let mut trace: Vec<KTraceEntry> = Vec::new();

    loop {
        let profile = graph_defect_profile(cloud, &index, k)?;
        let ell = profile.horizon;
        let g = g_curve(&profile, &grid)?;
        let (jump, lambda_choice) = match fixed_lambda {
            Some(l) => (None, Some(l)),
            None => {
                let j = detect_jump(&g, &grid, config.jump_factor);
                (j, j.map(|l| config.choice_factor * grid[l]))
            }
        };
        let tl = match lambda_choice {
            Some(l) if l > 0.0 => profile.t_lambda(l)?,
            _ => TLambda {
                t: ell,
                saturated: true,
            },
        };
        let saturated = tl.saturated || tl.t >= ell;
        trace.push(KTraceEntry {
            k,
            ell_k: ell,
            saturated,
        });

        if !saturated {
            return Ok(SelectionResult {
                lambda_grid: grid,
                g_values: g,
                jump_index: jump,
                lambda_choice: lambda_choice.unwrap(),
                t_sel: tl.t,
                converged: true,
                k_trace: trace,
                profile,
            });
        }
        if k >= cap {
            // K exhausted: report the best effort at the largest horizon.
            let (lc, t_sel) = match lambda_choice {
                Some(l) if l > 0.0 => (l, tl.t),
                _ => {
                    let fb = fixed_lambda.unwrap_or(config.fallback_lambda);
                    (fb, profile.t_lambda(fb)?.t)
                }
            };
            return Ok(SelectionResult {
                lambda_grid: grid,
                g_values: g,
                jump_index: jump,
                lambda_choice: lc,
                t_sel,
                converged: false,
                k_trace: trace,
                profile,
            });
        }
        k = (2 * k).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect::graph_defect_profile;
    use crate::spatial::NeighborIndex;

    #[test]
    fn g_curve_on_collinear_points() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let index = NeighborIndex::new(&cloud);
        let p = graph_defect_profile(&cloud, &index, 2).unwrap();
        let g = g_curve(&p, &[0.0, 0.6, 1.0]).unwrap();
        assert!((g[0] - 1.0 / p.horizon).abs() < 1e-12);
        assert!((g[1] - 1.0).abs() < 1e-12); // t_{0.6} = 1
        assert!((g[2] - 2.0).abs() < 1e-12); // t_1 = first breakpoint 0.5
    }

    #[test]
    fn g_curve_rejects_bad_grids() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let index = NeighborIndex::new(&cloud);
        let p = graph_defect_profile(&cloud, &index, 2).unwrap();
        assert!(g_curve(&p, &[]).is_err());
        assert!(g_curve(&p, &[0.5, 0.5]).is_err());
        assert!(g_curve(&p, &[0.5, 1.5]).is_err());
    }

    #[test]
    fn jump_detection_rule() {
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let g = [1.0, 1.0, 1.0, 10.0, 12.0];
        assert_eq!(detect_jump(&g, &grid, 0.5), Some(2));
        let flat = [2.0, 2.0, 2.0, 2.0, 2.0];
        assert_eq!(detect_jump(&flat, &grid, 0.5), None);
        // Linear growth below the threshold never triggers.
        let slow = [1.0, 1.2, 1.4, 1.6, 1.8];
        assert_eq!(detect_jump(&slow, &grid, 0.5), None);
    }

    #[test]
    fn selection_requires_three_points() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(select_scale(&cloud, &SelectConfig::default()).is_err());
    }

    #[test]
    fn k_trace_doubles_up_to_the_cap() {
        // A two-cluster configuration saturates small K and forces escalation.
        let mut rows = Vec::new();
        for i in 0..8 {
            rows.push(vec![i as f64 * 0.01, 0.0]);
            rows.push(vec![i as f64 * 0.01 + 50.0, 0.0]);
        }
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let cfg = SelectConfig {
            k0: 2,
            ..Default::default()
        };
        let res = select_scale(&cloud, &cfg).unwrap();
        for w in res.k_trace.windows(2) {
            assert!(w[1].k == (2 * w[0].k).min(cloud.len() - 1));
            assert!(w[1].k > w[0].k);
        }
    }

    #[test]
    fn jump_index_is_scale_invariant() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let a = i as f64 * 0.157;
                vec![a.cos() + 0.01 * (7.0 * a).sin(), a.sin()]
            })
            .collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let scaled = cloud.scaled(37.5);
        let grid = lambda_grid(0.01).unwrap();
        let index = NeighborIndex::new(&cloud);
        let index_s = NeighborIndex::new(&scaled);
        let p = graph_defect_profile(&cloud, &index, 8).unwrap();
        let q = graph_defect_profile(&scaled, &index_s, 8).unwrap();
        let g1 = g_curve(&p, &grid).unwrap();
        let g2 = g_curve(&q, &grid).unwrap();
        assert_eq!(
            detect_jump(&g1, &grid, 0.5),
            detect_jump(&g2, &grid, 0.5)
        );
    }

    #[test]
    fn fixed_lambda_mode_on_collinear_points() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let cfg = SelectConfig {
            k0: 2,
            ..Default::default()
        };
        let res = select_scale_fixed_lambda(&cloud, 0.6, &cfg).unwrap();
        assert_eq!(res.t_sel, 1.0);
        assert_eq!(res.lambda_choice, 0.6);
    }

    #[test]
    fn selection_json_shape() {
        let rows: Vec<Vec<f64>> = (0..24)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 24.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let cloud = PointCloud::from_rows(&rows).unwrap();
        let cfg = SelectConfig {
            k0: 4,
            ..Default::default()
        };
        let res = select_scale(&cloud, &cfg).unwrap();
        let v: serde_json::Value = serde_json::to_value(&res).unwrap();
        for key in [
            "lambda_grid",
            "g_values",
            "jump_index",
            "lambda_choice",
            "t_sel",
            "converged",
            "K_trace",
        ] {
            assert!(v.get(key).is_some(), "missing key {key}");
        }
        assert!(v.get("profile").is_none());
        let entry = &v["K_trace"][0];
        for key in ["K", "ellK", "saturated"] {
            assert!(entry.get(key).is_some(), "missing trace key {key}");
        }
    }
}

//! Swiss roll: `(u cos u, y, u sin u)` for `u ∈ [1.5π, 4.5π]`, `y ∈ [0, 21]`,
//! sampled uniformly in parameter space to match the usual library dataset.

use crate::error::Error;
use crate::linalg;
use crate::Result;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct SwissRoll {
    pub u_min: f64,
    pub u_max: f64,
    pub y_max: f64,
    reach: f64,
}

impl SwissRoll {
    pub fn standard() -> Self {
        let u_min = 1.5 * std::f64::consts::PI;
        let u_max = 4.5 * std::f64::consts::PI;
        let reach = spiral_reach(u_min, u_max);
        SwissRoll {
            u_min,
            u_max,
            y_max: 21.0,
            reach,
        }
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// Parameter-space area (the sampler is uniform in `(u, y)`, not in
    /// surface area; density with respect to area varies by `1/√(1+u²)`).
    pub fn param_area(&self) -> f64 {
        (self.u_max - self.u_min) * self.y_max
    }

    pub fn point_at(&self, u: f64, y: f64) -> Vec<f64> {
        vec![u * u.cos(), y, u * u.sin()]
    }

    pub fn sample_base(&self, rng: &mut impl Rng) -> Vec<f64> {
        let u = self.u_min + rng.gen::<f64>() * (self.u_max - self.u_min);
        let y = rng.gen::<f64>() * self.y_max;
        self.point_at(u, y)
    }

    /// Squared distance from `(x, z)` to the spiral point at parameter `u`.
    fn planar_dist2(&self, u: f64, x: f64, z: f64) -> f64 {
        let dx = u * u.cos() - x;
        let dz = u * u.sin() - z;
        dx * dx + dz * dz
    }

    /// Spiral parameter of the nearest point, by coarse grid plus golden
    /// section refinement of the best brackets.
    fn nearest_u(&self, x: f64, z: f64) -> f64 {
        const COARSE: usize = 1200;
        let span = self.u_max - self.u_min;
        let mut best_i = 0;
        let mut best = f64::INFINITY;
        let at = |i: usize| self.u_min + span * i as f64 / COARSE as f64;
        for i in 0..=COARSE {
            let d = self.planar_dist2(at(i), x, z);
            if d < best {
                best = d;
                best_i = i;
            }
        }
        let lo = at(best_i.saturating_sub(1));
        let hi = at((best_i + 1).min(COARSE));
        golden_min(lo, hi, 1e-12, |u| self.planar_dist2(u, x, z))
    }

    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let u = self.nearest_u(p[0], p[2]);
        let dy = p[1] - p[1].clamp(0.0, self.y_max);
        (self.planar_dist2(u, p[0], p[2]) + dy * dy).sqrt()
    }

    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        if self.distance_to(p) > self.reach {
            return Err(Error::AmbiguousProjection);
        }
        let u = self.nearest_u(p[0], p[2]);
        Ok(self.point_at(u, p[1].clamp(0.0, self.y_max)))
    }

    pub fn tangent_basis(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let u = self.nearest_u(p[0], p[2]);
        let du = vec![u.cos() - u * u.sin(), 0.0, u.sin() + u * u.cos()];
        let n = linalg::norm(&du);
        vec![du.iter().map(|x| x / n).collect(), vec![0.0, 1.0, 0.0]]
    }

    pub fn reference_net(&self, resolution: f64) -> Vec<Vec<f64>> {
        // |∂u point| = √(1 + u²).
        let lip_u = (1.0 + self.u_max * self.u_max).sqrt();
        let n_u = (((self.u_max - self.u_min) * lip_u / resolution).ceil() as usize).max(2);
        let n_y = ((self.y_max / resolution).ceil() as usize).max(2);
        let mut net = Vec::with_capacity((n_u + 1) * (n_y + 1));
        for i in 0..=n_u {
            let u = self.u_min + (self.u_max - self.u_min) * i as f64 / n_u as f64;
            for j in 0..=n_y {
                let y = self.y_max * j as f64 / n_y as f64;
                net.push(self.point_at(u, y));
            }
        }
        net
    }
}

/// Golden-section minimization on `[lo, hi]`.
fn golden_min(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Reach of the rolled strip: the smaller of the minimal curvature radius of
/// the spiral `r = θ` and half the gap between consecutive turns, evaluated
/// numerically once. For the standard range this is a little over 3.
fn spiral_reach(u_min: f64, u_max: f64) -> f64 {
    // Curvature of r = θ in polar form: κ = (θ² + 2) / (θ² + 1)^{3/2}.
    let curvature_radius = |u: f64| (u * u + 1.0).powf(1.5) / (u * u + 2.0);
    let steps = 4000;
    let mut min_rho = f64::INFINITY;
    for i in 0..=steps {
        let u = u_min + (u_max - u_min) * i as f64 / steps as f64;
        min_rho = min_rho.min(curvature_radius(u));
    }
    // Bottleneck: nearest approach between spiral arcs more than a
    // half-turn apart in parameter.
    let pt = |u: f64| [u * u.cos(), u * u.sin()];
    let n = 3000usize;
    let us: Vec<f64> = (0..=n)
        .map(|i| u_min + (u_max - u_min) * i as f64 / n as f64)
        .collect();
    let pts: Vec<[f64; 2]> = us.iter().map(|&u| pt(u)).collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..=n {
        for j in i..=n {
            if us[j] - us[i] < std::f64::consts::PI {
                continue;
            }
            let dx = pts[i][0] - pts[j][0];
            let dz = pts[i][1] - pts[j][1];
            min_gap = min_gap.min((dx * dx + dz * dz).sqrt());
        }
    }
    min_rho.min(0.5 * min_gap) * 0.999
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reach_is_near_half_turn_gap() {
        let s = SwissRoll::standard();
        // Turns are ~2π apart; curvature radius exceeds that scale.
        assert!(s.reach() > 2.0 && s.reach() < 3.2, "reach = {}", s.reach());
    }

    #[test]
    fn project_is_idempotent_on_surface_points() {
        let s = SwissRoll::standard();
        let p = s.point_at(7.0, 10.0);
        let q = s.project(&p).unwrap();
        assert!(linalg::dist(&p, &q) < 1e-9);
    }

    #[test]
    fn project_recovers_offset_points() {
        let s = SwissRoll::standard();
        let p = s.point_at(8.0, 5.0);
        let basis = s.tangent_basis(&p);
        // Normal direction in the xz-plane.
        let normal = [-basis[0][2], 0.0, basis[0][0]];
        let off = [p[0] + 0.3 * normal[0], p[1], p[2] + 0.3 * normal[2]];
        let q = s.project(&off).unwrap();
        assert!(linalg::dist(&p, &q) < 1e-6, "{:?} vs {:?}", p, q);
    }

    #[test]
    fn distance_beyond_strip_counts_y_overhang() {
        let s = SwissRoll::standard();
        let p = s.point_at(7.0, 0.0);
        let off = [p[0], -2.0, p[2]];
        assert!((s.distance_to(&off) - 2.0).abs() < 1e-9);
    }
}

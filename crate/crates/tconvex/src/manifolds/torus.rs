//! Torus of revolution in `R³`:
//! `(√(x² + y²) − R)² + z² = r²` with tube radius `r` and center radius `R`.

use crate::error::Error;
use crate::Result;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Torus {
    pub tube_radius: f64,
    pub center_radius: f64,
}

impl Torus {
    pub fn new(tube_radius: f64, center_radius: f64) -> Result<Self> {
        if !(tube_radius > 0.0 && center_radius > tube_radius) {
            return Err(Error::invalid(
                "torus needs 0 < tube_radius < center_radius",
            ));
        }
        Ok(Torus {
            tube_radius,
            center_radius,
        })
    }

    /// The reach is limited by the tube curvature and by the gap around the
    /// rotation axis.
    pub fn reach(&self) -> f64 {
        self.tube_radius
            .min(self.center_radius - self.tube_radius)
    }

    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * std::f64::consts::PI * self.center_radius * self.tube_radius
    }

    pub fn point_at(&self, theta: f64, psi: f64) -> Vec<f64> {
        let w = self.center_radius + self.tube_radius * theta.cos();
        vec![
            w * psi.cos(),
            w * psi.sin(),
            self.tube_radius * theta.sin(),
        ]
    }

    /// Area-uniform sampling: tube angle accepted with probability
    /// proportional to `(R + r cos θ) / (R + r)`.
    pub fn sample_base(&self, rng: &mut impl Rng) -> Vec<f64> {
        let psi = rng.gen::<f64>() * std::f64::consts::TAU;
        loop {
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let accept = (self.center_radius + self.tube_radius * theta.cos())
                / (self.center_radius + self.tube_radius);
            if rng.gen::<f64>() < accept {
                return self.point_at(theta, psi);
            }
        }
    }

    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let rho = p[0].hypot(p[1]);
        let to_center_circle = (rho - self.center_radius).hypot(p[2]);
        (to_center_circle - self.tube_radius).abs()
    }

    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        let rho = p[0].hypot(p[1]);
        if rho == 0.0 || self.distance_to(p) > self.reach() {
            return Err(Error::AmbiguousProjection);
        }
        let c = [
            self.center_radius * p[0] / rho,
            self.center_radius * p[1] / rho,
            0.0,
        ];
        let v = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
        let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if vn == 0.0 {
            return Err(Error::AmbiguousProjection);
        }
        Ok(vec![
            c[0] + self.tube_radius * v[0] / vn,
            c[1] + self.tube_radius * v[1] / vn,
            c[2] + self.tube_radius * v[2] / vn,
        ])
    }

    pub fn tangent_basis(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let rho = p[0].hypot(p[1]).max(1e-300);
        let (cpsi, spsi) = (p[0] / rho, p[1] / rho);
        let ctheta = (rho - self.center_radius) / self.tube_radius;
        let stheta = p[2] / self.tube_radius;
        vec![
            vec![-spsi, cpsi, 0.0],
            vec![-cpsi * stheta, -spsi * stheta, ctheta],
        ]
    }

    /// Parameter-grid net with Euclidean covering radius at most `resolution`.
    pub fn reference_net(&self, resolution: f64) -> Vec<Vec<f64>> {
        let tau = std::f64::consts::TAU;
        // |∂θ| = r and |∂ψ| <= R + r bound the parametrization.
        let n_theta =
            ((tau * self.tube_radius / resolution).ceil() as usize).max(4);
        let n_psi = ((tau * (self.center_radius + self.tube_radius) / resolution).ceil() as usize)
            .max(4);
        let mut net = Vec::with_capacity(n_theta * n_psi);
        for i in 0..n_theta {
            let theta = tau * i as f64 / n_theta as f64;
            for j in 0..n_psi {
                let psi = tau * j as f64 / n_psi as f64;
                net.push(self.point_at(theta, psi));
            }
        }
        net
    }
}

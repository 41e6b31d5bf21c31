//! Circle of radius `τ` embedded in a 2-plane of `R^D`.

use crate::error::Error;
use crate::linalg;
use crate::Result;
use nalgebra::DMatrix;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Circle {
    pub radius: f64,
    /// Two orthonormal `D`-vectors spanning the carrying plane.
    frame: [Vec<f64>; 2],
    /// Equally spaced angles instead of uniform random ones.
    pub stratified: bool,
}

impl Circle {
    /// Planar circle in `R²`.
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid("circle radius must be positive"));
        }
        Ok(Circle {
            radius,
            frame: [vec![1.0, 0.0], vec![0.0, 1.0]],
            stratified: false,
        })
    }

    /// Circle on a random plane of `R^D`, the frame drawn by orthonormalizing
    /// a seeded Gaussian matrix.
    pub fn embedded(radius: f64, ambient_dim: usize, frame_seed: u64) -> Result<Self> {
        if ambient_dim < 2 {
            return Err(Error::invalid("circle needs ambient dimension >= 2"));
        }
        if ambient_dim == 2 {
            return Circle::new(radius);
        }
        if !(radius > 0.0) {
            return Err(Error::invalid("circle radius must be positive"));
        }
        let mut rng = super::rng::aux_stream(frame_seed, 1);
        let gauss = DMatrix::from_fn(ambient_dim, 2, |_, _| super::rng::normal(&mut rng));
        let qr = gauss.qr();
        let q = qr.q();
        let f0: Vec<f64> = q.column(0).iter().copied().collect();
        let f1: Vec<f64> = q.column(1).iter().copied().collect();
        Ok(Circle {
            radius,
            frame: [f0, f1],
            stratified: false,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame[0].len()
    }

    pub fn reach(&self) -> f64 {
        self.radius
    }

    pub fn point_at(&self, angle: f64) -> Vec<f64> {
        let mut p = vec![0.0; self.ambient_dim()];
        linalg::axpy(&mut p, self.radius * angle.cos(), &self.frame[0]);
        linalg::axpy(&mut p, self.radius * angle.sin(), &self.frame[1]);
        p
    }

    pub fn sample_base(&self, rng: &mut impl Rng, index: usize, n: usize) -> Vec<f64> {
        let angle = if self.stratified {
            std::f64::consts::TAU * index as f64 / n as f64
        } else {
            rng.gen::<f64>() * std::f64::consts::TAU
        };
        self.point_at(angle)
    }

    /// In-plane coordinates of `p`.
    fn plane_coords(&self, p: &[f64]) -> (f64, f64) {
        (linalg::dot(p, &self.frame[0]), linalg::dot(p, &self.frame[1]))
    }

    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let (u, v) = self.plane_coords(p);
        let rho = u.hypot(v);
        let in_plane2 = u * u + v * v;
        let perp2 = (linalg::dot(p, p) - in_plane2).max(0.0);
        ((rho - self.radius) * (rho - self.radius) + perp2).sqrt()
    }

    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        let (u, v) = self.plane_coords(p);
        let rho = u.hypot(v);
        if rho == 0.0 || self.distance_to(p) > self.reach() {
            return Err(Error::AmbiguousProjection);
        }
        let mut out = vec![0.0; self.ambient_dim()];
        linalg::axpy(&mut out, self.radius * u / rho, &self.frame[0]);
        linalg::axpy(&mut out, self.radius * v / rho, &self.frame[1]);
        Ok(out)
    }

    pub fn tangent_basis(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let (u, v) = self.plane_coords(p);
        let rho = u.hypot(v).max(1e-300);
        let (c, s) = (u / rho, v / rho);
        let mut t = vec![0.0; self.ambient_dim()];
        linalg::axpy(&mut t, -s, &self.frame[0]);
        linalg::axpy(&mut t, c, &self.frame[1]);
        vec![t]
    }

    /// Net with Euclidean covering radius at most `resolution`.
    pub fn reference_net(&self, resolution: f64) -> Vec<Vec<f64>> {
        let count = ((std::f64::consts::PI * self.radius / resolution).ceil() as usize).max(4);
        (0..count)
            .map(|i| self.point_at(std::f64::consts::TAU * i as f64 / count as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_snaps_to_radius() {
        let c = Circle::new(1.0).unwrap();
        let p = c.project(&[2.0 * 0.3, 0.0]).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);
        assert!(c.project(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn embedded_frame_is_orthonormal() {
        let c = Circle::embedded(1.0, 100, 42).unwrap();
        assert!((linalg::norm(&c.frame[0]) - 1.0).abs() < 1e-12);
        assert!((linalg::norm(&c.frame[1]) - 1.0).abs() < 1e-12);
        assert!(linalg::dot(&c.frame[0], &c.frame[1]).abs() < 1e-12);
        let p = c.point_at(0.7);
        assert!((linalg::norm(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tangent_at_east_point_is_vertical() {
        let c = Circle::new(1.0).unwrap();
        let t = c.tangent_basis(&[1.0, 0.0]);
        assert!(t[0][0].abs() < 1e-12 && (t[0][1].abs() - 1.0).abs() < 1e-12);
    }
}

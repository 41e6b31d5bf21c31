//! Sphere with smooth radial bumps: the image of the `R`-sphere under
//! `Φ(x) = x (1 + (ε/R) Σ_y s(y) φ(|x − y|/δ))` over a `4δ`-separated site
//! set with ±1 signs. Serves as an adversarial sampler; the bump profile φ
//! is the standard plateau function built from `e^{-1/x}`.

use crate::error::Error;
use crate::linalg;
use crate::Result;
use rand::Rng;

/// Parameters of the bump construction.
#[derive(Debug, Clone)]
pub struct BumpParams {
    pub sphere_radius: f64,
    pub delta: f64,
    pub eps_bump: f64,
    /// Requested number of bump sites; the built set keeps an even count.
    pub max_sites: usize,
    pub site_seed: u64,
}

impl Default for BumpParams {
    fn default() -> Self {
        BumpParams {
            sphere_radius: 1.0,
            delta: 0.4,
            eps_bump: 0.02,
            max_sites: 64,
            site_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BumpedSphere {
    pub params: BumpParams,
    sites: Vec<Vec<f64>>,
    signs: Vec<f64>,
    phi_sup: f64,
    dphi_sup: f64,
    d2phi_sup: f64,
}

/// Smooth step `s(t)`: 0 for `t <= 0`, 1 for `t >= 1`.
fn smooth_step(t: f64) -> f64 {
    let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let a = psi(t);
    let b = psi(1.0 - t);
    if a + b == 0.0 {
        return if t > 0.5 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

/// Plateau profile: `φ ≡ 1` on `[-1, 1]`, `φ ≡ 0` outside `[-2, 2]`, smooth.
pub fn phi(u: f64) -> f64 {
    smooth_step(2.0 - u.abs())
}

fn phi_derivative(u: f64, h: f64) -> f64 {
    (phi(u + h) - phi(u - h)) / (2.0 * h)
}

impl BumpedSphere {
    /// Builds the site set by greedy farthest-point sampling on the sphere,
    /// keeping only `4δ`-separated sites and an even count.
    pub fn new(params: BumpParams) -> Result<Self> {
        if !(params.sphere_radius > 0.0 && params.delta > 0.0 && params.eps_bump >= 0.0) {
            return Err(Error::invalid("bump parameters must be positive"));
        }
        if params.delta > params.sphere_radius {
            return Err(Error::invalid("delta must not exceed the sphere radius"));
        }
        // Profile norms on a dense grid; φ only varies on 1 <= |u| <= 2.
        let mut dphi_sup = 0.0f64;
        let mut d2phi_sup = 0.0f64;
        let grid = 20_000;
        let h = 1e-5;
        for i in 0..=grid {
            let u = 0.9 + 1.2 * i as f64 / grid as f64;
            let d1 = phi_derivative(u, h);
            let d2 = (phi(u + h) - 2.0 * phi(u) + phi(u - h)) / (h * h);
            dphi_sup = dphi_sup.max(d1.abs());
            d2phi_sup = d2phi_sup.max(d2.abs());
        }
        let c0 = 1.0 + 3.0 * dphi_sup;
        if params.eps_bump > 0.0 && c0 * params.eps_bump / params.delta >= 1.0 {
            return Err(Error::invalid(format!(
                "bump ratio eps/delta = {} too large for a diffeomorphism",
                params.eps_bump / params.delta
            )));
        }

        // Candidate directions: deterministic seeded set on the sphere.
        let mut rng = super::rng::aux_stream(params.site_seed, 2);
        let candidates: Vec<Vec<f64>> = (0..4096)
            .map(|_| {
                super::rng::unit_sphere(&mut rng, 3)
                    .into_iter()
                    .map(|x| x * params.sphere_radius)
                    .collect()
            })
            .collect();
        let mut sites: Vec<Vec<f64>> = vec![candidates[0].clone()];
        while sites.len() < params.max_sites {
            let (best, best_d) = candidates
                .iter()
                .map(|c| {
                    let d = sites
                        .iter()
                        .map(|s| linalg::dist(c, s))
                        .fold(f64::INFINITY, f64::min);
                    (c, d)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if best_d < 4.0 * params.delta {
                break;
            }
            sites.push(best.clone());
        }
        if sites.len() % 2 == 1 {
            sites.pop();
        }
        if sites.is_empty() {
            return Err(Error::invalid(
                "no 4δ-separated site pair fits on the sphere; decrease delta",
            ));
        }
        let signs: Vec<f64> = (0..sites.len())
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Ok(BumpedSphere {
            params,
            sites,
            signs,
            phi_sup: 1.0,
            dphi_sup,
            d2phi_sup,
        })
    }

    pub fn sites(&self) -> &[Vec<f64>] {
        &self.sites
    }

    /// `c₁ = ‖φ‖_∞ + 3‖φ'‖_∞`, the derivative-deviation constant of the map.
    pub fn c1(&self) -> f64 {
        self.phi_sup + 3.0 * self.dphi_sup
    }

    /// `c₂ = 4‖φ'‖_∞ + 3‖φ''‖_∞`, the second-derivative constant.
    pub fn c2(&self) -> f64 {
        4.0 * self.dphi_sup + 3.0 * self.d2phi_sup
    }

    /// Certified lower bound on the reach of the image manifold.
    pub fn reach(&self) -> f64 {
        let r = self.params.sphere_radius;
        if self.params.eps_bump == 0.0 {
            return r;
        }
        let a = self.c1() * self.params.eps_bump / self.params.delta;
        let b = r * self.c2() * self.params.eps_bump / (self.params.delta * self.params.delta);
        let bound = r * (1.0 - a).min((1.0 - a) * (1.0 - a) / (1.0 + a + b));
        bound.max(1e-6 * r)
    }

    /// The bump map, defined on the ball of radius `3R`.
    pub fn map(&self, x: &[f64]) -> Vec<f64> {
        let mut factor = 1.0;
        for (site, sign) in self.sites.iter().zip(&self.signs) {
            let d = linalg::dist(x, site);
            if d < 2.0 * self.params.delta {
                factor += self.params.eps_bump / self.params.sphere_radius
                    * sign
                    * phi(d / self.params.delta);
            }
        }
        x.iter().map(|c| c * factor).collect()
    }

    pub fn sample_base(&self, rng: &mut impl Rng) -> Vec<f64> {
        let dir = super::rng::unit_sphere(rng, 3);
        let x: Vec<f64> = dir
            .into_iter()
            .map(|c| c * self.params.sphere_radius)
            .collect();
        self.map(&x)
    }

    /// Preimage sphere point minimizing `|Φ(x) - p|`, by Gauss-Newton on a
    /// local tangent chart of the sphere.
    fn nearest_preimage(&self, p: &[f64]) -> Vec<f64> {
        let r = self.params.sphere_radius;
        let norm_p = linalg::norm(p).max(1e-300);
        let mut x: Vec<f64> = p.iter().map(|c| c * r / norm_p).collect();
        let h = 1e-7 * r;
        for _ in 0..80 {
            let (t1, t2) = sphere_tangent_pair(&x);
            let residual = linalg::sub(&self.map(&x), p);
            let chart = |a: f64, b: f64| -> Vec<f64> {
                let mut y = x.clone();
                linalg::axpy(&mut y, a, &t1);
                linalg::axpy(&mut y, b, &t2);
                let n = linalg::norm(&y);
                y.into_iter().map(|c| c * r / n).collect()
            };
            let j1 = linalg::scale(
                &linalg::sub(&self.map(&chart(h, 0.0)), &self.map(&chart(-h, 0.0))),
                0.5 / h,
            );
            let j2 = linalg::scale(
                &linalg::sub(&self.map(&chart(0.0, h)), &self.map(&chart(0.0, -h))),
                0.5 / h,
            );
            // Normal equations of the 2-column least squares.
            let g11 = linalg::dot(&j1, &j1);
            let g12 = linalg::dot(&j1, &j2);
            let g22 = linalg::dot(&j2, &j2);
            let r1 = -linalg::dot(&j1, &residual);
            let r2 = -linalg::dot(&j2, &residual);
            let det = g11 * g22 - g12 * g12;
            if det.abs() < 1e-300 {
                break;
            }
            let a = (r1 * g22 - r2 * g12) / det;
            let b = (g11 * r2 - g12 * r1) / det;
            x = chart(a, b);
            if a.hypot(b) < 1e-12 * r {
                break;
            }
        }
        x
    }

    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let x = self.nearest_preimage(p);
        linalg::dist(&self.map(&x), p)
    }

    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        if linalg::norm(p) == 0.0 {
            return Err(Error::AmbiguousProjection);
        }
        let q = self.map(&self.nearest_preimage(p));
        if linalg::dist(&q, p) > self.reach() {
            return Err(Error::AmbiguousProjection);
        }
        Ok(q)
    }

    pub fn tangent_basis(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let x = self.nearest_preimage(p);
        let (t1, t2) = sphere_tangent_pair(&x);
        let h = 1e-6 * self.params.sphere_radius;
        let push = |t: &[f64]| -> Vec<f64> {
            let mut plus = x.clone();
            linalg::axpy(&mut plus, h, t);
            let mut minus = x.clone();
            linalg::axpy(&mut minus, -h, t);
            linalg::scale(&linalg::sub(&self.map(&plus), &self.map(&minus)), 0.5 / h)
        };
        let v1 = push(&t1);
        let v2 = push(&t2);
        // Gram-Schmidt.
        let n1 = linalg::norm(&v1);
        let e1: Vec<f64> = v1.iter().map(|c| c / n1).collect();
        let mut w = v2.clone();
        linalg::axpy(&mut w, -linalg::dot(&v2, &e1), &e1);
        let n2 = linalg::norm(&w);
        vec![e1, w.into_iter().map(|c| c / n2).collect()]
    }

    /// Net pushed through the map from a sphere net; covering radius scales
    /// by at most the derivative bound.
    pub fn reference_net(&self, resolution: f64) -> Vec<Vec<f64>> {
        let stretch = 1.0 + self.c1() * self.params.eps_bump / self.params.delta;
        let res_sphere = resolution / stretch;
        let r = self.params.sphere_radius;
        let n_polar = ((std::f64::consts::PI * r / res_sphere).ceil() as usize).max(2);
        let mut net = Vec::new();
        for i in 0..=n_polar {
            let theta = std::f64::consts::PI * i as f64 / n_polar as f64;
            let ring_r = r * theta.sin();
            let n_az = ((std::f64::consts::TAU * ring_r / res_sphere).ceil() as usize).max(1);
            for j in 0..n_az {
                let az = std::f64::consts::TAU * j as f64 / n_az as f64;
                net.push(self.map(&[
                    ring_r * az.cos(),
                    ring_r * az.sin(),
                    r * theta.cos(),
                ]));
            }
        }
        net
    }
}

/// Two orthonormal vectors spanning the sphere tangent at `x`.
fn sphere_tangent_pair(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = linalg::norm(x).max(1e-300);
    let u: Vec<f64> = x.iter().map(|c| c / n).collect();
    let pick = if u[0].abs() < 0.9 {
        vec![1.0, 0.0, 0.0]
    } else {
        vec![0.0, 1.0, 0.0]
    };
    let mut t1 = pick.clone();
    linalg::axpy(&mut t1, -linalg::dot(&pick, &u), &u);
    let n1 = linalg::norm(&t1);
    let t1: Vec<f64> = t1.iter().map(|c| c / n1).collect();
    let t2 = vec![
        u[1] * t1[2] - u[2] * t1[1],
        u[2] * t1[0] - u[0] * t1[2],
        u[0] * t1[1] - u[1] * t1[0],
    ];
    (t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_profile_shape() {
        assert_eq!(phi(0.0), 1.0);
        assert_eq!(phi(0.99), 1.0);
        assert_eq!(phi(-1.0), 1.0);
        assert_eq!(phi(2.0), 0.0);
        assert_eq!(phi(5.0), 0.0);
        let mid = phi(1.5);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn sites_are_separated_and_even() {
        let b = BumpedSphere::new(BumpParams::default()).unwrap();
        let sites = b.sites();
        assert!(sites.len() % 2 == 0 && !sites.is_empty());
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                assert!(linalg::dist(&sites[i], &sites[j]) >= 4.0 * b.params.delta - 1e-9);
            }
        }
    }

    #[test]
    fn samples_stay_within_bump_height_of_the_sphere() {
        let b = BumpedSphere::new(BumpParams::default()).unwrap();
        let mut rng = crate::manifolds::rng::stream(5, 0);
        for _ in 0..100 {
            let p = b.sample_base(&mut rng);
            let r = linalg::norm(&p);
            assert!((r - 1.0).abs() <= b.params.eps_bump + 1e-12);
        }
    }

    #[test]
    fn projection_recovers_sample_points() {
        let b = BumpedSphere::new(BumpParams::default()).unwrap();
        let mut rng = crate::manifolds::rng::stream(6, 0);
        for _ in 0..20 {
            let p = b.sample_base(&mut rng);
            let q = b.project(&p).unwrap();
            assert!(linalg::dist(&p, &q) < 1e-8);
        }
    }
}

//! Reference manifolds with analytic oracles, samplers, noise channels and
//! ground-truth diagnostics.

mod bumped;
mod circle;
pub mod rng;
mod swissroll;
mod torus;

pub use bumped::{phi, BumpParams, BumpedSphere};
pub use circle::Circle;
pub use swissroll::SwissRoll;
pub use torus::Torus;

use crate::error::Error;
use crate::geom::{Point, PointCloud, Subspace};
use crate::linalg;
use crate::spatial::NeighborIndex;
use crate::tol::Tolerances;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Observation noise added to the on-manifold draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    None,
    /// Uniform in the normal-space ball of radius `gamma`; needs
    /// `gamma < reach`.
    Tubular { gamma: f64 },
    /// Uniform in the ambient ball of radius `gamma`.
    Ambient { gamma: f64 },
}

impl NoiseSpec {
    pub fn gamma(&self) -> f64 {
        match self {
            NoiseSpec::None => 0.0,
            NoiseSpec::Tubular { gamma } | NoiseSpec::Ambient { gamma } => *gamma,
        }
    }
}

/// A reference manifold.
#[derive(Debug, Clone)]
pub enum ManifoldModel {
    Circle(Circle),
    Torus(Torus),
    SwissRoll(SwissRoll),
    BumpedSphere(BumpedSphere),
}

/// Output of a sampling run: the observed cloud and, when noise was added,
/// the paired clean cloud.
#[derive(Debug, Clone)]
pub struct SampleOutput {
    pub cloud: PointCloud,
    pub clean: Option<PointCloud>,
}

impl ManifoldModel {
    pub fn ambient_dim(&self) -> usize {
        match self {
            ManifoldModel::Circle(c) => c.ambient_dim(),
            _ => 3,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            ManifoldModel::Circle(_) => 1,
            _ => 2,
        }
    }

    pub fn reach(&self) -> f64 {
        match self {
            ManifoldModel::Circle(c) => c.reach(),
            ManifoldModel::Torus(t) => t.reach(),
            ManifoldModel::SwissRoll(s) => s.reach(),
            ManifoldModel::BumpedSphere(b) => b.reach(),
        }
    }

    /// Distance from an arbitrary ambient point to the manifold. Total:
    /// defined even beyond the reach tube.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        match self {
            ManifoldModel::Circle(c) => c.distance_to(p),
            ManifoldModel::Torus(t) => t.distance_to(p),
            ManifoldModel::SwissRoll(s) => s.distance_to(p),
            ManifoldModel::BumpedSphere(b) => b.distance_to(p),
        }
    }

    /// Nearest manifold point; errors when `p` is outside the reach tube.
    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(p)?;
        match self {
            ManifoldModel::Circle(c) => c.project(p),
            ManifoldModel::Torus(t) => t.project(p),
            ManifoldModel::SwissRoll(s) => s.project(p),
            ManifoldModel::BumpedSphere(b) => b.project(p),
        }
    }

    /// Orthonormal basis of the tangent space at an on-manifold point.
    pub fn tangent_at(&self, p: &[f64]) -> Result<Subspace> {
        self.check_dim(p)?;
        let residual = self.distance_to(p);
        let scale = 1.0 + linalg::norm(p);
        if residual > Tolerances::DEFAULT.on_manifold * scale {
            return Err(Error::OffManifold { residual });
        }
        let basis = match self {
            ManifoldModel::Circle(c) => c.tangent_basis(p),
            ManifoldModel::Torus(t) => t.tangent_basis(p),
            ManifoldModel::SwissRoll(s) => s.tangent_basis(p),
            ManifoldModel::BumpedSphere(b) => b.tangent_basis(p),
        };
        Subspace::new(Point::new(p.to_vec())?, basis)
    }

    /// Net of on-manifold points with Euclidean covering radius at most
    /// `resolution`.
    pub fn reference_net(&self, resolution: f64) -> Result<PointCloud> {
        if !(resolution > 0.0) {
            return Err(Error::invalid("net resolution must be positive"));
        }
        let rows = match self {
            ManifoldModel::Circle(c) => c.reference_net(resolution),
            ManifoldModel::Torus(t) => t.reference_net(resolution),
            ManifoldModel::SwissRoll(s) => s.reference_net(resolution),
            ManifoldModel::BumpedSphere(b) => b.reference_net(resolution),
        };
        PointCloud::from_rows(&rows)
    }

    fn check_dim(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: p.len(),
            });
        }
        Ok(())
    }

    fn sample_base(&self, rng: &mut rand_chacha::ChaCha12Rng, index: usize, n: usize) -> Vec<f64> {
        match self {
            ManifoldModel::Circle(c) => c.sample_base(rng, index, n),
            ManifoldModel::Torus(t) => t.sample_base(rng),
            ManifoldModel::SwissRoll(s) => s.sample_base(rng),
            ManifoldModel::BumpedSphere(b) => b.sample_base(rng),
        }
    }
}

/// Draws `n` observations. Deterministic per `(seed, index)`: every point
/// consumes its own counter-based stream, so the result does not depend on
/// evaluation order.
pub fn sample(
    model: &ManifoldModel,
    n: usize,
    noise: NoiseSpec,
    seed: u64,
) -> Result<SampleOutput> {
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    if let NoiseSpec::Tubular { gamma } = noise {
        if gamma >= model.reach() {
            return Err(Error::invalid(format!(
                "tubular noise gamma = {gamma} must stay below the reach {}",
                model.reach()
            )));
        }
    }
    if noise.gamma() < 0.0 {
        return Err(Error::invalid("noise amplitude must be nonnegative"));
    }
    let ambient = model.ambient_dim();
    let intrinsic = model.intrinsic_dim();
    let mut noisy = Vec::with_capacity(n * ambient);
    let mut clean = Vec::with_capacity(n * ambient);
    for i in 0..n {
        let mut r = rng::stream(seed, i as u64);
        let y = model.sample_base(&mut r, i, n);
        let x = match noise {
            NoiseSpec::None => y.clone(),
            NoiseSpec::Ambient { gamma } => {
                let z = rng::unit_ball(&mut r, ambient);
                let mut x = y.clone();
                linalg::axpy(&mut x, gamma, &z);
                x
            }
            NoiseSpec::Tubular { gamma } => {
                let tangent = model.tangent_at(&y)?;
                let normals = complete_orthonormal(tangent.basis(), ambient);
                debug_assert_eq!(normals.len(), ambient - intrinsic);
                let z = rng::unit_ball(&mut r, ambient - intrinsic);
                let mut x = y.clone();
                for (coef, dir) in z.iter().zip(&normals) {
                    linalg::axpy(&mut x, gamma * coef, dir);
                }
                x
            }
        };
        noisy.extend_from_slice(&x);
        clean.extend_from_slice(&y);
    }
    let cloud = PointCloud::from_flat(noisy, ambient)?;
    let clean = match noise {
        NoiseSpec::None => None,
        _ => Some(PointCloud::from_flat(clean, ambient)?),
    };
    Ok(SampleOutput { cloud, clean })
}

/// Completes an orthonormal family to a full basis and returns the added
/// (normal) vectors, deterministically from the standard basis.
pub fn complete_orthonormal(partial: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = partial.to_vec();
    let mut extra = Vec::new();
    for axis in 0..dim {
        if frame.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        for u in &frame {
            let c = linalg::dot(&v, u);
            linalg::axpy(&mut v, -c, u);
        }
        let norm = linalg::norm(&v);
        if norm > 1e-8 {
            let v: Vec<f64> = v.into_iter().map(|x| x / norm).collect();
            frame.push(v.clone());
            extra.push(v);
        }
    }
    extra
}

/// Approximation rate estimate with a certified error bar.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonRate {
    /// Estimated `d_H(cloud, M)`; the true value lies within
    /// `[value, value + resolution]`.
    pub value: f64,
    pub resolution: f64,
}

/// `ε(A) = d_H(A, M)` against a reference net of covering radius at most
/// `resolution`. The cloud-to-manifold direction is exact via projection.
pub fn epsilon_rate(
    model: &ManifoldModel,
    cloud: &PointCloud,
    resolution: f64,
) -> Result<EpsilonRate> {
    if !(resolution > 0.0) {
        return Err(Error::invalid("resolution must be positive"));
    }
    let mut cloud_side = 0.0f64;
    for p in cloud.iter() {
        let proj = model.project(p)?;
        cloud_side = cloud_side.max(linalg::dist(p, &proj));
    }
    let net = model.reference_net(resolution)?;
    let index = NeighborIndex::new(cloud);
    let mut net_side = 0.0f64;
    for m in net.iter() {
        net_side = net_side.max(index.nearest(m)?.1);
    }
    Ok(EpsilonRate {
        value: cloud_side.max(net_side),
        resolution,
    })
}

/// Does the metric projection of `Conv_d(t_probe, cloud)` cover the whole
/// manifold? Net points must come within the net resolution of a projected
/// hull sample.
pub fn tstar_covered(
    model: &ManifoldModel,
    cloud: &PointCloud,
    t_probe: f64,
    resolution: f64,
) -> Result<bool> {
    if !(t_probe >= 0.0) {
        return Err(Error::invalid("t_probe must be nonnegative"));
    }
    if t_probe >= model.reach() {
        return Err(Error::invalid(
            "t_probe must stay below the reach for a well-defined projection",
        ));
    }
    for p in cloud.iter() {
        if model.distance_to(p) > Tolerances::DEFAULT.on_manifold * (1.0 + linalg::norm(p)) {
            return Err(Error::NoisyCloud);
        }
    }
    let complex = crate::estimate::reconstruct(cloud, t_probe, model.intrinsic_dim())?;
    let mut projected: Vec<Vec<f64>> = Vec::new();
    for simplex in complex.simplices() {
        let verts: Vec<&[f64]> = simplex
            .vertex_indices()
            .iter()
            .map(|&i| cloud.point(i))
            .collect();
        for y in barycentric_samples(&verts, resolution) {
            projected.push(model.project(&y)?);
        }
    }
    let proj_cloud = PointCloud::from_rows(&projected)?;
    let proj_index = NeighborIndex::new(&proj_cloud);
    let net = model.reference_net(resolution)?;
    for m in net.iter() {
        if proj_index.nearest(m)?.1 > resolution {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Estimate of the coverage scale `t*` by bisection, or `None` when even
/// scales just below the reach fail to cover.
pub fn tstar_estimate(
    model: &ManifoldModel,
    cloud: &PointCloud,
    resolution: f64,
) -> Result<Option<f64>> {
    let hi_cap = model.reach() * (1.0 - 1e-9);
    if !tstar_covered(model, cloud, hi_cap, resolution)? {
        return Ok(None);
    }
    let mut lo = 0.0f64;
    let mut hi = hi_cap;
    let rel = Tolerances::DEFAULT.tstar_rel;
    while hi - lo > rel * hi {
        let mid = 0.5 * (lo + hi);
        if tstar_covered(model, cloud, mid, resolution)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Points of a barycentric grid over `Conv(vertices)` with Euclidean
/// covering pitch at most `pitch`.
pub fn barycentric_samples(vertices: &[&[f64]], pitch: f64) -> Vec<Vec<f64>> {
    let k = vertices.len();
    let mut diam = 0.0f64;
    for i in 0..k {
        for j in i + 1..k {
            diam = diam.max(linalg::dist(vertices[i], vertices[j]));
        }
    }
    let m = ((k as f64 * diam / pitch).ceil() as usize).max(1);
    let mut out = Vec::new();
    let mut weights = vec![0usize; k];
    fill_compositions(&mut weights, 0, m, vertices, m, &mut out);
    out
}

fn fill_compositions(
    weights: &mut Vec<usize>,
    pos: usize,
    remaining: usize,
    vertices: &[&[f64]],
    m: usize,
    out: &mut Vec<Vec<f64>>,
) {
    if pos == weights.len() - 1 {
        weights[pos] = remaining;
        let mut p = vec![0.0; vertices[0].len()];
        for (w, v) in weights.iter().zip(vertices) {
            linalg::axpy(&mut p, *w as f64 / m as f64, v);
        }
        out.push(p);
        return;
    }
    for w in 0..=remaining {
        weights[pos] = w;
        fill_compositions(weights, pos + 1, remaining - w, vertices, m, out);
    }
}

/// Declarative model + sampling configuration, JSON-compatible.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub family: String,
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stratified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tube_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_bump: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub kind: String,
    #[serde(default)]
    pub gamma: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            kind: "none".into(),
            gamma: 0.0,
        }
    }
}

impl NoiseConfig {
    pub fn to_spec(&self) -> Result<NoiseSpec> {
        match self.kind.as_str() {
            "none" => Ok(NoiseSpec::None),
            "tubular" => Ok(NoiseSpec::Tubular { gamma: self.gamma }),
            "ambient" => Ok(NoiseSpec::Ambient { gamma: self.gamma }),
            other => Err(Error::invalid(format!("unknown noise kind '{other}'"))),
        }
    }
}

impl ModelConfig {
    pub fn build_model(&self) -> Result<ManifoldModel> {
        let p = &self.params;
        match self.family.as_str() {
            "circle" => {
                let radius = p.radius.unwrap_or(1.0);
                let ambient = p.ambient_dim.unwrap_or(2);
                let mut c = if ambient == 2 {
                    Circle::new(radius)?
                } else {
                    Circle::embedded(radius, ambient, p.frame_seed.unwrap_or(self.seed))?
                };
                c.stratified = p.stratified.unwrap_or(false);
                Ok(ManifoldModel::Circle(c))
            }
            "torus" => Ok(ManifoldModel::Torus(Torus::new(
                p.tube_radius.unwrap_or(1.0),
                p.center_radius.unwrap_or(4.0),
            )?)),
            "swissroll" | "swiss-roll" => Ok(ManifoldModel::SwissRoll(SwissRoll::standard())),
            "bumped-sphere" | "bumped_sphere" => {
                let mut bp = BumpParams::default();
                if let Some(r) = p.radius {
                    bp.sphere_radius = r;
                }
                if let Some(d) = p.delta {
                    bp.delta = d;
                }
                if let Some(e) = p.eps_bump {
                    bp.eps_bump = e;
                }
                bp.site_seed = self.seed;
                Ok(ManifoldModel::BumpedSphere(BumpedSphere::new(bp)?))
            }
            other => Err(Error::invalid(format!("unknown manifold family '{other}'"))),
        }
    }

    pub fn run(&self) -> Result<SampleOutput> {
        let model = self.build_model()?;
        sample(&model, self.n, self.noise.to_spec()?, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratified_circle_lands_on_the_circle() {
        let mut c = Circle::new(1.0).unwrap();
        c.stratified = true;
        let model = ManifoldModel::Circle(c);
        let out = sample(&model, 4, NoiseSpec::None, 9).unwrap();
        for p in out.cloud.iter() {
            assert!((linalg::norm(p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tubular_noise_is_orthogonal_and_bounded() {
        let model = ManifoldModel::Circle(Circle::new(1.0).unwrap());
        let out = sample(&model, 64, NoiseSpec::Tubular { gamma: 0.1 }, 11).unwrap();
        let clean = out.clean.as_ref().unwrap();
        for i in 0..out.cloud.len() {
            let x = out.cloud.point(i);
            let y = clean.point(i);
            let z = linalg::sub(x, y);
            assert!(linalg::norm(&z) <= 0.1 + 1e-12);
            let tangent = model.tangent_at(y).unwrap();
            assert!(
                linalg::dot(&z, &tangent.basis()[0]).abs() < 1e-10,
                "noise not orthogonal"
            );
        }
    }

    #[test]
    fn tubular_noise_beyond_reach_is_rejected() {
        let model = ManifoldModel::Circle(Circle::new(1.0).unwrap());
        assert!(sample(&model, 4, NoiseSpec::Tubular { gamma: 1.0 }, 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let model = ManifoldModel::Torus(Torus::new(1.0, 4.0).unwrap());
        let a = sample(&model, 32, NoiseSpec::None, 5).unwrap();
        let b = sample(&model, 32, NoiseSpec::None, 5).unwrap();
        assert_eq!(a.cloud, b.cloud);
        let c = sample(&model, 32, NoiseSpec::None, 6).unwrap();
        assert_ne!(a.cloud, c.cloud);
    }

    #[test]
    fn epsilon_of_equally_spaced_circle_points() {
        let mut c = Circle::new(1.0).unwrap();
        c.stratified = true;
        let model = ManifoldModel::Circle(c);
        let n = 16;
        let out = sample(&model, n, NoiseSpec::None, 1).unwrap();
        let res = 1e-3;
        let eps = epsilon_rate(&model, &out.cloud, res).unwrap();
        let expected = 2.0 * (std::f64::consts::PI / (2.0 * n as f64)).sin();
        assert!(
            (eps.value - expected).abs() <= res + 1e-9,
            "eps {} vs expected {}",
            eps.value,
            expected
        );
    }

    #[test]
    fn epsilon_of_single_point_is_the_diameter() {
        let model = ManifoldModel::Circle(Circle::new(1.0).unwrap());
        let cloud = PointCloud::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let eps = epsilon_rate(&model, &cloud, 1e-3).unwrap();
        assert!((eps.value - 2.0).abs() <= 1e-3 + 1e-9);
    }

    #[test]
    fn model_config_round_trip() {
        let json = r#"{"family":"torus","noise":{"kind":"tubular","gamma":0.05},"seed":3,"n":10}"#;
        let cfg: ModelConfig = serde_json::from_str(json).unwrap();
        let out = cfg.run().unwrap();
        assert_eq!(out.cloud.len(), 10);
        assert!(out.clean.is_some());
        assert!(serde_json::from_str::<ModelConfig>(
            r#"{"family":"dodecahedron","n":3}"#
        )
        .unwrap()
        .build_model()
        .is_err());
    }
}

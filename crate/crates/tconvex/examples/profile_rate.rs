use std::time::Instant;
use tconvex::estimate::{oracle_scale, reconstruct, reconstruction_risk};
use tconvex::manifolds::{sample, Circle, ManifoldModel, NoiseSpec};

fn main() {
    let n = 8000;
    let model = ManifoldModel::Circle(Circle::new(1.0).unwrap());
    let t0 = Instant::now();
    let out = sample(&model, n, NoiseSpec::None, 0).unwrap();
    println!("sample: {:?}", t0.elapsed());
    let t = oracle_scale(n, 1, 1.0 / std::f64::consts::TAU).unwrap();
    let t1 = Instant::now();
    let complex = reconstruct(&out.cloud, t, 1).unwrap();
    println!("reconstruct: {:?} ({} simplices)", t1.elapsed(), complex.count());
    let resolution = (t * t / 20.0).clamp(2e-6, 1.0 / 200.0);
    println!("resolution: {resolution}");
    let t2 = Instant::now();
    let risk = reconstruction_risk(&complex, &out.cloud, &model, resolution).unwrap();
    println!("risk: {:?} -> {risk}", t2.elapsed());
}

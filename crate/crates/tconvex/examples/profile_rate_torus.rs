use std::time::Instant;
use tconvex::estimate::{oracle_scale, reconstruct, reconstruction_risk};
use tconvex::manifolds::{sample, ManifoldModel, NoiseSpec, Torus};

fn main() {
    let model = ManifoldModel::Torus(Torus::new(1.0, 4.0).unwrap());
    for n in [500usize, 8000] {
        let out = sample(&model, n, NoiseSpec::None, 0).unwrap();
        let t = oracle_scale(n, 2, 0.025).unwrap();
        let t1 = Instant::now();
        let complex = reconstruct(&out.cloud, t, 2).unwrap();
        let build = t1.elapsed();
        let t2 = Instant::now();
        let risk = reconstruction_risk(&complex, &out.cloud, &model, 0.02).unwrap();
        println!(
            "n={n} t={t:.3} simplices={} build={build:?} risk={risk:.4} risk_time={:?}",
            complex.count(),
            t2.elapsed()
        );
    }
}

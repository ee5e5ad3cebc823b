//! The Radon-KKM alternative, colorful KKM and colorful Brouwer.

use std::sync::Arc;

use equibu::cover_solvers::RefinementConfig;
use equibu::kkm_brouwer::{
    radon_kkm_alternative, solve_colorful_brouwer, solve_colorful_kkm, SimplexMap, StochasticFn,
};

fn main() -> anyhow::Result<()> {
    let cfg = RefinementConfig::with_tol(1e-3);

    let identity: SimplexMap = Arc::new(|x: &[f64]| x.to_vec());
    println!("identity: {:?}", radon_kkm_alternative(identity.clone(), 2, &cfg)?);
    let constant: SimplexMap = Arc::new(|_: &[f64]| vec![1.0, 0.0, 0.0]);
    println!("constant: {:?}", radon_kkm_alternative(constant, 2, &cfg)?);

    let twisted = |s: f64| -> SimplexMap {
        Arc::new(move |x: &[f64]| (0..3).map(|i| x[i] * (1.0 + s * (x[(i + 1) % 3] - x[(i + 2) % 3]))).collect())
    };
    let maps = vec![identity, twisted(0.5), twisted(-0.5)];
    let (r, diag) = solve_colorful_kkm(&maps, 2, &cfg)?;
    println!("colorful KKM: {r:?}\n  {diag:?}");

    // a contraction towards c copied into every row
    let c = [0.2, 0.3, 0.5];
    let h: StochasticFn = Arc::new(move |x: &[f64]| {
        let row: Vec<f64> = (0..3).map(|k| 0.5 * x[k] + 0.5 * c[k]).collect();
        vec![row; 3]
    });
    println!("colorful Brouwer: {:?}", solve_colorful_brouwer(h, 2, &cfg)?);
    Ok(())
}

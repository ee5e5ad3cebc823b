//! Cyclic covers of the circle and orbit collapse for `f(θ) = cos θ`.

use std::sync::Arc;

use equibu::cover_solvers::{solve_zp_cover, CoverFamilySet, RefinementConfig, SetSpec};
use equibu::matrix_bu::{orbit_collapse, CollapseResult};

fn main() -> anyhow::Result<()> {
    let cfg = RefinementConfig::with_tol(1e-3);
    let arc = SetSpec::Arc { from: -70.0, to: 70.0, margin: 0.0 };
    let fam = CoverFamilySet::from_specs(3, vec![vec![arc]])?;
    let out = solve_zp_cover(&fam, &[0], &cfg)?;
    let w = out.witness().expect("witness");
    println!("arc meets its rotate near {:.2} degrees", w.point[1].atan2(w.point[0]).to_degrees());

    let cos = Arc::new(|x: &[f64]| vec![x[0]]);
    if let CollapseResult::Found(c) = orbit_collapse(cos, 3, 1, &cfg)? {
        let angles: Vec<f64> = c.orbit.iter().map(|x| x[1].atan2(x[0]).to_degrees()).collect();
        println!("orbit at {angles:.2?} degrees, y = {:.4?}, alpha = {:.4}, residual {:.1e}", c.y, c.alpha, c.residual);
    }
    Ok(())
}

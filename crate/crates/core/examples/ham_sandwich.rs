//! Ham sandwich cuts: bisection, equalization, prescribed fractions and the
//! colorful two-family configuration with no common cut.

use equibu::cover_solvers::RefinementConfig;
use equibu::ham_sandwich::{
    ham_sandwich_cut, random_cloud, solve_bhj_fractions, solve_colorful_hs, ParabolaFamilies,
};

fn main() -> anyhow::Result<()> {
    let cfg = RefinementConfig::with_tol(1e-3);
    let a = random_cloud(&[-2.0, 0.0], 1.0, 20, 3)?;
    let b = random_cloud(&[2.0, 1.0], 1.0, 20, 4)?;
    let cut = ham_sandwich_cut(&[a, b], &cfg)?;
    let cut = cut.cut().expect("bisector");
    println!("bisector u = {:.4?}, fractions {:.5?}", cut.u, cut.fractions());

    let a = random_cloud(&[-5.0, 0.0], 1.0, 60, 5)?;
    let b = random_cloud(&[5.0, 0.0], 1.0, 60, 6)?;
    let cut = solve_bhj_fractions(&[a, b], &[0.25, 0.75], &[0.0, 5.0], &cfg)?;
    println!("quarter/three-quarter cut: {:.5?}", cut.cut().expect("cut").fractions());

    let fig = ParabolaFamilies::standard();
    println!("naive common cut exists: {}", fig.naive_scan(0.01, 0.05)?.found);
    let r = solve_colorful_hs(&fig.families(), &cfg)?;
    println!("colorful result: {}", serde_json::to_string(&r)?);
    Ok(())
}

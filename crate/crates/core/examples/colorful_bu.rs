//! Colorful Borsuk-Ulam on an odd matrix field, and a zero of an odd map.

use std::sync::Arc;

use equibu::cover_solvers::RefinementConfig;
use equibu::matrix_bu::{classical_bu_zero, solve_colorful_bu, OddMatrixField, ZeroResult};

fn main() -> anyhow::Result<()> {
    let cfg = RefinementConfig::with_tol(1e-3);

    // M_ij(x) = x_{(i+j) mod 3} on S^2
    let f = OddMatrixField::new(
        3,
        Arc::new(|x: &[f64]| (0..3).map(|i| (0..3).map(|j| x[(i + j) % 3]).collect()).collect()),
    );
    let r = solve_colorful_bu(&f, &cfg)?;
    let w = r.witness().expect("witness");
    println!("x = {:.4?}\noutcome = {:?}\nverified = {}", w.x, w.outcome, w.verify(&f));

    // an odd map S^2 -> R^2 vanishes somewhere
    let g = Arc::new(|x: &[f64]| vec![x[0] + x[2], x[1] - x[0] * x[2] * x[2]]);
    if let ZeroResult::Found { x, norm, .. } = classical_bu_zero(g, 2, &cfg)? {
        println!("zero near {x:.4?} with |f(x)| = {norm:.2e}");
    }
    Ok(())
}

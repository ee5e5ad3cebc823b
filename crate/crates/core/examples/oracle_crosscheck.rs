//! Brute-force references against the solvers.

use equibu::complexes::crosspolytope;
use equibu::fan_core::{random_labeling, solve_fan_z2, FanCertificate};
use equibu::ham_sandwich::random_cloud;
use equibu::reference_oracles::{exhaustive_fan_scan, line_sweep_2d, FractionConstraint, SweepConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let sq = crosspolytope(2)?.subdivide_times(1, usize::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut agree = 0;
    for _ in 0..100 {
        let l = random_labeling(&sq, 2, &mut rng).to_signed().expect("Z/2");
        let cert = solve_fan_z2(&sq, &l, &[1, 1])?;
        let scan = exhaustive_fan_scan(&sq, &l, Some(&[1, 1]))?;
        let found = match &cert {
            FanCertificate::ComplementaryEdge { edge, .. } => scan.complementary_edges.contains(edge),
            FanCertificate::TargetFacet { facet, .. } => scan.target_facets.iter().any(|(f, _)| f == facet),
            FanCertificate::OrbitFace { .. } => false,
        };
        agree += found as usize;
    }
    println!("solver certificate listed by the exhaustive scan: {agree}/100");

    let ms = vec![random_cloud(&[-2.0, 0.0], 1.0, 20, 3)?, random_cloud(&[2.0, 1.0], 1.0, 20, 4)?];
    let cons = [FractionConstraint::equal(0, 0.5), FractionConstraint::equal(1, 0.5)];
    let sweep = line_sweep_2d(&ms, &cons, &SweepConfig { resolution: 400, slack: 1e-2 })?;
    println!("bisecting lines on the grid: {}, best u = {:.4?}", sweep.satisfied.len(), sweep.best_u);
    Ok(())
}

//! Covers of spheres by sets and their antipodes: a point in one set of
//! every index with prescribed signs, or a violation report.

use equibu::complexes::crosspolytope;
use equibu::fan_core::sign_to_excluded;
use equibu::cover_solvers::{
    solve_colorful_fan_cover, solve_fan_cover, CoverFamilySet, RefinementConfig, SetSpec,
};

fn main() -> anyhow::Result<()> {
    let cap = |c: [f64; 3]| SetSpec::Cap { center: c.to_vec(), radius: 60.0, margin: 0.0 };
    let caps = vec![cap([1.0, 0.0, 0.0]), cap([0.0, 1.0, 0.0]), cap([0.0, 0.0, 1.0])];
    let fam = CoverFamilySet::from_specs(2, vec![caps])?;
    let cfg = RefinementConfig::with_tol(1e-3);
    let sphere = crosspolytope(3)?;
    for signs in [[1, 1, 1], [1, -1, 1]] {
        let out = solve_fan_cover(&fam, &signs, &cfg)?;
        let w = out.witness().expect("caps of radius 60 meet in every octant");
        println!(
            "signs {signs:?}: point {:.4?}, residual {:.2e}, depth {}, verified {}",
            w.point,
            w.residual,
            w.depth,
            w.verify(&fam, &sphere, &signs.map(sign_to_excluded), 1e-3)
        );
    }

    // two families of arcs on the circle, the second rotated by 10 degrees
    let arc = |from: f64, to: f64| SetSpec::Arc { from, to, margin: 0.0 };
    let f1 = vec![arc(-45.0, 45.0), arc(45.0, 135.0)];
    let f2 = f1.iter().map(|s| s.rotated(10.0)).collect();
    let fam = CoverFamilySet::from_specs(2, vec![f1, f2])?;
    let out = solve_colorful_fan_cover(&fam, &[1, 1], &cfg)?;
    println!("colorful arcs: {}", serde_json::to_string(&out)?);
    Ok(())
}

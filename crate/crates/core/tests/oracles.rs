//! Solvers checked against the brute-force references, plus frozen values
//! for the fixed inputs in `data/`.

mod common;

use std::sync::Arc;

use equibu::complexes::{crosspolytope, zp_join_sphere, SimplicialComplex};
use equibu::cover_solvers::RefinementConfig;
use equibu::fan_core::{random_labeling, solve_fan_z2, solve_fan_zp, FanCertificate};
use equibu::ham_sandwich::{
    equalizing_residual, ham_sandwich_cut, random_cloud, solve_bhj_fractions, solve_equalizing_hs,
    ParabolaFamilies, SmoothedPointMeasure,
};
use equibu::matrix_bu::{classical_bu_zero, ZeroResult};
use equibu::reference_oracles::{
    exhaustive_fan_scan, exhaustive_zp_scan, line_sweep_2d, sphere_grid_search, FractionConstraint, SweepConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fan_certificates_appear_in_the_exhaustive_scan() {
    let sc = crosspolytope(3).unwrap().subdivide_times(1, usize::MAX).unwrap();
    for seed in 0..40 {
        let l = random_labeling(&sc, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let signed = l.to_signed().unwrap();
        let signs = [1, -1, 1];
        let scan = exhaustive_fan_scan(&sc, &signed, Some(&signs)).unwrap();
        match solve_fan_z2(&sc, &signed, &signs).unwrap() {
            FanCertificate::ComplementaryEdge { edge, .. } => {
                assert!(scan.complementary_edges.contains(&edge), "seed {seed}")
            }
            FanCertificate::TargetFacet { facet, .. } => {
                assert!(scan.target_facets.iter().any(|(f, _)| *f == facet), "seed {seed}")
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn zp_certificates_appear_in_the_exhaustive_scan() {
    let sc = zp_join_sphere(3, 2).unwrap().subdivide_times(1, usize::MAX).unwrap();
    for seed in 0..40 {
        let l = random_labeling(&sc, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let shifts = [1, 2];
        let scan = exhaustive_zp_scan(&sc, &l, &shifts).unwrap();
        match solve_fan_zp(&sc, &l, &shifts).unwrap() {
            FanCertificate::OrbitFace { face, block } => assert!(scan.orbit_faces.contains(&(face, block))),
            FanCertificate::TargetFacet { facet, .. } => assert!(scan.target_facets.contains(&facet)),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn small_complexes() {
    let square = zp_join_sphere(2, 2).unwrap();
    assert_eq!(square.complex().f_vector(), vec![4, 4]);
    let (sd, _) = SimplicialComplex::simplex(2).barycentric_subdivision();
    assert_eq!(sd.vertices().len(), 7);
    assert_eq!(sd.facets().len(), 6);
}

#[test]
fn classical_zero_agrees_with_the_grid() {
    let f = |u: &[f64]| vec![u[1] - u[2], u[0]];
    let cfg = RefinementConfig::with_tol(1e-4);
    let x = match classical_bu_zero(Arc::new(f), 2, &cfg).unwrap() {
        ZeroResult::Found { x, .. } => x,
        r => panic!("{r:?}"),
    };
    let norm = |u: &[f64]| f(u).iter().map(|t| t * t).sum::<f64>().sqrt();
    let grid = sphere_grid_search(2, 64, norm).unwrap();
    assert!(grid.value < 0.05);
    // the zero set is the pair ±(0, h, h); both points sit next to it
    let h = 0.5f64.sqrt();
    for p in [&x, &grid.point] {
        let d = (p[0].powi(2) + (p[1].abs() - h).powi(2) + (p[2].abs() - h).powi(2)).sqrt();
        assert!(d < 0.05, "{p:?}");
    }
}

#[test]
fn equalizing_a_repeated_measure() {
    let a = random_cloud(&[0.0, 0.0], 1.0, 30, 1).unwrap();
    let b = random_cloud(&[3.0, 1.0], 1.0, 30, 2).unwrap();
    let ms = vec![a.clone(), b, a];
    let cut = solve_equalizing_hs(&ms, &RefinementConfig::with_tol(1e-3)).unwrap();
    assert!(equalizing_residual(&ms, &cut.cut().unwrap().u) <= 1e-3);
}

#[test]
fn half_fractions_agree_with_the_classical_cut() {
    let ms: Vec<SmoothedPointMeasure> =
        vec![random_cloud(&[-3.0, 0.0], 1.0, 40, 5).unwrap(), random_cloud(&[3.0, 1.0], 1.0, 40, 6).unwrap()];
    let cfg = RefinementConfig::with_tol(1e-3);
    let classical = ham_sandwich_cut(&ms, &cfg).unwrap();
    let bhj = solve_bhj_fractions(&ms, &[0.5, 0.5], &[0.0, 8.0], &cfg).unwrap();
    for cut in [classical.cut().unwrap(), bhj.cut().unwrap()] {
        for f in cut.fractions() {
            assert!((f - 0.5).abs() <= 2e-3, "{f}");
        }
    }
    let constraints = [FractionConstraint::equal(0, 0.5), FractionConstraint::equal(1, 0.5)];
    let sweep = line_sweep_2d(&ms, &constraints, &SweepConfig { resolution: 400, slack: 0.02 }).unwrap();
    assert!(!sweep.is_empty());
}

#[test]
fn parabola_naive_margin_is_frozen() {
    let scan = ParabolaFamilies::standard().naive_scan(0.01, 0.05).unwrap();
    assert!(!scan.found);
    assert!((scan.best_margin - -0.165).abs() < 5e-3, "{}", scan.best_margin);
}

#[test]
fn parabola_residuals_at_the_vertical_direction() {
    // u = (0, 1, 0) is the half-plane x <= 0; the shared point of r1 and g1
    // sits on the line and is split evenly by the smoothing
    let fig = ParabolaFamilies::standard();
    let u = [0.0, 1.0, 0.0];
    let got: Vec<f64> = [&fig.r1, &fig.g1, &fig.r2, &fig.g2].iter().map(|m| m.residual(&u)).collect();
    for (g, want) in got.iter().zip([49.5, -49.5, 50.0, -50.0]) {
        assert!((g - want).abs() < 1e-9, "{got:?}");
    }
}

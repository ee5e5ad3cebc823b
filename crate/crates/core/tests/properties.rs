mod common;

use equibu::cli_io::{labeling_to_json, parse_labeling, FieldJson, Monomial};
use equibu::complexes::{crosspolytope, zp_join_sphere, ComplexJson, SymmetricComplex};
use equibu::cover_solvers::SetSpec;
use equibu::fan_core::{random_labeling, sign_to_excluded, solve_fan_z2, solve_fan_zp};
use equibu::ham_sandwich::SmoothedPointMeasure;
use equibu::matrix_bu::OddMatrixField;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_matrix_field, random_unit};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, any::<f64>().prop_filter("finite", |x| x.is_finite())]
}

fn measure() -> impl Strategy<Value = SmoothedPointMeasure> {
    (1usize..4, 1usize..8).prop_flat_map(|(dim, n)| {
        (
            prop::collection::vec(prop::collection::vec(-10.0..10.0f64, dim), n),
            prop::collection::vec(0.01..5.0f64, n),
            1e-6..1.0f64,
        )
            .prop_map(|(points, weights, delta)| SmoothedPointMeasure { points, weights, delta })
    })
}

fn set_spec() -> impl Strategy<Value = SetSpec> {
    let leaf = prop_oneof![
        (prop::collection::vec(finite(), 3), 0.0..180.0f64, 0.0..1.0f64)
            .prop_map(|(center, radius, margin)| SetSpec::Cap { center, radius, margin }),
        (finite(), finite(), 0.0..1.0f64).prop_map(|(from, to, margin)| SetSpec::Arc { from, to, margin }),
        (prop::collection::vec(finite(), 2), finite(), 0.0..1.0f64)
            .prop_map(|(normal, offset, margin)| SetSpec::Halfspace { normal, offset, margin }),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| prop::collection::vec(inner, 1..3).prop_map(|sets| SetSpec::Union { sets }))
}

fn sphere(k: usize) -> SymmetricComplex {
    crosspolytope(k).unwrap().subdivide_times(1, usize::MAX).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measures_round_trip_bit_exactly(m in measure()) {
        let text = serde_json::to_string(&m).unwrap();
        let back: SmoothedPointMeasure = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn set_specs_round_trip_bit_exactly(s in set_spec()) {
        let back: SetSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn polynomial_fields_round_trip(coefs in prop::collection::vec(finite(), 1..6)) {
        let comps: Vec<Vec<Monomial>> = coefs
            .iter()
            .enumerate()
            .map(|(k, c)| vec![Monomial { coef: *c, pow: vec![k as u32 % 3, 1] }])
            .collect();
        let f = FieldJson { entries: None, components: Some(comps) };
        let back: FieldJson = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn labelings_and_complexes_round_trip(seed in any::<u64>(), k in 2usize..4) {
        let sc = sphere(k);
        let json = sc.to_json();
        let back: ComplexJson = serde_json::from_str(&serde_json::to_string(&json).unwrap()).unwrap();
        prop_assert_eq!(&back, &json);
        prop_assert_eq!(SymmetricComplex::from_json(&back).unwrap().to_json(), json);

        let l = random_labeling(&sc, k, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_labeling(&labeling_to_json(&l), 2).unwrap(), l);
    }

    #[test]
    fn fan_certificates_always_verify(seed in any::<u64>(), k in 2usize..4, mask in 0u32..8) {
        let sc = sphere(k);
        let l = random_labeling(&sc, k, &mut ChaCha8Rng::seed_from_u64(seed));
        let signs: Vec<i8> = (0..k).map(|i| if mask >> i & 1 == 0 { 1 } else { -1 }).collect();
        let cert = solve_fan_z2(&sc, &l.to_signed().unwrap(), &signs).unwrap();
        let excluded: Vec<u32> = signs.iter().map(|s| sign_to_excluded(*s)).collect();
        prop_assert!(cert.verify(&l, &excluded));
    }

    #[test]
    fn zp_certificates_always_verify(seed in any::<u64>(), p in prop::sample::select(vec![3u32, 5]), shift in 0u32..5) {
        let sc = zp_join_sphere(p, 1).unwrap().subdivide_times(1, usize::MAX).unwrap();
        let l = random_labeling(&sc, 1, &mut ChaCha8Rng::seed_from_u64(seed));
        let shifts = [shift % p];
        let cert = solve_fan_zp(&sc, &l, &shifts).unwrap();
        prop_assert!(cert.verify(&l, &shifts));
    }

    #[test]
    fn random_labelings_are_equivariant(seed in any::<u64>(), k in 2usize..4) {
        let sc = sphere(k);
        let l = random_labeling(&sc, k, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(l.validate(&sc, k).is_ok());
    }

    #[test]
    fn matrix_fields_are_odd(seed in any::<u64>(), size in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = OddMatrixField::new(size, random_matrix_field(size, &mut rng));
        for _ in 0..16 {
            let u = random_unit(size, &mut rng);
            let neg: Vec<f64> = u.iter().map(|t| -t).collect();
            let (a, b) = (f.eval(&u), f.eval(&neg));
            for (ra, rb) in a.iter().zip(&b) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert_eq!(*x, -*y);
                }
            }
        }
    }

    #[test]
    fn halfspace_residuals_are_odd_and_complementary(m in measure(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unit(m.dim() + 1, &mut rng);
        let neg: Vec<f64> = u.iter().map(|t| -t).collect();
        prop_assert_eq!(m.residual(&u), -m.residual(&neg));
        let total = m.halfspace_value(&u) + m.halfspace_value(&neg);
        prop_assert!((total - m.total_mass()).abs() <= 1e-9 * m.total_mass());
    }

    #[test]
    fn local_refinement_keeps_a_free_symmetric_sphere(picks in prop::collection::vec(0usize..1000, 1..4)) {
        let mut sc = crosspolytope(3).unwrap();
        for pick in picks {
            let facets = sc.complex().facets().to_vec();
            let f = facets[pick % facets.len()].clone();
            sc = sc.refine_facets(&[f]);
            prop_assert!(sc.check_invariants().is_ok());
            prop_assert!(sc.check_free().is_ok());
            prop_assert_eq!(sc.complex().euler_characteristic(), 2);
        }
    }
}

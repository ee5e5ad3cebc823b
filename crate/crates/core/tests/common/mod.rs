#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use equibu::matrix_bu::{MatrixFn, VectorFn};
use rand::{Rng, RngExt};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Random odd polynomial in `n` variables: degree-one and degree-three
/// monomials with coefficients in [-1, 1].
#[derive(Clone, Debug)]
pub struct OddPoly {
    terms: Vec<(f64, Vec<usize>)>,
}

impl OddPoly {
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut terms: Vec<(f64, Vec<usize>)> = (0..n).map(|k| (rng.random_range(-1.0..1.0), vec![k])).collect();
        for _ in 0..2 {
            let idx = (0..3).map(|_| rng.random_range(0..n)).collect();
            terms.push((rng.random_range(-1.0..1.0), idx));
        }
        Self { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, idx)| idx.iter().fold(*c, |acc, k| acc * x[*k]))
            .sum()
    }
}

pub fn random_matrix_field(size: usize, rng: &mut impl Rng) -> MatrixFn {
    let polys: Vec<Vec<OddPoly>> = (0..size)
        .map(|_| (0..size).map(|_| OddPoly::random(size, rng)).collect())
        .collect();
    Arc::new(move |x: &[f64]| polys.iter().map(|r| r.iter().map(|p| p.eval(x)).collect()).collect())
}

pub fn random_vector_field(n_vars: usize, comps: usize, rng: &mut impl Rng) -> VectorFn {
    let polys: Vec<OddPoly> = (0..comps).map(|_| OddPoly::random(n_vars, rng)).collect();
    Arc::new(move |x: &[f64]| polys.iter().map(|p| p.eval(x)).collect())
}

pub fn random_unit(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if r > 1e-3 && r <= 1.0 {
            return v.iter().map(|t| t / r).collect();
        }
    }
}

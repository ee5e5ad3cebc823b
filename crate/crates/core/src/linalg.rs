//! Small dense vector helpers shared by the solvers.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Scales `a` to unit length. Returns `None` for (numerically) zero vectors.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n <= 1e-300 || !n.is_finite() {
        return None;
    }
    Some(a.iter().map(|x| x / n).collect())
}

pub fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Mat { n, data }
    }

    pub fn neg_identity(n: usize) -> Self {
        let mut m = Self::identity(n);
        m.data.iter_mut().for_each(|x| *x = -*x);
        m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| dot(&self.data[i * self.n..(i + 1) * self.n], x))
            .collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Mat { n, data }
    }

    pub fn is_neg_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.get(i, j) == if i == j { -1.0 } else { 0.0 })
        })
    }

    /// Least-squares linear map sending each `xs[k]` to `ys[k]`.
    pub fn fit(xs: &[Vec<f64>], ys: &[Vec<f64>]) -> Option<Mat> {
        let n = xs.first()?.len();
        let m = xs.len();
        let x = nalgebra::DMatrix::from_fn(n, m, |i, k| xs[k][i]);
        let y = nalgebra::DMatrix::from_fn(n, m, |i, k| ys[k][i]);
        let gram = &x * x.transpose();
        let inv = gram.try_inverse()?;
        let g = y * x.transpose() * inv;
        Some(Mat {
            n,
            data: (0..n * n).map(|k| g[(k / n, k % n)]).collect(),
        })
    }
}

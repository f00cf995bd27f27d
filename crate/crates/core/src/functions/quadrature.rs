use std::f64::consts::PI;

/// Tensor-product Gauss–Legendre rule on `[0,1]^dim`.
///
/// Points are ordered with direction 0 running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    dim: usize,
    points_per_direction: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[0,1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Newton iteration for the i-th root of P_n on [-1,1]
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let step = p1 / dp;
            t -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[n - 1 - i] = 0.5 * (t + 1.0);
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

impl Quadrature {
    /// The rule exact for tensor polynomials of per-direction degree `degree`,
    /// using `ceil((degree + 1) / 2)` points per direction.
    pub fn new(dim: usize, degree: usize) -> Self {
        let n = degree / 2 + 1;
        let (nodes, w1) = gauss_legendre(n);
        let total = n.pow(dim as u32);
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rest = flat;
            let mut point = Vec::with_capacity(dim);
            let mut weight = 1.0;
            for _ in 0..dim {
                point.push(nodes[rest % n]);
                weight *= w1[rest % n];
                rest /= n;
            }
            points.push(point);
            weights.push(weight);
        }
        Self {
            dim,
            points_per_direction: n,
            points,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_direction(&self) -> usize {
        self.points_per_direction
    }

    /// Highest per-direction degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.points_per_direction - 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.points.iter().map(Vec::as_slice).zip(self.weights.iter().copied())
    }
}

//! Chebyshev collocation on `x in [-1/2, 1/2]`.
//!
//! Nodes are Chebyshev-Gauss-Lobatto points `x_j = -cos(pi j / N) / 2`, listed in
//! ascending order. Differentiation matrices come from the Weideman-Reddy
//! weighted-interpolant construction, which also yields the clamped matrices
//! (`u = Du = 0` at both walls) acting on interior values only.

use std::f64::consts::PI;

use faer::Mat;

use crate::{Error, Result};

pub const DEFAULT_POINTS: usize = 48;
pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone)]
pub struct CollocationGrid {
    pub n_points: usize,
    pub nodes: Vec<f64>,
    /// Clenshaw-Curtis weights; they sum to the interval length 1.
    pub weights: Vec<f64>,
}

impl CollocationGrid {
    /// Number of Chebyshev intervals `N = n_points - 1`.
    pub fn degree(&self) -> usize {
        self.n_points - 1
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.n_points);
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn interior(&self) -> &[f64] {
        &self.nodes[1..self.n_points - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcMode {
    /// Full-grid matrices, no boundary condition built in.
    None,
    /// Interior-node matrices for fields with `u = Du = 0` at `x = +-1/2`.
    ClampedRigid,
}

#[derive(Debug, Clone)]
pub struct DiffOperators {
    pub bc_mode: BcMode,
    /// Nodes the matrices act on (all nodes, or interior nodes when clamped).
    pub nodes: Vec<f64>,
    pub d1: Mat<f64>,
    pub d2: Mat<f64>,
    pub d3: Mat<f64>,
    pub d4: Mat<f64>,
}

/// Reference nodes on [-1, 1], exactly antisymmetric with exact endpoints.
fn reference_nodes(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| (PI * (2.0 * j as f64 - n as f64) / (2.0 * n as f64)).sin())
        .collect()
}

pub fn build_grid(n_points: usize) -> Result<CollocationGrid> {
    if n_points < MIN_POINTS {
        return Err(Error::InvalidArgument(format!(
            "n_points = {n_points}, need at least {MIN_POINTS}"
        )));
    }
    let n = n_points - 1;
    let nodes = reference_nodes(n).into_iter().map(|s| 0.5 * s).collect();
    Ok(CollocationGrid { n_points, nodes, weights: clenshaw_curtis(n) })
}

/// Clenshaw-Curtis weights on N+1 Lobatto points, scaled to an interval of length 1.
fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut w = vec![0.0; n + 1];
    let end = if n % 2 == 0 { 1.0 / (nf * nf - 1.0) } else { 1.0 / (nf * nf) };
    w[0] = end;
    w[n] = end;
    for (j, wj) in w.iter_mut().enumerate().take(n).skip(1) {
        let th = PI * j as f64 / nf;
        let mut v = 1.0;
        if n % 2 == 0 {
            for k in 1..n / 2 {
                v -= 2.0 * (2.0 * k as f64 * th).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
            v -= (nf * th).cos() / (nf * nf - 1.0);
        } else {
            for k in 1..=(n - 1) / 2 {
                v -= 2.0 * (2.0 * k as f64 * th).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
        }
        *wj = 2.0 * v / nf;
    }
    w.iter().map(|v| 0.5 * v).collect()
}

/// Weideman-Reddy `poldif`: derivatives of the weighted interpolant
/// `alpha(x) p(x) / alpha(x_j)`. `beta[l][j]` holds `alpha^(l+1)(x_j) / alpha(x_j)`.
fn poldif(x: &[f64], alpha: &[f64], beta: &[Vec<f64>]) -> Vec<Mat<f64>> {
    let n = x.len();
    let order = beta.len();
    let dx = |i: usize, j: usize| if i == j { 1.0 } else { x[i] - x[j] };
    let c: Vec<f64> = (0..n)
        .map(|i| alpha[i] * (0..n).map(|j| dx(i, j)).product::<f64>())
        .collect();
    let z = Mat::<f64>::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 / dx(i, j) });
    // x_off[k][i]: k-th off-diagonal entry of row i of z
    let x_off = Mat::<f64>::from_fn(n - 1, n, |k, i| z[(i, if k < i { k } else { k + 1 })]);

    let mut y = Mat::<f64>::from_fn(n - 1, n, |_, _| 1.0);
    let mut d = Mat::<f64>::identity(n, n);
    let mut out = Vec::with_capacity(order);
    for ell in 1..=order {
        let l = ell as f64;
        let mut ynew = Mat::<f64>::zeros(n, n);
        for i in 0..n {
            let mut acc = beta[ell - 1][i];
            ynew[(0, i)] = acc;
            for k in 0..n - 1 {
                acc += l * y[(k, i)] * x_off[(k, i)];
                ynew[(k + 1, i)] = acc;
            }
        }
        let dnew = Mat::<f64>::from_fn(n, n, |i, j| {
            if i == j {
                ynew[(n - 1, i)]
            } else {
                l * z[(i, j)] * (c[i] / c[j] * d[(i, i)] - d[(i, j)])
            }
        });
        y = Mat::<f64>::from_fn(n - 1, n, |k, i| ynew[(k, i)]);
        d = dnew;
        out.push(d.clone());
    }
    out
}

fn scaled(mut ms: Vec<Mat<f64>>) -> [Mat<f64>; 4] {
    // d/dx = 2 d/dxi on [-1/2, 1/2]
    for (k, m) in ms.iter_mut().enumerate() {
        let s = 2f64.powi(k as i32 + 1);
        *m = &*m * faer::Scale(s);
    }
    let mut it = ms.into_iter();
    [it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
}

pub fn diff_operators(grid: &CollocationGrid, bc_mode: BcMode) -> DiffOperators {
    let n = grid.degree();
    let xi = reference_nodes(n);
    match bc_mode {
        BcMode::None => {
            let alpha = vec![1.0; n + 1];
            let beta = vec![vec![0.0; n + 1]; 4];
            let [d1, d2, d3, d4] = scaled(poldif(&xi, &alpha, &beta));
            DiffOperators { bc_mode, nodes: grid.nodes.clone(), d1, d2, d3, d4 }
        }
        BcMode::ClampedRigid => {
            // weight (1 - xi^2)^2 enforces u = u' = 0 at xi = +-1
            let inner = &xi[1..n];
            let s2: Vec<f64> = (1..n).map(|j| (PI * j as f64 / n as f64).sin().powi(2)).collect();
            let alpha: Vec<f64> = s2.iter().map(|s| s * s).collect();
            let beta = vec![
                inner.iter().zip(&alpha).zip(&s2).map(|((x, a), s)| -4.0 * s * x / a).collect(),
                inner.iter().zip(&alpha).map(|(x, a)| 4.0 * (3.0 * x * x - 1.0) / a).collect(),
                inner.iter().zip(&alpha).map(|(x, a)| 24.0 * x / a).collect(),
                alpha.iter().map(|a| 24.0 / a).collect(),
            ];
            let [d1, d2, d3, d4] = scaled(poldif(inner, &alpha, &beta));
            DiffOperators { bc_mode, nodes: grid.interior().to_vec(), d1, d2, d3, d4 }
        }
    }
}

/// Spectral antiderivative on the grid: `(Q f)(x_i) = int_{-1/2}^{x_i} f`.
pub fn cumulative_integration(grid: &CollocationGrid) -> Mat<f64> {
    let n = grid.degree();
    let nf = n as f64;
    // node j sits at xi = cos(t_j), t_j = pi (N - j) / N
    let t = |j: usize| PI * (n - j) as f64 / nf;
    let coef = Mat::<f64>::from_fn(n + 1, n + 1, |k, j| {
        let mut v = 2.0 / nf * (k as f64 * t(j)).cos();
        if j == 0 || j == n {
            v *= 0.5;
        }
        if k == 0 || k == n {
            v *= 0.5;
        }
        v
    });
    // antiderivative coefficients b_1..b_{N+1}
    let mut integ = Mat::<f64>::zeros(n + 2, n + 1);
    for k in 1..=n + 1 {
        let kf = k as f64;
        if k == 1 {
            integ[(1, 0)] += 1.0;
            if n >= 2 {
                integ[(1, 2)] -= 0.5;
            }
        } else {
            integ[(k, k - 1)] += 1.0 / (2.0 * kf);
            if k < n {
                integ[(k, k + 1)] -= 1.0 / (2.0 * kf);
            }
        }
    }
    // b_0 makes the antiderivative vanish at xi = -1
    for col in 0..=n {
        let mut s = 0.0;
        for k in 1..=n + 1 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            s += integ[(k, col)] * sign;
        }
        integ[(0, col)] = -s;
    }
    let eval = Mat::<f64>::from_fn(n + 1, n + 2, |i, k| (k as f64 * t(i)).cos());
    (&eval * &integ * &coef) * faer::Scale(0.5)
}

/// Everything the stability and Landau solvers need on one resolution.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub grid: CollocationGrid,
    pub full: DiffOperators,
    pub clamped: DiffOperators,
    /// Second derivative for fields vanishing at both walls, interior block.
    pub d2_dirichlet: Mat<f64>,
    pub cumulative: Mat<f64>,
}

impl Discretization {
    pub fn new(n_points: usize) -> Result<Self> {
        let grid = build_grid(n_points)?;
        let full = diff_operators(&grid, BcMode::None);
        let clamped = diff_operators(&grid, BcMode::ClampedRigid);
        let m = n_points - 2;
        let d2_dirichlet = Mat::<f64>::from_fn(m, m, |i, j| full.d2[(i + 1, j + 1)]);
        let cumulative = cumulative_integration(&grid);
        Ok(Self { grid, full, clamped, d2_dirichlet, cumulative })
    }

    pub fn n_points(&self) -> usize {
        self.grid.n_points
    }

    /// Number of interior unknowns per field.
    pub fn n_interior(&self) -> usize {
        self.grid.n_points - 2
    }

    pub fn interior(&self) -> &[f64] {
        self.grid.interior()
    }

    /// Extend interior values by zero wall values.
    pub fn pad(&self, v: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(v.len() + 2);
        out.push(0.0);
        out.extend_from_slice(v);
        out.push(0.0);
        out
    }

    /// Quadrature of a field that vanishes at both walls, given on interior nodes.
    pub fn integrate_interior(&self, f: &[f64]) -> f64 {
        self.grid.weights[1..self.grid.n_points - 1].iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Full-grid derivative of a field vanishing at the walls, restricted to interior nodes.
    pub fn d1_of_vanishing(&self, v: &[f64]) -> Vec<f64> {
        let full = matvec(&self.full.d1, &self.pad(v));
        full[1..full.len() - 1].to_vec()
    }
}

/// Barycentric evaluation at `x` of the polynomial interpolating `values` on the grid.
pub fn interpolate(grid: &CollocationGrid, values: &[f64], x: f64) -> f64 {
    let n = grid.degree();
    let (mut num, mut den) = (0.0, 0.0);
    for (j, (&xj, &fj)) in grid.nodes.iter().zip(values).enumerate() {
        if x == xj {
            return fj;
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            w *= 0.5;
        }
        let t = w / (x - xj);
        num += t * fj;
        den += t;
    }
    num / den
}

pub fn matvec(a: &Mat<f64>, v: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.ncols(), v.len());
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * v[j]).sum()).collect()
}

//! Weakly nonlinear coefficients at the axisymmetric critical point.
//!
//! The critical mode `zeta` and the adjoint null vector `zeta*` are computed from
//! the reduced fourth/second-order operators, pressure eliminated. Pairings use
//! `<U, V> = int u_x v_x + u_y v_y + D u_x D v_x / alpha^2`.

use faer::linalg::solvers::Solve;
use faer::Mat;
use serde::Serialize;

use crate::linstab::{critical_point, shear_profile, CriticalPoint, DEFAULT_ALPHA_BRACKET};
use crate::spectral::{matvec, Discretization};
use crate::{Error, Result};

/// Null vectors are accepted when `sigma_min / sigma_next` is below this.
pub const NULL_GAP: f64 = 1e-3;

/// Amplitude convention shared by every reported `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    /// `max |u_x|`; 1 for the solver output.
    pub max_abs_ux: f64,
    /// Node where `|u_x|` peaks; `u_x` is positive there.
    pub x_at_max: f64,
}

impl Normalization {
    pub fn label(&self) -> String {
        format!("max|ux|={};ux>0@x={:.6}", self.max_abs_ux, self.x_at_max)
    }
}

#[derive(Debug, Clone)]
pub struct CriticalEigenvector {
    pub mu: f64,
    pub t_c: f64,
    pub alpha_c: f64,
    /// Full-grid nodal profiles, wall values included.
    pub ux: Vec<f64>,
    pub uy: Vec<f64>,
    /// `u_z = i w`; this holds `w = D u_x / alpha`.
    pub uz: Vec<f64>,
    pub p: Vec<f64>,
    pub normalization: Normalization,
    /// `||F z||_inf / (||F||_inf ||z||_inf)` for the reduced operator `F`.
    pub residual: f64,
    /// `max |u_x + (D^2 - alpha^2) u_y|`.
    pub sys2_residual: f64,
    pub null_ratio: f64,
}

impl CriticalEigenvector {
    /// Multiply the mode by a real factor; the normalization record follows.
    pub fn scaled(&self, s: f64) -> Self {
        let sc = |v: &[f64]| v.iter().map(|x| s * x).collect::<Vec<_>>();
        Self {
            ux: sc(&self.ux),
            uy: sc(&self.uy),
            uz: sc(&self.uz),
            p: sc(&self.p),
            normalization: Normalization { max_abs_ux: self.normalization.max_abs_ux * s.abs(), ..self.normalization },
            sys2_residual: self.sys2_residual * s.abs(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdjointEigenvector {
    pub vx: Vec<f64>,
    pub vy: Vec<f64>,
    /// `v_z = i w`; this holds `w = D v_x / alpha`.
    pub vz: Vec<f64>,
    pub q: Vec<f64>,
    pub residual: f64,
    pub null_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct QuadraticResponses {
    pub uy11: Vec<f64>,
    pub ux20: Vec<f64>,
    pub uy20: Vec<f64>,
    /// `u_z^20 = i w`; this holds `w = D u_x^20 / (2 alpha)`.
    pub uz20: Vec<f64>,
    /// Relative residual of the coupled second-harmonic solve.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LandauCoefficients {
    pub a: f64,
    pub c: f64,
    pub inner_product: f64,
    pub normalization: Normalization,
}

fn interior(v: &[f64]) -> &[f64] {
    &v[1..v.len() - 1]
}

fn l2_block(disc: &Discretization, a: f64) -> Mat<f64> {
    let m = disc.n_interior();
    let (d2, d4) = (&disc.clamped.d2, &disc.clamped.d4);
    let a2 = a * a;
    Mat::from_fn(m, m, |i, j| d4[(i, j)] - 2.0 * a2 * d2[(i, j)] + if i == j { a2 * a2 } else { 0.0 })
}

fn block(
    m: usize,
    b11: impl Fn(usize, usize) -> f64,
    b12: impl Fn(usize, usize) -> f64,
    b21: impl Fn(usize, usize) -> f64,
    b22: impl Fn(usize, usize) -> f64,
) -> Mat<f64> {
    Mat::from_fn(2 * m, 2 * m, |i, j| match (i < m, j < m) {
        (true, true) => b11(i, j),
        (true, false) => b12(i, j - m),
        (false, true) => b21(i - m, j),
        (false, false) => b22(i - m, j - m),
    })
}

/// Reduced operator at `lambda = 0`: rows `-(a^2-D^2)^2 u_x + a^2 T g u_y` and `u_x + (D^2-a^2) u_y`.
pub fn forward_operator(disc: &Discretization, mu: f64, alpha: f64, taylor: f64) -> Mat<f64> {
    let m = disc.n_interior();
    let x = disc.interior();
    let l2 = l2_block(disc, alpha);
    let d2d = &disc.d2_dirichlet;
    let a2 = alpha * alpha;
    let eye = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    block(
        m,
        |i, j| -l2[(i, j)],
        |i, j| eye(i, j) * a2 * taylor * shear_profile(mu, x[i]),
        eye,
        |i, j| d2d[(i, j)] - a2 * eye(i, j),
    )
}

/// Adjoint reduced operator: rows `(a^2-D^2)^2 v_x - a^2 v_y` and `T g v_x + (D^2-a^2) v_y`.
pub fn adjoint_operator(disc: &Discretization, mu: f64, alpha: f64, taylor: f64) -> Mat<f64> {
    let m = disc.n_interior();
    let x = disc.interior();
    let l2 = l2_block(disc, alpha);
    let d2d = &disc.d2_dirichlet;
    let a2 = alpha * alpha;
    let eye = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    block(
        m,
        |i, j| l2[(i, j)],
        |i, j| -a2 * eye(i, j),
        |i, j| eye(i, j) * taylor * shear_profile(mu, x[i]),
        |i, j| d2d[(i, j)] - a2 * eye(i, j),
    )
}

fn inf_norm(a: &Mat<f64>) -> f64 {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Right null vector of `a` after row equilibration, with `sigma_min / sigma_next`.
fn null_vector(a: &Mat<f64>) -> Result<(Vec<f64>, f64)> {
    let n = a.nrows();
    let scale: Vec<f64> = (0..n).map(|i| max_abs(&(0..n).map(|j| a[(i, j)]).collect::<Vec<_>>())).collect();
    let eq = Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)] / scale[i]);
    let svd = eq.svd().map_err(|e| Error::NumericalFailure(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector();
    let ratio = s[n - 1] / s[n - 2];
    if ratio >= NULL_GAP {
        return Err(Error::DegenerateCriticality { ratio });
    }
    let v = svd.V();
    Ok(((0..n).map(|i| v[(i, n - 1)]).collect(), ratio))
}

fn relative_residual(a: &Mat<f64>, z: &[f64]) -> f64 {
    max_abs(&matvec(a, z)) / (inf_norm(a) * max_abs(z))
}

/// Scale so the first field has unit max modulus and is positive there.
fn normalize_pair(z: &mut [f64], m: usize) -> usize {
    let imax = (0..m).max_by(|&i, &j| z[i].abs().total_cmp(&z[j].abs())).expect("non-empty");
    let s = z[imax];
    z.iter_mut().for_each(|v| *v /= s);
    imax
}

pub fn solve_eigenvector(crit: &CriticalPoint, disc: &Discretization) -> Result<CriticalEigenvector> {
    let (mu, t_c, alpha) = (crit.mu, crit.t_c, crit.alpha_c);
    let m = disc.n_interior();
    let op = forward_operator(disc, mu, alpha, t_c);
    let (mut z, null_ratio) = null_vector(&op)?;
    let imax = normalize_pair(&mut z, m);
    let residual = relative_residual(&op, &z);

    let (ux, uy) = (&z[..m], &z[m..]);
    let d2uy = matvec(&disc.d2_dirichlet, uy);
    let sys2_residual = max_abs(&(0..m).map(|i| ux[i] + d2uy[i] - alpha * alpha * uy[i]).collect::<Vec<_>>());
    let dux = matvec(&disc.clamped.d1, ux);
    let d3ux = matvec(&disc.clamped.d3, ux);
    let uz: Vec<f64> = dux.iter().map(|d| d / alpha).collect();
    let p: Vec<f64> = (0..m).map(|i| (d3ux[i] - alpha * alpha * dux[i]) / (alpha * alpha)).collect();
    Ok(CriticalEigenvector {
        mu,
        t_c,
        alpha_c: alpha,
        ux: disc.pad(ux),
        uy: disc.pad(uy),
        uz: disc.pad(&uz),
        p: disc.pad(&p),
        normalization: Normalization { max_abs_ux: 1.0, x_at_max: disc.interior()[imax] },
        residual,
        sys2_residual,
        null_ratio,
    })
}

pub fn solve_adjoint(crit: &CriticalPoint, disc: &Discretization) -> Result<AdjointEigenvector> {
    let (mu, t_c, alpha) = (crit.mu, crit.t_c, crit.alpha_c);
    let m = disc.n_interior();
    let op = adjoint_operator(disc, mu, alpha, t_c);
    let (mut z, null_ratio) = null_vector(&op)?;
    normalize_pair(&mut z, m);
    let residual = relative_residual(&op, &z);
    let vx = &z[..m];
    let dvx = matvec(&disc.clamped.d1, vx);
    let d3vx = matvec(&disc.clamped.d3, vx);
    let vz: Vec<f64> = dvx.iter().map(|d| d / alpha).collect();
    let q: Vec<f64> = (0..m).map(|i| (d3vx[i] - alpha * alpha * dvx[i]) / (alpha * alpha)).collect();
    Ok(AdjointEigenvector {
        vx: disc.pad(vx),
        vy: disc.pad(&z[m..]),
        vz: disc.pad(&vz),
        q: disc.pad(&q),
        residual,
        null_ratio,
    })
}

/// `<U, V>` for clamped `u_x, v_x` and Dirichlet `u_y, v_y`, given on interior nodes.
pub fn pairing(disc: &Discretization, alpha: f64, ux: &[f64], uy: &[f64], vx: &[f64], vy: &[f64]) -> f64 {
    let dux = matvec(&disc.clamped.d1, ux);
    let dvx = matvec(&disc.clamped.d1, vx);
    let f: Vec<f64> = (0..ux.len())
        .map(|i| ux[i] * vx[i] + uy[i] * vy[i] + dux[i] * dvx[i] / (alpha * alpha))
        .collect();
    disc.integrate_interior(&f)
}

/// `u_y^11 = 2 int_{-1/2}^x P - 2 (x + 1/2) int_{-1/2}^{1/2} P` for a full-grid product `P`.
pub fn phi11_from_product(disc: &Discretization, product: &[f64]) -> Vec<f64> {
    let cum = matvec(&disc.cumulative, product);
    let total = disc.grid.integrate(product);
    let mut out: Vec<f64> = cum.iter().zip(&disc.grid.nodes).map(|(f, x)| 2.0 * f - 2.0 * (x + 0.5) * total).collect();
    let n = out.len();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    out
}

pub fn compute_phi11(eig: &CriticalEigenvector, disc: &Discretization) -> Vec<f64> {
    let prod: Vec<f64> = eig.ux.iter().zip(&eig.uy).map(|(a, b)| a * b).collect();
    phi11_from_product(disc, &prod)
}

/// `(u_x^20, u_y^20, w^20, relative residual)`.
pub type Phi20 = (Vec<f64>, Vec<f64>, Vec<f64>, f64);

/// Second-harmonic response.
pub fn compute_phi20(eig: &CriticalEigenvector, disc: &Discretization) -> Result<Phi20> {
    let (mu, t_c, alpha) = (eig.mu, eig.t_c, eig.alpha_c);
    let m = disc.n_interior();
    let x = disc.interior();
    let (ux, uy) = (interior(&eig.ux), interior(&eig.uy));
    let dux = matvec(&disc.clamped.d1, ux);
    let d2ux = matvec(&disc.clamped.d2, ux);
    let duy = disc.d1_of_vanishing(uy);

    let bracket: Vec<f64> = (0..m).map(|i| ux[i] * d2ux[i] - dux[i] * dux[i]).collect();
    let dbr = disc.d1_of_vanishing(&bracket);
    let mut rhs = vec![0.0; 2 * m];
    for i in 0..m {
        rhs[i] = 2.0 * dbr[i] + 2.0 * alpha * alpha * t_c * (1.0 - mu) * uy[i] * uy[i];
        rhs[m + i] = ux[i] * duy[i] - uy[i] * dux[i];
    }

    let a2 = 2.0 * alpha;
    let l2 = l2_block(disc, a2);
    let d2d = &disc.d2_dirichlet;
    let eye = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let op = block(
        m,
        |i, j| l2[(i, j)],
        |i, j| -eye(i, j) * a2 * a2 * t_c * shear_profile(mu, x[i]),
        eye,
        |i, j| d2d[(i, j)] - a2 * a2 * eye(i, j),
    );
    let n = 2 * m;
    let scale: Vec<f64> = (0..n).map(|i| max_abs(&(0..n).map(|j| op[(i, j)]).collect::<Vec<_>>())).collect();
    let eq = Mat::<f64>::from_fn(n, n, |i, j| op[(i, j)] / scale[i]);
    let sv = eq.singular_values().map_err(|e| Error::NumericalFailure(format!("svd: {e:?}")))?;
    let rcond = sv[n - 1] / sv[0];
    if rcond < 1e-13 {
        return Err(Error::ResonanceAt2Alpha { rcond });
    }
    let b = Mat::<f64>::from_fn(n, 1, |i, _| rhs[i] / scale[i]);
    let sol_m = eq.full_piv_lu().solve(&b);
    let sol: Vec<f64> = (0..n).map(|i| sol_m[(i, 0)]).collect();

    let r = matvec(&op, &sol);
    let diff: Vec<f64> = r.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let residual = max_abs(&diff) / (inf_norm(&op) * max_abs(&sol) + max_abs(&rhs)).max(f64::MIN_POSITIVE);

    let (u20, uy20) = (&sol[..m], &sol[m..]);
    let du20 = matvec(&disc.clamped.d1, u20);
    let uz20: Vec<f64> = du20.iter().map(|d| d / (2.0 * alpha)).collect();
    Ok((disc.pad(u20), disc.pad(uy20), disc.pad(&uz20), residual))
}

pub fn quadratic_responses(eig: &CriticalEigenvector, disc: &Discretization) -> Result<QuadraticResponses> {
    let uy11 = compute_phi11(eig, disc);
    let (ux20, uy20, uz20, residual) = compute_phi20(eig, disc)?;
    Ok(QuadraticResponses { uy11, ux20, uy20, uz20, residual })
}

pub fn compute_c(
    eig: &CriticalEigenvector,
    adj: &AdjointEigenvector,
    resp: &QuadraticResponses,
    disc: &Discretization,
) -> Result<LandauCoefficients> {
    let (mu, t_c, alpha) = (eig.mu, eig.t_c, eig.alpha_c);
    let m = disc.n_interior();
    let x = disc.interior();
    let a2 = alpha * alpha;
    let (ux, uy) = (interior(&eig.ux), interior(&eig.uy));
    let (vx, vy) = (interior(&adj.vx), interior(&adj.vy));

    let ip = pairing(disc, alpha, ux, uy, vx, vy);
    if ip.abs() < 1e-10 {
        return Err(Error::NormalizationDegenerate { value: ip });
    }
    let g_term: Vec<f64> = (0..m).map(|i| shear_profile(mu, x[i]) * uy[i] * vx[i]).collect();
    let a = disc.integrate_interior(&g_term) / ip;

    let dux = matvec(&disc.clamped.d1, ux);
    let d2ux = matvec(&disc.clamped.d2, ux);
    let dvx = matvec(&disc.clamped.d1, vx);
    let duy = disc.d1_of_vanishing(uy);
    let u11 = interior(&resp.uy11);
    let du11 = {
        let full = matvec(&disc.full.d1, &resp.uy11);
        full[1..full.len() - 1].to_vec()
    };
    let (u20, uy20) = (interior(&resp.ux20), interior(&resp.uy20));
    let du20 = matvec(&disc.clamped.d1, u20);
    let duy20 = disc.d1_of_vanishing(uy20);
    let d_ux_u20 = disc.d1_of_vanishing(&(0..m).map(|i| ux[i] * u20[i]).collect::<Vec<_>>());
    let d_ux_du20 = disc.d1_of_vanishing(&(0..m).map(|i| ux[i] * du20[i]).collect::<Vec<_>>());

    let integrand: Vec<f64> = (0..m)
        .map(|i| {
            let i1 = vy[i]
                * (ux[i] * du11[i] + ux[i] * duy20[i] + 2.0 * uy20[i] * dux[i] + u20[i] * duy[i] + 0.5 * uy[i] * du20[i]);
            let i2 = vx[i]
                * (d_ux_u20[i] + 2.0 * u20[i] * dux[i] + 0.5 * ux[i] * du20[i]
                    - t_c * (1.0 - mu) * uy[i] * (u11[i] + uy20[i]));
            let i3 = dvx[i] / (2.0 * a2) * (d_ux_du20[i] - 2.0 * u20[i] * d2ux[i]);
            i1 + i2 + i3
        })
        .collect();
    let c = disc.integrate_interior(&integrand) / ip;
    Ok(LandauCoefficients { a, c, inner_product: ip, normalization: eig.normalization })
}

/// Full pipeline at one rotation ratio.
#[derive(Debug, Clone)]
pub struct LandauReport {
    pub critical: CriticalPoint,
    pub eigenvector: CriticalEigenvector,
    pub adjoint: AdjointEigenvector,
    pub responses: QuadraticResponses,
    pub coefficients: LandauCoefficients,
}

pub fn landau_from_critical(critical: CriticalPoint, disc: &Discretization) -> Result<LandauReport> {
    let eigenvector = solve_eigenvector(&critical, disc)?;
    let adjoint = solve_adjoint(&critical, disc)?;
    let responses = quadratic_responses(&eigenvector, disc)?;
    let coefficients = compute_c(&eigenvector, &adjoint, &responses, disc)?;
    Ok(LandauReport { critical, eigenvector, adjoint, responses, coefficients })
}

pub fn landau_at(mu: f64, disc: &Discretization) -> Result<LandauReport> {
    landau_from_critical(critical_point(mu, 0.0, disc, DEFAULT_ALPHA_BRACKET)?, disc)
}

/// Rotation ratio where `c` changes sign, searched on `[-0.75, -0.5]`.
pub fn find_mu_hat_c(disc: &Discretization) -> Result<f64> {
    crate::linstab::bisect_sign_change("c", -0.75, -0.5, 1e-3, |mu| Ok(landau_at(mu, disc)?.coefficients.c))
}

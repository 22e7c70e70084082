//! Linearized small-gap eigenproblem.
//!
//! Unknowns are interior samples of `u_x` (clamped: `u_x = Du_x = 0`) and of the
//! scaled azimuthal velocity `u_y` (Dirichlet). The generalized problem is
//! `lambda M X = A X` with
//!
//! ```text
//! A = [ -(a^2 - D^2)^2 + i B x (a^2 - D^2)    a^2 T g(x) ]
//!     [  I                                   D^2 - a^2 + i B x ]
//! M = blockdiag(a^2 - D^2, I)
//! ```
//!
//! where `a` is the axial wavenumber and `B` the scaled azimuthal wavenumber.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat};
use rayon::prelude::*;
use serde::Serialize;

use crate::spectral::Discretization;
use crate::{Error, Result};

/// Eigenvalues with modulus above this are treated as spurious.
pub const LAMBDA_CAP: f64 = 1e6;
pub const T_MAX: f64 = 1e6;
pub const DEFAULT_ALPHA_BRACKET: (f64, f64) = (1.0, 8.0);
/// Critical Taylor number of the co-rotating case, used to seed brackets.
pub const T_GUESS: f64 = 1707.0;

/// Shear profile `g(x) = (1 + mu)/2 - (1 - mu) x`.
pub fn shear_profile(mu: f64, x: f64) -> f64 {
    0.5 * (1.0 + mu) - (1.0 - mu) * x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityParams {
    pub mu: f64,
    pub alpha: f64,
    pub bfrak: f64,
    pub taylor: f64,
}

impl StabilityParams {
    pub fn new(mu: f64, alpha: f64, bfrak: f64, taylor: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&mu) {
            return Err(Error::InvalidArgument(format!("mu = {mu} outside [-1, 1]")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
        }
        if !bfrak.is_finite() || !(taylor >= 0.0) || !taylor.is_finite() {
            return Err(Error::InvalidArgument(format!("bfrak = {bfrak}, T = {taylor}")));
        }
        Ok(Self { mu, alpha, bfrak, taylor })
    }

    pub fn g(&self, x: f64) -> f64 {
        shear_profile(self.mu, x)
    }
}

#[derive(Debug, Clone)]
pub struct EigenProblem {
    pub a_matrix: Mat<c64>,
    pub m_matrix: Mat<c64>,
    /// Interior unknowns per field; the stacked size is twice this.
    pub n_interior: usize,
}

impl EigenProblem {
    fn is_real(&self) -> bool {
        let n = self.a_matrix.nrows();
        (0..n).all(|j| (0..n).all(|i| self.a_matrix[(i, j)].im == 0.0 && self.m_matrix[(i, j)].im == 0.0))
    }
}

pub fn assemble(p: &StabilityParams, disc: &Discretization) -> EigenProblem {
    let m = disc.n_interior();
    let x = disc.interior();
    let d2c = &disc.clamped.d2;
    let d4c = &disc.clamped.d4;
    let d2d = &disc.d2_dirichlet;
    let a2 = p.alpha * p.alpha;
    let a4 = a2 * a2;
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };

    let mut a = Mat::<c64>::zeros(2 * m, 2 * m);
    let mut mm = Mat::<c64>::zeros(2 * m, 2 * m);
    for j in 0..m {
        for i in 0..m {
            let l = a2 * delta(i, j) - d2c[(i, j)];
            let l2 = a4 * delta(i, j) - 2.0 * a2 * d2c[(i, j)] + d4c[(i, j)];
            // multiplication by i B x acts after (a^2 - D^2)
            a[(i, j)] = c64::new(-l2, p.bfrak * x[i] * l);
            a[(m + i, m + j)] = c64::new(d2d[(i, j)] - a2 * delta(i, j), p.bfrak * x[i] * delta(i, j));
            mm[(i, j)] = c64::new(l, 0.0);
        }
        a[(j, m + j)] = c64::new(a2 * p.taylor * p.g(x[j]), 0.0);
        a[(m + j, j)] = c64::new(1.0, 0.0);
        mm[(m + j, m + j)] = c64::new(1.0, 0.0);
    }
    EigenProblem { a_matrix: a, m_matrix: mm, n_interior: m }
}

#[derive(Debug, Clone)]
pub struct LeadingMode {
    pub lambda0: c64,
    /// Nodal samples on the full grid, wall values included.
    pub ux: Vec<c64>,
    pub uy: Vec<c64>,
    /// `||A X - lambda0 M X||_2` with `X` scaled as stored.
    pub residual: f64,
    /// Residual divided by `(||A||_F + |lambda0| ||M||_F) ||X||_2`.
    pub backward_error: f64,
}

fn standard_form(problem: &EigenProblem) -> Mat<c64> {
    problem.m_matrix.partial_piv_lu().solve(&problem.a_matrix)
}

/// All eigenvalues with `|lambda| <= LAMBDA_CAP`.
pub fn spectrum(problem: &EigenProblem) -> Result<Vec<c64>> {
    let s = standard_form(problem);
    let n = s.nrows();
    let raw = if problem.is_real() {
        let sr = Mat::<f64>::from_fn(n, n, |i, j| s[(i, j)].re);
        sr.eigenvalues()
    } else {
        s.eigenvalues()
    }
    .map_err(|e| Error::NumericalFailure(format!("eigensolver: {e:?}")))?;
    Ok(raw.into_iter().filter(|l| l.re.is_finite() && l.im.is_finite() && l.norm() <= LAMBDA_CAP).collect())
}

fn mat_col(a: &Mat<c64>, v: &[c64]) -> Vec<c64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * v[j]).sum()).collect()
}

fn mat_adj_col(a: &Mat<c64>, v: &[c64]) -> Vec<c64> {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].conj() * v[i]).sum()).collect()
}

fn dot(u: &[c64], v: &[c64]) -> c64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn l2(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn frobenius(a: &Mat<c64>) -> f64 {
    let n = a.nrows();
    (0..a.ncols()).map(|j| (0..n).map(|i| a[(i, j)].norm_sqr()).sum::<f64>()).sum::<f64>().sqrt()
}

fn solve_shifted(k: &Mat<c64>, rhs: &[c64], adjoint: bool) -> Vec<c64> {
    let lu = k.partial_piv_lu();
    let b = Mat::<c64>::from_fn(rhs.len(), 1, |i, _| rhs[i]);
    let x = if adjoint { lu.solve_adjoint(&b) } else { lu.solve(&b) };
    (0..rhs.len()).map(|i| x[(i, 0)]).collect()
}

fn normalize(v: &mut [c64]) {
    let n = l2(v);
    v.iter_mut().for_each(|z| *z /= n);
}

/// Inverse iteration with left and right vectors; returns the two-sided
/// Rayleigh quotient and the right eigenvector.
fn refine(problem: &EigenProblem, lambda: c64) -> (c64, Vec<c64>) {
    let a = &problem.a_matrix;
    let m = &problem.m_matrix;
    let n = a.nrows();
    let mut lam = lambda;
    let mut x: Vec<c64> = (0..n).map(|i| c64::new(1.0 + 0.01 * i as f64, 0.0)).collect();
    let mut y = x.clone();
    for _ in 0..3 {
        let k = Mat::<c64>::from_fn(n, n, |i, j| a[(i, j)] - lam * m[(i, j)]);
        x = solve_shifted(&k, &mat_col(m, &x), false);
        normalize(&mut x);
        y = solve_shifted(&k, &mat_adj_col(m, &y), true);
        normalize(&mut y);
        let num = dot(&y, &mat_col(a, &x));
        let den = dot(&y, &mat_col(m, &x));
        let next = num / den;
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        lam = next;
    }
    (lam, x)
}

pub fn leading_eigenvalue(problem: &EigenProblem) -> Result<LeadingMode> {
    let eigs = spectrum(problem)?;
    let est = eigs
        .iter()
        .copied()
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or_else(|| Error::NumericalFailure("no eigenvalue below the modulus cap".into()))?;
    let (mut lambda0, mut x) = refine(problem, est);
    if (lambda0 - est).norm() > 1e-6 * est.norm().max(1.0) {
        // refinement wandered to a neighbouring eigenvalue
        lambda0 = est;
        let n = problem.a_matrix.nrows();
        let k = Mat::<c64>::from_fn(n, n, |i, j| problem.a_matrix[(i, j)] - est * problem.m_matrix[(i, j)]);
        x = solve_shifted(&k, &vec![c64::new(1.0, 0.0); n], false);
        normalize(&mut x);
    }
    if problem.is_real() && lambda0.im.abs() <= 1e-12 * lambda0.norm().max(1.0) {
        lambda0.im = 0.0;
    }

    let m = problem.n_interior;
    // unit max modulus of u_x, real positive at that node
    let (imax, _) = x[..m]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("non-empty");
    let scale = x[imax];
    x.iter_mut().for_each(|z| *z /= scale);

    let ax = mat_col(&problem.a_matrix, &x);
    let mx = mat_col(&problem.m_matrix, &x);
    let r: Vec<c64> = ax.iter().zip(&mx).map(|(a, b)| a - lambda0 * b).collect();
    let residual = l2(&r);
    let xn = l2(&x);
    let backward_error =
        residual / ((frobenius(&problem.a_matrix) + lambda0.norm() * frobenius(&problem.m_matrix)) * xn);

    let zero = c64::new(0.0, 0.0);
    let pad = |v: &[c64]| {
        let mut out = vec![zero];
        out.extend_from_slice(v);
        out.push(zero);
        out
    };
    Ok(LeadingMode { lambda0, ux: pad(&x[..m]), uy: pad(&x[m..]), residual, backward_error })
}

/// Leading eigenvalue at one parameter point.
pub fn lambda0(p: &StabilityParams, disc: &Discretization) -> Result<c64> {
    Ok(leading_eigenvalue(&assemble(p, disc))?.lambda0)
}

#[derive(Debug, Clone, Copy)]
pub struct NeutralOptions {
    /// Seed for the bracket `[T_guess / 2, 2 T_guess]`.
    pub t_guess: f64,
    pub t_max: f64,
    /// Stop once `|Re lambda0|` falls below this.
    pub re_tol: f64,
}

impl Default for NeutralOptions {
    fn default() -> Self {
        Self { t_guess: T_GUESS, t_max: T_MAX, re_tol: 1e-11 }
    }
}

pub fn neutral_taylor(mu: f64, alpha: f64, bfrak: f64, disc: &Discretization) -> Result<f64> {
    neutral_taylor_with(mu, alpha, bfrak, disc, &NeutralOptions::default())
}

pub fn neutral_taylor_with(
    mu: f64,
    alpha: f64,
    bfrak: f64,
    disc: &Discretization,
    opts: &NeutralOptions,
) -> Result<f64> {
    StabilityParams::new(mu, alpha, bfrak, 0.0)?;
    let f = |t: f64| -> Result<f64> { Ok(lambda0(&StabilityParams { mu, alpha, bfrak, taylor: t }, disc)?.re) };

    let guess = opts.t_guess.clamp(1.0, opts.t_max);
    let (mut lo, mut hi) = (0.5 * guess, (2.0 * guess).min(opts.t_max));
    let mut f_lo = f(lo)?;
    while f_lo >= 0.0 {
        hi = lo;
        if lo < 1.0 {
            lo = 0.0;
            f_lo = f(lo)?;
            if f_lo >= 0.0 {
                return Err(Error::NoNeutralPoint { t_max: opts.t_max, re_at_max: f_lo });
            }
            break;
        }
        lo *= 0.5;
        f_lo = f(lo)?;
    }
    let mut f_hi = f(hi)?;
    while f_hi <= 0.0 {
        if hi >= opts.t_max {
            return Err(Error::NoNeutralPoint { t_max: opts.t_max, re_at_max: f_hi });
        }
        lo = hi;
        f_lo = f_hi;
        hi = (2.0 * hi).min(opts.t_max);
        f_hi = f(hi)?;
    }

    // Illinois-safeguarded secant on the bracket
    let mut side = 0i8;
    for _ in 0..100 {
        let mut t = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let ft = f(t)?;
        if ft.abs() <= opts.re_tol || (hi - lo) <= 1e-13 * hi {
            return Ok(t);
        }
        if ft < 0.0 {
            lo = t;
            f_lo = ft;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            f_hi = ft;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NumericalFailure(format!("neutral root did not converge in [{lo}, {hi}]")))
}

#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub mu: f64,
    pub bfrak: f64,
    pub t_c: f64,
    pub alpha_c: f64,
    pub mode: LeadingMode,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

pub fn critical_point(
    mu: f64,
    bfrak: f64,
    disc: &Discretization,
    alpha_bracket: (f64, f64),
) -> Result<CriticalPoint> {
    let (mut a, mut b) = alpha_bracket;
    if !(a > 0.0 && b > a) {
        return Err(Error::InvalidArgument(format!("alpha bracket [{a}, {b}]")));
    }
    let mut guess = T_GUESS;
    let mut eval = |alpha: f64| -> Result<f64> {
        let opts = NeutralOptions { t_guess: guess, ..Default::default() };
        match neutral_taylor_with(mu, alpha, bfrak, disc, &opts) {
            Ok(t) => {
                guess = t;
                Ok(t)
            }
            Err(Error::NoNeutralPoint { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };

    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > 1e-4 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = eval(d)?;
        }
    }
    let (mut alpha_c, mut t_c) = if fc <= fd { (c, fc) } else { (d, fd) };
    if !t_c.is_finite() {
        return Err(Error::NoNeutralPoint { t_max: T_MAX, re_at_max: f64::NAN });
    }
    let edge = 1e-3 * (alpha_bracket.1 - alpha_bracket.0);
    if alpha_c - alpha_bracket.0 < edge || alpha_bracket.1 - alpha_c < edge {
        return Err(Error::BracketExhausted { alpha: alpha_c });
    }

    // local quadratic fit on a symmetric three-point stencil
    let h = 2e-3;
    let fm = eval(alpha_c - h)?;
    let fp = eval(alpha_c + h)?;
    let curv = fp - 2.0 * t_c + fm;
    if curv > 0.0 {
        let shift = 0.5 * h * (fm - fp) / curv;
        if shift.abs() <= h {
            let alpha_fit = alpha_c + shift;
            let t_fit = eval(alpha_fit)?;
            if t_fit <= t_c {
                alpha_c = alpha_fit;
                t_c = t_fit;
            }
        }
    }
    let mode = leading_eigenvalue(&assemble(&StabilityParams::new(mu, alpha_c, bfrak, t_c)?, disc))?;
    Ok(CriticalPoint { mu, bfrak, t_c, alpha_c, mode })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeutralPoint {
    pub bfrak: f64,
    pub t_c: f64,
    pub alpha_c: f64,
}

/// Critical point at each non-negative `bfrak`, mirrored to `-bfrak`; sorted by `bfrak`.
pub fn neutral_curve_in_bfrak(mu: f64, bfrak_samples: &[f64], disc: &Discretization) -> Result<Vec<NeutralPoint>> {
    if let Some(b) = bfrak_samples.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
        return Err(Error::InvalidArgument(format!("bfrak sample {b} must be finite and >= 0")));
    }
    let pts: Vec<NeutralPoint> = bfrak_samples
        .par_iter()
        .map(|&b| {
            critical_point(mu, b, disc, DEFAULT_ALPHA_BRACKET).map(|cp| NeutralPoint {
                bfrak: b,
                t_c: cp.t_c,
                alpha_c: cp.alpha_c,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = pts.clone();
    out.extend(pts.iter().filter(|p| p.bfrak > 0.0).map(|p| NeutralPoint { bfrak: -p.bfrak, ..*p }));
    out.sort_by(|a, b| a.bfrak.total_cmp(&b.bfrak));
    out.dedup_by(|a, b| a.bfrak == b.bfrak);
    Ok(out)
}

/// Half-width of the unstable band in `bfrak` at Taylor number `taylor`.
pub fn unstable_band(mu: f64, taylor: f64, disc: &Discretization) -> Result<f64> {
    let base = critical_point(mu, 0.0, disc, DEFAULT_ALPHA_BRACKET)?;
    unstable_band_from(&base, taylor, disc)
}

pub fn unstable_band_from(base: &CriticalPoint, taylor: f64, disc: &Discretization) -> Result<f64> {
    let t0 = base.t_c;
    if (taylor - t0).abs() <= 1e-9 * t0 {
        return Ok(0.0);
    }
    if taylor < t0 {
        return Err(Error::EmptyBand { taylor, t_c: t0 });
    }
    let bracket = ((base.alpha_c - 1.5).max(0.5), base.alpha_c + 1.5);
    let excess = |b: f64| -> Result<f64> { Ok(critical_point(base.mu, b, disc, bracket)?.t_c - taylor) };
    let (mut lo, mut hi) = (0.0, 0.25);
    while excess(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NumericalFailure(format!("band edge not found below bfrak = {hi}")));
        }
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy)]
pub struct ExpansionSteps {
    pub h_t: f64,
    pub h_b: f64,
    /// Initial stencil scale; doubled until the quartic term dominates the residual.
    pub h_scale0: f64,
    pub max_doublings: u32,
}

impl Default for ExpansionSteps {
    fn default() -> Self {
        Self { h_t: 1.0, h_b: 0.05, h_scale0: 0.5, max_doublings: 6 }
    }
}

/// Coefficients of `lambda0 ~ i b1 B + a3 tau + a4 B^2 - a5 B^4`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExpansionCoefficients {
    pub b1: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub sigma: f64,
    pub h_scale: f64,
    /// RMS residual of the `a4, a5` least-squares fit.
    pub fit_residual: f64,
    /// Largest deviation of the fitted model from the stencil data.
    pub fit_max_error: f64,
}

pub fn eigen_expansion_coeffs(crit: &CriticalPoint, disc: &Discretization) -> Result<ExpansionCoefficients> {
    eigen_expansion_coeffs_with(crit, disc, &ExpansionSteps::default())
}

pub fn eigen_expansion_coeffs_with(
    crit: &CriticalPoint,
    disc: &Discretization,
    steps: &ExpansionSteps,
) -> Result<ExpansionCoefficients> {
    let (mu, alpha, t_c) = (crit.mu, crit.alpha_c, crit.t_c);
    let lam = |b: f64, t: f64| lambda0(&StabilityParams::new(mu, alpha, b, t)?, disc);

    let a3 = (lam(0.0, t_c + steps.h_t)?.re - lam(0.0, (t_c - steps.h_t).max(0.0))?.re) / (2.0 * steps.h_t);
    let b1 = (lam(steps.h_b, t_c)?.im - lam(-steps.h_b, t_c)?.im) / (2.0 * steps.h_b);
    let re0 = lam(0.0, t_c)?.re;

    let offsets = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5];
    let mut h = steps.h_scale0;
    let mut last = None;
    for _ in 0..=steps.max_doublings {
        let data: Vec<(f64, f64)> = offsets
            .iter()
            .map(|o| {
                let b = o * h;
                Ok((b, if b == 0.0 { 0.0 } else { lam(b, t_c)?.re - re0 }))
            })
            .collect::<Result<_>>()?;
        // least squares for y = a4 B^2 - a5 B^4
        let (mut s22, mut s24, mut s44, mut r2, mut r4) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(b, y) in &data {
            let (p2, p4) = (b * b, -b.powi(4));
            s22 += p2 * p2;
            s24 += p2 * p4;
            s44 += p4 * p4;
            r2 += p2 * y;
            r4 += p4 * y;
        }
        let det = s22 * s44 - s24 * s24;
        let a4 = (r2 * s44 - r4 * s24) / det;
        let a5 = (s22 * r4 - s24 * r2) / det;
        let errs: Vec<f64> = data.iter().map(|&(b, y)| y - (a4 * b * b - a5 * b.powi(4))).collect();
        let rms = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
        let max_err = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let quartic = a5.abs() * (1.5 * h).powi(4);
        let coeffs = ExpansionCoefficients { b1, a3, a4, a5, sigma: -a4, h_scale: h, fit_residual: rms, fit_max_error: max_err };
        if det > 0.0 && quartic >= 10.0 * rms {
            return Ok(coeffs);
        }
        last = Some((h, quartic, rms));
        h *= 2.0;
    }
    let (h_scale, quartic_term, residual) = last.expect("at least one stencil");
    Err(Error::FitDegenerate { h_scale, quartic_term, residual })
}

/// Bisection for a sign change of `f` on `[lo, hi]` down to `tol`.
pub fn bisect_sign_change(
    quantity: &'static str,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::TransitionNotFound { quantity, lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `a4(mu)` at the axisymmetric critical point.
pub fn a4_at(mu: f64, disc: &Discretization) -> Result<f64> {
    let crit = critical_point(mu, 0.0, disc, DEFAULT_ALPHA_BRACKET)?;
    Ok(eigen_expansion_coeffs(&crit, disc)?.a4)
}

/// Rotation ratio where `a4` changes sign, searched on `[-1, -0.5]`.
pub fn find_mu_c(disc: &Discretization) -> Result<f64> {
    bisect_sign_change("a4", -1.0, -0.5, 1e-3, |mu| a4_at(mu, disc))
}

/// Least-squares fit of `T_n(alpha) - T_c = a (alpha^2 - alpha_c^2)^2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuarticNeutralFit {
    pub a: f64,
    /// `||residual|| / ||data||` over the samples.
    pub relative_residual: f64,
}

pub fn quartic_neutral_fit(
    crit: &CriticalPoint,
    half_width: f64,
    n_samples: usize,
    disc: &Discretization,
) -> Result<QuarticNeutralFit> {
    let (mut num, mut den, mut data) = (0.0, 0.0, Vec::new());
    for k in 0..n_samples {
        let off = -half_width + 2.0 * half_width * k as f64 / (n_samples - 1) as f64;
        if off == 0.0 {
            continue;
        }
        let alpha = crit.alpha_c + off;
        let opts = NeutralOptions { t_guess: crit.t_c, ..Default::default() };
        let y = neutral_taylor_with(crit.mu, alpha, crit.bfrak, disc, &opts)? - crit.t_c;
        let s = (alpha * alpha - crit.alpha_c * crit.alpha_c).powi(2);
        num += s * y;
        den += s * s;
        data.push((s, y));
    }
    let a = num / den;
    let res: f64 = data.iter().map(|(s, y)| (y - a * s).powi(2)).sum::<f64>().sqrt();
    let nrm: f64 = data.iter().map(|(_, y)| y * y).sum::<f64>().sqrt();
    Ok(QuarticNeutralFit { a, relative_residual: res / nrm })
}

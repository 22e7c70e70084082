//! The fourth-order steady equation near its three regimes.
//!
//! - Case 1 reduces to the planar system `U'' = -eps U + c U^3`.
//! - Case 2 is the `R^2 x C` normal form with `K = |W|^2` and
//!   `V^2 = (eps - 6cK) U^2 - (c/2) U^4 + H`.
//! - Case 3 is the 1:1 resonant normal form in complex `(U, V)`, with
//!   `K = Im(conj(U) V)` and `H = |V|^2 + (eps/8 - dK)|U|^2 - (3/4) sigma^2 c |U|^4`.

use serde::Serialize;

use super::gl2::{gl2_classify, gl2_profile, GL2Params};
use super::integrate::{advance, sample};
use super::orbit::{self, classify_cubic, classify_even, CubicOrbit, EvenOrbit, Poly, DOUBLE_ROOT_TOL};
use super::quartic::GL4Params;
use super::{check_span, linspace, unwrap, FirstIntegrals, GLSolution, Profile, SolutionClass};
use crate::{Error, Result};

const ODE_TOL: f64 = 1e-13;

// ---------------------------------------------------------------- Case 1

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case1Portrait {
    pub eps: f64,
    pub c: f64,
    /// `0` and, when `eps/c > 0`, `+-sqrt(eps/c)`.
    pub equilibria: Vec<f64>,
}

impl Case1Portrait {
    pub fn energy(&self, u: f64, v: f64) -> f64 {
        v * v + self.eps * u * u - 0.5 * self.c * u.powi(4)
    }

    /// Same structure as the second-order problem with `tau` replaced by `eps`.
    pub fn as_gl2(&self) -> GL2Params {
        GL2Params { a3: 1.0, b4: 1.0, c: self.c, tau: self.eps, b1: 0.0 }
    }

    pub fn classify(&self, energy: f64) -> GLSolution {
        gl2_classify(&self.as_gl2(), energy, 0.0)
    }

    pub fn profile(&self, energy: f64, y_span: (f64, f64), n: usize) -> Result<GLSolution> {
        gl2_profile(&self.as_gl2(), energy, 0.0, y_span, n)
    }

    pub fn rhs(&self, x: &[f64; 2]) -> [f64; 2] {
        [x[1], -self.eps * x[0] + self.c * x[0].powi(3)]
    }
}

pub fn case1_reduced(eps: f64, c: f64) -> Case1Portrait {
    let mut equilibria = vec![0.0];
    let r2 = eps / c;
    if r2 > 0.0 && r2.is_finite() {
        equilibria.extend([-r2.sqrt(), r2.sqrt()]);
    }
    Case1Portrait { eps, c, equilibria }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case1Orbit {
    /// Symmetric starting point `(a, 0, x3, 0)`.
    pub x0: [f64; 4],
    pub period: f64,
    /// `max |X(period) - X(0)|` along the full system.
    pub closure_error: f64,
    pub newton_iterations: usize,
}

/// Reversible periodic orbit of the full system with `sigma = 1`, `tau = eps`,
/// through `A = amplitude`, seeded from the reduced orbit of the same amplitude.
pub fn case1_periodic_orbit_4d(eps: f64, c: f64, amplitude: f64) -> Result<Case1Orbit> {
    let portrait = case1_reduced(eps, c);
    let seed = portrait.classify(portrait.energy(amplitude, 0.0));
    let Some(p0) = seed.period else {
        return Err(Error::InvalidArgument(format!("no reduced periodic orbit through amplitude {amplitude}")));
    };
    let sys = GL4Params { tau: eps, sigma: 1.0, c };
    let f = |x: &[f64; 4]| sys.rhs(x);
    let shoot = |z: [f64; 2]| -> Result<[f64; 2]> {
        let x = advance(&f, [amplitude, 0.0, z[0], 0.0], z[1], ODE_TOL)
            .map_err(|d| Error::TrajectoryEscaped { y: d })?;
        Ok([x[1], x[3]])
    };
    // A'' = g(A) on the reduced orbit; one more order of the slow manifold gives A'' = g (1 + g')
    let g = -eps * amplitude + c * amplitude.powi(3);
    let dg = -eps + 3.0 * c * amplitude * amplitude;
    let mut z = [g * (1.0 + dg), 0.5 * p0];
    let mut iterations = 0;
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let mut r = shoot(z)?;
    loop {
        if norm(r) < 1e-12 {
            break;
        }
        iterations += 1;
        if iterations > 40 {
            return Err(Error::NumericalFailure(format!("reversible shooting stalled at residual {r:?}")));
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let h = 1e-7 * z[j].abs().max(1e-3);
            let mut zp = z;
            zp[j] += h;
            let rp = shoot(zp)?;
            for i in 0..2 {
                jac[i][j] = (rp[i] - r[i]) / h;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NumericalFailure("singular shooting Jacobian".into()));
        }
        let dz0 = (r[0] * jac[1][1] - r[1] * jac[0][1]) / det;
        let dz1 = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        // damped step: halve until the residual decreases
        let mut lambda = 1.0;
        loop {
            let trial = [z[0] - lambda * dz0, z[1] - lambda * dz1];
            match shoot(trial) {
                Ok(rt) if norm(rt) < norm(r) && (trial[1] - 0.5 * p0).abs() < 0.25 * p0 => {
                    z = trial;
                    r = rt;
                    break;
                }
                _ if lambda > 1e-4 => lambda *= 0.5,
                _ => return Err(Error::NumericalFailure(format!("reversible shooting stalled at residual {r:?}"))),
            }
        }
    }
    let x0 = [amplitude, 0.0, z[0], 0.0];
    let period = 2.0 * z[1];
    let xt = advance(&f, x0, period, ODE_TOL).map_err(|d| Error::TrajectoryEscaped { y: d })?;
    let closure_error = (0..4).map(|i| (xt[i] - x0[i]).abs()).fold(0.0, f64::max);
    Ok(Case1Orbit { x0, period, closure_error, newton_iterations: iterations })
}

// ---------------------------------------------------------------- Case 2

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case2Params {
    pub eps: f64,
    pub c: f64,
    /// `|W|^2`.
    pub k: f64,
}

impl Case2Params {
    pub fn new(eps: f64, c: f64, k: f64) -> Result<Self> {
        if !(k >= 0.0) || !eps.is_finite() || !c.is_finite() || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("case 2 needs finite eps, c and K >= 0, got K = {k}")));
        }
        Ok(Case2Params { eps, c, k })
    }

    /// `eps - 6 c K`, the effective linear coefficient.
    pub fn eps_eff(&self) -> f64 {
        self.eps - 6.0 * self.c * self.k
    }

    /// `F_{H,K}` as a polynomial in `X = U^2`.
    pub fn f_poly(&self, h: f64) -> Poly {
        Poly(vec![h, self.eps_eff(), -0.5 * self.c])
    }

    /// `H` on the separatrix through the nonzero equilibria.
    pub fn h_separatrix(&self) -> f64 {
        self.eps_eff().powi(2) / (2.0 * self.c.abs())
    }

    pub fn first_integrals(&self, x: &[f64; 4]) -> FirstIntegrals {
        let (u, v) = (x[0], x[1]);
        let k = x[2] * x[2] + x[3] * x[3];
        let h = v * v - self.eps * u * u + 0.5 * self.c * u.powi(4) + 6.0 * self.c * k * u * u;
        FirstIntegrals { h, k }
    }

    /// Rotation rate of `W`.
    fn rate(&self, u: f64, k: f64) -> f64 {
        1.0 + 0.5 * self.eps - 1.5 * self.c * (u * u + k)
    }

    /// Right-hand side in `(U, V, Re W, Im W)`.
    pub fn rhs(&self, x: &[f64; 4]) -> [f64; 4] {
        let k = x[2] * x[2] + x[3] * x[3];
        let r = self.rate(x[0], k);
        [
            x[1],
            self.eps * x[0] - self.c * x[0].powi(3) - 6.0 * self.c * x[0] * k,
            -r * x[3],
            r * x[2],
        ]
    }
}

fn case2_class(p: &Case2Params, orbit: EvenOrbit) -> SolutionClass {
    let rotating = p.k > 0.0;
    match orbit {
        EvenOrbit::Rest if rotating => SolutionClass::PeriodicFirstKind,
        EvenOrbit::Rest => SolutionClass::Couette,
        EvenOrbit::Equilibrium { .. } if rotating => SolutionClass::PeriodicFirstKind,
        EvenOrbit::Equilibrium { .. } => SolutionClass::TVF,
        EvenOrbit::Periodic { .. } if rotating => SolutionClass::QuasiPeriodic,
        EvenOrbit::Periodic { .. } => SolutionClass::PeriodicConstantPhase,
        EvenOrbit::Homoclinic { .. } => SolutionClass::Homoclinic,
        EvenOrbit::Heteroclinic { .. } => SolutionClass::HeteroclinicTube,
        EvenOrbit::None => SolutionClass::NoSmallBounded,
    }
}

pub fn case2_classify(p: &Case2Params, h: f64) -> GLSolution {
    let q = p.f_poly(h);
    let orbit = classify_even(&q, DOUBLE_ROOT_TOL);
    let mut sol = GLSolution::bare(case2_class(p, orbit), FirstIntegrals { h, k: p.k });
    let r2 = p.eps_eff() / p.c;
    if r2 > 0.0 {
        sol.equilibria = vec![-r2.sqrt(), r2.sqrt()];
    }
    sol.period = orbit::even_period(&q, &orbit);
    sol
}

/// Turning point used as the start of sampled Case 2 periodic orbits.
fn case2_start(p: &Case2Params, z: f64) -> [f64; 4] {
    [z, 0.0, p.k.sqrt(), 0.0]
}

/// Classify and sample the Case 2 solution on `(H, K)`.
pub fn case2_normalform(p: &Case2Params, h: f64, y_span: (f64, f64), n: usize) -> Result<GLSolution> {
    check_span(y_span, n)?;
    let mut sol = case2_classify(p, h);
    let q = p.f_poly(h);
    let orbit = classify_even(&q, DOUBLE_ROOT_TOL);
    let ys = linspace(y_span, n);
    let w = p.k.sqrt();
    let (mut u, mut v, mut phase) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut abs_w = vec![w; n];
    // phase = rate(0, K) y - (3c/2) int_0^y U^2
    let base = p.rate(0.0, p.k);
    match orbit {
        EvenOrbit::None => return Ok(sol),
        EvenOrbit::Rest => {
            for (ph, y) in phase.iter_mut().zip(&ys) {
                *ph = base * y;
            }
        }
        EvenOrbit::Equilibrium { z_eq } => {
            u.fill(z_eq);
            for (ph, y) in phase.iter_mut().zip(&ys) {
                *ph = p.rate(z_eq, p.k) * y;
            }
        }
        EvenOrbit::Homoclinic { z_max } => {
            let kk = q.0[1].sqrt();
            for i in 0..n {
                let (s, t) = (1.0 / (kk * ys[i]).cosh(), (kk * ys[i]).tanh());
                u[i] = z_max * s;
                v[i] = -z_max * kk * s * t;
                phase[i] = base * ys[i] - 1.5 * p.c * z_max * z_max * t / kk;
            }
        }
        EvenOrbit::Heteroclinic { z_star } => {
            let kk = q.0[2].sqrt() * z_star;
            for i in 0..n {
                let t = (kk * ys[i]).tanh();
                u[i] = z_star * t;
                v[i] = z_star * kk * (1.0 - t * t);
                phase[i] = base * ys[i] - 1.5 * p.c * z_star * z_star * (ys[i] - t / kk);
            }
        }
        EvenOrbit::Periodic { z_hi, .. } => {
            let f = |x: &[f64; 4]| p.rhs(x);
            let tr = sample(&f, 0.0, case2_start(p, z_hi), y_span, n, ODE_TOL)?;
            for (i, x) in tr.x.iter().enumerate() {
                u[i] = x[0];
                v[i] = x[1];
                abs_w[i] = x[2].hypot(x[3]);
                phase[i] = x[3].atan2(x[2]);
            }
            unwrap(&mut phase);
        }
    }
    let mut res: f64 = 0.0;
    for i in 0..n {
        let x = [u[i], v[i], abs_w[i], 0.0];
        let fi = p.first_integrals(&x);
        let scale = v[i] * v[i]
            + (p.eps * u[i] * u[i]).abs()
            + (0.5 * p.c * u[i].powi(4)).abs()
            + (6.0 * p.c * p.k * u[i] * u[i]).abs();
        res = res.max((fi.h - h).abs() / scale.max(h.abs()).max(f64::MIN_POSITIVE));
        if p.k > 0.0 {
            res = res.max((fi.k - p.k).abs() / p.k);
        }
    }
    sol.residual = res;
    sol.profile = Some(Profile::NormalForm { y: ys, u, v, abs_w, phase });
    Ok(sol)
}

/// Default `kappa` of [`heteroclinic_k_min`].
pub const DEFAULT_KAPPA: f64 = 1.0;

/// `exp(-kappa / |eps|^{1/2})`: the rotating amplitude below which the
/// heteroclinic tube of the truncated system is not expected to persist.
/// Reported only; the constant `kappa` is not known.
pub fn heteroclinic_k_min(eps: f64, kappa: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    (-kappa / eps.abs().sqrt()).exp()
}

/// Integrate one quadrature period from the turning point and report the
/// largest change of `(U, V, |W|)`.
pub fn case2_return_error(p: &Case2Params, h: f64) -> Result<f64> {
    let q = p.f_poly(h);
    let orbit = classify_even(&q, DOUBLE_ROOT_TOL);
    let (EvenOrbit::Periodic { z_hi, .. }, Some(period)) = (orbit, orbit::even_period(&q, &orbit)) else {
        return Err(Error::InvalidArgument(format!("(H, K) = ({h}, {}) is not a periodic level", p.k)));
    };
    let x0 = case2_start(p, z_hi);
    let f = |x: &[f64; 4]| p.rhs(x);
    let xt = advance(&f, x0, period, ODE_TOL).map_err(|d| Error::TrajectoryEscaped { y: d })?;
    let dw = (xt[2].hypot(xt[3]) - x0[2]).abs();
    Ok((xt[0] - x0[0]).abs().max((xt[1] - x0[1]).abs()).max(dw))
}

// ---------------------------------------------------------------- Case 3

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case3Params {
    pub eps: f64,
    pub sigma: f64,
    pub c: f64,
    /// Phase-drift coefficients of the normal form; they leave the amplitudes unchanged.
    pub beta: f64,
    pub gamma: f64,
    /// Free overall phase.
    pub theta_star: f64,
}

impl Case3Params {
    pub fn new(eps: f64, sigma: f64, c: f64) -> Result<Self> {
        if !(sigma < 0.0) || !eps.is_finite() || !c.is_finite() || c == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "case 3 needs sigma < 0 and c != 0, got sigma = {sigma}, c = {c}"
            )));
        }
        Ok(Case3Params { eps, sigma, c, beta: 0.0, gamma: 0.0, theta_star: 0.0 })
    }

    pub fn omega(&self) -> f64 {
        (1.0 - self.eps / 8.0) / std::f64::consts::SQRT_2
    }

    pub fn d(&self) -> f64 {
        self.c * self.sigma * self.sigma / (2.0 * std::f64::consts::SQRT_2)
    }

    /// `(3/4) sigma^2 c`.
    fn a(&self) -> f64 {
        0.75 * self.sigma * self.sigma * self.c
    }

    pub fn eps_tilde(&self, k: f64) -> f64 {
        -self.eps / 8.0 + self.d() * k
    }

    pub fn cubic(&self, h: f64, k: f64) -> Poly {
        Poly(vec![-k * k, h, self.eps_tilde(k), self.a()])
    }

    /// `r'^2 = q(r^2)` on `K = 0`.
    pub fn even(&self, h: f64) -> Poly {
        Poly(vec![h, -self.eps / 8.0, self.a()])
    }

    /// Squared amplitude of the wavy vortex, `eps / (12 sigma^2 c)`.
    pub fn r0_squared(&self) -> f64 {
        self.eps / (12.0 * self.sigma * self.sigma * self.c)
    }

    /// `H` of the wavy vortex at `K = 0`.
    pub fn h_min(&self) -> f64 {
        self.eps * self.eps / (192.0 * self.sigma * self.sigma * self.c)
    }

    /// Squared peak of the homoclinic pulse, `eps / (6 sigma^2 c)`.
    pub fn homoclinic_peak_squared(&self) -> f64 {
        self.eps / (6.0 * self.sigma * self.sigma * self.c)
    }

    pub fn first_integrals(&self, x: &[f64; 4]) -> FirstIntegrals {
        let u2 = x[0] * x[0] + x[1] * x[1];
        let v2 = x[2] * x[2] + x[3] * x[3];
        let k = x[0] * x[3] - x[1] * x[2];
        let h = v2 + (self.eps / 8.0 - self.d() * k) * u2 - self.a() * u2 * u2;
        FirstIntegrals { h, k }
    }

    /// Right-hand side in `(Re U, Im U, Re V, Im V)`.
    pub fn rhs(&self, x: &[f64; 4]) -> [f64; 4] {
        let u2 = x[0] * x[0] + x[1] * x[1];
        let k = x[0] * x[3] - x[1] * x[2];
        let rot = self.omega() + self.beta * u2 + self.gamma * k;
        let s = -self.eps / 8.0 + 2.0 * self.a() * u2 + self.d() * k;
        [
            -rot * x[1] + x[2],
            rot * x[0] + x[3],
            -rot * x[3] + s * x[0],
            rot * x[2] + s * x[1],
        ]
    }

    fn rotate(&self, x: [f64; 4], phi: f64) -> [f64; 4] {
        let (sn, cs) = phi.sin_cos();
        [cs * x[0] - sn * x[1], sn * x[0] + cs * x[1], cs * x[2] - sn * x[3], sn * x[2] + cs * x[3]]
    }
}

/// Points `(H, K)` of the equilibrium curve at amplitude `u0 = |U|^2 > 0`.
pub fn case3_gamma(p: &Case3Params, u0: f64) -> Vec<FirstIntegrals> {
    // K^2 + d u0^2 K + u0^2 (-eps/8 + (3/2) sigma^2 c u0) = 0
    let ks = orbit::quadratic_roots(1.0, p.d() * u0 * u0, u0 * u0 * (-p.eps / 8.0 + 2.0 * p.a() * u0));
    ks.into_iter()
        .map(|k| FirstIntegrals { h: -2.0 * p.eps_tilde(k) * u0 - 3.0 * p.a() * u0 * u0, k })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Case3Orbit {
    Even(EvenOrbit),
    Cubic(CubicOrbit),
}

fn case3_orbit(p: &Case3Params, h: f64, k: f64) -> Case3Orbit {
    if k == 0.0 {
        Case3Orbit::Even(classify_even(&p.even(h), DOUBLE_ROOT_TOL))
    } else {
        Case3Orbit::Cubic(classify_cubic(&p.cubic(h, k), DOUBLE_ROOT_TOL))
    }
}

pub fn case3_classify(p: &Case3Params, h: f64, k: f64) -> GLSolution {
    let orbit = case3_orbit(p, h, k);
    let class = match orbit {
        Case3Orbit::Even(o) => match o {
            EvenOrbit::Rest => SolutionClass::Couette,
            EvenOrbit::Equilibrium { .. } => SolutionClass::WavyVortex,
            EvenOrbit::Periodic { .. } => SolutionClass::QuasiPeriodic,
            EvenOrbit::Homoclinic { .. } => SolutionClass::Homoclinic,
            EvenOrbit::Heteroclinic { .. } => SolutionClass::HeteroclinicTube,
            EvenOrbit::None => SolutionClass::NoSmallBounded,
        },
        Case3Orbit::Cubic(o) => match o {
            CubicOrbit::Periodic { .. } => SolutionClass::QuasiPeriodic,
            CubicOrbit::Equilibrium { .. } => SolutionClass::WavyVortex,
            CubicOrbit::Homoclinic { .. } => SolutionClass::Homoclinic,
            CubicOrbit::None => SolutionClass::NoSmallBounded,
        },
    };
    let mut sol = GLSolution::bare(class, FirstIntegrals { h, k });
    if p.r0_squared() > 0.0 {
        sol.equilibria = vec![p.r0_squared().sqrt()];
    }
    match orbit {
        Case3Orbit::Even(o) => sol.period = orbit::even_period(&p.even(h), &o),
        Case3Orbit::Cubic(CubicOrbit::Periodic { x_lo, x_hi }) => {
            sol.period = Some(orbit::cubic_period(&p.cubic(h, k), x_lo, x_hi).0)
        }
        _ => {}
    }
    sol
}

/// Closed-form real amplitude `a(y)` with `a'` and `a''`, for the `K = 0` orbits that have one.
fn case3_closed_form(p: &Case3Params, orbit: EvenOrbit, h: f64, y: f64) -> Option<(f64, f64, f64, f64)> {
    let q = p.even(h);
    // returns (a, a', a'', int_0^y a^2)
    match orbit {
        EvenOrbit::Rest => Some((0.0, 0.0, 0.0, 0.0)),
        EvenOrbit::Equilibrium { z_eq } => Some((z_eq, 0.0, 0.0, z_eq * z_eq * y)),
        EvenOrbit::Homoclinic { z_max } => {
            let k = q.0[1].sqrt();
            let (s, t) = (1.0 / (k * y).cosh(), (k * y).tanh());
            Some((z_max * s, -z_max * k * s * t, z_max * k * k * s * (1.0 - 2.0 * s * s), z_max * z_max * t / k))
        }
        EvenOrbit::Heteroclinic { z_star } => {
            let k = q.0[2].sqrt() * z_star;
            let t = (k * y).tanh();
            let s2 = 1.0 - t * t;
            Some((z_star * t, z_star * k * s2, -2.0 * z_star * k * k * t * s2, z_star * z_star * (y - t / k)))
        }
        _ => None,
    }
}

/// Classify and sample the Case 3 solution on `(H, K)`; the profile is `|U|` and `arg U`.
pub fn case3_normalform(p: &Case3Params, h: f64, k: f64, y_span: (f64, f64), n: usize) -> Result<GLSolution> {
    check_span(y_span, n)?;
    let mut sol = case3_classify(p, h, k);
    if !sol.class.is_bounded() {
        return Ok(sol);
    }
    let ys = linspace(y_span, n);
    let (mut rho, mut theta, mut drho, mut dtheta) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut ode_res: f64 = 0.0;
    let mut states = Vec::with_capacity(n);

    match case3_orbit(p, h, k) {
        Case3Orbit::Even(o) => {
            if case3_closed_form(p, o, h, 0.0).is_some() {
                for i in 0..n {
                    let (a, da, dda, int_a2) = case3_closed_form(p, o, h, ys[i]).expect("closed form");
                    let th = p.theta_star + p.omega() * ys[i] + p.beta * int_a2;
                    let dth = p.omega() + p.beta * a * a;
                    rho[i] = a;
                    drho[i] = da;
                    theta[i] = th;
                    dtheta[i] = dth;
                    let x = p.rotate([a, 0.0, da, 0.0], th);
                    // analytic derivative against the vector field
                    let dx = p.rotate([da, dth * a, dda, dth * da], th);
                    let f = p.rhs(&x);
                    for j in 0..4 {
                        ode_res = ode_res.max((dx[j] - f[j]).abs());
                    }
                    states.push(x);
                }
            } else {
                let EvenOrbit::Periodic { z_hi, .. } = o else { unreachable!("bounded even orbits are covered") };
                // real amplitude in the co-rotating frame
                let g = |x: &[f64; 3]| {
                    let a2 = x[0] * x[0];
                    [x[1], x[0] * (-p.eps / 8.0 + 2.0 * p.a() * a2), p.omega() + p.beta * a2]
                };
                let tr = sample(&g, 0.0, [z_hi, 0.0, p.theta_star], y_span, n, ODE_TOL)?;
                for (i, x) in tr.x.iter().enumerate() {
                    rho[i] = x[0];
                    drho[i] = x[1];
                    theta[i] = x[2];
                    dtheta[i] = p.omega() + p.beta * x[0] * x[0];
                    states.push(p.rotate([x[0], 0.0, x[1], 0.0], x[2]));
                }
            }
        }
        Case3Orbit::Cubic(o) => {
            let x_start = match o {
                CubicOrbit::Periodic { x_hi, .. } => x_hi,
                CubicOrbit::Equilibrium { x_eq } => x_eq,
                CubicOrbit::Homoclinic { x_turn, .. } => x_turn,
                CubicOrbit::None => unreachable!("unbounded classes return early"),
            };
            let r0 = x_start.sqrt();
            let x0 = p.rotate([r0, 0.0, 0.0, k / r0], p.theta_star);
            let f = |x: &[f64; 4]| p.rhs(x);
            let tr = sample(&f, 0.0, x0, y_span, n, ODE_TOL)?;
            for (i, x) in tr.x.iter().enumerate() {
                let m = x[0] * x[0] + x[1] * x[1];
                if m == 0.0 {
                    return Err(Error::PhaseSingularity { y: ys[i] });
                }
                let dx = p.rhs(x);
                rho[i] = m.sqrt();
                theta[i] = x[1].atan2(x[0]);
                drho[i] = (x[0] * dx[0] + x[1] * dx[1]) / rho[i];
                dtheta[i] = (x[0] * dx[1] - x[1] * dx[0]) / m;
                states.push(*x);
            }
            unwrap(&mut theta);
        }
    }

    let mut res = ode_res;
    for x in &states {
        let fi = p.first_integrals(x);
        let u2 = x[0] * x[0] + x[1] * x[1];
        let v2 = x[2] * x[2] + x[3] * x[3];
        let scale = v2 + (p.eps / 8.0 * u2).abs() + (p.d() * k * u2).abs() + (p.a() * u2 * u2).abs();
        res = res.max((fi.h - h).abs() / scale.max(h.abs()).max(f64::MIN_POSITIVE));
        if k != 0.0 {
            res = res.max((fi.k - k).abs() / (u2 * v2).sqrt().max(k.abs()));
        }
    }
    sol.residual = res;
    sol.profile = Some(Profile::Polar { y: ys, rho, theta, drho, dtheta });
    Ok(sol)
}

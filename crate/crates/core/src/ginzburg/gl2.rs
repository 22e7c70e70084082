//! The second-order amplitude equation `a3 tau A + b4 A'' = c A |A|^2`.
//!
//! With `A = rho e^{i theta}` the first integrals are
//! `K = rho^2 theta'` and `H = rho'^2 + K^2/rho^2 - (c/2b4) rho^4 + (a3 tau/b4) rho^2`,
//! so `X = rho^2` obeys `X'^2 = 4 (X f(X))` with
//! `X f(X) = (c/2b4) X^3 - (a3 tau/b4) X^2 + H X - K^2`.

use serde::Serialize;

use super::integrate::sample;
use super::orbit::{self, classify_cubic, classify_even, CubicOrbit, EvenOrbit, Poly, DOUBLE_ROOT_TOL};
use super::{check_span, linspace, unwrap, FirstIntegrals, GLSolution, Profile, SolutionClass};
use crate::{Error, Result};

const ODE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GL2Params {
    pub a3: f64,
    pub b4: f64,
    pub c: f64,
    pub tau: f64,
    /// Drift speed; absorbed by the moving frame and only recorded.
    pub b1: f64,
}

impl GL2Params {
    pub fn new(a3: f64, b4: f64, c: f64, tau: f64, b1: f64) -> Result<Self> {
        if !(a3 > 0.0) || !(b4 > 0.0) {
            return Err(Error::InvalidArgument(format!("a3 = {a3} and b4 = {b4} must be positive")));
        }
        if !c.is_finite() || !tau.is_finite() || !b1.is_finite() {
            return Err(Error::InvalidArgument("non-finite GL coefficient".into()));
        }
        Ok(GL2Params { a3, b4, c, tau, b1 })
    }

    /// Coefficient of `X^2` in `X f(X)`.
    fn q2(&self) -> f64 {
        self.c / (2.0 * self.b4)
    }

    /// Coefficient of `X` in `f(X)`.
    fn q1(&self) -> f64 {
        -self.a3 * self.tau / self.b4
    }

    pub fn even_poly(&self, h: f64) -> Poly {
        Poly(vec![h, self.q1(), self.q2()])
    }

    pub fn cubic_poly(&self, h: f64, k: f64) -> Poly {
        Poly(vec![-k * k, h, self.q1(), self.q2()])
    }

    /// `H` of the Taylor-vortex equilibrium, `(a3 tau)^2 / (2 c b4)`.
    pub fn h_tvf(&self) -> f64 {
        (self.a3 * self.tau).powi(2) / (2.0 * self.c * self.b4)
    }

    fn rhs(&self, a: [f64; 2]) -> [f64; 2] {
        let m = a[0] * a[0] + a[1] * a[1];
        let g = (self.c * m - self.a3 * self.tau) / self.b4;
        [g * a[0], g * a[1]]
    }
}

/// `(class, amplitude)` for the Couette state and, when it exists, the Taylor-vortex flow.
pub fn gl2_simple_solutions(p: &GL2Params) -> Vec<(SolutionClass, f64)> {
    let mut out = vec![(SolutionClass::Couette, 0.0)];
    let r2 = p.a3 * p.tau / p.c;
    if r2 > 0.0 && r2.is_finite() {
        out.push((SolutionClass::TVF, r2.sqrt()));
    }
    out
}

/// Amplitude of the wavy vortex `rho e^{i beta y}`, from `c rho^2 = a3 tau - b4 beta^2`.
pub fn wavy_vortex_amplitude(p: &GL2Params, beta: f64) -> Option<f64> {
    let r2 = (p.a3 * p.tau - p.b4 * beta * beta) / p.c;
    (r2 > 0.0 && r2.is_finite()).then(|| r2.sqrt())
}

/// First integrals evaluated from `(rho, rho', theta')`.
pub fn gl2_integrals(p: &GL2Params, rho: f64, drho: f64, dtheta: f64) -> FirstIntegrals {
    let x = rho * rho;
    let k = x * dtheta;
    let h = drho * drho + x * dtheta * dtheta - p.q2() * x * x - p.q1() * x;
    FirstIntegrals { h, k }
}

/// Size of the terms entering `H` and `K`, used to make their drift relative.
fn integral_scale(p: &GL2Params, rho: f64, drho: f64, dtheta: f64) -> (f64, f64) {
    let x = rho * rho;
    let sh = drho * drho + x * dtheta * dtheta + (p.q2() * x * x).abs() + (p.q1() * x).abs();
    let sk = (x * dtheta).abs() + (rho * drho).abs();
    (sh, sk)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Orbit {
    Even(EvenOrbit),
    Cubic(CubicOrbit),
}

fn orbit_of(p: &GL2Params, h: f64, k: f64) -> Orbit {
    if k == 0.0 {
        Orbit::Even(classify_even(&p.even_poly(h), DOUBLE_ROOT_TOL))
    } else {
        Orbit::Cubic(classify_cubic(&p.cubic_poly(h, k), DOUBLE_ROOT_TOL))
    }
}

fn class_of(orbit: Orbit) -> SolutionClass {
    match orbit {
        Orbit::Even(o) => match o {
            EvenOrbit::Rest => SolutionClass::Couette,
            EvenOrbit::Equilibrium { .. } => SolutionClass::TVF,
            EvenOrbit::Periodic { .. } => SolutionClass::PeriodicConstantPhase,
            EvenOrbit::Homoclinic { .. } => SolutionClass::Homoclinic,
            EvenOrbit::Heteroclinic { .. } => SolutionClass::HeteroclinicTube,
            EvenOrbit::None => SolutionClass::NoSmallBounded,
        },
        Orbit::Cubic(o) => match o {
            CubicOrbit::Periodic { .. } => SolutionClass::QuasiPeriodic,
            CubicOrbit::Equilibrium { .. } => SolutionClass::WavyVortex,
            CubicOrbit::Homoclinic { .. } => SolutionClass::Homoclinic,
            CubicOrbit::None => SolutionClass::NoSmallBounded,
        },
    }
}

/// Classify the bounded solution on the level set `(H, K)`.
pub fn gl2_classify(p: &GL2Params, h: f64, k: f64) -> GLSolution {
    let orbit = orbit_of(p, h, k);
    let mut sol = GLSolution::bare(class_of(orbit), FirstIntegrals { h, k });
    sol.equilibria = gl2_simple_solutions(p).into_iter().skip(1).map(|(_, a)| a).collect();
    match orbit {
        Orbit::Even(o @ EvenOrbit::Periodic { .. }) => {
            sol.period = orbit::even_period(&p.even_poly(h), &o);
            sol.mean_phase_speed = Some(0.0);
        }
        Orbit::Cubic(CubicOrbit::Periodic { x_lo, x_hi }) => {
            let (period, inv) = orbit::cubic_period(&p.cubic_poly(h, k), x_lo, x_hi);
            sol.period = Some(period);
            sol.mean_phase_speed = Some(k * inv / period);
        }
        Orbit::Cubic(CubicOrbit::Equilibrium { x_eq }) => {
            sol.mean_phase_speed = Some(k / x_eq);
        }
        _ => {}
    }
    sol
}

/// Sample the solution on `(H, K)` over `y_span`. Bounded orbits start at their
/// turning point `y = 0`; homoclinic and heteroclinic orbits use their closed forms.
pub fn gl2_profile(p: &GL2Params, h: f64, k: f64, y_span: (f64, f64), n_samples: usize) -> Result<GLSolution> {
    check_span(y_span, n_samples)?;
    let mut sol = gl2_classify(p, h, k);
    let ys = linspace(y_span, n_samples);
    let n = ys.len();
    let (mut rho, mut theta, mut drho, mut dtheta) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);

    match orbit_of(p, h, k) {
        Orbit::Even(EvenOrbit::None) | Orbit::Cubic(CubicOrbit::None) => return Ok(sol),
        Orbit::Even(EvenOrbit::Rest) => {}
        Orbit::Even(EvenOrbit::Equilibrium { z_eq }) => rho.fill(z_eq),
        Orbit::Even(EvenOrbit::Homoclinic { z_max }) => {
            let kk = p.q1().sqrt();
            for (i, &y) in ys.iter().enumerate() {
                let s = 1.0 / (kk * y).cosh();
                rho[i] = z_max * s;
                drho[i] = -z_max * kk * s * (kk * y).tanh();
            }
        }
        Orbit::Even(EvenOrbit::Heteroclinic { z_star }) => {
            let kk = p.q2().sqrt() * z_star;
            for (i, &y) in ys.iter().enumerate() {
                let t = (kk * y).tanh();
                rho[i] = z_star * t;
                drho[i] = z_star * kk * (1.0 - t * t);
            }
        }
        Orbit::Even(EvenOrbit::Periodic { z_hi, .. }) => {
            let f = |x: &[f64; 2]| [x[1], p.rhs([x[0], 0.0])[0]];
            let tr = sample(&f, 0.0, [z_hi, 0.0], y_span, n, ODE_TOL)?;
            for (i, x) in tr.x.iter().enumerate() {
                rho[i] = x[0];
                drho[i] = x[1];
            }
        }
        Orbit::Cubic(CubicOrbit::Equilibrium { x_eq }) => {
            let beta = k / x_eq;
            rho.fill(x_eq.sqrt());
            dtheta.fill(beta);
            for (t, y) in theta.iter_mut().zip(&ys) {
                *t = beta * y;
            }
        }
        Orbit::Cubic(CubicOrbit::Periodic { x_hi: x_start, .. })
        | Orbit::Cubic(CubicOrbit::Homoclinic { x_turn: x_start, .. }) => {
            let r0 = x_start.sqrt();
            let f = |x: &[f64; 4]| {
                let a = p.rhs([x[0], x[1]]);
                [x[2], x[3], a[0], a[1]]
            };
            let tr = sample(&f, 0.0, [r0, 0.0, 0.0, k / r0], y_span, n, ODE_TOL)?;
            for (i, x) in tr.x.iter().enumerate() {
                let m = x[0] * x[0] + x[1] * x[1];
                if m == 0.0 {
                    return Err(Error::PhaseSingularity { y: ys[i] });
                }
                rho[i] = m.sqrt();
                theta[i] = x[1].atan2(x[0]);
                drho[i] = (x[0] * x[2] + x[1] * x[3]) / rho[i];
                dtheta[i] = (x[0] * x[3] - x[1] * x[2]) / m;
            }
            unwrap(&mut theta);
        }
    }

    let mut res: f64 = 0.0;
    for i in 0..n {
        let fi = gl2_integrals(p, rho[i], drho[i], dtheta[i]);
        let (sh, sk) = integral_scale(p, rho[i], drho[i], dtheta[i]);
        res = res.max((fi.h - h).abs() / sh.max(h.abs()).max(f64::MIN_POSITIVE));
        if k != 0.0 {
            res = res.max((fi.k - k).abs() / sk.max(k.abs()));
        }
    }
    sol.residual = res;
    sol.profile = Some(Profile::Polar { y: ys, rho, theta, drho, dtheta });
    Ok(sol)
}

/// `(H, K) = (0, 0)` profile for `tau < 0`, `c < 0`: the sech pulse.
pub fn gl2_homoclinic(p: &GL2Params, y_span: (f64, f64), n_samples: usize) -> Result<GLSolution> {
    gl2_profile(p, 0.0, 0.0, y_span, n_samples)
}

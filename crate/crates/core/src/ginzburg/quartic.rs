//! The real fourth-order steady equation `A'''' = tau A + sigma A'' - c A^3`,
//! its linearization and its regimes.

use faer::c64;
use serde::Serialize;

use super::integrate::sample;
use crate::{Error, Result};

/// Regime threshold on the normalized distance `|eps|`.
pub const DEFAULT_EPS_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootKind {
    /// Two real pairs, possibly coincident.
    Real,
    /// Two imaginary pairs, possibly coincident.
    Imaginary,
    RealAndImaginary,
    /// A double zero together with a real or imaginary pair.
    ZeroAndPair,
    /// `a +- ib`, `-a +- ib` with `a, b != 0`.
    ComplexQuadruple,
    AllZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticRoots {
    pub tau: f64,
    pub sigma: f64,
    /// `sigma^2 + 4 tau`.
    pub discriminant: f64,
    /// All four roots, closed under `lambda -> -lambda` and conjugation.
    pub roots: [c64; 4],
    /// Distinct roots with their multiplicities.
    pub distinct: Vec<(c64, usize)>,
    pub kind: RootKind,
}

/// Roots of `lambda^4 - sigma lambda^2 - tau = 0`.
pub fn quartic_roots(tau: f64, sigma: f64) -> QuarticRoots {
    let disc = sigma * sigma + 4.0 * tau;
    let (roots, kind) = if disc >= 0.0 {
        // real values of lambda^2
        let sq = disc.sqrt();
        let s_hi = 0.5 * (sigma + sq);
        let s_lo = if s_hi != 0.0 { -tau / s_hi } else { 0.5 * (sigma - sq) };
        let pair = |s: f64| {
            if s >= 0.0 {
                let r = s.sqrt();
                [c64::new(r, 0.0), c64::new(-r, 0.0)]
            } else {
                let r = (-s).sqrt();
                [c64::new(0.0, r), c64::new(0.0, -r)]
            }
        };
        let (a, b) = (pair(s_hi), pair(s_lo));
        let kind = match (s_hi.partial_cmp(&0.0), s_lo.partial_cmp(&0.0)) {
            (Some(std::cmp::Ordering::Equal), Some(std::cmp::Ordering::Equal)) => RootKind::AllZero,
            (Some(std::cmp::Ordering::Equal), _) | (_, Some(std::cmp::Ordering::Equal)) => RootKind::ZeroAndPair,
            _ if s_hi > 0.0 && s_lo > 0.0 => RootKind::Real,
            _ if s_hi < 0.0 && s_lo < 0.0 => RootKind::Imaginary,
            _ => RootKind::RealAndImaginary,
        };
        ([a[0], a[1], b[0], b[1]], kind)
    } else {
        let s = c64::new(0.5 * sigma, 0.5 * (-disc).sqrt());
        let l = s.sqrt();
        let (a, b) = (l.re.abs(), l.im.abs());
        (
            [c64::new(a, b), c64::new(a, -b), c64::new(-a, b), c64::new(-a, -b)],
            RootKind::ComplexQuadruple,
        )
    };
    let mut distinct: Vec<(c64, usize)> = Vec::new();
    for r in roots {
        match distinct.iter_mut().find(|(d, _)| *d == r) {
            Some((_, m)) => *m += 1,
            None => distinct.push((r, 1)),
        }
    }
    QuarticRoots { tau, sigma, discriminant: disc, roots, distinct, kind }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Region {
    /// `sigma > 0`, `tau = eps sigma^2`.
    Case1 { eps: f64 },
    /// `sigma < 0`, `tau = eps sigma^2`.
    Case2 { eps: f64 },
    /// `sigma < 0`, `sigma^2 + 4 tau = eps sigma^2`.
    Case3 { eps: f64 },
    Outside,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Case1 { .. } => "Case1",
            Region::Case2 { .. } => "Case2",
            Region::Case3 { .. } => "Case3",
            Region::Outside => "Outside",
        }
    }
}

pub fn classify_region(tau: f64, sigma: f64, eps_threshold: f64) -> Region {
    if sigma == 0.0 || !sigma.is_finite() || !tau.is_finite() {
        return Region::Outside;
    }
    let s2 = sigma * sigma;
    let e12 = tau / s2;
    if sigma > 0.0 {
        return if e12.abs() <= eps_threshold { Region::Case1 { eps: e12 } } else { Region::Outside };
    }
    let e3 = (s2 + 4.0 * tau) / s2;
    match (e12.abs() <= eps_threshold, e3.abs() <= eps_threshold) {
        (true, true) if e3.abs() < e12.abs() => Region::Case3 { eps: e3 },
        (true, _) => Region::Case2 { eps: e12 },
        (false, true) => Region::Case3 { eps: e3 },
        (false, false) => Region::Outside,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GL4Params {
    pub tau: f64,
    pub sigma: f64,
    pub c: f64,
}

impl GL4Params {
    pub fn rhs(&self, x: &[f64; 4]) -> [f64; 4] {
        [x[1], x[2], x[3], self.tau * x[0] + self.sigma * x[2] - self.c * x[0].powi(3)]
    }
}

/// Reversibility symmetry `S = diag(1, -1, 1, -1)`.
pub fn reflect(x: &[f64; 4]) -> [f64; 4] {
    [x[0], -x[1], x[2], -x[3]]
}

#[derive(Debug, Clone)]
pub struct QuarticTrajectory {
    pub y: Vec<f64>,
    pub x: Vec<[f64; 4]>,
    /// Max deviation between the trajectory started from `S X(y1)` and `S X(y1 + y0 - y)`.
    pub reversibility_defect: f64,
}

pub const QUARTIC_TOL: f64 = 1e-13;

/// Integrate from `x0` at `y_span.0` and sample `n` points of the span.
pub fn integrate_quartic(p: &GL4Params, x0: [f64; 4], y_span: (f64, f64), n: usize) -> Result<QuarticTrajectory> {
    if !x0.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite initial data".into()));
    }
    let f = |x: &[f64; 4]| p.rhs(x);
    let fwd = sample(&f, y_span.0, x0, y_span, n, QUARTIC_TOL)?;
    let end = reflect(fwd.x.last().expect("n >= 2"));
    let back = sample(&f, y_span.0, end, y_span, n, QUARTIC_TOL)?;
    let mut defect: f64 = 0.0;
    for (b, x) in back.x.iter().zip(fwd.x.iter().rev()) {
        let s = reflect(x);
        for i in 0..4 {
            defect = defect.max((b[i] - s[i]).abs());
        }
    }
    Ok(QuarticTrajectory { y: fwd.y, x: fwd.x, reversibility_defect: defect })
}

//! Steady Ginzburg–Landau amplitudes: classification by first integrals and
//! construction of sampled profiles.
//!
//! [`gl2`] treats the second-order equation `a3 tau A + b4 A'' = c A |A|^2`,
//! [`quartic`] and [`gl4`] the fourth-order equation `A'''' = tau A + sigma A'' - c A |A|^2`
//! near its three codimension-one regimes.

use serde::Serialize;

pub mod gl2;
pub mod gl4;
pub mod integrate;
pub mod orbit;
pub mod quartic;

pub use gl2::{gl2_classify, gl2_profile, gl2_simple_solutions, GL2Params};
pub use gl4::{case1_reduced, case2_normalform, case3_normalform, Case2Params, Case3Params};
pub use quartic::{classify_region, integrate_quartic, quartic_roots, GL4Params, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SolutionClass {
    Couette,
    TVF,
    WavyVortex,
    PeriodicConstantPhase,
    QuasiPeriodic,
    Homoclinic,
    HeteroclinicTube,
    PeriodicFirstKind,
    NoSmallBounded,
}

impl SolutionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Couette => "Couette",
            Self::TVF => "TVF",
            Self::WavyVortex => "WavyVortex",
            Self::PeriodicConstantPhase => "PeriodicConstantPhase",
            Self::QuasiPeriodic => "QuasiPeriodic",
            Self::Homoclinic => "Homoclinic",
            Self::HeteroclinicTube => "HeteroclinicTube",
            Self::PeriodicFirstKind => "PeriodicFirstKind",
            Self::NoSmallBounded => "NoSmallBounded",
        }
    }

    /// Whether a bounded profile can be sampled for this class.
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Self::NoSmallBounded)
    }
}

impl std::fmt::Display for SolutionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstIntegrals {
    pub h: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Profile {
    /// `A = rho e^{i theta}`. With `K = 0` the amplitude is real and `rho` may change sign.
    Polar { y: Vec<f64>, rho: Vec<f64>, theta: Vec<f64>, drho: Vec<f64>, dtheta: Vec<f64> },
    /// Normal-form coordinates: real `U, V` and the modulus and phase of the rotating part.
    NormalForm { y: Vec<f64>, u: Vec<f64>, v: Vec<f64>, abs_w: Vec<f64>, phase: Vec<f64> },
}

impl Profile {
    pub fn y(&self) -> &[f64] {
        match self {
            Profile::Polar { y, .. } | Profile::NormalForm { y, .. } => y,
        }
    }

    pub fn len(&self) -> usize {
        self.y().len()
    }

    pub fn is_empty(&self) -> bool {
        self.y().is_empty()
    }

    pub fn column_names(&self) -> &'static [&'static str] {
        match self {
            Profile::Polar { .. } => &["y", "rho", "theta"],
            Profile::NormalForm { .. } => &["y", "u", "v", "abs_w"],
        }
    }

    /// Row `i` restricted to [`Self::column_names`].
    pub fn row(&self, i: usize) -> Vec<f64> {
        match self {
            Profile::Polar { y, rho, theta, .. } => vec![y[i], rho[i], theta[i]],
            Profile::NormalForm { y, u, v, abs_w, .. } => vec![y[i], u[i], v[i], abs_w[i]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GLSolution {
    pub class: SolutionClass,
    pub profile: Option<Profile>,
    pub integrals: FirstIntegrals,
    /// Period of the amplitude, when it is periodic.
    pub period: Option<f64>,
    /// Max-norm defect of the defining equations (or their first integrals) on the samples.
    pub residual: f64,
    /// Mean phase drift over one amplitude period.
    pub mean_phase_speed: Option<f64>,
    /// Nonzero equilibrium amplitudes of the reduced problem.
    pub equilibria: Vec<f64>,
}

impl GLSolution {
    pub(crate) fn bare(class: SolutionClass, integrals: FirstIntegrals) -> Self {
        GLSolution {
            class,
            profile: None,
            integrals,
            period: None,
            residual: 0.0,
            mean_phase_speed: None,
            equilibria: Vec::new(),
        }
    }
}

/// Equispaced samples of `[y0, y1]`.
pub(crate) fn linspace(span: (f64, f64), n: usize) -> Vec<f64> {
    let h = (span.1 - span.0) / (n - 1) as f64;
    (0..n).map(|k| span.0 + h * k as f64).collect()
}

pub(crate) fn check_span(span: (f64, f64), n: usize) -> crate::Result<()> {
    if n < 2 || !(span.1 > span.0) || !span.0.is_finite() || !span.1.is_finite() {
        return Err(crate::Error::InvalidArgument(format!(
            "profile span [{}, {}] with {n} samples",
            span.0, span.1
        )));
    }
    Ok(())
}

/// Continuous phase from a sampled angle.
pub(crate) fn unwrap(angles: &mut [f64]) {
    use std::f64::consts::{PI, TAU};
    for i in 1..angles.len() {
        let mut d = angles[i] - angles[i - 1];
        while d > PI {
            d -= TAU;
        }
        while d < -PI {
            d += TAU;
        }
        angles[i] = angles[i - 1] + d;
    }
}

use couette_core::ginzburg::gl2::*;
use couette_core::ginzburg::gl4::*;
use couette_core::ginzburg::integrate::sample;
use couette_core::ginzburg::quartic::*;
use couette_core::ginzburg::{Profile, SolutionClass};
use couette_core::Error;
use faer::{c64, Mat};
use proptest::prelude::*;

type Columns = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

fn polar(p: Option<Profile>) -> Columns {
    match p {
        Some(Profile::Polar { y, rho, theta, drho, dtheta }) => (y, rho, theta, drho, dtheta),
        other => panic!("expected a polar profile, got {other:?}"),
    }
}

fn normal_form(p: Option<Profile>) -> Columns {
    match p {
        Some(Profile::NormalForm { y, u, v, abs_w, phase }) => (y, u, v, abs_w, phase),
        other => panic!("expected a normal-form profile, got {other:?}"),
    }
}

fn sub() -> GL2Params {
    GL2Params::new(1.0, 1.0, -1.0, -0.1, 0.0).unwrap()
}

fn sup() -> GL2Params {
    GL2Params::new(1.0, 1.0, 1.0, 0.1, 0.0).unwrap()
}

/// Real roots of `c0 + c1 x + ... + x^n` (monic after division) from companion-matrix eigenvalues.
fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let comp = Mat::<f64>::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let ev: Vec<c64> = comp.eigenvalues().unwrap();
    let scale = ev.iter().fold(1e-300f64, |m, z| m.max(z.norm()));
    ev.into_iter().filter(|z| z.im.abs() <= 1e-7 * scale).map(|z| z.re).collect()
}

/// Expected class of `(H, K)` from the count of positive roots of `X f(X)`.
fn expected_class(p: &GL2Params, h: f64, k: f64) -> SolutionClass {
    let q2 = p.c / (2.0 * p.b4);
    let q1 = -p.a3 * p.tau / p.b4;
    if k == 0.0 {
        // z'^2 = h + q1 z^2 + q2 z^4 with z = +-rho
        let pos = real_roots(&[h, q1, q2]).into_iter().filter(|x| *x > 0.0).count();
        let bounded = if h > 0.0 { pos >= 1 } else { pos == 2 };
        if bounded {
            SolutionClass::PeriodicConstantPhase
        } else {
            SolutionClass::NoSmallBounded
        }
    } else {
        let pos = real_roots(&[-k * k, h, q1, q2]).into_iter().filter(|x| *x > 0.0).count();
        if pos >= 2 {
            SolutionClass::QuasiPeriodic
        } else {
            SolutionClass::NoSmallBounded
        }
    }
}

// ------------------------------------------------------------------ second order

#[test]
fn simple_solutions() {
    let p = GL2Params::new(1.0, 2.0, -3.0, 0.0, 0.0).unwrap();
    assert_eq!(gl2_simple_solutions(&p), vec![(SolutionClass::Couette, 0.0)]);
    let s = sub();
    let tvf = gl2_simple_solutions(&s);
    assert_eq!(tvf[1].0, SolutionClass::TVF);
    assert!((tvf[1].1.powi(2) - s.a3 * s.tau / s.c).abs() < 1e-15);
    assert!(GL2Params::new(-1.0, 1.0, 1.0, 1.0, 0.0).is_err());
}

#[test]
fn subcritical_wavy_vortex_example() {
    // b4 beta^2 = |a3 tau| / 2 with tau < 0, c < 0
    let p = sub();
    let beta = (0.5 * (p.a3 * p.tau).abs() / p.b4).sqrt();
    let rho = wavy_vortex_amplitude(&p, beta).unwrap();
    assert!((rho * rho - (p.b4 * beta * beta - p.a3 * p.tau) / -p.c).abs() < 1e-15);
    assert!((rho * rho - 1.5 * (p.a3 * p.tau).abs() / p.c.abs()).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `rho e^{i beta y}` substituted into `a3 tau A + b4 A'' = c A |A|^2`.
    #[test]
    fn wavy_vortex_by_substitution(a3 in 0.1f64..3.0, b4 in 0.1f64..3.0, c in -3.0f64..3.0, tau in -1.0f64..1.0, beta in -2.0f64..2.0) {
        prop_assume!(c.abs() > 1e-3);
        let p = GL2Params::new(a3, b4, c, tau, 0.0).unwrap();
        let r2 = (a3 * tau - b4 * beta * beta) / c;
        match wavy_vortex_amplitude(&p, beta) {
            Some(rho) => {
                prop_assert!(r2 > 0.0);
                let defect = a3 * tau * rho - b4 * beta * beta * rho - c * rho.powi(3);
                let scale = (a3 * tau * rho).abs() + (b4 * beta * beta * rho).abs() + (c * rho.powi(3)).abs();
                prop_assert!(defect.abs() <= 1e-13 * scale);
            }
            None => prop_assert!(r2 <= 0.0),
        }
    }

    /// Agreement with positive-root counting by companion-matrix eigenvalues.
    #[test]
    fn classification_matches_root_counting(
        supercritical in any::<bool>(),
        h in -1.0f64..1.0,
        k in -1.0f64..1.0,
        zero_k in prop::bool::weighted(0.25),
    ) {
        let p = if supercritical { sup() } else { sub() };
        let (h, k) = (0.01 * h, if zero_k { 0.0 } else { 0.006 * k });
        prop_assert_eq!(gl2_classify(&p, h, k).class, expected_class(&p, h, k), "H={} K={}", h, k);
    }
}

#[test]
fn named_level_sets() {
    let p = sub();
    assert_eq!(gl2_classify(&p, 0.0, 0.0).class, SolutionClass::Homoclinic);
    let h_tvf = (p.a3 * p.tau).powi(2) / (2.0 * p.c * p.b4);
    assert_eq!(gl2_classify(&p, h_tvf, 0.0).class, SolutionClass::TVF);
    assert_eq!(gl2_classify(&p, 0.5 * h_tvf, 0.0).class, SolutionClass::PeriodicConstantPhase);
    assert_eq!(gl2_classify(&p, 0.01, 0.0).class, SolutionClass::PeriodicConstantPhase);
    // max f < 0
    assert_eq!(gl2_classify(&p, -0.01, 0.01).class, SolutionClass::NoSmallBounded);
    assert_eq!(gl2_classify(&sup(), 0.002, 0.0).class, SolutionClass::PeriodicConstantPhase);
}

#[test]
fn wavy_vortex_on_the_limiting_curve() {
    let p = sub();
    let beta = 0.2;
    let rho = wavy_vortex_amplitude(&p, beta).unwrap();
    let x = rho * rho;
    let k = x * beta;
    // H from rho' = 0, theta' = beta
    let h = x * beta * beta - (p.c / (2.0 * p.b4)) * x * x + (p.a3 * p.tau / p.b4) * x;
    let s = gl2_classify(&p, h, k);
    assert_eq!(s.class, SolutionClass::WavyVortex);
    assert!((s.mean_phase_speed.unwrap() - beta).abs() < 1e-6);
}

/// `(H, K)` recomputed from the profile with the first-integral formulas.
fn integral_drift(p: &GL2Params, h: f64, k: f64, rho: &[f64], drho: &[f64], dtheta: &[f64]) -> f64 {
    let (q2, q1) = (p.c / (2.0 * p.b4), -p.a3 * p.tau / p.b4);
    let mut worst: f64 = 0.0;
    for i in 0..rho.len() {
        let x = rho[i] * rho[i];
        let terms = [drho[i] * drho[i], x * dtheta[i] * dtheta[i], -q2 * x * x, -q1 * x];
        let hh: f64 = terms.iter().sum();
        let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(h.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((hh - h).abs() / scale);
        if k != 0.0 {
            worst = worst.max((x * dtheta[i] - k).abs() / k.abs());
        }
    }
    worst
}

#[test]
fn first_integrals_are_conserved_along_profiles() {
    let cases = [
        (sub(), 0.0, 0.0),
        (sub(), -0.003, 0.0),
        (sub(), 0.004, 0.0),
        (sub(), 0.001, 0.0005),
        (sub(), -0.002, 0.0002),
        (sup(), 0.002, 0.0),
        (sup(), 0.003, 0.0008),
        (sup(), sup().h_tvf(), 0.0),
    ];
    for (p, h, k) in cases {
        let s = gl2_profile(&p, h, k, (-50.0, 50.0), 2001).unwrap();
        assert!(s.class.is_bounded(), "({h}, {k}) -> {}", s.class);
        assert!(s.residual <= 1e-8, "({h}, {k}): residual {}", s.residual);
        let (_, rho, _, drho, dtheta) = polar(s.profile);
        let drift = integral_drift(&p, h, k, &rho, &drho, &dtheta);
        assert!(drift <= 1e-8, "({h}, {k}) {}: drift {drift:e}", s.class);
    }
}

#[test]
fn homoclinic_matches_sech() {
    let p = sub();
    let s = gl2_homoclinic(&p, (-50.0, 50.0), 2001).unwrap();
    assert_eq!(s.class, SolutionClass::Homoclinic);
    let (y, rho, theta, _, _) = polar(s.profile);
    let rho0 = (2.0 * p.a3 * p.tau / p.c).sqrt();
    let k = (-p.a3 * p.tau / p.b4).sqrt();
    for i in 0..y.len() {
        assert!((rho[i] - rho0 / (k * y[i]).cosh()).abs() <= 1e-8);
        assert_eq!(theta[i], 0.0);
    }
    // decay and peak
    let at = |yy: f64| rho0 / (k * yy).cosh();
    assert!(at(20.0 / k) <= 1e-8 * at(0.0));
    let peak = rho.iter().cloned().fold(0.0, f64::max);
    assert!((peak - rho0).abs() < 1e-14);
}

#[test]
fn sech_satisfies_the_amplitude_equation() {
    // rho'^2 = (c / 2 b4) rho^4 - (a3 tau / b4) rho^2, rho' by central differences
    let p = GL2Params::new(1.3, 0.7, -2.0, -0.15, 0.0).unwrap();
    let rho0 = (2.0 * p.a3 * p.tau / p.c).sqrt();
    let k = (-p.a3 * p.tau / p.b4).sqrt();
    let r = |y: f64| rho0 / (k * y).cosh();
    let h = 1e-4;
    for i in -40..=40 {
        let y = 0.25 * i as f64;
        let d = (r(y + h) - r(y - h)) / (2.0 * h);
        let rhs = p.c / (2.0 * p.b4) * r(y).powi(4) - p.a3 * p.tau / p.b4 * r(y).powi(2);
        assert!((d * d - rhs).abs() <= 1e-9 * rho0 * rho0 * k * k, "y={y}");
    }
}

#[test]
fn homoclinic_by_integration() {
    // integrate A'' = (c|A|^2 - a3 tau) A / b4 from the peak and compare with the closed form
    let p = sub();
    let rho0 = (2.0 * p.a3 * p.tau / p.c).sqrt();
    let k = (-p.a3 * p.tau / p.b4).sqrt();
    let f = |x: &[f64; 2]| [x[1], (p.c * x[0] * x[0] - p.a3 * p.tau) / p.b4 * x[0]];
    let tr = sample(&f, 0.0, [rho0, 0.0], (-20.0, 20.0), 401, 1e-13).unwrap();
    for (y, x) in tr.y.iter().zip(&tr.x) {
        assert!((x[0] - rho0 / (k * y).cosh()).abs() <= 1e-8, "y={y}");
    }
}

#[test]
fn equilibrium_profiles_are_constant() {
    let p = sub();
    let s = gl2_profile(&p, p.h_tvf(), 0.0, (-10.0, 10.0), 51).unwrap();
    assert_eq!(s.class, SolutionClass::TVF);
    let (_, rho, theta, _, _) = polar(s.profile);
    let amp = (p.a3 * p.tau / p.c).sqrt();
    assert!(rho.iter().all(|r| (r - amp).abs() < 1e-12));
    assert!(theta.iter().all(|t| *t == theta[0]));
}

#[test]
fn quasi_periodic_phase_is_linear_plus_periodic() {
    let p = sub();
    let (h, k) = (0.001, 0.0005);
    let s = gl2_classify(&p, h, k);
    assert_eq!(s.class, SolutionClass::QuasiPeriodic);
    let (period, beta) = (s.period.unwrap(), s.mean_phase_speed.unwrap());
    let prof = gl2_profile(&p, h, k, (0.0, 2.0 * period), 401).unwrap();
    let (_, rho, theta, _, _) = polar(prof.profile);
    // samples 0, 200 and 400 sit at y = 0, P, 2P
    for (a, b) in [(0, 200), (200, 400)] {
        assert!((rho[b] - rho[a]).abs() < 1e-7, "rho not periodic");
        assert!((theta[b] - theta[a] - beta * period).abs() < 1e-7, "theta - beta y not periodic");
    }
    // beta by direct quadrature of K / rho^2 over one period
    let n = 200;
    let direct: f64 = (0..n).map(|i| 0.5 * (k / rho[i].powi(2) + k / rho[i + 1].powi(2)) * period / n as f64).sum::<f64>() / period;
    assert!((direct - beta).abs() < 1e-3 * beta);
}

// ------------------------------------------------------------------ fourth order

#[test]
fn quartic_root_examples() {
    let r = quartic_roots(0.0, 1.0);
    let mut re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re, vec![-1.0, 0.0, 0.0, 1.0]);
    assert!(r.distinct.iter().any(|(z, m)| *z == c64::new(0.0, 0.0) && *m == 2));

    let r = quartic_roots(-0.25, -1.0);
    assert_eq!(r.discriminant, 0.0);
    assert_eq!(r.distinct.len(), 2);
    for (z, m) in r.distinct {
        assert_eq!(m, 2);
        assert!(z.re == 0.0 && (z.im.abs() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    let r = quartic_roots(1.0, 0.0);
    for z in [c64::new(1.0, 0.0), c64::new(-1.0, 0.0), c64::new(0.0, 1.0), c64::new(0.0, -1.0)] {
        assert!(r.roots.iter().any(|w| (w - z).norm() < 1e-15));
    }
}

fn sorted(v: impl IntoIterator<Item = c64>) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = v.into_iter().map(|z| ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())).collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quartic_roots_are_symmetric(tau in -2.0f64..2.0, sigma in -2.0f64..2.0) {
        let r = quartic_roots(tau, sigma);
        let base = sorted(r.roots);
        prop_assert_eq!(&base, &sorted(r.roots.map(|z| -z)));
        prop_assert_eq!(&base, &sorted(r.roots.map(|z| z.conj())));
        let scale = 1.0 + sigma.abs() + tau.abs();
        for z in r.roots {
            let z2 = z * z;
            let val = z2 * z2 - sigma * z2 - tau;
            prop_assert!(val.norm() <= 1e-12 * scale * (1.0 + z2.norm() * z2.norm()), "{:?}", z);
        }
    }
}

#[test]
fn regions() {
    assert!(matches!(classify_region(0.01, 1.0, 0.1), Region::Case1 { .. }));
    assert!(matches!(classify_region(-0.25 + 0.001, -1.0, 0.1), Region::Case3 { .. }));
    assert!(matches!(classify_region(0.02, -1.0, 0.1), Region::Case2 { .. }));
    assert_eq!(classify_region(1.0, 0.0, 0.1), Region::Outside);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reversibility(x0 in prop::array::uniform4(-0.05f64..0.05)) {
        // c < 0 keeps small data bounded; with c > 0 some of it grows by 1e6 and the defect only measures that growth
        let p = GL4Params { tau: -0.2, sigma: -1.0, c: -1.0 };
        let t = integrate_quartic(&p, x0, (0.0, 20.0), 201).unwrap();
        prop_assert!(t.reversibility_defect <= 1e-8, "{}", t.reversibility_defect);
    }
}

#[test]
fn blow_up_is_detected() {
    let p = GL4Params { tau: 0.0, sigma: 0.0, c: -1.0 };
    match integrate_quartic(&p, [3.0, 3.0, 3.0, 3.0], (0.0, 50.0), 11) {
        Err(Error::TrajectoryEscaped { y }) => assert!(y > 0.0 && y < 50.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn case1_portraits() {
    assert_eq!(case1_reduced(0.0, -1.0).equilibria, vec![0.0]);
    let p = case1_reduced(-0.1, -1.0);
    assert_eq!(p.equilibria.len(), 3);
    assert!(p.equilibria.iter().any(|e| (e - 0.1f64.sqrt()).abs() < 1e-15));
    assert!(p.equilibria.iter().any(|e| (e + 0.1f64.sqrt()).abs() < 1e-15));
    assert_eq!(p.classify(0.0).class, SolutionClass::Homoclinic);
}

#[test]
fn case1_energy_conservation_by_rk4() {
    let p = case1_reduced(-0.1, -1.0);
    // E = 0 turning point: V = 0, eps U^2 = (c/2) U^4
    let u0 = (2.0 * p.eps / p.c).sqrt();
    let mut x = [u0 * 0.999, 0.0];
    let e0 = p.energy(x[0], x[1]);
    let h = 0.005;
    for _ in 0..(50.0 / h) as usize {
        let k1 = p.rhs(&x);
        let k2 = p.rhs(&[x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]]);
        let k3 = p.rhs(&[x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]]);
        let k4 = p.rhs(&[x[0] + h * k3[0], x[1] + h * k3[1]]);
        for i in 0..2 {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    assert!((p.energy(x[0], x[1]) - e0).abs() <= 1e-8);
    // and the library profile on the same level conserves it as well
    let s = p.profile(e0, (-25.0, 25.0), 501).unwrap();
    assert!(s.residual <= 1e-8);
}

#[test]
fn case1_orbit_of_the_full_system() {
    let orbit = case1_periodic_orbit_4d(-0.1, -1.0, 0.35).unwrap();
    assert!(orbit.closure_error <= 1e-5, "{orbit:?}");
    let sys = GL4Params { tau: -0.1, sigma: 1.0, c: -1.0 };
    let t = integrate_quartic(&sys, orbit.x0, (0.0, orbit.period), 2).unwrap();
    let end = t.x[1];
    let err = (0..4).map(|i| (end[i] - orbit.x0[i]).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-5, "return-map error {err:e}");
    // the reduced period is the right guess to leading order
    let reduced = case1_reduced(-0.1, -1.0);
    let p0 = reduced.classify(reduced.energy(0.35, 0.0)).period.unwrap();
    assert!((orbit.period - p0).abs() < 0.25 * p0);
}

#[test]
fn case2_only_rest_when_effective_eps_positive() {
    let p = Case2Params::new(-0.01, -1.0, 0.01).unwrap();
    assert!(p.eps > -6.0 * p.c.abs() * p.k);
    assert_eq!(case2_classify(&p, 0.0).class, SolutionClass::PeriodicFirstKind);
    for h in [-0.01, 0.01] {
        assert_eq!(case2_classify(&p, h).class, SolutionClass::NoSmallBounded);
    }
    assert!(Case2Params::new(0.1, -1.0, -0.1).is_err());
}

#[test]
fn case2_tvf_equilibria() {
    let p = Case2Params::new(-0.1, -1.0, 0.0).unwrap();
    let s = case2_classify(&p, 0.0);
    let e = (p.eps / p.c).sqrt();
    assert_eq!(s.equilibria.len(), 2);
    assert!((s.equilibria[0] + e).abs() < 1e-15 && (s.equilibria[1] - e).abs() < 1e-15);
}

#[test]
fn case2_k_is_conserved_along_trajectories() {
    let p = Case2Params::new(-0.1, -1.0, 0.002).unwrap();
    let x0 = [0.12, -0.03, 0.03, 0.02];
    let k0 = x0[2] * x0[2] + x0[3] * x0[3];
    let p = Case2Params { k: k0, ..p };
    let h0 = p.first_integrals(&x0).h;
    let f = |x: &[f64; 4]| p.rhs(x);
    let tr = sample(&f, 0.0, x0, (0.0, 100.0), 201, 1e-13).unwrap();
    for x in &tr.x {
        let fi = p.first_integrals(x);
        assert!((fi.k - k0).abs() <= 1e-9 * k0);
        assert!((fi.h - h0).abs() <= 1e-9 * (x[1] * x[1] + 0.1 * x[0] * x[0]));
    }
}

#[test]
fn case2_heteroclinic_limits() {
    let p = Case2Params::new(-0.1, -1.0, 0.002).unwrap();
    let s = case2_normalform(&p, p.h_separatrix(), (-50.0, 50.0), 1001).unwrap();
    assert_eq!(s.class, SolutionClass::HeteroclinicTube);
    let target = ((p.eps - 6.0 * p.c * p.k) / p.c).abs().sqrt();
    let (_, u, _, abs_w, _) = normal_form(s.profile);
    assert!((u[0] + target).abs() <= 1e-4 && (u[1000] - target).abs() <= 1e-4);
    assert!(abs_w.iter().all(|w| (w * w - p.k).abs() < 1e-15));
    assert!(s.residual <= 1e-8);
    assert!(heteroclinic_k_min(p.eps, DEFAULT_KAPPA) < 1e-1);
}

#[test]
fn case2_periodic_orbits_close() {
    let mut rng = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..5 {
        let eps = -0.02 - 0.08 * next();
        let c = -0.5 - 1.5 * next();
        let k = 0.5 * next() * eps.abs() / (6.0 * c.abs());
        let p = Case2Params::new(eps, c, k).unwrap();
        let h = (0.1 + 0.8 * next()) * p.h_separatrix();
        assert_eq!(case2_classify(&p, h).class, SolutionClass::QuasiPeriodic);
        let err = case2_return_error(&p, h).unwrap();
        assert!(err <= 1e-5, "eps={eps} c={c} K={k} H={h}: {err:e}");
    }
}

fn case3() -> Case3Params {
    Case3Params::new(-0.05, -1.0, -1.0).unwrap()
}

#[test]
fn case3_wavy_vortex_amplitude() {
    let p = case3();
    let h_min = p.eps * p.eps / (192.0 * p.sigma.powi(2) * p.c);
    let s = case3_normalform(&p, h_min, 0.0, (-10.0, 10.0), 101).unwrap();
    assert_eq!(s.class, SolutionClass::WavyVortex);
    let r02 = p.eps / (12.0 * p.sigma.powi(2) * p.c);
    let (_, rho, theta, _, _) = polar(s.profile);
    assert!(rho.iter().all(|r| (r * r - r02).abs() <= 1e-10));
    // the phase rotates at omega
    assert!((theta[100] - theta[0] - 20.0 * p.omega()).abs() < 1e-9);
}

#[test]
fn case3_homoclinic() {
    let p = case3();
    let k = (-p.eps / 8.0).sqrt();
    let s = case3_normalform(&p, 0.0, 0.0, (-20.0 / k, 20.0 / k), 4001).unwrap();
    assert_eq!(s.class, SolutionClass::Homoclinic);
    assert!(s.residual <= 1e-6, "{}", s.residual);
    let rhat = (p.eps / (6.0 * p.sigma.powi(2) * p.c)).sqrt();
    let (y, rho, _, _, _) = polar(s.profile);
    for i in 0..y.len() {
        assert!((rho[i] - rhat / (k * y[i]).cosh()).abs() <= 1e-10);
    }
    assert_eq!(y[2000], 0.0);
    assert!(rho[0] <= 1e-8 * rho[2000] && rho[4000] <= 1e-8 * rho[2000]);
}

#[test]
fn case3_sech_by_substitution() {
    // r'^2 = -(eps/8) r^2 + (3/4) sigma^2 c r^4 with central differences
    let p = Case3Params::new(-0.08, -1.3, -0.7).unwrap();
    let rhat = (p.eps / (6.0 * p.sigma.powi(2) * p.c)).sqrt();
    let k = (-p.eps / 8.0).sqrt();
    let r = |y: f64| rhat / (k * y).cosh();
    let h = 1e-4;
    for i in -40..=40 {
        let y = i as f64;
        let d = (r(y + h) - r(y - h)) / (2.0 * h);
        let rhs = -p.eps / 8.0 * r(y).powi(2) + 0.75 * p.sigma.powi(2) * p.c * r(y).powi(4);
        assert!((d * d - rhs).abs() <= 1e-9 * rhat * rhat * k * k, "y={y}");
    }
}

#[test]
fn case3_free_phase_and_outside_levels() {
    let mut p = case3();
    let a = polar(case3_normalform(&p, 0.0, 0.0, (-5.0, 5.0), 11).unwrap().profile).2;
    p.theta_star = 0.7;
    let b = polar(case3_normalform(&p, 0.0, 0.0, (-5.0, 5.0), 11).unwrap().profile).2;
    assert!(a.iter().zip(&b).all(|(x, y)| (y - x - 0.7).abs() < 1e-12));
    assert_eq!(case3_classify(&p, -1e-4, 1e-5).class, SolutionClass::NoSmallBounded);
}

#[test]
fn case3_quasi_periodic_profile() {
    let p = case3();
    let s = case3_normalform(&p, 0.5 * p.h_min(), 1e-5, (-50.0, 50.0), 1001).unwrap();
    assert_eq!(s.class, SolutionClass::QuasiPeriodic);
    assert!(s.residual <= 1e-6, "{}", s.residual);
    // U' = i omega U + V, so K = Im(conj(U) V) = rho^2 (theta' - omega)
    let (_, rho, _, _, dtheta) = polar(s.profile);
    for (r, dt) in rho.iter().zip(&dtheta) {
        assert!((r * r * (dt - p.omega()) - 1e-5).abs() <= 1e-9 * 1e-5);
    }
}

#[test]
fn case3_equilibrium_curve() {
    let p = case3();
    for u0 in [0.001, 0.002, 0.004] {
        for fi in case3_gamma(&p, u0) {
            let cls = case3_classify(&p, fi.h, fi.k).class;
            assert!(matches!(cls, SolutionClass::WavyVortex | SolutionClass::Homoclinic), "{cls} at {fi:?}");
        }
    }
}

//! Bounded orbits of one-degree-of-freedom first integrals.
//!
//! Two shapes occur:
//! - even: `z'^2 = q(z^2)` with `q` quadratic, `z` real and allowed to change sign
//! - cubic: `X'^2 = 4 P(X)` with `P` cubic and `P(0) < 0`, restricted to `X > 0`
//!
//! Orbits are read off from the roots of `q` or `P` on the positive axis.

use std::f64::consts::FRAC_PI_2;

/// Relative tolerance under which a critical value counts as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-10;

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// `sum |c_i| |x|^i`, the natural size of `eval(x)`.
    pub fn scale(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    fn leading(&self) -> f64 {
        self.0[self.degree()]
    }

    /// Quotient of division by `(x - r)`, remainder dropped.
    pub fn deflate(&self, r: f64) -> Poly {
        let d = self.degree();
        let mut q = vec![0.0; d.max(1)];
        let mut acc = 0.0;
        for i in (1..=d).rev() {
            acc = acc * r + self.0[i];
            q[i - 1] = acc;
        }
        Poly(q)
    }
}

/// Real roots of `a x^2 + b x + c` in increasing order.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / a, c / q] };
    r.sort_by(|x, y| x.total_cmp(y));
    r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRoot {
    pub x: f64,
    pub double: bool,
}

/// Roots of a polynomial of degree <= 3 on `[0, inf)`, tangencies flagged as double.
#[derive(Debug, Clone)]
pub struct AxisAnalysis {
    pub roots: Vec<AxisRoot>,
    /// Sign of the polynomial on the open gaps: before the first root, between roots, after the last.
    pub gap_signs: Vec<f64>,
}

fn bisect(p: &Poly, mut a: f64, mut b: f64) -> f64 {
    let mut fa = p.eval(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn analyze_axis(p: &Poly, tol: f64) -> AxisAnalysis {
    let dp = p.derivative();
    let crit: Vec<f64> = match dp.degree() {
        0 => vec![],
        1 => vec![-dp.0[0] / dp.0[1]],
        _ => quadratic_roots(dp.0[2], dp.0[1], dp.0[0]),
    };
    let is_zero = |x: f64| p.eval(x).abs() <= tol * p.scale(x).max(f64::MIN_POSITIVE);

    let mut roots: Vec<AxisRoot> = Vec::new();
    if is_zero(0.0) {
        let double = dp.eval(0.0).abs() <= tol * dp.scale(0.0).max(f64::MIN_POSITIVE) * 10.0;
        roots.push(AxisRoot { x: 0.0, double });
    }
    let mut breaks = vec![0.0];
    for &c in crit.iter().filter(|c| **c > 0.0) {
        if is_zero(c) {
            roots.push(AxisRoot { x: c, double: true });
        }
        breaks.push(c);
    }
    // far end where the leading term dominates
    let mut far = breaks.last().copied().unwrap_or(0.0).max(1.0);
    if p.degree() > 0 {
        while p.eval(far).signum() != p.leading().signum() || p.eval(far) == 0.0 {
            far *= 2.0;
        }
        breaks.push(far);
    }
    let value = |x: f64| if is_zero(x) { 0.0 } else { p.eval(x) };
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (value(a), value(b));
        if fa != 0.0 && fb != 0.0 && fa.signum() != fb.signum() {
            roots.push(AxisRoot { x: bisect(p, a, b), double: false });
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    roots.dedup_by(|a, b| (a.x - b.x).abs() <= 1e-12 * (1.0 + b.x.abs()));

    let mut gap_signs = Vec::with_capacity(roots.len() + 1);
    let mut left = 0.0;
    for r in &roots {
        if r.x > left {
            gap_signs.push(p.eval(0.5 * (left + r.x)).signum());
        } else {
            gap_signs.push(0.0);
        }
        left = r.x;
    }
    gap_signs.push(if p.degree() == 0 { p.0[0].signum() } else { p.leading().signum() });
    AxisAnalysis { roots, gap_signs }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvenOrbit {
    /// Only the rest state `z = 0` lies on the level set.
    Rest,
    /// Isolated equilibria `z = +-z_eq`.
    Equilibrium { z_eq: f64 },
    /// Oscillation between turning points; symmetric about 0 when sign-changing.
    Periodic { z_lo: f64, z_hi: f64, sign_changing: bool },
    /// Orbit leaving and returning to 0, peaking at `z_max`.
    Homoclinic { z_max: f64 },
    /// Orbit connecting `-z_star` to `z_star`.
    Heteroclinic { z_star: f64 },
    None,
}

/// Classify the bounded orbit of `z'^2 = q(z^2)`.
pub fn classify_even(q: &Poly, tol: f64) -> EvenOrbit {
    let ax = analyze_axis(q, tol);
    let roots = &ax.roots;
    let q0_zero = roots.first().is_some_and(|r| r.x == 0.0);

    // component reaching the origin
    if !q0_zero {
        if ax.gap_signs[0] > 0.0 {
            if let Some(r) = roots.first() {
                return if r.double {
                    EvenOrbit::Heteroclinic { z_star: r.x.sqrt() }
                } else {
                    EvenOrbit::Periodic { z_lo: -r.x.sqrt(), z_hi: r.x.sqrt(), sign_changing: true }
                };
            }
        }
    } else if !roots[0].double && ax.gap_signs.get(1).is_some_and(|s| *s > 0.0) {
        if let Some(r) = roots.get(1) {
            return EvenOrbit::Homoclinic { z_max: r.x.sqrt() };
        }
    }

    // components away from the origin
    let start = usize::from(q0_zero);
    for i in start..roots.len().saturating_sub(1) {
        if ax.gap_signs[i + 1] > 0.0 && roots[i].x > 0.0 && !roots[i].double && !roots[i + 1].double {
            return EvenOrbit::Periodic { z_lo: roots[i].x.sqrt(), z_hi: roots[i + 1].x.sqrt(), sign_changing: false };
        }
    }
    for (i, r) in roots.iter().enumerate() {
        if r.double && r.x > 0.0 && ax.gap_signs[i] < 0.0 && ax.gap_signs[i + 1] < 0.0 {
            return EvenOrbit::Equilibrium { z_eq: r.x.sqrt() };
        }
    }
    if q0_zero {
        return EvenOrbit::Rest;
    }
    EvenOrbit::None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicOrbit {
    Periodic { x_lo: f64, x_hi: f64 },
    Equilibrium { x_eq: f64 },
    /// Orbit asymptotic to the equilibrium `x_eq`, turning at `x_turn`.
    Homoclinic { x_eq: f64, x_turn: f64 },
    None,
}

/// Classify the bounded orbit of `X'^2 = 4 P(X)` on `X > 0`.
pub fn classify_cubic(p: &Poly, tol: f64) -> CubicOrbit {
    let ax = analyze_axis(p, tol);
    let roots: Vec<(usize, AxisRoot)> = ax.roots.iter().copied().enumerate().filter(|(_, r)| r.x > 0.0).collect();
    for w in roots.windows(2) {
        let ((i, a), (_, b)) = (w[0], w[1]);
        if ax.gap_signs[i + 1] > 0.0 {
            return match (a.double, b.double) {
                (false, false) => CubicOrbit::Periodic { x_lo: a.x, x_hi: b.x },
                (true, false) => CubicOrbit::Homoclinic { x_eq: a.x, x_turn: b.x },
                (false, true) => CubicOrbit::Homoclinic { x_eq: b.x, x_turn: a.x },
                (true, true) => CubicOrbit::Equilibrium { x_eq: a.x },
            };
        }
    }
    for &(i, r) in &roots {
        if r.double && ax.gap_signs[i] < 0.0 && ax.gap_signs[i + 1] < 0.0 {
            return CubicOrbit::Equilibrium { x_eq: r.x };
        }
    }
    CubicOrbit::None
}

/// `int_0^{pi/2} h(phi) dphi` by double-exponential quadrature.
pub fn quarter_integral(h: impl Fn(f64) -> f64) -> f64 {
    quadrature::integrate(h, 0.0, FRAC_PI_2, 1e-14).integral
}

/// Period of `z'^2 = F(z)` between simple roots `a < b`, where
/// `F(z) = (z - a)(b - z) G(z)` and `G > 0` on `[a, b]`.
pub fn period_between(a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
    // z = a + (b - a) sin^2 phi removes both square-root endpoints
    2.0 * quarter_integral(|phi| {
        let z = a + (b - a) * phi.sin().powi(2);
        2.0 / g(z).sqrt()
    })
}

/// Period of the even-type orbit `z'^2 = q(z^2)`.
pub fn even_period(q: &Poly, orbit: &EvenOrbit) -> Option<f64> {
    match *orbit {
        EvenOrbit::Periodic { z_lo, z_hi, sign_changing: true } => {
            let _ = z_lo;
            // q(X) = (X - X1) s(X) with X1 = z_hi^2, so F = (z_hi^2 - z^2)(-s(z^2))
            let s = q.deflate(z_hi * z_hi);
            let half = period_between(-z_hi, z_hi, |z| -s.eval(z * z));
            Some(half)
        }
        EvenOrbit::Periodic { z_lo, z_hi, sign_changing: false } => {
            // F = q2 (z^2 - z1^2)(z^2 - z2^2) = (z - z1)(z2 - z) (-q2 (z + z1)(z + z2))
            let q2 = q.0.get(2).copied().unwrap_or(0.0);
            let half = period_between(z_lo, z_hi, |z| -q2 * (z + z_lo) * (z + z_hi));
            Some(half)
        }
        _ => None,
    }
}

/// Period of `X'^2 = 4 P(X)` between simple roots, and `int_0^period dy / X`.
pub fn cubic_period(p: &Poly, x_lo: f64, x_hi: f64) -> (f64, f64) {
    let rest = p.deflate(x_lo).deflate(x_hi);
    // P = (X - lo)(hi - X)(-rest(X)); dy = dX / (2 sqrt P)
    let g = |x: f64| -4.0 * rest.eval(x);
    let period = period_between(x_lo, x_hi, g);
    let inv = 2.0 * quarter_integral(|phi| {
        let x = x_lo + (x_hi - x_lo) * phi.sin().powi(2);
        2.0 / (x * g(x).sqrt())
    });
    (period, inv)
}

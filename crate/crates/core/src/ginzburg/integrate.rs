//! Sampled trajectories of small autonomous ODE systems.

use std::cell::Cell;

use ode_solvers::dop853::Dop853;
use ode_solvers::{OutputType, SVector, System};

use crate::{Error, Result};

pub const ESCAPE_NORM: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct Trajectory<const D: usize> {
    pub y: Vec<f64>,
    pub x: Vec<[f64; D]>,
}

struct Rhs<'a, const D: usize> {
    f: &'a dyn Fn(&[f64; D]) -> [f64; D],
    sign: f64,
    escaped: &'a Cell<bool>,
}

impl<const D: usize> System<f64, SVector<f64, D>> for Rhs<'_, D> {
    fn system(&self, _s: f64, x: &SVector<f64, D>, dx: &mut SVector<f64, D>) {
        let arr: [f64; D] = x.as_slice().try_into().expect("length D");
        let v = (self.f)(&arr);
        for i in 0..D {
            dx[i] = self.sign * v[i];
        }
    }

    fn solout(&mut self, _s: f64, x: &SVector<f64, D>, _dx: &SVector<f64, D>) -> bool {
        if !(x.norm() <= ESCAPE_NORM) {
            self.escaped.set(true);
        }
        self.escaped.get()
    }
}

/// Advance `x0` by `dy` (either sign). Integration always runs in a local
/// forward variable so that step bookkeeping never crosses zero.
pub fn advance<const D: usize>(
    f: &dyn Fn(&[f64; D]) -> [f64; D],
    x0: [f64; D],
    dy: f64,
    tol: f64,
) -> std::result::Result<[f64; D], f64> {
    if dy == 0.0 {
        return Ok(x0);
    }
    let escaped = Cell::new(false);
    let rhs = Rhs { f, sign: dy.signum(), escaped: &escaped };
    let len = dy.abs();
    let mut out = x0;
    {
        let mut solver = Dop853::new(rhs, 0.0, len, len, SVector::from(x0), tol, tol);
        solver.set_output(OutputType::Sparse);
        let res = solver.integrate();
        let (xs, ys) = (solver.x_out(), solver.y_out());
        let last = ys.last().expect("initial state recorded");
        for i in 0..D {
            out[i] = last[i];
        }
        let reached = xs.last().copied().unwrap_or(0.0);
        if res.is_err() || !(last.norm() <= ESCAPE_NORM) {
            return Err(reached * dy.signum());
        }
    }
    if escaped.get() {
        return Err(len * dy.signum());
    }
    Ok(out)
}

/// Sample the trajectory through `(y_start, x_start)` at `n` equispaced points of `[y0, y1]`.
pub fn sample<const D: usize>(
    f: &dyn Fn(&[f64; D]) -> [f64; D],
    y_start: f64,
    x_start: [f64; D],
    span: (f64, f64),
    n: usize,
    tol: f64,
) -> Result<Trajectory<D>> {
    let (y0, y1) = span;
    if n < 2 || !(y1 > y0) {
        return Err(Error::InvalidArgument(format!("span [{y0}, {y1}] with {n} samples")));
    }
    let h = (y1 - y0) / (n - 1) as f64;
    let ys: Vec<f64> = (0..n).map(|k| y0 + h * k as f64).collect();
    // nearest sample to the start, then march outwards in both directions
    let k0 = (((y_start - y0) / h).round().max(0.0) as usize).min(n - 1);
    let escape = |dy: f64, from: f64| Error::TrajectoryEscaped { y: from + dy };
    let x_k0 = advance(f, x_start, ys[k0] - y_start, tol).map_err(|d| escape(d, y_start))?;
    let mut xs = vec![[0.0; D]; n];
    xs[k0] = x_k0;
    for k in k0 + 1..n {
        xs[k] = advance(f, xs[k - 1], ys[k] - ys[k - 1], tol).map_err(|d| escape(d, ys[k - 1]))?;
    }
    for k in (0..k0).rev() {
        xs[k] = advance(f, xs[k + 1], ys[k] - ys[k + 1], tol).map_err(|d| escape(d, ys[k + 1]))?;
    }
    Ok(Trajectory { y: ys, x: xs })
}

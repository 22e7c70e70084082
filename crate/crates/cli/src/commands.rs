use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use couette_core::ginzburg::gl2::{gl2_profile, GL2Params};
use couette_core::ginzburg::gl4::{
    case1_reduced, case2_normalform, case3_normalform, heteroclinic_k_min, Case2Params, Case3Params, DEFAULT_KAPPA,
};
use couette_core::ginzburg::quartic::{classify_region, quartic_roots, Region, DEFAULT_EPS_THRESHOLD};
use couette_core::ginzburg::{GLSolution, SolutionClass};
use couette_core::landau::landau_at;
use couette_core::linstab::{critical_point, eigen_expansion_coeffs, find_mu_c, CriticalPoint, DEFAULT_ALPHA_BRACKET};
use couette_core::spectral::Discretization;
use couette_core::{landau, Error};

use crate::output::{emit, num, Cell, Table};
use crate::{AppError, GlArgs, RunConfig};

type Res = Result<(), AppError>;

/// Parse `1,2,3` or `start:stop:step` items (inclusive ranges).
pub fn parse_list(spec: &str) -> Result<Vec<f64>, AppError> {
    let bad = |s: &str| AppError::Usage(format!("cannot parse number list item {s:?}"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(x.parse::<f64>().map_err(|_| bad(item))?),
            [a, b, s] => {
                let (a, b, s): (f64, f64, f64) = (
                    a.parse().map_err(|_| bad(item))?,
                    b.parse().map_err(|_| bad(item))?,
                    s.parse().map_err(|_| bad(item))?,
                );
                if !(s > 0.0) || !(b >= a) {
                    return Err(bad(item));
                }
                let n = ((b - a) / s + 1e-9).floor() as usize;
                for k in 0..=n {
                    // trim accumulated rounding so labels stay clean
                    let v: f64 = format!("{:.12e}", a + s * k as f64).parse().expect("formatted float");
                    out.push(v);
                }
            }
            _ => return Err(bad(item)),
        }
    }
    if let Some(x) = out.iter().find(|x| !x.is_finite()) {
        return Err(AppError::Usage(format!("non-finite value {x}")));
    }
    Ok(out)
}

fn disc(cfg: &RunConfig) -> Result<Discretization, AppError> {
    Ok(Discretization::new(cfg.resolution)?)
}

fn finish(cfg: &RunConfig, mut table: Table, started: Instant) -> Res {
    for row in &table.rows {
        if row.iter().any(|c| matches!(c, Cell::Num(x) if !x.is_finite())) {
            return Err(AppError::Core(Error::NumericalFailure("non-finite value in output".into())));
        }
    }
    table.meta.insert("resolution".into(), cfg.resolution.into());
    table.meta.insert("wall_time".into(), json!(started.elapsed().as_secs_f64()));
    emit(&table.render(cfg.format), cfg.output.as_deref())?;
    Ok(())
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::BracketExhausted { .. } => "bracket_exhausted",
        Error::NoNeutralPoint { .. } => "no_neutral_point",
        Error::InvalidArgument(_) => "invalid_argument",
        _ => "numerical_failure",
    }
}

pub fn critical(cfg: &RunConfig, mu: f64, bfrak: f64) -> Res {
    let started = Instant::now();
    let d = disc(cfg)?;
    let cp = critical_point(mu, bfrak, &d, DEFAULT_ALPHA_BRACKET)?;
    let mut header = vec!["mu", "bfrak", "t_c", "alpha_c", "re_lambda0", "residual"];
    let mut row: Vec<Cell> = vec![
        mu.into(),
        bfrak.into(),
        cp.t_c.into(),
        cp.alpha_c.into(),
        cp.mode.lambda0.re.into(),
        cp.mode.backward_error.into(),
    ];
    if cfg.convergence_check {
        let fine = Discretization::new(cfg.resolution + 16)?;
        let cf = critical_point(mu, bfrak, &fine, DEFAULT_ALPHA_BRACKET)?;
        header.extend(["t_c_fine", "rel_change"]);
        row.extend([cf.t_c.into(), ((cf.t_c - cp.t_c) / cf.t_c).abs().into()]);
    }
    let mut t = Table::new("critical", &header);
    t.push(row);
    finish(cfg, t, started)
}

pub fn sweep(cfg: &RunConfig, mu_spec: &str, bfrak_spec: &str) -> Res {
    let started = Instant::now();
    let mus = parse_list(mu_spec)?;
    let bs = parse_list(bfrak_spec)?;
    if mus.is_empty() || bs.is_empty() {
        return Err(AppError::Usage("sweep needs non-empty --mu and --bfrak lists".into()));
    }
    let d = disc(cfg)?;
    let mut points: Vec<(f64, f64)> = mus.iter().flat_map(|&m| bs.iter().map(move |&b| (m, b))).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.dedup();
    // T_c is even in bfrak, so solve each |bfrak| once
    let mut keys: Vec<(f64, f64)> = points.iter().map(|&(m, b)| (m, b.abs())).collect();
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup();
    let solved: Vec<Result<CriticalPoint, Error>> =
        keys.par_iter().map(|&(m, b)| critical_point(m, b, &d, DEFAULT_ALPHA_BRACKET)).collect();

    let mut t = Table::new("sweep", &["mu", "bfrak", "t_c", "alpha_c", "residual", "status"]);
    let mut ok = 0;
    for &(m, b) in &points {
        let i = keys.iter().position(|k| *k == (m, b.abs())).expect("key present");
        match &solved[i] {
            Ok(cp) => {
                ok += 1;
                t.push(vec![m.into(), b.into(), cp.t_c.into(), cp.alpha_c.into(), cp.mode.backward_error.into(), "ok".into()]);
            }
            Err(e) => {
                eprintln!("warning: (mu, bfrak) = ({m}, {b}): {e}");
                t.push(vec![m.into(), b.into(), Cell::Missing, Cell::Missing, Cell::Missing, status_of(e).into()]);
            }
        }
    }
    finish(cfg, t, started)?;
    if (ok as f64) < 0.9 * points.len() as f64 {
        return Err(AppError::Core(Error::NumericalFailure(format!("only {ok} of {} sweep points succeeded", points.len()))));
    }
    Ok(())
}

pub fn landau(cfg: &RunConfig, mu_spec: &str) -> Res {
    let started = Instant::now();
    let raw = parse_list(mu_spec)?;
    if raw.is_empty() {
        return Err(AppError::Usage("landau needs a non-empty --mu list".into()));
    }
    let mut mus = raw.clone();
    mus.sort_by(|a, b| a.total_cmp(b));
    mus.dedup();
    if mus.len() < raw.len() {
        eprintln!("warning: {} duplicate mu value(s) removed", raw.len() - mus.len());
    }
    let d = disc(cfg)?;
    let results: Vec<_> = mus
        .par_iter()
        .map(|&mu| -> Result<_, Error> {
            let rep = landau_at(mu, &d)?;
            let ex = eigen_expansion_coeffs(&rep.critical, &d)?;
            Ok((rep, ex))
        })
        .collect();

    let mut t = Table::new("landau", &["mu", "t_c", "alpha_c", "a", "c", "b1", "a4", "a5", "normalization"]);
    let mut cs = Vec::new();
    for (mu, r) in mus.iter().zip(results) {
        let (rep, ex) = r?;
        if ex.a4 > 0.0 {
            eprintln!("warning: mu = {mu} is below the axisymmetric range (a4 = {:e} > 0)", ex.a4);
        }
        let co = rep.coefficients;
        cs.push((*mu, co.c));
        t.push(vec![
            (*mu).into(),
            rep.critical.t_c.into(),
            rep.critical.alpha_c.into(),
            co.a.into(),
            co.c.into(),
            ex.b1.into(),
            ex.a4.into(),
            ex.a5.into(),
            co.normalization.label().into(),
        ]);
    }
    let crossings: Vec<(f64, f64)> =
        cs.windows(2).filter(|w| w[0].1.signum() != w[1].1.signum()).map(|w| (w[0].0, w[1].0)).collect();
    if crossings.is_empty() {
        eprintln!("c does not change sign on the requested mu values");
    }
    for (a, b) in &crossings {
        eprintln!("c changes sign between mu = {} and mu = {}", num(*a), num(*b));
    }
    t.meta.insert("c_sign_changes".into(), json!(crossings.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()));
    finish(cfg, t, started)
}

pub fn mu_c(cfg: &RunConfig) -> Res {
    let started = Instant::now();
    let v = find_mu_c(&disc(cfg)?)?;
    let mut t = Table::new("mu-c", &["mu_c"]);
    t.push(vec![v.into()]);
    finish(cfg, t, started)
}

pub fn mu_hat_c(cfg: &RunConfig) -> Res {
    let started = Instant::now();
    let v = landau::find_mu_hat_c(&disc(cfg)?)?;
    let mut t = Table::new("mu-hat-c", &["mu_hat_c"]);
    t.push(vec![v.into()]);
    finish(cfg, t, started)
}

pub fn quartic(cfg: &RunConfig, tau: f64, sigma: f64) -> Res {
    let started = Instant::now();
    let r = quartic_roots(tau, sigma);
    let region = classify_region(tau, sigma, cfg.tolerance("eps_threshold", DEFAULT_EPS_THRESHOLD));
    let eps = match region {
        Region::Case1 { eps } | Region::Case2 { eps } | Region::Case3 { eps } => Some(eps),
        Region::Outside => None,
    };
    let mut header = vec!["tau", "sigma", "discriminant", "kind", "region", "eps"];
    let mut row: Vec<Cell> =
        vec![tau.into(), sigma.into(), r.discriminant.into(), format!("{:?}", r.kind).into(), region.label().into(), eps.into()];
    const NAMES: [[&str; 2]; 4] =
        [["l1_re", "l1_im"], ["l2_re", "l2_im"], ["l3_re", "l3_im"], ["l4_re", "l4_im"]];
    for (z, names) in r.roots.iter().zip(NAMES) {
        header.extend(names);
        row.extend([z.re.into(), z.im.into()]);
    }
    let mut t = Table::new("quartic", &header);
    t.push(row);
    finish(cfg, t, started)
}

fn gl_record(args: &GlArgs, sol: &GLSolution, case: Option<u8>, k_min: Option<f64>) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), crate::output::SCHEMA_VERSION.into());
    m.insert("command".into(), "gl".into());
    m.insert("order".into(), args.order.into());
    if let Some(c) = case {
        m.insert("case".into(), c.into());
    }
    m.insert("class".into(), sol.class.as_str().into());
    m.insert("H".into(), json!(sol.integrals.h));
    m.insert("K".into(), json!(sol.integrals.k));
    m.insert("period".into(), json!(sol.period));
    m.insert("residual".into(), json!(sol.residual));
    m.insert("mean_phase_speed".into(), json!(sol.mean_phase_speed));
    m.insert("equilibria".into(), json!(sol.equilibria));
    if let Some(k) = k_min {
        m.insert("k_min".into(), json!(k));
    }
    Value::Object(m)
}

fn need(v: Option<f64>, name: &str) -> Result<f64, AppError> {
    v.ok_or_else(|| AppError::Usage(format!("--{name} is required here")))
}

pub fn gl(cfg: &RunConfig, args: &GlArgs) -> Res {
    let started = Instant::now();
    if !(args.span > 0.0) || args.samples < 2 {
        return Err(AppError::Usage("--span must be positive and --samples at least 2".into()));
    }
    let span = (-0.5 * args.span, 0.5 * args.span);
    let (h, k) = if args.homoclinic { (0.0, 0.0) } else { (args.h, args.k) };
    let mut k_min = None;
    let (sol, case) = match args.order {
        2 => {
            let p = GL2Params::new(args.a3, args.b4, args.c, need(args.tau, "tau")?, 0.0)?;
            (gl2_profile(&p, h, k, span, args.samples)?, None)
        }
        4 => {
            let threshold = cfg.tolerance("eps_threshold", DEFAULT_EPS_THRESHOLD);
            let (case, eps) = match (args.case, args.eps) {
                (Some(c), Some(e)) => (c, e),
                (c, None) => {
                    let region = classify_region(need(args.tau, "tau")?, need(args.sigma, "sigma")?, threshold);
                    match (region, c) {
                        (Region::Case1 { eps }, None | Some(1)) => (1, eps),
                        (Region::Case2 { eps }, None | Some(2)) => (2, eps),
                        (Region::Case3 { eps }, None | Some(3)) => (3, eps),
                        _ => {
                            return Err(AppError::Usage(format!(
                                "(tau, sigma) lies in region {} and gives no eps for the requested case",
                                region.label()
                            )))
                        }
                    }
                }
                (None, Some(_)) => return Err(AppError::Usage("--eps needs --case".into())),
            };
            let sol = match case {
                1 => case1_reduced(eps, args.c).profile(h, span, args.samples)?,
                2 => {
                    let sol = case2_normalform(&Case2Params::new(eps, args.c, k)?, h, span, args.samples)?;
                    if sol.class == SolutionClass::HeteroclinicTube {
                        k_min = Some(heteroclinic_k_min(eps, cfg.tolerance("kappa", DEFAULT_KAPPA)));
                    }
                    sol
                }
                3 => {
                    let mut p = Case3Params::new(eps, args.sigma.unwrap_or(-1.0), args.c)?;
                    p.beta = args.beta;
                    p.gamma = args.gamma;
                    p.theta_star = args.theta_star;
                    case3_normalform(&p, h, k, span, args.samples)?
                }
                other => return Err(AppError::Usage(format!("--case must be 1, 2 or 3, got {other}"))),
            };
            (sol, Some(case))
        }
        other => return Err(AppError::Usage(format!("--order must be 2 or 4, got {other}"))),
    };

    let header: Vec<&'static str> = match &sol.profile {
        Some(p) => p.column_names().to_vec(),
        None if args.order == 4 && case == Some(2) => vec!["y", "u", "v", "abs_w"],
        None => vec!["y", "rho", "theta"],
    };
    let mut t = Table::new("gl", &header);
    if let Some(p) = &sol.profile {
        for i in 0..p.len() {
            t.push(p.row(i).into_iter().map(Cell::from).collect());
        }
    }
    let record = gl_record(args, &sol, case, k_min).to_string();
    match (&args.class_output, &cfg.output) {
        (Some(path), _) => emit(&(record + "\n"), Some(path))?,
        (None, Some(out)) => emit(&(record + "\n"), Some(&class_path(out)))?,
        (None, None) => eprintln!("{record}"),
    }
    finish(cfg, t, started)
}

/// `profile.csv` -> `profile.class.json`.
fn class_path(out: &Path) -> std::path::PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "profile".into());
    out.with_file_name(format!("{stem}.class.json"))
}

//! Translate expert statements (mean, mode, quantiles, interval mass)
//! into hyperparameters of a prior family by root finding.

use crate::dist::Distribution;
use crate::error::{Error, Result};

/// A single statement about the prior distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    Mean(f64),
    Mode(f64),
    /// The `level`-quantile equals `value`.
    Quantile { level: f64, value: f64 },
    /// P(lo < θ < hi) = mass.
    IntervalMass { lo: f64, hi: f64, mass: f64 },
}

/// Families that can be elicited (two free hyperparameters each).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElicitFamily {
    Beta,
    Gamma,
    NormalPrecision,
}

/// Outcome of a successful fit: the distribution, the residual of each
/// constraint, and the 1-D search bracket used (when applicable),
/// reported for reproducibility.
#[derive(Debug, Clone)]
pub struct ElicitResult {
    pub distribution: Distribution,
    pub residuals: Vec<f64>,
    pub search_bracket: Option<(f64, f64)>,
}

/// Absolute tolerance on probability constraints.
const PROB_TOL: f64 = 1e-4;
/// Relative tolerance on moment constraints.
const MOMENT_TOL: f64 = 1e-6;
/// Log-scale search range for the concentration-like parameter.
const LOG_LO: f64 = -6.907_755_278_982_137; // ln 1e-3
const LOG_HI: f64 = 16.118_095_650_958_32; // ln 1e7

pub fn elicit(family: ElicitFamily, constraints: &[Constraint]) -> Result<ElicitResult> {
    validate(constraints)?;
    if constraints.len() != 2 {
        return Err(Error::Mismatch(format!(
            "two independent constraints are required for a two-parameter family, got {}",
            constraints.len()
        )));
    }
    // canonical order: location-type constraint (Mean/Mode) first
    let mut cs = [constraints[0], constraints[1]];
    if matches!(cs[1], Constraint::Mean(_) | Constraint::Mode(_))
        && !matches!(cs[0], Constraint::Mean(_))
    {
        cs.swap(0, 1);
    }
    if matches!(cs[0], Constraint::Mean(_) | Constraint::Mode(_))
        && matches!(cs[1], Constraint::Mean(_) | Constraint::Mode(_))
    {
        return solve_two_moments(family, cs[0], cs[1], constraints);
    }
    if let Constraint::Mean(_) | Constraint::Mode(_) = cs[0] {
        solve_pinned(family, cs[0], cs[1], constraints)
    } else {
        solve_newton(family, constraints)
    }
}

fn validate(constraints: &[Constraint]) -> Result<()> {
    for c in constraints {
        match *c {
            Constraint::Mean(v) | Constraint::Mode(v) => {
                if !v.is_finite() {
                    return Err(Error::Domain("constraint value must be finite".into()));
                }
            }
            Constraint::Quantile { level, value } => {
                if !(level > 0.0 && level < 1.0) {
                    return Err(Error::Domain(format!(
                        "quantile level must be in (0,1), got {level}"
                    )));
                }
                if !value.is_finite() {
                    return Err(Error::Domain("quantile value must be finite".into()));
                }
            }
            Constraint::IntervalMass { lo, hi, mass } => {
                if !(lo < hi) {
                    return Err(Error::Domain(format!(
                        "interval requires lo < hi, got [{lo}, {hi}]"
                    )));
                }
                if !(mass > 0.0 && mass < 1.0) {
                    return Err(Error::Domain(format!("mass must be in (0,1), got {mass}")));
                }
            }
        }
    }
    let n_location = constraints
        .iter()
        .filter(|c| matches!(c, Constraint::Mean(_)))
        .count();
    if n_location > 1 {
        return Err(Error::Mismatch("duplicate Mean constraints".into()));
    }
    Ok(())
}

/// Value of a constraint functional under a candidate distribution,
/// normalized so that 0 means satisfied.
fn residual(d: &Distribution, c: &Constraint) -> Result<f64> {
    Ok(match *c {
        Constraint::Mean(target) => {
            let m = d.moments()?.mean;
            (m - target) / target.abs().max(1.0)
        }
        Constraint::Mode(target) => {
            let m = d.mode()?;
            (m - target) / target.abs().max(1.0)
        }
        Constraint::Quantile { level, value } => d.cdf(value)? - level,
        Constraint::IntervalMass { lo, hi, mass } => d.cdf(hi)? - d.cdf(lo)? - mass,
    })
}

fn constraint_tol(c: &Constraint) -> f64 {
    match c {
        Constraint::Mean(_) | Constraint::Mode(_) => MOMENT_TOL,
        _ => PROB_TOL,
    }
}

/// Candidate distribution with the location constraint solved
/// analytically, leaving one free concentration parameter t (log scale).
fn candidate(family: ElicitFamily, pinned: Constraint, log_t: f64) -> Result<Distribution> {
    let t = log_t.exp();
    match (family, pinned) {
        (ElicitFamily::Beta, Constraint::Mean(m)) => {
            if !(m > 0.0 && m < 1.0) {
                return Err(Error::Domain(format!("Beta mean must be in (0,1), got {m}")));
            }
            // t = α; β = α(1-m)/m keeps the mean at m
            Distribution::beta(t, t * (1.0 - m) / m)
        }
        (ElicitFamily::Beta, Constraint::Mode(m)) => {
            if !(m > 0.0 && m < 1.0) {
                return Err(Error::Domain(format!("Beta mode must be in (0,1), got {m}")));
            }
            // t = α - 1 > 0; β chosen so (α-1)/(α+β-2) = m
            Distribution::beta(t + 1.0, t * (1.0 - m) / m + 1.0)
        }
        (ElicitFamily::Gamma, Constraint::Mean(m)) => {
            if !(m > 0.0) {
                return Err(Error::Domain(format!("Gamma mean must be > 0, got {m}")));
            }
            Distribution::gamma(t, t / m)
        }
        (ElicitFamily::Gamma, Constraint::Mode(m)) => {
            if !(m > 0.0) {
                return Err(Error::Domain(format!("Gamma mode must be > 0, got {m}")));
            }
            // t = α - 1 > 0; rate = t/m keeps the mode at m
            Distribution::gamma(t + 1.0, t / m)
        }
        (ElicitFamily::NormalPrecision, Constraint::Mean(m) | Constraint::Mode(m)) => {
            Distribution::normal_precision(m, t)
        }
        _ => unreachable!("candidate called with a non-location pin"),
    }
}

/// Both constraints are moments: closed form where available.
fn solve_two_moments(
    family: ElicitFamily,
    a: Constraint,
    b: Constraint,
    original: &[Constraint],
) -> Result<ElicitResult> {
    let (mean, mode) = match (a, b) {
        (Constraint::Mean(m), Constraint::Mode(d)) => (m, d),
        (Constraint::Mode(d), Constraint::Mean(m)) => (m, d),
        _ => {
            return Err(Error::Mismatch(
                "constraints are not independent (two location statements)".into(),
            ))
        }
    };
    let dist = match family {
        ElicitFamily::Gamma => {
            // mean = α/β, mode = (α-1)/β  ⇒  β = 1/(mean - mode), α = mean·β
            if !(mean > mode && mode > 0.0) {
                return Err(Error::NoSolution {
                    context: format!(
                        "Gamma requires mean > mode > 0 (mean {mean}, mode {mode})"
                    ),
                    residuals: vec![],
                });
            }
            let rate = 1.0 / (mean - mode);
            Distribution::gamma(mean * rate, rate)?
        }
        ElicitFamily::Beta => {
            // mean = α/(α+β), mode = (α-1)/(α+β-2); solve the linear system
            let denom = mean - mode;
            if denom.abs() < 1e-14 {
                return Err(Error::NoSolution {
                    context: "Beta mean equal to mode does not pin the concentration".into(),
                    residuals: vec![],
                });
            }
            let s = (1.0 - 2.0 * mode) / denom; // α + β
            let alpha = mean * s;
            let beta = s - alpha;
            if !(alpha > 1.0 && beta > 1.0) {
                return Err(Error::NoSolution {
                    context: format!(
                        "Beta interior mode requires α, β > 1 (got α {alpha:.4}, β {beta:.4})"
                    ),
                    residuals: vec![],
                });
            }
            Distribution::beta(alpha, beta)?
        }
        ElicitFamily::NormalPrecision => {
            return Err(Error::Mismatch(
                "Normal mean and mode coincide; constraints are not independent".into(),
            ))
        }
    };
    finish(dist, original, None)
}

/// Location constraint pinned analytically; bisect the remaining scalar
/// constraint over the concentration parameter in log scale.
fn solve_pinned(
    family: ElicitFamily,
    pinned: Constraint,
    free: Constraint,
    original: &[Constraint],
) -> Result<ElicitResult> {
    let f = |log_t: f64| -> Result<f64> { residual(&candidate(family, pinned, log_t)?, &free) };
    let log_t = bisect_rightmost_root(&f, LOG_LO, LOG_HI)?;
    let dist = candidate(family, pinned, log_t)?;
    finish(dist, original, Some((1e-3, 1e7)))
}

/// Bisection on a scalar residual, locating a bracket by scanning from
/// the concentrated (right) end of the range.
///
/// Tail constraints can be met by two concentrations — a regular fit and
/// a near-degenerate spike — so when both exist the most concentrated
/// root is returned, deterministically. Evaluation failures at extreme
/// parameters are skipped during the scan.
fn bisect_rightmost_root<F: Fn(f64) -> Result<f64>>(f: &F, lo0: f64, hi0: f64) -> Result<f64> {
    const SCAN: usize = 128;
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    let mut last_residual = f64::NAN;
    for i in (0..=SCAN).rev() {
        let x = lo0 + (hi0 - lo0) * i as f64 / SCAN as f64;
        let Ok(v) = f(x) else { continue };
        last_residual = v;
        if let Some((px, pv)) = prev {
            if v == 0.0 || pv.signum() != v.signum() {
                bracket = Some((x, px, v));
                break;
            }
        }
        prev = Some((x, v));
    }
    let (mut lo, mut hi, flo) = bracket.ok_or_else(|| Error::NoSolution {
        context: "no sign change in the search bracket; constraints are infeasible".into(),
        residuals: vec![last_residual],
    })?;
    let increasing = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() < 1e-13 || (hi - lo) < 1e-13 {
            return Ok(mid);
        }
        if (v < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Damped Newton on both hyperparameters (log scale) for constraint sets
/// without an analytic pin.
fn solve_newton(family: ElicitFamily, constraints: &[Constraint]) -> Result<ElicitResult> {
    let make = |u: [f64; 2]| -> Result<Distribution> {
        let (a, b) = (u[0].exp(), u[1].exp());
        match family {
            ElicitFamily::Beta => Distribution::beta(a, b),
            ElicitFamily::Gamma => Distribution::gamma(a, b),
            // mean unconstrained: u[0] is the mean itself, u[1] the log-precision
            ElicitFamily::NormalPrecision => Distribution::normal_precision(u[0], b),
        }
    };
    let res = |u: [f64; 2]| -> Result<[f64; 2]> {
        let d = make(u)?;
        Ok([residual(&d, &constraints[0])?, residual(&d, &constraints[1])?])
    };
    let mut u = [0.0_f64, 0.0];
    let mut r = res(u)?;
    for _ in 0..120 {
        if r[0].abs().max(r[1].abs()) < 1e-11 {
            break;
        }
        // numerical Jacobian
        let h = 1e-6;
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut up = u;
            up[j] += h;
            let rp = res(up)?;
            jac[0][j] = (rp[0] - r[0]) / h;
            jac[1][j] = (rp[1] - r[1]) / h;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let du = [
            (jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            (jac[0][0] * r[1] - jac[1][0] * r[0]) / det,
        ];
        // damping: halve the step until the residual norm decreases
        let mut step = 1.0;
        let norm0 = r[0].hypot(r[1]);
        loop {
            let trial = [
                (u[0] - step * du[0]).clamp(LOG_LO, LOG_HI),
                (u[1] - step * du[1]).clamp(LOG_LO, LOG_HI),
            ];
            match res(trial) {
                Ok(rt) if rt[0].hypot(rt[1]) < norm0 || step < 1e-6 => {
                    u = trial;
                    r = rt;
                    break;
                }
                _ => step *= 0.5,
            }
            if step < 1e-12 {
                break;
            }
        }
    }
    finish(make(u)?, constraints, None)
}

/// Verify residuals against the per-constraint tolerances and package
/// the result.
fn finish(
    dist: Distribution,
    constraints: &[Constraint],
    bracket: Option<(f64, f64)>,
) -> Result<ElicitResult> {
    let mut residuals = Vec::with_capacity(constraints.len());
    for c in constraints {
        residuals.push(residual(&dist, c)?);
    }
    for (c, r) in constraints.iter().zip(&residuals) {
        if r.abs() > constraint_tol(c) {
            return Err(Error::NoSolution {
                context: format!("fitted {dist} does not satisfy the constraints"),
                residuals,
            });
        }
    }
    Ok(ElicitResult {
        distribution: dist,
        residuals,
        search_bracket: bracket,
    })
}

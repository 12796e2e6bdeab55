//! Parametric probability distributions: density, distribution function,
//! quantile, moments and seeded sampling.
//!
//! Conventions used throughout the crate:
//! - Gamma is parameterized by shape and *rate* (the rate multiplies the
//!   argument in the exponent), so conjugate updates read Gamma(α+r, β+n).
//! - Normal carries *precision* λ = 1/variance, never variance.
//! - Geometric counts failures before the first success: p(x) = θ(1−θ)ˣ
//!   on x ∈ {0, 1, …}.
//! - ContinuousUniform is Uniform(0, θ); general endpoints are out of scope.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::{
    ln_beta, ln_choose, ln_factorial, ln_gamma, reg_inc_beta, reg_inc_gamma_lower,
    reg_inc_gamma_upper, std_normal_cdf, std_normal_quantile,
};

/// Mean and variance of a distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// A univariate parametric distribution (plus the Normal-Gamma conjugate
/// container, whose joint density is exposed through
/// [`Distribution::joint_log_density`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Beta { alpha: f64, beta: f64 },
    Gamma { shape: f64, rate: f64 },
    NormalPrecision { mean: f64, precision: f64 },
    Pareto { shape: f64, scale: f64 },
    Poisson { rate: f64 },
    Binomial { trials: u64, prob: f64 },
    Bernoulli { prob: f64 },
    Geometric { prob: f64 },
    ContinuousUniform { upper: f64 },
    PoissonGamma { shape: f64, rate: f64, exposure: f64 },
    NormalGamma { mean: f64, count: f64, shape: f64, rate: f64 },
}

use Distribution::*;

fn require(cond: bool, name: &'static str, reason: &'static str, value: f64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(name, reason, value))
    }
}

impl Distribution {
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        require(alpha > 0.0 && alpha.is_finite(), "alpha", "must be > 0", alpha)?;
        require(beta > 0.0 && beta.is_finite(), "beta", "must be > 0", beta)?;
        Ok(Beta { alpha, beta })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        require(shape > 0.0 && shape.is_finite(), "shape", "must be > 0", shape)?;
        require(rate > 0.0 && rate.is_finite(), "rate", "must be > 0", rate)?;
        Ok(Gamma { shape, rate })
    }

    pub fn normal_precision(mean: f64, precision: f64) -> Result<Self> {
        require(mean.is_finite(), "mean", "must be finite", mean)?;
        require(
            precision > 0.0 && precision.is_finite(),
            "precision",
            "must be > 0",
            precision,
        )?;
        Ok(NormalPrecision { mean, precision })
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        require(shape > 0.0 && shape.is_finite(), "shape", "must be > 0", shape)?;
        require(scale > 0.0 && scale.is_finite(), "scale", "must be > 0", scale)?;
        Ok(Pareto { shape, scale })
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        require(rate > 0.0 && rate.is_finite(), "rate", "must be > 0", rate)?;
        Ok(Poisson { rate })
    }

    pub fn binomial(trials: u64, prob: f64) -> Result<Self> {
        require(trials >= 1, "trials", "must be >= 1", trials as f64)?;
        require(prob > 0.0 && prob < 1.0, "prob", "must be in (0,1)", prob)?;
        Ok(Binomial { trials, prob })
    }

    pub fn bernoulli(prob: f64) -> Result<Self> {
        require(prob > 0.0 && prob < 1.0, "prob", "must be in (0,1)", prob)?;
        Ok(Bernoulli { prob })
    }

    pub fn geometric(prob: f64) -> Result<Self> {
        require(prob > 0.0 && prob < 1.0, "prob", "must be in (0,1)", prob)?;
        Ok(Geometric { prob })
    }

    pub fn continuous_uniform(upper: f64) -> Result<Self> {
        require(upper > 0.0 && upper.is_finite(), "upper", "must be > 0", upper)?;
        Ok(ContinuousUniform { upper })
    }

    pub fn poisson_gamma(shape: f64, rate: f64, exposure: f64) -> Result<Self> {
        require(shape > 0.0 && shape.is_finite(), "shape", "must be > 0", shape)?;
        require(rate > 0.0 && rate.is_finite(), "rate", "must be > 0", rate)?;
        require(
            exposure > 0.0 && exposure.is_finite(),
            "exposure",
            "must be > 0",
            exposure,
        )?;
        Ok(PoissonGamma {
            shape,
            rate,
            exposure,
        })
    }

    pub fn normal_gamma(mean: f64, count: f64, shape: f64, rate: f64) -> Result<Self> {
        require(mean.is_finite(), "mean", "must be finite", mean)?;
        require(count > 0.0 && count.is_finite(), "count", "must be > 0", count)?;
        require(shape > 0.0 && shape.is_finite(), "shape", "must be > 0", shape)?;
        require(rate > 0.0 && rate.is_finite(), "rate", "must be > 0", rate)?;
        Ok(NormalGamma {
            mean,
            count,
            shape,
            rate,
        })
    }

    /// Short family name, e.g. `"Gamma"`.
    pub fn family_name(&self) -> &'static str {
        match self {
            Beta { .. } => "Beta",
            Gamma { .. } => "Gamma",
            NormalPrecision { .. } => "Normal",
            Pareto { .. } => "Pareto",
            Poisson { .. } => "Poisson",
            Binomial { .. } => "Binomial",
            Bernoulli { .. } => "Bernoulli",
            Geometric { .. } => "Geometric",
            ContinuousUniform { .. } => "Uniform",
            PoissonGamma { .. } => "PoissonGamma",
            NormalGamma { .. } => "NormalGamma",
        }
    }

    /// Parameters in declaration order, for rendering.
    pub fn params(&self) -> Vec<f64> {
        match *self {
            Beta { alpha, beta } => vec![alpha, beta],
            Gamma { shape, rate } => vec![shape, rate],
            NormalPrecision { mean, precision } => vec![mean, precision],
            Pareto { shape, scale } => vec![shape, scale],
            Poisson { rate } => vec![rate],
            Binomial { trials, prob } => vec![trials as f64, prob],
            Bernoulli { prob } => vec![prob],
            Geometric { prob } => vec![prob],
            ContinuousUniform { upper } => vec![upper],
            PoissonGamma {
                shape,
                rate,
                exposure,
            } => vec![shape, rate, exposure],
            NormalGamma {
                mean,
                count,
                shape,
                rate,
            } => vec![mean, count, shape, rate],
        }
    }

    /// Names matching [`Distribution::params`], for rendering.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Beta { .. } => &["alpha", "beta"],
            Gamma { .. } => &["shape", "rate"],
            NormalPrecision { .. } => &["mean", "precision"],
            Pareto { .. } => &["shape", "scale"],
            Poisson { .. } => &["rate"],
            Binomial { .. } => &["trials", "prob"],
            Bernoulli { .. } => &["prob"],
            Geometric { .. } => &["prob"],
            ContinuousUniform { .. } => &["upper"],
            PoissonGamma { .. } => &["shape", "rate", "exposure"],
            NormalGamma { .. } => &["mean", "count", "shape", "rate"],
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            Poisson { .. }
                | Binomial { .. }
                | Bernoulli { .. }
                | Geometric { .. }
                | PoissonGamma { .. }
        )
    }

    /// Support as a closed interval (± infinity allowed). Discrete
    /// families live on the integers inside these bounds.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Beta { .. } => (0.0, 1.0),
            Gamma { .. } => (0.0, f64::INFINITY),
            NormalPrecision { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Pareto { scale, .. } => (scale, f64::INFINITY),
            Poisson { .. } | Geometric { .. } | PoissonGamma { .. } => (0.0, f64::INFINITY),
            Binomial { trials, .. } => (0.0, trials as f64),
            Bernoulli { .. } => (0.0, 1.0),
            ContinuousUniform { upper } => (0.0, upper),
            NormalGamma { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Probability density (continuous) or mass (discrete) at `x`.
    ///
    /// Returns 0 outside the support. Discrete families require `x` to be
    /// a nonnegative integer to carry mass.
    pub fn density(&self, x: f64) -> Result<f64> {
        Ok(self.log_density(x)?.exp())
    }

    /// Natural log of [`Distribution::density`]; −∞ outside the support.
    pub fn log_density(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain("density input is NaN".into()));
        }
        let neg_inf = f64::NEG_INFINITY;
        let value = match *self {
            Beta { alpha, beta } => {
                if !(0.0..=1.0).contains(&x) || (x == 0.0 && alpha != 1.0) || (x == 1.0 && beta != 1.0)
                {
                    if (x == 0.0 && alpha < 1.0) || (x == 1.0 && beta < 1.0) {
                        f64::INFINITY
                    } else {
                        neg_inf
                    }
                } else {
                    let lx = if alpha == 1.0 && x == 0.0 { 0.0 } else { (alpha - 1.0) * x.ln() };
                    let l1x = if beta == 1.0 && x == 1.0 {
                        0.0
                    } else {
                        (beta - 1.0) * (1.0 - x).ln()
                    };
                    lx + l1x - ln_beta(alpha, beta)
                }
            }
            Gamma { shape, rate } => {
                if x < 0.0 || (x == 0.0 && shape > 1.0) {
                    neg_inf
                } else if x == 0.0 && shape < 1.0 {
                    f64::INFINITY
                } else if x == 0.0 {
                    rate.ln() // shape == 1: exponential density at 0 is rate
                } else {
                    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
                }
            }
            NormalPrecision { mean, precision } => {
                0.5 * (precision.ln() - (2.0 * std::f64::consts::PI).ln())
                    - 0.5 * precision * (x - mean) * (x - mean)
            }
            Pareto { shape, scale } => {
                if x < scale {
                    neg_inf
                } else {
                    shape.ln() + shape * scale.ln() - (shape + 1.0) * x.ln()
                }
            }
            Poisson { rate } => match as_count(x) {
                Some(k) => k as f64 * rate.ln() - rate - ln_factorial(k),
                None => neg_inf,
            },
            Binomial { trials, prob } => match as_count(x) {
                Some(k) if k <= trials => {
                    ln_choose(trials, k)
                        + k as f64 * prob.ln()
                        + (trials - k) as f64 * (1.0 - prob).ln()
                }
                _ => neg_inf,
            },
            Bernoulli { prob } => match as_count(x) {
                Some(0) => (1.0 - prob).ln(),
                Some(1) => prob.ln(),
                _ => neg_inf,
            },
            Geometric { prob } => match as_count(x) {
                Some(k) => prob.ln() + k as f64 * (1.0 - prob).ln(),
                None => neg_inf,
            },
            ContinuousUniform { upper } => {
                if (0.0..=upper).contains(&x) {
                    -upper.ln()
                } else {
                    neg_inf
                }
            }
            PoissonGamma {
                shape,
                rate,
                exposure,
            } => match as_count(x) {
                Some(k) => pg_log_pmf(shape, rate, exposure, k),
                None => neg_inf,
            },
            NormalGamma { .. } => {
                return Err(Error::Unsupported(
                    "NormalGamma is a joint distribution; use joint_log_density(mu, lambda)".into(),
                ))
            }
        };
        Ok(value)
    }

    /// Joint log-density of the Normal-Gamma container at (μ, λ):
    /// Normal(μ | μ₀, n₀λ) · Gamma(λ | α, β).
    pub fn joint_log_density(&self, mu: f64, lambda: f64) -> Result<f64> {
        match *self {
            NormalGamma {
                mean,
                count,
                shape,
                rate,
            } => {
                if mu.is_nan() || lambda.is_nan() {
                    return Err(Error::Domain("joint density input is NaN".into()));
                }
                if lambda <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                let normal = Distribution::normal_precision(mean, count * lambda)?;
                let gamma = Distribution::gamma(shape, rate)?;
                Ok(normal.log_density(mu)? + gamma.log_density(lambda)?)
            }
            _ => Err(Error::Unsupported(format!(
                "joint_log_density is only defined for NormalGamma, not {}",
                self.family_name()
            ))),
        }
    }

    /// Distribution function P(X ≤ x). Monotone, with limits 0 and 1.
    /// For discrete families this is the usual right-continuous step CDF.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain("cdf input is NaN".into()));
        }
        let v = match *self {
            Beta { alpha, beta } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    reg_inc_beta(alpha, beta, x)?
                }
            }
            Gamma { shape, rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    reg_inc_gamma_lower(shape, rate * x)?
                }
            }
            NormalPrecision { mean, precision } => std_normal_cdf((x - mean) * precision.sqrt()),
            Pareto { shape, scale } => {
                if x <= scale {
                    0.0
                } else {
                    1.0 - (scale / x).powf(shape)
                }
            }
            Poisson { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    // P(X <= k) = Q(k+1, λ)
                    reg_inc_gamma_upper(x.floor() + 1.0, rate)?
                }
            }
            Binomial { trials, prob } => {
                if x < 0.0 {
                    0.0
                } else if x >= trials as f64 {
                    1.0
                } else {
                    let k = x.floor();
                    reg_inc_beta(trials as f64 - k, k + 1.0, 1.0 - prob)?
                }
            }
            Bernoulli { prob } => {
                if x < 0.0 {
                    0.0
                } else if x < 1.0 {
                    1.0 - prob
                } else {
                    1.0
                }
            }
            Geometric { prob } => {
                if x < 0.0 {
                    0.0
                } else {
                    1.0 - (1.0 - prob).powf(x.floor() + 1.0)
                }
            }
            ContinuousUniform { upper } => (x / upper).clamp(0.0, 1.0),
            PoissonGamma {
                shape,
                rate,
                exposure,
            } => {
                if x < 0.0 {
                    0.0
                } else {
                    pg_cdf(shape, rate, exposure, x.floor() as u64)
                }
            }
            NormalGamma { .. } => {
                return Err(Error::Unsupported(
                    "NormalGamma is a joint distribution; no scalar cdf".into(),
                ))
            }
        };
        Ok(v)
    }

    /// Quantile function. For continuous families, the x with cdf(x) = p;
    /// for discrete families, the smallest integer x with cdf(x) ≥ p.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires p in (0,1), got {p}"
            )));
        }
        let v = match *self {
            Beta { alpha, beta } => {
                // moment-matched start, then safeguarded Newton
                let m = alpha / (alpha + beta);
                continuous_quantile(self, p, m.clamp(1e-12, 1.0 - 1e-12), 0.0, 1.0)?
            }
            Gamma { shape, rate } => {
                // Wilson-Hilferty start
                let z = std_normal_quantile(p)?;
                let c = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * shape.sqrt());
                let start = (shape * c * c * c / rate).max(1e-300);
                continuous_quantile(self, p, start, 0.0, f64::INFINITY)?
            }
            NormalPrecision { mean, precision } => {
                mean + std_normal_quantile(p)? / precision.sqrt()
            }
            Pareto { shape, scale } => scale * (1.0 - p).powf(-1.0 / shape),
            ContinuousUniform { upper } => p * upper,
            Poisson { rate } => {
                let ln_p0 = -rate;
                discrete_quantile_scan(ln_p0, |k| rate / (k as f64 + 1.0), p, None, rate, rate)
            }
            Binomial { trials, prob } => {
                let ln_p0 = trials as f64 * (1.0 - prob).ln();
                let ratio = move |k: u64| {
                    ((trials - k) as f64 / (k as f64 + 1.0)) * (prob / (1.0 - prob))
                };
                let m = trials as f64 * prob;
                discrete_quantile_scan(ln_p0, ratio, p, Some(trials), m, m * (1.0 - prob))
            }
            Bernoulli { prob } => {
                if p <= 1.0 - prob {
                    0.0
                } else {
                    1.0
                }
            }
            Geometric { prob } => {
                // smallest x with 1-(1-θ)^(x+1) >= p
                let x = ((1.0 - p).ln() / (1.0 - prob).ln() - 1.0).ceil();
                x.max(0.0)
            }
            PoissonGamma {
                shape,
                rate,
                exposure,
            } => {
                let ln_p0 = shape * (rate / (rate + exposure)).ln();
                let ratio = move |k: u64| {
                    (shape + k as f64) / (k as f64 + 1.0) * (exposure / (rate + exposure))
                };
                let m = exposure * shape / rate;
                discrete_quantile_scan(ln_p0, ratio, p, None, m, m * (1.0 + exposure / rate))
            }
            NormalGamma { .. } => {
                return Err(Error::Unsupported(
                    "NormalGamma is a joint distribution; no scalar quantile".into(),
                ))
            }
        };
        Ok(v)
    }

    /// Closed-form mean and variance.
    pub fn moments(&self) -> Result<Moments> {
        let (mean, variance) = match *self {
            Beta { alpha, beta } => {
                let s = alpha + beta;
                (alpha / s, alpha * beta / (s * s * (s + 1.0)))
            }
            Gamma { shape, rate } => (shape / rate, shape / (rate * rate)),
            NormalPrecision { mean, precision } => (mean, 1.0 / precision),
            Pareto { shape, scale } => {
                if shape <= 1.0 {
                    return Err(Error::MomentUndefined(format!(
                        "Pareto mean requires shape > 1, got {shape}"
                    )));
                }
                let mean = shape * scale / (shape - 1.0);
                if shape <= 2.0 {
                    return Err(Error::MomentUndefined(format!(
                        "Pareto variance requires shape > 2, got {shape}"
                    )));
                }
                let var = shape * scale * scale / ((shape - 1.0) * (shape - 1.0) * (shape - 2.0));
                (mean, var)
            }
            Poisson { rate } => (rate, rate),
            Binomial { trials, prob } => {
                (trials as f64 * prob, trials as f64 * prob * (1.0 - prob))
            }
            Bernoulli { prob } => (prob, prob * (1.0 - prob)),
            Geometric { prob } => ((1.0 - prob) / prob, (1.0 - prob) / (prob * prob)),
            ContinuousUniform { upper } => (upper / 2.0, upper * upper / 12.0),
            PoissonGamma {
                shape,
                rate,
                exposure,
            } => {
                let mean = exposure * shape / rate;
                (mean, mean * (1.0 + exposure / rate))
            }
            NormalGamma { .. } => {
                return Err(Error::Unsupported(
                    "NormalGamma is a joint distribution; no scalar moments".into(),
                ))
            }
        };
        Ok(Moments { mean, variance })
    }

    /// Mode of the density, where well defined. Flat densities are
    /// rejected; boundary modes (e.g. Gamma with shape ≤ 1) are returned
    /// as the boundary point.
    pub fn mode(&self) -> Result<f64> {
        match *self {
            Beta { alpha, beta } => {
                if alpha >= 1.0 && beta >= 1.0 && alpha + beta > 2.0 {
                    Ok((alpha - 1.0) / (alpha + beta - 2.0))
                } else if alpha <= 1.0 && beta > 1.0 {
                    Ok(0.0)
                } else if beta <= 1.0 && alpha > 1.0 {
                    Ok(1.0)
                } else {
                    Err(Error::Unsupported(
                        "Beta density is flat or bimodal for these parameters".into(),
                    ))
                }
            }
            Gamma { shape, rate } => Ok(if shape >= 1.0 { (shape - 1.0) / rate } else { 0.0 }),
            NormalPrecision { mean, .. } => Ok(mean),
            Pareto { scale, .. } => Ok(scale),
            ContinuousUniform { .. } => Err(Error::Unsupported(
                "Uniform density is flat; mode is not unique".into(),
            )),
            _ => Err(Error::Unsupported(format!(
                "mode not implemented for {}",
                self.family_name()
            ))),
        }
    }

    /// Draw `count` values. Deterministic for a given `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        if matches!(self, NormalGamma { .. }) {
            return Err(Error::Unsupported(
                "NormalGamma is a joint distribution; sampling is not defined".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(self.draw(&mut rng)?);
        }
        Ok(out)
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<f64> {
        let v = match *self {
            Bernoulli { prob } => {
                if rng.gen::<f64>() < prob {
                    1.0
                } else {
                    0.0
                }
            }
            Binomial { .. }
            | Poisson { .. }
            | Geometric { .. }
            | ContinuousUniform { .. }
            | Pareto { .. }
            | NormalPrecision { .. } => {
                let u = unit_open(rng);
                self.quantile(u)?
            }
            Gamma { shape, rate } => draw_gamma(rng, shape) / rate,
            Beta { alpha, beta } => {
                let g1 = draw_gamma(rng, alpha);
                let g2 = draw_gamma(rng, beta);
                g1 / (g1 + g2)
            }
            PoissonGamma {
                shape,
                rate,
                exposure,
            } => {
                let lambda = draw_gamma(rng, shape) / rate;
                Distribution::poisson((lambda * exposure).max(f64::MIN_POSITIVE))?
                    .quantile(unit_open(rng))?
            }
            NormalGamma { .. } => unreachable!(),
        };
        Ok(v)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.family_name(), params.join(", "))
    }
}

/// Interpret `x` as a count; `None` when it is negative or not integral.
fn as_count(x: f64) -> Option<u64> {
    if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Some(x as u64)
    } else {
        None
    }
}

/// Uniform draw in the open interval (0, 1).
fn unit_open(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>().clamp(f64::MIN_POSITIVE, 1.0 - 1e-16)
}

/// Marsaglia-Tsang draw from Gamma(shape, 1).
fn draw_gamma(rng: &mut ChaCha8Rng, shape: f64) -> f64 {
    if shape < 1.0 {
        // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
        let u: f64 = unit_open(rng);
        return draw_gamma(rng, shape + 1.0) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z = std_normal_quantile(unit_open(rng)).expect("p in (0,1)");
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v3 = v * v * v;
        let u: f64 = unit_open(rng);
        if u.ln() < 0.5 * z * z + d - d * v3 + d * v3.ln() {
            return d * v3;
        }
    }
}

/// Poisson-Gamma mixture log-pmf.
fn pg_log_pmf(shape: f64, rate: f64, exposure: f64, k: u64) -> f64 {
    shape * rate.ln() - ln_gamma(shape) + ln_gamma(shape + k as f64) - ln_factorial(k)
        + k as f64 * exposure.ln()
        - (shape + k as f64) * (rate + exposure).ln()
}

/// Poisson-Gamma CDF by stable term recurrence in log space.
fn pg_cdf(shape: f64, rate: f64, exposure: f64, k: u64) -> f64 {
    let mut ln_term = shape * (rate / (rate + exposure)).ln();
    let mut ln_cdf = ln_term;
    for j in 0..k {
        ln_term += ((shape + j as f64) / (j as f64 + 1.0) * (exposure / (rate + exposure))).ln();
        ln_cdf = log_add_exp(ln_cdf, ln_term);
        if ln_cdf >= -1e-15 {
            return 1.0;
        }
    }
    ln_cdf.exp().min(1.0)
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Smallest integer x with CDF(x) ≥ p, scanning pmf terms via the ratio
/// pmf(x+1)/pmf(x) and accumulating in log space. `mean`/`variance` bound
/// the scan for pathological `p` close to 1.
fn discrete_quantile_scan<R: Fn(u64) -> f64>(
    ln_p0: f64,
    ratio: R,
    p: f64,
    upper: Option<u64>,
    mean: f64,
    variance: f64,
) -> f64 {
    let hard_cap = upper.unwrap_or_else(|| (mean + 60.0 * variance.sqrt() + 1e4).ceil() as u64);
    let ln_p = p.ln();
    let mut ln_term = ln_p0;
    let mut ln_cdf = ln_p0;
    let mut x: u64 = 0;
    while ln_cdf < ln_p && x < hard_cap {
        ln_term += ratio(x).ln();
        ln_cdf = log_add_exp(ln_cdf, ln_term);
        x += 1;
    }
    x as f64
}

/// Safeguarded Newton on cdf(x) − p with a maintained bracket.
fn continuous_quantile(d: &Distribution, p: f64, start: f64, lo0: f64, hi0: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = hi0;
    // establish a finite upper bracket when the support is unbounded
    if hi.is_infinite() {
        let mut probe = start.max(1.0);
        for _ in 0..200 {
            if d.cdf(probe)? >= p {
                break;
            }
            probe *= 2.0;
        }
        hi = probe;
    }
    let mut x = start.clamp(lo, hi);
    if x == lo || x == hi {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let f = d.cdf(x)? - p;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if f.abs() < 1e-14 {
            return Ok(x);
        }
        let df = d.density(x)?;
        let step_ok = df > 0.0 && df.is_finite();
        let mut next = if step_ok { x - f / df } else { f64::NAN };
        if !step_ok || !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(Distribution::beta(0.0, 1.0).is_err());
        assert!(Distribution::gamma(1.0, -2.0).is_err());
        assert!(Distribution::normal_precision(0.0, 0.0).is_err());
        assert!(Distribution::bernoulli(1.0).is_err());
        assert!(Distribution::poisson(f64::NAN).is_err());
        assert!(Distribution::continuous_uniform(-1.0).is_err());
    }

    #[test]
    fn uniform_beta_density() {
        let d = Distribution::beta(1.0, 1.0).unwrap();
        close(d.density(0.3).unwrap(), 1.0, 1e-14);
    }

    #[test]
    fn bernoulli_density_formula() {
        let theta = 0.37;
        let d = Distribution::bernoulli(theta).unwrap();
        close(d.density(1.0).unwrap(), theta, 1e-15);
        close(d.density(0.0).unwrap(), 1.0 - theta, 1e-15);
        assert_eq!(d.density(0.5).unwrap(), 0.0);
    }

    #[test]
    fn poisson_gamma_pmf_at_zero() {
        // direct evaluation of the mixture pmf: (β/(β+n))^α at x = 0
        let d = Distribution::poisson_gamma(2.0, 3.0, 1.0).unwrap();
        close(d.density(0.0).unwrap(), 0.5625, 1e-12);
    }

    #[test]
    fn density_rejects_nan() {
        let d = Distribution::beta(2.0, 3.0).unwrap();
        assert!(d.density(f64::NAN).is_err());
    }

    #[test]
    fn normal_cdf_symmetry() {
        let d = Distribution::normal_precision(0.0, 1.0).unwrap();
        close(d.cdf(0.0).unwrap(), 0.5, 1e-15);
        close(d.quantile(0.5).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn audit_prior_interval_and_tail() {
        let d = Distribution::beta(193.090, 1952.354).unwrap();
        let mass = d.cdf(0.11).unwrap() - d.cdf(0.08).unwrap();
        close(mass, 0.95, 2e-3);
        close(1.0 - d.cdf(0.10).unwrap(), 0.0561, 1e-3);
        close(d.moments().unwrap().mean, 0.09, 1e-6);
    }

    #[test]
    fn unit_exponential_quantile() {
        let d = Distribution::gamma(1.0, 1.0).unwrap();
        close(d.quantile(0.95).unwrap(), -(0.05f64.ln()), 1e-9);
    }

    #[test]
    fn symmetric_beta_median() {
        let d = Distribution::beta(2.0, 2.0).unwrap();
        close(d.quantile(0.5).unwrap(), 0.5, 1e-10);
    }

    #[test]
    fn poisson_gamma_moments() {
        let (a, b, n) = (9.108, 0.01012, 3.0);
        let d = Distribution::poisson_gamma(a, b, n).unwrap();
        let m = d.moments().unwrap();
        close(m.mean, n * a / b, 1e-9);
        close(m.variance, (n * a / b) * (1.0 + n / b), 1e-6);
    }

    #[test]
    fn caseta_posterior_mean() {
        let d = Distribution::gamma(1391.108, 2.01012).unwrap();
        close(d.moments().unwrap().mean, 692.05, 0.01);
    }

    #[test]
    fn pareto_moment_existence() {
        assert!(Distribution::pareto(0.9, 1.0).unwrap().moments().is_err());
        assert!(Distribution::pareto(1.5, 1.0).unwrap().moments().is_err());
        let m = Distribution::pareto(3.0, 2.0).unwrap().moments().unwrap();
        close(m.mean, 3.0, 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_in_support() {
        let d = Distribution::bernoulli(0.75).unwrap();
        let a = d.sample(20, 7).unwrap();
        let b = d.sample(20, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| *x == 0.0 || *x == 1.0));
        assert!(d.sample(0, 7).unwrap().is_empty());
    }

    #[test]
    fn gamma_sample_mean_matches() {
        let d = Distribution::gamma(2.0, 4.0).unwrap();
        let xs = d.sample(100_000, 42).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        close(mean, 0.5, 0.01);
    }

    #[test]
    fn normal_sample_within_standard_errors() {
        let d = Distribution::normal_precision(3.0, 0.25).unwrap();
        let xs = d.sample(100_000, 9).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        // four standard errors of the sample mean
        let se = (1.0 / 0.25f64 / 100_000.0).sqrt();
        assert!((mean - 3.0).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn continuous_densities_integrate_to_one() {
        let cases = [
            Distribution::beta(2.5, 4.0).unwrap(),
            Distribution::gamma(3.0, 1.7).unwrap(),
            Distribution::normal_precision(-1.0, 2.0).unwrap(),
            Distribution::pareto(2.5, 1.5).unwrap(),
            Distribution::continuous_uniform(4.2).unwrap(),
        ];
        for d in &cases {
            let (lo, hi) = d.support();
            let lo = if lo.is_infinite() { d.quantile(1e-12).unwrap() } else { lo };
            let hi = if hi.is_infinite() {
                d.quantile(1.0 - 1e-12).unwrap()
            } else {
                hi
            };
            let mass = integrate(|x| d.density(x).unwrap_or(0.0), lo, hi, 1e-9).unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "{d}: mass {mass}");
        }
    }

    #[test]
    fn discrete_masses_sum_to_one() {
        let cases = [
            Distribution::poisson(6.3).unwrap(),
            Distribution::binomial(17, 0.3).unwrap(),
            Distribution::geometric(0.2).unwrap(),
            Distribution::poisson_gamma(2.0, 3.0, 1.0).unwrap(),
        ];
        for d in &cases {
            let hi = d.quantile(0.999_999).unwrap() as u64 + 10;
            let sum: f64 = (0..=hi).map(|k| d.density(k as f64).unwrap()).sum();
            assert!((sum - 1.0).abs() < 1e-6, "{d}: sum {sum}");
        }
    }

    #[test]
    fn quantile_cdf_roundtrip() {
        let cases = [
            Distribution::beta(2.5, 4.0).unwrap(),
            Distribution::gamma(3.0, 1.7).unwrap(),
            Distribution::gamma(1391.108, 2.01012).unwrap(),
            Distribution::normal_precision(-1.0, 2.0).unwrap(),
            Distribution::pareto(2.5, 1.5).unwrap(),
            Distribution::continuous_uniform(4.2).unwrap(),
        ];
        for d in &cases {
            for &p in &[0.01, 0.1, 0.5, 0.9, 0.99] {
                let x = d.quantile(p).unwrap();
                let back = d.cdf(x).unwrap();
                assert!((back - p).abs() < 1e-6, "{d} at p={p}: got {back}");
            }
        }
    }

    #[test]
    fn discrete_quantile_is_smallest_covering_point() {
        let d = Distribution::poisson(4.0).unwrap();
        for &p in &[0.05, 0.3, 0.5, 0.9, 0.999] {
            let x = d.quantile(p).unwrap();
            assert!(d.cdf(x).unwrap() >= p);
            if x > 0.0 {
                assert!(d.cdf(x - 1.0).unwrap() < p);
            }
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let cases = [
            Distribution::beta(2.5, 4.0).unwrap(),
            Distribution::gamma(3.0, 1.7).unwrap(),
            Distribution::normal_precision(-1.0, 2.0).unwrap(),
            Distribution::continuous_uniform(4.2).unwrap(),
        ];
        for d in &cases {
            let (lo, hi) = d.support();
            let lo = if lo.is_infinite() { d.quantile(1e-13).unwrap() } else { lo };
            let hi = if hi.is_infinite() {
                d.quantile(1.0 - 1e-13).unwrap()
            } else {
                hi
            };
            let m = d.moments().unwrap();
            let mean = integrate(|x| x * d.density(x).unwrap_or(0.0), lo, hi, 1e-10).unwrap();
            let ex2 = integrate(|x| x * x * d.density(x).unwrap_or(0.0), lo, hi, 1e-10).unwrap();
            assert!((mean - m.mean).abs() / m.mean.abs().max(1.0) < 1e-6, "{d} mean");
            let var = ex2 - mean * mean;
            assert!(
                (var - m.variance).abs() / m.variance.max(1.0) < 1e-6,
                "{d} variance: {var} vs {}",
                m.variance
            );
        }
    }

    #[test]
    fn discrete_moments_match_summation() {
        let cases = [
            Distribution::poisson(6.3).unwrap(),
            Distribution::poisson_gamma(2.0, 3.0, 1.0).unwrap(),
            Distribution::binomial(17, 0.3).unwrap(),
            Distribution::geometric(0.25).unwrap(),
        ];
        for d in &cases {
            let hi = d.quantile(0.999_999_9).unwrap() as u64 + 60;
            let mut mean = 0.0;
            let mut ex2 = 0.0;
            for k in 0..=hi {
                let p = d.density(k as f64).unwrap();
                mean += k as f64 * p;
                ex2 += (k * k) as f64 * p;
            }
            let m = d.moments().unwrap();
            assert!((mean - m.mean).abs() / m.mean.max(1.0) < 1e-6, "{d} mean");
            let var = ex2 - mean * mean;
            assert!(
                (var - m.variance).abs() / m.variance.max(1.0) < 1e-6,
                "{d} variance"
            );
        }
    }

    #[test]
    fn poisson_gamma_matches_mixture_quadrature() {
        // oracle: ∫ Poisson(x|nλ) Gamma(λ|α,β) dλ, integrated to 1e-10
        let (a, b, n) = (2.0, 3.0, 1.0);
        let d = Distribution::poisson_gamma(a, b, n).unwrap();
        let gamma = Distribution::gamma(a, b).unwrap();
        let hi = gamma.quantile(1.0 - 1e-13).unwrap();
        for k in 0..=12u64 {
            let oracle = integrate(
                |lam| {
                    let pois = (k as f64) * (n * lam).ln() - n * lam - ln_factorial(k);
                    pois.exp() * gamma.density(lam).unwrap()
                },
                1e-14,
                hi,
                1e-12,
            )
            .unwrap();
            let got = d.density(k as f64).unwrap();
            assert!((got - oracle).abs() < 1e-8, "k={k}: {got} vs {oracle}");
        }
    }

    #[test]
    fn normal_gamma_is_joint_only() {
        let d = Distribution::normal_gamma(0.0, 1.0, 2.0, 3.0).unwrap();
        assert!(d.density(0.0).is_err());
        assert!(d.moments().is_err());
        assert!(d.sample(1, 0).is_err());
        // joint density factorizes into Normal(μ|μ0, n0λ) * Gamma(λ|α,β)
        let lp = d.joint_log_density(0.5, 1.2).unwrap();
        let n = Distribution::normal_precision(0.0, 1.2).unwrap();
        let g = Distribution::gamma(2.0, 3.0).unwrap();
        close(
            lp,
            n.log_density(0.5).unwrap() + g.log_density(1.2).unwrap(),
            1e-12,
        );
    }

    #[test]
    fn cdf_is_consistent_with_density() {
        // numerical differentiation of the cdf recovers the density
        for d in [
            Distribution::gamma(3.0, 1.7).unwrap(),
            Distribution::beta(2.5, 4.0).unwrap(),
            Distribution::normal_precision(0.3, 2.0).unwrap(),
        ] {
            for p in [0.2, 0.5, 0.8] {
                let x = d.quantile(p).unwrap();
                let h = 1e-5;
                let deriv = (d.cdf(x + h).unwrap() - d.cdf(x - h).unwrap()) / (2.0 * h);
                assert!(
                    (deriv - d.density(x).unwrap()).abs() < 1e-8,
                    "{d} at {x}: {deriv}"
                );
            }
        }
        // discrete: the cdf steps by exactly the mass at each point
        let d = Distribution::poisson(4.2).unwrap();
        for k in 0..12 {
            let step = d.cdf(k as f64).unwrap()
                - if k == 0 { 0.0 } else { d.cdf(k as f64 - 1.0).unwrap() };
            assert!((step - d.density(k as f64).unwrap()).abs() < 1e-8);
        }
    }
}

//! Conjugate Bayesian updating, predictive distributions, finite-grid
//! priors and the two-event form of the Bayes rule.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::prob::ProbVector;
use crate::quad::integrate;

/// Observation model for the updating rules. Fixed nuisance values
/// (a known precision or mean) travel with the variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Likelihood {
    Bernoulli,
    /// `trials` independent Bernoulli draws per observation.
    Binomial { trials: u64 },
    Poisson,
    /// Failures before the first success.
    Geometric,
    Exponential,
    /// Uniform(0, θ) with unknown upper endpoint.
    Uniform,
    /// Normal with known precision; the mean is the unknown parameter.
    NormalKnownPrecision { precision: f64 },
    /// Normal with known mean; the precision is the unknown parameter.
    NormalKnownMean { mean: f64 },
    /// Normal with both mean and precision unknown.
    NormalBoth,
}

impl Likelihood {
    pub fn name(&self) -> &'static str {
        match self {
            Likelihood::Bernoulli => "Bernoulli",
            Likelihood::Binomial { .. } => "Binomial",
            Likelihood::Poisson => "Poisson",
            Likelihood::Geometric => "Geometric",
            Likelihood::Exponential => "Exponential",
            Likelihood::Uniform => "Uniform",
            Likelihood::NormalKnownPrecision { .. } => "Normal (known precision)",
            Likelihood::NormalKnownMean { .. } => "Normal (known mean)",
            Likelihood::NormalBoth => "Normal (mean and precision unknown)",
        }
    }

    /// Log-likelihood of a single observation given parameter θ.
    ///
    /// For `NormalBoth` the scalar parameterization is not available;
    /// use the sufficient-statistics update instead.
    pub fn log_likelihood(&self, theta: f64, x: f64) -> Result<f64> {
        let d = self.observation_model(theta)?;
        d.log_density(x)
    }

    /// The observation distribution for a given parameter value.
    pub fn observation_model(&self, theta: f64) -> Result<Distribution> {
        match *self {
            Likelihood::Bernoulli => Distribution::bernoulli(theta),
            Likelihood::Binomial { trials } => Distribution::binomial(trials, theta),
            Likelihood::Poisson => Distribution::poisson(theta),
            Likelihood::Geometric => Distribution::geometric(theta),
            Likelihood::Exponential => Distribution::gamma(1.0, theta),
            Likelihood::Uniform => Distribution::continuous_uniform(theta),
            Likelihood::NormalKnownPrecision { precision } => {
                Distribution::normal_precision(theta, precision)
            }
            Likelihood::NormalKnownMean { mean } => Distribution::normal_precision(mean, theta),
            Likelihood::NormalBoth => Err(Error::Unsupported(
                "NormalBoth has a two-dimensional parameter; no scalar observation model".into(),
            )),
        }
    }

    /// The prior family this likelihood is conjugate to.
    fn conjugate_family(&self) -> &'static str {
        match self {
            Likelihood::Bernoulli | Likelihood::Binomial { .. } | Likelihood::Geometric => "Beta",
            Likelihood::Poisson
            | Likelihood::Exponential
            | Likelihood::NormalKnownMean { .. } => "Gamma",
            Likelihood::Uniform => "Pareto",
            Likelihood::NormalKnownPrecision { .. } => "Normal",
            Likelihood::NormalBoth => "NormalGamma",
        }
    }
}

/// Sufficient statistics of an observed sample. One summary type serves
/// every likelihood: (n, Σx, Σx², max).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
    pub max: f64,
}

impl SampleSummary {
    pub fn from_data(data: &[f64]) -> Result<Self> {
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InconsistentData("non-finite observation".into()));
        }
        Ok(SampleSummary {
            n: data.len() as u64,
            sum: data.iter().sum(),
            sum_sq: data.iter().map(|x| x * x).sum(),
            max: data.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn empty() -> Self {
        SampleSummary {
            n: 0,
            sum: 0.0,
            sum_sq: 0.0,
            max: f64::NEG_INFINITY,
        }
    }

    /// Success count for binary data (alias of `sum`).
    pub fn successes(&self) -> f64 {
        self.sum
    }

    /// Σ(xᵢ − c)² from the retained statistics.
    pub fn centered_sum_sq(&self, c: f64) -> f64 {
        self.sum_sq - 2.0 * c * self.sum + self.n as f64 * c * c
    }

    fn check_binary(&self, trials_per_obs: u64) -> Result<()> {
        let cap = (self.n * trials_per_obs) as f64;
        if self.sum < 0.0 || self.sum > cap {
            return Err(Error::InconsistentData(format!(
                "success count {} outside [0, {}]",
                self.sum, cap
            )));
        }
        Ok(())
    }

    fn check_nonnegative(&self) -> Result<()> {
        if self.n > 0 && self.sum < 0.0 {
            return Err(Error::InconsistentData(
                "sum of nonnegative observations is negative".into(),
            ));
        }
        Ok(())
    }
}

/// A likelihood paired with its conjugate prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateModel {
    likelihood: Likelihood,
    prior: Distribution,
}

impl ConjugateModel {
    /// Builds the model, rejecting prior families that do not match the
    /// conjugate family mandated for the likelihood.
    pub fn new(likelihood: Likelihood, prior: Distribution) -> Result<Self> {
        let ok = matches!(
            (&likelihood, &prior),
            (
                Likelihood::Bernoulli | Likelihood::Binomial { .. } | Likelihood::Geometric,
                Distribution::Beta { .. }
            ) | (
                Likelihood::Poisson
                    | Likelihood::Exponential
                    | Likelihood::NormalKnownMean { .. },
                Distribution::Gamma { .. }
            ) | (Likelihood::Uniform, Distribution::Pareto { .. })
                | (
                    Likelihood::NormalKnownPrecision { .. },
                    Distribution::NormalPrecision { .. }
                )
                | (Likelihood::NormalBoth, Distribution::NormalGamma { .. })
        );
        if !ok {
            return Err(Error::Mismatch(format!(
                "{} likelihood requires a {} prior, got {}",
                likelihood.name(),
                likelihood.conjugate_family(),
                prior.family_name()
            )));
        }
        Ok(ConjugateModel { likelihood, prior })
    }

    pub fn likelihood(&self) -> &Likelihood {
        &self.likelihood
    }

    pub fn prior(&self) -> &Distribution {
        &self.prior
    }

    /// Conjugate posterior given the sample summary.
    pub fn posterior(&self, data: &SampleSummary) -> Result<Distribution> {
        use Distribution::*;
        let n = data.n as f64;
        match (&self.likelihood, &self.prior) {
            (Likelihood::Bernoulli, Beta { alpha, beta }) => {
                data.check_binary(1)?;
                let r = data.successes();
                Distribution::beta(alpha + r, beta + n - r)
            }
            (Likelihood::Binomial { trials }, Beta { alpha, beta }) => {
                data.check_binary(*trials)?;
                let r = data.successes();
                Distribution::beta(alpha + r, beta + n * *trials as f64 - r)
            }
            (Likelihood::Geometric, Beta { alpha, beta }) => {
                data.check_nonnegative()?;
                Distribution::beta(alpha + n, beta + data.sum)
            }
            (Likelihood::Poisson, Gamma { shape, rate }) => {
                data.check_nonnegative()?;
                Distribution::gamma(shape + data.sum, rate + n)
            }
            (Likelihood::Exponential, Gamma { shape, rate }) => {
                data.check_nonnegative()?;
                Distribution::gamma(shape + n, rate + data.sum)
            }
            (Likelihood::Uniform, Pareto { shape, scale }) => {
                if data.n > 0 && data.max < 0.0 {
                    return Err(Error::InconsistentData(
                        "Uniform(0,θ) observations must be nonnegative".into(),
                    ));
                }
                let scale = if data.n == 0 { *scale } else { scale.max(data.max) };
                Distribution::pareto(shape + n, scale)
            }
            (
                Likelihood::NormalKnownPrecision { precision },
                NormalPrecision {
                    mean: m0,
                    precision: l0,
                },
            ) => {
                let post_precision = l0 + n * precision;
                let post_mean = (l0 * m0 + precision * data.sum) / post_precision;
                Distribution::normal_precision(post_mean, post_precision)
            }
            (Likelihood::NormalKnownMean { mean }, Gamma { shape, rate }) => {
                Distribution::gamma(shape + n / 2.0, rate + 0.5 * data.centered_sum_sq(*mean))
            }
            (
                Likelihood::NormalBoth,
                NormalGamma {
                    mean: m0,
                    count: n0,
                    shape,
                    rate,
                },
            ) => {
                if data.n == 0 {
                    return Ok(self.prior.clone());
                }
                let xbar = data.sum / n;
                let scatter = data.centered_sum_sq(xbar);
                let mean = (n0 * m0 + n * xbar) / (n0 + n);
                let spread = rate + 0.5 * scatter + n0 * n * (xbar - m0) * (xbar - m0) / (2.0 * (n0 + n));
                Distribution::normal_gamma(mean, n0 + n, shape + n / 2.0, spread)
            }
            _ => unreachable!("constructor enforces conjugate pairing"),
        }
    }

    /// Predictive distribution of one future observation under the prior.
    pub fn prior_predictive(&self) -> Result<Predictive> {
        predictive_of(&self.likelihood, &self.prior)
    }

    /// Predictive distribution of one future observation under the
    /// posterior: the prior predictive of the re-rooted model.
    pub fn posterior_predictive(&self, data: &SampleSummary) -> Result<Predictive> {
        let posterior = self.posterior(data)?;
        predictive_of(&self.likelihood, &posterior)
    }
}

/// A predictive distribution: closed form where one exists, otherwise a
/// numeric mixture density evaluated by quadrature.
#[derive(Debug, Clone)]
pub enum Predictive {
    Closed(Distribution),
    Numeric(NumericPredictive),
}

impl Predictive {
    /// Density (or mass) of the next observation at `x`.
    pub fn density(&self, x: f64) -> Result<f64> {
        match self {
            Predictive::Closed(d) => d.density(x),
            Predictive::Numeric(n) => n.density(x),
        }
    }

    /// Mean and variance when available in closed form.
    pub fn moments(&self) -> Result<crate::dist::Moments> {
        match self {
            Predictive::Closed(d) => d.moments(),
            Predictive::Numeric(n) => n.moments(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Predictive::Closed(d) => d.to_string(),
            Predictive::Numeric(n) => format!(
                "numeric mixture of {} over {} parameter",
                n.likelihood.name(),
                n.mixing.family_name()
            ),
        }
    }

    /// Draw future observations. Numeric mixtures sample the parameter
    /// first and then one observation from it; deterministic per seed.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            Predictive::Closed(d) => d.sample(count, seed),
            Predictive::Numeric(n) => {
                let thetas = n.mixing.sample(count, seed)?;
                let mut out = Vec::with_capacity(count);
                for (i, theta) in thetas.iter().enumerate() {
                    let obs_seed = seed
                        .wrapping_add(0x9E37_79B9_7F4A_7C15)
                        .wrapping_mul(i as u64 + 1);
                    let x = n
                        .likelihood
                        .observation_model(*theta)?
                        .sample(1, obs_seed)?[0];
                    out.push(x);
                }
                Ok(out)
            }
        }
    }
}

/// Mixture predictive ∫ p(x|θ) p(θ) dθ evaluated on demand.
#[derive(Debug, Clone)]
pub struct NumericPredictive {
    likelihood: Likelihood,
    mixing: Distribution,
}

impl NumericPredictive {
    const TOL: f64 = 1e-9;

    pub fn density(&self, x: f64) -> Result<f64> {
        let (lo, hi) = integration_range(&self.mixing)?;
        integrate(
            |theta| {
                let like = self
                    .likelihood
                    .log_likelihood(theta, x)
                    .unwrap_or(f64::NEG_INFINITY);
                let prior = self.mixing.log_density(theta).unwrap_or(f64::NEG_INFINITY);
                let v = like + prior;
                if v.is_finite() {
                    v.exp()
                } else {
                    0.0
                }
            },
            lo,
            hi,
            Self::TOL,
        )
    }

    /// Predictive mean and variance by the laws of total expectation and
    /// variance, integrating the per-θ observation moments.
    pub fn moments(&self) -> Result<crate::dist::Moments> {
        let (lo, hi) = integration_range(&self.mixing)?;
        let weight = |theta: f64| self.mixing.density(theta).unwrap_or(0.0);
        let mean_of = |theta: f64| -> f64 {
            self.likelihood
                .observation_model(theta)
                .and_then(|d| d.moments())
                .map(|m| m.mean)
                .unwrap_or(0.0)
        };
        let second_of = |theta: f64| -> f64 {
            self.likelihood
                .observation_model(theta)
                .and_then(|d| d.moments())
                .map(|m| m.variance + m.mean * m.mean)
                .unwrap_or(0.0)
        };
        let mean = integrate(|t| mean_of(t) * weight(t), lo, hi, Self::TOL)?;
        let second = integrate(|t| second_of(t) * weight(t), lo, hi, Self::TOL)?;
        Ok(crate::dist::Moments {
            mean,
            variance: second - mean * mean,
        })
    }
}

fn integration_range(d: &Distribution) -> Result<(f64, f64)> {
    let (lo, hi) = d.support();
    let lo = if lo.is_infinite() { d.quantile(1e-12)? } else { lo };
    let hi = if hi.is_infinite() {
        d.quantile(1.0 - 1e-12)?
    } else {
        hi
    };
    Ok((lo, hi))
}

fn predictive_of(likelihood: &Likelihood, prior: &Distribution) -> Result<Predictive> {
    use Distribution::*;
    let closed = match (likelihood, prior) {
        (Likelihood::Poisson, Gamma { shape, rate }) => {
            Some(Distribution::poisson_gamma(*shape, *rate, 1.0)?)
        }
        (Likelihood::Bernoulli, Beta { alpha, beta }) => {
            Some(Distribution::bernoulli(alpha / (alpha + beta))?)
        }
        (
            Likelihood::NormalKnownPrecision { precision },
            NormalPrecision {
                mean,
                precision: l0,
            },
        ) => {
            // independent noise terms: 1/λ' = 1/λ + 1/λ0
            let combined = precision * l0 / (precision + l0);
            Some(Distribution::normal_precision(*mean, combined)?)
        }
        _ => None,
    };
    Ok(match closed {
        Some(d) => Predictive::Closed(d),
        None => Predictive::Numeric(NumericPredictive {
            likelihood: *likelihood,
            mixing: prior.clone(),
        }),
    })
}

/// A finite-support prior: distinct parameter values with positive
/// weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPrior {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl GridPrior {
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.len() != weights.len() || support.is_empty() {
            return Err(Error::Mismatch(
                "grid support and weights must be equal-length and nonempty".into(),
            ));
        }
        let mut sorted = support.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("grid support values must be distinct".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Domain("grid weights must be strictly positive".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("grid weights sum to {sum}, expected 1")));
        }
        let weights = weights.iter().map(|w| w / sum).collect();
        Ok(GridPrior { support, weights })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_at(&self, theta: f64) -> Option<f64> {
        self.support
            .iter()
            .position(|t| *t == theta)
            .map(|i| self.weights[i])
    }

    /// View as a labeled probability vector (labels are the θ values).
    pub fn to_prob_vector(&self) -> Result<ProbVector> {
        let labels: Vec<String> = self.support.iter().map(|t| format!("theta={t}")).collect();
        ProbVector::new(labels, self.weights.clone())
    }
}

/// Posterior weights over a finite grid of parameter values.
///
/// Likelihood products are accumulated in log space and renormalized
/// with a single exponentiation, so long samples cannot underflow.
pub fn grid_posterior(prior: &GridPrior, likelihood: &Likelihood, data: &[f64]) -> Result<GridPrior> {
    let mut log_w: Vec<f64> = prior.weights.iter().map(|w| w.ln()).collect();
    for (i, &theta) in prior.support.iter().enumerate() {
        for &x in data {
            log_w[i] += likelihood.log_likelihood(theta, x)?;
        }
    }
    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::Domain(
            "every grid point has zero likelihood for the observed data".into(),
        ));
    }
    let unnorm: Vec<f64> = log_w.iter().map(|lw| (lw - max).exp()).collect();
    let total: f64 = unnorm.iter().sum();
    let weights: Vec<f64> = unnorm.iter().map(|w| w / total).collect();
    // drop support points whose posterior weight underflowed to zero
    let (support, weights): (Vec<f64>, Vec<f64>) = prior
        .support
        .iter()
        .zip(weights)
        .filter(|(_, w)| *w > 0.0)
        .map(|(t, w)| (*t, w))
        .unzip();
    GridPrior::new(support, weights)
}

/// Mixture predictive Σⱼ p(x|θⱼ) wⱼ over the next observation, for
/// likelihoods with a finite outcome space.
pub fn grid_predictive(prior: &GridPrior, likelihood: &Likelihood) -> Result<ProbVector> {
    let outcomes: Vec<u64> = match likelihood {
        Likelihood::Bernoulli => vec![0, 1],
        Likelihood::Binomial { trials } => (0..=*trials).collect(),
        _ => {
            return Err(Error::Unsupported(format!(
                "{} does not have a finite outcome space",
                likelihood.name()
            )))
        }
    };
    let mut weights = Vec::with_capacity(outcomes.len());
    for &x in &outcomes {
        let mut p = 0.0;
        for (&theta, &w) in prior.support.iter().zip(prior.weights.iter()) {
            p += likelihood.log_likelihood(theta, x as f64)?.exp() * w;
        }
        weights.push(p);
    }
    let labels: Vec<String> = outcomes.iter().map(|x| format!("x={x}")).collect();
    ProbVector::new(labels, weights)
}

/// Two-event Bayes rule: P(B|A) from P(B), P(A|B) and P(A|Bᶜ).
pub fn event_posterior(prior_b: f64, p_a_given_b: f64, p_a_given_not_b: f64) -> Result<f64> {
    for (name, v) in [
        ("prior", prior_b),
        ("p_a_given_b", p_a_given_b),
        ("p_a_given_not_b", p_a_given_not_b),
    ] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} must be in [0,1], got {v}")));
        }
    }
    let marginal = p_a_given_b * prior_b + p_a_given_not_b * (1.0 - prior_b);
    if marginal <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(p_a_given_b * prior_b / marginal)
}

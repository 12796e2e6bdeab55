//! Fisher information per unit sample and the square-root-of-information
//! non-informative prior, with the posteriors it induces.

use std::fmt;
use std::sync::Arc;

use crate::conjugate::{Likelihood, SampleSummary};
use crate::dist::Distribution;
use crate::error::{Error, Result};

/// An unnormalized prior density. `proper` is false when the kernel does
/// not integrate to a finite value; such priors are only ever used
/// through the posteriors they induce.
#[derive(Clone)]
pub struct ImproperDensity {
    likelihood: Likelihood,
    support: (f64, f64),
    proper: bool,
    /// Closed-form equivalent when the kernel normalizes.
    normalized: Option<Distribution>,
    /// Human-readable kernel, e.g. `"theta^(-1/2) * (1-theta)^(-1/2)"`.
    kernel: String,
    log_density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ImproperDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImproperDensity")
            .field("likelihood", &self.likelihood.name())
            .field("support", &self.support)
            .field("proper", &self.proper)
            .field("kernel", &self.kernel)
            .finish()
    }
}

impl ImproperDensity {
    pub fn likelihood(&self) -> &Likelihood {
        &self.likelihood
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn proper(&self) -> bool {
        self.proper
    }

    /// The normalized distribution, when the prior is proper.
    pub fn normalized(&self) -> Option<&Distribution> {
        self.normalized.as_ref()
    }

    pub fn kernel(&self) -> &str {
        &self.kernel
    }

    /// Unnormalized log-density at a parameter value inside the support.
    pub fn log_density(&self, theta: f64) -> f64 {
        (self.log_density)(theta)
    }
}

/// Fisher information per unit sample, I(θ), in closed form.
///
/// Families whose support depends on the parameter (the uniform) do not
/// satisfy the regularity conditions and are rejected.
pub fn fisher_information(likelihood: &Likelihood, theta: f64) -> Result<f64> {
    let interior = |ok: bool| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "parameter {theta} is not interior to the parameter space of {}",
                likelihood.name()
            )))
        }
    };
    match *likelihood {
        Likelihood::Bernoulli => {
            interior(theta > 0.0 && theta < 1.0)?;
            Ok(1.0 / (theta * (1.0 - theta)))
        }
        Likelihood::Binomial { trials } => {
            interior(theta > 0.0 && theta < 1.0)?;
            Ok(trials as f64 / (theta * (1.0 - theta)))
        }
        Likelihood::Poisson => {
            interior(theta > 0.0)?;
            Ok(1.0 / theta)
        }
        Likelihood::Geometric => {
            // failures-before-success convention: I(θ) = 1/(θ²(1-θ))
            interior(theta > 0.0 && theta < 1.0)?;
            Ok(1.0 / (theta * theta * (1.0 - theta)))
        }
        Likelihood::Exponential => {
            interior(theta > 0.0)?;
            Ok(1.0 / (theta * theta))
        }
        Likelihood::NormalKnownPrecision { precision } => {
            interior(theta.is_finite())?;
            Ok(precision)
        }
        Likelihood::NormalKnownMean { .. } => {
            // θ is the precision: I(λ) = 1/(2λ²)
            interior(theta > 0.0)?;
            Ok(1.0 / (2.0 * theta * theta))
        }
        Likelihood::Uniform => Err(Error::NonRegular("Uniform")),
        Likelihood::NormalBoth => Err(Error::Unsupported(
            "two-parameter Normal model is out of scope for the square-root rule".into(),
        )),
    }
}

/// The non-informative prior π(θ) ∝ √I(θ).
pub fn jeffreys_prior(likelihood: &Likelihood) -> Result<ImproperDensity> {
    // validate regularity once, at an arbitrary interior point
    let probe = match likelihood {
        Likelihood::Bernoulli | Likelihood::Binomial { .. } | Likelihood::Geometric => 0.5,
        _ => 1.0,
    };
    fisher_information(likelihood, probe)?;

    let (support, proper, normalized, kernel): (
        (f64, f64),
        bool,
        Option<Distribution>,
        String,
    ) = match *likelihood {
        Likelihood::Bernoulli | Likelihood::Binomial { .. } => (
            (0.0, 1.0),
            true,
            Some(Distribution::beta(0.5, 0.5)?),
            "theta^(-1/2) * (1-theta)^(-1/2)".into(),
        ),
        Likelihood::Poisson => ((0.0, f64::INFINITY), false, None, "lambda^(-1/2)".into()),
        Likelihood::Geometric => (
            (0.0, 1.0),
            false,
            None,
            "theta^(-1) * (1-theta)^(-1/2)".into(),
        ),
        Likelihood::Exponential | Likelihood::NormalKnownMean { .. } => {
            ((0.0, f64::INFINITY), false, None, "lambda^(-1)".into())
        }
        Likelihood::NormalKnownPrecision { .. } => (
            (f64::NEG_INFINITY, f64::INFINITY),
            false,
            None,
            "1 (flat)".into(),
        ),
        Likelihood::Uniform | Likelihood::NormalBoth => unreachable!("rejected above"),
    };
    let lk = *likelihood;
    let log_density = Arc::new(move |theta: f64| -> f64 {
        match fisher_information(&lk, theta) {
            Ok(i) => 0.5 * i.ln(),
            Err(_) => f64::NEG_INFINITY,
        }
    });
    Ok(ImproperDensity {
        likelihood: *likelihood,
        support,
        proper,
        normalized,
        kernel,
        log_density,
    })
}

/// Posterior under the √I(θ) prior. Errors when the data cannot
/// normalize the improper prior.
pub fn jeffreys_posterior(likelihood: &Likelihood, data: &SampleSummary) -> Result<Distribution> {
    let n = data.n as f64;
    let need_data = |what: &str| -> Error {
        Error::ImproperPosterior(format!(
            "{} with no {what} cannot normalize the prior",
            likelihood.name()
        ))
    };
    match *likelihood {
        Likelihood::Bernoulli => {
            let r = data.successes();
            Distribution::beta(0.5 + r, 0.5 + n - r)
        }
        Likelihood::Binomial { trials } => {
            let r = data.successes();
            Distribution::beta(0.5 + r, 0.5 + n * trials as f64 - r)
        }
        Likelihood::Poisson => {
            if data.n == 0 {
                return Err(need_data("observations"));
            }
            Distribution::gamma(data.sum + 0.5, n)
        }
        Likelihood::Geometric => {
            if data.n == 0 {
                return Err(need_data("observations"));
            }
            Distribution::beta(n, data.sum + 0.5)
        }
        Likelihood::Exponential => {
            if data.n == 0 || data.sum <= 0.0 {
                return Err(need_data("positive observations"));
            }
            Distribution::gamma(n, data.sum)
        }
        Likelihood::NormalKnownPrecision { precision } => {
            if data.n == 0 {
                return Err(need_data("observations"));
            }
            Distribution::normal_precision(data.sum / n, n * precision)
        }
        Likelihood::NormalKnownMean { mean } => {
            let scatter = data.centered_sum_sq(mean);
            if data.n == 0 || scatter <= 0.0 {
                return Err(need_data("dispersed observations"));
            }
            Distribution::gamma(n / 2.0, scatter / 2.0)
        }
        Likelihood::Uniform => Err(Error::NonRegular("Uniform")),
        Likelihood::NormalBoth => Err(Error::Unsupported(
            "two-parameter Normal model is out of scope for the square-root rule".into(),
        )),
    }
}

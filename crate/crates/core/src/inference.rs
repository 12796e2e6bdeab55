//! Inference as decision: point estimation under a utility, hypothesis
//! contrast, and highest-density regions.

use crate::decision::DecisionProblem;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::prob::ProbVector;

/// Utility shapes for point estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationUtility {
    /// u(t, θ) = −(t − θ)²; optimum is the mean.
    Quadratic,
    /// u(t, θ) = k·|t − θ| with k < 0; optimum is the median.
    Absolute,
    /// u(t, θ) = −((t − θ)/t)²; optimum is E[θ²]/E[θ].
    RelativeQuadratic,
}

/// Optimal point estimate of the parameter under the given utility.
pub fn point_estimate(posterior: &Distribution, utility: EstimationUtility) -> Result<f64> {
    match utility {
        EstimationUtility::Quadratic => Ok(posterior.moments()?.mean),
        EstimationUtility::Absolute => posterior.quantile(0.5),
        EstimationUtility::RelativeQuadratic => {
            let m = posterior.moments()?;
            if m.mean <= 0.0 {
                return Err(Error::Domain(
                    "relative quadratic estimate requires a positive mean".into(),
                ));
            }
            Ok((m.variance + m.mean * m.mean) / m.mean)
        }
    }
}

/// One region of a hypothesis partition: the half-open interval
/// (lo, hi]. For discrete observables this means the integers
/// floor(lo)+1 ..= floor(hi). Either bound may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

impl Region {
    pub fn new<S: Into<String>>(label: S, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Domain(format!(
                "region requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Region {
            label: label.into(),
            lo,
            hi,
        })
    }
}

/// Disjoint labeled regions covering the space; a residual region is
/// appended automatically when the listed ones do not cover it.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPartition {
    regions: Vec<Region>,
}

impl HypothesisPartition {
    pub fn new(mut regions: Vec<Region>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::Mismatch("partition needs at least one region".into()));
        }
        let mut sorted: Vec<(f64, f64, String)> = regions
            .iter()
            .map(|r| (r.lo, r.hi, r.label.clone()))
            .collect();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in sorted.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::Mismatch(format!(
                    "regions `{}` and `{}` overlap",
                    w[0].2, w[1].2
                )));
            }
        }
        // fill gaps (and the two tails) with a single residual label
        let mut residuals: Vec<(f64, f64)> = Vec::new();
        if sorted[0].0 > f64::NEG_INFINITY {
            residuals.push((f64::NEG_INFINITY, sorted[0].0));
        }
        for w in sorted.windows(2) {
            if w[1].0 > w[0].1 {
                residuals.push((w[0].1, w[1].0));
            }
        }
        if sorted.last().unwrap().1 < f64::INFINITY {
            residuals.push((sorted.last().unwrap().1, f64::INFINITY));
        }
        for (i, (lo, hi)) in residuals.iter().enumerate() {
            let label = if residuals.len() == 1 {
                "rest".to_string()
            } else {
                format!("rest{}", i + 1)
            };
            regions.push(Region {
                label,
                lo: *lo,
                hi: *hi,
            });
        }
        Ok(HypothesisPartition { regions })
    }

    /// Regions as given plus any residual completion.
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Labels of the regions, in declaration order.
    pub fn labels(&self) -> Vec<String> {
        self.regions.iter().map(|r| r.label.clone()).collect()
    }
}

/// P(Hⱼ) for every region by CDF differences. Discrete CDFs are step
/// functions, so the same difference yields the mass of the integers in
/// (lo, hi]. Regions outside the support simply carry probability 0.
pub fn hypothesis_probabilities(
    dist: &Distribution,
    partition: &HypothesisPartition,
) -> Result<ProbVector> {
    let mut weights = Vec::with_capacity(partition.regions.len());
    for r in &partition.regions {
        let hi = if r.hi.is_infinite() {
            1.0
        } else {
            dist.cdf(r.hi)?
        };
        let lo = if r.lo.is_infinite() {
            0.0
        } else {
            dist.cdf(r.lo)?
        };
        weights.push((hi - lo).max(0.0));
    }
    ProbVector::new(partition.labels(), weights)
}

/// Result of a hypothesis contrast.
#[derive(Debug, Clone)]
pub struct ContrastReport {
    /// Probability of each hypothesis.
    pub probabilities: ProbVector,
    /// Expected utility per action (indicator utility when no matrix is
    /// given, in which case this equals the probabilities).
    pub expected_utilities: Vec<(String, f64)>,
    /// Optimal actions (ties reported together).
    pub chosen: Vec<String>,
}

/// Choose among hypotheses. Without a utility matrix the indicator
/// utility applies and the most probable hypothesis wins; with one, the
/// induced decision problem is solved by maximum expected utility.
pub fn contrast(
    dist: &Distribution,
    partition: &HypothesisPartition,
    utilities: Option<(&[String], &[Vec<f64>])>,
) -> Result<ContrastReport> {
    let probabilities = hypothesis_probabilities(dist, partition)?;
    let (actions, matrix): (Vec<String>, Vec<Vec<f64>>) = match utilities {
        Some((actions, matrix)) => (actions.to_vec(), matrix.to_vec()),
        None => {
            // indicator utility: choosing hypothesis j pays 1 iff j holds
            let labels = partition.labels();
            let m = labels.len();
            let eye: Vec<Vec<f64>> = (0..m)
                .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            (labels, eye)
        }
    };
    let problem = DecisionProblem::new(
        actions,
        partition.labels(),
        matrix,
        crate::decision::StateProbs::Shared(probabilities.clone()),
    )?;
    let expected_utilities = problem
        .actions()
        .iter()
        .map(|a| (a.clone(), problem.expected_utility(a).unwrap()))
        .collect();
    Ok(ContrastReport {
        probabilities,
        expected_utilities,
        chosen: problem.optimal_actions(),
    })
}

/// Highest-density region of the given probability mass, as a list of
/// disjoint intervals (a single interval for the unimodal densities
/// handled here).
///
/// The region is found by bisecting a density threshold c: for each c
/// the super-level set {x : f(x) ≥ c} is located by root finding on
/// f − c from the mode outward, and its mass is evaluated through the
/// CDF. Monotone densities anchor at the support boundary.
pub fn hpd_region(dist: &Distribution, mass: f64) -> Result<Vec<(f64, f64)>> {
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::Domain(format!("mass must be in (0,1), got {mass}")));
    }
    if dist.is_discrete() {
        return Err(Error::Unsupported(
            "highest-density regions are defined for continuous distributions only".into(),
        ));
    }
    if let Distribution::ContinuousUniform { upper } = dist {
        // flat density: every region of length mass·θ qualifies; return
        // the left-anchored representative
        return Ok(vec![(0.0, mass * upper)]);
    }
    let mode = dist.mode()?;
    let (supp_lo, supp_hi) = dist.support();
    // finite probe points just inside either end of the support
    let probe_lo = dist.quantile(1e-14)?;
    let probe_hi = dist.quantile(1.0 - 1e-14)?;
    let peak = dist.density(mode)?;
    let peak = if peak.is_finite() {
        peak
    } else {
        // unbounded boundary density (e.g. Gamma with shape < 1): start
        // the threshold search from the largest finite interior value
        [1e-6, 1e-3, 0.5, 1.0 - 1e-3, 1.0 - 1e-6]
            .iter()
            .filter_map(|p| dist.quantile(*p).ok())
            .filter_map(|x| dist.density(x).ok())
            .filter(|f| f.is_finite())
            .fold(0.0, f64::max)
    };

    let interval_at = |c: f64| -> Result<(f64, f64)> {
        let lo = if dist.density(probe_lo)? >= c {
            if supp_lo.is_finite() {
                supp_lo
            } else {
                probe_lo
            }
        } else {
            falling_root(dist, c, mode, probe_lo)?
        };
        let hi = if supp_hi.is_finite() && dist.density(supp_hi)? >= c {
            supp_hi
        } else if dist.density(probe_hi)? >= c {
            probe_hi
        } else {
            falling_root(dist, c, mode, probe_hi)?
        };
        Ok((lo, hi))
    };

    // bisect the threshold until the enclosed mass matches
    let mut c_lo = 0.0; // mass -> 1
    let mut c_hi = peak; // mass -> 0
    let mut best = (supp_lo, supp_hi);
    for _ in 0..200 {
        let c = 0.5 * (c_lo + c_hi);
        let (lo, hi) = interval_at(c)?;
        let m = dist.cdf(hi)? - dist.cdf(lo)?;
        best = (lo, hi);
        if (m - mass).abs() < 1e-10 {
            break;
        }
        if m > mass {
            c_lo = c;
        } else {
            c_hi = c;
        }
    }
    Ok(vec![best])
}

/// Crossing point of f(x) = c between the mode and a far point where the
/// density has fallen below c, located by bisection. The density is
/// monotone between the two, so the bracket is valid throughout.
fn falling_root(dist: &Distribution, c: f64, mode: f64, far: f64) -> Result<f64> {
    let mut inside = mode; // density >= c here
    let mut outside = far; // density < c here
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if dist.density(mid)? >= c {
            inside = mid;
        } else {
            outside = mid;
        }
        if (inside - outside).abs() < 1e-12 * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(0.5 * (inside + outside))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn quadratic_estimate_is_posterior_mean() {
        let d = Distribution::gamma(1391.108, 2.01012).unwrap();
        close(
            point_estimate(&d, EstimationUtility::Quadratic).unwrap(),
            692.05,
            0.01,
        );
    }

    #[test]
    fn absolute_estimate_is_median() {
        let d = Distribution::beta(2.0, 2.0).unwrap();
        close(
            point_estimate(&d, EstimationUtility::Absolute).unwrap(),
            0.5,
            1e-9,
        );
    }

    #[test]
    fn relative_quadratic_closed_form() {
        // Gamma: E[θ²]/E[θ] = (α+1)/β
        let (a, b) = (5.0, 2.0);
        let d = Distribution::gamma(a, b).unwrap();
        let got = point_estimate(&d, EstimationUtility::RelativeQuadratic).unwrap();
        close(got, (a + 1.0) / b, 1e-12);
        // oracle: maximize ū(t) = −E[((t−θ)/t)²] numerically over a grid
        let m = d.moments().unwrap();
        let ex2 = m.variance + m.mean * m.mean;
        let util = |t: f64| -(ex2 - 2.0 * t * m.mean + t * t) / (t * t);
        let grid_best = (1..4000)
            .map(|i| i as f64 * 0.001 + 2.0)
            .max_by(|x, y| util(*x).partial_cmp(&util(*y)).unwrap())
            .unwrap();
        close(got, grid_best, 2e-3);
    }

    #[test]
    fn quadratic_estimate_minimizes_expected_square_loss() {
        // ū(t) = −[(t − E θ)² + Var θ]: direct grid check
        let d = Distribution::beta(3.0, 7.0).unwrap();
        let est = point_estimate(&d, EstimationUtility::Quadratic).unwrap();
        let m = d.moments().unwrap();
        let loss = |t: f64| (t - m.mean) * (t - m.mean) + m.variance;
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!(loss(est) <= loss(t) + 1e-12);
        }
    }

    #[test]
    fn relative_quadratic_needs_positive_mean() {
        let d = Distribution::normal_precision(-1.0, 1.0).unwrap();
        assert!(point_estimate(&d, EstimationUtility::RelativeQuadratic).is_err());
    }

    fn tollbooth_partition() -> HypothesisPartition {
        HypothesisPartition::new(vec![
            Region::new("H1", f64::NEG_INFINITY, 690.0).unwrap(),
            Region::new("H2", 690.0, 750.0).unwrap(),
            Region::new("H3", 750.0, f64::INFINITY).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn tollbooth_hypothesis_probabilities() {
        // counts partition {0..690}, {691..750}, {751..}
        let pred = Distribution::poisson_gamma(1391.108, 2.01012, 1.0).unwrap();
        let part = tollbooth_partition();
        let p = hypothesis_probabilities(&pred, &part).unwrap();
        close(p.weight(0), 0.4849, 5e-4);
        close(p.weight(1), 0.4786, 5e-4);
        close(p.weight(2), 0.0365, 5e-4);
    }

    #[test]
    fn partition_autocompletes_residual() {
        let d = Distribution::beta(2.0, 2.0).unwrap();
        let part =
            HypothesisPartition::new(vec![Region::new("mid", 0.25, 0.75).unwrap()]).unwrap();
        let p = hypothesis_probabilities(&d, &part).unwrap();
        let total: f64 = p.weights().iter().sum();
        close(total, 1.0, 1e-9);
        assert_eq!(part.regions().len(), 3);
    }

    #[test]
    fn single_covering_region() {
        let d = Distribution::beta(2.0, 2.0).unwrap();
        let part = HypothesisPartition::new(vec![
            Region::new("all", f64::NEG_INFINITY, f64::INFINITY).unwrap()
        ])
        .unwrap();
        let p = hypothesis_probabilities(&d, &part).unwrap();
        close(p.weight(0), 1.0, 1e-12);
    }

    #[test]
    fn overlapping_regions_rejected() {
        assert!(HypothesisPartition::new(vec![
            Region::new("a", 0.0, 2.0).unwrap(),
            Region::new("b", 1.0, 3.0).unwrap(),
        ])
        .is_err());
    }

    #[test]
    fn audit_posterior_tail_probability() {
        // oracle: the regularized incomplete beta at the region boundary
        let d = Distribution::beta(210.090, 2085.354).unwrap();
        let part =
            HypothesisPartition::new(vec![Region::new("exceeds", 0.10, f64::INFINITY).unwrap()])
                .unwrap();
        let p = hypothesis_probabilities(&d, &part).unwrap();
        let oracle = 1.0 - crate::special::reg_inc_beta(210.090, 2085.354, 0.10).unwrap();
        close(p.weight(0), oracle, 1e-12);
    }

    #[test]
    fn tollbooth_contrast_with_staffing_costs() {
        let pred = Distribution::poisson_gamma(1391.108, 2.01012, 1.0).unwrap();
        let part = tollbooth_partition();
        let actions = vec!["a1".to_string(), "a2".to_string(), "a3".to_string()];
        let utilities = vec![
            vec![-1500.0, -5000.0, -8500.0],
            vec![-3000.0, -3000.0, -6500.0],
            vec![-4500.0, -4500.0, -4500.0],
        ];
        let report = contrast(&pred, &part, Some((&actions, &utilities))).unwrap();
        assert_eq!(report.chosen, vec!["a2".to_string()]);
        close(report.expected_utilities[0].1, -3430.60, 0.5);
        close(report.expected_utilities[1].1, -3127.75, 0.5);
        close(report.expected_utilities[2].1, -4500.00, 0.5);
        // without utilities the most probable hypothesis wins instead
        let simple = contrast(&pred, &part, None).unwrap();
        assert_eq!(simple.chosen, vec!["H1".to_string()]);
    }

    #[test]
    fn contrast_indicator_equals_argmax_probability() {
        let d = Distribution::beta(3.0, 5.0).unwrap();
        let part = HypothesisPartition::new(vec![
            Region::new("low", f64::NEG_INFINITY, 0.3).unwrap(),
            Region::new("high", 0.3, f64::INFINITY).unwrap(),
        ])
        .unwrap();
        let report = contrast(&d, &part, None).unwrap();
        let p = hypothesis_probabilities(&d, &part).unwrap();
        let argmax = if p.weight(0) > p.weight(1) { "low" } else { "high" };
        assert_eq!(report.chosen, vec![argmax.to_string()]);
        for (j, (_, u)) in report.expected_utilities.iter().enumerate() {
            close(*u, p.weight(j), 1e-12);
        }
    }

    #[test]
    fn degenerate_mass_forces_its_hypothesis() {
        // nearly all mass in one region: any positively scaled utility
        // favours acting on it
        let d = Distribution::normal_precision(0.0, 400.0).unwrap();
        let part = HypothesisPartition::new(vec![
            Region::new("inside", -1.0, 1.0).unwrap(),
            Region::new("outside", 1.0, f64::INFINITY).unwrap(),
        ])
        .unwrap();
        let report = contrast(&d, &part, None).unwrap();
        assert_eq!(report.chosen, vec!["inside".to_string()]);
    }

    #[test]
    fn tollbooth_hpd_interval() {
        let d = Distribution::gamma(1391.108, 2.01012).unwrap();
        let region = hpd_region(&d, 0.95).unwrap();
        assert_eq!(region.len(), 1);
        let (lo, hi) = region[0];
        close(lo, 655.88, 0.5);
        close(hi, 728.6, 0.5);
        // density-cut property at interior boundaries
        let flo = d.density(lo).unwrap();
        let fhi = d.density(hi).unwrap();
        assert!((flo - fhi).abs() / flo.max(fhi) < 1e-4, "{flo} vs {fhi}");
        // enclosed mass
        close(d.cdf(hi).unwrap() - d.cdf(lo).unwrap(), 0.95, 1e-4);
    }

    #[test]
    fn normal_hpd_is_central_interval() {
        let d = Distribution::normal_precision(3.0, 4.0).unwrap();
        let region = hpd_region(&d, 0.9).unwrap();
        let (lo, hi) = region[0];
        close(lo, d.quantile(0.05).unwrap(), 1e-6);
        close(hi, d.quantile(0.95).unwrap(), 1e-6);
    }

    #[test]
    fn monotone_density_hpd_is_left_anchored() {
        let d = Distribution::gamma(1.0, 1.0).unwrap();
        let region = hpd_region(&d, 0.95).unwrap();
        let (lo, hi) = region[0];
        close(lo, 0.0, 1e-9);
        close(hi, 2.9957, 5e-4);
        // threshold-search oracle: no interval of equal mass is shorter
        for start in [0.001, 0.005, 0.01, 0.04] {
            let end = d.quantile(0.95 + d.cdf(start).unwrap()).unwrap();
            assert!(end - start > hi - lo - 1e-9);
        }
    }

    #[test]
    fn hpd_beats_equal_tails_for_skewed_density() {
        let d = Distribution::gamma(3.0, 1.0).unwrap();
        let (lo, hi) = hpd_region(&d, 0.9).unwrap()[0];
        let eq_lo = d.quantile(0.05).unwrap();
        let eq_hi = d.quantile(0.95).unwrap();
        assert!(hi - lo < eq_hi - eq_lo);
    }

    #[test]
    fn hpd_rejects_bad_inputs() {
        let d = Distribution::poisson(3.0).unwrap();
        assert!(hpd_region(&d, 0.9).is_err());
        let d = Distribution::gamma(2.0, 1.0).unwrap();
        assert!(hpd_region(&d, 1.0).is_err());
        assert!(hpd_region(&d, 0.0).is_err());
    }

    #[test]
    fn uniform_hpd_left_anchored_length() {
        let d = Distribution::continuous_uniform(4.0).unwrap();
        let (lo, hi) = hpd_region(&d, 0.5).unwrap()[0];
        close(lo, 0.0, 0.0);
        close(hi, 2.0, 1e-12);
    }
}

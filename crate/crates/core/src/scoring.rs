//! Proper scoring rules (quadratic and logarithmic), logarithmic
//! discrepancy in discrete and continuous form, information measures,
//! and two classical approximation case studies.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::prob::ProbVector;
use crate::quad::integrate;
use crate::special::{ln_choose, ln_factorial};

/// Rule kind: the quadratic form A{2qⱼ − Σᵢqᵢ²} + Bⱼ or the local
/// logarithmic form A·log qⱼ + Bⱼ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Quadratic,
    Logarithmic,
}

/// A scoring rule with scale A > 0 and per-label offsets Bⱼ.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRule {
    kind: RuleKind,
    scale: f64,
    offsets: Vec<f64>,
}

impl ScoreRule {
    pub fn new(kind: RuleKind, scale: f64, offsets: Vec<f64>) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::invalid("scale", "must be > 0", scale));
        }
        if offsets.iter().any(|b| !b.is_finite()) {
            return Err(Error::Domain("offsets must be finite".into()));
        }
        Ok(ScoreRule {
            kind,
            scale,
            offsets,
        })
    }

    /// Same offset for every label.
    pub fn uniform_offset(kind: RuleKind, scale: f64, offset: f64, labels: usize) -> Result<Self> {
        Self::new(kind, scale, vec![offset; labels])
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    fn offset(&self, j: usize) -> f64 {
        self.offsets.get(j).copied().unwrap_or(0.0)
    }

    fn check_len(&self, q: &ProbVector) -> Result<()> {
        if !self.offsets.is_empty() && self.offsets.len() != q.len() {
            return Err(Error::Mismatch(format!(
                "{} offsets for {} labels",
                self.offsets.len(),
                q.len()
            )));
        }
        Ok(())
    }
}

/// Multiple-choice grading rule on `choices` options: quadratic with
/// A = m/(m−1), Bⱼ = −1/(m−1), so certainty on the truth scores 1, the
/// uniform report scores 0, and certainty on a wrong option scores
/// −(m+1)/(m−1).
pub fn exam_rule(choices: u64) -> Result<ScoreRule> {
    if choices < 2 {
        return Err(Error::Domain(format!(
            "an exam rule needs at least 2 options, got {choices}"
        )));
    }
    let m = choices as f64;
    ScoreRule::uniform_offset(
        RuleKind::Quadratic,
        m / (m - 1.0),
        -1.0 / (m - 1.0),
        choices as usize,
    )
}

/// Score of reporting `q` when the event at `occurred` happens.
pub fn score(rule: &ScoreRule, q: &ProbVector, occurred: &str) -> Result<f64> {
    rule.check_len(q)?;
    let j = q
        .index_of(occurred)
        .ok_or_else(|| Error::Mismatch(format!("unknown label `{occurred}`")))?;
    score_at(rule, q, j)
}

fn score_at(rule: &ScoreRule, q: &ProbVector, j: usize) -> Result<f64> {
    let qj = q.weight(j);
    match rule.kind {
        RuleKind::Quadratic => {
            let sum_sq: f64 = q.weights().iter().map(|w| w * w).sum();
            Ok(rule.scale * (2.0 * qj - sum_sq) + rule.offset(j))
        }
        RuleKind::Logarithmic => {
            if qj <= 0.0 {
                return Err(Error::Domain(format!(
                    "logarithmic score undefined: reported probability of `{}` is 0",
                    q.labels()[j]
                )));
            }
            Ok(rule.scale * qj.ln() + rule.offset(j))
        }
    }
}

/// Expected score Σⱼ u(q, Eⱼ) pⱼ of reporting `q` when `p` holds.
pub fn expected_score(rule: &ScoreRule, q: &ProbVector, p: &ProbVector) -> Result<f64> {
    q.same_partition(p)?;
    rule.check_len(q)?;
    let mut total = 0.0;
    for j in 0..q.len() {
        if p.weight(j) == 0.0 {
            continue;
        }
        total += score_at(rule, q, j)? * p.weight(j);
    }
    Ok(total)
}

/// Logarithmic discrepancy δ(q|p) = Σⱼ pⱼ log(pⱼ/qⱼ).
///
/// Zero-probability handling: pⱼ = 0 contributes 0 (limit convention);
/// pⱼ > 0 with qⱼ = 0 is an error, never an infinite value.
pub fn log_discrepancy(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    p.same_partition(q)?;
    let mut total = 0.0;
    for j in 0..p.len() {
        let pj = p.weight(j);
        if pj == 0.0 {
            continue;
        }
        let qj = q.weight(j);
        if qj == 0.0 {
            return Err(Error::Domain(format!(
                "approximation assigns probability 0 to `{}` which has positive probability",
                p.labels()[j]
            )));
        }
        total += pj * (pj / qj).ln();
    }
    Ok(total.max(0.0))
}

/// Continuous logarithmic discrepancy δ(q|p) = ∫ p log(p/q), integrated
/// adaptively over the central 1 − 2e−12 quantile range of `p`.
pub fn log_discrepancy_density(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.is_discrete() || q.is_discrete() {
        return Err(Error::Unsupported(
            "continuous discrepancy requires continuous distributions".into(),
        ));
    }
    let lo = p.quantile(1e-12)?;
    let hi = p.quantile(1.0 - 1e-12)?;
    let v = integrate(
        |x| {
            let lp = p.log_density(x).unwrap_or(f64::NEG_INFINITY);
            if lp == f64::NEG_INFINITY {
                return 0.0;
            }
            let lq = q.log_density(x).unwrap_or(f64::NEG_INFINITY);
            lp.exp() * (lp - lq)
        },
        lo,
        hi,
        1e-8,
    )?;
    Ok(v.max(0.0))
}

/// Discrepancy of approximating a binomial(n, θ) by a Poisson with the
/// same mean, in closed form:
/// δ = Σ_{k=2..n} log k + n[(1−θ)log(1−θ) + θ(1 − log n)] − φ(n, θ),
/// with φ(n, θ) = E[log((n−X)!)] = θⁿ Σ_{k=2..n} log(k!) C(n,k) (1/θ−1)ᵏ.
pub fn binomial_poisson_discrepancy(n: u64, theta: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta must be in (0,1), got {theta}")));
    }
    let nf = n as f64;
    let log_sum: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    // φ in expectation form, summed in a numerically safe way
    let mut phi = 0.0;
    for k in 2..=n {
        let weight =
            (ln_choose(n, k) + (nf - k as f64) * theta.ln() + k as f64 * (1.0 - theta).ln()).exp();
        phi += ln_factorial(k) * weight;
    }
    let v = log_sum + nf * ((1.0 - theta) * (1.0 - theta).ln() + theta * (1.0 - nf.ln())) - phi;
    Ok(v.max(0.0))
}

/// The normal distribution minimizing the continuous discrepancy from a
/// target with mean `m` and variance `v`: mean m, precision 1/v.
pub fn best_normal_approx(mean: f64, variance: f64) -> Result<Distribution> {
    if !(variance > 0.0) {
        return Err(Error::invalid("variance", "must be > 0", variance));
    }
    Distribution::normal_precision(mean, 1.0 / variance)
}

/// Information carried by observed data about a partition: the
/// discrepancy of the prior as an approximation of the posterior,
/// I(D|p₀) = Σⱼ P(Eⱼ|D) log(P(Eⱼ|D)/P(Eⱼ)).
pub fn info_of_data(prior: &ProbVector, posterior: &ProbVector) -> Result<f64> {
    if !prior.strictly_positive() {
        return Err(Error::Domain(
            "prior must be strictly positive on the partition".into(),
        ));
    }
    log_discrepancy(posterior, prior)
}

/// One experiment outcome: its marginal probability and the posterior it
/// induces.
#[derive(Debug, Clone)]
pub struct OutcomePosterior {
    pub marginal: f64,
    pub posterior: ProbVector,
}

/// Expected information of an experiment: Σᵢ I(Dᵢ|p₀) P(Dᵢ).
pub fn expected_info_of_experiment(
    prior: &ProbVector,
    outcomes: &[OutcomePosterior],
) -> Result<f64> {
    let marginals: Vec<f64> = outcomes.iter().map(|o| o.marginal).collect();
    ProbVector::from_weights(marginals)?;
    let mut total = 0.0;
    for o in outcomes {
        total += info_of_data(prior, &o.posterior)? * o.marginal;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn pv(weights: Vec<f64>) -> ProbVector {
        ProbVector::from_weights(weights).unwrap()
    }

    #[test]
    fn certainty_scores_one_with_unit_quadratic() {
        let rule = ScoreRule::uniform_offset(RuleKind::Quadratic, 1.0, 0.0, 2).unwrap();
        let q = pv(vec![1.0, 0.0]);
        close(score(&rule, &q, "0").unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn exam_rule_canonical_patterns() {
        let rule = exam_rule(5).unwrap();
        close(rule.scale(), 1.25, 1e-15);
        close(rule.offsets()[0], -0.25, 1e-15);
        let truth = "a";
        let labels = vec!["a", "b", "c", "d", "e"];
        // full confidence on the truth
        let q = ProbVector::new(labels.clone(), vec![1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        close(score(&rule, &q, truth).unwrap(), 1.0, 1e-12);
        // admitted ignorance
        let q = ProbVector::new(labels.clone(), vec![0.2; 5]).unwrap();
        close(score(&rule, &q, truth).unwrap(), 0.0, 1e-12);
        // full confidence on a wrong option: −(m+1)/(m−1)
        let q = ProbVector::new(labels.clone(), vec![0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        close(score(&rule, &q, truth).unwrap(), -1.5, 1e-12);
        // half on two options including the truth: (m−2)/(2(m−1))
        let q = ProbVector::new(labels.clone(), vec![0.5, 0.5, 0.0, 0.0, 0.0]).unwrap();
        close(score(&rule, &q, truth).unwrap(), 0.375, 1e-12);
    }

    #[test]
    fn exam_rule_edge_cases() {
        assert!(exam_rule(1).is_err());
        let rule = exam_rule(2).unwrap();
        let q = ProbVector::new(vec!["a", "b"], vec![0.5, 0.5]).unwrap();
        close(score(&rule, &q, "a").unwrap(), 0.0, 1e-12);
        let rule = exam_rule(4).unwrap();
        let q = ProbVector::new(vec!["a", "b", "c", "d"], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        close(score(&rule, &q, "a").unwrap(), 1.0, 1e-12);
    }

    #[test]
    fn quadratic_forms_are_equivalent() {
        // A{2qⱼ − Σᵢqᵢ²} + Bⱼ == A{1 − Σᵢ(qᵢ − 1[i=j])²} + Bⱼ pointwise
        let q = pv(vec![0.1, 0.3, 0.6]);
        let a = 1.7;
        let b = [0.2, -0.1, 0.05];
        let rule = ScoreRule::new(RuleKind::Quadratic, a, b.to_vec()).unwrap();
        for j in 0..3 {
            let penalty: f64 = q
                .weights()
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let e = if i == j { 1.0 } else { 0.0 };
                    (w - e) * (w - e)
                })
                .sum();
            let alt = a * (1.0 - penalty) + b[j];
            close(score_at(&rule, &q, j).unwrap(), alt, 1e-12);
        }
    }

    #[test]
    fn logarithmic_zero_probability_is_error_not_infinity() {
        let rule = ScoreRule::uniform_offset(RuleKind::Logarithmic, 1.0, 0.0, 2).unwrap();
        let q = pv(vec![1.0, 0.0]);
        assert!(score(&rule, &q, "1").is_err());
    }

    #[test]
    fn expected_log_score_closed_case() {
        let rule = ScoreRule::uniform_offset(RuleKind::Logarithmic, 1.0, 0.0, 2).unwrap();
        let p = pv(vec![0.5, 0.5]);
        close(expected_score(&rule, &p, &p).unwrap(), -(2f64.ln()), 1e-14);
    }

    #[test]
    fn degenerate_truth_reduces_to_plain_score() {
        let rule = exam_rule(3).unwrap();
        let q = pv(vec![0.2, 0.5, 0.3]);
        let p = pv(vec![0.0, 1.0, 0.0]);
        close(
            expected_score(&rule, &q, &p).unwrap(),
            score(&rule, &q, "1").unwrap(),
            1e-14,
        );
    }

    #[test]
    fn quadratic_rule_is_proper_on_simplex_grid() {
        let rule = ScoreRule::uniform_offset(RuleKind::Quadratic, 1.0, 0.0, 3).unwrap();
        assert_proper(&rule);
    }

    #[test]
    fn logarithmic_rule_is_proper_on_simplex_grid() {
        let rule = ScoreRule::uniform_offset(RuleKind::Logarithmic, 1.0, 0.0, 3).unwrap();
        assert_proper(&rule);
    }

    /// Truthful reporting maximizes the expected score at every grid
    /// point of the 3-simplex (step 0.05).
    fn assert_proper(rule: &ScoreRule) {
        let grid = simplex_grid(20);
        for p in &grid {
            if matches!(rule.kind(), RuleKind::Logarithmic) && p.iter().any(|w| *w == 0.0) {
                continue; // log rule attains its sup only at interior truth
            }
            let pv_p = pv(p.clone());
            let truthful = expected_score(rule, &pv_p, &pv_p).unwrap();
            for q in &grid {
                if matches!(rule.kind(), RuleKind::Logarithmic) && q.iter().any(|w| *w == 0.0) {
                    continue;
                }
                let pv_q = pv(q.clone());
                let reported = expected_score(rule, &pv_q, &pv_p).unwrap();
                assert!(
                    reported <= truthful + 1e-12,
                    "misreport {q:?} beats truth {p:?}"
                );
            }
        }
    }

    fn simplex_grid(steps: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let k = steps - i - j;
                out.push(vec![
                    i as f64 / steps as f64,
                    j as f64 / steps as f64,
                    k as f64 / steps as f64,
                ]);
            }
        }
        out
    }

    #[test]
    fn log_rule_expected_loss_identity() {
        // ū(p) − ū(q) = A Σ pⱼ log(pⱼ/qⱼ)
        let rule = ScoreRule::uniform_offset(RuleKind::Logarithmic, 2.3, 0.7, 3).unwrap();
        let p = pv(vec![0.2, 0.5, 0.3]);
        let q = pv(vec![0.4, 0.4, 0.2]);
        let lhs = expected_score(&rule, &p, &p).unwrap() - expected_score(&rule, &q, &p).unwrap();
        let rhs = 2.3 * log_discrepancy(&p, &q).unwrap();
        close(lhs, rhs, 1e-10);
    }

    #[test]
    fn discrepancy_basics() {
        let p = pv(vec![0.2, 0.5, 0.3]);
        close(log_discrepancy(&p, &p).unwrap(), 0.0, 1e-15);
        let p2 = pv(vec![0.5, 0.5]);
        let q2 = pv(vec![0.25, 0.75]);
        let expected = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        close(log_discrepancy(&p2, &q2).unwrap(), expected, 1e-14);
        close(expected, 0.14384, 1e-5);
        // support violation
        let q0 = pv(vec![0.0, 1.0]);
        assert!(log_discrepancy(&p2, &q0).is_err());
        // but a zero in p is fine (0·log 0 = 0)
        assert!(log_discrepancy(&q0, &p2).unwrap() > 0.0);
    }

    #[test]
    fn symmetrized_discrepancy_fails_triangle_inequality() {
        let sym = |a: &ProbVector, b: &ProbVector| {
            log_discrepancy(a, b).unwrap() + log_discrepancy(b, a).unwrap()
        };
        let p = pv(vec![0.5, 0.5]);
        let q = pv(vec![0.9, 0.1]);
        let r = pv(vec![0.99, 0.01]);
        let direct = sym(&p, &r);
        let via = sym(&p, &q) + sym(&q, &r);
        assert!(
            direct > via,
            "triangle inequality unexpectedly holds: {direct} <= {via}"
        );
    }

    #[test]
    fn continuous_discrepancy_normal_closed_form() {
        // between normals with equal precision: δ = λ(μ₁−μ₂)²/2
        let p = Distribution::normal_precision(0.0, 2.0).unwrap();
        let q = Distribution::normal_precision(0.7, 2.0).unwrap();
        close(
            log_discrepancy_density(&p, &q).unwrap(),
            2.0 * 0.49 / 2.0,
            1e-7,
        );
        close(log_discrepancy_density(&p, &p).unwrap(), 0.0, 1e-10);
    }

    #[test]
    fn gamma_normal_approx_improves_with_shape() {
        // oracle: quadrature discrepancy at shapes 2, 8, 32
        let mut last = f64::INFINITY;
        for &shape in &[2.0, 8.0, 32.0] {
            let g = Distribution::gamma(shape, 1.0).unwrap();
            let m = g.moments().unwrap();
            let n = best_normal_approx(m.mean, m.variance).unwrap();
            let d = log_discrepancy_density(&g, &n).unwrap();
            assert!(d < last, "shape {shape}: {d} !< {last}");
            last = d;
        }
    }

    #[test]
    fn binomial_poisson_matches_direct_summation() {
        // two-term oracle at n = 1
        let theta = 0.5;
        let p0 = 0.5;
        let p1 = 0.5;
        let q0 = (-0.5f64).exp();
        let q1 = 0.5 * (-0.5f64).exp();
        let oracle = p0 * (p0 / q0).ln() + p1 * (p1 / q1).ln();
        close(
            binomial_poisson_discrepancy(1, theta).unwrap(),
            oracle,
            1e-12,
        );
        // richer oracle: direct summation at n = 5, θ = 0.1
        let direct = direct_binomial_poisson_kl(5, 0.1);
        close(binomial_poisson_discrepancy(5, 0.1).unwrap(), direct, 1e-10);
    }

    fn direct_binomial_poisson_kl(n: u64, theta: f64) -> f64 {
        let b = Distribution::binomial(n, theta).unwrap();
        let lam = n as f64 * theta;
        let mut total = 0.0;
        for k in 0..=n {
            let pk = b.density(k as f64).unwrap();
            let qk = (k as f64 * lam.ln() - lam - ln_factorial(k)).exp();
            total += pk * (pk / qk).ln();
        }
        total
    }

    #[test]
    fn binomial_poisson_decreasing_in_n_and_theta() {
        let d5 = binomial_poisson_discrepancy(5, 0.1).unwrap();
        let d50 = binomial_poisson_discrepancy(50, 0.1).unwrap();
        assert!(d50 < d5, "{d50} !< {d5}");
        let small = binomial_poisson_discrepancy(10, 1e-4).unwrap();
        assert!(small < 1e-4, "θ→0 should vanish, got {small}");
        assert!(small >= 0.0);
    }

    #[test]
    fn best_normal_approx_cases() {
        let target = Distribution::gamma(4.0, 2.0).unwrap();
        let m = target.moments().unwrap();
        let approx = best_normal_approx(m.mean, m.variance).unwrap();
        assert_eq!(approx, Distribution::normal_precision(2.0, 1.0).unwrap());
        // a normal target is its own best approximation
        let n = Distribution::normal_precision(1.5, 3.0).unwrap();
        let nm = n.moments().unwrap();
        assert_eq!(best_normal_approx(nm.mean, nm.variance).unwrap(), n);
        close(
            log_discrepancy_density(&n, &best_normal_approx(nm.mean, nm.variance).unwrap())
                .unwrap(),
            0.0,
            1e-10,
        );
    }

    #[test]
    fn best_normal_is_grid_argmin_of_discrepancy() {
        // grid-search oracle over (mean, precision) for a Gamma target
        let target = Distribution::gamma(8.0, 2.0).unwrap();
        let m = target.moments().unwrap();
        let best = log_discrepancy_density(&target, &best_normal_approx(m.mean, m.variance).unwrap())
            .unwrap();
        for dm in [-0.4, -0.2, 0.2, 0.4] {
            for dl in [0.6, 0.8, 1.25, 1.6] {
                let cand =
                    Distribution::normal_precision(m.mean + dm, dl / m.variance).unwrap();
                let d = log_discrepancy_density(&target, &cand).unwrap();
                assert!(d >= best - 1e-9, "({dm},{dl}): {d} < {best}");
            }
        }
    }

    #[test]
    fn mixture_moment_match() {
        // ½N(−1,1) + ½N(1,1) has mean 0, variance 2
        let comp1 = Distribution::normal_precision(-1.0, 1.0).unwrap();
        let comp2 = Distribution::normal_precision(1.0, 1.0).unwrap();
        let mean = 0.0;
        let ex2 = 0.5 * (1.0 + 1.0) + 0.5 * (1.0 + 1.0);
        let var = ex2 - mean * mean;
        let approx = best_normal_approx(mean, var).unwrap();
        assert_eq!(approx, Distribution::normal_precision(0.0, 0.5).unwrap());
        // quadrature oracle: the moment-matched normal beats perturbations
        let mix_density = |x: f64| {
            0.5 * comp1.density(x).unwrap() + 0.5 * comp2.density(x).unwrap()
        };
        let kl_to = |cand: &Distribution| {
            integrate(
                |x| {
                    let p = mix_density(x);
                    if p <= 0.0 {
                        0.0
                    } else {
                        p * (p.ln() - cand.log_density(x).unwrap())
                    }
                },
                -12.0,
                12.0,
                1e-9,
            )
            .unwrap()
        };
        let best = kl_to(&approx);
        for cand in [
            Distribution::normal_precision(0.3, 0.5).unwrap(),
            Distribution::normal_precision(0.0, 0.8).unwrap(),
            Distribution::normal_precision(-0.2, 0.4).unwrap(),
        ] {
            assert!(kl_to(&cand) > best);
        }
    }

    #[test]
    fn info_of_data_basics() {
        let prior = pv(vec![0.375, 0.625]);
        close(info_of_data(&prior, &prior).unwrap(), 0.0, 1e-15);
        // the information is strictly positive whenever they differ
        let post = pv(vec![0.25, 0.75]);
        assert!(info_of_data(&prior, &post).unwrap() > 0.0);
        // prior must be strictly positive
        let degenerate = pv(vec![1.0, 0.0]);
        assert!(info_of_data(&degenerate, &post).is_err());
    }

    #[test]
    fn coin_information_limits() {
        // prior predictive (sol, aguila) = (½ − α/4, ½ + α/4) at α = ½;
        // long-run posteriors (¼, ¾) for the loaded coin and (½, ½) for
        // the fair one
        let prior = pv(vec![0.375, 0.625]);
        let loaded = pv(vec![0.25, 0.75]);
        close(
            info_of_data(&prior, &loaded).unwrap(),
            0.03537489,
            1e-6,
        );
        let fair = pv(vec![0.5, 0.5]);
        close(info_of_data(&prior, &fair).unwrap(), 0.03226926, 1e-6);
    }

    #[test]
    fn expected_info_of_coin_experiment() {
        // one toss with a uniform grid prior on {¾, ½}: outcomes x ∈ {1, 0}
        // with marginals 0.625/0.375 and parameter posteriors (0.6, 0.4)
        // and (⅓, ⅔)
        let prior = pv(vec![0.5, 0.5]);
        let outcomes = vec![
            OutcomePosterior {
                marginal: 0.625,
                posterior: pv(vec![0.6, 0.4]),
            },
            OutcomePosterior {
                marginal: 0.375,
                posterior: pv(vec![1.0 / 3.0, 2.0 / 3.0]),
            },
        ];
        let got = expected_info_of_experiment(&prior, &outcomes).unwrap();
        let oracle = 0.625 * info_of_data(&prior, &outcomes[0].posterior).unwrap()
            + 0.375 * info_of_data(&prior, &outcomes[1].posterior).unwrap();
        close(got, oracle, 1e-15);
        assert!(got > 0.0);
    }

    #[test]
    fn null_experiment_has_zero_information() {
        let prior = pv(vec![0.3, 0.7]);
        let outcomes = vec![
            OutcomePosterior {
                marginal: 0.5,
                posterior: prior.clone(),
            },
            OutcomePosterior {
                marginal: 0.5,
                posterior: prior.clone(),
            },
        ];
        close(
            expected_info_of_experiment(&prior, &outcomes).unwrap(),
            0.0,
            1e-15,
        );
    }

    #[test]
    fn refinement_carries_more_information() {
        // a mean-preserving refinement of the posteriors increases the
        // expected information
        let prior = pv(vec![0.4, 0.6]);
        let coarse = vec![
            OutcomePosterior {
                marginal: 0.5,
                posterior: pv(vec![0.5, 0.5]),
            },
            OutcomePosterior {
                marginal: 0.5,
                posterior: pv(vec![0.3, 0.7]),
            },
        ];
        let fine = vec![
            OutcomePosterior {
                marginal: 0.5,
                posterior: pv(vec![0.7, 0.3]),
            },
            OutcomePosterior {
                marginal: 0.5,
                posterior: pv(vec![0.1, 0.9]),
            },
        ];
        let i_coarse = expected_info_of_experiment(&prior, &coarse).unwrap();
        let i_fine = expected_info_of_experiment(&prior, &fine).unwrap();
        assert!(i_fine > i_coarse);
    }
}

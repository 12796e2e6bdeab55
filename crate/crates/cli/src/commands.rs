//! Maps spec blocks plus flags onto library calls and builds reports.

use credence::conjugate::{ConjugateModel, GridPrior, Likelihood, SampleSummary};
use credence::decision::{DecisionProblem, Experiment, TreeNode};
use credence::dist::Distribution;
use credence::elicit::{Constraint, ElicitFamily};
use credence::inference::{HypothesisPartition, Region};
use credence::prob::ProbVector;
use credence::scoring::{OutcomePosterior, RuleKind, ScoreRule};
use credence::EstimationUtility;

use crate::ingest::read_single_column;
use crate::report::{format_number, Report};
use crate::spec::*;

/// Failures split by exit code: schema/usage problems (2) vs numeric or
/// domain errors from the engine (3).
#[derive(Debug)]
pub enum CliError {
    Schema(Vec<String>),
    Numeric(credence::Error),
}

impl From<credence::Error> for CliError {
    fn from(e: credence::Error) -> Self {
        CliError::Numeric(e)
    }
}

impl CliError {
    fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(vec![msg.into()])
    }
}

type CmdResult = Result<Report, CliError>;

/// Either raw observations or just their sufficient statistics.
enum LoadedData {
    Values(Vec<f64>),
    Summary(SampleSummary),
}

impl LoadedData {
    fn summary(&self) -> SampleSummary {
        match self {
            LoadedData::Values(v) => SampleSummary::from_data(v).expect("finite values"),
            LoadedData::Summary(s) => *s,
        }
    }
}

fn build_likelihood(spec: &LikelihoodSpec) -> Result<Likelihood, CliError> {
    Ok(match spec.family.to_lowercase().as_str() {
        "bernoulli" => Likelihood::Bernoulli,
        "binomial" => Likelihood::Binomial {
            trials: spec.trials.unwrap(),
        },
        "poisson" => Likelihood::Poisson,
        "geometric" => Likelihood::Geometric,
        "exponential" => Likelihood::Exponential,
        "uniform" => Likelihood::Uniform,
        "normal_known_precision" => Likelihood::NormalKnownPrecision {
            precision: spec.precision.unwrap(),
        },
        "normal_known_mean" => Likelihood::NormalKnownMean {
            mean: spec.mean.unwrap(),
        },
        "normal" => Likelihood::NormalBoth,
        other => return Err(CliError::schema(format!("unknown likelihood `{other}`"))),
    })
}

fn build_distribution(family: &str, params: &[f64]) -> Result<Distribution, CliError> {
    let need = |n: usize| -> Result<(), CliError> {
        if params.len() != n {
            Err(CliError::schema(format!(
                "family `{family}` takes {n} parameters, got {}",
                params.len()
            )))
        } else {
            Ok(())
        }
    };
    let d = match family.to_lowercase().as_str() {
        "beta" => {
            need(2)?;
            Distribution::beta(params[0], params[1])?
        }
        "gamma" => {
            need(2)?;
            Distribution::gamma(params[0], params[1])?
        }
        "normal" => {
            need(2)?;
            Distribution::normal_precision(params[0], params[1])?
        }
        "pareto" => {
            need(2)?;
            Distribution::pareto(params[0], params[1])?
        }
        "uniform" => {
            need(1)?;
            Distribution::continuous_uniform(params[0])?
        }
        "poisson" => {
            need(1)?;
            Distribution::poisson(params[0])?
        }
        "poisson_gamma" => {
            need(3)?;
            Distribution::poisson_gamma(params[0], params[1], params[2])?
        }
        "normal_gamma" => {
            need(4)?;
            Distribution::normal_gamma(params[0], params[1], params[2], params[3])?
        }
        other => {
            return Err(CliError::schema(format!(
                "unknown distribution family `{other}`"
            )))
        }
    };
    Ok(d)
}

fn load_data(
    spec: &AnalysisSpec,
    model: &ModelBlock,
    data_override: Option<&str>,
) -> Result<Option<LoadedData>, CliError> {
    let from_path = |path: &str| -> Result<LoadedData, CliError> {
        let resolved = spec.base_dir.join(path);
        let raw = std::fs::read_to_string(&resolved).map_err(|e| {
            CliError::schema(format!("cannot read data file {}: {e}", resolved.display()))
        })?;
        let values = read_single_column(&raw, path).map_err(CliError::schema)?;
        Ok(LoadedData::Values(values))
    };
    if let Some(path) = data_override {
        return Ok(Some(from_path(path)?));
    }
    match &model.data {
        None => Ok(None),
        Some(DataSpec::Path(path)) => Ok(Some(from_path(path)?)),
        Some(DataSpec::Values(values)) => {
            if values.iter().any(|v| !v.is_finite()) {
                return Err(CliError::schema("inline data contains non-finite values"));
            }
            Ok(Some(LoadedData::Values(values.clone())))
        }
        Some(DataSpec::Summary { n, sum, sum_sq, max }) => Ok(Some(LoadedData::Summary(
            SampleSummary {
                n: *n,
                sum: *sum,
                sum_sq: *sum_sq,
                max: *max,
            },
        ))),
    }
}

fn constraint_from_spec(c: &ConstraintSpec) -> Constraint {
    if let Some(m) = c.mean {
        Constraint::Mean(m)
    } else if let Some(m) = c.mode {
        Constraint::Mode(m)
    } else if let Some(q) = &c.quantile {
        Constraint::Quantile {
            level: q.level,
            value: q.value,
        }
    } else {
        let im = c.interval_mass.as_ref().unwrap();
        Constraint::IntervalMass {
            lo: im.lo,
            hi: im.hi,
            mass: im.mass,
        }
    }
}

fn elicit_family(name: &str) -> Result<ElicitFamily, CliError> {
    Ok(match name.to_lowercase().as_str() {
        "beta" => ElicitFamily::Beta,
        "gamma" => ElicitFamily::Gamma,
        "normal" => ElicitFamily::NormalPrecision,
        other => return Err(CliError::schema(format!("cannot elicit family `{other}`"))),
    })
}

/// The model's prior, resolved: a conjugate parametric prior, the
/// non-informative rule, or a finite grid.
enum ResolvedPrior {
    Parametric(Distribution),
    Jeffreys,
    Grid(GridPrior),
}

fn resolve_prior(model: &ModelBlock, force_jeffreys: bool) -> Result<ResolvedPrior, CliError> {
    if force_jeffreys {
        return Ok(ResolvedPrior::Jeffreys);
    }
    let prior = &model.prior;
    if let Some(grid) = &prior.grid {
        return Ok(ResolvedPrior::Grid(GridPrior::new(
            grid.support.clone(),
            grid.weights.clone(),
        )?));
    }
    if let Some(el) = &prior.elicit {
        let constraints: Vec<Constraint> = el.constraints.iter().map(constraint_from_spec).collect();
        let fit = credence::elicit(elicit_family(&el.family)?, &constraints)?;
        return Ok(ResolvedPrior::Parametric(fit.distribution));
    }
    let family = prior.family.as_deref().unwrap_or_default();
    if family.eq_ignore_ascii_case("jeffreys") {
        return Ok(ResolvedPrior::Jeffreys);
    }
    Ok(ResolvedPrior::Parametric(build_distribution(
        family,
        prior.params.as_deref().unwrap_or(&[]),
    )?))
}

fn describe(d: &Distribution, precision: usize) -> String {
    let params: Vec<String> = d
        .params()
        .iter()
        .map(|p| format_number(*p, precision))
        .collect();
    format!("{}({})", d.family_name(), params.join(", "))
}

fn push_distribution(report: &mut Report, key: &str, d: &Distribution, precision: usize) {
    report.text(key, describe(d, precision));
    for (name, value) in d.param_names().iter().zip(d.params()) {
        report.num(format!("{key}.{name}"), value);
    }
    if let Ok(m) = d.moments() {
        report.num(format!("{key}.mean"), m.mean);
        report.num(format!("{key}.variance"), m.variance);
    }
}

/// The posterior distribution of the parameter, whichever prior route
/// the model takes (grid priors are handled separately by callers).
fn parametric_posterior(
    likelihood: &Likelihood,
    prior: &ResolvedPrior,
    data: &Option<LoadedData>,
) -> Result<Distribution, CliError> {
    let summary = data
        .as_ref()
        .map(|d| d.summary())
        .unwrap_or_else(SampleSummary::empty);
    match prior {
        ResolvedPrior::Parametric(p) => {
            let model = ConjugateModel::new(*likelihood, p.clone())?;
            Ok(model.posterior(&summary)?)
        }
        ResolvedPrior::Jeffreys => Ok(credence::jeffreys_posterior(likelihood, &summary)?),
        ResolvedPrior::Grid(_) => Err(CliError::schema(
            "this operation needs a parametric prior, not a grid",
        )),
    }
}

pub fn run_update(
    spec: &AnalysisSpec,
    data_override: Option<&str>,
    force_jeffreys: bool,
    precision: usize,
) -> CmdResult {
    let model = require_model(spec)?;
    let likelihood = build_likelihood(&model.likelihood)?;
    let data = load_data(spec, model, data_override)?;
    let prior = resolve_prior(model, force_jeffreys)?;
    let mut report = Report::new();
    report.text("likelihood", likelihood.name());

    match &prior {
        ResolvedPrior::Grid(grid) => {
            let values = match &data {
                Some(LoadedData::Values(v)) => v.clone(),
                Some(LoadedData::Summary(_)) => {
                    return Err(CliError::schema(
                        "grid priors need raw observations, not a summary",
                    ))
                }
                None => Vec::new(),
            };
            report.text("prior", grid_text(grid, precision));
            report.num("n", values.len() as f64);
            let post = credence::grid_posterior(&grid.clone(), &likelihood, &values)?;
            for (theta, w) in post.support().iter().zip(post.weights()) {
                report.num(
                    format!("posterior.theta={}", format_number(*theta, precision)),
                    *w,
                );
            }
        }
        ResolvedPrior::Jeffreys => {
            let improper = credence::jeffreys_prior(&likelihood)?;
            report.text(
                "prior",
                format!(
                    "noninformative: kernel {} ({})",
                    improper.kernel(),
                    if improper.proper() { "proper" } else { "improper" }
                ),
            );
            let summary = data
                .as_ref()
                .map(|d| d.summary())
                .unwrap_or_else(SampleSummary::empty);
            report.num("n", summary.n as f64);
            report.num("sum", summary.sum);
            let post = credence::jeffreys_posterior(&likelihood, &summary)?;
            push_distribution(&mut report, "posterior", &post, precision);
        }
        ResolvedPrior::Parametric(p) => {
            report.text("prior", describe(p, precision));
            let summary = data
                .as_ref()
                .map(|d| d.summary())
                .unwrap_or_else(SampleSummary::empty);
            report.num("n", summary.n as f64);
            report.num("sum", summary.sum);
            let model = ConjugateModel::new(likelihood, p.clone())?;
            let post = model.posterior(&summary)?;
            push_distribution(&mut report, "posterior", &post, precision);
        }
    }
    Ok(report)
}

fn grid_text(grid: &GridPrior, precision: usize) -> String {
    let pts: Vec<String> = grid
        .support()
        .iter()
        .zip(grid.weights())
        .map(|(t, w)| {
            format!(
                "{}:{}",
                format_number(*t, precision),
                format_number(*w, precision)
            )
        })
        .collect();
    format!("grid{{{}}}", pts.join(", "))
}

pub fn run_predict(
    spec: &AnalysisSpec,
    data_override: Option<&str>,
    at: Option<f64>,
    draws: usize,
    seed: u64,
    precision: usize,
) -> CmdResult {
    let model = require_model(spec)?;
    let likelihood = build_likelihood(&model.likelihood)?;
    let data = load_data(spec, model, data_override)?;
    let prior = resolve_prior(model, false)?;
    let mut report = Report::new();

    if let ResolvedPrior::Grid(grid) = &prior {
        let posterior = match &data {
            Some(LoadedData::Values(v)) => credence::grid_posterior(grid, &likelihood, v)?,
            Some(LoadedData::Summary(_)) => {
                return Err(CliError::schema(
                    "grid priors need raw observations, not a summary",
                ))
            }
            None => grid.clone(),
        };
        let pred = credence::grid_predictive(&posterior, &likelihood)?;
        report.text("predictive", "finite mixture over grid");
        for (label, w) in pred.labels().iter().zip(pred.weights()) {
            report.num(format!("p({label})"), *w);
        }
        if pred.len() == 2 {
            // fair-bet ratio: stake on outcome 0 per unit staked on 1
            report.num("fair_bet_ratio", pred.weight(1) / pred.weight(0));
        }
        return Ok(report);
    }

    let summary = data
        .as_ref()
        .map(|d| d.summary())
        .unwrap_or_else(SampleSummary::empty);
    let predictive = match &prior {
        ResolvedPrior::Parametric(p) => {
            let m = ConjugateModel::new(likelihood, p.clone())?;
            if summary.n == 0 {
                m.prior_predictive()?
            } else {
                m.posterior_predictive(&summary)?
            }
        }
        ResolvedPrior::Jeffreys => {
            let post = credence::jeffreys_posterior(&likelihood, &summary)?;
            let m = ConjugateModel::new(likelihood, post)?;
            m.prior_predictive()?
        }
        ResolvedPrior::Grid(_) => unreachable!(),
    };
    match &predictive {
        credence::Predictive::Closed(d) => push_distribution(&mut report, "predictive", d, precision),
        credence::Predictive::Numeric(_) => {
            report.text("predictive", predictive.describe());
            if let Ok(m) = predictive.moments() {
                report.num("predictive.mean", m.mean);
                report.num("predictive.variance", m.variance);
            }
        }
    }
    if let Some(x) = at {
        report.num(
            format!("density({})", format_number(x, precision)),
            predictive.density(x)?,
        );
    }
    if draws > 0 {
        let xs = predictive.sample(draws, seed)?;
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / (xs.len().max(2) - 1) as f64;
        report.num("sample.draws", draws as f64);
        report.num("sample.mean", mean);
        report.num("sample.sd", var.sqrt());
    }
    Ok(report)
}

pub fn run_estimate(
    spec: &AnalysisSpec,
    data_override: Option<&str>,
    utility: EstimationUtility,
    force_jeffreys: bool,
    precision: usize,
) -> CmdResult {
    let model = require_model(spec)?;
    let likelihood = build_likelihood(&model.likelihood)?;
    let data = load_data(spec, model, data_override)?;
    let prior = resolve_prior(model, force_jeffreys)?;
    let posterior = parametric_posterior(&likelihood, &prior, &data)?;
    let mut report = Report::new();
    push_distribution(&mut report, "posterior", &posterior, precision);
    report.text(
        "utility",
        match utility {
            EstimationUtility::Quadratic => "quadratic",
            EstimationUtility::Absolute => "absolute",
            EstimationUtility::RelativeQuadratic => "relative-quadratic",
        },
    );
    report.num("estimate", credence::point_estimate(&posterior, utility)?);
    Ok(report)
}

pub fn run_hpd(
    spec: &AnalysisSpec,
    data_override: Option<&str>,
    mass: f64,
    force_jeffreys: bool,
    precision: usize,
) -> CmdResult {
    let model = require_model(spec)?;
    let likelihood = build_likelihood(&model.likelihood)?;
    let data = load_data(spec, model, data_override)?;
    let prior = resolve_prior(model, force_jeffreys)?;
    let posterior = parametric_posterior(&likelihood, &prior, &data)?;
    let intervals = credence::hpd_region(&posterior, mass)?;
    let mut report = Report::new();
    push_distribution(&mut report, "posterior", &posterior, precision);
    report.num("mass", mass);
    for (i, (lo, hi)) in intervals.iter().enumerate() {
        let prefix = if intervals.len() == 1 {
            "interval".to_string()
        } else {
            format!("interval{}", i + 1)
        };
        report.num(format!("{prefix}.lo"), *lo);
        report.num(format!("{prefix}.hi"), *hi);
    }
    Ok(report)
}

pub fn run_test(
    spec: &AnalysisSpec,
    data_override: Option<&str>,
    force_jeffreys: bool,
    precision: usize,
) -> CmdResult {
    let model = require_model(spec)?;
    let hyp = model.hypotheses.as_ref().ok_or_else(|| {
        CliError::schema("`test` needs a hypotheses block in the model spec")
    })?;
    let likelihood = build_likelihood(&model.likelihood)?;
    let data = load_data(spec, model, data_override)?;
    let prior = resolve_prior(model, force_jeffreys)?;

    let target: Distribution = if hyp.target == "parameter" {
        parametric_posterior(&likelihood, &prior, &data)?
    } else {
        let summary = data
            .as_ref()
            .map(|d| d.summary())
            .unwrap_or_else(SampleSummary::empty);
        let predictive = match &prior {
            ResolvedPrior::Parametric(p) => {
                let m = ConjugateModel::new(likelihood, p.clone())?;
                m.posterior_predictive(&summary)?
            }
            ResolvedPrior::Jeffreys => {
                let post = credence::jeffreys_posterior(&likelihood, &summary)?;
                ConjugateModel::new(likelihood, post)?.prior_predictive()?
            }
            ResolvedPrior::Grid(_) => {
                return Err(CliError::schema(
                    "`test` on a predictive needs a parametric prior",
                ))
            }
        };
        match predictive {
            credence::Predictive::Closed(d) => d,
            credence::Predictive::Numeric(_) => {
                return Err(CliError::Numeric(credence::Error::Unsupported(
                    "predictive hypothesis testing needs a closed-form predictive".into(),
                )))
            }
        }
    };

    let mut regions = Vec::new();
    for r in &hyp.regions {
        regions.push(
            Region::new(
                r.label.clone(),
                r.lo.unwrap_or(f64::NEG_INFINITY),
                r.hi.unwrap_or(f64::INFINITY),
            )
            .map_err(CliError::Numeric)?,
        );
    }
    let partition = HypothesisPartition::new(regions)?;
    let utilities = match (&hyp.actions, &hyp.utilities) {
        (Some(a), Some(u)) => Some((a.clone(), u.clone())),
        _ => None,
    };
    let outcome = credence::contrast(
        &target,
        &partition,
        utilities.as_ref().map(|(a, u)| (a.as_slice(), u.as_slice())),
    )?;
    let mut report = Report::new();
    report.text("distribution", describe(&target, precision));
    for (label, w) in outcome
        .probabilities
        .labels()
        .iter()
        .zip(outcome.probabilities.weights())
    {
        report.num(format!("P({label})"), *w);
    }
    if utilities.is_some() {
        for (action, value) in &outcome.expected_utilities {
            report.num(format!("u({action})"), *value);
        }
    }
    report.text("choice", outcome.chosen.join(" ~ "));
    Ok(report)
}

pub fn run_decide(spec: &AnalysisSpec) -> CmdResult {
    let block = spec
        .decision
        .as_ref()
        .ok_or_else(|| CliError::schema("`decide` needs a decision block"))?;
    let problem = DecisionProblem::with_shared_probs(
        block.actions.clone(),
        block.states.clone(),
        block.utilities.clone(),
        block.probs.clone(),
    )?;
    let mut report = Report::new();
    for action in problem.actions() {
        report.num(format!("u({action})"), problem.expected_utility(action)?);
    }
    report.text("optimal", problem.optimal_actions().join(" ~ "));
    report.text("admissible", problem.admissible_actions().join(", "));
    if let Some(p) = &block.portfolio {
        let probs = ProbVector::from_weights(p.probs.clone())?;
        let opt =
            credence::optimal_portfolio_weight(&p.returns, &probs, p.risk_free, p.risk_aversion)?;
        report.num("portfolio.weight", opt.weight);
        report.num("portfolio.expected_utility", opt.expected_utility);
    }
    Ok(report)
}

pub fn run_voi(spec: &AnalysisSpec) -> CmdResult {
    let block = spec
        .decision
        .as_ref()
        .ok_or_else(|| CliError::schema("`voi` needs a decision block"))?;
    let exp_spec = block
        .experiment
        .as_ref()
        .ok_or_else(|| CliError::schema("`voi` needs an experiment in the decision block"))?;
    let problem = DecisionProblem::with_shared_probs(
        block.actions.clone(),
        block.states.clone(),
        block.utilities.clone(),
        block.probs.clone(),
    )?;
    let experiment = Experiment::new(exp_spec.outcomes.clone(), exp_spec.likelihoods.clone())?;
    let costs: Vec<f64> = match (&exp_spec.cost, &exp_spec.costs) {
        (Some(c), None) => vec![*c; exp_spec.outcomes.len()],
        (None, Some(cs)) => cs.clone(),
        (None, None) => vec![0.0; exp_spec.outcomes.len()],
        (Some(_), Some(_)) => unreachable!("validated"),
    };
    let mut report = Report::new();
    report.text("prior_optimal", problem.optimal_actions().join(" ~ "));
    report.num("evpi", problem.evpi()?);
    let prior = problem.shared_probs()?.clone();
    let marginals = credence::decision::outcome_marginals(&problem, &experiment)?;
    let mut mean_cost = 0.0;
    for (i, outcome) in exp_spec.outcomes.iter().enumerate() {
        report.num(format!("P({outcome})"), marginals[i]);
        let (posterior, _) = credence::chance_update(&prior, &experiment.outcome_likelihoods(i))?;
        for (label, w) in posterior.labels().iter().zip(posterior.weights()) {
            report.num(format!("P({label}|{outcome})"), *w);
        }
        report.num(
            format!("value({outcome})"),
            credence::value_of_data(&problem, &experiment, i, &costs)?,
        );
        mean_cost += costs[i] * marginals[i];
    }
    let value = credence::value_of_experiment(&problem, &experiment, &costs)?;
    report.num("value_of_experiment", value);
    report.num("bound", problem.evpi()? - mean_cost);
    Ok(report)
}

fn build_tree(node: &NodeSpec) -> TreeNode {
    if let Some(utility) = node.utility {
        TreeNode::Terminal { utility }
    } else if let Some(branches) = &node.decision {
        TreeNode::Decision {
            branches: branches
                .iter()
                .map(|b| (b.label.clone(), build_tree(&b.node)))
                .collect(),
        }
    } else {
        let branches = node.chance.as_ref().expect("validated node");
        TreeNode::Chance {
            branches: branches
                .iter()
                .map(|b| (b.label.clone(), build_tree(&b.node)))
                .collect(),
            probs: branches.iter().map(|b| b.prob).collect(),
        }
    }
}

pub fn run_tree(spec: &AnalysisSpec) -> CmdResult {
    let block = spec
        .tree
        .as_ref()
        .ok_or_else(|| CliError::schema("`tree` needs a tree block"))?;
    let solved = credence::solve_tree(&build_tree(&block.root))?;
    let mut report = Report::new();
    report.num("value", solved.value);
    for (path, choice) in &solved.policy {
        report.text(format!("policy.{path}"), choice.branches.join(" ~ "));
        report.num(format!("policy.{path}.value"), choice.value);
    }
    Ok(report)
}

pub fn run_elicit(spec: &AnalysisSpec, precision: usize) -> CmdResult {
    let block = spec
        .elicit
        .as_ref()
        .ok_or_else(|| CliError::schema("`elicit` needs an elicit block"))?;
    let constraints: Vec<Constraint> = block.constraints.iter().map(constraint_from_spec).collect();
    let fit = credence::elicit(elicit_family(&block.family)?, &constraints)?;
    let mut report = Report::new();
    push_distribution(&mut report, "prior", &fit.distribution, precision);
    for (i, r) in fit.residuals.iter().enumerate() {
        report.num(format!("residual.{}", i + 1), *r);
    }
    if let Some((lo, hi)) = fit.search_bracket {
        report.num("search.lo", lo);
        report.num("search.hi", hi);
    }
    Ok(report)
}

pub fn run_score(spec: &AnalysisSpec) -> CmdResult {
    let block = spec
        .scoring
        .as_ref()
        .ok_or_else(|| CliError::schema("`score` needs a scoring block"))?;
    let rule: ScoreRule = if let Some(m) = block.choices {
        credence::exam_rule(m)?
    } else {
        let r = block.rule.as_ref().expect("validated");
        let kind = if r.kind.eq_ignore_ascii_case("quadratic") {
            RuleKind::Quadratic
        } else {
            RuleKind::Logarithmic
        };
        ScoreRule::new(kind, r.scale, r.offsets.clone().unwrap_or_default())?
    };
    let labels: Vec<String> = match (&block.labels, block.choices) {
        (Some(l), _) => l.clone(),
        (None, Some(m)) => (1..=m).map(|i| i.to_string()).collect(),
        (None, None) => {
            return Err(CliError::schema(
                "scoring needs labels when no `choices` count is given",
            ))
        }
    };
    let responses: Vec<(String, Vec<f64>, String)> = if let Some(rs) = &block.responses {
        rs.iter()
            .map(|r| (r.question.clone(), r.report.clone(), r.correct.clone()))
            .collect()
    } else {
        let path = block.responses_csv.as_ref().expect("validated");
        let resolved = spec.base_dir.join(path);
        let raw = std::fs::read_to_string(&resolved).map_err(|e| {
            CliError::schema(format!("cannot read {}: {e}", resolved.display()))
        })?;
        parse_response_csv(&raw, labels.len())?
    };
    let mut report = Report::new();
    let mut total = 0.0;
    for (question, weights, correct) in &responses {
        if weights.len() != labels.len() {
            return Err(CliError::schema(format!(
                "question `{question}` reports {} probabilities for {} options",
                weights.len(),
                labels.len()
            )));
        }
        let q = ProbVector::new(labels.clone(), weights.clone())?;
        // accept a label or a 1-based option index
        let correct_label = if labels.contains(correct) {
            correct.clone()
        } else if let Ok(ix) = correct.parse::<usize>() {
            labels
                .get(ix.saturating_sub(1))
                .cloned()
                .ok_or_else(|| CliError::schema(format!("option index {ix} out of range")))?
        } else {
            return Err(CliError::schema(format!(
                "unknown correct option `{correct}` for question `{question}`"
            )));
        };
        let s = credence::score(&rule, &q, &correct_label)?;
        report.num(format!("score({question})"), s);
        total += s;
    }
    report.num("total", total);
    Ok(report)
}

fn parse_response_csv(
    raw: &str,
    options: usize,
) -> Result<Vec<(String, Vec<f64>, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != options + 2 {
            // tolerate one header line
            if lineno == 0 && fields.iter().skip(1).any(|f| f.parse::<f64>().is_err()) {
                continue;
            }
            return Err(CliError::schema(format!(
                "responses line {}: expected question,{options} probabilities,correct",
                lineno + 1
            )));
        }
        let probs: Result<Vec<f64>, _> = fields[1..=options].iter().map(|f| f.parse()).collect();
        match probs {
            Ok(p) => out.push((
                fields[0].to_string(),
                p,
                fields[options + 1].to_string(),
            )),
            Err(_) if lineno == 0 => continue, // header
            Err(e) => {
                return Err(CliError::schema(format!(
                    "responses line {}: {e}",
                    lineno + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::schema("responses file has no rows"));
    }
    Ok(out)
}

fn weights_to_probvector(w: &WeightsSpec) -> Result<ProbVector, CliError> {
    Ok(match &w.labels {
        Some(labels) => ProbVector::new(labels.clone(), w.weights.clone())?,
        None => ProbVector::from_weights(w.weights.clone())?,
    })
}

pub fn run_discrepancy(spec: &AnalysisSpec) -> CmdResult {
    let block = spec
        .discrepancy
        .as_ref()
        .ok_or_else(|| CliError::schema("`discrepancy` needs a discrepancy block"))?;
    let mut report = Report::new();
    if let Some(bp) = &block.binomial_poisson {
        report.num("n", bp.n as f64);
        report.num("theta", bp.theta);
        report.num(
            "discrepancy",
            credence::binomial_poisson_discrepancy(bp.n, bp.theta)?,
        );
        return Ok(report);
    }
    let p = block.p.as_ref().expect("validated");
    let q = block.q.as_ref().expect("validated");
    match (&p.weights, &q.weights) {
        (Some(_), Some(_)) => {
            let pv = weights_to_probvector(&WeightsSpec {
                weights: p.weights.clone().unwrap(),
                labels: p.labels.clone(),
            })?;
            let qv = weights_to_probvector(&WeightsSpec {
                weights: q.weights.clone().unwrap(),
                labels: q.labels.clone(),
            })?;
            report.num("discrepancy", credence::log_discrepancy(&pv, &qv)?);
        }
        (None, None) => {
            let pd = build_distribution(
                p.family.as_deref().unwrap_or_default(),
                p.params.as_deref().unwrap_or(&[]),
            )?;
            let qd = build_distribution(
                q.family.as_deref().unwrap_or_default(),
                q.params.as_deref().unwrap_or(&[]),
            )?;
            report.num("discrepancy", credence::log_discrepancy_density(&pd, &qd)?);
        }
        _ => {
            return Err(CliError::schema(
                "discrepancy p and q must both be weight vectors or both distributions",
            ))
        }
    }
    Ok(report)
}

pub fn run_info(spec: &AnalysisSpec) -> CmdResult {
    let block = spec
        .info
        .as_ref()
        .ok_or_else(|| CliError::schema("`info` needs an info block"))?;
    let prior = weights_to_probvector(&block.prior)?;
    let mut report = Report::new();
    if let Some(post) = &block.posterior {
        let posterior = weights_to_probvector(post)?;
        report.num("info", credence::info_of_data(&prior, &posterior)?);
        return Ok(report);
    }
    let outcomes = block.outcomes.as_ref().expect("validated");
    let mut parsed = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        let posterior = weights_to_probvector(&o.posterior)?;
        let label = o.label.clone().unwrap_or_else(|| format!("D{}", i + 1));
        report.num(format!("P({label})"), o.marginal);
        report.num(
            format!("info({label})"),
            credence::info_of_data(&prior, &posterior)?,
        );
        parsed.push(OutcomePosterior {
            marginal: o.marginal,
            posterior,
        });
    }
    report.num(
        "expected_info",
        credence::expected_info_of_experiment(&prior, &parsed)?,
    );
    Ok(report)
}

fn require_model(spec: &AnalysisSpec) -> Result<&ModelBlock, CliError> {
    spec.model
        .as_ref()
        .ok_or_else(|| CliError::schema("this command needs a model block"))
}

pub fn run_event(spec: &AnalysisSpec) -> CmdResult {
    let ev = spec
        .event
        .as_ref()
        .ok_or_else(|| CliError::schema("`update` on an event spec needs an event block"))?;
    let posterior =
        credence::event_posterior(ev.prior, ev.likelihood_if_true, ev.likelihood_if_false)?;
    let mut report = Report::new();
    report.num("prior", ev.prior);
    report.num("posterior", posterior);
    Ok(report)
}

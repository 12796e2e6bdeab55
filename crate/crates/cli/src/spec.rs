//! The declarative analysis file: schema, parsing and validation.
//!
//! A file declares exactly one analysis block (`model`, `event`,
//! `decision`, `tree`, `scoring`, `elicit`, `discrepancy` or `info`);
//! the subcommand selects the operation to run against it. Validation
//! reports every schema problem it finds, not just the first.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    pub model: Option<ModelBlock>,
    pub event: Option<EventBlock>,
    pub decision: Option<DecisionBlock>,
    pub tree: Option<TreeBlock>,
    pub scoring: Option<ScoringBlock>,
    pub elicit: Option<ElicitBlock>,
    pub discrepancy: Option<DiscrepancyBlock>,
    pub info: Option<InfoBlock>,
    /// Directory of the spec file, for resolving relative data paths.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub likelihood: LikelihoodSpec,
    pub prior: PriorSpec,
    pub data: Option<DataSpec>,
    pub hypotheses: Option<HypothesesSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LikelihoodSpec {
    pub family: String,
    /// Number of trials per observation (binomial).
    pub trials: Option<u64>,
    /// Known precision (normal with known precision).
    pub precision: Option<f64>,
    /// Known mean (normal with known mean).
    pub mean: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSpec {
    /// Family name, or "jeffreys" for the non-informative rule.
    pub family: Option<String>,
    pub params: Option<Vec<f64>>,
    /// Finite-support prior.
    pub grid: Option<GridSpec>,
    /// Fit the prior from constraints instead of giving parameters.
    pub elicit: Option<ElicitBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub support: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum DataSpec {
    /// Path to a single-column CSV, relative to the spec file.
    Path(String),
    /// Inline observations.
    Values(Vec<f64>),
    /// Pre-computed sufficient statistics.
    Summary {
        n: u64,
        sum: f64,
        #[serde(default)]
        sum_sq: f64,
        #[serde(default)]
        max: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesesSpec {
    /// "parameter" (posterior over θ) or "predictive" (next observation).
    pub target: String,
    pub regions: Vec<RegionSpec>,
    pub actions: Option<Vec<String>>,
    pub utilities: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub label: String,
    /// Lower bound (exclusive); −∞ when omitted.
    pub lo: Option<f64>,
    /// Upper bound (inclusive); +∞ when omitted.
    pub hi: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventBlock {
    pub prior: f64,
    pub likelihood_if_true: f64,
    pub likelihood_if_false: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionBlock {
    pub actions: Vec<String>,
    pub states: Vec<String>,
    pub utilities: Vec<Vec<f64>>,
    pub probs: Vec<f64>,
    pub experiment: Option<ExperimentSpec>,
    pub portfolio: Option<PortfolioSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub outcomes: Vec<String>,
    /// One row per state: P(outcome | state).
    pub likelihoods: Vec<Vec<f64>>,
    /// Constant cost, or per-outcome costs.
    pub cost: Option<f64>,
    pub costs: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortfolioSpec {
    pub returns: Vec<f64>,
    pub probs: Vec<f64>,
    pub risk_free: f64,
    pub risk_aversion: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeBlock {
    pub root: NodeSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub decision: Option<Vec<BranchSpec>>,
    pub chance: Option<Vec<ChanceBranchSpec>>,
    pub utility: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub label: String,
    pub node: NodeSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChanceBranchSpec {
    pub label: String,
    pub prob: f64,
    pub node: NodeSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoringBlock {
    /// Shortcut: multiple-choice rule on this many options.
    pub choices: Option<u64>,
    /// Explicit rule, alternative to `choices`.
    pub rule: Option<RuleSpec>,
    pub labels: Option<Vec<String>>,
    pub responses: Option<Vec<ResponseSpec>>,
    /// CSV with rows question,q1..qm,correct (label or 1-based index).
    pub responses_csv: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub kind: String,
    pub scale: f64,
    pub offsets: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseSpec {
    pub question: String,
    pub report: Vec<f64>,
    pub correct: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElicitBlock {
    pub family: String,
    pub constraints: Vec<ConstraintSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub mean: Option<f64>,
    pub mode: Option<f64>,
    pub quantile: Option<QuantileSpec>,
    pub interval_mass: Option<IntervalMassSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantileSpec {
    pub level: f64,
    pub value: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalMassSpec {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrepancyBlock {
    pub p: Option<DistOrWeights>,
    pub q: Option<DistOrWeights>,
    pub binomial_poisson: Option<BinomialPoissonSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinomialPoissonSpec {
    pub n: u64,
    pub theta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistOrWeights {
    pub family: Option<String>,
    pub params: Option<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoBlock {
    pub prior: WeightsSpec,
    pub posterior: Option<WeightsSpec>,
    pub outcomes: Option<Vec<OutcomeSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    pub weights: Vec<f64>,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeSpec {
    pub label: Option<String>,
    pub marginal: f64,
    pub posterior: WeightsSpec,
}

/// Parse and validate a spec file; schema problems are reported together.
pub fn parse_spec(path: &Path) -> Result<AnalysisSpec, Vec<String>> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| vec![format!("cannot read {}: {e}", path.display())])?;
    let mut spec: AnalysisSpec =
        serde_json::from_str(&raw).map_err(|e| vec![format!("malformed spec file: {e}")])?;
    spec.base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
    let problems = validate(&spec);
    if problems.is_empty() {
        Ok(spec)
    } else {
        Err(problems)
    }
}

const LIKELIHOOD_FAMILIES: &[&str] = &[
    "bernoulli",
    "binomial",
    "poisson",
    "geometric",
    "exponential",
    "uniform",
    "normal_known_precision",
    "normal_known_mean",
    "normal",
];

const PRIOR_FAMILIES: &[&str] = &[
    "beta",
    "gamma",
    "normal",
    "pareto",
    "normal_gamma",
    "jeffreys",
];

fn validate(spec: &AnalysisSpec) -> Vec<String> {
    let mut problems = Vec::new();
    let blocks = [
        spec.model.is_some(),
        spec.event.is_some(),
        spec.decision.is_some(),
        spec.tree.is_some(),
        spec.scoring.is_some(),
        spec.elicit.is_some(),
        spec.discrepancy.is_some(),
        spec.info.is_some(),
    ];
    let count = blocks.iter().filter(|b| **b).count();
    if count != 1 {
        problems.push(format!(
            "a spec file must declare exactly one analysis block, found {count}"
        ));
    }
    if let Some(model) = &spec.model {
        validate_model(model, &mut problems);
    }
    if let Some(event) = &spec.event {
        for (name, v) in [
            ("event.prior", event.prior),
            ("event.likelihood_if_true", event.likelihood_if_true),
            ("event.likelihood_if_false", event.likelihood_if_false),
        ] {
            if !(0.0..=1.0).contains(&v) {
                problems.push(format!("{name} must lie in [0,1], got {v}"));
            }
        }
    }
    if let Some(decision) = &spec.decision {
        validate_decision(decision, &mut problems);
    }
    if let Some(tree) = &spec.tree {
        validate_node(&tree.root, "tree.root", &mut problems);
    }
    if let Some(scoring) = &spec.scoring {
        validate_scoring(scoring, &mut problems);
    }
    if let Some(elicit) = &spec.elicit {
        validate_elicit(elicit, "elicit", &mut problems);
    }
    if let Some(d) = &spec.discrepancy {
        let has_pair = d.p.is_some() && d.q.is_some();
        if has_pair == d.binomial_poisson.is_some() {
            problems.push(
                "discrepancy needs either p and q, or binomial_poisson, not both".to_string(),
            );
        }
    }
    if let Some(info) = &spec.info {
        if info.posterior.is_some() == info.outcomes.is_some() {
            problems
                .push("info needs either a posterior or an outcomes list, not both".to_string());
        }
    }
    problems
}

fn validate_model(model: &ModelBlock, problems: &mut Vec<String>) {
    let family = model.likelihood.family.to_lowercase();
    if !LIKELIHOOD_FAMILIES.contains(&family.as_str()) {
        problems.push(format!(
            "model.likelihood.family `{family}` is not one of {LIKELIHOOD_FAMILIES:?}"
        ));
    }
    if family == "binomial" && model.likelihood.trials.is_none() {
        problems.push("model.likelihood: binomial requires `trials`".to_string());
    }
    if family == "normal_known_precision" && model.likelihood.precision.is_none() {
        problems.push("model.likelihood: normal_known_precision requires `precision`".to_string());
    }
    if family == "normal_known_mean" && model.likelihood.mean.is_none() {
        problems.push("model.likelihood: normal_known_mean requires `mean`".to_string());
    }

    let prior = &model.prior;
    let sources = [
        prior.family.is_some(),
        prior.grid.is_some(),
        prior.elicit.is_some(),
    ];
    if sources.iter().filter(|s| **s).count() != 1 {
        problems.push(
            "model.prior must give exactly one of: family (+params), grid, elicit".to_string(),
        );
    }
    if let Some(f) = &prior.family {
        let f = f.to_lowercase();
        if !PRIOR_FAMILIES.contains(&f.as_str()) {
            problems.push(format!(
                "model.prior.family `{f}` is not one of {PRIOR_FAMILIES:?}"
            ));
        }
        if f != "jeffreys" && prior.params.is_none() {
            problems.push(format!("model.prior: family `{f}` requires `params`"));
        }
    }
    if let Some(grid) = &prior.grid {
        if grid.support.len() != grid.weights.len() {
            problems.push(format!(
                "model.prior.grid: {} support points vs {} weights",
                grid.support.len(),
                grid.weights.len()
            ));
        }
    }
    if let Some(el) = &prior.elicit {
        validate_elicit(el, "model.prior.elicit", problems);
    }
    if let Some(h) = &model.hypotheses {
        if h.target != "parameter" && h.target != "predictive" {
            problems.push(format!(
                "model.hypotheses.target must be `parameter` or `predictive`, got `{}`",
                h.target
            ));
        }
        if h.regions.is_empty() {
            problems.push("model.hypotheses.regions must be nonempty".to_string());
        }
        match (&h.actions, &h.utilities) {
            (Some(actions), Some(utilities)) => {
                if utilities.len() != actions.len() {
                    problems.push(format!(
                        "model.hypotheses: {} utility rows for {} actions",
                        utilities.len(),
                        actions.len()
                    ));
                }
                for (i, row) in utilities.iter().enumerate() {
                    if row.len() != h.regions.len() {
                        problems.push(format!(
                            "model.hypotheses.utilities row {} has {} entries for {} regions",
                            i + 1,
                            row.len(),
                            h.regions.len()
                        ));
                    }
                }
            }
            (None, None) => {}
            _ => problems.push(
                "model.hypotheses: actions and utilities must be given together".to_string(),
            ),
        }
    }
}

fn validate_decision(block: &DecisionBlock, problems: &mut Vec<String>) {
    if block.utilities.len() != block.actions.len() {
        problems.push(format!(
            "decision: {} utility rows for {} actions",
            block.utilities.len(),
            block.actions.len()
        ));
    }
    for (i, row) in block.utilities.iter().enumerate() {
        if row.len() != block.states.len() {
            problems.push(format!(
                "decision.utilities row `{}` has {} entries for {} states",
                block
                    .actions
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| (i + 1).to_string()),
                row.len(),
                block.states.len()
            ));
        }
    }
    if block.probs.len() != block.states.len() {
        problems.push(format!(
            "decision: {} probabilities for {} states",
            block.probs.len(),
            block.states.len()
        ));
    }
    if let Some(exp) = &block.experiment {
        if exp.likelihoods.len() != block.states.len() {
            problems.push(format!(
                "decision.experiment: {} likelihood rows for {} states",
                exp.likelihoods.len(),
                block.states.len()
            ));
        }
        for (i, row) in exp.likelihoods.iter().enumerate() {
            if row.len() != exp.outcomes.len() {
                problems.push(format!(
                    "decision.experiment.likelihoods row {} has {} entries for {} outcomes",
                    i + 1,
                    row.len(),
                    exp.outcomes.len()
                ));
            }
        }
        if let Some(costs) = &exp.costs {
            if costs.len() != exp.outcomes.len() {
                problems.push(format!(
                    "decision.experiment: {} costs for {} outcomes",
                    costs.len(),
                    exp.outcomes.len()
                ));
            }
        }
        if exp.cost.is_some() && exp.costs.is_some() {
            problems.push("decision.experiment: give either cost or costs, not both".to_string());
        }
    }
}

fn validate_node(node: &NodeSpec, path: &str, problems: &mut Vec<String>) {
    let kinds = [
        node.decision.is_some(),
        node.chance.is_some(),
        node.utility.is_some(),
    ];
    if kinds.iter().filter(|k| **k).count() != 1 {
        problems.push(format!(
            "{path}: a node must be exactly one of decision, chance, terminal (utility)"
        ));
        return;
    }
    if let Some(branches) = &node.decision {
        if branches.is_empty() {
            problems.push(format!("{path}: decision node needs at least one branch"));
        }
        for b in branches {
            validate_node(&b.node, &format!("{path}/{}", b.label), problems);
        }
    }
    if let Some(branches) = &node.chance {
        if branches.is_empty() {
            problems.push(format!("{path}: chance node needs at least one branch"));
        }
        let total: f64 = branches.iter().map(|b| b.prob).sum();
        if (total - 1.0).abs() > 1e-9 {
            problems.push(format!(
                "{path}: chance branch probabilities sum to {total}, expected 1"
            ));
        }
        for b in branches {
            validate_node(&b.node, &format!("{path}/{}", b.label), problems);
        }
    }
}

fn validate_scoring(block: &ScoringBlock, problems: &mut Vec<String>) {
    if block.choices.is_some() == block.rule.is_some() {
        problems.push("scoring needs either `choices` or an explicit `rule`".to_string());
    }
    if let Some(rule) = &block.rule {
        let kind = rule.kind.to_lowercase();
        if kind != "quadratic" && kind != "logarithmic" {
            problems.push(format!(
                "scoring.rule.kind must be quadratic or logarithmic, got `{kind}`"
            ));
        }
    }
    if block.responses.is_some() && block.responses_csv.is_some() {
        problems.push("scoring: give either responses or responses_csv, not both".to_string());
    }
    if block.responses.is_none() && block.responses_csv.is_none() {
        problems.push("scoring needs responses or responses_csv".to_string());
    }
}

fn validate_elicit(block: &ElicitBlock, path: &str, problems: &mut Vec<String>) {
    let family = block.family.to_lowercase();
    if !["beta", "gamma", "normal"].contains(&family.as_str()) {
        problems.push(format!(
            "{path}.family must be beta, gamma or normal, got `{family}`"
        ));
    }
    for (i, c) in block.constraints.iter().enumerate() {
        let kinds = [
            c.mean.is_some(),
            c.mode.is_some(),
            c.quantile.is_some(),
            c.interval_mass.is_some(),
        ];
        if kinds.iter().filter(|k| **k).count() != 1 {
            problems.push(format!(
                "{path}.constraints[{}] must give exactly one of mean, mode, quantile, interval_mass",
                i + 1
            ));
        }
    }
}

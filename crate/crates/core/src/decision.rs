//! Finite decision problems under maximum expected utility, two-stage
//! decision trees, and the value of information.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::prob::ProbVector;

/// Absolute tolerance under which expected utilities count as tied.
pub const TIE_TOL: f64 = 1e-9;

/// State probabilities: one vector shared by every action, or one row
/// per action for problems where the relevant events depend on the
/// action taken.
#[derive(Debug, Clone, PartialEq)]
pub enum StateProbs {
    Shared(ProbVector),
    PerAction(Vec<ProbVector>),
}

/// A finite action × state utility matrix with probabilities over states.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    actions: Vec<String>,
    states: Vec<String>,
    /// utility[i][j] = u(action i, state j)
    utility: Vec<Vec<f64>>,
    probs: StateProbs,
}

impl DecisionProblem {
    pub fn new<S: Into<String>, T: Into<String>>(
        actions: Vec<S>,
        states: Vec<T>,
        utility: Vec<Vec<f64>>,
        probs: StateProbs,
    ) -> Result<Self> {
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if actions.is_empty() || states.is_empty() {
            return Err(Error::Mismatch("actions and states must be nonempty".into()));
        }
        if utility.len() != actions.len() {
            return Err(Error::Mismatch(format!(
                "{} utility rows for {} actions",
                utility.len(),
                actions.len()
            )));
        }
        for (i, row) in utility.iter().enumerate() {
            if row.len() != states.len() {
                return Err(Error::Mismatch(format!(
                    "utility row `{}` has {} entries for {} states",
                    actions[i],
                    row.len(),
                    states.len()
                )));
            }
            if row.iter().any(|u| !u.is_finite()) {
                return Err(Error::Domain("utilities must be finite".into()));
            }
        }
        match &probs {
            StateProbs::Shared(p) => {
                if p.len() != states.len() {
                    return Err(Error::Mismatch(format!(
                        "{} probabilities for {} states",
                        p.len(),
                        states.len()
                    )));
                }
            }
            StateProbs::PerAction(rows) => {
                if rows.len() != actions.len() {
                    return Err(Error::Mismatch(format!(
                        "{} probability rows for {} actions",
                        rows.len(),
                        actions.len()
                    )));
                }
                for row in rows {
                    if row.len() != states.len() {
                        return Err(Error::Mismatch(
                            "per-action probability row length differs from state count".into(),
                        ));
                    }
                }
            }
        }
        Ok(DecisionProblem {
            actions,
            states,
            utility,
            probs,
        })
    }

    /// Convenience constructor for a shared probability vector; the
    /// states label the probabilities.
    pub fn with_shared_probs<S: Into<String>, T: Into<String>>(
        actions: Vec<S>,
        states: Vec<T>,
        utility: Vec<Vec<f64>>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let p = ProbVector::new(states.clone(), probs)?;
        Self::new(actions, states, utility, StateProbs::Shared(p))
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn utility(&self, action: usize, state: usize) -> f64 {
        self.utility[action][state]
    }

    pub fn action_index(&self, action: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a == action)
            .ok_or_else(|| Error::Mismatch(format!("unknown action `{action}`")))
    }

    pub fn state_index(&self, state: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| Error::Mismatch(format!("unknown state `{state}`")))
    }

    fn probs_for(&self, action: usize) -> &ProbVector {
        match &self.probs {
            StateProbs::Shared(p) => p,
            StateProbs::PerAction(rows) => &rows[action],
        }
    }

    pub fn shared_probs(&self) -> Result<&ProbVector> {
        match &self.probs {
            StateProbs::Shared(p) => Ok(p),
            StateProbs::PerAction(_) => Err(Error::Unsupported(
                "problem uses per-action probabilities".into(),
            )),
        }
    }

    /// ū(a) = Σⱼ u(a, Eⱼ) P(Eⱼ).
    pub fn expected_utility(&self, action: &str) -> Result<f64> {
        let i = self.action_index(action)?;
        Ok(self.expected_utility_by_index(i))
    }

    fn expected_utility_by_index(&self, i: usize) -> f64 {
        let p = self.probs_for(i);
        self.utility[i]
            .iter()
            .zip(p.weights())
            .map(|(u, w)| u * w)
            .sum()
    }

    /// All actions within `TIE_TOL` of the maximal expected utility.
    pub fn optimal_actions(&self) -> Vec<String> {
        let values: Vec<f64> = (0..self.actions.len())
            .map(|i| self.expected_utility_by_index(i))
            .collect();
        let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.actions
            .iter()
            .zip(&values)
            .filter(|(_, v)| (best - **v).abs() <= TIE_TOL)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// Actions not dominated by any other (dominance: never better than
    /// the other anywhere and strictly worse somewhere).
    pub fn admissible_actions(&self) -> Vec<String> {
        let dominated = |i: usize| -> bool {
            (0..self.actions.len()).any(|k| {
                k != i
                    && self.utility[i]
                        .iter()
                        .zip(&self.utility[k])
                        .all(|(ui, uk)| ui <= uk)
                    && self.utility[i]
                        .iter()
                        .zip(&self.utility[k])
                        .any(|(ui, uk)| ui < uk)
            })
        };
        self.actions
            .iter()
            .enumerate()
            .filter(|(i, _)| !dominated(*i))
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// Opportunity loss l(a, Eⱼ) = maxᵢ u(aᵢ, Eⱼ) − u(a, Eⱼ).
    pub fn opportunity_loss(&self, action: &str, state: &str) -> Result<f64> {
        let i = self.action_index(action)?;
        let j = self.state_index(state)?;
        let best = self
            .utility
            .iter()
            .map(|row| row[j])
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(best - self.utility[i][j])
    }

    /// Expected value of perfect information: the expected opportunity
    /// loss of the a-priori optimal action.
    pub fn evpi(&self) -> Result<f64> {
        let probs = self.shared_probs()?;
        let best_action = self.action_index(&self.optimal_actions()[0])?;
        let mut total = 0.0;
        for j in 0..self.states.len() {
            let best_u = self
                .utility
                .iter()
                .map(|row| row[j])
                .fold(f64::NEG_INFINITY, f64::max);
            total += (best_u - self.utility[best_action][j]) * probs.weight(j);
        }
        Ok(total)
    }
}

/// Conditional distribution of experiment outcomes given each state:
/// `given_state[j][i]` = P(Dᵢ | Eⱼ).
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    outcomes: Vec<String>,
    given_state: Vec<Vec<f64>>,
}

impl Experiment {
    pub fn new<S: Into<String>>(outcomes: Vec<S>, given_state: Vec<Vec<f64>>) -> Result<Self> {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.is_empty() {
            return Err(Error::Mismatch("experiment needs at least one outcome".into()));
        }
        for row in &given_state {
            if row.len() != outcomes.len() {
                return Err(Error::Mismatch(
                    "likelihood row length differs from outcome count".into(),
                ));
            }
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::Domain("likelihoods must lie in [0,1]".into()));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "likelihood row sums to {s}, expected 1"
                )));
            }
        }
        Ok(Experiment {
            outcomes,
            given_state,
        })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    /// P(Dᵢ | Eⱼ) for outcome index `i`, per state j.
    pub fn outcome_likelihoods(&self, i: usize) -> Vec<f64> {
        self.given_state.iter().map(|row| row[i]).collect()
    }
}

/// Bayes update of state probabilities on one observation: returns the
/// posterior over states and the marginal probability of the observation.
pub fn chance_update(prior: &ProbVector, likelihood_per_state: &[f64]) -> Result<(ProbVector, f64)> {
    if likelihood_per_state.len() != prior.len() {
        return Err(Error::Mismatch(format!(
            "{} likelihood entries for {} states",
            likelihood_per_state.len(),
            prior.len()
        )));
    }
    if likelihood_per_state.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Domain("likelihoods must lie in [0,1]".into()));
    }
    let joint: Vec<f64> = prior
        .weights()
        .iter()
        .zip(likelihood_per_state)
        .map(|(w, l)| w * l)
        .collect();
    let marginal: f64 = joint.iter().sum();
    if marginal <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let posterior = ProbVector::new(
        prior.labels().to_vec(),
        joint.iter().map(|j| j / marginal).collect(),
    )?;
    Ok((posterior, marginal))
}

/// Expected value of the data Dᵢ: the posterior-expected utility gain of
/// switching from the prior-optimal action to the posterior-optimal one,
/// with `u(a, e, Dᵢ, Eⱼ) = u(a, Eⱼ) − cost(Dᵢ)`.
pub fn value_of_data(
    base: &DecisionProblem,
    experiment: &Experiment,
    datum: usize,
    costs: &[f64],
) -> Result<f64> {
    if datum >= experiment.outcomes.len() {
        return Err(Error::Mismatch(format!("no outcome with index {datum}")));
    }
    if costs.len() != experiment.outcomes.len() {
        return Err(Error::Mismatch(
            "cost vector length differs from outcome count".into(),
        ));
    }
    if experiment.given_state.len() != base.states.len() {
        return Err(Error::Mismatch(
            "experiment state count differs from problem".into(),
        ));
    }
    let prior = base.shared_probs()?;
    let (posterior, _) = chance_update(prior, &experiment.outcome_likelihoods(datum))?;
    let prior_best = base.action_index(&base.optimal_actions()[0])?;

    // posterior-optimal action under the costed utility (the constant
    // cost shifts every action equally, so the argmax is cost-free)
    let post_value = |i: usize| -> f64 {
        base.utility[i]
            .iter()
            .zip(posterior.weights())
            .map(|(u, w)| u * w)
            .sum()
    };
    let post_best = (0..base.actions.len())
        .max_by(|a, b| post_value(*a).partial_cmp(&post_value(*b)).unwrap())
        .unwrap();

    let mut v = 0.0;
    for j in 0..base.states.len() {
        let gain = (base.utility[post_best][j] - costs[datum]) - base.utility[prior_best][j];
        v += gain * posterior.weight(j);
    }
    Ok(v)
}

/// Expected value of the experiment: Σᵢ v(e, Dᵢ) P(Dᵢ).
pub fn value_of_experiment(
    base: &DecisionProblem,
    experiment: &Experiment,
    costs: &[f64],
) -> Result<f64> {
    let prior = base.shared_probs()?;
    let mut total = 0.0;
    for i in 0..experiment.outcomes.len() {
        let likes = experiment.outcome_likelihoods(i);
        let marginal: f64 = prior
            .weights()
            .iter()
            .zip(&likes)
            .map(|(w, l)| w * l)
            .sum();
        if marginal == 0.0 {
            continue;
        }
        total += value_of_data(base, experiment, i, costs)? * marginal;
    }
    Ok(total)
}

/// Marginal outcome probabilities P(Dᵢ) of an experiment.
pub fn outcome_marginals(base: &DecisionProblem, experiment: &Experiment) -> Result<Vec<f64>> {
    let prior = base.shared_probs()?;
    Ok((0..experiment.outcomes.len())
        .map(|i| {
            prior
                .weights()
                .iter()
                .zip(&experiment.outcome_likelihoods(i))
                .map(|(w, l)| w * l)
                .sum()
        })
        .collect())
}

/// A node of a finite decision tree.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Decision {
        branches: Vec<(String, TreeNode)>,
    },
    Chance {
        branches: Vec<(String, TreeNode)>,
        probs: Vec<f64>,
    },
    Terminal {
        utility: f64,
    },
}

impl TreeNode {
    fn validate(&self) -> Result<()> {
        match self {
            TreeNode::Terminal { utility } => {
                if !utility.is_finite() {
                    return Err(Error::Domain("terminal utility must be finite".into()));
                }
            }
            TreeNode::Decision { branches } => {
                if branches.is_empty() {
                    return Err(Error::Mismatch("decision node with no branches".into()));
                }
                for (_, child) in branches {
                    child.validate()?;
                }
            }
            TreeNode::Chance { branches, probs } => {
                if branches.len() != probs.len() || branches.is_empty() {
                    return Err(Error::Mismatch(
                        "chance node branch/probability mismatch".into(),
                    ));
                }
                let s: f64 = probs.iter().sum();
                if (s - 1.0).abs() > 1e-9 {
                    return Err(Error::Domain(format!(
                        "chance node probabilities sum to {s}, expected 1"
                    )));
                }
                if probs.iter().any(|p| *p < 0.0) {
                    return Err(Error::Domain("chance probabilities must be >= 0".into()));
                }
                for (_, child) in branches {
                    child.validate()?;
                }
            }
        }
        Ok(())
    }
}

/// Chosen branches (ties listed together) and the value attained at one
/// decision node.
#[derive(Debug, Clone, PartialEq)]
pub struct Choice {
    pub branches: Vec<String>,
    pub value: f64,
}

/// The value of a solved tree plus the optimal choice at each decision
/// node, keyed by slash-joined path from the root.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyValue {
    pub value: f64,
    pub policy: BTreeMap<String, Choice>,
}

impl PolicyValue {
    /// Branch labels chosen at a decision node.
    pub fn chosen(&self, path: &str) -> &[String] {
        &self.policy[path].branches
    }
}

/// Backward induction: chance nodes average, decision nodes maximize.
pub fn solve_tree(root: &TreeNode) -> Result<PolicyValue> {
    root.validate()?;
    let mut policy = BTreeMap::new();
    let value = solve_node(root, "root", &mut policy);
    Ok(PolicyValue { value, policy })
}

fn solve_node(node: &TreeNode, path: &str, policy: &mut BTreeMap<String, Choice>) -> f64 {
    match node {
        TreeNode::Terminal { utility } => *utility,
        TreeNode::Chance { branches, probs } => branches
            .iter()
            .zip(probs)
            .map(|((label, child), p)| p * solve_node(child, &format!("{path}/{label}"), policy))
            .sum(),
        TreeNode::Decision { branches } => {
            let values: Vec<f64> = branches
                .iter()
                .map(|(label, child)| solve_node(child, &format!("{path}/{label}"), policy))
                .collect();
            let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let chosen: Vec<String> = branches
                .iter()
                .zip(&values)
                .filter(|(_, v)| (best - **v).abs() <= TIE_TOL)
                .map(|((label, _), _)| label.clone())
                .collect();
            policy.insert(
                path.to_string(),
                Choice {
                    branches: chosen,
                    value: best,
                },
            );
            best
        }
    }
}

/// Closed-form optimum for allocating a fraction of wealth to a risky
/// return `X` against a risk-free rate, under the variance-penalized
/// utility w(a) = a·(E[X] − r) + r − a²·A·(Var X + (x̄ − E[X])²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioOptimum {
    /// Optimal fraction invested in the risky asset.
    pub weight: f64,
    /// Expected utility at the optimum.
    pub expected_utility: f64,
}

pub fn optimal_portfolio_weight(
    scenario_returns: &[f64],
    scenario_probs: &ProbVector,
    risk_free: f64,
    risk_aversion: f64,
) -> Result<PortfolioOptimum> {
    if scenario_returns.len() != scenario_probs.len() {
        return Err(Error::Mismatch(format!(
            "{} returns for {} probabilities",
            scenario_returns.len(),
            scenario_probs.len()
        )));
    }
    if !(risk_aversion > 0.0) {
        return Err(Error::Domain(format!(
            "risk aversion must be > 0 (A = {risk_aversion}); at A = 0 the linear utility is unbounded in the allocation"
        )));
    }
    let mean: f64 = scenario_returns
        .iter()
        .zip(scenario_probs.weights())
        .map(|(x, w)| x * w)
        .sum();
    let ex2: f64 = scenario_returns
        .iter()
        .zip(scenario_probs.weights())
        .map(|(x, w)| x * x * w)
        .sum();
    let variance = ex2 - mean * mean;
    let flat_mean: f64 = scenario_returns.iter().sum::<f64>() / scenario_returns.len() as f64;
    let excess = mean - risk_free;
    let spread = variance + (flat_mean - mean) * (flat_mean - mean);
    if !(spread > 0.0) {
        return Err(Error::Domain(
            "risky return has zero spread; allocation is unbounded".into(),
        ));
    }
    let weight = excess / (2.0 * risk_aversion * spread);
    let expected_utility = excess * excess / (4.0 * risk_aversion * spread) + risk_free;
    Ok(PortfolioOptimum {
        weight,
        expected_utility,
    })
}

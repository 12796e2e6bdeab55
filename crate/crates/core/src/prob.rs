//! Finite probability distributions on a labeled partition.

use crate::error::{Error, Result};

/// Tolerance accepted on input before weights are renormalized exactly.
const SUM_TOL: f64 = 1e-9;

/// A probability vector over labeled, mutually exclusive events.
///
/// Weights are nonnegative and sum to one; the constructor renormalizes
/// by the exact input sum so downstream totals are stable to 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl ProbVector {
    pub fn new<S: Into<String>>(labels: Vec<S>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::Mismatch(format!(
                "{} labels vs {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if weights.is_empty() {
            return Err(Error::Domain("probability vector cannot be empty".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Domain("weights must be finite and >= 0".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain(format!("weights sum to {sum}, expected 1")));
        }
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        {
            let mut seen = labels.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != labels.len() {
                return Err(Error::Mismatch("duplicate labels".into()));
            }
        }
        let weights = weights.iter().map(|w| w / sum).collect();
        Ok(ProbVector { labels, weights })
    }

    /// Unlabeled variant: labels are the indices "0", "1", ...
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let labels = (0..weights.len()).map(|i| i.to_string()).collect();
        Self::new(labels, weights)
    }

    /// Uniform distribution over `labels`.
    pub fn uniform<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// True when every weight is strictly positive.
    pub fn strictly_positive(&self) -> bool {
        self.weights.iter().all(|w| *w > 0.0)
    }

    /// Checks that `other` is defined on the same labels in the same order.
    pub fn same_partition(&self, other: &ProbVector) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::Mismatch(
                "probability vectors are defined on different partitions".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalizes_within_tolerance() {
        let p = ProbVector::from_weights(vec![0.2, 0.5, 0.3]).unwrap();
        let sum: f64 = p.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sum_and_negatives() {
        assert!(ProbVector::from_weights(vec![0.5, 0.4]).is_err());
        assert!(ProbVector::from_weights(vec![1.5, -0.5]).is_err());
        assert!(ProbVector::from_weights(vec![]).is_err());
    }

    #[test]
    fn rejects_duplicate_labels() {
        assert!(ProbVector::new(vec!["a", "a"], vec![0.5, 0.5]).is_err());
    }
}

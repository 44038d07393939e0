use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Total order on candidate metrics. `Ordering::Greater` means `self` is the
/// better code.
pub trait Metric {
    fn compare(&self, other: &Self) -> Result<Ordering>;
}

/// Compares two metrics; `Greater` means `a` is better.
pub fn compare_metrics<M: Metric>(a: &M, b: &M) -> Result<Ordering> {
    a.compare(b)
}

/// Minimum output weight and multiplicity of all frame words with input weight `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub w: usize,
    /// `None` when no word of input weight `w` exists.
    pub d: Option<usize>,
    pub n: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityMetric {
    pub entries: Vec<WeightEntry>,
}

impl ParityMetric {
    pub fn from_pairs(w_min: usize, pairs: &[(usize, u128)]) -> Self {
        let entries = pairs
            .iter()
            .enumerate()
            .map(|(i, &(d, n))| WeightEntry {
                w: w_min + i,
                d: Some(d),
                n,
            })
            .collect();
        Self { entries }
    }

    pub fn get(&self, w: usize) -> Option<&WeightEntry> {
        self.entries.iter().find(|e| e.w == w)
    }
}

impl Metric for ParityMetric {
    fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.entries.len() != other.entries.len() {
            return Err(Error::ShapeMismatch(
                self.entries.len(),
                other.entries.len(),
            ));
        }
        for (a, b) in self.entries.iter().zip(&other.entries) {
            let by_d = match (a.d, b.d) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(x), Some(y)) => x.cmp(&y),
            };
            let ord = by_d.then(b.n.cmp(&a.n));
            if ord != Ordering::Equal {
                return Ok(ord);
            }
        }
        Ok(Ordering::Equal)
    }
}

/// Truncated output weight distribution of the outer code after systematic
/// deletion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwefMetric {
    /// `None` when no nonzero codeword weighs at most `d_max`.
    pub d_free: Option<usize>,
    pub d_max: usize,
    /// `A_d` for `d = d_free..=d_max`.
    pub multiplicities: Vec<u128>,
}

impl OwefMetric {
    /// Builds the metric from `A_0..=A_dmax`, ignoring `A_0`.
    pub fn from_distribution(a: &[u128]) -> Self {
        let d_max = a.len().saturating_sub(1);
        let d_free = (1..a.len()).find(|&d| a[d] > 0);
        let multiplicities = d_free.map(|d| a[d..].to_vec()).unwrap_or_default();
        Self {
            d_free,
            d_max,
            multiplicities,
        }
    }
}

impl Metric for OwefMetric {
    fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.d_max != other.d_max {
            return Err(Error::ShapeMismatch(self.d_max, other.d_max));
        }
        let ord = match (self.d_free, other.d_free) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(x), Some(y)) => x.cmp(&y),
        };
        if ord != Ordering::Equal {
            return Ok(ord);
        }
        // smaller multiplicities are better
        Ok(other.multiplicities.cmp(&self.multiplicities))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_distance_loses_regardless_of_multiplicity() {
        let a = ParityMetric::from_pairs(2, &[(4, 7)]);
        let b = ParityMetric::from_pairs(2, &[(3, 1)]);
        assert_eq!(compare_metrics(&a, &b).unwrap(), Ordering::Greater);
    }

    #[test]
    fn scan_moves_to_next_weight_on_ties() {
        let a = ParityMetric::from_pairs(2, &[(4, 2), (0, 5)]);
        let b = ParityMetric::from_pairs(2, &[(4, 2), (1, 9)]);
        assert_eq!(compare_metrics(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(compare_metrics(&a, &a).unwrap(), Ordering::Equal);
    }

    #[test]
    fn shape_mismatch() {
        let a = ParityMetric::from_pairs(2, &[(4, 2)]);
        let b = ParityMetric::from_pairs(2, &[(4, 2), (1, 9)]);
        assert_eq!(compare_metrics(&a, &b), Err(Error::ShapeMismatch(1, 2)));
    }

    #[test]
    fn owef_order() {
        let a = OwefMetric::from_distribution(&[1, 0, 0, 5, 9]);
        let b = OwefMetric::from_distribution(&[1, 0, 0, 4, 20]);
        let c = OwefMetric::from_distribution(&[1, 0, 1, 0, 0]);
        assert_eq!(a.d_free, Some(3));
        assert_eq!(compare_metrics(&b, &a).unwrap(), Ordering::Greater);
        assert_eq!(compare_metrics(&c, &a).unwrap(), Ordering::Less);
    }
}

//! Samples and exact discrete distributions.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational;
use crate::value::{OrderedValue, Scale};

/// An observed multiset of outcomes sharing one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    label: String,
    scale: Scale,
    values: Vec<OrderedValue>,
}

impl Sample {
    pub fn new<S: Into<String>>(label: S, scale: Scale, values: Vec<OrderedValue>) -> Result<Self> {
        for v in &values {
            scale.check_value(*v)?;
        }
        Ok(Sample { label: label.into(), scale, values })
    }

    /// Builds a numeric sample from decimal text, mostly for tests and
    /// embedded datasets.
    pub fn from_numeric_strs<S: Into<String>>(label: S, decimals: u8, cells: &[&str]) -> Result<Self> {
        let scale = Scale::numeric(decimals)?;
        let values = cells
            .iter()
            .map(|c| scale.parse_cell(c).map_err(Error::InvalidInput))
            .collect::<Result<Vec<_>>>()?;
        Sample::new(label, scale, values)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn values(&self) -> &[OrderedValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn ensure_nonempty(&self) -> Result<()> {
        if self.values.is_empty() {
            Err(Error::EmptySample(self.label.clone()))
        } else {
            Ok(())
        }
    }

    /// The empirical distribution: point masses `count/n` at each distinct
    /// observed value. Exact, so sample-based and distribution-based effect
    /// computations agree.
    pub fn to_distribution(&self) -> Result<DiscreteDistribution> {
        self.ensure_nonempty()?;
        let mut sorted = self.values.clone();
        sorted.sort_unstable();
        let n = sorted.len() as u64;
        let mut support = Vec::new();
        let mut masses = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i + 1;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            support.push(sorted[i]);
            masses.push(rational::ratio_u64((j - i) as u64, n));
            i = j;
        }
        DiscreteDistribution::new(self.label.clone(), self.scale.clone(), support, masses)
    }
}

/// A discrete distribution with exact rational masses over a strictly
/// increasing support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    label: String,
    scale: Scale,
    support: Vec<OrderedValue>,
    masses: Vec<BigRational>,
}

/// How far the stated masses may deviate from summing to one before the
/// distribution is rejected. Within the tolerance, masses are rescaled so the
/// sum is exactly one.
pub const MASS_SUM_TOLERANCE: f64 = 1e-12;

impl DiscreteDistribution {
    pub fn new<S: Into<String>>(
        label: S,
        scale: Scale,
        support: Vec<OrderedValue>,
        masses: Vec<BigRational>,
    ) -> Result<Self> {
        if support.len() != masses.len() {
            return Err(Error::InvalidInput(format!(
                "support has {} points but {} probabilities were given",
                support.len(),
                masses.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::InvalidInput("distribution support is empty".into()));
        }
        for v in &support {
            scale.check_value(*v)?;
        }
        for w in support.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput("support must be strictly increasing".into()));
            }
        }
        let mut sum = BigRational::zero();
        for m in &masses {
            if m.is_negative() {
                return Err(Error::InvalidInput("probabilities must be non-negative".into()));
            }
            sum += m;
        }
        if !rational::is_within(&sum, &BigRational::one(), MASS_SUM_TOLERANCE) {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {}",
                rational::to_f64(&sum)
            )));
        }
        // Rescale near-one sums to exactly one so downstream identities stay exact.
        let masses = if sum == BigRational::one() {
            masses
        } else {
            masses.into_iter().map(|m| m / &sum).collect()
        };
        Ok(DiscreteDistribution { label: label.into(), scale, support, masses })
    }

    /// Builds a distribution from decimal text cells and probability strings.
    pub fn from_strs<S: Into<String>>(
        label: S,
        scale: Scale,
        support: &[&str],
        probs: &[&str],
    ) -> Result<Self> {
        let values = support
            .iter()
            .map(|c| scale.parse_cell(c).map_err(Error::InvalidInput))
            .collect::<Result<Vec<_>>>()?;
        let masses = probs
            .iter()
            .map(|p| {
                rational::decimal_to_rational(p)
                    .ok_or_else(|| Error::InvalidInput(format!("unparseable probability '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        DiscreteDistribution::new(label, scale, values, masses)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn support(&self) -> &[OrderedValue] {
        &self.support
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn with_label<S: Into<String>>(mut self, label: S) -> Self {
        self.label = label.into();
        self
    }

    /// The weighted mixture of several distributions on one scale.
    ///
    /// Weights must be non-negative with a positive total; they are
    /// normalized to sum to one.
    pub fn mixture<S: Into<String>>(
        label: S,
        parts: &[&DiscreteDistribution],
        weights: &[BigRational],
    ) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("mixture needs at least one component".into()));
        }
        if parts.len() != weights.len() {
            return Err(Error::InvalidInput("mixture needs one weight per component".into()));
        }
        let scale = parts[0].scale.clone();
        for p in parts {
            scale.ensure_compatible(&p.scale)?;
        }
        let mut total = BigRational::zero();
        for w in weights {
            if w.is_negative() {
                return Err(Error::InvalidInput("mixture weights must be non-negative".into()));
            }
            total += w;
        }
        if total.is_zero() {
            return Err(Error::InvalidInput("mixture weights must not all be zero".into()));
        }
        let mut acc: std::collections::BTreeMap<OrderedValue, BigRational> = Default::default();
        for (part, w) in parts.iter().zip(weights) {
            let w = w / &total;
            for (v, m) in part.support.iter().zip(&part.masses) {
                let entry = acc.entry(*v).or_insert_with(BigRational::zero);
                *entry += m * &w;
            }
        }
        let (support, masses): (Vec<_>, Vec<_>) = acc.into_iter().unzip();
        DiscreteDistribution::new(label, scale, support, masses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_u64;

    fn scale0() -> Scale {
        Scale::numeric(0).unwrap()
    }

    #[test]
    fn empirical_distribution_counts_ties() {
        let s = Sample::from_numeric_strs("a", 0, &["3", "1", "3", "2"]).unwrap();
        let d = s.to_distribution().unwrap();
        assert_eq!(d.support().iter().map(|v| v.raw()).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(d.masses(), &[ratio_u64(1, 4), ratio_u64(1, 4), ratio_u64(2, 4)]);
    }

    #[test]
    fn rejects_bad_mass_sums() {
        let err = DiscreteDistribution::from_strs("d", scale0(), &["1", "2"], &["0.5", "0.6"])
            .unwrap_err()
            .to_string();
        assert!(err.contains("probabilities sum to 1.1"), "{err}");
    }

    #[test]
    fn rejects_non_increasing_support() {
        assert!(DiscreteDistribution::from_strs("d", scale0(), &["2", "2"], &["0.5", "0.5"]).is_err());
        assert!(DiscreteDistribution::from_strs("d", scale0(), &["3", "2"], &["0.5", "0.5"]).is_err());
    }

    #[test]
    fn one_point_distribution_is_valid() {
        let d = DiscreteDistribution::from_strs("d", scale0(), &["1"], &["1.0"]).unwrap();
        assert_eq!(d.support().len(), 1);
    }

    #[test]
    fn zero_probabilities_are_allowed() {
        let d = DiscreteDistribution::from_strs("d", scale0(), &["1", "2", "3"], &["0.10", "0.90", "0"]).unwrap();
        assert!(d.masses()[2].is_zero());
    }

    #[test]
    fn mixture_of_identical_parts_is_identity() {
        let d = DiscreteDistribution::from_strs("d", scale0(), &["1", "2"], &["0.25", "0.75"]).unwrap();
        let m = DiscreteDistribution::mixture("m", &[&d, &d], &[ratio_u64(1, 2), ratio_u64(1, 2)]).unwrap();
        assert_eq!(m.support(), d.support());
        assert_eq!(m.masses(), d.masses());
    }
}

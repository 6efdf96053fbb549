//! Order-preserving coarsening of samples and category merging of
//! distributions.
//!
//! Both transforms are restricted to weakly monotone maps, so the proportion
//! of ties can only grow while the relative ordering of distinct outcomes is
//! never inverted.

use crate::error::{Error, Result};
use crate::sample::{DiscreteDistribution, Sample};
use crate::value::{rescale_mantissa, OrderedValue, Scale};

/// A weakly monotone value mapping.
#[derive(Debug, Clone, PartialEq)]
pub enum CoarseningRule {
    /// Round every value (half away from zero) to `decimals` places.
    RoundToDecimals { decimals: u8 },
    /// Replace every value in `[lo, hi]` by `replacement`; the bounds live on
    /// `scale`, which must be the sample's kind but may be finer-grained.
    CollapseInterval { lo: OrderedValue, hi: OrderedValue, replacement: OrderedValue, scale: Scale },
}

impl CoarseningRule {
    pub fn round_to_decimals(decimals: u8) -> Result<Self> {
        Scale::numeric(decimals)?;
        Ok(CoarseningRule::RoundToDecimals { decimals })
    }

    /// Collapse `[lo, hi]` to `replacement`. The replacement must lie inside
    /// the interval, which is exactly what makes the map weakly monotone.
    pub fn collapse_interval(scale: Scale, lo: OrderedValue, hi: OrderedValue, replacement: OrderedValue) -> Result<Self> {
        for v in [lo, hi, replacement] {
            scale.check_value(v)?;
        }
        if lo > hi {
            return Err(Error::InvalidConfig(format!(
                "collapse interval is empty: {} > {}",
                scale.format_value(lo),
                scale.format_value(hi)
            )));
        }
        if replacement < lo || replacement > hi {
            return Err(Error::InvalidConfig(format!(
                "replacement {} outside [{}, {}]",
                scale.format_value(replacement),
                scale.format_value(lo),
                scale.format_value(hi)
            )));
        }
        Ok(CoarseningRule::CollapseInterval { lo, hi, replacement, scale })
    }

    /// Collapse with bounds given as decimal text on a numeric scale.
    pub fn collapse_numeric(decimals: u8, lo: &str, hi: &str, replacement: &str) -> Result<Self> {
        let scale = Scale::numeric(decimals)?;
        let parse = |s: &str| scale.parse_cell(s).map_err(Error::InvalidConfig);
        let (lo, hi, rep) = (parse(lo)?, parse(hi)?, parse(replacement)?);
        CoarseningRule::collapse_interval(scale, lo, hi, rep)
    }
}

/// Applies a coarsening rule to every value of a sample.
///
/// Rounding changes the output scale to the requested number of decimals;
/// collapsing keeps the sample's kind but may widen a numeric scale to the
/// rule's finer grid so that the replacement value is representable.
pub fn coarsen(s: &Sample, rule: &CoarseningRule) -> Result<Sample> {
    match rule {
        CoarseningRule::RoundToDecimals { decimals } => {
            let from = match s.scale() {
                Scale::Numeric { decimals } => *decimals,
                Scale::Ordinal { .. } => {
                    return Err(Error::InvalidConfig("cannot round an ordinal sample".into()))
                }
            };
            let scale = Scale::numeric(*decimals)?;
            let values = s
                .values()
                .iter()
                .map(|v| rescale_mantissa(v.raw(), from, *decimals).map(OrderedValue::new))
                .collect::<Result<Vec<_>>>()?;
            Sample::new(s.label(), scale, values)
        }
        CoarseningRule::CollapseInterval { lo, hi, replacement, scale } => match (s.scale(), scale) {
            (Scale::Numeric { decimals: ds }, Scale::Numeric { decimals: dr }) => {
                let common = (*ds).max(*dr);
                let up = |v: OrderedValue, from: u8| rescale_mantissa(v.raw(), from, common).map(OrderedValue::new);
                let (lo, hi, rep) = (up(*lo, *dr)?, up(*hi, *dr)?, up(*replacement, *dr)?);
                let values = s
                    .values()
                    .iter()
                    .map(|v| {
                        let v = up(*v, *ds)?;
                        Ok(if v >= lo && v <= hi { rep } else { v })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Sample::new(s.label(), Scale::numeric(common)?, values)
            }
            (Scale::Ordinal { .. }, Scale::Ordinal { .. }) => {
                s.scale().ensure_compatible(scale)?;
                let values = s
                    .values()
                    .iter()
                    .map(|v| if *v >= *lo && *v <= *hi { *replacement } else { *v })
                    .collect();
                Sample::new(s.label(), s.scale().clone(), values)
            }
            _ => Err(Error::ScaleMismatch {
                left: s.scale().spec_string(),
                right: scale.spec_string(),
            }),
        },
    }
}

/// Merges ordinal categories of a distribution.
///
/// `target[i]` is the index of the new category that old category `i` maps
/// to; the mapping must be weakly monotone and surjective onto
/// `new_categories`. Masses of merged categories are summed.
pub fn merge_categories(
    d: &DiscreteDistribution,
    target: &[usize],
    new_categories: Vec<String>,
) -> Result<DiscreteDistribution> {
    let old = match d.scale() {
        Scale::Ordinal { categories } => categories,
        Scale::Numeric { .. } => {
            return Err(Error::InvalidConfig("merge_categories needs an ordinal distribution".into()))
        }
    };
    if target.len() != old.len() {
        return Err(Error::InvalidConfig(format!(
            "mapping covers {} categories but the scale has {}",
            target.len(),
            old.len()
        )));
    }
    let k_new = new_categories.len();
    if k_new == 0 {
        return Err(Error::InvalidConfig("mapping needs at least one new category".into()));
    }
    if target.first() != Some(&0) || target.last() != Some(&(k_new - 1)) {
        return Err(Error::InvalidConfig("mapping must be surjective onto the new categories".into()));
    }
    for w in target.windows(2) {
        if w[1] < w[0] || w[1] > w[0] + 1 {
            return Err(Error::InvalidConfig("mapping must be weakly monotone and surjective".into()));
        }
    }
    let new_scale = Scale::ordinal(new_categories)?;
    let mut support: Vec<OrderedValue> = Vec::new();
    let mut masses = Vec::new();
    for (v, m) in d.support().iter().zip(d.masses()) {
        let mapped = OrderedValue::new(target[v.raw() as usize] as i64);
        match support.last() {
            Some(last) if *last == mapped => {
                let slot = masses.last_mut().expect("masses tracks support");
                *slot += m;
            }
            _ => {
                support.push(mapped);
                masses.push(m.clone());
            }
        }
    }
    DiscreteDistribution::new(d.label(), new_scale, support, masses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_u64;

    fn meas_a() -> Sample {
        Sample::from_numeric_strs("A", 1, &["1.7", "3.3", "3.8", "4.9", "6.3"]).unwrap()
    }

    #[test]
    fn rounding_to_integers() {
        let rule = CoarseningRule::round_to_decimals(0).unwrap();
        let rounded = coarsen(&meas_a(), &rule).unwrap();
        let got: Vec<i64> = rounded.values().iter().map(|v| v.raw()).collect();
        assert_eq!(got, vec![2, 3, 4, 5, 6]);
        assert_eq!(rounded.scale(), &Scale::numeric(0).unwrap());
    }

    #[test]
    fn collapsing_an_interval_widens_integer_data() {
        // Integer measurements collapsed onto the midpoint 3.5 of [2.6, 4.4].
        let s = Sample::from_numeric_strs("A", 0, &["2", "3", "4", "5", "6"]).unwrap();
        let rule = CoarseningRule::collapse_numeric(1, "2.6", "4.4", "3.5").unwrap();
        let out = coarsen(&s, &rule).unwrap();
        let got: Vec<i64> = out.values().iter().map(|v| v.raw()).collect();
        assert_eq!(got, vec![20, 35, 35, 50, 60]);
    }

    #[test]
    fn collapse_outside_sample_range_is_identity() {
        let s = meas_a();
        let rule = CoarseningRule::collapse_numeric(1, "100.0", "200.0", "150.0").unwrap();
        let out = coarsen(&s, &rule).unwrap();
        assert_eq!(out.values(), s.values());
    }

    #[test]
    fn replacement_must_lie_in_interval() {
        let err = CoarseningRule::collapse_numeric(1, "2.6", "4.4", "5.0").unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
    }

    #[test]
    fn merging_middle_scores() {
        let scale = Scale::ordinal(vec!["1", "2", "3", "4", "5", "6"]).unwrap();
        let a = DiscreteDistribution::from_strs(
            "A",
            scale.clone(),
            &["1", "2", "3", "4", "5", "6"],
            &["0.0", "0.1", "0.2", "0.3", "0.2", "0.2"],
        )
        .unwrap();
        let target = [0, 1, 2, 2, 2, 3]; // {3,4,5} -> new "4"
        let new_cats = vec!["1".to_string(), "2".into(), "4".into(), "6".into()];
        let merged = merge_categories(&a, &target, new_cats).unwrap();
        assert_eq!(
            merged.masses(),
            &[ratio_u64(0, 1), ratio_u64(1, 10), ratio_u64(7, 10), ratio_u64(2, 10)]
        );
        assert_eq!(merged.support().iter().map(|v| v.raw()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn identity_mapping_keeps_distribution() {
        let scale = Scale::ordinal(vec!["a", "b", "c"]).unwrap();
        let d = DiscreteDistribution::from_strs("d", scale, &["a", "b", "c"], &["0.2", "0.3", "0.5"]).unwrap();
        let merged = merge_categories(&d, &[0, 1, 2], vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert_eq!(merged.masses(), d.masses());
        assert_eq!(merged.support(), d.support());
    }

    #[test]
    fn non_monotone_mapping_is_rejected() {
        let scale = Scale::ordinal(vec!["a", "b", "c"]).unwrap();
        let d = DiscreteDistribution::from_strs("d", scale, &["a", "b", "c"], &["0.2", "0.3", "0.5"]).unwrap();
        assert!(merge_categories(&d, &[0, 1, 0], vec!["x".into(), "y".into()]).is_err());
        // skipping a new category is not surjective
        assert!(merge_categories(&d, &[0, 0, 2], vec!["x".into(), "y".into(), "z".into()]).is_err());
    }
}

//! Pair counts and the three effect measures.
//!
//! For samples `a` (treatment) and `b` (control) the relative effect is
//! `theta = P(X > Y) + P(X = Y)/2`, the success odds is
//! `lambda_so = theta / (1 - theta)` and the win ratio is
//! `lambda_wr = P(X > Y) / P(X < Y)`. Ties make the distinction: the win
//! ratio ignores them and blows up when `P(X < Y) = 0`, while the success
//! odds splits them between numerator and denominator.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational;
use crate::sample::{DiscreteDistribution, Sample};

/// Win/tie/loss counts over all ordered cross pairs of two samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Pairs with `x > y`.
    pub wins: u64,
    /// Pairs with `x = y`.
    pub ties: u64,
    /// Pairs with `x < y`.
    pub losses: u64,
}

impl PairCounts {
    pub fn new(wins: u64, ties: u64, losses: u64) -> Self {
        PairCounts { wins, ties, losses }
    }

    /// Total number of ordered pairs, `n1 * n2` for the generating samples.
    pub fn n_pairs(&self) -> u64 {
        self.wins + self.ties + self.losses
    }

    /// The counts seen from the other side: wins and losses swap, ties stay.
    pub fn swapped(&self) -> PairCounts {
        PairCounts { wins: self.losses, ties: self.ties, losses: self.wins }
    }
}

/// A ratio-type effect that may be infinite (zero denominator) or undefined
/// (zero over zero). Rendered as `inf` / `undef` in reports.
#[derive(Debug, Clone, PartialEq)]
pub enum Extended {
    Finite(BigRational),
    PlusInfinity,
    Undefined,
}

impl Extended {
    fn ratio(num: BigRational, den: BigRational) -> Extended {
        if den.is_zero() {
            if num.is_zero() {
                Extended::Undefined
            } else {
                Extended::PlusInfinity
            }
        } else {
            Extended::Finite(num / den)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            Extended::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// `f64` view: `inf` for the infinite state, NaN for the undefined one.
    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(r) => rational::to_f64(r),
            Extended::PlusInfinity => f64::INFINITY,
            Extended::Undefined => f64::NAN,
        }
    }

    /// True when the value is strictly greater than one; the infinite state
    /// counts, the undefined one does not.
    pub fn exceeds_one(&self) -> bool {
        match self {
            Extended::Finite(r) => *r > BigRational::one(),
            Extended::PlusInfinity => true,
            Extended::Undefined => false,
        }
    }
}

/// The three pair probabilities and the effects derived from them.
///
/// Values are exact rationals whenever the inputs were (counts, decimal
/// masses, decimal rates); use the `*_f64` accessors for display.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectEstimates {
    pub p_plus: BigRational,
    pub p_zero: BigRational,
    pub p_minus: BigRational,
    pub theta: BigRational,
    pub lambda_so: Extended,
    pub lambda_wr: Extended,
    /// Binary comparisons only; always identical to `lambda_wr` there.
    pub odds_ratio: Option<Extended>,
}

impl EffectEstimates {
    /// Derives all effects from exact pair probabilities. The probabilities
    /// must sum to one exactly.
    pub fn from_probabilities(p_plus: BigRational, p_zero: BigRational, p_minus: BigRational) -> Result<Self> {
        let sum = &p_plus + &p_zero + &p_minus;
        if sum != BigRational::one() || p_plus.is_negative() || p_zero.is_negative() || p_minus.is_negative() {
            return Err(Error::InvalidInput("pair probabilities must be non-negative and sum to one".into()));
        }
        let half = rational::ratio_u64(1, 2);
        let theta = &p_plus + &half * &p_zero;
        let lambda_so = if theta == BigRational::one() {
            Extended::PlusInfinity
        } else {
            Extended::Finite(&theta / (BigRational::one() - &theta))
        };
        let lambda_wr = Extended::ratio(p_plus.clone(), p_minus.clone());
        Ok(EffectEstimates { p_plus, p_zero, p_minus, theta, lambda_so, lambda_wr, odds_ratio: None })
    }

    pub fn p_plus_f64(&self) -> f64 {
        rational::to_f64(&self.p_plus)
    }

    pub fn p_zero_f64(&self) -> f64 {
        rational::to_f64(&self.p_zero)
    }

    pub fn p_minus_f64(&self) -> f64 {
        rational::to_f64(&self.p_minus)
    }

    pub fn theta_f64(&self) -> f64 {
        rational::to_f64(&self.theta)
    }
}

/// Counts wins, ties and losses over all `n1 * n2` ordered pairs by brute
/// force. This is the reference implementation; [`count_pairs_fast`] must
/// agree with it on every input.
pub fn count_pairs(a: &Sample, b: &Sample) -> Result<PairCounts> {
    a.scale().ensure_compatible(b.scale())?;
    a.ensure_nonempty()?;
    b.ensure_nonempty()?;
    let mut c = PairCounts::new(0, 0, 0);
    for x in a.values() {
        for y in b.values() {
            match x.cmp(y) {
                std::cmp::Ordering::Greater => c.wins += 1,
                std::cmp::Ordering::Equal => c.ties += 1,
                std::cmp::Ordering::Less => c.losses += 1,
            }
        }
    }
    Ok(c)
}

/// Sort-and-merge pair counting in `O((n1 + n2) log(n1 + n2))`.
pub fn count_pairs_fast(a: &Sample, b: &Sample) -> Result<PairCounts> {
    a.scale().ensure_compatible(b.scale())?;
    a.ensure_nonempty()?;
    b.ensure_nonempty()?;
    let mut xs: Vec<i64> = a.values().iter().map(|v| v.raw()).collect();
    let mut ys: Vec<i64> = b.values().iter().map(|v| v.raw()).collect();
    xs.sort_unstable();
    ys.sort_unstable();
    let mut c = PairCounts::new(0, 0, 0);
    let mut below = 0; // first index with ys[below] >= x
    let mut upto = 0; // first index with ys[upto] > x
    for &x in &xs {
        while below < ys.len() && ys[below] < x {
            below += 1;
        }
        if upto < below {
            upto = below;
        }
        while upto < ys.len() && ys[upto] <= x {
            upto += 1;
        }
        c.wins += below as u64;
        c.ties += (upto - below) as u64;
        c.losses += (ys.len() - upto) as u64;
    }
    Ok(c)
}

/// Effects from pair counts; the probabilities are exact count ratios.
pub fn effects_from_counts(c: &PairCounts) -> Result<EffectEstimates> {
    let n = c.n_pairs();
    if n == 0 {
        return Err(Error::InvalidInput("no pairs: both samples must be non-empty".into()));
    }
    EffectEstimates::from_probabilities(
        rational::ratio_u64(c.wins, n),
        rational::ratio_u64(c.ties, n),
        rational::ratio_u64(c.losses, n),
    )
}

/// Convenience: count pairs (fast path) and derive effects.
pub fn effects_from_samples(a: &Sample, b: &Sample) -> Result<EffectEstimates> {
    effects_from_counts(&count_pairs_fast(a, b)?)
}

/// Effects of `da` versus `db` in exact rational arithmetic:
/// `p_plus = sum_i sum_{j: y_j < x_i} fa(x_i) fb(y_j)` and
/// `p_zero = sum over shared support of fa fb`.
pub fn effects_from_distributions(da: &DiscreteDistribution, db: &DiscreteDistribution) -> Result<EffectEstimates> {
    da.scale().ensure_compatible(db.scale())?;
    let mut p_plus = BigRational::zero();
    let mut p_zero = BigRational::zero();
    let mut p_minus = BigRational::zero();
    // Walk da's support with a running prefix of db's mass strictly below /
    // equal to the current point. Both supports are strictly increasing.
    let mut j_below = 0;
    let mut j_upto = 0;
    let mut mass_below = BigRational::zero();
    let mut mass_upto = BigRational::zero();
    for (x, fx) in da.support().iter().zip(da.masses()) {
        while j_below < db.support().len() && db.support()[j_below] < *x {
            mass_below += &db.masses()[j_below];
            j_below += 1;
        }
        if j_upto < j_below {
            // catch up so mass_upto includes everything below x as well
            while j_upto < j_below {
                mass_upto += &db.masses()[j_upto];
                j_upto += 1;
            }
        }
        while j_upto < db.support().len() && db.support()[j_upto] <= *x {
            mass_upto += &db.masses()[j_upto];
            j_upto += 1;
        }
        p_plus += fx * &mass_below;
        p_zero += fx * (&mass_upto - &mass_below);
        p_minus += fx * (BigRational::one() - &mass_upto);
    }
    EffectEstimates::from_probabilities(p_plus, p_zero, p_minus)
}

/// Effects for dichotomous outcomes with success rates `q_a` and `q_b`.
///
/// Here `p_plus = q_a (1 - q_b)`, `p_minus = q_b (1 - q_a)` and
/// `p_zero = q_a q_b + (1 - q_a)(1 - q_b)`; the win ratio coincides with the
/// classical odds ratio, which is reported alongside.
pub fn binary_effects(q_a: &BigRational, q_b: &BigRational) -> Result<EffectEstimates> {
    for q in [q_a, q_b] {
        if q.is_negative() || q > &BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "success probability {} outside [0, 1]",
                rational::to_f64(q)
            )));
        }
    }
    let one = BigRational::one();
    let p_plus = q_a * (&one - q_b);
    let p_minus = q_b * (&one - q_a);
    let p_zero = q_a * q_b + (&one - q_a) * (&one - q_b);
    let mut e = EffectEstimates::from_probabilities(p_plus, p_zero, p_minus)?;
    e.odds_ratio = Some(e.lambda_wr.clone());
    Ok(e)
}

/// [`binary_effects`] for plain floating-point rates (exact in the binary
/// expansion of the inputs).
pub fn binary_effects_f64(q_a: f64, q_b: f64) -> Result<EffectEstimates> {
    let qa = rational::from_f64(q_a)
        .ok_or_else(|| Error::InvalidInput(format!("success probability {q_a} is not finite")))?;
    let qb = rational::from_f64(q_b)
        .ok_or_else(|| Error::InvalidInput(format!("success probability {q_b} is not finite")))?;
    binary_effects(&qa, &qb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_u64;
    use crate::value::Scale;

    fn sample(label: &str, decimals: u8, cells: &[&str]) -> Sample {
        Sample::from_numeric_strs(label, decimals, cells).unwrap()
    }

    #[test]
    fn counts_all_distinct_case() {
        let a = sample("A", 1, &["1.7", "3.3", "3.8", "4.9", "6.3"]);
        let b = sample("B", 1, &["1.4", "1.6", "2.7", "4.3", "5.0"]);
        let c = count_pairs(&a, &b).unwrap();
        assert_eq!(c, PairCounts::new(17, 0, 8));
        assert_eq!(c.n_pairs(), 25);
    }

    #[test]
    fn counts_heavily_tied_case() {
        let a = sample("A", 1, &["3.5", "3.5", "3.5", "3.5", "6"]);
        let b = sample("B", 1, &["1", "3.5", "3.5", "3.5", "3.5"]);
        let c = count_pairs(&a, &b).unwrap();
        assert_eq!(c, PairCounts::new(9, 16, 0));
    }

    #[test]
    fn single_tied_pair() {
        let a = sample("A", 0, &["1"]);
        let b = sample("B", 0, &["1"]);
        assert_eq!(count_pairs(&a, &b).unwrap(), PairCounts::new(0, 1, 0));
    }

    #[test]
    fn fast_path_matches_integer_case() {
        let a = sample("A", 0, &["2", "3", "4", "5", "6"]);
        let b = sample("B", 0, &["1", "2", "3", "4", "5"]);
        let c = count_pairs_fast(&a, &b).unwrap();
        assert_eq!(c, PairCounts::new(15, 4, 6));
        assert_eq!(c, count_pairs(&a, &b).unwrap());
    }

    #[test]
    fn fast_path_symmetric_case() {
        let a = sample("A", 0, &["1", "2", "3"]);
        let c = count_pairs_fast(&a, &a).unwrap();
        assert_eq!(c, PairCounts::new(3, 3, 3));
    }

    #[test]
    fn mismatched_scales_are_rejected() {
        let a = sample("A", 0, &["1"]);
        let b = sample("B", 1, &["1.0"]);
        assert!(matches!(count_pairs(&a, &b), Err(Error::ScaleMismatch { .. })));
        let o = Sample::new("O", Scale::ordinal(vec!["x", "y"]).unwrap(), vec![]).unwrap();
        assert!(count_pairs(&a, &o).is_err());
    }

    #[test]
    fn effects_from_untied_counts() {
        let e = effects_from_counts(&PairCounts::new(17, 0, 8)).unwrap();
        assert_eq!(e.theta, ratio_u64(17, 25));
        assert_eq!(e.lambda_so, Extended::Finite(ratio_u64(17, 8)));
        assert_eq!(e.lambda_wr, Extended::Finite(ratio_u64(17, 8)));
    }

    #[test]
    fn effects_from_dice_counts() {
        let e = effects_from_counts(&PairCounts::new(19, 3, 14)).unwrap();
        assert_eq!(e.theta, BigRational::new(41.into(), 72.into())); // 20.5/36
        assert_eq!(e.lambda_so, Extended::Finite(ratio_u64(41, 31))); // 20.5/15.5
        assert_eq!(e.lambda_wr, Extended::Finite(ratio_u64(19, 14)));
    }

    #[test]
    fn all_ties_give_undefined_win_ratio() {
        let e = effects_from_counts(&PairCounts::new(0, 9, 0)).unwrap();
        assert_eq!(e.theta, ratio_u64(1, 2));
        assert_eq!(e.lambda_so, Extended::Finite(BigRational::one()));
        assert_eq!(e.lambda_wr, Extended::Undefined);
    }

    #[test]
    fn zero_pairs_is_an_error() {
        assert!(effects_from_counts(&PairCounts::new(0, 0, 0)).is_err());
    }

    #[test]
    fn dominating_sample_gives_infinite_success_odds() {
        let e = effects_from_counts(&PairCounts::new(4, 0, 0)).unwrap();
        assert_eq!(e.lambda_so, Extended::PlusInfinity);
        assert_eq!(e.lambda_wr, Extended::PlusInfinity);
    }

    #[test]
    fn distribution_effects_match_probability_table() {
        // Ordinal three-point distributions with a dominated comparison.
        let scale = Scale::ordinal(vec!["1", "2", "3"]).unwrap();
        let f1 = DiscreteDistribution::from_strs("A", scale.clone(), &["1", "2", "3"], &["0.10", "0.90", "0"]).unwrap();
        let f2 = DiscreteDistribution::from_strs("B", scale.clone(), &["1", "2", "3"], &["0", "0.90", "0.10"]).unwrap();
        let e = effects_from_distributions(&f2, &f1).unwrap();
        assert_eq!(e.theta, ratio_u64(595, 1000));
        assert_eq!(e.lambda_wr, Extended::PlusInfinity);
        let so = e.lambda_so.as_finite().unwrap();
        assert_eq!(so, &ratio_u64(595, 405));
    }

    #[test]
    fn distribution_against_itself_is_even() {
        let scale = Scale::numeric(0).unwrap();
        let d = DiscreteDistribution::from_strs("d", scale, &["1", "3", "7"], &["0.2", "0.5", "0.3"]).unwrap();
        let e = effects_from_distributions(&d, &d).unwrap();
        assert_eq!(e.theta, ratio_u64(1, 2));
        assert_eq!(e.lambda_so, Extended::Finite(BigRational::one()));
    }

    #[test]
    fn binary_effects_table_row() {
        let e = binary_effects(&ratio_u64(9, 10), &ratio_u64(1, 2)).unwrap();
        assert_eq!(e.p_zero, ratio_u64(1, 2));
        assert_eq!(e.lambda_wr, Extended::Finite(ratio_u64(9, 1)));
        assert_eq!(e.odds_ratio, Some(Extended::Finite(ratio_u64(9, 1))));
        let so = rational::to_f64(e.lambda_so.as_finite().unwrap());
        assert!((so - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn binary_equal_rates_are_even() {
        let e = binary_effects(&ratio_u64(3, 10), &ratio_u64(3, 10)).unwrap();
        assert_eq!(e.lambda_wr, Extended::Finite(BigRational::one()));
        assert_eq!(e.lambda_so, Extended::Finite(BigRational::one()));
        let e0 = binary_effects(&ratio_u64(0, 1), &ratio_u64(0, 1)).unwrap();
        assert_eq!(e0.lambda_wr, Extended::Undefined);
        let e1 = binary_effects(&ratio_u64(1, 1), &ratio_u64(1, 1)).unwrap();
        assert_eq!(e1.lambda_wr, Extended::Undefined);
    }

    #[test]
    fn binary_range_check() {
        assert!(binary_effects(&ratio_u64(11, 10), &ratio_u64(1, 2)).is_err());
        assert!(binary_effects_f64(0.5, -0.1).is_err());
        assert!(binary_effects_f64(f64::NAN, 0.5).is_err());
    }
}

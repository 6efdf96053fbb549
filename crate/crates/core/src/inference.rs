//! Inference for the relative effect: the Brunner-Munzel studentized rank
//! statistic for `H0: theta = 1/2` (equivalently `lambda_so = 1`), a
//! range-preserving logit confidence interval for `theta`, its exponential
//! back-transform for `lambda_so`, and a seeded percentile bootstrap for
//! `lambda_wr`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::effects::{count_pairs_fast, effects_from_counts, Extended, PairCounts};
use crate::error::{Error, Result};
use crate::rational;
use crate::sample::Sample;
use crate::tdist;

/// Result of the Brunner-Munzel test.
///
/// When the variance estimate collapses (complete separation or all values
/// tied) `degenerate` carries the reason and the statistic, degrees of
/// freedom and p-value are absent.
#[derive(Debug, Clone)]
pub struct TestResult {
    /// Estimated relative effect of the first sample versus the second.
    pub theta_hat: f64,
    /// Brunner-Munzel variance estimate `sigma_N^2`.
    pub variance_hat: f64,
    /// Satterthwaite degrees of freedom.
    pub df: Option<f64>,
    /// Studentized statistic `sqrt(N) (theta_hat - 1/2) / sigma_N`.
    pub statistic: Option<f64>,
    /// Two-sided p-value from the t reference distribution.
    pub p_value: Option<f64>,
    pub degenerate: Option<String>,
    pub n1: usize,
    pub n2: usize,
}

/// Direction for one-sided p-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    /// `theta != 1/2`.
    TwoSided,
    /// `theta > 1/2`: the first sample tends to larger values.
    Greater,
    /// `theta < 1/2`.
    Less,
}

impl TestResult {
    /// One-sided p-value obtained by halving the two-sided tail consistently
    /// with the sign of the statistic.
    pub fn p_value_one_sided(&self, alternative: Alternative) -> Option<f64> {
        let (t, p) = (self.statistic?, self.p_value?);
        Some(match alternative {
            Alternative::TwoSided => p,
            Alternative::Greater => {
                if t >= 0.0 {
                    p / 2.0
                } else {
                    1.0 - p / 2.0
                }
            }
            Alternative::Less => {
                if t <= 0.0 {
                    p / 2.0
                } else {
                    1.0 - p / 2.0
                }
            }
        })
    }
}

/// Which parameter a confidence interval is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiScale {
    Theta,
    LambdaSo,
    LambdaWr,
}

/// How a confidence interval was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMethod {
    LogitT,
    BootstrapPercentile,
}

/// A two-sided confidence interval; the upper bound may be infinite for the
/// win ratio.
#[derive(Debug, Clone, Copy)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub scale: CiScale,
    pub method: CiMethod,
}

/// Doubled midranks (twice the midrank, always an integer) of `values`,
/// returned in input order.
fn doubled_midranks(values: &[i64]) -> Vec<u64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_unstable_by_key(|&i| values[i]);
    let mut out = vec![0u64; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        // positions i+1 ..= j (1-based); midrank = (i+1 + j)/2
        let doubled = (i + 1 + j) as u64;
        for &k in &idx[i..j] {
            out[k] = doubled;
        }
        i = j;
    }
    out
}

/// Estimates the relative effect via pooled midranks:
/// `theta_hat = (mean rank of a - (n1+1)/2) / n2`, exactly equal to
/// `(wins + ties/2) / (n1 n2)`.
pub fn estimate_theta_ranks(a: &Sample, b: &Sample) -> Result<BigRational> {
    a.scale().ensure_compatible(b.scale())?;
    a.ensure_nonempty()?;
    b.ensure_nonempty()?;
    let n1 = a.len() as u64;
    let n2 = b.len() as u64;
    let pooled: Vec<i64> = a.values().iter().chain(b.values()).map(|v| v.raw()).collect();
    let doubled = doubled_midranks(&pooled);
    let sum_a_doubled: u64 = doubled[..a.len()].iter().sum();
    // theta = (sum 2R_a - n1 (n1 + 1)) / (2 n1 n2)
    let num = BigInt::from(sum_a_doubled) - BigInt::from(n1) * BigInt::from(n1 + 1);
    let den = BigInt::from(2u64) * BigInt::from(n1) * BigInt::from(n2);
    Ok(BigRational::new(num, den))
}

struct BmParts {
    theta_hat: f64,
    variance: f64,
    df: f64,
    statistic: f64,
    degenerate: Option<String>,
}

fn bm_parts(a: &Sample, b: &Sample) -> Result<BmParts> {
    a.scale().ensure_compatible(b.scale())?;
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall { label: s.label().to_string(), len: s.len() });
        }
    }
    let n1 = a.len();
    let n2 = b.len();
    let n = n1 + n2;

    let pooled: Vec<i64> = a.values().iter().chain(b.values()).map(|v| v.raw()).collect();
    let pooled_doubled = doubled_midranks(&pooled);
    let within_a = doubled_midranks(&pooled[..n1]);
    let within_b = doubled_midranks(&pooled[n1..]);

    let theta_hat = rational::to_f64(&estimate_theta_ranks(a, b)?);

    // S_i^2 over the rank differences D_k = R_k - R^(i)_k.
    let var_of = |pooled_part: &[u64], within: &[u64], len: usize| -> f64 {
        let diffs: Vec<f64> = pooled_part
            .iter()
            .zip(within)
            .map(|(&r, &w)| (r as f64 - w as f64) / 2.0)
            .collect();
        let mean = diffs.iter().sum::<f64>() / len as f64;
        diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (len as f64 - 1.0)
    };
    let s1 = var_of(&pooled_doubled[..n1], &within_a, n1);
    let s2 = var_of(&pooled_doubled[n1..], &within_b, n2);

    let nf = n as f64;
    let n1f = n1 as f64;
    let n2f = n2 as f64;
    let variance = nf * (s1 / (n2f * n2f * n1f) + s2 / (n1f * n1f * n2f));

    if variance <= 0.0 {
        let reason = if theta_hat == 1.0 || theta_hat == 0.0 {
            "zero variance: complete separation of the samples"
        } else {
            "zero variance: all pairwise placements identical (e.g. all values tied)"
        };
        return Ok(BmParts {
            theta_hat,
            variance: 0.0,
            df: f64::NAN,
            statistic: f64::NAN,
            degenerate: Some(reason.to_string()),
        });
    }

    // Satterthwaite df over the two variance components.
    let c1 = n1f * s1;
    let c2 = n2f * s2;
    let df = (c1 + c2) * (c1 + c2) / (c1 * c1 / (n1f - 1.0) + c2 * c2 / (n2f - 1.0));
    let statistic = nf.sqrt() * (theta_hat - 0.5) / variance.sqrt();
    Ok(BmParts { theta_hat, variance, df, statistic, degenerate: None })
}

/// Brunner-Munzel test of `H0: theta = 1/2`; requires at least two
/// observations per sample.
pub fn brunner_munzel(a: &Sample, b: &Sample) -> Result<TestResult> {
    let parts = bm_parts(a, b)?;
    let (df, statistic, p_value) = if parts.degenerate.is_some() {
        (None, None, None)
    } else {
        let p = tdist::t_two_sided_p(parts.statistic, parts.df);
        (Some(parts.df), Some(parts.statistic), Some(p))
    };
    Ok(TestResult {
        theta_hat: parts.theta_hat,
        variance_hat: parts.variance,
        df,
        statistic,
        p_value,
        degenerate: parts.degenerate,
        n1: a.len(),
        n2: b.len(),
    })
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfig(format!("confidence level must be in (0,1), got {level}")));
    }
    Ok(())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn expit(x: f64) -> f64 {
    let p = 1.0 / (1.0 + (-x).exp());
    // keep bounds strictly inside (0,1)
    p.clamp(f64::MIN_POSITIVE, 1.0_f64.next_down())
}

/// Logit-scale bounds for theta; shared by the theta and success-odds
/// intervals (`logit(theta) = log(lambda_so)`).
fn logit_bounds(a: &Sample, b: &Sample, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    let parts = bm_parts(a, b)?;
    if let Some(reason) = parts.degenerate {
        return Err(Error::Degenerate(reason));
    }
    if parts.theta_hat <= 0.0 || parts.theta_hat >= 1.0 {
        return Err(Error::Degenerate(
            "theta estimate on the boundary: no logit interval; use the bootstrap win-ratio interval instead"
                .to_string(),
        ));
    }
    let n = (a.len() + b.len()) as f64;
    let se_logit = parts.variance.sqrt() / (n.sqrt() * parts.theta_hat * (1.0 - parts.theta_hat));
    let q = tdist::t_quantile(1.0 - (1.0 - level) / 2.0, parts.df);
    let center = logit(parts.theta_hat);
    Ok((center - q * se_logit, center + q * se_logit))
}

/// Range-preserving confidence interval for theta on the logit scale; both
/// bounds are strictly inside `(0, 1)`.
pub fn ci_theta_logit(a: &Sample, b: &Sample, level: f64) -> Result<ConfidenceInterval> {
    let (lo, hi) = logit_bounds(a, b, level)?;
    Ok(ConfidenceInterval {
        lower: expit(lo),
        upper: expit(hi),
        level,
        scale: CiScale::Theta,
        method: CiMethod::LogitT,
    })
}

/// Confidence interval for the success odds: the exponential of the
/// logit-scale theta bounds, i.e. `(L/(1-L), U/(1-U))`.
pub fn ci_lambda_so(a: &Sample, b: &Sample, level: f64) -> Result<ConfidenceInterval> {
    let (lo, hi) = logit_bounds(a, b, level)?;
    Ok(ConfidenceInterval {
        lower: lo.exp(),
        upper: hi.exp(),
        level,
        scale: CiScale::LambdaSo,
        method: CiMethod::LogitT,
    })
}

/// Minimum number of bootstrap replicates accepted.
pub const MIN_BOOTSTRAP_REPS: u32 = 100;

/// Seeded percentile bootstrap interval for the win ratio.
///
/// Each replicate resamples within both groups; replicates with
/// `p_minus = 0` contribute `+inf` and sort above every finite value.
/// Replicate `r` draws from the stream `(seed, r)` of a counter-based
/// generator, so the result is reproducible regardless of evaluation order.
pub fn ci_lambda_wr_bootstrap(
    a: &Sample,
    b: &Sample,
    level: f64,
    reps: u32,
    seed: u64,
) -> Result<ConfidenceInterval> {
    check_level(level)?;
    if reps < MIN_BOOTSTRAP_REPS {
        return Err(Error::InvalidConfig(format!(
            "bootstrap needs at least {MIN_BOOTSTRAP_REPS} replicates, got {reps}"
        )));
    }
    let point = effects_from_counts(&count_pairs_fast(a, b)?)?;
    if point.lambda_wr == Extended::Undefined {
        return Err(Error::Degenerate(
            "win ratio is 0/0 (no wins and no losses); no bootstrap interval".to_string(),
        ));
    }

    let xs: Vec<i64> = a.values().iter().map(|v| v.raw()).collect();
    let ys: Vec<i64> = b.values().iter().map(|v| v.raw()).collect();
    let mut stats: Vec<f64> = Vec::with_capacity(reps as usize);
    for r in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let mut ra: Vec<i64> = (0..xs.len()).map(|_| xs[rng.random_range(0..xs.len())]).collect();
        let mut rb: Vec<i64> = (0..ys.len()).map(|_| ys[rng.random_range(0..ys.len())]).collect();
        ra.sort_unstable();
        rb.sort_unstable();
        let c = count_sorted_pairs(&ra, &rb);
        stats.push(if c.losses == 0 { f64::INFINITY } else { c.wins as f64 / c.losses as f64 });
    }
    stats.sort_unstable_by(f64::total_cmp);
    let alpha = 1.0 - level;
    let lower_idx = ((alpha / 2.0) * reps as f64) as usize;
    let upper_idx = (((1.0 - alpha / 2.0) * reps as f64) as usize).min(reps as usize - 1);
    Ok(ConfidenceInterval {
        lower: stats[lower_idx],
        upper: stats[upper_idx],
        level,
        scale: CiScale::LambdaWr,
        method: CiMethod::BootstrapPercentile,
    })
}

/// Pair counting on pre-sorted raw values (bootstrap hot path).
fn count_sorted_pairs(xs: &[i64], ys: &[i64]) -> PairCounts {
    let mut c = PairCounts::new(0, 0, 0);
    let mut below = 0;
    let mut upto = 0;
    for &x in xs {
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
    c
}

//! Multi-group comparisons: pairwise effect matrices, dominance-cycle
//! detection, mixture-reference effects and stratified summaries.
//!
//! Pairwise decisions based on `theta` (or the win ratio) can be
//! non-transitive, so the dominance digraph is searched for cycles; the
//! mixture-reference comparison and the pooled stratified comparison are the
//! cycle-free alternatives.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::effects::{count_pairs, effects_from_counts, effects_from_distributions, EffectEstimates, Extended};
use crate::error::{Error, Result};
use crate::rational;
use crate::sample::{DiscreteDistribution, Sample};
use crate::value::Scale;

/// One comparison arm: observed data or an exact distribution.
#[derive(Debug, Clone)]
pub enum EffectInput {
    Sample(Sample),
    Distribution(DiscreteDistribution),
}

impl EffectInput {
    pub fn label(&self) -> &str {
        match self {
            EffectInput::Sample(s) => s.label(),
            EffectInput::Distribution(d) => d.label(),
        }
    }

    pub fn scale(&self) -> &Scale {
        match self {
            EffectInput::Sample(s) => s.scale(),
            EffectInput::Distribution(d) => d.scale(),
        }
    }

    /// Exact distribution view (the empirical distribution for samples).
    pub fn to_distribution(&self) -> Result<DiscreteDistribution> {
        match self {
            EffectInput::Sample(s) => s.to_distribution(),
            EffectInput::Distribution(d) => Ok(d.clone()),
        }
    }

    /// Group size used for size-proportional weighting; 1 for distributions.
    fn size_weight(&self) -> u64 {
        match self {
            EffectInput::Sample(s) => s.len() as u64,
            EffectInput::Distribution(_) => 1,
        }
    }
}

/// Effects of `x` versus `y`: exact pair counts for two samples, exact
/// rational masses otherwise.
pub fn effects_between(x: &EffectInput, y: &EffectInput) -> Result<EffectEstimates> {
    match (x, y) {
        (EffectInput::Sample(a), EffectInput::Sample(b)) => effects_from_counts(&count_pairs(a, b)?),
        _ => effects_from_distributions(&x.to_distribution()?, &y.to_distribution()?),
    }
}

/// All ordered pairwise effects over `k >= 2` groups.
#[derive(Debug, Clone)]
pub struct PairwiseMatrix {
    labels: Vec<String>,
    cells: Vec<Vec<EffectEstimates>>,
}

impl PairwiseMatrix {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn cell(&self, i: usize, j: usize) -> &EffectEstimates {
        &self.cells[i][j]
    }
}

/// Evaluates every ordered pair with the exact effect machinery.
pub fn pairwise_effects(groups: &[EffectInput]) -> Result<PairwiseMatrix> {
    if groups.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "pairwise comparison needs at least 2 groups, got {}",
            groups.len()
        )));
    }
    for g in &groups[1..] {
        groups[0].scale().ensure_compatible(g.scale())?;
    }
    let labels = groups.iter().map(|g| g.label().to_string()).collect();
    let mut cells = Vec::with_capacity(groups.len());
    for x in groups {
        let mut row = Vec::with_capacity(groups.len());
        for y in groups {
            row.push(effects_between(x, y)?);
        }
        cells.push(row);
    }
    Ok(PairwiseMatrix { labels, cells })
}

/// Which effect decides a dominance edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeRule {
    /// Edge `i -> j` iff `theta(i,j) > 1/2`; this is the consistency region
    /// of the rank test and the default.
    #[default]
    Theta,
    /// Edge `i -> j` iff `lambda_wr(i,j) > 1` (infinite counts, undefined
    /// does not). Equivalent to `Theta` except in pathological renderings;
    /// kept for comparison studies.
    WinRatio,
}

/// The dominance digraph of a pairwise matrix with its elementary cycles.
#[derive(Debug, Clone)]
pub struct TournamentReport {
    /// Directed edges `(winner, loser)` as index pairs into `labels`.
    pub edges: Vec<(usize, usize)>,
    /// Elementary cycles as label sequences, deduplicated by rotation.
    pub cycles: Vec<Vec<String>>,
    /// True when the dominance relation has no cycle.
    pub transitive: bool,
    pub labels: Vec<String>,
}

/// Finds every elementary dominance cycle by depth-first search; each cycle
/// is reported once, anchored at its smallest vertex.
#[allow(clippy::needless_range_loop)]
pub fn detect_cycles(m: &PairwiseMatrix, rule: EdgeRule) -> TournamentReport {
    let k = m.k();
    let half = rational::ratio_u64(1, 2);
    let mut adj = vec![vec![false; k]; k];
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let cell = m.cell(i, j);
            let dominates = match rule {
                EdgeRule::Theta => cell.theta > half,
                EdgeRule::WinRatio => cell.lambda_wr.exceeds_one(),
            };
            if dominates {
                adj[i][j] = true;
                edges.push((i, j));
            }
        }
    }

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; k];
    // Anchoring each search at its smallest vertex visits every elementary
    // cycle exactly once up to rotation.
    fn dfs(
        v: usize,
        start: usize,
        adj: &[Vec<bool>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        cycles: &mut Vec<Vec<usize>>,
    ) {
        path.push(v);
        on_path[v] = true;
        for w in start..adj.len() {
            if adj[v][w] {
                if w == start && path.len() >= 2 {
                    cycles.push(path.clone());
                } else if w > start && !on_path[w] {
                    dfs(w, start, adj, path, on_path, cycles);
                }
            }
        }
        on_path[v] = false;
        path.pop();
    }
    for start in 0..k {
        dfs(start, start, &adj, &mut path, &mut on_path, &mut cycles);
    }

    let labels = m.labels().to_vec();
    let cycles: Vec<Vec<String>> = cycles
        .into_iter()
        .map(|c| c.into_iter().map(|i| labels[i].clone()).collect())
        .collect();
    TournamentReport { edges, transitive: cycles.is_empty(), cycles, labels }
}

/// Effects of every group against the weighted mixture of all groups
/// (including itself). Default weights are group-size proportional.
pub fn mixture_reference_effects(
    groups: &[EffectInput],
    weights: Option<&[BigRational]>,
) -> Result<Vec<EffectEstimates>> {
    if groups.is_empty() {
        return Err(Error::InvalidConfig("mixture comparison needs at least one group".into()));
    }
    for g in &groups[1..] {
        groups[0].scale().ensure_compatible(g.scale())?;
    }
    let weights: Vec<BigRational> = match weights {
        Some(w) => {
            if w.len() != groups.len() {
                return Err(Error::InvalidConfig("need one mixture weight per group".into()));
            }
            w.to_vec()
        }
        None => groups
            .iter()
            .map(|g| BigRational::from_integer(g.size_weight().into()))
            .collect(),
    };
    if weights.iter().sum::<BigRational>().is_zero() {
        return Err(Error::InvalidConfig("mixture weights must not all be zero".into()));
    }
    let dists: Vec<DiscreteDistribution> =
        groups.iter().map(|g| g.to_distribution()).collect::<Result<_>>()?;
    let refs: Vec<&DiscreteDistribution> = dists.iter().collect();
    let mixture = DiscreteDistribution::mixture("mixture", &refs, &weights)?;
    dists.iter().map(|d| effects_from_distributions(d, &mixture)).collect()
}

/// One stratum of a stratified two-sample comparison.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub label: String,
    pub a: EffectInput,
    pub b: EffectInput,
}

/// How per-stratum effects are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeanWeighting {
    /// Plain arithmetic mean across strata (the default).
    #[default]
    Unweighted,
    /// Weight each stratum by its total sample size (1 for distributions).
    SampleSize,
}

/// Per-stratum effects with their averages and the pooled-mixture effect.
#[derive(Debug, Clone)]
pub struct StratifiedSummary {
    pub per_stratum: Vec<(String, EffectEstimates)>,
    pub mean_theta: BigRational,
    pub mean_lambda_so: Extended,
    pub mean_lambda_wr: Extended,
    /// Strata whose success odds were not finite (they poison the mean).
    pub lambda_so_poisoned_by: Vec<String>,
    /// Strata whose win ratio was not finite.
    pub lambda_wr_poisoned_by: Vec<String>,
    /// Effects of the equal-weight mixture of the A sides versus the
    /// equal-weight mixture of the B sides.
    pub pooled: EffectEstimates,
}

/// Computes per-stratum effects, their means, and the pooled comparison.
pub fn stratified_summary(strata: &[Stratum], weighting: MeanWeighting) -> Result<StratifiedSummary> {
    if strata.is_empty() {
        return Err(Error::InvalidConfig("stratified summary needs at least one stratum".into()));
    }
    let scale = strata[0].a.scale().clone();
    for s in strata {
        scale.ensure_compatible(s.a.scale())?;
        scale.ensure_compatible(s.b.scale())?;
    }

    let mut per_stratum = Vec::with_capacity(strata.len());
    for s in strata {
        per_stratum.push((s.label.clone(), effects_between(&s.a, &s.b)?));
    }

    let weights: Vec<BigRational> = match weighting {
        MeanWeighting::Unweighted => {
            vec![BigRational::one(); strata.len()]
        }
        MeanWeighting::SampleSize => strata
            .iter()
            .map(|s| BigRational::from_integer((s.a.size_weight() + s.b.size_weight()).into()))
            .collect(),
    };
    let total: BigRational = weights.iter().sum();

    let mean_theta: BigRational = per_stratum
        .iter()
        .zip(&weights)
        .map(|((_, e), w)| &e.theta * w)
        .sum::<BigRational>()
        / &total;

    let mean_extended = |pick: fn(&EffectEstimates) -> &Extended| -> (Extended, Vec<String>) {
        let mut poisoned = Vec::new();
        let mut acc = BigRational::zero();
        let mut worst: Option<Extended> = None;
        for ((label, e), w) in per_stratum.iter().zip(&weights) {
            match pick(e) {
                Extended::Finite(v) => acc += v * w,
                other => {
                    poisoned.push(label.clone());
                    // undefined dominates infinite: the mean is not even infinite
                    let bump = matches!(other, Extended::Undefined) || worst.is_none();
                    if bump {
                        worst = Some(other.clone());
                    }
                }
            }
        }
        match worst {
            Some(w) => (w, poisoned),
            None => (Extended::Finite(acc / &total), poisoned),
        }
    };
    let (mean_lambda_so, lambda_so_poisoned_by) = mean_extended(|e| &e.lambda_so);
    let (mean_lambda_wr, lambda_wr_poisoned_by) = mean_extended(|e| &e.lambda_wr);

    let a_dists: Vec<DiscreteDistribution> =
        strata.iter().map(|s| s.a.to_distribution()).collect::<Result<_>>()?;
    let b_dists: Vec<DiscreteDistribution> =
        strata.iter().map(|s| s.b.to_distribution()).collect::<Result<_>>()?;
    let equal = vec![BigRational::one(); strata.len()];
    let pooled_a = DiscreteDistribution::mixture("pooled A", &a_dists.iter().collect::<Vec<_>>(), &equal)?;
    let pooled_b = DiscreteDistribution::mixture("pooled B", &b_dists.iter().collect::<Vec<_>>(), &equal)?;
    let pooled = effects_from_distributions(&pooled_a, &pooled_b)?;

    Ok(StratifiedSummary {
        per_stratum,
        mean_theta,
        mean_lambda_so,
        mean_lambda_wr,
        lambda_so_poisoned_by,
        lambda_wr_poisoned_by,
        pooled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_u64;

    fn dice() -> Vec<EffectInput> {
        let d1 = Sample::from_numeric_strs("D1", 0, &["1", "4", "5", "6", "7", "7"]).unwrap();
        let d2 = Sample::from_numeric_strs("D2", 0, &["3", "3", "4", "5", "6", "9"]).unwrap();
        let d3 = Sample::from_numeric_strs("D3", 0, &["1", "2", "2", "8", "8", "9"]).unwrap();
        vec![EffectInput::Sample(d1), EffectInput::Sample(d2), EffectInput::Sample(d3)]
    }

    #[test]
    fn dice_pairwise_effects_are_exact() {
        let m = pairwise_effects(&dice()).unwrap();
        let theta = ratio_u64(41, 72); // 20.5/36
        assert_eq!(m.cell(0, 1).theta, theta);
        assert_eq!(m.cell(1, 2).theta, theta);
        assert_eq!(m.cell(2, 0).theta, theta);
        assert_eq!(m.cell(0, 1).lambda_wr, Extended::Finite(ratio_u64(19, 14)));
        assert_eq!(m.cell(1, 2).lambda_wr, Extended::Finite(ratio_u64(20, 15)));
        assert_eq!(m.cell(2, 0).lambda_wr, Extended::Finite(ratio_u64(20, 15)));
        // diagonal is exactly even
        for i in 0..3 {
            assert_eq!(m.cell(i, i).theta, ratio_u64(1, 2));
        }
    }

    #[test]
    fn dice_have_a_three_cycle() {
        let m = pairwise_effects(&dice()).unwrap();
        let report = detect_cycles(&m, EdgeRule::Theta);
        assert!(!report.transitive);
        assert_eq!(report.cycles, vec![vec!["D1".to_string(), "D2".into(), "D3".into()]]);
        // win-ratio edges agree with theta edges
        let report_wr = detect_cycles(&m, EdgeRule::WinRatio);
        assert_eq!(report.edges, report_wr.edges);
    }

    #[test]
    fn stochastically_ordered_trio_is_transitive() {
        let scale = Scale::ordinal(vec!["1", "2", "3"]).unwrap();
        let f = |label: &str, probs: [&str; 3]| {
            EffectInput::Distribution(
                DiscreteDistribution::from_strs(label, scale.clone(), &["1", "2", "3"], &probs).unwrap(),
            )
        };
        let groups = vec![
            f("A", ["0.10", "0.90", "0"]),
            f("B", ["0", "0.90", "0.10"]),
            f("C", ["0", "0.10", "0.90"]),
        ];
        let m = pairwise_effects(&groups).unwrap();
        let report = detect_cycles(&m, EdgeRule::Theta);
        assert!(report.transitive);
        assert!(report.cycles.is_empty());
    }

    #[test]
    fn two_groups_never_cycle() {
        let a = EffectInput::Sample(Sample::from_numeric_strs("A", 0, &["1", "3"]).unwrap());
        let b = EffectInput::Sample(Sample::from_numeric_strs("B", 0, &["2", "4"]).unwrap());
        let m = pairwise_effects(&[a, b]).unwrap();
        let report = detect_cycles(&m, EdgeRule::Theta);
        assert!(report.transitive);
    }

    #[test]
    fn dice_against_their_mixture_are_even() {
        let effects = mixture_reference_effects(&dice(), None).unwrap();
        for e in &effects {
            assert_eq!(e.theta, ratio_u64(1, 2));
            assert_eq!(e.lambda_so, Extended::Finite(BigRational::one()));
            assert_eq!(e.lambda_wr, Extended::Finite(BigRational::one()));
        }
    }

    #[test]
    fn single_group_against_itself_mixture_is_even() {
        let g = vec![EffectInput::Sample(Sample::from_numeric_strs("A", 0, &["1", "2", "5"]).unwrap())];
        let effects = mixture_reference_effects(&g, None).unwrap();
        assert_eq!(effects[0].theta, ratio_u64(1, 2));
    }

    #[test]
    fn degenerate_weights_reduce_to_pairwise() {
        let a = Sample::from_numeric_strs("A", 0, &["1", "2"]).unwrap();
        let b = Sample::from_numeric_strs("B", 0, &["3", "4"]).unwrap();
        let groups = vec![EffectInput::Sample(a.clone()), EffectInput::Sample(b.clone())];
        let weights = [BigRational::one(), BigRational::zero()];
        let effects = mixture_reference_effects(&groups, Some(&weights)).unwrap();
        // group 1 against itself
        assert_eq!(effects[0].theta, ratio_u64(1, 2));
        // group 2 against group 1 equals the pairwise value
        let pairwise = effects_between(&groups[1], &groups[0]).unwrap();
        assert_eq!(effects[1].theta, pairwise.theta);
    }

    #[test]
    fn zero_weights_are_rejected() {
        let g = dice();
        let weights = vec![BigRational::zero(); 3];
        assert!(mixture_reference_effects(&g, Some(&weights)).is_err());
    }

    #[test]
    fn dice_strata_show_the_paradox() {
        let d = dice();
        let strata = vec![
            Stratum { label: "1".into(), a: d[0].clone(), b: d[1].clone() },
            Stratum { label: "2".into(), a: d[1].clone(), b: d[2].clone() },
            Stratum { label: "3".into(), a: d[2].clone(), b: d[0].clone() },
        ];
        let s = stratified_summary(&strata, MeanWeighting::Unweighted).unwrap();
        for (_, e) in &s.per_stratum {
            assert_eq!(e.theta, ratio_u64(41, 72));
        }
        // mean theta > 1/2 while the pooled comparison is exactly even
        assert!(s.mean_theta > ratio_u64(1, 2));
        assert_eq!(s.pooled.theta, ratio_u64(1, 2));
        assert_eq!(s.pooled.lambda_so, Extended::Finite(BigRational::one()));
        assert_eq!(s.pooled.lambda_wr, Extended::Finite(BigRational::one()));
        let wr = s.mean_lambda_wr.as_finite().unwrap();
        // (19/14 + 4/3 + 4/3) / 3
        let expected = (ratio_u64(19, 14) + ratio_u64(4, 3) + ratio_u64(4, 3)) / BigRational::from_integer(3.into());
        assert_eq!(wr, &expected);
    }

    #[test]
    fn identical_strata_match_their_common_effect() {
        let a = EffectInput::Sample(Sample::from_numeric_strs("A", 0, &["2", "3", "5"]).unwrap());
        let b = EffectInput::Sample(Sample::from_numeric_strs("B", 0, &["1", "3", "4"]).unwrap());
        let stratum = |label: &str| Stratum { label: label.into(), a: a.clone(), b: b.clone() };
        let s = stratified_summary(&[stratum("1"), stratum("2")], MeanWeighting::Unweighted).unwrap();
        let common = effects_between(&a, &b).unwrap();
        assert_eq!(s.mean_theta, common.theta);
        assert_eq!(s.mean_lambda_wr, common.lambda_wr);
        assert_eq!(s.pooled.theta, common.theta);
    }

    #[test]
    fn infinite_stratum_poisons_the_mean() {
        let lo = EffectInput::Sample(Sample::from_numeric_strs("lo", 0, &["1", "2"]).unwrap());
        let hi = EffectInput::Sample(Sample::from_numeric_strs("hi", 0, &["3", "4"]).unwrap());
        let strata = vec![
            Stratum { label: "sep".into(), a: hi.clone(), b: lo.clone() },
            Stratum { label: "even".into(), a: lo.clone(), b: lo.clone() },
        ];
        let s = stratified_summary(&strata, MeanWeighting::Unweighted).unwrap();
        assert_eq!(s.mean_lambda_wr, Extended::PlusInfinity);
        assert_eq!(s.lambda_wr_poisoned_by, vec!["sep".to_string()]);
    }

    #[test]
    fn one_stratum_summary_equals_pairwise() {
        let a = EffectInput::Sample(Sample::from_numeric_strs("A", 0, &["2", "3"]).unwrap());
        let b = EffectInput::Sample(Sample::from_numeric_strs("B", 0, &["1", "2"]).unwrap());
        let s = stratified_summary(
            &[Stratum { label: "only".into(), a: a.clone(), b: b.clone() }],
            MeanWeighting::Unweighted,
        )
        .unwrap();
        let e = effects_between(&a, &b).unwrap();
        assert_eq!(s.mean_theta, e.theta);
        assert_eq!(s.pooled.theta, e.theta);
    }
}

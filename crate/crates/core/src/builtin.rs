//! Embedded reference datasets and the `paper` verification suite.
//!
//! The datasets behind the published reference tables are compiled in so the
//! verification subcommand and the acceptance tests run without external
//! files: the three stochastically ordered ordinal treatments, the four
//! coarsening steps of one measurement series, the six-category score
//! example with its merged variant, the non-transitive dice, and the binary
//! rate grid.

use crate::coarsen::merge_categories;
use crate::effects::{binary_effects, count_pairs, effects_from_counts, effects_from_distributions, EffectEstimates};
use crate::error::{Error, Result};
use crate::multigroup::{
    detect_cycles, mixture_reference_effects, pairwise_effects, stratified_summary, EdgeRule,
    EffectInput, MeanWeighting, Stratum, StratifiedSummary, TournamentReport,
};
use crate::rational::decimal_to_rational;
use crate::report::{Cell, PaperReport, TableBlock};
use crate::sample::{DiscreteDistribution, Sample};
use crate::value::Scale;

/// The three ordinal treatments A, B, C on scores 1..3; stochastically
/// ordered, so their pairwise decisions are transitive.
pub fn ordinal_trio() -> Vec<DiscreteDistribution> {
    let scale = Scale::ordinal(vec!["1", "2", "3"]).expect("static scale");
    let make = |label: &str, probs: [&str; 3]| {
        DiscreteDistribution::from_strs(label, scale.clone(), &["1", "2", "3"], &probs)
            .expect("static distribution")
    };
    vec![
        make("A", ["0.10", "0.90", "0"]),
        make("B", ["0", "0.90", "0.10"]),
        make("C", ["0", "0.10", "0.90"]),
    ]
}

/// The ordered comparisons reported for the ordinal trio.
pub fn ordinal_trio_comparisons() -> [(usize, usize); 3] {
    [(1, 0), (2, 1), (2, 0)] // (B,A), (C,B), (C,A)
}

/// Measurement series for treatments A and B in four coarsening steps:
/// case 1 is the raw data (one decimal), case 2 rounds to integers, cases 3
/// and 4 collapse growing intervals onto 3.5.
pub fn measurement_case(case: u8) -> Result<(Sample, Sample)> {
    let (a, b): (&[&str], &[&str]) = match case {
        1 => (&["1.7", "3.3", "3.8", "4.9", "6.3"], &["1.4", "1.6", "2.7", "4.3", "5.0"]),
        2 => (&["2", "3", "4", "5", "6"], &["1", "2", "3", "4", "5"]),
        3 => (&["2", "3.5", "3.5", "5", "6"], &["1", "2", "3.5", "3.5", "5"]),
        4 => (&["3.5", "3.5", "3.5", "3.5", "6"], &["1", "3.5", "3.5", "3.5", "3.5"]),
        _ => return Err(Error::InvalidConfig(format!("measurement cases are 1..=4, got {case}"))),
    };
    let decimals = if case == 2 { 0 } else { 1 };
    Ok((
        Sample::from_numeric_strs("A", decimals, a)?,
        Sample::from_numeric_strs("B", decimals, b)?,
    ))
}

/// The six-score ordinal pair whose ties grow from 13% to 31% when the
/// middle scores are merged.
pub fn score_pair() -> (DiscreteDistribution, DiscreteDistribution) {
    let scale = Scale::ordinal(vec!["1", "2", "3", "4", "5", "6"]).expect("static scale");
    let support = ["1", "2", "3", "4", "5", "6"];
    let a = DiscreteDistribution::from_strs(
        "A",
        scale.clone(),
        &support,
        &["0.0", "0.1", "0.2", "0.3", "0.2", "0.2"],
    )
    .expect("static distribution");
    let b = DiscreteDistribution::from_strs(
        "B",
        scale,
        &support,
        &["0.3", "0.3", "0.1", "0.2", "0.1", "0.0"],
    )
    .expect("static distribution");
    (a, b)
}

/// The score merge used with [`score_pair`]: scores 3, 4, 5 become a new
/// score 4.
pub fn score_merge() -> (Vec<usize>, Vec<String>) {
    (vec![0, 1, 2, 2, 2, 3], vec!["1".into(), "2".into(), "4".into(), "6".into()])
}

/// [`score_pair`] after merging scores 3..5.
pub fn merged_score_pair() -> (DiscreteDistribution, DiscreteDistribution) {
    let (a, b) = score_pair();
    let (target, cats) = score_merge();
    (
        merge_categories(&a, &target, cats.clone()).expect("static merge"),
        merge_categories(&b, &target, cats).expect("static merge"),
    )
}

/// The three non-transitive dice.
pub fn dice() -> Vec<Sample> {
    let make = |label: &str, faces: &[&str]| {
        Sample::from_numeric_strs(label, 0, faces).expect("static sample")
    };
    vec![
        make("D1", &["1", "4", "5", "6", "7", "7"]),
        make("D2", &["3", "3", "4", "5", "6", "9"]),
        make("D3", &["1", "2", "2", "8", "8", "9"]),
    ]
}

/// The stratified pairing of the dice: (D1,D2), (D2,D3), (D3,D1).
pub fn dice_strata() -> Vec<Stratum> {
    let d = dice();
    vec![
        Stratum { label: "1".into(), a: EffectInput::Sample(d[0].clone()), b: EffectInput::Sample(d[1].clone()) },
        Stratum { label: "2".into(), a: EffectInput::Sample(d[1].clone()), b: EffectInput::Sample(d[2].clone()) },
        Stratum { label: "3".into(), a: EffectInput::Sample(d[2].clone()), b: EffectInput::Sample(d[0].clone()) },
    ]
}

/// Binary success-rate grid `(q_a, q_b)` as exact decimal strings.
pub fn binary_rate_rows() -> [(&'static str, &'static str); 6] {
    [("0.9", "0.5"), ("0.95", "0.5"), ("0.9", "0.6"), ("0.95", "0.6"), ("0.9", "0.7"), ("0.95", "0.7")]
}

/// The two dichotomous pairs contrasted graphically: a visibly different one
/// and a nearly indistinguishable one with the same win ratio.
pub fn figure_rates() -> [(&'static str, &'static str); 2] {
    [("0.821", "0.6"), ("0.99", "0.97")]
}

/// A named built-in reproduction target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PaperItem {
    Table(u8),
    Example(String),
}

/// Table numbers accepted by [`reproduce`].
pub const TABLES: [u8; 7] = [1, 2, 4, 5, 6, 7, 8];
/// Example names accepted by [`reproduce`].
pub const EXAMPLES: [&str; 4] = ["dice", "mixture", "stratified", "figure1"];

fn effects_cells(e: &EffectEstimates) -> (Cell, Cell, Cell, Cell) {
    (
        Cell::num(e.p_zero_f64()),
        Cell::num(e.theta_f64()),
        Cell::ext(&e.lambda_so),
        Cell::ext(&e.lambda_wr),
    )
}

fn dist_table(title: &str, dists: &[&DiscreteDistribution]) -> TableBlock {
    let scale = dists[0].scale();
    let mut columns = vec!["treatment".to_string()];
    for v in dists[0].support() {
        columns.push(format!("x = {}", scale.format_value(*v)));
    }
    let rows = dists
        .iter()
        .map(|d| {
            let mut row = vec![Cell::text(d.label())];
            row.extend(d.masses().iter().map(|m| Cell::num(crate::rational::to_f64(m))));
            row
        })
        .collect();
    TableBlock { title: title.to_string(), columns, rows }
}

fn sample_row(s: &Sample) -> String {
    s.values().iter().map(|v| s.scale().format_value(*v)).collect::<Vec<_>>().join(" ")
}

/// Reproduces one built-in table or example.
pub fn reproduce(item: &PaperItem) -> Result<PaperReport> {
    match item {
        PaperItem::Table(1) => {
            let trio = ordinal_trio();
            Ok(PaperReport {
                name: "table-1".into(),
                title: "Three ordinal treatments on scores 1..3".into(),
                tables: vec![dist_table("Score probabilities", &trio.iter().collect::<Vec<_>>())],
            })
        }
        PaperItem::Table(2) => {
            let trio = ordinal_trio();
            let mut rows = Vec::new();
            for (i, j) in ordinal_trio_comparisons() {
                let e = effects_from_distributions(&trio[i], &trio[j])?;
                rows.push(vec![
                    Cell::text(format!("{}, {}", trio[i].label(), trio[j].label())),
                    Cell::num(e.theta_f64()),
                    Cell::ext(&e.lambda_wr),
                    Cell::ext(&e.lambda_so),
                ]);
            }
            Ok(PaperReport {
                name: "table-2".into(),
                title: "Pairwise effects of the ordinal treatments".into(),
                tables: vec![TableBlock {
                    title: "Pairwise comparisons".into(),
                    columns: vec!["comparison".into(), "theta".into(), "lambda_WR".into(), "lambda_SO".into()],
                    rows,
                }],
            })
        }
        PaperItem::Table(4) => {
            let mut rows = Vec::new();
            for case in 1..=4 {
                let (a, b) = measurement_case(case)?;
                rows.push(vec![
                    Cell::text(case.to_string()),
                    Cell::text(sample_row(&a)),
                    Cell::text(sample_row(&b)),
                ]);
            }
            Ok(PaperReport {
                name: "table-4".into(),
                title: "Measurements for treatments A and B under coarsening".into(),
                tables: vec![TableBlock {
                    title: "Measurements".into(),
                    columns: vec!["case".into(), "treatment A".into(), "treatment B".into()],
                    rows,
                }],
            })
        }
        PaperItem::Table(5) => {
            let mut rows = Vec::new();
            for case in 1..=4 {
                let (a, b) = measurement_case(case)?;
                let e = effects_from_counts(&count_pairs(&a, &b)?)?;
                let (p0, theta, so, wr) = effects_cells(&e);
                rows.push(vec![Cell::text(case.to_string()), p0, theta, so, wr]);
            }
            Ok(PaperReport {
                name: "table-5".into(),
                title: "Effects of the measurement series under coarsening".into(),
                tables: vec![TableBlock {
                    title: "Coarsening steps".into(),
                    columns: vec![
                        "case".into(),
                        "p0".into(),
                        "theta".into(),
                        "lambda_SO".into(),
                        "lambda_WR".into(),
                    ],
                    rows,
                }],
            })
        }
        PaperItem::Table(6) => {
            let (a, b) = score_pair();
            let e = effects_from_distributions(&a, &b)?;
            Ok(score_report("table-6", "Six ordinal scores", &a, &b, &e))
        }
        PaperItem::Table(7) => {
            let (a, b) = merged_score_pair();
            let e = effects_from_distributions(&a, &b)?;
            Ok(score_report("table-7", "Merged ordinal scores (3,4,5 -> 4)", &a, &b, &e))
        }
        PaperItem::Table(8) => {
            let mut rows = Vec::new();
            for (qa, qb) in binary_rate_rows() {
                let e = binary_effects(
                    &decimal_to_rational(qa).expect("static rate"),
                    &decimal_to_rational(qb).expect("static rate"),
                )?;
                rows.push(vec![
                    Cell::text(qa),
                    Cell::text(qb),
                    Cell::num(e.p_zero_f64()),
                    Cell::ext(&e.lambda_wr),
                    Cell::ext(&e.lambda_so),
                ]);
            }
            Ok(PaperReport {
                name: "table-8".into(),
                title: "Win ratio versus success odds for binary rates".into(),
                tables: vec![TableBlock {
                    title: "Binary rates".into(),
                    columns: vec![
                        "q_A".into(),
                        "q_B".into(),
                        "p0".into(),
                        "lambda_WR = OR".into(),
                        "lambda_SO".into(),
                    ],
                    rows,
                }],
            })
        }
        PaperItem::Table(n) => Err(Error::InvalidConfig(format!(
            "no built-in table {n}; available: {TABLES:?}"
        ))),
        PaperItem::Example(name) => match name.as_str() {
            "dice" => {
                let groups: Vec<EffectInput> = dice().into_iter().map(EffectInput::Sample).collect();
                let m = pairwise_effects(&groups)?;
                let report = detect_cycles(&m, EdgeRule::Theta);
                let mut rows = Vec::new();
                for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
                    let e = m.cell(i, j);
                    rows.push(vec![
                        Cell::text(format!("{}/{}", m.labels()[i], m.labels()[j])),
                        Cell::num(e.theta_f64()),
                        Cell::ext(&e.lambda_so),
                        Cell::ext(&e.lambda_wr),
                    ]);
                }
                Ok(PaperReport {
                    name: "example-dice".into(),
                    title: "Non-transitive dice".into(),
                    tables: vec![
                        TableBlock {
                            title: "Pairwise comparisons".into(),
                            columns: vec![
                                "comparison".into(),
                                "theta".into(),
                                "lambda_SO".into(),
                                "lambda_WR".into(),
                            ],
                            rows,
                        },
                        cycle_table(&report),
                    ],
                })
            }
            "mixture" => {
                let groups: Vec<EffectInput> = dice().into_iter().map(EffectInput::Sample).collect();
                let effects = mixture_reference_effects(&groups, None)?;
                let rows = groups
                    .iter()
                    .zip(&effects)
                    .map(|(g, e)| {
                        let (p0, theta, so, wr) = effects_cells(e);
                        vec![Cell::text(format!("{}/mixture", g.label())), p0, theta, so, wr]
                    })
                    .collect();
                Ok(PaperReport {
                    name: "example-mixture".into(),
                    title: "Each die against the pooled mixture".into(),
                    tables: vec![TableBlock {
                        title: "Mixture reference".into(),
                        columns: vec![
                            "comparison".into(),
                            "p0".into(),
                            "theta".into(),
                            "lambda_SO".into(),
                            "lambda_WR".into(),
                        ],
                        rows,
                    }],
                })
            }
            "stratified" => {
                let summary = stratified_summary(&dice_strata(), MeanWeighting::Unweighted)?;
                Ok(PaperReport {
                    name: "example-stratified".into(),
                    title: "Stratified dice comparison".into(),
                    tables: vec![stratified_table(&summary)],
                })
            }
            "figure1" => {
                let mut rows = Vec::new();
                for (qa, qb) in figure_rates() {
                    let e = binary_effects(
                        &decimal_to_rational(qa).expect("static rate"),
                        &decimal_to_rational(qb).expect("static rate"),
                    )?;
                    rows.push(vec![
                        Cell::text(qa),
                        Cell::text(qb),
                        Cell::num(e.p_zero_f64()),
                        Cell::ext(&e.lambda_wr),
                        Cell::ext(&e.lambda_so),
                    ]);
                }
                Ok(PaperReport {
                    name: "example-figure1".into(),
                    title: "Two dichotomous trials with identical win ratio".into(),
                    tables: vec![TableBlock {
                        title: "Success rates".into(),
                        columns: vec![
                            "q_A".into(),
                            "q_B".into(),
                            "p0".into(),
                            "lambda_WR".into(),
                            "lambda_SO".into(),
                        ],
                        rows,
                    }],
                })
            }
            other => Err(Error::InvalidConfig(format!(
                "no built-in example '{other}'; available: {EXAMPLES:?}"
            ))),
        },
    }
}

/// Every built-in item, for `paper --all`.
pub fn reproduce_all() -> Result<Vec<PaperReport>> {
    let mut out = Vec::new();
    for t in TABLES {
        out.push(reproduce(&PaperItem::Table(t))?);
    }
    for e in EXAMPLES {
        out.push(reproduce(&PaperItem::Example(e.to_string()))?);
    }
    Ok(out)
}

fn score_report(
    name: &str,
    title: &str,
    a: &DiscreteDistribution,
    b: &DiscreteDistribution,
    e: &EffectEstimates,
) -> PaperReport {
    let (p0, theta, so, wr) = effects_cells(e);
    PaperReport {
        name: name.into(),
        title: title.into(),
        tables: vec![
            dist_table("Score probabilities", &[a, b]),
            TableBlock {
                title: "Effects".into(),
                columns: vec!["p0".into(), "theta".into(), "lambda_SO".into(), "lambda_WR".into()],
                rows: vec![vec![p0, theta, so, wr]],
            },
        ],
    }
}

fn cycle_table(report: &TournamentReport) -> TableBlock {
    let mut rows: Vec<Vec<Cell>> = report
        .cycles
        .iter()
        .map(|c| {
            let mut path = c.clone();
            path.push(c[0].clone());
            vec![Cell::text("cycle"), Cell::text(path.join(" -> "))]
        })
        .collect();
    rows.push(vec![
        Cell::text("transitive"),
        Cell::text(if report.transitive { "yes" } else { "no" }),
    ]);
    TableBlock {
        title: "Dominance".into(),
        columns: vec!["item".into(), "value".into()],
        rows,
    }
}

fn stratified_table(s: &StratifiedSummary) -> TableBlock {
    let mut rows: Vec<Vec<Cell>> = s
        .per_stratum
        .iter()
        .map(|(label, e)| {
            vec![
                Cell::text(label),
                Cell::num(e.theta_f64()),
                Cell::ext(&e.lambda_so),
                Cell::ext(&e.lambda_wr),
            ]
        })
        .collect();
    rows.push(vec![
        Cell::text("means"),
        Cell::num(crate::rational::to_f64(&s.mean_theta)),
        Cell::ext(&s.mean_lambda_so),
        Cell::ext(&s.mean_lambda_wr),
    ]);
    rows.push(vec![
        Cell::text("pooled"),
        Cell::num(s.pooled.theta_f64()),
        Cell::ext(&s.pooled.lambda_so),
        Cell::ext(&s.pooled.lambda_wr),
    ]);
    TableBlock {
        title: "Per-stratum effects".into(),
        columns: vec!["stratum".into(), "theta".into(), "lambda_SO".into(), "lambda_WR".into()],
        rows,
    }
}

//! Structured reports and their text, markdown, JSON and SVG renderings.
//!
//! JSON carries full-precision numbers with the extended states serialized
//! as the strings `"inf"` and `"undef"`; display rounding (half away from
//! zero, default 3 digits) applies only to the text and markdown renderers,
//! which print the extended states as `∞` and `–`.

use std::fmt::Write as _;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::effects::{EffectEstimates, Extended};
use crate::error::{Error, Result};
use crate::inference::{CiMethod, ConfidenceInterval, TestResult};
use crate::multigroup::{PairwiseMatrix, StratifiedSummary, TournamentReport};

/// A number that may be `inf` or `undef`; JSON form is a plain number or one
/// of those two strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtScalar {
    Finite(f64),
    Inf,
    Undef,
}

impl ExtScalar {
    pub fn from_extended(e: &Extended) -> Self {
        match e {
            Extended::Finite(r) => ExtScalar::Finite(crate::rational::to_f64(r)),
            Extended::PlusInfinity => ExtScalar::Inf,
            Extended::Undefined => ExtScalar::Undef,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            ExtScalar::Undef
        } else if x.is_infinite() {
            ExtScalar::Inf
        } else {
            ExtScalar::Finite(x)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            ExtScalar::Finite(x) => x,
            ExtScalar::Inf => f64::INFINITY,
            ExtScalar::Undef => f64::NAN,
        }
    }
}

impl Serialize for ExtScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtScalar::Finite(x) => serializer.serialize_f64(*x),
            ExtScalar::Inf => serializer.serialize_str("inf"),
            ExtScalar::Undef => serializer.serialize_str("undef"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = ExtScalar;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number, \"inf\" or \"undef\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtScalar, E> {
                Ok(ExtScalar::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtScalar, E> {
                Ok(ExtScalar::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtScalar, E> {
                Ok(ExtScalar::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtScalar, E> {
                match v {
                    "inf" => Ok(ExtScalar::Inf),
                    "undef" => Ok(ExtScalar::Undef),
                    other => Err(E::custom(format!("unknown extended value '{other}'"))),
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// The shared effect block of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectsBlock {
    pub p_plus: f64,
    pub p_zero: f64,
    pub p_minus: f64,
    pub theta: f64,
    pub lambda_so: ExtScalar,
    pub lambda_wr: ExtScalar,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub odds_ratio: Option<ExtScalar>,
}

impl EffectsBlock {
    pub fn from_estimates(e: &EffectEstimates) -> Self {
        EffectsBlock {
            p_plus: e.p_plus_f64(),
            p_zero: e.p_zero_f64(),
            p_minus: e.p_minus_f64(),
            theta: e.theta_f64(),
            lambda_so: ExtScalar::from_extended(&e.lambda_so),
            lambda_wr: ExtScalar::from_extended(&e.lambda_wr),
            odds_ratio: e.odds_ratio.as_ref().map(ExtScalar::from_extended),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsBlock {
    pub n_a: u64,
    pub n_b: u64,
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub n_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBlock {
    pub lower: ExtScalar,
    pub upper: ExtScalar,
    pub level: f64,
    pub method: String,
}

impl IntervalBlock {
    pub fn from_interval(ci: &ConfidenceInterval) -> Self {
        IntervalBlock {
            lower: ExtScalar::from_f64(ci.lower),
            upper: ExtScalar::from_f64(ci.upper),
            level: ci.level,
            method: match ci.method {
                CiMethod::LogitT => "logit_t".into(),
                CiMethod::BootstrapPercentile => "bootstrap_percentile".into(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectsReport {
    pub group_a: String,
    pub group_b: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counts: Option<CountsBlock>,
    pub effects: EffectsBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub group_a: String,
    pub group_b: String,
    pub n_a: u64,
    pub n_b: u64,
    pub theta_hat: f64,
    pub variance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub df: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degenerate: Option<String>,
    pub lambda_so_hat: ExtScalar,
    pub lambda_wr_hat: ExtScalar,
    pub level: f64,
    pub reps: u32,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ci_theta: Option<IntervalBlock>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ci_lambda_so: Option<IntervalBlock>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ci_lambda_wr: Option<IntervalBlock>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl TestReport {
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        test: &TestResult,
        effects: &EffectEstimates,
        group_a: &str,
        group_b: &str,
        level: f64,
        reps: u32,
        seed: u64,
        ci_theta: Option<&ConfidenceInterval>,
        ci_lambda_so: Option<&ConfidenceInterval>,
        ci_lambda_wr: Option<&ConfidenceInterval>,
        notes: Vec<String>,
    ) -> Self {
        TestReport {
            group_a: group_a.to_string(),
            group_b: group_b.to_string(),
            n_a: test.n1 as u64,
            n_b: test.n2 as u64,
            theta_hat: test.theta_hat,
            variance: test.variance_hat,
            df: test.df,
            statistic: test.statistic,
            p_value: test.p_value,
            degenerate: test.degenerate.clone(),
            lambda_so_hat: ExtScalar::from_extended(&effects.lambda_so),
            lambda_wr_hat: ExtScalar::from_extended(&effects.lambda_wr),
            level,
            reps,
            seed,
            ci_theta: ci_theta.map(IntervalBlock::from_interval),
            ci_lambda_so: ci_lambda_so.map(IntervalBlock::from_interval),
            ci_lambda_wr: ci_lambda_wr.map(IntervalBlock::from_interval),
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseCell {
    pub a: String,
    pub b: String,
    pub effects: EffectsBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub labels: Vec<String>,
    pub comparisons: Vec<PairwiseCell>,
    pub edges: Vec<[String; 2]>,
    pub cycles: Vec<Vec<String>>,
    pub transitive: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mixture: Option<Vec<PairwiseCell>>,
}

impl PairwiseReport {
    pub fn assemble(
        matrix: &PairwiseMatrix,
        tournament: &TournamentReport,
        mixture: Option<&[EffectEstimates]>,
    ) -> Self {
        let labels = matrix.labels().to_vec();
        let mut comparisons = Vec::new();
        for i in 0..matrix.k() {
            for j in 0..matrix.k() {
                if i != j {
                    comparisons.push(PairwiseCell {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                        effects: EffectsBlock::from_estimates(matrix.cell(i, j)),
                    });
                }
            }
        }
        let edges = tournament
            .edges
            .iter()
            .map(|(i, j)| [labels[*i].clone(), labels[*j].clone()])
            .collect();
        PairwiseReport {
            labels: labels.clone(),
            comparisons,
            edges,
            cycles: tournament.cycles.clone(),
            transitive: tournament.transitive,
            mixture: mixture.map(|effects| {
                labels
                    .iter()
                    .zip(effects)
                    .map(|(l, e)| PairwiseCell {
                        a: l.clone(),
                        b: "mixture".into(),
                        effects: EffectsBlock::from_estimates(e),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumRow {
    pub stratum: String,
    pub effects: EffectsBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedReport {
    pub group_a: String,
    pub group_b: String,
    pub strata: Vec<StratumRow>,
    pub mean_theta: f64,
    pub mean_lambda_so: ExtScalar,
    pub mean_lambda_wr: ExtScalar,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lambda_so_poisoned_by: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lambda_wr_poisoned_by: Vec<String>,
    pub pooled: EffectsBlock,
}

impl StratifiedReport {
    pub fn assemble(summary: &StratifiedSummary, group_a: &str, group_b: &str) -> Self {
        StratifiedReport {
            group_a: group_a.to_string(),
            group_b: group_b.to_string(),
            strata: summary
                .per_stratum
                .iter()
                .map(|(label, e)| StratumRow {
                    stratum: label.clone(),
                    effects: EffectsBlock::from_estimates(e),
                })
                .collect(),
            mean_theta: crate::rational::to_f64(&summary.mean_theta),
            mean_lambda_so: ExtScalar::from_extended(&summary.mean_lambda_so),
            mean_lambda_wr: ExtScalar::from_extended(&summary.mean_lambda_wr),
            lambda_so_poisoned_by: summary.lambda_so_poisoned_by.clone(),
            lambda_wr_poisoned_by: summary.lambda_wr_poisoned_by.clone(),
            pooled: EffectsBlock::from_estimates(&summary.pooled),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryReport {
    pub q_a: f64,
    pub q_b: f64,
    pub effects: EffectsBlock,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub svg_path: Option<String>,
}

/// One table of a built-in reproduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableBlock {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// A table cell: a full-precision number or free text (extended values are
/// carried as the strings `inf`/`undef`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    pub fn text<S: Into<String>>(s: S) -> Self {
        Cell::Text(s.into())
    }

    pub fn num(x: f64) -> Self {
        Cell::Number(x)
    }

    pub fn ext(e: &Extended) -> Self {
        match ExtScalar::from_extended(e) {
            ExtScalar::Finite(x) => Cell::Number(x),
            ExtScalar::Inf => Cell::Text("inf".into()),
            ExtScalar::Undef => Cell::Text("undef".into()),
        }
    }

    /// Numeric view: numbers as themselves, `inf` as infinity, anything else
    /// as NaN. Handy for verification.
    pub fn as_f64(&self) -> f64 {
        match self {
            Cell::Number(x) => *x,
            Cell::Text(t) if t == "inf" => f64::INFINITY,
            Cell::Text(_) => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperReport {
    pub name: String,
    pub title: String,
    pub tables: Vec<TableBlock>,
}

/// The top-level report tree; `kind` tags the JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Effects(EffectsReport),
    Test(TestReport),
    Pairwise(PairwiseReport),
    Stratified(StratifiedReport),
    Binary(BinaryReport),
    Paper { reports: Vec<PaperReport> },
}

/// Output format of the CLI renderers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Markdown,
    Json,
}

/// Renders a report; `digits` controls display rounding in text and
/// markdown only.
pub fn render(report: &Report, format: Format, digits: u8) -> Result<String> {
    if digits > 9 {
        return Err(Error::InvalidConfig(format!("digits must be in 0..=9, got {digits}")));
    }
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Text => render_tables(report, digits, TableStyle::Text),
        Format::Markdown => render_tables(report, digits, TableStyle::Markdown),
    })
}

/// Half-away-from-zero rounding to `digits` places.
pub fn round_half_away(x: f64, digits: u8) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let p = 10f64.powi(digits as i32);
    let scaled = x * p;
    let floor = scaled.floor();
    let frac = scaled - floor;
    let rounded = if x >= 0.0 {
        if frac >= 0.5 {
            floor + 1.0
        } else {
            floor
        }
    } else if frac > 0.5 {
        floor + 1.0
    } else {
        floor
    };
    rounded / p
}

fn fmt_num(x: f64, digits: u8) -> String {
    format!("{:.*}", digits as usize, round_half_away(x, digits))
}

fn fmt_ext(x: ExtScalar, digits: u8) -> String {
    match x {
        ExtScalar::Finite(v) => fmt_num(v, digits),
        ExtScalar::Inf => "∞".into(),
        ExtScalar::Undef => "–".into(),
    }
}

fn fmt_cell(c: &Cell, digits: u8) -> String {
    match c {
        Cell::Number(x) => fmt_num(*x, digits),
        Cell::Text(t) => match t.as_str() {
            "inf" => "∞".into(),
            "undef" => "–".into(),
            other => other.to_string(),
        },
    }
}

#[derive(Clone, Copy, PartialEq)]
enum TableStyle {
    Text,
    Markdown,
}

/// Tiny document builder shared by the text and markdown renderers.
struct Doc {
    style: TableStyle,
    out: String,
}

impl Doc {
    fn new(style: TableStyle) -> Self {
        Doc { style, out: String::new() }
    }

    fn heading(&mut self, title: &str) {
        match self.style {
            TableStyle::Markdown => {
                let _ = writeln!(self.out, "## {title}");
            }
            TableStyle::Text => {
                let _ = writeln!(self.out, "{title}");
                let _ = writeln!(self.out, "{}", "-".repeat(title.chars().count()));
            }
        }
        self.out.push('\n');
    }

    fn kv(&mut self, pairs: &[(&str, String)]) {
        match self.style {
            TableStyle::Markdown => {
                for (k, v) in pairs {
                    let _ = writeln!(self.out, "- {k}: {v}");
                }
            }
            TableStyle::Text => {
                let width = pairs.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                for (k, v) in pairs {
                    let _ = writeln!(self.out, "{k:width$}  {v}");
                }
            }
        }
        self.out.push('\n');
    }

    fn table(&mut self, columns: &[String], rows: &[Vec<String>]) {
        match self.style {
            TableStyle::Markdown => {
                let _ = writeln!(self.out, "| {} |", columns.join(" | "));
                let _ = writeln!(
                    self.out,
                    "|{}|",
                    columns.iter().map(|_| " --- ").collect::<Vec<_>>().join("|")
                );
                for row in rows {
                    let _ = writeln!(self.out, "| {} |", row.join(" | "));
                }
            }
            TableStyle::Text => {
                let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
                for row in rows {
                    for (i, cell) in row.iter().enumerate() {
                        widths[i] = widths[i].max(cell.chars().count());
                    }
                }
                let render_row = |cells: &[String], widths: &[usize]| -> String {
                    cells
                        .iter()
                        .enumerate()
                        .map(|(i, c)| format!("{c:>width$}", width = widths[i]))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let _ = writeln!(self.out, "{}", render_row(columns, &widths));
                let _ = writeln!(
                    self.out,
                    "{}",
                    widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  ")
                );
                for row in rows {
                    let _ = writeln!(self.out, "{}", render_row(row, &widths));
                }
            }
        }
        self.out.push('\n');
    }
}

fn effects_rows(e: &EffectsBlock, digits: u8) -> Vec<(&'static str, String)> {
    let mut rows = vec![
        ("p+", fmt_num(e.p_plus, digits)),
        ("p0", fmt_num(e.p_zero, digits)),
        ("p-", fmt_num(e.p_minus, digits)),
        ("theta", fmt_num(e.theta, digits)),
        ("lambda_SO", fmt_ext(e.lambda_so, digits)),
        ("lambda_WR", fmt_ext(e.lambda_wr, digits)),
    ];
    if let Some(or) = e.odds_ratio {
        rows.push(("odds ratio", fmt_ext(or, digits)));
    }
    rows
}

fn interval_str(ci: &IntervalBlock, digits: u8) -> String {
    format!(
        "[{}, {}]  ({:.0}% {})",
        fmt_ext(ci.lower, digits),
        fmt_ext(ci.upper, digits),
        ci.level * 100.0,
        ci.method
    )
}

fn render_tables(report: &Report, digits: u8, style: TableStyle) -> String {
    let mut doc = Doc::new(style);
    let effect_columns: Vec<String> =
        ["comparison", "p0", "theta", "lambda_SO", "lambda_WR"].iter().map(|s| s.to_string()).collect();
    match report {
        Report::Effects(r) => {
            doc.heading(&format!("Effects: {} vs {}", r.group_a, r.group_b));
            if let Some(c) = &r.counts {
                doc.kv(&[
                    ("n_a", c.n_a.to_string()),
                    ("n_b", c.n_b.to_string()),
                    (
                        "pairs",
                        format!("{} (wins {}, ties {}, losses {})", c.n_pairs, c.wins, c.ties, c.losses),
                    ),
                ]);
            }
            doc.kv(&effects_rows(&r.effects, digits));
        }
        Report::Test(r) => {
            doc.heading(&format!("Rank test: {} vs {}", r.group_a, r.group_b));
            let mut pairs: Vec<(&str, String)> = vec![
                ("n_a", r.n_a.to_string()),
                ("n_b", r.n_b.to_string()),
                ("theta_hat", fmt_num(r.theta_hat, digits)),
                ("lambda_SO_hat", fmt_ext(r.lambda_so_hat, digits)),
                ("lambda_WR_hat", fmt_ext(r.lambda_wr_hat, digits)),
                ("variance", fmt_num(r.variance, digits.max(6))),
            ];
            if let Some(reason) = &r.degenerate {
                pairs.push(("degenerate", reason.clone()));
            } else if let (Some(t), Some(df), Some(p)) = (r.statistic, r.df, r.p_value) {
                pairs.push(("statistic", fmt_num(t, digits.max(4))));
                pairs.push(("df", fmt_num(df, digits.max(2))));
                pairs.push(("p_value", fmt_num(p, digits.max(4))));
            }
            if let Some(ci) = &r.ci_theta {
                pairs.push(("theta CI", interval_str(ci, digits)));
            }
            if let Some(ci) = &r.ci_lambda_so {
                pairs.push(("lambda_SO CI", interval_str(ci, digits)));
            }
            if let Some(ci) = &r.ci_lambda_wr {
                pairs.push(("lambda_WR CI", interval_str(ci, digits)));
            }
            doc.kv(&pairs);
            for note in &r.notes {
                let _ = writeln!(doc.out, "note: {note}");
            }
        }
        Report::Pairwise(r) => {
            doc.heading(&format!("Pairwise effects over {} groups", r.labels.len()));
            let rows: Vec<Vec<String>> = r
                .comparisons
                .iter()
                .map(|c| {
                    vec![
                        format!("{} vs {}", c.a, c.b),
                        fmt_num(c.effects.p_zero, digits),
                        fmt_num(c.effects.theta, digits),
                        fmt_ext(c.effects.lambda_so, digits),
                        fmt_ext(c.effects.lambda_wr, digits),
                    ]
                })
                .collect();
            doc.table(&effect_columns, &rows);
            let mut pairs: Vec<(&str, String)> = vec![(
                "edges",
                r.edges.iter().map(|[a, b]| format!("{a}>{b}")).collect::<Vec<_>>().join(", "),
            )];
            if r.cycles.is_empty() {
                pairs.push(("cycles", "none".into()));
            } else {
                for c in &r.cycles {
                    let mut path = c.clone();
                    path.push(c[0].clone());
                    pairs.push(("cycle", path.join(" -> ")));
                }
            }
            pairs.push(("transitive", if r.transitive { "yes".into() } else { "no".into() }));
            doc.kv(&pairs);
            if let Some(mix) = &r.mixture {
                let rows: Vec<Vec<String>> = mix
                    .iter()
                    .map(|c| {
                        vec![
                            format!("{} vs mixture", c.a),
                            fmt_num(c.effects.p_zero, digits),
                            fmt_num(c.effects.theta, digits),
                            fmt_ext(c.effects.lambda_so, digits),
                            fmt_ext(c.effects.lambda_wr, digits),
                        ]
                    })
                    .collect();
                doc.table(&effect_columns, &rows);
            }
        }
        Report::Stratified(r) => {
            doc.heading(&format!("Stratified comparison: {} vs {}", r.group_a, r.group_b));
            let columns: Vec<String> =
                ["stratum", "p0", "theta", "lambda_SO", "lambda_WR"].iter().map(|s| s.to_string()).collect();
            let mut rows: Vec<Vec<String>> = r
                .strata
                .iter()
                .map(|s| {
                    vec![
                        s.stratum.clone(),
                        fmt_num(s.effects.p_zero, digits),
                        fmt_num(s.effects.theta, digits),
                        fmt_ext(s.effects.lambda_so, digits),
                        fmt_ext(s.effects.lambda_wr, digits),
                    ]
                })
                .collect();
            rows.push(vec![
                "means".into(),
                String::new(),
                fmt_num(r.mean_theta, digits),
                fmt_ext(r.mean_lambda_so, digits),
                fmt_ext(r.mean_lambda_wr, digits),
            ]);
            rows.push(vec![
                "pooled".into(),
                fmt_num(r.pooled.p_zero, digits),
                fmt_num(r.pooled.theta, digits),
                fmt_ext(r.pooled.lambda_so, digits),
                fmt_ext(r.pooled.lambda_wr, digits),
            ]);
            doc.table(&columns, &rows);
            if !r.lambda_so_poisoned_by.is_empty() {
                let _ = writeln!(doc.out, "note: mean lambda_SO poisoned by strata {:?}", r.lambda_so_poisoned_by);
            }
            if !r.lambda_wr_poisoned_by.is_empty() {
                let _ = writeln!(doc.out, "note: mean lambda_WR poisoned by strata {:?}", r.lambda_wr_poisoned_by);
            }
        }
        Report::Binary(r) => {
            doc.heading("Binary comparison");
            let mut pairs = vec![("q_A", fmt_num(r.q_a, digits)), ("q_B", fmt_num(r.q_b, digits))];
            pairs.extend(effects_rows(&r.effects, digits));
            if let Some(path) = &r.svg_path {
                pairs.push(("svg", path.clone()));
            }
            doc.kv(&pairs);
        }
        Report::Paper { reports } => {
            for p in reports {
                doc.heading(&format!("{}: {}", p.name, p.title));
                for t in &p.tables {
                    let rows: Vec<Vec<String>> = t
                        .rows
                        .iter()
                        .map(|row| row.iter().map(|c| fmt_cell(c, digits)).collect())
                        .collect();
                    doc.table(&t.columns, &rows);
                }
            }
        }
    }
    doc.out
}

/// Renders the stacked-bar chart for a binary comparison: one bar per
/// treatment split into success (`q`) and failure (`1-q`), with numeric
/// labels. Static SVG 1.1, no scripting.
pub fn render_binary_svg(q_a: f64, q_b: f64) -> String {
    const W: f64 = 420.0;
    const H: f64 = 300.0;
    const BAR_W: f64 = 90.0;
    const PLOT_TOP: f64 = 40.0;
    const PLOT_BOTTOM: f64 = 260.0;
    let plot_h = PLOT_BOTTOM - PLOT_TOP;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"##
    );
    let _ = writeln!(s, r##"  <rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"##);
    for (i, (label, q)) in [("A", q_a), ("B", q_b)].into_iter().enumerate() {
        let x = 80.0 + i as f64 * 180.0;
        let success_h = plot_h * q;
        let fail_h = plot_h - success_h;
        let _ = writeln!(
            s,
            r##"  <rect x="{x}" y="{PLOT_TOP}" width="{BAR_W}" height="{fail_h:.2}" fill="#d9d9d9" stroke="#555555"/>"##
        );
        let _ = writeln!(
            s,
            r##"  <rect x="{x}" y="{:.2}" width="{BAR_W}" height="{success_h:.2}" fill="#4878a8" stroke="#555555"/>"##,
            PLOT_TOP + fail_h
        );
        let _ = writeln!(
            s,
            r##"  <text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="16" fill="white">{}</text>"##,
            x + BAR_W / 2.0,
            (PLOT_TOP + fail_h + success_h / 2.0 + 5.0).min(PLOT_BOTTOM - 6.0),
            trim_label(q)
        );
        let _ = writeln!(
            s,
            r##"  <text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" fill="#333333">{}</text>"##,
            x + BAR_W / 2.0,
            PLOT_TOP + fail_h.max(18.0) - 6.0,
            trim_label(1.0 - q)
        );
        let _ = writeln!(
            s,
            r##"  <text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="15" fill="#000000">{label}</text>"##,
            x + BAR_W / 2.0,
            PLOT_BOTTOM + 22.0
        );
    }
    let _ = writeln!(
        s,
        r##"  <line x1="40" y1="{PLOT_BOTTOM}" x2="{:.2}" y2="{PLOT_BOTTOM}" stroke="#000000"/>"##,
        W - 40.0
    );
    s.push_str("</svg>\n");
    s
}

fn trim_label(q: f64) -> String {
    format!("{:.3}", round_half_away(q, 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio_u64;

    #[test]
    fn ext_scalar_json_forms() {
        assert_eq!(serde_json::to_string(&ExtScalar::Finite(2.125)).unwrap(), "2.125");
        assert_eq!(serde_json::to_string(&ExtScalar::Inf).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&ExtScalar::Undef).unwrap(), "\"undef\"");
        assert_eq!(serde_json::from_str::<ExtScalar>("2.5").unwrap(), ExtScalar::Finite(2.5));
        assert_eq!(serde_json::from_str::<ExtScalar>("\"inf\"").unwrap(), ExtScalar::Inf);
        assert_eq!(serde_json::from_str::<ExtScalar>("\"undef\"").unwrap(), ExtScalar::Undef);
        assert!(serde_json::from_str::<ExtScalar>("\"nope\"").is_err());
    }

    #[test]
    fn half_away_rounding() {
        assert_eq!(round_half_away(2.125, 2), 2.13);
        assert_eq!(round_half_away(-2.125, 2), -2.13);
        assert_eq!(round_half_away(1.4691, 2), 1.47);
        assert_eq!(round_half_away(0.125, 2), 0.13);
        assert_eq!(round_half_away(1.0, 3), 1.0);
        assert!(round_half_away(f64::INFINITY, 2).is_infinite());
    }

    #[test]
    fn report_json_round_trips() {
        let e = crate::effects::effects_from_counts(&crate::effects::PairCounts::new(9, 16, 0)).unwrap();
        let report = Report::Effects(EffectsReport {
            group_a: "A".into(),
            group_b: "B".into(),
            counts: Some(CountsBlock { n_a: 5, n_b: 5, wins: 9, ties: 16, losses: 0, n_pairs: 25 }),
            effects: EffectsBlock::from_estimates(&e),
        });
        let rendered = render(&report, Format::Json, 3).unwrap();
        let parsed: Report = serde_json::from_str(&rendered).unwrap();
        let re_rendered = render(&parsed, Format::Json, 3).unwrap();
        assert_eq!(rendered, re_rendered);
        assert!(rendered.contains("\"lambda_wr\": \"inf\""), "{rendered}");
    }

    #[test]
    fn undefined_win_ratio_serializes_as_undef() {
        let e = crate::effects::effects_from_counts(&crate::effects::PairCounts::new(0, 4, 0)).unwrap();
        let block = EffectsBlock::from_estimates(&e);
        let json = serde_json::to_string(&block).unwrap();
        assert!(json.contains("\"lambda_wr\":\"undef\""), "{json}");
    }

    #[test]
    fn text_rendering_uses_display_symbols() {
        let e = crate::effects::EffectEstimates::from_probabilities(
            ratio_u64(1, 2),
            ratio_u64(1, 2),
            ratio_u64(0, 1),
        )
        .unwrap();
        let report = Report::Effects(EffectsReport {
            group_a: "A".into(),
            group_b: "B".into(),
            counts: None,
            effects: EffectsBlock::from_estimates(&e),
        });
        let text = render(&report, Format::Text, 3).unwrap();
        assert!(text.contains('∞'), "{text}");
        let md = render(&report, Format::Markdown, 3).unwrap();
        assert!(md.contains("- theta: 0.750"), "{md}");
    }

    #[test]
    fn svg_has_two_labeled_bars() {
        let svg = render_binary_svg(0.821, 0.6);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(">0.821<"), "{svg}");
        assert!(svg.contains(">0.600<"), "{svg}");
        assert!(svg.contains(">A<") && svg.contains(">B<"));
        assert_eq!(svg.matches("<rect").count(), 5); // background + 2 bars x 2 segments
    }

    #[test]
    fn digits_out_of_range_is_usage_error() {
        let report = Report::Paper { reports: vec![] };
        assert!(render(&report, Format::Text, 10).is_err());
    }
}

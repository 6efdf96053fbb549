//! Command-line front end: effect estimation, Brunner-Munzel inference,
//! multi-group and stratified analyses, binary comparisons and the built-in
//! verification tables.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 data error (parse/scale),
//! 4 degenerate statistics. Reports go to stdout, diagnostics to stderr, and
//! every error line starts with a greppable code (`E_USAGE`, `E_PARSE`,
//! `E_SCALE`, `E_DEGENERATE`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use releff::builtin;
use releff::effects::{binary_effects, count_pairs_fast, effects_from_counts, Extended};
use releff::error::Error;
use releff::inference::{brunner_munzel, ci_lambda_so, ci_lambda_wr_bootstrap, ci_theta_logit};
use releff::io::{parse_csv, parse_distribution_spec, CsvConfig};
use releff::multigroup::{
    detect_cycles, mixture_reference_effects, pairwise_effects, stratified_summary, EdgeRule,
    EffectInput, MeanWeighting, Stratum,
};
use releff::rational::decimal_to_rational;
use releff::report::{
    self, render, render_binary_svg, BinaryReport, CountsBlock, EffectsBlock, EffectsReport,
    PairwiseReport, Report, StratifiedReport, TestReport,
};
use releff::sample::{DiscreteDistribution, Sample};
use releff::value::Scale;

#[derive(Parser)]
#[command(
    name = "releff",
    version,
    about = "Relative effect, success odds and win ratio for two-sample comparisons with ties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Display digits in text/markdown output (0..=9); JSON always carries
    /// full precision.
    #[arg(long, global = true, default_value_t = 3)]
    digits: u8,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Markdown,
    Json,
}

impl From<FormatArg> for report::Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => report::Format::Text,
            FormatArg::Markdown => report::Format::Markdown,
            FormatArg::Json => report::Format::Json,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// CSV file with one observation per row.
    #[arg(long, conflicts_with = "distributions")]
    input: Option<PathBuf>,
    /// JSON distribution spec instead of raw data.
    #[arg(long)]
    distributions: Option<PathBuf>,
    /// Value scale: numeric(D) with D decimals, or ordinal([c1,...,ck]).
    #[arg(long, default_value = "numeric(9)")]
    scale: String,
    /// Name of the value column.
    #[arg(long, default_value = "value")]
    value_col: String,
    /// Name of the group column.
    #[arg(long, default_value = "group")]
    group_col: String,
    /// Name of the stratum column, when present.
    #[arg(long)]
    stratum_col: Option<String>,
    /// Accept fully blank lines instead of treating them as errors.
    #[arg(long)]
    skip_blank_rows: bool,
}

enum LoadedInput {
    Csv(releff::io::Dataset),
    Distributions(Vec<DiscreteDistribution>),
}

impl InputArgs {
    fn csv_config(&self) -> Result<CsvConfig, Error> {
        let scale = Scale::parse_spec(&self.scale)?;
        Ok(CsvConfig {
            value_column: self.value_col.clone(),
            group_column: self.group_col.clone(),
            stratum_column: self.stratum_col.clone(),
            scale,
            skip_blank_rows: self.skip_blank_rows,
        })
    }

    fn load(&self) -> Result<LoadedInput, Error> {
        match (&self.input, &self.distributions) {
            (Some(path), None) => {
                let raw = std::fs::read_to_string(path)?;
                Ok(LoadedInput::Csv(parse_csv(&raw, &self.csv_config()?)?))
            }
            (None, Some(path)) => {
                let raw = std::fs::read_to_string(path)?;
                Ok(LoadedInput::Distributions(parse_distribution_spec(&raw)?))
            }
            _ => Err(Error::InvalidConfig(
                "exactly one of --input (CSV) or --distributions (JSON) is required".into(),
            )),
        }
    }

    /// The two named comparison arms.
    fn pair(&self, group_a: &str, group_b: &str) -> Result<(EffectInput, EffectInput), Error> {
        match self.load()? {
            LoadedInput::Csv(data) => Ok((
                EffectInput::Sample(data.sample(group_a, None)?),
                EffectInput::Sample(data.sample(group_b, None)?),
            )),
            LoadedInput::Distributions(dists) => {
                let find = |label: &str| {
                    dists
                        .iter()
                        .find(|d| d.label() == label)
                        .cloned()
                        .ok_or_else(|| Error::InvalidConfig(format!("no distribution labeled '{label}'")))
                };
                Ok((EffectInput::Distribution(find(group_a)?), EffectInput::Distribution(find(group_b)?)))
            }
        }
    }

    /// Both arms as samples (inference needs raw data).
    fn sample_pair(&self, group_a: &str, group_b: &str) -> Result<(Sample, Sample), Error> {
        match self.pair(group_a, group_b)? {
            (EffectInput::Sample(a), EffectInput::Sample(b)) => Ok((a, b)),
            _ => Err(Error::InvalidConfig(
                "this command needs raw data (--input CSV), not distributions".into(),
            )),
        }
    }

    fn groups(&self) -> Result<Vec<EffectInput>, Error> {
        match self.load()? {
            LoadedInput::Csv(data) => {
                Ok(data.group_samples()?.into_iter().map(EffectInput::Sample).collect())
            }
            LoadedInput::Distributions(dists) => {
                Ok(dists.into_iter().map(EffectInput::Distribution).collect())
            }
        }
    }
}

#[derive(Args)]
struct InferenceArgs {
    /// Two-sided significance level; the confidence level is 1 - alpha.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bootstrap replicates for the win-ratio interval.
    #[arg(long, default_value_t = 10_000)]
    reps: u32,
    /// Bootstrap seed; identical seeds give byte-identical reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InferenceArgs {
    fn level(&self) -> Result<f64, Error> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha must be in (0,1), got {}", self.alpha)));
        }
        Ok(1.0 - self.alpha)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pair counts and effect estimates for two named groups.
    Effects {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        group_a: String,
        #[arg(long)]
        group_b: String,
    },
    /// Brunner-Munzel test with theta, success-odds and win-ratio intervals.
    Test {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        group_a: String,
        #[arg(long)]
        group_b: String,
        #[command(flatten)]
        inference: InferenceArgs,
    },
    /// Pairwise effect matrix over all groups with dominance-cycle search.
    Pairwise {
        #[command(flatten)]
        input: InputArgs,
        /// Also compare every group against the pooled mixture.
        #[arg(long)]
        mixture: bool,
        /// Effect deciding dominance edges.
        #[arg(long, value_enum, default_value_t = EdgeRuleArg::Theta)]
        edge_rule: EdgeRuleArg,
    },
    /// Per-stratum effects, their means, and the pooled comparison.
    Stratified {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        group_a: String,
        #[arg(long)]
        group_b: String,
        /// Weight stratum means by sample size instead of equally.
        #[arg(long)]
        weighted: bool,
    },
    /// Effects for dichotomous outcomes from two success rates.
    Binary {
        /// Success rate of treatment A, e.g. 0.95.
        #[arg(long)]
        qa: String,
        /// Success rate of treatment B.
        #[arg(long)]
        qb: String,
        /// Write a stacked-bar SVG of the two rates to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Reproduce the built-in reference tables and examples.
    Paper {
        /// Table number (1, 2, 4, 5, 6, 7 or 8).
        #[arg(long)]
        table: Option<u8>,
        /// Example name (dice, mixture, stratified, figure1).
        #[arg(long)]
        example: Option<String>,
        /// Run every table and example.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgeRuleArg {
    Theta,
    WinRatio,
}

impl From<EdgeRuleArg> for EdgeRule {
    fn from(r: EdgeRuleArg) -> Self {
        match r {
            EdgeRuleArg::Theta => EdgeRule::Theta,
            EdgeRuleArg::WinRatio => EdgeRule::WinRatio,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("E_USAGE: {e}");
            return ExitCode::from(2);
        }
    };

    let format: report::Format = cli.format.into();
    match run(cli.command, format, cli.digits) {
        Ok(Outcome::Ok(rendered)) => {
            print!("{rendered}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Degenerate { rendered, reason }) => {
            print!("{rendered}");
            eprintln!("E_DEGENERATE: {reason}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("{}: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}

enum Outcome {
    Ok(String),
    /// The report was still rendered (with degenerate flags), but the run
    /// signals a degenerate statistic.
    Degenerate {
        rendered: String,
        reason: String,
    },
}

fn run(command: Command, format: report::Format, digits: u8) -> Result<Outcome, Error> {
    match command {
        Command::Effects { input, group_a, group_b } => {
            let (a, b) = input.pair(&group_a, &group_b)?;
            let counts = match (&a, &b) {
                (EffectInput::Sample(sa), EffectInput::Sample(sb)) => {
                    let c = count_pairs_fast(sa, sb)?;
                    Some(CountsBlock {
                        n_a: sa.len() as u64,
                        n_b: sb.len() as u64,
                        wins: c.wins,
                        ties: c.ties,
                        losses: c.losses,
                        n_pairs: c.n_pairs(),
                    })
                }
                _ => None,
            };
            let effects = releff::multigroup::effects_between(&a, &b)?;
            let report = Report::Effects(EffectsReport {
                group_a,
                group_b,
                counts,
                effects: EffectsBlock::from_estimates(&effects),
            });
            Ok(Outcome::Ok(render(&report, format, digits)?))
        }
        Command::Test { input, group_a, group_b, inference } => {
            let level = inference.level()?;
            let (a, b) = input.sample_pair(&group_a, &group_b)?;
            let test = brunner_munzel(&a, &b)?;
            let effects = effects_from_counts(&count_pairs_fast(&a, &b)?)?;
            let mut notes = Vec::new();

            let (ci_theta, ci_so) = if test.degenerate.is_none() {
                (Some(ci_theta_logit(&a, &b, level)?), Some(ci_lambda_so(&a, &b, level)?))
            } else {
                notes.push("logit intervals skipped: degenerate variance".to_string());
                (None, None)
            };
            let ci_wr = if effects.lambda_wr == Extended::Undefined {
                notes.push("win-ratio interval skipped: point estimate is 0/0".to_string());
                None
            } else {
                Some(ci_lambda_wr_bootstrap(&a, &b, level, inference.reps, inference.seed)?)
            };

            let degenerate = test.degenerate.clone();
            let report = Report::Test(TestReport::assemble(
                &test,
                &effects,
                &group_a,
                &group_b,
                level,
                inference.reps,
                inference.seed,
                ci_theta.as_ref(),
                ci_so.as_ref(),
                ci_wr.as_ref(),
                notes,
            ));
            let rendered = render(&report, format, digits)?;
            Ok(match degenerate {
                Some(reason) => Outcome::Degenerate { rendered, reason },
                None => Outcome::Ok(rendered),
            })
        }
        Command::Pairwise { input, mixture, edge_rule } => {
            let groups = input.groups()?;
            let matrix = pairwise_effects(&groups)?;
            let tournament = detect_cycles(&matrix, edge_rule.into());
            let mixture_effects =
                if mixture { Some(mixture_reference_effects(&groups, None)?) } else { None };
            let report = Report::Pairwise(PairwiseReport::assemble(
                &matrix,
                &tournament,
                mixture_effects.as_deref(),
            ));
            Ok(Outcome::Ok(render(&report, format, digits)?))
        }
        Command::Stratified { input, group_a, group_b, weighted } => {
            if input.stratum_col.is_none() {
                return Err(Error::InvalidConfig("stratified analysis needs --stratum-col".into()));
            }
            let data = match input.load()? {
                LoadedInput::Csv(data) => data,
                LoadedInput::Distributions(_) => {
                    return Err(Error::InvalidConfig(
                        "stratified analysis needs raw data (--input CSV with a stratum column)".into(),
                    ))
                }
            };
            let labels = data.stratum_labels();
            if labels.is_empty() {
                return Err(Error::InvalidConfig("no strata found in the input".into()));
            }
            let strata = labels
                .iter()
                .map(|s| {
                    Ok(Stratum {
                        label: s.clone(),
                        a: EffectInput::Sample(data.sample(&group_a, Some(s))?),
                        b: EffectInput::Sample(data.sample(&group_b, Some(s))?),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let weighting = if weighted { MeanWeighting::SampleSize } else { MeanWeighting::Unweighted };
            let summary = stratified_summary(&strata, weighting)?;
            let report = Report::Stratified(StratifiedReport::assemble(&summary, &group_a, &group_b));
            Ok(Outcome::Ok(render(&report, format, digits)?))
        }
        Command::Binary { qa, qb, svg } => {
            let parse_rate = |text: &str| {
                decimal_to_rational(text)
                    .ok_or_else(|| Error::InvalidConfig(format!("unparseable success rate '{text}'")))
            };
            let (ra, rb) = (parse_rate(&qa)?, parse_rate(&qb)?);
            let effects = binary_effects(&ra, &rb)?;
            let q_a = releff::rational::to_f64(&ra);
            let q_b = releff::rational::to_f64(&rb);
            let svg_path = match svg {
                Some(path) => {
                    std::fs::write(&path, render_binary_svg(q_a, q_b))?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            let report = Report::Binary(BinaryReport {
                q_a,
                q_b,
                effects: EffectsBlock::from_estimates(&effects),
                svg_path,
            });
            Ok(Outcome::Ok(render(&report, format, digits)?))
        }
        Command::Paper { table, example, all } => {
            let reports = match (table, example, all) {
                (None, None, _) => builtin::reproduce_all()?,
                (Some(t), None, false) => vec![builtin::reproduce(&builtin::PaperItem::Table(t))?],
                (None, Some(e), false) => {
                    vec![builtin::reproduce(&builtin::PaperItem::Example(e))?]
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "give at most one of --table, --example, --all".into(),
                    ))
                }
            };
            let report = Report::Paper { reports };
            Ok(Outcome::Ok(render(&report, format, digits)?))
        }
    }
}

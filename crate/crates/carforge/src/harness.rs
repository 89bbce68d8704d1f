//! Experiment pipelines and report generation.
//!
//! A pipeline mines rules from the training split, orders them one of five
//! ways, selects by database coverage, and scores accuracy on the test
//! split. The matrix runner repeats that for every measure and pipeline
//! type plus the two measure-free baselines, producing one report row each.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::classifier::ClassifierModel;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::measures::MeasureId;
use crate::mining::{mine_cars, CARRule, MiningConfig};
use crate::ordering::{order, prune_specific, prune_top_k, OrderingStrategy};
use crate::selection::{select_by_coverage, CoverageConfig};

/// The five pipeline shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineType {
    /// Measure-descending sort, keep top k, re-sort by CSA.
    Type1,
    /// Full MCSA ordering, no truncation.
    Type2,
    /// Measure-descending sort, keep top k, use that order directly.
    Type3,
    /// Plain CSA ordering.
    CsaBaseline,
    /// Redundancy pruning, then CSA ordering.
    PrepruneCsa,
}

impl PipelineType {
    pub const ALL: [PipelineType; 5] = [
        PipelineType::Type1,
        PipelineType::Type2,
        PipelineType::Type3,
        PipelineType::CsaBaseline,
        PipelineType::PrepruneCsa,
    ];

    pub const MEASURED: [PipelineType; 3] = [
        PipelineType::Type1,
        PipelineType::Type2,
        PipelineType::Type3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PipelineType::Type1 => "type1",
            PipelineType::Type2 => "type2",
            PipelineType::Type3 => "type3",
            PipelineType::CsaBaseline => "csa_baseline",
            PipelineType::PrepruneCsa => "preprune_csa",
        }
    }

    /// True for the three pipelines that take a measure.
    pub fn needs_measure(&self) -> bool {
        matches!(
            self,
            PipelineType::Type1 | PipelineType::Type2 | PipelineType::Type3
        )
    }
}

impl fmt::Display for PipelineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PipelineType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PipelineType::ALL
            .iter()
            .copied()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown pipeline type '{}'", s)))
    }
}

/// Train fraction and shuffle seed for a stratified split.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.5,
            seed: 1,
        }
    }
}

/// Everything one experiment run needs. `measure` is ignored by the two
/// baseline pipelines; `split` is applied by callers that start from an
/// unsplit dataset.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub mining: MiningConfig,
    pub pipeline: PipelineType,
    pub measure: Option<MeasureId>,
    pub top_k: usize,
    pub coverage: CoverageConfig,
    pub split: SplitSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            mining: MiningConfig::default(),
            pipeline: PipelineType::CsaBaseline,
            measure: None,
            top_k: 30_000,
            coverage: CoverageConfig::default(),
            split: SplitSpec::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.mining.validate()?;
        if self.top_k < 1 {
            return Err(Error::Config("top-k must be positive".into()));
        }
        if let Some(max_rules) = self.mining.max_rules {
            if self.top_k > max_rules {
                return Err(Error::Config(format!(
                    "top-k {} exceeds max rules {}",
                    self.top_k, max_rules
                )));
            }
        }
        if self.pipeline.needs_measure() && self.measure.is_none() {
            return Err(Error::Config(format!(
                "pipeline {} requires a measure",
                self.pipeline
            )));
        }
        Ok(())
    }
}

/// One line of the experiment report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub measure: Option<MeasureId>,
    pub pipeline: PipelineType,
    pub correct: u64,
    pub test_size: u64,
    pub selected_rules: u64,
}

impl ReportRow {
    /// Measure column text; baselines print a dash.
    pub fn measure_name(&self) -> &'static str {
        self.measure.map_or("-", |m| m.name())
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.measure_name(),
            self.pipeline,
            self.correct,
            self.test_size,
            self.selected_rules
        )
    }
}

impl Serialize for ReportRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ReportRow", 5)?;
        s.serialize_field("measure", self.measure_name())?;
        s.serialize_field("pipeline", self.pipeline.name())?;
        s.serialize_field("correct", &self.correct)?;
        s.serialize_field("test_size", &self.test_size)?;
        s.serialize_field("selected_rules", &self.selected_rules)?;
        s.end()
    }
}

/// Orders mined rules the way the configured pipeline wants them.
pub fn apply_pipeline_ordering(rules: &[CARRule], cfg: &PipelineConfig) -> Result<Vec<CARRule>> {
    let measure = || {
        cfg.measure
            .ok_or_else(|| Error::Config(format!("pipeline {} requires a measure", cfg.pipeline)))
    };
    Ok(match cfg.pipeline {
        PipelineType::Type1 => order(
            rules,
            &OrderingStrategy::Hybrid {
                measure: measure()?,
                top_k: cfg.top_k,
            },
        ),
        PipelineType::Type2 => order(rules, &OrderingStrategy::Mcsa(measure()?)),
        PipelineType::Type3 => prune_top_k(rules, measure()?, cfg.top_k),
        PipelineType::CsaBaseline => order(rules, &OrderingStrategy::Csa),
        PipelineType::PrepruneCsa => order(&prune_specific(rules), &OrderingStrategy::Csa),
    })
}

/// Runs one full pipeline: mine on train, order, select, classify test.
pub fn run_pipeline(train: &Dataset, test: &Dataset, cfg: &PipelineConfig) -> Result<ReportRow> {
    cfg.validate()?;
    let rules = mine_cars(train, &cfg.mining)?;
    run_pipeline_on_rules(&rules, train, test, cfg)
}

fn run_pipeline_on_rules(
    rules: &[CARRule],
    train: &Dataset,
    test: &Dataset,
    cfg: &PipelineConfig,
) -> Result<ReportRow> {
    let ordered = apply_pipeline_ordering(rules, cfg)?;
    let selected = select_by_coverage(&ordered, train, &cfg.coverage)?;
    let selected_rules = selected.len() as u64;
    let model = ClassifierModel::fit(selected, train)?;
    let (correct, test_size) = model.evaluate_accuracy(test)?;
    Ok(ReportRow {
        measure: if cfg.pipeline.needs_measure() {
            cfg.measure
        } else {
            None
        },
        pipeline: cfg.pipeline,
        correct,
        test_size,
        selected_rules,
    })
}

/// Runs the two baselines once and the three measured pipelines for every
/// measure, mining only once. Rows come out sorted by (measure name,
/// pipeline name), with the measure-free baselines first. Duplicate
/// measures are collapsed.
pub fn run_matrix(
    train: &Dataset,
    test: &Dataset,
    base: &PipelineConfig,
    measures: &[MeasureId],
) -> Result<Vec<ReportRow>> {
    if measures.is_empty() {
        return Err(Error::Config("measure list is empty".into()));
    }
    let mut sorted: Vec<MeasureId> = measures.to_vec();
    sorted.sort_by_key(|m| m.name());
    sorted.dedup();

    let probe = PipelineConfig {
        pipeline: PipelineType::Type1,
        measure: Some(sorted[0]),
        ..base.clone()
    };
    probe.validate()?;

    let rules = mine_cars(train, &base.mining)?;
    let mut rows = Vec::with_capacity(2 + 3 * sorted.len());

    for pipeline in [PipelineType::CsaBaseline, PipelineType::PrepruneCsa] {
        let cfg = PipelineConfig {
            pipeline,
            measure: None,
            ..base.clone()
        };
        rows.push(run_pipeline_on_rules(&rules, train, test, &cfg)?);
    }
    for measure in sorted {
        for pipeline in PipelineType::MEASURED {
            let cfg = PipelineConfig {
                pipeline,
                measure: Some(measure),
                ..base.clone()
            };
            rows.push(run_pipeline_on_rules(&rules, train, test, &cfg)?);
        }
    }
    Ok(rows)
}

/// Serializes rows as CSV with a header line.
pub fn write_report_csv(rows: &[ReportRow], out: &mut impl Write) -> Result<()> {
    writeln!(out, "measure,pipeline,correct,test_size,selected_rules")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Serializes rows as a JSON array (pretty, trailing newline).
pub fn report_json(rows: &[ReportRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const WEATHER_CSV: &str = include_str!("../data/weather.csv");

    fn weather() -> Dataset {
        Dataset::parse_csv(WEATHER_CSV, "Play").unwrap()
    }

    fn weather_cfg() -> PipelineConfig {
        PipelineConfig {
            mining: MiningConfig {
                min_support: 0.10,
                min_confidence: 0.90,
                max_antecedent_len: None,
                max_rules: Some(100_000),
            },
            top_k: 30_000,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn baseline_row_on_weather() {
        let d = weather();
        let cfg = PipelineConfig {
            pipeline: PipelineType::CsaBaseline,
            ..weather_cfg()
        };
        let row = run_pipeline(&d, &d, &cfg).unwrap();
        assert_eq!(row.pipeline, PipelineType::CsaBaseline);
        assert_eq!(row.measure, None);
        assert_eq!(row.test_size, 14);
        assert!(row.correct <= row.test_size);
        assert!(row.selected_rules >= 1);
    }

    #[test]
    fn type1_with_huge_k_matches_baseline() {
        let d = weather();
        let base = run_pipeline(
            &d,
            &d,
            &PipelineConfig {
                pipeline: PipelineType::CsaBaseline,
                ..weather_cfg()
            },
        )
        .unwrap();
        for m in MeasureId::ALL {
            let row = run_pipeline(
                &d,
                &d,
                &PipelineConfig {
                    pipeline: PipelineType::Type1,
                    measure: Some(m),
                    ..weather_cfg()
                },
            )
            .unwrap();
            assert_eq!(
                (row.correct, row.selected_rules),
                (base.correct, base.selected_rules),
                "{m}"
            );
        }
    }

    #[test]
    fn measured_pipeline_requires_measure() {
        let d = weather();
        let cfg = PipelineConfig {
            pipeline: PipelineType::Type2,
            measure: None,
            ..weather_cfg()
        };
        assert!(matches!(run_pipeline(&d, &d, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn top_k_capped_by_max_rules() {
        let d = weather();
        let cfg = PipelineConfig {
            pipeline: PipelineType::Type3,
            measure: Some(MeasureId::Support),
            top_k: 200_000,
            ..weather_cfg()
        };
        assert!(matches!(run_pipeline(&d, &d, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn matrix_row_count_and_order() {
        let d = weather();
        let measures = [
            MeasureId::Support,
            MeasureId::Kulczynski,
            MeasureId::ChiSquare,
        ];
        let rows = run_matrix(&d, &d, &weather_cfg(), &measures).unwrap();
        assert_eq!(rows.len(), 2 + 3 * 3);
        let names: Vec<(String, String)> = rows
            .iter()
            .map(|r| (r.measure_name().to_string(), r.pipeline.name().to_string()))
            .collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(names[0], ("-".to_string(), "csa_baseline".to_string()));
        assert_eq!(names[1], ("-".to_string(), "preprune_csa".to_string()));
    }

    #[test]
    fn matrix_full_catalogue_row_count() {
        let d = weather();
        let mined = crate::mining::mine_cars(&d, &weather_cfg().mining)
            .unwrap()
            .len() as u64;
        let rows = run_matrix(&d, &d, &weather_cfg(), &MeasureId::ALL).unwrap();
        assert_eq!(rows.len(), 125);
        for row in &rows {
            assert!(row.correct <= row.test_size);
            assert!(row.selected_rules <= mined);
        }
    }

    #[test]
    fn report_formats_are_stable() {
        let d = weather();
        let rows = run_matrix(&d, &d, &weather_cfg(), &[MeasureId::Support]).unwrap();
        let mut csv1 = Vec::new();
        write_report_csv(&rows, &mut csv1).unwrap();
        let mut csv2 = Vec::new();
        write_report_csv(&rows, &mut csv2).unwrap();
        assert_eq!(csv1, csv2);
        assert!(String::from_utf8(csv1)
            .unwrap()
            .starts_with("measure,pipeline,correct,test_size,selected_rules\n-,csa_baseline,"));
        assert_eq!(report_json(&rows), report_json(&rows));
    }

    #[test]
    fn pipeline_names_round_trip() {
        for p in PipelineType::ALL {
            assert_eq!(p.name().parse::<PipelineType>().unwrap(), p);
        }
        assert!("type9".parse::<PipelineType>().is_err());
    }
}

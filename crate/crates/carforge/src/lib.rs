//! Class association rule mining and associative classification.
//!
//! The pipeline: load a nominal dataset ([`dataset`]), mine class
//! association rules level-wise ([`mining`]), score them with a catalogue
//! of interestingness measures ([`measures`]), order and prune
//! ([`ordering`]), select a final rule list by database coverage
//! ([`selection`]), and predict with weighted chi-square voting
//! ([`classifier`]). The [`harness`] module wires those stages into
//! reproducible experiment runs, and the `carforge` binary exposes them as
//! `mine`, `classify`, and `matrix` subcommands.
//!
//! ```
//! use carforge::dataset::Dataset;
//! use carforge::mining::{mine_cars, MiningConfig};
//!
//! let csv = "Outlook,Play\nsunny,no\nsunny,no\novercast,yes\novercast,yes\n";
//! let data = Dataset::parse_csv(csv, "Play").unwrap();
//! let rules = mine_cars(&data, &MiningConfig::default()).unwrap();
//! assert!(!rules.is_empty());
//! ```

pub mod classifier;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod measures;
pub mod mining;
pub mod ordering;
pub mod selection;

pub use classifier::{ClassifierModel, Prediction, PredictionBasis};
pub use dataset::{AttributeSchema, Dataset, Instance, Item};
pub use error::{Error, Result};
pub use harness::{run_matrix, run_pipeline, PipelineConfig, PipelineType, ReportRow, SplitSpec};
pub use measures::{evaluate, max_chi_square, MeasureId, MeasureValue};
pub use mining::{count_table, mine_cars, CARRule, ContingencyTable, MiningConfig};
pub use ordering::{
    compare_acs, compare_csa, order, prune_specific, prune_threshold, prune_top_k, OrderingStrategy,
};
pub use selection::{select_by_coverage, CoverageConfig};

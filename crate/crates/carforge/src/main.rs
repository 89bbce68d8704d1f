use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use carforge::classifier::ClassifierModel;
use carforge::dataset::Dataset;
use carforge::error::{Error, Result};
use carforge::harness::{report_json, run_matrix, write_report_csv, PipelineConfig, SplitSpec};
use carforge::measures::MeasureId;
use carforge::mining::{mine_cars, MiningConfig};
use carforge::ordering::{order, prune_top_k, OrderingStrategy};
use carforge::selection::{select_by_coverage, CoverageConfig};

#[derive(Parser)]
#[command(
    name = "carforge",
    about = "Class association rule mining and associative classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine class association rules and print them one per line
    Mine(MineArgs),
    /// Train on a stratified split, classify the held-out side, dump predictions
    Classify(ClassifyArgs),
    /// Run every pipeline type for a set of measures and emit a report
    Matrix(MatrixArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Input CSV file (header row, nominal cells, no quoting)
    #[arg(long)]
    data: PathBuf,
    /// Class column: a header name, or a 0-based index if no name matches
    #[arg(long)]
    class: String,
}

#[derive(Args)]
struct MiningArgs {
    /// Minimum rule support in (0, 1]
    #[arg(long, default_value_t = 0.10)]
    min_sup: f64,
    /// Minimum rule confidence in (0, 1]
    #[arg(long, default_value_t = 0.50)]
    min_conf: f64,
    /// Antecedent size cap (0 = unbounded)
    #[arg(long, default_value_t = 0)]
    max_len: usize,
    /// Mined rule cap (0 = unbounded)
    #[arg(long, default_value_t = 100_000)]
    max_rules: usize,
}

impl MiningArgs {
    fn to_config(&self) -> MiningConfig {
        MiningConfig {
            min_support: self.min_sup,
            min_confidence: self.min_conf,
            max_antecedent_len: if self.max_len == 0 {
                None
            } else {
                Some(self.max_len)
            },
            max_rules: if self.max_rules == 0 {
                None
            } else {
                Some(self.max_rules)
            },
        }
    }
}

#[derive(Args)]
struct SplitArgs {
    /// Fraction of each class that goes to the training side, in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    split: f64,
    /// Seed for the split shuffle
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    /// Write rules here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectMode {
    /// Database coverage selection
    Coverage,
    /// Keep every ordered rule
    All,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    split: SplitArgs,
    /// Rule ordering: csa, acs, mcsa:<measure>, sm:<measure>, hybrid:<measure>:<k>
    #[arg(long, default_value = "csa")]
    ordering: String,
    /// With --top-k: measure for the pre-selection cut
    #[arg(long)]
    measure: Option<String>,
    /// Keep only the top k rules by --measure before ordering
    #[arg(long)]
    top_k: Option<usize>,
    /// Rule selection mode
    #[arg(long, value_enum, default_value_t = SelectMode::Coverage)]
    select: SelectMode,
    /// Instances retire after this many selected rules cover them
    #[arg(long, default_value_t = 3)]
    cover_threshold: u64,
    /// Only count covers whose rule class matches the instance
    #[arg(long)]
    class_match: bool,
    /// Write the prediction dump here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    mining: MiningArgs,
    #[command(flatten)]
    split: SplitArgs,
    /// Top-k cut used by pipeline types 1 and 3
    #[arg(long, default_value_t = 30_000)]
    top_k: usize,
    /// Instances retire after this many selected rules cover them
    #[arg(long, default_value_t = 3)]
    cover_threshold: u64,
    /// Measures to run (repeatable); default is the full catalogue
    #[arg(long = "measure")]
    measures: Vec<String>,
    /// Report format
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    report: ReportFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Matrix(args) => cmd_matrix(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load(data: &DataArgs) -> Result<Dataset> {
    let text = fs::read_to_string(&data.data)?;
    Dataset::parse_csv(&text, &data.class)
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn cmd_mine(args: MineArgs) -> Result<()> {
    let dataset = load(&args.data)?;
    let rules = mine_cars(&dataset, &args.mining.to_config())?;
    let mut text = String::new();
    for rule in &rules {
        text.push_str(&rule.export_line(&dataset));
        text.push('\n');
    }
    write_out(&args.out, &text)?;
    eprintln!(
        "mined {} rules from {} instances",
        rules.len(),
        dataset.len()
    );
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> Result<()> {
    let dataset = load(&args.data)?;
    let strategy: OrderingStrategy = args.ordering.parse()?;
    let (train, test) = dataset.split_stratified(args.split.split, args.split.seed)?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let mut rules = mine_cars(&train, &args.mining.to_config())?;
    let mined = rules.len();
    if let Some(k) = args.top_k {
        let measure: MeasureId = args
            .measure
            .as_deref()
            .ok_or_else(|| Error::Config("--top-k needs --measure".into()))?
            .parse()?;
        if k < 1 {
            return Err(Error::Config("top-k must be positive".into()));
        }
        rules = prune_top_k(&rules, measure, k);
    }
    let ordered = order(&rules, &strategy);

    let selected = match args.select {
        SelectMode::Coverage => select_by_coverage(
            &ordered,
            &train,
            &CoverageConfig {
                cover_threshold: args.cover_threshold,
                require_class_match: args.class_match,
            },
        )?,
        SelectMode::All => ordered,
    };

    let model = ClassifierModel::fit(selected, &train)?;
    let schema = model.schema().clone();
    let class_values = &schema.class_attribute().values;

    let mut dump = String::new();
    dump.push_str("predicted,actual,basis");
    for v in class_values {
        dump.push_str(&format!(",score_{v}"));
    }
    dump.push('\n');

    let mut correct = 0u64;
    for inst in test.instances() {
        let p = model.predict(inst)?;
        let actual = test.class_label(inst);
        if p.label == actual {
            correct += 1;
        }
        dump.push_str(&format!(
            "{},{},{}",
            schema.class_value_name(p.label),
            schema.class_value_name(actual),
            p.basis.name()
        ));
        for c in 0..class_values.len() {
            match p.class_scores.iter().find(|(k, _)| *k == c) {
                Some((_, s)) => dump.push_str(&format!(",{s}")),
                None => dump.push(','),
            }
        }
        dump.push('\n');
    }

    write_out(&args.out, &dump)?;
    eprintln!(
        "mined={} selected={} correct={}/{} ordering={}",
        mined,
        model.rules().len(),
        correct,
        test.len(),
        strategy
    );
    Ok(())
}

fn cmd_matrix(args: MatrixArgs) -> Result<()> {
    let dataset = load(&args.data)?;
    let measures: Vec<MeasureId> = if args.measures.is_empty() {
        MeasureId::ALL.to_vec()
    } else {
        args.measures
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?
    };

    let (train, test) = dataset.split_stratified(args.split.split, args.split.seed)?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let base = PipelineConfig {
        mining: args.mining.to_config(),
        top_k: args.top_k,
        coverage: CoverageConfig {
            cover_threshold: args.cover_threshold,
            require_class_match: false,
        },
        split: SplitSpec {
            train_fraction: args.split.split,
            seed: args.split.seed,
        },
        ..PipelineConfig::default()
    };

    let rows = run_matrix(&train, &test, &base, &measures)?;
    let text = match args.report {
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            write_report_csv(&rows, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        ReportFormat::Json => report_json(&rows),
    };
    write_out(&args.out, &text)?;
    eprintln!(
        "{} rows on {} train / {} test instances",
        rows.len(),
        train.len(),
        test.len()
    );
    Ok(())
}

//! Mine, select, and classify the bundled weather data end to end.

use carforge::{
    mine_cars, order, select_by_coverage, ClassifierModel, CoverageConfig, Dataset, MiningConfig,
    OrderingStrategy,
};

fn main() -> carforge::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/weather.csv");
    let csv = std::fs::read_to_string(path)?;
    let data = Dataset::parse_csv(&csv, "Play")?;
    let (train, test) = data.split_stratified(0.5, 42)?;

    let mining = MiningConfig {
        min_confidence: 0.9,
        ..Default::default()
    };
    let rules = mine_cars(&train, &mining)?;
    let ordered = order(&rules, &OrderingStrategy::Csa);
    let selected = select_by_coverage(&ordered, &train, &CoverageConfig::default())?;
    let model = ClassifierModel::fit(selected, &train)?;
    let (correct, total) = model.evaluate_accuracy(&test)?;
    println!(
        "mined {} rules, selected {}, test accuracy {correct}/{total}",
        rules.len(),
        model.rules().len()
    );
    Ok(())
}

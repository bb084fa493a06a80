//! Two classes that differ only inside a small region: the coarse pass
//! confuses them, the second pass confined to that region separates them.
//!
//! cargo run --release --example confusable_pair

use std::collections::BTreeMap;
use std::time::Instant;

use fuzzygeno::pipeline::evaluate;
use fuzzygeno::synthetic::ConfusableSet;
use fuzzygeno::{train, ConfusionMatrix, FuzzyParams, GAConfig, GroupingConfig, Label};

fn pair_accuracy(cm: &ConfusionMatrix, pair: (Label, Label)) -> f64 {
    let (a, b) = pair;
    let right = cm.get(a, a) + cm.get(b, b);
    right as f64 / (cm.row_total(a) + cm.row_total(b)) as f64
}

fn main() -> fuzzygeno::Result<()> {
    let set = ConfusableSet::default();
    let data = set.generate()?;
    let gcfg = GroupingConfig {
        region_overrides: BTreeMap::from([(vec![set.pair.0, set.pair.1], set.region)]),
        ..GroupingConfig::default()
    };
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = GAConfig { seed, ..GAConfig::default() };

    let started = Instant::now();
    let run = train(&data, &gcfg, &cfg, FuzzyParams::default(), None)?;
    let report = evaluate(&data, &run.model)?;

    println!("coarse chromosome: {}", run.model.coarse.chromosome);
    for g in &run.model.groups {
        println!("group {:?} in {}: {}", g.spec.members, g.spec.region, g.chromosome());
    }
    println!("coarse accuracy   {:.3}", report.coarse_accuracy);
    println!("two-pass accuracy {:.3}", report.two_pass_accuracy);
    println!(
        "pair accuracy     {:.3} -> {:.3}",
        pair_accuracy(&report.coarse, set.pair),
        pair_accuracy(&report.two_pass, set.pair)
    );
    println!("elapsed {:.1?}", started.elapsed());
    Ok(())
}

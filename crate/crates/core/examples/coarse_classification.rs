//! Coarse pass alone: evolve the partition, build prototypes, read the
//! confusion matrix and the groups it suggests.
//!
//! cargo run --release --example coarse_classification

use fuzzygeno::synthetic::ConfusableSet;
use fuzzygeno::{form_groups, train_coarse, FuzzyParams, GAConfig, GroupingConfig};

fn main() -> fuzzygeno::Result<()> {
    let data = ConfusableSet::default().generate()?;
    let (models, cm, trace) = train_coarse(&data, &GAConfig::default(), FuzzyParams::default())?;

    println!("partition {} after {} generations", models.chromosome, trace.generations.len() - 1);
    println!("{} prototypes of {} features each", models.models.len(), models.dim());
    println!("accuracy {}/{}\n", cm.correct(), cm.total());
    print!("{}", cm.to_tsv());

    let groups = form_groups(&cm, GroupingConfig::default().pair_threshold);
    println!("\ngroups: {groups:?}");
    Ok(())
}

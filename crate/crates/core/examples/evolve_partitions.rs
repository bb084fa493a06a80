//! Genetic partition search, once over the full frame for all classes and
//! once confined to a region for two look-alike classes.
//!
//! cargo run --release --example evolve_partitions [seed]

use fuzzygeno::synthetic::ConfusableSet;
use fuzzygeno::{evolve, EvolutionTrace, FuzzyParams, GAConfig, Rect};

fn show(title: &str, trace: &EvolutionTrace) {
    println!("{title}");
    for g in trace.generations.iter().step_by(10).chain(trace.generations.last().filter(|g| g.generation % 10 != 0)) {
        println!("  gen {:3}  best {:.3}  mean {:.3}  {}", g.generation, g.best_fitness, g.mean_fitness, g.best);
    }
}

fn main() -> fuzzygeno::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let set = ConfusableSet::default();
    let data = set.generate()?;
    let cfg = GAConfig { seed, ..GAConfig::default() };
    let fp = FuzzyParams::default();

    let (_, coarse) = evolve(&data, Rect::FULL, &cfg, fp, data.classes())?;
    show("full frame, all classes:", &coarse);

    let (best, fine) = evolve(&data, set.region, &cfg, fp, &[set.pair.0, set.pair.1])?;
    show(&format!("region {}, classes {:?}:", set.region, set.pair), &fine);
    println!("best region partition: {}", best.to_string_with_region());
    Ok(())
}

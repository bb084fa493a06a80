//! Train with fixed groups, save the model, load it back and classify.
//!
//! cargo run --release --example model_persistence

use fuzzygeno::synthetic::separable_set;
use fuzzygeno::{
    classify_two_pass, load_model, paper_regions, save_model, train, FuzzyParams, GAConfig, GroupSpec, GroupingConfig,
};

fn main() -> fuzzygeno::Result<()> {
    let data = separable_set(10, 15, 0.7, 12)?;
    let groups: Vec<GroupSpec> =
        paper_regions().into_iter().map(|(members, region)| GroupSpec { members, region }).collect();
    let cfg = GAConfig { max_generations: 40, ..GAConfig::default() };
    let run = train(&data, &GroupingConfig::default(), &cfg, FuzzyParams::default(), Some(&groups))?;

    let path = std::env::temp_dir().join("fuzzygeno-example-model.json");
    save_model(&run.model, &path)?;
    let bytes = std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
    println!("saved {} ({bytes} bytes)", path.display());

    let model = load_model(&path)?;
    assert_eq!(model, run.model);
    for (img, truth) in data.items().iter().step_by(15) {
        let t = classify_two_pass(img, &model)?;
        let via = t.group_used.as_ref().map_or("-".to_string(), |g| format!("{g:?}"));
        println!(
            "truth {truth}  coarse {}  group {via:8}  final {}",
            t.coarse_prediction.label, t.final_prediction.label
        );
    }
    std::fs::remove_file(&path).ok();
    Ok(())
}

//! Fuzzy zoning features of one glyph under a fixed partition.
//!
//! cargo run --example feature_extraction

use fuzzygeno::synthetic::random_glyph;
use fuzzygeno::{extract_features, strip_membership, Chromosome, FuzzyParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fuzzygeno::Result<()> {
    let ch: Chromosome = "0,7,9,13,21,23,31 | 0,11,19,24,31".parse()?;
    let glyph = random_glyph(4, 2..=4, &mut ChaCha8Rng::seed_from_u64(7));

    for (r, row) in glyph.to_bytes().chunks(32).enumerate() {
        let line: String = row.iter().map(|&v| if v > 127 { '#' } else { '.' }).collect();
        let cut = if ch.h_cuts.contains(&r) { '<' } else { ' ' };
        println!("{line} {cut}");
    }

    println!("\nrow memberships near the cut at 9 (ramp 2):");
    for x in 5..=13 {
        let m = strip_membership(&ch.h_cuts, 2, x)?;
        let shown: Vec<String> = m.iter().map(|v| format!("{v:.2}")).collect();
        println!("  row {x:2}: {}", shown.join(" "));
    }

    let cols = ch.v_cuts.len() - 1;
    for ramp in [0, 2] {
        let fv = extract_features(&glyph, &ch, FuzzyParams { ramp })?;
        println!("\nfeatures, ramp {ramp} ({} cells):", fv.len());
        for row in fv.values().chunks(cols) {
            let shown: Vec<String> = row.iter().map(|v| format!("{v:.3}")).collect();
            println!("  {}", shown.join("  "));
        }
    }
    Ok(())
}

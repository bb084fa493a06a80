//! Grouping logic on the published Bangla digit confusion matrices.
//!
//! cargo run --example group_discovery

use fuzzygeno::grouping::ungrouped;
use fuzzygeno::{accuracy, form_groups, paper_regions, ConfusionMatrix};

const COARSE: [[u64; 10]; 10] = [
    [49, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 46, 0, 0, 1, 0, 0, 1, 2, 0],
    [0, 2, 46, 0, 2, 0, 0, 0, 0, 0],
    [1, 0, 0, 37, 0, 3, 6, 2, 1, 0],
    [0, 0, 0, 0, 48, 0, 0, 0, 1, 1],
    [9, 0, 1, 0, 0, 39, 0, 0, 1, 0],
    [0, 0, 0, 14, 0, 2, 33, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 49, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 50, 0],
    [1, 7, 0, 1, 3, 0, 0, 3, 1, 34],
];

const TWO_PASS: [[u64; 10]; 10] = [
    [50, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 44, 0, 0, 1, 0, 0, 1, 2, 2],
    [0, 2, 46, 0, 2, 0, 0, 0, 0, 0],
    [1, 0, 0, 40, 0, 3, 3, 2, 1, 0],
    [0, 0, 0, 0, 48, 0, 0, 0, 1, 1],
    [4, 0, 1, 0, 0, 44, 0, 0, 1, 0],
    [0, 0, 0, 5, 0, 2, 42, 0, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 49, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 50, 0],
    [1, 2, 0, 1, 3, 0, 0, 3, 1, 39],
];

fn matrix(counts: &[[u64; 10]; 10]) -> fuzzygeno::Result<ConfusionMatrix> {
    ConfusionMatrix::from_counts((0..10).collect(), counts.iter().map(|r| r.to_vec()).collect())
}

fn main() -> fuzzygeno::Result<()> {
    let coarse = matrix(&COARSE)?;
    let two_pass = matrix(&TWO_PASS)?;
    println!("coarse   {}/{} = {}", coarse.correct(), coarse.total(), accuracy(&coarse)?);
    println!("two-pass {}/{} = {}", two_pass.correct(), two_pass.total(), accuracy(&two_pass)?);

    for tau in [3, 5, 7, 8, 12] {
        let groups = form_groups(&coarse, tau);
        println!("tau {tau:2}: groups {groups:?}, ungrouped {:?}", ungrouped(coarse.labels(), &groups));
    }

    println!("\nconfusion regions used for the second pass:");
    for (members, region) in paper_regions() {
        println!(
            "  {members:?}: rows {}..={}, cols {}..={}",
            region.top(),
            region.bottom(),
            region.left(),
            region.right()
        );
    }
    Ok(())
}

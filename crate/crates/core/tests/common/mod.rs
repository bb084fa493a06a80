#![allow(dead_code)]

use fuzzygeno::imaging::FRAME;
use fuzzygeno::{Chromosome, ConfusionMatrix, CutBounds, Label, NormImage, Rect};
use rand::Rng;

/// Coarse-pass confusion counts from the 500-sample Bangla digit run.
/// Row 4 is printed with its 48 under column 3; the row total and the 431
/// correct decisions only work out with it on the diagonal.
pub const COARSE_COUNTS: [[u64; 10]; 10] = [
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

/// Confusion counts after the second pass on the same samples.
pub const TWO_PASS_COUNTS: [[u64; 10]; 10] = [
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

pub fn matrix(counts: &[[u64; 10]; 10]) -> ConfusionMatrix {
    ConfusionMatrix::from_counts((0..10).collect(), counts.iter().map(|r| r.to_vec()).collect()).unwrap()
}

/// The chromosome drawn as the example partition of a digit frame.
pub fn example_chromosome() -> Chromosome {
    Chromosome::from_cuts(vec![0, 7, 9, 13, 21, 23, 31], vec![0, 11, 19, 24, 31]).unwrap()
}

pub const EXAMPLE_TEXT: &str = "0,7,9,13,21,23,31 | 0,11,19,24,31";

/// Strip index owning `x` under crisp boundaries: `[c_k, c_{k+1})`, the last
/// strip closed on both ends.
fn crisp_strip(cuts: &[usize], x: usize) -> usize {
    let strips = cuts.len() - 1;
    (0..strips).find(|&k| cuts[k] <= x && x < cuts[k + 1]).unwrap_or(strips - 1)
}

/// Brute-force crisp cell means, row-major over (row strip, column strip).
pub fn crisp_features(img: &NormImage, ch: &Chromosome) -> Vec<f64> {
    let rows = ch.h_cuts.len() - 1;
    let cols = ch.v_cuts.len() - 1;
    let (h0, h1) = (ch.h_cuts[0], *ch.h_cuts.last().unwrap());
    let (v0, v1) = (ch.v_cuts[0], *ch.v_cuts.last().unwrap());
    let mut out = Vec::with_capacity(rows * cols);
    for k in 0..rows {
        for l in 0..cols {
            let mut sum = 0.0;
            let mut n = 0usize;
            for r in h0..=h1 {
                if crisp_strip(&ch.h_cuts, r) != k {
                    continue;
                }
                for c in v0..=v1 {
                    if crisp_strip(&ch.v_cuts, c) == l {
                        sum += img.get(r, c);
                        n += 1;
                    }
                }
            }
            out.push(sum / n as f64);
        }
    }
    out
}

pub fn random_image<R: Rng>(rng: &mut R) -> NormImage {
    NormImage::from_fn(|_, _| rng.gen::<f64>())
}

fn cuts_in<R: Rng>(lo: usize, hi: usize, max_cuts: usize, rng: &mut R) -> Vec<usize> {
    let span = hi - lo + 1;
    let count = rng.gen_range(2..=max_cuts.min(span));
    let mut inner = rand::seq::index::sample(rng, span - 2, count - 2).into_vec();
    inner.sort_unstable();
    let mut cuts = vec![lo];
    cuts.extend(inner.into_iter().map(|i| lo + 1 + i));
    cuts.push(hi);
    cuts
}

/// Random valid chromosome over a random region of at least 2×2 pixels.
pub fn random_chromosome_anywhere<R: Rng>(rng: &mut R) -> Chromosome {
    let top = rng.gen_range(0..FRAME - 1);
    let bottom = rng.gen_range(top + 1..FRAME);
    let left = rng.gen_range(0..FRAME - 1);
    let right = rng.gen_range(left + 1..FRAME);
    let ch = Chromosome::new(
        Rect::new(top, left, bottom, right).unwrap(),
        cuts_in(top, bottom, 12, rng),
        cuts_in(left, right, 12, rng),
    );
    assert!(ch.is_valid(CutBounds::ANY));
    ch
}

pub fn pair_accuracy(cm: &ConfusionMatrix, (a, b): (Label, Label)) -> f64 {
    (cm.get(a, a) + cm.get(b, b)) as f64 / (cm.row_total(a) + cm.row_total(b)) as f64
}

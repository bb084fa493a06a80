//! Seeded synthetic glyph sets for demos, tests and benchmarks.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imaging::{LabeledSet, NormImage, Rect, FRAME};
use crate::Label;

/// One random glyph made of `bars` horizontal or vertical bars whose
/// thickness is drawn from `thickness`.
pub fn random_glyph<R: Rng + ?Sized>(bars: usize, thickness: RangeInclusive<usize>, rng: &mut R) -> NormImage {
    let mut img = NormImage::blank();
    for _ in 0..bars {
        let thick = rng.gen_range(thickness.clone());
        let len = rng.gen_range(10..=26);
        let (h, w) = if rng.gen_bool(0.5) { (thick, len) } else { (len, thick) };
        let top = rng.gen_range(0..=FRAME - h);
        let left = rng.gen_range(0..=FRAME - w);
        for r in top..top + h {
            for c in left..left + w {
                img.set(r, c, 1.0);
            }
        }
    }
    img
}

/// `base` plus independent uniform noise in `[-noise, noise]` per pixel.
pub fn noisy<R: Rng + ?Sized>(base: &NormImage, noise: f64, rng: &mut R) -> NormImage {
    NormImage::from_fn(|r, c| base.get(r, c) + uniform(noise, rng))
}

/// `classes` distinct random glyphs, `per_class` noisy samples each.
pub fn separable_set(classes: u32, per_class: usize, noise: f64, seed: u64) -> Result<LabeledSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<NormImage> = (0..classes).map(|_| random_glyph(4, 2..=4, &mut rng)).collect();
    let mut items = Vec::with_capacity(bases.len() * per_class);
    for (label, base) in (0..).zip(&bases) {
        for _ in 0..per_class {
            items.push((noisy(base, noise, &mut rng), label));
        }
    }
    LabeledSet::new(items)
}

/// A set built so that one shared partition cannot serve every class.
///
/// The two `pair` classes are blank except inside `region`, where they carry
/// opposite checkerboards of amplitude `contrast` on grey. Rows and columns
/// of the region hold the same ink in both, so only cells resolving single
/// pixels there tell them apart. Sample `i` of both pair classes gets the
/// same noise field, so twins differ only inside the region.
///
/// Every other class is one faint full-width line, two pixels thick, at its
/// own row outside the region, with independent noise. Telling those apart
/// takes row cuts near each line, which compete with resolving the region.
#[derive(Debug, Clone)]
pub struct ConfusableSet {
    pub classes: u32,
    pub per_class: usize,
    pub pair: (Label, Label),
    pub region: Rect,
    /// Checkerboard pixels are `0.5 ± contrast / 2`.
    pub contrast: f64,
    /// Pair noise, uniform in `[-noise, noise]`.
    pub noise: f64,
    pub line_ink: f64,
    pub line_noise: f64,
    pub seed: u64,
}

impl Default for ConfusableSet {
    fn default() -> Self {
        Self {
            classes: 10,
            per_class: 50,
            pair: (3, 6),
            region: Rect::new(12, 12, 19, 19).expect("static rectangle"),
            contrast: 0.25,
            noise: 0.5,
            line_ink: 0.15,
            line_noise: 0.5,
            seed: 1,
        }
    }
}

impl ConfusableSet {
    /// First rows of the line classes, in label order.
    pub fn line_rows(&self) -> Result<Vec<usize>> {
        let need = (self.classes as usize).saturating_sub(2);
        let rows: Vec<usize> = (0..FRAME - 1)
            .step_by(3)
            .filter(|&r| r + 1 < self.region.top() || r > self.region.bottom())
            .take(need)
            .collect();
        if rows.len() < need {
            return Err(Error::InvalidConfig(format!("no room for {need} line classes outside {}", self.region)));
        }
        Ok(rows)
    }

    pub fn is_pair(&self, label: Label) -> bool {
        label == self.pair.0 || label == self.pair.1
    }

    /// Noise-free glyph of every class.
    pub fn bases(&self) -> Result<Vec<NormImage>> {
        let (a, b) = self.pair;
        if self.classes < 3 || a == b || a >= self.classes || b >= self.classes {
            return Err(Error::InvalidConfig(format!("bad pair {a},{b} for {} classes", self.classes)));
        }
        let mut rows = self.line_rows()?.into_iter();
        let mut bases = Vec::with_capacity(self.classes as usize);
        for label in 0..self.classes {
            let mut img = NormImage::blank();
            if self.is_pair(label) {
                let parity = usize::from(label == b);
                for r in self.region.top()..=self.region.bottom() {
                    for c in self.region.left()..=self.region.right() {
                        let sign = if (r + c) % 2 == parity { 1.0 } else { -1.0 };
                        img.set(r, c, 0.5 + sign * self.contrast / 2.0);
                    }
                }
            } else {
                let top = rows.next().expect("one row per line class");
                for r in top..top + 2 {
                    for c in 0..FRAME {
                        img.set(r, c, self.line_ink);
                    }
                }
            }
            bases.push(img);
        }
        Ok(bases)
    }

    pub fn generate(&self) -> Result<LabeledSet> {
        let bases = self.bases()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let fields: Vec<Vec<f64>> =
            (0..self.per_class).map(|_| (0..FRAME * FRAME).map(|_| uniform(self.noise, &mut rng)).collect()).collect();
        let mut items = Vec::with_capacity(bases.len() * self.per_class);
        for (label, base) in (0..).zip(&bases) {
            for field in &fields {
                let img = if self.is_pair(label) {
                    NormImage::from_fn(|r, c| base.get(r, c) + field[r * FRAME + c])
                } else {
                    noisy(base, self.line_noise, &mut rng)
                };
                items.push((img, label));
            }
        }
        LabeledSet::new(items)
    }
}

fn uniform<R: Rng + ?Sized>(half_width: f64, rng: &mut R) -> f64 {
    if half_width > 0.0 {
        rng.gen_range(-half_width..=half_width)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_twins_differ_only_inside_region() {
        let set = ConfusableSet::default();
        let data = set.generate().unwrap();
        let (a, b) = set.pair;
        for (x, y) in data.images_of(a).zip(data.images_of(b)) {
            for r in 0..FRAME {
                for c in 0..FRAME {
                    if !set.region.contains(r, c) {
                        assert_eq!(x.get(r, c), y.get(r, c));
                    }
                }
            }
        }
    }

    #[test]
    fn line_rows_stay_clear_of_region() {
        let set = ConfusableSet::default();
        let rows = set.line_rows().unwrap();
        assert_eq!(rows.len(), 8);
        for r in rows {
            assert!(r + 1 < set.region.top() || r > set.region.bottom());
        }
    }

    #[test]
    fn rejects_degenerate_pair() {
        let set = ConfusableSet { pair: (2, 2), ..ConfusableSet::default() };
        assert!(set.generate().is_err());
    }

    #[test]
    fn separable_set_is_seeded() {
        let a = separable_set(3, 4, 0.1, 9).unwrap();
        let b = separable_set(3, 4, 0.1, 9).unwrap();
        assert_eq!(a.len(), 12);
        for ((x, l), (y, m)) in a.items().iter().zip(b.items()) {
            assert_eq!(l, m);
            assert_eq!(x.to_bytes(), y.to_bytes());
        }
    }
}

//! Fuzzy zoning of the frame.
//!
//! A [`Chromosome`] holds two cut lists over a rectangular region: row cuts
//! (horizontal partition lines) and column cuts (vertical ones). Consecutive
//! cuts bound a strip; every (row strip, column strip) pair is one cell and
//! yields one feature.
//!
//! Strip boundaries are soft. Around each interior cut `b` a linear ramp of
//! half-width `e` hands membership over from the left/upper strip to the
//! right/lower one, where `e = min(w, ⌊wl/2⌋, ⌊wr/2⌋)` and `wl`, `wr` are the
//! widths of the two adjacent strips. Ramps therefore never overlap and the
//! memberships at every coordinate sum to one. With `w = 0` every boundary
//! is crisp: a strip owns `[cut_k, cut_{k+1})`, the last strip also owns the
//! final cut.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{NormImage, Rect, FRAME};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Row cuts (first part of the chromosome).
    Horizontal,
    /// Column cuts (second part).
    Vertical,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Horizontal => "horizontal",
            Axis::Vertical => "vertical",
        })
    }
}

/// Allowed number of cuts per part, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutBounds {
    pub min_cuts: usize,
    pub max_cuts: usize,
}

impl CutBounds {
    /// Only the structural minimum of two cuts; used when checking loaded models.
    pub const ANY: CutBounds = CutBounds { min_cuts: 2, max_cuts: FRAME };

    pub fn new(min_cuts: usize, max_cuts: usize) -> Result<Self> {
        if min_cuts < 2 || min_cuts > max_cuts {
            return Err(Error::InvalidConfig(format!("cut bounds {min_cuts}..={max_cuts}: need 2 <= min <= max")));
        }
        Ok(Self { min_cuts, max_cuts })
    }
}

impl Default for CutBounds {
    fn default() -> Self {
        Self { min_cuts: 3, max_cuts: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewCuts { axis: Axis, len: usize, min: usize },
    TooManyCuts { axis: Axis, len: usize, max: usize },
    NotStrictlyIncreasing { axis: Axis },
    WrongStart { axis: Axis, expected: usize, found: usize },
    WrongEnd { axis: Axis, expected: usize, found: usize },
    OutsideRegion { axis: Axis, cut: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewCuts { axis, len, min } => {
                write!(f, "too few cuts ({axis}: {len} < {min})")
            }
            Violation::TooManyCuts { axis, len, max } => {
                write!(f, "too many cuts ({axis}: {len} > {max})")
            }
            Violation::NotStrictlyIncreasing { axis } => {
                write!(f, "not strictly increasing ({axis})")
            }
            Violation::WrongStart { axis, expected, found } => {
                write!(f, "{axis} cuts start at {found}, region starts at {expected}")
            }
            Violation::WrongEnd { axis, expected, found } => {
                write!(f, "{axis} cuts end at {found}, region ends at {expected}")
            }
            Violation::OutsideRegion { axis, cut } => write!(f, "{axis} cut {cut} outside region"),
        }
    }
}

/// Two-part, variable-length partition encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    pub region: Rect,
    pub h_cuts: Vec<usize>,
    pub v_cuts: Vec<usize>,
}

impl Chromosome {
    pub fn new(region: Rect, h_cuts: Vec<usize>, v_cuts: Vec<usize>) -> Self {
        Self { region, h_cuts, v_cuts }
    }

    /// Region taken from the first and last cut of each part.
    pub fn from_cuts(h_cuts: Vec<usize>, v_cuts: Vec<usize>) -> Result<Self> {
        let (Some(&t), Some(&b), Some(&l), Some(&r)) = (h_cuts.first(), h_cuts.last(), v_cuts.first(), v_cuts.last())
        else {
            return Err(Error::ChromosomeSyntax("empty cut list".into()));
        };
        Ok(Self { region: Rect::new(t, l, b, r)?, h_cuts, v_cuts })
    }

    pub fn cuts(&self, axis: Axis) -> &[usize] {
        match axis {
            Axis::Horizontal => &self.h_cuts,
            Axis::Vertical => &self.v_cuts,
        }
    }

    pub fn cuts_mut(&mut self, axis: Axis) -> &mut Vec<usize> {
        match axis {
            Axis::Horizontal => &mut self.h_cuts,
            Axis::Vertical => &mut self.v_cuts,
        }
    }

    /// Inclusive coordinate span of the region along `axis`.
    pub fn span(&self, axis: Axis) -> (usize, usize) {
        region_span(self.region, axis)
    }

    pub fn validate(&self, bounds: CutBounds) -> Vec<Violation> {
        let mut out = Vec::new();
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let cuts = self.cuts(axis);
            let (lo, hi) = self.span(axis);
            if cuts.len() < bounds.min_cuts.max(2) {
                out.push(Violation::TooFewCuts { axis, len: cuts.len(), min: bounds.min_cuts.max(2) });
            }
            if cuts.len() > bounds.max_cuts {
                out.push(Violation::TooManyCuts { axis, len: cuts.len(), max: bounds.max_cuts });
            }
            if cuts.windows(2).any(|w| w[0] >= w[1]) {
                out.push(Violation::NotStrictlyIncreasing { axis });
            }
            if let Some(&first) = cuts.first() {
                if first != lo {
                    out.push(Violation::WrongStart { axis, expected: lo, found: first });
                }
            }
            if let Some(&last) = cuts.last() {
                if last != hi {
                    out.push(Violation::WrongEnd { axis, expected: hi, found: last });
                }
            }
            for &cut in cuts.iter().filter(|&&c| c < lo || c > hi) {
                out.push(Violation::OutsideRegion { axis, cut });
            }
        }
        out
    }

    pub fn is_valid(&self, bounds: CutBounds) -> bool {
        self.validate(bounds).is_empty()
    }

    pub fn ensure_valid(&self, bounds: CutBounds) -> Result<()> {
        let v = self.validate(bounds);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidChromosome(v))
        }
    }

    /// Text form with an explicit region suffix: `h.. | v.. @ t,l,b,r`.
    pub fn to_string_with_region(&self) -> String {
        format!("{self} @ {}", self.region)
    }
}

pub(crate) fn region_span(region: Rect, axis: Axis) -> (usize, usize) {
    match axis {
        Axis::Horizontal => (region.top(), region.bottom()),
        Axis::Vertical => (region.left(), region.right()),
    }
}

fn join(cuts: &[usize]) -> String {
    cuts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", join(&self.h_cuts), join(&self.v_cuts))
    }
}

impl FromStr for Chromosome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = || Error::ChromosomeSyntax(s.to_string());
        let (body, region) = match s.split_once('@') {
            Some((body, region)) => (body, Some(region.trim().parse::<Rect>()?)),
            None => (s, None),
        };
        let (h, v) = body.split_once('|').ok_or_else(syntax)?;
        let parse = |part: &str| -> Result<Vec<usize>> {
            part.split(',').map(|c| c.trim().parse::<usize>().map_err(|_| syntax())).collect()
        };
        let (h, v) = (parse(h)?, parse(v)?);
        match region {
            Some(region) => Ok(Chromosome::new(region, h, v)),
            None => Chromosome::from_cuts(h, v),
        }
    }
}

impl Serialize for Chromosome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Chromosome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fuzziness of strip boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzyParams {
    /// Ramp half-width in pixels; 0 gives crisp strips.
    pub ramp: usize,
}

impl Default for FuzzyParams {
    fn default() -> Self {
        Self { ramp: 2 }
    }
}

/// Cell features in `[0, 1]`, row-major over (row strip, column strip).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub fn feature_dim(ch: &Chromosome) -> usize {
    ch.h_cuts.len().saturating_sub(1) * ch.v_cuts.len().saturating_sub(1)
}

/// Membership of every in-span coordinate in every strip:
/// `table[strip][coord - cuts[0]]`. `cuts` must be strictly increasing.
fn membership_table(cuts: &[usize], ramp: usize) -> Vec<Vec<f64>> {
    let first = cuts[0];
    let last = *cuts.last().unwrap();
    let strips = cuts.len() - 1;
    let mut table = vec![vec![0.0; last - first + 1]; strips];

    for x in first..=last {
        let owner = cuts[1..].iter().position(|&c| x < c).unwrap_or(strips - 1);
        table[owner][x - first] = 1.0;
    }
    for i in 1..strips {
        let b = cuts[i];
        let e = ramp.min((b - cuts[i - 1]) / 2).min((cuts[i + 1] - b) / 2);
        if e == 0 {
            continue;
        }
        for x in b - e..=b + e {
            let left = (b + e - x) as f64 / (2 * e) as f64;
            table[i - 1][x - first] = left;
            table[i][x - first] = 1.0 - left;
        }
    }
    table
}

/// Membership of `coord` in each strip defined by `cuts`.
pub fn strip_membership(cuts: &[usize], ramp: usize, coord: usize) -> Result<Vec<f64>> {
    let (Some(&first), Some(&last)) = (cuts.first(), cuts.last()) else {
        return Err(Error::ChromosomeSyntax("empty cut list".into()));
    };
    if cuts.len() < 2 || cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ChromosomeSyntax(format!("cuts {cuts:?} are not a strictly increasing sequence")));
    }
    if coord < first || coord > last {
        return Err(Error::CoordOutOfSpan { coord, first, last });
    }
    Ok(membership_table(cuts, ramp).into_iter().map(|row| row[coord - first]).collect())
}

/// Nonzero part of one strip's membership function.
#[derive(Debug, Clone)]
struct StripSupport {
    start: usize,
    weights: Vec<f64>,
}

fn supports(cuts: &[usize], ramp: usize) -> Vec<StripSupport> {
    let first = cuts[0];
    membership_table(cuts, ramp)
        .into_iter()
        .map(|row| {
            let lo = row.iter().position(|&m| m > 0.0).unwrap_or(0);
            let hi = row.iter().rposition(|&m| m > 0.0).unwrap_or(0);
            StripSupport { start: first + lo, weights: row[lo..=hi].to_vec() }
        })
        .collect()
}

/// Precomputed memberships for one chromosome, reusable across images.
#[derive(Debug, Clone)]
pub struct PartitionPlan {
    rows: Vec<StripSupport>,
    cols: Vec<StripSupport>,
}

impl PartitionPlan {
    pub fn new(ch: &Chromosome, fp: FuzzyParams) -> Result<Self> {
        ch.ensure_valid(CutBounds::ANY)?;
        Ok(Self { rows: supports(&ch.h_cuts, fp.ramp), cols: supports(&ch.v_cuts, fp.ramp) })
    }

    pub fn dim(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    /// `Σ I·μ_k(r)·μ_l(c) / Σ μ_k(r)·μ_l(c)` per cell, summed row-major with a
    /// single accumulator so the crisp case is an exact mean.
    pub fn extract(&self, img: &NormImage) -> FeatureVector {
        let mut out = Vec::with_capacity(self.dim());
        for rs in &self.rows {
            for cs in &self.cols {
                let mut num = 0.0;
                let mut den = 0.0;
                for (i, &mr) in rs.weights.iter().enumerate() {
                    let r = rs.start + i;
                    for (j, &mc) in cs.weights.iter().enumerate() {
                        let wt = mr * mc;
                        num += img.get(r, cs.start + j) * wt;
                        den += wt;
                    }
                }
                out.push((num / den).min(1.0));
            }
        }
        FeatureVector(out)
    }
}

pub fn extract_features(img: &NormImage, ch: &Chromosome, fp: FuzzyParams) -> Result<FeatureVector> {
    Ok(PartitionPlan::new(ch, fp)?.extract(img))
}

fn random_cuts<R: Rng + ?Sized>(lo: usize, hi: usize, bounds: CutBounds, rng: &mut R) -> Result<Vec<usize>> {
    let available = hi - lo + 1;
    if available < bounds.min_cuts || bounds.min_cuts < 2 {
        return Err(Error::RegionTooSmall { min_cuts: bounds.min_cuts });
    }
    let count = rng.gen_range(bounds.min_cuts..=bounds.max_cuts.min(available));
    let mut cuts: Vec<usize> = index::sample(rng, available - 2, count - 2).into_iter().map(|i| lo + 1 + i).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_unstable();
    Ok(cuts)
}

pub fn random_chromosome<R: Rng + ?Sized>(region: Rect, bounds: CutBounds, rng: &mut R) -> Result<Chromosome> {
    let h = random_cuts(region.top(), region.bottom(), bounds, rng)?;
    let v = random_cuts(region.left(), region.right(), bounds, rng)?;
    Ok(Chromosome::new(region, h, v))
}

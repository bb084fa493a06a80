//! Nearest-prototype classification over fuzzy features and confusion
//! accounting.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::partitions::{feature_dim, Chromosome, FeatureVector, FuzzyParams};
use crate::Label;

/// Mean feature vector of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassModel {
    pub class_id: Label,
    pub prototype: FeatureVector,
    pub sample_count: usize,
}

/// Prototypes for a set of classes plus the partition that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSet {
    pub chromosome: Chromosome,
    pub fuzzy_params: FuzzyParams,
    pub models: BTreeMap<Label, ClassModel>,
}

impl ModelSet {
    pub fn labels(&self) -> Vec<Label> {
        self.models.keys().copied().collect()
    }

    pub fn dim(&self) -> usize {
        feature_dim(&self.chromosome)
    }
}

pub fn build_models<'a, I>(features: I, ch: &Chromosome, fp: FuzzyParams) -> Result<ModelSet>
where
    I: IntoIterator<Item = (&'a FeatureVector, Label)>,
{
    let dim = feature_dim(ch);
    let mut sums: BTreeMap<Label, (Vec<f64>, usize)> = BTreeMap::new();
    for (fv, label) in features {
        if fv.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: fv.len() });
        }
        let (sum, n) = sums.entry(label).or_insert_with(|| (vec![0.0; dim], 0));
        for (s, v) in sum.iter_mut().zip(fv.values()) {
            *s += v;
        }
        *n += 1;
    }
    if sums.is_empty() {
        return Err(Error::EmptySamples);
    }
    let models = sums
        .into_iter()
        .map(|(label, (sum, n))| {
            let proto = sum.into_iter().map(|s| (s / n as f64).clamp(0.0, 1.0)).collect();
            (label, ClassModel { class_id: label, prototype: FeatureVector(proto), sample_count: n })
        })
        .collect();
    Ok(ModelSet { chromosome: ch.clone(), fuzzy_params: fp, models })
}

/// `1 − mean |x_i − m_i|`.
pub fn similarity(x: &FeatureVector, m: &ClassModel) -> Result<f64> {
    similarity_raw(x.values(), m.prototype.values())
}

fn similarity_raw(x: &[f64], m: &[f64]) -> Result<f64> {
    if x.len() != m.len() {
        return Err(Error::DimensionMismatch { expected: m.len(), found: x.len() });
    }
    if x.is_empty() {
        return Ok(1.0);
    }
    let l1: f64 = x.iter().zip(m).map(|(a, b)| (a - b).abs()).sum();
    Ok((1.0 - l1 / x.len() as f64).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Similarity to every allowed class.
    pub scores: BTreeMap<Label, f64>,
}

/// Best-scoring allowed class; ties go to the smallest label.
pub fn classify(x: &FeatureVector, ms: &ModelSet, allowed: &[Label]) -> Result<Prediction> {
    if allowed.is_empty() {
        return Err(Error::EmptyAllowedSet);
    }
    let mut scores = BTreeMap::new();
    for &label in allowed {
        let model = ms.models.get(&label).ok_or(Error::UnknownLabel(label))?;
        scores.insert(label, similarity(x, model)?);
    }
    // BTreeMap iterates in label order, so strict `>` keeps the smallest tie.
    let mut best: Option<(Label, f64)> = None;
    for (&label, &s) in &scores {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((label, s));
        }
    }
    Ok(Prediction { label: best.expect("allowed is non-empty").0, scores })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<Label>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: &[Label]) -> Self {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let n = labels.len();
        Self { labels, counts: vec![vec![0; n]; n] }
    }

    /// `counts[i][j]`: samples of `labels[i]` predicted as `labels[j]`.
    pub fn from_counts(labels: Vec<Label>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("confusion labels must be sorted and distinct".into()));
        }
        if counts.len() != labels.len() || counts.iter().any(|row| row.len() != labels.len()) {
            return Err(Error::DimensionMismatch { expected: labels.len(), found: counts.len() });
        }
        Ok(Self { labels, counts })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn get(&self, truth: Label, predicted: Label) -> u64 {
        match (self.index_of(truth), self.index_of(predicted)) {
            (Some(i), Some(j)) => self.counts[i][j],
            _ => 0,
        }
    }

    pub fn record(&mut self, truth: Label, predicted: Label) -> Result<()> {
        let i = self.index_of(truth).ok_or(Error::UnknownLabel(truth))?;
        let j = self.index_of(predicted).ok_or(Error::UnknownLabel(predicted))?;
        self.counts[i][j] += 1;
        Ok(())
    }

    pub fn correct(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_total(&self, truth: Label) -> u64 {
        self.index_of(truth).map_or(0, |i| self.counts[i].iter().sum())
    }

    /// Tab-separated grid; header row and column carry the labels.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            write!(out, "\t{l}").unwrap();
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.counts) {
            write!(out, "{l}").unwrap();
            for c in row {
                write!(out, "\t{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidConfig(format!("confusion TSV: {msg}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty"))?;
        let labels = header
            .split('\t')
            .skip(1)
            .map(|s| s.trim().parse::<Label>().map_err(|_| bad("bad label")))
            .collect::<Result<Vec<_>>>()?;
        let mut counts = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut cells = line.split('\t');
            let label: Label = cells.next().and_then(|s| s.trim().parse().ok()).ok_or_else(|| bad("bad row label"))?;
            if labels.get(i) != Some(&label) {
                return Err(bad("row labels do not match header"));
            }
            counts.push(
                cells.map(|s| s.trim().parse::<u64>().map_err(|_| bad("bad count"))).collect::<Result<Vec<_>>>()?,
            );
        }
        Self::from_counts(labels, counts)
    }
}

pub fn confusion(preds: &[(Label, Label)], labels: &[Label]) -> Result<ConfusionMatrix> {
    let mut cm = ConfusionMatrix::new(labels);
    for &(truth, predicted) in preds {
        cm.record(truth, predicted)?;
    }
    Ok(cm)
}

/// Trace over total.
pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    match cm.total() {
        0 => Err(Error::EmptyMatrix),
        total => Ok(cm.correct() as f64 / total as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::Rect;

    fn ch1() -> Chromosome {
        // 2 features
        Chromosome::new(Rect::FULL, vec![0, 31], vec![0, 16, 31])
    }

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector(v.to_vec())
    }

    fn models(protos: &[(Label, [f64; 2])]) -> ModelSet {
        let fvs: Vec<_> = protos.iter().map(|(l, p)| (fv(p), *l)).collect();
        build_models(fvs.iter().map(|(f, l)| (f, *l)), &ch1(), FuzzyParams::default()).unwrap()
    }

    #[test]
    fn prototypes_are_means() {
        let a = fv(&[0.0, 1.0]);
        let b = fv(&[1.0, 0.0]);
        let ms = build_models([(&a, 3), (&b, 3)], &ch1(), FuzzyParams::default()).unwrap();
        assert_eq!(ms.models[&3].prototype.values(), &[0.5, 0.5]);
        assert_eq!(ms.models[&3].sample_count, 2);

        let c = fv(&[0.25, 0.75]);
        let ms = build_models(std::iter::repeat_n((&c, 1), 50), &ch1(), FuzzyParams::default()).unwrap();
        assert_eq!(ms.models[&1].prototype, c);
    }

    #[test]
    fn build_models_errors() {
        let bad = fv(&[0.1]);
        assert!(matches!(
            build_models([(&bad, 0)], &ch1(), FuzzyParams::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(build_models(std::iter::empty(), &ch1(), FuzzyParams::default()).is_err());
    }

    #[test]
    fn similarity_values() {
        let m = ClassModel { class_id: 0, prototype: fv(&[0.4, 0.2]), sample_count: 1 };
        assert!((similarity(&fv(&[0.2, 0.6]), &m).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(similarity(&fv(&[0.4, 0.2]), &m).unwrap(), 1.0);
        let ones = ClassModel { class_id: 0, prototype: fv(&[1.0, 1.0]), sample_count: 1 };
        assert_eq!(similarity(&fv(&[0.0, 0.0]), &ones).unwrap(), 0.0);
        assert!(similarity(&fv(&[0.0]), &ones).is_err());
    }

    #[test]
    fn classify_tie_breaks_to_smallest_label() {
        let ms = models(&[(4, [0.2, 0.2]), (2, [0.2, 0.2]), (9, [0.0, 0.0])]);
        let p = classify(&fv(&[0.2, 0.2]), &ms, &[9, 4, 2]).unwrap();
        assert_eq!(p.label, 2);
        assert_eq!(p.scores.len(), 3);
        let p = classify(&fv(&[0.9, 0.9]), &ms, &[9]).unwrap();
        assert_eq!(p.label, 9);
        assert!(matches!(classify(&fv(&[0.0, 0.0]), &ms, &[]), Err(Error::EmptyAllowedSet)));
        assert!(matches!(classify(&fv(&[0.0, 0.0]), &ms, &[5]), Err(Error::UnknownLabel(5))));
    }

    #[test]
    fn classify_exact_prototype() {
        let protos: Vec<(Label, [f64; 2])> = (0..10).map(|l| (l, [l as f64 / 10.0, 1.0 - l as f64 / 20.0])).collect();
        let ms = models(&protos);
        let all = ms.labels();
        let p = classify(&ms.models[&7].prototype.clone(), &ms, &all).unwrap();
        assert_eq!(p.label, 7);
        assert_eq!(p.scores[&7], 1.0);
    }

    #[test]
    fn confusion_and_accuracy() {
        let cm = confusion(&[(0, 0), (1, 1), (2, 2)], &[0, 1, 2]).unwrap();
        assert_eq!(cm.counts(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(accuracy(&cm).unwrap(), 1.0);

        let cm = confusion(&[(1, 0)], &[0, 1]).unwrap();
        assert_eq!(cm.get(1, 0), 1);
        assert_eq!(cm.total(), 1);
        assert_eq!(accuracy(&cm).unwrap(), 0.0);

        assert!(matches!(confusion(&[(3, 0)], &[0, 1]), Err(Error::UnknownLabel(3))));
        assert!(matches!(accuracy(&ConfusionMatrix::new(&[0, 1])), Err(Error::EmptyMatrix)));
    }

    #[test]
    fn tsv_round_trip() {
        let cm = confusion(&[(0, 0), (0, 5), (5, 5), (5, 0), (5, 0)], &[5, 0]).unwrap();
        let tsv = cm.to_tsv();
        assert_eq!(tsv, "\t0\t5\n0\t1\t1\n5\t2\t1\n");
        assert_eq!(ConfusionMatrix::from_tsv(&tsv).unwrap(), cm);
        assert!(ConfusionMatrix::from_tsv("\t0\t1\n1\t0\t0\n").is_err());
    }
}

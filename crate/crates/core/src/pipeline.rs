//! Two-pass training, classification and evaluation.
//!
//! The coarse pass classifies over all classes with a full-frame partition.
//! Classes it confuses are grouped; each group gets its own partition
//! restricted to the group's confusion region. At classification time a
//! grouped coarse label is re-decided among the group members only.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{
    accuracy, build_models, classify, confusion, ClassModel, ConfusionMatrix, ModelSet, Prediction,
};
use crate::error::{Error, Result};
use crate::evolution::{evolve, EvolutionTrace, GAConfig};
use crate::grouping::{confusion_region, form_groups, GroupSpec, GroupingConfig};
use crate::imaging::{overlap_image, LabeledSet, NormImage, OverlapImage, Rect, FRAME};
use crate::partitions::{feature_dim, Chromosome, CutBounds, FeatureVector, FuzzyParams, PartitionPlan};
use crate::Label;

pub const MODEL_VERSION: &str = "fuzzygeno-1";

#[derive(Debug, Clone, PartialEq)]
pub struct GroupModel {
    pub spec: GroupSpec,
    /// Member prototypes; `models.chromosome` is confined to `spec.region`.
    pub models: ModelSet,
    /// Resubstitution accuracy within the group on the training data.
    pub group_rate: f64,
}

impl GroupModel {
    pub fn chromosome(&self) -> &Chromosome {
        &self.models.chromosome
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPassModel {
    pub fuzzy_params: FuzzyParams,
    pub coarse: ModelSet,
    pub groups: Vec<GroupModel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationTrace {
    pub coarse_prediction: Prediction,
    pub group_used: Option<Vec<Label>>,
    pub final_prediction: Prediction,
}

fn models_for(
    samples: &[(&NormImage, Label)],
    ch: &Chromosome,
    fp: FuzzyParams,
) -> Result<(ModelSet, Vec<FeatureVector>)> {
    let plan = PartitionPlan::new(ch, fp)?;
    let features: Vec<FeatureVector> = samples.par_iter().map(|(img, _)| plan.extract(img)).collect();
    let ms = build_models(features.iter().zip(samples.iter().map(|(_, l)| *l)), ch, fp)?;
    Ok((ms, features))
}

/// Evolves the full-frame partition over all classes and reports the
/// resubstitution confusion matrix.
pub fn train_coarse(
    data: &LabeledSet,
    cfg: &GAConfig,
    fp: FuzzyParams,
) -> Result<(ModelSet, ConfusionMatrix, EvolutionTrace)> {
    let classes = data.classes().to_vec();
    let (best, trace) = evolve(data, Rect::FULL, cfg, fp, &classes)?;
    let samples: Vec<_> = data.items().iter().map(|(img, l)| (img, *l)).collect();
    let (ms, features) = models_for(&samples, &best, fp)?;
    let preds = features
        .par_iter()
        .zip(&samples)
        .map(|(fv, (_, truth))| Ok((*truth, classify(fv, &ms, &classes)?.label)))
        .collect::<Result<Vec<_>>>()?;
    let cm = confusion(&preds, &classes)?;
    Ok((ms, cm, trace))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedGroup {
    pub model: GroupModel,
    pub trace: EvolutionTrace,
}

fn group_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1))
}

/// Widens `r` around its centre until each side spans at least `min` pixels.
fn widen(r: Rect, min: usize) -> Rect {
    let grow = |lo: usize, hi: usize| {
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo + 1 < min.min(FRAME) {
            if lo > 0 && (hi - lo) % 2 == 0 || hi == FRAME - 1 {
                lo -= 1;
            } else {
                hi += 1;
            }
        }
        (lo, hi)
    };
    let (t, b) = grow(r.top(), r.bottom());
    let (l, rt) = grow(r.left(), r.right());
    Rect::new(t, l, b, rt).expect("widened rectangle stays in frame")
}

/// Overlap images of every class in `data`.
pub fn class_overlaps(data: &LabeledSet) -> Result<Vec<OverlapImage>> {
    data.classes()
        .iter()
        .map(|&label| {
            let imgs: Vec<&NormImage> = data.images_of(label).collect();
            overlap_image(&imgs, label)
        })
        .collect()
}

fn train_one_group(
    data: &LabeledSet,
    members: Vec<Label>,
    region: Rect,
    cfg: &GAConfig,
    fp: FuzzyParams,
    index: usize,
) -> Result<TrainedGroup> {
    let group_cfg = GAConfig { seed: group_seed(cfg.seed, index), ..cfg.clone() };
    let (best, trace) = evolve(data, region, &group_cfg, fp, &members)?;

    let samples: Vec<_> = data.items().iter().filter(|(_, l)| members.contains(l)).map(|(img, l)| (img, *l)).collect();
    let (ms, features) = models_for(&samples, &best, fp)?;
    let mut correct = 0;
    for (fv, (_, truth)) in features.iter().zip(&samples) {
        if classify(fv, &ms, &members)?.label == *truth {
            correct += 1;
        }
    }
    let group_rate = correct as f64 / samples.len() as f64;
    Ok(TrainedGroup { model: GroupModel { spec: GroupSpec { members, region }, models: ms, group_rate }, trace })
}

/// Second-pass training: one region-restricted partition per group found in
/// the coarse confusion matrix. Groups whose region cannot be detected and
/// that have no override are dropped with a warning.
pub fn train_groups(
    data: &LabeledSet,
    cm: &ConfusionMatrix,
    gcfg: &GroupingConfig,
    cfg: &GAConfig,
    fp: FuzzyParams,
) -> Result<Vec<TrainedGroup>> {
    gcfg.validate()?;
    let overlaps: BTreeMap<Label, OverlapImage> = class_overlaps(data)?.into_iter().map(|o| (o.class_id, o)).collect();

    let mut out = Vec::new();
    for (index, members) in form_groups(cm, gcfg.pair_threshold).into_iter().enumerate() {
        let region = match gcfg.region_overrides.get(&members) {
            Some(r) => *r,
            None => {
                let member_overlaps = members
                    .iter()
                    .map(|l| overlaps.get(l).cloned().ok_or(Error::NoSamplesForClass(*l)))
                    .collect::<Result<Vec<_>>>()?;
                match confusion_region(&member_overlaps, gcfg.region_threshold) {
                    Ok(r) => widen(r, cfg.cut_bounds.min_cuts),
                    Err(Error::NoConfusionRegion) => {
                        warn!("group {members:?}: no confusion region and no override; dropped");
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        out.push(train_one_group(data, members, region, cfg, fp, index)?);
    }
    Ok(out)
}

/// Second-pass training for explicitly given groups (members and regions),
/// bypassing discovery from the confusion matrix.
pub fn train_fixed_groups(
    data: &LabeledSet,
    groups: &[GroupSpec],
    cfg: &GAConfig,
    fp: FuzzyParams,
) -> Result<Vec<TrainedGroup>> {
    let mut seen = BTreeSet::new();
    for g in groups {
        if g.members.len() < 2 || g.members.iter().any(|l| !seen.insert(*l)) {
            return Err(Error::InvalidConfig(format!(
                "group {:?} overlaps another or has fewer than two members",
                g.members
            )));
        }
        if let Some(l) = g.members.iter().find(|l| data.count_of(**l) == 0) {
            return Err(Error::NoSamplesForClass(*l));
        }
    }
    groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut members = g.members.clone();
            members.sort_unstable();
            train_one_group(data, members, g.region, cfg, fp, i)
        })
        .collect()
}

/// Everything produced by a full two-pass training run.
#[derive(Debug, Clone)]
pub struct TrainingRun {
    pub model: TwoPassModel,
    pub coarse_confusion: ConfusionMatrix,
    pub coarse_trace: EvolutionTrace,
    pub group_traces: Vec<EvolutionTrace>,
}

/// Coarse pass then second pass. With `fixed_groups` the groups are taken as
/// given; otherwise they are discovered from the coarse confusion matrix.
pub fn train(
    data: &LabeledSet,
    gcfg: &GroupingConfig,
    cfg: &GAConfig,
    fp: FuzzyParams,
    fixed_groups: Option<&[GroupSpec]>,
) -> Result<TrainingRun> {
    let (coarse, cm, coarse_trace) = train_coarse(data, cfg, fp)?;
    let groups = match fixed_groups {
        Some(specs) => train_fixed_groups(data, specs, cfg, fp)?,
        None => train_groups(data, &cm, gcfg, cfg, fp)?,
    };
    let (groups, group_traces) = groups.into_iter().map(|g| (g.model, g.trace)).unzip();
    Ok(TrainingRun {
        model: TwoPassModel { fuzzy_params: fp, coarse, groups },
        coarse_confusion: cm,
        coarse_trace,
        group_traces,
    })
}

/// A model with its partition plans precomputed, for classifying many images.
pub struct TwoPassClassifier<'m> {
    model: &'m TwoPassModel,
    coarse_plan: PartitionPlan,
    coarse_labels: Vec<Label>,
    group_plans: Vec<PartitionPlan>,
}

impl<'m> TwoPassClassifier<'m> {
    pub fn new(model: &'m TwoPassModel) -> Result<Self> {
        Ok(Self {
            coarse_plan: PartitionPlan::new(&model.coarse.chromosome, model.fuzzy_params)?,
            coarse_labels: model.coarse.labels(),
            group_plans: model
                .groups
                .iter()
                .map(|g| PartitionPlan::new(g.chromosome(), model.fuzzy_params))
                .collect::<Result<_>>()?,
            model,
        })
    }

    pub fn classify(&self, img: &NormImage) -> Result<ClassificationTrace> {
        let fv = self.coarse_plan.extract(img);
        let coarse = classify(&fv, &self.model.coarse, &self.coarse_labels)?;
        let group = self.model.groups.iter().position(|g| g.spec.members.contains(&coarse.label));
        match group {
            None => Ok(ClassificationTrace {
                final_prediction: coarse.clone(),
                coarse_prediction: coarse,
                group_used: None,
            }),
            Some(i) => {
                let g = &self.model.groups[i];
                let gfv = self.group_plans[i].extract(img);
                let fine = classify(&gfv, &g.models, &g.spec.members)?;
                Ok(ClassificationTrace {
                    coarse_prediction: coarse,
                    group_used: Some(g.spec.members.clone()),
                    final_prediction: fine,
                })
            }
        }
    }

    /// Member-restricted second-pass label, whatever the coarse decision.
    fn classify_within(&self, group: usize, img: &NormImage) -> Result<Label> {
        let g = &self.model.groups[group];
        Ok(classify(&self.group_plans[group].extract(img), &g.models, &g.spec.members)?.label)
    }
}

pub fn classify_two_pass(img: &NormImage, model: &TwoPassModel) -> Result<ClassificationTrace> {
    TwoPassClassifier::new(model)?.classify(img)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupRate {
    pub members: Vec<Label>,
    /// Within-group recognition rate on the evaluated samples of the
    /// members; `None` when the data holds none.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub coarse: ConfusionMatrix,
    pub two_pass: ConfusionMatrix,
    pub coarse_accuracy: f64,
    pub two_pass_accuracy: f64,
    pub group_rates: Vec<GroupRate>,
    /// Per-sample traces in dataset order.
    pub traces: Vec<ClassificationTrace>,
}

pub fn evaluate(data: &LabeledSet, model: &TwoPassModel) -> Result<EvaluationReport> {
    let labels = model.coarse.labels();
    if let Some(&l) = data.classes().iter().find(|l| labels.binary_search(l).is_err()) {
        return Err(Error::UnknownLabel(l));
    }
    let clf = TwoPassClassifier::new(model)?;
    let traces = data.items().par_iter().map(|(img, _)| clf.classify(img)).collect::<Result<Vec<_>>>()?;

    let pass1: Vec<_> = data.items().iter().zip(&traces).map(|((_, t), tr)| (*t, tr.coarse_prediction.label)).collect();
    let pass2: Vec<_> = data.items().iter().zip(&traces).map(|((_, t), tr)| (*t, tr.final_prediction.label)).collect();
    let coarse = confusion(&pass1, &labels)?;
    let two_pass = confusion(&pass2, &labels)?;

    let mut group_rates = Vec::new();
    for (i, g) in model.groups.iter().enumerate() {
        let members: Vec<_> = data.items().iter().filter(|(_, l)| g.spec.members.contains(l)).collect();
        let rate = if members.is_empty() {
            None
        } else {
            let mut correct = 0usize;
            for (img, truth) in &members {
                if clf.classify_within(i, img)? == *truth {
                    correct += 1;
                }
            }
            Some(correct as f64 / members.len() as f64)
        };
        group_rates.push(GroupRate { members: g.spec.members.clone(), rate });
    }

    Ok(EvaluationReport {
        coarse_accuracy: accuracy(&coarse)?,
        two_pass_accuracy: accuracy(&two_pass)?,
        coarse,
        two_pass,
        group_rates,
        traces,
    })
}

// ---- persistence ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrototypeRecord {
    label: Label,
    sample_count: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoarseRecord {
    chromosome: String,
    prototypes: Vec<PrototypeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupRecord {
    members: Vec<Label>,
    region: [usize; 4],
    chromosome: String,
    prototypes: Vec<PrototypeRecord>,
    group_rate: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: String,
    fuzzy_params: FuzzyParams,
    coarse: CoarseRecord,
    groups: Vec<GroupRecord>,
}

fn prototype_records(ms: &ModelSet) -> Vec<PrototypeRecord> {
    ms.models
        .values()
        .map(|m| PrototypeRecord { label: m.class_id, sample_count: m.sample_count, values: m.prototype.0.clone() })
        .collect()
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

fn model_set_from(chromosome: &str, protos: Vec<PrototypeRecord>, fp: FuzzyParams, what: &str) -> Result<ModelSet> {
    let ch: Chromosome = chromosome.parse().map_err(|e| invalid(format!("{what} chromosome: {e}")))?;
    let violations = ch.validate(CutBounds::ANY);
    if !violations.is_empty() {
        return Err(Error::InvalidModel(format!("{what} chromosome: {}", Error::InvalidChromosome(violations))));
    }
    let dim = feature_dim(&ch);
    let mut models = BTreeMap::new();
    for p in protos {
        if p.values.len() != dim {
            return Err(invalid(format!(
                "{what} prototype {} has {} values, chromosome gives {dim}",
                p.label,
                p.values.len()
            )));
        }
        if p.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(invalid(format!("{what} prototype {} has values outside [0, 1]", p.label)));
        }
        if p.sample_count == 0 {
            return Err(invalid(format!("{what} prototype {} has zero samples", p.label)));
        }
        let model = ClassModel { class_id: p.label, prototype: FeatureVector(p.values), sample_count: p.sample_count };
        if models.insert(p.label, model).is_some() {
            return Err(invalid(format!("{what} has duplicate label {}", p.label)));
        }
    }
    if models.is_empty() {
        return Err(invalid(format!("{what} has no prototypes")));
    }
    Ok(ModelSet { chromosome: ch, fuzzy_params: fp, models })
}

impl TwoPassModel {
    /// Checks the structural invariants a trained model always satisfies.
    pub fn validate(&self) -> Result<()> {
        if self.coarse.chromosome.region != Rect::FULL {
            return Err(invalid("coarse chromosome must cover the full frame"));
        }
        let labels: BTreeSet<Label> = self.coarse.models.keys().copied().collect();
        let mut seen = BTreeSet::new();
        for g in &self.groups {
            let m = &g.spec.members;
            if m.len() < 2 || m.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("group {m:?} must list at least two sorted distinct members")));
            }
            if m.iter().any(|l| !seen.insert(*l)) {
                return Err(invalid("overlapping groups"));
            }
            if let Some(l) = m.iter().find(|l| !labels.contains(l)) {
                return Err(invalid(format!("group member {l} has no coarse prototype")));
            }
            if g.chromosome().region != g.spec.region {
                return Err(invalid(format!("group {m:?} chromosome does not span its region")));
            }
            if g.models.labels() != *m {
                return Err(invalid(format!("group {m:?} prototypes do not match its members")));
            }
            if !(0.0..=1.0).contains(&g.group_rate) {
                return Err(invalid(format!("group {m:?} rate {} outside [0, 1]", g.group_rate)));
            }
        }
        Ok(())
    }

    pub fn classes(&self) -> Vec<Label> {
        self.coarse.labels()
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let file = ModelFile {
            version: MODEL_VERSION.to_string(),
            fuzzy_params: self.fuzzy_params,
            coarse: CoarseRecord {
                chromosome: self.coarse.chromosome.to_string(),
                prototypes: prototype_records(&self.coarse),
            },
            groups: self
                .groups
                .iter()
                .map(|g| GroupRecord {
                    members: g.spec.members.clone(),
                    region: g.spec.region.into(),
                    chromosome: g.chromosome().to_string(),
                    prototypes: prototype_records(&g.models),
                    group_rate: g.group_rate,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).map_err(|e| invalid(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::MalformedModel(e.to_string()))?;
        match value.get("version").and_then(|v| v.as_str()) {
            Some(MODEL_VERSION) => {}
            Some(other) => return Err(Error::VersionMismatch { expected: MODEL_VERSION.into(), found: other.into() }),
            None => return Err(Error::MalformedModel("missing version tag".into())),
        }
        let file: ModelFile = serde_json::from_value(value).map_err(|e| Error::MalformedModel(e.to_string()))?;
        let fp = file.fuzzy_params;
        let coarse = model_set_from(&file.coarse.chromosome, file.coarse.prototypes, fp, "coarse")?;
        let groups = file
            .groups
            .into_iter()
            .map(|g| {
                let region = Rect::try_from(g.region).map_err(|e| invalid(e.to_string()))?;
                let models = model_set_from(&g.chromosome, g.prototypes, fp, "group")?;
                Ok(GroupModel { spec: GroupSpec { members: g.members, region }, models, group_rate: g.group_rate })
            })
            .collect::<Result<Vec<_>>>()?;
        let model = TwoPassModel { fuzzy_params: fp, coarse, groups };
        model.validate()?;
        Ok(model)
    }
}

pub fn save_model(model: &TwoPassModel, path: &Path) -> Result<()> {
    let text = model.to_json()?;
    fs::write(path, text).map_err(|e| Error::Write { path: path.into(), source: e })
}

pub fn load_model(path: &Path) -> Result<TwoPassModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    TwoPassModel::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::Rect;

    fn fixture() -> TwoPassModel {
        let coarse_ch = Chromosome::from_cuts(vec![0, 16, 31], vec![0, 31]).unwrap();
        let proto = |l: Label, a: f64, b: f64| {
            (l, ClassModel { class_id: l, prototype: FeatureVector(vec![a, b]), sample_count: 3 })
        };
        let coarse = ModelSet {
            chromosome: coarse_ch,
            fuzzy_params: FuzzyParams::default(),
            models: BTreeMap::from([proto(0, 0.1, 0.9), proto(1, 0.9, 0.1), proto(2, 0.5, 0.5)]),
        };
        let region = Rect::new(0, 0, 15, 31).unwrap();
        let gch = Chromosome::new(region, vec![0, 8, 15], vec![0, 31]);
        let group = GroupModel {
            spec: GroupSpec { members: vec![0, 2], region },
            models: ModelSet {
                chromosome: gch,
                fuzzy_params: FuzzyParams::default(),
                models: BTreeMap::from([proto(0, 0.0, 1.0), proto(2, 1.0 / 3.0, 0.1 + 0.2)]),
            },
            group_rate: 0.9,
        };
        TwoPassModel { fuzzy_params: FuzzyParams::default(), coarse, groups: vec![group] }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = fixture();
        let text = m.to_json().unwrap();
        let back = TwoPassModel::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn load_rejections() {
        let text = fixture().to_json().unwrap();
        let err = TwoPassModel::from_json(&text[..text.len() / 2]).unwrap_err();
        assert!(err.to_string().starts_with("malformed model file"), "{err}");

        let wrong = text.replace(MODEL_VERSION, "fuzzygeno-0");
        assert!(matches!(TwoPassModel::from_json(&wrong), Err(Error::VersionMismatch { .. })));

        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["coarse"]["prototypes"][0]["values"].as_array_mut().unwrap().pop();
        let short = serde_json::to_string(&v).unwrap();
        assert!(matches!(TwoPassModel::from_json(&short), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn overlapping_groups_are_invalid() {
        let mut m = fixture();
        let mut g = m.groups[0].clone();
        g.spec.members = vec![1, 2];
        g.models.models = BTreeMap::from([
            (1, ClassModel { class_id: 1, prototype: FeatureVector(vec![0.0, 0.0]), sample_count: 1 }),
            (2, m.groups[0].models.models[&2].clone()),
        ]);
        m.groups.push(g);
        assert_eq!(m.validate().unwrap_err().to_string(), "invalid model: overlapping groups");
    }

    #[test]
    fn routing_follows_coarse_label() {
        let m = fixture();
        // top half dark, bottom half bright: closest to class 1 (ungrouped)
        let img = NormImage::from_fn(|r, _| if r < 16 { 0.9 } else { 0.1 });
        let t = classify_two_pass(&img, &m).unwrap();
        assert_eq!(t.coarse_prediction.label, 1);
        assert_eq!(t.group_used, None);
        assert_eq!(t.final_prediction, t.coarse_prediction);

        let img = NormImage::from_fn(|r, _| if r < 16 { 0.1 } else { 0.9 });
        let t = classify_two_pass(&img, &m).unwrap();
        assert_eq!(t.coarse_prediction.label, 0);
        assert_eq!(t.group_used, Some(vec![0, 2]));
        assert!([0, 2].contains(&t.final_prediction.label));
        assert_eq!(t.final_prediction.scores.len(), 2);
    }

    #[test]
    fn zero_group_model_keeps_coarse_decisions() {
        let mut m = fixture();
        m.groups.clear();
        let items = (0..6)
            .map(|i| (NormImage::from_fn(|r, _| if (r < 16) == (i % 2 == 0) { 0.8 } else { 0.2 }), (i % 3) as Label))
            .collect();
        let data = LabeledSet::new(items).unwrap();
        let report = evaluate(&data, &m).unwrap();
        assert_eq!(report.coarse, report.two_pass);
        assert_eq!(report.coarse_accuracy, report.two_pass_accuracy);
        assert!(report.traces.iter().all(|t| t.group_used.is_none()));
    }

    #[test]
    fn evaluate_rejects_unknown_labels() {
        let data = LabeledSet::new(vec![(NormImage::blank(), 7)]).unwrap();
        assert!(matches!(evaluate(&data, &fixture()), Err(Error::UnknownLabel(7))));
    }

    #[test]
    fn widen_keeps_small_regions_usable() {
        let r = widen(Rect::new(5, 31, 5, 31).unwrap(), 3);
        assert_eq!((r.height(), r.width()), (3, 3));
        assert!(r.contains(5, 31));
        let r = widen(Rect::new(0, 0, 0, 0).unwrap(), 4);
        assert_eq!(r, Rect::new(0, 0, 3, 3).unwrap());
    }
}

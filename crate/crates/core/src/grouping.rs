//! Groups of mutually confused classes and the frame regions where they
//! differ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::classifier::ConfusionMatrix;
use crate::error::{Error, Result};
use crate::imaging::{OverlapImage, Rect, FRAME};
use crate::Label;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupingConfig {
    /// Minimum symmetric confusion count `counts[i][j] + counts[j][i]` for
    /// two classes to be linked.
    pub pair_threshold: u64,
    /// Minimum overlap-image disagreement for a pixel to join the region.
    pub region_threshold: f64,
    /// Fixed regions keyed by sorted member list; these win over detection.
    pub region_overrides: BTreeMap<Vec<Label>, Rect>,
}

impl Default for GroupingConfig {
    fn default() -> Self {
        Self { pair_threshold: 7, region_threshold: 0.5, region_overrides: BTreeMap::new() }
    }
}

impl GroupingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pair_threshold < 1 {
            return Err(Error::InvalidConfig("pair_threshold must be at least 1".into()));
        }
        if !(self.region_threshold > 0.0 && self.region_threshold <= 1.0) {
            return Err(Error::InvalidConfig(format!("region_threshold {} outside (0, 1]", self.region_threshold)));
        }
        Ok(())
    }

    /// Override if one is registered for `members`, otherwise the detected
    /// confusion region of the members' overlap images.
    pub fn resolve_region(&self, members: &[Label], overlaps: &[OverlapImage]) -> Result<Rect> {
        match self.region_overrides.get(members) {
            Some(r) => Ok(*r),
            None => confusion_region(overlaps, self.region_threshold),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub members: Vec<Label>,
    pub region: Rect,
}

/// Connected components (size ≥ 2) of the graph linking classes whose
/// symmetric confusion count reaches `threshold`. Each component is sorted;
/// components are ordered by their smallest member.
pub fn form_groups(cm: &ConfusionMatrix, threshold: u64) -> Vec<Vec<Label>> {
    let labels = cm.labels();
    let counts = cm.counts();
    let n = labels.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, row) in counts.iter().enumerate() {
        for j in i + 1..n {
            if row[j] + counts[j][i] >= threshold {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    for (i, &label) in labels.iter().enumerate() {
        let root = find(&mut parent, i);
        comps.entry(root).or_default().push(label);
    }
    comps.into_values().filter(|c| c.len() >= 2).collect()
}

/// Labels that belong to no group.
pub fn ungrouped(labels: &[Label], groups: &[Vec<Label>]) -> Vec<Label> {
    let grouped: BTreeSet<Label> = groups.iter().flatten().copied().collect();
    labels.iter().copied().filter(|l| !grouped.contains(l)).collect()
}

/// Per-pixel maximum absolute difference over all member pairs.
pub fn disagreement_map(overlaps: &[OverlapImage]) -> Vec<f64> {
    let mut d = vec![0.0f64; FRAME * FRAME];
    for (i, a) in overlaps.iter().enumerate() {
        for b in &overlaps[i + 1..] {
            for ((dst, x), y) in d.iter_mut().zip(a.image.pixels()).zip(b.image.pixels()) {
                *dst = dst.max((x - y).abs());
            }
        }
    }
    d
}

/// Tight bounding box of the pixels where members' overlap images disagree
/// by at least `threshold`.
pub fn confusion_region(overlaps: &[OverlapImage], threshold: f64) -> Result<Rect> {
    if overlaps.len() < 2 {
        return Err(Error::EmptySamples);
    }
    let d = disagreement_map(overlaps);
    let mut bbox: Option<(usize, usize, usize, usize)> = None;
    for r in 0..FRAME {
        for c in 0..FRAME {
            if d[r * FRAME + c] >= threshold {
                bbox = Some(match bbox {
                    None => (r, c, r, c),
                    Some((t, l, b, rt)) => (t.min(r), l.min(c), b.max(r), rt.max(c)),
                });
            }
        }
    }
    let (t, l, b, r) = bbox.ok_or(Error::NoConfusionRegion)?;
    Rect::new(t, l, b, r)
}

/// The three published confusion regions for the Bangla digit groups,
/// corner pairs read as (row, column).
pub fn paper_regions() -> BTreeMap<Vec<Label>, Rect> {
    let rect = |t, l, b, r| Rect::new(t, l, b, r).expect("constant rectangle");
    BTreeMap::from([
        (vec![3, 6], rect(0, 18, 24, 31)),
        (vec![0, 5], rect(0, 15, 31, 31)),
        (vec![1, 9], rect(12, 0, 31, 31)),
    ])
}

/// One line per group: `members=a,b,...; region=top,left,bottom,right`.
pub fn write_groups_file(groups: &[GroupSpec]) -> String {
    let mut out = String::new();
    for g in groups {
        let members: Vec<String> = g.members.iter().map(|m| m.to_string()).collect();
        writeln!(out, "members={}; region={}", members.join(","), g.region).unwrap();
    }
    out
}

/// Parses the groups file format. Blank lines and `#` comments are skipped.
pub fn parse_groups_file(text: &str) -> Result<Vec<GroupSpec>> {
    let mut groups: Vec<GroupSpec> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::GroupsFile { line: i + 1, msg: msg.into() };
        let mut members = None;
        let mut region = None;
        for field in line.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field.split_once('=').ok_or_else(|| err("expected key=value"))?;
            match key.trim() {
                "members" => {
                    let mut m = value
                        .split(',')
                        .map(|s| s.trim().parse::<Label>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| err("bad member label"))?;
                    m.sort_unstable();
                    m.dedup();
                    members = Some(m);
                }
                "region" => region = Some(value.parse::<Rect>().map_err(|e| err(&e.to_string()))?),
                other => return Err(err(&format!("unknown key {other:?}"))),
            }
        }
        let members = members.ok_or_else(|| err("missing members"))?;
        if members.len() < 2 {
            return Err(err("a group needs at least two members"));
        }
        if groups.iter().any(|g| g.members.iter().any(|m| members.contains(m))) {
            return Err(err("members overlap an earlier group"));
        }
        groups.push(GroupSpec { members, region: region.ok_or_else(|| err("missing region"))? });
    }
    Ok(groups)
}

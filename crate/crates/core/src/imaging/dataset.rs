use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::imaging::{idx, normalize, pgm, NormImage};
use crate::Label;

/// Labeled, normalized training or evaluation samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    items: Vec<(NormImage, Label)>,
    classes: Vec<Label>,
}

impl LabeledSet {
    pub fn new(items: Vec<(NormImage, Label)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let classes: BTreeSet<Label> = items.iter().map(|(_, l)| *l).collect();
        Ok(Self { items, classes: classes.into_iter().collect() })
    }

    pub fn items(&self) -> &[(NormImage, Label)] {
        &self.items
    }

    /// Sorted distinct labels.
    pub fn classes(&self) -> &[Label] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn images_of(&self, label: Label) -> impl Iterator<Item = &NormImage> {
        self.items.iter().filter(move |(_, l)| *l == label).map(|(img, _)| img)
    }

    pub fn count_of(&self, label: Label) -> usize {
        self.images_of(label).count()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum DatasetFormat {
    /// `<root>/<label>/*.pgm`
    #[default]
    PgmTree,
    /// IDX image/label pair; relative paths resolve against the dataset root.
    Idx { images: PathBuf, labels: PathBuf },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoaderOptions {
    pub format: DatasetFormat,
    /// Treat dark pixels as ink (scans with black strokes on white paper).
    pub invert: bool,
}

pub fn load_dataset(root: &Path, options: &LoaderOptions) -> Result<LabeledSet> {
    match &options.format {
        DatasetFormat::PgmTree => load_pgm_tree(root, options.invert),
        DatasetFormat::Idx { images, labels } => {
            let records = idx::read_pair(&root.join(images), &root.join(labels))?;
            let items = records
                .iter()
                .map(|(img, label)| Ok((normalize(img, options.invert)?, *label as Label)))
                .collect::<Result<Vec<_>>>()?;
            LabeledSet::new(items)
        }
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

fn load_pgm_tree(root: &Path, invert: bool) -> Result<LabeledSet> {
    let mut items = Vec::new();
    for class_dir in sorted_entries(root)?.into_iter().filter(|p| p.is_dir()) {
        let name = class_dir.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let label: Label = name.parse().map_err(|_| Error::BadLabel(name.clone()))?;
        let files: Vec<PathBuf> = sorted_entries(&class_dir)?
            .into_iter()
            .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
            .collect();
        if files.is_empty() {
            return Err(Error::EmptyClass(class_dir.display().to_string()));
        }
        for file in files {
            let raw = pgm::read(&file)?;
            let img = normalize(&raw, invert).map_err(|e| match e {
                Error::BlankSample => Error::InvalidImage(format!("{}: blank sample", file.display())),
                other => other,
            })?;
            items.push((img, label));
        }
    }
    LabeledSet::new(items)
}

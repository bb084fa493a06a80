//! Two-pass fuzzy-genetic pattern classification.
//!
//! A coarse nearest-prototype classifier works on fuzzy zoning features whose
//! partition is tuned by a genetic algorithm. Classes the coarse pass
//! confuses are grouped from its confusion matrix, and each group gets a
//! second partition confined to the frame region where its members differ.
//! A pattern whose coarse label falls in a group is re-decided among that
//! group's members.
//!
//! Modules, bottom-up:
//!
//! - [`imaging`]: PGM/IDX loading, normalization to the 32×32 frame, overlap
//!   images, rectangles.
//! - [`partitions`]: chromosomes, fuzzy strip memberships, feature extraction.
//! - [`classifier`]: prototypes, similarity, confusion matrices.
//! - [`evolution`]: the genetic optimizer.
//! - [`grouping`]: group discovery and confusion regions.
//! - [`pipeline`]: two-pass training, classification, evaluation, model files.
//! - [`synthetic`]: seeded glyph sets for demos and tests.
//! - [`cli`]: the `fuzzygeno` command-line front end.

pub mod classifier;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod grouping;
pub mod imaging;
pub mod partitions;
pub mod pipeline;
pub mod synthetic;

/// Class label; dataset directories are named by its decimal form.
pub type Label = u32;

pub use classifier::{
    accuracy, build_models, classify, confusion, similarity, ClassModel, ConfusionMatrix, ModelSet, Prediction,
};
pub use error::{Error, Result};
pub use evolution::{crossover, evolve, fitness, mutate, EvolutionTrace, GAConfig};
pub use grouping::{confusion_region, form_groups, paper_regions, GroupSpec, GroupingConfig};
pub use imaging::{load_dataset, normalize, overlap_image, LabeledSet, NormImage, RawImage, Rect};
pub use partitions::{
    extract_features, feature_dim, random_chromosome, strip_membership, Chromosome, CutBounds, FeatureVector,
    FuzzyParams,
};
pub use pipeline::{
    classify_two_pass, evaluate, load_model, save_model, train, train_coarse, train_groups, TwoPassModel,
};

//! Linguistic feature shifts and AI-text detector generalization.
//!
//! The pipeline runs `corpus` -> `cleaning` -> `textproc` -> `features`,
//! builds accuracy matrices in `evalharness`, and correlates per-feature
//! shifts with those matrices in `shiftcorr`. `promptgen` produces AI texts
//! and `report` writes heatmaps and run headers.

pub mod cleaning;
pub mod corpus;
pub mod error;
pub mod evalharness;
pub mod features;
pub mod promptgen;
pub mod report;
pub mod shiftcorr;
pub mod synth;
pub mod textproc;

pub use corpus::{Corpus, GenerationConfig, Label, Manifest, PromptStrategy, Side, Split, SplitSet, TextRecord};
pub use error::{Error, Result};
pub use evalharness::{AccuracyMatrix, Axis};
pub use features::{FeatureId, FeatureProfile};
pub use shiftcorr::{CorrelationResult, Strength};
pub use textproc::{AnnotatedText, Annotator};

/// Version string written into every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

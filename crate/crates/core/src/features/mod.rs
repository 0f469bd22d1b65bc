//! The linguistic feature vector (POS, treebank, dependency, NER and misc groups).
//!
//! Annotation is external: documents arrive as CoNLL-U style token tables
//! (see [`AnnotationReader`]). [`tagger`] provides a rule-based stand-in for
//! smoke runs.

mod conllu;
mod featurize;
mod misc;
mod registry;
pub mod tagger;

pub use conllu::{write_conllu, AnnotatedDoc, AnnotationError, AnnotationReader, Token};
pub use featurize::{featurize, featurize_corpus, FeatureMatrix, FeatureVector, MatrixError, MatrixSidecar};
pub use misc::{syllables, MiscMetric, NOUN_VERB_CAP};
pub use registry::{FeatureGroup, FeatureRegistry, RegistryError, DEFAULT_MANIFEST, OTHER};

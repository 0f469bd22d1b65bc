use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::hashing::sha256_hex;
use crate::Class;

/// Per-row fold assignment shared by every model in a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoldSpec {
    pub seed: u64,
    pub k: usize,
    pub assignment: Vec<usize>,
    /// Row identities in assignment order. Informational; not part of the hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_ids: Option<Vec<String>>,
}

#[derive(Serialize)]
struct Hashed<'a> {
    seed: u64,
    k: usize,
    assignment: &'a [usize],
}

/// Within each class, rows are shuffled with a seeded generator and dealt
/// round-robin into `k` folds. The deal position carries over from LOW to
/// HIGH so overall fold sizes stay balanced too.
pub fn stratified_kfold(labels: &[Class], k: usize, seed: u64) -> Result<FoldSpec, EvalError> {
    if k < 2 {
        return Err(EvalError::Folds(format!("k must be at least 2, got {k}")));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, l) in labels.iter().enumerate() {
        by_class[l.index()].push(i);
    }
    for class in Class::ALL {
        let n = by_class[class.index()].len();
        if n < k {
            return Err(EvalError::Folds(format!(
                "class {class} has {n} rows, fewer than k = {k}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut offset = 0;
    for rows in by_class.iter_mut() {
        rows.shuffle(&mut rng);
        for (j, &r) in rows.iter().enumerate() {
            assignment[r] = (offset + j) % k;
        }
        offset = (offset + rows.len()) % k;
    }
    Ok(FoldSpec {
        seed,
        k,
        assignment,
        doc_ids: None,
    })
}

impl FoldSpec {
    pub fn with_doc_ids(mut self, ids: Vec<String>) -> Self {
        self.doc_ids = Some(ids);
        self
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Hex SHA-256 of the compact JSON `{"seed":..,"k":..,"assignment":[..]}`.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(&Hashed {
            seed: self.seed,
            k: self.k,
            assignment: &self.assignment,
        })
        .expect("fold spec serializes");
        sha256_hex(&json)
    }

    /// (train, test) row indices for `fold`.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.len()).partition(|&i| self.assignment[i] != fold)
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.k < 2 {
            return Err(EvalError::Folds(format!("k must be at least 2, got {}", self.k)));
        }
        if let Some(i) = self.assignment.iter().position(|&f| f >= self.k) {
            return Err(EvalError::Folds(format!("row {i} assigned to fold {} >= k", self.assignment[i])));
        }
        if let Some(ids) = &self.doc_ids {
            if ids.len() != self.assignment.len() {
                return Err(EvalError::Folds(format!(
                    "{} doc ids for {} rows",
                    ids.len(),
                    self.assignment.len()
                )));
            }
        }
        Ok(())
    }

    /// Per-fold class counts, indexed `[fold][class]`.
    pub fn class_counts(&self, labels: &[Class]) -> Vec<[usize; 2]> {
        let mut c = vec![[0; 2]; self.k];
        for (f, l) in self.assignment.iter().zip(labels) {
            c[*f][l.index()] += 1;
        }
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fold spec serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self, EvalError> {
        let spec: FoldSpec = serde_json::from_str(s).map_err(|e| EvalError::Folds(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Fold index per doc id, when ids are recorded.
    pub fn by_doc_id(&self) -> Option<BTreeMap<&str, usize>> {
        let ids = self.doc_ids.as_ref()?;
        Some(ids.iter().map(String::as_str).zip(self.assignment.iter().copied()).collect())
    }
}

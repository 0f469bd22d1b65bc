use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use serde::Deserialize;
use thiserror::Error;

use super::misc::MiscMetric;

pub const DEFAULT_MANIFEST: &str = include_str!("../../data/registry_default.json");
pub const OTHER: &str = "OTHER";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureGroup {
    Pos,
    Treebank,
    Dependency,
    Ner,
    Misc,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 5] = [
        FeatureGroup::Pos,
        FeatureGroup::Treebank,
        FeatureGroup::Dependency,
        FeatureGroup::Ner,
        FeatureGroup::Misc,
    ];

    pub fn key(self) -> &'static str {
        match self {
            FeatureGroup::Pos => "POS",
            FeatureGroup::Treebank => "TREEBANK",
            FeatureGroup::Dependency => "DEPENDENCY",
            FeatureGroup::Ner => "NER",
            FeatureGroup::Misc => "MISC",
        }
    }

    pub fn expected_size(self) -> usize {
        match self {
            FeatureGroup::Pos => 20,
            FeatureGroup::Treebank => 57,
            FeatureGroup::Dependency => 72,
            FeatureGroup::Ner => 26,
            FeatureGroup::Misc => 21,
        }
    }

    fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.key() == key)
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("invalid registry manifest: {0}")]
    Parse(String),
    #[error("unknown feature group {0:?}")]
    UnknownGroup(String),
    #[error("missing feature group {0}")]
    MissingGroup(FeatureGroup),
    #[error("{group} expected {expected} got {actual}")]
    Count {
        group: FeatureGroup,
        expected: usize,
        actual: usize,
    },
    #[error("duplicate feature name {name:?} in {group}")]
    Duplicate { group: FeatureGroup, name: String },
    #[error("{0} lacks the reserved {OTHER} feature")]
    MissingOther(FeatureGroup),
    #[error("unknown MISC feature {0:?}")]
    UnknownMisc(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    version: String,
    groups: BTreeMap<String, Vec<String>>,
}

/// Ordered feature layout: POS, TREEBANK, DEPENDENCY, NER, then MISC.
///
/// Tag-group entries are the literal tag strings found in annotations. Column
/// names are qualified as `GROUP:name`, so they are unique across groups.
#[derive(Clone, Debug)]
pub struct FeatureRegistry {
    version: String,
    names: Vec<Vec<String>>,
    offsets: Vec<usize>,
    lookup: Vec<HashMap<String, usize>>,
    misc: Vec<MiscMetric>,
}

impl FeatureRegistry {
    /// The shipped default registry.
    pub fn default_registry() -> Self {
        Self::from_json(DEFAULT_MANIFEST).expect("shipped registry manifest is valid")
    }

    pub fn from_json(manifest: &str) -> Result<Self, RegistryError> {
        let m: Manifest =
            serde_json::from_str(manifest).map_err(|e| RegistryError::Parse(e.to_string()))?;
        if let Some(unknown) = m.groups.keys().find(|k| FeatureGroup::from_key(k).is_none()) {
            return Err(RegistryError::UnknownGroup(unknown.clone()));
        }

        let mut names = Vec::with_capacity(5);
        let mut offsets = Vec::with_capacity(5);
        let mut lookup = Vec::with_capacity(4);
        let mut total = 0;
        for group in FeatureGroup::ALL {
            let list = m
                .groups
                .get(group.key())
                .ok_or(RegistryError::MissingGroup(group))?;
            if list.len() != group.expected_size() {
                return Err(RegistryError::Count {
                    group,
                    expected: group.expected_size(),
                    actual: list.len(),
                });
            }
            let mut seen = HashSet::new();
            if let Some(dup) = list.iter().find(|n| !seen.insert(n.as_str())) {
                return Err(RegistryError::Duplicate {
                    group,
                    name: dup.clone(),
                });
            }
            if group != FeatureGroup::Misc {
                if !seen.contains(OTHER) {
                    return Err(RegistryError::MissingOther(group));
                }
                lookup.push(
                    list.iter()
                        .enumerate()
                        .map(|(i, n)| (n.clone(), total + i))
                        .collect(),
                );
            }
            offsets.push(total);
            total += list.len();
            names.push(list.clone());
        }

        let misc = names[4]
            .iter()
            .map(|n| MiscMetric::from_name(n).ok_or_else(|| RegistryError::UnknownMisc(n.clone())))
            .collect::<Result<_, _>>()?;

        Ok(Self {
            version: m.version,
            names,
            offsets,
            lookup,
            misc,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.offsets[4] + self.names[4].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn group_names(&self, group: FeatureGroup) -> &[String] {
        &self.names[group as usize]
    }

    pub fn group_range(&self, group: FeatureGroup) -> Range<usize> {
        let start = self.offsets[group as usize];
        start..start + self.names[group as usize].len()
    }

    /// Column index for a tag, falling back to the group's OTHER bucket.
    pub fn tag_index(&self, group: FeatureGroup, tag: &str) -> usize {
        assert!(group != FeatureGroup::Misc, "MISC has no tag lookup");
        let map = &self.lookup[group as usize];
        map.get(tag).copied().unwrap_or_else(|| map[OTHER])
    }

    pub(crate) fn misc_metrics(&self) -> &[MiscMetric] {
        &self.misc
    }

    /// `GROUP:name` column names in vector order.
    pub fn qualified_names(&self) -> Vec<String> {
        FeatureGroup::ALL
            .iter()
            .flat_map(|g| self.names[*g as usize].iter().map(move |n| format!("{g}:{n}")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest_with(group: &str, edit: impl FnOnce(&mut Vec<String>)) -> String {
        let mut v: serde_json::Value = serde_json::from_str(DEFAULT_MANIFEST).unwrap();
        let list = v["groups"][group].as_array_mut().unwrap();
        let mut names: Vec<String> = list.iter().map(|x| x.as_str().unwrap().to_string()).collect();
        edit(&mut names);
        v["groups"][group] = serde_json::json!(names);
        v.to_string()
    }

    #[test]
    fn default_sizes() {
        let r = FeatureRegistry::default_registry();
        assert_eq!(r.len(), 196);
        let sizes: Vec<usize> = FeatureGroup::ALL.iter().map(|g| r.group_names(*g).len()).collect();
        assert_eq!(sizes, vec![20, 57, 72, 26, 21]);
        let names = r.qualified_names();
        assert_eq!(names.len(), 196);
        assert_eq!(names.iter().collect::<HashSet<_>>().len(), 196);
    }

    #[test]
    fn count_mismatch_names_group() {
        let m = manifest_with("POS", |n| {
            n.retain(|x| x != "INTJ");
        });
        let err = FeatureRegistry::from_json(&m).unwrap_err();
        assert_eq!(err.to_string(), "POS expected 20 got 19");
    }

    #[test]
    fn duplicate_rejected() {
        let m = manifest_with("POS", |n| {
            let i = n.iter().position(|x| x == "INTJ").unwrap();
            n[i] = "NOUN".into();
        });
        assert_eq!(
            FeatureRegistry::from_json(&m).unwrap_err(),
            RegistryError::Duplicate {
                group: FeatureGroup::Pos,
                name: "NOUN".into()
            }
        );
    }

    #[test]
    fn unknown_misc_and_missing_other() {
        let m = manifest_with("MISC", |n| n[0] = "mystery".into());
        assert!(matches!(
            FeatureRegistry::from_json(&m),
            Err(RegistryError::UnknownMisc(_))
        ));
        let m = manifest_with("NER", |n| {
            let i = n.iter().position(|x| x == OTHER).unwrap();
            n[i] = "ANIMAL".into();
        });
        assert_eq!(
            FeatureRegistry::from_json(&m).unwrap_err(),
            RegistryError::MissingOther(FeatureGroup::Ner)
        );
    }

    #[test]
    fn unknown_tag_maps_to_other() {
        let r = FeatureRegistry::default_registry();
        let other = r.tag_index(FeatureGroup::Pos, OTHER);
        assert_eq!(r.tag_index(FeatureGroup::Pos, "WAT"), other);
        assert!(r.group_range(FeatureGroup::Pos).contains(&other));
        assert_ne!(r.tag_index(FeatureGroup::Pos, "NOUN"), other);
    }
}

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{class_weights, Dataset, MlError, TrainConfig, MODEL_FORMAT_VERSION};

pub(super) const MAGIC: &[u8; 4] = b"NGRF";
const NODE_BYTES: usize = 26;

/// One tree node. Leaves carry `feature == Node::LEAF`; internal nodes send
/// `x[feature] <= threshold` to `left`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub feature: u16,
    pub threshold: f64,
    pub left: u32,
    pub right: u32,
    /// Weighted fraction of HIGH among training samples reaching the node.
    pub prob: f64,
}

impl Node {
    pub const LEAF: u16 = u16::MAX;

    pub fn leaf(prob: f64) -> Self {
        Self {
            feature: Self::LEAF,
            threshold: 0.0,
            left: 0,
            right: 0,
            prob,
        }
    }

    pub fn split(feature: u16, threshold: f64, left: u32, right: u32, prob: f64) -> Self {
        Self {
            feature,
            threshold,
            left,
            right,
            prob,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.feature == Self::LEAF
    }

    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.feature.to_le_bytes());
        out.extend_from_slice(&self.threshold.to_le_bytes());
        out.extend_from_slice(&self.left.to_le_bytes());
        out.extend_from_slice(&self.right.to_le_bytes());
        out.extend_from_slice(&self.prob.to_le_bytes());
    }

    fn decode(b: &[u8]) -> Self {
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(b[o..o + 8].try_into().unwrap());
        Self {
            feature: u16::from_le_bytes([b[0], b[1]]),
            threshold: f64_at(2),
            left: u32_at(10),
            right: u32_at(14),
            prob: f64_at(18),
        }
    }
}

/// A CART tree stored as a flat node array rooted at index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self, MlError> {
        let t = Self { nodes };
        t.check(usize::from(u16::MAX))?;
        Ok(t)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn leaf_prob(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            let n = &self.nodes[i];
            if n.is_leaf() {
                return n.prob;
            }
            i = if x[n.feature as usize] <= n.threshold {
                n.left
            } else {
                n.right
            } as usize;
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, i: usize) -> usize {
            let n = &t.nodes[i];
            if n.is_leaf() {
                0
            } else {
                1 + go(t, n.left as usize).max(go(t, n.right as usize))
            }
        }
        go(self, 0)
    }

    fn check(&self, n_features: usize) -> Result<(), MlError> {
        let bad = |m: String| Err(MlError::Format(m));
        if self.nodes.is_empty() {
            return bad("empty tree".into());
        }
        let len = self.nodes.len();
        for (i, n) in self.nodes.iter().enumerate() {
            if !(0.0..=1.0).contains(&n.prob) {
                return bad(format!("node {i} probability {}", n.prob));
            }
            if n.is_leaf() {
                continue;
            }
            // Children must come after their parent, which also rules out cycles.
            let (l, r) = (n.left as usize, n.right as usize);
            if l <= i || r <= i || l >= len || r >= len {
                return bad(format!("node {i} has invalid children {l}, {r}"));
            }
            if n.feature as usize >= n_features {
                return bad(format!("node {i} splits on feature {}", n.feature));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub registry_version: String,
    pub cfg: TrainConfig,
    n_features: usize,
    trees: Vec<Tree>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u32,
    registry_version: String,
    cfg: TrainConfig,
    n_features: usize,
    tree_sizes: Vec<u32>,
}

impl ForestModel {
    pub fn new(
        registry_version: impl Into<String>,
        cfg: TrainConfig,
        n_features: usize,
        trees: Vec<Tree>,
    ) -> Result<Self, MlError> {
        let m = Self {
            registry_version: registry_version.into(),
            cfg,
            n_features,
            trees,
        };
        m.check()?;
        Ok(m)
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// Mean of per-tree leaf probabilities, summed in sorted order so the
    /// result does not depend on tree order.
    pub(super) fn proba(&self, x: &[f64]) -> f64 {
        let mut p: Vec<f64> = self.trees.iter().map(|t| t.leaf_prob(x)).collect();
        p.sort_by(f64::total_cmp);
        (p.iter().sum::<f64>() / p.len() as f64).clamp(0.0, 1.0)
    }

    pub(super) fn check(&self) -> Result<(), MlError> {
        if self.trees.len() != self.cfg.rf_trees {
            return Err(MlError::Format(format!(
                "forest has {} trees, config says {}",
                self.trees.len(),
                self.cfg.rf_trees
            )));
        }
        if self.n_features >= usize::from(Node::LEAF) {
            return Err(MlError::Format("too many features for the node format".into()));
        }
        self.trees.iter().try_for_each(|t| t.check(self.n_features))
    }

    pub(super) fn write_binary<W: Write>(&self, out: &mut W) -> Result<(), MlError> {
        let header = Header {
            format_version: MODEL_FORMAT_VERSION,
            registry_version: self.registry_version.clone(),
            cfg: self.cfg.clone(),
            n_features: self.n_features,
            tree_sizes: self.trees.iter().map(|t| t.nodes.len() as u32).collect(),
        };
        let json = serde_json::to_vec(&header).map_err(std::io::Error::from)?;
        let mut buf = Vec::with_capacity(8 + json.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&(json.len() as u32).to_le_bytes());
        buf.extend_from_slice(&json);
        for t in &self.trees {
            for n in &t.nodes {
                n.encode(&mut buf);
            }
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub(super) fn read_binary(bytes: &[u8]) -> Result<Self, MlError> {
        let bad = |m: &str| MlError::Format(m.to_string());
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(bad("missing forest magic"));
        }
        let hlen = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let body = bytes.get(8..8 + hlen).ok_or_else(|| bad("truncated header"))?;
        let header: Header =
            serde_json::from_slice(body).map_err(|e| MlError::Format(e.to_string()))?;
        if header.format_version != MODEL_FORMAT_VERSION {
            return Err(bad("unsupported forest format version"));
        }
        let mut rest = &bytes[8 + hlen..];
        let total: usize = header.tree_sizes.iter().map(|&s| s as usize).sum();
        if rest.len() != total * NODE_BYTES {
            return Err(bad("node section size does not match header"));
        }
        let mut trees = Vec::with_capacity(header.tree_sizes.len());
        for &size in &header.tree_sizes {
            let (chunk, tail) = rest.split_at(size as usize * NODE_BYTES);
            rest = tail;
            let nodes = chunk.chunks_exact(NODE_BYTES).map(Node::decode).collect();
            trees.push(Tree { nodes });
        }
        Self::new(header.registry_version, header.cfg, header.n_features, trees)
    }
}

pub(super) fn train(data: &Dataset, cfg: &TrainConfig) -> Result<ForestModel, MlError> {
    let counts = data.require_both_classes()?;
    if data.n_features() >= usize::from(Node::LEAF) {
        return Err(MlError::Data("too many features for the forest".into()));
    }
    let cw = class_weights(counts, cfg.class_weight);
    let mtry = cfg.rf_max_features.resolve(data.n_features());
    let trees = (0..cfg.rf_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ t as u64);
            grow(data, cw, mtry, cfg.rf_bootstrap, &mut rng)
        })
        .collect();
    ForestModel::new(data.registry_version(), cfg.clone(), data.n_features(), trees)
}

struct Split {
    score: f64,
    feature: usize,
    threshold: f64,
}

impl Split {
    /// Higher impurity decrease, then lower feature index, then lower threshold.
    fn beats(&self, other: &Option<Split>) -> bool {
        match other {
            None => true,
            Some(o) => {
                self.score > o.score
                    || (self.score == o.score
                        && (self.feature < o.feature
                            || (self.feature == o.feature && self.threshold < o.threshold)))
            }
        }
    }
}

fn grow(data: &Dataset, cw: [f64; 2], mtry: usize, bootstrap: bool, rng: &mut ChaCha8Rng) -> Tree {
    let n = data.len();
    let d = data.n_features();
    let mut draws = vec![0u32; n];
    if bootstrap {
        for _ in 0..n {
            draws[rng.gen_range(0..n)] += 1;
        }
    } else {
        draws.fill(1);
    }
    let cls: Vec<usize> = data.labels().iter().map(|c| c.index()).collect();
    let w: Vec<f64> = (0..n).map(|i| draws[i] as f64 * cw[cls[i]]).collect();
    let root: Vec<usize> = (0..n).filter(|&i| draws[i] > 0).collect();

    let mut nodes = vec![Node::leaf(0.0)];
    let mut stack = vec![(0usize, root)];
    let mut features: Vec<usize> = (0..d).collect();
    let mut column: Vec<(f64, usize)> = Vec::new();
    while let Some((at, samples)) = stack.pop() {
        let mut tot = [0.0; 2];
        for &i in &samples {
            tot[cls[i]] += w[i];
        }
        let wsum = tot[0] + tot[1];
        let prob = if wsum > 0.0 { tot[1] / wsum } else { 0.0 };
        nodes[at] = Node::leaf(prob);
        if samples.len() < 2 || tot[0] == 0.0 || tot[1] == 0.0 {
            continue;
        }

        let mut best: Option<Split> = None;
        let mut visited = 0;
        for k in 0..d {
            if visited == mtry {
                break;
            }
            let pick = rng.gen_range(k..d);
            features.swap(k, pick);
            let f = features[k];
            column.clear();
            column.extend(samples.iter().map(|&i| (data.value(i, f), i)));
            column.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if column[0].0 == column[column.len() - 1].0 {
                continue;
            }
            visited += 1;
            let mut left = [0.0; 2];
            for p in 0..column.len() - 1 {
                let (v, i) = column[p];
                left[cls[i]] += w[i];
                let next = column[p + 1].0;
                if v == next {
                    continue;
                }
                let right = [tot[0] - left[0], tot[1] - left[1]];
                let (wl, wr) = (left[0] + left[1], right[0] + right[1]);
                // Proxy for the weighted Gini decrease (parent term is constant).
                let score = (left[0] * left[0] + left[1] * left[1]) / wl
                    + (right[0] * right[0] + right[1] * right[1]) / wr;
                let mut threshold = v + (next - v) / 2.0;
                if threshold >= next || !threshold.is_finite() {
                    threshold = v;
                }
                let cand = Split {
                    score,
                    feature: f,
                    threshold,
                };
                if cand.beats(&best) {
                    best = Some(cand);
                }
            }
        }
        let Some(split) = best else { continue };
        let (l, r): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| data.value(i, split.feature) <= split.threshold);
        let li = nodes.len();
        nodes.push(Node::leaf(0.0));
        nodes.push(Node::leaf(0.0));
        nodes[at] = Node::split(split.feature as u16, split.threshold, li as u32, li as u32 + 1, prob);
        stack.push((li + 1, r));
        stack.push((li, l));
    }
    Tree { nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ml::{ModelKind, Predictor, TrainedModel};
    use crate::Class;
    use rand_distr::StandardNormal;

    fn blobs(n: usize, d: usize, sep: f64, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let c = Class::from_index(i % 2);
            let mu = if c == Class::High { sep } else { 0.0 };
            rows.push((0..d).map(|_| mu + rng.sample::<f64, _>(StandardNormal)).collect());
            labels.push(c);
        }
        let ids = (0..n).map(|i| i.to_string()).collect();
        Dataset::new(rows, labels, ids, "t").unwrap()
    }

    fn rf(trees: usize) -> TrainConfig {
        TrainConfig {
            rf_trees: trees,
            ..TrainConfig::for_kind(ModelKind::Rf)
        }
    }

    #[test]
    fn single_unbootstrapped_tree_memorizes() {
        let d = blobs(80, 5, 0.3, 1);
        let cfg = TrainConfig {
            rf_bootstrap: false,
            ..rf(1)
        };
        let m = TrainedModel::Rf(train(&d, &cfg).unwrap());
        for i in 0..d.len() {
            assert_eq!(m.predict(d.row(i)).unwrap(), d.labels()[i]);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let d = blobs(120, 6, 1.0, 2);
        let cfg = rf(16);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| train(&d, &cfg).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
        assert_eq!(a, train(&d, &cfg).unwrap());
        let other = train(&d, &TrainConfig { seed: 43, ..cfg.clone() }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn separated_blobs_generalize() {
        let train_set = blobs(500, 20, 2.0, 3);
        let test_set = blobs(500, 20, 2.0, 4);
        let m = TrainedModel::Rf(train(&train_set, &rf(50)).unwrap());
        let correct = (0..test_set.len())
            .filter(|&i| m.predict(test_set.row(i)).unwrap() == test_set.labels()[i])
            .count();
        assert!(correct as f64 / 500.0 >= 0.95, "{correct}");
    }

    #[test]
    fn hand_traced_three_tree_forest() {
        // Tree A: x0 <= 0.5 ? 0.0 : 1.0
        // Tree B: x1 <= 2 ? (x0 <= 0.2 ? 0.25 : 0.75) : 0.5
        // Tree C: constant 0.9
        let a = Tree::from_nodes(vec![Node::split(0, 0.5, 1, 2, 0.5), Node::leaf(0.0), Node::leaf(1.0)]).unwrap();
        let b = Tree::from_nodes(vec![
            Node::split(1, 2.0, 1, 2, 0.5),
            Node::split(0, 0.2, 3, 4, 0.5),
            Node::leaf(0.5),
            Node::leaf(0.25),
            Node::leaf(0.75),
        ])
        .unwrap();
        let c = Tree::from_nodes(vec![Node::leaf(0.9)]).unwrap();
        let m = ForestModel::new("t", rf(3), 2, vec![a, b, c]).unwrap();
        let cases = [
            ([0.0, 0.0], (0.0 + 0.25 + 0.9) / 3.0),
            ([0.3, 1.0], (0.0 + 0.75 + 0.9) / 3.0),
            ([0.9, 1.0], (1.0 + 0.75 + 0.9) / 3.0),
            ([0.9, 5.0], (1.0 + 0.5 + 0.9) / 3.0),
            ([0.5, 2.0], (0.0 + 0.75 + 0.9) / 3.0),
        ];
        for (x, want) in cases {
            assert!((m.proba(&x) - want).abs() < 1e-15, "{x:?}");
        }
        let mut rev = m.clone();
        rev.trees.reverse();
        for (x, _) in cases {
            assert_eq!(m.proba(&x), rev.proba(&x));
        }
    }

    #[test]
    fn tree_validation() {
        assert!(Tree::from_nodes(vec![]).is_err());
        assert!(Tree::from_nodes(vec![Node::split(0, 0.0, 0, 0, 0.5)]).is_err());
        assert!(Tree::from_nodes(vec![Node::leaf(1.5)]).is_err());
        let t = Tree::from_nodes(vec![Node::leaf(0.5)]).unwrap();
        assert!(ForestModel::new("t", rf(2), 1, vec![t]).is_err());
    }

    #[test]
    fn binary_round_trip_exact() {
        let d = blobs(60, 4, 1.0, 9);
        let m = TrainedModel::Rf(train(&d, &rf(5)).unwrap());
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], MAGIC);
        let back = TrainedModel::read_from(&buf[..]).unwrap();
        assert_eq!(back, m);
        buf.pop();
        assert!(TrainedModel::read_from(&buf[..]).is_err());
    }
}

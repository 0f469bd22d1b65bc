use serde::{Deserialize, Serialize};

use super::{class_weights, Dataset, MlError, TrainConfig};
use crate::Class;

/// Logistic regression on internally standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub registry_version: String,
    pub cfg: TrainConfig,
    pub mean: Vec<f64>,
    /// Population standard deviation, 1 for constant features.
    pub scale: Vec<f64>,
    /// Weights in standardized space.
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A fitted model plus the objective value after every accepted step.
#[derive(Debug, Clone)]
pub struct LogRegFit {
    pub model: LogRegModel,
    pub loss_history: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Weighted mean log-loss plus `|w|^2 / (2 C sum(s))`, as in the usual
/// `C`-parameterised L2 objective divided through by `C sum(s)`.
pub struct Objective {
    d: usize,
    z: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    s_total: f64,
    l2: f64,
}

impl Objective {
    fn new(z: Vec<f64>, d: usize, labels: &[Class], s: Vec<f64>, c: Option<f64>) -> Self {
        let s_total: f64 = s.iter().sum();
        let l2 = c.map_or(0.0, |c| 1.0 / (c * s_total));
        Self {
            d,
            z,
            y: labels.iter().map(|l| l.index() as f64).collect(),
            s,
            s_total,
            l2,
        }
    }

    /// `theta` holds the weights followed by the intercept.
    pub fn value_grad(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let d = self.d;
        let (w, b) = (&theta[..d], theta[d]);
        let mut grad = vec![0.0; d + 1];
        let mut loss = 0.0;
        for (i, row) in self.z.chunks_exact(d).enumerate() {
            let m = b + row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
            loss += self.s[i] * (softplus(m) - self.y[i] * m);
            let r = self.s[i] * (sigmoid(m) - self.y[i]);
            for (g, a) in grad[..d].iter_mut().zip(row) {
                *g += r * a;
            }
            grad[d] += r;
        }
        let wsq: f64 = w.iter().map(|v| v * v).sum();
        for (g, wj) in grad[..d].iter_mut().zip(w) {
            *g = *g / self.s_total + self.l2 * wj;
        }
        grad[d] /= self.s_total;
        (loss / self.s_total + 0.5 * self.l2 * wsq, grad)
    }

    /// Parameter count: features plus the intercept.
    pub fn dim(&self) -> usize {
        self.d + 1
    }

    fn value(&self, theta: &[f64]) -> f64 {
        self.value_grad(theta).0
    }
}

fn standardize(data: &Dataset) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (n, d) = (data.len(), data.n_features());
    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (m, v) in mean.iter_mut().zip(data.row(i)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut var = vec![0.0; d];
    for i in 0..n {
        for ((s, v), m) in var.iter_mut().zip(data.row(i)).zip(&mean) {
            *s += (v - m).powi(2);
        }
    }
    let scale: Vec<f64> = var
        .iter()
        .map(|s| {
            let sd = (s / n as f64).sqrt();
            if sd > 0.0 {
                sd
            } else {
                1.0
            }
        })
        .collect();
    let mut z = Vec::with_capacity(n * d);
    for i in 0..n {
        z.extend(
            data.row(i)
                .iter()
                .zip(&mean)
                .zip(&scale)
                .map(|((v, m), s)| (v - m) / s),
        );
    }
    (z, mean, scale)
}

/// The training objective over the standardized data, with parameters laid
/// out as the weights followed by the intercept.
pub fn objective_for(data: &Dataset, cfg: &TrainConfig) -> Objective {
    let counts = data.class_counts();
    let cw = class_weights(counts, cfg.class_weight);
    let s = data.labels().iter().map(|l| cw[l.index()]).collect();
    let (z, _, _) = standardize(data);
    Objective::new(z, data.n_features(), data.labels(), s, cfg.logreg_c)
}

pub(super) fn train(data: &Dataset, cfg: &TrainConfig) -> Result<LogRegFit, MlError> {
    let counts = data.require_both_classes()?;
    let d = data.n_features();
    let cw = class_weights(counts, cfg.class_weight);
    let s = data.labels().iter().map(|l| cw[l.index()]).collect();
    let (z, mean, scale) = standardize(data);
    let obj = Objective::new(z, d, data.labels(), s, cfg.logreg_c);

    let mut theta = vec![0.0; d + 1];
    let (mut f, mut g) = obj.value_grad(&theta);
    let mut history = vec![f];
    let mut step = cfg.logreg_lr;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.logreg_max_iter {
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        if gnorm2.sqrt() < cfg.logreg_tol {
            converged = true;
            break;
        }
        iterations += 1;
        // Armijo backtracking from a doubled previous step.
        let mut t = (step * 2.0).min(cfg.logreg_lr * 1e6);
        let mut accepted = None;
        for _ in 0..80 {
            let cand: Vec<f64> = theta.iter().zip(&g).map(|(p, gi)| p - t * gi).collect();
            let fc = obj.value(&cand);
            if !fc.is_finite() {
                t *= 0.5;
                continue;
            }
            if fc <= f - 1e-4 * t * gnorm2 {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, fc)) = accepted else {
            if !f.is_finite() {
                return Err(MlError::NonFinite(iterations));
            }
            // No decrease representable in floating point.
            converged = true;
            break;
        };
        step = t;
        theta = cand;
        let (fv, gv) = obj.value_grad(&theta);
        if !fv.is_finite() || gv.iter().any(|v| !v.is_finite()) {
            return Err(MlError::NonFinite(iterations));
        }
        debug_assert!((fv - fc).abs() <= 1e-12 * fc.abs().max(1.0));
        f = fv;
        g = gv;
        history.push(f);
    }
    if !converged {
        let gnorm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        converged = gnorm < cfg.logreg_tol;
    }
    let intercept = theta[d];
    theta.truncate(d);
    Ok(LogRegFit {
        model: LogRegModel {
            registry_version: data.registry_version().to_string(),
            cfg: cfg.clone(),
            mean,
            scale,
            weights: theta,
            intercept,
            iterations,
            converged,
        },
        loss_history: history,
    })
}

/// Trains and returns the per-iteration objective trace as well.
pub fn fit_traced(data: &Dataset, cfg: &TrainConfig) -> Result<LogRegFit, MlError> {
    cfg.validate()?;
    train(data, cfg)
}

impl LogRegModel {
    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        self.intercept
            + x.iter()
                .zip(&self.mean)
                .zip(&self.scale)
                .zip(&self.weights)
                .map(|(((v, m), s), w)| w * (v - m) / s)
                .sum::<f64>()
    }

    /// Weights mapped back to raw feature units.
    pub fn raw_weights(&self) -> Vec<f64> {
        self.weights.iter().zip(&self.scale).map(|(w, s)| w / s).collect()
    }

    pub(super) fn proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.decision(x))
    }

    pub(super) fn check(&self) -> Result<(), MlError> {
        let d = self.weights.len();
        if self.mean.len() != d || self.scale.len() != d || self.scale.iter().any(|s| !(*s > 0.0)) {
            return Err(MlError::Format("inconsistent LOGREG parameters".into()));
        }
        Ok(())
    }
}

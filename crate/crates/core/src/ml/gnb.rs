use serde::{Deserialize, Serialize};

use super::{Dataset, MlError, TrainConfig};

/// Per-class Gaussian likelihoods with empirical priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnbModel {
    pub registry_version: String,
    pub cfg: TrainConfig,
    /// Indexed by class (`LOW`, `HIGH`).
    pub priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    /// Smoothed variances.
    pub variances: [Vec<f64>; 2],
    pub epsilon: f64,
}

pub(super) fn train(data: &Dataset, cfg: &TrainConfig) -> Result<GnbModel, MlError> {
    let counts = data.require_both_classes()?;
    let d = data.n_features();
    let n = data.len() as f64;

    let mut sums = [vec![0.0; d], vec![0.0; d]];
    let mut total = vec![0.0; d];
    for i in 0..data.len() {
        let c = data.labels()[i].index();
        for (j, &v) in data.row(i).iter().enumerate() {
            sums[c][j] += v;
            total[j] += v;
        }
    }
    let means = [0, 1].map(|c| sums[c].iter().map(|s| s / counts[c] as f64).collect::<Vec<_>>());
    let overall: Vec<f64> = total.iter().map(|s| s / n).collect();

    let mut sq = [vec![0.0; d], vec![0.0; d]];
    let mut overall_sq = vec![0.0; d];
    for i in 0..data.len() {
        let c = data.labels()[i].index();
        for (j, &v) in data.row(i).iter().enumerate() {
            sq[c][j] += (v - means[c][j]).powi(2);
            overall_sq[j] += (v - overall[j]).powi(2);
        }
    }
    let max_var = overall_sq.iter().map(|s| s / n).fold(0.0, f64::max);
    // All-constant data would leave zero variances; fall back to an absolute floor.
    let epsilon = if max_var > 0.0 {
        cfg.gnb_var_smoothing * max_var
    } else {
        cfg.gnb_var_smoothing
    };
    let variances = [0, 1].map(|c| {
        sq[c]
            .iter()
            .map(|s| s / counts[c] as f64 + epsilon)
            .collect::<Vec<_>>()
    });

    Ok(GnbModel {
        registry_version: data.registry_version().to_string(),
        cfg: cfg.clone(),
        priors: counts.map(|c| c as f64 / n),
        means,
        variances,
        epsilon,
    })
}

impl GnbModel {
    pub fn n_features(&self) -> usize {
        self.means[0].len()
    }

    /// Joint log-likelihood `log P(c) + log p(x | c)` per class.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> [f64; 2] {
        [0, 1].map(|c| {
            let mut ll = self.priors[c].ln();
            for (j, &v) in x.iter().enumerate() {
                let var = self.variances[c][j];
                ll -= 0.5 * (2.0 * std::f64::consts::PI * var).ln();
                ll -= (v - self.means[c][j]).powi(2) / (2.0 * var);
            }
            ll
        })
    }

    /// Posterior over (`LOW`, `HIGH`).
    pub fn posterior(&self, x: &[f64]) -> [f64; 2] {
        let jll = self.joint_log_likelihood(x);
        let m = jll[0].max(jll[1]);
        let e = jll.map(|v| (v - m).exp());
        let z = e[0] + e[1];
        [e[0] / z, e[1] / z]
    }

    pub(super) fn proba(&self, x: &[f64]) -> f64 {
        self.posterior(x)[1]
    }

    pub(super) fn check(&self) -> Result<(), MlError> {
        let d = self.n_features();
        let ok = self.means[1].len() == d
            && self.variances.iter().all(|v| v.len() == d && v.iter().all(|&s| s > 0.0));
        if ok {
            Ok(())
        } else {
            Err(MlError::Format("inconsistent GNB parameters".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ml::{ModelKind, Predictor, TrainedModel};
    use crate::Class;

    fn fit(xs: &[(f64, Class)]) -> GnbModel {
        let d = Dataset::new(
            xs.iter().map(|p| vec![p.0]).collect(),
            xs.iter().map(|p| p.1).collect(),
            (0..xs.len()).map(|i| i.to_string()).collect(),
            "t",
        )
        .unwrap();
        train(&d, &TrainConfig::for_kind(ModelKind::Gnb)).unwrap()
    }

    fn normal_pdf(x: f64, mu: f64, var: f64) -> f64 {
        (-(x - mu) * (x - mu) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
    }

    #[test]
    fn hand_arithmetic_means_and_midpoint() {
        use Class::*;
        let m = fit(&[(0.0, Low), (1.0, Low), (10.0, High), (11.0, High)]);
        assert_eq!(m.means[0], vec![0.5]);
        assert_eq!(m.means[1], vec![10.5]);
        assert!((m.proba(&[5.5]) - 0.5).abs() < 1e-9);
        let post = m.posterior(&[3.0]);
        assert!((post[0] + post[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_closed_form_bayes() {
        use Class::*;
        let pts = [(-1.0, Low), (0.5, Low), (2.0, Low), (1.0, High), (3.5, High), (4.0, High), (6.0, High)];
        let m = fit(&pts);
        // Oracle recomputes moments and evaluates the density formula directly.
        let stats = |c: Class| {
            let v: Vec<f64> = pts.iter().filter(|p| p.1 == c).map(|p| p.0).collect();
            let mu = v.iter().sum::<f64>() / v.len() as f64;
            let var = v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / v.len() as f64;
            (mu, var + m.epsilon, v.len() as f64 / pts.len() as f64)
        };
        let (ml, vl, pl) = stats(Low);
        let (mh, vh, ph) = stats(High);
        for x in [-3.0, 0.0, 1.7, 2.5, 5.0, 9.0] {
            let a = pl * normal_pdf(x, ml, vl);
            let b = ph * normal_pdf(x, mh, vh);
            assert!((m.proba(&[x]) - b / (a + b)).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn symmetric_classes_give_half() {
        use Class::*;
        let m = fit(&[(0.0, Low), (2.0, Low), (0.0, High), (2.0, High)]);
        for x in [-5.0, 0.0, 1.0, 7.0] {
            assert!((TrainedModel::Gnb(m.clone()).predict_proba(&[x]).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_feature_still_positive_variance() {
        use Class::*;
        let m = fit(&[(3.0, Low), (3.0, High)]);
        assert!(m.variances.iter().all(|v| v[0] > 0.0));
        assert!(m.proba(&[3.0]).is_finite());
    }
}

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::Class;

/// Area under the ROC curve for HIGH as the positive class, via the
/// Mann-Whitney rank-sum with midranks for ties.
pub fn roc_auc(scores: &[f64], labels: &[Class]) -> Result<f64, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::Length {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l == Class::High).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Ranks are 1-based; the tie group i..=j shares their mean.
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        let pos = order[i..=j].iter().filter(|&&r| labels[r] == Class::High).count();
        rank_sum += midrank * pos as f64;
        i = j + 1;
    }
    let (p, q) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confusion {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Accuracy plus macro-averaged precision, recall and F1 over both classes.
/// A class never predicted (or never present) contributes 0 to the
/// corresponding average.
pub fn confusion_metrics(pred: &[Class], labels: &[Class]) -> Result<Confusion, EvalError> {
    if pred.len() != labels.len() {
        return Err(EvalError::Length {
            left: pred.len(),
            right: labels.len(),
        });
    }
    if pred.is_empty() {
        return Err(EvalError::Empty);
    }
    // m[actual][predicted]
    let mut m = [[0usize; 2]; 2];
    for (p, l) in pred.iter().zip(labels) {
        m[l.index()][p.index()] += 1;
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mut precision = 0.0;
    let mut recall = 0.0;
    let mut f1 = 0.0;
    for c in 0..2 {
        let tp = m[c][c];
        let p = ratio(tp, m[0][c] + m[1][c]);
        let r = ratio(tp, m[c][0] + m[c][1]);
        precision += p / 2.0;
        recall += r / 2.0;
        f1 += if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 } / 2.0;
    }
    Ok(Confusion {
        accuracy: ratio(m[0][0] + m[1][1], pred.len()),
        precision,
        recall,
        f1,
    })
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Class::*;

    #[test]
    fn auc_edges() {
        assert_eq!(roc_auc(&[0.1, 0.2, 0.8, 0.9], &[Low, Low, High, High]).unwrap(), 1.0);
        assert_eq!(roc_auc(&[0.5; 4], &[Low, High, Low, High]).unwrap(), 0.5);
        assert_eq!(roc_auc(&[0.9, 0.1], &[Low, High]).unwrap(), 0.0);
        assert!(matches!(roc_auc(&[0.1, 0.2], &[Low, Low]), Err(EvalError::SingleClass)));
    }

    #[test]
    fn confusion_hand_calc() {
        // TP=3 FP=1 FN=2 TN=4 with HIGH as positive.
        let mut pred = Vec::new();
        let mut label = Vec::new();
        for (p, l, n) in [(High, High, 3), (High, Low, 1), (Low, High, 2), (Low, Low, 4)] {
            for _ in 0..n {
                pred.push(p);
                label.push(l);
            }
        }
        let m = confusion_metrics(&pred, &label).unwrap();
        let (p_hi, r_hi) = (3.0 / 4.0, 3.0 / 5.0);
        let (p_lo, r_lo) = (4.0 / 6.0, 4.0 / 5.0);
        let f = |p: f64, r: f64| 2.0 * p * r / (p + r);
        assert_eq!(m.accuracy, 0.7);
        assert!((m.precision - (p_hi + p_lo) / 2.0).abs() < 1e-15);
        assert!((m.recall - (r_hi + r_lo) / 2.0).abs() < 1e-15);
        assert!((m.f1 - (f(p_hi, r_hi) + f(p_lo, r_lo)) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn confusion_edges() {
        let l = [Low, High, High];
        let all = confusion_metrics(&l, &l).unwrap();
        assert_eq!((all.accuracy, all.precision, all.recall, all.f1), (1.0, 1.0, 1.0, 1.0));
        let inv: Vec<Class> = l.iter().map(|c| Class::from_index(1 - c.index())).collect();
        let none = confusion_metrics(&inv, &l).unwrap();
        assert_eq!((none.accuracy, none.recall), (0.0, 0.0));
        assert!(confusion_metrics(&[Low], &[]).is_err());
        assert!(confusion_metrics(&[], &[]).is_err());
        let constant = confusion_metrics(&[High; 3], &l).unwrap();
        assert_eq!(constant.precision, (0.0 + 2.0 / 3.0) / 2.0);
    }

    #[test]
    fn population_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[0.7; 5]).1, 0.0);
    }
}

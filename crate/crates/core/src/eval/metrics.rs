use std::f64::consts::PI;

use super::EvalError;

fn check_lengths(a: usize, b: usize) -> Result<(), EvalError> {
    if a != b {
        return Err(EvalError::Metric(format!("length mismatch: {a} vs {b}")));
    }
    if a == 0 {
        return Err(EvalError::Metric("empty input".into()));
    }
    Ok(())
}

fn sums(y_true: &[f64], y_pred: &[f64]) -> (f64, f64) {
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let ss_res = y_true.iter().zip(y_pred).map(|(t, p)| (t - p) * (t - p)).sum();
    let ss_tot = y_true.iter().map(|t| (t - mean) * (t - mean)).sum();
    (ss_res, ss_tot)
}

/// Coefficient of determination `1 - SS_res / SS_tot`.
pub fn r2(y_true: &[f64], y_pred: &[f64]) -> Result<f64, EvalError> {
    check_lengths(y_true.len(), y_pred.len())?;
    let (ss_res, ss_tot) = sums(y_true, y_pred);
    if ss_tot == 0.0 {
        return Err(EvalError::Metric("y_true has zero variance".into()));
    }
    Ok(1.0 - ss_res / ss_tot)
}

/// R² over several series at once: residual and total sums of squares are
/// added across series (each around its own mean) before taking the ratio.
pub fn pooled_r2(series: &[(&[f64], &[f64])]) -> Result<f64, EvalError> {
    let (mut res, mut tot) = (0.0, 0.0);
    for (t, p) in series {
        check_lengths(t.len(), p.len())?;
        let (r, s) = sums(t, p);
        res += r;
        tot += s;
    }
    if tot == 0.0 {
        return Err(EvalError::Metric("pooled targets have zero variance".into()));
    }
    Ok(1.0 - res / tot)
}

/// Area under the ROC curve from the rank-sum (Mann–Whitney) statistic,
/// with tied scores sharing their average rank.
pub fn roc_auc(labels: &[bool], scores: &[f64]) -> Result<f64, EvalError> {
    check_lengths(labels.len(), scores.len())?;
    if scores.iter().any(|s| s.is_nan()) {
        return Err(EvalError::Metric("NaN score".into()));
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::Metric("roc_auc needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Sum of (doubled) ranks of the positives; doubling keeps tie averages integral.
    let mut rank_sum2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Ranks i+1 ..= j+1 share the average (i + j + 2) / 2.
        let avg2 = (i + j + 2) as u128;
        let pos = order[i..=j].iter().filter(|&&k| labels[k]).count() as u128;
        rank_sum2 += avg2 * pos;
        i = j + 1;
    }
    let (np, nn) = (n_pos as u128, n_neg as u128);
    // U = R - np (np + 1) / 2; doubled: 2U = 2R - np (np + 1).
    let u2 = rank_sum2 - np * (np + 1);
    Ok(u2 as f64 / (2 * np * nn) as f64)
}

/// Recovers an axial angle in [0, π) from `(cos 2θ, sin 2θ)`.
pub fn angle_from_cos_sin(c: f64, s: f64) -> Result<f64, EvalError> {
    if !(c.hypot(s) > 1e-9) {
        return Err(EvalError::Metric(format!("angle undefined for ({c}, {s})")));
    }
    let t = (s.atan2(c) / 2.0).rem_euclid(PI);
    Ok(if t >= PI { 0.0 } else { t })
}

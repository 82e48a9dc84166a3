//! Global sensitivity indices of a fitted coefficient vector, active-set
//! thresholding, and classification metrics (confusion counts, CA, ROC, AUC).

use crate::error::{Error, Result};
use crate::indexsets::{AnovaSubset, GroupedIndexSet, SubsetFamily};

/// One ranked entry of a sensitivity report.
#[derive(Debug, Clone, PartialEq)]
pub struct GsiEntry {
    pub subset: AnovaSubset,
    pub rho: f64,
}

/// Per-subset global sensitivity indices of a fitted model.
///
/// Entries cover every nonempty subset of the model's family, sorted by
/// descending index with ties broken by canonical subset order. When all
/// non-constant coefficients vanish the report is degenerate: every index is
/// zero and `degenerate` is set instead of failing.
#[derive(Debug, Clone)]
pub struct GsiReport {
    d: usize,
    pub entries: Vec<GsiEntry>,
    pub total_variance: f64,
    pub degenerate: bool,
}

impl GsiReport {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rho_of(&self, subset: &AnovaSubset) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| &e.subset == subset)
            .map(|e| e.rho)
    }
}

/// Computes sensitivity indices from block sums of squared coefficients.
pub fn gsi(set: &GroupedIndexSet, coeffs: &[f64]) -> Result<GsiReport> {
    if coeffs.len() != set.cardinality() {
        return Err(Error::invalid(format!(
            "coefficient vector has length {}, index set has cardinality {}",
            coeffs.len(),
            set.cardinality()
        )));
    }
    let nonempty: Vec<usize> = (0..set.terms().len())
        .filter(|&i| !set.terms()[i].subset().is_empty())
        .collect();
    if nonempty.is_empty() {
        return Err(Error::invalid(
            "model has no non-constant coefficient block",
        ));
    }
    let mut sums = Vec::with_capacity(nonempty.len());
    let mut total = 0.0;
    for &i in &nonempty {
        let off = set.offsets()[i];
        let len = set.terms()[i].cardinality();
        let s: f64 = coeffs[off..off + len].iter().map(|c| c * c).sum();
        sums.push(s);
        total += s;
    }
    let degenerate = total == 0.0;
    let mut entries: Vec<(usize, GsiEntry)> = nonempty
        .iter()
        .zip(sums)
        .map(|(&i, s)| {
            let rho = if degenerate { 0.0 } else { s / total };
            (
                i,
                GsiEntry {
                    subset: set.terms()[i].subset().clone(),
                    rho,
                },
            )
        })
        .collect();
    entries.sort_by(|a, b| {
        b.1.rho
            .partial_cmp(&a.1.rho)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    Ok(GsiReport {
        d: set.d(),
        entries: entries.into_iter().map(|(_, e)| e).collect(),
        total_variance: total,
        degenerate,
    })
}

/// The active set `{empty} U {u : rho(u) > eps}` in canonical order.
pub fn active_set(report: &GsiReport, eps: f64) -> Result<SubsetFamily> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::invalid(format!("eps must be > 0, got {eps}")));
    }
    let mut subsets = vec![AnovaSubset::empty()];
    subsets.extend(
        report
            .entries
            .iter()
            .filter(|e| e.rho > eps)
            .map(|e| e.subset.clone()),
    );
    SubsetFamily::new(report.d, subsets)
}

/// Confusion counts of a binary prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Counts agreement of `predictions` with `labels` (both in {-1, +1}).
pub fn confusion(labels: &[f64], predictions: &[f64]) -> Result<ConfusionCounts> {
    if labels.is_empty() || labels.len() != predictions.len() {
        return Err(Error::invalid(
            "labels and predictions must be equal-length and nonempty",
        ));
    }
    let mut c = ConfusionCounts {
        tp: 0,
        tn: 0,
        fp: 0,
        fn_: 0,
    };
    for (&y, &p) in labels.iter().zip(predictions) {
        if y != 1.0 && y != -1.0 {
            return Err(Error::invalid(format!("label {y} is not +1 or -1")));
        }
        if p != 1.0 && p != -1.0 {
            return Err(Error::invalid(format!("prediction {p} is not +1 or -1")));
        }
        match (y > 0.0, p > 0.0) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fp += 1,
        }
    }
    Ok(c)
}

/// `(TP + TN) / total`, in `[0, 1]`.
pub fn classification_accuracy(c: &ConfusionCounts) -> f64 {
    (c.tp + c.tn) as f64 / c.total() as f64
}

/// ROC curve (FPR, TPR) swept over distinct score thresholds, plus the
/// trapezoidal AUC. Ties receive half credit, so the AUC equals the
/// Mann-Whitney statistic `P(s+ > s-) + 0.5 P(s+ = s-)`.
pub fn roc_auc(scores: &[f64], labels: &[f64]) -> Result<(Vec<(f64, f64)>, f64)> {
    if scores.len() != labels.len() {
        return Err(Error::invalid("scores and labels must be equal-length"));
    }
    let pos = labels.iter().filter(|&&y| y == 1.0).count();
    let neg = labels.iter().filter(|&&y| y == -1.0).count();
    if pos + neg != labels.len() {
        return Err(Error::invalid("labels must be +1 or -1"));
    }
    if pos == 0 || neg == 0 {
        return Err(Error::invalid(
            "ROC needs at least one positive and one negative label",
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut curve = vec![(0.0, 0.0)];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        // advance over all points sharing this score
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] == 1.0 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        curve.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    let mut auc = 0.0;
    for w in curve.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        auc += (x1 - x0) * (y0 + y1) * 0.5;
    }
    Ok((curve, auc))
}

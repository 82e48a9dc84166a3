//! Squared-hinge objectives and their minimizers: gradient descent with
//! Armijo backtracking for the l2-regularized problem, FISTA with
//! backtracking for the l1-regularized one.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::transform::FeatureTransform;

/// Regularizer choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegKind {
    L2,
    L1,
}

impl RegKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegKind::L2 => "l2",
            RegKind::L1 => "l1",
        }
    }
}

impl fmt::Display for RegKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(RegKind::L1),
            "l2" => Ok(RegKind::L2),
            other => Err(Error::invalid(format!("unknown regularizer {other:?}"))),
        }
    }
}

/// Regularization term `lambda * R(f)` with `R` the squared l2 norm or the
/// l1 norm. `lambda = 0` is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegSpec {
    pub kind: RegKind,
    pub lambda: f64,
}

impl RegSpec {
    pub fn new(kind: RegKind, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::invalid(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { kind, lambda })
    }

    pub fn l2(lambda: f64) -> Result<Self> {
        Self::new(RegKind::L2, lambda)
    }

    pub fn l1(lambda: f64) -> Result<Self> {
        Self::new(RegKind::L1, lambda)
    }

    fn penalty(&self, coeffs: &[f64]) -> f64 {
        match self.kind {
            RegKind::L2 => self.lambda * coeffs.iter().map(|c| c * c).sum::<f64>(),
            RegKind::L1 => self.lambda * coeffs.iter().map(|c| c.abs()).sum::<f64>(),
        }
    }
}

/// Solver knobs. Defaults: K = 1000, 1e-8 tolerances, Armijo sigma 1e-4 and
/// halving with unit initial step (doubling warm start), FISTA L0 = 1 and
/// theta = 2, zero initial coefficients.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub obj_tol: f64,
    pub step_tol: f64,
    pub armijo_sigma: f64,
    pub armijo_shrink: f64,
    pub armijo_initial_step: f64,
    pub fista_l0: f64,
    pub fista_theta: f64,
    pub initial_coeffs: Option<Vec<f64>>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            grad_tol: 1e-8,
            obj_tol: 1e-8,
            step_tol: 1e-8,
            armijo_sigma: 1e-4,
            armijo_shrink: 0.5,
            armijo_initial_step: 1.0,
            fista_l0: 1.0,
            fista_theta: 2.0,
            initial_coeffs: None,
        }
    }
}

impl SolveConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be >= 1"));
        }
        for (name, v) in [
            ("grad_tol", self.grad_tol),
            ("obj_tol", self.obj_tol),
            ("step_tol", self.step_tol),
            ("armijo_initial_step", self.armijo_initial_step),
            ("fista_l0", self.fista_l0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.armijo_sigma > 0.0 && self.armijo_sigma < 1.0) {
            return Err(Error::invalid("armijo_sigma must lie in (0, 1)"));
        }
        if !(self.armijo_shrink > 0.0 && self.armijo_shrink < 1.0) {
            return Err(Error::invalid("armijo_shrink must lie in (0, 1)"));
        }
        if self.fista_theta.is_nan() || self.fista_theta <= 1.0 {
            return Err(Error::invalid("fista_theta must be > 1"));
        }
        Ok(())
    }

    fn initial(&self, n: usize) -> Result<Vec<f64>> {
        match &self.initial_coeffs {
            None => Ok(vec![0.0; n]),
            Some(c) if c.len() == n => Ok(c.clone()),
            Some(c) => Err(Error::invalid(format!(
                "initial coefficients have length {}, index set has cardinality {n}",
                c.len()
            ))),
        }
    }
}

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Gradient,
    ObjectiveChange,
    StepChange,
    MaxIters,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Gradient => "gradient",
            StopReason::ObjectiveChange => "objective-change",
            StopReason::StepChange => "step-change",
            StopReason::MaxIters => "max-iters",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a solve.
///
/// `objective_trace[k]` is the objective after `k` accepted iterations
/// (`trace.len() == iterations + 1`). `aux_trace` carries the gradient norm
/// (l2 solver) or the step control constant L (l1 solver) per trace entry.
///
/// `line_search_slack` is a certificate of the accepted steps: the largest
/// violation of the sufficient-decrease condition (l2) or of the
/// backtracking majorization exit condition (l1) over all iterations. A
/// correct run keeps it at or below zero up to rounding.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub coeffs: Vec<f64>,
    pub iterations: usize,
    pub objective: f64,
    pub converged: bool,
    pub stop: StopReason,
    pub objective_trace: Vec<f64>,
    pub aux_trace: Vec<f64>,
    pub line_search_slack: f64,
}

fn check_labels(labels: &[f64]) -> Result<()> {
    for &y in labels {
        if y != 1.0 && y != -1.0 {
            return Err(Error::invalid(format!("label {y} is not +1 or -1")));
        }
    }
    Ok(())
}

/// Margins `m_j = 1 - y_j (Phi f)_j`.
pub fn margins(t: &FeatureTransform, coeffs: &[f64], labels: &[f64]) -> Result<Vec<f64>> {
    if labels.len() != t.rows() {
        return Err(Error::invalid(format!(
            "{} labels for {} rows",
            labels.len(),
            t.rows()
        )));
    }
    check_labels(labels)?;
    let scores = t.apply(coeffs)?;
    Ok(margins_from_scores(&scores, labels))
}

fn margins_from_scores(scores: &[f64], labels: &[f64]) -> Vec<f64> {
    scores
        .iter()
        .zip(labels)
        .map(|(s, y)| 1.0 - y * s)
        .collect()
}

/// Mean squared hinge `(1/M) sum max(0, m_j)^2`.
pub fn smooth_loss(margins: &[f64]) -> f64 {
    let s: f64 = margins.iter().map(|&m| m.max(0.0).powi(2)).sum();
    s / margins.len() as f64
}

/// Full objective `lambda R(f) + smooth_loss`.
pub fn objective(
    t: &FeatureTransform,
    coeffs: &[f64],
    labels: &[f64],
    reg: &RegSpec,
) -> Result<f64> {
    let m = margins(t, coeffs, labels)?;
    Ok(reg.penalty(coeffs) + smooth_loss(&m))
}

/// Gradient of the smooth part only: `-(1/M) Phi^T (y .* h'(m))` with
/// `h'(t) = 2t` for `t >= 0` and 0 otherwise.
pub fn gradient_smooth(t: &FeatureTransform, coeffs: &[f64], labels: &[f64]) -> Result<Vec<f64>> {
    if labels.len() != t.rows() {
        return Err(Error::invalid(format!(
            "{} labels for {} rows",
            labels.len(),
            t.rows()
        )));
    }
    check_labels(labels)?;
    let scores = t.apply(coeffs)?;
    gradient_smooth_from_scores(t, &scores, labels)
}

fn gradient_smooth_from_scores(
    t: &FeatureTransform,
    scores: &[f64],
    labels: &[f64],
) -> Result<Vec<f64>> {
    let m = t.rows() as f64;
    let w: Vec<f64> = scores
        .iter()
        .zip(labels)
        .map(|(s, y)| {
            let margin = 1.0 - y * s;
            if margin >= 0.0 {
                -2.0 * y * margin / m
            } else {
                0.0
            }
        })
        .collect();
    t.apply_transpose(&w)
}

/// Armijo backtracking: the largest step in `{s0 * shrink^n}` satisfying the
/// sufficient-decrease condition
/// `P(f + s d) <= P(f) - sigma * s * ||grad P||^2` for `d = -grad P`.
///
/// `eval` maps a step size to the objective at `f + s d`. Returns the step
/// and the objective there. More than 60 shrinks signals stagnation.
pub fn armijo_step(
    mut eval: impl FnMut(f64) -> f64,
    obj_at_current: f64,
    grad_norm_sq: f64,
    initial_step: f64,
    sigma: f64,
    shrink: f64,
) -> Result<(f64, f64)> {
    let mut s = initial_step;
    for _ in 0..=60 {
        let candidate = eval(s);
        if candidate <= obj_at_current - sigma * s * grad_norm_sq {
            return Ok((s, candidate));
        }
        s *= shrink;
    }
    Err(Error::StepFailure(format!(
        "no sufficient decrease after 60 shrinks (objective {obj_at_current:e})"
    )))
}

/// Gradient descent on the l2-regularized objective.
pub fn solve_l2(
    t: &FeatureTransform,
    labels: &[f64],
    reg: &RegSpec,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    if reg.kind != RegKind::L2 {
        return Err(Error::invalid("solve_l2 requires an l2 regularizer"));
    }
    cfg.validate()?;
    if labels.len() != t.rows() {
        return Err(Error::invalid(format!(
            "{} labels for {} rows",
            labels.len(),
            t.rows()
        )));
    }
    check_labels(labels)?;

    let n = t.cols();
    let mut coeffs = cfg.initial(n)?;
    let mut scores = t.apply(&coeffs)?;
    let mut obj = reg.penalty(&coeffs) + smooth_loss(&margins_from_scores(&scores, labels));
    let mut trace = vec![obj];
    let mut aux = Vec::new();
    // first iteration starts at s0, later ones at twice the last accepted step
    let mut next_initial_step = cfg.armijo_initial_step;
    let mut slack = f64::NEG_INFINITY;

    let mut iterations = 0;
    let mut stop = StopReason::MaxIters;
    for k in 1..=cfg.max_iters {
        if !obj.is_finite() {
            return Err(Error::Numeric {
                iter: k,
                msg: format!("objective became {obj}"),
            });
        }
        let mut grad = gradient_smooth_from_scores(t, &scores, labels)?;
        for (g, c) in grad.iter_mut().zip(&coeffs) {
            *g += 2.0 * reg.lambda * c;
        }
        let grad_norm_sq: f64 = grad.iter().map(|g| g * g).sum();
        if aux.is_empty() {
            aux.push(grad_norm_sq.sqrt());
        }
        if grad_norm_sq.sqrt() < cfg.grad_tol {
            stop = StopReason::Gradient;
            break;
        }

        // objective along f - s * grad; candidate scores kept for reuse
        let mut cand = vec![0.0; n];
        let mut cand_scores: Vec<f64> = Vec::new();
        let eval = |s: f64| {
            for ((c, f), g) in cand.iter_mut().zip(&coeffs).zip(&grad) {
                *c = f - s * g;
            }
            match t.apply(&cand) {
                Ok(sc) => {
                    let val =
                        reg.penalty(&cand) + smooth_loss(&margins_from_scores(&sc, labels));
                    cand_scores = sc;
                    val
                }
                Err(_) => f64::INFINITY,
            }
        };
        match armijo_step(
            eval,
            obj,
            grad_norm_sq,
            next_initial_step,
            cfg.armijo_sigma,
            cfg.armijo_shrink,
        ) {
            Ok((s, new_obj)) => {
                next_initial_step = 2.0 * s;
                for (f, g) in coeffs.iter_mut().zip(&grad) {
                    *f -= s * g;
                }
                scores = std::mem::take(&mut cand_scores);
                slack = slack.max(new_obj - (obj - cfg.armijo_sigma * s * grad_norm_sq));
                obj = new_obj;
                iterations = k;
                trace.push(obj);
                aux.push(grad_norm_sq.sqrt());
            }
            Err(Error::StepFailure(_)) => {
                // the objective cannot decrease at float resolution
                stop = StopReason::StepChange;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let converged = stop != StopReason::MaxIters;
    Ok(SolveResult {
        coeffs,
        iterations,
        objective: obj,
        converged,
        stop,
        objective_trace: trace,
        aux_trace: aux,
        line_search_slack: if slack.is_finite() { slack } else { 0.0 },
    })
}

/// Scalar shrinkage `sign(a) * max(0, |a| - thr)`.
pub fn soft_threshold(a: f64, thr: f64) -> f64 {
    debug_assert!(thr >= 0.0);
    a.signum() * (a.abs() - thr).max(0.0)
}

/// Proximal gradient step: componentwise soft threshold of
/// `h - (1/L) grad_q` at level `lambda / L`.
pub fn prox_step(h: &[f64], grad_q: &[f64], l: f64, lambda: f64) -> Vec<f64> {
    let thr = lambda / l;
    h.iter()
        .zip(grad_q)
        .map(|(hi, gi)| soft_threshold(hi - gi / l, thr))
        .collect()
}

/// FISTA with backtracking on the l1-regularized objective.
pub fn solve_l1(
    t: &FeatureTransform,
    labels: &[f64],
    reg: &RegSpec,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    if reg.kind != RegKind::L1 {
        return Err(Error::invalid("solve_l1 requires an l1 regularizer"));
    }
    cfg.validate()?;
    if labels.len() != t.rows() {
        return Err(Error::invalid(format!(
            "{} labels for {} rows",
            labels.len(),
            t.rows()
        )));
    }
    check_labels(labels)?;

    let n = t.cols();
    let q_of = |scores: &[f64]| smooth_loss(&margins_from_scores(scores, labels));

    let mut coeffs = cfg.initial(n)?;
    let mut prev: Vec<f64>;
    let mut extr = coeffs.clone();
    let mut t_k = 1.0f64;
    let mut l = cfg.fista_l0;

    let mut obj = reg.penalty(&coeffs) + q_of(&t.apply(&coeffs)?);
    let mut trace = vec![obj];
    let mut aux = vec![l];
    let mut slack = f64::NEG_INFINITY;

    let mut iterations = 0;
    let mut stop = StopReason::MaxIters;
    for k in 1..=cfg.max_iters {
        let extr_scores = t.apply(&extr)?;
        let q_extr = q_of(&extr_scores);
        let grad_extr = gradient_smooth_from_scores(t, &extr_scores, labels)?;

        // backtracking: grow L until the quadratic model majorizes q
        let (cand, q_cand) = loop {
            let cand = prox_step(&extr, &grad_extr, l, reg.lambda);
            let cand_scores = t.apply(&cand)?;
            let q_cand = q_of(&cand_scores);
            let mut lin = 0.0;
            let mut dist = 0.0;
            for ((c, e), g) in cand.iter().zip(&extr).zip(&grad_extr) {
                let diff = c - e;
                lin += diff * g;
                dist += diff * diff;
            }
            let gap = q_cand - (q_extr + lin + 0.5 * l * dist);
            if gap <= 0.0 {
                slack = slack.max(gap);
                break (cand, q_cand);
            }
            l *= cfg.fista_theta;
            if l > 1e30 {
                return Err(Error::StepFailure(format!(
                    "backtracking constant overflowed at iteration {k}"
                )));
            }
        };

        prev = std::mem::replace(&mut coeffs, cand);
        let new_obj = reg.penalty(&coeffs) + q_cand;
        if !new_obj.is_finite() {
            return Err(Error::Numeric {
                iter: k,
                msg: format!("objective became {new_obj}"),
            });
        }
        iterations = k;
        trace.push(new_obj);
        aux.push(l);

        let obj_change = (new_obj - obj).abs();
        let step_change: f64 = coeffs
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        obj = new_obj;
        if obj_change < cfg.obj_tol {
            stop = StopReason::ObjectiveChange;
            break;
        }
        if step_change < cfg.step_tol {
            stop = StopReason::StepChange;
            break;
        }

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_k * t_k).sqrt());
        let beta = (t_k - 1.0) / t_next;
        for ((e, c), p) in extr.iter_mut().zip(&coeffs).zip(&prev) {
            *e = c + beta * (c - p);
        }
        t_k = t_next;
    }

    let converged = stop != StopReason::MaxIters;
    Ok(SolveResult {
        coeffs,
        iterations,
        objective: obj,
        converged,
        stop,
        objective_trace: trace,
        aux_trace: aux,
        line_search_slack: if slack.is_finite() { slack } else { 0.0 },
    })
}

/// Scores `Phi f` of a coefficient vector on a bound transform.
pub fn decision_values(t: &FeatureTransform, coeffs: &[f64]) -> Result<Vec<f64>> {
    t.apply(coeffs)
}

/// `+1` where the score is `>= 0`, else `-1` (`sign(0) := +1`).
pub fn predict_labels(scores: &[f64]) -> Vec<f64> {
    scores.iter().map(|&s| if s >= 0.0 { 1.0 } else { -1.0 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisKind, CosineNormalization};
    use crate::indexsets::{enumerate_subsets, per_order_bandwidths, GroupedIndexSet};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_instance(
        seed: u64,
        m: usize,
        basis: BasisKind,
    ) -> (FeatureTransform, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2;
        let family = enumerate_subsets(d, 2).unwrap();
        let bw = per_order_bandwidths(&family, &[4, 2]).unwrap();
        let set = match basis {
            BasisKind::Cosine => GroupedIndexSet::cosine(&family, &bw).unwrap(),
            BasisKind::Haar => GroupedIndexSet::wavelet(&family, &bw).unwrap(),
        };
        let pts: Vec<f64> = (0..m * d)
            .map(|_| match basis {
                BasisKind::Cosine => rng.gen::<f64>() * 0.5,
                BasisKind::Haar => rng.gen::<f64>() - 0.5,
            })
            .collect();
        let labels: Vec<f64> = (0..m)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let t = FeatureTransform::build(&pts, m, &set, CosineNormalization::Orthonormal).unwrap();
        (t, labels)
    }

    #[test]
    fn margins_at_zero_coeffs() {
        let (t, labels) = small_instance(1, 12, BasisKind::Cosine);
        let m = margins(&t, &vec![0.0; t.cols()], &labels).unwrap();
        assert!(m.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn margins_reject_bad_labels() {
        let (t, mut labels) = small_instance(1, 12, BasisKind::Cosine);
        labels[3] = 0.5;
        assert!(margins(&t, &vec![0.0; t.cols()], &labels).is_err());
    }

    #[test]
    fn smooth_loss_examples() {
        assert_eq!(smooth_loss(&[-1.0, -0.5]), 0.0);
        assert_abs_diff_eq!(
            smooth_loss(&[0.5, -1.0, 2.0]),
            (0.25 + 0.0 + 4.0) / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn objective_at_zero_is_one() {
        let (t, labels) = small_instance(2, 20, BasisKind::Haar);
        for reg in [RegSpec::l2(3.0).unwrap(), RegSpec::l1(0.5).unwrap()] {
            let v = objective(&t, &vec![0.0; t.cols()], &labels, &reg).unwrap();
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for trial in 0..20 {
            let basis = if trial % 2 == 0 {
                BasisKind::Cosine
            } else {
                BasisKind::Haar
            };
            let (t, labels) = small_instance(100 + trial, 15, basis);
            let n = t.cols();
            let coeffs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
            let grad = gradient_smooth(&t, &coeffs, &labels).unwrap();
            let h = 1e-6;
            let mut fd = vec![0.0; n];
            for i in 0..n {
                let mut plus = coeffs.clone();
                plus[i] += h;
                let mut minus = coeffs.clone();
                minus[i] -= h;
                let lp = smooth_loss(&margins(&t, &plus, &labels).unwrap());
                let lm = smooth_loss(&margins(&t, &minus, &labels).unwrap());
                fd[i] = (lp - lm) / (2.0 * h);
            }
            let num: f64 = grad
                .iter()
                .zip(&fd)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let den: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
            assert!(num / den < 1e-5, "trial {trial}: rel err {}", num / den);
        }
    }

    #[test]
    fn gradient_zero_on_flat_region() {
        let (t, labels) = small_instance(4, 10, BasisKind::Cosine);
        // push every margin negative: coeffs = large multiple of labels fit
        // use constant coefficient: scores = c, margins = 1 - y c; for y=+1
        // need c > 1, for y=-1 need c < -1 - impossible with one constant,
        // so craft labels all +1
        let labels: Vec<f64> = labels.iter().map(|_| 1.0).collect();
        let mut coeffs = vec![0.0; t.cols()];
        coeffs[0] = 2.0; // constant block: scores all 2, margins all -1
        let g = gradient_smooth(&t, &coeffs, &labels).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gradient_at_zero_coeffs() {
        let (t, labels) = small_instance(5, 18, BasisKind::Cosine);
        let g = gradient_smooth(&t, &vec![0.0; t.cols()], &labels).unwrap();
        // h'(1) = 2: gradient is -(2/M) Phi^T y
        let expected = t
            .apply_transpose(&labels)
            .unwrap()
            .iter()
            .map(|v| -2.0 * v / t.rows() as f64)
            .collect::<Vec<_>>();
        for (a, b) in g.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn armijo_scalar_recursion() {
        // P(x) = x^2 at x = 1 with d = -grad = -2: s = 1 gives P(-1) = 1 >
        // 1 - 0.4, so shrink once; s = 0.5 gives P(0) = 0 <= 0.8, accepted.
        let eval = |s: f64| (1.0 - 2.0 * s).powi(2);
        let (s, obj) = armijo_step(eval, 1.0, 4.0, 1.0, 0.1, 0.5).unwrap();
        assert_eq!(s, 0.5);
        assert_eq!(obj, 0.0);
    }

    #[test]
    fn armijo_zero_direction_accepts_immediately() {
        let (s, _) = armijo_step(|_s| 5.0, 5.0, 0.0, 1.0, 0.5, 0.5).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn armijo_decrease_inequality_holds() {
        // strongly convex quadratic P(x) = 3(x-2)^2 + 1 at x = 0
        let p = |x: f64| 3.0 * (x - 2.0) * (x - 2.0) + 1.0;
        let x0 = 0.0;
        let grad = 6.0 * (x0 - 2.0);
        let gn2 = grad * grad;
        let sigma = 0.3;
        let (s, obj) = armijo_step(|s| p(x0 - s * grad), p(x0), gn2, 1.0, sigma, 0.5).unwrap();
        assert!(obj <= p(x0) - sigma * s * gn2 + 1e-15);
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(0.0, 0.3), 0.0);
        assert_eq!(soft_threshold(2.0, 0.5), 1.5);
        assert_eq!(soft_threshold(-0.3, 0.5), 0.0);
        assert_eq!(soft_threshold(-2.0, 0.5), -1.5);
    }

    #[test]
    fn soft_threshold_is_scalar_prox() {
        // argmin over z of thr |z| + 0.5 (z - a)^2, brute forced on a grid
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let a = rng.gen::<f64>() * 4.0 - 2.0;
            let thr = rng.gen::<f64>();
            let fast = soft_threshold(a, thr);
            let mut best = f64::INFINITY;
            let mut best_z = 0.0;
            let mut z: f64 = -3.0;
            while z <= 3.0 {
                let v = thr * z.abs() + 0.5 * (z - a) * (z - a);
                if v < best {
                    best = v;
                    best_z = z;
                }
                z += 1e-4;
            }
            assert!((fast - best_z).abs() <= 2e-4, "a={a} thr={thr}");
        }
    }

    #[test]
    fn prox_step_cases() {
        let h = [1.0, -2.0, 0.5];
        let g = [0.2, -0.4, 0.0];
        // lambda = 0: plain gradient step
        let p = prox_step(&h, &g, 2.0, 0.0);
        assert_abs_diff_eq!(p[0], 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], -1.8, epsilon = 1e-15);
        // huge threshold collapses to zero
        let p = prox_step(&h, &[0.0, 0.0, 0.0], 1.0, 10.0);
        assert_eq!(p, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn prox_step_matches_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let l = 1.7;
        let lambda = 0.35;
        let h: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let g: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() - 0.5).collect();
        let fast = prox_step(&h, &g, l, lambda);
        for i in 0..5 {
            let a = h[i] - g[i] / l;
            let mut best = f64::INFINITY;
            let mut best_z = 0.0;
            let mut z: f64 = -3.0;
            while z <= 3.0 {
                let v = lambda * z.abs() + 0.5 * l * (z - a) * (z - a);
                if v < best {
                    best = v;
                    best_z = z;
                }
                z += 1e-4;
            }
            assert!((fast[i] - best_z).abs() <= 2e-4);
        }
    }

    #[test]
    fn l2_descent_is_monotone() {
        let (t, labels) = small_instance(21, 40, BasisKind::Cosine);
        let reg = RegSpec::l2(0.01).unwrap();
        let cfg = SolveConfig {
            max_iters: 200,
            ..SolveConfig::default()
        };
        let res = solve_l2(&t, &labels, &reg, &cfg).unwrap();
        for w in res.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "trace not monotone: {w:?}");
        }
        assert_eq!(res.objective_trace.len(), res.iterations + 1);
    }

    #[test]
    fn l2_large_lambda_shrinks_to_near_zero() {
        let (t, labels) = small_instance(22, 30, BasisKind::Cosine);
        let reg = RegSpec::l2(1e3).unwrap();
        let res = solve_l2(&t, &labels, &reg, &SolveConfig::default()).unwrap();
        assert!(res.objective <= 1.0 + 1e-12);
        let norm: f64 = res.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!(norm < 0.05, "coefficients should be strongly shrunk, norm {norm}");
    }

    #[test]
    fn l2_matches_long_reference_descent() {
        // tiny instance: M = 8, one-dimensional cosine set with 3 columns
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let family = enumerate_subsets(1, 1).unwrap();
        let bw = per_order_bandwidths(&family, &[4]).unwrap();
        let set = GroupedIndexSet::cosine(&family, &bw).unwrap();
        let pts: Vec<f64> = (0..8).map(|_| rng.gen::<f64>() * 0.5).collect();
        let labels: Vec<f64> = (0..8)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let t = FeatureTransform::build(&pts, 8, &set, CosineNormalization::Orthonormal).unwrap();
        let reg = RegSpec::l2(0.05).unwrap();
        let res = solve_l2(
            &t,
            &labels,
            &reg,
            &SolveConfig {
                max_iters: 5000,
                ..SolveConfig::default()
            },
        )
        .unwrap();

        // reference: plain fixed-step descent on the same objective
        let n = t.cols();
        let mut f = vec![0.0f64; n];
        for _ in 0..300_000 {
            let mut g = gradient_smooth(&t, &f, &labels).unwrap();
            for (gi, fi) in g.iter_mut().zip(&f) {
                *gi += 2.0 * reg.lambda * fi;
            }
            for (fi, gi) in f.iter_mut().zip(&g) {
                *fi -= 0.01 * gi;
            }
        }
        let ref_obj = objective(&t, &f, &labels, &reg).unwrap();
        assert!(
            res.objective <= ref_obj + 1e-6,
            "solver {} vs reference {}",
            res.objective,
            ref_obj
        );
        assert!((res.objective - ref_obj).abs() < 1e-6);
    }

    #[test]
    fn l1_huge_lambda_gives_zero() {
        let (t, labels) = small_instance(31, 25, BasisKind::Haar);
        let reg = RegSpec::l1(1e6).unwrap();
        let res = solve_l1(&t, &labels, &reg, &SolveConfig::default()).unwrap();
        assert!(res.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn l1_beats_ista_reference() {
        let (t, labels) = small_instance(32, 30, BasisKind::Cosine);
        let reg = RegSpec::l1(0.01).unwrap();
        let res = solve_l1(
            &t,
            &labels,
            &reg,
            &SolveConfig {
                max_iters: 2000,
                ..SolveConfig::default()
            },
        )
        .unwrap();

        // ISTA (no momentum) with the same backtracking, same budget
        let n = t.cols();
        let mut f = vec![0.0f64; n];
        let mut l = 1.0f64;
        for _ in 0..2000 {
            let scores = t.apply(&f).unwrap();
            let q0 = smooth_loss(&margins_from_scores(&scores, &labels));
            let grad = gradient_smooth_from_scores(&t, &scores, &labels).unwrap();
            loop {
                let cand = prox_step(&f, &grad, l, reg.lambda);
                let qc = smooth_loss(&margins(&t, &cand, &labels).unwrap());
                let mut lin = 0.0;
                let mut dist = 0.0;
                for ((c, e), g) in cand.iter().zip(&f).zip(&grad) {
                    lin += (c - e) * g;
                    dist += (c - e) * (c - e);
                }
                if qc <= q0 + lin + 0.5 * l * dist {
                    f = cand;
                    break;
                }
                l *= 2.0;
            }
        }
        let ista_obj = objective(&t, &f, &labels, &reg).unwrap();
        assert!(
            res.objective <= ista_obj + 1e-8,
            "fista {} vs ista {}",
            res.objective,
            ista_obj
        );
    }

    #[test]
    fn l1_solution_no_worse_than_zero() {
        let (t, labels) = small_instance(33, 20, BasisKind::Haar);
        let reg = RegSpec::l1(0.2).unwrap();
        let res = solve_l1(&t, &labels, &reg, &SolveConfig::default()).unwrap();
        let at_zero = objective(&t, &vec![0.0; t.cols()], &labels, &reg).unwrap();
        assert!(res.objective <= at_zero + 1e-12);
    }

    #[test]
    fn solves_are_deterministic() {
        let (t, labels) = small_instance(40, 25, BasisKind::Cosine);
        let cfg = SolveConfig {
            max_iters: 50,
            ..SolveConfig::default()
        };
        let a = solve_l1(&t, &labels, &RegSpec::l1(0.02).unwrap(), &cfg).unwrap();
        let b = solve_l1(&t, &labels, &RegSpec::l1(0.02).unwrap(), &cfg).unwrap();
        assert!(a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        let a2 = solve_l2(&t, &labels, &RegSpec::l2(0.02).unwrap(), &cfg).unwrap();
        let b2 = solve_l2(&t, &labels, &RegSpec::l2(0.02).unwrap(), &cfg).unwrap();
        assert!(a2
            .coeffs
            .iter()
            .zip(&b2.coeffs)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn line_search_certificates_hold() {
        let (t, labels) = small_instance(50, 35, BasisKind::Cosine);
        let cfg = SolveConfig {
            max_iters: 300,
            ..SolveConfig::default()
        };
        let l2 = solve_l2(&t, &labels, &RegSpec::l2(0.01).unwrap(), &cfg).unwrap();
        assert!(l2.line_search_slack <= 1e-12, "{}", l2.line_search_slack);
        let l1 = solve_l1(&t, &labels, &RegSpec::l1(0.01).unwrap(), &cfg).unwrap();
        assert!(l1.line_search_slack <= 1e-12, "{}", l1.line_search_slack);
    }

    #[test]
    fn predict_sign_convention() {
        assert_eq!(predict_labels(&[0.0, -0.1, 3.0]), vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn reg_spec_validation() {
        assert!(RegSpec::l2(-1.0).is_err());
        assert!(RegSpec::l1(f64::NAN).is_err());
        assert!(RegSpec::l1(0.0).is_ok());
    }
}

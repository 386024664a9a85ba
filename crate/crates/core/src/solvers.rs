//! Problem-level entry points: solvability verdicts, parameter ranges and
//! canonical solutions for the Stieltjes, Hausdorff, gap and local problems.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::{
    degenerate_measure, gap_inequalities, gap_jacobi_from, hausdorff_ratio, jacobi_measure, w_trinomial,
    StieltjesCore,
};
use crate::measure::{lossless_f64, DiscreteMeasure};
use crate::moments::{
    check_gap_necessary, check_hausdorff_necessary, check_stieltjes, names, Condition, MomentSequence,
    SolvabilityReport, Witness,
};
use crate::oracle;
use crate::orthopoly::{build_partial, build_system, conjugate_system, ConjugateSystem, OrthoPolySystem};

/// Slack allowed when testing parameter membership and support constraints.
pub const SUPPORT_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeKind {
    Tau,
    Alpha,
}

/// Shape of an admissible parameter set. `Exterior` is `(−∞, lo] ∪ [hi, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeShape {
    Empty,
    Segment,
    Exterior,
}

/// Closed admissible parameter set. Segment ends may be infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterRange {
    pub kind: RangeKind,
    pub shape: RangeShape,
    #[serde(with = "lossless_f64")]
    pub lo: f64,
    #[serde(with = "lossless_f64")]
    pub hi: f64,
    /// The problem has exactly one solution.
    pub unique: bool,
    pub notes: String,
}

impl ParameterRange {
    pub fn empty(kind: RangeKind, notes: impl Into<String>) -> Self {
        ParameterRange {
            kind,
            shape: RangeShape::Empty,
            lo: f64::NAN,
            hi: f64::NAN,
            unique: false,
            notes: notes.into(),
        }
    }

    pub fn segment(kind: RangeKind, lo: f64, hi: f64) -> Self {
        ParameterRange {
            kind,
            shape: RangeShape::Segment,
            lo,
            hi,
            unique: false,
            notes: String::new(),
        }
    }

    pub fn exterior(kind: RangeKind, lo: f64, hi: f64) -> Self {
        ParameterRange {
            kind,
            shape: RangeShape::Exterior,
            lo,
            hi,
            unique: false,
            notes: String::new(),
        }
    }

    pub fn unbounded(kind: RangeKind) -> Self {
        Self::segment(kind, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.shape == RangeShape::Empty
    }

    /// Membership with absolute slack `slack · max(1, |endpoint|)`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        let pad = |e: f64| slack * e.abs().max(1.0);
        match self.shape {
            RangeShape::Empty => false,
            RangeShape::Segment => x >= self.lo - pad(self.lo) && x <= self.hi + pad(self.hi),
            RangeShape::Exterior => x <= self.lo + pad(self.lo) || x >= self.hi - pad(self.hi),
        }
    }

    /// A point well inside the set, if any.
    pub fn representative(&self) -> Option<f64> {
        match self.shape {
            RangeShape::Empty => None,
            RangeShape::Segment => Some(match (self.lo.is_finite(), self.hi.is_finite()) {
                (true, true) => 0.5 * (self.lo + self.hi),
                (true, false) => self.lo + 0.5 * self.lo.abs().max(1.0),
                (false, true) => self.hi - 0.5 * self.hi.abs().max(1.0),
                (false, false) => 0.0,
            }),
            // Far-out parameters push an atom to infinity with vanishing mass,
            // so stay close to the endpoint of smaller magnitude.
            RangeShape::Exterior if self.lo.abs() <= self.hi.abs() => Some(self.lo - 0.5 * self.lo.abs().max(1.0)),
            RangeShape::Exterior => Some(self.hi + 0.5 * self.hi.abs().max(1.0)),
        }
    }

    /// Same shape with endpoints equal to `tol · max(1, |x|)`.
    pub fn agrees_with(&self, other: &ParameterRange, tol: f64) -> bool {
        let same = |a: f64, b: f64| {
            if a.is_infinite() || b.is_infinite() {
                a == b
            } else {
                (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
            }
        };
        self.shape == other.shape
            && (self.shape == RangeShape::Empty || (same(self.lo, other.lo) && same(self.hi, other.hi)))
    }
}

impl fmt::Display for ParameterRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            RangeKind::Tau => "τ",
            RangeKind::Alpha => "α",
        };
        match self.shape {
            RangeShape::Empty => write!(f, "{name} ∈ ∅"),
            RangeShape::Segment => write!(f, "{name} ∈ [{}, {}]", self.lo, self.hi),
            RangeShape::Exterior => write!(f, "{name} ∈ (−∞, {}] ∪ [{}, ∞)", self.lo, self.hi),
        }
    }
}

/// Rank of `Γ_m` when it is numerically singular (unique-solution branch).
pub fn degenerate_rank(seq: &MomentSequence, tol: f64) -> Result<Option<usize>> {
    let r = build_partial(seq, tol)?.coeffs.len();
    Ok((r < seq.order() + 1).then_some(r))
}

/// Canonical Stieltjes solution for `τ ≥ 0`. A singular `Γ_m` yields the
/// unique solution regardless of `τ`.
pub fn solve_stieltjes(seq: &MomentSequence, tau: f64, tol: f64) -> Result<DiscreteMeasure> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!("τ must be finite and non-negative, got {tau}")));
    }
    let report = check_stieltjes(seq, tol);
    if !report.verdict() {
        return Err(Error::unsolvable(report));
    }
    stieltjes_measure(seq, tau, tol)
}

/// Spectral measure of the extension with parameter `τ`, without range or
/// solvability checks. `τ < 0` is allowed and produces negative atoms.
pub fn stieltjes_measure(seq: &MomentSequence, tau: f64, tol: f64) -> Result<DiscreteMeasure> {
    let partial = build_partial(seq, tol)?;
    if partial.coeffs.len() < seq.order() + 1 {
        return degenerate_measure(&partial, seq.get(0));
    }
    let core = StieltjesCore::new(seq, tol)?;
    jacobi_measure(&core.jacobi_form(core.alpha_min + tau), seq.get(0))
}

/// `[0, Λ(1 − ratio(Λ))]`; a single point when the ratio is 1, empty when it
/// exceeds 1 or a necessary condition fails.
pub fn tau_range_hausdorff(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<ParameterRange> {
    let report = check_hausdorff_necessary(seq, lambda, tol)?;
    if !report.verdict() {
        return Ok(ParameterRange::empty(
            RangeKind::Tau,
            format!("failing {}", report.failing().join(", ")),
        ));
    }
    if let Some(rank) = degenerate_rank(seq, tol)? {
        let mu = degenerate_measure(&build_partial(seq, tol)?, seq.get(0))?;
        let inside = mu
            .atoms()
            .iter()
            .all(|&t| t >= -SUPPORT_SLACK && t <= lambda + SUPPORT_SLACK * lambda.max(1.0));
        if !inside {
            return Ok(ParameterRange::empty(RangeKind::Tau, "unique solution leaves [0, Λ]"));
        }
        let mut r = ParameterRange::segment(RangeKind::Tau, 0.0, 0.0)
            .with_notes(format!("degenerate Γ_m of rank {rank}: unique solution, independent of τ"));
        r.unique = true;
        return Ok(r);
    }
    if seq.order() == 0 {
        return Ok(ParameterRange::segment(RangeKind::Tau, 0.0, lambda).with_notes("single atom at τ"));
    }
    let ratio = hausdorff_ratio(seq, lambda, tol)?;
    let eps = 1e-9;
    if ratio > 1.0 + eps {
        return Ok(ParameterRange::empty(RangeKind::Tau, format!("Hausdorff ratio {ratio} > 1")));
    }
    if ratio >= 1.0 - eps {
        let mut r = ParameterRange::segment(RangeKind::Tau, 0.0, 0.0).with_notes("ratio = 1: unique solution");
        r.unique = true;
        return Ok(r);
    }
    Ok(ParameterRange::segment(RangeKind::Tau, 0.0, lambda * (1.0 - ratio)).with_notes("closed"))
}

/// Full Hausdorff report: necessary conditions plus the ratio criterion.
pub fn hausdorff_solvability(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<SolvabilityReport> {
    let mut report = check_hausdorff_necessary(seq, lambda, tol)?;
    if !report.verdict() {
        return Ok(report);
    }
    let cond = if degenerate_rank(seq, tol)?.is_some() || seq.order() == 0 {
        let range = tau_range_hausdorff(seq, lambda, tol)?;
        Condition::new(
            names::HAUSDORFF_RATIO,
            !range.is_empty(),
            Witness::Note { text: range.notes },
        )
    } else {
        match hausdorff_ratio(seq, lambda, tol) {
            Ok(r) => Condition::new(names::HAUSDORFF_RATIO, r <= 1.0 + 1e-9, Witness::Scalar { value: r }),
            Err(e) => Condition::new(names::HAUSDORFF_RATIO, false, Witness::Note { text: e.to_string() }),
        }
    };
    report.push(cond);
    Ok(report)
}

pub fn solve_hausdorff(seq: &MomentSequence, lambda: f64, tau: f64, tol: f64) -> Result<DiscreteMeasure> {
    let range = tau_range_hausdorff(seq, lambda, tol)?;
    if range.is_empty() {
        return Err(Error::Unsolvable {
            reason: range.notes,
            report: None,
        });
    }
    let degenerate = range.unique && degenerate_rank(seq, tol)?.is_some();
    if !degenerate && !range.contains(tau, 1e-10) {
        return Err(Error::OutOfRange {
            value: tau,
            range: Box::new(range),
        });
    }
    let tau = tau.clamp(range.lo.max(0.0), range.hi.max(0.0));
    solve_stieltjes(seq, tau, tol)
}

fn guard_condition(sys: &OrthoPolySystem, lambda: f64) -> Condition {
    let n = sys.order();
    let zeros = sys.coeffs[n - 1].count_roots_open(0.0, lambda);
    Condition::new(names::GAP_GUARD, zeros < 2, Witness::Count { value: zeros })
}

/// Range of α from the sign of `W`: closed set where `W ≥ 0`.
fn w_range(w: [f64; 3]) -> std::result::Result<ParameterRange, String> {
    let [c0, c1, c2] = w;
    let size = c0.abs().max(c1.abs()).max(c2.abs());
    if size == 0.0 {
        return Err("W vanishes identically".into());
    }
    if c2.abs() <= 1e-13 * size {
        if c1 == 0.0 {
            return Err("W is constant".into());
        }
        let root = -c0 / c1;
        return Ok(if c1 > 0.0 {
            ParameterRange::segment(RangeKind::Alpha, root, f64::INFINITY)
        } else {
            ParameterRange::segment(RangeKind::Alpha, f64::NEG_INFINITY, root)
        }
        .with_notes("W is linear"));
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc <= 1e-14 * (c1 * c1).max((4.0 * c2 * c0).abs()) {
        return Err(format!("W has no distinct real roots (discriminant {disc})"));
    }
    let sq = disc.sqrt();
    // stable quadratic roots
    let q = -0.5 * (c1 + if c1 >= 0.0 { sq } else { -sq });
    let (r1, r2) = (q / c2, c0 / q);
    let (lo, hi) = (r1.min(r2), r1.max(r2));
    Ok(if c2 < 0.0 {
        ParameterRange::segment(RangeKind::Alpha, lo, hi)
    } else {
        ParameterRange::exterior(RangeKind::Alpha, lo, hi)
    })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("Λ must be positive and finite, got {lambda}")));
    }
    Ok(())
}

/// Necessary conditions, `h_n(Λ,0)/(M(Λ)M(0)) > 0` at an admissible α,
/// distinct real roots of `W`, and the zero-count guard on `p_{n−1}`.
pub fn gap_solvability(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<SolvabilityReport> {
    check_lambda(lambda)?;
    let mut report = check_gap_necessary(seq, lambda, tol)?;
    if !report.verdict() {
        return Ok(report);
    }
    let n = seq.order();
    if n == 0 {
        let note = Witness::Note {
            text: "order 0: single atom at α".into(),
        };
        report.push(Condition::new(names::GAP_FIRST, true, note.clone()));
        report.push(Condition::new(names::GAP_TRINOMIAL, true, note.clone()));
        report.push(Condition::new(names::GAP_GUARD, true, note));
        return Ok(report);
    }
    let sys = build_system(seq, tol)?;
    let w = w_trinomial(&sys, lambda)?;
    match w_range(w) {
        Ok(range) => {
            let alpha = range.representative().unwrap_or(0.0);
            let first = match gap_inequalities(&sys, lambda, alpha) {
                Ok(g) => Condition::new(names::GAP_FIRST, g.firsta > 0.0, Witness::Scalar { value: g.firsta }),
                Err(e) => Condition::new(names::GAP_FIRST, false, Witness::Note { text: e.to_string() }),
            };
            report.push(first);
            let witness = if range.shape == RangeShape::Segment {
                Witness::Interval {
                    lo: range.lo,
                    hi: range.hi,
                }
            } else {
                Witness::Note {
                    text: range.to_string(),
                }
            };
            report.push(Condition::new(names::GAP_TRINOMIAL, true, witness));
        }
        Err(text) => {
            report.push(Condition::new(names::GAP_FIRST, false, Witness::Note { text: "no admissible α".into() }));
            report.push(Condition::new(names::GAP_TRINOMIAL, false, Witness::Note { text }));
        }
    }
    report.push(guard_condition(&sys, lambda));
    Ok(report)
}

/// Admissible α set from the roots of `W`, cross-checked against a direct
/// spectral scan. A disagreement is reported as an error carrying both.
pub fn alpha_range(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<ParameterRange> {
    let report = gap_solvability(seq, lambda, tol)?;
    if !report.verdict() {
        return Err(Error::unsolvable(report));
    }
    let formula = if seq.order() == 0 {
        ParameterRange::exterior(RangeKind::Alpha, 0.0, lambda)
    } else {
        let sys = build_system(seq, tol)?;
        w_range(w_trinomial(&sys, lambda)?).map_err(Error::Boundary)?
    };
    let scan = oracle::scan_alpha(seq, lambda, 64, tol)?;
    if !formula.agrees_with(&scan, 1e-6) {
        return Err(Error::ConventionsMismatch {
            formula: Box::new(formula),
            scan: Box::new(scan),
        });
    }
    Ok(formula.with_notes("closed; endpoints put an atom at 0 or Λ"))
}

pub fn solve_gap(seq: &MomentSequence, lambda: f64, alpha: f64, tol: f64) -> Result<DiscreteMeasure> {
    let range = alpha_range(seq, lambda, tol)?;
    if !alpha.is_finite() || !range.contains(alpha, 1e-10) {
        return Err(Error::OutOfRange {
            value: alpha,
            range: Box::new(range),
        });
    }
    gap_measure(seq, alpha, tol)
}

/// Spectral measure of the gap Jacobi matrix, without range checks.
pub fn gap_measure(seq: &MomentSequence, alpha: f64, tol: f64) -> Result<DiscreteMeasure> {
    let sys = build_system(seq, tol)?;
    jacobi_measure(&gap_jacobi_from(&sys, alpha).jacobi, seq.get(0))
}

/// Global moments `a` (order n) on ℝ with window moments `b` (order m ≥ n) on `[0, Λ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalProblem {
    pub a: MomentSequence,
    pub b: MomentSequence,
    pub lambda: f64,
}

impl LocalProblem {
    pub fn new(a: MomentSequence, b: MomentSequence, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if a.order() > b.order() {
            return Err(Error::InvalidArgument(format!(
                "global order {} exceeds window order {}",
                a.order(),
                b.order()
            )));
        }
        Ok(LocalProblem { a, b, lambda })
    }

    /// `c_k = a_k − b_k` for `k ≤ 2n`.
    pub fn complement(&self) -> Result<MomentSequence> {
        let a = self.a.values();
        let b = self.b.values();
        MomentSequence::new(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }
}

/// `σ = σ_Λ + σ_Λ^⊥`: the Hausdorff solution at `τ` plus the gap solution of
/// the complement moments at `α`. Both moment systems are verified before
/// returning.
pub fn solve_local(p: &LocalProblem, tau: f64, alpha: f64, tol: f64) -> Result<DiscreteMeasure> {
    let c = p.complement()?;
    let a = p.a.values();
    let scale0 = a[0].abs().max(1.0);
    if c.get(0) < -tol * scale0 {
        return Err(Error::Unsolvable {
            reason: format!("c_0 = {} < 0", c.get(0)),
            report: None,
        });
    }
    let window = solve_hausdorff(&p.b, p.lambda, tau, tol)?;
    let zero = c
        .values()
        .iter()
        .zip(a)
        .all(|(ck, ak)| ck.abs() <= tol * ak.abs().max(1.0));
    let outer = if zero {
        DiscreteMeasure::empty()
    } else {
        let mu = solve_gap(&c, p.lambda, alpha, tol)?;
        if let Some(t) = mu
            .atoms()
            .iter()
            .find(|&&t| t >= -SUPPORT_SLACK && t <= p.lambda + SUPPORT_SLACK * p.lambda.max(1.0))
        {
            return Err(Error::Boundary(format!(
                "α = {alpha} puts a complement atom at {t}, inside the window"
            )));
        }
        mu
    };
    let merged = window.merge(&outer)?;

    let inside = merged.restrict(-SUPPORT_SLACK, p.lambda + SUPPORT_SLACK * p.lambda.max(1.0));
    let wres = oracle::verify_solution(&inside, &p.b, 1e-8);
    let gres = oracle::verify_solution(&merged, &p.a, 1e-8);
    if !wres.passed || !gres.passed {
        return Err(Error::Unsolvable {
            reason: format!(
                "composition residuals: window {:e}, global {:e}",
                wres.max_residual, gres.max_residual
            ),
            report: None,
        });
    }
    Ok(merged)
}

/// Sign and scale conventions for the rational Nevanlinna form
/// `σ · (e_n u − e_{n−1}) / (d_n u − d_{n−1})`, `u = k (z + s α)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    /// Overall sign `σ`.
    pub sign: f64,
    /// Sign `s` of the parameter inside `u`.
    pub param_sign: f64,
    /// Whether `k = 1/β_{n−1}` (otherwise `k = 1`).
    pub scale_by_beta: bool,
}

/// Resolution fitted on the order-1 fixtures and used everywhere.
pub const FROZEN: Conventions = Conventions {
    sign: -1.0,
    param_sign: -1.0,
    scale_by_beta: true,
};

impl Conventions {
    pub fn candidates() -> Vec<Conventions> {
        let mut out = Vec::new();
        for sign in [1.0, -1.0] {
            for param_sign in [1.0, -1.0] {
                for scale_by_beta in [false, true] {
                    out.push(Conventions {
                        sign,
                        param_sign,
                        scale_by_beta,
                    });
                }
            }
        }
        out
    }
}

/// Rational Nevanlinna form for the canonical solution with last Jacobi
/// diagonal entry `alpha`.
pub fn nevanlinna_form(
    sys: &OrthoPolySystem,
    conj: &ConjugateSystem,
    alpha: f64,
    z: Complex64,
    conv: &Conventions,
) -> Complex64 {
    let n = sys.order();
    let beta = sys.offdiag[n - 1];
    let k = if conv.scale_by_beta { 1.0 / beta } else { 1.0 };
    let u = (z + conv.param_sign * alpha) * k;
    let num = conj.coeffs[n].eval_complex(z) * u - conj.coeffs[n - 1].eval_complex(z);
    let den = sys.coeffs[n].eval_complex(z) * u - sys.coeffs[n - 1].eval_complex(z);
    num / den * conv.sign
}

/// The unique candidate convention reproducing `measure`'s transform at the
/// given points to `tol` relative, if exactly one does.
pub fn resolve_conventions(
    sys: &OrthoPolySystem,
    conj: &ConjugateSystem,
    alpha: f64,
    measure: &DiscreteMeasure,
    points: &[Complex64],
    tol: f64,
) -> Option<Conventions> {
    let matching: Vec<Conventions> = Conventions::candidates()
        .into_iter()
        .filter(|c| {
            points.iter().all(|&z| match oracle::transform(measure, z) {
                Ok(f) => (nevanlinna_form(sys, conj, alpha, z, c) - f).norm() <= tol * f.norm().max(1.0),
                Err(_) => false,
            })
        })
        .collect();
    (matching.len() == 1).then(|| matching[0])
}

/// Fits the conventions on the order-1 gap fixture `(1, 0.5, 2.5)`, `α = 0.5`.
pub fn fit_conventions(tol: f64) -> Result<Option<Conventions>> {
    let seq = MomentSequence::new(vec![1.0, 0.5, 2.5])?;
    let sys = build_system(&seq, tol)?;
    let conj = conjugate_system(&sys, &seq);
    let mu = gap_measure(&seq, 0.5, tol)?;
    let points: Vec<Complex64> = (0..10).map(|j| Complex64::new(-2.0 + 0.5 * j as f64, 1.0)).collect();
    Ok(resolve_conventions(&sys, &conj, 0.5, &mu, &points, 1e-10))
}

/// Recovers the Jacobi corner α from a transform value `F` at `z`, inverting
/// the frozen form: `α = z − β (F p_{n−1} + q_{n−1}) / (F p_n + q_n)`.
pub fn alpha_from_transform(sys: &OrthoPolySystem, conj: &ConjugateSystem, f: Complex64, z: Complex64) -> f64 {
    let n = sys.order();
    let beta = sys.offdiag[n - 1];
    let num = f * sys.coeffs[n - 1].eval_complex(z) + conj.coeffs[n - 1].eval_complex(z);
    let den = f * sys.coeffs[n].eval_complex(z) + conj.coeffs[n].eval_complex(z);
    (z - num / den * beta).re
}

/// `τ` of the Stieltjes extension whose orthonormal corner is `alpha`.
pub fn tau_for_alpha(seq: &MomentSequence, alpha: f64, tol: f64) -> Result<f64> {
    Ok(alpha - StieltjesCore::new(seq, tol)?.alpha_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-10;

    fn seq(v: &[f64]) -> MomentSequence {
        MomentSequence::new(v.to_vec()).unwrap()
    }

    fn bern() -> MomentSequence {
        seq(&[1.0, 0.5, 0.5])
    }

    fn atoms_close(mu: &DiscreteMeasure, expect: &[(f64, f64)], eps: f64) {
        assert_eq!(mu.len(), expect.len(), "{mu:?}");
        for ((t, w), (et, ew)) in mu.iter().zip(expect) {
            assert!((t - et).abs() <= eps && (w - ew).abs() <= eps, "{mu:?} vs {expect:?}");
        }
    }

    #[test]
    fn stieltjes_examples() {
        atoms_close(&solve_stieltjes(&bern(), 0.0, TOL).unwrap(), &[(0.0, 0.5), (1.0, 0.5)], 1e-14);
        let mu = solve_stieltjes(&bern(), 2.0, TOL).unwrap();
        let r5 = 5f64.sqrt();
        assert_relative_eq!(mu.atoms()[0], (3.0 - r5) / 2.0, max_relative = 1e-13);
        assert_relative_eq!(mu.atoms()[1], (3.0 + r5) / 2.0, max_relative = 1e-13);
        for tau in [0.0, 3.0] {
            atoms_close(&solve_stieltjes(&seq(&[1.0, 1.0, 1.0]), tau, TOL).unwrap(), &[(1.0, 1.0)], 1e-14);
        }
        assert_eq!(degenerate_rank(&seq(&[1.0, 1.0, 1.0]), TOL).unwrap(), Some(1));
        assert!(matches!(solve_stieltjes(&bern(), -1.0, TOL), Err(Error::InvalidArgument(_))));
        assert!(matches!(solve_stieltjes(&seq(&[1.0, -1.0, 1.0]), 0.0, TOL), Err(Error::Unsolvable { .. })));
    }

    #[test]
    fn tau_range_examples() {
        let r = tau_range_hausdorff(&bern(), 2.0, TOL).unwrap();
        assert_eq!(r.shape, RangeShape::Segment);
        assert_eq!(r.lo, 0.0);
        assert_relative_eq!(r.hi, 4.0 / 3.0, max_relative = 1e-12);
        let r = tau_range_hausdorff(&bern(), 1.0, TOL).unwrap();
        assert!(r.unique && r.lo == 0.0 && r.hi == 0.0);
        assert!(tau_range_hausdorff(&bern(), 0.9, TOL).unwrap().is_empty());
        assert!(tau_range_hausdorff(&bern(), 0.4, TOL).unwrap().is_empty());
    }

    #[test]
    fn hausdorff_examples() {
        atoms_close(&solve_hausdorff(&bern(), 1.0, 0.0, TOL).unwrap(), &[(0.0, 0.5), (1.0, 0.5)], 1e-12);
        let mu = solve_hausdorff(&bern(), 2.0, 4.0 / 3.0, TOL).unwrap();
        assert!((mu.atoms()[1] - 2.0).abs() < 1e-12);
        assert!(matches!(solve_hausdorff(&bern(), 2.0, 2.0, TOL), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn gap_examples() {
        assert!(gap_solvability(&seq(&[1.0, 0.5, 2.5]), 1.0, TOL).unwrap().verdict());
        let r = gap_solvability(&seq(&[1.0, 0.5, 0.25]), 1.0, TOL).unwrap();
        assert!(!r.verdict());
        // ⅓(δ_{−1} + δ_2 + δ_3)
        let t = 1.0 / 3.0;
        let r = gap_solvability(&seq(&[1.0, 4.0 * t, 14.0 * t, 34.0 * t, 98.0 * t]), 1.0, TOL).unwrap();
        assert!(r.verdict(), "{r}");
        assert_eq!(r.condition(names::GAP_GUARD).unwrap().witness, Witness::Count { value: 0 });

        let range = alpha_range(&seq(&[1.0, 0.5, 2.5]), 1.0, TOL).unwrap();
        assert_eq!(range.shape, RangeShape::Segment);
        assert!((range.lo + 3.5).abs() < 1e-12 && (range.hi - 4.5).abs() < 1e-12);

        let s = seq(&[1.0, 0.5, 2.5]);
        atoms_close(&solve_gap(&s, 1.0, 0.5, TOL).unwrap(), &[(-1.0, 0.5), (2.0, 0.5)], 1e-14);
        assert!(solve_gap(&s, 1.0, 4.5, TOL).unwrap().atoms()[0].abs() < 1e-12);
        assert!((solve_gap(&s, 1.0, -3.5, TOL).unwrap().atoms()[1] - 1.0).abs() < 1e-12);
        assert!(matches!(solve_gap(&s, 1.0, 5.0, TOL), Err(Error::OutOfRange { .. })));
        let inside = gap_measure(&s, 5.0, TOL).unwrap();
        assert!(inside.atoms().iter().any(|&t| t > 0.0 && t < 1.0));
    }

    #[test]
    fn gap_order_zero() {
        let r = alpha_range(&seq(&[2.0]), 1.0, TOL).unwrap();
        assert_eq!(r.shape, RangeShape::Exterior);
        assert_eq!((r.lo, r.hi), (0.0, 1.0));
    }

    #[test]
    fn local_examples() {
        let p = LocalProblem::new(seq(&[2.0, 1.0, 3.0]), bern(), 1.0).unwrap();
        let mu = solve_local(&p, 0.0, 0.5, TOL).unwrap();
        atoms_close(&mu, &[(-1.0, 0.5), (0.0, 0.5), (1.0, 0.5), (2.0, 0.5)], 1e-12);

        let p = LocalProblem::new(bern(), bern(), 1.0).unwrap();
        atoms_close(&solve_local(&p, 0.0, 0.0, TOL).unwrap(), &[(0.0, 0.5), (1.0, 0.5)], 1e-12);

        let p = LocalProblem::new(seq(&[0.5, 0.25, 0.25]), bern(), 1.0).unwrap();
        assert!(matches!(solve_local(&p, 0.0, 0.0, TOL), Err(Error::Unsolvable { .. })));

        assert!(LocalProblem::new(seq(&[1.0, 0.5, 0.5, 0.5, 0.5]), bern(), 1.0).is_err());
    }

    #[test]
    fn conventions_fit_matches_frozen() {
        assert_eq!(fit_conventions(TOL).unwrap(), Some(FROZEN));
    }

    #[test]
    fn range_membership() {
        let r = ParameterRange::exterior(RangeKind::Alpha, 0.0, 1.0);
        assert!(r.contains(-5.0, 0.0) && r.contains(1.0, 0.0) && !r.contains(0.5, 1e-10));
        assert!(r.representative().is_some_and(|x| r.contains(x, 0.0)));
        let s = ParameterRange::segment(RangeKind::Tau, 0.0, 2.0);
        assert!(s.contains(2.0 + 1e-12, 1e-10) && !s.contains(2.1, 1e-10));
        assert_eq!(s.to_string(), "τ ∈ [0, 2]");
    }
}

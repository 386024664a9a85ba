//! Brute-force ground truth: seeded random measures, compensated moment
//! sums, Stieltjes transforms, residual checks and an eigenvalue scan of the
//! admissible gap parameters.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::gap_jacobi_from;
use crate::linalg::{sym_eigen, Matrix};
use crate::measure::DiscreteMeasure;
use crate::moments::{hankel, MomentSequence};
use crate::orthopoly::build_system;
use crate::poly::Poly;
use crate::solvers::{ParameterRange, RangeKind};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SupportMode {
    /// Atoms in `[0, 5]`.
    HalfAxis,
    /// Atoms in `[0, Λ]`.
    Interval { lambda: f64 },
    /// Atoms in `[−W, 0] ∪ [Λ, Λ + W]`, `W = 2 max(1, Λ)`.
    GapComplement { lambda: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub support: SupportMode,
    pub atom_count: usize,
    pub seed: u64,
}

/// Deterministic stratified measure: one atom per equal-length bin of the
/// support, placed in the middle half of its bin, masses in `[0.2, 1]`.
pub fn random_measure(spec: &MeasureSpec) -> Result<DiscreteMeasure> {
    let n = spec.atom_count;
    if n == 0 {
        return Err(Error::InvalidArgument("atom_count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (length, place): (f64, Box<dyn Fn(f64) -> f64>) = match spec.support {
        SupportMode::HalfAxis => (5.0, Box::new(|x| x)),
        SupportMode::Interval { lambda } => (lambda, Box::new(|x| x)),
        SupportMode::GapComplement { lambda } => {
            let w = 2.0 * lambda.max(1.0);
            (2.0 * w, Box::new(move |x| if x < w { x - w } else { lambda + (x - w) }))
        }
    };
    if !(length > 0.0) {
        return Err(Error::InvalidArgument("support must have positive length".into()));
    }
    let bin = length / n as f64;
    let pairs = (0..n)
        .map(|j| {
            let u: f64 = rng.gen();
            let x = bin * (j as f64 + 0.25 + 0.5 * u);
            (place(x), rng.gen_range(0.2..=1.0))
        })
        .collect();
    DiscreteMeasure::from_pairs(pairs)
}

/// Neumaier-compensated `Σ μ_j t_j^k` for `k = 0..=k_max`.
pub fn raw_moments(measure: &DiscreteMeasure, k_max: usize) -> Vec<f64> {
    (0..=k_max)
        .map(|k| {
            let mut sum = 0.0f64;
            let mut comp = 0.0f64;
            for (t, w) in measure.iter() {
                let x = w * t.powi(k as i32);
                let s = sum + x;
                comp += if sum.abs() >= x.abs() { (sum - s) + x } else { (x - s) + sum };
                sum = s;
            }
            sum + comp
        })
        .collect()
}

/// Moments `b_0..b_K`; `K` must be even.
pub fn moments_of(measure: &DiscreteMeasure, k: usize) -> Result<MomentSequence> {
    if k % 2 != 0 {
        return Err(Error::InvalidArgument(format!("moment count {} is even", k + 1)));
    }
    MomentSequence::new(raw_moments(measure, k))
}

/// `Σ μ_j / (t_j − z)`.
pub fn transform(measure: &DiscreteMeasure, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, w) in measure.iter() {
        let d = Complex64::new(t, 0.0) - z;
        if d.norm() == 0.0 {
            return Err(Error::Pole {
                what: "transform denominator",
                at: t,
            });
        }
        acc += w / d;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max_residual: f64,
    pub worst_index: usize,
    pub passed: bool,
}

/// Max over `k` of `|Σ μ t^k − b_k| / max(1, |b_k|)`.
pub fn verify_solution(measure: &DiscreteMeasure, seq: &MomentSequence, tol: f64) -> Residual {
    let got = raw_moments(measure, seq.len() - 1);
    let (worst_index, max_residual) = got
        .iter()
        .zip(seq.values())
        .map(|(g, b)| (g - b).abs() / b.abs().max(1.0))
        .enumerate()
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    Residual {
        max_residual,
        worst_index,
        passed: max_residual <= tol,
    }
}

/// Determinant formula for the orthonormal polynomial `d_k`: the cofactor
/// expansion of `Γ_{k−1}` bordered by the row `(1, t, ..., t^k)`, divided by
/// `√(Δ_k Δ_{k−1})`.
pub fn determinant_polynomial(seq: &MomentSequence, k: usize) -> Result<Poly> {
    let b = seq.values();
    let dk = hankel(seq, 0, k)?.entries.determinant();
    let dk1 = if k == 0 { 1.0 } else { hankel(seq, 0, k - 1)?.entries.determinant() };
    let norm = (dk * dk1).sqrt();
    if !(norm > 0.0) {
        return Err(Error::Singular("Γ_k"));
    }
    let coeffs = (0..=k)
        .map(|j| {
            // minor of the bordered matrix with the last row and column j removed
            let minor = Matrix::from_fn(k, k, |r, c| {
                let col = if c < j { c } else { c + 1 };
                b[r + col]
            });
            let det = if k == 0 { 1.0 } else { minor.determinant() };
            let sign = if (k + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * det / norm
        })
        .collect();
    Ok(Poly::new(coeffs))
}

fn eig_counts(j: &Matrix, lambda: f64) -> (usize, usize) {
    let vals = sym_eigen(j).0;
    let at_most_zero = vals.iter().filter(|&&v| v <= 0.0).count();
    let below_lambda = vals.iter().filter(|&&v| v < lambda).count();
    (at_most_zero, below_lambda)
}

/// Location where a nonincreasing step function of α drops, if it does
/// within the search window.
fn find_drop(count: &dyn Fn(f64) -> usize, r0: f64, grid: usize) -> Option<f64> {
    let mut r = r0;
    let (mut lo, mut hi) = (-r, r);
    let mut found = false;
    for _ in 0..60 {
        if count(-r) != count(r) {
            lo = -r;
            hi = r;
            found = true;
            break;
        }
        r *= 2.0;
    }
    if !found {
        return None;
    }
    let c_lo = count(lo);
    let steps = grid.max(2);
    let h = (hi - lo) / steps as f64;
    for i in 1..=steps {
        let x = lo + h * i as f64;
        if count(x) != c_lo {
            hi = x;
            lo = x - h;
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-14 * mid.abs().max(1.0) {
            break;
        }
        if count(mid) == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The set of α for which the gap Jacobi matrix has no eigenvalue in
/// `(0, Λ)`, found from eigenvalue counts alone: `#{λ ≤ 0}` and `#{λ < Λ}`
/// each drop exactly once as α grows, and admissibility is constant between
/// the drop points.
pub fn scan_alpha(seq: &MomentSequence, lambda: f64, grid: usize, tol: f64) -> Result<ParameterRange> {
    if !(lambda > 0.0) {
        return Ok(ParameterRange::unbounded(RangeKind::Alpha).with_notes("empty gap: every α admissible"));
    }
    let sys = match build_system(seq, tol) {
        Ok(s) => s,
        Err(Error::Degenerate { .. }) => {
            return Ok(ParameterRange::empty(RangeKind::Alpha, "Γ̃_n is not positive definite"))
        }
        Err(e) => return Err(e),
    };
    let at = |alpha: f64| eig_counts(&gap_jacobi_from(&sys, alpha).jacobi, lambda);
    let j0 = gap_jacobi_from(&sys, 0.0).jacobi;
    let gersh = (0..j0.nrows())
        .map(|i| j0.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let r0 = gersh + lambda + 1.0;

    let d0 = find_drop(&|a| at(a).0, r0, grid);
    let dl = find_drop(&|a| at(a).1, r0, grid);
    let mut cuts: Vec<f64> = d0.into_iter().chain(dl).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));

    let admissible = |a: f64| {
        let (z, l) = at(a);
        l == z
    };
    let far = 4.0 * (r0 + cuts.iter().fold(0.0f64, |m, c| m.max(c.abs())));
    let probes: Vec<f64> = match cuts.as_slice() {
        [] => vec![0.0],
        [c] => vec![c - far, c + far],
        [a, b, ..] => vec![a - far, 0.5 * (a + b), b + far],
    };
    let flags: Vec<bool> = probes.iter().map(|&p| admissible(p)).collect();
    let neg = f64::NEG_INFINITY;
    let pos = f64::INFINITY;
    let range = match (cuts.as_slice(), flags.as_slice()) {
        (_, [true]) => ParameterRange::unbounded(RangeKind::Alpha),
        (_, [false]) => ParameterRange::empty(RangeKind::Alpha, "no admissible α"),
        ([c], [l, r]) => match (l, r) {
            (true, true) => ParameterRange::unbounded(RangeKind::Alpha),
            (true, false) => ParameterRange::segment(RangeKind::Alpha, neg, *c),
            (false, true) => ParameterRange::segment(RangeKind::Alpha, *c, pos),
            (false, false) => ParameterRange::empty(RangeKind::Alpha, "no admissible α"),
        },
        ([a, b, ..], [l, m, r]) => match (l, m, r) {
            (false, false, false) => ParameterRange::empty(RangeKind::Alpha, "no admissible α"),
            (true, false, false) => ParameterRange::segment(RangeKind::Alpha, neg, *a),
            (false, true, false) => ParameterRange::segment(RangeKind::Alpha, *a, *b),
            (false, false, true) => ParameterRange::segment(RangeKind::Alpha, *b, pos),
            (true, true, false) => ParameterRange::segment(RangeKind::Alpha, neg, *b),
            (false, true, true) => ParameterRange::segment(RangeKind::Alpha, *a, pos),
            (true, false, true) => ParameterRange::exterior(RangeKind::Alpha, *a, *b),
            (true, true, true) => ParameterRange::unbounded(RangeKind::Alpha),
        },
        _ => unreachable!("probe count matches cut count"),
    };
    Ok(range.with_notes("spectral scan"))
}

/// Problem families exercised by [`roundtrip`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Stieltjes,
    Hausdorff,
    Gap,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Stieltjes, Problem::Hausdorff, Problem::Gap];
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTrip {
    pub problem: Problem,
    pub seed: u64,
    pub order: usize,
    /// `τ` or `α` used for the solve.
    pub parameter: f64,
    pub source: DiscreteMeasure,
    pub solution: DiscreteMeasure,
    pub residual: Residual,
}

/// Random canonical instance of order `1 + seed % 6` with `order + 1`
/// atoms, solved at an interior parameter and checked against the moments.
pub fn roundtrip(problem: Problem, seed: u64, lambda: f64, tol: f64) -> Result<RoundTrip> {
    use crate::orthopoly::conjugate_system;
    use crate::solvers::{alpha_from_transform, solve_gap, solve_hausdorff, solve_stieltjes, tau_range_hausdorff};

    let order = 1 + (seed % 6) as usize;
    let support = match problem {
        Problem::Stieltjes => SupportMode::HalfAxis,
        Problem::Hausdorff => SupportMode::Interval { lambda },
        Problem::Gap => SupportMode::GapComplement { lambda },
    };
    let source = random_measure(&MeasureSpec {
        support,
        atom_count: order + 1,
        seed,
    })?;
    let seq = moments_of(&source, 2 * order)?;
    let (parameter, solution) = match problem {
        Problem::Stieltjes => (1.0, solve_stieltjes(&seq, 1.0, tol)?),
        Problem::Hausdorff => {
            let range = tau_range_hausdorff(&seq, lambda, tol)?;
            let tau = range.representative().ok_or_else(|| Error::Unsolvable {
                reason: range.notes.clone(),
                report: None,
            })?;
            (tau, solve_hausdorff(&seq, lambda, tau, tol)?)
        }
        Problem::Gap => {
            // The source is itself canonical; recover its corner from its
            // transform rather than picking a range point, since far-out α
            // carry atoms too light to survive the mass cutoff.
            let sys = build_system(&seq, tol)?;
            let conj = conjugate_system(&sys, &seq);
            let z = Complex64::new(0.0, 1.0);
            let alpha = alpha_from_transform(&sys, &conj, transform(&source, z)?, z);
            (alpha, solve_gap(&seq, lambda, alpha, tol)?)
        }
    };
    let residual = verify_solution(&solution, &seq, 1e-8);
    Ok(RoundTrip {
        problem,
        seed,
        order,
        parameter,
        source,
        solution,
        residual,
    })
}

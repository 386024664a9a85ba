//! Moment sequences, Hankel sections and the positivity / kernel tests that
//! decide solvability of the truncated Stieltjes and Hausdorff problems, plus
//! the necessary conditions of the gap problem.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_symmetric, scale, sym_eigen, Matrix};
use crate::measure::lossless_f64;

/// Condition names used in reports.
pub mod names {
    pub const HANKEL_PSD: &str = "Γ_m PSD";
    pub const KERNEL_0_TO_2: &str = "ker Γ ⊂ ker Γ(2)";
    pub const SHIFTED_PSD: &str = "Γ(1) PSD";
    pub const KERNEL_1_TO_2: &str = "ker Γ(1) ⊂ ker Γ(2)";
    pub const WINDOW_PSD: &str = "ΛΓ−Γ(1) PSD";
    pub const HAUSDORFF_RATIO: &str = "Hausdorff ratio ≤ 1";
    pub const GAP_HANKEL_PD: &str = "Γ̃_n PD";
    pub const GAP_WINDOW_PD: &str = "Γ(2)−ΛΓ(1) PSD";
    pub const GAP_FIRST: &str = "h_n(Λ,0)/(M(Λ)M(0)) > 0";
    pub const GAP_TRINOMIAL: &str = "W has distinct real roots";
    pub const GAP_GUARD: &str = "p_{n−1} has < 2 zeros in (0,Λ)";
}

/// A finite list of real power moments `b_0, ..., b_{2m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() % 2 == 0 {
            return Err(Error::InvalidSequence(format!(
                "expected an odd number of moments, got {}",
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSequence(format!("moment {k} is not finite")));
        }
        Ok(MomentSequence { values })
    }

    /// The order `m`, with `2m + 1` stored values.
    pub fn order(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// `b_1, ..., b_{2m-1}`: the moments of `t dσ(t)` up to order `m - 1`.
    pub fn shifted(&self) -> Result<MomentSequence> {
        if self.order() == 0 {
            return Err(Error::InvalidSequence("order 0 has no shifted sequence".into()));
        }
        MomentSequence::new(self.values[1..self.values.len() - 1].to_vec())
    }

    /// The leading `2r + 1` moments.
    pub fn truncated(&self, r: usize) -> Result<MomentSequence> {
        if r > self.order() {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate order {} to {r}",
                self.order()
            )));
        }
        MomentSequence::new(self.values[..2 * r + 1].to_vec())
    }
}

impl TryFrom<Vec<f64>> for MomentSequence {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        MomentSequence::new(v)
    }
}

impl From<MomentSequence> for Vec<f64> {
    fn from(s: MomentSequence) -> Vec<f64> {
        s.values
    }
}

/// `(size+1) x (size+1)` Hankel section `values[j + k + shift]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelMatrix {
    pub entries: Matrix,
    pub shift: usize,
    pub size: usize,
}

pub fn hankel(seq: &MomentSequence, shift: usize, size: usize) -> Result<HankelMatrix> {
    let max = seq.len() - 1;
    if shift + 2 * size > max {
        return Err(Error::IndexOutOfRange { shift, size, max });
    }
    let n = size + 1;
    let v = seq.values();
    let entries = Matrix::from_fn(n, n, |j, k| v[j + k + shift]);
    Ok(HankelMatrix {
        entries,
        shift,
        size,
    })
}

/// Smallest eigenvalue and the tolerance scale of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Definiteness {
    #[serde(with = "lossless_f64")]
    pub min_eigenvalue: f64,
    pub scale: f64,
}

impl Definiteness {
    pub fn of(m: &Matrix) -> Result<Self> {
        ensure_symmetric(m)?;
        let min_eigenvalue = sym_eigen(m).0.first().copied().unwrap_or(f64::INFINITY);
        Ok(Definiteness {
            min_eigenvalue,
            scale: scale(m),
        })
    }

    pub fn semidefinite(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol * self.scale
    }

    pub fn definite(&self, tol: f64) -> bool {
        self.min_eigenvalue > tol * self.scale
    }

    fn witness(&self, tol: f64) -> Witness {
        Witness::Spectrum {
            min_eigenvalue: self.min_eigenvalue,
            semidefinite: self.semidefinite(tol),
            definite: self.definite(tol),
        }
    }
}

/// `λ_min(M) ≥ −tol·max(1, ‖M‖_∞)`, together with `λ_min`.
pub fn is_psd(m: &Matrix, tol: f64) -> Result<(bool, f64)> {
    let d = Definiteness::of(m)?;
    Ok((d.semidefinite(tol), d.min_eigenvalue))
}

/// Checks that every vector annihilating the quadratic form of the
/// `src_shift` Hankel section of size `r` also annihilates the `dst_shift`
/// section, for every `r ≤ m − 1`. Returns a normalized violating vector
/// when the implication fails.
pub fn kernel_implication(
    seq: &MomentSequence,
    src_shift: usize,
    dst_shift: usize,
    tol: f64,
) -> Result<(bool, Option<Vec<f64>>)> {
    let m = seq.order();
    for r in 0..m {
        let src = hankel(seq, src_shift, r)?.entries;
        let dst = hankel(seq, dst_shift, r)?.entries;
        let (vals, vecs) = sym_eigen(&src);
        let cut = tol * scale(&src);
        let null: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].abs() <= cut).collect();
        if null.is_empty() {
            continue;
        }
        let basis = Matrix::from_fn(r + 1, null.len(), |i, j| vecs[(i, null[j])]);
        // The destination form must vanish on the whole null space, so look
        // at its restriction rather than at individual basis vectors.
        let restricted = basis.transpose() * &dst * &basis;
        let (rv, rvecs) = sym_eigen(&restricted);
        let (idx, worst) = rv
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.abs()))
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if worst > tol * scale(&dst) {
            let w = &basis * rvecs.column(idx);
            let norm = w.norm();
            return Ok((false, Some(w.iter().map(|x| x / norm).collect())));
        }
    }
    Ok((true, None))
}

/// Evidence attached to a condition verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    None,
    Vector {
        values: Vec<f64>,
    },
    Spectrum {
        #[serde(with = "lossless_f64")]
        min_eigenvalue: f64,
        semidefinite: bool,
        definite: bool,
    },
    Scalar {
        #[serde(with = "lossless_f64")]
        value: f64,
    },
    Interval {
        #[serde(with = "lossless_f64")]
        lo: f64,
        #[serde(with = "lossless_f64")]
        hi: f64,
    },
    Count {
        value: usize,
    },
    Note {
        text: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub witness: Witness,
}

impl Condition {
    pub fn new(name: &str, passed: bool, witness: Witness) -> Self {
        Condition {
            name: name.to_string(),
            passed,
            witness,
        }
    }
}

/// Per-condition verdicts; the overall verdict is their conjunction.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    verdict: bool,
    conditions: Vec<Condition>,
}

impl SolvabilityReport {
    pub fn new(conditions: Vec<Condition>) -> Self {
        let verdict = conditions.iter().all(|c| c.passed);
        SolvabilityReport {
            verdict,
            conditions,
        }
    }

    pub fn verdict(&self) -> bool {
        self.verdict
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn push(&mut self, c: Condition) {
        self.verdict &= c.passed;
        self.conditions.push(c);
    }

    pub fn extend(&mut self, other: SolvabilityReport) {
        for c in other.conditions {
            self.push(c);
        }
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> Vec<String> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect()
    }
}

impl fmt::Display for SolvabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", if self.verdict { "solvable" } else { "unsolvable" })?;
        for c in &self.conditions {
            writeln!(f, "  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name)?;
        }
        Ok(())
    }
}

fn psd_condition(name: &str, m: &Matrix, tol: f64, strict: bool) -> Result<Condition> {
    let d = Definiteness::of(m)?;
    let passed = if strict { d.definite(tol) } else { d.semidefinite(tol) };
    Ok(Condition::new(name, passed, d.witness(tol)))
}

fn kernel_condition(name: &str, seq: &MomentSequence, src: usize, tol: f64) -> Result<Condition> {
    let (holds, w) = kernel_implication(seq, src, 2, tol)?;
    let witness = w.map_or(Witness::None, |values| Witness::Vector { values });
    Ok(Condition::new(name, holds, witness))
}

/// Conditions a)–c): solvability of the truncated Stieltjes problem on `[0, ∞)`.
pub fn check_stieltjes(seq: &MomentSequence, tol: f64) -> SolvabilityReport {
    let m = seq.order();
    let run = || -> Result<SolvabilityReport> {
        let mut conds = vec![psd_condition(names::HANKEL_PSD, &hankel(seq, 0, m)?.entries, tol, false)?];
        if m == 0 {
            conds.push(Condition::new(names::KERNEL_0_TO_2, true, Witness::None));
            conds.push(Condition::new(names::SHIFTED_PSD, true, Witness::None));
            conds.push(Condition::new(names::KERNEL_1_TO_2, true, Witness::None));
        } else {
            conds.push(kernel_condition(names::KERNEL_0_TO_2, seq, 0, tol)?);
            conds.push(psd_condition(names::SHIFTED_PSD, &hankel(seq, 1, m - 1)?.entries, tol, false)?);
            conds.push(kernel_condition(names::KERNEL_1_TO_2, seq, 1, tol)?);
        }
        Ok(SolvabilityReport::new(conds))
    };
    // Hankel sections of a valid sequence are always in range and symmetric.
    run().expect("Hankel sections of a valid sequence")
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("Λ must be positive and finite, got {lambda}")));
    }
    Ok(())
}

/// `ΛΓ_{m−1} − Γ(1)_{m−1}`.
pub fn window_matrix(seq: &MomentSequence, lambda: f64) -> Result<Matrix> {
    let m = seq.order();
    if m == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    Ok(hankel(seq, 0, m - 1)?.entries * lambda - hankel(seq, 1, m - 1)?.entries)
}

/// Stieltjes conditions plus d): `ΛΓ_{m−1} − Γ(1)_{m−1}` PSD.
pub fn check_hausdorff_necessary(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<SolvabilityReport> {
    check_lambda(lambda)?;
    let mut report = check_stieltjes(seq, tol);
    let cond = if seq.order() == 0 {
        Condition::new(names::WINDOW_PSD, true, Witness::None)
    } else {
        psd_condition(names::WINDOW_PSD, &window_matrix(seq, lambda)?, tol, false)?
    };
    report.push(cond);
    Ok(report)
}

/// `Γ̃(2)_{n−2} − ΛΓ̃(1)_{n−2}`; empty when `n < 2`.
pub fn gap_window_matrix(seq: &MomentSequence, lambda: f64) -> Result<Matrix> {
    let n = seq.order();
    if n < 2 {
        return Ok(Matrix::zeros(0, 0));
    }
    Ok(hankel(seq, 2, n - 2)?.entries - hankel(seq, 1, n - 2)?.entries * lambda)
}

/// Necessary conditions for the Hamburger problem with gap `(0, Λ)`:
/// `Γ̃_n` and `Γ̃(2)_{n−2} − ΛΓ̃(1)_{n−2}` positive definite.
pub fn check_gap_necessary(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<SolvabilityReport> {
    check_lambda(lambda)?;
    let n = seq.order();
    let mut conds = vec![psd_condition(names::GAP_HANKEL_PD, &hankel(seq, 0, n)?.entries, tol, true)?];
    conds.push(if n < 2 {
        Condition::new(names::GAP_WINDOW_PD, true, Witness::None)
    } else {
        psd_condition(names::GAP_WINDOW_PD, &gap_window_matrix(seq, lambda)?, tol, true)?
    });
    Ok(SolvabilityReport::new(conds))
}

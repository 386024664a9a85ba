//! Orthonormal polynomials of a moment functional, their recurrence
//! coefficients, second-kind (conjugate) polynomials and the
//! Christoffel–Darboux kernel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lower_inverse, partial_cholesky, scale, Matrix};
use crate::moments::{hankel, MomentSequence};
use crate::poly::Poly;

/// Orthonormal polynomials `d_0, ..., d_r` with respect to the Hankel form of
/// a moment sequence, together with the three-term recurrence
/// `t d_k = β_{k−1} d_{k−1} + a_k d_k + β_k d_{k+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthoPolySystem {
    /// `d_k` in the monomial basis, lowest degree first.
    pub coeffs: Vec<Poly>,
    /// `a_k`, available where the moments determine it (`k < m` for a full system).
    pub diag: Vec<f64>,
    /// `β_k > 0`.
    pub offdiag: Vec<f64>,
    /// Hankel determinants `Δ_0, ..., Δ_r` (`Δ_{−1} = 1` is implicit).
    pub deltas: Vec<f64>,
    /// Lower-triangular `C` with `C Γ Cᵀ = I`; row `k` holds the coefficients of `d_k`.
    #[serde(skip_serializing)]
    pub transform: Matrix,
}

impl OrthoPolySystem {
    /// Highest polynomial index.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        self.coeffs[k].eval(x)
    }

    pub fn delta(&self, k: isize) -> f64 {
        if k < 0 {
            1.0
        } else {
            self.deltas[k as usize]
        }
    }

    /// The leading `n x n` Jacobi matrix (needs `n ≤ diag.len()`).
    pub fn jacobi(&self, n: usize) -> Matrix {
        crate::linalg::tridiagonal(&self.diag[..n], &self.offdiag[..n.saturating_sub(1)])
    }
}

/// Second-kind polynomials `e_k(z) = ∫ (d_k(t) − d_k(z)) / (t − z) dσ(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateSystem {
    pub coeffs: Vec<Poly>,
}

/// `det Γ_k` via LU; `Δ_{−1} = 1`.
pub fn delta(seq: &MomentSequence, k: isize) -> Result<f64> {
    if k < -1 || k > seq.order() as isize {
        return Err(Error::InvalidArgument(format!(
            "determinant index {k} outside −1..={}",
            seq.order()
        )));
    }
    if k == -1 {
        return Ok(1.0);
    }
    Ok(hankel(seq, 0, k as usize)?.entries.determinant())
}

/// Runs the pivot-monitored Cholesky and returns the system up to the
/// detected numerical rank, without failing on rank deficiency.
pub fn build_partial(seq: &MomentSequence, tol: f64) -> Result<OrthoPolySystem> {
    let gamma = hankel(seq, 0, seq.order())?.entries;
    let pc = partial_cholesky(&gamma, tol * scale(&gamma));
    let r = pc.rank;
    let l = pc.lower;
    let c = lower_inverse(&l);

    let coeffs = (0..r)
        .map(|k| Poly::new((0..=k).map(|j| c[(k, j)]).collect()))
        .collect();
    let deltas = pc
        .pivots
        .iter()
        .scan(1.0, |acc, p| {
            *acc *= p;
            Some(*acc)
        })
        .collect();
    let offdiag = (0..r.saturating_sub(1))
        .map(|k| l[(k + 1, k + 1)] / l[(k, k)])
        .collect();

    let b = seq.values();
    let diag = (0..r.min(seq.order()))
        .map(|k| {
            let mut s = 0.0;
            for i in 0..=k {
                for j in 0..=k {
                    s += c[(k, i)] * c[(k, j)] * b[i + j + 1];
                }
            }
            s
        })
        .collect();

    Ok(OrthoPolySystem {
        coeffs,
        diag,
        offdiag,
        deltas,
        transform: c,
    })
}

/// Orthonormal system of `seq`; fails with [`Error::Degenerate`] when
/// `Γ_m` is numerically singular.
pub fn build_system(seq: &MomentSequence, tol: f64) -> Result<OrthoPolySystem> {
    let sys = build_partial(seq, tol)?;
    let dim = seq.order() + 1;
    if sys.coeffs.len() < dim {
        return Err(Error::Degenerate {
            rank: sys.coeffs.len(),
            dim,
        });
    }
    Ok(sys)
}

/// System of the shifted moments `b_1, ..., b_{2m−1}` (the functional `t dσ`).
pub fn shifted_system(seq: &MomentSequence, tol: f64) -> Result<OrthoPolySystem> {
    build_system(&seq.shifted()?, tol)
}

/// Conjugate polynomials computed exactly from the moments: the coefficient
/// of `z^p` in `e_k` is `Σ_{j>p} c_{kj} b_{j−1−p}`.
pub fn conjugate_system(sys: &OrthoPolySystem, seq: &MomentSequence) -> ConjugateSystem {
    let b = seq.values();
    let coeffs = sys
        .coeffs
        .iter()
        .map(|d| {
            let c = d.coeffs();
            let k = c.len() - 1;
            Poly::new(
                (0..k)
                    .map(|p| ((p + 1)..=k).map(|j| c[j] * b[j - 1 - p]).sum())
                    .collect(),
            )
        })
        .collect();
    ConjugateSystem { coeffs }
}

/// `h_s(λ, μ) = Σ_{k≤s} d_k(λ) d_k(μ)`.
pub fn cd_kernel(sys: &OrthoPolySystem, s: usize, lambda: f64, mu: f64) -> Result<f64> {
    if s > sys.order() {
        return Err(Error::InvalidArgument(format!(
            "kernel index {s} exceeds system order {}",
            sys.order()
        )));
    }
    Ok((0..=s).map(|k| sys.eval(k, lambda) * sys.eval(k, mu)).sum())
}

/// Closed Christoffel–Darboux form
/// `β_s (d_s(λ) d_{s+1}(μ) − d_s(μ) d_{s+1}(λ)) / (μ − λ)`.
pub fn cd_kernel_difference(sys: &OrthoPolySystem, s: usize, lambda: f64, mu: f64) -> Result<f64> {
    if s + 1 > sys.order() {
        return Err(Error::InvalidArgument(format!(
            "difference form needs d_{} but the system has order {}",
            s + 1,
            sys.order()
        )));
    }
    if lambda == mu {
        return Err(Error::Pole {
            what: "λ − μ",
            at: lambda,
        });
    }
    let (ds_l, ds_m) = (sys.eval(s, lambda), sys.eval(s, mu));
    let (dn_l, dn_m) = (sys.eval(s + 1, lambda), sys.eval(s + 1, mu));
    Ok(sys.offdiag[s] * (ds_l * dn_m - ds_m * dn_l) / (mu - lambda))
}

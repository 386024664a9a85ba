//! Self-adjoint extension matrices of the moment operator and the discrete
//! measures they generate.
//!
//! Stieltjes/Hausdorff extensions live on polynomials of degree `≤ m` with the
//! Hankel inner product; gap extensions are Jacobi matrices in the orthonormal
//! basis. In both cases the orthonormal-basis form is a Jacobi matrix whose
//! last diagonal entry carries the free parameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_symmetric, min_eigenvalue, scale, spd_solve, sym_eigen, tridiagonal, Matrix, Vector};
use crate::measure::DiscreteMeasure;
use crate::moments::{hankel, MomentSequence};
use crate::orthopoly::{build_system, cd_kernel, OrthoPolySystem};
use crate::poly::Poly;

/// Relative mass below which spectral atoms are discarded.
pub const MASS_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionKind {
    StieltjesH,
    GapAlpha,
}

/// A realized extension. `matrix` acts on coordinate vectors of the space
/// whose inner product is `gram`; `jacobi` is the same operator written in
/// the orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSpec {
    pub kind: ExtensionKind,
    /// `H` for Stieltjes extensions, `α` for gap extensions.
    pub parameter: f64,
    pub matrix: Matrix,
    pub gram: Matrix,
    pub jacobi: Matrix,
}

impl ExtensionSpec {
    /// `‖gram·matrix − (gram·matrix)ᵀ‖_max`, zero for a self-adjoint extension.
    pub fn gram_asymmetry(&self) -> f64 {
        let gm = &self.gram * &self.matrix;
        (&gm - gm.transpose()).amax()
    }
}

/// Pieces of the Stieltjes extension that do not depend on the corner.
#[derive(Clone, Debug)]
pub struct StieltjesCore {
    pub sys: OrthoPolySystem,
    /// Last diagonal entry of the orthonormal form when the corner `H` is 0.
    pub base: f64,
    /// `(Γ_m^{−1})_{mm}`, the sensitivity of the last diagonal entry to `H`.
    pub weight: f64,
    /// Smallest last diagonal entry keeping the form non-negative.
    pub alpha_min: f64,
}

impl StieltjesCore {
    pub fn new(seq: &MomentSequence, tol: f64) -> Result<Self> {
        let m = seq.order();
        let sys = build_system(seq, tol)?;
        let c = &sys.transform;
        let b = seq.values();
        let mut base = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                if i + j < 2 * m {
                    base += c[(m, i)] * c[(m, j)] * b[i + j + 1];
                }
            }
        }
        let weight = c[(m, m)] * c[(m, m)];
        let alpha_min = if m == 0 {
            0.0
        } else {
            let jm = sys.jacobi(m);
            let mut e = Vector::zeros(m);
            e[m - 1] = 1.0;
            let x = spd_solve(&jm, &e, "Γ(1)_{m−1}")?;
            let beta = sys.offdiag[m - 1];
            beta * beta * x[m - 1]
        };
        Ok(StieltjesCore {
            sys,
            base,
            weight,
            alpha_min,
        })
    }

    pub fn order(&self) -> usize {
        self.sys.order()
    }

    pub fn min_h(&self) -> f64 {
        (self.alpha_min - self.base) / self.weight
    }

    /// Last diagonal entry of the orthonormal form for corner `H`.
    pub fn alpha_for_h(&self, h: f64) -> f64 {
        self.base + self.weight * h
    }

    pub fn h_for_tau(&self, tau: f64) -> f64 {
        self.min_h() + tau / self.weight
    }

    /// Orthonormal-basis form with last diagonal entry `alpha`.
    pub fn jacobi_form(&self, alpha: f64) -> Matrix {
        let m = self.order();
        let mut diag = self.sys.diag[..m].to_vec();
        diag.push(alpha);
        tridiagonal(&diag, &self.sys.offdiag)
    }
}

/// `Γ(1)_m` with its corner `b_{2m+1}` replaced by `h`.
fn corner_matrix(seq: &MomentSequence, h: f64) -> Matrix {
    let m = seq.order();
    let b = seq.values();
    Matrix::from_fn(m + 1, m + 1, |j, k| if j + k == 2 * m { h } else { b[j + k + 1] })
}

fn stieltjes_spec(seq: &MomentSequence, h: f64, jacobi: Matrix) -> Result<ExtensionSpec> {
    let gram = hankel(seq, 0, seq.order())?.entries;
    let matrix = gram
        .clone()
        .lu()
        .solve(&corner_matrix(seq, h))
        .ok_or(Error::Singular("Γ_m"))?;
    Ok(ExtensionSpec {
        kind: ExtensionKind::StieltjesH,
        parameter: h,
        matrix,
        gram,
        jacobi,
    })
}

/// Extension `Ã = Γ_m^{−1} S` whose corner entry `⟨Ã t^m, t^m⟩` is `h`.
pub fn stieltjes_extension(seq: &MomentSequence, h: f64, tol: f64) -> Result<ExtensionSpec> {
    let core = StieltjesCore::new(seq, tol)?;
    let jacobi = core.jacobi_form(core.alpha_for_h(h));
    stieltjes_spec(seq, h, jacobi)
}

/// Same extension parametrized by `τ = (Γ_m^{−1})_{mm}(H − min_H) ≥ 0`.
/// The orthonormal form is built from `τ` directly, which avoids the
/// cancellation in `H − min_H`.
pub fn stieltjes_extension_tau(seq: &MomentSequence, tau: f64, tol: f64) -> Result<ExtensionSpec> {
    let core = StieltjesCore::new(seq, tol)?;
    let jacobi = core.jacobi_form(core.alpha_min + tau);
    stieltjes_spec(seq, core.h_for_tau(tau), jacobi)
}

/// Smallest corner `H` giving a non-negative extension.
pub fn min_h(seq: &MomentSequence, tol: f64) -> Result<f64> {
    Ok(StieltjesCore::new(seq, tol)?.min_h())
}

/// `Q = uᵀ (Γ(1)_{m−1})^{−1} u` with `u = (b_{m+1}, ..., b_{2m})`, the
/// Schur-complement expression for the minimal corner.
pub fn min_h_schur(seq: &MomentSequence) -> Result<f64> {
    let m = seq.order();
    if m == 0 {
        return Ok(0.0);
    }
    let g1 = hankel(seq, 1, m - 1)?.entries;
    let u = Vector::from_iterator(m, (0..m).map(|j| seq.get(m + j + 1)));
    let x = spd_solve(&g1, &u, "Γ(1)_{m−1}")?;
    Ok(u.dot(&x))
}

/// Eigen-decomposes a symmetric orthonormal-basis form; masses are
/// `mass0 · v_0²`. Atoms lighter than `MASS_CUTOFF · mass0` are dropped and
/// the remaining masses are not renormalized.
pub fn jacobi_measure(jacobi: &Matrix, mass0: f64) -> Result<DiscreteMeasure> {
    ensure_symmetric(jacobi)?;
    let (vals, vecs) = sym_eigen(jacobi);
    let pairs = vals
        .iter()
        .enumerate()
        .map(|(j, &t)| (t, mass0 * vecs[(0, j)] * vecs[(0, j)]))
        .filter(|&(_, w)| w >= MASS_CUTOFF * mass0.abs())
        .collect();
    DiscreteMeasure::from_pairs(pairs)
}

pub fn spectral_measure(spec: &ExtensionSpec, mass0: f64) -> Result<DiscreteMeasure> {
    jacobi_measure(&spec.jacobi, mass0)
}

/// General route: factor `gram = L Lᵀ`, symmetrize `B = L^{−1}(gram·matrix)L^{−T}`,
/// and weight eigenvectors by the coordinates of the constant polynomial.
pub fn spectral_measure_from_gram(matrix: &Matrix, gram: &Matrix, mass0: f64) -> Result<DiscreteMeasure> {
    let chol = gram.clone().cholesky().ok_or(Error::Singular("Gram matrix"))?;
    let l = chol.l();
    let gm = gram * matrix;
    let y = l.solve_lower_triangular(&gm).ok_or(Error::Singular("Gram factor"))?;
    let b = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::Singular("Gram factor"))?;
    let b = (&b + b.transpose()) * 0.5;
    // the constant polynomial is the first coordinate vector
    let u0 = l.transpose().column(0).clone_owned();
    let norm2 = u0.norm_squared();
    let (vals, vecs) = sym_eigen(&b);
    let pairs = vals
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let w = vecs.column(j).dot(&u0);
            (t, mass0 * w * w / norm2)
        })
        .filter(|&(_, w)| w >= MASS_CUTOFF * mass0.abs())
        .collect();
    DiscreteMeasure::from_pairs(pairs)
}

/// Jacobi form of order `rank − 1` built from the leading moments, for the
/// unique-solution branch of a singular `Γ_m`. Empty when the rank is 0.
pub fn degenerate_measure(sys: &OrthoPolySystem, mass0: f64) -> Result<DiscreteMeasure> {
    let r = sys.coeffs.len();
    if r == 0 {
        return Ok(DiscreteMeasure::empty());
    }
    jacobi_measure(&sys.jacobi(r), mass0)
}

fn last_unit(n: usize) -> Vector {
    let mut e = Vector::zeros(n);
    e[n - 1] = 1.0;
    e
}

/// `β_{m−1}² ([(λI − A_00)^{−1}]_{last} + [A_00^{−1}]_{last})`, the scalar
/// bound on `λ` from the Schur factorization of `λI − Ã` at the minimal
/// extension. Infinite when `λI − A_00` has a negative eigenvalue, since no
/// extension then fits under `λ`.
pub fn extension_bound(sys: &OrthoPolySystem, lambda: f64) -> Result<f64> {
    let m = sys.order();
    if m == 0 {
        return Ok(0.0);
    }
    let a00 = sys.jacobi(m);
    let beta = sys.offdiag[m - 1];
    let e = last_unit(m);
    let shifted = Matrix::identity(m, m) * lambda - &a00;
    let low = min_eigenvalue(&shifted);
    let cut = 1e-12 * scale(&shifted);
    if low < -cut {
        return Ok(f64::INFINITY);
    }
    if low <= cut {
        return Err(Error::Boundary("λI − A_00 is singular".into()));
    }
    let x = spd_solve(&shifted, &e, "λI − A_00")?;
    let y = spd_solve(&a00, &e, "A_00")?;
    Ok(beta * beta * (x[m - 1] + y[m - 1]))
}

/// `Λ ≥ G(ΛI − A_00)^{−1}G* + G A_00^{−1} G*` at `λ = Λ`.
pub fn minimal_extension_bound_check(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<bool> {
    if seq.order() == 0 {
        return Ok(true);
    }
    let sys = build_system(seq, tol)?;
    let bound = extension_bound(&sys, lambda)?;
    Ok(lambda >= bound - tol * lambda.abs().max(1.0))
}

/// `√(Δ_m Δ¹_{m−2} / (Δ_{m−1} Δ¹_{m−1})) · d¹_{m−1}(λ) / d_m(λ)`; zero for `m = 0`.
pub fn hausdorff_ratio(seq: &MomentSequence, lambda: f64, tol: f64) -> Result<f64> {
    let m = seq.order();
    if m == 0 {
        return Ok(0.0);
    }
    let sys = build_system(seq, tol)?;
    let sh = build_system(&seq.shifted()?, tol)?;
    let dm = sys.eval(m, lambda);
    if dm == 0.0 {
        return Err(Error::Pole {
            what: "d_m",
            at: lambda,
        });
    }
    let mi = m as isize;
    let factor = (sys.delta(mi) * sh.delta(mi - 2) / (sys.delta(mi - 1) * sh.delta(mi - 1))).sqrt();
    Ok(factor * sh.eval(m - 1, lambda) / dm)
}

/// Gap Jacobi matrix with diagonal `(a_0, ..., a_{n−1}, α)`.
pub fn gap_jacobi(seq: &MomentSequence, alpha: f64, tol: f64) -> Result<ExtensionSpec> {
    let sys = build_system(seq, tol)?;
    Ok(gap_jacobi_from(&sys, alpha))
}

pub fn gap_jacobi_from(sys: &OrthoPolySystem, alpha: f64) -> ExtensionSpec {
    let n = sys.order();
    let mut diag = sys.diag[..n].to_vec();
    diag.push(alpha);
    let j = tridiagonal(&diag, &sys.offdiag);
    ExtensionSpec {
        kind: ExtensionKind::GapAlpha,
        parameter: alpha,
        matrix: j.clone(),
        gram: Matrix::identity(n + 1, n + 1),
        jacobi: j,
    }
}

/// `(t − α) p_n(t) − β_{n−1} p_{n−1}(t)`, whose roots are the eigenvalues of
/// the gap Jacobi matrix.
pub fn m_polynomial(sys: &OrthoPolySystem, alpha: f64) -> Result<Poly> {
    let n = sys.order();
    if n == 0 {
        return Err(Error::InvalidArgument("M-polynomial needs order ≥ 1".into()));
    }
    let lin = Poly::new(vec![-alpha, 1.0]);
    Ok(&(&lin * &sys.coeffs[n]) - &sys.coeffs[n - 1].scaled(sys.offdiag[n - 1]))
}

/// `M(t)` evaluated without forming the polynomial.
pub fn m_value(sys: &OrthoPolySystem, alpha: f64, t: f64) -> f64 {
    let n = sys.order();
    (t - alpha) * sys.eval(n, t) - sys.offdiag[n - 1] * sys.eval(n - 1, t)
}

/// Coefficients `[c_0, c_1, c_2]` of `W(α)`: the product `M_0(α) M_Λ(α)` of
/// the M-polynomial values at both gap ends, scaled by `h_{n−1}(Λ, 0)/β²`.
/// `W ≥ 0` exactly on the admissible α set.
pub fn w_trinomial(sys: &OrthoPolySystem, lambda: f64) -> Result<[f64; 3]> {
    let n = sys.order();
    if n == 0 {
        return Err(Error::InvalidArgument("trinomial needs order ≥ 1".into()));
    }
    let beta = sys.offdiag[n - 1];
    let (pn0, pnl) = (sys.eval(n, 0.0), sys.eval(n, lambda));
    let (q0, ql) = (sys.eval(n - 1, 0.0), sys.eval(n - 1, lambda));
    let hn = cd_kernel(sys, n, lambda, 0.0)?;
    let t2 = pn0 * pnl;
    let t1 = 2.0 * beta * q0 * pnl - lambda * hn;
    let t0 = beta * q0 * (beta * ql - lambda * pnl);
    let pre = cd_kernel(sys, n - 1, lambda, 0.0)? / (beta * beta);
    Ok([pre * t0, pre * t1, pre * t2])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapInequalities {
    /// `h_n(Λ,0) / (M(Λ) M(0))`.
    pub firsta: f64,
    /// `W(α)`.
    pub w: f64,
}

impl GapInequalities {
    pub fn holds(&self) -> bool {
        self.firsta > 0.0 && self.w >= 0.0
    }
}

pub fn gap_inequalities(sys: &OrthoPolySystem, lambda: f64, alpha: f64) -> Result<GapInequalities> {
    let n = sys.order();
    if n == 0 {
        return Err(Error::InvalidArgument("gap inequalities need order ≥ 1".into()));
    }
    let (m0, ml) = (m_value(sys, alpha, 0.0), m_value(sys, alpha, lambda));
    let eps = 1e-14 * (alpha.abs() + lambda.abs()).max(1.0) * sys.eval(n, lambda).abs().max(1.0);
    if m0.abs() <= eps {
        return Err(Error::Boundary(format!("M(0) vanishes at α = {alpha}")));
    }
    if ml.abs() <= eps {
        return Err(Error::Boundary(format!("M(Λ) vanishes at α = {alpha}")));
    }
    let firsta = cd_kernel(sys, n, lambda, 0.0)? / (ml * m0);
    let w = w_trinomial(sys, lambda)?;
    Ok(GapInequalities {
        firsta,
        w: w[0] + alpha * (w[1] + alpha * w[2]),
    })
}

/// Positivity of `[[Q, K], [Kᵀ, W]]` via the Schur complement `W − Kᵀ Q^{−1} K`
/// of a positive definite leading block of size `split`.
pub fn schur_positivity(mtx: &Matrix, split: usize, tol: f64) -> Result<bool> {
    ensure_symmetric(mtx)?;
    let n = mtx.nrows();
    if split == 0 || split > n {
        return Err(Error::InvalidArgument(format!("split {split} outside 1..={n}")));
    }
    let q = mtx.view((0, 0), (split, split)).into_owned();
    let k = mtx.view((0, split), (split, n - split)).into_owned();
    let w = mtx.view((split, split), (n - split, n - split)).into_owned();
    let chol = q.cholesky().ok_or(Error::Singular("leading block"))?;
    let comp = &w - k.transpose() * chol.solve(&k);
    let comp = (&comp + comp.transpose()) * 0.5;
    let lmin = sym_eigen(&comp).0.first().copied().unwrap_or(f64::INFINITY);
    Ok(lmin >= -tol * scale(mtx))
}

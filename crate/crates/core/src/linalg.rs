//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Maximum absolute row sum.
pub fn inf_norm(m: &Matrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Scale used for relative tolerances: `max(1, ||M||_inf)`.
pub fn scale(m: &Matrix) -> f64 {
    inf_norm(m).max(1.0)
}

pub fn asymmetry(m: &Matrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.nrows() {
        for k in 0..j {
            worst = worst.max((m[(j, k)] - m[(k, j)]).abs());
        }
    }
    worst
}

pub(crate) fn ensure_symmetric(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSymmetric(f64::INFINITY));
    }
    let a = asymmetry(m);
    if a > 1e-12 * scale(m) {
        return Err(Error::NotSymmetric(a));
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted ascending.
/// Column `j` of the returned matrix is the eigenvector of eigenvalue `j`.
pub fn sym_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Smallest eigenvalue; `+inf` for the empty matrix.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    sym_eigen(m).0.first().copied().unwrap_or(f64::INFINITY)
}

/// Outcome of a pivot-monitored Cholesky factorization.
#[derive(Clone, Debug)]
pub struct PartialCholesky {
    /// Lower factor of the leading `rank x rank` block.
    pub lower: Matrix,
    /// Squared diagonal of `lower`, i.e. the Schur pivots.
    pub pivots: Vec<f64>,
    pub rank: usize,
}

/// Unpivoted Cholesky that stops at the first pivot `<= threshold`.
///
/// For a Hankel matrix the `k`-th pivot equals `det(H_k) / det(H_{k-1})`, so
/// stopping there yields the numerical rank of the leading sections.
pub fn partial_cholesky(a: &Matrix, threshold: f64) -> PartialCholesky {
    let n = a.nrows();
    let mut l = Matrix::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);
    let mut rank = n;
    for k in 0..n {
        let mut d = a[(k, k)];
        for p in 0..k {
            d -= l[(k, p)] * l[(k, p)];
        }
        if !(d > threshold) {
            rank = k;
            break;
        }
        let lkk = d.sqrt();
        l[(k, k)] = lkk;
        pivots.push(d);
        for i in (k + 1)..n {
            let mut s = a[(i, k)];
            for p in 0..k {
                s -= l[(i, p)] * l[(k, p)];
            }
            l[(i, k)] = s / lkk;
        }
    }
    PartialCholesky {
        lower: l.view((0, 0), (rank, rank)).into_owned(),
        pivots,
        rank,
    }
}

/// Inverse of a lower-triangular matrix with nonzero diagonal.
pub fn lower_inverse(l: &Matrix) -> Matrix {
    let n = l.nrows();
    let mut inv = Matrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for p in col..i {
                s -= l[(i, p)] * inv[(p, col)];
            }
            inv[(i, col)] = s / l[(i, i)];
        }
    }
    inv
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn spd_solve(a: &Matrix, b: &Vector, what: &'static str) -> Result<Vector> {
    let chol = a.clone().cholesky().ok_or(Error::Singular(what))?;
    Ok(chol.solve(b))
}

/// Solves `a x = b` for a general square `a`.
pub fn lu_solve(a: &Matrix, b: &Vector, what: &'static str) -> Result<Vector> {
    a.clone().lu().solve(b).ok_or(Error::Singular(what))
}

/// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Matrix {
    let n = diag.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &d) in diag.iter().enumerate() {
        m[(i, i)] = d;
    }
    for (i, &b) in off.iter().enumerate().take(n.saturating_sub(1)) {
        m[(i, i + 1)] = b;
        m[(i + 1, i)] = b;
    }
    m
}

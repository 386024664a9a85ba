//! Dense real polynomials in the monomial basis, with Sturm-sequence root
//! counting.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients stored lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<f64>);

/// Horner evaluation of `coeffs[0] + coeffs[1] x + ...`.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Degree ignoring exactly-zero leading coefficients; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c != 0.0)
    }

    pub fn leading(&self) -> f64 {
        self.degree().map_or(0.0, |d| self.0[d])
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_poly(&self.0, x)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scaled(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    fn trimmed(mut self, rel: f64) -> Poly {
        let big = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        while let Some(&last) = self.0.last() {
            if last.abs() <= rel * big || last == 0.0 {
                self.0.pop();
            } else {
                break;
            }
        }
        self
    }

    /// Remainder of division by `d` (which must be nonzero).
    fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd];
        let mut r = self.0.clone();
        while let Some(rd) = r.iter().rposition(|&c| c != 0.0) {
            if rd < dd {
                break;
            }
            let q = r[rd] / lead;
            for i in 0..=dd {
                r[rd - dd + i] -= q * d.0[i];
            }
            r[rd] = 0.0;
        }
        r.truncate(dd);
        Poly(r)
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone().trimmed(0.0)];
        if chain[0].degree().unwrap_or(0) == 0 {
            return chain;
        }
        chain.push(chain[0].derivative());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]).scaled(-1.0).trimmed(1e-13);
            if r.degree().is_none() {
                break;
            }
            let done = r.degree() == Some(0);
            chain.push(r);
            if done {
                break;
            }
        }
        chain
    }

    fn sign_changes(chain: &[Poly], x: f64) -> usize {
        let mut count = 0;
        let mut prev = 0.0f64;
        for p in chain {
            let v = p.eval(x);
            if v == 0.0 {
                continue;
            }
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                count += 1;
            }
            prev = v;
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: f64, b: f64) -> usize {
        if b <= a {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::sign_changes(&chain, a).saturating_sub(Self::sign_changes(&chain, b))
    }

    /// Number of distinct real roots in the open interval `(a, b)`.
    pub fn count_roots_open(&self, a: f64, b: f64) -> usize {
        let closed = self.count_roots(a, b);
        if self.eval(b) == 0.0 {
            closed.saturating_sub(1)
        } else {
            closed
        }
    }

    /// Cauchy bound on the modulus of all roots.
    pub fn root_bound(&self) -> f64 {
        let Some(d) = self.degree() else { return 0.0 };
        let lead = self.0[d].abs();
        1.0 + self.0[..d].iter().fold(0.0f64, |m, c| m.max(c.abs() / lead))
    }

    /// Distinct real roots, ascending, isolated by Sturm counts and refined
    /// by bisection.
    pub fn real_roots(&self) -> Vec<f64> {
        let Some(d) = self.degree() else { return Vec::new() };
        if d == 0 {
            return Vec::new();
        }
        let chain = self.sturm_chain();
        let r = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-r, r)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_changes(&chain, lo).saturating_sub(Self::sign_changes(&chain, hi));
            if n == 0 {
                continue;
            }
            if n == 1 || hi - lo <= 1e-15 * r {
                out.push(self.refine(&chain, lo, hi));
                continue;
            }
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
        out.sort_by(f64::total_cmp);
        out
    }

    fn refine(&self, chain: &[Poly], mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (flo, fmid) = (self.eval(lo), self.eval(mid));
            let left = if flo != 0.0 && fmid != 0.0 && (flo > 0.0) != (fmid > 0.0) {
                true
            } else if fmid == 0.0 {
                return mid;
            } else {
                Self::sign_changes(chain, lo) > Self::sign_changes(chain, mid)
            };
            if left {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + rhs.0.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scaled(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

//! Symmetric tridiagonal eigenproblems: implicit QL, Sturm counts, inverse iteration.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// Off-diagonal, `off[i]` couples rows i and i + 1.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Internal("tridiagonal dimensions do not match".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// All eigenvalues in ascending order by the implicit-shift QL algorithm.
    pub fn eigenvalues_ql(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = vec![0.0; n];
        e[..n - 1].copy_from_slice(&self.off);
        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > 60 {
                    return Err(Error::Solver(format!("QL did not converge for eigenvalue {l}")));
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut deflated = false;
                let mut i = m;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = fast_hypot(f, g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if deflated {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let n = self.len();
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + self.norm_bound());
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            if q == 0.0 {
                q = tiny;
            }
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The k-th smallest eigenvalue (0-based) by Sturm bisection.
    pub fn eigenvalue_bisect(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::Domain(format!("eigenvalue index {k} out of range")));
        }
        let r = self.norm_bound();
        let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Solves (T - shift) x = rhs with partial pivoting. Tiny pivots are perturbed.
    fn shifted_solve(&self, shift: f64, rhs: &mut [f64]) {
        let n = self.len();
        let scale = self.norm_bound().max(1.0);
        let tiny = f64::EPSILON * scale;
        // Row i holds (a[i], b[i], c[i]) on columns i, i+1, i+2 after elimination.
        let mut a: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        let mut b: Vec<f64> = self.off.to_vec();
        b.push(0.0);
        let mut c = vec![0.0; n];
        let sub: Vec<f64> = self.off.to_vec();
        for i in 0..n - 1 {
            let lower = sub[i];
            if lower.abs() > a[i].abs() {
                // Swap rows i and i+1.
                let (ai, bi, ci) = (a[i], b[i], c[i]);
                a[i] = lower;
                b[i] = a[i + 1];
                c[i] = b[i + 1];
                rhs.swap(i, i + 1);
                let factor = ai / lower;
                a[i + 1] = bi - factor * b[i];
                b[i + 1] = ci - factor * c[i];
                rhs[i + 1] -= factor * rhs[i];
            } else {
                if a[i] == 0.0 {
                    a[i] = tiny;
                }
                let factor = lower / a[i];
                a[i + 1] -= factor * b[i];
                b[i + 1] -= factor * c[i];
                rhs[i + 1] -= factor * rhs[i];
            }
        }
        if a[n - 1] == 0.0 {
            a[n - 1] = tiny;
        }
        rhs[n - 1] /= a[n - 1];
        if n > 1 {
            rhs[n - 2] = (rhs[n - 2] - b[n - 2] * rhs[n - 1]) / a[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            rhs[i] = (rhs[i] - b[i] * rhs[i + 1] - c[i] * rhs[i + 2]) / a[i];
        }
    }

    /// Unit eigenvectors for the given eigenvalues by inverse iteration.
    ///
    /// Each vector is orthogonalized against the earlier ones so near-degenerate pairs stay orthogonal.
    pub fn eigenvectors(&self, eigenvalues: &[f64]) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(eigenvalues.len());
        for (k, &lambda) in eigenvalues.iter().enumerate() {
            let mut v: Vec<f64> = (0..n)
                .map(|i| 1.0 + 0.5 * (((i * 7919 + k * 104_729) % 1013) as f64 / 1013.0 - 0.5))
                .collect();
            for _ in 0..4 {
                self.shifted_solve(lambda, &mut v);
                for prev in &out {
                    let dot: f64 = prev.iter().zip(&v).map(|(p, x)| p * x).sum();
                    v.iter_mut().zip(prev).for_each(|(x, p)| *x -= dot * p);
                }
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 && norm.is_finite() {
                    v.iter_mut().for_each(|x| *x /= norm);
                }
            }
            out.push(v);
        }
        out
    }
}

#[inline]
fn fast_hypot(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m > 1e150 || (m < 1e-150 && m > 0.0) {
        a.hypot(b)
    } else {
        (a * a + b * b).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn ql_matches_closed_form() {
        let n = 50;
        let ev = laplacian(n).eigenvalues_ql().unwrap();
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn bisection_agrees_with_ql() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| ((i * i) % 7) as f64 + 0.3 * i as f64).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + ((i * 3) % 5) as f64 * 0.1).collect();
        let t = SymTridiagonal::new(diag, off).unwrap();
        let ql = t.eigenvalues_ql().unwrap();
        for k in [0, 5, 17, 39] {
            assert!((t.eigenvalue_bisect(k).unwrap() - ql[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_iteration_gives_eigenvectors() {
        let t = laplacian(30);
        let ev = t.eigenvalues_ql().unwrap();
        let vecs = t.eigenvectors(&ev[..3]);
        for (k, v) in vecs.iter().enumerate() {
            for i in 0..30 {
                let mut tv = t.diag[i] * v[i];
                if i > 0 {
                    tv += t.off[i - 1] * v[i - 1];
                }
                if i + 1 < 30 {
                    tv += t.off[i] * v[i + 1];
                }
                assert!((tv - ev[k] * v[i]).abs() < 1e-12);
            }
        }
        let dot: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-12);
    }
}

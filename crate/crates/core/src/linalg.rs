//! Small dense complex linear algebra: products, LU determinant, one-sided
//! Jacobi SVD and Hessenberg/QR eigenvalues.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C = Complex64;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub a: Vec<C>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, a: vec![C::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: C) {
        self.a[i * self.n + j] += v;
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        let n = self.n;
        let mut r = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == C::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    r.a[i * n + j] += aik * o.a[k * n + j];
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.a[i * self.n + j] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, k: C) -> CMat {
        CMat { n: self.n, a: self.a.iter().map(|x| x * k).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    /// Largest singular value.
    pub fn norm2(&self) -> f64 {
        svd(self).sigma.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn vec_norm(v: &[C]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Determinant by LU factorisation with partial pivoting.
pub fn det(m: &CMat) -> C {
    let n = m.n;
    let mut a = m.a.clone();
    let mut d = C::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm())).unwrap();
        if a[p * n + k].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            d = -d;
        }
        let piv = a[k * n + k];
        d *= piv;
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            if f == C::new(0.0, 0.0) {
                continue;
            }
            for j in k..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    d
}

pub struct Svd {
    /// Singular values, unsorted, paired with the columns of `v`.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns.
    pub v: CMat,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &CMat) -> Svd {
    let n = m.n;
    // work on columns: col[j][i] = m[i][j]
    let mut cols: Vec<Vec<C>> = (0..n).map(|j| (0..n).map(|i| m.at(i, j)).collect()).collect();
    let mut v: Vec<Vec<C>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect())
        .collect();
    let eps = 1e-15;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma: C = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                for vecs in [&mut cols, &mut v] {
                    for i in 0..n {
                        let (xp, xq) = (vecs[p][i], vecs[q][i] * pc);
                        vecs[p][i] = xp * c - xq * s;
                        vecs[q][i] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = cols.iter().map(|c| vec_norm(c)).collect();
    Svd { sigma, v: CMat::from_fn(n, |i, j| v[j][i]) }
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s = svd(m).sigma;
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn hessenberg(m: &CMat) -> CMat {
    let n = m.n;
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C> = (k + 1..n).map(|i| h.at(i, k)).collect();
        let xn = vec_norm(&x);
        if xn == 0.0 {
            continue;
        }
        let x0 = x[0];
        let ph = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v = x.clone();
        v[0] += ph * xn;
        let vn = vec_norm(&v);
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        // H <- (I - 2 v v^H) H
        for j in 0..n {
            let s: C = (0..v.len()).map(|r| v[r].conj() * h.at(k + 1 + r, j)).sum();
            for r in 0..v.len() {
                let val = h.at(k + 1 + r, j) - v[r] * s * 2.0;
                h.set(k + 1 + r, j, val);
            }
        }
        // H <- H (I - 2 v v^H)
        for i in 0..n {
            let s: C = (0..v.len()).map(|r| h.at(i, k + 1 + r) * v[r]).sum();
            for r in 0..v.len() {
                let val = h.at(i, k + 1 + r) - s * v[r].conj() * 2.0;
                h.set(i, k + 1 + r, val);
            }
        }
        for i in k + 2..n {
            h.set(i, k, C::new(0.0, 0.0));
        }
    }
    h
}

/// Iteration cap per eigenvalue of the shifted QR iteration.
pub const QR_MAX_ITER: usize = 300;

/// Eigenvalues of a dense complex matrix (Hessenberg reduction + shifted QR).
pub fn eigenvalues(m: &CMat) -> Result<Vec<C>> {
    let n = m.n;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut h = hessenberg(m);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut out = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0;
    let mut total = 0;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h.at(l, l).norm() + h.at(l - 1, l - 1).norm();
            let s = if s == 0.0 { scale } else { s };
            if h.at(l, l - 1).norm() <= eps * s {
                h.set(l, l - 1, C::new(0.0, 0.0));
                break;
            }
            l -= 1;
        }
        if l == hi {
            out.push(h.at(hi, hi));
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > QR_MAX_ITER {
            return Err(Error::NoConvergence(total));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h.at(hi, hi) + C::new(h.at(hi, hi - 1).norm() * 1.5, 0.0)
        } else {
            let (a, b, c, d) = (h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1), h.at(hi, hi));
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        for i in l..=hi {
            let v = h.at(i, i) - mu;
            h.set(i, i, v);
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h.at(k, k);
            let y = h.at(k + 1, k);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (C::new(1.0, 0.0), C::new(0.0, 0.0)) } else { (x / r, y / r) };
            for j in k..=hi {
                let (a, b) = (h.at(k, j), h.at(k + 1, j));
                h.set(k, j, c.conj() * a + s.conj() * b);
                h.set(k + 1, j, -s * a + c * b);
            }
            rots.push((c, s));
        }
        for (idx, k) in (l..hi).enumerate() {
            let (c, s) = rots[idx];
            for i in l..=(k + 2).min(hi) {
                let (a, b) = (h.at(i, k), h.at(i, k + 1));
                h.set(i, k, a * c + b * s);
                h.set(i, k + 1, -a * s.conj() + b * c.conj());
            }
        }
        for i in l..=hi {
            let v = h.at(i, i) + mu;
            h.set(i, i, v);
        }
    }
    out.push(h.at(0, 0));
    Ok(out)
}

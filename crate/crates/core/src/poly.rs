//! Exact tensor polynomials of degree at most two per variable.

use num_rational::Rational64;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Sub};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Coefficients of `ξ^a η^b ζ^c`, stored at `a + 3b + 9c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    c: [Q; 27],
}

/// Average of `ξ^a` over `[-1/2, 1/2]`.
fn monomial_average(a: usize) -> Q {
    match a {
        0 => Q::one(),
        1 => Q::zero(),
        2 => q(1, 12),
        _ => unreachable!(),
    }
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly { c: [Q::zero(); 27] }
    }

    pub fn constant(v: Q) -> Self {
        let mut p = Self::zero();
        p.c[0] = v;
        p
    }

    /// Product `f(ξ) g(η) h(ζ)` of three univariate quadratics given by coefficients.
    pub fn product(f: [Q; 3], g: [Q; 3], h: [Q; 3]) -> Self {
        let mut p = Self::zero();
        for c in 0..3 {
            for b in 0..3 {
                for a in 0..3 {
                    p.c[a + 3 * b + 9 * c] = f[a] * g[b] * h[c];
                }
            }
        }
        p
    }

    pub fn coeff(&self, a: usize, b: usize, c: usize) -> Q {
        self.c[a + 3 * b + 9 * c]
    }

    pub fn eval(&self, x: [Q; 3]) -> Q {
        let mut s = Q::zero();
        let pw = |v: Q| [Q::one(), v, v * v];
        let (px, py, pz) = (pw(x[0]), pw(x[1]), pw(x[2]));
        for c in 0..3 {
            for b in 0..3 {
                for a in 0..3 {
                    let k = self.c[a + 3 * b + 9 * c];
                    if !k.is_zero() {
                        s += k * px[a] * py[b] * pz[c];
                    }
                }
            }
        }
        s
    }

    pub fn eval_f64(&self, x: [f64; 3]) -> f64 {
        let pw = |v: f64| [1.0, v, v * v];
        let (px, py, pz) = (pw(x[0]), pw(x[1]), pw(x[2]));
        let mut s = 0.0;
        for c in 0..3 {
            for b in 0..3 {
                for a in 0..3 {
                    let k = self.c[a + 3 * b + 9 * c];
                    if !k.is_zero() {
                        s += to_f64(k) * px[a] * py[b] * pz[c];
                    }
                }
            }
        }
        s
    }

    pub fn diff(&self, axis: usize) -> Self {
        let mut p = Self::zero();
        for c in 0..3 {
            for b in 0..3 {
                for a in 0..3 {
                    let e = [a, b, c];
                    if e[axis] == 0 {
                        continue;
                    }
                    let mut t = e;
                    t[axis] -= 1;
                    p.c[t[0] + 3 * t[1] + 9 * t[2]] += self.c[a + 3 * b + 9 * c] * Q::from(e[axis] as i64);
                }
            }
        }
        p
    }

    /// Mean over the unit cell `[-1/2, 1/2]^3`.
    pub fn average(&self) -> Q {
        let mut s = Q::zero();
        for c in 0..3 {
            for b in 0..3 {
                for a in 0..3 {
                    s += self.c[a + 3 * b + 9 * c] * monomial_average(a) * monomial_average(b) * monomial_average(c);
                }
            }
        }
        s
    }
}

impl Add for &TensorPoly {
    type Output = TensorPoly;
    fn add(self, o: &TensorPoly) -> TensorPoly {
        let mut p = self.clone();
        for (a, b) in p.c.iter_mut().zip(o.c.iter()) {
            *a += *b;
        }
        p
    }
}

impl Sub for &TensorPoly {
    type Output = TensorPoly;
    fn sub(self, o: &TensorPoly) -> TensorPoly {
        let mut p = self.clone();
        for (a, b) in p.c.iter_mut().zip(o.c.iter()) {
            *a -= *b;
        }
        p
    }
}

impl Mul<Q> for &TensorPoly {
    type Output = TensorPoly;
    fn mul(self, k: Q) -> TensorPoly {
        let mut p = self.clone();
        p.c.iter_mut().for_each(|a| *a *= k);
        p
    }
}

pub fn to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

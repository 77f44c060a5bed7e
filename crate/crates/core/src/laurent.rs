//! Laurent polynomials in the translation factors `t_x, t_y, t_z`.
//!
//! A monomial `t_x^i t_y^j t_z^k` stands for the index shift `(i, j, k)`, so a
//! finite-difference stencil and its Fourier symbol are the same object.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent {
    terms: BTreeMap<[i32; 3], f64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn constant(c: f64) -> Self {
        Laurent::monomial([0; 3], c)
    }

    pub fn monomial(shift: [i32; 3], c: f64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(shift, c);
        l
    }

    /// `t_axis^power`.
    pub fn t(axis: usize, power: i32) -> Self {
        let mut s = [0; 3];
        s[axis] = power;
        Laurent::monomial(s, 1.0)
    }

    pub fn add_term(&mut self, shift: [i32; 3], c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(shift).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&shift);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ([i32; 3], f64)> + '_ {
        self.terms.iter().map(|(s, c)| (*s, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut l = Laurent::zero();
        for (s, c) in self.terms() {
            l.add_term(s, c * k);
        }
        l
    }

    pub fn eval(&self, t: [Complex64; 3]) -> Complex64 {
        self.terms()
            .map(|(s, c)| t[0].powi(s[0]) * t[1].powi(s[1]) * t[2].powi(s[2]) * c)
            .sum()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, o: &Laurent) -> Laurent {
        let mut l = self.clone();
        for (s, c) in o.terms() {
            l.add_term(s, c);
        }
        l
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, o: &Laurent) -> Laurent {
        self + &(-o)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1.0)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, o: &Laurent) -> Laurent {
        let mut l = Laurent::zero();
        for (s1, c1) in self.terms() {
            for (s2, c2) in o.terms() {
                l.add_term([s1[0] + s2[0], s1[1] + s2[1], s1[2] + s2[2]], c1 * c2);
            }
        }
        l
    }
}

//! First-order radial acoustics solver used as reference for the spherical pulses.
//!
//! Solves `u_t + p_r = 0`, `p_t + u_r + (d-1) u / r = 0` (unit sound speed) on
//! `[0, r_max]` with a local Lax-Friedrichs flux, an explicit geometric source, a
//! reflecting origin and an outflow outer boundary.

use crate::error::{Error, Result};

pub const RADIAL_CFL: f64 = 0.45;

#[derive(Clone, Debug)]
pub struct RadialState {
    pub d: usize,
    pub dr: f64,
    /// Radial velocity at the cell centres `(i + 1/2) dr`.
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub time: f64,
}

impl RadialState {
    pub fn new(d: usize, n: usize, r_max: f64, p0: impl Fn(f64) -> f64) -> Self {
        let dr = r_max / n as f64;
        let p = (0..n).map(|i| p0((i as f64 + 0.5) * dr)).collect();
        RadialState { d, dr, u: vec![0.0; n], p, time: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.dr * self.len() as f64
    }

    /// `(u_r, p)` at radius `r` by linear interpolation; `u_r(0) = 0` and values beyond
    /// the outer cell are held constant.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let n = self.len();
        let s = r / self.dr - 0.5;
        if s <= 0.0 {
            let f = (r / (0.5 * self.dr)).clamp(0.0, 1.0);
            return (self.u[0] * f, self.p[0]);
        }
        let i = s.floor() as usize;
        if i + 1 >= n {
            return (self.u[n - 1], self.p[n - 1]);
        }
        let f = s - i as f64;
        (
            self.u[i] * (1.0 - f) + self.u[i + 1] * f,
            self.p[i] * (1.0 - f) + self.p[i + 1] * f,
        )
    }

    fn step(&mut self, dt: f64, fu: &mut [f64], fp: &mut [f64]) {
        let n = self.len();
        let k = dt / self.dr;
        // interface i sits between cells i-1 and i; interface 0 is the origin
        for i in 0..=n {
            let (ul, pl) = if i == 0 { (-self.u[0], self.p[0]) } else { (self.u[i - 1], self.p[i - 1]) };
            let (ur, pr) = if i == n { (self.u[n - 1], self.p[n - 1]) } else { (self.u[i], self.p[i]) };
            fu[i] = 0.5 * (pl + pr) - 0.5 * (ur - ul);
            fp[i] = 0.5 * (ul + ur) - 0.5 * (pr - pl);
        }
        let g = (self.d - 1) as f64;
        for i in 0..n {
            let r = (i as f64 + 0.5) * self.dr;
            let u = self.u[i];
            self.u[i] -= k * (fu[i + 1] - fu[i]);
            self.p[i] -= k * (fp[i + 1] - fp[i]) + dt * g * u / r;
        }
        self.time += dt;
    }

    pub fn advance(&mut self, t_end: f64) {
        let mut fu = vec![0.0; self.len() + 1];
        let mut fp = vec![0.0; self.len() + 1];
        let dt = RADIAL_CFL * self.dr;
        while self.time < t_end {
            let step = dt.min(t_end - self.time);
            if step <= 1e-15 * t_end.max(1.0) {
                break;
            }
            self.step(step, &mut fu, &mut fp);
        }
        self.time = self.time.max(t_end);
    }
}

/// Radial reference at `t_end` from pressure profile `p0` and zero velocity.
pub fn radial_reference(d: usize, n: usize, r_max: f64, t_end: f64, p0: impl Fn(f64) -> f64) -> Result<RadialState> {
    if !(2..=3).contains(&d) {
        return Err(Error::Invalid(format!("radial dimension {d} must be 2 or 3")));
    }
    if n < 1000 {
        return Err(Error::Invalid(format!("radial reference needs at least 1000 cells, got {n}")));
    }
    if !(r_max > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Invalid("radial extent and end time must be positive".into()));
    }
    let mut s = RadialState::new(d, n, r_max, p0);
    s.advance(t_end);
    Ok(s)
}

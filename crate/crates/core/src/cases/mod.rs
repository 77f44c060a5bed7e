//! Initial data for the named experiments, a run driver recording time series, and
//! the diagnostics used to judge the runs.

pub mod diagnostics;
pub mod radial;

pub use diagnostics::{
    discrete_divergences, divergence_stencils, l1_distance, l1_error, p22_projected_divergence, DivergenceReport,
    ProjectedDivergence,
};
pub use radial::{radial_reference, RadialState};

use crate::error::{Error, Result};
use crate::grid::{total_average, Boundary, GridSpec, Kind, State};
use crate::linalg::C;
use crate::scheme::{dt_from_cfl, Model, Scheme, Splitting, Stepper};
use crate::spectral::{self, TranslationFactors};
use diagnostics::{cell_average, quadrature, SIMPSON};
use std::f64::consts::PI;

pub const CASE_NAMES: [&str; 8] =
    ["gaussian2d", "gaussian3d", "vortex2d", "wellprepared2d", "mode3d", "vortexring", "riemann2d", "advect1d"];

/// Pulse width and radius of the spherical Gaussian.
pub const GAUSS_W: f64 = 0.05;
pub const GAUSS_R0: f64 = 0.5;
/// Centre-line radius of the vortex ring.
pub const RING_R: f64 = 0.25;
/// Wave vector of the 3-d stationary mode.
pub const MODE3D_K: [f64; 3] = [2.0 * PI, 8.0 * PI, -4.0 * PI];
/// Wave vector of the 2-d stationary mode.
pub const MODE2D_K: [f64; 3] = [2.0 * PI, 20.0 * PI, 0.0];

/// How the stationary modes are discretised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preparation {
    /// Exactly in the kernel of the evolution matrix.
    WellPrepared,
    /// Point samples and Simpson averages of the continuous mode.
    Pointwise,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub name: String,
    pub dim: usize,
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub n: usize,
    pub c: f64,
    pub splitting: Splitting,
    pub cfl: f64,
    pub t_end: f64,
    pub boundary: Boundary,
    /// Number of time-series rows after the initial one.
    pub samples: usize,
    pub prep: Preparation,
    /// Dof kinds entering the L1 columns of the time series.
    pub error_kinds: Vec<Kind>,
}

impl CaseSpec {
    pub fn named(name: &str) -> Result<CaseSpec> {
        let unit = |d: usize| ([0.0; 3], { let mut h = [0.0; 3]; h[..d].iter_mut().for_each(|x| *x = 1.0); h });
        let mk = |dim: usize, (lo, hi): ([f64; 3], [f64; 3]), n, cfl, t_end, boundary, kinds: Vec<Kind>| CaseSpec {
            name: name.to_string(),
            dim,
            lo,
            hi,
            n,
            c: 1.0,
            splitting: Splitting::Upwind,
            cfl,
            t_end,
            boundary,
            samples: 100,
            prep: Preparation::WellPrepared,
            error_kinds: kinds,
        };
        let all = |d: usize| Kind::all(d).to_vec();
        let p = Boundary::Periodic;
        Ok(match name {
            "gaussian2d" => mk(2, ([0.0; 3], [2.0, 2.0, 0.0]), 50, 0.2, 0.1, p, vec![Kind::A]),
            "gaussian3d" => mk(3, ([-1.0; 3], [1.0; 3]), 20, 0.1, 0.1, p, vec![Kind::A]),
            "vortex2d" => mk(2, unit(2), 50, 0.2, 200.0, Boundary::ZeroGradient, all(2)),
            "wellprepared2d" => mk(2, unit(2), 50, 0.2, 1.0, p, all(2)),
            "mode3d" => mk(3, unit(3), 20, 0.1, 1.0, p, all(3)),
            "vortexring" => mk(3, unit(3), 20, 0.1, 25.0, p, vec![Kind::N]),
            "riemann2d" => mk(2, unit(2), 80, 0.1, 0.3, p, all(2)),
            "advect1d" => mk(1, unit(1), 50, 0.4, 1.0, p, all(1)),
            _ => return Err(Error::UnknownCase(name.to_string())),
        })
    }

    pub fn model(&self) -> Model {
        if self.dim == 1 {
            Model::advection(self.c)
        } else {
            Model::acoustics(self.dim, self.c)
        }
    }

    /// Stationary modes are indexed so that cell `i` has its centroid at `i h`.
    fn centroid_at_index(&self) -> bool {
        matches!(self.name.as_str(), "wellprepared2d" | "mode3d")
    }

    pub fn grid(&self, n: [usize; 3], boundary: Option<Boundary>) -> Result<GridSpec> {
        let d = self.dim;
        let mut h = vec![0.0; d];
        let mut origin = vec![0.0; d];
        for a in 0..d {
            h[a] = (self.hi[a] - self.lo[a]) / n[a] as f64;
            origin[a] = self.lo[a] - if self.centroid_at_index() { 0.5 * h[a] } else { 0.0 };
        }
        GridSpec::new(d, &n[..d], &h, &origin, boundary.unwrap_or(self.boundary))
    }

    pub fn default_grid(&self) -> Result<GridSpec> {
        self.grid([self.n; 3], None)
    }

    /// Domain centre.
    pub fn centre(&self) -> [f64; 3] {
        let mut c = [0.0; 3];
        for a in 0..self.dim {
            c[a] = 0.5 * (self.lo[a] + self.hi[a]);
        }
        c
    }
}

pub fn gaussian_profile(r: f64) -> f64 {
    (-((r - GAUSS_R0) / GAUSS_W).powi(2)).exp()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn vortex_speed(r: f64) -> f64 {
    if r < 0.2 {
        5.0 * r
    } else {
        (2.0 - 5.0 * r).max(0.0)
    }
}

fn ring_speed(r: f64) -> f64 {
    if r < 0.1 {
        10.0 * r
    } else {
        (2.0 - 10.0 * r).max(0.0)
    }
}

/// Velocity of the vortex ring centred at the origin, in the plane `z = 0`.
pub fn vortex_ring_velocity(x: [f64; 3]) -> [f64; 3] {
    let rho = x[0].hypot(x[1]);
    let r = (rho - RING_R).hypot(x[2]);
    let v = ring_speed(r);
    if v == 0.0 || rho == 0.0 || r == 0.0 {
        return [0.0; 3];
    }
    let (sin_t, cos_t) = (x[2] / r, (rho - RING_R) / r);
    let (cos_p, sin_p) = (x[0] / rho, x[1] / rho);
    [-sin_t * cos_p * v / rho, -sin_t * sin_p * v / rho, cos_t * v / rho]
}

/// The continuous 2-d stationary mode `(10, -1, 0) 16π sin(2π(x + 10 y))`.
pub fn mode2d_continuous(x: [f64; 3]) -> Vec<f64> {
    let s = 16.0 * PI * (2.0 * PI * (x[0] + 10.0 * x[1])).sin();
    vec![10.0 * s, -s, 0.0]
}

/// Real part of the divergence-free 3-d mode `(2kz(ky - i), -2kx kz, 2i kx, 0) e^{ik·x}`.
pub fn mode3d_continuous(x: [f64; 3]) -> Vec<f64> {
    let [kx, ky, kz] = MODE3D_K;
    let e = C::from_polar(1.0, kx * x[0] + ky * x[1] + kz * x[2]);
    let amp = [C::new(2.0 * kz * ky, -2.0 * kz), C::new(-2.0 * kx * kz, 0.0), C::new(0.0, 2.0 * kx), C::new(0.0, 0.0)];
    amp.iter().map(|a| (a * e).re).collect()
}

/// Pointwise initial function of an analytic case.
pub fn initial_function(spec: &CaseSpec) -> Result<Box<dyn Fn([f64; 3]) -> Vec<f64>>> {
    let c = spec.centre();
    Ok(match spec.name.as_str() {
        "gaussian2d" | "gaussian3d" => {
            let dim = spec.dim;
            Box::new(move |x| {
                let d: Vec<f64> = (0..dim).map(|a| x[a] - c[a]).collect();
                let mut v = vec![0.0; dim + 1];
                v[dim] = gaussian_profile(norm(&d));
                v
            })
        }
        "vortex2d" => Box::new(move |x| {
            let (dx, dy) = (x[0] - c[0], x[1] - c[1]);
            let r = dx.hypot(dy);
            if r == 0.0 {
                return vec![0.0; 3];
            }
            let s = vortex_speed(r) / r;
            vec![-dy * s, dx * s, 0.0]
        }),
        "vortexring" => Box::new(move |x| {
            let v = vortex_ring_velocity([x[0] - c[0], x[1] - c[1], x[2] - c[2]]);
            vec![v[0], v[1], v[2], 0.0]
        }),
        "riemann2d" => Box::new(move |x| {
            let r2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2);
            vec![0.0, 0.0, if r2 < 0.08 { 2.0 } else { 1.0 }]
        }),
        "advect1d" => Box::new(|x| vec![(2.0 * PI * x[0]).sin()]),
        "wellprepared2d" => Box::new(mode2d_continuous),
        "mode3d" => Box::new(mode3d_continuous),
        other => return Err(Error::UnknownCase(other.to_string())),
    })
}

/// Point dofs by sampling `f`, averages by tensor Simpson quadrature of `f`.
pub fn state_from_function(grid: &GridSpec, m: usize, f: &dyn Fn([f64; 3]) -> Vec<f64>) -> State {
    let mut s = State::zeros(grid.clone(), m);
    let rule = quadrature(grid.dim, &SIMPSON);
    for cell in grid.cells_iter() {
        for &kind in Kind::all(grid.dim) {
            let v = if kind == Kind::A { cell_average(grid, cell, &rule, f) } else { f(grid.position(kind, cell)) };
            for (var, x) in v.into_iter().enumerate().take(m) {
                s.set(kind, var, cell, x);
            }
        }
    }
    s
}

/// Real part of `q̂ t^cell` on a periodic grid, with `t = exp(i k h)`.
pub fn mode_state(grid: &GridSpec, m: usize, qhat: &[C], k: [f64; 3]) -> Result<State> {
    let nk = grid.n_kinds();
    if qhat.len() != nk * m {
        return Err(Error::Mismatch(format!("mode has {} entries, expected {}", qhat.len(), nk * m)));
    }
    let mut s = State::zeros(grid.clone(), m);
    for cell in grid.cells_iter() {
        let ph: f64 = (0..grid.dim).map(|a| k[a] * cell[a] as f64 * grid.h[a]).sum();
        let e = C::from_polar(1.0, ph);
        for (ki, &kind) in Kind::all(grid.dim).iter().enumerate() {
            for v in 0..m {
                s.set(kind, v, cell, (qhat[ki * m + v] * e).re);
            }
        }
    }
    Ok(s)
}

/// The real discrete stationary mode of 2-d acoustics, closed form in cell indices.
fn wellprepared2d_state(grid: &GridSpec) -> State {
    let (dx, dy) = (grid.h[0], grid.h[1]);
    let mut s = State::zeros(grid.clone(), 3);
    let sin = f64::sin;
    let cos = f64::cos;
    for cell in grid.cells_iter() {
        let (x, y) = (cell[0] as f64 * dx, cell[1] as f64 * dy);
        let arg = 2.0 * PI * (x + 10.0 * y);
        let a = [
            8.0 * (2.0 + cos(2.0 * dx * PI)) * sin(20.0 * dy * PI) * sin(arg) / (3.0 * dy),
            -8.0 * (2.0 + cos(20.0 * dy * PI)) * sin(2.0 * dx * PI) * sin(arg) / (3.0 * dx),
        ];
        let arg_h = PI * (2.0 * x + 20.0 * y + 10.0 * dy);
        let eh = [
            4.0 * sin(10.0 * dy * PI) * sin(arg_h) * (3.0 + cos(2.0 * dx * PI)) / dy,
            -8.0 * cos(10.0 * dy * PI) * sin(2.0 * dx * PI) * sin(arg_h) / dx,
        ];
        let arg_v = PI * (dx + 2.0 * x + 20.0 * y);
        let ev = [
            8.0 * cos(dx * PI) * sin(20.0 * dy * PI) * sin(arg_v) / dy,
            -4.0 * (3.0 + cos(20.0 * dy * PI)) * sin(dx * PI) * sin(arg_v) / dx,
        ];
        let arg_n = 2.0 * PI * (dx / 2.0 + 10.0 * y + x + 5.0 * dy);
        let nd = [
            16.0 * cos(dx * PI) * sin(10.0 * dy * PI) * sin(arg_n) / dy,
            -16.0 * sin(dx * PI) * cos(10.0 * dy * PI) * sin(arg_n) / dx,
        ];
        for (kind, v) in [(Kind::A, a), (Kind::EH, eh), (Kind::EV, ev), (Kind::N, nd)] {
            s.set(kind, 0, cell, v[0]);
            s.set(kind, 1, cell, v[1]);
        }
    }
    s
}

fn mode3d_state(grid: &GridSpec) -> Result<State> {
    let t = TranslationFactors::from_wave_vector(MODE3D_K, grid.h);
    let q = spectral::combined_mode_3d(&t, grid.h)?;
    mode_state(grid, 4, &q, MODE3D_K)
}

pub fn init_case(spec: &CaseSpec, grid: &GridSpec) -> Result<State> {
    if grid.dim != spec.dim {
        return Err(Error::Mismatch(format!("case {} is {}-d, grid is {}-d", spec.name, spec.dim, grid.dim)));
    }
    let m = spec.model().m();
    let well = spec.prep == Preparation::WellPrepared;
    let mut s = match spec.name.as_str() {
        "wellprepared2d" if well => wellprepared2d_state(grid),
        "mode3d" if well => mode3d_state(grid)?,
        _ => state_from_function(grid, m, &*initial_function(spec)?),
    };
    s.sync_boundary();
    Ok(s)
}

/// Reference solution against which a case is measured over time.
pub enum CaseReference {
    /// Spherically symmetric radial solution about a centre.
    Radial { state: RadialState, centre: [f64; 3] },
    /// Exact translation of the initial profile.
    Advection { f: Box<dyn Fn([f64; 3]) -> Vec<f64>>, c: f64, length: f64 },
    /// Deviation from the initial data.
    Initial(State),
}

/// Default radial resolution used for the Gaussian references.
pub const RADIAL_N: usize = 200_000;

impl CaseReference {
    pub fn for_case(spec: &CaseSpec, initial: &State, radial_n: usize) -> Result<CaseReference> {
        Ok(match spec.name.as_str() {
            "gaussian2d" | "gaussian3d" => {
                let centre = spec.centre();
                let half: Vec<f64> = (0..spec.dim).map(|a| 0.5 * (spec.hi[a] - spec.lo[a])).collect();
                let r_max = norm(&half) + 0.1;
                CaseReference::Radial { state: RadialState::new(spec.dim, radial_n, r_max, gaussian_profile), centre }
            }
            "advect1d" => CaseReference::Advection {
                f: initial_function(spec)?,
                c: spec.c,
                length: spec.hi[0] - spec.lo[0],
            },
            _ => CaseReference::Initial(initial.clone()),
        })
    }

    pub fn l1(&mut self, state: &State, kinds: &[Kind]) -> Result<Vec<f64>> {
        match self {
            CaseReference::Radial { state: rs, centre } => {
                rs.advance(state.time);
                let (rs, centre) = (&*rs, *centre);
                let dim = state.grid.dim;
                let f = move |x: [f64; 3]| {
                    let d: Vec<f64> = (0..dim).map(|a| x[a] - centre[a]).collect();
                    let r = norm(&d);
                    let (ur, p) = rs.eval(r);
                    let mut v: Vec<f64> = d.iter().map(|di| if r > 0.0 { ur * di / r } else { 0.0 }).collect();
                    v.push(p);
                    v
                };
                Ok(l1_error(state, &f, kinds))
            }
            CaseReference::Advection { f, c, length } => {
                let (shift, len) = (*c * state.time, *length);
                let g = |x: [f64; 3]| f([(x[0] - shift).rem_euclid(len), 0.0, 0.0]);
                Ok(l1_error(state, &g, kinds))
            }
            CaseReference::Initial(s0) => l1_distance(state, s0, kinds),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub step: usize,
    pub l1: Vec<f64>,
    pub div: Option<DivergenceReport>,
    pub mass: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub state: State,
    pub series: Vec<SeriesRow>,
    pub dt: f64,
    pub steps: usize,
}

/// Time step and step count of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPlan {
    pub dt: f64,
    pub steps: usize,
}

impl StepPlan {
    /// From a CFL number or an explicit `dt`, and an end time or an explicit step count.
    /// With an end time the step is shrunk so that it is reached exactly.
    pub fn new(grid: &GridSpec, model: &Model, cfl: Option<f64>, dt: Option<f64>, t_end: Option<f64>, steps: Option<usize>) -> Result<StepPlan> {
        let dt = match (cfl, dt) {
            (Some(c), None) if c > 0.0 => dt_from_cfl(c, grid, model),
            (None, Some(d)) if d > 0.0 => d,
            (Some(_), Some(_)) => return Err(Error::Invalid("give either a CFL number or a time step, not both".into())),
            _ => return Err(Error::Invalid("a positive CFL number or time step is required".into())),
        };
        match (t_end, steps) {
            (Some(t), None) if t >= 0.0 => {
                let n = (t / dt - 1e-9).ceil().max(0.0) as usize;
                Ok(StepPlan { dt: if n == 0 { dt } else { t / n as f64 }, steps: n })
            }
            (None, Some(n)) => Ok(StepPlan { dt, steps: n }),
            (Some(_), Some(_)) => Err(Error::Invalid("give either an end time or a step count, not both".into())),
            _ => Err(Error::Invalid("a non-negative end time or a step count is required".into())),
        }
    }
}

/// Integrates a case, recording `samples + 1` evenly spaced rows of the time series.
/// A non-finite state aborts the run with [`Error::Unstable`].
pub fn run_case(
    spec: &CaseSpec,
    initial: State,
    plan: StepPlan,
    reference: &mut CaseReference,
    mut on_row: impl FnMut(&SeriesRow),
) -> Result<RunOutcome> {
    let model = spec.model();
    let grid = initial.grid.clone();
    let mut stepper = Stepper::new(Scheme::new(model, spec.splitting, &grid)?);
    let mut state = initial;
    let mut series = Vec::new();
    let samples = spec.samples.max(1);
    let is_sample = |s: usize| s == 0 || s == plan.steps || (s * samples) / plan.steps.max(1) != ((s - 1) * samples) / plan.steps.max(1);
    let mut record = |state: &State, step: usize, series: &mut Vec<SeriesRow>| -> Result<()> {
        let row = SeriesRow {
            t: state.time,
            step,
            l1: reference.l1(state, &spec.error_kinds)?,
            div: if grid.dim == 2 && state.m == 3 { Some(discrete_divergences(state)?) } else { None },
            mass: total_average(state),
        };
        on_row(&row);
        series.push(row);
        Ok(())
    };
    record(&state, 0, &mut series)?;
    for step in 1..=plan.steps {
        stepper.step(&mut state, plan.dt)?;
        if !state.is_finite() {
            return Err(Error::Unstable(state.time));
        }
        if is_sample(step) {
            record(&state, step, &mut series)?;
        }
    }
    Ok(RunOutcome { state, series, dt: plan.dt, steps: plan.steps })
}

/// Observed order `log(e1/e2) / log(h1/h2)`; NaN when undefined.
pub fn observed_order(e1: f64, e2: f64, h1: f64, h2: f64) -> f64 {
    if h1 == h2 || e1 <= 0.0 || e2 <= 0.0 {
        return f64::NAN;
    }
    (e1 / e2).ln() / (h1 / h2).ln()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    /// Average-dof L1 error per variable at the end time.
    pub l1: Vec<f64>,
}

/// Runs a case to its end time on each grid size and measures the average-dof error.
/// One reference is shared by all runs.
pub fn convergence_study(spec: &CaseSpec, ns: &[usize], radial_n: usize) -> Result<Vec<ConvergenceRow>> {
    let mut quiet = spec.clone();
    quiet.samples = 1;
    let mut reference: Option<CaseReference> = None;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = spec.grid([n; 3], None)?;
        let s0 = init_case(spec, &grid)?;
        let plan = StepPlan::new(&grid, &spec.model(), Some(spec.cfl), None, Some(spec.t_end), None)?;
        let r = match reference.take() {
            Some(r) if !matches!(r, CaseReference::Initial(_)) => r,
            _ => CaseReference::for_case(spec, &s0, radial_n)?,
        };
        let r = reference.insert(r);
        let out = run_case(&quiet, s0, plan, r, |_| {})?;
        rows.push(ConvergenceRow { n, h: grid.h[0], l1: r.l1(&out.state, &[Kind::A])? });
    }
    Ok(rows)
}

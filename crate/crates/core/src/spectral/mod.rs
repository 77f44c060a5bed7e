//! Discrete Fourier analysis of the semi-discrete scheme: evolution matrices,
//! stationary kernels, amplification spectra and stability limits.
//!
//! A grid function `q_cell = q̂ · t^cell` with translation factors `t_a = exp(i k_a h_a)`
//! evolves as `dq̂/dt + E q̂ = 0`. Rows and columns of `E` follow the storage slot
//! order `kind * m + var`, so `E` has blocks `(A, EH, EV, N)` in 2-d and
//! `(A, Ex, Ey, Ez, Fx, Fy, Fz, N)` in 3-d.

pub mod tables;

use crate::error::{Error, Result};
use crate::grid::{resolve_offset, Boundary, GridSpec, Kind, State};
use crate::laurent::Laurent;
use crate::linalg::{self, CMat, C};
use crate::poly::to_f64;
use crate::reconstruction::{build_deriv_ops, Side};
use crate::scheme::{face_points, jacobian_split, Model, Scheme, Splitting};
use std::f64::consts::PI;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Spectral radius threshold used by the stability bisection.
pub const STABILITY_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    Advection1d,
    Acoustics2d,
    Acoustics3d,
}

impl Problem {
    pub fn dim(self) -> usize {
        match self {
            Problem::Advection1d => 1,
            Problem::Acoustics2d => 2,
            Problem::Acoustics3d => 3,
        }
    }

    pub fn m(self) -> usize {
        match self {
            Problem::Advection1d => 1,
            Problem::Acoustics2d => 3,
            Problem::Acoustics3d => 4,
        }
    }

    /// Side length of the evolution matrix.
    pub fn size(self) -> usize {
        self.m() * Kind::all(self.dim()).len()
    }

    pub fn model(self, c: f64) -> Model {
        match self {
            Problem::Advection1d => Model::advection(c),
            _ => Model::acoustics(self.dim(), c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::Advection1d => "advect1d",
            Problem::Acoustics2d => "acoustics2d",
            Problem::Acoustics3d => "acoustics3d",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Problem::Advection1d, Problem::Acoustics2d, Problem::Acoustics3d]
            .into_iter()
            .find(|p| p.name() == s)
    }

    /// Dimension of the kernel of the PDE symbol (stationary states per wave vector).
    pub fn pde_kernel_dim(self) -> usize {
        self.dim() - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationFactors {
    pub t: [C; 3],
}

impl TranslationFactors {
    pub fn ones() -> Self {
        TranslationFactors { t: [C::new(1.0, 0.0); 3] }
    }

    pub fn new(t: [C; 3]) -> Self {
        TranslationFactors { t }
    }

    /// `t_a = exp(i β_a)` with `β_a = k_a h_a`.
    pub fn from_phases(beta: [f64; 3]) -> Self {
        TranslationFactors { t: beta.map(|b| C::from_polar(1.0, b)) }
    }

    pub fn from_wave_vector(k: [f64; 3], h: [f64; 3]) -> Self {
        TranslationFactors::from_phases([k[0] * h[0], k[1] * h[1], k[2] * h[2]])
    }

    /// Distance of the active factors from the special values `0, ±1`.
    pub fn genericity(&self, dim: usize) -> f64 {
        self.t[..dim]
            .iter()
            .map(|t| t.norm().min((t - 1.0).norm()).min((t + 1.0).norm()))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evolution matrix as a matrix of Laurent polynomials in the translation factors.
#[derive(Clone, Debug)]
pub struct SymbolMatrix {
    pub n: usize,
    pub entries: Vec<Laurent>,
}

impl SymbolMatrix {
    pub fn at(&self, i: usize, j: usize) -> &Laurent {
        &self.entries[i * self.n + j]
    }

    fn add(&mut self, i: usize, j: usize, l: &Laurent) {
        let e = &mut self.entries[i * self.n + j];
        *e = &*e + l;
    }

    pub fn eval(&self, t: &TranslationFactors) -> CMat {
        CMat { n: self.n, a: self.entries.iter().map(|l| l.eval(t.t)).collect() }
    }
}

fn check_h(problem: Problem, h: [f64; 3]) -> Result<()> {
    if h[..problem.dim()].iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Invalid(format!("cell sizes {h:?} must be positive")));
    }
    Ok(())
}

/// Symbol of the scheme built from the face quadrature, the derivative stencils and the
/// Jacobian splitting.
pub fn symbol(problem: Problem, splitting: Splitting, c: f64, h: [f64; 3]) -> Result<SymbolMatrix> {
    check_h(problem, h)?;
    let (dim, m) = (problem.dim(), problem.m());
    let model = problem.model(c);
    let derivs = build_deriv_ops(dim, &h[..dim]);
    let n = problem.size();
    let mut e = SymbolMatrix { n, entries: vec![Laurent::zero(); n * n] };
    let slot = |k: Kind, v: usize| k.index(dim) * m + v;
    for axis in 0..dim {
        let j = model.jacobian(axis);
        for (o, w) in face_points(dim, axis) {
            let (kind, shift) = resolve_offset(dim, Some(o));
            let mut lower = shift;
            lower[axis] -= 1;
            let diff = &Laurent::monomial(shift, w / h[axis]) - &Laurent::monomial(lower, w / h[axis]);
            for ov in 0..m {
                for iv in 0..m {
                    if j.at(ov, iv) != 0.0 {
                        e.add(slot(Kind::A, ov), slot(kind, iv), &diff.scale(j.at(ov, iv)));
                    }
                }
            }
        }
        let (jp, jm) = jacobian_split(&model, axis, splitting)?;
        for &target in Kind::all(dim).iter().filter(|k| k.is_point()) {
            for (mat, side) in [(&jp, Side::Own), (&jm, Side::Neighbor)] {
                let op = derivs.get(target, axis, side);
                for ov in 0..m {
                    for iv in 0..m {
                        let a = mat.at(ov, iv);
                        if a == 0.0 {
                            continue;
                        }
                        for st in &op.stencil {
                            let l = Laurent::monomial(st.shift, a * to_f64(st.coeff) / h[axis]);
                            e.add(slot(target, ov), slot(st.kind, iv), &l);
                        }
                    }
                }
            }
        }
    }
    Ok(e)
}

/// `E(t)` for the given problem and splitting.
pub fn assemble_e(
    problem: Problem,
    splitting: Splitting,
    c: f64,
    h: [f64; 3],
    t: &TranslationFactors,
) -> Result<CMat> {
    Ok(symbol(problem, splitting, c, h)?.eval(t))
}

/// `E` measured by applying the grid operator to complex exponential modes on a periodic
/// grid. `wave` counts periods per domain length along each axis and must be integral.
pub fn assemble_e_from_grid(
    problem: Problem,
    splitting: Splitting,
    c: f64,
    grid: &GridSpec,
    wave: [f64; 3],
) -> Result<CMat> {
    let dim = problem.dim();
    if grid.dim != dim {
        return Err(Error::Mismatch(format!("{}-d problem on a {}-d grid", dim, grid.dim)));
    }
    if grid.boundary != Boundary::Periodic {
        return Err(Error::NotCommensurate("Fourier modes need a periodic grid".into()));
    }
    for a in 0..dim {
        if (wave[a] - wave[a].round()).abs() > 1e-12 {
            return Err(Error::NotCommensurate(format!("wave index {} along axis {a} is not an integer", wave[a])));
        }
    }
    let m = problem.m();
    let size = problem.size();
    let scheme = Scheme::new(problem.model(c), splitting, grid)?;
    let phase = |cell: [usize; 3]| -> f64 {
        (0..dim).map(|a| 2.0 * PI * wave[a].round() * cell[a] as f64 / grid.n[a] as f64).sum()
    };
    let ncell = grid.cells();
    let cells: Vec<[usize; 3]> = grid.cells_iter().collect();
    let mut e = CMat::zeros(size);
    let mut re = State::zeros(grid.clone(), m);
    let mut im = State::zeros(grid.clone(), m);
    let mut out = vec![0.0; re.as_slice().len()];
    for col in 0..size {
        for (part, state) in [(0, &mut re), (1, &mut im)] {
            let data = state.as_mut_slice();
            data.iter_mut().for_each(|v| *v = 0.0);
            for cell in &cells {
                let ph = phase(*cell);
                data[col * ncell + grid.index(*cell)] = if part == 0 { ph.cos() } else { ph.sin() };
            }
        }
        let origin = grid.index([0, 0, 0]);
        scheme.apply(re.as_slice(), &mut out);
        let tr: Vec<f64> = (0..size).map(|r| out[r * ncell + origin]).collect();
        scheme.apply(im.as_slice(), &mut out);
        for r in 0..size {
            e.set(r, col, -C::new(tr[r], out[r * ncell + origin]));
        }
    }
    Ok(e)
}

/// Upwind `E` from the closed-form tables (2-d with errata applied, 3-d as printed).
pub fn closed_form_e(problem: Problem, c: f64, h: [f64; 3], t: &TranslationFactors) -> Result<CMat> {
    tables::evolution_matrix(problem, c, h, t.t, true)
}

pub fn kernel_dim(e: &CMat, tol: f64) -> usize {
    let s = linalg::singular_values(e);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return e.n;
    }
    s.iter().filter(|&&x| x < tol * smax).count()
}

/// Orthonormal basis of the numerical null space.
pub fn kernel_basis(e: &CMat, tol: f64) -> Vec<Vec<C>> {
    let svd = linalg::svd(e);
    let smax = svd.sigma.iter().cloned().fold(0.0, f64::max);
    (0..e.n)
        .filter(|&j| smax == 0.0 || svd.sigma[j] < tol * smax)
        .map(|j| (0..e.n).map(|i| svd.v.at(i, j)).collect())
        .collect()
}

fn check_generic(problem: Problem, t: &TranslationFactors) -> Result<()> {
    let g = t.genericity(problem.dim());
    if g < 1e-12 {
        return Err(Error::Degenerate(format!("translation factors {:?} hit 0 or ±1", &t.t[..problem.dim()])));
    }
    Ok(())
}

/// Closed-form stationary modes: one vector in 2-d, five in 3-d.
pub fn kernel_vector_closed_form(problem: Problem, t: &TranslationFactors, h: [f64; 3]) -> Result<Vec<Vec<C>>> {
    check_generic(problem, t)?;
    let v = tables::kernel_vectors(problem, t.t, h)?;
    if v.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Degenerate("closed form has a vanishing denominator".into()));
    }
    Ok(v)
}

/// The 3-d mode `Σ a_r Q_r` with the printed coefficients, summed from the parts.
pub fn combined_mode_3d_from_parts(t: &TranslationFactors, h: [f64; 3]) -> Result<Vec<C>> {
    let q = kernel_vector_closed_form(Problem::Acoustics3d, t, h)?;
    let a = tables::coefficients_3d(t.t, h)?;
    Ok((0..32).map(|i| (0..5).map(|r| a[r] * q[r][i]).sum()).collect())
}

/// The 3-d mode `Σ a_r Q_r` in its printed simplified form.
pub fn combined_mode_3d(t: &TranslationFactors, h: [f64; 3]) -> Result<Vec<C>> {
    check_generic(Problem::Acoustics3d, t)?;
    tables::combined_mode_3d(t.t, h)
}

/// `‖E v‖ / (‖E‖₂ ‖v‖)`.
pub fn relative_residual(e: &CMat, v: &[C]) -> f64 {
    let r = linalg::vec_norm(&e.mul_vec(v));
    let d = e.norm2() * linalg::vec_norm(v);
    if d == 0.0 {
        r
    } else {
        r / d
    }
}

/// RK3 amplification `1 - dt E + dt² E²/2 - dt³ E³/6`.
pub fn amplification(e: &CMat, dt: f64) -> CMat {
    let n = e.n;
    let z = e.scale(C::new(-dt, 0.0));
    // Horner: 1 + z(1 + z/2 (1 + z/3))
    let id = CMat::identity(n);
    let inner = id.add(&z.scale(C::new(1.0 / 3.0, 0.0)));
    let mid = id.add(&z.mul(&inner).scale(C::new(0.5, 0.0)));
    id.add(&z.mul(&mid))
}

/// Amplification of one eigenvalue `λ` of `E`.
pub fn rk3_factor(lambda: C, dt: f64) -> C {
    let z = -lambda * dt;
    C::new(1.0, 0.0) + z * (C::new(1.0, 0.0) + z * 0.5 * (C::new(1.0, 0.0) + z / 3.0))
}

/// Eigenvalue moduli in ascending order.
pub fn eigen_moduli(a: &CMat) -> Result<Vec<f64>> {
    let mut m: Vec<f64> = linalg::eigenvalues(a)?.iter().map(|z| z.norm()).collect();
    m.sort_by(|x, y| x.total_cmp(y));
    Ok(m)
}

pub fn det_e(e: &CMat) -> C {
    linalg::det(e)
}

/// Published closed form of `det E` for the Rusanov splitting at `t_x = t_y = -1`.
pub fn rusanov_det_closed_form(c: f64, dx: f64, dy: f64) -> f64 {
    110592.0 * c.powi(6) * (dx + dy).powi(4) * (dx * dy + 2.0 * c * c * (dx * dx - dx * dy + dy * dy))
        / (dx.powi(9) * dy.powi(9))
}

/// Phases `β ∈ [-π, π]^dim` for stability scans: a uniform midpoint lattice with about
/// `samples` points (never containing `β = 0`), plus the axis and diagonal rays.
pub fn stability_phases(dim: usize, samples: usize) -> Vec<[f64; 3]> {
    let per = ((samples as f64).powf(1.0 / dim as f64).ceil() as usize).max(2);
    let per = per + per % 2;
    let coord = |j: usize| -PI + 2.0 * PI * (j as f64 + 0.5) / per as f64;
    let mut out = Vec::new();
    for idx in 0..per.pow(dim as u32) {
        let mut b = [0.0; 3];
        for (a, ba) in b.iter_mut().enumerate().take(dim) {
            *ba = coord((idx / per.pow(a as u32)) % per);
        }
        out.push(b);
    }
    if dim > 1 {
        let rays: Vec<[f64; 3]> = match dim {
            2 => vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [1.0, -1.0, 0.0]],
            _ => vec![
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [1.0, 1.0, 0.0],
                [1.0, 0.0, 1.0],
                [0.0, 1.0, 1.0],
                [1.0, 1.0, 1.0],
            ],
        };
        let steps = samples.max(8);
        for r in rays {
            for s in 1..=steps {
                let f = PI * s as f64 / steps as f64;
                out.push([r[0] * f, r[1] * f, r[2] * f]);
            }
        }
    }
    out
}

/// Largest `dt` for which every sampled amplification matrix has spectral radius at most
/// `1 + STABILITY_SLACK`. Uses the spectral mapping `λ(A) = p(λ(E))`.
pub fn max_stable_dt(problem: Problem, splitting: Splitting, c: f64, h: [f64; 3], samples: usize) -> Result<f64> {
    if samples < 64 {
        return Err(Error::Invalid(format!("need at least 64 k-samples, got {samples}")));
    }
    let sym = symbol(problem, splitting, c, h)?;
    let mut lambdas = Vec::new();
    for beta in stability_phases(problem.dim(), samples) {
        lambdas.extend(linalg::eigenvalues(&sym.eval(&TranslationFactors::from_phases(beta)))?);
    }
    let stable = |dt: f64| lambdas.iter().all(|&l| rk3_factor(l, dt).norm() <= 1.0 + STABILITY_SLACK);
    let hmin = h[..problem.dim()].iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = hmin / c.abs();
    let mut lo = 0.0;
    while stable(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 * hmin / c.abs() {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Amplification moduli along the ray `k = s (cos φ, sin φ)` (2-d) or `k = s` (1-d).
pub fn moduli_along_ray(
    problem: Problem,
    splitting: Splitting,
    c: f64,
    h: [f64; 3],
    phi: f64,
    s_values: &[f64],
    dt: f64,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let sym = symbol(problem, splitting, c, h)?;
    let dir = match problem.dim() {
        1 => [1.0, 0.0, 0.0],
        2 => [phi.cos(), phi.sin(), 0.0],
        _ => return Err(Error::Invalid("ray scans are defined for 1-d and 2-d".into())),
    };
    s_values
        .iter()
        .map(|&s| {
            let t = TranslationFactors::from_wave_vector([s * dir[0], s * dir[1], 0.0], h);
            let e = sym.eval(&t);
            Ok((s, eigen_moduli(&amplification(&e, dt))?))
        })
        .collect()
}

//! Semi-discrete Active Flux right-hand side and RK3 time stepping.
//!
//! Averages are updated by flux differences with Simpson quadrature over each
//! face; point values by `-Σ_a (J_a⁺ D_a + J_a⁻ D*_a) q`. The whole update is
//! compiled once into a list of `(output slot, input slot, cell shift, coeff)`
//! terms and then swept over the lattice row by row.

use crate::error::{Error, Result};
use crate::grid::{resolve_offset, GridSpec, Kind, State};
use crate::poly::to_f64;
use crate::reconstruction::{build_deriv_ops, DerivTable, Side};
use std::collections::BTreeMap;

/// Dense real square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        RMat { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn add(&self, o: &RMat) -> RMat {
        RMat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, k: f64) -> RMat {
        RMat { n: self.n, a: self.a.iter().map(|x| x * k).collect() }
    }

    pub fn max_abs_diff(&self, o: &RMat) -> f64 {
        self.a.iter().zip(&o.a).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcousticsModel {
    pub dim: usize,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvectionModel {
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Acoustics(AcousticsModel),
    Advection(AdvectionModel),
}

impl Model {
    pub fn acoustics(dim: usize, c: f64) -> Self {
        Model::Acoustics(AcousticsModel { dim, c })
    }

    pub fn advection(c: f64) -> Self {
        Model::Advection(AdvectionModel { c })
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::Acoustics(a) => a.dim,
            Model::Advection(_) => 1,
        }
    }

    /// Number of variables.
    pub fn m(&self) -> usize {
        match self {
            Model::Acoustics(a) => a.dim + 1,
            Model::Advection(_) => 1,
        }
    }

    pub fn speed(&self) -> f64 {
        match self {
            Model::Acoustics(a) => a.c,
            Model::Advection(a) => a.c.abs(),
        }
    }

    /// Flux Jacobian along `axis`; acoustics vars are `(u, v[, w], p)`.
    pub fn jacobian(&self, axis: usize) -> RMat {
        match self {
            Model::Acoustics(a) => {
                let m = a.dim + 1;
                let mut j = RMat::zeros(m);
                j.set(axis, m - 1, a.c);
                j.set(m - 1, axis, a.c);
                j
            }
            Model::Advection(a) => RMat { n: 1, a: vec![a.c] },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Splitting {
    Upwind,
    Central,
    /// `(J ± a 1) / 2` with `a` the spectral radius of `J`.
    Rusanov,
    /// `J ± a 1` without the factor one half.
    RusanovFull,
}

impl Splitting {
    pub fn name(self) -> &'static str {
        match self {
            Splitting::Upwind => "upwind",
            Splitting::Central => "central",
            Splitting::Rusanov => "rusanov",
            Splitting::RusanovFull => "rusanov-full",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "upwind" => Some(Splitting::Upwind),
            "central" => Some(Splitting::Central),
            "rusanov" => Some(Splitting::Rusanov),
            "rusanov-full" => Some(Splitting::RusanovFull),
            _ => None,
        }
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the eigenvectors as columns.
pub fn symmetric_eigen(m: &RMat) -> (Vec<f64>, RMat) {
    let n = m.n;
    let mut a = m.clone();
    let mut v = RMat::identity(n);
    let scale = a.a.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.at(i, j).powi(2))
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.at(p, q);
                if apq == 0.0 {
                    continue;
                }
                let tau = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a.at(k, p), a.at(k, q));
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (a.at(p, k), a.at(q, k));
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let (vkp, vkq) = (v.at(k, p), v.at(k, q));
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    ((0..n).map(|i| a.at(i, i)).collect(), v)
}

fn recompose(vals: &[f64], vecs: &RMat, f: impl Fn(f64) -> f64) -> RMat {
    let n = vecs.n;
    let mut out = RMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (0..n).map(|k| vecs.at(i, k) * f(vals[k]) * vecs.at(j, k)).sum();
            out.set(i, j, s);
        }
    }
    // round-off from the rotations would otherwise leave dense matrices
    let big = out.a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    out.a.iter_mut().for_each(|x| {
        if x.abs() <= 1e-14 * big {
            *x = 0.0
        }
    });
    out
}

/// `(J⁺, J⁻)` with `J⁺ + J⁻ = J`.
pub fn jacobian_split(model: &Model, axis: usize, splitting: Splitting) -> Result<(RMat, RMat)> {
    let j = model.jacobian(axis);
    let n = j.n;
    for r in 0..n {
        for c in 0..r {
            if j.at(r, c) != j.at(c, r) {
                return Err(Error::NotDiagonalizable(axis));
            }
        }
    }
    let (vals, vecs) = symmetric_eigen(&j);
    let a = vals.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    Ok(match splitting {
        Splitting::Upwind => (
            recompose(&vals, &vecs, |l| l.max(0.0)),
            recompose(&vals, &vecs, |l| l.min(0.0)),
        ),
        Splitting::Central => (j.scale(0.5), j.scale(0.5)),
        Splitting::Rusanov => (
            j.add(&RMat::identity(n).scale(a)).scale(0.5),
            j.add(&RMat::identity(n).scale(-a)).scale(0.5),
        ),
        Splitting::RusanovFull => (
            j.add(&RMat::identity(n).scale(a)),
            j.add(&RMat::identity(n).scale(-a)),
        ),
    })
}

/// Simpson weight of a tangential face offset.
fn simpson(o: i32) -> f64 {
    if o == 0 {
        4.0 / 6.0
    } else {
        1.0 / 6.0
    }
}

/// Offsets of the face points on the upper face along `axis`, with their quadrature weights.
pub fn face_points(dim: usize, axis: usize) -> Vec<([i32; 3], f64)> {
    let tang: Vec<usize> = (0..dim).filter(|&a| a != axis).collect();
    let count = 3usize.pow(tang.len() as u32);
    (0..count)
        .map(|r| {
            let mut o = [0i32; 3];
            o[axis] = 1;
            let mut w = 1.0;
            for (i, &a) in tang.iter().enumerate() {
                let oi = ((r / 3usize.pow(i as u32)) % 3) as i32 - 1;
                o[a] = oi;
                w *= simpson(oi);
            }
            (o, w)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub out_slot: usize,
    pub in_slot: usize,
    pub shift: [i32; 3],
    pub coeff: f64,
}

/// Terms sharing an output slot and an input variable. Their coefficients sum to
/// zero, so they are applied to differences against a reference input and
/// constant states produce an exactly vanishing tendency.
#[derive(Clone, Debug)]
struct Group {
    out_slot: usize,
    ref_slot: usize,
    ref_shift: [i32; 3],
    terms: Vec<Term>,
}

/// Linear tendency operator of one model/splitting on one grid.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub model: Model,
    pub splitting: Splitting,
    pub grid: GridSpec,
    pub derivs: DerivTable,
    terms: Vec<Term>,
    groups: Vec<Group>,
}

fn compile(model: &Model, splitting: Splitting, grid: &GridSpec, derivs: &DerivTable) -> Result<Vec<Term>> {
    let dim = grid.dim;
    let m = model.m();
    let slot = |k: Kind, v: usize| k.index(dim) * m + v;
    let mut acc: BTreeMap<(usize, usize, [i32; 3]), f64> = BTreeMap::new();
    let mut add = |o: usize, i: usize, s: [i32; 3], c: f64| {
        if c != 0.0 {
            *acc.entry((o, i, s)).or_insert(0.0) += c;
        }
    };
    for axis in 0..dim {
        let j = model.jacobian(axis);
        let h = grid.h[axis];
        for (o, w) in face_points(dim, axis) {
            let (kind, shift) = resolve_offset(dim, Some(o));
            let mut lower = shift;
            lower[axis] -= 1;
            for ov in 0..m {
                for iv in 0..m {
                    let c = j.at(ov, iv) * w / h;
                    if c != 0.0 {
                        add(slot(Kind::A, ov), slot(kind, iv), shift, -c);
                        add(slot(Kind::A, ov), slot(kind, iv), lower, c);
                    }
                }
            }
        }
        let (jp, jm) = jacobian_split(model, axis, splitting)?;
        for &target in Kind::all(dim).iter().filter(|k| k.is_point()) {
            for (mat, side) in [(&jp, Side::Own), (&jm, Side::Neighbor)] {
                let op = derivs.get(target, axis, side);
                for e in &op.stencil {
                    let d = to_f64(e.coeff) / h;
                    for ov in 0..m {
                        for iv in 0..m {
                            let c = mat.at(ov, iv) * d;
                            if c != 0.0 {
                                add(slot(target, ov), slot(e.kind, iv), e.shift, -c);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|((out_slot, in_slot, shift), coeff)| Term { out_slot, in_slot, shift, coeff })
        .collect())
}

fn group(terms: &[Term], m: usize) -> Vec<Group> {
    let mut map: BTreeMap<(usize, usize), Vec<Term>> = BTreeMap::new();
    for t in terms {
        map.entry((t.out_slot, t.in_slot % m)).or_default().push(*t);
    }
    map.into_iter()
        .map(|((out_slot, _), ts)| {
            let r = ts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.coeff.abs().total_cmp(&b.1.coeff.abs()))
                .map(|(i, _)| i)
                .unwrap();
            let (ref_slot, ref_shift) = (ts[r].in_slot, ts[r].shift);
            let terms = ts.into_iter().enumerate().filter(|(i, _)| *i != r).map(|(_, t)| t).collect();
            Group { out_slot, ref_slot, ref_shift, terms }
        })
        .collect()
}

impl Scheme {
    pub fn new(model: Model, splitting: Splitting, grid: &GridSpec) -> Result<Self> {
        if model.dim() != grid.dim {
            return Err(Error::Mismatch(format!(
                "{}-d model on a {}-d grid",
                model.dim(),
                grid.dim
            )));
        }
        let derivs = build_deriv_ops(grid.dim, &grid.h[..grid.dim]);
        Scheme::with_derivs(model, splitting, grid, derivs)
    }

    pub fn with_derivs(model: Model, splitting: Splitting, grid: &GridSpec, derivs: DerivTable) -> Result<Self> {
        if model.dim() != grid.dim || derivs.dim != grid.dim {
            return Err(Error::Mismatch("model, grid and stencils disagree on dimension".into()));
        }
        let terms = compile(&model, splitting, grid, &derivs)?;
        let groups = group(&terms, model.m());
        Ok(Scheme { model, splitting, grid: grid.clone(), derivs, terms, groups })
    }

    /// The compiled operator as a flat list of terms.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn m(&self) -> usize {
        self.model.m()
    }

    fn check(&self, state: &State) -> Result<()> {
        if state.grid != self.grid || state.m != self.m() {
            return Err(Error::Mismatch("state does not match the scheme's grid or model".into()));
        }
        Ok(())
    }

    /// Tendency `dq/dt` written into `out` (same layout as the state data).
    pub fn apply(&self, q: &[f64], out: &mut [f64]) {
        let g = &self.grid;
        let n = g.cells();
        let [nx, ny, nz] = g.n;
        let kinds = Kind::all(g.dim);
        let m = self.m();
        debug_assert_eq!(q.len(), out.len());
        out.iter_mut().for_each(|v| *v = 0.0);
        let wrap_row = |k: usize, j: usize, s: [i32; 3], kind: Kind| {
            let kk = if g.dim > 2 { g.wrap_kind(2, k as i64 + s[2] as i64, kind) } else { k };
            let jj = if g.dim > 1 { g.wrap_kind(1, j as i64 + s[1] as i64, kind) } else { j };
            (kk * ny + jj) * nx
        };
        for gr in &self.groups {
            let dst = &mut out[gr.out_slot * n..(gr.out_slot + 1) * n];
            let rsrc = &q[gr.ref_slot * n..(gr.ref_slot + 1) * n];
            let rkind = kinds[gr.ref_slot / m];
            let rx = gr.ref_shift[0];
            let rlast = g.last_free(0, rkind) as i32;
            for t in &gr.terms {
                let src = &q[t.in_slot * n..(t.in_slot + 1) * n];
                let kind = kinds[t.in_slot / m];
                let sx = t.shift[0];
                let c = t.coeff;
                // x-range where both shifted reads hit independent values of the row
                let lo = (-sx).max(-rx).max(0) as usize;
                let hi = ((g.last_free(0, kind) as i32 - sx).min(rlast - rx).min(nx as i32 - 1) + 1).max(0) as usize;
                for k in 0..nz {
                    for j in 0..ny {
                        let o0 = (k * ny + j) * nx;
                        let orow = &mut dst[o0..o0 + nx];
                        let i0 = wrap_row(k, j, t.shift, kind);
                        let irow = &src[i0..i0 + nx];
                        let r0 = wrap_row(k, j, gr.ref_shift, rkind);
                        let rrow = &rsrc[r0..r0 + nx];
                        if lo < hi {
                            let a = &irow[(lo as isize + sx as isize) as usize..(hi as isize + sx as isize) as usize];
                            let b = &rrow[(lo as isize + rx as isize) as usize..(hi as isize + rx as isize) as usize];
                            for ((o, v), r) in orow[lo..hi].iter_mut().zip(a).zip(b) {
                                *o += c * (v - r);
                            }
                        }
                        for i in (0..lo.min(nx)).chain(hi.max(lo)..nx) {
                            let v = irow[g.wrap_kind(0, i as i64 + sx as i64, kind)];
                            let r = rrow[g.wrap_kind(0, i as i64 + rx as i64, rkind)];
                            orow[i] += c * (v - r);
                        }
                    }
                }
            }
        }
    }

    pub fn rhs(&self, state: &State) -> Result<State> {
        self.check(state)?;
        let mut out = State::zeros(self.grid.clone(), self.m());
        self.apply(state.as_slice(), out.as_mut_slice());
        out.time = state.time;
        Ok(out)
    }
}

/// Tendency of `state` under the given model and splitting.
pub fn rhs(state: &State, model: &Model, splitting: Splitting, derivs: &DerivTable) -> Result<State> {
    Scheme::with_derivs(*model, splitting, &state.grid, derivs.clone())?.rhs(state)
}

/// Three-stage Kutta method with weights (1/6, 2/3, 1/6) and reusable stage buffers.
#[derive(Clone, Debug)]
pub struct Stepper {
    pub scheme: Scheme,
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    tmp: Vec<f64>,
}

impl Stepper {
    pub fn new(scheme: Scheme) -> Self {
        let len = scheme.grid.cells() * scheme.grid.n_kinds() * scheme.m();
        Stepper { scheme, k1: vec![0.0; len], k2: vec![0.0; len], k3: vec![0.0; len], tmp: vec![0.0; len] }
    }

    pub fn step(&mut self, state: &mut State, dt: f64) -> Result<()> {
        self.scheme.check(state)?;
        let q = state.as_mut_slice();
        self.scheme.apply(q, &mut self.k1);
        for ((t, a), b) in self.tmp.iter_mut().zip(q.iter()).zip(&self.k1) {
            *t = a + 0.5 * dt * b;
        }
        self.scheme.apply(&self.tmp, &mut self.k2);
        for (((t, a), b), c) in self.tmp.iter_mut().zip(q.iter()).zip(&self.k1).zip(&self.k2) {
            *t = a - dt * b + 2.0 * dt * c;
        }
        self.scheme.apply(&self.tmp, &mut self.k3);
        for (((a, b), c), d) in q.iter_mut().zip(&self.k1).zip(&self.k2).zip(&self.k3) {
            *a += dt / 6.0 * (b + 4.0 * c + d);
        }
        state.sync_boundary();
        state.time += dt;
        Ok(())
    }
}

pub fn rk3_step(state: &State, model: &Model, splitting: Splitting, dt: f64) -> Result<State> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step {dt} must be positive")));
    }
    let mut s = state.clone();
    Stepper::new(Scheme::new(*model, splitting, &state.grid)?).step(&mut s, dt)?;
    Ok(s)
}

/// `dt = cfl · min(h) / c`.
pub fn dt_from_cfl(cfl: f64, grid: &GridSpec, model: &Model) -> f64 {
    cfl * grid.min_h() / model.speed()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{total_average, Boundary};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(grid: &GridSpec, m: usize, seed: u64) -> State {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = State::zeros(grid.clone(), m);
        s.as_mut_slice().iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        s
    }

    #[test]
    fn upwind_split_of_x_jacobian() {
        let model = Model::acoustics(2, 1.0);
        let (jp, jm) = jacobian_split(&model, 0, Splitting::Upwind).unwrap();
        let want_p = RMat { n: 3, a: vec![0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.5] };
        let want_m = RMat { n: 3, a: vec![-0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5, 0.0, -0.5] };
        assert!(jp.max_abs_diff(&want_p) < 1e-15);
        assert!(jm.max_abs_diff(&want_m) < 1e-15);
    }

    #[test]
    fn split_identities() {
        for dim in 2..=3 {
            let model = Model::acoustics(dim, 1.7);
            for axis in 0..dim {
                let j = model.jacobian(axis);
                for sp in [Splitting::Upwind, Splitting::Central, Splitting::Rusanov] {
                    let (p, m) = jacobian_split(&model, axis, sp).unwrap();
                    assert!(p.add(&m).max_abs_diff(&j) < 1e-14, "{sp:?}");
                    let diff = p.add(&m.scale(-1.0));
                    match sp {
                        Splitting::Upwind => {
                            // |J| = c diag(1 on the axis velocity and on p)
                            let mut abs = RMat::zeros(dim + 1);
                            abs.set(axis, axis, 1.7);
                            abs.set(dim, dim, 1.7);
                            assert!(diff.max_abs_diff(&abs) < 1e-14);
                        }
                        Splitting::Rusanov => assert!(diff.max_abs_diff(&RMat::identity(dim + 1).scale(1.7)) < 1e-14),
                        _ => assert!(diff.max_abs_diff(&RMat::zeros(dim + 1)) < 1e-14),
                    }
                }
            }
        }
    }

    #[test]
    fn constant_state_has_zero_tendency() {
        for dim in 1..=3 {
            let g = GridSpec::cube(dim, 4, 0.0, 1.0, Boundary::Periodic).unwrap();
            let model = if dim == 1 { Model::advection(1.0) } else { Model::acoustics(dim, 1.0) };
            let s = Scheme::new(model, Splitting::Upwind, &g).unwrap();
            let mut st = State::zeros(g.clone(), model.m());
            for &k in Kind::all(dim) {
                for var in 0..model.m() {
                    st.slot_mut(k, var).iter_mut().for_each(|v| *v = 0.3 + var as f64);
                }
            }
            let r = s.rhs(&st).unwrap();
            assert!(r.max_abs() < 1e-13, "dim {dim}: {}", r.max_abs());
        }
    }

    #[test]
    fn linear_pressure_drives_u_average() {
        let g = GridSpec::cube(2, 6, 0.0, 1.0, Boundary::ZeroGradient).unwrap();
        let model = Model::acoustics(2, 1.0);
        let s = Scheme::new(model, Splitting::Upwind, &g).unwrap();
        let mut st = State::zeros(g.clone(), 3);
        for c in g.cells_iter() {
            for &k in Kind::all(2) {
                st.set(k, 2, c, g.position(k, c)[0]);
            }
        }
        let r = s.rhs(&st).unwrap();
        let c = [2, 3, 0];
        assert!((r.get(Kind::A, 0, c) + 1.0).abs() < 1e-12);
        assert!(r.get(Kind::A, 1, c).abs() < 1e-12);
        assert!(r.get(Kind::A, 2, c).abs() < 1e-12);
    }

    #[test]
    fn one_d_point_update() {
        let g = GridSpec::cube(1, 5, 0.0, 1.0, Boundary::Periodic).unwrap();
        let s = Scheme::new(Model::advection(2.0), Splitting::Upwind, &g).unwrap();
        let st = random_state(&g, 1, 3);
        let r = s.rhs(&st).unwrap();
        let dx = 0.2;
        for i in 0..5usize {
            let pm = st.get(Kind::P, 0, [(i + 4) % 5, 0, 0]);
            let p = st.get(Kind::P, 0, [i, 0, 0]);
            let a = st.get(Kind::A, 0, [i, 0, 0]);
            let want = -2.0 * (2.0 * pm + 4.0 * p - 6.0 * a) / dx;
            assert!((r.get(Kind::P, 0, [i, 0, 0]) - want).abs() < 1e-12);
            assert!((r.get(Kind::A, 0, [i, 0, 0]) + 2.0 * (p - pm) / dx).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_state_is_left_unchanged() {
        let g = GridSpec::cube(2, 4, 0.0, 1.0, Boundary::Periodic).unwrap();
        let mut st = State::zeros(g.clone(), 3);
        st.as_mut_slice().iter_mut().for_each(|v| *v = 0.25);
        let out = rk3_step(&st, &Model::acoustics(2, 1.0), Splitting::Upwind, 0.01).unwrap();
        assert_eq!(out.as_slice(), st.as_slice());
        assert!(rk3_step(&st, &Model::acoustics(2, 1.0), Splitting::Upwind, 0.0).is_err());
    }

    #[test]
    fn rk3_matches_cubic_polynomial_of_operator() {
        let g = GridSpec::cube(2, 5, 0.0, 1.0, Boundary::Periodic).unwrap();
        let sch = Scheme::new(Model::acoustics(2, 1.0), Splitting::Upwind, &g).unwrap();
        let st = random_state(&g, 3, 11);
        let dt = 0.03;
        let l1 = sch.rhs(&st).unwrap();
        let l2 = sch.rhs(&l1).unwrap();
        let l3 = sch.rhs(&l2).unwrap();
        let mut stepper = Stepper::new(sch);
        let mut s = st.clone();
        stepper.step(&mut s, dt).unwrap();
        for i in 0..st.as_slice().len() {
            let want = st.as_slice()[i] + dt * l1.as_slice()[i] + dt * dt / 2.0 * l2.as_slice()[i] + dt.powi(3) / 6.0 * l3.as_slice()[i];
            assert!((s.as_slice()[i] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn model_grid_mismatch_is_reported() {
        let g = GridSpec::cube(2, 4, 0.0, 1.0, Boundary::Periodic).unwrap();
        assert!(matches!(Scheme::new(Model::acoustics(3, 1.0), Splitting::Upwind, &g), Err(Error::Mismatch(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn rhs_is_linear(seed in 0u64..1000, alpha in -2.0f64..2.0, beta in -2.0f64..2.0, dim in 1usize..4) {
            let g = GridSpec::cube(dim, 4, 0.0, 1.0, Boundary::ZeroGradient).unwrap();
            let model = if dim == 1 { Model::advection(1.0) } else { Model::acoustics(dim, 1.0) };
            let sch = Scheme::new(model, Splitting::Rusanov, &g).unwrap();
            let a = random_state(&g, model.m(), seed);
            let b = random_state(&g, model.m(), seed + 7777);
            let mut comb = a.clone();
            for ((c, x), y) in comb.as_mut_slice().iter_mut().zip(a.as_slice()).zip(b.as_slice()) {
                *c = alpha * x + beta * y;
            }
            let ra = sch.rhs(&a).unwrap();
            let rb = sch.rhs(&b).unwrap();
            let rc = sch.rhs(&comb).unwrap();
            let scale = rc.max_abs().max(1.0);
            for i in 0..rc.as_slice().len() {
                let want = alpha * ra.as_slice()[i] + beta * rb.as_slice()[i];
                prop_assert!((rc.as_slice()[i] - want).abs() <= 1e-13 * scale);
            }
        }

        #[test]
        fn periodic_steps_conserve_averages(seed in 0u64..1000, sp in 0usize..3) {
            let g = GridSpec::cube(2, 5, 0.0, 1.0, Boundary::Periodic).unwrap();
            let splitting = [Splitting::Upwind, Splitting::Central, Splitting::Rusanov][sp];
            let mut stepper = Stepper::new(Scheme::new(Model::acoustics(2, 1.0), splitting, &g).unwrap());
            let mut s = random_state(&g, 3, seed);
            let before = total_average(&s);
            for _ in 0..10 {
                stepper.step(&mut s, 0.02).unwrap();
            }
            let after = total_average(&s);
            for v in 0..3 {
                prop_assert!((before[v] - after[v]).abs() <= 1e-13 * before[v].abs().max(1.0));
            }
        }

        #[test]
        fn splittings_agree_on_smooth_quadratics(cx in -1.0f64..1.0, cy in -1.0f64..1.0, cxy in -1.0f64..1.0, cyy in -1.0f64..1.0) {
            let g = GridSpec::cube(2, 6, 0.0, 6.0, Boundary::ZeroGradient).unwrap();
            let f = move |x: [f64; 3]| { let (a, b) = (x[0] - 3.0, x[1] - 3.0); cx * a + cy * b + cxy * a * b + cyy * b * b };
            let mut st = State::zeros(g.clone(), 3);
            for c in g.cells_iter() {
                for &k in Kind::all(2) {
                    let v = if k.is_point() {
                        f(g.position(k, c))
                    } else {
                        // Simpson is exact for the cell average of a tensor quadratic
                        let x0 = g.centroid(c);
                        let w = [1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0];
                        let mut acc = 0.0;
                        for a in 0..3 {
                            for b in 0..3 {
                                let x = [x0[0] + (a as f64 - 1.0) * 0.5, x0[1] + (b as f64 - 1.0) * 0.5, 0.0];
                                acc += w[a] * w[b] * f(x);
                            }
                        }
                        acc
                    };
                    for var in 0..3 {
                        st.set(k, var, c, (var as f64 + 1.0) * v);
                    }
                }
            }
            let model = Model::acoustics(2, 1.0);
            let tend: Vec<State> = [Splitting::Upwind, Splitting::Central, Splitting::Rusanov]
                .iter()
                .map(|&sp| Scheme::new(model, sp, &g).unwrap().rhs(&st).unwrap())
                .collect();
            // interior point values only: averages are zero here, so compare points of interior cells
            for c in [[2usize, 2, 0], [3, 2, 0], [2, 3, 0]] {
                for &k in &[Kind::N, Kind::EH, Kind::EV] {
                    for var in 0..3 {
                        let u = tend[0].get(k, var, c);
                        prop_assert!((u - tend[1].get(k, var, c)).abs() < 1e-11);
                        prop_assert!((u - tend[2].get(k, var, c)).abs() < 1e-11);
                    }
                }
            }
        }
    }
}

//! Error norms, discrete divergences and the projected divergence.

use crate::error::{Error, Result};
use crate::grid::{accessible_dofs, Boundary, GridSpec, Kind, State};
use crate::laurent::Laurent;
use crate::reconstruction::{reconstruct_gradient, ShapeBasis};

/// Gauss-Legendre nodes and weights on `[-1/2, 1/2]` (weights sum to one).
pub(crate) const GAUSS5: [(f64, f64); 5] = [
    (-0.453_089_922_969_332_2, 0.118_463_442_528_094_5),
    (-0.269_234_655_052_841_5, 0.239_314_335_249_683_2),
    (0.0, 0.284_444_444_444_444_4),
    (0.269_234_655_052_841_5, 0.239_314_335_249_683_2),
    (0.453_089_922_969_332_2, 0.118_463_442_528_094_5),
];

/// Tensor quadrature nodes of a cell as `(offset in cells, weight)`.
pub(crate) fn quadrature(dim: usize, rule: &[(f64, f64)]) -> Vec<([f64; 3], f64)> {
    let n = rule.len();
    (0..n.pow(dim as u32))
        .map(|idx| {
            let mut x = [0.0; 3];
            let mut w = 1.0;
            for (a, xa) in x.iter_mut().enumerate().take(dim) {
                let (s, wa) = rule[(idx / n.pow(a as u32)) % n];
                *xa = s;
                w *= wa;
            }
            (x, w)
        })
        .collect()
}

pub(crate) const SIMPSON: [(f64, f64); 3] = [(-0.5, 1.0 / 6.0), (0.0, 4.0 / 6.0), (0.5, 1.0 / 6.0)];

/// Cell average of `f` by a tensor rule.
pub(crate) fn cell_average(grid: &GridSpec, cell: [usize; 3], rule: &[([f64; 3], f64)], f: &dyn Fn([f64; 3]) -> Vec<f64>) -> Vec<f64> {
    let c = grid.centroid(cell);
    let mut acc: Vec<f64> = Vec::new();
    for (o, w) in rule {
        let mut x = c;
        for a in 0..grid.dim {
            x[a] += o[a] * grid.h[a];
        }
        let v = f(x);
        if acc.is_empty() {
            acc = vec![0.0; v.len()];
        }
        for (s, vi) in acc.iter_mut().zip(v) {
            *s += w * vi;
        }
    }
    acc
}

/// Mean absolute deviation per variable from a reference, over the selected dof kinds.
/// Averages are compared against 5-point Gauss cell averages of the reference, point
/// values against point samples.
pub fn l1_error(state: &State, reference: &dyn Fn([f64; 3]) -> Vec<f64>, kinds: &[Kind]) -> Vec<f64> {
    let g = &state.grid;
    let rule = quadrature(g.dim, &GAUSS5);
    let mut sum = vec![0.0; state.m];
    for &kind in kinds {
        for cell in g.cells_iter() {
            let r = if kind == Kind::A { cell_average(g, cell, &rule, reference) } else { reference(g.position(kind, cell)) };
            for (v, s) in sum.iter_mut().enumerate() {
                *s += (state.get(kind, v, cell) - r[v]).abs();
            }
        }
    }
    let count = (kinds.len() * g.cells()) as f64;
    sum.iter().map(|s| s / count).collect()
}

/// Mean absolute difference per variable between two states on the selected kinds.
pub fn l1_distance(a: &State, b: &State, kinds: &[Kind]) -> Result<Vec<f64>> {
    if a.grid != b.grid || a.m != b.m {
        return Err(Error::Mismatch("states live on different grids".into()));
    }
    let n = a.grid.cells();
    Ok((0..a.m)
        .map(|v| {
            let s: f64 = kinds
                .iter()
                .map(|&k| a.slot(k, v).iter().zip(b.slot(k, v)).map(|(x, y)| (x - y).abs()).sum::<f64>())
                .sum();
            s / (n * kinds.len()) as f64
        })
        .collect())
}

/// One term of a divergence stencil: a Laurent polynomial acting on one dof lattice.
#[derive(Clone, Debug)]
pub struct DivTerm {
    pub kind: Kind,
    pub var: usize,
    pub symbol: Laurent,
}

fn poly(axis: usize, coeffs: &[(i32, f64)]) -> Laurent {
    let mut l = Laurent::zero();
    for &(p, c) in coeffs {
        l = &l + &Laurent::t(axis, p).scale(c);
    }
    l
}

/// The seven divergences vanishing on the upwind stationary states, followed by the
/// control divergence, as Fourier symbols in the order `(u, v)` terms.
pub fn divergence_stencils(h: [f64; 3]) -> Vec<Vec<DivTerm>> {
    let (dx, dy) = (h[0], h[1]);
    let x = |c: &[(i32, f64)]| poly(0, c);
    let y = |c: &[(i32, f64)]| poly(1, c);
    let term = |kind, var, a: Laurent, b: Laurent, s: f64| DivTerm { kind, var, symbol: (&a * &b).scale(s) };
    // q_{-1} + w q_0 + q_{+1} along an axis
    let avg = |axis: usize, w: f64| poly(axis, &[(-1, 1.0), (0, w), (1, 1.0)]);
    let central_x = x(&[(1, 1.0), (-1, -1.0)]);
    let central_y = y(&[(1, 1.0), (-1, -1.0)]);
    let fwd_x = x(&[(1, 1.0), (0, -1.0)]);
    let fwd_y = y(&[(1, 1.0), (0, -1.0)]);
    let bwd_x = x(&[(0, 1.0), (-1, -1.0)]);
    let bwd_y = y(&[(0, 1.0), (-1, -1.0)]);
    let one = Laurent::constant(1.0);
    vec![
        vec![
            term(Kind::A, 0, avg(1, 4.0), central_x.clone(), 1.0 / dx),
            term(Kind::A, 1, avg(0, 4.0), central_y.clone(), 1.0 / dy),
        ],
        vec![
            term(Kind::N, 0, fwd_x.clone(), y(&[(0, 1.0), (1, 1.0)]), 1.0 / dx),
            term(Kind::N, 1, x(&[(0, 1.0), (1, 1.0)]), fwd_y.clone(), 1.0 / dy),
        ],
        vec![
            term(Kind::EH, 0, avg(1, 6.0), fwd_x.clone(), 1.0 / dx),
            term(Kind::EV, 1, avg(0, 6.0), fwd_y.clone(), 1.0 / dy),
        ],
        vec![
            term(Kind::EV, 0, bwd_x.clone(), one.clone(), 1.0 / dx),
            term(Kind::EH, 1, bwd_y.clone(), one.clone(), 1.0 / dy),
        ],
        vec![
            term(Kind::EV, 0, bwd_x.clone(), one.clone(), 1.0 / dx),
            term(Kind::N, 1, x(&[(0, 1.0), (-1, 1.0)]), bwd_y.clone(), 1.0 / (2.0 * dy)),
        ],
        vec![
            term(Kind::EV, 0, avg(1, 6.0), fwd_x.clone(), 1.0 / (8.0 * dx)),
            term(Kind::EV, 1, x(&[(0, 1.0), (1, 1.0)]), central_y.clone(), 1.0 / (4.0 * dy)),
        ],
        vec![
            term(Kind::EV, 0, avg(1, 4.0), bwd_x, 1.0 / (6.0 * dx)),
            term(Kind::A, 1, one, central_y.clone(), 1.0 / (2.0 * dy)),
        ],
        vec![
            term(Kind::A, 0, avg(1, 2.0), central_x, 1.0 / dx),
            term(Kind::A, 1, avg(0, 2.0), central_y, 1.0 / dy),
        ],
    ]
}

/// L∞ magnitudes of the seven discrete divergences and of the control divergence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceReport {
    pub div: [f64; 7],
    pub control: f64,
}

impl DivergenceReport {
    pub fn max(&self) -> f64 {
        self.div.iter().cloned().fold(0.0, f64::max)
    }
}

fn stencil_linf(state: &State, terms: &[DivTerm]) -> f64 {
    let g = &state.grid;
    let mut reach = [0i32; 3];
    for t in terms {
        for (s, _) in t.symbol.terms() {
            for a in 0..3 {
                reach[a] = reach[a].max(s[a].abs());
            }
        }
    }
    let mut out: f64 = 0.0;
    for cell in g.cells_iter() {
        // on non-periodic grids the stencil must also avoid cells whose update reads ghosts
        if g.boundary != Boundary::Periodic
            && (0..g.dim).any(|a| (cell[a] as i32) <= reach[a] || cell[a] as i32 + reach[a] + 1 >= g.n[a] as i32)
        {
            continue;
        }
        let mut v = 0.0;
        for t in terms {
            let lat = state.slot(t.kind, t.var);
            for (s, c) in t.symbol.terms() {
                v += c * lat[g.index(g.shifted_kind(cell, s, t.kind))];
            }
        }
        out = out.max(v.abs());
    }
    out
}

pub fn discrete_divergences(state: &State) -> Result<DivergenceReport> {
    if state.grid.dim != 2 || state.m != 3 {
        return Err(Error::Mismatch("discrete divergences need a 2-d acoustics state".into()));
    }
    let st = divergence_stencils(state.grid.h);
    let mut div = [0.0; 7];
    for (d, terms) in div.iter_mut().zip(&st) {
        *d = stencil_linf(state, terms);
    }
    Ok(DivergenceReport { div, control: stencil_linf(state, &st[7]) })
}

/// Degrees of freedom of the P^{2,2}-projected divergence of one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectedDivergence {
    pub a: f64,
    pub n: f64,
    pub eh: f64,
    pub ev: f64,
}

pub fn p22_projected_divergence(state: &State, cell: [usize; 3]) -> Result<ProjectedDivergence> {
    let g = &state.grid;
    if g.dim != 2 || state.m != 3 {
        return Err(Error::Mismatch("projected divergence needs a 2-d acoustics state".into()));
    }
    let cell = g.check_cell([cell[0] as i64, cell[1] as i64, cell[2] as i64])?;
    let basis = ShapeBasis::new(2);
    let w = |shift: [i32; 3], at: [f64; 3]| -> Result<f64> {
        let c = g.shifted(cell, shift);
        let ci = [c[0] as i64, c[1] as i64, 0];
        let du = reconstruct_gradient(&basis, &accessible_dofs(&state.field(0), ci)?, at, g.h);
        let dv = reconstruct_gradient(&basis, &accessible_dofs(&state.field(1), ci)?, at, g.h);
        Ok(du[0] + dv[1])
    };
    let n = 0.25
        * (w([0, 0, 0], [0.5, 0.5, 0.0])?
            + w([1, 0, 0], [-0.5, 0.5, 0.0])?
            + w([0, 1, 0], [0.5, -0.5, 0.0])?
            + w([1, 1, 0], [-0.5, -0.5, 0.0])?);
    let ev = 0.5 * (w([0, 0, 0], [0.5, 0.0, 0.0])? + w([1, 0, 0], [-0.5, 0.0, 0.0])?);
    let eh = 0.5 * (w([0, 0, 0], [0.0, 0.5, 0.0])? + w([0, 1, 0], [0.0, -0.5, 0.0])?);
    // Simpson is exact for the biquadratic divergence
    let mut a = 0.0;
    for (o, wt) in quadrature(2, &SIMPSON) {
        a += wt * w([0, 0, 0], o)?;
    }
    Ok(ProjectedDivergence { a, n, eh, ev })
}

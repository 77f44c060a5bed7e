//! Shape functions of the continuous tensor-quadratic reconstruction and the
//! one-sided derivative stencils obtained by differentiating it.
//!
//! The basis is the tensor-product Lagrange basis on `{-1/2, 0, 1/2}^d` in scaled
//! coordinates `ξ = x/Δx` (etc.), with the centre node replaced by the cell
//! average:
//!
//! `B_A = L_0 / <L_0>`, `B_o = L_o - <L_o>/<L_0> L_0`.

use crate::error::{Error, Result};
use crate::grid::{accessible_offsets, resolve_offset, DofField, Kind};
use crate::poly::{q, to_f64, TensorPoly, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;

fn lagrange(o: i32) -> [Q; 3] {
    match o {
        -1 => [q(0, 1), q(-1, 1), q(2, 1)],
        0 => [q(1, 1), q(0, 1), q(-4, 1)],
        1 => [q(0, 1), q(1, 1), q(2, 1)],
        _ => unreachable!(),
    }
}

const ONE: [Q; 3] = [Q::new_raw(1, 1), Q::new_raw(0, 1), Q::new_raw(0, 1)];

#[derive(Clone, Debug)]
pub struct ShapeBasis {
    pub dim: usize,
    offsets: Vec<Option<[i32; 3]>>,
    funcs: Vec<TensorPoly>,
}

impl ShapeBasis {
    pub fn new(dim: usize) -> Self {
        let offsets = accessible_offsets(dim);
        let lag = |o: [i32; 3]| {
            let f = |a: usize| if a < dim { lagrange(o[a]) } else { ONE };
            TensorPoly::product(f(0), f(1), f(2))
        };
        let l0 = lag([0; 3]);
        let avg0 = l0.average();
        let funcs = offsets
            .iter()
            .map(|o| match o {
                None => &l0 * (Q::from(1) / avg0),
                Some(o) => {
                    let l = lag(*o);
                    let k = l.average() / avg0;
                    &l - &(&l0 * k)
                }
            })
            .collect();
        ShapeBasis { dim, offsets, funcs }
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    pub fn offsets(&self) -> &[Option<[i32; 3]>] {
        &self.offsets
    }

    pub fn func(&self, r: usize) -> Result<&TensorPoly> {
        self.funcs.get(r).ok_or(Error::BasisIndex { index: r, len: self.funcs.len() })
    }

    /// Scaled location of point dof `r`; `None` for the average slot.
    pub fn point(&self, r: usize) -> Option<[Q; 3]> {
        self.offsets[r].map(|o| [q(o[0] as i64, 2), q(o[1] as i64, 2), q(o[2] as i64, 2)])
    }
}

pub fn shape_value(basis: &ShapeBasis, r: usize, point: [f64; 3]) -> Result<f64> {
    Ok(basis.func(r)?.eval_f64(point))
}

pub fn reconstruct_eval(basis: &ShapeBasis, dofs: &[f64], point: [f64; 3]) -> f64 {
    debug_assert_eq!(dofs.len(), basis.len());
    basis.funcs.iter().zip(dofs).map(|(b, d)| d * b.eval_f64(point)).sum()
}

/// Physical gradient of the reconstruction at a scaled point.
pub fn reconstruct_gradient(basis: &ShapeBasis, dofs: &[f64], point: [f64; 3], h: [f64; 3]) -> [f64; 3] {
    let mut g = [0.0; 3];
    for a in 0..basis.dim {
        g[a] = basis
            .funcs
            .iter()
            .zip(dofs)
            .map(|(b, d)| d * b.diff(a).eval_f64(point))
            .sum::<f64>()
            / h[a];
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Derivative of the reconstruction in the cell owning the point.
    Own,
    /// Derivative of the reconstruction in the neighbour across the point's face.
    Neighbor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StencilEntry {
    pub kind: Kind,
    pub shift: [i32; 3],
    /// Coefficient in units of `1/h[axis]`.
    pub coeff: Q,
}

#[derive(Clone, Debug)]
pub struct DerivOp {
    pub target: Kind,
    pub axis: usize,
    pub side: Side,
    pub h: f64,
    pub stencil: Vec<StencilEntry>,
}

impl DerivOp {
    pub fn apply(&self, field: &DofField<'_>, cell: [usize; 3]) -> f64 {
        self.stencil
            .iter()
            .map(|e| to_f64(e.coeff) * field.get(e.kind, field.grid.shifted_kind(cell, e.shift, e.kind)))
            .sum::<f64>()
            / self.h
    }
}

#[derive(Clone, Debug)]
pub struct DerivTable {
    pub dim: usize,
    pub h: [f64; 3],
    pub ops: Vec<DerivOp>,
}

impl DerivTable {
    pub fn get(&self, target: Kind, axis: usize, side: Side) -> &DerivOp {
        self.ops
            .iter()
            .find(|o| o.target == target && o.axis == axis && o.side == side)
            .unwrap_or_else(|| panic!("no derivative for {target:?} axis {axis} {side:?}"))
    }
}

/// Derivative along `axis` of the reconstruction, evaluated at a scaled point of the cell
/// at `cell_shift`, expressed as a stencil over owned dofs.
fn derivative_stencil(basis: &ShapeBasis, axis: usize, at: [Q; 3], cell_shift: [i32; 3]) -> Vec<StencilEntry> {
    let mut acc: BTreeMap<(Kind, [i32; 3]), Q> = BTreeMap::new();
    for (r, o) in basis.offsets.iter().enumerate() {
        let c = basis.funcs[r].diff(axis).eval(at);
        if c.is_zero() {
            continue;
        }
        let (kind, s) = resolve_offset(basis.dim, *o);
        let shift = [s[0] + cell_shift[0], s[1] + cell_shift[1], s[2] + cell_shift[2]];
        *acc.entry((kind, shift)).or_insert_with(Q::zero) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((kind, shift), coeff)| StencilEntry { kind, shift, coeff })
        .collect()
}

pub fn build_deriv_ops(dim: usize, h: &[f64]) -> DerivTable {
    let basis = ShapeBasis::new(dim);
    let mut hh = [1.0; 3];
    hh[..dim].copy_from_slice(&h[..dim]);
    let mut ops = Vec::new();
    for &target in Kind::all(dim).iter().filter(|k| k.is_point()) {
        let loc = target.location_in(dim);
        let at = [q(loc[0] as i64, 2), q(loc[1] as i64, 2), q(loc[2] as i64, 2)];
        for axis in 0..dim {
            let own = derivative_stencil(&basis, axis, at, [0; 3]);
            let neighbor = if loc[axis] == 1 {
                let mut at_n = at;
                at_n[axis] = q(-1, 2);
                let mut shift = [0; 3];
                shift[axis] = 1;
                derivative_stencil(&basis, axis, at_n, shift)
            } else {
                own.clone()
            };
            ops.push(DerivOp { target, axis, side: Side::Own, h: hh[axis], stencil: own });
            ops.push(DerivOp { target, axis, side: Side::Neighbor, h: hh[axis], stencil: neighbor });
        }
    }
    DerivTable { dim, h: hh, ops }
}

/// Human-readable listing of every stencil with exact coefficients.
pub fn dump_stencils(table: &DerivTable) -> String {
    let axes = ["x", "y", "z"];
    let mut s = String::new();
    for op in &table.ops {
        let side = match op.side {
            Side::Own => "D",
            Side::Neighbor => "D*",
        };
        let _ = writeln!(s, "{} {}_{} (1/d{}):", op.target.name(), side, axes[op.axis], axes[op.axis]);
        for e in &op.stencil {
            let _ = writeln!(
                s,
                "    {:>6} {:>3}  shift ({:>2},{:>2},{:>2})",
                e.coeff.to_string(),
                e.kind.name(),
                e.shift[0],
                e.shift[1],
                e.shift[2]
            );
        }
    }
    s
}

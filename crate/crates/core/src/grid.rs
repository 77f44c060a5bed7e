//! Cartesian grids and storage of the Active Flux degrees of freedom.
//!
//! Every cell owns one average and the point values sitting on its upper
//! corner, edges and faces (the "top right corner" convention). Locations of
//! point values are written in half-cell units relative to the centroid, so a
//! node in 2-d sits at `(1, 1)` and the upper horizontal edge midpoint at
//! `(0, 1)`.
//!
//! Accessible dofs of a cell are listed in a frozen order:
//!
//! | dim | order |
//! |-----|-------|
//! | 1 | `(-1)`, average, `(+1)` |
//! | 2 | average, then counterclockwise from the lower-left corner: `(-1,-1) (0,-1) (1,-1) (1,0) (1,1) (0,1) (-1,1) (-1,0)` |
//! | 3 | x-fastest lexicographic over `{-1,0,1}^3`, slot 13 (the centre) holds the average |

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    /// Ghost dofs copy the nearest interior dof of the same kind. Point values on the
    /// boundary itself are ghosts on both sides and mirror the ones a cell inward.
    ZeroGradient,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::ZeroGradient => "zerograd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    A,
    P,
    EH,
    EV,
    N,
    Ex,
    Ey,
    Ez,
    Fx,
    Fy,
    Fz,
}

const KINDS_1D: [Kind; 2] = [Kind::A, Kind::P];
const KINDS_2D: [Kind; 4] = [Kind::A, Kind::EH, Kind::EV, Kind::N];
const KINDS_3D: [Kind; 8] = [
    Kind::A,
    Kind::Ex,
    Kind::Ey,
    Kind::Ez,
    Kind::Fx,
    Kind::Fy,
    Kind::Fz,
    Kind::N,
];

impl Kind {
    /// Storage (and Fourier block) order of the kinds belonging to a cell.
    pub fn all(dim: usize) -> &'static [Kind] {
        match dim {
            1 => &KINDS_1D,
            2 => &KINDS_2D,
            3 => &KINDS_3D,
            _ => panic!("unsupported dimension {dim}"),
        }
    }

    pub fn index(self, dim: usize) -> usize {
        Kind::all(dim)
            .iter()
            .position(|&k| k == self)
            .unwrap_or_else(|| panic!("{self:?} is not a {dim}-d kind"))
    }

    pub fn is_point(self) -> bool {
        self != Kind::A
    }

    /// Location relative to the centroid in half-cell units (zero for the average).
    pub fn location(self) -> [i32; 3] {
        match self {
            Kind::A => [0, 0, 0],
            Kind::P => [1, 0, 0],
            Kind::EH => [0, 1, 0],
            Kind::EV => [1, 0, 0],
            Kind::N => [1, 1, 1],
            Kind::Ex => [0, 1, 1],
            Kind::Ey => [1, 0, 1],
            Kind::Ez => [1, 1, 0],
            Kind::Fx => [1, 0, 0],
            Kind::Fy => [0, 1, 0],
            Kind::Fz => [0, 0, 1],
        }
    }

    /// Location restricted to the active axes of `dim`.
    pub fn location_in(self, dim: usize) -> [i32; 3] {
        let mut l = self.location();
        for a in dim..3 {
            l[a] = 0;
        }
        l
    }

    /// Point kind at a location with entries in {0, 1}.
    pub fn from_location(dim: usize, loc: [i32; 3]) -> Kind {
        match (dim, loc) {
            (_, [0, 0, 0]) => Kind::A,
            (1, [1, 0, 0]) => Kind::P,
            (2, [1, 0, 0]) => Kind::EV,
            (2, [0, 1, 0]) => Kind::EH,
            (2, [1, 1, 0]) => Kind::N,
            (3, [1, 0, 0]) => Kind::Fx,
            (3, [0, 1, 0]) => Kind::Fy,
            (3, [0, 0, 1]) => Kind::Fz,
            (3, [0, 1, 1]) => Kind::Ex,
            (3, [1, 0, 1]) => Kind::Ey,
            (3, [1, 1, 0]) => Kind::Ez,
            (3, [1, 1, 1]) => Kind::N,
            _ => panic!("no {dim}-d kind at {loc:?}"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::A => "A",
            Kind::P => "P",
            Kind::EH => "EH",
            Kind::EV => "EV",
            Kind::N => "N",
            Kind::Ex => "Ex",
            Kind::Ey => "Ey",
            Kind::Ez => "Ez",
            Kind::Fx => "Fx",
            Kind::Fy => "Fy",
            Kind::Fz => "Fz",
        }
    }

    pub fn parse(dim: usize, s: &str) -> Option<Kind> {
        Kind::all(dim).iter().copied().find(|k| k.name() == s)
    }
}

/// Offsets of the accessible dofs of a cell in the frozen order; `None` is the average.
pub fn accessible_offsets(dim: usize) -> Vec<Option<[i32; 3]>> {
    match dim {
        1 => vec![Some([-1, 0, 0]), None, Some([1, 0, 0])],
        2 => {
            let ring = [(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0)];
            std::iter::once(None)
                .chain(ring.iter().map(|&(x, y)| Some([x, y, 0])))
                .collect()
        }
        3 => (0..27)
            .map(|r| {
                let o = [r % 3 - 1, (r / 3) % 3 - 1, r / 9 - 1];
                if o == [0, 0, 0] {
                    None
                } else {
                    Some(o)
                }
            })
            .collect(),
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Owner of an accessible point: which kind, stored in which neighbouring cell.
pub fn resolve_offset(dim: usize, offset: Option<[i32; 3]>) -> (Kind, [i32; 3]) {
    let Some(o) = offset else {
        return (Kind::A, [0; 3]);
    };
    let mut shift = [0; 3];
    let mut loc = [0; 3];
    for a in 0..dim {
        if o[a] == -1 {
            shift[a] = -1;
        }
        if o[a] != 0 {
            loc[a] = 1;
        }
    }
    (Kind::from_location(dim, loc), shift)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    /// Cells per axis; unused axes hold 1.
    pub n: [usize; 3],
    /// Cell sizes; unused axes hold 1.
    pub h: [f64; 3],
    pub origin: [f64; 3],
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn new(dim: usize, n: &[usize], h: &[f64], origin: &[f64], boundary: Boundary) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim}")));
        }
        if n.len() != dim || h.len() != dim || origin.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "expected {dim} entries for n, h and origin"
            )));
        }
        let mut g = GridSpec { dim, n: [1; 3], h: [1.0; 3], origin: [0.0; 3], boundary };
        for a in 0..dim {
            if n[a] < 3 {
                return Err(Error::InvalidGrid(format!("n[{a}] = {} < 3", n[a])));
            }
            if !(h[a] > 0.0 && h[a].is_finite()) {
                return Err(Error::InvalidGrid(format!("h[{a}] = {}", h[a])));
            }
            g.n[a] = n[a];
            g.h[a] = h[a];
            g.origin[a] = origin[a];
        }
        Ok(g)
    }

    /// `n` cells per axis covering `[lo, hi]^dim`.
    pub fn cube(dim: usize, n: usize, lo: f64, hi: f64, boundary: Boundary) -> Result<Self> {
        let h = (hi - lo) / n as f64;
        GridSpec::new(dim, &vec![n; dim], &vec![h; dim], &vec![lo; dim], boundary)
    }

    pub fn cells(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn cell_volume(&self) -> f64 {
        self.h[..self.dim].iter().product()
    }

    pub fn min_h(&self) -> f64 {
        self.h[..self.dim].iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn n_kinds(&self) -> usize {
        Kind::all(self.dim).len()
    }

    #[inline]
    pub fn index(&self, cell: [usize; 3]) -> usize {
        cell[0] + self.n[0] * (cell[1] + self.n[1] * cell[2])
    }

    pub fn cell_of(&self, index: usize) -> [usize; 3] {
        let i = index % self.n[0];
        let j = (index / self.n[0]) % self.n[1];
        let k = index / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    /// Lattice coordinate along `axis` after applying the boundary rule.
    #[inline]
    pub fn wrap(&self, axis: usize, i: i64) -> usize {
        let n = self.n[axis] as i64;
        match self.boundary {
            Boundary::Periodic => i.rem_euclid(n) as usize,
            Boundary::ZeroGradient => i.clamp(0, n - 1) as usize,
        }
    }

    /// Largest lattice index of `kind` that holds an independent value along `axis`.
    #[inline]
    pub fn last_free(&self, axis: usize, kind: Kind) -> usize {
        let n = self.n[axis];
        if self.boundary == Boundary::ZeroGradient && kind.location_in(self.dim)[axis] == 1 {
            n - 2
        } else {
            n - 1
        }
    }

    /// Lattice coordinate of a `kind` dof along `axis` after applying the boundary rule.
    #[inline]
    pub fn wrap_kind(&self, axis: usize, i: i64, kind: Kind) -> usize {
        match self.boundary {
            Boundary::Periodic => i.rem_euclid(self.n[axis] as i64) as usize,
            Boundary::ZeroGradient => i.clamp(0, self.last_free(axis, kind) as i64) as usize,
        }
    }

    pub fn shifted_kind(&self, cell: [usize; 3], shift: [i32; 3], kind: Kind) -> [usize; 3] {
        let mut out = cell;
        for a in 0..self.dim {
            out[a] = self.wrap_kind(a, cell[a] as i64 + shift[a] as i64, kind);
        }
        out
    }

    pub fn shifted(&self, cell: [usize; 3], shift: [i32; 3]) -> [usize; 3] {
        let mut out = cell;
        for a in 0..self.dim {
            out[a] = self.wrap(a, cell[a] as i64 + shift[a] as i64);
        }
        out
    }

    pub fn check_cell(&self, cell: [i64; 3]) -> Result<[usize; 3]> {
        let mut out = [0usize; 3];
        for a in 0..3 {
            let lim = if a < self.dim { self.n[a] as i64 } else { 1 };
            if cell[a] < 0 || cell[a] >= lim {
                return Err(Error::CellOutOfRange { cell, n: self.n });
            }
            out[a] = cell[a] as usize;
        }
        Ok(out)
    }

    pub fn centroid(&self, cell: [usize; 3]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.origin[a] + (cell[a] as f64 + 0.5) * self.h[a];
        }
        x
    }

    /// Physical location of a dof; the average reports the centroid.
    pub fn position(&self, kind: Kind, cell: [usize; 3]) -> [f64; 3] {
        let mut x = self.centroid(cell);
        let loc = kind.location_in(self.dim);
        for a in 0..self.dim {
            x[a] += 0.5 * loc[a] as f64 * self.h[a];
        }
        x
    }

    pub fn cells_iter(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        (0..self.cells()).map(move |i| self.cell_of(i))
    }
}

/// All variables of all dof kinds, stored kind-major, then variable, then lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub grid: GridSpec,
    pub m: usize,
    pub time: f64,
    data: Vec<f64>,
}

/// Read-only view of one variable across every dof kind.
#[derive(Clone, Copy, Debug)]
pub struct DofField<'a> {
    pub grid: &'a GridSpec,
    var: usize,
    m: usize,
    data: &'a [f64],
}

impl<'a> DofField<'a> {
    pub fn lattice(&self, kind: Kind) -> &'a [f64] {
        let n = self.grid.cells();
        let slot = kind.index(self.grid.dim) * self.m + self.var;
        &self.data[slot * n..(slot + 1) * n]
    }

    pub fn get(&self, kind: Kind, cell: [usize; 3]) -> f64 {
        self.lattice(kind)[self.grid.index(cell)]
    }
}

impl State {
    pub fn zeros(grid: GridSpec, m: usize) -> Self {
        let len = grid.cells() * grid.n_kinds() * m;
        State { grid, m, time: 0.0, data: vec![0.0; len] }
    }

    pub fn from_vec(grid: GridSpec, m: usize, data: Vec<f64>) -> Result<Self> {
        let len = grid.cells() * grid.n_kinds() * m;
        if data.len() != len {
            return Err(Error::Mismatch(format!("state length {} != {len}", data.len())));
        }
        Ok(State { grid, m, time: 0.0, data })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn slot_index(&self, kind: Kind, var: usize) -> usize {
        kind.index(self.grid.dim) * self.m + var
    }

    pub fn slot(&self, kind: Kind, var: usize) -> &[f64] {
        let n = self.grid.cells();
        let s = self.slot_index(kind, var);
        &self.data[s * n..(s + 1) * n]
    }

    pub fn slot_mut(&mut self, kind: Kind, var: usize) -> &mut [f64] {
        let n = self.grid.cells();
        let s = self.slot_index(kind, var);
        &mut self.data[s * n..(s + 1) * n]
    }

    pub fn get(&self, kind: Kind, var: usize, cell: [usize; 3]) -> f64 {
        self.slot(kind, var)[self.grid.index(cell)]
    }

    pub fn set(&mut self, kind: Kind, var: usize, cell: [usize; 3], value: f64) {
        let i = self.grid.index(cell);
        self.slot_mut(kind, var)[i] = value;
    }

    pub fn field(&self, var: usize) -> DofField<'_> {
        assert!(var < self.m);
        DofField { grid: &self.grid, var, m: self.m, data: &self.data }
    }

    /// Overwrites the boundary ghost point values (zero-gradient grids) with the values
    /// they mirror. No-op on periodic grids.
    pub fn sync_boundary(&mut self) {
        let g = self.grid.clone();
        if g.boundary != Boundary::ZeroGradient {
            return;
        }
        for &kind in Kind::all(g.dim) {
            let loc = kind.location_in(g.dim);
            for axis in (0..g.dim).filter(|&a| loc[a] == 1) {
                for var in 0..self.m {
                    let lat = self.slot_mut(kind, var);
                    for cell in g.cells_iter().filter(|c| c[axis] == g.n[axis] - 1) {
                        let mut src = cell;
                        src[axis] -= 1;
                        lat[g.index(cell)] = lat[g.index(src)];
                    }
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Accessible dofs of `cell`, ordered as documented at module level.
pub fn accessible_dofs(field: &DofField<'_>, cell: [i64; 3]) -> Result<Vec<f64>> {
    let grid = field.grid;
    let cell = grid.check_cell(cell)?;
    Ok(accessible_offsets(grid.dim)
        .into_iter()
        .map(|o| {
            let (kind, shift) = resolve_offset(grid.dim, o);
            field.get(kind, grid.shifted_kind(cell, shift, kind))
        })
        .collect())
}

/// Sum of averages times cell volume, per variable.
pub fn total_average(state: &State) -> Vec<f64> {
    let vol = state.grid.cell_volume();
    (0..state.m)
        .map(|v| state.slot(Kind::A, v).iter().sum::<f64>() * vol)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid2(n: usize, boundary: Boundary) -> GridSpec {
        GridSpec::cube(2, n, 0.0, n as f64, boundary).unwrap()
    }

    fn tagged(grid: &GridSpec) -> State {
        // value encodes kind and cell so lookups are traceable
        let mut s = State::zeros(grid.clone(), 1);
        for (ki, &k) in Kind::all(grid.dim).iter().enumerate() {
            for c in grid.cells_iter() {
                s.set(k, 0, c, (ki * 10000 + grid.index(c)) as f64);
            }
        }
        s
    }

    #[test]
    fn uniform_field_gives_uniform_dofs() {
        let g = grid2(4, Boundary::Periodic);
        let mut s = State::zeros(g, 1);
        s.as_mut_slice().iter_mut().for_each(|v| *v = 2.5);
        let d = accessible_dofs(&s.field(0), [1, 2, 0]).unwrap();
        assert_eq!(d.len(), 9);
        assert!(d.iter().all(|&v| v == 2.5));
    }

    #[test]
    fn node_slots_follow_ownership() {
        let g = grid2(4, Boundary::Periodic);
        let s = tagged(&g);
        let f = s.field(0);
        let d = accessible_dofs(&f, [2, 1, 0]).unwrap();
        assert_eq!(d[5], f.get(Kind::N, [2, 1, 0]));
        assert_eq!(d[7], f.get(Kind::N, [1, 1, 0]));
        assert_eq!(d[0], f.get(Kind::A, [2, 1, 0]));
        assert_eq!(d[4], f.get(Kind::EV, [2, 1, 0]));
        assert_eq!(d[6], f.get(Kind::EH, [2, 1, 0]));
        assert_eq!(d[2], f.get(Kind::EH, [2, 0, 0]));
        assert_eq!(d[8], f.get(Kind::EV, [1, 1, 0]));
    }

    #[test]
    fn periodic_wrap_at_origin() {
        let g = grid2(4, Boundary::Periodic);
        let s = tagged(&g);
        let f = s.field(0);
        let d = accessible_dofs(&f, [0, 0, 0]).unwrap();
        assert_eq!(d[1], f.get(Kind::N, [3, 3, 0]));
    }

    #[test]
    fn zero_gradient_clamps() {
        let g = grid2(4, Boundary::ZeroGradient);
        let s = tagged(&g);
        let f = s.field(0);
        let d = accessible_dofs(&f, [0, 0, 0]).unwrap();
        assert_eq!(d[1], f.get(Kind::N, [0, 0, 0]));
        assert_eq!(d[8], f.get(Kind::EV, [0, 0, 0]));
    }

    #[test]
    fn out_of_range_cell() {
        let g = grid2(4, Boundary::Periodic);
        let s = State::zeros(g, 1);
        assert!(matches!(
            accessible_dofs(&s.field(0), [4, 0, 0]),
            Err(Error::CellOutOfRange { .. })
        ));
    }

    #[test]
    fn three_d_has_27_slots_with_average_in_the_middle() {
        let offs = accessible_offsets(3);
        assert_eq!(offs.len(), 27);
        assert_eq!(offs[13], None);
        assert_eq!(offs[0], Some([-1, -1, -1]));
        assert_eq!(offs[1], Some([0, -1, -1]));
        let (k, s) = resolve_offset(3, offs[26]);
        assert_eq!((k, s), (Kind::N, [0, 0, 0]));
        let (k, s) = resolve_offset(3, Some([-1, 0, 1]));
        assert_eq!((k, s), (Kind::Ey, [-1, 0, 0]));
    }

    #[test]
    fn dof_count_per_cell() {
        // corners shared by 4 cells, edges by 2, the average is private
        let n_dof: f64 = 4.0 * 0.25 + 2.0 * 2.0 * 0.5 + 1.0;
        assert_eq!(n_dof, Kind::all(2).len() as f64);
        let n3: f64 = 8.0 / 8.0 + 12.0 / 4.0 + 6.0 / 2.0 + 1.0;
        assert_eq!(n3, Kind::all(3).len() as f64);
    }

    #[test]
    fn total_average_sums_volume_weighted() {
        let g = GridSpec::new(2, &[3, 3], &[1.0, 1.0], &[0.0, 0.0], Boundary::Periodic).unwrap();
        let mut s = State::zeros(g, 1);
        assert_eq!(total_average(&s), vec![0.0]);
        for (i, v) in s.slot_mut(Kind::A, 0).iter_mut().enumerate().take(4) {
            *v = (i + 1) as f64;
        }
        assert_eq!(total_average(&s), vec![10.0]);
    }

    #[test]
    fn rejects_small_grids() {
        assert!(GridSpec::cube(2, 2, 0.0, 1.0, Boundary::Periodic).is_err());
        assert!(GridSpec::new(2, &[4, 4], &[1.0, -1.0], &[0.0, 0.0], Boundary::Periodic).is_err());
    }

    proptest! {
        #[test]
        fn periodic_shift_equivariance(n in 3usize..7, i in 0i64..7, j in 0i64..7, si in 0i64..7, sj in 0i64..7, seed in 0u64..1000) {
            let g = grid2(n, Boundary::Periodic);
            let (i, j) = (i % n as i64, j % n as i64);
            let mut s = State::zeros(g.clone(), 1);
            for (q, v) in s.as_mut_slice().iter_mut().enumerate() {
                *v = ((q as u64 * 2654435761 + seed) % 1009) as f64;
            }
            // shifted field: value at cell c equals original at c - shift
            let mut t = State::zeros(g.clone(), 1);
            for &k in Kind::all(2) {
                for c in g.cells_iter() {
                    let src = g.shifted(c, [-(si as i32), -(sj as i32), 0]);
                    t.set(k, 0, c, s.get(k, 0, src));
                }
            }
            let a = accessible_dofs(&s.field(0), [i, j, 0]).unwrap();
            let qi = (i + si).rem_euclid(n as i64);
            let qj = (j + sj).rem_euclid(n as i64);
            let b = accessible_dofs(&t.field(0), [qi, qj, 0]).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}

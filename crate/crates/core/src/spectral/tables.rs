//! Closed-form evolution matrices and stationary modes, stored as expression tables.
//!
//! Evolution-matrix lines read `ROW COL i j : expr` (block kinds, then variable
//! indices); vector lines read `NAME idx : expr`. Lines starting with `#` are comments.

use super::Problem;
use crate::error::{Error, Result};
use crate::expr::{self, Env, Expr};
use crate::grid::Kind;
use crate::linalg::{CMat, C};
use sha2::{Digest, Sha256};
use std::sync::OnceLock;

const E2D: &str = include_str!("../../tables/e2d.txt");
const E2D_ERRATA: &str = include_str!("../../tables/e2d_errata.txt");
const E3D: &str = include_str!("../../tables/e3d.txt");
const KERNEL2D: &str = include_str!("../../tables/kernel2d.txt");
const KERNEL3D: &str = include_str!("../../tables/kernel3d.txt");
const COEFF3D: &str = include_str!("../../tables/coeff3d.txt");
const MODE3D: &str = include_str!("../../tables/mode3d.txt");

/// All tables by name, in digest order.
pub const SOURCES: [(&str, &str); 7] = [
    ("e2d", E2D),
    ("e2d_errata", E2D_ERRATA),
    ("e3d", E3D),
    ("kernel2d", KERNEL2D),
    ("kernel3d", KERNEL3D),
    ("coeff3d", COEFF3D),
    ("mode3d", MODE3D),
];

#[derive(Clone, Debug)]
pub struct Line {
    pub key: Vec<String>,
    pub expr: Expr,
}

pub fn parse_table(table: &'static str, src: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (no, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rhs) = line
            .split_once(':')
            .ok_or_else(|| Error::Table { table, msg: format!("line {}: missing `:`", no + 1) })?;
        let expr = expr::parse(rhs)
            .map_err(|e| Error::Table { table, msg: format!("line {}: {e}", no + 1) })?;
        out.push(Line { key: key.split_whitespace().map(String::from).collect(), expr });
    }
    Ok(out)
}

struct Parsed {
    e2d: Vec<Line>,
    e2d_errata: Vec<Line>,
    e3d: Vec<Line>,
    kernel2d: Vec<Line>,
    kernel3d: Vec<Line>,
    coeff3d: Vec<Line>,
    mode3d: Vec<Line>,
}

fn parsed() -> Result<&'static Parsed> {
    static CELL: OnceLock<std::result::Result<Parsed, Error>> = OnceLock::new();
    CELL.get_or_init(|| {
        Ok(Parsed {
            e2d: parse_table("e2d", E2D)?,
            e2d_errata: parse_table("e2d_errata", E2D_ERRATA)?,
            e3d: parse_table("e3d", E3D)?,
            kernel2d: parse_table("kernel2d", KERNEL2D)?,
            kernel3d: parse_table("kernel3d", KERNEL3D)?,
            coeff3d: parse_table("coeff3d", COEFF3D)?,
            mode3d: parse_table("mode3d", MODE3D)?,
        })
    })
    .as_ref()
    .map_err(Clone::clone)
}

/// Hex sha256 over every table, in the order of [`SOURCES`].
pub fn digest() -> String {
    let mut h = Sha256::new();
    for (name, src) in SOURCES {
        h.update(name.as_bytes());
        h.update([0u8]);
        h.update(src.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn env(t: [C; 3], h: [f64; 3], c: f64) -> Env {
    Env { t, h, c }
}

fn matrix_index(table: &'static str, dim: usize, m: usize, key: &[String]) -> Result<(usize, usize)> {
    let bad = |msg: String| Error::Table { table, msg };
    if key.len() != 4 {
        return Err(bad(format!("key `{}` needs 4 fields", key.join(" "))));
    }
    let kind = |s: &str| Kind::parse(dim, s).ok_or_else(|| bad(format!("unknown kind `{s}`")));
    let var = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&v| v < m)
            .ok_or_else(|| bad(format!("bad variable index `{s}`")))
    };
    let (rk, ck) = (kind(&key[0])?, kind(&key[1])?);
    let (i, j) = (var(&key[2])?, var(&key[3])?);
    Ok((rk.index(dim) * m + i, ck.index(dim) * m + j))
}

/// Upwind evolution matrix from the tables. `corrected` applies the 2-d errata file.
pub fn evolution_matrix(problem: Problem, c: f64, h: [f64; 3], t: [C; 3], corrected: bool) -> Result<CMat> {
    let p = parsed()?;
    let (dim, m) = (problem.dim(), problem.m());
    let mut e = CMat::zeros(problem.size());
    let ev = env(t, h, c);
    let mut fill = |table: &'static str, lines: &[Line], scale: f64| -> Result<()> {
        for l in lines {
            let (r, col) = matrix_index(table, dim, m, &l.key)?;
            e.set(r, col, l.expr.eval(&ev)? * scale);
        }
        Ok(())
    };
    match problem {
        // the 2-d table is printed without the sound speed
        Problem::Acoustics2d => {
            fill("e2d", &p.e2d, c)?;
            if corrected {
                fill("e2d_errata", &p.e2d_errata, c)?;
            }
        }
        Problem::Acoustics3d => fill("e3d", &p.e3d, 1.0)?,
        Problem::Advection1d => {
            return Err(Error::Invalid("no closed-form table for 1-d advection".into()));
        }
    }
    Ok(e)
}

/// Keys of the entries replaced by the errata file, as `(row, col)`.
pub fn errata_entries() -> Result<Vec<(usize, usize)>> {
    let p = parsed()?;
    p.e2d_errata.iter().map(|l| matrix_index("e2d_errata", 2, 3, &l.key)).collect()
}

fn vectors(table: &'static str, lines: &[Line], n: usize, ev: &Env) -> Result<Vec<(String, Vec<C>)>> {
    let mut out: Vec<(String, Vec<C>)> = Vec::new();
    for l in lines {
        let (name, idx) = match l.key.as_slice() {
            [name, idx] => (name.clone(), idx.parse::<usize>().ok()),
            _ => (String::new(), None),
        };
        let idx = idx
            .filter(|&i| i < n)
            .ok_or_else(|| Error::Table { table, msg: format!("bad key `{}`", l.key.join(" ")) })?;
        let pos = match out.iter().position(|(nm, _)| *nm == name) {
            Some(p) => p,
            None => {
                out.push((name, vec![C::new(f64::NAN, 0.0); n]));
                out.len() - 1
            }
        };
        out[pos].1[idx] = l.expr.eval(ev)?;
    }
    for (name, v) in &out {
        if v.iter().any(|z| z.re.is_nan() && z.im.is_nan()) {
            return Err(Error::Table { table, msg: format!("vector {name} is incomplete") });
        }
    }
    Ok(out)
}

/// Stationary modes: one in 2-d, five in 3-d.
pub fn kernel_vectors(problem: Problem, t: [C; 3], h: [f64; 3]) -> Result<Vec<Vec<C>>> {
    let p = parsed()?;
    let ev = env(t, h, 1.0);
    let v = match problem {
        Problem::Acoustics2d => vectors("kernel2d", &p.kernel2d, 12, &ev)?,
        Problem::Acoustics3d => vectors("kernel3d", &p.kernel3d, 32, &ev)?,
        Problem::Advection1d => return Err(Error::Invalid("no kernel table for 1-d advection".into())),
    };
    Ok(v.into_iter().map(|(_, v)| v).collect())
}

/// Coefficients `a_1..a_5` of the combined 3-d mode.
pub fn coefficients_3d(t: [C; 3], h: [f64; 3]) -> Result<Vec<C>> {
    let p = parsed()?;
    let ev = env(t, h, 1.0);
    let mut a = vec![C::new(0.0, 0.0); 5];
    for l in &p.coeff3d {
        let i = l
            .key
            .first()
            .and_then(|k| k.strip_prefix('a'))
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&i| (1..=5).contains(&i))
            .ok_or_else(|| Error::Table { table: "coeff3d", msg: format!("bad key `{}`", l.key.join(" ")) })?;
        a[i - 1] = l.expr.eval(&ev)?;
    }
    Ok(a)
}

/// The combined 3-d mode `Σ a_r Q_r` in its simplified printed form.
pub fn combined_mode_3d(t: [C; 3], h: [f64; 3]) -> Result<Vec<C>> {
    let p = parsed()?;
    let v = vectors("mode3d", &p.mode3d, 32, &env(t, h, 1.0))?;
    Ok(v.into_iter().next().map(|(_, v)| v).unwrap_or_default())
}

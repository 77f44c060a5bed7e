use crate::{CliError, CliResult};
use activeflux_core::cases::{CaseSpec, SeriesRow};
use activeflux_core::{GridSpec, Kind, State};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Round-trip formatting with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn var_names(dim: usize) -> &'static [&'static str] {
    match dim {
        1 => &["q"],
        2 => &["u", "v", "p"],
        _ => &["u", "v", "w", "p"],
    }
}

struct Sink {
    path: PathBuf,
    w: BufWriter<File>,
}

impl Sink {
    fn create(path: &Path) -> CliResult<Sink> {
        let f = File::create(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Ok(Sink { path: path.to_path_buf(), w: BufWriter::new(f) })
    }

    fn line(&mut self, s: &str) -> CliResult<()> {
        writeln!(self.w, "{s}").map_err(|source| CliError::Io { path: self.path.clone(), source })
    }

    fn finish(mut self) -> CliResult<()> {
        self.w.flush().map_err(|source| CliError::Io { path: self.path, source })
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut s = Sink::create(path)?;
    s.line(&header.join(","))?;
    for r in rows {
        s.line(&r.join(","))?;
    }
    s.finish()
}

pub fn write_manifest(path: &Path, entries: &[(&str, String)]) -> CliResult<()> {
    let mut s = Sink::create(path)?;
    for (k, v) in entries {
        s.line(&format!("{k}={v}"))?;
    }
    s.finish()
}

/// One row per cell and dof kind.
pub fn write_snapshot(path: &Path, state: &State) -> CliResult<()> {
    let g = &state.grid;
    let d = g.dim;
    let mut s = Sink::create(path)?;
    s.line(&format!(
        "# dim={} n={} h={} boundary={} t={}",
        d,
        g.n[..d].iter().map(|v| v.to_string()).collect::<Vec<_>>().join("x"),
        g.h[..d].iter().map(|v| num(*v)).collect::<Vec<_>>().join(","),
        g.boundary.name(),
        num(state.time)
    ))?;
    let idx = ["i", "j", "k"];
    let pos = ["x", "y", "z"];
    let mut header = vec!["kind"];
    header.extend(&idx[..d]);
    header.extend(&pos[..d]);
    header.extend(var_names(d).iter().take(state.m));
    s.line(&header.join(","))?;
    for &kind in Kind::all(d) {
        for cell in g.cells_iter() {
            let mut row = vec![kind.name().to_string()];
            row.extend(cell[..d].iter().map(|v| v.to_string()));
            let x = g.position(kind, cell);
            row.extend(x[..d].iter().map(|v| num(*v)));
            let at = g.index(cell);
            row.extend((0..state.m).map(|v| num(state.slot(kind, v)[at])));
            s.line(&row.join(","))?;
        }
    }
    s.finish()
}

/// Streams the time series as rows arrive.
pub struct SeriesWriter {
    sink: Sink,
}

impl SeriesWriter {
    pub fn create(path: &Path, spec: &CaseSpec, grid: &GridSpec) -> CliResult<SeriesWriter> {
        let vars = var_names(grid.dim);
        let m = spec.model().m();
        let mut header = vec!["t".to_string(), "step".to_string()];
        header.extend(vars.iter().take(m).map(|v| format!("l1_{v}")));
        header.extend((1..=7).map(|i| format!("div{i}")));
        header.push("div_control".into());
        header.extend(vars.iter().take(m).map(|v| format!("mass_{v}")));
        let mut sink = Sink::create(path)?;
        sink.line(&header.join(","))?;
        Ok(SeriesWriter { sink })
    }

    pub fn push(&mut self, row: &SeriesRow) -> CliResult<()> {
        let mut line = vec![num(row.t), row.step.to_string()];
        line.extend(row.l1.iter().map(|v| num(*v)));
        match row.div {
            Some(d) => {
                line.extend(d.div.iter().map(|v| num(*v)));
                line.push(num(d.control));
            }
            None => line.extend(std::iter::repeat_n(num(f64::NAN), 8)),
        }
        line.extend(row.mass.iter().map(|v| num(*v)));
        self.sink.line(&line.join(","))
    }

    pub fn finish(self) -> CliResult<()> {
        self.sink.finish()
    }
}

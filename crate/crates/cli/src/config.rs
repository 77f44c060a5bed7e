use crate::{CliError, CliResult, RunArgs};
use activeflux_core::cases::RADIAL_N;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Run parameters after merging the config file with command-line flags.
#[derive(Debug, PartialEq)]
pub struct Settings {
    pub case: String,
    pub n: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub nz: Option<usize>,
    pub cfl: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub steps: Option<usize>,
    pub splitting: Option<String>,
    pub boundary: Option<String>,
    pub out: PathBuf,
    pub samples: Option<usize>,
    pub seed: u64,
    pub pointwise: bool,
    pub radial_n: usize,
}

const KEYS: [&str; 16] = [
    "case", "n", "nx", "ny", "nz", "cfl", "dt", "t-end", "steps", "splitting", "boundary", "out", "samples", "seed",
    "pointwise", "radial-n",
];

/// Parses a flat `key = value` file. Blank lines and `#` comments are skipped and
/// underscores in keys are read as dashes.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", no + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{}`", no + 1, k.trim())));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn get<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    map.get(key)
        .map(|v| v.parse().map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))))
        .transpose()
}

impl Settings {
    pub fn resolve(args: RunArgs) -> CliResult<Settings> {
        let map = match &args.config {
            Some(p) => read(p)?,
            None => BTreeMap::new(),
        };
        Settings::merge(args, &map)
    }

    pub fn merge(a: RunArgs, map: &BTreeMap<String, String>) -> CliResult<Settings> {
        let case = a
            .case
            .or(get(map, "case")?)
            .ok_or_else(|| CliError::Usage("a case is required (--case or `case =` in the config file)".into()))?;
        let mut s = Settings {
            case,
            n: a.n.or(get(map, "n")?),
            nx: a.nx.or(get(map, "nx")?),
            ny: a.ny.or(get(map, "ny")?),
            nz: a.nz.or(get(map, "nz")?),
            cfl: a.cfl,
            dt: a.dt,
            t_end: a.t_end,
            steps: a.steps,
            splitting: a.splitting.or(get(map, "splitting")?),
            boundary: a.boundary.or(get(map, "boundary")?),
            out: a.out.or(get(map, "out")?).unwrap_or_else(|| PathBuf::from("out")),
            samples: a.samples.or(get(map, "samples")?),
            seed: a.seed.or(get(map, "seed")?).unwrap_or(0),
            pointwise: a.pointwise || get(map, "pointwise")?.unwrap_or(false),
            radial_n: a.radial_n.or(get(map, "radial-n")?).unwrap_or(RADIAL_N),
        };
        // a flag for one of an exclusive pair replaces both entries of the file
        if s.cfl.is_none() && s.dt.is_none() {
            s.cfl = get(map, "cfl")?;
            s.dt = get(map, "dt")?;
        }
        if s.t_end.is_none() && s.steps.is_none() {
            s.t_end = get(map, "t-end")?;
            s.steps = get(map, "steps")?;
        }
        if s.cfl.is_some() && s.dt.is_some() {
            return Err(CliError::Usage("give either --cfl or --dt, not both".into()));
        }
        if s.t_end.is_some() && s.steps.is_some() {
            return Err(CliError::Usage("give either --t-end or --steps, not both".into()));
        }
        Ok(s)
    }
}

fn read(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

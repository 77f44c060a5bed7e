//! Shared fixtures for the benchmarks.

use activeflux_core::cases::{init_case, CaseSpec};
use activeflux_core::{GridSpec, State};

/// Initial state of a named case on an `n`-per-axis grid.
pub fn case_state(name: &str, n: usize) -> (CaseSpec, State) {
    let spec = CaseSpec::named(name).expect("known case");
    let grid: GridSpec = spec.grid([n; 3], None).expect("valid grid");
    let state = init_case(&spec, &grid).expect("case initialises");
    (spec, state)
}

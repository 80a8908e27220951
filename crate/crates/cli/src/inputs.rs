use std::fs;
use std::io::BufReader;

use quadsuite::fock::{make_state, StateSpec, TruncatedState};
use quadsuite::grid::GridFunction;
use quadsuite::tomography::QuadratureDataset;
use quadsuite::wigner_radon::read_grid_dump;
use quadsuite::Error;

use crate::Failure;

/// Builds a state from `vacuum | number:<n> | coherent:<re>,<im> |
/// squeezed:<r>,<phi> | file:<path>`.
pub fn load_state(spec: &str, dim: usize) -> Result<TruncatedState, Failure> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read state file `{path}`: {e}")))?;
        let state = TruncatedState::from_json(&text).map_err(Failure::state)?;
        if state.dim() == dim {
            return Ok(state);
        }
        return state.padded(dim).map_err(Failure::state);
    }
    let parsed: StateSpec = spec.parse().map_err(Failure::config)?;
    let state = make_state(&parsed, dim).map_err(|e| match e {
        Error::Validation(_) => Failure::state(e),
        other => Failure::from(other),
    })?;
    if state.leakage_warning() {
        eprintln!(
            "warning: state `{spec}` leaks {:.3e} of its norm outside dimension {dim}",
            state.leakage()
        );
    }
    Ok(state)
}

pub fn load_dataset(path: &str) -> Result<QuadratureDataset, Failure> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::config(format!("cannot open dataset `{path}`: {e}")))?;
    QuadratureDataset::read(BufReader::new(file)).map_err(Failure::from)
}

pub fn load_grid(path: &str) -> Result<GridFunction, Failure> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::config(format!("cannot open grid `{path}`: {e}")))?;
    read_grid_dump(BufReader::new(file)).map_err(Failure::from)
}

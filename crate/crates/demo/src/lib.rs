//! Browser bindings for `stci-core`. Each function returns the same JSON
//! report the `stci --json` command prints, or `{"error": ..., "exit_code": ...}`.

use stci_core::cli::{self, DeltaArgs, ExtendArgs, GlueArgs, ShapeChoice};
use stci_core::{Error, Result};
use wasm_bindgen::prelude::*;

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("{t:?} is not a positive integer")))
        })
        .collect()
}

fn render(r: Result<cli::Report>) -> String {
    match r {
        Ok(report) => report.to_json(),
        Err(e) => serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }).to_string(),
    }
}

/// `delta(m)` in the semigroup generated by a comma-separated list.
#[wasm_bindgen]
pub fn semigroup_degree(gens: &str, m: u32) -> String {
    render(parse_list(gens).and_then(|gens| {
        cli::run_delta(&DeltaArgs {
            gens,
            m: m as u64,
            all: true,
        })
    }))
}

#[wasm_bindgen]
pub fn gluing(curve: &str) -> String {
    render(parse_list(curve).and_then(|curve| cli::run_glue(&GlueArgs { curve })))
}

/// Builds the extension of `base` by `(ell, m)`. `shape` is one of `auto`,
/// `xn`, `chain`, `none`; `zero_set` turns on the finite-field comparison
/// over the default primes.
#[wasm_bindgen]
pub fn extend(base: &str, ell: u32, m: u32, shape: &str, zero_set: bool) -> String {
    let shape = match shape {
        "xn" => ShapeChoice::Xn,
        "chain" => ShapeChoice::Chain,
        "none" => ShapeChoice::Trivial,
        _ => ShapeChoice::Auto,
    };
    render(parse_list(base).and_then(|base| {
        let mut args = ExtendArgs::new(base, ell as u64, m as u64);
        args.shape = shape;
        args.no_zero_set = !zero_set;
        cli::run_extend(&args)
    }))
}

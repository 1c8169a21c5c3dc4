//! Reads a system from JSON, validates it and writes it back.
//!
//! `cargo run --example spec_files -- crates/core/data/EX2.json`

use stokes_core::cli::{parse_spec_value, spec_value};
use stokes_core::odeforms::validate_system;

fn main() -> stokes_core::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/EX1.json").to_string());
    let text = std::fs::read_to_string(&path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| stokes_core::Error::Parse { path: "$".into(), message: e.to_string() })?;
    let spec = parse_spec_value(&value)?;
    println!("{}", validate_system(&spec));
    let back = spec_value(&spec);
    println!("{}", serde_json::to_string_pretty(&back).unwrap_or_default());
    println!("round trip exact: {}", parse_spec_value(&back)? == spec);
    Ok(())
}

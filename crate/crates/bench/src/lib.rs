//! Shared fixtures for the simulation benchmarks.

use leaksim_core::circuit::build_variant;
use leaksim_core::noise::{NoiseModel, SidePolicy, SiteFilter};
use leaksim_core::sim::{run_shot, CompiledCircuit, ShotResult};
use leaksim_core::{RandomStream, Variant};

/// A `d`-round circuit with two-sided leakage at rate `p` everywhere.
pub fn leaky_circuit(variant: Variant, d: usize, p: f64) -> CompiledCircuit {
    let program = build_variant(variant, d, d).expect("valid circuit");
    let noise = NoiseModel::with_leakage(p, 1.0, SidePolicy::TwoSided, SiteFilter::All);
    CompiledCircuit::new(&program, &noise).expect("valid noise")
}

/// Shots from a fixed seed, for decoder benchmarks.
pub fn sample_shots(circuit: &CompiledCircuit, count: u64) -> Vec<ShotResult> {
    (0..count)
        .map(|shot| run_shot(circuit, &mut RandomStream::new(7, shot), &[]))
        .collect()
}

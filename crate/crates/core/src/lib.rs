//! Leakage-aware Pauli-frame simulation of toric-code syndrome extraction.

pub mod circuit;
pub mod decoder;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod matching;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod scan;
pub mod sim;

pub use circuit::{CircuitBuilder, CircuitProgram, GateKind, GateOp, GateTag, Variant};
pub use error::{Error, Result};
pub use lattice::{CheckId, CheckKind, ToricLattice};
pub use pauli::{LeakageMask, Pauli, PauliFrame};
pub use rng::{DrawSource, Prob, RandomStream};

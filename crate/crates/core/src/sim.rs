//! Shot execution: Pauli frame plus leakage mask under the depolarizing
//! leakage model.
//!
//! A leaked qubit keeps its flag until it is prepared again. Any two-qubit
//! gate between a leaked and an unleaked qubit, SWAP included, skips its
//! ideal action and replaces the unleaked qubit's error by a uniformly random
//! Pauli. Leaked flags belong to the physical qubit and never move: after a
//! SWAP LRC the leaked qubit sits in the ancilla role, where the next
//! preparation removes the leakage, and the data role continues on a fresh
//! qubit.

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitProgram, FaultLocation, GateKind, GateOp, Role};
use crate::error::{Error, Result};
use crate::noise::{LeakedMeasurement, NoiseModel, Rates, SidePolicy};
use crate::pauli::{BitVec, LeakageMask, Pauli, PauliFrame};
use crate::rng::DrawSource;

const NO_GATE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct ExecOp {
    kind: GateKind,
    q: [u32; 2],
    /// Operand slots that may leak here (bit 0: first, bit 1: second).
    leak_slots: u8,
    init_leak: bool,
    /// Measurement record slot, or the program gate id for other kinds.
    record: u32,
    gate: u32,
}

/// A program bound to a noise model, flattened for the inner loop.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    program: CircuitProgram,
    noise: NoiseModel,
    rates: Rates,
    ops: Vec<ExecOp>,
    round_ends: Vec<usize>,
    /// Global gate id -> (round, index within round).
    gate_index: Vec<(usize, usize)>,
    num_checks: usize,
}

impl CompiledCircuit {
    pub fn new(program: &CircuitProgram, noise: &NoiseModel) -> Result<Self> {
        noise.validate()?;
        let rates = noise.rates();
        let n = program.num_physical();
        let dd = program.distance() * program.distance();
        let num_checks = 2 * dd;
        let mut ops = Vec::new();
        let mut round_ends = Vec::with_capacity(program.num_rounds());
        let mut gate_index = Vec::new();
        for (r, round) in program.rounds.iter().enumerate() {
            let mut seen = vec![false; num_checks];
            let mut touched = vec![usize::MAX; n];
            let mut step = 0;
            let flush_idles = |ops: &mut Vec<ExecOp>, touched: &[usize], step: usize| {
                if rates.idle.is_zero() {
                    return;
                }
                for (q, &s) in touched.iter().enumerate() {
                    if s != step {
                        ops.push(ExecOp {
                            kind: GateKind::Idle,
                            q: [q as u32; 2],
                            leak_slots: 0,
                            init_leak: false,
                            record: 0,
                            gate: NO_GATE,
                        });
                    }
                }
            };
            for (i, g) in round.gates.iter().enumerate() {
                if g.step != step {
                    for s in step..g.step {
                        flush_idles(&mut ops, &touched, s);
                    }
                    step = g.step;
                }
                for &q in g.targets() {
                    if q >= n {
                        return Err(Error::QubitOutOfRange {
                            qubit: q,
                            num_qubits: n,
                        });
                    }
                    if touched[q] == step {
                        return Err(Error::InvalidCircuit(format!(
                            "qubit {q} used twice in round {r} step {step}"
                        )));
                    }
                    touched[q] = step;
                }
                let gate = gate_index.len() as u32;
                gate_index.push((r, i));
                let mut record = gate;
                if g.kind.is_measure() {
                    let c = g.label.check.ok_or_else(|| {
                        Error::InvalidCircuit("measurement without a check label".into())
                    })?;
                    let flat = c.kind.slot() * dd + c.index;
                    if seen[flat] {
                        return Err(Error::InvalidCircuit(format!(
                            "check {c:?} measured twice in round {r}"
                        )));
                    }
                    seen[flat] = true;
                    record = (r * num_checks + flat) as u32;
                }
                ops.push(ExecOp {
                    kind: g.kind,
                    q: [g.qubits[0] as u32, g.qubits[1] as u32],
                    leak_slots: leak_slots(g, noise),
                    init_leak: g.kind.is_prep()
                        && noise.site_filter.admits(&g.label, g.label.roles[0]),
                    record,
                    gate,
                });
            }
            flush_idles(&mut ops, &touched, step);
            if let Some(c) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidCircuit(format!(
                    "check slot {c} not measured in round {r}"
                )));
            }
            round_ends.push(ops.len());
        }
        Ok(CompiledCircuit {
            program: program.clone(),
            noise: *noise,
            rates,
            ops,
            round_ends,
            gate_index,
            num_checks,
        })
    }

    pub fn program(&self) -> &CircuitProgram {
        &self.program
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn num_rounds(&self) -> usize {
        self.program.num_rounds()
    }

    /// Checks of both types, `Z` first.
    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    /// Number of gates in the program (idle noise locations excluded).
    pub fn num_gates(&self) -> usize {
        self.gate_index.len()
    }

    pub fn gate(&self, id: usize) -> &GateOp {
        let (r, i) = self.gate_index[id];
        &self.program.rounds[r].gates[i]
    }

    pub fn location(&self, id: usize) -> &FaultLocation {
        &self.gate(id).label
    }

    /// Operand slots that the noise model lets leak at gate `id`.
    pub fn leak_slots(&self, id: usize) -> u8 {
        leak_slots(self.gate(id), &self.noise)
    }

    /// Whether preparation gate `id` admits initialization leakage.
    pub fn admits_init_leak(&self, id: usize) -> bool {
        let g = self.gate(id);
        g.kind.is_prep() && self.noise.site_filter.admits(&g.label, g.label.roles[0])
    }
}

fn leak_slots(g: &GateOp, noise: &NoiseModel) -> u8 {
    if !matches!(g.kind, GateKind::H | GateKind::Cnot | GateKind::Swap) {
        return 0;
    }
    // Leakage happens at the end of the gate, so a SWAP operand is judged by
    // the state it holds afterwards.
    let after: [Role; 2] = if g.kind == GateKind::Swap {
        [g.label.roles[1], g.label.roles[0]]
    } else {
        g.label.roles
    };
    let sides = match (g.kind.arity(), noise.side_policy) {
        (2, SidePolicy::TwoSided) => 0b11,
        _ => 0b01,
    };
    (0..2)
        .filter(|&s| sides >> s & 1 == 1 && noise.site_filter.admits(&g.label, after[s]))
        .fold(0, |acc, s| acc | 1 << s)
}

/// A deterministic fault placed on one gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaultKind {
    /// Paulis applied to the gate's operands after its ideal action.
    Pauli([Pauli; 2]),
    /// The operand in `slot` leaks at the end of the gate.
    Leak { slot: u8 },
    /// Orthogonal-state error after a preparation.
    PrepFlip,
    /// Classical flip of a measurement outcome.
    MeasFlip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Injection {
    /// Global gate id, see [`CompiledCircuit::gate`].
    pub gate: usize,
    pub kind: FaultKind,
}

/// Measured check outcomes of every round plus the closing perfect round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeRecord {
    pub rounds: usize,
    pub num_checks: usize,
    /// Bit `round * num_checks + flat_check`, flat index `Z` checks first.
    pub measured: BitVec,
    /// Ideal syndrome of `data_frame`, same flat indexing.
    pub final_syndrome: BitVec,
    /// Readout-consistent data error, indexed by data site.
    pub data_frame: PauliFrame,
}

impl SyndromeRecord {
    pub fn measured(&self, round: usize, flat_check: usize) -> bool {
        self.measured.get(round * self.num_checks + flat_check)
    }

    /// Final data readout bits in the Z basis (the X component of the error).
    pub fn final_data_outcomes(&self) -> Vec<bool> {
        (0..self.data_frame.num_qubits())
            .map(|e| self.data_frame.get(e).x)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct ShotResult {
    pub record: SyndromeRecord,
    /// Frame over physical qubits after the last round.
    pub frame: PauliFrame,
    pub mask: LeakageMask,
}

pub fn run_shot<S: DrawSource>(
    circuit: &CompiledCircuit,
    draws: &mut S,
    injections: &[Injection],
) -> ShotResult {
    run_shot_observed(circuit, draws, injections, |_, _, _| {})
}

/// Like [`run_shot`], calling `on_round_end(round, frame, mask)` after every
/// round.
pub fn run_shot_observed<S: DrawSource>(
    circuit: &CompiledCircuit,
    draws: &mut S,
    injections: &[Injection],
    mut on_round_end: impl FnMut(usize, &PauliFrame, &LeakageMask),
) -> ShotResult {
    let program = &circuit.program;
    let n = program.num_physical();
    let rates = &circuit.rates;
    let leaked_meas = circuit.noise.leaked_meas;
    let onset = circuit.noise.onset_depolarizes_partner;
    let mut frame = PauliFrame::new(n);
    let mut mask = LeakageMask::new(n);
    let mut measured = BitVec::zeros(circuit.num_rounds() * circuit.num_checks);
    let mut pending = injections.iter().peekable();
    debug_assert!(injections.windows(2).all(|w| w[0].gate <= w[1].gate));

    let mut start = 0;
    for (r, &end) in circuit.round_ends.iter().enumerate() {
        for op in &circuit.ops[start..end] {
            let a = op.q[0] as usize;
            let b = op.q[1] as usize;
            let mut flip = false;
            match op.kind {
                GateKind::PrepZ | GateKind::PrepX => {
                    frame.set(a, Pauli::I);
                    mask.reset(a);
                    if draws.event(rates.prep) {
                        frame.apply(a, orthogonal(op.kind));
                    }
                    if op.init_leak && draws.event(rates.init_leak) {
                        mask.leak(a);
                    }
                }
                GateKind::MeasZ | GateKind::MeasX => {}
                GateKind::Idle => {
                    if !mask.is_leaked(a) && draws.event(rates.idle) {
                        frame.apply(a, draws.nontrivial_pauli());
                    }
                }
                GateKind::H => {
                    if !mask.is_leaked(a) {
                        frame.h_unchecked(a);
                        if draws.event(rates.single_qubit) {
                            frame.apply(a, draws.nontrivial_pauli());
                        }
                        if op.leak_slots != 0 && draws.event(rates.single_qubit_leak) {
                            mask.leak(a);
                        }
                    }
                }
                GateKind::Cnot | GateKind::Swap => {
                    let (la, lb) = (mask.is_leaked(a), mask.is_leaked(b));
                    let swap = op.kind == GateKind::Swap;
                    if la != lb {
                        let victim = if la { b } else { a };
                        frame.apply(victim, draws.leak_depolarize());
                    }
                    if !la && !lb {
                        if swap {
                            frame.swap_unchecked(a, b);
                        } else {
                            frame.cnot_unchecked(a, b);
                        }
                        if draws.event(rates.two_qubit) {
                            let (pa, pb) = draws.nontrivial_pauli_pair();
                            frame.apply(a, pa);
                            frame.apply(b, pb);
                        }
                        if op.leak_slots != 0 && draws.event(rates.two_qubit_leak) {
                            let slot = match op.leak_slots {
                                0b11 => draws.choose(2),
                                0b10 => 1,
                                _ => 0,
                            };
                            leak_operand(&mut frame, &mut mask, draws, [a, b], slot, onset);
                        }
                    }
                }
            }
            if op.gate != NO_GATE {
                let gate = op.gate as usize;
                while let Some(inj) = pending.next_if(|i| i.gate <= gate) {
                    if inj.gate < gate {
                        continue;
                    }
                    match inj.kind {
                        FaultKind::Pauli(ps) => {
                            for (s, p) in ps.iter().enumerate().take(op.kind.arity()) {
                                let q = op.q[s] as usize;
                                if !mask.is_leaked(q) {
                                    frame.apply(q, *p);
                                }
                            }
                        }
                        FaultKind::Leak { slot } => {
                            let q = op.q[slot as usize & 1] as usize;
                            let arity2 = op.kind.arity() == 2;
                            if !mask.is_leaked(q) {
                                if arity2 {
                                    leak_operand(
                                        &mut frame,
                                        &mut mask,
                                        draws,
                                        [a, b],
                                        slot as usize,
                                        onset,
                                    );
                                } else {
                                    mask.leak(q);
                                }
                            }
                        }
                        FaultKind::PrepFlip => {
                            if op.kind.is_prep() && !mask.is_leaked(a) {
                                frame.apply(a, orthogonal(op.kind));
                            }
                        }
                        FaultKind::MeasFlip => flip = true,
                    }
                }
            }
            if op.kind.is_measure() {
                let bit = if mask.is_leaked(a) {
                    match leaked_meas {
                        LeakedMeasurement::RandomBit => draws.leaked_outcome(),
                        LeakedMeasurement::FixedOne => true,
                    }
                } else {
                    let p = frame.get(a);
                    let raw = if op.kind == GateKind::MeasZ { p.x } else { p.z };
                    raw ^ draws.event(rates.meas_flip) ^ flip
                };
                measured.set(op.record as usize, bit);
            }
        }
        on_round_end(r, &frame, &mask);
        start = end;
    }

    let lattice = &program.lattice;
    let mut data_frame = PauliFrame::new(lattice.num_data());
    for (e, &q) in program.final_layout.data.iter().enumerate() {
        let p = if mask.is_leaked(q) {
            match leaked_meas {
                LeakedMeasurement::RandomBit => draws.leak_depolarize(),
                LeakedMeasurement::FixedOne => Pauli::Y,
            }
        } else {
            frame.get(q)
        };
        data_frame.set(e, p);
    }
    let syn = lattice
        .syndrome_of(&data_frame)
        .expect("data frame sized to the lattice");
    let dd = lattice.distance() * lattice.distance();
    let mut final_syndrome = BitVec::zeros(2 * dd);
    for i in 0..dd {
        final_syndrome.set(i, syn.z.get(i));
        final_syndrome.set(dd + i, syn.x.get(i));
    }
    ShotResult {
        record: SyndromeRecord {
            rounds: circuit.num_rounds(),
            num_checks: circuit.num_checks,
            measured,
            final_syndrome,
            data_frame,
        },
        frame,
        mask,
    }
}

fn orthogonal(kind: GateKind) -> Pauli {
    if kind == GateKind::PrepX {
        Pauli::Z
    } else {
        Pauli::X
    }
}

#[inline]
fn leak_operand<S: DrawSource>(
    frame: &mut PauliFrame,
    mask: &mut LeakageMask,
    draws: &mut S,
    qubits: [usize; 2],
    slot: usize,
    onset: bool,
) {
    mask.leak(qubits[slot]);
    let partner = qubits[1 - slot];
    if onset && !mask.is_leaked(partner) {
        frame.apply(partner, draws.leak_depolarize());
    }
}

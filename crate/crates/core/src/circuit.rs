//! Syndrome-extraction programs for the six circuit variants.
//!
//! A round is first generated as a sequential gate list over physical
//! qubits, then adjacent `H·H` pairs on the same qubit are cancelled and
//! every gate is placed at the earliest timestep after the previous gate on
//! each of its qubits. Roles (data, ancilla, spare) are tracked per round:
//! a SWAP exchanges quantum states, so the physical qubit that carried a data
//! state carries the ancilla state afterwards and vice versa.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CheckId, CheckKind, Dir, ToricLattice};

pub const CIRCUIT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PrepZ,
    PrepX,
    H,
    Cnot,
    Swap,
    MeasZ,
    MeasX,
    Idle,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn is_prep(self) -> bool {
        matches!(self, GateKind::PrepZ | GateKind::PrepX)
    }

    pub fn is_measure(self) -> bool {
        matches!(self, GateKind::MeasZ | GateKind::MeasX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Data,
    AncillaZ,
    AncillaX,
    Spare,
}

impl Role {
    pub fn is_data(self) -> bool {
        self == Role::Data
    }
}

/// What a gate is for inside the extraction circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateTag {
    AncillaPrep,
    SparePrep,
    /// First H on an X-check ancilla, right after preparation.
    BasisIn,
    /// H on an X-check ancilla before readout.
    BasisOut,
    CheckCnot,
    /// H introduced by reversing a CNOT.
    ReversalH,
    /// Mid-circuit exchange of the working ancilla with its spare.
    MidSwap,
    /// End-of-round data/ancilla exchange.
    LrcSwap,
    AncillaMeasure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaultLocation {
    pub round: usize,
    pub gate_index: usize,
    pub kind: GateKind,
    pub tag: GateTag,
    /// 1-4 for the check CNOTs, 0 otherwise.
    pub cnot_ordinal: u8,
    pub check: Option<CheckId>,
    /// Roles of the touched qubits just before the gate.
    pub roles: [Role; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    /// Physical qubits; only the first `kind.arity()` entries are meaningful.
    /// For CNOT the order is `(control, target)`.
    pub qubits: [usize; 2],
    pub step: usize,
    pub label: FaultLocation,
}

impl GateOp {
    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Standard,
    SwapLrc,
    SwapAlt,
    GateBiased,
    GateBiasedOpt,
    MixedLrc,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Standard,
        Variant::SwapLrc,
        Variant::SwapAlt,
        Variant::GateBiased,
        Variant::GateBiasedOpt,
        Variant::MixedLrc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::SwapLrc => "swap_lrc",
            Variant::SwapAlt => "swap_alt",
            Variant::GateBiased => "gate_biased",
            Variant::GateBiasedOpt => "gate_biased_opt",
            Variant::MixedLrc => "mixed_lrc",
        }
    }

    pub fn needs_spares(self) -> bool {
        self == Variant::MixedLrc
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::config("variant", format!("unknown variant `{s}`")))
    }
}

/// Order in which each check visits its four data neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub z: [Dir; 4],
    pub x: [Dir; 4],
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            z: [Dir::N, Dir::W, Dir::E, Dir::S],
            x: [Dir::N, Dir::E, Dir::W, Dir::S],
        }
    }
}

impl Schedule {
    pub fn order(&self, kind: CheckKind) -> &[Dir; 4] {
        match kind {
            CheckKind::Z => &self.z,
            CheckKind::X => &self.x,
        }
    }

    fn validate(&self) -> Result<()> {
        for order in [&self.z, &self.x] {
            for dir in Dir::ALL {
                if !order.contains(&dir) {
                    return Err(Error::InvalidCircuit(format!(
                        "schedule {order:?} does not visit {dir:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Physical placement of every lattice site at the start of a round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    /// Data site -> physical qubit.
    pub data: Vec<usize>,
    /// Check (flat index `kind.slot() * d^2 + index`) -> physical ancilla.
    pub ancilla: Vec<usize>,
    /// Check -> physical spare (mixed LRC only).
    pub spare: Vec<usize>,
}

impl Layout {
    fn initial(lattice: &ToricLattice) -> Self {
        let checks: Vec<CheckId> = lattice.checks().collect();
        Layout {
            data: (0..lattice.num_data())
                .map(|e| lattice.data_physical(e))
                .collect(),
            ancilla: checks.iter().map(|&c| lattice.check_physical(c)).collect(),
            spare: checks
                .iter()
                .filter_map(|&c| lattice.spare_physical(c))
                .collect(),
        }
    }

    /// Physical index -> role.
    pub fn roles(&self, num_physical: usize, d: usize) -> Vec<Role> {
        let mut roles = vec![Role::Spare; num_physical];
        for &p in &self.data {
            roles[p] = Role::Data;
        }
        for (k, &p) in self.ancilla.iter().enumerate() {
            roles[p] = if k < d * d {
                Role::AncillaZ
            } else {
                Role::AncillaX
            };
        }
        roles
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    /// Gates sorted by timestep.
    pub gates: Vec<GateOp>,
    /// Placement at the start of the round.
    pub layout: Layout,
    pub num_steps: usize,
}

#[derive(Clone, Debug)]
pub struct CircuitProgram {
    pub variant: Variant,
    pub lattice: ToricLattice,
    pub schedule: Schedule,
    pub rounds: Vec<Round>,
    /// Placement after the last round, used for the final data readout.
    pub final_layout: Layout,
    /// Net single-qubit gates added to one X-check circuit by CNOT reversal.
    pub extra_single_qubit_gates_per_x_check: usize,
}

impl CircuitProgram {
    pub fn num_physical(&self) -> usize {
        self.lattice.num_physical()
    }

    pub fn distance(&self) -> usize {
        self.lattice.distance()
    }

    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Role map (physical -> role) at the start of round `r`; `r == num_rounds`
    /// gives the placement after the last round.
    pub fn role_map(&self, r: usize) -> Vec<Role> {
        let layout = if r == self.rounds.len() {
            &self.final_layout
        } else {
            &self.rounds[r].layout
        };
        layout.roles(self.num_physical(), self.distance())
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateOp> {
        self.rounds.iter().flat_map(|r| r.gates.iter())
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates().filter(|g| g.kind == kind).count()
    }

    pub fn count_in_round(&self, r: usize, kind: GateKind) -> usize {
        self.rounds[r]
            .gates
            .iter()
            .filter(|g| g.kind == kind)
            .count()
    }

    /// Writes the program as JSON lines: one header record, then one record
    /// per gate.
    pub fn emit<W: Write>(&self, mut out: W) -> Result<()> {
        let header = EmitHeader {
            format: "leaksim-circuit".into(),
            version: CIRCUIT_FORMAT_VERSION,
            variant: self.variant,
            distance: self.distance(),
            rounds: self.num_rounds(),
            num_physical: self.num_physical(),
            schedule: self.schedule,
        };
        serde_json::to_writer(&mut out, &header)?;
        writeln!(out)?;
        for g in self.gates() {
            let rec = EmitGate {
                round: g.label.round,
                step: g.step,
                kind: g.kind,
                qubits: g.targets().to_vec(),
                label: g.label,
            };
            serde_json::to_writer(&mut out, &rec)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct EmitHeader {
    pub format: String,
    pub version: u32,
    pub variant: Variant,
    pub distance: usize,
    pub rounds: usize,
    pub num_physical: usize,
    pub schedule: Schedule,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct EmitGate {
    pub round: usize,
    pub step: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub label: FaultLocation,
}

/// Per-round options shared by all variants.
#[derive(Clone, Copy, Debug, Default)]
struct RoundSpec {
    lrc_swap: bool,
    mid_swap: bool,
    /// Bit `k-1` set: the X-check CNOT of ordinal `k` is reversed.
    reversed: u8,
}

pub struct CircuitBuilder {
    lattice: ToricLattice,
    rounds: usize,
    schedule: Schedule,
}

impl CircuitBuilder {
    pub fn new(lattice: ToricLattice) -> Self {
        let rounds = lattice.distance();
        CircuitBuilder {
            lattice,
            rounds,
            schedule: Schedule::default(),
        }
    }

    pub fn rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    fn check_request(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidCircuit("at least one round required".into()));
        }
        self.schedule.validate()
    }

    pub fn standard(&self) -> Result<CircuitProgram> {
        self.check_request()?;
        self.assemble(Variant::Standard, |_| RoundSpec::default())
    }

    pub fn swap_lrc(&self, period: usize) -> Result<CircuitProgram> {
        self.check_request()?;
        let variant = match period {
            1 => Variant::SwapLrc,
            2 => Variant::SwapAlt,
            _ => {
                return Err(Error::InvalidCircuit(format!(
                    "swap period must be 1 or 2, got {period}"
                )))
            }
        };
        self.assemble(variant, |r| RoundSpec {
            lrc_swap: (r + 1) % period == 0,
            ..RoundSpec::default()
        })
    }

    pub fn gate_biased(&self, optimized: bool) -> Result<CircuitProgram> {
        self.check_request()?;
        let (variant, reversed, expected) = if optimized {
            (Variant::GateBiasedOpt, 0b0011, EXTRA_H_OPTIMIZED)
        } else {
            (Variant::GateBiased, 0b1111, EXTRA_H_FULL)
        };
        let program = self.assemble(variant, |_| RoundSpec {
            lrc_swap: true,
            reversed,
            ..RoundSpec::default()
        })?;
        if program.extra_single_qubit_gates_per_x_check != expected {
            return Err(Error::ConstructionInvariant(format!(
                "{variant}: expected {expected} extra single-qubit gates per X-check, found {}",
                program.extra_single_qubit_gates_per_x_check
            )));
        }
        Ok(program)
    }

    pub fn mixed_lrc(&self) -> Result<CircuitProgram> {
        self.check_request()?;
        if !self.lattice.has_spares() {
            return Err(Error::InvalidCircuit(
                "mixed LRC needs a lattice built with spares".into(),
            ));
        }
        self.assemble(Variant::MixedLrc, |_| RoundSpec {
            lrc_swap: true,
            mid_swap: true,
            ..RoundSpec::default()
        })
    }

    pub fn build(&self, variant: Variant) -> Result<CircuitProgram> {
        match variant {
            Variant::Standard => self.standard(),
            Variant::SwapLrc => self.swap_lrc(1),
            Variant::SwapAlt => self.swap_lrc(2),
            Variant::GateBiased => self.gate_biased(false),
            Variant::GateBiasedOpt => self.gate_biased(true),
            Variant::MixedLrc => self.mixed_lrc(),
        }
    }

    fn assemble(
        &self,
        variant: Variant,
        spec_for: impl Fn(usize) -> RoundSpec,
    ) -> Result<CircuitProgram> {
        let mut layout = Layout::initial(&self.lattice);
        let mut rounds = Vec::with_capacity(self.rounds);
        for r in 0..self.rounds {
            let spec = spec_for(r);
            let (round, next) = self.build_round(r, &layout, spec);
            rounds.push(round);
            layout = next;
        }
        let extra = self.extra_gates_per_x_check(spec_for(0));
        Ok(CircuitProgram {
            variant,
            lattice: self.lattice.clone(),
            schedule: self.schedule,
            rounds,
            final_layout: layout,
            extra_single_qubit_gates_per_x_check: extra,
        })
    }

    /// Single-qubit gate surplus of one isolated X-check circuit relative to
    /// the same circuit without reversals.
    fn extra_gates_per_x_check(&self, spec: RoundSpec) -> usize {
        let count = |spec: RoundSpec| {
            let check = CheckId {
                kind: CheckKind::X,
                index: 0,
            };
            let seq = self.round_sequence(0, &Layout::initial(&self.lattice), spec, Some(check));
            cancel_hadamard_pairs(seq.gates)
                .iter()
                .filter(|g| g.kind.arity() == 1 && !g.kind.is_prep() && !g.kind.is_measure())
                .count()
        };
        let plain = RoundSpec {
            reversed: 0,
            ..spec
        };
        count(spec) - count(plain)
    }

    fn build_round(&self, r: usize, layout: &Layout, spec: RoundSpec) -> (Round, Layout) {
        let seq = self.round_sequence(r, layout, spec, None);
        let mut gates = cancel_hadamard_pairs(seq.gates);
        let num_steps = assign_steps(&mut gates, self.lattice.num_physical());
        gates.sort_by_key(|g| g.step);
        for (i, g) in gates.iter_mut().enumerate() {
            g.label.gate_index = i;
        }
        (
            Round {
                gates,
                layout: layout.clone(),
                num_steps,
            },
            seq.next_layout,
        )
    }

    /// Sequential gate list for one round. With `only`, emits just the gates
    /// belonging to that check's circuit.
    fn round_sequence(
        &self,
        r: usize,
        layout: &Layout,
        spec: RoundSpec,
        only: Option<CheckId>,
    ) -> Sequence {
        let lat = &self.lattice;
        let dd = lat.distance() * lat.distance();
        let mut roles = layout.roles(lat.num_physical(), lat.distance());
        let mut next = layout.clone();
        let checks: Vec<CheckId> = lat
            .checks()
            .filter(|c| only.is_none_or(|o| o == *c))
            .collect();
        let flat = |c: CheckId| c.kind.slot() * dd + c.index;
        // Physical qubit currently holding each check's ancilla state.
        let mut active: Vec<usize> = layout.ancilla.clone();
        let mut out = Vec::new();
        let push = |out: &mut Vec<GateOp>,
                    roles: &[Role],
                    kind: GateKind,
                    qubits: [usize; 2],
                    tag: GateTag,
                    ordinal: u8,
                    check: CheckId| {
            let second = if kind.arity() == 2 {
                roles[qubits[1]]
            } else {
                roles[qubits[0]]
            };
            out.push(GateOp {
                kind,
                qubits,
                step: 0,
                label: FaultLocation {
                    round: r,
                    gate_index: 0,
                    kind,
                    tag,
                    cnot_ordinal: ordinal,
                    check: Some(check),
                    roles: [roles[qubits[0]], second],
                },
            });
        };

        for &c in &checks {
            let a = active[flat(c)];
            push(
                &mut out,
                &roles,
                GateKind::PrepZ,
                [a, a],
                GateTag::AncillaPrep,
                0,
                c,
            );
            if spec.mid_swap {
                let s = layout.spare[flat(c)];
                push(
                    &mut out,
                    &roles,
                    GateKind::PrepZ,
                    [s, s],
                    GateTag::SparePrep,
                    0,
                    c,
                );
            }
        }
        for &c in checks.iter().filter(|c| c.kind == CheckKind::X) {
            let a = active[flat(c)];
            push(
                &mut out,
                &roles,
                GateKind::H,
                [a, a],
                GateTag::BasisIn,
                0,
                c,
            );
        }
        for ordinal in 1..=4u8 {
            if spec.mid_swap && ordinal == 3 {
                for &c in &checks {
                    let a = active[flat(c)];
                    let s = layout.spare[flat(c)];
                    push(
                        &mut out,
                        &roles,
                        GateKind::Swap,
                        [a, s],
                        GateTag::MidSwap,
                        0,
                        c,
                    );
                    roles.swap(a, s);
                    active[flat(c)] = s;
                }
            }
            for &c in &checks {
                let a = active[flat(c)];
                let dir = self.schedule.order(c.kind)[ordinal as usize - 1];
                let q = layout.data[lat.neighbor(c, dir)];
                match c.kind {
                    CheckKind::Z => push(
                        &mut out,
                        &roles,
                        GateKind::Cnot,
                        [q, a],
                        GateTag::CheckCnot,
                        ordinal,
                        c,
                    ),
                    CheckKind::X if spec.reversed >> (ordinal - 1) & 1 == 1 => {
                        for t in [a, q] {
                            push(
                                &mut out,
                                &roles,
                                GateKind::H,
                                [t, t],
                                GateTag::ReversalH,
                                0,
                                c,
                            );
                        }
                        push(
                            &mut out,
                            &roles,
                            GateKind::Cnot,
                            [q, a],
                            GateTag::CheckCnot,
                            ordinal,
                            c,
                        );
                        for t in [a, q] {
                            push(
                                &mut out,
                                &roles,
                                GateKind::H,
                                [t, t],
                                GateTag::ReversalH,
                                0,
                                c,
                            );
                        }
                    }
                    CheckKind::X => push(
                        &mut out,
                        &roles,
                        GateKind::Cnot,
                        [a, q],
                        GateTag::CheckCnot,
                        ordinal,
                        c,
                    ),
                }
            }
        }
        for &c in checks.iter().filter(|c| c.kind == CheckKind::X) {
            let a = active[flat(c)];
            push(
                &mut out,
                &roles,
                GateKind::H,
                [a, a],
                GateTag::BasisOut,
                0,
                c,
            );
        }
        if spec.lrc_swap {
            for &c in &checks {
                let a = active[flat(c)];
                let site = lat.neighbor(c, Dir::N);
                let q = layout.data[site];
                // Data operand first: it is the victim under control-only leakage.
                push(
                    &mut out,
                    &roles,
                    GateKind::Swap,
                    [q, a],
                    GateTag::LrcSwap,
                    0,
                    c,
                );
                roles.swap(a, q);
                active[flat(c)] = q;
                next.data[site] = a;
            }
        }
        for &c in &checks {
            let a = active[flat(c)];
            push(
                &mut out,
                &roles,
                GateKind::MeasZ,
                [a, a],
                GateTag::AncillaMeasure,
                0,
                c,
            );
            next.ancilla[flat(c)] = a;
            if spec.mid_swap {
                next.spare[flat(c)] = layout.ancilla[flat(c)];
            }
        }
        Sequence {
            gates: out,
            next_layout: next,
        }
    }
}

/// Expected net single-qubit gates added per X-check by full CNOT reversal.
pub const EXTRA_H_FULL: usize = 6;
/// Expected net single-qubit gates added per X-check when only the first two
/// X-check CNOTs are reversed.
pub const EXTRA_H_OPTIMIZED: usize = 4;

struct Sequence {
    gates: Vec<GateOp>,
    next_layout: Layout,
}

/// Removes `H` gates that are immediately followed by another `H` on the
/// same qubit (with nothing in between on that qubit).
fn cancel_hadamard_pairs(gates: Vec<GateOp>) -> Vec<GateOp> {
    let n = gates
        .iter()
        .flat_map(|g| g.targets().to_vec())
        .max()
        .map_or(0, |m| m + 1);
    let mut alive = vec![true; gates.len()];
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, g) in gates.iter().enumerate() {
        if g.kind == GateKind::H {
            let q = g.qubits[0];
            if let Some(&top) = stacks[q].last() {
                if gates[top].kind == GateKind::H {
                    alive[top] = false;
                    alive[i] = false;
                    stacks[q].pop();
                    continue;
                }
            }
        }
        for &q in g.targets() {
            stacks[q].push(i);
        }
    }
    gates
        .into_iter()
        .zip(alive)
        .filter_map(|(g, keep)| keep.then_some(g))
        .collect()
}

/// Earliest-step placement, except that check CNOTs of one ordinal share a
/// layer, which starts after every preparation and basis change. Returns the
/// number of steps used.
fn assign_steps(gates: &mut [GateOp], num_physical: usize) -> usize {
    let mut free_at = vec![0usize; num_physical];
    let mut steps = 0;
    // Last step used by the setup gates, then by each CNOT ordinal.
    let mut layer_end = [0usize; 5];
    let mut layer_floor = [usize::MAX; 5];
    for g in gates.iter_mut() {
        let asap = g.targets().iter().map(|&q| free_at[q]).max().unwrap_or(0);
        let step = if g.label.tag == GateTag::CheckCnot {
            let k = g.label.cnot_ordinal as usize;
            if layer_floor[k] == usize::MAX {
                layer_floor[k] = layer_end[k - 1] + 1;
            }
            asap.max(layer_floor[k])
        } else {
            asap
        };
        match g.label.tag {
            GateTag::AncillaPrep | GateTag::SparePrep | GateTag::BasisIn => {
                layer_end[0] = layer_end[0].max(step)
            }
            GateTag::CheckCnot => {
                let k = g.label.cnot_ordinal as usize;
                layer_end[k] = layer_end[k].max(step);
            }
            _ => {}
        }
        g.step = step;
        for &q in g.targets() {
            free_at[q] = step + 1;
        }
        steps = steps.max(step + 1);
    }
    steps
}

pub fn build_standard(lattice: &ToricLattice, rounds: usize) -> Result<CircuitProgram> {
    CircuitBuilder::new(lattice.clone())
        .rounds(rounds)
        .standard()
}

pub fn build_swap_lrc(
    lattice: &ToricLattice,
    rounds: usize,
    period: usize,
) -> Result<CircuitProgram> {
    CircuitBuilder::new(lattice.clone())
        .rounds(rounds)
        .swap_lrc(period)
}

pub fn build_gate_biased(
    lattice: &ToricLattice,
    rounds: usize,
    optimized: bool,
) -> Result<CircuitProgram> {
    CircuitBuilder::new(lattice.clone())
        .rounds(rounds)
        .gate_biased(optimized)
}

pub fn build_mixed_lrc(lattice: &ToricLattice, rounds: usize) -> Result<CircuitProgram> {
    CircuitBuilder::new(lattice.clone())
        .rounds(rounds)
        .mixed_lrc()
}

/// Builds `variant` on a fresh lattice of distance `d`, adding spares when
/// the variant needs them.
pub fn build_variant(variant: Variant, d: usize, rounds: usize) -> Result<CircuitProgram> {
    let lattice = ToricLattice::new(d, variant.needs_spares())?;
    CircuitBuilder::new(lattice).rounds(rounds).build(variant)
}

//! Exhaustive single- and double-fault injection.
//!
//! A fault universe lists every location where the policy allows a Pauli or
//! leakage fault. Leakage faults trigger further random draws (partner
//! depolarization, leaked readouts); a spec fails if any assignment of those
//! draws leads to a logical failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitProgram, FaultLocation, GateKind, GateTag, Role, Variant};
use crate::decoder::decode_record;
use crate::error::{Error, Result};
use crate::lattice::{CheckKind, EdgeOrientation, ToricLattice};
use crate::noise::{NoiseModel, SidePolicy, SiteFilter};
use crate::pauli::{Pauli, PauliFrame};
use crate::rng::{DrawSource, Prob, RandomStream};
use crate::sim::{run_shot, CompiledCircuit, FaultKind, Injection, SyndromeRecord};

pub const SCAN_FORMAT_VERSION: u32 = 1;

/// Which faults the universe contains and how downstream draws are covered.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanPolicy {
    pub side_policy: SidePolicy,
    pub site_filter: SiteFilter,
    /// Preparations admitted by the site filter may leak.
    pub init_leakage: bool,
    pub pauli_faults: bool,
    pub onset_depolarizes_partner: bool,
    /// Largest assignment space enumerated exactly.
    pub exact_limit: u64,
    /// Assignments drawn when a space exceeds `exact_limit`; `None` turns
    /// such a spec into an error.
    pub samples: Option<u64>,
    pub sample_seed: u64,
    /// Largest number of pairs examined with `max_faults = 2`.
    pub pair_limit: u64,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        ScanPolicy {
            side_policy: SidePolicy::TwoSided,
            site_filter: SiteFilter::All,
            init_leakage: false,
            pauli_faults: true,
            onset_depolarizes_partner: false,
            exact_limit: 1 << 16,
            samples: Some(4096),
            sample_seed: 0,
            pair_limit: 2_000_000,
        }
    }
}

impl ScanPolicy {
    /// The leakage setting each circuit was designed for: one-sided leakage
    /// for the gate-biased circuits, initialization leakage where the circuit
    /// either has no protection at all or claims to handle it.
    pub fn for_variant(variant: Variant) -> Self {
        let mut p = ScanPolicy::default();
        match variant {
            Variant::Standard | Variant::MixedLrc => p.init_leakage = true,
            Variant::SwapLrc | Variant::SwapAlt => {}
            Variant::GateBiased | Variant::GateBiasedOpt => p.side_policy = SidePolicy::ControlOnly,
        }
        p
    }

    pub fn from_noise(noise: &NoiseModel) -> Self {
        ScanPolicy {
            side_policy: noise.side_policy,
            site_filter: noise.site_filter,
            init_leakage: noise.p_init_leak > 0.0,
            onset_depolarizes_partner: noise.onset_depolarizes_partner,
            ..ScanPolicy::default()
        }
    }

    fn noise(&self) -> NoiseModel {
        NoiseModel {
            p: 0.0,
            r: 0.0,
            side_policy: self.side_policy,
            site_filter: self.site_filter,
            meas_flip: Some(0.0),
            onset_depolarizes_partner: self.onset_depolarizes_partner,
            ..NoiseModel::default()
        }
    }
}

/// How the draws after a leakage fault are covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Exact { assignments: u64 },
    Sampled { assignments: u64, of: u128 },
}

impl Coverage {
    pub fn assignments(self) -> u64 {
        match self {
            Coverage::Exact { assignments } | Coverage::Sampled { assignments, .. } => assignments,
        }
    }

    pub fn is_sampled(self) -> bool {
        matches!(self, Coverage::Sampled { .. })
    }
}

/// One fault at one location.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultSpec {
    /// Global gate id.
    pub gate: usize,
    pub location: FaultLocation,
    pub fault: FaultKind,
    /// Role of the leaked qubit right after the fault.
    pub victim: Option<Role>,
    /// Partner depolarizations (`{I,X,Y,Z}` each) the fault triggers.
    pub depolarizing_draws: u32,
    /// Leaked measurement outcomes the fault triggers.
    pub measurement_draws: u32,
    pub coverage: Coverage,
}

impl FaultSpec {
    pub fn injection(&self) -> Injection {
        Injection {
            gate: self.gate,
            kind: self.fault,
        }
    }

    pub fn is_leak(&self) -> bool {
        matches!(self.fault, FaultKind::Leak { .. })
    }

    /// Role used to group failures: the leaked qubit, else the first operand.
    pub fn role(&self) -> Role {
        self.victim.unwrap_or(self.location.roles[0])
    }

    /// Assignment number `index` of an exact enumeration.
    pub fn assignment(&self, index: u64) -> Assignment {
        let mut k = index;
        let paulis = (0..self.depolarizing_draws)
            .map(|_| {
                let p = Pauli::from_index((k & 3) as usize);
                k >>= 2;
                p
            })
            .collect();
        let bits = (0..self.measurement_draws)
            .map(|_| {
                let b = k & 1 == 1;
                k >>= 1;
                b
            })
            .collect();
        Assignment { paulis, bits }
    }

    fn sampled_assignment(&self, seed: u64, spec_index: usize, k: u64) -> Assignment {
        let mut s = RandomStream::new(seed, ((spec_index as u64) << 32) | k);
        Assignment {
            paulis: (0..self.depolarizing_draws)
                .map(|_| s.leak_depolarize())
                .collect(),
            bits: (0..self.measurement_draws)
                .map(|_| s.leaked_outcome())
                .collect(),
        }
    }
}

/// Explicit outcome of every draw downstream of a fault, in draw order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub paulis: Vec<Pauli>,
    pub bits: Vec<bool>,
}

impl Assignment {
    /// `XIYZ|01` style text.
    pub fn compact(&self) -> String {
        let mut s = String::with_capacity(self.paulis.len() + self.bits.len() + 1);
        for p in &self.paulis {
            let _ = write!(s, "{p}");
        }
        s.push('|');
        for &b in &self.bits {
            s.push(if b { '1' } else { '0' });
        }
        s
    }
}

/// Replays an [`Assignment`]; every noise event is off.
#[derive(Clone, Debug)]
pub struct ScriptedDraws<'a> {
    assignment: &'a Assignment,
    next_pauli: usize,
    next_bit: usize,
}

impl<'a> ScriptedDraws<'a> {
    pub fn new(assignment: &'a Assignment) -> Self {
        ScriptedDraws {
            assignment,
            next_pauli: 0,
            next_bit: 0,
        }
    }

    pub fn exhausted(&self) -> bool {
        self.next_pauli == self.assignment.paulis.len()
            && self.next_bit == self.assignment.bits.len()
    }
}

impl DrawSource for ScriptedDraws<'_> {
    fn event(&mut self, _p: Prob) -> bool {
        false
    }
    fn choose(&mut self, _n: usize) -> usize {
        0
    }
    fn leak_depolarize(&mut self) -> Pauli {
        let p = self.assignment.paulis[self.next_pauli];
        self.next_pauli += 1;
        p
    }
    fn leaked_outcome(&mut self) -> bool {
        let b = self.assignment.bits[self.next_bit];
        self.next_bit += 1;
        b
    }
}

#[derive(Default)]
struct CountingDraws {
    paulis: u32,
    bits: u32,
}

impl DrawSource for CountingDraws {
    fn event(&mut self, _p: Prob) -> bool {
        false
    }
    fn choose(&mut self, _n: usize) -> usize {
        0
    }
    fn leak_depolarize(&mut self) -> Pauli {
        self.paulis += 1;
        Pauli::I
    }
    fn leaked_outcome(&mut self) -> bool {
        self.bits += 1;
        false
    }
}

/// A program with every noise rate off and the policy's leakage sites.
pub fn scan_circuit(program: &CircuitProgram, policy: &ScanPolicy) -> Result<CompiledCircuit> {
    CompiledCircuit::new(program, &policy.noise())
}

fn victim_role(loc: &FaultLocation, kind: GateKind, slot: usize) -> Role {
    if kind == GateKind::Swap {
        loc.roles[1 - slot]
    } else {
        loc.roles[slot]
    }
}

pub fn enumerate_fault_universe(
    circuit: &CompiledCircuit,
    policy: &ScanPolicy,
) -> Result<Vec<FaultSpec>> {
    let mut out = Vec::new();
    for gate in 0..circuit.num_gates() {
        let g = circuit.gate(gate);
        let location = g.label;
        let mut push = |fault: FaultKind, victim: Option<Role>| -> Result<()> {
            let (depolarizing_draws, measurement_draws) = if victim.is_some() {
                let mut counter = CountingDraws::default();
                run_shot(circuit, &mut counter, &[Injection { gate, kind: fault }]);
                (counter.paulis, counter.bits)
            } else {
                (0, 0)
            };
            let space = 4u128
                .checked_pow(depolarizing_draws)
                .and_then(|v| v.checked_mul(1u128 << measurement_draws.min(127)))
                .unwrap_or(u128::MAX);
            let coverage = if space <= policy.exact_limit as u128 {
                Coverage::Exact {
                    assignments: space as u64,
                }
            } else {
                match policy.samples {
                    Some(n) => Coverage::Sampled {
                        assignments: n,
                        of: space,
                    },
                    None => {
                        return Err(Error::CombinatorialBound {
                            needed: space,
                            bound: policy.exact_limit as u128,
                        })
                    }
                }
            };
            out.push(FaultSpec {
                gate,
                location,
                fault,
                victim,
                depolarizing_draws,
                measurement_draws,
                coverage,
            });
            Ok(())
        };
        if policy.pauli_faults {
            match g.kind {
                GateKind::PrepZ | GateKind::PrepX => push(FaultKind::PrepFlip, None)?,
                GateKind::MeasZ | GateKind::MeasX => push(FaultKind::MeasFlip, None)?,
                GateKind::H | GateKind::Idle => {
                    for k in 1..4 {
                        push(FaultKind::Pauli([Pauli::from_index(k), Pauli::I]), None)?;
                    }
                }
                GateKind::Cnot | GateKind::Swap => {
                    for k in 1..16 {
                        push(
                            FaultKind::Pauli([Pauli::from_index(k >> 2), Pauli::from_index(k & 3)]),
                            None,
                        )?;
                    }
                }
            }
        }
        if g.kind.is_prep() && policy.init_leakage && circuit.admits_init_leak(gate) {
            push(FaultKind::Leak { slot: 0 }, Some(location.roles[0]))?;
        }
        let slots = circuit.leak_slots(gate);
        for slot in 0..2 {
            if slots >> slot & 1 == 1 {
                push(
                    FaultKind::Leak { slot: slot as u8 },
                    Some(victim_role(&location, g.kind, slot)),
                )?;
            }
        }
    }
    Ok(out)
}

/// Failure-relevant outcome of one run.
fn evaluate(
    circuit: &CompiledCircuit,
    injections: &[Injection],
    assignment: &Assignment,
) -> Result<SyndromeRecord> {
    let mut draws = ScriptedDraws::new(assignment);
    let res = run_shot(circuit, &mut draws, injections);
    debug_assert!(draws.exhausted());
    Ok(res.record)
}

fn fails(circuit: &CompiledCircuit, record: &SyndromeRecord) -> Result<bool> {
    let lattice = &circuit.program().lattice;
    Ok(decode_record(record, lattice, &lattice.logicals())?.failed())
}

/// First failing assignment of `spec` in enumeration order, if any.
pub fn worst_case(
    circuit: &CompiledCircuit,
    spec: &FaultSpec,
    spec_index: usize,
    policy: &ScanPolicy,
) -> Result<Option<Assignment>> {
    let inj = [spec.injection()];
    for k in 0..spec.coverage.assignments() {
        let a = match spec.coverage {
            Coverage::Exact { .. } => spec.assignment(k),
            Coverage::Sampled { .. } => spec.sampled_assignment(policy.sample_seed, spec_index, k),
        };
        if fails(circuit, &evaluate(circuit, &inj, &a)?)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingSpec {
    /// Index in the fault universe.
    pub index: usize,
    pub gate: usize,
    pub round: usize,
    pub gate_kind: GateKind,
    pub tag: GateTag,
    pub cnot_ordinal: u8,
    pub check: Option<String>,
    pub role: Role,
    pub fault: String,
    pub assignment: String,
    pub sampled: bool,
}

/// Failures sharing `(fault class, gate kind, tag, cnot ordinal, role)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureGroup {
    pub fault: String,
    pub gate_kind: GateKind,
    pub tag: GateTag,
    pub cnot_ordinal: u8,
    pub role: Role,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanVerdict {
    pub format_version: u32,
    pub variant: Variant,
    pub d: usize,
    pub rounds: usize,
    pub max_faults: u8,
    pub policy: ScanPolicy,
    pub universe_size: usize,
    pub leak_specs: usize,
    pub sampled_specs: usize,
    pub assignments_examined: u64,
    pub failing_specs: Vec<FailingSpec>,
    pub groups: Vec<FailureGroup>,
    pub pairs_examined: u64,
    pub failing_pairs: u64,
    /// Up to [`PAIR_EXAMPLES`] failing pairs, as universe indices.
    pub failing_pair_examples: Vec<[usize; 2]>,
    /// No single fault fails. Certifies full distance at `d = 3`.
    pub distance_preserving: bool,
}

pub const PAIR_EXAMPLES: usize = 64;

fn fault_class(f: FaultKind) -> &'static str {
    match f {
        FaultKind::Pauli(_) => "pauli",
        FaultKind::Leak { .. } => "leak",
        FaultKind::PrepFlip => "prep_flip",
        FaultKind::MeasFlip => "meas_flip",
    }
}

fn fault_text(f: FaultKind) -> String {
    match f {
        FaultKind::Pauli([a, b]) => format!("pauli({a}{b})"),
        FaultKind::Leak { slot } => format!("leak({slot})"),
        other => fault_class(other).to_string(),
    }
}

/// Runs every spec of `universe` (and every pair of Pauli-type specs when
/// `max_faults == 2`) on the current rayon pool.
pub fn scan(
    circuit: &CompiledCircuit,
    universe: &[FaultSpec],
    policy: &ScanPolicy,
    max_faults: u8,
) -> Result<ScanVerdict> {
    if !(1..=2).contains(&max_faults) {
        return Err(Error::config(
            "max_faults",
            format!("{max_faults} not in 1..=2"),
        ));
    }
    let program = circuit.program();
    let results: Vec<Option<Assignment>> = universe
        .par_iter()
        .enumerate()
        .map(|(i, spec)| worst_case(circuit, spec, i, policy))
        .collect::<Result<_>>()?;
    let assignments_examined = universe.iter().map(|s| s.coverage.assignments()).sum();

    let mut failing_specs = Vec::new();
    let mut groups: BTreeMap<(String, String, String, u8, Role), FailureGroup> = BTreeMap::new();
    for (index, (spec, res)) in universe.iter().zip(&results).enumerate() {
        let Some(a) = res else { continue };
        let loc = &spec.location;
        let role = spec.role();
        failing_specs.push(FailingSpec {
            index,
            gate: spec.gate,
            round: loc.round,
            gate_kind: loc.kind,
            tag: loc.tag,
            cnot_ordinal: loc.cnot_ordinal,
            check: loc.check.map(|c| format!("{:?}{}", c.kind, c.index)),
            role,
            fault: fault_text(spec.fault),
            assignment: a.compact(),
            sampled: spec.coverage.is_sampled(),
        });
        let class = fault_class(spec.fault);
        groups
            .entry((
                class.to_string(),
                format!("{:?}", loc.kind),
                format!("{:?}", loc.tag),
                loc.cnot_ordinal,
                role,
            ))
            .or_insert_with(|| FailureGroup {
                fault: class.to_string(),
                gate_kind: loc.kind,
                tag: loc.tag,
                cnot_ordinal: loc.cnot_ordinal,
                role,
                count: 0,
            })
            .count += 1;
    }
    let distance_preserving = failing_specs.is_empty();

    let (pairs_examined, failing_pairs, failing_pair_examples) = if max_faults == 2 {
        scan_pairs(circuit, universe, policy)?
    } else {
        (0, 0, Vec::new())
    };
    debug!(
        "{} d={}: {} specs, {} failing",
        program.variant,
        program.distance(),
        universe.len(),
        failing_specs.len()
    );
    Ok(ScanVerdict {
        format_version: SCAN_FORMAT_VERSION,
        variant: program.variant,
        d: program.distance(),
        rounds: program.num_rounds(),
        max_faults,
        policy: *policy,
        universe_size: universe.len(),
        leak_specs: universe.iter().filter(|s| s.is_leak()).count(),
        sampled_specs: universe.iter().filter(|s| s.coverage.is_sampled()).count(),
        assignments_examined,
        failing_specs,
        groups: groups.into_values().collect(),
        pairs_examined,
        failing_pairs,
        failing_pair_examples,
        distance_preserving,
    })
}

/// Pairs of draw-free specs. Their records are linear in the faults, so a
/// pair's record is the XOR of the two single records.
fn scan_pairs(
    circuit: &CompiledCircuit,
    universe: &[FaultSpec],
    policy: &ScanPolicy,
) -> Result<(u64, u64, Vec<[usize; 2]>)> {
    let linear: Vec<usize> = (0..universe.len())
        .filter(|&i| !universe[i].is_leak())
        .collect();
    let n = linear.len() as u128;
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > policy.pair_limit as u128 {
        return Err(Error::CombinatorialBound {
            needed: pairs,
            bound: policy.pair_limit as u128,
        });
    }
    let none = Assignment::default();
    let records: Vec<SyndromeRecord> = linear
        .par_iter()
        .map(|&i| evaluate(circuit, &[universe[i].injection()], &none))
        .collect::<Result<_>>()?;
    let per_first: Vec<(u64, Vec<[usize; 2]>)> = (0..linear.len())
        .into_par_iter()
        .map(|a| {
            let mut count = 0;
            let mut examples = Vec::new();
            for b in a + 1..linear.len() {
                let mut rec = records[a].clone();
                rec.measured.xor_assign(&records[b].measured);
                rec.final_syndrome.xor_assign(&records[b].final_syndrome);
                rec.data_frame.compose(&records[b].data_frame);
                if fails(circuit, &rec)? {
                    count += 1;
                    if examples.len() < PAIR_EXAMPLES {
                        examples.push([linear[a], linear[b]]);
                    }
                }
            }
            Ok((count, examples))
        })
        .collect::<Result<_>>()?;
    let mut failing = 0;
    let mut examples = Vec::new();
    for (c, ex) in per_first {
        failing += c;
        for e in ex {
            if examples.len() < PAIR_EXAMPLES {
                examples.push(e);
            }
        }
    }
    Ok((pairs as u64, failing, examples))
}

/// Minimum weight of one Pauli type modulo the stabilizers of that type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedWeight {
    pub raw: usize,
    pub reduced: usize,
    /// Some minimum-weight representative of weight at least 2 lies along a
    /// single line parallel to a logical operator.
    pub aligned: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualWeight {
    /// X component of the data error, reduced by the X-type stabilizers.
    pub x: ReducedWeight,
    pub z: ReducedWeight,
    /// Found by local descent instead of exhaustive search.
    pub approximate: bool,
}

impl ResidualWeight {
    pub fn total(&self) -> usize {
        self.x.reduced + self.z.reduced
    }
}

/// Largest distance with an exhaustive coset search.
pub const EXACT_COSET_MAX_D: usize = 5;

fn aligned(lattice: &ToricLattice, kind: CheckKind, edges: &[usize]) -> bool {
    if edges.len() < 2 {
        return false;
    }
    let coords: Vec<_> = edges.iter().map(|&e| lattice.data_coords(e)).collect();
    let (r0, c0, o0) = coords[0];
    coords.iter().all(|&(r, c, o)| {
        o == o0
            && match (kind, o) {
                // X strings along rows of horizontal edges or columns of vertical ones.
                (CheckKind::X, EdgeOrientation::Horizontal)
                | (CheckKind::Z, EdgeOrientation::Vertical) => r == r0,
                _ => c == c0,
            }
    })
}

/// Reduced weights of a data error given per data site.
pub fn reduce(lattice: &ToricLattice, data: &PauliFrame) -> ResidualWeight {
    let n = lattice.num_data();
    let exact = lattice.distance() <= EXACT_COSET_MAX_D;
    let mut out = [ReducedWeight {
        raw: 0,
        reduced: 0,
        aligned: false,
    }; 2];
    for (slot, kind) in [CheckKind::X, CheckKind::Z].into_iter().enumerate() {
        let bits: Vec<bool> = (0..n)
            .map(|e| {
                let p = data.get(e);
                if kind == CheckKind::X {
                    p.x
                } else {
                    p.z
                }
            })
            .collect();
        let gens: Vec<Vec<usize>> = lattice
            .checks()
            .filter(|c| c.kind == kind)
            .map(|c| lattice.support(c).to_vec())
            .collect();
        out[slot] = if exact {
            exact_reduce(lattice, kind, &bits, &gens)
        } else {
            descend(lattice, kind, &bits, &gens)
        };
    }
    ResidualWeight {
        x: out[0],
        z: out[1],
        approximate: !exact,
    }
}

fn edges_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&e| mask >> e & 1 == 1).collect()
}

fn exact_reduce(
    lattice: &ToricLattice,
    kind: CheckKind,
    bits: &[bool],
    gens: &[Vec<usize>],
) -> ReducedWeight {
    let to_mask = |edges: &[usize]| edges.iter().fold(0u64, |m, &e| m ^ (1 << e));
    let start = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0u64, |m, (e, _)| m | 1 << e);
    // The product of all generators is the identity, so one can be dropped.
    let masks: Vec<u64> = gens[..gens.len() - 1].iter().map(|g| to_mask(g)).collect();
    let raw = start.count_ones() as usize;
    let mut best = raw;
    let mut reps = vec![start];
    let mut cur = start;
    // Gray-code walk over all stabilizer products.
    for i in 1u64..1 << masks.len() {
        cur ^= masks[i.trailing_zeros() as usize];
        let w = cur.count_ones() as usize;
        if w < best {
            best = w;
            reps.clear();
            reps.push(cur);
        } else if w == best && reps.len() < 64 {
            reps.push(cur);
        }
    }
    ReducedWeight {
        raw,
        reduced: best,
        aligned: reps.iter().any(|&m| aligned(lattice, kind, &edges_of(m))),
    }
}

fn descend(
    lattice: &ToricLattice,
    kind: CheckKind,
    bits: &[bool],
    gens: &[Vec<usize>],
) -> ReducedWeight {
    let mut cur = bits.to_vec();
    let raw = cur.iter().filter(|&&b| b).count();
    loop {
        let mut improved = false;
        for g in gens {
            let delta: isize = g.iter().map(|&e| if cur[e] { -1 } else { 1 }).sum();
            if delta < 0 {
                for &e in g {
                    cur[e] = !cur[e];
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let edges: Vec<usize> = (0..cur.len()).filter(|&e| cur[e]).collect();
    ReducedWeight {
        raw,
        reduced: edges.len(),
        aligned: aligned(lattice, kind, &edges),
    }
}

/// Data error left by `spec` under `assignment` with all other noise off,
/// reduced modulo the stabilizers.
pub fn residual_weight(
    circuit: &CompiledCircuit,
    spec: Option<&FaultSpec>,
    assignment: &Assignment,
) -> Result<ResidualWeight> {
    let injections: Vec<Injection> = spec.map(FaultSpec::injection).into_iter().collect();
    let record = evaluate(circuit, &injections, assignment)?;
    Ok(reduce(&circuit.program().lattice, &record.data_frame))
}

/// Builds, enumerates and scans in one call.
pub fn scan_program(
    program: &CircuitProgram,
    policy: &ScanPolicy,
    max_faults: u8,
) -> Result<ScanVerdict> {
    let circuit = scan_circuit(program, policy)?;
    let universe = enumerate_fault_universe(&circuit, policy)?;
    scan(&circuit, &universe, policy, max_faults)
}

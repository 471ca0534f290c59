//! Parallel Monte Carlo over a configured grid.
//!
//! Shots are grouped in fixed-size batches and batches in fixed-size waves.
//! Workers only decide who computes a batch, never which batches count, so
//! results are identical for any worker count.

use std::io::{Read, Write};

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_variant, Variant};
use crate::decoder::decode_record;
use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::stats::wilson95;
use crate::noise::{NoiseModel, SidePolicy, SiteFilter};
use crate::rng::RandomStream;
use crate::sim::{run_shot, CompiledCircuit};

pub const BATCH_SHOTS: u64 = 256;
pub const WAVE_BATCHES: u64 = 16;

/// One line of the result table. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub variant: Variant,
    pub d: usize,
    pub rounds: usize,
    pub p: f64,
    pub r: f64,
    pub side_policy: SidePolicy,
    pub site_filter: SiteFilter,
    pub p_init_leak: f64,
    pub shots: u64,
    pub failures: u64,
    pub p_logical: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
}

pub const CSV_COLUMNS: [&str; 14] = [
    "variant",
    "d",
    "rounds",
    "p",
    "r",
    "side_policy",
    "site_filter",
    "p_init_leak",
    "shots",
    "failures",
    "p_logical",
    "ci_low",
    "ci_high",
    "master_seed",
];

/// Failures per logical (`X1, X2, Z1, Z2`) for one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalBreakdown {
    pub variant: Variant,
    pub d: usize,
    pub p: f64,
    pub shots: u64,
    pub fail_x1: u64,
    pub fail_x2: u64,
    pub fail_z1: u64,
    pub fail_z2: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub row: ResultRow,
    pub breakdown: LogicalBreakdown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    shots: u64,
    failures: u64,
    per_logical: [u64; 4],
}

impl Tally {
    fn add(&mut self, o: &Tally) {
        self.shots += o.shots;
        self.failures += o.failures;
        for (a, b) in self.per_logical.iter_mut().zip(o.per_logical) {
            *a += b;
        }
    }
}

/// What one point needs besides the circuit.
#[derive(Clone, Copy, Debug)]
pub struct PointSpec {
    pub master_seed: u64,
    /// Distinguishes the shot streams of different points of one sweep.
    pub stream_base: u64,
    pub shots: u64,
    pub target_failures: Option<u64>,
}

fn run_batch(circuit: &CompiledCircuit, spec: &PointSpec, batch: u64) -> Result<Tally> {
    let program = circuit.program();
    let logicals = program.lattice.logicals();
    let first = batch * BATCH_SHOTS;
    let last = (first + BATCH_SHOTS).min(spec.shots);
    let mut t = Tally::default();
    for shot in first..last {
        let mut stream = RandomStream::new(spec.master_seed, spec.stream_base + shot);
        let res = run_shot(circuit, &mut stream, &[]);
        let j = decode_record(&res.record, &program.lattice, &logicals)?;
        t.shots += 1;
        if j.failed() {
            t.failures += 1;
        }
        for (c, f) in t.per_logical.iter_mut().zip(j.flips) {
            *c += f as u64;
        }
    }
    Ok(t)
}

fn run_point_tally(circuit: &CompiledCircuit, spec: &PointSpec) -> Result<Tally> {
    let num_batches = spec.shots.div_ceil(BATCH_SHOTS);
    let mut total = Tally::default();
    let mut next = 0;
    while next < num_batches {
        let wave_end = (next + WAVE_BATCHES).min(num_batches);
        let tallies: Vec<Tally> = (next..wave_end)
            .into_par_iter()
            .map(|b| run_batch(circuit, spec, b))
            .collect::<Result<_>>()?;
        for t in &tallies {
            total.add(t);
            if spec
                .target_failures
                .is_some_and(|target| total.failures >= target)
            {
                return Ok(total);
            }
        }
        next = wave_end;
    }
    Ok(total)
}

/// Simulates one point. Runs on the current rayon pool.
pub fn run_point(circuit: &CompiledCircuit, spec: &PointSpec) -> Result<PointResult> {
    let tally = run_point_tally(circuit, spec)?;
    let program = circuit.program();
    let noise = circuit.noise();
    let (ci_low, ci_high) = wilson95(tally.failures, tally.shots);
    let row = ResultRow {
        variant: program.variant,
        d: program.distance(),
        rounds: program.num_rounds(),
        p: noise.p,
        r: noise.r,
        side_policy: noise.side_policy,
        site_filter: noise.site_filter,
        p_init_leak: noise.p_init_leak,
        shots: tally.shots,
        failures: tally.failures,
        p_logical: tally.failures as f64 / tally.shots as f64,
        ci_low,
        ci_high,
        master_seed: spec.master_seed,
    };
    let [fail_x1, fail_x2, fail_z1, fail_z2] = tally.per_logical;
    Ok(PointResult {
        breakdown: LogicalBreakdown {
            variant: row.variant,
            d: row.d,
            p: row.p,
            shots: row.shots,
            fail_x1,
            fail_x2,
            fail_z1,
            fail_z2,
        },
        row,
    })
}

/// Stream offset of point `(d_index, p_index)`: 2^40 shots per point.
pub fn stream_base(d_index: usize, p_index: usize) -> u64 {
    ((d_index as u64) << 56) | ((p_index as u64) << 40)
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<PointResult>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    let mut out = Vec::new();
    for (di, &d) in config.d.iter().enumerate() {
        let program = build_variant(config.variant, d, config.rounds_for(d))?;
        for (pi, &p) in config.p.iter().enumerate() {
            let noise: NoiseModel = config.noise_at(p);
            let circuit = CompiledCircuit::new(&program, &noise)?;
            let spec = PointSpec {
                master_seed: config.master_seed,
                stream_base: stream_base(di, pi),
                shots: config.shots,
                target_failures: config.target_failures,
            };
            debug!("{} d={d} p={p}: starting", config.variant);
            let point = pool.install(|| run_point(&circuit, &spec))?;
            info!(
                "{} d={d} p={p}: {}/{} failures",
                config.variant, point.row.failures, point.row.shots
            );
            out.push(point);
        }
    }
    Ok(out)
}

pub fn write_rows<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::config(
            "table",
            format!(
                "unexpected CSV header {:?}",
                headers.iter().collect::<Vec<_>>()
            ),
        ));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_breakdown<W: Write>(rows: &[LogicalBreakdown], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use leaksim_core::circuit::{build_variant, GateTag, Role};
use leaksim_core::decoder::{defect_distance, match_defects};
use leaksim_core::harness::compare::compare_variants;
use leaksim_core::harness::config::InitLeak;
use leaksim_core::harness::{fit_exponent, run_sweep, ExperimentConfig, ResultRow};
use leaksim_core::noise::{SidePolicy, SiteFilter};
use leaksim_core::scan::{
    enumerate_fault_universe, residual_weight, scan_circuit, scan_program, Coverage, ScanPolicy,
    ScanVerdict,
};
use leaksim_core::{CheckKind, Variant};

const GRID: [f64; 4] = [1e-3, 2e-3, 3e-3, 5e-3];
const TARGET: u64 = 300;
const SHOT_CAP: u64 = 4_000_000;
/// Single-point comparisons need tighter intervals than slope fits.
const ORDERING_TARGET: u64 = 20_000;
const SEED: u64 = 20_240_501;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Setup {
    variant: Variant,
    side: SidePolicy,
    filter: SiteFilter,
    init: InitLeak,
}

fn setup(variant: Variant, side: SidePolicy, filter: SiteFilter) -> Setup {
    Setup {
        variant,
        side,
        filter,
        init: InitLeak::Off,
    }
}

/// Sweeps are shared between criteria.
#[derive(Default)]
struct Cache {
    sweeps: Vec<(Setup, usize, Vec<f64>, Vec<ResultRow>)>,
}

impl Cache {
    fn rows(&mut self, s: Setup, d: usize, p: &[f64], target: u64, cap: u64) -> Vec<ResultRow> {
        if let Some((.., rows)) = self
            .sweeps
            .iter()
            .find(|(k, kd, kp, _)| *k == s && *kd == d && kp == p)
        {
            return rows.clone();
        }
        let mut cfg = ExperimentConfig::new(s.variant, vec![d], p.to_vec(), cap, SEED);
        cfg.side_policy = s.side;
        cfg.site_filter = s.filter;
        cfg.p_init_leak = s.init;
        cfg.target_failures = Some(target);
        let rows: Vec<ResultRow> = run_sweep(&cfg)
            .unwrap()
            .into_iter()
            .map(|p| p.row)
            .collect();
        self.sweeps.push((s, d, p.to_vec(), rows.clone()));
        rows
    }

    fn slope(&mut self, s: Setup, d: usize, target: u64, cap: u64, range: (f64, f64)) -> Outcome {
        let rows = self.rows(s, d, &GRID, target, cap);
        let points: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2e}", r.p_logical))
            .collect();
        match fit_exponent(&rows, d, None) {
            Ok(f) => outcome(
                (range.0..=range.1).contains(&f.exponent),
                format!(
                    "slope {:.2} ± {:.2} over {} points, want [{}, {}]; P_L {}",
                    f.exponent,
                    f.exponent_se,
                    f.points_used,
                    range.0,
                    range.1,
                    points.join(" ")
                ),
            ),
            Err(e) => outcome(false, format!("{e}; P_L {}", points.join(" "))),
        }
    }
}

fn lower_disjoint(better: &ResultRow, worse: &ResultRow) -> Outcome {
    outcome(
        better.ci_high < worse.ci_low,
        format!(
            "{:.2e} [{:.2e}, {:.2e}] vs {:.2e} [{:.2e}, {:.2e}]",
            better.p_logical,
            better.ci_low,
            better.ci_high,
            worse.p_logical,
            worse.ci_low,
            worse.ci_high
        ),
    )
}

fn all(parts: Vec<(String, Outcome)>) -> Outcome {
    let pass = parts.iter().all(|(_, o)| o.pass);
    let detail = parts
        .into_iter()
        .map(|(name, o)| {
            format!(
                "{name}: {} {}",
                if o.pass { "ok" } else { "fail" },
                o.detail
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn c1(cache: &mut Cache) -> Outcome {
    let s = setup(
        Variant::Standard,
        SidePolicy::TwoSided,
        SiteFilter::AncillaOnly,
    );
    cache.slope(s, 3, TARGET, SHOT_CAP, (0.8, 1.3))
}

fn c2(cache: &mut Cache) -> Outcome {
    let s = setup(Variant::SwapLrc, SidePolicy::TwoSided, SiteFilter::DataOnly);
    all(vec![
        (
            "d=3".into(),
            cache.slope(s, 3, TARGET, SHOT_CAP, (1.7, 2.4)),
        ),
        ("d=5".into(), cache.slope(s, 5, 100, 1_000_000, (2.5, 3.6))),
    ])
}

fn c3(cache: &mut Cache) -> Outcome {
    let p = [2e-3];
    let lrc = cache.rows(
        setup(Variant::SwapLrc, SidePolicy::TwoSided, SiteFilter::DataOnly),
        3,
        &p,
        ORDERING_TARGET,
        SHOT_CAP,
    );
    let std = cache.rows(
        setup(
            Variant::Standard,
            SidePolicy::TwoSided,
            SiteFilter::AncillaOnly,
        ),
        3,
        &p,
        ORDERING_TARGET,
        SHOT_CAP,
    );
    lower_disjoint(&lrc[0], &std[0])
}

fn c4(cache: &mut Cache) -> Outcome {
    let p = [3e-3];
    let every = cache.rows(
        setup(Variant::SwapLrc, SidePolicy::TwoSided, SiteFilter::DataOnly),
        3,
        &p,
        ORDERING_TARGET,
        SHOT_CAP,
    );
    let alt = cache.rows(
        setup(Variant::SwapAlt, SidePolicy::TwoSided, SiteFilter::DataOnly),
        3,
        &p,
        ORDERING_TARGET,
        SHOT_CAP,
    );
    let c = compare_variants(&every, &alt).unwrap();
    let o = lower_disjoint(&every[0], &alt[0]);
    outcome(o.pass && c[0].significant, o.detail)
}

fn c5(cache: &mut Cache) -> Outcome {
    let parts = (1..=4u8)
        .map(|k| {
            let s = setup(
                Variant::SwapLrc,
                SidePolicy::TwoSided,
                SiteFilter::CnotOrdinal(k),
            );
            let range = if k == 1 { (0.8, 1.3) } else { (1.7, 2.4) };
            (
                format!("ordinal {k}"),
                cache.slope(s, 3, TARGET, SHOT_CAP, range),
            )
        })
        .collect();
    all(parts)
}

fn c6(cache: &mut Cache) -> Outcome {
    let mut parts = Vec::new();
    for (v, range) in [
        (Variant::GateBiased, (1.7, 2.4)),
        (Variant::GateBiasedOpt, (1.7, 2.4)),
        (Variant::Standard, (0.8, 1.3)),
    ] {
        let s = setup(v, SidePolicy::ControlOnly, SiteFilter::All);
        parts.push((v.to_string(), cache.slope(s, 3, TARGET, SHOT_CAP, range)));
    }
    for (v, want) in [(Variant::GateBiased, 12), (Variant::GateBiasedOpt, 4)] {
        let got = build_variant(v, 3, 1)
            .unwrap()
            .extra_single_qubit_gates_per_x_check;
        parts.push((
            format!("{v} extra gates"),
            outcome(got == want, format!("{got} per X-check, want {want}")),
        ));
    }
    all(parts)
}

fn c7(cache: &mut Cache) -> Outcome {
    let s = Setup {
        init: InitLeak::RTimesP,
        ..setup(Variant::MixedLrc, SidePolicy::TwoSided, SiteFilter::All)
    };
    cache.slope(s, 3, TARGET, SHOT_CAP, (1.7, 2.4))
}

fn scan_with(variant: Variant, policy: ScanPolicy) -> ScanVerdict {
    scan_program(&build_variant(variant, 3, 3).unwrap(), &policy, 1).unwrap()
}

fn c8() -> Outcome {
    let two_sided_init = ScanPolicy {
        init_leakage: true,
        ..ScanPolicy::default()
    };
    let standard = scan_with(Variant::Standard, two_sided_init);
    let stray: HashMap<String, usize> = standard
        .failing_specs
        .iter()
        .filter(|f| f.fault.starts_with("leak"))
        .filter(|f| {
            !(matches!(f.tag, GateTag::AncillaPrep | GateTag::BasisIn) || f.cnot_ordinal == 1)
        })
        .fold(HashMap::new(), |mut m, f| {
            *m.entry(format!("{:?}/{}/{:?}", f.tag, f.cnot_ordinal, f.role))
                .or_default() += 1;
            m
        });
    let mut stray: Vec<_> = stray.into_iter().collect();
    stray.sort();
    let a = outcome(
        !standard.failing_specs.is_empty() && stray.is_empty(),
        format!(
            "{} failing of {} specs, outside init/H/ordinal 1: {stray:?}",
            standard.failing_specs.len(),
            standard.universe_size
        ),
    );
    let control_only = ScanPolicy {
        side_policy: SidePolicy::ControlOnly,
        ..ScanPolicy::default()
    };
    let mut parts = vec![("(a) standard".to_string(), a)];
    for (v, policy) in [
        (Variant::MixedLrc, two_sided_init),
        (Variant::GateBiased, control_only),
        (Variant::GateBiasedOpt, control_only),
    ] {
        let verdict = scan_with(v, policy);
        let groups: Vec<String> = verdict
            .groups
            .iter()
            .map(|g| format!("{:?}/{}/{:?}x{}", g.tag, g.cnot_ordinal, g.role, g.count))
            .collect();
        parts.push((
            format!("(b) {v}"),
            outcome(
                verdict.failing_specs.is_empty(),
                format!(
                    "{} failing of {}: {}",
                    verdict.failing_specs.len(),
                    verdict.universe_size,
                    groups.join(" ")
                ),
            ),
        ));
    }
    all(parts)
}

fn c9() -> Outcome {
    let policy = ScanPolicy {
        init_leakage: true,
        ..ScanPolicy::default()
    };
    let program = build_variant(Variant::Standard, 3, 1).unwrap();
    let lattice = program.lattice.clone();
    let circuit = scan_circuit(&program, &policy).unwrap();
    let universe = enumerate_fault_universe(&circuit, &policy).unwrap();
    let faces: Vec<[usize; 4]> = lattice
        .checks()
        .filter(|c| c.kind == CheckKind::X)
        .map(|c| {
            let mut s = lattice.support(c);
            s.sort_unstable();
            s
        })
        .collect();
    for s in universe
        .iter()
        .filter(|s| s.is_leak() && s.victim == Some(Role::AncillaX))
    {
        let Coverage::Exact { assignments } = s.coverage else {
            continue;
        };
        for k in 0..assignments {
            let a = s.assignment(k);
            let w = residual_weight(&circuit, Some(s), &a).unwrap();
            if w.x.raw != 4 || w.z.reduced != 2 || !w.z.aligned {
                continue;
            }
            let inj = [s.injection()];
            let res = leaksim_core::sim::run_shot(
                &circuit,
                &mut leaksim_core::scan::ScriptedDraws::new(&a),
                &inj,
            );
            let mut xs: Vec<usize> = (0..lattice.num_data())
                .filter(|&e| res.record.data_frame.get(e).x)
                .collect();
            xs.sort_unstable();
            if faces.iter().any(|f| f[..] == xs[..]) {
                return outcome(
                    true,
                    format!(
                        "leak at {:?} ({:?}), draws {}: X on face {xs:?}, Z part weight {} aligned",
                        s.location.tag,
                        s.location.check.unwrap(),
                        a.compact(),
                        w.z.reduced
                    ),
                );
            }
        }
    }
    outcome(
        false,
        "no X-ancilla leak gives a four-qubit hook with an aligned weight-2 residual",
    )
}

fn c10() -> Outcome {
    let (cases, bad) = common::conjugation_mismatches();
    let sets = common::random_defect_sets(SEED, 1000);
    let mismatched = sets
        .iter()
        .filter(|(l, defects)| {
            let pairs = match_defects(l, defects).unwrap();
            let total: usize = pairs
                .iter()
                .map(|&(i, j)| defect_distance(l, defects[i], defects[j]))
                .sum();
            total != common::brute_force_matching(l, defects)
        })
        .count();
    outcome(
        bad.is_empty() && mismatched == 0,
        format!(
            "{} of {cases} conjugations differ; {mismatched} of {} matchings differ from brute force",
            bad.len(),
            sets.len()
        ),
    )
}

fn c11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let mut config = ExperimentConfig::new(Variant::SwapLrc, vec![3], vec![2e-3, 4e-3], 30_000, 77);
    config.site_filter = SiteFilter::CnotOrdinal(1);
    config.target_failures = Some(200);
    std::fs::write(&cfg, config.to_toml_string()).unwrap();
    let mut tables = Vec::new();
    for workers in ["1", "8"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_leaksim"))
            .args(["run", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .args(["--workers", workers])
            .status()
            .unwrap();
        if !status.success() {
            return outcome(false, format!("run with {workers} workers exited {status}"));
        }
        tables.push(std::fs::read(&out).unwrap());
    }
    outcome(
        tables[0] == tables[1] && !tables[0].is_empty(),
        format!(
            "{} bytes with 1 worker, {} with 8",
            tables[0].len(),
            tables[1].len()
        ),
    )
}

type Criterion = Box<dyn Fn(&mut Cache) -> Outcome>;

fn main() {
    let mut cache = Cache::default();
    let criteria: [(&str, Criterion); 11] = [
        ("ancilla leakage, standard circuit", Box::new(c1)),
        ("data leakage, swap LRC", Box::new(c2)),
        ("LRC beats standard at p=2e-3", Box::new(c3)),
        ("LRC every round beats every other round", Box::new(c4)),
        ("per-CNOT leakage isolation", Box::new(c5)),
        ("gate-biased circuits", Box::new(c6)),
        ("mixed LRC with initialization leakage", Box::new(c7)),
        ("single-fault scan certification", Box::new(|_| c8())),
        ("four-qubit hook", Box::new(|_| c9())),
        ("propagation and matching oracles", Box::new(|_| c10())),
        ("worker-count determinism", Box::new(|_| c11())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check(&mut cache);
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {}: {name} ({:.0}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

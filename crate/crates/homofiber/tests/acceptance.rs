//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p homofiber --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use homofiber::document::{load_custom, SpaceDocument};
use homofiber::{verify, RunConfig};
use homofiber_core::catalog::{self, NAMES};
use homofiber_core::oracle::{self, ResidualConfig};
use homofiber_core::{ClosedFormMotion, Tolerances};

const LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
const CHARGES: [f64; 3] = [0.0, 1.0, -0.5];
const PAIR_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn grid() -> Vec<f64> {
    homofiber_core::motion::sample_times(-2.0, 2.0, 25).unwrap()
}

fn config(space: &str, lambda: f64, k: f64, seed: u64) -> RunConfig {
    RunConfig {
        space: space.into(),
        lambda: vec![lambda],
        charge: Some(k),
        seed,
        ..Default::default()
    }
}

fn motion(cfg: &RunConfig) -> ClosedFormMotion {
    cfg.motion(&cfg.load_space().unwrap()).unwrap().0
}

/// Maxima over the hopf(1)/hopf(2) sweep used by criteria 1 to 5.
#[derive(Default)]
struct Sweep {
    configs: usize,
    evaluations: usize,
    residual: f64,
    algebraic: f64,
    module_invariance: f64,
    velocity_formula: f64,
    conservation: f64,
    collapse: f64,
    seconds: f64,
}

fn sweep() -> Sweep {
    let start = Instant::now();
    let times = grid();
    let cfg = ResidualConfig::new(1e-4, 1e-6).unwrap();
    let mut s = Sweep::default();
    for space in ["hopf1", "hopf2"] {
        for lambda in LAMBDAS {
            for k in CHARGES {
                for seed in PAIR_SEEDS {
                    let m = motion(&config(space, lambda, k, seed));
                    let probes = oracle::probe_basis(m.system());
                    let report = oracle::koszul_sweep(&m, &times, &probes, &cfg).unwrap();
                    s.configs += 1;
                    s.evaluations += report.entries.len();
                    s.residual = s.residual.max(report.max_abs_residual);
                    for &t in &times {
                        for z in &probes {
                            s.algebraic = s
                                .algebraic
                                .max(oracle::algebraic_identity_check(&m, t, z).unwrap());
                        }
                        s.module_invariance =
                            s.module_invariance.max(oracle::module_invariance(&m, t));
                        s.velocity_formula =
                            s.velocity_formula.max(oracle::velocity_formula_gap(&m, t));
                    }
                    s.conservation = s
                        .conservation
                        .max(oracle::conservation_sweep(&m, &times).max_deviation);
                    if lambda == 1.0 {
                        s.collapse = s
                            .collapse
                            .max(oracle::lambda_collapse_check(&m, &times).unwrap());
                    }
                }
            }
        }
    }
    s.seconds = start.elapsed().as_secs_f64();
    s
}

fn criterion_1(s: &Sweep) -> Outcome {
    outcome(
        s.residual <= 1e-6 && s.seconds <= 30.0,
        format!(
            "max |koszul residual| {:.3e} <= 1e-6 over {} configs / {} evaluations, {:.1} s <= 30 s",
            s.residual, s.configs, s.evaluations, s.seconds
        ),
    )
}

fn criterion_2(s: &Sweep) -> Outcome {
    outcome(
        s.algebraic <= 1e-11,
        format!("max algebraic identity gap {:.3e} <= 1e-11", s.algebraic),
    )
}

fn criterion_3(s: &Sweep) -> Outcome {
    outcome(
        s.module_invariance <= 1e-10 && s.velocity_formula <= 1e-11,
        format!(
            "module invariance {:.3e} <= 1e-10, velocity formula gap {:.3e} <= 1e-11",
            s.module_invariance, s.velocity_formula
        ),
    )
}

fn criterion_4(s: &Sweep) -> Outcome {
    outcome(
        s.conservation <= 1e-10,
        format!("max speed drift {:.3e} <= 1e-10", s.conservation),
    )
}

fn criterion_5(s: &Sweep) -> Outcome {
    outcome(
        s.collapse <= 1e-12,
        format!(
            "max lambda = 1 collapse distance {:.3e} <= 1e-12",
            s.collapse
        ),
    )
}

fn criterion_6a() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    for space in ["hopf1", "hopf2"] {
        for seed in PAIR_SEEDS {
            let m = motion(&config(space, 1.0, 0.0, seed));
            let r = oracle::great_circle_check(&m, &grid()).unwrap();
            worst = worst.max(r.max_planarity);
            worst_norm = worst_norm.max(r.max_norm_error);
        }
    }
    outcome(
        worst <= 1e-9 && worst_norm <= 1e-10,
        format!("great circles at lambda = 1, k = 0: planarity {worst:.3e} <= 1e-9, |x| error {worst_norm:.3e} <= 1e-10"),
    )
}

fn criterion_6b() -> Outcome {
    let entry = catalog::kahler_s2();
    let sys = entry.system(None, None, 1.0).unwrap();
    let model = entry.model().unwrap().clone();
    let xa = homofiber::random::unit_in(&mut homofiber::random::rng(1), sys.module_a());
    let r = oracle::magnetic_circle_check(
        &sys,
        &model,
        &xa,
        &verify::CIRCLE_CHARGES,
        &grid(),
        verify::CURVATURE_STEP,
    )
    .unwrap();
    outcome(
        r.max_spread <= 1e-6 && r.increasing,
        format!(
            "kahler-s2 curvature {:?} for k {:?}: spread {:.3e} <= 1e-6, increasing {}",
            r.curvature
                .iter()
                .map(|c| format!("{c:.6}"))
                .collect::<Vec<_>>(),
            r.charges,
            r.max_spread,
            r.increasing
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in NAMES {
        // With W = 0 and lambda = 1 every exp(tX) is a geodesic, so the Lie
        // group spaces are mutated at lambda = 2.
        let mut cfg = config(name, 2.0, 1.0, 1);
        let clean = verify::run(&cfg).unwrap().residuals.max_abs;
        cfg.perturb = Some(1e-2);
        let dirty = verify::run(&cfg).unwrap().residuals.max_abs;
        let factor = dirty / clean;
        ok &= factor > 100.0;
        parts.push(format!("{name} x{factor:.1e}"));
    }
    outcome(
        ok,
        format!("perturbed / clean max residual > 100: {}", parts.join(", ")),
    )
}

fn criterion_8() -> Outcome {
    let m = motion(&config("hopf1", 2.0, 1.0, 1));
    let probes = oracle::probe_basis(m.system());
    let at = |t: f64, h: f64| {
        let cfg = ResidualConfig::new(h, 1e-6).unwrap();
        oracle::koszul_sweep(&m, &[t], &probes, &cfg)
            .unwrap()
            .max_abs_residual
    };
    let ratios: Vec<f64> = [-1.5, -0.6, 0.3, 1.1, 1.8]
        .into_iter()
        .map(|t| at(t, 2e-4) / at(t, 1e-4))
        .collect();
    let ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    outcome(
        ok,
        format!(
            "residual ratio h = 2e-4 vs 1e-4 in [3.5, 4.5]: {:?}",
            ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for name in NAMES {
        let r = catalog::by_name(name).unwrap().validate().unwrap();
        ok &= r.all_passed();
        worst = worst.max(r.worst_residual());
    }
    let twistor = catalog::twistor_su3().split().module_dims();
    ok &= twistor == vec![4, 2];
    for n in 1..=3 {
        ok &= catalog::hopf(n).unwrap().split().module_dims() == vec![2 * n, 1];
    }
    ok &= worst <= 1e-12;
    outcome(
        ok,
        format!("{} entries validate, worst residual {worst:.3e} <= 1e-12, twistor dims {twistor:?}, hopf(n) dims (2n, 1)", NAMES.len()),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_homofiber");
    let run = |file: &str| {
        let path = dir.path().join(file);
        let status = Command::new(bin)
            .args([
                "verify",
                "--space",
                "twistor-su3",
                "--lambda",
                "2",
                "--k",
                "1",
                "--seed",
                "9",
                "--out",
            ])
            .arg(&path)
            .output()
            .unwrap()
            .status;
        assert_eq!(status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let identical = run("a.json") == run("b.json");
    let mut round_trip = true;
    for name in NAMES {
        let entry = catalog::by_name(name).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, SpaceDocument::from_entry(&entry).to_json()).unwrap();
        let loaded = load_custom(&path, Tolerances::CATALOG).unwrap();
        round_trip &= loaded.validate().unwrap() == entry.validate().unwrap();
    }
    outcome(
        identical && round_trip,
        format!("byte-identical seeded reports {identical}, export -> load keeps validator outcomes {round_trip}"),
    )
}

fn main() -> ExitCode {
    let s = sweep();
    let results = [
        ("1", criterion_1(&s)),
        ("2", criterion_2(&s)),
        ("3", criterion_3(&s)),
        ("4", criterion_4(&s)),
        ("5", criterion_5(&s)),
        ("6a", criterion_6a()),
        ("6b", criterion_6b()),
        ("7", criterion_7()),
        ("8", criterion_8()),
        ("9", criterion_9()),
        ("10", criterion_10()),
    ];
    let mut failed = 0;
    for (id, o) in &results {
        println!(
            "criterion {id:<3} {}  {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The `verify` report: weak-form residuals over a time grid and the full
//! probe basis, plus the algebraic, conservation and special-geometry checks.

use homofiber_core::catalog::CatalogEntry;
use homofiber_core::oracle::{
    self, ConservationReport, GreatCircleReport, MagneticCircleReport, ResidualConfig,
    ResidualEntry,
};
use homofiber_core::{BaseModel, ClosedFormMotion, ValidationReport};
use serde::Serialize;

use crate::config::RunConfig;
use crate::Result;

/// Fixed thresholds for the checks that involve no finite differences.
pub mod limits {
    pub const ALGEBRAIC: f64 = 1e-11;
    pub const MODULE_INVARIANCE: f64 = 1e-10;
    pub const VELOCITY_FORMULA: f64 = 1e-11;
    pub const CONSERVATION: f64 = 1e-10;
    pub const COLLAPSE: f64 = 1e-12;
    pub const SPHERE_NORM: f64 = 1e-10;
    pub const PLANARITY: f64 = 1e-9;
    pub const CURVATURE_SPREAD: f64 = 1e-6;
}

/// Charges used by the magnetic-circle check.
pub const CIRCLE_CHARGES: [f64; 3] = [0.5, 1.0, 2.0];
/// Base step of the curvature finite differences.
pub const CURVATURE_STEP: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub space: String,
    pub weights: Vec<f64>,
    /// 1-based.
    pub pair: Vec<usize>,
    pub ratio: f64,
    pub charge: f64,
    pub seed: u64,
    pub xa: Vec<f64>,
    pub xb: Vec<f64>,
    pub perturb: Option<f64>,
    pub times: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualSection {
    pub fd_step: f64,
    pub tolerance: f64,
    pub max_abs: f64,
    pub argmax_t: Option<f64>,
    /// 0-based index into the probe basis.
    pub argmax_probe: Option<usize>,
    pub max_pair_leakage: f64,
    pub entries: Vec<ResidualEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialChecks {
    pub lambda_collapse: Option<f64>,
    pub magnetic_circle: Option<MagneticCircleReport>,
    /// Reported but not part of the pass decision: under the trace form the
    /// `λ = 1` Hopf metric is a Berger sphere, so non-horizontal geodesics
    /// are not great circles.
    pub great_circle: Option<GreatCircleReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub run: RunSummary,
    pub validation: ValidationReport,
    pub residuals: ResidualSection,
    pub algebraic_identity: f64,
    pub module_invariance: f64,
    pub velocity_formula: f64,
    pub conservation: ConservationReport,
    pub special: SpecialChecks,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn max_over(times: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    times.iter().map(|&t| f(t)).fold(0.0, f64::max)
}

fn magnetic_applies(motion: &ClosedFormMotion) -> bool {
    let sys = motion.system();
    matches!(motion.model(), Some(BaseModel::Orbit(_)))
        && sys.split().g().dim() == 3
        && sys.pair().b.is_none()
        && motion.xa().norm() > 0.0
}

/// Runs every check on the configured motion.
pub fn run(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.check()?;
    let entry = cfg.load_space()?;
    run_on(cfg, &entry)
}

pub fn run_on(cfg: &RunConfig, entry: &CatalogEntry) -> Result<VerifyReport> {
    let tolerance = cfg.resolved_tolerance()?;
    let (motion, init) = cfg.motion(entry)?;
    let sys = motion.system().clone();
    let times = cfg.times()?;
    let rcfg = ResidualConfig::new(cfg.fd_step, tolerance)?;
    let probes = oracle::probe_basis(&sys);
    let validation = homofiber_core::homogeneous::validate(
        sys.split(),
        Some(sys.pair()),
        Some(sys.w()),
        entry.tolerances(),
    )?;

    let sweep = oracle::koszul_sweep(&motion, &times, &probes, &rcfg)?;
    let mut algebraic: f64 = 0.0;
    for &t in &times {
        for z in &probes {
            algebraic = algebraic.max(oracle::algebraic_identity_check(&motion, t, z)?);
        }
    }
    let module_invariance = max_over(&times, |t| oracle::module_invariance(&motion, t));
    let velocity_formula = max_over(&times, |t| oracle::velocity_formula_gap(&motion, t));
    let conservation = oracle::conservation_sweep(&motion, &times);

    let lambda_collapse = if sys.ratio() == 1.0 {
        Some(oracle::lambda_collapse_check(&motion, &times)?)
    } else {
        None
    };
    let great_circle = match motion.model() {
        Some(BaseModel::Vector(_)) if sys.ratio() == 1.0 && sys.charge() == 0.0 => {
            Some(oracle::great_circle_check(&motion, &times)?)
        }
        _ => None,
    };
    let magnetic_circle = if magnetic_applies(&motion) {
        let model = motion.model().expect("checked above").clone();
        Some(oracle::magnetic_circle_check(
            &sys,
            &model,
            motion.xa(),
            &CIRCLE_CHARGES,
            &times,
            CURVATURE_STEP,
        )?)
    } else {
        None
    };

    let mut failures = Vec::new();
    let mut require = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    require(
        validation.all_passed(),
        format!(
            "structural validation (worst {:e})",
            validation.worst_residual()
        ),
    );
    require(
        sweep.max_abs_residual <= tolerance,
        format!(
            "weak-form residual {:e} > {:e}",
            sweep.max_abs_residual, tolerance
        ),
    );
    require(
        sweep.max_pair_leakage <= tolerance,
        format!("velocity leaves m_a + m_b by {:e}", sweep.max_pair_leakage),
    );
    require(
        algebraic <= limits::ALGEBRAIC,
        format!("algebraic identity gap {algebraic:e}"),
    );
    require(
        module_invariance <= limits::MODULE_INVARIANCE,
        format!("T(t)Xa leaves m_a by {module_invariance:e}"),
    );
    require(
        velocity_formula <= limits::VELOCITY_FORMULA,
        format!("velocity formula gap {velocity_formula:e}"),
    );
    require(
        conservation.max_deviation <= limits::CONSERVATION,
        format!("speed drift {:e}", conservation.max_deviation),
    );
    if let Some(c) = lambda_collapse {
        require(
            c <= limits::COLLAPSE,
            format!("lambda = 1 collapse gap {c:e}"),
        );
    }
    if let Some(m) = &magnetic_circle {
        require(
            m.max_spread <= limits::CURVATURE_SPREAD,
            format!("curvature spread {:e}", m.max_spread),
        );
        require(m.increasing, "curvature not increasing in |k|".into());
    }
    let passed = failures.is_empty();

    let pair = sys.pair();
    Ok(VerifyReport {
        run: RunSummary {
            space: entry.name().to_string(),
            weights: sys.metric().weights().to_vec(),
            pair: std::iter::once(pair.a + 1)
                .chain(pair.b.map(|b| b + 1))
                .collect(),
            ratio: sys.ratio(),
            charge: sys.charge(),
            seed: cfg.seed,
            xa: init.xa_coefficients,
            xb: init.xb_coefficients,
            perturb: cfg.perturb,
            times,
        },
        validation,
        residuals: ResidualSection {
            fd_step: cfg.fd_step,
            tolerance,
            max_abs: sweep.max_abs_residual,
            argmax_t: sweep.argmax.map(|a| a.0),
            argmax_probe: sweep.argmax.map(|a| a.1),
            max_pair_leakage: sweep.max_pair_leakage,
            entries: sweep.entries,
        },
        algebraic_identity: algebraic,
        module_invariance,
        velocity_formula,
        conservation,
        special: SpecialChecks {
            lambda_collapse,
            magnetic_circle,
            great_circle,
        },
        failures,
        passed,
    })
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "space {}  lambda {}  k {}  max residual {:e} (tol {:e})  {}\n",
            self.run.space,
            self.run.ratio,
            self.run.charge,
            self.residuals.max_abs,
            self.residuals.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for f in &self.failures {
            s.push_str(&format!("  failed: {f}\n"));
        }
        s
    }
}

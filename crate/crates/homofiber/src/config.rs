//! Run configuration shared by the subcommands.

use std::path::Path;

use homofiber_core::catalog::{self, CatalogEntry};
use homofiber_core::motion::build_motion;
use homofiber_core::{AlgebraElement, ChargedSystem, ClosedFormMotion, Tolerances};
use serde::Serialize;

use crate::{document, random, Error, Result};

/// Environment variable that replaces the default residual tolerance.
pub const TOLERANCE_ENV: &str = "HOMOFIBER_TOL";
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonTree,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    /// Catalog name or path to a space document.
    pub space: String,
    /// One value: fiber ratio `λ = λ_b/λₐ`. One value per module: weights.
    pub lambda: Vec<f64>,
    /// 1-based `(a, b)`.
    pub pair: Option<(usize, Option<usize>)>,
    pub w_scale: f64,
    pub charge: Option<f64>,
    /// Coefficients in the orthonormal basis of `mₐ` / `m_b`; random when absent.
    pub xa: Option<Vec<f64>>,
    pub xb: Option<Vec<f64>>,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub fd_step: f64,
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub format: OutputFormat,
    pub perturb: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            space: "hopf1".into(),
            lambda: Vec::new(),
            pair: None,
            w_scale: 1.0,
            charge: None,
            xa: None,
            xb: None,
            t0: -2.0,
            t1: 2.0,
            samples: 25,
            fd_step: 1e-4,
            tolerance: None,
            seed: 0,
            format: OutputFormat::Csv,
            perturb: None,
        }
    }
}

/// Initial data with the coefficients it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub xa: AlgebraElement,
    pub xb: AlgebraElement,
    pub xa_coefficients: Vec<f64>,
    pub xb_coefficients: Vec<f64>,
    /// Unit `mₐ` direction for `--perturb`.
    pub perturbation: Vec<f64>,
}

fn finite(values: impl IntoIterator<Item = f64>) -> bool {
    values.into_iter().all(f64::is_finite)
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        let scalars = [self.w_scale, self.t0, self.t1, self.fd_step]
            .into_iter()
            .chain(self.charge)
            .chain(self.tolerance)
            .chain(self.perturb);
        let lists = self
            .lambda
            .iter()
            .chain(self.xa.iter().flatten())
            .chain(self.xb.iter().flatten())
            .copied();
        if !finite(scalars) || !finite(lists) {
            return Err(Error::Usage("numeric arguments must be finite".into()));
        }
        if self.fd_step <= 0.0 {
            return Err(Error::Usage("--fd-step must be positive".into()));
        }
        if self.tolerance.is_some_and(|t| t <= 0.0) {
            return Err(Error::Usage("--tol must be positive".into()));
        }
        if self.lambda.iter().any(|&l| l <= 0.0) {
            return Err(Error::Usage("--lambda values must be positive".into()));
        }
        if self.samples < 1 {
            return Err(Error::Usage("--samples must be at least 1".into()));
        }
        Ok(())
    }

    /// `--tol`, then `HOMOFIBER_TOL`, then the default.
    pub fn resolved_tolerance(&self) -> Result<f64> {
        if let Some(t) = self.tolerance {
            return Ok(t);
        }
        match std::env::var(TOLERANCE_ENV) {
            Ok(s) => match s.trim().parse::<f64>() {
                Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
                _ => Err(Error::Usage(format!(
                    "{TOLERANCE_ENV} is not a positive number: {s}"
                ))),
            },
            Err(_) => Ok(DEFAULT_TOLERANCE),
        }
    }

    /// Catalog lookup first, then a document path. Anything that looks like
    /// a path is read as one, so a missing file is an IO error.
    pub fn load_space(&self) -> Result<CatalogEntry> {
        if let Some(entry) = catalog::by_name(&self.space) {
            return Ok(entry);
        }
        let path = Path::new(&self.space);
        if path.exists() || self.space.contains(['/', '\\', '.']) {
            return document::load_custom(path, Tolerances::USER);
        }
        Err(Error::UnknownSpace(self.space.clone()))
    }

    pub fn system(&self, entry: &CatalogEntry) -> Result<ChargedSystem> {
        let modules = entry.split().modules().len();
        let mut weights = entry.data().weights.clone();
        let pair = match self.pair {
            Some((a, b)) => {
                if a == 0 || b == Some(0) || a > modules || b.is_some_and(|b| b > modules) {
                    return Err(Error::Usage(format!(
                        "--pair must index modules 1..={modules}"
                    )));
                }
                Some(homofiber_core::ModulePair {
                    a: a - 1,
                    b: b.map(|b| b - 1),
                })
            }
            None => entry.data().pair,
        };
        let pair =
            pair.ok_or_else(|| Error::Usage("space has no default pair; pass --pair".into()))?;
        let mut ratio = None;
        match self.lambda.len() {
            0 => {}
            1 => match pair.b {
                Some(b) => weights[b] = weights[pair.a] * self.lambda[0],
                None => ratio = Some(self.lambda[0]),
            },
            n if n == modules => weights = self.lambda.clone(),
            n => {
                return Err(Error::Usage(format!(
                    "--lambda takes one ratio or {modules} weights, got {n}"
                )))
            }
        }
        let mut data = entry.data().clone();
        data.weights = weights.clone();
        data.pair = Some(pair);
        let entry = CatalogEntry::from_data(data, entry.tolerances())?;
        let mut sys = entry.system(Some(&weights), self.charge, self.w_scale)?;
        if let Some(r) = ratio {
            sys = sys.with_empty_fiber_ratio(r)?;
        }
        Ok(sys)
    }

    /// Coefficients from the flags, or seeded random unit vectors.
    pub fn initial_data(&self, sys: &ChargedSystem) -> Result<InitialData> {
        let mut rng = random::rng(self.seed);
        let ma = sys.module_a().clone();
        let mb = sys.module_b();
        let xa_c = match &self.xa {
            Some(c) => c.clone(),
            None => random::unit_coefficients(&mut rng, ma.dim()),
        };
        let xb_c = match &self.xb {
            Some(c) => c.clone(),
            None => random::unit_coefficients(&mut rng, mb.dim()),
        };
        let perturbation = random::unit_coefficients(&mut rng, ma.dim());
        let combine = |s: &homofiber_core::Subspace, c: &[f64], flag: &str| {
            if c.len() != s.dim() {
                return Err(Error::Usage(format!(
                    "{flag} needs {} coefficients, got {}",
                    s.dim(),
                    c.len()
                )));
            }
            Ok(s.combine(c)?)
        };
        Ok(InitialData {
            xa: combine(&ma, &xa_c, "--xa")?,
            xb: combine(&mb, &xb_c, "--xb")?,
            xa_coefficients: xa_c,
            xb_coefficients: xb_c,
            perturbation,
        })
    }

    /// The motion described by the configuration, perturbed when asked to.
    pub fn motion(&self, entry: &CatalogEntry) -> Result<(ClosedFormMotion, InitialData)> {
        let sys = self.system(entry)?;
        let init = self.initial_data(&sys)?;
        let mut motion = build_motion(&sys, &init.xa, &init.xb)?;
        if let Some(model) = entry.model() {
            motion = motion.with_model(model.clone());
        }
        if let Some(eps) = self.perturb {
            let n = sys.module_a().combine(&init.perturbation)?;
            motion = motion.perturbed(eps, &n)?;
        }
        Ok((motion, init))
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        Ok(homofiber_core::motion::sample_times(
            self.t0,
            self.t1,
            self.samples,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lambda_sets_the_fiber_ratio() {
        let cfg = RunConfig {
            lambda: vec![2.0],
            ..Default::default()
        };
        let sys = cfg.system(&cfg.load_space().unwrap()).unwrap();
        assert_eq!(sys.metric().weights(), &[1.0, 2.0]);
        assert_eq!(sys.ratio(), 2.0);
    }

    #[test]
    fn per_module_weights() {
        let cfg = RunConfig {
            lambda: vec![3.0, 1.5],
            ..Default::default()
        };
        let sys = cfg.system(&cfg.load_space().unwrap()).unwrap();
        assert_eq!(sys.ratio(), 0.5);
        let bad = RunConfig {
            lambda: vec![1.0, 2.0, 3.0],
            ..Default::default()
        };
        assert!(matches!(
            bad.system(&bad.load_space().unwrap()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn empty_fiber_ratio() {
        let cfg = RunConfig {
            space: "kahler-s2".into(),
            lambda: vec![3.0],
            ..Default::default()
        };
        let sys = cfg.system(&cfg.load_space().unwrap()).unwrap();
        assert_eq!(sys.ratio(), 3.0);
        assert_eq!(sys.metric().weights(), &[1.0]);
    }

    #[test]
    fn random_initial_data_is_seeded() {
        let cfg = RunConfig::default();
        let entry = cfg.load_space().unwrap();
        let sys = cfg.system(&entry).unwrap();
        let a = cfg.initial_data(&sys).unwrap();
        assert_eq!(a, cfg.initial_data(&sys).unwrap());
        assert!((a.xa.norm() - 1.0).abs() < 1e-14);
        let wrong = RunConfig {
            xa: Some(vec![1.0]),
            ..Default::default()
        };
        assert!(matches!(wrong.initial_data(&sys), Err(Error::Usage(_))));
    }

    #[test]
    fn unknown_space() {
        let cfg = RunConfig {
            space: "no-such-space".into(),
            ..Default::default()
        };
        assert!(matches!(cfg.load_space(), Err(Error::UnknownSpace(_))));
    }

    #[test]
    fn missing_file_is_io() {
        let cfg = RunConfig {
            space: "missing/space.json".into(),
            ..Default::default()
        };
        let err = cfg.load_space().unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn non_finite_rejected() {
        let cfg = RunConfig {
            t1: f64::NAN,
            ..Default::default()
        };
        assert!(cfg.check().is_err());
    }
}

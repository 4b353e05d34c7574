//! Seeded property suites with deterministic reports.

mod algebra;
mod geometry;

pub use algebra::*;
pub use geometry::*;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linfty::{DEFAULT_MAX_ARITY, DEFAULT_MAX_TERMS};
use crate::sample::{self, SampleRng};

pub const SUITES: &[&str] = &["jacobi", "machine", "truc", "oracle", "tpois-mc", "coiso", "gauge", "flow", "filtration"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_arity: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    /// Replace the algebras under test by deliberately broken ones.
    pub fault: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            samples: 50,
            max_arity: DEFAULT_MAX_ARITY,
            max_degree: 2,
            max_terms: DEFAULT_MAX_TERMS,
            fault: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::arg("samples must be at least 1"));
        }
        if self.max_arity == 0 || self.max_arity > 6 {
            return Err(Error::arg("max arity must lie in 1..=6"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub index: usize,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseSummary {
    pub case: String,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: RunConfig,
    pub cases: Vec<CaseSummary>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, config: &RunConfig) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            config: config.clone(),
            cases: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases.iter().all(|c| c.checks > 0)
    }

    pub fn checks(&self) -> usize {
        self.cases.iter().map(|c| c.checks).sum()
    }

    /// Run `check` on `count` independently seeded samples (in parallel)
    /// and record the outcomes in index order. `check` returns `Ok(None)`
    /// on success and `Ok(Some(witness))` on a mathematical failure.
    fn run<F>(&mut self, case: &str, count: usize, check: F)
    where
        F: Fn(&mut SampleRng, usize) -> Result<Option<String>> + Sync,
    {
        let salt = case_salt(self.config.seed, case);
        let outcomes: Vec<(usize, Result<Option<String>>)> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut r = sample::rng_for(salt, i);
                (i, check(&mut r, i))
            })
            .collect();
        let mut failures = 0;
        for (index, o) in outcomes {
            let witness = match o {
                Ok(None) => continue,
                Ok(Some(w)) => w,
                Err(e) => format!("error: {}", e),
            };
            failures += 1;
            self.failures.push(Failure {
                case: case.to_string(),
                index,
                witness,
            });
        }
        self.cases.push(CaseSummary {
            case: case.to_string(),
            checks: count,
            failures,
        });
    }
}

fn case_salt(seed: u64, case: &str) -> u64 {
    case.bytes().fold(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15), |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    match name {
        "jacobi" => Ok(jacobi_suite(cfg)),
        "machine" => Ok(machine_suite(cfg)),
        "truc" => Ok(truc_suite(cfg)),
        "oracle" => Ok(oracle_suite(cfg)),
        "tpois-mc" => Ok(tpois_mc_suite(cfg)),
        "coiso" => Ok(coiso_suite(cfg)),
        "gauge" => Ok(gauge_suite(cfg)),
        "flow" => Ok(flow_suite(cfg)),
        "filtration" => Ok(filtration_suite(cfg)),
        _ => Err(Error::arg(format!("unknown suite {:?}; expected one of {}", name, SUITES.join(", ")))),
    }
}

fn check(ok: bool, witness: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(witness())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let cfg = RunConfig {
            samples: 4,
            max_arity: 3,
            ..RunConfig::default()
        };
        for name in SUITES {
            let rep = run_suite(name, &cfg).unwrap();
            assert!(rep.passed(), "{}: {:?}", name, rep.failures);
        }
    }

    #[test]
    fn fault_is_detected() {
        let cfg = RunConfig {
            samples: 4,
            max_arity: 3,
            fault: true,
            ..RunConfig::default()
        };
        assert!(!run_suite("jacobi", &cfg).unwrap().passed());
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", &RunConfig::default()).is_err());
    }
}

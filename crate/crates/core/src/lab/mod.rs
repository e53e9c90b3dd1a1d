//! Seeded verification suites for the finite identities relating metric
//! spaces, Lipschitz functions and free-space norms.
//!
//! Each trial is an [`Instance`]: a space plus named vectors and numeric
//! parameters, all plain `f64`. A check evaluates an instance to an
//! [`Outcome`]; the first failing instance of a suite is kept verbatim as
//! its [`Counterexample`], and [`replay`] re-evaluates it in isolation. In
//! exact mode every instance is lifted to rationals before evaluation.

mod free_checks;
pub mod gen;
mod lip_checks;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::SpaceFile;
use crate::metric::MetricSpace;
use crate::scalar::{Rational, Scalar, Tolerance};

pub use free_checks::{check_duality, check_isometric_embedding, run_alternating_table, GrowthRow};
pub use lip_checks::{
    check_amalgam_isometry, check_ball_translation, check_elementary_inequality,
    check_ideal_ball_identity, check_lattice_bound, check_liminf_identity, check_rescale,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Amalgam,
    BallTranslation,
    Lattice,
    Liminf,
    Rescale,
    Ideal,
    Elementary,
    Example25,
    Duality,
    Embedding,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Amalgam,
        Check::BallTranslation,
        Check::Lattice,
        Check::Liminf,
        Check::Rescale,
        Check::Ideal,
        Check::Elementary,
        Check::Example25,
        Check::Duality,
        Check::Embedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Amalgam => "amalgam",
            Check::BallTranslation => "ball-translation",
            Check::Lattice => "lattice",
            Check::Liminf => "liminf",
            Check::Rescale => "rescale",
            Check::Ideal => "ideal",
            Check::Elementary => "elementary",
            Check::Example25 => "example25",
            Check::Duality => "duality",
            Check::Embedding => "embedding",
        }
    }

    /// Trial count when the config does not override it. For `ideal` it is
    /// per grid configuration; for `duality` and `embedding` it counts
    /// spaces.
    pub fn default_trials(self) -> usize {
        match self {
            Check::Amalgam => 1000,
            Check::Elementary => 1_000_000,
            Check::Duality | Check::Embedding => 200,
            Check::Example25 => 1,
            _ => 10_000,
        }
    }

    fn stream(self) -> u64 {
        Check::ALL.iter().position(|c| *c == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Seed, trial counts and tolerances shared by every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct LabConfig {
    pub seed: u64,
    /// Overrides every suite's [`Check::default_trials`].
    pub trials: Option<usize>,
    pub tol: Tolerance,
    /// Agreement required of the two free-space norm solvers.
    pub gap_tol: Tolerance,
    pub exact: bool,
    /// Largest truncation index for the alternating-molecule table.
    pub n_max: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            tol: Tolerance::default(),
            gap_tol: Tolerance::DUALITY,
            exact: false,
            n_max: 8,
        }
    }
}

impl LabConfig {
    pub fn trials_for(&self, check: Check) -> usize {
        self.trials.unwrap_or_else(|| check.default_trials())
    }

    fn rng(&self, check: Check) -> gen::LabRng {
        gen::suite_rng(self.seed, check.stream())
    }
}

/// One trial's inputs. Vectors are indexed like the space's points.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S = f64> {
    pub space: Option<Arc<MetricSpace<S>>>,
    pub vectors: BTreeMap<String, Vec<S>>,
    pub params: BTreeMap<String, S>,
}

impl<S: Scalar> Instance<S> {
    pub fn new(space: Option<Arc<MetricSpace<S>>>) -> Self {
        Self {
            space,
            vectors: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn vector(mut self, name: &str, values: Vec<S>) -> Self {
        self.vectors.insert(name.to_string(), values);
        self
    }

    pub fn param(mut self, name: &str, value: S) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn get_space(&self) -> Result<&Arc<MetricSpace<S>>> {
        self.space
            .as_ref()
            .ok_or_else(|| Error::MalformedCase("no space".into()))
    }

    fn get_vector(&self, name: &str) -> Result<&[S]> {
        self.vectors
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MalformedCase(format!("no vector {name:?}")))
    }

    fn get_param(&self, name: &str) -> Result<&S> {
        self.params
            .get(name)
            .ok_or_else(|| Error::MalformedCase(format!("no parameter {name:?}")))
    }

    fn flag(&self, name: &str) -> bool {
        self.params.get(name).is_some_and(|v| !v.is_zero())
    }

    fn index(&self, name: &str) -> Result<usize> {
        let v = self.get_param(name)?.as_f64();
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::MalformedCase(format!(
                "{name} = {v} is not an index"
            )));
        }
        Ok(v as usize)
    }
}

impl Instance<f64> {
    pub fn lift<S: Scalar>(&self) -> Instance<S> {
        Instance {
            space: self.space.as_ref().map(|s| Arc::new(s.lift())),
            vectors: self
                .vectors
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|x| S::of_f64(*x)).collect()))
                .collect(),
            params: self
                .params
                .iter()
                .map(|(k, v)| (k.clone(), S::of_f64(*v)))
                .collect(),
        }
    }
}

/// Result of evaluating one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    /// Relative discrepancy for equalities, relative excess for
    /// inequalities; 0 when an inequality holds outright.
    pub residual: f64,
}

impl Outcome {
    fn new(passed: bool, residual: f64) -> Self {
        Self { passed, residual }
    }

    fn and(self, other: Outcome) -> Self {
        Self {
            passed: self.passed && other.passed,
            residual: self.residual.max(other.residual),
        }
    }
}

/// Relative excess of `a` over `b`, 0 when `a <= b`.
fn excess<S: Scalar>(a: &S, b: &S) -> f64 {
    let d = (a.clone() - b.clone()).as_f64();
    if d > 0.0 {
        d / 1f64.max(b.as_f64().abs())
    } else {
        0.0
    }
}

fn le_outcome<S: Scalar>(tol: &Tolerance, a: &S, b: &S) -> Outcome {
    Outcome::new(tol.le(a, b), excess(a, b))
}

fn eq_outcome<S: Scalar>(tol: &Tolerance, a: &S, b: &S) -> Outcome {
    Outcome::new(tol.eq(a, b), Tolerance::residual(a, b))
}

/// A failing instance, serialized with enough data to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub trial: usize,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub space: Option<SpaceFile>,
    pub vectors: BTreeMap<String, Vec<f64>>,
    pub params: BTreeMap<String, f64>,
}

impl Counterexample {
    fn new(trial: usize, inst: &Instance, residual: f64, error: Option<String>) -> Self {
        Self {
            trial,
            residual,
            error,
            space: inst.space.as_deref().map(SpaceFile::from_space),
            vectors: inst.vectors.clone(),
            params: inst.params.clone(),
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        let space = match &self.space {
            Some(s) => Some(Arc::new(s.clone().into_space()?)),
            None => None,
        };
        Ok(Instance {
            space,
            vectors: self.vectors.clone(),
            params: self.params.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    pub trials: usize,
    pub max_residual: f64,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<GrowthRow>>,
}

/// Evaluates one instance of `check` under `cfg`.
pub fn evaluate(check: Check, inst: &Instance, cfg: &LabConfig) -> Result<Outcome> {
    if cfg.exact {
        evaluate_in::<Rational>(check, &inst.lift(), cfg)
    } else {
        evaluate_in::<f64>(check, inst, cfg)
    }
}

fn evaluate_in<S: Scalar>(check: Check, inst: &Instance<S>, cfg: &LabConfig) -> Result<Outcome> {
    match check {
        Check::Amalgam => lip_checks::amalgam(inst, &cfg.tol),
        Check::BallTranslation => lip_checks::ball_translation(inst, &cfg.tol),
        Check::Lattice => lip_checks::lattice(inst, &cfg.tol),
        Check::Liminf => lip_checks::liminf(inst, &cfg.tol),
        Check::Rescale => lip_checks::rescale(inst, &cfg.tol),
        Check::Ideal => lip_checks::ideal(inst, &cfg.tol),
        Check::Elementary => lip_checks::elementary(inst, &cfg.tol),
        Check::Example25 => free_checks::example(inst, cfg).map(|(o, _)| o),
        Check::Duality => free_checks::duality(inst, cfg),
        Check::Embedding => free_checks::embedding(inst, cfg),
    }
}

/// Re-evaluates a recorded counterexample.
pub fn replay(check: Check, ce: &Counterexample, cfg: &LabConfig) -> Result<Outcome> {
    evaluate(check, &ce.instance()?, cfg)
}

/// Accumulates trial outcomes for one suite.
struct Recorder<'a> {
    check: Check,
    cfg: &'a LabConfig,
    trials: usize,
    max_residual: f64,
    counterexample: Option<Counterexample>,
}

impl<'a> Recorder<'a> {
    fn new(check: Check, cfg: &'a LabConfig) -> Self {
        Self {
            check,
            cfg,
            trials: 0,
            max_residual: 0.0,
            counterexample: None,
        }
    }

    fn record(&mut self, inst: &Instance) {
        match evaluate(self.check, inst, self.cfg) {
            Ok(out) => self.tally(inst, out, None),
            // A generated instance the code cannot evaluate is a failure too.
            Err(e) => self.tally(inst, Outcome::new(false, f64::MAX), Some(e.to_string())),
        }
    }

    fn tally(&mut self, inst: &Instance, out: Outcome, error: Option<String>) {
        if !out.passed && self.counterexample.is_none() {
            self.counterexample = Some(Counterexample::new(self.trials, inst, out.residual, error));
        }
        self.trials += 1;
        self.max_residual = self.max_residual.max(out.residual);
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            check: self.check.name().to_string(),
            passed: self.counterexample.is_none(),
            trials: self.trials,
            max_residual: self.max_residual,
            counterexample: self.counterexample,
            table: None,
        }
    }
}

/// Runs one suite with its seeded generator.
pub fn run(check: Check, cfg: &LabConfig) -> Result<CheckResult> {
    let trials = cfg.trials_for(check);
    let mut rng = cfg.rng(check);
    match check {
        Check::Amalgam => Ok(lip_checks::amalgam_suite(&mut rng, trials, cfg)),
        Check::BallTranslation => Ok(lip_checks::ball_suite(&mut rng, trials, cfg)),
        Check::Lattice => Ok(lip_checks::lattice_suite(&mut rng, trials, cfg)),
        Check::Liminf => Ok(lip_checks::liminf_suite(&mut rng, trials, cfg)),
        Check::Rescale => Ok(lip_checks::rescale_suite(&mut rng, trials, cfg)),
        Check::Ideal => lip_checks::ideal_suite(&mut rng, trials, cfg),
        Check::Elementary => Ok(check_elementary_inequality(trials, cfg)),
        Check::Example25 => run_alternating_table(cfg.n_max, cfg),
        Check::Duality => Ok(free_checks::duality_suite(trials, cfg)),
        Check::Embedding => Ok(free_checks::embedding_suite(trials, cfg)),
    }
}

/// Runs the given suites concurrently; results come back in input order.
pub fn run_many(checks: &[Check], cfg: &LabConfig) -> Result<Vec<CheckResult>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .map(|&c| scope.spawn(move || run(c, cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
            assert_eq!(serde_json::to_value(c).unwrap(), c.name());
        }
        assert!(matches!(
            "nope".parse::<Check>(),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn counterexamples_replay() {
        // A hand-made failing instance: the lattice bound with a corrupted
        // space is impossible, so fabricate a failure through elementary.
        let inst = Instance::new(None)
            .param("a", 1.0)
            .param("b", 1.0)
            .param("c", 1.0)
            .param("d", 1.0)
            .param("balanced", 1.0);
        let cfg = LabConfig::default();
        assert!(evaluate(Check::Elementary, &inst, &cfg).unwrap().passed);
        let ce = Counterexample::new(0, &inst, 0.0, None);
        let text = serde_json::to_string(&ce).unwrap();
        let back: Counterexample = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ce);
        assert!(replay(Check::Elementary, &back, &cfg).unwrap().passed);
    }

    #[test]
    fn malformed_cases_are_errors() {
        let cfg = LabConfig::default();
        let inst = Instance::new(None).param("a", 1.0);
        assert!(matches!(
            evaluate(Check::Elementary, &inst, &cfg),
            Err(Error::MalformedCase(_))
        ));
        assert!(matches!(
            evaluate(Check::Amalgam, &inst, &cfg),
            Err(Error::MalformedCase(_))
        ));
    }
}

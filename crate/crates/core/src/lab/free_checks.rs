//! Checks on free-space norms: agreement of the two solvers, the isometric
//! embedding of point evaluations, and the alternating-molecule table.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::free_space::{
    certified_norm, example_molecule, example_witness, Molecule, EXAMPLE_MAX_N,
};
use crate::lip::LipFunction;
use crate::metric::MetricSpace;
use crate::scalar::{Rational, Scalar, Tolerance};

use super::gen::{dyadic, random_space, suite_rng, LabRng};
use super::{eq_outcome, le_outcome, Check, CheckResult, Instance, LabConfig, Outcome, Recorder};

/// Stream for the spaces shared by the duality and embedding suites.
const SHARED_SPACES: u64 = 100;

/// One line of the alternating-molecule table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub ae_norm: f64,
    /// `(2/3)(1 - 4^-(n+1))`.
    pub closed_form: f64,
    /// `<m+, 1>` off the base point.
    pub positive_mass: f64,
    /// `<m, f_n>` for the clipped witness.
    pub witness_pairing: f64,
    /// `positive_mass / ae_norm`.
    pub ratio: f64,
}

fn lift_molecule<S: Scalar>(space: &Arc<MetricSpace<S>>, m: &Molecule) -> Result<Molecule<S>> {
    Molecule::new(
        space.clone(),
        m.coeffs().iter().map(|c| S::of_f64(*c)).collect(),
    )
}

struct ExampleRun<S> {
    outcome: Outcome,
    ratio: S,
    row: GrowthRow,
}

fn example_at<S: Scalar>(n: usize, cfg: &LabConfig) -> Result<ExampleRun<S>> {
    let tol = &cfg.tol;
    let (space64, m64) = example_molecule(n)?;
    let space = Arc::new(space64.lift::<S>());
    let m = lift_molecule(&space, &m64)?;
    let cert = certified_norm(&m, tol, &cfg.gap_tol)?;
    let norm = cert.primal.clone();

    let two_thirds = S::of_usize(2) / S::of_usize(3);
    let four_pow = (0..=n).fold(S::one(), |acc, _| acc * S::of_usize(4));
    let closed = two_thirds.clone() * (S::one() - S::one() / four_pow);

    let (pos, _) = m.minimal_positive_decomposition();
    let mass = pos.pairing(&LipFunction::one_off_base(space.clone())?)?;
    let w64 = example_witness(&space64, n)?;
    let w = LipFunction::new(
        space.clone(),
        w64.values().iter().map(|v| S::of_f64(*v)).collect(),
    )?;
    let pairing = m.pairing(&w)?;
    let target = S::of_usize(n + 1);
    let clipped = w.values().iter().all(|v| !v.is_neg() && *v <= S::one());

    let outcome = Outcome::new(cert.report.passed(), 0.0)
        .and(eq_outcome(tol, &norm, &closed))
        .and(le_outcome(tol, &norm, &two_thirds))
        .and(Outcome::new(
            mass == target && pairing == target && clipped,
            0.0,
        ));
    let ratio = mass.clone() / norm.clone();
    let row = GrowthRow {
        n,
        ae_norm: norm.as_f64(),
        closed_form: closed.as_f64(),
        positive_mass: mass.as_f64(),
        witness_pairing: pairing.as_f64(),
        ratio: ratio.as_f64(),
    };
    Ok(ExampleRun {
        outcome,
        ratio,
        row,
    })
}

/// The table entry for `n`, also requiring the mass-to-norm ratio to grow
/// strictly from `n - 1`.
fn example_in<S: Scalar>(n: usize, cfg: &LabConfig) -> Result<(Outcome, GrowthRow)> {
    let run = example_at::<S>(n, cfg)?;
    let mut outcome = run.outcome;
    if n > 0 {
        let prev = example_at::<S>(n - 1, cfg)?;
        outcome = outcome.and(Outcome::new(run.ratio > prev.ratio, 0.0));
    }
    Ok((outcome, run.row))
}

fn example_eval(inst: &Instance, cfg: &LabConfig) -> Result<(Outcome, GrowthRow)> {
    let n = inst.index("n")?;
    if cfg.exact {
        example_in::<Rational>(n, cfg)
    } else {
        example_in::<f64>(n, cfg)
    }
}

pub(super) fn example<S: Scalar>(
    inst: &Instance<S>,
    cfg: &LabConfig,
) -> Result<(Outcome, GrowthRow)> {
    let n = inst.index("n")?;
    example_in::<S>(n, cfg)
}

/// The alternating-molecule checks for `n = 0..=n_max`, with the growth
/// table attached to the result.
pub fn run_alternating_table(n_max: usize, cfg: &LabConfig) -> Result<CheckResult> {
    if n_max > EXAMPLE_MAX_N {
        return Err(Error::ExampleOutOfRange(n_max));
    }
    let mut rec = Recorder::new(Check::Example25, cfg);
    let mut table = Vec::new();
    for n in 0..=n_max {
        let inst = Instance::new(None).param("n", n as f64);
        match example_eval(&inst, cfg) {
            Ok((out, row)) => {
                rec.tally(&inst, out, None);
                table.push(row);
            }
            Err(e) => rec.tally(&inst, Outcome::new(false, f64::MAX), Some(e.to_string())),
        }
    }
    let mut result = rec.finish();
    result.table = Some(table);
    Ok(result)
}

fn certified_outcome<S: Scalar>(m: &Molecule<S>, cfg: &LabConfig) -> Result<(Outcome, S, S)> {
    let cert = certified_norm(m, &cfg.tol, &cfg.gap_tol)?;
    let gap = Tolerance::residual(&cert.primal, &cert.dual);
    let within = if S::EXACT {
        gap == 0.0
    } else {
        gap <= cfg.gap_tol.rel
    };
    Ok((
        Outcome::new(cert.report.passed() && within, gap),
        cert.primal,
        cert.dual,
    ))
}

pub(super) fn duality<S: Scalar>(inst: &Instance<S>, cfg: &LabConfig) -> Result<Outcome> {
    let m = Molecule::new(inst.get_space()?.clone(), inst.get_vector("m")?.to_vec())?;
    Ok(certified_outcome(&m, cfg)?.0)
}

/// `|| delta_p - delta_q || = d(p,q)`, or `|| delta_p || = d(p,e)` when `q`
/// is absent, for both solvers.
pub(super) fn embedding<S: Scalar>(inst: &Instance<S>, cfg: &LabConfig) -> Result<Outcome> {
    let x = inst.get_space()?;
    let p = inst.index("p")?;
    let (m, expected) = if inst.params.contains_key("q") {
        let q = inst.index("q")?;
        (Molecule::dipole(x.clone(), p, q)?, x.d(p, q).clone())
    } else {
        (Molecule::delta(x.clone(), p)?, x.base_distance(p)?.clone())
    };
    let (out, primal, dual) = certified_outcome(&m, cfg)?;
    Ok(out
        .and(eq_outcome(&cfg.tol, &primal, &expected))
        .and(eq_outcome(&cfg.tol, &dual, &expected)))
}

/// Random pointed spaces with 3 to 12 points, shared by the duality and
/// embedding suites for a given seed.
pub fn shared_spaces(seed: u64, count: usize) -> Vec<Arc<MetricSpace>> {
    let mut rng = suite_rng(seed, SHARED_SPACES);
    (0..count)
        .map(|_| Arc::new(random_space(&mut rng, 3..=12, true)))
        .collect()
}

fn random_molecule(rng: &mut LabRng, x: &MetricSpace, kind: usize) -> Vec<f64> {
    let n = x.len();
    let b = x.base().expect("pointed");
    let mut c = vec![0.0; n];
    match kind {
        0 | 4 => {
            for v in c.iter_mut() {
                *v = dyadic(rng, -2.0, 2.0);
            }
            if kind == 0 {
                c[b] = 0.0;
            }
        }
        1 => {
            for _ in 0..rng.gen_range(2..=3) {
                c[rng.gen_range(0..n)] = dyadic(rng, -2.0, 2.0);
            }
        }
        2 => {
            for v in c.iter_mut() {
                *v = dyadic(rng, 0.0, 2.0);
            }
        }
        _ => {
            // Zero total mass off the base point.
            let others: Vec<usize> = (0..n).filter(|&p| p != b).collect();
            let (last, rest) = others.split_last().expect("at least two points");
            let mut total = 0.0;
            for &p in rest {
                c[p] = dyadic(rng, -2.0, 2.0);
                total += c[p];
            }
            c[*last] = -total;
        }
    }
    c
}

pub(super) fn duality_suite(spaces: usize, cfg: &LabConfig) -> CheckResult {
    let mut rng = cfg.rng(Check::Duality);
    let mut rec = Recorder::new(Check::Duality, cfg);
    let shared = shared_spaces(cfg.seed, spaces);
    if let Some(x) = shared.first() {
        rec.record(&Instance::new(Some(x.clone())).vector("m", vec![0.0; x.len()]));
    }
    for x in &shared {
        for kind in 0..5 {
            let m = random_molecule(&mut rng, x, kind);
            rec.record(&Instance::new(Some(x.clone())).vector("m", m));
        }
    }
    rec.finish()
}

/// Random molecules on a fixed pointed space.
pub fn check_duality(x: &MetricSpace, trials: usize, cfg: &LabConfig) -> Result<CheckResult> {
    x.require_base()?;
    let x = Arc::new(x.clone());
    let mut rng = cfg.rng(Check::Duality);
    let mut rec = Recorder::new(Check::Duality, cfg);
    for t in 0..trials {
        let m = random_molecule(&mut rng, &x, t % 5);
        rec.record(&Instance::new(Some(x.clone())).vector("m", m));
    }
    Ok(rec.finish())
}

fn embedding_trials(rec: &mut Recorder, x: &Arc<MetricSpace>) {
    let b = x.base().expect("pointed");
    for p in 0..x.len() {
        if p != b {
            rec.record(&Instance::new(Some(x.clone())).param("p", p as f64));
        }
        for q in p + 1..x.len() {
            rec.record(
                &Instance::new(Some(x.clone()))
                    .param("p", p as f64)
                    .param("q", q as f64),
            );
        }
    }
}

pub(super) fn embedding_suite(spaces: usize, cfg: &LabConfig) -> CheckResult {
    let mut rec = Recorder::new(Check::Embedding, cfg);
    for n in 0..=3 {
        let (x, _) = example_molecule(n).expect("small index");
        embedding_trials(&mut rec, &x);
    }
    for x in shared_spaces(cfg.seed, spaces) {
        embedding_trials(&mut rec, &x);
    }
    rec.finish()
}

/// Every point evaluation and every dipole on a fixed pointed space.
pub fn check_isometric_embedding(x: &MetricSpace, cfg: &LabConfig) -> Result<CheckResult> {
    x.require_base()?;
    let mut rec = Recorder::new(Check::Embedding, cfg);
    embedding_trials(&mut rec, &Arc::new(x.clone()));
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::evaluate;

    #[test]
    fn table_for_small_n() {
        let cfg = LabConfig::default();
        let r = run_alternating_table(3, &cfg).unwrap();
        assert!(r.passed, "{r:?}");
        let table = r.table.unwrap();
        assert_eq!(table.len(), 4);
        assert!((table[0].ae_norm - 0.5).abs() < 1e-12);
        assert_eq!(table[0].positive_mass, 1.0);
        assert_eq!(table[3].positive_mass, 4.0);
        assert!(table[3].ae_norm <= 2.0 / 3.0);
        assert!(table.windows(2).all(|w| w[0].ratio < w[1].ratio));
    }

    #[test]
    fn table_is_exact_in_rationals() {
        let cfg = LabConfig {
            exact: true,
            ..LabConfig::default()
        };
        let r = run_alternating_table(2, &cfg).unwrap();
        assert!(r.passed && r.max_residual == 0.0, "{r:?}");
        assert!(matches!(
            run_alternating_table(EXAMPLE_MAX_N + 1, &cfg),
            Err(Error::ExampleOutOfRange(_))
        ));
    }

    #[test]
    fn spaces_are_shared_between_suites() {
        assert_eq!(shared_spaces(3, 5), shared_spaces(3, 5));
        assert_ne!(shared_spaces(3, 5), shared_spaces(4, 5));
    }

    #[test]
    fn embedding_on_a_line() {
        let x = MetricSpace::on_line(&[0.0, 1.0, 2.5, 4.0], Some(1)).unwrap();
        for exact in [false, true] {
            let cfg = LabConfig {
                exact,
                ..LabConfig::default()
            };
            let r = check_isometric_embedding(&x, &cfg).unwrap();
            assert!(r.passed, "{r:?}");
            // 3 deltas off the base point and 6 pairs.
            assert_eq!(r.trials, 9);
        }
    }

    #[test]
    fn zero_molecule_and_random_molecules() {
        let x = MetricSpace::on_line(&[0.0, 1.0, 2.5, 4.0], Some(0)).unwrap();
        let cfg = LabConfig::default();
        let zero = Instance::new(Some(Arc::new(x.clone()))).vector("m", vec![0.0; 4]);
        assert_eq!(
            evaluate(Check::Duality, &zero, &cfg).unwrap(),
            Outcome::new(true, 0.0)
        );
        assert!(check_duality(&x, 50, &cfg).unwrap().passed);
        let exact = LabConfig { exact: true, ..cfg };
        let r = check_duality(&x, 20, &exact).unwrap();
        assert!(r.passed && r.max_residual == 0.0);
    }

    #[test]
    fn small_suites_pass() {
        let cfg = LabConfig {
            trials: Some(10),
            ..LabConfig::default()
        };
        for check in [Check::Duality, Check::Embedding] {
            let r = crate::lab::run(check, &cfg).unwrap();
            assert!(r.passed, "{r:?}");
        }
        let exact = LabConfig {
            exact: true,
            trials: Some(3),
            ..LabConfig::default()
        };
        for check in [Check::Duality, Check::Embedding] {
            let r = crate::lab::run(check, &exact).unwrap();
            assert!(r.passed && r.max_residual == 0.0, "{r:?}");
        }
    }
}

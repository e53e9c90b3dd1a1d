//! Checks on Lipschitz functions: the amalgam isometry, unit-ball
//! translation, lattice bounds, liminf recovery, rescaling, the ideal of a
//! ball and the slope inequality behind it.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lip::LipFunction;
use crate::metric::MetricSpace;
use crate::scalar::{Scalar, Tolerance};

use super::gen::{dyadic, dyadic_vec, grid_walk, random_space, LabRng};
use super::{
    eq_outcome, excess, le_outcome, Check, CheckResult, Instance, LabConfig, Outcome, Recorder,
};

// ---------------------------------------------------------------- evaluators

pub(super) fn amalgam<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let x = inst.get_space()?;
    let v = inst.get_vector("f")?.to_vec();
    let f = LipFunction::new(x.clone(), v.clone())?;
    let capped = LipFunction::new(Arc::new(x.truncate(&S::of_usize(2))?), v)?;
    let ext = f.extend_by_zero(&Arc::new(x.augment_base()?))?;
    let norm = capped.lip_norm();
    Ok(eq_outcome(tol, &norm, &ext.lipschitz_number()).and(eq_outcome(tol, &f.lip_norm(), &norm)))
}

/// Scales `f` into the unit ball of `norm`.
fn into_ball<S: Scalar>(f: LipFunction<S>, norm: impl Fn(&LipFunction<S>) -> S) -> LipFunction<S> {
    let n = norm(&f);
    if n > S::one() {
        f.scale(&(S::one() / n))
    } else {
        f
    }
}

fn min_value<S: Scalar>(f: &LipFunction<S>) -> S {
    f.values()
        .iter()
        .cloned()
        .reduce(S::min_of)
        .expect("spaces are nonempty")
}

/// Direction 1: `f >= 0` in the `Lip` unit ball has `f - 1` in the unit
/// ball. Direction 2: `g` and `g + 1` both in the unit ball forces
/// `g + 1 >= 0`.
pub(super) fn ball_translation<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let x = inst.get_space()?;
    let raw = inst.get_vector("f")?.to_vec();
    let one = S::one();
    match inst.index("direction")? {
        1 => {
            let abs = raw.into_iter().map(|v| v.abs()).collect();
            let f = into_ball(LipFunction::new(x.clone(), abs)?, LipFunction::lip_norm);
            Ok(le_outcome(tol, &f.shift(&-one.clone()).lip_norm(), &one))
        }
        2 => {
            let g = into_ball(LipFunction::new(x.clone(), raw)?, LipFunction::lip_norm);
            let lifted = g.shift(&one);
            if !tol.le(&lifted.lip_norm(), &one) {
                return Ok(Outcome::new(true, 0.0));
            }
            Ok(le_outcome(tol, &S::zero(), &min_value(&lifted)))
        }
        d => Err(Error::MalformedCase(format!("direction {d}"))),
    }
}

pub(super) fn lattice<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let x = inst.get_space()?;
    let f = LipFunction::new(x.clone(), inst.get_vector("f")?.to_vec())?;
    let g = LipFunction::new(x.clone(), inst.get_vector("g")?.to_vec())?;
    let bound = S::max_of(f.lipschitz_number(), g.lipschitz_number());
    Ok(
        le_outcome(tol, &f.join(&g)?.lipschitz_number(), &bound).and(le_outcome(
            tol,
            &f.meet(&g)?.lipschitz_number(),
            &bound,
        )),
    )
}

fn max_gap<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .fold(S::zero(), S::max_of)
}

/// `kind` 0: arbitrary prefix then a constant tail equal to `target`;
/// 1: `target` plus perturbations of shrinking amplitude; 2: a monotone
/// increasing sequence.
pub(super) fn liminf<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let x = inst.get_space()?;
    let n = x.len();
    let target = inst.get_vector("target")?;
    let flat = inst.get_vector("sequence")?;
    if flat.is_empty() || flat.len() % n != 0 {
        return Err(Error::MalformedCase(format!(
            "sequence length {} for {n} points",
            flat.len()
        )));
    }
    let seq = flat
        .chunks(n)
        .map(|c| LipFunction::new(x.clone(), c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let lim = LipFunction::liminf_limit(&seq)?;
    let last = seq.last().expect("nonempty").values();
    let exact = |reference: &[S]| {
        let gap = max_gap(lim.values(), reference);
        Outcome::new(lim.values() == reference, gap.as_f64())
    };
    match inst.index("kind")? {
        0 => Ok(exact(target)),
        1 => Ok(le_outcome(
            tol,
            &max_gap(lim.values(), target),
            &max_gap(last, target),
        )),
        2 => {
            let monotone = seq
                .windows(2)
                .all(|w| w[0].values().iter().zip(w[1].values()).all(|(a, b)| a <= b));
            if !monotone {
                return Err(Error::MalformedCase("sequence is not increasing".into()));
            }
            Ok(exact(last))
        }
        k => Err(Error::MalformedCase(format!("kind {k}"))),
    }
}

/// `L` over the space rescaled by `r` is `L(f) / r`, and once every base
/// distance is at most 1 the sup norm is bounded by `L`. With
/// `inverse_diameter` set, `r` is `1 / diameter`.
pub(super) fn rescale<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let x = inst.get_space()?;
    let b = x.require_base()?;
    let r = if inst.flag("inverse_diameter") {
        S::one() / x.diameter()
    } else {
        inst.get_param("r")?.clone()
    };
    let v = inst.get_vector("f")?.to_vec();
    if !v[b].is_zero() {
        return Err(Error::MalformedCase(
            "f does not vanish at the base point".into(),
        ));
    }
    let l = LipFunction::new(x.clone(), v.clone())?.lipschitz_number();
    let xr = Arc::new(x.rescale(&r)?);
    let fr = LipFunction::new(xr.clone(), v)?;
    let lr = fr.lipschitz_number();
    let mut out = eq_outcome(tol, &lr, &(l / r));
    if (0..xr.len()).all(|p| tol.le(xr.d(p, b), &S::one())) {
        out = out.and(le_outcome(tol, &fr.sup_norm(), &lr));
    }
    Ok(out)
}

/// Radius `n` is the base distance of some point and some point lies
/// beyond it, so the ball boundary is attained and the ball is proper.
fn check_interior_radius<S: Scalar>(x: &MetricSpace<S>, n: &S, tol: &Tolerance) -> Result<()> {
    let b = x.require_base()?;
    let attained = (0..x.len()).any(|p| p != b && tol.eq(x.d(p, b), n));
    let beyond = (0..x.len()).any(|p| tol.lt(n, x.d(p, b)));
    if attained && beyond {
        return Ok(());
    }
    let spacing = (0..x.len())
        .filter(|&p| p != b)
        .map(|p| x.d(p, b).as_f64())
        .fold(f64::INFINITY, f64::min);
    let length = (0..x.len()).map(|p| x.d(p, b).as_f64()).fold(0.0, f64::max);
    Err(Error::NotInteriorGridPoint {
        radius: n.as_f64(),
        length,
        spacing,
    })
}

/// For `f` scaled into the `Lip0` unit ball and `h = min(d(., e), n)`:
/// with `equivalence` set, `f` vanishes on the closed `n`-ball exactly when
/// `L(f + h) <= 1` and `L(f - h) <= 1`. Without it only the direction
/// "both bounds imply vanishing" is asserted, which holds on every pointed
/// space.
pub(super) fn ideal<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let x = inst.get_space()?;
    let b = x.require_base()?;
    let n = inst.get_param("radius")?;
    let equivalence = inst.flag("equivalence");
    if equivalence {
        check_interior_radius(x, n, tol)?;
    }
    let raw = inst.get_vector("f")?.to_vec();
    if !raw[b].is_zero() {
        return Err(Error::MalformedCase(
            "f does not vanish at the base point".into(),
        ));
    }
    let f = into_ball(
        LipFunction::new(x.clone(), raw)?,
        LipFunction::lipschitz_number,
    );
    let (_, ball) = x.closed_ball(n, tol)?;
    let member = f.ideal_membership(&ball, tol)?;
    let h = LipFunction::h_function(x, n)?;
    let worst = S::max_of(f.add(&h)?.lipschitz_number(), f.sub(&h)?.lipschitz_number());
    let bounded = tol.le(&worst, &S::one());
    let passed = if equivalence {
        member == bounded
    } else {
        member || !bounded
    };
    let residual = match (passed, member) {
        (true, _) => 0.0,
        (false, true) => excess(&worst, &S::one()),
        (false, false) => ball
            .iter()
            .map(|&p| f.value(p).abs().as_f64())
            .fold(0.0, f64::max),
    };
    Ok(Outcome::new(passed, residual))
}

/// `(b + d) / (a + c) <= max(b / a, d / c)`, with equality asserted when
/// `balanced` is set.
pub(super) fn elementary<S: Scalar>(inst: &Instance<S>, tol: &Tolerance) -> Result<Outcome> {
    let [a, b, c, d] = ["a", "b", "c", "d"].map(|k| inst.get_param(k).cloned());
    let (a, b, c, d) = (a?, b?, c?, d?);
    if !a.is_pos() || !c.is_pos() || b.is_neg() || d.is_neg() {
        return Err(Error::MalformedCase("need a, c > 0 and b, d >= 0".into()));
    }
    let lhs = (b.clone() + d.clone()) / (a.clone() + c.clone());
    let rhs = S::max_of(b / a, d / c);
    let out = le_outcome(tol, &lhs, &rhs);
    Ok(if inst.flag("balanced") {
        out.and(eq_outcome(tol, &lhs, &rhs))
    } else {
        out
    })
}

// ---------------------------------------------------------------- generators

fn small_space(rng: &mut LabRng, pointed: bool) -> Arc<MetricSpace> {
    Arc::new(random_space(rng, 2..=10, pointed))
}

fn require_unpointed(x: &MetricSpace) -> Result<()> {
    if x.is_pointed() {
        return Err(Error::AlreadyPointed);
    }
    Ok(())
}

fn amalgam_trials(rec: &mut Recorder, rng: &mut LabRng, x: &Arc<MetricSpace>, trials: usize) {
    for _ in 0..trials {
        let f = dyadic_vec(rng, x.len(), -3.0, 3.0);
        rec.record(&Instance::new(Some(x.clone())).vector("f", f));
    }
}

pub(super) fn amalgam_suite(rng: &mut LabRng, trials: usize, cfg: &LabConfig) -> CheckResult {
    let mut rec = Recorder::new(Check::Amalgam, cfg);
    let pair = Arc::new(
        MetricSpace::new(
            vec!["p".into(), "q".into()],
            vec![vec![0.0, 5.0], vec![5.0, 0.0]],
            None,
        )
        .unwrap(),
    );
    rec.record(&Instance::new(Some(pair.clone())).vector("f", vec![3.0, 0.0]));
    rec.record(&Instance::new(Some(pair)).vector("f", vec![-1.5, -1.5]));
    for _ in 0..trials {
        let x = small_space(rng, false);
        amalgam_trials(&mut rec, rng, &x, 1);
    }
    rec.finish()
}

/// Random functions on a fixed unpointed space.
pub fn check_amalgam_isometry(
    x: &MetricSpace,
    trials: usize,
    cfg: &LabConfig,
) -> Result<CheckResult> {
    require_unpointed(x)?;
    let mut rec = Recorder::new(Check::Amalgam, cfg);
    amalgam_trials(
        &mut rec,
        &mut cfg.rng(Check::Amalgam),
        &Arc::new(x.clone()),
        trials,
    );
    Ok(rec.finish())
}

fn ball_trials(rec: &mut Recorder, rng: &mut LabRng, x: &Arc<MetricSpace>, trials: usize) {
    let n = x.len();
    for _ in 0..trials {
        let inst = if rng.gen_bool(0.5) {
            Instance::new(Some(x.clone()))
                .vector("f", dyadic_vec(rng, n, 0.0, 3.0))
                .param("direction", 1.0)
        } else {
            Instance::new(Some(x.clone()))
                .vector("f", dyadic_vec(rng, n, -1.25, 0.25))
                .param("direction", 2.0)
        };
        rec.record(&inst);
    }
}

pub(super) fn ball_suite(rng: &mut LabRng, trials: usize, cfg: &LabConfig) -> CheckResult {
    let mut rec = Recorder::new(Check::BallTranslation, cfg);
    let x = small_space(rng, false);
    for c in [1.0, 0.0] {
        rec.record(
            &Instance::new(Some(x.clone()))
                .vector("f", vec![c; x.len()])
                .param("direction", 1.0),
        );
    }
    for _ in 0..trials {
        let x = small_space(rng, false);
        ball_trials(&mut rec, rng, &x, 1);
    }
    rec.finish()
}

pub fn check_ball_translation(
    x: &MetricSpace,
    trials: usize,
    cfg: &LabConfig,
) -> Result<CheckResult> {
    let mut rec = Recorder::new(Check::BallTranslation, cfg);
    ball_trials(
        &mut rec,
        &mut cfg.rng(Check::BallTranslation),
        &Arc::new(x.clone()),
        trials,
    );
    Ok(rec.finish())
}

fn lattice_trials(rec: &mut Recorder, rng: &mut LabRng, x: &Arc<MetricSpace>, trials: usize) {
    for _ in 0..trials {
        let f = dyadic_vec(rng, x.len(), -4.0, 4.0);
        let g = dyadic_vec(rng, x.len(), -4.0, 4.0);
        rec.record(&Instance::new(Some(x.clone())).vector("f", f).vector("g", g));
    }
}

pub(super) fn lattice_suite(rng: &mut LabRng, trials: usize, cfg: &LabConfig) -> CheckResult {
    let mut rec = Recorder::new(Check::Lattice, cfg);
    for _ in 0..trials {
        let x = small_space(rng, false);
        lattice_trials(&mut rec, rng, &x, 1);
    }
    rec.finish()
}

pub fn check_lattice_bound(x: &MetricSpace, trials: usize, cfg: &LabConfig) -> Result<CheckResult> {
    let mut rec = Recorder::new(Check::Lattice, cfg);
    lattice_trials(
        &mut rec,
        &mut cfg.rng(Check::Lattice),
        &Arc::new(x.clone()),
        trials,
    );
    Ok(rec.finish())
}

const LIMINF_TERMS: usize = 50;

fn liminf_instance(rng: &mut LabRng, x: &Arc<MetricSpace>, kind: usize) -> Instance {
    let n = x.len();
    let target = dyadic_vec(rng, n, -3.0, 3.0);
    let mut seq = Vec::new();
    match kind {
        0 => {
            let prefix = rng.gen_range(0..=10);
            let tail = rng.gen_range(1..=10);
            for _ in 0..prefix {
                seq.extend(dyadic_vec(rng, n, -5.0, 5.0));
            }
            for _ in 0..tail {
                seq.extend_from_slice(&target);
            }
        }
        1 => {
            for k in 1..=LIMINF_TERMS {
                seq.extend(target.iter().map(|t| t + dyadic(rng, -1.0, 1.0) / k as f64));
            }
        }
        _ => {
            let step = dyadic_vec(rng, n, 0.0, 1.0);
            for k in 1..=LIMINF_TERMS {
                let remaining = (LIMINF_TERMS - k) as f64;
                seq.extend(target.iter().zip(&step).map(|(t, s)| t - remaining * s));
            }
        }
    }
    Instance::new(Some(x.clone()))
        .vector("target", target)
        .vector("sequence", seq)
        .param("kind", kind as f64)
}

fn liminf_trials(rec: &mut Recorder, rng: &mut LabRng, x: &Arc<MetricSpace>, trials: usize) {
    for t in 0..trials {
        rec.record(&liminf_instance(rng, x, t % 3));
    }
}

pub(super) fn liminf_suite(rng: &mut LabRng, trials: usize, cfg: &LabConfig) -> CheckResult {
    let mut rec = Recorder::new(Check::Liminf, cfg);
    for t in 0..trials {
        let x = Arc::new(random_space(rng, 1..=8, false));
        rec.record(&liminf_instance(rng, &x, t % 3));
    }
    rec.finish()
}

pub fn check_liminf_identity(
    x: &MetricSpace,
    trials: usize,
    cfg: &LabConfig,
) -> Result<CheckResult> {
    let mut rec = Recorder::new(Check::Liminf, cfg);
    liminf_trials(
        &mut rec,
        &mut cfg.rng(Check::Liminf),
        &Arc::new(x.clone()),
        trials,
    );
    Ok(rec.finish())
}

fn lip0_values(rng: &mut LabRng, x: &MetricSpace, lo: f64, hi: f64) -> Vec<f64> {
    let mut v = dyadic_vec(rng, x.len(), lo, hi);
    v[x.base().expect("pointed")] = 0.0;
    v
}

/// `r = None` rescales by `1 / diameter`.
fn rescale_instance(rng: &mut LabRng, x: &Arc<MetricSpace>, r: Option<f64>) -> Instance {
    let inst = Instance::new(Some(x.clone())).vector("f", lip0_values(rng, x, -5.0, 5.0));
    match r {
        Some(r) => inst.param("r", r),
        None => inst.param("inverse_diameter", 1.0),
    }
}

pub(super) fn rescale_suite(rng: &mut LabRng, trials: usize, cfg: &LabConfig) -> CheckResult {
    let mut rec = Recorder::new(Check::Rescale, cfg);
    for t in 0..trials {
        let x = small_space(rng, true);
        let r = match t % 4 {
            0 => Some(0.25),
            1 => None,
            2 => Some(1.0),
            _ => Some(dyadic(rng, 0.125, 8.0)),
        };
        rec.record(&rescale_instance(rng, &x, r));
    }
    rec.finish()
}

/// Random `Lip0` functions on a fixed pointed space; `r = None` means
/// `1 / diameter`.
pub fn check_rescale(
    x: &MetricSpace,
    r: Option<f64>,
    trials: usize,
    cfg: &LabConfig,
) -> Result<CheckResult> {
    x.require_base()?;
    if let Some(r) = r {
        if !(r > 0.0) {
            return Err(Error::NonPositive {
                what: "scale",
                value: r,
            });
        }
    }
    let mut rng = cfg.rng(Check::Rescale);
    let x = Arc::new(x.clone());
    let mut rec = Recorder::new(Check::Rescale, cfg);
    for _ in 0..trials {
        rec.record(&rescale_instance(&mut rng, &x, r));
    }
    Ok(rec.finish())
}

/// Grid lengths and spacings exercised by the ideal suite.
pub const IDEAL_GRIDS: [(f64, f64); 6] = [
    (3.0, 1.0),
    (3.0, 0.5),
    (4.0, 1.0),
    (4.0, 0.5),
    (8.0, 1.0),
    (8.0, 0.5),
];

/// Adversarial functions per grid configuration.
pub const IDEAL_ADVERSARIAL: usize = 100;

/// Number of non-convex spaces on which the convexity-free direction runs.
pub const IDEAL_NONCONVEX_SPACES: usize = 50;

/// Index of radius `n` on the grid `0, spacing, ..., length`, which must be
/// strictly inside.
fn interior_index(length: f64, spacing: f64, n: f64) -> Result<(MetricSpace, usize)> {
    let grid = MetricSpace::interval_grid(length, spacing)?;
    let k = (n / spacing).round();
    let err = Error::NotInteriorGridPoint {
        radius: n,
        length,
        spacing,
    };
    if !(n > 0.0) || k * spacing != n || k < 1.0 || k as usize + 1 >= grid.len() {
        return Err(err);
    }
    Ok((grid, k as usize))
}

fn ideal_grid_instance(grid: &Arc<MetricSpace>, n: f64, f: Vec<f64>) -> Instance {
    Instance::new(Some(grid.clone()))
        .vector("f", f)
        .param("radius", n)
        .param("equivalence", 1.0)
}

/// Adds a spike of `2^-e` with random sign at a random point of `1..=k`.
fn spike(rng: &mut LabRng, f: &mut [f64], k: usize) {
    let p = rng.gen_range(1..=k);
    let eps = 2f64.powi(-rng.gen_range(2..=16));
    f[p] += if rng.gen_bool(0.5) { eps } else { -eps };
}

fn ideal_grid_trials(
    rec: &mut Recorder,
    rng: &mut LabRng,
    length: f64,
    spacing: f64,
    n: f64,
    trials: usize,
) -> Result<()> {
    let (grid, k) = interior_index(length, spacing, n)?;
    let grid = Arc::new(grid);
    let len = grid.len();
    let dist: Vec<f64> = (0..len).map(|p| *grid.d(p, 0)).collect();
    let ramp: Vec<f64> = dist.iter().map(|d| (d - n).max(0.0)).collect();
    let h: Vec<f64> = dist.iter().map(|d| d.min(n)).collect();

    for t in 0..trials {
        let mut f = match t % 5 {
            0 | 1 => grid_walk(rng, &grid, 1),
            _ => grid_walk(rng, &grid, k + 1),
        };
        if t % 5 == 4 {
            spike(rng, &mut f, k);
        }
        rec.record(&ideal_grid_instance(&grid, n, f));
    }

    let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let mut fixed = vec![
        vec![0.0; len],
        h.clone(),
        neg(&h),
        ramp.clone(),
        neg(&ramp),
        ramp.iter().map(|x| x / 1024.0).collect(),
    ];
    let mut bump = vec![0.0; len];
    bump[1] = 0.1;
    fixed.push(bump);
    let mut edge = vec![0.0; len];
    edge[k] = 2f64.powi(-16);
    fixed.push(edge);
    for i in fixed.len()..IDEAL_ADVERSARIAL {
        // Members with the steepest admissible slopes outside the ball.
        let mut f = vec![0.0; len];
        for p in k + 1..len {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            f[p] = f[p - 1] + s * spacing;
        }
        if i % 2 == 1 {
            spike(rng, &mut f, k);
        }
        fixed.push(f);
    }
    for f in fixed {
        rec.record(&ideal_grid_instance(&grid, n, f));
    }
    Ok(())
}

fn ideal_nonconvex_trials(rec: &mut Recorder, rng: &mut LabRng, trials: usize) {
    let x = Arc::new(random_space(rng, 3..=10, true));
    let b = x.base().expect("pointed");
    let others: Vec<usize> = (0..x.len()).filter(|&p| p != b).collect();
    let far = others.iter().map(|&p| *x.d(p, b)).fold(0.0, f64::max);
    let n = if rng.gen_bool(0.5) {
        *x.d(*others.choose(rng).unwrap(), b)
    } else {
        dyadic(rng, 1.0 / 1024.0, far)
    };
    let inside: Vec<usize> = others
        .iter()
        .copied()
        .filter(|&p| *x.d(p, b) <= n)
        .collect();
    for t in 0..trials {
        let mut f = lip0_values(rng, &x, -2.0, 2.0);
        match t % 4 {
            0 => {}
            1 | 2 => {
                for &p in &inside {
                    f[p] = 0.0;
                }
                if t % 4 == 2 && !inside.is_empty() {
                    let p = *inside.choose(rng).unwrap();
                    f[p] = 2f64.powi(-rng.gen_range(2..=16))
                        * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                }
            }
            _ => {
                let c = dyadic(rng, -1.5, 1.5);
                f = (0..x.len()).map(|p| c * x.d(p, b).min(n)).collect();
            }
        }
        rec.record(
            &Instance::new(Some(x.clone()))
                .vector("f", f)
                .param("radius", n)
                .param("equivalence", 0.0),
        );
    }
}

pub(super) fn ideal_suite(rng: &mut LabRng, trials: usize, cfg: &LabConfig) -> Result<CheckResult> {
    let mut rec = Recorder::new(Check::Ideal, cfg);
    for (length, spacing) in IDEAL_GRIDS {
        let steps = (length / spacing) as usize;
        for k in 1..steps {
            ideal_grid_trials(&mut rec, rng, length, spacing, k as f64 * spacing, trials)?;
        }
    }
    let per_space = trials.div_ceil(IDEAL_NONCONVEX_SPACES).max(1);
    for _ in 0..IDEAL_NONCONVEX_SPACES {
        ideal_nonconvex_trials(&mut rec, rng, per_space);
    }
    Ok(rec.finish())
}

/// The ideal/three-ball equivalence on the grid `0, spacing, ..., length`
/// with radius `n`, which must be a grid point strictly inside. Runs
/// `trials` random unit-ball functions plus the adversarial set.
pub fn check_ideal_ball_identity(
    length: f64,
    spacing: f64,
    n: f64,
    trials: usize,
    cfg: &LabConfig,
) -> Result<CheckResult> {
    let mut rec = Recorder::new(Check::Ideal, cfg);
    ideal_grid_trials(
        &mut rec,
        &mut cfg.rng(Check::Ideal),
        length,
        spacing,
        n,
        trials,
    )?;
    Ok(rec.finish())
}

fn elementary_instance(a: f64, b: f64, c: f64, d: f64, balanced: bool) -> Instance {
    let inst = Instance::new(None)
        .param("a", a)
        .param("b", b)
        .param("c", c)
        .param("d", d);
    if balanced {
        inst.param("balanced", 1.0)
    } else {
        inst
    }
}

pub fn check_elementary_inequality(trials: usize, cfg: &LabConfig) -> CheckResult {
    let mut rng = cfg.rng(Check::Elementary);
    let mut rec = Recorder::new(Check::Elementary, cfg);
    rec.record(&elementary_instance(1.0, 1.0, 1.0, 1.0, true));
    rec.record(&elementary_instance(1.0, 0.0, 1.0, 2.0, false));
    for t in 0..trials {
        let a = dyadic(&mut rng, 1.0 / 1024.0, 10.0);
        let c = dyadic(&mut rng, 1.0 / 1024.0, 10.0);
        let inst = if t % 10 == 0 {
            let ratio = dyadic(&mut rng, 0.0, 4.0);
            elementary_instance(a, ratio * a, c, ratio * c, true)
        } else {
            elementary_instance(
                a,
                dyadic(&mut rng, 0.0, 10.0),
                c,
                dyadic(&mut rng, 0.0, 10.0),
                false,
            )
        };
        rec.record(&inst);
    }
    rec.finish()
}

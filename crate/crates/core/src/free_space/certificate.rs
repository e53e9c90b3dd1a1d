use serde::Serialize;

use crate::error::Result;
use crate::lip::same_space;
use crate::scalar::{Scalar, Tolerance};

use super::{ae_norm_dual, ae_norm_primal, DualCertificate, Molecule, TransportPlan};

/// The individual certificate checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateCheck {
    /// Flows are nonnegative and reproduce the molecule's marginals away
    /// from the base point.
    PlanFeasible,
    /// The plan's recorded cost is its actual cost and matches the value.
    PlanCost,
    /// The witness vanishes at the base point and has Lipschitz number <= 1.
    WitnessFeasible,
    /// The witness pairs with the molecule to the claimed dual value.
    WitnessValue,
    /// Weak duality holds and the primal/dual gap is within tolerance.
    DualityGap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub failures: Vec<CertificateCheck>,
    pub primal: f64,
    pub dual: f64,
    /// `primal - dual`, nonnegative up to round-off.
    pub gap: f64,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies a transportation plan (upper bound) and a dual witness (lower
/// bound) for `m`.
///
/// `tol` governs feasibility and consistency checks; `gap_tol` governs the
/// agreement of the two values.
pub fn check_certificates<S: Scalar>(
    m: &Molecule<S>,
    primal_value: &S,
    plan: &TransportPlan<S>,
    cert: &DualCertificate<S>,
    tol: &Tolerance,
    gap_tol: &Tolerance,
) -> CertificateReport {
    let space = m.space();
    let e = m.base();
    let m = m.canonical();
    let n = space.len();
    let mut failures = Vec::new();

    let shape_ok = plan.len() == n;
    let plan_ok = shape_ok
        && (0..n).all(|p| (0..n).all(|q| !plan.flow(p, q).is_neg()))
        && (0..n)
            .filter(|&p| p != e)
            .all(|p| tol.eq(&plan.net_outflow(p), m.coeff(p)));
    if !plan_ok {
        failures.push(CertificateCheck::PlanFeasible);
    }

    let actual_cost = if shape_ok {
        let mut c = S::zero();
        for p in 0..n {
            for q in 0..n {
                c = c + plan.flow(p, q).clone() * space.d(p, q).clone();
            }
        }
        Some(c)
    } else {
        None
    };
    let cost_ok = actual_cost
        .as_ref()
        .is_some_and(|c| tol.eq(c, &plan.cost) && tol.eq(c, primal_value));
    if !cost_ok {
        failures.push(CertificateCheck::PlanCost);
    }

    let witness = &cert.witness;
    let on_space = same_space(space, witness.space());
    let witness_ok =
        on_space && tol.is_zero(witness.value(e)) && tol.le(&witness.lipschitz_number(), &S::one());
    if !witness_ok {
        failures.push(CertificateCheck::WitnessFeasible);
    }

    let pairing = on_space.then(|| m.pairing(witness).ok()).flatten();
    let value_ok = pairing.as_ref().is_some_and(|v| tol.eq(v, &cert.value));
    if !value_ok {
        failures.push(CertificateCheck::WitnessValue);
    }

    let weak = pairing.as_ref().is_some_and(|v| gap_tol.le(v, &plan.cost));
    let gap_ok = gap_tol.eq(primal_value, &cert.value);
    if !(weak && gap_ok) {
        failures.push(CertificateCheck::DualityGap);
    }

    CertificateReport {
        failures,
        primal: primal_value.as_f64(),
        dual: cert.value.as_f64(),
        gap: (primal_value.clone() - cert.value.clone()).as_f64(),
    }
}

/// Both solvers' outputs for one molecule, already cross-checked.
#[derive(Debug, Clone)]
pub struct CertifiedNorm<S = f64> {
    pub primal: S,
    pub plan: TransportPlan<S>,
    pub dual: S,
    pub certificate: DualCertificate<S>,
    pub report: CertificateReport,
}

impl<S: Scalar> CertifiedNorm<S> {
    pub fn value(&self) -> &S {
        &self.primal
    }
}

/// Runs both norm solvers and checks their certificates against each other.
pub fn certified_norm<S: Scalar>(
    m: &Molecule<S>,
    tol: &Tolerance,
    gap_tol: &Tolerance,
) -> Result<CertifiedNorm<S>> {
    let (primal, plan) = ae_norm_primal(m)?;
    let (dual, certificate) = ae_norm_dual(m)?;
    let report = check_certificates(m, &primal, &plan, &certificate, tol, gap_tol);
    Ok(CertifiedNorm {
        primal,
        plan,
        dual,
        certificate,
        report,
    })
}

//! Finitely supported elements of the Arens-Eells space of a pointed
//! metric space, their pairing with Lipschitz functions, and the free-space
//! norm computed two independent ways:
//!
//! * [`ae_norm_dual`] maximizes the pairing over the `Lip0` unit ball with a
//!   dense simplex and returns the optimal function as a witness;
//! * [`ae_norm_primal`] solves the transportation problem from positive to
//!   negative mass with successive shortest paths and returns the plan.
//!
//! Each solver's output certifies a bound on the other's, and
//! [`check_certificates`] verifies both certificates and the gap.

mod certificate;
mod dual;
mod example;
pub mod simplex;
mod transport;

use std::sync::Arc;

pub use certificate::{
    certified_norm, check_certificates, CertificateCheck, CertificateReport, CertifiedNorm,
};
pub use dual::{ae_norm_dual, DualCertificate};
pub use example::{example_molecule, example_witness, EXAMPLE_MAX_N};
pub use transport::{ae_norm_primal, TransportPlan};

use crate::error::{Error, Result};
use crate::lip::{same_space, LipFunction};
use crate::metric::MetricSpace;
use crate::scalar::{Rational, Scalar};

/// `m = sum_p coeffs[p] delta_p` on a pointed space.
#[derive(Debug, Clone)]
pub struct Molecule<S = f64> {
    space: Arc<MetricSpace<S>>,
    coeffs: Vec<S>,
}

impl<S: Scalar> PartialEq for Molecule<S> {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> Molecule<S> {
    pub fn new(space: Arc<MetricSpace<S>>, coeffs: Vec<S>) -> Result<Self> {
        space.require_base()?;
        if coeffs.len() != space.len() {
            return Err(Error::ShapeMismatch {
                expected: space.len(),
                actual: coeffs.len(),
            });
        }
        if !S::EXACT {
            if let Some(i) = coeffs.iter().position(|v| !v.as_f64().is_finite()) {
                return Err(Error::NonFiniteValue(i));
            }
        }
        Ok(Self { space, coeffs })
    }

    pub fn zero(space: Arc<MetricSpace<S>>) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![S::zero(); n])
    }

    /// The point evaluation `delta_p`.
    pub fn delta(space: Arc<MetricSpace<S>>, p: usize) -> Result<Self> {
        if p >= space.len() {
            return Err(Error::IndexOutOfRange(p));
        }
        let mut m = Self::zero(space)?;
        m.coeffs[p] = S::one();
        Ok(m)
    }

    /// `delta_p - delta_q`.
    pub fn dipole(space: Arc<MetricSpace<S>>, p: usize, q: usize) -> Result<Self> {
        let mut m = Self::delta(space, p)?;
        if q >= m.coeffs.len() {
            return Err(Error::IndexOutOfRange(q));
        }
        m.coeffs[q] = m.coeffs[q].clone() - S::one();
        Ok(m)
    }

    pub fn space(&self) -> &Arc<MetricSpace<S>> {
        &self.space
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn base(&self) -> usize {
        self.space.base().expect("molecules live on pointed spaces")
    }

    /// Zeroes the base-point coefficient: `delta_e` pairs to 0 with `Lip0`.
    pub fn canonical(&self) -> Self {
        let mut m = self.clone();
        m.coeffs[self.base()] = S::zero();
        m
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs[self.base()].is_zero()
    }

    /// `sum_p coeffs[p] f(p)`. `f` need not vanish at the base point.
    pub fn pairing(&self, f: &LipFunction<S>) -> Result<S> {
        if !same_space(&self.space, f.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(f.values())
            .fold(S::zero(), |acc, (a, v)| acc + a.clone() * v.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self {
            space: self.space.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, alpha: &S) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.clone() * alpha.clone())
            .collect();
        Self {
            space: self.space.clone(),
            coeffs,
        }
    }

    /// The coefficientwise-minimal nonnegative pair `(m+, m-)` with
    /// `m = m+ - m-`.
    pub fn minimal_positive_decomposition(&self) -> (Self, Self) {
        let pos = self
            .coeffs
            .iter()
            .map(|a| S::max_of(a.clone(), S::zero()))
            .collect();
        let neg = self
            .coeffs
            .iter()
            .map(|a| S::max_of(-a.clone(), S::zero()))
            .collect();
        (
            Self {
                space: self.space.clone(),
                coeffs: pos,
            },
            Self {
                space: self.space.clone(),
                coeffs: neg,
            },
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_neg())
    }
}

impl Molecule<f64> {
    pub fn to_exact(&self, space: &Arc<MetricSpace<Rational>>) -> Result<Molecule<Rational>> {
        if space.ids() != self.space.ids() {
            return Err(Error::SpaceMismatch);
        }
        Molecule::new(
            space.clone(),
            self.coeffs.iter().map(|v| Rational::of_f64(*v)).collect(),
        )
    }
}

/// The free-space norm of `m` (transportation value).
pub fn ae_norm<S: Scalar>(m: &Molecule<S>) -> Result<S> {
    Ok(ae_norm_primal(m)?.0)
}

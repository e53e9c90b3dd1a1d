use crate::error::{Error, Result};
use crate::lip::LipFunction;
use crate::scalar::Scalar;

use super::simplex;
use super::Molecule;

/// A function in the `Lip0` unit ball and its pairing with a molecule: a
/// lower bound on the molecule's norm.
#[derive(Debug, Clone)]
pub struct DualCertificate<S = f64> {
    pub witness: LipFunction<S>,
    pub value: S,
}

/// `sup { <m, f> : f(e) = 0, |f(p) - f(q)| <= d(p,q) }`, solved exactly as
/// a linear program with one pair of inequalities per unordered pair.
///
/// The program is posed in the shifted variables `g = f + d(., e)`, which
/// are nonnegative on the ball. The constraints become
/// `g(p) - g(q) <= d(p,q) + d(p,e) - d(q,e)` and `g(p) <= 2 d(p,e)`; every
/// right-hand side is nonnegative by the triangle inequality, so the origin
/// is a feasible starting vertex.
pub fn ae_norm_dual<S: Scalar>(m: &Molecule<S>) -> Result<(S, DualCertificate<S>)> {
    let space = m.space();
    let e = m.base();
    let m = m.canonical();
    let free: Vec<usize> = (0..space.len()).filter(|&i| i != e).collect();
    let k = free.len();
    let de: Vec<S> = free.iter().map(|&i| space.d(i, e).clone()).collect();

    let mut rows = Vec::with_capacity(k * k);
    let mut rhs = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let mut row = vec![S::zero(); k];
            row[a] = S::one();
            row[b] = -S::one();
            let bound = space.d(free[a], free[b]).clone() + de[a].clone() - de[b].clone();
            // Round-off can push a tight triangle just below zero.
            rows.push(row);
            rhs.push(S::max_of(bound, S::zero()));
        }
    }
    for a in 0..k {
        let mut row = vec![S::zero(); k];
        row[a] = S::one();
        rows.push(row);
        rhs.push(de[a].clone() + de[a].clone());
    }
    let c: Vec<S> = free.iter().map(|&i| m.coeff(i).clone()).collect();

    let sol = simplex::maximize(&c, &rows, &rhs).map_err(|err| Error::Solver(err.to_string()))?;

    let mut values = vec![S::zero(); space.len()];
    for (a, &i) in free.iter().enumerate() {
        values[i] = sol.x[a].clone() - de[a].clone();
    }
    let witness = LipFunction::new(space.clone(), values)?;
    let value = m.pairing(&witness)?;
    Ok((value.clone(), DualCertificate { witness, value }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::metric::MetricSpace;
    use crate::scalar::Rational;

    #[test]
    fn dipoles_and_deltas() {
        let s = Arc::new(
            MetricSpace::new(
                vec!["e".into(), "a".into(), "b".into()],
                vec![
                    vec![0.0, 1.0, 2.0],
                    vec![1.0, 0.0, 1.5],
                    vec![2.0, 1.5, 0.0],
                ],
                Some(0),
            )
            .unwrap(),
        );
        let (v, cert) = ae_norm_dual(&Molecule::dipole(s.clone(), 1, 2).unwrap()).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        assert!(cert.witness.lipschitz_number() <= 1.0 + 1e-12);
        assert_eq!(cert.witness.values()[0], 0.0);
        let (v, _) = ae_norm_dual(&Molecule::delta(s.clone(), 2).unwrap()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let (v, _) = ae_norm_dual(&Molecule::zero(s).unwrap()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn exact_mode_is_exact() {
        let s = MetricSpace::on_line(&[0.0, 0.25, 1.0, 1.5], Some(0)).unwrap();
        let s = Arc::new(s.to_exact());
        let q = |x: f64| Rational::of_f64(x);
        let m = Molecule::new(s, vec![q(0.0), q(1.0), q(-2.0), q(0.5)]).unwrap();
        let (v, _) = ae_norm_dual(&m).unwrap();
        // Mass +1 at 0.25, -2 at 1, +0.5 at 1.5; 0.5 unit comes from the base:
        // 0.75 + 0.5*0.5 + 0.5*1 = 1.5.
        assert_eq!(v, q(1.5));
    }
}

//! Real functions on a finite space and the Lipschitz-space structure on
//! them: Lipschitz number, sup norm, the `Lip` norm, the pointwise lattice,
//! extension by zero to the amalgam, base-point change, the liminf-style
//! combination of a sequence, the clipped distance function `h`, and the
//! ideal of functions vanishing on a subset.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::scalar::{Rational, Scalar, Tolerance};

/// One real value per point of a space.
///
/// Membership in `Lip0` (vanishing at the base point) is a checked
/// predicate, not a separate type, so one function can move between the
/// `Lip` and `Lip0` pictures.
#[derive(Debug, Clone)]
pub struct LipFunction<S = f64> {
    space: Arc<MetricSpace<S>>,
    values: Vec<S>,
}

impl<S: Scalar> PartialEq for LipFunction<S> {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.values == other.values
    }
}

pub(crate) fn same_space<S: Scalar>(a: &Arc<MetricSpace<S>>, b: &Arc<MetricSpace<S>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Largest slope `|f(p) - f(q)| / d(p,q)` and the pair attaining it.
/// Single-point spaces give 0 with no pair.
pub fn max_slope<S: Scalar>(space: &MetricSpace<S>, values: &[S]) -> (S, Option<(usize, usize)>) {
    let n = space.len();
    let mut best = S::zero();
    let mut arg = None;
    for p in 0..n {
        for q in p + 1..n {
            let slope = (values[p].clone() - values[q].clone()).abs() / space.d(p, q).clone();
            if arg.is_none() || slope > best {
                best = slope;
                arg = Some((p, q));
            }
        }
    }
    (best, arg)
}

impl<S: Scalar> LipFunction<S> {
    pub fn new(space: Arc<MetricSpace<S>>, values: Vec<S>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::ShapeMismatch {
                expected: space.len(),
                actual: values.len(),
            });
        }
        if !S::EXACT {
            if let Some(i) = values.iter().position(|v| !v.as_f64().is_finite()) {
                return Err(Error::NonFiniteValue(i));
            }
        }
        Ok(Self { space, values })
    }

    pub fn constant(space: Arc<MetricSpace<S>>, c: S) -> Self {
        let values = vec![c; space.len()];
        Self { space, values }
    }

    pub fn zero(space: Arc<MetricSpace<S>>) -> Self {
        Self::constant(space, S::zero())
    }

    /// The constant function `1_X`.
    pub fn one(space: Arc<MetricSpace<S>>) -> Self {
        Self::constant(space, S::one())
    }

    /// `1` off the base point and `0` at it: the unit of the amalgam.
    pub fn one_off_base(space: Arc<MetricSpace<S>>) -> Result<Self> {
        let b = space.require_base()?;
        let mut f = Self::one(space);
        f.values[b] = S::zero();
        Ok(f)
    }

    pub fn from_fn(space: Arc<MetricSpace<S>>, mut f: impl FnMut(usize) -> S) -> Self {
        let values = (0..space.len()).map(&mut f).collect();
        Self { space, values }
    }

    pub fn space(&self) -> &Arc<MetricSpace<S>> {
        &self.space
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &S {
        &self.values[i]
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// `L(f) = max |f(p) - f(q)| / d(p,q)` over distinct pairs; 0 on a
    /// single point.
    pub fn lipschitz_number(&self) -> S {
        max_slope(&self.space, &self.values).0
    }

    pub fn sup_norm(&self) -> S {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(S::zero(), S::max_of)
    }

    /// `max(L(f), ||f||_inf)`, the norm of `Lip(X)`.
    pub fn lip_norm(&self) -> S {
        S::max_of(self.lipschitz_number(), self.sup_norm())
    }

    pub fn in_lip0(&self, tol: &Tolerance) -> Result<bool> {
        let b = self.space.require_base()?;
        Ok(tol.is_zero(&self.values[b]))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&S, &S) -> S) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(a, b))
            .collect();
        Ok(Self {
            space: self.space.clone(),
            values,
        })
    }

    fn map(&self, op: impl Fn(&S) -> S) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(op).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, alpha: &S) -> Self {
        self.map(|v| v.clone() * alpha.clone())
    }

    /// Adds the constant `c` at every point.
    pub fn shift(&self, c: &S) -> Self {
        self.map(|v| v.clone() + c.clone())
    }

    pub fn clamp(&self, lo: &S, hi: &S) -> Self {
        self.map(|v| S::min_of(S::max_of(v.clone(), lo.clone()), hi.clone()))
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| S::max_of(a.clone(), b.clone()))
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| S::min_of(a.clone(), b.clone()))
    }

    pub fn family_join(family: &[Self]) -> Result<Self> {
        let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.join(f))
    }

    pub fn family_meet(family: &[Self]) -> Result<Self> {
        let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.meet(f))
    }

    /// Extends a function on unpointed `X` to the amalgam `Y` built by
    /// [`MetricSpace::augment_base`], setting it to 0 at the new base point.
    pub fn extend_by_zero(&self, amalgam: &Arc<MetricSpace<S>>) -> Result<Self> {
        if self.space.is_pointed() {
            return Err(Error::AlreadyPointed);
        }
        if **amalgam != self.space.augment_base()? {
            return Err(Error::SpaceMismatch);
        }
        let mut values = self.values.clone();
        values.push(S::zero());
        Ok(Self {
            space: amalgam.clone(),
            values,
        })
    }

    /// Restriction to a subspace, where `map[i]` is the index in this
    /// function's space of the subspace's point `i`.
    pub fn restrict(&self, sub: &Arc<MetricSpace<S>>, map: &[usize]) -> Result<Self> {
        if map.len() != sub.len() {
            return Err(Error::ShapeMismatch {
                expected: sub.len(),
                actual: map.len(),
            });
        }
        let mut values = Vec::with_capacity(map.len());
        for (i, &j) in map.iter().enumerate() {
            if j >= self.space.len() || sub.id(i) != self.space.id(j) {
                return Err(Error::SpaceMismatch);
            }
            values.push(self.values[j].clone());
        }
        Ok(Self {
            space: sub.clone(),
            values,
        })
    }

    /// `f - f(p) 1_X`, which vanishes at `p` and has the same Lipschitz
    /// number.
    pub fn rebase(&self, point: usize) -> Result<Self> {
        self.space.require_base()?;
        let shift = self
            .values
            .get(point)
            .ok_or(Error::IndexOutOfRange(point))?
            .clone();
        Ok(self.map(|v| v.clone() - shift.clone()))
    }

    /// `max_n min_{k >= n} f_k`, the finite form of recovering a pointwise
    /// limit from the lattice operations.
    pub fn liminf_limit(seq: &[Self]) -> Result<Self> {
        let last = seq.last().ok_or(Error::EmptyFamily)?;
        for f in seq {
            last.check_same(f)?;
        }
        // Walk backwards keeping the running tail minimum.
        let mut tail_min = last.values.clone();
        let mut result = tail_min.clone();
        for f in seq.iter().rev().skip(1) {
            for (i, v) in f.values.iter().enumerate() {
                if *v < tail_min[i] {
                    tail_min[i] = v.clone();
                }
                if tail_min[i] > result[i] {
                    result[i] = tail_min[i].clone();
                }
            }
        }
        Ok(Self {
            space: last.space.clone(),
            values: result,
        })
    }

    /// `h(p) = min(d(p,e), n)`.
    pub fn h_function(space: &Arc<MetricSpace<S>>, radius: &S) -> Result<Self> {
        if !radius.is_pos() {
            return Err(Error::NonPositive {
                what: "radius",
                value: radius.as_f64(),
            });
        }
        let b = space.require_base()?;
        Ok(Self::from_fn(space.clone(), |p| {
            S::min_of(space.d(p, b).clone(), radius.clone())
        }))
    }

    /// Whether `f` vanishes on `subset` (absolute tolerance). The subset
    /// must contain the base point.
    pub fn ideal_membership(&self, subset: &[usize], tol: &Tolerance) -> Result<bool> {
        let b = self.space.require_base()?;
        if !subset.contains(&b) {
            return Err(Error::SubsetMissingBase);
        }
        for &i in subset {
            let v = self.values.get(i).ok_or(Error::IndexOutOfRange(i))?;
            if !tol.is_zero(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// McShane extension `p -> min_q f(q) + L d(p,q)` of values prescribed on
    /// a subset. Agrees with the data when `lipschitz` bounds their slopes.
    pub fn mcshane_extension(
        space: &Arc<MetricSpace<S>>,
        known: &[(usize, S)],
        lipschitz: &S,
    ) -> Result<Self> {
        if known.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if let Some(&(i, _)) = known.iter().find(|(i, _)| *i >= space.len()) {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(Self::from_fn(space.clone(), |p| {
            known
                .iter()
                .map(|(q, v)| v.clone() + lipschitz.clone() * space.d(p, *q).clone())
                .reduce(S::min_of)
                .expect("nonempty")
        }))
    }
}

impl LipFunction<f64> {
    /// Lifts the values exactly onto an exact copy of the space.
    pub fn to_exact(&self, space: &Arc<MetricSpace<Rational>>) -> Result<LipFunction<Rational>> {
        if space.ids() != self.space.ids() {
            return Err(Error::SpaceMismatch);
        }
        LipFunction::new(
            space.clone(),
            self.values.iter().map(|v| Rational::of_f64(*v)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(coords: &[f64]) -> Arc<MetricSpace> {
        Arc::new(MetricSpace::on_line(coords, Some(0)).unwrap())
    }

    fn func(space: &Arc<MetricSpace>, v: &[f64]) -> LipFunction {
        LipFunction::new(space.clone(), v.to_vec()).unwrap()
    }

    #[test]
    fn lipschitz_numbers() {
        let s = line(&[0.0, 1.0, 2.5]);
        assert_eq!(
            LipFunction::constant(s.clone(), 7.0).lipschitz_number(),
            0.0
        );
        let two = line(&[0.0, 1.0]);
        assert_eq!(func(&two, &[0.0, 3.0]).lipschitz_number(), 3.0);
        let g = line(&[0.0, 0.5, 1.0]);
        assert_eq!(func(&g, &[0.0, 0.0, 1.0]).lipschitz_number(), 2.0);
        let one = Arc::new(MetricSpace::new(vec!["a".into()], vec![vec![0.0]], None).unwrap());
        assert_eq!(func(&one, &[5.0]).lipschitz_number(), 0.0);
    }

    #[test]
    fn norms() {
        let s = line(&[0.0, 1.0, 2.0]);
        assert_eq!(func(&s, &[0.0, 3.0, -4.0]).sup_norm(), 4.0);
        assert_eq!(LipFunction::zero(s.clone()).sup_norm(), 0.0);
        assert_eq!(LipFunction::one(s.clone()).sup_norm(), 1.0);
        assert_eq!(LipFunction::one(s.clone()).lip_norm(), 1.0);

        let far = line(&[0.0, 5.0]);
        assert_eq!(func(&far, &[3.0, 0.0]).lip_norm(), 3.0);
        let g = line(&[0.0, 0.5, 1.0]);
        assert_eq!(func(&g, &[0.0, 0.0, 1.0]).lip_norm(), 2.0);
    }

    #[test]
    fn shape_and_space_errors() {
        let s = line(&[0.0, 1.0]);
        assert!(matches!(
            LipFunction::new(s.clone(), vec![1.0]),
            Err(Error::ShapeMismatch {
                expected: 2,
                actual: 1
            })
        ));
        assert!(matches!(
            LipFunction::new(s.clone(), vec![1.0, f64::NAN]),
            Err(Error::NonFiniteValue(1))
        ));
        let t = line(&[0.0, 2.0]);
        let err = func(&s, &[0.0, 1.0])
            .join(&func(&t, &[0.0, 1.0]))
            .unwrap_err();
        assert!(matches!(err, Error::SpaceMismatch));
        assert!(matches!(
            LipFunction::<f64>::family_join(&[]),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    fn lattice() {
        let s = line(&[0.0, 1.0, 2.0]);
        let f = func(&s, &[0.0, -1.0, 2.0]);
        assert_eq!(f.join(&f).unwrap(), f);
        let neg = f.scale(&-1.0);
        assert_eq!(f.meet(&neg).unwrap().values(), &[0.0, -1.0, -2.0]);
        let g = func(&s, &[1.0, 1.0, 1.0]);
        let fam = LipFunction::family_join(&[f.clone(), g.clone(), neg.clone()]).unwrap();
        assert_eq!(fam.values(), &[1.0, 1.0, 2.0]);
        let fam = LipFunction::family_meet(&[f, g, neg]).unwrap();
        assert_eq!(fam.values(), &[0.0, -1.0, -2.0]);
    }

    #[test]
    fn extension_by_zero() {
        let x = Arc::new(MetricSpace::validate(&[vec![0.0, 5.0], vec![5.0, 0.0]]).unwrap());
        let y = Arc::new(x.augment_base().unwrap());
        let f = func(&x, &[3.0, 0.0]);
        let ext = f.extend_by_zero(&y).unwrap();
        assert_eq!(ext.values(), &[3.0, 0.0, 0.0]);
        assert!(ext.in_lip0(&Tolerance::default()).unwrap());
        assert_eq!(ext.lipschitz_number(), f.lip_norm());
        assert_eq!(
            LipFunction::zero(x.clone())
                .extend_by_zero(&y)
                .unwrap()
                .sup_norm(),
            0.0
        );

        let wrong = Arc::new(MetricSpace::validate(&[vec![0.0, 1.5], vec![1.5, 0.0]]).unwrap());
        let wrong_y = Arc::new(wrong.augment_base().unwrap());
        assert!(matches!(
            f.extend_by_zero(&wrong_y),
            Err(Error::SpaceMismatch)
        ));
    }

    #[test]
    fn rebasing() {
        let s = line(&[0.0, 1.0, 3.0]);
        let f = func(&s, &[0.0, 2.0, 1.0]);
        assert_eq!(f.rebase(0).unwrap(), f);
        let g = func(&s, &[1.0, 2.0, 3.0]);
        let r = g.rebase(1).unwrap();
        assert_eq!(r.values(), &[-1.0, 0.0, 1.0]);
        assert_eq!(r.lipschitz_number(), g.lipschitz_number());
        assert!(matches!(g.rebase(9), Err(Error::IndexOutOfRange(9))));
    }

    #[test]
    fn liminf_of_sequences() {
        let s = line(&[0.0, 1.0, 2.0]);
        let f = func(&s, &[0.0, 0.5, -0.5]);
        assert_eq!(
            LipFunction::liminf_limit(&[f.clone(), f.clone(), f.clone()]).unwrap(),
            f
        );

        let g = func(&s, &[0.0, 1.0, 0.0]);
        let h = func(&s, &[0.0, 0.0, 1.0]);
        let alt = vec![g.clone(), h.clone(), g.clone(), h.clone(), g, h.clone()];
        // Every tail contains h at its last index, so each tail minimum is <= h.
        assert_eq!(LipFunction::liminf_limit(&alt).unwrap(), h);

        let inc: Vec<_> = (0..5)
            .map(|k| func(&s, &[0.0, k as f64, 2.0 * k as f64]))
            .collect();
        assert_eq!(LipFunction::liminf_limit(&inc).unwrap(), inc[4]);
        assert!(LipFunction::<f64>::liminf_limit(&[]).is_err());
    }

    #[test]
    fn clipped_distance() {
        let g = Arc::new(MetricSpace::interval_grid(4.0, 1.0).unwrap());
        let h = LipFunction::h_function(&g, &2.0).unwrap();
        assert_eq!(h.values(), &[0.0, 1.0, 2.0, 2.0, 2.0]);
        assert_eq!(h.lipschitz_number(), 1.0);
        let h = LipFunction::h_function(&g, &10.0).unwrap();
        assert_eq!(h.values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(LipFunction::h_function(&g, &0.0).is_err());
    }

    #[test]
    fn ideal() {
        let g = Arc::new(MetricSpace::interval_grid(4.0, 1.0).unwrap());
        let tol = Tolerance::default();
        let (_, ball) = g.closed_ball(&2.0, &tol).unwrap();
        assert!(LipFunction::zero(g.clone())
            .ideal_membership(&ball, &tol)
            .unwrap());
        let h = LipFunction::h_function(&g, &2.0).unwrap();
        assert!(!h.ideal_membership(&ball, &tol).unwrap());
        let outside = func(&g, &[0.0, 0.0, 0.0, 0.5, 1.0]);
        assert!(outside.ideal_membership(&ball, &tol).unwrap());
        assert!(matches!(
            outside.ideal_membership(&[1, 2], &tol),
            Err(Error::SubsetMissingBase)
        ));
    }

    #[test]
    fn mcshane_reproduces_lipschitz_data() {
        let g = line(&[0.0, 1.0, 2.0, 3.0]);
        let ext = LipFunction::mcshane_extension(&g, &[(0, 0.0), (3, 1.5)], &1.0).unwrap();
        assert_eq!(ext.values(), &[0.0, 1.0, 2.0, 1.5]);
        assert!(ext.lipschitz_number() <= 1.0);
    }
}

//! Finite (pointed) metric spaces and the constructions built on them:
//! truncation, the base-point amalgam, rescaling, closed balls about the
//! base point, line grids and the convexity diagnostic.

use std::collections::HashSet;

use crate::error::{Error, MetricViolation, Result};
use crate::scalar::{Rational, Scalar, Tolerance};

/// Default cap on the number of points a space may carry.
pub const DEFAULT_MAX_POINTS: usize = 512;

/// Label given to the base point added by [`MetricSpace::augment_base`].
pub const BASE_LABEL: &str = "e";

/// A finite metric space with an optional base point.
///
/// Distances are stored densely, row-major. The base point is kept at a
/// stored index so that subspaces preserve point identity.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace<S = f64> {
    ids: Vec<String>,
    dist: Vec<S>,
    base: Option<usize>,
}

fn default_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

impl MetricSpace<f64> {
    /// Validates a raw distance matrix under the default tolerance policy.
    /// Points are labelled `p0, p1, ...` and the space is unpointed.
    pub fn validate(matrix: &[Vec<f64>]) -> Result<Self, MetricViolation> {
        let n = matrix.len();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(MetricViolation::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            for (j, v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MetricViolation::NonFinite { i: row, j });
                }
            }
        }
        let rows = matrix.to_vec();
        let dist = check_axioms(rows, &Tolerance::default())?;
        Ok(Self {
            ids: default_ids(n),
            dist,
            base: None,
        })
    }

    /// Points `0, spacing, 2 spacing, ..., length` on the line, based at 0.
    pub fn interval_grid(length: f64, spacing: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::NonPositive {
                what: "length",
                value: length,
            });
        }
        if !(spacing > 0.0) {
            return Err(Error::NonPositive {
                what: "spacing",
                value: spacing,
            });
        }
        let ratio = length / spacing;
        let steps = ratio.round();
        if steps < 1.0 || !Tolerance::default().eq(&ratio, &steps) {
            return Err(Error::NotDivisible { length, spacing });
        }
        let steps = steps as usize;
        if steps + 1 > DEFAULT_MAX_POINTS {
            return Err(Error::TooManyPoints {
                count: steps + 1,
                cap: DEFAULT_MAX_POINTS,
            });
        }
        let coords: Vec<f64> = (0..=steps).map(|k| k as f64 * spacing).collect();
        Self::on_line(&coords, Some(0))
    }

    /// Points at the given coordinates with the metric `|x - y|`.
    pub fn on_line(coords: &[f64], base: Option<usize>) -> Result<Self> {
        let rows: Vec<Vec<f64>> = coords
            .iter()
            .map(|x| coords.iter().map(|y| (x - y).abs()).collect())
            .collect();
        let ids = coords.iter().map(|x| format!("{x}")).collect();
        Self::new(ids, rows, base)
    }

    /// Lifts every distance to an exact rational.
    pub fn to_exact(&self) -> MetricSpace<Rational> {
        self.lift()
    }

    /// Copies the space into any scalar type. Lifting is exact, so the
    /// axioms need no re-check.
    pub fn lift<S: Scalar>(&self) -> MetricSpace<S> {
        MetricSpace {
            ids: self.ids.clone(),
            dist: self.dist.iter().map(|d| S::of_f64(*d)).collect(),
            base: self.base,
        }
    }
}

impl<S: Scalar> MetricSpace<S> {
    /// Builds a space from labels and a full distance matrix, re-verifying
    /// every axiom.
    pub fn new(ids: Vec<String>, rows: Vec<Vec<S>>, base: Option<usize>) -> Result<Self> {
        Self::with_policy(ids, rows, base, &Tolerance::default(), DEFAULT_MAX_POINTS)
    }

    pub fn with_policy(
        ids: Vec<String>,
        rows: Vec<Vec<S>>,
        base: Option<usize>,
        tol: &Tolerance,
        max_points: usize,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if n > max_points {
            return Err(Error::TooManyPoints {
                count: n,
                cap: max_points,
            });
        }
        if ids.len() != n {
            return Err(Error::LabelCount(ids.len(), n));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateLabel(id.clone()));
            }
        }
        if let Some(b) = base {
            if b >= n {
                return Err(Error::IndexOutOfRange(b));
            }
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MetricViolation::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                }
                .into());
            }
            for (j, v) in r.iter().enumerate() {
                if !S::EXACT && !v.as_f64().is_finite() {
                    return Err(MetricViolation::NonFinite { i: row, j }.into());
                }
            }
        }
        let dist = check_axioms(rows, tol)?;
        Ok(Self { ids, dist, base })
    }

    /// Assembles a space without re-checking axioms. Callers guarantee them.
    fn from_parts(ids: Vec<String>, dist: Vec<S>, base: Option<usize>) -> Self {
        debug_assert_eq!(dist.len(), ids.len() * ids.len());
        Self { ids, dist, base }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> &S {
        &self.dist[i * self.ids.len() + j]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn base(&self) -> Option<usize> {
        self.base
    }

    pub fn is_pointed(&self) -> bool {
        self.base.is_some()
    }

    pub fn require_base(&self) -> Result<usize> {
        self.base.ok_or(Error::Unpointed)
    }

    /// Distance to the base point.
    pub fn base_distance(&self, i: usize) -> Result<&S> {
        Ok(self.d(i, self.require_base()?))
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.dist.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    /// Same points and metric with the base point set (or cleared).
    pub fn with_base(&self, base: Option<usize>) -> Result<Self> {
        if let Some(b) = base {
            if b >= self.len() {
                return Err(Error::IndexOutOfRange(b));
            }
        }
        Ok(Self {
            base,
            ..self.clone()
        })
    }

    pub fn diameter(&self) -> S {
        self.dist.iter().cloned().fold(S::zero(), S::max_of)
    }

    /// `d'(p,q) = min(d(p,q), cap)`. The result is again a metric.
    pub fn truncate(&self, cap: &S) -> Result<Self> {
        if !cap.is_pos() {
            return Err(Error::NonPositive {
                what: "cap",
                value: cap.as_f64(),
            });
        }
        let dist = self
            .dist
            .iter()
            .map(|d| S::min_of(d.clone(), cap.clone()))
            .collect();
        Ok(Self::from_parts(self.ids.clone(), dist, self.base))
    }

    /// The amalgam `X ∪ {e}`: distances among old points truncated at 2 and
    /// every old point at distance exactly 1 from the new base point `e`,
    /// which is appended last.
    pub fn augment_base(&self) -> Result<Self> {
        if self.is_pointed() {
            return Err(Error::AlreadyPointed);
        }
        let two = S::one() + S::one();
        let n = self.len();
        let m = n + 1;
        let mut dist = vec![S::zero(); m * m];
        for i in 0..n {
            for j in 0..n {
                dist[i * m + j] = S::min_of(self.d(i, j).clone(), two.clone());
            }
            dist[i * m + n] = S::one();
            dist[n * m + i] = S::one();
        }
        let mut ids = self.ids.clone();
        let mut label = BASE_LABEL.to_string();
        while ids.contains(&label) {
            label.push('\'');
        }
        ids.push(label);
        Ok(Self::from_parts(ids, dist, Some(n)))
    }

    /// Multiplies every distance by `r > 0`, keeping the base point.
    pub fn rescale(&self, r: &S) -> Result<Self> {
        if !r.is_pos() {
            return Err(Error::NonPositive {
                what: "scale",
                value: r.as_f64(),
            });
        }
        let dist = self.dist.iter().map(|d| d.clone() * r.clone()).collect();
        Ok(Self::from_parts(self.ids.clone(), dist, self.base))
    }

    /// Restriction of the metric to `indices`, in the given order. The base
    /// point survives if it is among them.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::new();
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange(i));
            }
            if !seen.insert(i) {
                return Err(Error::DuplicateLabel(self.ids[i].clone()));
            }
        }
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        let dist = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.d(i, j).clone())
            .collect();
        let base = self.base.and_then(|b| indices.iter().position(|&i| i == b));
        Ok(Self::from_parts(ids, dist, base))
    }

    /// The closed ball `{p : d(p,e) <= radius}` as a pointed subspace,
    /// with the map from subspace indices back into `self`.
    pub fn closed_ball(&self, radius: &S, tol: &Tolerance) -> Result<(Self, Vec<usize>)> {
        let b = self.require_base()?;
        let members: Vec<usize> = (0..self.len())
            .filter(|&i| i == b || tol.le(self.d(i, b), radius))
            .collect();
        let ball = self.subspace(&members)?;
        Ok((ball, members))
    }

    /// Worst failure of metric convexity over all pairs: the largest, over
    /// distinct `(p,q)`, of the smallest detour `d(p,r) + d(r,q) - d(p,q)`
    /// through a third point `r`. Zero means every pair has an exact
    /// in-between point.
    pub fn convexity_defect(&self) -> Result<ConvexityDefect<S>> {
        self.defect_over_pairs(|_, _| true)
    }

    /// [`convexity_defect`](Self::convexity_defect) restricted to pairs more
    /// than `scale` apart. A finite space always fails convexity at its
    /// closest pairs; a line grid at its own spacing has defect 0.
    pub fn convexity_defect_beyond(
        &self,
        scale: &S,
        tol: &Tolerance,
    ) -> Result<ConvexityDefect<S>> {
        self.defect_over_pairs(|p, q| tol.lt(scale, self.d(p, q)))
    }

    fn defect_over_pairs(
        &self,
        include: impl Fn(usize, usize) -> bool,
    ) -> Result<ConvexityDefect<S>> {
        let n = self.len();
        if n < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                actual: n,
            });
        }
        if n == 2 {
            return Ok(ConvexityDefect {
                defect: None,
                worst_pair: Some((0, 1)),
            });
        }
        let mut worst: Option<(S, (usize, usize))> = None;
        for p in 0..n {
            for q in p + 1..n {
                if !include(p, q) {
                    continue;
                }
                let best = (0..n)
                    .filter(|&r| r != p && r != q)
                    .map(|r| self.d(p, r).clone() + self.d(r, q).clone() - self.d(p, q).clone())
                    .reduce(S::min_of)
                    .expect("at least one candidate");
                if worst.as_ref().is_none_or(|(w, _)| best > *w) {
                    worst = Some((best, (p, q)));
                }
            }
        }
        Ok(match worst {
            Some((defect, pair)) => ConvexityDefect {
                defect: Some(defect),
                worst_pair: Some(pair),
            },
            None => ConvexityDefect {
                defect: Some(S::zero()),
                worst_pair: None,
            },
        })
    }

    /// Converts to any other scalar type through `f64`.
    pub fn to_f64(&self) -> MetricSpace<f64> {
        MetricSpace {
            ids: self.ids.clone(),
            dist: self.dist.iter().map(Scalar::as_f64).collect(),
            base: self.base,
        }
    }
}

/// Result of [`MetricSpace::convexity_defect`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityDefect<S> {
    /// `None` on two-point spaces, where no third point can witness anything.
    pub defect: Option<S>,
    /// `None` when no pair was examined.
    pub worst_pair: Option<(usize, usize)>,
}

impl<S: Scalar> ConvexityDefect<S> {
    /// The defect with `+inf` standing in for "no witness possible".
    pub fn value(&self) -> f64 {
        self.defect.as_ref().map_or(f64::INFINITY, Scalar::as_f64)
    }
}

fn check_axioms<S: Scalar>(rows: Vec<Vec<S>>, tol: &Tolerance) -> Result<Vec<S>, MetricViolation> {
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            if v.is_neg() {
                return Err(MetricViolation::Negative {
                    i,
                    j,
                    value: v.as_f64(),
                });
            }
        }
    }
    for (i, r) in rows.iter().enumerate() {
        if !r[i].is_zero() {
            return Err(MetricViolation::NonzeroDiagonal {
                i,
                value: r[i].as_f64(),
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !tol.eq(&rows[i][j], &rows[j][i]) {
                return Err(MetricViolation::Asymmetric {
                    i,
                    j,
                    forward: rows[i][j].as_f64(),
                    backward: rows[j][i].as_f64(),
                });
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i][j].is_zero() {
                return Err(MetricViolation::ZeroDistance { i, j });
            }
        }
    }
    // Mirror the upper triangle so tolerated asymmetry never leaks downstream.
    let mut dist = vec![S::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = if i <= j {
                rows[i][j].clone()
            } else {
                rows[j][i].clone()
            };
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            let direct = &dist[i * n + k];
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let via = dist[i * n + j].clone() + dist[j * n + k].clone();
                if !tol.le(direct, &via) {
                    return Err(MetricViolation::Triangle {
                        i,
                        j,
                        k,
                        direct: direct.as_f64(),
                        via: via.as_f64(),
                    });
                }
            }
        }
    }
    Ok(dist)
}

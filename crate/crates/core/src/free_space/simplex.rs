//! Dense tableau simplex for `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`.
//!
//! The slack basis is feasible because `b >= 0`, so no phase one is needed.
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving basic variable among ratio ties), which cannot cycle and makes the
//! optimal vertex a deterministic function of the input.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexError {
    Shape(String),
    NegativeRhs(usize),
    Unbounded(usize),
    PivotLimit(usize),
}

impl std::fmt::Display for SimplexError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimplexError::Shape(s) => write!(f, "malformed program: {s}"),
            SimplexError::NegativeRhs(i) => write!(f, "row {i} has a negative right-hand side"),
            SimplexError::Unbounded(j) => write!(f, "objective unbounded along column {j}"),
            SimplexError::PivotLimit(k) => write!(f, "no optimum after {k} pivots"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub value: S,
    pub x: Vec<S>,
    pub pivots: usize,
}

const MAX_PIVOTS: usize = 200_000;

/// Maximizes `c.x` over `{x >= 0 : A x <= b}`.
pub fn maximize<S: Scalar>(c: &[S], a: &[Vec<S>], b: &[S]) -> Result<LpSolution<S>, SimplexError> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(SimplexError::Shape(format!(
            "{m} rows but {} right-hand sides",
            b.len()
        )));
    }
    if let Some(i) = a.iter().position(|row| row.len() != n) {
        return Err(SimplexError::Shape(format!(
            "row {i} has {} entries, expected {n}",
            a[i].len()
        )));
    }
    if let Some(i) = b.iter().position(|v| v.is_neg()) {
        return Err(SimplexError::NegativeRhs(i));
    }

    // Columns: n structural, m slack, then the right-hand side.
    let width = n + m + 1;
    let rhs = n + m;
    let mut tab: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut t = vec![S::zero(); width];
            t[..n].clone_from_slice(row);
            t[n + i] = S::one();
            t[rhs] = bi.clone();
            t
        })
        .collect();
    // Reduced costs; the last entry holds minus the objective value.
    let mut obj = vec![S::zero(); width];
    obj[..n].clone_from_slice(c);
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = S::pivot_eps();

    let mut pivots = 0;
    while let Some(enter) = (0..rhs).find(|&j| obj[j] > eps) {
        let mut leave: Option<(usize, S)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter] <= eps {
                continue;
            }
            let ratio = row[rhs].clone() / row[enter].clone();
            let better = match &leave {
                None => true,
                Some((k, best)) => {
                    let tie = if S::EXACT {
                        ratio == *best
                    } else {
                        (ratio.clone() - best.clone()).abs() <= eps
                    };
                    if tie {
                        basis[i] < basis[*k]
                    } else {
                        ratio < *best
                    }
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row_idx, _)) = leave else {
            return Err(SimplexError::Unbounded(enter));
        };
        pivot(&mut tab, &mut obj, row_idx, enter);
        basis[row_idx] = enter;
        pivots += 1;
        if pivots >= MAX_PIVOTS {
            return Err(SimplexError::PivotLimit(pivots));
        }
    }

    let mut x = vec![S::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = tab[i][rhs].clone();
        }
    }
    let value = -obj[rhs].clone();
    Ok(LpSolution { value, x, pivots })
}

fn pivot<S: Scalar>(tab: &mut [Vec<S>], obj: &mut [S], r: usize, s: usize) {
    let p = tab[r][s].clone();
    for v in tab[r].iter_mut() {
        *v = v.clone() / p.clone();
    }
    tab[r][s] = S::one();
    let pivot_row = tab[r].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len())
        .filter(|&j| !pivot_row[j].is_zero())
        .collect();
    let eliminate = |row: &mut [S]| {
        let factor = row[s].clone();
        if factor.is_zero() {
            return;
        }
        for &j in &nonzero {
            row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
        }
        row[s] = S::zero();
    };
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(obj);
}

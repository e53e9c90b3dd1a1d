use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Molecule;

/// Nonnegative flows from positive to negative mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan<S = f64> {
    n: usize,
    flow: Vec<S>,
    pub cost: S,
}

impl<S: Scalar> TransportPlan<S> {
    pub fn new(n: usize, flow: Vec<S>, cost: S) -> Result<Self> {
        if flow.len() != n * n {
            return Err(Error::ShapeMismatch {
                expected: n * n,
                actual: flow.len(),
            });
        }
        Ok(Self { n, flow, cost })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn flow(&self, from: usize, to: usize) -> &S {
        &self.flow[from * self.n + to]
    }

    pub fn flow_mut(&mut self, from: usize, to: usize) -> &mut S {
        &mut self.flow[from * self.n + to]
    }

    /// Nonzero entries as `(from, to, amount)`.
    pub fn triples(&self) -> Vec<(usize, usize, S)> {
        let mut out = Vec::new();
        for p in 0..self.n {
            for q in 0..self.n {
                let f = self.flow(p, q);
                if !f.is_zero() {
                    out.push((p, q, f.clone()));
                }
            }
        }
        out
    }

    /// Outflow minus inflow at `p`.
    pub fn net_outflow(&self, p: usize) -> S {
        let mut net = S::zero();
        for q in 0..self.n {
            net = net + self.flow(p, q).clone() - self.flow(q, p).clone();
        }
        net
    }
}

/// Minimum transportation cost from the positive to the negative part of
/// `m`, with the base point supplying or absorbing any mass imbalance
/// (it is the zero element, so this does not change the norm).
///
/// Solved by successive shortest augmenting paths on the bipartite residual
/// network, with Bellman-Ford handling the negative reverse arcs.
pub fn ae_norm_primal<S: Scalar>(m: &Molecule<S>) -> Result<(S, TransportPlan<S>)> {
    let space = m.space();
    let n = space.len();
    let e = m.base();
    let m = m.canonical();

    let mut sources: Vec<(usize, S)> = Vec::new();
    let mut sinks: Vec<(usize, S)> = Vec::new();
    let (mut pos, mut neg) = (S::zero(), S::zero());
    for (i, a) in m.coeffs().iter().enumerate() {
        if a.is_pos() {
            pos = pos + a.clone();
            sources.push((i, a.clone()));
        } else if a.is_neg() {
            neg = neg - a.clone();
            sinks.push((i, -a.clone()));
        }
    }
    if pos > neg {
        sinks.push((e, pos - neg));
    } else if neg > pos {
        sources.push((e, neg - pos));
    }

    let ns = sources.len();
    let nt = sinks.len();
    let cost = |s: usize, t: usize| space.d(sources[s].0, sinks[t].0).clone();
    let mut supply: Vec<S> = sources.iter().map(|(_, a)| a.clone()).collect();
    let mut demand: Vec<S> = sinks.iter().map(|(_, a)| a.clone()).collect();
    let mut flow = vec![S::zero(); ns * nt];
    let eps = S::pivot_eps();

    let max_rounds = 4 * (ns + nt) * (ns + nt) + 16;
    let mut rounds = 0;
    while supply.iter().any(|s| s.is_pos()) && demand.iter().any(|d| d.is_pos()) {
        rounds += 1;
        if rounds > max_rounds {
            return Err(Error::Solver("augmenting paths did not terminate".into()));
        }
        // Shortest distances from any source with remaining supply.
        let mut dist_s: Vec<Option<S>> = supply.iter().map(|s| s.is_pos().then(S::zero)).collect();
        let mut dist_t: Vec<Option<S>> = vec![None; nt];
        let mut pred_s: Vec<Option<usize>> = vec![None; ns];
        let mut pred_t: Vec<usize> = vec![usize::MAX; nt];
        for _ in 0..=(ns + nt) {
            let mut changed = false;
            for s in 0..ns {
                let Some(ds) = dist_s[s].clone() else {
                    continue;
                };
                for t in 0..nt {
                    let cand = ds.clone() + cost(s, t);
                    if improves(&cand, &dist_t[t], &eps) {
                        dist_t[t] = Some(cand);
                        pred_t[t] = s;
                        changed = true;
                    }
                }
            }
            for t in 0..nt {
                let Some(dt) = dist_t[t].clone() else {
                    continue;
                };
                for s in 0..ns {
                    if !flow[s * nt + t].is_pos() {
                        continue;
                    }
                    let cand = dt.clone() - cost(s, t);
                    if improves(&cand, &dist_s[s], &eps) {
                        dist_s[s] = Some(cand);
                        pred_s[s] = Some(t);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let target = (0..nt)
            .filter(|&t| demand[t].is_pos() && dist_t[t].is_some())
            .min_by(|&a, &b| {
                let (da, db) = (dist_t[a].as_ref().unwrap(), dist_t[b].as_ref().unwrap());
                da.partial_cmp(db)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            });
        let Some(target) = target else {
            return Err(Error::Solver(
                "no augmenting path to a sink with demand".into(),
            ));
        };

        // Walk back: sink <- source (forward arc) <- sink (reverse arc) ...
        let mut path: Vec<(usize, usize, bool)> = Vec::new();
        let mut t = target;
        // Roots of the tree are exactly the sources with remaining supply.
        let start = loop {
            let s = pred_t[t];
            path.push((s, t, true));
            match pred_s[s] {
                None => break s,
                Some(prev_t) => {
                    path.push((s, prev_t, false));
                    t = prev_t;
                }
            }
            if path.len() > 2 * (ns + nt) {
                return Err(Error::Solver("cycle in shortest-path tree".into()));
            }
        };
        let mut delta = S::min_of(supply[start].clone(), demand[target].clone());
        for &(s, t, forward) in &path {
            if !forward {
                delta = S::min_of(delta, flow[s * nt + t].clone());
            }
        }
        if !delta.is_pos() {
            return Err(Error::Solver("zero-capacity augmenting path".into()));
        }
        for &(s, t, forward) in &path {
            let f = &mut flow[s * nt + t];
            *f = if forward {
                f.clone() + delta.clone()
            } else {
                f.clone() - delta.clone()
            };
        }
        supply[start] = supply[start].clone() - delta.clone();
        demand[target] = demand[target].clone() - delta;
    }

    let mut plan = TransportPlan::new(n, vec![S::zero(); n * n], S::zero())?;
    let mut total = S::zero();
    for s in 0..ns {
        for t in 0..nt {
            let f = flow[s * nt + t].clone();
            if f.is_zero() {
                continue;
            }
            let (p, q) = (sources[s].0, sinks[t].0);
            total = total + f.clone() * space.d(p, q).clone();
            *plan.flow_mut(p, q) = f;
        }
    }
    plan.cost = total.clone();
    Ok((total, plan))
}

fn improves<S: Scalar>(cand: &S, current: &Option<S>, eps: &S) -> bool {
    match current {
        None => true,
        Some(cur) => cand.clone() + eps.clone() < *cur,
    }
}

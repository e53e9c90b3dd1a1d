//! Seeded generators for test spaces, functions and molecules.
//!
//! Every generated number is dyadic with few significant bits, so spaces
//! built from sums of coordinates are exact in binary64 and lift to exact
//! rationals cheaply.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::MetricSpace;

pub type LabRng = ChaCha8Rng;

/// Generator for one suite: the shared seed on a suite-specific stream.
pub fn suite_rng(seed: u64, stream: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const GRAIN: f64 = 1024.0;

/// Uniform on `[lo, hi]` rounded to a multiple of `1/1024`.
pub fn dyadic(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * GRAIN).round() as i64;
    lo + rng.gen_range(0..=steps) as f64 / GRAIN
}

pub fn dyadic_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| dyadic(rng, lo, hi)).collect()
}

/// How a random space's metric is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// `l1` distance between random grid points of the plane.
    Taxicab,
    /// `l-inf` distance between random grid points of the plane.
    Chebyshev,
    /// Shortest-path closure of random positive edge weights.
    Graph,
}

/// A random valid metric space with a point count drawn from `points`.
/// When `pointed`, the base point sits at a random index.
pub fn random_space(
    rng: &mut impl Rng,
    points: std::ops::RangeInclusive<usize>,
    pointed: bool,
) -> MetricSpace {
    let kind = *[SpaceKind::Taxicab, SpaceKind::Chebyshev, SpaceKind::Graph]
        .choose(rng)
        .unwrap();
    random_space_of(rng, kind, points, pointed)
}

pub fn random_space_of(
    rng: &mut impl Rng,
    kind: SpaceKind,
    points: std::ops::RangeInclusive<usize>,
    pointed: bool,
) -> MetricSpace {
    let n = rng.gen_range(points);
    let scale = *[0.25, 0.5, 1.0, 2.0, 4.0].choose(rng).unwrap();
    let rows = match kind {
        SpaceKind::Taxicab | SpaceKind::Chebyshev => {
            let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
            while pts.len() < n {
                let p = (rng.gen_range(0..=32), rng.gen_range(0..=32));
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            let unit = scale / 16.0;
            pts.iter()
                .map(|a| {
                    pts.iter()
                        .map(|b| {
                            let (dx, dy) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
                            let d = if kind == SpaceKind::Taxicab {
                                dx + dy
                            } else {
                                dx.max(dy)
                            };
                            d as f64 * unit
                        })
                        .collect()
                })
                .collect()
        }
        SpaceKind::Graph => {
            let unit = scale / 16.0;
            let mut d = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let w = rng.gen_range(1..=48);
                    d[i][j] = w;
                    d[j][i] = w;
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if d[i][k] + d[k][j] < d[i][j] {
                            d[i][j] = d[i][k] + d[k][j];
                        }
                    }
                }
            }
            d.iter()
                .map(|r| r.iter().map(|&w| w as f64 * unit).collect())
                .collect()
        }
    };
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    let base = pointed.then(|| rng.gen_range(0..n));
    MetricSpace::new(ids, rows, base).expect("generated spaces satisfy the metric axioms")
}

/// Random values on a line grid whose consecutive slopes lie in `[-1, 1]`,
/// vanishing at index 0. On a line this bounds every slope by 1.
pub fn grid_walk(rng: &mut impl Rng, grid: &MetricSpace, start: usize) -> Vec<f64> {
    let n = grid.len();
    let mut v = vec![0.0; n];
    for i in start.max(1)..n {
        let step = *grid.d(i - 1, i);
        v[i] = v[i - 1] + dyadic(rng, -1.0, 1.0) * step;
    }
    v
}

//! The alternating molecule on the dyadic points of `[0,1]` with a base
//! point attached at distance 1 from everything. Its positive part pairs to
//! `N + 1` with the constant 1 while its norm stays below `2/3`, so the
//! infinite sum has no decomposition into positive free-space elements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lip::LipFunction;
use crate::metric::MetricSpace;

use super::Molecule;

/// Largest truncation index whose points `2^-(2N+1)` stay meaningful in
/// binary64 next to 1.
pub const EXAMPLE_MAX_N: usize = 25;

/// The carrier `{e} ∪ {0} ∪ {2^-k : k = 0..=2N+1}` and
/// `m_N = sum_{k=0}^{N} (delta_{2^-2k} - delta_{2^-2k-1})`.
///
/// Points are ordered `e, 0, 1, 1/2, 1/4, ...`; the base point is index 0.
pub fn example_molecule(n: usize) -> Result<(Arc<MetricSpace>, Molecule)> {
    if n > EXAMPLE_MAX_N {
        return Err(Error::ExampleOutOfRange(n));
    }
    let coords = example_coords(n);
    let size = coords.len() + 1;
    let mut rows = vec![vec![0.0; size]; size];
    for i in 1..size {
        rows[0][i] = 1.0;
        rows[i][0] = 1.0;
        for j in 1..size {
            rows[i][j] = (coords[i - 1] - coords[j - 1]).abs();
        }
    }
    let mut ids = vec!["e".to_string()];
    ids.extend(coords.iter().map(|x| format!("{x}")));
    let space = Arc::new(MetricSpace::new(ids, rows, Some(0))?);

    let mut coeffs = vec![0.0; size];
    for k in 0..=n {
        coeffs[point_index(2 * k)] = 1.0;
        coeffs[point_index(2 * k + 1)] = -1.0;
    }
    let m = Molecule::new(space.clone(), coeffs)?;
    Ok((space, m))
}

/// `f_N`: 1 at `1, 2^-2, ..., 2^-2N`, 0 at `2^-1, ..., 2^-2N-1`, 0 on
/// `[0, 2^-2N-1]`, clipped to `[0,1]`, and 0 at the base point.
///
/// Built as the McShane extension of the prescribed values from the
/// `[0,1]` part, so it is Lipschitz there.
pub fn example_witness(space: &Arc<MetricSpace>, n: usize) -> Result<LipFunction> {
    if n > EXAMPLE_MAX_N {
        return Err(Error::ExampleOutOfRange(n));
    }
    if space.len() != 2 * n + 4 || space.base() != Some(0) {
        return Err(Error::SpaceMismatch);
    }
    let mut known = vec![(1, 0.0)];
    for k in 0..=2 * n + 1 {
        known.push((point_index(k), if k % 2 == 0 { 1.0 } else { 0.0 }));
    }
    // Steepest prescribed slope: from 1 at 2^-2N down to 0 at 2^-2N-1.
    let slope = 2f64.powi(2 * n as i32 + 1);
    let f = LipFunction::mcshane_extension(space, &known, &slope)?;
    let mut values = f.clamp(&0.0, &1.0).into_values();
    values[0] = 0.0;
    LipFunction::new(space.clone(), values)
}

fn example_coords(n: usize) -> Vec<f64> {
    let mut coords = vec![0.0];
    coords.extend((0..=2 * n + 1).map(|k| 2f64.powi(-(k as i32))));
    coords
}

/// Index of `2^-k` in the example carrier.
fn point_index(k: usize) -> usize {
    k + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carrier_layout() {
        let (s, m) = example_molecule(0).unwrap();
        assert_eq!(s.ids(), &["e", "0", "1", "0.5"]);
        assert_eq!(m.coeffs(), &[0.0, 0.0, 1.0, -1.0]);
        assert_eq!(*s.d(0, 3), 1.0);
        assert_eq!(*s.d(2, 3), 0.5);
        assert!(matches!(
            example_molecule(26),
            Err(Error::ExampleOutOfRange(26))
        ));
    }

    #[test]
    fn witness_values() {
        let (s, m) = example_molecule(2).unwrap();
        let f = example_witness(&s, 2).unwrap();
        assert_eq!(f.values(), &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(m.pairing(&f).unwrap(), 3.0);
    }
}

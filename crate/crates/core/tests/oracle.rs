//! Free-space norms on subsets of the real line against the closed form
//! `integral |F(x)| dx`, where `F` is the cumulative mass of the molecule
//! with the base point absorbing the total.

use std::sync::Arc;

use lipfree::free_space::{ae_norm_dual, ae_norm_primal, example_molecule};
use lipfree::{MetricSpace, Molecule, Rational, Scalar};
use proptest::prelude::*;

fn line_norm(coords: &[f64], base: usize, coeffs: &[f64]) -> f64 {
    let total: f64 = coeffs.iter().sum();
    let mut mass: Vec<(f64, f64)> = coords.iter().copied().zip(coeffs.iter().copied()).collect();
    mass[base].1 -= total;
    mass.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut cum = 0.0;
    let mut norm = 0.0;
    for w in mass.windows(2) {
        cum += w[0].1;
        norm += cum.abs() * (w[1].0 - w[0].0);
    }
    norm
}

#[test]
fn alternating_molecule_small_cases() {
    // On the dyadic points the base point is never worth visiting (every
    // direct distance is at most 1 < 2), so the line formula applies.
    for (n, expected) in [(0usize, 0.5), (1, 0.625), (2, 0.65625)] {
        let (space, m) = example_molecule(n).unwrap();
        let coords: Vec<f64> = space.ids()[1..]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let oracle = line_norm(&coords, 0, &m.coeffs()[1..]);
        assert_eq!(oracle, expected);
        assert!((ae_norm_primal(&m).unwrap().0 - oracle).abs() < 1e-12);
        assert!((ae_norm_dual(&m).unwrap().0 - oracle).abs() < 1e-12);
    }
}

#[test]
fn alternating_molecule_closed_form() {
    for n in 0..=8 {
        let (space, m) = example_molecule(n).unwrap();
        let coords: Vec<f64> = space.ids()[1..]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let oracle = line_norm(&coords, 0, &m.coeffs()[1..]);
        let closed = 2.0 / 3.0 * (1.0 - 4f64.powi(-(n as i32 + 1)));
        assert!((oracle - closed).abs() < 1e-15, "n={n}");
    }
}

fn line_case() -> impl Strategy<Value = (Vec<f64>, usize, Vec<f64>)> {
    proptest::collection::btree_set(-40i32..40, 2..=9).prop_flat_map(|xs| {
        let coords: Vec<f64> = xs.into_iter().map(|x| x as f64 / 4.0).collect();
        let n = coords.len();
        (
            Just(coords),
            0..n,
            proptest::collection::vec((-16i32..=16).prop_map(|k| k as f64 / 8.0), n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn both_solvers_match_the_line_formula((coords, base, coeffs) in line_case()) {
        let space = Arc::new(MetricSpace::on_line(&coords, Some(base)).unwrap());
        let m = Molecule::new(space.clone(), coeffs.clone()).unwrap();
        let oracle = line_norm(&coords, base, &coeffs);
        prop_assert!((ae_norm_primal(&m).unwrap().0 - oracle).abs() <= 1e-9 * oracle.max(1.0));
        prop_assert!((ae_norm_dual(&m).unwrap().0 - oracle).abs() <= 1e-9 * oracle.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_solvers_match_the_line_formula((coords, base, coeffs) in line_case()) {
        let space = MetricSpace::on_line(&coords, Some(base)).unwrap();
        let exact = Arc::new(space.to_exact());
        let m = Molecule::new(Arc::new(space), coeffs.clone()).unwrap().to_exact(&exact).unwrap();
        // Quarter-integer coordinates and eighth-integer masses: the line
        // formula is exact in binary64.
        let oracle = Rational::of_f64(line_norm(&coords, base, &coeffs));
        prop_assert_eq!(ae_norm_primal(&m).unwrap().0, oracle.clone());
        prop_assert_eq!(ae_norm_dual(&m).unwrap().0, oracle);
    }
}

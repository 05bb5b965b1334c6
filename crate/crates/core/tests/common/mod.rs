//! Shared oracles and property checks for the integration tests.
//!
//! The oracles here avoid the crate's solver: interpolation is checked against the Lagrange
//! basis expanded by hand, determinants against the product formula.

#![allow(dead_code)]

use std::collections::BTreeSet;

use notemap::mapping::{apply_to_set, interpolate, intervals, InterpolationProblem};
use notemap::poly::RationalPolynomial;
use notemap::rational::{int, ratio, Rational};
use notemap::solver::{
    build_vandermonde, cramer_solve_4x4, determinant, gaussian_solve, RMatrix, SolveKind,
};
use notemap::NoteSet;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Lagrange interpolant through distinct nodes, as ascending coefficients.
pub fn lagrange(nodes: &[Rational], targets: &[Rational]) -> Vec<Rational> {
    let n = nodes.len();
    let mut total = vec![int(0); n];
    for i in 0..n {
        // basis numerator prod_{j != i} (x - x_j), ascending
        let mut basis = vec![int(1)];
        let mut denom = int(1);
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![int(0); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &nodes[j];
            }
            basis = next;
            denom *= &nodes[i] - &nodes[j];
        }
        let scale = &targets[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            total[k] += c * &scale;
        }
    }
    while total.len() > 1 && total.last() == Some(&int(0)) {
        total.pop();
    }
    total
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

pub fn distinct_rationals(min: usize, max: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::btree_set(
        (-60i64..=60, 1i64..=4).prop_map(|(n, d)| ratio(n, d)),
        min..=max,
    )
    .prop_map(|s: BTreeSet<Rational>| s.into_iter().collect())
    .prop_shuffle()
}

pub fn note_values(min: usize, max: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-48i64..=48).prop_map(|h| ratio(h, 2)), min..=max)
}

/// Up to 8 distinct nodes, possibly listed twice with the same target.
pub fn interpolation_problem() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>, Vec<usize>)>
{
    distinct_rationals(1, 8).prop_flat_map(|nodes| {
        let k = nodes.len();
        (
            Just(nodes),
            proptest::collection::vec(rational(), k),
            proptest::collection::vec(0..k, 0..=3),
        )
    })
}

pub fn check_interpolation(
    nodes: Vec<Rational>,
    targets: Vec<Rational>,
    repeats: Vec<usize>,
) -> Result<(), TestCaseError> {
    let mut pairs: Vec<(Rational, Rational)> =
        nodes.iter().cloned().zip(targets.iter().cloned()).collect();
    for r in repeats {
        pairs.push(pairs[r].clone());
    }
    let f = interpolate(&InterpolationProblem::new(pairs.clone()))
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    for (s, t) in &pairs {
        prop_assert_eq!(&f.evaluate(s), t);
    }
    prop_assert_eq!(f, RationalPolynomial::new(lagrange(&nodes, &targets)));
    Ok(())
}

pub fn nonsingular_4x4() -> impl Strategy<Value = (RMatrix, Vec<Rational>)> {
    (
        proptest::collection::vec(rational(), 16),
        proptest::collection::vec(rational(), 4),
    )
        .prop_map(|(e, b)| (RMatrix::new(4, 4, e).expect("16 entries"), b))
        .prop_filter("singular", |(a, _)| {
            determinant(a).map(|d| d != int(0)).unwrap_or(false)
        })
}

pub fn check_cramer(a: RMatrix, b: Vec<Rational>) -> Result<(), TestCaseError> {
    let cramer = cramer_solve_4x4(&a, &b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let gauss = gaussian_solve(&a, &b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(gauss.kind, SolveKind::Unique);
    prop_assert_eq!(gauss.solution.as_ref(), Some(&cramer));
    prop_assert_eq!(a.mul_vec(&cramer).unwrap(), b);
    Ok(())
}

/// prod_{i<j} (x_i - x_j), the determinant with descending-power columns.
pub fn vandermonde_product(nodes: &[Rational]) -> Rational {
    let mut p = int(1);
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            p *= &nodes[i] - &nodes[j];
        }
    }
    p
}

pub fn check_vandermonde(nodes: Vec<Rational>) -> Result<(), TestCaseError> {
    let v = build_vandermonde(&nodes, nodes.len() - 1);
    prop_assert_eq!(determinant(&v).unwrap(), vandermonde_product(&nodes));
    Ok(())
}

pub fn check_translation(values: Vec<Rational>, a: i64) -> Result<(), TestCaseError> {
    let s = NoteSet::new(values);
    let f = RationalPolynomial::new(vec![int(a), int(1)]);
    let t = apply_to_set(&f, &s);
    prop_assert_eq!(intervals(&s).unwrap(), intervals(&t).unwrap());
    Ok(())
}

pub fn figure_one_sets() -> Vec<NoteSet> {
    [
        &[0, 4, 7, 11][..],
        &[-4, 0, 3, 7],
        &[-8, 0, 6, 14],
        &[-7, 1, 7, 15],
        &[-8, 1, 8, 15],
        &[-7, 1, 7, 15, 11, 16],
        &[-4, 1, 4, 7],
        &[-5, 0, 3, 6],
        &[-6, -1, 2, 7],
    ]
    .iter()
    .map(|v| NoteSet::from_ints(v))
    .collect()
}

pub fn run_cases<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    let mut runner = proptest::test_runner::TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    );
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

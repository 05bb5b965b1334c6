//! Deriving the polynomial that sends one note-set onto another, and running chains of such
//! polynomials ("function algorithms") over note-sets.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::pitch::NoteSet;
use crate::poly::RationalPolynomial;
use crate::rational::{to_canonical_string, Rational};
use crate::solver::{build_vandermonde, gaussian_solve, SolveKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("no interpolation pairs given")]
    EmptyInput,
    #[error("not a function: {node} maps to both {first} and {second}")]
    NotAFunction {
        node: String,
        first: String,
        second: String,
    },
    #[error("no polynomial of degree {degree} with the requested pinning fits the pairs")]
    OverconstrainedInconsistent { degree: usize },
    #[error("pinned index {index} exceeds target degree {degree}")]
    PinOutOfRange { index: usize, degree: usize },
    #[error("note-sets differ in cardinality ({left} vs {right})")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("need at least {needed} elements, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("duplicate step label `{0}`")]
    DuplicateLabel(String),
}

/// Which coefficients are solved for.
///
/// With neither field set, the result is the minimal-degree interpolant: every index at or
/// above the number of distinct nodes is pinned to zero and trailing zeros are dropped. Setting
/// either field keeps the full `0..=degree` coefficient vector, pinned zeros included.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pinning {
    pub target_degree: Option<usize>,
    pub pinned_zero: Option<BTreeSet<usize>>,
}

impl Pinning {
    pub fn minimal() -> Self {
        Pinning::default()
    }

    pub fn pin(indices: impl IntoIterator<Item = usize>) -> Self {
        Pinning {
            target_degree: None,
            pinned_zero: Some(indices.into_iter().collect()),
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.target_degree = Some(degree);
        self
    }

    fn is_default(&self) -> bool {
        self.target_degree.is_none() && self.pinned_zero.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpolationProblem {
    pub pairs: Vec<(Rational, Rational)>,
    pub pinning: Pinning,
}

impl InterpolationProblem {
    pub fn new(pairs: Vec<(Rational, Rational)>) -> Self {
        InterpolationProblem {
            pairs,
            pinning: Pinning::default(),
        }
    }

    pub fn with_pinning(mut self, pinning: Pinning) -> Self {
        self.pinning = pinning;
        self
    }

    /// Pairs `from[i] -> to[i]` in listed order.
    pub fn from_sets(from: &NoteSet, to: &NoteSet) -> Result<Self, MappingError> {
        if from.len() != to.len() {
            return Err(MappingError::CardinalityMismatch {
                left: from.len(),
                right: to.len(),
            });
        }
        Ok(InterpolationProblem::new(
            from.values
                .iter()
                .cloned()
                .zip(to.values.iter().cloned())
                .collect(),
        ))
    }
}

/// Distinct nodes in first-seen order, rejecting a node listed with two different targets.
fn distinct_nodes(pairs: &[(Rational, Rational)]) -> Result<usize, MappingError> {
    let mut seen: BTreeMap<&Rational, &Rational> = BTreeMap::new();
    for (s, t) in pairs {
        if let Some(prev) = seen.insert(s, t) {
            if prev != t {
                return Err(MappingError::NotAFunction {
                    node: to_canonical_string(s),
                    first: to_canonical_string(prev),
                    second: to_canonical_string(t),
                });
            }
        }
    }
    Ok(seen.len())
}

/// Solves `f(s_i) = t_i` over the pairs through the Vandermonde system, with pinned
/// coefficients removed from the unknowns and any remaining free coefficient set to zero.
pub fn interpolate(problem: &InterpolationProblem) -> Result<RationalPolynomial, MappingError> {
    let pairs = &problem.pairs;
    if pairs.is_empty() {
        return Err(MappingError::EmptyInput);
    }
    let distinct = distinct_nodes(pairs)?;
    let pin = &problem.pinning;
    let degree = pin.target_degree.unwrap_or_else(|| {
        let max_pin = pin
            .pinned_zero
            .as_ref()
            .and_then(|p| p.iter().next_back().copied())
            .unwrap_or(0);
        (pairs.len() - 1).max(max_pin)
    });
    let pinned: BTreeSet<usize> = match &pin.pinned_zero {
        Some(p) => {
            if let Some(&index) = p.iter().find(|&&i| i > degree) {
                return Err(MappingError::PinOutOfRange { index, degree });
            }
            p.clone()
        }
        None => (distinct..=degree).collect(),
    };

    // Vandermonde columns run from power `degree` down to 0.
    let unknown_powers: Vec<usize> = (0..=degree).rev().filter(|p| !pinned.contains(p)).collect();
    let mut coefficients = vec![Rational::default(); degree + 1];
    if !unknown_powers.is_empty() {
        let nodes: Vec<Rational> = pairs.iter().map(|(s, _)| s.clone()).collect();
        let targets: Vec<Rational> = pairs.iter().map(|(_, t)| t.clone()).collect();
        let columns: Vec<usize> = unknown_powers.iter().map(|p| degree - p).collect();
        let a = build_vandermonde(&nodes, degree)
            .select_columns(&columns)
            .expect("column selection within bounds");
        let outcome = gaussian_solve(&a, &targets).expect("one target per node");
        let solution = match outcome.kind {
            SolveKind::Inconsistent => {
                return Err(MappingError::OverconstrainedInconsistent { degree })
            }
            SolveKind::Unique | SolveKind::Underdetermined => outcome
                .solution
                .expect("consistent outcome carries a solution"),
        };
        for (power, value) in unknown_powers.iter().zip(solution) {
            coefficients[*power] = value;
        }
    } else if pairs.iter().any(|(_, t)| *t != Rational::default()) {
        return Err(MappingError::OverconstrainedInconsistent { degree });
    }

    let poly = RationalPolynomial::new(coefficients);
    debug_assert!(pairs.iter().all(|(s, t)| &poly.evaluate(s) == t));
    Ok(if pin.is_default() { poly.trim() } else { poly })
}

pub fn evaluate(f: &RationalPolynomial, n: &Rational) -> Rational {
    f.evaluate(n)
}

/// Elementwise image of the set, order preserved. Spellings and label are dropped.
pub fn apply_to_set(f: &RationalPolynomial, s: &NoteSet) -> NoteSet {
    NoteSet::new(s.values.iter().map(|v| f.evaluate(v)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmStep {
    pub label: String,
    pub poly: RationalPolynomial,
}

/// Polynomials applied one after another, set to set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FunctionAlgorithm {
    steps: Vec<AlgorithmStep>,
}

impl FunctionAlgorithm {
    pub fn new() -> Self {
        FunctionAlgorithm::default()
    }

    /// Labels the steps `f1`, `f2`, ...
    pub fn from_polys(polys: impl IntoIterator<Item = RationalPolynomial>) -> Self {
        FunctionAlgorithm {
            steps: polys
                .into_iter()
                .enumerate()
                .map(|(i, poly)| AlgorithmStep {
                    label: format!("f{}", i + 1),
                    poly,
                })
                .collect(),
        }
    }

    pub fn push(
        &mut self,
        label: impl Into<String>,
        poly: RationalPolynomial,
    ) -> Result<(), MappingError> {
        let label = label.into();
        if self.steps.iter().any(|s| s.label == label) {
            return Err(MappingError::DuplicateLabel(label));
        }
        self.steps.push(AlgorithmStep { label, poly });
        Ok(())
    }

    pub fn steps(&self) -> &[AlgorithmStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// `[start, f1(start), f2(f1(start)), ...]`
pub fn run_algorithm(alg: &FunctionAlgorithm, start: &NoteSet) -> Vec<NoteSet> {
    let mut out = Vec::with_capacity(alg.len() + 1);
    out.push(start.clone());
    for step in alg.steps() {
        let next = apply_to_set(&step.poly, out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// `s_j - s_i` for all `i < j`, in lexicographic `(i, j)` order.
pub fn intervals(s: &NoteSet) -> Result<Vec<Rational>, MappingError> {
    if s.len() < 2 {
        return Err(MappingError::TooFew {
            needed: 2,
            got: s.len(),
        });
    }
    let v = &s.values;
    Ok((0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| &v[j] - &v[i]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn pairs(p: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        p.iter().map(|&(s, t)| (int(s), int(t))).collect()
    }

    fn solve(p: &[(i64, i64)], pinning: Pinning) -> Result<RationalPolynomial, MappingError> {
        interpolate(&InterpolationProblem::new(pairs(p)).with_pinning(pinning))
    }

    #[test]
    fn second_cubic_matches_printed() {
        let f = solve(&[(-7, -8), (-2, -3), (2, 1), (8, 9)], Pinning::minimal()).unwrap();
        assert_eq!(
            f.coefficients(),
            &[
                ratio(-239, 225),
                ratio(223, 225),
                ratio(7, 450),
                ratio(1, 450)
            ]
        );
    }

    #[test]
    fn pinned_cubic_term_gives_quadratic() {
        let f = solve(&[(0, 0), (4, 5), (7, 8), (0, 0)], Pinning::pin([3])).unwrap();
        assert_eq!(
            f.coefficients(),
            &[int(0), ratio(39, 28), ratio(-1, 28), int(0)]
        );
        assert_eq!(f.degree(), Some(3));
        let g = solve(&[(0, 0), (4, 5), (7, 8), (0, 0)], Pinning::minimal()).unwrap();
        assert_eq!(g.coefficients(), &[int(0), ratio(39, 28), ratio(-1, 28)]);
        assert_eq!(f, g);
    }

    #[test]
    fn dominant_to_tonic_is_quadratic() {
        let f = solve(&[(11, 0), (2, 4), (7, 7), (11, 0)], Pinning::pin([3])).unwrap();
        assert_eq!(f.coefficient(2), ratio(-47, 180));
        assert_eq!(f.coefficient(1), ratio(59, 20));
        assert_eq!(f.coefficient(0), ratio(-77, 90));
        assert_eq!(f.coefficient(3), int(0));
    }

    #[test]
    fn not_a_function() {
        assert!(matches!(
            solve(&[(0, 1), (0, 2)], Pinning::minimal()),
            Err(MappingError::NotAFunction { .. })
        ));
        assert_eq!(
            interpolate(&InterpolationProblem::new(vec![])),
            Err(MappingError::EmptyInput)
        );
    }

    #[test]
    fn explicit_degree_and_pins() {
        // a line through three collinear points, asked for as a quadratic
        let f = solve(&[(0, 1), (1, 3), (2, 5)], Pinning::minimal().with_degree(2)).unwrap();
        assert_eq!(f, RationalPolynomial::from_ints(&[1, 2]));
        assert_eq!(f.degree(), Some(2));
        // too low a degree for non-collinear points
        assert_eq!(
            solve(&[(0, 0), (1, 1), (2, 4)], Pinning::minimal().with_degree(1)),
            Err(MappingError::OverconstrainedInconsistent { degree: 1 })
        );
        // pin the linear term: c0 + c2 n^2 through (1,2),(2,5)
        let g = solve(&[(1, 2), (2, 5)], Pinning::pin([1]).with_degree(2)).unwrap();
        assert_eq!(g.coefficients(), &[int(1), int(0), int(1)]);
        assert_eq!(
            solve(&[(1, 2), (2, 5)], Pinning::pin([4]).with_degree(2)),
            Err(MappingError::PinOutOfRange {
                index: 4,
                degree: 2
            })
        );
        // everything pinned: only the zero map survives
        assert_eq!(
            solve(&[(1, 0)], Pinning::pin([0])).unwrap(),
            RationalPolynomial::zero()
        );
        assert!(solve(&[(1, 1)], Pinning::pin([0])).is_err());
    }

    #[test]
    fn pin_beyond_pair_count_raises_degree() {
        let f = solve(&[(1, 1), (2, 2)], Pinning::pin([0, 2])).unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f, RationalPolynomial::identity());
    }

    #[test]
    fn apply_and_run() {
        let s = NoteSet::from_ints(&[1, 7, 9, 16, 18]);
        let f = RationalPolynomial::from_ints(&[-5, 1]);
        assert_eq!(
            apply_to_set(&f, &s).values,
            NoteSet::from_ints(&[-4, 2, 4, 11, 13]).values
        );
        assert_eq!(
            apply_to_set(&RationalPolynomial::identity(), &s).values,
            s.values
        );

        let mut alg = FunctionAlgorithm::new();
        alg.push("f", f).unwrap();
        alg.push("g", RationalPolynomial::from_ints(&[6, -1]))
            .unwrap();
        alg.push("h", RationalPolynomial::new(vec![int(0), ratio(1, 2)]))
            .unwrap();
        let sets = run_algorithm(&alg, &s);
        assert_eq!(sets.len(), 4);
        assert_eq!(
            sets[3].values,
            vec![int(5), int(2), int(1), ratio(-5, 2), ratio(-7, 2)]
        );
        assert_eq!(
            run_algorithm(&FunctionAlgorithm::new(), &s),
            vec![s.clone()]
        );
        assert_eq!(
            alg.push("g", RationalPolynomial::zero()),
            Err(MappingError::DuplicateLabel("g".into()))
        );
    }

    #[test]
    fn interval_lists() {
        assert_eq!(
            intervals(&NoteSet::from_ints(&[0, 4, 7])).unwrap(),
            vec![int(4), int(7), int(3)]
        );
        assert_eq!(
            intervals(&NoteSet::from_ints(&[0, 0])).unwrap(),
            vec![int(0)]
        );
        assert_eq!(
            intervals(&NoteSet::from_ints(&[-10, -3, 0, 6])).unwrap(),
            intervals(&NoteSet::from_ints(&[-6, 1, 4, 10])).unwrap()
        );
        assert!(matches!(
            intervals(&NoteSet::from_ints(&[3])),
            Err(MappingError::TooFew { .. })
        ));
    }

    #[test]
    fn cardinality_checked_when_pairing_sets() {
        let a = NoteSet::from_ints(&[1, 2, 3, 4]);
        let b = NoteSet::from_ints(&[1, 2, 3]);
        assert_eq!(
            InterpolationProblem::from_sets(&a, &b),
            Err(MappingError::CardinalityMismatch { left: 4, right: 3 })
        );
    }
}

//! Score files: labelled note-sets, the functions between them, optional realization events
//! and an optional verification report, stored as JSON with rationals as strings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::Report;
use crate::mapping::{apply_to_set, FunctionAlgorithm};
use crate::pitch::NoteSet;
use crate::poly::RationalPolynomial;
use crate::rational::{serde_str, Rational};
use crate::realize::{validate_realization, RealizationEvent, RealizeError};

pub const SCORE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreFunction {
    pub label: String,
    /// Ascending powers.
    #[serde(with = "serde_str::vec")]
    pub coefficients: Vec<Rational>,
    pub from: String,
    pub to: String,
}

impl ScoreFunction {
    pub fn polynomial(&self) -> RationalPolynomial {
        RationalPolynomial::new(self.coefficients.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Score {
    pub version: u32,
    pub sets: Vec<NoteSet>,
    pub functions: Vec<ScoreFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<RealizationEvent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("malformed score file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported score version {0}")]
    UnsupportedVersion(u32),
}

/// A problem found by [`Score::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreProblem {
    DuplicateSetLabel(String),
    UnknownLabel {
        function: String,
        label: String,
    },
    FunctionMismatch {
        function: String,
        expected: NoteSet,
        got: NoteSet,
    },
    BadEvent(RealizeError),
    OctaveOrder(RealizationEvent),
}

impl std::fmt::Display for ScoreProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScoreProblem::DuplicateSetLabel(l) => write!(f, "set label `{l}` is used more than once"),
            ScoreProblem::UnknownLabel { function, label } => {
                write!(f, "function `{function}` references unknown set `{label}`")
            }
            ScoreProblem::FunctionMismatch { function, expected, got } => {
                write!(f, "function `{function}` yields {got}, expected {expected}")
            }
            ScoreProblem::BadEvent(e) => write!(f, "{e}"),
            ScoreProblem::OctaveOrder(e) => write!(
                f,
                "set {} element {} shifted {} octave(s) at onset {} before sounding in its own octave",
                e.set_index, e.element_index, e.octave_shift, e.onset
            ),
        }
    }
}

impl Score {
    pub fn new(sets: Vec<NoteSet>) -> Self {
        Score {
            version: SCORE_VERSION,
            sets,
            functions: Vec::new(),
            events: None,
            report: None,
        }
    }

    /// Sets `s0, s1, ...` joined by the algorithm's steps. Unlabelled sets are labelled by
    /// position.
    pub fn from_chain(sets: Vec<NoteSet>, alg: &FunctionAlgorithm) -> Self {
        let sets: Vec<NoteSet> = sets
            .into_iter()
            .enumerate()
            .map(|(i, s)| match s.label {
                Some(_) => s,
                None => s.with_label(format!("s{i}")),
            })
            .collect();
        let label = |i: usize| sets[i].label.clone().unwrap_or_default();
        let functions = alg
            .steps()
            .iter()
            .enumerate()
            .map(|(i, step)| ScoreFunction {
                label: step.label.clone(),
                coefficients: step.poly.coefficients().to_vec(),
                from: label(i),
                to: label(i + 1),
            })
            .collect();
        Score {
            functions,
            ..Score::new(sets)
        }
    }

    pub fn set_by_label(&self, label: &str) -> Option<&NoteSet> {
        self.sets.iter().find(|s| s.label.as_deref() == Some(label))
    }

    /// Every problem with label references, function results and realization events.
    pub fn check(&self) -> Vec<ScoreProblem> {
        let mut problems = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for l in self.sets.iter().filter_map(|s| s.label.as_deref()) {
            if !seen.insert(l) {
                problems.push(ScoreProblem::DuplicateSetLabel(l.to_string()));
            }
        }
        for f in &self.functions {
            match (self.set_by_label(&f.from), self.set_by_label(&f.to)) {
                (Some(from), Some(to)) => {
                    let got = apply_to_set(&f.polynomial(), from);
                    if got.values != to.values {
                        problems.push(ScoreProblem::FunctionMismatch {
                            function: f.label.clone(),
                            expected: NoteSet::new(to.values.clone()),
                            got: NoteSet::new(got.values),
                        });
                    }
                }
                (from, to) => {
                    for (found, label) in [(from.is_some(), &f.from), (to.is_some(), &f.to)] {
                        if !found {
                            problems.push(ScoreProblem::UnknownLabel {
                                function: f.label.clone(),
                                label: label.clone(),
                            });
                        }
                    }
                }
            }
        }
        if let Some(events) = &self.events {
            match validate_realization(events, &self.sets) {
                Ok(v) => problems.extend(v.violations.into_iter().map(ScoreProblem::OctaveOrder)),
                Err(e) => problems.push(ScoreProblem::BadEvent(e)),
            }
        }
        problems
    }
}

/// Pretty JSON with fields in declaration order and a trailing newline.
pub fn export_json(score: &Score) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(score).expect("score serialization cannot fail");
    out.push(b'\n');
    out
}

pub fn import_json(bytes: &[u8]) -> Result<Score, ScoreError> {
    let score: Score = serde_json::from_slice(bytes)?;
    if score.version != SCORE_VERSION {
        return Err(ScoreError::UnsupportedVersion(score.version));
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run_all;
    use crate::rational::ratio;

    fn chain() -> Score {
        let start = NoteSet::from_ints(&[1, 7, 9, 16, 18]);
        let alg = FunctionAlgorithm::from_polys([
            RationalPolynomial::from_ints(&[-5, 1]),
            RationalPolynomial::from_ints(&[6, -1]),
            RationalPolynomial::new(vec![ratio(0, 1), ratio(1, 2)]),
        ]);
        Score::from_chain(crate::mapping::run_algorithm(&alg, &start), &alg)
    }

    #[test]
    fn canonical_strings_in_output() {
        let s = Score::new(vec![NoteSet::from_ints(&[0, 4, 7, 10])]);
        let text = String::from_utf8(export_json(&s)).unwrap();
        assert!(text.contains(r#""values": ["#));
        let compact: String = text.split_whitespace().collect();
        assert!(compact.contains(r#""values":["0","4","7","10"]"#));
        assert!(text.ends_with("}\n"));
        let chain_text = String::from_utf8(export_json(&chain())).unwrap();
        assert!(chain_text.contains("\"-5/2\""));
    }

    #[test]
    fn round_trip_with_report() {
        let mut s = chain();
        s.events = Some(vec![RealizationEvent::new(0, 0, 0, 0)]);
        s.report = Some(run_all(Some("S3"), true));
        let back = import_json(&export_json(&s)).unwrap();
        assert_eq!(back, s);
        assert_eq!(export_json(&back), export_json(&s));
    }

    #[test]
    fn chain_checks_clean() {
        assert!(chain().check().is_empty());
    }

    #[test]
    fn detects_problems() {
        let mut s = chain();
        s.functions[1].coefficients[0] = ratio(7, 1);
        s.functions[2].to = "nowhere".into();
        s.events = Some(vec![RealizationEvent::new(0, 0, 1, 0)]);
        let problems = s.check();
        assert_eq!(problems.len(), 3);
        assert!(matches!(problems[0], ScoreProblem::FunctionMismatch { .. }));
        assert!(matches!(problems[1], ScoreProblem::UnknownLabel { .. }));
        assert!(matches!(problems[2], ScoreProblem::OctaveOrder(_)));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(import_json(b"{"), Err(ScoreError::Json(_))));
        let bad = br#"{"version": 2, "sets": [], "functions": []}"#;
        assert!(matches!(
            import_json(bad),
            Err(ScoreError::UnsupportedVersion(2))
        ));
        let bad_value = br#"{"version": 1, "sets": [{"values": ["pi"]}], "functions": []}"#;
        assert!(import_json(bad_value).is_err());
    }
}

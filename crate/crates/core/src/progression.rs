//! Chord-progression templates as sequences of pitch-class sets, and the function algorithm
//! that walks through them.
//!
//! Two kinds of template live here. `Printed` templates carry absolute pitch classes exactly
//! as published for one key (`I-IV64-V6-I@C`, `NEAP@D`, ...); they are what the verification
//! harness checks. `Generic` templates are written in C and transposed by a key offset.
//! The published C-major version uses a minor subdominant (A flat) while the D-major one uses
//! the major subdominant, so both colours exist as generic templates.

use std::sync::OnceLock;

use thiserror::Error;

use crate::mapping::{interpolate, FunctionAlgorithm, InterpolationProblem, MappingError, Pinning};
use crate::pitch::{key_offset, pitch_class, CodecError, NoteSet};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateSource {
    Printed,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chord {
    pub figure: String,
    pub representatives: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressionTemplate {
    pub name: String,
    pub chords: Vec<Chord>,
    pub source: TemplateSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgressionError {
    #[error("unknown progression template `{0}`")]
    UnknownTemplate(String),
    #[error("bad key: {0}")]
    BadKey(#[from] CodecError),
    #[error("need at least two note-sets, got {0}")]
    TooFewSets(usize),
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

fn template(
    name: &str,
    source: TemplateSource,
    chords: &[(&str, [i64; 4])],
) -> ProgressionTemplate {
    ProgressionTemplate {
        name: name.to_string(),
        source,
        chords: chords
            .iter()
            .map(|(figure, reps)| Chord {
                figure: figure.to_string(),
                representatives: reps.iter().copied().map(int).collect(),
            })
            .collect(),
    }
}

fn registry() -> &'static [ProgressionTemplate] {
    static TEMPLATES: OnceLock<Vec<ProgressionTemplate>> = OnceLock::new();
    TEMPLATES.get_or_init(|| {
        use TemplateSource::*;
        vec![
            template(
                "I-IV64-V6-I@C",
                Printed,
                &[
                    ("I", [0, 4, 7, 0]),
                    ("iv64", [0, 5, 8, 0]),
                    ("V6", [11, 2, 7, 11]),
                    ("I", [0, 4, 7, 0]),
                ],
            ),
            // not printed as sets; recovered by evaluating the published D-major polynomials
            template(
                "I-IV64-V6-I@D",
                Printed,
                &[
                    ("I", [2, 6, 9, 2]),
                    ("IV64", [2, 7, 11, 2]),
                    ("V6", [1, 4, 9, 1]),
                    ("I", [2, 6, 9, 2]),
                ],
            ),
            template(
                "NEAP@C",
                Printed,
                &[
                    ("bII6", [5, 8, 1, 5]),
                    ("V64", [2, 7, 11, 2]),
                    ("I", [0, 4, 7, 0]),
                ],
            ),
            // plain transposition of the C sets; no pairing reproduces the published k1/k2
            template(
                "NEAP@D",
                Printed,
                &[
                    ("bII6", [7, 10, 3, 7]),
                    ("V64", [4, 9, 1, 4]),
                    ("I", [2, 6, 9, 2]),
                ],
            ),
            template(
                "I-IV64-V6-I",
                Generic,
                &[
                    ("I", [0, 4, 7, 0]),
                    ("IV64", [0, 5, 9, 0]),
                    ("V6", [11, 2, 7, 11]),
                    ("I", [0, 4, 7, 0]),
                ],
            ),
            template(
                "I-iv64-V6-I",
                Generic,
                &[
                    ("I", [0, 4, 7, 0]),
                    ("iv64", [0, 5, 8, 0]),
                    ("V6", [11, 2, 7, 11]),
                    ("I", [0, 4, 7, 0]),
                ],
            ),
            template(
                "NEAP",
                Generic,
                &[
                    ("bII6", [5, 8, 1, 5]),
                    ("V64", [2, 7, 11, 2]),
                    ("I", [0, 4, 7, 0]),
                ],
            ),
        ]
    })
}

pub fn list_templates() -> &'static [ProgressionTemplate] {
    registry()
}

pub fn find_template(name: &str) -> Option<&'static ProgressionTemplate> {
    registry().iter().find(|t| t.name == name)
}

/// Resolves a template id to a template and key offset.
///
/// An exact name wins (so `I-IV64-V6-I@C` is the printed C-major template). Otherwise a
/// `NAME@KEY` id picks generic template `NAME` transposed to `KEY`.
pub fn resolve_template(id: &str) -> Result<(&'static ProgressionTemplate, i64), ProgressionError> {
    if let Some(t) = find_template(id) {
        return Ok((t, 0));
    }
    let unknown = || ProgressionError::UnknownTemplate(id.to_string());
    let (name, key) = id.split_once('@').ok_or_else(unknown)?;
    let t = find_template(name)
        .filter(|t| t.source == TemplateSource::Generic)
        .ok_or_else(unknown)?;
    Ok((t, key_offset(key)?))
}

/// Each representative `r` becomes `pitch_class(r + key_offset)`.
pub fn realize_progression(t: &ProgressionTemplate, key_offset: i64) -> Vec<NoteSet> {
    let offset = int(key_offset);
    t.chords
        .iter()
        .map(|c| {
            NoteSet::new(
                c.representatives
                    .iter()
                    .map(|r| pitch_class(&(r + &offset)))
                    .collect(),
            )
            .with_label(c.figure.clone())
        })
        .collect()
}

/// Interpolates `sets[k] -> sets[k + 1]` for every consecutive pair, elementwise in listed
/// order.
pub fn derive_algorithm(
    sets: &[NoteSet],
    pinning: &Pinning,
) -> Result<FunctionAlgorithm, ProgressionError> {
    if sets.len() < 2 {
        return Err(ProgressionError::TooFewSets(sets.len()));
    }
    let mut alg = FunctionAlgorithm::new();
    for (k, pair) in sets.windows(2).enumerate() {
        let problem =
            InterpolationProblem::from_sets(&pair[0], &pair[1])?.with_pinning(pinning.clone());
        alg.push(format!("f{}", k + 1), interpolate(&problem)?)?;
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::run_algorithm;
    use crate::poly::RationalPolynomial;
    use crate::rational::ratio;

    fn values(sets: &[NoteSet]) -> Vec<Vec<Rational>> {
        sets.iter().map(|s| s.values.clone()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(int).collect()
    }

    #[test]
    fn printed_templates_present() {
        let c = find_template("I-IV64-V6-I@C").unwrap();
        assert_eq!(c.chords[1].representatives, ints(&[0, 5, 8, 0]));
        assert_eq!(c.source, TemplateSource::Printed);
        let n = find_template("NEAP@C").unwrap();
        assert_eq!(n.chords[0].representatives, ints(&[5, 8, 1, 5]));
    }

    #[test]
    fn registry_invariants() {
        for t in list_templates() {
            let width = t.chords[0].representatives.len();
            for chord in &t.chords {
                assert_eq!(chord.representatives.len(), width, "{}", t.name);
                assert!(chord
                    .representatives
                    .iter()
                    .all(|r| *r >= int(0) && *r < int(12)));
            }
        }
    }

    #[test]
    fn realization_and_offsets() {
        let c = find_template("I-IV64-V6-I@C").unwrap();
        let sets = realize_progression(c, 0);
        assert_eq!(
            values(&sets),
            vec![
                ints(&[0, 4, 7, 0]),
                ints(&[0, 5, 8, 0]),
                ints(&[11, 2, 7, 11]),
                ints(&[0, 4, 7, 0])
            ]
        );
        assert_eq!(values(&realize_progression(c, 12)), values(&sets));
        let generic = find_template("I-IV64-V6-I").unwrap();
        let d = realize_progression(generic, 2);
        assert_eq!(d[0].values, ints(&[2, 6, 9, 2]));
        assert_eq!(
            values(&d),
            values(&realize_progression(
                find_template("I-IV64-V6-I@D").unwrap(),
                0
            ))
        );
        assert_eq!(values(&realize_progression(generic, -10)), values(&d));
    }

    #[test]
    fn resolves_ids() {
        let (t, off) = resolve_template("I-IV64-V6-I@C").unwrap();
        assert_eq!((t.source, off), (TemplateSource::Printed, 0));
        let (t, off) = resolve_template("NEAP@Eb").unwrap();
        assert_eq!((t.name.as_str(), off), ("NEAP", 3));
        assert!(matches!(
            resolve_template("NOPE"),
            Err(ProgressionError::UnknownTemplate(_))
        ));
        assert!(matches!(
            resolve_template("NEAP@H"),
            Err(ProgressionError::BadKey(_))
        ));
    }

    #[test]
    fn c_major_algorithm() {
        let sets = realize_progression(find_template("I-IV64-V6-I@C").unwrap(), 0);
        let alg = derive_algorithm(&sets, &Pinning::pin([3])).unwrap();
        let polys: Vec<&RationalPolynomial> = alg.steps().iter().map(|s| &s.poly).collect();
        assert_eq!(
            polys[0],
            &RationalPolynomial::new(vec![int(0), ratio(39, 28), ratio(-1, 28)])
        );
        assert_eq!(
            polys[1],
            &RationalPolynomial::new(vec![int(11), ratio(-119, 30), ratio(13, 30)])
        );
        assert_eq!(
            polys[2],
            &RationalPolynomial::new(vec![ratio(-77, 90), ratio(59, 20), ratio(-47, 180)])
        );
        assert_eq!(values(&run_algorithm(&alg, &sets[0])), values(&sets));
    }

    #[test]
    fn identical_sets_give_identity() {
        let s = NoteSet::from_ints(&[3, 5, 3]);
        let alg = derive_algorithm(&[s.clone(), s], &Pinning::minimal()).unwrap();
        assert_eq!(alg.steps()[0].poly, RationalPolynomial::identity());
    }

    #[test]
    fn cardinality_mismatch() {
        let err = derive_algorithm(
            &[
                NoteSet::from_ints(&[0, 4, 7, 0]),
                NoteSet::from_ints(&[0, 5, 8]),
            ],
            &Pinning::minimal(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            ProgressionError::Mapping(MappingError::CardinalityMismatch { left: 4, right: 3 })
        );
        assert_eq!(
            derive_algorithm(&[NoteSet::from_ints(&[1])], &Pinning::minimal()).unwrap_err(),
            ProgressionError::TooFewSets(1)
        );
    }
}

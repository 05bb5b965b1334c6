//! Pitch spellings, note-sets and their text forms.
//!
//! Pitch values are semitones relative to middle C (`C4 = 0`, `C5 = 12`). Quarter-tones sit
//! on the half-integer grid. Any rational is a valid pitch *value*; only spelling requires the
//! half-semitone grid.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{int, parse_rational, ratio, to_canonical_string, LiteralError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("unknown pitch letter in `{0}` (expected A-G)")]
    UnknownLetter(String),
    #[error("malformed accidental in `{0}`")]
    MalformedAccidental(String),
    #[error("missing octave number in `{0}`")]
    MissingOctave(String),
    #[error("unexpected trailing characters in `{0}`")]
    TrailingCharacters(String),
    #[error("value {0} is off the half-semitone grid and cannot be spelled")]
    OffGrid(String),
    #[error("note-set is empty")]
    EmptySet,
    #[error("malformed note-set entry `{entry}`: {reason}")]
    MalformedEntry { entry: String, reason: String },
    #[error("irrational values are not supported: `{0}`")]
    IrrationalUnsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    C,
    D,
    E,
    F,
    G,
    A,
    B,
}

impl Letter {
    pub const ALL: [Letter; 7] = [
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::F,
        Letter::G,
        Letter::A,
        Letter::B,
    ];

    /// Semitones above C within one octave.
    pub fn base(self) -> i64 {
        match self {
            Letter::C => 0,
            Letter::D => 2,
            Letter::E => 4,
            Letter::F => 5,
            Letter::G => 7,
            Letter::A => 9,
            Letter::B => 11,
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            'C' => Letter::C,
            'D' => Letter::D,
            'E' => Letter::E,
            'F' => Letter::F,
            'G' => Letter::G,
            'A' => Letter::A,
            'B' => Letter::B,
            _ => return None,
        })
    }

    fn natural_for(pc: i64) -> Option<Letter> {
        Letter::ALL.into_iter().find(|l| l.base() == pc)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Accidental offset counted in half-semitones, always within `-4..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Accidental(i8);

impl Accidental {
    pub const NATURAL: Accidental = Accidental(0);

    pub const ALL: [Accidental; 9] = [
        Accidental(-4),
        Accidental(-3),
        Accidental(-2),
        Accidental(-1),
        Accidental(0),
        Accidental(1),
        Accidental(2),
        Accidental(3),
        Accidental(4),
    ];

    pub fn from_half_steps(h: i8) -> Option<Accidental> {
        (-4..=4).contains(&h).then_some(Accidental(h))
    }

    pub fn half_steps(self) -> i8 {
        self.0
    }

    pub fn semitones(self) -> Rational {
        ratio(self.0 as i64, 2)
    }

    fn token(self) -> &'static str {
        match self.0 {
            -4 => "bb",
            -3 => "-3q",
            -2 => "b",
            -1 => "-q",
            0 => "",
            1 => "+q",
            2 => "#",
            3 => "+3q",
            4 => "##",
            _ => unreachable!("accidental outside -4..=4"),
        }
    }
}

// Longest match first.
const ACCIDENTAL_TOKENS: &[(&str, i8)] = &[
    ("+3q", 3),
    ("-3q", -3),
    ("##", 4),
    ("bb", -4),
    ("**", 3),
    ("+q", 1),
    ("-q", -1),
    ("x", 4),
    ("#", 2),
    ("b", -2),
    ("*", 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpellingPolicy {
    #[default]
    Sharps,
    Flats,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PitchSpelling {
    pub letter: Letter,
    pub accidental: Accidental,
    pub octave: i64,
}

impl PitchSpelling {
    pub fn new(letter: Letter, accidental: Accidental, octave: i64) -> Self {
        PitchSpelling {
            letter,
            accidental,
            octave,
        }
    }

    pub fn value(&self) -> Rational {
        spelling_to_value(self)
    }
}

impl fmt::Display for PitchSpelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.letter,
            self.accidental.token(),
            self.octave
        )
    }
}

impl Serialize for PitchSpelling {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PitchSpelling {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl FromStr for PitchSpelling {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pitch(s)
    }
}

pub fn parse_pitch(text: &str) -> Result<PitchSpelling, CodecError> {
    let token = text.trim();
    let owned = || token.to_string();
    let mut chars = token.chars();
    let letter = chars
        .next()
        .and_then(Letter::from_char)
        .ok_or_else(|| CodecError::UnknownLetter(owned()))?;
    let rest = chars.as_str();

    let (accidental, rest) = ACCIDENTAL_TOKENS
        .iter()
        .find_map(|&(tok, h)| rest.strip_prefix(tok).map(|r| (Accidental(h), r)))
        .unwrap_or((Accidental::NATURAL, rest));

    let digits_start = usize::from(rest.starts_with('-'));
    let digit_len = rest[digits_start..]
        .bytes()
        .take_while(u8::is_ascii_digit)
        .count();
    if digit_len == 0 {
        return Err(if rest.is_empty() || rest == "-" {
            CodecError::MissingOctave(owned())
        } else {
            CodecError::MalformedAccidental(owned())
        });
    }
    let end = digits_start + digit_len;
    if end != rest.len() {
        return Err(CodecError::TrailingCharacters(owned()));
    }
    let octave = rest[..end]
        .parse::<i64>()
        .map_err(|_| CodecError::MissingOctave(owned()))?;
    Ok(PitchSpelling::new(letter, accidental, octave))
}

pub fn spelling_to_value(s: &PitchSpelling) -> Rational {
    int(s.letter.base() + 12 * (s.octave - 4)) + s.accidental.semitones()
}

fn floor_div_12(n: &BigInt) -> (i64, i64) {
    let (q, r) = n.div_mod_floor(&BigInt::from(12));
    (
        q.to_i64().expect("octave out of i64 range"),
        r.to_i64().unwrap(),
    )
}

/// Spells `natural + accidental` where `natural` is an integer pitch on a white key.
fn spell_from_natural(natural: &BigInt, half_steps: i8) -> PitchSpelling {
    let (octave_index, pc) = floor_div_12(natural);
    let letter = Letter::natural_for(pc).expect("caller passes a natural pitch");
    PitchSpelling::new(letter, Accidental(half_steps), octave_index + 4)
}

fn is_natural(n: &BigInt) -> bool {
    Letter::natural_for(floor_div_12(n).1).is_some()
}

pub fn value_to_spelling(
    v: &Rational,
    policy: SpellingPolicy,
) -> Result<PitchSpelling, CodecError> {
    let doubled = v * int(2);
    if !doubled.is_integer() {
        return Err(CodecError::OffGrid(to_canonical_string(v)));
    }
    let one = BigInt::one();
    if v.is_integer() {
        let n = v.to_integer();
        if is_natural(&n) {
            return Ok(spell_from_natural(&n, 0));
        }
        return Ok(match policy {
            SpellingPolicy::Sharps => spell_from_natural(&(n - one), 2),
            SpellingPolicy::Flats => spell_from_natural(&(n + one), -2),
        });
    }
    let below = v.floor().to_integer();
    let above = v.ceil().to_integer();
    Ok(match policy {
        SpellingPolicy::Sharps if is_natural(&below) => spell_from_natural(&below, 1),
        SpellingPolicy::Sharps => spell_from_natural(&(below - one), 3),
        SpellingPolicy::Flats if is_natural(&above) => spell_from_natural(&above, -1),
        SpellingPolicy::Flats => spell_from_natural(&(above + one), -3),
    })
}

/// Representative of `v` modulo the octave, in `[0, 12)`.
pub fn pitch_class(v: &Rational) -> Rational {
    let twelve = int(12);
    v - &twelve * (v / &twelve).floor()
}

/// Score files store values as canonical rational strings and spellings as pitch tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NoteSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub values: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spellings: Option<Vec<PitchSpelling>>,
}

impl NoteSet {
    pub fn new(values: Vec<Rational>) -> Self {
        NoteSet {
            values,
            spellings: None,
            label: None,
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        NoteSet::new(values.iter().copied().map(int).collect())
    }

    /// Builds a set from spellings; values are derived from them.
    pub fn from_spellings(spellings: Vec<PitchSpelling>) -> Self {
        NoteSet {
            values: spellings.iter().map(spelling_to_value).collect(),
            spellings: Some(spellings),
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when spellings, if present, agree with the values.
    pub fn is_consistent(&self) -> bool {
        match &self.spellings {
            None => true,
            Some(sp) => {
                sp.len() == self.values.len()
                    && sp.iter().zip(&self.values).all(|(s, v)| &s.value() == v)
            }
        }
    }
}

impl FromStr for NoteSet {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_note_set(s)
    }
}

const IRRATIONAL_WORDS: &[&str] = &["pi", "π", "e", "tau", "τ", "phi", "φ", "inf", "nan"];

fn looks_irrational(entry: &str) -> bool {
    let lower = entry.trim_start_matches(['-', '+']).to_lowercase();
    IRRATIONAL_WORDS.contains(&lower.as_str())
        || lower.starts_with("sqrt")
        || lower.starts_with('√')
        || lower.contains("...")
}

enum Entry {
    Pitch(PitchSpelling),
    Number(Rational),
}

fn parse_entry(entry: &str) -> Result<Entry, CodecError> {
    if looks_irrational(entry) {
        return Err(CodecError::IrrationalUnsupported(entry.to_string()));
    }
    let first = entry.chars().next().unwrap_or(' ');
    if first.is_ascii_alphabetic() {
        return parse_pitch(entry).map(Entry::Pitch);
    }
    parse_rational(entry)
        .map(Entry::Number)
        .map_err(|e: LiteralError| CodecError::MalformedEntry {
            entry: entry.to_string(),
            reason: e.to_string(),
        })
}

/// Parses `{a, b, ...}` where each entry is a pitch token, an integer, a fraction or a
/// terminating decimal. Spellings are kept only when every entry is a pitch token.
pub fn parse_note_set(text: &str) -> Result<NoteSet, CodecError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| CodecError::MalformedEntry {
            entry: t.to_string(),
            reason: "note-set must be enclosed in braces".to_string(),
        })?;
    if inner.trim().is_empty() {
        return Err(CodecError::EmptySet);
    }
    let mut values = Vec::new();
    let mut spellings = Vec::new();
    let mut all_pitches = true;
    for raw in inner.split(',') {
        let entry = raw.trim();
        if entry.is_empty() {
            return Err(CodecError::MalformedEntry {
                entry: raw.to_string(),
                reason: "empty entry".to_string(),
            });
        }
        match parse_entry(entry)? {
            Entry::Pitch(p) => {
                values.push(p.value());
                spellings.push(p);
            }
            Entry::Number(v) => {
                all_pitches = false;
                values.push(v);
            }
        }
    }
    Ok(NoteSet {
        values,
        spellings: all_pitches.then_some(spellings),
        label: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatMode {
    Numeric,
    Spelled,
}

/// Renders a set in braces. Spelled mode reuses stored spellings when the set carries them,
/// otherwise spells each value with `policy`.
pub fn format_note_set(
    ns: &NoteSet,
    mode: FormatMode,
    policy: SpellingPolicy,
) -> Result<String, CodecError> {
    if ns.is_empty() {
        return Err(CodecError::EmptySet);
    }
    let items: Vec<String> = match mode {
        FormatMode::Numeric => ns.values.iter().map(to_canonical_string).collect(),
        FormatMode::Spelled => match &ns.spellings {
            Some(sp) if ns.is_consistent() => sp.iter().map(ToString::to_string).collect(),
            _ => ns
                .values
                .iter()
                .map(|v| value_to_spelling(v, policy).map(|s| s.to_string()))
                .collect::<Result<_, _>>()?,
        },
    };
    Ok(format!("{{{}}}", items.join(", ")))
}

impl fmt::Display for NoteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.values.iter().map(to_canonical_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// Parses a key name such as `D`, `Bb` or `F#` into its semitone offset from C.
pub fn key_offset(name: &str) -> Result<i64, CodecError> {
    let spelling = parse_pitch(&format!("{}4", name.trim()))?;
    let v = spelling.value();
    if !v.is_integer() {
        return Err(CodecError::OffGrid(to_canonical_string(&v)));
    }
    Ok(v.to_integer().to_i64().unwrap_or_default())
}

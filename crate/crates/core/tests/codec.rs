use notemap::pitch::{
    format_note_set, key_offset, parse_note_set, parse_pitch, value_to_spelling, Accidental,
    CodecError, FormatMode, Letter, PitchSpelling, SpellingPolicy,
};
use notemap::rational::{int, ratio};

#[test]
fn exhaustive_spelling_sweep() {
    let mut count = 0;
    for letter in Letter::ALL {
        for acc in Accidental::ALL {
            for octave in 0..=8 {
                let sp = PitchSpelling::new(letter, acc, octave);
                let text = sp.to_string();
                let back = parse_pitch(&text).unwrap();
                assert_eq!(back, sp, "{text}");
                assert_eq!(back.value(), sp.value());
                let expected =
                    int(letter.base() + 12 * (octave - 4)) + ratio(i64::from(acc.half_steps()), 2);
                assert_eq!(sp.value(), expected, "{text}");
                count += 1;
            }
        }
    }
    assert_eq!(count, 7 * 9 * 9);
}

#[test]
fn enharmonic_pairs_agree() {
    for (a, b) in [
        ("G#4", "Ab4"),
        ("A#4", "Bb4"),
        ("C#4", "Db4"),
        ("D#4", "Eb4"),
        ("F#4", "Gb4"),
        ("E#4", "F4"),
        ("B#3", "C4"),
        ("Cb5", "B4"),
        ("C##4", "D4"),
        ("Cx4", "D4"),
        ("Ebb4", "D4"),
        ("A+3q4", "A**4"),
        ("A+q4", "A*4"),
        ("B-q3", "A+3q3"),
    ] {
        assert_eq!(
            parse_pitch(a).unwrap().value(),
            parse_pitch(b).unwrap().value(),
            "{a} vs {b}"
        );
    }
}

#[test]
fn anchor_values() {
    assert_eq!(parse_pitch("C4").unwrap().value(), int(0));
    assert_eq!(parse_pitch("C5").unwrap().value(), int(12));
    assert_eq!(parse_pitch("C#4").unwrap().value(), int(1));
    assert_eq!(parse_pitch("D3").unwrap().value(), int(-10));
    assert_eq!(parse_pitch("A+q3").unwrap().value(), ratio(-5, 2));
}

#[test]
fn spelling_prefers_naturals_and_policy() {
    let spell = |v, p| value_to_spelling(&v, p).unwrap().to_string();
    assert_eq!(spell(int(10), SpellingPolicy::Sharps), "A#4");
    assert_eq!(spell(int(10), SpellingPolicy::Flats), "Bb4");
    assert_eq!(spell(int(5), SpellingPolicy::Flats), "F4");
    assert_eq!(spell(ratio(-5, 2), SpellingPolicy::Sharps), "A+q3");
    assert!(matches!(
        value_to_spelling(&ratio(1, 3), SpellingPolicy::Sharps),
        Err(CodecError::OffGrid(_))
    ));
}

#[test]
fn set_forms() {
    let s = parse_note_set("{D3, A3, C4, F#4}").unwrap();
    assert_eq!(s.to_string(), "{-10, -3, 0, 6}");
    assert_eq!(
        format_note_set(&s, FormatMode::Spelled, SpellingPolicy::Flats).unwrap(),
        "{D3, A3, C4, F#4}"
    );
    let n = parse_note_set("{5, 2, 1, -2.5, -7/2}").unwrap();
    assert_eq!(n.spellings, None);
    assert_eq!(n.to_string(), "{5, 2, 1, -5/2, -7/2}");
    assert_eq!(
        format_note_set(&n, FormatMode::Spelled, SpellingPolicy::Sharps).unwrap(),
        "{F4, D4, C#4, A+q3, G+3q3}"
    );
    assert!(matches!(parse_note_set("{}"), Err(CodecError::EmptySet)));
    assert!(matches!(
        parse_note_set("{1, pi}"),
        Err(CodecError::IrrationalUnsupported(_))
    ));
    assert!(matches!(
        parse_note_set("{1, sqrt2}"),
        Err(CodecError::IrrationalUnsupported(_))
    ));
    assert!(parse_note_set("{H4}").is_err());
    assert!(parse_note_set("{C}").is_err());
}

#[test]
fn keys() {
    assert_eq!(key_offset("C").unwrap(), 0);
    assert_eq!(key_offset("D").unwrap(), 2);
    assert_eq!(key_offset("Bb").unwrap(), 10);
    assert!(key_offset("A+q").is_err());
}

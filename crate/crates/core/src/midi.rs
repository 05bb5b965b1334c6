//! Standard MIDI File (format 0) rendering of a score's note-sets as quarter-note block chords.
//!
//! Quarter-tones are played with pitch bend over a 2-semitone bend range. A bent note gets a
//! channel of its own so the bend cannot leak onto other notes; unbent notes share channel 0.
//! Bent notes take channels 1-8 and 10-15 in rotation (9 is left to percussion).

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::rational::{int, ratio, to_canonical_string, Rational};
use crate::score::Score;

pub const DIVISION: u16 = 480;
const MIDDLE_C: i64 = 60;
const CENTER_BEND: i64 = 8192;
/// Bend units per semitone with a range of two semitones.
const BEND_PER_SEMITONE: i64 = 4096;
const MICROSECONDS_PER_QUARTER: u32 = 500_000;
const BENT_CHANNELS: [u8; 14] = [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidiError {
    #[error("pitch value {value} maps to MIDI key {key}, outside 0..=127")]
    KeyOutOfRange { value: String, key: i64 },
    #[error("pitch value {0} is not on the quarter-tone grid")]
    OffGrid(String),
    #[error("a chord needs {0} bent notes but only 14 channels are available")]
    ChannelsExhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MidiOptions {
    pub velocity: u8,
}

impl Default for MidiOptions {
    fn default() -> Self {
        MidiOptions { velocity: 80 }
    }
}

/// MIDI key and 14-bit bend for a pitch value. The key is the value truncated toward zero,
/// which rounds exact half-semitone ties toward zero.
pub fn key_and_bend(v: &Rational) -> Result<(u8, u16), MidiError> {
    if !(v * int(2)).is_integer() {
        return Err(MidiError::OffGrid(to_canonical_string(v)));
    }
    let m = v.trunc();
    let frac = v - &m;
    let key = MIDDLE_C + m.to_integer().to_i64().unwrap_or(i64::MAX / 2);
    if !(0..=127).contains(&key) {
        return Err(MidiError::KeyOutOfRange {
            value: to_canonical_string(v),
            key,
        });
    }
    let bend = int(CENTER_BEND) + frac * int(BEND_PER_SEMITONE);
    Ok((
        key as u8,
        bend.to_integer().to_u16().expect("bend within 14 bits"),
    ))
}

fn is_bent(bend: u16) -> bool {
    i64::from(bend) != CENTER_BEND
}

struct Track {
    bytes: Vec<u8>,
    pending_delta: u32,
}

impl Track {
    fn event(&mut self, data: &[u8]) {
        let mut delta = self.pending_delta;
        let mut vlq = vec![(delta & 0x7F) as u8];
        delta >>= 7;
        while delta > 0 {
            vlq.push(0x80 | (delta & 0x7F) as u8);
            delta >>= 7;
        }
        vlq.reverse();
        self.bytes.extend(vlq);
        self.bytes.extend_from_slice(data);
        self.pending_delta = 0;
    }
}

fn bend_range_preamble(track: &mut Track, ch: u8) {
    let cc = 0xB0 | ch;
    for (controller, value) in [
        (0x65, 0),
        (0x64, 0),
        (0x06, 2),
        (0x26, 0),
        (0x65, 0x7F),
        (0x64, 0x7F),
    ] {
        track.event(&[cc, controller, value]);
    }
}

pub fn export_midi(score: &Score, options: &MidiOptions) -> Result<Vec<u8>, MidiError> {
    let chords: Vec<Vec<(u8, u16)>> = score
        .sets
        .iter()
        .map(|s| s.values.iter().map(key_and_bend).collect())
        .collect::<Result<_, _>>()?;
    let mut track = Track {
        bytes: Vec::new(),
        pending_delta: 0,
    };
    let tempo = MICROSECONDS_PER_QUARTER.to_be_bytes();
    track.event(&[0xFF, 0x51, 0x03, tempo[1], tempo[2], tempo[3]]);
    let mut prepared = [false; 16];
    let mut next_bent = 0usize;
    let velocity = options.velocity.min(127);
    for chord in &chords {
        let bent = chord.iter().filter(|(_, b)| is_bent(*b)).count();
        if bent > BENT_CHANNELS.len() {
            return Err(MidiError::ChannelsExhausted(bent));
        }
        let mut sounding = Vec::with_capacity(chord.len());
        for &(key, bend) in chord {
            let ch = if is_bent(bend) {
                let ch = BENT_CHANNELS[next_bent % BENT_CHANNELS.len()];
                next_bent += 1;
                if !prepared[ch as usize] {
                    bend_range_preamble(&mut track, ch);
                    prepared[ch as usize] = true;
                }
                track.event(&[0xE0 | ch, (bend & 0x7F) as u8, (bend >> 7) as u8]);
                ch
            } else {
                0
            };
            track.event(&[0x90 | ch, key, velocity]);
            sounding.push((ch, key));
        }
        track.pending_delta = u32::from(DIVISION);
        for (ch, key) in sounding {
            track.event(&[0x80 | ch, key, 0x40]);
        }
    }
    track.event(&[0xFF, 0x2F, 0x00]);

    let mut out = Vec::with_capacity(22 + track.bytes.len());
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&0u16.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&DIVISION.to_be_bytes());
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(track.bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(&track.bytes);
    Ok(out)
}

/// Inverse of [`key_and_bend`] for bends this module produces.
pub fn value_of(key: u8, bend: u16) -> Rational {
    let offset = i64::from(bend) - CENTER_BEND;
    let frac = ratio(offset, BEND_PER_SEMITONE);
    debug_assert!(frac.abs() <= ratio(1, 2));
    int(i64::from(key) - MIDDLE_C) + frac
}

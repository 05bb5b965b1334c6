//! Octave-ordering rule for arranging a note-set across beats: an element may appear in
//! another octave only after it has sounded in its own octave.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pitch::NoteSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RealizationEvent {
    pub set_index: usize,
    pub element_index: usize,
    /// Whole octaves added to the element's value.
    pub octave_shift: i32,
    /// Ordinal position in time; equal onsets sound together.
    pub onset: u64,
}

impl RealizationEvent {
    pub fn new(set_index: usize, element_index: usize, octave_shift: i32, onset: u64) -> Self {
        RealizationEvent {
            set_index,
            element_index,
            octave_shift,
            onset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("event {position} references set {set_index}, element {element_index}, which does not exist")]
    BadReference {
        position: usize,
        set_index: usize,
        element_index: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// Offending events, sorted.
    pub violations: Vec<RealizationEvent>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A shifted event is a violation unless an unshifted event for the same element has a
/// strictly earlier onset.
pub fn validate_realization(
    events: &[RealizationEvent],
    sets: &[NoteSet],
) -> Result<Verdict, RealizeError> {
    for (position, e) in events.iter().enumerate() {
        if sets
            .get(e.set_index)
            .is_none_or(|s| e.element_index >= s.len())
        {
            return Err(RealizeError::BadReference {
                position,
                set_index: e.set_index,
                element_index: e.element_index,
            });
        }
    }
    let first_home = |e: &RealizationEvent| {
        events
            .iter()
            .filter(|h| {
                h.octave_shift == 0
                    && (h.set_index, h.element_index) == (e.set_index, e.element_index)
            })
            .map(|h| h.onset)
            .min()
    };
    let mut violations: Vec<RealizationEvent> = events
        .iter()
        .filter(|e| e.octave_shift != 0 && first_home(e).is_none_or(|onset| onset >= e.onset))
        .cloned()
        .collect();
    violations.sort();
    Ok(Verdict { violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar_two() -> Vec<NoteSet> {
        vec![NoteSet::from_ints(&[-7, 1, 7, 14])]
    }

    #[test]
    fn home_octave_first_then_shifted() {
        let mut events: Vec<RealizationEvent> =
            (0..4).map(|i| RealizationEvent::new(0, i, 0, 0)).collect();
        events.push(RealizationEvent::new(0, 2, -1, 1));
        events.push(RealizationEvent::new(0, 0, 1, 1));
        assert!(validate_realization(&events, &bar_two())
            .unwrap()
            .is_valid());
    }

    #[test]
    fn shifted_before_home() {
        let events = vec![
            RealizationEvent::new(0, 2, -1, 0),
            RealizationEvent::new(0, 2, 0, 1),
        ];
        let v = validate_realization(&events, &bar_two()).unwrap();
        assert_eq!(v.violations, vec![events[0].clone()]);
    }

    #[test]
    fn simultaneous_is_not_before() {
        let events = vec![
            RealizationEvent::new(0, 1, 0, 3),
            RealizationEvent::new(0, 1, 1, 3),
        ];
        assert_eq!(
            validate_realization(&events, &bar_two())
                .unwrap()
                .violations
                .len(),
            1
        );
    }

    #[test]
    fn empty_is_valid() {
        assert!(validate_realization(&[], &[]).unwrap().is_valid());
    }

    #[test]
    fn bad_references() {
        let sets = bar_two();
        assert!(validate_realization(&[RealizationEvent::new(0, 4, 0, 0)], &sets).is_err());
        assert_eq!(
            validate_realization(
                &[
                    RealizationEvent::new(0, 0, 0, 0),
                    RealizationEvent::new(1, 0, 0, 0)
                ],
                &sets
            ),
            Err(RealizeError::BadReference {
                position: 1,
                set_index: 1,
                element_index: 0
            })
        );
    }
}

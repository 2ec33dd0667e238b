//! Minimum distance to the identity over a word ball, by prefix-sharing
//! depth-first walks partitioned by first letter.

use std::collections::HashSet;

use super::group::GroupElement;
use super::rep::step;
use crate::ball::{self, ReducedWords};
use crate::exec::{self, Execution};
use crate::presentation::Presentation;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Scan {
    /// Smallest distance to the identity (`+∞` for an empty ball).
    pub min: f64,
    /// Lexicographically first word attaining `min`.
    pub argmin: Vec<u32>,
    /// Shortest, then lexicographically smallest, word within `tol`.
    pub failure: Option<Vec<u32>>,
}

impl Scan {
    fn empty() -> Scan {
        Scan {
            min: f64::INFINITY,
            argmin: Vec::new(),
            failure: None,
        }
    }

    /// Combines scans of consecutive first-letter blocks, earlier block first.
    fn merge(mut self, later: Scan) -> Scan {
        if later.min < self.min {
            self.min = later.min;
            self.argmin = later.argmin;
        }
        self.failure = match (self.failure, later.failure) {
            (Some(a), Some(b)) => Some(if b.len() < a.len() { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Words of length `1..=max_len` that the presentation declares trivial.
/// Only words longer than half the relator can be.
pub(crate) fn trivial_words(p: &Presentation, max_len: usize) -> HashSet<Vec<u32>> {
    let mut set = HashSet::new();
    if !p.is_surface() {
        return set;
    }
    let half = p.relator().len() / 2;
    for len in (half + 1)..=max_len {
        set.extend(ReducedWords::new(p.rank(), len).filter(|w| p.is_trivial_codes(w)));
    }
    set
}

/// Scans all reduced words of length `1..=max_len` over `letters` (indexed by
/// code), skipping those in `skip`.
pub(crate) fn scan_ball<E: GroupElement>(
    letters: &[E],
    max_len: usize,
    tol: f64,
    skip: &HashSet<Vec<u32>>,
    exec: Execution,
) -> Scan {
    let rank = letters.len() / 2;
    let blocks = exec::map_indexed(exec, letters.len(), |c| {
        let c = c as u32;
        let mut scan = Scan::empty();
        let step_fn =
            |prefix: &E, code: u32, depth: usize| step(prefix, &letters[code as usize], depth);
        ball::walk(
            rank,
            max_len,
            c..c + 1,
            E::identity(),
            &step_fn,
            &mut |codes: &[u32], g: &E| {
                if !skip.is_empty() && skip.contains(codes) {
                    return;
                }
                let d = g.distance_to_identity();
                if d < scan.min {
                    scan.min = d;
                    scan.argmin = codes.to_vec();
                }
                if d <= tol && scan.failure.as_ref().is_none_or(|f| codes.len() < f.len()) {
                    scan.failure = Some(codes.to_vec());
                }
            },
        );
        scan
    });
    blocks.into_iter().fold(Scan::empty(), Scan::merge)
}

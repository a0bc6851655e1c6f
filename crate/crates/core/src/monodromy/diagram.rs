//! Braided wiring diagrams: the combinatorial record of how the fiber points
//! of a pencil projection move along a path through all singular values.
//!
//! Strand positions are 0-based and ordered by real part in the fiber. A braid
//! letter `+(p+1)` is the half-twist exchanging positions `p` and `p+1` with
//! the left point passing below (counterclockwise); `-(p+1)` is its inverse.
//! Each event reverses its block by the positive half-twist of the block.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    /// Index into the arrangement's flat list.
    pub flat: usize,
    /// Hyperplane indices through the singular point, sorted.
    pub lines: Vec<usize>,
    /// First position of the block just before the event.
    pub start: usize,
    pub size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramSource {
    RealSweep,
    Tracked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidedWiringDiagram {
    pub degree: usize,
    pub strands: usize,
    pub removed: usize,
    /// Center of the pencil, as cyclotomic literals.
    pub center: Vec<String>,
    /// Side of the sweep axis holding the basepoint.
    pub basepoint: String,
    pub source: DiagramSource,
    /// `initial_order[p]` is the hyperplane at position `p` at the basepoint.
    pub initial_order: Vec<usize>,
    pub events: Vec<Event>,
    /// Braid words before the first event, between consecutive events, and after the last.
    pub braids: Vec<Vec<i32>>,
}

/// One elementary step of a diagram in path order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Twist {
        pos: usize,
        positive: bool,
    },
    /// The local relation of event `k` is read off here, before its reversal twists.
    Event(usize),
}

/// Positive half-twist word of the block `[start, start + size)`, in time order.
pub fn block_reversal(start: usize, size: usize) -> Vec<usize> {
    let mut word = Vec::with_capacity(size * size.saturating_sub(1) / 2);
    for r in (1..size).rev() {
        word.extend(start..start + r);
    }
    word
}

impl BraidedWiringDiagram {
    /// All elementary steps in path order, reversals expanded.
    pub fn steps(&self) -> Vec<Step> {
        let mut out = Vec::new();
        for (k, word) in self.braids.iter().enumerate() {
            if k > 0 {
                let e = &self.events[k - 1];
                out.push(Step::Event(k - 1));
                out.extend(
                    block_reversal(e.start, e.size)
                        .into_iter()
                        .map(|pos| Step::Twist { pos, positive: true }),
                );
            }
            for &letter in word {
                let pos = letter.unsigned_abs() as usize - 1;
                out.push(Step::Twist {
                    pos,
                    positive: letter > 0,
                });
            }
        }
        out
    }

    pub fn braid_letter_count(&self) -> usize {
        self.braids.iter().map(Vec::len).sum()
    }

    /// Checks shapes, blocks and the end-to-end permutation; returns the final order.
    pub fn validate(&self) -> Result<Vec<usize>> {
        let bad = |msg: String| Err(Error::Invariant(format!("diagram: {msg}")));
        if self.strands + 1 != self.degree || self.initial_order.len() != self.strands {
            return bad("strand count does not match degree".into());
        }
        let mut seen = self.initial_order.clone();
        seen.push(self.removed);
        seen.sort_unstable();
        if seen != (0..self.degree).collect::<Vec<_>>() {
            return bad("initial order is not a permutation of the remaining lines".into());
        }
        if self.braids.len() != self.events.len() + 1 {
            return bad("need one braid word per gap between events".into());
        }
        if self
            .braids
            .iter()
            .flatten()
            .any(|&l| l == 0 || l.unsigned_abs() as usize >= self.strands)
        {
            return bad("braid letter out of range".into());
        }
        let mut order = self.initial_order.clone();
        for step in self.steps() {
            match step {
                Step::Twist { pos, .. } => order.swap(pos, pos + 1),
                Step::Event(k) => {
                    let e = &self.events[k];
                    if e.size < 2 || e.size != e.lines.len() || e.start + e.size > self.strands {
                        return bad(format!("event {k} has an invalid block"));
                    }
                    let mut block = order[e.start..e.start + e.size].to_vec();
                    block.sort_unstable();
                    if block != e.lines {
                        return bad(format!(
                            "event {k}: lines {:?} are not consecutive at positions {}..{}",
                            e.lines,
                            e.start,
                            e.start + e.size
                        ));
                    }
                }
            }
        }
        Ok(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_word_reverses() {
        for q in 2..7 {
            let mut v: Vec<usize> = (0..q + 2).collect();
            for p in block_reversal(1, q) {
                v.swap(p, p + 1);
            }
            let mut want: Vec<usize> = (0..q + 2).collect();
            want[1..1 + q].reverse();
            assert_eq!(v, want);
            assert_eq!(block_reversal(1, q).len(), q * (q - 1) / 2);
        }
    }

    #[test]
    fn validation_catches_split_blocks() {
        let mut d = BraidedWiringDiagram {
            degree: 4,
            strands: 3,
            removed: 3,
            center: vec![],
            basepoint: "right".into(),
            source: DiagramSource::RealSweep,
            initial_order: vec![0, 1, 2],
            events: vec![Event {
                flat: 0,
                lines: vec![0, 1],
                start: 0,
                size: 2,
            }],
            braids: vec![vec![], vec![]],
        };
        assert_eq!(d.validate().unwrap(), vec![1, 0, 2]);
        d.braids[0] = vec![1];
        assert_eq!(d.validate().unwrap(), vec![0, 1, 2]);
        d.braids[0] = vec![2];
        assert!(d.validate().is_err());
    }
}

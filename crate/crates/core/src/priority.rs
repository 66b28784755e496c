//! Sources of string priorities.
//!
//! A trie asks its source for a priority exactly once per newly stored
//! string. Production trees use [`SeededPriorities`]; tests that need a
//! fixed shape hand out priorities from a [`FixedPriorities`] map.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{lossy, Error, Result};

/// Default priority ceiling, `2^31 - 1`.
pub const DEFAULT_CEILING: u32 = (1 << 31) - 1;

/// Hands out the priority of a string that is about to be stored.
///
/// Implementations must return a value in `[1, ceiling]`; the trie rejects
/// anything else before touching its nodes.
pub trait PrioritySource {
    fn draw(&mut self, s: &[u8], ceiling: u32) -> Result<u32>;
}

/// Uniform priorities on `[1, ceiling]` from a seeded ChaCha stream.
#[derive(Debug, Clone)]
pub struct SeededPriorities {
    rng: ChaCha8Rng,
}

impl SeededPriorities {
    pub fn new(seed: u64) -> Self {
        SeededPriorities {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl PrioritySource for SeededPriorities {
    fn draw(&mut self, _s: &[u8], ceiling: u32) -> Result<u32> {
        Ok(self.rng.gen_range(1..=ceiling))
    }
}

/// Explicit per-string priorities, for deterministic shapes in tests.
///
/// Re-inserting a string after deleting it yields the same priority again.
#[derive(Debug, Clone, Default)]
pub struct FixedPriorities {
    map: HashMap<Vec<u8>, u32>,
}

impl FixedPriorities {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, s: impl Into<Vec<u8>>, priority: u32) -> &mut Self {
        self.map.insert(s.into(), priority);
        self
    }

    pub fn get(&self, s: &[u8]) -> Option<u32> {
        self.map.get(s).copied()
    }
}

impl<S: Into<Vec<u8>>> FromIterator<(S, u32)> for FixedPriorities {
    fn from_iter<I: IntoIterator<Item = (S, u32)>>(iter: I) -> Self {
        FixedPriorities {
            map: iter.into_iter().map(|(s, p)| (s.into(), p)).collect(),
        }
    }
}

impl PrioritySource for FixedPriorities {
    fn draw(&mut self, s: &[u8], _ceiling: u32) -> Result<u32> {
        self.get(s).ok_or_else(|| Error::MissingPriority(lossy(s)))
    }
}

impl<P: PrioritySource + ?Sized> PrioritySource for &mut P {
    fn draw(&mut self, s: &[u8], ceiling: u32) -> Result<u32> {
        (**self).draw(s, ceiling)
    }
}

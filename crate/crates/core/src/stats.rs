//! Workload generation, depth profiles and benchmarking.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{lossy, Error, Result};
use crate::priority::{PrioritySource, SeededPriorities, DEFAULT_CEILING};
use crate::trie::{DeleteOutcome, InsertOutcome, RTrie};

/// Order in which generated strings are returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    #[default]
    Random,
    Lexicographic,
    Reverse,
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Order::Random),
            "lexicographic" | "lex" => Ok(Order::Lexicographic),
            "reverse" => Ok(Order::Reverse),
            other => Err(Error::InvalidArgument(format!("unknown order {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Workload {
    pub alphabet_size: usize,
    pub len_min: usize,
    pub len_max: usize,
    pub count: usize,
    pub order: Order,
    pub seed: u64,
}

impl Default for Workload {
    fn default() -> Self {
        Workload {
            alphabet_size: 26,
            len_min: 5,
            len_max: 15,
            count: 10_000,
            order: Order::Random,
            seed: 42,
        }
    }
}

const SYMBOLS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// The first `size` symbols: lowercase, uppercase, digits, then the
/// remaining byte values in ascending order.
pub fn alphabet(size: usize) -> Vec<u8> {
    let mut symbols = SYMBOLS.to_vec();
    symbols.extend((0..=255u8).filter(|b| !SYMBOLS.contains(b)));
    symbols.truncate(size);
    symbols
}

/// Number of distinct strings with lengths in `[len_min, len_max]`,
/// saturating.
fn universe_size(alphabet: usize, len_min: usize, len_max: usize) -> u128 {
    (len_min..=len_max).fold(0u128, |acc, k| {
        let per_len = (0..k).fold(1u128, |p, _| p.saturating_mul(alphabet as u128));
        acc.saturating_add(per_len)
    })
}

/// Above this many candidates the dense path stops enumerating.
const ENUMERATION_LIMIT: u128 = 1 << 20;

/// Distinct random strings: uniform length in `[len_min, len_max]`, then
/// uniform symbols. Deterministic for a given workload.
pub fn generate(w: &Workload) -> Result<Vec<Vec<u8>>> {
    if !(1..=256).contains(&w.alphabet_size) {
        return Err(Error::InvalidArgument(format!(
            "alphabet size {} not in [1, 256]",
            w.alphabet_size
        )));
    }
    if w.len_min < 1 || w.len_min > w.len_max {
        return Err(Error::InvalidArgument(format!(
            "length range [{}, {}] is empty or admits the empty string",
            w.len_min, w.len_max
        )));
    }
    let universe = universe_size(w.alphabet_size, w.len_min, w.len_max);
    if universe < w.count as u128 {
        return Err(Error::InvalidArgument(format!(
            "only {universe} distinct strings exist, {} requested",
            w.count
        )));
    }

    let symbols = alphabet(w.alphabet_size);
    let mut rng = ChaCha8Rng::seed_from_u64(w.seed);
    let mut out = if universe <= ENUMERATION_LIMIT && universe <= 4 * w.count as u128 {
        // Dense request: rejection sampling would stall, sample without
        // replacement from the full enumeration instead.
        let mut all = enumerate(&symbols, w.len_min, w.len_max);
        all.shuffle(&mut rng);
        all.truncate(w.count);
        all
    } else {
        let mut seen = HashSet::with_capacity(w.count);
        let mut out = Vec::with_capacity(w.count);
        let mut attempts = 0usize;
        while out.len() < w.count {
            if attempts == 10 * w.count {
                return Err(Error::InvalidArgument(format!(
                    "gave up after {attempts} attempts with {} distinct strings",
                    out.len()
                )));
            }
            attempts += 1;
            let len = rng.gen_range(w.len_min..=w.len_max);
            let s: Vec<u8> = (0..len)
                .map(|_| symbols[rng.gen_range(0..symbols.len())])
                .collect();
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    };

    match w.order {
        Order::Random => {}
        Order::Lexicographic => out.sort(),
        Order::Reverse => out.sort_by(|a, b| b.cmp(a)),
    }
    Ok(out)
}

fn enumerate(symbols: &[u8], len_min: usize, len_max: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for len in 1..=len_max {
        layer = layer
            .iter()
            .flat_map(|p| {
                symbols.iter().map(move |&c| {
                    let mut s = p.clone();
                    s.push(c);
                    s
                })
            })
            .collect();
        if len >= len_min {
            out.extend(layer.iter().cloned());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub len: usize,
    pub sidesteps: usize,
    pub depth: usize,
}

/// Search-path statistics over a set of member strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthProfile {
    pub n: usize,
    pub max_sidesteps: usize,
    pub mean_sidesteps: f64,
    pub max_depth: usize,
    pub mean_depth: f64,
    #[serde(skip)]
    pub per_string: Vec<ProfileEntry>,
}

/// Profiles the search paths of `strings`, all of which must be members.
pub fn profile<P, I, S>(trie: &RTrie<P>, strings: I) -> Result<DepthProfile>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut per_string = Vec::new();
    for s in strings {
        let s = s.as_ref();
        let path = trie.search_path(s)?;
        if !path.found {
            return Err(Error::NotAMember(lossy(s)));
        }
        per_string.push(ProfileEntry {
            len: s.len(),
            sidesteps: path.sidesteps,
            depth: path.depth,
        });
    }
    let n = per_string.len();
    let mean = |f: fn(&ProfileEntry) -> usize| {
        if n == 0 {
            0.0
        } else {
            per_string.iter().map(f).sum::<usize>() as f64 / n as f64
        }
    };
    Ok(DepthProfile {
        n,
        max_sidesteps: per_string.iter().map(|e| e.sidesteps).max().unwrap_or(0),
        mean_sidesteps: mean(|e| e.sidesteps),
        max_depth: per_string.iter().map(|e| e.depth).max().unwrap_or(0),
        mean_depth: mean(|e| e.depth),
        per_string,
    })
}

/// Rotations performed by one update, with the sidesteps of the string's
/// search path in the tree before and after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpdateCost {
    pub rotations: u64,
    pub sidesteps_before: usize,
    pub sidesteps_after: usize,
}

pub fn traced_insert<P: PrioritySource>(
    trie: &mut RTrie<P>,
    s: &[u8],
) -> Result<(InsertOutcome, UpdateCost)> {
    let sidesteps_before = trie.search_path(s)?.sidesteps;
    let rotations = trie.rotations();
    let outcome = trie.insert(s)?;
    Ok((
        outcome,
        UpdateCost {
            rotations: trie.rotations() - rotations,
            sidesteps_before,
            sidesteps_after: trie.search_path(s)?.sidesteps,
        },
    ))
}

pub fn traced_delete<P: PrioritySource>(
    trie: &mut RTrie<P>,
    s: &[u8],
) -> Result<(DeleteOutcome, UpdateCost)> {
    let sidesteps_before = trie.search_path(s)?.sidesteps;
    let rotations = trie.rotations();
    let outcome = trie.delete(s)?;
    Ok((
        outcome,
        UpdateCost {
            rotations: trie.rotations() - rotations,
            sidesteps_before,
            sidesteps_after: trie.search_path(s)?.sidesteps,
        },
    ))
}

/// Which operation classes a benchmark exercises besides insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpMix {
    pub search: bool,
    pub delete: bool,
}

impl Default for OpMix {
    fn default() -> Self {
        OpMix {
            search: true,
            delete: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchConfig {
    pub workload: Workload,
    pub mix: OpMix,
    pub ceiling: u32,
    /// Timed repetitions; the median is reported.
    pub runs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            workload: Workload::default(),
            mix: OpMix::default(),
            ceiling: DEFAULT_CEILING,
            runs: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PhaseTiming {
    pub ops: usize,
    pub median_ns: u64,
    pub ops_per_sec: f64,
}

impl PhaseTiming {
    fn from_samples(ops: usize, mut samples: Vec<Duration>) -> Self {
        if ops == 0 || samples.is_empty() {
            return PhaseTiming::default();
        }
        samples.sort();
        let median = samples[samples.len() / 2];
        let secs = median.as_secs_f64();
        PhaseTiming {
            ops,
            median_ns: median.as_nanos() as u64,
            ops_per_sec: if secs > 0.0 { ops as f64 / secs } else { 0.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct BenchReport {
    pub count: usize,
    pub runs: usize,
    pub insert: PhaseTiming,
    pub search: PhaseTiming,
    pub delete: PhaseTiming,
    pub insert_rotations: u64,
    /// Sidesteps of each inserted string's search path before insertion.
    pub insert_sidesteps: u64,
    /// Inserts whose rotations exceeded their pre-insert sidesteps.
    pub insert_bound_violations: usize,
    pub delete_rotations: u64,
    pub max_sidesteps: usize,
    pub mean_sidesteps: f64,
    pub final_len: usize,
}

/// Runs an instrumented warm-up pass followed by `runs` timed passes.
pub fn bench_run(config: &BenchConfig) -> Result<BenchReport> {
    let strings = generate(&config.workload)?;
    let seed = config.workload.seed;
    let mut report = BenchReport {
        count: strings.len(),
        runs: config.runs,
        ..BenchReport::default()
    };
    if strings.is_empty() {
        return Ok(report);
    }

    // Warm-up, instrumented.
    let mut trie = RTrie::with_priorities(config.ceiling, SeededPriorities::new(seed))?;
    for s in &strings {
        let (_, cost) = traced_insert(&mut trie, s)?;
        report.insert_rotations += cost.rotations;
        report.insert_sidesteps += cost.sidesteps_before as u64;
        if cost.rotations > cost.sidesteps_before as u64 {
            report.insert_bound_violations += 1;
        }
    }
    let prof = profile(&trie, &strings)?;
    report.max_sidesteps = prof.max_sidesteps;
    report.mean_sidesteps = prof.mean_sidesteps;
    if config.mix.delete {
        let before = trie.rotations();
        for s in &strings {
            trie.delete(s)?;
        }
        report.delete_rotations = trie.rotations() - before;
    }
    report.final_len = trie.len();

    let mut samples = [Vec::new(), Vec::new(), Vec::new()];
    for _ in 0..config.runs {
        let mut trie = RTrie::with_priorities(config.ceiling, SeededPriorities::new(seed))?;
        let t = Instant::now();
        for s in &strings {
            trie.insert(s)?;
        }
        samples[0].push(t.elapsed());
        if config.mix.search {
            let t = Instant::now();
            let mut hits = 0usize;
            for s in &strings {
                hits += trie.contains(s)? as usize;
            }
            samples[1].push(t.elapsed());
            debug_assert_eq!(hits, strings.len());
        }
        if config.mix.delete {
            let t = Instant::now();
            for s in &strings {
                trie.delete(s)?;
            }
            samples[2].push(t.elapsed());
        }
    }
    let [ins, search, del] = samples;
    let n = strings.len();
    report.insert = PhaseTiming::from_samples(n, ins);
    report.search = PhaseTiming::from_samples(n, search);
    report.delete = PhaseTiming::from_samples(n, del);
    Ok(report)
}

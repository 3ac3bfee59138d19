//! Orbit and stabilizer computation for the projectivity group acting on
//! lines.
//!
//! Orbits are closed breadth-first under the three-element generating set
//! (each generator has finite order, so applying generators alone reaches
//! the whole orbit). Whole-class partitions mark visited lines in a dense
//! atomic bitset indexed by a rank that drops the leading canonical digit,
//! so memory stays proportional to the number of lines rather than to the
//! raw key space. Frontier expansion may be sharded across worker threads;
//! claims go through `fetch_or`, so each line is counted exactly once and
//! every reported quantity (sizes, multiplicities, minimal keys) is
//! independent of the worker count and schedule.

use crate::cubic::{CubicCtx, LineClassKind};
use crate::gfq::FieldCtx;
use crate::group::{act_line, enumerate_gq, generators_gq, lift, Projectivity};
use crate::pg3::{dense_rank, dense_rank_space, line_by_index, line_count, LineKey, PlueckerLine};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// Default largest field order for whole-class partitions.
pub const DEFAULT_CENSUS_MAX_Q: u32 = 64;
/// Default largest field order for single-orbit and stabilizer searches.
pub const DEFAULT_ORBIT_MAX_Q: u32 = 169;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum OrbitsError {
    /// The requested computation is quartic-or-worse in q and the order
    /// exceeds the caller's budget.
    #[error("q = {q} exceeds the search guardrail (max {max_q}); raise the limit to proceed")]
    GuardrailExceeded { q: u32, max_q: u32 },
}

/// One orbit: its minimal line key, its size, and optionally the sorted
/// member keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResult {
    pub canonical: LineKey,
    pub size: u64,
    pub members: Option<Vec<LineKey>>,
}

/// The orbit decomposition of one line class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCensus {
    pub q: u32,
    pub class: LineClassKind,
    /// Number of lines in the class.
    pub class_size: u64,
    /// Orbit length -> number of orbits of that length.
    pub orbit_sizes: BTreeMap<u64, u64>,
    /// `(minimal key, orbit length)` per orbit, sorted by key.
    pub representatives: Vec<(LineKey, u64)>,
}

impl OrbitCensus {
    /// Total number of orbits.
    pub fn orbit_count(&self) -> u64 {
        self.orbit_sizes.values().sum()
    }
}

struct AtomicBitset {
    words: Vec<AtomicU64>,
}

impl AtomicBitset {
    fn new(bits: u64) -> AtomicBitset {
        let words = bits.div_ceil(64) as usize;
        AtomicBitset {
            words: (0..words).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    /// Sets bit `i`; returns whether this call flipped it.
    fn claim(&self, i: u64) -> bool {
        let mask = 1u64 << (i % 64);
        let prev = self.words[(i / 64) as usize].fetch_or(mask, Ordering::Relaxed);
        prev & mask == 0
    }
}

fn check_guardrail(q: u32, max_q: u32) -> Result<(), OrbitsError> {
    if q > max_q {
        Err(OrbitsError::GuardrailExceeded { q, max_q })
    } else {
        Ok(())
    }
}

/// The full orbit of `l`, breadth-first over the generating set.
///
/// Memory and time are proportional to the orbit size (at most q^3 - q), so
/// the `max_q` budget guards the call; pass [`DEFAULT_ORBIT_MAX_Q`] unless
/// the caller deliberately raises it.
pub fn orbit_of_line(
    cubic: &CubicCtx,
    l: &PlueckerLine,
    retain_members: bool,
    max_q: u32,
) -> Result<OrbitResult, OrbitsError> {
    let f = cubic.field();
    check_guardrail(f.q(), max_q)?;
    let gens = generators_gq(f);

    let start = l.key(f);
    let mut seen: std::collections::HashSet<LineKey> = std::collections::HashSet::new();
    seen.insert(start);
    let mut frontier = vec![*l];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let img = act_line(f, g, &x);
            if seen.insert(img.key(f)) {
                frontier.push(img);
            }
        }
    }

    let size = seen.len() as u64;
    let canonical = *seen.iter().min().expect("orbits are nonempty");
    let group_order = u64::from(f.q()).pow(3) - u64::from(f.q());
    assert_eq!(
        group_order % size,
        0,
        "orbit sizes divide the group order"
    );
    let members = retain_members.then(|| {
        let mut v: Vec<LineKey> = seen.into_iter().collect();
        v.sort_unstable();
        v
    });
    Ok(OrbitResult {
        canonical,
        size,
        members,
    })
}

/// All group elements fixing `l` as a set, by full scan of the group.
pub fn stabilizer_of_line(
    cubic: &CubicCtx,
    l: &PlueckerLine,
    max_q: u32,
) -> Result<Vec<Projectivity>, OrbitsError> {
    let f = cubic.field();
    check_guardrail(f.q(), max_q)?;
    let key = l.key(f);
    let mut stab = Vec::new();
    for rep in enumerate_gq(f) {
        let g = lift(f, &rep);
        if act_line(f, &g, l).key(f) == key {
            stab.push(g);
        }
    }
    Ok(stab)
}

/// Whether two lines lie in one orbit. Lines in different classes never do;
/// otherwise the orbit of `l1` is searched for `l2`.
pub fn same_orbit(
    cubic: &CubicCtx,
    l1: &PlueckerLine,
    l2: &PlueckerLine,
    max_q: u32,
) -> Result<bool, OrbitsError> {
    let f = cubic.field();
    check_guardrail(f.q(), max_q)?;
    if cubic.classify_line(l1).kind != cubic.classify_line(l2).kind {
        return Ok(false);
    }
    let target = l2.key(f);
    if l1.key(f) == target {
        return Ok(true);
    }
    let gens = generators_gq(f);
    let mut seen: std::collections::HashSet<LineKey> = std::collections::HashSet::new();
    seen.insert(l1.key(f));
    let mut frontier = vec![*l1];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let img = act_line(f, g, &x);
            let k = img.key(f);
            if k == target {
                return Ok(true);
            }
            if seen.insert(k) {
                frontier.push(img);
            }
        }
    }
    Ok(false)
}

/// Decomposes one whole line class into orbits.
///
/// Phase 1 classifies every line of the space (sharded over `workers`) and
/// collects the class members as seeds in enumeration order. Phase 2 runs a
/// breadth-first closure from each not-yet-visited seed, expanding frontiers
/// in parallel. The census content never depends on `workers`.
pub fn partition_class(
    cubic: &CubicCtx,
    kind: LineClassKind,
    workers: usize,
    max_q: u32,
) -> Result<OrbitCensus, OrbitsError> {
    let f = cubic.field();
    let q = f.q();
    check_guardrail(q, max_q)?;
    let workers = workers.max(1);
    let total = line_count(q);

    // Phase 1: seeds, in line-enumeration order regardless of sharding.
    let seeds: Vec<LineKey> = if workers == 1 {
        let mut v = Vec::new();
        for i in 0..total {
            let l = line_by_index(f, i);
            if cubic.classify_line(&l).kind == kind {
                v.push(l.key(f));
            }
        }
        v
    } else {
        let chunk = total.div_ceil(workers as u64);
        let shards = std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            for w in 0..workers as u64 {
                let start = w * chunk;
                let end = (start + chunk).min(total);
                handles.push(scope.spawn(move || {
                    let mut v = Vec::new();
                    for i in start..end {
                        let l = line_by_index(f, i);
                        if cubic.classify_line(&l).kind == kind {
                            v.push(l.key(f));
                        }
                    }
                    v
                }));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("classification worker panicked"))
                .collect::<Vec<_>>()
        });
        shards.into_iter().flatten().collect()
    };
    let class_size = seeds.len() as u64;

    // Phase 2: breadth-first orbit closure over the seeds.
    let visited = AtomicBitset::new(dense_rank_space(q));
    let gens = generators_gq(f);
    let mut orbits: Vec<(LineKey, u64)> = Vec::new();

    for seed_key in seeds {
        let seed = PlueckerLine::from_key(f, seed_key).expect("seed keys are canonical");
        if !visited.claim(dense_rank(f, &seed)) {
            continue;
        }
        let mut min_key = seed_key;
        let mut size = 1u64;
        let mut frontier = vec![seed];
        while !frontier.is_empty() {
            let (next, grown, low) = expand_frontier(f, &gens, &frontier, &visited, workers);
            size += grown;
            if let Some(k) = low {
                min_key = min_key.min(k);
            }
            frontier = next;
        }
        orbits.push((min_key, size));
    }

    let total_in_orbits: u64 = orbits.iter().map(|(_, s)| s).sum();
    assert_eq!(
        total_in_orbits, class_size,
        "the class is a union of whole orbits"
    );
    let group_order = u64::from(q).pow(3) - u64::from(q);
    let mut orbit_sizes: BTreeMap<u64, u64> = BTreeMap::new();
    for (_, s) in &orbits {
        assert_eq!(group_order % s, 0, "orbit sizes divide the group order");
        *orbit_sizes.entry(*s).or_insert(0) += 1;
    }
    orbits.sort_unstable();

    Ok(OrbitCensus {
        q,
        class: kind,
        class_size,
        orbit_sizes,
        representatives: orbits,
    })
}

/// Decomposes every line class in one classification pass (one census per
/// kind, in [`LineClassKind::ALL`] order, empty classes included).
pub fn partition_all(
    cubic: &CubicCtx,
    workers: usize,
    max_q: u32,
) -> Result<Vec<OrbitCensus>, OrbitsError> {
    let f = cubic.field();
    let q = f.q();
    check_guardrail(q, max_q)?;
    let workers = workers.max(1);
    let total = line_count(q);

    let kind_index = |k: LineClassKind| {
        LineClassKind::ALL
            .iter()
            .position(|x| *x == k)
            .expect("kind is listed")
    };

    let collect_range = |start: u64, end: u64| {
        let mut vs: [Vec<LineKey>; 11] = Default::default();
        for i in start..end {
            let l = line_by_index(f, i);
            let k = cubic.classify_line(&l).kind;
            vs[kind_index(k)].push(l.key(f));
        }
        vs
    };

    let mut seeds: [Vec<LineKey>; 11] = Default::default();
    if workers == 1 {
        seeds = collect_range(0, total);
    } else {
        let chunk = total.div_ceil(workers as u64);
        let shards = std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            for w in 0..workers as u64 {
                let start = w * chunk;
                let end = (start + chunk).min(total);
                handles.push(scope.spawn(move || collect_range(start, end)));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("classification worker panicked"))
                .collect::<Vec<_>>()
        });
        for shard in shards {
            for (acc, v) in seeds.iter_mut().zip(shard) {
                acc.extend(v);
            }
        }
    }

    let gens = generators_gq(f);
    let group_order = u64::from(q).pow(3) - u64::from(q);
    let mut out = Vec::with_capacity(11);
    for (kind, class_seeds) in LineClassKind::ALL.iter().zip(seeds) {
        let class_size = class_seeds.len() as u64;
        let visited = AtomicBitset::new(dense_rank_space(q));
        let mut orbits: Vec<(LineKey, u64)> = Vec::new();
        for seed_key in class_seeds {
            let seed = PlueckerLine::from_key(f, seed_key).expect("seed keys are canonical");
            if !visited.claim(dense_rank(f, &seed)) {
                continue;
            }
            let mut min_key = seed_key;
            let mut size = 1u64;
            let mut frontier = vec![seed];
            while !frontier.is_empty() {
                let (next, grown, low) = expand_frontier(f, &gens, &frontier, &visited, workers);
                size += grown;
                if let Some(k) = low {
                    min_key = min_key.min(k);
                }
                frontier = next;
            }
            orbits.push((min_key, size));
        }
        let covered: u64 = orbits.iter().map(|(_, s)| s).sum();
        assert_eq!(covered, class_size, "classes are unions of whole orbits");
        let mut orbit_sizes: BTreeMap<u64, u64> = BTreeMap::new();
        for (_, s) in &orbits {
            assert_eq!(group_order % s, 0, "orbit sizes divide the group order");
            *orbit_sizes.entry(*s).or_insert(0) += 1;
        }
        orbits.sort_unstable();
        out.push(OrbitCensus {
            q,
            class: *kind,
            class_size,
            orbit_sizes,
            representatives: orbits,
        });
    }
    Ok(out)
}

/// One breadth-first round: applies every generator to every frontier line,
/// claiming unvisited images. Returns the next frontier, the number of new
/// lines, and the smallest new key.
fn expand_frontier(
    f: &FieldCtx,
    gens: &[Projectivity],
    frontier: &[PlueckerLine],
    visited: &AtomicBitset,
    workers: usize,
) -> (Vec<PlueckerLine>, u64, Option<LineKey>) {
    let expand_chunk = |lines: &[PlueckerLine]| {
        let mut next = Vec::new();
        let mut low: Option<LineKey> = None;
        for x in lines {
            for g in gens {
                let img = act_line(f, g, x);
                if visited.claim(dense_rank(f, &img)) {
                    let k = img.key(f);
                    low = Some(low.map_or(k, |m: LineKey| m.min(k)));
                    next.push(img);
                }
            }
        }
        (next, low)
    };

    if workers == 1 || frontier.len() < 512 {
        let (next, low) = expand_chunk(frontier);
        let grown = next.len() as u64;
        return (next, grown, low);
    }

    let chunk = frontier.len().div_ceil(workers);
    let parts = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for piece in frontier.chunks(chunk) {
            handles.push(scope.spawn(move || expand_chunk(piece)));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("expansion worker panicked"))
            .collect::<Vec<_>>()
    });

    let mut next = Vec::new();
    let mut low: Option<LineKey> = None;
    for (part, part_low) in parts {
        next.extend(part);
        low = match (low, part_low) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
    let grown = next.len() as u64;
    (next, grown, low)
}

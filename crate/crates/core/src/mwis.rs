//! Classical maximum weight independent set machinery: feasibility,
//! objective, the exhaustive oracle, greedy and random baselines, and the
//! approximation ratio η.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;

/// Largest graph the exhaustive search accepts.
pub const BRUTE_FORCE_CAP: usize = 26;

/// Indicator vector over links; `bits[k]` is true when link `k` is scheduled.
///
/// Rendered as a `0`/`1` string with link 0 first. Conversion to and from
/// basis-state indices is little-endian: bit `k` of the index is link `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkSchedule {
    bits: Vec<bool>,
}

impl LinkSchedule {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn empty(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Self { bits: (0..n).map(|k| index >> k & 1 == 1).collect() }
    }

    pub fn to_index(&self) -> usize {
        self.bits.iter().enumerate().fold(0, |acc, (k, &b)| acc | (usize::from(b) << k))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_scheduled(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn set(&mut self, k: usize, on: bool) {
        self.bits[k] = on;
    }

    /// Indices of scheduled links, ascending.
    pub fn scheduled(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k)
    }
}

impl fmt::Display for LinkSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for LinkSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid schedule character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// A schedule together with its total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub schedule: LinkSchedule,
    pub weight: u64,
}

impl OptResult {
    pub fn new(g: &ConflictGraph, schedule: LinkSchedule) -> Result<Self> {
        let weight = schedule_weight(g, &schedule)?;
        Ok(Self { schedule, weight })
    }
}

fn check_len(g: &ConflictGraph, s: &LinkSchedule) -> Result<()> {
    if s.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), actual: s.len() });
    }
    Ok(())
}

/// True iff no edge has both endpoints scheduled.
pub fn is_independent(g: &ConflictGraph, s: &LinkSchedule) -> Result<bool> {
    check_len(g, s)?;
    Ok(g.edges().iter().all(|&(i, j)| !(s.is_scheduled(i) && s.is_scheduled(j))))
}

/// True iff `s` is independent and no further link can be added.
pub fn is_maximal_independent(g: &ConflictGraph, s: &LinkSchedule) -> Result<bool> {
    if !is_independent(g, s)? {
        return Ok(false);
    }
    Ok((0..g.n()).all(|k| {
        s.is_scheduled(k) || g.neighbors(k).unwrap().iter().any(|&j| s.is_scheduled(j))
    }))
}

/// Sum of weights of the scheduled links.
pub fn schedule_weight(g: &ConflictGraph, s: &LinkSchedule) -> Result<u64> {
    check_len(g, s)?;
    Ok(s.scheduled().map(|k| g.weights()[k]).sum())
}

fn reverse_low_bits(mask: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - n)
    }
}

/// Exhaustive search over all `2^n` subsets.
///
/// Ties go to the lexicographically smallest bit vector with link 0 most
/// significant.
pub fn brute_force_mwis(g: &ConflictGraph) -> Result<OptResult> {
    let n = g.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::Capacity { what: "brute-force", n, cap: BRUTE_FORCE_CAP });
    }
    let nbr: Vec<u64> = (0..n)
        .map(|k| g.neighbors(k).unwrap().iter().fold(0u64, |m, &j| m | 1 << j))
        .collect();
    let w = g.weights();

    let mut best_mask = 0u64;
    let mut best_weight = 0u64;
    'masks: for mask in 1u64..(1u64 << n) {
        let mut weight = 0;
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            if mask & nbr[k] != 0 {
                continue 'masks;
            }
            weight += w[k];
            rest &= rest - 1;
        }
        // Reversing puts link 0 in the most significant position, so numeric
        // order on the reversed mask is the required lexicographic order.
        if weight > best_weight
            || (weight == best_weight && reverse_low_bits(mask, n) < reverse_low_bits(best_mask, n))
        {
            best_weight = weight;
            best_mask = mask;
        }
    }
    Ok(OptResult { schedule: LinkSchedule::from_index(best_mask as usize, n), weight: best_weight })
}

/// Max-weight-first greedy: repeatedly schedule the heaviest remaining link
/// (lowest index on ties) and drop it and its neighbours.
pub fn greedy_mwis(g: &ConflictGraph) -> OptResult {
    let n = g.n();
    let mut removed = vec![false; n];
    let mut schedule = LinkSchedule::empty(n);
    let mut weight = 0;
    loop {
        let pick = (0..n)
            .filter(|&k| !removed[k])
            // max_by_key returns the last maximum, so compare on (weight, Reverse(index)).
            .max_by_key(|&k| (g.weights()[k], std::cmp::Reverse(k)));
        let Some(k) = pick else { break };
        schedule.set(k, true);
        weight += g.weights()[k];
        removed[k] = true;
        for &j in g.neighbors(k).unwrap() {
            removed[j] = true;
        }
    }
    OptResult { schedule, weight }
}

/// One randomised constructive pass: visit links in a uniformly random order
/// and schedule each one with no scheduled neighbour.
pub fn random_maximal_is(g: &ConflictGraph, seed: u64) -> OptResult {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut schedule = LinkSchedule::empty(n);
    let mut weight = 0;
    for k in order {
        if g.neighbors(k).unwrap().iter().all(|&j| !schedule.is_scheduled(j)) {
            schedule.set(k, true);
            weight += g.weights()[k];
        }
    }
    OptResult { schedule, weight }
}

/// Approximation ratio `alg_weight / opt_weight`.
pub fn eta(alg_weight: u64, opt_weight: u64) -> Result<f64> {
    if opt_weight < 1 {
        return Err(Error::Domain(format!("optimal weight must be at least 1, got {opt_weight}")));
    }
    if alg_weight > opt_weight {
        return Err(Error::Consistency(format!(
            "algorithm weight {alg_weight} exceeds optimal weight {opt_weight}"
        )));
    }
    Ok(alg_weight as f64 / opt_weight as f64)
}

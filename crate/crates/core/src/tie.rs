//! Tie policies and the fork driver for enumerating every tie resolution.
//!
//! Engines never inspect the policy directly. They ask a [`Chooser`] to pick
//! among tied items; [`resolve`] reruns the engine under scripted choices
//! when all resolutions are requested.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// How ties between equal scores are broken.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Smallest id wins.
    #[default]
    Lexicographic,
    /// Pseudo-random pick determined by seed, round and the sorted tied ids.
    Seeded(u64),
    /// Follow every resolution; fail if more than `limit` branches arise.
    EnumerateAll(usize),
}

impl TiePolicy {
    pub fn describe(&self) -> String {
        match self {
            TiePolicy::Lexicographic => "lex".into(),
            TiePolicy::Seeded(s) => format!("seed:{s}"),
            TiePolicy::EnumerateAll(l) => format!("all:{l}"),
        }
    }
}

impl std::str::FromStr for TiePolicy {
    type Err = Error;

    /// `lex`, `seed:<n>` or `all:<limit>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("unknown tie policy '{s}' (lex|seed:<n>|all:<limit>)"));
        match s.split_once(':') {
            None if s == "lex" => Ok(TiePolicy::Lexicographic),
            Some(("seed", n)) => n.parse().map(TiePolicy::Seeded).map_err(|_| bad()),
            Some(("all", n)) => match n.parse() {
                Ok(l) if l > 0 => Ok(TiePolicy::EnumerateAll(l)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

/// A tie encountered during a count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TieEvent {
    pub round: usize,
    pub tied: Vec<String>,
    pub chosen: String,
}

/// Result of [`break_tie`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TieResolution {
    Pick(String),
    /// Under `EnumerateAll` every tied id is a branch.
    Fork(Vec<String>),
}

/// Resolves a single tie outside of any engine.
pub fn break_tie(policy: &TiePolicy, tied: &[&str], round: usize) -> Result<TieResolution> {
    if tied.is_empty() {
        return Err(Error::Invalid("empty tie".into()));
    }
    let mut sorted: Vec<&str> = tied.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(match policy {
        TiePolicy::Lexicographic => TieResolution::Pick(sorted[0].to_string()),
        TiePolicy::Seeded(seed) => {
            TieResolution::Pick(sorted[seeded_index(*seed, round, &sorted)].to_string())
        }
        TiePolicy::EnumerateAll(_) => {
            TieResolution::Fork(sorted.iter().map(|s| s.to_string()).collect())
        }
    })
}

fn seeded_index(seed: u64, round: usize, sorted: &[&str]) -> usize {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((round as u64).to_le_bytes());
    for id in sorted {
        h.update(id.as_bytes());
        h.update([0u8]);
    }
    let digest = h.finalize();
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    (u64::from_le_bytes(word) % sorted.len() as u64) as usize
}

#[derive(Debug, Clone)]
enum Mode {
    Lex,
    Seeded(u64),
    Script(Vec<usize>),
}

/// Tie breaker handed to the engines.
#[derive(Debug, Clone)]
pub struct Chooser {
    mode: Mode,
    pos: usize,
    trail: Vec<(usize, usize)>,
    events: Vec<TieEvent>,
}

impl Chooser {
    pub fn new(policy: &TiePolicy) -> Chooser {
        let mode = match policy {
            TiePolicy::Lexicographic => Mode::Lex,
            TiePolicy::Seeded(s) => Mode::Seeded(*s),
            TiePolicy::EnumerateAll(_) => Mode::Script(Vec::new()),
        };
        Chooser {
            mode,
            pos: 0,
            trail: Vec::new(),
            events: Vec::new(),
        }
    }

    fn scripted(script: Vec<usize>) -> Chooser {
        Chooser {
            mode: Mode::Script(script),
            pos: 0,
            trail: Vec::new(),
            events: Vec::new(),
        }
    }

    /// Picks one of `tied` (item indices), labelled by `label(i)`.
    /// The tied items are ordered by label before choosing.
    pub fn pick(&mut self, round: usize, tied: &[usize], label: impl Fn(usize) -> String) -> usize {
        assert!(!tied.is_empty(), "pick from an empty tie");
        if tied.len() == 1 {
            return tied[0];
        }
        let mut items: Vec<(String, usize)> = tied.iter().map(|&i| (label(i), i)).collect();
        items.sort();
        let k = match &self.mode {
            Mode::Lex => 0,
            Mode::Seeded(seed) => {
                let names: Vec<&str> = items.iter().map(|(n, _)| n.as_str()).collect();
                seeded_index(*seed, round, &names)
            }
            Mode::Script(script) => {
                let k = script.get(self.pos).copied().unwrap_or(0);
                self.trail.push((k, items.len()));
                self.pos += 1;
                k
            }
        };
        self.events.push(TieEvent {
            round,
            tied: items.iter().map(|(n, _)| n.clone()).collect(),
            chosen: items[k].0.clone(),
        });
        items[k].1
    }

    /// Convenience for candidate indices labelled by a roster.
    pub fn pick_named(&mut self, round: usize, tied: &[usize], names: &[String]) -> usize {
        self.pick(round, tied, |i| names[i].clone())
    }

    pub fn events(&self) -> &[TieEvent] {
        &self.events
    }

    pub fn take_events(&mut self) -> Vec<TieEvent> {
        std::mem::take(&mut self.events)
    }
}

/// Runs `run` under `policy`. Returns the primary result (all-first choices,
/// which coincide with the lexicographic resolution) and, under
/// `EnumerateAll`, the sorted distinct keys of every reachable result.
pub fn resolve<T>(
    policy: &TiePolicy,
    mut run: impl FnMut(&mut Chooser) -> Result<T>,
    key: impl Fn(&T) -> Vec<String>,
) -> Result<(T, Vec<Vec<String>>)> {
    let TiePolicy::EnumerateAll(limit) = policy else {
        let mut ch = Chooser::new(policy);
        return Ok((run(&mut ch)?, Vec::new()));
    };
    let mut keys: Vec<Vec<String>> = Vec::new();
    let mut primary: Option<T> = None;
    let mut script: Vec<usize> = Vec::new();
    let mut runs = 0usize;
    loop {
        runs += 1;
        if runs > *limit {
            keys.sort();
            return Err(Error::TieOverflow {
                limit: *limit,
                partial: keys,
            });
        }
        let mut ch = Chooser::scripted(script.clone());
        let out = run(&mut ch)?;
        let k = key(&out);
        if !keys.contains(&k) {
            keys.push(k);
        }
        if primary.is_none() {
            primary = Some(out);
        }
        let trail = ch.trail;
        match trail.iter().rposition(|&(c, n)| c + 1 < n) {
            Some(p) => {
                script = trail[..p].iter().map(|&(c, _)| c).collect();
                script.push(trail[p].0 + 1);
            }
            None => break,
        }
    }
    keys.sort();
    Ok((primary.expect("at least one run"), keys))
}

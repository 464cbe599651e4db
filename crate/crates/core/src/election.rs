//! Ballots, elections, the election file format and tallies.
//!
//! Candidates are stored in a roster sorted by id, and ballots refer to them
//! by roster index. Index order is therefore the lexicographic id order used by
//! the default tie rule.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Shape of the ballots in an election.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallotKind {
    /// One group: a set of names.
    Unordered,
    /// Singleton groups: a list of names.
    Ordered,
    /// Any sequence of groups: a weakly ordered set of names.
    Weak,
}

impl BallotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BallotKind::Unordered => "unordered",
            BallotKind::Ordered => "ordered",
            BallotKind::Weak => "weak",
        }
    }
}

impl fmt::Display for BallotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BallotKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unordered" => Ok(BallotKind::Unordered),
            "ordered" => Ok(BallotKind::Ordered),
            "weak" => Ok(BallotKind::Weak),
            _ => Err(Error::Invalid(format!("unknown ballot kind {s:?}"))),
        }
    }
}

/// A ballot: a nonempty sequence of nonempty, disjoint candidate groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ballot {
    /// Roster indices; each group sorted ascending.
    pub groups: Vec<Vec<usize>>,
    /// Weight of one such ballot.
    pub weight: Rational,
}

impl Ballot {
    /// All names on the ballot, in group order.
    pub fn names(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.groups.iter().any(|g| g.contains(&c))
    }
}

/// A ballot together with the number of voters casting it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallotLine {
    pub ballot: Ballot,
    pub count: u64,
}

impl BallotLine {
    /// Total weight `count * weight` of the line.
    pub fn value(&self) -> Rational {
        &self.ballot.weight * Rational::from(self.count)
    }
}

/// An election: roster, ballot lines, ballot kind and number of seats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    candidates: Vec<String>,
    lines: Vec<BallotLine>,
    kind: BallotKind,
    seats: usize,
    warnings: Vec<String>,
}

/// Ballot description used by the programmatic constructors: groups of ids.
pub type RawGroups = Vec<Vec<String>>;

pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id
            .chars()
            .any(|c| c.is_whitespace() || c == ':' || c == '>' || c == '#')
}

impl Election {
    /// Builds and validates an election. The roster is `extra_candidates`
    /// plus every id on a ballot (including lines with count 0), sorted.
    /// Lines with count 0 and blank ballots are dropped.
    pub fn new(
        kind: BallotKind,
        seats: usize,
        extra_candidates: &[String],
        raw: Vec<(RawGroups, Rational, u64)>,
    ) -> Result<Election> {
        let mut roster: BTreeSet<String> = BTreeSet::new();
        for c in extra_candidates {
            if !valid_id(c) {
                return Err(Error::Invalid(format!("invalid candidate id {c:?}")));
            }
            roster.insert(c.clone());
        }
        for (groups, _, _) in &raw {
            for id in groups.iter().flatten() {
                if !valid_id(id) {
                    return Err(Error::Invalid(format!("invalid candidate id {id:?}")));
                }
                roster.insert(id.clone());
            }
        }
        let candidates: Vec<String> = roster.into_iter().collect();
        let index: BTreeMap<&str, usize> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let mut lines = Vec::new();
        let mut warnings = Vec::new();
        let mut blank = 0u64;
        for (groups, weight, count) in raw {
            if !weight.is_positive() {
                return Err(Error::Invalid(format!("ballot weight {weight} is not positive")));
            }
            let ballot = build_ballot(&groups, weight, &index)?;
            check_shape(kind, &ballot, &candidates)?;
            if count == 0 {
                continue;
            }
            if ballot.is_empty() {
                blank += count;
                continue;
            }
            lines.push(BallotLine { ballot, count });
        }
        if blank > 0 {
            warnings.push(format!("{blank} blank ballots ignored"));
        }
        let e = Election {
            candidates,
            lines,
            kind,
            seats,
            warnings,
        };
        e.check_seats()?;
        Ok(e)
    }

    /// Shorthand: `(count, "A B > C")` pairs, weight 1, `>` separating groups.
    pub fn from_lines(kind: BallotKind, seats: usize, lines: &[(u64, &str)]) -> Result<Election> {
        let raw = lines
            .iter()
            .map(|(count, text)| (split_groups(kind, text), Rational::one(), *count))
            .collect();
        Election::new(kind, seats, &[], raw)
    }

    fn check_seats(&self) -> Result<()> {
        if self.seats < 1 {
            return Err(Error::Invalid("seats must be at least 1".into()));
        }
        if self.seats > self.candidates.len() {
            return Err(Error::Invalid(format!(
                "{} seats but only {} candidates",
                self.seats,
                self.candidates.len()
            )));
        }
        Ok(())
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn lines(&self) -> &[BallotLine] {
        &self.lines
    }

    pub fn kind(&self) -> BallotKind {
        self.kind
    }

    pub fn seats(&self) -> usize {
        self.seats
    }

    /// Parse and normalization warnings (for example dropped blank ballots).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.candidates.binary_search_by(|c| c.as_str().cmp(id)).ok()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.candidates[idx]
    }

    /// Total weight V of all ballots.
    pub fn total_weight(&self) -> Rational {
        self.lines.iter().map(BallotLine::value).sum()
    }

    /// Same election with a different number of seats.
    pub fn with_seats(&self, seats: usize) -> Result<Election> {
        let e = Election {
            seats,
            ..self.clone()
        };
        e.check_seats()?;
        Ok(e)
    }

    /// Same ballots read as sets of names.
    pub fn as_unordered(&self) -> Election {
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let mut names: Vec<usize> = l.ballot.names().collect();
                names.sort_unstable();
                BallotLine {
                    ballot: Ballot {
                        groups: vec![names],
                        weight: l.ballot.weight.clone(),
                    },
                    count: l.count,
                }
            })
            .collect();
        Election {
            candidates: self.candidates.clone(),
            lines,
            kind: BallotKind::Unordered,
            seats: self.seats,
            warnings: self.warnings.clone(),
        }
    }

    /// The ballots as raw groups of ids, for rebuilding modified elections.
    pub fn raw_lines(&self) -> Vec<(RawGroups, Rational, u64)> {
        self.lines
            .iter()
            .map(|l| (self.raw_groups(&l.ballot), l.ballot.weight.clone(), l.count))
            .collect()
    }

    pub fn raw_groups(&self, b: &Ballot) -> RawGroups {
        b.groups
            .iter()
            .map(|g| g.iter().map(|&c| self.candidates[c].clone()).collect())
            .collect()
    }

    /// This election with further ballot lines appended.
    pub fn with_lines(&self, extra: Vec<(RawGroups, Rational, u64)>) -> Result<Election> {
        let mut raw = self.raw_lines();
        raw.extend(extra);
        Election::new(self.kind, self.seats, &self.candidates, raw)
    }

    /// Ballot-multiset union with another election of the same kind.
    pub fn union(&self, other: &Election) -> Result<Election> {
        if self.kind != other.kind {
            return Err(Error::Invalid("union of elections with different ballot kinds".into()));
        }
        let mut roster = self.candidates.clone();
        roster.extend(other.candidates.iter().cloned());
        let mut raw = self.raw_lines();
        raw.extend(other.raw_lines());
        Election::new(self.kind, self.seats, &roster, raw)
    }

    /// Identical ballots merged into one line each, first-appearance order,
    /// with the total value as count-1 weight when counts cannot be merged.
    pub fn merged(&self) -> Election {
        let mut order: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut acc: BTreeMap<Vec<Vec<usize>>, (Rational, u64, bool)> = BTreeMap::new();
        for l in &self.lines {
            let key = l.ballot.groups.clone();
            match acc.get_mut(&key) {
                Some((w, c, same)) => {
                    if *same && *w == l.ballot.weight {
                        *c += l.count;
                    } else {
                        let total = &*w * Rational::from(*c) + l.value();
                        *w = total;
                        *c = 1;
                        *same = false;
                    }
                }
                None => {
                    order.push(key.clone());
                    acc.insert(key, (l.ballot.weight.clone(), l.count, true));
                }
            }
        }
        let lines = order
            .into_iter()
            .map(|g| {
                let (weight, count, _) = acc[&g].clone();
                BallotLine {
                    ballot: Ballot { groups: g, weight },
                    count,
                }
            })
            .collect();
        Election {
            lines,
            ..self.clone()
        }
    }

    /// Human-readable label of a ballot line, e.g. `1034: A B C`.
    pub fn line_label(&self, line: &BallotLine) -> String {
        let mut s = line.count.to_string();
        if line.ballot.weight != Rational::one() {
            s.push('x');
            s.push_str(&line.ballot.weight.to_string());
        }
        s.push(':');
        for (gi, g) in line.ballot.groups.iter().enumerate() {
            if gi > 0 {
                s.push_str(if self.kind == BallotKind::Weak { " >" } else { "" });
            }
            for &c in g {
                s.push(' ');
                s.push_str(&self.candidates[c]);
            }
        }
        s
    }

    pub fn line_labels(&self) -> Vec<String> {
        self.lines.iter().map(|l| self.line_label(l)).collect()
    }

    /// Renders the election in the text format; parsing the result yields
    /// an equal election.
    pub fn to_text(&self) -> String {
        let mut out = format!("kind: {}\nseats: {}\n", self.kind, self.seats);
        let mut used = vec![false; self.candidates.len()];
        for l in &self.lines {
            for c in l.ballot.names() {
                used[c] = true;
            }
            out.push_str(&self.line_label(l));
            out.push('\n');
        }
        let unused: Vec<&str> = self
            .candidates
            .iter()
            .zip(&used)
            .filter(|(_, u)| !**u)
            .map(|(c, _)| c.as_str())
            .collect();
        if !unused.is_empty() {
            // Zero-count lines keep unsupported candidates on the roster.
            for c in unused {
                out.push_str(&format!("0: {c}\n"));
            }
        }
        out
    }

    /// Renders the election as JSON with a fixed key order.
    pub fn to_json(&self) -> String {
        let doc = ElectionJson {
            kind: self.kind,
            seats: self.seats,
            ballots: self
                .lines
                .iter()
                .map(|l| BallotJson {
                    count: l.count,
                    weight: (l.ballot.weight != Rational::one()).then(|| l.ballot.weight.clone()),
                    groups: self.raw_groups(&l.ballot),
                })
                .chain(self.candidates.iter().enumerate().filter_map(|(i, c)| {
                    let used = self.lines.iter().any(|l| l.ballot.contains(i));
                    (!used).then(|| BallotJson {
                        count: 0,
                        weight: None,
                        groups: vec![vec![c.clone()]],
                    })
                }))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }
}

fn split_groups(kind: BallotKind, text: &str) -> RawGroups {
    match kind {
        BallotKind::Unordered => {
            let g: Vec<String> = text.split_whitespace().map(str::to_string).collect();
            if g.is_empty() {
                vec![]
            } else {
                vec![g]
            }
        }
        BallotKind::Ordered => text
            .split_whitespace()
            .map(|t| vec![t.to_string()])
            .collect(),
        BallotKind::Weak => text
            .split('>')
            .map(|g| g.split_whitespace().map(str::to_string).collect::<Vec<_>>())
            .filter(|g| !g.is_empty())
            .collect(),
    }
}

fn build_ballot(groups: &RawGroups, weight: Rational, index: &BTreeMap<&str, usize>) -> Result<Ballot> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        if g.is_empty() {
            return Err(Error::Invalid("empty group in ballot".into()));
        }
        let mut idx = Vec::with_capacity(g.len());
        for id in g {
            let i = index[id.as_str()];
            if !seen.insert(i) {
                return Err(Error::Invalid(format!("duplicate candidate {id} in ballot")));
            }
            idx.push(i);
        }
        idx.sort_unstable();
        out.push(idx);
    }
    Ok(Ballot { groups: out, weight })
}

fn check_shape(kind: BallotKind, b: &Ballot, roster: &[String]) -> Result<()> {
    match kind {
        BallotKind::Unordered if b.groups.len() > 1 => Err(Error::Invalid(
            "unordered ballots have a single group".into(),
        )),
        BallotKind::Ordered => {
            if let Some(g) = b.groups.iter().find(|g| g.len() != 1) {
                let ids: Vec<&str> = g.iter().map(|&c| roster[c].as_str()).collect();
                Err(Error::Invalid(format!(
                    "ordered ballots have singleton groups, found {{{}}}",
                    ids.join(",")
                )))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

/// Parses the text format (or its JSON mirror when the input starts with `{`).
pub fn parse_election(text: &str) -> Result<Election> {
    parse_election_with(text, None)
}

/// As [`parse_election`], with an optional seat count overriding the header.
pub fn parse_election_with(text: &str, seats_override: Option<usize>) -> Result<Election> {
    if text.trim_start().starts_with('{') {
        return parse_election_json(text, seats_override);
    }
    let mut kind: Option<BallotKind> = None;
    let mut seats: Option<usize> = None;
    let mut raw: Vec<(RawGroups, Rational, u64)> = Vec::new();
    let mut line_of: Vec<usize> = Vec::new();
    for (n, full) in text.lines().enumerate() {
        let lineno = n + 1;
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((head, rest)) = content.split_once(':') else {
            return Err(err(format!("expected `key: value` or `count: names`, got {content:?}")));
        };
        let head = head.trim();
        if head.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') {
            let Some(k) = kind else {
                return Err(err("ballot line before the `kind:` header".into()));
            };
            let (count, weight) = parse_multiplicity(head).map_err(err)?;
            let groups = parse_tokens(k, rest).map_err(err)?;
            raw.push((groups, weight, count));
            line_of.push(lineno);
            continue;
        }
        let value = rest.trim();
        match head {
            "kind" => {
                if !raw.is_empty() {
                    return Err(err("`kind:` must precede the ballot lines".into()));
                }
                kind = Some(value.parse().map_err(|_| err(format!("unknown ballot kind {value:?}")))?);
            }
            "seats" => {
                let s: i64 = value
                    .parse()
                    .map_err(|_| err(format!("seats must be an integer, got {value:?}")))?;
                if s < 1 {
                    return Err(err(format!("seats must be at least 1, got {s}")));
                }
                seats = Some(s as usize);
            }
            _ => return Err(err(format!("unknown directive {head:?}"))),
        }
    }
    let kind = kind.ok_or(Error::Parse {
        line: 0,
        message: "missing `kind:` header".into(),
    })?;
    let seats = seats_override.or(seats).ok_or(Error::Parse {
        line: 0,
        message: "missing `seats:` header".into(),
    })?;
    // Per-line validation so that errors carry the line number.
    for ((groups, weight, _), &lineno) in raw.iter().zip(&line_of) {
        let mut index = BTreeMap::new();
        for (i, id) in groups.iter().flatten().enumerate() {
            index.entry(id.as_str()).or_insert(i);
        }
        build_ballot(groups, weight.clone(), &index).map_err(|e| Error::Parse {
            line: lineno,
            message: strip(e),
        })?;
    }
    Election::new(kind, seats, &[], raw).map_err(|e| match e {
        Error::Invalid(m) => Error::Parse { line: 0, message: m },
        other => other,
    })
}

fn strip(e: Error) -> String {
    match e {
        Error::Invalid(m) | Error::Domain(m) => m,
        other => other.to_string(),
    }
}

fn parse_multiplicity(head: &str) -> std::result::Result<(u64, Rational), String> {
    let (count, weight) = match head.split_once('x') {
        Some((c, w)) => (c, Some(w)),
        None => (head, None),
    };
    let count: u64 = count
        .parse()
        .map_err(|_| format!("multiplicity must be a nonnegative integer, got {count:?}"))?;
    let weight = match weight {
        None => Rational::one(),
        Some(w) => {
            let w: Rational = w.parse().map_err(|_| format!("bad weight {w:?}"))?;
            if !w.is_positive() {
                return Err(format!("weight must be positive, got {w}"));
            }
            w
        }
    };
    Ok((count, weight))
}

fn parse_tokens(kind: BallotKind, rest: &str) -> std::result::Result<RawGroups, String> {
    if kind != BallotKind::Weak && rest.contains('>') {
        return Err("`>` separates groups only in weak ballots".into());
    }
    if kind == BallotKind::Weak {
        let parts: Vec<&str> = rest.split('>').collect();
        if parts.len() > 1 && parts.iter().any(|p| p.trim().is_empty()) {
            return Err("empty group".into());
        }
    }
    let groups = split_groups(kind, rest);
    for id in groups.iter().flatten() {
        if !valid_id(id) {
            return Err(format!("invalid candidate id {id:?}"));
        }
    }
    Ok(groups)
}

#[derive(Serialize, Deserialize)]
struct ElectionJson {
    kind: BallotKind,
    seats: usize,
    ballots: Vec<BallotJson>,
}

#[derive(Serialize, Deserialize)]
struct BallotJson {
    count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<Rational>,
    groups: Vec<Vec<String>>,
}

fn parse_election_json(text: &str, seats_override: Option<usize>) -> Result<Election> {
    let doc: ElectionJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let raw = doc
        .ballots
        .into_iter()
        .map(|b| (b.groups, b.weight.unwrap_or_else(Rational::one), b.count))
        .collect();
    Election::new(doc.kind, seats_override.unwrap_or(doc.seats), &[], raw).map_err(|e| match e {
        Error::Invalid(m) => Error::Parse { line: 0, message: m },
        other => other,
    })
}

/// Total weight of the ballots containing each candidate anywhere.
pub fn approval_tally(e: &Election) -> BTreeMap<String, Rational> {
    let t = tally_by_index(e);
    e.candidates().iter().cloned().zip(t).collect()
}

pub(crate) fn tally_by_index(e: &Election) -> Vec<Rational> {
    let mut t = vec![Rational::zero(); e.candidates().len()];
    for l in e.lines() {
        let v = l.value();
        for c in l.ballot.names() {
            t[c] += &v;
        }
    }
    t
}

/// Total weight of the ballots naming each candidate first (first group).
pub fn first_choice_tally(e: &Election) -> BTreeMap<String, Rational> {
    let mut t = vec![Rational::zero(); e.candidates().len()];
    for l in e.lines() {
        let v = l.value();
        if let Some(g) = l.ballot.groups.first() {
            for &c in g {
                t[c] += &v;
            }
        }
    }
    e.candidates().iter().cloned().zip(t).collect()
}

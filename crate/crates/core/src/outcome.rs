//! Results and traces returned by every method.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::numeric::Rational;
use crate::tie::TieEvent;

/// What happened in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Elected,
    Eliminated,
}

/// A candidate (or party) with its figure in a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Score {
    pub candidate: String,
    pub value: Rational,
}

/// One round of a count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub index: usize,
    pub action: Action,
    pub candidate: String,
    /// Figures of the candidates in contention, sorted by id.
    pub scores: Vec<Score>,
    /// Figure of the elected or eliminated candidate.
    pub figure: Option<Rational>,
    /// Per ballot line values after the round (place numbers or loads).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ballot_values: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Round {
    pub fn new(index: usize, action: Action, candidate: impl Into<String>) -> Round {
        Round {
            index,
            action,
            candidate: candidate.into(),
            scores: Vec::new(),
            figure: None,
            ballot_values: Vec::new(),
            note: None,
        }
    }

    /// Figure recorded for `candidate`, if it was in contention.
    pub fn score_of(&self, candidate: &str) -> Option<&Rational> {
        self.scores
            .iter()
            .find(|s| s.candidate == candidate)
            .map(|s| &s.value)
    }
}

/// The result of a committee election.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub method: String,
    /// Elected candidates: election order for sequential methods, sorted for set methods.
    pub elected: Vec<String>,
    /// True when `elected` is an election order.
    pub sequential: bool,
    /// Name of the per-round figure (for example "W" or "votes").
    pub figure_name: String,
    /// Name of the per-ballot values (for example "place number" or "load").
    pub value_name: String,
    pub ballot_labels: Vec<String>,
    pub rounds: Vec<Round>,
    /// Per ballot line values at the end of the count.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub final_values: Vec<Rational>,
    /// Objective of set-valued methods (satisfaction, inequality).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<Rational>,
    pub ties: Vec<TieEvent>,
    pub notes: Vec<String>,
    /// Every outcome set reachable under tie enumeration, sorted.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Vec<String>>,
}

impl Outcome {
    pub fn new(method: impl Into<String>, sequential: bool) -> Outcome {
        Outcome {
            method: method.into(),
            elected: Vec::new(),
            sequential,
            figure_name: String::new(),
            value_name: String::new(),
            ballot_labels: Vec::new(),
            rounds: Vec::new(),
            final_values: Vec::new(),
            objective: None,
            ties: Vec::new(),
            notes: Vec::new(),
            alternatives: Vec::new(),
        }
    }

    pub fn elected_set(&self) -> BTreeSet<String> {
        self.elected.iter().cloned().collect()
    }

    /// Elected ids, sorted.
    pub fn sorted(&self) -> Vec<String> {
        let mut v = self.elected.clone();
        v.sort();
        v
    }

    /// Rounds in which a candidate was elected.
    pub fn election_rounds(&self) -> impl Iterator<Item = &Round> {
        self.rounds.iter().filter(|r| r.action == Action::Elected)
    }

    /// Outcome sets: the alternatives under enumeration, else the single result.
    pub fn outcome_sets(&self) -> Vec<Vec<String>> {
        if self.alternatives.is_empty() {
            vec![self.sorted()]
        } else {
            self.alternatives.clone()
        }
    }
}

/// Seats per party.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PartySeats {
    pub party: String,
    pub seats: u64,
}

/// The result of a seat apportionment between parties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Apportionment {
    pub method: String,
    /// Every party, sorted by name.
    pub seats: Vec<PartySeats>,
    /// Order of awards for sequential methods.
    pub awards: Vec<String>,
    pub rounds: Vec<Round>,
    pub ties: Vec<TieEvent>,
    pub notes: Vec<String>,
    /// Every seat distribution reachable under tie enumeration, as `party:seats` lists.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Vec<String>>,
}

impl Apportionment {
    pub fn seats_of(&self, party: &str) -> u64 {
        self.seats
            .iter()
            .find(|p| p.party == party)
            .map_or(0, |p| p.seats)
    }

    /// `party:seats` for the parties with seats, sorted.
    pub fn key(&self) -> Vec<String> {
        seat_key(&self.seats)
    }
}

pub(crate) fn seat_key(seats: &[PartySeats]) -> Vec<String> {
    seats
        .iter()
        .filter(|p| p.seats > 0)
        .map(|p| format!("{}:{}", p.party, p.seats))
        .collect()
}

pub(crate) fn scores_of(names: &[String], items: impl IntoIterator<Item = (usize, Rational)>) -> Vec<Score> {
    let mut v: Vec<Score> = items
        .into_iter()
        .map(|(i, value)| Score {
            candidate: names[i].clone(),
            value,
        })
        .collect();
    v.sort_by(|a, b| a.candidate.cmp(&b.candidate));
    v
}

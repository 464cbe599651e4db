//! Recursive application to factions, parties and alliances.
//!
//! Each level orders its candidates with the ordered method applied to its own
//! ballots; the ballots are then replaced by that list before the next level.

use std::collections::BTreeMap;

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::{Rational, RoundingPolicy};
use crate::phragmen::phragmen_elect;
use crate::tie::TiePolicy;

/// An ordered ballot with its party and optional faction and alliance labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledBallot {
    pub names: Vec<String>,
    pub count: u64,
    pub party: String,
    pub faction: Option<String>,
    pub alliance: Option<String>,
}

/// Lists produced at each level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AllianceLists {
    /// Keyed by `party/faction`.
    pub factions: BTreeMap<String, Vec<String>>,
    pub parties: BTreeMap<String, Vec<String>>,
    pub alliances: BTreeMap<String, Vec<String>>,
}

impl AllianceLists {
    /// The list that finally competes: the alliance list for allied parties,
    /// the party list otherwise.
    pub fn final_lists(&self, ballots: &[LabeledBallot]) -> BTreeMap<String, Vec<String>> {
        let mut out = self.alliances.clone();
        for b in ballots.iter().filter(|b| b.alliance.is_none()) {
            if let Some(l) = self.parties.get(&b.party) {
                out.insert(b.party.clone(), l.clone());
            }
        }
        out
    }
}

/// Orders every candidate on `ballots` with the ordered method.
fn full_order(ballots: &[(Vec<String>, u64)], policy: &TiePolicy) -> Result<Vec<String>> {
    let raw: Vec<(Vec<Vec<String>>, Rational, u64)> = ballots
        .iter()
        .map(|(names, count)| (names.iter().map(|n| vec![n.clone()]).collect(), Rational::one(), *count))
        .collect();
    let probe = Election::new(BallotKind::Ordered, 1, &[], raw.clone())?;
    let s = probe.candidates().len();
    let e = Election::new(BallotKind::Ordered, s, &[], raw)?;
    Ok(phragmen_elect(&e, policy, RoundingPolicy::Exact)?.elected)
}

/// Runs the three-level recursion and returns the lists of every level.
pub fn recursive_alliance_elect(ballots: &[LabeledBallot], policy: &TiePolicy) -> Result<AllianceLists> {
    let mut alliance_of: BTreeMap<&str, Option<&str>> = BTreeMap::new();
    for b in ballots {
        let a = b.alliance.as_deref();
        if let Some(prev) = alliance_of.insert(&b.party, a) {
            if prev != a {
                return Err(Error::Invalid(format!("party {} carries two alliance labels", b.party)));
            }
        }
    }
    let mut lists = AllianceLists::default();
    let mut work: Vec<(Vec<String>, u64, &LabeledBallot)> =
        ballots.iter().map(|b| (b.names.clone(), b.count, b)).collect();

    // Factions.
    let mut faction_keys: Vec<(String, String)> = ballots
        .iter()
        .filter_map(|b| b.faction.as_ref().map(|f| (b.party.clone(), f.clone())))
        .collect();
    faction_keys.sort();
    faction_keys.dedup();
    for (party, faction) in &faction_keys {
        let member = |b: &LabeledBallot| &b.party == party && b.faction.as_ref() == Some(faction);
        let own: Vec<(Vec<String>, u64)> =
            work.iter().filter(|w| member(w.2)).map(|w| (w.0.clone(), w.1)).collect();
        let list = full_order(&own, policy)?;
        for w in work.iter_mut().filter(|w| member(w.2)) {
            w.0 = list.clone();
        }
        lists.factions.insert(format!("{party}/{faction}"), list);
    }

    // Parties.
    let parties: Vec<String> = alliance_of.keys().map(|p| p.to_string()).collect();
    for party in &parties {
        let own: Vec<(Vec<String>, u64)> =
            work.iter().filter(|w| &w.2.party == party).map(|w| (w.0.clone(), w.1)).collect();
        let list = full_order(&own, policy)?;
        for w in work.iter_mut().filter(|w| &w.2.party == party) {
            w.0 = list.clone();
        }
        lists.parties.insert(party.clone(), list);
    }

    // Alliances.
    let mut alliances: Vec<&str> = alliance_of.values().flatten().copied().collect();
    alliances.sort_unstable();
    alliances.dedup();
    for alliance in alliances {
        let own: Vec<(Vec<String>, u64)> = work
            .iter()
            .filter(|w| w.2.alliance.as_deref() == Some(alliance))
            .map(|w| (w.0.clone(), w.1))
            .collect();
        lists.alliances.insert(alliance.to_string(), full_order(&own, policy)?);
    }
    Ok(lists)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lb(names: &str, count: u64, party: &str, faction: Option<&str>, alliance: Option<&str>) -> LabeledBallot {
        LabeledBallot {
            names: names.split_whitespace().map(str::to_string).collect(),
            count,
            party: party.into(),
            faction: faction.map(str::to_string),
            alliance: alliance.map(str::to_string),
        }
    }

    #[test]
    fn single_party_single_faction() {
        let b = vec![lb("A B", 2, "P", Some("f"), None), lb("B A", 1, "P", Some("f"), None)];
        let l = recursive_alliance_elect(&b, &TiePolicy::Lexicographic).unwrap();
        assert_eq!(l.parties["P"], ["A", "B"]);
        assert_eq!(l.factions["P/f"], ["A", "B"]);
    }

    #[test]
    fn alliance_interleaves_like_dhondt() {
        let b = vec![
            lb("A1 A2 A3 A4", 5, "X", None, Some("U")),
            lb("B1 B2 B3 B4", 3, "Y", None, Some("U")),
        ];
        let l = recursive_alliance_elect(&b, &TiePolicy::Lexicographic).unwrap();
        assert_eq!(&l.alliances["U"][..4], ["A1", "B1", "A2", "A3"]);
    }

    #[test]
    fn no_labels_is_per_party() {
        let b = vec![lb("A B C", 4, "X", None, None), lb("B C A", 3, "X", None, None), lb("D", 2, "Y", None, None)];
        let l = recursive_alliance_elect(&b, &TiePolicy::Lexicographic).unwrap();
        let e = Election::from_lines(BallotKind::Ordered, 3, &[(4, "A B C"), (3, "B C A")]).unwrap();
        let direct = phragmen_elect(&e, &TiePolicy::Lexicographic, RoundingPolicy::Exact).unwrap();
        assert_eq!(l.parties["X"], direct.elected);
        assert!(l.alliances.is_empty());
        assert_eq!(l.final_lists(&b).len(), 2);
    }
}

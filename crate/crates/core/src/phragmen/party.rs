//! Party version: ballots name sets of parties and an elected party stays
//! eligible for further seats.

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Apportionment, PartySeats, Round};
use crate::phragmen::argmax;
use crate::tie::{resolve, Chooser, TiePolicy};

/// Assigns `seats` seats to the parties of an unordered election over party
/// tokens. Each round every party's figure is
/// `votes / (1 + place numbers of its ballots)`; the supporters of the winner
/// get place number `v / W`. Parties are never removed.
pub fn phragmen_party_elect(e: &Election, seats: usize, policy: &TiePolicy) -> Result<Apportionment> {
    if e.kind() != BallotKind::Unordered {
        return Err(Error::Invalid("the party version takes unordered ballots of parties".into()));
    }
    if e.lines().is_empty() {
        return Err(Error::Invalid("no ballots".into()));
    }
    let (mut out, alternatives) = resolve(policy, |ch| party_count(e, seats, ch), Apportionment::key)?;
    out.alternatives = alternatives;
    Ok(out)
}

fn party_count(e: &Election, seats: usize, ch: &mut Chooser) -> Result<Apportionment> {
    let names = e.candidates();
    let n = names.len();
    let lines = e.lines();
    let values: Vec<Rational> = lines.iter().map(|l| l.value()).collect();
    let mut votes = vec![Rational::zero(); n];
    for (b, l) in lines.iter().enumerate() {
        for p in l.ballot.names() {
            votes[p] += &values[b];
        }
    }
    let mut q = vec![Rational::zero(); lines.len()];
    let mut won = vec![0u64; n];
    let mut awards = Vec::new();
    let mut rounds = Vec::new();
    for round in 1..=seats {
        let mut places = vec![Rational::zero(); n];
        for (b, l) in lines.iter().enumerate() {
            for p in l.ballot.names() {
                places[p] += &q[b];
            }
        }
        let figures: Vec<(usize, Rational)> = (0..n)
            .filter(|&p| votes[p].is_positive())
            .map(|p| (p, &votes[p] / (Rational::one() + &places[p])))
            .collect();
        let (best, tied) = argmax(&figures).expect("some party has votes");
        let w = ch.pick_named(round, &tied, names);
        for (b, l) in lines.iter().enumerate() {
            if l.ballot.contains(w) {
                q[b] = &values[b] / &best;
            }
        }
        won[w] += 1;
        awards.push(names[w].clone());
        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, figures);
        r.figure = Some(best);
        r.ballot_values = q.clone();
        rounds.push(r);
    }
    let seats_out: Vec<PartySeats> = names
        .iter()
        .zip(&won)
        .map(|(p, &s)| PartySeats { party: p.clone(), seats: s })
        .collect();
    Ok(Apportionment {
        method: "phragmen-party".into(),
        seats: seats_out,
        awards,
        rounds,
        ties: ch.take_events(),
        notes: Vec::new(),
        alternatives: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn party(lines: &[(u64, &str)], s: usize, policy: &TiePolicy) -> Apportionment {
        let e = Election::from_lines(BallotKind::Unordered, 1, lines).unwrap();
        phragmen_party_elect(&e, s, policy).unwrap()
    }

    #[test]
    fn dhondt_like() {
        let a = party(&[(5, "A"), (3, "B")], 4, &TiePolicy::Lexicographic);
        assert_eq!((a.seats_of("A"), a.seats_of("B")), (3, 1));
        assert_eq!(a.awards, ["A", "B", "A", "A"]);
        let one = party(&[(7, "X")], 3, &TiePolicy::Lexicographic);
        assert_eq!(one.seats_of("X"), 3);
    }

    #[test]
    fn symmetric_parties_enumerate() {
        let a = party(&[(10, "P Q")], 2, &TiePolicy::EnumerateAll(16));
        let keys: Vec<String> = a.alternatives.iter().map(|k| k.join(" ")).collect();
        assert_eq!(keys, ["P:1 Q:1", "P:2", "Q:2"]);
    }
}

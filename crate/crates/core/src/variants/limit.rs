//! The method Phragmén's unordered method tends to when many ballots naming
//! every candidate are added.
//!
//! In round `k` a ballot counts `k - l` for each unelected name, where `l` is
//! the last round in which one of its names was elected (0 if none).

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::{argmax, run_outcome};
use crate::tie::{Chooser, TiePolicy};

pub fn limit_method_elect(e: &Election, s: usize, policy: &TiePolicy) -> Result<Outcome> {
    if e.kind() != BallotKind::Unordered {
        return Err(Error::Invalid("the limit method takes unordered ballots".into()));
    }
    let e = e.with_seats(s)?;
    run_outcome(policy, |ch| count(&e, s, ch))
}

fn count(e: &Election, s: usize, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let lines = e.lines();
    let mut last = vec![0usize; lines.len()];
    let mut elected = vec![false; names.len()];
    let mut out = Outcome::new("limit", true);
    out.figure_name = "votes".into();
    out.value_name = "last round served".into();
    out.ballot_labels = e.line_labels();
    for round in 1..=s {
        let mut totals = vec![Rational::zero(); names.len()];
        for (b, l) in lines.iter().enumerate() {
            let v = l.value() * Rational::from((round - last[b]) as u64);
            for c in l.ballot.names() {
                totals[c] += &v;
            }
        }
        let items: Vec<(usize, Rational)> = (0..names.len())
            .filter(|&c| !elected[c])
            .map(|c| (c, totals[c].clone()))
            .collect();
        let (v, tied) = argmax(&items).ok_or_else(|| Error::Invalid("fewer candidates than seats".into()))?;
        let w = ch.pick_named(round, &tied, names);
        for (b, l) in lines.iter().enumerate() {
            if l.ballot.contains(w) {
                last[b] = round;
            }
        }
        elected[w] = true;
        out.elected.push(names[w].clone());
        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, items);
        r.figure = Some(v);
        r.ballot_values = last.iter().map(|&k| Rational::from(k as u64)).collect();
        out.rounds.push(r);
    }
    out.final_values = last.iter().map(|&k| Rational::from(k as u64)).collect();
    out.ties = ch.take_events();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(a: u64, b: u64) -> Election {
        Election::from_lines(BallotKind::Unordered, 1, &[(a, "A1 A2 A3 A4 A5"), (b, "B1 B2 B3 B4 B5")]).unwrap()
    }

    #[test]
    fn alternation_patterns() {
        let o = limit_method_elect(&lists(5, 3), 4, &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.elected, ["A1", "B1", "A2", "B2"]);
        let o = limit_method_elect(&lists(7, 3), 5, &TiePolicy::Lexicographic).unwrap();
        let parties: String = o.elected.iter().map(|c| &c[..1]).collect();
        assert_eq!(parties, "AABAA");
    }

    #[test]
    fn single_list() {
        let e = Election::from_lines(BallotKind::Unordered, 1, &[(4, "X Y Z")]).unwrap();
        let o = limit_method_elect(&e, 2, &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.elected, ["X", "Y"]);
    }
}

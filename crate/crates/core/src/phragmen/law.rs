//! The statutory ordered procedure with two-decimal truncation.
//!
//! Ballots are counted in groups. Initially all ballots with the same first
//! name form one group with place number 0. A candidate's figure is
//! `trunc(votes / (1 + sum of place numbers of its groups))`. When a candidate
//! is elected its groups are dissolved, the ballots are regrouped by their next
//! unelected name, and each new group gets place number
//! `trunc(group votes / winning figure)`. New groups stay separate from the
//! groups the receiving candidate already has.

use crate::election::Election;
use crate::error::Result;
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::argmax;
use crate::tie::Chooser;

struct Group {
    candidate: usize,
    lines: Vec<usize>,
    votes: Rational,
    place: Rational,
}

fn trunc(x: Rational) -> Result<Rational> {
    x.truncate_2dec()
}

pub(super) fn law_elect(e: &Election, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let n = names.len();
    let lines = e.lines();
    let values: Vec<Rational> = lines.iter().map(|l| l.value()).collect();
    let mut elected = vec![false; n];
    let mut out = Outcome::new("phragmen-law", true);
    out.figure_name = "W (2 decimals)".into();
    out.value_name = "place number".into();
    out.ballot_labels = e.line_labels();

    let next_name = |line: usize, elected: &[bool]| -> Option<usize> {
        lines[line].ballot.names().find(|&c| !elected[c])
    };
    let regroup = |members: &[usize], elected: &[bool], divisor: Option<&Rational>| -> Result<Vec<Group>> {
        let mut groups: Vec<Group> = Vec::new();
        for &b in members {
            let Some(c) = next_name(b, elected) else { continue };
            match groups.iter_mut().find(|g| g.candidate == c) {
                Some(g) => {
                    g.lines.push(b);
                    g.votes += &values[b];
                }
                None => groups.push(Group {
                    candidate: c,
                    lines: vec![b],
                    votes: values[b].clone(),
                    place: Rational::zero(),
                }),
            }
        }
        if let Some(d) = divisor {
            for g in &mut groups {
                g.place = trunc(&g.votes / d)?;
            }
        }
        Ok(groups)
    };

    let all: Vec<usize> = (0..lines.len()).collect();
    let mut groups = regroup(&all, &elected, None)?;

    for round in 1..=e.seats() {
        let mut votes = vec![Rational::zero(); n];
        let mut places = vec![Rational::zero(); n];
        let mut supported = vec![false; n];
        for g in &groups {
            votes[g.candidate] += &g.votes;
            places[g.candidate] += &g.place;
            supported[g.candidate] = true;
        }
        let mut figures = Vec::new();
        for c in (0..n).filter(|&c| supported[c]) {
            figures.push((c, trunc(&votes[c] / (Rational::one() + &places[c]))?));
        }
        let detail = groups
            .iter()
            .map(|g| format!("{}[{} q={}]", names[g.candidate], g.votes, g.place))
            .collect::<Vec<_>>()
            .join(" ");
        let Some((best, tied)) = argmax(&figures) else {
            let pool: Vec<usize> = (0..n).filter(|&c| !elected[c]).collect();
            let w = ch.pick_named(round, &pool, names);
            elected[w] = true;
            out.elected.push(names[w].clone());
            let mut r = Round::new(round, Action::Elected, &names[w]);
            r.figure = Some(Rational::zero());
            r.note = Some("all ballots exhausted; seat filled by the tie rule".into());
            out.notes.push(format!("round {round}: all ballots exhausted; {} seated by the tie rule", names[w]));
            out.rounds.push(r);
            continue;
        };
        let w = ch.pick_named(round, &tied, names);
        elected[w] = true;
        out.elected.push(names[w].clone());

        let (dissolved, kept): (Vec<Group>, Vec<Group>) = groups.into_iter().partition(|g| g.candidate == w);
        let members: Vec<usize> = dissolved.iter().flat_map(|g| g.lines.iter().copied()).collect();
        groups = kept;
        groups.extend(regroup(&members, &elected, Some(&best))?);

        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, figures);
        r.figure = Some(best);
        r.note = Some(format!("groups before election: {detail}"));
        out.rounds.push(r);
    }
    out.ties = ch.take_events();
    Ok(out)
}

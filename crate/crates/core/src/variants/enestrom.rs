//! Eneström's quota method for unordered ballots.
//!
//! Every ballot starts with voting power 1 and counts its full power for each
//! unelected name. The largest total `v` wins; if `v > Q` the winner's ballots
//! keep the fraction `(v - Q) / v` of their power, otherwise they drop to 0.

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::{Rational, RoundingPolicy};
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::{argmax, run_outcome};
use crate::reference::Quota;
use crate::tie::{Chooser, TiePolicy};

/// `rounding = TruncateTwoDecimals` truncates the quota and every ballot's
/// power to two decimals, as in hand counts.
pub fn enestrom_elect(
    e: &Election,
    s: usize,
    quota: &Quota,
    rounding: RoundingPolicy,
    policy: &TiePolicy,
) -> Result<Outcome> {
    if e.kind() != BallotKind::Unordered {
        return Err(Error::Invalid("Eneström's method takes unordered ballots".into()));
    }
    let e = e.with_seats(s)?;
    let q = rounding.apply(quota.value(&e.total_weight(), s)?)?;
    run_outcome(policy, |ch| count(&e, s, &q, rounding, ch))
}

fn count(e: &Election, s: usize, q: &Rational, rounding: RoundingPolicy, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let lines = e.lines();
    let mut power: Vec<Rational> = lines.iter().map(|l| l.ballot.weight.clone()).collect();
    let mut elected = vec![false; names.len()];
    let mut out = Outcome::new("enestrom", true);
    out.figure_name = "voting power".into();
    out.value_name = "power per ballot".into();
    out.ballot_labels = e.line_labels();
    out.notes.push(format!("quota {q}"));
    for round in 1..=s {
        let mut totals = vec![Rational::zero(); names.len()];
        for (b, l) in lines.iter().enumerate() {
            let v = &power[b] * Rational::from(l.count);
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
        let factor = if v > *q { Some((&v - q) / &v) } else { None };
        for (b, l) in lines.iter().enumerate() {
            if l.ballot.contains(w) {
                power[b] = match &factor {
                    Some(f) => rounding.apply(&power[b] * f)?,
                    None => Rational::zero(),
                };
            }
        }
        elected[w] = true;
        out.elected.push(names[w].clone());
        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, items);
        r.figure = Some(v);
        r.ballot_values = power.clone();
        if factor.is_none() {
            r.note = Some("quota not reached; these ballots are used up".into());
        }
        out.rounds.push(r);
    }
    out.final_values = power;
    out.ties = ch.take_events();
    Ok(out)
}

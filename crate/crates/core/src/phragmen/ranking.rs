//! The Ranking Rule: a large enough bloc with an identical list prefix
//! decides the first seats outright.

use std::collections::BTreeMap;

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{Action, Outcome, Round};
use crate::phragmen::run_outcome;
use crate::thiele::{addition_engine, SatisfactionFunction};
use crate::tie::TiePolicy;

/// Largest `k` such that strictly more than `k/(k+1)` of the total weight has
/// the same first `k` names in the same order; returns those names.
pub fn ranking_rule(e: &Election) -> Result<Vec<String>> {
    Ok(ranked_prefix(e)?.into_iter().map(|(c, _)| e.name(c).to_string()).collect())
}

fn ranked_prefix(e: &Election) -> Result<Vec<(usize, Rational)>> {
    if e.kind() != BallotKind::Ordered {
        return Err(Error::Invalid("the ranking rule takes ordered ballots".into()));
    }
    let total = e.total_weight();
    let mut prefix: Vec<(usize, Rational)> = Vec::new();
    loop {
        let k = prefix.len() + 1;
        let mut share: BTreeMap<usize, Rational> = BTreeMap::new();
        for l in e.lines() {
            let names: Vec<usize> = l.ballot.names().collect();
            if names.len() >= k && names[..k - 1].iter().zip(&prefix).all(|(a, (b, _))| a == b) {
                *share.entry(names[k - 1]).or_default() += l.value();
            }
        }
        // A qualifying bloc is a strict majority, so at most one name can qualify.
        let Some((c, w)) = share.into_iter().max_by(|a, b| a.1.cmp(&b.1)) else {
            break;
        };
        if &w * Rational::from(k + 1) > &total * Rational::from(k) {
            prefix.push((c, w));
        } else {
            break;
        }
    }
    Ok(prefix)
}

/// Seats from the Ranking Rule first (at most `s`), the rest by Thiele's
/// addition method on the ballots read as sets, with the ranked winners
/// counting as already elected.
pub fn ranking_plus_thiele(e: &Election, s: usize, policy: &TiePolicy) -> Result<Outcome> {
    let e = e.with_seats(s)?;
    let mut prefix = ranked_prefix(&e)?;
    prefix.truncate(s);
    let pre: Vec<usize> = prefix.iter().map(|(c, _)| *c).collect();
    let flat = e.as_unordered();
    run_outcome(policy, |ch| {
        let mut out = addition_engine(&flat, s, &SatisfactionFunction::Proportional, &pre, ch)?;
        out.method = "ranking+thiele".into();
        let mut rounds: Vec<Round> = prefix
            .iter()
            .enumerate()
            .map(|(i, (c, w))| {
                let mut r = Round::new(i + 1, Action::Elected, e.name(*c));
                r.figure = Some(w.clone());
                r.note = Some(format!("ranking rule: bloc weight {w} shares the first {} names", i + 1));
                r
            })
            .collect();
        rounds.append(&mut out.rounds);
        out.rounds = rounds;
        Ok(out)
    })
}

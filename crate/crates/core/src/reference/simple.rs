//! Plurality-style methods: each ballot gives fixed points to its names and
//! the `s` largest totals win.

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::{argmax, argmin, run_outcome};
use crate::tie::{Chooser, TiePolicy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleMethod {
    /// One vote to every name.
    Approval,
    /// Approval with at most this many names per ballot.
    Block(usize),
    /// Approval with at most this many names per ballot, usually fewer than seats.
    Limited(usize),
    /// One vote to the first name.
    Sntv,
    /// `1/m` of a vote to each of the `m` names.
    CumulativeEven,
    /// `p_k` points to the name in position `k`; later positions get nothing.
    Scoring(Vec<Rational>),
    /// Eliminate the smallest first-name count until `s` candidates remain.
    BottomsUp,
}

impl SimpleMethod {
    pub fn name(&self) -> String {
        match self {
            SimpleMethod::Approval => "approval".into(),
            SimpleMethod::Block(m) => format!("block:{m}"),
            SimpleMethod::Limited(l) => format!("limited:{l}"),
            SimpleMethod::Sntv => "sntv".into(),
            SimpleMethod::CumulativeEven => "cumulative".into(),
            SimpleMethod::Scoring(p) => {
                let p: Vec<String> = p.iter().map(ToString::to_string).collect();
                format!("scoring:{}", p.join(","))
            }
            SimpleMethod::BottomsUp => "bottomsup".into(),
        }
    }

    fn needs_unordered(&self) -> bool {
        matches!(
            self,
            SimpleMethod::Approval | SimpleMethod::Block(_) | SimpleMethod::Limited(_) | SimpleMethod::CumulativeEven
        )
    }
}

fn check(e: &Election, method: &SimpleMethod) -> Result<()> {
    if method.needs_unordered() {
        if e.kind() != BallotKind::Unordered {
            return Err(Error::Invalid(format!("{} takes unordered ballots", method.name())));
        }
        let limit = match method {
            SimpleMethod::Block(m) | SimpleMethod::Limited(m) => *m,
            _ => return Ok(()),
        };
        let bad: Vec<String> = e
            .lines()
            .iter()
            .filter(|l| l.ballot.len() > limit)
            .map(|l| format!("{} has {} names, limit {limit}", e.line_label(l), l.ballot.len()))
            .collect();
        return if bad.is_empty() { Ok(()) } else { Err(Error::Validation(bad)) };
    }
    if e.kind() == BallotKind::Ordered {
        return Ok(());
    }
    let bad: Vec<String> = e
        .lines()
        .iter()
        .filter(|l| l.ballot.len() > 1)
        .map(|l| format!("{} is not a ranking", e.line_label(l)))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(bad))
    }
}

fn tally(e: &Election, method: &SimpleMethod) -> Vec<Rational> {
    let mut t = vec![Rational::zero(); e.candidates().len()];
    for l in e.lines() {
        let v = l.value();
        let names: Vec<usize> = l.ballot.names().collect();
        match method {
            SimpleMethod::Approval | SimpleMethod::Block(_) | SimpleMethod::Limited(_) => {
                for c in names {
                    t[c] += &v;
                }
            }
            SimpleMethod::CumulativeEven => {
                let share = &v / Rational::from(names.len() as u64);
                for c in names {
                    t[c] += &share;
                }
            }
            SimpleMethod::Sntv | SimpleMethod::BottomsUp => t[names[0]] += &v,
            SimpleMethod::Scoring(p) => {
                for (c, pts) in names.into_iter().zip(p) {
                    t[c] += &v * pts;
                }
            }
        }
    }
    t
}

/// Elects the `s` candidates with the largest totals, or the `s` survivors of
/// repeated first-name eliminations.
pub fn simple_elect(e: &Election, s: usize, method: &SimpleMethod, policy: &TiePolicy) -> Result<Outcome> {
    check(e, method)?;
    let e = e.with_seats(s)?;
    run_outcome(policy, |ch| match method {
        SimpleMethod::BottomsUp => bottoms_up(&e, s, ch),
        _ => top(&e, s, method, ch),
    })
}

fn top(e: &Election, s: usize, method: &SimpleMethod, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let t = tally(e, method);
    let mut out = Outcome::new(method.name(), false);
    out.figure_name = "votes".into();
    out.ballot_labels = e.line_labels();
    let mut left: Vec<(usize, Rational)> = t.iter().cloned().enumerate().collect();
    for round in 1..=s {
        let (best, tied) = argmax(&left).ok_or_else(|| Error::Invalid("fewer candidates than seats".into()))?;
        let c = ch.pick_named(round, &tied, names);
        let mut r = Round::new(round, Action::Elected, &names[c]);
        r.scores = scores_of(names, left.iter().cloned());
        r.figure = Some(best);
        out.rounds.push(r);
        out.elected.push(names[c].clone());
        left.retain(|(x, _)| *x != c);
    }
    out.ties = ch.take_events();
    Ok(out)
}

fn bottoms_up(e: &Election, s: usize, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    if names.len() < s {
        return Err(Error::Invalid("fewer candidates than seats".into()));
    }
    let mut out = Outcome::new(SimpleMethod::BottomsUp.name(), false);
    out.figure_name = "first names".into();
    out.ballot_labels = e.line_labels();
    let mut alive = vec![true; names.len()];
    let mut round = 0;
    while alive.iter().filter(|&&a| a).count() > s {
        round += 1;
        let mut t = vec![Rational::zero(); names.len()];
        for l in e.lines() {
            if let Some(c) = l.ballot.names().find(|&c| alive[c]) {
                t[c] += l.value();
            }
        }
        let items: Vec<(usize, Rational)> = (0..names.len()).filter(|&c| alive[c]).map(|c| (c, t[c].clone())).collect();
        let (low, tied) = argmin(&items).expect("candidates remain");
        let c = ch.pick_named(round, &tied, names);
        alive[c] = false;
        let mut r = Round::new(round, Action::Eliminated, &names[c]);
        r.scores = scores_of(names, items);
        r.figure = Some(low);
        out.rounds.push(r);
    }
    out.elected = (0..names.len()).filter(|&c| alive[c]).map(|c| names[c].clone()).collect();
    out.ties = ch.take_events();
    Ok(out)
}

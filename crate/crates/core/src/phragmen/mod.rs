//! Phragmén's sequential method.
//!
//! One engine handles weakly ordered ballots: an unordered ballot is a single
//! group and an ordered ballot is a sequence of singleton groups. A ballot
//! supports every unelected candidate of its active group, the first group
//! that still contains an unelected candidate.

mod alliance;
mod law;
mod party;
mod ranking;

pub use alliance::{recursive_alliance_elect, AllianceLists, LabeledBallot};
pub use party::phragmen_party_elect;
pub use ranking::{ranking_plus_thiele, ranking_rule};

use crate::election::{Ballot, BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::{Rational, RoundingPolicy};
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::tie::{resolve, Chooser, TiePolicy};

/// Runs an engine under a tie policy and records enumerated alternatives.
pub(crate) fn run_outcome(
    policy: &TiePolicy,
    engine: impl FnMut(&mut Chooser) -> Result<Outcome>,
) -> Result<Outcome> {
    let (mut out, alternatives) = resolve(policy, engine, Outcome::sorted)?;
    out.alternatives = alternatives;
    Ok(out)
}

/// Maximum value and the items attaining it.
pub(crate) fn argmax(items: &[(usize, Rational)]) -> Option<(Rational, Vec<usize>)> {
    let best = items.iter().map(|(_, v)| v).max()?.clone();
    let tied = items
        .iter()
        .filter(|(_, v)| *v == best)
        .map(|(i, _)| *i)
        .collect();
    Some((best, tied))
}

/// Minimum value and the items attaining it.
pub(crate) fn argmin(items: &[(usize, Rational)]) -> Option<(Rational, Vec<usize>)> {
    let best = items.iter().map(|(_, v)| v).min()?.clone();
    let tied = items
        .iter()
        .filter(|(_, v)| *v == best)
        .map(|(i, _)| *i)
        .collect();
    Some((best, tied))
}

/// First group of `b` that still contains an unelected candidate.
pub(crate) fn active_group<'a>(b: &'a Ballot, elected: &[bool]) -> Option<&'a [usize]> {
    b.groups
        .iter()
        .find(|g| g.iter().any(|&c| !elected[c]))
        .map(Vec::as_slice)
}

/// Phragmén's method with comparison figures `W = votes / (1 + place numbers)`.
///
/// `TruncateTwoDecimals` selects the statutory ordered procedure, where ballots
/// are handled in groups and every division is truncated to two decimals.
pub fn phragmen_elect(e: &Election, policy: &TiePolicy, rounding: RoundingPolicy) -> Result<Outcome> {
    match rounding {
        RoundingPolicy::Exact => run_outcome(policy, |ch| comparison_figures(e, ch)),
        RoundingPolicy::TruncateTwoDecimals => {
            if e.kind() != BallotKind::Ordered {
                return Err(Error::Invalid(
                    "two-decimal law mode applies to ordered ballots only".into(),
                ));
            }
            run_outcome(policy, |ch| law::law_elect(e, ch))
        }
    }
}

fn comparison_figures(e: &Election, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let n = names.len();
    let lines = e.lines();
    let values: Vec<Rational> = lines.iter().map(|l| l.value()).collect();
    let mut q = vec![Rational::zero(); lines.len()];
    let mut elected = vec![false; n];
    let mut out = Outcome::new("phragmen", true);
    out.figure_name = "W".into();
    out.value_name = "place number".into();
    out.ballot_labels = e.line_labels();

    for round in 1..=e.seats() {
        let active: Vec<Option<&[usize]>> =
            lines.iter().map(|l| active_group(&l.ballot, &elected)).collect();
        let mut votes = vec![Rational::zero(); n];
        let mut places = vec![Rational::zero(); n];
        let mut supported = vec![false; n];
        for (b, g) in active.iter().enumerate() {
            for &c in g.unwrap_or(&[]) {
                if !elected[c] {
                    votes[c] += &values[b];
                    places[c] += &q[b];
                    supported[c] = true;
                }
            }
        }
        let figures: Vec<(usize, Rational)> = (0..n)
            .filter(|&c| supported[c])
            .map(|c| (c, &votes[c] / (Rational::one() + &places[c])))
            .collect();
        let Some((best, tied)) = argmax(&figures) else {
            let pool: Vec<usize> = (0..n).filter(|&c| !elected[c]).collect();
            let w = ch.pick_named(round, &pool, names);
            elected[w] = true;
            out.elected.push(names[w].clone());
            let mut r = Round::new(round, Action::Elected, &names[w]);
            r.figure = Some(Rational::zero());
            r.ballot_values = q.clone();
            r.note = Some("all ballots exhausted; seat filled by the tie rule".into());
            out.notes.push(format!(
                "round {round}: no ballot supports an unelected candidate; {} seated by the tie rule",
                names[w]
            ));
            out.rounds.push(r);
            continue;
        };
        let w = ch.pick_named(round, &tied, names);
        for (b, g) in active.iter().enumerate() {
            if g.is_some_and(|g| g.contains(&w)) {
                q[b] = &values[b] / &best;
            }
        }
        elected[w] = true;
        out.elected.push(names[w].clone());
        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, figures);
        r.figure = Some(best);
        r.ballot_values = q.clone();
        out.rounds.push(r);
    }
    out.final_values = q;
    out.ties = ch.take_events();
    Ok(out)
}

/// Phragmén's method in the voting-power formulation: each round the
/// candidate whose supporters reach a total of one unit at the smallest common
/// load `t` is elected, and its supporters' loads are raised to `t`.
///
/// Round figures are the times `t`; `final_values` are per-ballot loads.
pub fn phragmen_elect_by_power(e: &Election, policy: &TiePolicy) -> Result<Outcome> {
    run_outcome(policy, |ch| voting_power(e, ch))
}

fn voting_power(e: &Election, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let n = names.len();
    let lines = e.lines();
    let values: Vec<Rational> = lines.iter().map(|l| l.value()).collect();
    let mut load = vec![Rational::zero(); lines.len()];
    let mut elected = vec![false; n];
    let mut out = Outcome::new("phragmen-power", true);
    out.figure_name = "t".into();
    out.value_name = "load".into();
    out.ballot_labels = e.line_labels();

    for round in 1..=e.seats() {
        let active: Vec<Option<&[usize]>> =
            lines.iter().map(|l| active_group(&l.ballot, &elected)).collect();
        // Per candidate: total supporting weight and load already carried.
        let mut weight = vec![Rational::zero(); n];
        let mut carried = vec![Rational::zero(); n];
        for (b, g) in active.iter().enumerate() {
            for &c in g.unwrap_or(&[]) {
                if !elected[c] {
                    weight[c] += &values[b];
                    carried[c] += &values[b] * &load[b];
                }
            }
        }
        let times: Vec<(usize, Rational)> = (0..n)
            .filter(|&c| !elected[c] && weight[c].is_positive())
            .map(|c| (c, (Rational::one() + &carried[c]) / &weight[c]))
            .collect();
        let (t, w) = match argmin(&times) {
            Some((t, tied)) => (Some(t), ch.pick_named(round, &tied, names)),
            None => {
                let pool: Vec<usize> = (0..n).filter(|&c| !elected[c]).collect();
                out.notes.push(format!("round {round}: all ballots exhausted; seat filled by the tie rule"));
                (None, ch.pick_named(round, &pool, names))
            }
        };
        if let Some(t) = &t {
            for (b, g) in active.iter().enumerate() {
                if g.is_some_and(|g| g.contains(&w)) {
                    load[b] = t.clone();
                }
            }
        }
        elected[w] = true;
        out.elected.push(names[w].clone());
        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, times);
        r.figure = t;
        r.ballot_values = load.clone();
        out.rounds.push(r);
    }
    out.final_values = load;
    out.ties = ch.take_events();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;

    fn e1894(kind: BallotKind) -> Election {
        Election::from_lines(kind, 3, &[(1034, "A B C"), (519, "P Q R"), (90, "A B Q"), (47, "A P Q")]).unwrap()
    }

    fn lex() -> TiePolicy {
        TiePolicy::Lexicographic
    }

    #[test]
    fn e1894_unordered() {
        let o = phragmen_elect(&e1894(BallotKind::Unordered), &lex(), RoundingPolicy::Exact).unwrap();
        assert_eq!(o.elected, ["A", "Q", "B"]);
        let w: Vec<_> = o.rounds.iter().map(|r| r.figure.clone().unwrap()).collect();
        assert_eq!(w, [q(1171, 1), q(192044, 327), q(107928728, 195525)]);
        assert_eq!(o.rounds[1].score_of("B"), Some(&q(1316204, 2295)));
        let r2 = &o.rounds[1].ballot_values;
        assert_eq!(r2, &[q(1034, 1171), q(169713, 192044), q(14715, 96022), q(15369, 192044)]);
    }

    #[test]
    fn e1894_ordered() {
        let o = phragmen_elect(&e1894(BallotKind::Ordered), &lex(), RoundingPolicy::Exact).unwrap();
        assert_eq!(o.elected, ["A", "B", "P"]);
        assert_eq!(o.rounds[1].score_of("B"), Some(&q(1316204, 2295)));
        assert_eq!(o.rounds[1].score_of("P"), Some(&q(331393, 609)));
        assert_eq!(o.rounds[2].score_of("P"), Some(&q(331393, 609)));
        assert_eq!(o.rounds[2].score_of("C"), Some(&q(680477468, 1844617)));
        assert_eq!(o.rounds[2].score_of("Q"), Some(&q(59229180, 761377)));
    }

    #[test]
    fn place_numbers_sum_to_seats() {
        let o = phragmen_elect(&e1894(BallotKind::Unordered), &lex(), RoundingPolicy::Exact).unwrap();
        for r in &o.rounds {
            let total: Rational = r.ballot_values.iter().sum();
            assert_eq!(total, Rational::from(r.index));
        }
    }

    #[test]
    fn power_formulation() {
        let o = phragmen_elect_by_power(&e1894(BallotKind::Unordered), &lex()).unwrap();
        assert_eq!(o.elected, ["A", "Q", "B"]);
        let t: Vec<_> = o.rounds.iter().map(|r| r.figure.clone().unwrap()).collect();
        assert_eq!(t, [q(1, 1171), q(327, 192044), q(195525, 107928728)]);
        assert_eq!(o.final_values, [t[2].clone(), t[1].clone(), t[2].clone(), t[1].clone()]);
        let single = Election::from_lines(BallotKind::Unordered, 1, &[(10, "A")]).unwrap();
        let o = phragmen_elect_by_power(&single, &lex()).unwrap();
        assert_eq!(o.rounds[0].figure, Some(q(1, 10)));
        let o = phragmen_elect_by_power(&e1894(BallotKind::Ordered), &lex()).unwrap();
        assert_eq!(o.rounds[1].figure, Some(q(2295, 1316204)));
    }

    #[test]
    fn lanke() {
        let base = Election::from_lines(BallotKind::Ordered, 2, &[(15, "A B"), (12, "B X"), (14, "C Y"), (3, "Z W")]).unwrap();
        assert_eq!(phragmen_elect(&base, &lex(), RoundingPolicy::Exact).unwrap().elected, ["A", "C"]);
        let var = Election::from_lines(BallotKind::Ordered, 2, &[(15, "A B"), (12, "B X"), (14, "C Y"), (3, "A C")]).unwrap();
        let o = phragmen_elect(&var, &lex(), RoundingPolicy::Exact).unwrap();
        assert_eq!(o.elected, ["A", "B"]);
        assert_eq!(o.rounds[1].score_of("B"), Some(&q(162, 11)));
        assert_eq!(o.rounds[1].score_of("C"), Some(&q(102, 7)));
    }

    #[test]
    fn weak_ballots_use_the_active_group() {
        // The second group only matters once A is elected.
        let e = Election::from_lines(BallotKind::Weak, 2, &[(4, "A > B"), (3, "C")]).unwrap();
        let o = phragmen_elect(&e, &lex(), RoundingPolicy::Exact).unwrap();
        assert_eq!(o.elected, ["A", "C"]);
        assert_eq!(o.rounds[1].score_of("B"), Some(&q(2, 1)));
    }

    #[test]
    fn exhausted_ballots_fill_by_tie_rule() {
        let e = Election::from_lines(BallotKind::Ordered, 3, &[(4, "A"), (0, "B C")]).unwrap();
        let o = phragmen_elect(&e, &lex(), RoundingPolicy::Exact).unwrap();
        assert_eq!(o.elected, ["A", "B", "C"]);
        assert_eq!(o.notes.len(), 2);
    }

    #[test]
    fn law_mode_requires_ordered() {
        let err = phragmen_elect(&e1894(BallotKind::Unordered), &lex(), RoundingPolicy::TruncateTwoDecimals);
        assert!(matches!(err, Err(Error::Invalid(_))));
    }
}

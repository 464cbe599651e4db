//! Single transferable vote with inclusive Gregory transfers.
//!
//! Every ballot line carries a current value per ballot. A candidate's total is
//! the value of the lines whose first continuing name it is. Candidates reaching
//! the quota are elected; their ballots move on with reduced value. When no one
//! reaches the quota the lowest candidate is eliminated and its ballots move on
//! unchanged. Ballots with no continuing name are exhausted and stay removed.

use std::fmt;
use std::str::FromStr;

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::{Rational, RoundingPolicy};
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::{argmax, argmin, phragmen_elect, run_outcome};
use crate::reference::Quota;
use crate::tie::{Chooser, TiePolicy};

/// How the value of transferred ballots is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransferValue {
    /// All ballots of the winner continue at `(v - Q) / N` each, `N` their number.
    #[default]
    InclusiveGregory,
    /// Each ballot's current value is multiplied by `(v - Q) / v`.
    WeightedInclusiveGregory,
}

/// Order in which elections and surplus transfers happen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TransferOrder {
    /// Pending surpluses are transferred largest first; once none is left,
    /// everyone at or above the quota is declared at once.
    #[default]
    LargestSurplusFirst,
    /// One candidate is declared at a time and its surplus transferred
    /// immediately. With a prescribed order the next listed candidate is
    /// declared whenever it has reached the quota; otherwise, or when it has
    /// not, the largest total at or above the quota is declared.
    ElectionOrder(Option<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransferPolicy {
    pub value: TransferValue,
    pub order: TransferOrder,
}

impl fmt::Display for TransferPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.value {
            TransferValue::InclusiveGregory => "ig",
            TransferValue::WeightedInclusiveGregory => "wig",
        })?;
        match &self.order {
            TransferOrder::LargestSurplusFirst => f.write_str(":order=surplus"),
            TransferOrder::ElectionOrder(None) => f.write_str(":order=elect"),
            TransferOrder::ElectionOrder(Some(o)) => write!(f, ":order={}", o.join(",")),
        }
    }
}

impl FromStr for TransferValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ig" => Ok(TransferValue::InclusiveGregory),
            "wig" => Ok(TransferValue::WeightedInclusiveGregory),
            _ => Err(Error::Invalid(format!("unknown transfer value '{s}'"))),
        }
    }
}

/// Counts an ordered election with the given quota and transfer rules.
pub fn stv_elect(
    e: &Election,
    s: usize,
    quota: &Quota,
    transfer: &TransferPolicy,
    policy: &TiePolicy,
) -> Result<Outcome> {
    if e.kind() != BallotKind::Ordered {
        return Err(Error::Invalid("STV takes ordered ballots".into()));
    }
    let e = e.with_seats(s)?;
    let q = quota.value(&e.total_weight(), s)?;
    if let TransferOrder::ElectionOrder(Some(order)) = &transfer.order {
        for id in order {
            if e.index_of(id).is_none() {
                return Err(Error::Invalid(format!("unknown candidate {id} in the transfer order")));
            }
        }
    }
    run_outcome(policy, |ch| Count::new(&e, s, q.clone(), transfer).run(ch))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Continuing,
    /// Elected; the surplus has not been transferred yet.
    Pending,
    Elected,
    Eliminated,
}

struct Count<'a> {
    e: &'a Election,
    s: usize,
    q: Rational,
    transfer: &'a TransferPolicy,
    status: Vec<Status>,
    /// Value of one ballot of each line.
    value: Vec<Rational>,
    /// Candidate each line currently counts for.
    holder: Vec<Option<usize>>,
    out: Outcome,
    round: usize,
    elected: usize,
}

impl<'a> Count<'a> {
    fn new(e: &'a Election, s: usize, q: Rational, transfer: &'a TransferPolicy) -> Count<'a> {
        let mut out = Outcome::new(format!("stv[{transfer}]"), true);
        out.figure_name = "votes".into();
        out.value_name = "ballot value".into();
        out.ballot_labels = e.line_labels();
        out.notes.push(format!("quota {q}"));
        let n = e.candidates().len();
        let mut c = Count {
            e,
            s,
            q,
            transfer,
            status: vec![Status::Continuing; n],
            value: e.lines().iter().map(|l| l.ballot.weight.clone()).collect(),
            holder: vec![None; e.lines().len()],
            out,
            round: 0,
            elected: 0,
        };
        for b in 0..e.lines().len() {
            c.holder[b] = c.next_holder(b);
        }
        c
    }

    fn next_holder(&self, b: usize) -> Option<usize> {
        self.e.lines()[b]
            .ballot
            .names()
            .find(|&c| self.status[c] == Status::Continuing)
    }

    fn totals(&self) -> Vec<Rational> {
        let mut t = vec![Rational::zero(); self.e.candidates().len()];
        for (b, l) in self.e.lines().iter().enumerate() {
            if let Some(c) = self.holder[b] {
                t[c] += &self.value[b] * Rational::from(l.count);
            }
        }
        t
    }

    fn continuing(&self) -> Vec<usize> {
        (0..self.status.len())
            .filter(|&c| self.status[c] == Status::Continuing)
            .collect()
    }

    fn record(&mut self, action: Action, c: usize, totals: &[Rational], note: Option<String>) {
        self.round += 1;
        let names = self.e.candidates();
        let mut r = Round::new(self.round, action, &names[c]);
        let shown: Vec<(usize, Rational)> = (0..names.len())
            .filter(|&x| self.status[x] == Status::Continuing || x == c)
            .map(|x| (x, totals[x].clone()))
            .collect();
        r.scores = scores_of(names, shown);
        r.figure = Some(totals[c].clone());
        r.ballot_values = self.value.clone();
        r.note = note;
        self.out.rounds.push(r);
    }

    fn declare(&mut self, c: usize, totals: &[Rational]) {
        self.status[c] = Status::Pending;
        self.elected += 1;
        self.out.elected.push(self.e.name(c).to_string());
        let surplus = &totals[c] - &self.q;
        self.record(Action::Elected, c, totals, Some(format!("surplus {surplus}")));
    }

    /// Moves the ballots held by `c` on, with the reduced value if `c` was elected.
    fn transfer_from(&mut self, c: usize, total: &Rational) {
        let lines = self.e.lines();
        let pile: Vec<usize> = (0..lines.len()).filter(|&b| self.holder[b] == Some(c)).collect();
        if self.status[c] == Status::Pending {
            let surplus = total - &self.q;
            match self.transfer.value {
                TransferValue::InclusiveGregory => {
                    let n: Rational = pile
                        .iter()
                        .map(|&b| &lines[b].ballot.weight * Rational::from(lines[b].count))
                        .sum();
                    for &b in &pile {
                        self.value[b] = &lines[b].ballot.weight * &surplus / &n;
                    }
                }
                TransferValue::WeightedInclusiveGregory => {
                    let f = &surplus / total;
                    for &b in &pile {
                        self.value[b] = &self.value[b] * &f;
                    }
                }
            }
            self.status[c] = Status::Elected;
        }
        for b in pile {
            self.holder[b] = self.next_holder(b);
        }
    }

    fn fill(&mut self, ch: &mut Chooser) {
        let names = self.e.candidates();
        while self.elected < self.s {
            let totals = self.totals();
            let items: Vec<(usize, Rational)> = self.continuing().into_iter().map(|c| (c, totals[c].clone())).collect();
            let Some((_, tied)) = argmax(&items) else { break };
            let c = ch.pick_named(self.round + 1, &tied, names);
            self.status[c] = Status::Elected;
            self.elected += 1;
            self.out.elected.push(names[c].clone());
            self.record(
                Action::Elected,
                c,
                &totals,
                Some("elected without the quota: continuing candidates equal open seats".into()),
            );
        }
    }

    fn run(mut self, ch: &mut Chooser) -> Result<Outcome> {
        let names = self.e.candidates();
        let mut prescribed: Vec<usize> = match &self.transfer.order {
            TransferOrder::ElectionOrder(Some(order)) => {
                order.iter().filter_map(|id| self.e.index_of(id)).collect()
            }
            _ => Vec::new(),
        };
        loop {
            if self.elected >= self.s {
                break;
            }
            let pending: Vec<usize> = (0..names.len()).filter(|&c| self.status[c] == Status::Pending).collect();
            if self.continuing().len() + self.elected <= self.s && pending.is_empty() {
                self.fill(ch);
                break;
            }
            let totals = self.totals();
            match &self.transfer.order {
                TransferOrder::LargestSurplusFirst => {
                    // Pending surpluses go first, largest first; candidates they
                    // lift over the quota are declared once none is left.
                    let pending: Vec<(usize, Rational)> = (0..names.len())
                        .filter(|&c| self.status[c] == Status::Pending)
                        .map(|c| (c, &totals[c] - &self.q))
                        .collect();
                    if let Some((_, tied)) = argmax(&pending) {
                        let c = ch.pick_named(self.round + 1, &tied, names);
                        let total = totals[c].clone();
                        self.transfer_from(c, &total);
                        continue;
                    }
                    let mut reached: Vec<(usize, Rational)> = self
                        .continuing()
                        .into_iter()
                        .filter(|&c| totals[c] >= self.q)
                        .map(|c| (c, totals[c].clone()))
                        .collect();
                    if !reached.is_empty() {
                        while !reached.is_empty() && self.elected < self.s {
                            let (_, tied) = argmax(&reached).expect("nonempty");
                            let c = ch.pick_named(self.round + 1, &tied, names);
                            reached.retain(|(x, _)| *x != c);
                            self.declare(c, &totals);
                        }
                        continue;
                    }
                }
                TransferOrder::ElectionOrder(_) => {
                    let reached: Vec<(usize, Rational)> = self
                        .continuing()
                        .into_iter()
                        .filter(|&c| totals[c] >= self.q)
                        .map(|c| (c, totals[c].clone()))
                        .collect();
                    prescribed.retain(|&c| self.status[c] == Status::Continuing);
                    let next = prescribed.first().copied().filter(|&c| totals[c] >= self.q);
                    let chosen = match next {
                        Some(c) => Some(c),
                        None => argmax(&reached).map(|(_, tied)| ch.pick_named(self.round + 1, &tied, names)),
                    };
                    if let Some(c) = chosen {
                        if !prescribed.is_empty() && next.is_none() {
                            self.out
                                .notes
                                .push(format!("{} declared out of the prescribed order", names[c]));
                        }
                        self.declare(c, &totals);
                        if self.elected >= self.s {
                            break;
                        }
                        let total = totals[c].clone();
                        self.transfer_from(c, &total);
                        continue;
                    }
                }
            }
            // Nobody reaches the quota: eliminate the lowest.
            let items: Vec<(usize, Rational)> = self.continuing().into_iter().map(|c| (c, totals[c].clone())).collect();
            let Some((_, tied)) = argmin(&items) else { break };
            let c = ch.pick_named(self.round + 1, &tied, names);
            self.status[c] = Status::Eliminated;
            self.record(Action::Eliminated, c, &totals, None);
            let total = totals[c].clone();
            self.transfer_from(c, &total);
        }
        if self.elected < self.s {
            return Err(Error::Invalid("not enough candidates to fill the seats".into()));
        }
        self.out.final_values = self.value.clone();
        self.out.ties = ch.take_events();
        Ok(self.out)
    }
}

/// The quota `W` of the last seat under Phragmén's ordered method, and the
/// order in which that method elects.
pub fn stv_quota_from_phragmen(e: &Election, s: usize) -> Result<(Rational, Vec<String>)> {
    if e.kind() != BallotKind::Ordered {
        return Err(Error::Invalid("the quota is defined for ordered ballots".into()));
    }
    let e = e.with_seats(s)?;
    let o = phragmen_elect(&e, &TiePolicy::Lexicographic, RoundingPolicy::Exact)?;
    if !o.notes.is_empty() {
        return Err(Error::Unsupported(
            "a seat was filled after all ballots were exhausted".into(),
        ));
    }
    let q = o.rounds.last().and_then(|r| r.figure.clone()).expect("at least one seat");
    Ok((q, o.elected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;
    use crate::reference::QuotaSpec;

    fn ordered(lines: &[(u64, &str)]) -> Election {
        Election::from_lines(BallotKind::Ordered, 1, lines).unwrap()
    }

    fn ephr_stv() -> Election {
        ordered(&[(22, "A B C D"), (11, "A B E"), (11, "C E")])
    }

    fn eliminations(o: &Outcome) -> usize {
        o.rounds.iter().filter(|r| r.action == Action::Eliminated).count()
    }

    #[test]
    fn election_order_with_phragmen_quota() {
        let e = ephr_stv();
        let (q9, order) = stv_quota_from_phragmen(&e, 4).unwrap();
        assert_eq!(q9, q(9, 1));
        assert_eq!(order, ["A", "B", "C", "E"]);
        let t = TransferPolicy {
            value: TransferValue::InclusiveGregory,
            order: TransferOrder::ElectionOrder(Some(order)),
        };
        let o = stv_elect(&e, 4, &Quota::Custom(q9.clone()), &t, &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.elected, ["A", "B", "C", "E"]);
        assert_eq!(eliminations(&o), 0);
        assert_eq!(o.rounds.last().unwrap().figure, Some(q9.clone()));
        // Without a prescribed order the largest total goes first: A, then B.
        let t = TransferPolicy {
            value: TransferValue::InclusiveGregory,
            order: TransferOrder::ElectionOrder(None),
        };
        let o = stv_elect(&e, 4, &Quota::Custom(q9), &t, &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.elected, ["A", "B", "C", "E"]);
    }

    #[test]
    fn largest_surplus_first() {
        let e = ephr_stv();
        let o = stv_elect(&e, 4, &Quota::Custom(q(9, 1)), &TransferPolicy::default(), &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.elected, ["A", "C", "B", "D"]);
        let last = o.rounds.last().unwrap();
        assert_eq!(last.figure, Some(q(10, 1)));
        assert_eq!(last.score_of("E"), Some(&q(7, 1)));
    }

    #[test]
    fn party_lists_behave_like_quota_method() {
        let e = ordered(&[(61, "A B"), (39, "C D")]);
        let droop = Quota::Spec(QuotaSpec::droop());
        let o = stv_elect(&e, 2, &droop, &TransferPolicy::default(), &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.sorted(), ["A", "C"]);
    }

    #[test]
    fn quota_examples() {
        let e = ordered(&[(10, "A B C")]);
        assert_eq!(stv_quota_from_phragmen(&e, 2).unwrap(), (q(5, 1), vec!["A".into(), "B".into()]));
        let e = ordered(&[(1034, "A B C"), (519, "P Q R"), (90, "A B Q"), (47, "A P Q")]);
        assert_eq!(stv_quota_from_phragmen(&e, 3).unwrap().0, q(331393, 609));
        let e = ordered(&[(3, "A")]).with_lines(vec![(vec![vec!["B".into()]], q(1, 1), 0)]).unwrap();
        assert!(matches!(stv_quota_from_phragmen(&e, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn eliminations_and_weighted_transfers() {
        // Nobody reaches the Droop quota 7 at first; C is eliminated and its
        // ballots carry B over the quota.
        let e = ordered(&[(6, "A"), (5, "B"), (4, "C B"), (5, "D")]);
        let droop = Quota::Spec(QuotaSpec::droop());
        let o = stv_elect(&e, 2, &droop, &TransferPolicy::default(), &TiePolicy::Lexicographic).unwrap();
        assert_eq!(o.rounds[0].action, Action::Eliminated);
        assert_eq!(o.rounds[0].candidate, "C");
        assert_eq!(o.elected[0], "B");
        let wig = TransferPolicy {
            value: TransferValue::WeightedInclusiveGregory,
            order: TransferOrder::LargestSurplusFirst,
        };
        let e = ordered(&[(20, "A B"), (10, "A C"), (12, "C")]);
        let o = stv_elect(&e, 2, &Quota::Custom(q(15, 1)), &wig, &TiePolicy::Lexicographic).unwrap();
        // A's surplus 15 leaves every A ballot at 1/2: C has 12 + 5 = 17, B 10.
        assert_eq!(o.elected, ["A", "C"]);
        assert_eq!(o.rounds[1].figure, Some(q(17, 1)));
    }
}

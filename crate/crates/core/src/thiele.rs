//! Thiele's methods: optimization, addition, elimination and the ordered
//! addition method, for any satisfaction function `f(n) = w_1 + ... + w_n`.

use std::fmt;
use std::str::FromStr;

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::{argmax, argmin, run_outcome};
use crate::search::{self, Classes, Objective, DEFAULT_BUDGET};
use crate::tie::{Chooser, TiePolicy};

/// Weight sequence `w_1 = 1, w_2, ...` of a satisfaction function.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SatisfactionFunction {
    /// `w_n = 1/n`.
    #[default]
    Proportional,
    /// `w_n = 1`; the optimum is approval voting.
    Strong,
    /// `w_1 = 1`, `w_n = 0` afterwards.
    Weak,
    /// Explicit weights; past the end the last weight repeats if
    /// `repeat_last`, otherwise the weight is 0.
    Custom { weights: Vec<Rational>, repeat_last: bool },
}

impl SatisfactionFunction {
    pub fn custom(weights: Vec<Rational>, repeat_last: bool) -> Result<SatisfactionFunction> {
        if weights.first() != Some(&Rational::one()) {
            return Err(Error::Invalid("the first weight must be 1".into()));
        }
        if weights.iter().any(Rational::is_negative) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        Ok(SatisfactionFunction::Custom { weights, repeat_last })
    }

    /// `w_n` for `n >= 1`.
    pub fn weight(&self, n: usize) -> Rational {
        assert!(n >= 1, "weights start at 1");
        match self {
            SatisfactionFunction::Proportional => Rational::from(n).recip().expect("n >= 1"),
            SatisfactionFunction::Strong => Rational::one(),
            SatisfactionFunction::Weak => {
                if n == 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            SatisfactionFunction::Custom { weights, repeat_last } => match weights.get(n - 1) {
                Some(w) => w.clone(),
                None if *repeat_last => weights.last().cloned().unwrap_or_default(),
                None => Rational::zero(),
            },
        }
    }

    /// `f(n)`.
    pub fn value(&self, n: usize) -> Rational {
        (1..=n).map(|k| self.weight(k)).sum()
    }

    /// `sup { w_k : k >= m }`.
    pub(crate) fn weight_sup(&self, m: usize) -> Rational {
        match self {
            SatisfactionFunction::Custom { weights, repeat_last } => {
                let tail = weights.iter().skip(m - 1).max().cloned();
                let last = if *repeat_last { weights.last().cloned() } else { Some(Rational::zero()) };
                tail.into_iter().chain(last).max().unwrap_or_default()
            }
            _ => self.weight(m),
        }
    }
}

impl fmt::Display for SatisfactionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatisfactionFunction::Proportional => f.write_str("prop"),
            SatisfactionFunction::Strong => f.write_str("strong"),
            SatisfactionFunction::Weak => f.write_str("weak"),
            SatisfactionFunction::Custom { weights, repeat_last } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                write!(f, "custom:{}", w.join(","))?;
                if *repeat_last {
                    f.write_str(",repeat-last")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SatisfactionFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop" | "proportional" => Ok(SatisfactionFunction::Proportional),
            "strong" => Ok(SatisfactionFunction::Strong),
            "weak" => Ok(SatisfactionFunction::Weak),
            _ => {
                let Some(list) = s.strip_prefix("custom:") else {
                    return Err(Error::Invalid(format!("unknown satisfaction function '{s}'")));
                };
                let mut items: Vec<&str> = list.split(',').map(str::trim).collect();
                let repeat_last = items.last() == Some(&"repeat-last");
                if repeat_last {
                    items.pop();
                }
                let weights = items.iter().map(|w| w.parse()).collect::<Result<Vec<Rational>>>()?;
                SatisfactionFunction::custom(weights, repeat_last)
            }
        }
    }
}

/// `F(S) = sum over ballots of v * f(|ballot ∩ S|)`, reading every ballot as
/// a set.
pub fn satisfaction(set: &[&str], e: &Election, f: &SatisfactionFunction) -> Result<Rational> {
    let mut member = vec![false; e.candidates().len()];
    for id in set {
        let c = e
            .index_of(id)
            .ok_or_else(|| Error::Invalid(format!("unknown candidate {id}")))?;
        member[c] = true;
    }
    Ok(satisfaction_of(e, f, &member))
}

fn satisfaction_of(e: &Election, f: &SatisfactionFunction, member: &[bool]) -> Rational {
    e.lines()
        .iter()
        .map(|l| l.value() * f.value(l.ballot.names().filter(|&c| member[c]).count()))
        .sum()
}

fn require_unordered(e: &Election, what: &str) -> Result<()> {
    if e.kind() != BallotKind::Unordered {
        return Err(Error::Invalid(format!("{what} takes unordered ballots")));
    }
    Ok(())
}

struct ThieleObjective<'a> {
    e: &'a Election,
    f: &'a SatisfactionFunction,
    classes: &'a Classes,
    /// Classes on each ballot line.
    on_line: Vec<Vec<usize>>,
}

impl ThieleObjective<'_> {
    fn elected_on_lines(&self, counts: &[usize], depth: usize) -> Vec<usize> {
        self.on_line
            .iter()
            .map(|cls| cls.iter().filter(|&&j| j < depth).map(|&j| counts[j]).sum())
            .collect()
    }
}

impl Objective for ThieleObjective<'_> {
    fn score(&self, counts: &[usize]) -> Option<Rational> {
        let m = self.elected_on_lines(counts, counts.len());
        Some(self.e.lines().iter().zip(m).map(|(l, k)| l.value() * self.f.value(k)).sum())
    }

    fn bound(&self, counts: &[usize], depth: usize, remaining: usize) -> Option<Rational> {
        let m = self.elected_on_lines(counts, depth);
        let lines = self.e.lines();
        let base: Rational = lines.iter().zip(&m).map(|(l, &k)| l.value() * self.f.value(k)).sum();
        let mut gains: Vec<(Rational, usize)> = (depth..self.classes.len())
            .map(|j| {
                let g = self.classes.lines[j]
                    .iter()
                    .map(|&b| lines[b].value() * self.f.weight_sup(m[b] + 1))
                    .sum();
                (g, self.classes.members[j].len())
            })
            .collect();
        gains.sort_by(|a, b| b.0.cmp(&a.0));
        let mut left = remaining;
        let mut extra = Rational::zero();
        for (g, size) in gains {
            let k = size.min(left);
            extra += g * Rational::from(k);
            left -= k;
            if left == 0 {
                break;
            }
        }
        Some(base + extra)
    }
}

/// Thiele's optimization method with the default search budget.
pub fn thiele_opt(e: &Election, s: usize, f: &SatisfactionFunction, policy: &TiePolicy) -> Result<Outcome> {
    thiele_opt_with_budget(e, s, f, policy, DEFAULT_BUDGET)
}

/// A committee of size `s` with the largest satisfaction. Under
/// `EnumerateAll` every maximizing committee is listed in `alternatives`.
pub fn thiele_opt_with_budget(
    e: &Election,
    s: usize,
    f: &SatisfactionFunction,
    policy: &TiePolicy,
    budget: u128,
) -> Result<Outcome> {
    require_unordered(e, "Thiele's optimization method")?;
    let e = e.with_seats(s)?;
    let classes = Classes::of(&e);
    let mut on_line = vec![Vec::new(); e.lines().len()];
    for (j, ls) in classes.lines.iter().enumerate() {
        for &b in ls {
            on_line[b].push(j);
        }
    }
    let obj = ThieleObjective {
        e: &e,
        f,
        classes: &classes,
        on_line,
    };
    let opt = search::search(&classes, s, &obj, budget)?;
    let mut ch = Chooser::new(policy);
    let (set, alternatives, tied) = search::choose(&classes, &opt.optima, e.candidates(), policy, &mut ch)?;
    let mut out = Outcome::new(format!("thiele-opt[{f}]"), false);
    out.figure_name = "satisfaction".into();
    out.elected = set.iter().map(|&c| e.name(c).to_string()).collect();
    out.objective = opt.best;
    out.alternatives = alternatives;
    out.ties = ch.take_events();
    if tied {
        out.notes.push("several committees attain the optimum".into());
    }
    Ok(out)
}

/// Thiele's addition method: a ballot with `k` elected names counts `w_(k+1)`
/// for each of its unelected names.
pub fn thiele_addition(e: &Election, s: usize, f: &SatisfactionFunction, policy: &TiePolicy) -> Result<Outcome> {
    require_unordered(e, "Thiele's addition method")?;
    let e = e.with_seats(s)?;
    run_outcome(policy, |ch| addition_engine(&e, s, f, &[], ch))
}

/// Addition rounds after the candidates in `pre` have already been seated.
pub(crate) fn addition_engine(
    e: &Election,
    s: usize,
    f: &SatisfactionFunction,
    pre: &[usize],
    ch: &mut Chooser,
) -> Result<Outcome> {
    let names = e.candidates();
    let n = names.len();
    let lines = e.lines();
    let mut elected = vec![false; n];
    let mut out = Outcome::new(format!("thiele-add[{f}]"), true);
    out.figure_name = "votes".into();
    out.value_name = "elected names".into();
    out.ballot_labels = e.line_labels();
    for &c in pre {
        elected[c] = true;
        out.elected.push(names[c].clone());
    }
    let mut k: Vec<usize> = lines
        .iter()
        .map(|l| l.ballot.names().filter(|&c| elected[c]).count())
        .collect();
    for round in pre.len() + 1..=s {
        let mut votes = vec![Rational::zero(); n];
        for (b, l) in lines.iter().enumerate() {
            let w = l.value() * f.weight(k[b] + 1);
            for c in l.ballot.names() {
                votes[c] += &w;
            }
        }
        let counts: Vec<(usize, Rational)> = (0..n).filter(|&c| !elected[c]).map(|c| (c, votes[c].clone())).collect();
        let (best, tied) = argmax(&counts).ok_or_else(|| Error::Invalid("more seats than candidates".into()))?;
        let w = ch.pick_named(round, &tied, names);
        elected[w] = true;
        out.elected.push(names[w].clone());
        for (b, l) in lines.iter().enumerate() {
            if l.ballot.contains(w) {
                k[b] += 1;
            }
        }
        let mut r = Round::new(round, Action::Elected, &names[w]);
        if best.is_zero() {
            r.note = Some("all remaining counts are zero; seat filled by the tie rule".into());
            out.notes.push(format!("round {round}: all remaining counts are zero"));
        }
        r.scores = scores_of(names, counts);
        r.figure = Some(best);
        r.ballot_values = k.iter().map(|&x| Rational::from(x)).collect();
        out.rounds.push(r);
    }
    out.final_values = k.iter().map(|&x| Rational::from(x)).collect();
    out.objective = Some(satisfaction_of(e, f, &elected));
    out.ties = ch.take_events();
    Ok(out)
}

/// Thiele's elimination method: a ballot with `k` remaining names counts
/// `w_k` for each of them; the smallest count is eliminated until `s` remain.
pub fn thiele_elimination(e: &Election, s: usize, f: &SatisfactionFunction, policy: &TiePolicy) -> Result<Outcome> {
    require_unordered(e, "Thiele's elimination method")?;
    let e = e.with_seats(s)?;
    run_outcome(policy, |ch| {
        let names = e.candidates();
        let n = names.len();
        let lines = e.lines();
        let mut remaining = vec![true; n];
        let mut out = Outcome::new(format!("thiele-elim[{f}]"), false);
        out.figure_name = "votes".into();
        out.value_name = "remaining names".into();
        out.ballot_labels = e.line_labels();
        for round in 1..=n - s {
            let k: Vec<usize> = lines
                .iter()
                .map(|l| l.ballot.names().filter(|&c| remaining[c]).count())
                .collect();
            let mut votes = vec![Rational::zero(); n];
            for (b, l) in lines.iter().enumerate() {
                if k[b] == 0 {
                    continue;
                }
                let w = l.value() * f.weight(k[b]);
                for c in l.ballot.names() {
                    votes[c] += &w;
                }
            }
            let counts: Vec<(usize, Rational)> =
                (0..n).filter(|&c| remaining[c]).map(|c| (c, votes[c].clone())).collect();
            let (low, tied) = argmin(&counts).expect("candidates remain");
            let x = ch.pick_named(round, &tied, names);
            remaining[x] = false;
            let mut r = Round::new(round, Action::Eliminated, &names[x]);
            r.scores = scores_of(names, counts);
            r.figure = Some(low);
            r.ballot_values = k.iter().map(|&x| Rational::from(x)).collect();
            out.rounds.push(r);
        }
        out.elected = (0..n).filter(|&c| remaining[c]).map(|c| names[c].clone()).collect();
        out.objective = Some(satisfaction_of(&e, f, &remaining));
        out.ties = ch.take_events();
        Ok(out)
    })
}

/// Thiele's ordered method: each ballot counts for its first unelected name,
/// with weight `w_k` where `k - 1` names before it are elected.
pub fn thiele_ordered(e: &Election, s: usize, f: &SatisfactionFunction, policy: &TiePolicy) -> Result<Outcome> {
    if e.kind() != BallotKind::Ordered {
        return Err(Error::Invalid("Thiele's ordered method takes ordered ballots".into()));
    }
    let e = e.with_seats(s)?;
    run_outcome(policy, |ch| {
        let names = e.candidates();
        let n = names.len();
        let lines = e.lines();
        let mut elected = vec![false; n];
        let mut out = Outcome::new(format!("thiele-ordered[{f}]"), true);
        out.figure_name = "votes".into();
        out.value_name = "position".into();
        out.ballot_labels = e.line_labels();
        for round in 1..=s {
            let mut votes = vec![Rational::zero(); n];
            let mut supported = vec![false; n];
            let mut position = Vec::with_capacity(lines.len());
            for l in lines {
                let top = l.ballot.names().enumerate().find(|&(_, c)| !elected[c]);
                match top {
                    Some((k, c)) => {
                        votes[c] += l.value() * f.weight(k + 1);
                        supported[c] = true;
                        position.push(Rational::from(k + 1));
                    }
                    None => position.push(Rational::zero()),
                }
            }
            let counts: Vec<(usize, Rational)> =
                (0..n).filter(|&c| supported[c]).map(|c| (c, votes[c].clone())).collect();
            let (best, tied, note) = match argmax(&counts) {
                Some((best, tied)) => (best, tied, None),
                None => {
                    let pool: Vec<usize> = (0..n).filter(|&c| !elected[c]).collect();
                    out.notes.push(format!("round {round}: all ballots exhausted; seat filled by the tie rule"));
                    (Rational::zero(), pool, Some("all ballots exhausted; seat filled by the tie rule".to_string()))
                }
            };
            let w = ch.pick_named(round, &tied, names);
            elected[w] = true;
            out.elected.push(names[w].clone());
            let mut r = Round::new(round, Action::Elected, &names[w]);
            r.scores = scores_of(names, counts);
            r.figure = Some(best);
            r.ballot_values = position;
            r.note = note;
            out.rounds.push(r);
        }
        out.ties = ch.take_events();
        Ok(out)
    })
}

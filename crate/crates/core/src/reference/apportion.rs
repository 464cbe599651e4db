//! Party-list apportionment: divisor methods and largest-remainder quota methods.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Apportionment, PartySeats, Round};
use crate::phragmen::argmax;
use crate::thiele::SatisfactionFunction;
use crate::tie::{resolve, Chooser, TiePolicy};

/// Divisors `d_1, d_2, ...` of a highest-averages method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisorSequence {
    /// 1, 2, 3, ...
    DHondt,
    /// 1, 3, 5, ...
    SainteLague,
    /// x, 3, 5, ...
    ModifiedSainteLague(Rational),
    /// Explicit divisors; a party cannot receive more seats than listed.
    Custom(Vec<Rational>),
    /// Divisors `1/w_n` of a satisfaction function (a zero weight ends the sequence).
    Reciprocal(SatisfactionFunction),
}

impl DivisorSequence {
    /// `votes / d_(held+1)`, or `None` if the party can take no further seat.
    pub fn quotient(&self, votes: &Rational, held: usize) -> Option<Rational> {
        let n = held + 1;
        let d = match self {
            DivisorSequence::DHondt => Rational::from(n),
            DivisorSequence::SainteLague => Rational::from(2 * n - 1),
            DivisorSequence::ModifiedSainteLague(x) => {
                if n == 1 {
                    x.clone()
                } else {
                    Rational::from(2 * n - 1)
                }
            }
            DivisorSequence::Custom(ds) => ds.get(held)?.clone(),
            DivisorSequence::Reciprocal(f) => {
                let w = f.weight(n);
                return if w.is_zero() { None } else { Some(votes * w) };
            }
        };
        Some(votes / d)
    }

    fn name(&self) -> String {
        match self {
            DivisorSequence::DHondt => "dhondt".into(),
            DivisorSequence::SainteLague => "sainte-lague".into(),
            DivisorSequence::ModifiedSainteLague(x) => format!("msl:{x}"),
            DivisorSequence::Custom(ds) => {
                let d: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                format!("divisors:{}", d.join(","))
            }
            DivisorSequence::Reciprocal(f) => format!("divisors[1/w, {f}]"),
        }
    }
}

fn check_votes(votes: &BTreeMap<String, Rational>) -> Result<()> {
    if votes.values().any(Rational::is_negative) {
        return Err(Error::Invalid("negative vote total".into()));
    }
    if !votes.values().any(Rational::is_positive) {
        return Err(Error::Invalid("no party has votes".into()));
    }
    Ok(())
}

fn seats_vec(parties: &[String], held: &[u64]) -> Vec<PartySeats> {
    parties
        .iter()
        .zip(held)
        .map(|(p, &s)| PartySeats { party: p.clone(), seats: s })
        .collect()
}

/// Highest averages: each seat goes to the largest `votes / d_(seats+1)`.
pub fn divisor_method(
    votes: &BTreeMap<String, Rational>,
    s: usize,
    d: &DivisorSequence,
    policy: &TiePolicy,
) -> Result<Apportionment> {
    check_votes(votes)?;
    let parties: Vec<String> = votes.keys().cloned().collect();
    let v: Vec<Rational> = votes.values().cloned().collect();
    let run = |ch: &mut Chooser| -> Result<Apportionment> {
        let mut held = vec![0u64; parties.len()];
        let mut out = Apportionment {
            method: d.name(),
            seats: Vec::new(),
            awards: Vec::new(),
            rounds: Vec::new(),
            ties: Vec::new(),
            notes: Vec::new(),
            alternatives: Vec::new(),
        };
        for round in 1..=s {
            let quotients: Vec<(usize, Rational)> = (0..parties.len())
                .filter(|&p| v[p].is_positive())
                .filter_map(|p| d.quotient(&v[p], held[p] as usize).map(|x| (p, x)))
                .collect();
            let (best, tied) = argmax(&quotients)
                .ok_or_else(|| Error::Invalid(format!("round {round}: no party can take another seat")))?;
            let w = ch.pick_named(round, &tied, &parties);
            held[w] += 1;
            out.awards.push(parties[w].clone());
            let mut r = Round::new(round, Action::Elected, &parties[w]);
            r.scores = scores_of(&parties, quotients);
            r.figure = Some(best);
            out.rounds.push(r);
        }
        out.seats = seats_vec(&parties, &held);
        out.ties = ch.take_events();
        Ok(out)
    };
    let (mut out, alternatives) = resolve(policy, run, Apportionment::key)?;
    out.alternatives = alternatives;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotaBase {
    /// `V / s`
    Hare,
    /// `V / (s + 1)`
    Droop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuotaRounding {
    #[default]
    None,
    Floor,
    Ceil,
    /// Half up.
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotaSpec {
    pub base: QuotaBase,
    pub rounding: QuotaRounding,
}

impl QuotaSpec {
    pub fn hare() -> QuotaSpec {
        QuotaSpec {
            base: QuotaBase::Hare,
            rounding: QuotaRounding::None,
        }
    }

    pub fn droop() -> QuotaSpec {
        QuotaSpec {
            base: QuotaBase::Droop,
            rounding: QuotaRounding::None,
        }
    }
}

/// A quota rule or a fixed quota.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quota {
    Spec(QuotaSpec),
    Custom(Rational),
}

impl Default for Quota {
    fn default() -> Self {
        Quota::Spec(QuotaSpec::hare())
    }
}

impl Quota {
    /// The quota for total weight `total` and `s` seats; must be positive.
    pub fn value(&self, total: &Rational, s: usize) -> Result<Rational> {
        let q = match self {
            Quota::Custom(q) => q.clone(),
            Quota::Spec(spec) => {
                let raw = match spec.base {
                    QuotaBase::Hare => total / Rational::from(s),
                    QuotaBase::Droop => total / Rational::from(s + 1),
                };
                match spec.rounding {
                    QuotaRounding::None => raw,
                    QuotaRounding::Floor => Rational::from(raw.floor()),
                    QuotaRounding::Ceil => Rational::from(raw.ceil()),
                    QuotaRounding::Nearest => Rational::from((raw + Rational::new(1, 2)?).floor()),
                }
            }
        };
        if !q.is_positive() {
            return Err(Error::Invalid(format!("quota {q} is not positive")));
        }
        Ok(q)
    }
}

impl fmt::Display for Quota {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quota::Custom(q) => write!(f, "q={q}"),
            Quota::Spec(spec) => {
                f.write_str(match spec.base {
                    QuotaBase::Hare => "hare",
                    QuotaBase::Droop => "droop",
                })?;
                match spec.rounding {
                    QuotaRounding::None => Ok(()),
                    QuotaRounding::Floor => f.write_str(":floor"),
                    QuotaRounding::Ceil => f.write_str(":ceil"),
                    QuotaRounding::Nearest => f.write_str(":nearest"),
                }
            }
        }
    }
}

impl FromStr for Quota {
    type Err = Error;

    /// `hare`, `droop`, optionally followed by `:floor|ceil|nearest`, or `q=<rational>`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(q) = s.strip_prefix("q=") {
            return Ok(Quota::Custom(q.parse()?));
        }
        let mut parts = s.split(':');
        let base = match parts.next() {
            Some("hare") => QuotaBase::Hare,
            Some("droop") => QuotaBase::Droop,
            _ => return Err(Error::Invalid(format!("unknown quota '{s}'"))),
        };
        let rounding = match parts.next() {
            None => QuotaRounding::None,
            Some("floor") => QuotaRounding::Floor,
            Some("ceil") => QuotaRounding::Ceil,
            Some("nearest") => QuotaRounding::Nearest,
            Some(r) => return Err(Error::Invalid(format!("unknown quota rounding '{r}'"))),
        };
        if parts.next().is_some() {
            return Err(Error::Invalid(format!("unknown quota '{s}'")));
        }
        Ok(Quota::Spec(QuotaSpec { base, rounding }))
    }
}

fn to_u64(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::Invalid("seat count out of range".into()))
}

/// Largest remainder: `floor(v/Q)` seats each, then the rest by decreasing
/// remainder. If the floors already exceed `s`, seats are taken back from the
/// parties with the smallest remainders.
pub fn quota_method(
    votes: &BTreeMap<String, Rational>,
    s: usize,
    quota: &Quota,
    policy: &TiePolicy,
) -> Result<Apportionment> {
    check_votes(votes)?;
    let parties: Vec<String> = votes.keys().cloned().collect();
    let v: Vec<Rational> = votes.values().cloned().collect();
    let total: Rational = v.iter().sum();
    let q = quota.value(&total, s)?;
    let exact: Vec<Rational> = v.iter().map(|x| x / &q).collect();
    let floors: Vec<u64> = exact.iter().map(|x| to_u64(&x.floor())).collect::<Result<_>>()?;
    let remainders: Vec<Rational> = exact
        .iter()
        .zip(&floors)
        .map(|(x, &f)| x - Rational::from(f))
        .collect();
    let run = |ch: &mut Chooser| -> Result<Apportionment> {
        let mut held = floors.clone();
        let mut out = Apportionment {
            method: format!("quota[{quota}]"),
            seats: Vec::new(),
            awards: Vec::new(),
            rounds: Vec::new(),
            ties: Vec::new(),
            notes: vec![format!("quota {q}")],
            alternatives: Vec::new(),
        };
        for (p, &f) in floors.iter().enumerate() {
            for _ in 0..f {
                out.awards.push(parties[p].clone());
            }
        }
        let mut assigned: u64 = held.iter().sum();
        let mut round = 0;
        while assigned > s as u64 {
            round += 1;
            let items: Vec<(usize, Rational)> = (0..parties.len())
                .filter(|&p| held[p] > 0)
                .map(|p| (p, -remainders[p].clone()))
                .collect();
            let (_, tied) = argmax(&items).expect("some party holds a seat");
            let w = ch.pick_named(round, &tied, &parties);
            held[w] -= 1;
            assigned -= 1;
            let pos = out.awards.iter().rposition(|p| *p == parties[w]).expect("award exists");
            out.awards.remove(pos);
            let mut r = Round::new(round, Action::Eliminated, &parties[w]);
            r.figure = Some(remainders[w].clone());
            r.note = Some("quota floors exceed the seats; over-award with the smallest remainder withdrawn".into());
            out.rounds.push(r);
            out.notes.push(format!("over-award withdrawn from {}", parties[w]));
        }
        let mut used = vec![false; parties.len()];
        while assigned < s as u64 {
            round += 1;
            if used.iter().all(|&u| u) {
                used.iter_mut().for_each(|u| *u = false);
            }
            let items: Vec<(usize, Rational)> =
                (0..parties.len()).filter(|&p| !used[p]).map(|p| (p, remainders[p].clone())).collect();
            let (best, tied) = argmax(&items).expect("a party is available");
            let w = ch.pick_named(round, &tied, &parties);
            used[w] = true;
            held[w] += 1;
            assigned += 1;
            out.awards.push(parties[w].clone());
            let mut r = Round::new(round, Action::Elected, &parties[w]);
            r.scores = scores_of(&parties, items);
            r.figure = Some(best);
            out.rounds.push(r);
        }
        out.seats = seats_vec(&parties, &held);
        out.ties = ch.take_events();
        Ok(out)
    };
    let (mut out, alternatives) = resolve(policy, run, Apportionment::key)?;
    out.alternatives = alternatives;
    Ok(out)
}

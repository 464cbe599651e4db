//! Method descriptors: a parsed method name plus its parameters, and a single
//! entry point running any method on an election.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::{Rational, RoundingPolicy};
use crate::outcome::{Apportionment, Outcome};
use crate::phragmen::{phragmen_elect, phragmen_elect_by_power, phragmen_party_elect, ranking_plus_thiele};
use crate::reference::{
    divisor_method, quota_method, simple_elect, stv_elect, stv_quota_from_phragmen, DivisorSequence, Quota, QuotaSpec,
    SimpleMethod, TransferOrder, TransferPolicy, TransferValue,
};
use crate::thiele::{thiele_addition, thiele_elimination, thiele_opt_with_budget, thiele_ordered, SatisfactionFunction};
use crate::tie::TiePolicy;
use crate::variants::{enestrom_elect, limit_method_elect, opt_load_elect_with_budget, OptCombo};
use crate::DEFAULT_BUDGET;

/// Quota used by STV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StvQuota {
    Fixed(Quota),
    /// `W` of the last seat under Phragmén's ordered method, with its election order.
    Phragmen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Phragmen(RoundingPolicy),
    PhragmenPower,
    PhragmenParty,
    RankingThiele,
    ThieleOpt(SatisfactionFunction),
    ThieleAddition(SatisfactionFunction),
    ThieleElimination(SatisfactionFunction),
    ThieleOrdered(SatisfactionFunction),
    Enestrom(Quota, RoundingPolicy),
    OptLoad(OptCombo),
    Limit,
    Divisor(DivisorSequence),
    QuotaMethod(Quota),
    Stv(StvQuota, TransferValue, TransferOrder),
    Simple(SimpleMethod),
}

/// Values taken from flags when a method token leaves them open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defaults {
    pub f: SatisfactionFunction,
    pub combo: OptCombo,
    pub rounding: RoundingPolicy,
}

impl Default for Defaults {
    fn default() -> Defaults {
        Defaults {
            f: SatisfactionFunction::default(),
            combo: "a2,b2,c2".parse().expect("valid combination"),
            rounding: RoundingPolicy::Exact,
        }
    }
}

/// Method names accepted at the start of a token.
pub const METHOD_NAMES: &[&str] = &[
    "phragmen",
    "phragmen-law",
    "phragmen-power",
    "party",
    "ranking+thiele",
    "thiele-opt",
    "thiele-add",
    "thiele-elim",
    "thiele-ordered",
    "enestrom",
    "opt-load",
    "limit",
    "dhondt",
    "sainte-lague",
    "msl",
    "quota",
    "stv",
    "approval",
    "block",
    "limited",
    "sntv",
    "cumulative",
    "scoring",
    "bottomsup",
];

/// Splits a comma separated method list. A piece that does not start with a
/// method name continues the previous token, so `scoring:2,1,thiele-add`
/// gives two methods.
pub fn split_methods(list: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let head = piece.split(':').next().unwrap_or("");
        match out.last_mut() {
            Some(prev) if !METHOD_NAMES.contains(&head) => {
                prev.push(',');
                prev.push_str(piece);
            }
            _ => out.push(piece.to_string()),
        }
    }
    out
}

fn bad(token: &str, why: &str) -> Error {
    Error::Invalid(format!("method '{token}': {why}"))
}

fn satisfaction(arg: Option<&str>, d: &Defaults) -> Result<SatisfactionFunction> {
    arg.map_or_else(|| Ok(d.f.clone()), str::parse)
}

impl Method {
    /// Parses a method token such as `thiele-add:weak`, `stv:wig:order=elect`
    /// or `quota:droop:floor`.
    pub fn parse(token: &str, d: &Defaults) -> Result<Method> {
        let (head, arg) = match token.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (token, None),
        };
        let no_arg = |m: Method| match arg {
            None => Ok(m),
            Some(_) => Err(bad(token, "takes no parameter")),
        };
        let count = |what: &str| -> Result<usize> {
            arg.ok_or_else(|| bad(token, &format!("needs {what}")))?
                .parse()
                .map_err(|_| bad(token, &format!("{what} must be a positive integer")))
        };
        match head {
            "phragmen" => no_arg(Method::Phragmen(d.rounding)),
            "phragmen-law" => no_arg(Method::Phragmen(RoundingPolicy::TruncateTwoDecimals)),
            "phragmen-power" => no_arg(Method::PhragmenPower),
            "party" => no_arg(Method::PhragmenParty),
            "ranking+thiele" => no_arg(Method::RankingThiele),
            "thiele-opt" => Ok(Method::ThieleOpt(satisfaction(arg, d)?)),
            "thiele-add" => Ok(Method::ThieleAddition(satisfaction(arg, d)?)),
            "thiele-elim" => Ok(Method::ThieleElimination(satisfaction(arg, d)?)),
            "thiele-ordered" => Ok(Method::ThieleOrdered(satisfaction(arg, d)?)),
            "enestrom" => {
                let q = arg.map_or_else(|| Ok(Quota::Spec(QuotaSpec::hare())), str::parse)?;
                Ok(Method::Enestrom(q, d.rounding))
            }
            "opt-load" => Ok(Method::OptLoad(arg.map_or(Ok(d.combo), str::parse)?)),
            "limit" => no_arg(Method::Limit),
            "dhondt" => no_arg(Method::Divisor(DivisorSequence::DHondt)),
            "sainte-lague" => no_arg(Method::Divisor(DivisorSequence::SainteLague)),
            "msl" => {
                let x: Rational = arg.unwrap_or("7/5").parse()?;
                Ok(Method::Divisor(DivisorSequence::ModifiedSainteLague(x)))
            }
            "quota" => Ok(Method::QuotaMethod(arg.unwrap_or("hare").parse()?)),
            "stv" => {
                let mut quota = StvQuota::Fixed(Quota::Spec(QuotaSpec::droop()));
                let mut value = TransferValue::InclusiveGregory;
                let mut order = TransferOrder::LargestSurplusFirst;
                for part in arg.unwrap_or("").split(':').filter(|p| !p.is_empty()) {
                    match part.split_once('=') {
                        None => value = part.parse()?,
                        Some(("order", "surplus")) => order = TransferOrder::LargestSurplusFirst,
                        Some(("order", "elect")) => order = TransferOrder::ElectionOrder(None),
                        Some(("order", list)) => {
                            order = TransferOrder::ElectionOrder(Some(list.split(',').map(str::to_string).collect()))
                        }
                        Some(("q", "phragmen")) => quota = StvQuota::Phragmen,
                        Some(("q", q)) => {
                            quota = StvQuota::Fixed(match q {
                                "hare" | "droop" => q.parse()?,
                                _ => Quota::Custom(q.parse()?),
                            })
                        }
                        _ => return Err(bad(token, "expected ig|wig, order=..., q=...")),
                    }
                }
                Ok(Method::Stv(quota, value, order))
            }
            "approval" => no_arg(Method::Simple(SimpleMethod::Approval)),
            "block" => Ok(Method::Simple(SimpleMethod::Block(match arg {
                // Zero stands for the number of seats.
                None => 0,
                Some(_) => count("a name limit")?,
            }))),
            "limited" => Ok(Method::Simple(SimpleMethod::Limited(count("a name limit")?))),
            "sntv" => no_arg(Method::Simple(SimpleMethod::Sntv)),
            "cumulative" => no_arg(Method::Simple(SimpleMethod::CumulativeEven)),
            "scoring" => {
                let p = arg
                    .ok_or_else(|| bad(token, "needs points p1,p2,..."))?
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<Rational>>>()?;
                Ok(Method::Simple(SimpleMethod::Scoring(p)))
            }
            "bottomsup" => no_arg(Method::Simple(SimpleMethod::BottomsUp)),
            _ => Err(Error::Invalid(format!("unknown method '{token}'"))),
        }
    }

    /// True for methods whose result is an election order.
    pub fn is_sequential(&self) -> bool {
        !matches!(
            self,
            Method::ThieleOpt(_)
                | Method::ThieleElimination(_)
                | Method::Divisor(_)
                | Method::QuotaMethod(_)
                | Method::Simple(_)
                | Method::PhragmenParty
        ) && !matches!(self, Method::OptLoad(c) if c.mode == crate::variants::OptMode::GlobalOpt)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Phragmen(RoundingPolicy::Exact) => f.write_str("phragmen"),
            Method::Phragmen(RoundingPolicy::TruncateTwoDecimals) => f.write_str("phragmen-law"),
            Method::PhragmenPower => f.write_str("phragmen-power"),
            Method::PhragmenParty => f.write_str("party"),
            Method::RankingThiele => f.write_str("ranking+thiele"),
            Method::ThieleOpt(sf) => write!(f, "thiele-opt:{sf}"),
            Method::ThieleAddition(sf) => write!(f, "thiele-add:{sf}"),
            Method::ThieleElimination(sf) => write!(f, "thiele-elim:{sf}"),
            Method::ThieleOrdered(sf) => write!(f, "thiele-ordered:{sf}"),
            Method::Enestrom(q, RoundingPolicy::Exact) => write!(f, "enestrom:{q}"),
            Method::Enestrom(q, RoundingPolicy::TruncateTwoDecimals) => write!(f, "enestrom:{q} (law2dec)"),
            Method::OptLoad(c) => write!(f, "opt-load:{c}"),
            Method::Limit => f.write_str("limit"),
            Method::Divisor(DivisorSequence::DHondt) => f.write_str("dhondt"),
            Method::Divisor(DivisorSequence::SainteLague) => f.write_str("sainte-lague"),
            Method::Divisor(DivisorSequence::ModifiedSainteLague(x)) => write!(f, "msl:{x}"),
            Method::Divisor(d) => write!(f, "divisor:{d:?}"),
            Method::QuotaMethod(q) => write!(f, "quota:{q}"),
            Method::Stv(q, v, o) => {
                let t = TransferPolicy {
                    value: *v,
                    order: o.clone(),
                };
                match q {
                    StvQuota::Fixed(Quota::Custom(q)) => write!(f, "stv:{t}:q={q}"),
                    StvQuota::Fixed(q) => write!(f, "stv:{t}:q={q}"),
                    StvQuota::Phragmen => write!(f, "stv:{t}:q=phragmen"),
                }
            }
            Method::Simple(m) => f.write_str(&m.name()),
        }
    }
}

/// What a method returns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Report {
    Committee(Outcome),
    Seats(Apportionment),
}

impl Report {
    pub fn method(&self) -> &str {
        match self {
            Report::Committee(o) => &o.method,
            Report::Seats(a) => &a.method,
        }
    }

    /// Elected candidates in election order (or sorted for set methods), or
    /// `party:seats` entries for apportionments.
    pub fn winners(&self) -> Vec<String> {
        match self {
            Report::Committee(o) => o.elected.clone(),
            Report::Seats(a) => a.key(),
        }
    }

    /// Every outcome reachable under tie enumeration, as sorted lists.
    pub fn outcome_sets(&self) -> Vec<Vec<String>> {
        match self {
            Report::Committee(o) => o.outcome_sets(),
            Report::Seats(a) if a.alternatives.is_empty() => vec![a.key()],
            Report::Seats(a) => a.alternatives.clone(),
        }
    }

    pub fn outcome(&self) -> Option<&Outcome> {
        match self {
            Report::Committee(o) => Some(o),
            Report::Seats(_) => None,
        }
    }
}

/// Runs a method with the tie policy and the exhaustive search budget.
pub fn run_method(method: &Method, e: &Election, s: usize, policy: &TiePolicy, budget: Option<u128>) -> Result<Report> {
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let committee = |o: Result<Outcome>| o.map(Report::Committee);
    match method {
        Method::Phragmen(r) => committee(phragmen_elect(&e.with_seats(s)?, policy, *r)),
        Method::PhragmenPower => committee(phragmen_elect_by_power(&e.with_seats(s)?, policy)),
        Method::PhragmenParty => phragmen_party_elect(e, s, policy).map(Report::Seats),
        Method::RankingThiele => committee(ranking_plus_thiele(e, s, policy)),
        Method::ThieleOpt(f) => committee(thiele_opt_with_budget(e, s, f, policy, budget)),
        Method::ThieleAddition(f) => committee(thiele_addition(e, s, f, policy)),
        Method::ThieleElimination(f) => committee(thiele_elimination(e, s, f, policy)),
        Method::ThieleOrdered(f) => committee(thiele_ordered(e, s, f, policy)),
        Method::Enestrom(q, r) => committee(enestrom_elect(e, s, q, *r, policy)),
        Method::OptLoad(c) => committee(opt_load_elect_with_budget(e, s, *c, policy, budget)),
        Method::Limit => committee(limit_method_elect(e, s, policy)),
        Method::Divisor(d) => {
            let (votes, lists) = party_lists(e)?;
            let a = divisor_method(&votes, s, d, policy)?;
            Ok(lists_to_report(a, &lists))
        }
        Method::QuotaMethod(q) => {
            let (votes, lists) = party_lists(e)?;
            let a = quota_method(&votes, s, q, policy)?;
            Ok(lists_to_report(a, &lists))
        }
        Method::Stv(q, v, o) => {
            let (quota, order) = match q {
                StvQuota::Fixed(q) => (q.clone(), o.clone()),
                StvQuota::Phragmen => {
                    let (w, order) = stv_quota_from_phragmen(e, s)?;
                    let order = match o {
                        TransferOrder::LargestSurplusFirst => TransferOrder::LargestSurplusFirst,
                        TransferOrder::ElectionOrder(None) => TransferOrder::ElectionOrder(Some(order)),
                        other => other.clone(),
                    };
                    (Quota::Custom(w), order)
                }
            };
            let t = TransferPolicy { value: *v, order };
            committee(stv_elect(e, s, &quota, &t, policy))
        }
        Method::Simple(SimpleMethod::Block(0)) => committee(simple_elect(e, s, &SimpleMethod::Block(s), policy)),
        Method::Simple(m) => committee(simple_elect(e, s, m, policy)),
    }
}

/// Party lists of an election whose ballots are pairwise identical or
/// disjoint. Each distinct ballot is a party, keyed by its names.
fn party_lists(e: &Election) -> Result<(BTreeMap<String, Rational>, BTreeMap<String, Vec<String>>)> {
    let mut votes: BTreeMap<String, Rational> = BTreeMap::new();
    let mut lists: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut owner: BTreeMap<usize, String> = BTreeMap::new();
    for l in e.lines() {
        let names: Vec<String> = l.ballot.names().map(|c| e.name(c).to_string()).collect();
        let key = names.join(" ");
        for c in l.ballot.names() {
            if let Some(prev) = owner.insert(c, key.clone()) {
                if prev != key {
                    return Err(Error::Invalid(format!(
                        "apportionment methods need party lists; {} appears on '{prev}' and '{key}'",
                        e.name(c)
                    )));
                }
            }
        }
        *votes.entry(key.clone()).or_insert_with(Rational::zero) += l.value();
        lists.insert(key, names);
    }
    Ok((votes, lists))
}

/// Seats per list; when every list is long enough, also the elected candidates.
fn lists_to_report(a: Apportionment, lists: &BTreeMap<String, Vec<String>>) -> Report {
    let mut elected = Vec::new();
    for p in &a.seats {
        let list = &lists[&p.party];
        if p.seats as usize > list.len() {
            return Report::Seats(a);
        }
        elected.extend(list[..p.seats as usize].iter().cloned());
    }
    elected.sort();
    let mut o = Outcome::new(a.method.clone(), false);
    o.figure_name = "quotient".into();
    o.elected = elected;
    o.rounds = a.rounds.clone();
    o.ties = a.ties.clone();
    o.notes = a.notes.clone();
    o.notes.push(format!("seats: {}", a.key().join(" ")));
    if !a.alternatives.is_empty() {
        let mut alts: Vec<Vec<String>> = a
            .alternatives
            .iter()
            .map(|key| {
                let mut set: Vec<String> = key
                    .iter()
                    .flat_map(|entry| {
                        let (party, k) = entry.rsplit_once(':').expect("party:seats");
                        let k: usize = k.parse().expect("seat count");
                        lists[party][..k.min(lists[party].len())].to_vec()
                    })
                    .collect();
                set.sort();
                set
            })
            .collect();
        alts.sort();
        alts.dedup();
        o.alternatives = alts;
    }
    Report::Committee(o)
}

/// True when every ballot of `e` has at most `m` names.
pub fn check_max_names(e: &Election, m: usize) -> Result<()> {
    let bad: Vec<String> = e
        .lines()
        .iter()
        .filter(|l| l.ballot.len() > m)
        .map(|l| format!("{} has {} names, limit {m}", e.line_label(l), l.ballot.len()))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(bad))
    }
}

/// Ballot kinds a method accepts.
pub fn accepts(method: &Method, kind: BallotKind) -> bool {
    match method {
        Method::Phragmen(RoundingPolicy::Exact) | Method::Divisor(_) | Method::QuotaMethod(_) => true,
        Method::Phragmen(RoundingPolicy::TruncateTwoDecimals)
        | Method::RankingThiele
        | Method::ThieleOrdered(_)
        | Method::Stv(..) => kind == BallotKind::Ordered,
        Method::PhragmenPower => kind != BallotKind::Weak,
        Method::Simple(SimpleMethod::Sntv | SimpleMethod::Scoring(_) | SimpleMethod::BottomsUp) => {
            kind == BallotKind::Ordered
        }
        _ => kind == BallotKind::Unordered,
    }
}

//! Property scans: house monotonicity, candidate monotonicity, consistency,
//! invariance under full ballots and the reduction to divisor methods on
//! party lists.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audit::random::{random_election, random_party_lists};
use crate::audit::{check_representation, AuditReport, RepresentationCriterion, Witness};
use crate::election::{BallotKind, Election, RawGroups};
use crate::error::{Error, Result};
use crate::method::{run_method, Method, Report};
use crate::numeric::Rational;
use crate::reference::{divisor_method, DivisorSequence};
use crate::tie::TiePolicy;
use crate::variants::Criterion;

/// Branch limit used where a property compares every tie outcome.
const ENUMERATION_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    /// Committees for `s` and `s + 1` nest, for `s + 1 <= s_max`.
    HouseMonotonicity { s_max: usize },
    /// Changes favouring an elected candidate never evict it. With `trials`
    /// at least the number of possible changes, all are checked.
    CandidateMonotonicity { trials: usize, seed: u64 },
    /// A committee possible for `e` and for `other` is possible for the union.
    Consistency { other: Election },
    /// Adding `n` ballots naming everyone leaves the outcomes unchanged.
    FullBallotInvariance { n: u64 },
    /// On random disjoint party lists the seats per party equal the
    /// matching divisor method.
    PartyListReduction { trials: usize, seed: u64 },
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::HouseMonotonicity { s_max } => write!(f, "house monotonicity up to {s_max} seats"),
            Property::CandidateMonotonicity { trials, seed } => {
                write!(f, "candidate monotonicity ({trials} trials, seed {seed})")
            }
            Property::Consistency { .. } => f.write_str("consistency"),
            Property::FullBallotInvariance { n } => write!(f, "invariance under {n} full ballots"),
            Property::PartyListReduction { trials, seed } => {
                write!(f, "party list reduction ({trials} trials, seed {seed})")
            }
        }
    }
}

/// A change to an election that favours `target` and nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perturbation {
    /// `count` new ballots naming only the target.
    AddOnly { target: String, count: u64 },
    /// `count` ballots of line `line` get the target inserted at `position`
    /// (ignored for unordered ballots).
    Insert {
        target: String,
        line: usize,
        position: usize,
        count: u64,
    },
    /// `count` ballots of line `line` move the target up to `position`.
    Promote {
        target: String,
        line: usize,
        position: usize,
        count: u64,
    },
    /// Undoes a promotion: `count` ballots of line `line` move the target
    /// down to `position`.
    Demote {
        target: String,
        line: usize,
        position: usize,
        count: u64,
    },
    /// Undoes an insertion: `count` ballots of line `line` drop the target
    /// (ballots naming only the target disappear).
    Remove { target: String, line: usize, count: u64 },
}

impl Perturbation {
    pub fn target(&self) -> &str {
        match self {
            Perturbation::AddOnly { target, .. }
            | Perturbation::Insert { target, .. }
            | Perturbation::Promote { target, .. }
            | Perturbation::Demote { target, .. }
            | Perturbation::Remove { target, .. } => target,
        }
    }

    pub fn describe(&self, e: &Election) -> String {
        let label = |line: usize| e.line_label(&e.lines()[line]);
        match self {
            Perturbation::AddOnly { target, count } => format!("{count} new ballots naming only {target}"),
            Perturbation::Insert {
                target,
                line,
                position,
                count,
            } => match e.kind() {
                BallotKind::Unordered => format!("{count} ballots {} add {target}", label(*line)),
                _ => format!("{count} ballots {} insert {target} at position {}", label(*line), position + 1),
            },
            Perturbation::Promote {
                target,
                line,
                position,
                count,
            } => format!("{count} ballots {} move {target} up to position {}", label(*line), position + 1),
            Perturbation::Demote {
                target,
                line,
                position,
                count,
            } => format!("{count} ballots {} move {target} down to position {}", label(*line), position + 1),
            Perturbation::Remove { target, line, count } => {
                format!("{count} ballots {} drop {target}", label(*line))
            }
        }
    }

    /// The perturbed election.
    pub fn apply(&self, e: &Election) -> Result<Election> {
        let mut raw = e.raw_lines();
        let moved = |raw: &mut Vec<(RawGroups, Rational, u64)>, line: usize, count: u64, groups: RawGroups| {
            let (_, w, c) = &mut raw[line];
            let w = w.clone();
            *c -= count;
            raw.push((groups, w, count));
        };
        match self {
            Perturbation::AddOnly { target, count } => {
                raw.push((vec![vec![target.clone()]], Rational::one(), *count));
            }
            Perturbation::Insert {
                target,
                line,
                position,
                count,
            } => {
                let mut groups = raw[*line].0.clone();
                match e.kind() {
                    BallotKind::Unordered => {
                        groups[0].push(target.clone());
                        groups[0].sort();
                    }
                    _ => groups.insert(*position, vec![target.clone()]),
                }
                moved(&mut raw, *line, *count, groups);
            }
            Perturbation::Promote {
                target,
                line,
                position,
                count,
            }
            | Perturbation::Demote {
                target,
                line,
                position,
                count,
            } => {
                let mut groups = raw[*line].0.clone();
                let at = groups
                    .iter()
                    .position(|g| g.contains(target))
                    .ok_or_else(|| Error::Invalid(format!("{target} is not on that ballot")))?;
                let g = groups.remove(at);
                groups.insert(*position, g);
                moved(&mut raw, *line, *count, groups);
            }
            Perturbation::Remove { target, line, count } => {
                let mut groups = raw[*line].0.clone();
                for g in &mut groups {
                    g.retain(|c| c != target);
                }
                groups.retain(|g| !g.is_empty());
                if groups.is_empty() {
                    raw[*line].2 -= count;
                } else {
                    moved(&mut raw, *line, *count, groups);
                }
            }
        }
        Election::new(e.kind(), e.seats(), e.candidates(), raw)
    }
}

/// Every change favouring `target` on `e`: up to `max count` new ballots for
/// the target alone, and for each ballot line and number of its voters,
/// every insertion (ordered: at every position) or promotion.
pub fn perturbations(e: &Election, target: &str) -> Result<Vec<Perturbation>> {
    let c = e
        .index_of(target)
        .ok_or_else(|| Error::Invalid(format!("'{target}' is not a candidate")))?;
    if e.kind() == BallotKind::Weak {
        return Err(Error::Invalid("monotonicity scans take unordered or ordered ballots".into()));
    }
    let t = target.to_string();
    let max_count = e.lines().iter().map(|l| l.count).max().unwrap_or(1);
    let mut out: Vec<Perturbation> = (1..=max_count)
        .map(|count| Perturbation::AddOnly {
            target: t.clone(),
            count,
        })
        .collect();
    for (i, l) in e.lines().iter().enumerate() {
        let len = l.ballot.groups.len();
        for count in 1..=l.count {
            if !l.ballot.contains(c) {
                let positions = if e.kind() == BallotKind::Unordered { 1 } else { len + 1 };
                for position in 0..positions {
                    out.push(Perturbation::Insert {
                        target: t.clone(),
                        line: i,
                        position,
                        count,
                    });
                }
            } else if e.kind() == BallotKind::Ordered {
                let at = l.ballot.groups.iter().position(|g| g.contains(&c)).expect("on ballot");
                for position in 0..at {
                    out.push(Perturbation::Promote {
                        target: t.clone(),
                        line: i,
                        position,
                        count,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Every change against `target` on `e`: removal from any number of
/// voters of a line, and (ordered) every demotion. Each is the inverse of
/// one of [`perturbations`], so if the changed election elects `target` and
/// `e` does not, undoing the change is a violation.
pub fn reverse_perturbations(e: &Election, target: &str) -> Result<Vec<Perturbation>> {
    let c = e
        .index_of(target)
        .ok_or_else(|| Error::Invalid(format!("'{target}' is not a candidate")))?;
    if e.kind() == BallotKind::Weak {
        return Err(Error::Invalid("monotonicity scans take unordered or ordered ballots".into()));
    }
    let t = target.to_string();
    let mut out = Vec::new();
    for (i, l) in e.lines().iter().enumerate() {
        let Some(at) = l.ballot.groups.iter().position(|g| g.contains(&c)) else { continue };
        let len = l.ballot.groups.len();
        for count in 1..=l.count {
            out.push(Perturbation::Remove {
                target: t.clone(),
                line: i,
                count,
            });
            if e.kind() == BallotKind::Ordered {
                for position in at + 1..len {
                    out.push(Perturbation::Demote {
                        target: t.clone(),
                        line: i,
                        position,
                        count,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn run(method: &Method, e: &Election, s: usize, policy: &TiePolicy) -> Result<Report> {
    run_method(method, e, s, policy, None)
}

/// Outcome sets: committees as sorted ids, apportionments as `party:seats`.
fn outcomes(r: &Report) -> Vec<Vec<String>> {
    r.outcome_sets()
}

fn render(sets: &[Vec<String>]) -> String {
    sets.iter()
        .map(|s| format!("{{{}}}", s.join(",")))
        .collect::<Vec<_>>()
        .join(" or ")
}

fn enumerate(policy: &TiePolicy) -> TiePolicy {
    match policy {
        TiePolicy::EnumerateAll(_) => policy.clone(),
        _ => TiePolicy::EnumerateAll(ENUMERATION_LIMIT),
    }
}

/// Runs a property check of `method` on `e`.
pub fn scan_property(method: &Method, e: &Election, p: &Property, policy: &TiePolicy) -> Result<AuditReport> {
    let mut report = AuditReport::new(format!("{method}: {p}"));
    match p {
        Property::HouseMonotonicity { s_max } => house(method, e, *s_max, policy, &mut report)?,
        Property::CandidateMonotonicity { trials, seed } => {
            candidate_monotonicity(method, e, *trials, *seed, policy, &mut report)?
        }
        Property::Consistency { other } => consistency(method, e, other, policy, &mut report)?,
        Property::FullBallotInvariance { n } => full_ballots(method, e, *n, policy, &mut report)?,
        Property::PartyListReduction { trials, seed } => {
            party_lists(method, e.kind(), *trials, *seed, policy, &mut report)?
        }
    }
    Ok(report)
}

fn is_subset(a: &[String], b: &[String]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn seat_counts(key: &[String]) -> BTreeMap<String, u64> {
    key.iter()
        .filter_map(|k| k.rsplit_once(':'))
        .map(|(p, n)| (p.to_string(), n.parse().unwrap_or(0)))
        .collect()
}

/// Nested when the outcomes for `s` and `s + 1` seats nest under the given
/// policy, or else when some pair of tie outcomes nests, so that a tie rule
/// exists under which the larger house keeps every earlier winner.
fn house(method: &Method, e: &Election, s_max: usize, policy: &TiePolicy, report: &mut AuditReport) -> Result<()> {
    let top = s_max.min(e.candidates().len());
    let contained = |a: &[String], b: &[String], seats: bool| {
        if seats {
            let (ca, cb) = (seat_counts(a), seat_counts(b));
            ca.iter().all(|(p, n)| cb.get(p).copied().unwrap_or(0) >= *n)
        } else {
            is_subset(a, b)
        }
    };
    let all_outcomes = |s: usize| -> Result<Option<Vec<Vec<String>>>> {
        match run(method, e, s, &enumerate(policy)) {
            Ok(r) => Ok(Some(outcomes(&r))),
            Err(Error::TieOverflow { .. }) => Ok(None),
            Err(err) => Err(err),
        }
    };
    let mut prev: Option<(usize, Vec<String>)> = None;
    for s in 1..=top {
        let r = run(method, e, s, policy)?;
        let seats = matches!(r, Report::Seats(_));
        let now = r.winners();
        if let Some((ps, before)) = &prev {
            report.examined += 1;
            if !contained(before, &now, seats) {
                let (a, b) = (all_outcomes(*ps)?, all_outcomes(s)?);
                let (a, b, note) = match (a, b) {
                    (Some(a), Some(b)) => (a, b, None),
                    _ => (
                        vec![sorted(before.clone())],
                        vec![sorted(now.clone())],
                        Some("too many tie outcomes to enumerate; compared the given tie policy only"),
                    ),
                };
                if !a.iter().any(|x| b.iter().any(|y| contained(x, y, seats))) {
                    let mut w = Witness::new(format!("{ps} seats elect {}, {s} seats elect {}", render(&a), render(&b)));
                    w.elections.push(e.to_text());
                    report.fail(w);
                    if let Some(n) = note {
                        report.notes.push(n.to_string());
                    }
                }
            }
        }
        prev = Some((s, now));
    }
    Ok(())
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn check_change(
    method: &Method,
    e: &Election,
    before: &Report,
    p: &Perturbation,
    policy: &TiePolicy,
    report: &mut AuditReport,
) -> Result<()> {
    let after_e = p.apply(e)?;
    let after = run(method, &after_e, e.seats(), policy)?;
    report.examined += 1;
    if !after.winners().iter().any(|c| c == p.target()) {
        let mut w = Witness::new(format!(
            "{} was elected in {{{}}}; after {} the result is {{{}}}",
            p.target(),
            sorted(before.winners()).join(","),
            p.describe(e),
            sorted(after.winners()).join(",")
        ));
        w.elections.push(e.to_text());
        w.elections.push(after_e.to_text());
        report.fail(w);
    }
    Ok(())
}

/// `p` works against its target, which `e` does not elect.
fn check_reverse(
    method: &Method,
    e: &Election,
    after: &Report,
    p: &Perturbation,
    policy: &TiePolicy,
    report: &mut AuditReport,
) -> Result<()> {
    let before_e = p.apply(e)?;
    let before = run(method, &before_e, e.seats(), policy)?;
    report.examined += 1;
    if before.winners().iter().any(|c| c == p.target()) {
        let mut w = Witness::new(format!(
            "{} is elected in {{{}}} when {}; without that change the result is {{{}}}",
            p.target(),
            sorted(before.winners()).join(","),
            p.describe(e),
            sorted(after.winners()).join(",")
        ));
        w.elections.push(before_e.to_text());
        w.elections.push(e.to_text());
        report.fail(w);
    }
    Ok(())
}

fn committee_of(r: &Report) -> Result<Vec<String>> {
    match r {
        Report::Committee(o) => Ok(o.elected.clone()),
        Report::Seats(_) => Err(Error::Unsupported("candidate monotonicity needs a committee".into())),
    }
}

fn candidate_monotonicity(
    method: &Method,
    e: &Election,
    trials: usize,
    seed: u64,
    policy: &TiePolicy,
    report: &mut AuditReport,
) -> Result<()> {
    let before = run(method, e, e.seats(), policy)?;
    let committee = committee_of(&before)?;
    // Forward changes start from `e`; reverse ones find elections from
    // which a favourable change leads to `e`.
    let mut all = Vec::new();
    for a in e.candidates() {
        if committee.contains(a) {
            all.extend(perturbations(e, a)?.into_iter().map(|p| (true, p)));
        } else {
            all.extend(reverse_perturbations(e, a)?.into_iter().map(|p| (false, p)));
        }
    }
    if all.len() > trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        all = all.choose_multiple(&mut rng, trials).cloned().collect();
        report
            .notes
            .push(format!("{trials} changes sampled from the possible ones"));
    }
    for (forward, p) in &all {
        if *forward {
            check_change(method, e, &before, p, policy, report)?;
        } else {
            check_reverse(method, e, &before, p, policy, report)?;
        }
    }
    Ok(())
}

/// Candidate monotonicity on random elections: each trial draws an
/// election (up to 6 names, 6 ballot types, 4 seats), an elected target
/// and one change favouring it.
pub fn monotonicity_random(
    method: &Method,
    kind: BallotKind,
    trials: usize,
    seed: u64,
    policy: &TiePolicy,
) -> Result<AuditReport> {
    let mut report = AuditReport::new(format!("{method}: candidate monotonicity on {trials} random {kind} elections"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let e = random_election(&mut rng, kind, 6, 6, 30, 4);
        let before = run(method, &e, e.seats(), policy)?;
        let elected = committee_of(&before)?;
        let a = elected.choose(&mut rng).expect("nonempty committee");
        let options = perturbations(&e, a)?;
        let p = options.choose(&mut rng).expect("adding a ballot is always possible");
        check_change(method, &e, &before, p, policy, &mut report)?;
    }
    Ok(report)
}

/// Committees of `method` on random elections with exactly `seats` seats,
/// checked against a representation criterion. Serves as a search for
/// counterexamples, e.g. JR for Thiele addition with six or more seats.
pub fn representation_random(
    method: &Method,
    criterion: RepresentationCriterion,
    kind: BallotKind,
    seats: usize,
    trials: usize,
    seed: u64,
    policy: &TiePolicy,
) -> Result<AuditReport> {
    if seats == 0 {
        return Err(Error::Invalid("seat count must be positive".into()));
    }
    let mut report = AuditReport::new(format!(
        "{method}: {criterion} on {trials} random {kind} elections with {seats} seats"
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while report.examined < trials {
        let e = random_election(&mut rng, kind, (seats + 4).max(8), 10, 30, 1);
        if e.candidates().len() <= seats {
            continue;
        }
        let e = e.with_seats(seats)?;
        let mut committee = committee_of(&run(method, &e, seats, policy)?)?;
        committee.sort();
        let r = check_representation(&e, &committee, criterion)?;
        report.examined += 1;
        if let Some(w) = r.witnesses.into_iter().next() {
            let mut w = Witness {
                description: format!("committee {{{}}}: {}", committee.join(","), w.description),
                ..w
            };
            w.elections = vec![e.to_text()];
            report.fail(w);
        }
    }
    Ok(report)
}

fn consistency(method: &Method, e: &Election, other: &Election, policy: &TiePolicy, report: &mut AuditReport) -> Result<()> {
    let policy = enumerate(policy);
    let union = e.union(other)?;
    let s = e.seats();
    let a = outcomes(&run(method, e, s, &policy)?);
    let b = outcomes(&run(method, other, s, &policy)?);
    let u = outcomes(&run(method, &union, s, &policy)?);
    for set in a.iter().filter(|x| b.contains(x)) {
        report.examined += 1;
        if !u.contains(set) {
            let mut w = Witness::new(format!(
                "both parts can elect {{{}}}; the union elects {}",
                set.join(","),
                render(&u)
            ));
            w.elections = vec![e.to_text(), other.to_text(), union.to_text()];
            report.fail(w);
        }
    }
    if report.examined == 0 {
        report
            .notes
            .push(format!("no common outcome: {} against {}", render(&a), render(&b)));
    }
    Ok(())
}

/// `e` with `n` ballots naming every candidate, aggregated as one line.
pub(crate) fn with_full_ballots(e: &Election, n: u64) -> Result<Election> {
    let ids = e.candidates().to_vec();
    let groups: RawGroups = match e.kind() {
        BallotKind::Unordered => vec![ids],
        BallotKind::Ordered => ids.into_iter().map(|c| vec![c]).collect(),
        BallotKind::Weak => vec![ids],
    };
    e.with_lines(vec![(groups, Rational::one(), n)])
}

fn full_ballots(method: &Method, e: &Election, n: u64, policy: &TiePolicy, report: &mut AuditReport) -> Result<()> {
    let f = with_full_ballots(e, n)?;
    let before = outcomes(&run(method, e, e.seats(), policy)?);
    let after = outcomes(&run(method, &f, e.seats(), policy)?);
    report.examined += 1;
    if before != after {
        let mut w = Witness::new(format!("{} becomes {}", render(&before), render(&after)));
        w.elections = vec![e.to_text(), f.to_text()];
        report.fail(w);
    }
    Ok(())
}

/// Divisor method a method reduces to on party lists.
fn reference_divisors(method: &Method) -> Result<DivisorSequence> {
    Ok(match method {
        Method::Phragmen(_) | Method::PhragmenPower => DivisorSequence::DHondt,
        Method::ThieleAddition(f) | Method::ThieleOrdered(f) | Method::ThieleOpt(f) => {
            DivisorSequence::Reciprocal(f.clone())
        }
        Method::OptLoad(c) if c.criterion == Criterion::LeastSquares => DivisorSequence::SainteLague,
        Method::OptLoad(_) => DivisorSequence::DHondt,
        Method::Divisor(d) => d.clone(),
        _ => return Err(Error::Unsupported(format!("no divisor method corresponds to {method}"))),
    })
}

fn party_lists(
    method: &Method,
    kind: BallotKind,
    trials: usize,
    seed: u64,
    policy: &TiePolicy,
    report: &mut AuditReport,
) -> Result<()> {
    let d = reference_divisors(method)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut skipped = 0usize;
    while report.examined < trials {
        let s = rng.gen_range(1..=8);
        let (e, lists) = random_party_lists(&mut rng, kind, 5, 8, 1000, s);
        let votes: BTreeMap<String, Rational> = lists
            .iter()
            .zip(e.lines())
            .map(|(l, line)| (l[0][..1].to_string(), line.value()))
            .collect();
        // Instances where the divisor method itself ties are skipped.
        let reference = divisor_method(&votes, s, &d, &TiePolicy::EnumerateAll(64))?;
        if reference.alternatives.len() > 1 {
            skipped += 1;
            continue;
        }
        report.examined += 1;
        let r = run(method, &e, s, policy)?;
        let mut got: BTreeMap<String, u64> = BTreeMap::new();
        for c in r.winners() {
            *got.entry(c[..1].to_string()).or_insert(0) += 1;
        }
        let want: BTreeMap<String, u64> = reference
            .seats
            .iter()
            .filter(|p| p.seats > 0)
            .map(|p| (p.party.clone(), p.seats))
            .collect();
        if got != want {
            let mut w = Witness::new(format!("{s} seats: method gives {got:?}, divisor method {want:?}"));
            w.elections.push(e.to_text());
            report.fail(w);
        }
    }
    if skipped > 0 {
        report
            .notes
            .push(format!("{skipped} instances with ties in the divisor method skipped"));
    }
    Ok(())
}

//! JR, PJR, EJR and Phragmén's proportionality guarantee for a committee.
//!
//! The group conditions only depend on the ballot types present in a group:
//! adding another voter of a type already present leaves the intersection and
//! union of the group's ballots unchanged and only raises its size. So a
//! group violating a criterion can be enlarged to all voters of its types,
//! and enumerating unions of whole types is both sound and complete.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::audit::{AuditReport, Witness};
use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// At most this many distinct ballot types are enumerated.
pub const MAX_TYPES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationCriterion {
    JR,
    PJR,
    EJR,
    /// A bloc of more than `l V / (s + 1)` identical ballots gets `l` seats.
    PhPC(usize),
}

impl fmt::Display for RepresentationCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepresentationCriterion::JR => f.write_str("jr"),
            RepresentationCriterion::PJR => f.write_str("pjr"),
            RepresentationCriterion::EJR => f.write_str("ejr"),
            RepresentationCriterion::PhPC(l) => write!(f, "phpc:{l}"),
        }
    }
}

impl FromStr for RepresentationCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jr" => Ok(RepresentationCriterion::JR),
            "pjr" => Ok(RepresentationCriterion::PJR),
            "ejr" => Ok(RepresentationCriterion::EJR),
            _ => match s.strip_prefix("phpc:").map(str::parse) {
                Some(Ok(l)) if l > 0 => Ok(RepresentationCriterion::PhPC(l)),
                _ => Err(Error::Invalid(format!("unknown criterion '{s}' (jr|pjr|ejr|phpc:<l>)"))),
            },
        }
    }
}

/// Checks a committee against a criterion. The committee size is the number
/// of seats.
pub fn check_representation(e: &Election, committee: &[String], c: RepresentationCriterion) -> Result<AuditReport> {
    let mut elected = vec![false; e.candidates().len()];
    for id in committee {
        let i = e
            .index_of(id)
            .ok_or_else(|| Error::Invalid(format!("'{id}' is not a candidate")))?;
        elected[i] = true;
    }
    let s = committee.len();
    if s == 0 {
        return Err(Error::Invalid("empty committee".into()));
    }
    let mut report = AuditReport::new(format!("{c} for {{{}}}", committee.join(",")));
    match c {
        RepresentationCriterion::PhPC(l) => phpc(e, &elected, s, l, &mut report)?,
        _ => {
            if e.kind() != BallotKind::Unordered {
                return Err(Error::Invalid(format!("{c} is defined for unordered ballots")));
            }
            groups(e, &elected, s, c, &mut report)?;
        }
    }
    Ok(report)
}

fn phpc(e: &Election, elected: &[bool], s: usize, l: usize, report: &mut AuditReport) -> Result<()> {
    if l > s {
        return Err(Error::Invalid(format!("phpc:{l} with only {s} seats")));
    }
    let total = e.total_weight();
    let bound = &total * Rational::from(l) / Rational::from(s + 1);
    // Blocs keyed by the names they must elect.
    let mut blocs: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for line in e.lines() {
        let key: Vec<usize> = match e.kind() {
            BallotKind::Unordered => line.ballot.groups[0].clone(),
            BallotKind::Ordered => {
                let names: Vec<usize> = line.ballot.names().collect();
                if names.len() < l {
                    continue;
                }
                let mut first = names[..l].to_vec();
                first.sort_unstable();
                first
            }
            BallotKind::Weak => return Err(Error::Invalid("phpc is not defined for weak orderings".into())),
        };
        if key.len() < l {
            continue;
        }
        *blocs.entry(key).or_insert_with(Rational::zero) += line.value();
    }
    for (names, weight) in blocs {
        if weight <= bound {
            continue;
        }
        report.examined += 1;
        let got = names.iter().filter(|&&c| elected[c]).count();
        if got < l {
            let ids: Vec<&str> = names.iter().map(|&c| e.name(c)).collect();
            let mut w = Witness::new(format!(
                "bloc of {weight} voting for {{{}}} exceeds {l}V/(s+1) but has {got} of them elected",
                ids.join(",")
            ));
            w.bound = Some(bound.clone());
            w.value = Some(weight);
            w.elections.push(e.to_text());
            report.fail(w);
        }
    }
    Ok(())
}

struct Types {
    /// Names of each ballot type as a bit set over candidates.
    sets: Vec<Vec<u64>>,
    weight: Vec<Rational>,
    /// Elected names on each type.
    hits: Vec<usize>,
    labels: Vec<String>,
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_or(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn count(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

fn groups(e: &Election, elected: &[bool], s: usize, c: RepresentationCriterion, report: &mut AuditReport) -> Result<()> {
    let m = e.merged();
    let n = m.lines().len();
    if n > MAX_TYPES {
        return Err(Error::Budget {
            count: 1u128 << n,
            budget: 1u128 << MAX_TYPES,
        });
    }
    let words = e.candidates().len().div_ceil(64);
    let mut elected_bits = vec![0u64; words];
    for (i, _) in elected.iter().enumerate().filter(|(_, &x)| x) {
        elected_bits[i / 64] |= 1 << (i % 64);
    }
    let mut t = Types {
        sets: Vec::new(),
        weight: Vec::new(),
        hits: Vec::new(),
        labels: m.line_labels(),
    };
    for line in m.lines() {
        let mut b = vec![0u64; words];
        for i in line.ballot.names() {
            b[i / 64] |= 1 << (i % 64);
        }
        t.hits.push(count(&bits_and(&b, &elected_bits)));
        t.sets.push(b);
        t.weight.push(line.value());
    }
    let total = m.total_weight();
    let mut chosen = Vec::new();
    let full = vec![u64::MAX; words];
    let ctx = Ctx {
        t: &t,
        elected: &elected_bits,
        s,
        total: &total,
        c,
        e,
    };
    walk(&ctx, 0, &mut chosen, &Rational::zero(), &full, &vec![0; words], 0, report);
    Ok(())
}

struct Ctx<'a> {
    t: &'a Types,
    elected: &'a [u64],
    s: usize,
    total: &'a Rational,
    c: RepresentationCriterion,
    e: &'a Election,
}

/// Depth-first over subsets of types. Once the intersection is empty no
/// superset can qualify, which prunes most branches.
#[allow(clippy::too_many_arguments)]
fn walk(
    ctx: &Ctx,
    next: usize,
    chosen: &mut Vec<usize>,
    weight: &Rational,
    inter: &[u64],
    union: &[u64],
    best_hits: usize,
    report: &mut AuditReport,
) {
    for i in next..ctx.t.sets.len() {
        let inter2 = bits_and(inter, &ctx.t.sets[i]);
        let common = count(&inter2);
        if common == 0 {
            continue;
        }
        let union2 = bits_or(union, &ctx.t.sets[i]);
        let weight2 = weight + &ctx.t.weight[i];
        let hits2 = best_hits.max(ctx.t.hits[i]);
        chosen.push(i);
        evaluate(ctx, chosen, &weight2, common, &union2, hits2, report);
        walk(ctx, i + 1, chosen, &weight2, &inter2, &union2, hits2, report);
        chosen.pop();
    }
}

fn evaluate(
    ctx: &Ctx,
    chosen: &[usize],
    weight: &Rational,
    common: usize,
    union: &[u64],
    best_hits: usize,
    report: &mut AuditReport,
) {
    report.examined += 1;
    // Largest l with weight >= l V / s, capped by the common names and s.
    let by_size = (weight * Rational::from(ctx.s) / ctx.total).floor();
    let by_size: usize = by_size.try_into().unwrap_or(usize::MAX);
    let mut l = by_size.min(common).min(ctx.s);
    if ctx.c == RepresentationCriterion::JR {
        l = l.min(1);
    }
    if l == 0 {
        return;
    }
    let covered = count(&bits_and(union, ctx.elected));
    let (ok, got) = match ctx.c {
        RepresentationCriterion::EJR => (best_hits >= l, best_hits),
        _ => (covered >= l, covered),
    };
    if !ok {
        let labels: Vec<&str> = chosen.iter().map(|&i| ctx.t.labels[i].as_str()).collect();
        let what = match ctx.c {
            RepresentationCriterion::EJR => "the best single voter has",
            _ => "the group's ballots have",
        };
        let mut w = Witness::new(format!(
            "group [{}] of weight {weight} with {common} common names deserves {l}; {what} {got} elected",
            labels.join(", ")
        ));
        w.bound = Some(Rational::from(l) * ctx.total / Rational::from(ctx.s));
        w.value = Some(weight.clone());
        w.elections.push(ctx.e.to_text());
        report.fail(w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn criterion_names() {
        for t in ["jr", "pjr", "ejr", "phpc:2"] {
            assert_eq!(t.parse::<RepresentationCriterion>().unwrap().to_string(), t);
        }
        assert!("phpc:0".parse::<RepresentationCriterion>().is_err());
    }

    #[test]
    fn phpc_bloc_left_out() {
        let e = Election::from_lines(BallotKind::Unordered, 2, &[(41, "A B"), (20, "B"), (39, "C D")]).unwrap();
        let r = check_representation(&e, &ids(&["A", "B"]), RepresentationCriterion::PhPC(1)).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses[0].value, Some(Rational::from(39)));
        assert_eq!(r.witnesses[0].bound, Some(Rational::new(100, 3).unwrap()));
        assert!(r.witnesses[0].description.contains("{C,D}"));
        let r = check_representation(&e, &ids(&["A", "C"]), RepresentationCriterion::PhPC(1)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn ordered_phpc_uses_leading_names() {
        // 9 ABC and 9 BAC share the first two names: 18 > 2 * 25 / 4.
        let e = Election::from_lines(BallotKind::Ordered, 3, &[(9, "A B C"), (9, "B A C"), (7, "X Y Z")]).unwrap();
        let r = check_representation(&e, &ids(&["A", "X", "Y"]), RepresentationCriterion::PhPC(2)).unwrap();
        assert!(!r.passed());
        let r = check_representation(&e, &ids(&["A", "B", "X"]), RepresentationCriterion::PhPC(2)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn justified_representation_family() {
        let e = Election::from_lines(
            BallotKind::Unordered,
            3,
            &[(1034, "A B C"), (519, "P Q R"), (90, "A B Q"), (47, "A P Q")],
        )
        .unwrap();
        for c in [RepresentationCriterion::JR, RepresentationCriterion::PJR, RepresentationCriterion::EJR] {
            assert!(check_representation(&e, &ids(&["A", "Q", "B"]), c).unwrap().passed());
        }
        // PQR alone is short of a third; joined with APQ the group shares
        // P and Q but already has A elected.
        let r = check_representation(&e, &ids(&["A", "B", "C"]), RepresentationCriterion::JR).unwrap();
        assert!(r.passed());
        let e2 = Election::from_lines(BallotKind::Unordered, 2, &[(5, "A B"), (5, "C")]).unwrap();
        let r = check_representation(&e2, &ids(&["A", "B"]), RepresentationCriterion::JR).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses.len(), 1);

        // The A bloc (9 of 17) is below 3 * 17 / 5, so nobody may claim three.
        let e = Election::from_lines(
            BallotKind::Unordered,
            5,
            &[(9, "A1 A2 A3"), (2, "X1 X2"), (2, "X1 X3"), (2, "X2"), (2, "X3")],
        )
        .unwrap();
        let c = ids(&["A1", "A2", "X1", "X2", "X3"]);
        assert!(check_representation(&e, &c, RepresentationCriterion::PJR).unwrap().passed());
    }

    #[test]
    fn pjr_weaker_than_ejr() {
        // Two voter types sharing A and B: PJR counts names on either ballot,
        // EJR needs one voter with two elected.
        let e = Election::from_lines(BallotKind::Unordered, 2, &[(1, "A B C"), (1, "A B D")]).unwrap();
        let committee = ids(&["C", "D"]);
        assert!(check_representation(&e, &committee, RepresentationCriterion::PJR).unwrap().passed());
        assert!(!check_representation(&e, &committee, RepresentationCriterion::EJR).unwrap().passed());
    }
}

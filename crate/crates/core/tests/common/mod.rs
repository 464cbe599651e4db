//! Independent reference computations for the integration tests. Nothing
//! here calls the counting engines; every oracle recomputes its method from
//! the ballots with its own formulation.

#![allow(dead_code)]

use std::collections::BTreeMap;

use multiwinner::{BallotKind, Election, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

pub fn int(n: u64) -> Rational {
    Rational::from(n)
}

pub fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

/// Ballot lines as (voters, names in order).
pub fn lines(e: &Election) -> Vec<(Rational, Vec<String>)> {
    e.lines()
        .iter()
        .map(|l| {
            let names = l.ballot.names().map(|c| e.name(c).to_string()).collect();
            (l.value(), names)
        })
        .collect()
}

/// Unique minimum, or `None` on a tie.
fn unique_min<K: Clone>(items: &[(K, Rational)]) -> Option<(K, Rational)> {
    let best = items.iter().map(|(_, v)| v).min()?;
    let hits: Vec<_> = items.iter().filter(|(_, v)| v == best).collect();
    (hits.len() == 1).then(|| hits[0].clone())
}

fn unique_max<K: Clone>(items: &[(K, Rational)]) -> Option<(K, Rational)> {
    let best = items.iter().map(|(_, v)| v).max()?;
    let hits: Vec<_> = items.iter().filter(|(_, v)| v == best).collect();
    (hits.len() == 1).then(|| hits[0].clone())
}

/// Sequential Phragmén as load balancing: electing `c` spreads a unit of
/// load over its current supporters so that all of them end at the same
/// load `(1 + sum m_b x_b) / sum m_b`; the candidate giving the smallest
/// such load wins. Unordered ballots support every unelected name, ordered
/// ballots their first unelected name. `None` when a round ties or no
/// ballot supports anyone.
pub fn phragmen_oracle(e: &Election, s: usize) -> Option<Vec<String>> {
    let ls = lines(e);
    let mut load = vec![Rational::zero(); ls.len()];
    let mut elected: Vec<String> = Vec::new();
    for _ in 0..s {
        let supports = |b: usize, c: &str| -> bool {
            let names = &ls[b].1;
            match e.kind() {
                BallotKind::Unordered => names.iter().any(|n| n == c),
                _ => names.iter().find(|n| !elected.contains(n)).is_some_and(|n| n == c),
            }
        };
        let mut items = Vec::new();
        for c in e.candidates().iter().filter(|c| !elected.contains(c)) {
            let (mut mass, mut held) = (Rational::zero(), Rational::zero());
            for (b, (m, _)) in ls.iter().enumerate() {
                if supports(b, c) {
                    mass += m.clone();
                    held += m.clone() * load[b].clone();
                }
            }
            if mass.is_positive() {
                items.push((c.clone(), (Rational::one() + held) / mass));
            }
        }
        let (w, t) = unique_min(&items)?;
        for b in 0..ls.len() {
            if supports(b, &w) {
                load[b] = t.clone();
            }
        }
        elected.push(w);
    }
    Some(elected)
}

/// Per party votes when every ballot is one party's list (parties are the
/// leading letter of the names).
pub fn party_votes(e: &Election) -> BTreeMap<String, Rational> {
    let mut v = BTreeMap::new();
    for (m, names) in lines(e) {
        let p = party_of(&names[0]);
        assert!(names.iter().all(|n| party_of(n) == p), "not a party list election");
        *v.entry(p).or_insert_with(Rational::zero) += m;
    }
    v
}

pub fn party_of(name: &str) -> String {
    name[..1].to_string()
}

pub fn seats_by_party(winners: &[String]) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    for w in winners {
        *m.entry(party_of(w)).or_insert(0) += 1;
    }
    m
}

/// Highest averages with divisors `d(k)`, capped at `cap` seats per party;
/// `None` when some award is tied.
pub fn highest_averages(
    votes: &BTreeMap<String, Rational>,
    s: usize,
    cap: u64,
    d: impl Fn(u64) -> Rational,
) -> Option<BTreeMap<String, u64>> {
    let mut held: BTreeMap<String, u64> = votes.keys().map(|p| (p.clone(), 0)).collect();
    for _ in 0..s {
        let items: Vec<(String, Rational)> = votes
            .iter()
            .filter(|(p, _)| held[*p] < cap)
            .map(|(p, v)| (p.clone(), v.clone() / d(held[p] + 1)))
            .collect();
        let (p, _) = unique_max(&items)?;
        *held.get_mut(&p).unwrap() += 1;
    }
    held.retain(|_, n| *n > 0);
    Some(held)
}

pub fn dhondt(votes: &BTreeMap<String, Rational>, s: usize, cap: u64) -> Option<BTreeMap<String, u64>> {
    highest_averages(votes, s, cap, |k| int(k))
}

pub fn sainte_lague(votes: &BTreeMap<String, Rational>, s: usize, cap: u64) -> Option<BTreeMap<String, u64>> {
    highest_averages(votes, s, cap, |k| int(2 * k - 1))
}

/// Approval totals (every name on a ballot).
pub fn approvals(e: &Election) -> BTreeMap<String, Rational> {
    let mut t: BTreeMap<String, Rational> = e.candidates().iter().map(|c| (c.clone(), Rational::zero())).collect();
    for (m, names) in lines(e) {
        for n in names {
            *t.get_mut(&n).unwrap() += m.clone();
        }
    }
    t
}

/// First-name totals.
pub fn first_names(e: &Election) -> BTreeMap<String, Rational> {
    let mut t: BTreeMap<String, Rational> = e.candidates().iter().map(|c| (c.clone(), Rational::zero())).collect();
    for (m, names) in lines(e) {
        *t.get_mut(&names[0]).unwrap() += m;
    }
    t
}

pub fn argmax_set(t: &BTreeMap<String, Rational>) -> Vec<String> {
    let best = t.values().max().unwrap();
    t.iter().filter(|(_, v)| *v == best).map(|(c, _)| c.clone()).collect()
}

/// `1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> Rational {
    (1..=n as i64).map(|k| r(1, k)).fold(Rational::zero(), |a, b| a + b)
}

/// Proportional satisfaction of a committee.
pub fn pav_score(e: &Election, committee: &[String]) -> Rational {
    lines(e)
        .into_iter()
        .map(|(m, names)| m * harmonic(names.iter().filter(|n| committee.contains(n)).count()))
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn subsets(items: &[String], k: usize) -> Vec<Vec<String>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = subsets(&items[1..], k - 1);
    for s in &mut out {
        s.insert(0, items[0].clone());
    }
    out.extend(subsets(&items[1..], k));
    out
}

/// Every committee of size `s` with the largest proportional satisfaction.
pub fn pav_optima(e: &Election, s: usize) -> Vec<Vec<String>> {
    let all = subsets(e.candidates(), s);
    let scored: Vec<(Vec<String>, Rational)> = all.into_iter().map(|c| (c.clone(), pav_score(e, &c))).collect();
    let best = scored.iter().map(|(_, v)| v).max().unwrap().clone();
    scored.into_iter().filter(|(_, v)| *v == best).map(|(c, _)| c).collect()
}

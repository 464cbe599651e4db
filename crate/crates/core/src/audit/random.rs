//! Seeded random elections for property scans and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::election::{BallotKind, Election, RawGroups};
use crate::numeric::Rational;

/// Candidate ids `A`, `B`, ... (then `C26`, `C27`, ...).
pub fn candidate_ids(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'A' + i as u8).to_string()
            } else {
                format!("C{i}")
            }
        })
        .collect()
}

/// A random election with up to `max_candidates` names and `max_types`
/// ballot types, counts in `1..=max_count`. Unordered ballots get random
/// nonempty subsets, ordered ballots random prefixes of permutations. The
/// number of seats is drawn from `1..=max_seats` and capped by the roster.
pub fn random_election<R: Rng>(
    rng: &mut R,
    kind: BallotKind,
    max_candidates: usize,
    max_types: usize,
    max_count: u64,
    max_seats: usize,
) -> Election {
    loop {
        let n = rng.gen_range(2..=max_candidates.max(2));
        let ids = candidate_ids(n);
        let types = rng.gen_range(1..=max_types.max(1));
        let raw: Vec<(RawGroups, Rational, u64)> = (0..types)
            .map(|_| (random_ballot(rng, kind, &ids), Rational::one(), rng.gen_range(1..=max_count)))
            .collect();
        let seats = rng.gen_range(1..=max_seats.max(1));
        // The roster is the names used; retry when it is smaller than s.
        if let Ok(e) = Election::new(kind, seats, &[], raw) {
            return e;
        }
    }
}

pub fn random_ballot<R: Rng>(rng: &mut R, kind: BallotKind, ids: &[String]) -> RawGroups {
    let mut names = ids.to_vec();
    names.shuffle(rng);
    let len = rng.gen_range(1..=names.len());
    names.truncate(len);
    match kind {
        BallotKind::Unordered => {
            names.sort();
            vec![names]
        }
        BallotKind::Ordered => names.into_iter().map(|c| vec![c]).collect(),
        BallotKind::Weak => {
            let mut groups: Vec<Vec<String>> = Vec::new();
            for c in names {
                match groups.last_mut() {
                    Some(g) if rng.gen_bool(0.4) => g.push(c),
                    _ => groups.push(vec![c]),
                }
            }
            groups
        }
    }
}

/// Disjoint party lists `P1 P2 ...`, `Q1 Q2 ...`: one ballot type per
/// party, every list of length `list_len`.
pub fn random_party_lists<R: Rng>(
    rng: &mut R,
    kind: BallotKind,
    max_parties: usize,
    list_len: usize,
    max_count: u64,
    seats: usize,
) -> (Election, Vec<Vec<String>>) {
    let parties = rng.gen_range(1..=max_parties.max(1));
    let lists: Vec<Vec<String>> = (0..parties)
        .map(|p| {
            let tag = char::from(b'P' + p as u8);
            (1..=list_len).map(|k| format!("{tag}{k}")).collect()
        })
        .collect();
    let raw = lists
        .iter()
        .map(|l| {
            let groups = match kind {
                BallotKind::Unordered => vec![l.clone()],
                _ => l.iter().map(|c| vec![c.clone()]).collect(),
            };
            (groups, Rational::one(), rng.gen_range(1..=max_count))
        })
        .collect();
    let e = Election::new(kind, seats.min(parties * list_len), &[], raw).expect("party lists are valid");
    (e, lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reproducible() {
        let a = random_election(&mut ChaCha8Rng::seed_from_u64(3), BallotKind::Ordered, 6, 5, 20, 3);
        let b = random_election(&mut ChaCha8Rng::seed_from_u64(3), BallotKind::Ordered, 6, 5, 20, 3);
        assert_eq!(a, b);
        assert!(a.seats() <= a.candidates().len());
        let (e, lists) = random_party_lists(&mut ChaCha8Rng::seed_from_u64(1), BallotKind::Unordered, 5, 8, 100, 8);
        assert_eq!(e.lines().len(), lists.len());
    }
}

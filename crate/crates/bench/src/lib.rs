//! Workloads for the benchmarks: the built-in fixtures plus larger seeded
//! random elections.

use multiwinner::audit::random::random_election;
use multiwinner::{fixtures, BallotKind, Election};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> Election {
    fixtures::election(name).expect("known fixture")
}

/// A random election with up to `candidates` names and `types` ballot
/// types, seeded so every run measures the same input.
pub fn random(kind: BallotKind, candidates: usize, types: usize, seats: usize, seed: u64) -> Election {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let e = random_election(&mut g, kind, candidates, types, 1000, seats);
    let s = seats.min(e.candidates().len());
    e.with_seats(s).expect("seat count within the candidate count")
}

mod common;

use common::*;
use multiwinner::audit::random::{random_election, random_party_lists};
use multiwinner::method::{run_method, Defaults, Method};
use multiwinner::phragmen::{phragmen_elect, phragmen_elect_by_power};
use multiwinner::reference::{divisor_method, DivisorSequence};
use multiwinner::{fixtures, BallotKind, Rational, RoundingPolicy, TiePolicy};
use proptest::prelude::*;

const LEX: TiePolicy = TiePolicy::Lexicographic;

fn method(token: &str) -> Method {
    Method::parse(token, &Defaults::default()).unwrap()
}

proptest! {
    // Every seat hands out one unit of load, so the place numbers of all
    // voters add up to the number of seats filled through ballots.
    #[test]
    fn place_numbers_sum_to_seats(seed in any::<u64>(), ordered in any::<bool>()) {
        let kind = if ordered { BallotKind::Ordered } else { BallotKind::Unordered };
        let e = random_election(&mut rng(seed), kind, 7, 7, 50, 5);
        let o = phragmen_elect(&e, &LEX, RoundingPolicy::Exact).unwrap();
        prop_assume!(o.notes.is_empty());
        let total: Rational = o.final_values.iter().sum();
        prop_assert_eq!(total, Rational::from(e.seats()));
        for r in &o.rounds {
            let t: Rational = r.ballot_values.iter().sum();
            prop_assert_eq!(t, Rational::from(r.index));
        }
    }
}

#[test]
fn load_balancing_formulation_agrees() {
    for kind in [BallotKind::Unordered, BallotKind::Ordered] {
        let mut g = rng(11);
        let (mut compared, mut drawn) = (0, 0);
        while compared < 1000 {
            drawn += 1;
            assert!(drawn < 5000, "{kind}: too many tied instances");
            let e = random_election(&mut g, kind, 7, 7, 60, 5);
            let Some(want) = phragmen_oracle(&e, e.seats()) else { continue };
            let o = phragmen_elect(&e, &LEX, RoundingPolicy::Exact).unwrap();
            assert_eq!(o.elected, want, "{kind}\n{}", e.to_text());
            let p = phragmen_elect_by_power(&e, &LEX).unwrap();
            assert_eq!(p.elected, want, "power, {kind}\n{}", e.to_text());
            compared += 1;
        }
    }
}

#[test]
fn figures_are_reciprocal_loads() {
    let e = fixtures::election("E1894").unwrap();
    let o = phragmen_elect(&e, &LEX, RoundingPolicy::Exact).unwrap();
    // After A: the three A lines carry load 1/1171 per voter.
    let r2 = &o.rounds[1];
    let q_load = (Rational::one() + int(90) * r(1, 1171) + int(47) * r(1, 1171)) / int(519 + 90 + 47);
    assert_eq!(r2.score_of("Q").unwrap(), &q_load.recip().unwrap());
    assert_eq!(o.rounds[2].figure, Some(r(107928728, 195525)));
}

#[test]
fn party_lists_give_dhondt() {
    let mut g = rng(3);
    let methods = ["phragmen", "thiele-add", "thiele-opt"].map(method);
    let ordered = ["phragmen", "thiele-ordered"].map(method);
    let mut compared = 0;
    for i in 0..1000 {
        let kind = if i % 2 == 0 { BallotKind::Unordered } else { BallotKind::Ordered };
        let s = 1 + i % 8;
        let (e, _) = random_party_lists(&mut g, kind, 5, 8, 200, s);
        let votes = party_votes(&e);
        let Some(want) = dhondt(&votes, e.seats(), 8) else { continue };
        compared += 1;
        let lib = divisor_method(&votes, e.seats(), &DivisorSequence::DHondt, &LEX).unwrap();
        for (p, n) in &want {
            assert_eq!(lib.seats_of(p), *n);
        }
        let list = if kind == BallotKind::Unordered { &methods[..] } else { &ordered[..] };
        for m in list {
            let got = run_method(m, &e, e.seats(), &LEX, None).unwrap().winners();
            assert_eq!(seats_by_party(&got), want, "{m}\n{}", e.to_text());
        }
    }
    assert!(compared > 700, "only {compared} tie-free instances");
}

#[test]
fn single_seat_goes_to_the_top_tally() {
    let mut g = rng(5);
    for kind in [BallotKind::Unordered, BallotKind::Ordered] {
        for _ in 0..500 {
            let e = random_election(&mut g, kind, 6, 6, 40, 1);
            let top = argmax_set(&if kind == BallotKind::Unordered { approvals(&e) } else { first_names(&e) });
            let tokens: &[&str] = if kind == BallotKind::Unordered {
                &["phragmen", "thiele-opt", "thiele-add"]
            } else {
                &["phragmen", "thiele-ordered"]
            };
            for t in tokens {
                let r = run_method(&method(t), &e, 1, &TiePolicy::EnumerateAll(64), None).unwrap();
                let mut sets: Vec<String> = r.outcome_sets().into_iter().flatten().collect();
                sets.sort();
                assert_eq!(sets, top, "{t}\n{}", e.to_text());
            }
        }
    }
}

#[test]
fn fixtures_agree_with_load_balancing() {
    for f in fixtures::all() {
        let e = f.election();
        if e.kind() == BallotKind::Weak {
            continue;
        }
        let Some(want) = phragmen_oracle(&e, e.seats()) else { continue };
        let o = phragmen_elect(&e, &LEX, RoundingPolicy::Exact).unwrap();
        assert_eq!(o.elected, want, "{}", f.name);
    }
}

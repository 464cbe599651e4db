//! Optimal free division of candidate loads over their supporters.
//!
//! For a committee, each elected candidate carries one unit of load that may be
//! split arbitrarily among the ballots naming it. The split minimizing the
//! maximum load is not unique, but the one minimizing every strictly convex
//! separable cost is: it is obtained by repeatedly taking the maximal densest
//! set `T` of candidates (largest `|T| / mass(N(T))`, `N(T)` the ballots naming
//! a member), giving every ballot of `N(T)` the load equal to that density, and
//! removing both. Densities are found with Dinkelbach iterations on a max flow.

use crate::flow::Network;
use crate::numeric::Rational;

/// Per-unit loads of the ballot lines, or `None` when some candidate has no
/// supporting mass. `support[c]` lists the lines naming committee member `c`;
/// `mass[b]` is the number of ballots (times weight) of line `b`.
pub(crate) fn free_split(support: &[Vec<usize>], mass: &[Rational]) -> Option<Vec<Rational>> {
    let mut load = vec![Rational::zero(); mass.len()];
    let mut used = vec![false; mass.len()];
    let mut left: Vec<usize> = (0..support.len()).collect();
    while !left.is_empty() {
        let nbhd = |t: &[usize], used: &[bool]| -> Vec<usize> {
            let mut n: Vec<usize> = t
                .iter()
                .flat_map(|&c| support[c].iter().copied())
                .filter(|&b| !used[b] && mass[b].is_positive())
                .collect();
            n.sort_unstable();
            n.dedup();
            n
        };
        let density = |t: &[usize], used: &[bool]| -> Option<Rational> {
            let m: Rational = nbhd(t, used).iter().map(|&b| mass[b].clone()).sum();
            m.recip().map(|r| r * Rational::from(t.len() as u64))
        };
        let mut lambda = density(&left, &used)?;
        let (tight, lambda) = loop {
            let (flow, net) = network(&left, support, mass, &used, &lambda);
            if flow == Rational::from(left.len() as u64) {
                // Candidates that cannot reach the sink form the maximal tight set.
                let reach = net.reaching(1);
                let tight: Vec<usize> = left
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| !reach[2 + i])
                    .map(|(_, &c)| c)
                    .collect();
                break (tight, lambda);
            }
            let from = net.reachable_from(0);
            let t: Vec<usize> = left
                .iter()
                .enumerate()
                .filter(|&(i, _)| from[2 + i])
                .map(|(_, &c)| c)
                .collect();
            lambda = density(&t, &used)?;
        };
        debug_assert!(!tight.is_empty());
        for b in nbhd(&tight, &used) {
            load[b] = lambda.clone();
            used[b] = true;
        }
        left.retain(|c| !tight.contains(c));
    }
    Some(load)
}

/// Source 0, sink 1, candidates from 2, then the lines. Source edges carry one
/// unit per candidate, line edges `lambda * mass`.
fn network(
    left: &[usize],
    support: &[Vec<usize>],
    mass: &[Rational],
    used: &[bool],
    lambda: &Rational,
) -> (Rational, Network) {
    let base = 2 + left.len();
    let mut net = Network::new(base + mass.len());
    for (i, &c) in left.iter().enumerate() {
        net.add_edge(0, 2 + i, Some(Rational::one()));
        for &b in &support[c] {
            if !used[b] {
                net.add_edge(2 + i, base + b, None);
            }
        }
    }
    for (b, m) in mass.iter().enumerate() {
        if !used[b] {
            net.add_edge(base + b, 1, Some(lambda * m));
        }
    }
    let flow = net.max_flow(0, 1);
    (flow, net)
}

/// Sum of squared loads weighted by mass.
pub(crate) fn sum_of_squares(load: &[Rational], mass: &[Rational]) -> Rational {
    load.iter().zip(mass).map(|(x, m)| m * x * x).sum()
}

/// Largest load carried by a ballot that exists.
pub(crate) fn max_load(load: &[Rational], mass: &[Rational]) -> Rational {
    load.iter()
        .zip(mass)
        .filter(|(_, m)| m.is_positive())
        .map(|(x, _)| x.clone())
        .max()
        .unwrap_or_else(Rational::zero)
}

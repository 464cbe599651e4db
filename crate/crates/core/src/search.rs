//! Exhaustive committee search with branch and bound.
//!
//! Candidates approved by exactly the same ballots are interchangeable for
//! every objective used here, so the search runs over how many members of each
//! such clone class are chosen. All co-optimal compositions are kept.

use crate::election::Election;
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::tie::{Chooser, TiePolicy};

/// Default limit on the number of class compositions examined.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Clone classes of the roster under the unordered reading of the ballots.
#[derive(Debug, Clone)]
pub(crate) struct Classes {
    /// Members of each class in roster order.
    pub members: Vec<Vec<usize>>,
    /// Ballot lines containing the class.
    pub lines: Vec<Vec<usize>>,
}

impl Classes {
    /// Groups candidates by ballot membership. Classes are ordered by
    /// decreasing approval, then by their first member.
    pub fn of(e: &Election) -> Classes {
        let n = e.candidates().len();
        let mut sig: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (b, l) in e.lines().iter().enumerate() {
            for c in l.ballot.names() {
                sig[c].push(b);
            }
        }
        let mut classes: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (c, s) in sig.into_iter().enumerate() {
            match classes.iter_mut().find(|(_, l)| *l == s) {
                Some((m, _)) => m.push(c),
                None => classes.push((vec![c], s)),
            }
        }
        let tally = |ls: &[usize]| -> Rational { ls.iter().map(|&b| e.lines()[b].value()).sum() };
        classes.sort_by(|a, b| tally(&b.1).cmp(&tally(&a.1)).then(a.0[0].cmp(&b.0[0])));
        Classes {
            members: classes.iter().map(|c| c.0.clone()).collect(),
            lines: classes.into_iter().map(|c| c.1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Concrete committee using the first `counts[j]` members of each class.
    pub fn first_members(&self, counts: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(j, &k)| self.members[j][..k].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of compositions with `s` seats in total.
    pub fn compositions(&self, s: usize) -> u128 {
        let mut ways = vec![0u128; s + 1];
        ways[0] = 1;
        for m in &self.members {
            let mut next = vec![0u128; s + 1];
            for (used, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for k in 0..=m.len().min(s - used) {
                    next[used + k] = next[used + k].saturating_add(w);
                }
            }
            ways = next;
        }
        ways[s]
    }
}

/// An objective to maximize. `None` ranks below every value.
pub(crate) trait Objective {
    fn score(&self, counts: &[usize]) -> Option<Rational>;
    /// Upper bound over all completions of `counts[..depth]` placing
    /// `remaining` more seats in classes `depth..`.
    fn bound(&self, counts: &[usize], depth: usize, remaining: usize) -> Option<Rational>;
}

/// Best score and every composition attaining it.
pub(crate) struct Optimum {
    pub best: Option<Rational>,
    pub optima: Vec<Vec<usize>>,
}

pub(crate) fn search(classes: &Classes, s: usize, obj: &dyn Objective, budget: u128) -> Result<Optimum> {
    let count = classes.compositions(s);
    if count > budget {
        return Err(Error::Budget { count, budget });
    }
    let mut capacity = vec![0usize; classes.len() + 1];
    for j in (0..classes.len()).rev() {
        capacity[j] = capacity[j + 1] + classes.members[j].len();
    }
    let mut st = State {
        classes,
        obj,
        capacity,
        counts: vec![0; classes.len()],
        best: None,
        optima: Vec::new(),
        seen: false,
    };
    st.dfs(0, s);
    Ok(Optimum {
        best: st.best,
        optima: st.optima,
    })
}

struct State<'a> {
    classes: &'a Classes,
    obj: &'a dyn Objective,
    capacity: Vec<usize>,
    counts: Vec<usize>,
    best: Option<Rational>,
    optima: Vec<Vec<usize>>,
    seen: bool,
}

impl State<'_> {
    fn dfs(&mut self, depth: usize, remaining: usize) {
        if depth == self.classes.len() {
            if remaining > 0 {
                return;
            }
            let v = self.obj.score(&self.counts);
            if !self.seen || v > self.best {
                self.seen = true;
                self.best = v.clone();
                self.optima.clear();
            }
            if v == self.best {
                self.optima.push(self.counts.clone());
            }
            return;
        }
        if self.seen && depth > 0 && self.obj.bound(&self.counts, depth, remaining) < self.best {
            return;
        }
        let size = self.classes.members[depth].len();
        let lo = remaining.saturating_sub(self.capacity[depth + 1]);
        for k in (lo..=size.min(remaining)).rev() {
            self.counts[depth] = k;
            self.dfs(depth + 1, remaining - k);
        }
        self.counts[depth] = 0;
    }
}

/// Turns co-optimal compositions into committees. Returns the chosen
/// committee, all committees under `EnumerateAll`, and whether a tie occurred.
pub(crate) fn choose(
    classes: &Classes,
    optima: &[Vec<usize>],
    names: &[String],
    policy: &TiePolicy,
    ch: &mut Chooser,
) -> Result<(Vec<usize>, Vec<Vec<String>>, bool)> {
    let label = |set: &[usize]| -> Vec<String> { set.iter().map(|&c| names[c].clone()).collect() };
    let tied = optima.len() > 1
        || optima
            .iter()
            .any(|k| k.iter().zip(&classes.members).any(|(&k, m)| k > 0 && k < m.len()));
    match policy {
        TiePolicy::Lexicographic => Ok((lex_min(classes, optima, names), Vec::new(), tied)),
        TiePolicy::Seeded(_) => {
            let idx: Vec<usize> = (0..optima.len()).collect();
            let j = ch.pick(0, &idx, |i| label(&classes.first_members(&optima[i])).join(" "));
            let counts = &optima[j];
            let mut set = Vec::new();
            for (c, &k) in counts.iter().enumerate() {
                let mut pool = classes.members[c].clone();
                for _ in 0..k {
                    let pos: Vec<usize> = (0..pool.len()).collect();
                    let p = ch.pick(0, &pos, |i| names[pool[i]].clone());
                    set.push(pool.remove(p));
                }
            }
            set.sort_unstable();
            Ok((set, Vec::new(), tied))
        }
        TiePolicy::EnumerateAll(limit) => {
            let mut all: Vec<Vec<String>> = Vec::new();
            for counts in optima {
                let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
                for (c, &k) in counts.iter().enumerate() {
                    let picks = subsets(&classes.members[c], k);
                    let mut next = Vec::new();
                    for p in &partial {
                        for q in &picks {
                            let mut s = p.clone();
                            s.extend_from_slice(q);
                            next.push(s);
                            if next.len() > *limit {
                                all.sort();
                                return Err(Error::TieOverflow {
                                    limit: *limit,
                                    partial: all,
                                });
                            }
                        }
                    }
                    partial = next;
                }
                for mut s in partial {
                    s.sort_unstable();
                    all.push(label(&s));
                    if all.len() > *limit {
                        all.sort();
                        return Err(Error::TieOverflow {
                            limit: *limit,
                            partial: all,
                        });
                    }
                }
            }
            all.sort();
            all.dedup();
            Ok((lex_min(classes, optima, names), all, tied))
        }
    }
}

/// The committee whose sorted id list is lexicographically smallest.
fn lex_min(classes: &Classes, optima: &[Vec<usize>], names: &[String]) -> Vec<usize> {
    optima
        .iter()
        .map(|k| classes.first_members(k))
        .min_by(|a, b| {
            let la: Vec<&str> = a.iter().map(|&c| names[c].as_str()).collect();
            let lb: Vec<&str> = b.iter().map(|&c| names[c].as_str()).collect();
            la.cmp(&lb)
        })
        .expect("at least one optimum")
}

/// All `k`-subsets of `items`, preserving order.
fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mut rest in subsets(&items[1..], k - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out.extend(subsets(&items[1..], k));
    out
}

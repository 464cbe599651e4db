//! Phragmén's load-optimization family: eight combinations of how a winner's
//! unit load is split (equally or freely), how inequality is measured (sum of
//! squares or maximum) and whether the whole committee or one seat at a time
//! is optimized.

use std::fmt;
use std::str::FromStr;

use crate::election::{BallotKind, Election};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::outcome::{scores_of, Action, Outcome, Round};
use crate::phragmen::{argmin, run_outcome};
use crate::search::{self, Classes, Objective, DEFAULT_BUDGET};
use crate::tie::{Chooser, TiePolicy};
use crate::variants::loads::{free_split, max_load, sum_of_squares};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    /// `a1`: each supporter carries `1/v` of the winner.
    Equal,
    /// `a2`: any split, chosen to minimize inequality.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// `b1`: sum of squared loads.
    LeastSquares,
    /// `b2`: largest load.
    MaxLoad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptMode {
    /// `c1`: best committee overall.
    GlobalOpt,
    /// `c2`: one seat at a time, earlier loads kept.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OptCombo {
    pub split: Split,
    pub criterion: Criterion,
    pub mode: OptMode,
    /// Sequential free split only: the winner's supporters are all set to a
    /// common load, even where that lowers an earlier load.
    pub allow_decrease: bool,
}

impl OptCombo {
    pub fn new(split: Split, criterion: Criterion, mode: OptMode) -> OptCombo {
        OptCombo {
            split,
            criterion,
            mode,
            allow_decrease: false,
        }
    }

    /// All eight combinations, `a1,b1,c1` first.
    pub fn all() -> Vec<OptCombo> {
        let mut v = Vec::new();
        for split in [Split::Equal, Split::Free] {
            for criterion in [Criterion::LeastSquares, Criterion::MaxLoad] {
                for mode in [OptMode::GlobalOpt, OptMode::Sequential] {
                    v.push(OptCombo::new(split, criterion, mode));
                }
            }
        }
        v
    }

    fn inequality(&self, load: &[Rational], mass: &[Rational]) -> Rational {
        match self.criterion {
            Criterion::LeastSquares => sum_of_squares(load, mass),
            Criterion::MaxLoad => max_load(load, mass),
        }
    }
}

impl fmt::Display for OptCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.split {
            Split::Equal => "a1",
            Split::Free => "a2",
        };
        let b = match self.criterion {
            Criterion::LeastSquares => "b1",
            Criterion::MaxLoad => "b2",
        };
        let c = match self.mode {
            OptMode::GlobalOpt => "c1",
            OptMode::Sequential => "c2",
        };
        write!(f, "{a},{b},{c}")?;
        if self.allow_decrease {
            f.write_str(",decrease")?;
        }
        Ok(())
    }
}

impl FromStr for OptCombo {
    type Err = Error;

    /// `a1|a2,b1|b2,c1|c2`, optionally followed by `,decrease`.
    fn from_str(s: &str) -> Result<Self> {
        let (mut a, mut b, mut c, mut dec) = (None, None, None, false);
        for tok in s.split(',').map(str::trim) {
            match tok {
                "a1" if a.is_none() => a = Some(Split::Equal),
                "a2" if a.is_none() => a = Some(Split::Free),
                "b1" if b.is_none() => b = Some(Criterion::LeastSquares),
                "b2" if b.is_none() => b = Some(Criterion::MaxLoad),
                "c1" if c.is_none() => c = Some(OptMode::GlobalOpt),
                "c2" if c.is_none() => c = Some(OptMode::Sequential),
                "decrease" => dec = true,
                _ => return Err(Error::Invalid(format!("bad combination '{s}': expected a1|a2,b1|b2,c1|c2"))),
            }
        }
        match (a, b, c) {
            (Some(split), Some(criterion), Some(mode)) => Ok(OptCombo {
                split,
                criterion,
                mode,
                allow_decrease: dec,
            }),
            _ => Err(Error::Invalid(format!("bad combination '{s}': expected a1|a2,b1|b2,c1|c2"))),
        }
    }
}

/// Lines naming each candidate, and each line's mass.
fn support_and_mass(e: &Election) -> (Vec<Vec<usize>>, Vec<Rational>) {
    let mut support = vec![Vec::new(); e.candidates().len()];
    for (b, l) in e.lines().iter().enumerate() {
        for c in l.ballot.names() {
            support[c].push(b);
        }
    }
    (support, e.lines().iter().map(|l| l.value()).collect())
}

fn loads_of(
    committee: &[usize],
    split: Split,
    support: &[Vec<usize>],
    mass: &[Rational],
) -> Option<Vec<Rational>> {
    match split {
        Split::Equal => {
            let mut load = vec![Rational::zero(); mass.len()];
            for &c in committee {
                let v: Rational = support[c].iter().map(|&b| mass[b].clone()).sum();
                let share = v.recip()?;
                for &b in &support[c] {
                    load[b] += &share;
                }
            }
            Some(load)
        }
        Split::Free => {
            let sup: Vec<Vec<usize>> = committee.iter().map(|&c| support[c].clone()).collect();
            free_split(&sup, mass)
        }
    }
}

/// Per-ballot-line loads of a committee under the given split, or `None` when
/// a member is named on no ballot.
pub fn committee_loads(e: &Election, committee: &[&str], split: Split) -> Result<Option<Vec<Rational>>> {
    let (support, mass) = support_and_mass(e);
    let idx = committee
        .iter()
        .map(|id| e.index_of(id).ok_or_else(|| Error::Invalid(format!("unknown candidate {id}"))))
        .collect::<Result<Vec<usize>>>()?;
    Ok(loads_of(&idx, split, &support, &mass))
}

pub fn opt_load_elect(e: &Election, s: usize, combo: OptCombo, policy: &TiePolicy) -> Result<Outcome> {
    opt_load_elect_with_budget(e, s, combo, policy, DEFAULT_BUDGET)
}

pub fn opt_load_elect_with_budget(
    e: &Election,
    s: usize,
    combo: OptCombo,
    policy: &TiePolicy,
    budget: u128,
) -> Result<Outcome> {
    if e.kind() != BallotKind::Unordered {
        return Err(Error::Invalid("load optimization takes unordered ballots".into()));
    }
    if combo.allow_decrease && (combo.split != Split::Free || combo.mode != OptMode::Sequential) {
        return Err(Error::Invalid("decreasing loads apply to the sequential free split only".into()));
    }
    let e = e.with_seats(s)?;
    match combo.mode {
        OptMode::GlobalOpt => global(&e, s, combo, policy, budget),
        OptMode::Sequential => run_outcome(policy, |ch| sequential(&e, s, combo, ch)),
    }
}

struct LoadObjective<'a> {
    classes: &'a Classes,
    combo: OptCombo,
    support: Vec<Vec<usize>>,
    mass: Vec<Rational>,
}

impl LoadObjective<'_> {
    fn inequality(&self, counts: &[usize]) -> Option<Rational> {
        let set = self.classes.first_members(counts);
        let load = loads_of(&set, self.combo.split, &self.support, &self.mass)?;
        Some(self.combo.inequality(&load, &self.mass))
    }
}

impl Objective for LoadObjective<'_> {
    fn score(&self, counts: &[usize]) -> Option<Rational> {
        self.inequality(counts).map(|x| -x)
    }

    // Inequality never drops when a member is added, so the partial committee
    // bounds every completion.
    fn bound(&self, counts: &[usize], depth: usize, _: usize) -> Option<Rational> {
        let mut prefix = counts.to_vec();
        prefix[depth..].iter_mut().for_each(|k| *k = 0);
        self.score(&prefix)
    }
}

fn global(e: &Election, s: usize, combo: OptCombo, policy: &TiePolicy, budget: u128) -> Result<Outcome> {
    let classes = Classes::of(e);
    let (support, mass) = support_and_mass(e);
    let obj = LoadObjective {
        classes: &classes,
        combo,
        support,
        mass,
    };
    let opt = search::search(&classes, s, &obj, budget)?;
    let mut ch = Chooser::new(policy);
    let (set, alternatives, tied) = search::choose(&classes, &opt.optima, e.candidates(), policy, &mut ch)?;
    let mut out = Outcome::new(format!("opt-load[{combo}]"), false);
    out.figure_name = "inequality".into();
    out.value_name = "load".into();
    out.ballot_labels = e.line_labels();
    out.elected = set.iter().map(|&c| e.name(c).to_string()).collect();
    match opt.best {
        Some(best) => {
            out.objective = Some(-best);
            out.final_values = loads_of(&set, combo.split, &obj.support, &obj.mass).expect("feasible optimum");
        }
        None => out.notes.push("no committee gives every member a supporter".into()),
    }
    out.alternatives = alternatives;
    out.ties = ch.take_events();
    if tied {
        out.notes.push("several committees attain the optimum".into());
    }
    Ok(out)
}

/// Lowest common level `L` with `sum m_b (L - x_b)+ = 1` over the lines.
fn water_level(lines: &[usize], load: &[Rational], mass: &[Rational]) -> Rational {
    let mut order: Vec<usize> = lines.iter().copied().filter(|&b| mass[b].is_positive()).collect();
    order.sort_by(|&a, &b| load[a].cmp(&load[b]));
    let mut m = Rational::zero();
    let mut carried = Rational::zero();
    for (i, &b) in order.iter().enumerate() {
        m += &mass[b];
        carried += &mass[b] * &load[b];
        let level = (Rational::one() + &carried) / &m;
        if order.get(i + 1).map_or(true, |&next| level <= load[next]) {
            return level;
        }
    }
    unreachable!("called with a supported candidate")
}

/// Loads after adding candidate `c`, or `None` if it has no supporter.
fn add_candidate(
    c: usize,
    combo: OptCombo,
    load: &[Rational],
    support: &[Vec<usize>],
    mass: &[Rational],
) -> Option<Vec<Rational>> {
    let v: Rational = support[c].iter().map(|&b| mass[b].clone()).sum();
    if !v.is_positive() {
        return None;
    }
    let mut next = load.to_vec();
    match combo.split {
        Split::Equal => {
            let share = v.recip()?;
            for &b in &support[c] {
                next[b] += &share;
            }
        }
        Split::Free if combo.allow_decrease => {
            let level = uniform_level(&support[c], load, mass, &v);
            for &b in &support[c] {
                next[b] = level.clone();
            }
        }
        Split::Free => {
            let level = water_level(&support[c], load, mass);
            for &b in &support[c] {
                if next[b] < level {
                    next[b] = level.clone();
                }
            }
        }
    }
    Some(next)
}

/// The level at which the supporters' earlier loads plus one unit are spread evenly.
fn uniform_level(lines: &[usize], load: &[Rational], mass: &[Rational], v: &Rational) -> Rational {
    let carried: Rational = lines.iter().map(|&b| &mass[b] * &load[b]).sum();
    (Rational::one() + carried) / v
}

fn sequential(e: &Election, s: usize, combo: OptCombo, ch: &mut Chooser) -> Result<Outcome> {
    let names = e.candidates();
    let n = names.len();
    let (support, mass) = support_and_mass(e);
    let mut load = vec![Rational::zero(); mass.len()];
    let mut elected = vec![false; n];
    let mut out = Outcome::new(format!("opt-load[{combo}]"), true);
    out.figure_name = "inequality".into();
    out.value_name = "load".into();
    out.ballot_labels = e.line_labels();
    for round in 1..=s {
        let trials: Vec<(usize, Vec<Rational>)> = (0..n)
            .filter(|&c| !elected[c])
            .filter_map(|c| add_candidate(c, combo, &load, &support, &mass).map(|l| (c, l)))
            .collect();
        let items: Vec<(usize, Rational)> = trials
            .iter()
            .map(|(c, l)| (*c, combo.inequality(l, &mass)))
            .collect();
        let Some((best, tied)) = argmin(&items) else {
            let pool: Vec<usize> = (0..n).filter(|&c| !elected[c]).collect();
            if pool.is_empty() {
                return Err(Error::Invalid("fewer candidates than seats".into()));
            }
            let w = ch.pick_named(round, &pool, names);
            elected[w] = true;
            out.elected.push(names[w].clone());
            let mut r = Round::new(round, Action::Elected, &names[w]);
            r.ballot_values = load.clone();
            r.note = Some("no ballot names an unelected candidate; seat filled by the tie rule".into());
            out.notes.push(format!("round {round}: {} seated by the tie rule", names[w]));
            out.rounds.push(r);
            continue;
        };
        let w = ch.pick_named(round, &tied, names);
        let mut note = None;
        if combo.split == Split::Free && !combo.allow_decrease {
            let v: Rational = support[w].iter().map(|&b| mass[b].clone()).sum();
            let level = uniform_level(&support[w], &load, &mass, &v);
            if support[w].iter().any(|&b| mass[b].is_positive() && load[b] > level) {
                note = Some(format!(
                    "spreading all loads of {}'s supporters evenly ({}) would lower an earlier load",
                    names[w],
                    level.approx()
                ));
                out.notes.push(format!("round {round}: {}", note.as_ref().unwrap()));
            }
        }
        load = trials.into_iter().find(|(c, _)| *c == w).expect("winner was tried").1;
        elected[w] = true;
        out.elected.push(names[w].clone());
        let mut r = Round::new(round, Action::Elected, &names[w]);
        r.scores = scores_of(names, items);
        r.figure = Some(best);
        r.ballot_values = load.clone();
        r.note = note;
        out.rounds.push(r);
    }
    out.objective = Some(combo.inequality(&load, &mass));
    out.final_values = load;
    out.ties = ch.take_events();
    Ok(out)
}

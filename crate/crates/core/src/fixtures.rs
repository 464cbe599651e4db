//! Built-in example elections with their known outcomes.
//!
//! Each fixture is an election file whose leading comments carry metadata:
//!
//! ```text
//! # title: <one line>
//! # expect <method> [seats=N] [tie=<policy>] => A Q B          (election order)
//! # expect <method> ... => {A B Q}                              (set)
//! # expect <method> ... => {A B} | {A C}                        (every tie outcome)
//! # expect <method> ... includes {A B}                          (one tie outcome)
//! # figure <method> [seats=N] round=<n> <candidate> = <rational>
//! ```

use std::fmt;

use crate::election::{parse_election, Election};
use crate::error::{Error, Result};
use crate::method::{run_method, Defaults, Method, Report};
use crate::numeric::Rational;
use crate::tie::TiePolicy;

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        const SOURCES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name, ".txt")))),*
        ];
    };
}

fixtures!(
    "E1894",
    "E1894-o",
    "EPhr1",
    "E1893a",
    "E1893b",
    "E1893b-T",
    "ETh",
    "ETh12",
    "EPhr1899",
    "EPhr1899-o",
    "EPhr1899C",
    "ECassel",
    "ECassel.p53",
    "E1913.5",
    "E1913.5-o",
    "ETenow96",
    "ETenow96-o",
    "E1913.16",
    "E1913.17",
    "Etactic",
    "Etactic-split",
    "Etactic-counter",
    "Etactic-o",
    "Etactic-o-split",
    "Etactic-o2",
    "ELanke",
    "ELanke-AC",
    "Erank",
    "E-monoTh",
    "E-monoTh-b",
    "Enonmono1",
    "Enonmono1-b",
    "Enonmono2",
    "Enonmono2-b",
    "Econs-u-1",
    "Econs-u-2",
    "EconsTh-o-1",
    "EconsTh-o-2",
    "EconsTh-o",
    "EfullAB",
    "EfullAB-full",
    "EfullABC",
    "EfullABC-full",
    "Ega3-5",
    "Esplit",
    "EPhragmen-stv",
    "EABAC",
    "EABAC+",
    "Echu",
    "EPhr1896b",
    "Mora-var",
);

/// Expected result of a method on a fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Order(Vec<String>),
    Set(Vec<String>),
    /// Exactly these outcome sets under tie enumeration.
    OneOf(Vec<Vec<String>>),
    /// This set is among the outcomes under tie enumeration.
    Includes(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub method: String,
    pub seats: Option<usize>,
    pub tie: TiePolicy,
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.method)?;
        if let Some(s) = self.seats {
            write!(f, " seats={s}")?;
        }
        if self.tie != TiePolicy::Lexicographic {
            write!(f, " tie={}", self.tie.describe())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub run: Run,
    pub expected: Expected,
}

/// A comparison figure printed for a candidate in a given round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureCheck {
    pub run: Run,
    pub round: usize,
    pub candidate: String,
    pub value: Rational,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub title: String,
    pub text: &'static str,
    pub expectations: Vec<Expectation>,
    pub figures: Vec<FigureCheck>,
}

impl Fixture {
    pub fn election(&self) -> Election {
        parse_election(self.text).expect("built-in fixtures parse")
    }
}

/// Result of one expectation or figure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub fixture: String,
    pub what: String,
    pub passed: bool,
    pub detail: String,
}

pub fn all() -> Vec<Fixture> {
    SOURCES
        .iter()
        .map(|(name, text)| parse_fixture(name, text).expect("built-in fixture metadata"))
        .collect()
}

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn get(name: &str) -> Option<Fixture> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, t)| parse_fixture(n, t).expect("built-in fixture metadata"))
}

/// Election of a built-in fixture.
pub fn election(name: &str) -> Result<Election> {
    get(name)
        .map(|f| f.election())
        .ok_or_else(|| Error::Invalid(format!("no fixture named '{name}'")))
}

fn names_of(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

fn set_of(s: &str) -> Result<Vec<String>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Invalid(format!("expected {{...}}, got '{s}'")))?;
    let mut v = names_of(inner);
    v.sort();
    Ok(v)
}

/// Splits `method [seats=N] [tie=P] [round=R ...]` into a run and the rest.
fn run_of(words: &[&str]) -> Result<(Run, Vec<String>)> {
    let method = words
        .first()
        .ok_or_else(|| Error::Invalid("missing method".into()))?
        .to_string();
    let mut run = Run {
        method,
        seats: None,
        tie: TiePolicy::Lexicographic,
    };
    let mut rest = Vec::new();
    for w in &words[1..] {
        match w.split_once('=') {
            Some(("seats", n)) => run.seats = Some(n.parse().map_err(|_| Error::Invalid(format!("bad seats '{n}'")))?),
            Some(("tie", p)) => run.tie = p.parse()?,
            _ => rest.push(w.to_string()),
        }
    }
    Ok((run, rest))
}

fn parse_fixture(name: &'static str, text: &'static str) -> Result<Fixture> {
    let mut f = Fixture {
        name,
        title: String::new(),
        text,
        expectations: Vec::new(),
        figures: Vec::new(),
    };
    for line in text.lines() {
        let Some(c) = line.strip_prefix('#') else { continue };
        let c = c.trim();
        if let Some(t) = c.strip_prefix("title:") {
            f.title = t.trim().to_string();
        } else if let Some(e) = c.strip_prefix("expect ") {
            let (head, expected) = if let Some((h, r)) = e.split_once("=>") {
                let r = r.trim();
                let expected = if r.starts_with('{') {
                    let sets = r.split('|').map(set_of).collect::<Result<Vec<_>>>()?;
                    if sets.len() == 1 {
                        Expected::Set(sets.into_iter().next().expect("one set"))
                    } else {
                        let mut sets = sets;
                        sets.sort();
                        Expected::OneOf(sets)
                    }
                } else {
                    Expected::Order(names_of(r))
                };
                (h, expected)
            } else if let Some((h, r)) = e.split_once(" includes ") {
                (h, Expected::Includes(set_of(r)?))
            } else {
                return Err(Error::Invalid(format!("{name}: bad expectation '{e}'")));
            };
            let words: Vec<&str> = head.split_whitespace().collect();
            let (run, rest) = run_of(&words)?;
            if !rest.is_empty() {
                return Err(Error::Invalid(format!("{name}: stray words {rest:?}")));
            }
            f.expectations.push(Expectation { run, expected });
        } else if let Some(e) = c.strip_prefix("figure ") {
            let (head, value) = e
                .rsplit_once(" = ")
                .ok_or_else(|| Error::Invalid(format!("{name}: bad figure '{e}'")))?;
            let words: Vec<&str> = head.split_whitespace().collect();
            let (run, rest) = run_of(&words)?;
            let [round, candidate] = rest.as_slice() else {
                return Err(Error::Invalid(format!("{name}: figure needs round=N and a candidate")));
            };
            let round = round
                .strip_prefix("round=")
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| Error::Invalid(format!("{name}: bad round '{round}'")))?;
            f.figures.push(FigureCheck {
                run,
                round,
                candidate: candidate.clone(),
                value: value.trim().parse()?,
            });
        }
    }
    Ok(f)
}

fn execute(e: &Election, run: &Run) -> Result<Report> {
    let m = Method::parse(&run.method, &Defaults::default())?;
    run_method(&m, e, run.seats.unwrap_or(e.seats()), &run.tie, None)
}

fn render_sets(sets: &[Vec<String>]) -> String {
    sets.iter()
        .map(|s| format!("{{{}}}", s.join(" ")))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Runs every expectation and figure check of a fixture.
pub fn check(f: &Fixture) -> Vec<Check> {
    let e = f.election();
    let mut out = Vec::new();
    for x in &f.expectations {
        let (passed, detail) = match execute(&e, &x.run) {
            Err(err) => (false, format!("error: {err}")),
            Ok(r) => {
                let sets = r.outcome_sets();
                match &x.expected {
                    Expected::Order(v) => (r.winners() == *v, r.winners().join(" ")),
                    Expected::Set(v) => {
                        let mut got = r.winners();
                        got.sort();
                        (got == *v, format!("{{{}}}", got.join(" ")))
                    }
                    Expected::OneOf(v) => (sets == *v, render_sets(&sets)),
                    Expected::Includes(v) => (sets.contains(v), render_sets(&sets)),
                }
            }
        };
        out.push(Check {
            fixture: f.name.to_string(),
            what: format!("{}", x.run),
            passed,
            detail,
        });
    }
    for g in &f.figures {
        let got = execute(&e, &g.run).ok().and_then(|r| {
            r.outcome()
                .and_then(|o| o.rounds.iter().find(|rd| rd.index == g.round))
                .and_then(|rd| rd.score_of(&g.candidate).cloned())
        });
        out.push(Check {
            fixture: f.name.to_string(),
            what: format!("{} round {} {}", g.run, g.round, g.candidate),
            passed: got.as_ref() == Some(&g.value),
            detail: got.map_or_else(|| "missing".into(), |v| v.to_string()),
        });
    }
    out
}

//! Command-line front end: `tally`, `compare`, `audit` and `fixtures`.
//!
//! [`run`] takes the argument vector and explicit streams so the whole
//! program can be driven from tests. Exit status: 0 on success, 1 when a
//! check ran and failed, 2 on usage or validation errors, 3 when a search
//! budget or the tie enumeration limit is exceeded.

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use multiwinner::audit::{
    check_representation, monotonicity_random, representation_random, scan_property, AuditReport, Property, RepresentationCriterion,
};
use multiwinner::fixtures;
use multiwinner::method::{check_max_names, run_method, split_methods, Defaults, Method, Report};
use multiwinner::{parse_election_with, Action, Apportionment, BallotKind, Election, Error, Outcome, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "multiwinner", version, about = "Exact multiwinner election counts, comparisons and audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Options {
    /// Number of seats, overriding the election header.
    #[arg(long)]
    seats: Option<usize>,
    /// Tie policy: lex, seed:<n> or all:<limit>.
    #[arg(long, default_value = "lex")]
    tie: String,
    /// Arithmetic of Phragmén counts: exact or law2dec.
    #[arg(long, default_value = "exact")]
    rounding: String,
    /// Satisfaction function for Thiele methods: prop, strong, weak or custom:w1,w2,...[,repeat-last].
    #[arg(long = "f")]
    f: Option<String>,
    /// Load optimization combination a1|a2,b1|b2,c1|c2.
    #[arg(long = "opt-combo")]
    opt_combo: Option<String>,
    /// Let sequential free-split least-squares rebalance earlier loads downwards.
    #[arg(long = "allow-decrease")]
    allow_decrease: bool,
    /// Reject ballots with more than this many names.
    #[arg(long = "max-names")]
    max_names: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count one election with one method.
    Tally {
        #[arg(long, default_value = "phragmen")]
        method: String,
        /// Print every round with all figures and per-ballot values.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        options: Options,
        /// Election file, `-` for standard input, or `fixtures:<name>`.
        input: String,
    },
    /// Run several methods on one election and show where they diverge.
    Compare {
        /// Comma separated method tokens.
        #[arg(long)]
        methods: String,
        #[command(flatten)]
        options: Options,
        input: String,
    },
    /// Check a proportionality criterion or a method property.
    Audit {
        /// jr, pjr, ejr, phpc:<l>, house:<s_max>, monotonicity[:<trials>],
        /// random-monotonicity:<trials>, random-jr|random-pjr|random-ejr:<seats>[:<trials>], consistency, full-ballots:<n>, party-lists:<trials>.
        #[arg(long)]
        check: String,
        #[arg(long, default_value = "phragmen")]
        method: String,
        /// Committee to check (comma separated); default is the method's outcome.
        #[arg(long)]
        committee: Option<String>,
        /// Second electorate for the consistency check.
        #[arg(long)]
        other: Option<String>,
        /// Ballot kind for scans on generated elections.
        #[arg(long, default_value = "unordered")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        options: Options,
        /// Election input; not needed for scans on generated elections.
        input: Option<String>,
    },
    /// Built-in example elections.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand, Debug)]
enum FixtureAction {
    /// Names and titles.
    List,
    /// Print a fixture as an election file.
    Export {
        name: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Rerun the recorded expectations of one or all fixtures.
    Check { name: Option<String> },
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Budget { .. } | Error::TieOverflow { .. } => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut buf = String::new();
    let status = match cli.command {
        Command::Tally {
            method,
            trace,
            options,
            input,
        } => tally(&method, trace, &options, &input, stdin, &mut buf),
        Command::Compare { methods, options, input } => compare(&methods, &options, &input, stdin, &mut buf),
        Command::Audit {
            check,
            method,
            committee,
            other,
            kind,
            seed,
            options,
            input,
        } => audit(
            &AuditArgs {
                check: &check,
                method: &method,
                committee: committee.as_deref(),
                other: other.as_deref(),
                kind: &kind,
                seed,
            },
            &options,
            input.as_deref(),
            stdin,
            &mut buf,
        ),
        Command::Fixtures { action } => fixtures_cmd(action, &mut buf),
    };
    // Output of a failed command is dropped so that errors never mix with reports.
    match status {
        Ok(code) => {
            let _ = out.write_all(buf.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn defaults(o: &Options) -> std::result::Result<Defaults, Failure> {
    let mut d = Defaults::default();
    if let Some(f) = &o.f {
        d.f = f.parse()?;
    }
    if let Some(c) = &o.opt_combo {
        d.combo = c.parse()?;
    }
    d.combo.allow_decrease |= o.allow_decrease;
    d.rounding = o.rounding.parse()?;
    Ok(d)
}

fn read_input(input: &str, seats: Option<usize>, stdin: &mut dyn Read) -> std::result::Result<Election, Failure> {
    let text = if let Some(name) = input.strip_prefix("fixtures:") {
        fixtures::get(name)
            .ok_or_else(|| usage(format!("no fixture named '{name}' (see `fixtures list`)")))?
            .text
            .to_string()
    } else if input == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(input).map_err(|e| usage(format!("reading {input}: {e}")))?
    };
    Ok(parse_election_with(&text, seats)?)
}

/// Election, method tokens parsed, tie policy: everything validated before counting.
fn prepare(
    tokens: &[String],
    o: &Options,
    input: &str,
    stdin: &mut dyn Read,
) -> std::result::Result<(Election, Vec<Method>, multiwinner::TiePolicy), Failure> {
    let d = defaults(o)?;
    let methods = tokens
        .iter()
        .map(|t| Method::parse(t, &d))
        .collect::<multiwinner::Result<Vec<_>>>()?;
    let policy = o.tie.parse()?;
    let e = read_input(input, o.seats, stdin)?;
    if let Some(m) = o.max_names {
        check_max_names(&e, m)?;
    }
    for m in &methods {
        if !multiwinner::method::accepts(m, e.kind()) {
            return Err(usage(format!("{m} does not accept {} ballots", e.kind())));
        }
    }
    Ok((e, methods, policy))
}

fn exact(x: &Rational) -> String {
    if x.is_integer() {
        x.to_string()
    } else {
        format!("{x} (≈{})", x.approx())
    }
}

fn tally(method: &str, trace: bool, o: &Options, input: &str, stdin: &mut dyn Read, out: &mut String) -> CmdResult {
    let (e, methods, policy) = prepare(&[method.to_string()], o, input, stdin)?;
    let report = run_method(&methods[0], &e, e.seats(), &policy, None)?;
    match o.format {
        Format::Json => {
            let doc = json!({
                "seats": e.seats(),
                "tie": policy.describe(),
                "report": report,
            });
            writeln!(out, "{}", serde_json::to_string(&doc).expect("serializable")).unwrap();
        }
        Format::Text => {
            writeln!(out, "method: {}", report.method()).unwrap();
            writeln!(out, "seats: {}", e.seats()).unwrap();
            writeln!(out, "tie: {}", policy.describe()).unwrap();
            match &report {
                Report::Committee(oc) => render_outcome(oc, trace, out),
                Report::Seats(a) => render_apportionment(a, trace, out),
            }
        }
    }
    Ok(EXIT_OK)
}

fn render_outcome(o: &Outcome, trace: bool, out: &mut String) {
    let what = if o.sequential { "elected (in order)" } else { "elected (set)" };
    writeln!(out, "{what}: {}", o.elected.join(" ")).unwrap();
    if o.alternatives.len() > 1 {
        let sets: Vec<String> = o.alternatives.iter().map(|s| format!("{{{}}}", s.join(" "))).collect();
        writeln!(out, "outcomes under ties: {}", sets.join(" | ")).unwrap();
    }
    if let Some(v) = &o.objective {
        writeln!(out, "objective: {}", exact(v)).unwrap();
    }
    for r in &o.rounds {
        let verb = match r.action {
            Action::Elected => "elects",
            Action::Eliminated => "eliminates",
        };
        match &r.figure {
            Some(f) => writeln!(out, "round {}: {verb} {}, {} = {}", r.index, r.candidate, o.figure_name, exact(f)).unwrap(),
            None => writeln!(out, "round {}: {verb} {}", r.index, r.candidate).unwrap(),
        }
        if trace {
            for s in &r.scores {
                writeln!(out, "    {} {} = {}", o.figure_name, s.candidate, exact(&s.value)).unwrap();
            }
            for (label, v) in o.ballot_labels.iter().zip(&r.ballot_values) {
                writeln!(out, "    {} [{label}] = {}", o.value_name, exact(v)).unwrap();
            }
            if let Some(n) = &r.note {
                writeln!(out, "    note: {n}").unwrap();
            }
        }
    }
    if trace && !o.final_values.is_empty() {
        writeln!(out, "final {}:", o.value_name).unwrap();
        for (label, v) in o.ballot_labels.iter().zip(&o.final_values) {
            writeln!(out, "    [{label}] = {}", exact(v)).unwrap();
        }
    }
    for t in &o.ties {
        writeln!(out, "tie in round {}: {} level, chose {}", t.round, t.tied.join(" "), t.chosen).unwrap();
    }
    for n in &o.notes {
        writeln!(out, "note: {n}").unwrap();
    }
}

fn render_apportionment(a: &Apportionment, trace: bool, out: &mut String) {
    for p in &a.seats {
        writeln!(out, "{}: {}", p.party, p.seats).unwrap();
    }
    if !a.awards.is_empty() {
        writeln!(out, "awards (in order): {}", a.awards.join(" ")).unwrap();
    }
    if a.alternatives.len() > 1 {
        let sets: Vec<String> = a.alternatives.iter().map(|s| s.join(" ")).collect();
        writeln!(out, "distributions under ties: {}", sets.join(" | ")).unwrap();
    }
    if trace {
        for r in &a.rounds {
            let fig = r.figure.as_ref().map(exact).unwrap_or_default();
            writeln!(out, "round {}: {} {fig}", r.index, r.candidate).unwrap();
            for s in &r.scores {
                writeln!(out, "    {} = {}", s.candidate, exact(&s.value)).unwrap();
            }
        }
    }
    for n in &a.notes {
        writeln!(out, "note: {n}").unwrap();
    }
}

fn compare(methods: &str, o: &Options, input: &str, stdin: &mut dyn Read, out: &mut String) -> CmdResult {
    let tokens = split_methods(methods);
    if tokens.len() < 2 {
        return Err(usage("compare needs at least two methods"));
    }
    let (e, methods, policy) = prepare(&tokens, o, input, stdin)?;
    let reports = methods
        .iter()
        .map(|m| run_method(m, &e, e.seats(), &policy, None))
        .collect::<multiwinner::Result<Vec<_>>>()?;
    let columns: Vec<Vec<String>> = reports.iter().map(Report::winners).collect();
    let rows = columns.iter().map(Vec::len).max().unwrap_or(0);
    let differs = |i: usize| {
        let first = columns[0].get(i);
        columns.iter().any(|c| c.get(i) != first)
    };
    let first_divergence = (0..rows).find(|&i| differs(i));
    let mut sets: Vec<Vec<String>> = columns.clone();
    for s in &mut sets {
        s.sort();
    }
    let same_sets = sets.iter().all(|s| *s == sets[0]);
    // Winners not shared by every method, per method.
    let only: Vec<Vec<String>> = sets
        .iter()
        .map(|s| s.iter().filter(|c| !sets.iter().all(|t| t.contains(c))).cloned().collect())
        .collect();
    match o.format {
        Format::Json => {
            let doc = json!({
                "seats": e.seats(),
                "tie": policy.describe(),
                "methods": reports.iter().map(|r| r.method()).collect::<Vec<_>>(),
                "first_divergence": first_divergence.map(|i| i + 1),
                "same_sets": same_sets,
                "not_shared": only,
                "reports": reports,
            });
            writeln!(out, "{}", serde_json::to_string(&doc).expect("serializable")).unwrap();
        }
        Format::Text => {
            let mut header = vec!["seat".to_string()];
            header.extend(reports.iter().map(|r| {
                let seq = r.outcome().is_some_and(|o| o.sequential);
                format!("{}{}", r.method(), if seq { "" } else { " (set)" })
            }));
            let mut table = vec![header];
            for i in 0..rows {
                let mut row = vec![(i + 1).to_string()];
                row.extend(columns.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| "-".into())));
                if differs(i) {
                    row.push("*".into());
                }
                table.push(row);
            }
            let widths: Vec<usize> = (0..table[0].len())
                .map(|j| table.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0))
                .collect();
            for row in &table {
                let cells: Vec<String> = row
                    .iter()
                    .enumerate()
                    .map(|(j, c)| format!("{c:<w$}", w = widths.get(j).copied().unwrap_or(0)))
                    .collect();
                writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
            }
            match first_divergence {
                None => writeln!(out, "no divergence").unwrap(),
                Some(i) => {
                    let picks: Vec<String> = columns.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| "-".into())).collect();
                    writeln!(out, "first divergence: seat {} = {}", i + 1, picks.join(" vs ")).unwrap();
                }
            }
            if same_sets {
                writeln!(out, "same elected sets").unwrap();
            } else {
                let parts: Vec<String> = only
                    .iter()
                    .map(|o| if o.is_empty() { "-".to_string() } else { o.join(" ") })
                    .collect();
                writeln!(out, "elected sets differ: {}", parts.join(" vs ")).unwrap();
            }
        }
    }
    Ok(EXIT_OK)
}

struct AuditArgs<'a> {
    check: &'a str,
    method: &'a str,
    committee: Option<&'a str>,
    other: Option<&'a str>,
    kind: &'a str,
    seed: u64,
}

fn number<T: std::str::FromStr>(arg: Option<&str>, default: Option<T>, what: &str) -> std::result::Result<T, Failure> {
    match (arg, default) {
        (Some(a), _) => a.parse().map_err(|_| usage(format!("{what} must be a positive integer, got '{a}'"))),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(usage(format!("missing {what}"))),
    }
}

fn audit(a: &AuditArgs, o: &Options, input: Option<&str>, stdin: &mut dyn Read, out: &mut String) -> CmdResult {
    let (name, arg) = match a.check.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (a.check, None),
    };
    let need_input = || input.ok_or_else(|| usage(format!("audit {name} needs an election")));
    let report: AuditReport = match name {
        "jr" | "pjr" | "ejr" | "phpc" => {
            let c: RepresentationCriterion = a.check.parse()?;
            let (e, methods, policy) = prepare(&[a.method.to_string()], o, need_input()?, stdin)?;
            let committee: Vec<String> = match a.committee {
                Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
                None => {
                    let mut w = run_method(&methods[0], &e, e.seats(), &policy, None)?.winners();
                    w.sort();
                    w
                }
            };
            check_representation(&e, &committee, c)?
        }
        "random-monotonicity" => {
            let trials = number(arg, Some(2000), "trial count")?;
            let kind: BallotKind = a.kind.parse()?;
            let d = defaults(o)?;
            let m = Method::parse(a.method, &d)?;
            let policy = o.tie.parse()?;
            monotonicity_random(&m, kind, trials, a.seed, &policy)?
        }
        "random-jr" | "random-pjr" | "random-ejr" => {
            let c: RepresentationCriterion = name["random-".len()..].parse()?;
            let (seats, trials) = match arg.map(|r| r.split_once(':').map_or((r, None), |(a, b)| (a, Some(b)))) {
                Some((s, t)) => (number(Some(s), None, "seat count")?, number(t, Some(1000), "trial count")?),
                None => return Err(usage(format!("{name} needs a seat count: {name}:<seats>[:<trials>]"))),
            };
            let kind: BallotKind = a.kind.parse()?;
            let m = Method::parse(a.method, &defaults(o)?)?;
            representation_random(&m, c, kind, seats, trials, a.seed, &o.tie.parse()?)?
        }
        _ => {
            let property = match name {
                "house" => Property::HouseMonotonicity {
                    s_max: number(arg, Some(5), "seat bound")?,
                },
                "monotonicity" => Property::CandidateMonotonicity {
                    trials: number(arg, Some(100_000), "trial count")?,
                    seed: a.seed,
                },
                "full-ballots" => Property::FullBallotInvariance {
                    n: number(arg, Some(10), "ballot count")?,
                },
                "party-lists" => Property::PartyListReduction {
                    trials: number(arg, Some(1000), "trial count")?,
                    seed: a.seed,
                },
                "consistency" => {
                    let other = a.other.ok_or_else(|| usage("consistency needs --other <election>"))?;
                    Property::Consistency {
                        other: read_input(other, o.seats, &mut std::io::empty())?,
                    }
                }
                _ => return Err(usage(format!("unknown check '{}'", a.check))),
            };
            let (e, methods, policy) = match input {
                Some(i) => prepare(&[a.method.to_string()], o, i, stdin)?,
                // Party list scans generate their own elections.
                None if name == "party-lists" => {
                    let d = defaults(o)?;
                    let e = Election::from_lines(BallotKind::Unordered, 1, &[(1, "P1")])?;
                    (e, vec![Method::parse(a.method, &d)?], o.tie.parse()?)
                }
                None => return Err(usage(format!("audit {name} needs an election"))),
            };
            scan_property(&methods[0], &e, &property, &policy)?
        }
    };
    match o.format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string(&report).expect("serializable")).unwrap();
        }
        Format::Text => render_audit(&report, out),
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn render_audit(r: &AuditReport, out: &mut String) {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict} {}", r.check).unwrap();
    writeln!(out, "examined: {}, violations: {}", r.examined, r.violations).unwrap();
    for (i, w) in r.witnesses.iter().enumerate() {
        writeln!(out, "witness {}: {}", i + 1, w.description).unwrap();
        if let (Some(b), Some(v)) = (&w.bound, &w.value) {
            writeln!(out, "    bound {}, value {}", exact(b), exact(v)).unwrap();
        }
        for e in &w.elections {
            for line in e.lines() {
                writeln!(out, "    | {line}").unwrap();
            }
        }
    }
    for n in &r.notes {
        writeln!(out, "note: {n}").unwrap();
    }
}

fn fixtures_cmd(action: FixtureAction, out: &mut String) -> CmdResult {
    match action {
        FixtureAction::List => {
            for f in fixtures::all() {
                writeln!(out, "{:<18} {}", f.name, f.title).unwrap();
            }
            Ok(EXIT_OK)
        }
        FixtureAction::Export { name, format } => {
            let f = fixtures::get(&name).ok_or_else(|| usage(format!("no fixture named '{name}'")))?;
            match format {
                Format::Text => out.push_str(f.text),
                Format::Json => out.push_str(&f.election().to_json()),
            }
            Ok(EXIT_OK)
        }
        FixtureAction::Check { name } => {
            let list = match name {
                Some(n) => vec![fixtures::get(&n).ok_or_else(|| usage(format!("no fixture named '{n}'")))?],
                None => fixtures::all(),
            };
            let mut failed = 0;
            for f in &list {
                for c in fixtures::check(f) {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    writeln!(out, "{tag} {} {}: {}", c.fixture, c.what, c.detail).unwrap();
                    failed += usize::from(!c.passed);
                }
            }
            writeln!(out, "{failed} failed").unwrap();
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

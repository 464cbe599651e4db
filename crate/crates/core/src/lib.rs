//! Exact multiwinner election methods: Phragmén's and Thiele's families,
//! their load-optimization variants, classical reference methods and
//! instance-level audits.

pub mod audit;
pub mod election;
pub mod error;
pub mod fixtures;
mod flow;
pub mod method;
pub mod numeric;
pub mod outcome;
pub mod phragmen;
pub mod reference;
mod search;
pub mod thiele;
pub mod tie;
pub mod variants;

pub use election::{approval_tally, first_choice_tally, parse_election, parse_election_with, BallotKind, Election};
pub use error::{Error, Result};
pub use numeric::{Rational, RoundingPolicy};
pub use outcome::{Action, Apportionment, Outcome, PartySeats, Round, Score};
pub use search::DEFAULT_BUDGET;
pub use thiele::SatisfactionFunction;
pub use tie::{break_tie, TieEvent, TiePolicy, TieResolution};

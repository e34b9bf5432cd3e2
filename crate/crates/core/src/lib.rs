//! Cirquent calculus for computability logic: syntax with clustering, game
//! semantics over finite static games, a proof checker, the purification
//! rewriter, a decision procedure and a proof-to-strategy compiler.

pub mod analysis;
pub mod calculus;
pub mod cirquent;
pub mod corpus;
pub mod game;
pub mod mixed;
pub mod parse;
pub mod proof;
pub mod prover;
pub mod purify;
pub mod random;
pub mod rank;
pub mod strategy;

pub use cirquent::{ChoiceKind, Cirquent, Cluster, Letter, LetterKind, Literal, ParKind, Polarity};
pub use parse::{parse_cirquent, ParseError};

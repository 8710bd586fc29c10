//! Non-coercive extortion calculus for finite normal-form games.
//!
//! A binding threat ("pay me a fee, or I pay a co-player whenever they play a
//! given strategy") turns a simultaneous game into a two-stage one. This crate
//! builds the induced Accept and Decline games, decides whether the extorted
//! player pays, computes the open bounds on fee and payment for the three role
//! assignments, and classifies all strict-ordinal 2x2 games by susceptibility.

pub mod demo;
pub mod engine;
pub mod error;
pub mod files;
pub mod game;
pub mod rational;
pub mod taxonomy;

pub use engine::{
    analyze, BindingThreat, Bound, BoundSide, Condition, Decision, ExtortionReport,
    ManipulatedGame, Roles, Scenario, ThreatRequest,
};
pub use error::{EngineError, FormatError, GameError, ParseRationalError, ScanError};
pub use game::{make_game, BestResponse, Game, Profile};
pub use rational::Rational;

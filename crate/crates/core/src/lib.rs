//! Multiplayer dueling bandits over delayed message-passing graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`env`]: preference matrices, Bernoulli duels, Condorcet analysis and
//!   ballot ingestion.
//! - [`graph`]: communication topologies, hop distances, power graphs and
//!   clique analytics.
//! - [`netsim`]: the round-synchronous message bus with hop delays and a
//!   decay radius.
//! - [`policies`]: single-player base algorithms (RUCB, RMED2FH) behind the
//!   [`policies::BasePolicy`] trait.
//! - [`multiplayer`]: leader election, Follow-Your-Leader and
//!   message-passing RUCB.
//! - [`theory`]: closed-form lower/upper bound evaluators.
//! - [`harness`]: experiment configuration, seeded runs, CSV and SVG output.

pub mod env;
pub mod error;
pub mod graph;
pub mod harness;
pub mod multiplayer;
pub mod netsim;
pub mod policies;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};

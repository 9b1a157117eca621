//! Graph derangements and the Territorial Raider game.
//!
//! A graph admits a derangement exactly when the raider game on it has a
//! strict Nash equilibrium (for any defended share `h < 1`), and the strict
//! equilibria are precisely the derangements. This crate decides, builds
//! and counts derangements, evaluates the game exactly, enumerates strict
//! equilibria, and checks the correspondence on concrete graphs.

pub mod derangement;
pub mod error;
pub mod exp3;
pub mod game;
pub mod graph;
pub mod mapfile;
pub mod nash;
pub mod permanent;
pub mod rational;

pub use derangement::{
    count_derangements, derangement_upper_bound, find_derangement, hall_witness, max_matching_size,
    q_factor, Component, Derangement, HallWitness, QFactor,
};
pub use error::{Error, Result};
pub use exp3::{exp3_init, exp3_round, exp3_run, LearningDocument, LearningOutcome, LearningRun};
pub use game::{deviations, payoff, payoff_vector, Deviation, GameParams, PayoffVector, Profile};
pub use graph::{generate, parse_edge_list, random_connected, Family, Graph, VertexSet};
pub use nash::{
    derangement_to_profile, enumerate_strict_nash, enumerate_strict_nash_with, is_strict_nash,
    lemma_conditions, profile_to_derangement, verify_equivalence, EnumerateOptions,
    EquivalenceReport, Verdict,
};
pub use rational::{format_rational, parse_rational, parse_rational_list, Rational};

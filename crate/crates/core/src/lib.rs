//! Individual-based stability for marriage and roommate games with ties and
//! incomplete preference lists.
//!
//! * [`model`]: players, preference lists, games, the raise operation and a
//!   seeded generator.
//! * [`matching`]: matchings, their file format and exhaustive enumeration.
//! * [`stability`]: verifiers for IR, NS, IS, CNS, CIS, core and strict core,
//!   each producing a witness on failure.
//! * [`solvers`]: constructive algorithms, exhaustive oracles and deviation
//!   dynamics.
//! * [`graph_matching`]: blossom maximum matching and the graph
//!   constructions behind the reductions.
//! * [`reductions`]: hardness gadgets as instance generators.
//! * [`cli`]: the `indstab` command line.

pub mod cli;
pub mod graph_matching;
pub mod matching;
pub mod model;
pub mod reductions;
pub mod solvers;
pub mod stability;

pub use matching::Matching;
pub use model::{Game, GameKind, PlayerId, PreferenceList};
pub use stability::{Concept, DeviationWitness};

//! Random simple temporal graphs (RSTGs) and the machinery to measure them.
//!
//! A temporal graph is a simple graph whose edges carry time stamps; a path
//! is *increasing* when its stamps strictly increase along the path. This
//! crate provides:
//!
//! * [`graph`]: the stamped-edge data model, stamp windows and RSTG sampling,
//! * [`reach`]: forward/backward increasing-path reachability and the
//!   all-pairs reachability relation,
//! * [`clique`]: temporal clique tests, exact and heuristic maximum temporal
//!   clique, clique census and the subcritical clique-size bound,
//! * [`branching`]: the temporal branching process on the `n`-ary tree, its
//!   closed-form moments and bounds, the random-walk prefix experiment and the
//!   coupled foremost-tree chains.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, statistics and
//! the experiment harness live in the `rstg` crate.
#![no_std]
#![deny(missing_docs)]

extern crate alloc;

pub mod bitset;
pub mod branching;
pub mod clique;
mod error;
pub mod graph;
mod math;
pub mod reach;

pub use error::{Error, Result};
pub use graph::{generate_rstg, GraphParams, StampedEdge, TemporalGraph, TimeWindow, Vertex};

/// Deterministic RNG used by every seeded entry point of this crate.
pub type SeedRng = rand_chacha::ChaCha8Rng;

/// Builds the crate RNG from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeedRng {
    use rand::SeedableRng;
    SeedRng::seed_from_u64(seed)
}

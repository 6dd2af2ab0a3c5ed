use alloc::vec::Vec;

use crate::graph::Vertex;

/// Errors raised by graph construction, queries and samplers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    /// A vertex id is not in `[0, n)`.
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange {
        /// Offending vertex.
        vertex: Vertex,
        /// Vertex count.
        n: usize,
    },
    /// A vertex appears twice in a list that must be duplicate free.
    #[error("vertex {0} listed more than once")]
    DuplicateVertex(Vertex),
    /// An edge joins a vertex to itself.
    #[error("edge #{index} is a self-loop on vertex {vertex}")]
    SelfLoop {
        /// Position of the edge in the input.
        index: usize,
        /// Looping vertex.
        vertex: Vertex,
    },
    /// Two edges join the same unordered pair.
    #[error("edge #{index} duplicates the pair {{{u},{v}}}")]
    DuplicatePair {
        /// Position of the second occurrence in the input.
        index: usize,
        /// Smaller endpoint.
        u: Vertex,
        /// Larger endpoint.
        v: Vertex,
    },
    /// Two edges carry the same tie-break id.
    #[error("edge #{index} reuses edge id {id}")]
    DuplicateEdgeId {
        /// Position of the second occurrence in the input.
        index: usize,
        /// Reused id.
        id: usize,
    },
    /// A stamp is not finite or not strictly inside `(0, 1)`.
    #[error("edge #{index} has stamp {stamp}, expected a value strictly inside (0,1)")]
    StampOutOfRange {
        /// Position of the edge in the input.
        index: usize,
        /// Offending stamp.
        stamp: f64,
    },
    /// A sampler explored more nodes or steps than allowed.
    #[error("budget of {budget} exceeded")]
    BudgetExceeded {
        /// Configured budget.
        budget: u64,
    },
    /// The exact clique solver ran out of search nodes.
    #[error("clique search budget of {budget} nodes exceeded (incumbent size {})", incumbent.len())]
    CliqueBudgetExceeded {
        /// Configured node budget.
        budget: u64,
        /// Best clique found before giving up, sorted ascending.
        incumbent: Vec<Vertex>,
    },
}

/// Crate result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

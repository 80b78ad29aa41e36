//! Exact maximum independent set solving with branching rules that are
//! synthesized on the fly as optimal weighted set covers.
//!
//! The pipeline for one branching step is: pick a region of the current graph,
//! tabulate its optimal local configurations per boundary configuration
//! ([`branching_table`]), generate candidate clauses ([`clause`]), and choose
//! the clause subset with the smallest branching factor ([`optimizer`]) by
//! repeatedly solving weighted set covers ([`wmsc`]). [`engine`] drives the
//! recursion; [`bench`], [`generators`] and [`io`] back the command line tool.

pub mod bench;
pub mod branching_table;
pub mod clause;
pub mod cli;
pub mod engine;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod optimizer;
pub mod region;
pub mod wmsc;

pub use branching_table::{AlphaTensor, BranchingTable};
pub use clause::{CandidateClause, Clause, Dnf};
pub use engine::{mis_branch, SolveConfig, SolveReport, SolverKind};
pub use error::{Error, Result};
pub use graph::{Graph, Measure, VertexSet};
pub use optimizer::{find_gamma, minimize_gamma, OptimalBranchingResult};
pub use region::Region;

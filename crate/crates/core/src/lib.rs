//! h-hop node coloring on general graphs and unit-disk grids: the distributed
//! SERENA heuristic, periodic grid patterns, an exact branch-and-bound
//! solver, and the reduction from 1-hop to h-hop coloring.

pub mod bench;
pub mod cli;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod pattern;
pub mod reduction;
pub mod serena;
pub mod topology;

pub use error::{Error, Result};
pub use exact::{exact_chromatic, firstfit, Mode, SolveResult, DEFAULT_BUDGET};
pub use graph::{
    find_conflict, is_valid_coloring, is_valid_strategic, khop_neighbors, power_graph, Color,
    Coloring, Conflict, Graph, NodeId,
};
pub use pattern::{builtin_pattern, builtin_tiling, color_grid_by_pattern, ColorPattern, Tiling};
pub use reduction::{build_tree_t, reduce, verify_equivalence, verify_lemmas, ReducedGraph};
pub use serena::{run_serena, PriorityScheme, SchemeKind, SerenaOutcome, SerenaState};
pub use topology::{build_gathering_tree, build_grid, Grid, GridSpec, Range, Tree};

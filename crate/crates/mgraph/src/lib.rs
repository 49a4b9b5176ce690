//! Exact spanning-tree enumeration for the self-similar graph family M(t).
//!
//! M(0) is a single edge; M(t) joins two copies of M(t-1) with two new
//! edges between designated hub vertices. The family is outerplanar,
//! triangle-free, assortative, and small-world (2^(t+1) vertices but
//! diameter linear in t), with an exactly exponential cumulative degree
//! law.
//!
//! The crate computes the number of spanning trees `s(t)` of M(t) by
//! three mutually independent exact routes and verifies they agree:
//!
//! * a two-term integer recurrence (`s(t) = 4 s(t-1)^2 - 2 s(t-1) s(t-2)^2`),
//! * a product of doubling ratios whose closed form lives in Q(sqrt 2)
//!   and is evaluated there exactly, with the sqrt(2) component required
//!   to cancel to zero,
//! * the matrix-tree theorem: an exact fraction-free determinant of the
//!   reduced Laplacian of the explicitly constructed graph.
//!
//! The same machinery counts the spanning two-tree forests separating
//! the hub pair (via vertex identification), extends the determinant
//! check to larger levels modulo primes, estimates the spanning-tree
//! entropy `h = lim ln s(t) / |V_t| ~ 0.657` to arbitrary precision, and
//! certifies outerplanarity constructively from the maintained boundary
//! cycle.
//!
//! # Quick start
//!
//! ```
//! use mgraph::{analysis, count, kirchhoff, MGraph};
//!
//! let g = MGraph::build(3)?;
//! assert_eq!(g.vertex_count(), 16);
//! assert_eq!(g.edge_count(), 22);
//!
//! // three routes to the same exact count
//! let by_recurrence = count::spanning_tree_count(3);
//! let by_product = count::spanning_tree_count_product(3)?;
//! let by_determinant = kirchhoff::count_trees(&g)?;
//! assert_eq!(by_recurrence.to_string(), "10752");
//! assert_eq!(by_product, by_recurrence);
//! assert_eq!(by_determinant, by_recurrence);
//!
//! assert!(analysis::certify_outerplanar(&g));
//! # Ok::<(), mgraph::Error>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `mgraph` binary wraps
//! the same operations as subcommands (`build`, `count`, `verify`,
//! `analyze`, `entropy`).

#![forbid(unsafe_code)]

pub mod analysis;
pub mod cli;
pub mod count;
pub mod error;
pub mod fixed;
pub mod graph;
pub mod kirchhoff;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{ExportFormat, MGraph, VertexId};

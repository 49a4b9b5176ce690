//! Construction of the graph family M(t).
//!
//! M(0) is a single edge. M(t) is two disjoint copies of M(t-1) joined by
//! two new edges between the designated hub pairs of the copies. Under the
//! canonical labeling, copy A keeps its indices and copy B is copy A
//! shifted by 2^t, so M(t) has 2^(t+1) vertices and 3*2^t - 2 edges.
//!
//! The designated hub pair of M(t) is the first of the two new cross edges,
//! `(0, 2^t)`. Both hubs are adjacent, lie on the outer boundary, and have
//! maximum degree t+1. Carrying a cross edge forward (rather than one of
//! the pairs internal to a copy) is what keeps the family outerplanar: the
//! hub edge of each copy lies on the copy's outer cycle, so the boundaries
//! can be spliced through the new edges without crossings.
//!
//! The outer boundary is maintained explicitly as a circular vertex order:
//! `boundary(M(0)) = [0, 1]` and at each join
//! `boundary(M(t)) = boundary ++ reverse(boundary + 2^t)`.
//! The splice starts at hub 0, ends at hub 2^t, and closes the cycle
//! through the hub edge itself; `analysis::certify_boundary` validates it.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense vertex index in `[0, 2^(t+1))`.
pub type VertexId = u32;

/// Default cap on explicit construction (2^25 ~ 33M vertices at t=24).
pub const DEFAULT_MAX_T: u32 = 24;

/// Hard cap: vertex ids are u32 and counts use `1u64 << (t+1)`.
const HARD_MAX_T: u32 = 30;

/// Largest level allowed for explicit construction. `MGRAPH_MAX_T`
/// overrides the default resource limit.
pub fn max_build_t() -> u32 {
    match std::env::var("MGRAPH_MAX_T") {
        Ok(v) => v.parse().map(|t: u32| t.min(HARD_MAX_T)).unwrap_or(DEFAULT_MAX_T),
        Err(_) => DEFAULT_MAX_T,
    }
}

/// Export formats understood by [`MGraph::export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// One `u v` line per edge with `u < v`, ascending, LF-terminated.
    EdgeList,
    /// Graphviz `graph` with hub and boundary annotations.
    Dot,
    /// JSON object with vertex count, hub pair, boundary, and edges.
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "edge-list" => Ok(ExportFormat::EdgeList),
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Immutable labeled instance of M(t).
#[derive(Debug, Clone)]
pub struct MGraph {
    t: u32,
    adj: Vec<Vec<VertexId>>,
    hub_pair: (VertexId, VertexId),
    boundary: Vec<VertexId>,
}

#[derive(Serialize)]
struct JsonExport<'a> {
    t: u32,
    vertex_count: u64,
    edge_count: u64,
    hub_pair: (VertexId, VertexId),
    boundary: &'a [VertexId],
    edges: Vec<(VertexId, VertexId)>,
}

impl MGraph {
    /// Builds the canonical labeled M(t).
    ///
    /// Rejects `t` above the configured resource limit (default 24,
    /// override with `MGRAPH_MAX_T`).
    pub fn build(t: u32) -> Result<MGraph> {
        let limit = max_build_t();
        if t > limit {
            return Err(Error::ResourceLimit { t, limit });
        }
        Ok(Self::build_unchecked(t))
    }

    fn build_unchecked(t: u32) -> MGraph {
        // M(0): one edge, hubs (0, 1), boundary [0, 1].
        let mut adj: Vec<Vec<VertexId>> = vec![vec![1], vec![0]];
        let mut hub = (0u32, 1u32);
        let mut boundary = vec![0u32, 1u32];

        for level in 1..=t {
            let offset = 1u32 << level;
            let n = adj.len();

            // Copy B = copy A shifted by the offset; shifted sorted lists
            // stay sorted.
            for v in 0..n {
                let shifted: Vec<VertexId> = adj[v].iter().map(|&w| w + offset).collect();
                adj.push(shifted);
            }

            // Two cross edges between corresponding hubs of the copies.
            let (a, b) = hub;
            for &(u, v) in &[(a, a + offset), (b, b + offset)] {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
            for &v in &[a, b, a + offset, b + offset] {
                adj[v as usize].sort_unstable();
            }

            // Boundary splice: walk copy A from hub a to hub b, then copy B
            // from b's mirror back to a's mirror. The two cross edges and
            // the closing hub edge all land on the new outer cycle.
            let mirrored: Vec<VertexId> =
                boundary.iter().rev().map(|&v| v + offset).collect();
            boundary.extend(mirrored);

            // The first cross edge becomes the next hub pair.
            hub = (a, a + offset);
        }

        MGraph { t, adj, hub_pair: hub, boundary }
    }

    /// Iteration index this graph was built for.
    pub fn t(&self) -> u32 {
        self.t
    }

    /// Number of vertices, `2^(t+1)`.
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges, `3*2^t - 2`.
    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|nb| nb.len() as u64).sum::<u64>() / 2
    }

    /// The designated adjacent maximum-degree pair, `(0, 2^t)`.
    pub fn hub_pair(&self) -> (VertexId, VertexId) {
        self.hub_pair
    }

    /// Outer-face circular vertex order.
    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| {
            let u = u as VertexId;
            nb.iter().copied().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// True if a single BFS from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0u32]);
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// Serializes the graph in the given format.
    pub fn export(&self, format: ExportFormat) -> Vec<u8> {
        match format {
            ExportFormat::EdgeList => {
                let mut out = String::new();
                for (u, v) in self.edges() {
                    let _ = writeln!(out, "{u} {v}");
                }
                out.into_bytes()
            }
            ExportFormat::Dot => {
                let mut out = String::new();
                let _ = writeln!(out, "graph m{} {{", self.t);
                let boundary = self
                    .boundary
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(
                    out,
                    "  graph [t={} hub_a={} hub_b={} boundary=\"{}\"];",
                    self.t, self.hub_pair.0, self.hub_pair.1, boundary
                );
                let _ = writeln!(
                    out,
                    "  {} [shape=doublecircle];\n  {} [shape=doublecircle];",
                    self.hub_pair.0, self.hub_pair.1
                );
                for (u, v) in self.edges() {
                    let _ = writeln!(out, "  {u} -- {v};");
                }
                let _ = writeln!(out, "}}");
                out.into_bytes()
            }
            ExportFormat::Json => {
                let doc = JsonExport {
                    t: self.t,
                    vertex_count: self.vertex_count() as u64,
                    edge_count: self.edge_count(),
                    hub_pair: self.hub_pair,
                    boundary: &self.boundary,
                    edges: self.edges().collect(),
                };
                let mut bytes = serde_json::to_vec_pretty(&doc).expect("serializable");
                bytes.push(b'\n');
                bytes
            }
        }
    }

    /// Test hook: drop one edge. Used by the verifier's fault injection.
    pub(crate) fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj[u as usize].retain(|&w| w != v);
        self.adj[v as usize].retain(|&w| w != u);
    }

    /// Test hook: insert an edge, keeping neighbor lists sorted.
    pub(crate) fn add_edge(&mut self, u: VertexId, v: VertexId) {
        if let Err(pos) = self.adj[u as usize].binary_search(&v) {
            self.adj[u as usize].insert(pos, v);
        }
        if let Err(pos) = self.adj[v as usize].binary_search(&u) {
            self.adj[v as usize].insert(pos, u);
        }
    }

    /// Test hook: drop the highest-indexed edge.
    pub(crate) fn remove_last_edge(&mut self) {
        if let Some((u, v)) = self.edges().last() {
            self.remove_edge(u, v);
        }
    }
}

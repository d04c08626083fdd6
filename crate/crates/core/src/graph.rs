//! Undirected graphs, h-hop neighborhoods and coloring validity.
//!
//! Nodes are dense integer ids `0..n`. Adjacency lists are kept sorted so
//! every traversal in the crate is deterministic.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::topology::Tree;

pub type NodeId = usize;
pub type Color = usize;

/// Simple undirected graph: symmetric adjacency, no self-loops, no parallel edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph on `n` nodes. Duplicate edges are merged; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adj.len()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u < self.adj.len()
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Inserts an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::invalid(format!("self-loop on node {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    /// Removes an edge; returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub(crate) fn check_node(&self, u: NodeId) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::UnknownNode(u))
        }
    }

    /// Hop distances from `src`, truncated at `max_depth` (`None` = unbounded).
    /// Unreached nodes are `None`.
    pub fn distances_from(&self, src: NodeId, max_depth: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            if max_depth.is_some_and(|m| d >= m) {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Nodes within `h` hops of `u` (excluding `u`) with their distance, in
    /// breadth-first order.
    pub(crate) fn ball(&self, u: NodeId, h: usize) -> Vec<(NodeId, usize)> {
        let mut seen = BTreeSet::from([u]);
        let mut frontier = vec![u];
        let mut out = Vec::new();
        for depth in 1..=h {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &self.adj[x] {
                    if seen.insert(y) {
                        next.push(y);
                        out.push((y, depth));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || self.distances_from(0, None).iter().all(Option::is_some)
    }
}

fn check_h(h: usize) -> Result<()> {
    if h == 0 {
        Err(Error::invalid("h must be a positive integer"))
    } else {
        Ok(())
    }
}

/// The conflict set N(u): every node at hop distance 1..=h from `u`, sorted by id.
pub fn khop_neighbors(g: &Graph, u: NodeId, h: usize) -> Result<Vec<NodeId>> {
    g.check_node(u)?;
    check_h(h)?;
    let mut out: Vec<NodeId> = g.ball(u, h).into_iter().map(|(v, _)| v).collect();
    out.sort_unstable();
    Ok(out)
}

/// The h-th power of `g`: same nodes, an edge between every pair at distance ≤ h.
pub fn power_graph(g: &Graph, h: usize) -> Result<Graph> {
    check_h(h)?;
    if h == 1 {
        return Ok(g.clone());
    }
    let adj = g
        .nodes()
        .map(|u| {
            let mut ns: Vec<NodeId> = g.ball(u, h).into_iter().map(|(v, _)| v).collect();
            ns.sort_unstable();
            ns
        })
        .collect();
    Ok(Graph { adj })
}

/// Partial or total assignment of colors to nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<Option<Color>>,
}

impl Coloring {
    pub fn uncolored(n: usize) -> Self {
        Coloring {
            colors: vec![None; n],
        }
    }

    pub fn from_colors(colors: Vec<Color>) -> Self {
        Coloring {
            colors: colors.into_iter().map(Some).collect(),
        }
    }

    pub fn from_partial(colors: Vec<Option<Color>>) -> Self {
        Coloring { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, u: NodeId) -> Option<Color> {
        self.colors.get(u).copied().flatten()
    }

    pub fn set(&mut self, u: NodeId, c: Color) {
        self.colors[u] = Some(c);
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Option<Color>)> + '_ {
        self.colors.iter().copied().enumerate()
    }

    pub fn first_uncolored(&self) -> Option<NodeId> {
        self.colors.iter().position(Option::is_none)
    }

    pub fn is_total(&self) -> bool {
        self.first_uncolored().is_none()
    }

    /// Colors of a total coloring, or the first uncolored node.
    pub fn to_total(&self) -> Result<Vec<Color>> {
        self.colors
            .iter()
            .enumerate()
            .map(|(u, c)| c.ok_or(Error::IncompleteColoring(u)))
            .collect()
    }

    /// Distinct colors in use.
    pub fn used_colors(&self) -> BTreeSet<Color> {
        self.colors.iter().flatten().copied().collect()
    }

    pub fn color_count(&self) -> usize {
        self.used_colors().len()
    }
}

/// Two nodes within h hops sharing a color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub u: NodeId,
    pub v: NodeId,
    pub color: Color,
    pub distance: usize,
}

impl std::fmt::Display for Conflict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "nodes {} and {} are {} hop(s) apart and share color {}",
            self.u, self.v, self.distance, self.color
        )
    }
}

fn check_len(g: &Graph, c: &Coloring) -> Result<()> {
    if c.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "coloring covers {} nodes but the graph has {}",
            c.len(),
            g.node_count()
        )));
    }
    Ok(())
}

/// First conflicting pair among colored nodes, ordered by smallest `u` then
/// smallest `v`. Uncolored nodes are ignored, so this also checks partial
/// colorings.
pub fn find_partial_conflict(g: &Graph, c: &Coloring, h: usize) -> Result<Option<Conflict>> {
    check_h(h)?;
    check_len(g, c)?;
    for u in g.nodes() {
        let Some(cu) = c.get(u) else { continue };
        let hit = g
            .ball(u, h)
            .into_iter()
            .filter(|&(v, _)| v > u && c.get(v) == Some(cu))
            .min();
        if let Some((v, distance)) = hit {
            return Ok(Some(Conflict {
                u,
                v,
                color: cu,
                distance,
            }));
        }
    }
    Ok(None)
}

/// First conflicting pair of a total coloring. An incomplete coloring is an
/// error, distinct from an invalid one.
pub fn find_conflict(g: &Graph, c: &Coloring, h: usize) -> Result<Option<Conflict>> {
    check_len(g, c)?;
    if let Some(u) = c.first_uncolored() {
        return Err(Error::IncompleteColoring(u));
    }
    find_partial_conflict(g, c, h)
}

pub fn is_valid_coloring(g: &Graph, c: &Coloring, h: usize) -> Result<bool> {
    Ok(find_conflict(g, c, h)?.is_none())
}

/// Why a coloring fails the data-gathering (strategic) validity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategicViolation {
    Conflict(Conflict),
    /// A child whose color is not strictly above its parent's.
    ParentOrder {
        child: NodeId,
        parent: NodeId,
        child_color: Color,
        parent_color: Color,
    },
}

impl std::fmt::Display for StrategicViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StrategicViolation::Conflict(c) => c.fmt(f),
            StrategicViolation::ParentOrder {
                child,
                parent,
                child_color,
                parent_color,
            } => write!(
                f,
                "node {child} has color {child_color}, not above its parent {parent} (color {parent_color})"
            ),
        }
    }
}

pub fn find_strategic_violation(
    g: &Graph,
    c: &Coloring,
    h: usize,
    tree: &Tree,
) -> Result<Option<StrategicViolation>> {
    if tree.node_count() != g.node_count() {
        return Err(Error::NotSpanning(format!(
            "tree covers {} nodes, graph has {}",
            tree.node_count(),
            g.node_count()
        )));
    }
    if let Some(conflict) = find_conflict(g, c, h)? {
        return Ok(Some(StrategicViolation::Conflict(conflict)));
    }
    for child in g.nodes() {
        if let Some(parent) = tree.parent(child) {
            let (cc, pc) = (c.get(child).unwrap(), c.get(parent).unwrap());
            if cc <= pc {
                return Ok(Some(StrategicViolation::ParentOrder {
                    child,
                    parent,
                    child_color: cc,
                    parent_color: pc,
                }));
            }
        }
    }
    Ok(None)
}

/// h-hop validity plus: every non-root node is colored strictly above its parent.
pub fn is_valid_strategic(g: &Graph, c: &Coloring, h: usize, tree: &Tree) -> Result<bool> {
    Ok(find_strategic_violation(g, c, h, tree)?.is_none())
}

//! Round-synchronous simulation of SERENA, a distributed 3-hop node coloring
//! protocol.
//!
//! Every round each node sends one Color message to its 1-hop neighbors,
//! receives theirs and processes them. A message carries what the sender
//! knows about itself and about nodes up to `h - 1` hops away (priority,
//! distance, color if known), so each node learns about its whole conflict
//! set N(u) (nodes within `h` hops).
//!
//! Rounds `1..=h` are neighbor discovery: hop distances and priorities
//! spread one hop per round. From round `h + 1` on, after processing its
//! inbox a node colors itself when
//!
//! * R1: no node of N(u) with a higher priority is still uncolored, as far as
//!   `u` knows (an unheard-of color counts as uncolored), and
//! * R2: it takes the smallest color not known to be used in N(u).
//!
//! In strategic mode a node also waits for its parent's color and picks a
//! color strictly above it. Priorities are ordered by tree depth first so that
//! parents always outrank their children.
//!
//! Reported rounds = `h` discovery rounds + coloring rounds up to the one in
//! which the last node colors itself.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, Graph, NodeId};
use crate::topology::{NodeCoord, Tree};

/// Lexicographic priority key; larger wins. The address makes it unique.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Priority {
    pub primary: i64,
    pub secondary: i64,
    pub address: NodeId,
}

/// Priority scheme family, without the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Prio1Line,
    Prio1Random,
    Prio2Line,
    Prio2Random,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Prio1Line,
        SchemeKind::Prio1Random,
        SchemeKind::Prio2Line,
        SchemeKind::Prio2Random,
    ];

    pub fn is_random(self) -> bool {
        matches!(self, SchemeKind::Prio1Random | SchemeKind::Prio2Random)
    }

    pub fn with_seed(self, seed: u64) -> PriorityScheme {
        match self {
            SchemeKind::Prio1Line => PriorityScheme::Prio1Line,
            SchemeKind::Prio1Random => PriorityScheme::Prio1Random { seed },
            SchemeKind::Prio2Line => PriorityScheme::Prio2Line,
            SchemeKind::Prio2Random => PriorityScheme::Prio2Random { seed },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Prio1Line => "prio1-line",
            SchemeKind::Prio1Random => "prio1-random",
            SchemeKind::Prio2Line => "prio2-line",
            SchemeKind::Prio2Random => "prio2-random",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown priority scheme {s:?} (expected prio1-line, prio1-random, prio2-line or prio2-random)"
                ))
            })
    }
}

/// How node priorities are assigned.
///
/// `Prio1*` uses one criterion: position in the grid line (lower row-major
/// address wins) or a seeded random rank. `Prio2*` first prefers nodes with
/// more nodes within 2 hops, then breaks ties like `Prio1*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PriorityScheme {
    Prio1Line,
    Prio1Random { seed: u64 },
    Prio2Line,
    Prio2Random { seed: u64 },
}

impl PriorityScheme {
    pub fn kind(&self) -> SchemeKind {
        match self {
            PriorityScheme::Prio1Line => SchemeKind::Prio1Line,
            PriorityScheme::Prio1Random { .. } => SchemeKind::Prio1Random,
            PriorityScheme::Prio2Line => SchemeKind::Prio2Line,
            PriorityScheme::Prio2Random { .. } => SchemeKind::Prio2Random,
        }
    }
}

/// Seeded permutation of `0..n`: ChaCha8 seeded with `seed_from_u64(seed)`,
/// then a Fisher-Yates shuffle from the last index down, swapping index `i`
/// with `next_u64() % (i + 1)`.
pub fn seeded_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Priority of every node under `scheme`. Line schemes need coordinates;
/// the line position is the rank of `(y, x)` in row-major order.
pub fn assign_priorities(
    g: &Graph,
    coords: Option<&[NodeCoord]>,
    scheme: PriorityScheme,
) -> Result<Vec<Priority>> {
    let n = g.node_count();
    let secondary: Vec<i64> = match scheme {
        PriorityScheme::Prio1Line | PriorityScheme::Prio2Line => {
            let coords = coords
                .ok_or_else(|| Error::invalid("line priority schemes need node coordinates"))?;
            if coords.len() != n {
                return Err(Error::invalid(format!(
                    "{} coordinates for {n} nodes",
                    coords.len()
                )));
            }
            let mut order: Vec<NodeId> = (0..n).collect();
            order.sort_by_key(|&v| (coords[v].y, coords[v].x, v));
            let mut pos = vec![0i64; n];
            for (rank, v) in order.into_iter().enumerate() {
                pos[v] = -(rank as i64);
            }
            pos
        }
        PriorityScheme::Prio1Random { seed } | PriorityScheme::Prio2Random { seed } => {
            seeded_permutation(n, seed)
                .into_iter()
                .map(|r| r as i64)
                .collect()
        }
    };
    let two_hop = matches!(
        scheme,
        PriorityScheme::Prio2Line | PriorityScheme::Prio2Random { .. }
    );
    Ok(g.nodes()
        .map(|v| Priority {
            primary: if two_hop {
                g.ball(v, 2).len() as i64
            } else {
                0
            },
            secondary: secondary[v],
            address: v,
        })
        .collect())
}

/// Nodes sorted from highest to lowest priority.
pub fn priority_order(priorities: &[Priority]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..priorities.len()).collect();
    order.sort_by(|&a, &b| priorities[b].cmp(&priorities[a]));
    order
}

/// Comparison key used by the protocol: tree level first (only in strategic
/// mode, shallower wins), then the scheme priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank {
    pub level: i64,
    pub priority: Priority,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MessageEntry {
    pub node: NodeId,
    /// Hop distance from the sender.
    pub distance: usize,
    pub rank: Rank,
    pub color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMessage {
    pub sender: NodeId,
    pub entries: Vec<MessageEntry>,
}

/// What a node knows about a peer of its conflict set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Knowledge {
    pub distance: usize,
    pub rank: Rank,
    pub color: Option<Color>,
}

/// Message encoding. `Full` resends the sender's whole table every round;
/// `Incremental` sends only entries changed since the sender's previous
/// message. Since knowledge only grows, both yield the same run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Transmission {
    Full,
    #[default]
    Incremental,
}

#[derive(Clone, Debug)]
struct NodeState {
    rank: Rank,
    color: Option<Color>,
    table: HashMap<NodeId, Knowledge>,
    /// Higher-ranked peers of N(u) not known to be colored.
    blockers: usize,
    used: BTreeSet<Color>,
    /// Peers (or self) whose entry changed since the last transmission.
    dirty: BTreeSet<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundReport {
    pub round: usize,
    pub newly_colored: Vec<NodeId>,
}

/// Full protocol state between rounds.
#[derive(Clone, Debug)]
pub struct SerenaState<'g> {
    graph: &'g Graph,
    h: usize,
    parent: Option<Vec<Option<NodeId>>>,
    nodes: Vec<NodeState>,
    round: usize,
    last_coloring_round: usize,
    transmission: Transmission,
}

impl<'g> SerenaState<'g> {
    /// Fresh state before discovery. `tree` selects strategic mode.
    pub fn new(
        graph: &'g Graph,
        priorities: &[Priority],
        tree: Option<&Tree>,
        h: usize,
    ) -> Result<Self> {
        let n = graph.node_count();
        if h == 0 {
            return Err(Error::invalid("h must be a positive integer"));
        }
        if priorities.len() != n {
            return Err(Error::invalid(format!(
                "{} priorities for {n} nodes",
                priorities.len()
            )));
        }
        let distinct: BTreeSet<&Priority> = priorities.iter().collect();
        if distinct.len() != n {
            return Err(Error::invalid("priorities must be pairwise distinct"));
        }
        if let Some(t) = tree {
            if !t.is_subgraph_of(graph) {
                return Err(Error::NotSpanning(
                    "strategic mode needs a spanning tree made of graph edges".into(),
                ));
            }
        }
        let nodes = (0..n)
            .map(|v| NodeState {
                rank: Rank {
                    level: tree.map_or(0, |t| -(t.depth(v) as i64)),
                    priority: priorities[v],
                },
                color: None,
                table: HashMap::new(),
                blockers: 0,
                used: BTreeSet::new(),
                dirty: BTreeSet::from([v]),
            })
            .collect();
        Ok(SerenaState {
            graph,
            h,
            parent: tree.map(|t| (0..n).map(|v| t.parent(v)).collect()),
            nodes,
            round: 0,
            last_coloring_round: 0,
            transmission: Transmission::default(),
        })
    }

    pub fn with_transmission(mut self, t: Transmission) -> Self {
        self.transmission = t;
        self
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn discovery_rounds(&self) -> usize {
        self.h
    }

    pub fn is_finished(&self) -> bool {
        self.nodes.iter().all(|s| s.color.is_some())
    }

    pub fn coloring(&self) -> Coloring {
        Coloring::from_partial(self.nodes.iter().map(|s| s.color).collect())
    }

    /// Round in which the most recent node colored itself.
    pub fn last_coloring_round(&self) -> usize {
        self.last_coloring_round
    }

    pub fn knowledge(&self, u: NodeId, peer: NodeId) -> Option<Knowledge> {
        self.nodes[u].table.get(&peer).copied()
    }

    pub fn known_peers(&self, u: NodeId) -> usize {
        self.nodes[u].table.len()
    }

    fn own_entry(&self, u: NodeId) -> MessageEntry {
        let s = &self.nodes[u];
        MessageEntry {
            node: u,
            distance: 0,
            rank: s.rank,
            color: s.color,
        }
    }

    fn peer_entry(&self, u: NodeId, peer: NodeId) -> MessageEntry {
        let k = self.nodes[u].table[&peer];
        MessageEntry {
            node: peer,
            distance: k.distance,
            rank: k.rank,
            color: k.color,
        }
    }

    /// The complete Color message `u` would send now: itself plus every
    /// known peer up to `h - 1` hops away.
    pub fn color_message(&self, u: NodeId) -> ColorMessage {
        let mut peers: Vec<NodeId> = self.nodes[u]
            .table
            .iter()
            .filter(|(_, k)| k.distance < self.h)
            .map(|(&p, _)| p)
            .collect();
        peers.sort_unstable();
        let mut entries = vec![self.own_entry(u)];
        entries.extend(peers.into_iter().map(|p| self.peer_entry(u, p)));
        ColorMessage { sender: u, entries }
    }

    fn outgoing(&mut self, u: NodeId) -> ColorMessage {
        let dirty = std::mem::take(&mut self.nodes[u].dirty);
        match self.transmission {
            Transmission::Full => self.color_message(u),
            Transmission::Incremental => ColorMessage {
                sender: u,
                entries: dirty
                    .into_iter()
                    .map(|p| {
                        if p == u {
                            self.own_entry(u)
                        } else {
                            self.peer_entry(u, p)
                        }
                    })
                    .collect(),
            },
        }
    }

    fn receive(&mut self, u: NodeId, msg: &ColorMessage) -> Result<()> {
        let h = self.h;
        let s = &mut self.nodes[u];
        for e in &msg.entries {
            let distance = e.distance + 1;
            if e.node == u || distance > h {
                continue;
            }
            match s.table.get_mut(&e.node) {
                None => {
                    s.table.insert(
                        e.node,
                        Knowledge {
                            distance,
                            rank: e.rank,
                            color: e.color,
                        },
                    );
                    match e.color {
                        Some(c) => {
                            s.used.insert(c);
                        }
                        None if e.rank > s.rank => s.blockers += 1,
                        None => {}
                    }
                    if distance < h {
                        s.dirty.insert(e.node);
                    }
                }
                Some(k) => {
                    let mut changed = false;
                    if distance < k.distance {
                        k.distance = distance;
                        changed = true;
                    }
                    match (k.color, e.color) {
                        (None, Some(c)) => {
                            k.color = Some(c);
                            s.used.insert(c);
                            if k.rank > s.rank {
                                s.blockers -= 1;
                            }
                            changed = true;
                        }
                        (Some(a), Some(b)) if a != b => {
                            return Err(Error::Internal(format!(
                                "node {u} heard color {b} for node {} already known as {a}",
                                e.node
                            )));
                        }
                        _ => {}
                    }
                    if changed && k.distance < h {
                        s.dirty.insert(e.node);
                    }
                }
            }
        }
        Ok(())
    }

    fn chosen_color(&self, u: NodeId) -> Option<Color> {
        let s = &self.nodes[u];
        if s.color.is_some() || s.blockers > 0 {
            return None;
        }
        let floor = match self.parent.as_ref().and_then(|p| p[u]) {
            Some(p) => s.table.get(&p)?.color? + 1,
            None => 0,
        };
        (floor..).find(|c| !s.used.contains(c))
    }

    /// One synchronous round: every node sends a message built from its
    /// state before the round, then all inboxes are processed, then every
    /// eligible node colors itself.
    pub fn step_round(&mut self) -> Result<RoundReport> {
        let n = self.graph.node_count();
        self.round += 1;
        let messages: Vec<ColorMessage> = (0..n).map(|u| self.outgoing(u)).collect();
        for u in 0..n {
            for &s in self.graph.neighbors(u) {
                self.receive(u, &messages[s])?;
            }
        }
        let mut newly_colored = Vec::new();
        if self.round > self.h {
            let picks: Vec<(NodeId, Color)> = (0..n)
                .filter_map(|u| self.chosen_color(u).map(|c| (u, c)))
                .collect();
            for (u, c) in picks {
                self.nodes[u].color = Some(c);
                self.nodes[u].dirty.insert(u);
                newly_colored.push(u);
            }
        }
        if !newly_colored.is_empty() {
            self.last_coloring_round = self.round;
        }
        Ok(RoundReport {
            round: self.round,
            newly_colored,
        })
    }

    /// Upper bound on rounds: discovery, then at most `h` rounds of
    /// information delay per node.
    pub fn round_limit(&self) -> usize {
        self.h + 1 + self.h * self.graph.node_count()
    }

    /// Runs rounds until every node is colored.
    pub fn run_to_completion(&mut self) -> Result<()> {
        let limit = self.round_limit();
        while !self.is_finished() {
            if self.round >= limit {
                return Err(Error::Internal(format!(
                    "no termination after {} rounds",
                    self.round
                )));
            }
            self.step_round()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SerenaOutcome {
    pub coloring: Coloring,
    pub colors: usize,
    /// Discovery plus coloring rounds.
    pub rounds: usize,
    pub discovery_rounds: usize,
}

/// Runs SERENA to completion. `tree` selects strategic mode.
pub fn run_serena(
    g: &Graph,
    coords: Option<&[NodeCoord]>,
    scheme: PriorityScheme,
    tree: Option<&Tree>,
    h: usize,
) -> Result<SerenaOutcome> {
    let priorities = assign_priorities(g, coords, scheme)?;
    run_with_priorities(g, &priorities, tree, h)
}

pub fn run_with_priorities(
    g: &Graph,
    priorities: &[Priority],
    tree: Option<&Tree>,
    h: usize,
) -> Result<SerenaOutcome> {
    let mut state = SerenaState::new(g, priorities, tree, h)?;
    state.run_to_completion()?;
    let coloring = state.coloring();
    Ok(SerenaOutcome {
        colors: coloring.color_count(),
        coloring,
        rounds: state.last_coloring_round().max(state.round()),
        discovery_rounds: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prio(v: NodeId, key: i64) -> Priority {
        Priority {
            primary: 0,
            secondary: key,
            address: v,
        }
    }

    #[test]
    fn single_node_colors_in_first_coloring_round() {
        let g = Graph::empty(1);
        let out = run_with_priorities(&g, &[prio(0, 0)], None, 3).unwrap();
        assert_eq!(out.colors, 1);
        assert_eq!(out.coloring.get(0), Some(0));
        assert_eq!(out.rounds, 4);
    }

    #[test]
    fn two_nodes_higher_priority_first() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mut st = SerenaState::new(&g, &[prio(0, 0), prio(1, 5)], None, 3).unwrap();
        for _ in 0..3 {
            assert!(st.step_round().unwrap().newly_colored.is_empty());
        }
        let r = st.step_round().unwrap();
        assert_eq!(r.newly_colored, vec![1]);
        assert_eq!(st.coloring().get(1), Some(0));
        let r = st.step_round().unwrap();
        assert_eq!(r.newly_colored, vec![0]);
        assert_eq!(st.coloring().get(0), Some(1));
    }

    #[test]
    fn path_trace() {
        // a - b - c with a > b > c: a colors in the first coloring round, b
        // one round later, c one round after b.
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut st = SerenaState::new(&g, &[prio(0, 3), prio(1, 2), prio(2, 1)], None, 3).unwrap();
        let mut when = [0usize; 3];
        while !st.is_finished() {
            let r = st.step_round().unwrap();
            for v in r.newly_colored {
                when[v] = r.round;
            }
        }
        assert_eq!(when, [4, 5, 6]);
        assert_eq!(st.coloring(), Coloring::from_colors(vec![0, 1, 2]));
    }

    #[test]
    fn discovery_fills_conflict_sets() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let p: Vec<_> = (0..5).map(|v| prio(v, -(v as i64))).collect();
        let mut st = SerenaState::new(&g, &p, None, 3).unwrap();
        for _ in 0..3 {
            st.step_round().unwrap();
        }
        assert_eq!(st.known_peers(0), 3);
        assert_eq!(st.knowledge(0, 3).unwrap().distance, 3);
        assert!(st.knowledge(0, 4).is_none());
        assert_eq!(st.known_peers(2), 4);
    }

    #[test]
    fn strategic_child_above_parent() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let tree = Tree::new(0, vec![None, Some(0)]).unwrap();
        // The child has the higher scheme priority, the tree level still wins.
        let out = run_with_priorities(&g, &[prio(0, 0), prio(1, 9)], Some(&tree), 3).unwrap();
        assert_eq!(out.coloring, Coloring::from_colors(vec![0, 1]));
    }

    #[test]
    fn strategic_tree_must_use_graph_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let tree = Tree::new(0, vec![None, Some(0), Some(0)]).unwrap();
        let p: Vec<_> = (0..3).map(|v| prio(v, 0)).collect();
        assert!(matches!(
            SerenaState::new(&g, &p, Some(&tree), 3),
            Err(Error::NotSpanning(_))
        ));
    }

    #[test]
    fn priorities_validated() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(SerenaState::new(&g, &[prio(0, 0)], None, 3).is_err());
        let dup = Priority {
            primary: 0,
            secondary: 0,
            address: 0,
        };
        assert!(SerenaState::new(&g, &[dup, dup], None, 3).is_err());
        assert!(assign_priorities(&g, None, PriorityScheme::Prio1Line).is_err());
    }

    #[test]
    fn permutation_is_reproducible() {
        let a = seeded_permutation(50, 7);
        assert_eq!(a, seeded_permutation(50, 7));
        assert_ne!(a, seeded_permutation(50, 8));
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn scheme_names_parse() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
            assert_eq!(k.with_seed(3).kind(), k);
        }
        assert!("prio3".parse::<SchemeKind>().is_err());
    }
}

//! Polynomial reduction from k-color 1-hop coloring of `G` to h-hop coloring
//! of a layered graph `G'`, plus empirical checks of its distance lemmas and
//! of the color-count equivalence `k' = k + m`.
//!
//! Node ids of `G'`: the original nodes keep ids `0..n`, then come the layers
//! `U_1, U_2, ...` in order, and the conjunction node `u0` is last. Original
//! edges of `G` are not carried into `G'`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{exact_chromatic, Mode, SolveResult};
use crate::graph::{is_valid_coloring, is_valid_strategic, Coloring, Graph, NodeId};
use crate::topology::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeRole {
    Original,
    /// Member of layer `U_i` (1-based).
    Layer(usize),
    Conjunction,
}

impl fmt::Display for NodeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRole::Original => f.write_str("original"),
            NodeRole::Layer(i) => write!(f, "layer-{i}"),
            NodeRole::Conjunction => f.write_str("u0"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReducedGraph {
    pub original: Graph,
    pub h: usize,
    pub gprime: Graph,
    /// `layers[i - 1][j]` is the id in `G'` of the copy of original node `j`
    /// in `U_i`; for even `h` the last layer is indexed by edge instead.
    pub layers: Vec<Vec<NodeId>>,
    /// Edges of `G` in ascending order; index `e` names top-layer node
    /// `layers.last()[e]` when `h` is even.
    pub edges: Vec<(NodeId, NodeId)>,
    pub conjunction: NodeId,
    pub roles: Vec<NodeRole>,
}

impl ReducedGraph {
    pub fn is_even(&self) -> bool {
        self.h.is_multiple_of(2)
    }

    /// Layer count `h'`.
    pub fn half(&self) -> usize {
        self.layers.len()
    }

    pub fn original_count(&self) -> usize {
        self.original.node_count()
    }

    /// Every added node: all layers plus `u0`.
    pub fn added_nodes(&self) -> Vec<NodeId> {
        (self.original_count()..self.gprime.node_count()).collect()
    }

    pub fn format_roles_csv(&self) -> String {
        let mut out = String::from("node,role\n");
        for (u, role) in self.roles.iter().enumerate() {
            out.push_str(&format!("{u},{role}\n"));
        }
        out
    }
}

/// Number of added nodes: `h'·n + 1` for odd `h`, `(h' - 1)·n + p + 1` for
/// even `h`.
pub fn expected_m(n: usize, p: usize, h: usize) -> Result<usize> {
    if h < 3 {
        return Err(Error::invalid("reductions are defined for h >= 3"));
    }
    let half = h / 2;
    Ok(if h % 2 == 1 {
        half * n + 1
    } else {
        (half - 1) * n + p + 1
    })
}

fn check_input(g: &Graph) -> Result<()> {
    if g.node_count() == 0 {
        return Err(Error::invalid("cannot reduce an empty graph"));
    }
    Ok(())
}

/// Odd `h >= 3`: `h' = (h-1)/2` copies of `V`. Edges: `v – f1(v)`, copies of
/// the same node in consecutive layers, `U_h'` copies adjacent iff their
/// originals are, and every `U_h'` node to `u0`.
#[allow(clippy::needless_range_loop)]
pub fn reduce_odd(g: &Graph, h: usize) -> Result<ReducedGraph> {
    if h.is_multiple_of(2) {
        return Err(Error::invalid(format!("h = {h} is even; use reduce_even")));
    }
    if h < 3 {
        return Err(Error::invalid("reductions are defined for h >= 3"));
    }
    check_input(g)?;
    let n = g.node_count();
    let half = (h - 1) / 2;
    let layers: Vec<Vec<NodeId>> = (1..=half)
        .map(|i| (0..n).map(|v| i * n + v).collect())
        .collect();
    let u0 = (half + 1) * n;
    let mut gp = Graph::empty(u0 + 1);
    for v in 0..n {
        gp.add_edge(v, layers[0][v])?;
        for l in 0..half - 1 {
            gp.add_edge(layers[l][v], layers[l + 1][v])?;
        }
        gp.add_edge(layers[half - 1][v], u0)?;
    }
    let edges: Vec<_> = g.edges().collect();
    for &(a, b) in &edges {
        gp.add_edge(layers[half - 1][a], layers[half - 1][b])?;
    }
    let mut roles = vec![NodeRole::Original; n];
    for i in 1..=half {
        roles.extend(std::iter::repeat_n(NodeRole::Layer(i), n));
    }
    roles.push(NodeRole::Conjunction);
    Ok(ReducedGraph {
        original: g.clone(),
        h,
        gprime: gp,
        layers,
        edges,
        conjunction: u0,
        roles,
    })
}

/// Even `h >= 4`: `h' = h/2`, `h' - 1` copies of `V` and one node per edge of
/// `G` in `U_h'`. Each edge node links the `U_{h'-1}` copies of its endpoints;
/// `U_h'` is a clique and every member links to `u0`. Every node of `G` needs
/// an incident edge, otherwise its copies would be cut off.
#[allow(clippy::needless_range_loop)]
pub fn reduce_even(g: &Graph, h: usize) -> Result<ReducedGraph> {
    if h % 2 == 1 {
        return Err(Error::invalid(format!("h = {h} is odd; use reduce_odd")));
    }
    if h < 4 {
        return Err(Error::invalid(
            "the even construction needs h >= 4 (h = 2 leaves no node layers)",
        ));
    }
    check_input(g)?;
    if let Some(v) = g.nodes().find(|&v| g.degree(v) == 0) {
        return Err(Error::invalid(format!(
            "node {v} has no incident edge; the even construction would disconnect it"
        )));
    }
    let n = g.node_count();
    let half = h / 2;
    let edges: Vec<_> = g.edges().collect();
    let mut layers: Vec<Vec<NodeId>> = (1..half)
        .map(|i| (0..n).map(|v| i * n + v).collect())
        .collect();
    let top_base = half * n;
    layers.push((0..edges.len()).map(|e| top_base + e).collect());
    let u0 = top_base + edges.len();
    let mut gp = Graph::empty(u0 + 1);
    for v in 0..n {
        gp.add_edge(v, layers[0][v])?;
        for l in 0..half - 2 {
            gp.add_edge(layers[l][v], layers[l + 1][v])?;
        }
    }
    let below = &layers[half - 2];
    let top = &layers[half - 1];
    for (e, &(a, b)) in edges.iter().enumerate() {
        gp.add_edge(below[a], top[e])?;
        gp.add_edge(top[e], below[b])?;
        gp.add_edge(top[e], u0)?;
        for &other in &top[e + 1..] {
            gp.add_edge(top[e], other)?;
        }
    }
    let mut roles = vec![NodeRole::Original; n];
    for i in 1..half {
        roles.extend(std::iter::repeat_n(NodeRole::Layer(i), n));
    }
    roles.extend(std::iter::repeat_n(NodeRole::Layer(half), edges.len()));
    roles.push(NodeRole::Conjunction);
    Ok(ReducedGraph {
        original: g.clone(),
        h,
        gprime: gp,
        layers,
        edges,
        conjunction: u0,
        roles,
    })
}

pub fn reduce(g: &Graph, h: usize) -> Result<ReducedGraph> {
    if h % 2 == 1 {
        reduce_odd(g, h)
    } else {
        reduce_even(g, h)
    }
}

/// Tree rooted at `u0` whose leaves are the original nodes: each node's
/// parent is its copy one layer up, and the top layer hangs off `u0`.
///
/// For even `h`, edge nodes are visited in ascending id order and adopt the
/// lower-id endpoint copy in `U_{h'-1}` that has no parent yet. Copies left
/// without a parent are attached to their smallest-id adjacent edge node.
#[allow(clippy::needless_range_loop)]
pub fn build_tree_t(r: &ReducedGraph) -> Result<Tree> {
    let n = r.original_count();
    let half = r.half();
    let mut parent: Vec<Option<NodeId>> = vec![None; r.gprime.node_count()];
    for v in 0..n {
        parent[v] = Some(r.layers[0][v]);
    }
    let node_layers = if r.is_even() { half - 1 } else { half };
    for l in 0..node_layers.saturating_sub(1) {
        for v in 0..n {
            parent[r.layers[l][v]] = Some(r.layers[l + 1][v]);
        }
    }
    if r.is_even() {
        let below = &r.layers[half - 2];
        let top = &r.layers[half - 1];
        for (e, &(a, b)) in r.edges.iter().enumerate() {
            parent[top[e]] = Some(r.conjunction);
            let mut ends = [below[a], below[b]];
            ends.sort_unstable();
            if let Some(&child) = ends.iter().find(|&&c| parent[c].is_none()) {
                parent[child] = Some(top[e]);
            }
        }
        for &c in below {
            if parent[c].is_none() {
                let adopter = r
                    .gprime
                    .neighbors(c)
                    .iter()
                    .copied()
                    .find(|x| top.contains(x))
                    .ok_or_else(|| {
                        Error::Internal(format!("node {c} has no adjacent edge node"))
                    })?;
                parent[c] = Some(adopter);
            }
        }
    } else {
        for &u in &r.layers[half - 1] {
            parent[u] = Some(r.conjunction);
        }
    }
    let tree = Tree::new(r.conjunction, parent)?;
    if !tree.is_subgraph_of(&r.gprime) {
        return Err(Error::Internal("tree T uses a non-edge of G'".into()));
    }
    Ok(tree)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub passed: bool,
    /// First violating pair and its hop distance in `G'`.
    pub violation: Option<(NodeId, NodeId, Option<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            if let Some((u, v, d)) = c.violation {
                match d {
                    Some(d) => write!(f, " (nodes {u},{v} at distance {d})")?,
                    None => write!(f, " (nodes {u},{v} disconnected)")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn pair_check<I>(
    name: &'static str,
    dist: &[Vec<Option<usize>>],
    pairs: I,
    ok: impl Fn(Option<usize>) -> bool,
) -> LemmaCheck
where
    I: IntoIterator<Item = (NodeId, NodeId)>,
{
    let violation = pairs
        .into_iter()
        .find(|&(u, v)| !ok(dist[u][v]))
        .map(|(u, v)| (u, v, dist[u][v]));
    LemmaCheck {
        name,
        passed: violation.is_none(),
        violation,
    }
}

/// Breadth-first distance checks on `G'`:
/// added nodes pairwise within `h - 1` hops, every original/added pair within
/// `h`, originals adjacent in `G` within `h`, originals 2 hops apart in `G` at
/// least `h + 1` apart, and `|V1| = m`.
pub fn verify_lemmas(r: &ReducedGraph) -> Result<LemmaReport> {
    let h = r.h;
    let gp = &r.gprime;
    let dist: Vec<Vec<Option<usize>>> = gp.nodes().map(|u| gp.distances_from(u, None)).collect();
    let n = r.original_count();
    let added = r.added_nodes();
    let within = |limit: usize| move |d: Option<usize>| d.is_some_and(|d| d <= limit);

    let mut checks = Vec::new();
    let m = expected_m(n, r.original.edge_count(), h)?;
    checks.push(LemmaCheck {
        name: "added node count equals m",
        passed: added.len() == m,
        violation: None,
    });
    checks.push(pair_check(
        "added nodes pairwise within h-1 hops",
        &dist,
        added
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| added[i + 1..].iter().map(move |&v| (u, v))),
        within(h - 1),
    ));
    checks.push(pair_check(
        "original and added nodes within h hops",
        &dist,
        (0..n).flat_map(|v| added.iter().map(move |&u| (v, u))),
        within(h),
    ));
    checks.push(pair_check(
        "neighbors in G within h hops in G'",
        &dist,
        r.original.edges(),
        within(h),
    ));
    let two_hop: Vec<(NodeId, NodeId)> = (0..n)
        .flat_map(|u| {
            let d = r.original.distances_from(u, Some(2));
            (u + 1..n)
                .filter(move |&v| d[v] == Some(2))
                .map(move |v| (u, v))
        })
        .collect();
    checks.push(pair_check(
        "2-hop pairs of G at least h+1 hops apart in G'",
        &dist,
        two_hop,
        |d| d.is_none_or(|d| d > h),
    ));
    Ok(LemmaReport { checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A solver ran out of budget before proving optimality.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    /// 1-hop chromatic number of `G`.
    pub k: usize,
    pub m: usize,
    /// h-hop chromatic number of `G'`, general mode.
    pub k_prime: usize,
    /// h-hop chromatic number of `G'` in strategic mode over tree T.
    pub k_prime_strategic: usize,
    /// The original nodes' colors in the optimal `G'` witness form a valid
    /// 1-hop coloring of `G` with `k' - m` colors.
    pub round_trip: bool,
    pub verdict: Verdict,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} m={} k'={} k'_strategic={} round_trip={} verdict={:?}",
            self.k, self.m, self.k_prime, self.k_prime_strategic, self.round_trip, self.verdict
        )
    }
}

/// Solves `G` (1-hop) and `G'` (h-hop, general and strategic) exactly and
/// checks `k' = k + m` in both modes.
pub fn verify_equivalence(g: &Graph, h: usize, budget: u64) -> Result<EquivalenceReport> {
    let r = reduce(g, h)?;
    let tree = build_tree_t(&r)?;
    let m = expected_m(g.node_count(), g.edge_count(), h)?;
    let base = exact_chromatic(g, 1, Mode::General, budget)?;
    let general = exact_chromatic(&r.gprime, h, Mode::General, budget)?;
    let strategic = exact_chromatic(&r.gprime, h, Mode::Strategic(&tree), budget)?;

    if !is_valid_coloring(&r.gprime, &general.witness, h)?
        || !is_valid_strategic(&r.gprime, &strategic.witness, h, &tree)?
    {
        return Err(Error::Internal("solver returned an invalid witness".into()));
    }
    let restricted = Coloring::from_colors(
        (0..g.node_count())
            .map(|v| general.witness.get(v).unwrap())
            .collect(),
    );
    let round_trip =
        is_valid_coloring(g, &restricted, 1)? && restricted.color_count() + m == general.chromatic;

    let exact = |s: &SolveResult| s.is_exact();
    let verdict = if ![&base, &general, &strategic].into_iter().all(exact) {
        Verdict::Inconclusive
    } else if general.chromatic == base.chromatic + m
        && strategic.chromatic == base.chromatic + m
        && round_trip
    {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(EquivalenceReport {
        k: base.chromatic,
        m,
        k_prime: general.chromatic,
        k_prime_strategic: strategic.chromatic,
        round_trip,
        verdict,
    })
}

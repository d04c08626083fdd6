//! Exact h-hop chromatic number by branch and bound, and the FirstFit baseline.

use crate::error::{Error, Result};
use crate::graph::{power_graph, Color, Coloring, Graph, NodeId};
use crate::topology::Tree;

/// Default search budget in explored search nodes.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Coloring mode: plain h-hop validity, or additionally every node colored
/// strictly above its parent in a data-gathering tree.
#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    General,
    Strategic(&'a Tree),
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Chromatic number, or the best upper bound when the budget ran out.
    pub chromatic: usize,
    pub witness: Coloring,
    /// Best proven lower bound; equals `chromatic` unless the budget ran out.
    pub lower_bound: usize,
    pub nodes_explored: u64,
    pub budget_exhausted: bool,
}

impl SolveResult {
    pub fn is_exact(&self) -> bool {
        !self.budget_exhausted || self.lower_bound == self.chromatic
    }
}

/// Greedy coloring of the h-th power graph: nodes in `order` each take the
/// smallest color unused within h hops.
pub fn firstfit(g: &Graph, h: usize, order: &[NodeId]) -> Result<Coloring> {
    if h == 0 {
        return Err(Error::invalid("h must be a positive integer"));
    }
    let n = g.node_count();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return Err(Error::invalid(
            "order is not a permutation of the graph's nodes",
        ));
    }
    let mut coloring = Coloring::uncolored(n);
    let mut taken = Vec::new();
    for &v in order {
        taken.clear();
        taken.extend(g.ball(v, h).iter().filter_map(|&(w, _)| coloring.get(w)));
        coloring.set(v, smallest_free(&mut taken, 0));
    }
    Ok(coloring)
}

/// Smallest color `>= from` not in `taken` (which gets sorted).
fn smallest_free(taken: &mut [Color], from: Color) -> Color {
    taken.sort_unstable();
    let mut c = from;
    for &t in taken.iter() {
        if t == c {
            c += 1;
        } else if t > c {
            break;
        }
    }
    c
}

struct Conflicts {
    adj: Vec<Vec<NodeId>>,
    matrix: Vec<bool>,
    n: usize,
}

impl Conflicts {
    fn new(g: &Graph, h: usize) -> Result<Self> {
        let p = power_graph(g, h)?;
        let n = p.node_count();
        let mut matrix = vec![false; n * n];
        for (u, v) in p.edges() {
            matrix[u * n + v] = true;
            matrix[v * n + u] = true;
        }
        Ok(Conflicts {
            adj: p.nodes().map(|u| p.neighbors(u).to_vec()).collect(),
            matrix,
            n,
        })
    }

    fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.matrix[u * self.n + v]
    }

    /// Largest of the cliques grown greedily from each vertex.
    fn greedy_clique(&self) -> usize {
        let mut by_degree: Vec<NodeId> = (0..self.n).collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(self.adj[v].len()), v));
        let mut best = usize::from(self.n > 0);
        for &seed in &by_degree {
            let mut clique = vec![seed];
            for &v in &by_degree {
                if v != seed && clique.iter().all(|&c| self.adjacent(c, v)) {
                    clique.push(v);
                }
            }
            best = best.max(clique.len());
        }
        best
    }
}

struct Counter {
    explored: u64,
    budget: u64,
    exhausted: bool,
}

impl Counter {
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.explored += 1;
        if self.explored > self.budget {
            self.exhausted = true;
            return false;
        }
        true
    }
}

/// DSATUR-ordered branch and bound for general mode.
struct GeneralSearch<'a> {
    cf: &'a Conflicts,
    colors: Vec<Option<Color>>,
    /// `nbr[v * n + c]`: colored conflict neighbors of `v` holding `c`.
    nbr: Vec<u32>,
    sat: Vec<usize>,
    best: usize,
    best_colors: Vec<Color>,
    lower: usize,
    counter: Counter,
}

impl<'a> GeneralSearch<'a> {
    fn new(cf: &'a Conflicts, lower: usize, budget: u64) -> Self {
        let n = cf.n;
        GeneralSearch {
            cf,
            colors: vec![None; n],
            nbr: vec![0; n * n.max(1)],
            sat: vec![0; n],
            best: n + 1,
            best_colors: Vec::new(),
            lower,
            counter: Counter {
                explored: 0,
                budget,
                exhausted: false,
            },
        }
    }

    fn assign(&mut self, v: NodeId, c: Color) {
        self.colors[v] = Some(c);
        let n = self.cf.n;
        for &w in &self.cf.adj[v] {
            let slot = &mut self.nbr[w * n + c];
            if *slot == 0 {
                self.sat[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: NodeId, c: Color) {
        self.colors[v] = None;
        let n = self.cf.n;
        for &w in &self.cf.adj[v] {
            let slot = &mut self.nbr[w * n + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[w] -= 1;
            }
        }
    }

    /// Highest saturation, then highest degree, then smallest id.
    fn select(&self) -> Option<NodeId> {
        (0..self.cf.n)
            .filter(|&v| self.colors[v].is_none())
            .max_by_key(|&v| (self.sat[v], self.cf.adj[v].len(), std::cmp::Reverse(v)))
    }

    fn search(&mut self, used: usize) {
        if !self.counter.tick() {
            return;
        }
        let Some(v) = self.select() else {
            if used < self.best {
                self.best = used;
                self.best_colors = self.colors.iter().map(|c| c.unwrap()).collect();
            }
            return;
        };
        let n = self.cf.n;
        let limit = (used + 1).min(self.best.saturating_sub(1));
        for c in 0..limit {
            if self.nbr[v * n + c] != 0 {
                continue;
            }
            self.assign(v, c);
            self.search(used.max(c + 1));
            self.unassign(v, c);
            if self.best <= self.lower || self.counter.exhausted {
                return;
            }
        }
    }
}

/// Backtracking feasibility search for strategic mode with `k` colors.
struct StrategicSearch<'a> {
    cf: &'a Conflicts,
    tree: &'a Tree,
    below: Vec<usize>,
    children: Vec<Vec<NodeId>>,
    colors: Vec<Option<Color>>,
    k: usize,
}

impl StrategicSearch<'_> {
    fn domain(&self, v: NodeId) -> Vec<Color> {
        let mut lo = self.tree.depth(v);
        if let Some(p) = self.tree.parent(v) {
            if let Some(pc) = self.colors[p] {
                lo = lo.max(pc + 1);
            }
        }
        let Some(mut hi) = self.k.checked_sub(1 + self.below[v]) else {
            return Vec::new();
        };
        for &ch in &self.children[v] {
            if let Some(cc) = self.colors[ch] {
                match cc.checked_sub(1) {
                    Some(x) => hi = hi.min(x),
                    None => return Vec::new(),
                }
            }
        }
        if lo > hi {
            return Vec::new();
        }
        let mut free = vec![true; hi - lo + 1];
        for &w in &self.cf.adj[v] {
            if let Some(c) = self.colors[w] {
                if (lo..=hi).contains(&c) {
                    free[c - lo] = false;
                }
            }
        }
        (lo..=hi).filter(|&c| free[c - lo]).collect()
    }

    fn search(&mut self, counter: &mut Counter) -> bool {
        if !counter.tick() {
            return false;
        }
        let mut pick: Option<(NodeId, Vec<Color>)> = None;
        for v in (0..self.cf.n).filter(|&v| self.colors[v].is_none()) {
            let dom = self.domain(v);
            if dom.is_empty() {
                return false;
            }
            let better = match &pick {
                None => true,
                Some((p, pd)) => {
                    (dom.len(), std::cmp::Reverse(self.cf.adj[v].len()))
                        < (pd.len(), std::cmp::Reverse(self.cf.adj[*p].len()))
                }
            };
            if better {
                pick = Some((v, dom));
            }
        }
        let Some((v, dom)) = pick else {
            return true;
        };
        for c in dom {
            self.colors[v] = Some(c);
            if self.search(counter) {
                return true;
            }
            if counter.exhausted {
                break;
            }
        }
        self.colors[v] = None;
        false
    }
}

/// Parents before children, each taking the smallest color above its
/// parent's that is free within h hops.
fn greedy_strategic(cf: &Conflicts, tree: &Tree) -> Vec<Color> {
    let mut order: Vec<NodeId> = (0..cf.n).collect();
    order.sort_by_key(|&v| (tree.depth(v), v));
    let mut colors: Vec<Option<Color>> = vec![None; cf.n];
    let mut taken = Vec::new();
    for v in order {
        let from = tree.parent(v).map_or(0, |p| colors[p].unwrap() + 1);
        taken.clear();
        taken.extend(cf.adj[v].iter().filter_map(|&w| colors[w]));
        colors[v] = Some(smallest_free(&mut taken, from));
    }
    colors.into_iter().map(Option::unwrap).collect()
}

fn count_colors(colors: &[Color]) -> usize {
    let mut seen: Vec<Color> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn solve_general(cf: &Conflicts, budget: u64) -> SolveResult {
    let lower = cf.greedy_clique();
    let mut s = GeneralSearch::new(cf, lower, budget);
    s.search(0);
    let exhausted = s.counter.exhausted;
    let (chromatic, witness) = if s.best_colors.is_empty() && cf.n > 0 {
        // Budget ran out before the first complete assignment; fall back to FirstFit.
        let colors = greedy_general(cf);
        (count_colors(&colors), colors)
    } else {
        (s.best.min(cf.n), s.best_colors)
    };
    SolveResult {
        chromatic,
        witness: Coloring::from_colors(witness),
        lower_bound: if exhausted { lower } else { chromatic },
        nodes_explored: s.counter.explored,
        budget_exhausted: exhausted,
    }
}

fn greedy_general(cf: &Conflicts) -> Vec<Color> {
    let mut colors: Vec<Option<Color>> = vec![None; cf.n];
    let mut taken = Vec::new();
    for v in 0..cf.n {
        taken.clear();
        taken.extend(cf.adj[v].iter().filter_map(|&w| colors[w]));
        colors[v] = Some(smallest_free(&mut taken, 0));
    }
    colors.into_iter().map(Option::unwrap).collect()
}

/// Minimum number of colors of a valid h-hop coloring (plus the parent
/// ordering in strategic mode), with a witness. When the exploration budget
/// runs out the result is flagged and `chromatic` is only an upper bound.
pub fn exact_chromatic(g: &Graph, h: usize, mode: Mode<'_>, budget: u64) -> Result<SolveResult> {
    let cf = Conflicts::new(g, h)?;
    if cf.n == 0 {
        return Ok(SolveResult {
            chromatic: 0,
            witness: Coloring::uncolored(0),
            lower_bound: 0,
            nodes_explored: 0,
            budget_exhausted: false,
        });
    }
    let general = solve_general(&cf, budget);
    let tree = match mode {
        Mode::General => return Ok(general),
        Mode::Strategic(tree) => tree,
    };
    if tree.node_count() != cf.n {
        return Err(Error::NotSpanning(format!(
            "tree covers {} nodes, graph has {}",
            tree.node_count(),
            cf.n
        )));
    }

    let upper_colors = compress(&greedy_strategic(&cf, tree));
    let upper = count_colors(&upper_colors);
    let lower = general.lower_bound.max(tree.height() + 1);
    let mut counter = Counter {
        explored: general.nodes_explored,
        budget,
        exhausted: general.budget_exhausted,
    };
    let mut search = StrategicSearch {
        cf: &cf,
        tree,
        below: tree.subtree_heights(),
        children: (0..cf.n).map(|v| tree.children(v)).collect(),
        colors: vec![None; cf.n],
        k: 0,
    };
    for k in lower..upper {
        search.k = k;
        search.colors.fill(None);
        if search.search(&mut counter) {
            let witness: Vec<Color> = search.colors.iter().map(|c| c.unwrap()).collect();
            return Ok(SolveResult {
                chromatic: k,
                witness: Coloring::from_colors(witness),
                lower_bound: k,
                nodes_explored: counter.explored,
                budget_exhausted: counter.exhausted,
            });
        }
        if counter.exhausted {
            return Ok(SolveResult {
                chromatic: upper,
                witness: Coloring::from_colors(upper_colors),
                lower_bound: k,
                nodes_explored: counter.explored,
                budget_exhausted: true,
            });
        }
    }
    Ok(SolveResult {
        chromatic: upper,
        witness: Coloring::from_colors(upper_colors),
        lower_bound: upper,
        nodes_explored: counter.explored,
        budget_exhausted: false,
    })
}

/// Maps colors onto `0..k` preserving their order, so parent ordering and
/// validity both survive.
fn compress(colors: &[Color]) -> Vec<Color> {
    let mut distinct = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    colors
        .iter()
        .map(|c| distinct.binary_search(c).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_coloring, is_valid_strategic};

    fn tri() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn small_exact_values() {
        let r = exact_chromatic(&tri(), 1, Mode::General, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.chromatic, 3);
        assert!(is_valid_coloring(&tri(), &r.witness, 1).unwrap());

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            exact_chromatic(&p3, 2, Mode::General, DEFAULT_BUDGET)
                .unwrap()
                .chromatic,
            3
        );
        assert_eq!(
            exact_chromatic(&p3, 1, Mode::General, DEFAULT_BUDGET)
                .unwrap()
                .chromatic,
            2
        );

        let single = Graph::empty(1);
        assert_eq!(
            exact_chromatic(&single, 3, Mode::General, 10)
                .unwrap()
                .chromatic,
            1
        );
        assert_eq!(
            exact_chromatic(&Graph::empty(0), 1, Mode::General, 10)
                .unwrap()
                .chromatic,
            0
        );
    }

    #[test]
    fn strategic_two_nodes_orders_colors() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let t = Tree::new(0, vec![None, Some(0)]).unwrap();
        let r = exact_chromatic(&g, 1, Mode::Strategic(&t), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.chromatic, 2);
        assert!(r.witness.get(0) < r.witness.get(1));
        assert!(is_valid_strategic(&g, &r.witness, 1, &t).unwrap());
    }

    #[test]
    fn strategic_path_needs_depth_plus_one() {
        // A path rooted at one end is bipartite, but the parent order forces 4 colors.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let t = Tree::new(0, vec![None, Some(0), Some(1), Some(2)]).unwrap();
        let r = exact_chromatic(&g, 1, Mode::Strategic(&t), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.chromatic, 4);
        // Rooted in the middle the depth is 2, so 3 colors suffice.
        let t = Tree::new(1, vec![Some(1), None, Some(1), Some(2)]).unwrap();
        let r = exact_chromatic(&g, 1, Mode::Strategic(&t), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.chromatic, 3);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let r = exact_chromatic(&g, 2, Mode::General, 1).unwrap();
        assert!(r.budget_exhausted);
        assert!(is_valid_coloring(&g, &r.witness, 2).unwrap());
        assert!(r.chromatic >= r.lower_bound);
    }

    #[test]
    fn firstfit_examples() {
        let c = firstfit(&tri(), 1, &[2, 0, 1]).unwrap();
        assert_eq!(c.used_colors().into_iter().collect::<Vec<_>>(), [0, 1, 2]);

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let c = firstfit(&p3, 1, &[0, 2, 1]).unwrap();
        assert_eq!(c, Coloring::from_colors(vec![0, 1, 0]));

        assert!(firstfit(&p3, 1, &[0, 0, 1]).is_err());
        assert!(firstfit(&p3, 1, &[0, 1]).is_err());
    }

    #[test]
    fn smallest_free_skips_taken() {
        assert_eq!(smallest_free(&mut [2, 0, 1, 4], 0), 3);
        assert_eq!(smallest_free(&mut [0, 1, 5], 2), 2);
        assert_eq!(smallest_free(&mut [3, 3, 4], 3), 5);
    }
}

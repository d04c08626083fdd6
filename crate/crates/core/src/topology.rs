//! Unit-disk grid topologies and data-gathering trees.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Transmission range in grid-step units, held as an exact reduced fraction.
///
/// Edges are decided by comparing squared lattice distances against
/// `num² / den²` in integers, so ranges such as 1.5 or 2.5 never flip an edge
/// through rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Range {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Range {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::invalid("range must be a positive fraction"));
        }
        let g = gcd(num, den);
        Ok(Range {
            num: num / g,
            den: den / g,
        })
    }

    pub const fn integer(r: u64) -> Self {
        Range { num: r, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Whether a lattice offset `(dx, dy)` lies within the disk of this radius.
    pub fn covers(&self, dx: i64, dy: i64) -> bool {
        let d2 = (dx * dx + dy * dy) as u128;
        d2 * (self.den as u128).pow(2) <= (self.num as u128).pow(2)
    }

    /// Largest integer not above the range.
    pub fn floor(&self) -> u64 {
        self.num / self.den
    }
}

impl PartialOrd for Range {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Range {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            return write!(f, "{}", self.num);
        }
        // Finite decimal expansion exists iff den only has factors 2 and 5.
        let mut d = self.den;
        while d.is_multiple_of(2) {
            d /= 2;
        }
        while d.is_multiple_of(5) {
            d /= 5;
        }
        if d != 1 {
            return write!(f, "{}/{}", self.num, self.den);
        }
        let mut scale = 1u64;
        let mut digits = 0;
        while !scale.is_multiple_of(self.den) {
            scale *= 10;
            digits += 1;
        }
        let scaled = self.num * (scale / self.den);
        let (int, frac) = (scaled / scale, scaled % scale);
        write!(f, "{int}.{frac:0digits$}")
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse range {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Range::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 9 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        Range::new(int * den + frac, den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub range: Range,
}

impl GridSpec {
    pub fn new(width: usize, height: usize, range: Range) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("grid dimensions must be at least 1x1"));
        }
        if range < Range::integer(1) {
            return Err(Error::invalid(format!(
                "range {range} is below the grid step; the grid would be disconnected"
            )));
        }
        Ok(GridSpec {
            width,
            height,
            range,
        })
    }

    pub fn node_count(&self) -> usize {
        self.width * self.height
    }

    pub fn node_id(&self, c: NodeCoord) -> NodeId {
        c.y as usize * self.width + c.x as usize
    }

    pub fn coord(&self, id: NodeId) -> NodeCoord {
        NodeCoord {
            x: (id % self.width) as i64,
            y: (id / self.width) as i64,
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Parses `WxH` (e.g. `30x30`).
pub fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::invalid(format!("grid size must look like 10x10, got {s:?}"));
    let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeCoord {
    pub x: i64,
    pub y: i64,
}

impl NodeCoord {
    pub const fn new(x: i64, y: i64) -> Self {
        NodeCoord { x, y }
    }
}

/// A grid topology: the unit-disk graph plus the coordinate of every node.
#[derive(Clone, Debug)]
pub struct Grid {
    pub spec: GridSpec,
    pub graph: Graph,
    pub coords: Vec<NodeCoord>,
}

/// One node per grid point, row-major ids (`y * width + x`), and an edge
/// between every pair at Euclidean distance at most the range.
pub fn build_grid(spec: GridSpec) -> Result<Grid> {
    let spec = GridSpec::new(spec.width, spec.height, spec.range)?;
    let reach = spec.range.floor() as i64;
    let (w, h) = (spec.width as i64, spec.height as i64);
    let offsets: Vec<(i64, i64)> = (-reach..=reach)
        .flat_map(|dy| (-reach..=reach).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy)| (dx, dy) > (0, 0) && spec.range.covers(dx, dy))
        .collect();
    let mut graph = Graph::empty(spec.node_count());
    let coords: Vec<NodeCoord> = (0..spec.node_count()).map(|id| spec.coord(id)).collect();
    for &c in &coords {
        for &(dx, dy) in &offsets {
            let (x, y) = (c.x + dx, c.y + dy);
            if (0..w).contains(&x) && (0..h).contains(&y) {
                graph.add_edge(spec.node_id(c), spec.node_id(NodeCoord::new(x, y)))?;
            }
        }
    }
    Ok(Grid {
        spec,
        graph,
        coords,
    })
}

/// Average number of neighbors per node.
pub fn average_density(g: &Graph) -> Result<f64> {
    if g.node_count() == 0 {
        return Err(Error::invalid("density of an empty graph is undefined"));
    }
    Ok(2.0 * g.edge_count() as f64 / g.node_count() as f64)
}

/// Degree of a node far from every border: lattice points at distance in
/// `(0, range]` from the origin.
pub fn interior_degree(range: Range) -> usize {
    let r = range.floor() as i64;
    (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy)| (dx, dy) != (0, 0) && range.covers(dx, dy))
        .count()
}

/// Rooted spanning tree given by parent links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    depth: Vec<usize>,
}

impl Tree {
    /// Validates that `parent[root]` is empty and every other node reaches
    /// the root through parent links without cycles.
    pub fn new(root: NodeId, parent: Vec<Option<NodeId>>) -> Result<Self> {
        let n = parent.len();
        if root >= n {
            return Err(Error::NotSpanning(format!("root {root} outside 0..{n}")));
        }
        if parent[root].is_some() {
            return Err(Error::NotSpanning(format!("root {root} has a parent")));
        }
        let mut depth: Vec<Option<usize>> = vec![None; n];
        depth[root] = Some(0);
        for start in 0..n {
            let mut chain = Vec::new();
            let mut cur = start;
            while depth[cur].is_none() {
                chain.push(cur);
                if chain.len() > n {
                    return Err(Error::NotSpanning(format!("cycle through node {start}")));
                }
                cur = match parent[cur] {
                    Some(p) if p < n => p,
                    Some(p) => {
                        return Err(Error::NotSpanning(format!(
                            "node {cur} has out-of-range parent {p}"
                        )))
                    }
                    None => return Err(Error::NotSpanning(format!("node {cur} has no parent"))),
                };
            }
            let mut d = depth[cur].unwrap();
            for &v in chain.iter().rev() {
                d += 1;
                depth[v] = Some(d);
            }
        }
        Ok(Tree {
            root,
            parent,
            depth: depth.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.parent[u]
    }

    pub fn depth(&self, u: NodeId) -> usize {
        self.depth[u]
    }

    /// Largest depth of any node.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn children(&self, u: NodeId) -> Vec<NodeId> {
        (0..self.node_count())
            .filter(|&v| self.parent[v] == Some(u))
            .collect()
    }

    /// For every node, the length of the longest downward path below it.
    pub fn subtree_heights(&self) -> Vec<usize> {
        let mut order: Vec<NodeId> = (0..self.node_count()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.depth[v]));
        let mut height = vec![0; self.node_count()];
        for v in order {
            if let Some(p) = self.parent[v] {
                height[p] = height[p].max(height[v] + 1);
            }
        }
        height
    }

    /// Every tree link is an edge of `g`.
    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        self.node_count() == g.node_count()
            && (0..self.node_count()).all(|v| self.parent[v].is_none_or(|p| g.has_edge(v, p)))
    }
}

/// Breadth-first spanning tree rooted at `root`; each node's parent is its
/// smallest-id neighbor one level closer to the root.
pub fn build_gathering_tree(g: &Graph, root: NodeId) -> Result<Tree> {
    g.check_node(root)?;
    let dist = g.distances_from(root, None);
    let mut parent = vec![None; g.node_count()];
    for v in g.nodes() {
        let Some(dv) = dist[v] else {
            return Err(Error::Disconnected { node: v, root });
        };
        if dv > 0 {
            parent[v] = g
                .neighbors(v)
                .iter()
                .copied()
                .find(|&u| dist[u] == Some(dv - 1));
        }
    }
    Tree::new(root, parent)
}

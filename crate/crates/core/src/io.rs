//! Plain-text formats: edge lists, `node,color` colorings, coordinate and
//! parent CSVs.
//!
//! Edge list: one `u v` pair per line, `#` starts a comment, blank lines are
//! skipped. When every label is a non-negative integer the labels are the node
//! ids and the node count is `max id + 1` (a `# nodes: N` comment may raise it
//! to cover trailing isolated nodes). Otherwise labels are mapped to ids in
//! order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph, NodeId};
use crate::topology::{NodeCoord, Tree};

#[derive(Clone, Debug)]
pub struct EdgeList {
    pub graph: Graph,
    /// Original labels when they were not plain integer ids.
    pub labels: Option<Vec<String>>,
}

impl EdgeList {
    pub fn label(&self, u: NodeId) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }
}

fn parse_err(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str, source_name: &str) -> Result<EdgeList> {
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    let mut declared_nodes = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(n) = c.trim().strip_prefix("nodes:") {
                declared_nodes = n
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(source_name, lineno, "bad `# nodes:` directive"))?;
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            [u, v] => pairs.push((lineno, u.to_string(), v.to_string())),
            _ => {
                return Err(parse_err(
                    source_name,
                    lineno,
                    format!("expected `u v`, got {:?}", body.trim()),
                ))
            }
        }
    }

    let numeric: Option<Vec<(usize, usize, usize)>> = pairs
        .iter()
        .map(|(l, u, v)| Some((*l, u.parse().ok()?, v.parse().ok()?)))
        .collect();

    let (n, edges, labels) = match numeric {
        Some(edges) => {
            let n = edges
                .iter()
                .map(|&(_, u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(0)
                .max(declared_nodes);
            (n, edges, None)
        }
        None => {
            let mut ids: HashMap<String, usize> = HashMap::new();
            let mut labels = Vec::new();
            let mut intern = |s: &String| {
                *ids.entry(s.clone()).or_insert_with(|| {
                    labels.push(s.clone());
                    labels.len() - 1
                })
            };
            let edges: Vec<_> = pairs
                .iter()
                .map(|(l, u, v)| (*l, intern(u), intern(v)))
                .collect();
            (labels.len(), edges, Some(labels))
        }
    };

    let mut graph = Graph::empty(n);
    for (lineno, u, v) in edges {
        graph
            .add_edge(u, v)
            .map_err(|e| parse_err(source_name, lineno, e.to_string()))?;
    }
    Ok(EdgeList { graph, labels })
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes: {}\n", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn format_coloring_csv(c: &Coloring) -> String {
    let mut out = String::from("node,color\n");
    for (u, color) in c.iter() {
        match color {
            Some(k) => {
                let _ = writeln!(out, "{u},{k}");
            }
            None => {
                let _ = writeln!(out, "{u},");
            }
        }
    }
    out
}

/// Reads a `node,color` CSV for a graph of `n` nodes. Missing rows or empty
/// color cells leave the node uncolored.
pub fn parse_coloring_csv(text: &str, n: usize, source_name: &str) -> Result<Coloring> {
    let mut coloring = Coloring::uncolored(n);
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if i == 0 && line.eq_ignore_ascii_case("node,color") {
            continue;
        }
        let (u, c) = line
            .split_once(',')
            .ok_or_else(|| parse_err(source_name, lineno, "expected `node,color`"))?;
        let u: NodeId = u
            .trim()
            .parse()
            .map_err(|_| parse_err(source_name, lineno, format!("bad node id {u:?}")))?;
        if u >= n {
            return Err(parse_err(
                source_name,
                lineno,
                format!("node {u} outside 0..{n}"),
            ));
        }
        let c = c.trim();
        if !c.is_empty() {
            let k = c
                .parse()
                .map_err(|_| parse_err(source_name, lineno, format!("bad color {c:?}")))?;
            coloring.set(u, k);
        }
    }
    Ok(coloring)
}

pub fn format_coords_csv(coords: &[NodeCoord]) -> String {
    let mut out = String::from("node,x,y\n");
    for (u, c) in coords.iter().enumerate() {
        let _ = writeln!(out, "{u},{},{}", c.x, c.y);
    }
    out
}

/// `node,parent` rows; the root has an empty parent cell.
pub fn format_tree_csv(t: &Tree) -> String {
    let mut out = String::from("node,parent\n");
    for u in 0..t.node_count() {
        match t.parent(u) {
            Some(p) => {
                let _ = writeln!(out, "{u},{p}");
            }
            None => {
                let _ = writeln!(out, "{u},");
            }
        }
    }
    out
}

pub fn parse_tree_csv(text: &str, n: usize, source_name: &str) -> Result<Tree> {
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut root = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line == "node,parent") {
            continue;
        }
        let (u, p) = line
            .split_once(',')
            .ok_or_else(|| parse_err(source_name, lineno, "expected `node,parent`"))?;
        let u: NodeId = u
            .trim()
            .parse()
            .ok()
            .filter(|&u| u < n)
            .ok_or_else(|| parse_err(source_name, lineno, format!("bad node {u:?}")))?;
        let p = p.trim();
        if p.is_empty() {
            root = Some(u);
        } else {
            parent[u] = Some(
                p.parse()
                    .map_err(|_| parse_err(source_name, lineno, format!("bad parent {p:?}")))?,
            );
        }
    }
    let root = root.ok_or_else(|| parse_err(source_name, 0, "no root row (empty parent)"))?;
    Tree::new(root, parent)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_edge_list_with_comments() {
        let text = "# a path\n0 1\n\n1 2 # trailing\n";
        let el = parse_edge_list(text, "t").unwrap();
        assert_eq!(el.graph.node_count(), 3);
        assert_eq!(el.graph.edge_count(), 2);
        assert!(el.labels.is_none());
    }

    #[test]
    fn labels_are_interned() {
        let el = parse_edge_list("a b\nb c\n", "t").unwrap();
        assert_eq!(el.labels.as_deref().unwrap(), ["a", "b", "c"]);
        assert!(el.graph.has_edge(1, 2));
        assert_eq!(el.label(2), "c");
    }

    #[test]
    fn node_directive_keeps_isolated_nodes() {
        let g = crate::graph::Graph::from_edges(4, [(0, 1)]).unwrap();
        let back = parse_edge_list(&format_edge_list(&g), "t").unwrap().graph;
        assert_eq!(back, g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\n1 1\n", "f.edges").unwrap_err();
        assert!(err.to_string().starts_with("f.edges:2"), "{err}");
        assert!(parse_edge_list("0 1 2\n", "f").is_err());
    }

    #[test]
    fn coloring_csv_round_trip() {
        let c = Coloring::from_partial(vec![Some(2), None, Some(0)]);
        let text = format_coloring_csv(&c);
        assert!(text.starts_with("node,color\n"));
        assert_eq!(parse_coloring_csv(&text, 3, "t").unwrap(), c);
        assert!(parse_coloring_csv("node,color\n5,1\n", 3, "t").is_err());
    }

    #[test]
    fn tree_csv_round_trip() {
        let t = Tree::new(1, vec![Some(1), None, Some(0)]).unwrap();
        assert_eq!(parse_tree_csv(&format_tree_csv(&t), 3, "t").unwrap(), t);
    }
}

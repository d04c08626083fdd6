//! Helpers shared by the integration tests: reference grid layouts, random
//! graphs and a brute-force coloring oracle that shares no code with the
//! library's solver.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hopcolor::Graph;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tiled 3-hop coloring for R = 1, as printed (1-based, right-aligned in
/// 2-character columns).
pub const TILED_R1: &str = "
      4
    5 8 3
  4 7 2 6 4
5 8 3 1 5 8 3
  2 6 4 7 2
    5 8 3
      2
";

pub const TILED_R15: &str = "
 9 16  7  8  9 16  7
13 10 11 12 13 10 11
 3 14  5  4  3 14  5
 2 15  6  1  2 15  6
 9 16  7  8  9 16  7
13 10 11 12 13 10 11
 3 14  5  4  3 14  5
";

pub const TILED_R2: &str = "
                  13
               18 25  6
             2  8 17 14 22
          5  7 16 20 23 12  4
      25  6 15 21 10 19 24 13  5
    8 17 14 22 11  3  9 18 25  6 15
 7 16 20 23 12  4  1  2  8 17 14 22 11
   21 10 19 24 13  5  7 16 20 23 12
       3  9 18 25  6 15 21 10 19
          2  8 17 14 22 11  3
            16 20 23 12  4
               10 19 24
                   9
";

pub const BASIC_R1: &str = "
7 2 6 4
3 1 5 8
";

pub const BASIC_R15: &str = "
10 11 12 13
14  5  4  3
15  6  1  2
16  7  8  9
";

pub const BASIC_R2: &str = "
          20
       21 10 19
    22 11  3  9 18
 23 12  4  1  2  8 17
    24 13  5  7 16
       25  6 15
          14
";

/// Parses right-aligned numbers on a fixed column pitch into
/// `(x, y) -> 1-based color`, with `x` counted in columns from the leftmost
/// cell.
pub fn parse_layout(text: &str, pitch: usize) -> BTreeMap<(i64, i64), usize> {
    let mut cells = BTreeMap::new();
    for (y, line) in text.trim_matches('\n').lines().enumerate() {
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let x = ((i - 1) / pitch) as i64;
                cells.insert((x, y as i64), line[start..i].parse().unwrap());
            } else {
                i += 1;
            }
        }
    }
    let min_x = cells.keys().map(|k| k.0).min().unwrap();
    cells
        .into_iter()
        .map(|((x, y), c)| ((x - min_x, y), c))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) with `p = num / 100`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, percent: u64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.next_u64() % 100 < percent {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_connected_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    loop {
        let n = 1 + (rng.next_u64() % max_n as u64) as usize;
        let percent = 20 + rng.next_u64() % 60;
        let g = random_graph(rng, n, percent);
        if g.is_connected() {
            return g;
        }
    }
}

/// All-pairs hop distances by Floyd-Warshall; `usize::MAX` for unreachable.
#[allow(clippy::needless_range_loop)]
pub fn all_pairs(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for &v in g.neighbors(u) {
            d[u][v] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Smallest k for which some assignment of `0..k` to the nodes keeps every
/// pair within `h` hops apart. Tries k = 1, 2, ... with plain backtracking.
/// With `parent`, also requires `color(parent) < color(child)`.
pub fn brute_chromatic(g: &Graph, h: usize, parent: Option<&[Option<usize>]>) -> usize {
    let n = g.node_count();
    if n == 0 {
        return 0;
    }
    let d = all_pairs(g);
    let clash = |u: usize, v: usize| u != v && d[u][v] <= h;
    fn fill(
        u: usize,
        k: usize,
        colors: &mut Vec<usize>,
        clash: &dyn Fn(usize, usize) -> bool,
        parent: Option<&[Option<usize>]>,
    ) -> bool {
        if u == colors.len() {
            return true;
        }
        let ordered = |colors: &[usize], v: usize, c: usize| match parent {
            Some(p) => (p[u] != Some(v) || colors[v] < c) && (p[v] != Some(u) || c < colors[v]),
            None => true,
        };
        for c in 0..k {
            if (0..u).all(|v| (!clash(u, v) || colors[v] != c) && ordered(colors, v, c)) {
                colors[u] = c;
                if fill(u + 1, k, colors, clash, parent) {
                    return true;
                }
            }
        }
        false
    }
    (1..=n)
        .find(|&k| fill(0, k, &mut vec![0; n], &clash, parent))
        .unwrap()
}

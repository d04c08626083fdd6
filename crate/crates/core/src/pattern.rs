//! Optimal periodic 3-hop colorings of grids.
//!
//! A basic pattern is a small set of cells, each holding a distinct color. A
//! lattice of translations whose index equals the color count copies it over
//! the whole plane; each node then derives its color from its coordinates
//! alone.
//!
//! Pattern text format: one row per line, space-separated 1-based colors,
//! `.` for an absent cell (used by diamond-shaped patterns).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{is_valid_coloring, Color, Coloring};
use crate::topology::{Grid, NodeCoord, Range};

const R1_PATTERN: &str = "\
7 2 6 4
3 1 5 8
";

const R15_PATTERN: &str = "\
10 11 12 13
14  5  4  3
15  6  1  2
16  7  8  9
";

const R2_PATTERN: &str = "\
 .  .  . 20  .  .  .
 .  . 21 10 19  .  .
 . 22 11  3  9 18  .
23 12  4  1  2  8 17
 . 24 13  5  7 16  .
 .  . 25  6 15  .  .
 .  .  . 14  .  .  .
";

const SUPPORTED_PATTERNS: &str = "1, 1.5, 2";
const SUPPORTED_REFERENCES: &str = "1, 1.5, 2, 2.5, 3";

/// A rectangle of cells (row-major, `None` = absent) holding 0-based colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPattern {
    rows: Vec<Vec<Option<Color>>>,
    color_count: usize,
    range: Range,
}

impl ColorPattern {
    /// Every color in `0..color_count` must appear, where `color_count` is
    /// one more than the largest color present.
    pub fn new(rows: Vec<Vec<Option<Color>>>, range: Range) -> Result<Self> {
        let max = rows.iter().flatten().flatten().copied().max();
        let Some(max) = max else {
            return Err(Error::invalid("pattern has no cells"));
        };
        let color_count = max + 1;
        let mut seen = vec![false; color_count];
        for &c in rows.iter().flatten().flatten() {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!(
                "pattern skips color {} (1-based)",
                missing + 1
            )));
        }
        Ok(ColorPattern {
            rows,
            color_count,
            range,
        })
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    pub fn range(&self) -> Range {
        self.range
    }

    pub fn width(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    /// Present cells as `(x, y, color)` with `x` the column and `y` the row.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64, Color)> + '_ {
        self.rows.iter().enumerate().flat_map(|(y, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(x, c)| c.map(|c| (x as i64, y as i64, c)))
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cells().count()
    }

    pub fn rows(&self) -> &[Vec<Option<Color>>] {
        &self.rows
    }
}

pub fn parse_pattern(text: &str, range: Range) -> Result<ColorPattern> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| match tok {
                "." => Ok(None),
                _ => match tok.parse::<usize>() {
                    Ok(label) if label >= 1 => Ok(Some(label - 1)),
                    _ => Err(Error::Parse {
                        source_name: "pattern".into(),
                        line: i + 1,
                        message: format!("expected a 1-based color or `.`, got {tok:?}"),
                    }),
                },
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    ColorPattern::new(rows, range)
}

/// Text form with 1-based labels, right-aligned columns.
pub fn format_pattern(p: &ColorPattern) -> String {
    let width = p.color_count.to_string().len();
    let mut out = String::new();
    for row in &p.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Some(c) => format!("{:>width$}", c + 1),
                None => format!("{:>width$}", "."),
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

/// The transcribed optimal basic pattern for ranges 1, 1.5 and 2.
pub fn builtin_pattern(range: Range) -> Result<ColorPattern> {
    let text = match (range.numerator(), range.denominator()) {
        (1, 1) => R1_PATTERN,
        (3, 2) => R15_PATTERN,
        (2, 1) => R2_PATTERN,
        _ => {
            return Err(Error::UnsupportedRange {
                range: range.to_string(),
                supported: SUPPORTED_PATTERNS.into(),
            })
        }
    };
    parse_pattern(text, range)
}

/// Optimal 3-hop color counts for grids: 8, 16, 25, 45, 68 for ranges
/// 1, 1.5, 2, 2.5, 3. Only the first three have a known pattern.
pub fn optimal_reference(range: Range) -> Result<usize> {
    match (range.numerator(), range.denominator()) {
        (1, 1) => Ok(8),
        (3, 2) => Ok(16),
        (2, 1) => Ok(25),
        (5, 2) => Ok(45),
        (3, 1) => Ok(68),
        _ => Err(Error::UnsupportedRange {
            range: range.to_string(),
            supported: SUPPORTED_REFERENCES.into(),
        }),
    }
}

/// Two integer translation vectors generating the tiling lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    pub u: (i64, i64),
    pub v: (i64, i64),
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl LatticeBasis {
    pub const fn new(u: (i64, i64), v: (i64, i64)) -> Self {
        LatticeBasis { u, v }
    }

    pub fn det(&self) -> i64 {
        self.u.0 * self.v.1 - self.u.1 * self.v.0
    }

    /// Hermite normal form `(a, b, d)`: the same lattice is generated by
    /// `(a, 0)` and `(b, d)` with `a, d > 0` and `0 <= b < a`.
    pub fn hermite(&self) -> Result<(i64, i64, i64)> {
        let det = self.det();
        if det == 0 {
            return Err(Error::invalid(
                "lattice basis vectors are linearly dependent",
            ));
        }
        let (d, alpha, beta) = ext_gcd(self.u.1, self.v.1);
        let a = det.abs() / d;
        let b = (alpha * self.u.0 + beta * self.v.0).rem_euclid(a);
        Ok((a, b, d))
    }

    /// Whether `p` is an integer combination of the basis vectors.
    pub fn contains(&self, p: (i64, i64)) -> bool {
        let det = self.det();
        det != 0
            && (p.0 * self.v.1 - p.1 * self.v.0) % det == 0
            && (self.u.0 * p.1 - self.u.1 * p.0) % det == 0
    }
}

/// Builtin lattices, first derived by [`infer_lattice`] and pinned here.
pub fn pinned_lattice(range: Range) -> Result<LatticeBasis> {
    match (range.numerator(), range.denominator()) {
        (1, 1) => Ok(LatticeBasis::new((4, 0), (2, 2))),
        (3, 2) => Ok(LatticeBasis::new((4, 0), (0, 4))),
        (2, 1) => Ok(LatticeBasis::new((25, 0), (7, 1))),
        _ => Err(Error::UnsupportedRange {
            range: range.to_string(),
            supported: SUPPORTED_PATTERNS.into(),
        }),
    }
}

/// A pattern together with a lattice under which its cells form one full
/// set of residues: a periodic coloring of the whole plane.
#[derive(Clone, Debug)]
pub struct Tiling {
    pattern: ColorPattern,
    basis: LatticeBasis,
    hnf: (i64, i64, i64),
    /// Color of every residue, indexed `y * a + x` inside the `a x d` box.
    lookup: Vec<Color>,
    /// A residue holding each color.
    anchor_cell: Vec<(i64, i64)>,
}

impl Tiling {
    pub fn new(pattern: ColorPattern, basis: LatticeBasis) -> Result<Self> {
        let (a, b, d) = basis.hermite()?;
        let count = pattern.color_count();
        if (a * d) as usize != count || pattern.cell_count() != count {
            return Err(Error::invalid(format!(
                "lattice index {} and pattern cell count {} must both equal the color count {count}",
                a * d,
                pattern.cell_count()
            )));
        }
        let mut lookup = vec![None; count];
        let mut anchor_cell = vec![(0, 0); count];
        for (x, y, c) in pattern.cells() {
            let (rx, ry) = reduce((a, b, d), (x, y));
            let slot = &mut lookup[(ry * a + rx) as usize];
            if slot.is_some() {
                return Err(Error::invalid(
                    "two pattern cells are translates of each other under this lattice",
                ));
            }
            *slot = Some(c);
            anchor_cell[c] = (rx, ry);
        }
        Ok(Tiling {
            pattern,
            basis,
            hnf: (a, b, d),
            lookup: lookup.into_iter().map(Option::unwrap).collect(),
            anchor_cell,
        })
    }

    pub fn pattern(&self) -> &ColorPattern {
        &self.pattern
    }

    pub fn basis(&self) -> LatticeBasis {
        self.basis
    }

    pub fn color_count(&self) -> usize {
        self.pattern.color_count()
    }

    /// Color of the node at `coord` when node `(0, 0)` takes `anchor_color`.
    /// Constant time; invariant under every lattice translation.
    ///
    /// Panics if `anchor_color` is not a pattern color.
    pub fn tile_color(&self, coord: NodeCoord, anchor_color: Color) -> Color {
        let (ax, ay) = self.anchor_cell[anchor_color];
        let (rx, ry) = reduce(self.hnf, (coord.x + ax, coord.y + ay));
        self.lookup[(ry * self.hnf.0 + rx) as usize]
    }
}

fn reduce((a, b, d): (i64, i64, i64), (x, y): (i64, i64)) -> (i64, i64) {
    let k = y.div_euclid(d);
    ((x - k * b).rem_euclid(a), y - k * d)
}

/// Colors every grid node from its coordinates.
pub fn color_grid_by_pattern(
    grid: &Grid,
    tiling: &Tiling,
    anchor_color: Color,
) -> Result<Coloring> {
    if tiling.pattern.range() != grid.spec.range {
        return Err(Error::invalid(format!(
            "pattern is for range {} but the grid has range {}",
            tiling.pattern.range(),
            grid.spec.range
        )));
    }
    if anchor_color >= tiling.color_count() {
        return Err(Error::invalid(format!(
            "anchor color {anchor_color} outside 0..{}",
            tiling.color_count()
        )));
    }
    Ok(Coloring::from_colors(
        grid.coords
            .iter()
            .map(|&c| tiling.tile_color(c, anchor_color))
            .collect(),
    ))
}

/// Searches every lattice of index `color_count` in Hermite normal form,
/// `(a, 0), (b, d)` with `a * d = color_count` and `0 <= b < a`, in
/// lexicographic order, and returns the first whose tiling is an h-hop valid
/// coloring of `grid`.
pub fn infer_lattice(pattern: &ColorPattern, grid: &Grid, h: usize) -> Result<LatticeBasis> {
    let diameter = pattern.width().max(pattern.height());
    if grid.spec.width < 5 * diameter || grid.spec.height < 5 * diameter {
        return Err(Error::invalid(format!(
            "grid {} is too small to validate a tiling; need at least {0}x{0}",
            5 * diameter
        )));
    }
    let count = pattern.color_count() as i64;
    for a in (1..=count).filter(|a| count % a == 0) {
        let d = count / a;
        for b in 0..a {
            let basis = LatticeBasis::new((a, 0), (b, d));
            let Ok(tiling) = Tiling::new(pattern.clone(), basis) else {
                continue;
            };
            let coloring = color_grid_by_pattern(grid, &tiling, 0)?;
            if is_valid_coloring(&grid.graph, &coloring, h)? {
                return Ok(basis);
            }
        }
    }
    Err(Error::NoValidLattice)
}

/// Tiling of the builtin pattern under its pinned lattice.
pub fn builtin_tiling(range: Range) -> Result<Tiling> {
    Tiling::new(builtin_pattern(range)?, pinned_lattice(range)?)
}

/// Relabels colors through `perm`, which must be a permutation of
/// `0..perm.len()` covering every color in use.
pub fn permute_colors(c: &Coloring, perm: &[Color]) -> Result<Coloring> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::invalid("color mapping is not a bijection"));
        }
    }
    let colors = c
        .iter()
        .map(|(u, col)| match col {
            Some(k) if k >= perm.len() => Err(Error::invalid(format!(
                "node {u} uses color {k}, outside the permutation"
            ))),
            other => Ok(other.map(|k| perm[k])),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Coloring::from_partial(colors))
}

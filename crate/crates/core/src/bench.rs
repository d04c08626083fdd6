//! Colors/rounds table for SERENA over grid sizes, ranges and priority schemes.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::is_valid_coloring;
use crate::pattern::optimal_reference;
use crate::serena::{run_serena, SchemeKind};
use crate::topology::{average_density, build_grid, GridSpec, Range};

pub const BENCH_HEADER: &str = "range,grid,density,optimal,scheme,colors_mean,rounds_mean,runs";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub range: Range,
    pub width: usize,
    pub height: usize,
    pub density: f64,
    pub optimal: Option<usize>,
    pub scheme: SchemeKind,
    pub colors_mean: f64,
    pub rounds_mean: f64,
    pub runs: usize,
}

impl BenchRow {
    /// Mean colors above the optimal reference, when one is known.
    pub fn gap(&self) -> Option<f64> {
        self.optimal.map(|o| self.colors_mean - o as f64)
    }
}

/// The 15 reference grids: ranges 1 to 3 in half steps, sides 10, 20 and 30.
pub fn table_one_grids() -> Vec<GridSpec> {
    let ranges = ["1", "1.5", "2", "2.5", "3"];
    ranges
        .iter()
        .flat_map(|r| {
            let range: Range = r.parse().unwrap();
            [10, 20, 30].map(move |s| GridSpec {
                width: s,
                height: s,
                range,
            })
        })
        .collect()
}

/// Runs every `(grid, scheme)` cell. Deterministic schemes run once; random
/// schemes run `runs` times with seeds `base_seed..base_seed + runs` and
/// report means. Every coloring is checked for 3-hop validity.
pub fn bench_table(
    grids: &[GridSpec],
    schemes: &[SchemeKind],
    runs: usize,
    base_seed: u64,
) -> Result<Vec<BenchRow>> {
    let runs = runs.max(1);
    let cells: Vec<(usize, SchemeKind, u64)> = grids
        .iter()
        .enumerate()
        .flat_map(|(gi, _)| {
            schemes.iter().flat_map(move |&k| {
                let n = if k.is_random() { runs } else { 1 };
                (0..n as u64).map(move |i| (gi, k, base_seed + i))
            })
        })
        .collect();
    let built = grids
        .par_iter()
        .map(|&spec| build_grid(spec))
        .collect::<Result<Vec<_>>>()?;
    let results = cells
        .par_iter()
        .map(|&(gi, kind, seed)| {
            let grid = &built[gi];
            let out = run_serena(
                &grid.graph,
                Some(&grid.coords),
                kind.with_seed(seed),
                None,
                3,
            )?;
            if !is_valid_coloring(&grid.graph, &out.coloring, 3)? {
                return Err(crate::error::Error::Internal(format!(
                    "invalid coloring for {} range {} {kind} seed {seed}",
                    grid.spec, grid.spec.range
                )));
            }
            Ok((gi, kind, out.colors, out.rounds))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (gi, grid) in built.iter().enumerate() {
        let density = average_density(&grid.graph)?;
        for &kind in schemes {
            let samples: Vec<(usize, usize)> = results
                .iter()
                .filter(|r| r.0 == gi && r.1 == kind)
                .map(|r| (r.2, r.3))
                .collect();
            let k = samples.len() as f64;
            rows.push(BenchRow {
                range: grid.spec.range,
                width: grid.spec.width,
                height: grid.spec.height,
                density,
                optimal: optimal_reference(grid.spec.range).ok(),
                scheme: kind,
                colors_mean: samples.iter().map(|s| s.0 as f64).sum::<f64>() / k,
                rounds_mean: samples.iter().map(|s| s.1 as f64).sum::<f64>() / k,
                runs: samples.len(),
            });
        }
    }
    Ok(rows)
}

fn fmt_mean(x: f64) -> String {
    let s = format!("{x:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// CSV with [`BENCH_HEADER`], optionally followed by a `gap` column.
pub fn format_bench_csv(rows: &[BenchRow], with_gap: bool) -> String {
    let mut out = String::from(BENCH_HEADER);
    if with_gap {
        out.push_str(",gap");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{}x{},{:.2},{},{},{},{},{}",
            r.range,
            r.width,
            r.height,
            r.density,
            r.optimal.map_or(String::new(), |o| o.to_string()),
            r.scheme,
            fmt_mean(r.colors_mean),
            fmt_mean(r.rounds_mean),
            r.runs
        );
        if with_gap {
            let _ = write!(out, ",{}", r.gap().map_or(String::new(), fmt_mean));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_list_gives_header_only() {
        let rows = bench_table(&[], &SchemeKind::ALL, 10, 0).unwrap();
        assert!(rows.is_empty());
        assert_eq!(format_bench_csv(&rows, false), format!("{BENCH_HEADER}\n"));
        assert_eq!(
            format_bench_csv(&rows, true),
            format!("{BENCH_HEADER},gap\n")
        );
    }

    #[test]
    fn one_line_row() {
        let spec = GridSpec::new(10, 10, "1".parse().unwrap()).unwrap();
        let rows = bench_table(&[spec], &[SchemeKind::Prio1Line], 10, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].runs, 1);
        assert_eq!(rows[0].colors_mean, 8.0);
        assert_eq!(rows[0].gap(), Some(0.0));
        let csv = format_bench_csv(&rows, true);
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "1,10x10,3.60,8,prio1-line,8,58,1,0"
        );
    }

    #[test]
    fn table_grid_list() {
        let grids = table_one_grids();
        assert_eq!(grids.len(), 15);
        assert_eq!(grids[14].to_string(), "30x30");
        assert_eq!(grids[14].range.to_string(), "3");
    }
}

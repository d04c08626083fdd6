//! Command-line front end. Every subcommand echoes its resolved configuration
//! to stderr and prints single-line `key=value` summaries to stdout.
//!
//! Exit status: 0 on success, 1 when a check ran and failed (invalid
//! coloring, failed lemma), 2 on errors. Errors print
//! `error category=<category> message=<text>` to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{bench_table, format_bench_csv, table_one_grids};
use crate::error::{Error, Result};
use crate::exact::{exact_chromatic, firstfit, Mode as SolveMode, DEFAULT_BUDGET};
use crate::graph::{find_conflict, find_strategic_violation, Coloring, Graph};
use crate::io::{
    format_coloring_csv, format_coords_csv, format_edge_list, format_tree_csv, parse_coloring_csv,
    parse_edge_list, read_file, write_file,
};
use crate::pattern::{
    builtin_pattern, builtin_tiling, color_grid_by_pattern, format_pattern, infer_lattice,
    parse_pattern, Tiling,
};
use crate::reduction::{build_tree_t, reduce, verify_equivalence, verify_lemmas, Verdict};
use crate::serena::{assign_priorities, priority_order, run_serena, SchemeKind};
use crate::topology::{
    average_density, build_gathering_tree, build_grid, parse_size, GridSpec, NodeCoord, Range, Tree,
};

#[derive(Parser, Debug)]
#[command(name = "hopcolor", version, about = "h-hop node coloring toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a unit-disk grid as an edge list plus a `node,x,y` CSV.
    Grid(GridArgs),
    /// Color a grid or an edge-list graph and validate the result.
    Color(ColorArgs),
    /// Check a `node,color` CSV against a graph.
    Validate(ValidateArgs),
    /// Build the layered reduction graph and optionally verify it.
    Reduce(ReduceArgs),
    /// Reproduce the SERENA colors/rounds table as CSV.
    Bench(BenchArgs),
    /// Exact h-hop chromatic number of an edge-list graph.
    Exact(ExactArgs),
    /// Print or normalize a basic color pattern.
    Pattern(PatternArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Pattern,
    Serena,
    Firstfit,
    Exact,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[default]
    General,
    Strategic,
}

/// Where the graph comes from: a generated grid or an edge-list file.
#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Grid size, `WxH`.
    #[arg(long, value_parser = parse_size_arg, conflicts_with = "edges")]
    pub size: Option<(usize, usize)>,
    /// Transmission range in grid steps, e.g. `1.5` or `3/2`.
    #[arg(long, default_value = "1")]
    pub range: Range,
    /// Edge-list file instead of a grid. Line priority schemes then order
    /// nodes by id.
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long, value_parser = parse_size_arg)]
    pub size: (usize, usize),
    #[arg(long, default_value = "1")]
    pub range: Range,
    /// Writes `<prefix>.edges` and `<prefix>.coords.csv`.
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[arg(long, value_enum, default_value = "serena")]
    pub engine: Engine,
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 3)]
    pub h: usize,
    #[arg(long, default_value = "prio1-line")]
    pub scheme: SchemeKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
    /// Root of the data gathering tree in strategic mode.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Color given to the pattern cell at the grid origin (0-based).
    #[arg(long, default_value_t = 0)]
    pub anchor: usize,
    /// Custom pattern file for the pattern engine; the lattice is inferred.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// Coloring CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub h: usize,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub h: usize,
    #[arg(long)]
    pub check_lemmas: bool,
    #[arg(long)]
    pub check_equivalence: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Writes `<prefix>.edges`, `<prefix>.roles.csv`, `<prefix>.tree.csv` and
    /// `<prefix>.report.txt`.
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated ranges; defaults to 1,1.5,2,2.5,3.
    #[arg(long, value_delimiter = ',')]
    pub ranges: Vec<Range>,
    /// Comma-separated sizes; defaults to 10x10,20x20,30x30.
    #[arg(long, value_delimiter = ',', value_parser = parse_size_arg)]
    pub sizes: Vec<(usize, usize)>,
    /// Comma-separated schemes; defaults to all four.
    #[arg(long, value_delimiter = ',')]
    pub schemes: Vec<SchemeKind>,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub h: usize,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    /// Built-in pattern for this range (1, 1.5 or 2).
    #[arg(long, default_value = "1")]
    pub range: Range,
    /// Pattern file to read instead of the built-in one.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_size_arg(s: &str) -> std::result::Result<(usize, usize), String> {
    parse_size(s).map_err(|e| e.to_string())
}

/// Failure of a check that ran to completion, as opposed to an error.
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_ERROR: i32 = 2;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = writeln!(stderr, "{e}");
                let _ = writeln!(stderr, "error category=usage message={}", e.kind());
                EXIT_ERROR
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
            return code;
        }
    };
    let _ = writeln!(stderr, "config {:?}", cli.command);
    match dispatch(cli.command, stdout) {
        Ok(true) => 0,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            let _ = writeln!(stderr, "error category={} message={e}", e.category());
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Grid(a) => cmd_grid(a, out),
        Command::Color(a) => cmd_color(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Reduce(a) => cmd_reduce(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Pattern(a) => cmd_pattern(a, out),
    }
}

fn say(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{line}").map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

struct Loaded {
    graph: Graph,
    coords: Vec<NodeCoord>,
    grid: Option<crate::topology::Grid>,
}

fn load_graph(src: &GraphSource) -> Result<Loaded> {
    match (&src.edges, src.size) {
        (Some(path), _) => {
            let text = read_file(path)?;
            let graph = parse_edge_list(&text, &path.display().to_string())?.graph;
            // Without positions the "line" is the id order.
            let coords = graph
                .nodes()
                .map(|v| NodeCoord { x: v as i64, y: 0 })
                .collect();
            Ok(Loaded {
                graph,
                coords,
                grid: None,
            })
        }
        (None, Some((w, h))) => {
            let grid = build_grid(GridSpec::new(w, h, src.range)?)?;
            Ok(Loaded {
                graph: grid.graph.clone(),
                coords: grid.coords.clone(),
                grid: Some(grid),
            })
        }
        (None, None) => Err(Error::invalid("give either --size or --edges")),
    }
}

fn tree_for(mode: ModeArg, g: &Graph, root: usize) -> Result<Option<Tree>> {
    match mode {
        ModeArg::General => Ok(None),
        ModeArg::Strategic => build_gathering_tree(g, root).map(Some),
    }
}

fn cmd_grid(a: GridArgs, out: &mut dyn Write) -> Result<bool> {
    let grid = build_grid(GridSpec::new(a.size.0, a.size.1, a.range)?)?;
    if let Some(prefix) = &a.out_prefix {
        write_file(
            &with_suffix(prefix, ".edges"),
            &format_edge_list(&grid.graph),
        )?;
        write_file(
            &with_suffix(prefix, ".coords.csv"),
            &format_coords_csv(&grid.coords),
        )?;
    }
    say(
        out,
        format_args!(
            "nodes={} edges={} density={:.2}",
            grid.graph.node_count(),
            grid.graph.edge_count(),
            average_density(&grid.graph)?
        ),
    )?;
    Ok(true)
}

fn cmd_color(a: ColorArgs, out: &mut dyn Write) -> Result<bool> {
    let loaded = load_graph(&a.source)?;
    let g = &loaded.graph;
    let tree = tree_for(a.mode, g, a.root)?;
    let scheme = a.scheme.with_seed(a.seed);
    let mut rounds = None;
    let mut proven = None;
    let coloring = match a.engine {
        Engine::Pattern => {
            let grid = loaded
                .grid
                .as_ref()
                .ok_or_else(|| Error::invalid("the pattern engine needs a grid (--size)"))?;
            if a.h != 3 {
                return Err(Error::invalid("patterns are 3-hop colorings; use --h 3"));
            }
            if tree.is_some() {
                return Err(Error::invalid("the pattern engine has no strategic mode"));
            }
            let tiling = match &a.pattern {
                Some(path) => {
                    let p = parse_pattern(&read_file(path)?, a.source.range)?;
                    let basis = infer_lattice(&p, grid, 3)?;
                    Tiling::new(p, basis)?
                }
                None => builtin_tiling(a.source.range)?,
            };
            color_grid_by_pattern(grid, &tiling, a.anchor)?
        }
        Engine::Serena => {
            let o = run_serena(g, Some(&loaded.coords), scheme, tree.as_ref(), a.h)?;
            rounds = Some(o.rounds);
            o.coloring
        }
        Engine::Firstfit => {
            if tree.is_some() {
                return Err(Error::invalid("firstfit has no strategic mode"));
            }
            let order = priority_order(&assign_priorities(g, Some(&loaded.coords), scheme)?);
            firstfit(g, a.h, &order)?
        }
        Engine::Exact => {
            let mode = match &tree {
                Some(t) => SolveMode::Strategic(t),
                None => SolveMode::General,
            };
            let r = exact_chromatic(g, a.h, mode, a.budget)?;
            proven = Some(r.is_exact());
            r.witness
        }
    };
    let valid = check(g, &coloring, a.h, tree.as_ref())?.is_none();
    if let Some(path) = &a.out {
        write_file(path, &format_coloring_csv(&coloring))?;
    }
    let engine = format!("{:?}", a.engine).to_lowercase();
    let mut line = format!(
        "engine={engine} colors={} rounds={} valid={valid}",
        coloring.color_count(),
        rounds.map_or("-".to_string(), |r| r.to_string())
    );
    if let Some(p) = proven {
        line.push_str(&format!(" proven={p}"));
    }
    say(out, line)?;
    Ok(valid)
}

/// Describes the first violation, if any.
fn check(g: &Graph, c: &Coloring, h: usize, tree: Option<&Tree>) -> Result<Option<String>> {
    match tree {
        Some(t) => Ok(find_strategic_violation(g, c, h, t)?.map(|v| v.to_string())),
        None => Ok(find_conflict(g, c, h)?.map(|v| v.to_string())),
    }
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn Write) -> Result<bool> {
    let loaded = load_graph(&a.source)?;
    let g = &loaded.graph;
    let text = read_file(&a.coloring)?;
    let c = parse_coloring_csv(&text, g.node_count(), &a.coloring.display().to_string())?;
    let tree = tree_for(a.mode, g, a.root)?;
    match check(g, &c, a.h, tree.as_ref())? {
        None => {
            say(out, format_args!("valid=true colors={}", c.color_count()))?;
            Ok(true)
        }
        Some(v) => {
            say(out, format_args!("valid=false violation=\"{v}\""))?;
            Ok(false)
        }
    }
}

fn cmd_reduce(a: ReduceArgs, out: &mut dyn Write) -> Result<bool> {
    let text = read_file(&a.edges)?;
    let g = parse_edge_list(&text, &a.edges.display().to_string())?.graph;
    let r = reduce(&g, a.h)?;
    let tree = build_tree_t(&r)?;
    let mut report = format!(
        "n={} p={} h={} m={} nodes={} edges={}\n",
        g.node_count(),
        g.edge_count(),
        a.h,
        r.added_nodes().len(),
        r.gprime.node_count(),
        r.gprime.edge_count()
    );
    let mut ok = true;
    if a.check_lemmas {
        let lemmas = verify_lemmas(&r)?;
        ok &= lemmas.passed();
        report.push_str(&lemmas.to_string());
    }
    if a.check_equivalence {
        let eq = verify_equivalence(&g, a.h, a.budget)?;
        ok &= eq.verdict == Verdict::Pass;
        report.push_str(&format!("equivalence {eq}\n"));
    }
    if let Some(prefix) = &a.out_prefix {
        write_file(&with_suffix(prefix, ".edges"), &format_edge_list(&r.gprime))?;
        write_file(&with_suffix(prefix, ".roles.csv"), &r.format_roles_csv())?;
        write_file(&with_suffix(prefix, ".tree.csv"), &format_tree_csv(&tree))?;
        write_file(&with_suffix(prefix, ".report.txt"), &report)?;
    }
    say(out, report.trim_end())?;
    Ok(ok)
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<bool> {
    let schemes = if a.schemes.is_empty() {
        SchemeKind::ALL.to_vec()
    } else {
        a.schemes.clone()
    };
    let grids = if a.ranges.is_empty() && a.sizes.is_empty() {
        table_one_grids()
    } else {
        let ranges = if a.ranges.is_empty() {
            ["1", "1.5", "2", "2.5", "3"]
                .map(|r| r.parse().unwrap())
                .to_vec()
        } else {
            a.ranges.clone()
        };
        let sizes = if a.sizes.is_empty() {
            vec![(10, 10), (20, 20), (30, 30)]
        } else {
            a.sizes.clone()
        };
        let mut grids = Vec::new();
        for &r in &ranges {
            for &(w, h) in &sizes {
                grids.push(GridSpec::new(w, h, r)?);
            }
        }
        grids
    };
    let rows = bench_table(&grids, &schemes, a.runs, a.seed)?;
    let csv = format_bench_csv(&rows, true);
    match &a.out {
        Some(path) => write_file(path, &csv)?,
        None => say(out, csv.trim_end())?,
    }
    Ok(true)
}

fn cmd_exact(a: ExactArgs, out: &mut dyn Write) -> Result<bool> {
    let text = read_file(&a.edges)?;
    let g = parse_edge_list(&text, &a.edges.display().to_string())?.graph;
    let tree = tree_for(a.mode, &g, a.root)?;
    let mode = match &tree {
        Some(t) => SolveMode::Strategic(t),
        None => SolveMode::General,
    };
    let r = exact_chromatic(&g, a.h, mode, a.budget)?;
    if let Some(v) = check(&g, &r.witness, a.h, tree.as_ref())? {
        return Err(Error::Internal(format!("solver witness is invalid: {v}")));
    }
    if let Some(path) = &a.out {
        write_file(path, &format_coloring_csv(&r.witness))?;
    }
    say(
        out,
        format_args!(
            "chromatic={} proven={} lower_bound={} nodes_explored={}",
            r.chromatic,
            r.is_exact(),
            r.lower_bound,
            r.nodes_explored
        ),
    )?;
    Ok(true)
}

fn cmd_pattern(a: PatternArgs, out: &mut dyn Write) -> Result<bool> {
    let p = match &a.input {
        Some(path) => parse_pattern(&read_file(path)?, a.range)?,
        None => builtin_pattern(a.range)?,
    };
    let text = format_pattern(&p);
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => say(out, text.trim_end())?,
    }
    say(
        out,
        format_args!(
            "colors={} cells={} width={} height={}",
            p.color_count(),
            p.cell_count(),
            p.width(),
            p.height()
        ),
    )?;
    Ok(true)
}

//! C ABI for `hopcolor`.
//!
//! Graphs and colorings are opaque heap handles released with
//! `hc_graph_free` / `hc_coloring_free`. Every fallible call returns an
//! [`HcStatus`]; on failure `hc_last_error_message` describes the error until
//! the next call on the same thread. Outputs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hopcolor::exact::{exact_chromatic, firstfit, Mode};
use hopcolor::graph::{find_conflict, find_strategic_violation, Coloring, Graph};
use hopcolor::pattern::{builtin_tiling, color_grid_by_pattern};
use hopcolor::serena::{run_serena, SchemeKind};
use hopcolor::topology::{build_gathering_tree, build_grid, Grid, GridSpec, NodeCoord, Range};
use hopcolor::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    IncompleteColoring = 3,
    Topology = 4,
    NoLattice = 5,
    Parse = 6,
    Io = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcScheme {
    Prio1Line = 0,
    Prio1Random = 1,
    Prio2Line = 2,
    Prio2Random = 3,
}

impl From<HcScheme> for SchemeKind {
    fn from(s: HcScheme) -> Self {
        match s {
            HcScheme::Prio1Line => SchemeKind::Prio1Line,
            HcScheme::Prio1Random => SchemeKind::Prio1Random,
            HcScheme::Prio2Line => SchemeKind::Prio2Line,
            HcScheme::Prio2Random => SchemeKind::Prio2Random,
        }
    }
}

/// Opaque graph handle. Grids keep their coordinates and range.
pub struct HcGraph {
    graph: Graph,
    grid: Option<Grid>,
}

/// Opaque coloring handle.
pub struct HcColoring {
    coloring: Coloring,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> HcStatus {
    match e.category() {
        "invalid-input" => HcStatus::InvalidInput,
        "incomplete-coloring" => HcStatus::IncompleteColoring,
        "topology" => HcStatus::Topology,
        "no-lattice" => HcStatus::NoLattice,
        "parse" => HcStatus::Parse,
        "io" => HcStatus::Io,
        _ => HcStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            HcStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside hopcolor".into());
            HcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    unsafe { p.as_ref() }.ok_or(Fail::Null(what))
}

fn check_out<T>(p: *mut T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail::Null(what))
    } else {
        Ok(())
    }
}

fn boxed_coloring(c: Coloring) -> *mut HcColoring {
    Box::into_raw(Box::new(HcColoring { coloring: c }))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next `hc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Unit-disk grid `width x height` with range `range_num / range_den`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn hc_grid_new(
    width: usize,
    height: usize,
    range_num: u64,
    range_den: u64,
    out: *mut *mut HcGraph,
) -> HcStatus {
    guard(|| {
        check_out(out, "out")?;
        let range = Range::new(range_num, range_den)?;
        let grid = build_grid(GridSpec::new(width, height, range)?)?;
        let handle = Box::new(HcGraph {
            graph: grid.graph.clone(),
            grid: Some(grid),
        });
        unsafe { *out = Box::into_raw(handle) };
        Ok(())
    })
}

/// Graph on `node_count` nodes from `edge_count` pairs stored flat in
/// `edges` (`2 * edge_count` ids).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable ids (may be NULL when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_graph_from_edges(
    node_count: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut HcGraph,
) -> HcStatus {
    guard(|| {
        check_out(out, "out")?;
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(Fail::Null("edges"));
        } else {
            unsafe { std::slice::from_raw_parts(edges, 2 * edge_count) }
        };
        let graph = Graph::from_edges(node_count, flat.chunks_exact(2).map(|p| (p[0], p[1])))?;
        unsafe { *out = Box::into_raw(Box::new(HcGraph { graph, grid: None })) };
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hc_graph_free(g: *mut HcGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// # Safety
/// `g` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn hc_graph_node_count(g: *const HcGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.node_count())
}

/// # Safety
/// `g` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn hc_graph_edge_count(g: *const HcGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.edge_count())
}

/// Coloring from `len` colors. Pass `HC_UNCOLORED` for uncolored nodes.
///
/// # Safety
/// `colors` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_coloring_new(
    colors: *const usize,
    len: usize,
    out: *mut *mut HcColoring,
) -> HcStatus {
    guard(|| {
        check_out(out, "out")?;
        let slice: &[usize] = if len == 0 {
            &[]
        } else if colors.is_null() {
            return Err(Fail::Null("colors"));
        } else {
            unsafe { std::slice::from_raw_parts(colors, len) }
        };
        let c = Coloring::from_partial(
            slice
                .iter()
                .map(|&c| (c != HC_UNCOLORED).then_some(c))
                .collect(),
        );
        unsafe { *out = boxed_coloring(c) };
        Ok(())
    })
}

/// Marker for an uncolored node.
pub const HC_UNCOLORED: usize = usize::MAX;

/// # Safety
/// `c` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hc_coloring_free(c: *mut HcColoring) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// # Safety
/// `c` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn hc_coloring_len(c: *const HcColoring) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.coloring.len())
}

/// Number of distinct colors used.
///
/// # Safety
/// `c` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn hc_coloring_color_count(c: *const HcColoring) -> usize {
    unsafe { c.as_ref() }.map_or(0, |c| c.coloring.color_count())
}

/// Color of `node`, or `HC_UNCOLORED`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_coloring_get(
    c: *const HcColoring,
    node: usize,
    out: *mut usize,
) -> HcStatus {
    guard(|| {
        let c = unsafe { deref(c, "coloring") }?;
        check_out(out, "out")?;
        if node >= c.coloring.len() {
            return Err(Error::UnknownNode(node).into());
        }
        unsafe { *out = c.coloring.get(node).unwrap_or(HC_UNCOLORED) };
        Ok(())
    })
}

fn strategic_tree(
    g: &Graph,
    strategic: bool,
    root: usize,
) -> Result<Option<hopcolor::topology::Tree>, Fail> {
    Ok(if strategic {
        Some(build_gathering_tree(g, root)?)
    } else {
        None
    })
}

/// Writes whether `c` is a valid h-hop coloring of `g`. In strategic mode
/// the breadth-first tree rooted at `root` must also be respected. An
/// incomplete coloring is an error, not `false`.
///
/// # Safety
/// `g`, `c` must be live handles; `out_valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_is_valid(
    g: *const HcGraph,
    c: *const HcColoring,
    h: usize,
    strategic: bool,
    root: usize,
    out_valid: *mut bool,
) -> HcStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        let c = unsafe { deref(c, "coloring") }?;
        check_out(out_valid, "out_valid")?;
        let valid = match strategic_tree(&g.graph, strategic, root)? {
            Some(t) => find_strategic_violation(&g.graph, &c.coloring, h, &t)?.is_none(),
            None => find_conflict(&g.graph, &c.coloring, h)?.is_none(),
        };
        unsafe { *out_valid = valid };
        Ok(())
    })
}

/// Runs SERENA. Line schemes use grid rows on grids and node ids otherwise.
/// `out_rounds` may be NULL.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_serena(
    g: *const HcGraph,
    scheme: HcScheme,
    seed: u64,
    h: usize,
    strategic: bool,
    root: usize,
    out: *mut *mut HcColoring,
    out_rounds: *mut usize,
) -> HcStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        check_out(out, "out")?;
        let coords: Vec<NodeCoord> = match &g.grid {
            Some(grid) => grid.coords.clone(),
            None => g
                .graph
                .nodes()
                .map(|v| NodeCoord { x: v as i64, y: 0 })
                .collect(),
        };
        let tree = strategic_tree(&g.graph, strategic, root)?;
        let kind = SchemeKind::from(scheme);
        let o = run_serena(
            &g.graph,
            Some(&coords),
            kind.with_seed(seed),
            tree.as_ref(),
            h,
        )?;
        if !out_rounds.is_null() {
            unsafe { *out_rounds = o.rounds };
        }
        unsafe { *out = boxed_coloring(o.coloring) };
        Ok(())
    })
}

/// Colors a grid handle with the built-in 3-hop pattern for its range.
///
/// # Safety
/// `g` must be a live grid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_pattern_color(
    g: *const HcGraph,
    anchor_color: usize,
    out: *mut *mut HcColoring,
) -> HcStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        check_out(out, "out")?;
        let grid = g
            .grid
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("pattern coloring needs a grid handle".into()))?;
        let tiling = builtin_tiling(grid.spec.range)?;
        let c = color_grid_by_pattern(grid, &tiling, anchor_color)?;
        unsafe { *out = boxed_coloring(c) };
        Ok(())
    })
}

/// FirstFit over `order` (a permutation of the node ids).
///
/// # Safety
/// `order` must point to `len` readable ids; `g` must be a live handle;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_firstfit(
    g: *const HcGraph,
    h: usize,
    order: *const usize,
    len: usize,
    out: *mut *mut HcColoring,
) -> HcStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        check_out(out, "out")?;
        let order: &[usize] = if len == 0 {
            &[]
        } else if order.is_null() {
            return Err(Fail::Null("order"));
        } else {
            unsafe { std::slice::from_raw_parts(order, len) }
        };
        let c = firstfit(&g.graph, h, order)?;
        unsafe { *out = boxed_coloring(c) };
        Ok(())
    })
}

/// Exact h-hop chromatic number within `budget` search nodes. `out_proven`
/// is false when the budget ran out and the result is only an upper bound.
/// `out_chromatic` and `out_proven` may be NULL.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_exact(
    g: *const HcGraph,
    h: usize,
    strategic: bool,
    root: usize,
    budget: u64,
    out: *mut *mut HcColoring,
    out_chromatic: *mut usize,
    out_proven: *mut bool,
) -> HcStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        check_out(out, "out")?;
        let tree = strategic_tree(&g.graph, strategic, root)?;
        let mode = match &tree {
            Some(t) => Mode::Strategic(t),
            None => Mode::General,
        };
        let r = exact_chromatic(&g.graph, h, mode, budget)?;
        if !out_chromatic.is_null() {
            unsafe { *out_chromatic = r.chromatic };
        }
        if !out_proven.is_null() {
            unsafe { *out_proven = r.is_exact() };
        }
        unsafe { *out = boxed_coloring(r.witness) };
        Ok(())
    })
}

use std::ffi::CStr;
use std::ptr;

use hopcolor_ffi::*;

fn last_error() -> String {
    let p = hc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn triangle_with_tail() -> *mut HcGraph {
    let edges: [usize; 8] = [0, 1, 1, 2, 0, 2, 2, 3];
    let mut g = ptr::null_mut();
    let s = unsafe { hc_graph_from_edges(4, edges.as_ptr(), 4, &mut g) };
    assert_eq!(s, HcStatus::Ok);
    g
}

#[test]
fn grid_handle_and_pattern() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { hc_grid_new(30, 30, 2, 1, &mut g) }, HcStatus::Ok);
    assert_eq!(unsafe { hc_graph_node_count(g) }, 900);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { hc_pattern_color(g, 3, &mut c) }, HcStatus::Ok);
    assert_eq!(unsafe { hc_coloring_color_count(c) }, 25);
    let mut first = 0;
    assert_eq!(unsafe { hc_coloring_get(c, 0, &mut first) }, HcStatus::Ok);
    assert_eq!(first, 3);
    let mut valid = false;
    assert_eq!(
        unsafe { hc_is_valid(g, c, 3, false, 0, &mut valid) },
        HcStatus::Ok
    );
    assert!(valid);
    unsafe {
        hc_coloring_free(c);
        hc_graph_free(g);
    }
}

#[test]
fn serena_firstfit_and_exact_agree_on_small_graph() {
    let g = triangle_with_tail();
    let mut s = ptr::null_mut();
    let mut rounds = 0;
    assert_eq!(
        unsafe { hc_serena(g, HcScheme::Prio1Line, 0, 1, false, 0, &mut s, &mut rounds) },
        HcStatus::Ok
    );
    assert!(rounds > 1);
    let order = [3usize, 2, 1, 0];
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { hc_firstfit(g, 1, order.as_ptr(), 4, &mut f) },
        HcStatus::Ok
    );
    let mut e = ptr::null_mut();
    let (mut k, mut proven) = (0, false);
    assert_eq!(
        unsafe { hc_exact(g, 1, false, 0, 1_000_000, &mut e, &mut k, &mut proven) },
        HcStatus::Ok
    );
    assert_eq!((k, proven), (3, true));
    for c in [s, f, e] {
        assert_eq!(unsafe { hc_coloring_color_count(c) }, 3);
        assert_eq!(unsafe { hc_coloring_len(c) }, 4);
        unsafe { hc_coloring_free(c) };
    }
    let mut sk = 0;
    assert_eq!(
        unsafe { hc_exact(g, 2, true, 3, 1_000_000, &mut e, &mut sk, ptr::null_mut()) },
        HcStatus::Ok
    );
    let mut valid = false;
    assert_eq!(
        unsafe { hc_is_valid(g, e, 2, true, 3, &mut valid) },
        HcStatus::Ok
    );
    assert!(valid && sk >= 4);
    unsafe {
        hc_coloring_free(e);
        hc_graph_free(g);
    }
}

#[test]
fn custom_colorings_and_incomplete_input() {
    let g = triangle_with_tail();
    let colors = [0usize, 1, 2, HC_UNCOLORED];
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { hc_coloring_new(colors.as_ptr(), 4, &mut c) },
        HcStatus::Ok
    );
    let mut got = 0;
    assert_eq!(unsafe { hc_coloring_get(c, 3, &mut got) }, HcStatus::Ok);
    assert_eq!(got, HC_UNCOLORED);
    let mut valid = true;
    assert_eq!(
        unsafe { hc_is_valid(g, c, 1, false, 0, &mut valid) },
        HcStatus::IncompleteColoring
    );
    assert!(last_error().contains("node 3"));
    assert_eq!(
        unsafe { hc_coloring_get(c, 9, &mut got) },
        HcStatus::InvalidInput
    );
    unsafe {
        hc_coloring_free(c);
        hc_graph_free(g);
    }
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { hc_grid_new(5, 5, 1, 2, &mut g) },
        HcStatus::InvalidInput
    );
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { hc_grid_new(5, 5, 1, 1, ptr::null_mut()) },
        HcStatus::NullPointer
    );
    assert!(last_error().contains("out"));

    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { hc_pattern_color(ptr::null(), 0, &mut c) },
        HcStatus::NullPointer
    );

    let edges = [0usize, 7];
    assert_eq!(
        unsafe { hc_graph_from_edges(3, edges.as_ptr(), 1, &mut g) },
        HcStatus::InvalidInput
    );

    let tree_graph = triangle_with_tail();
    let disconnected = [0usize, 1];
    let mut two = ptr::null_mut();
    assert_eq!(
        unsafe { hc_graph_from_edges(3, disconnected.as_ptr(), 1, &mut two) },
        HcStatus::Ok
    );
    assert_eq!(
        unsafe {
            hc_serena(
                two,
                HcScheme::Prio2Random,
                1,
                3,
                true,
                0,
                &mut c,
                ptr::null_mut(),
            )
        },
        HcStatus::Topology
    );
    assert_eq!(
        unsafe { hc_pattern_color(tree_graph, 0, &mut c) },
        HcStatus::InvalidInput
    );

    // A successful call clears the previous message.
    assert_eq!(unsafe { hc_graph_edge_count(two) }, 1);
    let mut n = ptr::null_mut();
    assert_eq!(unsafe { hc_grid_new(2, 2, 1, 1, &mut n) }, HcStatus::Ok);
    assert!(hc_last_error_message().is_null());
    unsafe {
        hc_graph_free(n);
        hc_graph_free(two);
        hc_graph_free(tree_graph);
        hc_graph_free(ptr::null_mut());
        hc_coloring_free(ptr::null_mut());
    }
}

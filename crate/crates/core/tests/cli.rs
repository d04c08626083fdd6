use std::fs;
use std::process::Command;

use hopcolor::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("hopcolor").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn grid_summary_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("g");
    let (code, out, err) = call(&[
        "grid",
        "--size",
        "10x10",
        "--range",
        "1",
        "--out-prefix",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.trim(), "nodes=100 edges=180 density=3.60");
    assert!(err.starts_with("config Grid("));
    let edges = fs::read_to_string(dir.path().join("g.edges")).unwrap();
    assert_eq!(edges.lines().filter(|l| !l.starts_with('#')).count(), 180);
    let coords = fs::read_to_string(dir.path().join("g.coords.csv")).unwrap();
    assert_eq!(coords.lines().next(), Some("node,x,y"));
    assert_eq!(coords.lines().nth(12), Some("11,1,1"));

    let (_, out, _) = call(&["grid", "--size", "2x2", "--range", "1"]);
    assert!(out.contains("edges=4 "));
    let (_, out, _) = call(&["grid", "--size", "10x10", "--range", "1.5"]);
    assert!(out.contains("density=6.84"));
}

#[test]
fn color_engines() {
    let (code, out, _) = call(&[
        "color", "--engine", "pattern", "--size", "30x30", "--range", "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "engine=pattern colors=25 rounds=- valid=true");
    let (_, out, _) = call(&[
        "color",
        "--engine",
        "serena",
        "--size",
        "20x20",
        "--range",
        "1.5",
        "--scheme",
        "prio1-line",
    ]);
    assert_eq!(out.trim(), "engine=serena colors=16 rounds=137 valid=true");
    let (_, out, _) = call(&[
        "color", "--engine", "firstfit", "--size", "10x10", "--range", "1",
    ]);
    assert!(out.contains("colors=8 ") && out.contains("valid=true"));
}

#[test]
fn exact_on_edge_list_with_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("six.edges");
    fs::write(
        &edges,
        "# hexagon with a chord\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n0 3\n",
    )
    .unwrap();
    let witness = dir.path().join("w.csv");
    let e = edges.to_str().unwrap();
    let (code, out, _) = call(&[
        "exact",
        "--edges",
        e,
        "--h",
        "1",
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("chromatic=2 proven=true"), "{out}");
    let (code, out, _) = call(&[
        "validate",
        "--edges",
        e,
        "--h",
        "1",
        "--coloring",
        witness.to_str().unwrap(),
    ]);
    assert_eq!((code, out.trim()), (0, "valid=true colors=2"));
    let (code, out, _) = call(&[
        "validate",
        "--edges",
        e,
        "--h",
        "2",
        "--coloring",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("valid=false"));

    let (code, out, _) = call(&[
        "color",
        "--engine",
        "exact",
        "--edges",
        e,
        "--h",
        "1",
        "--mode",
        "strategic",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("valid=true proven=true"), "{out}");
}

#[test]
fn reduce_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("p3.edges");
    fs::write(&edges, "0 1\n1 2\n").unwrap();
    let prefix = dir.path().join("r");
    let (code, out, err) = call(&[
        "reduce",
        "--edges",
        edges.to_str().unwrap(),
        "--h",
        "4",
        "--check-lemmas",
        "--check-equivalence",
        "--out-prefix",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("verdict=Pass"));
    assert!(!out.contains("FAIL"));
    for suffix in [".edges", ".roles.csv", ".tree.csv", ".report.txt"] {
        let mut p = prefix.as_os_str().to_owned();
        p.push(suffix);
        assert!(fs::metadata(&p).is_ok(), "missing {suffix}");
    }
    let mut roles = prefix.as_os_str().to_owned();
    roles.push(".roles.csv");
    let roles = fs::read_to_string(roles).unwrap();
    assert!(roles.ends_with(",u0\n"));
}

#[test]
fn bench_single_row_and_empty_grid_list() {
    let (code, out, _) = call(&[
        "bench",
        "--ranges",
        "1",
        "--sizes",
        "10x10",
        "--schemes",
        "prio1-line",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(
        lines[0],
        "range,grid,density,optimal,scheme,colors_mean,rounds_mean,runs,gap"
    );
    assert_eq!(lines[1], "1,10x10,3.60,8,prio1-line,8,58,1,0");
}

#[test]
fn pattern_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    let (code, _, _) = call(&["pattern", "--range", "2", "--out", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = call(&["pattern", "--range", "2", "--input", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out
        .trim_end()
        .ends_with("colors=25 cells=25 width=7 height=7"));
    let (code, out, _) = call(&[
        "color",
        "--engine",
        "pattern",
        "--size",
        "40x40",
        "--range",
        "2",
        "--pattern",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("colors=25") && out.contains("valid=true"));
}

#[test]
fn errors_carry_a_category() {
    let (code, _, err) = call(&[
        "color", "--engine", "pattern", "--size", "10x10", "--range", "3",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("error category=invalid-input"));
    let (code, _, err) = call(&["exact", "--edges", "/nonexistent/x.edges"]);
    assert_eq!(code, 2);
    assert!(err.contains("error category=io"));
    let (code, _, err) = call(&["grid", "--size", "ten"]);
    assert_eq!(code, 2);
    assert!(err.contains("error category=usage"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_hopcolor");
    let ok = Command::new(bin)
        .args(["grid", "--size", "3x3"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    assert_eq!(
        String::from_utf8_lossy(&ok.stdout).trim(),
        "nodes=9 edges=12 density=2.67"
    );
    let bad = Command::new(bin)
        .args(["grid", "--size", "3x3", "--range", "0.5"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

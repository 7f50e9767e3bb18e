use std::process::Command;

use cfk::doubles::build_double_complex;
use cfk::filtered::{from_staircase, tensor, FilteredComplex, LatticePoint};
use cfk::staircase::{delta_whitehead, tau, torus_staircase, vertices};
use cfk::Staircase;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cfk(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["cfk"];
    argv.extend_from_slice(args);
    let code = cfk_cli::run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn cfk_json(args: &[&str]) -> Value {
    let mut argv = args.to_vec();
    argv.push("--json");
    let r = cfk(&argv);
    assert_eq!(r.code, 0, "{args:?}: {}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["schema"], "cfk-1");
    v
}

#[test]
fn torus_report() {
    let v = cfk_json(&["torus", "3", "4"]);
    assert_eq!(v["delta_whitehead"], -8);
    assert_eq!(v["tau"], 3);
    assert_eq!(v["steps"], serde_json::json!([1, 2, 2, 1]));
    let text = cfk(&["torus", "3", "4"]);
    assert_eq!(text.code, 0);
    assert!(text.out.lines().any(|l| l.starts_with("delta(D)") && l.ends_with("-8")));
}

#[test]
fn report_numbers_match_library() {
    for (p, q) in [(2, 3), (2, 7), (3, 4), (3, 7), (5, 6)] {
        let v = cfk_json(&["torus", &p.to_string(), &q.to_string()]);
        let s = torus_staircase(p, q).unwrap();
        assert_eq!(v["tau"], tau(&s));
        assert_eq!(v["delta_whitehead"], delta_whitehead(&s));
        assert_eq!(v["vertices"], serde_json::to_value(vertices(&s)).unwrap());
        assert_eq!(
            v["alexander_terms"],
            serde_json::to_value(cfk::laurent::alexander_torus(p, q).unwrap()).unwrap()
        );
    }
}

#[test]
fn staircase_report() {
    let v = cfk_json(&["staircase", "1,1"]);
    assert_eq!(
        (v["tau"].as_i64(), v["d1"].as_i64(), v["delta_whitehead"].as_i64()),
        (Some(1), Some(-2), Some(-4))
    );
    let unknot = cfk_json(&["staircase", ""]);
    assert_eq!(unknot["delta_whitehead"], 0);
}

#[test]
fn usage_errors_exit_two() {
    let r = cfk(&["torus", "2", "4"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("p,q must be coprime"), "{}", r.err);
    assert_eq!(cfk(&["torus", "1", "5"]).code, 2);
    assert_eq!(cfk(&["knot", "3"]).code, 2);
    assert_eq!(cfk(&["staircase", "1,x"]).code, 2);
    let r = cfk(&["staircase", "1,2"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("palindromic"));
    assert_eq!(cfk(&["double", "0"]).code, 2);
    assert_eq!(cfk(&["diagram", "staircase", "1,1"]).code, 2);
    assert_eq!(cfk(&["table", "--family", "pretzel:3"]).code, 2);
    assert_eq!(cfk(&["table", "--family", "torus:5", "--format", "xml"]).code, 2);
}

#[test]
fn help_exits_zero() {
    let r = cfk(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("classify"));
}

#[test]
fn double_report_with_checks() {
    let v = cfk_json(&["double", "2", "--verify", "--delta2"]);
    assert_eq!(v["generators"], 31);
    assert_eq!(v["splitting"]["trefoil_summand"], true);
    assert_eq!(v["splitting"]["acyclic_rest"], "certified-acyclic");
    assert_eq!(v["splitting"]["components"].as_array().unwrap().len(), 8);
    assert_eq!(v["delta_double_double"]["value"], -4);
    assert_eq!(v["delta_double_double"]["agree"], true);
    let ranks: u64 = v["hfk"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["rank"].as_u64().unwrap())
        .sum();
    assert_eq!(ranks, 31);
    let plain = cfk_json(&["double", "1"]);
    assert!(plain.get("splitting").is_none());
}

#[test]
fn classify_reports() {
    let v = cfk_json(&["classify", "torus", "2", "7"]);
    assert_eq!(v["verdict"], "DISTINGUISHABLE");
    assert_eq!(v["delta_whitehead"], -12);
    let v = cfk_json(&["classify", "staircase", "1,1,1,1"]);
    assert_eq!(v["verdict"], "SPECIAL-CASE-DISTINGUISHABLE");
    assert_eq!(v["psi"], serde_json::json!([[1, -2], [1, -1]]));
    assert_eq!(v["summand"], true);
    let v = cfk_json(&["classify", "torus", "3", "4"]);
    assert_eq!(v["verdict"], "INCONCLUSIVE");
    assert!(!v["notes"].as_array().unwrap().is_empty());
    let v = cfk_json(&["classify", "torus", "2", "3"]);
    assert_eq!(v["verdict"], "INCONCLUSIVE");
}

#[test]
fn json_is_deterministic() {
    let cases: [&[&str]; 5] = [
        &["torus", "5", "7", "--json"],
        &["double", "2", "--verify", "--delta2", "--json"],
        &["classify", "torus", "2", "5", "--json"],
        &["table", "--family", "torus:7", "--format", "json"],
        &["table", "--family", "t2:1..4", "--format", "csv"],
    ];
    for args in cases {
        let first = cfk(args);
        let second = cfk(args);
        assert_eq!(first.code, 0);
        assert_eq!(first.out.as_bytes(), second.out.as_bytes(), "{args:?}");
    }
}

fn write_complex(dir: &tempfile::TempDir, name: &str, c: &FilteredComplex) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(c).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn d1_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let trefoil = from_staircase(&Staircase::twist_family(1));
    let path = write_complex(&dir, "square.json", &tensor(&trefoil, &trefoil));
    let v = cfk_json(&["d1", "--complex", &path]);
    assert_eq!(v["d1"], -2);
    assert_eq!(v["generators"], 9);

    let double = write_complex(&dir, "double.json", &build_double_complex(3).unwrap());
    assert_eq!(cfk_json(&["d1", "--complex", &double])["d1"], -2);

    let boxed = FilteredComplex::from_lattice(
        &[
            LatticePoint::new("a", 1, 1, 0),
            LatticePoint::new("b", 0, 1, -1),
            LatticePoint::new("c", 1, 0, -1),
            LatticePoint::new("d", 0, 0, -2),
        ],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )
    .unwrap();
    let path = write_complex(&dir, "box.json", &boxed);
    let r = cfk(&["d1", "--complex", &path]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("not a knot complex"), "{}", r.err);

    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        r#"{"generators":[{"name":"a","alexander":0,"maslov":0},{"name":"b","alexander":0,"maslov":0}],"arrows":[{"from":"a","to":"b","upower":0}]}"#,
    )
    .unwrap();
    assert_eq!(cfk(&["d1", "--complex", broken.to_str().unwrap()]).code, 1);
    assert_eq!(cfk(&["d1", "--complex", "/nonexistent/file.json"]).code, 1);
}

fn csv_column(text: &str, column: &str) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let idx = reader.headers().unwrap().iter().position(|h| h == column).unwrap();
    reader.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

#[test]
fn tables() {
    let r = cfk(&["table", "--family", "t2:1..5", "--format", "csv"]);
    assert_eq!(r.code, 0);
    assert!(r
        .out
        .starts_with("knot,p,q,steps,tau,d1,delta_whitehead,delta_double_double,verdict\n"));
    assert_eq!(csv_column(&r.out, "delta_whitehead"), ["-4", "-8", "-12", "-16", "-20"]);
    assert_eq!(csv_column(&r.out, "delta_double_double"), ["-4"; 5]);

    let r = cfk(&["table", "--family", "torus:5", "--format", "csv"]);
    let p = csv_column(&r.out, "p");
    let q = csv_column(&r.out, "q");
    let t = csv_column(&r.out, "tau");
    assert_eq!(p.len(), 5);
    for k in 0..p.len() {
        let (p, q): (i64, i64) = (p[k].parse().unwrap(), q[k].parse().unwrap());
        assert_eq!(t[k].parse::<i64>().unwrap(), (p - 1) * (q - 1) / 2);
    }

    let v: Value = serde_json::from_str(&cfk(&["table", "--family", "t2:1..1", "--format", "json"]).out).unwrap();
    assert_eq!(v["schema"], "cfk-1");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["delta_double_double"], -4);

    for empty in ["t2:3..2", "torus:2"] {
        assert_eq!(cfk(&["table", "--family", empty]).code, 2);
    }
}

struct Svg {
    dots: Vec<(f64, f64)>,
    arrows: usize,
    axes: usize,
}

fn read_svg(path: &std::path::Path) -> Svg {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed SVG");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("version"), Some("1.1"));
    let class = |n: &roxmltree::Node, c: &str| n.attribute("class") == Some(c);
    let dots = doc
        .descendants()
        .filter(|n| n.has_tag_name("circle") && class(n, "generator"))
        .map(|n| {
            (
                n.attribute("cx").unwrap().parse().unwrap(),
                n.attribute("cy").unwrap().parse().unwrap(),
            )
        })
        .collect();
    let arrows = doc.descendants().filter(|n| class(n, "arrow")).count();
    let axes = doc.descendants().filter(|n| class(n, "axis")).count();
    Svg { dots, arrows, axes }
}

#[test]
fn svg_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t34.svg");
    let r = cfk(&["diagram", "staircase", "1,2,2,1", "--svg", p.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    let svg = read_svg(&p);
    assert_eq!((svg.dots.len(), svg.arrows, svg.axes), (5, 4, 2));
    // dots sit on a lattice whose cells are equal; recover (i, j) up to scale
    let xs: Vec<f64> = svg.dots.iter().map(|d| d.0).collect();
    let ys: Vec<f64> = svg.dots.iter().map(|d| d.1).collect();
    let x0 = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let y0 = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cell = (xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - x0) / 3.0;
    let cells: Vec<(i64, i64)> = svg
        .dots
        .iter()
        .map(|&(x, y)| (((x - x0) / cell).round() as i64, ((y0 - y) / cell).round() as i64))
        .collect();
    assert_eq!(cells, vec![(0, 3), (1, 3), (1, 1), (3, 1), (3, 0)]);

    let p = dir.path().join("unknot.svg");
    assert_eq!(cfk(&["diagram", "staircase", "", "--svg", p.to_str().unwrap()]).code, 0);
    let svg = read_svg(&p);
    assert_eq!((svg.dots.len(), svg.arrows), (1, 0));

    let p = dir.path().join("square.svg");
    let v = cfk_json(&["diagram", "torus", "3", "4", "--square", "--svg", p.to_str().unwrap()]);
    assert_eq!(v["dots"], 25);
    let svg = read_svg(&p);
    assert_eq!((svg.dots.len(), svg.arrows), (25, 40));

    let p = dir.path().join("double.svg");
    assert_eq!(cfk(&["diagram", "double", "2", "--svg", p.to_str().unwrap()]).code, 0);
    let svg = read_svg(&p);
    assert_eq!((svg.dots.len(), svg.arrows), (31, 30));

    let r = cfk(&["diagram", "staircase", "1,1", "--svg", "/nonexistent/dir/out.svg"]);
    assert_eq!(r.code, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cfk");
    let ok = Command::new(bin).args(["staircase", "1,1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("tau"));
    let bad = Command::new(bin).args(["torus", "2", "4"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("p,q must be coprime"));
}

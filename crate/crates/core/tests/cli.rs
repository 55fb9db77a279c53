use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mppenc::encoding::io::read_csv;
use mppenc::encoding::make_grids;
use mppenc::geometry::Frame;
use tempfile::TempDir;

const FIG1: &str = "POINT (120 80)\nLINESTRING (50 250, 350 50)\nPOLYGON ((200 150, 300 150, 300 250, 200 250, 200 150))\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mppenc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

/// Every file of `a` except timings.json is byte-identical in `b`.
fn same_outputs(a: &Path, b: &Path) {
    let mut names: Vec<_> = fs::read_dir(a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "timings.json")
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n} differs");
    }
}

#[test]
fn encode_worked_example_gives_three_rows_of_twelve() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("fig1.wkt"), FIG1).unwrap();
    let args = ["encode", "fig1.wkt", "--frame", "400", "300", "--resolution", "100", "--scale", "100"];
    let o = run(t.path(), &[&args[..], &["--out", "a"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(t.path().join("a/encodings.csv"));
    let (refs, _) = make_grids(&Frame::sized(400.0, 300.0).unwrap(), 100.0).unwrap();
    let rows = read_csv(&text, refs.id()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.encoding.len() == 12));
    assert_eq!(rows.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ["0", "1", "2"]);

    let o = run(t.path(), &[&args[..], &["--out", "b"]].concat());
    assert_eq!(code(&o), 0);
    same_outputs(&t.path().join("a"), &t.path().join("b"));
}

#[test]
fn empty_collection_encodes_to_no_rows() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("e.geojson"), r#"{"type":"FeatureCollection","features":[]}"#).unwrap();
    let o = run(t.path(), &["encode", "e.geojson", "--out", "o"]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(t.path().join("o/encodings.csv")).lines().count(), 1);
}

#[test]
fn threshold_writes_sparse_json() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("fig1.wkt"), FIG1).unwrap();
    let o = run(
        t.path(),
        &["encode", "fig1.wkt", "--frame", "400", "300", "--resolution", "100", "--threshold", "0.5"],
    );
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&read(t.path().join("out/encodings.json"))).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["sparse"]["length"], 12);
        assert!(r["sparse"]["values"].as_array().unwrap().iter().all(|v| v.as_f64().unwrap() >= 0.5));
    }
}

#[test]
fn encode_then_decode_recovers_points() {
    let t = TempDir::new().unwrap();
    let pts: Vec<(f64, f64)> = (0..200).map(|i| ((i * 37 % 100) as f64 + 0.25, (i * 53 % 100) as f64 + 0.5)).collect();
    let wkt: String = pts.iter().map(|(x, y)| format!("POINT ({x} {y})\n")).collect();
    fs::write(t.path().join("p.wkt"), wkt).unwrap();
    assert_eq!(code(&run(t.path(), &["encode", "p.wkt", "--out", "enc"])), 0);
    let o = run(t.path(), &["decode-point", "enc/encodings.csv", "--out", "dec"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let feats = mppenc::codecs::parse_geojson(&read(t.path().join("dec/points.geojson"))).unwrap();
    assert_eq!(feats.len(), pts.len());
    for (f, &(x, y)) in feats.iter().zip(&pts) {
        let v = f.geometry.vertices()[0];
        assert!((v.x - x).abs() < 1e-6 && (v.y - y).abs() < 1e-6);
        assert!(f.property_f64("residual").unwrap() < 1e-6);
    }
}

#[test]
fn decode_failures_are_recorded_and_exit_nonzero() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("fig1.wkt"), FIG1).unwrap();
    let grid = ["--frame", "400", "300", "--resolution", "100"];
    assert_eq!(code(&run(t.path(), &[&["encode", "fig1.wkt", "--out", "enc"][..], &grid].concat())), 0);
    let o = run(t.path(), &[&["decode-point", "enc/encodings.csv", "--out", "dec"][..], &grid].concat());
    assert_eq!(code(&o), 2);
    let errors = read(t.path().join("dec/errors.csv"));
    assert_eq!(errors.lines().count(), 3);
    assert!(errors.contains("\n1,") && errors.contains("\n2,"));
    assert!(t.path().join("dec/manifest.json").exists());
}

#[test]
fn malformed_row_names_its_line() {
    let t = TempDir::new().unwrap();
    let mut text = String::from("id,e0,e1,e2,e3\n");
    text.push_str("a,1,0.5,0.5,0.2\n");
    text.push_str("b,1,0.5,x,0.2\n");
    fs::write(t.path().join("bad.csv"), text).unwrap();
    let o = run(t.path(), &["decode-point", "bad.csv", "--frame", "50", "50"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn cluster_fixture_has_five_clusters() {
    let t = TempDir::new().unwrap();
    let o = run(t.path(), &["cluster", "--eps", "0.6"]);
    assert_eq!(code(&o), 0);
    let s: serde_json::Value = serde_json::from_str(&read(t.path().join("out/summary.json"))).unwrap();
    assert_eq!(s["clusters"], 5);
    assert_eq!(s["noise"], 0);
    assert_eq!(read(t.path().join("out/labels.csv")).lines().count(), 17);
}

#[test]
fn cluster_reads_encoding_files() {
    let t = TempDir::new().unwrap();
    let wkt = "POINT (10 10)\nPOINT (10.5 10)\nPOINT (90 90)\nPOINT (90 90.5)\nPOINT (50 10)\n";
    fs::write(t.path().join("p.wkt"), wkt).unwrap();
    assert_eq!(code(&run(t.path(), &["encode", "p.wkt", "--format", "json", "--out", "enc"])), 0);
    let o = run(t.path(), &["cluster", "enc/encodings.json", "--eps", "0.2", "--out", "cl"]);
    assert_eq!(code(&o), 0);
    assert_eq!(read(t.path().join("cl/labels.csv")), "id,label\n0,0\n1,0\n2,1\n3,1\n4,-1\n");
}

#[test]
fn continuity_fixture_summary() {
    let t = TempDir::new().unwrap();
    let o = run(t.path(), &["continuity"]);
    assert_eq!(code(&o), 0);
    let s: serde_json::Value = serde_json::from_str(&read(t.path().join("out/summary.json"))).unwrap();
    assert_eq!(s["div_unique"], 5);
    assert_eq!(s["mpp_unique"], 50);
    assert!(s["lipschitz_excess"].as_f64().unwrap() <= 1e-12);
    assert!(String::from_utf8_lossy(&o.stdout).contains("div_unique=5 mpp_unique=50"));
}

#[test]
fn eval_matrix_two_by_two_by_one() {
    let t = TempDir::new().unwrap();
    let args = [
        "eval-properties",
        "--lines",
        "0",
        "--polygons",
        "100",
        "--resolutions",
        "50,25",
        "--tasks",
        "polygon-area",
        "--epochs",
        "3",
        "--seed",
        "5",
    ];
    let o = run(t.path(), &[&args[..], &["--out", "a"]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = t.path().join("a");
    assert_eq!(read(dir.join("report.csv")).lines().count(), 5);
    let svgs = fs::read_dir(&dir)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"))
        .count();
    assert_eq!(svgs, 1);
    let m: serde_json::Value = serde_json::from_str(&read(dir.join("manifest.json"))).unwrap();
    assert_eq!(m["subcommand"], "eval-properties");
    assert_eq!(m["seed"], 5);
    assert_eq!(m["config"]["experiment"]["train"]["max_epochs"], 3);

    assert_eq!(code(&run(t.path(), &[&args[..], &["--out", "b"]].concat())), 0);
    same_outputs(&dir, &t.path().join("b"));
}

#[test]
fn gen_corpus_feeds_eval_pairwise() {
    let t = TempDir::new().unwrap();
    let o = run(
        t.path(),
        &["gen-corpus", "--lines", "5", "--polygons", "5", "--pairs", "60", "--relations", "point-in-polygon"],
    );
    assert_eq!(code(&o), 0);
    let o = run(
        t.path(),
        &[
            "eval-pairwise",
            "--pairs-file",
            "out/pairs.geojson",
            "--relations",
            "point-in-polygon",
            "--epochs",
            "2",
            "--out",
            "ev",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = read(t.path().join("ev/report.csv"));
    assert_eq!(report.lines().count(), 3);
    assert!(report.contains("\nmpp,12.5,point-in-polygon,roc_auc,"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("fig1.wkt"), FIG1).unwrap();
    fs::write(
        t.path().join("cfg.json"),
        r#"{"frame": [400, 300], "resolution": 50, "method": "div", "out": "from-config"}"#,
    )
    .unwrap();
    let o = run(t.path(), &["encode", "fig1.wkt", "--config", "cfg.json", "--resolution", "100"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_str(&read(t.path().join("from-config/manifest.json"))).unwrap();
    assert_eq!(m["config"]["resolution"], 100.0);
    assert_eq!(m["config"]["method"], "div");
    assert_eq!(m["config"]["scale"], serde_json::Value::Null);
    let header = read(t.path().join("from-config/encodings.csv"));
    assert!(header.starts_with("id,e0,") && header.lines().next().unwrap().ends_with(",e11"));

    fs::write(t.path().join("bad.json"), r#"{"resolutoin": 3}"#).unwrap();
    assert_eq!(code(&run(t.path(), &["encode", "fig1.wkt", "--config", "bad.json"])), 2);
}

#[test]
fn exit_codes() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("fig1.wkt"), FIG1).unwrap();
    assert_eq!(code(&run(t.path(), &[])), 1);
    assert_eq!(code(&run(t.path(), &["nonsense"])), 1);
    assert_eq!(code(&run(t.path(), &["encode", "fig1.wkt", "--method", "hex"])), 1);
    assert_eq!(code(&run(t.path(), &["eval-properties", "--tasks", "volume"])), 1);
    assert_eq!(code(&run(t.path(), &["encode", "missing.wkt"])), 2);
    // 100 is not divisible by 30.
    assert_eq!(code(&run(t.path(), &["encode", "fig1.wkt", "--resolution", "30"])), 2);
    fs::write(t.path().join("bad.wkt"), "POINT (1 2)\nPOLYGON ((0 0, 1 1\n").unwrap();
    let o = run(t.path(), &["encode", "bad.wkt"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("feature 1 (line 2)"));
    assert_eq!(code(&run(t.path(), &["--help"])), 0);
}

#[test]
fn writes_only_inside_out_dir() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("fig1.wkt"), FIG1).unwrap();
    for args in [
        &["encode", "fig1.wkt", "--frame", "400", "300", "--resolution", "100"][..],
        &["cluster"],
        &["continuity"],
        &["gen-corpus", "--lines", "3", "--polygons", "3", "--pairs", "4"],
    ] {
        let o = run(t.path(), &[args, &["--out", "only/here"]].concat());
        assert_eq!(code(&o), 0, "{args:?}");
    }
    let mut top: Vec<_> = fs::read_dir(t.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    top.sort();
    assert_eq!(top, ["fig1.wkt", "only"]);
    let inner: Vec<_> = fs::read_dir(t.path().join("only")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(inner, ["here"]);
}

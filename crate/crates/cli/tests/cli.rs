//! End-to-end tests driving the `coxtile` binary: one per subcommand, plus
//! exit-code and round-trip coverage.

use std::process::{Command, Output};

use coxtile_core::render::{patch_from_json, render_svg, RenderStyle};

fn coxtile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxtile"))
        .args(args)
        .env_remove("COXTILE_THREADS")
        .output()
        .expect("the binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn catalog_triangles_lists_the_danzer_triples() {
    let out = coxtile(&["catalog", "triangles", "--n", "6"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for label in [
        "triangle-1-1-5",
        "triangle-1-2-4",
        "triangle-1-3-3",
        "triangle-2-2-3",
    ] {
        assert!(text.contains(label), "missing {label} in:\n{text}");
    }
    assert!(text.contains("4 triangle classes"));
}

#[test]
fn catalog_rhombi_json_carries_exact_angles() {
    let out = coxtile(&["catalog", "rhombi", "--n", "4", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["n"], 4);
    assert_eq!(value["h"], 5);
    assert_eq!(value["rhombi"][0]["angles_pi"][0], "2/5 of pi");
    assert_eq!(value["rhombi"][1]["angles_pi"][0], "4/5 of pi");
    assert!(value.get("triangles").is_none());
}

#[test]
fn patch_json_conforms_to_the_schema() {
    let out = coxtile(&[
        "patch", "--n", "4", "--kind", "rhombic", "--radius", "2.5", "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["n"], 4);
    assert_eq!(value["h"], 5);
    assert_eq!(value["lattice"], "weight");
    assert_eq!(value["shift"].as_array().unwrap().len(), 2);
    assert!(value["radius"].as_f64().unwrap() > 0.0);
    let tiles = value["tiles"].as_array().unwrap();
    assert!(!tiles.is_empty());
    for tile in tiles {
        let class = tile["class"].as_str().unwrap();
        assert!(class.starts_with("rhombus-"), "unexpected class {class}");
        let vertices = tile["vertices"].as_array().unwrap();
        assert_eq!(vertices.len(), 4);
        for v in vertices {
            assert_eq!(v.as_array().unwrap().len(), 2);
        }
        assert!(tile["source"].as_array().is_some());
    }
}

#[test]
fn patch_svg_matches_a_render_of_its_own_json() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("patch.json");
    let svg_path = dir.path().join("patch.svg");
    let common = [
        "patch", "--n", "4", "--kind", "rhombic", "--radius", "3", "--shift", "0.001,0.002",
    ];

    let mut args = common.to_vec();
    args.extend(["--format", "json", "--out", json_path.to_str().unwrap()]);
    assert!(coxtile(&args).status.success());

    let mut args = common.to_vec();
    args.extend(["--format", "svg", "--out", svg_path.to_str().unwrap()]);
    assert!(coxtile(&args).status.success());

    let parsed = patch_from_json(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let rendered = render_svg(&parsed, &RenderStyle::default()).unwrap();
    let direct = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(rendered, direct, "JSON round trip changed the SVG bytes");
}

#[test]
fn identical_patch_invocations_are_byte_identical() {
    let args = [
        "patch", "--n", "5", "--kind", "triangular", "--radius", "2.5", "--format", "svg",
    ];
    let first = coxtile(&args);
    let second = coxtile(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout_of(&first).starts_with("<svg"));
}

#[test]
fn root_lattice_rhombic_patch_reports_points_only() {
    let out = coxtile(&[
        "patch", "--n", "3", "--lattice", "root", "--radius", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["tiles"].as_array().unwrap().len(), 0);
    assert!(!value["points"].as_array().unwrap().is_empty());
    assert!(stderr_of(&out).contains("note:"));
}

#[test]
fn zero_shift_prints_the_symmetric_mode_note() {
    let out = coxtile(&[
        "patch", "--n", "4", "--radius", "2.5", "--shift", "0,0", "--format", "json",
    ]);
    assert!(out.status.success());
    assert!(stderr_of(&out).contains("symmetric closed-window mode"));
}

#[test]
fn verify_suites_pass_and_emit_json() {
    let human = coxtile(&["verify", "--suite", "descent"]);
    assert!(human.status.success());
    let text = stdout_of(&human);
    assert!(text.contains("PASS cube_orbit_histogram"));
    assert!(text.contains("checks passed"));

    let json = coxtile(&["verify", "--suite", "eigen", "--json"]);
    assert!(json.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    let obj = value.as_object().unwrap();
    assert!(!obj.is_empty());
    for (name, entry) in obj {
        assert_eq!(entry["pass"], true, "{name} failed: {}", entry["details"]);
        assert!(entry["details"].is_string());
    }
}

#[test]
fn project_cube_vertex_prints_the_image() {
    let out = coxtile(&["project", "cube-vertex", "--n", "4", "--signs", "+----"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("[1, 0, 0, 0, 0]"), "{text}");
    assert!(text.contains("congruence level: 1"));
    assert!(text.contains("projection plane: ("));
}

#[test]
fn bad_arguments_exit_two() {
    let cases: &[&[&str]] = &[
        &["patch", "--n", "4", "--bogus"],
        &["patch", "--n", "4", "--radius", "-1"],
        &["patch", "--n", "4", "--shift", "0.1"],
        &["patch", "--n", "4", "--shift", "a,b"],
        &["verify", "--suite", "nonsense"],
        &["project", "cube-vertex", "--n", "4", "--signs", "+-x--"],
        &["project", "cube-vertex", "--n", "4", "--signs", "+-"],
        &["catalog", "rhombi", "--n", "0"],
    ];
    for args in cases {
        let out = coxtile(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?} gave {:?}: {}",
            out.status.code(),
            stderr_of(&out)
        );
        assert!(!stderr_of(&out).is_empty());
    }
}

#[test]
fn unknown_flags_print_usage_on_stderr() {
    let out = coxtile(&["patch", "--n", "4", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("Usage"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn thread_cap_env_is_validated() {
    let bad = Command::new(env!("CARGO_BIN_EXE_coxtile"))
        .args(["catalog", "triangles", "--n", "4"])
        .env("COXTILE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr_of(&bad).contains("COXTILE_THREADS"));

    let capped = Command::new(env!("CARGO_BIN_EXE_coxtile"))
        .args(["patch", "--n", "4", "--radius", "2", "--format", "json"])
        .env("COXTILE_THREADS", "2")
        .output()
        .unwrap();
    assert!(capped.status.success());

    let auto = Command::new(env!("CARGO_BIN_EXE_coxtile"))
        .args(["catalog", "triangles", "--n", "4"])
        .env("COXTILE_THREADS", "0")
        .output()
        .unwrap();
    assert!(auto.status.success());
}

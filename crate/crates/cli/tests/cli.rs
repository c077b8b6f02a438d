use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use warpgeom::certify::MetricSpec;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpgeom"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| {
            l.trim_start_matches("# ")
                .split_once(" = ")
                .filter(|(k, _)| *k == key)
                .map(|(_, v)| v)
        })
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn num(text: &str, key: &str) -> f64 {
    value(text, key).parse().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn construct(dir: &TempDir, name: &str, args: &[&str]) -> (Output, String) {
    let path = dir.path().join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    (run(&all), path.to_str().unwrap().to_string())
}

#[test]
fn construct_reports_threshold_and_used_rho() {
    let dir = TempDir::new().unwrap();
    let (o, path) = construct(&dir, "paper.spec", &["--eps", "0.1", "--variant", "paper"]);
    assert_eq!(o.status.code(), Some(0));
    let report = stdout(&o);
    assert!((num(&report, "rho_threshold") - 9.932826396869707).abs() < 1e-6);
    let rho = num(&report, "rho");
    assert!(rho >= num(&report, "rho_threshold") && rho <= 13.0);
    assert_eq!(value(&report, "positivity"), "pass");
    assert!(num(&report, "jet_mismatch") <= 1e-9);

    let spec = MetricSpec::parse(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(spec.n, 4);
    assert_eq!(spec.rho, Some(rho));
    assert!(Path::new(&path).exists());
}

#[test]
fn spec_files_round_trip() {
    let dir = TempDir::new().unwrap();
    for (name, args) in [
        ("p.spec", vec!["--eps", "0.1"]),
        (
            "f.spec",
            vec![
                "--eps",
                "1",
                "--variant",
                "fujiwara",
                "--tau",
                "0.1",
                "--n",
                "5",
            ],
        ),
        (
            "h.spec",
            vec!["--eps", "0.5", "--variant", "heintze-schroeder", "--n", "3"],
        ),
    ] {
        let (o, path) = construct(&dir, name, &args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        let text = fs::read_to_string(&path).unwrap();
        let spec = MetricSpec::parse(&text).unwrap();
        let again = MetricSpec::parse(&spec.to_text()).unwrap();
        assert_eq!(spec.to_text(), text);
        let (lo, hi) = spec.domain();
        let (lo, hi) = (lo.max(-30.0), hi.min(30.0));
        for k in 0..=200 {
            let r = lo + (hi - lo) * f64::from(k) / 200.0;
            for (f, g) in [(&spec.v, &again.v), (&spec.h, &again.h)] {
                let (a, b) = (f.eval_jet(r).unwrap(), g.eval_jet(r).unwrap());
                assert!(a.max_abs_diff(&b) <= 1e-15 * (1.0 + a.value.abs()));
            }
        }
    }
}

#[test]
fn construct_without_out_prints_a_parseable_spec() {
    let o = run(&[
        "construct",
        "--eps",
        "0.5",
        "--variant",
        "fujiwara",
        "--tau",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("expshift"));
    let spec = MetricSpec::parse(&text).unwrap();
    assert!((num(&text, "rho") - spec.rho.unwrap()).abs() == 0.0);
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        vec!["construct", "--eps", "-1"],
        vec!["construct", "--eps", "0"],
        vec!["construct", "--eps", "0.1", "--variant", "fujiwara"],
        vec!["construct", "--eps", "0.1", "--tau", "0.1"],
        vec!["construct", "--eps", "0.1", "--variant", "bogus"],
        vec!["construct", "--eps", "0.1", "--rho", "1"],
        vec!["certify", "--spec", "/nonexistent/file.spec"],
        vec!["morse", "--codims", "2,1"],
        vec!["bundle", "--torsion", "5:2"],
        vec!["bundle", "--torsion", "4:1/3"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn hyperbolic_curvature_table() {
    let dir = TempDir::new().unwrap();
    let h4 = write(
        &dir,
        "h4.spec",
        "n = 4\nv.piece = 0 inf sinh\nh.piece = -inf inf cosh\n",
    );
    let o = run(&[
        "curvature",
        "--spec",
        &h4,
        "--from",
        "0.5",
        "--to",
        "2.5",
        "--step",
        "0.25",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,K1,K2,K3,K4"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    for row in &rows {
        for field in &row[1..] {
            assert!(
                (field.parse::<f64>().unwrap() + 1.0).abs() <= 1e-14,
                "{row:?}"
            );
        }
        // 17 significant digits
        let mantissa = row[0].split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }

    let h3 = write(
        &dir,
        "h3.spec",
        "n = 3\nv.piece = 0 inf sinh\nh.piece = -inf inf cosh\n",
    );
    let o = run(&[
        "curvature",
        "--spec",
        &h3,
        "--from",
        "1",
        "--to",
        "1",
        "--step",
        "1",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("r,K1,K2,K3"));

    let o = run(&[
        "curvature",
        "--spec",
        &h4,
        "--from",
        "-1",
        "--to",
        "1",
        "--step",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fujiwara_row_at_minus_three() {
    let dir = TempDir::new().unwrap();
    let (o, path) = construct(
        &dir,
        "f.spec",
        &["--eps", "1", "--variant", "fujiwara", "--tau", "0.1"],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "curvature",
        "--spec",
        &path,
        "--from",
        "-3",
        "--to",
        "-3",
        "--step",
        "1",
    ]);
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    let expected = [
        -3.0,
        -0.33238562521025684,
        -0.33238562521025684,
        -1.0,
        -44.68137554643638,
    ];
    for (a, b) in row.iter().zip(expected) {
        assert!((a - b).abs() <= 1e-12 * b.abs(), "{row:?}");
    }
}

#[test]
fn certify_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (_, paper) = construct(&dir, "p.spec", &["--eps", "0.1"]);
    let o = run(&["certify", "--spec", &paper]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(num(&text, "upper") < 0.0);
    assert_eq!(value(&text, "lower"), "unbounded");
    assert_eq!(value(&text, "verdict"), "certified");

    // a flat metric labelled as the negatively curved construction
    let flat = write(
        &dir,
        "flat.spec",
        "n = 4\nvariant = paper\nv.piece = -inf inf const 1\nh.piece = -inf inf const 1\n",
    );
    let o = run(&["certify", "--spec", &flat]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(value(&stdout(&o), "verdict"), "failed");

    let (_, fuj) = construct(
        &dir,
        "f.spec",
        &["--eps", "1", "--variant", "fujiwara", "--tau", "0.1"],
    );
    let text = stdout(&run(&["certify", "--spec", &fuj]));
    assert!((num(&text, "lower") + 100.0).abs() <= 1e-6);
    assert_eq!(value(&text, "lower_attained"), "false");
    assert!((num(&text, "rescaled_lower") + 1.0).abs() <= 1e-12);

    let bad = write(&dir, "bad.spec", "n = 4\nv.piece = 0 1 exp\n");
    assert_eq!(run(&["certify", "--spec", &bad]).status.code(), Some(1));
}

#[test]
fn volume_outputs() {
    let dir = TempDir::new().unwrap();
    let cusp = write(
        &dir,
        "cusp.spec",
        "n = 4\nv.piece = -inf inf exp\nh.piece = -inf inf exp\n",
    );
    let o = run(&["volume", "--spec", &cusp, "--r0", "0", "--volB", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let exact = std::f64::consts::TAU / 7.0;
    assert!((v - exact).abs() <= 1e-8 * exact);

    let (_, hs) = construct(
        &dir,
        "hs.spec",
        &["--eps", "0.1", "--variant", "heintze-schroeder"],
    );
    assert_eq!(
        stdout(&run(&["volume", "--spec", &hs, "--r0", "0", "--volB", "1"])),
        "divergent\n"
    );

    let (_, paper) = construct(&dir, "p.spec", &["--eps", "0.1"]);
    let o = run(&["volume", "--spec", &paper, "--r0", "-1", "--volB", "2"]);
    assert!(stdout(&o).trim().parse::<f64>().unwrap() > 0.0);

    assert_eq!(
        run(&["volume", "--spec", &cusp, "--r0", "0", "--volB", "-1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn oracle_checks_pass() {
    for check in ["hyperbolic", "heisenberg-mixed", "convergence"] {
        let o = run(&["oracle", "--check", check]);
        assert_eq!(o.status.code(), Some(0), "{check}");
        let text = stdout(&o);
        assert_eq!(value(&text, "result"), "PASS");
    }
    let text = stdout(&run(&["oracle", "--check", "heisenberg-mixed"]));
    assert!(num(&text, "discrepancy") <= 1e-4);
    assert!((num(&text, "erroneous_gap") - 1.0).abs() <= 1e-3);
    let order = num(
        &stdout(&run(&["oracle", "--check", "convergence"])),
        "order",
    );
    assert!((3.5..=4.5).contains(&order));
}

#[test]
fn bundle_degrees() {
    assert_eq!(
        stdout(&run(&["bundle", "--torsion", "5:2/5"])),
        "degree = 5\n"
    );
    assert_eq!(
        stdout(&run(&[
            "bundle",
            "--torsion",
            "4:1/4",
            "--torsion",
            "6:1/3"
        ])),
        "degree = 12\n"
    );
    assert_eq!(
        stdout(&run(&["bundle", "--torsion", "5:2/5", "--nonorientable"])),
        "degree = 10\n"
    );
    assert_eq!(stdout(&run(&["bundle"])), "degree = 1\n");
    let text = stdout(&run(&[
        "bundle",
        "--free",
        "0.25,0.9",
        "--torsion",
        "3:1/3",
        "--deform",
        "1",
    ]));
    assert_eq!(
        value(&text, "free_angles"),
        "0.0000000000000000e0 0.0000000000000000e0"
    );
    assert_eq!(value(&text, "torsion_angles"), "1/3");
}

#[test]
fn morse_summary() {
    let text = stdout(&run(&["morse", "--codims", "2,2,2"]));
    assert_eq!(
        text,
        "handles = 1:3\naspherical = true\nkernel_rank = 3\nhomotopy_type = S1 v S1 v S1\n"
    );
    let text = stdout(&run(&["morse", "--codims", "3,2"]));
    assert_eq!(value(&text, "aspherical"), "false");
    assert_eq!(value(&text, "kernel_rank"), "none");
    assert_eq!(value(&text, "homotopy_type"), "S1 v S2");
    let text = stdout(&run(&["morse", "--codims", "2", "--countable"]));
    assert_eq!(value(&text, "kernel_rank"), "countably-infinite");
}

#[test]
fn tree_openness() {
    let dir = TempDir::new().unwrap();
    let tripod = write(&dir, "tripod.txt", "o a 1\no b 1\no c 1\n");
    let o = run(&["tree", "--tree", &tripod, "--open", "0,a", "1,b", "0,c"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "not open; crossings 0.5 0.0 0.5\n");

    let o = run(&[
        "tree",
        "--tree",
        &tripod,
        "--open",
        "0,a",
        "1,b",
        "0,c",
        "--perturb",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(value(&text, "perturbed").contains(','));

    let o = run(&[
        "tree",
        "--tree",
        &tripod,
        "--open",
        "0,a",
        "-1,b",
        "2,o:c:0.5",
    ]);
    assert_eq!(
        stdout(&o).lines().next().unwrap().split(';').next(),
        Some("open")
    );

    // symmetric: no perturbation helps
    let o = run(&[
        "tree",
        "--tree",
        &tripod,
        "--open",
        "0,a",
        "0,b",
        "0.5,c",
        "--perturb",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("crossings coincide"));

    for pts in [
        ["0,a", "0,b", "0,zz"],
        ["0,a", "0,b", "x,c"],
        ["0,a", "0,b", "0,o:c:2"],
    ] {
        let mut args = vec!["tree", "--tree", &tripod, "--open"];
        args.extend_from_slice(&pts);
        assert_eq!(run(&args).status.code(), Some(1), "{pts:?}");
    }
    let cycle = write(&dir, "cycle.txt", "a b 1\nb c 1\nc a 1\n");
    assert_eq!(
        run(&["tree", "--tree", &cycle, "--open", "0,a", "0,b", "0,c"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, pa) = construct(&dir, "a.spec", &["--eps", "0.1"]);
    let (b, pb) = construct(&dir, "b.spec", &["--eps", "0.1"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap());
    let c1 = run(&["certify", "--spec", &pa]);
    let c2 = run(&["certify", "--spec", &pb]);
    assert_eq!(c1.stdout, c2.stdout);
    let t1 = run(&[
        "curvature",
        "--spec",
        &pa,
        "--from",
        "-14",
        "--to",
        "0.1",
        "--step",
        "0.01",
    ]);
    let t2 = run(&[
        "curvature",
        "--spec",
        &pb,
        "--from",
        "-14",
        "--to",
        "0.1",
        "--step",
        "0.01",
    ]);
    assert_eq!(t1.stdout, t2.stdout);
}

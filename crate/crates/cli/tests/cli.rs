use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn subkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subkit"))
        .args(args)
        .env_remove("SUBKIT_BUDGET_PRESET")
        .output()
        .expect("binary runs")
}

fn subkit_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_subkit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON report")
}

#[test]
fn power_pipes_into_abelianize() {
    let p = subkit(&["power", "--k", "5", &data("fib1.sub")]);
    assert_eq!(code(&p), 0);
    let a = subkit_stdin(&["abelianize"], &p.stdout);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), "8 5\n5 3\n");
    let j = subkit_stdin(&["--json", "abelianize", "-"], &p.stdout);
    assert_eq!(json(&j)["details"]["matrix"], serde_json::json!([[8, 5], [5, 3]]));
}

#[test]
fn single_value_commands() {
    assert_eq!(stdout(&subkit(&["supernatural", &data("m12.mat")])), "2·3^∞\n");
    assert_eq!(stdout(&subkit(&["supernatural", &data("m21.mat")])), "3^∞\n");
    assert_eq!(stdout(&subkit(&["pq", &data("f2.mat")])), "QP\n");
    assert_eq!(stdout(&subkit(&["pq", &data("f.mat")])), "QJ\n");
    let none = subkit(&["pq", &data("m22.mat")]);
    assert_eq!(code(&none), 1);
    let c = subkit(&["fib-classify", &data("f2.mat"), &data("f.mat")]);
    assert!(stdout(&c).starts_with("plain F^2 · F^1"), "{}", stdout(&c));
    assert_eq!(stdout(&subkit(&["factors", "--k", "2", &data("fib1.sub")])), "a\nb\naa\nab\nba\n");
}

#[test]
fn analyze_reports() {
    let fib = stdout(&subkit(&["analyze", &data("fib1.sub")]));
    assert!(fib.contains("primitive: yes (exponent 2)"), "{fib}");
    assert!(fib.contains("purely aperiodic: yes"), "{fib}");
    assert!(fib.contains("λ ≈ 1.618033989"), "{fib}");
    assert!(fib.contains("max/min paths: 2 maximal, 1 minimal"), "{fib}");

    let dir = tempfile::tempdir().unwrap();
    let doubling = dir.path().join("aa.sub");
    std::fs::write(&doubling, "a -> aa\n").unwrap();
    let aa = stdout(&subkit(&["analyze", doubling.to_str().unwrap()]));
    assert!(aa.contains("primitive: yes (exponent 1)"), "{aa}");
    assert!(aa.contains("purely aperiodic: no, λ = 2 rational"), "{aa}");
    assert!(aa.contains("1 maximal, 1 minimal"), "{aa}");

    let aaab = subkit(&["--json", "analyze", &data("aaab.sub")]);
    let r = json(&aaab);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "analyze");
    assert_eq!(r["details"]["primitive"], true);
    assert_eq!(r["details"]["pf"]["pf_integer_value"], 4);
    assert_eq!(r["details"]["path_counts"]["max_count"], 1);
    assert_eq!(r["details"]["path_counts"]["min_count"], 1);
}

#[test]
fn equivalence_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();

    let e = subkit(&["equiv", &data("m33.mat"), &data("m24.mat"), "--certificate", cert_s]);
    assert_eq!(code(&e), 0, "{}", stdout(&e));
    assert!(stdout(&e).contains("through [[6]]"), "{}", stdout(&e));
    let v = subkit(&["verify", cert_s, &data("m33.mat"), &data("m24.mat")]);
    assert_eq!(code(&v), 0);
    let wrong = subkit(&["verify", cert_s, &data("m33.mat"), &data("m22.mat")]);
    assert_ne!(code(&wrong), 0);

    let d = subkit(&["equiv", "--ordered", &data("fib1.sub"), &data("fib2.sub")]);
    assert_eq!(code(&d), 1);
    assert!(stdout(&d).contains("max/min path counts"));

    let u = subkit(&["equiv", "--ordered", &data("ord22a.sub"), &data("ord22b.sub")]);
    assert_eq!(code(&u), 2);

    let transpose = subkit(&["equiv", &data("m12.mat"), &data("m21.mat")]);
    assert_eq!(code(&transpose), 1);
    assert!(stdout(&transpose).contains("supernatural"));

    let f = subkit(&["equiv", "--fib", &data("fib-x.sub"), &data("fib-y.sub"), "--certificate", cert_s]);
    assert_eq!(code(&f), 0);
    let v = subkit(&["verify", cert_s, &data("fib-x.sub"), &data("fib-y.sub")]);
    assert_eq!(code(&v), 0);
    let swapped = subkit(&["verify", cert_s, &data("fib-y.sub"), &data("fib-x.sub")]);
    assert_ne!(code(&swapped), 0);
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(code(&subkit(&["bogus"])), 64);
    assert_eq!(code(&subkit(&["power", &data("fib1.sub")])), 64);
    assert_eq!(code(&subkit(&["--help"])), 0);
    assert_eq!(code(&subkit(&["analyze", &data("missing.sub")])), 65);
    assert_eq!(code(&subkit(&["pq", &data("fib1.sub")])), 65);
    assert_eq!(code(&subkit(&["export-dot", "--color-extremes", &data("f.mat")])), 64);
    let bad = subkit_stdin(&["abelianize"], b"a -> c\n");
    assert_eq!(code(&bad), 65);
    let preset = Command::new(env!("CARGO_BIN_EXE_subkit"))
        .args(["equiv", &data("m33.mat"), &data("m24.mat")])
        .env("SUBKIT_BUDGET_PRESET", "huge")
        .output()
        .unwrap();
    assert_eq!(code(&preset), 64);
}

#[test]
fn env_preset_is_used() {
    let o = Command::new(env!("CARGO_BIN_EXE_subkit"))
        .args(["--json", "equiv", &data("m33.mat"), &data("m24.mat")])
        .env("SUBKIT_BUDGET_PRESET", "small")
        .output()
        .unwrap();
    assert_eq!(json(&o)["details"]["budget"]["preset"], "small");
    let flag = Command::new(env!("CARGO_BIN_EXE_subkit"))
        .args(["--json", "equiv", "--preset", "large", &data("m33.mat"), &data("m24.mat")])
        .env("SUBKIT_BUDGET_PRESET", "small")
        .output()
        .unwrap();
    assert_eq!(json(&flag)["details"]["budget"]["preset"], "large");
}

fn without_timing(o: &Output) -> serde_json::Value {
    let mut v = json(o);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn json_is_deterministic() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["equiv", "--ordered"],
        vec!["equiv"],
        vec!["analyze"],
        vec!["telescope", "--stride", "2"],
    ];
    for args in runs {
        let mut full: Vec<String> = vec!["--json".into()];
        full.extend(args.iter().map(|s| s.to_string()));
        full.push(data("aaab.sub"));
        if args[0] == "equiv" {
            full.push(data("aabb.sub"));
        }
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let first = without_timing(&subkit(&refs));
        let mut seq = refs.clone();
        seq.extend(["--threads", "1"]);
        assert_eq!(first, without_timing(&subkit(&refs)), "{args:?}");
        assert_eq!(first, without_timing(&subkit(&seq)), "{args:?} with one thread");
    }
}

#[test]
fn file_formats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| -> PathBuf { dir.path().join(n) };

    // .sub: compose output parses back to the same substitution
    let c = subkit(&["compose", &data("fib2.sub"), &data("fib1.sub")]);
    std::fs::write(path("c.sub"), &c.stdout).unwrap();
    let again = subkit(&["power", "--k", "1", path("c.sub").to_str().unwrap()]);
    assert_eq!(stdout(&again), stdout(&c));

    // .mat: abelianize output feeds matrix commands
    let m = subkit(&["abelianize", &data("fib1.sub")]);
    std::fs::write(path("f.mat"), &m.stdout).unwrap();
    assert_eq!(stdout(&subkit(&["pq", path("f.mat").to_str().unwrap()])), "QJ\n");

    // diagram JSON, unordered and ordered
    for input in [data("f.mat"), data("fib1.sub")] {
        let t = json(&subkit(&["--json", "telescope", "--depth", "4", &input]));
        let diagram = &t["details"]["diagram"];
        std::fs::write(path("d.json"), diagram.to_string()).unwrap();
        let back = json(&subkit(&["--json", "telescope", path("d.json").to_str().unwrap()]));
        assert_eq!(&back["details"]["diagram"], diagram);
    }
}

#[test]
fn diagram_outputs() {
    let t = stdout(&subkit(&["telescope", "--stride", "2", &data("f.mat")]));
    assert!(t.starts_with("generator:\n2 1\n1 1\n"), "{t}");
    assert!(t.contains("level 4: 55 34"), "{t}");

    let dot = stdout(&subkit(&["export-dot", "--depth", "2", "--color-extremes", &data("fib1.sub")]));
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("color=red") && dot.contains("color=green"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.dot");
    let o = subkit(&["export-dot", &data("f.mat"), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&out).unwrap().contains("d=5"));

    let taf = stdout(&subkit(&["taf", "--depth", "2", &data("fib1.sub")]));
    assert_eq!(taf, "A_0 = T_1 ⊕ T_1\nA_1 = T_2 ⊕ T_1; a↦(a,b), b↦(a)\nA_2 = T_3 ⊕ T_2; a↦(a,b), b↦(a)\n");

    let walk = stdout(&subkit(&["successor", &data("fib1.sub"), "--min", "3", "--end", "a", "--steps", "9"]));
    let lines: Vec<&str> = walk.lines().collect();
    // five paths of length 3 into a, then the end marker
    assert_eq!(lines.len(), 6, "{walk}");
    assert_eq!(lines[0], "a:0 a:0 a:0");
    assert!(lines[5].contains("no successor"));

    let split = subkit(&["split", &data("f5.mat"), &data("split-n.mat"), &data("split-s.mat")]);
    assert_eq!(stdout(&split), "7 7 4\n1 1 1\n5 5 3\n");
    let enlarged = subkit(&["enlarge", &data("f.mat"), "--size", "3"]);
    assert_eq!(stdout(&enlarged), "7 7 4\n1 1 1\n5 5 3\n");
}

/// Every pair in the sample corpus exits with a documented code, and every
/// certificate written verifies.
#[test]
fn corpus_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let cert_s = cert.to_str().unwrap();
    let mut files: Vec<String> = std::fs::read_dir(data(""))
        .unwrap()
        .map(|e| e.unwrap().path().display().to_string())
        .filter(|p| !p.contains("split-"))
        .collect();
    files.sort();
    for a in &files {
        for b in &files {
            let ordered = a.ends_with(".sub") && b.ends_with(".sub");
            let mut args = vec!["equiv", "--preset", "small", "--certificate", cert_s];
            if ordered {
                args.push("--ordered");
            }
            args.extend([a.as_str(), b.as_str()]);
            let _ = std::fs::remove_file(&cert);
            let o = subkit(&args);
            let c = code(&o);
            assert!([0, 1, 2, 65].contains(&c), "{args:?} exited {c}");
            if c == 0 {
                let v = subkit(&["verify", cert_s, a, b]);
                assert_eq!(code(&v), 0, "{a} vs {b}");
            } else {
                assert!(!cert.exists());
            }
        }
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn typea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_typea"))
        .args(args)
        .env_remove("TYPEA_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("typea-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join("cache.json")
}

#[test]
fn mult_all_methods_agree_on_a2_example() {
    let o = typea(&[
        "mult", "--rank", "2", "--lambda", "2,3", "--mu", "0,1", "--method", "all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "recursive: 3\ncount: 3\nfreudenthal: 3\n");
}

#[test]
fn branch_a4_example() {
    let o = typea(&["branch", "--rank", "4", "--lambda", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 16);
    assert_eq!(lines[0], "1, (0,0,0,0), (1,1,1), 64");
    assert_eq!(lines[15], "16, (4,3,2,1), (1,1,1), 64");
}

#[test]
fn dim_trivial_and_json() {
    let o = typea(&["dim", "--rank", "2", "--lambda", "0,0"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1\n"));
    let o = typea(&["dim", "--rank", "2", "--lambda", "2,3", "--format", "json"]);
    assert_eq!(
        stdout(&o),
        "{\"command\":\"dim\",\"lambda\":[2,3],\"rank\":2,\"value\":\"42\"}\n"
    );
    let o = typea(&["dim", "--rank", "2", "--lambda", "2,3", "--method", "enum"]);
    assert_eq!(stdout(&o), "42\n");
}

#[test]
fn json_output_is_reproducible() {
    let args = [
        "branch", "--rank", "2", "--lambda", "2,3", "--format", "json",
    ];
    let a = stdout(&typea(&args));
    assert_eq!(a, stdout(&typea(&args)));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 12);
    assert_eq!(comps[3]["P"], serde_json::json!([3, 0]));
    assert_eq!(comps[3]["hw"], serde_json::json!([5]));
    assert_eq!(comps[3]["dim"], "6");

    let args = ["char", "--rank", "2", "--lambda", "1,1", "--format", "json"];
    let a = stdout(&typea(&args));
    assert_eq!(a, stdout(&typea(&args)));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["character"].as_array().unwrap().len(), 7);
    assert_eq!(
        v["character"][0],
        serde_json::json!({"mu": [1, 1], "mult": "1"})
    );
}

#[test]
fn basis_and_expand() {
    let o = typea(&[
        "basis",
        "--rank",
        "2",
        "--lambda",
        "2,3",
        "--content",
        "1,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = typea(&["basis", "--rank", "2", "--lambda", "2,3"]);
    assert_eq!(stdout(&o).lines().count(), 42);

    let o = typea(&[
        "expand", "--rank", "2", "--word", "f2,f1", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["leading"]["I"], serde_json::json!([0, 0, 1]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_passes() {
    let o = typea(&["verify", "--max-rank", "2", "--max-coord", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(
        typea(&["dim", "--rank", "2", "--lambda", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        typea(&["dim", "--rank", "2", "--lambda", "1,-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(typea(&["dim", "--rank", "2"]).status.code(), Some(2));
    assert_eq!(
        typea(&["expand", "--rank", "2", "--word", "g1"])
            .status
            .code(),
        Some(2)
    );
    let o = typea(&[
        "basis",
        "--rank",
        "2",
        "--lambda",
        "2,3",
        "--max-basis",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = typea(&[
        "expand",
        "--rank",
        "3",
        "--word",
        "f3^3,f2^3,f1^3,f3^3",
        "--max-terms",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = typea(&[
        "dim",
        "--rank",
        "2",
        "--lambda",
        "3,3",
        "--method",
        "enum",
        "--max-basis",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn negative_mu_is_accepted() {
    let o = typea(&["mult", "--rank", "2", "--lambda", "1,1", "--mu", "-1,-1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1\n"));
}

#[test]
fn cache_roundtrip_and_corruption() {
    let path = scratch("roundtrip");
    let p = path.to_str().unwrap();
    let args = [
        "mult", "--rank", "2", "--lambda", "2,3", "--mu", "0,1", "--method", "all", "--cache", p,
    ];
    let o = typea(&args);
    assert_eq!(o.status.code(), Some(0));
    let saved = fs::read_to_string(&path).unwrap();
    assert!(saved.contains("\"freudenthal\""));
    let o = typea(&args);
    assert_eq!(stdout(&o), "recursive: 3\ncount: 3\nfreudenthal: 3\n");
    assert!(o.stderr.is_empty());

    fs::write(&path, "{not json").unwrap();
    let o = typea(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "recursive: 3\ncount: 3\nfreudenthal: 3\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    let tampered = saved.replacen("\"value\":\"3\"", "\"value\":\"7\"", 1);
    assert_ne!(tampered, saved);
    fs::write(&path, tampered).unwrap();
    let o = typea(&args);
    assert_eq!(stdout(&o), "recursive: 3\ncount: 3\nfreudenthal: 3\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
    let _ = fs::remove_dir_all(path.parent().unwrap());
}

use std::process::Command;

fn dhtool(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dhtool"))
        .args(args)
        .output()
        .expect("run dhtool");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn pi1_identify_prints_json() {
    let (code, out) = dhtool(&["pi1", "--family", "cycle,5", "--r", "2", "--identify"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v, serde_json::json!({"group": "Z"}));
}

#[test]
fn failed_covering_exits_one() {
    let dir = std::env::temp_dir().join(format!("dhtool-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let map: serde_json::Map<String, serde_json::Value> = (0..15)
        .map(|i| (i.to_string(), serde_json::json!((i % 5).to_string())))
        .collect();
    let path = dir.join("m.json");
    let doc =
        serde_json::json!({"domain": "family:cycle,15", "codomain": "family:cycle,5", "map": map});
    std::fs::write(&path, doc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let (code, out) = dhtool(&["cover", "verify", "--map", p, "--r", "5"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"]["vertex"], "0");
    assert_eq!(dhtool(&["cover", "verify", "--map", p, "--r", "4"]).0, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dhtool(&["no-such-command"]).0, 2);
    assert_eq!(dhtool(&["pi1", "--family", "cycle,5"]).0, 2);
    assert_eq!(
        dhtool(&["pi1", "--family", "cycle,5", "--r", "2", "--base", "zz"]).0,
        2
    );
}

#[test]
fn budget_exhaustion_exits_three() {
    let (code, out) = dhtool(&[
        "obstruct",
        "hom",
        "--source",
        "family:petersen",
        "--target",
        "family:complete,3",
        "--cap",
        "1",
    ]);
    assert_eq!(code, 3);
    assert!(out.contains("inconclusive"));
    let (code, _) = dhtool(&[
        "obstruct",
        "hom",
        "--source",
        "family:complete,3",
        "--target",
        "family:complete,3",
    ]);
    assert_eq!(code, 0);
}

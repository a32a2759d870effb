use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqspace"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["construct", "--help"]).status.code(), Some(0));
}

#[test]
fn bad_configuration_exits_three() {
    assert_eq!(run(&["construct", "--p", "1"]).status.code(), Some(3));
    assert_eq!(
        run(&["construct", "--p", "banana", "--gamma", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(3));
    assert_eq!(
        run(&[
            "construct",
            "--family",
            "lorentz",
            "--p",
            "2",
            "--gamma",
            "1"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(run(&["attain", "--q", "0.5"]).status.code(), Some(3));
}

#[test]
fn unavailable_witness_exits_two() {
    let out = run(&["certify", "--p", "1", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["results"][0]["check"], "unavailable");
}

#[test]
fn sup_witness_certificate() {
    let out = run(&["certify", "--p", "inf", "--avoid", "c0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["command"], "certify");
    assert_eq!(v["results"][0]["separation"]["found"], 1000);
}

#[test]
fn catalog_lists_every_witness() {
    let out = run(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let results = v["results"].as_array().unwrap();
    assert!(results.len() >= 6);
    assert!(results.iter().all(|r| r["check"] == "catalog"));
    assert!(results.iter().any(|r| r["provisional"] == true));
}

#[test]
fn csv_report_is_long_format() {
    let out = run(&["catalog", "--p", "2", "--gamma", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("record,check,field,value"));
    assert!(text.contains("0,report,config.command,catalog"));
    assert!(text.contains("1,catalog,formula.alpha,0.5"));
}

#[test]
fn attain_exact_and_sampled() {
    for extra in [&["--exact"][..], &["--samples", "2000"][..]] {
        let mut args = vec![
            "attain", "--d", "3", "--r", "1", "--a", "1,-2,0.5", "--x0", "1,0,0",
        ];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert_eq!(v["results"][0]["violations"], 0);
    }
}

#[test]
fn axioms_on_orlicz() {
    let out = run(&[
        "axioms",
        "--family",
        "orlicz",
        "--orlicz-id",
        "tlog:2",
        "--depth",
        "2000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["pass"], true);
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("seqspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "construct",
        "--p",
        "inf",
        "--avoid",
        "c0",
        "--m",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(
        v["results"][0]["first_indices"],
        serde_json::json!([1, 2, 4])
    );
    assert!(v["config"].get("out").is_none());
    std::fs::remove_dir_all(&dir).unwrap();
}

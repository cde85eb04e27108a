use std::process::{Command, Output};

use serde_json::Value;

fn hhbv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhbv"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hhbv(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

/// Environments nest, braces balance outside escapes, math shifts pair up.
fn latex_is_balanced(doc: &str) -> Result<(), String> {
    let mut envs = Vec::new();
    let mut i = 0;
    let bytes = doc.as_bytes();
    let (mut depth, mut dollars) = (0i64, 0usize);
    while i < bytes.len() {
        let rest = &doc[i..];
        if let Some(r) = rest.strip_prefix("\\begin{") {
            let name = &r[..r.find('}').ok_or("unterminated \\begin")?];
            envs.push(name.to_string());
        } else if let Some(r) = rest.strip_prefix("\\end{") {
            let name = &r[..r.find('}').ok_or("unterminated \\end")?];
            if envs.pop().as_deref() != Some(name) {
                return Err(format!(
                    "\\end{{{name}}} does not close the innermost environment"
                ));
            }
        }
        match bytes[i] {
            b'\\' => {
                i += 2;
                continue;
            }
            b'{' => depth += 1,
            b'}' => depth -= 1,
            b'$' => dollars += 1,
            _ => {}
        }
        if depth < 0 {
            return Err("unbalanced }".into());
        }
        i += 1;
    }
    if !envs.is_empty() {
        return Err(format!("unclosed environments {envs:?}"));
    }
    if depth != 0 || dollars % 2 != 0 {
        return Err("unbalanced braces or math shifts".into());
    }
    if !doc.contains("\\begin{document}") {
        return Err("not a standalone document".into());
    }
    Ok(())
}

#[test]
fn hh_table_example() {
    let out = stdout(&[
        "hh", "--ring", "Z", "--n", "2", "--m", "1", "--levels", "5", "--format", "table",
    ]);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(3)
        .map(|l| {
            l.split("  ")
                .filter(|s| !s.is_empty())
                .map(str::trim)
                .collect()
        })
        .collect();
    let modules: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(modules, ["Z^3", "Z^2", "Z^2 + Z_3", "Z^2", "Z^2 + Z_3"]);
}

#[test]
fn hh_json_schema() {
    let doc = json(&["hh", "--n", "1", "--levels", "3"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["job"], "hh");
    assert_eq!(doc["ring"], "Z");
    assert_eq!(
        doc["results"][2]["module"],
        serde_json::json!({"free_rank": 1, "torsion": ["2"]})
    );
}

#[test]
fn delta_table_entry() {
    let doc = json(&["bv", "--n", "2", "--t-cap", "1"]);
    let entry = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["monomial"] == serde_json::json!({"t": 1, "u": 1, "x": 0}))
        .unwrap();
    assert_eq!(
        entry["delta"],
        serde_json::json!([{"monomial": {"t": 1, "u": 0, "x": 0}, "coeff": "-5"}])
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["hh", "--n", "3", "--m", "2", "--format", "json"],
        vec!["bracket", "--n", "2", "--format", "json"],
        vec!["cyclic", "--ring", "Q", "--n", "2", "--format", "json"],
        vec![
            "iso",
            "--left",
            "hh:Z:1:1",
            "--right",
            "menichi-ls2",
            "--format",
            "json",
        ],
        vec!["verify", "--n", "2", "--format", "json"],
    ] {
        let first = hhbv(&args);
        let again = hhbv(&args);
        let single = Command::new(env!("CARGO_BIN_EXE_hhbv"))
            .args(&args)
            .env("HHBV_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(first.stdout, again.stdout, "{args:?}");
        assert_eq!(first.stdout, single.stdout, "{args:?}");
    }
}

#[test]
fn json_keys_are_sorted() {
    fn check(v: &Value) {
        match v {
            Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                let mut sorted = keys.clone();
                sorted.sort();
                assert_eq!(keys, sorted);
                m.values().for_each(check);
            }
            Value::Array(a) => a.iter().for_each(check),
            _ => {}
        }
    }
    let raw = stdout(&["bv", "--ring", "F2", "--n", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&raw).unwrap();
    check(&v);
    let keys: Vec<usize> = [
        "\"job\"",
        "\"parameters\"",
        "\"results\"",
        "\"schema_version\"",
    ]
    .iter()
    .map(|k| raw.find(k).unwrap())
    .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn latex_documents_are_balanced() {
    for args in [
        vec!["hh", "--n", "2"],
        vec!["bv", "--ring", "F3", "--n", "2", "--m", "1"],
        vec!["bv", "--ring", "F2", "--n", "3"],
        vec!["bracket", "--n", "2"],
        vec!["cyclic", "--ring", "Q", "--n", "3"],
        vec!["verify", "--n", "1"],
        vec!["iso", "--left", "hh:Z:1:1", "--right", "menichi-ls2"],
    ] {
        let mut a = args.clone();
        a.extend(["--format", "latex"]);
        let doc = stdout(&a);
        latex_is_balanced(&doc).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(doc.is_ascii(), "{args:?}");
    }
}

#[test]
fn linter_rejects_broken_latex() {
    assert!(
        latex_is_balanced("\\begin{document}\\begin{tabular}{l}\\end{document}\\end{tabular}")
            .is_err()
    );
    assert!(latex_is_balanced("\\begin{document}{\\end{document}").is_err());
    assert!(latex_is_balanced("\\begin{document}$x\\end{document}").is_err());
}

#[test]
fn presentation_in_latex() {
    let doc = stdout(&[
        "bv", "--ring", "F3", "--n", "2", "--m", "1", "--format", "latex",
    ]);
    assert!(doc.contains("$\\mathbb{F}_{3}[x,v,t]/(x^{3}, v^{2})$"));
}

#[test]
fn iso_verdict() {
    let out = hhbv(&[
        "iso",
        "--left",
        "hh:Z:1:1",
        "--right",
        "menichi-ls2",
        "--degree",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "NO");
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 16);
    assert!(results
        .iter()
        .all(|r| r["bv_map"] == false && !r["witness"].as_array().unwrap().is_empty()));
    let q = json(&["iso", "--left", "hh:Q:1:1", "--right", "menichi-ls2:Q"]);
    assert_eq!(q["verdict"], "YES");
}

#[test]
fn iso_reads_presentation_files() {
    let dir = std::env::temp_dir().join(format!("hhbv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ls2.json");
    let pres = json(&["bv", "--n", "1"])["presentation"].clone();
    std::fs::write(&path, pres.to_string()).unwrap();
    let doc = json(&[
        "iso",
        "--left",
        path.to_str().unwrap(),
        "--right",
        "hh:Z:1:1",
    ]);
    assert_eq!(doc["verdict"], "YES");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_status_follows_violations() {
    for n in ["1", "2", "3"] {
        let out = hhbv(&["verify", "--n", n, "--format", "json"]);
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        let any = doc["results"]
            .as_array()
            .unwrap()
            .iter()
            .any(|s| !s["violations"].as_array().unwrap().is_empty());
        assert_eq!(out.status.code(), Some(if any { 1 } else { 0 }));
    }
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(
        hhbv(&["cyclic", "--ring", "Z", "--n", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(hhbv(&["hh", "--ring", "F4"]).status.code(), Some(2));
    assert_eq!(hhbv(&["hh", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        hhbv(&["iso", "--left", "nowhere", "--right", "menichi-ls2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hhbv(&["frobnicate"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_hhbv"))
        .args(["hh"])
        .env("HHBV_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert_eq!(msg.lines().count(), 1);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("hhbv-out-{}.json", std::process::id()));
    let out = hhbv(&["hh", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["job"], "hh");
    std::fs::remove_file(path).unwrap();
}

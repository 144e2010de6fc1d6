use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use latpoly::persist::{parse_counts_csv, read_level};

fn latpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .flat_map(|p| {
            if p.is_dir() {
                read_dir_sorted(&p)
            } else {
                vec![(
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                )]
            }
        })
        .collect();
    files.sort();
    files
}

const DISC_2_CSV: &str = "w,count\n3,1\n4,3\n5,6\n6,11\n7,15\n8,16\n9,12\n10,6\n11,3\n12,1\n13,1\n# total=75\n";

#[test]
fn enumerate_writes_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r2");
    let run = latpoly(&["enumerate", "--radius", "2", "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let csv = fs::read_to_string(out.join("counts.csv")).unwrap();
    assert_eq!(csv, DISC_2_CSV);
    let (rows, total) = parse_counts_csv(&csv).unwrap();
    assert_eq!(rows.iter().map(|r| r.count).sum::<u64>(), total);
    assert!(stdout(&run).contains("# total=75"));
    let level = read_level(&out.join("levels").join("w008.ndjson")).unwrap();
    assert_eq!(level.len(), 16);
    assert!(level.iter().all(|r| r.w == 8 && r.points == 8));
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out, workers) in [(&a, "1"), (&b, "3")] {
        let run = latpoly(&[
            "enumerate",
            "--radius2",
            "9",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(run.status.success());
    }
    assert_eq!(read_dir_sorted(&a), read_dir_sorted(&b));
}

#[test]
fn region_file_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let region = dir.path().join("region.json");
    fs::write(&region, r#"{"kind":"disc","radius2":"4"}"#).unwrap();
    let fast = dir.path().join("fast");
    let slow = dir.path().join("slow");
    let r = region.to_str().unwrap();
    assert!(latpoly(&["enumerate", "--region", r, "--out", fast.to_str().unwrap()])
        .status
        .success());
    assert!(latpoly(&["oracle", "--region", r, "--out", slow.to_str().unwrap()])
        .status
        .success());
    assert_eq!(
        fs::read_to_string(fast.join("counts.csv")).unwrap(),
        fs::read_to_string(slow.join("counts.csv")).unwrap()
    );
    assert_eq!(fs::read_to_string(slow.join("counts.csv")).unwrap(), DISC_2_CSV);
}

#[test]
fn eq_prints_witness_for_random_image() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    fs::write(&a, "[[0,0],[3,0],[2,1],[0,2]]").unwrap();
    let run = latpoly(&["eq", "--a", a.to_str().unwrap(), "--seed", "42"]);
    assert!(run.status.success());
    assert!(stdout(&run).contains("equivalent: "), "{}", stdout(&run));

    let b = dir.path().join("b.json");
    fs::write(&b, "[[0,0],[1,0],[0,1]]").unwrap();
    let run = latpoly(&["eq", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert!(run.status.success());
    assert_eq!(stdout(&run).trim(), "not equivalent");
}

#[test]
fn eq_between_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    fs::write(&a, "[[0,0],[1,0],[0,1]]").unwrap();
    fs::write(&b, r#"{"hull":[[5,5],[6,5],[6,6]]}"#).unwrap();
    let run = latpoly(&["eq", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert!(run.status.success());
    assert!(stdout(&run).starts_with("equivalent: "));
}

#[test]
fn invariants_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    fs::write(&p, "[[-2,0],[0,-2],[2,0],[0,2]]").unwrap();
    let run = latpoly(&["invariants", "--polygon", p.to_str().unwrap()]);
    assert!(run.status.success());
    assert_eq!(
        stdout(&run).trim(),
        r#"{"f0":4,"bound":8,"area2":16,"sides":[3,3,3,3],"tr2":[8,8,8,8]}"#
    );
}

#[test]
fn verify_theorem2_reports_classes() {
    let run = latpoly(&["verify-theorem2", "--tau2", "5"]);
    assert!(run.status.success());
    let text = stdout(&run);
    assert!(
        text.starts_with("64 polygons, 64 classes, max class size 1\n"),
        "{text}"
    );
    assert!(text.contains("lower bound 2^5 = 32: met"));
}

#[test]
fn construct_command() {
    let run = latpoly(&["construct", "--tau2", "4", "--selector", "1,1"]);
    assert!(run.status.success());
    assert!(
        stdout(&run).contains(r#""hull":[[0,0],[6,0],[3,2],[1,1]]"#),
        "{}",
        stdout(&run)
    );
    let fit = latpoly(&["construct", "--tau2", "4", "--fit-radius2", "18"]);
    assert!(stdout(&fit).contains(r#""hull":[[-3,0],[3,0],[1,2],[-1,2]]"#));
    let miss = latpoly(&["construct", "--tau2", "4", "--fit-radius2", "9"]);
    assert!(miss.status.success());
    assert!(stdout(&miss).starts_with("fan (3 vectors)"));
    assert!(stdout(&miss).contains("does not fit"));
}

#[test]
fn exit_codes() {
    assert_eq!(latpoly(&[]).status.code(), Some(1));
    assert_eq!(latpoly(&["enumerate"]).status.code(), Some(1));
    assert_eq!(
        latpoly(&["enumerate", "--radius", "2", "--radius2", "4"]).status.code(),
        Some(1)
    );
    assert_eq!(latpoly(&["verify-theorem2", "--tau2", "1"]).status.code(), Some(1));
    assert_eq!(latpoly(&["oracle", "--radius", "3"]).status.code(), Some(1));
    assert_eq!(
        latpoly(&["construct", "--tau2", "4", "--selector", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(latpoly(&["--help"]).status.code(), Some(0));
    assert_eq!(latpoly(&["--version"]).status.code(), Some(0));
}

use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use threshold_lab::cli::{main_with_args, ExitStatus};
use threshold_lab::refdata::{load_dataset, read_csv, DatasetSource, ThresholdRecord};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn run(args: &[String]) -> (ExitStatus, Vec<u8>, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let full = std::iter::once("threshold-lab".to_string()).chain(args.iter().cloned());
    let status = main_with_args(full, &mut out, &mut err);
    (status, out, err)
}

fn format() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["text", "csv", "json"])
}

fn invocation() -> impl Strategy<Value = Vec<String>> {
    let bands = (2u32..=8, 0u32..=6, format())
        .prop_map(|(k, n, f)| format!("bands --kappa {k} --n-max {n} --format {f}"));
    let interp = (2u32..=9, format())
        .prop_map(|(k, f)| format!("interp --kappa {k} --band 1 --sigma {k},{} --format {f}", 2 * k));
    let validate = (3usize..=6, 3usize..=40, format()).prop_map(|(e, x, f)| {
        format!("validate --kappa 4 --band 1 --sigma 4,8 --e-grid {e} --x-grid {x} --format {f}")
    });
    let refdata = (prop::sample::select(vec!["all", "table1", "table2", "table4", "section8"]), format())
        .prop_map(|(s, f)| format!("refdata --source {s} --format {f}"));
    let plot = (1.42f64..1.70, 2usize..60, prop::sample::select(vec!["svg", "csv", "json"])).prop_map(|(e, n, f)| {
        format!("plot --kind g-curve --kappa 4 --band 1 --sigma 4,8 --energy {e} --samples {n} --format {f}")
    });
    prop_oneof![bands, interp, validate, refdata, plot]
        .prop_map(|s| s.split_whitespace().map(String::from).collect())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn reruns_are_byte_identical(args in invocation()) {
        let a = run(&args);
        let b = run(&args);
        prop_assert_eq!(a.0, ExitStatus::Success, "{:?}: {}", args, String::from_utf8_lossy(&a.2));
        prop_assert_eq!(&a, &b);
        prop_assert!(!a.1.contains(&b'\r'));
    }
}

#[test]
fn file_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (i, cmd) in [
        "bands --kappa 4 --n-max 5 --format csv",
        "interp --kappa 3 --band 5 --sigma 3,6,9,12,15,18,21,24,27,30 --format json",
        "plot --kind g-curve --kappa 4 --band 1 --sigma 4,8 --energy lower",
        "refdata --format csv",
    ]
    .iter()
    .enumerate()
    {
        let mut contents = Vec::new();
        for _ in 0..2 {
            let path = dir.path().join(format!("{i}.out"));
            let mut args: Vec<String> = cmd.split_whitespace().map(String::from).collect();
            args.extend(["--output".into(), path.display().to_string()]);
            let (status, out, _) = run(&args);
            assert_eq!(status, ExitStatus::Success, "{cmd}");
            assert!(out.is_empty());
            contents.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(contents[0], contents[1], "{cmd}");
    }
}

#[test]
fn refdata_csv_reads_back() {
    let (status, out, _) = run(&["refdata".into(), "--format".into(), "csv".into()]);
    assert_eq!(status, ExitStatus::Success);
    let all: Vec<ThresholdRecord> = DatasetSource::ALL.into_iter().flat_map(load_dataset).collect();
    assert_eq!(read_csv(out.as_slice()).unwrap(), all);
}

#[test]
fn bands_table_for_kappa_four() {
    let args: Vec<String> = "bands --kappa 4 --n-max 5 --format csv".split(' ').map(String::from).collect();
    let (status, out, _) = run(&args);
    assert_eq!(status, ExitStatus::Success);
    let text = String::from_utf8(out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    let table: Vec<ThresholdRecord> = load_dataset(DatasetSource::Table1).into_iter().filter(|r| r.kappa == 4).collect();
    for (row, rec) in rows.iter().zip(&table) {
        let e: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((e - rec.value.unwrap()).abs() < 1e-3, "{row} vs {rec:?}");
    }
}

#[test]
fn interp_json_carries_rho() {
    let args: Vec<String> = "interp --kappa 3 --band 5 --sigma 3,6,9,12,15,18,21,24,27,30 --format json"
        .split(' ')
        .map(String::from)
        .collect();
    let (status, out, _) = run(&args);
    assert_eq!(status, ExitStatus::Success);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["command"], "interp");
    let rho: Vec<f64> = v["results"]["rho"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let want = [1.0, 1.599931, 1.645307, 1.27734, 0.77838, 0.37292, 0.13741, 0.03703, 0.00657, 0.00058];
    for (r, w) in rho.iter().zip(want) {
        assert!((r - w).abs() < 1e-4);
    }
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_threshold-lab"))
}

#[test]
fn binary_exit_codes() {
    let code = |args: &[&str]| binary().args(args).output().unwrap().status.code();
    assert_eq!(code(&["bands", "--kappa", "3", "--n-max", "2"]), Some(0));
    assert_eq!(code(&["bands", "--kappa", "3"]), Some(64));
    assert_eq!(code(&["rate", "--kappa", "3", "--indices", "5:1:1"]), Some(64));
    assert_eq!(code(&["minpoly", "--kappa", "3", "--n", "2", "--format", "svg"]), Some(64));
    assert_eq!(
        code(&["interp", "--kappa", "4", "--band", "1", "--sigma", "4,8,12,16,20,24,28,32,36"]),
        Some(1)
    );
    assert_eq!(
        code(&["validate", "--kappa", "4", "--band", "2", "--sigma", "4,8,12,16", "--e-grid", "21", "--x-grid", "401", "--expect-valid"]),
        Some(2)
    );
    let out = binary().args(["bands", "--kappa", "3"]).output().unwrap();
    assert!(!out.stderr.is_empty() && out.stdout.is_empty());
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["validate", "--kappa", "4", "--band", "2", "--sigma", "4,8,12,24", "--e-grid", "31", "--x-grid", "301", "--format", "json"];
    let one = binary().env("THRESHOLD_LAB_THREADS", "1").args(args).output().unwrap();
    let many = binary().env("THRESHOLD_LAB_THREADS", "4").args(args).output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let bad = binary().env("THRESHOLD_LAB_THREADS", "0").args(args).output().unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

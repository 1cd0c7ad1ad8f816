use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use ddm_bench::bench::{parse_rows, run_bench};
use ddm_bench::cli::{Command as Sub, VerifyArgs, WorkloadArgs};
use ddm_bench::region_file::{load_regions, save_regions};
use ddm_bench::verify::{default_candidates, verify_with, Candidate};
use ddm_bench::Cli;
use ddm_core::workload::{gen_uniform_dd, SyntheticSpec};
use ddm_core::{match_dd, Algorithm, MatchReport, MatcherConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ddm-bench"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bench_args(line: &str) -> ddm_bench::cli::BenchArgs {
    let argv = std::iter::once("ddm-bench").chain(line.split_whitespace());
    match Cli::try_parse_from(argv).unwrap().command {
        Sub::Bench(b) => b,
        other => panic!("{other:?}"),
    }
}

#[test]
fn worker_list_gives_one_row_each_with_equal_k() {
    let rows = run_bench(&bench_args("bench --algo sbm-par --N 100000 --alpha 1 --P 1,2,4 --reps 5")).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.k == rows[0].k && r.reps == 5));
    assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), vec![1, 2, 4]);
    assert!(rows.iter().all(|r| r.speedup_vs_p1.is_some()));
}

#[test]
fn single_rep_baseline_has_unit_speedup() {
    let rows = run_bench(&bench_args("bench --algo itm --N 1000 --reps 1 --P 1")).unwrap();
    assert_eq!(rows[0].speedup_vs_p1, Some(1.0));
    assert_eq!(rows[0].stddev, 0.0);
    let rows = run_bench(&bench_args("bench --algo itm --N 1000 --reps 1 --P 2")).unwrap();
    assert_eq!(rows[0].speedup_vs_p1, None);
}

#[test]
fn all_algorithms_report_the_same_k() {
    for mode in ["count", "enumerate"] {
        let rows = run_bench(&bench_args(&format!("bench --algo all --N 4000 --alpha 10 --d 2 --reps 2 --P 1,3 --mode {mode}"))).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows[0].k > 0);
        assert!(rows.iter().all(|r| r.k == rows[0].k && r.d == 2), "{rows:?}");
    }
}

#[test]
fn csv_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let status = bin()
        .args(["bench", "--algo", "all", "--N", "2000", "--reps", "2", "--P", "1,2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(
        "algo,N,alpha_or_trace,d,P,reps,mean_wct_seconds,stddev,K,speedup_vs_P1,peak_rss_kb\n"
    ));
    let rows = parse_rows(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 10);
    for r in &rows {
        assert!(r.reps >= 1 && r.mean_wct_seconds >= 0.0 && r.n == 2000);
        assert_eq!(r.alpha_or_trace, "1");
    }
}

#[test]
fn trace_workload_is_named_by_file() {
    let line = format!("bench --algo sbm-seq --trace {} --reps 1", fixture("vehicle_sample.tr").display());
    let rows = run_bench(&bench_args(&line)).unwrap();
    assert_eq!(rows[0].alpha_or_trace, "vehicle_sample.tr");
    assert_eq!(rows[0].n, 200);
}

#[test]
fn usage_and_workload_errors_exit_codes() {
    let out = bin().args(["bench", "--algo", "quadtree"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["bench", "--algo", "bfm", "--P", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["bench", "--N", "10", "--alpha", "100"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
    let out = bin().args(["verify", "--trace", "/nonexistent/file.tr"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_plane_fixture_passes() {
    let out = bin().arg("verify").arg("--regions").arg(fixture("plane_example.regions")).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 7, "{text}");
    assert!(lines.iter().all(|l| l.starts_with("PASS ") && l.ends_with(" K=4")), "{text}");
}

#[test]
fn verify_seed_suite_passes() {
    for seed in 0..20 {
        let args = VerifyArgs {
            workload: WorkloadArgs { n: 600, alpha: [0.5, 5.0, 50.0][seed as usize % 3], d: 1 + seed as usize % 3, seed, ..Default::default() },
            ncells: 97,
            workers: vec![1, 3, 4, 8],
        };
        let mut out = Vec::new();
        let outcome = ddm_bench::verify::cmd_verify(&args, &mut out).unwrap();
        assert!(outcome.all_passed(), "seed {seed}: {}", String::from_utf8_lossy(&out));
        assert_eq!(outcome.passed, 8);
    }
}

#[test]
fn corrupted_matcher_fails_naming_a_pair() {
    let (subs, upds) = load_regions(&fixture("plane_example.regions")).unwrap();
    let mut candidates = default_candidates(&[2], 10);
    candidates.push(Candidate::new("drops-last", |s, u| {
        let mut r = match_dd(s, u, Algorithm::SbmSeq, &MatcherConfig::default())?;
        r.pairs.pop();
        Ok(MatchReport::from_pairs(r.pairs))
    }));
    candidates.push(Candidate::new("adds-one", |s, u| {
        let mut r = match_dd(s, u, Algorithm::Itm, &MatcherConfig::default())?;
        r.pairs.push((0, 1));
        Ok(MatchReport::from_pairs(r.pairs))
    }));
    let mut out = Vec::new();
    let outcome = verify_with(&subs, &upds, &candidates, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!((outcome.passed, outcome.failed), (5, 2));
    assert!(text.contains("FAIL drops-last K=3 expected K=4: missing pair (S2, U1)"), "{text}");
    assert!(text.contains("FAIL adds-one K=5 expected K=4: spurious pair (S0, U1)"), "{text}");
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.regions");
    let b = dir.path().join("b.regions");
    for path in [&a, &b] {
        let status = bin()
            .args(["gen", "--N", "4", "--alpha", "1", "--seed", "7", "--d", "2", "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(text.starts_with("ddm-regions v1 d=2 n=2 m=2\n"));

    let loaded = load_regions(&a).unwrap();
    let spec = SyntheticSpec { total: 4, alpha: 1.0, space_length: 1e6, seed: 7 };
    assert_eq!(loaded, gen_uniform_dd(&spec, 2).unwrap());

    let stdout = bin().args(["gen", "--N", "4", "--seed", "7", "--d", "2"]).output().unwrap();
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);
}

#[test]
fn save_then_load_larger_set() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.regions");
    let (s, u) = gen_uniform_dd(&SyntheticSpec::new(2000, 3.0, 5), 3).unwrap();
    save_regions(&path, &s, &u).unwrap();
    assert_eq!(load_regions(&path).unwrap(), (s, u));
}

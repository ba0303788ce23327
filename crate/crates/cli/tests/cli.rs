use std::path::Path;
use std::process::{Command, Output};

fn dmst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmst"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = dmst(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// CSV text with the `elapsed_ms` column removed.
fn without_timing(csv: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|&h| h == "elapsed_ms").unwrap();
    std::iter::once(csv.lines().next().unwrap().to_owned())
        .chain(lines.map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(col);
            f.join(",")
        }))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn gen_run_aggregate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    ok(&[
        "gen",
        "--kind",
        "uniform",
        "--n",
        "20",
        "--count",
        "3",
        "--seed",
        "7",
        "--out",
        p(&inst),
    ]);
    ok(&[
        "gen",
        "--kind",
        "special",
        "--n",
        "30",
        "--count",
        "2",
        "--seed",
        "1",
        "--out",
        p(&inst),
    ]);
    let mut names: Vec<String> = std::fs::read_dir(&inst)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "special-n30-s1.txt",
            "special-n30-s2.txt",
            "uniform-n20-s7.txt",
            "uniform-n20-s8.txt",
            "uniform-n20-s9.txt"
        ]
    );
    let header = std::fs::read_to_string(inst.join("uniform-n20-s8.txt")).unwrap();
    assert!(header.starts_with("# dmst-instance v1 n=20 seed=8 kind=uniform\n"));

    let results = dir.path().join("results.csv");
    ok(&[
        "run",
        "--instances",
        p(&inst),
        "--delta",
        "3",
        "--algos",
        "all",
        "--seed",
        "5",
        "--out",
        p(&results),
        "--mhc-m",
        "50",
        "--mhc-r",
        "10",
    ]);
    let csv = std::fs::read_to_string(&results).unwrap();
    // 5 instances × 9 algorithms supporting δ = 3
    assert_eq!(csv.lines().count(), 1 + 5 * 9);

    let summary = dir.path().join("summary.csv");
    let plots = dir.path().join("plots");
    let out = ok(&[
        "aggregate",
        "--in",
        p(&results),
        "--out",
        p(&summary),
        "--plot-data",
        p(&plots),
    ]);
    assert!(out.contains("row(s)"));
    let rows = std::fs::read_to_string(&summary).unwrap();
    assert_eq!(rows.lines().count(), 1 + 2 * 9);
    assert!(plots.join("uniform-d3-weight-FWLS.dat").exists());
    assert!(plots.join("special-d3-bottleneck-KRY-B.dat").exists());
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    ok(&[
        "gen",
        "--kind",
        "uniform",
        "--n",
        "25",
        "--count",
        "2",
        "--out",
        p(&inst),
    ]);
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "run",
            "--instances",
            p(&inst),
            "--delta",
            "2",
            "--seed",
            "11",
            "--out",
            p(&out),
            "--mhc-m",
            "60",
            "--mhc-r",
            "15",
        ]);
        without_timing(&std::fs::read_to_string(out).unwrap())
    };
    assert_eq!(run("a.csv"), run("b.csv"));

    let again = dir.path().join("again");
    ok(&[
        "gen",
        "--kind",
        "uniform",
        "--n",
        "25",
        "--count",
        "2",
        "--out",
        p(&again),
    ]);
    for name in ["uniform-n25-s0.txt", "uniform-n25-s1.txt"] {
        assert_eq!(
            std::fs::read(inst.join(name)).unwrap(),
            std::fs::read(again.join(name)).unwrap()
        );
    }
}

#[test]
fn oracle_prints_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("square.txt");
    std::fs::write(
        &file,
        "# dmst-instance v1 n=4 seed=0 kind=uniform\n0 0\n0 1\n1 1\n1 0\n",
    )
    .unwrap();
    let out = ok(&[
        "oracle",
        "--instances",
        p(&file),
        "--delta",
        "2",
        "--objective",
        "weight",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "instance_id,n,objective,weight,bottleneck,mst_weight,mst_bottleneck"
    );
    assert_eq!(lines[1], "uniform-n4-s0,4,weight,3,1,3,1");
}

#[test]
fn oracle_enforces_its_cap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    ok(&["gen", "--kind", "uniform", "--n", "9", "--out", p(&inst)]);
    let out = dmst(&["oracle", "--instances", p(&inst), "--delta", "3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    // δ = 2 falls back to the path solver, which handles n = 9
    ok(&[
        "oracle",
        "--instances",
        p(&inst),
        "--delta",
        "2",
        "--objective",
        "bottleneck",
    ]);
}

#[test]
fn errors_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let cases = [
        "# dmst-instance v1 n=2 seed=0 kind=uniform\n1 1\n1 1\n",
        "# dmst-instance v1 n=2 seed=0 kind=uniform\n1 1\n2 x\n",
        "# dmst-instance v1 n=3 seed=0 kind=uniform\n1 1\n2 2\n",
        "# something else\n1 1\n2 2\n",
    ];
    let out_csv = dir.path().join("r.csv");
    for text in cases {
        std::fs::write(&bad, text).unwrap();
        let out = dmst(&["run", "--instances", p(&bad), "--delta", "2", "--out", p(&out_csv)]);
        assert!(!out.status.success(), "accepted {text:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }

    let inst = dir.path().join("inst");
    ok(&["gen", "--kind", "uniform", "--n", "12", "--out", p(&inst)]);
    for args in [
        vec![
            "run",
            "--instances",
            p(&inst),
            "--delta",
            "2",
            "--algos",
            "Chan4",
            "--out",
            p(&out_csv),
        ],
        vec!["run", "--instances", p(&inst), "--delta", "5", "--out", p(&out_csv)],
        vec![
            "run",
            "--instances",
            p(&inst),
            "--delta",
            "3",
            "--algos",
            "NoSuch",
            "--out",
            p(&out_csv),
        ],
        vec!["gen", "--kind", "special", "--n", "8", "--out", p(&inst)],
    ] {
        let out = dmst(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn empty_results_aggregate_to_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("empty.csv");
    std::fs::write(
        &results,
        "algorithm,instance_id,n,delta,seed,weight,bottleneck,mst_weight,mst_bottleneck,iterations,elapsed_ms\n",
    )
    .unwrap();
    let summary = dir.path().join("summary.csv");
    ok(&["aggregate", "--in", p(&results), "--out", p(&summary)]);
    let text = std::fs::read_to_string(&summary).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("algorithm,n,mean_weight_ratio,mean_bottleneck_ratio,count"));
}

use std::path::Path;

use tetron::cli::{check_header, read_rates, run_from_args, RATE_COLUMNS, WANNIER_COLUMNS};

fn run(dir: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["tetron".to_owned()];
    argv.extend(args.iter().map(|s| s.to_string()));
    for a in argv.iter_mut() {
        if let Some(rest) = a.strip_prefix("@/") {
            *a = dir.join(rest).display().to_string();
        }
    }
    run_from_args(argv)
}

const SMALL: [&str; 8] = ["--n", "6", "--q", "0.05,0.1", "--samples", "300", "--seed", "4"];

#[test]
fn rates_csv_has_fixed_schema_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["rates-mc", "--mu", "0.3", "--delta", "0.4", "--d", "0,1,2", "-o", "@/r.csv"];
    args.extend(SMALL);
    assert_eq!(run(dir.path(), &args), 0);
    let csv = dir.path().join("r.csv");
    check_header(&csv, &RATE_COLUMNS).unwrap();
    let rows = read_rates(&csv).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.samples == 300 && r.seed == 4 && r.lambda == r.d.max(1)));

    let meta: toml::Table = toml::from_str(&std::fs::read_to_string(dir.path().join("r.csv.meta.toml")).unwrap()).unwrap();
    assert_eq!(meta["run"]["mode"].as_str(), Some("rates-mc"));
    assert_eq!(meta["run"]["seed"].as_integer(), Some(4));
    assert!(meta["run"]["git_revision"].as_str().is_some());
    assert_eq!(meta["config"]["physics"]["mu"].as_float(), Some(0.3));
    assert_eq!(meta["config"]["code"]["d"].as_array().unwrap().len(), 3);
}

#[test]
fn reruns_are_byte_identical_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = vec!["sweep", "--preset", "fig5b", "--workers", "1", "--d", "0,1", "-o", "@/a.csv"];
    a.extend(SMALL);
    let mut b = vec!["sweep", "--preset", "fig5b", "--workers", "3", "--d", "0,1", "-o", "@/b.csv"];
    b.extend(SMALL);
    assert_eq!(run(dir.path(), &a), 0);
    assert_eq!(run(dir.path(), &b), 0);
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
}

#[test]
fn disorder_sweep_aggregates_per_realization_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["sweep", "--preset", "fig5c", "--realizations", "3", "--d", "0,1", "-o", "@/c.csv"];
    args.extend(SMALL);
    assert_eq!(run(dir.path(), &args), 0);
    let rows = read_rates(&dir.path().join("c.csv")).unwrap();
    let means: Vec<_> = rows.iter().filter(|r| r.realization == "mean").collect();
    assert_eq!(means.len(), 4);
    assert!(rows.iter().all(|r| r.dmu == 0.3));
    for m in means {
        let group: Vec<_> = rows
            .iter()
            .filter(|r| r.realization != "mean" && r.d == m.d && r.q == m.q)
            .collect();
        assert_eq!(group.len(), 3);
        let mean = group.iter().map(|r| r.p_bitflip).sum::<f64>() / 3.0;
        let var = group.iter().map(|r| (r.p_bitflip - mean).powi(2)).sum::<f64>() / 2.0;
        assert!((m.p_bitflip - mean).abs() < 1e-12);
        assert!((m.p_bitflip_se - (var / 3.0).sqrt()).abs() < 1e-12);
        let loss = group.iter().map(|r| r.p_loss).sum::<f64>() / 3.0;
        assert!((m.p_loss - loss).abs() < 1e-12);
    }
}

#[test]
fn fixed_and_threshold_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["rates-fixed", "--n", "20", "--d", "0,2", "--q", "0.1", "-o", "@/f.csv"]), 0);
    let rows = read_rates(&dir.path().join("f.csv")).unwrap();
    assert!((rows[0].p_loss - 0.2952).abs() < 1e-4);
    assert!((rows[0].p_bitflip - 0.04597).abs() < 1e-5);

    let args = [
        "sweep", "--preset", "fig6", "--n", "8", "--d", "0,2", "--q", "0.02,0.05,0.1,0.2", "--samples", "400", "-o", "@/t.csv",
    ];
    assert_eq!(run(dir.path(), &args), 0);
    let th = dir.path().join("t_thresholds.csv");
    let text = std::fs::read_to_string(&th).unwrap();
    assert!(text.starts_with("d,q_bitflip,"));
    assert_eq!(text.lines().count(), 3);
    let meta = std::fs::read_to_string(dir.path().join("t.csv.meta.toml")).unwrap();
    assert!(meta.contains("[thresholds]") && meta.contains("preset = \"fig6\""));
}

#[test]
fn wannier_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["sweep", "--preset", "fig3", "--n", "12", "-o", "@/w.csv"]), 0);
    for f in ["w_mu0.3_delta0.4.csv", "w_mu0.99_delta0.05.csv"] {
        let path = dir.path().join(f);
        check_header(&path, &WANNIER_COLUMNS).unwrap();
        // Two chains, n-1 WQPs, n sites each.
        let lines = std::fs::read_to_string(&path).unwrap().lines().count();
        assert_eq!(lines, 1 + 2 * 11 * 12);
    }
    assert_eq!(run(dir.path(), &["spectrum", "--n", "5", "-o", "@/s.csv"]), 0);
    assert!(std::fs::read_to_string(dir.path().join("s.csv")).unwrap().starts_with("chain,k,energy"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Invalid configuration.
    assert_eq!(run(dir.path(), &["rates-mc", "--n", "6", "--d", "3", "-o", "@/x.csv"]), 2);
    assert_eq!(run(dir.path(), &["rates-mc", "--q", "-0.1", "-o", "@/x.csv"]), 2);
    assert_eq!(run(dir.path(), &["sweep", "--preset", "fig9"]), 2);
    assert_eq!(run(dir.path(), &["rates-mc", "--config", "@/missing.toml"]), 2);
    std::fs::write(dir.path().join("bad.toml"), "[physics]\nmu = \"high\"\n").unwrap();
    assert_eq!(run(dir.path(), &["rates-mc", "--config", "@/bad.toml"]), 2);
    assert_eq!(run(dir.path(), &["rates-mc", "--workers", "0"]), 2);
    assert!(!dir.path().join("x.csv").exists());
    // Nearly every sample is a detected loss: too few survivors to estimate a ratio.
    let args = ["rates-mc", "--n", "8", "--d", "3", "--q", "0.5", "--samples", "50", "-o", "@/y.csv"];
    assert_eq!(run(dir.path(), &args), 3);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "[physics]\nn = 6\nmu = 0.2\n[code]\nd = [1]\n[noise]\nq = [0.1]\n[mc]\nsamples = 200\nseed = 8\n",
    )
    .unwrap();
    assert_eq!(run(dir.path(), &["rates-mc", "--config", "@/run.toml", "--seed", "9", "-o", "@/o.csv"]), 0);
    let rows = read_rates(&dir.path().join("o.csv")).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0].mu, rows[0].n, rows[0].seed, rows[0].samples), (0.2, 6, 9, 200));
}

#[test]
fn header_check_rejects_schema_drift() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drift.csv");
    let mut cols = RATE_COLUMNS.to_vec();
    cols.swap(11, 13);
    std::fs::write(&path, format!("{}\n", cols.join(","))).unwrap();
    assert!(check_header(&path, &RATE_COLUMNS).is_err());
    assert!(read_rates(&path).is_err());
}

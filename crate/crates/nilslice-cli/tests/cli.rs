use std::path::PathBuf;
use std::process::Command as Proc;

use nilslice::liealg::Family;
use nilslice::slices::OrbitIndex;
use nilslice_cli::{run, CampaignConfig, Command, NPolicy, Report, SCHEMA_VERSION};
use serde_json::Value;

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_nilslice"))
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Equal up to float noise: numbers within 1e-6 relative or both below
/// 1e-12, everything else exactly.
fn close(a: &Value, b: &Value, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            let ok = (x - y).abs() <= 1e-6 * x.abs().max(y.abs()) || (x.abs() < 1e-12 && y.abs() < 1e-12);
            ok.then_some(()).ok_or_else(|| format!("{path}: {x} vs {y}"))
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            x.iter().zip(y).enumerate().try_for_each(|(k, (p, q))| close(p, q, &format!("{path}[{k}]")))
        }
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => x.iter().try_for_each(|(k, v)| {
            let w = y.get(k).ok_or_else(|| format!("{path}.{k} missing"))?;
            close(v, w, &format!("{path}.{k}"))
        }),
        _ => (a == b).then_some(()).ok_or_else(|| format!("{path}: {a} vs {b}")),
    }
}

fn check_golden(name: &str, report: &Report) {
    let json = report.without_timings().to_json();
    let path = golden_path(name);
    if std::env::var_os("NILSLICE_BLESS").is_some() {
        std::fs::write(&path, json + "\n").unwrap();
        return;
    }
    let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let got: Value = serde_json::from_str(&json).unwrap();
    if let Err(e) = close(&want, &got, "$") {
        panic!("{name} differs from the golden file at {e}; rerun with NILSLICE_BLESS=1 after checking");
    }
}

#[test]
fn golden_report_m4() {
    let config = CampaignConfig { m_max: 4, ..CampaignConfig::default() };
    let r = run(Command::ReportAll, &config).unwrap();
    assert!(r.pass);
    check_golden("report_all_m4.json", &r);
}

#[test]
fn report_covers_exactly_the_valid_cells() {
    let config = CampaignConfig { m_max: 5, samples: Some(1), ..CampaignConfig::default() };
    let r = run(Command::ReportAll, &config).unwrap();
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    let want: Vec<(Family, usize, usize)> = Family::ALL
        .iter()
        .flat_map(|&f| (1..=5).flat_map(move |m| OrbitIndex::all(f, m)))
        .map(|i| (i.family(), i.m(), i.n))
        .collect();
    for c in [Command::VerifyCharpoly, Command::VerifyTransversality, Command::VerifyJm, Command::VerifySmoothness] {
        let got: Vec<_> = r.campaign(c).unwrap().cells.iter().map(|x| (x.kind, x.m, x.n)).collect();
        assert_eq!(got, want, "{c}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let config = CampaignConfig { m_max: 4, samples: Some(3), kinds: vec![Family::D], ..CampaignConfig::default() };
    let a = run(Command::VerifyEmbedding, &config).unwrap().without_timings();
    std::env::set_var("NILSLICE_THREADS", "1");
    let b = run(Command::VerifyEmbedding, &config).unwrap().without_timings();
    std::env::remove_var("NILSLICE_THREADS");
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn explicit_n_must_be_valid() {
    let config = CampaignConfig { kinds: vec![Family::D], m_min: 3, m_max: 3, n: NPolicy::Explicit(2), ..CampaignConfig::default() };
    assert!(run(Command::VerifyJm, &config).is_err());
}

#[test]
fn kleinian_for_sp6() {
    let out = bin().args(["verify-kleinian", "--kind", "C", "--m", "3"]).output().unwrap();
    assert!(out.status.success());
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    let cell = &r.campaigns[0].cells[0];
    assert_eq!((cell.kind, cell.m, cell.n), (Family::C, 3, 1));
    assert_eq!(cell.info["found"], "D4");
}

#[test]
fn charpoly_so10_n1() {
    let out = bin()
        .args(["verify-charpoly", "--kind", "D", "--m", "5", "--n", "1", "--samples", "25", "--seed", "7", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("D(m=5, n=1) PASS samples=25"), "{text}");
    assert!(text.contains("max_residual=0.000e0"), "{text}");
}

#[test]
fn out_flag_and_config_errors() {
    let dir = std::env::temp_dir().join(format!("nilslice-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jm.json");
    let out = bin().args(["verify-jm", "--m-max", "3", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r.pass);
    std::fs::remove_dir_all(&dir).unwrap();

    let bad = bin().args(["verify-jm", "--kind", "B", "--m", "2", "--n", "0"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let clash = bin().args(["verify-jm", "--m", "2", "--m-max", "3"]).output().unwrap();
    assert!(!clash.status.success());
}

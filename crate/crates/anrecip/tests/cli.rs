use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn anrecip(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anrecip"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ANRECIP_WORKERS")
        .output()
        .unwrap()
}

fn ok(args: &[&str], cwd: &Path) {
    let o = anrecip(args, cwd);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn synth_pair(dir: &Path, name: &str, seed: &str, detune: &str) {
    ok(
        &["synth", "--kind", "harmonic", "--seed", seed, "--detune", detune, "--band", "B1", "--out", name],
        dir,
    );
}

#[test]
fn unknown_flag_prints_usage() {
    let d = tempfile::tempdir().unwrap();
    let o = anrecip(&["correlate", "--bogus"], d.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn bad_input_fails_cleanly_without_outputs() {
    let d = tempfile::tempdir().unwrap();
    synth_pair(d.path(), "syn", "1", "0.01");
    let text = fs::read_to_string(d.path().join("syn/dl.csv")).unwrap();
    fs::write(d.path().join("broken.csv"), text.replace("\n30,45,", "\n30,x45,")).unwrap();
    let o = anrecip(
        &["correlate", "--ul", "syn/ul.csv", "--dl", "broken.csv", "--out", "res"],
        d.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains("broken.csv: line") && err.contains("non-numeric"));
    assert!(!d.path().join("res").exists());
}

#[test]
fn correlate_writes_map_and_summary() {
    let d = tempfile::tempdir().unwrap();
    synth_pair(d.path(), "syn", "2", "0.02");
    ok(
        &[
            "correlate", "--ul", "syn/ul.csv", "--dl", "syn/dl.csv", "--sigma-rel", "15", "--xpd-db", "3",
            "--quadruple", "--out", "res",
        ],
        d.path(),
    );
    let map = fs::read_to_string(d.path().join("res/map.csv")).unwrap();
    assert!(map.starts_with("theta_c,phi_c,rho_abs,rho_phase_deg,truncated\n"));
    assert_eq!(map.lines().count(), 267);
    let summary = fs::read_to_string(d.path().join("res/summary.csv")).unwrap();
    assert!(summary.contains("\nsphere,266,") && summary.contains("\ngirdle,72,"));
    let run: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("res/run.json")).unwrap()).unwrap();
    assert_eq!(run["parameters"]["xpd_db"], 3.0);
    assert_eq!(run["results"]["quadruple"].as_array().unwrap().len(), 3);
}

#[test]
fn negative_xpd_is_accepted() {
    let d = tempfile::tempdir().unwrap();
    synth_pair(d.path(), "syn", "2", "0.02");
    ok(
        &["correlate", "--ul", "syn/ul.csv", "--dl", "syn/dl.csv", "--xpd-db", "-3", "--out", "res"],
        d.path(),
    );
}

#[test]
fn footprint_reports_fits() {
    let d = tempfile::tempdir().unwrap();
    ok(&["footprint", "--sigma-rel", "49", "--center", "90,0", "--out", "fp"], d.path());
    let prof = fs::read_to_string(d.path().join("fp/fit_profiles.csv")).unwrap();
    assert_eq!(prof.lines().count(), 20);
    let run: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("fp/run.json")).unwrap()).unwrap();
    assert!(run["results"]["max_rel_dev_continuous"].as_f64().unwrap() <= 0.015);
    assert_eq!(run["results"]["truncated"], false);
}

#[test]
fn stats_over_a_manifest() {
    let d = tempfile::tempdir().unwrap();
    for (k, seed) in ["3", "4", "5"].iter().enumerate() {
        synth_pair(d.path(), &format!("p{k}"), seed, "0.05");
    }
    let mut m = String::from("phone,band,link,path\n");
    for k in 0..3 {
        m.push_str(&format!("phone{k},B1,UL,p{k}/ul.csv\nphone{k},B1,DL,p{k}/dl.csv\n"));
    }
    fs::write(d.path().join("manifest.csv"), m).unwrap();
    ok(&["stats", "--manifest", "manifest.csv", "--correlation", "--out", "st"], d.path());
    let q = fs::read_to_string(d.path().join("st/quantiles.csv")).unwrap();
    assert!(q.contains("delta_ip,girdle,max,6,"));
    assert!(q.contains("delta_ip_db,girdle,mean,6,"));
    assert!(q.contains("rho_abs,sphere,min,3,"));
    assert!(d.path().join("st/cdf_delta_psi_deg_girdle.csv").exists());
}

#[test]
fn diversity_sc_with_correlation() {
    let d = tempfile::tempdir().unwrap();
    ok(&["synth", "--kind", "two-element", "--seed", "9", "--detune", "0", "--out", "two"], d.path());
    ok(
        &[
            "diversity", "--el1", "two/dl1.csv", "--el2", "two/dl2.csv", "--combiner", "sc", "--ul",
            "two/ul1.csv", "--out", "div",
        ],
        d.path(),
    );
    let map = fs::read_to_string(d.path().join("div/map.csv")).unwrap();
    assert!(map.starts_with("theta_c,phi_c,rho_abs,rho_phase_deg,truncated,winner_theta,winner_phi\n"));
    ok(
        &["diversity", "--el1", "two/dl1.csv", "--el2", "two/dl2.csv", "--combiner", "mrc", "--out", "mrc"],
        d.path(),
    );
    let c = fs::read_to_string(d.path().join("mrc/combined.csv")).unwrap();
    assert!(c.contains("# kind: scalar") && c.contains("ptheta_db"));
}

//! End-to-end runs of the `latscat` binary.

use std::path::Path;
use std::process::{Command, Output};

use latscat::output::read_csv;
use tempfile::TempDir;

fn latscat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latscat"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    read_csv(&std::fs::read(path).unwrap()).unwrap()
}

fn col(h: &[String], name: &str) -> usize {
    h.iter().position(|c| c == name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn scatter_is_byte_identical_across_workers() {
    let d = TempDir::new().unwrap();
    for (w, out) in [("1", "w1"), ("4", "w4"), ("1", "w1b")] {
        let o = latscat(
            &["--workers", w, "scatter", "--scenario", "asymmetric", "--sweep", "theta_deg=0:90:181", "--out", out],
            d.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["scatter.csv", "scatter.json"] {
        let a = std::fs::read(d.path().join("w1").join(f)).unwrap();
        assert_eq!(a, std::fs::read(d.path().join("w4").join(f)).unwrap(), "{f}");
        assert_eq!(a, std::fs::read(d.path().join("w1b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn metadata_embeds_resolved_config() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("c.cfg"), "# reference lattice\na = 2000\ng = 2e-4 # coupling\n").unwrap();
    let o = latscat(&["dispersion", "--config", "c.cfg", "--out", "."], d.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(d.path().join("dispersion.csv")).unwrap();
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(meta.contains(&"# config.g: 0.0002"));
    assert!(meta.contains(&"# config.scenario: polariton-vacancy"));
    assert!(meta.iter().any(|l| l.starts_with("# config.oracle_N_side: ")));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(d.path().join("dispersion.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["g"], 2e-4);
}

#[test]
fn dispersion_crossing_and_splitting() {
    let d = TempDir::new().unwrap();
    // Photon 1 meV below the exciton at k = 0 so the two lines cross at finite k.
    std::fs::write(d.path().join("c.cfg"), "detuning = -5e-4\nk_max = 1e-4\nk_points = 2001\n").unwrap();
    let o = latscat(&["dispersion", "--config", "c.cfg", "--out", "."], d.path());
    assert!(o.status.success());
    let (h, rows) = table(&d.path().join("dispersion.csv"));
    let (ix, ip, im, idt) = (col(&h, "x_minus_sq"), col(&h, "omega_plus"), col(&h, "omega_minus"), col(&h, "detuning"));
    let x2: Vec<f64> = rows.iter().map(|r| num(&r[ix])).collect();
    let dt: Vec<f64> = rows.iter().map(|r| num(&r[idt])).collect();
    let cross = (1..dt.len()).find(|&i| dt[i - 1] * dt[i] <= 0.0).expect("resonance in range");
    assert!((x2[cross - 1] - 0.5) * (x2[cross] - 0.5) <= 0.0);
    let gap = rows.iter().map(|r| num(&r[ip]) - num(&r[im])).fold(f64::INFINITY, f64::min);
    assert!((gap - 2e-4).abs() < 1e-7, "{gap}");
}

#[test]
fn resonant_cavity_length_reported() {
    let d = TempDir::new().unwrap();
    assert!(latscat(&["dispersion", "--out", "."], d.path()).status.success());
    let text = std::fs::read_to_string(d.path().join("dispersion.csv")).unwrap();
    let l: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# derived.L_angstrom: "))
        .unwrap()
        .parse()
        .unwrap();
    // Independent: λ/2 of a 2 eV photon, hc = 12398.42 eV·Å.
    assert!((l - 12398.419843 / 2.0 / 2.0).abs() < 0.5, "{l}");
}

#[test]
fn exciton_amplitude_log_shape() {
    let d = TempDir::new().unwrap();
    let o = latscat(&["scatter", "--scenario", "exciton-vacancy", "--sweep", "k=1e-9:1e-4:60:log", "--out", "."], d.path());
    assert!(o.status.success());
    let (h, rows) = table(&d.path().join("scatter.csv"));
    let k: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
    let re: Vec<f64> = rows.iter().map(|r| num(&r[col(&h, "re_f")])).collect();
    // Re f falls monotonically from 0⁻ as k leaves the origin.
    assert!(re.iter().all(|&x| x < 0.0));
    assert!(re.windows(2).all(|w| w[1] < w[0]));
    // Slope diverges at k → 0 like 1/(k ln²k).
    let slope = |i: usize| (re[i + 1] - re[i]) / (k[i + 1] - k[i]);
    assert!(slope(0).abs() > 1e3 * slope(50).abs());
    // Hard-disk limit f ≈ 1/(ln(ka/π) − iπ/2), evaluated independently.
    let (i, ka) = (30, k[30] * 2000.0);
    let l = (ka / std::f64::consts::PI).ln();
    let expect = l / (l * l + std::f64::consts::FRAC_PI_2.powi(2));
    assert!((re[i] - expect).abs() < 1e-3 * expect.abs());
    assert!(rows.iter().all(|r| r[col(&h, "potential_class")] == "hard_disk"));
}

#[test]
fn detuning_sweep_peaks_at_zero() {
    let d = TempDir::new().unwrap();
    let o = latscat(&["scatter", "--sweep", "detuning=-1e-3:1e-3:101", "--out", "."], d.path());
    assert!(o.status.success());
    let (h, rows) = table(&d.path().join("scatter.csv"));
    let a: Vec<f64> = rows.iter().map(|r| num(&r[col(&h, "abs_f")])).collect();
    let imax = a.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
    assert_eq!(num(&rows[imax][0]), 0.0);
}

#[test]
fn asymmetric_sweep_flags_two_poles() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("strong.cfg"), "scenario = asymmetric\nJ_bar = 1e-3\n").unwrap();
    std::fs::write(d.path().join("weak.cfg"), "scenario = asymmetric\nJ_bar = 1e-4\n").unwrap();
    for (cfg, expected) in [("strong.cfg", 2), ("weak.cfg", 0)] {
        let o = latscat(&["scatter", "--config", cfg, "--sweep", "theta_deg=0:90:901", "--out", &format!("{cfg}.out")], d.path());
        assert!(o.status.success());
        let (h, rows) = table(&d.path().join(format!("{cfg}.out")).join("scatter.csv"));
        let c = col(&h, "potential_class");
        let poles: Vec<&Vec<String>> = rows.iter().filter(|r| r[c] == "pole").collect();
        assert_eq!(poles.len(), expected, "{cfg}");
        for p in poles {
            assert_eq!(p[col(&h, "re_f")], "nan");
            assert_eq!(p[col(&h, "abs_f")], "inf");
        }
    }
}

#[test]
fn wavefield_outputs() {
    let d = TempDir::new().unwrap();
    let o = latscat(&["wavefield", "--out", "."], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = table(&d.path().join("wavefield.csv"));
    assert_eq!(rows.len(), 401 * 401);
    assert_eq!(rows.iter().filter(|r| r[col(&h, "flagged")] == "1").count(), 5);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(d.path().join("wavefield.json")).unwrap()).unwrap();
    let peak = json["ring"]["peak_k"].as_f64().unwrap();
    let bin = json["ring"]["bin_width"].as_f64().unwrap();
    assert!((peak - 5e-5).abs() <= bin);
    let (rh, rrows) = table(&d.path().join("ring_profile.csv"));
    assert_eq!(rh, vec!["k", "intensity"]);
    assert!(rrows.len() > 10);

    let o = latscat(&["wavefield", "--f-zero", "--out", "zero"], d.path());
    assert!(o.status.success());
    let (h, rows) = table(&d.path().join("zero/wavefield.csv"));
    let c = col(&h, "abs_psi_sq");
    let v: Vec<f64> = rows.iter().map(|r| num(&r[c])).collect();
    let (lo, hi) = v.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!((hi - lo) / hi < 1e-12);
}

#[test]
fn oracle_default_passes_and_small_lattice_fails() {
    let d = TempDir::new().unwrap();
    let o = latscat(&["oracle", "--out", "ok"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(d.path().join("ok/oracle_verdict.json")).unwrap()).unwrap();
    assert_eq!(v["all_pass"], true);

    std::fs::write(d.path().join("small.cfg"), "oracle_N_side = 51\n").unwrap();
    let o = latscat(&["oracle", "--config", "small.cfg", "--out", "small"], d.path());
    assert_eq!(o.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAIL finite_lattice "));
    let (h, rows) = table(&d.path().join("small/oracle_convergence.csv"));
    let n = col(&h, "N_side");
    assert!(rows.iter().any(|r| r[n] == "51") && rows.iter().any(|r| r[n] == "153"));

    std::fs::write(d.path().join("zero.cfg"), "strength = 0\n").unwrap();
    let o = latscat(&["oracle", "--config", "zero.cfg", "--out", "zero"], d.path());
    assert!(o.status.success());
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("bad.cfg"), "a = 2000\n\ng = xyz\n").unwrap();
    let o = latscat(&["scatter", "--config", "bad.cfg"], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:3:"));

    std::fs::write(d.path().join("occ.cfg"), "scenario = two-atom\noccupancy = single\n").unwrap();
    assert_eq!(latscat(&["scatter", "--config", "occ.cfg"], d.path()).status.code(), Some(1));
    assert_eq!(latscat(&["scatter", "--config", "missing.cfg"], d.path()).status.code(), Some(1));
    assert_eq!(latscat(&["scatter", "--out", "/proc/no/such/dir"], d.path()).status.code(), Some(3));
    assert_eq!(
        latscat(&["scatter", "--scenario", "exciton-vacancy", "--sweep", "theta=0:1:5"], d.path()).status.code(),
        Some(1)
    );
    // ka ≥ 0.3 is outside the long-wavelength domain.
    assert_eq!(
        latscat(&["scatter", "--scenario", "exciton-vacancy", "--sweep", "k=1e-5:2e-4:5"], d.path()).status.code(),
        Some(1)
    );
    // Bad flag value is rejected by the argument parser.
    assert_eq!(latscat(&["scatter", "--sweep", "k=1:0:5"], d.path()).status.code(), Some(1));
    assert_eq!(latscat(&["--help"], d.path()).status.code(), Some(0));
}

use std::path::Path;
use std::process::{Command, Output};

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir")).args(args).output().unwrap()
}

fn records(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn field<'a>(header: &'a csv::StringRecord, row: &'a csv::StringRecord, name: &str) -> &'a str {
    let i = header.iter().position(|h| h == name).unwrap();
    &row[i]
}

fn header(csv_text: &str) -> csv::StringRecord {
    csv::Reader::from_reader(csv_text.as_bytes()).headers().unwrap().clone()
}

#[test]
fn version_states_hbar_c() {
    let out = casimir(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("3.1615268e-26"));
}

#[test]
fn header_columns_in_order() {
    let out = casimir(&["point", "--method", "pfa", "--radius", "1", "--gap", "0.1", "--omega-sphere", "inf", "--omega-plane", "inf"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(
        first,
        "method,R_m,d_m,L_m,omega_s_per_m,omega_p_per_m,energy_J,energy_dimensionless,\
         ratio_to_PFA_PC,theta,error_estimate,l_max_used,m_max_used,status"
    );
}

#[test]
fn perfect_conductor_theta_row() {
    let out = casimir(&["point", "--method", "asympt", "--radius", "1e-3", "--gap", "1e-6", "--omega-sphere", "inf", "--omega-plane", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let (h, rows) = (header(&text), records(&text));
    assert_eq!(rows.len(), 1);
    let theta: f64 = field(&h, &rows[0], "theta").parse().unwrap();
    assert!((theta - (1.0 / 3.0 - 20.0 / std::f64::consts::PI.powi(2))).abs() < 1e-4);
    assert_eq!(field(&h, &rows[0], "omega_s_per_m"), "inf");
    assert_eq!(field(&h, &rows[0], "status"), "ok");
}

#[test]
fn transparent_sheet_energy_zero() {
    let out = casimir(&["point", "--method", "pfa", "--radius", "1e-3", "--gap", "1e-6", "--omega-sphere", "0", "--omega-plane", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let (h, rows) = (header(&text), records(&text));
    assert_eq!(field(&h, &rows[0], "energy_J").parse::<f64>().unwrap(), 0.0);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn flag_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    write(&cfg, "# exact run\nmethod = exact\nradius = 1\ngap = 0.8\nomega_sphere = 1\nomega_plane = 1\nl_max = 3\n");
    let out = casimir(&["point", "--config", cfg.to_str().unwrap(), "--lmax", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let (h, rows) = (header(&text), records(&text));
    assert_eq!(field(&h, &rows[0], "l_max_used"), "5");
}

#[test]
fn unknown_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    write(&cfg, "radius = 1\nwavelength = 3\n");
    let out = casimir(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("wavelength") && err.contains("line 2"), "{err}");
}

#[test]
fn malformed_value_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    write(&cfg, "radius = 1\n\n# tolerance\nrel_tol = -1\n");
    let out = casimir(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn partial_failure_has_distinct_exit_status() {
    // the exact row at d / R = 1e-5 needs l_max far beyond the cap
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = casimir(&[
        "sweep", "--method", "all", "--radius", "1", "--gap", "1e-5", "--omega-sphere", "inf", "--omega-plane", "inf",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let (h, rows) = (header(&text), records(&text));
    let methods: Vec<&str> = rows.iter().map(|r| field(&h, r, "method")).collect();
    assert_eq!(methods, ["exact", "pfa", "asympt"]);
    assert!(field(&h, &rows[0], "status").starts_with("error"));
    assert_eq!(field(&h, &rows[1], "status"), "ok");
    assert_eq!(field(&h, &rows[2], "status"), "ok");
}

#[test]
fn unwritable_output_is_fatal() {
    let out = casimir(&[
        "point", "--method", "pfa", "--radius", "1", "--gap", "0.1", "--omega-sphere", "1", "--omega-plane", "1",
        "--out", "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn point_rejects_ranges() {
    let out = casimir(&[
        "point", "--radius", "1", "--gap", "0.1", "--gap-end", "0.2", "--gap-count", "3", "--omega-sphere", "1",
        "--omega-plane", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_rows_follow_grid_order_and_si_consistency() {
    let out = casimir(&[
        "sweep", "--method", "pfa", "--radius", "1e-4", "--radius-end", "1e-3", "--radius-count", "2", "--gap", "1e-7",
        "--gap-end", "1e-5", "--gap-count", "3", "--omega-sphere", "6.75e5", "--omega-plane", "6.75e5", "--threads", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let (h, rows) = (header(&text), records(&text));
    assert_eq!(rows.len(), 6);
    let mut previous = (0.0, 0.0);
    for (i, row) in rows.iter().enumerate() {
        let r: f64 = field(&h, row, "R_m").parse().unwrap();
        let d: f64 = field(&h, row, "d_m").parse().unwrap();
        if i % 3 != 0 {
            assert_eq!(r, previous.0);
            assert!(d > previous.1);
        }
        previous = (r, d);
        let e: f64 = field(&h, row, "energy_J").parse().unwrap();
        let dimless: f64 = field(&h, row, "energy_dimensionless").parse().unwrap();
        let recomputed = e * d * d / (3.1615268e-26 * r);
        assert!((recomputed / dimless - 1.0).abs() < 1e-12);
        let ratio: f64 = field(&h, row, "ratio_to_PFA_PC").parse().unwrap();
        assert!(ratio > 0.0 && ratio < 1.0);
    }
}

#[test]
fn figure_three_has_interior_theta_minimum() {
    let out = casimir(&["figure", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let (h, rows) = (header(&text), records(&text));
    let of = |method: &str, col: &str| -> Vec<f64> {
        rows.iter()
            .filter(|r| field(&h, r, "method") == method)
            .map(|r| field(&h, r, col).parse().unwrap())
            .collect()
    };
    let thetas = of("asympt", "theta");
    let (imin, _) = thetas.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!(imin > 0 && imin + 1 < thetas.len());
    let leading = of("pfa", "energy_J");
    assert_eq!(leading.len(), thetas.len());
    assert!(leading.windows(2).all(|w| w[1].abs() < w[0].abs()));
}

#[test]
fn figure_rejects_geometry_flags() {
    let out = casimir(&["figure", "1", "--radius", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

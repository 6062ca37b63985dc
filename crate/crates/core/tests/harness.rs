use std::path::{Path, PathBuf};

use palindg::dg::DgMesh;
use palindg::harness::{self, RunConfig, Termination};
use palindg::reference::{smooth_pulse_init, solve_riemann_isothermal};
use palindg::scalar::Complex64;
use palindg::Error;

fn shipped(name: &str, out: &Path, overrides: &[&str]) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../configs/{name}.toml"));
    let mut cfg = RunConfig::load(path).unwrap();
    cfg.output.dir = Some(out.to_path_buf());
    for o in overrides {
        cfg.apply_override(o).unwrap();
    }
    cfg
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

fn profile(report: &harness::RunReport) -> PathBuf {
    report.outputs.iter().find(|p| p.to_string_lossy().ends_with("_profile.csv")).unwrap().clone()
}

#[test]
fn zero_final_time_returns_the_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped("smooth_beta5", dir.path(), &["run.t_max=0.0", "mesh.n_cells=12"]);
    let report = harness::run(&cfg).unwrap();
    assert_eq!(report.steps, 0);
    let (header, rows) = read_csv(&profile(&report));
    let x = column(&header, &rows, "x");
    let rho = column(&header, &rows, "rho");
    let u = column(&header, &rows, "u");
    for i in 0..x.len() {
        assert!((rho[i] - smooth_pulse_init(x[i])[0]).abs() <= 1e-15);
        assert_eq!(u[i], 0.0);
    }
}

/// Equal left and right states: the exact solution is that constant, and
/// the run must reproduce it at every node.
#[test]
fn constant_riemann_data_does_not_drift() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped(
        "riemann_beta3",
        dir.path(),
        &["run.left=[1.3, 0.2]", "run.right=[1.3, 0.2]", "mesh.n_cells=20", "run.t_max=0.2"],
    );
    let report = harness::riemann_compare(&cfg).unwrap();
    assert_eq!(report.termination, Termination::Completed);
    let overlay = report.outputs.iter().find(|p| p.to_string_lossy().ends_with("_overlay.csv")).unwrap();
    let (header, rows) = read_csv(overlay);
    for name in ["rho", "u"] {
        let num = column(&header, &rows, &format!("{name}_re"));
        let im = column(&header, &rows, &format!("{name}_im"));
        let exact = column(&header, &rows, &format!("{name}_exact"));
        for i in 0..num.len() {
            assert!((num[i] - exact[i]).abs() <= 1e-13, "{name} at row {i}");
            assert!(im[i].abs() <= 1e-13);
        }
    }
}

#[test]
fn identical_configs_write_identical_files() {
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let cfg = shipped(
                "smooth_beta5",
                dir.path(),
                &["scheme.name=tj4_complex", "mesh.n_cells=24", "run.t_max=0.1", "output.history=true"],
            );
            let report = harness::run(&cfg).unwrap();
            report.outputs.iter().flat_map(|p| std::fs::read(p).unwrap()).collect()
        })
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn complex_profiles_split_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped("smooth_beta5", dir.path(), &["scheme.name=suzuki4", "mesh.n_cells=8", "run.t_max=0.05"]);
    let (header, _) = read_csv(&profile(&harness::run(&cfg).unwrap()));
    assert_eq!(header, ["x", "rho", "u"]);
    let cfg = shipped("smooth_beta5", dir.path(), &["scheme.name=tj4_complex", "mesh.n_cells=8", "run.t_max=0.05"]);
    let (header, _) = read_csv(&profile(&harness::run(&cfg).unwrap()));
    assert_eq!(header, ["x", "rho_re", "rho_im", "u_re", "u_im"]);
}

/// A final step chosen so that one collision stage lands on the pole must
/// be refused before the run starts, naming `t_max`.
#[test]
fn final_step_on_the_pole_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = shipped("viscous_beta10", dir.path(), &[]);
    let mesh = DgMesh::new(cfg.mesh.a, cfg.mesh.b, cfg.mesh.n_cells, cfg.mesh.degree).unwrap();
    let dt = mesh.cfl_dt(cfg.scheme.beta, cfg.model.lambda);
    let gamma = palindg::palindrome::SchemeKind::KahanLi6.scheme().gammas[2].re;
    // Each collision of a substep takes half of `gamma * dt_last`.
    let last = -4.0 * cfg.relaxation.tau / gamma;
    assert!(last > 0.0 && last < dt);
    cfg.run.t_max = 3.0 * dt + last;
    match harness::run(&cfg) {
        Err(Error::Config(msg)) => assert!(msg.contains("t_max"), "{msg}"),
        other => panic!("expected a configuration error, got {other:?}"),
    }
}

/// First-order Rusanov finite volumes for isothermal gas dynamics.
fn rusanov(left: [f64; 2], right: [f64; 2], c: f64, n: usize, t_max: f64) -> Vec<[f64; 2]> {
    let h = 2.0 / n as f64;
    let mut w: Vec<[f64; 2]> = (0..n)
        .map(|i| if -1.0 + (i as f64 + 0.5) * h < 0.0 { left } else { right })
        .collect();
    let flux = |w: [f64; 2]| [w[1], w[1] * w[1] / w[0] + c * c * w[0]];
    let speed = |w: [f64; 2]| (w[1] / w[0]).abs() + c;
    let mut t = 0.0;
    while t < t_max {
        let smax = w.iter().map(|&s| speed(s)).fold(0.0, f64::max);
        let dt = (0.45 * h / smax).min(t_max - t);
        let mut next = w.clone();
        for i in 0..n {
            let wl = if i == 0 { w[0] } else { w[i - 1] };
            let wr = if i == n - 1 { w[n - 1] } else { w[i + 1] };
            let numerical = |a: [f64; 2], b: [f64; 2]| {
                let s = speed(a).max(speed(b));
                let (fa, fb) = (flux(a), flux(b));
                [0.5 * (fa[0] + fb[0]) - 0.5 * s * (b[0] - a[0]), 0.5 * (fa[1] + fb[1]) - 0.5 * s * (b[1] - a[1])]
            };
            let (fl, fr) = (numerical(wl, w[i]), numerical(w[i], wr));
            for k in 0..2 {
                next[i][k] = w[i][k] - dt / h * (fr[k] - fl[k]);
            }
        }
        w = next;
        t += dt;
    }
    w
}

/// The exact star state against a fine first-order scheme, sampled in the
/// middle of the star region.
#[test]
fn exact_star_state_matches_finite_volumes() {
    let c = 0.6;
    let t = 0.4;
    for (left, right) in [([2.0, 0.0], [1.0, 0.0]), ([1.0, 0.5], [1.0, -0.5]), ([1.0, -0.4], [1.5, 0.3])] {
        let exact = solve_riemann_isothermal(left[0], left[1] / left[0], right[0], right[1] / right[0], c).unwrap();
        let n = 4000;
        let fv = rusanov(left, right, c, n, t);
        let x = exact.u_star * t;
        let cell = ((x + 1.0) / 2.0 * n as f64) as usize;
        let rho = fv[cell][0];
        let u = fv[cell][1] / rho;
        assert!((rho - exact.rho_star).abs() <= 5e-3 * exact.rho_star, "{left:?} {right:?}: {rho} vs {}", exact.rho_star);
        assert!((u - exact.u_star).abs() <= 5e-3, "{left:?} {right:?}: {u} vs {}", exact.u_star);
    }
}

#[test]
fn complex_run_on_real_data_matches_real_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped("smooth_beta5", dir.path(), &["scheme.name=kahanli6", "mesh.n_cells=16", "run.t_max=0.1"]);
    let real = harness::simulate::<f64>(&cfg).unwrap();
    let cplx = harness::simulate::<Complex64>(&cfg).unwrap();
    assert_eq!(cplx.field.real_part(), real.field);
    assert!(cplx.field.as_slice().iter().all(|v| v.im == 0.0));
}

#[test]
fn convergence_table_schema_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped(
        "smooth_beta5",
        dir.path(),
        &["scheme.name=m2", "study.n_cells=[10, 20, 40]", "study.reference_refinement=2", "run.t_max=0.1"],
    );
    let report = harness::converge(&cfg).unwrap();
    assert_eq!(report.convergence.len(), 3);
    let path = report.outputs.iter().find(|p| p.to_string_lossy().ends_with("_convergence.csv")).unwrap();
    let (header, rows) = read_csv(path);
    assert_eq!(header, ["n_cells", "dt", "error", "slope"]);
    let slopes = column(&header, &rows[1..], "slope");
    assert!(slopes.iter().all(|s| *s > 1.5), "{slopes:?}");
}

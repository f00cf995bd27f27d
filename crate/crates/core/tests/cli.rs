use std::path::Path;
use std::process::{Command, Output};

const GRID: &str = "[grid]\ntype = xt.grid.gridprovider.cube\ndim = 2\n";

fn pdekit(dir: &Path, ini: &str, args: &[&str]) -> Output {
    let config = dir.join("run.ini");
    std::fs::write(&config, ini).unwrap();
    Command::new(env!("CARGO_BIN_EXE_pdekit"))
        .args(args)
        .arg("--config")
        .arg(&config)
        .arg("--output-dir")
        .arg(dir)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, name: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(name))
        .unwrap_or_else(|| panic!("no '{name}' in\n{text}"))
        .trim()
}

#[test]
fn default_cube_has_64_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = pdekit(dir.path(), GRID, &["grid-info"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "dimension:"), "2");
    assert_eq!(field(&text, "  cells:"), "64");
    assert_eq!(field(&text, "  vertices:"), "81");
}

#[test]
fn periodic_torus_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let ini = format!("{GRID}num_elements = [4 4]\nperiodic = [1 1]\n");
    let out = pdekit(dir.path(), &ini, &["grid-info"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "  vertices (periodic):"), "16");
    assert_eq!(field(&text, "  faces (periodic):"), "32");
}

#[test]
fn usage_errors_exit_1() {
    let bin = env!("CARGO_BIN_EXE_pdekit");
    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).arg("project").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = pdekit(dir.path(), "[grid]\ndim = 2\n", &["grid-info"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.type"));
    let out = pdekit(dir.path(), GRID, &["grid-info", "--set", "grid.num_elements=[0 4]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pdekit(dir.path(), GRID, &["project"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("function.type"));
    let out = pdekit(dir.path(), "this is not ini\n", &["grid-info"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let ini = format!(
        "{GRID}num_elements = [4 4]\n[function]\ntype = xt.functions.expression\norder = 1\n\
         expression = 1/(x[0]-x[0])\n[space]\norder = 0\n"
    );
    let out = pdekit(dir.path(), &ini, &["project"]);
    assert_eq!(out.status.code(), Some(3));
    let out = pdekit(
        dir.path(),
        &ini,
        &["solve-mass", "--set", "function.expression=1", "--set", "solver.type=cg.unknown"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn serial_and_parallel_projections_agree() {
    let dir = tempfile::tempdir().unwrap();
    let ini = format!(
        "{GRID}[function]\ntype = xt.functions.expression\norder = 3\nexpression = sin(pi*x[0])\n[space]\norder = 1\n"
    );
    let serial = pdekit(dir.path(), &ini, &["project"]);
    let parallel = pdekit(dir.path(), &ini, &["project", "--parallel"]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(parallel.status.code(), Some(0));
    let e1: f64 = field(&stdout(&serial), "l2 error:").parse().unwrap();
    let e2: f64 = field(&stdout(&parallel), "l2 error:").parse().unwrap();
    assert!((e1 - e2).abs() <= 1e-13, "{e1} vs {e2}");
    assert!(e1 > 1e-3 && e1 < 1e-2);
    let csv = std::fs::read_to_string(dir.path().join("timings.csv")).unwrap();
    assert!(csv.starts_with("threads,ranks,"));
}

#[test]
fn project_writes_visualization() {
    let dir = tempfile::tempdir().unwrap();
    let ini = format!(
        "{GRID}num_elements = [2 2]\n[function]\ntype = xt.functions.constant\nvalue = 1\n[space]\norder = 0\n\
         [visualize]\nenabled = 1\n"
    );
    let out = pdekit(dir.path(), &ini, &["project"]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["source.vtk", "projection.vtk", "difference.vtk"] {
        let vtk = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(vtk.starts_with("# vtk DataFile Version"), "{name}");
        assert!(vtk.contains("CELL_DATA 4"), "{name}");
    }
}

#[test]
fn solve_mass_reports_solution() {
    let dir = tempfile::tempdir().unwrap();
    let ini = format!(
        "{GRID}num_elements = [4 4]\n[function]\ntype = xt.functions.constant\nvalue = 2.5\n[space]\norder = 1\n\
         [solver]\ntype = bicgstab.diagonal\n"
    );
    let out = pdekit(dir.path(), &ini, &["solve-mass"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(field(&text, "dofs:"), "64");
    assert_eq!(field(&text, "solver:"), "bicgstab.diagonal");
    let residual: f64 = field(&text, "relative residual:").parse().unwrap();
    assert!(residual <= 1e-10);
    let max: f64 = field(&text, "solution max:").parse().unwrap();
    assert!((max - 2.5).abs() <= 1e-10);
}

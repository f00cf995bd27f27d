//! The `pdekit` command line frontend.
//!
//! A single ini file drives every command:
//!
//! ```ini
//! [grid]
//! type = xt.grid.gridprovider.cube
//! dim = 2
//! lower_left = [0 0]
//! upper_right = [1 1]
//! num_elements = [8 8]
//! # optional, one 0/1 flag per direction
//! periodic = [0 0]
//!
//! [function]
//! type = xt.functions.expression
//! order = 3
//! expression = sin(pi*x[0])
//!
//! [space]
//! order = 1
//!
//! [solver]
//! # optional
//! type = lu.partialpiv
//!
//! [visualize]
//! # optional
//! enabled = 1
//! ```
//!
//! Exit codes: 0 success, 1 usage, 2 configuration, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::common::{ConfigTree, Timings};
use crate::error::{Error, Result};
use crate::functions::{
    assemble_local_systems, difference, discrete_fn, l2_norm, solve_local_systems, visualize, DgSpace, FunctionRef,
    FunctionsFactory,
};
use crate::grid::{GridProviderFactory, GridView};
use crate::la::{CsrMatrix, DenseVector, Matrix, Solver, SparsityPattern};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pdekit", version, about = "Grids, localizable functions and linear solvers driven by ini files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print entity counts of the configured grid.
    GridInfo(Invocation),
    /// L2-project the configured function and report the error.
    Project(Invocation),
    /// Assemble the global DG mass system and solve it with a sparse solver.
    SolveMass(Invocation),
}

#[derive(Debug, Clone, Args)]
pub struct Invocation {
    /// The ini file to read.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for VTK and CSV output.
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
    /// Walk the grid in parallel.
    #[arg(long)]
    pub parallel: bool,
    /// Override a config entry; repeatable, applied in order after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

/// Exit code for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Solver(_)
        | Error::Projection(_)
        | Error::Evaluation(_)
        | Error::Index { .. }
        | Error::NotInPattern { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. The report goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::GridInfo(inv) => grid_info(&load_config(inv)?, out),
        Command::Project(inv) => project(&load_config(inv)?, inv, out),
        Command::SolveMass(inv) => solve_mass(&load_config(inv)?, inv, out),
    }
}

/// Reads the ini file and applies the overrides.
pub fn load_config(inv: &Invocation) -> Result<ConfigTree> {
    let text = fs::read_to_string(&inv.config)
        .map_err(|e| Error::Config(format!("cannot read '{}': {e}", inv.config.display())))?;
    let mut cfg = ConfigTree::from_ini(&text)?;
    for assignment in &inv.overrides {
        cfg.apply_override(assignment)?;
    }
    Ok(cfg)
}

fn prefixed<T>(result: Result<T>, prefix: &str) -> Result<T> {
    result.map_err(|e| match e {
        Error::MissingKey(k) => Error::MissingKey(format!("{prefix}.{k}")),
        Error::Value { key, source } => Error::Value {
            key: format!("{prefix}.{key}"),
            source,
        },
        other => other,
    })
}

struct Setup {
    dim: usize,
    provider: crate::grid::GridProvider,
    periodic: Option<Vec<bool>>,
}

impl Setup {
    fn read(cfg: &ConfigTree) -> Result<Self> {
        let user = cfg.sub("grid");
        let ty = prefixed(user.get_str("type"), "grid")?;
        // unspecified keys fall back to the provider's defaults
        let mut grid = prefixed(GridProviderFactory::default_config(ty), "grid")?;
        grid.merge(&user)?;
        let dim = prefixed(grid.get_count("dim"), "grid")?;
        let provider = prefixed(GridProviderFactory::create(ty, &grid, dim), "grid")?;
        let periodic = if grid.has_key("periodic") {
            Some(prefixed(grid.get_flag_vector("periodic", dim), "grid")?)
        } else {
            None
        };
        Ok(Self { dim, provider, periodic })
    }

    /// The leaf view, periodic where requested.
    fn view(&self) -> Result<GridView> {
        let view = self.provider.leaf_view();
        match &self.periodic {
            Some(flags) if flags.iter().any(|p| *p) => view.periodic(flags),
            _ => Ok(view),
        }
    }

    fn function(&self, cfg: &ConfigTree) -> Result<FunctionRef> {
        let sub = cfg.sub("function");
        let ty = prefixed(sub.get_str("type"), "function")?;
        prefixed(FunctionsFactory::create(ty, &sub, self.dim), "function")
    }

    fn space(&self, cfg: &ConfigTree) -> Result<DgSpace> {
        let order = cfg.get_count("space.order")?;
        DgSpace::new(self.view()?, order)
    }
}

fn grid_info(cfg: &ConfigTree, out: &mut dyn Write) -> Result<()> {
    let setup = Setup::read(cfg)?;
    let dim = setup.dim;
    writeln!(out, "dimension: {dim}")?;
    for level in 0..=setup.provider.max_level() {
        let view = setup.provider.level_view(level)?;
        writeln!(out, "level {level}")?;
        writeln!(out, "  cells: {}", view.size(0)?)?;
        writeln!(out, "  faces: {}", view.size(1)?)?;
        writeln!(out, "  vertices: {}", view.size(dim)?)?;
    }
    if let Some(flags) = &setup.periodic {
        let view = setup.provider.leaf_view().periodic(flags)?;
        let list: Vec<&str> = flags.iter().map(|p| if *p { "1" } else { "0" }).collect();
        writeln!(out, "periodic: [{}]", list.join(" "))?;
        writeln!(out, "  cells (periodic): {}", view.size(0)?)?;
        writeln!(out, "  faces (periodic): {}", view.size(1)?)?;
        writeln!(out, "  vertices (periodic): {}", view.size(dim)?)?;
    }
    Ok(())
}

fn threads(parallel: bool) -> usize {
    if parallel {
        rayon::current_num_threads()
    } else {
        1
    }
}

fn write_timings(timings: &Timings, dir: &Path, parallel: bool) -> Result<()> {
    let mut file = fs::File::create(dir.join("timings.csv"))?;
    timings.write_csv(&mut file, threads(parallel))?;
    Ok(())
}

fn project(cfg: &ConfigTree, inv: &Invocation, out: &mut dyn Write) -> Result<()> {
    let setup = Setup::read(cfg)?;
    let f = setup.function(cfg)?;
    let space = setup.space(cfg)?;
    let solver_type = if cfg.has_key("solver.type") {
        Some(cfg.get_str("solver.type")?)
    } else {
        None
    };
    let visualize_enabled = cfg.get_int_or("visualize.enabled", 0)? != 0;
    fs::create_dir_all(&inv.output_dir)?;

    let timings = Timings::new();
    timings.start("project")?;
    timings.start("project.assemble")?;
    let systems = assemble_local_systems(f.as_ref(), &space, inv.parallel)?;
    timings.stop("project.assemble")?;
    timings.start("project.solve")?;
    let dofs = solve_local_systems(&space, &systems, solver_type)?;
    timings.stop("project.solve")?;
    timings.stop("project")?;

    let fh: FunctionRef = Arc::new(discrete_fn(&space, dofs)?.with_name("projection"));
    let error_fn = difference(f.clone(), fh.clone())?;
    let degree = 2 * space.order().max(f.order()) + 2;
    let error = l2_norm(error_fn.as_ref(), space.view(), degree, inv.parallel)?;

    writeln!(out, "function: {}", f.name())?;
    writeln!(out, "cells: {}", space.view().num_cells())?;
    writeln!(out, "order: {}", space.order())?;
    writeln!(out, "dofs: {}", space.num_dofs())?;
    writeln!(out, "l2 error: {error:e}")?;

    if visualize_enabled {
        let view = space.view();
        visualize(f.as_ref(), view, "source", inv.output_dir.join("source.vtk"))?;
        visualize(fh.as_ref(), view, "projection", inv.output_dir.join("projection.vtk"))?;
        visualize(error_fn.as_ref(), view, "difference", inv.output_dir.join("difference.vtk"))?;
        writeln!(out, "wrote: source.vtk projection.vtk difference.vtk")?;
    }
    write_timings(&timings, &inv.output_dir, inv.parallel)?;
    Ok(())
}

fn solve_mass(cfg: &ConfigTree, inv: &Invocation, out: &mut dyn Write) -> Result<()> {
    let setup = Setup::read(cfg)?;
    let f = setup.function(cfg)?;
    let space = setup.space(cfg)?;
    let mut options = cfg.sub("solver");
    if !options.has_key("type") {
        options.set("type", &Solver::<CsrMatrix>::types()[0])?;
    }

    let systems = assemble_local_systems(f.as_ref(), &space, inv.parallel)?;
    let n = space.basis_size();
    let mut pattern = SparsityPattern::new(space.num_dofs(), space.num_dofs());
    for system in &systems {
        for i in 0..n {
            for j in 0..n {
                pattern.insert(space.global_index(system.cell, i), space.global_index(system.cell, j))?;
            }
        }
    }
    let mut matrix = CsrMatrix::from_pattern(pattern);
    let mut rhs = DenseVector::zeros(space.num_dofs());
    for system in &systems {
        for i in 0..n {
            let gi = space.global_index(system.cell, i);
            rhs.set_entry(gi, system.rhs[i])?;
            for j in 0..n {
                matrix.add_to_entry(gi, space.global_index(system.cell, j), system.matrix.get_entry(i, j)?)?;
            }
        }
    }

    let mut solution = DenseVector::zeros(space.num_dofs());
    let info = Solver::new(&matrix).apply_options(&rhs, &mut solution, &options)?;
    let (min, max) = solution
        .as_slice()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    writeln!(out, "dofs: {}", space.num_dofs())?;
    writeln!(out, "nonzeros: {}", matrix.nnz())?;
    writeln!(out, "solver: {}", info.solver_type)?;
    writeln!(out, "iterations: {}", info.iterations)?;
    writeln!(out, "relative residual: {:e}", info.relative_residual)?;
    writeln!(out, "solution min: {min}")?;
    writeln!(out, "solution max: {max}")?;
    Ok(())
}

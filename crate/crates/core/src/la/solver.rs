//! Runtime-selectable linear solvers configured by option trees.
//!
//! Every solve runs, in order: the inf/nan check on matrix and right hand
//! side, the symmetry pre-check (if configured), the solve itself, the
//! inf/nan check on the solution and the post-check
//! `|A x - b|_inf <= tol * (1 + |b|_inf)`. Any violated check fails the
//! solve with a [`SolverFailure`].

use crate::common::ConfigTree;
use crate::error::{Error, Result, SolverFailure, SolverFailureKind};
use crate::la::matrix::{CsrMatrix, DenseMatrix, Matrix};
use crate::la::vector::DenseVector;

/// Dense solver types, in descending priority.
pub const DENSE_SOLVER_TYPES: [&str; 3] = ["lu.partialpiv", "qr.householder", "ldlt"];

/// Sparse solver types, in descending priority.
pub const SPARSE_SOLVER_TYPES: [&str; 4] = ["bicgstab.diagonal", "bicgstab.identity", "cg.diagonal", "cg.identity"];

fn failure(kind: SolverFailureKind, message: impl Into<String>) -> Error {
    Error::Solver(SolverFailure::new(kind, message))
}

fn unknown_type(ty: &str, available: &[&str]) -> Error {
    failure(
        SolverFailureKind::UnknownType,
        format!("unknown solver type '{ty}', available: {}", available.join(", ")),
    )
}

/// Default options of a solver type.
pub fn solver_options(ty: &str) -> Result<ConfigTree> {
    let mut pairs = vec![
        ("type", ty),
        ("post_check_solves_system", "1e-5"),
        ("check_for_inf_nan", "1"),
    ];
    if ty == "ldlt" {
        pairs.push(("pre_check_symmetry", "1e-8"));
    } else if SPARSE_SOLVER_TYPES.contains(&ty) {
        pairs.push(("max_iter", "1000"));
        pairs.push(("precision", "1e-14"));
    } else if !DENSE_SOLVER_TYPES.contains(&ty) {
        let all: Vec<&str> = DENSE_SOLVER_TYPES.iter().chain(&SPARSE_SOLVER_TYPES).copied().collect();
        return Err(unknown_type(ty, &all));
    }
    ConfigTree::from_pairs(pairs)
}

/// Diagnostics of a successful solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveInfo {
    pub solver_type: String,
    /// Iterations of an iterative method; zero for direct methods.
    pub iterations: usize,
    /// The residual the method judged convergence by (relative 2-norm).
    pub residual_estimate: f64,
    /// `|A x - b|_2 / |b|_2` recomputed after the solve, zero for `b = 0`.
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Copy)]
struct Settings {
    post_check: f64,
    check_inf_nan: bool,
    symmetry: f64,
    max_iter: usize,
    precision: f64,
}

impl Settings {
    fn read(opts: &ConfigTree) -> Result<Self> {
        Ok(Self {
            post_check: opts.get_real_or("post_check_solves_system", 0.0)?,
            check_inf_nan: opts.get_int_or("check_for_inf_nan", 0)? != 0,
            symmetry: opts.get_real_or("pre_check_symmetry", 0.0)?,
            max_iter: opts.get_count_or("max_iter", 1000)?,
            precision: opts.get_real_or("precision", 1e-14)?,
        })
    }
}

/// Matrices that can be handed to a [`Solver`].
pub trait SolverMatrix: Matrix {
    fn solver_types() -> &'static [&'static str];

    #[doc(hidden)]
    fn run(&self, ty: &str, settings: &SolverSettings, rhs: &[f64]) -> Result<(Vec<f64>, usize, Option<f64>)>;
}

/// Iteration controls passed to the solve kernels.
#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub max_iter: usize,
    pub precision: f64,
}

/// Solves linear systems with a fixed matrix.
pub struct Solver<'a, M> {
    matrix: &'a M,
}

impl<'a, M: SolverMatrix> Solver<'a, M> {
    pub fn new(matrix: &'a M) -> Self {
        Self { matrix }
    }

    /// Available types for this matrix kind, in descending priority.
    pub fn types() -> Vec<String> {
        M::solver_types().iter().map(|s| s.to_string()).collect()
    }

    pub fn options(ty: &str) -> Result<ConfigTree> {
        if !M::solver_types().contains(&ty) {
            return Err(unknown_type(ty, M::solver_types()));
        }
        solver_options(ty)
    }

    /// Solves with the highest-priority type.
    pub fn apply(&self, rhs: &DenseVector, solution: &mut DenseVector) -> Result<SolveInfo> {
        self.apply_type(rhs, solution, M::solver_types()[0])
    }

    pub fn apply_type(&self, rhs: &DenseVector, solution: &mut DenseVector, ty: &str) -> Result<SolveInfo> {
        self.apply_options(rhs, solution, &Self::options(ty)?)
    }

    /// Solves with `options`; missing keys take the type's defaults.
    pub fn apply_options(
        &self,
        rhs: &DenseVector,
        solution: &mut DenseVector,
        options: &ConfigTree,
    ) -> Result<SolveInfo> {
        let ty = options.get_str("type").map_err(|_| {
            failure(SolverFailureKind::UnknownType, "solver options carry no 'type'")
        })?;
        let mut effective = Self::options(ty)?;
        effective.merge(options)?;
        let settings = Settings::read(&effective)?;
        let a = self.matrix;

        if a.rows() != a.cols() {
            return Err(failure(
                SolverFailureKind::ShapeMismatch,
                format!("matrix is {}x{}, not square", a.rows(), a.cols()),
            ));
        }
        if rhs.size() != a.rows() {
            return Err(failure(
                SolverFailureKind::ShapeMismatch,
                format!("rhs has size {} but the matrix has {} rows", rhs.size(), a.rows()),
            ));
        }
        if settings.check_inf_nan {
            if a.has_inf_or_nan() {
                return Err(failure(SolverFailureKind::InfOrNan, "matrix contains inf or nan"));
            }
            if rhs.has_inf_or_nan() {
                return Err(failure(SolverFailureKind::InfOrNan, "rhs contains inf or nan"));
            }
        }
        if settings.symmetry > 0.0 {
            let asym = asymmetry(a);
            let bound = settings.symmetry * (1.0 + a.max_abs());
            if !(asym <= bound) {
                return Err(failure(
                    SolverFailureKind::PreCheckFailed,
                    format!("matrix is not symmetric: max |a_ij - a_ji| = {asym:e} > {bound:e}"),
                ));
            }
        }

        let kernel_settings = SolverSettings {
            max_iter: settings.max_iter,
            precision: settings.precision,
        };
        let (x, iterations, estimate) = a.run(ty, &kernel_settings, rhs.as_slice())?;
        let x = DenseVector::from_vec(x);
        if settings.check_inf_nan && x.has_inf_or_nan() {
            return Err(failure(SolverFailureKind::InfOrNan, "solution contains inf or nan"));
        }
        let mut residual = a.mv(&x)?;
        residual.axpy_slice(-1.0, rhs.as_slice());
        if settings.post_check > 0.0 {
            let bound = settings.post_check * (1.0 + rhs.sup_norm());
            let res = residual.sup_norm();
            if !(res <= bound) {
                return Err(failure(
                    SolverFailureKind::PostCheckFailed,
                    format!("|Ax - b|_inf = {res:e} exceeds {bound:e}"),
                ));
            }
        }
        let b_norm = rhs.l2_norm();
        let relative_residual = if b_norm > 0.0 {
            residual.l2_norm() / b_norm
        } else {
            residual.l2_norm()
        };
        *solution = x;
        Ok(SolveInfo {
            solver_type: ty.to_string(),
            iterations,
            residual_estimate: estimate.unwrap_or(relative_residual),
            relative_residual,
        })
    }
}

impl DenseVector {
    fn axpy_slice(&mut self, alpha: f64, other: &[f64]) {
        for (x, y) in self.as_mut_slice().iter_mut().zip(other) {
            *x += alpha * y;
        }
    }
}

fn asymmetry<M: Matrix>(a: &M) -> f64 {
    let pattern = a.pattern();
    let mut worst: f64 = 0.0;
    for i in 0..pattern.num_rows() {
        for &j in pattern.row(i) {
            let aij = a.get_entry(i, j).unwrap_or(f64::NAN);
            let aji = a.get_entry(j, i).unwrap_or(f64::NAN);
            let d = (aij - aji).abs();
            if d.is_nan() {
                return f64::INFINITY;
            }
            worst = worst.max(d);
        }
    }
    worst
}

fn singular_threshold(n: usize, max_abs: f64) -> f64 {
    n as f64 * f64::EPSILON * max_abs
}

fn lu_partial_pivot(n: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let tol = singular_threshold(n, a.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, a[i * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > tol) {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("matrix is singular: pivot {pivot:e} in column {k}"),
            ));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        for i in k + 1..n {
            let l = a[i * n + k] / a[k * n + k];
            a[i * n + k] = l;
            for j in k + 1..n {
                a[i * n + j] -= l * a[k * n + j];
            }
            b[i] -= l * b[k];
        }
    }
    back_substitute(n, &a, b)
}

fn back_substitute(n: usize, upper: &[f64], mut b: Vec<f64>) -> Result<Vec<f64>> {
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| upper[i * n + j] * b[j]).sum();
        b[i] = (b[i] - s) / upper[i * n + i];
    }
    Ok(b)
}

fn qr_householder(n: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let tol = singular_threshold(n, a.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    for k in 0..n {
        let norm = (k..n).map(|i| a[i * n + k].powi(2)).sum::<f64>().sqrt();
        if !(norm > tol) {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("matrix is rank deficient in column {k}"),
            ));
        }
        let alpha = if a[k * n + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| a[i * n + k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for j in k..n {
                let s: f64 = (k..n).map(|i| v[i - k] * a[i * n + j]).sum::<f64>() * 2.0 / vnorm2;
                for i in k..n {
                    a[i * n + j] -= s * v[i - k];
                }
            }
            let s: f64 = (k..n).map(|i| v[i - k] * b[i]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..n {
                b[i] -= s * v[i - k];
            }
        }
        if !(a[k * n + k].abs() > tol) {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("matrix is rank deficient in column {k}"),
            ));
        }
    }
    back_substitute(n, &a, b)
}

/// `A = L D L^T` without pivoting.
fn ldlt(n: usize, a: &[f64], mut b: Vec<f64>) -> Result<Vec<f64>> {
    let tol = singular_threshold(n, a.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    let mut l = vec![0.0f64; n * n];
    let mut d = vec![0.0; n];
    for j in 0..n {
        let dj = a[j * n + j] - (0..j).map(|k| l[j * n + k].powi(2) * d[k]).sum::<f64>();
        if !(dj.abs() > tol) {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("zero pivot {dj:e} in LDL^T factorization at {j}"),
            ));
        }
        d[j] = dj;
        l[j * n + j] = 1.0;
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k] * d[k]).sum();
            l[i * n + j] = (a[i * n + j] - s) / dj;
        }
    }
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * b[k]).sum();
        b[i] -= s;
    }
    for i in 0..n {
        b[i] /= d[i];
    }
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * b[k]).sum();
        b[i] -= s;
    }
    Ok(b)
}

impl SolverMatrix for DenseMatrix {
    fn solver_types() -> &'static [&'static str] {
        &DENSE_SOLVER_TYPES
    }

    fn run(&self, ty: &str, _: &SolverSettings, rhs: &[f64]) -> Result<(Vec<f64>, usize, Option<f64>)> {
        let n = self.rows();
        let a = self.values().to_vec();
        let b = rhs.to_vec();
        let x = match ty {
            "lu.partialpiv" => lu_partial_pivot(n, a, b)?,
            "qr.householder" => qr_householder(n, a, b)?,
            "ldlt" => ldlt(n, &a, b)?,
            other => return Err(unknown_type(other, &DENSE_SOLVER_TYPES)),
        };
        Ok((x, 0, None))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

enum Preconditioner {
    Identity,
    Jacobi(Vec<f64>),
}

impl Preconditioner {
    fn for_type(matrix: &CsrMatrix, suffix: &str) -> Result<Self> {
        match suffix {
            "identity" => Ok(Preconditioner::Identity),
            "diagonal" => {
                let inv = (0..matrix.rows())
                    .map(|i| {
                        let d = matrix.get_entry(i, i)?;
                        if d == 0.0 || !d.is_finite() {
                            Err(failure(
                                SolverFailureKind::DidNotConverge,
                                format!("diagonal preconditioner: a_{i}{i} = {d}"),
                            ))
                        } else {
                            Ok(1.0 / d)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Preconditioner::Jacobi(inv))
            }
            other => Err(failure(
                SolverFailureKind::UnknownType,
                format!("unknown preconditioner '{other}'"),
            )),
        }
    }

    fn apply(&self, r: &[f64], out: &mut [f64]) {
        match self {
            Preconditioner::Identity => out.copy_from_slice(r),
            Preconditioner::Jacobi(inv) => {
                for ((o, x), d) in out.iter_mut().zip(r).zip(inv) {
                    *o = x * d;
                }
            }
        }
    }
}

fn csr_mv(a: &CsrMatrix, x: &[f64], y: &mut [f64]) {
    for (i, yi) in y.iter_mut().enumerate() {
        let (cols, vals) = a.row(i);
        *yi = cols.iter().zip(vals).map(|(j, v)| v * x[*j]).sum();
    }
}

fn not_converged(method: &str, iterations: usize, residual: f64) -> Error {
    failure(
        SolverFailureKind::DidNotConverge,
        format!("{method} stopped after {iterations} iterations with relative residual {residual:e}"),
    )
}

fn conjugate_gradient(
    a: &CsrMatrix,
    m: &Preconditioner,
    b: &[f64],
    s: &SolverSettings,
) -> Result<(Vec<f64>, usize, Option<f64>)> {
    let n = b.len();
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((x, 0, Some(0.0)));
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    m.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut res = 1.0;
    for it in 1..=s.max_iter {
        csr_mv(a, &p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("cg breakdown at iteration {it}: p^T A p = {pap:e}"),
            ));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res = norm(&r) / b_norm;
        if res <= s.precision {
            return Ok((x, it, Some(res)));
        }
        m.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(not_converged("cg", s.max_iter, res))
}

fn bicgstab(
    a: &CsrMatrix,
    m: &Preconditioner,
    b: &[f64],
    s: &SolverSettings,
) -> Result<(Vec<f64>, usize, Option<f64>)> {
    let n = b.len();
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((x, 0, Some(0.0)));
    }
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut sv = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut res = 1.0;
    for it in 1..=s.max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("bicgstab breakdown at iteration {it}: rho = {rho_new:e}"),
            ));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        m.apply(&p, &mut y);
        csr_mv(a, &y, &mut v);
        let rv = dot(&r_hat, &v);
        if rv == 0.0 {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("bicgstab breakdown at iteration {it}"),
            ));
        }
        alpha = rho_new / rv;
        for i in 0..n {
            x[i] += alpha * y[i];
            sv[i] = r[i] - alpha * v[i];
        }
        res = norm(&sv) / b_norm;
        if res <= s.precision {
            return Ok((x, it, Some(res)));
        }
        m.apply(&sv, &mut z);
        csr_mv(a, &z, &mut t);
        let tt = dot(&t, &t);
        if tt == 0.0 {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("bicgstab breakdown at iteration {it}: |t| = 0"),
            ));
        }
        omega = dot(&t, &sv) / tt;
        for i in 0..n {
            x[i] += omega * z[i];
            r[i] = sv[i] - omega * t[i];
        }
        res = norm(&r) / b_norm;
        if res <= s.precision {
            return Ok((x, it, Some(res)));
        }
        if omega == 0.0 {
            return Err(failure(
                SolverFailureKind::DidNotConverge,
                format!("bicgstab breakdown at iteration {it}: omega = 0"),
            ));
        }
        rho = rho_new;
    }
    Err(not_converged("bicgstab", s.max_iter, res))
}

impl SolverMatrix for CsrMatrix {
    fn solver_types() -> &'static [&'static str] {
        &SPARSE_SOLVER_TYPES
    }

    fn run(&self, ty: &str, settings: &SolverSettings, rhs: &[f64]) -> Result<(Vec<f64>, usize, Option<f64>)> {
        let (method, suffix) = ty
            .split_once('.')
            .filter(|_| SPARSE_SOLVER_TYPES.contains(&ty))
            .ok_or_else(|| unknown_type(ty, &SPARSE_SOLVER_TYPES))?;
        let precond = Preconditioner::for_type(self, suffix)?;
        match method {
            "cg" => conjugate_gradient(self, &precond, rhs, settings),
            "bicgstab" => bicgstab(self, &precond, rhs, settings),
            _ => Err(unknown_type(ty, &SPARSE_SOLVER_TYPES)),
        }
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::io::Write as _;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use pdekit::common::{
    float_cmp::{eq, ne},
    format_matrix, format_vector, parse_matrix, parse_vector, CompareStyle, Style, Timings,
};
use pdekit::error::{Error, Result, SolverFailureKind};
use pdekit::functions::{
    difference, discrete_fn, l2_norm, l2_projection, product, sum, write_vtk, CheckerboardFunction, ConstantFunction,
    DgSpace, ExpressionFunction, FunctionRef, LambdaFunction,
};
use pdekit::grid::{
    ApplyOn, BoundaryInfo, BoundaryType, ElementFunctor, Entity, GridView, Intersection, IntersectionFunctor, Walker,
};
use pdekit::la::{
    assemble_lincomb, solver_options, Container, CsrMatrix, DenseMatrix, DenseVector, Matrix, Solver,
    SparsityPattern, DENSE_SOLVER_TYPES, SPARSE_SOLVER_TYPES,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

// 1 ------------------------------------------------------------------------

fn random_real(rng: &mut StdRng) -> f64 {
    match rng.gen_range(0..5) {
        0 => 0.0,
        1 => rng.gen_range(-1.0..1.0),
        2 => rng.gen_range(-1e6..1e6),
        3 => rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-20..20)),
        _ => f64::from_bits(rng.gen::<u64>() & !(0x7ffu64 << 52) | ((rng.gen_range(900u64..1150)) << 52)),
    }
}

fn float_compare_conformance() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut cases = 0;
    for style in [Style::Absolute, Style::RelativeWeak, Style::RelativeStrong, Style::Numpy] {
        for _ in 0..10_000 {
            let a = random_real(&mut rng);
            let b = if rng.gen_bool(0.5) {
                a * (1.0 + rng.gen_range(-1e-6..1e-6)) + rng.gen_range(-1e-9..1e-9)
            } else {
                random_real(&mut rng)
            };
            let eps_abs = 10f64.powi(rng.gen_range(-16..0));
            let eps_rel = 10f64.powi(rng.gen_range(-16..0));
            let cmp = CompareStyle::new(style, eps_abs, eps_rel).map_err(|e| e.to_string())?;
            let d = (a - b).abs();
            let expected = match style {
                Style::Absolute => d <= eps_abs,
                Style::RelativeWeak => d <= eps_rel * a.abs().max(b.abs()),
                Style::RelativeStrong => d <= eps_rel * a.abs().min(b.abs()),
                Style::Numpy => d <= eps_abs + eps_rel * b.abs(),
            };
            ensure(eq(a, b, &cmp) == expected && ne(a, b, &cmp) != expected, || {
                format!("{style:?}({eps_abs:e}, {eps_rel:e}) on ({a:e}, {b:e}): expected eq = {expected}")
            })?;
            cases += 1;
        }
    }
    let np = CompareStyle::new(Style::Numpy, 0.0, 0.1).map_err(|e| e.to_string())?;
    ensure(!eq(1.0, 0.9, &np) && eq(0.9, 1.0, &np), || {
        "numpy(0, 0.1) should give eq(1.0, 0.9) = false and eq(0.9, 1.0) = true".into()
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("{cases} cases, asymmetry reproduced, {elapsed:.2?}"))
}

// 2 ------------------------------------------------------------------------

fn grammar_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    for trial in 0..1000 {
        if trial % 2 == 0 {
            let v: Vec<f64> = (0..rng.gen_range(1..8)).map(|_| random_real(&mut rng)).collect();
            let text = format_vector(&v);
            let back = parse_vector(&text, 0).map_err(|e| format!("{text}: {e}"))?;
            ensure(back.iter().map(|x| x.to_bits()).eq(v.iter().map(|x| x.to_bits())), || {
                format!("{v:?} came back as {back:?} via '{text}'")
            })?;
        } else {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let m: Vec<Vec<f64>> = (0..r).map(|_| (0..c).map(|_| random_real(&mut rng)).collect()).collect();
            let text = format_matrix(&m);
            let back = parse_matrix(&text, 0, 0).map_err(|e| format!("{text}: {e}"))?;
            ensure(back == m, || format!("{m:?} came back as {back:?} via '{text}'"))?;
        }
    }
    let m = parse_matrix("[1. 2.; 3. 4.]", 0, 0).map_err(|e| e.to_string())?;
    ensure(m == vec![vec![1.0, 2.0], vec![3.0, 4.0]], || format!("'[1. 2.; 3. 4.]' gave {m:?}"))?;
    let v = parse_vector("[0 0 0 0]", 2).map_err(|e| e.to_string())?;
    ensure(v == vec![0.0, 0.0], || format!("'[0 0 0 0]' at size 2 gave {v:?}"))?;
    ensure(matches!(parse_vector("[0 0]", 3), Err(Error::Size { .. })), || {
        "a too short vector should be a size error".into()
    })?;
    Ok("1000 random values survive format -> parse bit-exactly, reference literals parse".into())
}

// 3 ------------------------------------------------------------------------

fn periodic_index_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for dim in 1..=3usize {
        let sizes: Vec<Vec<usize>> = (0..4usize.pow(dim as u32))
            .map(|mut flat| {
                (0..dim)
                    .map(|_| {
                        let n = flat % 4 + 1;
                        flat /= 4;
                        n
                    })
                    .collect()
            })
            .collect();
        for n in &sizes {
            for mask in 0..(1u32 << dim) {
                let periodic: Vec<bool> = (0..dim).map(|i| mask & (1 << i) != 0).collect();
                common::check_periodic_against_union_find(n, &periodic)?;
                checked += 1;
            }
        }
    }
    let view = common::unit_view(&[4, 4]).periodic(&[true, true]).map_err(|e| e.to_string())?;
    let vertices = view.size(2).map_err(|e| e.to_string())?;
    ensure(vertices == 16, || format!("4x4 fully periodic has {vertices} vertices, expected 16"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("{checked} grid/periodicity combinations, 4x4 torus has 16 vertices, {elapsed:.2?}"))
}

// 4 ------------------------------------------------------------------------

#[derive(Default)]
struct CellTally {
    count: AtomicUsize,
    checksum: AtomicU64,
}

impl ElementFunctor for CellTally {
    fn apply_local(&self, view: &GridView, element: &Entity) -> Result<()> {
        self.count.fetch_add(1, Ordering::Relaxed);
        let i = view.index(element) as u64;
        self.checksum.fetch_add(i * i + 1, Ordering::Relaxed);
        Ok(())
    }
}

#[derive(Default)]
struct FaceTally {
    count: AtomicUsize,
    checksum: AtomicU64,
}

impl IntersectionFunctor for FaceTally {
    fn apply_local(&self, view: &GridView, is: &Intersection, inside: &Entity, outside: Option<&Entity>) -> Result<()> {
        self.count.fetch_add(1, Ordering::Relaxed);
        let a = view.index(inside) as u64;
        let b = outside.map_or(0, |o| view.index(o) as u64 + 1);
        let key = (a * 7919 + b) * 6 + 2 * is.direction as u64 + is.periodic as u64;
        self.checksum.fetch_add(key * key, Ordering::Relaxed);
        Ok(())
    }
}

fn tallies(view: &GridView, filter: &ApplyOn, parallel: bool) -> Result<(usize, u64, usize, u64)> {
    let mut cells = CellTally::default();
    let mut faces = FaceTally::default();
    {
        let mut walker = Walker::new(view);
        walker.add_element_functor(&mut cells, ApplyOn::AllEntities)?;
        walker.add_intersection_functor(&mut faces, filter.clone())?;
        walker.walk(parallel)?;
    }
    Ok((
        cells.count.into_inner(),
        cells.checksum.into_inner(),
        faces.count.into_inner(),
        faces.checksum.into_inner(),
    ))
}

fn walker_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    for trial in 0..100 {
        let dim = rng.gen_range(1..=3);
        let n: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..=6)).collect();
        let periodic: Vec<bool> = (0..dim).map(|_| rng.gen_bool(0.3)).collect();
        let plain = common::unit_view(&n);
        let view = if periodic.iter().any(|p| *p) {
            plain.periodic(&periodic).map_err(|e| e.to_string())?
        } else {
            plain
        };
        let mut normal = vec![0.0; dim];
        normal[rng.gen_range(0..dim)] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let info = BoundaryInfo::normal_based(BoundaryType::Neumann, vec![(BoundaryType::Dirichlet, normal)], 1e-10)
            .map_err(|e| e.to_string())?;
        let filter = match rng.gen_range(0..6) {
            0 => ApplyOn::AllIntersections,
            1 => ApplyOn::InnerIntersections,
            2 => ApplyOn::InnerIntersectionsPrimally,
            3 => ApplyOn::BoundaryIntersections,
            4 => ApplyOn::DirichletIntersections(info),
            _ => ApplyOn::NeumannIntersections(info),
        };
        let serial = tallies(&view, &filter, false).map_err(|e| e.to_string())?;
        let parallel = tallies(&view, &filter, true).map_err(|e| e.to_string())?;
        ensure(serial == parallel, || {
            format!("trial {trial}: n={n:?} periodic={periodic:?} {filter:?}: serial {serial:?} vs parallel {parallel:?}")
        })?;
    }
    let view = common::unit_view(&[8, 8]);
    let (_, _, primal, _) = tallies(&view, &ApplyOn::InnerIntersectionsPrimally, true).map_err(|e| e.to_string())?;
    let brute = common::adjacent_cell_pairs(&[8, 8]);
    ensure(primal == brute && brute == 112, || format!("8x8 primal faces: walker {primal}, brute force {brute}"))?;
    Ok(format!("100 random grid/filter combinations agree, 8x8 inner-primally = {primal}"))
}

// 5 ------------------------------------------------------------------------

fn cow_contract() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    for seq in 0..200 {
        // model: each handle points at a storage slot, slots count their handles
        let mut handles: Vec<DenseVector> = vec![DenseVector::from_vec(vec![1.0, 2.0, 3.0])];
        let mut slot_of: Vec<usize> = vec![0];
        let mut slot_handles: Vec<usize> = vec![1];
        let mut predicted = 0;
        for _ in 0..30 {
            let h = rng.gen_range(0..handles.len());
            match rng.gen_range(0..3) {
                0 => {
                    handles.push(handles[h].copy());
                    slot_of.push(slot_of[h]);
                    slot_handles[slot_of[h]] += 1;
                }
                1 => {
                    if slot_handles[slot_of[h]] > 1 {
                        predicted += 1;
                        slot_handles[slot_of[h]] -= 1;
                        slot_handles.push(1);
                        slot_of[h] = slot_handles.len() - 1;
                    }
                    handles[h].scal(2.0);
                }
                _ if handles.len() > 1 => {
                    slot_handles[slot_of[h]] -= 1;
                    handles.swap_remove(h);
                    slot_of.swap_remove(h);
                }
                _ => {}
            }
            for (k, handle) in handles.iter().enumerate() {
                ensure(handle.deep_copies() == predicted, || {
                    format!("sequence {seq}: handle {k} reports {} deep copies, model {predicted}", handle.deep_copies())
                })?;
                ensure(handle.share_count() == slot_handles[slot_of[k]], || {
                    format!("sequence {seq}: handle {k} shares with {}", handle.share_count())
                })?;
            }
        }
    }
    for q in 1..=10 {
        let vectors: Vec<DenseVector> = (0..q).map(|i| DenseVector::new(4, i as f64)).collect();
        let coefficients: Vec<f64> = (0..q).map(|i| 1.0 / (i + 1) as f64).collect();
        let before = vectors[0].deep_copies();
        let r = assemble_lincomb(&vectors, &coefficients).map_err(|e| e.to_string())?;
        ensure(r.deep_copies() - before == 1, || format!("vector lincomb Q={q}: {} deep copies", r.deep_copies()))?;

        let dense: Vec<DenseMatrix> = (0..q).map(|_| DenseMatrix::identity(3)).collect();
        let r = assemble_lincomb(&dense, &coefficients).map_err(|e| e.to_string())?;
        ensure(r.deep_copies() == 1, || format!("dense lincomb Q={q}: {} deep copies", r.deep_copies()))?;

        let sparse: Vec<CsrMatrix> = (0..q)
            .map(|_| {
                let mut m = CsrMatrix::from_pattern(SparsityPattern::diagonal(3));
                m.unit_row(0).unwrap();
                m
            })
            .collect();
        let r = assemble_lincomb(&sparse, &coefficients).map_err(|e| e.to_string())?;
        ensure(r.deep_copies() == 1, || format!("sparse lincomb Q={q}: {} deep copies", r.deep_copies()))?;
    }
    Ok("200 copy/mutate/drop sequences match the model, assemble_lincomb deep-copies once for Q = 1..10".into())
}

// 6 ------------------------------------------------------------------------

fn independent_residual(rows: &[Vec<f64>], x: &[f64], b: &[f64]) -> (f64, f64) {
    let mut sup = 0.0f64;
    let mut two = 0.0;
    for (row, bi) in rows.iter().zip(b) {
        let r: f64 = row.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() - bi;
        sup = sup.max(r.abs());
        two += r * r;
    }
    (sup, two.sqrt())
}

fn post_check_holds(rows: &[Vec<f64>], x: &[f64], b: &[f64]) -> bool {
    let b_sup = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    independent_residual(rows, x, b).0 <= 1e-5 * (1.0 + b_sup)
}

fn laplacian(n: usize) -> CsrMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        rows[i][i] = 2.0;
        if i > 0 {
            rows[i][i - 1] = -1.0;
        }
        if i + 1 < n {
            rows[i][i + 1] = -1.0;
        }
    }
    CsrMatrix::from_dense_rows(&rows, 0.0).unwrap()
}

fn solver_checks() -> Outcome {
    let nonsym = DenseMatrix::from_rows(&[vec![4.0, 1.0], vec![0.5, 3.0]]).map_err(|e| e.to_string())?;
    let mut x = DenseVector::zeros(2);
    let err = Solver::new(&nonsym).apply_type(&DenseVector::new(2, 1.0), &mut x, "ldlt");
    let tol = solver_options("ldlt").and_then(|o| o.get_real("pre_check_symmetry")).map_err(|e| e.to_string())?;
    ensure(tol == 1e-8, || format!("default symmetry tolerance is {tol}"))?;
    ensure(
        err.as_ref().err().and_then(Error::solver_failure_kind) == Some(SolverFailureKind::PreCheckFailed),
        || format!("ldlt on a nonsymmetric matrix gave {err:?}"),
    )?;

    let mut rng = StdRng::seed_from_u64(6);
    let mut successes = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..12);
        let mut rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                rows[i][j] = rows[j][i];
            }
            rows[i][i] += n as f64;
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let rhs = DenseVector::from_vec(b.clone());
        let dense = DenseMatrix::from_rows(&rows).map_err(|e| e.to_string())?;
        for ty in DENSE_SOLVER_TYPES {
            let mut x = DenseVector::zeros(0);
            if Solver::new(&dense).apply_type(&rhs, &mut x, ty).is_ok() {
                ensure(post_check_holds(&rows, x.as_slice(), &b), || format!("{ty} solution fails the post-check"))?;
                successes += 1;
            }
        }
        let sparse = CsrMatrix::from_dense_rows(&rows, 0.0).map_err(|e| e.to_string())?;
        for ty in SPARSE_SOLVER_TYPES {
            let mut x = DenseVector::zeros(0);
            if Solver::new(&sparse).apply_type(&rhs, &mut x, ty).is_ok() {
                ensure(post_check_holds(&rows, x.as_slice(), &b), || format!("{ty} solution fails the post-check"))?;
                successes += 1;
            }
        }
    }

    let a = laplacian(50);
    let rows = a.to_dense_rows();
    let b = DenseVector::new(50, 1.0);
    let mut report = Vec::new();
    for ty in SPARSE_SOLVER_TYPES {
        let mut x = DenseVector::zeros(0);
        let info = Solver::new(&a).apply_type(&b, &mut x, ty).map_err(|e| format!("{ty}: {e}"))?;
        let (_, true_residual) = independent_residual(&rows, x.as_slice(), b.as_slice());
        let true_relative = true_residual / b.l2_norm();
        ensure(info.iterations <= 1000 && info.residual_estimate <= 1e-14, || {
            format!("{ty}: {} iterations, residual {:e}", info.iterations, info.residual_estimate)
        })?;
        ensure(post_check_holds(&rows, x.as_slice(), b.as_slice()), || format!("{ty}: post-check"))?;
        report.push(format!("{ty} {} it (true rel. residual {true_relative:.1e})", info.iterations));
    }
    Ok(format!(
        "ldlt rejects nonsymmetric input, {successes} random solves pass the post-check, n=50 Laplacian: {}",
        report.join(", ")
    ))
}

// 7 ------------------------------------------------------------------------

fn monomial(p: [usize; 2]) -> FunctionRef {
    let f = LambdaFunction::scalar(2, p[0].max(p[1]), move |x| x[0].powi(p[0] as i32) * x[1].powi(p[1] as i32));
    Arc::new(f)
}

fn projection_exactness() -> Outcome {
    let start = Instant::now();
    let view = common::unit_view(&[4, 4]);
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in 0..=2 {
        let space = DgSpace::new(view.clone(), k).map_err(|e| e.to_string())?;
        for p0 in 0..=k {
            for p1 in 0..=k {
                let f = monomial([p0, p1]);
                let dofs = l2_projection(f.as_ref(), &space, None).map_err(|e| e.to_string())?;
                let fh: FunctionRef = Arc::new(discrete_fn(&space, dofs).map_err(|e| e.to_string())?);
                let e = difference(f, fh).map_err(|e| e.to_string())?;
                let err = l2_norm(e.as_ref(), &view, 2 * k + 2, false).map_err(|e| e.to_string())?;
                ensure(err <= 1e-10, || format!("k={k}, x^{p0} y^{p1}: error {err:e}"))?;
                worst = worst.max(err);
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("{count} monomials, max error {worst:.1e}, {elapsed:.2?}"))
}

// 8 ------------------------------------------------------------------------

fn projection_error(n: usize) -> std::result::Result<f64, String> {
    let view = common::unit_view(&[n, n]);
    let f: FunctionRef = Arc::new(
        ExpressionFunction::from_lists(2, "x", 3, "sin(pi*x[0])", None).map_err(|e| e.to_string())?,
    );
    let space = DgSpace::new(view.clone(), 1).map_err(|e| e.to_string())?;
    let dofs = l2_projection(f.as_ref(), &space, None).map_err(|e| e.to_string())?;
    let fh: FunctionRef = Arc::new(discrete_fn(&space, dofs).map_err(|e| e.to_string())?);
    let e = difference(f, fh).map_err(|e| e.to_string())?;
    l2_norm(e.as_ref(), &view, 8, false).map_err(|e| e.to_string())
}

fn convergence_rate() -> Outcome {
    let coarse = projection_error(8)?;
    let fine = projection_error(16)?;
    let ratio = coarse / fine;
    ensure((3.2..=4.8).contains(&ratio), || format!("ratio {ratio} ({coarse:e} / {fine:e})"))?;
    Ok(format!("errors {coarse:.3e} / {fine:.3e}, ratio {ratio:.3}"))
}

// 9 ------------------------------------------------------------------------

fn gradient_checks() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let view = common::unit_view(&[4, 4]);
    let grads = ["[1 0]".to_string(), "[0 cos(x[1])]".to_string()];
    let expr: FunctionRef = Arc::new(
        ExpressionFunction::from_lists(2, "x", 3, "[x[0] sin(x[1])]", Some(&grads)).map_err(|e| e.to_string())?,
    );
    let scalar_expr: FunctionRef = Arc::new(
        ExpressionFunction::from_lists(
            2,
            "x",
            4,
            "exp(x[0])*x[1]^2 - sqrt(1 + x[0]^2)/3",
            Some(&["[exp(x[0])*x[1]^2 - x[0]/(3*sqrt(1 + x[0]^2)) 2*exp(x[0])*x[1]]".to_string()]),
        )
        .map_err(|e| e.to_string())?,
    );
    let lambda: FunctionRef = Arc::new(
        LambdaFunction::scalar(2, 3, |x| (x[0] * x[1]).sin()).with_jacobian(|x| {
            let c = (x[0] * x[1]).cos();
            vec![x[1] * c, x[0] * c]
        }),
    );
    let constant: FunctionRef = Arc::new(ConstantFunction::new(2, pdekit::common::Value::Matrix(vec![
        vec![1.0, 0.0],
        vec![0.0, 1.0],
    ]))
    .map_err(|e| e.to_string())?);
    let board: FunctionRef = Arc::new(
        CheckerboardFunction::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![2, 2], vec![1.0, 2.0, 3.0, 4.0])
            .map_err(|e| e.to_string())?,
    );
    let space = DgSpace::new(view.clone(), 3).map_err(|e| e.to_string())?;
    let dofs = l2_projection(lambda.as_ref(), &space, None).map_err(|e| e.to_string())?;
    let discrete: FunctionRef = Arc::new(discrete_fn(&space, dofs).map_err(|e| e.to_string())?);
    let combos = [
        ("sum", sum(scalar_expr.clone(), discrete.clone())),
        ("difference", difference(lambda.clone(), scalar_expr.clone())),
        ("product", product(scalar_expr.clone(), expr.clone())),
    ];
    let mut functions: Vec<(&str, FunctionRef)> = vec![
        ("constant", constant),
        ("checkerboard", board),
        ("expression", expr),
        ("scalar expression", scalar_expr),
        ("lambda", lambda),
        ("discrete", discrete),
    ];
    for (name, f) in combos {
        functions.push((name, f.map_err(|e| e.to_string())?));
    }
    for (name, f) in &functions {
        for _ in 0..50 {
            let cell = view.cell(rng.gen_range(0..view.num_cells())).map_err(|e| e.to_string())?;
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(0.05..0.95)).collect();
            let local = f.local_function(&view, &cell).map_err(|e| e.to_string())?;
            common::check_jacobian_fd(local.as_ref(), &x, 1e-6, 1e-5).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    for _ in 0..50 {
        let cell = view.cell(rng.gen_range(0..view.num_cells())).map_err(|e| e.to_string())?;
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(0.05..0.95)).collect();
        let basis = space.local_basis(&cell);
        common::check_jacobian_fd(&basis, &x, 1e-6, 1e-5).map_err(|e| format!("basis: {e}"))?;
    }
    Ok(format!("{} implementations and the DG basis match central differences at 50 points each", functions.len()))
}

// 10 -----------------------------------------------------------------------

fn fixture(name: &str) -> std::result::Result<String, String> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))
}

fn byte_level_formats() -> Outcome {
    let timings = Timings::new();
    for section in ["project", "project.assemble", "project.solve"] {
        timings.start(section).map_err(|e| e.to_string())?;
    }
    for section in ["project.assemble", "project.solve", "project"] {
        timings.stop(section).map_err(|e| e.to_string())?;
    }
    let mut csv = Vec::new();
    timings.write_csv(&mut csv, 1).map_err(|e| e.to_string())?;
    let csv = String::from_utf8(csv).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or_default();
    let golden = fixture("timings_header.csv")?;
    ensure(header == golden.trim_end(), || format!("header\n{header}\ndiffers from the fixture\n{golden}"))?;
    let data: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    ensure(data.len() == 20 && data[0] == "1" && data[1] == "1", || format!("data row {data:?}"))?;
    ensure(data[2..].iter().all(|v| v.parse::<u64>().is_ok()), || format!("data row {data:?}"))?;
    ensure(data[2..].chunks(2).all(|p| p[0] == p[1]), || "avg and max differ for one process".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ini = dir.path().join("project.ini");
    std::fs::write(
        &ini,
        "[grid]\ntype = xt.grid.gridprovider.cube\ndim = 2\nlower_left = [0 0]\nupper_right = [1 1]\n\
         num_elements = [2 2]\n[function]\ntype = xt.functions.constant\nvalue = 1\n[space]\norder = 0\n",
    )
    .map_err(|e| e.to_string())?;
    let args = ["pdekit", "project", "--config", ini.to_str().unwrap(), "--output-dir", dir.path().to_str().unwrap()];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pdekit::cli::run(args, &mut out, &mut err);
    ensure(code == 0, || format!("pdekit project exited {code}: {}", String::from_utf8_lossy(&err)))?;
    let written = std::fs::read_to_string(dir.path().join("timings.csv")).map_err(|e| e.to_string())?;
    ensure(written.lines().next() == Some(golden.trim_end()), || format!("CLI timings.csv header: {written}"))?;

    let view = common::unit_view(&[2, 2]);
    let mut vtk = Vec::new();
    write_vtk(&ConstantFunction::scalar(2, 1.0), &view, "constant", &mut vtk).map_err(|e| e.to_string())?;
    ensure(vtk == fixture("constant_2x2.vtk")?.into_bytes(), || {
        format!("constant VTK differs:\n{}", String::from_utf8_lossy(&vtk))
    })?;
    let board = CheckerboardFunction::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![2, 2], vec![1.0, 2.0, 3.0, 4.0])
        .map_err(|e| e.to_string())?;
    let mut vtk = Vec::new();
    write_vtk(&board, &view, "difference", &mut vtk).map_err(|e| e.to_string())?;
    ensure(vtk == fixture("checkerboard_2x2.vtk")?.into_bytes(), || {
        format!("checkerboard VTK differs:\n{}", String::from_utf8_lossy(&vtk))
    })?;
    Ok("timings.csv header (library and CLI) and two 2x2 VTK files match the golden fixtures".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("float-compare conformance", float_compare_conformance),
        ("grammar round trip", grammar_round_trip),
        ("periodic-index oracle", periodic_index_oracle),
        ("walker equivalence", walker_equivalence),
        ("COW contract", cow_contract),
        ("solver checks", solver_checks),
        ("projection exactness", projection_exactness),
        ("convergence rate", convergence_rate),
        ("gradient checks", gradient_checks),
        ("CSV/VTK byte-level", byte_level_formats),
    ];
    let mut stdout = std::io::stdout().lock();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let line = match outcome {
            Ok(detail) => format!("PASS [{}] {name}: {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                format!("FAIL [{}] {name}: {reason}", i + 1)
            }
        };
        let _ = writeln!(stdout, "{line}");
    }
    let _ = writeln!(stdout, "{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

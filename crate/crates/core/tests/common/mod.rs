//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use pdekit::functions::LocalFunctionSet;
use pdekit::grid::{CubeGridSpec, Entity, GridProvider, GridView};

pub fn unit_view(n: &[usize]) -> GridView {
    let dim = n.len();
    GridProvider::new(CubeGridSpec::new(vec![0.0; dim], vec![1.0; dim], n.to_vec(), 0).unwrap()).leaf_view()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// Doubled integer coordinates of an entity's center.
fn doubled_center(e: &Entity, dim: usize) -> Vec<usize> {
    (0..dim)
        .map(|i| if e.is_collapsed(i) { 2 * e.coords()[i] } else { 2 * e.coords()[i] + 1 })
        .collect()
}

/// Compares the periodic view of an `n` grid against the quotient of the
/// plain entities under translation by the period in each periodic
/// direction, computed with union-find.
pub fn check_periodic_against_union_find(n: &[usize], periodic: &[bool]) -> Result<(), String> {
    let dim = n.len();
    let plain = unit_view(n);
    let view = plain.periodic(periodic).map_err(|e| e.to_string())?;
    for codim in 0..=dim {
        let entities: Vec<Entity> = plain.entities(codim).unwrap().collect();
        let by_center: HashMap<Vec<usize>, usize> =
            entities.iter().enumerate().map(|(k, e)| (doubled_center(e, dim), k)).collect();
        let mut uf = UnionFind::new(entities.len());
        for (k, e) in entities.iter().enumerate() {
            let center = doubled_center(e, dim);
            for i in (0..dim).filter(|&i| periodic[i]) {
                let mut shifted = center.clone();
                shifted[i] += 2 * n[i];
                if let Some(&other) = by_center.get(&shifted) {
                    uf.union(k, other);
                }
            }
        }
        let classes: Vec<usize> = (0..entities.len()).map(|k| uf.find(k)).collect();
        let num_classes = {
            let mut roots = classes.clone();
            roots.sort_unstable();
            roots.dedup();
            roots.len()
        };
        let size = view.size(codim).unwrap();
        if size != num_classes {
            return Err(format!(
                "n={n:?} periodic={periodic:?} codim {codim}: view has {size} entities, quotient has {num_classes}"
            ));
        }
        let indices: Vec<usize> = entities.iter().map(|e| view.index(e)).collect();
        for a in 0..entities.len() {
            if indices[a] >= size {
                return Err(format!("index {} out of range {size}", indices[a]));
            }
            for b in a + 1..entities.len() {
                if (classes[a] == classes[b]) != (indices[a] == indices[b]) {
                    return Err(format!(
                        "n={n:?} periodic={periodic:?} codim {codim}: {:?} and {:?} disagree with the quotient",
                        entities[a], entities[b]
                    ));
                }
            }
        }
        for idx in 0..size {
            let e = view.entity(codim, idx).unwrap();
            if view.index(&e) != idx {
                return Err(format!("entity({codim}, {idx}) does not round trip"));
            }
        }
    }
    Ok(())
}

/// Unordered pairs of face-adjacent cells in an `n` grid, by enumeration.
pub fn adjacent_cell_pairs(n: &[usize]) -> usize {
    let cells: Vec<Vec<usize>> = {
        let total: usize = n.iter().product();
        (0..total)
            .map(|mut flat| {
                n.iter()
                    .map(|&ni| {
                        let c = flat % ni;
                        flat /= ni;
                        c
                    })
                    .collect()
            })
            .collect()
    };
    let mut count = 0;
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let diff: usize = cells[a].iter().zip(&cells[b]).map(|(x, y)| x.abs_diff(*y)).sum();
            if diff == 1 {
                count += 1;
            }
        }
    }
    count
}

/// Compares the jacobian of every member of `set` at the local point `x`
/// with central differences of its values in global coordinates.
pub fn check_jacobian_fd(set: &dyn LocalFunctionSet, x: &[f64], step: f64, tol: f64) -> Result<(), String> {
    let geometry = set.geometry();
    let global = geometry.global(x);
    let dim = x.len();
    let analytic = set.jacobian(x).map_err(|e| e.to_string())?;
    for j in 0..dim {
        let mut plus = global.clone();
        let mut minus = global.clone();
        plus[j] += step;
        minus[j] -= step;
        let vp = set.evaluate(&geometry.local(&plus)).map_err(|e| e.to_string())?;
        let vm = set.evaluate(&geometry.local(&minus)).map_err(|e| e.to_string())?;
        for m in 0..set.size() {
            for k in 0..vp[m].len() {
                let fd = (vp[m][k] - vm[m][k]) / (2.0 * step);
                let exact = analytic[m][k * dim + j];
                if (fd - exact).abs() > tol * (1.0 + exact.abs()) {
                    return Err(format!(
                        "member {m}, component {k}, direction {j} at {x:?}: jacobian {exact}, differences {fd}"
                    ));
                }
            }
        }
    }
    Ok(())
}

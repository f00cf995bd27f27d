use crate::grid::view::{Entity, GridView, MAX_DIM};

/// Point location on a view that starts each lookup at the previous hit.
///
/// A point belongs to the cell `[x_k, x_{k+1})` per direction; the last cell
/// of a direction also owns its upper node. Points outside the domain yield
/// `None`.
#[derive(Debug, Clone)]
pub struct EntitySearch<'a> {
    view: &'a GridView,
    cursor: [usize; MAX_DIM],
}

impl<'a> EntitySearch<'a> {
    pub fn new(view: &'a GridView) -> Self {
        Self {
            view,
            cursor: [0; MAX_DIM],
        }
    }

    fn contains(&self, dir: usize, k: usize, x: f64) -> bool {
        let n = self.view.cells_per_direction()[dir];
        let lo = self.view.node(dir, k);
        let hi = self.view.node(dir, k + 1);
        lo <= x && (x < hi || (k + 1 == n && x <= hi))
    }

    fn locate(&self, dir: usize, x: f64) -> Option<usize> {
        let n = self.view.cells_per_direction()[dir];
        if !(x >= self.view.node(dir, 0) && x <= self.view.node(dir, n)) {
            return None;
        }
        let hint = self.cursor[dir];
        for k in [Some(hint), Some(hint + 1), hint.checked_sub(1)].into_iter().flatten() {
            if k < n && self.contains(dir, k, x) {
                return Some(k);
            }
        }
        let lo = self.view.node(dir, 0);
        let h = (self.view.node(dir, n) - lo) / n as f64;
        let mut k = (((x - lo) / h).floor().max(0.0) as usize).min(n - 1);
        // rounding in the guess is off by at most a few cells
        for _ in 0..n {
            if self.contains(dir, k, x) {
                return Some(k);
            }
            if x < self.view.node(dir, k) {
                k = k.checked_sub(1)?;
            } else {
                k += 1;
                if k >= n {
                    return None;
                }
            }
        }
        None
    }

    pub fn find_one(&mut self, point: &[f64]) -> Option<Entity> {
        let dim = self.view.dim();
        if point.len() != dim {
            return None;
        }
        let mut coords = [0; MAX_DIM];
        for (dir, &x) in point.iter().enumerate() {
            coords[dir] = self.locate(dir, x)?;
        }
        self.cursor = coords;
        Some(Entity::new(0, coords, self.view.level()))
    }

    pub fn find<P: AsRef<[f64]>>(&mut self, points: &[P]) -> Vec<Option<Entity>> {
        points.iter().map(|p| self.find_one(p.as_ref())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::provider::{CubeGridSpec, GridProvider};

    fn unit_square(n: usize) -> GridView {
        GridProvider::new(CubeGridSpec::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![n, n], 0).unwrap()).leaf_view()
    }

    #[test]
    fn finds_cells() {
        let v = unit_square(2);
        let mut search = EntitySearch::new(&v);
        let found = search.find(&[[0.1, 0.1], [0.9, 0.9]]);
        let idx: Vec<usize> = found.iter().map(|e| v.index(&e.unwrap())).collect();
        assert_eq!(idx, vec![0, 3]);
    }

    #[test]
    fn outside_points() {
        let v = unit_square(2);
        let mut search = EntitySearch::new(&v);
        assert!(search.find_one(&[2.0, 2.0]).is_none());
        assert!(search.find_one(&[-1e-12, 0.5]).is_none());
        assert!(search.find_one(&[f64::NAN, 0.5]).is_none());
    }

    #[test]
    fn faces_belong_to_the_upper_cell() {
        let v = unit_square(2);
        let mut search = EntitySearch::new(&v);
        let e = search.find_one(&[0.5, 0.25]).unwrap();
        assert_eq!(e.coords()[0], 1);
        let e = search.find_one(&[1.0, 1.0]).unwrap();
        assert_eq!(v.index(&e), 3);
        let e = search.find_one(&[0.0, 0.0]).unwrap();
        assert_eq!(v.index(&e), 0);
    }

    #[test]
    fn far_jumps_after_cursor() {
        let v = unit_square(64);
        let mut search = EntitySearch::new(&v);
        let pts: Vec<[f64; 2]> = (0..200).map(|i| [(i as f64 * 0.377) % 1.0, (i as f64 * 0.913) % 1.0]).collect();
        for p in &pts {
            let e = search.find_one(p).unwrap();
            let (lo, h) = v.cell_bounds(&e);
            for d in 0..2 {
                assert!(lo[d] <= p[d] && p[d] <= lo[d] + h[d]);
            }
        }
    }
}

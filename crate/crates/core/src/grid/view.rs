//! Level views of a tensor grid, entity enumeration and intersections.
//!
//! An entity is encoded by its collapse set `S` (the directions in which it
//! is a single point) and integer coordinates: in a direction `i` in `S` the
//! coordinate is a vertex node `0..=N_i`, otherwise a cell slab `0..N_i`.
//! Cells have `S = {}`, vertices have `S = {0, .., dim-1}`.
//!
//! Entities of one codimension are enumerated grouped by collapse set, groups
//! ordered by increasing bitmask, and lexicographically within a group with
//! direction 0 running fastest. The index of an entity is its position in
//! this enumeration. In a periodic view the node `N_i` of a periodic
//! direction is identified with node `0`, which removes those entities from
//! the enumeration and maps them onto the index of their representative.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::provider::CubeGridSpec;

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entity {
    collapse: u8,
    coords: [usize; MAX_DIM],
    level: usize,
}

impl Entity {
    pub fn new(collapse: u8, coords: [usize; MAX_DIM], level: usize) -> Self {
        Self {
            collapse,
            coords,
            level,
        }
    }

    pub fn codim(&self) -> usize {
        self.collapse.count_ones() as usize
    }

    /// Bitmask of the directions in which the entity is a point.
    pub fn collapse_set(&self) -> u8 {
        self.collapse
    }

    pub fn is_collapsed(&self, dir: usize) -> bool {
        self.collapse & (1 << dir) != 0
    }

    pub fn coords(&self) -> [usize; MAX_DIM] {
        self.coords
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Low,
    High,
}

/// An oriented face of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Intersection {
    pub inside: Entity,
    pub direction: usize,
    pub side: Side,
    pub outside: Option<Entity>,
    /// The face lies on a periodically identified domain boundary.
    pub periodic: bool,
    pub dim: usize,
}

impl Intersection {
    pub fn boundary(&self) -> bool {
        self.outside.is_none() && !self.periodic
    }

    pub fn neighbor(&self) -> bool {
        self.outside.is_some()
    }

    pub fn unit_outer_normal(&self) -> Vec<f64> {
        let mut n = vec![0.0; self.dim];
        n[self.direction] = match self.side {
            Side::Low => -1.0,
            Side::High => 1.0,
        };
        n
    }

    /// The codim-1 entity this intersection covers, seen from `inside`.
    pub fn face(&self) -> Entity {
        let mut coords = self.inside.coords;
        if self.side == Side::High {
            coords[self.direction] += 1;
        }
        Entity::new(1 << self.direction, coords, self.inside.level)
    }
}

#[derive(Debug, Clone)]
struct Group {
    mask: u8,
    offset: usize,
    extents: [usize; MAX_DIM],
}

/// A read-only view of one level of a tensor grid, optionally with periodic
/// identification.
#[derive(Debug, Clone)]
pub struct GridView {
    spec: Arc<CubeGridSpec>,
    level: usize,
    cells: [usize; MAX_DIM],
    periodic: [bool; MAX_DIM],
    groups: Vec<Vec<Group>>,
    sizes: Vec<usize>,
}

impl PartialEq for GridView {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.level == other.level && self.periodic == other.periodic
    }
}

impl GridView {
    pub(crate) fn new(spec: Arc<CubeGridSpec>, level: usize) -> Self {
        Self::build(spec, level, [false; MAX_DIM])
    }

    fn build(spec: Arc<CubeGridSpec>, level: usize, periodic: [bool; MAX_DIM]) -> Self {
        let dim = spec.dim();
        let mut cells = [1; MAX_DIM];
        for (i, n) in spec.cells_per_direction(level).into_iter().enumerate() {
            cells[i] = n;
        }
        let mut groups = vec![Vec::new(); dim + 1];
        let mut sizes = vec![0; dim + 1];
        for mask in 0u8..(1 << dim) {
            let codim = mask.count_ones() as usize;
            let mut extents = [1; MAX_DIM];
            for i in 0..dim {
                let collapsed = mask & (1 << i) != 0;
                extents[i] = cells[i] + usize::from(collapsed && !periodic[i]);
            }
            let count: usize = extents[..dim].iter().product();
            groups[codim].push(Group {
                mask,
                offset: sizes[codim],
                extents,
            });
            sizes[codim] += count;
        }
        Self {
            spec,
            level,
            cells,
            periodic,
            groups,
            sizes,
        }
    }

    /// A view of the same level with the given directions periodically identified.
    pub fn periodic(&self, periodic_dirs: &[bool]) -> Result<GridView> {
        if self.is_periodic() {
            return Err(Error::Usage("periodic views must be built from a plain view".into()));
        }
        if periodic_dirs.len() != self.dim() {
            return Err(Error::Usage(format!(
                "expected {} periodicity flags, got {}",
                self.dim(),
                periodic_dirs.len()
            )));
        }
        let mut periodic = [false; MAX_DIM];
        periodic[..self.dim()].copy_from_slice(periodic_dirs);
        Ok(Self::build(self.spec.clone(), self.level, periodic))
    }

    pub fn spec(&self) -> &CubeGridSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic.iter().any(|p| *p)
    }

    pub fn periodic_directions(&self) -> Vec<bool> {
        self.periodic[..self.dim()].to_vec()
    }

    /// The plain view this view was derived from.
    pub fn plain(&self) -> GridView {
        Self::new(self.spec.clone(), self.level)
    }

    /// Cells per direction.
    pub fn cells_per_direction(&self) -> &[usize] {
        &self.cells[..self.dim()]
    }

    pub fn cell_widths(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| (self.spec.upper_right()[i] - self.spec.lower_left()[i]) / self.cells[i] as f64)
            .collect()
    }

    /// Physical coordinate of vertex node `k` in direction `dir`.
    pub fn node(&self, dir: usize, k: usize) -> f64 {
        let lo = self.spec.lower_left()[dir];
        let hi = self.spec.upper_right()[dir];
        let n = self.cells[dir];
        if k >= n {
            hi
        } else {
            lo + k as f64 * (hi - lo) / n as f64
        }
    }

    fn check_codim(&self, codim: usize) -> Result<()> {
        if codim > self.dim() {
            Err(Error::Usage(format!("codim {codim} exceeds dimension {}", self.dim())))
        } else {
            Ok(())
        }
    }

    pub fn size(&self, codim: usize) -> Result<usize> {
        self.check_codim(codim)?;
        Ok(self.sizes[codim])
    }

    pub fn num_cells(&self) -> usize {
        self.sizes[0]
    }

    /// Whether `e` is an entity of the underlying level (periodic copies included).
    pub fn contains(&self, e: &Entity) -> bool {
        let dim = self.dim();
        e.level == self.level
            && e.collapse < (1 << dim)
            && (0..MAX_DIM).all(|i| {
                if i >= dim {
                    e.coords[i] == 0
                } else if e.is_collapsed(i) {
                    e.coords[i] <= self.cells[i]
                } else {
                    e.coords[i] < self.cells[i]
                }
            })
    }

    /// Representative of `e`'s periodic equivalence class.
    pub fn canonical(&self, e: &Entity) -> Entity {
        let mut c = *e;
        for i in 0..self.dim() {
            if self.periodic[i] && e.is_collapsed(i) && e.coords[i] == self.cells[i] {
                c.coords[i] = 0;
            }
        }
        c
    }

    /// Zero-based consecutive index of `e` within its codimension.
    ///
    /// # Panics
    ///
    /// If `e` does not belong to this view's level.
    pub fn index(&self, e: &Entity) -> usize {
        assert!(self.contains(e), "entity {e:?} does not belong to this view");
        let c = self.canonical(e);
        let group = self.groups[c.codim()]
            .iter()
            .find(|g| g.mask == c.collapse)
            .expect("every collapse set has a group");
        let mut linear = 0;
        let mut stride = 1;
        for i in 0..self.dim() {
            linear += c.coords[i] * stride;
            stride *= group.extents[i];
        }
        group.offset + linear
    }

    /// Inverse of [`GridView::index`], returning the representative entity.
    pub fn entity(&self, codim: usize, index: usize) -> Result<Entity> {
        self.check_codim(codim)?;
        if index >= self.sizes[codim] {
            return Err(Error::Index {
                index,
                size: self.sizes[codim],
            });
        }
        let group = self.groups[codim]
            .iter()
            .rev()
            .find(|g| g.offset <= index)
            .expect("offsets start at zero");
        let mut rest = index - group.offset;
        let mut coords = [0; MAX_DIM];
        for i in 0..self.dim() {
            coords[i] = rest % group.extents[i];
            rest /= group.extents[i];
        }
        Ok(Entity::new(group.mask, coords, self.level))
    }

    /// Entities of `codim` in index order.
    pub fn entities(&self, codim: usize) -> Result<impl Iterator<Item = Entity> + '_> {
        let n = self.size(codim)?;
        Ok((0..n).map(move |i| self.entity(codim, i).expect("index in range")))
    }

    pub fn cells(&self) -> impl Iterator<Item = Entity> + '_ {
        (0..self.num_cells()).map(move |i| self.entity(0, i).expect("index in range"))
    }

    pub fn cell(&self, index: usize) -> Result<Entity> {
        self.entity(0, index)
    }

    /// Lower corner and widths of a cell.
    pub fn cell_bounds(&self, cell: &Entity) -> (Vec<f64>, Vec<f64>) {
        let dim = self.dim();
        let lower: Vec<f64> = (0..dim).map(|i| self.node(i, cell.coords[i])).collect();
        let widths = (0..dim)
            .map(|i| self.node(i, cell.coords[i] + 1) - lower[i])
            .collect();
        (lower, widths)
    }

    pub fn center(&self, e: &Entity) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let c = e.coords[i];
                if e.is_collapsed(i) {
                    self.node(i, c)
                } else {
                    0.5 * (self.node(i, c) + self.node(i, c + 1))
                }
            })
            .collect()
    }

    /// Measure of a cell.
    pub fn volume(&self, cell: &Entity) -> f64 {
        self.cell_bounds(cell).1.iter().product()
    }

    /// The `2 * dim` intersections of `cell`, ordered by direction and low side first.
    pub fn intersections(&self, cell: &Entity) -> Vec<Intersection> {
        debug_assert_eq!(cell.codim(), 0);
        let mut out = Vec::with_capacity(2 * self.dim());
        for dir in 0..self.dim() {
            let c = cell.coords[dir];
            let n = self.cells[dir];
            for side in [Side::Low, Side::High] {
                let (neighbour, wraps) = match side {
                    Side::Low if c > 0 => (Some(c - 1), false),
                    Side::High if c + 1 < n => (Some(c + 1), false),
                    Side::Low if self.periodic[dir] => (Some(n - 1), true),
                    Side::High if self.periodic[dir] => (Some(0), true),
                    _ => (None, false),
                };
                let outside = neighbour.map(|k| {
                    let mut coords = cell.coords;
                    coords[dir] = k;
                    Entity::new(0, coords, cell.level)
                });
                out.push(Intersection {
                    inside: *cell,
                    direction: dir,
                    side,
                    outside,
                    periodic: wraps,
                    dim: self.dim(),
                });
            }
        }
        out
    }

    /// The intersection seen from the other side, if any.
    pub fn mirrored(&self, is: &Intersection) -> Option<Intersection> {
        let outside = is.outside?;
        let side = match is.side {
            Side::Low => Side::High,
            Side::High => Side::Low,
        };
        Some(Intersection {
            inside: outside,
            direction: is.direction,
            side,
            outside: Some(is.inside),
            periodic: is.periodic,
            dim: is.dim,
        })
    }

    pub fn intersection_center(&self, is: &Intersection) -> Vec<f64> {
        let mut x = self.center(&is.inside);
        x[is.direction] = self.center(&is.face())[is.direction];
        x
    }
}

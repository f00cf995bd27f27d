use std::sync::Arc;

use crate::common::ConfigTree;
use crate::error::{Error, Result};
use crate::grid::view::GridView;

pub const CUBE_PROVIDER_ID: &str = "xt.grid.gridprovider.cube";

/// An axis-parallel box subdivided into a tensor product of equal cells,
/// uniformly refined `num_refinements` times.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeGridSpec {
    dim: usize,
    lower_left: Vec<f64>,
    upper_right: Vec<f64>,
    num_elements: Vec<usize>,
    num_refinements: usize,
}

impl CubeGridSpec {
    pub fn new(
        lower_left: Vec<f64>,
        upper_right: Vec<f64>,
        num_elements: Vec<usize>,
        num_refinements: usize,
    ) -> Result<Self> {
        let dim = lower_left.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::Spec(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if upper_right.len() != dim || num_elements.len() != dim {
            return Err(Error::Spec(format!(
                "lower_left, upper_right and num_elements must all have length {dim}"
            )));
        }
        for i in 0..dim {
            if !(upper_right[i] > lower_left[i]) || !upper_right[i].is_finite() || !lower_left[i].is_finite() {
                return Err(Error::Spec(format!(
                    "upper_right[{i}] = {} must exceed lower_left[{i}] = {}",
                    upper_right[i], lower_left[i]
                )));
            }
            if num_elements[i] == 0 {
                return Err(Error::Spec(format!("num_elements[{i}] must be positive")));
            }
        }
        if num_refinements > 20 {
            return Err(Error::Spec(format!("num_refinements = {num_refinements} is too large")));
        }
        Ok(Self {
            dim,
            lower_left,
            upper_right,
            num_elements,
            num_refinements,
        })
    }

    /// Reads `lower_left`, `upper_right`, `num_elements` and the optional
    /// `num_refinements` at length `dim`. `overlap` is ignored.
    pub fn from_config(cfg: &ConfigTree, dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Spec(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        let lower_left = cfg.get_vector("lower_left", dim)?;
        let upper_right = cfg.get_vector("upper_right", dim)?;
        let num_elements = cfg.get_count_vector("num_elements", dim)?;
        let num_refinements = cfg.get_count_or("num_refinements", 0)?;
        Self::new(lower_left, upper_right, num_elements, num_refinements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower_left(&self) -> &[f64] {
        &self.lower_left
    }

    pub fn upper_right(&self) -> &[f64] {
        &self.upper_right
    }

    pub fn num_elements(&self) -> &[usize] {
        &self.num_elements
    }

    pub fn num_refinements(&self) -> usize {
        self.num_refinements
    }

    /// Cells per direction on `level`.
    pub fn cells_per_direction(&self, level: usize) -> Vec<usize> {
        self.num_elements.iter().map(|n| n << level).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// The finest level.
    Leaf,
    Level(usize),
}

/// Owns a grid description and hands out views of its levels.
#[derive(Debug, Clone)]
pub struct GridProvider {
    spec: Arc<CubeGridSpec>,
}

impl GridProvider {
    pub fn new(spec: CubeGridSpec) -> Self {
        Self { spec: Arc::new(spec) }
    }

    pub fn spec(&self) -> &CubeGridSpec {
        &self.spec
    }

    pub fn max_level(&self) -> usize {
        self.spec.num_refinements
    }

    pub fn layer(&self, layer: Layer) -> Result<GridView> {
        let level = match layer {
            Layer::Leaf => self.spec.num_refinements,
            Layer::Level(l) if l <= self.spec.num_refinements => l,
            Layer::Level(l) => {
                return Err(Error::Usage(format!(
                    "level {l} exceeds the maximum level {}",
                    self.spec.num_refinements
                )))
            }
        };
        Ok(GridView::new(self.spec.clone(), level))
    }

    pub fn leaf_view(&self) -> GridView {
        GridView::new(self.spec.clone(), self.spec.num_refinements)
    }

    pub fn level_view(&self, level: usize) -> Result<GridView> {
        self.layer(Layer::Level(level))
    }
}

/// Default configuration of the cube provider. Four-entry lists serve any
/// dimension up to four through truncation.
pub fn cube_gridprovider_default_config() -> ConfigTree {
    ConfigTree::from_pairs([
        ("type", CUBE_PROVIDER_ID),
        ("lower_left", "[0 0 0 0]"),
        ("upper_right", "[1 1 1 1]"),
        ("num_elements", "[8 8 8 8]"),
        ("num_refinements", "0"),
        ("overlap", "[1 1 1 1]"),
    ])
    .expect("static default config is valid")
}

pub fn make_cube_grid(cfg: &ConfigTree, dim: usize) -> Result<GridProvider> {
    CubeGridSpec::from_config(cfg, dim).map(GridProvider::new)
}

/// Creates grid providers by type id.
pub struct GridProviderFactory;

impl GridProviderFactory {
    pub fn available() -> Vec<&'static str> {
        vec![CUBE_PROVIDER_ID]
    }

    pub fn default_config(type_id: &str) -> Result<ConfigTree> {
        match type_id {
            CUBE_PROVIDER_ID => Ok(cube_gridprovider_default_config()),
            other => Err(Self::unknown(other)),
        }
    }

    pub fn create(type_id: &str, cfg: &ConfigTree, dim: usize) -> Result<GridProvider> {
        match type_id {
            CUBE_PROVIDER_ID => make_cube_grid(cfg, dim),
            other => Err(Self::unknown(other)),
        }
    }

    fn unknown(id: &str) -> Error {
        Error::Factory {
            kind: "grid provider",
            id: id.to_string(),
            available: Self::available().into_iter().map(String::from).collect(),
        }
    }
}

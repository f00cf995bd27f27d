//! Axis-parallel structured grids: providers, level and periodic views,
//! point search, boundary classification and the functor walker.

pub mod boundary;
pub mod provider;
pub mod search;
pub mod view;
pub mod walker;

pub use boundary::{BoundaryInfo, BoundaryInfoFactory, BoundaryType};
pub use provider::{
    cube_gridprovider_default_config, make_cube_grid, CubeGridSpec, GridProvider, GridProviderFactory, Layer,
    CUBE_PROVIDER_ID,
};
pub use search::EntitySearch;
pub use view::{Entity, GridView, Intersection, Side};
pub use walker::{ApplyOn, ElementFunctor, IntersectionFunctor, Walker};

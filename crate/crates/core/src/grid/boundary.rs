use std::fmt;

use crate::common::float_cmp::{vector_eq, CompareStyle, Style};
use crate::common::ConfigTree;
use crate::error::{Error, Result};
use crate::grid::view::Intersection;

pub const ALL_DIRICHLET_ID: &str = "xt.grid.boundaryinfo.alldirichlet";
pub const ALL_NEUMANN_ID: &str = "xt.grid.boundaryinfo.allneumann";
pub const NORMAL_BASED_ID: &str = "xt.grid.boundaryinfo.normalbased";

/// Boundary category, compared by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryType {
    Dirichlet,
    Neumann,
    Robin,
    NoBoundary,
}

impl BoundaryType {
    pub fn id(&self) -> &'static str {
        match self {
            BoundaryType::Dirichlet => "dirichlet boundary",
            BoundaryType::Neumann => "neumann boundary",
            BoundaryType::Robin => "robin boundary",
            BoundaryType::NoBoundary => "no boundary",
        }
    }

    /// Short config name (`dirichlet`, `neumann`, `robin`).
    fn from_short(name: &str) -> Option<Self> {
        match name {
            "dirichlet" => Some(BoundaryType::Dirichlet),
            "neumann" => Some(BoundaryType::Neumann),
            "robin" => Some(BoundaryType::Robin),
            _ => None,
        }
    }
}

impl fmt::Display for BoundaryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Maps boundary intersections to boundary types.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryInfo {
    AllDirichlet,
    AllNeumann,
    /// Picks the first rule whose normal matches the intersection's unit
    /// outer normal, falling back to `default`.
    NormalBased {
        default: BoundaryType,
        rules: Vec<(BoundaryType, Vec<f64>)>,
        tolerance: f64,
    },
}

pub const DEFAULT_NORMAL_TOLERANCE: f64 = 1e-10;

impl BoundaryInfo {
    /// Normal-based info; rule normals are normalized here.
    pub fn normal_based(
        default: BoundaryType,
        rules: Vec<(BoundaryType, Vec<f64>)>,
        tolerance: f64,
    ) -> Result<Self> {
        if default == BoundaryType::NoBoundary {
            return Err(Error::Config("default boundary type must be a real boundary".into()));
        }
        if !(tolerance >= 0.0) {
            return Err(Error::Config(format!("tolerance must be nonnegative, got {tolerance}")));
        }
        let rules = rules
            .into_iter()
            .map(|(ty, n)| {
                let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
                if !(norm > 0.0) || !norm.is_finite() {
                    return Err(Error::Config(format!("boundary normal {n:?} must be nonzero and finite")));
                }
                Ok((ty, n.iter().map(|x| x / norm).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryInfo::NormalBased {
            default,
            rules,
            tolerance,
        })
    }

    pub fn boundary_type(&self, intersection: &Intersection) -> BoundaryType {
        if !intersection.boundary() {
            return BoundaryType::NoBoundary;
        }
        match self {
            BoundaryInfo::AllDirichlet => BoundaryType::Dirichlet,
            BoundaryInfo::AllNeumann => BoundaryType::Neumann,
            BoundaryInfo::NormalBased {
                default,
                rules,
                tolerance,
            } => {
                let normal = intersection.unit_outer_normal();
                let style = CompareStyle::new(Style::Absolute, *tolerance, 0.0).expect("validated tolerance");
                rules
                    .iter()
                    .find(|(_, n)| vector_eq(&normal, n, &style))
                    .map_or(*default, |(ty, _)| *ty)
            }
        }
    }
}

/// Creates boundary infos from configuration trees.
pub struct BoundaryInfoFactory;

impl BoundaryInfoFactory {
    pub fn available() -> Vec<&'static str> {
        vec![ALL_DIRICHLET_ID, ALL_NEUMANN_ID, NORMAL_BASED_ID]
    }

    pub fn create(cfg: &ConfigTree) -> Result<BoundaryInfo> {
        let type_id = cfg.get_str("type")?;
        match type_id {
            ALL_DIRICHLET_ID => Ok(BoundaryInfo::AllDirichlet),
            ALL_NEUMANN_ID => Ok(BoundaryInfo::AllNeumann),
            NORMAL_BASED_ID => {
                let default_name = cfg.get_str("default")?;
                let default = BoundaryType::from_short(default_name).ok_or_else(|| {
                    Error::Config(format!(
                        "'default' must be one of dirichlet, neumann, robin; got '{default_name}'"
                    ))
                })?;
                let tolerance = cfg.get_real_or("tolerance", DEFAULT_NORMAL_TOLERANCE)?;
                let mut rules = Vec::new();
                for name in ["dirichlet", "neumann", "robin"] {
                    let ty = BoundaryType::from_short(name).expect("known name");
                    for k in 0.. {
                        let key = format!("{name}.{k}");
                        if !cfg.has_key(&key) {
                            break;
                        }
                        rules.push((ty, cfg.get_vector(&key, 0)?));
                    }
                }
                BoundaryInfo::normal_based(default, rules, tolerance)
            }
            other => Err(Error::Factory {
                kind: "boundary info",
                id: other.to_string(),
                available: Self::available().into_iter().map(String::from).collect(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::provider::{CubeGridSpec, GridProvider};
    use crate::grid::view::{GridView, Side};

    fn problem_cfg() -> ConfigTree {
        ConfigTree::from_pairs([
            ("type", NORMAL_BASED_ID),
            ("default", "dirichlet"),
            ("neumann.0", "[ 1. 0.]"),
            ("neumann.1", "[-1. 0.]"),
        ])
        .unwrap()
    }

    fn square() -> GridView {
        GridProvider::new(CubeGridSpec::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![2, 2], 0).unwrap()).leaf_view()
    }

    fn find(view: &GridView, dir: usize, side: Side) -> Intersection {
        view.cells()
            .flat_map(|c| view.intersections(&c))
            .find(|i| i.boundary() && i.direction == dir && i.side == side)
            .unwrap()
    }

    #[test]
    fn normal_based_classification() {
        let info = BoundaryInfoFactory::create(&problem_cfg()).unwrap();
        let v = square();
        assert_eq!(info.boundary_type(&find(&v, 0, Side::Low)), BoundaryType::Neumann);
        assert_eq!(info.boundary_type(&find(&v, 0, Side::High)), BoundaryType::Neumann);
        assert_eq!(info.boundary_type(&find(&v, 1, Side::Low)).id(), "dirichlet boundary");
        assert_eq!(info.boundary_type(&find(&v, 1, Side::High)), BoundaryType::Dirichlet);
    }

    #[test]
    fn interior_is_no_boundary() {
        let v = square();
        let inner = v.intersections(&v.cell(0).unwrap())[1];
        assert_eq!(BoundaryInfo::AllNeumann.boundary_type(&inner), BoundaryType::NoBoundary);
        let p = v.periodic(&[true, false]).unwrap();
        let wrap = p.intersections(&p.cell(0).unwrap())[0];
        assert_eq!(BoundaryInfo::AllDirichlet.boundary_type(&wrap), BoundaryType::NoBoundary);
    }

    #[test]
    fn unnormalized_rule_normals_match() {
        let info = BoundaryInfo::normal_based(BoundaryType::Dirichlet, vec![(BoundaryType::Robin, vec![0.0, 5.0])], 1e-10)
            .unwrap();
        assert_eq!(info.boundary_type(&find(&square(), 1, Side::High)), BoundaryType::Robin);
    }

    #[test]
    fn factory_errors() {
        let bad = ConfigTree::from_pairs([("type", "xt.grid.boundaryinfo.nope")]).unwrap();
        assert!(matches!(BoundaryInfoFactory::create(&bad), Err(Error::Factory { .. })));
        let mut zero = problem_cfg();
        zero.set("neumann.2", "[0 0]").unwrap();
        assert!(matches!(BoundaryInfoFactory::create(&zero), Err(Error::Config(_))));
        let all = ConfigTree::from_pairs([("type", ALL_NEUMANN_ID)]).unwrap();
        assert_eq!(BoundaryInfoFactory::create(&all).unwrap(), BoundaryInfo::AllNeumann);
    }
}

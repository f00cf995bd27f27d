use std::sync::Arc;

use crate::common::{parse_matrix, ConfigTree, Value};
use crate::error::{Error, Result};
use crate::functions::checkerboard::CheckerboardFunction;
use crate::functions::constant::ConstantFunction;
use crate::functions::expression::split_expression_list;
use crate::functions::expression_function::ExpressionFunction;
use crate::functions::interfaces::FunctionRef;

pub const CONSTANT_ID: &str = "xt.functions.constant";
pub const CHECKERBOARD_ID: &str = "xt.functions.checkerboard";
pub const EXPRESSION_ID: &str = "xt.functions.expression";

/// Creates functions from configuration trees.
///
/// * constant: `value`
/// * checkerboard: `lower_left`, `upper_right`, `num_elements`, `values`
/// * expression: `variable` (default `x`), `order`, `expression` and
///   optionally `gradient.0`, `gradient.1`, ... (one per component)
///
/// Each accepts an optional `name`.
pub struct FunctionsFactory;

fn constant_value(text: &str) -> Result<Value> {
    let rows = parse_matrix(text, 0, 0)?;
    Ok(match rows.as_slice() {
        [row] if row.len() == 1 => Value::Scalar(row[0]),
        [row] if !text.contains(';') => Value::Vector(row.clone()),
        _ => Value::Matrix(rows),
    })
}

fn named<T>(cfg: &ConfigTree, f: T, with_name: impl FnOnce(T, String) -> T) -> Result<T> {
    Ok(match cfg.get_str("name") {
        Ok(name) => with_name(f, name.to_string()),
        Err(_) => f,
    })
}

impl FunctionsFactory {
    pub fn available() -> Vec<&'static str> {
        vec![CHECKERBOARD_ID, CONSTANT_ID, EXPRESSION_ID]
    }

    /// A sample configuration for `type_id`.
    pub fn default_config(type_id: &str) -> Result<ConfigTree> {
        let pairs: Vec<(&str, &str)> = match type_id {
            CONSTANT_ID => vec![("value", "[1. 0.; 0. 1.]")],
            CHECKERBOARD_ID => vec![
                ("lower_left", "[0. 0.]"),
                ("upper_right", "[1. 1.]"),
                ("num_elements", "[2 2]"),
                ("values", "[1. 2. 3. 4.]"),
            ],
            EXPRESSION_ID => vec![
                ("variable", "x"),
                ("order", "3"),
                ("expression", "[x[0] sin(x[1])]"),
                ("gradient.0", "[1 0]"),
                ("gradient.1", "[0 cos(x[1])]"),
            ],
            other => return Err(Self::unknown(other)),
        };
        ConfigTree::from_pairs(pairs)
    }

    fn unknown(type_id: &str) -> Error {
        Error::Factory {
            kind: "function type",
            id: type_id.to_string(),
            available: Self::available().into_iter().map(String::from).collect(),
        }
    }

    /// Creates a function of domain dimension `dim`.
    pub fn create(type_id: &str, cfg: &ConfigTree, dim: usize) -> Result<FunctionRef> {
        match type_id {
            CONSTANT_ID => {
                let value = constant_value(cfg.get_str("value")?).map_err(|e| e.with_key("value"))?;
                let f = ConstantFunction::new(dim, value).map_err(|e| e.with_key("value"))?;
                Ok(Arc::new(named(cfg, f, ConstantFunction::with_name)?))
            }
            CHECKERBOARD_ID => {
                let lower_left = cfg.get_vector("lower_left", dim)?;
                let upper_right = cfg.get_vector("upper_right", dim)?;
                let num_elements = cfg.get_count_vector("num_elements", dim)?;
                let count = num_elements.iter().product();
                let values = cfg.get_vector("values", count)?;
                let f = CheckerboardFunction::new(lower_left, upper_right, num_elements, values)?;
                Ok(Arc::new(named(cfg, f, CheckerboardFunction::with_name)?))
            }
            EXPRESSION_ID => {
                let variable = cfg.get_str("variable").unwrap_or("x");
                let order = cfg.get_count("order")?;
                let expression = cfg.get_str("expression")?;
                let components =
                    split_expression_list(expression).map_err(|e| e.with_key("expression"))?;
                let gradients = if cfg.has_sub("gradient") {
                    let rows = (0..components.len())
                        .map(|i| cfg.get_str(&format!("gradient.{i}")).map(String::from))
                        .collect::<Result<Vec<_>>>()?;
                    Some(rows)
                } else {
                    None
                };
                let f = ExpressionFunction::from_lists(dim, variable, order, expression, gradients.as_deref())
                    .map_err(|e| e.with_key("expression"))?;
                Ok(Arc::new(named(cfg, f, ExpressionFunction::with_name)?))
            }
            other => Err(Self::unknown(other)),
        }
    }
}

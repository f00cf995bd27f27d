//! Foundation layer: value grammar, configuration trees, approximate float
//! comparison and timing sections.

pub mod config;
pub mod float_cmp;
pub mod timings;
pub mod value;

pub use config::ConfigTree;
pub use float_cmp::{float_compare, vector_eq, CompareStyle, Comparison, Style};
pub use timings::{timings, ScopedTiming, Timings};
pub use value::{
    format_matrix, format_scalar, format_value, format_vector, parse_matrix, parse_vector, Element, Value,
    ValueKind,
};

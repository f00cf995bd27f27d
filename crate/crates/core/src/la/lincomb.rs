use crate::error::{Error, Result};
use crate::la::container::Container;

/// `sum_q coefficients[q] * components[q]`.
///
/// The result starts as a shallow copy of the first component, so exactly one
/// deep copy happens, when it is first scaled.
pub fn assemble_lincomb<C: Container>(components: &[C], coefficients: &[f64]) -> Result<C> {
    if components.is_empty() {
        return Err(Error::Usage("linear combination of zero components".into()));
    }
    if components.len() != coefficients.len() {
        return Err(Error::Shape(format!(
            "{} components but {} coefficients",
            components.len(),
            coefficients.len()
        )));
    }
    let mut result = components[0].copy();
    result.scal(coefficients[0]);
    for (component, theta) in components.iter().zip(coefficients).skip(1) {
        result.axpy(*theta, component)?;
    }
    Ok(result)
}

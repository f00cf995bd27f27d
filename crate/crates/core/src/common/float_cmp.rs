//! Approximate floating point comparison.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// `|a - b| <= eps_abs`
    Absolute,
    /// `|a - b| <= eps_rel * max(|a|, |b|)`
    RelativeWeak,
    /// `|a - b| <= eps_rel * min(|a|, |b|)`
    RelativeStrong,
    /// `|a - b| <= eps_abs + eps_rel * |b|`, not symmetric in `a` and `b`.
    Numpy,
}

/// A comparison style together with its tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareStyle {
    style: Style,
    eps_abs: f64,
    eps_rel: f64,
}

const DEFAULT_MACHINE_TOL: f64 = 8.0 * f64::EPSILON;

impl CompareStyle {
    pub fn new(style: Style, eps_abs: f64, eps_rel: f64) -> Result<Self> {
        if !(eps_abs >= 0.0) || !(eps_rel >= 0.0) {
            return Err(Error::Usage(format!(
                "tolerances must be nonnegative (eps_abs = {eps_abs}, eps_rel = {eps_rel})"
            )));
        }
        Ok(Self {
            style,
            eps_abs,
            eps_rel,
        })
    }

    /// `numpy.isclose` defaults: `eps_abs = 1e-8`, `eps_rel = 1e-5`.
    pub fn numpy() -> Self {
        Self {
            style: Style::Numpy,
            eps_abs: 1e-8,
            eps_rel: 1e-5,
        }
    }

    pub fn absolute() -> Self {
        Self {
            style: Style::Absolute,
            eps_abs: DEFAULT_MACHINE_TOL,
            eps_rel: 0.0,
        }
    }

    pub fn relative_weak() -> Self {
        Self {
            style: Style::RelativeWeak,
            eps_abs: 0.0,
            eps_rel: DEFAULT_MACHINE_TOL,
        }
    }

    pub fn relative_strong() -> Self {
        Self {
            style: Style::RelativeStrong,
            eps_abs: 0.0,
            eps_rel: DEFAULT_MACHINE_TOL,
        }
    }

    pub fn style(&self) -> Style {
        self.style
    }

    pub fn eps_abs(&self) -> f64 {
        self.eps_abs
    }

    pub fn eps_rel(&self) -> f64 {
        self.eps_rel
    }

    fn equal(&self, a: f64, b: f64) -> bool {
        let diff = (a - b).abs();
        match self.style {
            Style::Absolute => diff <= self.eps_abs,
            Style::RelativeWeak => diff <= self.eps_rel * a.abs().max(b.abs()),
            Style::RelativeStrong => diff <= self.eps_rel * a.abs().min(b.abs()),
            Style::Numpy => diff <= self.eps_abs + self.eps_rel * b.abs(),
        }
    }
}

impl Default for CompareStyle {
    fn default() -> Self {
        Self::numpy()
    }
}

/// Outcome of comparing two reals under a [`CompareStyle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    equal: bool,
    greater: bool,
    less: bool,
    unordered: bool,
}

impl Comparison {
    pub fn eq(&self) -> bool {
        self.equal
    }

    pub fn ne(&self) -> bool {
        !self.equal
    }

    pub fn gt(&self) -> bool {
        self.greater && !self.equal
    }

    pub fn lt(&self) -> bool {
        self.less && !self.equal
    }

    pub fn ge(&self) -> bool {
        !self.unordered && (self.greater || self.equal)
    }

    pub fn le(&self) -> bool {
        !self.unordered && (self.less || self.equal)
    }
}

/// Compares `a` against `b`. A NaN on either side is unequal and unordered.
pub fn float_compare(a: f64, b: f64, style: &CompareStyle) -> Comparison {
    if a.is_nan() || b.is_nan() {
        return Comparison {
            equal: false,
            greater: false,
            less: false,
            unordered: true,
        };
    }
    Comparison {
        equal: style.equal(a, b),
        greater: a > b,
        less: a < b,
        unordered: false,
    }
}

pub fn eq(a: f64, b: f64, style: &CompareStyle) -> bool {
    float_compare(a, b, style).eq()
}

pub fn ne(a: f64, b: f64, style: &CompareStyle) -> bool {
    float_compare(a, b, style).ne()
}

/// Componentwise equality; vectors of different length are never equal.
pub fn vector_eq(a: &[f64], b: &[f64], style: &CompareStyle) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| eq(*x, *y, style))
}

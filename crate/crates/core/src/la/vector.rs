use std::fmt;

use crate::error::{Error, Result};
use crate::la::container::{Container, Cow};

/// A dense vector of reals with copy-on-write storage.
#[derive(Debug)]
pub struct DenseVector {
    data: Cow<Vec<f64>>,
}

impl DenseVector {
    pub fn new(size: usize, value: f64) -> Self {
        Self::from_vec(vec![value; size])
    }

    pub fn zeros(size: usize) -> Self {
        Self::new(size, 0.0)
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        Self { data: Cow::new(values) }
    }

    pub fn size(&self) -> usize {
        self.data.get().len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.data.get()
    }

    /// Mutable access to the entries, making the storage unique first.
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        self.data.get_mut()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.size() {
            Ok(())
        } else {
            Err(Error::Index {
                index: i,
                size: self.size(),
            })
        }
    }

    fn check_size(&self, other: &DenseVector) -> Result<()> {
        if self.size() == other.size() {
            Ok(())
        } else {
            Err(Error::Shape(format!("vector sizes {} and {} differ", self.size(), other.size())))
        }
    }

    pub fn get_entry(&self, i: usize) -> Result<f64> {
        self.check(i)?;
        Ok(self.as_slice()[i])
    }

    pub fn set_entry(&mut self, i: usize, value: f64) -> Result<()> {
        self.check(i)?;
        self.as_mut_slice()[i] = value;
        Ok(())
    }

    pub fn add_to_entry(&mut self, i: usize, value: f64) -> Result<()> {
        self.check(i)?;
        self.as_mut_slice()[i] += value;
        Ok(())
    }

    pub fn dot(&self, other: &DenseVector) -> Result<f64> {
        self.check_size(other)?;
        Ok(self.as_slice().iter().zip(other.as_slice()).map(|(a, b)| a * b).sum())
    }

    pub fn l1_norm(&self) -> f64 {
        self.as_slice().iter().map(|x| x.abs()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Arithmetic mean; NaN for an empty vector.
    pub fn mean(&self) -> f64 {
        self.as_slice().iter().sum::<f64>() / self.size() as f64
    }

    /// Population standard deviation `sqrt(mean((x - mean)^2))`.
    pub fn standard_deviation(&self) -> f64 {
        let mean = self.mean();
        let var = self.as_slice().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / self.size() as f64;
        var.sqrt()
    }

    pub fn has_inf_or_nan(&self) -> bool {
        self.as_slice().iter().any(|x| !x.is_finite())
    }
}

impl Container for DenseVector {
    fn copy(&self) -> Self {
        Self { data: self.data.share() }
    }

    fn scal(&mut self, alpha: f64) {
        for x in self.as_mut_slice() {
            *x *= alpha;
        }
    }

    fn axpy(&mut self, alpha: f64, other: &Self) -> Result<()> {
        self.check_size(other)?;
        for (x, y) in self.data.get_mut().iter_mut().zip(other.as_slice()) {
            *x += alpha * y;
        }
        Ok(())
    }

    fn share_count(&self) -> usize {
        self.data.share_count()
    }

    fn deep_copies(&self) -> usize {
        self.data.deep_copies()
    }
}

impl Clone for DenseVector {
    fn clone(&self) -> Self {
        self.copy()
    }
}

impl PartialEq for DenseVector {
    fn eq(&self, other: &Self) -> bool {
        self.as_slice() == other.as_slice()
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(v: Vec<f64>) -> Self {
        Self::from_vec(v)
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl fmt::Display for DenseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::common::format_vector(self.as_slice()))
    }
}

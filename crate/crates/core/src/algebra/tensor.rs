use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::error::{Error, Result};

/// A `d × d × … × d` tensor of order `level`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor<T> {
    dim: usize,
    level: usize,
    entries: Vec<T>,
}

impl<T: Clone + Zero> DenseTensor<T> {
    pub fn zeros(dim: usize, level: usize) -> Self {
        assert!(dim > 0, "tensor dimension must be positive");
        DenseTensor {
            dim,
            level,
            entries: vec![T::zero(); dim.pow(level as u32)],
        }
    }

    pub fn from_entries(dim: usize, level: usize, entries: Vec<T>) -> Result<Self> {
        if dim == 0 || entries.len() != dim.pow(level as u32) {
            return Err(Error::invalid(format!(
                "expected {}^{} entries, got {}",
                dim,
                level,
                entries.len()
            )));
        }
        Ok(DenseTensor {
            dim,
            level,
            entries,
        })
    }

    /// Order-0 tensor holding one scalar.
    pub fn scalar(dim: usize, value: T) -> Self {
        DenseTensor {
            dim,
            level: 0,
            entries: vec![value],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        assert_eq!(
            index.len(),
            self.level,
            "index length must equal tensor level"
        );
        index.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "index out of range");
            acc * self.dim + i
        })
    }

    pub fn get(&self, index: &[usize]) -> &T {
        &self.entries[self.flat_index(index)]
    }

    pub fn set(&mut self, index: &[usize], value: T) {
        let k = self.flat_index(index);
        self.entries[k] = value;
    }

    /// Nested rows for display: level 0 is a bare scalar, level k a k-deep array.
    pub fn to_nested<U>(&self, f: impl Fn(&T) -> U + Copy) -> serde_json::Value
    where
        U: Into<serde_json::Value>,
    {
        fn build<T, U: Into<serde_json::Value>>(
            entries: &[T],
            dim: usize,
            level: usize,
            f: impl Fn(&T) -> U + Copy,
        ) -> serde_json::Value {
            if level == 0 {
                return f(&entries[0]).into();
            }
            let stride = entries.len() / dim;
            serde_json::Value::Array(
                (0..dim)
                    .map(|i| build(&entries[i * stride..(i + 1) * stride], dim, level - 1, f))
                    .collect(),
            )
        }
        build(&self.entries, self.dim, self.level, f)
    }
}

impl<T> DenseTensor<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Tensor (outer) product; levels add.
    pub fn outer(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        DenseTensor {
            dim: self.dim,
            level: self.level + other.level,
            entries,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(
            (self.dim, self.level),
            (other.dim, other.level),
            "shape mismatch"
        );
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = a.clone() + b.clone();
        }
    }
}

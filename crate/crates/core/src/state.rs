//! Discrete states: a flat array of nodal values tagged with the grid it lives on.

use std::fmt;

use crate::error::{Error, Result};

/// Spatial layout of a [`StateVector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grid {
    /// A single unknown (scalar ODE).
    Scalar,
    /// `interior` unknowns of a 1D grid with Dirichlet boundary values removed.
    Interior1d { interior: usize },
    /// `m × m` periodic grid, stored row-major with the x index outermost.
    Periodic2d { m: usize },
    /// An unstructured vector of the given length.
    Flat { len: usize },
}

impl Grid {
    pub fn len(&self) -> usize {
        match *self {
            Grid::Scalar => 1,
            Grid::Interior1d { interior } => interior,
            Grid::Periodic2d { m } => m * m,
            Grid::Flat { len } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Scalar => write!(f, "scalar"),
            Grid::Interior1d { interior } => write!(f, "1d[{interior}]"),
            Grid::Periodic2d { m } => write!(f, "periodic2d[{m}x{m}]"),
            Grid::Flat { len } => write!(f, "flat[{len}]"),
        }
    }
}

/// An element of the discrete space H.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    values: Vec<f64>,
    grid: Grid,
}

impl StateVector {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.to_string(),
                found: format!("{} values", values.len()),
            });
        }
        Ok(Self { values, grid })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self {
            values: vec![value],
            grid: Grid::Scalar,
        }
    }

    pub fn from_fn(grid: Grid, f: impl FnMut(usize) -> f64) -> Self {
        Self {
            values: (0..grid.len()).map(f).collect(),
            grid,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// Value of a [`Grid::Scalar`] state (first entry otherwise).
    pub fn value(&self) -> f64 {
        self.values[0]
    }

    pub fn ensure_conformable(&self, other: &StateVector) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch {
                expected: self.grid.to_string(),
                found: other.grid.to_string(),
            });
        }
        Ok(())
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.grid)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            grid: self.grid,
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        self.map(|v| alpha * v)
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: f64, x: &StateVector) -> Result<()> {
        self.ensure_conformable(x)?;
        for (y, &xv) in self.values.iter_mut().zip(&x.values) {
            *y += alpha * xv;
        }
        Ok(())
    }

    /// `alpha * x + beta * y`
    pub fn lin_comb(alpha: f64, x: &StateVector, beta: f64, y: &StateVector) -> Result<Self> {
        x.ensure_conformable(y)?;
        Ok(Self {
            values: x
                .values
                .iter()
                .zip(&y.values)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
            grid: x.grid,
        })
    }

    pub fn sub(&self, other: &StateVector) -> Result<Self> {
        Self::lin_comb(1.0, self, -1.0, other)
    }

    pub fn add(&self, other: &StateVector) -> Result<Self> {
        Self::lin_comb(1.0, self, 1.0, other)
    }

    /// Euclidean dot product of the raw values (no quadrature weights).
    pub fn dot(&self, other: &StateVector) -> Result<f64> {
        self.ensure_conformable(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

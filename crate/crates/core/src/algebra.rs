//! Finite-dimensional C*-algebras as direct sums of full complex matrix
//! blocks, with their arithmetic, involution, norm, and positivity order.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::{hermitian_eigen, spectral_norm};
use crate::error::{Error, Result};

/// Shape of a finite-dimensional C*-algebra: one square matrix block per
/// entry of `block_dims`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

impl AlgebraShape {
    /// At least one block, every block of positive dimension.
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidInput(
                "algebra shape needs at least one block".into(),
            ));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidInput(
                "algebra blocks must have positive dimension".into(),
            ));
        }
        Ok(AlgebraShape { block_dims })
    }

    /// The scalars: a single 1x1 block.
    pub fn scalar() -> Self {
        AlgebraShape {
            block_dims: vec![1],
        }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    pub fn block_dim(&self, b: usize) -> usize {
        self.block_dims[b]
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.block_dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Relative/absolute pair used by every approximate comparison in the crate.
///
/// A comparison at scale `s` uses the threshold `max(abs, rel * s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        // Written to reject NaN as well.
        if rel.is_nan() || rel <= 0.0 || abs.is_nan() || abs < 0.0 {
            return Err(Error::InvalidInput(format!(
                "tolerance must satisfy rel > 0 and abs >= 0, got rel={rel}, abs={abs}"
            )));
        }
        Ok(Tolerance { rel, abs })
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

/// An element of the algebra: one complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<DMatrix<Complex64>>,
}

impl AlgebraElement {
    pub fn from_blocks(shape: AlgebraShape, blocks: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} blocks, got {}",
                shape.block_count(),
                blocks.len()
            )));
        }
        for (b, m) in blocks.iter().enumerate() {
            let d = shape.block_dim(b);
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::InvalidInput(format!(
                    "block {b} must be {d}x{d}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(AlgebraElement { shape, blocks })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&d| DMatrix::zeros(d, d))
            .collect();
        AlgebraElement {
            shape: shape.clone(),
            blocks,
        }
    }

    /// The unit of the algebra: identity in every block.
    pub fn one(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&d| DMatrix::identity(d, d))
            .collect();
        AlgebraElement {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Matrix unit `E_ij` in block `b`, zero in every other block.
    pub fn matrix_unit(shape: &AlgebraShape, b: usize, i: usize, j: usize) -> Self {
        let mut e = AlgebraElement::zero(shape);
        e.blocks[b][(i, j)] = Complex64::new(1.0, 0.0);
        e
    }

    /// Element of a shape with all blocks 1x1, one scalar per block.
    pub fn from_scalars(shape: &AlgebraShape, values: &[Complex64]) -> Result<Self> {
        if shape.block_dims().iter().any(|&d| d != 1) {
            return Err(Error::InvalidInput(
                "from_scalars requires all blocks of dimension 1".into(),
            ));
        }
        if values.len() != shape.block_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} scalars, got {}",
                shape.block_count(),
                values.len()
            )));
        }
        let blocks = values
            .iter()
            .map(|&z| DMatrix::from_element(1, 1, z))
            .collect();
        Ok(AlgebraElement {
            shape: shape.clone(),
            blocks,
        })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &DMatrix<Complex64> {
        &self.blocks[b]
    }

    fn check_shape(&self, other: &AlgebraElement) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                left: self.shape.to_string(),
                right: other.shape.to_string(),
            });
        }
        Ok(())
    }

    /// Blockwise matrix product.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_shape(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a * b)
            .collect();
        Ok(AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_shape(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_shape(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a - b)
            .collect();
        Ok(AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        })
    }

    pub fn scale(&self, c: Complex64) -> AlgebraElement {
        let blocks = self.blocks.iter().map(|m| m * c).collect();
        AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// The involution: blockwise conjugate transpose.
    pub fn star(&self) -> AlgebraElement {
        let blocks = self.blocks.iter().map(|m| m.adjoint()).collect();
        AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// The C*-norm: maximum over blocks of the largest singular value.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// Positivity in the C*-order: Hermitian within tolerance and with no
    /// eigenvalue below `-max(abs, rel * |a|)`.
    pub fn is_positive(&self, tol: &Tolerance) -> bool {
        let tau = tol.threshold(self.norm());
        if self.sub(&self.star()).map(|d| d.norm()).unwrap_or(f64::MAX) > tau {
            return false;
        }
        for m in &self.blocks {
            let herm = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            });
            let eig = hermitian_eigen(&herm);
            if let Some(&min) = eig.values.first() {
                if min < -tau {
                    return false;
                }
            }
        }
        true
    }

    /// Distance in the C*-norm; shape mismatch reads as infinitely far apart.
    pub fn distance(&self, other: &AlgebraElement) -> f64 {
        match self.sub(other) {
            Ok(d) => d.norm(),
            Err(_) => f64::INFINITY,
        }
    }
}

//! Cochain complexes of free Hilbert modules: validation of the complex
//! condition, out-of-range conventions, and degreewise Laplacians.

use crate::algebra::{AlgebraShape, Tolerance};
use crate::error::{Error, Result};
use crate::module::ModuleSpace;
use crate::operator::Morphism;

/// A finite complex C^0 -> C^1 -> ... -> C^N with differentials
/// d_k: C^k -> C^(k+1) satisfying d_(k+1) d_k = 0 within tolerance.
/// Degrees outside 0..=N read as the zero module with zero maps.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    spaces: Vec<ModuleSpace>,
    differentials: Vec<Morphism>,
    tolerance: Tolerance,
}

impl CochainComplex {
    /// Validates shapes, chaining, and the complex condition
    /// ||d_(k+1) d_k|| <= max(abs, rel * (1 + ||d_(k+1)|| ||d_k||)).
    pub fn new(
        spaces: Vec<ModuleSpace>,
        differentials: Vec<Morphism>,
        tolerance: Tolerance,
    ) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::InvalidInput(
                "a complex needs at least one cochain space".into(),
            ));
        }
        let shape = spaces[0].shape().clone();
        for (k, s) in spaces.iter().enumerate() {
            if s.shape() != &shape {
                return Err(Error::InvalidInput(format!(
                    "cochain space {k} has shape {}, expected {}",
                    s.shape(),
                    shape
                )));
            }
        }
        if differentials.len() + 1 != spaces.len() {
            return Err(Error::InvalidInput(format!(
                "{} spaces need {} differentials, got {}",
                spaces.len(),
                spaces.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source() != &spaces[k] || d.target() != &spaces[k + 1] {
                return Err(Error::MorphismMismatch {
                    op: "cochain differential",
                    detail: format!(
                        "d_{k} maps {} -> {}, expected {} -> {}",
                        d.source(),
                        d.target(),
                        spaces[k],
                        spaces[k + 1]
                    ),
                });
            }
        }
        for k in 0..differentials.len().saturating_sub(1) {
            let residual = differentials[k + 1].compose(&differentials[k])?.op_norm();
            let bound = tolerance
                .threshold(1.0 + differentials[k + 1].op_norm() * differentials[k].op_norm());
            if residual > bound {
                return Err(Error::NotAComplex {
                    degree: k,
                    degree_next: k + 1,
                    residual,
                    tol: bound,
                });
            }
        }
        Ok(CochainComplex {
            spaces,
            differentials,
            tolerance,
        })
    }

    /// Builds the complex out of consecutive differentials, inferring the
    /// cochain spaces from their sources and targets.
    pub fn from_differentials(differentials: Vec<Morphism>, tolerance: Tolerance) -> Result<Self> {
        if differentials.is_empty() {
            return Err(Error::InvalidInput(
                "from_differentials needs at least one differential".into(),
            ));
        }
        let mut spaces = vec![differentials[0].source().clone()];
        for d in &differentials {
            spaces.push(d.target().clone());
        }
        CochainComplex::new(spaces, differentials, tolerance)
    }

    /// Complex with a single space and no differentials.
    pub fn single(space: ModuleSpace, tolerance: Tolerance) -> Self {
        CochainComplex {
            spaces: vec![space],
            differentials: Vec::new(),
            tolerance,
        }
    }

    /// Top degree N; the complex has N+1 cochain spaces.
    pub fn length(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn degree_count(&self) -> usize {
        self.spaces.len()
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.spaces[0].shape()
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tolerance
    }

    pub fn spaces(&self) -> &[ModuleSpace] {
        &self.spaces
    }

    pub fn differentials(&self) -> &[Morphism] {
        &self.differentials
    }

    fn zero_space(&self) -> ModuleSpace {
        ModuleSpace::new(self.shape().clone(), 0)
    }

    /// C^k, the zero module above the top degree.
    pub fn space(&self, k: usize) -> ModuleSpace {
        self.spaces
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.zero_space())
    }

    /// d_k: C^k -> C^(k+1); the zero map wherever either side is out of
    /// range.
    pub fn differential(&self, k: usize) -> Morphism {
        if k < self.differentials.len() {
            self.differentials[k].clone()
        } else {
            Morphism::zero(&self.space(k), &self.space(k + 1))
        }
    }

    /// d_(k-1): C^(k-1) -> C^k; at k = 0 the zero map out of the zero
    /// module.
    pub fn incoming_differential(&self, k: usize) -> Morphism {
        if k == 0 {
            Morphism::zero(&self.zero_space(), &self.space(0))
        } else {
            self.differential(k - 1)
        }
    }

    /// L_k = d_k* d_k + d_(k-1) d_(k-1)*, with the out-of-range terms zero,
    /// so L_0 = d_0* d_0 and L_N = d_(N-1) d_(N-1)*.
    pub fn laplacian(&self, k: usize) -> Result<Morphism> {
        if k >= self.degree_count() {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                length: self.length(),
            });
        }
        let d_k = self.differential(k);
        let d_in = self.incoming_differential(k);
        let down = d_k.adjoint().compose(&d_k)?;
        let up = d_in.compose(&d_in.adjoint())?;
        down.add(&up)
    }

    /// All Laplacians L_0..L_N in degree order.
    pub fn laplacians(&self) -> Result<Vec<Morphism>> {
        (0..self.degree_count())
            .map(|k| self.laplacian(k))
            .collect()
    }

    /// ||d_(k+1) d_k|| for k = 0..N-2, the complex-condition residuals.
    pub fn d_square_norms(&self) -> Vec<f64> {
        (0..self.differentials.len().saturating_sub(1))
            .map(|k| {
                self.differentials[k + 1]
                    .compose(&self.differentials[k])
                    .map(|m| m.op_norm())
                    .unwrap_or(f64::INFINITY)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn scalar_space(rank: usize) -> ModuleSpace {
        ModuleSpace::new(AlgebraShape::scalar(), rank)
    }

    fn scalar_morphism(rows: usize, cols: usize, vals: &[f64]) -> Morphism {
        let source = scalar_space(cols);
        let target = scalar_space(rows);
        Morphism::from_entry_fn(&source, &target, |j, k| {
            AlgebraElement::from_scalars(source.shape(), &[c(vals[j * cols + k])]).unwrap()
        })
    }

    #[test]
    fn rejects_non_complex() {
        // d_1 d_0 = 1 is as far from a complex as it gets.
        let d0 = scalar_morphism(1, 1, &[1.0]);
        let d1 = scalar_morphism(1, 1, &[1.0]);
        let err = CochainComplex::from_differentials(vec![d0, d1], Tolerance::default());
        assert!(matches!(err, Err(Error::NotAComplex { degree: 0, .. })));
    }

    #[test]
    fn accepts_shift_complex_and_builds_laplacians() {
        // 0 -> A^2 -> A^2 -> 0 with the nilpotent shift.
        let shift = scalar_morphism(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let complex = CochainComplex::from_differentials(
            vec![shift.clone(), shift.compose(&shift).unwrap()],
            Tolerance::default(),
        );
        // shift^2 = 0 so the pair (shift, 0) chains.
        let complex = complex.unwrap();
        assert_eq!(complex.length(), 2);

        let l0 = complex.laplacian(0).unwrap();
        let l1 = complex.laplacian(1).unwrap();
        // L_0 = d_0* d_0 = diag(0, 1); L_1 = d_1* d_1 + d_0 d_0* = diag(1, 0).
        assert!(l0.distance(&scalar_morphism(2, 2, &[0.0, 0.0, 0.0, 1.0])) < 1e-14);
        assert!(l1.distance(&scalar_morphism(2, 2, &[1.0, 0.0, 0.0, 0.0])) < 1e-14);
    }

    #[test]
    fn out_of_range_conventions() {
        let space = scalar_space(3);
        let complex = CochainComplex::single(space.clone(), Tolerance::default());
        assert_eq!(complex.length(), 0);
        assert_eq!(complex.space(5).rank(), 0);

        let d0 = complex.differential(0);
        assert_eq!(d0.source(), &space);
        assert_eq!(d0.target().rank(), 0);
        assert!(d0.op_norm() < 1e-15);

        let dm1 = complex.incoming_differential(0);
        assert_eq!(dm1.source().rank(), 0);
        assert_eq!(dm1.target(), &space);

        // Single space: L_0 = 0.
        let l0 = complex.laplacian(0).unwrap();
        assert!(l0.op_norm() < 1e-15);
        assert!(matches!(
            complex.laplacian(1),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_differentials_give_zero_laplacians() {
        let spaces = vec![scalar_space(2), scalar_space(3), scalar_space(1)];
        let diffs = vec![
            Morphism::zero(&spaces[0], &spaces[1]),
            Morphism::zero(&spaces[1], &spaces[2]),
        ];
        let complex = CochainComplex::new(spaces, diffs, Tolerance::default()).unwrap();
        for l in complex.laplacians().unwrap() {
            assert!(l.op_norm() < 1e-15);
        }
        assert!(complex.d_square_norms().iter().all(|&r| r == 0.0));
    }
}

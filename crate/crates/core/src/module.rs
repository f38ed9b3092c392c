//! Free Hilbert modules A^n over a finite-dimensional C*-algebra: the
//! A-valued product, induced norm, right action, and projector-based
//! submodules and quotients.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraShape, Tolerance};
use crate::error::{Error, Result};
use crate::operator::Morphism;

/// The free module A^rank. Rank 0 is the zero module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleSpace {
    shape: AlgebraShape,
    rank: usize,
}

impl ModuleSpace {
    pub fn new(shape: AlgebraShape, rank: usize) -> Self {
        ModuleSpace { shape, rank }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }
}

impl fmt::Display for ModuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^{} over A={}", self.rank, self.shape)
    }
}

/// Element of A^n. Block b keeps the n coordinates stacked vertically into
/// an (n*n_b) x n_b matrix: rows [i*n_b, (i+1)*n_b) are coordinate i. In
/// this layout the right action is right multiplication per block, the
/// A-valued product of u and v is u_b^H v_b per block, and morphisms act by
/// plain left multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleElement {
    space: ModuleSpace,
    blocks: Vec<DMatrix<Complex64>>,
}

impl ModuleElement {
    pub fn zero(space: &ModuleSpace) -> Self {
        let blocks = space
            .shape
            .block_dims()
            .iter()
            .map(|&d| DMatrix::zeros(space.rank * d, d))
            .collect();
        ModuleElement {
            space: space.clone(),
            blocks,
        }
    }

    /// Standard basis vector e_i: unit of A in coordinate i, zero elsewhere.
    pub fn basis_vector(space: &ModuleSpace, i: usize) -> Result<Self> {
        if i >= space.rank {
            return Err(Error::InvalidInput(format!(
                "basis index {i} out of range for rank {}",
                space.rank
            )));
        }
        let mut e = ModuleElement::zero(space);
        for (b, &d) in space.shape.block_dims().iter().enumerate() {
            for r in 0..d {
                e.blocks[b][(i * d + r, r)] = Complex64::new(1.0, 0.0);
            }
        }
        Ok(e)
    }

    pub fn from_coords(space: &ModuleSpace, coords: &[AlgebraElement]) -> Result<Self> {
        if coords.len() != space.rank {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                space.rank,
                coords.len()
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            if c.shape() != &space.shape {
                return Err(Error::InvalidInput(format!(
                    "coordinate {i} has shape {}, expected {}",
                    c.shape(),
                    space.shape
                )));
            }
        }
        let mut e = ModuleElement::zero(space);
        for (b, &d) in space.shape.block_dims().iter().enumerate() {
            for (i, c) in coords.iter().enumerate() {
                e.blocks[b]
                    .view_mut((i * d, 0), (d, d))
                    .copy_from(c.block(b));
            }
        }
        Ok(e)
    }

    pub(crate) fn from_blocks_unchecked(
        space: ModuleSpace,
        blocks: Vec<DMatrix<Complex64>>,
    ) -> Self {
        debug_assert_eq!(blocks.len(), space.shape.block_count());
        for (b, m) in blocks.iter().enumerate() {
            let d = space.shape.block_dim(b);
            debug_assert_eq!((m.nrows(), m.ncols()), (space.rank * d, d));
        }
        ModuleElement { space, blocks }
    }

    pub fn space(&self) -> &ModuleSpace {
        &self.space
    }

    pub(crate) fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn coord(&self, i: usize) -> AlgebraElement {
        let blocks = self
            .space
            .shape
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &d)| self.blocks[b].view((i * d, 0), (d, d)).into_owned())
            .collect();
        AlgebraElement::from_blocks(self.space.shape.clone(), blocks)
            .expect("coordinate blocks match the shape by construction")
    }

    pub fn coords(&self) -> Vec<AlgebraElement> {
        (0..self.space.rank).map(|i| self.coord(i)).collect()
    }

    fn check_space(&self, other: &ModuleElement) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: other.space.to_string(),
            });
        }
        Ok(())
    }

    /// Right action u.a, coordinatewise right multiplication.
    pub fn act(&self, a: &AlgebraElement) -> Result<ModuleElement> {
        if a.shape() != &self.space.shape {
            return Err(Error::ShapeMismatch {
                left: self.space.shape.to_string(),
                right: a.shape().to_string(),
            });
        }
        let blocks = self
            .blocks
            .iter()
            .zip(a.blocks())
            .map(|(u, ab)| u * ab)
            .collect();
        Ok(ModuleElement {
            space: self.space.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.check_space(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(u, v)| u + v)
            .collect();
        Ok(ModuleElement {
            space: self.space.clone(),
            blocks,
        })
    }

    pub fn sub(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.check_space(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(u, v)| u - v)
            .collect();
        Ok(ModuleElement {
            space: self.space.clone(),
            blocks,
        })
    }

    pub fn scale(&self, c: Complex64) -> ModuleElement {
        let blocks = self.blocks.iter().map(|u| u * c).collect();
        ModuleElement {
            space: self.space.clone(),
            blocks,
        }
    }

    /// The A-valued product (u,v) = sum_i u_i^* v_i, conjugate-linear in u.
    pub fn mod_product(&self, other: &ModuleElement) -> Result<AlgebraElement> {
        self.check_space(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(u, v)| u.adjoint() * v)
            .collect();
        AlgebraElement::from_blocks(self.space.shape.clone(), blocks)
    }

    /// |u| = sqrt(|(u,u)|_A).
    pub fn norm(&self) -> f64 {
        let gram = self
            .mod_product(self)
            .expect("self product is always defined");
        gram.norm().max(0.0).sqrt()
    }

    pub fn distance(&self, other: &ModuleElement) -> f64 {
        match self.sub(other) {
            Ok(d) => d.norm(),
            Err(_) => f64::INFINITY,
        }
    }
}

/// A complementable submodule of a free module, stored as the self-adjoint
/// idempotent projecting onto it.
#[derive(Debug, Clone)]
pub struct Submodule {
    projector: Morphism,
}

impl Submodule {
    /// Validates P = P* = P^2 within tolerance at the scale max(1, ||P||).
    pub fn new(projector: Morphism, tol: &Tolerance) -> Result<Self> {
        if projector.source() != projector.target() {
            return Err(Error::MorphismMismatch {
                op: "submodule projector",
                detail: format!(
                    "projector must be an endomorphism, got {} -> {}",
                    projector.source(),
                    projector.target()
                ),
            });
        }
        let tau = tol.threshold(projector.op_norm().max(1.0));
        let sa = projector.sub(&projector.adjoint())?.op_norm();
        if sa > tau {
            return Err(Error::InvalidProjector {
                which: "self-adjoint",
                residual: sa,
                tol: tau,
            });
        }
        let idem = projector.compose(&projector)?.sub(&projector)?.op_norm();
        if idem > tau {
            return Err(Error::InvalidProjector {
                which: "idempotent",
                residual: idem,
                tol: tau,
            });
        }
        Ok(Submodule { projector })
    }

    pub(crate) fn from_projector_unchecked(projector: Morphism) -> Self {
        Submodule { projector }
    }

    pub fn whole(space: &ModuleSpace) -> Self {
        Submodule {
            projector: Morphism::identity(space),
        }
    }

    pub fn zero_submodule(space: &ModuleSpace) -> Self {
        Submodule {
            projector: Morphism::zero(space, space),
        }
    }

    pub fn ambient(&self) -> &ModuleSpace {
        self.projector.source()
    }

    pub fn projector(&self) -> &Morphism {
        &self.projector
    }

    pub fn project(&self, v: &ModuleElement) -> Result<ModuleElement> {
        self.projector.apply(v)
    }

    /// The orthogonal complement, projector 1 - P.
    pub fn orthogonal_complement(&self) -> Submodule {
        let one = Morphism::identity(self.ambient());
        Submodule {
            projector: one
                .sub(&self.projector)
                .expect("identity matches the projector's space"),
        }
    }

    /// Membership test: |Pv - v| small at the scale of |v|.
    pub fn contains(&self, v: &ModuleElement, tol: &Tolerance) -> Result<bool> {
        let pv = self.project(v)?;
        Ok(pv.distance(v) <= tol.threshold(v.norm().max(1.0)))
    }

    /// Subspace equality as projector proximity.
    pub fn approx_eq(&self, other: &Submodule, tol: &Tolerance) -> bool {
        if self.ambient() != other.ambient() {
            return false;
        }
        self.projector.distance(&other.projector) <= tol.threshold(1.0)
    }
}

/// Quotient of a free module by a complementable submodule. Classes are
/// represented canonically by (1 - P)v with P the divisor projector.
#[derive(Debug, Clone)]
pub struct QuotientModule {
    divisor: Submodule,
    complement_projector: Morphism,
}

/// Numerical check that the quotient norm matches the infimum of |v - u|
/// over u in the divisor.
#[derive(Debug, Clone)]
pub struct QuotientNormReport {
    /// |[v]| computed from the quotient product.
    pub quotient_norm: f64,
    /// min over sampled u in the divisor of |v - u| - |[v]|; the infimum
    /// characterization makes every gap >= -tolerance.
    pub min_gap: f64,
    /// | |v - Pv| - |[v]| | at the canonical witness u = Pv.
    pub witness_residual: f64,
    pub samples: usize,
}

impl QuotientModule {
    pub fn new(divisor: Submodule) -> Self {
        let complement_projector = divisor.orthogonal_complement().projector().clone();
        QuotientModule {
            divisor,
            complement_projector,
        }
    }

    pub fn ambient(&self) -> &ModuleSpace {
        self.divisor.ambient()
    }

    pub fn divisor(&self) -> &Submodule {
        &self.divisor
    }

    pub fn complement_projector(&self) -> &Morphism {
        &self.complement_projector
    }

    /// Canonical representative (1 - P)v of the class [v].
    pub fn representative(&self, v: &ModuleElement) -> Result<ModuleElement> {
        self.complement_projector.apply(v)
    }

    /// ([u],[v]) = ((1-P)u, (1-P)v).
    pub fn quotient_product(&self, u: &ModuleElement, v: &ModuleElement) -> Result<AlgebraElement> {
        let pu = self.representative(u)?;
        let pv = self.representative(v)?;
        pu.mod_product(&pv)
    }

    /// |[v]| = |(1-P)v|.
    pub fn quotient_norm(&self, v: &ModuleElement) -> Result<f64> {
        Ok(self.representative(v)?.norm())
    }

    /// Samples u in the divisor and checks |v - u| >= |[v]| with equality at
    /// the witness u = Pv.
    pub fn quotient_norm_check(
        &self,
        v: &ModuleElement,
        samples: usize,
        seed: u64,
    ) -> Result<QuotientNormReport> {
        if samples == 0 {
            return Err(Error::InvalidInput(
                "quotient_norm_check needs at least one sample".into(),
            ));
        }
        let qnorm = self.quotient_norm(v)?;

        let witness = self.divisor.project(v)?;
        let witness_residual = (v.sub(&witness)?.norm() - qnorm).abs();

        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let sigma = v.norm().max(1.0);
        let mut min_gap = f64::INFINITY;
        for _ in 0..samples {
            let w = crate::sampling::gaussian_module_element(self.ambient(), &mut rng)
                .scale(Complex64::new(sigma, 0.0));
            let u = self.divisor.project(&w)?;
            let gap = v.sub(&u)?.norm() - qnorm;
            min_gap = min_gap.min(gap);
        }
        Ok(QuotientNormReport {
            quotient_norm: qnorm,
            min_gap,
            witness_residual,
            samples,
        })
    }
}

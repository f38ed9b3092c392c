//! Adjointable morphisms between free Hilbert modules, spectral calculus
//! for self-adjoint endomorphisms, and parametrix construction.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, Tolerance};
use crate::eigen::{hermitian_eigen, spectral_norm};
use crate::error::{Error, Result};
use crate::module::{ModuleElement, ModuleSpace, Submodule};

/// A-linear map A^n -> A^m. Block b stores the (m*n_b) x (n*n_b) complex
/// matrix acting on stacked coordinates by left multiplication; left
/// multiplication commutes with the right module action, so every such
/// matrix is a morphism. The n_b x n_b chunk at (j,k) is the b-block of the
/// algebra-valued entry L_jk.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    source: ModuleSpace,
    target: ModuleSpace,
    blocks: Vec<DMatrix<Complex64>>,
}

impl Morphism {
    pub fn zero(source: &ModuleSpace, target: &ModuleSpace) -> Self {
        assert_eq!(
            source.shape(),
            target.shape(),
            "morphisms need a common coefficient algebra"
        );
        let blocks = source
            .shape()
            .block_dims()
            .iter()
            .map(|&d| DMatrix::zeros(target.rank() * d, source.rank() * d))
            .collect();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        }
    }

    pub fn identity(space: &ModuleSpace) -> Self {
        let blocks = space
            .shape()
            .block_dims()
            .iter()
            .map(|&d| DMatrix::identity(space.rank() * d, space.rank() * d))
            .collect();
        Morphism {
            source: space.clone(),
            target: space.clone(),
            blocks,
        }
    }

    /// Builds from algebra-valued entries, row-major: entries[j][k] sends
    /// source coordinate k into target coordinate j.
    pub fn from_entries(
        source: &ModuleSpace,
        target: &ModuleSpace,
        entries: &[Vec<AlgebraElement>],
    ) -> Result<Self> {
        if source.shape() != target.shape() {
            return Err(Error::ShapeMismatch {
                left: source.shape().to_string(),
                right: target.shape().to_string(),
            });
        }
        if entries.len() != target.rank() {
            return Err(Error::InvalidInput(format!(
                "expected {} entry rows, got {}",
                target.rank(),
                entries.len()
            )));
        }
        for (j, row) in entries.iter().enumerate() {
            if row.len() != source.rank() {
                return Err(Error::InvalidInput(format!(
                    "entry row {j} has {} columns, expected {}",
                    row.len(),
                    source.rank()
                )));
            }
            for (k, e) in row.iter().enumerate() {
                if e.shape() != source.shape() {
                    return Err(Error::InvalidInput(format!(
                        "entry ({j},{k}) has shape {}, expected {}",
                        e.shape(),
                        source.shape()
                    )));
                }
            }
        }
        let mut m = Morphism::zero(source, target);
        for (b, &d) in source.shape().block_dims().iter().enumerate() {
            for (j, row) in entries.iter().enumerate() {
                for (k, e) in row.iter().enumerate() {
                    m.blocks[b]
                        .view_mut((j * d, k * d), (d, d))
                        .copy_from(e.block(b));
                }
            }
        }
        Ok(m)
    }

    /// Entrywise constructor; f(j, k) must return elements of the spaces'
    /// shape.
    pub fn from_entry_fn(
        source: &ModuleSpace,
        target: &ModuleSpace,
        mut f: impl FnMut(usize, usize) -> AlgebraElement,
    ) -> Self {
        let entries: Vec<Vec<AlgebraElement>> = (0..target.rank())
            .map(|j| (0..source.rank()).map(|k| f(j, k)).collect())
            .collect();
        Morphism::from_entries(source, target, &entries)
            .expect("entry function must produce the spaces' shape")
    }

    pub(crate) fn from_blocks(
        source: &ModuleSpace,
        target: &ModuleSpace,
        blocks: Vec<DMatrix<Complex64>>,
    ) -> Result<Self> {
        if source.shape() != target.shape() {
            return Err(Error::ShapeMismatch {
                left: source.shape().to_string(),
                right: target.shape().to_string(),
            });
        }
        if blocks.len() != source.shape().block_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} realization blocks, got {}",
                source.shape().block_count(),
                blocks.len()
            )));
        }
        for (b, m) in blocks.iter().enumerate() {
            let d = source.shape().block_dim(b);
            let (rows, cols) = (target.rank() * d, source.rank() * d);
            if m.nrows() != rows || m.ncols() != cols {
                return Err(Error::InvalidInput(format!(
                    "realization block {b} must be {rows}x{cols}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        })
    }

    pub fn source(&self) -> &ModuleSpace {
        &self.source
    }

    pub fn target(&self) -> &ModuleSpace {
        &self.target
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub(crate) fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    /// Algebra-valued entry L_jk.
    pub fn entry(&self, j: usize, k: usize) -> AlgebraElement {
        let shape = self.source.shape();
        let blocks = shape
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &d)| self.blocks[b].view((j * d, k * d), (d, d)).into_owned())
            .collect();
        AlgebraElement::from_blocks(shape.clone(), blocks)
            .expect("entry chunks match the shape by construction")
    }

    /// All entries, row-major.
    pub fn entries(&self) -> Vec<Vec<AlgebraElement>> {
        (0..self.target.rank())
            .map(|j| (0..self.source.rank()).map(|k| self.entry(j, k)).collect())
            .collect()
    }

    pub fn apply(&self, u: &ModuleElement) -> Result<ModuleElement> {
        if u.space() != &self.source {
            return Err(Error::SpaceMismatch {
                left: self.source.to_string(),
                right: u.space().to_string(),
            });
        }
        let blocks = self
            .blocks
            .iter()
            .zip(u.blocks())
            .map(|(r, ub)| r * ub)
            .collect();
        Ok(ModuleElement::from_blocks_unchecked(
            self.target.clone(),
            blocks,
        ))
    }

    /// The adjoint for the A-valued product: (Lu, v) = (u, L*v).
    pub fn adjoint(&self) -> Morphism {
        let blocks = self.blocks.iter().map(|m| m.adjoint()).collect();
        Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks,
        }
    }

    /// self after other: (self . other)(u) = self(other(u)).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if other.target != self.source {
            return Err(Error::MorphismMismatch {
                op: "compose",
                detail: format!(
                    "cannot chain {} -> {} after {} -> {}",
                    self.source, self.target, other.source, other.target
                ),
            });
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(l, k)| l * k)
            .collect();
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks,
        })
    }

    fn check_same_spaces(&self, other: &Morphism, op: &'static str) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::MorphismMismatch {
                op,
                detail: format!(
                    "{} -> {} vs {} -> {}",
                    self.source, self.target, other.source, other.target
                ),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_same_spaces(other, "add")?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(l, k)| l + k)
            .collect();
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.check_same_spaces(other, "sub")?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(l, k)| l - k)
            .collect();
        Ok(Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        })
    }

    pub fn scale(&self, c: Complex64) -> Morphism {
        let blocks = self.blocks.iter().map(|m| m * c).collect();
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    /// Operator norm: max over blocks of the largest singular value of the
    /// realization.
    pub fn op_norm(&self) -> f64 {
        self.blocks.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Morphism) -> f64 {
        match self.sub(other) {
            Ok(d) => d.op_norm(),
            Err(_) => f64::INFINITY,
        }
    }

    /// ||L - L*||, zero for self-adjoint operators.
    pub fn self_adjoint_residual(&self) -> f64 {
        if !self.is_endomorphism() {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint())
            .map(|d| d.op_norm())
            .unwrap_or(f64::INFINITY)
    }
}

/// Residuals of the parametrix identities; all must sit below the working
/// tolerance.
#[derive(Debug, Clone, Copy)]
pub struct ParametrixResiduals {
    /// ||gL + p - 1||.
    pub left_identity: f64,
    /// ||Lg + p - 1||.
    pub right_identity: f64,
    /// ||Lp||.
    pub kernel_annihilation: f64,
    /// ||p - p*||.
    pub projector_self_adjoint: f64,
}

impl ParametrixResiduals {
    pub fn max(&self) -> f64 {
        self.left_identity
            .max(self.right_identity)
            .max(self.kernel_annihilation)
            .max(self.projector_self_adjoint)
    }
}

/// Where the kernel cut fell relative to the spectrum.
#[derive(Debug, Clone)]
pub struct SpectralDiagnostics {
    /// Eigenvalues with |lambda| <= cut are treated as kernel.
    pub cut: f64,
    /// Complex dimension of the numerical kernel of each realization block.
    pub kernel_dims: Vec<usize>,
    /// Largest |lambda| below the cut; 0 when the kernel is trivial.
    pub largest_kernel_abs: f64,
    /// Smallest |lambda| above the cut; None when everything fell below.
    pub smallest_retained_abs: Option<f64>,
    /// Some retained |lambda| lies within a factor 10 of the cut, so the
    /// kernel/non-kernel split is poorly separated at this tolerance.
    pub ill_separated: bool,
}

/// Green operator and kernel projector of a self-adjoint endomorphism L:
/// gL + p = Lg + p = 1, Lp = 0, p = p*.
#[derive(Debug, Clone)]
pub struct Parametrix {
    operator: Morphism,
    green: Morphism,
    projector: Morphism,
    residuals: ParametrixResiduals,
    diagnostics: SpectralDiagnostics,
}

impl Parametrix {
    pub fn operator(&self) -> &Morphism {
        &self.operator
    }

    pub fn green(&self) -> &Morphism {
        &self.green
    }

    pub fn projector(&self) -> &Morphism {
        &self.projector
    }

    pub fn residuals(&self) -> &ParametrixResiduals {
        &self.residuals
    }

    pub fn diagnostics(&self) -> &SpectralDiagnostics {
        &self.diagnostics
    }

    /// The projector as a submodule, the kernel of the operator.
    pub fn kernel(&self) -> Submodule {
        Submodule::from_projector_unchecked(self.projector.clone())
    }
}

/// Spectral split of a self-adjoint endomorphism into Green operator and
/// kernel projector. Eigenvalues with |lambda| <= max(abs, rel * ||L||) are
/// kernel; p sums their spectral projectors and g inverts the rest. Both
/// are functions of L, hence A-linear and self-adjoint by construction.
pub fn spectral_parts(l: &Morphism, tol: &Tolerance) -> Result<Parametrix> {
    if !l.is_endomorphism() {
        return Err(Error::MorphismMismatch {
            op: "spectral_parts",
            detail: format!(
                "expected an endomorphism, got {} -> {}",
                l.source(),
                l.target()
            ),
        });
    }
    let scale = l.op_norm();
    let tau = tol.threshold(scale);
    let sa = l.self_adjoint_residual();
    if sa > tau {
        return Err(Error::NotSelfAdjoint {
            residual: sa,
            tol: tau,
        });
    }

    // Work with the Hermitian part; it differs from L by at most tau/2.
    let h = l
        .add(&l.adjoint())
        .expect("endomorphism spaces match")
        .scale(Complex64::new(0.5, 0.0));
    let cut = tol.threshold(h.op_norm());

    let space = l.source().clone();
    let mut p_blocks = Vec::with_capacity(h.blocks().len());
    let mut g_blocks = Vec::with_capacity(h.blocks().len());
    let mut kernel_dims = Vec::with_capacity(h.blocks().len());
    let mut largest_kernel_abs: f64 = 0.0;
    let mut smallest_retained_abs: Option<f64> = None;
    let mut ill_separated = false;

    for hb in h.blocks() {
        let s = hb.nrows();
        let eig = hermitian_eigen(hb);
        let mut p = DMatrix::<Complex64>::zeros(s, s);
        let mut g = DMatrix::<Complex64>::zeros(s, s);
        let mut dim = 0usize;
        for (i, &lambda) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(i).into_owned();
            let outer = &v * v.adjoint();
            if lambda.abs() <= cut {
                p += &outer;
                dim += 1;
                largest_kernel_abs = largest_kernel_abs.max(lambda.abs());
            } else {
                g += outer * Complex64::new(1.0 / lambda, 0.0);
                let magnitude = lambda.abs();
                smallest_retained_abs = Some(match smallest_retained_abs {
                    Some(cur) => cur.min(magnitude),
                    None => magnitude,
                });
                if magnitude <= 10.0 * cut {
                    ill_separated = true;
                }
            }
        }
        p_blocks.push(p);
        g_blocks.push(g);
        kernel_dims.push(dim);
    }

    let projector = Morphism::from_blocks(&space, &space, p_blocks)?;
    let green = Morphism::from_blocks(&space, &space, g_blocks)?;

    let one = Morphism::identity(&space);
    let left_identity = green.compose(l)?.add(&projector)?.sub(&one)?.op_norm();
    let right_identity = l.compose(&green)?.add(&projector)?.sub(&one)?.op_norm();
    let kernel_annihilation = l.compose(&projector)?.op_norm();
    let projector_self_adjoint = projector.self_adjoint_residual();

    Ok(Parametrix {
        operator: l.clone(),
        green,
        projector,
        residuals: ParametrixResiduals {
            left_identity,
            right_identity,
            kernel_annihilation,
            projector_self_adjoint,
        },
        diagnostics: SpectralDiagnostics {
            cut,
            kernel_dims,
            largest_kernel_abs,
            smallest_retained_abs,
            ill_separated,
        },
    })
}

/// Orthogonal projector onto Ker L for a possibly rectangular L, computed
/// as the kernel projector of the self-adjoint product L*L.
pub fn kernel_projector(l: &Morphism, tol: &Tolerance) -> Result<Submodule> {
    let gram = l.adjoint().compose(l)?;
    let parts = spectral_parts(&gram, tol)?;
    Ok(Submodule::from_projector_unchecked(parts.projector))
}

/// Orthogonal projector onto Im L = (Ker L*)^perp, computed as
/// 1 - kernel projector of LL*.
pub fn image_projector(l: &Morphism, tol: &Tolerance) -> Result<Submodule> {
    let gram = l.compose(&l.adjoint())?;
    let parts = spectral_parts(&gram, tol)?;
    let one = Morphism::identity(l.target());
    let p = one.sub(&parts.projector)?;
    Ok(Submodule::from_projector_unchecked(p))
}

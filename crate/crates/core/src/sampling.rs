//! Seeded random matrices, algebra and module elements, morphisms, and
//! Haar-distributed unitaries. All sampling is deterministic given the RNG
//! state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::module::{ModuleElement, ModuleSpace};
use crate::operator::Morphism;

/// Matrix with independent standard complex Gaussian entries
/// (variance 1: real and imaginary parts each N(0, 1/2)).
pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    m
}

pub fn gaussian_algebra_element<R: Rng>(shape: &AlgebraShape, rng: &mut R) -> AlgebraElement {
    let blocks = shape
        .block_dims()
        .iter()
        .map(|&d| gaussian_matrix(d, d, rng))
        .collect();
    AlgebraElement::from_blocks(shape.clone(), blocks)
        .expect("gaussian blocks match the shape by construction")
}

/// Self-adjoint Gaussian element (a + a*)/2.
pub fn gaussian_self_adjoint_element<R: Rng>(shape: &AlgebraShape, rng: &mut R) -> AlgebraElement {
    let a = gaussian_algebra_element(shape, rng);
    a.add(&a.star())
        .expect("shapes match")
        .scale(Complex64::new(0.5, 0.0))
}

pub fn gaussian_module_element<R: Rng>(space: &ModuleSpace, rng: &mut R) -> ModuleElement {
    let coords: Vec<AlgebraElement> = (0..space.rank())
        .map(|_| gaussian_algebra_element(space.shape(), rng))
        .collect();
    ModuleElement::from_coords(space, &coords)
        .expect("gaussian coordinates match the space by construction")
}

/// Morphism with independent Gaussian algebra-valued entries.
pub fn gaussian_morphism<R: Rng>(
    source: &ModuleSpace,
    target: &ModuleSpace,
    rng: &mut R,
) -> Morphism {
    Morphism::from_entry_fn(source, target, |_, _| {
        gaussian_algebra_element(source.shape(), rng)
    })
}

/// Self-adjoint Gaussian endomorphism (K + K*)/2.
pub fn gaussian_self_adjoint_morphism<R: Rng>(space: &ModuleSpace, rng: &mut R) -> Morphism {
    let k = gaussian_morphism(space, space, rng);
    k.add(&k.adjoint())
        .expect("endomorphism spaces match")
        .scale(Complex64::new(0.5, 0.0))
}

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Unitary endomorphism of a free module: an independent Haar unitary on
/// each stacked realization block.
pub fn haar_unitary_morphism<R: Rng>(space: &ModuleSpace, rng: &mut R) -> Morphism {
    let blocks = space
        .shape()
        .block_dims()
        .iter()
        .map(|&d| haar_unitary(space.rank() * d, rng))
        .collect();
    Morphism::from_blocks(space, space, blocks)
        .expect("unitary blocks match the space by construction")
}

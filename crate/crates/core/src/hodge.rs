//! The Hodge decomposition of a cochain complex: degreewise Laplacians and
//! parametrices, harmonic/exact/coexact projectors, kernel splittings, and
//! cohomology with blockwise multiplicities.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::cochain::CochainComplex;
use crate::error::{Error, Result};
use crate::module::{ModuleElement, QuotientModule, Submodule};
use crate::operator::{image_projector, kernel_projector, spectral_parts, Morphism, Parametrix};
use crate::sampling::gaussian_module_element;

/// Everything the decomposition produces at one degree.
#[derive(Debug, Clone)]
pub struct DegreeData {
    pub degree: usize,
    pub laplacian: Morphism,
    /// Green operator and kernel projector of the Laplacian.
    pub parametrix: Parametrix,
    /// Projector onto Ker L_k, the harmonic part.
    pub harmonic_projector: Morphism,
    /// Projector onto Im d_(k-1).
    pub exact_projector: Morphism,
    /// Projector onto Im d_k*.
    pub coexact_projector: Morphism,
    /// Free-rank multiplicities of Ker L_k per algebra block:
    /// dim_C Ker(block realization) / n_b.
    pub multiplicities: Vec<usize>,
    pub residuals: DegreeResiduals,
}

/// Numerical quality of the splitting at one degree.
#[derive(Debug, Clone, Copy)]
pub struct DegreeResiduals {
    /// Worst of the four parametrix identities for L_k.
    pub parametrix_max: f64,
    /// ||P_harm + P_exact + P_coexact - 1||.
    pub decomposition: f64,
    /// Largest pairwise product norm among the three projectors.
    pub pairwise_max: f64,
    /// ||P_Im(L_k) - P_exact - P_coexact||, the split of Im L_k.
    pub image_split: f64,
}

impl DegreeResiduals {
    pub fn max(&self) -> f64 {
        self.parametrix_max
            .max(self.decomposition)
            .max(self.pairwise_max)
            .max(self.image_split)
    }
}

/// One element split into its three orthogonal parts, with preimage
/// witnesses for the exact and coexact summands.
#[derive(Debug, Clone)]
pub struct HodgeSplit {
    pub harmonic: ModuleElement,
    pub exact: ModuleElement,
    pub coexact: ModuleElement,
    /// a in C^(k-1) with exact = d_(k-1) a.
    pub exact_witness: ModuleElement,
    /// b in C^(k+1) with coexact = d_k* b.
    pub coexact_witness: ModuleElement,
}

/// Projector identities splitting Ker d_k and Ker d_k*, reported as
/// residual norms.
#[derive(Debug, Clone, Copy)]
pub struct KernelSplitReport {
    pub degree: usize,
    /// ||P_Ker(d_k) - P_harm(k) - P_exact(k)||.
    pub cocycle_split: f64,
    /// ||P_Ker(d_k*) - P_harm(k+1) - P_coexact(k+1)||.
    pub adjoint_split: f64,
    /// ||P_harm(k) - P_Ker(d_k) P_Ker(d_(k-1)*)||, the kernel intersection.
    pub intersection: f64,
    /// Commutator norm of the two kernel projectors entering the
    /// intersection.
    pub commutator: f64,
}

impl KernelSplitReport {
    pub fn max(&self) -> f64 {
        self.cocycle_split
            .max(self.adjoint_split)
            .max(self.intersection)
            .max(self.commutator)
    }
}

/// Cohomology at one degree, materialized as the harmonic subspace.
#[derive(Debug, Clone)]
pub struct CohomologyModule {
    pub degree: usize,
    /// Ker L_k, the canonical representatives.
    pub harmonic_space: Submodule,
    /// Free-rank multiplicities per algebra block.
    pub multiplicities: Vec<usize>,
    /// Worst deviation of [x] -> p_k x from being a product-preserving
    /// isomorphism between the quotient Ker d_k / Im d_(k-1) and Ker L_k,
    /// sampled over random cocycles and normalized by their size.
    pub isometry_residual: f64,
}

/// The full decomposition of a complex.
#[derive(Debug, Clone)]
pub struct HodgeResult {
    complex: CochainComplex,
    degrees: Vec<DegreeData>,
}

/// L_0..L_N for the complex; L_k = d_k* d_k + d_(k-1) d_(k-1)*.
pub fn build_laplacians(complex: &CochainComplex) -> Result<Vec<Morphism>> {
    complex.laplacians()
}

/// Runs the spectral decomposition at every degree and assembles the three
/// orthogonal projectors, multiplicities, and residual report. Fails if a
/// projector identity exceeds the complex's tolerance at the Laplacian's
/// scale.
pub fn hodge_decompose(complex: &CochainComplex) -> Result<HodgeResult> {
    let tol = *complex.tolerance();
    let mut degrees = Vec::with_capacity(complex.degree_count());

    for k in 0..complex.degree_count() {
        let d_k = complex.differential(k);
        let d_in = complex.incoming_differential(k);
        let laplacian = complex.laplacian(k)?;
        let parametrix = spectral_parts(&laplacian, &tol)?;
        let harmonic_projector = parametrix.projector().clone();
        let exact_projector = image_projector(&d_in, &tol)?.projector().clone();
        let coexact_projector = image_projector(&d_k.adjoint(), &tol)?.projector().clone();

        let shape = complex.shape();
        let mut multiplicities = Vec::with_capacity(shape.block_count());
        for (b, &dim) in parametrix.diagnostics().kernel_dims.iter().enumerate() {
            let n_b = shape.block_dim(b);
            let value = dim as f64 / n_b as f64;
            let rounded = value.round();
            if (value - rounded).abs() > 0.01 {
                return Err(Error::NonIntegralMultiplicity {
                    degree: k,
                    block: b,
                    value,
                });
            }
            multiplicities.push(rounded as usize);
        }

        let one = Morphism::identity(&complex.space(k));
        let decomposition = harmonic_projector
            .add(&exact_projector)?
            .add(&coexact_projector)?
            .sub(&one)?
            .op_norm();
        let pairwise_max = harmonic_projector
            .compose(&exact_projector)?
            .op_norm()
            .max(harmonic_projector.compose(&coexact_projector)?.op_norm())
            .max(exact_projector.compose(&coexact_projector)?.op_norm());
        let image_split = image_projector(&laplacian, &tol)?
            .projector()
            .sub(&exact_projector)?
            .sub(&coexact_projector)?
            .op_norm();

        let residuals = DegreeResiduals {
            parametrix_max: parametrix.residuals().max(),
            decomposition,
            pairwise_max,
            image_split,
        };

        let tau = tol.threshold(1.0 + laplacian.op_norm());
        if residuals.max() > tau {
            return Err(Error::ResidualExceeded {
                what: format!("hodge decomposition at degree {k}"),
                residual: residuals.max(),
                tol: tau,
            });
        }

        degrees.push(DegreeData {
            degree: k,
            laplacian,
            parametrix,
            harmonic_projector,
            exact_projector,
            coexact_projector,
            multiplicities,
            residuals,
        });
    }

    Ok(HodgeResult {
        complex: complex.clone(),
        degrees,
    })
}

impl HodgeResult {
    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn degree_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[DegreeData] {
        &self.degrees
    }

    pub fn degree(&self, k: usize) -> Result<&DegreeData> {
        self.degrees.get(k).ok_or(Error::DegreeOutOfRange {
            degree: k,
            length: self.complex.length(),
        })
    }

    /// Splits x in C^k into harmonic + exact + coexact parts with preimage
    /// witnesses: harmonic = p x, exact = d_(k-1) (d_(k-1)* g x),
    /// coexact = d_k* (d_k g x).
    pub fn decompose_element(&self, k: usize, x: &ModuleElement) -> Result<HodgeSplit> {
        let data = self.degree(k)?;
        let d_k = self.complex.differential(k);
        let d_in = self.complex.incoming_differential(k);

        let harmonic = data.harmonic_projector.apply(x)?;
        let gx = data.parametrix.green().apply(x)?;
        let exact_witness = d_in.adjoint().apply(&gx)?;
        let exact = d_in.apply(&exact_witness)?;
        let coexact_witness = d_k.apply(&gx)?;
        let coexact = d_k.adjoint().apply(&coexact_witness)?;

        Ok(HodgeSplit {
            harmonic,
            exact,
            coexact,
            exact_witness,
            coexact_witness,
        })
    }

    /// Checks the splittings of Ker d_k and Ker d_k* against the harmonic,
    /// exact, and coexact projectors, returning residual norms.
    pub fn kernel_splittings(&self, k: usize) -> Result<KernelSplitReport> {
        let data = self.degree(k)?;
        let tol = self.complex.tolerance();
        let d_k = self.complex.differential(k);
        let d_in = self.complex.incoming_differential(k);

        let p_ker_dk = kernel_projector(&d_k, tol)?.projector().clone();
        let cocycle_split = p_ker_dk
            .sub(&data.harmonic_projector)?
            .sub(&data.exact_projector)?
            .op_norm();

        let p_ker_dk_star = kernel_projector(&d_k.adjoint(), tol)?.projector().clone();
        let adjoint_split = if k + 1 < self.degrees.len() {
            let next = &self.degrees[k + 1];
            p_ker_dk_star
                .sub(&next.harmonic_projector)?
                .sub(&next.coexact_projector)?
                .op_norm()
        } else {
            // d_k is the zero map into the zero module; its adjoint's
            // kernel projector is empty and the identity is vacuous.
            p_ker_dk_star.op_norm()
        };

        let p_ker_din_star = kernel_projector(&d_in.adjoint(), tol)?.projector().clone();
        let product = p_ker_dk.compose(&p_ker_din_star)?;
        let intersection = product.sub(&data.harmonic_projector)?.op_norm();
        let commutator = product.sub(&p_ker_din_star.compose(&p_ker_dk)?)?.op_norm();

        Ok(KernelSplitReport {
            degree: k,
            cocycle_split,
            adjoint_split,
            intersection,
            commutator,
        })
    }

    /// H^k materialized as the harmonic subspace Ker L_k, with the map
    /// [x] -> p_k x checked to preserve the quotient A-product on random
    /// cocycles.
    pub fn cohomology(&self, k: usize) -> Result<CohomologyModule> {
        let data = self.degree(k)?;
        let tol = self.complex.tolerance();
        let space = self.complex.space(k);
        let d_k = self.complex.differential(k);

        let harmonic_space = Submodule::from_projector_unchecked(data.harmonic_projector.clone());
        let divisor = Submodule::from_projector_unchecked(data.exact_projector.clone());
        let quotient = QuotientModule::new(divisor);
        let p_ker_dk = kernel_projector(&d_k, tol)?;

        let mut rng = ChaCha12Rng::seed_from_u64(0x636f686f_u64 ^ (k as u64));
        let samples = 8;
        let mut isometry_residual = 0.0_f64;
        for _ in 0..samples {
            let x = p_ker_dk.project(&gaussian_module_element(&space, &mut rng))?;
            let y = p_ker_dk.project(&gaussian_module_element(&space, &mut rng))?;
            let lhs = quotient.quotient_product(&x, &y)?;
            let px = data.harmonic_projector.apply(&x)?;
            let py = data.harmonic_projector.apply(&y)?;
            let rhs = px.mod_product(&py)?;
            let scale = (x.norm() * y.norm()).max(1.0);
            isometry_residual = isometry_residual.max(lhs.distance(&rhs) / scale);
        }

        Ok(CohomologyModule {
            degree: k,
            harmonic_space,
            multiplicities: data.multiplicities.clone(),
            isometry_residual,
        })
    }

    /// Alternating sum of cochain ranks and, per block, of cohomology
    /// multiplicities; the two agree for every block.
    pub fn euler_characteristics(&self) -> (i64, Vec<i64>) {
        let rank_sum = self
            .degrees
            .iter()
            .map(|d| {
                let sign = if d.degree % 2 == 0 { 1 } else { -1 };
                sign * self.complex.space(d.degree).rank() as i64
            })
            .sum();
        let blocks = self.complex.shape().block_count();
        let mut kappa_sums = vec![0_i64; blocks];
        for d in &self.degrees {
            let sign = if d.degree % 2 == 0 { 1 } else { -1 };
            for (b, &m) in d.multiplicities.iter().enumerate() {
                kappa_sums[b] += sign * m as i64;
            }
        }
        (rank_sum, kappa_sums)
    }

    /// Largest residual across all degrees.
    pub fn worst_residual(&self) -> f64 {
        self.degrees
            .iter()
            .map(|d| d.residuals.max())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, AlgebraShape, Tolerance};
    use crate::module::ModuleSpace;
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

    fn scalar_vec(vals: &[f64]) -> ModuleElement {
        let space = scalar_space(vals.len());
        let coords: Vec<AlgebraElement> = vals
            .iter()
            .map(|&x| AlgebraElement::from_scalars(space.shape(), &[c(x)]).unwrap())
            .collect();
        ModuleElement::from_coords(&space, &coords).unwrap()
    }

    fn zero_complex(ranks: &[usize]) -> CochainComplex {
        let spaces: Vec<ModuleSpace> = ranks.iter().map(|&r| scalar_space(r)).collect();
        let diffs = (0..ranks.len() - 1)
            .map(|k| Morphism::zero(&spaces[k], &spaces[k + 1]))
            .collect();
        CochainComplex::new(spaces, diffs, Tolerance::default()).unwrap()
    }

    /// Coboundary of the triangle graph on vertices {0,1,2} with edges in
    /// lexicographic order: (d f)(uv) = f(v) - f(u).
    fn triangle_complex() -> CochainComplex {
        let d0 = scalar_morphism(
            3,
            3,
            &[
                -1.0, 1.0, 0.0, // edge 01
                -1.0, 0.0, 1.0, // edge 02
                0.0, -1.0, 1.0, // edge 12
            ],
        );
        CochainComplex::from_differentials(vec![d0], Tolerance::default()).unwrap()
    }

    #[test]
    fn zero_complex_is_all_harmonic() {
        let complex = zero_complex(&[2, 3, 1]);
        let result = hodge_decompose(&complex).unwrap();
        for data in result.degrees() {
            let one = Morphism::identity(&complex.space(data.degree));
            assert!(data.harmonic_projector.distance(&one) < 1e-13);
            assert!(data.exact_projector.op_norm() < 1e-13);
            assert!(data.coexact_projector.op_norm() < 1e-13);
        }
        // Nothing is killed: multiplicities equal the ranks.
        assert_eq!(result.degree(0).unwrap().multiplicities, vec![2]);
        assert_eq!(result.degree(1).unwrap().multiplicities, vec![3]);
        assert_eq!(result.degree(2).unwrap().multiplicities, vec![1]);
    }

    #[test]
    fn triangle_laplacian_and_multiplicities() {
        let complex = triangle_complex();
        let l0 = complex.laplacian(0).unwrap();
        let expected = scalar_morphism(3, 3, &[2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0]);
        assert!(l0.distance(&expected) < 1e-13);

        let result = hodge_decompose(&complex).unwrap();
        // A circle: one harmonic function, one harmonic one-form.
        assert_eq!(result.degree(0).unwrap().multiplicities, vec![1]);
        assert_eq!(result.degree(1).unwrap().multiplicities, vec![1]);
        assert!(result.worst_residual() < 1e-12);
    }

    #[test]
    fn triangle_harmonic_part_is_the_mean() {
        let complex = triangle_complex();
        let result = hodge_decompose(&complex).unwrap();
        let x = scalar_vec(&[1.0, 0.0, 0.0]);
        let split = result.decompose_element(0, &x).unwrap();
        let third = 1.0 / 3.0;
        let mean = scalar_vec(&[third, third, third]);
        assert!(split.harmonic.distance(&mean) < 1e-12);

        // Degree 0 has no incoming differential, so no exact part.
        assert!(split.exact.norm() < 1e-13);

        // The split reassembles x.
        let sum = split
            .harmonic
            .add(&split.exact)
            .unwrap()
            .add(&split.coexact)
            .unwrap();
        assert!(sum.distance(&x) < 1e-12);

        // Witnesses reproduce the parts.
        let d0 = complex.differential(0);
        let coexact = d0.adjoint().apply(&split.coexact_witness).unwrap();
        assert!(coexact.distance(&split.coexact) < 1e-12);
    }

    #[test]
    fn harmonic_elements_split_trivially() {
        let complex = triangle_complex();
        let result = hodge_decompose(&complex).unwrap();
        let ones = scalar_vec(&[1.0, 1.0, 1.0]);
        let split = result.decompose_element(0, &ones).unwrap();
        assert!(split.harmonic.distance(&ones) < 1e-12);
        assert!(split.exact.norm() < 1e-13);
        assert!(split.coexact.norm() < 1e-13);
    }

    #[test]
    fn exact_elements_stay_exact() {
        let complex = triangle_complex();
        let result = hodge_decompose(&complex).unwrap();
        let d0 = complex.differential(0);
        let x = d0.apply(&scalar_vec(&[2.0, -1.0, 0.5])).unwrap();
        let split = result.decompose_element(1, &x).unwrap();
        assert!(split.harmonic.norm() < 1e-12);
        assert!(split.coexact.norm() < 1e-12);
        assert!(split.exact.distance(&x) < 1e-12);
    }

    #[test]
    fn kernel_splittings_on_one_operator_complex() {
        // 0 -> A^2 -> A^2 -> 0 with an invertible differential.
        let d = scalar_morphism(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let complex = CochainComplex::from_differentials(vec![d], Tolerance::default()).unwrap();
        let result = hodge_decompose(&complex).unwrap();
        for k in 0..=1 {
            let report = result.kernel_splittings(k).unwrap();
            assert!(report.max() < 1e-10, "degree {k}: {report:?}");
        }
        // Everything is exact/coexact: no cohomology.
        assert_eq!(result.degree(0).unwrap().multiplicities, vec![0]);
        assert_eq!(result.degree(1).unwrap().multiplicities, vec![0]);
    }

    #[test]
    fn kernel_splittings_on_zero_complex() {
        let complex = zero_complex(&[2, 2]);
        let result = hodge_decompose(&complex).unwrap();
        for k in 0..=1 {
            let report = result.kernel_splittings(k).unwrap();
            assert!(report.max() < 1e-13, "degree {k}: {report:?}");
        }
    }

    #[test]
    fn triangle_cohomology() {
        let complex = triangle_complex();
        let result = hodge_decompose(&complex).unwrap();
        let h0 = result.cohomology(0).unwrap();
        assert_eq!(h0.multiplicities, vec![1]);
        assert!(h0.isometry_residual < 1e-10);
        let h1 = result.cohomology(1).unwrap();
        assert_eq!(h1.multiplicities, vec![1]);
        assert!(h1.isometry_residual < 1e-10);

        assert!(matches!(
            result.cohomology(5),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn euler_characteristics_match() {
        let complex = triangle_complex();
        let result = hodge_decompose(&complex).unwrap();
        let (ranks, kappas) = result.euler_characteristics();
        assert_eq!(ranks, 0); // 3 - 3
        assert_eq!(kappas, vec![0]); // 1 - 1

        let complex = zero_complex(&[2, 3, 1]);
        let result = hodge_decompose(&complex).unwrap();
        let (ranks, kappas) = result.euler_characteristics();
        assert_eq!(ranks, 0);
        assert_eq!(kappas, vec![0]);
    }

    #[test]
    fn matrix_block_multiplicities() {
        // Zero differentials over M_2: every block multiplicity is the rank.
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let spaces = vec![
            ModuleSpace::new(shape.clone(), 2),
            ModuleSpace::new(shape.clone(), 1),
        ];
        let diffs = vec![Morphism::zero(&spaces[0], &spaces[1])];
        let complex = CochainComplex::new(spaces, diffs, Tolerance::default()).unwrap();
        let result = hodge_decompose(&complex).unwrap();
        assert_eq!(result.degree(0).unwrap().multiplicities, vec![2]);
        assert_eq!(result.degree(1).unwrap().multiplicities, vec![1]);
    }

    #[test]
    fn non_free_kernel_is_rejected() {
        // d: A -> A over M_2 with entry E_11 has a kernel of complex
        // dimension 1 in a block of dimension 2, which is not a free
        // multiplicity.
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let space = ModuleSpace::new(shape.clone(), 1);
        let d = Morphism::from_entry_fn(&space, &space, |_, _| {
            AlgebraElement::matrix_unit(&shape, 0, 0, 0)
        });
        let complex = CochainComplex::from_differentials(vec![d], Tolerance::default()).unwrap();
        let err = hodge_decompose(&complex);
        assert!(matches!(
            err,
            Err(Error::NonIntegralMultiplicity {
                degree: 0,
                block: 0,
                ..
            })
        ));
    }
}

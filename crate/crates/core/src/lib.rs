//! Hodge theory for cochain complexes of free Hilbert modules over
//! finite-dimensional C*-algebras.
//!
//! The crate builds finite-dimensional C*-algebras as direct sums of matrix
//! blocks, free Hilbert modules over them, adjointable module morphisms, and
//! cochain complexes of those. For any complex it computes the degreewise
//! Laplacians, their parametrices and harmonic projectors, the resulting
//! orthogonal splitting of each cochain space into harmonic, exact, and
//! coexact parts, and the cohomology together with its blockwise free-rank
//! multiplicities.

pub mod algebra;
pub mod builders;
pub mod cochain;
pub mod eigen;
pub mod error;
pub mod hodge;
pub mod io;
pub mod module;
pub mod operator;
pub mod sampling;

pub use algebra::{AlgebraElement, AlgebraShape, Tolerance};
pub use builders::{
    coboundary_complex, group_algebra_shape, planted_random_complex, PlantedComplex,
    SimplicialComplex,
};
pub use cochain::CochainComplex;
pub use error::{Error, Result};
pub use hodge::{
    build_laplacians, hodge_decompose, CohomologyModule, DegreeData, DegreeResiduals, HodgeResult,
    HodgeSplit, KernelSplitReport,
};
pub use io::{
    decompose_report, hodge_report, looks_like_builder_spec, parse_builder_spec, validate_parts,
    BuilderSource, BuilderSpec, ComplexDto, DecomposeReport, HodgeReport, ModuleElementDto,
    ValidateReport,
};
pub use module::{ModuleElement, ModuleSpace, QuotientModule, QuotientNormReport, Submodule};
pub use operator::{
    image_projector, kernel_projector, spectral_parts, Morphism, Parametrix, ParametrixResiduals,
    SpectralDiagnostics,
};

//! JSON interchange and reports. Complex numbers travel as [re, im]
//! pairs, matrices row-major; the same schemas back the CLI and the C ABI.

use serde::{Deserialize, Serialize};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraShape, Tolerance};
use crate::builders::{coboundary_complex, planted_random_complex, SimplicialComplex};
use crate::cochain::CochainComplex;
use crate::error::{Error, Result};
use crate::hodge::HodgeResult;
use crate::module::{ModuleElement, ModuleSpace};
use crate::operator::Morphism;

/// { "blocks": [ matrix per algebra block ] }, each matrix a row-major
/// grid of [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraElementDto {
    pub blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl AlgebraElementDto {
    pub fn from_element(a: &AlgebraElement) -> Self {
        let blocks = a
            .blocks()
            .iter()
            .map(|m| {
                (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|j| [m[(i, j)].re, m[(i, j)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        AlgebraElementDto { blocks }
    }

    fn block_matrices(&self) -> Result<Vec<DMatrix<Complex64>>> {
        let mut out = Vec::with_capacity(self.blocks.len());
        for (b, rows) in self.blocks.iter().enumerate() {
            let n = rows.len();
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidInput(format!(
                        "block {b} is not square: row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
            }
            let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
            out.push(m);
        }
        Ok(out)
    }

    /// Reads the shape off the block sizes.
    pub fn infer_shape(&self) -> Result<AlgebraShape> {
        let dims: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        AlgebraShape::new(dims)
    }

    pub fn to_element(&self, shape: &AlgebraShape) -> Result<AlgebraElement> {
        AlgebraElement::from_blocks(shape.clone(), self.block_matrices()?)
    }
}

/// { "coords": [AlgebraElement, ...] }.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleElementDto {
    pub coords: Vec<AlgebraElementDto>,
}

impl ModuleElementDto {
    pub fn from_element(u: &ModuleElement) -> Self {
        ModuleElementDto {
            coords: u
                .coords()
                .iter()
                .map(AlgebraElementDto::from_element)
                .collect(),
        }
    }

    pub fn to_element(&self, space: &ModuleSpace) -> Result<ModuleElement> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.to_element(space.shape()))
            .collect::<Result<Vec<_>>>()?;
        ModuleElement::from_coords(space, &coords)
    }
}

/// { "source_rank", "target_rank", "entries" } with entries row-major:
/// entries[j][k] sends source coordinate k to target coordinate j.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDto {
    pub source_rank: usize,
    pub target_rank: usize,
    pub entries: Vec<Vec<AlgebraElementDto>>,
}

impl MorphismDto {
    pub fn from_morphism(m: &Morphism) -> Self {
        MorphismDto {
            source_rank: m.source().rank(),
            target_rank: m.target().rank(),
            entries: m
                .entries()
                .iter()
                .map(|row| row.iter().map(AlgebraElementDto::from_element).collect())
                .collect(),
        }
    }

    pub fn to_morphism(&self, shape: &AlgebraShape) -> Result<Morphism> {
        let source = ModuleSpace::new(shape.clone(), self.source_rank);
        let target = ModuleSpace::new(shape.clone(), self.target_rank);
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.to_element(shape))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::from_entries(&source, &target, &entries)
    }
}

/// { "block_dims", "ranks", "differentials" }: the full complex. The k-th
/// differential maps rank ranks[k] into rank ranks[k+1].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDto {
    pub block_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub differentials: Vec<MorphismDto>,
}

/// Spaces and differentials of a complex before the d^2 = 0 check.
pub struct ComplexParts {
    pub spaces: Vec<ModuleSpace>,
    pub differentials: Vec<Morphism>,
}

impl ComplexDto {
    pub fn from_complex(c: &CochainComplex) -> Self {
        ComplexDto {
            block_dims: c.shape().block_dims().to_vec(),
            ranks: c.spaces().iter().map(ModuleSpace::rank).collect(),
            differentials: c
                .differentials()
                .iter()
                .map(MorphismDto::from_morphism)
                .collect(),
        }
    }

    /// Decodes spaces and differentials, checking shapes and ranks but not
    /// the complex condition.
    pub fn to_parts(&self) -> Result<ComplexParts> {
        let shape = AlgebraShape::new(self.block_dims.clone())?;
        if self.ranks.is_empty() {
            return Err(Error::InvalidInput(
                "a complex needs at least one rank".into(),
            ));
        }
        if self.differentials.len() + 1 != self.ranks.len() {
            return Err(Error::InvalidInput(format!(
                "{} ranks need {} differentials, got {}",
                self.ranks.len(),
                self.ranks.len() - 1,
                self.differentials.len()
            )));
        }
        let spaces: Vec<ModuleSpace> = self
            .ranks
            .iter()
            .map(|&r| ModuleSpace::new(shape.clone(), r))
            .collect();
        let mut differentials = Vec::with_capacity(self.differentials.len());
        for (k, dto) in self.differentials.iter().enumerate() {
            if dto.source_rank != self.ranks[k] || dto.target_rank != self.ranks[k + 1] {
                return Err(Error::InvalidInput(format!(
                    "differential {k} maps rank {} to {}, expected {} to {}",
                    dto.source_rank,
                    dto.target_rank,
                    self.ranks[k],
                    self.ranks[k + 1]
                )));
            }
            differentials.push(dto.to_morphism(&shape)?);
        }
        Ok(ComplexParts {
            spaces,
            differentials,
        })
    }

    /// Decodes and validates the complex condition.
    pub fn to_complex(&self, tolerance: Tolerance) -> Result<CochainComplex> {
        let parts = self.to_parts()?;
        CochainComplex::new(parts.spaces, parts.differentials, tolerance)
    }
}

/// { "vertices", "simplices" }; faces are closed on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplicialComplexDto {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialComplexDto {
    pub fn from_simplicial(k: &SimplicialComplex) -> Self {
        let mut simplices = Vec::new();
        for dim in 0..=k.dimension() {
            simplices.extend(k.simplices(dim).iter().cloned());
        }
        SimplicialComplexDto {
            vertices: k.vertex_count(),
            simplices,
        }
    }

    pub fn to_simplicial(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_simplices(self.vertices, &self.simplices)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ToleranceDto {
    pub rel: f64,
    pub abs: f64,
}

impl ToleranceDto {
    pub fn from_tolerance(t: &Tolerance) -> Self {
        ToleranceDto {
            rel: t.rel,
            abs: t.abs,
        }
    }
}

/// Per-degree residuals of the complex condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub tolerance: ToleranceDto,
    pub block_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// ||d_(k+1) d_k|| for each consecutive pair.
    pub d_square_norms: Vec<f64>,
    /// Allowed bound for each pair.
    pub d_square_bounds: Vec<f64>,
    /// First degree whose pair exceeds its bound.
    pub failing_degree: Option<usize>,
}

/// Checks the complex condition on decoded parts without rejecting, so
/// invalid complexes still yield a full report.
pub fn validate_parts(parts: &ComplexParts, tolerance: &Tolerance) -> ValidateReport {
    let ranks: Vec<usize> = parts.spaces.iter().map(ModuleSpace::rank).collect();
    let block_dims = parts.spaces[0].shape().block_dims().to_vec();
    let mut norms = Vec::new();
    let mut bounds = Vec::new();
    let mut failing = None;
    for k in 0..parts.differentials.len().saturating_sub(1) {
        let residual = parts.differentials[k + 1]
            .compose(&parts.differentials[k])
            .map(|m| m.op_norm())
            .unwrap_or(f64::INFINITY);
        let bound = tolerance.threshold(
            1.0 + parts.differentials[k + 1].op_norm() * parts.differentials[k].op_norm(),
        );
        if residual > bound && failing.is_none() {
            failing = Some(k);
        }
        norms.push(residual);
        bounds.push(bound);
    }
    ValidateReport {
        valid: failing.is_none(),
        tolerance: ToleranceDto::from_tolerance(tolerance),
        block_dims,
        ranks,
        d_square_norms: norms,
        d_square_bounds: bounds,
        failing_degree: failing,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParametrixResidualsDto {
    pub left_identity: f64,
    pub right_identity: f64,
    pub kernel_annihilation: f64,
    pub projector_self_adjoint: f64,
}

/// One degree of the decomposition report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub rank: usize,
    pub multiplicities: Vec<usize>,
    pub parametrix_residuals: ParametrixResidualsDto,
    /// Smallest nonzero Laplacian eigenvalue magnitude.
    pub spectral_gap: Option<f64>,
    pub kernel_cut: f64,
    pub ill_separated: bool,
    pub decomposition_residual: f64,
    pub pairwise_residual: f64,
    pub image_split_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EulerReport {
    pub rank_alternating_sum: i64,
    pub multiplicity_alternating_sums: Vec<i64>,
}

/// The full decomposition report emitted by the hodge command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HodgeReport {
    pub tolerance: ToleranceDto,
    pub block_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub degrees: Vec<DegreeReport>,
    pub euler: EulerReport,
    pub worst_residual: f64,
}

pub fn hodge_report(result: &HodgeResult) -> HodgeReport {
    let complex = result.complex();
    let degrees = result
        .degrees()
        .iter()
        .map(|d| {
            let res = d.parametrix.residuals();
            let diag = d.parametrix.diagnostics();
            DegreeReport {
                degree: d.degree,
                rank: complex.space(d.degree).rank(),
                multiplicities: d.multiplicities.clone(),
                parametrix_residuals: ParametrixResidualsDto {
                    left_identity: res.left_identity,
                    right_identity: res.right_identity,
                    kernel_annihilation: res.kernel_annihilation,
                    projector_self_adjoint: res.projector_self_adjoint,
                },
                spectral_gap: diag.smallest_retained_abs,
                kernel_cut: diag.cut,
                ill_separated: diag.ill_separated,
                decomposition_residual: d.residuals.decomposition,
                pairwise_residual: d.residuals.pairwise_max,
                image_split_residual: d.residuals.image_split,
            }
        })
        .collect();
    let (rank_sum, kappa_sums) = result.euler_characteristics();
    HodgeReport {
        tolerance: ToleranceDto::from_tolerance(complex.tolerance()),
        block_dims: complex.shape().block_dims().to_vec(),
        ranks: complex.spaces().iter().map(ModuleSpace::rank).collect(),
        degrees,
        euler: EulerReport {
            rank_alternating_sum: rank_sum,
            multiplicity_alternating_sums: kappa_sums,
        },
        worst_residual: result.worst_residual(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub harmonic_exact: f64,
    pub harmonic_coexact: f64,
    pub exact_coexact: f64,
}

/// Report of one element split into harmonic, exact, and coexact parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub degree: usize,
    pub tolerance: ToleranceDto,
    pub input_norm: f64,
    pub harmonic: ModuleElementDto,
    pub exact: ModuleElementDto,
    pub coexact: ModuleElementDto,
    /// Element of C^(degree-1) mapped by the differential onto the exact
    /// part.
    pub exact_witness: ModuleElementDto,
    /// Element of C^(degree+1) mapped by the adjoint differential onto the
    /// coexact part.
    pub coexact_witness: ModuleElementDto,
    pub harmonic_norm: f64,
    pub exact_norm: f64,
    pub coexact_norm: f64,
    /// |x - harmonic - exact - coexact|.
    pub reconstruction_error: f64,
    /// Norms of the pairwise A-valued products of the three parts.
    pub orthogonality: OrthogonalityReport,
}

pub fn decompose_report(
    result: &HodgeResult,
    degree: usize,
    x: &ModuleElement,
) -> Result<DecomposeReport> {
    let split = result.decompose_element(degree, x)?;
    let sum = split.harmonic.add(&split.exact)?.add(&split.coexact)?;
    let reconstruction_error = x.distance(&sum);
    let orthogonality = OrthogonalityReport {
        harmonic_exact: split.harmonic.mod_product(&split.exact)?.norm(),
        harmonic_coexact: split.harmonic.mod_product(&split.coexact)?.norm(),
        exact_coexact: split.exact.mod_product(&split.coexact)?.norm(),
    };
    Ok(DecomposeReport {
        degree,
        tolerance: ToleranceDto::from_tolerance(result.complex().tolerance()),
        input_norm: x.norm(),
        harmonic: ModuleElementDto::from_element(&split.harmonic),
        exact: ModuleElementDto::from_element(&split.exact),
        coexact: ModuleElementDto::from_element(&split.coexact),
        exact_witness: ModuleElementDto::from_element(&split.exact_witness),
        coexact_witness: ModuleElementDto::from_element(&split.coexact_witness),
        harmonic_norm: split.harmonic.norm(),
        exact_norm: split.exact.norm(),
        coexact_norm: split.coexact.norm(),
        reconstruction_error,
        orthogonality,
    })
}

/// What to build and over which algebra, parsed from a builder spec string
/// such as "cycle:3 blocks=2,1 coeff=2" or
/// "planted ranks=2,3,2 plant=1,0;1,0;1,1 seed=7".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuilderSpec {
    pub source: BuilderSource,
    pub shape: AlgebraShape,
    pub coeff_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuilderSource {
    Cycle(usize),
    TetraBoundary,
    Planted {
        ranks: Vec<usize>,
        plant: Option<Vec<Vec<usize>>>,
        seed: Option<u64>,
    },
}

/// True when the string names a builder source; used to distinguish specs
/// from file paths.
pub fn looks_like_builder_spec(s: &str) -> bool {
    s.split_whitespace()
        .any(|t| t == "tetra-boundary" || t == "planted" || t.starts_with("cycle:"))
}

fn parse_usize_list(v: &str, what: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("cannot parse {what} entry {p:?}")))
        })
        .collect()
}

fn parse_group_factors(v: &str) -> Result<Vec<usize>> {
    v.split(['x', 'X'])
        .map(|p| {
            let p = p.trim();
            let p = p.strip_prefix(['Z', 'z']).unwrap_or(p);
            let p = p.strip_prefix('/').unwrap_or(p);
            p.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("cannot parse group factor {p:?}")))
        })
        .collect()
}

pub fn parse_builder_spec(s: &str) -> Result<BuilderSpec> {
    let mut source: Option<&str> = None;
    let mut cycle_n = 0usize;
    let mut ranks: Option<Vec<usize>> = None;
    let mut plant: Option<Vec<Vec<usize>>> = None;
    let mut seed: Option<u64> = None;
    let mut shape: Option<AlgebraShape> = None;
    let mut coeff_rank = 1usize;

    for tok in s.split_whitespace() {
        if let Some(n) = tok.strip_prefix("cycle:") {
            if source.is_some() {
                return Err(Error::InvalidInput("multiple builder sources".into()));
            }
            cycle_n = n
                .parse()
                .map_err(|_| Error::InvalidInput(format!("cannot parse cycle size {n:?}")))?;
            source = Some("cycle");
        } else if tok == "tetra-boundary" {
            if source.is_some() {
                return Err(Error::InvalidInput("multiple builder sources".into()));
            }
            source = Some("tetra");
        } else if tok == "planted" {
            if source.is_some() {
                return Err(Error::InvalidInput("multiple builder sources".into()));
            }
            source = Some("planted");
        } else if let Some(v) = tok.strip_prefix("ranks=") {
            ranks = Some(parse_usize_list(v, "rank")?);
        } else if let Some(v) = tok.strip_prefix("plant=") {
            let per_degree = v
                .split(';')
                .map(|d| parse_usize_list(d, "plant"))
                .collect::<Result<Vec<_>>>()?;
            plant = Some(per_degree);
        } else if let Some(v) = tok.strip_prefix("seed=") {
            seed = Some(
                v.parse()
                    .map_err(|_| Error::InvalidInput(format!("cannot parse seed {v:?}")))?,
            );
        } else if let Some(v) = tok.strip_prefix("group=") {
            if shape.is_some() {
                return Err(Error::InvalidInput(
                    "give at most one of group= and blocks=".into(),
                ));
            }
            shape = Some(crate::builders::group_algebra_shape(&parse_group_factors(
                v,
            )?)?);
        } else if let Some(v) = tok.strip_prefix("blocks=") {
            if shape.is_some() {
                return Err(Error::InvalidInput(
                    "give at most one of group= and blocks=".into(),
                ));
            }
            shape = Some(AlgebraShape::new(parse_usize_list(v, "block dimension")?)?);
        } else if let Some(v) = tok.strip_prefix("coeff=") {
            coeff_rank = v
                .parse()
                .map_err(|_| Error::InvalidInput(format!("cannot parse coefficient rank {v:?}")))?;
        } else {
            return Err(Error::InvalidInput(format!(
                "unknown builder spec token {tok:?}"
            )));
        }
    }

    let shape = shape.unwrap_or_else(AlgebraShape::scalar);
    let source = match source {
        Some("cycle") => BuilderSource::Cycle(cycle_n),
        Some("tetra") => BuilderSource::TetraBoundary,
        Some("planted") => {
            let ranks = ranks
                .ok_or_else(|| Error::InvalidInput("planted spec needs ranks=r0,r1,...".into()))?;
            BuilderSource::Planted { ranks, plant, seed }
        }
        _ => {
            return Err(Error::InvalidInput(
                "builder spec needs one of cycle:N, tetra-boundary, planted".into(),
            ))
        }
    };
    if coeff_rank != 1 && matches!(source, BuilderSource::Planted { .. }) {
        return Err(Error::InvalidInput(
            "coeff= applies to simplicial sources only".into(),
        ));
    }
    Ok(BuilderSpec {
        source,
        shape,
        coeff_rank,
    })
}

/// Feasible plant used when a planted spec gives none: step as many slots
/// as possible up the staircase, leaving cohomology only where ranks force
/// it.
pub fn default_plant(ranks: &[usize], blocks: usize) -> Vec<Vec<usize>> {
    let mut plant = Vec::with_capacity(ranks.len());
    let mut incoming = 0usize;
    for k in 0..ranks.len() {
        let free = ranks[k] - incoming.min(ranks[k]);
        let out = if k + 1 < ranks.len() {
            free.min(ranks[k + 1])
        } else {
            0
        };
        let kappa = free - out;
        plant.push(vec![kappa; blocks]);
        incoming = out;
    }
    plant
}

impl BuilderSpec {
    /// Builds the complex; `default_seed` applies when the spec itself
    /// carries no seed.
    pub fn build(&self, default_seed: u64, tolerance: Tolerance) -> Result<CochainComplex> {
        match &self.source {
            BuilderSource::Cycle(n) => {
                let k = SimplicialComplex::cycle_graph(*n)?;
                coboundary_complex(&k, &self.shape, self.coeff_rank, tolerance)
            }
            BuilderSource::TetraBoundary => {
                let k = SimplicialComplex::tetrahedron_boundary();
                coboundary_complex(&k, &self.shape, self.coeff_rank, tolerance)
            }
            BuilderSource::Planted { ranks, plant, seed } => {
                let plant = match plant {
                    Some(p) => p.clone(),
                    None => default_plant(ranks, self.shape.block_count()),
                };
                let built = planted_random_complex(
                    &self.shape,
                    ranks,
                    &plant,
                    seed.unwrap_or(default_seed),
                    tolerance,
                )?;
                Ok(built.complex)
            }
        }
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:e}")
}

pub fn render_validate_text(r: &ValidateReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "complex over blocks {:?}, ranks {:?}\n",
        r.block_dims, r.ranks
    ));
    s.push_str(&format!(
        "tolerance rel={} abs={}\n",
        fmt_f(r.tolerance.rel),
        fmt_f(r.tolerance.abs)
    ));
    if r.d_square_norms.is_empty() {
        s.push_str("no consecutive differentials to check\n");
    }
    for (k, (norm, bound)) in r.d_square_norms.iter().zip(&r.d_square_bounds).enumerate() {
        let status = if norm <= bound { "ok" } else { "FAIL" };
        s.push_str(&format!(
            "||d_{} d_{}|| = {} (bound {}) {}\n",
            k + 1,
            k,
            fmt_f(*norm),
            fmt_f(*bound),
            status
        ));
    }
    match r.failing_degree {
        None => s.push_str("valid: true\n"),
        Some(k) => s.push_str(&format!(
            "valid: false (d_{} d_{} is not zero within tolerance)\n",
            k + 1,
            k
        )),
    }
    s
}

pub fn render_hodge_text(r: &HodgeReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "complex over blocks {:?}, ranks {:?}\n",
        r.block_dims, r.ranks
    ));
    s.push_str(&format!(
        "tolerance rel={} abs={}\n",
        fmt_f(r.tolerance.rel),
        fmt_f(r.tolerance.abs)
    ));
    for d in &r.degrees {
        s.push_str(&format!(
            "degree {}: rank {}, multiplicities {:?}\n",
            d.degree, d.rank, d.multiplicities
        ));
        let p = &d.parametrix_residuals;
        s.push_str(&format!(
            "  parametrix: |gL+p-1|={} |Lg+p-1|={} |Lp|={} |p-p*|={}\n",
            fmt_f(p.left_identity),
            fmt_f(p.right_identity),
            fmt_f(p.kernel_annihilation),
            fmt_f(p.projector_self_adjoint)
        ));
        match d.spectral_gap {
            Some(gap) => s.push_str(&format!(
                "  spectral gap {} (kernel cut {}){}\n",
                fmt_f(gap),
                fmt_f(d.kernel_cut),
                if d.ill_separated {
                    " WARNING: ill-separated"
                } else {
                    ""
                }
            )),
            None => s.push_str(&format!(
                "  spectral gap none, operator vanishes (kernel cut {})\n",
                fmt_f(d.kernel_cut)
            )),
        }
        s.push_str(&format!(
            "  residuals: decomposition={} pairwise={} image-split={}\n",
            fmt_f(d.decomposition_residual),
            fmt_f(d.pairwise_residual),
            fmt_f(d.image_split_residual)
        ));
    }
    s.push_str(&format!(
        "euler: ranks alternating sum {}, multiplicities per block {:?}\n",
        r.euler.rank_alternating_sum, r.euler.multiplicity_alternating_sums
    ));
    s.push_str(&format!("worst residual: {}\n", fmt_f(r.worst_residual)));
    s
}

pub fn render_decompose_text(r: &DecomposeReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "degree {} split, input norm {}\n",
        r.degree,
        fmt_f(r.input_norm)
    ));
    s.push_str(&format!(
        "tolerance rel={} abs={}\n",
        fmt_f(r.tolerance.rel),
        fmt_f(r.tolerance.abs)
    ));
    s.push_str(&format!(
        "norms: harmonic={} exact={} coexact={}\n",
        fmt_f(r.harmonic_norm),
        fmt_f(r.exact_norm),
        fmt_f(r.coexact_norm)
    ));
    s.push_str(&format!(
        "reconstruction error {}\n",
        fmt_f(r.reconstruction_error)
    ));
    s.push_str(&format!(
        "orthogonality: (h,e)={} (h,c)={} (e,c)={}\n",
        fmt_f(r.orthogonality.harmonic_exact),
        fmt_f(r.orthogonality.harmonic_coexact),
        fmt_f(r.orthogonality.exact_coexact)
    ));
    for (name, dto) in [
        ("harmonic", &r.harmonic),
        ("exact", &r.exact),
        ("coexact", &r.coexact),
        ("exact witness", &r.exact_witness),
        ("coexact witness", &r.coexact_witness),
    ] {
        let json = serde_json::to_string(dto).expect("element reports always serialize");
        s.push_str(&format!("{name}: {json}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::hodge_decompose;

    #[test]
    fn algebra_element_round_trip() {
        let shape = AlgebraShape::new(vec![2, 1]).unwrap();
        let a = AlgebraElement::matrix_unit(&shape, 0, 0, 1)
            .add(&AlgebraElement::matrix_unit(&shape, 1, 0, 0).scale(Complex64::new(0.5, -2.0)))
            .unwrap();
        let dto = AlgebraElementDto::from_element(&a);
        assert_eq!(dto.infer_shape().unwrap(), shape);
        let back = dto.to_element(&shape).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn complex_round_trip_preserves_hodge_output() {
        let spec =
            parse_builder_spec("planted ranks=2,3,2 plant=1,0;1,0;1,1 blocks=1,2 seed=3").unwrap();
        let complex = spec.build(0, Tolerance::default()).unwrap();
        let dto = ComplexDto::from_complex(&complex);
        let json = serde_json::to_string(&dto).unwrap();
        let parsed: ComplexDto = serde_json::from_str(&json).unwrap();
        let back = parsed.to_complex(Tolerance::default()).unwrap();

        let r1 = hodge_report(&hodge_decompose(&complex).unwrap());
        let r2 = hodge_report(&hodge_decompose(&back).unwrap());
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn validate_reports_failure_degree() {
        let shape = AlgebraShape::scalar();
        let space = ModuleSpace::new(shape.clone(), 1);
        let one = Morphism::identity(&space);
        let parts = ComplexParts {
            spaces: vec![space.clone(), space.clone(), space],
            differentials: vec![one.clone(), one],
        };
        let report = validate_parts(&parts, &Tolerance::default());
        assert!(!report.valid);
        assert_eq!(report.failing_degree, Some(0));
        assert!(render_validate_text(&report).contains("valid: false"));
    }

    #[test]
    fn builder_spec_parsing() {
        let spec = parse_builder_spec("cycle:5").unwrap();
        assert_eq!(spec.source, BuilderSource::Cycle(5));
        assert_eq!(spec.shape, AlgebraShape::scalar());
        assert_eq!(spec.coeff_rank, 1);

        let spec = parse_builder_spec("group=Z2 cycle:3").unwrap();
        assert_eq!(spec.shape.block_dims(), &[1, 1]);

        let spec = parse_builder_spec("tetra-boundary blocks=2,1 coeff=2").unwrap();
        assert_eq!(spec.source, BuilderSource::TetraBoundary);
        assert_eq!(spec.shape.block_dims(), &[2, 1]);
        assert_eq!(spec.coeff_rank, 2);

        let spec = parse_builder_spec("planted ranks=2,3,2 seed=7").unwrap();
        match spec.source {
            BuilderSource::Planted { ranks, plant, seed } => {
                assert_eq!(ranks, vec![2, 3, 2]);
                assert!(plant.is_none());
                assert_eq!(seed, Some(7));
            }
            other => panic!("unexpected source {other:?}"),
        }

        assert!(parse_builder_spec("").is_err());
        assert!(parse_builder_spec("cycle:banana").is_err());
        assert!(parse_builder_spec("planted").is_err());
        assert!(parse_builder_spec("cycle:3 tetra-boundary").is_err());
        assert!(parse_builder_spec("mystery=1 cycle:3").is_err());
        assert!(parse_builder_spec("planted ranks=1,1 coeff=2").is_err());

        assert!(looks_like_builder_spec("cycle:4 blocks=2"));
        assert!(looks_like_builder_spec("planted ranks=1,1"));
        assert!(!looks_like_builder_spec("complexes/my-complex.json"));
    }

    #[test]
    fn default_plant_is_feasible() {
        for ranks in [vec![2, 3, 2], vec![1, 1], vec![4], vec![3, 1, 5, 2]] {
            let plant = default_plant(&ranks, 2);
            let spec = BuilderSpec {
                source: BuilderSource::Planted {
                    ranks: ranks.clone(),
                    plant: Some(plant),
                    seed: Some(1),
                },
                shape: AlgebraShape::new(vec![1, 1]).unwrap(),
                coeff_rank: 1,
            };
            spec.build(0, Tolerance::default())
                .unwrap_or_else(|e| panic!("ranks {ranks:?}: {e}"));
        }
    }

    #[test]
    fn simplicial_dto_closes_faces() {
        let dto = SimplicialComplexDto {
            vertices: 3,
            simplices: vec![vec![0, 1, 2]],
        };
        let k = dto.to_simplicial().unwrap();
        assert_eq!(k.simplex_counts(), vec![3, 3, 1]);
        let back = SimplicialComplexDto::from_simplicial(&k);
        assert_eq!(back.vertices, 3);
        assert_eq!(back.simplices.len(), 7);
    }
}

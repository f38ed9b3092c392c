//! Constructors of test complexes: simplicial coboundary complexes with
//! free module coefficients, planted-cohomology random complexes, and
//! abelian group algebra shapes.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::algebra::{AlgebraElement, AlgebraShape, Tolerance};
use crate::cochain::CochainComplex;
use crate::error::{Error, Result};
use crate::module::ModuleSpace;
use crate::operator::Morphism;
use crate::sampling::haar_unitary_morphism;

/// Finite abstract simplicial complex with strictly increasing vertex
/// tuples, closed under faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: usize,
    // simplices[k] holds the k-simplices as sorted (k+1)-tuples, in
    // lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Sorts each tuple, closes under faces, and adds every vertex as a
    /// 0-simplex.
    pub fn from_simplices(vertices: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidSimplicialComplex(
                "needs at least one vertex".into(),
            ));
        }
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new()];
        for v in 0..vertices {
            by_dim[0].insert(vec![v]);
        }
        let mut pending: Vec<Vec<usize>> = Vec::new();
        for s in simplices {
            if s.is_empty() {
                return Err(Error::InvalidSimplicialComplex(
                    "empty simplex tuple".into(),
                ));
            }
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::InvalidSimplicialComplex(format!(
                    "repeated vertex in simplex {s:?}"
                )));
            }
            if *t.last().unwrap() >= vertices {
                return Err(Error::InvalidSimplicialComplex(format!(
                    "simplex {s:?} references a vertex >= {vertices}"
                )));
            }
            pending.push(t);
        }
        while let Some(t) = pending.pop() {
            let k = t.len() - 1;
            if by_dim.len() <= k {
                by_dim.resize(k + 1, BTreeSet::new());
            }
            if !by_dim[k].insert(t.clone()) {
                continue;
            }
            if k >= 1 {
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    pending.push(face);
                }
            }
        }
        let simplices = by_dim
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        Ok(SimplicialComplex {
            vertices,
            simplices,
        })
    }

    /// The cycle on n vertices: edges {i, i+1 mod n}.
    pub fn cycle_graph(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSimplicialComplex(format!(
                "a cycle needs at least 3 vertices, got {n}"
            )));
        }
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        SimplicialComplex::from_simplices(n, &edges)
    }

    /// The boundary of the 3-simplex: all four triangles on 4 vertices,
    /// a combinatorial 2-sphere with simplex counts (4, 6, 4).
    pub fn tetrahedron_boundary() -> Self {
        let triangles = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        SimplicialComplex::from_simplices(4, &triangles)
            .expect("the tetrahedron boundary is a valid complex")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Largest k with a k-simplex.
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    /// The k-simplices in lexicographic order; empty above the dimension.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn simplex_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }
}

/// Cochain complex of a simplicial complex with coefficients in A^m:
/// C^k = A^(m * #k-simplices), d the alternating-sign vertex-deletion
/// coboundary tensored with the identity on the coefficients. The sign
/// arithmetic is exact, so d^2 = 0 exactly.
pub fn coboundary_complex(
    complex: &SimplicialComplex,
    shape: &AlgebraShape,
    coeff_rank: usize,
    tolerance: Tolerance,
) -> Result<CochainComplex> {
    if coeff_rank == 0 {
        return Err(Error::InvalidInput(
            "coefficient rank must be at least 1".into(),
        ));
    }
    let m = coeff_rank;
    let counts = complex.simplex_counts();
    let spaces: Vec<ModuleSpace> = counts
        .iter()
        .map(|&c| ModuleSpace::new(shape.clone(), m * c))
        .collect();

    let one = AlgebraElement::one(shape);
    let zero = AlgebraElement::zero(shape);
    let mut differentials = Vec::with_capacity(spaces.len().saturating_sub(1));
    for k in 0..spaces.len().saturating_sub(1) {
        let index_of: HashMap<&[usize], usize> = complex
            .simplices(k)
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        // signs[(t, s)] for (k+1)-simplex index t and k-simplex index s.
        let mut signs: HashMap<(usize, usize), f64> = HashMap::new();
        for (t, tau) in complex.simplices(k + 1).iter().enumerate() {
            for i in 0..tau.len() {
                let mut face = tau.clone();
                face.remove(i);
                let s = index_of[face.as_slice()];
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                signs.insert((t, s), sign);
            }
        }
        let d = Morphism::from_entry_fn(&spaces[k], &spaces[k + 1], |row, col| {
            let (t, ct) = (row / m, row % m);
            let (s, cs) = (col / m, col % m);
            if ct != cs {
                return zero.clone();
            }
            match signs.get(&(t, s)) {
                Some(&sign) => one.scale(Complex64::new(sign, 0.0)),
                None => zero.clone(),
            }
        });
        differentials.push(d);
    }

    CochainComplex::new(spaces, differentials, tolerance)
}

/// A complex built to have prescribed cohomology, together with the plant
/// and the unitaries that hide it.
#[derive(Debug, Clone)]
pub struct PlantedComplex {
    pub complex: CochainComplex,
    /// Planted multiplicities, per degree then per block.
    pub planted: Vec<Vec<usize>>,
    /// The unitary change of basis applied at each degree.
    pub unitaries: Vec<Morphism>,
}

/// Builds staircase differentials realizing the planted multiplicities,
/// then conjugates by seeded Haar unitaries: d_k' = U_(k+1) d_k U_k*.
/// Conjugation preserves per-block spectra, so the cohomology
/// multiplicities equal the plant exactly. The plant is feasible iff the
/// per-block staircase ranks out_b(k) = r_k - kappa_b(k) - out_b(k-1) are
/// nonnegative and out_b(N) = 0; infeasible plants are rejected.
pub fn planted_random_complex(
    shape: &AlgebraShape,
    ranks: &[usize],
    planted: &[Vec<usize>],
    seed: u64,
    tolerance: Tolerance,
) -> Result<PlantedComplex> {
    if ranks.is_empty() {
        return Err(Error::InconsistentPlant("no degrees given".into()));
    }
    if planted.len() != ranks.len() {
        return Err(Error::InconsistentPlant(format!(
            "{} rank entries but {} plant entries",
            ranks.len(),
            planted.len()
        )));
    }
    let blocks = shape.block_count();
    for (k, kap) in planted.iter().enumerate() {
        if kap.len() != blocks {
            return Err(Error::InconsistentPlant(format!(
                "plant at degree {k} has {} blocks, shape has {blocks}",
                kap.len()
            )));
        }
    }

    let top = ranks.len() - 1;
    // out[b][k], how many slots of block b step up from degree k.
    let mut out = vec![vec![0usize; ranks.len()]; blocks];
    for b in 0..blocks {
        let mut incoming = 0usize;
        for k in 0..=top {
            let used = planted[k][b] + incoming;
            if used > ranks[k] {
                return Err(Error::InconsistentPlant(format!(
                    "degree {k}, block {b}: harmonic {} plus incoming {incoming} exceeds rank {}",
                    planted[k][b], ranks[k]
                )));
            }
            out[b][k] = ranks[k] - used;
            incoming = out[b][k];
        }
        if out[b][top] != 0 {
            return Err(Error::InconsistentPlant(format!(
                "block {b}: {} slots left over at the top degree; the alternating sums of ranks and planted multiplicities must agree",
                out[b][top]
            )));
        }
    }

    let spaces: Vec<ModuleSpace> = ranks
        .iter()
        .map(|&r| ModuleSpace::new(shape.clone(), r))
        .collect();

    // Staircase d_k: block b sends its out-slots (the last out[b][k]
    // coordinates) to the in-slots (the first out[b][k] coordinates) of
    // degree k+1 by identity chunks.
    let mut staircase = Vec::with_capacity(top);
    for k in 0..top {
        let mut d_blocks = Vec::with_capacity(blocks);
        for (b, &n_b) in shape.block_dims().iter().enumerate() {
            let rows = ranks[k + 1] * n_b;
            let cols = ranks[k] * n_b;
            let mut m = DMatrix::<Complex64>::zeros(rows, cols);
            let o = out[b][k];
            let first_out = ranks[k] - o;
            for i in 0..o {
                for r in 0..n_b {
                    m[(i * n_b + r, (first_out + i) * n_b + r)] = Complex64::new(1.0, 0.0);
                }
            }
            d_blocks.push(m);
        }
        staircase.push(Morphism::from_blocks(&spaces[k], &spaces[k + 1], d_blocks)?);
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let unitaries: Vec<Morphism> = spaces
        .iter()
        .map(|s| haar_unitary_morphism(s, &mut rng))
        .collect();

    let mut differentials = Vec::with_capacity(top);
    for (k, d) in staircase.iter().enumerate() {
        let conjugated = unitaries[k + 1]
            .compose(d)?
            .compose(&unitaries[k].adjoint())?;
        differentials.push(conjugated);
    }

    let complex = CochainComplex::new(spaces, differentials, tolerance)?;
    Ok(PlantedComplex {
        complex,
        planted: planted.to_vec(),
        unitaries,
    })
}

/// C*-algebra of a finite abelian group given by its cyclic factor orders:
/// one 1x1 block per character, |G| = product of the factors.
pub fn group_algebra_shape(cyclic_factors: &[usize]) -> Result<AlgebraShape> {
    if cyclic_factors.is_empty() {
        return Err(Error::InvalidInput(
            "group needs at least one cyclic factor".into(),
        ));
    }
    if cyclic_factors.contains(&0) {
        return Err(Error::InvalidInput(
            "cyclic factor orders must be positive".into(),
        ));
    }
    let order: usize = cyclic_factors.iter().product();
    AlgebraShape::new(vec![1; order])
}

//! Acceptance suite. Each test covers one acceptance criterion at its
//! stated tolerance and prints a single pass/fail line.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use cstar_hodge::hodge::hodge_decompose;
use cstar_hodge::sampling::{gaussian_algebra_element, gaussian_module_element, gaussian_morphism};
use cstar_hodge::{
    coboundary_complex, image_projector, planted_random_complex, AlgebraShape, CochainComplex,
    ModuleSpace, Morphism, QuotientModule, SimplicialComplex, Tolerance,
};

const CORPUS_SIZE: usize = 100;
const RESIDUAL_TOL: f64 = 1e-8;

fn pass(criterion: usize, name: &str, info: String) {
    println!("criterion {criterion} ({name}): PASS {info}");
}

fn fail(criterion: usize, name: &str, why: String) -> ! {
    println!("criterion {criterion} ({name}): FAIL {why}");
    panic!("criterion {criterion} ({name}) failed: {why}");
}

/// A random feasible plant: per block, walk the staircase with random
/// image sizes.
fn random_plant<R: Rng>(ranks: &[usize], blocks: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut plant = vec![vec![0usize; blocks]; ranks.len()];
    for b in 0..blocks {
        let mut incoming = 0usize;
        for (k, row) in plant.iter_mut().enumerate() {
            let free = ranks[k] - incoming;
            let out = if k + 1 < ranks.len() {
                rng.random_range(0..=free.min(ranks[k + 1]))
            } else {
                0
            };
            row[b] = free - out;
            incoming = out;
        }
    }
    plant
}

/// The shared corpus: seeded random complexes with block dims <= 3,
/// at most 3 blocks, ranks <= 6, and at most 5 degrees.
fn corpus() -> Vec<(CochainComplex, Vec<Vec<usize>>)> {
    let tol = Tolerance::default();
    (0..CORPUS_SIZE)
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(0xACCE_0000 + i as u64);
            let blocks = rng.random_range(1..=3);
            let dims: Vec<usize> = (0..blocks).map(|_| rng.random_range(1..=3)).collect();
            let shape = AlgebraShape::new(dims).unwrap();
            let degrees = rng.random_range(2..=5);
            let ranks: Vec<usize> = loop {
                let r: Vec<usize> = (0..degrees).map(|_| rng.random_range(0..=6)).collect();
                if r.iter().any(|&x| x > 0) {
                    break r;
                }
            };
            let plant = random_plant(&ranks, blocks, &mut rng);
            let built = planted_random_complex(&shape, &ranks, &plant, rng.random(), tol).unwrap();
            (built.complex, plant)
        })
        .collect()
}

#[test]
fn criterion_1_parametrix_suite() {
    let name = "parametrix suite";
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (i, (complex, _)) in corpus().iter().enumerate() {
        let result = match hodge_decompose(complex) {
            Ok(r) => r,
            Err(e) => fail(1, name, format!("complex {i}: {e}")),
        };
        for d in result.degrees() {
            let scale = 1.0 + d.laplacian.op_norm();
            let r = d.parametrix.residuals();
            let p = d.parametrix.projector();
            let idempotent = p.compose(p).unwrap().distance(p);
            for (label, value) in [
                ("|gL + p - 1|", r.left_identity),
                ("|Lg + p - 1|", r.right_identity),
                ("|Lp|", r.kernel_annihilation),
                ("|p - p*|", r.projector_self_adjoint),
                ("|p^2 - p|", idempotent),
            ] {
                let relative = value / scale;
                worst = worst.max(relative);
                if relative > RESIDUAL_TOL {
                    fail(
                        1,
                        name,
                        format!("complex {i} degree {}: {label} = {relative:e}", d.degree),
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() > 60.0 {
        fail(1, name, format!("took {elapsed:.2?}, limit 60 s"));
    }
    pass(
        1,
        name,
        format!("(100 complexes, worst relative residual {worst:e}, {elapsed:.2?})"),
    );
}

#[test]
fn criterion_2_hodge_decomposition() {
    let name = "hodge decomposition";
    let mut worst_projector = 0.0f64;
    let mut worst_element = 0.0f64;
    for (i, (complex, _)) in corpus().iter().enumerate() {
        let result = hodge_decompose(complex).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0xE1E_0000 + i as u64);
        for d in result.degrees() {
            if d.residuals.decomposition > RESIDUAL_TOL || d.residuals.pairwise_max > RESIDUAL_TOL {
                fail(
                    2,
                    name,
                    format!(
                        "complex {i} degree {}: resolution {:e}, pairwise {:e}",
                        d.degree, d.residuals.decomposition, d.residuals.pairwise_max
                    ),
                );
            }
            worst_projector = worst_projector
                .max(d.residuals.decomposition)
                .max(d.residuals.pairwise_max);
            let space = complex.space(d.degree);
            for _ in 0..10 {
                let x = gaussian_module_element(&space, &mut rng);
                let split = result.decompose_element(d.degree, &x).unwrap();
                let sum = split
                    .harmonic
                    .add(&split.exact)
                    .unwrap()
                    .add(&split.coexact)
                    .unwrap();
                let err = x.distance(&sum);
                if err > RESIDUAL_TOL * x.norm() {
                    fail(
                        2,
                        name,
                        format!(
                            "complex {i} degree {}: reconstruct error {err:e} for |x| = {:e}",
                            d.degree,
                            x.norm()
                        ),
                    );
                }
                if x.norm() > 0.0 {
                    worst_element = worst_element.max(err / x.norm());
                }
            }
        }
    }
    pass(
        2,
        name,
        format!(
            "(worst projector residual {worst_projector:e}, worst relative reconstruction {worst_element:e})"
        ),
    );
}

#[test]
fn criterion_3_kernel_splittings() {
    let name = "kernel splittings";
    let mut worst = 0.0f64;
    for (i, (complex, _)) in corpus().iter().enumerate() {
        let result = hodge_decompose(complex).unwrap();
        for k in 0..=complex.length() {
            let report = result.kernel_splittings(k).unwrap();
            worst = worst.max(report.max());
            if report.max() > RESIDUAL_TOL {
                fail(
                    3,
                    name,
                    format!(
                        "complex {i} degree {k}: cocycle {:e}, adjoint {:e}, intersection {:e}, commutator {:e}",
                        report.cocycle_split,
                        report.adjoint_split,
                        report.intersection,
                        report.commutator
                    ),
                );
            }
        }
    }
    pass(3, name, format!("(worst identity residual {worst:e})"));
}

#[test]
fn criterion_4_planted_multiplicities() {
    let name = "planted multiplicities";
    let tol = Tolerance::default();
    for seed in 0..100u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0x9_1A57 + seed);
        let blocks = rng.random_range(1..=3);
        let dims: Vec<usize> = (0..blocks).map(|_| rng.random_range(1..=3)).collect();
        let shape = AlgebraShape::new(dims).unwrap();
        let degrees = rng.random_range(2..=5);
        let ranks: Vec<usize> = (0..degrees).map(|_| rng.random_range(1..=6)).collect();
        let plant = random_plant(&ranks, blocks, &mut rng);
        let built = planted_random_complex(&shape, &ranks, &plant, seed, tol).unwrap();
        let result = hodge_decompose(&built.complex).unwrap();

        for (k, d) in result.degrees().iter().enumerate() {
            if d.multiplicities != plant[k] {
                fail(
                    4,
                    name,
                    format!(
                        "seed {seed} degree {k}: recovered {:?}, planted {:?}",
                        d.multiplicities, plant[k]
                    ),
                );
            }
        }
        let (rank_sum, kappa_sums) = result.euler_characteristics();
        for (b, &kappa_sum) in kappa_sums.iter().enumerate() {
            if kappa_sum != rank_sum {
                fail(
                    4,
                    name,
                    format!(
                        "seed {seed}: euler mismatch in block {b}: ranks give {rank_sum}, multiplicities give {kappa_sum}"
                    ),
                );
            }
        }
    }
    pass(
        4,
        name,
        "(100 seeds, exact recovery and euler identity)".into(),
    );
}

/// Rank over the complex numbers by Gaussian elimination with partial
/// pivoting; independent of the library's spectral machinery.
fn complex_rank(mut m: Vec<Vec<Complex64>>, pivot_tol: f64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let (pivot_row, pivot_abs) = (rank..rows)
            .map(|i| (i, m[i][col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_abs <= pivot_tol {
            col += 1;
            continue;
        }
        m.swap(rank, pivot_row);
        let pivot_values = m[rank].clone();
        let pivot = pivot_values[col];
        for row in m.iter_mut().skip(rank + 1) {
            let factor = row[col] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_values).skip(col) {
                *x -= factor * p;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Assembles the realization of one algebra block of a morphism from its
/// entries.
fn realization_block(m: &Morphism, b: usize, dim: usize) -> Vec<Vec<Complex64>> {
    let rows = m.target().rank() * dim;
    let cols = m.source().rank() * dim;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); cols]; rows];
    for j in 0..m.target().rank() {
        for k in 0..m.source().rank() {
            let e = m.entry(j, k);
            let block = e.block(b);
            for bi in 0..dim {
                for bj in 0..dim {
                    out[j * dim + bi][k * dim + bj] = block[(bi, bj)];
                }
            }
        }
    }
    out
}

/// Per-block cohomology multiplicities by dimension counting:
/// kappa_b(k) = (dim Ker D_k - rank D_(k-1)) / n_b on the realization.
fn oracle_multiplicities(complex: &CochainComplex) -> Vec<Vec<usize>> {
    let shape = complex.shape().clone();
    let mut result = Vec::new();
    for k in 0..=complex.length() {
        let mut per_block = Vec::new();
        for (b, &dim) in shape.block_dims().iter().enumerate() {
            let space_dim = complex.space(k).rank() * dim;
            let rank_out = if k < complex.length() {
                complex_rank(realization_block(&complex.differential(k), b, dim), 1e-8)
            } else {
                0
            };
            let rank_in = if k > 0 {
                complex_rank(
                    realization_block(&complex.differential(k - 1), b, dim),
                    1e-8,
                )
            } else {
                0
            };
            let kernel_dim = space_dim - rank_out;
            assert!(kernel_dim >= rank_in, "not a complex");
            let h_dim = kernel_dim - rank_in;
            assert_eq!(h_dim % dim, 0, "cohomology not free on block {b}");
            per_block.push(h_dim / dim);
        }
        result.push(per_block);
    }
    result
}

#[test]
fn criterion_5_topological_oracles() {
    let name = "topological oracles";
    let tol = Tolerance::default();
    let scalar = AlgebraShape::scalar();
    let mixed = AlgebraShape::new(vec![2, 1]).unwrap();

    let mut checked = 0;
    let mut check = |complex: &CochainComplex, expected: &[Vec<usize>], label: &str| {
        let result = hodge_decompose(complex).unwrap();
        let recovered: Vec<Vec<usize>> = result
            .degrees()
            .iter()
            .map(|d| d.multiplicities.clone())
            .collect();
        if recovered != expected {
            fail(
                5,
                name,
                format!("{label}: multiplicities {recovered:?}, expected {expected:?}"),
            );
        }
        let oracle = oracle_multiplicities(complex);
        if oracle != recovered {
            fail(
                5,
                name,
                format!(
                    "{label}: spectral {recovered:?} disagrees with elimination oracle {oracle:?}"
                ),
            );
        }
        checked += 1;
    };

    for n in 3..=8 {
        let cycle = SimplicialComplex::cycle_graph(n).unwrap();
        let c1 = coboundary_complex(&cycle, &scalar, 1, tol).unwrap();
        check(&c1, &[vec![1], vec![1]], &format!("cycle C_{n} over M_1"));
        let c2 = coboundary_complex(&cycle, &mixed, 2, tol).unwrap();
        check(
            &c2,
            &[vec![2, 2], vec![2, 2]],
            &format!("cycle C_{n} over M_2+M_1, coefficient rank 2"),
        );
    }

    let sphere = SimplicialComplex::tetrahedron_boundary();
    let s1 = coboundary_complex(&sphere, &scalar, 1, tol).unwrap();
    check(
        &s1,
        &[vec![1], vec![0], vec![1]],
        "tetrahedron boundary over M_1",
    );
    let s2 = coboundary_complex(&sphere, &mixed, 2, tol).unwrap();
    check(
        &s2,
        &[vec![2, 2], vec![0, 0], vec![2, 2]],
        "tetrahedron boundary over M_2+M_1, coefficient rank 2",
    );

    pass(
        5,
        name,
        format!("({checked} complexes match the elimination oracle exactly)"),
    );
}

#[test]
fn criterion_6_quotient_structure() {
    let name = "quotient structure";
    let tol = Tolerance::default();
    let mut worst_gap = 0.0f64;
    let mut worst_shift = 0.0f64;
    for case in 0..1000u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0x9_0D00 + case);
        let blocks = rng.random_range(1..=2);
        let dims: Vec<usize> = (0..blocks).map(|_| rng.random_range(1..=2)).collect();
        let shape = AlgebraShape::new(dims).unwrap();
        let ambient = ModuleSpace::new(shape.clone(), rng.random_range(1..=4));
        let source = ModuleSpace::new(shape.clone(), rng.random_range(1..=3));
        let t = gaussian_morphism(&source, &ambient, &mut rng);
        let divisor = image_projector(&t, &tol).unwrap();
        let projector = divisor.projector().clone();
        let quotient = QuotientModule::new(divisor);

        let v = gaussian_module_element(&ambient, &mut rng);
        let u = projector
            .apply(&gaussian_module_element(&ambient, &mut rng))
            .unwrap();
        let quotient_norm = quotient.quotient_norm(&v).unwrap();

        // |v - u| >= |[v]| - 1e-8 for any u in the divisor.
        let dist = v.sub(&u).unwrap().norm();
        if dist < quotient_norm - RESIDUAL_TOL {
            fail(
                6,
                name,
                format!("case {case}: |v - u| = {dist} < quotient norm {quotient_norm}"),
            );
        }
        worst_gap = worst_gap.max(quotient_norm - dist);

        // The canonical witness u0 = Pv attains the quotient norm.
        let witness = projector.apply(&v).unwrap();
        let at_witness = v.sub(&witness).unwrap().norm();
        if (at_witness - quotient_norm).abs() > RESIDUAL_TOL {
            fail(
                6,
                name,
                format!(
                    "case {case}: witness distance {at_witness} vs quotient norm {quotient_norm}"
                ),
            );
        }

        // Quotient product is unchanged by divisor shifts.
        let w = gaussian_module_element(&ambient, &mut rng);
        let u2 = projector
            .apply(&gaussian_module_element(&ambient, &mut rng))
            .unwrap();
        let base = quotient.quotient_product(&v, &w).unwrap();
        let shifted = quotient
            .quotient_product(&v.add(&u).unwrap(), &w.add(&u2).unwrap())
            .unwrap();
        let shift = base.distance(&shifted);
        let scale = 1.0 + (v.norm() + u.norm()) * (w.norm() + u2.norm());
        if shift > RESIDUAL_TOL * scale {
            fail(
                6,
                name,
                format!("case {case}: quotient product moved by {shift:e} under divisor shift"),
            );
        }
        worst_shift = worst_shift.max(shift / scale);
    }
    pass(
        6,
        name,
        format!("(1000 pairs, worst witness slack {worst_gap:e}, worst shift {worst_shift:e})"),
    );
}

#[test]
fn criterion_7_axiom_suite() {
    let name = "axiom suite";
    let start = Instant::now();
    let eps = 1e-10;
    for case in 0..1000u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0xA1_0000 + case);
        let blocks = rng.random_range(1..=3);
        let dims: Vec<usize> = (0..blocks).map(|_| rng.random_range(1..=3)).collect();
        let shape = AlgebraShape::new(dims).unwrap();
        let space = ModuleSpace::new(shape.clone(), rng.random_range(1..=4));

        let a = gaussian_algebra_element(&shape, &mut rng);
        let u = gaussian_module_element(&space, &mut rng);
        let v = gaussian_module_element(&space, &mut rng);

        // C*-identity.
        let star_square = a.star().mul(&a).unwrap().norm();
        let norm_square = a.norm() * a.norm();
        if (star_square - norm_square).abs() > eps * (1.0 + norm_square) {
            fail(
                7,
                name,
                format!("case {case}: |a*a| = {star_square}, |a|^2 = {norm_square}"),
            );
        }

        // Axiom 1: (u, v a) = (u, v) a.
        let lhs = u.mod_product(&v.act(&a).unwrap()).unwrap();
        let rhs = u.mod_product(&v).unwrap().mul(&a).unwrap();
        let scale = 1.0 + u.norm() * v.norm() * a.norm();
        if lhs.distance(&rhs) > eps * scale {
            fail(
                7,
                name,
                format!("case {case}: A-linearity off by {:e}", lhs.distance(&rhs)),
            );
        }

        // Axiom 2: (u, v)* = (v, u).
        let sym = u
            .mod_product(&v)
            .unwrap()
            .star()
            .distance(&v.mod_product(&u).unwrap());
        if sym > eps * scale {
            fail(
                7,
                name,
                format!("case {case}: conjugate symmetry off by {sym:e}"),
            );
        }

        // Axiom 3: (u, u) is positive.
        let gram = u.mod_product(&u).unwrap();
        if !gram.is_positive(&Tolerance::default()) {
            fail(7, name, format!("case {case}: (u, u) not positive"));
        }

        // Axiom 4: (u, u) = 0 only for u = 0; numerically |u|^2 = |(u, u)|.
        if (gram.norm() - u.norm() * u.norm()).abs() > eps * (1.0 + gram.norm()) {
            fail(
                7,
                name,
                format!(
                    "case {case}: |(u,u)| = {} vs |u|^2 = {}",
                    gram.norm(),
                    u.norm() * u.norm()
                ),
            );
        }
        if u.norm() * u.norm() < f64::EPSILON && u.coords().iter().any(|c| c.norm() > eps) {
            fail(
                7,
                name,
                format!("case {case}: nonzero u with vanishing norm"),
            );
        }

        // Cauchy-Schwarz.
        let pairing = u.mod_product(&v).unwrap().norm();
        if pairing > u.norm() * v.norm() * (1.0 + eps) + eps {
            fail(
                7,
                name,
                format!(
                    "case {case}: |(u,v)| = {pairing} exceeds |u||v| = {}",
                    u.norm() * v.norm()
                ),
            );
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() > 10.0 {
        fail(7, name, format!("took {elapsed:.2?}, limit 10 s"));
    }
    pass(
        7,
        name,
        format!("(1000 cases at 1e-10 relative, {elapsed:.2?})"),
    );
}

#[test]
fn criterion_8_cli_determinism() {
    let name = "cli determinism";
    let exe = env!("CARGO_BIN_EXE_cstar-hodge");
    let dir = std::env::temp_dir().join("cstar-hodge-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    let run = |args: &[&str]| {
        let out = std::process::Command::new(exe)
            .args(args)
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };

    // Byte-identical generation for a fixed spec and seed.
    let spec = "planted ranks=2,3,2 plant=1,0;1,0;1,1 blocks=1,2 seed=7";
    let (code_a, gen_a) = run(&["generate", spec]);
    let (code_b, gen_b) = run(&["generate", spec]);
    if code_a != Some(0) || code_b != Some(0) {
        fail(
            8,
            name,
            format!("generate exited with {code_a:?} / {code_b:?}"),
        );
    }
    if gen_a != gen_b {
        fail(8, name, "two generate runs differ".into());
    }

    let path = dir.join("generated.json");
    std::fs::write(&path, &gen_a).unwrap();
    let path = path.to_str().unwrap();

    // validate accepts the generated file.
    let (validate_code, _) = run(&["validate", path]);
    if validate_code != Some(0) {
        fail(8, name, format!("validate exited with {validate_code:?}"));
    }

    // hodge on the round-tripped file is reproducible and equals the
    // in-memory decomposition of the same complex.
    let (h1_code, h1) = run(&["hodge", path, "--format", "json"]);
    let (_, h2) = run(&["hodge", path, "--format", "json"]);
    if h1_code != Some(0) {
        fail(8, name, format!("hodge exited with {h1_code:?}"));
    }
    if h1 != h2 {
        fail(8, name, "two hodge runs on the same file differ".into());
    }

    let dto: cstar_hodge::ComplexDto = serde_json::from_slice(&gen_a).unwrap();
    let complex = dto.to_complex(Tolerance::default()).unwrap();
    let report = cstar_hodge::hodge_report(&hodge_decompose(&complex).unwrap());
    let mut expected = serde_json::to_string_pretty(&report).unwrap();
    expected.push('\n');
    if h1 != expected.as_bytes() {
        fail(
            8,
            name,
            "CLI hodge report differs from the in-memory report".into(),
        );
    }

    pass(
        8,
        name,
        "(byte-identical generate, reproducible validate/hodge round trip)".into(),
    );
}

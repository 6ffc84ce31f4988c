//! Module-level invariants exercised on randomized inputs: polynomial
//! round-trips and residual bounds, spectral cross-oracles, torus-distance
//! metric properties, and checker consistency on generated data.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use specball::checks::{self, CheckOptions, InterpolationDataset, Verdict};
use specball::hypgeom;
use specball::linalg;
use specball::matrix::ComplexMatrix;
use specball::matspec::{self, Tolerances};
use specball::poly::{ComplexPolynomial, RootCluster};
use specball::symm::{self, SymmPoint};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    c(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| random_complex(rng, scale))
}

fn random_disc_point(rng: &mut ChaCha8Rng, max_radius: f64) -> Complex64 {
    loop {
        let z = random_complex(rng, max_radius);
        if z.norm() < max_radius {
            return z;
        }
    }
}

/// A similarity with one-norm condition below 50: identity plus a small
/// random perturbation, rejection-sampled on the measured condition.
fn random_similarity(rng: &mut ChaCha8Rng, dim: usize) -> (ComplexMatrix, ComplexMatrix) {
    loop {
        let mut p = ComplexMatrix::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += random_complex(rng, 0.35);
            }
        }
        if linalg::cond_one(&p) < 50.0 {
            let inv = linalg::inverse(&p).unwrap();
            return (p, inv);
        }
    }
}

// ---------------------------------------------------------------------------
// polynomial invariants
// ---------------------------------------------------------------------------

prop_compose! {
    /// Monic polynomial of degree 1..=12 with non-leading coefficients in
    /// the unit bidisc (keeps every root within the Cauchy bound 2).
    fn monic_poly()(degree in 1usize..=12)
        (coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), degree),
         degree in Just(degree))
        -> ComplexPolynomial {
        let mut all: Vec<Complex64> = coeffs.into_iter().map(|(re, im)| c(re, im)).collect();
        all.push(c(1.0, 0.0));
        let _ = degree;
        ComplexPolynomial::new(all)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn roots_satisfy_residual_bound(p in monic_poly()) {
        let clusters = p.roots(1e-6).unwrap();
        let degree = p.degree().unwrap();
        let total: usize = clusters.iter().map(|cl| cl.multiplicity).sum();
        prop_assert_eq!(total, degree);
        let max_coeff = p.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
        for cl in &clusters {
            let residual = p.eval(cl.center).norm();
            // a multiple cluster's center is not a raw root; scale the bound
            // by its spread contribution
            let allowance = 1e-8 * max_coeff.max(1.0)
                + (cl.spread + cl.uncertainty).powi(cl.multiplicity as i32);
            prop_assert!(
                residual <= allowance,
                "residual {residual:.3e} over allowance {allowance:.3e}"
            );
        }
    }
}

#[test]
fn round_trip_recovers_well_separated_clusters() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _case in 0..200 {
        // up to 4 clusters, centers in 0.8 D pairwise separated by 0.25,
        // multiplicities summing to at most 12
        let k = rng.random_range(1..=4usize);
        let mut centers: Vec<Complex64> = Vec::new();
        while centers.len() < k {
            let cand = random_disc_point(&mut rng, 0.8);
            if centers.iter().all(|&s| (s - cand).norm() > 0.25) {
                centers.push(cand);
            }
        }
        let mut remaining = 12usize.saturating_sub(k);
        let clusters: Vec<RootCluster> = centers
            .iter()
            .map(|&center| {
                let extra = rng.random_range(0..=remaining.min(4));
                remaining -= extra;
                RootCluster::new(center, 1 + extra)
            })
            .collect();
        let p = ComplexPolynomial::from_roots(&clusters);
        let got = p.roots(1e-6).unwrap();
        assert_eq!(got.len(), clusters.len(), "cluster count");
        for want in &clusters {
            let found = got
                .iter()
                .find(|g| (g.center - want.center).norm() < 1e-7)
                .unwrap_or_else(|| panic!("center {} not recovered", want.center));
            assert_eq!(found.multiplicity, want.multiplicity);
        }
    }
}

// ---------------------------------------------------------------------------
// spectral invariants
// ---------------------------------------------------------------------------

/// Direct sum of Jordan blocks (eigenvalue, size) conjugated by a
/// well-conditioned similarity.
fn conjugated_jordan(
    rng: &mut ChaCha8Rng,
    blocks: &[(Complex64, usize)],
) -> (ComplexMatrix, usize) {
    let dim: usize = blocks.iter().map(|&(_, s)| s).sum();
    let mut j = ComplexMatrix::zeros(dim);
    let mut offset = 0;
    for &(lambda, size) in blocks {
        for i in 0..size {
            j[(offset + i, offset + i)] = lambda;
            if i + 1 < size {
                j[(offset + i, offset + i + 1)] = c(1.0, 0.0);
            }
        }
        offset += size;
    }
    let (p, p_inv) = random_similarity(rng, dim);
    (&(&p * &j) * &p_inv, dim)
}

#[test]
fn min_poly_routes_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tols = Tolerances::default();
    for case in 0..60 {
        let dim = rng.random_range(2..=8usize);
        let a = random_matrix(&mut rng, dim, 0.3);
        let summary = matspec::spectral_summary(&a, &tols).unwrap();
        let krylov = matspec::min_poly_krylov(&a, &tols).unwrap();
        assert_eq!(
            summary.min_poly.degree(),
            krylov.degree(),
            "case {case}: degree mismatch"
        );
        for k in 0..summary.min_poly.coeffs().len() {
            let d = (summary.min_poly.coeff(k) - krylov.coeff(k)).norm();
            assert!(d < 1e-6, "case {case}, coefficient {k}: {d:.3e}");
        }
    }
}

#[test]
fn min_poly_routes_agree_on_jordan_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // clusters below the attainable eps^(1/m) accuracy merge by inclusion
    // radii; the looser tolerance keeps the comparison honest either way
    let tols = Tolerances {
        cluster_tol: 1e-4,
        ..Tolerances::default()
    };
    let shapes: Vec<Vec<(Complex64, usize)>> = vec![
        vec![(c(0.3, 0.1), 2), (c(0.3, 0.1), 2)],
        vec![(c(0.2, -0.4), 3), (c(0.2, -0.4), 1)],
        vec![(c(-0.5, 0.0), 2), (c(0.4, 0.3), 2)],
        vec![(c(0.1, 0.0), 4)],
        vec![(c(0.25, 0.25), 2), (c(-0.3, 0.1), 1), (c(0.6, 0.0), 1)],
        vec![(c(0.0, 0.0), 3), (c(0.5, -0.2), 2)],
    ];
    for (case, blocks) in shapes.iter().enumerate() {
        for _rep in 0..8 {
            let (a, dim) = conjugated_jordan(&mut rng, blocks);
            let summary = matspec::spectral_summary(&a, &tols).unwrap();
            let krylov = matspec::min_poly_krylov(&a, &tols).unwrap();
            assert_eq!(
                summary.min_poly.degree(),
                krylov.degree(),
                "case {case} dim {dim}: degrees {:?} vs {:?}",
                summary.min_poly.degree(),
                krylov.degree()
            );
            for k in 0..summary.min_poly.coeffs().len() {
                let d = (summary.min_poly.coeff(k) - krylov.coeff(k)).norm();
                assert!(d < 1e-6, "case {case}, coefficient {k}: {d:.3e}");
            }
        }
    }
}

#[test]
fn similarity_preserves_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tols = Tolerances::default();
    for _case in 0..40 {
        let dim = rng.random_range(2..=8usize);
        let a = random_matrix(&mut rng, dim, 0.3);
        let (p, p_inv) = random_similarity(&mut rng, dim);
        let conj = &(&p_inv * &a) * &p;
        let mut ev_a: Vec<Complex64> = matspec::spectral_summary(&a, &tols)
            .unwrap()
            .eigen
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.alg_mult))
            .collect();
        let mut ev_c: Vec<Complex64> = matspec::spectral_summary(&conj, &tols)
            .unwrap()
            .eigen
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.alg_mult))
            .collect();
        let key = |z: &Complex64| (z.re, z.im);
        ev_a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        ev_c.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (x, y) in ev_a.iter().zip(&ev_c) {
            assert!((x - y).norm() < 1e-6, "{x} vs {y}");
        }
    }
}

#[test]
fn companion_round_trip_to_high_accuracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _case in 0..50 {
        let degree = rng.random_range(1..=10usize);
        let mut coeffs: Vec<Complex64> =
            (0..degree).map(|_| random_complex(&mut rng, 0.8)).collect();
        coeffs.push(c(1.0, 0.0));
        let p = ComplexPolynomial::new(coeffs);
        let w = matspec::companion(&p).unwrap();
        let chi = matspec::char_poly(&w);
        for k in 0..=degree {
            assert!((chi.coeff(k) - p.coeff(k)).norm() < 1e-10);
        }
    }
}

#[test]
fn index_equals_largest_jordan_block() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tols = Tolerances {
        cluster_tol: 1e-4,
        ..Tolerances::default()
    };
    let configs: Vec<Vec<usize>> = vec![
        vec![3, 1],
        vec![2, 2],
        vec![4, 2, 1],
        vec![1, 1, 1],
        vec![3, 3],
    ];
    for sizes in configs {
        let lambda = random_disc_point(&mut rng, 0.7);
        let blocks: Vec<(Complex64, usize)> = sizes.iter().map(|&s| (lambda, s)).collect();
        let (a, _) = conjugated_jordan(&mut rng, &blocks);
        let summary = matspec::spectral_summary(&a, &tols).unwrap();
        assert_eq!(summary.eigen.len(), 1, "sizes {sizes:?}");
        assert_eq!(
            summary.eigen[0].index,
            *sizes.iter().max().unwrap(),
            "sizes {sizes:?}"
        );
    }
}

#[test]
fn min_poly_annihilates_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let tols = Tolerances::default();
    for _case in 0..40 {
        let dim = rng.random_range(2..=8usize);
        // spectra well inside the disc
        let a = random_matrix(&mut rng, dim, 0.9 / dim as f64);
        let summary = matspec::spectral_summary(&a, &tols).unwrap();
        let residual = matspec::poly_at_matrix(&summary.min_poly, &a).norm_fro();
        assert!(residual < 1e-6, "residual {residual:.3e}");
    }
}

// ---------------------------------------------------------------------------
// torus distance invariants
// ---------------------------------------------------------------------------

fn projected_point(rng: &mut ChaCha8Rng, dim: usize) -> SymmPoint {
    loop {
        let w = random_matrix(rng, dim, 0.3);
        if matspec::is_in_spectral_ball(&w, &Tolerances::default())
            .unwrap()
            .inside
        {
            return symm::pi_n(&w);
        }
    }
}

#[test]
fn pn_distance_triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in [2usize, 3] {
        let grid = if n == 2 { 512 } else { 96 };
        for _case in 0..6 {
            let s = projected_point(&mut rng, n);
            let t = projected_point(&mut rng, n);
            let u = projected_point(&mut rng, n);
            let d_st = symm::pn_distance(&s, &t, grid, true, false, 1e-6)
                .unwrap()
                .value;
            let d_tu = symm::pn_distance(&t, &u, grid, true, false, 1e-6)
                .unwrap()
                .value;
            let d_su = symm::pn_distance(&s, &u, grid, true, false, 1e-6)
                .unwrap()
                .value;
            assert!(
                d_su <= d_st + d_tu + 1e-7,
                "n = {n}: {d_su} > {d_st} + {d_tu}"
            );
        }
    }
}

#[test]
fn pn_distance_bounded_by_disc_distance_of_preimages() {
    // data that admits an interpolant by construction: S, T are projections
    // of values of one holomorphic map, so the torus distance cannot exceed
    // the disc distance of the parameters
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in [2usize, 3] {
        let grid = if n == 2 { 1024 } else { 128 };
        for case in 0..6 {
            let map = checks::generate_map(n, 3, 1000 + case).unwrap();
            let zeta1 = random_disc_point(&mut rng, 0.9);
            let zeta2 = random_disc_point(&mut rng, 0.9);
            if (zeta1 - zeta2).norm() < 1e-3 {
                continue;
            }
            let s = symm::pi_n(&map.eval(zeta1));
            let t = symm::pi_n(&map.eval(zeta2));
            let d = symm::pn_distance(&s, &t, grid, true, false, 1e-6).unwrap();
            let bound = hypgeom::poincare_dist(zeta1, zeta2).unwrap();
            assert!(
                d.value <= bound + 1e-6,
                "n = {n} case {case}: {} > {bound}",
                d.value
            );
        }
    }
}

// ---------------------------------------------------------------------------
// checker consistency
// ---------------------------------------------------------------------------

#[test]
fn schwarz_invariant_under_disc_automorphism_and_similarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let opts = CheckOptions::default();
    for case in 0..10 {
        let dim = rng.random_range(2..=4usize);
        let map = checks::generate_map(dim, 2, 2000 + case).unwrap();
        let zeta1 = random_disc_point(&mut rng, 0.8);
        let zeta2 = random_disc_point(&mut rng, 0.8);
        if (zeta1 - zeta2).norm() < 1e-2 {
            continue;
        }
        let w1 = map.eval(zeta1);
        let w2 = map.eval(zeta2);
        let data = InterpolationDataset::new(
            vec![(zeta1, w1.clone()), (zeta2, w2.clone())],
            &opts.tolerances,
        )
        .unwrap();
        let base = checks::check_schwarz(&data, &opts).unwrap();

        // disc automorphism of the nodes, similarity on the matrices
        let a = random_disc_point(&mut rng, 0.6);
        let phi = |z: Complex64| (z - a) / (c(1.0, 0.0) - a.conj() * z);
        let (p, p_inv) = random_similarity(&mut rng, dim);
        let t1 = &(&p_inv * &w1) * &p;
        let t2 = &(&p_inv * &w2) * &p;
        let moved =
            InterpolationDataset::new(vec![(phi(zeta1), t1), (phi(zeta2), t2)], &opts.tolerances)
                .unwrap();
        let transformed = checks::check_schwarz(&moved, &opts).unwrap();
        assert_eq!(base.verdict, transformed.verdict, "case {case}");
        assert!(
            (base.margin - transformed.margin).abs() < 1e-8,
            "case {case}: margins {} vs {}",
            base.margin,
            transformed.margin
        );
    }
}

#[test]
fn selfmap_bound_holds_for_trace_surrogate_family() {
    // G(X) = F(eta tr(X)/n) factors through the disc, so it is a holomorphic
    // self-map of the ball and the growth bound must hold
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let opts = CheckOptions::default();
    let eta = c(0.7, 0.1);
    for case in 0..8 {
        let dim = rng.random_range(2..=4usize);
        let map = checks::generate_map(dim, 3, 3000 + case).unwrap();
        let g = {
            let map = map.clone();
            move |x: &ComplexMatrix| -> specball::Result<ComplexMatrix> {
                let arg = eta * x.trace() / x.dim() as f64;
                Ok(map.eval(arg))
            }
        };
        for sample in 0..25 {
            let raw = random_matrix(&mut rng, dim, 0.5);
            let membership = matspec::is_in_spectral_ball(&raw, &opts.tolerances).unwrap();
            let radius = 1.0 - membership.margin;
            if radius <= 1e-6 {
                continue;
            }
            let target = rng.random_range(0.05..0.9);
            let x = raw.scale(c(target / radius, 0.0));
            let report = checks::check_selfmap_bound(&g, &x, &opts).unwrap();
            assert_eq!(
                report.verdict,
                Verdict::Pass,
                "case {case} sample {sample}: margin {}",
                report.margin
            );
        }
    }
}

#[test]
fn necc_checkers_agree_on_two_point_data() {
    // on non-derogatory two-point data the full sampler and the boundary
    // supremum must agree in verdict, and their margins must agree in sign
    // away from the decision boundary
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let opts = CheckOptions {
        boundary_grid: 512,
        interior_rings: 4,
        ..CheckOptions::default()
    };
    let mut compared = 0;
    for case in 0..40 {
        let dim = rng.random_range(2..=4usize);
        let (zeta1, zeta2, w1, w2) = if case % 2 == 0 {
            // interpolant exists by construction
            let map = checks::generate_map(dim, 2, 4000 + case).unwrap();
            let z1 = random_disc_point(&mut rng, 0.8);
            let z2 = random_disc_point(&mut rng, 0.8);
            (z1, z2, map.eval(z1), map.eval(z2))
        } else {
            // unrelated random draws, may fail the condition
            let m1 = checks::generate_map(dim, 1, 5000 + case).unwrap();
            let m2 = checks::generate_map(dim, 1, 6000 + case).unwrap();
            let z1 = random_disc_point(&mut rng, 0.4);
            let z2 = random_disc_point(&mut rng, 0.4);
            (
                z1,
                z2,
                m1.eval(random_disc_point(&mut rng, 0.9)),
                m2.eval(random_disc_point(&mut rng, 0.9)),
            )
        };
        if (zeta1 - zeta2).norm() < 1e-2 {
            continue;
        }
        let tols = &opts.tolerances;
        if !matspec::is_non_derogatory(&w1, tols).unwrap_or(false)
            || !matspec::is_non_derogatory(&w2, tols).unwrap_or(false)
        {
            continue;
        }
        let data = InterpolationDataset::new(vec![(zeta1, w1), (zeta2, w2)], tols).unwrap();
        let full = checks::check_necc(&data, &opts).unwrap();
        let two_point = checks::check_necc_two_point(&data, &opts).unwrap();
        assert_eq!(full.verdict, two_point.verdict, "case {case}");
        if full.margin.abs() > 1e-9 && two_point.margin.abs() > 1e-9 {
            assert_eq!(
                full.margin.is_sign_positive(),
                two_point.margin.is_sign_positive(),
                "case {case}: margins {} vs {}",
                full.margin,
                two_point.margin
            );
        }
        compared += 1;
    }
    assert!(compared >= 10, "only {compared} comparable cases");
}

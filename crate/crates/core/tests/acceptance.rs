//! Acceptance suite: every release criterion as one test, each printing a
//! pass/fail line with its measured runtime. Tolerances are pinned here and
//! are not adjustable from outside.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use specball::checks::{self, CheckOptions, InterpolationDataset, Verdict};
use specball::hypgeom::{self, BlaschkeProduct};
use specball::matrix::ComplexMatrix;
use specball::matspec::{self, SpectralSummary, Tolerances};
use specball::poly::{ComplexPolynomial, RootCluster};
use specball::symm::{self, SymmPoint};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Criterion {
    name: &'static str,
    budget_s: f64,
    started: Instant,
}

impl Criterion {
    fn start(name: &'static str, budget_s: f64) -> Self {
        Criterion {
            name,
            budget_s,
            started: Instant::now(),
        }
    }

    fn finish(self) {
        let elapsed = self.started.elapsed().as_secs_f64();
        println!(
            "acceptance {}: PASS ({elapsed:.2}s, budget {}s)",
            self.name, self.budget_s
        );
        assert!(
            elapsed < self.budget_s,
            "{} exceeded its {}s budget: {elapsed:.2}s",
            self.name,
            self.budget_s
        );
    }
}

/// Both sides of the two-sided eigenvalue-product bound.
fn schwarz_products(w1: &SpectralSummary, w2: &SpectralSummary) -> (f64, f64) {
    let product = |mu: Complex64, against: &SpectralSummary| -> f64 {
        against
            .eigen
            .iter()
            .map(|e| {
                hypgeom::pseudo_dist(mu, e.value)
                    .unwrap()
                    .powi(e.index as i32)
            })
            .product()
    };
    let over_first = w2
        .eigen
        .iter()
        .map(|e| product(e.value, w1))
        .fold(0.0, f64::max);
    let over_second = w1
        .eigen
        .iter()
        .map(|e| product(e.value, w2))
        .fold(0.0, f64::max);
    (over_first, over_second)
}

fn double_nilpotent_block(m: usize) -> ComplexMatrix {
    let n = 2 * m;
    let mut a = ComplexMatrix::zeros(n);
    for i in 1..m {
        a[(i, i - 1)] = c(1.0, 0.0);
    }
    for i in (m + 1)..n {
        a[(i, i - 1)] = c(1.0, 0.0);
    }
    a
}

fn shifted_power_companion(m: usize, alpha: Complex64) -> ComplexMatrix {
    let n = 2 * m;
    let mut coeffs = vec![c(0.0, 0.0); n + 1];
    coeffs[n] = c(1.0, 0.0);
    coeffs[m] = -alpha;
    matspec::companion(&ComplexPolynomial::new(coeffs)).unwrap()
}

#[test]
fn criterion_1_fd_family_equality() {
    let crit = Criterion::start("1 (block-family equality of the product bound)", 1.0);
    let tols = Tolerances::default();
    let opts = CheckOptions::default();
    let zetas = [
        c(0.3, 0.0),
        Complex64::from_polar(0.5, std::f64::consts::PI / 3.0),
        c(0.0, 0.7),
    ];
    for (n, d) in [(4usize, 2usize), (4, 3), (5, 3)] {
        for &zeta in &zetas {
            let w1 = matspec::example_fd(n, d, c(0.0, 0.0)).unwrap();
            let w2 = matspec::example_fd(n, d, zeta).unwrap();
            let s1 = matspec::spectral_summary(&w1, &tols).unwrap();
            let s2 = matspec::spectral_summary(&w2, &tols).unwrap();
            let (p1, p2) = schwarz_products(&s1, &s2);
            assert!(
                (p1 - zeta.norm()).abs() < 1e-7,
                "(n,d) = ({n},{d}), zeta = {zeta}: first product {p1} vs {}",
                zeta.norm()
            );
            assert!(
                (p2 - zeta.norm().powi(2)).abs() < 1e-7,
                "(n,d) = ({n},{d}), zeta = {zeta}: second product {p2} vs {}",
                zeta.norm().powi(2)
            );
            let data =
                InterpolationDataset::new(vec![(c(0.0, 0.0), w1), (zeta, w2)], &tols).unwrap();
            let report = checks::check_schwarz(&data, &opts).unwrap();
            assert_eq!(report.verdict, Verdict::Pass);
            assert!(
                report.margin.abs() < 1e-7,
                "(n,d) = ({n},{d}), zeta = {zeta}: margin {}",
                report.margin
            );
        }
    }
    crit.finish();
}

#[test]
fn criterion_2_power_example_reproduction() {
    let crit = Criterion::start("2 (nilpotent-pair example reproduction)", 2.0);
    let tols = Tolerances::default();
    let opts = CheckOptions {
        boundary_grid: 4096,
        ..CheckOptions::default()
    };
    let alphas = [
        c(0.4, 0.0),
        Complex64::from_polar(0.6, std::f64::consts::PI / 4.0),
    ];
    for m in [2usize, 3] {
        for &alpha in &alphas {
            let mf = m as f64;
            let w1 = double_nilpotent_block(m);
            let w2 = shifted_power_companion(m, alpha);

            // boundary supremum of the two-point form matches the closed form
            let zeta2_far = c(0.65, 0.0);
            let data = InterpolationDataset::new(
                vec![(c(0.0, 0.0), w1.clone()), (zeta2_far, w2.clone())],
                &tols,
            )
            .unwrap();
            let report = checks::check_necc_two_point(&data, &opts).unwrap();
            let sup = hypgeom::pseudo_dist(c(0.0, 0.0), zeta2_far).unwrap() - report.margin;
            let expected_sup = mf * alpha.norm() / (2.0 * mf - mf * alpha.norm());
            assert!(
                (sup - expected_sup).abs() < 1e-6,
                "m = {m}, alpha = {alpha}: sup {sup} vs {expected_sup}"
            );

            // the product pair is (|alpha|, 0)
            let s1 = matspec::spectral_summary(&w1, &tols).unwrap();
            let s2 = matspec::spectral_summary(&w2, &tols).unwrap();
            let (p1, p2) = schwarz_products(&s1, &s2);
            assert!(
                (p1 - alpha.norm()).abs() < 1e-7,
                "m = {m}, alpha = {alpha}: first product {p1}"
            );
            assert!(p2 < 1e-7, "m = {m}, alpha = {alpha}: second product {p2}");

            // inside the window the Pick condition holds but the product
            // bound rules an interpolant out
            let zeta2 = c((expected_sup + alpha.norm()) / 2.0, 0.0);
            let data = InterpolationDataset::new(
                vec![(c(0.0, 0.0), w1.clone()), (zeta2, w2.clone())],
                &tols,
            )
            .unwrap();
            let necc = checks::check_necc(&data, &opts).unwrap();
            assert_eq!(
                necc.verdict,
                Verdict::Pass,
                "m = {m}, alpha = {alpha}: pick-positivity should hold in the window"
            );
            let schwarz = checks::check_schwarz(&data, &opts).unwrap();
            assert_eq!(
                schwarz.verdict,
                Verdict::Fail,
                "m = {m}, alpha = {alpha}: product bound should fail in the window"
            );
        }
    }
    crit.finish();
}

#[test]
fn criterion_3_selfmap_sharpness() {
    let crit = Criterion::start("3 (self-map growth bound sharpness)", 1.0);
    let tols = Tolerances::default();
    for n in 1..=6usize {
        for d in 1..=n {
            for lambda in [c(0.25, 0.0), c(0.0, 0.5)] {
                // single eigenvalue of multiplicity n, trace untouched by
                // the strictly-triangular perturbation
                let mut a = ComplexMatrix::identity(n).scale(lambda);
                if n >= 2 {
                    a[(0, 1)] = c(0.3, 0.0);
                }
                if n >= 3 {
                    a[(1, 2)] = c(0.1, 0.0);
                }

                let g0 = matspec::sharpness_map(d, n, &ComplexMatrix::zeros(n)).unwrap();
                let g0_summary = matspec::spectral_summary(&g0, &tols).unwrap();
                assert_eq!(
                    g0_summary.min_poly_degree, d,
                    "n = {n}, d = {d}: map degree at the origin"
                );

                let ga = matspec::sharpness_map(d, n, &a).unwrap();
                let r_ga = matspec::spectral_summary(&ga, &tols)
                    .unwrap()
                    .spectral_radius;
                let r_a = matspec::spectral_summary(&a, &tols)
                    .unwrap()
                    .spectral_radius;
                let r_g0 = g0_summary.spectral_radius;
                let root = r_a.powf(1.0 / d as f64);
                let rhs = (root + r_g0) / (1.0 + r_g0 * root);
                assert!(
                    (r_ga - rhs).abs() < 1e-8,
                    "n = {n}, d = {d}, lambda = {lambda}: r {r_ga} vs bound {rhs}"
                );

                // through the checker the sharpness shows as a zero margin
                let g = move |y: &ComplexMatrix| matspec::sharpness_map(d, n, y);
                let report = checks::check_selfmap_bound(&g, &a, &CheckOptions::default()).unwrap();
                assert_eq!(report.verdict, Verdict::Pass);
                assert!(
                    report.margin.abs() < 1e-9,
                    "n = {n}, d = {d}, lambda = {lambda}: margin {}",
                    report.margin
                );
            }
        }
    }
    crit.finish();
}

#[test]
fn criterion_4_blaschke_bound_suite() {
    let crit = Criterion::start("4 (Blaschke bound along generated maps)", 30.0);
    let opts = CheckOptions::default();
    for i in 0..300u64 {
        let dim = 2 + (i % 4) as usize; // 2..=5
        let degree = (i % 5) as usize; // 0..=4
        let map = checks::generate_map(dim, degree, 0x4000 + i).unwrap();
        let report = checks::verify_blaschke_bound(&map, 50, 0x8000 + i, &opts).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::Pass,
            "map {i} (dim {dim}, degree {degree}): margin {}",
            report.margin
        );
    }
    crit.finish();
}

#[test]
fn criterion_5_two_point_checker_suites() {
    let crit = Criterion::start("5 (two-point checker property suites)", 60.0);
    let opts = CheckOptions::default();
    let tols = opts.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut non_derogatory_cases = 0usize;
    for i in 0..300u64 {
        let dim = 2 + (i % 4) as usize;
        let degree = 1 + (i % 4) as usize;
        let map = checks::generate_map(dim, degree, 0xc000 + i).unwrap();
        let (zeta1, zeta2) = loop {
            let z1 = c(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            let z2 = c(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            if z1.norm() < 0.9 && z2.norm() < 0.9 && (z1 - z2).norm() > 1e-3 {
                break (z1, z2);
            }
        };
        let w1 = map.eval(zeta1);
        let w2 = map.eval(zeta2);
        let data = InterpolationDataset::new(vec![(zeta1, w1.clone()), (zeta2, w2.clone())], &tols)
            .unwrap();

        // the product bound holds on data that admits an interpolant
        let schwarz = checks::check_schwarz(&data, &opts).unwrap();
        assert_ne!(
            schwarz.verdict,
            Verdict::Fail,
            "map {i}: product bound failed with margin {} (slack 1e-7: {})",
            schwarz.margin,
            schwarz.margin + 1e-7
        );

        // restricted to non-derogatory draws the Pick condition holds too,
        // and the two formulations agree
        let nd1 = matspec::is_non_derogatory(&w1, &tols).unwrap_or(false);
        let nd2 = matspec::is_non_derogatory(&w2, &tols).unwrap_or(false);
        if nd1 && nd2 {
            non_derogatory_cases += 1;
            let necc = checks::check_necc(&data, &opts).unwrap();
            assert_ne!(
                necc.verdict,
                Verdict::Fail,
                "map {i}: pick-positivity failed"
            );
            let two_point = checks::check_necc_two_point(&data, &opts).unwrap();
            assert_eq!(
                necc.verdict, two_point.verdict,
                "map {i}: the two formulations disagree"
            );
        }
    }
    assert!(
        non_derogatory_cases >= 200,
        "only {non_derogatory_cases} non-derogatory draws out of 300"
    );
    crit.finish();
}

#[test]
fn criterion_6_coordinate_map_identities() {
    let crit = Criterion::start("6 (coordinate-map identities and membership)", 30.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a11);

    // diagonal identity on 10^4 random evaluations
    let mut checked = 0usize;
    while checked < 10_000 {
        let n = rng.random_range(2..=6usize);
        let coords: Vec<Complex64> = (0..n)
            .map(|_| c(rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)))
            .collect();
        let s = SymmPoint::new(coords).unwrap();
        let z = Complex64::from_polar(
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let zs = vec![z; n - 1];
        let (Ok(direct), Ok(chained)) = (symm::f_scalar(z, &s), symm::chain_f(&zs, &s)) else {
            continue;
        };
        assert!(
            (direct - chained).norm() < 1e-10,
            "n = {n}, z = {z}: {direct} vs {chained}"
        );
        checked += 1;
    }

    // membership: the root test and the boundary supremum agree on samples
    // away from the 1e-3 boundary band
    let mut inside_count = 0usize;
    while inside_count < 500 {
        let n = rng.random_range(2..=6usize);
        let w = ComplexMatrix::from_fn(n, |_, _| {
            c(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3))
        });
        let membership = matspec::is_in_spectral_ball(&w, &Tolerances::default()).unwrap();
        if !membership.inside || membership.margin < 1e-3 {
            continue;
        }
        let s = symm::pi_n(&w);
        assert!(symm::in_gn(&s, 1e-6).unwrap().inside, "root test (inside)");
        let (sup, _) = symm::in_gn_boundary_sup(&s, 2048);
        assert!(sup < 1.0 - 1e-9, "sup test (inside): {sup}");
        inside_count += 1;
    }

    let mut outside_count = 0usize;
    while outside_count < 500 {
        let n = rng.random_range(2..=6usize);
        let w = ComplexMatrix::from_fn(n, |_, _| {
            c(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3))
        });
        let chi = matspec::char_poly(&w);
        let clusters = chi.roots(1e-6).unwrap();
        let max_mod = clusters
            .iter()
            .map(|cl| cl.center.norm())
            .fold(0.0, f64::max);
        if max_mod < 1e-3 {
            continue;
        }
        // scale the roots so the largest lands in [1.01, 1.5]
        let target = rng.random_range(1.01..1.5);
        let factor = target / max_mod;
        let scaled: Vec<RootCluster> = clusters
            .iter()
            .map(|cl| RootCluster::new(cl.center * factor, cl.multiplicity))
            .collect();
        let p = ComplexPolynomial::from_roots(&scaled);
        let mut coords = Vec::with_capacity(n);
        let mut sign = -1.0;
        for j in 1..=n {
            coords.push(p.coeff(n - j) * sign);
            sign = -sign;
        }
        let s = SymmPoint::new(coords).unwrap();
        let membership = symm::in_gn(&s, 1e-6).unwrap();
        assert!(
            !membership.inside,
            "root test (outside): margin {}",
            membership.margin
        );
        let (sup, _) = symm::in_gn_boundary_sup(&s, 2048);
        assert!(sup >= 1.0 - 1e-9, "sup test (outside): {sup}");
        outside_count += 1;
    }
    crit.finish();
}

#[test]
fn criterion_7_composed_contraction_bound() {
    let crit = Criterion::start("7 (composed Blaschke contraction bound)", 10.0);
    let opts = CheckOptions::default();
    let tols = opts.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(0x77);
    let eta = c(0.65, 0.2);
    for case in 0..200u64 {
        let dim = 2 + (case % 3) as usize;
        let map = checks::generate_map(dim, 2 + (case % 2) as usize, 0x7000 + case).unwrap();
        let g0 = map.eval(c(0.0, 0.0));
        let g0_summary = matspec::spectral_summary(&g0, &tols).unwrap();
        let product = BlaschkeProduct::from_summary(&g0_summary).unwrap();

        // random X in the ball with a prescribed spectral radius
        let raw = ComplexMatrix::from_fn(dim, |_, _| {
            c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
        });
        let r_raw = 1.0 - matspec::is_in_spectral_ball(&raw, &tols).unwrap().margin;
        if r_raw <= 1e-6 {
            continue;
        }
        let target = rng.random_range(0.05..0.9);
        let x = raw.scale(c(target / r_raw, 0.0));
        let r_x = 1.0 - matspec::is_in_spectral_ball(&x, &tols).unwrap().margin;

        // H = B_{G(0)} composed with G vanishes at 0, so r(H(X)) <= r(X)
        let gx = map.eval(eta * x.trace() / dim as f64);
        let h = product.eval_matrix(&gx, &tols).unwrap();
        let r_h = matspec::spectral_summary(&h, &tols)
            .unwrap()
            .spectral_radius;
        assert!(
            r_h <= r_x + 1e-7,
            "case {case}: r(H(X)) = {r_h} exceeds r(X) = {r_x}"
        );
    }
    crit.finish();
}

#[test]
fn criterion_8_oracle_cross_checks() {
    let crit = Criterion::start("8 (minimal-polynomial and companion oracles)", 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x88);
    let tols = Tolerances::default();
    let jordan_tols = Tolerances {
        cluster_tol: 1e-4,
        ..tols
    };

    // 120 random matrices
    for case in 0..120 {
        let dim = rng.random_range(2..=8usize);
        let a = ComplexMatrix::from_fn(dim, |_, _| {
            c(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3))
        });
        let summary = matspec::spectral_summary(&a, &tols).unwrap();
        let krylov = matspec::min_poly_krylov(&a, &tols).unwrap();
        assert_eq!(
            summary.min_poly.degree(),
            krylov.degree(),
            "random case {case}"
        );
        for k in 0..summary.min_poly.coeffs().len() {
            assert!(
                (summary.min_poly.coeff(k) - krylov.coeff(k)).norm() < 1e-6,
                "random case {case}, coefficient {k}"
            );
        }
    }

    // 80 structured matrices: Jordan shapes under well-conditioned similarity
    let shapes: [&[usize]; 4] = [&[2, 2], &[3, 1], &[2, 1, 1], &[4]];
    for case in 0..80 {
        let sizes = shapes[case % shapes.len()];
        let lambda = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let dim: usize = sizes.iter().sum();
        let mut j = ComplexMatrix::zeros(dim);
        let mut offset = 0;
        for &size in sizes {
            for i in 0..size {
                j[(offset + i, offset + i)] = lambda;
                if i + 1 < size {
                    j[(offset + i, offset + i + 1)] = c(1.0, 0.0);
                }
            }
            offset += size;
        }
        let p = loop {
            let mut p = ComplexMatrix::identity(dim);
            for r in 0..dim {
                for s in 0..dim {
                    p[(r, s)] += c(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
                }
            }
            if specball::linalg::cond_one(&p) < 50.0 {
                break p;
            }
        };
        let p_inv = specball::linalg::inverse(&p).unwrap();
        let a = &(&p * &j) * &p_inv;
        let summary = matspec::spectral_summary(&a, &jordan_tols).unwrap();
        let krylov = matspec::min_poly_krylov(&a, &jordan_tols).unwrap();
        assert_eq!(
            summary.min_poly.degree(),
            krylov.degree(),
            "structured case {case} sizes {sizes:?}"
        );
        assert_eq!(
            summary.min_poly.degree(),
            Some(*sizes.iter().max().unwrap()),
            "structured case {case}: degree is the largest block"
        );
        for k in 0..summary.min_poly.coeffs().len() {
            assert!(
                (summary.min_poly.coeff(k) - krylov.coeff(k)).norm() < 1e-6,
                "structured case {case}, coefficient {k}"
            );
        }
    }

    // companion round-trips at 1e-10
    for case in 0..50 {
        let degree = rng.random_range(1..=10usize);
        let mut coeffs: Vec<Complex64> = (0..degree)
            .map(|_| c(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)))
            .collect();
        coeffs.push(c(1.0, 0.0));
        let p = ComplexPolynomial::new(coeffs);
        let w = matspec::companion(&p).unwrap();
        let chi = matspec::char_poly(&w);
        for k in 0..=degree {
            assert!(
                (chi.coeff(k) - p.coeff(k)).norm() < 1e-10,
                "round-trip case {case}, coefficient {k}"
            );
        }
    }
    crit.finish();
}

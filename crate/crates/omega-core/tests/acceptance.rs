//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantity next to its threshold. Run with
//! `cargo test --test acceptance -- --nocapture` to see every line.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omega_core::calculus::{
    cauchy_partial, laplacian_omega, metric_pullback, schwarzeq_residual, schwarzian,
    BivariateFunction, Domain, HoloMap2, QuadratureConfig, UnivariateFunction,
};
use omega_core::invariance::{
    blowup_probe, config_invariance_residual, detect_mobius, laplace_invariance_residual,
    shear_automorphism_g, shear_transport_omega, TestBattery,
};
use omega_core::models::{
    fit_so3, from_config, psi_minus, psi_minus_inv, psi_plus, psi_plus_inv, stereographic_pi,
    stereographic_s, to_config,
};
use omega_core::riemann::{chordal_distance, ExtComplex};
use omega_core::sample;
use omega_core::schauder::{
    basis_function, extract_coeffs, fourier_restrict, monomial_function, series_function,
    taylor_coeffs_entire, BasisTag, CoeffArray, DiagonalKind,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pass(index: usize, name: &str, detail: String) {
    println!("acceptance {index:2} ({name}): PASS — {detail}");
}

#[test]
fn criterion_01_schauder_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..25 {
        let s = sample::random_coeff_array(&mut rng, 12, BasisTag::Schauder);
        let back = extract_coeffs(&series_function(s.clone()), 12, 64, 1.0).unwrap();
        worst = worst.max(back.max_abs_diff(&s));
    }
    assert!(worst < 1e-9, "round-trip error {worst}");
    pass(1, "coefficient round trip", format!("max entrywise error {worst:.2e} < 1e-9"));
}

#[test]
fn criterion_02_closed_form_expansion() {
    let f = BivariateFunction::from_finite_fn("exp(zw/(1-zw))", Domain::Omega, |z, w| {
        (z * w / (c(1.0, 0.0) - z * w)).exp()
    });
    let a = extract_coeffs(&f, 10, 48, 1.0).unwrap();
    let mut worst_diag: f64 = 0.0;
    let mut worst_off: f64 = 0.0;
    let mut kfac = 1.0;
    for k in 0..=10usize {
        if k > 0 {
            kfac *= k as f64;
        }
        worst_diag = worst_diag.max((a.get(k, k) - c(1.0 / kfac, 0.0)).norm());
    }
    for (p, q, v) in a.entries() {
        if p != q {
            worst_off = worst_off.max(v.norm());
        }
    }
    assert!(worst_diag < 1e-9, "diagonal error {worst_diag}");
    assert!(worst_off < 1e-10, "off-diagonal magnitude {worst_off}");
    pass(
        2,
        "diagonal exponential expansion",
        format!("diagonal error {worst_diag:.2e} < 1e-9, off-diagonal {worst_off:.2e} < 1e-10"),
    );
}

#[test]
fn criterion_03_laplacian_identities() {
    let cfg = QuadratureConfig::default();
    let kernel = BivariateFunction::from_finite_fn("1/(1-zw)", Domain::Omega, |z, w| {
        (c(1.0, 0.0) - z * w).inv()
    });
    let f10 = basis_function(1, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst_kernel: f64 = 0.0;
    let mut worst_eigen: f64 = 0.0;
    for _ in 0..100 {
        let p = sample::random_bidisk_point(&mut rng, 0.7);
        let (z, w) = (p.z().as_finite().unwrap(), p.w().as_finite().unwrap());
        let lap = laplacian_omega(&kernel, z, w, &cfg).unwrap();
        let expected = 4.0 * (c(1.0, 0.0) + z * w) / (c(1.0, 0.0) - z * w);
        worst_kernel = worst_kernel.max((lap - expected).norm());

        let lap = laplacian_omega(&f10, z, w, &cfg).unwrap();
        let expected = 8.0 * f10.eval_finite(z, w);
        worst_eigen = worst_eigen.max((lap - expected).norm());
    }
    assert!(worst_kernel < 1e-9, "kernel identity error {worst_kernel}");
    assert!(worst_eigen < 1e-9, "eigenfunction identity error {worst_eigen}");
    pass(
        3,
        "Laplacian closed forms",
        format!("kernel {worst_kernel:.2e}, eigenfunction {worst_eigen:.2e}, both < 1e-9"),
    );
}

fn acceptance_automorphisms() -> Vec<omega_core::invariance::OmegaAutomorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    (0..20)
        .map(|_| sample::random_automorphism_patch_safe(&mut rng, true))
        .collect()
}

fn perturbed_identity_maps() -> Vec<HoloMap2> {
    let eps = 0.1;
    let lift = move |delta: fn(Complex64, Complex64) -> (Complex64, Complex64)| {
        move |z: ExtComplex, w: ExtComplex, idx: usize| -> ExtComplex {
            match (z, w) {
                (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                    let (d1, d2) = delta(z, w);
                    let d = if idx == 0 { d1 } else { d2 };
                    let base = if idx == 0 { z } else { w };
                    ExtComplex::Finite(base + eps * d)
                }
                _ => ExtComplex::Infinity,
            }
        }
    };
    let deltas: [(& str, fn(Complex64, Complex64) -> (Complex64, Complex64)); 5] = [
        ("(z + eps w^2, w)", |_z, w| (w * w, Complex64::default())),
        ("(z, w + eps z^2)", |z, _w| (Complex64::default(), z * z)),
        ("(z + eps zw, w)", |z, w| (z * w, Complex64::default())),
        ("(z, w + eps w^2)", |_z, w| (Complex64::default(), w * w)),
        ("(z + eps z^2, w)", |z, _w| (z * z, Complex64::default())),
    ];
    deltas
        .into_iter()
        .map(|(label, delta)| {
            let f = lift(delta);
            let g = lift(delta);
            HoloMap2::new(label, Domain::Omega, move |z, w| f(z, w, 0), move |z, w| g(z, w, 1))
        })
        .collect()
}

#[test]
fn criterion_04_mobius_invariance() {
    let battery = TestBattery::omega_default();
    let grid = sample::omega_patch_grid(25);
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for t in acceptance_automorphisms() {
        let report = laplace_invariance_residual(&t.to_map(), &battery, &grid, &cfg).unwrap();
        worst = worst.max(report.max_residual);
    }
    assert!(worst < 1e-7, "max residual {worst}");
    pass(4, "Möbius invariance", format!("max residual over 20 elements {worst:.2e} < 1e-7"));
}

#[test]
fn criterion_05_non_mobius_discrimination() {
    let battery = TestBattery::omega_default();
    let grid = sample::omega_patch_grid(25);
    let cfg = QuadratureConfig::default();

    let mut rejected = vec![shear_transport_omega(UnivariateFunction::new("id", |z| z))];
    rejected.extend(perturbed_identity_maps());

    let mut smallest_reject: f64 = f64::INFINITY;
    for t in &rejected {
        let report = laplace_invariance_residual(t, &battery, &grid, &cfg).unwrap();
        assert!(
            report.max_residual > 1e-3,
            "{} slipped through with residual {}",
            t.label(),
            report.max_residual
        );
        smallest_reject = smallest_reject.min(report.max_residual);
        assert!(
            detect_mobius(t).is_none(),
            "detector accepted the non-Möbius map {}",
            t.label()
        );
    }

    // the detector and the residual checker agree on the accepted set too
    for t in acceptance_automorphisms() {
        let found = detect_mobius(&t.to_map()).expect("detector rejected a Möbius element");
        for p in sample::aut_probe_points().iter().take(5) {
            let a = t.apply(p);
            let b = found.apply(p);
            assert!(chordal_distance(a.z(), b.z()) < 1e-8);
            assert!(chordal_distance(a.w(), b.w()) < 1e-8);
        }
    }
    pass(
        5,
        "non-Möbius discrimination",
        format!("6 rejected maps all have residual > 1e-3 (min {smallest_reject:.2e}); detector agrees on all 26"),
    );
}

#[test]
fn criterion_06_config_model_invariance() {
    let battery = TestBattery::config_default();
    let grid = sample::config_patch_grid(25);
    let cfg = QuadratureConfig::default();

    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut worst_accept: f64 = 0.0;
    for _ in 0..10 {
        let psi = sample::random_mobius_config_safe(&mut rng);
        let swap = rng.gen_bool(0.5);
        let t = sample::mobius_pair_map(&psi, swap);
        let report = config_invariance_residual(&t, &battery, &grid, &cfg).unwrap();
        worst_accept = worst_accept.max(report.max_residual);
    }
    assert!(worst_accept < 1e-7, "accept residual {worst_accept}");

    let shear = shear_automorphism_g(UnivariateFunction::new("id", |z| z));
    let report = config_invariance_residual(&shear, &battery, &grid, &cfg).unwrap();
    assert!(report.max_residual > 1e-2, "shear residual {}", report.max_residual);

    // hand oracle: for the shear, the combination produced by the test
    // function z/(z-w)^2, namely 2 (T1_w - T1_z - 1)/(w - z) + T1_zw,
    // equals -6 (z-w)^-3 + 4 (z-w)^-1 = 1.25 at (2, 0).
    let t1 = shear.component(0);
    let (z0, w0) = (c(2.0, 0.0), c(0.0, 0.0));
    let t1_z = cauchy_partial(&t1, z0, w0, 1, 0, &cfg).unwrap();
    let t1_w = cauchy_partial(&t1, z0, w0, 0, 1, &cfg).unwrap();
    let t1_zw = cauchy_partial(&t1, z0, w0, 1, 1, &cfg).unwrap();
    let combination = 2.0 * (t1_w - t1_z - c(1.0, 0.0)) / (w0 - z0) + t1_zw;
    let deviation = (combination - c(1.25, 0.0)).norm();
    assert!(deviation < 1e-8, "combination {combination} vs 1.25");

    pass(
        6,
        "configuration-model invariance",
        format!(
            "Möbius pairs {worst_accept:.2e} < 1e-7, shear residual {:.2e} > 1e-2, combination deviation {deviation:.2e} < 1e-8",
            report.max_residual
        ),
    );
}

#[test]
fn criterion_07_schwarzian() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst_mobius: f64 = 0.0;
    for _ in 0..50 {
        let psi = sample::random_mobius_near_identity(&mut rng, 0.3);
        let h = UnivariateFunction::from_mobius(&psi);
        for _ in 0..10 {
            let z0 = c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            worst_mobius = worst_mobius.max(schwarzian(&h, z0, &cfg).unwrap().norm());
        }
    }
    assert!(worst_mobius < 1e-9, "Möbius Schwarzian {worst_mobius}");

    let sq = UnivariateFunction::new("z^2", |z| z * z);
    let s = schwarzian(&sq, c(1.0, 0.0), &cfg).unwrap();
    let sq_dev = (s - c(-1.5, 0.0)).norm();
    assert!(sq_dev < 1e-8, "S(z^2)(1) deviation {sq_dev}");

    let mut worst_pair: f64 = 0.0;
    for _ in 0..20 {
        let psi = sample::random_mobius_near_identity(&mut rng, 0.3);
        let h = UnivariateFunction::from_mobius(&psi);
        let (z0, w0) = loop {
            let z0 = c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            let w0 = c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            if (z0 - w0).norm() > 0.2 {
                break (z0, w0);
            }
        };
        worst_pair = worst_pair.max(schwarzeq_residual(&h, &h, z0, w0, &cfg).unwrap().norm());
    }
    assert!(worst_pair < 1e-10, "pair residual {worst_pair}");
    pass(
        7,
        "Schwarzian characterization",
        format!(
            "Möbius |S| {worst_mobius:.2e} < 1e-9, S(z^2)(1) dev {sq_dev:.2e} < 1e-8, pair residual {worst_pair:.2e} < 1e-10"
        ),
    );
}

#[test]
fn criterion_08_metric_invariance() {
    let cfg = QuadratureConfig::default();
    let points: Vec<_> = sample::omega_patch_grid(10);

    // identity reproduces the metric up to quadrature noise
    let id = HoloMap2::identity(Domain::Omega);
    for &(z0, w0) in &points {
        let g = metric_pullback(&id, z0, w0, &cfg).unwrap();
        let expected = (c(1.0, 0.0) - z0 * w0).powi(2).inv();
        assert!(g.c_zz.norm() < 1e-10 && g.c_ww.norm() < 1e-10);
        assert!((g.c_zw - expected).norm() < 1e-9);
    }

    let mut worst_pure: f64 = 0.0;
    let mut worst_cross: f64 = 0.0;
    for t in acceptance_automorphisms() {
        let map = t.to_map();
        for &(z0, w0) in &points {
            let g = metric_pullback(&map, z0, w0, &cfg).unwrap();
            worst_pure = worst_pure.max(g.c_zz.norm()).max(g.c_ww.norm());
            let expected = (c(1.0, 0.0) - z0 * w0).powi(2).inv();
            worst_cross = worst_cross.max((g.c_zw - expected).norm());
        }
    }
    assert!(worst_pure < 1e-8, "dz^2/dw^2 leakage {worst_pure}");
    assert!(worst_cross < 1e-7, "dz dw deviation {worst_cross}");
    pass(
        8,
        "metric invariance",
        format!("|c_zz|,|c_ww| {worst_pure:.2e} < 1e-8, |c_zw - g| {worst_cross:.2e} < 1e-7"),
    );
}

#[test]
fn criterion_09_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst_rt: f64 = 0.0;
    let mut worst_quadric: f64 = 0.0;
    let mut count_plus = 0;
    let mut count_minus = 0;
    for _ in 0..200 {
        let p = sample::random_omega_point(&mut rng, true);

        if p.in_plus() {
            count_plus += 1;
            let (u, v) = psi_plus(&p).unwrap();
            let back = psi_plus_inv(u, v).unwrap();
            worst_rt = worst_rt.max(chart_distance(&p, &back));
        }
        if p.in_minus() {
            count_minus += 1;
            let (u, v) = psi_minus(&p).unwrap();
            let back = psi_minus_inv(u, v).unwrap();
            worst_rt = worst_rt.max(chart_distance(&p, &back));
        }

        let (gz, gw) = to_config(&p);
        let back = from_config(gz, gw).unwrap();
        worst_rt = worst_rt.max(chart_distance(&p, &back));

        let s = stereographic_s(&p);
        worst_quadric = worst_quadric.max(s.quadric_residual());
        let back = stereographic_pi(&s).unwrap();
        worst_rt = worst_rt.max(chart_distance(&p, &back));
    }
    assert!(count_plus > 150 && count_minus > 150, "sampler starved a chart");
    assert!(worst_rt < 1e-12, "round-trip error {worst_rt}");
    assert!(worst_quadric < 1e-10, "quadric residual {worst_quadric}");

    let mut rng = ChaCha8Rng::seed_from_u64(1090);
    let mut worst_orth: f64 = 0.0;
    for _ in 0..20 {
        let t = sample::random_automorphism(&mut rng, 0.4, false);
        worst_orth = worst_orth.max(fit_so3(&t).unwrap().orthogonality_defect());
    }
    assert!(worst_orth < 1e-8, "orthogonality defect {worst_orth}");

    let mut worst_hom: f64 = 0.0;
    for _ in 0..10 {
        let t1 = sample::random_automorphism(&mut rng, 0.3, false);
        let t2 = sample::random_automorphism(&mut rng, 0.3, false);
        let lhs = fit_so3(&t1.compose(&t2).unwrap()).unwrap();
        let rhs = fit_so3(&t1).unwrap().matrix() * fit_so3(&t2).unwrap().matrix();
        worst_hom = worst_hom.max((lhs.matrix() - rhs).norm());
    }
    assert!(worst_hom < 1e-7, "homomorphism defect {worst_hom}");
    pass(
        9,
        "model transport",
        format!(
            "round trips {worst_rt:.2e} < 1e-12, quadric {worst_quadric:.2e} < 1e-10, orthogonality {worst_orth:.2e} < 1e-8, homomorphism {worst_hom:.2e} < 1e-7"
        ),
    );
}

fn chart_distance(a: &omega_core::OmegaPoint, b: &omega_core::OmegaPoint) -> f64 {
    let coord = |x: ExtComplex, y: ExtComplex| -> f64 {
        match (x, y) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            (ExtComplex::Finite(u), ExtComplex::Finite(v)) => (u - v).norm(),
            _ => f64::INFINITY,
        }
    };
    coord(a.z(), b.z()).max(coord(a.w(), b.w()))
}

#[test]
fn criterion_10_projections_and_commutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let a = sample::random_coeff_array(&mut rng, 6, BasisTag::Monomial);

        // projection algebra is exact
        let future = a.project_future();
        let past = a.project_past();
        assert_eq!(future.project_future(), future);
        assert_eq!(future.project_past(), CoeffArray::zeros(6, BasisTag::Monomial));
        for (p, q, v) in a.entries() {
            assert_eq!(future.get(p, q) + past.get(p, q), v);
        }

        // commutation: extracting the series of the mapped array and
        // projecting agrees with projecting the Taylor table of the
        // polynomial itself
        let lhs = extract_coeffs(&series_function(a.phi_map().unwrap()), 6, 32, 1.0)
            .unwrap()
            .project_future();
        let rhs = taylor_coeffs_entire(&monomial_function(a.clone()), 6, 32, 1.0)
            .unwrap()
            .project_future();
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    assert!(worst < 1e-9, "commutation error {worst}");
    pass(
        10,
        "projections and commutation",
        format!("projection algebra exact; commutation error {worst:.2e} < 1e-9"),
    );
}

#[test]
fn criterion_11_fourier_restriction() {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let r = 0.5f64;
    let mut worst_negative: f64 = 0.0;
    for _ in 0..5 {
        let s = sample::random_coeff_array(&mut rng, 6, BasisTag::Schauder).project_future();
        let modes = fourier_restrict(&series_function(s), DiagonalKind::Disk, r, 64).unwrap();
        for (n, v) in modes.iter() {
            if n < 0 {
                worst_negative = worst_negative.max(v.norm());
            }
        }
    }
    assert!(worst_negative < 1e-10, "negative mode magnitude {worst_negative}");

    let modes = fourier_restrict(&basis_function(2, 1), DiagonalKind::Disk, r, 64).unwrap();
    let expected = r.powi(3) / (1.0 - r * r).powi(2);
    let dev = (modes.mode(1) - c(expected, 0.0)).norm();
    assert!(dev < 1e-10, "mode deviation {dev}");
    pass(
        11,
        "Fourier restriction",
        format!("negative modes {worst_negative:.2e} < 1e-10, f[2,1] mode deviation {dev:.2e} < 1e-10"),
    );
}

#[test]
fn criterion_12_blowup_probe() {
    let mut smallest_ratio = f64::INFINITY;
    for (p, q) in [(1, 1), (2, 1), (3, 3)] {
        let report = blowup_probe(p, q).unwrap();
        assert!(report.strictly_growing_tail, "f[{p},{q}] not strictly growing for k >= 5");
        assert!(report.growth_ratio > 1e3, "f[{p},{q}] ratio {}", report.growth_ratio);
        smallest_ratio = smallest_ratio.min(report.growth_ratio);
    }
    pass(
        12,
        "boundary blow-up",
        format!("strict growth for k = 5..12, smallest final/initial ratio {smallest_ratio:.1e} > 1e3"),
    );
}

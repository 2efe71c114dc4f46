use std::f64::consts::PI;

use nhqm::bloch::{
    band_solve_real, complex_band_from_branch_point, dispersion_lhs, find_branch_points, pt_identity_check,
    reduced_dispersion, square_lattice_dispersion, BRANCH_MARGIN,
};
use nhqm::model::{build_pt_unit_cell, Segment};
use nhqm::scattering::{max_transmission_amplitude, scattering_amplitudes};
use nhqm::{PhysicalParams, PiecewisePotential};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_identity_on_pt_cells(
        v0 in 0.0..20.0f64,
        a in 0.2..3.0f64,
        u0 in -10.0..10.0f64,
        e in 0.05..150.0f64,
    ) {
        let params = PhysicalParams::new(1.0).unwrap();
        let cell = build_pt_unit_cell(v0, a, u0).unwrap();
        prop_assert!(pt_identity_check(&cell, e, &params).is_ok());
    }

    #[test]
    fn allowed_energies_give_real_dispersion(
        v0 in 0.0..10.0f64,
        a in 0.2..2.0f64,
        e in 0.05..120.0f64,
    ) {
        let params = PhysicalParams::new(1.0).unwrap();
        let cell = build_pt_unit_cell(v0, a, 0.0).unwrap();
        let f = reduced_dispersion(&cell, e, &params).unwrap();
        prop_assume!(f.abs() <= 1.0);
        let lhs = dispersion_lhs(&cell, Complex64::new(e, 0.0), &params).unwrap().lhs;
        prop_assert!(lhs.im.abs() < 1e-10);
        prop_assert!((lhs.re - f).abs() < 1e-10);
    }
}

#[test]
fn square_lattice_formula_matches_general_relation() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..1000 {
        let v0 = rng.gen_range(0.0..10.0);
        let a = rng.gen_range(0.2..2.0);
        let params = PhysicalParams::new(rng.gen_range(0.5..1.5)).unwrap();
        let e = Complex64::new(rng.gen_range(0.1..100.0), rng.gen_range(-5.0..5.0));
        let cell = build_pt_unit_cell(v0, a, 0.0).unwrap();
        let general = dispersion_lhs(&cell, e, &params).unwrap().lhs;
        let closed = square_lattice_dispersion(e, v0, a, &params).unwrap();
        // the closed form is cos(2Ka); the general one is cos(Kd) with d = 2a
        assert!(
            (general - closed).norm() < 1e-10 * closed.norm().max(1.0),
            "E={e}: {general} vs {closed}"
        );
    }
}

#[test]
fn band_points_satisfy_the_dispersion_relation() {
    let params = PhysicalParams::new(1.0).unwrap();
    let cell = build_pt_unit_cell(5.0, 1.0, 0.0).unwrap();
    let d = cell.width();
    let ks: Vec<f64> = (0..=40).map(|i| -PI / d + i as f64 * 2.0 * PI / d / 40.0).collect();
    let real = band_solve_real(&cell, &params, &ks, (0.05, 110.0)).unwrap();
    for p in &real {
        let lhs = dispersion_lhs(&cell, p.energy, &params).unwrap().lhs;
        assert!((lhs - (p.k * d).cos()).norm() < 1e-9, "{p:?}");
    }
    let bps = find_branch_points(&cell, &params, (0.5, 110.0)).unwrap().branch_points;
    let mut pairs = 0;
    for bp in &bps {
        for (up, down) in complex_band_from_branch_point(&cell, &params, bp, &ks).unwrap() {
            for q in [up, down] {
                let lhs = dispersion_lhs(&cell, q.energy, &params).unwrap().lhs;
                assert!((lhs - (q.k * d).cos()).norm() < 1e-9, "{q:?}");
            }
            assert_eq!(up.k, down.k);
            assert!((up.energy - down.energy.conj()).norm() < 1e-9);
            if up.energy.im.abs() > 1e-6 {
                pairs += 1;
            }
        }
    }
    assert!(pairs > 0);
}

/// Two or three layers; a single layer is a uniform medium whose gaps close.
fn real_cell(rng: &mut StdRng) -> PiecewisePotential {
    let n = rng.gen_range(2..=3);
    let segs = (0..n)
        .map(|_| Segment::new(rng.gen_range(0.2..1.0), Complex64::new(rng.gen_range(0.5..20.0), 0.0)).unwrap())
        .collect();
    PiecewisePotential::new(0.0, segs).unwrap()
}

#[test]
fn no_amplification_means_no_bifurcation() {
    let mut rng = StdRng::seed_from_u64(33);
    let params = PhysicalParams::new(1.0).unwrap();
    let mut checked = 0;
    while checked < 15 {
        let cell = real_cell(&mut rng);
        let d = cell.width();
        let window = (1e-3, 120.0);
        let (max_t, _) = max_transmission_amplitude(&cell, &params, window.1, 4000).unwrap();
        assert!(max_t <= 1.0 + 1e-12);
        // band 1 must start in a gap at the bottom of the window
        if reduced_dispersion(&cell, window.0, &params).unwrap() <= 1.0 {
            continue;
        }
        let found = find_branch_points(&cell, &params, window).unwrap();
        assert!(found.branch_points.is_empty());
        for edge in &found.band_edges {
            assert!(edge.f_value.abs() >= 1.0 - BRANCH_MARGIN, "{edge:?}");
        }
        let ks: Vec<f64> = (0..=24).map(|i| i as f64 * PI / d / 24.0).collect();
        let points = band_solve_real(&cell, &params, &ks, window).unwrap();
        // bands lying wholly below the last stationary point
        for band in 1..=found.band_edges.len() {
            for &k in &ks {
                assert!(
                    points.iter().any(|p| p.band_index == band && p.k == k),
                    "band {band} has no root at K = {k} for {cell:?}"
                );
            }
        }
        checked += 1;
    }
}

#[test]
fn weak_lattice_bands_approach_free_parabola_quadratically() {
    let params = PhysicalParams::new(1.0).unwrap();
    let a = 1.0;
    let d = 2.0 * a;
    let k = 0.3 * PI / d;
    let free: Vec<f64> = {
        let mut e: Vec<f64> = (-3..=3)
            .map(|n| params.energy_of(k + 2.0 * PI * n as f64 / d))
            .collect();
        e.sort_by(f64::total_cmp);
        e.truncate(4);
        e
    };
    let error = |v0: f64| -> f64 {
        let cell = build_pt_unit_cell(v0, a, 0.0).unwrap();
        let pts = band_solve_real(&cell, &params, &[k], (1e-3, free[3] + 2.0)).unwrap();
        assert_eq!(pts.len(), 4, "{pts:?}");
        pts.iter()
            .zip(&free)
            .map(|(p, f)| (p.energy.re - f).abs())
            .fold(0.0, f64::max)
    };
    let errs: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&v| error(v)).collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.2..0.3).contains(&ratio), "errors {errs:?}");
    }
}

fn nearest_free(params: &PhysicalParams, k: f64, d: f64, e: f64) -> f64 {
    (-6..=6)
        .map(|n| (params.energy_of(k + 2.0 * PI * n as f64 / d) - e).abs())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn empty_cell_bands_are_the_folded_parabola() {
    let params = PhysicalParams::new(1.0).unwrap();
    let cell = PiecewisePotential::single(0.0, 1.5, Complex64::new(0.0, 0.0)).unwrap();
    let d = cell.width();
    // K = 0 and ±π/d put double roots on the closed gaps; sampled separately
    let ks: Vec<f64> = (0..20)
        .map(|i| -PI / d + (i as f64 + 0.5) * 2.0 * PI / d / 20.0)
        .collect();
    let pts = band_solve_real(&cell, &params, &ks, (1e-3, 60.0)).unwrap();
    assert!(pts.len() >= 20 * 5);
    for p in &pts {
        assert!(nearest_free(&params, p.k, d, p.energy.re) < 1e-8, "{p:?}");
    }
    // a double root is only resolvable to ~sqrt(eps)
    for p in band_solve_real(&cell, &params, &[0.0], (1e-3, 60.0)).unwrap() {
        assert!(nearest_free(&params, 0.0, d, p.energy.re) < 1e-7, "{p:?}");
    }
}

#[test]
fn hermitian_lattice_transmission_is_bounded() {
    let params = PhysicalParams::new(1.0).unwrap();
    let cell = build_pt_unit_cell(0.0, 1.0, 3.0).unwrap();
    for e in [0.5, 3.0, 17.0, 80.0] {
        assert!(scattering_amplitudes(&cell, e, &params).unwrap().t.norm() <= 1.0 + 1e-12);
    }
}

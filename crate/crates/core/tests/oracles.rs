//! Independent numerical oracles for the transfer-matrix amplitudes.

use nhqm::model::Segment;
use nhqm::scattering::{closed_form_with_momenta, scattering_amplitudes, single_barrier_closed_form};
use nhqm::{PhysicalParams, PiecewisePotential};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type State = (Complex64, Complex64);

fn rk4_step(y: State, h: f64, k2: Complex64) -> State {
    // ψ″ = −k²ψ inside a constant segment
    let f = |(p, dp): State| (dp, -k2 * p);
    let add = |(a, b): State, (c, d): State, s: f64| (a + c * s, b + d * s);
    let s1 = f(y);
    let s2 = f(add(y, s1, 0.5 * h));
    let s3 = f(add(y, s2, 0.5 * h));
    let s4 = f(add(y, s3, h));
    (
        y.0 + (s1.0 + 2.0 * s2.0 + 2.0 * s3.0 + s4.0) * (h / 6.0),
        y.1 + (s1.1 + 2.0 * s2.1 + 2.0 * s3.1 + s4.1) * (h / 6.0),
    )
}

/// |t|², |r|² by integrating the Schrödinger equation from the transmitted
/// wave on the right back to the left edge with fixed-step RK4.
fn shooting(pot: &PiecewisePotential, energy: f64, mass: f64) -> (f64, f64) {
    let k = (2.0 * mass * energy).sqrt();
    let i = Complex64::i();
    let xr = pot.right_edge();
    let mut y = ((i * k * xr).exp(), i * k * (i * k * xr).exp());
    let min_width = pot.segments().iter().map(|s| s.width).fold(f64::INFINITY, f64::min);
    let h_max = min_width / 1e4;
    for seg in pot.segments().iter().rev() {
        let k2 = 2.0 * mass * (Complex64::new(energy, 0.0) - seg.potential);
        let steps = (seg.width / h_max).ceil() as usize;
        let h = seg.width / steps as f64;
        for _ in 0..steps {
            y = rk4_step(y, -h, k2);
        }
    }
    let xl = pot.left_edge();
    let incoming = 0.5 * (y.0 + y.1 / (i * k)) * (-i * k * xl).exp();
    let reflected = 0.5 * (y.0 - y.1 / (i * k)) * (i * k * xl).exp();
    ((1.0 / incoming).norm_sqr(), (reflected / incoming).norm_sqr())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

#[test]
fn shooting_matches_small_imaginary_barrier() {
    let params = PhysicalParams::new(0.5).unwrap();
    let pot = PiecewisePotential::single(0.0, 2.0, Complex64::new(0.0, 5.0)).unwrap();
    let sol = scattering_amplitudes(&pot, 2.0, &params).unwrap();
    let (t2, r2) = shooting(&pot, 2.0, 0.5);
    assert!(close(sol.transmission(), t2, 1e-6), "{} vs {t2}", sol.transmission());
    assert!(close(sol.reflection(), r2, 1e-6), "{} vs {r2}", sol.reflection());
}

#[test]
fn shooting_matches_random_complex_potentials() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let segs: Vec<Segment> = (0..n)
            .map(|_| {
                Segment::new(
                    rng.gen_range(0.2..1.5),
                    Complex64::new(rng.gen_range(-10.0..10.0), rng.gen_range(-6.0..6.0)),
                )
                .unwrap()
            })
            .collect();
        let pot = PiecewisePotential::new(rng.gen_range(-2.0..2.0), segs).unwrap();
        let mass = rng.gen_range(0.5..1.5);
        let params = PhysicalParams::new(mass).unwrap();
        let e = rng.gen_range(0.1..40.0);
        let sol = scattering_amplitudes(&pot, e, &params).unwrap();
        let (t2, r2) = shooting(&pot, e, mass);
        assert!(
            close(sol.transmission(), t2, 1e-6),
            "T: {} vs {t2} for {pot:?} at E={e}",
            sol.transmission()
        );
        assert!(
            close(sol.reflection(), r2, 1e-6),
            "R: {} vs {r2} for {pot:?} at E={e}",
            sol.reflection()
        );
    }
}

#[test]
fn closed_form_matches_transfer_matrix() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let v0 = rng.gen_range(-50.0..50.0);
        let a = rng.gen_range(0.1..4.0);
        let params = PhysicalParams::new(rng.gen_range(0.3..2.0)).unwrap();
        let e = rng.gen_range(0.05..400.0);
        let pot = PiecewisePotential::single(0.0, a, Complex64::new(0.0, v0)).unwrap();
        let sol = scattering_amplitudes(&pot, e, &params).unwrap();
        let (t, r) = single_barrier_closed_form(v0, a, e, &params).unwrap();
        let scale = sol.t.norm().max(1.0);
        assert!((t - sol.t).norm() < 1e-9 * scale, "t {t} vs {}", sol.t);
        assert!((r - sol.r_left).norm() < 1e-9 * scale, "r {r} vs {}", sol.r_left);
    }
}

#[test]
fn threshold_reflection_tends_to_unit_magnitude() {
    // E ≪ V0: |r| → 1 (the E → 0 limit of the closed form is r = −1)
    let params = PhysicalParams::new(1.0).unwrap();
    let (_, r) = single_barrier_closed_form(40.0, 2.0, 1e-8, &params).unwrap();
    assert!((r.norm() - 1.0).abs() < 1e-3, "|r| = {}", r.norm());
    assert!((r + 1.0).norm() < 1e-3, "r = {r}");
}

#[test]
fn free_closed_form_is_identity() {
    let k = Complex64::new(1.7, 0.0);
    let (t, r) = closed_form_with_momenta(k, k, 3.0);
    assert!((t - 1.0).norm() < 1e-14 && r.norm() < 1e-14);
}

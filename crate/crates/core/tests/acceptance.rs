//! Acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nhqm::bloch::{
    band_solve_real, dispersion_lhs, find_branch_points, pt_identity_check, reduced_dispersion,
    square_lattice_dispersion,
};
use nhqm::bound_states::{find_localized_states, norm_balance_residual, parity_matching_residual};
use nhqm::model::{build_pt_unit_cell, Segment};
use nhqm::numerics::UniformGrid;
use nhqm::scattering::{
    critical_strength, critical_strength_with, max_transmission_amplitude, reflection_series_partial_sum,
    resonance_scan, scattering_amplitudes, threshold_by_transmission, BranchRule,
};
use nhqm::wavepacket::{
    amplification_factors, evolve_direct_without_localized, evolve_expansion, expand_packet, free_packet_sample,
    gaussian_packet_sample, DirectConfig, DirectEvolver, GaussianPacket, KGridSpec, WaveField,
};
use nhqm::{PhysicalParams, PiecewisePotential};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Tally {
    failed: usize,
}

impl Tally {
    fn line(&mut self, name: &str, pass: bool, elapsed: Duration, detail: &str) {
        if !pass {
            self.failed += 1;
        }
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
    }
}

fn within_rel(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

fn table_ii(t: &mut Tally) {
    let start = Instant::now();
    let params = PhysicalParams::new(1.0).unwrap();
    let cell = build_pt_unit_cell(5.0, 1.0, 0.0).unwrap();
    let found = find_branch_points(&cell, &params, (0.5, 110.0)).unwrap().branch_points;
    let expect = [
        (10.39, 1.36, 1.50),
        (30.62, 1.02, 2.50),
        (60.34, 1.00, 3.50),
        (99.87, 1.00, 4.50),
    ];
    let elapsed = start.elapsed();
    let mut ok = found.len() == expect.len() && elapsed < Duration::from_secs(10);
    for (bp, &(e, abs_t, n)) in found.iter().zip(&expect) {
        let row = within_rel(bp.energy, e, 0.005) && (bp.abs_t - abs_t).abs() <= 0.02 && (bp.n_half - n).abs() <= 0.02;
        ok &= row;
        println!(
            "    E {:.4} (want {e} ±0.5%), |T| {:.4} (want {abs_t} ±0.02), n+1/2 {:.4} (want {n} ±0.02) {}",
            bp.energy,
            bp.abs_t,
            bp.n_half,
            if row { "ok" } else { "off" }
        );
    }
    t.line(
        "1 branch points, V0=5 a=1 m=1",
        ok,
        elapsed,
        &format!("{} points found, want 4", found.len()),
    );
}

fn table_i(t: &mut Tally) {
    let energies = [223.6, 257.4, 294.1, 333.4];
    let heights = [247.5, 2322.5, 24485.9, 1507.7];
    let halves = [13.5, 14.5, 15.5, 16.5];
    let pot = PiecewisePotential::single(0.0, 2.0, Complex64::new(0.0, 40.0)).unwrap();
    for mass in [1.0, 0.5] {
        let start = Instant::now();
        let params = PhysicalParams::new(mass).unwrap();
        let peaks = resonance_scan(&pot, &params, 150.0, 400.0, 4000).unwrap();
        let elapsed = start.elapsed();
        for p in &peaks {
            println!("    E {:.3}, |t|^2 {:.1}, n {:.3}", p.energy, p.peak_t2, p.n_index);
        }
        // each table row is matched to the nearest located peak
        let mut matched = 0;
        for i in 0..4 {
            let near = peaks.iter().min_by(|x, y| {
                (x.energy - energies[i])
                    .abs()
                    .total_cmp(&(y.energy - energies[i]).abs())
            });
            if let Some(p) = near {
                matched += usize::from(
                    within_rel(p.energy, energies[i], 0.01)
                        && within_rel(p.peak_t2, heights[i], 0.02)
                        && (p.n_index - halves[i]).abs() <= 0.1,
                );
            }
        }
        let ok = matched == 4 && elapsed < Duration::from_secs(10);
        let detail = format!(
            "{matched} of 4 table rows matched among {} peaks in [150, 400]",
            peaks.len()
        );
        if mass == 1.0 {
            t.line("2 resonances, V0=40 a=2 m=1 (Table-I mass)", ok, elapsed, &detail);
        } else {
            // reported only; the graded convention is the one that reproduces the table
            println!(
                "INFO 2 resonances, V0=40 a=2 m=0.5 (caption mass, {}): {detail}",
                if ok { "matches" } else { "no match" }
            );
        }
    }
}

fn threshold(t: &mut Tally) {
    let start = Instant::now();
    let params = PhysicalParams::new(0.5).unwrap();
    let (u0, a) = (50.0, 1.0);
    let by_ratio = critical_strength(u0, a, &params);
    let principal = critical_strength_with(u0, a, &params, BranchRule::Principal);
    let by_t = threshold_by_transmission(u0, a, &params, 10.0 * u0);
    let elapsed = start.elapsed();
    let show = |r: &nhqm::Result<f64>| match r {
        Ok(v) => format!("{v:.4e}"),
        Err(e) => format!("error ({e})"),
    };
    println!(
        "    published 0.00136 | ratio = 1 (continuous branch) {} | ratio = 1 (principal branch) {} | max|T| > 1 {}",
        show(&by_ratio),
        show(&principal),
        show(&by_t)
    );
    let ok = match (&by_ratio, &by_t) {
        (Ok(r), Ok(v)) => (r - v).abs() <= 0.2 * r.abs().max(v.abs()),
        _ => false,
    } && elapsed < Duration::from_secs(60);
    t.line(
        "3 threshold consistency, U0=50 a=1 m=0.5",
        ok,
        elapsed,
        "two methods within 20%",
    );
}

fn resonant_mass(pot: &PiecewisePotential, p0: f64) -> f64 {
    [0.5, 1.0]
        .into_iter()
        .find(|&m| {
            let params = PhysicalParams::new(m).unwrap();
            resonance_scan(pot, &params, 1.0, 60.0, 4000)
                .unwrap()
                .iter()
                .any(|r| ((2.0 * m * r.energy).sqrt() - p0).abs() < 0.05)
        })
        .unwrap_or(0.5)
}

fn fig3(t: &mut Tally) {
    let a = 2.0;
    let pot = PiecewisePotential::single(0.0, a, Complex64::new(0.0, 5.0)).unwrap();
    let packet = GaussianPacket::new(-10.0, 5.23, 0.08).unwrap();
    let chosen = resonant_mass(&pot, packet.p0);
    println!("    packet momentum is resonant at m = {chosen}");
    let masses = if chosen == 0.5 { vec![0.5] } else { vec![chosen, 0.5] };
    for mass in masses {
        let start = Instant::now();
        let params = PhysicalParams::new(mass).unwrap();
        let run = evolve_direct_without_localized(&packet, &pot, &params, &[2.0, 5.0], &DirectConfig::default());
        let (ok, detail) = match run {
            Ok((fields, _)) => {
                let maxima = fields[0].local_maxima_in(0.0, a);
                match amplification_factors(&fields[1], (0.0, a), packet.peak_amplitude()) {
                    Ok(amp) => {
                        let (dt, dr) = amp.density();
                        let ok = within_rel(dt, 55.0, 0.3) && within_rel(dr, 20.0, 0.3) && maxima >= 3;
                        (
                            ok,
                            format!(
                                "|psi|^2 ratios {dt:.1} / {dr:.1} (want 55 / 20 ±30%), |psi| ratios {:.2} / {:.2}, {maxima} maxima inside at t=2",
                                amp.transmitted, amp.reflected
                            ),
                        )
                    }
                    Err(e) => (false, format!("{e}; {maxima} maxima inside at t=2")),
                }
            }
            Err(e) => (false, e.to_string()),
        };
        let elapsed = start.elapsed();
        let label = if mass == chosen {
            "resonant mass"
        } else {
            "caption mass"
        };
        t.line(
            &format!("4 packet amplification, V0=5 a=2 m={mass} ({label})"),
            ok && elapsed < Duration::from_secs(300),
            elapsed,
            &detail,
        );
    }
}

fn random_segments(rng: &mut StdRng, real: bool) -> PiecewisePotential {
    let n = rng.gen_range(1..6);
    let segs = (0..n)
        .map(|_| {
            let im = if real { 0.0 } else { rng.gen_range(-8.0..8.0) };
            Segment::new(rng.gen_range(0.05..2.0), Complex64::new(rng.gen_range(-30.0..30.0), im)).unwrap()
        })
        .collect();
    PiecewisePotential::new(rng.gen_range(-3.0..3.0), segs).unwrap()
}

fn mirrored(pot: &PiecewisePotential) -> PiecewisePotential {
    let segs = pot.segments().iter().rev().copied().collect();
    PiecewisePotential::new(-pot.right_edge(), segs).unwrap()
}

fn properties(t: &mut Tally) {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut check = |t: &mut Tally, name: &str, f: &mut dyn FnMut(&mut StdRng) -> (bool, String)| {
        let start = Instant::now();
        let (ok, detail) = f(&mut rng);
        t.line(&format!("5 {name}"), ok, start.elapsed(), &detail);
    };

    check(t, "unitarity, real potentials", &mut |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let pot = random_segments(rng, true);
            let params = PhysicalParams::new(rng.gen_range(0.2..2.0)).unwrap();
            let s = scattering_amplitudes(&pot, rng.gen_range(0.01..200.0), &params).unwrap();
            worst = worst.max((s.transmission() + s.reflection() - 1.0).abs());
        }
        (worst < 1e-10, format!("1000 cases, worst |T+R-1| {worst:.2e}"))
    });

    check(t, "reciprocity, complex potentials", &mut |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let pot = random_segments(rng, false);
            let params = PhysicalParams::new(rng.gen_range(0.2..2.0)).unwrap();
            let e = rng.gen_range(0.01..200.0);
            let a = scattering_amplitudes(&pot, e, &params).unwrap();
            let b = scattering_amplitudes(&mirrored(&pot), e, &params).unwrap();
            worst = worst.max((a.t - b.t).norm() / a.t.norm().max(1.0));
        }
        (
            worst < 1e-10,
            format!("1000 cases, worst relative |t - t_mirror| {worst:.2e}"),
        )
    });

    check(t, "PT conjugation identity", &mut |rng| {
        let params = PhysicalParams::new(1.0).unwrap();
        let mut bad = 0;
        for _ in 0..500 {
            let cell = build_pt_unit_cell(
                rng.gen_range(0.0..20.0),
                rng.gen_range(0.2..3.0),
                rng.gen_range(-10.0..10.0),
            )
            .unwrap();
            if pt_identity_check(&cell, rng.gen_range(0.05..150.0), &params).is_err() {
                bad += 1;
            }
        }
        (bad == 0, format!("500 cells, {bad} above 1e-10"))
    });

    check(t, "square-lattice formula vs general relation", &mut |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let (v0, a) = (rng.gen_range(0.0..10.0), rng.gen_range(0.2..2.0));
            let params = PhysicalParams::new(rng.gen_range(0.5..1.5)).unwrap();
            let e = Complex64::new(rng.gen_range(0.1..100.0), rng.gen_range(-5.0..5.0));
            let cell = build_pt_unit_cell(v0, a, 0.0).unwrap();
            let general = dispersion_lhs(&cell, e, &params).unwrap().lhs;
            let closed = square_lattice_dispersion(e, v0, a, &params).unwrap();
            worst = worst.max((general - closed).norm() / closed.norm().max(1.0));
        }
        (
            worst < 1e-10,
            format!("1000 complex energies, worst residual {worst:.2e}"),
        )
    });

    check(t, "multiple-reflection series", &mut |rng| {
        let params = PhysicalParams::new(1.0).unwrap();
        let (mut conv, mut div, mut bad) = (0, 0, 0);
        while conv < 100 || div < 10 {
            let v0 = rng.gen_range(-40.0..40.0);
            let a = rng.gen_range(0.1..3.0);
            let e = rng.gen_range(0.5..300.0);
            let pot = PiecewisePotential::single(0.0, a, Complex64::new(0.0, v0)).unwrap();
            let rho = reflection_series_partial_sum(&pot, e, &params, 1).unwrap().ratio.norm();
            if rho < 0.95 && conv < 100 {
                let n = ((1e-10f64).ln() / rho.ln()).ceil().max(1.0) as usize + 1;
                let sum = reflection_series_partial_sum(&pot, e, &params, n).unwrap().partial_sum;
                let exact = scattering_amplitudes(&pot, e, &params).unwrap().t;
                bad += usize::from((sum - exact).norm() >= 1e-8 * exact.norm());
                conv += 1;
            } else if rho > 1.05 && div < 10 {
                let at = |n| {
                    reflection_series_partial_sum(&pot, e, &params, n)
                        .unwrap()
                        .partial_sum
                        .norm()
                };
                bad += usize::from(at(400) <= 1e3 * at(40));
                div += 1;
            }
        }
        (
            bad == 0,
            format!("{conv} convergent and {div} divergent cases, {bad} wrong"),
        )
    });

    check(t, "localized-state bounds and conjugation", &mut |rng| {
        let mut bad = 0;
        let mut count = 0;
        for _ in 0..8 {
            let (v0, a) = (rng.gen_range(0.5..50.0), rng.gen_range(0.5..5.0));
            let params = PhysicalParams::new(rng.gen_range(0.5..1.5)).unwrap();
            let barrier = find_localized_states(v0, a, &params, None).unwrap();
            let well = find_localized_states(-v0, a, &params, None).unwrap();
            bad += usize::from(barrier.len() != well.len());
            for (b, w) in barrier.iter().zip(&well) {
                let res = parity_matching_residual(b.energy, b.parity, v0, a, &params)
                    .unwrap()
                    .norm();
                let inside = b.energy.im >= 0.0 && b.energy.im < v0 && w.energy.im <= 0.0 && w.energy.im > -v0;
                let conj = (w.energy - b.energy.conj()).norm() < 1e-10;
                bad += usize::from(!(inside && conj && res < 1e-10));
                count += 1;
            }
        }
        (bad == 0, format!("{count} states over 8 barriers, {bad} violations"))
    });

    check(t, "no bifurcation without amplification", &mut |rng| {
        let params = PhysicalParams::new(1.0).unwrap();
        let (mut checked, mut bad) = (0, 0);
        while checked < 8 {
            let n = rng.gen_range(2..=3);
            let segs = (0..n)
                .map(|_| Segment::new(rng.gen_range(0.2..1.0), Complex64::new(rng.gen_range(0.5..20.0), 0.0)).unwrap())
                .collect();
            let cell = PiecewisePotential::new(0.0, segs).unwrap();
            let window = (1e-3, 120.0);
            if max_transmission_amplitude(&cell, &params, window.1, 4000).unwrap().0 > 1.0 + 1e-12
                || reduced_dispersion(&cell, window.0, &params).unwrap() <= 1.0
            {
                continue;
            }
            let found = find_branch_points(&cell, &params, window).unwrap();
            let d = cell.width();
            let ks: Vec<f64> = (0..=16).map(|i| i as f64 * PI / d / 16.0).collect();
            let pts = band_solve_real(&cell, &params, &ks, window).unwrap();
            let complete = (1..=found.band_edges.len())
                .all(|band| ks.iter().all(|&k| pts.iter().any(|p| p.band_index == band && p.k == k)));
            bad += usize::from(!found.branch_points.is_empty() || !complete);
            checked += 1;
        }
        (
            bad == 0,
            format!("{checked} real cells, {bad} with missing bands or branch points"),
        )
    });

    check(t, "norm balance, both evolvers", &mut |_| {
        let params = PhysicalParams::new(1.0).unwrap();
        let pot = PiecewisePotential::single(0.0, 2.0, Complex64::new(0.0, 5.0)).unwrap();
        let p = GaussianPacket::new(-10.0, 5.23, 0.08).unwrap();
        let cfg = DirectConfig::default();
        let grid = UniformGrid::spanning(cfg.box_lo, cfg.box_hi, cfg.dx).unwrap();
        let init = (0..grid.n).map(|i| gaussian_packet_sample(&p, grid.x(i))).collect();
        let mut ev = DirectEvolver::new(grid, init, &pot, &params, cfg.dt).unwrap();
        ev.advance_to(3.0).unwrap();
        let direct = ev
            .balance
            .iter()
            .filter(|b| b.2.abs() > 1e-12)
            .map(|&(_, rate, src)| (rate - src).abs() / src.abs())
            .fold(0.0, f64::max);
        let exp = expand_packet(&p, &pot, &params, &KGridSpec::default()).unwrap();
        let mut spectral: f64 = 0.0;
        for time in [0.5, 1.0, 2.0] {
            let psi = evolve_expansion(&exp, time, grid).unwrap();
            let dpsi: Vec<Complex64> = (0..grid.n).map(|i| exp.time_derivative_at(grid.x(i), time)).collect();
            let residual = norm_balance_residual(&grid, &psi.values, &dpsi, &pot).unwrap();
            let src: f64 = (0..grid.n - 1)
                .map(|i| {
                    let dens = 0.5 * (psi.values[i].norm_sqr() + psi.values[i + 1].norm_sqr());
                    2.0 * pot.cell_average(grid.x(i), grid.x(i + 1)).im * dens * grid.dx
                })
                .sum();
            spectral = spectral.max(residual / src.abs());
        }
        (
            direct < 1e-4 && spectral < 1e-4,
            format!("worst relative residual {direct:.2e} (direct), {spectral:.2e} (expansion)"),
        )
    });

    check(t, "empty-lattice and free-packet limits", &mut |rng| {
        let params = PhysicalParams::new(1.0).unwrap();
        let cell = PiecewisePotential::single(0.0, 1.5, Complex64::new(0.0, 0.0)).unwrap();
        let d = cell.width();
        let ks: Vec<f64> = (0..20)
            .map(|i| -PI / d + (i as f64 + 0.5) * 2.0 * PI / d / 20.0)
            .collect();
        let band = band_solve_real(&cell, &params, &ks, (1e-3, 60.0))
            .unwrap()
            .iter()
            .map(|p| {
                (-6..=6)
                    .map(|n| (params.energy_of(p.k + 2.0 * PI * n as f64 / d) - p.energy.re).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let empty = PiecewisePotential::empty(0.0);
        let mut packet: f64 = 0.0;
        for _ in 0..3 {
            let p = GaussianPacket::new(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(0.1..0.5),
            )
            .unwrap();
            let params = PhysicalParams::new(rng.gen_range(0.5..1.5)).unwrap();
            let exp = expand_packet(&p, &empty, &params, &KGridSpec::default()).unwrap();
            let grid = UniformGrid::spanning(-60.0, 60.0, 0.05).unwrap();
            let num = evolve_expansion(&exp, 2.0, grid).unwrap();
            let exact = WaveField::sample(grid, 2.0, |x| free_packet_sample(&p, x, 2.0, &params)).unwrap();
            packet = packet.max(num.l2_distance(&exact).unwrap());
        }
        (
            band < 1e-8 && packet < 1e-5,
            format!("folded parabola error {band:.2e}, free packet L2 error {packet:.2e}"),
        )
    });
}

fn main() {
    let mut tally = Tally { failed: 0 };
    table_ii(&mut tally);
    table_i(&mut tally);
    threshold(&mut tally);
    fig3(&mut tally);
    properties(&mut tally);
    println!("{} criterion line(s) failed", tally.failed);
    if tally.failed > 0 {
        std::process::exit(1);
    }
}

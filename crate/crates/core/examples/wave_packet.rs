//! A Gaussian packet hitting an imaginary (gain) barrier, evolved by
//! Crank–Nicolson stepping, with and without the localized gain modes.
//!
//! Run with `cargo run --release --example wave_packet`.

use nhqm::scattering::resonance_scan;
use nhqm::wavepacket::{
    amplification_factors, evolve_direct_snapshots, evolve_direct_without_localized, DirectConfig, GaussianPacket,
};
use nhqm::{PhysicalParams, PiecewisePotential};
use num_complex::Complex64;

fn main() -> nhqm::Result<()> {
    let (v0, a) = (5.0, 2.0);
    let barrier = PiecewisePotential::single(0.0, a, Complex64::new(0.0, v0))?;
    let packet = GaussianPacket::new(-10.0, 5.23, 0.08)?;
    let params = PhysicalParams::new(1.0)?;

    // the packet momentum sits on a transmission resonance
    let peaks = resonance_scan(&barrier, &params, 1.0, 60.0, 4000)?;
    for p in &peaks {
        println!(
            "resonance at p = {:.4} (E = {:.3}), |t|^2 = {:.1}",
            (2.0 * params.mass * p.energy).sqrt(),
            p.energy,
            p.peak_t2
        );
    }

    let cfg = DirectConfig::default();
    let times = [0.0, 2.0, 5.0];
    let psi0 = packet.peak_amplitude();

    let raw = evolve_direct_snapshots(&packet, &barrier, &params, &times, &cfg)?;
    let (clean, removed) = evolve_direct_without_localized(&packet, &barrier, &params, &times, &cfg)?;
    for (e, c) in &removed {
        println!(
            "removed localized mode E = {:.5}, coefficient |C| = {:.3e}",
            e,
            c.norm()
        );
    }
    for (r, c) in raw.iter().zip(&clean) {
        println!(
            "t = {:.1}: norm {:.4e} (raw), {:.4e} (without localized modes); maxima inside barrier: {}",
            r.time,
            r.norm,
            c.norm,
            c.local_maxima_in(0.0, a)
        );
    }
    let last = clean.last().expect("snapshots");
    let amp = amplification_factors(last, (0.0, a), psi0)?;
    let (dt, dr) = amp.density();
    println!(
        "t = 5 peak ratios, |psi|: transmitted {:.2}, reflected {:.2}",
        amp.transmitted, amp.reflected
    );
    println!("t = 5 peak ratios, |psi|^2: transmitted {dt:.2}, reflected {dr:.2}");
    Ok(())
}

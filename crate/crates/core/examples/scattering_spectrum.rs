//! Resonances of an imaginary barrier: |t|² peaks and their phase thickness.
//!
//! Run with `cargo run --release --example scattering_spectrum`.

use nhqm::scattering::{resonance_scan, scattering_amplitudes};
use nhqm::{PhysicalParams, PiecewisePotential};
use num_complex::Complex64;

fn main() -> nhqm::Result<()> {
    let barrier = PiecewisePotential::single(0.0, 2.0, Complex64::new(0.0, 40.0))?;
    for mass in [1.0, 0.5] {
        let params = PhysicalParams::new(mass)?;
        println!("V0 = 40i, a = 2, m = {mass}");
        println!("{:>12} {:>14} {:>8}", "E", "|t|^2", "n");
        for peak in resonance_scan(&barrier, &params, 150.0, 400.0, 4000)? {
            println!("{:>12.3} {:>14.1} {:>8.2}", peak.energy, peak.peak_t2, peak.n_index);
        }
        println!();
    }

    // gain shows up as |t|^2 + |r|^2 > 1; loss as < 1
    let params = PhysicalParams::new(0.5)?;
    for v0 in [5.0, -5.0] {
        let pot = PiecewisePotential::single(0.0, 2.0, Complex64::new(0.0, v0))?;
        let s = scattering_amplitudes(&pot, 7.0, &params)?;
        println!(
            "V0 = {v0:+}i at E = 7: |t|^2 = {:.4}, |r|^2 = {:.4}, sum = {:.4}",
            s.transmission(),
            s.reflection(),
            s.transmission() + s.reflection()
        );
    }
    Ok(())
}

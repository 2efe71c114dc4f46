//! Multiple-reflection series for an imaginary barrier: convergent off
//! resonance at low gain, divergent where the round-trip factor exceeds 1.
//!
//! Run with `cargo run --release --example series_breakdown`.

use nhqm::scattering::{reflection_series_partial_sum, scattering_amplitudes};
use nhqm::{PhysicalParams, PiecewisePotential};
use num_complex::Complex64;

fn main() -> nhqm::Result<()> {
    let params = PhysicalParams::new(1.0)?;
    for (v0, e) in [(5.0, 60.0), (40.0, 223.646)] {
        let pot = PiecewisePotential::single(0.0, 2.0, Complex64::new(0.0, v0))?;
        let exact = scattering_amplitudes(&pot, e, &params)?.t;
        println!("V0 = {v0}i, E = {e}: exact t = {exact:.6}");
        for n in [1, 2, 5, 20, 80] {
            let s = reflection_series_partial_sum(&pot, e, &params, n)?;
            println!(
                "  N = {n:>3}: |rho| = {:.4}, |partial sum - t| = {:.3e}",
                s.ratio.norm(),
                (s.partial_sum - exact).norm()
            );
        }
    }
    Ok(())
}

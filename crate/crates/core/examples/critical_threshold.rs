//! Onset of amplification for the barrier/well pair [U0 + iV0][U0 - iV0].
//!
//! Compares the V0 where the multiple-reflection ratio reaches 1 at E -> 0
//! with the V0 where max |T| first exceeds 1.
//!
//! Run with `cargo run --release --example critical_threshold`.

use nhqm::scattering::{
    critical_strength, critical_strength_with, threshold_by_transmission, threshold_common_ratio, BranchRule,
};
use nhqm::PhysicalParams;

fn main() -> nhqm::Result<()> {
    let params = PhysicalParams::new(0.5)?;
    let (u0, a) = (50.0, 1.0);

    let continuous = critical_strength(u0, a, &params)?;
    println!("ratio = 1, continuous branch: V0* = {continuous:.6e}");
    match critical_strength_with(u0, a, &params, BranchRule::Principal) {
        Ok(v) => println!("ratio = 1, principal branch:  V0* = {v:.6e}"),
        Err(e) => println!("ratio = 1, principal branch:  {e}"),
    }
    for v0 in [1e-12, 1e-6, 1e-3, 1.0] {
        println!(
            "  V0 = {v0:.0e}: ratio {:.4e} (continuous), {:.4e} (principal)",
            threshold_common_ratio(v0, u0, a, &params, BranchRule::Continuous),
            threshold_common_ratio(v0, u0, a, &params, BranchRule::Principal)
        );
    }

    let by_t = threshold_by_transmission(u0, a, &params, 10.0 * u0)?;
    println!("max |T| > 1:                  V0* = {by_t:.6e}");
    Ok(())
}

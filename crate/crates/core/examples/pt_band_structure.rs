//! Real and complex Bloch bands of the PT lattice [+iV0][-iV0] around the
//! first branch point.
//!
//! Run with `cargo run --release --example pt_band_structure`.

use std::f64::consts::PI;

use nhqm::bloch::{band_solve_real, complex_band_from_branch_point, find_branch_points};
use nhqm::model::build_pt_unit_cell;
use nhqm::numerics::linspace;
use nhqm::PhysicalParams;

fn main() -> nhqm::Result<()> {
    let params = PhysicalParams::new(1.0)?;
    let cell = build_pt_unit_cell(5.0, 1.0, 0.0)?;
    let d = cell.width();
    let ks = linspace(0.0, PI / d, 21);

    let real = band_solve_real(&cell, &params, &ks, (0.05, 25.0))?;
    let bp = find_branch_points(&cell, &params, (0.5, 25.0))?.branch_points[0];
    let complex = complex_band_from_branch_point(&cell, &params, &bp, &ks)?;

    println!(
        "first branch point E* = {:.4}, K*d/pi = {:.4}",
        bp.energy,
        bp.k_star * d / PI
    );
    println!("{:>8} {:>24} {:>24}", "Kd/pi", "band 1", "band 2");
    for &k in &ks {
        let at = |band: usize| {
            real.iter()
                .find(|p| p.band_index == band && p.k == k)
                .map(|p| format!("{:.4}", p.energy.re))
                .or_else(|| {
                    complex.iter().find(|(u, _)| u.k == k).map(|(u, l)| {
                        let e = if band == 1 { u.energy } else { l.energy };
                        format!("{:.4}{:+.4}i", e.re, e.im)
                    })
                })
                .unwrap_or_else(|| "-".into())
        };
        println!("{:>8.3} {:>24} {:>24}", k * d / PI, at(1), at(2));
    }
    Ok(())
}

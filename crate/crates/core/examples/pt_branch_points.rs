//! Branch points of the PT-symmetric lattice [+iV0][-iV0]: stationary points
//! of cos(kd + θ)/|T| that fall inside (-1, 1).
//!
//! Run with `cargo run --release --example pt_branch_points`.

use nhqm::bloch::find_branch_points;
use nhqm::model::build_pt_unit_cell;
use nhqm::PhysicalParams;

fn main() -> nhqm::Result<()> {
    let params = PhysicalParams::new(1.0)?;
    let cell = build_pt_unit_cell(5.0, 1.0, 0.0)?;
    let found = find_branch_points(&cell, &params, (0.5, 110.0))?;

    println!("branch points (V0 = 5, a = 1, m = 1)");
    println!("{:>10} {:>8} {:>9} {:>8} {:>9}", "E", "|T|", "theta", "n+1/2", "K*d/pi");
    let d = cell.width();
    for bp in &found.branch_points {
        println!(
            "{:>10.4} {:>8.4} {:>9.4} {:>8.4} {:>9.4}",
            bp.energy,
            bp.abs_t,
            bp.theta,
            bp.n_half,
            bp.k_star * d / std::f64::consts::PI
        );
    }
    println!("\nordinary band edges");
    for edge in &found.band_edges {
        println!("{:>10.4}  F = {:+.4}", edge.energy, edge.f_value);
    }
    Ok(())
}

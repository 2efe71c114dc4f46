//! Discrete localized states of an imaginary barrier and their currents.
//!
//! Run with `cargo run --release --example localized_states`.

use nhqm::bound_states::{find_localized_states, localized_current, localized_states_csv};
use nhqm::PhysicalParams;

fn main() -> nhqm::Result<()> {
    let params = PhysicalParams::new(1.0)?;
    let (v0, a) = (5.0, 2.0);
    let states = find_localized_states(v0, a, &params, None)?;
    print!("{}", localized_states_csv(&states));

    // the exterior current is k/m at the barrier centre, decaying as e^{-2q|x - a/2|}
    for s in &states {
        let j = localized_current(s, a + 1.0, 0.0, &params);
        println!(
            "n = {}: j(a + 1) = {:.6}, (k/m) e^(-2q(a/2 + 1)) = {:.6}",
            s.index,
            j,
            s.exterior_k / params.mass * (-2.0 * s.exterior_q * (0.5 * a + 1.0)).exp()
        );
    }

    // the well -iV0 carries the time-reversed (conjugate) spectrum
    for (b, w) in states.iter().zip(find_localized_states(-v0, a, &params, None)?) {
        println!("barrier {:.6}  well {:.6}", b.energy, w.energy);
    }
    Ok(())
}

//! Fourth-order convergence of the Hamiltonian drift and agreement of the
//! flow computed in original and Darboux coordinates.
//!
//! cargo run --release --example integrator_convergence

use separable_poisson::darboux::DarbouxTransform;
use separable_poisson::dynamics::{PoissonSystem, ZGradient, DARBOUX_FD_STEP};
use separable_poisson::expr;
use separable_poisson::models::{instantiate, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = instantiate("two_by_two_game", &Params::new())?;
    let s = m.structure().expect("separable").clone();
    let h = expr::parse(m.hamiltonian.as_deref().expect("sample H"), 2)?;
    let system = PoissonSystem::new(s.clone(), h)?;
    let x0 = m.initial_point.clone().expect("sample point");

    println!("H drift on [0, 2]");
    let mut previous: Option<f64> = None;
    for dt in [0.08, 0.04, 0.02, 0.01, 0.005] {
        let traj = system.integrate(&x0, 2.0, dt)?;
        let drift = system.conservation_report(&traj)?.hamiltonian_drift;
        match previous {
            Some(p) => println!("  dt = {dt:<6} drift {drift:.3e}  ratio {:.2}", p / drift),
            None => println!("  dt = {dt:<6} drift {drift:.3e}"),
        }
        previous = Some(drift);
    }

    let t = DarbouxTransform::new(&s);
    println!("distance between x- and z-integrations on [0, 1]");
    for dt in [1e-2, 1e-3, 1e-4] {
        let chain = system.darboux_consistency(&t, &x0, 1.0, dt)?;
        let fd = system.darboux_consistency_with(
            &t,
            &x0,
            1.0,
            dt,
            ZGradient::FiniteDifference(DARBOUX_FD_STEP),
        )?;
        println!("  dt = {dt:<6} chain rule {chain:.2e}, differences {fd:.2e}");
    }
    Ok(())
}

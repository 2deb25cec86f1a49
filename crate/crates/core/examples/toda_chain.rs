//! The Toda lattice in Flaschka variables: its single Casimir, the
//! Darboux rank and a conservation run.
//!
//! cargo run --example toda_chain

use separable_poisson::casimir::CasimirSet;
use separable_poisson::darboux::DarbouxTransform;
use separable_poisson::dynamics::PoissonSystem;
use separable_poisson::expr;
use separable_poisson::models::{instantiate, Params};

fn toda(n: usize) -> Result<separable_poisson::models::Model, Box<dyn std::error::Error>> {
    let params: Params = [("N".to_string(), n.to_string())].into_iter().collect();
    Ok(instantiate("toda", &params)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 2..=6 {
        let m = toda(n)?;
        let s = m.structure().expect("separable");
        let set = CasimirSet::new(s);
        let t = DarbouxTransform::new(s);
        println!(
            "N = {n}: dimension {}, rank {}, {}",
            s.dim(),
            t.rank(),
            set.to_string().trim()
        );
    }

    let m = toda(4)?;
    println!("\ncoordinates: {}", m.labels.join(", "));
    let h_text = m.hamiltonian.clone().expect("sample Hamiltonian");
    println!("H = {h_text}");
    let system = PoissonSystem::new(
        m.structure().expect("separable").clone(),
        expr::parse(&h_text, m.dim())?,
    )?;
    let x0 = m.initial_point.clone().expect("sample point");
    let traj = system.integrate(&x0, 20.0, 1e-3)?;
    let report = system.conservation_report(&traj)?;
    println!("after t = 20 with dt = 1e-3:");
    let state: Vec<String> = traj.last().iter().map(|v| format!("{v:.4e}")).collect();
    // the alphas decay as the particles separate
    println!("  state ({})", state.join(", "));
    println!("  drift of H:   {:.1e}", report.hamiltonian_drift);
    println!("  drift of C_1: {:.1e}", report.max_casimir_drift());
    Ok(())
}

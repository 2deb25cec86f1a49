//! Global Darboux coordinates for a rank-2 Lotka-Volterra structure.
//!
//! cargo run --example darboux_reduction

use separable_poisson::darboux::DarbouxTransform;
use separable_poisson::models::{instantiate, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = instantiate("lotka_volterra", &Params::new())?;
    let s = model.structure().expect("separable");
    let t = DarbouxTransform::new(s);

    println!("A =\n{}", s.coefficients().as_matrix());
    println!("P =\n{}", t.p());
    println!("P A P^T =\n{}", t.canonical());
    println!(
        "rank {}, Casimir coordinates {:?}",
        t.rank(),
        t.casimir_coordinates()
    );

    // the check holds everywhere in the domain, not only near one point
    let mut worst = 0.0f64;
    for x in s.domain().sampler().sample(500, 9) {
        worst = worst.max(t.transformed_structure_check(&x)?);
    }
    println!("max |Dz J Dz^T - canonical| over 500 points: {worst:.1e}");

    let x = [0.2, 7.5, 3.0];
    let z = t.forward(&x)?;
    println!("x = {x:?}\nz = {z:?}\nx(z) = {:?}", t.inverse(&z)?);
    Ok(())
}

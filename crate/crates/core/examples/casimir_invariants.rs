//! Casimir functions of a few structures and a check that `J grad C`
//! vanishes where they are defined.
//!
//! cargo run --example casimir_invariants

use separable_poisson::casimir::CasimirSet;
use separable_poisson::models::{instantiate, Params};

fn show(name: &str, params: &[(&str, &str)]) -> Result<(), Box<dyn std::error::Error>> {
    let params: Params = params
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let model = instantiate(name, &params)?;
    let s = model.structure().expect("built-in models are separable");
    let set = CasimirSet::new(s);
    println!("{name} {params:?}: n = {}, rank {}", s.dim(), s.rank());
    for line in set.to_string().lines() {
        println!("  {line}");
    }
    let mut worst = 0.0f64;
    for x in s.domain().sampler().sample(100, 1) {
        for c in &set {
            worst = worst.max(c.gradient_check(s, &x)?);
        }
    }
    println!("  max |J grad C| over 100 points: {worst:.1e}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show("lotka_volterra", &[])?;
    show(
        "lotka_volterra",
        &[("matrix", "0,1,0,-1;-1,0,1,0;0,-1,0,1;1,0,-1,0")],
    )?;
    show("kermack_mckendric", &[("r", "2"), ("a", "1/3")])?;
    show("circle_map", &[])?;
    show("two_by_two_game", &[])?;
    Ok(())
}

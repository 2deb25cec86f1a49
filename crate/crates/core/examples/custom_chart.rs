//! A chart family given only by its factor `phi`: the antiderivative and
//! its inverse are computed numerically.
//!
//! cargo run --example custom_chart

use separable_poisson::charts::{ChartFunction, Interval};
use separable_poisson::darboux::DarbouxTransform;
use separable_poisson::linalg::CoefficientMatrix;
use separable_poisson::structure::SeparableStructure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chart = ChartFunction::custom("1 + x^2", None)?;
    println!("phi(x) = 1 + x^2, F(x) = atan(x) up to a constant");
    let f0 = chart.forward(0.0)?;
    for x in [-3.0, -0.5, 0.0, 1.0, 4.0] {
        let y = chart.forward(x)?;
        println!(
            "  x = {x:5.2}: F(x) - F(0) = {:+.12}, atan(x) = {:+.12}, back {:.12}",
            y - f0,
            f64::atan(x),
            chart.inverse(y)?
        );
    }

    // an interval can be narrowed to keep phi away from zero
    let narrowed = ChartFunction::custom("x^2 - 1", Some(Interval::new(1.0, f64::INFINITY)?))?;
    println!(
        "phi = x^2 - 1 on {}: F(3) = {:.10}",
        narrowed.interval(),
        narrowed.forward(3.0)?
    );
    println!("  closed form 0.5 ln((x-1)/(x+1)) differs by a constant");

    let s = SeparableStructure::with_chart_domains(
        CoefficientMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]])?,
        vec![chart.clone(), chart],
    )?;
    let t = DarbouxTransform::new(&s);
    let x = [0.3, -2.0];
    println!(
        "symplectic plane with phi = 1 + x^2: check {:.1e} at {x:?}",
        t.transformed_structure_check(&x)?
    );
    Ok(())
}

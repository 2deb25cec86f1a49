//! Checks the Jacobi identities of a separable structure with mixed chart
//! families, then shows a matrix field that is skew but not Poisson.
//!
//! cargo run --example jacobi_verification

use std::collections::BTreeMap;

use separable_poisson::charts::ChartFunction;
use separable_poisson::linalg::{CoefficientMatrix, Rational};
use separable_poisson::structure::{
    jacobi_residual_fd, verify_field, verify_separable, ExprField, ResidualMethod,
    SeparableStructure, DEFAULT_FD_STEP,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = CoefficientMatrix::from_i64_rows(&[
        &[0, 2, -1, 3],
        &[-2, 0, 1, 0],
        &[1, -1, 0, -4],
        &[-3, 0, 4, 0],
    ])?;
    let charts = vec![
        ChartFunction::power(1)?,
        ChartFunction::logistic(),
        ChartFunction::exponential(Rational::new(-1, 2)?)?,
        ChartFunction::custom("1 + x^2", None)?,
    ];
    let s = SeparableStructure::with_chart_domains(a, charts)?;
    let points = s.domain().sampler().sample(200, 42);

    let analytic = verify_separable(&s, &points, ResidualMethod::Analytic, 1e-10)?;
    let fd = verify_separable(
        &s,
        &points,
        ResidualMethod::FiniteDifference(DEFAULT_FD_STEP),
        1e-5,
    )?;
    println!("separable structure, 200 points");
    println!(
        "  analytic residual:          {:.2e}",
        analytic.max_residual
    );
    println!("  finite-difference residual: {:.2e}", fd.max_residual);
    println!(
        "  skew defect:                {:.2e}",
        analytic.max_skew_defect
    );

    // J12 = x3, J13 = x2, J23 = x3 is skew by construction but not Poisson
    let upper: BTreeMap<(usize, usize), String> = [((0, 1), "x3"), ((0, 2), "x2"), ((1, 2), "x3")]
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect();
    let field = ExprField::new(3, &upper)?;
    println!("non-Poisson field");
    println!(
        "  residual at (1, 2, 3): {:.6}",
        jacobi_residual_fd(&field, &[1.0, 2.0, 3.0], DEFAULT_FD_STEP)?
    );
    let grid: Vec<Vec<f64>> = (1..=5).map(|i| vec![i as f64, 0.5, -1.0]).collect();
    let report = verify_field(&field, &grid, DEFAULT_FD_STEP, 1e-8)?;
    println!(
        "  passes: {} (worst {:.3} at {:?})",
        report.passed(),
        report.max_residual,
        report.worst_point
    );
    Ok(())
}

//! Exact rational linear algebra: kernel, rank and the congruence that
//! brings a skew matrix to canonical block form.
//!
//! cargo run --example exact_congruence

use separable_poisson::linalg::{
    congruence_apply, kernel_basis, skew_canonical_congruence, CoefficientMatrix, Rational,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = |p: i64, q: i64| Rational::new(p, q);
    let upper = vec![
        r(1, 2)?,
        r(-3, 1)?,
        r(0, 1)?,
        r(2, 3)?,
        r(5, 1)?,
        r(1, 1)?,
        r(0, 1)?,
        r(-7, 4)?,
        r(1, 1)?,
        r(0, 1)?,
    ];
    let a = CoefficientMatrix::from_upper(5, &upper)?;
    println!("A =\n{}", a.as_matrix());
    println!("rank {}", a.rank());
    for (i, k) in kernel_basis(&a).vectors().iter().enumerate() {
        let shown: Vec<String> = k.iter().map(ToString::to_string).collect();
        println!("kernel vector {}: ({})", i + 1, shown.join(", "));
    }

    let c = skew_canonical_congruence(&a);
    println!("P =\n{}", c.p);
    println!("det P = {}", c.p.determinant()?);
    let pap = congruence_apply(&c.p, &a)?;
    println!("P A P^T =\n{}", pap.as_matrix());
    assert_eq!(pap.as_matrix(), &c.canonical);
    Ok(())
}

//! Casimir invariants of separable structures.
//!
//! Every `k` in the kernel of the coefficient matrix gives a Casimir
//! `C(x) = sum_j k^j F_j(x^j)` where `F_j` is the chart antiderivative of
//! coordinate `j`. Its gradient `k^j / phi^j` is annihilated by `J` because
//! `J = diag(phi) A diag(phi)`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::linalg::{kernel_basis, Rational};
use crate::structure::{numerical_rank, SeparableStructure, StructureError};

#[derive(Debug, Clone, PartialEq)]
pub struct CasimirFunction {
    k: Vec<Rational>,
    k_f64: Vec<f64>,
    terms: Vec<(String, bool)>,
}

impl CasimirFunction {
    /// Casimir for the coefficient vector `k`, which must lie in the kernel of
    /// the structure's coefficient matrix for the result to be a true Casimir.
    pub fn from_coefficients(
        s: &SeparableStructure,
        k: Vec<Rational>,
    ) -> Result<Self, StructureError> {
        if k.len() != s.dim() {
            return Err(StructureError::DimensionMismatch {
                what: "coefficient vector",
                expected: s.dim(),
                found: k.len(),
            });
        }
        let terms = s
            .charts()
            .iter()
            .enumerate()
            .map(|(j, c)| c.antiderivative_text(&format!("x{}", j + 1)))
            .collect();
        let k_f64 = k.iter().map(Rational::to_f64).collect();
        Ok(CasimirFunction { k, k_f64, terms })
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.k
    }

    /// `C(x)`.
    pub fn evaluate(&self, s: &SeparableStructure, x: &[f64]) -> Result<f64, StructureError> {
        s.domain().check(x)?;
        let mut total = 0.0;
        for (j, (kj, chart)) in self.k_f64.iter().zip(s.charts()).enumerate() {
            if *kj != 0.0 {
                let f = chart
                    .forward(x[j])
                    .map_err(|source| StructureError::Chart { coord: j, source })?;
                total += kj * f;
            }
        }
        Ok(total)
    }

    /// `grad C(x)`, entries `k^j / phi^j(x^j)`.
    pub fn gradient(&self, s: &SeparableStructure, x: &[f64]) -> Result<Vec<f64>, StructureError> {
        let phi = s.phi(x)?;
        Ok(self.k_f64.iter().zip(&phi).map(|(k, p)| k / p).collect())
    }

    /// `max |J(x) grad C(x)|`.
    pub fn gradient_check(&self, s: &SeparableStructure, x: &[f64]) -> Result<f64, StructureError> {
        let j = s.matrix(x)?;
        let g = DVector::from_vec(self.gradient(s, x)?);
        Ok((j * g).amax())
    }
}

impl fmt::Display for CasimirFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, (text, parens)) in self.k.iter().zip(&self.terms) {
            if k.is_zero() {
                continue;
            }
            let body = if *parens {
                format!("({text})")
            } else {
                text.clone()
            };
            match (first, k.is_negative()) {
                (true, true) => write!(f, "-{}*{body}", k.abs())?,
                (true, false) => write!(f, "{k}*{body}")?,
                (false, true) => write!(f, " - {}*{body}", k.abs())?,
                (false, false) => write!(f, " + {k}*{body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// One Casimir per normalized kernel vector of the coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirSet(Vec<CasimirFunction>);

impl CasimirSet {
    pub fn new(s: &SeparableStructure) -> Self {
        let basis = kernel_basis(s.coefficients());
        CasimirSet(
            basis
                .vectors()
                .iter()
                .map(|k| {
                    CasimirFunction::from_coefficients(s, k.clone())
                        .expect("kernel vectors have length n")
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn functions(&self) -> &[CasimirFunction] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CasimirFunction> {
        self.0.iter()
    }

    pub fn evaluate(&self, s: &SeparableStructure, x: &[f64]) -> Result<Vec<f64>, StructureError> {
        self.0.iter().map(|c| c.evaluate(s, x)).collect()
    }

    /// The `m x n` Jacobian with rows `k^j / phi^j(x^j)`.
    pub fn jacobian(
        &self,
        s: &SeparableStructure,
        x: &[f64],
    ) -> Result<DMatrix<f64>, StructureError> {
        let n = s.dim();
        let mut m = DMatrix::zeros(self.0.len(), n);
        for (row, c) in self.0.iter().enumerate() {
            for (col, v) in c.gradient(s, x)?.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        Ok(m)
    }

    /// Whether the Jacobian at `x` has full row rank.
    pub fn independent_at(
        &self,
        s: &SeparableStructure,
        x: &[f64],
    ) -> Result<bool, StructureError> {
        Ok(numerical_rank(&self.jacobian(s, x)?, 1e-10) == self.0.len())
    }
}

impl<'a> IntoIterator for &'a CasimirSet {
    type Item = &'a CasimirFunction;
    type IntoIter = std::slice::Iter<'a, CasimirFunction>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for CasimirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return writeln!(f, "no Casimir functions (coefficient matrix has full rank)");
        }
        for (i, c) in self.0.iter().enumerate() {
            writeln!(f, "C_{} = {c}", i + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::ChartFunction;
    use crate::linalg::CoefficientMatrix;

    fn build(rows: &[&[i64]], charts: Vec<ChartFunction>) -> SeparableStructure {
        SeparableStructure::with_chart_domains(
            CoefficientMatrix::from_i64_rows(rows).unwrap(),
            charts,
        )
        .unwrap()
    }

    fn cyclic_lv() -> SeparableStructure {
        build(
            &[&[0, 1, -1], &[-1, 0, 1], &[1, -1, 0]],
            vec![ChartFunction::power(1).unwrap(); 3],
        )
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn cyclic_lv_log_casimir() {
        let s = cyclic_lv();
        let set = CasimirSet::new(&s);
        assert_eq!(set.len(), 1);
        assert_eq!(set.to_string(), "C_1 = 1*ln(x1) + 1*ln(x2) + 1*ln(x3)\n");
        let c = &set.functions()[0];
        assert_eq!(c.evaluate(&s, &[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert!(c.gradient_check(&s, &[2.0, 3.0, 5.0]).unwrap() <= 1e-12);
    }

    #[test]
    fn corrupted_coefficients_fail_the_check() {
        let s = cyclic_lv();
        let c = CasimirFunction::from_coefficients(&s, ints(&[1, 1, 0])).unwrap();
        // J (1/2, 1/3, 0) at (2,3,5): row 3 is -5*2*(1/2) + 5*3*(1/3) = 0, row 1 is 2*3/3 = 2
        assert!(c.gradient_check(&s, &[2.0, 3.0, 5.0]).unwrap() > 0.1);
    }

    #[test]
    fn kermack_mckendric() {
        let s = build(
            &[&[0, -1, 0], &[1, 0, -1], &[0, 1, 0]],
            vec![
                ChartFunction::power(1).unwrap(),
                ChartFunction::power(1).unwrap(),
                ChartFunction::unit(),
            ],
        );
        let set = CasimirSet::new(&s);
        assert_eq!(set.to_string(), "C_1 = 1*ln(x1) + 1*x3\n");
    }

    #[test]
    fn toda_two() {
        // (alpha1, beta1, beta2)
        let s = build(
            &[&[0, -1, 1], &[1, 0, 0], &[-1, 0, 0]],
            vec![
                ChartFunction::power(1).unwrap(),
                ChartFunction::unit(),
                ChartFunction::unit(),
            ],
        );
        let set = CasimirSet::new(&s);
        assert_eq!(
            set.functions()[0].coefficients(),
            ints(&[0, 1, 1]).as_slice()
        );
        assert_eq!(
            set.functions()[0].evaluate(&s, &[5.0, 2.0, 3.0]).unwrap(),
            5.0
        );
    }

    #[test]
    fn circle_map_value() {
        let s = build(
            &[&[0, 0, -1], &[0, 0, -1], &[1, 1, 0]],
            vec![ChartFunction::power(2).unwrap(); 3],
        );
        let set = CasimirSet::new(&s);
        let c = &set.functions()[0];
        assert_eq!(c.coefficients(), ints(&[1, -1, 0]).as_slice());
        assert_eq!(c.evaluate(&s, &[1.0, 2.0, 7.0]).unwrap(), -0.5);
        assert_eq!(c.to_string(), "1*(-x1^(-1)) - 1*(-x2^(-1))");
    }

    #[test]
    fn games_have_none() {
        let s = build(&[&[0, 1], &[-1, 0]], vec![ChartFunction::logistic(); 2]);
        let set = CasimirSet::new(&s);
        assert!(set.is_empty());
        assert!(set.independent_at(&s, &[0.3, 0.4]).unwrap());
    }

    #[test]
    fn independence_of_zero_matrix_casimirs() {
        let s = build(
            &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]],
            vec![ChartFunction::power(1).unwrap(); 3],
        );
        let set = CasimirSet::new(&s);
        assert_eq!(set.len(), 3);
        assert!(set.independent_at(&s, &[0.5, 2.0, 9.0]).unwrap());
    }

    #[test]
    fn outside_domain() {
        let s = cyclic_lv();
        let set = CasimirSet::new(&s);
        let c = &set.functions()[0];
        assert!(c.evaluate(&s, &[-1.0, 1.0, 1.0]).is_err());
        assert!(c.gradient_check(&s, &[1.0, 0.0, 1.0]).is_err());
    }
}

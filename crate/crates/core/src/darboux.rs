//! Global Darboux reduction `z = P F(x)`.
//!
//! The chart step `y^i = F_i(x^i)` turns `J` into the constant matrix `A`
//! (its Jacobian is `diag(1/phi)`), and the exact congruence `P` then brings
//! `A` to `diag(D, .., D, 0, .., 0)`. Both steps are defined on the whole
//! domain, so the reduction is global. The last `n - r` rows of `P` span the
//! kernel of `A`, which makes `z_{r+1} .. z_n` Casimirs.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{skew_canonical_congruence, RationalMatrix};
use crate::structure::{SeparableStructure, StructureError};

#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxTransform {
    structure: SeparableStructure,
    p: RationalMatrix,
    p_inv: RationalMatrix,
    rank: usize,
    canonical: RationalMatrix,
    p_f64: DMatrix<f64>,
    p_inv_f64: DMatrix<f64>,
    canonical_f64: DMatrix<f64>,
}

impl DarbouxTransform {
    pub fn new(structure: &SeparableStructure) -> Self {
        let c = skew_canonical_congruence(structure.coefficients());
        let p_inv = c.p.inverse().expect("congruence matrices are invertible");
        DarbouxTransform {
            structure: structure.clone(),
            p_f64: c.p.to_f64(),
            p_inv_f64: p_inv.to_f64(),
            canonical_f64: c.canonical.to_f64(),
            p: c.p,
            p_inv,
            rank: c.rank,
            canonical: c.canonical,
        }
    }

    pub fn structure(&self) -> &SeparableStructure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn p(&self) -> &RationalMatrix {
        &self.p
    }

    pub fn p_inverse(&self) -> &RationalMatrix {
        &self.p_inv
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn canonical(&self) -> &RationalMatrix {
        &self.canonical
    }

    pub fn canonical_f64(&self) -> &DMatrix<f64> {
        &self.canonical_f64
    }

    /// Indices of the Casimir coordinates `z_{r+1} .. z_n`, 0-based.
    pub fn casimir_coordinates(&self) -> std::ops::Range<usize> {
        self.rank..self.dim()
    }

    /// `y = F(x)`, the chart step alone.
    pub fn chart_map(&self, x: &[f64]) -> Result<Vec<f64>, StructureError> {
        self.structure.domain().check(x)?;
        self.structure
            .charts()
            .iter()
            .zip(x)
            .enumerate()
            .map(|(coord, (c, &v))| {
                c.forward(v)
                    .map_err(|source| StructureError::Chart { coord, source })
            })
            .collect()
    }

    /// `z = P F(x)`.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, StructureError> {
        let y = DVector::from_vec(self.chart_map(x)?);
        Ok((&self.p_f64 * y).as_slice().to_vec())
    }

    /// `x = F^{-1}(P^{-1} z)`. Fails naming the first coordinate whose `y`
    /// value is outside its chart range or whose `x` is outside the domain.
    pub fn inverse(&self, z: &[f64]) -> Result<Vec<f64>, StructureError> {
        if z.len() != self.dim() {
            return Err(StructureError::DimensionMismatch {
                what: "point",
                expected: self.dim(),
                found: z.len(),
            });
        }
        let y = &self.p_inv_f64 * DVector::from_column_slice(z);
        let x = self
            .structure
            .charts()
            .iter()
            .zip(y.iter())
            .enumerate()
            .map(|(coord, (c, &v))| {
                c.inverse(v)
                    .map_err(|source| StructureError::Chart { coord, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.structure.domain().check(&x)?;
        Ok(x)
    }

    /// `dz/dx = P diag(1/phi(x))`.
    pub fn jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>, StructureError> {
        let phi = self.structure.phi(x)?;
        let mut m = self.p_f64.clone();
        for (col, p) in phi.iter().enumerate() {
            m.column_mut(col).scale_mut(1.0 / p);
        }
        Ok(m)
    }

    /// `max |Dz J Dz^T - canonical|` at `x`.
    pub fn transformed_structure_check(&self, x: &[f64]) -> Result<f64, StructureError> {
        let dz = self.jacobian(x)?;
        let j = self.structure.matrix(x)?;
        let transformed = &dz * j * dz.transpose();
        Ok((transformed - &self.canonical_f64).amax())
    }
}

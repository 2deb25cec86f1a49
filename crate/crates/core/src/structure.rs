//! Separable structure matrices `J^ij(x) = a^ij phi^i(x^i) phi^j(x^j)` and
//! Jacobi identity verification.
//!
//! The Jacobi residual of a triple `(i, j, k)` is
//!
//! ```text
//! sum_l J^li d_l J^jk + J^lj d_l J^ki + J^lk d_l J^ij
//! ```
//!
//! and a candidate is reported by the max-norm over `i < j < k`; the
//! expression is totally antisymmetric for skew `J`, so other triples add
//! nothing. For separable matrices the derivatives are exact:
//! `d_l J^jk = a^jk (delta_lj phi'^j phi^k + delta_lk phi^j phi'^k)`.
//! Any [`MatrixField`] can instead be checked with central differences.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::charts::{ChartError, ChartFunction, Interval};
use crate::expr::{self, EvalError, Expr, ExprError};
use crate::linalg::{CoefficientMatrix, LinalgError};

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// A candidate passes sampled verification when every residual is at most this.
pub const DEFAULT_JACOBI_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 100;
/// Width used to cut unbounded domain sides when sampling.
pub const DEFAULT_WINDOW_SPAN: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("coordinate x{}: {source}", coord + 1)]
    Chart { coord: usize, source: ChartError },
    #[error("dimension mismatch: {what} has {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("domain interval {domain} of x{} is not inside the nonvanishing interval {chart} of its {family} chart", coord + 1)]
    DomainMismatch {
        coord: usize,
        domain: Interval,
        chart: Interval,
        family: &'static str,
    },
    #[error("x{} = {value} lies outside the domain interval {interval}", coord + 1)]
    OutsideDomain {
        coord: usize,
        value: f64,
        interval: Interval,
    },
    #[error("entry ({}, {}): {source}", i + 1, j + 1)]
    EntryExpr {
        i: usize,
        j: usize,
        source: ExprError,
    },
    #[error("entry ({}, {}): {source}", i + 1, j + 1)]
    EntryEval {
        i: usize,
        j: usize,
        source: EvalError,
    },
    #[error("invalid field entry {0}")]
    InvalidEntry(String),
}

/// `Omega`, a product of open intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox(Vec<Interval>);

impl DomainBox {
    pub fn new(intervals: Vec<Interval>) -> Self {
        DomainBox(intervals)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn check(&self, x: &[f64]) -> Result<(), StructureError> {
        if x.len() != self.0.len() {
            return Err(StructureError::DimensionMismatch {
                what: "point",
                expected: self.0.len(),
                found: x.len(),
            });
        }
        match self.0.iter().zip(x).position(|(iv, &v)| !iv.contains(v)) {
            Some(coord) => Err(StructureError::OutsideDomain {
                coord,
                value: x[coord],
                interval: self.0[coord],
            }),
            None => Ok(()),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.check(x).is_ok()
    }

    /// Bounded sampling box: each interval cut to [`DEFAULT_WINDOW_SPAN`].
    pub fn sampler(&self) -> SampleBox {
        SampleBox(
            self.0
                .iter()
                .map(|iv| iv.window(DEFAULT_WINDOW_SPAN))
                .collect(),
        )
    }
}

/// Bounded sub-box of a domain from which sample points are drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox(Vec<Interval>);

impl SampleBox {
    /// Intersect every coordinate with `bounds`; coordinates whose
    /// intersection would be empty keep their previous window.
    pub fn restrict(&self, bounds: Interval) -> SampleBox {
        SampleBox(
            self.0
                .iter()
                .map(|iv| iv.intersect(&bounds).unwrap_or(*iv))
                .collect(),
        )
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn center(&self) -> Vec<f64> {
        self.0.iter().map(|iv| 0.5 * (iv.lo + iv.hi)).collect()
    }

    /// `count` points, uniform in the box shrunk by 0.1% of its width on each
    /// side, reproducible for a given seed.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_one(&mut rng)).collect()
    }

    pub fn sample_one<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        const MARGIN: f64 = 1e-3;
        self.0
            .iter()
            .map(|iv| {
                let u: f64 = rng.random();
                iv.lo + (iv.hi - iv.lo) * (MARGIN + (1.0 - 2.0 * MARGIN) * u)
            })
            .collect()
    }
}

/// A candidate structure matrix `x -> J(x)`; the object a Jacobi check tests.
pub trait MatrixField {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<DMatrix<f64>, StructureError>;
}

/// Matrix field backed by a closure.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F> MatrixField for FnField<F>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<DMatrix<f64>, StructureError> {
        Ok((self.f)(x))
    }
}

/// General candidate field given by expressions for its strict upper
/// triangle; the lower triangle is the skew completion.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprField {
    dim: usize,
    entries: BTreeMap<(usize, usize), (String, Expr)>,
}

impl ExprField {
    /// `upper` maps 0-based `(i, j)` with `i < j` to expression text.
    pub fn new(
        dim: usize,
        upper: &BTreeMap<(usize, usize), String>,
    ) -> Result<Self, StructureError> {
        let mut entries = BTreeMap::new();
        for (&(i, j), src) in upper {
            if i >= j || j >= dim {
                return Err(StructureError::InvalidEntry(format!(
                    "({}, {}) must satisfy i < j <= {dim}",
                    i + 1,
                    j + 1
                )));
            }
            let e = expr::parse(src, dim).map_err(|source| StructureError::EntryExpr {
                i,
                j,
                source,
            })?;
            entries.insert((i, j), (src.clone(), e));
        }
        Ok(ExprField { dim, entries })
    }

    /// Entry texts keyed by 0-based `(i, j)`.
    pub fn sources(&self) -> BTreeMap<(usize, usize), String> {
        self.entries
            .iter()
            .map(|(k, (s, _))| (*k, s.clone()))
            .collect()
    }
}

impl MatrixField for ExprField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Result<DMatrix<f64>, StructureError> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (&(i, j), (_, e)) in &self.entries {
            let v = e
                .evaluate(x)
                .map_err(|source| StructureError::EntryEval { i, j, source })?;
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        Ok(m)
    }
}

/// A validated separable structure.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableStructure {
    a: CoefficientMatrix,
    a_f64: DMatrix<f64>,
    charts: Vec<ChartFunction>,
    domain: DomainBox,
}

impl SeparableStructure {
    /// Validates dimensions and that every domain interval lies inside the
    /// nonvanishing interval of its chart.
    pub fn new(
        a: CoefficientMatrix,
        charts: Vec<ChartFunction>,
        domain: DomainBox,
    ) -> Result<Self, StructureError> {
        let n = a.dim();
        if charts.len() != n {
            return Err(StructureError::DimensionMismatch {
                what: "charts",
                expected: n,
                found: charts.len(),
            });
        }
        if domain.dim() != n {
            return Err(StructureError::DimensionMismatch {
                what: "domain",
                expected: n,
                found: domain.dim(),
            });
        }
        for (coord, (iv, chart)) in domain.intervals().iter().zip(&charts).enumerate() {
            if !iv.is_subset_of(&chart.interval()) {
                return Err(StructureError::DomainMismatch {
                    coord,
                    domain: *iv,
                    chart: chart.interval(),
                    family: chart.family().name(),
                });
            }
        }
        let a_f64 = a.as_matrix().to_f64();
        Ok(SeparableStructure {
            a,
            a_f64,
            charts,
            domain,
        })
    }

    /// Structure whose domain is the full nonvanishing interval of each chart.
    pub fn with_chart_domains(
        a: CoefficientMatrix,
        charts: Vec<ChartFunction>,
    ) -> Result<Self, StructureError> {
        let domain = DomainBox::new(charts.iter().map(ChartFunction::interval).collect());
        Self::new(a, charts, domain)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn coefficients(&self) -> &CoefficientMatrix {
        &self.a
    }

    pub fn charts(&self) -> &[ChartFunction] {
        &self.charts
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    /// `phi^i(x^i)` for every coordinate.
    pub fn phi(&self, x: &[f64]) -> Result<Vec<f64>, StructureError> {
        self.domain.check(x)?;
        self.charts
            .iter()
            .zip(x)
            .enumerate()
            .map(|(coord, (c, &v))| {
                c.phi(v)
                    .map_err(|source| StructureError::Chart { coord, source })
            })
            .collect()
    }

    pub fn phi_prime(&self, x: &[f64]) -> Result<Vec<f64>, StructureError> {
        self.domain.check(x)?;
        self.charts
            .iter()
            .zip(x)
            .enumerate()
            .map(|(coord, (c, &v))| {
                c.phi_prime(v)
                    .map_err(|source| StructureError::Chart { coord, source })
            })
            .collect()
    }

    /// `J(x)`.
    pub fn matrix(&self, x: &[f64]) -> Result<DMatrix<f64>, StructureError> {
        let phi = self.phi(x)?;
        Ok(self.matrix_from_phi(&phi))
    }

    fn matrix_from_phi(&self, phi: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        // phi[i] * phi[j] rounds the same for (i, j) and (j, i), so J is exactly skew
        DMatrix::from_fn(n, n, |i, j| self.a_f64[(i, j)] * (phi[i] * phi[j]))
    }

    /// `d_l J` for every `l`, from the exact separable derivative formula.
    pub fn matrix_derivatives(&self, x: &[f64]) -> Result<Vec<DMatrix<f64>>, StructureError> {
        let phi = self.phi(x)?;
        let dphi = self.phi_prime(x)?;
        let n = self.dim();
        Ok((0..n)
            .map(|l| {
                DMatrix::from_fn(n, n, |j, k| {
                    let delta_lj = if l == j { dphi[j] * phi[k] } else { 0.0 };
                    let delta_lk = if l == k { phi[j] * dphi[k] } else { 0.0 };
                    self.a_f64[(j, k)] * (delta_lj + delta_lk)
                })
            })
            .collect())
    }

    /// Max-norm Jacobi residual at `x` using exact derivatives.
    pub fn jacobi_residual(&self, x: &[f64]) -> Result<f64, StructureError> {
        let phi = self.phi(x)?;
        let j = self.matrix_from_phi(&phi);
        let dj = self.matrix_derivatives(x)?;
        Ok(jacobi_residual_from(&j, &dj))
    }
}

impl MatrixField for SeparableStructure {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval(&self, x: &[f64]) -> Result<DMatrix<f64>, StructureError> {
        self.matrix(x)
    }
}

/// Jacobi residual max-norm from `J` and its partial derivatives.
pub fn jacobi_residual_from(j: &DMatrix<f64>, dj: &[DMatrix<f64>]) -> f64 {
    let n = j.nrows();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                worst = worst.max(jacobi_triple(j, dj, a, b, c).abs());
            }
        }
    }
    worst
}

/// Signed Jacobi sum for one index triple.
pub fn jacobi_triple(j: &DMatrix<f64>, dj: &[DMatrix<f64>], a: usize, b: usize, c: usize) -> f64 {
    (0..j.nrows())
        .map(|l| j[(l, a)] * dj[l][(b, c)] + j[(l, b)] * dj[l][(c, a)] + j[(l, c)] * dj[l][(a, b)])
        .sum()
}

/// Central differences of `field` with step `h`, one matrix per coordinate.
pub fn fd_derivatives<M: MatrixField + ?Sized>(
    field: &M,
    x: &[f64],
    h: f64,
) -> Result<Vec<DMatrix<f64>>, StructureError> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|l| {
            probe[l] = x[l] + h;
            let plus = field.eval(&probe)?;
            probe[l] = x[l] - h;
            let minus = field.eval(&probe)?;
            probe[l] = x[l];
            Ok((plus - minus) / (2.0 * h))
        })
        .collect()
}

/// Max-norm Jacobi residual of an arbitrary field, derivatives by central
/// differences of step `h` (error `O(h^2)`).
pub fn jacobi_residual_fd<M: MatrixField + ?Sized>(
    field: &M,
    x: &[f64],
    h: f64,
) -> Result<f64, StructureError> {
    if x.len() != field.dim() {
        return Err(StructureError::DimensionMismatch {
            what: "point",
            expected: field.dim(),
            found: x.len(),
        });
    }
    let j = field.eval(x)?;
    let dj = fd_derivatives(field, x, h)?;
    Ok(jacobi_residual_from(&j, &dj))
}

/// `max |J + J^T|`.
pub fn skew_defect(m: &DMatrix<f64>) -> f64 {
    (m + m.transpose()).amax()
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Outcome of a sampled Jacobi check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub samples: usize,
    pub max_residual: f64,
    pub worst_point: Vec<f64>,
    pub max_skew_defect: f64,
    pub tolerance: f64,
}

impl VerifyReport {
    /// Necessary, not sufficient: passing samples do not prove the identity.
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance && self.max_skew_defect <= self.tolerance
    }
}

/// Which residual to use at each sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidualMethod {
    /// Exact separable derivatives.
    Analytic,
    /// Central differences with the given step.
    FiniteDifference(f64),
}

fn collect_report<F>(
    points: &[Vec<f64>],
    tolerance: f64,
    mut at: F,
) -> Result<VerifyReport, StructureError>
where
    F: FnMut(&[f64]) -> Result<(f64, f64), StructureError>,
{
    let mut report = VerifyReport {
        samples: points.len(),
        max_residual: 0.0,
        worst_point: points.first().cloned().unwrap_or_default(),
        max_skew_defect: 0.0,
        tolerance,
    };
    for p in points {
        let (res, skew) = at(p)?;
        if res > report.max_residual || res.is_nan() {
            report.max_residual = res;
            report.worst_point = p.clone();
        }
        report.max_skew_defect = report.max_skew_defect.max(skew);
    }
    Ok(report)
}

/// Jacobi and skew check of a separable structure at sampled points.
pub fn verify_separable(
    s: &SeparableStructure,
    points: &[Vec<f64>],
    method: ResidualMethod,
    tolerance: f64,
) -> Result<VerifyReport, StructureError> {
    collect_report(points, tolerance, |p| {
        let res = match method {
            ResidualMethod::Analytic => s.jacobi_residual(p)?,
            ResidualMethod::FiniteDifference(h) => jacobi_residual_fd(s, p, h)?,
        };
        Ok((res, skew_defect(&s.matrix(p)?)))
    })
}

/// Finite-difference Jacobi and skew check of an arbitrary field.
pub fn verify_field<M: MatrixField + ?Sized>(
    field: &M,
    points: &[Vec<f64>],
    h: f64,
    tolerance: f64,
) -> Result<VerifyReport, StructureError> {
    collect_report(points, tolerance, |p| {
        Ok((
            jacobi_residual_fd(field, p, h)?,
            skew_defect(&field.eval(p)?),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic() -> CoefficientMatrix {
        CoefficientMatrix::from_i64_rows(&[&[0, 1, -1], &[-1, 0, 1], &[1, -1, 0]]).unwrap()
    }

    fn lv() -> SeparableStructure {
        let charts = vec![ChartFunction::power(1).unwrap(); 3];
        SeparableStructure::with_chart_domains(cyclic(), charts).unwrap()
    }

    #[test]
    fn builds_lotka_volterra() {
        let s = lv();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.domain().intervals(), &[Interval::POSITIVE; 3]);
    }

    #[test]
    fn logistic_domain_mismatch() {
        let a = CoefficientMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]).unwrap();
        let charts = vec![ChartFunction::logistic(), ChartFunction::logistic()];
        let domain = DomainBox::new(vec![Interval::new(0.0, 2.0).unwrap(), Interval::UNIT]);
        let err = SeparableStructure::new(a, charts, domain).unwrap_err();
        assert!(matches!(
            err,
            StructureError::DomainMismatch { coord: 0, .. }
        ));
    }

    #[test]
    fn chart_count_mismatch() {
        let err = SeparableStructure::with_chart_domains(cyclic(), vec![ChartFunction::unit()])
            .unwrap_err();
        assert!(matches!(
            err,
            StructureError::DimensionMismatch { what: "charts", .. }
        ));
    }

    #[test]
    fn games_matrix_entry() {
        let a = CoefficientMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]).unwrap();
        let s =
            SeparableStructure::with_chart_domains(a, vec![ChartFunction::logistic(); 2]).unwrap();
        let j = s.matrix(&[0.5, 0.5]).unwrap();
        assert_eq!(j[(0, 1)], 1.0 / 16.0);
        assert_eq!(j[(1, 0)], -1.0 / 16.0);
        assert!(s.matrix(&[0.5, 1.0]).is_err());
    }

    #[test]
    fn constant_charts_give_a() {
        let a = cyclic();
        let s = SeparableStructure::with_chart_domains(a.clone(), vec![ChartFunction::unit(); 3])
            .unwrap();
        assert_eq!(s.matrix(&[-3.0, 0.1, 7.0]).unwrap(), a.as_matrix().to_f64());
        assert_eq!(s.jacobi_residual(&[-3.0, 0.1, 7.0]).unwrap(), 0.0);
    }

    #[test]
    fn kermack_mckendric_entries() {
        let a = CoefficientMatrix::from_i64_rows(&[&[0, -1, 0], &[1, 0, -1], &[0, 1, 0]]).unwrap();
        let charts = vec![
            ChartFunction::power(1).unwrap(),
            ChartFunction::power(1).unwrap(),
            ChartFunction::unit(),
        ];
        let s = SeparableStructure::with_chart_domains(a, charts).unwrap();
        let j = s.matrix(&[2.0, 3.0, 5.0]).unwrap();
        assert_eq!((j[(0, 1)], j[(1, 2)], j[(0, 2)]), (-6.0, -3.0, 0.0));
    }

    #[test]
    fn circle_map_residual() {
        let a = CoefficientMatrix::from_i64_rows(&[&[0, 0, -1], &[0, 0, -1], &[1, 1, 0]]).unwrap();
        let s =
            SeparableStructure::with_chart_domains(a, vec![ChartFunction::power(2).unwrap(); 3])
                .unwrap();
        assert!(s.jacobi_residual(&[1.0, 1.0, 1.0]).unwrap() <= 1e-10);
    }

    #[test]
    fn fd_residual_of_lotka_volterra() {
        assert!(jacobi_residual_fd(&lv(), &[1.0, 2.0, 3.0], DEFAULT_FD_STEP).unwrap() < 1e-8);
    }

    // Jacobi sum for (1,2,3) with J12 = x3, J13 = x2, J23 = x3, term by term:
    // J^31 d_3 J^23 = -x2, the other two terms vanish.
    #[test]
    fn non_poisson_field() {
        let field = FnField::new(3, |x: &[f64]| {
            DMatrix::from_row_slice(
                3,
                3,
                &[0.0, x[2], x[1], -x[2], 0.0, x[2], -x[1], -x[2], 0.0],
            )
        });
        let x = [1.0, 2.0, 3.0];
        let j = field.eval(&x).unwrap();
        let dj = fd_derivatives(&field, &x, DEFAULT_FD_STEP).unwrap();
        assert!((jacobi_triple(&j, &dj, 0, 1, 2) + 2.0).abs() < 1e-6);
        assert!((jacobi_residual_fd(&field, &x, DEFAULT_FD_STEP).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn so3_field_is_poisson() {
        let upper: BTreeMap<_, _> = [((0, 1), "x3"), ((1, 2), "x1"), ((0, 2), "-x2")]
            .into_iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect();
        let field = ExprField::new(3, &upper).unwrap();
        for x in [[1.0, 2.0, 3.0], [-0.5, 4.0, 0.25]] {
            assert!(jacobi_residual_fd(&field, &x, DEFAULT_FD_STEP).unwrap() < 1e-8);
        }
    }

    #[test]
    fn expr_field_validation() {
        let bad: BTreeMap<_, _> = [((1, 0), "x1".to_string())].into_iter().collect();
        assert!(ExprField::new(2, &bad).is_err());
        let bad: BTreeMap<_, _> = [((0, 1), "x3".to_string())].into_iter().collect();
        assert!(matches!(
            ExprField::new(2, &bad),
            Err(StructureError::EntryExpr { .. })
        ));
    }

    #[test]
    fn rank_matches_coefficients() {
        let s = lv();
        for p in s.domain().sampler().sample(20, 3) {
            assert_eq!(numerical_rank(&s.matrix(&p).unwrap(), 1e-10), s.rank());
        }
    }

    #[test]
    fn sampling_is_reproducible_and_inside() {
        let s = lv();
        let a = s.domain().sampler().sample(50, 11);
        assert_eq!(a, s.domain().sampler().sample(50, 11));
        assert_ne!(a, s.domain().sampler().sample(50, 12));
        assert!(a.iter().all(|p| s.domain().contains(p)));
        let narrow = s
            .domain()
            .sampler()
            .restrict(Interval::new(1.0, 2.0).unwrap());
        assert!(narrow
            .sample(10, 0)
            .iter()
            .flatten()
            .all(|&v| v > 1.0 && v < 2.0));
    }

    #[test]
    fn verify_reports() {
        let s = lv();
        let pts = s.domain().sampler().sample(30, 1);
        let r =
            verify_separable(&s, &pts, ResidualMethod::Analytic, DEFAULT_JACOBI_TOLERANCE).unwrap();
        assert!(r.passed());
        let rfd = verify_separable(
            &s,
            &pts,
            ResidualMethod::FiniteDifference(DEFAULT_FD_STEP),
            1e-7,
        )
        .unwrap();
        assert!(rfd.passed(), "{rfd:?}");
    }
}

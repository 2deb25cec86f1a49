//! Hamiltonian flows `x' = J(x) grad H(x)` integrated with classical RK4.

use std::io::{self, Write};

use nalgebra::DVector;
use thiserror::Error;

use crate::casimir::CasimirSet;
use crate::darboux::DarbouxTransform;
use crate::expr::{EvalError, Expr};
use crate::structure::{SeparableStructure, StructureError};

/// Step for [`ZGradient::FiniteDifference`] in the consistency check.
pub const DARBOUX_FD_STEP: f64 = 1e-6;

/// How the consistency check differentiates `H(x(z))`.
///
/// `ChainRule` evaluates `P^-T diag(phi(x)) grad H(x)` at `x = x(z)`. It
/// needs no derivative of the chart inverse, so it works for numeric
/// charts too. Differences leave a rounding floor near `1e-10` that hides
/// the integrator error once `dt` is small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZGradient {
    ChainRule,
    FiniteDifference(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("Hamiltonian: {0}")]
    Eval(#[from] EvalError),
    #[error("Hamiltonian has dimension {found}, structure has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid time stepping: {0}")]
    InvalidStep(String),
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("trajectory left the domain at t = {t} ({coordinates} coordinates)")]
    DomainExit { t: f64, coordinates: &'static str },
}

/// A separable structure together with a Hamiltonian and its symbolic gradient.
#[derive(Debug, Clone)]
pub struct PoissonSystem {
    structure: SeparableStructure,
    hamiltonian: Expr,
    gradient: Vec<Expr>,
    casimirs: CasimirSet,
}

impl PoissonSystem {
    pub fn new(structure: SeparableStructure, hamiltonian: Expr) -> Result<Self, DynamicsError> {
        if hamiltonian.dim() != structure.dim() {
            return Err(DynamicsError::DimensionMismatch {
                expected: structure.dim(),
                found: hamiltonian.dim(),
            });
        }
        let gradient = hamiltonian.gradient();
        let casimirs = CasimirSet::new(&structure);
        Ok(PoissonSystem {
            structure,
            hamiltonian,
            gradient,
            casimirs,
        })
    }

    pub fn structure(&self) -> &SeparableStructure {
        &self.structure
    }

    pub fn hamiltonian(&self) -> &Expr {
        &self.hamiltonian
    }

    pub fn gradient(&self) -> &[Expr] {
        &self.gradient
    }

    pub fn casimirs(&self) -> &CasimirSet {
        &self.casimirs
    }

    /// `J(x) grad H(x)`.
    pub fn vector_field(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let j = self.structure.matrix(x)?;
        let g = self
            .gradient
            .iter()
            .map(|d| d.evaluate(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((j * DVector::from_vec(g)).as_slice().to_vec())
    }

    /// Fixed-step RK4 from `x0` to `t_end`. The last step is shortened to land
    /// on `t_end`. If a stage leaves the domain the trajectory so far is
    /// returned with [`IntegrationStatus::DomainExit`].
    pub fn integrate(&self, x0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory, DynamicsError> {
        self.structure.domain().check(x0)?;
        rk4(
            |x| self.vector_field(x),
            |x| self.structure.domain().contains(x),
            x0,
            t_end,
            dt,
        )
    }

    /// `(H(x), C_1(x), .., C_m(x))`.
    pub fn invariants(&self, x: &[f64]) -> Result<(f64, Vec<f64>), DynamicsError> {
        Ok((
            self.hamiltonian.evaluate(x)?,
            self.casimirs.evaluate(&self.structure, x)?,
        ))
    }

    /// Max drift of `H` and of every Casimir along `traj`.
    pub fn conservation_report(
        &self,
        traj: &Trajectory,
    ) -> Result<ConservationReport, DynamicsError> {
        let mut report = ConservationReport {
            hamiltonian_drift: 0.0,
            casimir_drifts: vec![0.0; self.casimirs.len()],
        };
        let Some(first) = traj.states.first() else {
            return Ok(report);
        };
        let (h0, c0) = self.invariants(first)?;
        for x in &traj.states[1..] {
            let (h, c) = self.invariants(x)?;
            report.hamiltonian_drift = report.hamiltonian_drift.max((h - h0).abs());
            for (d, (v, v0)) in report.casimir_drifts.iter_mut().zip(c.iter().zip(&c0)) {
                *d = d.max((v - v0).abs());
            }
        }
        Ok(report)
    }

    /// Writes `t,x1..xn,H,C_1..C_m`, one row per state, 17 significant digits.
    pub fn write_csv<W: Write>(&self, traj: &Trajectory, mut out: W) -> Result<(), CsvError> {
        let n = self.structure.dim();
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.push("H".into());
        header.extend((1..=self.casimirs.len()).map(|i| format!("C_{i}")));
        writeln!(out, "{}", header.join(","))?;
        for (t, x) in traj.times.iter().zip(&traj.states) {
            let (h, c) = self.invariants(x)?;
            let row: Vec<String> = std::iter::once(t)
                .chain(x)
                .chain(std::iter::once(&h))
                .chain(&c)
                .map(|v| format!("{v:.16e}"))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Integrates in `x` and maps to `z`, then integrates the same flow in
    /// Darboux coordinates with the canonical matrix and `H(x(z))`, and
    /// returns the largest Euclidean distance between the two `z`
    /// trajectories. The gradient of `H(x(z))` uses the chain rule; see
    /// [`ZGradient`].
    pub fn darboux_consistency(
        &self,
        t: &DarbouxTransform,
        x0: &[f64],
        t_end: f64,
        dt: f64,
    ) -> Result<f64, DynamicsError> {
        self.darboux_consistency_with(t, x0, t_end, dt, ZGradient::ChainRule)
    }

    pub fn darboux_consistency_with(
        &self,
        t: &DarbouxTransform,
        x0: &[f64],
        t_end: f64,
        dt: f64,
        gradient: ZGradient,
    ) -> Result<f64, DynamicsError> {
        let in_x = self.integrate(x0, t_end, dt)?;
        if let IntegrationStatus::DomainExit { t } = in_x.status {
            return Err(DynamicsError::DomainExit {
                t,
                coordinates: "original",
            });
        }
        let z0 = t.forward(x0)?;
        let canonical = t.canonical_f64();
        let p_inv_t = t.p_inverse().to_f64().transpose();
        let h_hat = |z: &[f64]| -> Result<f64, DynamicsError> {
            Ok(self.hamiltonian.evaluate(&t.inverse(z)?)?)
        };
        let grad_z = |z: &[f64]| -> Result<Vec<f64>, DynamicsError> {
            match gradient {
                ZGradient::ChainRule => {
                    // dx/dz = diag(phi(x)) P^-1
                    let x = t.inverse(z)?;
                    let phi = self.structure.phi(&x)?;
                    let mut g = Vec::with_capacity(x.len());
                    for (e, p) in self.gradient.iter().zip(&phi) {
                        g.push(e.evaluate(&x)? * p);
                    }
                    Ok((&p_inv_t * DVector::from_vec(g)).as_slice().to_vec())
                }
                ZGradient::FiniteDifference(h) => {
                    let mut probe = z.to_vec();
                    let mut g = Vec::with_capacity(z.len());
                    for i in 0..z.len() {
                        probe[i] = z[i] + h;
                        let plus = h_hat(&probe)?;
                        probe[i] = z[i] - h;
                        let minus = h_hat(&probe)?;
                        probe[i] = z[i];
                        g.push((plus - minus) / (2.0 * h));
                    }
                    Ok(g)
                }
            }
        };
        let field = |z: &[f64]| -> Result<Vec<f64>, DynamicsError> {
            Ok((canonical * DVector::from_vec(grad_z(z)?))
                .as_slice()
                .to_vec())
        };
        // with differences the whole stencil must map back into the domain
        let reach = match gradient {
            ZGradient::ChainRule => 0.0,
            ZGradient::FiniteDifference(h) => h,
        };
        let inside = |z: &[f64]| {
            if reach == 0.0 {
                return t.inverse(z).is_ok();
            }
            let mut probe = z.to_vec();
            (0..z.len()).all(|i| {
                [reach, -reach].iter().all(|d| {
                    probe[i] = z[i] + d;
                    let ok = t.inverse(&probe).is_ok();
                    probe[i] = z[i];
                    ok
                })
            })
        };
        let in_z = rk4(field, inside, &z0, t_end, dt)?;
        if let IntegrationStatus::DomainExit { t } = in_z.status {
            return Err(DynamicsError::DomainExit {
                t,
                coordinates: "Darboux",
            });
        }
        let mut worst: f64 = 0.0;
        for (x, z) in in_x.states.iter().zip(&in_z.states) {
            let mapped = t.forward(x)?;
            let d = mapped
                .iter()
                .zip(z)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(d);
        }
        Ok(worst)
    }
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationStatus {
    Completed,
    /// A stage of the step starting at the last stored state left the domain
    /// at (approximately) time `t`.
    DomainExit {
        t: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: f64,
    pub status: IntegrationStatus,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().map_or(&[], Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub hamiltonian_drift: f64,
    pub casimir_drifts: Vec<f64>,
}

impl ConservationReport {
    pub fn max_casimir_drift(&self) -> f64 {
        self.casimir_drifts.iter().copied().fold(0.0, f64::max)
    }
}

fn rk4<F, D>(f: F, inside: D, x0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory, DynamicsError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, DynamicsError>,
    D: Fn(&[f64]) -> bool,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::InvalidStep(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidStep(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        step: dt,
        status: IntegrationStatus::Completed,
    };
    traj.times.push(0.0);
    traj.states.push(x0.to_vec());

    let axpy = |x: &[f64], a: f64, k: &[f64]| -> Vec<f64> {
        x.iter().zip(k).map(|(x, k)| x + a * k).collect()
    };
    let mut x = x0.to_vec();
    for step in 0..steps {
        let t = step as f64 * dt;
        let h = if step + 1 == steps { t_end - t } else { dt };
        let stage = |p: Vec<f64>| -> Result<Option<Vec<f64>>, DynamicsError> {
            if p.iter().any(|v| !v.is_finite()) {
                return Err(DynamicsError::NonFinite { t });
            }
            if !inside(&p) {
                return Ok(None);
            }
            f(&p).map(Some)
        };
        let next = (|| {
            let Some(k1) = stage(x.clone())? else {
                return Ok(None);
            };
            let Some(k2) = stage(axpy(&x, h / 2.0, &k1))? else {
                return Ok(None);
            };
            let Some(k3) = stage(axpy(&x, h / 2.0, &k2))? else {
                return Ok(None);
            };
            let Some(k4) = stage(axpy(&x, h, &k3))? else {
                return Ok(None);
            };
            let new: Vec<f64> = (0..x.len())
                .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect();
            stage(new.clone()).map(|ok| ok.map(|_| new))
        })()?;
        match next {
            Some(new) => {
                x = new;
                traj.times.push(if step + 1 == steps {
                    t_end
                } else {
                    (step + 1) as f64 * dt
                });
                traj.states.push(x.clone());
            }
            None => {
                traj.status = IntegrationStatus::DomainExit { t };
                break;
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{ChartFunction, Interval};
    use crate::expr::parse;
    use crate::linalg::CoefficientMatrix;
    use crate::structure::DomainBox;

    fn build(rows: &[&[i64]], charts: Vec<ChartFunction>) -> SeparableStructure {
        SeparableStructure::with_chart_domains(
            CoefficientMatrix::from_i64_rows(rows).unwrap(),
            charts,
        )
        .unwrap()
    }

    fn cyclic_lv(h: &str) -> PoissonSystem {
        let s = build(
            &[&[0, 1, -1], &[-1, 0, 1], &[1, -1, 0]],
            vec![ChartFunction::power(1).unwrap(); 3],
        );
        PoissonSystem::new(s, parse(h, 3).unwrap()).unwrap()
    }

    fn games(h: &str) -> PoissonSystem {
        let s = build(&[&[0, 1], &[-1, 0]], vec![ChartFunction::logistic(); 2]);
        PoissonSystem::new(s, parse(h, 2).unwrap()).unwrap()
    }

    #[test]
    fn vector_field_examples() {
        let p = cyclic_lv("x1 + x2 + x3");
        assert_eq!(
            p.vector_field(&[1.0, 1.0, 1.0]).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
        let constant = cyclic_lv("7");
        assert_eq!(
            constant.vector_field(&[2.0, 3.0, 4.0]).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
        let casimir = cyclic_lv("ln(x1) + ln(x2) + ln(x3)");
        let v = casimir.vector_field(&[2.0, 0.5, 7.0]).unwrap();
        assert!(v.iter().all(|c| c.abs() <= 1e-12));
    }

    #[test]
    fn constant_h_is_stationary() {
        let p = cyclic_lv("2");
        let traj = p.integrate(&[1.0, 2.0, 3.0], 1.0, 0.1).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.states.iter().all(|s| s == &vec![1.0, 2.0, 3.0]));
        let r = p.conservation_report(&traj).unwrap();
        assert_eq!(r.hamiltonian_drift, 0.0);
        assert_eq!(r.casimir_drifts, vec![0.0]);
    }

    #[test]
    fn games_stay_inside() {
        let p = games("x1 + x2");
        let traj = p.integrate(&[0.5, 0.5], 5.0, 1e-2).unwrap();
        assert_eq!(traj.status, IntegrationStatus::Completed);
        assert_eq!(*traj.times.last().unwrap(), 5.0);
        assert!(traj
            .states
            .iter()
            .all(|x| x.iter().all(|v| *v > 0.0 && *v < 1.0)));
    }

    #[test]
    fn domain_exit_keeps_partial_trajectory() {
        // x1' = -1 on x1 > 0 from 1.05 reaches the boundary at t = 1.05
        let s = SeparableStructure::new(
            CoefficientMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]).unwrap(),
            vec![ChartFunction::unit(); 2],
            DomainBox::new(vec![Interval::POSITIVE, Interval::REAL_LINE]),
        )
        .unwrap();
        let p = PoissonSystem::new(s, parse("-x2", 2).unwrap()).unwrap();
        let traj = p.integrate(&[1.05, 0.0], 3.0, 0.1).unwrap();
        match traj.status {
            IntegrationStatus::DomainExit { t } => assert!((t - 1.0).abs() < 1e-9, "{t}"),
            other => panic!("{other:?}"),
        }
        assert!(traj.states.iter().all(|x| x[0] > 0.0));
        assert!(p.integrate(&[-1.0, 0.0], 1.0, 0.1).is_err());
    }

    #[test]
    fn non_finite_is_an_error() {
        let s = build(&[&[0, 1], &[-1, 0]], vec![ChartFunction::unit(); 2]);
        let p = PoissonSystem::new(s, parse("x2^4", 2).unwrap()).unwrap();
        // x1' = 4 x2^3 with x2 huge overflows in the first stage
        assert!(matches!(
            p.integrate(&[0.0, 1e200], 1.0, 0.5),
            Err(DynamicsError::NonFinite { .. })
        ));
    }

    #[test]
    fn invalid_steps() {
        let p = cyclic_lv("x1");
        assert!(p.integrate(&[1.0, 1.0, 1.0], 1.0, 0.0).is_err());
        assert!(p.integrate(&[1.0, 1.0, 1.0], -1.0, 0.1).is_err());
    }

    #[test]
    fn last_step_is_shortened() {
        let p = cyclic_lv("x1 + x2 + x3");
        let traj = p.integrate(&[1.0, 2.0, 3.0], 0.25, 0.1).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.1, 0.2, 0.25]);
    }

    #[test]
    fn fourth_order_convergence() {
        let p = cyclic_lv("x1 - ln(x1) + x2 + x3");
        let drift = |dt| {
            let traj = p.integrate(&[1.0, 2.0, 0.5], 2.0, dt).unwrap();
            p.conservation_report(&traj).unwrap().hamiltonian_drift
        };
        let ratio = drift(0.02) / drift(0.01);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn casimir_is_conserved() {
        let p = cyclic_lv("x1 + x2 + x3");
        let traj = p.integrate(&[1.0, 2.0, 3.0], 10.0, 1e-3).unwrap();
        let r = p.conservation_report(&traj).unwrap();
        assert!(r.max_casimir_drift() <= 1e-8, "{r:?}");
    }

    #[test]
    fn darboux_consistency_games_and_lv() {
        let p = games("-ln(x1) - ln(1 - x1) - ln(x2) - ln(1 - x2)");
        let t = DarbouxTransform::new(p.structure());
        assert!(p.darboux_consistency(&t, &[0.3, 0.6], 1.0, 1e-3).unwrap() <= 1e-5);
        let p = cyclic_lv("x1 + x2 + x3");
        let t = DarbouxTransform::new(p.structure());
        assert!(
            p.darboux_consistency(&t, &[1.0, 2.0, 3.0], 1.0, 1e-3)
                .unwrap()
                <= 1e-5
        );
    }

    #[test]
    fn identity_transform_is_exact() {
        let s = build(&[&[0, 1], &[-1, 0]], vec![ChartFunction::unit(); 2]);
        let p = PoissonSystem::new(s, parse("(x1^2 + x2^2)/2", 2).unwrap()).unwrap();
        let t = DarbouxTransform::new(p.structure());
        assert!(p.darboux_consistency(&t, &[1.0, 0.0], 1.0, 1e-2).unwrap() <= 1e-12);
        // differences carry a rounding error of about eps |H| / h
        let fd = p
            .darboux_consistency_with(
                &t,
                &[1.0, 0.0],
                1.0,
                1e-2,
                ZGradient::FiniteDifference(DARBOUX_FD_STEP),
            )
            .unwrap();
        assert!(fd > 1e-13 && fd < 1e-9, "{fd}");
    }

    #[test]
    fn consistency_shrinks_with_dt() {
        let p = cyclic_lv("x1 + x2 + x3");
        let t = DarbouxTransform::new(p.structure());
        let d: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&dt| {
                p.darboux_consistency(&t, &[1.0, 2.0, 3.0], 1.0, dt)
                    .unwrap()
            })
            .collect();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
        assert!(d[0] / d[1] > 1e3, "{d:?}");
    }

    #[test]
    fn csv_layout() {
        let p = cyclic_lv("x1 + x2 + x3");
        let traj = p.integrate(&[1.0, 2.0, 3.0], 0.2, 0.1).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x1,x2,x3,H,C_1");
        assert_eq!(lines.len(), 4);
        assert!(
            lines[1].starts_with("0.0000000000000000e0,1.0000000000000000e0,2.0000000000000000e0")
        );
        let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first[4], 6.0);
    }
}

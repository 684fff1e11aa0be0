use serde::Serialize;

use super::{rk4_step, vector_field, FlowError, FlowSpec};
use crate::latticedyn::{dp2_step, Direction, Dp2Params};

/// Scaling of the discrete system: `delta = eps^3`, `c = 2`,
/// `alpha_0 + n delta = -1 + eps^2 x + eps^3 a_0`,
/// `alpha_1 - n delta = 1 - eps^2 x + eps^3 a_1`, `alpha_2 = eps^3 b_1`,
/// `f_0 = 1 + eps psi + eps^2 phi_0`, `f_1 = 1 - eps psi + eps^2 phi_1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuumParams {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    /// Left end of the x-window, reached at n = 0.
    pub x0: f64,
    pub psi0: f64,
    pub dpsi0: f64,
    pub window: f64,
    /// RK4 substeps per lattice step for the reference solution.
    pub substeps: usize,
}

impl Default for ContinuumParams {
    fn default() -> Self {
        ContinuumParams {
            a0: 0.25,
            a1: 0.15,
            b1: 0.6,
            x0: 0.0,
            psi0: 0.3,
            dpsi0: 0.1,
            window: 1.0,
            substeps: 10,
        }
    }
}

impl ContinuumParams {
    fn check(&self) -> Result<(), FlowError> {
        let vals = [self.a0, self.a1, self.b1, self.x0, self.psi0, self.dpsi0, self.window];
        if vals.iter().any(|v| !v.is_finite()) || self.window <= 0.0 || self.substeps == 0 {
            return Err(FlowError::Param("continuum parameters must be finite with a positive window".into()));
        }
        if (self.a0 + self.a1 + self.b1 - 1.0).abs() > 1e-12 {
            return Err(FlowError::Param(format!(
                "need a0 + a1 + b1 = 1, got {}",
                self.a0 + self.a1 + self.b1
            )));
        }
        Ok(())
    }

    /// `phi_0 = phi_1 = (psi' + psi^2 - x)/4` at the left end, which makes
    /// `psi' = 2(phi_0 + phi_1) - psi^2 + x` hold there.
    pub fn phi0(&self) -> f64 {
        (self.dpsi0 + self.psi0 * self.psi0 - self.x0) / 4.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuumRun {
    pub eps: f64,
    pub steps: usize,
    /// `max_n |psi_disc(n) - psi_ode(x(n))|`.
    pub max_error: f64,
    /// `(x(n), psi_disc(n), psi_ode(x(n)))`.
    pub samples: Vec<(f64, f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuumReport {
    pub params: ContinuumParams,
    pub matching: &'static str,
    pub coarse: ContinuumRun,
    pub fine: ContinuumRun,
    /// `coarse.max_error / fine.max_error`; about 2 for first-order convergence.
    pub ratio: f64,
}

const MATCHING: &str = "psi and psi' matched analytically at the left end: \
     f0 = 1 + eps psi0 + eps^2 phi, f1 = 1 - eps psi0 + eps^2 phi, phi = (psi0' + psi0^2 - x0)/4";

/// Runs the discrete equation over the window and compares
/// `psi_disc(n) = (f_0[n] - f_1[n]) / (2 eps)` at `x(n) = x0 + n eps` with an
/// RK4 solution of the second Painleve equation from the same `(psi, psi')`.
pub fn continuum_run(eps: f64, p: &ContinuumParams) -> Result<ContinuumRun, FlowError> {
    if !(eps > 0.0 && eps <= 0.2) {
        return Err(FlowError::Param(format!("eps must lie in (0, 0.2], got {eps}")));
    }
    p.check()?;
    let e2 = eps * eps;
    let e3 = e2 * eps;
    let dp = Dp2Params {
        c: 2.0,
        alpha0: -1.0 + e2 * p.x0 + e3 * p.a0,
        alpha1: 1.0 - e2 * p.x0 + e3 * p.a1,
        delta: e3,
    };
    let phi = p.phi0();
    let mut f = (1.0 + eps * p.psi0 + e2 * phi, 1.0 - eps * p.psi0 + e2 * phi);
    let steps = (p.window / eps).round() as usize;
    let spec = FlowSpec::p2(p.b1);
    let field = |x: f64, y: &[f64]| vector_field(&spec, x, y).expect("pair");
    let h = eps / p.substeps as f64;
    let mut y = vec![p.psi0, p.dpsi0];
    let mut samples = vec![(p.x0, p.psi0, p.psi0)];
    let mut max_error: f64 = 0.0;
    for n in 0..steps {
        f = dp2_step(f, &dp, n as i64, Direction::Forward)?;
        let x_start = p.x0 + n as f64 * eps;
        for k in 0..p.substeps {
            y = rk4_step(&field, x_start + k as f64 * h, &y, h);
        }
        let disc = (f.0 - f.1) / (2.0 * eps);
        if !(disc.is_finite() && y[0].is_finite()) {
            return Err(FlowError::Incomplete(format!("non-finite value at step {}", n + 1)));
        }
        max_error = max_error.max((disc - y[0]).abs());
        samples.push((p.x0 + (n + 1) as f64 * eps, disc, y[0]));
    }
    Ok(ContinuumRun {
        eps,
        steps,
        max_error,
        samples,
    })
}

/// Runs at `eps` and `eps / 2` and reports the error ratio.
pub fn continuum_limit_experiment(eps: f64, p: &ContinuumParams) -> Result<ContinuumReport, FlowError> {
    let coarse = continuum_run(eps, p)?;
    let fine = continuum_run(eps / 2.0, p)?;
    Ok(ContinuumReport {
        params: p.clone(),
        matching: MATCHING,
        ratio: coarse.max_error / fine.max_error,
        coarse,
        fine,
    })
}

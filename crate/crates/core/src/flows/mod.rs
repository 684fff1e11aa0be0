//! Painleve-type differential systems with affine Weyl group symmetry:
//! the symmetric fourth Painleve system and its A(1)_{2n} generalization,
//! the A(1)_{2n+1} family (fifth Painleve at n = 1), and the second
//! Painleve equation. Fixed-step RK4, symbolic derivation checks, and
//! numeric Backlund commutation.

mod backlund;
mod continuum;
mod derivation;

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::birep::BirepError;
use crate::latticedyn::LatticeError;
use crate::symfield::{FieldError, Rf};

pub use backlund::{
    backlund_flow_commutation, p2_backlund, p2_backlund_commutation, p2_backlund_state, transform_point, Commutation,
    P2Reflection,
};
pub use continuum::{continuum_limit_experiment, continuum_run, ContinuumParams, ContinuumReport, ContinuumRun};
pub use derivation::{
    flow_context, symbolic_rhs, verify_derivation_equivariance, verify_first_integrals, verify_p2_elimination,
    Derivation,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error(transparent)]
    Birep(#[from] BirepError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{family} needs {expected} components, got {got}")]
    Dimension { family: Family, expected: usize, got: usize },
    #[error("family parameter n must be at least 1")]
    ZeroOrder,
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("integration range [{0}, {1}] is empty or not finite")]
    Range(f64, f64),
    #[error("initial data is not finite")]
    NonFiniteStart,
    #[error("pole at {site}")]
    Pole { site: String },
    #[error("integration stopped early: {0}")]
    Incomplete(String),
    #[error("{0} has no symbolic Weyl group action")]
    NotAffine(Family),
    #[error("bad parameter: {0}")]
    Param(String),
}

impl From<FieldError> for FlowError {
    fn from(e: FieldError) -> Self {
        FlowError::Birep(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `A(1)_{2n}`; n = 1 is the symmetric fourth Painleve system.
    AEven(usize),
    /// `A(1)_{2n+1}`; n = 1 is the fifth Painleve system.
    AOdd(usize),
    /// `psi'' = 2 psi^3 - 2 x psi - 2 b_1 + 1` as a first-order pair.
    P2,
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::AEven(n) => 2 * n + 1,
            Family::AOdd(n) => 2 * n + 2,
            Family::P2 => 2,
        }
    }

    /// `l` of the symmetry group `A(1)_l`.
    pub fn rank(self) -> Option<usize> {
        match self {
            Family::AEven(n) => Some(2 * n),
            Family::AOdd(n) => Some(2 * n + 1),
            Family::P2 => None,
        }
    }

    pub fn component_names(self) -> Vec<String> {
        match self {
            Family::P2 => vec!["psi".into(), "dpsi".into()],
            _ => (0..self.dim()).map(|j| format!("f{j}")).collect(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::AEven(n) => write!(f, "A_even({n})"),
            Family::AOdd(n) => write!(f, "A_odd({n})"),
            Family::P2 => write!(f, "P2"),
        }
    }
}

/// Accepts `a_even:n`, `a_odd:n`, `A_even(n)`, `A_odd(n)`, and the
/// shorthands `sp4`, `pv`, `p2`.
impl FromStr for Family {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, FlowError> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "sp4" | "p4" => return Ok(Family::AEven(1)),
            "pv" | "p5" => return Ok(Family::AOdd(1)),
            "p2" => return Ok(Family::P2),
            _ => {}
        }
        let bad = || FlowError::Param(format!("unknown family {s:?}"));
        let (head, n) = t
            .strip_suffix(')')
            .and_then(|x| x.split_once('('))
            .or_else(|| t.split_once(':'))
            .ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(FlowError::ZeroOrder);
        }
        match head.trim() {
            "a_even" | "aeven" => Ok(Family::AEven(n)),
            "a_odd" | "aodd" => Ok(Family::AOdd(n)),
            _ => Err(bad()),
        }
    }
}

/// A family with numeric parameters: `alpha_0..alpha_l` for the affine
/// families, `b_1` for P2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSpec {
    pub family: Family,
    pub alpha: Vec<f64>,
    pub b1: f64,
}

impl FlowSpec {
    pub fn affine(family: Family, alpha: Vec<f64>) -> Result<Self, FlowError> {
        match family {
            Family::P2 => return Err(FlowError::NotAffine(family)),
            Family::AEven(0) | Family::AOdd(0) => return Err(FlowError::ZeroOrder),
            _ => {}
        }
        if alpha.len() != family.dim() {
            return Err(FlowError::Dimension {
                family,
                expected: family.dim(),
                got: alpha.len(),
            });
        }
        Ok(FlowSpec { family, alpha, b1: 0.0 })
    }

    pub fn p2(b1: f64) -> Self {
        FlowSpec {
            family: Family::P2,
            alpha: Vec::new(),
            b1,
        }
    }

    /// `alpha_0 + .. + alpha_l`.
    pub fn delta(&self) -> f64 {
        self.alpha.iter().sum()
    }

    pub fn b0(&self) -> f64 {
        1.0 - self.b1
    }
}

trait Ring: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Ring for Rf {
    fn zero() -> Self {
        Rf::zero()
    }
}

/// Right-hand sides of the affine families (indices cyclic).
///
/// Even: `f_j' = f_j sum_{r=1..n} (f_{j+2r-1} - f_{j+2r}) + alpha_j`.
/// Odd: `f_j' = f_j (sum_{r<=s} f_{j+2r-1} f_{j+2s} - sum_{r<=s} f_{j+2r} f_{j+2s+1})
///   + (delta/2 - sum_r alpha_{j+2r}) f_j + alpha_j sum_r f_{j+2r}`.
fn affine_rhs<R: Ring>(family: Family, alpha: &[R], f: &[R], half_delta: &R) -> Vec<R> {
    let m = f.len();
    let at = |v: &[R], k: usize| v[k % m].clone();
    let sum = |it: &mut dyn Iterator<Item = R>| it.fold(R::zero(), |a, b| a + b);
    (0..m)
        .map(|j| match family {
            Family::AEven(n) => {
                let s = sum(&mut (1..=n).map(|r| at(f, j + 2 * r - 1) - at(f, j + 2 * r)));
                at(f, j) * s + at(alpha, j)
            }
            Family::AOdd(n) => {
                let pairs = || (1..=n).flat_map(|r| (r..=n).map(move |s| (r, s)));
                let s1 = sum(&mut pairs().map(|(r, s)| at(f, j + 2 * r - 1) * at(f, j + 2 * s)));
                let s2 = sum(&mut pairs().map(|(r, s)| at(f, j + 2 * r) * at(f, j + 2 * s + 1)));
                let a_even = sum(&mut (1..=n).map(|r| at(alpha, j + 2 * r)));
                let f_even = sum(&mut (1..=n).map(|r| at(f, j + 2 * r)));
                at(f, j) * (s1 - s2) + (half_delta.clone() - a_even) * at(f, j) + at(alpha, j) * f_even
            }
            Family::P2 => unreachable!("P2 is not an affine family"),
        })
        .collect()
}

/// Derivative of the state at `x`.
pub fn vector_field(spec: &FlowSpec, x: f64, y: &[f64]) -> Result<Vec<f64>, FlowError> {
    let family = spec.family;
    if y.len() != family.dim() {
        return Err(FlowError::Dimension {
            family,
            expected: family.dim(),
            got: y.len(),
        });
    }
    Ok(match family {
        Family::P2 => {
            let (p, dp) = (y[0], y[1]);
            vec![dp, 2.0 * p * p * p - 2.0 * x * p - 2.0 * spec.b1 + 1.0]
        }
        _ => affine_rhs(family, &spec.alpha, y, &(spec.delta() / 2.0)),
    })
}

/// Samples of a fixed-step integration.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub family: Family,
    pub step: f64,
    pub xs: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Why the integration stopped before the end of the range.
    pub stopped: Option<String>,
}

impl Trajectory {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["x".to_string()];
        h.extend(self.family.component_names());
        h
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        self.xs
            .iter()
            .zip(&self.states)
            .map(|(x, s)| {
                let mut r = vec![format!("{x}")];
                r.extend(s.iter().map(|v| format!("{v:.17e}")));
                r
            })
            .collect()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds its start")
    }
}

fn rk4_step(field: &dyn Fn(f64, &[f64]) -> Vec<f64>, x: f64, y: &[f64], h: f64) -> Vec<f64> {
    let shifted = |k: &[f64], c: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + c * b).collect() };
    let k1 = field(x, y);
    let k2 = field(x + h / 2.0, &shifted(&k1, h / 2.0));
    let k3 = field(x + h / 2.0, &shifted(&k2, h / 2.0));
    let k4 = field(x + h, &shifted(&k3, h));
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Number of uniform steps covering `[x0, x1]` with a step close to `step`.
fn step_count(x0: f64, x1: f64, step: f64) -> Result<usize, FlowError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(FlowError::Step(step));
    }
    if !(x0.is_finite() && x1.is_finite() && x1 >= x0) {
        return Err(FlowError::Range(x0, x1));
    }
    Ok(((x1 - x0) / step).round() as usize)
}

/// Classical fixed-step RK4 on `[x0, x1]`. The step is adjusted so that a
/// whole number of steps covers the range. A non-finite state ends the
/// trajectory early; the reason is kept in `stopped`.
pub fn rk4_integrate(spec: &FlowSpec, initial: &[f64], x0: f64, x1: f64, step: f64) -> Result<Trajectory, FlowError> {
    vector_field(spec, x0, initial)?;
    if initial.iter().any(|v| !v.is_finite()) {
        return Err(FlowError::NonFiniteStart);
    }
    let n = step_count(x0, x1, step)?;
    let h = if n == 0 { step } else { (x1 - x0) / n as f64 };
    let field = |x: f64, y: &[f64]| vector_field(spec, x, y).expect("dimension checked");
    let mut xs = vec![x0];
    let mut states = vec![initial.to_vec()];
    let mut stopped = None;
    for k in 0..n {
        let x = x0 + k as f64 * h;
        let next = rk4_step(&field, x, states.last().expect("non-empty"), h);
        if next.iter().any(|v| !v.is_finite()) {
            stopped = Some(format!("non-finite state after x = {x}"));
            break;
        }
        xs.push(x0 + (k + 1) as f64 * h);
        states.push(next);
    }
    Ok(Trajectory {
        family: spec.family,
        step: h,
        xs,
        states,
        stopped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        assert_eq!("sp4".parse::<Family>().unwrap(), Family::AEven(1));
        assert_eq!("A_odd(2)".parse::<Family>().unwrap(), Family::AOdd(2));
        assert_eq!("a_even:2".parse::<Family>().unwrap(), Family::AEven(2));
        assert_eq!("p2".parse::<Family>().unwrap(), Family::P2);
        assert!("a_even:0".parse::<Family>().is_err());
        assert!("b_even:1".parse::<Family>().is_err());
        assert_eq!(Family::AOdd(1).dim(), 4);
        assert_eq!(Family::AEven(2).rank(), Some(4));
    }

    #[test]
    fn sp4_field_example() {
        let spec = FlowSpec::affine(Family::AEven(1), vec![0.1, 0.2, 0.3]).unwrap();
        let d = vector_field(&spec, 0.0, &[1.0, 2.0, 3.0]).unwrap();
        assert!((d[0] - (0.1 - 1.0)).abs() < 1e-15);
        assert!((d.iter().sum::<f64>() - spec.delta()).abs() < 1e-12);
        assert!(matches!(
            vector_field(&spec, 0.0, &[1.0]),
            Err(FlowError::Dimension { expected: 3, got: 1, .. })
        ));
        assert!(FlowSpec::affine(Family::AEven(1), vec![0.1]).is_err());
    }

    #[test]
    fn p2_field_at_origin() {
        let spec = FlowSpec::p2(0.3);
        let d = vector_field(&spec, 0.0, &[0.0, 0.7]).unwrap();
        assert_eq!(d, vec![0.7, -2.0 * 0.3 + 1.0]);
    }

    #[test]
    fn sp4_linear_integral() {
        let spec = FlowSpec::affine(Family::AEven(1), vec![0.2, 0.3, 0.4]).unwrap();
        let y0 = [0.5, -0.3, 0.8];
        let t = rk4_integrate(&spec, &y0, 0.0, 1.0, 1e-3).unwrap();
        assert!(t.stopped.is_none());
        assert_eq!(t.xs.len(), 1001);
        let s0: f64 = y0.iter().sum();
        for (x, s) in t.xs.iter().zip(&t.states) {
            let drift = s.iter().sum::<f64>() - (s0 + spec.delta() * x);
            assert!(drift.abs() < 1e-8, "{drift}");
        }
    }

    #[test]
    fn pv_exponential_integrals() {
        let spec = FlowSpec::affine(Family::AOdd(1), vec![0.1, 0.2, 0.3, 0.15]).unwrap();
        let y0 = [0.4, 0.3, -0.2, 0.5];
        let t = rk4_integrate(&spec, &y0, 0.0, 1.0, 1e-3).unwrap();
        let half = spec.delta() / 2.0;
        for (x, s) in t.xs.iter().zip(&t.states) {
            for (a, b) in [(0, 2), (1, 3)] {
                let c0 = y0[a] + y0[b];
                let c = (s[a] + s[b]) * (-half * x).exp();
                assert!(((c - c0) / c0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rk4_is_fourth_order_on_p2() {
        let spec = FlowSpec::p2(0.6);
        let y0 = [0.3, 0.1];
        let end = |h: f64| rk4_integrate(&spec, &y0, 0.0, 1.0, h).unwrap().last()[0];
        let (a, b, c) = (end(0.02), end(0.01), end(0.005));
        let ratio = (a - b) / (b - c);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn blow_up_truncates() {
        // psi'' = 2 psi^3 blows up quickly from a large start.
        let spec = FlowSpec::p2(0.5);
        let t = rk4_integrate(&spec, &[50.0, 2500.0], 0.0, 1.0, 1e-2).unwrap();
        assert!(t.stopped.is_some());
        assert!(t.xs.len() < 101);
        assert!(rk4_integrate(&spec, &[0.0, 0.0], 0.0, 1.0, 0.0).is_err());
        assert!(rk4_integrate(&spec, &[f64::NAN, 0.0], 0.0, 1.0, 0.1).is_err());
    }
}

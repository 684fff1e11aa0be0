use std::collections::HashMap;

use serde::Serialize;

use super::{flow_context, rk4_integrate, rk4_step, step_count, vector_field, FlowError, FlowSpec};
use crate::birep::{BirationalRep, FieldAutomorphismState, Word};
use crate::symfield::{FieldError, Var};

/// Applies a group element to numeric values: `alpha'_j = w(alpha_j)` and
/// `f'_j = w(f_j)` evaluated at `(alpha, f)`.
pub fn transform_point(
    rep: &BirationalRep,
    state: &FieldAutomorphismState,
    alpha: &[f64],
    f: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), FlowError> {
    let n = rep.size();
    let point: HashMap<Var, f64> = (0..n)
        .flat_map(|j| [(rep.alpha_var(j), alpha[j]), (rep.f_var(j), f[j])])
        .collect();
    let eval = |imgs: &[crate::symfield::Rf], what: &str| -> Result<Vec<f64>, FlowError> {
        imgs.iter()
            .enumerate()
            .map(|(j, g)| match g.eval_f64(&point) {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) | Err(FieldError::Pole) => Err(FlowError::Pole {
                    site: format!("{}({what}{j})", state.word()),
                }),
                Err(e) => Err(e.into()),
            })
            .collect()
    };
    Ok((eval(state.alphas(), "a")?, eval(state.fs(), "f")?))
}

#[derive(Clone, Debug, Serialize)]
pub struct Commutation {
    pub word: String,
    pub samples: usize,
    /// Max over samples and components of `|w(flow(y0)) - flow(w(y0))|`.
    pub max_deviation: f64,
}

/// Integrates from `initial` and from its image under `w` (with the
/// transformed parameters), then compares `w` applied to the first
/// trajectory with the second, sample by sample.
pub fn backlund_flow_commutation(
    spec: &FlowSpec,
    w: &Word,
    initial: &[f64],
    x0: f64,
    x1: f64,
    step: f64,
) -> Result<Commutation, FlowError> {
    let rep = flow_context(spec.family)?;
    let state = rep.apply_word(w)?;
    let (alpha_w, start_w) = transform_point(&rep, &state, &spec.alpha, initial)?;
    let spec_w = FlowSpec::affine(spec.family, alpha_w)?;
    let a = rk4_integrate(spec, initial, x0, x1, step)?;
    let b = rk4_integrate(&spec_w, &start_w, x0, x1, step)?;
    for t in [&a, &b] {
        if let Some(why) = &t.stopped {
            return Err(FlowError::Incomplete(why.clone()));
        }
    }
    let mut max_deviation: f64 = 0.0;
    for (ya, yb) in a.states.iter().zip(&b.states) {
        let (_, moved) = transform_point(&rep, &state, &spec.alpha, ya)?;
        for (p, q) in moved.iter().zip(yb) {
            max_deviation = max_deviation.max((p - q).abs());
        }
    }
    Ok(Commutation {
        word: w.to_string(),
        samples: a.states.len(),
        max_deviation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum P2Reflection {
    R0,
    R1,
}

fn p2_denominator(psi: f64, dpsi: f64, x: f64, which: P2Reflection) -> Result<f64, FlowError> {
    let d = match which {
        P2Reflection::R0 => dpsi - psi * psi + x,
        P2Reflection::R1 => dpsi + psi * psi - x,
    };
    if d == 0.0 || !d.is_finite() {
        return Err(FlowError::Pole {
            site: format!("{which:?} denominator at x = {x}"),
        });
    }
    Ok(d)
}

/// `r_0(psi) = psi - 2 b_0/(psi' - psi^2 + x)`,
/// `r_1(psi) = psi - 2 b_1/(psi' + psi^2 - x)`, with `b_0 = 1 - b_1`.
pub fn p2_backlund(psi: f64, dpsi: f64, x: f64, which: P2Reflection, b1: f64) -> Result<f64, FlowError> {
    let d = p2_denominator(psi, dpsi, x, which)?;
    let b = match which {
        P2Reflection::R0 => 1.0 - b1,
        P2Reflection::R1 => b1,
    };
    Ok(psi - 2.0 * b / d)
}

/// The transformed pair `(psi, psi')` and the new `b_1`. The derivative
/// uses `psi''` from the equation with the old parameter. `r_0` sends
/// `(b_0, b_1)` to `(-b_0, b_1 + 2 b_0)`, `r_1` to `(b_0 + 2 b_1, -b_1)`.
pub fn p2_backlund_state(
    psi: f64,
    dpsi: f64,
    x: f64,
    which: P2Reflection,
    b1: f64,
) -> Result<(f64, f64, f64), FlowError> {
    let d = p2_denominator(psi, dpsi, x, which)?;
    let b0 = 1.0 - b1;
    let ddpsi = 2.0 * psi * psi * psi - 2.0 * x * psi - 2.0 * b1 + 1.0;
    let (b, dd, new_b1) = match which {
        P2Reflection::R0 => (b0, ddpsi - 2.0 * psi * dpsi + 1.0, b1 + 2.0 * b0),
        P2Reflection::R1 => (b1, ddpsi + 2.0 * psi * dpsi - 1.0, -b1),
    };
    Ok((psi - 2.0 * b / d, dpsi + 2.0 * b * dd / (d * d), new_b1))
}

/// Transform-then-integrate against integrate-then-transform for P2.
pub fn p2_backlund_commutation(
    which: P2Reflection,
    b1: f64,
    initial: (f64, f64),
    x0: f64,
    x1: f64,
    step: f64,
) -> Result<f64, FlowError> {
    let n = step_count(x0, x1, step)?;
    let h = (x1 - x0) / n.max(1) as f64;
    let spec = FlowSpec::p2(b1);
    let (p, dp, b1w) = p2_backlund_state(initial.0, initial.1, x0, which, b1)?;
    let spec_w = FlowSpec::p2(b1w);
    let fa = |x: f64, y: &[f64]| vector_field(&spec, x, y).expect("pair");
    let fb = |x: f64, y: &[f64]| vector_field(&spec_w, x, y).expect("pair");
    let mut ya = vec![initial.0, initial.1];
    let mut yb = vec![p, dp];
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let x = x0 + k as f64 * h;
        ya = rk4_step(&fa, x, &ya, h);
        yb = rk4_step(&fb, x, &yb, h);
        let moved = p2_backlund(ya[0], ya[1], x + h, which, b1)?;
        if !(moved.is_finite() && yb[0].is_finite()) {
            return Err(FlowError::Incomplete(format!("non-finite value at x = {}", x + h)));
        }
        worst = worst.max((moved - yb[0]).abs());
    }
    Ok(worst)
}

use std::collections::HashMap;
use std::fmt::Display;

use num_bigint::BigInt;
use serde::Serialize;

use super::{evolution_formula, LatticeError, TranslationWord};
use crate::birep::BirationalRep;
use crate::symfield::{poly_text, FieldError, Scalar, Var};

/// A point of a lattice orbit: position over `T_1..T_l` and the values of
/// `alpha_j`, `f_j` there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitState<T> {
    pub step: usize,
    pub mu: Vec<i64>,
    pub alpha: Vec<T>,
    pub f: Vec<T>,
}

impl<T> OrbitState<T> {
    pub fn start(l: usize, alpha: Vec<T>, f: Vec<T>) -> Self {
        OrbitState {
            step: 0,
            mu: vec![0; l],
            alpha,
            f,
        }
    }
}

/// Where an orbit ran into a vanishing denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pole {
    /// Index of the state the failed step started from.
    pub step: usize,
    /// Component whose image could not be evaluated.
    pub j: usize,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit<T> {
    pub states: Vec<OrbitState<T>>,
    pub pole: Option<Pole>,
}

impl<T: Scalar + Display> Orbit<T> {
    pub fn header(&self) -> Vec<String> {
        let Some(s) = self.states.first() else {
            return Vec::new();
        };
        let mut h = vec!["step".to_string()];
        h.extend((1..=s.mu.len()).map(|k| format!("mu{k}")));
        h.extend((0..s.alpha.len()).map(|j| format!("a{j}")));
        h.extend((0..s.f.len()).map(|j| format!("f{j}")));
        h
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        self.states
            .iter()
            .map(|s| {
                let mut r = vec![s.step.to_string()];
                r.extend(s.mu.iter().map(|x| x.to_string()));
                r.extend(s.alpha.iter().map(|x| x.to_string()));
                r.extend(s.f.iter().map(|x| x.to_string()));
                r
            })
            .collect()
    }
}

/// Iterates `f_j[mu + nu] = F_{nu j}(alpha[mu]; f[mu])`. Stops early at the
/// first pole, which is recorded in the result.
///
/// The lattice position advances by `tw.coords`; words without a known
/// label advance the first coordinate.
pub fn orbit_iterate<T: Scalar>(
    rep: &BirationalRep,
    start: &OrbitState<T>,
    tw: &TranslationWord,
    steps: usize,
) -> Result<Orbit<T>, LatticeError> {
    let n = rep.size();
    for got in [start.alpha.len(), start.f.len()] {
        if got != n {
            return Err(LatticeError::Dimension { expected: n, got });
        }
    }
    let ev = evolution_formula(rep, tw)?;
    let reg = rep.registry();
    let slot: HashMap<Var, (bool, usize)> = (0..n)
        .flat_map(|j| [(rep.alpha_var(j), (true, j)), (rep.f_var(j), (false, j))])
        .collect();
    let step_mu: Vec<i64> = match &tw.coords {
        Some(c) => c.clone(),
        None => {
            let mut c = vec![0; start.mu.len()];
            if let Some(x) = c.first_mut() {
                *x = 1;
            }
            c
        }
    };

    let mut states = vec![start.clone()];
    let mut pole = None;
    'outer: for _ in 0..steps {
        let cur = states.last().expect("orbit starts non-empty");
        let value = |v: Var| {
            slot.get(&v)
                .map(|&(is_alpha, j)| if is_alpha { cur.alpha[j].clone() } else { cur.f[j].clone() })
        };
        let name = |v: Var| reg.name(v);
        let mut f = Vec::with_capacity(n);
        for (j, fj) in ev.f.iter().enumerate() {
            match fj.eval(&value, &name) {
                Ok(x) if x.is_finite_value() => f.push(x),
                Ok(_) | Err(FieldError::Pole) => {
                    pole = Some(Pole {
                        step: cur.step,
                        j,
                        expr: poly_text(fj.denom(), reg),
                    });
                    break 'outer;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let alpha = ev
            .alpha
            .iter()
            .map(|a| a.eval(&value, &name))
            .collect::<Result<Vec<T>, _>>()?;
        states.push(OrbitState {
            step: cur.step + 1,
            mu: cur.mu.iter().zip(&step_mu).map(|(a, b)| a + b).collect(),
            alpha,
            f,
        });
    }
    Ok(Orbit { states, pole })
}

/// Parameters of the second discrete Painleve equation: `c = f_0 + f_1 + f_2`
/// and the roots at `n = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dp2Params<T> {
    pub c: T,
    pub alpha0: T,
    pub alpha1: T,
    pub delta: T,
}

impl<T: Scalar> Dp2Params<T> {
    fn alpha0_at(&self, n: i64) -> T {
        self.alpha0.clone() + T::from_bigint(&BigInt::from(n)) * self.delta.clone()
    }

    fn alpha1_at(&self, n: i64) -> T {
        self.alpha1.clone() - T::from_bigint(&BigInt::from(n)) * self.delta.clone()
    }

    /// The full A(1)_2 start `(alpha, f)` matching `(f_0, f_1)` at `n = 0`.
    pub fn lift(&self, f0: T, f1: T) -> (Vec<T>, Vec<T>) {
        let a2 = self.delta.clone() - self.alpha0.clone() - self.alpha1.clone();
        let f2 = self.c.clone() - f0.clone() - f1.clone();
        (vec![self.alpha0.clone(), self.alpha1.clone(), a2], vec![f0, f1, f2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

fn checked<T: Scalar>(x: T, n: i64, site: &'static str) -> Result<T, LatticeError> {
    if x.is_zero() || !x.is_finite_value() {
        Err(LatticeError::DivisionByZero { n, site })
    } else {
        Ok(x)
    }
}

/// One step `n -> n +- 1` of
/// `f_1[n+1] = c - f_0[n] - (alpha_0 + n delta)/f_0[n] - f_1[n]`,
/// `f_0[n-1] = c - f_1[n] + (alpha_1 - n delta)/f_1[n] - f_0[n]`.
/// Each direction solves one relation for the new value of one variable
/// and the other relation, shifted by one site, for the second.
pub fn dp2_step<T: Scalar>(state: (T, T), p: &Dp2Params<T>, n: i64, dir: Direction) -> Result<(T, T), LatticeError> {
    let (f0, f1) = state;
    let c = p.c.clone();
    match dir {
        Direction::Forward => {
            let f0 = checked(f0, n, "f0[n]")?;
            let g1 = c.clone() - f0.clone() - p.alpha0_at(n) / f0.clone() - f1;
            let g1 = checked(g1, n, "f1[n+1]")?;
            let g0 = c - g1.clone() + p.alpha1_at(n + 1) / g1.clone() - f0;
            Ok((g0, g1))
        }
        Direction::Backward => {
            let f1 = checked(f1, n, "f1[n]")?;
            let g0 = c.clone() - f1.clone() + p.alpha1_at(n) / f1.clone() - f0;
            let g0 = checked(g0, n, "f0[n-1]")?;
            let g1 = c - g0.clone() - p.alpha0_at(n - 1) / g0.clone() - f1;
            Ok((g0, g1))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Dp2Orbit<T> {
    pub n0: i64,
    pub direction: Direction,
    /// `(n, f_0[n], f_1[n])`.
    pub states: Vec<(i64, T, T)>,
    /// Set when a zero denominator cut the orbit short.
    pub stopped: Option<String>,
}

pub fn dp2_orbit<T: Scalar>(start: (T, T), p: &Dp2Params<T>, n0: i64, steps: usize, dir: Direction) -> Dp2Orbit<T> {
    let dn = if dir == Direction::Forward { 1 } else { -1 };
    let mut states = vec![(n0, start.0, start.1)];
    let mut stopped = None;
    for _ in 0..steps {
        let (n, a, b) = states.last().cloned().expect("non-empty");
        match dp2_step((a, b), p, n, dir) {
            Ok((x, y)) => states.push((n + dn, x, y)),
            Err(e) => {
                stopped = Some(e.to_string());
                break;
            }
        }
    }
    Dp2Orbit {
        n0,
        direction: dir,
        states,
        stopped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latticedyn::{translation_word, AffineA};
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn exact_start() -> OrbitState<BigRational> {
        OrbitState::start(2, vec![q(1, 4), q(1, 4), q(1, 2)], vec![q(1, 1); 3])
    }

    #[test]
    fn exact_orbit_conserves_sum() {
        let ctx = AffineA::new(2).unwrap();
        let t1 = translation_word(&ctx, 1).unwrap();
        let o = orbit_iterate(ctx.rep(), &exact_start(), &t1, 10).unwrap();
        assert!(o.pole.is_none());
        assert_eq!(o.states.len(), 11);
        let delta = q(1, 1);
        for s in &o.states {
            let sum: BigRational = s.f.iter().sum();
            assert_eq!(sum, q(3, 1));
            let k = BigRational::from_integer(s.mu[0].into());
            assert_eq!(s.alpha[0], q(1, 4) + &k * &delta);
            assert_eq!(s.alpha[1], q(1, 4) - &k * &delta);
            assert_eq!(s.alpha[2], q(1, 2));
        }
        assert_eq!(o.states[10].mu, vec![10, 0]);
        // First step by hand: T(f1) = f2 - a0/f0 = 3/4.
        assert_eq!(o.states[1].f[1], q(3, 4));
    }

    #[test]
    fn zero_start_is_a_pole() {
        let ctx = AffineA::new(2).unwrap();
        let t1 = translation_word(&ctx, 1).unwrap();
        let mut s = exact_start();
        s.f[0] = q(0, 1);
        let o = orbit_iterate(ctx.rep(), &s, &t1, 5).unwrap();
        assert_eq!(o.states.len(), 1);
        let p = o.pole.unwrap();
        assert_eq!(p.step, 0);
        assert!(p.expr.contains("f0"), "{}", p.expr);
    }

    #[test]
    fn float_tracks_exact() {
        let ctx = AffineA::new(2).unwrap();
        let t1 = translation_word(&ctx, 1).unwrap();
        let exact = orbit_iterate(ctx.rep(), &exact_start(), &t1, 10).unwrap();
        let fs = OrbitState::start(2, vec![0.25, 0.25, 0.5], vec![1.0; 3]);
        let float = orbit_iterate(ctx.rep(), &fs, &t1, 10).unwrap();
        assert_eq!(float.states.len(), exact.states.len());
        for (a, b) in exact.states.iter().zip(&float.states) {
            for (x, y) in a.f.iter().zip(&b.f) {
                let x = x.to_f64().unwrap();
                assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn dimension_checked() {
        let ctx = AffineA::new(2).unwrap();
        let t1 = translation_word(&ctx, 1).unwrap();
        let s = OrbitState::start(2, vec![q(1, 1)], vec![q(1, 1); 3]);
        assert!(matches!(
            orbit_iterate(ctx.rep(), &s, &t1, 1),
            Err(LatticeError::Dimension { expected: 3, got: 1 })
        ));
    }

    fn dp2_params() -> Dp2Params<BigRational> {
        Dp2Params {
            c: q(2, 1),
            alpha0: q(1, 4),
            alpha1: q(1, 4),
            delta: q(1, 2),
        }
    }

    #[test]
    fn dp2_hand_example_and_inverse() {
        let p = dp2_params();
        let (g0, g1) = dp2_step((q(1, 1), q(1, 1)), &p, 0, Direction::Forward).unwrap();
        assert_eq!(g1, q(-1, 4));
        let back = dp2_step((g0, g1), &p, 1, Direction::Backward).unwrap();
        assert_eq!(back, (q(1, 1), q(1, 1)));
        assert!(matches!(
            dp2_step((q(0, 1), q(1, 1)), &p, 3, Direction::Forward),
            Err(LatticeError::DivisionByZero { n: 3, .. })
        ));
    }

    #[test]
    fn dp2_matches_group_orbit() {
        let p = dp2_params();
        let ctx = AffineA::new(2).unwrap();
        let t1 = translation_word(&ctx, 1).unwrap();
        let (alpha, f) = p.lift(q(1, 1), q(1, 1));
        let group = orbit_iterate(ctx.rep(), &OrbitState::start(2, alpha, f), &t1, 20).unwrap();
        let d = dp2_orbit((q(1, 1), q(1, 1)), &p, 0, 20, Direction::Forward);
        assert!(group.pole.is_none() && d.stopped.is_none());
        for (g, (n, f0, f1)) in group.states.iter().zip(&d.states) {
            assert_eq!(g.mu[0], *n);
            assert_eq!((&g.f[0], &g.f[1]), (f0, f1));
        }
        let (n, f0, f1) = d.states.last().unwrap().clone();
        let back = dp2_orbit((f0, f1), &p, n, 20, Direction::Backward);
        assert_eq!(back.states.last().unwrap(), &(0, q(1, 1), q(1, 1)));
    }
}

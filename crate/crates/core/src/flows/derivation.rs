use std::collections::HashMap;

use num_rational::BigRational;

use super::{affine_rhs, Family, FlowError};
use crate::birep::{BirationalRep, Letter, Word};
use crate::latticedyn::CheckReport;
use crate::rootdata::{DiagramAutomorphism, OrientationMode};
use crate::symfield::{Poly, Rf, Var, VarRegistry};

/// A derivation of the rational function field, fixed by its values on
/// variables (unlisted variables are constants).
#[derive(Clone, Debug, Default)]
pub struct Derivation {
    images: HashMap<Var, Rf>,
}

impl Derivation {
    pub fn new(images: HashMap<Var, Rf>) -> Self {
        Derivation { images }
    }

    pub fn image(&self, v: Var) -> Rf {
        self.images.get(&v).cloned().unwrap_or_else(Rf::zero)
    }

    fn apply_poly(&self, p: &Poly) -> Rf {
        p.vars()
            .into_iter()
            .filter_map(|v| self.images.get(&v).map(|d| (v, d)))
            .fold(Rf::zero(), |acc, (v, d)| &acc + &(&Rf::from_poly(p.derivative(v)) * d))
    }

    /// Leibniz rule: `D(n/d) = (D(n) - (n/d) D(d)) / d`.
    pub fn apply(&self, g: &Rf) -> Rf {
        let dn = self.apply_poly(g.numer());
        if g.denom().is_constant() {
            return &dn / &Rf::from_poly(g.denom().clone());
        }
        let dd = self.apply_poly(g.denom());
        &(&dn - &(g * &dd)) / &Rf::from_poly(g.denom().clone())
    }
}

/// `A(1)_l` with the cyclic `U` for an affine family.
pub fn flow_context(family: Family) -> Result<BirationalRep, FlowError> {
    let l = family.rank().ok_or(FlowError::NotAffine(family))?;
    Ok(BirationalRep::affine_cyclic(l, OrientationMode::ThmA)?)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// The family's right-hand sides in the variables of `rep`.
pub fn symbolic_rhs(family: Family, rep: &BirationalRep) -> Result<Vec<Rf>, FlowError> {
    let n = family.dim();
    if family.rank().is_none() {
        return Err(FlowError::NotAffine(family));
    }
    if rep.size() != n {
        return Err(FlowError::Dimension {
            family,
            expected: n,
            got: rep.size(),
        });
    }
    let alpha: Vec<Rf> = (0..n).map(|j| rep.alpha(j)).collect();
    let f: Vec<Rf> = (0..n).map(|j| rep.f(j)).collect();
    let delta = alpha.iter().fold(Rf::zero(), |a, b| &a + b);
    Ok(affine_rhs(family, &alpha, &f, &delta.scale(&half())))
}

fn family_derivation(family: Family, rep: &BirationalRep) -> Result<Derivation, FlowError> {
    let rhs = symbolic_rhs(family, rep)?;
    Ok(Derivation::new(
        rhs.into_iter().enumerate().map(|(j, r)| (rep.f_var(j), r)).collect(),
    ))
}

/// `D(w(g)) = w(D(g))` for every generator `g` in `{alpha_j, f_j}` and every
/// `w` in `{s_0, .., s_l, pi}`, with `D(alpha_j) = 0`.
pub fn verify_derivation_equivariance(family: Family) -> Result<CheckReport, FlowError> {
    let rep = flow_context(family)?;
    let d = family_derivation(family, &rep)?;
    let n = rep.size();
    let pi = DiagramAutomorphism::rotation(rep.cartan(), 1).map_err(|e| FlowError::Birep(e.into()))?;
    let mut letters: Vec<(String, Letter)> = (0..n).map(|i| (format!("s{i}"), Letter::Reflection(i))).collect();
    letters.push(("pi".into(), Letter::Diagram(pi)));
    let gens: Vec<(String, Rf)> = (0..n)
        .map(|j| (format!("a{j}"), rep.alpha(j)))
        .chain((0..n).map(|j| (format!("f{j}"), rep.f(j))))
        .collect();
    let mut out = CheckReport::new(n - 1);
    for (wname, letter) in letters {
        let state = rep.apply_word(&Word::new(vec![letter]))?;
        for (gname, g) in &gens {
            let lhs = d.apply(&rep.pushforward(&state, g)?);
            let rhs = rep.pushforward(&state, &d.apply(g))?;
            out.push(format!("D({wname}({gname})) = {wname}(D({gname}))"), lhs.rf_eq(&rhs));
        }
    }
    Ok(out)
}

/// Elementary first integrals: `D(sum f_j) = delta` for the even family;
/// `D(S) = (delta/2) S` for `S` the sum of the even-indexed or of the
/// odd-indexed `f_j` in the odd family.
pub fn verify_first_integrals(family: Family) -> Result<CheckReport, FlowError> {
    let rep = flow_context(family)?;
    let d = family_derivation(family, &rep)?;
    let n = rep.size();
    let delta = (0..n).fold(Rf::zero(), |a, j| &a + &rep.alpha(j));
    let sum_of = |js: &mut dyn Iterator<Item = usize>| js.fold(Rf::zero(), |a, j| &a + &rep.f(j));
    let mut out = CheckReport::new(n - 1);
    match family {
        Family::AEven(_) => {
            let s = sum_of(&mut (0..n));
            out.push("D(f0 + .. + fl) = delta", d.apply(&s).rf_eq(&delta));
        }
        Family::AOdd(_) => {
            for (name, start) in [("even", 0), ("odd", 1)] {
                let s = sum_of(&mut (start..n).step_by(2));
                let want = &delta.scale(&half()) * &s;
                out.push(format!("D(S_{name}) = (delta/2) S_{name}"), d.apply(&s).rf_eq(&want));
            }
        }
        Family::P2 => return Err(FlowError::NotAffine(family)),
    }
    Ok(out)
}

/// Eliminating `phi_0`, `phi_1` from
/// `phi_k' = 2 phi_k psi + a_k - 1/2`, `psi' = 2(phi_0 + phi_1) - psi^2 + x`
/// gives `psi'' = 2 psi^3 - 2 x psi - 2 b_1 + 1` with `b_1 = 1 - a_0 - a_1`.
pub fn verify_p2_elimination() -> Result<bool, FlowError> {
    let reg = VarRegistry::new();
    let var = |s: &str| reg.aux(s).map(Rf::var);
    let (psi, phi0, phi1, x, a0, a1) = (var("psi")?, var("phi0")?, var("phi1")?, var("x")?, var("a0")?, var("a1")?);
    let two = Rf::constant(2);
    let h = Rf::rational(&half());
    let images = [
        (x.clone(), Rf::one()),
        (psi.clone(), &(&(&two * &(&phi0 + &phi1)) - &(&psi * &psi)) + &x),
        (phi0.clone(), &(&(&two * &(&phi0 * &psi)) + &a0) - &h),
        (phi1.clone(), &(&(&two * &(&phi1 * &psi)) + &a1) - &h),
    ];
    let d = Derivation::new(
        images
            .into_iter()
            .map(|(v, img)| (v.vars()[0], img))
            .collect(),
    );
    let psi2 = d.apply(&d.apply(&psi));
    let b1 = &(&Rf::one() - &a0) - &a1;
    let p2 = &(&(&(&two * &(&psi * &(&psi * &psi))) - &(&two * &(&x * &psi))) - &(&two * &b1)) + &Rf::one();
    Ok(psi2.rf_eq(&p2))
}

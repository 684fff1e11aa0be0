//! Tau functions as formal exponentials `c tau^lambda`, the cocycle
//! `phi_w(lambda)` defined by `w(tau^lambda) = phi_w(lambda) tau^{w lambda}`,
//! and checks of its defining properties.
//!
//! The generator action is `s_i(c tau^lambda) = s_i(c) f_i^{lambda_i}
//! tau^{s_i lambda}`; diagram automorphisms relabel both the weight and the
//! coefficient.

mod scan;

use thiserror::Error;

use crate::birep::{BirationalRep, BirepError, FieldAutomorphismState, Letter, Word};
use crate::rootdata::{OrientationMode, RootError, Violation, WeightVector};
use crate::symfield::{FieldError, Rf};

pub use scan::{scan_conjecture, words_without_repeats, ScanReport, ScanRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TauError {
    #[error(transparent)]
    Birep(#[from] BirepError),
    #[error("orientation matrix does not satisfy the required conditions: {0:?}")]
    Mode(Vec<Violation>),
}

impl From<FieldError> for TauError {
    fn from(e: FieldError) -> Self {
        TauError::Birep(e.into())
    }
}

impl From<RootError> for TauError {
    fn from(e: RootError) -> Self {
        TauError::Birep(e.into())
    }
}

/// `coeff * tau^weight`.
#[derive(Clone, Debug)]
pub struct TauMonomial {
    pub weight: WeightVector,
    pub coeff: Rf,
}

impl TauMonomial {
    pub fn new(weight: WeightVector, coeff: Rf) -> Self {
        TauMonomial { weight, coeff }
    }

    /// `tau^lambda` with coefficient one.
    pub fn pure(weight: WeightVector) -> Self {
        TauMonomial {
            weight,
            coeff: Rf::one(),
        }
    }

    pub fn mul(&self, other: &TauMonomial) -> TauMonomial {
        TauMonomial {
            weight: &self.weight + &other.weight,
            coeff: &self.coeff * &other.coeff,
        }
    }

    pub fn inv(&self) -> Result<TauMonomial, FieldError> {
        Ok(TauMonomial {
            weight: -&self.weight,
            coeff: self.coeff.inv()?,
        })
    }

    /// Same weight and equal coefficients as field elements.
    pub fn same(&self, other: &TauMonomial) -> bool {
        self.weight == other.weight && self.coeff.rf_eq(&other.coeff)
    }
}

/// `phi_w(lambda)` together with its arguments.
#[derive(Clone, Debug)]
pub struct CocycleValue {
    pub word: Word,
    pub weight: WeightVector,
    pub value: Rf,
}

fn require(rep: &BirationalRep, mode: OrientationMode) -> Result<(), TauError> {
    let v = rep
        .orientation()
        .with_mode(rep.cartan(), mode)
        .err()
        .map(|e| match e {
            RootError::Orientation(v) => v,
            _ => Vec::new(),
        });
    match v {
        Some(v) => Err(TauError::Mode(v)),
        None => Ok(()),
    }
}

/// Generator action on a tau monomial.
pub fn tau_generator_action(rep: &BirationalRep, i: usize, m: &TauMonomial) -> Result<TauMonomial, TauError> {
    require(rep, OrientationMode::ThmB)?;
    tau_letter_action(rep, &Letter::Reflection(i), m)
}

fn tau_letter_action(rep: &BirationalRep, l: &Letter, m: &TauMonomial) -> Result<TauMonomial, TauError> {
    let a = rep.cartan();
    let one = rep.identity_state();
    match l {
        Letter::Reflection(i) => {
            let s = rep.apply_generator(&one, *i)?;
            let c = rep.pushforward(&s, &m.coeff)?;
            let fi = rep.f(*i).pow(m.weight.pairing(*i))?;
            Ok(TauMonomial {
                weight: a.reflect_weight(*i, &m.weight)?,
                coeff: &c * &fi,
            })
        }
        Letter::Diagram(d) => {
            let s = rep.apply_automorphism(&one, d)?;
            Ok(TauMonomial {
                weight: m.weight.permuted(d.perm()),
                coeff: rep.pushforward(&s, &m.coeff)?,
            })
        }
    }
}

/// `w(m)` by applying the letters of `w` one at a time, right to left.
pub fn tau_word_action(rep: &BirationalRep, w: &Word, m: &TauMonomial) -> Result<TauMonomial, TauError> {
    require(rep, OrientationMode::ThmB)?;
    w.check(rep.cartan())?;
    let mut out = m.clone();
    for l in w.letters().iter().rev() {
        out = tau_letter_action(rep, l, &out)?;
    }
    Ok(out)
}

/// `phi_w(lambda) = prod_r [l_1 ... l_{r-1}](phi_{l_r}(l_{r+1} ... l_p lambda))`
/// with `phi_{s_i}(mu) = f_i^{mu_i}` and `phi = 1` on diagram letters.
/// The factors are combined and cancelled against each other, so the value
/// comes back fully reduced.
pub fn cocycle_of_word(rep: &BirationalRep, w: &Word, lambda: &WeightVector) -> Result<CocycleValue, TauError> {
    require(rep, OrientationMode::ThmB)?;
    let a = rep.cartan();
    w.check(a)?;
    let letters = w.letters();
    let p = letters.len();
    // suffix[r] = l_{r+1} ... l_p lambda (0-based: letters r+1..p)
    let mut suffix = vec![lambda.clone(); p + 1];
    for r in (0..p).rev() {
        suffix[r] = Word::new(vec![letters[r].clone()]).act_on_weight(a, &suffix[r + 1])?;
    }
    let mut factors: Vec<(Rf, i64)> = Vec::new();
    let mut prefix: FieldAutomorphismState = rep.identity_state();
    for (r, l) in letters.iter().enumerate() {
        if let Letter::Reflection(i) = l {
            let e = suffix[r + 1].pairing(*i);
            if e != 0 {
                factors.push((prefix.f(*i).clone(), e));
            }
        }
        if r + 1 < p {
            prefix = rep.apply_letter(&prefix, l)?;
        }
    }
    let refs: Vec<(&Rf, i64)> = factors.iter().map(|(f, e)| (f, *e)).collect();
    Ok(CocycleValue {
        word: w.clone(),
        weight: lambda.clone(),
        value: Rf::product_of_powers(&refs)?,
    })
}

#[derive(Clone, Debug)]
pub struct CocycleCheck {
    pub passed: bool,
    pub lhs: Rf,
    pub rhs: Rf,
}

/// `phi_{w1 w2}(lambda) = w1(phi_{w2}(lambda)) phi_{w1}(w2 lambda)`.
pub fn verify_cocycle_condition(
    rep: &BirationalRep,
    w1: &Word,
    w2: &Word,
    lambda: &WeightVector,
) -> Result<CocycleCheck, TauError> {
    let a = rep.cartan();
    let lhs = cocycle_of_word(rep, &w1.concat(w2), lambda)?.value;
    let inner = cocycle_of_word(rep, w2, lambda)?.value;
    let s1 = rep.apply_word(w1)?;
    let moved = rep.pushforward(&s1, &inner)?;
    let w2l = w2.act_on_weight(a, lambda)?;
    let rhs = &moved * &cocycle_of_word(rep, w1, &w2l)?.value;
    Ok(CocycleCheck {
        passed: lhs.rf_eq(&rhs),
        lhs,
        rhs,
    })
}

/// `phi_{wa}(lambda) = phi_{wb}(lambda)` for words the caller knows to be
/// equal in the group.
pub fn verify_well_definedness(
    rep: &BirationalRep,
    wa: &Word,
    wb: &Word,
    lambda: &WeightVector,
) -> Result<CocycleCheck, TauError> {
    let lhs = cocycle_of_word(rep, wa, lambda)?.value;
    let rhs = cocycle_of_word(rep, wb, lambda)?.value;
    Ok(CocycleCheck {
        passed: lhs.rf_eq(&rhs),
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug)]
pub struct FFromTau {
    pub j: usize,
    /// Weight of the combined monomial; zero on success.
    pub weight: WeightVector,
    pub coeff: Rf,
    pub passed: bool,
}

/// Builds `tau_j s_k(tau_j) / prod_{i != j} tau_i^{-a_ij}` and compares it
/// with `f_j`. With `k = j` this is the expression of `f_j` through tau
/// functions; any other `k` must fail.
pub fn f_from_tau_with(rep: &BirationalRep, j: usize, k: usize) -> Result<FFromTau, TauError> {
    let a = rep.cartan();
    let n = a.size();
    a.check_index(j)?;
    let tj = TauMonomial::pure(WeightVector::basis(n, j));
    let moved = tau_generator_action(rep, k, &tj)?;
    let mut w = vec![0i64; n];
    for (i, wi) in w.iter_mut().enumerate() {
        if i != j {
            *wi = a.entry(i, j);
        }
    }
    // Dividing by tau_i^{-a_ij} multiplies by tau_i^{a_ij}.
    let denom = TauMonomial::pure(WeightVector::new(w));
    let m = tj.mul(&moved).mul(&denom);
    let passed = m.weight.is_zero() && m.coeff.rf_eq(&rep.f(j));
    Ok(FFromTau {
        j,
        weight: m.weight,
        coeff: m.coeff,
        passed,
    })
}

pub fn f_from_tau(rep: &BirationalRep, j: usize) -> Result<FFromTau, TauError> {
    f_from_tau_with(rep, j, j)
}

#[derive(Clone, Debug)]
pub struct Polynomiality {
    pub is_polynomial: bool,
    pub integer_coefficients: bool,
    /// Fully reduced value.
    pub value: Rf,
    pub nterms: usize,
    pub total_degree: u32,
}

/// Computes `phi_w(Lambda_k)`, reduces it with a full GCD, and reads off
/// whether it lies in Z[alpha, f, u].
///
/// The value is built by the letter-by-letter action on `tau^Lambda_k`
/// from the right: each step substitutes one reflection into the previous
/// coefficient, which introduces only powers of `f_i` as denominators.
/// The prefix-state product formula instead carries nested fractions whose
/// size grows quickly with the word length.
pub fn check_polynomiality(rep: &BirationalRep, w: &Word, k: usize) -> Result<Polynomiality, TauError> {
    require(rep, OrientationMode::Conjecture)?;
    let n = rep.size();
    rep.cartan().check_index(k)?;
    let v = tau_word_action(rep, w, &TauMonomial::pure(WeightVector::basis(n, k)))?
        .coeff
        .reduced();
    let is_polynomial = v.denom().is_constant();
    let integer_coefficients = v.denom().is_one();
    Ok(Polynomiality {
        is_polynomial,
        integer_coefficients,
        nterms: v.numer().nterms(),
        total_degree: v.numer().total_degree(),
        value: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanMatrix;
    use crate::symfield::parse_rf;

    fn a12() -> BirationalRep {
        BirationalRep::affine_cyclic(2, OrientationMode::Conjecture).unwrap()
    }

    #[test]
    fn generator_action_examples() {
        let rep = a12();
        let t1 = TauMonomial::pure(WeightVector::basis(3, 1));
        let m = tau_generator_action(&rep, 1, &t1).unwrap();
        assert_eq!(m.weight.coeffs(), &[1, -1, 1]);
        assert!(m.coeff.rf_eq(&rep.f(1)));
        let t0 = TauMonomial::pure(WeightVector::basis(3, 0));
        assert!(tau_generator_action(&rep, 1, &t0).unwrap().same(&t0));
        let back = tau_generator_action(&rep, 1, &m).unwrap();
        assert!(back.same(&t1));
    }

    #[test]
    fn cocycle_examples() {
        let rep = a12();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let v = cocycle_of_word(&rep, &Word::from_indices(&[i]), &WeightVector::basis(n, j)).unwrap();
                let expect = if i == j { rep.f(i) } else { Rf::one() };
                assert!(v.value.rf_eq(&expect));
            }
        }
        let e = cocycle_of_word(&rep, &Word::empty(), &WeightVector::basis(n, 1)).unwrap();
        assert!(e.value.is_one());
        let v = cocycle_of_word(&rep, &Word::from_indices(&[0, 1]), &WeightVector::basis(n, 1)).unwrap();
        let expect = parse_rf("f0*f1 + a0", rep.registry()).unwrap();
        assert!(v.value.rf_eq(&expect));
        // Oracle: the monomial action composed letter by letter.
        let m = tau_word_action(&rep, &Word::from_indices(&[0, 1]), &TauMonomial::pure(WeightVector::basis(n, 1)))
            .unwrap();
        assert!(m.coeff.rf_eq(&expect));
        assert_eq!(m.weight, Word::from_indices(&[0, 1]).act_on_weight(rep.cartan(), &WeightVector::basis(n, 1)).unwrap());
    }

    #[test]
    fn cocycle_with_rotation_matches_oracle() {
        let rep = a12();
        let w = Word::parse("s0 pi s2 s1 pi^-1 s0", rep.cartan()).unwrap();
        for k in 0..3 {
            let lam = WeightVector::basis(3, k);
            let v = cocycle_of_word(&rep, &w, &lam).unwrap();
            let m = tau_word_action(&rep, &w, &TauMonomial::pure(lam)).unwrap();
            assert!(v.value.rf_eq(&m.coeff));
        }
    }

    #[test]
    fn product_formula_matches_action_symbolic() {
        let rep = BirationalRep::symbolic(CartanMatrix::affine_a(2).unwrap(), OrientationMode::Conjecture).unwrap();
        for w in words_without_repeats(3, 4) {
            for k in 0..3 {
                let lam = WeightVector::basis(3, k);
                let v = cocycle_of_word(&rep, &w, &lam).unwrap();
                let m = tau_word_action(&rep, &w, &TauMonomial::pure(lam.clone())).unwrap();
                assert!(v.value.rf_eq(&m.coeff), "{w} k={k}");
                assert_eq!(m.weight, w.act_on_weight(rep.cartan(), &lam).unwrap());
            }
        }
    }

    #[test]
    fn condition_and_well_definedness() {
        let rep = a12();
        let l1 = WeightVector::basis(3, 1);
        let s0 = Word::from_indices(&[0]);
        let c = verify_cocycle_condition(&rep, &s0, &s0, &l1).unwrap();
        assert!(c.passed && c.lhs.is_one());
        assert!(verify_cocycle_condition(&rep, &s0, &Word::from_indices(&[1]), &l1).unwrap().passed);
        let wa = Word::from_indices(&[1, 2, 1]);
        let wb = Word::from_indices(&[2, 1, 2]);
        assert!(verify_well_definedness(&rep, &wa, &wb, &l1).unwrap().passed);
        assert!(verify_well_definedness(&rep, &Word::from_indices(&[0, 0]), &Word::empty(), &l1).unwrap().passed);
    }

    #[test]
    fn f_from_tau_all_j() {
        for l in [2, 3] {
            let rep = BirationalRep::affine_cyclic(l, OrientationMode::ThmB).unwrap();
            for j in 0..=l {
                let r = f_from_tau(&rep, j).unwrap();
                assert!(r.passed, "j={j}");
                let wrong = f_from_tau_with(&rep, j, (j + 1) % (l + 1)).unwrap();
                assert!(!wrong.passed && !wrong.weight.is_zero());
            }
        }
        // Non-symmetric matrix: the exponent uses the column of j.
        let rep = BirationalRep::symbolic(CartanMatrix::rank2(-2, -1).unwrap(), OrientationMode::ThmB).unwrap();
        for j in 0..2 {
            assert!(f_from_tau(&rep, j).unwrap().passed);
        }
    }

    #[test]
    fn polynomiality_small() {
        let rep = a12();
        let p = check_polynomiality(&rep, &Word::from_indices(&[0, 1]), 1).unwrap();
        assert!(p.is_polynomial && p.integer_coefficients);
        assert_eq!(p.nterms, 2);
        let p = check_polynomiality(&rep, &Word::from_indices(&[2]), 2).unwrap();
        assert!(p.value.rf_eq(&rep.f(2)));
        // Conjecture mode is required.
        let a = CartanMatrix::rank2(-2, -1).unwrap();
        let u = crate::rootdata::OrientationMatrix::from_ints(&[vec![0, 1], vec![-1, 0]], &a, OrientationMode::ThmA)
            .unwrap();
        let rep = BirationalRep::new(a, u, std::sync::Arc::new(crate::symfield::VarRegistry::with_rank(2))).unwrap();
        assert!(matches!(
            check_polynomiality(&rep, &Word::from_indices(&[0]), 0),
            Err(TauError::Mode(_))
        ));
    }
}

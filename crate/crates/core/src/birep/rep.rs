use std::sync::Arc;

use crate::rootdata::{
    CartanMatrix, DiagramAutomorphism, OrientationMatrix, OrientationMode, RootError,
};
use crate::symfield::{FieldError, Rf, Substitution, Var, VarRegistry};

use super::{BirepError, Letter, Word};

/// The representation `s_i(alpha_j) = alpha_j - a_ij alpha_i`,
/// `s_i(f_j) = f_j + u_ij alpha_i / f_i` on Q(alpha; f; u).
#[derive(Clone, Debug)]
pub struct BirationalRep {
    a: CartanMatrix,
    u: OrientationMatrix,
    reg: Arc<VarRegistry>,
    alpha: Vec<Var>,
    f: Vec<Var>,
}

/// Images `w(alpha_j)`, `w(f_j)` of the generators under the automorphism
/// of a word `w`, so that `pushforward(g) = w(g)`.
#[derive(Clone, Debug)]
pub struct FieldAutomorphismState {
    alpha: Vec<Rf>,
    f: Vec<Rf>,
    word: Word,
}

impl BirationalRep {
    /// `reg` must contain `a0..`, `f0..` and every atom used in `u`.
    pub fn new(a: CartanMatrix, u: OrientationMatrix, reg: Arc<VarRegistry>) -> Result<Self, BirepError> {
        let n = a.size();
        if u.size() != n {
            return Err(RootError::Dimension {
                expected: n,
                got: u.size(),
            }
            .into());
        }
        let mut alpha = Vec::with_capacity(n);
        let mut f = Vec::with_capacity(n);
        for j in 0..n {
            alpha.push(reg.alpha(j).ok_or_else(|| BirepError::MissingVariable(format!("a{j}")))?);
            f.push(reg.f(j).ok_or_else(|| BirepError::MissingVariable(format!("f{j}")))?);
        }
        for i in 0..n {
            for j in 0..n {
                for v in u.entry(i, j).vars() {
                    reg.check(v).map_err(BirepError::Field)?;
                }
            }
        }
        Ok(BirationalRep { a, u, reg, alpha, f })
    }

    /// A(1)_l with the cyclic orientation, validated in `mode`.
    pub fn affine_cyclic(l: usize, mode: OrientationMode) -> Result<Self, BirepError> {
        let a = CartanMatrix::affine_a(l)?;
        let u = OrientationMatrix::cyclic(&a, mode)?;
        let reg = Arc::new(VarRegistry::with_rank(l + 1));
        BirationalRep::new(a, u, reg)
    }

    /// Symbolic orientation with one atom per bond.
    pub fn symbolic(a: CartanMatrix, mode: OrientationMode) -> Result<Self, BirepError> {
        let reg = Arc::new(VarRegistry::with_rank(a.size()));
        let u = OrientationMatrix::symbolic(&a, &reg, mode)?;
        BirationalRep::new(a, u, reg)
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.a
    }

    pub fn orientation(&self) -> &OrientationMatrix {
        &self.u
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn size(&self) -> usize {
        self.a.size()
    }

    pub fn alpha_var(&self, j: usize) -> Var {
        self.alpha[j]
    }

    pub fn f_var(&self, j: usize) -> Var {
        self.f[j]
    }

    pub fn alpha(&self, j: usize) -> Rf {
        Rf::var(self.alpha[j])
    }

    pub fn f(&self, j: usize) -> Rf {
        Rf::var(self.f[j])
    }

    /// `delta = sum_j m_j alpha_j` for affine matrices.
    pub fn delta(&self) -> Result<Rf, BirepError> {
        let d = self.a.null_root()?;
        Ok(self.root_to_rf(d.coeffs()))
    }

    /// `sum_j c_j alpha_j`.
    pub fn root_to_rf(&self, coeffs: &[i64]) -> Rf {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(Rf::zero(), |acc, (j, &c)| &acc + &(&self.alpha(j) * &Rf::constant(c)))
    }

    pub fn identity_state(&self) -> FieldAutomorphismState {
        FieldAutomorphismState {
            alpha: (0..self.size()).map(|j| self.alpha(j)).collect(),
            f: (0..self.size()).map(|j| self.f(j)).collect(),
            word: Word::empty(),
        }
    }

    /// State of `w s_i` given the state of `w`.
    pub fn apply_generator(
        &self,
        state: &FieldAutomorphismState,
        i: usize,
    ) -> Result<FieldAutomorphismState, BirepError> {
        self.a.check_index(i)?;
        let n = self.size();
        let ai = &state.alpha[i];
        let ratio = ai.try_div(&state.f[i])?;
        let mut alpha = Vec::with_capacity(n);
        let mut f = Vec::with_capacity(n);
        for j in 0..n {
            let aij = self.a.entry(i, j);
            alpha.push(if aij == 0 {
                state.alpha[j].clone()
            } else {
                &state.alpha[j] - &(ai * &Rf::constant(aij))
            });
            let uij = self.u.entry(i, j);
            f.push(if uij.is_zero() {
                state.f[j].clone()
            } else {
                &state.f[j] + &(&ratio * uij)
            });
        }
        let mut word = state.word.clone();
        word.push(Letter::Reflection(i));
        Ok(FieldAutomorphismState { alpha, f, word })
    }

    /// State of `w o` given the state of `w`. Requires `U` to be invariant
    /// under `o`.
    pub fn apply_automorphism(
        &self,
        state: &FieldAutomorphismState,
        o: &DiagramAutomorphism,
    ) -> Result<FieldAutomorphismState, BirepError> {
        if o.size() != self.size() {
            return Err(RootError::Dimension {
                expected: self.size(),
                got: o.size(),
            }
            .into());
        }
        DiagramAutomorphism::new(o.perm().to_vec(), &self.a)?;
        let v = self.u.diagram_violations(o);
        if !v.is_empty() {
            return Err(BirepError::DiagramIncompatible(v));
        }
        let n = self.size();
        let alpha = (0..n).map(|j| state.alpha[o.apply(j)].clone()).collect();
        let f = (0..n).map(|j| state.f[o.apply(j)].clone()).collect();
        let mut word = state.word.clone();
        word.push(Letter::Diagram(o.clone()));
        Ok(FieldAutomorphismState { alpha, f, word })
    }

    pub fn apply_letter(
        &self,
        state: &FieldAutomorphismState,
        l: &Letter,
    ) -> Result<FieldAutomorphismState, BirepError> {
        match l {
            Letter::Reflection(i) => self.apply_generator(state, *i),
            Letter::Diagram(d) => self.apply_automorphism(state, d),
        }
    }

    /// State of `state.word() * w`.
    pub fn extend(
        &self,
        state: &FieldAutomorphismState,
        w: &Word,
    ) -> Result<FieldAutomorphismState, BirepError> {
        w.check(&self.a)?;
        let mut s = state.clone();
        for l in w.letters() {
            s = self.apply_letter(&s, l)?;
        }
        Ok(s)
    }

    pub fn apply_word(&self, w: &Word) -> Result<FieldAutomorphismState, BirepError> {
        self.extend(&self.identity_state(), w)
    }

    fn substitution(&self, state: &FieldAutomorphismState) -> Substitution {
        let mut s = Substitution::new();
        for j in 0..self.size() {
            s.set(self.alpha[j], state.alpha[j].clone());
            s.set(self.f[j], state.f[j].clone());
        }
        s
    }

    /// `w(expr)`; atoms are fixed.
    pub fn pushforward(&self, state: &FieldAutomorphismState, expr: &Rf) -> Result<Rf, BirepError> {
        Ok(expr.substitute(&self.substitution(state))?)
    }

    /// State of `w1 w2`: `(w1 w2)(g) = w1(w2(g))`.
    pub fn compose(
        &self,
        s1: &FieldAutomorphismState,
        s2: &FieldAutomorphismState,
    ) -> Result<FieldAutomorphismState, BirepError> {
        let sub = self.substitution(s1);
        let alpha = s2
            .alpha
            .iter()
            .map(|g| g.substitute(&sub))
            .collect::<Result<Vec<_>, FieldError>>()?;
        let f = s2
            .f
            .iter()
            .map(|g| g.substitute(&sub))
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(FieldAutomorphismState {
            alpha,
            f,
            word: s1.word.concat(&s2.word),
        })
    }

    /// First generator whose image differs from itself, with the image.
    pub fn first_moved(&self, state: &FieldAutomorphismState) -> Option<(String, Rf)> {
        for j in 0..self.size() {
            if !state.alpha[j].rf_eq(&self.alpha(j)) {
                return Some((format!("a{j}"), state.alpha[j].clone()));
            }
        }
        for j in 0..self.size() {
            if !state.f[j].rf_eq(&self.f(j)) {
                return Some((format!("f{j}"), state.f[j].clone()));
            }
        }
        None
    }

    pub fn is_identity(&self, state: &FieldAutomorphismState) -> bool {
        self.first_moved(state).is_none()
    }

    /// Checks that every alpha image is an integer combination of alphas.
    pub fn alpha_images_linear(&self, state: &FieldAutomorphismState) -> bool {
        state.alpha.iter().all(|img| {
            let Some(p) = img.as_integer_poly() else {
                return false;
            };
            p.terms().iter().all(|(m, _)| {
                m.degree() == 1 && m.iter().all(|(v, _)| self.alpha.contains(&v))
            })
        })
    }

    /// Images of alpha as integer coefficient vectors.
    pub fn alpha_image_coeffs(&self, state: &FieldAutomorphismState, j: usize) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        let p = state.alpha[j].as_integer_poly()?;
        let mut out = vec![0i64; self.size()];
        for (m, c) in p.terms() {
            if m.degree() != 1 {
                return None;
            }
            let (v, _) = m.iter().next()?;
            let k = self.alpha.iter().position(|&x| x == v)?;
            out[k] = c.to_i64()?;
        }
        Some(out)
    }

    /// Field equality of two states on all generators.
    pub fn states_equal(&self, s1: &FieldAutomorphismState, s2: &FieldAutomorphismState) -> bool {
        s1.alpha.iter().zip(&s2.alpha).all(|(x, y)| x.rf_eq(y))
            && s1.f.iter().zip(&s2.f).all(|(x, y)| x.rf_eq(y))
    }
}

impl FieldAutomorphismState {
    pub fn alpha(&self, j: usize) -> &Rf {
        &self.alpha[j]
    }

    pub fn f(&self, j: usize) -> &Rf {
        &self.f[j]
    }

    pub fn alphas(&self) -> &[Rf] {
        &self.alpha
    }

    pub fn fs(&self) -> &[Rf] {
        &self.f
    }

    pub fn word(&self) -> &Word {
        &self.word
    }
}

//! Images of `f_j` along a reduced word, written as sums of continued
//! fractions whose numerators are the roots separating `C` and `w.C`.

use crate::birep::{BirationalRep, Letter, Word};
use crate::rootdata::{CartanMatrix, RootVector};
use crate::symfield::Rf;

use super::LatticeError;

fn reflection_indices(w: &Word) -> Result<Vec<usize>, LatticeError> {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::Reflection(i) => Ok(*i),
            Letter::Diagram(_) => Err(LatticeError::NotReflectionWord(w.to_string())),
        })
        .collect()
}

/// `beta_r = s_{i_1} ... s_{i_{r-1}}(alpha_{i_r})` for `w = s_{i_1} ... s_{i_p}`,
/// so `beta_1 = alpha_{i_1}`.
pub fn inversion_roots(a: &CartanMatrix, w: &Word) -> Result<Vec<RootVector>, LatticeError> {
    let idx = reflection_indices(w)?;
    let n = a.size();
    let mut out = Vec::with_capacity(idx.len());
    for (r, &i) in idx.iter().enumerate() {
        let prefix = Word::from_indices(&idx[..r]);
        out.push(prefix.act_on_root(a, &RootVector::basis(n, i))?);
    }
    Ok(out)
}

/// A reflection word is reduced exactly when every `beta_r` is positive.
pub fn is_reduced(a: &CartanMatrix, w: &Word) -> Result<bool, LatticeError> {
    Ok(inversion_roots(a, w)?
        .iter()
        .all(|b| b.coeffs().iter().all(|&c| c >= 0)))
}

fn root_value(rep: &BirationalRep, b: &RootVector) -> Rf {
    b.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .fold(Rf::zero(), |acc, (j, &c)| &acc + &(&rep.alpha(j) * &Rf::constant(c)))
}

/// The summands `c_r = s_{i_1} ... s_{i_{r-1}}(alpha_{i_r}/f_{i_r})`, built
/// without the group action as
/// `c_r = beta_r / (f_{i_r} + sum_{q<r} u_{i_q i_r} c_q)`.
/// When only consecutive letters are joined by `u` this is the familiar
/// nested fraction `beta_r / (f_{i_r} + u c_{r-1})`.
pub fn word_fractions(rep: &BirationalRep, w: &Word) -> Result<Vec<Rf>, LatticeError> {
    let idx = reflection_indices(w)?;
    let betas = inversion_roots(rep.cartan(), w)?;
    let u = rep.orientation();
    let mut cs: Vec<Rf> = Vec::with_capacity(idx.len());
    for (r, &i) in idx.iter().enumerate() {
        let mut den = rep.f(i);
        for (q, c) in cs.iter().enumerate() {
            let uq = u.entry(idx[q], i);
            if !uq.is_zero() {
                den = &den + &(uq * c);
            }
        }
        cs.push(root_value(rep, &betas[r]).try_div(&den)?);
    }
    Ok(cs)
}

/// `w(f_j) = f_j + sum_r c_r u_{i_r j}`.
pub fn word_image_by_fractions(rep: &BirationalRep, w: &Word, j: usize) -> Result<Rf, LatticeError> {
    let idx = reflection_indices(w)?;
    let cs = word_fractions(rep, w)?;
    let u = rep.orientation();
    let mut out = rep.f(j);
    for (c, &i) in cs.iter().zip(&idx) {
        let uij = u.entry(i, j);
        if !uij.is_zero() {
            out = &out + &(uij * c);
        }
    }
    Ok(out.reduced())
}

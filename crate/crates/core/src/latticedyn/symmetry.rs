use serde::Serialize;

use super::{translation_word, AffineA, LatticeError};
use crate::birep::{BirationalRep, Letter, Word};
use crate::symfield::Rf;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub l: usize,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub(crate) fn new(l: usize) -> Self {
        CheckReport { l, checks: Vec::new() }
    }

    pub(crate) fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{} {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name))
            .collect()
    }
}

/// Whether `a b` and `b a` give the same state.
pub fn commute(rep: &BirationalRep, a: &Word, b: &Word) -> Result<bool, LatticeError> {
    let ab = rep.apply_word(&a.concat(b))?;
    let ba = rep.apply_word(&b.concat(a))?;
    Ok(rep.states_equal(&ab, &ba))
}

fn image(ctx: &AffineA, w: &Word, x: &Rf) -> Result<Rf, LatticeError> {
    let s = ctx.state(w)?;
    Ok(ctx.rep().pushforward(&s, x)?)
}

/// The reflection `r = s_0 s_1 s_0` and the dynamics of `T_1`:
/// commutation, the images `r(f_j)`, the `r`-invariants `s_1(f_0)` and
/// `s_0(f_1)`, and invariance of `alpha_0 + alpha_1` under `T_1`.
/// The explicit image lines need l >= 3, where the `f_2` and `f_l` lines
/// refer to different variables.
pub fn verify_sublattice_symmetry(ctx: &AffineA) -> Result<CheckReport, LatticeError> {
    let l = ctx.l();
    let rep = ctx.rep();
    let mut out = CheckReport::new(l);
    let t1 = translation_word(ctx, 1)?.word;
    let r = Word::from_indices(&[0, 1, 0]);
    out.push("r T1 = T1 r", commute(rep, &r, &t1)?);
    for j in 2..=l {
        out.push(format!("s{j} T1 = T1 s{j}"), commute(rep, &Word::from_indices(&[j]), &t1)?);
    }

    let a01 = &ctx.alpha(0) + &ctx.alpha(1);
    let s1f0 = image(ctx, &Word::from_indices(&[1]), &ctx.f(0))?;
    let s0f1 = image(ctx, &Word::from_indices(&[0]), &ctx.f(1))?;
    let rs = ctx.state(&r)?;
    let r_of = |x: &Rf| rep.pushforward(&rs, x);
    if l >= 3 {
        let p = a01.try_div(&s1f0)?;
        let q = a01.try_div(&s0f1)?;
        let li = l as i64;
        let lines = [
            ("r(f1) = f1 + (a0+a1)/s1(f0)".to_string(), ctx.f(1), &ctx.f(1) + &p),
            ("r(f2) = f2 + (a0+a1)/s0(f1)".to_string(), ctx.f(2), &ctx.f(2) + &q),
            (format!("r(f{l}) = f{l} - (a0+a1)/s1(f0)"), ctx.f(li), &ctx.f(li) - &p),
            ("r(f0) = f0 - (a0+a1)/s0(f1)".to_string(), ctx.f(0), &ctx.f(0) - &q),
        ];
        for (name, x, want) in lines {
            out.push(name, r_of(&x)?.rf_eq(&want));
        }
        for j in 3..l {
            out.push(format!("r(f{j}) = f{j}"), r_of(&ctx.f(j as i64))?.rf_eq(&ctx.f(j as i64)));
        }
    }
    out.push("r fixes s1(f0)", r_of(&s1f0)?.rf_eq(&s1f0));
    out.push("r fixes s0(f1)", r_of(&s0f1)?.rf_eq(&s0f1));
    out.push("T1(s1(f0)) = s0(f1)", image(ctx, &t1, &s1f0)?.rf_eq(&s0f1));
    out.push("T1 fixes a0+a1", image(ctx, &t1, &a01)?.rf_eq(&a01));
    Ok(out)
}

/// `r_k = s_0 .. s_{k-1} s_k s_{k-1} .. s_0` commutes with `T_1, .., T_k`.
pub fn verify_generalized_r(ctx: &AffineA, k: usize) -> Result<CheckReport, LatticeError> {
    let l = ctx.l();
    if !(1..l).contains(&k) {
        return Err(LatticeError::ShiftIndex { i: k, max: l - 1 });
    }
    let mut idx: Vec<usize> = (0..=k).collect();
    idx.extend((0..k).rev());
    let r = Word::from_indices(&idx);
    let mut out = CheckReport::new(l);
    for i in 1..=k {
        let t = translation_word(ctx, i)?.word;
        out.push(format!("r{k} T{i} = T{i} r{k}"), commute(ctx.rep(), &r, &t)?);
    }
    Ok(out)
}

/// Commutativity of all `T_i`, and `T_1 ... T_{l+1} = 1`.
pub fn verify_translation_lattice(ctx: &AffineA) -> Result<CheckReport, LatticeError> {
    let l = ctx.l();
    let ts = (1..=l + 1)
        .map(|i| translation_word(ctx, i).map(|t| t.word))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = CheckReport::new(l);
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            out.push(format!("T{} T{} = T{} T{}", i + 1, j + 1, j + 1, i + 1), commute(ctx.rep(), &ts[i], &ts[j])?);
        }
    }
    let prod = ts.iter().fold(Word::empty(), |w, t| w.concat(t));
    out.push(format!("T1 ... T{} = 1", l + 1), ctx.rep().is_identity(&ctx.state(&prod)?));
    Ok(out)
}

/// A generator's name, word, and action on the node indices.
type Generator = (String, Word, Box<dyn Fn(usize) -> usize>);

/// `w T_k w^-1 = T_{w(k)}` for the generators: `s_i` (i >= 1) swaps
/// `T_i` and `T_{i+1}`, `s_0` swaps `T_1` and `T_{l+1}`, `pi` sends `T_k`
/// to `T_{k+1}`. Equivalently the orbit functions satisfy
/// `(w.f_j)[mu] = w(f_j[w^-1 mu])`.
pub fn verify_orbit_equivariance(ctx: &AffineA) -> Result<CheckReport, LatticeError> {
    let l = ctx.l();
    let n = l + 1;
    let rep = ctx.rep();
    let ts = (1..=n)
        .map(|i| translation_word(ctx, i).map(|t| t.word))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = CheckReport::new(l);
    let mut gens: Vec<Generator> = Vec::new();
    gens.push((
        "s0".into(),
        Word::from_indices(&[0]),
        Box::new(move |k| match k {
            1 => n,
            k if k == n => 1,
            k => k,
        }),
    ));
    for i in 1..=l {
        gens.push((
            format!("s{i}"),
            Word::from_indices(&[i]),
            Box::new(move |k| match k {
                k if k == i => i + 1,
                k if k == i + 1 => i,
                k => k,
            }),
        ));
    }
    gens.push((
        "pi".into(),
        Word::new(vec![Letter::Diagram(ctx.pi().clone())]),
        Box::new(move |k| k % n + 1),
    ));
    for (name, w, sigma) in &gens {
        for k in 1..=n {
            let lhs = ctx.state(&w.concat(&ts[k - 1]).concat(&w.inverse()))?;
            let rhs = ctx.state(&ts[sigma(k) - 1])?;
            out.push(format!("{name} T{k} {name}^-1 = T{}", sigma(k)), rep.states_equal(&lhs, &rhs));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_relations() {
        for l in 2..=4 {
            let ctx = AffineA::new(l).unwrap();
            let r = verify_translation_lattice(&ctx).unwrap();
            assert!(r.all_passed(), "l = {l}\n{}", r.to_text());
            assert_eq!(r.checks.len(), (l + 1) * l / 2 + 1);
        }
    }

    #[test]
    fn sublattice_l2_and_l4() {
        let ctx = AffineA::new(2).unwrap();
        let r = verify_sublattice_symmetry(&ctx).unwrap();
        assert!(r.all_passed(), "{}", r.to_text());
        assert!(r.checks.iter().any(|c| c.name == "s2 T1 = T1 s2"));
        let ctx = AffineA::new(4).unwrap();
        let r = verify_sublattice_symmetry(&ctx).unwrap();
        assert!(r.all_passed(), "{}", r.to_text());
        assert!(r.checks.iter().any(|c| c.name == "r(f3) = f3"));
    }

    #[test]
    fn generalized_reflection() {
        let ctx = AffineA::new(3).unwrap();
        let r = verify_generalized_r(&ctx, 2).unwrap();
        assert_eq!(r.checks.len(), 2);
        assert!(r.all_passed(), "{}", r.to_text());
        assert!(verify_generalized_r(&ctx, 3).is_err());
        // r_2 does not commute with T_3.
        let r2 = Word::from_indices(&[0, 1, 2, 1, 0]);
        let t3 = translation_word(&ctx, 3).unwrap().word;
        assert!(!commute(ctx.rep(), &r2, &t3).unwrap());
    }

    #[test]
    fn equivariance_l2_l3() {
        for l in [2, 3] {
            let ctx = AffineA::new(l).unwrap();
            let r = verify_orbit_equivariance(&ctx).unwrap();
            assert_eq!(r.checks.len(), (l + 2) * (l + 1));
            assert!(r.all_passed(), "{}", r.to_text());
        }
    }
}

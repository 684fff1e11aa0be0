//! Birational action of a Coxeter group (extended by diagram
//! automorphisms) on the field of rational functions in `alpha_j`, `f_j`.
//!
//! Composition convention: actions are left actions, and the state of a
//! word `w` stores the images `w(alpha_j)`, `w(f_j)`, so that
//! `(w1 w2)(g) = w1(w2(g))`. Appending a letter `x` to `w` gives the images
//! `(w x)(g) = w(x(g))`, which only needs arithmetic on the stored images.

mod relations;
mod rep;
mod word;

use thiserror::Error;

use crate::rootdata::{RootError, Violation};
use crate::symfield::FieldError;

pub use relations::{Relation, RelationCheck, RelationOptions, RelationReport};
pub use rep::{BirationalRep, FieldAutomorphismState};
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BirepError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("word parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("registry has no variable {0}")]
    MissingVariable(String),
    #[error("orientation matrix is not invariant under the automorphism: {0:?}")]
    DiagramIncompatible(Vec<Violation>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{CartanMatrix, DiagramAutomorphism, OrientationMatrix, OrientationMode};
    use crate::symfield::{parse_rf, Rf};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn a12() -> BirationalRep {
        BirationalRep::affine_cyclic(2, OrientationMode::ThmA).unwrap()
    }

    fn rf(rep: &BirationalRep, s: &str) -> Rf {
        parse_rf(s, rep.registry()).unwrap()
    }

    #[test]
    fn s1_images_on_a12() {
        let rep = a12();
        let s = rep.apply_generator(&rep.identity_state(), 1).unwrap();
        assert!(s.f(2).rf_eq(&rf(&rep, "f2 + a1/f1")));
        assert!(s.f(0).rf_eq(&rf(&rep, "f0 - a1/f1")));
        assert!(s.f(1).rf_eq(&rf(&rep, "f1")));
        assert!(s.alpha(1).rf_eq(&rf(&rep, "-a1")));
        assert!(s.alpha(0).rf_eq(&rf(&rep, "a0 + a1")));
        assert!(s.alpha(2).rf_eq(&rf(&rep, "a2 + a1")));
        let back = rep.apply_generator(&s, 1).unwrap();
        assert!(rep.is_identity(&back));
        assert!(rep.identity_state().word().is_empty());
        let e = rf(&rep, "a1/f1");
        assert!(rep.pushforward(&s, &e).unwrap().rf_eq(&rf(&rep, "-a1/f1")));
        assert!(rep.pushforward(&rep.identity_state(), &e).unwrap().rf_eq(&e));
    }

    #[test]
    fn order_convention_against_substitution() {
        // State of s0 s1 must equal s0 applied after s1: (s0 s1)(g) = s0(s1(g)).
        let rep = a12();
        let s01 = rep.apply_word(&Word::from_indices(&[0, 1])).unwrap();
        let s0 = rep.apply_word(&Word::from_indices(&[0])).unwrap();
        let s1 = rep.apply_word(&Word::from_indices(&[1])).unwrap();
        for j in 0..3 {
            let expect = rep.pushforward(&s0, s1.f(j)).unwrap();
            assert!(s01.f(j).rf_eq(&expect));
        }
        // f2 -> s0(f2 + a1/f1) with u02 = -1, u01 = 1
        let expect = rf(&rep, "f2 - a0/f0 + (a0 + a1)/(f1 + a0/f0)");
        assert!(s01.f(2).rf_eq(&expect));
        assert!(rep.states_equal(&rep.compose(&s0, &s1).unwrap(), &s01));
    }

    #[test]
    fn rotation_and_delta() {
        let rep = a12();
        let pi = Word::parse("pi", rep.cartan()).unwrap();
        let s = rep.apply_word(&pi).unwrap();
        for j in 0..3 {
            assert!(s.f(j).rf_eq(&rep.f((j + 1) % 3)));
        }
        assert!(rep.is_identity(&rep.apply_word(&pi.pow(3)).unwrap()));
        for i in 0..3 {
            let lhs = rep.apply_word(&Word::parse(&format!("pi s{i} pi^-1"), rep.cartan()).unwrap()).unwrap();
            let rhs = rep.apply_word(&Word::from_indices(&[(i + 1) % 3])).unwrap();
            assert!(rep.states_equal(&lhs, &rhs));
        }
        let delta = rep.delta().unwrap();
        let w = rep.apply_word(&Word::parse("s0 s1 pi s2 s0", rep.cartan()).unwrap()).unwrap();
        assert!(rep.pushforward(&w, &delta).unwrap().rf_eq(&delta));
        assert!(rep.alpha_images_linear(&w));
    }

    #[test]
    fn incompatible_diagram_rejected() {
        let a = CartanMatrix::affine_a(3).unwrap();
        let rep = BirationalRep::new(
            a.clone(),
            OrientationMatrix::cyclic(&a, OrientationMode::ThmA).unwrap(),
            std::sync::Arc::new(crate::symfield::VarRegistry::with_rank(4)),
        )
        .unwrap();
        let flip = DiagramAutomorphism::new(vec![0, 3, 2, 1], &a).unwrap();
        assert!(matches!(
            rep.apply_automorphism(&rep.identity_state(), &flip),
            Err(BirepError::DiagramIncompatible(_))
        ));
    }

    #[test]
    fn relation_suites() {
        let rep = a12();
        let opts = RelationOptions {
            diagrams: vec![DiagramAutomorphism::rotation(rep.cartan(), 1).unwrap()],
        };
        let r = rep.verify_coxeter_relations(&opts).unwrap();
        assert!(r.all_passed(), "{}", r.to_text());
        assert_eq!(r.checks.len(), 3 + 3 + 1 + 3);

        // B2 pattern with the symbolic u01 = -2 u10 option.
        let b2 = BirationalRep::symbolic(CartanMatrix::rank2(-2, -1).unwrap(), OrientationMode::ThmB).unwrap();
        assert!(b2.verify_coxeter_relations(&RelationOptions::default()).unwrap().all_passed());

        // A2 with a non-skew U fails the braid relation.
        let a = CartanMatrix::finite_a(2).unwrap();
        let u = OrientationMatrix::from_ints(&[vec![0, 1], vec![1, 0]], &a, OrientationMode::Unchecked).unwrap();
        let bad = BirationalRep::new(a, u, std::sync::Arc::new(crate::symfield::VarRegistry::with_rank(2))).unwrap();
        let r = bad.verify_coxeter_relations(&RelationOptions::default()).unwrap();
        assert!(!r.all_passed());
        let fail = r.failures().next().unwrap();
        assert_eq!(fail.relation, Relation::Braid { i: 0, j: 1, m: 3 });
        assert!(fail.counterexample.is_some());
        assert!(r.to_text().contains("FAIL (s0 s1)^3 = 1"));
        assert_eq!(r.to_json()["checks"][2]["relation"]["kind"], "braid");
    }

    #[test]
    fn word_concat_matches_composition_randomized() {
        let rep = BirationalRep::affine_cyclic(3, OrientationMode::ThmA).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = rep.size();
        let point: HashMap<_, _> = (0..n)
            .flat_map(|j| [rep.alpha_var(j), rep.f_var(j)])
            .map(|v| (v, BigRational::new(rng.random_range(1..50).into(), rng.random_range(1..50).into())))
            .collect();
        for _ in 0..10 {
            let w1 = Word::from_indices(&(0..3).map(|_| rng.random_range(0..n)).collect::<Vec<_>>());
            let w2 = Word::from_indices(&(0..3).map(|_| rng.random_range(0..n)).collect::<Vec<_>>());
            let direct = rep.apply_word(&w1.concat(&w2)).unwrap();
            let composed = rep
                .compose(&rep.apply_word(&w1).unwrap(), &rep.apply_word(&w2).unwrap())
                .unwrap();
            assert!(rep.states_equal(&direct, &composed));
            for j in 0..n {
                // Independent check by evaluation.
                let x = direct.f(j).eval_rational(&point);
                let y = composed.f(j).eval_rational(&point);
                assert_eq!(x, y);
            }
        }
    }
}

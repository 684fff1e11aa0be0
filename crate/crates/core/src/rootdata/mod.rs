//! Generalized Cartan matrices, root and weight lattices, reflections,
//! diagram automorphisms and orientation matrices.

mod cartan;
mod diagram;
mod lattice;
mod orientation;

use thiserror::Error;

pub use cartan::{CartanMatrix, CoxeterOrder};
pub use diagram::DiagramAutomorphism;
pub use lattice::{RootVector, WeightVector};
pub use orientation::{Clause, OrientationMatrix, OrientationMode, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("matrix is empty or not square")]
    NotSquare,
    #[error("diagonal entry a[{i}][{i}] must be 2")]
    Diagonal { i: usize },
    #[error("off-diagonal entry a[{i}][{j}] is positive")]
    PositiveOffDiagonal { i: usize, j: usize },
    #[error("a[{i}][{j}] and a[{j}][{i}] must vanish together")]
    ZeroPattern { i: usize, j: usize },
    #[error("index {i} out of range for rank {n}")]
    Index { i: usize, n: usize },
    #[error("expected dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not of affine type: {0}")]
    NotAffine(String),
    #[error("not a diagram automorphism: {0}")]
    NotAutomorphism(String),
    #[error("orientation matrix violates {}", fmt_violations(.0))]
    Orientation(Vec<Violation>),
    #[error("{0}")]
    Preset(String),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrices() -> Vec<CartanMatrix> {
        vec![
            CartanMatrix::finite_a(2).unwrap(),
            CartanMatrix::rank2(0, 0).unwrap(),
            CartanMatrix::rank2(-2, -1).unwrap(),
            CartanMatrix::rank2(-3, -1).unwrap(),
            CartanMatrix::affine_a(2).unwrap(),
            CartanMatrix::affine_a(3).unwrap(),
        ]
    }

    #[test]
    fn paper_examples() {
        let a = CartanMatrix::affine_a(2).unwrap();
        // s1(a2) = a2 + a1
        let s = a.reflect_root(1, &RootVector::basis(3, 2)).unwrap();
        assert_eq!(s.coeffs(), &[0, 1, 1]);
        let s = a.reflect_root(1, &RootVector::basis(3, 1)).unwrap();
        assert_eq!(s.coeffs(), &[0, -1, 0]);
        let delta = a.null_root().unwrap();
        assert_eq!(a.reflect_root(0, &delta).unwrap(), delta);
        // s1(L1) = L0 - L1 + L2, s1(L0) = L0
        let w = a.reflect_weight(1, &WeightVector::basis(3, 1)).unwrap();
        assert_eq!(w.coeffs(), &[1, -1, 1]);
        let w0 = WeightVector::basis(3, 0);
        assert_eq!(a.reflect_weight(1, &w0).unwrap(), w0);
        // a0 -> 2L0 - L1 - L2, delta -> 0
        assert_eq!(a.root_to_weight(&RootVector::basis(3, 0)).unwrap().coeffs(), &[2, -1, -1]);
        assert!(a.root_to_weight(&delta).unwrap().is_zero());
        assert!(a.root_to_weight(&RootVector::zero(3)).unwrap().is_zero());
        assert!(matches!(
            a.reflect_root(3, &delta),
            Err(RootError::Index { i: 3, n: 3 })
        ));
    }

    #[test]
    fn braid_relations_on_lattices() {
        for a in matrices() {
            let n = a.size();
            for i in 0..n {
                for j in 0..n {
                    let Some(m) = a.coxeter(i, j).finite() else { continue };
                    if i == j {
                        continue;
                    }
                    for b in 0..n {
                        let mut v = RootVector::basis(n, b);
                        let mut w = WeightVector::basis(n, b);
                        for k in 0..2 * m {
                            let g = if k % 2 == 0 { i } else { j };
                            v = a.reflect_root(g, &v).unwrap();
                            w = a.reflect_weight(g, &w).unwrap();
                        }
                        assert_eq!(v, RootVector::basis(n, b));
                        assert_eq!(w, WeightVector::basis(n, b));
                    }
                }
            }
        }
    }

    #[test]
    fn affine_rotation_preserves_cyclic_u() {
        let a = CartanMatrix::affine_a(2).unwrap();
        let u = OrientationMatrix::cyclic(&a, OrientationMode::Conjecture).unwrap();
        let pi = DiagramAutomorphism::rotation(&a, 1).unwrap();
        assert!(u.diagram_violations(&pi).is_empty());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.entry(pi.apply(i), pi.apply(j)), a.entry(i, j));
            }
        }
    }

    proptest! {
        #[test]
        fn reflections_are_involutions(
            which in 0usize..6,
            coeffs in prop::collection::vec(-20i64..20, 4),
            i in 0usize..4,
        ) {
            let a = &matrices()[which];
            let n = a.size();
            let i = i % n;
            let v = RootVector::new(coeffs[..n].to_vec());
            let w = WeightVector::new(coeffs[..n].to_vec());
            prop_assert_eq!(a.reflect_root(i, &a.reflect_root(i, &v).unwrap()).unwrap(), v.clone());
            prop_assert_eq!(a.reflect_weight(i, &a.reflect_weight(i, &w).unwrap()).unwrap(), w);
            // Q -> L intertwines the two actions.
            let lhs = a.root_to_weight(&a.reflect_root(i, &v).unwrap()).unwrap();
            let rhs = a.reflect_weight(i, &a.root_to_weight(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

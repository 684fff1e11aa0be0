use serde::Serialize;

use super::{CartanMatrix, RootError};

/// Permutation `w` of the index set with `a_{w(i) w(j)} = a_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn new(perm: Vec<usize>, a: &CartanMatrix) -> Result<Self, RootError> {
        let n = a.size();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(RootError::NotAutomorphism("wrong length".into()));
        }
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(RootError::NotAutomorphism("not a bijection".into()));
            }
            seen[p] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if a.entry(perm[i], perm[j]) != a.entry(i, j) {
                    return Err(RootError::NotAutomorphism(format!(
                        "a[{}][{}] != a[{i}][{j}]",
                        perm[i], perm[j]
                    )));
                }
            }
        }
        Ok(DiagramAutomorphism { perm })
    }

    pub fn identity(n: usize) -> Self {
        DiagramAutomorphism {
            perm: (0..n).collect(),
        }
    }

    /// `i -> i + k mod n`; a diagram automorphism for A(1)_l.
    pub fn rotation(a: &CartanMatrix, k: i64) -> Result<Self, RootError> {
        let n = a.size() as i64;
        let perm = (0..n).map(|i| (i + k).rem_euclid(n) as usize).collect();
        DiagramAutomorphism::new(perm, a)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        DiagramAutomorphism { perm: inv }
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        DiagramAutomorphism {
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Smallest `k > 0` with `self^k = id`.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_order_and_inverse() {
        for l in 2..6 {
            let a = CartanMatrix::affine_a(l).unwrap();
            let pi = DiagramAutomorphism::rotation(&a, 1).unwrap();
            assert_eq!(pi.order(), l + 1);
            assert!(pi.compose(&pi.inverse()).is_identity());
            assert_eq!(pi.inverse(), DiagramAutomorphism::rotation(&a, -1).unwrap());
        }
    }

    #[test]
    fn rejects_non_automorphisms() {
        let a = CartanMatrix::rank2(-2, -1).unwrap();
        assert!(DiagramAutomorphism::new(vec![1, 0], &a).is_err());
        assert!(DiagramAutomorphism::new(vec![0, 0], &a).is_err());
        let b = CartanMatrix::finite_a(3).unwrap();
        assert!(DiagramAutomorphism::new(vec![2, 1, 0], &b).is_ok());
        assert!(DiagramAutomorphism::rotation(&b, 1).is_err());
    }
}

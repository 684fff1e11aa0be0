use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{RootError, RootVector, WeightVector};

/// Order of `s_i s_j` in the Coxeter group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoxeterOrder {
    Finite(u32),
    Infinite,
}

impl CoxeterOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            CoxeterOrder::Finite(m) => Some(m),
            CoxeterOrder::Infinite => None,
        }
    }
}

impl fmt::Display for CoxeterOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterOrder::Finite(m) => write!(f, "{m}"),
            CoxeterOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Validated generalized Cartan matrix with its Coxeter exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    n: usize,
    a: Vec<i64>,
    #[serde(skip)]
    m: Vec<CoxeterOrder>,
}

impl CartanMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, RootError> {
        let n = rows.len();
        if n == 0 {
            return Err(RootError::NotSquare);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(RootError::NotSquare);
        }
        for i in 0..n {
            if rows[i][i] != 2 {
                return Err(RootError::Diagonal { i });
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rows[i][j] > 0 {
                    return Err(RootError::PositiveOffDiagonal { i, j });
                }
                if (rows[i][j] == 0) != (rows[j][i] == 0) {
                    return Err(RootError::ZeroPattern { i, j });
                }
            }
        }
        let a: Vec<i64> = rows.into_iter().flatten().collect();
        let mut m = vec![CoxeterOrder::Finite(1); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i * n + j] = match a[i * n + j] * a[j * n + i] {
                        0 => CoxeterOrder::Finite(2),
                        1 => CoxeterOrder::Finite(3),
                        2 => CoxeterOrder::Finite(4),
                        3 => CoxeterOrder::Finite(6),
                        _ => CoxeterOrder::Infinite,
                    };
                }
            }
        }
        Ok(CartanMatrix { n, a, m })
    }

    /// Untwisted affine matrix of type A(1)_l with indices mod l+1.
    pub fn affine_a(l: usize) -> Result<Self, RootError> {
        if l == 0 {
            return Err(RootError::Preset("A(1)_l needs l >= 1".into()));
        }
        let n = l + 1;
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
            row[(i + 1) % n] -= 1;
            row[(i + n - 1) % n] -= 1;
        }
        CartanMatrix::new(rows)
    }

    /// Finite type A_n on indices 0..n-1.
    pub fn finite_a(n: usize) -> Result<Self, RootError> {
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2;
            if i + 1 < n {
                row[i + 1] = -1;
            }
            if i > 0 {
                row[i - 1] = -1;
            }
        }
        CartanMatrix::new(rows)
    }

    /// Rank-2 matrix `[[2, a01], [a10, 2]]`.
    pub fn rank2(a01: i64, a10: i64) -> Result<Self, RootError> {
        CartanMatrix::new(vec![vec![2, a01], vec![a10, 2]])
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn coxeter(&self, i: usize, j: usize) -> CoxeterOrder {
        self.m[i * self.n + j]
    }

    pub fn check_index(&self, i: usize) -> Result<(), RootError> {
        if i < self.n {
            Ok(())
        } else {
            Err(RootError::Index { i, n: self.n })
        }
    }

    fn check_len(&self, len: usize) -> Result<(), RootError> {
        if len == self.n {
            Ok(())
        } else {
            Err(RootError::Dimension {
                expected: self.n,
                got: len,
            })
        }
    }

    /// `s_i(v) = v - <alpha_i^vee, v> alpha_i`.
    pub fn reflect_root(&self, i: usize, v: &RootVector) -> Result<RootVector, RootError> {
        self.check_index(i)?;
        self.check_len(v.len())?;
        let pairing: i64 = (0..self.n).map(|j| self.entry(i, j) * v[j]).sum();
        let mut out = v.clone();
        out[i] -= pairing;
        Ok(out)
    }

    /// `s_i(Lambda_i) = Lambda_i - sum_k a_{ki} Lambda_k`, others fixed.
    pub fn reflect_weight(&self, i: usize, w: &WeightVector) -> Result<WeightVector, RootError> {
        self.check_index(i)?;
        self.check_len(w.len())?;
        let li = w[i];
        let mut out = w.clone();
        for k in 0..self.n {
            out[k] -= li * self.entry(k, i);
        }
        Ok(out)
    }

    /// `alpha_j -> sum_i a_{ij} Lambda_i`.
    pub fn root_to_weight(&self, v: &RootVector) -> Result<WeightVector, RootError> {
        self.check_len(v.len())?;
        Ok(WeightVector::new(
            (0..self.n)
                .map(|i| (0..self.n).map(|j| self.entry(i, j) * v[j]).sum())
                .collect(),
        ))
    }

    /// Positive primitive kernel vector; requires corank one.
    pub fn null_root(&self) -> Result<RootVector, RootError> {
        let kernel = rational_kernel(&self.rows());
        if kernel.len() != 1 {
            return Err(RootError::NotAffine(format!(
                "kernel has dimension {}",
                kernel.len()
            )));
        }
        let k = &kernel[0];
        let lcm = k.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = k.iter().map(|q| (q * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if ints.iter().any(|x| x.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let coeffs: Vec<i64> = ints
            .iter()
            .map(|x| (x * &sign / &g).to_i64().unwrap_or(0))
            .collect();
        if coeffs.iter().any(|&c| c <= 0) {
            return Err(RootError::NotAffine("kernel vector is not positive".into()));
        }
        Ok(RootVector::new(coeffs))
    }

    pub fn is_affine(&self) -> bool {
        self.null_root().is_ok()
    }
}

/// Basis of the right kernel by exact Gaussian elimination.
fn rational_kernel(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..n {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); n];
            v[fc] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors() {
        assert!(matches!(
            CartanMatrix::new(vec![vec![2, -1], vec![0, 2]]),
            Err(RootError::ZeroPattern { i: 0, j: 1 })
        ));
        assert!(matches!(
            CartanMatrix::new(vec![vec![2, 1], vec![1, 2]]),
            Err(RootError::PositiveOffDiagonal { i: 0, j: 1 })
        ));
        assert!(matches!(
            CartanMatrix::new(vec![vec![1]]),
            Err(RootError::Diagonal { i: 0 })
        ));
        assert!(matches!(
            CartanMatrix::new(vec![vec![2, 0]]),
            Err(RootError::NotSquare)
        ));
        let single = CartanMatrix::new(vec![vec![2]]).unwrap();
        assert_eq!(single.coxeter(0, 0), CoxeterOrder::Finite(1));
    }

    #[test]
    fn coxeter_table() {
        let a = CartanMatrix::affine_a(2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(a.coxeter(i, j), CoxeterOrder::Finite(3));
                }
            }
        }
        assert_eq!(CartanMatrix::rank2(-2, -1).unwrap().coxeter(0, 1), CoxeterOrder::Finite(4));
        assert_eq!(CartanMatrix::rank2(-3, -1).unwrap().coxeter(1, 0), CoxeterOrder::Finite(6));
        assert_eq!(CartanMatrix::rank2(0, 0).unwrap().coxeter(1, 0), CoxeterOrder::Finite(2));
        assert_eq!(CartanMatrix::affine_a(1).unwrap().coxeter(0, 1), CoxeterOrder::Infinite);
    }

    #[test]
    fn affine_a1_is_two_by_two() {
        assert_eq!(CartanMatrix::affine_a(1).unwrap().rows(), vec![vec![2, -2], vec![-2, 2]]);
    }

    #[test]
    fn null_roots() {
        for l in 1..6 {
            let a = CartanMatrix::affine_a(l).unwrap();
            assert_eq!(a.null_root().unwrap().coeffs(), vec![1; l + 1].as_slice());
        }
        assert!(CartanMatrix::finite_a(2).unwrap().null_root().is_err());
        // C(1)_2 has marks (1, 2, 1) for this orientation.
        let c = CartanMatrix::new(vec![vec![2, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]]).unwrap();
        assert_eq!(c.null_root().unwrap().coeffs(), &[1, 2, 1]);
        // Decomposable: A(1)_1 plus A_1.
        let d = CartanMatrix::new(vec![vec![2, -2, 0], vec![-2, 2, 0], vec![0, 0, 2]]).unwrap();
        assert!(d.null_root().is_err());
    }
}

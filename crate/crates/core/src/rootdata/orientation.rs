use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::{CartanMatrix, DiagramAutomorphism, RootError};
use crate::symfield::{Rf, VarRegistry};

/// Which set of conditions an orientation matrix must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrientationMode {
    /// Conditions (0)-(3) for the f-variable representation.
    ThmA,
    /// Conditions (0)-(2) for the tau-function extension.
    ThmB,
    /// The tau conditions plus `u_ij a_ji + a_ij u_ji = 0`.
    Conjecture,
    /// No validation; used to exercise failure paths.
    Unchecked,
}

impl FromStr for OrientationMode {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        match s.to_ascii_lowercase().as_str() {
            "thma" | "a" => Ok(OrientationMode::ThmA),
            "thmb" | "b" => Ok(OrientationMode::ThmB),
            "conjecture" | "conj" => Ok(OrientationMode::Conjecture),
            "unchecked" | "none" => Ok(OrientationMode::Unchecked),
            _ => Err(RootError::Preset(format!("unknown orientation mode '{s}'"))),
        }
    }
}

/// Identifier of a violated condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `u_jj = 0`, or `u_ij = 0` when `a_ij = 0`.
    Zero,
    /// `u_ij = -u_ji` for a simple bond.
    Skew,
    /// Admissible ratio for `(a_ij, a_ji) = (-2, -1)`.
    Double,
    /// Admissible ratio for `(a_ij, a_ji) = (-3, -1)`.
    Triple,
    /// `u_ij a_ji + a_ij u_ji = 0`.
    Balanced,
    /// `u_{w(i) w(j)} = u_ij`.
    DiagramInvariance,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::Zero => "(0)",
            Clause::Skew => "(1)",
            Clause::Double => "(2)",
            Clause::Triple => "(3)",
            Clause::Balanced => "(3')",
            Clause::DiagramInvariance => "(diagram)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub clause: Clause,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {} at ({}, {})", self.clause, self.i, self.j)
    }
}

/// Matrix `U` of exact entries; an entry may involve symbolic atoms.
#[derive(Clone, Debug)]
pub struct OrientationMatrix {
    n: usize,
    u: Vec<Rf>,
    mode: OrientationMode,
}

fn ratio(p: i64, q: i64) -> Rf {
    Rf::rational(&BigRational::new(BigInt::from(p), BigInt::from(q)))
}

/// True if `x` equals `-r * y` for one of the ratios `r`.
fn is_multiple(x: &Rf, y: &Rf, ratios: &[(i64, i64)]) -> bool {
    ratios.iter().any(|&(p, q)| x.rf_eq(&(&-y * &ratio(p, q))))
}

impl OrientationMatrix {
    /// Validates `entries` against `a` under `mode`.
    pub fn new(
        entries: Vec<Vec<Rf>>,
        a: &CartanMatrix,
        mode: OrientationMode,
    ) -> Result<Self, RootError> {
        let n = a.size();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(RootError::Dimension {
                expected: n,
                got: entries.len(),
            });
        }
        let m = OrientationMatrix {
            n,
            u: entries.into_iter().flatten().collect(),
            mode,
        };
        let v = m.violations(a);
        if v.is_empty() {
            Ok(m)
        } else {
            Err(RootError::Orientation(v))
        }
    }

    /// Integer entries.
    pub fn from_ints(
        rows: &[Vec<i64>],
        a: &CartanMatrix,
        mode: OrientationMode,
    ) -> Result<Self, RootError> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rf::constant(x)).collect())
            .collect();
        OrientationMatrix::new(entries, a, mode)
    }

    /// The cyclic pattern for A(1)_l: `u_{i,i+1} = 1`, `u_{i,i-1} = -1`.
    pub fn cyclic(a: &CartanMatrix, mode: OrientationMode) -> Result<Self, RootError> {
        let n = a.size();
        if n < 3 || *a != CartanMatrix::affine_a(n - 1)? {
            return Err(RootError::Preset(
                "cyclic orientation needs A(1)_l with l >= 2".into(),
            ));
        }
        let mut rows = vec![vec![0i64; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[(i + 1) % n] = 1;
            row[(i + n - 1) % n] = -1;
        }
        OrientationMatrix::from_ints(&rows, a, mode)
    }

    /// One atom `u{i}{j}` per bonded pair `i < j`, scaled so that the
    /// balanced condition holds: `u_ij = (|a_ij|/g) t`, `u_ji = -(|a_ji|/g) t`
    /// with `g = gcd(a_ij, a_ji)`.
    pub fn symbolic(
        a: &CartanMatrix,
        reg: &VarRegistry,
        mode: OrientationMode,
    ) -> Result<Self, RootError> {
        let n = a.size();
        let mut rows = vec![vec![Rf::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let aij = a.entry(i, j);
                let aji = a.entry(j, i);
                if aij == 0 {
                    continue;
                }
                let name = if n <= 10 {
                    format!("u{i}{j}")
                } else {
                    format!("u{i}_{j}")
                };
                let t = Rf::var(reg.atom(&name).map_err(|e| RootError::Preset(e.to_string()))?);
                let g = aij.gcd(&aji);
                rows[i][j] = &t * &Rf::constant(aij.abs() / g);
                rows[j][i] = &t * &Rf::constant(-aji.abs() / g);
            }
        }
        OrientationMatrix::new(rows, a, mode)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> OrientationMode {
        self.mode
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rf {
        &self.u[i * self.n + j]
    }

    /// Copy with a different mode, re-validated.
    pub fn with_mode(&self, a: &CartanMatrix, mode: OrientationMode) -> Result<Self, RootError> {
        let m = OrientationMatrix {
            n: self.n,
            u: self.u.clone(),
            mode,
        };
        let v = m.violations(a);
        if v.is_empty() {
            Ok(m)
        } else {
            Err(RootError::Orientation(v))
        }
    }

    /// Every violated clause under the current mode.
    pub fn violations(&self, a: &CartanMatrix) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.mode == OrientationMode::Unchecked {
            return out;
        }
        let mut push = |i, j, clause| out.push(Violation { i, j, clause });
        for i in 0..self.n {
            for j in 0..self.n {
                let uij = self.entry(i, j);
                let uji = self.entry(j, i);
                if i == j {
                    if !uij.is_zero() {
                        push(i, j, Clause::Zero);
                    }
                    continue;
                }
                let (aij, aji) = (a.entry(i, j), a.entry(j, i));
                if aij == 0 {
                    if !uij.is_zero() {
                        push(i, j, Clause::Zero);
                    }
                    continue;
                }
                let thm_a = self.mode == OrientationMode::ThmA;
                match (aij, aji) {
                    (-1, -1) => {
                        if !is_multiple(uij, uji, &[(1, 1)]) {
                            push(i, j, Clause::Skew);
                        }
                    }
                    (-2, -1) => {
                        let opts: &[(i64, i64)] = if thm_a { &[(1, 1), (2, 1)] } else { &[(2, 1)] };
                        if !is_multiple(uij, uji, opts) {
                            push(i, j, Clause::Double);
                        }
                    }
                    (-3, -1) => {
                        let opts: &[(i64, i64)] = if thm_a {
                            &[(1, 1), (3, 2), (2, 1), (3, 1)]
                        } else {
                            &[(3, 1)]
                        };
                        if !is_multiple(uij, uji, opts) {
                            push(i, j, Clause::Triple);
                        }
                    }
                    _ => {}
                }
                if self.mode == OrientationMode::Conjecture {
                    let lhs = &(uij * &Rf::constant(aji)) + &(&Rf::constant(aij) * uji);
                    if !lhs.is_zero() {
                        push(i, j, Clause::Balanced);
                    }
                }
            }
        }
        out
    }

    /// Pairs `(i, j)` where `u_{w(i) w(j)} != u_ij`.
    pub fn diagram_violations(&self, w: &DiagramAutomorphism) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.entry(w.apply(i), w.apply(j)).rf_eq(self.entry(i, j)) {
                    out.push(Violation {
                        i,
                        j,
                        clause: Clause::DiagramInvariance,
                    });
                }
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<Rf>> {
        self.u.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_is_valid_in_every_mode() {
        let a = CartanMatrix::affine_a(2).unwrap();
        for mode in [
            OrientationMode::ThmA,
            OrientationMode::ThmB,
            OrientationMode::Conjecture,
        ] {
            OrientationMatrix::cyclic(&a, mode).unwrap();
        }
        assert!(OrientationMatrix::cyclic(&CartanMatrix::finite_a(3).unwrap(), OrientationMode::ThmA).is_err());
    }

    #[test]
    fn zero_matrix_on_a1xa1() {
        let a = CartanMatrix::rank2(0, 0).unwrap();
        OrientationMatrix::from_ints(&[vec![0, 0], vec![0, 0]], &a, OrientationMode::Conjecture).unwrap();
    }

    #[test]
    fn skew_violation_reported() {
        let a = CartanMatrix::finite_a(2).unwrap();
        let err = OrientationMatrix::from_ints(&[vec![0, 1], vec![1, 0]], &a, OrientationMode::ThmA)
            .unwrap_err();
        let RootError::Orientation(v) = err else {
            panic!("expected orientation error")
        };
        assert!(v.contains(&Violation { i: 0, j: 1, clause: Clause::Skew }));
        OrientationMatrix::from_ints(&[vec![0, 1], vec![1, 0]], &a, OrientationMode::Unchecked).unwrap();
    }

    #[test]
    fn double_bond_options() {
        let a = CartanMatrix::rank2(-2, -1).unwrap();
        // u01 = -u10 is allowed for the f-representation only.
        let m = [vec![0, 1], vec![-1, 0]];
        OrientationMatrix::from_ints(&m, &a, OrientationMode::ThmA).unwrap();
        assert!(OrientationMatrix::from_ints(&m, &a, OrientationMode::ThmB).is_err());
        let m = [vec![0, 2], vec![-1, 0]];
        OrientationMatrix::from_ints(&m, &a, OrientationMode::ThmB).unwrap();
        OrientationMatrix::from_ints(&m, &a, OrientationMode::Conjecture).unwrap();
    }

    #[test]
    fn triple_bond_options() {
        let a = CartanMatrix::rank2(-3, -1).unwrap();
        for (p, q) in [(1, 1), (3, 2), (2, 1), (3, 1)] {
            let e = vec![
                vec![Rf::zero(), ratio(p, q)],
                vec![Rf::constant(-1), Rf::zero()],
            ];
            OrientationMatrix::new(e, &a, OrientationMode::ThmA).unwrap();
        }
        let e = vec![vec![Rf::zero(), ratio(5, 2)], vec![Rf::constant(-1), Rf::zero()]];
        assert!(OrientationMatrix::new(e, &a, OrientationMode::ThmA).is_err());
    }

    #[test]
    fn symbolic_preset_is_balanced() {
        let reg = VarRegistry::with_rank(2);
        let a = CartanMatrix::rank2(-1, -3).unwrap();
        let u = OrientationMatrix::symbolic(&a, &reg, OrientationMode::Conjecture).unwrap();
        let t = Rf::var(reg.lookup("u01").unwrap());
        assert!(u.entry(0, 1).rf_eq(&t));
        assert!(u.entry(1, 0).rf_eq(&(&t * &Rf::constant(-3))));
    }

    #[test]
    fn rotation_invariance_of_cyclic() {
        let a = CartanMatrix::affine_a(3).unwrap();
        let u = OrientationMatrix::cyclic(&a, OrientationMode::ThmA).unwrap();
        let pi = DiagramAutomorphism::rotation(&a, 1).unwrap();
        assert!(u.diagram_violations(&pi).is_empty());
        let flip = DiagramAutomorphism::new(vec![0, 3, 2, 1], &a).unwrap();
        assert!(!u.diagram_violations(&flip).is_empty());
    }
}

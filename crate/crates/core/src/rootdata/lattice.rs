use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

macro_rules! lattice_vector {
    ($name:ident, $sym:literal) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<i64>);

        impl $name {
            pub fn new(coeffs: Vec<i64>) -> Self {
                $name(coeffs)
            }

            pub fn zero(n: usize) -> Self {
                $name(vec![0; n])
            }

            /// The `j`-th basis vector.
            pub fn basis(n: usize, j: usize) -> Self {
                let mut v = vec![0; n];
                v[j] = 1;
                $name(v)
            }

            pub fn coeffs(&self) -> &[i64] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0)
            }

            /// Relabels basis vectors: coefficient `j` moves to `perm[j]`.
            pub fn permuted(&self, perm: &[usize]) -> Self {
                let mut out = vec![0; self.0.len()];
                for (j, &c) in self.0.iter().enumerate() {
                    out[perm[j]] = c;
                }
                $name(out)
            }
        }

        impl Index<usize> for $name {
            type Output = i64;
            fn index(&self, i: usize) -> &i64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $name {
            fn index_mut(&mut self, i: usize) -> &mut i64 {
                &mut self.0[i]
            }
        }

        impl Add<&$name> for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub<&$name> for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }

        impl Mul<i64> for &$name {
            type Output = $name;
            fn mul(self, k: i64) -> $name {
                $name(self.0.iter().map(|a| a * k).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut first = true;
                for (j, &c) in self.0.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let sign = if c < 0 { "-" } else if first { "" } else { "+" };
                    let mag = c.abs();
                    if mag == 1 {
                        write!(f, "{sign}{}{j}", $sym)?;
                    } else {
                        write!(f, "{sign}{mag}{}{j}", $sym)?;
                    }
                    first = false;
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    };
}

lattice_vector!(RootVector, "a");
lattice_vector!(WeightVector, "L");

impl WeightVector {
    /// `<alpha_i^vee, lambda>`.
    pub fn pairing(&self, i: usize) -> i64 {
        self.0[i]
    }

    /// Parses `L1`, `2L0-L2`, `0`, or a comma list `1,0,-1`.
    pub fn parse(s: &str, n: usize) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.contains(',') {
            let v: Option<Vec<i64>> = s.split(',').map(|t| t.parse().ok()).collect();
            return v.filter(|v| v.len() == n).map(WeightVector);
        }
        let mut out = vec![0i64; n];
        if s == "0" {
            return Some(WeightVector(out));
        }
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, r) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let lpos = r.find(['L', 'l'])?;
            let coef: i64 = if lpos == 0 { 1 } else { r[..lpos].parse().ok()? };
            let after = &r[lpos + 1..];
            let dlen = after.bytes().take_while(|b| b.is_ascii_digit()).count();
            let j: usize = after[..dlen].parse().ok()?;
            if j >= n {
                return None;
            }
            out[j] += sign * coef;
            rest = &after[dlen..];
        }
        Some(WeightVector(out))
    }
}

use std::fmt;

use crate::rootdata::{CartanMatrix, DiagramAutomorphism, RootError, RootVector, WeightVector};

use super::BirepError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Simple reflection `s_i`.
    Reflection(usize),
    /// Diagram automorphism; rotations print as powers of `pi`.
    Diagram(DiagramAutomorphism),
}

/// Product of letters, read left to right as group multiplication.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    /// Word of reflections only.
    pub fn from_indices(indices: &[usize]) -> Self {
        Word {
            letters: indices.iter().map(|&i| Letter::Reflection(i)).collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::Reflection(i) => Letter::Reflection(*i),
                    Letter::Diagram(d) => Letter::Diagram(d.inverse()),
                })
                .collect(),
        }
    }

    /// The word repeated `k` times.
    pub fn pow(&self, k: usize) -> Word {
        Word {
            letters: (0..k).flat_map(|_| self.letters.iter().cloned()).collect(),
        }
    }

    /// True if no letter is a diagram automorphism.
    pub fn is_reflection_word(&self) -> bool {
        self.letters.iter().all(|l| matches!(l, Letter::Reflection(_)))
    }

    pub fn check(&self, a: &CartanMatrix) -> Result<(), BirepError> {
        for l in &self.letters {
            match l {
                Letter::Reflection(i) => a.check_index(*i)?,
                Letter::Diagram(d) => {
                    if d.size() != a.size() {
                        return Err(RootError::Dimension {
                            expected: a.size(),
                            got: d.size(),
                        }
                        .into());
                    }
                }
            }
        }
        Ok(())
    }

    /// `w . lambda`, letters applied right to left.
    pub fn act_on_weight(&self, a: &CartanMatrix, w: &WeightVector) -> Result<WeightVector, BirepError> {
        let mut out = w.clone();
        for l in self.letters.iter().rev() {
            out = match l {
                Letter::Reflection(i) => a.reflect_weight(*i, &out)?,
                Letter::Diagram(d) => out.permuted(d.perm()),
            };
        }
        Ok(out)
    }

    pub fn act_on_root(&self, a: &CartanMatrix, v: &RootVector) -> Result<RootVector, BirepError> {
        let mut out = v.clone();
        for l in self.letters.iter().rev() {
            out = match l {
                Letter::Reflection(i) => a.reflect_root(*i, &out)?,
                Letter::Diagram(d) => out.permuted(d.perm()),
            };
        }
        Ok(out)
    }

    /// Parses `s0 s1 pi s2`, `0 1 p 2`, `s0s1`, `pi^-1`, `pi^2`, or
    /// `w[1,2,0]` for an explicit permutation. `pi` is the rotation
    /// `i -> i+1` and must be a diagram automorphism of `a`. The empty
    /// string, `e` and `id` denote the identity.
    pub fn parse(src: &str, a: &CartanMatrix) -> Result<Word, BirepError> {
        let b = src.as_bytes();
        let mut pos = 0;
        let mut letters = Vec::new();
        let err = |pos: usize, msg: &str| BirepError::Parse {
            pos,
            msg: msg.to_string(),
        };
        let digits = |pos: &mut usize| -> Option<usize> {
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            std::str::from_utf8(&b[start..*pos]).ok()?.parse().ok()
        };
        let trimmed = src.trim();
        if trimmed.is_empty() || trimmed == "e" || trimmed == "id" {
            return Ok(Word::empty());
        }
        while pos < b.len() {
            let c = b[pos];
            if c.is_ascii_whitespace() || c == b',' || c == b'.' || c == b'*' {
                pos += 1;
                continue;
            }
            let start = pos;
            if c == b's' {
                pos += 1;
                let i = digits(&mut pos).ok_or_else(|| err(pos, "expected index after 's'"))?;
                a.check_index(i).map_err(|_| err(start, "reflection index out of range"))?;
                letters.push(Letter::Reflection(i));
            } else if c.is_ascii_digit() {
                let i = digits(&mut pos).unwrap();
                a.check_index(i).map_err(|_| err(start, "reflection index out of range"))?;
                letters.push(Letter::Reflection(i));
            } else if c == b'p' {
                pos += 1;
                if b.get(pos) == Some(&b'i') {
                    pos += 1;
                }
                let mut k: i64 = 1;
                if b.get(pos) == Some(&b'^') {
                    pos += 1;
                    let neg = b.get(pos) == Some(&b'-');
                    if neg {
                        pos += 1;
                    }
                    let e = digits(&mut pos).ok_or_else(|| err(pos, "expected exponent"))?;
                    k = if neg { -(e as i64) } else { e as i64 };
                }
                let rot = DiagramAutomorphism::rotation(a, k)
                    .map_err(|_| err(start, "rotation is not a diagram automorphism"))?;
                letters.push(Letter::Diagram(rot));
            } else if c == b'w' && b.get(pos + 1) == Some(&b'[') {
                let close = src[pos..]
                    .find(']')
                    .map(|o| pos + o)
                    .ok_or_else(|| err(pos, "unterminated permutation"))?;
                let perm: Result<Vec<usize>, _> = src[pos + 2..close]
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect();
                let perm = perm.map_err(|_| err(pos, "bad permutation entry"))?;
                let d = DiagramAutomorphism::new(perm, a)
                    .map_err(|e| err(start, &e.to_string()))?;
                letters.push(Letter::Diagram(d));
                pos = close + 1;
            } else {
                return Err(err(pos, "unexpected character"));
            }
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Reflection(i) => write!(f, "s{i}"),
            Letter::Diagram(d) => {
                let n = d.size();
                let shift = (d.apply(0) + n) % n;
                let is_rotation = (0..n).all(|i| d.apply(i) == (i + shift) % n);
                if is_rotation && shift == 1 {
                    write!(f, "pi")
                } else if is_rotation {
                    write!(f, "pi^{shift}")
                } else {
                    let p: Vec<String> = d.perm().iter().map(|x| x.to_string()).collect();
                    write!(f, "w[{}]", p.join(","))
                }
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let a = CartanMatrix::affine_a(2).unwrap();
        let w1 = Word::parse("s0 s1 pi s2", &a).unwrap();
        let w2 = Word::parse("0 1 p 2", &a).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(w1.to_string(), "s0 s1 pi s2");
        assert_eq!(Word::parse("s0s1", &a).unwrap(), Word::from_indices(&[0, 1]));
        let inv = Word::parse("pi^-1", &a).unwrap();
        assert_eq!(inv.to_string(), "pi^2");
        assert_eq!(Word::parse("pi^2", &a).unwrap(), inv);
        assert!(Word::parse("", &a).unwrap().is_empty());
        assert_eq!(Word::parse("w[1,2,0]", &a).unwrap().to_string(), "pi");
        assert!(Word::parse("s3", &a).is_err());
        assert!(Word::parse("x", &a).is_err());
        let b = CartanMatrix::finite_a(3).unwrap();
        assert!(Word::parse("pi", &b).is_err());
        assert_eq!(Word::parse("w[2,1,0]", &b).unwrap().to_string(), "w[2,1,0]");
    }

    #[test]
    fn weight_action_order() {
        let a = CartanMatrix::affine_a(2).unwrap();
        let w = Word::from_indices(&[0, 1]);
        let l1 = WeightVector::basis(3, 1);
        let step = a.reflect_weight(1, &l1).unwrap();
        let expect = a.reflect_weight(0, &step).unwrap();
        assert_eq!(w.act_on_weight(&a, &l1).unwrap(), expect);
        let pi = Word::parse("pi", &a).unwrap();
        assert_eq!(pi.act_on_weight(&a, &l1).unwrap(), WeightVector::basis(3, 2));
        let ww = w.concat(&pi);
        assert_eq!(ww.inverse().concat(&ww).act_on_weight(&a, &l1).unwrap(), l1);
    }
}

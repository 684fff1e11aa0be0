use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FieldError, Monomial, Scalar, Var};

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients. Terms are kept strictly descending in graded lex order with
/// no zero coefficients, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Poly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    #[inline]
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Maximum exponent of every variable, indexed by id.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for (m, _) in &self.terms {
            let e = m.exponents();
            if e.len() > out.len() {
                out.resize(e.len(), 0);
            }
            for (o, x) in out.iter_mut().zip(e) {
                *o = (*o).max(*x);
            }
        }
        out
    }

    /// Variables that occur, in id order.
    pub fn vars(&self) -> Vec<Var> {
        self.max_exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| Var(i as u32))
            .collect()
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // Multiplying by a monomial preserves the term order.
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_int_exact(&self, d: &BigInt) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!((c % d).is_zero());
                    (m.clone(), c / d)
                })
                .collect(),
        }
    }

    /// Divides by the integer content and makes the leading coefficient
    /// positive.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.div_int_exact(&c)
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(tm, c)| (tm.div(m).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    /// Exact division over the integers; `None` when `d` does not divide
    /// `self` in Z[x].
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((m.div(dm)?, q));
            }
            return Some(Poly { terms: out });
        }
        let (lm, lc) = &d.terms[0];
        let tail = &d.terms[1..];
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lm)?;
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (tm, tc) in tail {
                let key = tm.mul(&qm);
                let delta = &qc * tc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(Poly { terms: quotient })
    }

    /// Coefficients with respect to `v`, indexed by degree; the coefficients
    /// do not contain `v`.
    pub fn to_univariate(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        // Removing one variable keeps the relative order within a bucket
        // only for lex; re-sort to be safe.
        buckets
            .into_iter()
            .map(|mut b| {
                b.sort_by(|x, y| y.0.cmp(&x.0));
                Poly { terms: b }
            })
            .collect()
    }

    pub fn from_univariate(v: Var, coeffs: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &c.mul_term(&Monomial::var(v, k as u32), &BigInt::one());
            }
        }
        acc
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exp(v);
                if e == 0 {
                    return None;
                }
                let dm = m.div(&Monomial::var(v, 1)).expect("exponent is positive");
                Some((dm, c * BigInt::from(e)))
            })
            .collect::<Vec<_>>();
        // Lowering one exponent can reorder terms under grlex.
        Poly::from_terms(terms)
    }

    /// Evaluates at a point given by `value`; every occurring variable must
    /// be assigned.
    pub fn eval<T: Scalar>(
        &self,
        value: &dyn Fn(Var) -> Option<T>,
        name: &dyn Fn(Var) -> String,
    ) -> Result<T, FieldError> {
        let maxe = self.max_exponents();
        let mut powers: Vec<Vec<T>> = Vec::with_capacity(maxe.len());
        for (i, &e) in maxe.iter().enumerate() {
            if e == 0 {
                powers.push(Vec::new());
                continue;
            }
            let v = Var(i as u32);
            let x = value(v).ok_or_else(|| FieldError::Unassigned(name(v)))?;
            let mut p = Vec::with_capacity(e as usize + 1);
            p.push(T::one());
            for k in 1..=e as usize {
                let next = p[k - 1].clone() * x.clone();
                p.push(next);
            }
            powers.push(p);
        }
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from_bigint(c);
            for (v, e) in m.iter() {
                t = t * powers[v.index()][e as usize].clone();
            }
            total = total + t;
        }
        Ok(total)
    }

    fn merge(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)], negate_b: bool) -> Poly {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_b {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate_b { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    fn mul_impl(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let (small, large) = if a.nterms() <= b.nterms() { (a, b) } else { (b, a) };
        if small.nterms() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_term(m, c);
        }
        // Each row is already sorted; sum them with a balanced merge tree.
        let mut rows: Vec<Poly> = small
            .terms
            .iter()
            .map(|(m, c)| large.mul_term(m, c))
            .collect();
        while rows.len() > 1 {
            let mut next = Vec::with_capacity(rows.len().div_ceil(2));
            let mut it = rows.into_iter();
            while let Some(x) = it.next() {
                match it.next() {
                    Some(y) => next.push(Poly::merge(&x.terms, &y.terms, false)),
                    None => next.push(x),
                }
            }
            rows = next;
        }
        rows.pop().unwrap_or_default()
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::merge(&self.terms, &rhs.terms, false)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::merge(&self.terms, &rhs.terms, true)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul_impl(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    #[test]
    fn arithmetic_basics() {
        let p = &x(0) + &x(1);
        let q = &x(0) - &x(1);
        let prod = &p * &q;
        let expect = &x(0).pow(2) - &x(1).pow(2);
        assert_eq!(prod, expect);
        assert!((&p - &p).is_zero());
        assert_eq!(p.pow(0), Poly::one());
        assert_eq!(prod.total_degree(), 2);
    }

    #[test]
    fn exact_division() {
        let p = &x(0) + &x(1);
        let q = &(&x(0) * &x(2)) - &Poly::constant(3);
        let prod = &p * &q;
        assert_eq!(prod.div_exact(&p).unwrap(), q);
        assert_eq!(prod.div_exact(&q).unwrap(), p);
        assert!(prod.div_exact(&(&x(0) + &Poly::one())).is_none());
        assert!(x(0).div_exact(&Poly::constant(2)).is_none());
        assert_eq!(
            Poly::constant(6).scale(&BigInt::from(1)).div_exact(&Poly::constant(3)),
            Some(Poly::constant(2))
        );
    }

    #[test]
    fn content_and_univariate() {
        let p = &x(0).scale(&BigInt::from(-4)) + &(&x(1) * &x(0)).scale(&BigInt::from(6));
        assert_eq!(p.content(), BigInt::from(2));
        let pp = p.primitive();
        assert!(pp.leading_coeff().is_positive());
        assert_eq!(p.monomial_content(), Monomial::var(Var(0), 1));
        let uni = p.to_univariate(Var(1));
        assert_eq!(uni.len(), 2);
        assert_eq!(Poly::from_univariate(Var(1), &uni), p);
    }
}

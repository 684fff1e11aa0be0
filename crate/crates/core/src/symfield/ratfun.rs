use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{gcd, gcd_threshold, FieldError, Monomial, Poly, Scalar, Var};

/// Element of Q(x_0, x_1, ...) stored as `num / den`.
///
/// Normal form: zero is `0/1`; common monomial factors and the joint
/// integer content are removed; the leading coefficient of `den` is
/// positive. Common polynomial factors are removed only when the combined
/// term count exceeds [`gcd_threshold`](super::gcd_threshold) or on
/// [`Rf::reduced`]. Equality is decided by cross-multiplication and never
/// depends on that reduction.
#[derive(Clone, Debug)]
pub struct Rf {
    num: Poly,
    den: Poly,
}

impl Rf {
    pub fn zero() -> Self {
        Rf {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Rf {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Rf::from_poly(Poly::constant(c))
    }

    pub fn rational(q: &BigRational) -> Self {
        Rf::normalize(
            Poly::constant(q.numer().clone()),
            Poly::constant(q.denom().clone()),
            false,
        )
    }

    pub fn var(v: Var) -> Self {
        Rf::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        Rf {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Rf::normalize(num, den, false))
    }

    fn normalize(num: Poly, den: Poly, force_gcd: bool) -> Rf {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Rf::zero();
        }
        let mut num = num;
        let mut den = den;
        let m = num.monomial_content().gcd(&den.monomial_content());
        if !m.is_one() {
            num = num.div_monomial(&m);
            den = den.div_monomial(&m);
        }
        if !den.is_constant()
            && (force_gcd || num.nterms() + den.nterms() > gcd_threshold())
        {
            let g = gcd(&num, &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        } else if !den.is_constant() && !num.is_constant() && num == den {
            return Rf::one();
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_int_exact(&c);
            den = den.div_int_exact(&c);
        }
        Rf { num, den }
    }

    /// Fully reduced copy: numerator and denominator coprime.
    pub fn reduced(&self) -> Rf {
        Rf::normalize(self.num.clone(), self.den.clone(), true)
    }

    /// Re-applies the normal form; idempotent.
    pub fn renormalized(&self) -> Rf {
        Rf::normalize(self.num.clone(), self.den.clone(), false)
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the stored denominator is constant. Call on a
    /// [`reduced`](Rf::reduced) value for a definitive answer.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Polynomial with integer coefficients in the current form.
    pub fn as_integer_poly(&self) -> Option<&Poly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match (self.num.constant_value(), self.den.constant_value()) {
            (Some(n), Some(d)) => Some(BigRational::new(n, d)),
            _ => None,
        }
    }

    pub fn nterms(&self) -> usize {
        self.num.nterms() + self.den.nterms()
    }

    /// Variables occurring in numerator or denominator, ascending.
    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    pub fn inv(&self) -> Result<Rf, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rf::normalize(self.den.clone(), self.num.clone(), false))
    }

    pub fn try_div(&self, other: &Rf) -> Result<Rf, FieldError> {
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.mul_parts(&other.den, &other.num))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Rf, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(Rf {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// `prod_r base_r^{e_r}`, fully reduced. Cancellation runs pairwise
    /// between the numerator-side and denominator-side polynomials, so
    /// only gcds of individual factors are ever computed.
    pub fn product_of_powers(factors: &[(&Rf, i64)]) -> Result<Rf, FieldError> {
        let mut top: Vec<(Poly, u32)> = Vec::new();
        let mut bot: Vec<(Poly, u32)> = Vec::new();
        let mut cn = BigInt::one();
        let mut cd = BigInt::one();
        for (base, e) in factors {
            if *e == 0 {
                continue;
            }
            if base.is_zero() {
                if *e < 0 {
                    return Err(FieldError::DivisionByZero);
                }
                return Ok(Rf::zero());
            }
            let k = e.unsigned_abs() as u32;
            let (up, down) = if *e > 0 {
                (&base.num, &base.den)
            } else {
                (&base.den, &base.num)
            };
            for (p, side, c) in [(up, &mut top, &mut cn), (down, &mut bot, &mut cd)] {
                if p.is_constant() {
                    *c *= p.constant_value().expect("constant").pow(k);
                    continue;
                }
                let q = p.primitive();
                *c *= (p.terms()[0].1.clone() / q.terms()[0].1.clone()).pow(k);
                side.push((q, k));
            }
        }
        let mut i = 0;
        while i < bot.len() {
            let mut j = 0;
            while j < top.len() {
                let g = gcd(&top[j].0, &bot[i].0);
                if g.is_constant() {
                    j += 1;
                    continue;
                }
                let (t, et) = top[j].clone();
                let (b, eb) = bot[i].clone();
                let m = et.min(eb);
                top[j] = (t.div_exact(&g).expect("gcd divides"), et);
                bot[i] = (b.div_exact(&g).expect("gcd divides"), eb);
                if et > m {
                    top.push((g.clone(), et - m));
                }
                if eb > m {
                    bot.push((g, eb - m));
                }
            }
            i += 1;
        }
        let mut num = Poly::constant(cn);
        for (p, e) in &top {
            if !p.is_constant() {
                num = &num * &p.pow(*e);
            }
        }
        let mut den = Poly::constant(cd);
        for (p, e) in &bot {
            if !p.is_constant() {
                den = &den * &p.pow(*e);
            }
        }
        Ok(Rf::normalize(num, den, false))
    }

    pub fn scale(&self, q: &BigRational) -> Rf {
        Rf::normalize(
            self.num.scale(q.numer()),
            self.den.scale(q.denom()),
            false,
        )
    }

    fn mul_parts(&self, on: &Poly, od: &Poly) -> Rf {
        if self.is_zero() || on.is_zero() {
            return Rf::zero();
        }
        // Cross-cancel n1 against d2 and n2 against d1; reduced inputs give
        // a reduced product.
        let (n1, d2) = cancel(&self.num, od);
        let (n2, d1) = cancel(on, &self.den);
        Rf::normalize(&n1 * &n2, &d1 * &d2, false)
    }

    fn add_impl(&self, other: &Rf, negate: bool) -> Rf {
        let on = if negate { -&other.num } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Rf {
                num: on,
                den: other.den.clone(),
            };
        }
        if self.den == other.den {
            return Rf::normalize(&self.num + &on, self.den.clone(), false);
        }
        if other.den.is_constant() && self.den.is_constant() {
            let a = self.den.constant_value().unwrap();
            let b = other.den.constant_value().unwrap();
            let l = a.lcm(&b);
            let num = &self.num.scale(&(&l / &a)) + &on.scale(&(&l / &b));
            return Rf::normalize(num, Poly::constant(l), false);
        }
        // Only the common part g of the denominators can cancel against
        // the new numerator.
        let g = common_factor(&self.den, &other.den);
        if g.is_constant() {
            let num = &(&self.num * &other.den) + &(&on * &self.den);
            return Rf::normalize(num, &self.den * &other.den, false);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides denominator");
        let d2 = other.den.div_exact(&g).expect("gcd divides denominator");
        let num = &(&self.num * &d2) + &(&on * &d1);
        if num.is_zero() {
            return Rf::zero();
        }
        let (num, g) = cancel(&num, &g);
        Rf::normalize(num, &(&d1 * &d2) * &g, false)
    }

    /// Field equality by cross-multiplication.
    pub fn rf_eq(&self, other: &Rf) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        &self.num * &other.den == &other.num * &self.den
    }

    /// Partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Rf {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Rf::normalize(dn, self.den.clone(), false);
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Rf::normalize(num, self.den.pow(2), false)
    }

    /// Simultaneous substitution; variables without an image are kept.
    pub fn substitute(&self, s: &Substitution) -> Result<Rf, FieldError> {
        let (nn, nexp) = subst_poly(&self.num, s);
        let (dn, dexp) = subst_poly(&self.den, s);
        if dn.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        if nn.is_zero() {
            return Ok(Rf::zero());
        }
        // num(sub) = nn / prod q^nexp, den(sub) = dn / prod q^dexp.
        let mut num = nn;
        let mut den = dn;
        let width = nexp.len().max(dexp.len());
        for i in 0..width {
            let a = nexp.get(i).copied().unwrap_or(0) as i64;
            let b = dexp.get(i).copied().unwrap_or(0) as i64;
            if a == b {
                continue;
            }
            let Some(img) = s.get(Var(i as u32)) else {
                continue;
            };
            if img.den.is_one() {
                continue;
            }
            if b > a {
                num = &num * &img.den.pow((b - a) as u32);
            } else {
                den = &den * &img.den.pow((a - b) as u32);
            }
        }
        Ok(Rf::normalize(num, den, false))
    }

    /// Evaluates in any [`Scalar`] type.
    pub fn eval<T: Scalar>(
        &self,
        value: &dyn Fn(Var) -> Option<T>,
        name: &dyn Fn(Var) -> String,
    ) -> Result<T, FieldError> {
        let d = self.den.eval(value, name)?;
        if d.is_zero() {
            return Err(FieldError::Pole);
        }
        Ok(self.num.eval(value, name)? / d)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &HashMap<Var, BigRational>) -> Result<BigRational, FieldError> {
        self.eval(&|v| point.get(&v).cloned(), &|v| format!("#{}", v.0))
    }

    pub fn eval_f64(&self, point: &HashMap<Var, f64>) -> Result<f64, FieldError> {
        self.eval(&|v| point.get(&v).copied(), &|v| format!("#{}", v.0))
    }
}

/// `gcd(a, b)`, skipping the computation when either side is constant.
fn common_factor(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    gcd(a, b)
}

/// `(a / g, b / g)` for a common factor `g`.
fn cancel(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if a == b {
        return (Poly::one(), Poly::one());
    }
    let g = common_factor(a, b);
    if g.is_constant() {
        return (a.clone(), b.clone());
    }
    (
        a.div_exact(&g).expect("gcd divides"),
        b.div_exact(&g).expect("gcd divides"),
    )
}

/// Numerator of `p` after substitution over the common denominator
/// `prod_v q_v^{d_v}`, together with the exponents `d_v`.
fn subst_poly(p: &Poly, s: &Substitution) -> (Poly, Vec<u32>) {
    let maxe = p.max_exponents();
    let mut exps = vec![0u32; maxe.len()];
    // Per variable: (numerator powers, denominator powers) when substituted.
    let mut num_pow: Vec<Vec<Poly>> = vec![Vec::new(); maxe.len()];
    let mut den_pow: Vec<Vec<Poly>> = vec![Vec::new(); maxe.len()];
    for (i, &e) in maxe.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let Some(img) = s.get(Var(i as u32)) else {
            continue;
        };
        num_pow[i] = powers(&img.num, e);
        if !img.den.is_one() {
            den_pow[i] = powers(&img.den, e);
            exps[i] = e;
        }
    }
    let mut parts: Vec<Poly> = Vec::with_capacity(p.nterms());
    for (m, c) in p.terms() {
        let mut keep = Monomial::one();
        let mut factors: Vec<&Poly> = Vec::new();
        for (v, e) in m.iter() {
            let i = v.index();
            if num_pow[i].is_empty() {
                keep = keep.mul(&Monomial::var(v, e));
            } else {
                factors.push(&num_pow[i][e as usize]);
            }
        }
        for (i, &d) in exps.iter().enumerate() {
            if d > 0 {
                let k = d - m.exp(Var(i as u32));
                if k > 0 {
                    factors.push(&den_pow[i][k as usize]);
                }
            }
        }
        factors.sort_by_key(|f| f.nterms());
        let mut t = Poly::term(keep, c.clone());
        for f in factors {
            t = &t * f;
        }
        parts.push(t);
    }
    (sum_balanced(parts), exps)
}

fn powers(p: &Poly, e: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(e as usize + 1);
    out.push(Poly::one());
    for k in 1..=e as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

fn sum_balanced(mut parts: Vec<Poly>) -> Poly {
    if parts.is_empty() {
        return Poly::zero();
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(&a + &b),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop().unwrap()
}

/// Variable images for [`Rf::substitute`], indexed by variable id.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    images: Vec<Option<Rf>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: Var, image: Rf) {
        let i = v.index();
        if self.images.len() <= i {
            self.images.resize(i + 1, None);
        }
        self.images[i] = Some(image);
    }

    pub fn with(mut self, v: Var, image: Rf) -> Self {
        self.set(v, image);
        self
    }

    pub fn get(&self, v: Var) -> Option<&Rf> {
        self.images.get(v.index()).and_then(|o| o.as_ref())
    }

    pub fn is_empty(&self) -> bool {
        self.images.iter().all(|o| o.is_none())
    }
}

impl PartialEq for Rf {
    fn eq(&self, other: &Self) -> bool {
        self.rf_eq(other)
    }
}

impl Eq for Rf {}

impl From<Poly> for Rf {
    fn from(p: Poly) -> Self {
        Rf::from_poly(p)
    }
}

impl From<Var> for Rf {
    fn from(v: Var) -> Self {
        Rf::var(v)
    }
}

impl From<i64> for Rf {
    fn from(c: i64) -> Self {
        Rf::constant(c)
    }
}

impl Add<&Rf> for &Rf {
    type Output = Rf;
    fn add(self, rhs: &Rf) -> Rf {
        self.add_impl(rhs, false)
    }
}

impl Sub<&Rf> for &Rf {
    type Output = Rf;
    fn sub(self, rhs: &Rf) -> Rf {
        self.add_impl(rhs, true)
    }
}

impl Mul<&Rf> for &Rf {
    type Output = Rf;
    fn mul(self, rhs: &Rf) -> Rf {
        self.mul_parts(&rhs.num, &rhs.den)
    }
}

/// Panics on division by the zero function; see [`Rf::try_div`].
impl Div<&Rf> for &Rf {
    type Output = Rf;
    fn div(self, rhs: &Rf) -> Rf {
        self.try_div(rhs).expect("division by the zero function")
    }
}

impl Neg for &Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        Rf {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Rf> for Rf {
            type Output = Rf;
            fn $f(self, rhs: Rf) -> Rf {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Rf> for Rf {
            type Output = Rf;
            fn $f(self, rhs: &Rf) -> Rf {
                (&self).$f(rhs)
            }
        }
        impl $tr<Rf> for &Rf {
            type Output = Rf;
            fn $f(self, rhs: Rf) -> Rf {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

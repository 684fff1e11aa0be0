//! Multivariate GCD over the integers.
//!
//! Strip integer and monomial content, eliminate variables that occur in
//! only one argument by taking contents, and short-circuit coprime inputs
//! with a cheap modular image test in every variable. When one argument
//! divides the other it is the answer. What remains goes to
//! the modular algorithm, with a subresultant PRS as the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modgcd::gcd_modular;
use super::{Poly, Var};

const PRIME: u64 = (1 << 61) - 1;

/// Greatest common divisor, normalized to a positive leading coefficient.
/// Includes the gcd of the integer contents and the common monomial factor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive().scale(&b.content());
    }
    if b.is_zero() {
        return a.primitive().scale(&a.content());
    }
    let ca = a.content();
    let cb = b.content();
    let ic = ca.gcd(&cb);
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mc = ma.gcd(&mb);
    let pa = a.div_monomial(&ma).primitive();
    let pb = b.div_monomial(&mb).primitive();
    gcd_primitive(pa, pb).mul_term(&mc, &ic)
}

/// Both inputs have unit content, no monomial factor and positive leading
/// coefficient.
fn gcd_primitive(mut a: Poly, mut b: Poly) -> Poly {
    loop {
        if a.is_constant() || b.is_constant() || a.is_monomial() || b.is_monomial() {
            return Poly::one();
        }
        if a == b {
            return a;
        }
        let va = a.vars();
        let vb = b.vars();
        if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
            a = content_in(&a, v).primitive();
            continue;
        }
        if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
            b = content_in(&b, v).primitive();
            continue;
        }
        break;
    }
    let (small, big) = if a.nterms() <= b.nterms() { (&a, &b) } else { (&b, &a) };
    if degrees_fit(small, big) && big.div_exact(small).is_some() {
        return small.clone();
    }
    let vars = a.vars();
    if coprime_by_images(&a, &b, &vars) {
        return Poly::one();
    }
    if let Some(g) = gcd_modular(&a, &b, &vars) {
        return g;
    }
    gcd_prs(a, b, &vars)
}

/// Whether `small` has no larger degree than `big` in any variable.
fn degrees_fit(small: &Poly, big: &Poly) -> bool {
    let (ds, db) = (small.max_exponents(), big.max_exponents());
    ds.iter()
        .enumerate()
        .all(|(i, &d)| d == 0 || db.get(i).is_some_and(|&e| d <= e))
}

/// Recursive subresultant PRS; slow on large inputs but independent of the
/// modular machinery.
fn gcd_prs(a: Poly, b: Poly, vars: &[Var]) -> Poly {
    let main = *vars
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v.0))
        .expect("nonconstant input has a variable");

    let ua = a.to_univariate(main);
    let ub = b.to_univariate(main);
    let conta = content_of(&ua);
    let contb = content_of(&ub);
    let c = gcd(&conta, &contb);
    let pa: Vec<Poly> = ua.iter().map(|p| exact(p, &conta)).collect();
    let pb: Vec<Poly> = ub.iter().map(|p| exact(p, &contb)).collect();
    let g = subresultant(pa, pb);
    let gc = content_of(&g);
    let g: Vec<Poly> = g.iter().map(|p| exact(p, &gc)).collect();
    let g = Poly::from_univariate(main, &g).primitive();
    (&c * &g).primitive()
}

fn exact(p: &Poly, d: &Poly) -> Poly {
    p.div_exact(d).expect("content divides every coefficient")
}

/// Content of a polynomial with respect to `v`.
pub fn content_in(p: &Poly, v: Var) -> Poly {
    content_of(&p.to_univariate(v))
}

fn content_of(coeffs: &[Poly]) -> Poly {
    let mut nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    // Cheapest coefficients first so the running gcd shrinks early.
    nonzero.sort_by_key(|c| c.nterms());
    let mut acc = match nonzero.first() {
        Some(c) => c.primitive(),
        None => return Poly::zero(),
    };
    for c in &nonzero[1..] {
        if acc.is_constant() {
            break;
        }
        acc = gcd(&acc, c);
    }
    if acc.is_constant() {
        // Inputs here are integer-primitive as a whole, but individual
        // coefficients need not be; the integer part is handled by the caller.
        let ic = nonzero
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.content()));
        return Poly::constant(ic);
    }
    let ic = nonzero
        .iter()
        .fold(BigInt::zero(), |g, c| g.gcd(&c.content()));
    acc.primitive().scale(&ic)
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder of `a` by `b` in R[x].
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.to_vec();
    let mut e = a.len() as i64 - b.len() as i64 + 1;
    trim(&mut r);
    while !r.is_empty() && r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &(&lr * bk);
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Subresultant PRS; inputs primitive in the main variable. Returns a
/// (not necessarily primitive) gcd.
fn subresultant(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_empty() {
        return a;
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return vec![Poly::one()];
        }
        let divisor = &g * &h.pow(delta);
        let next: Vec<Poly> = match r.iter().map(|c| c.div_exact(&divisor)).collect() {
            Some(v) => v,
            // Not expected; falling back to the primitive PRS keeps the
            // result correct.
            None => {
                let c = content_of(&r);
                r.iter().map(|p| exact(p, &c)).collect()
            }
        };
        a = std::mem::replace(&mut b, next);
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .unwrap_or_else(|| g.pow(d)),
        };
    }
}

fn to_mod(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(PRIME)).to_u64().unwrap()
}

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

fn eval_univariate_mod(p: &Poly, v: Var, point: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = to_mod(c);
        for (w, e) in m.iter() {
            if w != v {
                t = mulmod(t, powmod(point[w.index()], e as u64));
            }
        }
        let k = m.exp(v) as usize;
        out[k] = addmod(out[k], t);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    while !b.is_empty() {
        // a mod b
        let inv = powmod(*b.last().unwrap(), PRIME - 2);
        while a.len() >= b.len() {
            let q = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (k, bk) in b.iter().enumerate() {
                let sub = mulmod(q, *bk);
                a[k + shift] = addmod(a[k + shift], PRIME - sub);
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True only if the gcd is certainly constant: in every variable, an image
/// with preserved leading coefficients has a constant univariate gcd.
fn coprime_by_images(a: &Poly, b: &Poly, vars: &[Var]) -> bool {
    let width = vars.iter().map(|v| v.index() + 1).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0f_fee5);
    for &v in vars {
        let da = a.degree_in(v) as usize;
        let db = b.degree_in(v) as usize;
        let mut decided = false;
        for _ in 0..3 {
            let point: Vec<u64> = (0..width).map(|_| rng.random_range(2..PRIME)).collect();
            let ia = eval_univariate_mod(a, v, &point);
            let ib = eval_univariate_mod(b, v, &point);
            if ia.len() != da + 1 || ib.len() != db + 1 {
                continue;
            }
            if gcd_degree_mod(ia, ib) > 0 {
                return false;
            }
            decided = true;
            break;
        }
        if !decided {
            return false;
        }
    }
    true
}

/// Cofactors `(a / g, b / g)` together with `g = gcd(a, b)`.
pub fn gcd_cofactors(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let g = gcd(a, b);
    if g.is_one() {
        return (g, a.clone(), b.clone());
    }
    let ca = a.div_exact(&g).expect("gcd divides its arguments");
    let cb = b.div_exact(&g).expect("gcd divides its arguments");
    (g, ca, cb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    fn c(k: i64) -> Poly {
        Poly::constant(k)
    }

    #[test]
    fn coprime_inputs() {
        let a = &x(0) + &c(1);
        let b = &x(0) - &c(1);
        assert_eq!(gcd(&a, &b), Poly::one());
        assert_eq!(gcd(&x(0), &x(1)), Poly::one());
    }

    #[test]
    fn common_factor_recovered() {
        let common = &(&x(0) * &x(1)) + &(&x(2) * &c(3)) - &c(1);
        let a = &common * &(&x(0) + &x(2));
        let b = &common * &(&x(1).pow(2) - &x(0));
        assert_eq!(gcd(&a, &b), common);
    }

    #[test]
    fn contents_and_monomials() {
        let a = (&x(0) * &x(1)).scale(&BigInt::from(6));
        let b = (&x(0).pow(2) * &(&x(1) + &c(1))).scale(&BigInt::from(-4));
        assert_eq!(gcd(&a, &b), x(0).scale(&BigInt::from(2)));
        assert_eq!(gcd(&Poly::zero(), &b), -&b);
    }

    #[test]
    fn exclusive_variable_goes_through_content() {
        // (x0 + 1) * (x1 + x2) and (x0 + 1) * x3 + (x0 + 1)
        let f = &x(0) + &c(1);
        let a = &f * &(&x(1) + &x(2));
        let b = &f * &(&x(3) + &c(1));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn modular_path_agrees_with_prs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vars: Vec<Var> = (0..4).map(Var).collect();
        let mut random = || {
            let mut p = &(&(&x(0) * &x(1)) * &(&x(2) * &x(3))) + &c(1);
            for _ in 0..4 {
                let e: Vec<u32> = (0..4).map(|_| rng.random_range(0..3)).collect();
                let m = crate::symfield::Monomial::from_exponents(&e);
                p = &p + &Poly::term(m, BigInt::from(rng.random_range(-5..=5)));
            }
            p
        };
        for _ in 0..10 {
            let (p, q, r) = (random(), random(), random());
            let a = (&p * &q).primitive();
            let b = (&p * &r).primitive();
            let modular = gcd_modular(&a, &b, &vars).expect("primes suffice");
            assert_eq!(modular, gcd_prs(a.clone(), b.clone(), &vars));
            assert!(modular.div_exact(&p.primitive()).is_some());
        }
    }

    #[test]
    fn higher_degree_gcd() {
        let g = &(&x(0).pow(2) * &x(1)) - &(&x(1).pow(3) + &c(2));
        let a = &g * &(&(&x(0) * &x(1)) + &c(5));
        let b = &g * &g;
        assert_eq!(gcd(&a, &b), g);
        let (gg, ca, _) = gcd_cofactors(&a, &b);
        assert_eq!(&gg * &ca, a);
    }
}

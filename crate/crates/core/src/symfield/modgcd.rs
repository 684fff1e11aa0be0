//! Brown's modular GCD. Images modulo word-sized primes are computed by
//! dense evaluation and Newton interpolation in all but one variable, lifted
//! by Chinese remaindering, and accepted only after trial division over the
//! integers.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Monomial, Poly, Var};

/// Primes just below 2^62.
pub(crate) const PRIMES: [u64; 8] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
];

/// Exponent vectors in a fixed variable order; `Vec` ordering is lex with
/// the first variable most significant, so the leading term is the last key.
type Exps = Vec<u32>;
type MPoly = BTreeMap<Exps, u64>;
/// Dense univariate polynomial, index = degree, no trailing zeros.
type UPoly = Vec<u64>;

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn reduce(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.0)).to_u64().expect("residue fits")
    }

    // -- univariate --

    fn trim(v: &mut UPoly) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn u_eval(self, a: &[u64], r: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, r), c))
    }

    fn u_mul(self, a: &[u64], b: &[u64]) -> UPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Self::trim(&mut out);
        out
    }

    fn u_scale(self, a: &[u64], c: u64) -> UPoly {
        let mut out: UPoly = a.iter().map(|&x| self.mul(x, c)).collect();
        Self::trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` nonzero.
    fn u_divrem(self, a: &[u64], b: &[u64]) -> (UPoly, UPoly) {
        let mut r = a.to_vec();
        Self::trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), inv);
            q[shift] = c;
            for (k, &bk) in b.iter().enumerate() {
                r[k + shift] = self.sub(r[k + shift], self.mul(c, bk));
            }
            Self::trim(&mut r);
        }
        Self::trim(&mut q);
        (q, r)
    }

    fn u_monic(self, a: &[u64]) -> UPoly {
        match a.last() {
            Some(&l) => self.u_scale(a, self.inv(l)),
            None => Vec::new(),
        }
    }

    fn u_gcd(self, a: &[u64], b: &[u64]) -> UPoly {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        Self::trim(&mut a);
        Self::trim(&mut b);
        while !b.is_empty() {
            let (_, r) = self.u_divrem(&a, &b);
            a = std::mem::replace(&mut b, r);
        }
        self.u_monic(&a)
    }

    // -- multivariate --

    /// Leading coefficient in lex order.
    fn lead(a: &MPoly) -> (&Exps, u64) {
        let (e, &c) = a.last_key_value().expect("nonzero polynomial");
        (e, c)
    }

    fn m_monic(self, a: MPoly) -> MPoly {
        let inv = self.inv(Self::lead(&a).1);
        a.into_iter().map(|(e, c)| (e, self.mul(c, inv))).collect()
    }

    /// Exact divisibility test in Z_p[x] by lex division.
    fn m_divides(self, d: &MPoly, a: &MPoly) -> bool {
        let (dl, dc) = Self::lead(d);
        let dl = dl.clone();
        let dinv = self.inv(dc);
        let mut rem = a.clone();
        while let Some((m, c)) = rem.pop_last() {
            if m.iter().zip(&dl).any(|(x, y)| x < y) {
                return false;
            }
            let qm: Exps = m.iter().zip(&dl).map(|(x, y)| x - y).collect();
            let qc = self.mul(c, dinv);
            for (e, &t) in d.iter().rev().skip(1) {
                let key: Exps = e.iter().zip(&qm).map(|(x, y)| x + y).collect();
                let delta = self.mul(qc, t);
                match rem.entry(key) {
                    Entry::Occupied(mut o) => {
                        let v = self.sub(*o.get(), delta);
                        if v == 0 {
                            o.remove();
                        } else {
                            *o.get_mut() = v;
                        }
                    }
                    Entry::Vacant(o) => {
                        o.insert(self.sub(0, delta));
                    }
                }
            }
        }
        true
    }

    /// Splits off the last variable: `x`-exponents to coefficient in Z_p[z].
    fn split_last(a: &MPoly, k: usize) -> BTreeMap<Exps, UPoly> {
        let mut out: BTreeMap<Exps, UPoly> = BTreeMap::new();
        for (e, &c) in a {
            let d = e[k - 1] as usize;
            let slot = out.entry(e[..k - 1].to_vec()).or_default();
            if slot.len() <= d {
                slot.resize(d + 1, 0);
            }
            slot[d] = c;
        }
        out
    }

    fn join_last(s: &BTreeMap<Exps, UPoly>) -> MPoly {
        let mut out = MPoly::new();
        for (x, up) in s {
            for (d, &c) in up.iter().enumerate() {
                if c != 0 {
                    let mut e = x.clone();
                    e.push(d as u32);
                    out.insert(e, c);
                }
            }
        }
        out
    }

    /// Monic gcd of nonzero `a`, `b` in Z_p[x_0, .., x_{k-1}].
    fn gcd(self, a: &MPoly, b: &MPoly, k: usize, rng: &mut ChaCha8Rng) -> MPoly {
        if k == 0 {
            return MPoly::from([(Vec::new(), 1)]);
        }
        if k == 1 {
            let ua = Self::split_last(a, 1).remove(&Vec::new()).unwrap_or_default();
            let ub = Self::split_last(b, 1).remove(&Vec::new()).unwrap_or_default();
            let g = self.u_gcd(&ua, &ub);
            return Self::join_last(&BTreeMap::from([(Vec::new(), g)]));
        }
        let mut sa = Self::split_last(a, k);
        let mut sb = Self::split_last(b, k);
        let ca = sa.values().fold(Vec::new(), |g, c| self.u_gcd(&g, c));
        let cb = sb.values().fold(Vec::new(), |g, c| self.u_gcd(&g, c));
        let c = self.u_gcd(&ca, &cb);
        for v in sa.values_mut() {
            *v = self.u_divrem(v, &ca).0;
        }
        for v in sb.values_mut() {
            *v = self.u_divrem(v, &cb).0;
        }
        let zero_x = vec![0u32; k - 1];
        if sa.keys().all(|x| *x == zero_x) || sb.keys().all(|x| *x == zero_x) {
            return self.m_monic(Self::join_last(&BTreeMap::from([(zero_x, c)])));
        }
        let pa = Self::join_last(&sa);
        let pb = Self::join_last(&sb);
        let lca = sa.last_key_value().unwrap().1.clone();
        let lcb = sb.last_key_value().unwrap().1.clone();
        let g = self.u_gcd(&lca, &lcb);
        let dza = sa.values().map(|v| v.len() - 1).max().unwrap();
        let dzb = sb.values().map(|v| v.len() - 1).max().unwrap();
        let bound = g.len() - 1 + dza.min(dzb);

        let mut h: BTreeMap<Exps, UPoly> = BTreeMap::new();
        let mut lm: Option<Exps> = None;
        let mut q: UPoly = vec![1];
        let mut npts = 0usize;
        loop {
            let r = rng.random_range(1..self.0);
            if self.u_eval(&lca, r) == 0 || self.u_eval(&lcb, r) == 0 {
                continue;
            }
            let eval = |s: &BTreeMap<Exps, UPoly>| -> MPoly {
                s.iter()
                    .filter_map(|(x, up)| {
                        let v = self.u_eval(up, r);
                        (v != 0).then(|| (x.clone(), v))
                    })
                    .collect()
            };
            let cr = self.gcd(&eval(&sa), &eval(&sb), k - 1, rng);
            let lm_r = Self::lead(&cr).0.clone();
            let gr = self.u_eval(&g, r);
            let restart = match &lm {
                None => true,
                Some(cur) => match lm_r.cmp(cur) {
                    Ordering::Less => true,
                    Ordering::Greater => continue,
                    Ordering::Equal => false,
                },
            };
            if restart {
                h = cr.into_iter().map(|(x, v)| (x, vec![self.mul(v, gr)])).collect();
                lm = Some(lm_r);
                q = vec![self.0 - r, 1];
                npts = 1;
                continue;
            }
            let qinv = self.inv(self.u_eval(&q, r));
            let mut changed = false;
            let keys: Vec<Exps> = h.keys().chain(cr.keys()).cloned().collect();
            for x in keys {
                let target = cr.get(&x).map_or(0, |&v| self.mul(v, gr));
                let old = h.entry(x).or_default();
                let diff = self.sub(target, self.u_eval(old, r));
                if diff != 0 {
                    changed = true;
                    let step = self.u_scale(&q, self.mul(diff, qinv));
                    if old.len() < step.len() {
                        old.resize(step.len(), 0);
                    }
                    for (o, s) in old.iter_mut().zip(&step) {
                        *o = self.add(*o, *s);
                    }
                    Self::trim(old);
                }
            }
            h.retain(|_, v| !v.is_empty());
            q = self.u_mul(&q, &[self.0 - r, 1]);
            npts += 1;
            if changed && npts <= bound {
                continue;
            }
            let cont = h.values().fold(Vec::new(), |acc, v| self.u_gcd(&acc, v));
            let pp: BTreeMap<Exps, UPoly> = h.iter().map(|(x, v)| (x.clone(), self.u_divrem(v, &cont).0)).collect();
            let cand = self.m_monic(Self::join_last(&pp));
            if npts > bound || (self.m_divides(&cand, &pa) && self.m_divides(&cand, &pb)) {
                let with_c: BTreeMap<Exps, UPoly> = pp.iter().map(|(x, v)| (x.clone(), self.u_mul(v, &c))).collect();
                return self.m_monic(Self::join_last(&with_c));
            }
        }
    }
}

fn to_exps(m: &Monomial, vars: &[Var]) -> Exps {
    vars.iter().map(|&v| m.exp(v)).collect()
}

fn from_exps(e: &[u32], vars: &[Var]) -> Monomial {
    let width = vars.iter().map(|v| v.index() + 1).max().unwrap_or(0);
    let mut out = vec![0u32; width];
    for (&v, &x) in vars.iter().zip(e) {
        out[v.index()] = x;
    }
    Monomial::from_exponents(&out)
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

/// Gcd of primitive `a`, `b` whose variables are exactly `vars`. Returns
/// `None` when the primes run out without a verified result.
pub(crate) fn gcd_modular(a: &Poly, b: &Poly, vars: &[Var]) -> Option<Poly> {
    // Highest-degree variable first: it is handled by the univariate
    // Euclid at the bottom, and the interpolated ones should be cheap.
    let mut order = vars.to_vec();
    order.sort_by_key(|&v| std::cmp::Reverse((a.degree_in(v).max(b.degree_in(v)), v.0)));
    let k = order.len();
    let za: BTreeMap<Exps, BigInt> = a.terms().iter().map(|(m, c)| (to_exps(m, &order), c.clone())).collect();
    let zb: BTreeMap<Exps, BigInt> = b.terms().iter().map(|(m, c)| (to_exps(m, &order), c.clone())).collect();
    let lca = za.last_key_value()?.1;
    let lcb = zb.last_key_value()?.1;
    let gamma = lca.gcd(lcb);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6cd_b0a5);

    let mut acc: BTreeMap<Exps, BigInt> = BTreeMap::new();
    let mut modulus = BigInt::one();
    let mut acc_lm: Option<Exps> = None;
    for &p in &PRIMES {
        let fp = Fp(p);
        if fp.reduce(lca) == 0 || fp.reduce(lcb) == 0 {
            continue;
        }
        let ma: MPoly = za.iter().map(|(e, c)| (e.clone(), fp.reduce(c))).filter(|(_, c)| *c != 0).collect();
        let mb: MPoly = zb.iter().map(|(e, c)| (e.clone(), fp.reduce(c))).filter(|(_, c)| *c != 0).collect();
        let g = fp.gcd(&ma, &mb, k, &mut rng);
        let lm = Fp::lead(&g).0.clone();
        if lm.iter().all(|&x| x == 0) {
            return Some(Poly::one());
        }
        let gm = fp.reduce(&gamma);
        let g: MPoly = g.into_iter().map(|(e, c)| (e, fp.mul(c, gm))).collect();
        let restart = match &acc_lm {
            None => true,
            Some(cur) => match lm.cmp(cur) {
                Ordering::Less => true,
                Ordering::Greater => continue,
                Ordering::Equal => false,
            },
        };
        let pb = BigInt::from(p);
        if restart {
            acc = g.into_iter().map(|(e, c)| (e, BigInt::from(c))).collect();
            modulus = pb;
            acc_lm = Some(lm);
        } else {
            // x = a + M * ((b - a) M^-1 mod p)
            let minv = fp.inv(fp.reduce(&modulus));
            let keys: Vec<Exps> = acc.keys().chain(g.keys()).cloned().collect();
            for e in keys {
                let old = acc.get(&e).cloned().unwrap_or_else(BigInt::zero);
                let target = g.get(&e).copied().unwrap_or(0);
                let t = fp.mul(fp.sub(target, fp.reduce(&old)), minv);
                acc.insert(e, old + &modulus * BigInt::from(t));
            }
            modulus *= pb;
        }
        let cand = Poly::from_terms(
            acc.iter()
                .map(|(e, c)| (from_exps(e, &order), symmetric(c, &modulus)))
                .filter(|(_, c)| !c.is_zero()),
        )
        .primitive();
        if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
            return Some(cand);
        }
    }
    None
}
